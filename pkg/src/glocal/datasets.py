"""Sparse-row datasets: LIBSVM text I/O and seeded synthetic generators."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from .errors import InputError, ParseError


@dataclass
class Dataset:
    """Rows of (indices, values) pairs with 0-based, strictly increasing indices."""

    rows: List[Tuple[np.ndarray, np.ndarray]]
    labels: np.ndarray
    dim: int
    planted: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=float).reshape(-1)
        if len(self.rows) != self.labels.size:
            raise InputError("rows and labels disagree in length")
        for idx, _ in self.rows:
            if idx.size and (idx[0] < 0 or idx[-1] >= self.dim):
                raise InputError("feature index outside the declared dimension")
            if idx.size > 1 and np.any(np.diff(idx) <= 0):
                raise InputError("duplicate or unsorted indices in a row")

    @property
    def n(self) -> int:
        return len(self.rows)

    def to_dense(self) -> np.ndarray:
        X = np.zeros((self.n, self.dim))
        for i, (idx, val) in enumerate(self.rows):
            X[i, idx] = val
        return X

    @classmethod
    def from_dense(cls, X, labels, planted=None) -> "Dataset":
        X = np.atleast_2d(np.asarray(X, dtype=float))
        rows = [(np.arange(X.shape[1]), X[i].copy()) for i in range(X.shape[0])]
        return cls(rows, labels, X.shape[1], planted)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.labels, other.labels)
            and len(self.rows) == len(other.rows)
            and all(np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
                    for a, b in zip(self.rows, other.rows))
        )


def parse_libsvm(text: Union[str, bytes], dim: Optional[int] = None, binary: bool = True) -> Dataset:
    """Parse LIBSVM ``label idx:val ...`` lines (1-based indices in the file).

    With ``binary`` labels are mapped to -1/+1 by sign and zero labels are
    rejected; otherwise labels are kept as real targets.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows, labels = [], []
    max_idx = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            label = float(tokens[0])
        except ValueError:
            raise ParseError(f"bad label {tokens[0]!r}", lineno) from None
        if not np.isfinite(label):
            raise ParseError("non-finite label", lineno)
        if binary:
            if label == 0:
                raise ParseError("zero label in a binary dataset", lineno)
            label = 1.0 if label > 0 else -1.0
        idx, val = [], []
        prev = 0
        for tok in tokens[1:]:
            k, sep, v = tok.partition(":")
            if not sep:
                raise ParseError(f"malformed token {tok!r}", lineno)
            try:
                j = int(k)
                x = float(v)
            except ValueError:
                raise ParseError(f"malformed token {tok!r}", lineno) from None
            if j < 1:
                raise ParseError(f"index {j} is not positive", lineno)
            if j <= prev:
                raise ParseError(f"non-increasing index {j}", lineno)
            if not np.isfinite(x):
                raise ParseError(f"non-finite value in {tok!r}", lineno)
            prev = j
            idx.append(j - 1)
            val.append(x)
        max_idx = max(max_idx, prev)
        rows.append((np.asarray(idx, dtype=np.int64), np.asarray(val, dtype=float)))
        labels.append(label)
    if dim is None:
        dim = max_idx
    elif dim < max_idx:
        raise ParseError(f"index {max_idx} exceeds declared dimension {dim}")
    return Dataset(rows, np.asarray(labels, dtype=float), dim)


def _fmt(x: float) -> str:
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def to_libsvm(data: Dataset) -> str:
    """Serialize with shortest round-trip decimals; parse_libsvm inverts it."""
    out = []
    for label, (idx, val) in zip(data.labels, data.rows):
        lab = {1.0: "+1", -1.0: "-1"}.get(float(label), _fmt(label))
        feats = " ".join(f"{int(j) + 1}:{_fmt(x)}" for j, x in zip(idx, val))
        out.append(f"{lab} {feats}".rstrip())
    return "\n".join(out) + ("\n" if out else "")


def _check_count(name, v):
    if int(v) != v or v < 1:
        raise InputError(f"{name} must be a positive integer")


def gen_separable_logistic(n: int, d: int, margin: float, seed: int) -> Dataset:
    """Gaussian features labelled by a planted unit vector u.

    Rows closer than ``margin`` to the separating hyperplane are pushed out
    along u, so y_i <x_i, u> >= margin for every row.  ``Dataset.planted``
    holds u.
    """
    _check_count("n", n)
    _check_count("d", d)
    if not margin > 0:
        raise InputError("margin must be positive")
    rng = np.random.default_rng(seed)
    u = rng.standard_normal(d)
    u /= np.linalg.norm(u)
    X = rng.standard_normal((n, d))
    s = X @ u
    y = np.where(s >= 0, 1.0, -1.0)
    # aim slightly past the margin so the guarantee survives any summation order
    target = margin * (1.0 + 1e-9)
    for i in np.flatnonzero(y * s < target):
        X[i] += (target - y[i] * s[i]) * y[i] * u
    return Dataset.from_dense(X, y, planted=u)


def gen_realizable_ls(n: int, d: int, seed: int) -> Tuple[Dataset, np.ndarray]:
    """Full-column-rank Gaussian X with targets t = X w_true exactly."""
    _check_count("n", n)
    _check_count("d", d)
    if n < d:
        raise InputError("need n >= d for a full-column-rank design")
    rng = np.random.default_rng(seed)
    while True:
        X = rng.standard_normal((n, d))
        if np.linalg.eigvalsh(X.T @ X)[0] > 1e-6:
            break
    w_true = rng.standard_normal(d)
    t = X @ w_true
    return Dataset.from_dense(X, t), w_true
