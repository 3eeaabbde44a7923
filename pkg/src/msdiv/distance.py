"""Pairwise distance matrices and the negative-type check."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

KERNELS = ("euclidean", "manhattan", "cosine", "jaccard")


class InputError(ValueError):
    """Malformed input data. Carries an optional 1-based line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class PointSet:
    points: np.ndarray
    ids: tuple

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InputError(f"expected a non-empty 2-d array of points, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise InputError("point coordinates must be finite")
        ids = tuple(str(i) for i in self.ids)
        if len(ids) != pts.shape[0]:
            raise InputError(f"{len(ids)} ids for {pts.shape[0]} points")
        if len(set(ids)) != len(ids):
            raise InputError("point ids must be unique")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "ids", ids)

    @classmethod
    def from_list(cls, points: Sequence[Sequence[float]], ids: Optional[Sequence] = None) -> "PointSet":
        rows = [list(p) for p in points]
        if rows and len({len(r) for r in rows}) != 1:
            raise InputError("dimension mismatch between points")
        if ids is None:
            ids = [str(i) for i in range(len(rows))]
        return cls(np.array(rows, dtype=float), tuple(ids))

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class DistanceMatrix:
    """Dense symmetric nonnegative matrix with zero diagonal (read-only)."""

    entries: np.ndarray
    ids: tuple = field(default=())

    def __post_init__(self):
        D = np.array(self.entries, dtype=float)
        if D.ndim != 2 or D.shape[0] != D.shape[1] or D.shape[0] < 1:
            raise InputError(f"distance matrix must be square and non-empty, got shape {D.shape}")
        if not np.all(np.isfinite(D)):
            raise InputError("distance matrix entries must be finite")
        if np.any(np.diag(D) != 0):
            raise InputError("distance matrix must have a zero diagonal")
        if np.any(D < 0):
            raise InputError("distances must be nonnegative")
        if not np.array_equal(D, D.T):
            raise InputError("distance matrix must be symmetric")
        D.setflags(write=False)
        object.__setattr__(self, "entries", D)
        ids = tuple(str(i) for i in self.ids) if self.ids else tuple(str(i) for i in range(D.shape[0]))
        if len(ids) != D.shape[0] or len(set(ids)) != len(ids):
            raise InputError("ids must be unique and match the matrix size")
        object.__setattr__(self, "ids", ids)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, key):
        return self.entries[key]


def _pairwise(X: np.ndarray, kernel: str) -> np.ndarray:
    n, q = X.shape
    # accumulate one coordinate at a time to keep memory at O(n^2)
    if kernel == "euclidean":
        acc = np.zeros((n, n))
        for j in range(q):
            diff = X[:, j, None] - X[None, :, j]
            acc += diff * diff
        return np.sqrt(acc)
    if kernel == "manhattan":
        acc = np.zeros((n, n))
        for j in range(q):
            acc += np.abs(X[:, j, None] - X[None, :, j])
        return acc
    if kernel == "cosine":
        norms = np.linalg.norm(X, axis=1)
        if np.any(norms == 0):
            bad = int(np.flatnonzero(norms == 0)[0])
            raise InputError(f"cosine distance undefined for zero vector (element {bad})")
        U = X / norms[:, None]
        return 1.0 - np.clip(U @ U.T, -1.0, 1.0)
    if kernel == "jaccard":
        if np.any(X < 0):
            raise InputError("jaccard distance needs nonnegative coordinates")
        mins = np.zeros((n, n))
        maxs = np.zeros((n, n))
        for j in range(q):
            mins += np.minimum(X[:, j, None], X[None, :, j])
            maxs += np.maximum(X[:, j, None], X[None, :, j])
        sim = np.divide(mins, maxs, out=np.zeros_like(mins), where=maxs > 0)
        return 1.0 - sim
    raise InputError(f"unknown kernel {kernel!r}; expected one of {', '.join(KERNELS)}")


def build_distance_matrix(points: PointSet, kernel: str = "euclidean") -> DistanceMatrix:
    D = _pairwise(points.points, kernel)
    # symmetrize exactly and clear round-off on the diagonal
    D = np.maximum((D + D.T) / 2.0, 0.0)
    np.fill_diagonal(D, 0.0)
    return DistanceMatrix(D, points.ids)


@dataclass(frozen=True)
class NegativeTypeResult:
    holds: bool
    witness: Optional[np.ndarray]
    max_eigenvalue: float


def verify_negative_type(D: DistanceMatrix, tol: float = 1e-9) -> NegativeTypeResult:
    """Decide whether ``x^T D x <= 0`` for every zero-sum vector ``x``.

    The form is restricted to the zero-sum subspace by centering
    ``P D P`` with ``P = I - 11^T/n``; it is negative semidefinite there
    iff its largest eigenvalue is at most ``tol * max(1, max entry)``.
    On failure the top eigenvector (zero-sum, scaled so its largest
    absolute coordinate is 1 and its first nonzero coordinate positive)
    is returned as a witness.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    M = D.entries
    n = M.shape[0]
    if n == 1:
        return NegativeTypeResult(True, None, 0.0)
    P = np.eye(n) - np.full((n, n), 1.0 / n)
    C = P @ M @ P
    C = (C + C.T) / 2.0
    vals, vecs = np.linalg.eigh(C)
    top = float(vals[-1])
    threshold = tol * max(1.0, float(M.max()))
    if top <= threshold:
        return NegativeTypeResult(True, None, top)
    x = P @ vecs[:, -1]
    x = x / np.abs(x).max()
    lead = x[np.flatnonzero(np.abs(x) > 1e-12)[0]]
    if lead < 0:
        x = -x
    # snap to a clean representation when the witness is numerically integral
    snapped = np.round(x, 9)
    if float(snapped @ M @ snapped) > 0 and abs(snapped.sum()) < 1e-9:
        x = snapped
    return NegativeTypeResult(False, x, top)


def load_points_csv(path) -> PointSet:
    """Read ``id,x1,...,xq`` rows (header required)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError("empty point file", line=1) from None
        if len(header) < 2 or header[0].strip().lower() != "id":
            raise InputError("header must be 'id,x1,...,xq'", line=1)
        dim = len(header) - 1
        ids, rows = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != dim + 1:
                raise InputError(f"expected {dim + 1} fields, got {len(row)}", line=lineno)
            try:
                rows.append([float(c) for c in row[1:]])
            except ValueError as exc:
                raise InputError(f"bad coordinate: {exc}", line=lineno) from None
            ids.append(row[0].strip())
    if not rows:
        raise InputError("no points in file", line=2)
    if len(set(ids)) != len(ids):
        seen = set()
        for lineno, i in enumerate(ids, start=2):
            if i in seen:
                raise InputError(f"duplicate id {i!r}", line=lineno)
            seen.add(i)
    return PointSet(np.array(rows), tuple(ids))


def load_matrix(path) -> DistanceMatrix:
    """Read the precomputed format: first line n, then n rows of n reals."""
    with open(path) as fh:
        lines = [(i, ln) for i, ln in enumerate(fh, start=1) if ln.strip()]
    if not lines:
        raise InputError("empty matrix file", line=1)
    first_line, first = lines[0]
    try:
        n = int(first.strip())
    except ValueError:
        raise InputError(f"first line must be the element count, got {first.strip()!r}", line=first_line) from None
    if n < 1:
        raise InputError("element count must be positive", line=first_line)
    body = lines[1:]
    if len(body) != n:
        raise InputError(f"expected {n} matrix rows, found {len(body)}",
                         line=body[-1][0] if body else first_line)
    rows = []
    for lineno, ln in body:
        parts = ln.split()
        if len(parts) != n:
            raise InputError(f"expected {n} entries, got {len(parts)}", line=lineno)
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise InputError(f"bad entry: {exc}", line=lineno) from None
    M = np.array(rows)
    for (lineno, _), i in zip(body, range(n)):
        if M[i, i] != 0:
            raise InputError("diagonal entry must be 0", line=lineno)
        if np.any(M[i] < 0):
            raise InputError("negative distance", line=lineno)
        j = np.flatnonzero(M[i] != M[:, i])
        if j.size:
            raise InputError(f"matrix not symmetric at column {int(j[0]) + 1}", line=lineno)
    return DistanceMatrix(M)


def save_matrix(D: DistanceMatrix, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{D.n}\n")
        for row in D.entries:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")
