"""Finite metric spaces and the magnitude via the weighting equation.

A space is a list of labels plus a symmetric dissimilarity matrix with
zero diagonal and positive off-diagonal entries.  The magnitude at scale t
is sum(w) for any w solving Z w = 1, where Z_ij = exp(-t * d_ij); when no
such w exists the magnitude is undefined and we raise.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .expsum import RATE_ABS_TOL, RATE_REL_TOL

#: residual threshold for declaring the weighting equation inconsistent
RESIDUAL_TOL = 1e-8
#: residual above this (but below RESIDUAL_TOL) triggers a conditioning warning
RESIDUAL_WARN = 1e-10


class MagnitudeUndefined(ArithmeticError):
    """No weighting exists at the requested scale."""


class MetricValidationError(ValueError):
    """Input does not describe a finite metric (dissimilarity) space."""


def _values_close(a: float, b: float) -> bool:
    return abs(a - b) <= RATE_ABS_TOL + RATE_REL_TOL * max(abs(a), abs(b))


@dataclass(frozen=True)
class FiniteMetricSpace:
    labels: tuple[str, ...]
    dist: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float)
        n = len(self.labels)
        if d.shape != (n, n):
            raise MetricValidationError(f"distance matrix shape {d.shape} != ({n}, {n})")
        if not np.allclose(d, d.T, atol=1e-12, rtol=1e-9):
            raise MetricValidationError("distance matrix is not symmetric")
        if np.any(np.diag(d) != 0.0):
            raise MetricValidationError("diagonal must be zero")
        off = d[~np.eye(n, dtype=bool)]
        if off.size and (np.any(off <= 0) or not np.all(np.isfinite(off))):
            raise MetricValidationError("off-diagonal distances must be positive and finite")
        d = (d + d.T) / 2.0
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))

    # -- constructors -----------------------------------------------------

    @staticmethod
    def from_matrix(dist, labels=None, check_triangle: bool = False) -> "FiniteMetricSpace":
        d = np.asarray(dist, dtype=float)
        if labels is None:
            labels = [f"p{i}" for i in range(d.shape[0])]
        X = FiniteMetricSpace(tuple(labels), d)
        if check_triangle:
            X.warn_if_triangle_violated(error=True)
        else:
            X.warn_if_triangle_violated(error=False)
        return X

    @staticmethod
    def from_point_cloud(points, labels=None) -> "FiniteMetricSpace":
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.shape[0] == 0:
            raise MetricValidationError("point cloud is empty")
        diff = pts[:, None, :] - pts[None, :, :]
        d = np.sqrt((diff * diff).sum(axis=-1))
        np.fill_diagonal(d, 0.0)
        if labels is None:
            labels = [f"p{i}" for i in range(len(pts))]
        return FiniteMetricSpace(tuple(labels), d)

    @staticmethod
    def from_graph(adjacency, labels=None) -> "FiniteMetricSpace":
        """Shortest-path metric of a weighted graph given by its adjacency
        matrix (0 off-diagonal = no edge).  The graph must be connected."""
        a = np.asarray(adjacency, dtype=float)
        n = a.shape[0]
        if a.shape != (n, n):
            raise MetricValidationError("adjacency matrix must be square")
        if not np.allclose(a, a.T):
            raise MetricValidationError("adjacency matrix must be symmetric")
        if np.any(a < 0):
            raise MetricValidationError("edge weights must be nonnegative")
        d = np.where(a > 0, a, np.inf)
        np.fill_diagonal(d, 0.0)
        for k in range(n):
            d = np.minimum(d, d[:, k, None] + d[None, k, :])
        if not np.all(np.isfinite(d)):
            raise MetricValidationError("graph is not connected")
        if labels is None:
            labels = [f"v{i}" for i in range(n)]
        return FiniteMetricSpace(tuple(labels), d)

    @staticmethod
    def from_csv(path, kind: str = "matrix") -> "FiniteMetricSpace":
        """Read a space from CSV.

        kind="matrix": header row of labels, then the square distance matrix.
        kind="graph": same layout, entries read as an adjacency matrix.
        kind="euclidean": no header, one point per row.
        """
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(x.strip() for x in r)]
        if not rows:
            raise MetricValidationError(f"{path}: empty CSV")
        if kind == "euclidean":
            pts = [[float(x) for x in row] for row in rows]
            return FiniteMetricSpace.from_point_cloud(pts)
        labels = [x.strip() for x in rows[0]]
        try:
            mat = [[float(x) for x in row] for row in rows[1:]]
        except ValueError as e:
            raise MetricValidationError(f"{path}: malformed matrix entry ({e})") from e
        if len(mat) != len(labels):
            raise MetricValidationError(
                f"{path}: {len(labels)} labels but {len(mat)} matrix rows"
            )
        if kind == "matrix":
            return FiniteMetricSpace.from_matrix(mat, labels)
        if kind == "graph":
            return FiniteMetricSpace.from_graph(mat, labels)
        raise ValueError(f"unknown CSV kind {kind!r}")

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.labels)
            for row in self.dist:
                w.writerow([repr(float(x)) for x in row])

    # -- basic queries ------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return self.n

    def d(self, i: int, j: int) -> float:
        return float(self.dist[i, j])

    def diameter(self) -> float:
        return float(self.dist.max()) if self.n else 0.0

    def scaled(self, t: float) -> "FiniteMetricSpace":
        """The space t*X with every distance multiplied by t > 0."""
        if t <= 0:
            raise ValueError("scale factor must be positive")
        return FiniteMetricSpace(self.labels, t * self.dist)

    def permuted(self, perm) -> "FiniteMetricSpace":
        perm = list(perm)
        d = self.dist[np.ix_(perm, perm)]
        return FiniteMetricSpace(tuple(self.labels[i] for i in perm), d)

    def warn_if_triangle_violated(self, error: bool = False) -> bool:
        """Check the triangle inequality; warn (default) or raise on failure."""
        d = self.dist
        via = (d[:, :, None] + d[None, :, :]).min(axis=1)
        bad = d > via + 1e-9 * np.maximum(1.0, d)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            msg = f"triangle inequality violated at ({self.labels[i]}, {self.labels[j]})"
            if error:
                raise MetricValidationError(msg)
            warnings.warn(msg, stacklevel=2)
            return True
        return False

    def min_nonzero_distance(self) -> float:
        """Minimum off-diagonal distance (requires at least two points)."""
        if self.n < 2:
            raise ValueError("need at least two points")
        off = self.dist[~np.eye(self.n, dtype=bool)]
        return float(off.min())

    def l_values(self, l_max: float) -> list[float]:
        """All achievable tuple lengths <= l_max.

        A tuple (x_0, ..., x_k) with consecutive entries distinct has
        length sum(d(x_i, x_{i+1})); breadth-first expansion terminates
        because every step adds at least the minimum distance.
        """
        if l_max < 0:
            raise ValueError("l_max must be nonnegative")
        values: list[float] = [0.0]
        seen = {(i, 0.0) for i in range(self.n)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for i, l in frontier:
                for j in range(self.n):
                    if j == i:
                        continue
                    l2 = l + self.dist[i, j]
                    if l2 > l_max + RATE_ABS_TOL + RATE_REL_TOL * l_max:
                        continue
                    key = (j, round(l2, 12))
                    if key not in seen:
                        seen.add(key)
                        nxt.append((j, l2))
                        values.append(l2)
            frontier = nxt
        return merge_close(values)


def merge_close(values) -> list[float]:
    """Sort values and collapse groups that agree up to the rate tolerance."""
    out: list[float] = []
    for v in sorted(values):
        if out and _values_close(out[-1], v):
            continue
        out.append(v)
    return out


# -- magnitude ---------------------------------------------------------------


def solve_weighting(Z: np.ndarray) -> np.ndarray:
    """Solve Z w = 1 allowing a singular-but-consistent system.

    Raises MagnitudeUndefined when the system is inconsistent; warns when
    the residual suggests poor conditioning.
    """
    n = Z.shape[0]
    ones = np.ones(n)
    w = None
    try:
        w = np.linalg.solve(Z, ones)
    except np.linalg.LinAlgError:
        w = None
    if w is None or not np.all(np.isfinite(w)) or _residual(Z, w) > RESIDUAL_TOL:
        w, *_ = np.linalg.lstsq(Z, ones, rcond=None)
    resid = _residual(Z, w)
    if resid > RESIDUAL_TOL:
        raise MagnitudeUndefined(f"weighting equation inconsistent (residual {resid:.3g})")
    if resid > RESIDUAL_WARN:
        warnings.warn(
            f"weighting solve residual {resid:.3g}; result may be poorly conditioned",
            stacklevel=2,
        )
    return w


def _residual(Z: np.ndarray, w: np.ndarray) -> float:
    return float(np.max(np.abs(Z @ w - 1.0)))


def leinster_magnitude(X: FiniteMetricSpace, t: float) -> float:
    """Magnitude of t*X via the weighting equation; raises MagnitudeUndefined."""
    if t <= 0:
        raise ValueError("scale t must be positive")
    Z = np.exp(-t * X.dist)
    w = solve_weighting(Z)
    return float(w.sum())
