"""Rips filtrations and the Rips magnitude of a finite metric space.

Three independent routes compute the same exponential sum:

* subsets:  sum over nonempty subsets A of (-1)^(#A-1) exp(-diam(A) t),
* euler:    sum over the distinct pairwise distances d_j of
            chi(R_{d_j}) (exp(-d_j t) - exp(-d_{j+1} t)),
* barcode:  persistent magnitude of the Rips persistent homology.

Cross-checking the routes against each other is the principal correctness
argument of the package, so none of them may share its core loop with another.
"""

from __future__ import annotations

import os
import warnings
from itertools import combinations

from .barcode import GradedBarcode, graded_magnitude
from .expsum import ExpSum
from .homology import Cell, FilteredComplex, Rationals, euler_at
from .homology import reduce as reduce_complex
from .metric import FiniteMetricSpace, merge_close

#: default cap on 2^n subset enumeration (~4M subsets)
DEFAULT_SUBSET_CAP = 22
_CAP_ENV = "MAGNIKIT_SUBSET_CAP"


class EnumerationCapExceeded(RuntimeError):
    """The space is too large for exhaustive subset enumeration."""


def _subset_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(_CAP_ENV)
    return int(env) if env else DEFAULT_SUBSET_CAP


def _check_cap(n: int, cap: int | None) -> None:
    limit = _subset_cap(cap)
    if n > limit:
        raise EnumerationCapExceeded(
            f"{n} points exceeds the enumeration cap of {limit} "
            f"(override with {_CAP_ENV})"
        )


def rips_filtration(X: FiniteMetricSpace, max_dim: int | None = None,
                    cap: int | None = None) -> FilteredComplex:
    """All subsets of size <= max_dim+1 as cells filtered by diameter.

    Boundaries are the alternating face sums of the full simplex on X.
    """
    n = X.n
    if max_dim is None:
        max_dim = n - 1
    if not 0 <= max_dim <= n - 1:
        raise ValueError(f"max_dim must be in [0, {n - 1}], got {max_dim}")
    _check_cap(n, cap)
    d = X.dist
    cells = []
    diam: dict[tuple[int, ...], float] = {}
    for size in range(1, max_dim + 2):
        for verts in combinations(range(n), size):
            if size == 1:
                dm = 0.0
            else:
                prev = verts[:-1]
                last = verts[-1]
                dm = max(diam[prev], max(d[v, last] for v in prev))
            diam[verts] = dm
            boundary = {}
            if size > 1:
                for i in range(size):
                    face = verts[:i] + verts[i + 1:]
                    boundary[face] = 1 if i % 2 == 0 else -1
            cells.append(Cell(verts, size - 1, dm, boundary))
    return FilteredComplex(cells)


def rips_magnitude_subsets(X: FiniteMetricSpace, cap: int | None = None) -> ExpSum:
    """Inclusion-exclusion over all nonempty subsets, grouped by diameter.

    Depth-first enumeration maintains the diameter incrementally:
    diam(A + {x}) = max(diam(A), max_{a in A} d(a, x)).
    """
    n = X.n
    _check_cap(n, cap)
    d = X.dist
    acc: dict[float, int] = {}

    members: list[int] = []

    def visit(start: int, dm: float, sign: int) -> None:
        for x in range(start, n):
            dx = dm
            for a in members:
                dax = d[a, x]
                if dax > dx:
                    dx = dax
            acc[dx] = acc.get(dx, 0) + sign
            members.append(x)
            visit(x + 1, dx, -sign)
            members.pop()

    visit(0, 0.0, +1)
    return ExpSum.from_terms([(float(c), dm) for dm, c in acc.items()])


def rips_magnitude_euler(X: FiniteMetricSpace, cap: int | None = None) -> ExpSum:
    """Telescoped Euler-characteristic route over the distinct distances."""
    _check_cap(X.n, cap)
    cx = rips_filtration(X, X.n - 1, cap=cap)
    dists = merge_close(X.dist.flatten().tolist())
    if not dists or dists[0] != 0.0:
        dists = [0.0] + dists
    terms = []
    for j, s in enumerate(dists):
        chi = euler_at(cx, s)
        if chi == 0:
            continue
        terms.append((float(chi), s))
        if j + 1 < len(dists):
            terms.append((-float(chi), dists[j + 1]))
    return ExpSum.from_terms(terms)


def rips_magnitude_barcode(X: FiniteMetricSpace, max_dim: int | None = None,
                           fld=None, cap: int | None = None
                           ) -> tuple[GradedBarcode, ExpSum]:
    """Reduce the Rips filtration and take the graded magnitude.

    Exact equality with the other routes needs the full filtration
    (max_dim = n-1); lower max_dim yields a truncation and a warning.
    """
    n = X.n
    if max_dim is None:
        max_dim = n - 1
    if max_dim < n - 1:
        warnings.warn(
            f"max_dim={max_dim} < {n - 1}: the magnitude is a truncation",
            stacklevel=2,
        )
    cx = rips_filtration(X, max_dim, cap=cap)
    gb = reduce_complex(cx, fld or Rationals())
    return gb, graded_magnitude(gb)


def rips_magnitude(X: FiniteMetricSpace, method: str = "subsets", **kwargs) -> ExpSum:
    """Dispatch helper used by the CLI."""
    if method == "subsets":
        return rips_magnitude_subsets(X, **kwargs)
    if method == "euler":
        return rips_magnitude_euler(X, **kwargs)
    if method == "barcode":
        return rips_magnitude_barcode(X, **kwargs)[1]
    raise ValueError(f"unknown method {method!r}")
