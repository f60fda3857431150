"""Closed-form and asymptotic magnitude formulas.

Covers cycles under the path, Euclidean and geodesic metrics (including the
Euler characteristics and simplex counts of their clique filtrations),
finite subsets of the real line, the unit interval limit, the circle's
upper/lower limits, signed critical-point sums for sublevel filtrations,
and the geodesic circle's weighting-based magnitude function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .expsum import ExpSum

GRAPH = "graph"
EUCLIDEAN = "euclidean"
GEODESIC = "geodesic"

_KIND_ALIASES = {
    "graph": GRAPH,
    "eucl": EUCLIDEAN,
    "euclidean": EUCLIDEAN,
    "geo": GEODESIC,
    "geodesic": GEODESIC,
}


@dataclass(frozen=True)
class CriticalPoint:
    """A critical value and its index for a sublevel filtration."""

    value: float
    index: int

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("critical value must be finite")
        if self.index < 0:
            raise ValueError("index must be nonnegative")


def _odd_divisors(n: int) -> list[int]:
    divs = set()
    f = 1
    while f * f <= n:
        if n % f == 0:
            for d in (f, n // f):
                if d % 2 == 1:
                    divs.add(d)
        f += 1
    return sorted(divs)


def cycle_magnitude(n: int, kind: str = GRAPH) -> ExpSum:
    """Rips magnitude function of the n-cycle under the chosen metric.

    Path metric (q = exp(-t)):
        sum over odd r | n, r != n of (n/r) q^{(n/r)(r-1)/2} (1 - q),
        plus q^{floor(n/2)}.
    The Euclidean and geodesic forms replace the integer rates by
    2 sin(pi (...)) and 2 pi (...) respectively.
    """
    kind = _KIND_ALIASES.get(kind)
    if kind is None:
        raise ValueError(f"unknown cycle kind")
    if kind == GRAPH:
        if n < 1:
            raise ValueError("need n >= 1")
    elif n < 3:
        raise ValueError(f"need n >= 3 for the {kind} cycle")

    if kind == GRAPH:
        def lo(r):
            return (n // r) * (r - 1) // 2

        def hi(r):
            return lo(r) + 1

        top = n // 2
    elif kind == EUCLIDEAN:
        def lo(r):
            return 2.0 * math.sin(math.pi * (r // 2) / r)

        def hi(r):
            return 2.0 * math.sin(math.pi * (1.0 / n + (r // 2) / r))

        top = 2.0 * math.sin(math.pi * (n // 2) / n)
    else:
        def lo(r):
            return 2.0 * math.pi * (r // 2) / r

        def hi(r):
            return 2.0 * math.pi * (1.0 / n + (r // 2) / r)

        top = 2.0 * math.pi * (n // 2) / n

    terms = []
    for r in _odd_divisors(n):
        if r == n:
            continue
        coeff = n / r
        terms.append((coeff, float(lo(r))))
        terms.append((-coeff, float(hi(r))))
    terms.append((1.0, float(top)))
    return ExpSum.from_terms(terms)


def adamaszek_euler(n: int, r: int) -> int:
    """Euler characteristic of the clique complex of the n-cycle at scale r.

    chi = n - 2r when n/(n-2r) is an odd integer, 1 when n = 2r, else 0.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if not 0 <= r <= n // 2:
        raise ValueError(f"r must be in [0, {n // 2}], got {r}")
    if n == 2 * r:
        return 1
    m = n - 2 * r
    if n % m == 0 and (n // m) % 2 == 1:
        return m
    return 0


def _comb0(m: int, j: int) -> int:
    """Binomial coefficient with C(m, j) = 0 whenever m < 0 or j < 0."""
    if m < 0 or j < 0 or j > m:
        return 0
    return math.comb(m, j)


def simplex_count(n: int, r: int, i: int) -> int:
    """Number of i-simplices of the clique complex of the n-cycle at scale r.

    N = sum_k n/(2k+1) * C((2k+1)r - kn + 2k, 2k) * C((2k+1)r - kn, i - 2k),
    where the binomial of a negative upper argument is zero.
    """
    if n < 2 or not 0 <= r < n // 2:
        raise ValueError(f"r must satisfy 0 <= r < floor(n/2) = {n // 2}")
    total = Fraction(0)
    for k in range(0, n // 2 + 1):
        a = (2 * k + 1) * r - k * n
        c1 = _comb0(a + 2 * k, 2 * k)
        if c1 == 0:
            continue
        c2 = _comb0(a, i - 2 * k)
        if c2 == 0:
            continue
        total += Fraction(n, 2 * k + 1) * c1 * c2
    if total.denominator != 1:
        raise ArithmeticError(f"simplex count is not an integer: {total}")
    return int(total)


def real_subset_magnitude(points: Sequence[float]) -> ExpSum:
    """Rips magnitude of a finite subset of the line: n minus one decaying
    term per consecutive gap."""
    pts = [float(p) for p in points]
    for a, b in zip(pts, pts[1:]):
        if not a < b:
            raise ValueError("points must be strictly increasing")
    terms = [(float(len(pts)), 0.0)]
    terms += [(-1.0, b - a) for a, b in zip(pts, pts[1:])]
    return ExpSum.from_terms(terms)


def interval_limit(t: float) -> float:
    """Limiting Rips magnitude of the unit interval across finer subsets."""
    return 1.0 + t


def interval_error_bound(delta: float, t: float) -> float:
    """Gap to the interval limit for a subset of mesh delta: delta(2t + t^2/2)."""
    if not 0 < delta < 1:
        raise ValueError("need 0 < delta < 1")
    if t <= 0:
        raise ValueError("need t > 0")
    return delta * (2.0 * t + t * t / 2.0)


def _circle_term(r: int, t: float) -> float:
    """r-th term of the upper-limit series for Euclidean cycles (odd r)."""
    return (1.0 / r) * math.exp(-2.0 * t * math.cos(math.pi / (2 * r))) * math.sin(
        math.pi / (2 * r)
    )


def ec_limits(t: float, r_max: int = 999) -> tuple[float, float, float]:
    """Lower limit, truncated upper limit, and a tail bound for the truncation.

    The lower limit is exp(-2t) + 2 pi t.  The upper limit is the series
    over odd r of 2 pi t * term(r); each term(r) is at most pi / (2 r^2),
    so the tail over odd r > r_max is bounded in closed form via
    sum over all odd r of 1/r^2 = pi^2 / 8.
    """
    if t <= 0:
        raise ValueError("need t > 0")
    if r_max % 2 == 0:
        raise ValueError("r_max must be odd")
    liminf = math.exp(-2.0 * t) + 2.0 * math.pi * t
    partial = math.exp(-2.0 * t) + 2.0 * math.pi * t * math.fsum(
        _circle_term(r, t) for r in range(1, r_max + 1, 2)
    )
    odd_inverse_squares_tail = math.pi ** 2 / 8.0 - math.fsum(
        1.0 / (r * r) for r in range(1, r_max + 1, 2)
    )
    tail = 2.0 * math.pi * t * (math.pi / 2.0) * odd_inverse_squares_tail
    return liminf, partial, tail


def ec_subsequence_limit(m: int, t: float) -> float:
    """Limit of the Euclidean-cycle magnitudes along sizes m*p, p prime."""
    if m < 1:
        raise ValueError("need m >= 1")
    if t <= 0:
        raise ValueError("need t > 0")
    return math.exp(-2.0 * t) + 2.0 * math.pi * t * math.fsum(
        _circle_term(r, t) for r in _odd_divisors(m)
    )


def geo_liminf(t: float) -> float:
    """Lower limit of the geodesic-cycle magnitudes: exp(-pi t) + 2 pi t."""
    if t <= 0:
        raise ValueError("need t > 0")
    return math.exp(-math.pi * t) + 2.0 * math.pi * t


def geo_limsup_partial(t: float, r_max: int) -> float:
    """Partial sums of the divergent upper-limit series for geodesic cycles."""
    if t <= 0:
        raise ValueError("need t > 0")
    return math.exp(-math.pi * t) + math.fsum(
        (2.0 * math.pi * t / r) * math.exp(-math.pi * (r - 1) / r * t)
        for r in range(1, r_max + 1, 2)
    )


def morse_magnitude(crits: Iterable[CriticalPoint]) -> ExpSum:
    """Signed exponential sum over critical points: (-1)^index exp(-value t)."""
    terms = []
    for c in crits:
        cp = c if isinstance(c, CriticalPoint) else CriticalPoint(*c)
        terms.append(((1.0 if cp.index % 2 == 0 else -1.0), cp.value))
    return ExpSum.from_terms(terms)


def leinster_geodesic_circle(t: float) -> float:
    """Weighting-based magnitude function of the geodesic circle: pi t / (1 - exp(-pi t))."""
    if t <= 0:
        raise ValueError("need t > 0")
    return math.pi * t / (1.0 - math.exp(-math.pi * t))


def cycle_convexity_scan(n: int, ts: Sequence[float]) -> tuple[float, float]:
    """Range of the second derivative of the n-cycle magnitude on a t-grid.

    Reported as numerical evidence only; a negative maximum indicates the
    function is concave on the grid, a sign change indicates neither.
    """
    f = cycle_magnitude(n, GRAPH)
    vals = [f.second_derivative(t) for t in ts]
    return min(vals), max(vals)
