"""Interval modules and barcodes, and the magnitude invariants they carry.

A bar [a, b) (b possibly infinite) contributes exp(-a*t) - exp(-b*t) to the
magnitude of its barcode, with the convention exp(-inf) = 0.  Graded
barcodes weight degree k by (-1)^k.  The module also provides the derived
tensor operations on bars, the associated-graded start/end multisets, and
rank / Euler-characteristic curves with the equivalent "filtered Euler
characteristic" form of the magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .expsum import ExpSum

INF = math.inf


@dataclass(frozen=True, order=True)
class Interval:
    """Half-open interval [start, end); end may be math.inf."""

    start: float
    end: float

    def __post_init__(self):
        if not math.isfinite(self.start):
            raise ValueError(f"interval start must be finite, got {self.start}")
        if not self.start < self.end:
            raise ValueError(f"empty interval [{self.start}, {self.end})")

    @property
    def finite(self) -> bool:
        return math.isfinite(self.end)

    def rescaled(self, t0: float) -> "Interval":
        if t0 <= 0:
            raise ValueError("rescale factor must be positive")
        return Interval(t0 * self.start, t0 * self.end)

    def contains(self, s: float) -> bool:
        """Half-open membership: counts at start, not at end."""
        return self.start <= s < self.end


def _coerce(bar) -> Interval:
    if isinstance(bar, Interval):
        return bar
    a, b = bar
    return Interval(float(a), float(b))


@dataclass(frozen=True)
class Barcode:
    """Finite multiset of intervals, stored sorted for a canonical form."""

    bars: tuple[Interval, ...] = ()

    @staticmethod
    def of(bars: Iterable) -> "Barcode":
        return Barcode(tuple(sorted(_coerce(b) for b in bars)))

    def __len__(self) -> int:
        return len(self.bars)

    def __iter__(self):
        return iter(self.bars)

    def union(self, other: "Barcode") -> "Barcode":
        return Barcode.of(self.bars + other.bars)

    def rescaled(self, t0: float) -> "Barcode":
        return Barcode.of(b.rescaled(t0) for b in self.bars)


@dataclass(frozen=True)
class GradedBarcode:
    """Map from homological degree to a barcode; missing degrees are empty."""

    by_degree: Mapping[int, Barcode] = field(default_factory=dict)

    @staticmethod
    def of(data: Mapping[int, Iterable]) -> "GradedBarcode":
        out = {}
        for k, bars in data.items():
            if k < 0:
                raise ValueError(f"negative degree {k}")
            bc = bars if isinstance(bars, Barcode) else Barcode.of(bars)
            if len(bc):
                out[int(k)] = bc
        return GradedBarcode(out)

    def degrees(self) -> list[int]:
        return sorted(self.by_degree)

    def barcode(self, k: int) -> Barcode:
        return self.by_degree.get(k, Barcode())

    def total_bars(self) -> int:
        return sum(len(b) for b in self.by_degree.values())

    def rescaled(self, t0: float) -> "GradedBarcode":
        return GradedBarcode.of({k: b.rescaled(t0) for k, b in self.by_degree.items()})

    def truncated(self, k_max: int) -> "GradedBarcode":
        """Keep only degrees <= k_max."""
        return GradedBarcode.of(
            {k: b for k, b in self.by_degree.items() if k <= k_max}
        )

    def to_dict(self) -> dict:
        return {
            "degrees": {
                str(k): [
                    {"start": b.start, "end": (b.end if b.finite else "inf")}
                    for b in self.barcode(k)
                ]
                for k in self.degrees()
            }
        }

    @staticmethod
    def from_dict(data: dict) -> "GradedBarcode":
        return GradedBarcode.of(
            {
                int(k): [
                    (b["start"], INF if b["end"] == "inf" else b["end"])
                    for b in bars
                ]
                for k, bars in data["degrees"].items()
            }
        )


@dataclass(frozen=True)
class GradedPoints:
    """Multisets of reals per layer, e.g. bar start points and end points."""

    by_degree: Mapping[int, tuple[float, ...]] = field(default_factory=dict)

    def layer(self, k: int) -> tuple[float, ...]:
        return self.by_degree.get(k, ())


# -- magnitude ------------------------------------------------------------


def magnitude(b: Barcode) -> ExpSum:
    """Sum over bars [a, b) of exp(-a*t) - exp(-b*t); infinite ends vanish."""
    terms = []
    for bar in b:
        terms.append((1.0, bar.start))
        if bar.finite:
            terms.append((-1.0, bar.end))
    return ExpSum.from_terms(terms)


def graded_magnitude(g: GradedBarcode) -> ExpSum:
    """Alternating sum over degrees of the per-degree magnitudes."""
    total = ExpSum.zero()
    for k in g.degrees():
        part = magnitude(g.barcode(k))
        total = total + (part if k % 2 == 0 else -part)
    return total


def graded_points_magnitude(points: Iterable[float]) -> ExpSum:
    """Sum of exp(-a*t) over a multiset of start/end points."""
    return ExpSum.from_terms([(1.0, a) for a in points])


# -- derived tensor of interval modules -----------------------------------


def tensor(i1: Interval, i2: Interval) -> Optional[Interval]:
    """[a,b) tensor [c,d) = [a+c, min(a+d, b+c)), or None when empty."""
    start = i1.start + i2.start
    end = min(i1.start + i2.end, i1.end + i2.start)
    if start < end:
        return Interval(start, end)
    return None


def tor1(i1: Interval, i2: Interval) -> Optional[Interval]:
    """tor_1([a,b), [c,d)) = [max(a+d, b+c), b+d), or None when empty.

    Free modules (infinite end) force the start to infinity, so any pair
    involving an infinite bar has vanishing tor_1.
    """
    start = max(i1.start + i2.end, i1.end + i2.start)
    end = i1.end + i2.end
    if math.isfinite(start) and start < end:
        return Interval(start, end)
    return None


def tensor_barcodes(x: GradedBarcode, y: GradedBarcode) -> tuple[GradedBarcode, GradedBarcode]:
    """Pairwise tensor / tor_1 over all bar pairs.

    Both outputs store the bar arising from degrees (k1, k2) at degree
    k1 + k2; the caller applies any degree shift its Kunneth convention
    requires.
    """
    tens: dict[int, list[Interval]] = {}
    tors: dict[int, list[Interval]] = {}
    for k1 in x.degrees():
        for k2 in y.degrees():
            k = k1 + k2
            for b1 in x.barcode(k1):
                for b2 in y.barcode(k2):
                    t = tensor(b1, b2)
                    if t is not None:
                        tens.setdefault(k, []).append(t)
                    tr = tor1(b1, b2)
                    if tr is not None:
                        tors.setdefault(k, []).append(tr)
    return GradedBarcode.of(tens), GradedBarcode.of(tors)


# -- associated graded -----------------------------------------------------


def gr(b: Barcode) -> GradedPoints:
    """Layer 0: bar start points; layer 1: finite bar end points."""
    starts = tuple(sorted(bar.start for bar in b))
    ends = tuple(sorted(bar.end for bar in b if bar.finite))
    out = {}
    if starts:
        out[0] = starts
    if ends:
        out[1] = ends
    return GradedPoints(out)


# -- rank and Euler-characteristic curves ----------------------------------


@dataclass(frozen=True)
class StepCurve:
    """Piecewise-constant curve: value v[j] on [breakpoints[j], breakpoints[j+1]).

    The curve is 0 before the first breakpoint.  ``values`` may hold ints
    (Euler curve) or per-degree dicts (rank curve).
    """

    breakpoints: tuple[float, ...]
    values: tuple

    def at(self, s: float):
        out = None
        for bp, v in zip(self.breakpoints, self.values):
            if s >= bp:
                out = v
            else:
                break
        return out


def _breakpoints(g: GradedBarcode) -> list[float]:
    pts = set()
    for k in g.degrees():
        for bar in g.barcode(k):
            pts.add(bar.start)
            if bar.finite:
                pts.add(bar.end)
    return sorted(pts)


def rank_curve(g: GradedBarcode) -> StepCurve:
    """Per-degree rank at each breakpoint; bars count on [start, end)."""
    bps = _breakpoints(g)
    values = []
    for s in bps:
        ranks = {}
        for k in g.degrees():
            r = sum(1 for bar in g.barcode(k) if bar.contains(s))
            if r:
                ranks[k] = r
        values.append(ranks)
    return StepCurve(tuple(bps), tuple(values))


def euler_curve(g: GradedBarcode) -> StepCurve:
    """Alternating sum of the per-degree ranks at each breakpoint."""
    rc = rank_curve(g)
    values = tuple(
        sum((-1) ** k * r for k, r in ranks.items()) for ranks in rc.values
    )
    return StepCurve(rc.breakpoints, values)


def magnitude_via_euler(g: GradedBarcode) -> ExpSum:
    """Magnitude as the filtered Euler characteristic.

    With breakpoints r_1 < ... < r_n and r_{n+1} = inf, this is
    sum_j chi(r_j) * (exp(-r_j t) - exp(-r_{j+1} t)).
    """
    ec = euler_curve(g)
    bps = list(ec.breakpoints)
    terms = []
    for j, (r, chi) in enumerate(zip(bps, ec.values)):
        if chi == 0:
            continue
        terms.append((float(chi), r))
        if j + 1 < len(bps):
            terms.append((-float(chi), bps[j + 1]))
    return ExpSum.from_terms(terms)
