"""Persistent homology of finite filtered chain complexes.

The engine is a plain left-to-right column reduction over an exact field
(arbitrary-precision rationals by default, a prime field on request).
Cells are processed in (filtration, degree, insertion index) order, pivot =
lowest nonzero row; the pivot pairs give the finite bars and the surviving
cycles give the infinite ones.  Correctness over speed: no clearing, no
cohomology, desk scale only.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .barcode import Barcode, GradedBarcode
from .expsum import ExpSum


class ChainComplexError(ValueError):
    """Raised when cell data violates the chain-complex invariants."""


# -- exact coefficient fields ----------------------------------------------


class Rationals:
    """Arbitrary-precision rational coefficients."""

    name = "rationals"

    def of(self, n: int) -> Fraction:
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def is_zero(self, a) -> bool:
        return a == 0

    def __repr__(self):
        return "Rationals()"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("rationals")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    """Integers modulo a prime p."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"

    def of(self, n: int) -> int:
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def div(self, a, b):
        return (a * pow(b, self.p - 2, self.p)) % self.p

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime-field", self.p))


# -- filtered complexes ------------------------------------------------------

# Face filtrations may exceed the cell's own by at most this relative slack;
# exact inputs (graph metrics) satisfy the inequality exactly.
_FILT_SLACK = 1e-9


@dataclass(frozen=True)
class Cell:
    id: Hashable
    degree: int
    filtration: float
    boundary: Mapping[Hashable, int] = field(default_factory=dict)


class FilteredComplex:
    """Finite list of cells with degrees, filtration values and boundaries.

    Boundaries are sparse integer vectors over the cell ids; coefficients
    are interpreted in whatever field the reduction is run over.
    """

    def __init__(self, cells: Iterable[Cell]):
        self.cells: list[Cell] = list(cells)
        self._index = {c.id: i for i, c in enumerate(self.cells)}
        if len(self._index) != len(self.cells):
            raise ChainComplexError("duplicate cell ids")
        for c in self.cells:
            if c.degree < 0:
                raise ChainComplexError(f"cell {c.id} has negative degree")
            for fid in c.boundary:
                if fid not in self._index:
                    raise ChainComplexError(f"cell {c.id} references unknown face {fid}")
                f = self.cells[self._index[fid]]
                if f.degree != c.degree - 1:
                    raise ChainComplexError(
                        f"cell {c.id} (degree {c.degree}) has face {fid} of degree {f.degree}"
                    )
                slack = _FILT_SLACK * max(1.0, abs(c.filtration))
                if f.filtration > c.filtration + slack:
                    raise ChainComplexError(
                        f"face {fid} enters at {f.filtration}, after cell {c.id} at {c.filtration}"
                    )

    def __len__(self) -> int:
        return len(self.cells)

    def cell(self, cell_id: Hashable) -> Cell:
        return self.cells[self._index[cell_id]]

    def max_degree(self) -> int:
        return max((c.degree for c in self.cells), default=-1)

    def check_boundary_squared(self, fld=None) -> None:
        """Verify that the composite boundary vanishes; raises otherwise."""
        fld = fld or Rationals()
        for c in self.cells:
            acc: dict[Hashable, object] = {}
            for fid, coeff in c.boundary.items():
                fc = fld.of(coeff)
                for ggid, gcoeff in self.cell(fid).boundary.items():
                    acc[ggid] = fld.add(acc.get(ggid, fld.of(0)), fld.mul(fc, fld.of(gcoeff)))
            for v in acc.values():
                if not fld.is_zero(v):
                    raise ChainComplexError(f"boundary squared is nonzero at cell {c.id}")

    def to_debug_csv(self, path) -> None:
        """Cell list dump: id, degree, filtration, boundary."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["id", "degree", "filtration", "boundary"])
            for c in self.cells:
                bd = ";".join(f"{fid}:{coeff}" for fid, coeff in c.boundary.items())
                w.writerow([c.id, c.degree, c.filtration, bd])


# -- reduction ---------------------------------------------------------------


def reduce(complex: FilteredComplex, fld=None, validate: bool = True) -> GradedBarcode:
    """Barcode of the persistent homology of a filtered complex.

    Pivot pairs (i, j) give bars [filt_i, filt_j) in degree(cell_i);
    unpaired cycles give bars [filt_i, inf).  Zero-length bars are dropped.
    Deterministic for a fixed input order.
    """
    fld = fld or Rationals()
    if validate:
        complex.check_boundary_squared(fld)

    order = sorted(
        range(len(complex.cells)),
        key=lambda i: (complex.cells[i].filtration, complex.cells[i].degree, i),
    )
    pos_of_cell = {complex.cells[i].id: p for p, i in enumerate(order)}
    cells = [complex.cells[i] for i in order]

    zero = fld.of(0)
    columns: list[dict[int, object] | None] = [None] * len(cells)
    pivot_owner: dict[int, int] = {}
    reduced_to_zero: set[int] = set()

    for j, cell in enumerate(cells):
        col = {pos_of_cell[fid]: fld.of(c) for fid, c in cell.boundary.items()}
        while col:
            low = max(col)
            owner = pivot_owner.get(low)
            if owner is None:
                break
            other = columns[owner]
            factor = fld.div(col[low], other[low])
            for r, v in other.items():
                acc = fld.sub(col.get(r, zero), fld.mul(factor, v))
                if fld.is_zero(acc):
                    col.pop(r, None)
                else:
                    col[r] = acc
        if col:
            low = max(col)
            pivot_owner[low] = j
            columns[j] = col
        else:
            reduced_to_zero.add(j)

    bars: dict[int, list[tuple[float, float]]] = {}
    for row, j in pivot_owner.items():
        birth = cells[row]
        death = cells[j]
        if birth.filtration != death.filtration:
            bars.setdefault(birth.degree, []).append((birth.filtration, death.filtration))
    for i in reduced_to_zero:
        if i not in pivot_owner:
            bars.setdefault(cells[i].degree, []).append((cells[i].filtration, math.inf))

    return GradedBarcode.of({k: Barcode.of(v) for k, v in bars.items()})


def chain_magnitude(complex: FilteredComplex) -> ExpSum:
    """Magnitude read off the chains: each degree-k cell at filtration f
    contributes (-1)^k * exp(-f*t).  Equals the magnitude of the homology."""
    return ExpSum.from_terms(
        [((1.0 if c.degree % 2 == 0 else -1.0), c.filtration) for c in complex.cells]
    )


def euler_at(complex: FilteredComplex, s: float) -> int:
    """Euler characteristic of the sublevel complex at parameter s."""
    return sum((-1) ** c.degree for c in complex.cells if c.filtration <= s)


# -- exact matrix rank (used by the magnitude-homology tables) ---------------


def matrix_rank(columns: Sequence[Mapping[int, int]], fld=None) -> int:
    """Rank of a sparse integer matrix given as columns {row: coeff}."""
    fld = fld or Rationals()
    zero = fld.of(0)
    pivots: dict[int, dict[int, object]] = {}
    rank = 0
    for raw in columns:
        col = {r: fld.of(v) for r, v in raw.items() if not fld.is_zero(fld.of(v))}
        while col:
            low = max(col)
            owner = pivots.get(low)
            if owner is None:
                pivots[low] = col
                rank += 1
                break
            factor = fld.div(col[low], owner[low])
            for r, v in owner.items():
                acc = fld.sub(col.get(r, zero), fld.mul(factor, v))
                if fld.is_zero(acc):
                    col.pop(r, None)
                else:
                    col[r] = acc
    return rank
