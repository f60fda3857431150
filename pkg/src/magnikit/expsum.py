"""Finite exponential sums sum_i c_i * exp(-r_i * t).

Every magnitude function computed by this package is a finite exponential
sum, so this type is the common codomain of the whole library.  Sums are
kept in a normal form: terms sorted by rate, rates merged when they agree
up to a floating-point tolerance, and vanishing coefficients dropped.
The zero function is the empty sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

# Two rates are considered equal when they differ by less than this
# absolute + relative tolerance.  Rates such as 2*sin(pi/n) are irrational,
# so exact symbolic comparison is not an option.
RATE_ABS_TOL = 1e-12
RATE_REL_TOL = 1e-9

# Coefficients at or below this magnitude after merging are treated as zero.
COEFF_DROP_TOL = 1e-12


def rates_close(r1: float, r2: float) -> bool:
    """Whether two rates fall within the merge tolerance of each other."""
    return abs(r1 - r2) <= RATE_ABS_TOL + RATE_REL_TOL * max(abs(r1), abs(r2))


@dataclass(frozen=True)
class ExpSum:
    """Normalized exponential sum; ``terms`` is a tuple of (coeff, rate).

    Construct through :meth:`from_terms` (or the arithmetic operators),
    which normalize.  Instances are immutable and safe to share.
    """

    terms: tuple[tuple[float, float], ...] = ()

    @staticmethod
    def from_terms(terms: Iterable[tuple[float, float]]) -> "ExpSum":
        """Build the normal form of an arbitrary list of (coeff, rate) pairs."""
        pending = [(float(c), float(r)) for c, r in terms]
        for c, r in pending:
            if not (math.isfinite(c) and math.isfinite(r)):
                raise ValueError(f"non-finite term ({c}, {r})")
        # Sort by (rate, coeff) so grouping is independent of input order.
        pending.sort(key=lambda t: (t[1], t[0]))
        out: list[tuple[float, float]] = []
        i = 0
        while i < len(pending):
            rep = pending[i][1]
            group = [pending[i][0]]
            j = i + 1
            while j < len(pending) and rates_close(rep, pending[j][1]):
                group.append(pending[j][0])
                j += 1
            coeff = math.fsum(group)
            if abs(coeff) > COEFF_DROP_TOL:
                out.append((coeff, rep))
            i = j
        return ExpSum(tuple(out))

    @staticmethod
    def zero() -> "ExpSum":
        return ExpSum(())

    @staticmethod
    def constant(c: float) -> "ExpSum":
        return ExpSum.from_terms([(c, 0.0)])

    @staticmethod
    def exponential(coeff: float, rate: float) -> "ExpSum":
        """The single term coeff * exp(-rate * t)."""
        return ExpSum.from_terms([(coeff, rate)])

    @property
    def rates(self) -> tuple[float, ...]:
        return tuple(r for _, r in self.terms)

    @property
    def coeffs(self) -> tuple[float, ...]:
        return tuple(c for c, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- algebra ---------------------------------------------------------

    def __add__(self, other: "ExpSum") -> "ExpSum":
        return ExpSum.from_terms(list(self.terms) + list(other.terms))

    def __sub__(self, other: "ExpSum") -> "ExpSum":
        return self + (-other)

    def __neg__(self) -> "ExpSum":
        return ExpSum(tuple((-c, r) for c, r in self.terms))

    def __mul__(self, other):
        if isinstance(other, ExpSum):
            return ExpSum.from_terms(
                [(c1 * c2, r1 + r2) for c1, r1 in self.terms for c2, r2 in other.terms]
            )
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, factor: float) -> "ExpSum":
        """Multiply every coefficient by a scalar."""
        return ExpSum.from_terms([(factor * c, r) for c, r in self.terms])

    # -- evaluation ------------------------------------------------------

    def eval(self, t: float) -> float:
        """Evaluate the sum at t >= 0 (t = 0 gives the one-sided extension)."""
        return math.fsum(c * math.exp(-r * t) for c, r in self.terms)

    def __call__(self, t: float) -> float:
        return self.eval(t)

    def rescale(self, t0: float) -> "ExpSum":
        """Precompose with t -> t0*t, i.e. multiply every rate by t0 > 0."""
        if t0 <= 0:
            raise ValueError(f"rescale factor must be positive, got {t0}")
        return ExpSum.from_terms([(c, t0 * r) for c, r in self.terms])

    def reparam(self, h: Callable[[float], float]) -> "ExpSum":
        """Replace each rate r by h(r); h must be strictly increasing on the rates."""
        new_rates = [h(r) for r in self.rates]
        for a, b in zip(new_rates, new_rates[1:]):
            if not a < b:
                raise ValueError("reparameterisation is not strictly increasing on the rates")
        return ExpSum.from_terms(
            [(c, nr) for (c, _), nr in zip(self.terms, new_rates)]
        )

    def limit_at_zero(self) -> float:
        """lim_{t->0+} of the sum: the total of all coefficients."""
        return math.fsum(self.coeffs)

    def limit_at_infinity(self) -> float:
        """lim_{t->inf}: the coefficient at rate 0, or 0 when absent.

        Requires all rates nonnegative; a negative rate makes the sum diverge.
        """
        if self.terms and self.terms[0][1] < -RATE_ABS_TOL:
            raise ValueError("limit at infinity undefined: negative rate present")
        if self.terms and rates_close(self.terms[0][1], 0.0):
            return self.terms[0][0]
        return 0.0

    def bb_euler_characteristic(self) -> float:
        """One-sided derivative at 0, i.e. -sum(c_i * r_i)."""
        return -math.fsum(c * r for c, r in self.terms)

    def second_derivative(self, t: float) -> float:
        """d^2/dt^2 of the sum at t, i.e. sum(c_i * r_i^2 * exp(-r_i t))."""
        return math.fsum(c * r * r * math.exp(-r * t) for c, r in self.terms)

    # -- comparison and serialization -------------------------------------

    def allclose(self, other: "ExpSum", tol: float = 1e-9) -> bool:
        """Termwise comparison: the normalized difference has no coefficient above tol."""
        diff = self - other
        return all(abs(c) <= tol for c, _ in diff.terms)

    def to_dict(self) -> dict:
        return {"terms": [{"coeff": c, "rate": r} for c, r in self.terms]}

    @staticmethod
    def from_dict(data: dict) -> "ExpSum":
        return ExpSum.from_terms([(t["coeff"], t["rate"]) for t in data["terms"]])

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, r in self.terms:
            if rates_close(r, 0.0):
                parts.append(f"{c:g}")
            else:
                parts.append(f"{c:g}*exp(-{r:g}*t)")
        return " + ".join(parts).replace("+ -", "- ")


def add(a: ExpSum, b: ExpSum) -> ExpSum:
    return a + b


def mul(a: ExpSum, b: ExpSum) -> ExpSum:
    return a * b


def sample_grid(f: ExpSum, ts: Sequence[float]) -> list[tuple[float, float]]:
    """Evaluate f on a grid of t values, returning (t, value) rows."""
    return [(t, f.eval(t)) for t in ts]
