"""magnikit: magnitude invariants of barcodes and finite metric spaces.

The package computes the signed, weighted bar count of finitely presented
graded persistence modules (an exponential sum in the scale parameter),
the weighting-based magnitude of finite metric spaces, the Rips magnitude
by three independent routes, magnitude homology and its blurred variant
with a certified reconciliation bound, and a collection of closed forms
for cycles, subsets of the line, the circle, and sublevel filtrations.
"""

from .barcode import (
    Barcode,
    GradedBarcode,
    GradedPoints,
    Interval,
    euler_curve,
    gr,
    graded_magnitude,
    graded_points_magnitude,
    magnitude,
    magnitude_via_euler,
    rank_curve,
    tensor,
    tensor_barcodes,
    tor1,
)
from .expsum import ExpSum
from .homology import (
    Cell,
    FilteredComplex,
    PrimeField,
    Rationals,
    chain_magnitude,
    euler_at,
    reduce,
)
from .maghom import (
    RankTable,
    alternating_sum_magnitude,
    bmc_complex,
    bmh_magnitude_partial,
    bmh_reconciliation,
    les_rank_check,
    mh_ranks,
    tail_bound,
)
from .metric import FiniteMetricSpace, MagnitudeUndefined, leinster_magnitude
from .rips import (
    rips_filtration,
    rips_magnitude,
    rips_magnitude_barcode,
    rips_magnitude_euler,
    rips_magnitude_subsets,
)

__version__ = "0.1.0"

__all__ = [
    "Barcode",
    "Cell",
    "ExpSum",
    "FilteredComplex",
    "FiniteMetricSpace",
    "GradedBarcode",
    "GradedPoints",
    "Interval",
    "MagnitudeUndefined",
    "PrimeField",
    "RankTable",
    "Rationals",
    "alternating_sum_magnitude",
    "bmc_complex",
    "bmh_magnitude_partial",
    "bmh_reconciliation",
    "chain_magnitude",
    "euler_at",
    "euler_curve",
    "gr",
    "graded_magnitude",
    "graded_points_magnitude",
    "leinster_magnitude",
    "les_rank_check",
    "magnitude",
    "magnitude_via_euler",
    "mh_ranks",
    "rank_curve",
    "reduce",
    "rips_filtration",
    "rips_magnitude",
    "rips_magnitude_barcode",
    "rips_magnitude_euler",
    "rips_magnitude_subsets",
    "tail_bound",
    "tensor",
    "tensor_barcodes",
    "tor1",
]
