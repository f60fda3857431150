import math

import numpy as np
import pytest

from magnikit import FiniteMetricSpace
from magnikit.barcode import GradedBarcode, Interval
from magnikit.homology import Cell, FilteredComplex


def cycle_graph(n: int) -> FiniteMetricSpace:
    a = np.zeros((n, n))
    for i in range(n):
        a[i, (i + 1) % n] = a[(i + 1) % n, i] = 1.0
    return FiniteMetricSpace.from_graph(a)


def complete_multipartite(*sizes: int) -> FiniteMetricSpace:
    """Distance 1 across parts, 2 within a part (the graph metric)."""
    n = sum(sizes)
    d = np.full((n, n), 1.0)
    start = 0
    for s in sizes:
        d[start:start + s, start:start + s] = 2.0
        start += s
    np.fill_diagonal(d, 0.0)
    return FiniteMetricSpace.from_matrix(d)


def petersen_graph() -> FiniteMetricSpace:
    a = np.zeros((10, 10))
    for i in range(5):
        for u, v in [(i, (i + 1) % 5), (i, i + 5), (5 + i, 5 + (i + 2) % 5)]:
            a[u, v] = a[v, u] = 1.0
    return FiniteMetricSpace.from_graph(a)


def random_point_cloud(rng: np.random.Generator, n: int, dim: int = 2) -> FiniteMetricSpace:
    return FiniteMetricSpace.from_point_cloud(rng.uniform(0.0, 1.0, size=(n, dim)))


def random_interval(rng: np.random.Generator, p_inf: float = 0.25) -> Interval:
    a = rng.uniform(0, 3)
    if rng.random() < p_inf:
        return Interval(a, math.inf)
    return Interval(a, a + rng.uniform(0.1, 3))


def random_graded_barcode(rng: np.random.Generator, max_bars: int = 4,
                          max_degree: int = 2) -> GradedBarcode:
    out = {}
    for _ in range(rng.integers(0, max_bars + 1)):
        k = int(rng.integers(0, max_degree + 1))
        out.setdefault(k, []).append(random_interval(rng))
    return GradedBarcode.of(out)


def random_simplicial_complex(rng: np.random.Generator, max_vertices: int = 7) -> FilteredComplex:
    """Random downward-closed 2-complex with a monotone filtration."""
    n = int(rng.integers(1, max_vertices + 1))
    simplices = {}
    for v in range(n):
        simplices[(v,)] = float(rng.uniform(0, 1))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                simplices[(i, j)] = max(simplices[(i,)], simplices[(j,)]) + float(rng.uniform(0, 1))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                faces = [(i, j), (i, k), (j, k)]
                if all(f in simplices for f in faces) and rng.random() < 0.4:
                    simplices[(i, j, k)] = max(simplices[f] for f in faces) + float(rng.uniform(0, 1))
    cells = []
    for simplex, filt in simplices.items():
        boundary = {}
        if len(simplex) > 1:
            for m in range(len(simplex)):
                boundary[simplex[:m] + simplex[m + 1:]] = 1 if m % 2 == 0 else -1
        cells.append(Cell(simplex, len(simplex) - 1, filt, boundary))
    return FilteredComplex(cells)


@pytest.fixture
def two_points() -> FiniteMetricSpace:
    return FiniteMetricSpace.from_matrix([[0.0, 1.0], [1.0, 0.0]])


@pytest.fixture
def c5() -> FiniteMetricSpace:
    return cycle_graph(5)


@pytest.fixture
def c6() -> FiniteMetricSpace:
    return cycle_graph(6)


@pytest.fixture
def petersen() -> FiniteMetricSpace:
    return petersen_graph()
