import math

import numpy as np
import pytest

from wigner_bounds.errors import ConfigError
from wigner_bounds.search import (
    candidate_indices,
    coordinate_refine,
    golden_section,
    parallel_map,
    refine_grid_extrema,
    thread_count,
)


def test_golden_section_quadratic():
    x, fx = golden_section(lambda t: (t - 0.3) ** 2 + 1, -1, 2, tol=1e-10)
    assert x == pytest.approx(0.3, abs=1e-7)
    assert fx == pytest.approx(1.0, abs=1e-14)


def test_golden_section_maximize():
    x, fx = golden_section(math.sin, 0, 3, maximize=True)
    assert x == pytest.approx(math.pi / 2, abs=1e-7)
    assert fx == pytest.approx(1.0, abs=1e-14)


def test_golden_section_monotone_returns_endpoint():
    x, _ = golden_section(lambda t: t, 0.0, 1.0)
    assert x == 0.0


def test_candidate_indices_1d():
    v = np.array([3, 1, 2, 5, 0.5, 4])
    assert candidate_indices(v, slack=10) == [(4,), (1,)]
    assert candidate_indices(v, slack=0.1) == [(4,)]
    # the first point is a boundary maximum when the axis does not wrap
    assert candidate_indices(v, maximize=True, slack=10) == [(3,), (5,), (0,)]


def test_candidate_indices_periodic_axis():
    v = np.array([[0.0, 1.0, 2.0, 1.0]])
    assert (0, 0) in candidate_indices(v, periodic=(False, True), slack=1)
    v = np.array([[1.0, 2.0, 3.0, 0.5]])
    # without wrap the last column is a local minimum; with wrap it also beats the first column
    assert candidate_indices(v, periodic=(False, True), slack=1) == [(0, 3)]


def test_coordinate_refine_separable():
    x, fx = coordinate_refine(lambda a, b: (a - 1) ** 2 + (b + 2) ** 2, (0.8, -1.7), (0, -3), (2, -1))
    assert x == pytest.approx((1, -2), abs=1e-7)
    assert fx == pytest.approx(0, abs=1e-13)


def test_coordinate_refine_coupled():
    def f(a, b):
        return (a - b) ** 2 + 0.1 * (a + b - 1) ** 2
    x, fx = coordinate_refine(f, (0.4, 0.6), (0, 0), (1, 1))
    assert fx < 1e-6


def test_refine_grid_extrema_finds_both_minima():
    xs = np.linspace(0, 2 * math.pi, 50)
    hits = refine_grid_extrema(lambda t: math.cos(2 * t), (xs,), np.cos(2 * xs))
    assert [round(h.params[0], 6) for h in hits] == [round(math.pi / 2, 6), round(3 * math.pi / 2, 6)]


def test_thread_count(monkeypatch):
    monkeypatch.delenv("WIGNER_THREADS", raising=False)
    assert thread_count() == 1
    monkeypatch.setenv("WIGNER_THREADS", "3")
    assert thread_count() == 3
    for bad in ("0", "x"):
        monkeypatch.setenv("WIGNER_THREADS", bad)
        with pytest.raises(ConfigError):
            thread_count()


def test_parallel_map_keeps_order(monkeypatch):
    monkeypatch.setenv("WIGNER_THREADS", "4")
    assert parallel_map(lambda x: x * x, range(100)) == [x * x for x in range(100)]
