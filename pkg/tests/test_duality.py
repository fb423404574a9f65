import math

import numpy as np
import pytest

from zising.arrangement import build_arrangement, build_black_graph, build_white_graph, coupling_from_theta
from zising.correlations import (
    dual_correlation_matrix,
    dual_gamma,
    duality_checks,
    duality_constant,
    regular_duality_product,
    shift_S,
)
from zising.elliptic import dual_parameter
from zising.oracle import exact_correlations
from zising.region import random_region, regular_region, shift_labels, validate


def test_shift_S():
    v = np.arange(1.0, 7.0)
    assert np.array_equal(shift_S(v), [6, 1, 2, 3, 4, 5])
    assert np.array_equal(shift_S(v[:4]), [-4, 1, 2, 3])


def test_shift_labels_is_valid(hexagon):
    rng = np.random.default_rng(3)
    for _ in range(10):
        r = random_region(int(rng.integers(1, 6)), rng)
        assert validate(shift_labels(r)) == []


@pytest.mark.parametrize("seed", range(10))
def test_ratio_and_projector_random(seed):
    rng = np.random.default_rng(300 + seed)
    r = random_region(int(rng.integers(2, 6)), rng)
    m = float(rng.uniform(-5, 0.95))
    res = duality_checks(r, m, rng=rng)
    assert res["ratio_spread"] <= 1e-9
    assert res["projector"] <= 1e-8


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("m", [-0.7, 0.3, 0.8])
def test_regular_product(n, m):
    r = regular_region(n)
    ts = np.linspace(-3.0, 3.0, 37) + 0.0123
    ratio = duality_constant(r, m, ts)[:, 0]
    assert np.allclose(1.0 / ratio, regular_duality_product(r, m, ts), rtol=1e-10)


def test_critical_self_dual(hexagon):
    ts = np.linspace(-3, 3, 11) + 0.0123
    c = duality_constant(hexagon, 0.0, ts)
    assert np.allclose(c, 1.0)


@pytest.mark.parametrize("m", [-2.0, 0.0, 0.6])
def test_kramers_wannier(hexagon, m):
    graph = build_black_graph(build_arrangement(hexagon, 0), m)
    assert duality_checks(hexagon, m, graph=graph)["kramers_wannier"] <= 1e-10
    white = build_white_graph(build_arrangement(hexagon, 0), m)
    for eb, ew in zip(graph.edges, white.edges):
        assert eb.theta + ew.theta == pytest.approx(math.pi / 2)
        assert math.sinh(2 * eb.coupling) * math.sinh(2 * ew.coupling) == pytest.approx(1.0)


def test_dual_parameter_involution():
    for m in (-3.0, 0.0, 0.5):
        assert dual_parameter(dual_parameter(m).m).m == pytest.approx(m)


@pytest.mark.parametrize("seed", range(4))
def test_dual_matrix_matches_white_oracle(seed):
    rng = np.random.default_rng(400 + seed)
    r = random_region(int(rng.integers(2, 5)), rng, min_crossings=1)
    m = float(rng.uniform(-3, 0.9))
    white = build_white_graph(build_arrangement(r, seed), m)
    # dual label i lives on white face w_{i-1}; the white graph labels face w_i as i
    oracle = np.roll(exact_correlations(white).correlations, 1, axis=(0, 1))
    assert np.max(np.abs(dual_correlation_matrix(r, m).entries - oracle)) <= 1e-8


def test_dual_gamma_shape(square):
    assert dual_gamma(square, 0.3, np.zeros(5)).shape == (5, 4)
