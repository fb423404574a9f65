import math

import numpy as np
import pytest

from zising.curve import gamma, gamma_derivative, gamma_lifted, gamma_values, pi_product
from zising.elliptic import resc_sn
from zising.region import j_set, random_region, regular_region


def test_square_rows_match_closed_form(square):
    m = 0.5
    kp = math.sqrt(1 - m)
    a = -gamma_values(square, m, np.array([0.0, math.pi / 4]))
    expected = np.array([
        [1 / math.sqrt(1 + kp), 1 / math.sqrt(kp), 1 / math.sqrt(kp * (1 + kp)), 0.0],
        [0.0, 1 / math.sqrt(kp * (1 + kp)), 1 / math.sqrt(kp), 1 / math.sqrt(1 + kp)],
    ])
    assert np.allclose(a, expected, atol=1e-12)


@pytest.mark.parametrize("m", [-3.0, 0.0, 0.7])
def test_lifted_periodicity(m):
    rng = np.random.default_rng(1)
    r = random_region(4, rng, min_crossings=2)
    for t in rng.uniform(-3, 3, 5):
        for q in range(-9, 10):
            lhs = gamma_lifted(r, m, q + r.size, t)
            assert lhs == pytest.approx((-1) ** (r.n - 1) * gamma_lifted(r, m, q, t), abs=1e-11)


@pytest.mark.parametrize("m", [-3.0, 0.0, 0.7])
def test_sign_form_equals_lifted_form(m):
    rng = np.random.default_rng(2)
    r = random_region(5, rng)
    for t in rng.uniform(-3, 3, 5):
        vals = gamma_values(r, m, t)
        for p in range(1, r.size + 1):
            assert vals[p - 1] == pytest.approx(gamma_lifted(r, m, p, t), abs=1e-11)
            # sign (-1)^{|J_p cap [p]|} with unlifted angles
            J = j_set(r, p)
            sign = (-1) ** sum(1 for j in J if j < p)
            direct = sign * pi_product(r, m, p, t) * np.prod([resc_sn(t - r.a(j), m) for j in J])
            assert vals[p - 1] == pytest.approx(direct, abs=1e-11)


@pytest.mark.parametrize("m", [-2.0, 0.4, 0.9])
def test_pi_product_forms_agree(m):
    rng = np.random.default_rng(3)
    r = random_region(4, rng, min_crossings=1)
    t = rng.uniform(-3, 3, 10)
    for q in range(1, r.size + 1):
        assert np.allclose(pi_product(r, m, q, t, "dn"), pi_product(r, m, q, t, "ratio"), atol=1e-11)
    with pytest.raises(ValueError):
        pi_product(r, m, 1, t, "other")


def test_critical_reduces_to_sines(hexagon):
    t = 0.37
    vals = gamma_values(hexagon, 0.0, t)
    for p in range(1, 7):
        J = j_set(hexagon, p)
        sign = (-1) ** sum(1 for j in J if j < p)
        assert vals[p - 1] == pytest.approx(sign * np.prod([math.sin(t - hexagon.a(j)) for j in J]), abs=1e-14)


def test_zero_at_alpha(hexagon):
    for p in range(1, 7):
        vals = gamma_values(hexagon, 0.6, hexagon.a(p))
        for q in range(1, 7):
            if p in j_set(hexagon, q):
                assert vals[q - 1] == pytest.approx(0.0, abs=1e-14)


def test_gamma_sample(square):
    s = gamma(square, 0.2, 0.5)
    assert s.t == 0.5 and s.values.shape == (4,)


def test_vectorised_shapes(hexagon):
    t = np.zeros((2, 5))
    assert gamma_values(hexagon, 0.3, t).shape == (2, 5, 6)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_analytic_derivative(order):
    rng = np.random.default_rng(4)
    r = random_region(3, rng)
    m, t, h = 0.45, 0.3, 1e-3
    d = gamma_derivative(r, m, order, t)
    lo = gamma_derivative(r, m, order - 1, t - h)
    hi = gamma_derivative(r, m, order - 1, t + h)
    assert np.allclose(d, (hi - lo) / (2 * h), atol=1e-5)
    assert np.allclose(gamma_derivative(r, m, 0, t), gamma_values(r, m, t), atol=1e-14)


def test_regular_polygon_curve_finite():
    for n in (1, 2, 6):
        assert np.all(np.isfinite(gamma_values(regular_region(n), -5.0, np.linspace(-3, 3, 9))))
