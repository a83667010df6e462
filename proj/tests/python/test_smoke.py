import math

import numpy as np
import pytest

import semibound as sb


def test_special_functions():
    assert sb.gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert sb.riemann_zeta(2.0) == pytest.approx(math.pi**2 / 6, rel=1e-12)
    assert sb.lambert_w0(math.e) == pytest.approx(1.0, rel=1e-13)
    assert sb.bessel_k(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) / math.e, rel=1e-12)


def test_constants():
    assert sb.lower_bound_tr(2.0) == pytest.approx(0.6476, abs=1e-3)
    assert sb.prim_constant(3.0) == pytest.approx(math.pi**2, rel=1e-12)
    assert sb.c_integral(3, 2.0) == pytest.approx(math.pi / 2)
    assert sb.lower_bound_tr(3.0) <= sb.constant_tr(3.0) <= sb.prim_constant(3.0)


def test_domain_errors_map_to_value_error():
    with pytest.raises(ValueError):
        sb.prim_constant(2.0)
    with pytest.raises(sb.DomainError):
        sb.riemann_zeta(1.0)


def test_scalar_pair():
    a = np.zeros((1, 1))
    b = -np.ones((1, 1))
    assert sb.negative_moment(b, 2.0) == pytest.approx(1.0)
    assert sb.moment_via_jensen_tr(a, b, 1.0, 2.0) == pytest.approx(1.0, abs=1e-6)
    assert sb.bound_exp(a, b, 1.0, 2.0) == pytest.approx(sb.constant_tr(2.0) * (math.e - 1), rel=1e-12)
    with pytest.raises(sb.HypothesisError):
        sb.bound_exp(b, b, 1.0, 2.0)


def test_random_pair_bounds():
    rng = np.random.default_rng(3)
    g = rng.standard_normal((5, 5))
    h = rng.standard_normal((5, 5))
    a = g.T @ g / 5 + 0.1 * np.eye(5)
    b = a - 1.5 * h.T @ h / 5
    oracle = sb.negative_moment(b, 3.0)
    assert oracle > 0
    assert sb.bound_exp(a, b, 0.8, 3.0) >= oracle
    assert sb.bound_prim(a, b, 0.8, 3.0) >= sb.bound_exp(a, b, 0.8, 3.0)
    assert sb.bound_exphs(a, b, 0.8, 3.0) >= oracle
    e = sb.expm_neg(a, 0.5)
    assert np.allclose(e, e.T)
    assert np.all(np.linalg.eigvalsh(e) > 0)


def test_schrodinger_surface():
    ball = sb.PotentialSpec(sb.PotentialKind.square_well, 3, amplitude=1.0, radius=1.0)
    assert sb.beta_of_c(ball, 1.0) == pytest.approx(1 - 2 / math.e, rel=1e-8)
    assert sb.cdp_constant(3, 2.0) == pytest.approx((8 * math.pi) ** -0.5, rel=1e-9)
    well = sb.PotentialSpec(sb.PotentialKind.square_well, 1, amplitude=10.0, radius=1.0)
    grid = sb.GridSpec(1, 5.0, 400)
    oracle = sb.oracle_moment(well, grid, 3.0)
    b = sb.bound_semigroup(well, grid, 3.0)
    assert b["theorem"] == "mapw"
    assert b["value"] >= oracle
    with pytest.raises(ValueError):
        sb.bound_lp(well, grid, 3.0, 3.0)
    with pytest.raises(ValueError):
        sb.PotentialSpec(sb.PotentialKind.power_law_cutoff, 3, eta=2.5)
