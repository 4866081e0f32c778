import math

import pytest

import invsq


def test_bessel_half_order():
    z = 1.0
    assert invsq.bessel_k(0.5, z) == pytest.approx(math.sqrt(math.pi / (2 * z)) * math.exp(-z), rel=1e-14)


def test_gamma_ratio():
    assert invsq.gamma_ratio(0.5) == pytest.approx(0.5, rel=1e-15)


def test_delta_shell_flow():
    p = invsq.flow("delta-shell", 1.0, 1.0, 0.1, nu=0.5)
    assert p["lambda"] == pytest.approx(10 / 9, rel=1e-14)
    assert p["branch_index"] is None


def test_square_well_flow_branch():
    p = invsq.flow("square-well", 1.0, 1.0, 1e-12, nu=0.5)
    assert p["lambda"] == pytest.approx(math.pi ** 2 / 4, rel=1e-10)
    assert p["branch_index"] == 0


def test_closed_form():
    assert invsq.closed_form_k(1.0, 1.0, nu=0.5) == 1.0
    assert invsq.closed_form_k(1.0, 1.0, g=-0.25) == pytest.approx(math.e)
    assert invsq.closed_form_k(-1.0, 1.0, nu=0.5) is None


def test_exact_and_oracle_agree():
    k = invsq.solve_exact("delta-shell", 1.0, 1.0, 1e-4, nu=0.5)
    assert k == pytest.approx(1.0, rel=2e-4)
    shot = invsq.shoot("delta-shell", 1.0, 1.0, 1e-4, 1e-8, 1e3, nu=0.5)
    assert shot == pytest.approx(k, rel=1e-6)


def test_wave():
    u = invsq.wave("delta-shell", 1.0, 1.0, 1e-6, [1.0, 2.0], nu=0.5, k=1.0)
    assert u[1] / u[0] == pytest.approx(math.exp(-1.0), rel=1e-6)
    z = invsq.wave("square-well", 1.0, 1.0, 1e-3, [1.0], nu=0.5)
    assert abs(z[0]) < 1e-15


def test_errors():
    with pytest.raises(ValueError):
        invsq.flow("delta-shell", 1.0, 1.0, 0.1, g=2.0)
    with pytest.raises(ValueError):
        invsq.flow("gaussian", 1.0, 1.0, 0.1, nu=0.5)
    with pytest.raises(ArithmeticError):
        invsq.flow("delta-shell", 0.25, 1.0, 0.25, nu=0.5)
