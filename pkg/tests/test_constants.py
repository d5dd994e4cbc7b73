"""Constants module against independent Gamma-function oracles."""

import math

import pytest

from fractrunc import constants as cn
from fractrunc.quad import Tolerance

import oracles as oc

S_GRID = [0.25, 0.5, 0.75]


@pytest.mark.parametrize("s", [0.1, 0.25, 0.5, 0.75, 0.9])
def test_normalizing_constant(s):
    assert cn.normalizing_constant(s) == pytest.approx(
        oc.normalizing_constant_oracle(s), rel=1e-12)


@pytest.mark.parametrize("s", S_GRID)
def test_beta_reflection(s):
    assert cn.beta_1ms_s(s) == pytest.approx(oc.beta_oracle(s), rel=1e-12)


@pytest.mark.parametrize("s", [0.25, 0.4])
@pytest.mark.parametrize("gamma", [0.1, 0.3, 0.45])
def test_hat_c_dec_closed_form(gamma, s):
    # keep gamma + 2s away from 1 where both sides vanish
    if abs(gamma + 2.0 * s - 1.0) < 1e-3:
        pytest.skip("at the root")
    assert cn.hat_c_dec(gamma, s) == pytest.approx(
        oc.hat_c_dec_oracle(gamma, s), rel=1e-8, abs=1e-10)


@pytest.mark.parametrize("s", S_GRID)
@pytest.mark.parametrize("gamma", [0.2, 0.5, 0.8, 1.5, 3.0])
def test_c_perp_closed_form(gamma, s):
    assert cn.c_perp(gamma, s) == pytest.approx(
        oc.c_perp_oracle(gamma, s), rel=1e-8)


@pytest.mark.parametrize("s", [0.25, 0.75])
def test_c_s_mu_closed_form(s):
    for mu in (0.3 * s, 0.8 * s, 1.4 * s):
        assert cn.c_s_mu(mu, s) == pytest.approx(
            oc.c_s_mu_oracle(mu, s), rel=1e-8, abs=1e-10)


def test_c_s_mu_half_quarter():
    # removable point of the closed form: frozen independent value -pi/4
    assert cn.c_s_mu(0.25, 0.5) == pytest.approx(oc.C_HALF_QUARTER, abs=1e-9)


def test_c_s_mu_negative_below_s_zero_at_s():
    assert cn.c_s_mu(0.2, 0.5) < 0.0
    assert abs(cn.c_s_mu(0.5, 0.5)) <= 1e-9


def test_c_k_decomposition():
    # c_k = c_hat + (k-1) c_perp by construction of the frame sum
    gamma, s = 0.4, 0.3
    assert cn.c_k_fn(gamma, s, 3) == pytest.approx(
        cn.hat_c_dec(gamma, s) + 2.0 * cn.c_perp(gamma, s), rel=1e-9)


@pytest.mark.parametrize("bad", [-0.1, 0.0, 1.0, 1.5])
def test_domain_errors_s(bad):
    with pytest.raises(cn.DomainError):
        cn.normalizing_constant(bad)


def test_domain_errors_gamma():
    with pytest.raises(cn.DomainError):
        cn.hat_c_dec(1.2, 0.3)
    with pytest.raises(cn.DomainError):
        cn.hat_c_gro(0.8, 0.6)  # gamma beyond 2s-1
    with pytest.raises(cn.DomainError):
        cn.hat_c_gro(0.2, 0.4)  # needs s > 1/2
    with pytest.raises(cn.DomainError):
        cn.c_s_mu(1.2, 0.5)  # mu beyond 2s


def test_gamma_bar_k1_matches_exact():
    for s in (0.1, 0.25, 0.4):
        r = cn.find_gamma_bar(1, s)
        assert r is not None
        assert r.root == pytest.approx(oc.gamma_bar_k1_oracle(s), abs=1e-8)
    for s in (0.5, 0.75):
        assert cn.find_gamma_bar(1, s) is None


@pytest.mark.parametrize("key", sorted(oc.FROZEN_ROOTS))
def test_frozen_roots(key):
    which, nk, s = key
    expected = oc.FROZEN_ROOTS[key]
    if which == "gamma_bar":
        result = cn.find_gamma_bar(nk, s)
    elif which == "gamma_tilde":
        result = cn.find_gamma_tilde(nk, s)
    else:
        result = cn.find_gamma_plus(nk, s)
    assert result is not None
    assert result.root == pytest.approx(expected, abs=5e-8)
    assert abs(result.residual) <= 1e-8


def test_root_result_fields():
    r = cn.find_gamma_tilde(3, 0.5)
    lo, hi = r.bracket
    assert lo < r.root < hi
    assert r.iterations >= 1


def test_exponent_table_structure():
    table = cn.exponent_table(3, 0.5)
    ops = [row["operator"] for row in table.rows]
    assert ops == ["I_1^-", "I_2^-", "I_3^-", "I_1^+", "I_2^+", "I_3^+"]
    for row in table.rows[:2]:
        assert row["p_star"] == 1.0
        assert row["p_lower_star"] == 1.0
    full_minus = table.rows[2]
    gp = cn.find_gamma_plus(3, 0.5).root
    assert full_minus["p_star_upper"] == pytest.approx(1.0 + 1.0 / gp)
    assert tuple(full_minus["p_lower_star"]) == (-1.0, 0.0)
    plus1 = table.rows[3]
    # k=1, s=1/2: no bounded-exponent root; threshold 1/(1-s)
    assert plus1["p_star_lower"] == pytest.approx(2.0)


def test_tighter_quadrature_stability():
    tol = Tolerance(1e-12, 1e-11)
    a = cn.find_gamma_bar(2, 0.5, tol)
    b = cn.find_gamma_bar(2, 0.5, tol.scaled(0.1))
    assert abs(a.root - b.root) <= 1e-6
