"""Directional operator engine, frames, and extremal search."""

import math

import numpy as np
import pytest

from fractrunc import constants as cn
from fractrunc import operators as op
from fractrunc import profiles as pr
from fractrunc.quad import Tolerance

import oracles as oc

TOL = Tolerance(1e-10, 1e-9)


class CompactBump:
    """(1 - |t|^2)_+^s along the last axis; zero metadata elsewhere."""

    def __init__(self, s):
        self.s = s
        self.growth_alpha = 0.0
        self.growth_const = 1.0
        self.is_radial = False

    def __call__(self, y):
        arg = 1.0 - float(y[-1]) ** 2
        return arg**self.s if arg > 0.0 else 0.0

    def c2_radius(self, x):
        return max(abs(1.0 - abs(float(x[-1]))) / 2.0, 1e-6)

    def breakpoints(self, x, xi):
        if abs(xi[-1]) < 1e-14:
            return []
        return sorted((b - float(x[-1])) / float(xi[-1]) for b in (-1.0, 1.0))


@pytest.mark.parametrize("s", [0.25, 0.5])
@pytest.mark.parametrize("t", [0.0, 0.5])
def test_bump_raw_identity(s, t):
    u = CompactBump(s)
    x = np.array([0.0, t])
    r = op.directional_at(u, x, np.array([0.0, 1.0]), s, TOL, include_Cs=False)
    assert r.value == pytest.approx(oc.BUMP_IDENTITY[s], rel=1e-8)


@pytest.mark.parametrize("s,mu", [(0.25, 0.1), (0.5, 0.7), (0.75, 1.2)])
def test_power_identity_axis(s, mu):
    z = pr.make_power_profile(mu)
    x = np.array([0.0, 0.0, 1.3])
    r = op.directional_at(z, x, np.array([0.0, 0.0, 1.0]), s, TOL)
    predicted = (cn.normalizing_constant(s) * cn.c_s_mu(mu, s)
                 * 1.3 ** (mu - 2.0 * s))
    assert r.value == pytest.approx(predicted, rel=1e-7)


def test_power_identity_oblique():
    s, mu = 0.5, 0.7
    z = pr.make_power_profile(mu)
    x = np.array([0.0, 1.0])
    xi = np.array([math.sqrt(3.0) / 2.0, 0.5])
    r = op.directional_at(z, x, xi, s, TOL)
    predicted = (cn.normalizing_constant(s) * 0.5 ** (2.0 * s)
                 * cn.c_s_mu(mu, s))
    assert r.value == pytest.approx(predicted, rel=1e-7)


def test_power_identity_tangential_is_zero():
    z = pr.make_power_profile(0.7)
    r = op.directional_at(z, np.array([0.0, 1.0]), np.array([1.0, 0.0]),
                          0.5, TOL)
    assert abs(r.value) <= 1e-9


def test_perpendicular_radial_identity():
    # lines perpendicular to the radial direction see the pure power tail
    gamma, s = 0.6, 0.3
    w = pr.make_w_gamma(gamma)
    x = np.array([0.0, 2.0])
    r = op.directional_at(w, x, np.array([1.0, 0.0]), s, TOL)
    predicted = (cn.normalizing_constant(s) * cn.c_perp(gamma, s)
                 * 2.0 ** (-gamma - 2.0 * s))
    assert r.value == pytest.approx(predicted, rel=1e-7)


def test_homogeneity_2s():
    gamma, s = 0.6, 0.4
    w = pr.make_w_gamma(gamma)
    xi = np.array([0.6, 0.8])
    a = op.directional_at(w, np.array([0.0, 3.0]), xi, s, TOL)
    b = op.directional_at(w, np.array([0.0, 6.0]), xi, s, TOL)
    assert b.value == pytest.approx(a.value * 2.0 ** (-gamma - 2.0 * s),
                                    rel=1e-7)


def test_frame_validation():
    with pytest.raises(ValueError):
        op.Frame(np.array([[1.0, 0.0], [1.0, 0.0]]))
    f = op.canonical_frame(3, 2)
    assert f.k == 2 and f.N == 3


def test_householder_frame_angles():
    xhat = np.array([0.3, -0.5, 0.8124038404635961])
    xhat /= np.linalg.norm(xhat)
    f = op.householder_frame(xhat)
    dots = f.vectors @ xhat
    assert np.allclose(np.abs(dots), 1.0 / math.sqrt(3.0), atol=1e-12)
    assert np.allclose(f.vectors @ f.vectors.T, np.eye(3), atol=1e-12)


def test_completion_frame_contains_radial():
    xhat = np.array([0.6, 0.8])
    f = op.completion_frame(xhat, 2)
    assert np.allclose(f.vectors[0], xhat, atol=1e-12)


def test_random_frame_orthonormal():
    rng = np.random.default_rng(0)
    f = op.random_frame(4, 3, rng)
    assert np.allclose(f.vectors @ f.vectors.T, np.eye(3), atol=1e-12)


def test_frame_sum_additivity():
    gamma, s = 0.5, 0.4
    w = pr.make_w_gamma(gamma)
    x = np.array([0.0, 2.0])
    f = op.canonical_frame(2, 2)
    total = op.frame_sum(w, x, f, s, TOL)
    parts = sum((op.directional_at(w, x, xi, s, TOL) for xi in f.vectors),
                start=op.QuadResult(0.0, 0.0, 0))
    assert total.value == pytest.approx(parts.value, abs=1e-10)


def test_minus_full_matches_isotropic_constant():
    gamma, s, N = 0.7, 0.5, 3
    w = pr.make_w_gamma(gamma)
    x = 2.0 * np.eye(N)[0]
    r = op.extremal_radial(w, x, s, N, "minus_full", TOL)
    predicted = (N * cn.normalizing_constant(s) * cn.c_iso(gamma, s, N)
                 * 2.0 ** (-gamma - 2.0 * s))
    assert r.value == pytest.approx(predicted, rel=1e-6)


@pytest.mark.parametrize("k,closed_variant,search_variant",
                         [(1, "plus", "plus"), (2, "plus", "plus"),
                          (2, "minus_full", "minus")])
def test_search_matches_closed_form_n2(k, closed_variant, search_variant):
    gamma, s = 0.5, 0.5
    w = pr.make_w_gamma(gamma)
    x = np.array([2.0, 0.0])
    closed = op.extremal_radial(w, x, s, k, closed_variant, TOL)
    found, frame = op.extremal_search(w, x, s, k, search_variant,
                                      budget=6, seed=1)
    assert found.value == pytest.approx(closed.value, rel=1e-3)
    assert frame.k == k


def test_search_requires_known_variant():
    w = pr.make_w_gamma(0.5)
    with pytest.raises(ValueError):
        op.extremal_search(w, np.array([2.0, 0.0]), 0.5, 1, "sideways")


def test_commutation_residual_small():
    v = pr.make_v_gamma(0.5)
    res = op.derivative_commutation_residual(v, np.array([0.0, 2.0]),
                                             np.array([1.0, 0.0]), 0.25)
    assert abs(res) <= 1e-4


def test_growth_metadata_enforced():
    w = pr.make_w_gamma(0.5)
    section = op.make_section(w, np.array([0.0, 2.0]), np.array([0.0, 1.0]))
    assert section.growth_alpha <= 0.0
    with pytest.raises(ValueError):
        op.LineSection(eval=lambda t: t, c2_delta0=-1.0, d2=0.0,
                       discontinuities=[], growth_alpha=0.0)
