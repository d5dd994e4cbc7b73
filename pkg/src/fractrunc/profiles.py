"""Explicit barrier and supersolution profiles on R^N and the half-space.

Every constructed function is an *evaluable field*: callable on points,
carrying the metadata the operator module needs (C^2 window radius,
non-smooth crossing locations along a line, growth exponent).  Radial
profiles are cap/tail constructions: a power of |x| beyond a junction
radius, glued C^3 to the third-order Taylor cubic of the same power inside.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .constants import (
    NoRootError,
    c_s_mu,
    find_gamma_bar,
    find_gamma_plus,
    normalizing_constant,
)

__all__ = [
    "InvariantViolation",
    "ExponentOutOfRange",
    "Hyperplane",
    "Sphere",
    "RadialProfile",
    "TransformParams",
    "make_cap",
    "make_w_gamma",
    "make_v_gamma",
    "make_v_minus_gamma",
    "make_psi",
    "make_bump_train",
    "make_halfspace_power_tail",
    "make_power_profile",
    "make_singular_power",
    "build_thIN_supersolution",
    "build_singular_supersolution",
    "power_transform",
    "profile_to_json",
    "profile_from_json",
]


class InvariantViolation(ValueError):
    """A constructed profile fails its numeric invariants."""


class ExponentOutOfRange(ValueError):
    """An exponent parameter lies outside the admitted range."""


# ---------------------------------------------------------------------------
# discontinuity surfaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hyperplane:
    """The surface {x_N = level}."""

    level: float = 0.0

    def crossings(self, x: np.ndarray, xi: np.ndarray) -> list[float]:
        if abs(xi[-1]) < 1e-15:
            return []
        return [(self.level - x[-1]) / xi[-1]]


@dataclass(frozen=True)
class Sphere:
    """The surface {|x - center| = radius}."""

    radius: float
    center: Optional[tuple[float, ...]] = None

    def crossings(self, x: np.ndarray, xi: np.ndarray) -> list[float]:
        c = np.zeros_like(x) if self.center is None else np.asarray(self.center, float)
        d = x - c
        b = float(d @ xi)
        disc = b * b - float(d @ d) + self.radius**2
        if disc <= 0.0:
            return []
        root = math.sqrt(disc)
        return [-b - root, -b + root]


def _surface_breakpoints(surfaces: Sequence, x: np.ndarray,
                         xi: np.ndarray) -> list[float]:
    out: list[float] = []
    for srf in surfaces:
        out.extend(srf.crossings(x, xi))
    return sorted(t for t in out if abs(t) > 1e-9)


# ---------------------------------------------------------------------------
# cap/tail machinery
# ---------------------------------------------------------------------------

def make_cap(gamma: float, junction_r2: float, sign: float = 1.0) -> tuple[float, ...]:
    """Third-order Taylor coefficients of sign * r^{-sign*gamma/2} at the junction.

    ``sign=+1`` produces the decay cap (Taylor of r^{-gamma/2}); ``sign=-1``
    the growth cap (Taylor of -r^{+gamma/2}).  Coefficients are in powers of
    (r - junction_r2), ``r`` being the squared-radius variable.
    """
    if gamma <= 0.0:
        raise ExponentOutOfRange("gamma must be positive")
    p = -sign * gamma / 2.0
    j = junction_r2

    def h(order: int) -> float:
        coeff = sign
        e = p
        for _ in range(order):
            coeff *= e
            e -= 1.0
        return coeff * j**e

    return (h(0), h(1), h(2) / 2.0, h(3) / 6.0)


class _PiecewiseG:
    """g(r) in the squared-radius variable: cubic cap for r <= junction, power tail.

    Tail is sign * r^{-sign*gamma/2}; derivatives available through order 3.
    """

    def __init__(self, gamma: float, junction_r2: float, sign: float = 1.0) -> None:
        self.gamma = gamma
        self.junction_r2 = junction_r2
        self.sign = sign
        self.p = -sign * gamma / 2.0
        self.cap = make_cap(gamma, junction_r2, sign)

    def value(self, r: float, order: int = 0) -> float:
        if r <= self.junction_r2:
            a = self.cap
            d = r - self.junction_r2
            if order == 0:
                return a[0] + d * (a[1] + d * (a[2] + d * a[3]))
            if order == 1:
                return a[1] + d * (2.0 * a[2] + 3.0 * d * a[3])
            if order == 2:
                return 2.0 * a[2] + 6.0 * d * a[3]
            if order == 3:
                return 6.0 * a[3]
            return 0.0
        coeff = self.sign
        e = self.p
        for _ in range(order):
            coeff *= e
            e -= 1.0
        return coeff * r**e


# ---------------------------------------------------------------------------
# evaluable field base
# ---------------------------------------------------------------------------

class Field:
    """Base evaluable field; subclasses fill in metadata hooks."""

    kind: str = "field"
    growth_alpha: float = 0.0
    growth_const: Optional[float] = None
    is_radial: bool = False

    def __call__(self, y: np.ndarray) -> float:  # pragma: no cover - abstract
        raise NotImplementedError

    def c2_radius(self, x: np.ndarray) -> float:
        return 1.0

    def breakpoints(self, x: np.ndarray, xi: np.ndarray) -> list[float]:
        return []

    def params(self) -> dict:
        return {}


class _ScaledField(Field):
    kind = "scaled"

    def __init__(self, base: Field, factor: float) -> None:
        self.base = base
        self.factor = factor
        self.growth_alpha = base.growth_alpha
        if base.growth_const is not None:
            self.growth_const = abs(factor) * base.growth_const
        self.is_radial = base.is_radial

    def __call__(self, y: np.ndarray) -> float:
        return self.factor * self.base(y)

    def c2_radius(self, x: np.ndarray) -> float:
        return self.base.c2_radius(x)

    def breakpoints(self, x: np.ndarray, xi: np.ndarray) -> list[float]:
        return self.base.breakpoints(x, xi)

    def params(self) -> dict:
        return {"factor": self.factor, "base": profile_to_json(self.base)}


class _SumField(Field):
    kind = "sum"

    def __init__(self, parts: Sequence[Field]) -> None:
        self.parts = list(parts)
        self.growth_alpha = max(p.growth_alpha for p in self.parts)

    def __call__(self, y: np.ndarray) -> float:
        return sum(p(y) for p in self.parts)

    def c2_radius(self, x: np.ndarray) -> float:
        return min(p.c2_radius(x) for p in self.parts)

    def breakpoints(self, x: np.ndarray, xi: np.ndarray) -> list[float]:
        out: list[float] = []
        for p in self.parts:
            out.extend(p.breakpoints(x, xi))
        return sorted(set(out))

    def params(self) -> dict:
        return {"parts": [profile_to_json(p) for p in self.parts]}


# ---------------------------------------------------------------------------
# radial profiles
# ---------------------------------------------------------------------------

class RadialProfile(Field):
    """Cap/tail radial profile v(x) = g(|x|^2) with C^3 junction."""

    kind = "radial"
    is_radial = True

    def __init__(self, gamma: float, junction_r2: float,
                 orientation: str = "decay") -> None:
        if orientation not in ("decay", "growth"):
            raise ValueError("orientation must be 'decay' or 'growth'")
        sign = 1.0 if orientation == "decay" else -1.0
        self.gamma = gamma
        self.junction_r2 = junction_r2
        self.orientation = orientation
        self.tail_exponent = -gamma if orientation == "decay" else gamma
        self.g = _PiecewiseG(gamma, junction_r2, sign)
        self.cap_coeffs = self.g.cap
        self.growth_alpha = 0.0 if orientation == "decay" else max(0.0, gamma)
        self._validate()

    # -- evaluation ---------------------------------------------------------
    def __call__(self, y: np.ndarray) -> float:
        return self.g.value(float(np.dot(y, y)))

    def radial_value(self, r2: float, order: int = 0) -> float:
        return self.g.value(r2, order)

    def c2_radius(self, x: np.ndarray) -> float:
        # C^3 everywhere; a unit window keeps Taylor pieces local
        return 1.0

    def breakpoints(self, x: np.ndarray, xi: np.ndarray) -> list[float]:
        return _surface_breakpoints(
            [Sphere(math.sqrt(self.junction_r2))], np.asarray(x, float),
            np.asarray(xi, float))

    def d2_along(self, x: np.ndarray, xi: np.ndarray) -> float:
        r2 = float(np.dot(x, x))
        b = float(np.dot(x, xi))
        return self.g.value(r2, 2) * 4.0 * b * b + self.g.value(r2, 1) * 2.0

    def partial(self, e: np.ndarray) -> "RadialDerivativeField":
        return RadialDerivativeField(self, np.asarray(e, float))

    # -- invariants ---------------------------------------------------------
    def _validate(self) -> None:
        j = self.junction_r2
        for order in range(3):
            cap = self.g.value(j, order)
            tail = self.g.value(j * (1.0 + 1e-14) + 1e-300, order)
            if abs(cap - tail) > 1e-10 * max(1.0, abs(cap)):
                raise InvariantViolation(
                    f"C3 junction mismatch at order {order}: {cap} vs {tail}")
        grid = np.linspace(1e-6, 4.0 * j, 1000)
        for order in (0, 2):
            vals = np.array([self.g.value(r, order) for r in grid])
            second = vals[:-2] - 2.0 * vals[1:-1] + vals[2:]
            if np.min(second) < -1e-9 * max(1.0, float(np.max(np.abs(vals)))):
                raise InvariantViolation(
                    f"g^{(order)} fails grid convexity (min 2nd diff {np.min(second):.2e})")
        if self.orientation == "growth":
            for r in np.linspace(0.0, 1.0, 101):
                if self.g.value(r) > -r ** (self.gamma / 2.0) + 1e-12:
                    raise InvariantViolation(
                        f"growth cap fails dominance at r={r}")

    def check_representation_hypotheses(self) -> None:
        self._validate()

    def params(self) -> dict:
        return {"gamma": self.gamma, "junction_r2": self.junction_r2,
                "orientation": self.orientation}


class RadialDerivativeField(Field):
    """Directional derivative 2<y,e> g'(|y|^2) of a radial profile."""

    kind = "radial_derivative"

    def __init__(self, base: RadialProfile, e: np.ndarray) -> None:
        self.base = base
        self.e = np.asarray(e, float)
        # decay: derivative decays; growth (gamma <= 2s-1 < 1): |Dv| ~ |y|^{gamma-1} bounded
        self.growth_alpha = 0.0

    def __call__(self, y: np.ndarray) -> float:
        r2 = float(np.dot(y, y))
        return 2.0 * float(np.dot(y, self.e)) * self.base.g.value(r2, 1)

    def c2_radius(self, x: np.ndarray) -> float:
        # Dv is C^2 away from the junction sphere (v is only C^3 there)
        r = float(np.linalg.norm(x))
        rj = math.sqrt(self.base.junction_r2)
        return float(np.clip(abs(r - rj), 0.02, 1.0))

    def breakpoints(self, x: np.ndarray, xi: np.ndarray) -> list[float]:
        return self.base.breakpoints(x, xi)

    def params(self) -> dict:
        return {"base": profile_to_json(self.base), "e": list(self.e)}


def make_w_gamma(gamma: float) -> RadialProfile:
    """Barrier profile: |x|^{-gamma} tail with junction at |x|^2 = 1/2."""
    return RadialProfile(gamma, 0.5, "decay")


def make_v_gamma(gamma: float) -> RadialProfile:
    """Bounded-derivative profile: |x|^{-gamma} tail with junction at |x|^2 = 1."""
    if not 0.0 < gamma < 1.0:
        raise ExponentOutOfRange("gamma must lie in (0,1)")
    return RadialProfile(gamma, 1.0, "decay")


def make_v_minus_gamma(gamma: float, s: float) -> RadialProfile:
    """Growth profile: -|x|^{gamma} tail, cubic Hermite cap, junction |x|^2 = 1."""
    if not 0.5 < s < 1.0:
        raise ExponentOutOfRange("s must lie in (1/2,1)")
    if not 0.0 < gamma <= 2.0 * s - 1.0 + 1e-12:
        raise ExponentOutOfRange("gamma must lie in (0, 2s-1]")
    return RadialProfile(gamma, 1.0, "growth")


# ---------------------------------------------------------------------------
# half-space constructions
# ---------------------------------------------------------------------------

class PsiField(_ScaledField):
    """Subsolution candidate: -(1/gamma_lead)(D_N v_a + D_N v_b)."""

    kind = "psi"

    def __init__(self, variant: str, k: int, s: float,
                 gamma_lead: float, gamma_second: float) -> None:
        self.variant = variant
        self.k = k
        self.s = s
        self.gamma_lead = gamma_lead
        self.gamma_second = gamma_second
        if variant in ("decay", "halfint"):
            lead = make_v_gamma(gamma_lead)
        else:
            lead = make_v_minus_gamma(gamma_lead, s)
        self._lead_profile = lead
        pieces: list[Field] = [_PartialN(lead)]
        if variant == "decay":
            pieces.append(_PartialN(make_v_gamma(gamma_second)))
        elif variant == "growth":
            pieces.append(_PartialN(make_v_minus_gamma(gamma_second, s)))
        super().__init__(_SumField(pieces), -1.0 / gamma_lead)

    def params(self) -> dict:
        return {"variant": self.variant, "k": self.k, "s": self.s,
                "gamma_lead": self.gamma_lead, "gamma_second": self.gamma_second}


class _PartialN(RadialDerivativeField):
    """D_{x_N} of a radial profile (derivative along the last axis)."""

    kind = "partial_n"

    def __init__(self, base: RadialProfile) -> None:
        self.base = base
        self.growth_alpha = 0.0

    def __call__(self, y: np.ndarray) -> float:
        r2 = float(np.dot(y, y))
        return 2.0 * float(y[-1]) * self.base.g.value(r2, 1)

    def c2_radius(self, x: np.ndarray) -> float:
        r = float(np.linalg.norm(x))
        rj = math.sqrt(self.base.junction_r2)
        return float(np.clip(abs(r - rj), 0.02, 1.0))

    def params(self) -> dict:
        return {"base": profile_to_json(self.base)}


def make_psi(kind: str, k: int, s: float,
             gamma: Optional[float] = None) -> PsiField:
    """The three subsolution candidates.

    ``decay``: requires the bounded-exponent root gamma_bar(k, s) to exist;
    the free second exponent defaults to min(gamma_bar + 0.2, (1+gamma_bar)/2).
    ``halfint``: k = 1, s = 1/2, single-profile variant; default gamma 0.5.
    ``growth``: s > 1/2 with lead exponent 2s-1; default second gamma (2s-1)/2.
    """
    if kind == "decay":
        bar = find_gamma_bar(k, s)
        if bar is None:
            raise NoRootError(
                f"no bounded exponent root exists for k={k}, s={s}")
        gb = bar.root
        g2 = gamma if gamma is not None else min(gb + 0.2, (1.0 + gb) / 2.0)
        if not gb < g2 < 1.0:
            raise ExponentOutOfRange("second exponent must lie in (gamma_bar, 1)")
        return PsiField("decay", k, s, gb, g2)
    if kind == "halfint":
        if k != 1:
            raise ExponentOutOfRange("halfint variant requires k = 1")
        g = gamma if gamma is not None else 0.5
        if not 0.0 < g < 1.0:
            raise ExponentOutOfRange("gamma must lie in (0,1)")
        return PsiField("halfint", k, s, g, g)
    if kind == "growth":
        if not s > 0.5:
            raise ExponentOutOfRange("growth variant requires s > 1/2")
        gb = 2.0 * s - 1.0
        g2 = gamma if gamma is not None else gb / 2.0
        if not 0.0 < g2 < gb:
            raise ExponentOutOfRange("second exponent must lie in (0, 2s-1)")
        return PsiField("growth", k, s, gb, g2)
    raise ValueError(f"unknown psi kind {kind!r}")


class BumpTrain(Field):
    """Train of disjoint bumps sum_n (eps^2 - (x_N - n - eps)^2)_+^s.

    Only the first ``window`` bumps are retained; the neglected far bumps'
    kernel contribution is bounded by eps^{2s} * distance^{-2s} / s and
    surfaced through ``extra_abs_error``.
    """

    kind = "bump_train"

    def __init__(self, eps: float, s: float, window: int = 400) -> None:
        if not 0.0 < eps < 0.5:
            raise ExponentOutOfRange("eps must lie in (0, 1/2)")
        self.eps = eps
        self.s = s
        self.window = int(window)
        self.growth_alpha = 0.0
        self.growth_const = eps ** (2.0 * s)

    def _bump(self, t: float, n: int) -> float:
        arg = self.eps**2 - (t - n - self.eps) ** 2
        return arg**self.s if arg > 0.0 else 0.0

    def __call__(self, y: np.ndarray) -> float:
        t = float(np.asarray(y, float).reshape(-1)[-1])
        n = math.floor(t)
        if n < 0 or n >= self.window:
            return 0.0
        return self._bump(t, n)

    def c2_radius(self, x: np.ndarray) -> float:
        t = float(np.asarray(x, float).reshape(-1)[-1])
        edges = self._edges()
        d = min(abs(t - e) for e in edges)
        return max(d / 2.0, 1e-6)

    def _edges(self) -> list[float]:
        out = []
        for n in range(self.window):
            out.append(float(n))
            out.append(n + 2.0 * self.eps)
        return out

    def breakpoints(self, x: np.ndarray, xi: np.ndarray) -> list[float]:
        x = np.asarray(x, float)
        xi = np.asarray(xi, float)
        if abs(xi[-1]) < 1e-15:
            return []
        return sorted(t for t in ((e - x[-1]) / xi[-1] for e in self._edges())
                      if abs(t) > 1e-9)

    def extra_abs_error(self, x: np.ndarray) -> float:
        t = float(np.asarray(x, float).reshape(-1)[-1])
        dist = max(self.window - t, 1.0)
        return self.eps ** (2.0 * self.s) * dist ** (-2.0 * self.s) / self.s

    def params(self) -> dict:
        return {"eps": self.eps, "s": self.s, "window": self.window}


def make_bump_train(eps: float, s: float, window: int = 400) -> BumpTrain:
    return BumpTrain(eps, s, window)


class HalfSpacePowerTail(Field):
    """Cap/tail radial profile restricted to the open half-space, 0 elsewhere.

    ``shift`` evaluates the profile at ``x + shift*e_N`` (used by the min
    composition); the vanishing region stays {x_N <= 0} of the *argument*.
    """

    kind = "halfspace_power_tail"

    def __init__(self, gamma: float, shift: float = 0.0) -> None:
        if gamma <= 0.0:
            raise ExponentOutOfRange("gamma must be positive")
        self.gamma = gamma
        self.shift = shift
        self.radial = RadialProfile(gamma, 1.0, "decay")
        self.growth_alpha = 0.0
        self.growth_const = float(self.radial.g.value(0.0))

    def __call__(self, y: np.ndarray) -> float:
        y = np.asarray(y, float)
        if y[-1] <= 0.0:
            return 0.0
        z = y.copy()
        z[-1] += self.shift
        return self.radial(z)

    def c2_radius(self, x: np.ndarray) -> float:
        x = np.asarray(x, float)
        if x[-1] <= 0.0:
            return max(-x[-1] / 2.0, 1e-6)
        z = x.copy()
        z[-1] += self.shift
        r = float(np.linalg.norm(z))
        return float(np.clip(min(x[-1] / 2.0, abs(r - 1.0)), 1e-6, 1.0))

    def breakpoints(self, x: np.ndarray, xi: np.ndarray) -> list[float]:
        x = np.asarray(x, float)
        xi = np.asarray(xi, float)
        z = x.copy()
        z[-1] += self.shift
        out = _surface_breakpoints([Hyperplane(0.0)], x, xi)
        out.extend(_surface_breakpoints([Sphere(1.0)], z, xi))
        return sorted(set(out))

    def params(self) -> dict:
        return {"gamma": self.gamma, "shift": self.shift}


def make_halfspace_power_tail(gamma: float, shift: float = 0.0) -> HalfSpacePowerTail:
    return HalfSpacePowerTail(gamma, shift)


class PowerProfile(Field):
    """z(x) = coefficient * (x_N)_+^mu."""

    kind = "singular_power"

    def __init__(self, mu: float, coefficient: float = 1.0) -> None:
        if mu <= 0.0:
            raise ExponentOutOfRange("mu must be positive")
        self.mu = mu
        self.coefficient = coefficient
        self.growth_alpha = mu

    def __call__(self, y: np.ndarray) -> float:
        t = float(np.asarray(y, float).reshape(-1)[-1])
        return self.coefficient * t**self.mu if t > 0.0 else 0.0

    def c2_radius(self, x: np.ndarray) -> float:
        t = float(np.asarray(x, float).reshape(-1)[-1])
        return max(abs(t) / 2.0, 1e-9)

    def breakpoints(self, x: np.ndarray, xi: np.ndarray) -> list[float]:
        return _surface_breakpoints([Hyperplane(0.0)], np.asarray(x, float),
                                    np.asarray(xi, float))

    def d2_along(self, x: np.ndarray, xi: np.ndarray) -> float:
        t = float(np.asarray(x, float).reshape(-1)[-1])
        if t <= 0.0:
            return 0.0
        return (self.coefficient * self.mu * (self.mu - 1.0)
                * float(xi[-1]) ** 2 * t ** (self.mu - 2.0))

    def params(self) -> dict:
        return {"mu": self.mu, "coefficient": self.coefficient}


def make_power_profile(mu: float) -> PowerProfile:
    return PowerProfile(mu, 1.0)


def make_singular_power(mu: float, coefficient: float) -> PowerProfile:
    return PowerProfile(mu, coefficient)


class MinField(Field):
    """Pointwise minimum of two fields (the min composition w = min{phi, z})."""

    kind = "min_composition"

    def __init__(self, first: Field, second: Field, scale: float = 1.0) -> None:
        self.first = first
        self.second = second
        self.scale = scale
        self.growth_alpha = 0.0  # min of a bounded and a growing profile is bounded

    def __call__(self, y: np.ndarray) -> float:
        return self.scale * min(self.first(y), self.second(y))

    def c2_radius(self, x: np.ndarray) -> float:
        base = min(self.first.c2_radius(x), self.second.c2_radius(x))
        cross = self._crossings(x, None, radius=2.0 * base)
        if cross:
            base = min(base, min(abs(t) for t in cross))
        return max(base, 1e-6)

    def _crossings(self, x: np.ndarray, xi: Optional[np.ndarray],
                   radius: float = 0.0) -> list[float]:
        # sign changes of first - second along the line (sampled + refined)
        x = np.asarray(x, float)
        if xi is None:
            xi = np.zeros_like(x)
            xi[-1] = 1.0
        span = max(10.0, 2.0 * float(np.linalg.norm(x)) + 4.0)
        if radius > 0.0:
            span = radius

        def diff(t: float) -> float:
            p = x + t * xi
            return self.first(p) - self.second(p)

        grid = np.linspace(-span, span, 801)
        vals = np.array([diff(t) for t in grid])
        out = []
        for lo, hi, vlo, vhi in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
            if vlo == 0.0:
                out.append(float(lo))
            elif vlo * vhi < 0.0:
                out.append(float(brentq(diff, lo, hi)))
        return [t for t in out if abs(t) > 1e-9]

    def breakpoints(self, x: np.ndarray, xi: np.ndarray) -> list[float]:
        xi = np.asarray(xi, float)
        out = list(self.first.breakpoints(x, xi))
        out.extend(self.second.breakpoints(x, xi))
        out.extend(self._crossings(np.asarray(x, float), xi))
        return sorted(set(out))

    def params(self) -> dict:
        return {"first": profile_to_json(self.first),
                "second": profile_to_json(self.second), "scale": self.scale}


def build_thIN_supersolution(N: int, s: float, p: float,
                             mu: Optional[float] = None) -> tuple[MinField, dict]:
    """Supersolution eps*min{phi, z} for the full-frame minimal operator.

    ``phi`` is the half-space power tail shifted by R = sqrt(N/(N-1)) along
    e_N; ``z`` the mu-power profile.  Requires p > 1 + 2s/gamma_plus so that
    gamma = 2s/(p-1) lies below the critical root and both constants are
    positive.
    """
    from .constants import c_n_plus  # local import to keep module load cheap

    gamma_plus = find_gamma_plus(N, s).root
    threshold = 1.0 + 2.0 * s / gamma_plus
    if not p > threshold:
        raise ExponentOutOfRange(
            f"p must exceed 1 + 2s/gamma_plus = {threshold:.6f}")
    gamma = 2.0 * s / (p - 1.0)
    mu = s / 2.0 if mu is None else mu
    if not 0.0 < mu < s:
        raise ExponentOutOfRange("mu must lie in (0, s)")
    Cs = normalizing_constant(s)
    alpha = -c_n_plus(gamma, s, N) * Cs
    beta = -c_s_mu(mu, s) * Cs
    if alpha <= 0.0 or beta <= 0.0:
        raise InvariantViolation("supersolution constants must be positive")
    eps = min(alpha, beta) ** (1.0 / (p - 1.0))
    R = math.sqrt(N / (N - 1.0))
    phi = HalfSpacePowerTail(gamma, shift=R)
    z = PowerProfile(mu, 1.0)
    w = MinField(phi, z, scale=eps)
    params = {"alpha": alpha, "beta": beta, "eps": eps, "gamma": gamma,
              "mu": mu, "R": R, "p": p, "threshold": threshold}
    return w, params


def build_singular_supersolution(s: float, p: float, op_kind: str,
                                 N: int) -> tuple[PowerProfile, float, float]:
    """Singular-power supersolution M (x_N)_+^mu with mu = 2s/(1-p), p < -1."""
    if not p < -1.0:
        raise ExponentOutOfRange("p must be < -1")
    if op_kind not in ("ik_minus", "in_plus"):
        raise ValueError("op_kind must be 'ik_minus' or 'in_plus'")
    mu = 2.0 * s / (1.0 - p)
    big_c = normalizing_constant(s) * c_s_mu(mu, s)
    if not big_c < 0.0:
        raise InvariantViolation("the power constant must be negative for mu < s")
    scale = 1.0 if op_kind == "ik_minus" else N**s
    M = (scale / abs(big_c)) ** (1.0 / (1.0 - p))
    return PowerProfile(mu, M), M, mu


# ---------------------------------------------------------------------------
# power transform
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransformParams:
    """Exponent bookkeeping for the supersolution power transform."""

    p: float
    q: float

    @property
    def beta_exp(self) -> float:
        if self.q == self.p:
            return 1.0
        return (self.p - 1.0) / (self.q - 1.0)

    @property
    def alpha_coef(self) -> float:
        if self.q == self.p:
            return 1.0
        return self.beta_exp ** (1.0 / (self.q - 1.0))

    def validate(self) -> None:
        b, a = self.beta_exp, self.alpha_coef
        if not 0.0 < b <= 1.0:
            raise ExponentOutOfRange(
                "transform requires beta in (0,1]: need 1<p<q or q<p<1")
        if abs(b - 1.0 + self.p - b * self.q) > 1e-12:
            raise InvariantViolation("identity beta-1+p = beta*q fails")
        if abs(a * b - a**self.q) > 1e-12 * max(1.0, abs(a**self.q)):
            raise InvariantViolation("identity alpha*beta = alpha^q fails")


class PowerTransformField(Field):
    """alpha * base^beta for a nonnegative base field."""

    kind = "power_transform"

    def __init__(self, base: Field, tp: TransformParams) -> None:
        tp.validate()
        self.base = base
        self.tp = tp
        self.growth_alpha = base.growth_alpha * tp.beta_exp

    def __call__(self, y: np.ndarray) -> float:
        v = self.base(y)
        if v < 0.0:
            raise ValueError("power transform requires a nonnegative base")
        return self.tp.alpha_coef * v**self.tp.beta_exp

    def c2_radius(self, x: np.ndarray) -> float:
        return self.base.c2_radius(x)

    def breakpoints(self, x: np.ndarray, xi: np.ndarray) -> list[float]:
        return self.base.breakpoints(x, xi)

    def params(self) -> dict:
        return {"base": profile_to_json(self.base), "p": self.tp.p, "q": self.tp.q}


def power_transform(u: Field, p: float, q: float) -> Field:
    """v = ((p-1)/(q-1))^{1/(q-1)} * u^{(p-1)/(q-1)}.

    For a pure power profile the result is again a pure power profile
    (coefficient alpha*M^beta, exponent mu*beta) and is returned in closed
    form; otherwise a pointwise wrapper field.
    """
    tp = TransformParams(p, q)
    tp.validate()
    if isinstance(u, PowerProfile):
        return PowerProfile(u.mu * tp.beta_exp,
                            tp.alpha_coef * u.coefficient**tp.beta_exp)
    return PowerTransformField(u, tp)


# ---------------------------------------------------------------------------
# JSON round-trip
# ---------------------------------------------------------------------------

def profile_to_json(f: Field) -> dict:
    return {"kind": f.kind, "params": f.params()}


def profile_from_json(doc: dict) -> Field:
    kind = doc["kind"]
    p = doc.get("params", {})
    if kind == "radial":
        return RadialProfile(p["gamma"], p["junction_r2"], p["orientation"])
    if kind == "partial_n":
        return _PartialN(profile_from_json(p["base"]))
    if kind == "radial_derivative":
        return RadialDerivativeField(profile_from_json(p["base"]),
                                     np.asarray(p["e"], float))
    if kind == "sum":
        return _SumField([profile_from_json(d) for d in p["parts"]])
    if kind == "scaled":
        return _ScaledField(profile_from_json(p["base"]), p["factor"])
    if kind == "psi":
        return PsiField(p["variant"], p["k"], p["s"], p["gamma_lead"],
                        p["gamma_second"])
    if kind == "bump_train":
        return BumpTrain(p["eps"], p["s"], p["window"])
    if kind == "halfspace_power_tail":
        return HalfSpacePowerTail(p["gamma"], p.get("shift", 0.0))
    if kind == "singular_power":
        return PowerProfile(p["mu"], p.get("coefficient", 1.0))
    if kind == "min_composition":
        return MinField(profile_from_json(p["first"]),
                        profile_from_json(p["second"]), p.get("scale", 1.0))
    if kind == "power_transform":
        return PowerTransformField(profile_from_json(p["base"]),
                                   TransformParams(p["p"], p["q"]))
    raise ValueError(f"unknown profile kind {kind!r}")
