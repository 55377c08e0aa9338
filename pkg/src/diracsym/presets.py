"""Named Liouville surfaces used by the CLI and the test suites.

The revolution catalog (profile beta(v), metric (du^2+dv^2)/beta^2)
carries the five classical geometries; "plane-parabolic" is the flat
plane with both profiles nonconstant; "ellipsoid" is the coordinate
patch of an asymmetric ellipsoid in confocal coordinates, rescaled
numerically to Liouville form.

The sphere/pseudosphere names follow the catalog ordering of the
underlying beta profiles.  Under this package's sphere-positive
curvature convention the computed values come out R = -2 for the
"sphere" entry (beta = sinh v) and R = +2 for the "pseudosphere" entry
(beta = cosh v); each preset's ``notes`` field records the computed
sign next to the name so nothing is silently relabeled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .expr import parse
from .geometry import ExprProfile, FuncProfile, LiouvilleSurface, Profile
from .jets import Jet2, jet_power, jet_sqrt, taylor_ode_system

__all__ = [
    "SurfacePreset",
    "PRESETS",
    "get_preset",
    "make_surface",
    "TaylorOdeProfile",
    "ellipsoid_profiles",
    "sample_points",
    "REVOLUTION_CATALOG",
]


class TaylorOdeProfile(Profile):
    """Profile y(x) defined by values plus an autonomous ODE y' = F(y).

    ``value_fn`` supplies the solution value at a query point (from
    quadrature inversion or a dense ODE solution); the jet coefficients
    are generated from the ODE itself, so derivatives of any order are
    consistent with the defining equation to machine precision.
    """

    def __init__(self, var: str, value_fn: Callable[[float], float], rhs: Callable[[Jet2], Jet2]):
        self.var = var
        self.value_fn = value_fn
        self.rhs = rhs

    def jet(self, point, order: int) -> Jet2:
        x0 = point[0] if self.var == "u" else point[1]
        y0 = self.value_fn(x0)
        sols = taylor_ode_system(
            self.var, point, order, [y0], lambda xj, ys: [self.rhs(ys[0])]
        )
        return sols[0]

    def value(self, x: float) -> float:
        return float(self.value_fn(x))


# -- ellipsoid ------------------------------------------------------------------


def _quadric_density(t2: float, a2: float, b2: float, c2: float, h2: float, sign: float) -> float:
    # integrand^2 for the arc-length-like rescaling of each confocal coordinate
    return sign * t2 * (t2 - h2) / ((t2 - c2) * (b2 - t2) * (a2 - t2))


def ellipsoid_profiles(
    a: float = 1.0,
    b: float = 2.0,
    c: float = 3.0,
    h: float = 3.5,
    margin: float = 0.15,
):
    """Liouville profiles A(u) = -x1(u)^2, B(v) = x2(v)^2 for the ellipsoid.

    x1 in (a, b) and x2 in (b, c) are the confocal coordinates on the
    ellipsoid of size parameter h; the rescaled coordinates u, v are
    arc-length-like integrals inverted by bracketed root finding, and
    the profile jets come from the exact profile ODEs.  Requires
    0 <= a < b < c < h.  Returns (a_profile, b_profile, u_range, v_range).
    """
    if not (0.0 <= a < b < c < h):
        raise ValueError(f"ellipsoid parameters need 0 <= a < b < c < h, got {(a, b, c, h)}")
    a2, b2, c2, h2 = a * a, b * b, c * c, h * h

    def make(lo: float, hi: float, sign: float, var: str):
        ref = 0.5 * (lo + hi)
        span = hi - lo
        t_lo, t_hi = lo + margin * span, hi - margin * span

        def density(t: float) -> float:
            return math.sqrt(_quadric_density(t * t, a2, b2, c2, h2, sign))

        def coordinate_of(t: float) -> float:
            val, _ = quad(density, ref, t, epsabs=1e-12, epsrel=1e-12, limit=200)
            return val

        x_lo = coordinate_of(t_lo)
        x_hi = coordinate_of(t_hi)
        inv_cache: dict = {}

        def t_of(x: float) -> float:
            key = float(x)
            if key in inv_cache:
                return inv_cache[key]
            out = brentq(lambda t: coordinate_of(t) - x, lo + 1e-9 * span, hi - 1e-9 * span, xtol=1e-14)
            inv_cache[key] = out
            return out

        return t_of, (x_lo, x_hi)

    t1_of, u_range = make(a, b, -1.0, "u")
    t2_of, v_range = make(b, c, +1.0, "v")

    def a_value(u: float) -> float:
        t = t1_of(u)
        return -t * t

    def a_rhs(a_jet: Jet2) -> Jet2:
        t2 = -a_jet
        p = (-1.0) * t2 * (t2 - h2) / ((t2 - c2) * (b2 - t2) * (a2 - t2))
        return -2.0 * jet_sqrt(t2) / jet_sqrt(p)

    def b_value(v: float) -> float:
        t = t2_of(v)
        return t * t

    def b_rhs(b_jet: Jet2) -> Jet2:
        t2 = b_jet
        q = t2 * (t2 - h2) / ((t2 - c2) * (b2 - t2) * (a2 - t2))
        return 2.0 * jet_sqrt(t2) / jet_sqrt(q)

    a_profile = TaylorOdeProfile("u", a_value, a_rhs)
    b_profile = TaylorOdeProfile("v", b_value, b_rhs)
    return a_profile, b_profile, u_range, v_range


# -- preset registry --------------------------------------------------------------


@dataclass
class SurfacePreset:
    name: str
    revolution: bool
    beta: str | None
    a_text: str | None
    b_text: str | None
    defaults: dict
    u_range: tuple[float, float]
    v_range: tuple[float, float]
    notes: str = ""
    _builder: Callable | None = dataclass_field(default=None, repr=False)

    def surface(self, bindings: dict | None = None, frame_convention: str = "diagonal") -> LiouvilleSurface:
        merged = dict(self.defaults)
        merged.update(bindings or {})
        if self._builder is not None:
            return self._builder(merged, frame_convention)
        a_profile = ExprProfile(parse(self.a_text), "u", merged)
        b_profile = ExprProfile(parse(self.b_text), "v", merged)
        return LiouvilleSurface(a_profile, b_profile, frame_convention, name=self.name)


def _ellipsoid_builder(bindings: dict, frame_convention: str) -> LiouvilleSurface:
    a_profile, b_profile, _, _ = ellipsoid_profiles(
        bindings.get("a", 1.0), bindings.get("b", 2.0), bindings.get("c", 3.0), bindings.get("h", 3.5)
    )
    return LiouvilleSurface(a_profile, b_profile, frame_convention, name="ellipsoid")


_ELL_APROF, _ELL_BPROF, _ELL_URANGE, _ELL_VRANGE = None, None, (-0.3, 0.3), (-0.3, 0.3)


def _ellipsoid_ranges() -> tuple[tuple[float, float], tuple[float, float]]:
    global _ELL_APROF, _ELL_BPROF, _ELL_URANGE, _ELL_VRANGE
    if _ELL_APROF is None:
        _ELL_APROF, _ELL_BPROF, _ELL_URANGE, _ELL_VRANGE = ellipsoid_profiles()
    return _ELL_URANGE, _ELL_VRANGE


PRESETS: dict[str, SurfacePreset] = {
    "plane-cartesian": SurfacePreset(
        name="plane-cartesian",
        revolution=True,
        beta="1",
        a_text="0",
        b_text="1",
        defaults={},
        u_range=(0.0, 1.0),
        v_range=(0.0, 1.0),
        notes="flat plane, Cartesian coordinates; R = 0",
    ),
    "plane-polar": SurfacePreset(
        name="plane-polar",
        revolution=True,
        beta="exp(v)",
        a_text="0",
        b_text="exp(-2*v)",
        defaults={},
        u_range=(0.0, 2.0),
        v_range=(-0.5, 0.5),
        notes="flat plane, polar coordinates (radius exp(-v)); R = 0",
    ),
    "plane-parabolic": SurfacePreset(
        name="plane-parabolic",
        revolution=False,
        beta=None,
        a_text="a*u^2",
        b_text="a*v^2",
        defaults={"a": 1.0},
        u_range=(0.4, 1.4),
        v_range=(0.4, 1.4),
        notes="flat plane, parabolic coordinates; both profiles nonconstant, R = 0",
    ),
    "sphere": SurfacePreset(
        name="sphere",
        revolution=True,
        beta="sinh(v)",
        a_text="0",
        b_text="sinh(v)^(-2)",
        defaults={},
        u_range=(0.0, 2.0),
        v_range=(0.6, 1.6),
        notes=(
            "catalog entry 'sphere' (beta = sinh v); computed R = -2 under the "
            "sphere-positive convention, i.e. this metric is the constant negative "
            "curvature (hyperbolic) one"
        ),
    ),
    "pseudosphere": SurfacePreset(
        name="pseudosphere",
        revolution=True,
        beta="cosh(v)",
        a_text="0",
        b_text="cosh(v)^(-2)",
        defaults={},
        u_range=(0.0, 2.0),
        v_range=(-1.0, 1.0),
        notes=(
            "catalog entry 'pseudosphere' (beta = cosh v); computed R = +2 under the "
            "sphere-positive convention, i.e. this metric is the round unit sphere"
        ),
    ),
    "torus": SurfacePreset(
        name="torus",
        revolution=True,
        beta="k - cos(v)",
        a_text="0",
        b_text="(k - cos(v))^(-2)",
        defaults={"k": 2.0},
        u_range=(0.0, 3.0),
        v_range=(0.0, 3.0),
        notes="torus profile beta = k - cos v (k > 1); nonconstant R",
    ),
    "ellipsoid": SurfacePreset(
        name="ellipsoid",
        revolution=False,
        beta=None,
        a_text=None,
        b_text=None,
        defaults={"a": 1.0, "b": 2.0, "c": 3.0, "h": 3.5},
        u_range=(-0.25, 0.25),
        v_range=(-0.35, 0.35),
        notes=(
            "asymmetric ellipsoid patch in confocal coordinates, numerically "
            "rescaled to Liouville form; admits no Killing vector"
        ),
        _builder=_ellipsoid_builder,
    ),
}

REVOLUTION_CATALOG = ("plane-cartesian", "plane-polar", "sphere", "pseudosphere", "torus")


def get_preset(name: str) -> SurfacePreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}") from None


def make_surface(name: str, bindings: dict | None = None, frame_convention: str = "diagonal") -> LiouvilleSurface:
    preset = get_preset(name)
    if name == "ellipsoid":
        u_range, v_range = _ellipsoid_ranges()
        preset.u_range = u_range
        preset.v_range = v_range
    return preset.surface(bindings, frame_convention)


def sample_points(preset: SurfacePreset, rng: np.random.Generator, n: int, shrink: float = 0.05):
    """Seeded interior sample points of the preset's parameter rectangle."""
    if preset.name == "ellipsoid":
        u_range, v_range = _ellipsoid_ranges()
    else:
        u_range, v_range = preset.u_range, preset.v_range
    du = (u_range[1] - u_range[0]) * shrink
    dv = (v_range[1] - v_range[0]) * shrink
    us = rng.uniform(u_range[0] + du, u_range[1] - du, size=n)
    vs = rng.uniform(v_range[0] + dv, v_range[1] - dv, size=n)
    return [(float(u), float(v)) for u, v in zip(us, vs)]
