"""Killing residuals, the scalar-field integrability machinery, and
assembly of validated symmetry data.

The scalar coefficient g of a second-order symmetry operator satisfies
``d_mu g = omega_mu`` with ``omega_mu = -(1/4) nabla^nu (R K_{mu nu})``;
g exists (locally, modulo a constant) iff omega is closed.  For a
Liouville metric this closedness collapses to a quartic-profile
condition on A and B, and the admissible non-revolution profiles solve
a pair of first-order quartic ODEs whose curvature has a one-line
closed form.  Everything here is verified pointwise via jets; the line
integral for g uses adaptive quadrature along axis-parallel legs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .geometry import (
    LiouvilleSurface,
    Point,
    coordinate_covariant_derivative_lower2,
    coordinate_killing_vector,
    frame_covariant_derivative,
    killing_tensor_liouville,
    memoized_field,
)
from .jets import Jet2, _mask
from .spinor_ops import SymmetryData

__all__ = [
    "SpecialCaseParams",
    "IntegrabilityError",
    "TrivialKillingTensorError",
    "KillingResidualError",
    "killing_vector_residual",
    "killing_tensor_residual",
    "integrability_one_form",
    "one_form_curl",
    "integrability_condition_lhs",
    "solve_g",
    "special_system_residual",
    "special_case_curvature",
    "special_case_ricci_check",
    "assemble_symmetry_data",
    "constant_g_field",
]


class IntegrabilityError(ValueError):
    """The one-form determining g is not closed; carries ``max_curl``."""

    def __init__(self, message: str, max_curl: float):
        super().__init__(message)
        self.max_curl = max_curl


class TrivialKillingTensorError(ValueError):
    """Killing tensor proportional to the metric (no nontrivial operator)."""


class KillingResidualError(ValueError):
    """Input field fails its Killing equation beyond tolerance."""


# -- residuals ---------------------------------------------------------------


def killing_vector_residual(surface: LiouvilleSurface, zeta, points) -> float:
    """max over points of || nabla^{(a} zeta^{b)} ||."""
    grad = frame_covariant_derivative(surface, zeta, 1)
    worst = 0.0
    for p in points:
        d = grad(p, 0)
        for a in (0, 1):
            for b in (0, 1):
                worst = max(worst, abs(0.5 * (d[a, b].value + d[b, a].value)))
    return worst


def killing_tensor_residual(surface: LiouvilleSurface, ktensor, points) -> float:
    """max over points of || nabla^{(c} K^{ab)} ||."""
    field = ktensor.frame if hasattr(ktensor, "frame") else ktensor
    grad = frame_covariant_derivative(surface, field, 2)
    worst = 0.0
    for p in points:
        d = grad(p, 0)
        for idx in itertools.product((0, 1), repeat=3):
            acc = 0.0
            for perm in itertools.permutations(idx):
                acc += d[perm].value
            worst = max(worst, abs(acc / 6.0))
    return worst


# -- the one-form for g -------------------------------------------------------


def _coordinate_tensor_field(surface: LiouvilleSurface, ktensor):
    """Coordinate components K^{mu nu} of a Killing tensor input.

    Accepts either the canonical Liouville tensor object (which knows
    its coordinate components) or a frame-component field, converted
    through the surface frame.
    """
    if hasattr(ktensor, "coordinate"):
        return ktensor.coordinate

    def coord(point: Point, order: int):
        fd = surface.frame_at(point, order)
        kf = ktensor(point, order)
        out = np.empty((2, 2), dtype=object)
        for mu in (0, 1):
            for nu in (0, 1):
                acc = None
                for a in (0, 1):
                    for b in (0, 1):
                        t = kf[a, b]
                        if isinstance(t, Jet2) and t.is_zero():
                            continue
                        term = fd.frame[a][mu] * fd.frame[b][nu] * t
                        acc = term if acc is None else acc + term
                out[mu, nu] = acc if acc is not None else Jet2(point, order)
        return out

    return memoized_field(coord)


def integrability_one_form(surface: LiouvilleSurface, ktensor, point: Point, order: int = 0):
    """Jets of omega_mu = -(1/4) nabla^nu (R K_{mu nu}) at the point."""
    field = _one_form_field(surface, ktensor)
    return field(point, order)


def _one_form_field(surface: LiouvilleSurface, ktensor):
    coord = _coordinate_tensor_field(surface, ktensor)

    def lowered_times_r(point: Point, order: int):
        fd = surface.frame_at(point, order)
        kup = coord(point, order)
        r = surface.ricci_scalar(point, order)
        out = np.empty((2, 2), dtype=object)
        for mu in (0, 1):
            for nu in (0, 1):
                acc = None
                for al in (0, 1):
                    for be in (0, 1):
                        t = kup[al, be]
                        if isinstance(t, Jet2) and t.is_zero():
                            continue
                        term = fd.metric[mu][al] * fd.metric[nu][be] * t
                        acc = term if acc is None else acc + term
                if acc is None:
                    acc = Jet2(point, order)
                out[mu, nu] = r * acc
        return out

    dt = coordinate_covariant_derivative_lower2(surface, memoized_field(lowered_times_r))

    def omega(point: Point, order: int):
        fd = surface.frame_at(point, order)
        d = dt(point, order)
        out = np.empty(2, dtype=object)
        for mu in (0, 1):
            acc = None
            for nu in (0, 1):
                for sig in (0, 1):
                    gin = fd.metric_inv[nu][sig]
                    if gin.is_zero():
                        continue
                    term = gin * d[sig, mu, nu]
                    acc = term if acc is None else acc + term
            out[mu] = acc * (-0.25)
        return out

    return memoized_field(omega)


def one_form_curl(surface: LiouvilleSurface, ktensor, point: Point) -> float:
    """|d_u omega_v - d_v omega_u| at the point, from jets."""
    om = integrability_one_form(surface, ktensor, point, 1)
    return abs(om[1].partial("u").value - om[0].partial("v").value)


# -- the Liouville integrability condition ------------------------------------


def integrability_condition_lhs(surface: LiouvilleSurface, point: Point) -> float:
    """Closedness condition for the Liouville Killing tensor, as a number.

    Value of (A+B)^2 (A'B''' + A'''B') + 6 A'B'((A')^2 + (B')^2)
    - 6 A'B' (A+B)(A'' + B''), which vanishes identically exactly when
    the scalar field g exists for the canonical Killing tensor.
    """
    aj = surface.a_jet(point, 3)
    bj = surface.b_jet(point, 3)
    a0 = aj.value
    a1 = aj.derivative_value(1, 0)
    a2 = aj.derivative_value(2, 0)
    a3 = aj.derivative_value(3, 0)
    b0 = bj.value
    b1 = bj.derivative_value(0, 1)
    b2 = bj.derivative_value(0, 2)
    b3 = bj.derivative_value(0, 3)
    lam = a0 + b0
    val = lam**2 * (a1 * b3 + a3 * b1) + 6 * a1 * b1 * (a1**2 + b1**2) - 6 * a1 * b1 * lam * (a2 + b2)
    return val.real


# -- solving for g -------------------------------------------------------------


def constant_g_field(value: complex):
    def g(point: Point, order: int) -> Jet2:
        return Jet2.constant(value, point, order)

    return g


def solve_g(
    surface: LiouvilleSurface,
    ktensor,
    base_point: Point,
    g0: complex = 0.0,
    path: str = "u-first",
    curl_tol: float = 1e-9,
    quad_tol: float = 1e-12,
):
    """Scalar field g with d g = omega, as a jet-evaluable field.

    The value at a point is ``g0`` plus the line integral of omega from
    ``base_point`` along axis-parallel legs (order set by ``path``);
    the jet's higher coefficients come directly from omega's jets, so
    dg = omega holds exactly at every queried point.  Closedness of
    omega is verified at the base point, the leg corner and the query
    point; violations raise :class:`IntegrabilityError` with the worst
    curl value seen.
    """
    if path not in ("u-first", "v-first"):
        raise ValueError(f"unknown path {path!r}")
    omega = _one_form_field(surface, ktensor)

    def curl_at(p: Point) -> float:
        om = omega(p, 1)
        return abs(om[1].partial("u").value - om[0].partial("v").value)

    def check_closed(points):
        worst = max(curl_at(p) for p in points)
        if worst > curl_tol:
            raise IntegrabilityError(
                f"one-form for g is not closed (max curl {worst:.3e} > {curl_tol:.1e}); "
                "no scalar field exists for this Killing tensor",
                worst,
            )

    check_closed([base_point])
    u0, v0 = base_point

    def component(p: Point, mu: int) -> complex:
        return omega(p, 0)[mu].value

    def integrate_leg(mu: int, fixed: float, lo: float, hi: float) -> complex:
        if lo == hi:
            return 0.0

        def real_part(t):
            p = (t, fixed) if mu == 0 else (fixed, t)
            return component(p, mu).real

        def imag_part(t):
            p = (t, fixed) if mu == 0 else (fixed, t)
            return component(p, mu).imag

        re, _ = quad(real_part, lo, hi, epsabs=quad_tol, epsrel=quad_tol, limit=200)
        im, _ = quad(imag_part, lo, hi, epsabs=quad_tol, epsrel=quad_tol, limit=200)
        return re + 1j * im

    value_cache: dict = {}

    def g_value(p: Point) -> complex:
        key = (p[0], p[1])
        if key in value_cache:
            return value_cache[key]
        u1, v1 = p
        if path == "u-first":
            corner = (u1, v0)
            total = integrate_leg(0, v0, u0, u1) + integrate_leg(1, u1, v0, v1)
        else:
            corner = (u0, v1)
            total = integrate_leg(1, u0, v0, v1) + integrate_leg(0, v1, u0, u1)
        check_closed([corner, p])
        out = complex(g0) + total
        value_cache[key] = out
        return out

    def g_field(point: Point, order: int) -> Jet2:
        out = Jet2.constant(g_value(point), point, order)
        if order >= 1:
            om = omega(point, order - 1)
            cu, cv = om[0].coeffs, om[1].coeffs
            for i in range(1, order + 1):
                for j in range(0, order + 1 - i):
                    out.coeffs[i, j] = cu[i - 1, j] / i
            for j in range(1, order + 1):
                out.coeffs[0, j] = cv[0, j - 1] / j
            out.coeffs *= _mask(order)
        return out

    return memoized_field(g_field)


# -- special (non-revolution) profile families ---------------------------------


@dataclass(frozen=True)
class SpecialCaseParams:
    """Constants of the quartic first-order profile system.

    (A')^2 = k A^4 + a3 A^3 + a2 A^2 + a1 A + a0 and the B equation with
    the matched sign pattern (B')^2 = -k B^4 + a3 B^3 - a2 B^2 + a1 B - a0.
    """

    k: float = 0.0
    a3: float = 0.0
    a2: float = 0.0
    a1: float = 0.0
    a0: float = 0.0

    def a_polynomial(self, a: complex) -> complex:
        return self.k * a**4 + self.a3 * a**3 + self.a2 * a**2 + self.a1 * a + self.a0

    def b_polynomial(self, b: complex) -> complex:
        return -self.k * b**4 + self.a3 * b**3 - self.a2 * b**2 + self.a1 * b - self.a0


def special_system_residual(surface: LiouvilleSurface, params: SpecialCaseParams, points):
    """Max residuals of the two quartic profile ODEs over the points."""
    worst_a = 0.0
    worst_b = 0.0
    for p in points:
        aj = surface.a_jet(p, 1)
        bj = surface.b_jet(p, 1)
        da = aj.derivative_value(1, 0)
        db = bj.derivative_value(0, 1)
        worst_a = max(worst_a, abs(da**2 - params.a_polynomial(aj.value)))
        worst_b = max(worst_b, abs(db**2 - params.b_polynomial(bj.value)))
    return worst_a, worst_b


def special_case_curvature(a_value: float, b_value: float, params: SpecialCaseParams) -> float:
    """Closed-form Ricci scalar of the quartic family.

    In the sphere-positive sign convention used throughout this package
    the value is -( (A - B) k + a3 / 2 ).
    """
    return -((a_value - b_value) * params.k + 0.5 * params.a3)


def special_case_ricci_check(surface: LiouvilleSurface, params: SpecialCaseParams, points) -> float:
    """Max deviation of the computed R from the family's closed form."""
    worst = 0.0
    for p in points:
        r = surface.ricci_scalar(p, 0).value.real
        a0 = surface.a_jet(p, 0).value.real
        b0 = surface.b_jet(p, 0).value.real
        worst = max(worst, abs(r - special_case_curvature(a0, b0, params)))
    return worst


# -- assembly -------------------------------------------------------------------


def _is_metric_proportional(surface: LiouvilleSurface, field, points, tol: float = 1e-12) -> bool:
    for p in points:
        k = field(p, 0)
        off = abs(k[0, 1].value) + abs(k[1, 0].value)
        diag = abs(k[0, 0].value - k[1, 1].value)
        if off > tol or diag > tol:
            return False
    return True


def assemble_symmetry_data(
    surface: LiouvilleSurface,
    kind: str,
    check_points,
    *,
    zeta=None,
    a_const: complex = 0.0,
    g0: complex = 0.0,
    killing_tensor=None,
    base_point: Point | None = None,
    killing_tol: float = 1e-9,
    curl_tol: float = 1e-9,
) -> SymmetryData:
    """Build validated SymmetryData for a first- or second-order operator.

    First order: ``zeta`` is 'u', 'v' or a frame-component field; it
    must satisfy the Killing equation at the check points, and g is the
    constant ``g0``.  Second order: the Killing tensor (canonical
    Liouville tensor by default) must be non-proportional to the metric
    and its g one-form closed; g is solved by line integration from
    ``base_point`` (default: first check point).
    """
    check_points = list(check_points)
    if not check_points:
        raise ValueError("assembly needs at least one check point")
    if kind == "first":
        if zeta is None:
            raise ValueError("first-order assembly needs a Killing vector")
        if isinstance(zeta, str):
            zeta = coordinate_killing_vector(surface, zeta)
        res = killing_vector_residual(surface, zeta, check_points)
        if res > killing_tol:
            raise KillingResidualError(
                f"zeta violates the Killing equation: residual {res:.3e} > {killing_tol:.1e}"
            )
        return SymmetryData(
            surface=surface,
            zeta=zeta,
            a_const=a_const,
            g=constant_g_field(g0),
            kind="first",
        )
    if kind == "second":
        ktensor = killing_tensor if killing_tensor is not None else killing_tensor_liouville(surface)
        frame_field = ktensor.frame if hasattr(ktensor, "frame") else ktensor
        res = killing_tensor_residual(surface, ktensor, check_points)
        if res > killing_tol:
            raise KillingResidualError(
                f"tensor violates the Killing equation: residual {res:.3e} > {killing_tol:.1e}"
            )
        if _is_metric_proportional(surface, frame_field, check_points):
            raise TrivialKillingTensorError(
                "Killing tensor is proportional to the metric; the resulting operator is trivial"
            )
        base = base_point if base_point is not None else check_points[0]
        g_field = solve_g(surface, ktensor, base, g0=g0, curl_tol=curl_tol)
        for p in check_points:
            c = one_form_curl(surface, ktensor, p)
            if c > curl_tol:
                raise IntegrabilityError(
                    f"one-form for g is not closed at {p} (curl {c:.3e})", c
                )
        return SymmetryData(
            surface=surface,
            killing_tensor=frame_field,
            g=g_field,
            kind="second",
        )
    raise ValueError(f"unknown kind {kind!r}")
