"""Liouville-surface geometry, evaluated pointwise as jets.

A surface carries two univariate profile functions A(u), B(v) and the
conformal metric ``g = (A + B)(du^2 + dv^2)``.  All geometric data
(orthonormal frame, Levi-Civita and spin connections, Ricci scalar,
covariant derivatives) is computed lazily at a query point as truncated
Taylor jets, so identities can be checked to machine precision at
arbitrary sample points with no discretization.

Frame conventions: the default frame is diagonal, ``e_a^mu =
lam**-0.5 * delta``; the "antidiagonal" convention used by the
separation machinery is ``e_1 = (0, lam**-0.5)``, ``e_2 =
(-lam**-0.5, 0)``.  The permutation symbol is fixed by
``eps_{12} = +1`` in the frame.

The curvature sign convention is fixed so the unit round sphere has
Ricci scalar +2.

Tensor fields are represented as callables ``field(point, order) ->``
jets (a single jet for scalars, nested object arrays with one axis per
frame index otherwise).  Covariant-derivative combinators request one
extra order from their input, so everything bottoms out in exact
profile-function jets of sufficient depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .expr import ExprAst, eval_jet, eval_number
from .jets import Jet2, jet_power

__all__ = [
    "GeometryError",
    "Profile",
    "ExprProfile",
    "FuncProfile",
    "LiouvilleSurface",
    "FramePointData",
    "EPSILON",
    "frame_at",
    "ricci_scalar",
    "ricci_scalar_conformal_oracle",
    "memoized_field",
    "constant_scalar_field",
    "frame_covariant_derivative",
    "coordinate_covariant_derivative_lower2",
    "frame_derivative_scalar",
    "frame_derivative_vector",
    "frame_derivative_tensor",
    "spinor_covariant_derivative",
    "second_symmetrized_derivative",
    "mat_apply",
    "killing_tensor_liouville",
    "coordinate_killing_vector",
    "KillingTensorField",
]

VARS = ("u", "v")

# permutation symbol in the frame, eps_{12} = +1 (0-based indices)
EPSILON = np.array([[0.0, 1.0], [-1.0, 0.0]])

Point = tuple[float, float]
ScalarField = Callable[[Point, int], Jet2]
TensorField = Callable[[Point, int], np.ndarray]


class GeometryError(ValueError):
    """Surface evaluated outside its Riemannian domain."""


# -- profiles -------------------------------------------------------------


class Profile:
    """A univariate analytic profile evaluable to bivariate jets."""

    var: str
    #: True when the profile is structurally a constant (no variable
    #: dependence); lets the integrability machinery use the 1-D shape
    #: of the g one-form on revolution surfaces.
    is_constant: bool = False

    def jet(self, point: Point, order: int) -> Jet2:  # pragma: no cover
        raise NotImplementedError

    def value(self, x: float) -> float:
        p = (x, x)
        return self.jet(p, 0).value.real


class ExprProfile(Profile):
    """Profile backed by a parsed expression in u or v."""

    def __init__(self, ast: ExprAst, var: str, bindings: dict[str, float] | None = None):
        if ast.variable is not None and ast.variable != var:
            raise GeometryError(f"profile over {var!r} references {ast.variable!r}")
        self.ast = ast
        self.var = var
        self.bindings = dict(bindings or {})
        self.is_constant = ast.variable is None

    def jet(self, point: Point, order: int) -> Jet2:
        return eval_jet(self.ast, Jet2.variable(self.var, point, order), self.bindings)

    def value(self, x: float) -> float:
        return complex(eval_number(self.ast, x, self.bindings)).real


class FuncProfile(Profile):
    """Profile defined by a jet-level closure, e.g. v |-> 1/beta(v)^2."""

    def __init__(self, var: str, fn: Callable[[Jet2], Jet2], is_constant: bool = False):
        self.var = var
        self.fn = fn
        self.is_constant = is_constant

    def jet(self, point: Point, order: int) -> Jet2:
        return self.fn(Jet2.variable(self.var, point, order))


# -- the surface -----------------------------------------------------------


@dataclass
class FramePointData:
    """All pointwise geometric data at one (point, order)."""

    point: Point
    order: int
    lam: Jet2
    a_jet: Jet2
    b_jet: Jet2
    frame: list  # e_a^mu, [a][mu]
    coframe: list  # e^a_mu, [a][mu]
    metric: list  # g_{mu nu}
    metric_inv: list
    christoffel: list  # Gamma^alpha_{beta mu}, [alpha][beta][mu]
    spin_connection: list  # Gamma^{ab}_mu, [a][b][mu]
    gamma12: list  # Gamma^{12}_mu, [mu]
    ricci: Jet2


class LiouvilleSurface:
    """Metric (A(u) + B(v)) (du^2 + dv^2) with a chosen frame convention."""

    def __init__(
        self,
        a_profile: Profile,
        b_profile: Profile,
        frame_convention: str = "diagonal",
        name: str = "",
    ):
        if frame_convention not in ("diagonal", "antidiagonal"):
            raise GeometryError(f"unknown frame convention {frame_convention!r}")
        self.a_profile = a_profile
        self.b_profile = b_profile
        self.frame_convention = frame_convention
        self.name = name
        self._frame_cache: dict = {}

    # profile jets ---------------------------------------------------

    def a_jet(self, point: Point, order: int) -> Jet2:
        return self.a_profile.jet(point, order)

    def b_jet(self, point: Point, order: int) -> Jet2:
        return self.b_profile.jet(point, order)

    def lam_jet(self, point: Point, order: int) -> Jet2:
        return self.a_jet(point, order) + self.b_jet(point, order)

    def lam_value(self, point: Point) -> float:
        return self.lam_jet(point, 0).value.real

    # frame data -------------------------------------------------------

    def frame_at(self, point: Point, order: int) -> FramePointData:
        key = (point[0], point[1], order)
        data = self._frame_cache.get(key)
        if data is None:
            data = _compute_frame_data(self, point, order)
            self._frame_cache[key] = data
        return data

    def ricci_scalar(self, point: Point, order: int) -> Jet2:
        return self.frame_at(point, order).ricci


def frame_at(surface: LiouvilleSurface, point: Point, order: int) -> FramePointData:
    return surface.frame_at(point, order)


def ricci_scalar(surface: LiouvilleSurface, point: Point, order: int) -> Jet2:
    return surface.ricci_scalar(point, order)


def _zero(base: Point, order: int) -> Jet2:
    return Jet2(base, order)


def _compute_frame_data(surface: LiouvilleSurface, point: Point, order: int) -> FramePointData:
    n = order
    a_hi = surface.a_jet(point, n + 2)
    b_hi = surface.b_jet(point, n + 2)
    lam_hi = a_hi + b_hi
    val = lam_hi.value
    if abs(val.imag) > 1e-9 or val.real <= 0.0:
        raise GeometryError(f"conformal factor nonpositive at {point}: {val}")

    z_hi = _zero(point, n + 2)
    g_hi = [[lam_hi, z_hi], [z_hi, lam_hi]]
    inv_lam_hi = jet_power(lam_hi, -1)
    ginv_hi = [[inv_lam_hi, z_hi], [z_hi, inv_lam_hi]]

    # Levi-Civita symbols at order n+1
    dg = [[[g_hi[mu][nu].partial(VARS[sig]) for nu in (0, 1)] for mu in (0, 1)] for sig in (0, 1)]
    ginv_m1 = [[ginv_hi[i][j].truncated(n + 1) for j in (0, 1)] for i in (0, 1)]
    christ_hi = [[[None, None] for _ in (0, 1)] for _ in (0, 1)]
    for al in (0, 1):
        for be in (0, 1):
            for mu in (0, 1):
                acc = None
                for nu in (0, 1):
                    term = dg[be][nu][mu] + dg[mu][nu][be] - dg[nu][be][mu]
                    term = ginv_m1[al][nu] * term
                    acc = term if acc is None else acc + term
                christ_hi[al][be][mu] = acc * 0.5

    # Riemann tensor, contracted to the Ricci scalar, at order n
    christ = [[[christ_hi[al][be][mu].truncated(n) for mu in (0, 1)] for be in (0, 1)] for al in (0, 1)]
    dchrist = [
        [[[christ_hi[al][be][mu].partial(VARS[sig]) for mu in (0, 1)] for be in (0, 1)] for al in (0, 1)]
        for sig in (0, 1)
    ]
    ginv_n = [[ginv_hi[i][j].truncated(n) for j in (0, 1)] for i in (0, 1)]
    ricci_scalar_jet = _zero(point, n)
    for sig in (0, 1):
        for nu in (0, 1):
            # Ricci_{sig nu} = Riem^rho_{sig rho nu}
            ric = _zero(point, n)
            for rho in (0, 1):
                term = dchrist[rho][rho][nu][sig] - dchrist[nu][rho][rho][sig]
                for lamb in (0, 1):
                    term = term + christ[rho][rho][lamb] * christ[lamb][nu][sig]
                    term = term - christ[rho][nu][lamb] * christ[lamb][rho][sig]
                ric = ric + term
            ricci_scalar_jet = ricci_scalar_jet + ginv_n[sig][nu] * ric

    # frame and coframe at order n, plus one extra order for the spin
    # connection's frame derivative
    lam_m1 = lam_hi.truncated(n + 1)
    inv_sqrt_m1 = jet_power(lam_m1, -0.5)
    sqrt_m1 = jet_power(lam_m1, 0.5)
    z_m1 = _zero(point, n + 1)
    if surface.frame_convention == "diagonal":
        frame_m1 = [[inv_sqrt_m1, z_m1], [z_m1, inv_sqrt_m1]]
        coframe_m1 = [[sqrt_m1, z_m1], [z_m1, sqrt_m1]]
    else:
        frame_m1 = [[z_m1, inv_sqrt_m1], [-inv_sqrt_m1, z_m1]]
        coframe_m1 = [[z_m1, sqrt_m1], [-sqrt_m1, z_m1]]
    frame = [[frame_m1[a][mu].truncated(n) for mu in (0, 1)] for a in (0, 1)]
    coframe = [[coframe_m1[a][mu].truncated(n) for mu in (0, 1)] for a in (0, 1)]

    # spin connection Gamma^{ab}_mu = e^a_al (Gamma^al_{be mu} e_b^be + d_mu e_b^al)
    spin = [[[None, None] for _ in (0, 1)] for _ in (0, 1)]
    for a in (0, 1):
        for b in (0, 1):
            for mu in (0, 1):
                acc = None
                for al in (0, 1):
                    inner = frame_m1[b][al].partial(VARS[mu])
                    for be in (0, 1):
                        inner = inner + christ[al][be][mu] * frame[b][be]
                    term = coframe[a][al] * inner
                    acc = term if acc is None else acc + term
                spin[a][b][mu] = acc
    gamma12 = [spin[0][1][0], spin[0][1][1]]

    g_n = [[g_hi[i][j].truncated(n) for j in (0, 1)] for i in (0, 1)]
    return FramePointData(
        point=point,
        order=n,
        lam=lam_hi.truncated(n),
        a_jet=a_hi.truncated(n),
        b_jet=b_hi.truncated(n),
        frame=frame,
        coframe=coframe,
        metric=g_n,
        metric_inv=ginv_n,
        christoffel=[[[christ[al][be][mu] for mu in (0, 1)] for be in (0, 1)] for al in (0, 1)],
        spin_connection=spin,
        gamma12=gamma12,
        ricci=ricci_scalar_jet,
    )


def ricci_scalar_conformal_oracle(surface: LiouvilleSurface, point: Point, order: int) -> Jet2:
    """Independent curvature route: R = -laplacian(ln lam) / lam.

    Agrees with the Riemann-contraction path for conformal metrics and
    carries the same sphere-positive sign convention.
    """
    lam = surface.lam_jet(point, order + 2)
    loglam = _log_jet(lam)
    lap = loglam.partial("u").partial("u") + loglam.partial("v").partial("v")
    return -lap / surface.lam_jet(point, order)


def _log_jet(a: Jet2) -> Jet2:
    from .jets import jet_log

    return jet_log(a)


# -- field helpers ----------------------------------------------------------


def memoized_field(f):
    """Cache a field callable on (u, v, order)."""
    cache: dict = {}

    def wrapped(point: Point, order: int):
        key = (point[0], point[1], order)
        out = cache.get(key)
        if out is None:
            out = f(point, order)
            cache[key] = out
        return out

    return wrapped


def constant_scalar_field(value: complex) -> ScalarField:
    def f(point: Point, order: int) -> Jet2:
        return Jet2.constant(value, point, order)

    return f


def _field_array(field, point: Point, order: int, rank: int):
    out = field(point, order)
    if rank == 0:
        return np.array(out, dtype=object).reshape(())
    return np.asarray(out, dtype=object)


def frame_covariant_derivative(surface: LiouvilleSurface, field, rank: int):
    """nabla_c T^{a1..ak}; the new frame index comes first.

    All frame indices (upper or lower alike, since eta is the identity
    and the connection is antisymmetric) receive the spin-connection
    correction.  The returned field has rank + 1.
    """

    def out(point: Point, order: int):
        fd = surface.frame_at(point, order)
        hi = _field_array(field, point, order + 1, rank)
        lo = np.empty(hi.shape, dtype=object)
        for idx in np.ndindex(hi.shape):
            lo[idx] = hi[idx].truncated(order)
        partials = [np.empty(hi.shape, dtype=object) for _ in (0, 1)]
        for mu in (0, 1):
            for idx in np.ndindex(hi.shape):
                partials[mu][idx] = hi[idx].partial(VARS[mu])
        res = np.empty((2,) * (rank + 1), dtype=object)
        for idx in np.ndindex(res.shape):
            c, rest = idx[0], idx[1:]
            acc = None
            for mu in (0, 1):
                term = partials[mu][rest]
                for i, a in enumerate(rest):
                    flipped = rest[:i] + (1 - a,) + rest[i + 1 :]
                    sign = 1.0 if a == 0 else -1.0
                    term = term + sign * fd.gamma12[mu] * lo[flipped]
                term = fd.frame[c][mu] * term
                acc = term if acc is None else acc + term
            res[idx] = acc
        if rank == 0:
            return np.array([res[(0,)], res[(1,)]], dtype=object)
        return res

    return out


def coordinate_covariant_derivative_lower2(surface: LiouvilleSurface, field):
    """nabla_sigma T_{mu nu} for a (0,2) coordinate tensor field."""

    def out(point: Point, order: int):
        fd = surface.frame_at(point, order)
        hi = _field_array(field, point, order + 1, 2)
        lo = np.empty((2, 2), dtype=object)
        for idx in np.ndindex((2, 2)):
            lo[idx] = hi[idx].truncated(order)
        res = np.empty((2, 2, 2), dtype=object)
        for sig in (0, 1):
            for mu in (0, 1):
                for nu in (0, 1):
                    term = hi[mu, nu].partial(VARS[sig])
                    for tau in (0, 1):
                        term = term - fd.christoffel[tau][mu][sig] * lo[tau, nu]
                        term = term - fd.christoffel[tau][nu][sig] * lo[mu, tau]
                    res[sig, mu, nu] = term
        return res

    return out


def frame_derivative_scalar(surface: LiouvilleSurface, field: ScalarField, point: Point, order: int = 0):
    """Jets of nabla_a f at the point (array of two jets)."""
    return frame_covariant_derivative(surface, field, 0)(point, order)


def frame_derivative_vector(surface: LiouvilleSurface, field, point: Point, order: int = 0):
    """Jets of nabla_c X^a for a frame-component vector field."""
    return frame_covariant_derivative(surface, field, 1)(point, order)


def frame_derivative_tensor(surface: LiouvilleSurface, field, point: Point, order: int = 0):
    """Jets of nabla_c K^{ab} for a frame-component rank-2 field."""
    return frame_covariant_derivative(surface, field, 2)(point, order)


# -- spinor derivatives ------------------------------------------------------


def mat_apply(m: np.ndarray, pair):
    """Apply a constant 2x2 complex matrix to a pair of jet components."""
    out0 = None
    out1 = None
    for j in (0, 1):
        if m[0, j] != 0:
            t = m[0, j] * pair[j]
            out0 = t if out0 is None else out0 + t
        if m[1, j] != 0:
            t = m[1, j] * pair[j]
            out1 = t if out1 is None else out1 + t
    zero = None
    if out0 is None or out1 is None:
        ref = pair[0]
        zero = Jet2(ref.base, ref.order)
    return [out0 if out0 is not None else zero, out1 if out1 is not None else zero]


def spinor_covariant_derivative(surface, psi, point: Point, order: int, rep):
    """Coordinate covariant derivatives (nabla_u psi, nabla_v psi).

    nabla_mu psi = d_mu psi + (1/2) Gamma^{12}_mu g12 psi, with g12 acting
    through the chosen matrix representation.
    """
    hi = psi.jets(point, order + 1)
    fd = surface.frame_at(point, order)
    lo = [hi[0].truncated(order), hi[1].truncated(order)]
    gpsi = mat_apply(rep.gamma12, lo)
    out = []
    for mu in (0, 1):
        coef = 0.5 * fd.gamma12[mu]
        out.append(
            [hi[i].partial(VARS[mu]) + coef * gpsi[i] for i in (0, 1)]
        )
    return out


def second_symmetrized_derivative(surface, psi, point: Point, order: int, rep):
    """Symmetrized second frame derivative nabla_{ab} psi.

    nabla_a nabla_b psi = e_a^mu e_b^nu (d_mu(nabla_nu psi)
        - Gamma^lam_{nu mu} nabla_lam psi
        + (1/2) Gamma^{12}_mu g12 nabla_nu psi)
    symmetrized over (a, b).  Returns [a][b] -> spinor jet pair.
    """
    fd = surface.frame_at(point, order)
    t_hi = spinor_covariant_derivative(surface, psi, point, order + 1, rep)
    t_lo = [[t_hi[mu][i].truncated(order) for i in (0, 1)] for mu in (0, 1)]
    s = [[None, None], [None, None]]
    for mu in (0, 1):
        coef = 0.5 * fd.gamma12[mu]
        for nu in (0, 1):
            gt = mat_apply(rep.gamma12, t_lo[nu])
            comp = []
            for i in (0, 1):
                term = t_hi[nu][i].partial(VARS[mu]) + coef * gt[i]
                for lamb in (0, 1):
                    term = term - fd.christoffel[lamb][nu][mu] * t_lo[lamb][i]
                comp.append(term)
            s[mu][nu] = comp
    out = [[None, None], [None, None]]
    for a in (0, 1):
        for b in (0, 1):
            acc = None
            for mu in (0, 1):
                for nu in (0, 1):
                    w = fd.frame[a][mu] * fd.frame[b][nu]
                    comp = [w * s[mu][nu][i] for i in (0, 1)]
                    acc = comp if acc is None else [acc[i] + comp[i] for i in (0, 1)]
            out[a][b] = acc
    for i in (0, 1):
        sym0 = 0.5 * (out[0][1][i] + out[1][0][i])
        out[0][1][i] = sym0
        out[1][0][i] = sym0
    return out


# -- the Liouville Killing tensor -------------------------------------------


class KillingTensorField:
    """The canonical valence-2 Killing tensor of a Liouville surface.

    Coordinate components diag(B/(A+B), -A/(A+B)); frame components
    follow the surface's frame convention (diag(B, -A) for the diagonal
    frame).
    """

    def __init__(self, surface: LiouvilleSurface):
        self.surface = surface
        self.frame = memoized_field(self._frame)

    def coordinate(self, point: Point, order: int):
        s = self.surface
        lam_inv = jet_power(s.lam_jet(point, order), -1)
        k_uu = s.b_jet(point, order) * lam_inv
        k_vv = -(s.a_jet(point, order) * lam_inv)
        z = _zero(point, order)
        return np.array([[k_uu, z], [z, k_vv]], dtype=object)

    def _frame(self, point: Point, order: int):
        fd = self.surface.frame_at(point, order)
        kco = self.coordinate(point, order)
        out = np.empty((2, 2), dtype=object)
        for a in (0, 1):
            for b in (0, 1):
                acc = None
                for mu in (0, 1):
                    for nu in (0, 1):
                        t = kco[mu, nu]
                        if t.is_zero():
                            continue
                        term = fd.coframe[a][mu] * fd.coframe[b][nu] * t
                        acc = term if acc is None else acc + term
                out[a, b] = acc if acc is not None else _zero(point, order)
        return out

    def __call__(self, point: Point, order: int):
        return self.frame(point, order)


def killing_tensor_liouville(surface: LiouvilleSurface) -> KillingTensorField:
    return KillingTensorField(surface)


def coordinate_killing_vector(surface: LiouvilleSurface, which: str):
    """Frame components of the coordinate vector field d/du or d/dv."""
    mu = VARS.index(which)

    def field(point: Point, order: int):
        fd = surface.frame_at(point, order)
        return np.array([fd.coframe[0][mu], fd.coframe[1][mu]], dtype=object)

    return memoized_field(field)
