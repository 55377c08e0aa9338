"""Dirac and symmetry operators on two-component spinor fields.

The Dirac operator is ``D = i g^a nabla_a - m``; a candidate symmetry
operator has the second-order shape ``K = E^{ab} nabla_{ab} + F^a
nabla_a + G`` with Clifford-algebra-valued coefficient fields.  From a
geometric payload (Killing tensor, Killing vectors, a constant and a
scalar field) the coefficients are assembled as

    E^{ab} = K^{ab} 1 + alpha^a g^b + alpha^b g^a
    F^a    = (zeta^a + nabla_c K^{ac}) 1 + (nabla_c alpha^a) g^c
             + A g^a + (1/3) eps_{bc} nabla^b K^{ac} g12
    G      = g 1 - (R/4) alpha_b g^b + (1/4) eps_{ba} nabla^b zeta^a g12

and the four coefficient equations equivalent to ``[K, D] = 0`` are
evaluated pointwise as residuals.  Operators are applied by nested jet
evaluation (the second-order operator consumes two derivative orders of
its argument, the Dirac operator one), so commutators are computed
exactly at a point instead of symbolically.

Spinors are acted on by abstract Clifford elements through a concrete
matrix representation chosen per call; every residual assertion is
representation independent and the test suite re-runs under a second
representation to demonstrate it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dataclass_field
from typing import Callable

import numpy as np

from .clifford import (
    DEFAULT_REPRESENTATION,
    GAMMA1,
    GAMMA2,
    GAMMA12,
    REPRESENTATIONS,
    CliffordElement,
    MatrixRepresentation,
    cliff_mul,
)
from .geometry import (
    EPSILON,
    LiouvilleSurface,
    Point,
    frame_covariant_derivative,
    mat_apply,
    memoized_field,
    second_symmetrized_derivative,
    spinor_covariant_derivative,
)
from .jets import Jet2, jet_cos, jet_sin

__all__ = [
    "SpinorField",
    "SymmetryData",
    "OperatorCoefficients",
    "resolve_representation",
    "build_coefficients",
    "dirac_apply",
    "dirac_operator",
    "symmetry_apply",
    "symmetry_operator",
    "commutator_residual",
    "determining_equations_residuals",
    "compose_first_order",
    "spinor_norm",
    "random_polynomial_trig_field",
]


def resolve_representation(rep) -> MatrixRepresentation:
    if rep is None:
        return DEFAULT_REPRESENTATION
    if isinstance(rep, str):
        return REPRESENTATIONS[rep]
    return rep


class SpinorField:
    """A two-component complex analytic field evaluable to jets."""

    def __init__(self, fn: Callable[[Point, int], list], name: str = ""):
        self._fn = fn
        self._cache: dict = {}
        self.name = name

    def jets(self, point: Point, order: int) -> list[Jet2]:
        key = (point[0], point[1], order)
        out = self._cache.get(key)
        if out is None:
            out = list(self._fn(point, order))
            self._cache[key] = out
        return out

    @classmethod
    def from_jet_functions(cls, f1, f2, name: str = "") -> "SpinorField":
        """Build from closures mapping (u_jet, v_jet) -> component jet."""

        def fn(point: Point, order: int):
            uj = Jet2.variable("u", point, order)
            vj = Jet2.variable("v", point, order)
            return [f1(uj, vj), f2(uj, vj)]

        return cls(fn, name)

    @classmethod
    def constant(cls, c1: complex, c2: complex, name: str = "") -> "SpinorField":
        def fn(point: Point, order: int):
            return [Jet2.constant(c1, point, order), Jet2.constant(c2, point, order)]

        return cls(fn, name)

    @classmethod
    def zero(cls) -> "SpinorField":
        return cls.constant(0.0, 0.0, "zero")


def spinor_norm(pair) -> float:
    """Max over components of the modulus of the jet's constant term."""
    return max(abs(pair[0].value), abs(pair[1].value))


def random_polynomial_trig_field(rng: np.random.Generator, name: str = "") -> SpinorField:
    """A seeded dense test field: quadratic polynomial plus a trig wave."""
    coeffs = rng.normal(size=(2, 6)) + 1j * rng.normal(size=(2, 6))
    waves = rng.uniform(0.4, 1.3, size=(2, 3))

    def make(i):
        c = coeffs[i]
        w = waves[i]

        def comp(uj, vj):
            poly = (
                c[0]
                + c[1] * uj
                + c[2] * vj
                + c[3] * uj * uj
                + c[4] * uj * vj
                + c[5] * vj * vj
            )
            return poly + jet_sin(w[0] * uj + w[1] * vj + w[2])

        return comp

    return SpinorField.from_jet_functions(make(0), make(1), name)


# -- geometric payload -------------------------------------------------------


@dataclass
class SymmetryData:
    """Killing data from which operator coefficients are built.

    ``killing_tensor``, ``alpha`` and ``zeta`` are frame-component
    fields (or None for zero); ``g`` is a scalar field.  The Killing
    equations for the three fields are assumed (and can be re-checked
    via the killing module's residual functions).
    """

    surface: LiouvilleSurface
    killing_tensor: object | None = None
    alpha: object | None = None
    zeta: object | None = None
    a_const: complex = 0.0
    g: object | None = None
    kind: str = "general"


# -- operator coefficients ---------------------------------------------------


@dataclass
class OperatorCoefficients:
    """Clifford-valued coefficient fields, stored by basis part.

    ``*_scalar`` is the identity part, ``*_vector`` the coefficients of
    g_c (an extra trailing frame index), ``*_pseudo`` the g12 part.
    Parts set to None are identically zero.
    """

    surface: LiouvilleSurface
    e_scalar: object | None = None
    e_vector: object | None = None
    e_pseudo: object | None = None
    f_scalar: object | None = None
    f_vector: object | None = None
    f_pseudo: object | None = None
    g_scalar: object | None = None
    g_vector: object | None = None
    g_pseudo: object | None = None
    _derived: dict = dataclass_field(default_factory=dict, repr=False)

    def _part(self, name: str):
        return getattr(self, name)

    def _deriv(self, name: str, rank: int):
        """Frame covariant derivative field of a part (memoized)."""
        if name in self._derived:
            return self._derived[name]
        part = self._part(name)
        out = None if part is None else memoized_field(
            frame_covariant_derivative(self.surface, part, rank)
        )
        self._derived[name] = out
        return out

    # pointwise Clifford elements -----------------------------------

    def E_elements(self, point: Point, order: int):
        es = self.e_scalar(point, order) if self.e_scalar is not None else None
        ev = self.e_vector(point, order) if self.e_vector is not None else None
        ep = self.e_pseudo(point, order) if self.e_pseudo is not None else None
        out = np.empty((2, 2), dtype=object)
        for a in (0, 1):
            for b in (0, 1):
                out[a, b] = CliffordElement(
                    es[a, b] if es is not None else 0.0,
                    ev[a, b, 0] if ev is not None else 0.0,
                    ev[a, b, 1] if ev is not None else 0.0,
                    ep[a, b] if ep is not None else 0.0,
                )
        return out

    def F_elements(self, point: Point, order: int):
        fs = self.f_scalar(point, order) if self.f_scalar is not None else None
        fv = self.f_vector(point, order) if self.f_vector is not None else None
        fp = self.f_pseudo(point, order) if self.f_pseudo is not None else None
        out = np.empty(2, dtype=object)
        for a in (0, 1):
            out[a] = CliffordElement(
                fs[a] if fs is not None else 0.0,
                fv[a, 0] if fv is not None else 0.0,
                fv[a, 1] if fv is not None else 0.0,
                fp[a] if fp is not None else 0.0,
            )
        return out

    def G_element(self, point: Point, order: int) -> CliffordElement:
        gs = self.g_scalar(point, order) if self.g_scalar is not None else None
        gv = self.g_vector(point, order) if self.g_vector is not None else None
        gp = self.g_pseudo(point, order) if self.g_pseudo is not None else None
        return CliffordElement(
            gs if gs is not None else 0.0,
            gv[0] if gv is not None else 0.0,
            gv[1] if gv is not None else 0.0,
            gp if gp is not None else 0.0,
        )

    def dE_elements(self, point: Point, order: int):
        """Elements of nabla_c E^{ab}, indexed [c, a, b]."""
        ds = self._deriv("e_scalar", 2)
        dv = self._deriv("e_vector", 3)
        dp = self._deriv("e_pseudo", 2)
        es = ds(point, order) if ds is not None else None
        ev = dv(point, order) if dv is not None else None
        ep = dp(point, order) if dp is not None else None
        out = np.empty((2, 2, 2), dtype=object)
        for c in (0, 1):
            for a in (0, 1):
                for b in (0, 1):
                    out[c, a, b] = CliffordElement(
                        es[c, a, b] if es is not None else 0.0,
                        ev[c, a, b, 0] if ev is not None else 0.0,
                        ev[c, a, b, 1] if ev is not None else 0.0,
                        ep[c, a, b] if ep is not None else 0.0,
                    )
        return out

    def dF_elements(self, point: Point, order: int):
        """Elements of nabla_c F^{a}, indexed [c, a]."""
        ds = self._deriv("f_scalar", 1)
        dv = self._deriv("f_vector", 2)
        dp = self._deriv("f_pseudo", 1)
        fs = ds(point, order) if ds is not None else None
        fv = dv(point, order) if dv is not None else None
        fp = dp(point, order) if dp is not None else None
        out = np.empty((2, 2), dtype=object)
        for c in (0, 1):
            for a in (0, 1):
                out[c, a] = CliffordElement(
                    fs[c, a] if fs is not None else 0.0,
                    fv[c, a, 0] if fv is not None else 0.0,
                    fv[c, a, 1] if fv is not None else 0.0,
                    fp[c, a] if fp is not None else 0.0,
                )
        return out

    def dG_elements(self, point: Point, order: int):
        """Elements of nabla_a G, indexed [a]."""
        ds = self._deriv("g_scalar", 0)
        dv = self._deriv("g_vector", 1)
        dp = self._deriv("g_pseudo", 0)
        gs = ds(point, order) if ds is not None else None
        gv = dv(point, order) if dv is not None else None
        gp = dp(point, order) if dp is not None else None
        out = np.empty(2, dtype=object)
        for a in (0, 1):
            out[a] = CliffordElement(
                gs[a] if gs is not None else 0.0,
                gv[a, 0] if gv is not None else 0.0,
                gv[a, 1] if gv is not None else 0.0,
                gp[a] if gp is not None else 0.0,
            )
        return out


def _zero_jet(point: Point, order: int) -> Jet2:
    return Jet2(point, order)


def build_coefficients(
    surface: LiouvilleSurface,
    data: SymmetryData,
    check_points=(),
    killing_tol: float = 1e-8,
) -> OperatorCoefficients:
    """Assemble the operator coefficient fields from Killing data.

    If ``check_points`` is nonempty the Killing residuals of the inputs
    are verified there first.  A missing scalar field g is an error;
    use the killing module to solve for it.
    """
    if data.g is None:
        raise ValueError("symmetry data has no scalar field g; solve for it first")
    if check_points:
        from .killing import killing_tensor_residual, killing_vector_residual

        for fld, residual, label in (
            (data.killing_tensor, killing_tensor_residual, "Killing tensor"),
            (data.alpha, killing_vector_residual, "alpha"),
            (data.zeta, killing_vector_residual, "zeta"),
        ):
            if fld is None:
                continue
            r = residual(surface, fld, check_points)
            if r > killing_tol:
                raise ValueError(f"{label} violates its Killing equation: residual {r:.3e}")

    ktensor = data.killing_tensor
    alpha = data.alpha
    zeta = data.zeta
    a_const = complex(data.a_const)

    dk = (
        memoized_field(frame_covariant_derivative(surface, ktensor, 2))
        if ktensor is not None
        else None
    )
    dalpha = (
        memoized_field(frame_covariant_derivative(surface, alpha, 1))
        if alpha is not None
        else None
    )
    dzeta = (
        memoized_field(frame_covariant_derivative(surface, zeta, 1))
        if zeta is not None
        else None
    )

    e_vector = None
    if alpha is not None:

        def e_vector(point, order):
            al = alpha(point, order)
            z = _zero_jet(point, order)
            out = np.empty((2, 2, 2), dtype=object)
            for a in (0, 1):
                for b in (0, 1):
                    for c in (0, 1):
                        term = z
                        if b == c:
                            term = term + al[a]
                        if a == c:
                            term = term + al[b]
                        out[a, b, c] = term
            return out

    need_f_scalar = zeta is not None or ktensor is not None

    f_scalar = None
    if need_f_scalar:

        def f_scalar(point, order):
            z = _zero_jet(point, order)
            out = np.array([z, z], dtype=object)
            if zeta is not None:
                ze = zeta(point, order)
                out = np.array([out[0] + ze[0], out[1] + ze[1]], dtype=object)
            if dk is not None:
                d = dk(point, order)
                for a in (0, 1):
                    out[a] = out[a] + d[0, a, 0] + d[1, a, 1]
            return out

    f_vector = None
    if alpha is not None or a_const != 0.0:

        def f_vector(point, order):
            out = np.empty((2, 2), dtype=object)
            z = _zero_jet(point, order)
            d = dalpha(point, order) if dalpha is not None else None
            for a in (0, 1):
                for c in (0, 1):
                    term = z if d is None else z + d[c, a]
                    if a == c and a_const != 0.0:
                        term = term + a_const
                    out[a, c] = term
            return out

    f_pseudo = None
    if ktensor is not None:

        def f_pseudo(point, order):
            d = dk(point, order)
            out = np.empty(2, dtype=object)
            for a in (0, 1):
                out[a] = (d[0, a, 1] - d[1, a, 0]) * (1.0 / 3.0)
            return out

    g_vector = None
    if alpha is not None:

        def g_vector(point, order):
            al = alpha(point, order)
            r = surface.ricci_scalar(point, order)
            return np.array([r * al[0] * (-0.25), r * al[1] * (-0.25)], dtype=object)

    g_pseudo = None
    if zeta is not None:

        def g_pseudo(point, order):
            d = dzeta(point, order)
            return (d[0, 1] - d[1, 0]) * 0.25

    return OperatorCoefficients(
        surface=surface,
        e_scalar=memoized_field(ktensor) if ktensor is not None else None,
        e_vector=memoized_field(e_vector) if e_vector is not None else None,
        e_pseudo=None,
        f_scalar=memoized_field(f_scalar) if f_scalar is not None else None,
        f_vector=memoized_field(f_vector) if f_vector is not None else None,
        f_pseudo=memoized_field(f_pseudo) if f_pseudo is not None else None,
        g_scalar=memoized_field(data.g),
        g_vector=memoized_field(g_vector) if g_vector is not None else None,
        g_pseudo=memoized_field(g_pseudo) if g_pseudo is not None else None,
    )


# -- applying operators -------------------------------------------------------


def _element_apply(elem: CliffordElement, pair, rep: MatrixRepresentation):
    """Act with a (jet-coefficient) Clifford element on a spinor jet pair."""
    out = None
    for coef, mat in (
        (elem.c_i, None),
        (elem.c_1, rep.gamma1),
        (elem.c_2, rep.gamma2),
        (elem.c_g, rep.gamma12),
    ):
        if isinstance(coef, (int, float, complex)) and coef == 0:
            continue
        if isinstance(coef, Jet2) and coef.is_zero():
            continue
        target = pair if mat is None else mat_apply(mat, pair)
        term = [coef * target[0], coef * target[1]]
        out = term if out is None else [out[0] + term[0], out[1] + term[1]]
    if out is None:
        ref = pair[0]
        z = Jet2(ref.base, ref.order)
        return [z, z]
    return out


def _frame_gradient_pairs(surface, psi, point, order, rep):
    """Frame components nabla_a psi from the coordinate derivatives."""
    fd = surface.frame_at(point, order)
    dcoord = spinor_covariant_derivative(surface, psi, point, order, rep)
    out = []
    for a in (0, 1):
        comp = None
        for mu in (0, 1):
            e = fd.frame[a][mu]
            if e.is_zero():
                continue
            term = [e * dcoord[mu][0], e * dcoord[mu][1]]
            comp = term if comp is None else [comp[0] + term[0], comp[1] + term[1]]
        if comp is None:
            z = Jet2(point, order)
            comp = [z, z]
        out.append(comp)
    return out


def dirac_apply(
    surface: LiouvilleSurface,
    m: float,
    psi: SpinorField,
    point: Point,
    order: int = 0,
    rep=None,
):
    """Jets of (i g^a nabla_a - m) psi at the point."""
    rep = resolve_representation(rep)
    grad = _frame_gradient_pairs(surface, psi, point, order, rep)
    g1 = mat_apply(rep.gamma1, grad[0])
    g2 = mat_apply(rep.gamma2, grad[1])
    out = [1j * (g1[0] + g2[0]), 1j * (g1[1] + g2[1])]
    if m != 0.0:
        p0 = psi.jets(point, order)
        out = [out[0] - m * p0[0], out[1] - m * p0[1]]
    return out


def dirac_operator(surface: LiouvilleSurface, m: float = 0.0, rep=None):
    """The Dirac operator as a SpinorField -> SpinorField map."""
    rep = resolve_representation(rep)

    def op(psi: SpinorField) -> SpinorField:
        return SpinorField(
            lambda point, order: dirac_apply(surface, m, psi, point, order, rep),
            name=f"D[{psi.name}]",
        )

    return op


def symmetry_apply(
    surface: LiouvilleSurface,
    coeffs: OperatorCoefficients,
    psi: SpinorField,
    point: Point,
    order: int = 0,
    rep=None,
):
    """Jets of (E^{ab} nabla_{ab} + F^a nabla_a + G) psi at the point."""
    rep = resolve_representation(rep)
    z = Jet2(point, order)
    out = [z, z]
    if coeffs.e_scalar is not None or coeffs.e_vector is not None or coeffs.e_pseudo is not None:
        n2 = second_symmetrized_derivative(surface, psi, point, order, rep)
        E = coeffs.E_elements(point, order)
        for a in (0, 1):
            for b in (0, 1):
                term = _element_apply(E[a, b], n2[a][b], rep)
                out = [out[0] + term[0], out[1] + term[1]]
    if coeffs.f_scalar is not None or coeffs.f_vector is not None or coeffs.f_pseudo is not None:
        grad = _frame_gradient_pairs(surface, psi, point, order, rep)
        F = coeffs.F_elements(point, order)
        for a in (0, 1):
            term = _element_apply(F[a], grad[a], rep)
            out = [out[0] + term[0], out[1] + term[1]]
    if coeffs.g_scalar is not None or coeffs.g_vector is not None or coeffs.g_pseudo is not None:
        p0 = psi.jets(point, order)
        term = _element_apply(coeffs.G_element(point, order), p0, rep)
        out = [out[0] + term[0], out[1] + term[1]]
    return out


def symmetry_operator(surface: LiouvilleSurface, coeffs: OperatorCoefficients, rep=None):
    """The symmetry operator as a SpinorField -> SpinorField map."""
    rep = resolve_representation(rep)

    def op(psi: SpinorField) -> SpinorField:
        return SpinorField(
            lambda point, order: symmetry_apply(surface, coeffs, psi, point, order, rep),
            name=f"K[{psi.name}]",
        )

    return op


def commutator_residual(
    surface: LiouvilleSurface,
    m: float,
    coeffs: OperatorCoefficients,
    psi: SpinorField,
    point: Point,
    rep=None,
) -> float:
    """|| (K D - D K) psi || at the point (nested jet application)."""
    rep = resolve_representation(rep)
    dop = dirac_operator(surface, m, rep)
    kop = symmetry_operator(surface, coeffs, rep)
    kd = kop(dop(psi)).jets(point, 0)
    dk = dop(kop(psi)).jets(point, 0)
    return spinor_norm([kd[0] - dk[0], kd[1] - dk[1]])


# -- determining equations ----------------------------------------------------


def _coef_value(c) -> complex:
    return c.value if isinstance(c, Jet2) else complex(c)


def _elem_norm(e: CliffordElement) -> float:
    return max(abs(_coef_value(c)) for c in e.coefficients())


_GAMMAS = (GAMMA1, GAMMA2)


def determining_equations_residuals(
    surface: LiouvilleSurface, coeffs: OperatorCoefficients, point: Point
):
    """Pointwise residual norms of the four coefficient equations.

    Each matrix equation is expanded on the Clifford basis; the returned
    tuple holds, per equation, the max modulus over all free-index
    combinations and basis coefficients.
    """
    p, n = point, 0
    E = coeffs.E_elements(p, n)
    F = coeffs.F_elements(p, n)
    G = coeffs.G_element(p, n)
    dE = coeffs.dE_elements(p, n)
    dF = coeffs.dF_elements(p, n)
    dG = coeffs.dG_elements(p, n)
    r_jet = surface.ricci_scalar(p, n)
    dR = frame_covariant_derivative(surface, lambda q, k: surface.ricci_scalar(q, k), 0)(p, n)

    # first equation: E^{(ab} g^{c)} - g^{(c} E^{ab)} = 0
    res1 = 0.0
    for a, b, c in itertools.product((0, 1), repeat=3):
        acc = None
        for pa, pb, pc in itertools.permutations((a, b, c)):
            t = cliff_mul(E[pa, pb], _GAMMAS[pc]) - cliff_mul(_GAMMAS[pc], E[pa, pb])
            acc = t if acc is None else acc + t
        res1 = max(res1, _elem_norm(acc.scaled(1.0 / 6.0)))

    # second equation: F^{(a} g^{b)} - g^{(b} F^{a)} = g^c nabla_c E^{ab}
    res2 = 0.0
    for a, b in itertools.product((0, 1), repeat=2):
        lhs = (
            cliff_mul(F[a], _GAMMAS[b])
            + cliff_mul(F[b], _GAMMAS[a])
            - cliff_mul(_GAMMAS[b], F[a])
            - cliff_mul(_GAMMAS[a], F[b])
        ).scaled(0.5)
        rhs = None
        for c in (0, 1):
            t = cliff_mul(_GAMMAS[c], dE[c, a, b])
            rhs = t if rhs is None else rhs + t
        res2 = max(res2, _elem_norm(lhs - rhs))

    # third equation:
    # G g^a - g^a G = g^c nabla_c F^a
    #   - (R/4)(E^{ab} g^c + g^c E^{ab}) eps_{bc} g12
    #   + (R/6)(E^{bd} g^c + 2 g^c E^{bd}) eps^a_d eps_{bc}
    res3 = 0.0
    for a in (0, 1):
        lhs = cliff_mul(G, _GAMMAS[a]) - cliff_mul(_GAMMAS[a], G)
        rhs = None
        for c in (0, 1):
            t = cliff_mul(_GAMMAS[c], dF[c, a])
            rhs = t if rhs is None else rhs + t
        term2 = None
        for b, c in itertools.product((0, 1), repeat=2):
            eps = EPSILON[b, c]
            if eps == 0.0:
                continue
            t = (cliff_mul(E[a, b], _GAMMAS[c]) + cliff_mul(_GAMMAS[c], E[a, b])).scaled(eps)
            term2 = t if term2 is None else term2 + t
        if term2 is not None:
            rhs = rhs - cliff_mul(term2, GAMMA12).scaled(r_jet * 0.25)
        term3 = None
        for b, c, d in itertools.product((0, 1), repeat=3):
            w = EPSILON[a, d] * EPSILON[b, c]
            if w == 0.0:
                continue
            t = (
                cliff_mul(E[b, d], _GAMMAS[c]) + cliff_mul(_GAMMAS[c], E[b, d]).scaled(2.0)
            ).scaled(w)
            term3 = t if term3 is None else term3 + t
        if term3 is not None:
            rhs = rhs + term3.scaled(r_jet * (1.0 / 6.0))
        res3 = max(res3, _elem_norm(lhs - rhs))

    # fourth equation:
    # g^a nabla_a G = (R/8)(F^a g^b + g^b F^a) g12 eps_{ab}
    #   + (1/12)(2 E^{ab} g^c + g^c E^{ab}) g12 eps_{ac} nabla_b R
    lhs = None
    for a in (0, 1):
        t = cliff_mul(_GAMMAS[a], dG[a])
        lhs = t if lhs is None else lhs + t
    rhs = None
    for a, b in itertools.product((0, 1), repeat=2):
        eps = EPSILON[a, b]
        if eps == 0.0:
            continue
        t = cliff_mul(
            (cliff_mul(F[a], _GAMMAS[b]) + cliff_mul(_GAMMAS[b], F[a])).scaled(eps), GAMMA12
        )
        rhs = t if rhs is None else rhs + t
    rhs = rhs.scaled(r_jet * 0.125)
    for a, b, c in itertools.product((0, 1), repeat=3):
        eps = EPSILON[a, c]
        if eps == 0.0:
            continue
        t = cliff_mul(
            (cliff_mul(E[a, b], _GAMMAS[c]).scaled(2.0) + cliff_mul(_GAMMAS[c], E[a, b])).scaled(
                eps
            ),
            GAMMA12,
        ).scaled(dR[b] * (1.0 / 12.0))
        rhs = rhs + t
    res4 = _elem_norm(lhs - rhs)

    return (res1, res2, res3, res4)


# -- reducibility -------------------------------------------------------------


def compose_first_order(d1: SymmetryData, d2: SymmetryData) -> SymmetryData:
    """Second-order Killing data from the product of two first-order operators.

    K^{ab} = zeta_1^{(a} zeta_2^{b)} + 2 A_1 A_2 eta^{ab},
    alpha^a = (A_1 zeta_2^a + A_2 zeta_1^a) / 2.
    The scalar field g of the product is left unset; complete it with
    the killing module before building coefficients.
    """
    for d in (d1, d2):
        if d.killing_tensor is not None or d.alpha is not None:
            raise ValueError("compose_first_order expects first-order data (no K, no alpha)")
    if d1.surface is not d2.surface:
        raise ValueError("operands live on different surfaces")
    surface = d1.surface
    z1, z2 = d1.zeta, d2.zeta
    a1, a2 = complex(d1.a_const), complex(d2.a_const)

    def ktensor(point, order):
        z = _zero_jet(point, order)
        out = np.empty((2, 2), dtype=object)
        f1 = z1(point, order) if z1 is not None else None
        f2 = z2(point, order) if z2 is not None else None
        for a in (0, 1):
            for b in (0, 1):
                term = z
                if f1 is not None and f2 is not None:
                    term = term + 0.5 * (f1[a] * f2[b] + f1[b] * f2[a])
                if a == b and a1 * a2 != 0.0:
                    term = term + 2.0 * a1 * a2
                out[a, b] = term
        return out

    alpha = None
    if (a1 != 0.0 and z2 is not None) or (a2 != 0.0 and z1 is not None):

        def alpha(point, order):
            z = _zero_jet(point, order)
            t0, t1 = z, z
            if a1 != 0.0 and z2 is not None:
                f2 = z2(point, order)
                t0 = t0 + 0.5 * a1 * f2[0]
                t1 = t1 + 0.5 * a1 * f2[1]
            if a2 != 0.0 and z1 is not None:
                f1 = z1(point, order)
                t0 = t0 + 0.5 * a2 * f1[0]
                t1 = t1 + 0.5 * a2 * f1[1]
            return np.array([t0, t1], dtype=object)

    return SymmetryData(
        surface=surface,
        killing_tensor=memoized_field(ktensor),
        alpha=memoized_field(alpha) if alpha is not None else None,
        zeta=None,
        a_const=0.0,
        g=None,
        kind="second",
    )
