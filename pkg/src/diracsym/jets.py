"""Truncated bivariate Taylor jets.

Every analytic quantity in this package (profile functions, frames,
connections, curvature, spinor components) is evaluated at a point as a
truncated Taylor expansion in ``(u - u0, v - v0)``.  Jet arithmetic then
supplies exact partial derivatives of arbitrary composites up to the
truncation order, with no finite-difference noise.

Coefficients are plain monomial coefficients: ``c[i, j]`` multiplies
``(u - u0)**i * (v - v0)**j``, so the (i, j) partial derivative at the
base point is ``i! * j! * c[i, j]``.  Coefficients are complex throughout.

Arithmetic is closed over a fixed ``(base, order)``; combining jets with
different base points or orders raises :class:`JetError`.  Use
:meth:`Jet2.truncated` to lower the order explicitly when mixing data of
different derivative depth.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "DEFAULT_ORDER",
    "Jet2",
    "JetError",
    "jet_add",
    "jet_mul",
    "jet_scale",
    "jet_partial",
    "jet_compose_univariate",
    "jet_sin",
    "jet_cos",
    "jet_sinh",
    "jet_cosh",
    "jet_exp",
    "jet_log",
    "jet_sqrt",
    "jet_reciprocal",
    "jet_power",
    "taylor_ode_system",
]

DEFAULT_ORDER = 6

_SCALAR_TYPES = (int, float, complex, np.integer, np.floating, np.complexfloating)


class JetError(ValueError):
    """Incompatible jet operands or a singular composition point."""


_MASKS: dict[int, np.ndarray] = {}


def _mask(order: int) -> np.ndarray:
    m = _MASKS.get(order)
    if m is None:
        idx = np.add.outer(np.arange(order + 1), np.arange(order + 1))
        m = (idx <= order).astype(np.complex128)
        _MASKS[order] = m
    return m


def _mul_arrays(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    if order == 0:
        return a * b[0, 0]
    out = np.zeros((order + 1, order + 1), dtype=np.complex128)
    for i in range(order + 1):
        row = a[i]
        if not row.any():
            continue
        for j in range(order + 1 - i):
            c = row[j]
            if c != 0.0:
                out[i:, j:] += c * b[: order + 1 - i, : order + 1 - j]
    out *= _mask(order)
    return out


class Jet2:
    """Bivariate Taylor polynomial truncated at total degree ``order``."""

    __slots__ = ("base", "order", "coeffs")

    def __init__(self, base: tuple[float, float], order: int, coeffs: np.ndarray | None = None):
        if order < 0:
            raise JetError("jet order must be nonnegative")
        self.base = (float(base[0]), float(base[1]))
        self.order = int(order)
        if coeffs is None:
            coeffs = np.zeros((order + 1, order + 1), dtype=np.complex128)
        else:
            coeffs = np.asarray(coeffs, dtype=np.complex128)
            if coeffs.shape != (order + 1, order + 1):
                raise JetError(f"coefficient array must be {(order + 1, order + 1)}, got {coeffs.shape}")
        self.coeffs = coeffs

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, value: complex, base: tuple[float, float], order: int) -> "Jet2":
        j = cls(base, order)
        j.coeffs[0, 0] = value
        return j

    @classmethod
    def variable(cls, which: str, base: tuple[float, float], order: int) -> "Jet2":
        """Jet of the coordinate function u or v at ``base``."""
        j = cls(base, order)
        if which == "u":
            j.coeffs[0, 0] = base[0]
            if order >= 1:
                j.coeffs[1, 0] = 1.0
        elif which == "v":
            j.coeffs[0, 0] = base[1]
            if order >= 1:
                j.coeffs[0, 1] = 1.0
        else:
            raise JetError(f"variable must be 'u' or 'v', got {which!r}")
        return j

    # -- basic queries ------------------------------------------------

    @property
    def value(self) -> complex:
        """Constant term (the value of the represented function at base)."""
        return complex(self.coeffs[0, 0])

    def derivative_value(self, i: int, j: int) -> complex:
        """Partial derivative d^{i+j} f / du^i dv^j at the base point."""
        if i + j > self.order:
            raise JetError(f"derivative ({i},{j}) exceeds jet order {self.order}")
        return complex(self.coeffs[i, j]) * math.factorial(i) * math.factorial(j)

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def __call__(self, u: float, v: float) -> complex:
        """Evaluate the truncated polynomial at (u, v)."""
        du, dv = u - self.base[0], v - self.base[1]
        pu = du ** np.arange(self.order + 1)
        pv = dv ** np.arange(self.order + 1)
        return complex(pu @ self.coeffs @ pv)

    def __repr__(self) -> str:  # pragma: no cover
        return f"Jet2(base={self.base}, order={self.order}, value={self.value:.6g})"

    # -- structural ops -----------------------------------------------

    def copy(self) -> "Jet2":
        return Jet2(self.base, self.order, self.coeffs.copy())

    def truncated(self, order: int) -> "Jet2":
        """Same jet with coefficients above ``order`` dropped."""
        if order == self.order:
            return self
        if order > self.order:
            raise JetError(f"cannot raise jet order {self.order} -> {order}")
        sub = self.coeffs[: order + 1, : order + 1] * _mask(order)
        return Jet2(self.base, order, sub)

    def partial(self, which: str) -> "Jet2":
        """Partial derivative jet; the order drops by one."""
        if self.order < 1:
            raise JetError("cannot differentiate an order-0 jet")
        n = self.order - 1
        out = np.zeros((n + 1, n + 1), dtype=np.complex128)
        if which == "u":
            out[:, :] = self.coeffs[1:, : n + 1] * np.arange(1, n + 2)[:, None]
        elif which == "v":
            out[:, :] = self.coeffs[: n + 1, 1:] * np.arange(1, n + 2)[None, :]
        else:
            raise JetError(f"partial direction must be 'u' or 'v', got {which!r}")
        out *= _mask(n)
        return Jet2(self.base, n, out)

    # -- arithmetic ----------------------------------------------------

    def _check(self, other: "Jet2") -> None:
        if self.base != other.base:
            raise JetError(f"base points differ: {self.base} vs {other.base}")
        if self.order != other.order:
            raise JetError(f"orders differ: {self.order} vs {other.order}")

    def __add__(self, other):
        if isinstance(other, Jet2):
            self._check(other)
            return Jet2(self.base, self.order, self.coeffs + other.coeffs)
        if isinstance(other, _SCALAR_TYPES):
            out = self.coeffs.copy()
            out[0, 0] += other
            return Jet2(self.base, self.order, out)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet2(self.base, self.order, -self.coeffs)

    def __sub__(self, other):
        if isinstance(other, Jet2):
            self._check(other)
            return Jet2(self.base, self.order, self.coeffs - other.coeffs)
        if isinstance(other, _SCALAR_TYPES):
            out = self.coeffs.copy()
            out[0, 0] -= other
            return Jet2(self.base, self.order, out)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            out = -self.coeffs
            out[0, 0] += other
            return Jet2(self.base, self.order, out)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Jet2):
            self._check(other)
            return Jet2(self.base, self.order, _mul_arrays(self.coeffs, other.coeffs, self.order))
        if isinstance(other, _SCALAR_TYPES):
            return Jet2(self.base, self.order, self.coeffs * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return self * jet_reciprocal(other)
        if isinstance(other, _SCALAR_TYPES):
            return Jet2(self.base, self.order, self.coeffs / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            return jet_reciprocal(self) * other
        return NotImplemented

    def __pow__(self, p):
        return jet_power(self, p)


# -- module-level operation aliases ------------------------------------


def jet_add(a: Jet2, b: Jet2) -> Jet2:
    return a + b


def jet_mul(a: Jet2, b: Jet2) -> Jet2:
    return a * b


def jet_scale(a: Jet2, s: complex) -> Jet2:
    return a * s


def jet_partial(a: Jet2, which: str) -> Jet2:
    return a.partial(which)


# -- univariate composition ---------------------------------------------


def _factorials(n: int) -> np.ndarray:
    return np.array([math.factorial(k) for k in range(n + 1)], dtype=np.float64)


def _series_for(name: str, x0: complex, n: int) -> np.ndarray:
    """Taylor coefficients of the named function about x0, k = 0..n."""
    k = np.arange(n + 1)
    fact = _factorials(n)
    if name == "exp":
        return np.exp(x0) / fact
    if name in ("sin", "cos"):
        cyc = np.array([np.sin(x0), np.cos(x0), -np.sin(x0), -np.cos(x0)])
        if name == "cos":
            cyc = np.roll(cyc, -1)  # derivatives of cos start at cos, -sin, ...
        return cyc[k % 4] / fact
    if name in ("sinh", "cosh"):
        pair = np.array([np.sinh(x0), np.cosh(x0)])
        if name == "cosh":
            pair = pair[::-1]
        return pair[k % 2] / fact
    if name == "ln":
        _require_off_cut(x0, "ln")
        out = np.empty(n + 1, dtype=np.complex128)
        out[0] = np.log(x0)
        kk = np.arange(1, n + 1)
        out[1:] = ((-1.0) ** (kk - 1)) / (kk * x0**kk)
        return out
    raise JetError(f"unknown analytic function {name!r}")


def _require_off_cut(x0: complex, what: str) -> None:
    x0 = complex(x0)
    if x0.real <= 0 and abs(x0.imag) < 1e-300:
        raise JetError(f"{what} is singular at composition point {x0}")


def jet_compose_univariate(f: str, a: Jet2, exponent: float | None = None) -> Jet2:
    """Compose an analytic function with a jet, ``f(a(u, v))``.

    ``f`` is one of sin, cos, sinh, cosh, exp, ln, sqrt, reciprocal or
    "power" (with ``exponent``).  The composition point is the jet's
    constant term; singular points (zero for reciprocal, the cut for
    ln/sqrt/fractional powers) raise :class:`JetError`.
    """
    if f == "reciprocal":
        return jet_power(a, -1)
    if f == "sqrt":
        return jet_power(a, 0.5)
    if f == "power":
        if exponent is None:
            raise JetError("power composition needs an exponent")
        return jet_power(a, exponent)
    series = _series_for(f, a.value, a.order)
    return _apply_series(series, a)


def _apply_series(series: Sequence[complex], a: Jet2) -> Jet2:
    """Horner evaluation of sum series[k] * (a - a0)^k, truncated."""
    d = a.copy()
    d.coeffs[0, 0] = 0.0
    out = Jet2.constant(series[a.order], a.base, a.order)
    for k in range(a.order - 1, -1, -1):
        out = out * d + series[k]
    return out


def jet_sin(a: Jet2) -> Jet2:
    return jet_compose_univariate("sin", a)


def jet_cos(a: Jet2) -> Jet2:
    return jet_compose_univariate("cos", a)


def jet_sinh(a: Jet2) -> Jet2:
    return jet_compose_univariate("sinh", a)


def jet_cosh(a: Jet2) -> Jet2:
    return jet_compose_univariate("cosh", a)


def jet_exp(a: Jet2) -> Jet2:
    return jet_compose_univariate("exp", a)


def jet_log(a: Jet2) -> Jet2:
    return jet_compose_univariate("ln", a)


def jet_sqrt(a: Jet2) -> Jet2:
    return jet_power(a, 0.5)


def jet_reciprocal(a: Jet2) -> Jet2:
    return jet_power(a, -1)


def _binomial_series(p: float, x0: complex, n: int) -> np.ndarray:
    # binom(p, k) * x0**(p - k); requires x0 off the branch cut for
    # non-integer p.
    out = np.empty(n + 1, dtype=np.complex128)
    c = 1.0
    for k in range(n + 1):
        out[k] = c * np.power(complex(x0), p - k)
        c = c * (p - k) / (k + 1)
    return out


def jet_power(a: Jet2, p: float) -> Jet2:
    """a**p for numeric p; integer exponents work at any base value."""
    if isinstance(p, (int, np.integer)) or (isinstance(p, float) and p.is_integer()):
        k = int(p)
        if k >= 0:
            out = Jet2.constant(1.0, a.base, a.order)
            for _ in range(k):
                out = out * a
            return out
        if a.value == 0:
            raise JetError("reciprocal of a jet with zero constant term")
        inv_series = _binomial_series(-1, a.value, a.order)
        inv = _apply_series(inv_series, a)
        return jet_power(inv, -k)
    _require_off_cut(a.value, f"power {p}")
    return _apply_series(_binomial_series(float(p), a.value, a.order), a)


# -- Taylor recursion for ODE-defined functions --------------------------


def taylor_ode_system(
    var: str,
    base: tuple[float, float],
    order: int,
    values: Sequence[complex],
    rhs: Callable[[Jet2, list[Jet2]], Sequence[Jet2]],
) -> list[Jet2]:
    """Jets of the solution of an autonomous-in-y ODE system y' = rhs(x, y).

    ``values`` are the solution values at the base point (the ODE is
    assumed solved elsewhere); the Taylor coefficients in the single
    variable ``var`` are generated by Picard iteration on truncated
    series, so the returned jets satisfy the ODE identically through
    ``order``.
    """
    x = Jet2.variable(var, base, order)
    ys = [Jet2.constant(y0, base, order) for y0 in values]
    for _ in range(order):
        fs = rhs(x, ys)
        new = []
        for y0, f in zip(values, fs):
            new.append(_integrate_series(f, var) + y0)
        ys = new
    return ys


def _integrate_series(f: Jet2, var: str) -> Jet2:
    """Antiderivative in ``var`` with zero constant term (same order)."""
    n = f.order
    out = np.zeros((n + 1, n + 1), dtype=np.complex128)
    if var == "u":
        kk = np.arange(1, n + 1)
        out[1:, :] = f.coeffs[: n, :] / kk[:, None]
    else:
        kk = np.arange(1, n + 1)
        out[:, 1:] = f.coeffs[:, : n] / kk[None, :]
    out *= _mask(n)
    return Jet2(f.base, n, out)
