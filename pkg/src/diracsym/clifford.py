"""The Clifford algebra C(2) over the basis {1, g1, g2, g12}.

Multiplication uses only the Euclidean anticommutation relations
``g_a g_b + g_b g_a = 2 delta_ab``; no matrix representation is fixed.
Coefficients may be plain complex numbers or :class:`~diracsym.jets.Jet2`
values (anything supporting ring arithmetic with complex scalars).

A handful of concrete 2x2 matrix representations is provided for acting
on two-component spinors and for cross-checking the abstract structure
table against honest matrix multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "CliffordElement",
    "cliff_mul",
    "cliff_commutator",
    "cliff_anticommutator",
    "cliff_decompose",
    "MatrixRepresentation",
    "REPRESENTATIONS",
    "DEFAULT_REPRESENTATION",
    "concrete_representation_check",
    "IDENTITY",
    "GAMMA1",
    "GAMMA2",
    "GAMMA12",
]


class CliffordElement:
    """Element c_I*1 + c_1*g1 + c_2*g2 + c_g*g1g2 of C(2)."""

    __slots__ = ("c_i", "c_1", "c_2", "c_g")

    def __init__(self, c_i=0.0, c_1=0.0, c_2=0.0, c_g=0.0):
        self.c_i = c_i
        self.c_1 = c_1
        self.c_2 = c_2
        self.c_g = c_g

    @classmethod
    def scalar(cls, s) -> "CliffordElement":
        return cls(c_i=s)

    @classmethod
    def gamma(cls, a: int, one=1.0) -> "CliffordElement":
        """Basis vector g1 or g2 (a is 1 or 2), scaled by ``one``."""
        if a == 1:
            return cls(c_1=one)
        if a == 2:
            return cls(c_2=one)
        raise ValueError(f"frame index must be 1 or 2, got {a}")

    def coefficients(self):
        return (self.c_i, self.c_1, self.c_2, self.c_g)

    def __add__(self, other):
        if not isinstance(other, CliffordElement):
            return NotImplemented
        return CliffordElement(
            self.c_i + other.c_i,
            self.c_1 + other.c_1,
            self.c_2 + other.c_2,
            self.c_g + other.c_g,
        )

    def __sub__(self, other):
        if not isinstance(other, CliffordElement):
            return NotImplemented
        return CliffordElement(
            self.c_i - other.c_i,
            self.c_1 - other.c_1,
            self.c_2 - other.c_2,
            self.c_g - other.c_g,
        )

    def __neg__(self):
        return CliffordElement(-self.c_i, -self.c_1, -self.c_2, -self.c_g)

    def scaled(self, s) -> "CliffordElement":
        return CliffordElement(s * self.c_i, s * self.c_1, s * self.c_2, s * self.c_g)

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return cliff_mul(self, other)
        return self.scaled(other)

    def __rmul__(self, other):
        # scalars commute with the coefficient ring
        return self.scaled(other)

    def __repr__(self) -> str:  # pragma: no cover
        return f"CliffordElement(I={self.c_i}, g1={self.c_1}, g2={self.c_2}, g12={self.c_g})"


IDENTITY = CliffordElement(c_i=1.0)
GAMMA1 = CliffordElement(c_1=1.0)
GAMMA2 = CliffordElement(c_2=1.0)
GAMMA12 = CliffordElement(c_g=1.0)


def cliff_mul(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    """Product in C(2).

    Structure table: g1g1 = g2g2 = 1, g1g2 = -g2g1 = g12,
    g1*g12 = g2, g12*g1 = -g2, g2*g12 = -g1, g12*g2 = g1, g12*g12 = -1.
    """
    a, b, c, d = x.c_i, x.c_1, x.c_2, x.c_g
    e, f, g, h = y.c_i, y.c_1, y.c_2, y.c_g
    return CliffordElement(
        a * e + b * f + c * g - d * h,
        a * f + b * e - c * h + d * g,
        a * g + c * e + b * h - d * f,
        a * h + d * e + b * g - c * f,
    )


def cliff_commutator(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    return cliff_mul(x, y) - cliff_mul(y, x)


def cliff_anticommutator(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    return cliff_mul(x, y) + cliff_mul(y, x)


def cliff_decompose(x: CliffordElement):
    """Coefficients (c_I, c_1, c_2, c_g) over the basis {1, g1, g2, g1g2}."""
    return x.coefficients()


# -- concrete matrix representations -------------------------------------


@dataclass(frozen=True)
class MatrixRepresentation:
    """A concrete 2x2 realization of the generators.

    ``gamma12`` is always the matrix product ``gamma1 @ gamma2`` so the
    abstract basis maps consistently.
    """

    name: str
    gamma1: np.ndarray
    gamma2: np.ndarray
    gamma12: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "gamma12", self.gamma1 @ self.gamma2)

    def matrix(self, x: CliffordElement) -> np.ndarray:
        eye = np.eye(2, dtype=complex)
        return (
            x.c_i * eye + x.c_1 * self.gamma1 + x.c_2 * self.gamma2 + x.c_g * self.gamma12
        )

    def basis_matrices(self):
        return (np.eye(2, dtype=complex), self.gamma1, self.gamma2, self.gamma12)


_SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)

REPRESENTATIONS: dict[str, MatrixRepresentation] = {
    # generic default
    "pauli-xy": MatrixRepresentation("pauli-xy", _SIGMA1, _SIGMA2),
    # the gauge in which the separation scheme's operator matrices are
    # antidiagonal/diagonal as used by the separation module
    "separation": MatrixRepresentation("separation", _SIGMA3, _SIGMA2),
    # an inequivalent-looking second choice for representation-independence
    # checks
    "pauli-zx": MatrixRepresentation("pauli-zx", _SIGMA3, _SIGMA1),
}

DEFAULT_REPRESENTATION = REPRESENTATIONS["pauli-xy"]


def concrete_representation_check(rep: MatrixRepresentation | str = "pauli-xy") -> dict:
    """Cross-check the abstract structure table against matrix algebra.

    Maps all 16 basis products through the chosen representation and
    compares with the abstract product; also checks the defining
    anticommutation relations and the tracelessness of the volume
    element.  Returns a small report dict with a ``passed`` flag.
    """
    if isinstance(rep, str):
        rep = REPRESENTATIONS[rep]
    basis_elems = (IDENTITY, GAMMA1, GAMMA2, GAMMA12)
    mats = rep.basis_matrices()
    max_err = 0.0
    count = 0
    for x, mx in zip(basis_elems, mats):
        for y, my in zip(basis_elems, mats):
            abstract = rep.matrix(cliff_mul(x, y))
            concrete = mx @ my
            max_err = max(max_err, float(np.max(np.abs(abstract - concrete))))
            count += 1
    anti_err = 0.0
    for a, ga in ((1, rep.gamma1), (2, rep.gamma2)):
        for b, gb in ((1, rep.gamma1), (2, rep.gamma2)):
            target = 2.0 * (1.0 if a == b else 0.0) * np.eye(2)
            anti_err = max(anti_err, float(np.max(np.abs(ga @ gb + gb @ ga - target))))
    trace_g = abs(complex(np.trace(rep.gamma12)))
    passed = max_err < 1e-14 and anti_err < 1e-14 and trace_g < 1e-14
    return {
        "representation": rep.name,
        "products_checked": count,
        "max_product_deviation": max_err,
        "max_anticommutation_deviation": anti_err,
        "volume_element_trace": trace_g,
        "passed": passed,
    }
