"""Quadric models of real and complex pseudo-hyperbolic spaces, and the
closed-form curvature of the rank-one symmetric spaces used as bases.

Curvature sign convention: ``R(X, Y, X, Y) = -g(X,X) g(Y,Y) + g(X,Y)^2`` on a
space of constant curvature ``-1``, so sectional curvature is
``R(X,Y,X,Y) / (g(X,X) g(Y,Y) - g(X,Y)^2)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .division import left_mult_operator, right_mult_operator, unit
from .indefinite import (
    DEFAULT_TOL,
    ScalarProduct,
    SymmetricForm,
    form_kernel_dimension,
    span_basis,
)


class DomainError(ValueError):
    """A point or tangent vector is not where the operation needs it."""


class UnsupportedDirectionError(DomainError):
    pass


class ConfigurationError(ValueError):
    pass


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def complex_structure(n: int) -> np.ndarray:
    """Multiplication by ``i`` on ``C^n`` realified as ``(Re z_0, Im z_0, ...)``."""
    block = np.array([[0.0, -1.0], [1.0, 0.0]])
    return np.kron(np.eye(n), block)


def quaternionic_right_action(n: int, u) -> np.ndarray:
    """Right multiplication ``q -> q u`` on ``H^n`` realified blockwise."""
    return np.kron(np.eye(n), right_mult_operator(u))


def polarize_quartic(k, X, Y, Z, W) -> float:
    """Full curvature value from the quartic ``k(X, Y) = R(X, Y, X, Y)``.

    Uses ``6 R(X,Y,Z,W) = d^2/ds dt [k(X+sZ, Y+tW) - k(X+sW, Y+tZ)]`` at 0.
    Both brackets are polynomials of degree <= 2 in ``s`` and ``t``, so the
    mixed coefficient is extracted exactly from the values at ``s, t = +-1``.
    """
    def mixed(A, B, C, D):
        f = lambda s, t: k(A + s * C, B + t * D)
        return 0.25 * (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1))

    return (mixed(X, Y, Z, W) - mixed(X, Y, W, Z)) / 6.0


@dataclass(frozen=True)
class PseudoHyperbolicSpace:
    """The quadric ``<x, x> = radius_sq`` in ``R^{m+1}`` with index ``s + 1``.

    Constant sectional curvature ``1 / radius_sq`` and metric index ``s``.
    """

    m: int
    s: int
    radius_sq: float = -1.0

    def __post_init__(self):
        if not 0 <= self.s <= self.m:
            raise ValueError(f"index {self.s} outside [0, {self.m}]")
        if not self.radius_sq < 0:
            raise ValueError("radius_sq must be negative")

    @property
    def ambient(self) -> ScalarProduct:
        return ScalarProduct(self.m + 1, self.s + 1)

    @property
    def curvature_constant(self) -> float:
        return 1.0 / self.radius_sq

    def contains(self, p, tol: float = 1e-10) -> bool:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.m + 1,):
            raise DomainError(f"point of shape {p.shape} is not in R^{self.m + 1}")
        return bool(abs(self.ambient.inner(p, p) - self.radius_sq) < tol)

    def sample_point(self, seed=None) -> np.ndarray:
        rng = _rng(seed)
        k = self.s + 1
        y = rng.normal(size=self.m + 1 - k) * (2.0 / math.sqrt(max(self.m + 1 - k, 1)))
        x = rng.normal(size=k)
        x /= np.linalg.norm(x)
        x *= math.sqrt(y @ y - self.radius_sq)
        return np.concatenate([x, y])

    def check_point(self, p, tol: float = 1e-8):
        if not self.contains(p, tol):
            raise DomainError("point is not on the quadric")

    def tangent_basis(self, p, tol: float = DEFAULT_TOL):
        """Pseudo-orthonormal frame of ``p^perp``, timelike vectors first."""
        self.check_point(p)
        G = self.ambient.gram
        p = np.asarray(p, dtype=float)
        cand = np.eye(self.m + 1) - np.outer(G @ p, p) / self.radius_sq
        basis, signs = span_basis(cand, G, tol, count=self.m)
        order = np.argsort(signs, kind="stable")
        return basis[order], signs[order]

    def is_tangent(self, p, v, tol: float = 1e-8) -> bool:
        return bool(abs(self.ambient.inner(p, v)) < tol * max(1.0, np.linalg.norm(v)))

    def geodesic(self, p, v, t: float, tol: float = 1e-12) -> np.ndarray:
        """Point at time ``t`` on the geodesic with initial velocity ``v``."""
        p = np.asarray(p, dtype=float)
        v = np.asarray(v, dtype=float)
        nsq = self.ambient.inner(v, v)
        if abs(nsq) < tol:
            raise UnsupportedDirectionError("null tangent direction")
        speed = math.sqrt(abs(nsq))
        u = v / speed
        rho = math.sqrt(-self.radius_sq)
        a = speed * t / rho
        if nsq > 0:
            return math.cosh(a) * p + rho * math.sinh(a) * u
        return math.cos(a) * p + rho * math.sin(a) * u

    def curvature(self, X, Y, Z, W, p=None, tol: float = 1e-8) -> float:
        g = self.ambient.inner
        if p is not None:
            for arg in (X, Y, Z, W):
                if not self.is_tangent(p, arg, tol):
                    raise DomainError("curvature argument is not tangent at p")
        return self.curvature_constant * (g(X, Z) * g(Y, W) - g(X, W) * g(Y, Z))

    def sectional_curvature(self, X, Y) -> float:
        g = self.ambient.inner
        return self.curvature(X, Y, X, Y) / (g(X, X) * g(Y, Y) - g(X, Y) ** 2)


@dataclass(frozen=True)
class ComplexPseudoHyperbolicSpace:
    """``CH^m_s``: representatives ``z`` with ``(z, z) = -1`` in ``C^{m+1}``.

    Tangent vectors at ``[z]`` are handled as their horizontal lifts at ``z``,
    i.e. vectors of ``R^{2m+2}`` orthogonal to ``z`` and ``i z``.  By default
    ``i`` acts on interleaved ``(Re, Im)`` pairs; ``structure`` overrides it
    with any orthogonal complex structure compatible with the ambient form.
    """

    m: int
    s: int
    structure: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.s <= self.m:
            raise ValueError(f"complex index {self.s} outside [0, {self.m}]")

    @property
    def ambient(self) -> ScalarProduct:
        return ScalarProduct(2 * self.m + 2, 2 * self.s + 2)

    @property
    def sphere(self) -> PseudoHyperbolicSpace:
        return PseudoHyperbolicSpace(2 * self.m + 1, 2 * self.s + 1)

    @property
    def complex_structure(self) -> np.ndarray:
        if self.structure is not None:
            return self.structure
        return complex_structure(self.m + 1)

    def contains(self, z, tol: float = 1e-10) -> bool:
        return self.sphere.contains(z, tol)

    def sample_point(self, seed=None) -> np.ndarray:
        return self.sphere.sample_point(seed)

    def is_tangent(self, z, v, tol: float = 1e-8) -> bool:
        g = self.ambient.inner
        scale = tol * max(1.0, np.linalg.norm(v))
        return bool(abs(g(z, v)) < scale and abs(g(self.complex_structure @ z, v)) < scale)

    def tangent_basis(self, z, tol: float = DEFAULT_TOL):
        self.sphere.check_point(z)
        G = self.ambient.gram
        z = np.asarray(z, dtype=float)
        iz = self.complex_structure @ z
        cand = np.eye(2 * self.m + 2) + np.outer(G @ z, z) + np.outer(G @ iz, iz)
        basis, signs = span_basis(cand, G, tol, count=2 * self.m)
        order = np.argsort(signs, kind="stable")
        return basis[order], signs[order]

    def curvature(self, X, Y, Z, W, p=None, tol: float = 1e-8) -> float:
        """Complex space form of holomorphic sectional curvature ``-4``."""
        if p is not None:
            for arg in (X, Y, Z, W):
                if not self.is_tangent(p, arg, tol):
                    raise DomainError("curvature argument is not tangent at z")
        g = self.ambient.inner
        J = self.complex_structure
        return -(
            g(X, Z) * g(Y, W) - g(X, W) * g(Y, Z)
            + g(X, J @ Z) * g(Y, J @ W) - g(X, J @ W) * g(Y, J @ Z)
            + 2 * g(X, J @ Y) * g(Z, J @ W)
        )

    def quartic(self, X, Y) -> float:
        g = self.ambient.inner
        return -(g(X, X) * g(Y, Y) - g(X, Y) ** 2 + 3 * g(self.complex_structure @ X, Y) ** 2)


class BaseKind(enum.Enum):
    REAL_HYPERBOLIC_4 = "real"          # H^n(-4)
    COMPLEX_HYPERBOLIC = "complex"      # CH^k
    QUATERNIONIC_HYPERBOLIC = "quaternionic"
    CAYLEY_PLANE = "cayley"


_STRUCTURE_COUNT = {
    BaseKind.REAL_HYPERBOLIC_4: 0,
    BaseKind.COMPLEX_HYPERBOLIC: 1,
    BaseKind.QUATERNIONIC_HYPERBOLIC: 3,
    BaseKind.CAYLEY_PLANE: 7,
}


@dataclass(frozen=True)
class BaseCurvatureModel:
    """Curvature of a rank-one symmetric base, normalized to ``-4 <= K <= -1``.

    Vectors are coordinates in an orthonormal frame of the (positive definite)
    tangent space, and ``structures`` are the skew complex structures of the
    model written in that frame.
    """

    kind: BaseKind
    dim: int
    structures: tuple = field(default=(), repr=False)

    def __post_init__(self):
        structs = tuple(np.array(S, dtype=float) for S in self.structures)
        object.__setattr__(self, "structures", structs)
        if len(structs) != _STRUCTURE_COUNT[self.kind]:
            raise ConfigurationError(
                f"{self.kind.name} needs {_STRUCTURE_COUNT[self.kind]} structures, "
                f"got {len(structs)}"
            )
        for S in structs:
            if S.shape != (self.dim, self.dim):
                raise ConfigurationError(f"structure of shape {S.shape} on R^{self.dim}")

    def structure_residual(self) -> float:
        """Max deviation from ``S^2 = -1``, skewness and anticommutation."""
        n = self.dim
        res = 0.0
        for a, S in enumerate(self.structures):
            res = max(res, np.abs(S @ S + np.eye(n)).max(), np.abs(S + S.T).max())
            for T in self.structures[a + 1:]:
                res = max(res, np.abs(S @ T + T @ S).max())
        return float(res)

    def quartic(self, X, Y) -> float:
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        area = (X @ X) * (Y @ Y) - (X @ Y) ** 2
        if self.kind is BaseKind.REAL_HYPERBOLIC_4:
            return -4.0 * area
        return -(area + 3.0 * sum((S @ X @ Y) ** 2 for S in self.structures))

    def tensor(self, X, Y, Z, W) -> float:
        return polarize_quartic(self.quartic, *(np.asarray(v, dtype=float) for v in (X, Y, Z, W)))

    def sectional(self, X, Y) -> float:
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        return self.quartic(X, Y) / ((X @ X) * (Y @ Y) - (X @ Y) ** 2)

    def l_form(self, X) -> SymmetricForm:
        """``Y -> R(X,Y,X,Y) + |X|^2 |Y|^2 - <X,Y>^2``; its kernel is ``L_X``."""
        X = np.asarray(X, dtype=float)
        q = lambda Y: self.quartic(X, Y) + (X @ X) * (Y @ Y) - (X @ Y) ** 2
        return SymmetricForm.from_quadratic(q, self.dim)

    def l_dimension(self, X, tol: float = DEFAULT_TOL) -> int:
        return form_kernel_dimension(self.l_form(X), tol)[0]


def curvature_base_quartic(model: BaseCurvatureModel, X, Y) -> float:
    return model.quartic(X, Y)


def cayley_structures() -> list:
    """Seven anticommuting orthogonal complex structures on ``R^16 = O + O``.

    ``S_a = diag(L_a, L_a)`` where ``L_a`` is left multiplication by the
    imaginary octonion unit ``e_a``.
    """
    return [np.kron(np.eye(2), left_mult_operator(unit(8, a))) for a in range(1, 8)]


def real_hyperbolic_model(n: int) -> BaseCurvatureModel:
    return BaseCurvatureModel(BaseKind.REAL_HYPERBOLIC_4, n)


def complex_hyperbolic_model(k: int) -> BaseCurvatureModel:
    return BaseCurvatureModel(BaseKind.COMPLEX_HYPERBOLIC, 2 * k, (complex_structure(k),))


def quaternionic_hyperbolic_model(k: int) -> BaseCurvatureModel:
    structs = tuple(quaternionic_right_action(k, unit(4, a)) for a in (1, 2, 3))
    return BaseCurvatureModel(BaseKind.QUATERNIONIC_HYPERBOLIC, 4 * k, structs)


def cayley_plane_model() -> BaseCurvatureModel:
    return BaseCurvatureModel(BaseKind.CAYLEY_PLANE, 16, tuple(cayley_structures()))
