"""Scalar products of arbitrary signature and the linear algebra built on them.

Negative directions always come first: a form of index ``k`` on ``R^n`` has
Gram matrix ``diag(-1, ..., -1, +1, ..., +1)`` with ``k`` leading ``-1``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

DEFAULT_TOL = 1e-9


class ContextMismatchError(ValueError):
    """Vectors from different scalar-product contexts were combined."""


class DegenerateSubspaceError(ValueError):
    """A pivot of pseudo-orthonormalization had (near) zero squared norm."""

    def __init__(self, step: int, value: float):
        super().__init__(f"degenerate subspace at step {step}: squared norm {value:.3e}")
        self.step = step
        self.value = value


class KernelAmbiguityError(ValueError):
    """An eigenvalue sits too close to the kernel threshold to classify."""


@functools.lru_cache(maxsize=None)
def _signature_arrays(dim: int, index: int):
    s = np.ones(dim)
    s[:index] = -1.0
    g = np.diag(s)
    s.setflags(write=False)
    g.setflags(write=False)
    return s, g


@dataclass(frozen=True)
class ScalarProduct:
    """The form ``-x_0 y_0 - ... - x_{k-1} y_{k-1} + x_k y_k + ...``."""

    dim: int
    index: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if not 0 <= self.index <= self.dim:
            raise ValueError(f"index {self.index} outside [0, {self.dim}]")

    @property
    def signs(self) -> np.ndarray:
        return _signature_arrays(self.dim, self.index)[0]

    @property
    def gram(self) -> np.ndarray:
        return _signature_arrays(self.dim, self.index)[1]

    def inner(self, x, y):
        """Vectorised scalar product over the last axis."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape[-1] != self.dim or y.shape[-1] != self.dim:
            raise ContextMismatchError(
                f"expected last axis {self.dim}, got {x.shape[-1]} and {y.shape[-1]}"
            )
        return np.sum(self.signs * x * y, axis=-1)

    __call__ = inner


@dataclass(frozen=True)
class AmbientVector:
    coords: np.ndarray
    context: ScalarProduct

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.shape != (self.context.dim,):
            raise ContextMismatchError(
                f"coords of shape {c.shape} do not fit a form on R^{self.context.dim}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)


def scalar_product(x: AmbientVector, y: AmbientVector) -> float:
    """Signed sum ``-sum_{i<index} x_i y_i + sum_{i>=index} x_i y_i``.

    The signed products are summed with :func:`math.fsum`, so the result is
    the correctly rounded sum of the (rounded) products.
    """
    if x.context != y.context:
        raise ContextMismatchError(f"{x.context} vs {y.context}")
    k = x.context.index
    terms = [-a * b for a, b in zip(x.coords[:k], y.coords[:k])]
    terms += [a * b for a, b in zip(x.coords[k:], y.coords[k:])]
    return math.fsum(terms)


Metric = Union[ScalarProduct, np.ndarray]


def _gram(metric: Metric) -> np.ndarray:
    if isinstance(metric, ScalarProduct):
        return metric.gram
    g = np.asarray(metric, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("metric must be a square Gram matrix")
    return g


def gram_schmidt(vectors, metric: Metric, tol: float = DEFAULT_TOL):
    """Pseudo-orthonormalize ``vectors`` in the given order.

    Returns ``(basis, signs)`` with ``basis`` of shape ``(k, dim)`` and
    ``signs[i] = <u_i, u_i>`` in ``{-1, +1}``.  Raises
    :class:`DegenerateSubspaceError` if some pivot has ``|<v, v>| < tol``.
    """
    G = _gram(metric)
    vecs = np.atleast_2d(np.asarray(vectors, dtype=float))
    if vecs.size == 0:
        return np.zeros((0, G.shape[0])), np.zeros(0)
    basis, signs = [], []
    for step, v in enumerate(vecs):
        w = v.copy()
        for _ in range(2):  # second pass restores orthogonality lost to rounding
            for u, s in zip(basis, signs):
                w = w - s * (u @ G @ w) * u
        nsq = w @ G @ w
        if abs(nsq) < tol:
            raise DegenerateSubspaceError(step, nsq)
        basis.append(w / math.sqrt(abs(nsq)))
        signs.append(math.copysign(1.0, nsq))
    return np.array(basis), np.array(signs)


def span_basis(vectors, metric: Metric, tol: float = DEFAULT_TOL, count: int | None = None):
    """Pseudo-orthonormal basis of ``span(vectors)`` with pivoting.

    Unlike :func:`gram_schmidt` this drops linearly dependent inputs and picks
    at each step the candidate of largest ``|<w, w>|``.  Used to build frames
    of subspaces that are known to be nondegenerate.
    """
    G = _gram(metric)
    dim = G.shape[0]
    C = np.atleast_2d(np.asarray(vectors, dtype=float)).copy()
    basis, signs = [], []
    limit = C.shape[0] if count is None else count
    while C.shape[0] and len(basis) < limit:
        if basis:
            # candidates are already orthogonal to earlier pivots; two passes
            # against the newest one keep them so
            u, su = basis[-1], signs[-1]
            for _ in range(2):
                C = C - np.outer(su * (C @ (G @ u)), u)
        C = C[np.sqrt(np.einsum("ij,ij->i", C, C)) > tol]
        if not C.shape[0]:
            break
        GC = C @ G
        norms = np.einsum("ij,ij->i", GC, C)
        i = int(np.argmax(np.abs(norms)))
        w, nsq = C[i], norms[i]
        if abs(nsq) < tol:
            # every remaining candidate is (nearly) null; try pairwise sums
            best, best_val = None, 0.0
            for a in range(C.shape[0]):
                for b in range(a + 1, C.shape[0]):
                    for sgn in (1.0, -1.0):
                        c = C[a] + sgn * C[b]
                        val = c @ G @ c
                        if abs(val) > abs(best_val):
                            best, best_val = c, val
            if best is None or abs(best_val) < tol:
                raise DegenerateSubspaceError(len(basis), float(nsq))
            w, nsq = best, best_val
        else:
            C = np.delete(C, i, axis=0)
        basis.append(w / math.sqrt(abs(nsq)))
        signs.append(math.copysign(1.0, nsq))
    if count is not None and len(basis) < count:
        raise DegenerateSubspaceError(len(basis), 0.0)
    if not basis:
        return np.zeros((0, dim)), np.zeros(0)
    return np.array(basis), np.array(signs)


def project_onto(x, basis, signs, metric: Metric) -> np.ndarray:
    """Orthogonal projection ``sum_i sign_i <x, u_i> u_i``."""
    G = _gram(metric)
    x = np.asarray(x, dtype=float)
    basis = np.asarray(basis, dtype=float)
    if basis.size == 0:
        return np.zeros_like(x)
    coeffs = np.asarray(signs) * (basis @ G @ x)
    return coeffs @ basis


def frame_projector(basis, signs, metric: Metric) -> np.ndarray:
    """Matrix of :func:`project_onto` for a fixed frame."""
    G = _gram(metric)
    basis = np.asarray(basis, dtype=float)
    if basis.size == 0:
        return np.zeros_like(G)
    return basis.T @ (np.asarray(signs)[:, None] * (basis @ G))


@dataclass(frozen=True)
class SymmetricForm:
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("form matrix must be square")
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, x, y=None):
        y = x if y is None else y
        return np.asarray(x) @ self.matrix @ np.asarray(y)

    @classmethod
    def from_quadratic(cls, q, dim: int) -> "SymmetricForm":
        """Recover the symmetric matrix of a quadratic function by polarization."""
        e = np.eye(dim)
        diag = np.array([q(e[i]) for i in range(dim)])
        m = np.diag(diag)
        for i in range(dim):
            for j in range(i + 1, dim):
                m[i, j] = m[j, i] = 0.5 * (q(e[i] + e[j]) - diag[i] - diag[j])
        return cls(m)


def form_kernel_dimension(Q, tol: float = DEFAULT_TOL):
    """Dimension and orthonormal basis (rows) of the kernel of a symmetric form.

    Eigenvalues with ``|lambda| < tol`` count as zero.  Any eigenvalue with
    ``tol/10 <= |lambda| <= 10 tol`` makes the answer ambiguous and raises
    :class:`KernelAmbiguityError`.
    """
    m = Q.matrix if isinstance(Q, SymmetricForm) else SymmetricForm(Q).matrix
    evals, evecs = np.linalg.eigh(m)
    mags = np.abs(evals)
    straddle = (mags >= tol / 10) & (mags <= tol * 10)
    if np.any(straddle):
        raise KernelAmbiguityError(
            f"eigenvalues {evals[straddle]} too close to kernel tolerance {tol:g}"
        )
    mask = mags < tol
    return int(mask.sum()), evecs[:, mask].T
