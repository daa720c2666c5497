"""Complex numbers, quaternions and octonions as real coordinate tuples.

All three algebras come from one Cayley-Dickson doubling rule

    (a, b)(c, d) = (ac - conj(d) b,  d a + b conj(c))

applied to pairs of the previous algebra, starting from the reals.  Basis
element ``e_i`` of the doubled algebra is ``(e_i, 0)`` for ``i < n`` and
``(0, e_{i-n})`` otherwise, so quaternion coordinates are ``(1, i, j, k)``
with ``i j = k``.  :data:`MULTIPLICATION_TABLES` holds the resulting signed
tables; ``TABLE[i][j] = (sign, k)`` means ``e_i e_j = sign * e_k``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class AlgebraMismatchError(ValueError):
    pass


class Algebra(enum.IntEnum):
    COMPLEX = 2
    QUATERNION = 4
    OCTONION = 8


def _conj_sign(i: int) -> int:
    return 1 if i == 0 else -1


@lru_cache(maxsize=None)
def _basis_table(dim: int) -> tuple:
    if dim == 1:
        return (((1, 0),),)
    half = dim // 2
    sub = _basis_table(half)
    table = [[None] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            a, b = i % half, j % half
            if i < half and j < half:      # (e_a,0)(e_b,0) = (e_a e_b, 0)
                s, k = sub[a][b]
            elif i < half:                 # (e_a,0)(0,e_b) = (0, e_b e_a)
                s, k = sub[b][a]
                k += half
            elif j < half:                 # (0,e_a)(e_b,0) = (0, e_a conj(e_b))
                s, k = sub[a][b]
                s *= _conj_sign(b)
                k += half
            else:                          # (0,e_a)(0,e_b) = (-conj(e_b) e_a, 0)
                s, k = sub[b][a]
                s *= -_conj_sign(b)
            table[i][j] = (s, k)
    return tuple(tuple(row) for row in table)


MULTIPLICATION_TABLES = {alg: _basis_table(int(alg)) for alg in Algebra}


@lru_cache(maxsize=None)
def structure_constants(dim: int) -> np.ndarray:
    """Tensor ``C`` with ``(x y)_k = sum_ij x_i y_j C[i, j, k]``."""
    C = np.zeros((dim, dim, dim))
    for i, row in enumerate(_basis_table(dim)):
        for j, (s, k) in enumerate(row):
            C[i, j, k] = s
    C.setflags(write=False)
    return C


def _dim_of(x: np.ndarray) -> int:
    d = x.shape[-1]
    if d not in (1, 2, 4, 8):
        raise AlgebraMismatchError(f"no division algebra of dimension {d}")
    return d


def mul(x, y) -> np.ndarray:
    """Product of coordinate arrays, broadcasting over leading axes."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != y.shape[-1]:
        raise AlgebraMismatchError(f"cannot multiply dims {x.shape[-1]} and {y.shape[-1]}")
    C = structure_constants(_dim_of(x))
    return np.einsum("...i,...j,ijk->...k", x, y, C)


def conj(x) -> np.ndarray:
    x = np.array(x, dtype=float)
    x[..., 1:] *= -1
    return x


def unit(dim: int, i: int) -> np.ndarray:
    e = np.zeros(dim)
    e[i] = 1.0
    return e


@dataclass(frozen=True)
class HyperNumber:
    algebra: Algebra
    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.shape != (int(self.algebra),):
            raise AlgebraMismatchError(
                f"{self.algebra.name} needs {int(self.algebra)} coords, got {c.shape}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @classmethod
    def basis(cls, algebra: Algebra, i: int) -> "HyperNumber":
        return cls(algebra, unit(int(algebra), i))

    def __mul__(self, other):
        if isinstance(other, HyperNumber):
            return multiply(self, other)
        return HyperNumber(self.algebra, self.coords * other)

    def __rmul__(self, other):
        return HyperNumber(self.algebra, self.coords * other)

    def __add__(self, other: "HyperNumber"):
        _same(self, other)
        return HyperNumber(self.algebra, self.coords + other.coords)

    def __sub__(self, other: "HyperNumber"):
        _same(self, other)
        return HyperNumber(self.algebra, self.coords - other.coords)

    def __neg__(self):
        return HyperNumber(self.algebra, -self.coords)

    def conjugate(self) -> "HyperNumber":
        return conjugate(self)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    @property
    def real(self) -> float:
        return float(self.coords[0])


def _same(a: HyperNumber, b: HyperNumber):
    if a.algebra != b.algebra:
        raise AlgebraMismatchError(f"{a.algebra.name} vs {b.algebra.name}")


def multiply(a: HyperNumber, b: HyperNumber) -> HyperNumber:
    _same(a, b)
    return HyperNumber(a.algebra, mul(a.coords, b.coords))


def conjugate(a: HyperNumber) -> HyperNumber:
    return HyperNumber(a.algebra, conj(a.coords))


def _coords(u) -> np.ndarray:
    return u.coords if isinstance(u, HyperNumber) else np.asarray(u, dtype=float)


def left_mult_operator(u) -> np.ndarray:
    """Matrix ``M`` with ``M x = u x``."""
    u = _coords(u)
    return np.einsum("i,ijk->kj", u, structure_constants(_dim_of(u)))


def right_mult_operator(u) -> np.ndarray:
    """Matrix ``M`` with ``M x = x u``."""
    u = _coords(u)
    return np.einsum("j,ijk->ki", u, structure_constants(_dim_of(u)))


def hermitian_form(z, w, index: int) -> HyperNumber:
    """``-sum_{i<index} z_i conj(w_i) + sum_{i>=index} z_i conj(w_i)``.

    ``z`` and ``w`` are sequences of :class:`HyperNumber` or arrays of shape
    ``(n, d)``.  The real part equals the indefinite scalar product of the
    realified vectors (coordinates of ``z_0`` first, then ``z_1``, ...) with
    ``index * d`` negative directions.
    """
    Z = np.array([_coords(x) for x in z], dtype=float)
    W = np.array([_coords(x) for x in w], dtype=float)
    if Z.shape != W.shape:
        raise AlgebraMismatchError(f"length mismatch {Z.shape} vs {W.shape}")
    if not 0 <= index <= Z.shape[0]:
        raise ValueError(f"index {index} outside [0, {Z.shape[0]}]")
    d = _dim_of(Z)
    terms = mul(Z, conj(W))
    signs = np.ones(Z.shape[0])
    signs[:index] = -1.0
    return HyperNumber(Algebra(d), signs @ terms)
