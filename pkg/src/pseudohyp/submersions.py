"""The five canonical submersions with totally geodesic fibres.

Every model lives on a real quadric ``<q, q> = -1`` upstairs.  Its vertical
and horizontal distributions are images of projector fields

    P(q) = S(q) (S(q)^T G S(q))^{-1} S(q)^T G

built from spanning columns ``S(q)`` that depend linearly on ``q``.  Because
the columns are linear, the directional derivative ``D_X P`` has a closed
form, and the O'Neill tensors follow exactly:

    A_X Y = P_V(p) (D_X P_H) Y,   A_X V = P_H(p) (D_X P_V) V,
    T_U V = P_H(p) (D_U P_V) V.

The Gauss correction of the quadric is proportional to ``p`` and is killed by
both projectors, so the flat derivative suffices.
"""
from __future__ import annotations

import collections
import contextlib
import functools
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .division import conj, left_mult_operator, mul, right_mult_operator, unit
from .indefinite import (
    DEFAULT_TOL,
    ScalarProduct,
    frame_projector,
    gram_schmidt,
    span_basis,
)
from .spaces import (
    BaseCurvatureModel,
    BaseKind,
    ComplexPseudoHyperbolicSpace,
    ConfigurationError,
    DomainError,
    PseudoHyperbolicSpace,
    real_hyperbolic_model,
)

_FAULTS: set = set()
FAULT_NAMES = ("metric_sign",)


@contextlib.contextmanager
def inject_fault(name: str = "metric_sign"):
    """Test-only corruption of the O'Neill tensors.

    ``"metric_sign"`` drops the indefinite signs of the ambient form inside
    the tensor evaluators, so every projector there is Euclidean.  (A global
    sign flip of ``A`` would go unnoticed: all checks are quadratic in ``A``.)
    """
    if name not in FAULT_NAMES:
        raise ConfigurationError(f"unknown fault {name!r}; known: {FAULT_NAMES}")
    _FAULTS.add(name)
    try:
        yield
    finally:
        _FAULTS.discard(name)


_MEMO_SIZE = 64


def _freeze(obj):
    if isinstance(obj, np.ndarray):
        obj.setflags(write=False)
    elif isinstance(obj, tuple):
        for o in obj:
            _freeze(o)
    elif hasattr(obj, "__dataclass_fields__"):
        for name in obj.__dataclass_fields__:
            _freeze(getattr(obj, name))
    return obj


def _memo_point(fn):
    """Memoize a method whose first argument is a point of the quadric.

    Results are frozen (read-only arrays) since they are shared between
    callers.  Only the most recent few points are kept.
    """
    @functools.wraps(fn)
    def wrapper(self, p, *args, **kwargs):
        p = np.array(p, dtype=float)  # private copy: results may alias it
        key = (fn.__qualname__, p.tobytes(), args, tuple(sorted(kwargs.items())))
        memo = self.__dict__.setdefault("_memo", collections.OrderedDict())
        try:
            memo.move_to_end(key)
            return memo[key]
        except KeyError:
            pass
        out = _freeze(fn(self, p, *args, **kwargs))
        memo[key] = out
        if len(memo) > _MEMO_SIZE:
            memo.popitem(last=False)
        return out

    return wrapper


def span_projector(S: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the column span of ``S`` (nondegenerate)."""
    M = S.T @ G @ S
    return S @ np.linalg.solve(M, S.T @ G)


def span_projector_derivative(S: np.ndarray, dS: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Derivative of :func:`span_projector` when ``S`` moves with velocity ``dS``."""
    M = S.T @ G @ S
    dM = dS.T @ G @ S + S.T @ G @ dS
    Minv = np.linalg.inv(M)
    return (dS @ Minv @ S.T @ G + S @ Minv @ dS.T @ G
            - S @ Minv @ dM @ Minv @ S.T @ G)


class ModelKind(enum.Enum):
    THETA = "theta"
    COMPLEX_HOPF = "complex-hopf"
    QUATERNIONIC_HOPF = "quaternionic-hopf"
    OCTONIONIC_HOPF = "octonionic-hopf"
    COMPLEX_TO_QUATERNIONIC = "complex-to-quaternionic"


@dataclass(frozen=True)
class SplitFrame:
    """Pseudo-orthonormal vertical and horizontal frames at ``point``.

    Frames are stored as rows.  ``signs`` record the squared norms.
    """

    point: np.ndarray
    vertical: np.ndarray
    vertical_signs: np.ndarray
    horizontal: np.ndarray
    horizontal_signs: np.ndarray
    metric: ScalarProduct = field(repr=False)

    @property
    def vertical_projector(self) -> np.ndarray:
        return frame_projector(self.vertical, self.vertical_signs, self.metric)

    @property
    def horizontal_projector(self) -> np.ndarray:
        return frame_projector(self.horizontal, self.horizontal_signs, self.metric)

    def horizontal_coords(self, X) -> np.ndarray:
        return self.horizontal_signs * (self.horizontal @ self.metric.gram @ np.asarray(X))

    def vertical_coords(self, V) -> np.ndarray:
        return self.vertical_signs * (self.vertical @ self.metric.gram @ np.asarray(V))

    def horizontal_vector(self, coords) -> np.ndarray:
        return np.asarray(coords, dtype=float) @ self.horizontal

    def vertical_vector(self, coords) -> np.ndarray:
        return np.asarray(coords, dtype=float) @ self.vertical


@dataclass(frozen=True)
class BasePoint:
    """A point of the base, stored as a representative plus an orbit invariant.

    Quotient bases use a gauge-fixed representative upstairs and the
    projector onto its orbit's span as invariant; the octonionic base point is
    its own representative.
    """

    kind: ModelKind
    representative: np.ndarray
    invariant: np.ndarray = field(repr=False)

    def same_as(self, other: "BasePoint", tol: float = 1e-9) -> bool:
        if self.kind != other.kind:
            return False
        if np.allclose(self.representative, other.representative, rtol=0, atol=tol):
            return True
        return bool(np.abs(self.invariant - other.invariant).max() < tol)


def _as_vec(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


class SubmersionModel:
    """Common machinery.  Subclasses provide the spanning columns."""

    kind: ModelKind
    fibre_dim: int
    base_dim: int
    base_index: int = 0

    # upstairs quadric on which all computations happen
    @property
    def upstairs(self) -> PseudoHyperbolicSpace:
        raise NotImplementedError

    @property
    def ambient(self) -> ScalarProduct:
        return self.upstairs.ambient

    @property
    def gram(self) -> np.ndarray:
        return self.ambient.gram

    @property
    def total_dim(self) -> int:
        return self.base_dim + self.fibre_dim

    @property
    def total_index(self) -> int:
        return self.base_index + self.fibre_dim

    @property
    def riemannian_base(self) -> bool:
        return self.base_index == 0

    @property
    def label(self) -> str:
        return self.kind.value

    @property
    def params(self) -> dict:
        return {}

    def __repr__(self):
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{type(self).__name__}({args})"

    def __eq__(self, other):
        return type(self) is type(other) and self.params == other.params

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(self.params.items()))))

    # -- spanning columns, all linear in q ------------------------------------
    def vertical_columns(self, q) -> np.ndarray:
        raise NotImplementedError

    def gauge_columns(self, q) -> np.ndarray:
        """Extra directions removed from the tangent space (none by default)."""
        return np.zeros((self.ambient.dim, 0))

    def _normal_columns(self, q) -> np.ndarray:
        q = _as_vec(q)
        return np.column_stack([q[:, None], self.gauge_columns(q)])

    def _complement_columns(self, q) -> np.ndarray:
        return np.column_stack([self._normal_columns(q), self.vertical_columns(q)])

    # -- projector fields -----------------------------------------------------
    # ``G`` defaults to the ambient Gram matrix; the tensor evaluators pass it
    # explicitly so that fault injection can corrupt it.
    def vertical_projector(self, q, G=None) -> np.ndarray:
        G = self.gram if G is None else G
        return span_projector(self.vertical_columns(q), G)

    def horizontal_projector(self, q, G=None) -> np.ndarray:
        G = self.gram if G is None else G
        n = self.ambient.dim
        return np.eye(n) - span_projector(self._complement_columns(q), G)

    def tangent_projector(self, q) -> np.ndarray:
        n = self.ambient.dim
        return np.eye(n) - span_projector(self._normal_columns(q), self.gram)

    def vertical_projector_derivative(self, q, X, G=None) -> np.ndarray:
        G = self.gram if G is None else G
        return span_projector_derivative(self.vertical_columns(q), self.vertical_columns(X), G)

    def horizontal_projector_derivative(self, q, X, G=None) -> np.ndarray:
        G = self.gram if G is None else G
        return -span_projector_derivative(
            self._complement_columns(q), self._complement_columns(X), G
        )

    # -- points ---------------------------------------------------------------
    def contains(self, p, tol: float = 1e-10) -> bool:
        return self.upstairs.contains(p, tol)

    def check_point(self, p, tol: float = 1e-8):
        if not self.contains(p, tol):
            raise DomainError(f"point is not on the total space of {self!r}")

    def sample_point(self, seed=None) -> np.ndarray:
        return self.upstairs.sample_point(seed)

    def _residual(self, v, P) -> float:
        v = _as_vec(v)
        return float(np.linalg.norm(v - P @ v) / max(1.0, np.linalg.norm(v)))

    def is_tangent(self, p, w, tol: float = 1e-8) -> bool:
        return self._residual(w, self.tangent_projector(p)) < tol

    def is_horizontal(self, p, X, tol: float = 1e-8) -> bool:
        return self._residual(X, self.horizontal_projector(p)) < tol

    def is_vertical(self, p, V, tol: float = 1e-8) -> bool:
        return self._residual(V, self.vertical_projector(p)) < tol

    def require_tangent(self, p, w, tol: float = 1e-8):
        if not self.is_tangent(p, w, tol):
            raise DomainError("vector is not tangent to the total space")

    def require_horizontal(self, p, *vs, tol: float = 1e-8):
        for v in vs:
            if not self.is_horizontal(p, v, tol):
                raise DomainError("vector is not horizontal")

    def require_vertical(self, p, *vs, tol: float = 1e-8):
        for v in vs:
            if not self.is_vertical(p, v, tol):
                raise DomainError("vector is not vertical")

    # -- frames ---------------------------------------------------------------
    def _vertical_frame(self, p):
        return gram_schmidt(self.vertical_columns(p).T, self.gram)

    @_memo_point
    def split_frame(self, p, tol: float = DEFAULT_TOL) -> SplitFrame:
        """Frames built from spanning vectors, independently of the projectors."""
        self.check_point(p)
        p = _as_vec(p)
        G = self.gram
        V, vs = self._vertical_frame(p)
        N, ns = gram_schmidt(self._normal_columns(p).T, G)
        B = np.vstack([N, V])
        bs = np.concatenate([ns, vs])
        cand = np.eye(self.ambient.dim) - frame_projector(B, bs, G)
        H, hs = span_basis(cand.T, G, tol, count=self.base_dim)
        order = np.argsort(hs, kind="stable")
        return SplitFrame(p, V, vs, H[order], hs[order], self.ambient)

    # -- projection -----------------------------------------------------------
    @_memo_point
    def project(self, p) -> BasePoint:
        raise NotImplementedError

    @_memo_point
    def differential_matrix(self, p) -> np.ndarray:
        raise NotImplementedError

    def differential(self, p, w) -> np.ndarray:
        self.check_point(p)
        self.require_tangent(p, w)
        return self.differential_matrix(p) @ _as_vec(w)

    def base_inner(self, u, v) -> float:
        return float(self.ambient.inner(u, v))

    def base_frame(self, b: BasePoint):
        """Pseudo-orthonormal frame of the base tangent space at ``b``."""
        f = self.split_frame(b.representative)
        return f.horizontal, f.horizontal_signs

    def base_coords(self, b: BasePoint, u, frame=None) -> np.ndarray:
        F, signs = self.base_frame(b) if frame is None else frame
        return signs * (F @ self._base_gram @ _as_vec(u))

    @property
    def _base_gram(self) -> np.ndarray:
        return self.gram

    def base_model(self, b: BasePoint, frame=None) -> BaseCurvatureModel | None:
        """Closed-form curvature model of the base in frame coordinates."""
        return None

    def base_quartic_function(self, b: BasePoint):
        """Callable ``(u, v) -> R'(u, v, u, v)`` for base vectors at ``b``."""
        frame = self.base_frame(b)
        model = self.base_model(b, frame)
        if model is None:
            raise ConfigurationError(f"{self!r} has no closed-form base model")
        coords = lambda u: self.base_coords(b, u, frame)
        return lambda u, v: model.quartic(coords(u), coords(v))

    def base_quartic(self, b: BasePoint, u, v) -> float:
        """``R'(u, v, u, v)`` for base tangent vectors ``u, v`` at ``b``."""
        return self.base_quartic_function(b)(u, v)

    def base_tangent_residual(self, b: BasePoint, u) -> float:
        """How far ``u`` is from the base tangent space at ``b``."""
        return self._residual(u, self.horizontal_projector(b.representative))

    # -- curvature upstairs ---------------------------------------------------
    def total_curvature(self, p, X, Y, Z, W) -> float:
        for v in (X, Y, Z, W):
            self.require_tangent(p, v)
        return self.upstairs.curvature(X, Y, Z, W)

    def fibre_curvature(self, p, U, V) -> float:
        """Intrinsic ``R^(U, V, U, V)`` of the fibre through ``p``.

        The fibre is the unit sphere of the negative definite space
        ``span(p) + V_p``.  With ``h = -g`` there, the sphere's second
        fundamental form is ``II(U, V) = -h(U, V) p`` and the Gauss equation
        gives ``R_h = h(U,U) h(V,V) - h(U,V)^2``; the fibre metric is ``-h``.
        """
        self.require_vertical(p, U, V)
        h = lambda a, b: -self.ambient.inner(a, b)
        p = _as_vec(p)
        hp = h(p, p)
        II = lambda a, b: -h(a, b) * p / hp
        R_h = h(II(U, U), II(V, V)) - h(II(U, V), II(U, V))
        return float(-R_h)

    def geodesic(self, p, v, t: float) -> np.ndarray:
        return self.upstairs.geodesic(p, v, t)


# --- quotient models ---------------------------------------------------------


def _block_diag(n: int, block: np.ndarray) -> np.ndarray:
    d = block.shape[0]
    out = np.zeros((n * d, n * d))
    for i in range(n):
        out[i * d:(i + 1) * d, i * d:(i + 1) * d] = block
    return out


@functools.lru_cache(maxsize=None)
def _unit_right_action(n: int, block: int, a: int) -> np.ndarray:
    R = _block_diag(n, right_mult_operator(unit(block, a)))
    R.setflags(write=False)
    return R


class _QuotientModel(SubmersionModel):
    """Quotient by right multiplication of unit elements of C or H."""

    block: int            # 2 for complex coordinates, 4 for quaternionic
    units: tuple          # indices of the imaginary units spanning the orbit

    def _right(self, u) -> np.ndarray:
        n = self.ambient.dim // self.block
        return _block_diag(n, right_mult_operator(u))

    def _unit_actions(self, units) -> list:
        n = self.ambient.dim // self.block
        return [_unit_right_action(n, self.block, a) for a in units]

    def orbit_columns(self, q) -> np.ndarray:
        q = _as_vec(q)
        units = range(1, self.block)
        return np.column_stack([q] + [R @ q for R in self._unit_actions(units)])

    def gauge_fix(self, p):
        """Representative with largest-modulus coordinate real positive.

        Returns ``(p_hat, R)`` where ``R`` is right multiplication by the
        unit ``mu`` with ``p_hat = p mu``.
        """
        p = _as_vec(p)
        blocks = p.reshape(-1, self.block)
        a = int(np.argmax(np.einsum("ij,ij->i", blocks, blocks)))
        qa = blocks[a]
        mu = conj(qa) / np.linalg.norm(qa)
        R = self._right(mu)
        return R @ p, R

    @_memo_point
    def project(self, p) -> BasePoint:
        self.check_point(p)
        p_hat, _ = self.gauge_fix(p)
        O = self.orbit_columns(p_hat)
        return BasePoint(self.kind, p_hat, O @ O.T)

    @_memo_point
    def differential_matrix(self, p) -> np.ndarray:
        """Horizontal projection followed by the move to the gauge-fixed representative."""
        _, R = self.gauge_fix(p)
        return R @ self.horizontal_projector(p)

    def fibre_point(self, p, u, t: float) -> np.ndarray:
        """``p exp(t u)`` for a unit imaginary ``u`` of the structure group."""
        u = _as_vec(u)
        lam = math.cos(t) * unit(self.block, 0) + math.sin(t) * u / np.linalg.norm(u)
        return self._right(lam) @ _as_vec(p)

    def _frame_structures(self, F, actions) -> list:
        G = self.gram
        return [F @ G @ S @ F.T for S in actions]


class ThetaCircle(_QuotientModel):
    """``H^{2m+1}_{2s+1} -> CH^m_s``, quotient by the circle."""

    kind = ModelKind.THETA
    block = 2
    fibre_dim = 1

    def __init__(self, m: int, s: int = 0):
        if m < 1 or not 0 <= s <= m:
            raise ConfigurationError(f"need m >= 1 and 0 <= s <= m, got m={m}, s={s}")
        self.m = m
        self.s = s
        self.base_dim = 2 * m
        self.base_index = 2 * s

    @property
    def params(self) -> dict:
        return {"m": self.m, "s": self.s}

    @property
    def upstairs(self) -> PseudoHyperbolicSpace:
        return PseudoHyperbolicSpace(2 * self.m + 1, 2 * self.s + 1)

    @property
    def base_space(self) -> ComplexPseudoHyperbolicSpace:
        return ComplexPseudoHyperbolicSpace(self.m, self.s)

    @property
    def structure(self) -> np.ndarray:
        return self._right(unit(2, 1))

    def vertical_columns(self, q) -> np.ndarray:
        return (self.structure @ _as_vec(q))[:, None]

    def base_model(self, b, frame=None):
        if not self.riemannian_base:
            return None
        F, _ = self.base_frame(b) if frame is None else frame
        return BaseCurvatureModel(
            BaseKind.COMPLEX_HYPERBOLIC, self.base_dim,
            tuple(self._frame_structures(F, [self.structure])),
        )

    def base_quartic_function(self, b):
        if self.riemannian_base:
            return super().base_quartic_function(b)
        return self.base_space.quartic


class ComplexHopf(ThetaCircle):
    """``H^{2k+1}_1 -> CH^k``."""

    kind = ModelKind.COMPLEX_HOPF

    def __init__(self, k: int):
        super().__init__(k, 0)
        self.k = k

    @property
    def params(self) -> dict:
        return {"k": self.k}


class QuaternionicHopf(_QuotientModel):
    """``H^{4k+3}_3 -> HH^k``, quotient by unit quaternions acting on the right."""

    kind = ModelKind.QUATERNIONIC_HOPF
    block = 4
    fibre_dim = 3
    vertical_units = (1, 2, 3)

    def __init__(self, k: int):
        if k < 1:
            raise ConfigurationError(f"need k >= 1, got {k}")
        self.k = k
        self.base_dim = 4 * k

    @property
    def params(self) -> dict:
        return {"k": self.k}

    @property
    def upstairs(self) -> PseudoHyperbolicSpace:
        return PseudoHyperbolicSpace(4 * self.k + 3, 3)

    def vertical_columns(self, q) -> np.ndarray:
        q = _as_vec(q)
        return np.column_stack([R @ q for R in self._unit_actions(self.vertical_units)])

    def base_model(self, b, frame=None):
        F, _ = self.base_frame(b) if frame is None else frame
        return BaseCurvatureModel(
            BaseKind.QUATERNIONIC_HYPERBOLIC, self.base_dim,
            tuple(self._frame_structures(F, self._unit_actions((1, 2, 3)))),
        )


class ComplexToQuaternionic(QuaternionicHopf):
    """``CH^{2k+1}_1 -> HH^k``, computed on representatives in ``H^{4k+3}_3``.

    Tangent vectors of the total space are lifted to ``{p, p i}^perp``; the
    vertical space is ``span{p j, p k}`` and ``p i`` is a gauge direction.
    """

    kind = ModelKind.COMPLEX_TO_QUATERNIONIC
    fibre_dim = 2
    vertical_units = (2, 3)

    @property
    def total_index(self) -> int:
        return 2

    @property
    def complex_structure(self) -> np.ndarray:
        return self._right(unit(4, 1))

    @property
    def total_space(self) -> ComplexPseudoHyperbolicSpace:
        return ComplexPseudoHyperbolicSpace(2 * self.k + 1, 1, structure=self.complex_structure)

    def gauge_columns(self, q) -> np.ndarray:
        return (self.complex_structure @ _as_vec(q))[:, None]

    def total_curvature(self, p, X, Y, Z, W) -> float:
        for v in (X, Y, Z, W):
            self.require_tangent(p, v)
        return self.total_space.curvature(X, Y, Z, W)

    def fibre_curvature(self, p, U, V) -> float:
        """The fibre ``CH^1_1`` is a round 2-sphere of curvature 4 with its
        metric negated, so ``R^(U,V,U,V) = -4 (g(U,U) g(V,V) - g(U,V)^2)``."""
        self.require_vertical(p, U, V)
        g = self.ambient.inner
        return float(-4.0 * (g(U, U) * g(V, V) - g(U, V) ** 2))


# --- octonionic --------------------------------------------------------------

_OCT_CONJ = np.diag([1.0] + [-1.0] * 7)


class OctonionicHopf(SubmersionModel):
    """``H^15_7 -> H^8(-4)``, ``pi(x, y) = ((|x|^2 + |y|^2)/2, conj(y) x)``.

    The base is the quadric ``<u, u> = -1/4`` in ``R^9_1``.
    """

    kind = ModelKind.OCTONIONIC_HOPF
    fibre_dim = 7
    base_dim = 8

    @property
    def upstairs(self) -> PseudoHyperbolicSpace:
        return PseudoHyperbolicSpace(15, 7)

    @property
    def base_space(self) -> PseudoHyperbolicSpace:
        return PseudoHyperbolicSpace(8, 0, -0.25)

    @property
    def _base_gram(self) -> np.ndarray:
        return self.base_space.ambient.gram

    def base_inner(self, u, v) -> float:
        return float(self.base_space.ambient.inner(u, v))

    def projection_map(self, p) -> np.ndarray:
        p = _as_vec(p)
        x, y = p[:8], p[8:]
        return np.concatenate([[0.5 * (x @ x + y @ y)], mul(conj(y), x)])

    def jacobian(self, q) -> np.ndarray:
        """``9 x 16`` Jacobian of :meth:`projection_map`; linear in ``q``."""
        q = _as_vec(q)
        x, y = q[:8], q[8:]
        top = np.concatenate([x, y])[None, :]
        bottom = np.hstack([left_mult_operator(conj(y)), right_mult_operator(x) @ _OCT_CONJ])
        return np.vstack([top, bottom])

    def cokernel_columns(self, q, G=None) -> np.ndarray:
        """``G^{-1} J(q)^T G_9``: spans ``H_q + R q``, linear in ``q``."""
        G = self.gram if G is None else G
        return np.linalg.inv(G) @ self.jacobian(q).T @ self._base_gram

    def vertical_columns(self, q) -> np.ndarray:
        # only used for spans; the projector fields are overridden below
        return self.split_frame(q).vertical.T

    def vertical_projector(self, q, G=None) -> np.ndarray:
        G = self.gram if G is None else G
        return np.eye(16) - span_projector(self.cokernel_columns(q, G), G)

    def horizontal_projector(self, q, G=None) -> np.ndarray:
        G = self.gram if G is None else G
        q = _as_vec(q)
        return span_projector(self.cokernel_columns(q, G), G) - span_projector(q[:, None], G)

    def vertical_projector_derivative(self, q, X, G=None) -> np.ndarray:
        G = self.gram if G is None else G
        return -span_projector_derivative(
            self.cokernel_columns(q, G), self.cokernel_columns(X, G), G
        )

    def horizontal_projector_derivative(self, q, X, G=None) -> np.ndarray:
        G = self.gram if G is None else G
        return (span_projector_derivative(self.cokernel_columns(q, G), self.cokernel_columns(X, G), G)
                - span_projector_derivative(_as_vec(q)[:, None], _as_vec(X)[:, None], G))

    def _vertical_frame(self, p):
        A = np.vstack([self.jacobian(p), (self.gram @ p)[None, :]])
        _, sv, Vt = np.linalg.svd(A)
        kernel = Vt[np.sum(sv > 1e-10):]
        if kernel.shape[0] != 7:
            raise DomainError(f"kernel of the differential has dim {kernel.shape[0]}, not 7")
        return span_basis(kernel, self.gram, count=7)

    @_memo_point
    def project(self, p) -> BasePoint:
        self.check_point(p)
        u = self.projection_map(p)
        return BasePoint(self.kind, u, u)

    @_memo_point
    def differential_matrix(self, p) -> np.ndarray:
        return self.jacobian(p)

    @_memo_point
    def split_frame(self, p, tol: float = DEFAULT_TOL) -> SplitFrame:
        """Frames oriented canonically: the horizontal frame maps to a
        positively oriented base frame, and ``det[q, V, H] > 0``."""
        f = super().split_frame(p, tol)
        H, V = f.horizontal.copy(), f.vertical.copy()
        u = self.projection_map(p)
        if np.linalg.det(np.vstack([u, H @ self.jacobian(p).T])) < 0:
            H[-1] *= -1
        if np.linalg.det(np.vstack([f.point, V, H])) < 0:
            V[-1] *= -1
        return SplitFrame(f.point, V, f.vertical_signs, H, f.horizontal_signs, f.metric)

    def base_frame(self, b):
        return self.base_space.tangent_basis(b.representative)

    def base_model(self, b, frame=None):
        return real_hyperbolic_model(8)

    def base_tangent_residual(self, b, u) -> float:
        u = _as_vec(u)
        return abs(self.base_inner(u, b.representative)) / max(1.0, float(np.linalg.norm(u)))


# --- registry ------------------------------------------------------------------

MODEL_NAMES = tuple(k.value for k in ModelKind)


def make_model(name: str, k: int = 2, m: int | None = None, s: int = 0) -> SubmersionModel:
    """Build a model from its CLI name."""
    try:
        kind = ModelKind(name)
    except ValueError:
        raise ConfigurationError(f"unknown model {name!r}; known: {', '.join(MODEL_NAMES)}") from None
    if kind is ModelKind.THETA:
        return ThetaCircle(k if m is None else m, s)
    if kind is ModelKind.COMPLEX_HOPF:
        return ComplexHopf(k)
    if kind is ModelKind.QUATERNIONIC_HOPF:
        return QuaternionicHopf(k)
    if kind is ModelKind.OCTONIONIC_HOPF:
        return OctonionicHopf()
    return ComplexToQuaternionic(k)


# --- O'Neill tensors -----------------------------------------------------------


def _tensor_gram(model: SubmersionModel) -> np.ndarray:
    if "metric_sign" in _FAULTS:
        return np.eye(model.ambient.dim)
    return model.gram


def project(model: SubmersionModel, p) -> BasePoint:
    return model.project(p)


def differential(model: SubmersionModel, p, w) -> np.ndarray:
    return model.differential(p, w)


def split_frame(model: SubmersionModel, p) -> SplitFrame:
    return model.split_frame(p)


def a_tensor(model: SubmersionModel, p, X, Y, tol: float = 1e-8, check: bool = True) -> np.ndarray:
    """``A_X Y`` for horizontal ``X, Y``: vertical part of ``D_X`` of the
    horizontal-projector extension of ``Y``.

    ``check=False`` skips the domain checks (used to evaluate the formula on
    deliberately non-horizontal input).
    """
    if check:
        model.check_point(p)
        model.require_horizontal(p, X, Y, tol=tol)
    G = _tensor_gram(model)
    dP = model.horizontal_projector_derivative(p, X, G)
    return model.vertical_projector(p, G) @ (dP @ _as_vec(Y))


def a_tensor_adjoint(model: SubmersionModel, p, X, V, tol: float = 1e-8,
                     check: bool = True) -> np.ndarray:
    """``A_X V`` for horizontal ``X`` and vertical ``V``: horizontal part of
    ``D_X`` of the vertical-projector extension of ``V``."""
    if check:
        model.check_point(p)
        model.require_horizontal(p, X, tol=tol)
        model.require_vertical(p, V, tol=tol)
    G = _tensor_gram(model)
    dP = model.vertical_projector_derivative(p, X, G)
    return model.horizontal_projector(p, G) @ (dP @ _as_vec(V))


def t_tensor(model: SubmersionModel, p, U, V, tol: float = 1e-8, check: bool = True) -> np.ndarray:
    """``T_U V`` for vertical ``U, V``; the second fundamental form of the fibre."""
    if check:
        model.check_point(p)
        model.require_vertical(p, U, V, tol=tol)
    G = _tensor_gram(model)
    dP = model.vertical_projector_derivative(p, U, G)
    return model.horizontal_projector(p, G) @ (dP @ _as_vec(V))


def base_structures(model: SubmersionModel, p, frame: SplitFrame | None = None) -> list:
    """Matrices of ``X -> A_X v_a`` in the horizontal frame, one per vertical ``v_a``."""
    f = model.split_frame(p) if frame is None else frame
    G = _tensor_gram(model)
    PH = model.horizontal_projector(p, G)
    cols = []
    for h in f.horizontal:
        AV = PH @ model.vertical_projector_derivative(p, h, G) @ f.vertical.T
        cols.append(f.horizontal_signs[:, None] * (f.horizontal @ model.gram @ AV))
    stacked = np.stack(cols, axis=1)  # (n, n, r): [i, j, a]
    return [stacked[:, :, a] for a in range(f.vertical.shape[0])]


def a_operator(model: SubmersionModel, p) -> "callable":
    """``X -> M_X`` with ``A_X Y = M_X Y`` for horizontal ``Y`` (no domain checks)."""
    G = _tensor_gram(model)
    PV = model.vertical_projector(p, G)
    return lambda X: PV @ model.horizontal_projector_derivative(p, X, G)


def pushforward_matrix(model: SubmersionModel, p, frame: SplitFrame | None = None,
                       bframe=None):
    """Matrix of the differential from horizontal-frame to base-frame coordinates."""
    f = model.split_frame(p) if frame is None else frame
    b = model.project(p)
    bframe = model.base_frame(b) if bframe is None else bframe
    F, signs = bframe
    D = signs[:, None] * (F @ model._base_gram @ model.differential_matrix(p) @ f.horizontal.T)
    return b, bframe, D


@dataclass(frozen=True)
class HolonomyMap:
    """Linear map between horizontal spaces along a fibre."""

    source: SplitFrame
    target: SplitFrame
    matrix: np.ndarray

    def __call__(self, X) -> np.ndarray:
        return self.target.horizontal_vector(self.matrix @ self.source.horizontal_coords(X))

    def isometry_residual(self) -> float:
        S = np.diag(self.source.horizontal_signs)
        T = np.diag(self.target.horizontal_signs)
        return float(np.abs(self.matrix.T @ T @ self.matrix - S).max())


def holonomy_transport(model: SubmersionModel, p, t: float, direction=None,
                       tol: float = 1e-9) -> HolonomyMap:
    """Transport ``H_p -> H_{p(t)}`` along the fibre geodesic through ``p``.

    ``direction`` is a vertical vector at ``p`` (default: first vertical frame
    vector).  A horizontal ``X`` goes to the horizontal vector at ``p(t)``
    with the same image under the differential.
    """
    f0 = model.split_frame(p)
    V = f0.vertical[0] if direction is None else _as_vec(direction)
    model.require_vertical(p, V)
    pt = model.geodesic(p, V, t)
    if not model.project(pt).same_as(model.project(p), tol=1e-8):
        raise DomainError("path left the fibre")
    f1 = model.split_frame(pt)
    _, bframe, D0 = pushforward_matrix(model, p, f0)
    _, _, D1 = pushforward_matrix(model, pt, f1, bframe)
    M = np.linalg.solve(D1, D0)
    return HolonomyMap(f0, f1, M)


def fibre_curvature(model: SubmersionModel, p, U, V) -> float:
    return model.fibre_curvature(p, U, V)


def total_curvature(model: SubmersionModel, p, X, Y, Z, W) -> float:
    return model.total_curvature(p, X, Y, Z, W)


def sample_tangent(model: SubmersionModel, frame: SplitFrame, rng, which: str = "horizontal",
                   unit_norm: bool = True, retries: int = 32) -> np.ndarray:
    """Gaussian combination of frame vectors, normalized; redraws degenerate draws."""
    basis = frame.horizontal if which == "horizontal" else frame.vertical
    g = model.ambient.inner
    for _ in range(retries):
        v = rng.normal(size=basis.shape[0]) @ basis
        nsq = g(v, v)
        if abs(nsq) > 1e-6 and np.linalg.norm(v) > 1e-6:
            return v / math.sqrt(abs(nsq)) if unit_norm else v
    raise DomainError(f"no nondegenerate {which} draw after {retries} tries")
