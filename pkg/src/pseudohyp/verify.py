"""Sampled verification of the submersion identities.

Each check draws points and tangent data from its own seed, evaluates one
identity per sample, and reports the maximum absolute residual.  Discrete
checks (dimensions, signs) report a mismatch count and pass only at zero.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .clifford import INEQUIVALENT, action_from_submersion, find_intertwiner
from .indefinite import form_kernel_dimension, gram_schmidt
from .oracles import a_tensor_adjoint_fd, a_tensor_fd, nabla_a_vertical_fd
from .spaces import (
    BaseCurvatureModel,
    BaseKind,
    ConfigurationError,
    polarize_quartic,
    real_hyperbolic_model,
)
from .submersions import (
    ComplexHopf,
    ComplexToQuaternionic,
    ModelKind,
    OctonionicHopf,
    QuaternionicHopf,
    SubmersionModel,
    ThetaCircle,
    a_operator,
    a_tensor,
    a_tensor_adjoint,
    base_structures,
    holonomy_transport,
    pushforward_matrix,
    sample_tangent,
    t_tensor,
)


@dataclass(frozen=True)
class Sample:
    model: SubmersionModel
    p: np.ndarray
    frame: object
    rng: np.random.Generator

    def horizontal(self, unit_norm: bool = True):
        return sample_tangent(self.model, self.frame, self.rng, "horizontal", unit_norm)

    def vertical(self, unit_norm: bool = True):
        return sample_tangent(self.model, self.frame, self.rng, "vertical", unit_norm)

    def g(self, x, y) -> float:
        return float(self.model.ambient.inner(x, y))


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    fn: Callable
    supports: Callable = lambda model: True
    unsupported_reason: str = ""
    discrete: bool = False
    samples: int = 200
    tol: float | None = None      # check-specific default tolerance
    stateful: bool = False        # fn also receives a dict shared across samples


REGISTRY: dict = {}


def _register(name, anchor, supports=None, reason="", discrete=False, samples=200, tol=None,
              stateful=False):
    def deco(fn):
        REGISTRY[name] = Check(name, anchor, fn, supports or (lambda m: True), reason,
                               discrete, samples, tol, stateful)
        return fn
    return deco


def _riemannian(model):
    return model.riemannian_base


_INDEFINITE = "unsupported: indefinite base"


# --- checks --------------------------------------------------------------------


@_register("frame_signature", "dimension bookkeeping: m = n + r with timelike fibres", discrete=True)
def _frame_signature(s: Sample):
    m, f = s.model, s.frame
    bad = int(len(f.vertical) != m.fibre_dim) + int(len(f.horizontal) != m.base_dim)
    bad += int(np.any(f.vertical_signs != -1))
    bad += int(np.sum(f.horizontal_signs < 0) != m.base_index)
    bad += int(len(f.vertical) + len(f.horizontal) != m.total_dim)
    return bad


@_register("axiom_c", "submersion axioms: kernel is vertical, horizontal isometry")
def _axiom_c(s: Sample):
    m, f = s.model, s.frame
    b, bframe, D = pushforward_matrix(m, s.p, f)
    iso = np.abs(D.T @ np.diag(bframe[1]) @ D - np.diag(f.horizontal_signs)).max()
    V = s.vertical()
    kernel = np.linalg.norm(m.differential(s.p, V))
    X = s.horizontal()
    tangent = m.base_tangent_residual(b, m.differential(s.p, X))
    return max(iso, kernel, tangent)


@_register("fibre_invariance", "projection constant along fibres")
def _fibre_invariance(s: Sample):
    m = s.model
    b0 = m.project(s.p)
    t = s.rng.uniform(-math.pi, math.pi)
    moved = [m.geodesic(s.p, s.vertical(), t)]
    if hasattr(m, "fibre_point"):
        u = s.rng.normal(size=m.block - 1)
        moved.append(m.fibre_point(s.p, np.concatenate([[0.0], u]), t))
    res = 0.0
    for q in moved:
        b1 = m.project(q)
        res = max(res, min(np.abs(b1.representative - b0.representative).max(),
                           np.abs(b1.invariant - b0.invariant).max()))
    return res


@_register("t_zero", "totally geodesic fibres: T = 0")
def _t_zero(s: Sample):
    U, V = s.vertical(), s.vertical()
    return max(np.linalg.norm(t_tensor(s.model, s.p, U, V)),
               np.linalg.norm(t_tensor(s.model, s.p, U, U)))


@_register("lemma3a", "fibre curvature equals ambient curvature on vertical planes")
def _lemma3a(s: Sample):
    U, V = s.vertical(), s.vertical()
    return abs(s.model.fibre_curvature(s.p, U, V) - s.model.total_curvature(s.p, U, V, U, V))


@_register("lemma3b", "mixed curvature R(X,U,X,U) = g(A_X U, A_X U) = -g(X,X) g(U,U)")
def _lemma3b(s: Sample):
    X, U = s.horizontal(), s.vertical()
    A = a_tensor_adjoint(s.model, s.p, X, U, check=False)
    gAA = s.g(A, A)
    return max(abs(s.model.total_curvature(s.p, X, U, X, U) - gAA),
               abs(gAA + s.g(X, X) * s.g(U, U)))


def _pushed_base_model(s: Sample, phis, D) -> BaseCurvatureModel:
    """Base curvature model with the A-tensor structures moved to base coordinates."""
    m = s.model
    Dinv = np.linalg.inv(D)
    structs = [D @ phi @ Dinv for phi in phis]
    if m.kind is ModelKind.OCTONIONIC_HOPF:
        return real_hyperbolic_model(m.base_dim)
    if len(structs) == 1:
        return BaseCurvatureModel(BaseKind.COMPLEX_HYPERBOLIC, m.base_dim, tuple(structs))
    if len(structs) == 2:
        structs.append(structs[0] @ structs[1])
    return BaseCurvatureModel(BaseKind.QUATERNIONIC_HYPERBOLIC, m.base_dim, tuple(structs))


@_register("lemma3c", "base quartic = R(X,Y,X,Y) + 3 g(A_X Y, A_X Y) with A-derived structures",
           supports=_riemannian, reason=_INDEFINITE)
def _lemma3c(s: Sample):
    m, f = s.model, s.frame
    X, Y = s.horizontal(), s.horizontal()
    b, bframe, D = pushforward_matrix(m, s.p, f)
    model = _pushed_base_model(s, base_structures(m, s.p, f), D)
    cx, cy = D @ f.horizontal_coords(X), D @ f.horizontal_coords(Y)
    A = a_tensor(m, s.p, X, Y, check=False)
    rhs = m.total_curvature(s.p, X, Y, X, Y) + 3.0 * s.g(A, A)
    return max(abs(model.quartic(cx, cy) - rhs), model.structure_residual())


@_register("oneill_vi", "curvature equation for horizontal quadruples with T = 0")
def _oneill_vi(s: Sample):
    m = s.model
    X, Y, Z, W = (s.horizontal() for _ in range(4))
    b = m.project(s.p)
    k = m.base_quartic_function(b)
    d = [m.differential(s.p, v) for v in (X, Y, Z, W)]
    A = lambda u, v: a_tensor(m, s.p, u, v, check=False)
    lhs = polarize_quartic(k, *d)
    rhs = (m.total_curvature(s.p, X, Y, Z, W) + 2.0 * s.g(A(X, Y), A(Z, W))
           - s.g(A(Y, Z), A(X, W)) + s.g(A(X, Z), A(Y, W)))
    quartic = abs(k(d[0], d[1]) - m.total_curvature(s.p, X, Y, X, Y) - 3.0 * s.g(A(X, Y), A(X, Y)))
    return max(abs(lhs - rhs), quartic)


def _orthonormal_pair(s: Sample):
    X, Y = s.horizontal(False), s.horizontal(False)
    basis, _ = gram_schmidt([X, Y], s.model.gram)
    return basis[0], basis[1]


@_register("pinching", "base sectional curvature in [-4, -1]", supports=_riemannian,
           reason=_INDEFINITE)
def _pinching(s: Sample, pairs: int = 5):
    m = s.model
    k = m.base_quartic_function(m.project(s.p))
    worst = 0.0
    for _ in range(pairs):
        X, Y = _orthonormal_pair(s)
        u, v = m.differential(s.p, X), m.differential(s.p, Y)
        area = m.base_inner(u, u) * m.base_inner(v, v) - m.base_inner(u, v) ** 2
        K = k(u, v) / area
        worst = max(worst, -4.0 - K, K + 1.0)
    return worst


@_register("special_plane", "K'(pi_* Z, pi_* A_Z V) = -4", supports=_riemannian, reason=_INDEFINITE)
def _special_plane(s: Sample):
    m = s.model
    Z, V = s.horizontal(), s.vertical()
    W = a_tensor_adjoint(m, s.p, Z, V, check=False)
    u, v = m.differential(s.p, Z), m.differential(s.p, W)
    area = m.base_inner(u, u) * m.base_inner(v, v) - m.base_inner(u, v) ** 2
    return abs(m.base_quartic(m.project(s.p), u, v) / area + 4.0)


@_register("adjoint", "g(A_X V, Y) = -g(V, A_X Y) and A*_X A_X V = g(X,X) V")
def _adjoint(s: Sample):
    m = s.model
    X, Y, V, W = s.horizontal(), s.horizontal(), s.vertical(), s.vertical()
    AV = a_tensor_adjoint(m, s.p, X, V, check=False)
    AW = a_tensor_adjoint(m, s.p, X, W, check=False)
    AY = a_tensor(m, s.p, X, Y, check=False)
    # adjoint taken with respect to the positive fibre metric -g
    adjoint_star = a_tensor(m, s.p, X, AV, check=False)
    return max(abs(s.g(AV, Y) + s.g(V, AY)),
               abs(s.g(AV, AW) + s.g(X, X) * s.g(V, W)),
               float(np.abs(adjoint_star - s.g(X, X) * V).max()))


@_register("clifford_vertical", "A^v A^w + A^w A^v = 2 g(v, w) Id on H")
def _clifford_vertical(s: Sample):
    phis = base_structures(s.model, s.p, s.frame)
    n = len(s.frame.horizontal)
    res = 0.0
    for a, A in enumerate(phis):
        for c in range(a, len(phis)):
            B = phis[c]
            target = 2.0 * s.frame.vertical_signs[a] * np.eye(n) if a == c else 0.0
            res = max(res, float(np.abs(A @ B + B @ A - target).max()))
    return res


@_register("clifford_horizontal", "A_x A_y v + A_y A_x v = 2 g(x, y) v")
def _clifford_horizontal(s: Sample):
    m, f = s.model, s.frame
    phis = base_structures(m, s.p, f)
    x, y = s.horizontal(), s.horizontal()
    cx, cy = f.horizontal_coords(x), f.horizontal_coords(y)
    Ax = np.column_stack([P @ cx for P in phis])
    Ay = np.column_stack([P @ cy for P in phis])

    A = a_operator(m, s.p)

    def psi(u):
        return f.vertical_signs[:, None] * (f.vertical @ m.gram @ A(u) @ f.horizontal.T)

    lhs = psi(x) @ Ay + psi(y) @ Ax
    return float(np.abs(lhs - 2.0 * s.g(x, y) * np.eye(len(phis))).max())


def _odd_central(model):
    return model.riemannian_base and model.fibre_dim in (3, 7)


@_register("volume_sign", "A^{v_1} ... A^{v_s} = +Id with one orientation for all points",
           supports=_odd_central, reason="unsupported: needs 3 or 7 timelike generators",
           samples=100, stateful=True)
def _volume_sign(s: Sample, state: dict):
    phis = base_structures(s.model, s.p, s.frame)
    W = np.linalg.multi_dot(phis) if len(phis) > 1 else phis[0]
    if "orientation" not in state:
        # fix the orientation once, at the first point
        state["orientation"] = 1.0 if np.abs(W - np.eye(len(W))).max() < 0.5 else -1.0
    return float(np.abs(state["orientation"] * W - np.eye(len(W))).max())


def _l_dim_supported(model):
    return model.riemannian_base and model.kind is not ModelKind.COMPLEX_TO_QUATERNIONIC


@_register("l_dim", "dim ker A*_X = dim L_X: 2k-1, 4k-3 or 1", supports=_l_dim_supported,
           reason="unsupported: needs a Riemannian base whose L_X is the kernel of A*_X",
           discrete=True, samples=50)
def _l_dim(s: Sample):
    m, f = s.model, s.frame
    X = s.horizontal()
    Amat = f.vertical_signs[:, None] * (f.vertical @ m.gram @ a_operator(m, s.p)(X) @ f.horizontal.T)
    ker, _ = form_kernel_dimension(Amat.T @ Amat)
    b = m.project(s.p)
    frame = m.base_frame(b)
    base = m.base_model(b, frame)
    lx = base.l_dimension(m.base_coords(b, m.differential(s.p, X), frame))
    expected = m.base_dim - m.fibre_dim
    return abs(ker - expected) + abs(lx - expected)


@_register("fibre_definite", "fibres are negative definite", supports=_riemannian,
           reason=_INDEFINITE, discrete=True)
def _fibre_definite(s: Sample):
    G = s.frame.vertical @ s.model.gram @ s.frame.vertical.T
    bad = int(np.any(np.linalg.eigvalsh(G) >= 0))
    for _ in range(4):
        V = s.vertical(False)
        bad += int(s.g(V, V) >= 0)
    return bad


@_register("fd_a_tensor", "closed-form A agrees with finite differences", samples=50, tol=1e-4)
def _fd_a_tensor(s: Sample):
    m = s.model
    X, Y, V = s.horizontal(), s.horizontal(), s.vertical()
    r1 = np.abs(a_tensor(m, s.p, X, Y) - a_tensor_fd(m, s.p, X, Y)).max()
    r2 = np.abs(a_tensor_adjoint(m, s.p, X, V) - a_tensor_adjoint_fd(m, s.p, X, V)).max()
    return float(max(r1, r2))


@_register("nabla_A_zero", "v (nabla_Z A)_X Y = 0 for horizontal X, Y, Z", samples=50, tol=1e-4)
def _nabla_a_zero(s: Sample):
    X, Y, Z = s.horizontal(), s.horizontal(), s.horizontal()
    return float(np.abs(nabla_a_vertical_fd(s.model, s.p, Z, X, Y)).max())


@_register("tensoriality", "A_X Y depends only on Y at p, not on its extension")
def _tensoriality(s: Sample):
    m = s.model
    X, Y = s.horizontal(), s.horizontal()
    # W is killed by P_H(p), so P_H(q)(Y + W) is another extension of Y
    normal = np.column_stack([s.p[:, None], m.gauge_columns(s.p), s.frame.vertical.T])
    W = normal @ s.rng.normal(size=normal.shape[1])
    G = m.gram
    base = m.vertical_projector(s.p, G) @ m.horizontal_projector_derivative(s.p, X, G)
    return float(np.abs(base @ (Y + W) - a_tensor(m, s.p, X, Y)).max())


@_register("holonomy", "fibre transport of horizontal spaces is an isometry over the base")
def _holonomy(s: Sample):
    m = s.model
    t = s.rng.uniform(0.0, 2.0 * math.pi)
    T = holonomy_transport(m, s.p, t)
    X = s.horizontal()
    square = np.abs(m.differential(T.target.point, T(X)) - m.differential(s.p, X)).max()
    T0 = holonomy_transport(m, s.p, 0.0)
    ident = np.abs(T0.matrix - np.eye(len(T0.matrix))).max()
    return float(max(T.isometry_residual(), square, ident))


def _tangent(s: Sample):
    return s.horizontal(False) + s.vertical(False)


@_register("curvature_symmetries", "algebraic curvature symmetries and first Bianchi")
def _curvature_symmetries(s: Sample):
    m = s.model
    X, Y, Z, W = (_tangent(s) for _ in range(4))
    R = lambda a, b, c, d: m.total_curvature(s.p, a, b, c, d)
    r = R(X, Y, Z, W)
    res = max(abs(r + R(Y, X, Z, W)), abs(r + R(X, Y, W, Z)), abs(r - R(Z, W, X, Y)),
              abs(r + R(Y, Z, X, W) + R(Z, X, Y, W)))
    if m.riemannian_base:
        b = m.project(s.p)
        k = m.base_quartic_function(b)
        d = [m.differential(s.p, v) for v in (X, Y, Z, W)]
        Rb = lambda a, b_, c, e: polarize_quartic(k, a, b_, c, e)
        rb = Rb(*d)
        res = max(res, abs(rb + Rb(d[1], d[0], d[2], d[3])), abs(rb - Rb(d[2], d[3], d[0], d[1])),
                  abs(rb + Rb(d[1], d[2], d[0], d[3]) + Rb(d[2], d[0], d[1], d[3])))
    return res


@_register("intertwiner", "A-actions at two points are intertwined by an isometry",
           supports=_riemannian, reason=_INDEFINITE, samples=20)
def _intertwiner(s: Sample):
    m = s.model
    a1 = action_from_submersion(m, s.p)
    a2 = action_from_submersion(m, m.sample_point(s.rng))
    Q, _ = np.linalg.qr(s.rng.normal(size=(a1.n, a1.n)))
    res = 0.0
    for target in (a2, a1.conjugate(Q)):
        L = find_intertwiner(a1, target, seed=s.rng)
        if isinstance(L, str) and L == INEQUIVALENT:
            return math.inf
        res = max(res, max(float(np.abs(L @ A - B @ L).max())
                           for A, B in zip(a1.generators, target.generators)))
        res = max(res, float(np.abs(L.T @ L - np.eye(a1.n)).max()))
    return res


# --- runner ---------------------------------------------------------------------


@dataclass(frozen=True)
class CheckSpec:
    name: str
    model: SubmersionModel
    samples: int | None = None
    tol: float | None = None
    seed: int = 42

    def __post_init__(self):
        if self.name not in REGISTRY:
            raise ConfigurationError(f"unknown check {self.name!r}; known: {', '.join(REGISTRY)}")
        if self.samples is not None and self.samples < 1:
            raise ConfigurationError("samples must be >= 1")
        if self.tol is not None and not self.tol > 0:
            raise ConfigurationError("tol must be positive")

    @property
    def check(self) -> Check:
        return REGISTRY[self.name]

    @property
    def effective_samples(self) -> int:
        return self.check.samples if self.samples is None else self.samples

    @property
    def effective_tol(self) -> float:
        if self.tol is not None:
            return self.tol
        return self.check.tol if self.check.tol is not None else 1e-8


@dataclass
class CheckRecord:
    name: str
    model: str
    params: dict
    samples: int
    max_residual: float | None
    tol: float
    passed: bool
    paper_anchor: str
    error: str | None = None

    def to_dict(self) -> dict:
        d = {
            "name": self.name, "model": self.model, "params": dict(self.params),
            "samples": self.samples, "max_residual": _json_residual(self.max_residual), "tol": self.tol,
            "pass": self.passed, "paper_anchor": self.paper_anchor,
        }
        if self.error is not None:
            d["error"] = self.error
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CheckRecord":
        return cls(d["name"], d["model"], dict(d["params"]), d["samples"], d["max_residual"],
                   d["tol"], d["pass"], d["paper_anchor"], d.get("error"))


def supported_models(name: str, models=None) -> list:
    models = default_models() if models is None else models
    return [m for m in models if REGISTRY[name].supports(m)]


def _json_residual(r: float):
    return None if r is None or not math.isfinite(r) else float(r)


def run_check(spec: CheckSpec) -> CheckRecord:
    """Run one check; raises :class:`ConfigurationError` on unsupported pairings."""
    chk = spec.check
    model = spec.model
    if not chk.supports(model):
        listing = ", ".join(repr(m) for m in supported_models(spec.name)) or "none"
        raise ConfigurationError(
            f"{chk.unsupported_reason or 'unsupported'}: check {spec.name!r} on {model!r}; "
            f"supported defaults: {listing}"
        )
    rng = np.random.default_rng(spec.seed)
    state: dict = {}
    worst = 0.0
    n = spec.effective_samples
    for _ in range(n):
        p = model.sample_point(rng)
        sample = Sample(model, p, model.split_frame(p), rng)
        r = chk.fn(sample, state) if chk.stateful else chk.fn(sample)
        worst = max(worst, float(r)) if not math.isnan(float(r)) else math.inf
    tol = spec.effective_tol
    passed = worst == 0 if chk.discrete else worst < tol
    return CheckRecord(spec.name, model.label, model.params, n, _json_residual(worst), tol,
                       bool(passed), chk.anchor)


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    seed: int | None = None
    suite: str = "custom"
    version: str = __version__
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite, "version": self.version, "seed": self.seed,
            "wall_time": self.wall_time,
            "checks": [c.to_dict() for c in self.checks], "pass": self.passed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        return cls([CheckRecord.from_dict(c) for c in d["checks"]], d.get("seed"),
                   d.get("suite", "custom"), d.get("version", __version__), d.get("wall_time", 0.0))

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def format_text(self) -> str:
        labels = [c.model + "".join(f" {k}={v}" for k, v in c.params.items()) for c in self.checks]
        w = max([26, *(len(x) + 2 for x in labels)])
        head = f"{'check':<22}{'model':<{w}}{'samples':>8}{'max_residual':>14}{'tol':>10}  result"
        lines = [head, "-" * len(head)]
        for c, label in zip(self.checks, labels):
            res = "error" if c.max_residual is None else f"{c.max_residual:.3e}"
            verdict = "PASS" if c.passed else "FAIL"
            lines.append(f"{c.name:<22}{label:<{w}}{c.samples:>8}{res:>14}{c.tol:>10.1e}  {verdict}")
            if c.error:
                lines.append(f"    {c.error}")
        total = sum(c.passed for c in self.checks)
        lines.append(f"{total}/{len(self.checks)} passed in {self.wall_time:.2f}s")
        return "\n".join(lines)


def run_suite(specs, suite: str = "custom") -> VerificationReport:
    """Run every spec in order; per-entry errors are recorded, never raised."""
    start = time.perf_counter()
    records = []
    seed = None
    for spec in specs:
        seed = spec.seed if seed is None else seed
        try:
            records.append(run_check(spec))
        except Exception as exc:  # recorded per entry by contract
            records.append(CheckRecord(spec.name, spec.model.label, spec.model.params,
                                       spec.effective_samples, None, spec.effective_tol, False,
                                       spec.check.anchor, f"{type(exc).__name__}: {exc}"))
    return VerificationReport(records, seed, suite, __version__, time.perf_counter() - start)


def default_models(k: int = 2) -> list:
    return [ComplexHopf(k), QuaternionicHopf(k), OctonionicHopf(), ComplexToQuaternionic(k),
            ThetaCircle(k, 1)]


def default_suite(samples: int | None = None, tol: float | None = None, seed: int = 42,
                  models=None, checks=None) -> list:
    """Every registered check on every supported model.

    A suite-wide ``tol`` applies to exact identities only; checks carrying
    their own tolerance (finite-difference truncation) keep it.
    """
    models = default_models() if models is None else models
    names = list(REGISTRY) if checks is None else list(checks)
    for name in names:
        if name not in REGISTRY:
            raise ConfigurationError(f"unknown check {name!r}; known: {', '.join(REGISTRY)}")
    return [CheckSpec(name, m, samples, tol if REGISTRY[name].tol is None else None, seed)
            for name in names for m in models if REGISTRY[name].supports(m)]
