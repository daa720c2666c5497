"""Real Clifford algebras, their modules, and the existence obstructions.

Convention: ``Cl_{p,q}`` has ``p`` generators squaring to ``+1`` and ``q``
squaring to ``-1``.  An A-tensor action of ``s`` timelike unit vertical
vectors is a module over ``Cl_{0,s}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from .spaces import ConfigurationError, _rng

MAX_GENERATORS = 12

# (p - q) mod 8  ->  (field, number of simple summands)
_PERIODICITY = {
    0: ("R", 1),
    1: ("R", 2),
    2: ("R", 1),
    3: ("C", 1),
    4: ("H", 1),
    5: ("H", 2),
    6: ("H", 1),
    7: ("C", 1),
}
FIELD_DIM = {"R": 1, "C": 2, "H": 4}

INEQUIVALENT = "inequivalent"


class SignatureRangeError(ConfigurationError):
    pass


class CliffordRelationError(ValueError):
    """Generators fail the anticommutation relations."""


class StructuralError(ValueError):
    pass


class IntertwinerNumericalError(ArithmeticError):
    """The intertwiner solve was ill-conditioned; says nothing about equivalence."""


@dataclass(frozen=True)
class CliffordSignature:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q > MAX_GENERATORS:
            raise SignatureRangeError(
                f"signature ({self.p}, {self.q}) outside 0 <= p, q and p + q <= {MAX_GENERATORS}"
            )

    @property
    def n(self) -> int:
        return self.p + self.q


@dataclass(frozen=True)
class AlgebraClass:
    field: str
    size: int
    summands: int

    @property
    def real_dim(self) -> int:
        return self.summands * self.size ** 2 * FIELD_DIM[self.field]

    @property
    def simple_factor_dim(self) -> int:
        return self.size ** 2 * FIELD_DIM[self.field]

    def __str__(self):
        one = self.field if self.size == 1 else f"M({self.size},{self.field})"
        return " ⊕ ".join([one] * self.summands)


def classify(sig: CliffordSignature) -> AlgebraClass:
    """Isomorphism class of ``Cl_{p,q}`` from the mod-8 table."""
    field, summands = _PERIODICITY[(sig.p - sig.q) % 8]
    size = math.isqrt(2 ** sig.n // (summands * FIELD_DIM[field]))
    return AlgebraClass(field, size, summands)


def irreducible_dimension(sig: CliffordSignature) -> int:
    """Real dimension of an irreducible ``Cl_{0,q}`` module."""
    if sig.p != 0:
        raise SignatureRangeError("irreducible_dimension expects p = 0")
    cls = classify(sig)
    return cls.size * FIELD_DIM[cls.field]


def _volume_squares_to_one(s: int) -> bool:
    # omega^2 for Cl_{0,s} is (-1)^{s(s-1)/2} (-1)^s
    return (s * (s - 1) // 2 + s) % 2 == 0


def _clifford_residual(gens) -> float:
    n = gens[0].shape[0] if gens else 0
    res = 0.0
    for a, A in enumerate(gens):
        for b in range(a, len(gens)):
            B = gens[b]
            target = -2.0 * np.eye(n) if a == b else 0.0
            res = max(res, float(np.abs(A @ B + B @ A - target).max()))
    return res


@dataclass(frozen=True)
class CliffordAction:
    """Skew generators ``A^{v_a}`` on ``R^n`` with ``A_a A_b + A_b A_a = -2 delta_ab``."""

    generators: tuple

    def __post_init__(self):
        gens = tuple(np.array(g, dtype=float) for g in self.generators)
        if not gens:
            raise StructuralError("an action needs at least one generator")
        n = gens[0].shape[0]
        for g in gens:
            if g.shape != (n, n):
                raise StructuralError(f"generator of shape {g.shape}, expected {(n, n)}")
            g.setflags(write=False)
        skew = max(float(np.abs(g + g.T).max()) for g in gens)
        if skew > 1e-8:
            raise CliffordRelationError(f"generators not skew: residual {skew:.2e}")
        rel = _clifford_residual(gens)
        if rel > 1e-8:
            raise CliffordRelationError(f"Clifford relation residual {rel:.2e}")
        object.__setattr__(self, "generators", gens)

    @property
    def s(self) -> int:
        return len(self.generators)

    @property
    def n(self) -> int:
        return self.generators[0].shape[0]

    @property
    def signature(self) -> CliffordSignature:
        return CliffordSignature(0, self.s)

    def relation_residual(self) -> float:
        return _clifford_residual(self.generators)

    def volume(self) -> np.ndarray:
        out = np.eye(self.n)
        for g in self.generators:
            out = out @ g
        return out

    def conjugate(self, Q) -> "CliffordAction":
        """The action ``Q A_a Q^T`` for orthogonal ``Q``."""
        Q = np.asarray(Q, dtype=float)
        return CliffordAction(tuple(Q @ g @ Q.T for g in self.generators))

    def restrict(self, B) -> "CliffordAction":
        """Restriction to the invariant subspace with orthonormal columns ``B``."""
        B = np.asarray(B, dtype=float)
        return CliffordAction(tuple(B.T @ g @ B for g in self.generators))

    def with_negated(self, a: int) -> "CliffordAction":
        gens = list(self.generators)
        gens[a] = -gens[a]
        return CliffordAction(tuple(gens))

    @classmethod
    def direct_sum(cls, *actions) -> "CliffordAction":
        s = actions[0].s
        if any(a.s != s for a in actions):
            raise StructuralError("direct sum of actions with different generator counts")
        gens = []
        for i in range(s):
            blocks = [a.generators[i] for a in actions]
            n = sum(b.shape[0] for b in blocks)
            M = np.zeros((n, n))
            k = 0
            for b in blocks:
                m = b.shape[0]
                M[k:k + m, k:k + m] = b
                k += m
            gens.append(M)
        return cls(tuple(gens))


def action_from_submersion(model, p, orient: bool = True) -> CliffordAction:
    """The maps ``X -> A_X v_a`` over the timelike vertical frame at ``p``.

    With ``orient`` and three generators, the last generator is negated if
    needed so that the volume element acts as ``+Id``.
    """
    from .submersions import base_structures

    if not model.riemannian_base:
        raise ConfigurationError(f"{model!r} has an indefinite horizontal space")
    frame = model.split_frame(p)
    action = CliffordAction(tuple(base_structures(model, p, frame)))
    if orient and action.s == 3:
        if volume_action(action).sign == "-Id":
            action = action.with_negated(2)
    return action


@dataclass(frozen=True)
class VolumeResult:
    sign: str                 # "+Id", "-Id" or "other"
    residual: float           # distance to the matched +-Id (or to the nearer one)
    plus_dim: int
    minus_dim: int

    @property
    def value(self) -> int:
        return {"+Id": 1, "-Id": -1}.get(self.sign, 0)


def volume_action(action: CliffordAction, tol: float = 1e-8) -> VolumeResult:
    """Compare ``A^{v_1} ... A^{v_s}`` with ``+-Id``."""
    if action.s % 2 == 0:
        raise ConfigurationError(f"volume element of {action.s} generators is not central")
    W = action.volume()
    eye = np.eye(action.n)
    rp = float(np.abs(W - eye).max())
    rm = float(np.abs(W + eye).max())
    if _volume_squares_to_one(action.s):
        ev = np.linalg.eigvalsh(0.5 * (W + W.T))
        plus, minus = int(np.sum(ev > 0)), int(np.sum(ev < 0))
    else:
        plus = minus = 0
    if rp < tol:
        return VolumeResult("+Id", rp, plus, minus)
    if rm < tol:
        return VolumeResult("-Id", rm, plus, minus)
    return VolumeResult("other", min(rp, rm), plus, minus)


def _commutant_basis(gens) -> np.ndarray:
    """Basis of ``{X : X A = A X for all generators}`` as ``(k, n, n)``."""
    n = gens[0].shape[0]
    eye = np.eye(n)
    # row-major vec: vec(X A) = (I kron A^T) vec X, vec(A X) = (A kron I) vec X
    system = np.vstack([np.kron(eye, A.T) - np.kron(A, eye) for A in gens])
    K = null_space(system, rcond=1e-10)
    return K.T.reshape(-1, n, n)


def _isotypic_parts(action: CliffordAction):
    """Orthonormal bases of the volume eigenspaces (or the whole space)."""
    n = action.n
    if action.s % 2 == 1 and _volume_squares_to_one(action.s):
        W = action.volume()
        ev, vecs = np.linalg.eigh(0.5 * (W + W.T))
        parts = [vecs[:, ev > 0], vecs[:, ev < 0]]
        return [(B, sign) for B, sign in zip(parts, (1, -1)) if B.shape[1]]
    return [(np.eye(n), 0)]


def decompose(action: CliffordAction, seed=0, max_tries: int = 8):
    """Split ``R^n`` into pairwise orthogonal irreducible invariant subspaces.

    Returns a list of ``(basis, volume_sign)`` with ``basis`` of shape
    ``(n, d)`` having orthonormal columns.  Within each volume eigenspace a
    random symmetric element of the commutant is diagonalised; its
    eigenspaces are invariant and, generically, irreducible.
    """
    d = irreducible_dimension(action.signature)
    if action.n % d:
        raise StructuralError(f"dimension {action.n} is not a multiple of {d}")
    rng = _rng(seed)
    out = []
    for B, sign in _isotypic_parts(action):
        m = B.shape[1]
        if m == d:
            out.append((B, sign))
            continue
        local = [B.T @ g @ B for g in action.generators]
        K = _commutant_basis(local)
        for _ in range(max_tries):
            C = np.einsum("k,kij->ij", rng.normal(size=K.shape[0]), K)
            ev, vecs = np.linalg.eigh(C + C.T)
            groups, start = [], 0
            for i in range(1, m + 1):
                if i == m or ev[i] - ev[i - 1] > 1e-6 * max(1.0, abs(ev).max()):
                    groups.append(vecs[:, start:i])
                    start = i
            if all(g.shape[1] == d for g in groups):
                out.extend((B @ g, sign) for g in groups)
                break
        else:
            raise StructuralError("could not separate irreducible summands")
    return out


def _solve_irreducible_intertwiner(g1, g2, tol: float) -> np.ndarray:
    d = g1[0].shape[0]
    eye = np.eye(d)
    # L g1 = g2 L  <=>  (g2 kron I - I kron g1^T) vec L = 0
    system = np.vstack([np.kron(B, eye) - np.kron(eye, A.T) for A, B in zip(g1, g2)])
    _, sv, Vt = np.linalg.svd(system)
    if sv[-1] > tol * max(1.0, sv[0]) or (len(sv) > 1 and sv[0] < 1e-12):
        raise IntertwinerNumericalError(f"no clean null vector: smallest singular value {sv[-1]:.2e}")
    L = Vt[-1].reshape(d, d)
    c = float(np.trace(L.T @ L)) / d
    if c < 1e-12:
        raise IntertwinerNumericalError("intertwiner collapsed to zero")
    L /= math.sqrt(c)
    if np.abs(L.T @ L - eye).max() > 1e-6:
        raise IntertwinerNumericalError("summand intertwiner is not a similitude")
    return L


def find_intertwiner(action1: CliffordAction, action2: CliffordAction, seed=0,
                     tol: float = 1e-8):
    """Orthogonal ``L`` with ``L A1_a = A2_a L``, or :data:`INEQUIVALENT`."""
    if action1.s != action2.s or action1.n != action2.n:
        raise ConfigurationError(
            f"actions of shape (s={action1.s}, n={action1.n}) and (s={action2.s}, n={action2.n})"
        )
    parts1 = decompose(action1, seed)
    parts2 = decompose(action2, seed)
    count = lambda parts, sign: sum(1 for _, s in parts if s == sign)
    signs = sorted({s for _, s in parts1} | {s for _, s in parts2})
    if any(count(parts1, s) != count(parts2, s) for s in signs):
        return INEQUIVALENT
    n = action1.n
    L = np.zeros((n, n))
    for sign in signs:
        src = [B for B, s in parts1 if s == sign]
        dst = [B for B, s in parts2 if s == sign]
        for B1, B2 in zip(src, dst):
            g1 = [B1.T @ g @ B1 for g in action1.generators]
            g2 = [B2.T @ g @ B2 for g in action2.generators]
            L += B2 @ _solve_irreducible_intertwiner(g1, g2, 1e-6) @ B1.T
    res = max(float(np.abs(L @ A - B @ L).max())
              for A, B in zip(action1.generators, action2.generators))
    res = max(res, float(np.abs(L.T @ L - np.eye(n)).max()))
    if res > tol:
        raise IntertwinerNumericalError(f"assembled intertwiner residual {res:.2e}")
    return L


# --- existence obstructions ------------------------------------------------------

BASE_KINDS = ("real", "complex", "quaternionic", "cayley", "any")
TOTAL_KINDS = ("real", "complex")
ADAMS = (1, 3, 7)


@dataclass(frozen=True)
class Verdict:
    admissible: bool
    reason: str

    def __str__(self):
        return "Admissible" if self.admissible else f"Obstructed: {self.reason}"


def _base_dimension_rule(s: int, n: int, base: str):
    """Base dimension versus fibre dimension, from the kernel-dimension count."""
    if base == "real":
        if n == s + 1:
            return None
        return f"a real hyperbolic base has dim L = 1, so n = s + 1 = {s + 1}, got {n}"
    if base == "complex":
        if s == 1 and n % 2 == 0 and n >= 2:
            return None
        return f"a complex hyperbolic base has dim L = n - 1, so s = 1 and n even; got s={s}, n={n}"
    if base == "quaternionic":
        if s == 3 and n % 4 == 0 and n >= 4:
            return None
        return f"a quaternionic hyperbolic base has dim L = n - 3, so s = 3 and 4 | n; got s={s}, n={n}"
    if base == "cayley":
        if s == 7 and n == 16:
            return None
        return f"the Cayley plane has n = 16 and dim L = n - 7, so s = 7; got s={s}, n={n}"
    raise ConfigurationError(f"unknown base kind {base!r}; known: {', '.join(BASE_KINDS)}")


def _real_verdict(s: int, n: int, base: str) -> Verdict:
    if s not in ADAMS:
        return Verdict(False, "Adams: s ∈ {1,3,7} (S^s must be parallelizable)")
    reason = _base_dimension_rule(s, n, base)
    if reason:
        return Verdict(False, reason)
    d = irreducible_dimension(CliffordSignature(0, s))
    if n % d:
        return Verdict(False, f"irreducible Cl(0,{s}) modules have dim {d}, which does not divide n = {n}")
    if base == "cayley":
        return Verdict(
            False,
            f"Cl(V) simple submodules are {d}-dim, so H (dim {n}) splits into them while "
            "dim V ≥ 4 forces H simple; we get a contradiction",
        )
    return Verdict(True, f"Cl(0,{s}) module of dim {n} over a {base} base")


def _complex_verdict(s: int, n: int, base: str) -> Verdict:
    composite = s + 1
    v = _real_verdict(composite, n, base)
    if not v.admissible:
        return Verdict(False, f"composite with the circle quotient has fibre dim {composite}: {v.reason}")
    if composite == 7:
        cl = classify(CliffordSignature(1, 8))
        target = AlgebraClass("C", 8, 1)
        return Verdict(
            False,
            f"Cl(R^9_1) ≅ {cl} must map unitally into End(C^8) ≅ {target}, but each simple factor "
            f"has real dim {cl.simple_factor_dim} > {target.real_dim}; such a homomorphism is "
            "impossible to exist",
        )
    return Verdict(True, f"complex fibres of dim {s} over a {base} base (composite fibre dim {composite})")


def existence_obstruction(s: int, n: int, base: str = "any", total: str = "real") -> Verdict:
    """Decide whether a submersion with totally geodesic fibres can exist.

    ``s`` is the real fibre dimension and ``n`` the base dimension.  With
    ``total="complex"`` the total space is a complex pseudo-hyperbolic space
    and the question is reduced to its composite with the circle quotient.
    ``base="any"`` is admissible when some concrete base kind is.
    """
    if total not in TOTAL_KINDS:
        raise ConfigurationError(f"unknown total kind {total!r}; known: {', '.join(TOTAL_KINDS)}")
    if base not in BASE_KINDS:
        raise ConfigurationError(f"unknown base kind {base!r}; known: {', '.join(BASE_KINDS)}")
    if s < 1 or n < 1:
        return Verdict(False, "fibre and base dimensions must be positive")
    rule = _real_verdict if total == "real" else _complex_verdict
    if base != "any":
        return rule(s, n, base)
    verdicts = [rule(s, n, b) for b in BASE_KINDS[:-1]]
    for v in verdicts:
        if v.admissible:
            return v
    # report the most structural reason available
    for key in ("Adams", "contradiction", "impossible"):
        for v in verdicts:
            if key in v.reason:
                return v
    return verdicts[0]
