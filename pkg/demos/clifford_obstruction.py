"""From a submersion to a Clifford module, and the resulting dimension limits.

The A-tensor of a fibration with s-dimensional fibres makes each horizontal
space a module over Cl_{0,s}. Module dimensions are multiples of the
irreducible dimension, and the volume element splits modules by sign. Those
two facts decide which (s, n, base) triples can occur.

Run: python3 demos/clifford_obstruction.py
"""
import numpy as np

from pseudohyp import (
    CliffordSignature,
    QuaternionicHopf,
    action_from_submersion,
    classify,
    decompose,
    existence_obstruction,
    find_intertwiner,
    irreducible_dimension,
    volume_action,
)


def table():
    print("Cl_{0,s} and its irreducible module dimension")
    for s in range(1, 9):
        sig = CliffordSignature(0, s)
        print(f"  s={s}  {str(classify(sig)):<20} irreducible dim {irreducible_dimension(sig)}")


def module_from_fibration():
    rng = np.random.default_rng(7)
    m = QuaternionicHopf(2)
    a = action_from_submersion(m, m.sample_point(rng))
    print(f"\nQuaternionic Hopf, k=2: Cl_{{0,{a.s}}} acting on R^{a.n}")
    print(f"  volume element {volume_action(a).sign}")
    print(f"  summands {[B.shape[1] for B, _ in decompose(a)]}")

    Q, _ = np.linalg.qr(rng.normal(size=(a.n, a.n)))
    L = find_intertwiner(a, a.conjugate(Q), seed=rng)
    print(f"  conjugated copy: intertwiner found, |L^T L - I| = {np.abs(L.T @ L - np.eye(a.n)).max():.1e}")
    print(f"  flipped generator: {find_intertwiner(a, a.with_negated(2))}")


def verdicts():
    print("\nExistence verdicts")
    queries = [(1, 8, "complex", "real"), (3, 8, "quaternionic", "real"), (7, 8, "real", "real"),
               (7, 16, "cayley", "real"), (2, 4, "any", "real"), (6, 8, "real", "complex")]
    for s, n, base, total in queries:
        v = existence_obstruction(s, n, base, total)
        head = "Admissible" if v.admissible else "Obstructed"
        print(f"  s={s} n={n:<2} base={base:<12} total={total:<7} {head}: {v.reason}")


if __name__ == "__main__":
    table()
    module_from_fibration()
    verdicts()
