"""Walk through the three Hopf-type submersions at one sampled point.

For each model: split the tangent space, measure the fibre metric, check
that the differential is a horizontal isometry, and compute the A-tensor
invariants |A_X U|^2 = -g(X,X) g(U,U) and dim ker A*_X.

Run: python3 demos/hopf_tour.py
"""
import numpy as np

from pseudohyp import ComplexHopf, OctonionicHopf, QuaternionicHopf, a_tensor_adjoint, t_tensor
from pseudohyp.clifford import action_from_submersion, volume_action
from pseudohyp.submersions import a_operator, sample_tangent


def tour(model, rng):
    p = model.sample_point(rng)
    f = model.split_frame(p)
    g = model.ambient.inner
    print(f"\n{model.label}  {model.params}")
    print(f"  ambient dim {p.size}, vertical {f.vertical.shape[0]}, horizontal {f.horizontal.shape[0]}")

    U = sample_tangent(model, f, rng, "vertical")
    X = sample_tangent(model, f, rng)
    print(f"  g(U,U) = {g(U, U):+.3f}   (fibres are negative definite)")
    print(f"  g(X,X) = {g(X, X):+.3f}")

    Y = sample_tangent(model, f, rng)
    dX, dY = model.differential(p, X), model.differential(p, Y)
    print(f"  |g_B(dX,dY) - g(X,Y)| = {abs(model.base_inner(dX, dY) - g(X, Y)):.1e}")
    print(f"  |dU| = {np.linalg.norm(model.differential(p, U)):.1e}")

    A = a_tensor_adjoint(model, p, X, U)
    print(f"  g(A_X U, A_X U) + g(X,X)g(U,U) = {g(A, A) + g(X, X) * g(U, U):.1e}")
    # A*_X sends Y to A_X Y; its kernel in the horizontal space
    M = a_operator(model, p)(X) @ f.horizontal.T
    print(f"  dim ker A*_X = {M.shape[1] - np.linalg.matrix_rank(M, tol=1e-8)}")
    if f.vertical.shape[0] == 3:
        print(f"  volume element: {volume_action(action_from_submersion(model, p)).sign}")
    print(f"  |T_U V| = {np.abs(t_tensor(model, p, U, sample_tangent(model, f, rng, 'vertical'))).max():.1e}")


def main():
    rng = np.random.default_rng(2024)
    for model in (ComplexHopf(2), QuaternionicHopf(2), OctonionicHopf()):
        tour(model, rng)


if __name__ == "__main__":
    main()
