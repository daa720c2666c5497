"""Finite-difference connection oracles, independent of the closed-form
projector derivatives.

Extensions are built from :meth:`SubmersionModel.split_frame` at nearby
points (Gram-Schmidt frames from spanning vectors), differentiated along
quadric geodesics with central differences plus one Richardson step.
"""
from __future__ import annotations

import numpy as np

from .submersions import SubmersionModel, a_tensor

FD_STEP = 1e-5


def richardson_derivative(f, h: float = FD_STEP):
    """``f'(0)`` from central differences at ``h`` and ``h/2``; error ``O(h^4)``."""
    d = lambda s: (f(s) - f(-s)) / (2.0 * s)
    return (4.0 * d(h / 2) - d(h)) / 3.0


def _frame_projectors(model: SubmersionModel, q):
    f = model.split_frame(q)
    return f.vertical_projector, f.horizontal_projector


def _along(model: SubmersionModel, p, direction):
    return lambda t: model.geodesic(p, direction, t)


def a_tensor_fd(model: SubmersionModel, p, X, Y, h: float = FD_STEP) -> np.ndarray:
    """``A_X Y`` as the vertical part of the derivative of ``q -> P_H(q) Y``."""
    gamma = _along(model, p, X)
    ext = lambda t: _frame_projectors(model, gamma(t))[1] @ Y
    PV, _ = _frame_projectors(model, p)
    return PV @ richardson_derivative(ext, h)


def a_tensor_adjoint_fd(model: SubmersionModel, p, X, V, h: float = FD_STEP) -> np.ndarray:
    """``A_X V`` as the horizontal part of the derivative of ``q -> P_V(q) V``."""
    gamma = _along(model, p, X)
    ext = lambda t: _frame_projectors(model, gamma(t))[0] @ V
    _, PH = _frame_projectors(model, p)
    return PH @ richardson_derivative(ext, h)


def nabla_a_vertical_fd(model: SubmersionModel, p, Z, X, Y, h: float = FD_STEP) -> np.ndarray:
    """``v (nabla_Z A)_X Y`` by the Leibniz rule with extensions ``P_H(q) X``.

    ``(nabla_Z A)_X Y = nabla_Z (A_X~ Y~) - A_{nabla_Z X~} Y - A_X nabla_Z Y~``.
    Only vertical parts are kept, and the Gauss correction is normal to the
    quadric, so flat derivatives suffice.
    """
    gamma = _along(model, p, Z)

    def field(t):
        q = gamma(t)
        _, PH = _frame_projectors(model, q)
        return a_tensor(model, q, PH @ X, PH @ Y, check=False)

    PV, PH = _frame_projectors(model, p)
    dX = richardson_derivative(lambda t: _frame_projectors(model, gamma(t))[1] @ X, h)
    dY = richardson_derivative(lambda t: _frame_projectors(model, gamma(t))[1] @ Y, h)
    out = PV @ richardson_derivative(field, h)
    out -= a_tensor(model, p, PH @ dX, Y, check=False)
    out -= a_tensor(model, p, X, PH @ dY, check=False)
    return out
