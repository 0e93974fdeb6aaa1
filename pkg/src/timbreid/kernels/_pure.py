"""NumPy implementations of the iterative optimizer kernels.

These are the reference semantics; the compiled module in ``_fast.pyx``
mirrors them loop for loop. Keep the two in sync.
"""

from __future__ import annotations

import numpy as np


def lpc_descent(
    autocorr: np.ndarray, lr: float, max_iters: int, tol: float
) -> tuple[np.ndarray, np.ndarray]:
    """Fixed-step steepest descent on the prediction-residual quadratic.

    ``autocorr`` holds r[0..p]; the objective is E(c) = a.R.a over the
    Toeplitz matrix R[i,j] = r[|i-j|] with a = [1, c1..cp] and c0 pinned
    to 1. The step size is ``lr / r[0]`` (lr normalized by frame power).
    Stops after ``max_iters`` updates or when the relative residual drop
    falls below ``tol``.

    Returns (taps c1..cp, residual history E_0..E_final).
    """
    r = np.asarray(autocorr, dtype=np.float64)
    p = len(r) - 1
    if p < 1:
        raise ValueError("need at least one lag beyond r[0]")
    if r[0] <= 0.0:
        raise ValueError("frame power r[0] must be positive")
    toeplitz = r[np.abs(np.subtract.outer(np.arange(p + 1), np.arange(p + 1)))]
    eta = lr / r[0]

    a = np.zeros(p + 1)
    a[0] = 1.0
    v = toeplitz @ a
    energy = float(a @ v)
    history = [energy]
    for _ in range(max_iters):
        a[1:] -= eta * 2.0 * v[1:]
        v = toeplitz @ a
        new_energy = float(a @ v)
        history.append(new_energy)
        if abs(energy - new_energy) <= tol * energy:
            break
        energy = new_energy
    return a[1:].copy(), np.asarray(history)


def svm_fit(
    X: np.ndarray,
    y: np.ndarray,
    sample_weights: np.ndarray,
    C: float,
    epochs: int,
) -> tuple[np.ndarray, float]:
    """Deterministic full-batch subgradient descent on the weighted hinge SVM.

    Objective: 0.5*||w||^2 + C * sum_j s_j * max(0, 1 - y_j*(w.x_j + b)).
    One epoch is one full-batch subgradient step with step size 1/t;
    the returned parameters average the iterates of the final half of
    the epochs.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    s = np.asarray(sample_weights, dtype=np.float64)
    if epochs < 1:
        raise ValueError(f"epochs must be >= 1, got {epochs}")
    n, dim = X.shape
    w = np.zeros(dim)
    b = 0.0
    w_sum = np.zeros(dim)
    b_sum = 0.0
    averaged = 0
    avg_from = epochs // 2 + 1
    for t in range(1, epochs + 1):
        margins = y * (X @ w + b)
        coef = np.where(margins < 1.0, s * y, 0.0)
        grad_w = w - C * (X.T @ coef)
        grad_b = -C * coef.sum()
        eta = 1.0 / t
        w -= eta * grad_w
        b -= eta * grad_b
        if t >= avg_from:
            w_sum += w
            b_sum += b
            averaged += 1
    return w_sum / averaged, b_sum / averaged
