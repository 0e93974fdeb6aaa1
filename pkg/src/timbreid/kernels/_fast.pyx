# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled twins of the optimizer kernels.

Semantics match ``_pure`` loop for loop; that module carries the
reference documentation. Keep the two in sync.
"""

import numpy as np

from libc.math cimport fabs


def lpc_descent(autocorr, double lr, long max_iters, double tol):
    r_arr = np.ascontiguousarray(autocorr, dtype=np.float64)
    cdef double[::1] r = r_arr
    cdef Py_ssize_t p = r.shape[0] - 1
    if p < 1:
        raise ValueError("need at least one lag beyond r[0]")
    if r[0] <= 0.0:
        raise ValueError("frame power r[0] must be positive")
    if max_iters < 0:
        raise ValueError("max_iters must be >= 0")
    cdef double eta = lr / r[0]

    a_arr = np.zeros(p + 1)
    v_arr = np.zeros(p + 1)
    hist_arr = np.empty(max_iters + 1)
    cdef double[::1] a = a_arr
    cdef double[::1] v = v_arr
    cdef double[::1] hist = hist_arr
    cdef Py_ssize_t i, j
    cdef long it
    cdef Py_ssize_t used = 1
    cdef double acc, energy, new_energy

    a[0] = 1.0
    for i in range(p + 1):
        acc = 0.0
        for j in range(p + 1):
            acc += r[i - j if i >= j else j - i] * a[j]
        v[i] = acc
    energy = 0.0
    for i in range(p + 1):
        energy += a[i] * v[i]
    hist[0] = energy

    for it in range(max_iters):
        for i in range(1, p + 1):
            a[i] -= eta * 2.0 * v[i]
        for i in range(p + 1):
            acc = 0.0
            for j in range(p + 1):
                acc += r[i - j if i >= j else j - i] * a[j]
            v[i] = acc
        new_energy = 0.0
        for i in range(p + 1):
            new_energy += a[i] * v[i]
        hist[used] = new_energy
        used += 1
        if fabs(energy - new_energy) <= tol * energy:
            break
        energy = new_energy
    return a_arr[1:].copy(), hist_arr[:used].copy()


def svm_fit(X, y, sample_weights, double C, long epochs):
    X_arr = np.ascontiguousarray(X, dtype=np.float64)
    y_arr = np.ascontiguousarray(y, dtype=np.float64)
    s_arr = np.ascontiguousarray(sample_weights, dtype=np.float64)
    if epochs < 1:
        raise ValueError(f"epochs must be >= 1, got {epochs}")
    cdef double[:, ::1] Xv = X_arr
    cdef double[::1] yv = y_arr
    cdef double[::1] sv = s_arr
    cdef Py_ssize_t n = Xv.shape[0]
    cdef Py_ssize_t dim = Xv.shape[1]

    w_arr = np.zeros(dim)
    w_sum_arr = np.zeros(dim)
    grad_arr = np.zeros(dim)
    coef_arr = np.zeros(n)
    cdef double[::1] w = w_arr
    cdef double[::1] w_sum = w_sum_arr
    cdef double[::1] grad = grad_arr
    cdef double[::1] coef = coef_arr
    cdef double b = 0.0, b_sum = 0.0
    cdef double eta, d, coef_sum
    cdef long averaged = 0, t
    cdef long avg_from = epochs // 2 + 1
    cdef Py_ssize_t i, k

    for t in range(1, epochs + 1):
        coef_sum = 0.0
        for i in range(n):
            d = b
            for k in range(dim):
                d += Xv[i, k] * w[k]
            if yv[i] * d < 1.0:
                coef[i] = sv[i] * yv[i]
            else:
                coef[i] = 0.0
            coef_sum += coef[i]
        eta = 1.0 / t
        for k in range(dim):
            grad[k] = 0.0
        for i in range(n):
            d = coef[i]
            if d != 0.0:
                for k in range(dim):
                    grad[k] += Xv[i, k] * d
        for k in range(dim):
            w[k] -= eta * (w[k] - C * grad[k])
        b -= eta * (-C * coef_sum)
        if t >= avg_from:
            for k in range(dim):
                w_sum[k] += w[k]
            b_sum += b
            averaged += 1
    return w_sum_arr / averaged, b_sum / averaged
