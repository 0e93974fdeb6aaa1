"""Compare the pure-NumPy and compiled kernel backends.

Times the two hot loops on workloads shaped like real pipeline calls:
the LPC descent at its default 500 iterations over an order-12
autocorrelation, and the pairwise SVM trainer on a two-class slice of a
six-class corpus. Run as a script:

    python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import time

import numpy as np

from timbreid.kernels import _pure

try:
    from timbreid.kernels import _fast
except ImportError:
    _fast = None


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def lpc_workload():
    """Autocorrelation of a harmonic 100 ms frame at 16 kHz."""
    rng = np.random.default_rng(0)
    t = np.arange(1600) / 16000.0
    x = sum(np.sin(2 * np.pi * 220.0 * h * t) / h for h in range(1, 8))
    x += 0.01 * rng.standard_normal(1600)
    return np.array([x[: 1600 - k] @ x[k:] for k in range(13)]) / 1600


def svm_workload():
    """Two well-separated 32-dim classes, 360 samples, standardized."""
    rng = np.random.default_rng(1)
    a = rng.standard_normal((180, 32)) + 1.5
    b = rng.standard_normal((180, 32)) - 1.5
    X = np.vstack([a, b])
    X = (X - X.mean(axis=0)) / X.std(axis=0)
    y = np.concatenate([np.ones(180), -np.ones(180)])
    s = np.full(360, 1.0 / 180.0)
    return X, y, s


def main() -> None:
    r = lpc_workload()
    X, y, s = svm_workload()
    cases = [
        ("lpc_descent (p=12, 500 iters)",
         lambda m: m.lpc_descent(r, 0.06, 500, 1e-9), 20),
        ("svm_fit (360x32, 400 epochs)",
         lambda m: m.svm_fit(X, y, s, 10.0, 400), 5),
    ]

    print(f"{'kernel':38s} {'pure':>10s} {'compiled':>10s} {'speedup':>8s}")
    for name, call, repeats in cases:
        t_pure = _time(lambda: call(_pure), repeats)
        if _fast is None:
            print(f"{name:38s} {t_pure * 1e3:9.2f}ms {'n/a':>10s} {'n/a':>8s}")
            continue
        t_fast = _time(lambda: call(_fast), repeats)
        print(f"{name:38s} {t_pure * 1e3:9.2f}ms {t_fast * 1e3:9.2f}ms "
              f"{t_pure / t_fast:7.1f}x")

    if _fast is None:
        print("\ncompiled backend not built; "
              "run `pip install -e . --no-build-isolation` to build it")
    else:
        taps_p, _ = _pure.lpc_descent(r, 0.06, 500, 1e-9)
        taps_f, _ = _fast.lpc_descent(r, 0.06, 500, 1e-9)
        wp, bp = _pure.svm_fit(X, y, s, 10.0, 400)
        wf, bf = _fast.svm_fit(X, y, s, 10.0, 400)
        drift = max(np.abs(taps_p - taps_f).max(),
                    np.abs(wp - wf).max(), abs(bp - bf))
        print(f"\ncross-backend max drift: {drift:.2e}")


if __name__ == "__main__":
    main()
