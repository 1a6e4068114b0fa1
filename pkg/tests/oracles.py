"""Reference values computed independently of the package.

``SIGMA_STAR`` and ``B_MIN_TWO`` were computed with mpmath at 40 digits and
frozen here; :func:`bisect_sigma_star` is a plain-float cross-check.
"""

import math

# root of 2^-x + 3^-x = 1
SIGMA_STAR = 0.7878849110258697836
# minimum over sigma of 2^sigma + (2/3)^sigma - 1 and where it occurs
B_MIN_TWO = 0.93181310646687545
B_ARGMIN_TWO = -0.48808
# height of the first zero of 1 + 2^-s above the real axis
PI_OVER_LN2 = 4.532360141827193810
# 1 - 1/4 - 1/9
INF_MOD_ZETA3_AT_2 = 23.0 / 36.0


def bisect_sigma_star(tol: float = 1e-15) -> float:
    lo, hi = 0.0, 2.0  # g(lo) = 1 > 0, g(hi) < 0
    g = lambda x: 2.0 ** -x + 3.0 ** -x - 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def brute_polygon_min(m, n=2000):
    """min over a phase grid of |m0 + m1 e^{i a} + m2 e^{i b}| (single precision)."""
    import numpy as np

    e = np.exp(1j * np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)).astype(np.complex64)
    row = np.complex64(m[0]) + np.float32(m[1]) * e
    return float(np.abs(row[:, None] + np.float32(m[2]) * e[None, :]).min())
