"""Pure-numpy update kernel, the fallback when the compiled extension is absent.

Must stay semantically identical to _kernels.pyx.
"""

import numpy as np


def penalized_rank_two_update(h, s, y, gamma, omega):
    """H - omega*(s(Hy)^T + (Hy)s^T) + gamma*(1 + omega*y.Hy) ss^T, exactly symmetric."""
    hy = h @ y
    yhy = float(y @ hy)
    coef = gamma * (1.0 + omega * yhy)
    out = h - omega * (np.outer(s, hy) + np.outer(hy, s)) + coef * np.outer(s, s)
    # outer-product sums are elementwise symmetric, so this is a bitwise no-op
    # unless h itself was slightly asymmetric
    return 0.5 * (out + out.T)
