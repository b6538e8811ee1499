"""Pure-numpy fallback for the Monte Carlo counting kernel.

The accumulation below is a deliberate ordered loop over the inner
dimension (not a BLAS matmul): the compiled kernel performs the identical
sequence of IEEE multiply/add operations, so both backends return
bit-identical counts for the same sample array.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def count_nonnegative(points: np.ndarray, facet_coords: np.ndarray,
                      eps: float) -> int:
    """Number of rows of ``points`` whose inner product with every row of
    ``facet_coords`` is >= -eps."""
    m, d = points.shape
    k, d2 = facet_coords.shape
    if d2 != d:
        raise ValueError("points and facet_coords disagree on dimension")
    ok = np.ones(m, dtype=bool)
    for j in range(k):
        acc = np.zeros(m)
        for i in range(d):
            acc += points[:, i] * facet_coords[j, i]
        ok &= acc >= -eps
    return int(np.count_nonzero(ok))
