from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import linalg

from .exceptions import DegenerateOrder


@dataclass(frozen=True, eq=False)
class ContrastTable:
    """values[u, z-1] = p_u(z); each row has squared length q."""
    size: int
    values: np.ndarray

    def __call__(self, degree, level):
        return self.values[degree, np.asarray(level) - 1]

    def gram(self):
        return self.values @ self.values.T


@lru_cache(maxsize=None)
def contrast_table(q):
    q = int(q)
    if q < 2:
        raise DegenerateOrder(f"contrasts need at least 2 levels, got {q}")

    # Orthogonalize 1, z, z^2, ... over the centred levels
    z = np.arange(1, q + 1, dtype=float) - (q + 1) / 2
    basis = np.vander(z, q, increasing=True)
    Q, R = linalg.qr(basis, mode='economic')
    Q = Q * np.sign(np.diag(R))
    values = np.sqrt(q) * Q.T
    values[0] = 1.0
    values.setflags(write=False)
    return ContrastTable(size=q, values=values)


def block_contrast_table(k):
    return contrast_table(k)
