"""
Latin squares and component orthogonal arrays over GF(m).

The base squares L_1..L_{m-1} have (i, j) entry alpha_i + alpha_r * alpha_j (plus
one, so levels run 1..m). The full ordered set of (m-1)! squares permutes
columns 3..m of every base square in lexicographic order, and each consecutive
group of m-1 squares stacks into a COA.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from .exceptions import DegenerateOrder
from .fields import make_field

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LatinSquare:
    m: int
    cells: np.ndarray
    index: int

    def is_latin(self):
        levels = np.arange(1, self.m + 1)
        rows_ok = all(np.array_equal(np.sort(row), levels) for row in self.cells)
        cols_ok = all(np.array_equal(np.sort(col), levels) for col in self.cells.T)
        return rows_ok and cols_ok

    def __eq__(self, other):
        return isinstance(other, LatinSquare) and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash(self.cells.tobytes())

    def __repr__(self):
        return f"LatinSquare(m={self.m}, index={self.index})"


@dataclass(frozen=True, eq=False)
class ComponentOrthogonalArray:
    m: int
    rows: np.ndarray
    index: int

    def has_pair_coverage(self):
        m = self.m
        if self.rows.shape != (m * (m - 1), m):
            return False
        expected = {(a, b) for a in range(1, m + 1) for b in range(1, m + 1) if a != b}
        for i, j in permutations(range(m), 2):
            pairs = list(zip(self.rows[:, i].tolist(), self.rows[:, j].tolist()))
            if len(pairs) != len(set(pairs)) or set(pairs) != expected:
                return False
        return True

    def __repr__(self):
        return f"ComponentOrthogonalArray(m={self.m}, index={self.index})"


def are_orthogonal(first, second):
    """Superimposing the squares gives every ordered pair exactly once."""
    pairs = set(zip(first.cells.ravel().tolist(), second.cells.ravel().tolist()))
    return len(pairs) == first.m * second.m


def _check_order(field):
    if field.order <= 3:
        raise DegenerateOrder(f"MOLS construction needs m > 3, got m={field.order}")


def base_mols(field):
    _check_order(field)
    m = field.order
    idx = np.arange(m)
    squares = []
    for r in range(1, m):
        cells = field.add_table[idx[:, None], field.mul_table[r][idx][None, :]] + 1
        cells.setflags(write=False)
        squares.append(LatinSquare(m=m, cells=cells, index=r))
    return squares


def full_ls_set(field):
    base = base_mols(field)
    m = field.order
    squares = []
    for g, tail in enumerate(permutations(range(2, m))):
        order = [0, 1, *tail]
        for f, square in enumerate(base, start=1):
            cells = np.ascontiguousarray(square.cells[:, order])
            cells.setflags(write=False)
            squares.append(LatinSquare(m=m, cells=cells, index=g * (m - 1) + f))
    logger.debug("generated %d Latin squares for m=%d", len(squares), m)
    return squares


def coa_set(ls_set):
    if not ls_set:
        return []
    m = ls_set[0].m
    group = m - 1
    arrays = []
    for g in range(len(ls_set) // group):
        rows = np.vstack([sq.cells for sq in ls_set[g * group:(g + 1) * group]])
        rows.setflags(write=False)
        arrays.append(ComponentOrthogonalArray(m=m, rows=rows, index=g + 1))
    return arrays


@lru_cache(maxsize=None)
def latin_squares(m):
    """Cached full LS set for order m."""
    return tuple(full_ls_set(make_field(m)))


@lru_cache(maxsize=None)
def component_arrays(m):
    return tuple(coa_set(latin_squares(m)))


def mutually_orthogonal(squares):
    return all(are_orthogonal(a, b) for a, b in combinations(squares, 2))
