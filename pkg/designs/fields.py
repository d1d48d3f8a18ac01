"""
Finite-field arithmetic GF(m) for the Latin-square constructions.

Elements are indexed 0..m-1. For prime m the index is the residue itself; for
the supported prime powers it is the integer whose base-p digits are the
polynomial coefficients (constant term last), so index 0 is zero and index 1
is the multiplicative identity in every field.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

import galois
import numpy as np

from .exceptions import UnsupportedOrder

logger = logging.getLogger(__name__)

# Fixed moduli keep the prime-power element order (and so the LS tables) stable.
IRREDUCIBLE_POLYNOMIALS = {
    4: "x^2 + x + 1",
    8: "x^3 + x + 1",
    9: "x^2 + 1",
}


@dataclass(frozen=True, eq=False)
class GaloisField:
    order: int
    characteristic: int
    degree: int
    add_table: np.ndarray
    mul_table: np.ndarray
    elements: tuple

    def add(self, i, j):
        return int(self.add_table[i, j])

    def mul(self, i, j):
        return int(self.mul_table[i, j])

    def neg(self, i):
        return int(np.flatnonzero(self.add_table[i] == 0)[0])

    def inv(self, i):
        if i == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return int(np.flatnonzero(self.mul_table[i] == 1)[0])

    def axiom_violations(self):
        """Exhaustively check the field axioms on the tables."""
        m = self.order
        A, M = self.add_table, self.mul_table
        idx = np.arange(m)
        a, b, c = idx[:, None, None], idx[None, :, None], idx[None, None, :]
        problems = []

        if not (np.array_equal(A[0], idx) and np.array_equal(M[1], idx)):
            problems.append("identity")
        if not (np.array_equal(A, A.T) and np.array_equal(M, M.T)):
            problems.append("commutativity")
        if not np.array_equal(A[A[a, b], c], A[a, A[b, c]]):
            problems.append("additive associativity")
        if not np.array_equal(M[M[a, b], c], M[a, M[b, c]]):
            problems.append("multiplicative associativity")
        if not np.array_equal(M[a, A[b, c]], A[M[a, b], M[a, c]]):
            problems.append("distributivity")
        if not all((A[i] == 0).sum() == 1 for i in idx):
            problems.append("additive inverses")
        if not all((M[i] == 1).sum() == 1 for i in idx[1:]):
            problems.append("multiplicative inverses")
        # each row of a multiplication table by a nonzero element is a bijection
        if not all(len(set(M[i])) == m for i in idx[1:]):
            problems.append("multiplication by nonzero element is not bijective")
        return problems


@lru_cache(maxsize=None)
def make_field(m):
    """Build and verify GF(m) for prime m or m in {4, 8, 9}."""
    m = int(m)
    if m >= 2 and galois.is_prime(m):
        GF = galois.GF(m)
    elif m in IRREDUCIBLE_POLYNOMIALS:
        GF = galois.GF(m, irreducible_poly=IRREDUCIBLE_POLYNOMIALS[m])
    else:
        raise UnsupportedOrder(
            f"GF({m}) is not available: order must be a prime or one of "
            f"{sorted(IRREDUCIBLE_POLYNOMIALS)}"
        )

    x = GF.elements
    add_table = np.asarray((x[:, None] + x[None, :]).view(np.ndarray), dtype=np.int64)
    mul_table = np.asarray((x[:, None] * x[None, :]).view(np.ndarray), dtype=np.int64)
    vectors = np.atleast_2d(x.vector().view(np.ndarray))
    if vectors.shape[0] != m:
        vectors = vectors.reshape(m, -1)
    add_table.setflags(write=False)
    mul_table.setflags(write=False)

    field = GaloisField(
        order=m,
        characteristic=int(GF.characteristic),
        degree=int(GF.degree),
        add_table=add_table,
        mul_table=mul_table,
        elements=tuple(tuple(int(c) for c in row) for row in vectors),
    )
    problems = field.axiom_violations()
    if problems:
        raise UnsupportedOrder(f"GF({m}) tables violate: {', '.join(problems)}")
    logger.debug("built GF(%d) = GF(%d^%d)", m, field.characteristic, field.degree)
    return field
