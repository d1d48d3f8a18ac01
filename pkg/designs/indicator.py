"""
Indicator-function spectra and word-length patterns.

A coefficient index t' = (t_1, ..., t_m, s) is stored flat: the position digits
form a radix-m number with t_1 most significant, and s selects the column of
the (m^m, k) coefficient array. Unblocked designs use a single column.
"""
import enum
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import pandas as pd

from .contrasts import block_contrast_table, contrast_table
from .exceptions import EmptyDesign, InvalidPoint, ShapeMismatch, SizeLimit

logger = logging.getLogger(__name__)

DENSE_LIMIT = 7
STREAMING_LIMIT = 9
WORD_TOLERANCE = 1e-9
COMPARE_TOLERANCE = 1e-9

# upper bound on floats held by one chunk of per-row term vectors
_CHUNK_FLOATS = 1 << 22


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _block_values(k):
    if k < 2:
        return np.ones((1, 1))
    return block_contrast_table(k).values


@lru_cache(maxsize=None)
def position_degrees(m):
    """||t|| for every flat position index."""
    degrees = np.zeros(1, dtype=np.int64)
    for _ in range(m):
        degrees = (degrees[:, None] + np.arange(m)[None, :]).ravel()
    degrees.setflags(write=False)
    return degrees


def term_vectors(rows, m):
    """X_t(z) for every t, one row of length m^m per design row."""
    P = contrast_table(m).values
    rows = np.asarray(rows, dtype=np.int64)
    terms = P[:, rows[:, 0] - 1].T
    for j in range(1, m):
        terms = (terms[:, :, None] * P[:, rows[:, j] - 1].T[:, None, :]).reshape(len(rows), -1)
    return terms


def _contributions(rows, blocks, m, k):
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, m)
    blocks = np.asarray(blocks, dtype=np.int64)
    C = _block_values(k)
    total = np.zeros((m ** m, C.shape[0]))
    chunk = max(1, _CHUNK_FLOATS // m ** m)
    for start in range(0, len(rows), chunk):
        stop = start + chunk
        terms = term_vectors(rows[start:stop], m)
        total += terms.T @ C[:, blocks[start:stop] - 1].T
    return total / (max(k, 1) * m ** m)


@dataclass(frozen=True, eq=False)
class IndicatorSpectrum:
    m: int
    k: int
    n: int
    coefficients: np.ndarray
    blocked: bool = False

    @property
    def a0(self):
        return float(self.coefficients[0, 0])

    def digits(self, flat):
        digits = []
        for _ in range(self.m):
            flat, digit = divmod(flat, self.m)
            digits.append(digit)
        return tuple(reversed(digits))

    def flat_index(self, t):
        flat = 0
        for digit in t[:self.m]:
            flat = flat * self.m + int(digit)
        return flat

    def coefficient(self, t):
        """a_t for t = (t_1..t_m) or t' = (t_1..t_m, s)."""
        s = int(t[self.m]) if len(t) > self.m else 0
        return float(self.coefficients[self.flat_index(t), s])

    def is_word(self, value):
        return abs(value) > WORD_TOLERANCE * abs(self.a0)

    def words(self):
        """Yield (t', a, (a/a0)^2) for every coefficient counted as a word."""
        a0 = self.a0
        if a0 == 0:
            return
        mask = self.is_word(self.coefficients)
        for flat, s in zip(*np.nonzero(mask)):
            t = self.digits(int(flat))
            if self.blocked:
                t = t + (int(s),)
            value = float(self.coefficients[flat, s])
            yield t, value, (value / a0) ** 2


@dataclass(frozen=True, eq=False)
class WordLengthPattern:
    pure: np.ndarray
    mixed: np.ndarray = None

    @property
    def blocked(self):
        return self.mixed is not None

    def interleaved(self):
        if self.mixed is None:
            return np.asarray(self.pure)
        return np.column_stack([self.pure, self.mixed]).ravel()

    def entry(self, length, kind='P'):
        vector = self.pure if kind == 'P' else self.mixed
        return float(vector[length - 1])

    def as_dict(self):
        data = {'pure': [float(v) for v in self.pure]}
        if self.mixed is not None:
            data['mixed'] = [float(v) for v in self.mixed]
        return data

    @classmethod
    def from_dict(cls, data):
        mixed = data.get('mixed')
        return cls(pure=np.asarray(data['pure'], dtype=float),
                   mixed=np.asarray(mixed, dtype=float) if mixed is not None else None)

    def to_frame(self):
        frame = pd.DataFrame({'length': np.arange(1, len(self.pure) + 1), 'pure': self.pure})
        if self.mixed is not None:
            frame['mixed'] = self.mixed
        return frame

    def __lt__(self, other):
        return compare(self, other) is Ordering.LESS

    def __repr__(self):
        values = ', '.join(f"{v:.4g}" for v in self.interleaved())
        return f"WordLengthPattern({values})"


def _check_size(m, limit):
    if m > limit:
        raise SizeLimit(f"m={m} exceeds the supported limit of {limit} for this computation")


def spectrum(design):
    m = design.m
    _check_size(m, DENSE_LIMIT)
    coefficients = _contributions(design.rows, design.blocks, m, design.k)
    coefficients.setflags(write=False)
    return IndicatorSpectrum(m=m, k=design.k, n=design.n, coefficients=coefficients, blocked=design.blocked)


def delta_spectrum(spec, removed_rows, added_rows):
    """Spectrum after removing and adding rows; blocked rows carry the label last."""
    m, k = spec.m, spec.k
    width = m + 1 if spec.blocked else m

    def split(rows):
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, width)
        blocks = rows[:, m] if spec.blocked else np.ones(len(rows), dtype=np.int64)
        return rows[:, :m], blocks

    removed, removed_blocks = split(removed_rows)
    added, added_blocks = split(added_rows)
    coefficients = (
        spec.coefficients
        + _contributions(added, added_blocks, m, k)
        - _contributions(removed, removed_blocks, m, k)
    )
    coefficients.setflags(write=False)
    return IndicatorSpectrum(
        m=m, k=k, n=spec.n + len(added) - len(removed), coefficients=coefficients, blocked=spec.blocked,
    )


def _check_point(point, m, k, blocked):
    point = tuple(int(v) for v in point)
    if len(point) != (m + 1 if blocked else m):
        raise InvalidPoint(f"point {point} does not have {m + 1 if blocked else m} entries")
    if sorted(point[:m]) != list(range(1, m + 1)):
        raise InvalidPoint(f"{point[:m]} is not a permutation of 1..{m}")
    if blocked and not 1 <= point[m] <= k:
        raise InvalidPoint(f"block label {point[m]} outside 1..{k}")
    return point


def evaluate(spec, point):
    """F(z'): the replicate count of the point in the design."""
    point = _check_point(point, spec.m, spec.k, spec.blocked)
    terms = term_vectors([point[:spec.m]], spec.m)[0]
    b = point[spec.m] if spec.blocked else 1
    return float(terms @ spec.coefficients @ _block_values(spec.k)[:, b - 1])


def single_term(point, t, k=None):
    """
    X_t'(z') for one point. The point is blocked exactly when k is given, in
    which case its last entry is the block label.
    """
    point = tuple(int(v) for v in point)
    t = tuple(int(v) for v in t)
    if len(t) != len(point) or not point:
        raise InvalidPoint(f"term {t} and point {point} differ in length")
    blocked = k is not None
    m = len(point) - 1 if blocked else len(point)
    if blocked:
        s = t[m]
        if k < 2:
            raise InvalidPoint(f"block count {k} is below 2")
        if not 0 <= s < k:
            raise InvalidPoint(f"block degree {s} outside 0..{k - 1}")
    _check_point(point, m, k or 1, blocked)
    if any(not 0 <= u < m for u in t[:m]):
        raise InvalidPoint(f"position degrees {t[:m]} outside 0..{m - 1}")

    P = contrast_table(m).values
    value = float(np.prod([P[u, z - 1] for u, z in zip(t[:m], point[:m])]))
    if blocked:
        value *= float(_block_values(k)[t[m], point[m] - 1])
    return value


def wlp_from_spectrum(spec):
    a0 = spec.a0
    if spec.n == 0 or a0 == 0:
        raise EmptyDesign("word-length patterns are undefined for an empty design")
    m = spec.m
    length = m * (m - 1)
    ratios = np.where(spec.is_word(spec.coefficients), spec.coefficients / a0, 0.0) ** 2
    degrees = position_degrees(m)
    pure = np.bincount(degrees, weights=ratios[:, 0], minlength=length + 1)[1:length + 1]
    mixed = None
    if spec.blocked:
        weights = ratios[:, 1:].sum(axis=1) if ratios.shape[1] > 1 else np.zeros(len(degrees))
        mixed = np.bincount(degrees, weights=weights, minlength=length + 1)[1:length + 1]
    return WordLengthPattern(pure=pure, mixed=mixed)


def streaming_wlp(design):
    """Word-length pattern from pairwise row kernels, without the dense spectrum."""
    m, n = design.m, design.n
    _check_size(m, STREAMING_LIMIT)
    if n == 0:
        raise EmptyDesign("word-length patterns are undefined for an empty design")
    P = contrast_table(m).values
    rows = design.rows - 1
    blocks = design.blocks
    length = m * (m - 1)

    # kernels[j][a, b, u] = p_u(a) p_u(b)
    kernel = P.T[:, None, :] * P.T[None, :, :]
    pure = np.zeros(length + 1)
    mixed = np.zeros(length + 1)
    for i in range(n):
        poly = np.ones((n, 1))
        for j in range(m):
            factor = kernel[rows[i, j], rows[:, j]]
            grown = np.zeros((n, poly.shape[1] + m - 1))
            for u in range(m):
                grown[:, u:u + poly.shape[1]] += poly * factor[:, u:u + 1]
            poly = grown
        pure += poly.sum(axis=0)
        if design.blocked:
            weight = design.k * (blocks == blocks[i]) - 1.0
            mixed += weight @ poly
    pure /= n * n
    mixed /= n * n
    logger.debug("streamed WLP for %r", design)
    return WordLengthPattern(pure=pure[1:], mixed=mixed[1:] if design.blocked else None)


def wlp(design):
    if design.n == 0:
        raise EmptyDesign("word-length patterns are undefined for an empty design")
    if design.m > DENSE_LIMIT:
        return streaming_wlp(design)
    return wlp_from_spectrum(spectrum(design))


def compare(first, second):
    """Aberration order: LESS means `first` has less aberration."""
    if first.blocked != second.blocked or len(first.pure) != len(second.pure):
        raise ShapeMismatch("word-length patterns differ in kind or length")
    for a, b in zip(first.interleaved(), second.interleaved()):
        if abs(a - b) > COMPARE_TOLERANCE:
            return Ordering.LESS if a < b else Ordering.GREATER
    return Ordering.EQUAL


def words_frame(spec):
    """One row per word: digits of t', a_t' and (a_t'/a_0)^2, constant term excluded."""
    records = [
        {'word': ''.join(str(d) for d in t), 'coefficient': a, 'squared_ratio': r2}
        for t, a, r2 in spec.words()
        if any(t)
    ]
    return pd.DataFrame(records, columns=['word', 'coefficient', 'squared_ratio'])
