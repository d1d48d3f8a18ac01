"""
Design value objects, validation and CSV interchange.

Rows hold positions: row i, column j is the position at which component j is
added in run i. Blocked designs carry a parallel vector of block labels 1..k.
"""
import logging
import math
import re
from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path

import numpy as np
import pandas as pd

from .exceptions import DesignValidationError, InfeasibleSize, ParseError

logger = logging.getLogger(__name__)

FIXTURE_DIR = Path(__file__).resolve().parent / 'data'

RUN_COLUMN = 'Run'
BLOCK_COLUMN = 'B'
RESPONSE_COLUMN = 'y'
_POSITION_COLUMN = re.compile(r'^Z([1-9][0-9]*)$')


def _frozen(array, dtype):
    array = np.array(array, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class OofaDesign:
    rows: np.ndarray
    response: np.ndarray = None

    blocked = False

    def __post_init__(self):
        rows = np.asarray(self.rows)
        if rows.ndim == 1 and rows.size == 0:
            rows = rows.reshape(0, 0)
        object.__setattr__(self, 'rows', _frozen(rows, np.int64))
        if self.response is not None:
            object.__setattr__(self, 'response', _frozen(self.response, float))

    @property
    def m(self):
        return self.rows.shape[1]

    @property
    def n(self):
        return self.rows.shape[0]

    @property
    def k(self):
        return 1

    @property
    def blocks(self):
        return np.ones(self.n, dtype=np.int64)

    def to_grid(self):
        return self.rows.tolist()

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and self.k == other.k
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.blocks, other.blocks)
        )

    def __repr__(self):
        return f"OofaDesign(m={self.m}, n={self.n})"


@dataclass(frozen=True, eq=False)
class BlockOofaDesign(OofaDesign):
    block_labels: np.ndarray = None
    num_blocks: int = None

    blocked = True

    def __post_init__(self):
        super().__post_init__()
        labels = np.asarray(self.block_labels if self.block_labels is not None else [], dtype=np.int64)
        object.__setattr__(self, 'block_labels', _frozen(labels, np.int64))
        if self.num_blocks is None:
            object.__setattr__(self, 'num_blocks', int(labels.max()) if labels.size else 1)

    @classmethod
    def from_parts(cls, rows, blocks, k=None, response=None):
        return cls(rows=rows, response=response, block_labels=blocks, num_blocks=k)

    @classmethod
    def from_grid(cls, grid, k=None, response=None):
        """Build from rows that carry the block label in their last entry."""
        grid = np.asarray(grid, dtype=np.int64)
        if grid.size == 0:
            return cls.from_parts(np.zeros((0, 0), dtype=np.int64), [], k=k, response=response)
        return cls.from_parts(grid[:, :-1], grid[:, -1], k=k, response=response)

    @property
    def k(self):
        return self.num_blocks

    @property
    def blocks(self):
        return self.block_labels

    @property
    def block_size(self):
        return self.n // self.k if self.k else 0

    def to_grid(self):
        return np.column_stack([self.rows, self.block_labels]).tolist()

    def __repr__(self):
        return f"BlockOofaDesign(m={self.m}, k={self.k}, n={self.n})"


@dataclass(frozen=True)
class DesignShape:
    m: int
    k: int
    block_size: int
    lam: int
    gamma: int
    delta: int

    @property
    def construction(self):
        if self.gamma == 0 and self.delta == 0:
            return 1
        return 2 if self.delta == 0 else 3


@dataclass(frozen=True)
class Violation:
    rule: str
    row: int = None
    block: int = None
    detail: str = field(default='', compare=False)

    def __str__(self):
        where = []
        if self.row is not None:
            where.append(f"row {self.row}")
        if self.block is not None:
            where.append(f"block {self.block}")
        text = self.rule
        if where:
            text += f" at {', '.join(where)}"
        if self.detail:
            text += f": {self.detail}"
        return text


def validate(design):
    violations = []
    levels = np.arange(1, design.m + 1)
    for i, row in enumerate(design.rows, start=1):
        if not np.array_equal(np.sort(row), levels):
            violations.append(Violation('row not a permutation', row=i, detail=str(row.tolist())))

    if design.blocked:
        k = design.k
        labels = design.blocks
        for i in np.flatnonzero((labels < 1) | (labels > k)):
            violations.append(
                Violation('block label out of range', row=int(i) + 1, block=int(labels[i]))
            )
        counts = np.bincount(labels[(labels >= 1) & (labels <= k)], minlength=k + 1)[1:]
        if counts.size and len(set(counts.tolist())) > 1:
            violations.append(
                Violation('unbalanced blocks', detail=', '.join(f"B{b}={c}" for b, c in enumerate(counts, start=1)))
            )
    if violations:
        logger.debug("%r has %d violation(s)", design, len(violations))
    return violations


def decompose_block_size(m, k, block_size):
    if block_size < 1 or block_size > math.factorial(m) // k:
        raise InfeasibleSize(
            f"block size {block_size} must lie in 1..{math.factorial(m) // k} for m={m}, k={k}"
        )
    per_coa = m * (m - 1)
    lam, rest = divmod(block_size, per_coa)
    gamma, delta = divmod(rest, m)
    return DesignShape(m=m, k=k, block_size=block_size, lam=lam, gamma=gamma, delta=delta)


def full_oofa_design(m):
    """All m! runs in lexicographic order."""
    return OofaDesign(np.array(list(permutations(range(1, m + 1))), dtype=np.int64).reshape(-1, m))


def full_design(m, k):
    rows = full_oofa_design(m).rows
    return BlockOofaDesign.from_parts(
        np.tile(rows, (k, 1)), np.repeat(np.arange(1, k + 1), len(rows)), k=k
    )


def _integer_column(frame, column):
    values = pd.to_numeric(frame[column], errors='coerce')
    bad = values.isna() | (values != values.round())
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0]) + 1
        raise ParseError("expected an integer level", row=row, column=column)
    return values.astype(np.int64).to_numpy()


def read_csv(path, m=None):
    """Read a design file; rows without a B column give an OofaDesign."""
    try:
        frame = pd.read_csv(path, dtype=str, skipinitialspace=True)
    except FileNotFoundError as exc:
        raise ParseError(f"no design file at {path}") from exc
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot parse {path}: {exc}") from exc

    columns = [c.strip() for c in frame.columns]
    frame.columns = columns
    body = columns[1:] if columns and columns[0] == RUN_COLUMN else columns
    positions = [c for c in body if _POSITION_COLUMN.match(c)]
    expected = [f"Z{j}" for j in range(1, len(positions) + 1)]
    if not positions or positions != expected or body[:len(positions)] != positions:
        raise ParseError(f"header must read Run,Z1,...,Zm[,B][,y]; got {','.join(columns)}")
    if m is not None and len(positions) != m:
        raise ParseError(f"expected {m} position columns, found {len(positions)}")
    extra = body[len(positions):]
    if extra not in ([], [BLOCK_COLUMN], [RESPONSE_COLUMN], [BLOCK_COLUMN, RESPONSE_COLUMN]):
        raise ParseError(f"unexpected columns after Z{len(positions)}: {','.join(extra)}")

    if len(frame):
        rows = np.column_stack([_integer_column(frame, c) for c in positions])
    else:
        rows = np.zeros((0, len(positions)), dtype=np.int64)
    response = None
    if RESPONSE_COLUMN in extra:
        values = pd.to_numeric(frame[RESPONSE_COLUMN], errors='coerce')
        if values.isna().any():
            row = int(np.flatnonzero(values.isna().to_numpy())[0]) + 1
            raise ParseError("expected a numeric response", row=row, column=RESPONSE_COLUMN)
        response = values.to_numpy(dtype=float)

    if BLOCK_COLUMN in extra:
        blocks = _integer_column(frame, BLOCK_COLUMN)
        design = BlockOofaDesign.from_parts(rows, blocks, response=response)
    else:
        design = OofaDesign(rows, response)

    violations = validate(design)
    if violations:
        raise DesignValidationError(violations)
    logger.debug("read %r from %s", design, path)
    return design


def design_frame(design):
    frame = pd.DataFrame(design.rows, columns=[f"Z{j}" for j in range(1, design.m + 1)])
    frame.insert(0, RUN_COLUMN, np.arange(1, design.n + 1))
    if design.blocked:
        frame[BLOCK_COLUMN] = design.blocks
    if design.response is not None:
        frame[RESPONSE_COLUMN] = design.response
    return frame


def write_csv(design, path=None):
    """Write the design; with no path the CSV text is returned."""
    return design_frame(design).to_csv(path, index=False, lineterminator='\n')


def fixture_names():
    return sorted(p.stem for p in FIXTURE_DIR.glob('*.csv'))


def fixture_path(name):
    path = FIXTURE_DIR / (name if name.endswith('.csv') else f"{name}.csv")
    if not path.exists():
        raise FileNotFoundError(f"no bundled design named {name!r}")
    return path


def load_fixture(name, m=None):
    return read_csv(fixture_path(name), m=m)


def load_design(reference, m=None):
    """Accept a filesystem path or the name of a bundled design."""
    path = Path(reference)
    if path.exists():
        return read_csv(path, m=m)
    try:
        return load_fixture(str(reference), m=m)
    except FileNotFoundError:
        raise ParseError(f"{reference} is neither a readable file nor a bundled design") from None
