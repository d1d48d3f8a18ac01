"""
Blocked OofA construction by stacking COAs and exchanging Latin squares and rows.

A block of size n_B = lam*m(m-1) + gamma*m + delta receives lam whole COAs
(fixed, in index order), gamma whole Latin squares and delta single rows. The
squares and rows are drawn from the candidates that follow the COAs in the
ordered LS set and are shuffled between blocks by a seeded local search that
only accepts moves with strictly less aberration.
"""
import enum
import logging
import math
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .core import BlockOofaDesign, decompose_block_size, full_oofa_design
from .exceptions import CandidateExhausted, NoMoveAvailable, SizeLimit
from .fields import make_field
from .indicator import (
    DENSE_LIMIT, Ordering, WordLengthPattern, compare, delta_spectrum, spectrum, wlp, wlp_from_spectrum,
)
from .latin import base_mols, component_arrays, latin_squares
from .utils import default_seed, oofa_setting, run_parallel, substream

logger = logging.getLogger(__name__)


class MoveKind(enum.Enum):
    LS_SWAP = 'ls'
    ROW_SWAP = 'row'


@dataclass(frozen=True)
class SearchBudget:
    restarts: int = 500
    ls_exchanges: int = 50
    row_exchanges: int = 50
    seed: int = None

    @classmethod
    def from_settings(cls, **overrides):
        values = dict(oofa_setting('SEARCH_BUDGET', {}))
        values.update({key: value for key, value in overrides.items() if value is not None})
        values.setdefault('seed', default_seed())
        return cls(**values)

    def __post_init__(self):
        if self.seed is None:
            object.__setattr__(self, 'seed', default_seed())
        for name in ('restarts', 'ls_exchanges', 'row_exchanges'):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")


@dataclass
class BlockProvenance:
    block: int
    coas: list = field(default_factory=list)
    squares: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    def as_dict(self):
        return {
            'block': self.block,
            'coas': list(self.coas),
            'squares': list(self.squares),
            'rows': [list(pair) for pair in self.rows],
        }


@dataclass(frozen=True, eq=False)
class ConstructionResult:
    design: BlockOofaDesign
    wlp: WordLengthPattern
    provenance: list
    iterations_used: dict
    seed: int
    restart: int = None


def assemble(m, k, provenance):
    """Rebuild the design from its provenance; blocks in order, COA rows first."""
    squares = latin_squares(m)
    coas = component_arrays(m)
    rows, labels = [], []
    for entry in sorted(provenance, key=lambda p: p.block):
        parts = [coas[g - 1].rows for g in entry.coas]
        parts += [squares[r - 1].cells for r in entry.squares]
        parts += [squares[r - 1].cells[i - 1][None, :] for r, i in entry.rows]
        block_rows = np.vstack(parts) if parts else np.zeros((0, m), dtype=np.int64)
        rows.append(block_rows)
        labels.append(np.full(len(block_rows), entry.block))
    return BlockOofaDesign.from_parts(np.vstack(rows), np.concatenate(labels), k=k)


@dataclass
class UndoToken:
    kind: MoveKind
    first: tuple
    second: tuple
    previous_spectrum: object
    previous_wlp: WordLengthPattern


class SearchState:
    """
    Block assignment of the exchangeable units: whole squares (gamma per block)
    and single rows (delta per block). COA rows never move.
    """

    def __init__(self, m, k, fixed, squares, rows):
        self.m = m
        self.k = k
        self.fixed = fixed
        # squares[b] and rows[b] are lists of LS indices / (LS index, row index)
        self.squares = squares
        self.rows = rows
        self._spectrum = None
        self.wlp = None
        self.refresh()

    def provenance(self):
        return [
            BlockProvenance(
                block=b + 1,
                coas=list(self.fixed[b]),
                squares=sorted(self.squares[b]),
                rows=sorted(self.rows[b]),
            )
            for b in range(self.k)
        ]

    def design(self):
        return assemble(self.m, self.k, self.provenance())

    def refresh(self):
        design = self.design()
        if self.m <= DENSE_LIMIT:
            self._spectrum = spectrum(design)
            self.wlp = wlp_from_spectrum(self._spectrum)
        else:
            self._spectrum = None
            self.wlp = wlp(design)

    def _unit_rows(self, kind, unit):
        cells = latin_squares(self.m)
        if kind is MoveKind.LS_SWAP:
            return cells[unit - 1].cells
        ls, row = unit
        return cells[ls - 1].cells[row - 1][None, :]

    def _slots(self, kind):
        return self.squares if kind is MoveKind.LS_SWAP else self.rows

    def can_move(self, kind):
        return sum(1 for units in self._slots(kind) if units) >= 2

    def exchange(self, kind, rng):
        if not self.can_move(kind):
            raise NoMoveAvailable(f"no two blocks hold exchangeable units for {kind.value} swaps")
        slots = self._slots(kind)
        occupied = [b for b, units in enumerate(slots) if units]
        b1, b2 = rng.choice(occupied, size=2, replace=False)
        i1 = int(rng.integers(len(slots[b1])))
        i2 = int(rng.integers(len(slots[b2])))
        token = UndoToken(kind, (int(b1), i1), (int(b2), i2), self._spectrum, self.wlp)
        self._swap(kind, (int(b1), i1), (int(b2), i2))
        return token

    def undo(self, token):
        slots = self._slots(token.kind)
        (b1, i1), (b2, i2) = token.first, token.second
        slots[b1][i1], slots[b2][i2] = slots[b2][i2], slots[b1][i1]
        self._spectrum = token.previous_spectrum
        self.wlp = token.previous_wlp

    def _swap(self, kind, first, second):
        slots = self._slots(kind)
        (b1, i1), (b2, i2) = first, second
        u1, u2 = slots[b1][i1], slots[b2][i2]
        slots[b1][i1], slots[b2][i2] = u2, u1

        if self._spectrum is None:
            self.wlp = wlp(self.design())
            return
        rows1, rows2 = self._unit_rows(kind, u1), self._unit_rows(kind, u2)

        def labelled(rows, block):
            return np.column_stack([rows, np.full(len(rows), block + 1)])

        removed = np.vstack([labelled(rows1, b1), labelled(rows2, b2)])
        added = np.vstack([labelled(rows1, b2), labelled(rows2, b1)])
        self._spectrum = delta_spectrum(self._spectrum, removed, added)
        self.wlp = wlp_from_spectrum(self._spectrum)


def exchange_move(state, kind, rng):
    token = state.exchange(kind, rng)
    return state, token


def _check_candidates(shape):
    m, k = shape.m, shape.k
    total_squares = math.factorial(m - 1)
    needed = math.ceil(k * (shape.gamma * m + shape.delta) / m)
    first = k * shape.lam * (m - 1)
    if k * shape.lam > math.factorial(m - 2) or first + needed > total_squares:
        raise CandidateExhausted(
            f"need {k * shape.lam} COAs and {needed} further squares but only "
            f"{total_squares} squares exist for m={m}"
        )
    return list(range(first + 1, first + needed + 1))


def _fixed_coas(shape):
    return [list(range(b * shape.lam + 1, (b + 1) * shape.lam + 1)) for b in range(shape.k)]


def _random_state(shape, candidates, rng):
    m, k, gamma, delta = shape.m, shape.k, shape.gamma, shape.delta
    order = [candidates[i] for i in rng.permutation(len(candidates))]
    chosen, spare = order[:k * gamma], order[k * gamma:]
    squares = [chosen[b * gamma:(b + 1) * gamma] for b in range(k)]

    pool = [(ls, row) for ls in spare for row in range(1, m + 1)]
    picks = rng.choice(len(pool), size=k * delta, replace=False) if delta else []
    picked = [pool[i] for i in picks]
    rows = [picked[b * delta:(b + 1) * delta] for b in range(k)]
    return SearchState(m, k, _fixed_coas(shape), squares, rows)


def _search(state, kind, passes, rng):
    accepted = 0
    if not state.can_move(kind):
        return 0, 0
    for _ in range(passes):
        incumbent = state.wlp
        token = state.exchange(kind, rng)
        if compare(state.wlp, incumbent) is Ordering.LESS:
            accepted += 1
        else:
            state.undo(token)
    return passes, accepted


def run_restart(shape, candidates, budget, restart):
    rng = substream(budget.seed, restart)
    state = _random_state(shape, candidates, rng)
    ls_moves, ls_accepted = 0, 0
    row_moves, row_accepted = 0, 0
    if shape.gamma:
        ls_moves, ls_accepted = _search(state, MoveKind.LS_SWAP, budget.ls_exchanges, rng)
    if shape.delta:
        row_moves, row_accepted = _search(state, MoveKind.ROW_SWAP, budget.row_exchanges, rng)
    logger.debug(
        "restart %d: %d/%d square and %d/%d row swaps accepted, %r",
        restart, ls_accepted, ls_moves, row_accepted, row_moves, state.wlp,
    )
    return state.wlp, state.provenance(), ls_moves, row_moves


def construct(m, k, block_size, budget=None, threads=1):
    budget = budget or SearchBudget.from_settings()
    base_mols(make_field(m))
    shape = decompose_block_size(m, k, block_size)
    candidates = _check_candidates(shape)
    logger.info(
        "constructing m=%d k=%d n_B=%d (lambda=%d gamma=%d delta=%d)",
        m, k, block_size, shape.lam, shape.gamma, shape.delta,
    )

    if shape.gamma == 0 and shape.delta == 0:
        state = SearchState(m, k, _fixed_coas(shape), [[] for _ in range(k)], [[] for _ in range(k)])
        return ConstructionResult(
            design=state.design(),
            wlp=state.wlp,
            provenance=state.provenance(),
            iterations_used={'restarts': 0, 'ls_exchanges': 0, 'row_exchanges': 0},
            seed=budget.seed,
        )

    outcomes = run_parallel(
        partial(run_restart, shape, candidates, budget), range(budget.restarts), threads
    )
    best = 0
    for index, outcome in enumerate(outcomes):
        if compare(outcome[0], outcomes[best][0]) is Ordering.LESS:
            best = index
    best_wlp, provenance, _, _ = outcomes[best]
    logger.info("best restart %d: %r", best, best_wlp)
    return ConstructionResult(
        design=assemble(m, k, provenance),
        wlp=best_wlp,
        provenance=provenance,
        iterations_used={
            'restarts': len(outcomes),
            'ls_exchanges': sum(o[2] for o in outcomes),
            'row_exchanges': sum(o[3] for o in outcomes),
        },
        seed=budget.seed,
        restart=best,
    )


def wlp_of_full_design(m, k=None):
    """WLP of every block holding all m! runs; mixed entries vanish. k=None gives the unblocked W."""
    if m > DENSE_LIMIT:
        raise SizeLimit(f"full design WLP needs m <= {DENSE_LIMIT}, got m={m}")
    pure = wlp(full_oofa_design(m)).pure
    if k is None:
        return WordLengthPattern(pure=pure)
    return WordLengthPattern(pure=pure, mixed=np.zeros_like(pure))
