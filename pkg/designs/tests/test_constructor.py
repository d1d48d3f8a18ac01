from collections import Counter

import numpy as np
from django.test import SimpleTestCase, override_settings, tag

from designs.constructor import (
    MoveKind, SearchBudget, SearchState, _check_candidates, _random_state, _search, assemble, construct,
    exchange_move, wlp_of_full_design,
)
from designs.core import DesignShape, decompose_block_size, full_design, load_fixture, validate
from designs.exceptions import CandidateExhausted, DegenerateOrder, NoMoveAvailable, SizeLimit, UnsupportedOrder
from designs.indicator import Ordering, compare, spectrum, wlp
from designs.tests.test_indicator import REFERENCE_WLP
from designs.utils import substream

SMALL = SearchBudget(restarts=4, ls_exchanges=6, row_exchanges=6, seed=9)


class SearchBudgetTestCase(SimpleTestCase):
    def test_rejects_empty_budget(self):
        with self.assertRaises(ValueError):
            SearchBudget(restarts=0)

    @override_settings(OOFA={'DEFAULT_SEED': 17, 'SEARCH_BUDGET': {'restarts': 3}})
    def test_from_settings(self):
        budget = SearchBudget.from_settings(ls_exchanges=7, row_exchanges=None)
        self.assertEqual(budget.restarts, 3)
        self.assertEqual(budget.ls_exchanges, 7)
        self.assertEqual(budget.row_exchanges, 50)
        self.assertEqual(budget.seed, 17)


class CoaStackingTestCase(SimpleTestCase):
    def test_matches_stored_designs(self):
        for k, block_size, name in ((3, 20, 'block_k3_nb20'), (2, 40, 'block_k2_nb40')):
            with self.subTest(name=name):
                result = construct(5, k, block_size)
                self.assertEqual(result.design, load_fixture(name))
                self.assertEqual(result.iterations_used['restarts'], 0)
                self.assertIsNone(result.restart)

    def test_low_order_balance(self):
        for k, block_size in ((3, 20), (2, 40)):
            with self.subTest(k=k, block_size=block_size):
                result = construct(5, k, block_size)
                full = wlp_of_full_design(5, k)
                np.testing.assert_allclose(result.wlp.mixed[:3], 0, atol=1e-9)
                self.assertAlmostEqual(result.wlp.entry(1), 0, delta=1e-9)
                self.assertAlmostEqual(result.wlp.entry(3), 0, delta=1e-9)
                self.assertAlmostEqual(result.wlp.entry(2), full.entry(2), delta=1e-9)
                self.assertIs(compare(wlp(full_design(5, k)), result.wlp), Ordering.LESS)

    def test_provenance(self):
        result = construct(5, 2, 40)
        self.assertEqual([p.coas for p in result.provenance], [[1, 2], [3, 4]])
        self.assertTrue(all(not p.squares and not p.rows for p in result.provenance))


class SearchConstructionTestCase(SimpleTestCase):
    def setUp(self):
        self.result = construct(5, 3, 12, SMALL)

    def test_design_is_balanced(self):
        design = self.result.design
        self.assertEqual(validate(design), [])
        self.assertEqual(design.block_size, 12)
        self.assertEqual(design.k, 3)

    def test_reported_wlp_matches_design(self):
        np.testing.assert_allclose(
            self.result.wlp.interleaved(), wlp(self.result.design).interleaved(), atol=1e-9
        )

    def test_units_are_used_once(self):
        squares = [ls for p in self.result.provenance for ls in p.squares]
        rows = [pair for p in self.result.provenance for pair in p.rows]
        self.assertEqual(len(squares), len(set(squares)))
        self.assertEqual(len(rows), len(set(rows)))
        self.assertFalse({ls for ls, _ in rows} & set(squares))
        # ceil(3 * 12 / 5) = 8 candidate squares follow zero COAs
        self.assertTrue(all(1 <= ls <= 8 for ls in squares + [ls for ls, _ in rows]))
        for p in self.result.provenance:
            self.assertEqual((len(p.coas), len(p.squares), len(p.rows)), (0, 2, 2))

    def test_assemble_round_trip(self):
        self.assertEqual(assemble(5, 3, self.result.provenance), self.result.design)

    def test_deterministic(self):
        again = construct(5, 3, 12, SMALL)
        self.assertEqual(again.design, self.result.design)
        self.assertEqual(again.restart, self.result.restart)

    def test_iteration_counts(self):
        used = self.result.iterations_used
        self.assertEqual(used, {'restarts': 4, 'ls_exchanges': 24, 'row_exchanges': 24})
        self.assertEqual(self.result.seed, 9)

    def test_no_worse_than_first_start(self):
        shape = decompose_block_size(5, 3, 12)
        start = _random_state(shape, _check_candidates(shape), substream(SMALL.seed, 0))
        self.assertIsNot(compare(self.result.wlp, start.wlp), Ordering.GREATER)

    def test_incumbent_never_worsens(self):
        shape = decompose_block_size(5, 3, 12)
        rng = substream(5, 0)
        state = _random_state(shape, _check_candidates(shape), rng)
        for kind in (MoveKind.LS_SWAP, MoveKind.ROW_SWAP):
            for _ in range(40):
                incumbent = state.wlp
                _search(state, kind, 1, rng)
                self.assertIsNot(compare(state.wlp, incumbent), Ordering.GREATER)
        np.testing.assert_allclose(state.wlp.interleaved(), wlp(state.design()).interleaved(), atol=1e-9)

    def test_mixed_decomposition(self):
        result = construct(5, 2, 27, SMALL)
        self.assertEqual(validate(result.design), [])
        self.assertEqual(Counter(result.design.blocks.tolist()), {1: 27, 2: 27})
        self.assertEqual([p.coas for p in result.provenance], [[1], [2]])


class ConstructErrorsTestCase(SimpleTestCase):
    def test_unsupported_order(self):
        with self.assertRaises(UnsupportedOrder):
            construct(6, 2, 12, SMALL)

    def test_degenerate_order(self):
        with self.assertRaises(DegenerateOrder):
            construct(3, 1, 3, SMALL)

    def test_candidate_exhausted(self):
        shape = DesignShape(m=4, k=3, block_size=12, lam=1, gamma=0, delta=0)
        with self.assertRaises(CandidateExhausted):
            _check_candidates(shape)

    def test_candidates_follow_coas(self):
        shape = decompose_block_size(5, 2, 27)
        self.assertEqual(_check_candidates(shape), [9, 10, 11])


class SearchStateTestCase(SimpleTestCase):
    def make_state(self):
        return SearchState(5, 2, [[], []], [[1], [2]], [[(3, 1)], [(3, 2)]])

    def test_exchange_and_undo(self):
        state = self.make_state()
        before = state.wlp
        rng = np.random.default_rng(0)
        _, token = exchange_move(state, MoveKind.LS_SWAP, rng)
        self.assertEqual(state.squares, [[2], [1]])
        np.testing.assert_allclose(state.wlp.interleaved(), wlp(state.design()).interleaved(), atol=1e-10)

        state.undo(token)
        self.assertEqual(state.squares, [[1], [2]])
        self.assertIs(state.wlp, before)

    def test_row_exchange(self):
        state = self.make_state()
        token = state.exchange(MoveKind.ROW_SWAP, np.random.default_rng(1))
        self.assertEqual(state.rows, [[(3, 2)], [(3, 1)]])
        np.testing.assert_allclose(state.wlp.interleaved(), wlp(state.design()).interleaved(), atol=1e-10)
        state.undo(token)
        self.assertEqual(state.rows, [[(3, 1)], [(3, 2)]])

    def test_no_move_available(self):
        state = SearchState(5, 2, [[], []], [[1, 2], []], [[(3, 1)], [(3, 2)]])
        self.assertFalse(state.can_move(MoveKind.LS_SWAP))
        with self.assertRaises(NoMoveAvailable):
            state.exchange(MoveKind.LS_SWAP, np.random.default_rng(0))


class FullDesignPatternTestCase(SimpleTestCase):
    def test_blocked(self):
        pattern = wlp_of_full_design(5, 3)
        self.assertTrue(pattern.blocked)
        self.assertAlmostEqual(pattern.entry(2), 0.625, delta=5e-4)
        self.assertAlmostEqual(pattern.entry(4), 1.408, delta=5e-4)
        self.assertFalse(pattern.mixed.any())

    def test_unblocked(self):
        self.assertFalse(wlp_of_full_design(4).blocked)

    def test_pure_part_ignores_block_count(self):
        np.testing.assert_allclose(wlp_of_full_design(5, 2).pure, wlp_of_full_design(5, 3).pure)
        np.testing.assert_allclose(wlp_of_full_design(3, 2).pure, wlp(load_fixture('d1')).pure, atol=1e-12)

    def test_size_limit(self):
        with self.assertRaises(SizeLimit):
            wlp_of_full_design(8, 2)


@tag('slow')
class ParallelSearchTestCase(SimpleTestCase):
    def test_threads_do_not_change_result(self):
        serial = construct(5, 3, 15, SMALL, threads=1)
        pooled = construct(5, 3, 15, SMALL, threads=2)
        self.assertEqual(serial.design, pooled.design)
        self.assertEqual(serial.restart, pooled.restart)

    def test_reaches_low_order_balance(self):
        budget = SearchBudget(restarts=500, ls_exchanges=50, row_exchanges=50, seed=20240501)
        result = construct(5, 3, 15, budget)
        self.assertAlmostEqual(result.wlp.entry(1), 0, delta=1e-9)
        self.assertAlmostEqual(result.wlp.entry(1, 'B'), 0, delta=1e-9)
        self.assertLessEqual(result.wlp.entry(2), 0.70)


def no_worse_than(pattern, reference):
    """Aberration order on the leading entries, at the precision of the reference table."""
    for actual, expected in zip(pattern.interleaved(), reference):
        if abs(actual - expected) > 5e-4:
            return actual < expected
    return True


@tag('slow')
class SearchQualityTestCase(SimpleTestCase):
    budget = dict(restarts=500, ls_exchanges=50, row_exchanges=50)
    seeds = (1, 2, 3, 4, 5)

    def check(self, k, block_size, reference, leading_zeros=(), threads=4):
        results = [
            construct(5, k, block_size, SearchBudget(seed=seed, **self.budget), threads=threads)
            for seed in self.seeds
        ]
        for seed, result in zip(self.seeds, results):
            with self.subTest(seed=seed):
                self.assertEqual(validate(result.design), [])
                for length, kind in leading_zeros:
                    self.assertAlmostEqual(result.wlp.entry(length, kind), 0, delta=1e-9)
        passing = sum(no_worse_than(result.wlp, REFERENCE_WLP[reference]) for result in results)
        self.assertGreaterEqual(passing, 4)
        return results

    def test_k3_nb15(self):
        self.check(3, 15, 'block_k3_nb15', leading_zeros=[(1, 'P'), (1, 'B')])

    def test_k3_nb12(self):
        for result in self.check(3, 12, 'block_k3_nb12', leading_zeros=[(1, 'P')]):
            self.assertLessEqual(result.wlp.entry(2, 'B'), 0.35)

    def test_k2_nb25(self):
        self.check(2, 25, 'block_k2_nb25', leading_zeros=[(1, 'P'), (1, 'B')])

    def test_k2_nb27(self):
        self.check(2, 27, 'block_k2_nb27')


@tag('slow')
class DeltaUpdateTestCase(SimpleTestCase):
    def test_random_swaps_match_recomputation(self):
        shape = decompose_block_size(5, 3, 12)
        rng = np.random.default_rng(11)
        state = _random_state(shape, _check_candidates(shape), rng)
        kinds = (MoveKind.LS_SWAP, MoveKind.ROW_SWAP)
        for step in range(1000):
            token = state.exchange(kinds[int(rng.integers(2))], rng)
            if step % 7 == 0:
                state.undo(token)
            expected = spectrum(state.design())
            np.testing.assert_allclose(state._spectrum.coefficients, expected.coefficients, rtol=0, atol=1e-10)
            np.testing.assert_allclose(state.wlp.interleaved(), wlp(state.design()).interleaved(), atol=1e-10)
