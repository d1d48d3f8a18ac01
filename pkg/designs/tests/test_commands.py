import json
import tempfile
from io import StringIO
from pathlib import Path

import pandas as pd
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from designs.core import fixture_names, fixture_path
from designs.models import StoredDesign

DATA_DIR = Path(__file__).resolve().parent / 'data'


def run(name, **options):
    out = StringIO()
    call_command(name, stdout=out, stderr=StringIO(), **options)
    return out.getvalue()


def run_frame(name, **options):
    return pd.read_csv(StringIO(run(name, **options)))


class MolsCommandTestCase(SimpleTestCase):
    def test_lists_squares(self):
        expected = (DATA_DIR / 'latin_squares_m5.csv').read_text()
        self.assertEqual(run('mols', m=5), expected)

    def test_coa_column(self):
        frame = run_frame('mols', m=4, coa=True)
        self.assertEqual(list(frame.columns), ['Square', 'Row', 'COA', 'C1', 'C2', 'C3', 'C4'])
        self.assertEqual(frame.COA.max(), 2)

    def test_unsupported_order(self):
        with self.assertRaises(CommandError) as caught:
            run('mols', m=6)
        self.assertEqual(caught.exception.returncode, 2)
        self.assertIn('UnsupportedOrder', str(caught.exception))


class WlpCommandTestCase(SimpleTestCase):
    def test_unblocked(self):
        frame = run_frame('wlp', design='d1')
        self.assertEqual(list(frame.columns), ['length', 'pure'])
        self.assertAlmostEqual(frame.pure[1], 0.75, delta=5e-3)

    def test_json(self):
        records = json.loads(run('wlp', design='d2_blocked', json=True))
        self.assertEqual(len(records), 6)
        self.assertEqual(set(records[0]), {'length', 'pure', 'mixed'})
        self.assertAlmostEqual(records[2]['mixed'], 4.5, delta=5e-3)

    def test_streaming_agrees(self):
        dense = run_frame('wlp', design='block_k3_nb12')
        streamed = run_frame('wlp', design='block_k3_nb12', streaming=True)
        pd.testing.assert_frame_equal(dense, streamed, atol=1e-9)

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / 'wlp.csv'
            self.assertEqual(run('wlp', design='d1', output=str(target)), '')
            self.assertTrue(target.read_text().startswith('length,pure\n'))

    def test_missing_design(self):
        with self.assertRaises(CommandError) as caught:
            run('wlp', design='no_such_design')
        self.assertEqual(caught.exception.returncode, 1)


class IndicatorCommandTestCase(SimpleTestCase):
    def test_point(self):
        frame = run_frame('indicator', design='d2', point=[1, 2, 3])
        self.assertAlmostEqual(frame.F[0], 2.0, places=8)

    def test_words(self):
        frame = run_frame('indicator', design='d1')
        self.assertEqual(len(frame), 10)
        self.assertEqual(list(frame.columns), ['word', 'coefficient', 'squared_ratio'])

    def test_invalid_point(self):
        with self.assertRaises(CommandError) as caught:
            run('indicator', design='d1', point=[1, 1, 2])
        self.assertEqual(caught.exception.returncode, 2)


class ValidateCommandTestCase(SimpleTestCase):
    def test_valid(self):
        frame = run_frame('validate', design='block_k2_nb25')
        self.assertEqual(frame.to_dict(orient='records'), [{'m': 5, 'k': 2, 'n': 50, 'valid': True}])

    def test_violations(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'bad.csv'
            path.write_text("Run,Z1,Z2,Z3,B\n1,1,2,3,1\n2,1,1,3,2\n3,2,1,3,2\n")
            out = StringIO()
            with self.assertRaises(CommandError) as caught:
                call_command('validate', design=str(path), stdout=out)
        self.assertEqual(caught.exception.returncode, 1)
        self.assertIn('row not a permutation', out.getvalue())
        self.assertIn('unbalanced blocks', out.getvalue())

    def test_wrong_component_count(self):
        with self.assertRaises(CommandError) as caught:
            run('validate', design=str(fixture_path('d1')), m=4)
        self.assertEqual(caught.exception.returncode, 1)

    def test_bundled_name_with_component_count(self):
        frame = run_frame('validate', design='block_k2_nb25', m=5)
        self.assertTrue(frame.valid.all())
        with self.assertRaises(CommandError) as caught:
            run('validate', design='block_k2_nb25', m=4)
        self.assertEqual(caught.exception.returncode, 1)

    def test_missing_design(self):
        with self.assertRaises(CommandError) as caught:
            run('validate', design='no_such_design', m=5)
        self.assertEqual(caught.exception.returncode, 1)


class AnalysisCommandsTestCase(SimpleTestCase):
    def test_correlate(self):
        frame = run_frame('correlate', design='block_k3_nb20', order='first')
        self.assertEqual(list(frame.columns)[:3], ['term', 'B^l', 'B^q'])
        self.assertEqual(len(frame), 7)

    def test_correlate_without_blocks(self):
        frame = run_frame('correlate', design='block_k3_nb20', order='first', no_blocks=True)
        self.assertNotIn('B^l', frame.columns)

    def test_fit(self):
        frame = run_frame('fit', data='block_k3_nb12')
        self.assertEqual(frame.columns[0], 'term')
        self.assertEqual(set(frame.term), {
            '(Intercept)', 'B^l', 'B^q', 'Z2^l', 'Z2^q', 'Z5^l', 'Z2^lZ5^l', 'Z1^lZ5^l', 'Z3^lZ4^l',
        })

    def test_fit_without_response(self):
        with self.assertRaises(CommandError) as caught:
            run('fit', data='d1')
        self.assertEqual(caught.exception.returncode, 1)

    def test_simulate(self):
        frame = run_frame('simulate', design='block_k3_nb12', p=2, reps=3, seed=4)
        self.assertEqual(len(frame), 1)
        self.assertEqual(list(frame.columns), ['p', 'reps', 'alpha', 'sigma', 'seed', 'PW', 'TY1'])
        self.assertTrue(0 <= frame.PW[0] <= 1)

    def test_simulate_needs_p(self):
        with self.assertRaises(CommandError) as caught:
            run('simulate', design='block_k3_nb12')
        self.assertEqual(caught.exception.returncode, 2)

    def test_simulate_unblocked_design(self):
        with self.assertRaises(CommandError) as caught:
            run('simulate', design='d1', p=1, reps=2)
        self.assertIn('ConfigInvalid', str(caught.exception))

    def test_case_study(self):
        text = run('case_study')
        self.assertTrue(text.startswith('# fits\n'))
        fits_text, sequences_text = text.split('# sequences\n')
        sequences = pd.read_csv(StringIO(sequences_text))
        blocked = set(sequences[sequences.analysis == 'blocked'].sequence)
        unblocked = set(sequences[sequences.analysis == 'unblocked'].sequence)
        truth = set(sequences[sequences.analysis == 'true model'].sequence)
        self.assertEqual(truth, {'Z4->Z3->Z2->Z1->Z5', 'Z4->Z3->Z1->Z2->Z5'})
        self.assertEqual(blocked, truth)
        self.assertEqual(len(unblocked), 6)
        self.assertIn('Z1->Z2->Z3->Z4->Z5', unblocked)
        fits = pd.read_csv(StringIO(fits_text.split('\n', 1)[1]))
        self.assertEqual(set(fits.analysis), {'unblocked', 'blocked'})

    def test_case_study_top(self):
        text = run('case_study', top=3, json=True)
        document = json.loads(text)
        self.assertEqual(len(document['sequences']), 9)


class ConstructCommandTestCase(TestCase):
    def test_coa_stacking_matches_bundled_design(self):
        output = run('construct', m=5, k=3, block_size=20)
        self.assertEqual(output, fixture_path('block_k3_nb20').read_text())

    def test_search_with_report_and_save(self):
        with tempfile.TemporaryDirectory() as tmp:
            report = Path(tmp) / 'wlp.csv'
            out = Path(tmp) / 'design.csv'
            run('construct', m=5, k=3, block_size=12, i1=2, i2=3, i3=3, seed=8,
                out=str(out), report=str(report), save='searched')
            design = pd.read_csv(out)
            self.assertEqual(len(design), 36)
            self.assertEqual(list(pd.read_csv(report).columns), ['length', 'pure', 'mixed'])

        stored = StoredDesign.objects.get(name='searched')
        self.assertEqual((stored.m, stored.k, stored.block_size, stored.seed), (5, 3, 12, 8))
        self.assertEqual(len(stored.provenance), 3)

    def test_infeasible_size(self):
        with self.assertRaises(CommandError) as caught:
            run('construct', m=5, k=3, block_size=41)
        self.assertEqual(caught.exception.returncode, 2)

    def test_load_bundled_designs(self):
        run('load_bundled_designs')
        self.assertEqual(StoredDesign.objects.count(), len(fixture_names()))
        run('load_bundled_designs')
        self.assertEqual(StoredDesign.objects.count(), len(fixture_names()))
        self.assertFalse(StoredDesign.objects.get(name='d1').blocked)
