import pandas as pd

from designs.core import load_fixture
from designs.management.base import OofaCommand
from designs.simulator import (
    BATCH_EFFECTS, TRUE_MODEL, argmax_sequences, case_study_responses, format_sequence, rank_sequences,
)
from designs.stats import ModelOrder, forward_select, model_matrix

UNBLOCKED = 'unblocked_batches'
BLOCKED = 'block_k3_nb12'


class Command(OofaCommand):
    help = (
        "Replay the five-drug case study: fit the unblocked and blocked 36-run experiments "
        "and rank the drug sequences."
    )

    def add_options(self, parser):
        parser.add_argument('--alpha', type=float, default=0.05)
        parser.add_argument('--regenerate', action='store_true',
                            help="Draw fresh responses from the true model instead of the bundled ones.")
        parser.add_argument('--sigma', type=float, default=1.0, help="Noise level for --regenerate.")
        parser.add_argument('--top', type=int, default=None,
                            help="List the N best sequences instead of only the maximizers.")
        self.add_seed_argument(parser)

    def run(self, **options):
        m = 5
        fits = []
        rankings = [self._sequences('true model', TRUE_MODEL, m, options['top'])]
        for index, (name, analysis, include_blocks) in enumerate((
            (UNBLOCKED, 'unblocked', False),
            (BLOCKED, 'blocked', True),
        )):
            design = load_fixture(name)
            y = design.response
            if options['regenerate']:
                y = case_study_responses(
                    design, TRUE_MODEL, BATCH_EFFECTS, sigma=options['sigma'], seed=options['seed'] + index,
                )
            X = model_matrix(design, ModelOrder.SECOND_ORDER, include_blocks=include_blocks)
            fit = forward_select(X, y, options['alpha'])
            table = fit.table().reset_index()
            table.insert(0, 'analysis', analysis)
            fits.append(table)
            rankings.append(self._sequences(analysis, fit, m, options['top']))

        self.emit({
            'fits': pd.concat(fits, ignore_index=True),
            'sequences': pd.concat(rankings, ignore_index=True),
        })

    def _sequences(self, analysis, effects, m, top):
        if top:
            ranked = rank_sequences(effects, m, top=top)
        else:
            values = dict(rank_sequences(effects, m))
            ranked = [(seq, values[seq]) for seq in argmax_sequences(effects, m)]
        return pd.DataFrame([
            {'analysis': analysis, 'rank': rank, 'sequence': format_sequence(seq), 'predicted': value}
            for rank, (seq, value) in enumerate(ranked, start=1)
        ])
