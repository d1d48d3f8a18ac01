import pandas as pd
from django.core.management.base import CommandError

from designs.management.base import OofaCommand
from designs.simulator import SimConfig, simulate
from designs.utils import oofa_setting


class Command(OofaCommand):
    help = "Monte-Carlo power (PW) and type-I error (TY1) of forward selection on a blocked design."

    def add_options(self, parser):
        defaults = oofa_setting('SIMULATION', {})
        parser.add_argument('--design', required=True, help="Design CSV path or bundled design name.")
        parser.add_argument('--p', type=int, default=None, help="Number of active position effects.")
        parser.add_argument('--grid', action='store_true', help="Run p = 1..6 and emit one row per p.")
        parser.add_argument('--reps', type=int, default=defaults.get('reps', 1000))
        parser.add_argument('--alpha', type=float, default=defaults.get('alpha', 0.05))
        parser.add_argument('--sigma', type=float, default=defaults.get('sigma', 1.0))
        self.add_seed_argument(parser)
        parser.add_argument('--per-rep', help="Write the per-replication outcomes of the last run here.")

    def run(self, **options):
        design = self.load(options['design'])
        if options['grid']:
            ps = list(range(1, 7))
        elif options['p'] is not None:
            ps = [options['p']]
        else:
            raise CommandError("either --p or --grid is required", returncode=2)

        reports = []
        for p in ps:
            config = SimConfig(
                design=design, p=p, reps=options['reps'], alpha=options['alpha'],
                sigma=options['sigma'], seed=options['seed'],
            )
            reports.append(simulate(config, threads=self.threads))

        if options['per_rep']:
            reports[-1].per_rep().to_csv(options['per_rep'], index=False, lineterminator='\n')
        self.emit(pd.DataFrame([report.summary() for report in reports]))
