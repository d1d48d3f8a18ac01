import pandas as pd
from django.core.management.base import CommandError

from designs.core import validate
from designs.exceptions import DesignValidationError
from designs.management.base import OofaCommand


class Command(OofaCommand):
    help = "Check that every run is a permutation and that blocks are balanced."

    def add_options(self, parser):
        parser.add_argument('--design', required=True, help="Design CSV path or bundled design name.")
        parser.add_argument('--m', type=int, default=None, help="Expected number of components.")

    def run(self, **options):
        try:
            design = self.load(options['design'], m=options['m'])
        except DesignValidationError as exc:
            self.emit(pd.DataFrame([
                {'rule': v.rule, 'row': v.row, 'block': v.block, 'detail': v.detail} for v in exc.violations
            ]))
            raise CommandError(f"{len(exc.violations)} violation(s)", returncode=1)

        violations = validate(design)
        summary = {'m': design.m, 'k': design.k, 'n': design.n, 'valid': not violations}
        self.emit(pd.DataFrame([summary]))
