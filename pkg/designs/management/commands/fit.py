from django.core.management.base import CommandError

from designs.management.base import OofaCommand
from designs.stats import ModelOrder, forward_select, model_matrix


class Command(OofaCommand):
    help = "Forward selection on the full block-position model of a design with a response column."

    def add_options(self, parser):
        parser.add_argument('--data', required=True, help="CSV with a y column, or a bundled design name.")
        parser.add_argument('--alpha', type=float, default=0.05)
        parser.add_argument('--order', choices=[o.value for o in ModelOrder], default=ModelOrder.SECOND_ORDER.value)
        parser.add_argument('--no-blocks', action='store_true', help="Do not offer block contrasts as candidates.")

    def run(self, **options):
        design = self.load(options['data'])
        if design.response is None:
            raise CommandError(f"{options['data']} has no y column", returncode=1)
        X = model_matrix(design, ModelOrder(options['order']), include_blocks=not options['no_blocks'])
        fit = forward_select(X, design.response, options['alpha'])
        self.emit(fit.table().reset_index())
