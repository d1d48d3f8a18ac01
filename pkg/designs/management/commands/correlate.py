from designs.management.base import OofaCommand
from designs.stats import ModelOrder, correlation_matrix, model_matrix


class Command(OofaCommand):
    help = "Pearson correlations between the columns of a block-position model matrix."

    def add_options(self, parser):
        parser.add_argument('--design', required=True, help="Design CSV path or bundled design name.")
        parser.add_argument('--order', choices=[o.value for o in ModelOrder], default=ModelOrder.SECOND_ORDER.value)
        parser.add_argument('--no-blocks', action='store_true', help="Leave block contrasts out of the model.")

    def run(self, **options):
        design = self.load(options['design'])
        X = model_matrix(design, ModelOrder(options['order']), include_blocks=not options['no_blocks'])
        self.emit(correlation_matrix(X).reset_index())
