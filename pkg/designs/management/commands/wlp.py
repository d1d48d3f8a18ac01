from designs.indicator import streaming_wlp, wlp
from designs.management.base import OofaCommand


class Command(OofaCommand):
    help = "Word-length pattern of a design (pure and mixed entries for blocked designs)."

    def add_options(self, parser):
        parser.add_argument('--design', required=True, help="Design CSV path or bundled design name.")
        parser.add_argument('--streaming', action='store_true', help="Use pairwise kernels instead of the dense spectrum.")

    def run(self, **options):
        design = self.load(options['design'])
        pattern = streaming_wlp(design) if options['streaming'] else wlp(design)
        self.emit(pattern.to_frame())
