import pandas as pd

from designs.indicator import evaluate, spectrum, words_frame
from designs.management.base import OofaCommand


class Command(OofaCommand):
    help = "Indicator-function words of a design, or F evaluated at a point."

    def add_options(self, parser):
        parser.add_argument('--design', required=True, help="Design CSV path or bundled design name.")
        parser.add_argument(
            '--point', nargs='+', type=int,
            help="Evaluate F at this point: positions z_1..z_m, then b for blocked designs.",
        )

    def run(self, **options):
        spec = spectrum(self.load(options['design']))
        if options['point']:
            value = evaluate(spec, options['point'])
            self.emit(pd.DataFrame([{'point': ' '.join(map(str, options['point'])), 'F': value}]))
            return
        self.emit(words_frame(spec))
