from designs.constructor import SearchBudget, construct
from designs.core import design_frame, write_csv
from designs.management.base import OofaCommand
from designs.models import StoredDesign


class Command(OofaCommand):
    help = "Construct a blocked OofA design by COA stacking and Latin-square/row exchange."

    def add_options(self, parser):
        parser.add_argument('--m', type=int, required=True, help="Number of components.")
        parser.add_argument('--k', type=int, required=True, help="Number of blocks.")
        parser.add_argument('--block-size', type=int, required=True, help="Runs per block (n_B).")
        parser.add_argument('--i1', type=int, default=None, help="Restarts (default from settings).")
        parser.add_argument('--i2', type=int, default=None, help="Latin-square exchanges per restart.")
        parser.add_argument('--i3', type=int, default=None, help="Row exchanges per restart.")
        self.add_seed_argument(parser)
        parser.add_argument('--out', help="Write the design CSV here.")
        parser.add_argument('--report', help="Write the word-length pattern CSV here.")
        parser.add_argument('--save', metavar='NAME', help="Store the design in the database under NAME.")

    def run(self, **options):
        budget = SearchBudget.from_settings(
            restarts=options['i1'],
            ls_exchanges=options['i2'],
            row_exchanges=options['i3'],
            seed=options['seed'],
        )
        result = construct(options['m'], options['k'], options['block_size'], budget, threads=self.threads)

        if options['report']:
            result.wlp.to_frame().to_csv(options['report'], index=False, lineterminator='\n')
        if options['save']:
            StoredDesign.objects.update_or_create(
                name=options['save'],
                defaults={
                    'source': 'constructed',
                    'seed': result.seed,
                    'wlp': result.wlp.as_dict(),
                    'provenance': [entry.as_dict() for entry in result.provenance],
                    **StoredDesign.fields_for(result.design),
                },
            )
            if options['verbosity'] >= 1:
                self.stderr.write(f"Saved design {options['save']}")

        if options['out']:
            write_csv(result.design, options['out'])
        else:
            self.emit(design_frame(result.design))
