import pandas as pd

from designs.fields import make_field
from designs.latin import coa_set, full_ls_set
from designs.management.base import OofaCommand


class Command(OofaCommand):
    help = "List the ordered Latin-square candidate set for m components."

    def add_options(self, parser):
        parser.add_argument('--m', type=int, required=True, help="Number of components.")
        parser.add_argument('--coa', action='store_true', help="Also report the COA each square belongs to.")

    def run(self, **options):
        m = options['m']
        squares = full_ls_set(make_field(m))
        records = []
        for square in squares:
            for r, row in enumerate(square.cells, start=1):
                record = {'Square': square.index, 'Row': r}
                if options['coa']:
                    record['COA'] = (square.index - 1) // (m - 1) + 1
                record.update({f"C{j}": int(v) for j, v in enumerate(row, start=1)})
                records.append(record)
        if options['coa']:
            bad = [c.index for c in coa_set(squares) if not c.has_pair_coverage()]
            if bad:
                self.stderr.write(f"COAs without full pair coverage: {bad}")
        self.emit(pd.DataFrame(records))
