import json
import logging

import pandas as pd
from django.core.management.base import BaseCommand, CommandError

from designs.core import load_design
from designs.exceptions import DesignValidationError, OofaError, ParseError
from designs.utils import default_seed, default_threads, oofa_setting


class OofaCommand(BaseCommand):
    """
    Shared flags and error handling for the design commands. Subclasses add
    their own arguments in add_options() and do their work in run().
    """

    def get_version(self):
        return (
            f"blockoofa {oofa_setting('TOOL_VERSION', '1.0.0')} "
            f"(format {oofa_setting('FORMAT_VERSION', '1')})"
        )

    def add_arguments(self, parser):
        parser.add_argument('--json', action='store_true', help="Emit output as a single JSON document.")
        parser.add_argument('--output', help="Write the output to this file instead of stdout.")
        parser.add_argument(
            '--threads', type=int, default=None,
            help="Worker processes (defaults to OOFA_THREADS, else 1).",
        )
        self.add_options(parser)

    def add_options(self, parser):
        pass

    def add_seed_argument(self, parser):
        parser.add_argument(
            '--seed', type=int, default=default_seed(),
            help=f"Random seed (default {default_seed()}).",
        )

    def handle(self, *args, **options):
        if options['verbosity'] >= 2:
            logging.getLogger('designs').setLevel(logging.DEBUG)
        self.options = options
        self.threads = options['threads'] or default_threads()
        try:
            self.run(**options)
        except (ParseError, DesignValidationError) as exc:
            raise CommandError(str(exc), returncode=1)
        except OofaError as exc:
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=2)

    def run(self, **options):
        raise NotImplementedError('subclasses of OofaCommand must provide a run() method')

    def load(self, reference, m=None):
        return load_design(reference, m=m)

    def emit(self, tables):
        """Write one or more named DataFrames as CSV (sections) or one JSON document."""
        if isinstance(tables, pd.DataFrame):
            tables = {'result': tables}
        if self.options['json']:
            document = {
                name: json.loads(frame.to_json(orient='records', double_precision=15))
                for name, frame in tables.items()
            }
            if len(document) == 1:
                document = next(iter(document.values()))
            text = json.dumps(document, indent=2) + '\n'
        elif len(tables) == 1:
            text = next(iter(tables.values())).to_csv(index=False, lineterminator='\n')
        else:
            text = '\n'.join(
                f"# {name}\n" + frame.to_csv(index=False, lineterminator='\n')
                for name, frame in tables.items()
            )

        if self.options['output']:
            with open(self.options['output'], 'w', encoding='utf-8', newline='') as handle:
                handle.write(text)
        else:
            self.stdout.write(text, ending='')
