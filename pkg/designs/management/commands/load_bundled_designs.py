from django.core.management.base import BaseCommand

from designs.core import fixture_names, load_fixture
from designs.indicator import wlp
from designs.models import StoredDesign


class Command(BaseCommand):
    help = "Import the bundled designs into the database."

    def handle(self, *args, **options):
        for name in fixture_names():
            design = load_fixture(name)
            _, created = StoredDesign.objects.update_or_create(
                name=name,
                defaults={
                    'source': 'fixture',
                    'wlp': wlp(design).as_dict(),
                    **StoredDesign.fields_for(design),
                },
            )
            self.stdout.write(f"{'Created' if created else 'Updated'} {name}")
