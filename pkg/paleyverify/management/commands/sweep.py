from django.core.management.base import BaseCommand

from paleyverify.runner import plan_sweep

from ._options import add_run_options, clean_options, run_and_report


class Command(BaseCommand):
    help = 'Tabulate observed clique sizes and ratios |C|/q for a construction across a grid'

    def add_arguments(self, parser):
        add_run_options(parser)

    def handle(self, *args, **options):
        opts = clean_options(options)
        opts['mode'] = 'sweep'
        jobs = plan_sweep(opts)
        if not jobs:
            self.stderr.write(self.style.WARNING('⊗ Empty grid, nothing to sweep'))
        run_and_report(self, opts, jobs, f'{opts["construction"].upper()} SWEEP SUMMARY:')
