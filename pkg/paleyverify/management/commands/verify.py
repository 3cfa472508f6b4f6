from django.core.management.base import BaseCommand, CommandError

from paleyverify.exceptions import PaleyError
from paleyverify.forms import TASK_CHOICES
from paleyverify.runner import plan

from ._options import add_run_options, clean_options, run_and_report


class Command(BaseCommand):
    help = 'Verify one theorem or lemma on a single instance or on its acceptance grid'

    def add_arguments(self, parser):
        parser.add_argument('task', choices=[name for name, _ in TASK_CHOICES])
        add_run_options(parser)

    def handle(self, *args, **options):
        task = options['task']
        opts = clean_options(options, task=task)
        try:
            jobs = plan(task, opts)
        except PaleyError as err:
            raise CommandError(f'{type(err).__name__}: {err}', returncode=err.exit_code)
        self.stderr.write(f'Planned {len(jobs)} {opts["mode"]} job(s) for {task}...', style_func=str)
        run_and_report(self, opts, jobs, f'{task.upper()} SUMMARY:')
