from io import StringIO

from django.core.management.base import CommandError

from paleyverify.exceptions import PaleyError
from paleyverify.forms import RunConfigForm
from paleyverify.reports import FAIL
from paleyverify.runner import execute, run_config, summarize, write_csv, write_json

INT_FLAGS = ('p', 'e', 'q', 'n', 'd', 'k', 'm', 'b', 'dprime', 'qmin', 'qmax', 'dmax',
             'seed', 'reps', 'jobs', 'max_degree')


def add_run_options(parser):
    """Flags shared by verify and sweep; values are validated by RunConfigForm"""
    for name in INT_FLAGS:
        parser.add_argument(f'--{name.replace("_", "-")}', dest=name, type=int)
    parser.add_argument('--ambient-bits', dest='ambient_bits', type=int,
                        help='cap on the ambient field size as a power of two (default 24)')
    parser.add_argument('--degrees', help='comma-separated degree chain for prop42')
    parser.add_argument('--mlist', help='comma-separated m values for the thm14 sweep')
    parser.add_argument('--graph', choices=['gp', 'peisert'])
    parser.add_argument('--construction', choices=['fq-alpha', 'thm14'])
    parser.add_argument('--format', dest='format', choices=['json', 'csv'])
    parser.add_argument('--degenerate-probe', dest='degenerate_probe', action='store_true')
    parser.add_argument('--export-dimacs', dest='export_dimacs', metavar='PATH')


def clean_options(options, task=None):
    names = INT_FLAGS + ('ambient_bits', 'degrees', 'mlist', 'graph', 'construction', 'format',
                         'degenerate_probe', 'export_dimacs')
    data = {name: options[name] for name in names if options.get(name) is not None and options.get(name) is not False}
    if task:
        data['task'] = task
    form = RunConfigForm(data=data)
    if not form.is_valid():
        raise CommandError(form.error_text(), returncode=2)
    return form.cleaned_data


def run_and_report(command, opts, jobs, title):
    """Execute ``jobs``, write the report stream to stdout and a summary to stderr"""
    try:
        reports = execute(jobs, workers=opts['jobs'], run_config=run_config(opts))
    except PaleyError as err:
        raise CommandError(f'{type(err).__name__}: {err}', returncode=err.exit_code)

    if opts['format'] == 'csv':
        buf = StringIO()
        write_csv(reports, buf)
        command.stdout.write(buf.getvalue(), ending='')
    else:
        buf = StringIO()
        write_json(reports, buf)
        command.stdout.write(buf.getvalue(), ending='')

    counts = summarize(reports)
    err = command.stderr
    err.write('=' * 60, style_func=command.style.WARNING)
    err.write(f'📊 {title}', style_func=command.style.SUCCESS)
    err.write('=' * 60, style_func=command.style.WARNING)
    err.write(f'  • Reports:              {counts["total"]}', style_func=str)
    err.write(f'  • Pass:                 {counts["pass"]}', style_func=str)
    err.write(f'  • Pass with allowance:  {counts["allowance"]}', style_func=str)
    err.write(f'  • Empirical:            {counts["empirical"]}', style_func=str)
    err.write(f'  • Fail:                 {counts["fail"]}', style_func=str)
    err.write('=' * 60, style_func=command.style.WARNING)

    if counts['fail']:
        first = next(r for r in reports if r.verdict == FAIL)
        raise CommandError(f'{counts["fail"]} report(s) failed, first: {first.task} {first.params}', returncode=1)
    err.write(f'✅ All {counts["total"]} report(s) passed or are empirical', style_func=command.style.SUCCESS)
    return reports
