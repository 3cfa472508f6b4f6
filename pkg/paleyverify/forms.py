from django import forms
from django.conf import settings
from django.core.exceptions import ValidationError
from sympy import isprime

from .exceptions import InvalidParameters
from .ffield import split_prime_power
from .graphs import GRAPH_CHOICES

TASK_CHOICES = [
    ('lemma1', 'Residue count in one field'),
    ('lemma21', 'Norm reduction of d-th powers'),
    ('weil', 'Weil bound sweep'),
    ('thm12', 'Residue count over shifted subfields'),
    ('thm13', 'Residue count in quadratic extensions'),
    ('thm32', 'Dirichlet character sums'),
    ('cor35', 'Total multiplicity collapse'),
    ('lemma41', 'Induced subfield subgraphs'),
    ('prop42', 'Cliques with prescribed degrees'),
    ('thm14', 'D and D\' maximal cliques'),
    ('thm15', '(F_q, alpha) cliques in GP(q^2, d)'),
    ('thm16', '(F_q, alpha) cliques in Peisert graphs'),
    ('srg', 'Strongly regular parameters'),
]

FORMAT_CHOICES = [
    ('json', 'JSON Lines'),
    ('csv', 'CSV'),
]

CONSTRUCTION_CHOICES = [
    ('fq-alpha', '(F_q, alpha) construction'),
    ('thm14', 'D and D\' construction'),
]

# parameters a task needs before it runs a single instance instead of its grid
SINGLE_REQUIREMENTS = {
    'lemma1': ('q', 'd'),
    'lemma21': ('q',),
    'weil': ('q',),
    'thm12': ('q', 'n', 'd'),
    'thm13': ('q', 'd'),
    'thm32': ('q', 'n', 'd'),
    'cor35': ('q', 'n', 'd'),
    'lemma41': ('q', 'd', 'dprime'),
    'prop42': ('q', 'd', 'degrees'),
    'thm14': ('q', 'd', 'm'),
    'thm15': ('q', 'd'),
    'thm16': ('q',),
    'srg': ('q',),
}


def _int_list(value, label):
    if not value:
        return []
    try:
        items = [int(x) for x in str(value).replace(' ', '').split(',') if x]
    except ValueError:
        raise ValidationError(f'{label} must be a comma-separated list of integers')
    if any(x < 1 for x in items):
        raise ValidationError(f'{label} entries must be positive')
    return items


class RunConfigForm(forms.Form):
    task = forms.ChoiceField(choices=TASK_CHOICES, required=False)
    p = forms.IntegerField(required=False, min_value=2)
    e = forms.IntegerField(required=False, min_value=1)
    q = forms.IntegerField(required=False, min_value=2)
    n = forms.IntegerField(required=False, min_value=1)
    d = forms.IntegerField(required=False, min_value=1)
    k = forms.IntegerField(required=False, min_value=0)
    m = forms.IntegerField(required=False, min_value=1)
    b = forms.IntegerField(required=False, min_value=1)
    dprime = forms.IntegerField(required=False, min_value=1)
    qmin = forms.IntegerField(required=False, min_value=2)
    qmax = forms.IntegerField(required=False, min_value=2)
    dmax = forms.IntegerField(required=False, min_value=2)
    seed = forms.IntegerField(required=False, min_value=0)
    reps = forms.IntegerField(required=False, min_value=1)
    ambient_bits = forms.IntegerField(required=False, min_value=1, max_value=40)
    jobs = forms.IntegerField(required=False, min_value=1)
    max_degree = forms.IntegerField(required=False, min_value=1, max_value=6)
    degrees = forms.CharField(required=False)
    mlist = forms.CharField(required=False)
    graph = forms.ChoiceField(choices=GRAPH_CHOICES, required=False)
    construction = forms.ChoiceField(choices=CONSTRUCTION_CHOICES, required=False)
    format = forms.ChoiceField(choices=FORMAT_CHOICES, required=False)
    degenerate_probe = forms.BooleanField(required=False)
    export_dimacs = forms.CharField(required=False)

    def clean_p(self):
        """Check the characteristic is prime"""
        p = self.cleaned_data.get('p')
        if p is not None and not isprime(p):
            raise ValidationError(f'{p} is not prime')
        return p

    def clean_q(self):
        q = self.cleaned_data.get('q')
        if q is not None:
            try:
                split_prime_power(q)
            except InvalidParameters as err:
                raise ValidationError(str(err))
        return q

    def clean_degrees(self):
        return _int_list(self.cleaned_data.get('degrees'), 'degrees')

    def clean_mlist(self):
        return _int_list(self.cleaned_data.get('mlist'), 'mlist')

    def clean(self):
        """Resolve q from p and e, fill defaults, and pick single-instance or grid mode"""
        cleaned = super().clean()
        p, e, q = cleaned.get('p'), cleaned.get('e'), cleaned.get('q')

        if p is not None:
            from_pe = p ** (e or 1)
            if q is not None and q != from_pe:
                raise ValidationError(f'--q {q} disagrees with --p {p} --e {e or 1}')
            q = from_pe
        if q is not None:
            p, e = split_prime_power(q)
        cleaned.update(p=p, e=e, q=q)

        cleaned['seed'] = settings.PALEY_DEFAULT_SEED if cleaned.get('seed') is None else cleaned['seed']
        cleaned['ambient_bits'] = cleaned.get('ambient_bits') or settings.PALEY_AMBIENT_BITS
        cleaned['jobs'] = cleaned.get('jobs') or settings.PALEY_JOBS
        cleaned['format'] = cleaned.get('format') or 'json'
        cleaned['graph'] = cleaned.get('graph') or 'gp'
        cleaned['construction'] = cleaned.get('construction') or 'fq-alpha'

        qmin, qmax = cleaned.get('qmin'), cleaned.get('qmax')
        if qmin is not None and qmax is not None and qmin > qmax:
            raise ValidationError('--qmin must not exceed --qmax')

        task = cleaned.get('task')
        if task == 'thm12' and cleaned.get('degenerate_probe'):
            d = cleaned.get('d')
            if d is None or d < 2:
                raise ValidationError('--degenerate-probe needs --d of at least 2')
            if cleaned.get('n') not in (None, d):
                raise ValidationError('--degenerate-probe runs with n = d')
            cleaned['n'] = d
        if task:
            needed = SINGLE_REQUIREMENTS[task]
            given = [name for name in needed if cleaned.get(name) not in (None, [])]
            if given and len(given) < len(needed):
                missing = ', '.join(f'--{name}' for name in needed if name not in given)
                raise ValidationError(f'{task} needs {missing} for a single instance')
            cleaned['mode'] = 'single' if given else 'grid'
        return cleaned

    def error_text(self):
        lines = []
        for name, errors in self.errors.items():
            label = 'config' if name == '__all__' else f'--{name.replace("_", "-")}'
            lines.extend(f'{label}: {msg}' for msg in errors)
        return '; '.join(lines)
