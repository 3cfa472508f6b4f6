"""Plan verification jobs for a task, run them on a worker pool, and emit reports.

Job functions are module-level so the process pool can pickle them. Results
are sorted by instance key before they are written, so the worker count never
changes the output.
"""
import csv
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import cliques
from .exceptions import InvalidParameters, SearchExhausted
from .ffield import build_field, prime_powers, split_prime_power, tower_norm_check
from .funcfield import seeded_factor_sets, seeded_orbit_instances, total_multiplicity, verify_thm32, weil_sweep
from .graphs import GP, PEISERT, CayleyView, export_dimacs, induced_subfield_equality, peisert_indicator_check, srg_params
from .prng import derive_seed
from .reports import EMPIRICAL, FAIL, PASS, VerdictReport
from .residues import (
    SystemInstance,
    degenerate_probe,
    seeded_vsets,
    verify_lemma1,
    verify_thm12,
    verify_thm13,
)

logger = logging.getLogger(__name__)

RUN_CONFIG_KEYS = (
    'task', 'mode', 'p', 'e', 'q', 'n', 'd', 'k', 'm', 'b', 'dprime', 'qmin', 'qmax', 'dmax',
    'seed', 'reps', 'ambient_bits', 'max_degree', 'degrees', 'mlist', 'graph', 'construction',
    'degenerate_probe',
)

LEMMA41_CATALOGUE = [(5, 4, 2), (9, 4, 2), (13, 4, 2), (7, 3, 3), (5, 4, 4)]
PROP42_CATALOGUE = [(13, 4, (2, 4)), (5, 4, (2,)), (13, 4, (4, 4))]
THM14_CATALOGUE = [(193, 2, 2), (13, 4, 2), (13, 4, 1)]
THM15_CATALOGUE = [(227, 3), (11, 4), (5, 3), (17, 3), (13, 2)]
SRG_CATALOGUE = [(PEISERT, 49, 4), (GP, 25, 2), (GP, 9, 2), (PEISERT, 81, 4), (GP, 81, 2)]
WEIL_CATALOGUE = [13, 17, 25]
# (p, e, n, b): base F_{p^e}, coefficients F_{q^n}, roots in F_{q^(n b)}
THM32_CATALOGUE = [(3, 1, 1, 2), (3, 1, 2, 2), (5, 1, 2, 1), (5, 1, 2, 2), (7, 1, 1, 3), (2, 2, 1, 3), (13, 1, 1, 2), (3, 2, 1, 2)]
COR35_CATALOGUE = [(5, 1, 2, 1), (5, 1, 2, 2), (3, 1, 2, 2), (3, 1, 3, 1), (2, 1, 3, 2), (7, 1, 2, 1)]
SUBCLAIM_MAX_ORDER = 1 << 12

GRID_DEFAULTS = {
    'lemma1': {'qmax': 1000, 'dmax': 5, 'reps': 200},
    'lemma21': {'qmax': 1 << 16},
    'thm12': {'qmax': 1 << 20, 'dmax': 5, 'reps': 50},
    'thm13': {'qmax': 64, 'dmax': 6, 'reps': 50},
    'thm32': {'dmax': 6, 'reps': 25},
    'cor35': {'dmax': 6, 'reps': 25},
    'thm16': {'qmin': 7, 'qmax': 79},
}


@dataclass(frozen=True)
class Job:
    key: tuple
    func: object
    kwargs: dict = field(default_factory=dict, hash=False)


def aggregate(task, params, reports, config=None):
    """Fold many instance reports into one line: worst verdict, tightest slack, first failure"""
    summary = VerdictReport(task=task, params=params, config=config or {})
    fails = allowances = empirical = 0
    first = None
    for r in reports:
        summary.merge_verdict(r.verdict)
        if r.slack is not None and (summary.slack is None or r.slack < summary.slack):
            summary.slack = r.slack
        if r.verdict == FAIL:
            fails += 1
            first = first or {'params': r.params, 'witness': r.witness, 'result': r.result}
        elif r.verdict == EMPIRICAL:
            empirical += 1
        elif r.verdict != PASS:
            allowances += 1
    summary.result = {
        'instances': len(reports),
        'fails': fails,
        'allowances': allowances,
        'empirical': empirical,
    }
    if first:
        summary.witness = {'first_failure': first}
    if reports and not summary.config:
        summary.config = reports[0].config
    return summary


def _field_for(q, n=1, b=1, ambient_bits=None):
    p, e = split_prime_power(q)
    ctx = build_field(p, e * n * b, ambient_bits=ambient_bits)
    return ctx, ctx.subfield(e)


# ---- residue counting ------------------------------------------------------

def lemma1_job(q, d, k, seed, reps, ambient_bits, grid=False):
    ctx, base = _field_for(q, ambient_bits=ambient_bits)
    reports = []
    for i in range(reps):
        ki = min(1 + i % 4, q) if grid else k
        inst_seed = derive_seed(seed, q, d, i) if grid else derive_seed(seed, i)
        vs = next(seeded_vsets(ctx, base, 1, ki, inst_seed, 1))
        report = verify_lemma1(SystemInstance(ctx, base, 1, d, vs))
        report.params.update(seed=seed, rep=i)
        reports.append(report)
    if grid:
        return [aggregate('lemma1', {'q': q, 'd': d, 'seed': seed}, reports)]
    return reports


def lemma21_job(p, E, ambient_bits):
    return [tower_norm_check(build_field(p, E, ambient_bits=ambient_bits))]


def thm12_job(q, n, d, k, seed, reps, ambient_bits, grid=False, probe=False):
    ctx, base = _field_for(q, n, ambient_bits=ambient_bits)
    if probe:
        report = verify_thm12(degenerate_probe(ctx, base, d))
        report.params['probe'] = True
        return [report]
    reports = []
    for i in range(reps):
        ki = min(1 + i % 4, q) if grid else k
        vs = next(seeded_vsets(ctx, base, n, ki, derive_seed(seed, q, n, d, i), 1))
        report = verify_thm12(SystemInstance(ctx, base, n, d, vs))
        report.params.update(seed=seed, rep=i)
        reports.append(report)
    if grid:
        return [aggregate('thm12', {'q': q, 'n': n, 'd': d, 'seed': seed}, reports)]
    return reports


def thm13_job(q, d, k, seed, reps, ambient_bits, grid=False):
    ctx, base = _field_for(q, 2, ambient_bits=ambient_bits)
    orbits = (q * q - q) // 2
    reports = []
    for i in range(reps):
        ki = min(1 + i % 3, orbits) if grid else k
        vs = next(seeded_vsets(ctx, base, 2, ki, derive_seed(seed, q, d, i), 1, outside_base=True))
        report = verify_thm13(SystemInstance(ctx, base, 2, d, vs))
        report.params.update(seed=seed, rep=i)
        reports.append(report)
    if grid:
        return [aggregate('thm13', {'q': q, 'd': d, 'seed': seed}, reports)]
    return reports


# ---- function-field sums ---------------------------------------------------

def thm32_job(q, n, b, d, k, seed, reps, ambient_bits, grid=False):
    ctx, base = _field_for(q, n, b, ambient_bits=ambient_bits)
    coef = ctx.subfield(base.e * n)
    reports = []
    for i in range(reps):
        ki = 1 + i % 3 if grid else k
        draw = next(seeded_factor_sets(ctx, base, coef, d, ki, derive_seed(seed, q, n, b, d, i), 1), None)
        if draw is None:
            continue
        report = verify_thm32(*draw)
        report.params.update(seed=seed, rep=i)
        reports.append(report)
    if grid:
        return [aggregate('thm32', {'q': q, 'n': n, 'b': b, 'd': d, 'seed': seed}, reports)]
    return reports


def cor35_job(q, n, b, d, seed, reps, ambient_bits, grid=False):
    ctx, base = _field_for(q, n, b, ambient_bits=ambient_bits)
    coef = ctx.subfield(base.e * n)
    reports = []
    for i, (factored, chi) in enumerate(seeded_orbit_instances(ctx, base, coef, d, derive_seed(seed, q, n, b, d), reps)):
        _, report = total_multiplicity(factored, chi)
        report.params.update(seed=seed, rep=i)
        reports.append(report)
    if grid:
        return [aggregate('cor35', {'q': q, 'n': n, 'b': b, 'd': d, 'seed': seed}, reports)]
    return reports


def weil_job(q, max_degree, ambient_bits):
    ctx, base = _field_for(q, ambient_bits=ambient_bits)
    return [weil_sweep(ctx, base, max_degree=max_degree)]


# ---- graphs and cliques ----------------------------------------------------

def lemma41_job(q, d, dprime, ambient_bits):
    return [induced_subfield_equality(q, d, dprime, ambient_bits=ambient_bits)]


def _certified(cert, task, params):
    report = cert.to_report(task, params)
    recheck = cliques.recheck_certificate(cert)
    report.result['recheck'] = recheck
    if not recheck:
        report.verdict = FAIL
    return report


def _exhausted(task, params, err, in_regime):
    return VerdictReport(
        task=task,
        params=params,
        result={'search_exhausted': True, 'in_regime': in_regime},
        verdict=FAIL if in_regime else EMPIRICAL,
        witness={'error': str(err)},
    )


def prop42_job(q, d, degrees, ambient_bits):
    params = {'q': q, 'd': d, 'degrees': list(degrees)}
    try:
        _, cert = cliques.prop42_clique(q, d, degrees, ambient_bits=ambient_bits)
    except SearchExhausted as err:
        return [_exhausted('prop42', params, err, cliques.prop42_threshold(q, d, len(degrees))[0])]
    return [_certified(cert, 'prop42', params)]


def thm14_job(q, d, m, ambient_bits):
    params = {'q': q, 'd': d, 'm': m}
    try:
        cert = cliques.thm14_construct(q, d, m, ambient_bits=ambient_bits)
    except SearchExhausted as err:
        return [_exhausted('thm14', params, err, cliques.thm14_regime(q, d, m))]
    return [_certified(cert, 'thm14', params)]


def thm15_job(q, d, reps, ambient_bits):
    ctx, base = _field_for(q, 2, ambient_bits=ambient_bits)
    setup = (ctx, base, CayleyView(ctx, GP, d))
    reports = []
    for u in cliques.coset_representatives(ctx, base, reps):
        cert = cliques.fq_alpha_gp(q, d, u, setup=setup)
        reports.append(_certified(cert, 'thm15', {'q': q, 'd': d, 'u': u}))
    if ctx.order <= SUBCLAIM_MAX_ORDER:
        reports.append(cliques.thm15_subclaims(q, d, setup=setup))
    return reports


def thm16_job(q, reps, ambient_bits):
    ctx, base = _field_for(q, 2, ambient_bits=ambient_bits)
    setup = (ctx, base, CayleyView(ctx, PEISERT, 4))
    paley = (ctx, base, CayleyView(ctx, GP, 2))
    us = cliques.coset_representatives(ctx, base, reps)
    table = cliques.outside_neighborhoods(setup[2], base)
    reports = []
    sizes = set()
    max_common = 0
    paley_extends = True
    for u in us:
        cert = cliques.fq_alpha_peisert(q, u, setup=setup, table=table)
        max_common = max(max_common, cert.data['max_common'])
        sizes.add(cert.size)
        reports.append(_certified(cert, 'thm16', {'q': q, 'u': u}))
        paley_extends &= cliques.paley_comparison(q, u, setup=paley)
    indicator = peisert_indicator_check(setup[2])
    reports.append(indicator)
    summary = aggregate('thm16', {'q': q}, reports)
    summary.result.update({
        'representatives': len(us),
        'sizes': sorted(sizes),
        'max_common': max_common,
        'pairs_per_u': len(table[0]) - 2,
        'expected_size': (q + 1) // 2,
        'indicator_failures': indicator.result['failures'],
        'paley_clique_extends': paley_extends,
    })
    if not paley_extends:
        summary.verdict = FAIL
    return [summary]


def srg_job(kind, order, d, ambient_bits, export=None):
    p, e = split_prime_power(order)
    ctx = build_field(p, e, ambient_bits=ambient_bits)
    view = CayleyView(ctx, kind, d)
    _, report = srg_params(view)
    if export:
        report.result['dimacs_edges'] = export_dimacs(view, export)
    return [report]


# ---- sweeps ------------------------------------------------------------------

def _sweep_row(params, cert, q):
    size = cert.size
    return VerdictReport(
        task='sweep',
        params=params,
        result={'size': size, 'ratio': Fraction(size, q), 'ratio_float': size / q,
                'is_clique': cert.is_clique, 'is_maximal': cert.is_maximal},
        verdict=FAIL if not cert.is_clique else EMPIRICAL,
        config={'field': cert.view.ctx.describe()},
    )


def sweep_fq_alpha_job(q, d, reps, ambient_bits):
    ctx, base = _field_for(q, 2, ambient_bits=ambient_bits)
    setup = (ctx, base, CayleyView(ctx, GP, d))
    return [
        _sweep_row({'construction': 'fq-alpha', 'q': q, 'd': d, 'u': u}, cliques.fq_alpha_gp(q, d, u, setup=setup), q)
        for u in cliques.coset_representatives(ctx, base, reps)
    ]


def sweep_thm14_job(q, d, m, ambient_bits):
    params = {'construction': 'thm14', 'q': q, 'd': d, 'm': m}
    try:
        cert = cliques.thm14_construct(q, d, m, ambient_bits=ambient_bits)
    except SearchExhausted as err:
        return [_exhausted('sweep', params, err, False)]
    return [_sweep_row(params, cert, q)]


# ---- planning ----------------------------------------------------------------

def _opt(opts, name, task=None, default=None):
    value = opts.get(name)
    if value in (None, []):
        value = GRID_DEFAULTS.get(task, {}).get(name, default)
    return value


def _divisors(n, low, high):
    return [d for d in range(low, high + 1) if n % d == 0]


def plan(task, opts):
    """Jobs for one verify task, already keyed for canonical output order"""
    bits = opts['ambient_bits']
    seed = opts['seed']
    single = opts.get('mode') == 'single'
    q = opts.get('q')
    jobs = []

    if task == 'lemma1':
        if single:
            return [Job((q, opts['d']), lemma1_job, dict(q=q, d=opts['d'], k=_opt(opts, 'k', default=1), seed=seed,
                                                       reps=_opt(opts, 'reps', default=1), ambient_bits=bits))]
        for qq in prime_powers(3, _opt(opts, 'qmax', task)):
            for d in _divisors(qq - 1, 2, _opt(opts, 'dmax', task)):
                jobs.append(Job((qq, d), lemma1_job, dict(q=qq, d=d, k=None, seed=seed, reps=_opt(opts, 'reps', task),
                                                          ambient_bits=bits, grid=True)))
    elif task == 'lemma21':
        if single:
            return [Job((q,), lemma21_job, dict(p=opts['p'], E=opts['e'], ambient_bits=bits))]
        for qq in prime_powers(2, _opt(opts, 'qmax', task)):
            p, E = split_prime_power(qq)
            jobs.append(Job((qq,), lemma21_job, dict(p=p, E=E, ambient_bits=bits)))
    elif task == 'weil':
        for qq in ([q] if single else WEIL_CATALOGUE):
            jobs.append(Job((qq,), weil_job, dict(q=qq, max_degree=_opt(opts, 'max_degree', default=3), ambient_bits=bits)))
    elif task == 'thm12':
        if single:
            n, d = opts['n'], opts['d']
            return [Job((q, n, d), thm12_job, dict(q=q, n=n, d=d, k=_opt(opts, 'k', default=1), seed=seed,
                                                   reps=_opt(opts, 'reps', default=1), ambient_bits=bits,
                                                   probe=bool(opts.get('degenerate_probe'))))]
        limit = _opt(opts, 'qmax', task)
        for qq in prime_powers(3, limit):
            for d in _divisors(qq - 1, 2, _opt(opts, 'dmax', task)):
                n = 1
                while qq ** n <= limit:
                    jobs.append(Job((qq, n, d, 0), thm12_job, dict(q=qq, n=n, d=d, k=None, seed=seed,
                                                                   reps=_opt(opts, 'reps', task), ambient_bits=bits, grid=True)))
                    n += 1
                if qq ** d <= limit:
                    jobs.append(Job((qq, d, d, 1), thm12_job, dict(q=qq, n=d, d=d, k=1, seed=seed, reps=1,
                                                                   ambient_bits=bits, probe=True)))
    elif task == 'thm13':
        if single:
            return [Job((q, opts['d']), thm13_job, dict(q=q, d=opts['d'], k=_opt(opts, 'k', default=1), seed=seed,
                                                       reps=_opt(opts, 'reps', default=1), ambient_bits=bits))]
        for qq in prime_powers(2, _opt(opts, 'qmax', task)):
            for d in _divisors(qq * qq - 1, 2, _opt(opts, 'dmax', task)):
                jobs.append(Job((qq, d), thm13_job, dict(q=qq, d=d, k=None, seed=seed, reps=_opt(opts, 'reps', task),
                                                         ambient_bits=bits, grid=True)))
    elif task in ('thm32', 'cor35'):
        func = thm32_job if task == 'thm32' else cor35_job
        if single:
            n, d, b = opts['n'], opts['d'], _opt(opts, 'b', default=1)
            kwargs = dict(q=q, n=n, b=b, d=d, seed=seed, reps=_opt(opts, 'reps', default=1), ambient_bits=bits)
            if task == 'thm32':
                kwargs['k'] = _opt(opts, 'k', default=1)
            return [Job((q, n, b, d), func, kwargs)]
        catalogue = THM32_CATALOGUE if task == 'thm32' else COR35_CATALOGUE
        for p, e, n, b in catalogue:
            qq = p ** e
            for d in _divisors(qq ** n - 1, 2, _opt(opts, 'dmax', task)):
                kwargs = dict(q=qq, n=n, b=b, d=d, seed=seed, reps=_opt(opts, 'reps', task), ambient_bits=bits, grid=True)
                if task == 'thm32':
                    kwargs['k'] = None
                jobs.append(Job((qq, n, b, d), func, kwargs))
    elif task == 'lemma41':
        rows = [(q, opts['d'], opts['dprime'])] if single else LEMMA41_CATALOGUE
        for qq, d, dp in rows:
            jobs.append(Job((qq, d, dp), lemma41_job, dict(q=qq, d=d, dprime=dp, ambient_bits=bits)))
    elif task == 'prop42':
        rows = [(q, opts['d'], tuple(opts['degrees']))] if single else PROP42_CATALOGUE
        for qq, d, degrees in rows:
            jobs.append(Job((qq, d, degrees), prop42_job, dict(q=qq, d=d, degrees=degrees, ambient_bits=bits)))
    elif task == 'thm14':
        rows = [(q, opts['d'], opts['m'])] if single else THM14_CATALOGUE
        for qq, d, m in rows:
            jobs.append(Job((qq, d, m), thm14_job, dict(q=qq, d=d, m=m, ambient_bits=bits)))
    elif task == 'thm15':
        rows = [(q, opts['d'])] if single else THM15_CATALOGUE
        reps = _opt(opts, 'reps', default=cliques.representatives_cap())
        for qq, d in rows:
            jobs.append(Job((qq, d), thm15_job, dict(q=qq, d=d, reps=reps, ambient_bits=bits)))
    elif task == 'thm16':
        reps = _opt(opts, 'reps', default=cliques.representatives_cap())
        if single:
            if q % 4 != 3 or q < 7:
                raise InvalidParameters(f'Peisert cliques need q = 3 mod 4 and q >= 7, got {q}')
            candidates = [q]
        else:
            candidates = prime_powers(_opt(opts, 'qmin', task), _opt(opts, 'qmax', task))
        for qq in candidates:
            if qq % 4 == 3 and qq >= 7:
                jobs.append(Job((qq,), thm16_job, dict(q=qq, reps=reps, ambient_bits=bits)))
    elif task == 'srg':
        if single:
            kind = opts['graph']
            rows = [(kind, q, 4 if kind == PEISERT else _opt(opts, 'd', default=2))]
        else:
            rows = SRG_CATALOGUE
        for kind, order, d in rows:
            jobs.append(Job((kind, order, d), srg_job, dict(kind=kind, order=order, d=d, ambient_bits=bits,
                                                            export=opts.get('export_dimacs') if single else None)))
    if single and not jobs:
        raise InvalidParameters(f'no {task} instance for the given parameters')
    logger.info('planned %s %s job(s) for %s', len(jobs), 'single' if single else 'grid', task)
    return jobs


def plan_sweep(opts):
    bits = opts['ambient_bits']
    d = _opt(opts, 'd', default=2)
    jobs = []
    if opts['construction'] == 'thm14':
        q = opts.get('q')
        if q is None:
            return jobs
        for m in opts.get('mlist') or [1]:
            jobs.append(Job((q, d, m), sweep_thm14_job, dict(q=q, d=d, m=m, ambient_bits=bits)))
        return jobs
    if opts.get('q') is not None:
        qs = [opts['q']]
    elif opts.get('qmin') is not None or opts.get('qmax') is not None:
        qs = prime_powers(_opt(opts, 'qmin', default=3), _opt(opts, 'qmax', default=61))
    else:
        qs = []
    for q in qs:
        if q % 2 and (q + 1) % d == 0:
            jobs.append(Job((q, d), sweep_fq_alpha_job, dict(q=q, d=d, reps=_opt(opts, 'reps', default=1), ambient_bits=bits)))
    return jobs


def run_job(job):
    started = time.perf_counter()
    reports = job.func(**job.kwargs)
    elapsed = (time.perf_counter() - started) * 1000
    for report in reports:
        report.ms = elapsed / max(len(reports), 1)
    return job.key, reports


def execute(jobs, workers=1, run_config=None):
    """Run every job and return the reports in canonical key order"""
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_job, jobs))
    else:
        results = [run_job(job) for job in jobs]
    results.sort(key=lambda item: item[0])
    reports = []
    for _, batch in results:
        for report in batch:
            report.config = dict(report.config, run=run_config or {})
            reports.append(report)
    return reports


def run_config(opts):
    return {name: opts[name] for name in RUN_CONFIG_KEYS if opts.get(name) not in (None, [], '', False)}


def write_json(reports, stream):
    for report in reports:
        stream.write(report.to_json() + '\n')


def write_csv(reports, stream):
    rows = [report.flat() for report in reports]
    header = []
    for row in rows:
        for key in row:
            if key not in header:
                header.append(key)
    writer = csv.DictWriter(stream, fieldnames=header, lineterminator='\n')
    if header:
        writer.writeheader()
    for row in rows:
        writer.writerow(row)


def summarize(reports):
    counts = {PASS: 0, EMPIRICAL: 0, FAIL: 0}
    other = 0
    for r in reports:
        if r.verdict in counts:
            counts[r.verdict] += 1
        else:
            other += 1
    return {'total': len(reports), 'pass': counts[PASS], 'allowance': other,
            'empirical': counts[EMPIRICAL], 'fail': counts[FAIL]}
