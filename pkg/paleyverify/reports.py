"""Verdict records emitted by every verifier, with lossless JSON encoding."""
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

PASS = 'pass'
PASS_WITH_ALLOWANCE = 'pass-with-allowance'
FAIL = 'fail'
EMPIRICAL = 'empirical'

VERDICT_CHOICES = [
    (PASS, 'Pass'),
    (PASS_WITH_ALLOWANCE, 'Pass with allowance'),
    (FAIL, 'Fail'),
    (EMPIRICAL, 'Empirical'),
]

OK_VERDICTS = frozenset({PASS, PASS_WITH_ALLOWANCE, EMPIRICAL})

SCHEMA_VERSION = 1
DEFAULT_TOLERANCE = 1e-6

# JSON numbers beyond this lose precision in most readers
JSON_SAFE_INT = 1 << 53

_INT_RE = re.compile(r'^-?\d+$')
_FRACTION_RE = re.compile(r'^-?\d+/\d+$')


def default_tolerance():
    from django.conf import settings
    if settings.configured:
        return getattr(settings, 'PALEY_TOLERANCE', DEFAULT_TOLERANCE)
    return DEFAULT_TOLERANCE


def schema_version():
    from django.conf import settings
    if settings.configured:
        return getattr(settings, 'PALEY_SCHEMA_VERSION', SCHEMA_VERSION)
    return SCHEMA_VERSION


def bound_verdict(deviation, bound, allowance=0, tolerance=None):
    """Compare an exact deviation against a float bound; returns (verdict, slack)"""
    tol = default_tolerance() if tolerance is None else tolerance
    deviation = float(deviation)
    slack = bound - deviation
    if deviation <= bound + tol:
        return PASS, slack
    if allowance and deviation <= bound + allowance + tol:
        return PASS_WITH_ALLOWANCE, slack
    return FAIL, slack


def encode_value(value):
    """Make a value JSON-safe without losing exactness"""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return encode_value(value.numerator)
        return f'{value.numerator}/{value.denominator}'
    if isinstance(value, (int, np.integer)):
        value = int(value)
        return str(value) if abs(value) > JSON_SAFE_INT else value
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, dict):
        return {str(k): encode_value(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return [encode_value(v) for v in sorted(value)]
    if isinstance(value, (list, tuple, np.ndarray)):
        return [encode_value(v) for v in value]
    return value


def decode_exact(value):
    """Inverse of encode_value for the exact-result section"""
    if isinstance(value, str):
        if _INT_RE.match(value):
            return int(value)
        if _FRACTION_RE.match(value):
            return Fraction(value)
        return value
    if isinstance(value, list):
        return [decode_exact(v) for v in value]
    if isinstance(value, dict):
        return {k: decode_exact(v) for k, v in value.items()}
    return value


@dataclass
class VerdictReport:
    """One theorem-instance check: inputs, exact counts, bounds, verdict"""

    task: str
    params: dict = field(default_factory=dict)
    result: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    slack: float | None = None
    verdict: str = PASS
    witness: dict = field(default_factory=dict)
    ms: float = 0.0
    config: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.verdict in OK_VERDICTS

    def merge_verdict(self, verdict):
        """Keep the worst verdict seen so far (fail beats everything else)"""
        rank = {PASS: 0, EMPIRICAL: 1, PASS_WITH_ALLOWANCE: 2, FAIL: 3}
        if rank[verdict] > rank[self.verdict]:
            self.verdict = verdict
        return self.verdict

    def to_dict(self):
        return {
            'schema': schema_version(),
            'task': self.task,
            'config': encode_value(self.config),
            'params': encode_value(self.params),
            'result': encode_value(self.result),
            'bounds': encode_value(self.bounds),
            'slack': None if self.slack is None else float(self.slack),
            'verdict': self.verdict,
            'witness': encode_value(self.witness),
            'ms': round(float(self.ms), 3),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, separators=(',', ':'))

    @classmethod
    def from_dict(cls, data):
        return cls(
            task=data['task'],
            params=decode_exact(data.get('params', {})),
            result=decode_exact(data.get('result', {})),
            bounds=data.get('bounds', {}),
            slack=data.get('slack'),
            verdict=data.get('verdict', PASS),
            witness=decode_exact(data.get('witness', {})),
            ms=data.get('ms', 0.0),
            config=decode_exact(data.get('config', {})),
        )

    @classmethod
    def from_json(cls, line):
        return cls.from_dict(json.loads(line))

    def flat(self):
        """Single-level mapping for CSV output"""
        row = {
            'task': self.task,
            'verdict': self.verdict,
            'slack': '' if self.slack is None else repr(float(self.slack)),
            'ms': round(float(self.ms), 3),
        }
        for section in ('params', 'result', 'bounds'):
            for key, value in encode_value(getattr(self, section)).items():
                if isinstance(value, (list, dict)):
                    value = json.dumps(value, sort_keys=True, separators=(',', ':'))
                row[f'{section}.{key}'] = value
        return row
