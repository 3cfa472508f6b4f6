"""Finite fields F_{p^E} in index (discrete-log) representation.

An element is either ``ZERO`` or an index k in [0, p^E - 2] standing for g^k,
where g is the field's deterministic primitive element. Addition goes through
a Zech table, everything else is modular arithmetic on indices, which is the
form in which subfields, norms, Frobenius and d-th powers are all expressed.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import factorint, isprime, primerange
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_add_ground, gf_irreducible_p, gf_pow_mod, gf_strip

from .exceptions import (
    AmbientTooLarge,
    DivisionByZero,
    InvalidParameters,
    InvalidSubfieldDegree,
    NotInSubfield,
    NotPrime,
    OrderMismatch,
)
from .reports import FAIL, PASS, VerdictReport

logger = logging.getLogger(__name__)

ZERO = -1
ZECH_NONE = -1
DEFAULT_AMBIENT_BITS = 24
ZECH_EXHAUSTIVE_LIMIT = 1 << 16
ZECH_SAMPLE = 64
POWER_BLOCK = 1 << 16


def default_ambient_bits():
    from django.conf import settings
    if settings.configured:
        return getattr(settings, 'PALEY_AMBIENT_BITS', DEFAULT_AMBIENT_BITS)
    return DEFAULT_AMBIENT_BITS


@dataclass(frozen=True)
class SubfieldHandle:
    """The subfield of size p^e inside an ambient field"""

    e: int
    size: int
    cofactor: int

    @property
    def group_order(self):
        return self.size - 1


def _digits(code, p, width):
    out = []
    for _ in range(width):
        code, r = divmod(code, p)
        out.append(r)
    return out


def _code(digits, p):
    value = 0
    for c in reversed(digits):
        value = value * p + int(c)
    return value


def _to_gf(digits):
    # galoistools wants dense high-to-low coefficient lists
    return gf_strip([ZZ(int(c)) for c in reversed(digits)])


def _find_modulus(p, E):
    """Lexicographically smallest monic irreducible of degree E over F_p"""
    for tail in range(p ** E):
        coeffs = _digits(tail, p, E) + [1]
        if gf_irreducible_p(_to_gf(coeffs), p, ZZ):
            return tuple(coeffs)
    raise RuntimeError(f'no irreducible polynomial of degree {E} over F_{p}')


def _find_generator(modulus, p, E):
    """Smallest element, in the same order, whose multiplicative order is p^E - 1"""
    group = p ** E - 1
    mod_gf = _to_gf(modulus)
    cofactors = [group // r for r in factorint(group)]
    one = [ZZ(1)]
    for code in range(1, p ** E):
        digits = _digits(code, p, E)
        f = _to_gf(digits)
        if all(gf_pow_mod(f, ex, mod_gf, p, ZZ) != one for ex in cofactors):
            return tuple(digits)
    raise RuntimeError(f'no primitive element in F_{p}^{E}')


def _mulmod_rows(rows, factor, modulus, p):
    """Multiply every row polynomial by a fixed polynomial modulo the field modulus"""
    count, E = rows.shape
    prod = np.zeros((count, 2 * E - 1), dtype=np.int64)
    for j, c in enumerate(factor):
        if c:
            prod[:, j:j + E] += rows * int(c)
    prod %= p
    for deg in range(2 * E - 2, E - 1, -1):
        lead = prod[:, deg]
        if lead.any():
            # t^E = -(m_0 + m_1 t + ... + m_{E-1} t^{E-1})
            for k in range(E):
                if modulus[k]:
                    prod[:, deg - E + k] -= lead * int(modulus[k])
            prod[:, deg - E:deg] %= p
        prod[:, deg] = 0
    return prod[:, :E] % p


def _power_rows(generator, modulus, p, E, count):
    """Coefficient rows of g^0 .. g^(count-1), built by doubling"""
    rows = np.zeros((1, E), dtype=np.int64)
    rows[0, 0] = 1
    gen_row = np.array(generator, dtype=np.int64)
    while len(rows) < count:
        step = _mulmod_rows(rows[-1:], gen_row, modulus, p)[0]
        rows = np.vstack([rows, _mulmod_rows(rows, step, modulus, p)])
    return rows[:count]


def _power_codes(generator, modulus, p, E, count, dtype):
    """Codes of g^0 .. g^(count-1); only one block of coefficient rows is alive at a time"""
    block = min(count, POWER_BLOCK)
    rows = _power_rows(generator, modulus, p, E, block)
    weights = np.array([p ** i for i in range(E)], dtype=np.int64)
    codes = np.empty(count, dtype=dtype)
    codes[:block] = rows @ weights
    if block == count:
        return codes
    # multiplication by g^block as an E x E matrix acting on coefficient rows
    g_block = _mulmod_rows(rows[-1:], np.array(generator, dtype=np.int64), modulus, p)[0]
    shift = _mulmod_rows(np.eye(E, dtype=np.int64), g_block, modulus, p)
    exact_float = E * (p - 1) ** 2 < (1 << 53)
    if exact_float:
        rows, shift = rows.astype(np.float64), shift.astype(np.float64)
    for start in range(block, count, block):
        rows = np.fmod(rows @ shift, p) if exact_float else (rows @ shift) % p
        stop = min(start + block, count)
        codes[start:stop] = rows[:stop - start].astype(np.int64) @ weights
    return codes


class FieldCtx:
    """Ambient field F_{p^E} with exp/log/Zech tables; immutable after construction."""

    def __init__(self, p, E, modulus, generator):
        self.p = p
        self.E = E
        self.order = p ** E
        self.group_order = self.order - 1
        self.modulus = modulus
        self.generator = generator

        dtype = np.int32 if self.order < (1 << 31) else np.int64
        exp_codes = _power_codes(generator, modulus, p, E, self.group_order, dtype)
        log = np.full(self.order, ZERO, dtype=dtype)
        log[exp_codes] = np.arange(self.group_order, dtype=dtype)
        if (log[1:] < 0).any():
            raise RuntimeError(f'generator {generator} is not primitive in F_{self.order}')

        low = exp_codes % p
        plus_one = exp_codes - low + (low + 1) % p
        zech = log[plus_one]

        self.exp_codes = exp_codes
        self.log = log
        self.zech = zech
        for table in (self.exp_codes, self.log, self.zech):
            table.setflags(write=False)

        self.ambient = self.subfield(E)
        self._self_check(plus_one)

    # ---- bookkeeping -------------------------------------------------

    def __repr__(self):
        return f'FieldCtx(p={self.p}, E={self.E})'

    @property
    def prime_generator_index(self):
        """Index of the generator of the prime subfield F_p"""
        return 0 if self.p == 2 else self.group_order // (self.p - 1)

    def describe(self):
        return {
            'p': self.p,
            'E': self.E,
            'order': self.order,
            'modulus': list(self.modulus),
            'generator': list(self.generator),
        }

    def _self_check(self, plus_one):
        """Zech consistency: exhaustive on the tables, sampled against sympy arithmetic"""
        zech = self.zech
        vanish = plus_one == 0
        if (vanish != (zech < 0)).any():
            raise RuntimeError('Zech sentinel disagrees with 1 + g^k = 0')
        if self.order <= ZECH_EXHAUSTIVE_LIMIT:
            hits = ~vanish
            if (self.exp_codes[zech[hits]] != plus_one[hits]).any():
                raise RuntimeError('Zech table disagrees with polynomial arithmetic')
        mod_gf = _to_gf(self.modulus)
        gen_gf = _to_gf(self.generator)
        step = max(1, self.group_order // ZECH_SAMPLE)
        for k in range(0, self.group_order, step):
            value = gf_add_ground(gf_pow_mod(gen_gf, k, mod_gf, self.p, ZZ), ZZ(1), self.p, ZZ)
            coeffs = [int(c) for c in reversed(value)] + [0] * self.E
            expected = _code(coeffs[:self.E], self.p)
            got = 0 if zech[k] < 0 else int(self.exp_codes[zech[k]])
            if got != expected:
                raise RuntimeError(f'Zech mismatch at k={k}')

    # ---- subfields ---------------------------------------------------

    def subfield(self, e):
        if e < 1 or self.E % e:
            raise InvalidSubfieldDegree(f'{e} does not divide {self.E}')
        size = self.p ** e
        return SubfieldHandle(e=e, size=size, cofactor=self.group_order // (size - 1))

    def in_subfield(self, x, sub):
        return x == ZERO or x % sub.cofactor == 0

    def check_in(self, x, sub):
        if not self.in_subfield(x, sub):
            raise NotInSubfield(f'g^{x} is not in F_{sub.size}')

    def elements(self, sub=None):
        """ZERO first, then ascending index"""
        sub = sub or self.ambient
        return np.concatenate([
            np.array([ZERO], dtype=np.int64),
            np.arange(0, self.group_order, sub.cofactor, dtype=np.int64),
        ])

    def nonzero_elements(self, sub=None):
        sub = sub or self.ambient
        return np.arange(0, self.group_order, sub.cofactor, dtype=np.int64)

    def subfield_mask(self, arr, sub):
        arr = np.asarray(arr, dtype=np.int64)
        return (arr == ZERO) | (arr % sub.cofactor == 0)

    # ---- conversions -------------------------------------------------

    def from_code(self, code):
        if not 0 <= code < self.order:
            raise InvalidParameters(f'code {code} outside F_{self.order}')
        return ZERO if code == 0 else int(self.log[code])

    def to_code(self, x):
        return 0 if x == ZERO else int(self.exp_codes[x])

    def codes(self, arr):
        arr = np.asarray(arr, dtype=np.int64)
        out = np.zeros(arr.shape, dtype=np.int64)
        nz = arr >= 0
        out[nz] = self.exp_codes[arr[nz]]
        return out

    def from_int(self, n):
        """Image of the integer n in the prime subfield"""
        return self.from_code(n % self.p)

    def from_poly(self, coeffs):
        digits = [int(c) % self.p for c in coeffs]
        if len(digits) > self.E:
            raise InvalidParameters('polynomial representative longer than the extension degree')
        return self.from_code(_code(digits, self.p))

    def to_poly(self, x):
        return _digits(self.to_code(x), self.p, self.E)

    @property
    def one(self):
        return 0

    @property
    def minus_one(self):
        return 0 if self.p == 2 else self.group_order // 2

    # ---- scalar arithmetic -------------------------------------------

    def add(self, a, b):
        if a == ZERO:
            return b
        if b == ZERO:
            return a
        z = int(self.zech[(b - a) % self.group_order])
        if z == ZECH_NONE:
            return ZERO
        return (a + z) % self.group_order

    def neg(self, x):
        if x == ZERO or self.p == 2:
            return x
        return (x + self.group_order // 2) % self.group_order

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == ZERO or b == ZERO:
            return ZERO
        return (a + b) % self.group_order

    def inv(self, x):
        if x == ZERO:
            raise DivisionByZero('inverse of zero')
        return (-x) % self.group_order

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, x, e):
        if x == ZERO:
            if e > 0:
                return ZERO
            if e == 0:
                return self.one
            raise DivisionByZero('negative power of zero')
        return (x * e) % self.group_order

    # ---- array arithmetic --------------------------------------------

    def add_arrays(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        out = np.empty(a.shape, dtype=np.int64)
        za = a < 0
        zb = b < 0
        both = ~za & ~zb
        z = self.zech[(b[both] - a[both]) % self.group_order].astype(np.int64)
        out[both] = np.where(z < 0, ZERO, (a[both] + z) % self.group_order)
        out[za] = b[za]
        only_b = zb & ~za
        out[only_b] = a[only_b]
        return out

    def neg_arrays(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        return np.where(a < 0, ZERO, (a + self.group_order // 2) % self.group_order)

    def sub_arrays(self, a, b):
        return self.add_arrays(a, self.neg_arrays(b))

    def mul_arrays(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return np.where((a < 0) | (b < 0), ZERO, (a + b) % self.group_order)

    def pow_arrays(self, a, e):
        a = np.asarray(a, dtype=np.int64)
        if e < 0 and (a < 0).any():
            raise DivisionByZero('negative power of zero')
        if e == 0:
            return np.zeros(a.shape, dtype=np.int64)
        return np.where(a < 0, ZERO, (a * (e % self.group_order)) % self.group_order)

    # ---- Galois structure --------------------------------------------

    def frobenius(self, x, e):
        """x -> x^(p^e)"""
        if e < 1 or self.E % e:
            raise InvalidSubfieldDegree(f'{e} does not divide {self.E}')
        if x == ZERO:
            return ZERO
        return (x * pow(self.p, e, self.group_order)) % self.group_order

    def frobenius_arrays(self, a, e):
        if e < 1 or self.E % e:
            raise InvalidSubfieldDegree(f'{e} does not divide {self.E}')
        a = np.asarray(a, dtype=np.int64)
        step = pow(self.p, e, self.group_order)
        return np.where(a < 0, ZERO, (a * step) % self.group_order)

    def norm_to(self, x, sub, top):
        """N_{top/sub}(x) = x^((|top| - 1)/(|sub| - 1))"""
        if top.e % sub.e:
            raise InvalidSubfieldDegree(f'F_{sub.size} is not a subfield of F_{top.size}')
        self.check_in(x, top)
        if x == ZERO:
            return ZERO
        exponent = (top.size - 1) // (sub.size - 1)
        return (x * exponent) % self.group_order

    def norm_arrays(self, a, sub, top):
        if top.e % sub.e:
            raise InvalidSubfieldDegree(f'F_{sub.size} is not a subfield of F_{top.size}')
        a = np.asarray(a, dtype=np.int64)
        exponent = (top.size - 1) // (sub.size - 1)
        return np.where(a < 0, ZERO, (a * exponent) % self.group_order)

    def galois_orbit(self, x, base):
        """(x, x^q, x^(q^2), ...) up to the first repeat, q = |base|"""
        if self.E % base.e:
            raise InvalidSubfieldDegree(f'{base.e} does not divide {self.E}')
        if x == ZERO:
            return (ZERO,)
        step = pow(self.p, base.e, self.group_order)
        orbit = [x]
        y = (x * step) % self.group_order
        while y != x:
            orbit.append(y)
            y = (y * step) % self.group_order
        return tuple(orbit)

    def degree_over(self, x, base):
        return len(self.galois_orbit(x, base))

    def galois_conjugates(self, x, base):
        return frozenset(self.galois_orbit(x, base))

    def are_conjugate(self, x, y, base):
        return y in self.galois_conjugates(x, base)

    def degree_mask(self, arr, degree, base):
        """True where the element has exact degree ``degree`` over ``base``"""
        arr = np.asarray(arr, dtype=np.int64)
        target = self.subfield(base.e * degree)
        mask = self.subfield_mask(arr, target)
        for r in factorint(degree):
            mask &= ~self.subfield_mask(arr, self.subfield(base.e * degree // r))
        return mask

    # ---- power residues ----------------------------------------------

    def _check_order(self, d, sub):
        if d < 1 or sub.group_order % d:
            raise OrderMismatch(f'{d} does not divide |F_{sub.size}^*| = {sub.group_order}')

    def dth_power_test(self, x, d, sub=None):
        """True iff x = y^d for a nonzero y in ``sub``; ZERO is never a d-th power"""
        sub = sub or self.ambient
        self._check_order(d, sub)
        self.check_in(x, sub)
        if x == ZERO:
            return False
        return (x // sub.cofactor) % d == 0

    def dth_power_mask(self, arr, d, sub=None):
        sub = sub or self.ambient
        self._check_order(d, sub)
        arr = np.asarray(arr, dtype=np.int64)
        if not self.subfield_mask(arr, sub).all():
            raise NotInSubfield(f'array has entries outside F_{sub.size}')
        return (arr >= 0) & ((arr // sub.cofactor) % d == 0)


@lru_cache(maxsize=8)
def _build_field(p, E):
    modulus = _find_modulus(p, E)
    generator = _find_generator(modulus, p, E)
    logger.debug('building F_%s^%s modulus=%s generator=%s', p, E, modulus, generator)
    return FieldCtx(p, E, modulus, generator)


def build_field(p, E, ambient_bits=None):
    """F_{p^E} with deterministic modulus and primitive element"""
    if not isprime(p):
        raise NotPrime(f'{p} is not prime')
    if E < 1:
        raise InvalidParameters(f'extension degree must be positive, got {E}')
    bits = default_ambient_bits() if ambient_bits is None else ambient_bits
    order = p ** E
    if order - 1 >= (1 << 63):
        raise AmbientTooLarge(f'{p}^{E} - 1 does not fit in 63 bits')
    if order > (1 << bits):
        raise AmbientTooLarge(f'{p}^{E} = {order} exceeds the ambient cap 2^{bits}')
    return _build_field(p, E)


def split_prime_power(q):
    """q = p^e -> (p, e)"""
    if q < 2:
        raise InvalidParameters(f'{q} is not a prime power')
    factors = factorint(q)
    if len(factors) != 1:
        raise InvalidParameters(f'{q} is not a prime power')
    (p, e), = factors.items()
    return p, e


def prime_powers(low, high):
    """Prime powers in [low, high], ascending"""
    found = []
    for p in primerange(2, high + 1):
        q = p
        while q <= high:
            if q >= low:
                found.append(q)
            q *= p
    return sorted(found)


def tower_norm_check(ctx):
    """Exhaustive d-th power / norm equivalence over every tower inside ``ctx``"""
    divisors = [e for e in range(1, ctx.E + 1) if ctx.E % e == 0]
    checked = 0
    failures = []
    towers = 0
    for eb in divisors:
        base = ctx.subfield(eb)
        for et in divisors:
            if et % eb:
                continue
            top = ctx.subfield(et)
            towers += 1
            xs = ctx.elements(top)
            norms = ctx.norm_arrays(xs, base, top)
            for d in range(2, base.size):
                if base.group_order % d:
                    continue
                upstairs = ctx.dth_power_mask(xs, d, top)
                downstairs = ctx.dth_power_mask(norms, d, base)
                bad = np.flatnonzero(upstairs != downstairs)
                checked += len(xs)
                if len(bad):
                    failures.append({'base': base.size, 'top': top.size, 'd': d, 'x': int(xs[bad[0]])})
    verdict = FAIL if failures else PASS
    if failures:
        logger.warning('norm reduction failed in %r: %s', ctx, failures[0])
    return VerdictReport(
        task='lemma21',
        params={'p': ctx.p, 'E': ctx.E},
        result={'towers': towers, 'checked': checked, 'failures': len(failures)},
        verdict=verdict,
        witness={'first_failure': failures[0]} if failures else {},
    )
