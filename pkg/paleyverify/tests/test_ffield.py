import itertools
from unittest import mock

import numpy as np
from django.test import SimpleTestCase

from paleyverify.exceptions import (
    AmbientTooLarge,
    DivisionByZero,
    InvalidParameters,
    InvalidSubfieldDegree,
    NotInSubfield,
    NotPrime,
    OrderMismatch,
)
from paleyverify.ffield import (
    ZERO,
    FieldCtx,
    _find_generator,
    _find_modulus,
    build_field,
    prime_powers,
    split_prime_power,
    tower_norm_check,
)
from paleyverify.reports import PASS


def _digit_sum(ctx, x, y):
    return [(a + b) % ctx.p for a, b in zip(ctx.to_poly(x), ctx.to_poly(y))]


class FieldConstructionTests(SimpleTestCase):

    def test_f9_modulus_and_generator(self):
        ctx = build_field(3, 2)
        self.assertEqual(ctx.describe()['modulus'], [1, 0, 1])
        self.assertEqual(ctx.describe()['generator'], [1, 1])
        self.assertEqual(ctx.to_code(1), 4)
        # 1 + g = t + 2 = g^7
        self.assertEqual(int(ctx.zech[1]), 7)
        self.assertEqual(ctx.add(ctx.one, 1), 7)

    def test_construction_is_cached_and_deterministic(self):
        self.assertIs(build_field(5, 2), build_field(5, 2))
        self.assertEqual(build_field(7, 2).describe(), build_field(7, 2).describe())

    def test_tables_are_read_only(self):
        ctx = build_field(5, 1)
        with self.assertRaises(ValueError):
            ctx.zech[0] = 3

    def test_not_prime(self):
        with self.assertRaises(NotPrime):
            build_field(4, 1)

    def test_ambient_cap(self):
        with self.assertRaises(AmbientTooLarge) as caught:
            build_field(2, 30, ambient_bits=24)
        self.assertEqual(caught.exception.exit_code, 3)
        with self.assertRaises(AmbientTooLarge):
            build_field(13, 1, ambient_bits=3)

    def test_bad_extension_degree(self):
        with self.assertRaises(InvalidParameters):
            build_field(3, 0)

    def test_split_prime_power(self):
        self.assertEqual(split_prime_power(49), (7, 2))
        self.assertEqual(split_prime_power(13), (13, 1))
        with self.assertRaises(InvalidParameters):
            split_prime_power(12)
        with self.assertRaises(InvalidParameters):
            split_prime_power(1)

    def test_prime_powers(self):
        self.assertEqual(prime_powers(2, 10), [2, 3, 4, 5, 7, 8, 9])
        self.assertEqual(prime_powers(10, 10), [])
        self.assertEqual(prime_powers(120, 130), [121, 125, 127, 128])

    def test_power_table_built_in_blocks(self):
        for p, E in [(3, 4), (13, 2), (13, 1), (2, 6)]:
            modulus = _find_modulus(p, E)
            generator = _find_generator(modulus, p, E)
            with mock.patch('paleyverify.ffield.POWER_BLOCK', 5):
                blocked = FieldCtx(p, E, modulus, generator)
            self.assertEqual(list(blocked.exp_codes), list(build_field(p, E).exp_codes))
            self.assertEqual(list(blocked.zech), list(build_field(p, E).zech))

    def test_field_larger_than_one_block(self):
        ctx = build_field(2, 17)
        self.assertEqual(ctx.exp_codes.dtype, np.int32)
        self.assertTrue((np.sort(ctx.exp_codes) == np.arange(1, ctx.order)).all())
        # addition in characteristic 2 is xor on codes
        for x, y in [(0, 1), (5, 70000), (131000, 17), (12345, 54321)]:
            self.assertEqual(ctx.to_code(ctx.add(x, y)), ctx.to_code(x) ^ ctx.to_code(y))



class ArithmeticTests(SimpleTestCase):

    def test_addition_matches_digit_arithmetic(self):
        for p, E in [(2, 3), (3, 2), (5, 2), (2, 4)]:
            ctx = build_field(p, E)
            elems = [int(x) for x in ctx.elements()]
            for x, y in itertools.product(elems, repeat=2):
                self.assertEqual(ctx.to_poly(ctx.add(x, y)), _digit_sum(ctx, x, y))

    def test_array_arithmetic_agrees_with_scalar(self):
        ctx = build_field(3, 3)
        xs = ctx.elements()
        for y in (ZERO, 0, 5, 13):
            self.assertEqual(list(ctx.add_arrays(xs, y)), [ctx.add(int(x), y) for x in xs])
            self.assertEqual(list(ctx.sub_arrays(xs, y)), [ctx.sub(int(x), y) for x in xs])
            self.assertEqual(list(ctx.mul_arrays(xs, y)), [ctx.mul(int(x), y) for x in xs])

    def test_field_axioms_on_f16(self):
        ctx = build_field(2, 4)
        for x in ctx.elements():
            x = int(x)
            self.assertEqual(ctx.add(x, ctx.neg(x)), ZERO)
            self.assertEqual(ctx.add(x, x), ZERO)
            if x != ZERO:
                self.assertEqual(ctx.mul(x, ctx.inv(x)), ctx.one)

    def test_prime_field_codes(self):
        ctx = build_field(13, 1)
        self.assertEqual(ctx.to_code(ctx.minus_one), 12)
        self.assertEqual(ctx.from_int(0), ZERO)
        self.assertEqual(ctx.from_int(1), ctx.one)
        self.assertEqual(ctx.to_code(ctx.from_int(27)), 1)
        self.assertEqual(ctx.pow(ZERO, 0), ctx.one)

    def test_poly_round_trip(self):
        ctx = build_field(3, 3)
        for x in ctx.elements():
            self.assertEqual(ctx.from_poly(ctx.to_poly(int(x))), int(x))

    def test_division_by_zero(self):
        ctx = build_field(7, 1)
        with self.assertRaises(DivisionByZero):
            ctx.inv(ZERO)
        with self.assertRaises(ZeroDivisionError):
            ctx.div(3, ZERO)
        with self.assertRaises(DivisionByZero):
            ctx.pow(ZERO, -1)


class SubfieldTests(SimpleTestCase):

    def test_elements_zero_first_then_ascending(self):
        ctx = build_field(5, 2)
        base = ctx.subfield(1)
        elems = ctx.elements(base)
        self.assertEqual(len(elems), 5)
        self.assertEqual(int(elems[0]), ZERO)
        self.assertTrue((np.diff(elems[1:]) > 0).all())
        self.assertTrue(all(ctx.in_subfield(int(x), base) for x in elems))

    def test_subfield_is_closed(self):
        ctx = build_field(2, 6)
        sub = ctx.subfield(2)
        elems = [int(x) for x in ctx.elements(sub)]
        for x, y in itertools.product(elems, repeat=2):
            self.assertTrue(ctx.in_subfield(ctx.add(x, y), sub))
            self.assertTrue(ctx.in_subfield(ctx.mul(x, y), sub))

    def test_invalid_subfield_degree(self):
        ctx = build_field(3, 4)
        with self.assertRaises(InvalidSubfieldDegree):
            ctx.subfield(3)

    def test_check_in(self):
        ctx = build_field(5, 2)
        with self.assertRaises(NotInSubfield):
            ctx.check_in(1, ctx.subfield(1))

    def test_frobenius_orbits_give_degrees(self):
        ctx = build_field(3, 4)
        base = ctx.subfield(1)
        degrees = {}
        for x in ctx.elements():
            deg = ctx.degree_over(int(x), base)
            degrees[deg] = degrees.get(deg, 0) + 1
            self.assertIn(deg, (1, 2, 4))
        # 3 + (9 - 3) + (81 - 9)
        self.assertEqual(degrees, {1: 3, 2: 6, 4: 72})

    def test_degree_mask(self):
        ctx = build_field(2, 6)
        base = ctx.subfield(1)
        xs = ctx.elements()
        for degree in (1, 2, 3, 6):
            mask = ctx.degree_mask(xs, degree, base)
            expected = [ctx.degree_over(int(x), base) == degree for x in xs]
            self.assertEqual(list(mask), expected)

    def test_norm_lands_in_subfield(self):
        ctx = build_field(7, 2)
        base = ctx.subfield(1)
        for x in ctx.elements():
            n = ctx.norm_to(int(x), base, ctx.ambient)
            self.assertTrue(ctx.in_subfield(n, base))
            self.assertEqual(n, ctx.mul(int(x), ctx.frobenius(int(x), 1)))

    def test_frobenius_fixes_exactly_the_subfield(self):
        ctx = build_field(3, 4)
        xs = ctx.elements()
        images = ctx.frobenius_arrays(xs, 2)
        fixed = xs[images == xs]
        self.assertEqual(len(fixed), 9)
        self.assertTrue(ctx.subfield_mask(fixed, ctx.subfield(2)).all())

    def test_frobenius_is_additive(self):
        ctx = build_field(3, 4)
        xs = ctx.elements()
        a, b = np.meshgrid(xs, xs)
        left = ctx.frobenius_arrays(ctx.add_arrays(a, b), 1)
        right = ctx.add_arrays(ctx.frobenius_arrays(a, 1), ctx.frobenius_arrays(b, 1))
        self.assertTrue((left == right).all())



class PowerResidueTests(SimpleTestCase):

    def test_squares_in_f13(self):
        ctx = build_field(13, 1)
        squares = {ctx.to_code(int(x)) for x in ctx.nonzero_elements() if ctx.dth_power_test(int(x), 2)}
        self.assertEqual(squares, {1, 3, 4, 9, 10, 12})

    def test_zero_is_never_a_power(self):
        ctx = build_field(13, 1)
        self.assertFalse(ctx.dth_power_test(ZERO, 3))

    def test_order_must_divide_group(self):
        ctx = build_field(13, 1)
        with self.assertRaises(OrderMismatch):
            ctx.dth_power_test(0, 5)

    def test_mask_matches_scalar_test(self):
        ctx = build_field(5, 2)
        xs = ctx.elements()
        for d in (2, 3, 4, 6):
            self.assertEqual(list(ctx.dth_power_mask(xs, d)), [ctx.dth_power_test(int(x), d) for x in xs])

    def test_base_field_elements_are_powers_upstairs(self):
        ctx = build_field(5, 2)
        base = ctx.subfield(1)
        # (25 - 1) / (5 - 1) = 6, so every nonzero x in F_5 is a square and a cube in F_25
        for x in ctx.nonzero_elements(base):
            self.assertTrue(ctx.dth_power_test(int(x), 2))
            self.assertTrue(ctx.dth_power_test(int(x), 3))

    def test_tower_norm_check(self):
        for p, E in [(3, 4), (2, 6), (5, 2), (7, 1)]:
            report = tower_norm_check(build_field(p, E))
            self.assertEqual(report.verdict, PASS, report.witness)
            self.assertEqual(report.result['failures'], 0)
