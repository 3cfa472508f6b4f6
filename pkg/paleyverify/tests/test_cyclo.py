from django.test import SimpleTestCase
from sympy.polys.domains import ZZ_I

from paleyverify.cyclo import (
    ZERO_MARKER,
    CharSpec,
    CycloSum,
    char_eval,
    char_eval_array,
    indicator_sum,
    sum_over,
    sum_over_arrays,
    weil_check,
)
from paleyverify.exceptions import InvalidParameters, MixedOrders, NotInSubfield, OrderMismatch
from paleyverify.ffield import ZERO, build_field
from paleyverify.reports import FAIL, PASS


class CycloSumTests(SimpleTestCase):

    def test_i_squared_is_minus_one(self):
        i = CycloSum.root(4, 1)
        self.assertEqual(i * i, -1)
        self.assertEqual((i * i).as_integer(), -1)

    def test_all_roots_sum_to_zero(self):
        for d in (2, 3, 5, 6, 12):
            self.assertTrue(CycloSum(d, [1] * d).is_zero())

    def test_indicator_sum(self):
        self.assertEqual(indicator_sum(6, 3).as_integer(), 0)
        self.assertEqual(indicator_sum(6, 12).as_integer(), 6)
        self.assertEqual(indicator_sum(4, 2).as_integer(), 0)

    def test_non_integer_sum(self):
        self.assertIsNone(CycloSum.root(3, 1).as_integer())
        self.assertAlmostEqual(CycloSum.root(3, 1).magnitude(), 1.0)

    def test_rotation(self):
        self.assertEqual(CycloSum.root(3, 0).rotate(2), CycloSum.root(3, 2))
        s = CycloSum(5, [1, 2, 0, 0, 4])
        self.assertEqual(s.rotate(3), s * CycloSum.root(5, 3))

    def test_equality_through_reduction(self):
        # 1 + zeta_3 = -zeta_3^2
        self.assertEqual(CycloSum(3, [1, 1, 0]), -CycloSum.root(3, 2))
        self.assertEqual(hash(CycloSum(3, [1, 1, 0])), hash(-CycloSum.root(3, 2)))

    def test_reduction_is_idempotent_and_keeps_the_value(self):
        for d, counts in [(5, [1, 2, 0, 0, 4]), (6, [3, 0, 1, 7, 2, 2]), (12, list(range(12))), (4, [0, 0, 0, 9])]:
            s = CycloSum(d, counts)
            once = s.reduced()
            self.assertEqual(once.reduced().counts, once.counts)
            self.assertEqual(once, s)
            self.assertAlmostEqual(once.magnitude(), s.magnitude())


    def test_integer_arithmetic(self):
        s = CycloSum.integer(7, 3) + 4
        self.assertEqual(s.as_integer(), 7)
        self.assertEqual((s - 7).as_integer(), 0)
        self.assertEqual(s.scale(-2).as_integer(), -14)

    def test_big_products_stay_exact(self):
        big = CycloSum.integer(2, 2 ** 40)
        self.assertEqual((big * big).as_integer(), 2 ** 80)

    def test_mixed_orders(self):
        with self.assertRaises(MixedOrders):
            CycloSum.root(3, 1) + CycloSum.root(4, 1)

    def test_bad_counts(self):
        with self.assertRaises(InvalidParameters):
            CycloSum(3, [1, 2])

    def test_gaussian(self):
        self.assertEqual(CycloSum(4, [1, 2, 0, 0]).to_gaussian(), ZZ_I(1, 2))
        self.assertEqual(CycloSum(2, [3, 1]).to_gaussian(), ZZ_I(2, 0))
        with self.assertRaises(InvalidParameters):
            CycloSum.root(3, 1).to_gaussian()


class CharacterTests(SimpleTestCase):

    def setUp(self):
        self.ctx = build_field(13, 1)
        self.base = self.ctx.ambient

    def test_spec_validation(self):
        with self.assertRaises(OrderMismatch):
            CharSpec(5, 1, self.base)
        with self.assertRaises(InvalidParameters):
            CharSpec(4, 4, self.base)

    def test_order_and_power(self):
        chi = CharSpec(12, 3, self.base)
        self.assertEqual(chi.order, 4)
        self.assertTrue(chi.power(4).is_trivial)

    def test_zero_maps_to_marker(self):
        chi = CharSpec(2, 1, self.base)
        self.assertEqual(char_eval(self.ctx, chi, ZERO), ZERO_MARKER)

    def test_quadratic_character_matches_squares(self):
        chi = CharSpec(2, 1, self.base)
        for x in self.ctx.nonzero_elements():
            t = char_eval(self.ctx, chi, int(x))
            self.assertEqual(t == 0, self.ctx.dth_power_test(int(x), 2))

    def test_outside_subfield(self):
        ctx = build_field(5, 2)
        chi = CharSpec(2, 1, ctx.subfield(1))
        with self.assertRaises(NotInSubfield):
            char_eval(ctx, chi, 1)
        with self.assertRaises(NotInSubfield):
            char_eval_array(ctx, chi, [0, 1])

    def test_orthogonality(self):
        for d in (2, 3, 4, 6, 12):
            chi = CharSpec(d, 1, self.base)
            total = sum_over_arrays(self.ctx, [chi], [self.ctx.nonzero_elements()])
            self.assertTrue(total.is_zero())

    def test_streaming_and_array_sums_agree(self):
        chi = CharSpec(3, 1, self.base)
        psi = CharSpec(3, 2, self.base)
        xs = [int(x) for x in self.ctx.elements()]
        ys = [self.ctx.add(x, 0) for x in xs]
        streamed = sum_over(self.ctx, [chi, psi], zip(xs, ys))
        vectorised = sum_over_arrays(self.ctx, [chi, psi], [xs, ys])
        self.assertEqual(streamed, vectorised)

    def test_mixed_character_orders(self):
        with self.assertRaises(MixedOrders):
            sum_over(self.ctx, [CharSpec(2, 1, self.base), CharSpec(3, 1, self.base)], [])


class WeilCheckTests(SimpleTestCase):

    def test_within_bound(self):
        report = weil_check(CycloSum(2, [3, 4]), 2, 13)
        self.assertEqual(report.verdict, PASS)
        self.assertGreater(report.slack, 0)

    def test_over_bound(self):
        report = weil_check(CycloSum.integer(2, 5), 1, 13)
        self.assertEqual(report.verdict, FAIL)

    def test_needs_a_root(self):
        with self.assertRaises(InvalidParameters):
            weil_check(CycloSum.zero(2), 0, 13)
