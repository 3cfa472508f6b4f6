from django.test import SimpleTestCase

from paleyverify import cliques
from paleyverify.exceptions import ConjugatePair, InvalidParameters, RadicalMismatch, VInBaseField
from paleyverify.ffield import build_field
from paleyverify.graphs import GP, PEISERT, CayleyView, fq_neighborhood
from paleyverify.reports import FAIL, PASS


def _quadratic(q, kind, d):
    ctx = build_field(q, 2)
    base = ctx.subfield(1)
    return ctx, base, CayleyView(ctx, kind, d)


class CliqueCheckTests(SimpleTestCase):

    def setUp(self):
        self.ctx = build_field(13, 1)
        self.view = CayleyView(self.ctx, GP, 2)

    def test_squares_are_not_a_clique(self):
        # 10 - 3 = 7 is a non-residue
        squares = [self.ctx.from_int(c) for c in (1, 3, 4, 9, 10, 12)]
        self.assertFalse(cliques.is_clique(self.view, squares))
        cert = cliques.is_maximal(self.view, squares)
        self.assertFalse(cert.is_clique)
        self.assertEqual(cert.verdict, FAIL)
        self.assertIn('non_adjacent', cert.witness)

    def test_greedy_extension_is_maximal(self):
        members, added = cliques.extend_to_maximal(self.view, [])
        self.assertEqual(len(members), len(added))
        cert = cliques.is_maximal(self.view, members)
        self.assertTrue(cert.is_clique)
        self.assertTrue(cert.is_maximal)
        self.assertTrue(cliques.recheck_certificate(cert))

    def test_non_maximal_clique_has_an_extender(self):
        cert = cliques.is_maximal(self.view, [self.ctx.from_int(0)])
        self.assertTrue(cert.is_clique)
        self.assertFalse(cert.is_maximal)
        self.assertIn('extender', cert.witness)
        self.assertTrue(cliques.recheck_certificate(cert))


class RadicalChainTests(SimpleTestCase):

    def test_chains(self):
        self.assertEqual(cliques.lemma43_chain(12, 12).chain, (2, 6))
        self.assertEqual(cliques.lemma43_chain(8, 2).chain, (2, 2, 2))
        self.assertEqual(cliques.lemma43_chain(1, 5).chain, ())
        for m, d in [(12, 12), (8, 2), (1, 5), (36, 6), (9, 3)]:
            self.assertTrue(cliques.lemma43_chain(m, d).holds())

    def test_radical_mismatch(self):
        with self.assertRaises(RadicalMismatch):
            cliques.lemma43_chain(3, 2)

    def test_positive_arguments(self):
        with self.assertRaises(InvalidParameters):
            cliques.lemma43_chain(0, 2)


class PrescribedDegreeTests(SimpleTestCase):

    def test_degree_chain_2_4(self):
        picks, cert = cliques.prop42_clique(13, 4, [2, 4])
        ctx = cert.view.ctx
        base = ctx.subfield(1)
        self.assertEqual([ctx.degree_over(v, base) for v in picks], [2, 4])
        self.assertTrue(cert.is_clique)
        self.assertTrue(all(cert.checks.values()))
        self.assertTrue(cert.data['in_regime'])

    def test_chain_must_divide_d(self):
        with self.assertRaises(InvalidParameters):
            cliques.prop42_clique(13, 4, [3])
        with self.assertRaises(InvalidParameters):
            cliques.prop42_clique(13, 4, [4, 2])


class DDprimeTests(SimpleTestCase):

    def test_base_field_clique(self):
        cert = cliques.thm14_construct(13, 4, 1)
        self.assertEqual(cert.size, 13)
        self.assertTrue(cert.is_clique)
        self.assertNotEqual(cert.verdict, FAIL)

    def test_m_two_in_regime(self):
        cert = cliques.thm14_construct(193, 2, 2)
        self.assertTrue(cert.data['in_regime'])
        self.assertTrue(cert.is_clique)
        self.assertTrue(cert.is_maximal)
        self.assertTrue(69 <= cert.size <= 126)
        self.assertEqual(cert.data['window'], [69, 126])
        self.assertEqual(cert.verdict, PASS)
        self.assertTrue(cliques.recheck_certificate(cert))

    def test_window(self):
        self.assertEqual(cliques.thm14_window(193, 2, 2), (69, 126))
        low, high = cliques.thm14_window(13, 4, 1)
        self.assertEqual((low, high), (13, 13))


class FqAlphaTests(SimpleTestCase):

    def test_case_a_size(self):
        ctx, base, view = _quadratic(11, GP, 4)
        u = cliques.coset_representatives(ctx, base, 1)[0]
        cert = cliques.fq_alpha_gp(11, 4, u, setup=(ctx, base, view))
        self.assertEqual(cert.data['case'], 'a')
        self.assertEqual(cert.size, 3)
        self.assertTrue(cert.is_clique)
        self.assertTrue(cert.empirical)
        self.assertNotEqual(cert.verdict, FAIL)
        self.assertTrue(cert.data['known_criterion'])

    def test_known_criterion(self):
        for q, d, expected in [(11, 4, True), (11, 3, True), (23, 3, True), (17, 3, False), (29, 3, False)]:
            self.assertEqual(cliques.fq_alpha_known_criterion(q, d), expected)


    def test_case_b_adds_the_conjugate(self):
        ctx, base, view = _quadratic(5, GP, 3)
        u = cliques.coset_representatives(ctx, base, 1)[0]
        cert = cliques.fq_alpha_gp(5, 3, u, setup=(ctx, base, view))
        self.assertEqual(cert.data['case'], 'b')
        self.assertEqual(cert.size, 3)
        self.assertIn(ctx.frobenius(u, 1), cert.members)
        self.assertTrue(cert.checks['conjugate_adjacency'])
        self.assertTrue(cert.checks['same_neighborhood'])

    def test_paley_variant_is_empirical(self):
        cert = cliques.fq_alpha_gp(13, 2, 1)
        self.assertTrue(cert.empirical)
        self.assertEqual(cert.size, 7)

    def test_base_field_vertex_rejected(self):
        ctx, base, view = _quadratic(5, GP, 3)
        with self.assertRaises(VInBaseField):
            cliques.fq_alpha_gp(5, 3, 0, setup=(ctx, base, view))

    def test_d_must_divide_q_plus_one(self):
        with self.assertRaises(InvalidParameters):
            cliques.fq_alpha_gp(13, 4, 1)

    def test_coset_representatives(self):
        ctx = build_field(7, 2)
        base = ctx.subfield(1)
        reps = cliques.coset_representatives(ctx, base, 20)
        self.assertEqual(len(reps), 6)
        self.assertEqual(reps, sorted(reps))
        for i, u in enumerate(reps):
            for v in reps[i + 1:]:
                self.assertFalse(ctx.in_subfield(ctx.sub(u, v), base))
        self.assertEqual(len(cliques.coset_representatives(ctx, base, 2)), 2)

    def test_subclaims(self):
        for q, d in [(5, 3), (11, 4), (11, 3), (17, 3)]:
            report = cliques.thm15_subclaims(q, d)
            self.assertEqual(report.verdict, PASS, report.result)


class PeisertTests(SimpleTestCase):

    def test_maximal_cliques(self):
        for q, size in [(7, 4), (11, 6)]:
            ctx, base, view = _quadratic(q, PEISERT, 4)
            table = cliques.outside_neighborhoods(view, base)
            for u in cliques.coset_representatives(ctx, base):
                cert = cliques.fq_alpha_peisert(q, u, setup=(ctx, base, view), table=table)
                self.assertEqual(cert.size, size)
                self.assertTrue(cert.is_maximal)
                self.assertEqual(cert.verdict, PASS)
                self.assertTrue(cliques.recheck_certificate(cert))

    def test_common_neighbourhood_checked_over_all_pairs(self):
        for q in (7, 11):
            ctx, base, view = _quadratic(q, PEISERT, 4)
            outside = [x for x in range(ctx.group_order) if not ctx.in_subfield(x, base)]
            for u in cliques.coset_representatives(ctx, base):
                hood = fq_neighborhood(view, u, base)
                conj = ctx.frobenius(u, 1)
                worst = max(
                    len(hood & fq_neighborhood(view, v, base))
                    for v in outside if v not in (u, conj)
                )
                cert = cliques.fq_alpha_peisert(q, u, setup=(ctx, base, view))
                self.assertEqual(cert.data['max_common'], worst)
                self.assertEqual(cert.data['pairs_checked'], q * q - q - 2)
                self.assertTrue(cert.checks['common_neighborhood'])

    def test_paley_clique_extends_by_the_conjugate(self):
        ctx, base, view = _quadratic(7, GP, 2)
        for u in cliques.coset_representatives(ctx, base):
            self.assertTrue(cliques.paley_comparison(7, u, setup=(ctx, base, view)))

    def test_q_must_be_three_mod_four(self):
        with self.assertRaises(InvalidParameters):
            cliques.fq_alpha_peisert(5, 1)


class CommonNeighbourhoodTests(SimpleTestCase):

    def test_same_vertex(self):
        ctx, base, view = _quadratic(7, PEISERT, 4)
        u = cliques.coset_representatives(ctx, base, 1)[0]
        count, report = cliques.common_neighborhood(view, u, u, base)
        self.assertEqual(count, 3)
        self.assertEqual(report.verdict, PASS)

    def test_conjugate_pair_rejected(self):
        ctx, base, view = _quadratic(7, PEISERT, 4)
        u = cliques.coset_representatives(ctx, base, 1)[0]
        with self.assertRaises(ConjugatePair):
            cliques.common_neighborhood(view, u, ctx.frobenius(u, 1), base)

    def test_bound(self):
        ctx, base, view = _quadratic(11, PEISERT, 4)
        reps = cliques.coset_representatives(ctx, base)
        for v in reps[1:]:
            _, report = cliques.common_neighborhood(view, reps[0], v, base)
            self.assertEqual(report.verdict, PASS)
