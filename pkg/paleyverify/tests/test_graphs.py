import os
import tempfile

import networkx as nx
from django.test import SimpleTestCase

from paleyverify.exceptions import InvalidParameters, NotAVertex, TooLargeForExhaustive
from paleyverify.ffield import build_field, split_prime_power
from paleyverify.graphs import (
    GP,
    PEISERT,
    CayleyView,
    export_dimacs,
    fq_neighborhood,
    induced_subfield_equality,
    peisert_indicator_check,
    srg_params,
    to_networkx,
)
from paleyverify.reports import PASS


def _view(q, kind, d=2):
    p, e = split_prime_power(q)
    return CayleyView(build_field(p, e), kind, d)


class CayleyViewTests(SimpleTestCase):

    def test_paley_13_is_the_quadratic_residue_graph(self):
        view = _view(13, GP)
        ctx = view.ctx
        zero = ctx.from_int(0)
        for c in range(1, 13):
            x = ctx.from_int(c)
            self.assertEqual(view.adjacent(zero, x), c in {1, 3, 4, 9, 10, 12})

    def test_no_loops_and_symmetric(self):
        adj = _view(25, GP, 3).adjacency_matrix()
        self.assertFalse(adj.diagonal().any())
        self.assertTrue((adj == adj.T).all())

    def test_gp_needs_q_one_mod_2d(self):
        with self.assertRaises(InvalidParameters):
            _view(13, GP, 4)
        with self.assertRaises(InvalidParameters):
            _view(9, GP, 3)

    def test_peisert_needs_p_three_mod_four(self):
        with self.assertRaises(InvalidParameters):
            _view(25, PEISERT)
        with self.assertRaises(InvalidParameters):
            _view(7, PEISERT)

    def test_vertex_check(self):
        ctx = build_field(5, 2)
        view = CayleyView(ctx, GP, 2, vertex_sub=ctx.subfield(1))
        with self.assertRaises(NotAVertex):
            view.adjacent(1, 0)

    def test_exhaustive_limit(self):
        with self.assertRaises(TooLargeForExhaustive):
            _view(13, GP).adjacency_matrix(limit=10)

    def test_generator_choice_does_not_change_gp(self):
        ctx = build_field(13, 1)
        for d in (2, 3):
            plain = CayleyView(ctx, GP, d).adjacency_matrix()
            other = CayleyView(ctx, GP, d, primitive_power=5).adjacency_matrix()
            self.assertTrue((plain == other).all())

    def test_peisert_generator_choice_gives_isomorphic_graphs(self):
        ctx = build_field(7, 2)
        plain = CayleyView(ctx, PEISERT)
        xs = ctx.nonzero_elements()
        for power in (5, 7, 11, 13, 25):
            other = CayleyView(ctx, PEISERT, primitive_power=power)
            # x -> x^7 is additive and carries one connection set onto the other
            image = ctx.frobenius_arrays(xs, 1) if power % 4 == 3 else xs
            self.assertTrue((other.connection_mask(image) == plain.connection_mask(xs)).all())
            self.assertEqual(srg_params(other)[0], srg_params(plain)[0])

    def test_adjacency_is_translation_invariant(self):
        for q, kind, d in [(25, GP, 3), (49, PEISERT, 4), (27, GP, 13)]:
            view = _view(q, kind, d)
            ctx = view.ctx
            vs = view.vertex_array()
            adj = view.adjacency_matrix()
            for a in (5, ctx.minus_one, ctx.group_order - 1):
                moved = ctx.add_arrays(vs, a)
                self.assertEqual(sorted(moved.tolist()), sorted(vs.tolist()))
                shifted = view.connection_mask(ctx.sub_arrays(moved[:, None], moved[None, :]))
                self.assertTrue((shifted == adj).all())


    def test_non_primitive_power_rejected(self):
        with self.assertRaises(InvalidParameters):
            CayleyView(build_field(13, 1), GP, 2, primitive_power=2)

    def test_neighbourhood_in_base_field(self):
        for q, kind, d, size in [(5, GP, 3, 1), (7, PEISERT, 4, 3), (11, GP, 4, 2)]:
            ctx = build_field(q, 2)
            base = ctx.subfield(1)
            view = CayleyView(ctx, kind, d)
            for u in ctx.nonzero_elements():
                if ctx.in_subfield(int(u), base):
                    continue
                self.assertEqual(len(fq_neighborhood(view, int(u), base)), size)


class StronglyRegularTests(SimpleTestCase):

    def test_known_parameters(self):
        cases = [
            (_view(13, GP), (13, 6, 2, 3)),
            (_view(9, GP), (9, 4, 1, 2)),
            (_view(25, GP), (25, 12, 5, 6)),
            (_view(49, PEISERT, 4), (49, 24, 11, 12)),
        ]
        for view, expected in cases:
            params, report = srg_params(view)
            self.assertEqual(params, expected)
            self.assertEqual(report.verdict, PASS)

    def test_networkx_agrees(self):
        view = _view(49, PEISERT, 4)
        graph = to_networkx(view)
        self.assertEqual(graph.number_of_nodes(), 49)
        self.assertEqual(graph.number_of_edges(), 49 * 24 // 2)
        self.assertEqual({deg for _, deg in graph.degree()}, {24})
        triangles = nx.triangles(graph)
        # lambda = 11: each vertex sits on 24 * 11 / 2 triangles
        self.assertEqual(set(triangles.values()), {132})

    def test_indicator_identity(self):
        for q in (9, 49, 81):
            report = peisert_indicator_check(_view(q, PEISERT, 4))
            self.assertEqual(report.verdict, PASS)
            self.assertEqual(report.result['checked'], q - 1)

    def test_indicator_needs_peisert(self):
        with self.assertRaises(InvalidParameters):
            peisert_indicator_check(_view(13, GP))


class InducedSubgraphTests(SimpleTestCase):

    def test_gp_625_restricted_to_f25(self):
        report = induced_subfield_equality(5, 4, 2)
        self.assertEqual(report.verdict, PASS)
        self.assertEqual(report.result['vertices'], 25)
        self.assertEqual(report.result['edges'], 150)
        self.assertEqual(report.result['discrepancies'], 0)

    def test_other_towers(self):
        for q, d, dprime in [(9, 4, 2), (7, 3, 3), (5, 4, 4)]:
            self.assertEqual(induced_subfield_equality(q, d, dprime).verdict, PASS)

    def test_bad_parameters(self):
        with self.assertRaises(InvalidParameters):
            induced_subfield_equality(5, 4, 3)
        with self.assertRaises(InvalidParameters):
            induced_subfield_equality(7, 4, 2)


class DimacsExportTests(SimpleTestCase):

    def test_export(self):
        view = _view(13, GP)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'paley13.dimacs')
            edges = export_dimacs(view, path)
            with open(path) as fh:
                lines = fh.read().splitlines()
        self.assertEqual(edges, 39)
        self.assertTrue(lines[0].startswith('c '))
        self.assertEqual(lines[1], 'p edge 13 39')
        self.assertEqual(len(lines), 2 + 39)
        for line in lines[2:]:
            _, i, j = line.split()
            self.assertTrue(1 <= int(i) < int(j) <= 13)
