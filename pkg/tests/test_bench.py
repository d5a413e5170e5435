import csv
import io
import json

import pytest

from wdsparql.algebra import Opt, is_af_pattern, opt_count, opt_depth
from wdsparql.bench import (
    ZIGZAG_PROFILE,
    BenchReport,
    Shape,
    TreeShape,
    alternating_steps,
    find_zigzag,
    generate_graph,
    generate_query,
    benchmark_queries,
    opt_count_profile,
    run_workload,
    skeleton,
    skeleton_profile,
)
from wdsparql.errors import ShapeInfeasible
from wdsparql.semantics import Graph, evaluate
from wdsparql.wdtree import OptNode, build_tree, k_approximate
from wdsparql.wellformed import is_well_designed


def counts(p, k_max=4):
    return [c for _, c in opt_count_profile(p, k_max)]


class TestShapes:
    def test_left_deep(self):
        p = generate_query(TreeShape(Shape.LEFT_DEEP, 4))
        assert opt_depth(p) == 1
        assert counts(p) == [0, 4, 4, 4, 4]
        assert isinstance(p.left.left.left, Opt) and is_af_pattern(p.right)

    def test_right_deep(self):
        p = generate_query(TreeShape(Shape.RIGHT_DEEP, 4))
        assert opt_depth(p) == 4
        assert counts(p) == [0, 1, 2, 3, 4]

    def test_full(self):
        p = generate_query(TreeShape(Shape.FULL, 15))
        assert counts(p) == [0, 4, 10, 14, 15]

        def height(t):
            return 0 if not isinstance(t, OptNode) else 1 + max(height(t.left),
                                                                 height(t.right))
        assert height(build_tree(p)) == 4

    def test_zigzag_target_profile(self):
        assert find_zigzag(9, ZIGZAG_PROFILE) == ["LRLLRLLR"]
        assert counts(benchmark_queries()["Q1"]) == list(ZIGZAG_PROFILE)

    def test_zigzag_default_alternates(self):
        assert alternating_steps(5) == "RLRL"
        p = generate_query(TreeShape(Shape.ZIGZAG, 9))
        assert opt_count(p) == 9

    @pytest.mark.parametrize("shape", [
        TreeShape(Shape.FULL, 4),
        TreeShape(Shape.LEFT_DEEP, -1),
        TreeShape(Shape.ZIGZAG, 3, "LLL"),
        TreeShape(Shape.ZIGZAG, 3, "LX"),
    ])
    def test_infeasible(self, shape):
        with pytest.raises(ShapeInfeasible):
            generate_query(shape)

    @pytest.mark.parametrize("shape", [
        TreeShape(Shape.LEFT_DEEP, 6), TreeShape(Shape.RIGHT_DEEP, 3),
        TreeShape(Shape.FULL, 7), TreeShape(Shape.ZIGZAG, 6),
        TreeShape(Shape.ZIGZAG, 5, "LLRR"), TreeShape(Shape.LEFT_DEEP, 0),
    ])
    def test_generated_queries_are_well_designed_and_monotone(self, shape):
        p = generate_query(shape, seed=3)
        assert is_well_designed(p)
        prof = counts(p, 8)
        assert prof[0] == 0 and prof[-1] == shape.opt_count
        assert prof == sorted(prof)
        assert prof == skeleton_profile(skeleton(shape), 8)

    def test_seed_changes_leaves_not_shape(self):
        a = generate_query(TreeShape(Shape.FULL, 7), seed=1)
        b = generate_query(TreeShape(Shape.FULL, 7), seed=2)
        assert counts(a) == counts(b)
        assert generate_query(TreeShape(Shape.FULL, 7), seed=1) == a


class TestGraph:
    def test_deterministic(self):
        assert generate_graph(1, seed=0).triples == generate_graph(1, seed=0).triples

    def test_linear_growth(self):
        for s in (0, 1, 7):
            one, two = len(generate_graph(1, s)), len(generate_graph(2, s))
            assert 1.8 <= two / one <= 2.2

    def test_typed(self):
        g = generate_graph(1)
        assert Graph(g.triples).triples == g.triples

    def test_invalid_scale(self):
        with pytest.raises(ValueError):
            generate_graph(0)

    def test_queries_have_answers(self):
        g = generate_graph(1)
        for q in benchmark_queries().values():
            assert len(evaluate(q, g)) > 0


@pytest.fixture(scope="module")
def small_report():
    qs = benchmark_queries()
    return qs, run_workload(qs, {"s1": generate_graph(1)}, ks=range(5), repeats=1)


class TestWorkload:
    def test_complete(self, small_report):
        qs, rep = small_report
        assert len(rep.rows) == len(qs) * 5
        assert all(r.error is None and r.median_ms is not None for r in rep.rows)

    def test_k0_has_no_opts(self, small_report):
        _, rep = small_report
        assert {r.opt_count for r in rep.rows if r.k == 0} == {0}

    def test_k_at_depth_is_exact(self, small_report):
        qs, rep = small_report
        g = generate_graph(1)
        counts_ = rep.answer_counts()
        for name, q in qs.items():
            d = opt_depth(q)
            if d <= 4:
                assert counts_[(name, d, "s1")] == len(evaluate(q, g))

    def test_deterministic_counts_and_parallel_mode(self, small_report):
        qs, rep = small_report
        again = run_workload(qs, {"s1": generate_graph(1)}, repeats=1, workers=4)
        assert again.answer_counts() == rep.answer_counts()
        assert all(r.median_ms is None for r in again.rows)

    def test_errors_are_per_row(self):
        from worked_examples import NOT_WD_TEXT
        from wdsparql.surface import parse_pattern
        rep = run_workload({"bad": parse_pattern(NOT_WD_TEXT)}, Graph(), ks=[0, 1], repeats=1)
        assert len(rep.rows) == 2 and all("NotWellDesigned" in r.error for r in rep.rows)

    def test_csv_and_json(self, small_report):
        _, rep = small_report
        rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
        assert len(rows) == len(rep.rows)
        assert set(rows[0]) == set(BenchReport.FIELDS)
        assert json.loads(rep.to_json())[0]["query"] == rep.rows[0].query

    def test_trend_report(self, small_report):
        _, rep = small_report
        text = rep.trend()
        assert text.count("\n") == 3 and "k=0:" in text

    def test_repeats_validated(self):
        with pytest.raises(ValueError):
            run_workload({}, Graph(), repeats=0)

    def test_k_approximation_used(self, small_report):
        qs, rep = small_report
        for r in rep.rows:
            assert r.opt_count == opt_count(k_approximate(qs[r.query], r.k))
