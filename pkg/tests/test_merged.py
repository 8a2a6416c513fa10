import numpy as np
import pytest

from oplex.fixtures import (
    complementary_cycles_pair,
    misaligned_degree_pair,
    triangle_pair,
)
from oplex.merged import (
    alpha_stability_sweep,
    consensus_interval,
    merge,
    merged_consensus,
    merged_perturbation_check,
    primitivity_guarantee,
    slem_bounds,
)
from oplex.netcore import GeneratorSpec, build_layer, generate
from oplex.stochastic import NotPrimitiveError, transition_matrix
from oplex.verify import degree_matched_pair, random_layer, reweight_edge

X0_TRIANGLE = np.array([1.0, 0.0, 0.0])


class TestMerge:
    def test_complementary_cycles_give_complete_graph(self):
        layer1, layer2 = complementary_cycles_pair()
        model = merge(layer1, layer2, 0.5)
        expected = (np.ones((5, 5)) - np.eye(5)) / 4
        assert np.abs(model.transition.entries - expected).max() <= 1e-12

    def test_alpha_one_degenerates_to_layer1(self):
        layer1, layer2 = triangle_pair()
        model = merge(layer1, layer2, 1.0)
        assert np.abs(
            model.transition.entries - transition_matrix(layer1).entries
        ).max() <= 1e-15

    def test_identical_layers_any_alpha(self):
        layer1, _ = triangle_pair()
        model = merge(layer1, layer1, 0.37)
        assert np.abs(
            model.transition.entries - transition_matrix(layer1).entries
        ).max() <= 1e-15

    def test_merged_weights_are_blend(self):
        layer1, layer2 = triangle_pair()
        model = merge(layer1, layer2, 0.3)
        expected = 0.3 * layer1.weights + 0.7 * layer2.weights
        assert np.abs(model.merged_layer.weights - expected).max() <= 1e-12

    def test_rejects_mismatched_sizes(self):
        layer1, _ = triangle_pair()
        other = build_layer(2, [(0, 1, 1)])
        with pytest.raises(ValueError, match="node counts"):
            merge(layer1, other, 0.5)

    def test_rejects_alpha_outside_range(self):
        layer1, layer2 = triangle_pair()
        with pytest.raises(ValueError, match="alpha"):
            merge(layer1, layer2, 1.5)

    def test_rejects_node_isolated_in_both(self):
        a = build_layer(3, [(0, 1, 1)])
        b = build_layer(3, [(0, 1, 2)])
        with pytest.raises(ValueError, match="isolated in the merged"):
            merge(a, b, 0.5)

    def test_node_isolated_in_one_layer_is_fine(self):
        a = build_layer(3, [(0, 1, 1)])
        b = build_layer(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
        model = merge(a, b, 0.5)
        assert (model.merged_layer.degrees > 0).all()


class TestPrimitivityGuarantee:
    def test_two_odd_cycles_guaranteed(self):
        layer1, layer2 = complementary_cycles_pair()
        verdict = primitivity_guarantee(merge(layer1, layer2, 0.5))
        assert verdict.guaranteed
        assert verdict.c_report.primitive
        assert verdict.c_report.witness_exponent == 2

    def test_one_primitive_layer_suffices(self):
        primitive_layer = build_layer(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
        periodic_layer = build_layer(3, [(0, 1, 1), (1, 2, 1)])
        verdict = primitivity_guarantee(merge(primitive_layer, periodic_layer, 0.3))
        assert verdict.guaranteed
        assert verdict.c_report.primitive

    def test_shared_single_edge_not_guaranteed(self):
        a = build_layer(2, [(0, 1, 1)])
        b = build_layer(2, [(0, 1, 2)])
        verdict = primitivity_guarantee(merge(a, b, 0.5))
        assert not verdict.guaranteed
        assert not verdict.c_report.primitive

    def test_endpoint_alpha_not_guaranteed_by_condition(self):
        layer1, layer2 = complementary_cycles_pair()
        verdict = primitivity_guarantee(merge(layer1, layer2, 1.0))
        assert not verdict.guaranteed  # condition needs interior alpha
        assert verdict.c_report.primitive  # though C = A happens to be primitive


class TestMergedConsensus:
    def test_triangle_pair_closed_form(self):
        layer1, layer2 = triangle_pair()
        value = merged_consensus(merge(layer1, layer2, 0.5), X0_TRIANGLE)
        assert value == pytest.approx(4 / 11, abs=1e-14)

    def test_matches_fixpoint_iteration_oracle(self):
        layer1, layer2 = triangle_pair()
        model = merge(layer1, layer2, 0.5)
        x = X0_TRIANGLE.copy()
        for _ in range(10_000):
            nxt = model.transition.entries @ x
            if np.abs(nxt - x).max() < 1e-14:
                x = nxt
                break
            x = nxt
        assert merged_consensus(model, X0_TRIANGLE) == pytest.approx(x[0], abs=1e-10)

    def test_constant_opinions_stay_put(self):
        layer1, layer2 = triangle_pair()
        value = merged_consensus(merge(layer1, layer2, 0.25), np.full(3, 0.6))
        assert value == pytest.approx(0.6)

    def test_identical_layers_give_single_layer_consensus(self):
        layer1, _ = triangle_pair()
        from oplex.stochastic import consensus_value, stationary_from_degrees

        single = consensus_value(stationary_from_degrees(layer1), X0_TRIANGLE)
        merged = merged_consensus(merge(layer1, layer1, 0.7), X0_TRIANGLE)
        assert merged == pytest.approx(single, abs=1e-15)

    def test_equals_convex_combination_of_layer_consensuses(self):
        layer1, layer2 = triangle_pair()
        from oplex.stochastic import consensus_value, stationary_from_degrees

        alpha = 0.3
        x1 = consensus_value(stationary_from_degrees(layer1), X0_TRIANGLE)
        x2 = consensus_value(stationary_from_degrees(layer2), X0_TRIANGLE)
        e1, e2 = layer1.total_edge_weight, layer2.total_edge_weight
        expected = (alpha * e1 * x1 + (1 - alpha) * e2 * x2) / (
            alpha * e1 + (1 - alpha) * e2
        )
        value = merged_consensus(merge(layer1, layer2, alpha), X0_TRIANGLE)
        assert value == pytest.approx(expected, abs=1e-14)

    def test_rejects_non_primitive_merged_matrix(self):
        a = build_layer(2, [(0, 1, 1)])
        with pytest.raises(NotPrimitiveError):
            merged_consensus(merge(a, a, 0.5), np.array([1.0, 0.0]))

    def test_matches_simulated_fixpoint_on_random_instances(self):
        for seed in range(8):
            rng = np.random.default_rng(500 + seed)
            n = int(rng.integers(4, 31))
            model = merge(
                random_layer(rng, n), random_layer(rng, n), rng.uniform(0.1, 0.9)
            )
            x = rng.random(n)
            value = merged_consensus(model, x)
            for _ in range(100_000):
                nxt = model.transition.entries @ x
                if np.abs(nxt - x).max() < 1e-13:
                    x = nxt
                    break
                x = nxt
            assert np.abs(x - value).max() <= 1e-8


class TestConsensusInterval:
    def test_triangle_pair_interval(self):
        layer1, layer2 = triangle_pair()
        lo, hi = consensus_interval(merge(layer1, layer2, 0.5), X0_TRIANGLE)
        assert lo == pytest.approx(1 / 3, abs=1e-14)
        assert hi == pytest.approx(3 / 8, abs=1e-14)
        value = merged_consensus(merge(layer1, layer2, 0.5), X0_TRIANGLE)
        assert lo <= value <= hi

    def test_identical_layers_degenerate_interval(self):
        layer1, _ = triangle_pair()
        lo, hi = consensus_interval(merge(layer1, layer1, 0.5), X0_TRIANGLE)
        assert lo == pytest.approx(hi)

    def test_indicator_of_heavier_node_raises_endpoint(self):
        layer1, layer2 = triangle_pair()
        # node 0 carries more stationary weight in layer 2 (3/8 vs 1/3)
        lo, hi = consensus_interval(merge(layer1, layer2, 0.5), X0_TRIANGLE)
        from oplex.stochastic import consensus_value, stationary_from_degrees

        assert hi == pytest.approx(
            consensus_value(stationary_from_degrees(layer2), X0_TRIANGLE)
        )

    def test_rejects_when_one_layer_periodic(self):
        path = build_layer(3, [(0, 1, 1), (1, 2, 1)])  # bipartite, periodic
        tri = build_layer(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
        with pytest.raises(NotPrimitiveError):
            consensus_interval(merge(path, tri, 0.5), X0_TRIANGLE)

    def test_convexity_on_random_instances(self):
        for seed in range(25):
            rng = np.random.default_rng(1000 + seed)
            n = int(rng.integers(4, 16))
            layer1 = random_layer(rng, n)
            layer2 = random_layer(rng, n)
            alpha = float(rng.uniform(0.05, 0.95))
            x0 = rng.random(n)
            model = merge(layer1, layer2, alpha)
            lo, hi = consensus_interval(model, x0)
            value = merged_consensus(model, x0)
            assert lo - 1e-10 <= value <= hi + 1e-10


class TestSlemBounds:
    def test_lower_bound_attained_by_complete_graph(self):
        layer1, layer2 = complementary_cycles_pair()
        report = slem_bounds(merge(layer1, layer2, 0.5))
        assert report.slem_c == pytest.approx(report.lower_bound, abs=1e-10)
        assert report.degrees_matched

    def test_misaligned_pair_violates_upper_bound(self):
        layer1, layer2 = misaligned_degree_pair()
        report = slem_bounds(merge(layer1, layer2, 0.5))
        assert not report.degrees_matched
        assert report.slem_c > report.upper_bound
        assert report.slem_c == pytest.approx(0.6928, abs=1e-3)
        assert report.upper_bound == pytest.approx(0.6839, abs=1e-3)

    def test_identical_regular_layers(self):
        layer = generate(GeneratorSpec(kind="k-regular", n=40, k=6, seed=5))
        report = slem_bounds(merge(layer, layer, 0.5))
        assert report.degrees_matched
        assert report.slem_c <= report.upper_bound + 1e-9

    def test_degree_matched_collapse_to_matrix_blend(self):
        rng = np.random.default_rng(8)
        layer1, layer2 = degree_matched_pair(rng, 9)
        alpha = 0.35
        model = merge(layer1, layer2, alpha)
        blend = alpha * transition_matrix(layer1).entries + (
            1 - alpha
        ) * transition_matrix(layer2).entries
        assert np.abs(model.transition.entries - blend).max() <= 1e-12

    def test_universal_lower_bound_random(self):
        for seed in range(20):
            rng = np.random.default_rng(2000 + seed)
            n = int(rng.integers(4, 15))
            model = merge(random_layer(rng, n), random_layer(rng, n), rng.uniform(0.1, 0.9))
            report = slem_bounds(model)
            assert report.slem_c >= report.lower_bound - 1e-9

    def test_interval_included_when_x0_given(self):
        layer1, layer2 = triangle_pair()
        report = slem_bounds(merge(layer1, layer2, 0.5), X0_TRIANGLE)
        assert report.consensus_interval == pytest.approx((1 / 3, 3 / 8))

    def test_layer_with_isolated_node_leaves_upper_bound_unarmed(self):
        sparse = build_layer(3, [(0, 1, 1)])
        full = build_layer(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
        report = slem_bounds(merge(sparse, full, 0.5))
        assert not report.degrees_matched
        assert np.isnan(report.upper_bound)
        assert report.slem_c >= report.lower_bound - 1e-9


class TestAlphaStability:
    def test_identical_layers_zero_deviation(self):
        layer1, _ = triangle_pair()
        result = alpha_stability_sweep(layer1, layer1, X0_TRIANGLE, [0.2, 0.5, 0.9])
        assert np.abs(result.deviations).max() <= 1e-15
        assert result.within_bound

    def test_alpha_one_endpoint_zero(self):
        layer1, layer2 = triangle_pair()
        result = alpha_stability_sweep(layer1, layer2, X0_TRIANGLE, [1.0])
        assert result.deviations[0] <= 1e-15

    def test_triangle_family_matches_closed_form(self):
        layer1, layer2 = triangle_pair()
        alphas = [0.9, 0.99, 0.999]
        result = alpha_stability_sweep(layer1, layer2, X0_TRIANGLE, alphas)
        e1, e2 = layer1.total_edge_weight, layer2.total_edge_weight
        x1, x2 = 1 / 3, 3 / 8
        for alpha, dev in zip(result.alphas, result.deviations):
            expected = (1 - alpha) * e2 * abs(x2 - x1) / (
                alpha * e1 + (1 - alpha) * e2
            )
            assert dev == pytest.approx(expected, abs=1e-14)
        assert result.within_bound
        ratios = result.deviations / (1.0 - result.alphas)
        assert ratios.max() / ratios.min() < 1.2  # approximately constant


class TestMergedPerturbation:
    def test_identical_layer_gives_zero(self):
        layer1, _ = triangle_pair()
        fit = merged_perturbation_check(layer1, layer1, 0.5, X0_TRIANGLE)
        assert fit.passed
        assert fit.deviations.max() <= 1e-15

    def test_shrinking_edge_reweight_family(self):
        layer1, _ = triangle_pair()
        family = [reweight_edge(layer1, 0, 1, 1 + eps) for eps in (1e-2, 1e-3, 1e-4)]
        fit = merged_perturbation_check(layer1, family, 0.5, X0_TRIANGLE)
        assert fit.armed
        assert fit.passed
        assert abs(fit.slope - 1.0) <= 0.1

    def test_disjoint_support_is_report_only(self):
        layer1, layer2 = complementary_cycles_pair()
        fit = merged_perturbation_check(layer1, layer2, 0.5, np.array([1, 0, 0, 0, 0.0]))
        assert not fit.armed
        assert fit.passed  # nothing armed, nothing failed
        assert fit.e_norms[0] > 0.4
