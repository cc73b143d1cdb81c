# -*- coding: utf-8 -*-
import json
import logging
import math
import os
import shutil
import tempfile
import unittest
from dataclasses import replace
from io import StringIO

import mock
import numpy as np
from hypothesis import given, settings as hsettings, strategies as st

from . import settings
from . import analysis
from .analysis import (approx_magnitude, lp_ball_volume, growth_lower_bound,
    growth_bound_study, gamma_hat_1d, fourier_upper_bound_1d,
    product_counterexample_space, product_counterexample_experiment,
    witness_search)
from .cli import run, parse_scales
from .diversity import (max_diversity, is_positively_weighted,
    diversity_diameter_check, Certificate)
from .exceptions import (InvalidMetric, NonSquareMatrix, NonFiniteEntry,
    InvalidParams, UnsupportedFamily, NonpositiveScale, ExponentOutOfRange,
    EmptySubset, NotPositiveDefinite, IllConditioned,
    DegenerateQuadraticForm, IndefiniteForm, NotConverged, InsufficientRecords,
    QuadratureDivergence, EigensolverFailure)
from .magnitude import (Verdict, similarity, spectrum_diagnostics, weighting,
    magnitude, rayleigh, line_magnitude, scale_sweep,
    magnitude_dimension_estimate, bisect_threshold)
from .metric import (SpaceSpec, FiniteMetricSpace, validate_metric, generate,
    scale_space, snowflake_space, lp_product, hausdorff_distance,
    hausdorff_from_cross, random_metric)
from .negtype import (Classification, negative_type_test, stability_scan,
    gram_matrix)
from .utils import io, linalg
from .utils.families import BaseFamily, get_family, get_family_choices, \
    lp_distances


test_logger = logging.getLogger(__name__)
test_handler = logging.NullHandler()
test_handler.setLevel(logging.DEBUG)
test_logger.addHandler(test_handler)


LOG_SQRT2 = math.log(math.sqrt(2.0))


def two_points(d):
    return FiniteMetricSpace([[0.0, d], [d, 0.0]])


def k32(r=1.0):
    return generate(SpaceSpec('complete_bipartite', {'m': 3, 'n': 2, 'r': r}))


def cloud(seed, count=6, dim=3, p=2.0):
    return generate(SpaceSpec('point_cloud_lp',
                              {'p': p, 'count': count, 'dim': dim},
                              seed=seed))


def line_subset(seed, count=8):
    """Points on the line with gaps in [0.2, 1.5]."""
    rng = np.random.Generator(np.random.Philox(seed))
    xs = np.cumsum(rng.uniform(0.2, 1.5, size=count))
    return FiniteMetricSpace(np.abs(xs[:, None] - xs[None, :]),
                             validate=False), xs


def rng_for(seed):
    return np.random.Generator(np.random.Philox(seed))


class TestFamilies(unittest.TestCase):

    def test_unimplemented_family_raises_not_implemented(self):
        family = BaseFamily()
        self.assertRaises(NotImplementedError, family.points, {}, None)

    def test_get_family_on_not_existing_family(self):
        self.assertRaises(ValueError, get_family, 'fancy_unknown_family')
        self.assertRaises(UnsupportedFamily, get_family, 'fancy_unknown')

    def test_choices_name_every_family(self):
        names = [name for name, title in get_family_choices()]
        self.assertIn('interval_net', names)
        self.assertIn('complete_bipartite', names)
        self.assertEqual(len(names), len(set(names)))

    def test_unknown_parameter(self):
        self.assertRaises(InvalidParams, get_family('interval_net').clean,
                          {'n': 3, 'colour': 'red'})

    def test_lp_distances_below_one_is_power_sum(self):
        d = lp_distances([[0.0, 0.0]], [[1.0, 1.0]], 0.5)
        self.assertAlmostEqual(d[0, 0], 2.0)


class TestMetric(unittest.TestCase):

    def test_validate_two_points(self):
        self.assertTrue(validate_metric([[0, 1], [1, 0]]).ok)

    def test_validate_asymmetric(self):
        report = validate_metric([[0, 1], [2, 0]])
        self.assertFalse(report.ok)
        self.assertEqual(report.worst_asymmetry, 1)

    def test_validate_triangle(self):
        report = validate_metric([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
        self.assertFalse(report.ok)
        self.assertAlmostEqual(report.worst_triangle_violation, 1.0)
        self.assertIn((0, 2, 1), report.offending_triples)

    def test_rejects_bad_matrices(self):
        self.assertRaises(NonSquareMatrix, FiniteMetricSpace, [[0, 1, 2]])
        self.assertRaises(NonFiniteEntry, FiniteMetricSpace,
                          [[0, np.inf], [np.inf, 0]])
        self.assertRaises(InvalidMetric, FiniteMetricSpace,
                          [[0, 1, 3], [1, 0, 1], [3, 1, 0]])
        self.assertRaises(InvalidMetric, FiniteMetricSpace,
                          [[0, 0], [0, 0]])

    def test_invalid_metric_carries_report(self):
        try:
            FiniteMetricSpace([[0, 1], [2, 0]])
        except InvalidMetric as exc:
            self.assertFalse(exc.report.ok)
        else:
            self.fail('asymmetric matrix accepted')

    def test_matrix_is_read_only(self):
        space = two_points(1.0)
        with self.assertRaises(ValueError):
            space.dist[0, 1] = 5.0

    def test_generate_interval(self):
        space = generate(SpaceSpec('interval_net', {'length': 1.0, 'n': 3}))
        self.assertEqual(sorted(set(space.dist.ravel())), [0.0, 0.5, 1.0])

    def test_generate_complete_bipartite(self):
        space = k32()
        self.assertEqual(len(space), 5)
        self.assertEqual(space.dist[0, 3], 1.0)
        self.assertEqual(space.dist[0, 1], 2.0)
        self.assertEqual(space.dist[3, 4], 2.0)

    def test_generate_circle(self):
        space = generate(SpaceSpec('circle_net',
                                   {'circumference': 2 * math.pi, 'n': 4}))
        values = set(np.round(space.dist[np.triu_indices(4, 1)], 12))
        self.assertEqual(values, set(np.round([math.pi / 2, math.pi], 12)))

    def test_generate_is_deterministic(self):
        spec = SpaceSpec('weighted_tree', {'nodes': 9}, seed=11)
        self.assertEqual(generate(spec).dist.tobytes(),
                         generate(spec).dist.tobytes())
        spec = SpaceSpec('point_cloud_lp', {'count': 7}, seed=3)
        self.assertEqual(generate(spec).dist.tobytes(),
                         generate(spec).dist.tobytes())

    def test_generated_families_are_metrics(self):
        specs = [SpaceSpec('ultrametric_tree', {'leaves': 9}, seed=2),
                 SpaceSpec('weighted_tree', {'nodes': 9}, seed=2),
                 SpaceSpec('sphere_fibonacci_net', {'n': 30}),
                 SpaceSpec('hyperbolic_disk_net', {'rings': 3}),
                 SpaceSpec('cantor_net', {'k': 3}),
                 SpaceSpec('chebyshev_net', {'n': 9}),
                 SpaceSpec('grid_net', {'n': 2, 'm': 4, 'p': 0.5}),
                 SpaceSpec('interval_net', {'n': 5}, snowflake=0.5)]
        for spec in specs:
            self.assertTrue(validate_metric(generate(spec).dist).ok,
                            spec.family)

    def test_spec_validation(self):
        self.assertRaises(NonpositiveScale, SpaceSpec, 'interval_net',
                          scale=0.0)
        self.assertRaises(ExponentOutOfRange, SpaceSpec, 'interval_net',
                          snowflake=1.5)
        self.assertRaises(UnsupportedFamily, SpaceSpec, 'moebius_band')

    def test_spec_round_trip_with_infinite_exponent(self):
        spec = SpaceSpec('grid_net', {'p': float('inf'), 'm': 3})
        self.assertEqual(spec.as_dict()['params']['p'], 'inf')

    def test_scale(self):
        self.assertEqual(scale_space(two_points(1.0), 2.0).dist[0, 1], 2.0)
        space = random_metric(5, rng_for(1))
        np.testing.assert_array_equal(scale_space(space, 1.0).dist,
                                      space.dist)
        back = scale_space(scale_space(space, 2.0), 0.5)
        np.testing.assert_allclose(back.dist, space.dist, rtol=1e-15)
        self.assertRaises(NonpositiveScale, scale_space, space, 0.0)

    def test_scale_updates_provenance(self):
        space = generate(SpaceSpec('interval_net', {'n': 3}, scale=2.0))
        self.assertEqual(scale_space(space, 3.0).provenance.scale, 6.0)

    def test_snowflake(self):
        space = random_metric(5, rng_for(2))
        np.testing.assert_array_equal(snowflake_space(space, 1.0).dist,
                                      space.dist)
        self.assertEqual(snowflake_space(two_points(4.0), 0.5).dist[0, 1],
                         2.0)
        left = snowflake_space(scale_space(space, 4.0), 0.5).dist
        right = scale_space(snowflake_space(space, 0.5), 2.0).dist
        np.testing.assert_allclose(left, right, atol=1e-12)
        self.assertRaises(ExponentOutOfRange, snowflake_space, space, 2.0)

    def test_product_taxicab(self):
        product = lp_product(two_points(1.0), two_points(1.0), 1)
        self.assertEqual(len(product), 4)
        self.assertEqual(sorted(product.dist[0]), [0.0, 1.0, 1.0, 2.0])
        self.assertEqual(product.labels[3], (1, 1))

    def test_product_with_singleton(self):
        space = random_metric(4, rng_for(3))
        point = FiniteMetricSpace([[0.0]])
        np.testing.assert_allclose(lp_product(point, space, 2).dist,
                                   space.dist)

    def test_product_similarity_factorizes(self):
        a, b = random_metric(3, rng_for(4)), random_metric(3, rng_for(5))
        z = similarity(lp_product(a, b, 1)).z
        expected = np.kron(similarity(a).z, similarity(b).z)
        np.testing.assert_allclose(z, expected, atol=1e-14)

    def test_product_exponent(self):
        self.assertRaises(ExponentOutOfRange, lp_product, two_points(1.0),
                          two_points(1.0), 0.5)

    def test_hausdorff(self):
        space = two_points(3.0)
        self.assertEqual(hausdorff_distance([0, 1], [0, 1], space), 0.0)
        self.assertEqual(hausdorff_distance([0], [1], space), 3.0)
        # odd points sit one spacing (0.1) away from the even ones
        net = generate(SpaceSpec('interval_net', {'length': 1.0, 'n': 11}))
        self.assertAlmostEqual(
            hausdorff_distance(range(11), range(0, 11, 2), net), 0.1)
        self.assertRaises(EmptySubset, hausdorff_distance, [], [0], space)

    def test_hausdorff_is_a_metric_on_subsets(self):
        space = cloud(17, count=12)
        rng = rng_for(17)
        for _ in range(200):
            a, b, c = [rng.choice(12, size=int(rng.integers(1, 8)),
                                  replace=False) for _ in range(3)]
            ab = hausdorff_distance(a, b, space)
            self.assertEqual(ab, hausdorff_distance(b, a, space))
            self.assertLessEqual(ab, hausdorff_distance(a, c, space) +
                                 hausdorff_distance(c, b, space) + 1e-12)
            self.assertEqual(hausdorff_distance(a, a, space), 0.0)

    def test_cantor_levels_are_nested(self):
        family = get_family('cantor_net')
        limit = family.points(family.clean({'length': 1.0, 'k': 12}), None)
        for k in range(6):
            coarse = family.points(family.clean({'length': 1.0, 'k': k}),
                                   None)
            fine = family.points(family.clean({'length': 1.0, 'k': k + 1}),
                                 None)
            cross = family.cross_distances(coarse, fine, {'p': 2.0})
            self.assertLessEqual(cross.min(axis=1).max(), 1e-12)
            gap = hausdorff_from_cross(
                family.cross_distances(coarse, limit, {'p': 2.0}))
            self.assertAlmostEqual(gap, 3.0 ** -(k + 1), delta=1e-12)


class TestMagnitude(unittest.TestCase):

    def test_similarity(self):
        np.testing.assert_array_equal(similarity(FiniteMetricSpace([[0]])).z,
                                      [[1.0]])
        z = similarity(two_points(0.7)).z
        self.assertEqual(z[0, 1], math.exp(-0.7))
        space = random_metric(4, rng_for(6))
        np.testing.assert_allclose(similarity(scale_space(space, 3.0)).z,
                                   similarity(space).z ** 3, atol=1e-14)

    def test_singleton(self):
        point = FiniteMetricSpace([[0.0]])
        diagnostics = spectrum_diagnostics(point)
        self.assertEqual(diagnostics.lambda_min, 1.0)
        self.assertEqual(diagnostics.verdict, Verdict.POSITIVE_DEFINITE)
        report = weighting(point)
        self.assertEqual(report.weighting.tolist(), [1.0])
        self.assertEqual(report.magnitude, 1.0)

    def test_two_point_law(self):
        for d in (0.1, 1.0, 10.0):
            self.assertAlmostEqual(magnitude(two_points(d)),
                                   2.0 / (1.0 + math.exp(-d)), delta=1e-12)

    @hsettings(max_examples=50, deadline=None)
    @given(st.floats(min_value=1e-3, max_value=30.0))
    def test_two_point_law_property(self, d):
        value = magnitude(two_points(d))
        self.assertAlmostEqual(value, 2.0 / (1.0 + math.exp(-d)), delta=1e-12)

    def test_k32_verdicts(self):
        self.assertEqual(spectrum_diagnostics(k32(0.3)).verdict,
                         Verdict.INDEFINITE)
        self.assertLess(spectrum_diagnostics(k32(0.3)).lambda_min, 0)
        self.assertEqual(spectrum_diagnostics(k32(0.5)).verdict,
                         Verdict.POSITIVE_DEFINITE)

    def test_not_positive_definite(self):
        try:
            weighting(k32(0.3))
        except NotPositiveDefinite as exc:
            self.assertLess(exc.diagnostics.lambda_min, 0)
        else:
            self.fail('indefinite space has a weighting')

    def test_k32_threshold(self):
        def make(r):
            return k32(r)
        threshold = bisect_threshold(make, 0.2, 0.5)
        self.assertAlmostEqual(threshold, LOG_SQRT2, delta=1e-3)

    def test_bisect_needs_sign_change(self):
        self.assertRaises(InvalidParams, bisect_threshold, k32, 0.5, 1.0)

    def test_circle_is_homogeneous(self):
        space = generate(SpaceSpec('circle_net',
                                   {'circumference': 2 * math.pi, 'n': 100}))
        w = weighting(space).weighting
        self.assertLess(np.abs(w - w.mean()).max(), 1e-10)

    def test_line_magnitude(self):
        space, xs = line_subset(7)
        self.assertAlmostEqual(magnitude(space), line_magnitude(xs),
                               delta=1e-10)
        self.assertEqual(line_magnitude([3.0]), 1.0)

    def test_ill_conditioned_flag(self):
        space = two_points(1.0)
        self.assertFalse(weighting(space).ill_conditioned)
        with mock.patch.object(settings, 'ILL_CONDITIONED', 1.0):
            report = weighting(space)
            self.assertTrue(report.ill_conditioned)
            self.assertRaises(IllConditioned, weighting, space, strict=True)

    def test_weighting_is_reproducible(self):
        for seed in range(10):
            space = cloud(seed, count=9)
            first = weighting(space).weighting
            second = weighting(space).weighting
            self.assertEqual(first.tobytes(), second.tobytes())

    def test_lanczos_agrees_with_dense(self):
        space = generate(SpaceSpec('interval_net', {'length': 3.0, 'n': 40}))
        dense = spectrum_diagnostics(space)
        with mock.patch.object(settings, 'DENSE_EIGEN_LIMIT', 10):
            sparse = spectrum_diagnostics(space)
        self.assertEqual(dense.method, 'dense')
        self.assertEqual(sparse.method, 'lanczos')
        self.assertAlmostEqual(sparse.lambda_min, dense.lambda_min,
                               delta=1e-8)
        self.assertAlmostEqual(sparse.lambda_max, dense.lambda_max,
                               delta=1e-8 * dense.lambda_max)

    def test_eigensolver_failure_reports_iterations(self):
        space = cloud(3)
        broken = mock.Mock(
            side_effect=linalg.la.LinAlgError('no convergence'))
        with mock.patch.object(linalg.la, 'eigvalsh', broken):
            try:
                spectrum_diagnostics(space)
            except EigensolverFailure as exc:
                self.assertEqual(exc.iterations, 0)
            else:
                self.fail('dense failure not reported')
        stalled = mock.Mock(side_effect=linalg.ArpackNoConvergence(
            'stalled', np.empty(0), np.empty((0, 0))))
        with mock.patch.object(settings, 'DENSE_EIGEN_LIMIT', 2), \
                mock.patch.object(linalg, 'eigsh', stalled), \
                mock.patch.object(linalg.la, 'eigvalsh', broken):
            with self.assertRaises(EigensolverFailure) as context:
                spectrum_diagnostics(space)
        self.assertEqual(context.exception.iterations,
                         settings.LANCZOS_MAX_ITERATIONS)

    def test_rayleigh(self):
        space = cloud(1)
        report = weighting(space)
        self.assertAlmostEqual(rayleigh(space, report.weighting),
                               report.magnitude, delta=1e-10)
        mass = np.zeros(len(space))
        mass[2] = 1.0
        self.assertAlmostEqual(rayleigh(space, mass), 1.0)
        self.assertRaises(DegenerateQuadraticForm, rayleigh, space,
                          np.zeros(len(space)))
        self.assertRaises(InvalidParams, rayleigh, space, [1.0])

    def test_rayleigh_sup(self):
        for seed in range(100):
            space = cloud(seed, count=5)
            report = weighting(space)
            self.assertAlmostEqual(rayleigh(space, report.weighting),
                                   report.magnitude, delta=1e-9)
            rng = rng_for(1000 + seed)
            for _ in range(100):
                mu = rng.normal(size=len(space))
                self.assertLessEqual(rayleigh(space, mu),
                                     report.magnitude + 1e-9)

    def test_magnitude_at_least_one(self):
        for seed in range(20):
            self.assertGreaterEqual(magnitude(cloud(seed)), 1.0 - 1e-12)

    def test_deleting_points(self):
        for seed in range(200):
            space = cloud(seed, count=6)
            index = seed % len(space)
            smaller = space.without(index)
            self.assertLessEqual(magnitude(smaller),
                                 magnitude(space) + 1e-10)
            self.assertLessEqual(max_diversity(smaller).diversity,
                                 max_diversity(space).diversity + 1e-10)

    def test_positive_definite_under_dilation(self):
        checked = 0
        for seed in range(100):
            space = random_metric(5, rng_for(seed))
            for t in (0.25, 0.5, 1.0):
                if spectrum_diagnostics(scale_space(space, t)).verdict \
                        is Verdict.INDEFINITE:
                    continue
                checked += 1
                for factor in (2.0, 3.0):
                    diagnostics = spectrum_diagnostics(
                        scale_space(space, factor * t))
                    self.assertGreaterEqual(diagnostics.lambda_min,
                                            -diagnostics.tolerance_used)
        self.assertGreater(checked, 0)


class TestScaleSweep(unittest.TestCase):

    def test_two_points(self):
        sweep = scale_sweep(two_points(1.0), [3.0, 1.0, 2.0])
        self.assertEqual(sweep.grid, (1.0, 2.0, 3.0))
        values = [r.magnitude for r in sweep.records]
        for t, value in zip(sweep.grid, values):
            self.assertAlmostEqual(value, 2.0 / (1.0 + math.exp(-t)))
        self.assertEqual(values, sorted(values))

    def test_k32_records(self):
        sweep = scale_sweep(k32(1.0), [0.25, 1.0])
        self.assertEqual(sweep.records[0].verdict, Verdict.INDEFINITE)
        self.assertIsNone(sweep.records[0].magnitude)
        self.assertEqual(sweep.records[1].verdict, Verdict.POSITIVE_DEFINITE)

    def test_report_describes_grid_and_space(self):
        space = generate(SpaceSpec('interval_net', {'n': 4}))
        data = scale_sweep(space, [2.0, 1.0]).as_dict()
        self.assertEqual(data['grid'], [1.0, 2.0])
        self.assertEqual(data['space']['points'], 4)
        self.assertEqual(data['space']['spec']['family'], 'interval_net')
        self.assertIsNone(
            scale_sweep(two_points(1.0), [1.0]).as_dict()['space']['spec'])

    def test_single_scale_matches_direct_call(self):
        space = cloud(4)
        sweep = scale_sweep(space, [1.0])
        self.assertEqual(sweep.records[0].magnitude, magnitude(space))

    def test_with_diversity(self):
        sweep = scale_sweep(two_points(1.0), [1.0], with_diversity=True)
        record = sweep.records[0]
        self.assertAlmostEqual(record.diversity, record.magnitude, delta=1e-9)

    def test_threads_give_same_records(self):
        space = cloud(5)
        grid = [0.5, 1.0, 2.0, 4.0]
        serial = scale_sweep(space, grid)
        with mock.patch.object(settings, 'THREADS', 3):
            threaded = scale_sweep(space, grid)
        self.assertEqual(serial, threaded)

    def test_bad_grids(self):
        self.assertRaises(InvalidParams, scale_sweep, two_points(1.0), [])
        self.assertRaises(NonpositiveScale, scale_sweep, two_points(1.0),
                          [0.0, 1.0])

    def test_dimension_of_two_points(self):
        sweep = scale_sweep(two_points(1.0), [100.0, 300.0, 1000.0])
        slope, stderr = magnitude_dimension_estimate(sweep, (100.0, 1000.0))
        self.assertLess(abs(slope), 0.01)

    def test_dimension_needs_records(self):
        sweep = scale_sweep(two_points(1.0), [1.0, 2.0])
        self.assertRaises(InsufficientRecords, magnitude_dimension_estimate,
                          sweep, (1.0, 2.0))

    def test_dimension_of_interval(self):
        space = generate(SpaceSpec('interval_net', {'n': 2001}))
        grid = [8.0, 16.0, 32.0]
        slope, _ = magnitude_dimension_estimate(scale_sweep(space, grid),
                                                (8.0, 32.0))
        xs = np.linspace(0.0, 1.0, 2001)
        exact = np.polyfit(np.log(grid), np.log(
            [line_magnitude(t * xs) for t in grid]), 1)[0]
        self.assertAlmostEqual(slope, exact, delta=1e-6)
        self.assertLessEqual(slope, 1.05)


class TestDiversity(unittest.TestCase):

    def test_singleton(self):
        report = max_diversity(FiniteMetricSpace([[0.0]]))
        self.assertEqual(report.diversity, 1.0)
        self.assertEqual(report.measure.tolist(), [1.0])

    def test_two_points(self):
        for d in (0.1, 1.0, 5.0):
            report = max_diversity(two_points(d))
            self.assertAlmostEqual(report.diversity,
                                   2.0 / (1.0 + math.exp(-d)), delta=1e-9)
            np.testing.assert_allclose(report.measure, [0.5, 0.5])

    def test_uniform_points_on_interval(self):
        space = generate(SpaceSpec('interval_net', {'n': 10}))
        report = max_diversity(space)
        self.assertAlmostEqual(report.diversity, magnitude(space),
                               delta=1e-6 * magnitude(space))

    def test_objective_never_increases(self):
        space = cloud(3, count=8)
        report = max_diversity(space, trace=True, polish_every=0)
        trace = np.array(report.objective_trace)
        self.assertTrue(np.all(np.diff(trace) <= 1e-15))

    def test_report_invariants(self):
        report = max_diversity(cloud(9, count=7))
        self.assertGreaterEqual(report.diversity, 1.0)
        self.assertGreaterEqual(report.upper_bound, report.diversity)
        self.assertAlmostEqual(report.measure.sum(), 1.0)
        self.assertTrue(np.all(report.measure >= 0))
        self.assertTrue(report.converged)

    def test_indefinite_space(self):
        self.assertRaises(IndefiniteForm, max_diversity, k32(0.3))

    def test_not_converged(self):
        space = cloud(2, count=8)
        report = max_diversity(space, max_iters=1, polish_every=0)
        self.assertFalse(report.converged)
        self.assertRaises(NotConverged, max_diversity, space, max_iters=1,
                          polish_every=0, strict=True)

    def test_agrees_with_magnitude_on_lines(self):
        for seed in range(100):
            space, _ = line_subset(seed)
            value = magnitude(space)
            report = max_diversity(space)
            self.assertLessEqual(report.fw_gap, 1e-8)
            self.assertLessEqual(report.iterations, 100000)
            self.assertAlmostEqual(report.diversity, value, delta=1e-6 * value)

    def test_agrees_with_magnitude_on_ultrametrics(self):
        for seed in range(100):
            space = generate(SpaceSpec('ultrametric_tree', {'leaves': 8},
                                       seed=seed))
            value = magnitude(space)
            report = max_diversity(space)
            self.assertLessEqual(report.fw_gap, 1e-8)
            self.assertAlmostEqual(report.diversity, value, delta=1e-6 * value)

    def test_not_above_magnitude(self):
        for seed in range(30):
            space = cloud(seed, count=6, p=1.0)
            self.assertLessEqual(max_diversity(space).diversity,
                                 magnitude(space) + 1e-9)

    def test_weight_measure(self):
        space = generate(SpaceSpec('ultrametric_tree', {'leaves': 6}, seed=4))
        report = max_diversity(space)
        scaled, residual = report.as_weight_measure(space)
        self.assertLess(residual, 1e-6)
        np.testing.assert_allclose(scaled, weighting(space).weighting,
                                   atol=1e-6)

    def test_positively_weighted(self):
        tree = generate(SpaceSpec('ultrametric_tree', {'leaves': 7}, seed=8))
        self.assertEqual(is_positively_weighted(tree),
                         (True, Certificate.CROSS_CHECKED))
        net = generate(SpaceSpec('interval_net', {'n': 6}))
        self.assertTrue(is_positively_weighted(net)[0])
        self.assertEqual(is_positively_weighted(net, cross_check=False),
                         (True, Certificate.WEIGHTING))

    def test_cross_with_negative_weight(self):
        # the centre of {0, +-e1, +-e2} in l_1 gets weight (1 - 3q)/(1 + q)
        space = scale_space(product_counterexample_space().subspace(
            [0, 5, 10, 15, 20]), 0.5)
        flag, certificate = is_positively_weighted(space)
        self.assertFalse(flag)
        self.assertLess(weighting(space).weighting.min(), 0)

    def test_diameter_bound(self):
        self.assertTrue(diversity_diameter_check(FiniteMetricSpace([[0.0]])))
        self.assertTrue(diversity_diameter_check(two_points(0.3)))
        for seed in range(200):
            self.assertTrue(diversity_diameter_check(cloud(seed, count=5)))

    def test_diameter_slack_is_additive(self):
        space = two_points(0.3)
        bound = math.exp(0.3)
        report = max_diversity(space)
        with mock.patch('maglab.diversity.max_diversity') as solver:
            solver.return_value = replace(report, diversity=bound + 5e-10)
            self.assertTrue(diversity_diameter_check(space, slack=1e-9))
            solver.return_value = replace(report, diversity=bound + 2e-9)
            self.assertFalse(diversity_diameter_check(space, slack=1e-9))
        self.assertTrue(diversity_diameter_check(space, slack=0.0))

    def test_continuous_in_the_metric(self):
        for seed in range(10):
            rng = rng_for(seed)
            points = rng.uniform(0.0, 1.0, (8, 2))
            base = max_diversity(FiniteMetricSpace(
                lp_distances(points, points, 2.0), validate=False)).diversity
            for delta in (1e-3, 1e-4):
                moved = points + delta * rng.uniform(-1.0, 1.0, points.shape) \
                    / math.sqrt(2.0)
                value = max_diversity(FiniteMetricSpace(
                    lp_distances(moved, moved, 2.0),
                    validate=False)).diversity
                self.assertLessEqual(abs(value - base) / delta, 100.0)

    def test_report_dict_keeps_trace(self):
        report = max_diversity(cloud(6, count=5), trace=True)
        trace = report.as_dict()['objective_trace']
        self.assertEqual(len(trace), len(report.objective_trace))
        self.assertTrue(trace)


class TestNegativeType(unittest.TestCase):

    def assertWitness(self, report, space):
        x = report.witness_vector
        self.assertIsNotNone(x)
        self.assertLessEqual(abs(x.sum()), 1e-10)
        self.assertGreater(report.witness_value(space), 0)

    def test_four_point_metrics(self):
        for seed in range(1000):
            report = negative_type_test(random_metric(4, rng_for(seed)))
            self.assertTrue(report.negative_type, seed)
            self.assertIsNone(report.witness_vector)

    def test_trees_and_clouds(self):
        for seed in range(100):
            for family, params in (('ultrametric_tree', {'leaves': 8}),
                                   ('weighted_tree', {'nodes': 8})):
                space = generate(SpaceSpec(family, params, seed=seed))
                self.assertTrue(negative_type_test(space).negative_type)
            p = (0.5, 1.0, 1.5, 2.0)[seed % 4]
            self.assertTrue(negative_type_test(
                cloud(seed, count=7, p=p)).negative_type)

    def test_nets(self):
        for spec in (SpaceSpec('sphere_fibonacci_net', {'n': 40}),
                     SpaceSpec('hyperbolic_disk_net', {'rings': 3})):
            self.assertTrue(negative_type_test(generate(spec)).negative_type)

    def test_k32(self):
        space = k32(1.0)
        report = negative_type_test(space)
        self.assertFalse(report.negative_type)
        self.assertWitness(report, space)

    def test_basepoint_independence(self):
        for seed in range(50):
            space = random_metric(6, rng_for(seed))
            verdicts = set(negative_type_test(space, b).negative_type
                           for b in range(len(space)))
            self.assertEqual(len(verdicts), 1)

    def test_bad_basepoint(self):
        self.assertRaises(InvalidParams, gram_matrix, two_points(1.0), 2)

    def test_scan_of_l2_grid(self):
        space = generate(SpaceSpec('grid_net', {'n': 2, 'm': 4, 'p': 2}))
        report = stability_scan(space)
        self.assertEqual(report.classification,
                         Classification.STABLY_POSITIVE_DEFINITE)
        self.assertTrue(report.consistent)

    def test_scan_of_k32(self):
        report = stability_scan(k32(1.0))
        self.assertEqual(report.classification, Classification.NOT_STABLY_PD)
        self.assertIn(2.0 ** -10, report.failing_scales)
        self.assertLess(report.records[0].lambda_min, 0)

    def test_scan_of_singleton(self):
        report = stability_scan(FiniteMetricSpace([[0.0]]))
        self.assertEqual(report.classification,
                         Classification.STABLY_POSITIVE_DEFINITE)

    def test_negative_type_forbids_indefinite_scales(self):
        for seed in range(30):
            space = random_metric(5, rng_for(seed))
            report = stability_scan(space)
            if report.negative_type.negative_type:
                self.assertFalse(report.failing_scales)
            self.assertTrue(report.consistent)

    def test_undetermined(self):
        # scanning only large scales cannot refute K_{3,2}
        report = stability_scan(k32(1.0), [1.0, 2.0])
        self.assertEqual(report.classification, Classification.UNDETERMINED)

    def test_snowflakes_keep_negative_type(self):
        for seed in range(100):
            space = cloud(seed, count=7, p=2.0)
            self.assertTrue(negative_type_test(space).negative_type)
            for alpha in (0.25, 0.5, 0.75):
                snowflake = snowflake_space(space, alpha)
                self.assertTrue(negative_type_test(snowflake).negative_type,
                                (seed, alpha))


class TestConvergence(unittest.TestCase):

    def test_interval_families_agree(self):
        uniform = approx_magnitude(
            SpaceSpec('interval_net', {'length': 2.0}), [11, 101, 1001, 2001])
        chebyshev = approx_magnitude(
            SpaceSpec('chebyshev_net', {'length': 2.0}), [17, 129, 1025, 2049])
        self.assertAlmostEqual(uniform.extrapolated_limit, 2.0, delta=1e-3)
        self.assertAlmostEqual(uniform.extrapolated_limit,
                               chebyshev.extrapolated_limit, delta=1e-4)
        self.assertTrue(uniform.monotone)
        self.assertTrue(chebyshev.monotone)
        values = [r.magnitude for r in uniform.records]
        self.assertTrue(all(b >= a - 1e-10
                            for a, b in zip(values, values[1:])))
        self.assertAlmostEqual(values[-1], uniform.extrapolated_limit,
                               delta=1e-3)
        for record in uniform.records + chebyshev.records:
            self.assertLessEqual(record.magnitude,
                                 uniform.extrapolated_limit + 1e-6)
        self.assertEqual(uniform.records[-1].gap, 0.0)

    def test_cantor(self):
        study = approx_magnitude(SpaceSpec('cantor_net', {'length': 1.0}),
                                 list(range(4, 11)))
        self.assertTrue(study.nested)
        self.assertTrue(study.monotone)
        values = [r.magnitude for r in study.records]
        self.assertLess(abs(values[-1] - values[-2]), 1e-4)

    def test_singleton(self):
        study = approx_magnitude(SpaceSpec('interval_net', {'length': 0.0}),
                                 [1])
        self.assertEqual(study.extrapolated_limit, 1.0)

    def test_quadrature_lower_bound(self):
        study = approx_magnitude(SpaceSpec('interval_net', {'length': 2.0}),
                                 [11, 41], quadrature=True)
        for record in study.records:
            self.assertLessEqual(record.quadrature_bound,
                                 record.magnitude + 1e-10)
            self.assertGreater(record.quadrature_bound, 1.0)

    def test_fit_window(self):
        template = SpaceSpec('interval_net', {'length': 2.0})
        study = approx_magnitude(template, [11, 21, 41, 81], fit_window=2)
        self.assertEqual(len(study.records), 4)
        self.assertGreater(study.extrapolated_limit,
                           study.records[-1].magnitude)
        self.assertEqual(study.fit_residual, 0.0)

    def test_bad_levels(self):
        template = SpaceSpec('interval_net', {})
        self.assertRaises(InvalidParams, approx_magnitude, template, [5, 3])
        self.assertRaises(InvalidParams, approx_magnitude,
                          SpaceSpec('weighted_tree', {}), [1, 2])


class TestGrowth(unittest.TestCase):

    def test_ball_volumes(self):
        self.assertAlmostEqual(lp_ball_volume(2, 1), 2.0, delta=1e-12)
        self.assertAlmostEqual(lp_ball_volume(2, 2), math.pi, delta=1e-12)
        for p in (0.5, 1.0, 3.0, float('inf')):
            self.assertAlmostEqual(lp_ball_volume(1, p), 2.0, delta=1e-12)
        self.assertRaises(InvalidParams, lp_ball_volume, 0, 2)
        self.assertRaises(InvalidParams, lp_ball_volume, 2, -1)

    def test_lower_bound(self):
        for t in (1.0, 3.0, 10.0):
            self.assertAlmostEqual(growth_lower_bound(2, 1, 1, 1.0, t),
                                   t * t / 4.0)
            self.assertAlmostEqual(growth_lower_bound(1, 2, 1, 3.0, t),
                                   3.0 * t / 2.0)
        self.assertEqual(growth_lower_bound(2, 1, 1, 1.0, 0.0), 0.0)
        self.assertRaises(InvalidParams, growth_lower_bound, 2, 1, 1, 0.0, 1)
        self.assertRaises(InvalidParams, growth_lower_bound, 2, 3, 1, 1.0, 1)

    def test_grid(self):
        template = SpaceSpec('grid_net', {'n': 2, 'm': 41, 'p': 1})
        study = growth_bound_study(template, [4.0, 8.0, 11.3137, 16.0])
        self.assertTrue(study.satisfied)
        axis = np.linspace(0.0, 1.0, 41)
        for check in study.checks:
            t = check.t
            self.assertGreaterEqual(check.net_magnitude, t * t / 4.0 * 0.95)
            self.assertLessEqual(check.net_magnitude,
                                 (1 + t / 2.0) ** 2 * 1.05)
            self.assertAlmostEqual(check.net_magnitude,
                                   line_magnitude(t * axis) ** 2,
                                   delta=1e-6 * check.net_magnitude)
        sweep = scale_sweep(generate(template), [8.0, 11.3137, 16.0])
        slope, _ = magnitude_dimension_estimate(sweep, (8.0, 16.0))
        exact = np.polyfit(np.log([8.0, 11.3137, 16.0]), np.log(
            [line_magnitude(t * axis) ** 2 for t in (8.0, 11.3137, 16.0)]),
            1)[0]
        self.assertAlmostEqual(slope, exact, delta=1e-6)
        self.assertLessEqual(slope, 2.05)

    def test_interval(self):
        template = SpaceSpec('interval_net', {'length': 1.0, 'n': 2001})
        study = growth_bound_study(template, [10.0])
        check = study.checks[0]
        self.assertAlmostEqual(check.lower_bound, 5.0)
        self.assertTrue(check.satisfied)
        self.assertIsNone(study.slope)

    def test_singleton(self):
        template = SpaceSpec('grid_net', {'n': 2, 'm': 1})
        study = growth_bound_study(template, [1.0])
        self.assertTrue(study.satisfied)
        self.assertEqual(study.checks[0].net_magnitude, 1.0)

    def test_family_restriction(self):
        self.assertRaises(InvalidParams, growth_bound_study,
                          SpaceSpec('circle_net', {}), [1.0])


class TestFourier(unittest.TestCase):

    def test_closed_forms(self):
        report = gamma_hat_1d(1)
        expected = 2.0 / (1.0 + 4 * math.pi ** 2 * report.grid ** 2)
        self.assertLess(np.abs(report.values - expected).max(), 1e-6)
        report = gamma_hat_1d(2)
        expected = math.sqrt(math.pi) * np.exp(-math.pi ** 2 *
                                               report.grid ** 2)
        self.assertLess(np.abs(report.values - expected).max(), 1e-6)

    def test_positive_and_decreasing(self):
        for p, half_width, nodes in ((0.5, 600.0, 2 ** 20),
                                     (1.5, None, None)):
            report = gamma_hat_1d(p, half_width=half_width, nodes=nodes)
            self.assertTrue(report.positive, p)
            self.assertTrue(report.radially_decreasing, p)
            self.assertGreater(report.fitted_c, 0)

    def test_tail_too_heavy(self):
        self.assertRaises(QuadratureDivergence, gamma_hat_1d, 0.5)

    def test_exponent_range(self):
        self.assertRaises(InvalidParams, gamma_hat_1d, 2.5)

    def test_upper_bound(self):
        net = magnitude(generate(SpaceSpec('interval_net',
                                           {'length': 2.0, 'n': 2001})))
        for p in (1.0, 2.0):
            bound = fourier_upper_bound_1d(2.0, p, 1.0, 3.0)
            self.assertGreaterEqual(bound.bound, net)
            self.assertGreaterEqual(bound.bound, 2.0)
        self.assertGreaterEqual(fourier_upper_bound_1d(0.0, 1, 1, 1.0).bound,
                                1.0)

    def test_upper_bound_grows_with_dilation(self):
        small = fourier_upper_bound_1d(1.0, 1, 1, 2.0, t=1.0).bound
        large = fourier_upper_bound_1d(1.0, 1, 1, 2.0, t=4.0).bound
        self.assertGreater(large, small)
        self.assertGreaterEqual(large, line_magnitude([0.0, 4.0]))

    def test_upper_bound_checks_radius(self):
        self.assertRaises(InvalidParams, fourier_upper_bound_1d, 2.0, 1, 1,
                          2.0)


class TestExperiments(unittest.TestCase):

    def test_product_distances(self):
        space = product_counterexample_space()
        self.assertEqual(len(space), 25)
        # (e1, e1) and (0, 0) differ by 1 in both factors
        self.assertAlmostEqual(space.dist[6, 0], math.sqrt(2.0))

    def test_product_is_not_stably_positive_definite(self):
        report = product_counterexample_experiment()
        self.assertEqual(report.classification, Classification.NOT_STABLY_PD)
        self.assertTrue(report.failing_scales)
        self.assertLess(min(r.lambda_min for r in report.records), 0)
        self.assertFalse(report.negative_type.negative_type)

    def test_no_witness_in_l2(self):
        result = witness_search(2.0, 3, budget=40, seed=1)
        self.assertFalse(result.found)
        self.assertEqual(result.trials, 40)
        self.assertGreaterEqual(result.smallest_lambda, -1e-8)

    def test_zero_budget(self):
        result = witness_search(float('inf'), 3, budget=0)
        self.assertFalse(result.found)
        self.assertEqual(result.trials, 0)
        self.assertIsNone(result.smallest_lambda)

    def test_witness_in_sup_norm(self):
        # Frechet embedding of K_{3,2} into l_inf^5
        frechet = np.array(k32(1.0).dist)
        with mock.patch.object(analysis, 'sample_cloud',
                               return_value=frechet) as sampler:
            result = witness_search(float('inf'), 5, budget=5, seed=3)
        self.assertTrue(sampler.called)
        self.assertTrue(result.found)
        self.assertEqual(result.witness.trial, 0)
        self.assertLess(result.witness.scale, LOG_SQRT2)
        self.assertLess(result.witness.lambda_min, 0)
        np.testing.assert_allclose(
            result.witness.space(float('inf')).dist, frechet)

    def test_seeded_witness_in_sup_norm(self):
        result = witness_search(float('inf'), 3, budget=10 ** 4, seed=0)
        self.assertTrue(result.found)
        self.assertEqual(result.trials, 36)
        self.assertEqual(result.witness.trial, 35)
        self.assertEqual(result.witness.scale, 2.0 ** -10)
        self.assertLess(result.witness.lambda_min, 0)
        result = witness_search(float('inf'), 3, budget=10 ** 4, seed=0,
                                lattice=True)
        self.assertTrue(result.found)
        self.assertEqual(result.trials, 6)

    def test_search_is_reproducible(self):
        first = witness_search(float('inf'), 3, budget=20, seed=5,
                               lattice=True)
        with mock.patch.object(settings, 'THREADS', 4):
            second = witness_search(float('inf'), 3, budget=20, seed=5,
                                    lattice=True)
        self.assertEqual(first.trials, second.trials)
        self.assertEqual(first.smallest_lambda, second.smallest_lambda)


class TestReports(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_json_round_trip(self):
        path = os.path.join(self.tmp, 'magnitude.json')
        io.dump_json(weighting(two_points(1.0)), path)
        data = io.load_report(path)
        self.assertEqual(data['schema'], 'magnitude')
        self.assertEqual(data['schema_version'], settings.SCHEMA_VERSION)
        self.assertEqual(data['diagnostics']['verdict'], 'PositiveDefinite')

    def test_non_finite_values(self):
        self.assertEqual(io.to_jsonable([float('inf'), np.float64('nan')]),
                         ['inf', 'nan'])

    def test_wrong_schema_version(self):
        path = os.path.join(self.tmp, 'old.json')
        with open(path, 'w') as fobj:
            json.dump({'schema': 'magnitude', 'schema_version': 0}, fobj)
        self.assertRaises(InvalidParams, io.load_report, path)

    def test_sweep_csv(self):
        path = os.path.join(self.tmp, 'sweep.csv')
        sweep = scale_sweep(k32(1.0), [0.25, 1.0])
        io.dump_csv(sweep.header, sweep.rows(), path)
        with open(path) as fobj:
            lines = fobj.read().splitlines()
        self.assertEqual(lines[0], 't,lambda_min,verdict,magnitude,diversity,'
                                   'error')
        self.assertEqual(len(lines), 3)
        self.assertIn('Indefinite', lines[1])


class TestCommandLine(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def write_matrix(self, name, matrix):
        path = os.path.join(self.tmp, name)
        io.save_matrix(matrix, path)
        return path

    def write_spec(self, name, spec):
        path = os.path.join(self.tmp, name)
        io.dump_json(spec.as_dict(), path)
        return path

    def call(self, *argv):
        with mock.patch('sys.stdout', new_callable=StringIO) as out, \
                mock.patch('sys.stderr', new_callable=StringIO) as err:
            result = run(list(argv))
        return result, out.getvalue(), err.getvalue()

    def test_magnitude_of_two_points(self):
        path = self.write_matrix('two.csv', [[0, 1], [1, 0]])
        report = os.path.join(self.tmp, 'out.json')
        result, out, _ = self.call('magnitude', '--matrix', path,
                                   '--json', report)
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.report_path, report)
        self.assertIn('magnitude: 1.462117', out)
        with open(report) as fobj:
            data = json.load(fobj)
        self.assertAlmostEqual(data['magnitude'], 2 / (1 + math.exp(-1)))

    def test_negtype_of_k32(self):
        path = self.write_spec('k32.json', SpaceSpec(
            'complete_bipartite', {'m': 3, 'n': 2, 'r': 1.0}))
        result, out, _ = self.call('negtype', '--spec', path)
        self.assertEqual(result.exit_code, 0)
        self.assertIn('negative_type: false', out)

    def test_not_positive_definite(self):
        path = self.write_matrix('k32.csv', k32(0.3).dist)
        result, _, err = self.call('magnitude', '--matrix', path)
        self.assertEqual(result.exit_code, 1)
        self.assertIn('NotPositiveDefinite', err)
        self.assertIn('lambda_min', err)

    def test_usage_error(self):
        result, _, _ = self.call('magnitude')
        self.assertEqual(result.exit_code, 2)
        result, _, _ = self.call('sweep', '--matrix', 'x.csv',
                                 '--scales', 'a:b')
        self.assertEqual(result.exit_code, 2)

    def test_validate(self):
        good = self.write_matrix('good.csv', [[0, 1], [1, 0]])
        bad = self.write_matrix('bad.csv', [[0, 1, 3], [1, 0, 1], [3, 1, 0]])
        self.assertEqual(self.call('validate', good)[0].exit_code, 0)
        self.assertEqual(self.call('validate', bad)[0].exit_code, 1)

    def test_sweep_writes_csv(self):
        path = self.write_matrix('two.csv', [[0, 1], [1, 0]])
        table = os.path.join(self.tmp, 'sweep.csv')
        result, _, _ = self.call('sweep', '--matrix', path, '--scales',
                                 '0.5:2:4log', '--csv', table)
        self.assertEqual(result.exit_code, 0)
        with open(table) as fobj:
            self.assertEqual(len(fobj.read().splitlines()), 5)

    def test_generate(self):
        spec = self.write_spec('net.json', SpaceSpec('interval_net',
                                                     {'n': 3}))
        matrix = os.path.join(self.tmp, 'net.csv')
        result, out, _ = self.call('generate', spec, '--output', matrix)
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(io.load_matrix(matrix).shape, (3, 3))
        self.assertIn('points: 3', out)

    def test_approx(self):
        result, out, _ = self.call('approx', '--family', 'interval_net',
                                   '--param', 'length=2', '--levels',
                                   '11,21,41')
        self.assertEqual(result.exit_code, 0)
        self.assertIn('extrapolated_limit', out)

    def test_fourier_and_experiment(self):
        result, out, _ = self.call('fourier', '--p', '1', '--upper-bound',
                                   '--ell', '2', '--radius', '3')
        self.assertEqual(result.exit_code, 0)
        self.assertIn('bound:', out)
        result, out, _ = self.call('experiment', 'product-counterexample')
        self.assertEqual(result.exit_code, 0)
        self.assertIn('NotStablyPD', out)

    def test_parse_scales(self):
        self.assertEqual(parse_scales('1:3:3'), [1.0, 2.0, 3.0])
        np.testing.assert_allclose(parse_scales('1:100:3log'),
                                   [1.0, 10.0, 100.0])
