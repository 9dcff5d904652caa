"""
Tests for theory module
"""

import math
import os
import tempfile
import unittest

import numpy as np
import numpy.testing as npt
import pandas as pd

from wevbg import (
    FrameSequence, InsufficientData, InvalidInput, RegimeWarning, SkippedDegenerate, TwoClassParams, WorkerPool,
    beta_stability, check_matrix_identities, check_expectation_chain, check_perturbation_bound, drift_experiment,
    drift_ratio, synth_two_class,
)
from wevbg.theory import (
    BetaEstimate, BetaStability, drift_stats, make_rng, random_test_matrix, sign_aligned_change, write_drift_csv,
    write_summary_csv,
)


FULL_CHECKS = os.environ.get('WEVBG_FULL_CHECKS') == '1'


def rows_by_metric(rows):
    return {row.metric: row for row in rows}


class TestTwoClass(unittest.TestCase):
    def test_counts_and_labels(self):
        seq = synth_two_class(TwoClassParams(seed=7))
        self.assertEqual(len(seq), 121)
        self.assertEqual(seq.shape, (1, 2))
        self.assertEqual(len(seq.foreground_indices), 29)

    def test_given_order(self):
        seq = synth_two_class(TwoClassParams(n_b=3, n_f=2), order='given')
        self.assertEqual(seq.labels, ('bg', 'bg', 'bg', 'fg', 'fg'))

    def test_interleaved_order(self):
        seq = synth_two_class(TwoClassParams(n_b=6, n_f=2), order='interleaved')
        self.assertEqual(seq.foreground_indices, [2, 6])

    def test_degenerate_classes(self):
        params = TwoClassParams(mu_b=0.5, mu_f=0.5, sigma_b=1e-9, sigma_f=1e-9)
        npt.assert_allclose(synth_two_class(params).vectors(), 0.5, atol=1e-7)

    def test_deterministic(self):
        a = synth_two_class(TwoClassParams(seed=3))
        b = synth_two_class(TwoClassParams(seed=3))
        npt.assert_array_equal(a.vectors(), b.vectors())
        self.assertEqual(a.labels, b.labels)

    def test_class_moments(self):
        n = 10_000
        params = TwoClassParams(dim=2, n_b=n, n_f=n, seed=1)
        seq = synth_two_class(params, order='given')
        x = seq.vectors()
        for rows, mu, sigma in ((x[:n], 0.3, 0.005), (x[n:], 0.6, 0.1)):
            npt.assert_array_less(np.abs(rows.mean(axis=0) - mu), 4 * sigma / np.sqrt(n))
            npt.assert_array_less(np.abs(rows.var(axis=0) / sigma ** 2 - 1.0), 0.2)

    def test_invalid(self):
        with self.assertRaises(InvalidInput):
            synth_two_class(TwoClassParams(sigma_b=0.0))
        with self.assertRaises(InvalidInput):
            synth_two_class(TwoClassParams(), order='random')
        with self.assertRaises(InvalidInput):
            synth_two_class(TwoClassParams(seed=-1))


class TestDrift(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.records = drift_experiment(synth_two_class(TwoClassParams(seed=7)))

    def test_one_record_per_arrival(self):
        self.assertEqual(len(self.records), 118)
        self.assertEqual([r.step for r in self.records], list(range(4, 122)))

    def test_foreground_moves_more(self):
        stats = drift_stats(self.records)
        self.assertGreater(stats['fg'].mean, 2 * stats['bg'].mean)

    def test_dominant_eigenvalue_interlaces(self):
        for r in self.records:
            tol = 1e-9 * (1.0 + r.lambda_before + r.e_norm)
            self.assertGreaterEqual(r.lambda_after, r.lambda_before - tol)
            self.assertLessEqual(r.lambda_after, r.lambda_before + r.e_norm + tol)

    def test_stats_per_label(self):
        stats = drift_stats(self.records)
        self.assertEqual(set(stats), {'bg', 'fg'})
        self.assertEqual(stats['bg'].total_samples + stats['fg'].total_samples, 118)

    def test_identical_frames_do_not_drift(self):
        records = drift_experiment(FrameSequence.from_vectors(np.full((10, 2), 0.5)))
        self.assertEqual(len(records), 7)
        for r in records:
            self.assertEqual(r.delta_norm, 0.0)
            self.assertEqual(r.label, '')

    def test_sign_invariance(self):
        v = np.array([0.6, 0.8])
        w = np.array([0.8, 0.6])
        self.assertEqual(sign_aligned_change(v, w), sign_aligned_change(v, -w))

    def test_too_few_frames(self):
        with self.assertRaises(InsufficientData):
            drift_experiment(FrameSequence.from_vectors(np.zeros((2, 2))))

    def test_deterministic(self):
        again = drift_experiment(synth_two_class(TwoClassParams(seed=7)))
        self.assertEqual(again, self.records)

    def test_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'drift.csv')
            write_drift_csv(self.records, path)
            table = pd.read_csv(path)
        self.assertEqual(list(table.columns), ['step', 'label', 'delta_norm', 'angle', 'e_norm'])
        self.assertEqual(len(table), 118)


class TestDriftRatio(unittest.TestCase):
    def test_hundred_seeds(self):
        row = drift_ratio(TwoClassParams(), seeds=100)
        self.assertEqual(row.metric, 'drift_ratio')
        self.assertEqual(row.bound, 2.0)
        self.assertTrue(row.passed)
        self.assertGreater(row.estimate - 2.576 * row.std_error, 2.0)

    def test_matches_per_stream_stats(self):
        params = TwoClassParams(seed=7)
        row = drift_ratio(params, seeds=2)
        ratios = []
        for seed in (7, 8):
            stats = drift_stats(drift_experiment(synth_two_class(TwoClassParams(seed=seed))))
            ratios.append(stats['fg'].mean / stats['bg'].mean)
        self.assertAlmostEqual(row.estimate, np.mean(ratios), places=12)

    def test_parallel_matches_sequential(self):
        params = TwoClassParams(seed=3)
        with WorkerPool(size=2) as pool:
            parallel = drift_ratio(params, seeds=4, pool=pool)
        self.assertEqual(parallel, drift_ratio(params, seeds=4))

    def test_needs_both_classes(self):
        with self.assertRaises(InsufficientData):
            drift_ratio(TwoClassParams(n_f=0), seeds=2)

    def test_needs_two_seeds(self):
        with self.assertRaises(InvalidInput):
            drift_ratio(TwoClassParams(), seeds=1)


class TestPerturbationBound(unittest.TestCase):
    def setUp(self):
        self.a = random_test_matrix(5, make_rng(3))

    def test_zero_perturbation(self):
        report = check_perturbation_bound(self.a, np.zeros(5))
        self.assertEqual(report.delta_norm, 0.0)
        self.assertEqual(report.e_norm, 0.0)

    def test_perturbation_along_dominant_vector(self):
        values, vectors = np.linalg.eigh(self.a)
        report = check_perturbation_bound(self.a, 0.3 * vectors[:, -1])
        self.assertLess(report.delta_norm, 1e-10)

    def test_degenerate_dominant_value(self):
        with self.assertRaises(SkippedDegenerate):
            check_perturbation_bound(np.eye(3), np.ones(3))

    def test_beta_is_stable(self):
        stability = beta_stability(self.a, trials=2000, seed=5)
        self.assertTrue(np.isfinite(stability.full.beta))
        self.assertGreater(stability.full.beta, 0.0)
        self.assertLess(stability.relative_change, 0.1)

    def test_beta_is_stable_on_random_matrices(self):
        rng = make_rng(9)
        for dim in (3, 6):
            a = random_test_matrix(dim, rng)
            self.assertLess(beta_stability(a, trials=500, seed=dim).relative_change, 0.1)

    def test_relative_change_without_drift(self):
        still = BetaEstimate(0.0, 0.0, 10, 0.1)
        moved = BetaEstimate(0.5, 0.2, 10, 0.001)
        self.assertEqual(BetaStability(still, still, 10.0).relative_change, 0.0)
        self.assertEqual(BetaStability(still, moved, 10.0).relative_change, math.inf)


class TestExpectationChain(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.rows = rows_by_metric(check_expectation_chain(TwoClassParams(n_b=30, n_f=30, seed=2), trials=3000))

    def test_rows(self):
        self.assertEqual(set(self.rows), {
            'expected_e_norm_bg', 'expected_e_norm_fg', 'class_var_bg', 'class_var_fg', 'cross_term_bg',
            'theta_bg', 'theta_fg', 'theta_order',
        })

    def test_expected_perturbation_bounded(self):
        self.assertTrue(self.rows['expected_e_norm_bg'].passed)
        self.assertTrue(self.rows['expected_e_norm_fg'].passed)

    def test_class_variances(self):
        self.assertTrue(self.rows['class_var_bg'].passed)
        self.assertTrue(self.rows['class_var_fg'].passed)

    def test_foreground_angle_larger(self):
        self.assertTrue(self.rows['theta_order'].passed)
        self.assertGreater(self.rows['theta_fg'].estimate, self.rows['theta_bg'].estimate)

    def test_cross_term_vanishes_for_tight_background(self):
        params = TwoClassParams(n_b=30, n_f=30, sigma_b=0.0005, seed=4)
        rows = rows_by_metric(check_expectation_chain(params, trials=2000))
        self.assertTrue(rows['cross_term_bg'].passed)

    def test_equal_means(self):
        params = TwoClassParams(n_b=20, n_f=20, mu_b=0.4, mu_f=0.4, seed=6)
        rows = rows_by_metric(check_expectation_chain(params, trials=500))
        row = rows['expected_e_norm_bg']
        self.assertLessEqual(row.estimate, params.total_var_b + 3 * row.std_error)

    def test_unbalanced_warns(self):
        with self.assertWarns(RegimeWarning):
            check_expectation_chain(TwoClassParams(n_b=20, n_f=5), trials=20)

    def test_deterministic(self):
        params = TwoClassParams(n_b=10, n_f=10, seed=1)
        a = check_expectation_chain(params, trials=50)
        b = check_expectation_chain(params, trials=50)
        self.assertEqual([r.estimate for r in a], [r.estimate for r in b])


class TestMatrixIdentities(unittest.TestCase):
    def test_all_pass(self):
        rows = check_matrix_identities(trials=300, seed=1)
        self.assertEqual(
            [r.metric for r in rows],
            ['interlacing_lower', 'interlacing_upper', 'epsilon_bound', 'spectral_norm', 'outer_eigenvalue',
             'outer_rank'],
        )
        for row in rows:
            self.assertTrue(row.passed, row.metric)

    def test_summary_csv(self):
        rows = check_matrix_identities(trials=20, seed=2)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'summary.csv')
            write_summary_csv(rows, path)
            table = pd.read_csv(path)
        self.assertEqual(list(table.columns), ['metric', 'estimate', 'std_error', 'bound', 'pass'])
        self.assertEqual(len(table), 6)


@unittest.skipUnless(FULL_CHECKS, 'set WEVBG_FULL_CHECKS=1 for the full-size Monte-Carlo runs')
class TestFullSize(unittest.TestCase):
    def test_matrix_identities(self):
        with WorkerPool() as pool:
            rows = check_matrix_identities(trials=10_000, seed=0, pool=pool)
        for row in rows:
            self.assertTrue(row.passed, row.metric)

    def test_beta_stability(self):
        rng = make_rng(20)
        for k in range(20):
            a = random_test_matrix(int(rng.integers(2, 13)), rng)
            stability = beta_stability(a, trials=10_000, seed=k)
            self.assertTrue(np.isfinite(stability.full.beta))
            self.assertLess(stability.relative_change, 0.1)


if __name__ == '__main__':
    unittest.main()
