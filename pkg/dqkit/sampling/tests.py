from fractions import Fraction
from itertools import combinations

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from scalars.core import Mode, QRootTwo, is_rational, parse_scalar
from scalars.exceptions import InfeasibleGap, InsufficientPool

from .plans import SamplingPlan, gen_anchored_pairs, gen_pairs, gen_triples


def exact_pool(*texts):
    return tuple(parse_scalar(text, Mode.EXACT) for text in texts)


class FloatPairsTest(SimpleTestCase):
    def test_small_plan(self):
        pairs = gen_pairs(SamplingPlan(seed=42, count=3))
        self.assertEqual(len(pairs), 3)
        self.assertEqual(len(set(pairs)), 3)
        for a, b in pairs:
            self.assertLess(a, b)
            self.assertIsInstance(a, float)

    def test_endpoints_come_first(self):
        self.assertEqual(gen_pairs(SamplingPlan(count=5))[0], (0.0, 1.0))
        self.assertNotIn(
            (0.0, 1.0), gen_pairs(SamplingPlan(count=5, include_endpoints=False))
        )

    def test_same_seed_same_sequence(self):
        plan = SamplingPlan(seed=2024, count=50, min_gap=0.01)
        same = SamplingPlan(seed=2024, count=50, min_gap=0.01)
        other = SamplingPlan(seed=2025, count=50, min_gap=0.01)
        self.assertEqual(gen_pairs(plan), gen_pairs(same))
        self.assertEqual(gen_triples(plan), gen_triples(same))
        self.assertNotEqual(gen_pairs(plan), gen_pairs(other))

    def test_midpoints_cover_the_deciles(self):
        for seed in (0, 1, 42, 2**64 - 1):
            pairs = gen_pairs(SamplingPlan(seed=seed, count=32))
            deciles = {min(int((a + b) / 2 * 10), 9) for a, b in pairs}
            self.assertGreaterEqual(len(deciles), 8)

    def test_infeasible_gap(self):
        with self.assertRaises(InfeasibleGap):
            gen_pairs(SamplingPlan(count=10, min_gap=0.6))
        with self.assertRaises(InfeasibleGap):
            gen_pairs(SamplingPlan(count=1, min_gap=1.5))

    def test_band_edge_gap(self):
        # with min_gap 0.2 the last decile band collapses to the single midpoint 0.9
        for seed in (0, 7, 42):
            pairs = gen_pairs(SamplingPlan(seed=seed, count=32, min_gap=0.2))
            self.assertEqual(len(pairs), 32)
            for a, b in pairs:
                self.assertTrue(0.0 <= a < b <= 1.0)
                self.assertGreaterEqual(b - a, 0.2)

    def test_every_feasible_gap_draws(self):
        for generate in (gen_pairs, gen_triples, gen_anchored_pairs):
            for k in range(1, 101):
                plan = SamplingPlan(seed=42, count=32, min_gap=k / 100)
                try:
                    samples = generate(plan)
                except InfeasibleGap:
                    continue
                for sample in samples:
                    steps = zip(sample, sample[1:])
                    self.assertTrue(all(right - left >= plan.min_gap for left, right in steps))

    def test_count_zero(self):
        self.assertEqual(gen_pairs(SamplingPlan(count=0)), [])
        self.assertEqual(gen_triples(SamplingPlan(count=0)), [])
        self.assertEqual(gen_anchored_pairs(SamplingPlan(count=0)), [])

    def test_invalid_plan(self):
        with self.assertRaises(ValueError):
            SamplingPlan(seed=-1)
        with self.assertRaises(ValueError):
            SamplingPlan(min_gap=-0.1)

    @settings(max_examples=40, deadline=None)
    @given(
        st.integers(min_value=0, max_value=2**64 - 1),
        st.integers(min_value=1, max_value=80),
        st.sampled_from([0.0, 1e-3, 0.02, 0.1]),
    )
    def test_pairs_honour_the_gap(self, seed, count, gap):
        pairs = gen_pairs(SamplingPlan(seed=seed, count=count, min_gap=gap))
        self.assertEqual(len(pairs), count)
        for a, b in pairs:
            self.assertTrue(0.0 <= a < b <= 1.0)
            self.assertGreaterEqual(b - a, gap)


class FloatTriplesTest(SimpleTestCase):
    def test_small_plan(self):
        triples = gen_triples(SamplingPlan(seed=7, count=5))
        self.assertEqual(len(triples), 5)
        for a, b, c in triples:
            self.assertTrue(0.0 <= a < b < c <= 1.0)

    def test_endpoints_come_first(self):
        self.assertEqual(gen_triples(SamplingPlan(count=12))[0], (0.0, 0.5, 1.0))

    def test_infeasible_gap(self):
        with self.assertRaises(InfeasibleGap):
            gen_triples(SamplingPlan(count=3, min_gap=0.55))
        with self.assertRaises(InfeasibleGap):
            gen_triples(SamplingPlan(count=10, min_gap=0.3))

    @settings(max_examples=40, deadline=None)
    @given(
        st.integers(min_value=0, max_value=2**32),
        st.integers(min_value=1, max_value=80),
        st.sampled_from([0.0, 1e-3, 0.05]),
    )
    def test_triples_honour_the_gap(self, seed, count, gap):
        triples = gen_triples(SamplingPlan(seed=seed, count=count, min_gap=gap))
        self.assertEqual(len(triples), count)
        for a, b, c in triples:
            self.assertTrue(0.0 <= a < b < c <= 1.0)
            self.assertGreaterEqual(b - a, gap)
            self.assertGreaterEqual(c - b, gap)

    def test_anchored_pairs(self):
        pairs = gen_anchored_pairs(SamplingPlan(seed=3, count=40, min_gap=0.01))
        self.assertEqual(pairs[0], (0.5, 1.0))
        for b, c in pairs:
            self.assertTrue(0.0 < b < c <= 1.0)
            self.assertGreaterEqual(b, 0.01)


class ExactSamplingTest(SimpleTestCase):
    def test_pairs_from_pool(self):
        pool = exact_pool("0", "1/3", "1/2", "1/2*sqrt2", "1")
        plan = SamplingPlan(seed=42, count=4, mode=Mode.EXACT, exact_pool=pool)
        pairs = gen_pairs(plan)
        self.assertEqual(len(pairs), 4)
        self.assertEqual(pairs[0], (QRootTwo(0), QRootTwo(1)))
        everything = set(combinations(sorted(pool), 2))
        for pair in pairs:
            self.assertIn(pair, everything)
            self.assertLess(pair[0], pair[1])
        self.assertEqual(gen_pairs(plan), pairs)

    def test_triples_mix_rational_and_irrational(self):
        pool = exact_pool("0", "1/4", "1/2", "1/2*sqrt2", "1")
        plan = SamplingPlan(seed=42, count=3, mode=Mode.EXACT, exact_pool=pool)
        triples = gen_triples(plan)
        self.assertEqual(len(triples), 3)
        self.assertIn((QRootTwo(0), QRootTwo(Fraction(1, 2)), QRootTwo(1)), triples)
        self.assertTrue(
            any(not is_rational(value) for triple in triples for value in triple)
        )
        for a, b, c in triples:
            self.assertTrue(a < b < c)

    def test_whole_pool_when_count_is_large(self):
        pool = exact_pool("0", "1/4", "1/2", "1/2*sqrt2", "1", "1/2")
        plan = SamplingPlan(count=100, mode=Mode.EXACT, exact_pool=pool)
        self.assertEqual(len(gen_pairs(plan)), 10)
        self.assertEqual(len(gen_triples(plan)), 10)

    def test_gap_filters_pool_pairs(self):
        pool = exact_pool("0", "1/4", "1/3", "1")
        plan = SamplingPlan(count=100, min_gap=0.5, mode=Mode.EXACT, exact_pool=pool)
        self.assertEqual(
            gen_pairs(plan),
            [
                (QRootTwo(0), QRootTwo(1)),
                (QRootTwo(Fraction(1, 4)), QRootTwo(1)),
                (QRootTwo(Fraction(1, 3)), QRootTwo(1)),
            ],
        )

    def test_anchored_pairs_skip_zero(self):
        # 3/4*sqrt2 lies beyond 1 and is ignored
        pool = exact_pool("0", "1/4", "1/2", "1/2*sqrt2", "3/4*sqrt2", "1")
        plan = SamplingPlan(count=100, mode=Mode.EXACT, exact_pool=pool)
        pairs = gen_anchored_pairs(plan)
        self.assertEqual(len(pairs), 6)
        self.assertEqual(pairs[0], (QRootTwo(Fraction(1, 2)), QRootTwo(1)))
        self.assertTrue(all(b > 0 for b, _ in pairs))

    def test_insufficient_pool(self):
        single = SamplingPlan(count=3, mode=Mode.EXACT, exact_pool=exact_pool("1/2"))
        with self.assertRaises(InsufficientPool):
            gen_pairs(single)
        wide = SamplingPlan(count=3, mode=Mode.EXACT, exact_pool=exact_pool("0", "1", "2"))
        with self.assertRaises(InsufficientPool):
            gen_triples(wide)
        with self.assertRaises(InsufficientPool):
            gen_pairs(SamplingPlan(count=3, mode=Mode.EXACT))

    def test_infeasible_gap(self):
        pool = exact_pool("0", "1/2", "3/4")
        plan = SamplingPlan(count=3, min_gap=0.9, mode=Mode.EXACT, exact_pool=pool)
        with self.assertRaises(InfeasibleGap):
            gen_pairs(plan)
