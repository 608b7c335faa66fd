"""Tests for D(n), halting fractions and coding-theorem complexity."""

import math
from dataclasses import replace
from fractions import Fraction

import pytest

from algoprob.ctm import (
    Exhaustive,
    Sampled,
    compute_D,
    compute_d_with_census,
    ctm_complexity,
    ctm_table,
    halting_fraction,
    rank_distribution,
)
from algoprob.distribution import FrequencyDistribution, Normalization, to_csv
from algoprob.errors import BudgetExceededError, NotInSupportError, ValidationError
from algoprob.machine import BlankMode, MachineClass
from algoprob.stats import rank_correlation
from tests.conftest import D2_ROUNDED, DATA_DIR


class TestComputeD:
    """Tests for exhaustive D(n)."""

    def test_d1_golden(self, settings):
        """Test D(1) matches the golden file."""
        dist = compute_D(MachineClass(1), settings=settings)

        assert to_csv(dist) == (DATA_DIR / "d1.csv").read_text(encoding="utf-8")
        assert dist.runs == 72
        assert dist.total == 24

    def test_d2_golden(self, d2):
        """Test D(2) matches the golden file."""
        assert to_csv(d2) == (DATA_DIR / "d2.csv").read_text(encoding="utf-8")

    def test_d2_table(self, d2):
        """Test D(2) against the rounded reference probabilities."""
        probabilities = d2.float_probabilities()

        assert set(probabilities) == set(D2_ROUNDED)
        for string, expected in D2_ROUNDED.items():
            assert probabilities[string] == pytest.approx(expected, rel=0.03)

    def test_d2_counts(self, d2):
        """Test exact counts behind D(2)."""
        assert d2.total == 6088
        assert d2.runs == 20_000
        assert d2.counts["0"] == d2.counts["1"] == 2000
        assert d2.counts["00"] == 508
        assert d2.counts["0000"] == 2

    def test_blank_zero_counts(self, settings):
        """Test D(2) from blank 0 alone."""
        dist = compute_D(MachineClass(2), blank_mode=BlankMode.ZERO, settings=settings)

        assert dist.total == 3044
        assert dist.counts["0"] == dist.counts["1"] == 1000
        assert dist.counts["00"] == 264
        assert dist.counts["01"] == dist.counts["10"] == 254
        assert dist.counts["11"] == 244
        assert dist.counts["1111"] == 2
        assert len(dist) == 17

    def test_sums_to_one(self, d2):
        """Test halting-normalised probabilities sum to exactly 1."""
        assert sum(d2.probabilities().values()) == 1

    def test_all_runs_normalisation(self, d2):
        """Test probabilities over every run sum to the share of halting runs."""
        total = sum(d2.probabilities(Normalization.ALL_RUNS).values())

        assert total == Fraction(6088, 20_000)

    def test_reversal_symmetry(self, d2):
        """Test a string and its reversal are equally likely."""
        for string, count in d2.counts.items():
            assert d2.counts[string[::-1]] == count

    def test_complement_symmetry(self, d2):
        """Test pooling both blanks makes complements equally likely."""
        flip = str.maketrans("01", "10")
        for string, count in d2.counts.items():
            assert d2.counts[string.translate(flip)] == count

    def test_shorter_strings_more_likely(self, d2):
        """Test every string of length l outweighs every string of length l+1."""
        by_length = {}
        for string, count in d2.counts.items():
            by_length.setdefault(len(string), []).append(count)

        for length in sorted(by_length)[:-1]:
            assert min(by_length[length]) > max(by_length[length + 1])

    def test_source_descriptor(self, d2):
        """Test the distribution records how it was made."""
        assert d2.source["mode"] == "exhaustive"
        assert d2.source["cutoff"] == 6
        assert d2.source["blank_mode"] == "both"

    def test_cutoff_override_changes_nothing_beyond_bb(self, settings, d2):
        """Test running past S(2,2) gives the same counts."""
        dist = compute_D(MachineClass(2), cutoff=30, settings=settings)

        assert dist.counts == d2.counts
        assert dist.source["cutoff_provenance"] == "override"

    def test_four_states_needs_budget(self, settings):
        """Test exhaustive D(4) is refused."""
        with pytest.raises(BudgetExceededError):
            compute_D(MachineClass(4), settings=settings)

    def test_invalid_cutoff(self, settings):
        """Test cutoff validation."""
        with pytest.raises(ValidationError):
            compute_D(MachineClass(1), cutoff=0, settings=settings)

    def test_four_and_sixteen_workers_agree(self, settings):
        """Test the worker count never changes exhaustive D(2)."""
        small_batches = replace(settings, batch_size=1000)

        four = compute_D(MachineClass(2), workers=4, settings=small_batches)
        sixteen = compute_D(MachineClass(2), workers=16, settings=small_batches)

        assert four.counts == sixteen.counts
        assert to_csv(four) == to_csv(sixteen)

    @pytest.mark.slow
    def test_d3(self, settings):
        """Test D(3) from blank 0 and the symmetry of the pooled distribution."""
        zero = compute_D(MachineClass(3), blank_mode=BlankMode.ZERO, settings=settings)
        both = compute_D(MachineClass(3), settings=settings)

        assert zero.total == 2_147_184
        assert zero.counts["0"] == zero.counts["1"] == 537_824
        assert max(len(s) for s in zero.counts) <= 21
        assert all(format(i, "05b") in both for i in range(32))
        for string, count in both.counts.items():
            assert both.counts[string[::-1]] == count


class TestSampled:
    """Tests for sampled D(n)."""

    def test_minimum_size(self, settings):
        """Test undersized samples are rejected."""
        with pytest.raises(ValidationError, match="at least"):
            compute_D(MachineClass(2), Sampled(100, seed=1), settings=settings)

    def test_deterministic(self, settings):
        """Test the same seed gives identical counts."""
        first = compute_D(MachineClass(2), Sampled(20_000, seed=7), settings=settings)
        second = compute_D(MachineClass(2), Sampled(20_000, seed=7), settings=settings)

        assert first.counts == second.counts
        assert first.source["seed"] == 7

    def test_four_and_sixteen_workers_agree(self, settings):
        """Test a seeded sample is identical on 4 and 16 workers."""
        small_batches = replace(settings, batch_size=2000)
        mode = Sampled(20_000, seed=11)

        four = compute_D(MachineClass(2), mode, workers=4, settings=small_batches)
        sixteen = compute_D(MachineClass(2), mode, workers=16, settings=small_batches)

        assert four.counts == sixteen.counts
        assert to_csv(four) == to_csv(sixteen)

    def test_tracks_exhaustive(self, settings, d2):
        """Test a large sample ranks strings like the exhaustive distribution, within 3 SE."""
        sampled = compute_D(MachineClass(2), Sampled(100_000, seed=7), settings=settings)
        common = sorted(set(sampled.counts) & set(d2.counts))

        rho = rank_correlation(
            [sampled.counts[s] for s in common], [d2.counts[s] for s in common]
        )

        assert rho >= 0.95
        assert sampled.runs == 200_000
        exact = d2.float_probabilities()
        for string, estimate in sampled.float_probabilities().items():
            p = exact[string]
            assert abs(estimate - p) <= 3 * math.sqrt(p * (1 - p) / sampled.total)

    def test_sampled_skips_budget(self, settings):
        """Test sampling is allowed where enumeration is not."""
        dist = compute_D(MachineClass(4), Sampled(10_000, seed=3), settings=settings)

        assert dist.runs == 20_000
        assert dist.total > 0


class TestHaltingFraction:
    """Tests for halting_fraction."""

    def test_two_states(self, d2_with_census):
        """Test 6088 halting runs over 10000 machines and 20000 runs."""
        _, report = d2_with_census

        result = halting_fraction(report)

        assert result.fraction == Fraction(6088, 10_000)
        assert float(result.fraction) == pytest.approx(0.6088)
        assert result.run_fraction == Fraction(6088, 20_000)
        assert float(result.run_fraction) == pytest.approx(0.3044)
        assert result.machine_class == MachineClass(2)

    def test_one_state(self, settings):
        """Test 24 halting runs over 36 machines and 72 runs."""
        _, report = compute_d_with_census(MachineClass(1), Exhaustive(), settings=settings)

        result = halting_fraction(report)

        assert result.fraction == Fraction(2, 3)
        assert result.run_fraction == Fraction(1, 3)

    def test_single_blank(self, settings):
        """Test both shares agree when each machine runs once."""
        _, report = compute_d_with_census(
            MachineClass(2), Exhaustive(), blank_mode=BlankMode.ZERO, settings=settings
        )

        result = halting_fraction(report)

        assert result.fraction == result.run_fraction == Fraction(3044, 10_000)


class TestCtmComplexity:
    """Tests for ctm_complexity."""

    def test_single_bit(self, d2):
        """Test K("0") = -log2(2000/6088)."""
        estimate = ctm_complexity("0", d2)

        assert estimate.k_ctm == pytest.approx(-math.log2(2000 / 6088), abs=1e-9)
        assert estimate.k_ctm == pytest.approx(1.608, abs=0.01)
        assert estimate.probability == Fraction(250, 761)

    def test_longer_strings_are_more_complex(self, d2):
        """Test complexity grows with length."""
        assert ctm_complexity("0", d2).k_ctm < ctm_complexity("01", d2).k_ctm
        assert ctm_complexity("01", d2).k_ctm < ctm_complexity("001", d2).k_ctm
        assert ctm_complexity("001", d2).k_ctm < ctm_complexity("000", d2).k_ctm

    @pytest.mark.parametrize("n", [1, 2])
    def test_few_strings_below_each_complexity(self, settings, d2, n):
        """Test at most 2^(m+1) - 1 strings have complexity <= m."""
        dist = d2 if n == 2 else compute_D(MachineClass(1), settings=settings)
        complexities = [ctm_complexity(s, dist).k_ctm for s in dist.counts]

        for m in range(20):
            assert sum(1 for k in complexities if k <= m) <= 2 ** (m + 1) - 1

    def test_all_runs_normalisation(self, d2):
        """Test the all-runs estimate is larger."""
        halting = ctm_complexity("0", d2).k_ctm
        all_runs = ctm_complexity("0", d2, Normalization.ALL_RUNS).k_ctm

        assert all_runs == pytest.approx(-math.log2(2000 / 20_000))
        assert all_runs > halting

    def test_not_in_support(self, d2):
        """Test unseen strings raise with the minimum probability."""
        with pytest.raises(NotInSupportError) as excinfo:
            ctm_complexity("00000", d2)

        assert excinfo.value.string == "00000"
        assert excinfo.value.min_probability == pytest.approx(2 / 6088)
        assert excinfo.value.exit_code == 4
        assert "not in the support" in str(excinfo.value)


class TestRanking:
    """Tests for rank_distribution and ctm_table."""

    def test_average_ranks(self, d2):
        """Test tied strings share their average rank."""
        ranks = {entry.string: entry.rank for entry in rank_distribution(d2)}

        assert ranks["0"] == ranks["1"] == 1.5
        assert ranks["00"] == ranks["11"] == 4.5
        assert ranks["001"] == ranks["110"] == 8.5
        assert ranks["000"] == ranks["101"] == 12.5
        assert ranks["0000"] == ranks["1111"] == 18.5

    def test_order(self, d2):
        """Test ties are ordered shorter first, then lexicographically."""
        strings = [entry.string for entry in rank_distribution(d2)]

        assert strings[:6] == ["0", "1", "00", "01", "10", "11"]

    def test_empty(self):
        """Test ranking an empty distribution is an error."""
        with pytest.raises(ValidationError):
            rank_distribution(FrequencyDistribution({}))

    def test_ctm_table(self, d2):
        """Test the table lists every string in rank order with rising complexity."""
        table = ctm_table(d2)

        assert len(table) == 22
        values = [estimate.k_ctm for estimate in table]
        assert values == sorted(values)


@pytest.mark.slow
class TestCrosscheck:
    """Tests that D(3) agrees in rank with the ECA reference."""

    def test_positive_correlation(self, settings):
        """Test D(3) correlates positively with ECA tuples for k = 3..5."""
        from algoprob.distribution import merge_all
        from algoprob.eca import EcaConfig, eca_tuple_distribution
        from algoprob.stats import compare_distributions

        d3 = compute_D(MachineClass(3), settings=settings)
        template = EcaConfig(rule=0, width=63, steps=63)
        reference = merge_all(eca_tuple_distribution(range(256), k, template) for k in (3, 4, 5))

        rows = compare_distributions(d3, reference, [3, 4, 5])

        expected = {3: 0.312348, 4: 0.601559, 5: 0.458477}
        for row in rows:
            assert row.result.rho > 0
            assert row.result.rho == pytest.approx(expected[row.k], abs=1e-4)
