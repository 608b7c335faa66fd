"""Tests for alignment and Spearman rank correlation."""

import math

import numpy as np
import pytest

from algoprob.distribution import FrequencyDistribution, merge_all, uniform_distribution
from algoprob.errors import AlignmentError, InsufficientDataError, ValidationError
from algoprob.market import BinarySequence, extract_tuples
from algoprob.stats import (
    AlignedPair,
    AlignmentPolicy,
    CompareRow,
    SpearmanResult,
    align,
    compare_distributions,
    compare_markets,
    compare_table,
    format_table_text,
    rank_correlation,
    spearman,
    to_compare_csv,
)


def average_ranks(values):
    """Return 1-based ranks with ties averaged."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        for position in range(i, j + 1):
            ranks[order[position]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def brute_force_rho(xs, ys):
    """Pearson correlation of averaged ranks, written out longhand."""
    rx, ry = average_ranks(xs), average_ranks(ys)
    mx, my = sum(rx) / len(rx), sum(ry) / len(ry)
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry, strict=True))
    sx = math.sqrt(sum((a - mx) ** 2 for a in rx))
    sy = math.sqrt(sum((b - my) ** 2 for b in ry))
    return cov / (sx * sy)


def random_bits(seed, size):
    """Return a seeded random bit string."""
    return "".join(np.random.default_rng(seed).choice(["0", "1"], size=size))


class TestAlign:
    """Tests for align."""

    def test_intersection(self):
        """Test only shared strings are kept, in lexicographic order."""
        a = FrequencyDistribution({"00": 3, "01": 1, "11": 2})
        b = FrequencyDistribution({"01": 5, "10": 2, "11": 4})

        pair = align(a, b, 2)

        assert pair.strings == ("01", "11")
        assert pair.xs == (1, 2)
        assert pair.ys == (5, 4)

    def test_union_zero_fill(self):
        """Test the union policy fills absent counts with zero."""
        a = FrequencyDistribution({"00": 3, "01": 1})
        b = FrequencyDistribution({"01": 5, "10": 2})

        pair = align(a, b, 2, AlignmentPolicy.UNION_ZERO_FILL)

        assert pair.strings == ("00", "01", "10")
        assert pair.xs == (3, 1, 0)
        assert pair.ys == (0, 5, 2)

    def test_only_length_k(self):
        """Test strings of other lengths are ignored."""
        a = FrequencyDistribution({"0": 9, "01": 1, "011": 4})
        b = FrequencyDistribution({"0": 2, "01": 2, "011": 1})

        assert align(a, b, 3).strings == ("011",)

    def test_full_support(self):
        """Test k=5 over two full supports aligns all 32 strings."""
        a = extract_tuples(BinarySequence(random_bits(1, 5000)), 5)
        b = extract_tuples(BinarySequence(random_bits(2, 5000)), 5)

        assert len(align(a, b, 5)) == 32

    def test_nothing_shared(self):
        """Test disjoint supports raise with both support sizes."""
        a = FrequencyDistribution({"00": 1})
        b = FrequencyDistribution({"11": 1, "10": 1})

        with pytest.raises(AlignmentError, match="first support has 1 strings, second has 2"):
            align(a, b, 2)

    def test_aligned_pair_checks(self):
        """Test aligned pairs must have matching lengths and positive intersection counts."""
        with pytest.raises(ValidationError):
            AlignedPair(("0",), (1, 2), (1,))
        with pytest.raises(ValidationError):
            AlignedPair(("0",), (0,), (1,))


class TestRankCorrelation:
    """Tests for rank_correlation and spearman."""

    def test_identical(self):
        """Test identical rankings give 1."""
        assert rank_correlation([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)

    def test_reversed(self):
        """Test reversed rankings give -1."""
        assert rank_correlation([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_ties_averaged(self):
        """Test tied values share their average rank."""
        assert rank_correlation([1, 2, 2, 4], [1, 3, 2, 4]) == pytest.approx(3 / math.sqrt(10))

    def test_matches_brute_force(self):
        """Test against a longhand computation on random tied data."""
        rng = np.random.default_rng(0)
        for _ in range(200):
            size = int(rng.integers(3, 40))
            xs = rng.integers(0, 6, size=size).tolist()
            ys = rng.integers(0, 6, size=size).tolist()
            if len(set(xs)) == 1 or len(set(ys)) == 1:
                continue
            assert rank_correlation(xs, ys) == pytest.approx(brute_force_rho(xs, ys), abs=1e-12)

    def test_bounds_and_symmetry(self):
        """Test rho stays in [-1, 1] and is symmetric."""
        rng = np.random.default_rng(1)
        for _ in range(10_000):
            xs = rng.integers(0, 4, size=5)
            ys = rng.integers(0, 4, size=5)
            rho = rank_correlation(xs, ys)
            if rho is None:
                continue
            assert -1.0 <= rho <= 1.0
            assert rank_correlation(ys, xs) == pytest.approx(rho, abs=1e-12)

    def test_monotone_invariance(self):
        """Test strictly increasing transforms leave rho unchanged."""
        rng = np.random.default_rng(2)
        xs = rng.integers(1, 100, size=30)
        ys = rng.integers(1, 100, size=30)

        rho = rank_correlation(xs, ys)

        assert rank_correlation(np.log(xs), ys**3) == pytest.approx(rho, abs=1e-12)

    def test_all_tied_is_degenerate(self):
        """Test a constant side has no correlation."""
        assert rank_correlation([1, 1, 1], [1, 2, 3]) is None

    def test_spearman_result(self):
        """Test spearman reports rho and n."""
        result = spearman(AlignedPair(("00", "01", "10"), (1, 2, 3), (2, 4, 6)))

        assert result.rho == pytest.approx(1.0)
        assert result.n == 3
        assert not result.degenerate
        assert result.cell() == "1.00|3"

    def test_spearman_degenerate(self):
        """Test a degenerate pair is flagged."""
        result = spearman(AlignedPair(("00", "01", "10"), (1, 1, 1), (2, 4, 6)))

        assert result.rho is None
        assert result.degenerate
        assert result.cell() == "degenerate|3"

    def test_too_few_pairs(self):
        """Test at least three pairs are needed."""
        with pytest.raises(InsufficientDataError, match="at least 3"):
            spearman(AlignedPair(("00", "01"), (1, 2), (2, 1)))


class TestCompareTable:
    """Tests for compare_table and friends."""

    def test_self_comparison(self):
        """Test a market against its own tuple counts correlates perfectly."""
        seq = BinarySequence(random_bits(3, 2000))
        reference = merge_all(extract_tuples(seq, k) for k in range(3, 7))

        rows = compare_table(seq, reference, range(3, 7))

        assert [row.k for row in rows] == [3, 4, 5, 6]
        for row in rows:
            assert row.result.rho == pytest.approx(1.0)
            assert row.result.n == len(extract_tuples(seq, row.k))
            assert row.reason == ""

    def test_matches_manual_pipeline(self):
        """Test each row equals aligning and correlating by hand."""
        seq = BinarySequence(random_bits(4, 5000))
        other = BinarySequence(random_bits(5, 3000))
        reference = merge_all(extract_tuples(other, k) for k in (5, 6))

        rows = compare_table(seq, reference, [5, 6])

        for row in rows:
            pair = align(extract_tuples(seq, row.k), reference, row.k)
            assert row.result.n == len(pair)
            assert row.result.rho == pytest.approx(brute_force_rho(pair.xs, pair.ys), abs=1e-12)

    def test_alternating_market(self):
        """Test a sequence with two k-tuples yields no correlation."""
        seq = BinarySequence("01" * 100)
        reference = merge_all(uniform_distribution(k) for k in range(5, 11))

        rows = compare_table(seq, reference, range(5, 11))

        assert len(rows) == 6
        for row in rows:
            assert row.result is None
            assert "at least 3" in row.reason
            assert row.cell() == "-"

    def test_uniform_reference_is_degenerate(self):
        """Test a reference with all counts tied gives a degenerate cell."""
        seq = BinarySequence(random_bits(6, 1000))

        rows = compare_table(seq, uniform_distribution(5), [5])

        assert rows[0].result.degenerate
        assert rows[0].reason == "one side has all counts tied"

    def test_missing_length(self):
        """Test a reference without length-k strings gives an absent cell."""
        seq = BinarySequence(random_bits(7, 500))

        rows = compare_table(seq, uniform_distribution(5), [6])

        assert rows[0].result is None
        assert "Nothing to align" in rows[0].reason

    def test_compare_distributions(self):
        """Test two multi-length distributions are compared per length."""
        a = merge_all(extract_tuples(BinarySequence(random_bits(8, 1000)), k) for k in (3, 4))

        rows = compare_distributions(a, a, [3, 4])

        assert [row.result.rho for row in rows] == [pytest.approx(1.0), pytest.approx(1.0)]

    def test_compare_markets(self):
        """Test one table per market label."""
        markets = {
            "a": BinarySequence(random_bits(9, 800)),
            "b": BinarySequence(random_bits(10, 800)),
        }
        reference = merge_all(extract_tuples(markets["a"], k) for k in (3, 4))

        table = compare_markets(markets, reference, [3, 4])

        assert list(table) == ["a", "b"]
        assert all(len(rows) == 2 for rows in table.values())


class TestFormatting:
    """Tests for the text and CSV renderings."""

    def _table(self):
        return {
            "dji": [CompareRow(5, SpearmanResult(0.28, 32)), CompareRow(6, None, "too short")],
        }

    def test_text(self):
        """Test the rho|n grid."""
        text = format_table_text(self._table())

        assert text.splitlines()[0].split() == ["market", "k=5", "k=6"]
        assert text.splitlines()[1].split() == ["dji", "0.28|32", "-"]

    def test_csv_single_market(self):
        """Test one market has no market column."""
        assert to_compare_csv(self._table()) == (
            "k,rho,n,reason\n5,0.280000000000,32,\n6,,,too short\n"
        )

    def test_csv_several_markets(self):
        """Test several markets get a leading market column."""
        table = {**self._table(), "dax": [CompareRow(5, SpearmanResult(None, 3, True), "tied")]}

        lines = to_compare_csv(table).splitlines()

        assert lines[0] == "market,k,rho,n,reason"
        assert lines[-1] == "dax,5,,3,tied"

    def test_row_dict(self):
        """Test the JSON form of a row."""
        assert CompareRow(6, None, "too short").to_dict() == {
            "k": 6,
            "rho": None,
            "n": None,
            "reason": "too short",
        }
