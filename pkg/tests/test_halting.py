"""Tests for halting censuses, Busy Beaver values and cutoffs."""

from collections import Counter
from dataclasses import replace

import pytest

from algoprob.batch import ALL_DETECTORS
from algoprob.errors import BudgetExceededError, ValidationError
from algoprob.halting import (
    DEFAULT_SCHEDULE,
    BeaverStatus,
    BusyBeaverRecord,
    CensusReport,
    busy_beaver,
    check_budget,
    cutoff_for,
    cutoff_provenance,
    run_census,
    verify_detectors,
)
from algoprob.machine import BlankMode, MachineClass
from algoprob.parallel import ShardResult, execute, plan_exhaustive, plan_sampled


class TestCutoffs:
    """Tests for cutoff lookup."""

    @pytest.mark.parametrize(("n", "cutoff"), [(1, 1), (2, 6), (3, 21), (4, 107), (5, 500)])
    def test_cutoff_for(self, settings, n, cutoff):
        """Test known S(n,2) values and the educated guess beyond them."""
        assert cutoff_for(MachineClass(n), settings) == cutoff

    def test_provenance(self, settings):
        """Test every cutoff says where it comes from."""
        assert cutoff_provenance(MachineClass(2), settings) == "derived"
        assert cutoff_provenance(MachineClass(4), settings) == "published"
        assert cutoff_provenance(MachineClass(5), settings) == "educated-guess"

    def test_budget(self):
        """Test exhaustive runs over budget are refused with the rulespace size."""
        check_budget(MachineClass(3), 10_000_000)

        with pytest.raises(BudgetExceededError) as excinfo:
            check_budget(MachineClass(4), 10_000_000)

        assert excinfo.value.rulespace_size == 18**8
        assert excinfo.value.required_mode == "sampled"
        assert excinfo.value.exit_code == 3


class TestRunCensus:
    """Tests for run_census."""

    def test_one_state(self, settings):
        """Test 12 of 36 (1,2) machines halt at cutoff 1."""
        report = run_census(MachineClass(1), 1, settings=settings)

        assert report.total_machines == 36
        assert report.runs == 36
        assert report.halting == 12
        assert report.max_steps_observed == 1
        assert report.max_ones_observed == 1

    def test_two_state_blank_zero(self, settings):
        """Test 3044 of 10000 (2,2) machines halt from blank 0."""
        report = run_census(MachineClass(2), 6, settings=settings)

        assert report.halting == 3044
        assert report.max_steps_observed == 6
        assert report.max_ones_observed == 4
        assert report.cutoff_provenance == "derived"
        assert report.halting + report.non_halting_proven + report.unresolved == report.runs

    def test_two_state_blank_one(self, settings):
        """Test blank 1 has the same halting count and fewer ones."""
        report = run_census(MachineClass(2), 6, blank_mode=BlankMode.ONE, settings=settings)

        assert report.halting == 3044
        assert report.max_steps_observed == 6
        assert report.max_ones_observed == 2

    def test_two_state_both_blanks(self, settings):
        """Test pooling both blanks doubles runs and halting runs."""
        report = run_census(MachineClass(2), 6, blank_mode=BlankMode.BOTH, settings=settings)

        assert report.total_machines == 10_000
        assert report.runs == 20_000
        assert report.halting == 6088

    @pytest.mark.parametrize(("n", "busy_beaver_steps"), [(1, 1), (2, 6)])
    def test_halting_stable_beyond_busy_beaver(self, settings, n, busy_beaver_steps):
        """Test ten times the S(n,2) cutoff finds no extra halters and resolves more machines."""
        at_bb = run_census(MachineClass(n), busy_beaver_steps, settings=settings)
        beyond = run_census(MachineClass(n), 10 * busy_beaver_steps, settings=settings)

        assert beyond.halting == at_bb.halting
        assert beyond.max_steps_observed == busy_beaver_steps
        assert beyond.cutoff_provenance == "override"
        assert beyond.unresolved <= at_bb.unresolved

    def test_detectors_do_not_change_halting(self, settings):
        """Test the census with and without detectors agrees on halting."""
        with_detectors = run_census(MachineClass(2), 6, ALL_DETECTORS, settings=settings)
        without = run_census(MachineClass(2), 6, frozenset(), settings=settings)

        assert with_detectors.halting == without.halting
        assert without.non_halting_proven == 0
        assert with_detectors.unresolved < without.unresolved
        assert without.detectors == ()
        assert with_detectors.detectors == ("blank-escape", "cycle")

    def test_worker_count_does_not_change_report(self, settings):
        """Test one and several workers give identical reports."""
        small_batches = replace(settings, batch_size=1000)

        single = run_census(MachineClass(2), 6, workers=1, settings=small_batches)
        pooled = run_census(MachineClass(2), 6, workers=2, settings=small_batches)

        assert single == pooled

    def test_refuses_four_states(self, settings):
        """Test (4,2) needs an explicit budget."""
        with pytest.raises(BudgetExceededError):
            run_census(MachineClass(4), 107, settings=settings)

    def test_invalid_cutoff(self, settings):
        """Test cutoff validation."""
        with pytest.raises(ValidationError, match="cutoff"):
            run_census(MachineClass(1), 0, settings=settings)

    @pytest.mark.slow
    def test_three_state(self, settings):
        """Test the (3,2) census at S(3,2)."""
        report = run_census(MachineClass(3), 21, settings=settings)

        assert report.total_machines == 7_529_536
        assert report.halting == 2_147_184
        assert report.max_steps_observed == 21
        assert report.max_ones_observed == 6

    @pytest.mark.slow
    def test_three_state_stable_beyond_busy_beaver(self, settings):
        """Test ten times S(3,2) finds no extra (3,2) halters."""
        at_bb = run_census(MachineClass(3), 21, settings=settings)
        beyond = run_census(MachineClass(3), 210, settings=settings)

        assert beyond.halting == at_bb.halting == 2_147_184
        assert beyond.max_steps_observed == 21


class TestCensusReport:
    """Tests for CensusReport invariants and merging."""

    def _report(self, **overrides):
        fields = {
            "n": 2,
            "blank_mode": BlankMode.ZERO,
            "total_machines": 10,
            "runs": 10,
            "halting": 3,
            "non_halting_proven": 5,
            "unresolved": 2,
            "cutoff_used": 6,
            "cutoff_provenance": "derived",
            "max_steps_observed": 4,
            "max_ones_observed": 2,
        }
        fields.update(overrides)
        return CensusReport(**fields)

    def test_counts_must_add_up(self):
        """Test the three classes must partition the runs."""
        with pytest.raises(ValidationError, match="does not add up"):
            self._report(unresolved=3)

    def test_max_steps_within_cutoff(self):
        """Test no halting run can exceed the cutoff."""
        with pytest.raises(ValidationError, match="exceeds cutoff"):
            self._report(max_steps_observed=7)

    def test_merge(self):
        """Test merging sums counts and keeps maxima."""
        merged = self._report().merge(self._report(max_steps_observed=6, max_ones_observed=1))

        assert merged.runs == 20
        assert merged.halting == 6
        assert merged.max_steps_observed == 6
        assert merged.max_ones_observed == 2

    def test_merge_rejects_other_experiments(self):
        """Test reports at different cutoffs cannot merge."""
        with pytest.raises(ValidationError):
            self._report().merge(self._report(cutoff_used=7))

    def test_to_dict(self):
        """Test the dict form is JSON-ready."""
        data = self._report().to_dict()

        assert data["blank_mode"] == "zero"
        assert data["detectors"] == []
        assert data["halting"] == 3


class TestBusyBeaver:
    """Tests for busy_beaver."""

    def test_one_state(self, settings):
        """Test Sigma(1,2) = S(1,2) = 1."""
        record = busy_beaver(MachineClass(1), settings=settings)

        assert (record.sigma, record.s_max) == (1, 1)
        assert record.status is BeaverStatus.EXACT

    def test_two_state(self, settings):
        """Test Sigma(2,2) = 4 and S(2,2) = 6, exactly."""
        record = busy_beaver(MachineClass(2), settings=settings)

        assert record.sigma == 4
        assert record.s_max == 6
        assert record.status is BeaverStatus.EXACT
        assert record.halting == 3044
        assert record.cutoffs_visited == (1, 2, 4, 8, 16)

    def test_custom_schedule(self, settings):
        """Test a caller-supplied schedule is followed."""
        record = busy_beaver(MachineClass(2), [3, 6, 12], settings=settings)

        assert record.cutoffs_visited == (3, 6, 12)
        assert record.s_max == 6

    def test_unstable_schedule_is_lower_bound(self, settings):
        """Test a schedule that never stabilises gives only a lower bound."""
        record = busy_beaver(MachineClass(2), [2, 4], settings=settings)

        assert record.status is BeaverStatus.LOWER_BOUND
        assert record.s_max <= 4

    @pytest.mark.parametrize("schedule", [[], [4, 2], [3, 3]])
    def test_bad_schedule(self, settings, schedule):
        """Test the schedule must be non-empty and strictly ascending."""
        with pytest.raises(ValidationError, match="schedule"):
            busy_beaver(MachineClass(1), schedule, settings=settings)

    def test_record_invariant(self):
        """Test S is never below Sigma."""
        with pytest.raises(ValidationError):
            BusyBeaverRecord(n=2, sigma=4, s_max=3, status=BeaverStatus.EXACT)

    def test_default_schedule(self):
        """Test the default schedule doubles up to 2048."""
        assert DEFAULT_SCHEDULE[0] == 1
        assert DEFAULT_SCHEDULE[-1] == 2048

    @pytest.mark.slow
    def test_three_state(self, settings):
        """Test Sigma(3,2) = 6 and S(3,2) = 21."""
        record = busy_beaver(MachineClass(3), settings=settings)

        assert (record.sigma, record.s_max) == (6, 21)
        assert record.status is BeaverStatus.EXACT


class TestVerifyDetectors:
    """Tests for the detector spot-check."""

    def test_sound_on_sample(self):
        """Test no machine classified non-halting halts within ten times the cutoff."""
        assert verify_detectors(MachineClass(3), 21, 2000, seed=1) == []
        assert verify_detectors(MachineClass(2), 6, 2000, seed=2, blank=1) == []


class TestParallel:
    """Tests for shard planning and merging."""

    def test_exhaustive_plan_covers_rulespace(self):
        """Test shards tile the index range without gaps or overlap."""
        shards = plan_exhaustive(2, 6, (0,), ALL_DETECTORS, batch_size=3000)

        assert [(s.start, s.stop) for s in shards] == [
            (0, 3000),
            (3000, 6000),
            (6000, 9000),
            (9000, 10_000),
        ]
        assert sum(s.machines for s in shards) == 10_000

    def test_sampled_plan_is_seeded(self):
        """Test sampled shards depend only on the seed."""
        first = plan_sampled(2, 6, (0,), ALL_DETECTORS, 400, 1000, seed=5)
        second = plan_sampled(2, 6, (0,), ALL_DETECTORS, 400, 1000, seed=5)

        assert [s.sample_size for s in first] == [400, 400, 200]
        for a, b in zip(first, second, strict=True):
            assert (a.digits() == b.digits()).all()

    def test_merge_is_commutative(self):
        """Test shard results merge in any order."""
        a = ShardResult(1, 2, 1, 1, 0, 3, 2, Counter({"0": 1}))
        b = ShardResult(2, 4, 2, 0, 2, 5, 1, Counter({"0": 1, "1": 1}))

        assert a.merge(b) == b.merge(a)
        assert a.merge(b).outputs == Counter({"0": 2, "1": 1})
        assert a.merge(ShardResult()) == a

    def test_execute_workers_agree(self):
        """Test pooled execution equals in-process execution."""
        shards = plan_exhaustive(2, 6, (0, 1), ALL_DETECTORS, batch_size=2500)

        assert execute(shards, workers=1) == execute(shards, workers=3)
