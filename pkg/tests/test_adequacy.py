"""
Tests for deletion sweeps, adequacy verdicts, fix rates and the adequacy runner
"""

import pytest

from defect_audit.adequacy.experiment import AdequacyRunner, completed_adequacy, workable_entries
from defect_audit.adequacy.fix_rate import FixRateRow, fix_rate
from defect_audit.adequacy.sweep import (
    DeletionTrial, SweepBudget, deletion_sweep, run_trial, trial_from_record, trial_to_record,
)
from defect_audit.adequacy.verdict import (
    PUBLISHED, AdequacyVerdict, adequacy_verdict, dataset_adequacy_summary, percent,
)
from defect_audit.errors import InconsistentSets, UnknownAdapter
from defect_audit.sbfl.collect import collect_coverage
from defect_audit.sbfl.ranking import rank, select_candidates
from defect_audit.subject.registry import get_adapter
from defect_audit.subject.types import StatementLocation
from defect_audit.workability.results_log import ADEQUACY_PHASE, ResultsLog, read_records, replay
from defect_audit.workability.detector import setup_test
from defect_audit.workability.verdicts import Outcome

from .conftest import MAX_SRC, MAX_TESTS, USAGE_ASSERTED_TESTS, USAGE_FIX, USAGE_SRC, USAGE_TESTS

MAX_ONLY_PASSING = MAX_TESTS.split('test larger_second')[0].replace('assert max(5, 3) == 5;', 'assert true;')


def loc(index, file='Usage.mini'):
    return StatementLocation(file, index)


def candidates_for(entry, scratch):
    data = collect_coverage(entry, get_adapter(entry.adapter), scratch_root=scratch)
    return select_candidates(rank(data.matrix()))


class TestSweep:
    def test_usage_has_exactly_one_plausible_deletion(self, usage_entry, adapters, scratch):
        candidates = candidates_for(usage_entry, scratch)
        assert candidates == [loc(i) for i in range(1, 6)]
        trials = deletion_sweep(usage_entry, get_adapter('minilang'), candidates, scratch_root=scratch)
        assert [t.loc for t in trials] == candidates
        assert [t.loc for t in trials if t.suite_passed] == [loc(3)]
        assert all(t.evaluated and t.compile_ok for t in trials)

        verdict = adequacy_verdict(usage_entry, trials)
        assert verdict.plausible_locations == (loc(3),)
        assert verdict.trivially_plausible
        assert not verdict.human_patch_deletion_only
        assert verdict.under_specified
        assert not verdict.sweep_truncated

    def test_sweep_leaves_the_defect_unchanged(self, usage_entry, adapters, scratch):
        adapter = get_adapter('minilang')
        before = setup_test(usage_entry, adapter, scratch_root=scratch)
        assert before.outcome is Outcome.WORKABLE
        deletion_sweep(usage_entry, adapter, candidates_for(usage_entry, scratch), scratch_root=scratch, workers=2)
        assert setup_test(usage_entry, adapter, scratch_root=scratch) == before

    def test_asserting_the_tag_leaves_no_plausible_deletion(self, builder, adapters, scratch):
        builder.add_minilang('Usage/2', {'Usage.mini': USAGE_SRC}, {'UsageTest.minitest': USAGE_ASSERTED_TESTS},
                             ['UsageTest::empty_arg_name'], patch=USAGE_FIX)
        entry = builder.load().get('Usage/2')
        trials = deletion_sweep(entry, get_adapter('minilang'), candidates_for(entry, scratch),
                                scratch_root=scratch)
        verdict = adequacy_verdict(entry, trials)
        assert verdict.plausible_locations == ()
        assert not verdict.trivially_plausible
        assert not verdict.under_specified

    def test_workers_keep_candidate_order(self, usage_entry, adapters, scratch):
        candidates = candidates_for(usage_entry, scratch)
        serial = deletion_sweep(usage_entry, get_adapter('minilang'), candidates, scratch_root=scratch)
        parallel = deletion_sweep(usage_entry, get_adapter('minilang'), candidates, scratch_root=scratch, workers=4)
        assert parallel == serial

    def test_zero_budget_evaluates_nothing(self, usage_entry, adapters, scratch):
        candidates = [loc(i) for i in range(1, 6)]
        trials = deletion_sweep(usage_entry, get_adapter('minilang'), candidates,
                                SweepBudget(wall_clock_limit=0), scratch_root=scratch)
        assert [t.evaluated for t in trials] == [False] * 5
        verdict = adequacy_verdict(usage_entry, trials)
        assert verdict.sweep_truncated
        assert not verdict.trivially_plausible

    def test_dataset_tree_is_untouched(self, usage_entry, adapters, scratch):
        before = (usage_entry.source_root / 'Usage.mini').read_text()
        run_trial(usage_entry, get_adapter('minilang'), loc(3), SweepBudget(), scratch)
        assert (usage_entry.source_root / 'Usage.mini').read_text() == before
        assert not list(usage_entry.source_root.parent.rglob('.variant.yaml'))

    def test_unknown_location_does_not_compile(self, usage_entry, adapters, scratch):
        trial = run_trial(usage_entry, get_adapter('minilang'), loc(77), SweepBudget(), scratch)
        assert trial == DeletionTrial('Usage/1', loc(77), compile_ok=False, suite_passed=False)

    def test_budget_validation(self):
        with pytest.raises(ValueError):
            SweepBudget(wall_clock_limit=-1)
        with pytest.raises(ValueError):
            SweepBudget(per_variant_timeout=0)

    def test_trial_invariants_and_record(self):
        with pytest.raises(ValueError):
            DeletionTrial('X/1', loc(1), compile_ok=False, suite_passed=True)
        with pytest.raises(ValueError):
            DeletionTrial('X/1', loc(1), compile_ok=True, evaluated=False)
        trial = DeletionTrial('X/1', loc(2), compile_ok=True, suite_passed=True)
        assert trial_from_record(trial_to_record(trial)) == trial


class TestVerdicts:
    def test_deletion_only_human_patch(self, builder, adapters, scratch):
        builder.add_scripted('Del/1', {
            'statements': 2,
            'coverage': {'ATest::broken': [1, 2]},
            'plausible_deletions': [2],
            'tests': [{'id': 'ATest::broken', 'behavior': 'always_fail'}],
        }, ['ATest::broken'], deletion_only_fix=True)
        entry = builder.load().get('Del/1')
        trials = deletion_sweep(entry, get_adapter('scripted'), candidates_for(entry, scratch), scratch_root=scratch)
        verdict = adequacy_verdict(entry, trials)
        assert verdict.plausible_locations == (StatementLocation('scenario', 2),)
        assert verdict.human_patch_deletion_only
        assert not verdict.under_specified

    def test_verdict_invariants(self):
        with pytest.raises(ValueError):
            AdequacyVerdict('X/1', trivially_plausible=True, human_patch_deletion_only=False, under_specified=False,
                            plausible_locations=(loc(1),))
        with pytest.raises(ValueError):
            AdequacyVerdict('X/1', trivially_plausible=True, human_patch_deletion_only=True)
        published = AdequacyVerdict('X/1', trivially_plausible=True, human_patch_deletion_only=True,
                                    source=PUBLISHED)
        assert not published.under_specified

    @pytest.mark.parametrize('part, whole, expected', [
        (69, 655, 10.5), (59, 655, 9.0), (10, 655, 1.5), (1, 16, 6.3), (1, 8, 12.5), (0, 0, 0.0), (49, 357, 13.7),
    ])
    def test_percent_rounds_half_up(self, part, whole, expected):
        assert percent(part, whole) == expected

    def test_summary(self):
        verdicts = [
            AdequacyVerdict('X/1', True, False, (loc(1),), under_specified=True),
            AdequacyVerdict('X/2', True, True, (loc(2),)),
            AdequacyVerdict('X/3', False, False, sweep_truncated=True),
        ]
        summary = dataset_adequacy_summary(verdicts, workable=10)
        assert (summary.workable, summary.trivially_plausible, summary.deletion_only, summary.under_specified,
                summary.truncated) == (10, 2, 1, 1, 1)
        assert summary.trivially_plausible_rate == 20.0
        assert summary.under_specified_rate == 10.0
        assert dataset_adequacy_summary(verdicts).workable == 3
        with pytest.raises(ValueError):
            dataset_adequacy_summary(verdicts, workable=2)


class TestFixRate:
    def test_cumulative_exclusions(self):
        population = [f'P/{n}' for n in range(1, 11)]
        rows = fix_rate(population, ['P/1', 'P/2', 'P/3'], ('missing', ['P/10']), ('broken', ['P/1', 'P/9']),
                        label='All')
        assert rows == [
            FixRateRow('All', 10, 3, 30.0),
            FixRateRow('missing', 9, 3, 33.3),
            FixRateRow('broken', 7, 2, 28.6),
        ]

    def test_empty_population(self):
        assert fix_rate([], []) == [FixRateRow('All defects', 0, 0, 0.0)]

    def test_stray_ids(self):
        with pytest.raises(InconsistentSets):
            fix_rate(['P/1'], ['P/2'])
        with pytest.raises(InconsistentSets):
            fix_rate(['P/1'], [], ('other', ['Q/1']))


class TestAdequacyRunner:
    @pytest.fixture
    def entries(self, builder, adapters):
        builder.add_minilang('Usage/1', {'Usage.mini': USAGE_SRC},
                             {'UsageTest.minitest': USAGE_TESTS},
                             ['UsageTest::empty_arg_name'], patch=USAGE_FIX)
        builder.add_minilang('Max/1', {'Max.mini': MAX_SRC}, {'MaxTest.minitest': MAX_TESTS},
                             ['MaxTest::larger_first'])
        builder.add_minilang('Max/2', {'Max.mini': MAX_SRC}, {'MaxTest.minitest': MAX_ONLY_PASSING},
                             ['MaxTest::larger_first'])
        return builder.load().entries

    def test_run_records_trials_and_verdicts(self, entries, tmp_path, scratch):
        path = tmp_path / 'log.jsonl'
        with ResultsLog(path) as log:
            report = AdequacyRunner(entries, log, scratch_root=scratch).run()
        assert set(report.verdicts) == {'Usage/1', 'Max/1', 'Max/2'}
        assert report.verdicts['Usage/1'].under_specified
        assert not report.verdicts['Max/1'].trivially_plausible
        assert not report.verdicts['Max/2'].trivially_plausible
        assert report.trials == 5 + 2
        assert report.unevaluated == 0
        assert not report.all_unevaluated

        kinds = [(r['kind'], r['defect_id']) for r in read_records(path)]
        assert kinds.count(('adequacy', 'Usage/1')) == 1
        assert kinds.count(('trial', 'Max/1')) == 2
        assert ('trial', 'Max/2') not in kinds
        assert set(completed_adequacy(path)) == {'Usage/1', 'Max/1', 'Max/2'}

    def test_rerun_skips_recorded_defects(self, entries, tmp_path, scratch):
        path = tmp_path / 'log.jsonl'
        with ResultsLog(path) as log:
            AdequacyRunner(entries, log, scratch_root=scratch).run()
        size = len(list(read_records(path)))
        with ResultsLog(path) as log:
            report = AdequacyRunner(entries, log, scratch_root=scratch).run()
        assert len(list(read_records(path))) == size
        assert report.trials == 0
        assert len(report.verdicts) == 3

    def test_zero_budget(self, entries, tmp_path, scratch):
        with ResultsLog(tmp_path / 'log.jsonl') as log:
            report = AdequacyRunner(entries[:2], log, budget=SweepBudget(wall_clock_limit=0),
                                    scratch_root=scratch).run()
        assert report.all_unevaluated
        assert all(v.sweep_truncated for v in report.verdicts.values())

    def test_failures_are_recorded_apart_from_workability(self, entries, tmp_path, scratch):
        path = tmp_path / 'log.jsonl'

        def resolve(adapter_id):
            raise UnknownAdapter('adapter exploded')

        with ResultsLog(path) as log:
            report = AdequacyRunner(entries[:1], log, resolve_adapter=resolve, scratch_root=scratch).run()
        assert report.audit_errors == {'Usage/1': 'adapter exploded'}
        [error] = list(read_records(path))
        assert error['phase'] == ADEQUACY_PHASE
        assert replay(path).audit_errors == {}

    def test_workable_entries(self, entries):
        assert [e.id for e in workable_entries(entries, {'Max/2', 'Usage/1'})] == ['Usage/1', 'Max/2']
