"""
Tests for the setup-test, multi-round flakiness detection, the round runner
and the append-only results log
"""

import itertools
import json

import pytest

from defect_audit.errors import AdapterFailure, SubjectCrash
from defect_audit.subject.adapter import SubjectAdapter
from defect_audit.subject.registry import get_adapter
from defect_audit.subject.types import (
    CompileResult, CoverageRecord, Diagnostic, ParseReport, SuiteResult, TestOutcome, TestStatus,
)
from defect_audit.workability.detector import audit, setup_test
from defect_audit.workability.results_log import (
    ADEQUACY_PHASE, ResultsLog, audit_error_record, encode_record, read_records, replay, round_to_record,
)
from defect_audit.workability.runner import AuditRunner
from defect_audit.workability.verdicts import (
    Outcome, RoundConfig, RoundVerdict, classify_dataset, classify_outcomes, combine_rounds,
)

from .conftest import COUNTER_CLEAN_SRC, COUNTER_SRC, COUNTER_TESTS

PASSING = {'id': 'ATest::ok', 'behavior': 'always_pass'}
FAILING = {'id': 'ATest::broken', 'behavior': {'always_fail': 'boom'}}


def scenario(*tests, **options):
    return dict(options, tests=list(tests))


@pytest.fixture
def scripted(builder, adapters):
    def make(defect_id, document, expected=('ATest::broken',)):
        builder.add_scripted(defect_id, document, expected)
        return builder.load().get(defect_id)
    return make


SUITE = ('ATest::broken', 'ATest::ok')


def _outcome(test_id, failed):
    if failed:
        return TestOutcome(test_id, TestStatus.FAIL, 'failed')
    return TestOutcome(test_id, TestStatus.PASS)


class PhaseAdapter(SubjectAdapter):
    """Every phase result is fixed up front; each call is logged"""

    adapter_id = 'phases'

    def __init__(self, parse_ok=True, compile_ok=True, crash=False, mismatch=False, extra_failure=False):
        super().__init__()
        self.parse_ok = parse_ok
        self.compile_ok = compile_ok
        self.crash = crash
        self.mismatch = mismatch
        self.extra_failure = extra_failure
        self.calls = []

    def _failing(self, test_id):
        return test_id == 'ATest::broken' or (self.extra_failure and test_id == 'ATest::ok')

    def parse(self, ws):
        self.calls.append('parse')
        if self.parse_ok:
            return ParseReport(ok=True)
        return ParseReport(ok=False, diagnostics=(Diagnostic('A.mini', 1, 'unexpected token'),))

    def compile(self, ws):
        self.calls.append('compile')
        if self.compile_ok:
            return CompileResult(ok=True)
        return CompileResult(ok=False, diagnostics=(Diagnostic('A.mini', 2, 'unknown name'),))

    def run_suite(self, ws, suite_timeout=None, test_timeout=None):
        self.calls.append('run_suite')
        if self.crash:
            raise SubjectCrash('test process died')
        return SuiteResult({t: _outcome(t, self._failing(t)) for t in SUITE})

    def run_single(self, ws, test_id, test_timeout=None):
        self.calls.append(f'run_single:{test_id}')
        failed = self._failing(test_id)
        if self.mismatch and test_id == 'ATest::broken':
            failed = False
        outcome = _outcome(test_id, failed)
        return outcome, CoverageRecord(test_id, frozenset(), outcome)


def expected_outcome(parse_ok, compile_ok, crash, mismatch, extra_failure):
    if not (parse_ok and compile_ok):
        return Outcome.COMPILATION_FAILS
    if crash:
        return Outcome.RESULT_DIFFERS
    if mismatch:
        return Outcome.INCONSISTENT_SUITE
    if extra_failure:
        return Outcome.RESULT_DIFFERS
    return Outcome.WORKABLE


class TestPhasePrecedence:
    @pytest.mark.parametrize('phases', list(itertools.product((True, False), repeat=5)))
    def test_first_failing_phase_decides(self, scripted, scratch, phases):
        entry = scripted('S/1', scenario(FAILING, PASSING))
        adapter = PhaseAdapter(*phases)
        verdict = setup_test(entry, adapter, scratch_root=scratch)
        assert verdict.outcome is expected_outcome(*phases)

        parse_ok, compile_ok, crash = phases[:3]
        if not parse_ok:
            assert adapter.calls == ['parse']
        elif not compile_ok:
            assert adapter.calls == ['parse', 'compile']
        elif crash:
            assert adapter.calls == ['parse', 'compile', 'run_suite']
        else:
            assert adapter.calls == ['parse', 'compile', 'run_suite'] + [f'run_single:{t}' for t in SUITE]

    def test_no_test_runs_after_a_compile_failure(self, scripted, scratch):
        entry = scripted('S/1', scenario(FAILING, PASSING))
        adapter = PhaseAdapter(compile_ok=False, crash=True, mismatch=True, extra_failure=True)
        verdict = setup_test(entry, adapter, scratch_root=scratch)
        assert verdict.outcome is Outcome.COMPILATION_FAILS
        assert verdict.diagnostics == ('A.mini:2:0: error: unknown name',)
        assert not [c for c in adapter.calls if c.startswith('run_')]


class TestSetupTest:
    def test_workable(self, scripted, scratch):
        entry = scripted('S/1', scenario(FAILING, PASSING))
        verdict = setup_test(entry, get_adapter('scripted'), scratch_root=scratch)
        assert verdict.outcome is Outcome.WORKABLE
        assert verdict.observed_failing == frozenset({'ATest::broken'})

    @pytest.mark.parametrize('option', ['parse_ok', 'compile_ok'])
    def test_compilation_fails(self, scripted, scratch, option):
        entry = scripted('S/1', scenario(FAILING, **{option: False}))
        verdict = setup_test(entry, get_adapter('scripted'), scratch_root=scratch)
        assert verdict.outcome is Outcome.COMPILATION_FAILS
        assert verdict.diagnostics

    def test_crash_is_result_differs(self, scripted, scratch):
        entry = scripted('S/1', scenario(FAILING, crash_suite=True))
        verdict = setup_test(entry, get_adapter('scripted'), scratch_root=scratch)
        assert verdict.outcome is Outcome.RESULT_DIFFERS
        assert verdict.crash.startswith('SubjectCrash')

    def test_inconsistent_suite(self, scripted, scratch):
        order = {'id': 'ATest::order', 'behavior': 'fail_only_in_full_suite'}
        entry = scripted('S/1', scenario(FAILING, order))
        verdict = setup_test(entry, get_adapter('scripted'), scratch_root=scratch)
        assert verdict.outcome is Outcome.INCONSISTENT_SUITE
        [disagreement] = verdict.disagreements
        assert disagreement.test_id == 'ATest::order'
        assert disagreement.suite_status is TestStatus.FAIL
        assert disagreement.single_status is TestStatus.PASS

    def test_result_differs(self, scripted, scratch):
        entry = scripted('S/1', scenario(FAILING, PASSING), expected=['ATest::ok'])
        verdict = setup_test(entry, get_adapter('scripted'), scratch_root=scratch)
        assert verdict.outcome is Outcome.RESULT_DIFFERS
        assert verdict.observed_failing == frozenset({'ATest::broken'})
        assert verdict.crash is None

    def test_broken_scenario_is_an_adapter_failure(self, scripted, scratch):
        entry = scripted('S/1', scenario(FAILING))
        (entry.test_root / 'scenario.yaml').write_text('tests: [{id: A::a, behavior: sometimes}]\ndefect_id: S/1\n')
        with pytest.raises(AdapterFailure):
            setup_test(entry, get_adapter('scripted'), scratch_root=scratch)

    def test_shared_state_between_tests(self, counter_entry, adapters, scratch):
        verdict = setup_test(counter_entry, get_adapter('minilang'), scratch_root=scratch)
        assert verdict.outcome is Outcome.INCONSISTENT_SUITE
        assert [d.test_id for d in verdict.disagreements] == ['CounterTest::starts_at_zero']

    def test_clean_counter_is_workable(self, builder, adapters, scratch):
        builder.add_minilang('Counter/2', {'Counter.mini': COUNTER_CLEAN_SRC},
                             {'CounterTest.minitest': COUNTER_TESTS}, ['CounterTest::doubling'])
        entry = builder.load().get('Counter/2')
        assert setup_test(entry, get_adapter('minilang'), scratch_root=scratch).outcome is Outcome.WORKABLE

    def test_dataset_tree_is_untouched(self, counter_entry, adapters, scratch):
        before = (counter_entry.source_root / 'Counter.mini').read_text()
        setup_test(counter_entry, get_adapter('minilang'), scratch_root=scratch)
        assert (counter_entry.source_root / 'Counter.mini').read_text() == before
        assert sorted(p.name for p in counter_entry.source_root.iterdir()) == ['Counter.mini']


class TestRounds:
    def test_fail_after_nth_execution_is_flaky(self, scripted, scratch):
        clock = {'id': 'ATest::clock', 'behavior': {'fail_after_nth_execution': 13}}
        entry = scripted('S/1', scenario(FAILING, PASSING, clock))
        verdict = audit(entry, get_adapter('scripted'), RoundConfig(rounds=20), scratch_root=scratch)
        assert verdict.outcome is Outcome.FLAKY
        outcomes = [r.outcome for r in verdict.rounds]
        assert outcomes[:12] == [Outcome.WORKABLE] * 12
        assert outcomes[12:] == [Outcome.RESULT_DIFFERS] * 8
        assert [r.parallelism_level for r in verdict.rounds[:7]] == [1, 5, 10, 15, 20, 25, 1]

    def test_stable_outcome_over_rounds(self, scripted, scratch):
        entry = scripted('S/1', scenario(FAILING, PASSING))
        verdict = audit(entry, get_adapter('scripted'), RoundConfig(rounds=3), scratch_root=scratch)
        assert verdict.outcome is Outcome.WORKABLE
        assert len(verdict.rounds) == 3

    def test_single_round_is_never_flaky(self, scripted, scratch):
        entry = scripted('S/1', scenario(FAILING, {'id': 'ATest::coin', 'behavior': {'flaky_fail': 0.5}}))
        verdict = audit(entry, get_adapter('scripted'), RoundConfig(rounds=1), scratch_root=scratch)
        assert verdict.outcome is not Outcome.FLAKY

    def test_zero_probability_is_never_flaky(self, scripted, scratch):
        coin = {'id': 'ATest::coin', 'behavior': {'flaky_fail': 0.0}}
        entry = scripted('S/1', scenario(FAILING, PASSING, coin, seed=5))
        verdict = audit(entry, get_adapter('scripted'), RoundConfig(rounds=20), scratch_root=scratch)
        assert verdict.outcome is Outcome.WORKABLE
        assert [r.outcome for r in verdict.rounds] == [Outcome.WORKABLE] * 20

    def test_combine_same_outcome_different_failing_sets(self):
        a = RoundVerdict('X/1', Outcome.RESULT_DIFFERS, observed_failing=frozenset({'A::a'}), round_index=0)
        b = RoundVerdict('X/1', Outcome.RESULT_DIFFERS, observed_failing=frozenset({'A::b'}), round_index=1)
        assert combine_rounds('X/1', [b, a]).outcome is Outcome.FLAKY
        assert combine_rounds('X/1', [a]).outcome is Outcome.RESULT_DIFFERS
        with pytest.raises(ValueError):
            combine_rounds('X/1', [])

    def test_round_verdict_invariants(self):
        with pytest.raises(ValueError):
            RoundVerdict('X/1', Outcome.FLAKY)
        with pytest.raises(ValueError):
            RoundVerdict('X/1', Outcome.INCONSISTENT_SUITE)
        with pytest.raises(ValueError):
            RoundVerdict('X/1', Outcome.RESULT_DIFFERS, observed_failing=frozenset({'A::a'}),
                         expected_failing=frozenset({'A::a'}))

    def test_round_config(self):
        cfg = RoundConfig(rounds=3, parallelism_schedule=(2, 4))
        assert [cfg.level_for(i) for i in range(3)] == [2, 4, 2]
        with pytest.raises(ValueError):
            RoundConfig(rounds=0)
        with pytest.raises(ValueError):
            RoundConfig(parallelism_schedule=(1, 0))


class TestClassification:
    def test_counts_and_ratio(self):
        outcomes = [Outcome.WORKABLE] * 3 + [Outcome.FLAKY, Outcome.COMPILATION_FAILS]
        summary = classify_outcomes(outcomes, audit_errors=1)
        assert summary.total == 6
        assert summary.workable == 3
        assert summary.excluded == 2
        assert summary.workable_ratio == pytest.approx(0.5)

    def test_empty_dataset(self):
        summary = classify_dataset([])
        assert summary.total == 0
        assert summary.workable_ratio == 1.0


def build_mixed(builder):
    builder.add_minilang('Counter/1', {'Counter.mini': COUNTER_SRC}, {'CounterTest.minitest': COUNTER_TESTS},
                         ['CounterTest::doubling'])
    builder.add_minilang('Counter/2', {'Counter.mini': COUNTER_CLEAN_SRC}, {'CounterTest.minitest': COUNTER_TESTS},
                         ['CounterTest::doubling'])
    for n in range(1, 9):
        tests = [FAILING, PASSING, {'id': 'ATest::coin', 'behavior': {'flaky_fail': 0.3}}]
        if n % 3 == 0:
            tests.append({'id': 'ATest::order', 'behavior': 'fail_only_in_full_suite'})
        builder.add_scripted(f'Mixed/{n}', scenario(*tests, seed=n), ['ATest::broken'])
    return builder.load()


def comparable(path):
    return [{k: v for k, v in r.items() if k != 'parallelism_level'} for r in read_records(path)]


class TestAuditRunner:
    def test_parallelism_does_not_change_records(self, builder, settings, tmp_path, scratch):
        from defect_audit.subject.registry import register_default_adapters

        dataset = build_mixed(builder)
        baseline = None
        for attempt in range(5):
            for schedule, name in (((1,), 'serial'), ((10,), 'parallel')):
                register_default_adapters(settings)
                path = tmp_path / f'{name}-{attempt}.jsonl'
                with ResultsLog(path) as log:
                    report = AuditRunner(dataset.entries, RoundConfig(rounds=4, parallelism_schedule=schedule),
                                         log, scratch_root=scratch).run()
                records = comparable(path)
                outcomes = {k: v.outcome for k, v in report.verdicts.items()}
                if baseline is None:
                    baseline = (records, outcomes)
                assert (records, outcomes) == baseline
        assert baseline[1]['Counter/1'] is Outcome.INCONSISTENT_SUITE
        assert baseline[1]['Counter/2'] is Outcome.WORKABLE

    def test_records_follow_dataset_order_per_round(self, builder, adapters, tmp_path, scratch):
        dataset = build_mixed(builder)
        path = tmp_path / 'log.jsonl'
        with ResultsLog(path) as log:
            AuditRunner(dataset.entries, RoundConfig(rounds=2, parallelism_schedule=(5,)), log,
                        scratch_root=scratch).run()
        keys = [(r['round_index'], r['defect_id']) for r in read_records(path)]
        assert keys == [(i, defect_id) for i in range(2) for defect_id in dataset.ids]

    def test_resume_matches_uninterrupted_run(self, builder, adapters, tmp_path, scratch):
        dataset = build_mixed(builder)
        stable = [e for e in dataset.entries if e.adapter == 'minilang']
        full = tmp_path / 'full.jsonl'
        with ResultsLog(full) as log:
            AuditRunner(stable, RoundConfig(rounds=4), log, scratch_root=scratch).run()

        resumed = tmp_path / 'resumed.jsonl'
        with ResultsLog(resumed) as log:
            AuditRunner(stable, RoundConfig(rounds=2), log, scratch_root=scratch).run()
        calls = []
        with ResultsLog(resumed) as log:
            report = AuditRunner(stable, RoundConfig(rounds=4), log, scratch_root=scratch,
                                 on_round=lambda *args: calls.append(args)).run()
        assert [c[0] for c in calls] == [2, 3]
        assert list(read_records(resumed)) == list(read_records(full))
        assert set(report.verdicts) == {e.id for e in stable}

    def test_completed_log_is_not_rerun(self, builder, adapters, tmp_path, scratch):
        dataset = build_mixed(builder)
        path = tmp_path / 'log.jsonl'
        for _ in range(2):
            with ResultsLog(path) as log:
                AuditRunner(dataset.entries[:2], RoundConfig(rounds=2), log, scratch_root=scratch).run()
        assert len(list(read_records(path))) == 4

    def test_unknown_adapter_is_an_audit_error(self, builder, adapters, tmp_path, scratch):
        builder.add_minilang('Counter/1', {'Counter.mini': COUNTER_CLEAN_SRC},
                             {'CounterTest.minitest': COUNTER_TESTS}, ['CounterTest::doubling'])
        builder.add_minilang('Nowhere/1', {'Counter.mini': COUNTER_CLEAN_SRC},
                             {'CounterTest.minitest': COUNTER_TESTS}, ['CounterTest::doubling'], adapter='nope')
        dataset = builder.load()
        path = tmp_path / 'log.jsonl'
        with ResultsLog(path) as log:
            report = AuditRunner(dataset.entries, RoundConfig(rounds=3), log, scratch_root=scratch).run()
        assert set(report.verdicts) == {'Counter/1'}
        assert 'nope' in report.audit_errors['Nowhere/1']
        errors = [r for r in read_records(path) if r['kind'] == 'audit_error']
        assert len(errors) == 1
        assert errors[0]['round_index'] == 0


class TestResultsLog:
    def test_records_are_sorted_json_lines(self, tmp_path):
        path = tmp_path / 'log.jsonl'
        verdict = RoundVerdict('X/1', Outcome.WORKABLE, observed_failing=frozenset({'A::a'}),
                               expected_failing=frozenset({'A::a'}))
        with ResultsLog(path) as log:
            log.append(round_to_record(verdict))
        line = path.read_text()
        assert line.endswith('\n')
        assert list(json.loads(line)) == sorted(json.loads(line))
        assert replay(path).verdicts()['X/1'].outcome is Outcome.WORKABLE

    def test_unknown_kind_is_rejected(self):
        with pytest.raises(ValueError):
            encode_record({'kind': 'mystery'})

    def test_truncated_tail_is_ignored_then_dropped(self, tmp_path):
        path = tmp_path / 'log.jsonl'
        verdict = RoundVerdict('X/1', Outcome.WORKABLE)
        path.write_text(encode_record(round_to_record(verdict)) + '{"kind": "round", "defect_')
        assert len(list(read_records(path))) == 1

        with ResultsLog(path) as log:
            log.append(round_to_record(RoundVerdict('X/1', Outcome.WORKABLE, round_index=1)))
        lines = path.read_text().splitlines()
        assert len(lines) == 2
        assert all(json.loads(line)['kind'] == 'round' for line in lines)

    def test_corrupt_middle_line_is_an_error(self, tmp_path):
        from defect_audit.errors import ParseError

        path = tmp_path / 'log.jsonl'
        path.write_text('garbage\n' + encode_record(round_to_record(RoundVerdict('X/1', Outcome.WORKABLE))))
        with pytest.raises(ParseError):
            list(read_records(path))

    def test_adequacy_errors_do_not_affect_workability(self, tmp_path):
        path = tmp_path / 'log.jsonl'
        with ResultsLog(path) as log:
            log.append(round_to_record(RoundVerdict('X/1', Outcome.WORKABLE)))
            log.append(audit_error_record('X/1', 'sweep broke', phase=ADEQUACY_PHASE))
        state = replay(path)
        assert state.audit_errors == {}
        assert 'X/1' in state.verdicts()

    def test_missing_log_replays_empty(self, tmp_path):
        assert replay(tmp_path / 'none.jsonl').verdicts() == {}
