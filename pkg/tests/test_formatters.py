"""
Tests for output formatting and duration parsing
"""

import json

import pytest

from defect_audit.utils.formatters import format_duration, format_output, parse_duration


class TestDurations:
    @pytest.mark.parametrize('text, seconds', [
        ('0s', 0.0), ('60s', 60.0), ('90', 90.0), ('3h', 10800.0), ('1h30m', 5400.0), ('1.5m', 90.0),
        (' 2M ', 120.0),
    ])
    def test_parse(self, text, seconds):
        assert parse_duration(text) == seconds

    @pytest.mark.parametrize('text', ['', 'abc', '-5', '5x', 'h', '10s5'])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            parse_duration(text)

    @pytest.mark.parametrize('seconds, text', [
        (0, '0s'), (0.5, '0.5s'), (1.5, '1.5s'), (9.96, '10s'), (45, '45s'), (59.6, '1m'), (5400, '1h 30m'),
        (3661, '1h 1m 1s'), (90000, '1d 1h'),
    ])
    def test_format(self, seconds, text):
        assert format_duration(seconds) == text


class TestFormatOutput:
    rows = [{'id': 'P/1', 'outcome': 'Workable'}, {'id': 'P/2', 'outcome': 'Flaky'}]

    def test_empty(self):
        assert format_output([]) == 'No data found'

    def test_json(self):
        assert json.loads(format_output(self.rows, 'json')) == self.rows

    def test_csv(self):
        assert format_output(self.rows, 'csv').splitlines() == ['id,outcome', 'P/1,Workable', 'P/2,Flaky']

    def test_table_respects_headers(self):
        table = format_output(self.rows, 'table', headers=['outcome'], tablefmt='plain')
        assert 'P/1' not in table
        assert 'Flaky' in table

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            format_output(self.rows, 'xml')
