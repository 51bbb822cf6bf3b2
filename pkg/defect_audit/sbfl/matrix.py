"""
Coverage matrix: tests x statements hit spectrum
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence, Tuple, Union

import numpy as np

from ..errors import DuplicateTest, ParseError
from ..subject.types import CoverageRecord, StatementLocation


@dataclass(frozen=True, eq=False)
class CoverageMatrix:
    tests: Tuple[Tuple[str, bool], ...]
    statements: Tuple[StatementLocation, ...]
    hits: np.ndarray

    def __post_init__(self):
        if self.hits.dtype != np.bool_:
            raise ValueError("hits must be a boolean matrix")
        if self.hits.shape != (len(self.tests), len(self.statements)):
            raise ValueError(f"hits has shape {self.hits.shape}, expected "
                             f"{(len(self.tests), len(self.statements))}")

    @property
    def passed(self) -> np.ndarray:
        return np.array([p for _, p in self.tests], dtype=bool)

    @property
    def failing_count(self) -> int:
        return sum(1 for _, p in self.tests if not p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoverageMatrix):
            return NotImplemented
        return (self.tests == other.tests and self.statements == other.statements
                and np.array_equal(self.hits, other.hits))


def build_matrix(records: Sequence[CoverageRecord],
                 program_statements: Iterable[StatementLocation] = ()) -> CoverageMatrix:
    """
    One row per record in record order, one column per statement in canonical order

    Statements are every covered statement plus every program statement.

    Raises:
        DuplicateTest: a test has more than one record
    """
    seen = set()
    for record in records:
        if record.test_id in seen:
            raise DuplicateTest(f"Test '{record.test_id}' has more than one coverage record")
        seen.add(record.test_id)

    statements = tuple(sorted(set(program_statements).union(*(r.covered for r in records))))
    column = {loc: j for j, loc in enumerate(statements)}
    hits = np.zeros((len(records), len(statements)), dtype=bool)
    for i, record in enumerate(records):
        for loc in record.covered:
            hits[i, column[loc]] = True
    tests = tuple((r.test_id, r.outcome.passed) for r in records)
    return CoverageMatrix(tests=tests, statements=statements, hits=hits)


def matrix_to_dict(matrix: CoverageMatrix) -> Dict[str, Any]:
    return {
        'tests': [{'test_id': t, 'passed': p} for t, p in matrix.tests],
        'statements': [str(loc) for loc in matrix.statements],
        'hits': [[j for j in np.flatnonzero(row).tolist()] for row in matrix.hits],
    }


def matrix_from_dict(data: Dict[str, Any]) -> CoverageMatrix:
    try:
        tests = tuple((str(t['test_id']), bool(t['passed'])) for t in data['tests'])
        statements = tuple(StatementLocation.parse(s) for s in data['statements'])
        hits = np.zeros((len(tests), len(statements)), dtype=bool)
        for i, columns in enumerate(data['hits']):
            hits[i, list(columns)] = True
        return CoverageMatrix(tests=tests, statements=statements, hits=hits)
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise ParseError(f"Malformed coverage matrix: {e}") from e


def export_matrix(matrix: CoverageMatrix, path: Union[str, Path]) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(matrix_to_dict(matrix), f, indent=2, sort_keys=True)
        f.write('\n')


def import_matrix(path: Union[str, Path]) -> CoverageMatrix:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"Cannot read coverage matrix {path}: {e}") from e
    return matrix_from_dict(data)
