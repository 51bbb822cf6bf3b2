"""
Ochiai suspiciousness, ranking and candidate selection
"""

import math
from dataclasses import dataclass
from typing import List, Sequence

from ..errors import NoFailingTest
from ..subject.types import StatementLocation
from .matrix import CoverageMatrix

DEFAULT_THRESHOLD = 0.01
DEFAULT_CAP = 300


@dataclass(frozen=True)
class SuspiciousnessScore:
    loc: StatementLocation
    e_f: int
    e_p: int
    n_f: int
    n_p: int
    score: float


def ochiai(e_f: int, n_f: int, e_p: int) -> float:
    """e_f / sqrt((e_f + n_f) * (e_f + e_p)), or 0 for a statement no failing test executes"""
    if e_f == 0:
        return 0.0
    return e_f / math.sqrt((e_f + n_f) * (e_f + e_p))


def rank(matrix: CoverageMatrix) -> List[SuspiciousnessScore]:
    """
    Score every statement, most suspicious first; ties keep canonical statement order

    Raises:
        NoFailingTest: the matrix has no failing test
    """
    passed = matrix.passed
    total_failing = int((~passed).sum())
    if total_failing == 0:
        raise NoFailingTest("Fault localization needs at least one failing test")
    total_passing = len(passed) - total_failing

    executed_failing = matrix.hits[~passed].sum(axis=0)
    executed_passing = matrix.hits[passed].sum(axis=0)

    scores = []
    for j, loc in enumerate(matrix.statements):
        e_f, e_p = int(executed_failing[j]), int(executed_passing[j])
        n_f, n_p = total_failing - e_f, total_passing - e_p
        scores.append(SuspiciousnessScore(loc, e_f, e_p, n_f, n_p, ochiai(e_f, n_f, e_p)))
    scores.sort(key=lambda s: (-s.score, s.loc))
    return scores


def select_candidates(ranked: Sequence[SuspiciousnessScore], threshold: float = DEFAULT_THRESHOLD,
                      cap: int = DEFAULT_CAP) -> List[StatementLocation]:
    """Keep scores of at least threshold, then the first cap of those, in ranking order"""
    if cap < 0:
        raise ValueError("cap must not be negative")
    return [s.loc for s in ranked if s.score >= threshold][:cap]
