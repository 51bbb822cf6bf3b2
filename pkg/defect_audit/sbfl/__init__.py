"""
Spectrum-based fault localization with the Ochiai coefficient
"""

from .collect import CoverageData, collect_coverage, localize
from .matrix import CoverageMatrix, build_matrix, export_matrix, import_matrix, matrix_from_dict, matrix_to_dict
from .ranking import DEFAULT_CAP, DEFAULT_THRESHOLD, SuspiciousnessScore, ochiai, rank, select_candidates

__all__ = [
    'CoverageData', 'CoverageMatrix', 'DEFAULT_CAP', 'DEFAULT_THRESHOLD', 'SuspiciousnessScore', 'build_matrix',
    'collect_coverage', 'export_matrix', 'import_matrix', 'localize', 'matrix_from_dict', 'matrix_to_dict',
    'ochiai', 'rank', 'select_candidates',
]
