"""
Reports: exclusion tables, outcome counts, adequacy counts and fix rates
"""

from .published import PublishedData, load_published_data
from .summary import HUMAN_READABLE, STRUCTURED, ReportSummary, build_summary, emit, parse_structured, render_text
from .tables import REASON_LABELS, ExclusionRow, exclusion_table, format_exclusion_table

__all__ = [
    'ExclusionRow', 'HUMAN_READABLE', 'PublishedData', 'REASON_LABELS', 'ReportSummary', 'STRUCTURED',
    'build_summary', 'emit', 'exclusion_table', 'format_exclusion_table', 'load_published_data',
    'parse_structured', 'render_text',
]
