"""
Defect dataset model, manifest loading and human patches
"""

from .model import Dataset, DefectEntry, Hunk, Patch
from .manifest import load_manifest
from .patch import is_deletion_only, parse_unified_diff

__all__ = ['Dataset', 'DefectEntry', 'Hunk', 'Patch', 'load_manifest', 'is_deletion_only', 'parse_unified_diff']
