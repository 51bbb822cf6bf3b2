"""
Manifest loading and dataset validation
"""

import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

import yaml

from ..errors import ParseError, ValidationError
from .ids import expand_id_ranges, split_id
from .model import Dataset, DefectEntry, Patch
from .patch import parse_unified_diff

logger = logging.getLogger(__name__)

REQUIRED_ENTRY_FIELDS = ('source_root', 'test_root', 'adapter', 'expected_failing', 'patch')
MANIFEST_NAME = 'manifest.yaml'


def load_manifest(path: Union[str, Path]) -> Dataset:
    """
    Load a dataset manifest and check every dataset invariant

    A directory is read through the manifest.yaml it holds. Relative paths inside
    the manifest are resolved against the manifest's directory.

    Raises:
        ParseError: the manifest or a referenced patch is malformed
        ValidationError: an invariant does not hold
    """
    manifest_path = Path(path)
    if manifest_path.is_dir():
        manifest_path = manifest_path / MANIFEST_NAME
    if not manifest_path.is_file():
        raise ParseError(f"Manifest not found: {manifest_path}")

    try:
        with open(manifest_path, 'r', encoding='utf-8') as f:
            document = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ParseError(f"Malformed manifest {manifest_path}: {e}") from e

    if not isinstance(document, dict):
        raise ParseError(f"Manifest {manifest_path} must be a mapping")

    header = document.get('dataset')
    if not isinstance(header, dict) or 'name' not in header:
        raise ParseError(f"Manifest {manifest_path} is missing the 'dataset: {{name, version}}' header")

    raw_entries = document.get('entries')
    if not isinstance(raw_entries, list):
        raise ParseError(f"Manifest {manifest_path} is missing the 'entries' list")

    base_dir = manifest_path.parent.resolve()
    patch_cache: Dict[Path, Patch] = {}
    entries: List[DefectEntry] = []
    for index, raw in enumerate(raw_entries):
        if not isinstance(raw, dict):
            raise ParseError(f"Entry #{index + 1} in {manifest_path} must be a mapping")
        for defect_id in _entry_ids(raw, index):
            entries.append(_build_entry(defect_id, raw, base_dir, patch_cache))

    dataset = Dataset(
        name=str(header['name']),
        version=str(header.get('version', '')),
        entries=tuple(entries),
    )
    validate_dataset(dataset)
    logger.info(f"Loaded dataset {dataset.name} {dataset.version} with {len(dataset)} entries")
    return dataset


def _entry_ids(raw: Dict[str, Any], index: int) -> List[str]:
    if 'id' in raw and 'ids' in raw:
        raise ParseError(f"Entry #{index + 1} has both 'id' and 'ids'")
    if 'id' in raw:
        return [str(raw['id']).strip()]
    if 'ids' in raw:
        ids = expand_id_ranges(str(raw['ids']))
        if not ids:
            raise ParseError(f"Entry #{index + 1} has an empty 'ids' range")
        return ids
    raise ParseError(f"Entry #{index + 1} has neither 'id' nor 'ids'")


def _resolve(base_dir: Path, value: Any) -> Path:
    path = Path(str(value))
    if not path.is_absolute():
        path = base_dir / path
    return path.resolve()


def _template(value: str, defect_id: str) -> str:
    try:
        project, number = split_id(defect_id)
    except ParseError:
        project, number = defect_id, ''
    return value.replace('{id}', defect_id).replace('{project}', project).replace('{number}', str(number))


def _build_entry(defect_id: str, raw: Dict[str, Any], base_dir: Path,
                 patch_cache: Dict[Path, Patch]) -> DefectEntry:
    for field_name in REQUIRED_ENTRY_FIELDS:
        if field_name not in raw:
            raise ValidationError("required field is missing", entry_id=defect_id, field=field_name)

    expected = raw['expected_failing']
    if isinstance(expected, str):
        expected = [expected]
    if not isinstance(expected, list):
        raise ValidationError("must be a list of test ids", entry_id=defect_id, field='expected_failing')

    patch_path = _resolve(base_dir, raw['patch'])
    if patch_path not in patch_cache:
        if not patch_path.is_file():
            raise ValidationError(f"patch file not found: {patch_path}", entry_id=defect_id, field='patch')
        patch_cache[patch_path] = parse_unified_diff(patch_path.read_text(encoding='utf-8'))

    project = raw.get('project')
    if not project:
        project = split_id(defect_id)[0] if '/' in defect_id else defect_id

    return DefectEntry(
        id=defect_id,
        project=str(project),
        source_root=_resolve(base_dir, raw['source_root']),
        test_root=_resolve(base_dir, raw['test_root']),
        adapter=str(raw['adapter']),
        expected_failing=frozenset(_template(str(t), defect_id) for t in expected),
        human_patch=patch_cache[patch_path],
        notes=raw.get('notes'),
    )


def validate_entry(entry: DefectEntry) -> None:
    """Check the invariants of a single entry"""
    if not entry.expected_failing:
        raise ValidationError("a defect needs at least one expected failing test",
                              entry_id=entry.id, field='expected_failing')
    for test_id in entry.expected_failing:
        if '::' not in test_id:
            raise ValidationError(f"test id {test_id!r} is not of the form 'Class::test'",
                                  entry_id=entry.id, field='expected_failing')

    if not entry.source_root.is_dir():
        raise ValidationError(f"directory not found: {entry.source_root}", entry_id=entry.id, field='source_root')
    if not entry.test_root.is_dir():
        raise ValidationError(f"directory not found: {entry.test_root}", entry_id=entry.id, field='test_root')
    if _overlaps(entry.source_root, entry.test_root):
        raise ValidationError("source_root and test_root must be disjoint trees",
                              entry_id=entry.id, field='test_root')

    if not entry.human_patch.hunks:
        raise ValidationError("human patch has no hunks", entry_id=entry.id, field='patch')
    for hunk in entry.human_patch.hunks:
        target = (entry.source_root / hunk.file).resolve()
        if not _is_within(target, entry.source_root) or not target.is_file():
            raise ValidationError(f"patch references {hunk.file!r}, which is not a file under source_root",
                                  entry_id=entry.id, field='patch')


def validate_dataset(dataset: Dataset) -> None:
    """Check the dataset-level and per-entry invariants"""
    if not dataset.entries:
        raise ValidationError(f"dataset {dataset.name!r} has no entries", field='entries')
    seen = set()
    for entry in dataset.entries:
        if entry.id in seen:
            raise ValidationError("duplicate defect id", entry_id=entry.id, field='id')
        seen.add(entry.id)
        validate_entry(entry)


def _is_within(path: Path, root: Path) -> bool:
    try:
        path.relative_to(root)
        return True
    except ValueError:
        return False


def _overlaps(a: Path, b: Path) -> bool:
    return _is_within(a, b) or _is_within(b, a)


def select_entries(dataset: Dataset, ids: Optional[Iterable[str]]) -> List[DefectEntry]:
    """Entries of the dataset, optionally restricted to the given ids (dataset order kept)"""
    if not ids:
        return list(dataset.entries)
    wanted = set(ids)
    unknown = wanted - set(dataset.ids)
    if unknown:
        raise ValidationError(f"unknown defect ids: {', '.join(sorted(unknown))}")
    return [entry for entry in dataset.entries if entry.id in wanted]
