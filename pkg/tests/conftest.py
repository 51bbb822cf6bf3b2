"""
Shared fixtures: small minilang and scripted defects written under tmp_path
"""

from pathlib import Path
from typing import Dict, Iterable, Optional

import pytest
import yaml

from defect_audit.dataset.manifest import load_manifest
from defect_audit.subject.registry import clear_adapters, register_default_adapters
from defect_audit.subject.types import SubjectSettings

REPO_ROOT = Path(__file__).resolve().parent.parent
PUBLISHED_DATA = REPO_ROOT / 'paper-data'
DEMO_MANIFEST = REPO_ROOT / 'demo' / 'manifest.yaml'

# Option renderer whose if-body appends a tag no test asserts on.
USAGE_SRC = '''\
global with_args = 0;

fn render(name, arg) {
    out = "-" + name;
    if len(arg) >= 0 {
        out = out + " <" + arg + ">";
        global with_args = with_args + 1;
    }
    return out;
}
'''

USAGE_TESTS = '''\
test empty_arg_name {
    assert render("f", "") == "-f";
}

test counts_options_with_arguments {
    before = with_args;
    render("o", "file");
    assert with_args == before + 1;
}

test plain_option {
    assert len(render("v", "level")) >= len("-v");
}
'''

USAGE_ASSERTED_TESTS = USAGE_TESTS + '''
test shows_arg_name {
    assert render("o", "file") == "-o <file>";
}
'''

USAGE_FIX = '''\
--- a/Usage.mini
+++ b/Usage.mini
@@ -4,3 +4,3 @@
     out = "-" + name;
-    if len(arg) >= 0 {
+    if len(arg) > 0 {
         out = out + " <" + arg + ">";
'''

# next() writes a global that starts_at_zero reads.
COUNTER_SRC = '''\
global count = 0;

fn next() {
    global count = count + 1;
    return count;
}

fn current() {
    return count;
}

fn double(x) {
    return x + x + 1;
}
'''

COUNTER_CLEAN_SRC = COUNTER_SRC.replace('    global count = count + 1;\n    return count;',
                                        '    return count + 1;')

COUNTER_TESTS = '''\
test first {
    assert next() == 1;
}

test starts_at_zero {
    assert current() == 0;
}

test doubling {
    assert double(2) == 4;
}
'''

MAX_SRC = '''\
fn max(a, b) {
    if a > b {
        return b;
    }
    return b;
}
'''

MAX_TESTS = '''\
test larger_first {
    assert max(5, 3) == 5;
}

test larger_second {
    assert max(2, 7) == 7;
}
'''


def replace_line_patch(file: str, removed: str = 'old', added: Optional[str] = 'new') -> str:
    lines = [f"--- a/{file}", f"+++ b/{file}", "@@ -1 +1 @@" if added is not None else "@@ -1 +0,0 @@",
             f"-{removed}"]
    if added is not None:
        lines.append(f"+{added}")
    return '\n'.join(lines) + '\n'


class DatasetBuilder:
    """Writes defect trees and a manifest below a directory"""

    def __init__(self, root: Path, name: str = 'fixture'):
        self.root = root
        self.name = name
        self.entries = []

    def _tree(self, defect_id: str) -> Path:
        base = self.root / defect_id.replace('/', '-')
        (base / 'src').mkdir(parents=True, exist_ok=True)
        (base / 'test').mkdir(parents=True, exist_ok=True)
        return base

    def add_minilang(self, defect_id: str, sources: Dict[str, str], tests: Dict[str, str],
                     expected_failing: Iterable[str], patch: Optional[str] = None,
                     adapter: str = 'minilang') -> 'DatasetBuilder':
        base = self._tree(defect_id)
        for name, text in sources.items():
            (base / 'src' / name).write_text(text, encoding='utf-8')
        for name, text in tests.items():
            (base / 'test' / name).write_text(text, encoding='utf-8')
        first = sorted(sources)[0]
        (base / 'fix.diff').write_text(patch or replace_line_patch(first), encoding='utf-8')
        return self._entry(defect_id, base, adapter, expected_failing)

    def add_scripted(self, defect_id: str, scenario: dict, expected_failing: Iterable[str],
                     deletion_only_fix: bool = False) -> 'DatasetBuilder':
        base = self._tree(defect_id)
        (base / 'src' / 'Subject.txt').write_text('placeholder\n', encoding='utf-8')
        (base / 'test' / 'scenario.yaml').write_text(yaml.safe_dump(dict(scenario, defect_id=defect_id)),
                                                      encoding='utf-8')
        added = None if deletion_only_fix else 'fixed'
        (base / 'fix.diff').write_text(replace_line_patch('Subject.txt', 'placeholder', added), encoding='utf-8')
        return self._entry(defect_id, base, 'scripted', expected_failing)

    def _entry(self, defect_id, base, adapter, expected_failing) -> 'DatasetBuilder':
        rel = base.relative_to(self.root).as_posix()
        self.entries.append({
            'id': defect_id,
            'source_root': f"{rel}/src",
            'test_root': f"{rel}/test",
            'adapter': adapter,
            'expected_failing': sorted(expected_failing),
            'patch': f"{rel}/fix.diff",
        })
        return self

    def write(self) -> Path:
        path = self.root / 'manifest.yaml'
        document = {'dataset': {'name': self.name, 'version': '1'}, 'entries': self.entries}
        path.write_text(yaml.safe_dump(document, sort_keys=False), encoding='utf-8')
        return path

    def load(self):
        return load_manifest(self.write())


@pytest.fixture(autouse=True)
def reset_registry():
    yield
    clear_adapters()


@pytest.fixture
def settings():
    return SubjectSettings(suite_timeout=30.0, test_timeout=5.0, fuel=100_000)


@pytest.fixture
def adapters(settings):
    register_default_adapters(settings)
    return settings


@pytest.fixture
def scratch(tmp_path):
    path = tmp_path / 'scratch'
    path.mkdir()
    return path


@pytest.fixture
def builder(tmp_path):
    return DatasetBuilder(tmp_path / 'data')


@pytest.fixture
def usage_entry(builder):
    builder.add_minilang('Usage/1', {'Usage.mini': USAGE_SRC}, {'UsageTest.minitest': USAGE_TESTS},
                         ['UsageTest::empty_arg_name'], patch=USAGE_FIX)
    return builder.load().get('Usage/1')


@pytest.fixture
def counter_entry(builder):
    builder.add_minilang('Counter/1', {'Counter.mini': COUNTER_SRC}, {'CounterTest.minitest': COUNTER_TESTS},
                         ['CounterTest::doubling'])
    return builder.load().get('Counter/1')
