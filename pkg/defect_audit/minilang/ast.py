"""
Syntax tree of minilang programs and test suites
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, Optional, Tuple, Union

from ..subject.types import StatementLocation


# expressions

@dataclass(frozen=True)
class IntLit:
    value: int
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class BoolLit:
    value: bool
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class StrLit:
    value: str
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class Name:
    name: str
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class Unary:
    op: str
    operand: 'Expr'
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class Binary:
    op: str
    left: 'Expr'
    right: 'Expr'
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple['Expr', ...]
    line: int = 0
    column: int = 0


Expr = Union[IntLit, BoolLit, StrLit, Name, Unary, Binary, Call]


# statements; loc is None for statements inside test bodies

@dataclass(frozen=True)
class Assign:
    name: str
    value: Expr
    loc: Optional[StatementLocation] = None
    line: int = 0


@dataclass(frozen=True)
class GlobalAssign:
    name: str
    value: Expr
    loc: Optional[StatementLocation] = None
    line: int = 0


@dataclass(frozen=True)
class If:
    condition: Expr
    then: Tuple['Stmt', ...]
    orelse: Tuple['Stmt', ...] = ()
    loc: Optional[StatementLocation] = None
    line: int = 0


@dataclass(frozen=True)
class While:
    condition: Expr
    body: Tuple['Stmt', ...]
    loc: Optional[StatementLocation] = None
    line: int = 0


@dataclass(frozen=True)
class Return:
    value: Optional[Expr] = None
    loc: Optional[StatementLocation] = None
    line: int = 0


@dataclass(frozen=True)
class ExprStmt:
    call: Call
    loc: Optional[StatementLocation] = None
    line: int = 0


@dataclass(frozen=True)
class Assert:
    condition: Expr
    loc: Optional[StatementLocation] = None
    line: int = 0


Stmt = Union[Assign, GlobalAssign, If, While, Return, ExprStmt, Assert]


def child_blocks(stmt: Stmt) -> Tuple[Tuple[Stmt, ...], ...]:
    if isinstance(stmt, If):
        return (stmt.then, stmt.orelse)
    if isinstance(stmt, While):
        return (stmt.body,)
    return ()


def walk(block: Tuple[Stmt, ...]) -> Iterator[Stmt]:
    """Pre-order walk: a compound statement comes before its children"""
    for stmt in block:
        yield stmt
        for child in child_blocks(stmt):
            yield from walk(child)


# declarations

@dataclass(frozen=True)
class GlobalDecl:
    name: str
    initializer: Expr
    file: str
    line: int = 0


@dataclass(frozen=True)
class Function:
    name: str
    params: Tuple[str, ...]
    body: Tuple[Stmt, ...]
    file: str
    line: int = 0


@dataclass(frozen=True)
class Program:
    globals: Tuple[GlobalDecl, ...] = ()
    functions: Tuple[Function, ...] = ()

    @cached_property
    def statement_table(self) -> Dict[StatementLocation, Stmt]:
        table = {}
        for function in self.functions:
            for stmt in walk(function.body):
                if stmt.loc is not None:
                    table[stmt.loc] = stmt
        return table

    @cached_property
    def function_map(self) -> Dict[str, Function]:
        return {f.name: f for f in self.functions}

    def merge(self, other: 'Program') -> 'Program':
        return Program(globals=self.globals + other.globals, functions=self.functions + other.functions)


@dataclass(frozen=True)
class TestCase:
    name: str
    body: Tuple[Stmt, ...]
    file: str
    line: int = 0

    __test__ = False

    @property
    def test_id(self) -> str:
        stem = self.file.rsplit('/', 1)[-1]
        if stem.endswith('.minitest'):
            stem = stem[:-len('.minitest')]
        return f"{stem}::{self.name}"


@dataclass(frozen=True)
class TestSuiteDef:
    """Tests in declared order, which is also suite execution order"""
    tests: Tuple[TestCase, ...] = ()

    __test__ = False

    @property
    def test_ids(self) -> Tuple[str, ...]:
        return tuple(t.test_id for t in self.tests)

    def get(self, test_id: str) -> Optional[TestCase]:
        return next((t for t in self.tests if t.test_id == test_id), None)

    def merge(self, other: 'TestSuiteDef') -> 'TestSuiteDef':
        return TestSuiteDef(tests=self.tests + other.tests)
