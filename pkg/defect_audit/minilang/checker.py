"""
Static checks run by the minilang compile step
"""

from typing import Dict, Iterable, List, Optional, Set, Tuple

from ..subject.types import Diagnostic
from . import ast

BUILTINS: Dict[str, int] = {'len': 1, 'str': 1}


def _expressions(stmt: ast.Stmt) -> Tuple[ast.Expr, ...]:
    if isinstance(stmt, (ast.Assign, ast.GlobalAssign)):
        return (stmt.value,)
    if isinstance(stmt, (ast.If, ast.While, ast.Assert)):
        return (stmt.condition,)
    if isinstance(stmt, ast.Return):
        return (stmt.value,) if stmt.value is not None else ()
    if isinstance(stmt, ast.ExprStmt):
        return (stmt.call,)
    return ()


def _sub_expressions(expr: ast.Expr) -> Iterable[ast.Expr]:
    yield expr
    if isinstance(expr, ast.Unary):
        yield from _sub_expressions(expr.operand)
    elif isinstance(expr, ast.Binary):
        yield from _sub_expressions(expr.left)
        yield from _sub_expressions(expr.right)
    elif isinstance(expr, ast.Call):
        for arg in expr.args:
            yield from _sub_expressions(arg)


class _Checker:
    def __init__(self, program: ast.Program):
        self.program = program
        self.diagnostics: List[Diagnostic] = []
        self.arity = {f.name: len(f.params) for f in program.functions}
        self.global_names = {g.name for g in program.globals}

    def error(self, file: str, line: int, message: str, column: int = 0) -> None:
        self.diagnostics.append(Diagnostic(file=file, line=line, message=message, column=column))

    def check_declarations(self) -> None:
        seen: Set[str] = set()
        for function in self.program.functions:
            if function.name in BUILTINS:
                self.error(function.file, function.line, f"function '{function.name}' shadows a builtin")
            if function.name in seen:
                self.error(function.file, function.line, f"function '{function.name}' is defined more than once")
            seen.add(function.name)
            if len(set(function.params)) != len(function.params):
                self.error(function.file, function.line, f"function '{function.name}' repeats a parameter name")
        declared: Set[str] = set()
        for decl in self.program.globals:
            if decl.name in declared:
                self.error(decl.file, decl.line, f"global '{decl.name}' is declared more than once")
            declared.add(decl.name)
            self.check_expression(decl.initializer, decl.file, declared - {decl.name})

    def check_block(self, body: Tuple[ast.Stmt, ...], file: str, params: Tuple[str, ...] = ()) -> None:
        bound = set(params) | self.global_names
        bound |= {s.name for s in ast.walk(body) if isinstance(s, ast.Assign)}
        for stmt in ast.walk(body):
            if isinstance(stmt, ast.GlobalAssign) and stmt.name not in self.global_names:
                self.error(file, stmt.line, f"assignment to undeclared global '{stmt.name}'")
            for expr in _expressions(stmt):
                self.check_expression(expr, file, bound)

    def check_expression(self, expr: ast.Expr, file: str, bound: Set[str]) -> None:
        for sub in _sub_expressions(expr):
            if isinstance(sub, ast.Name) and sub.name not in bound:
                self.error(file, sub.line, f"undefined variable '{sub.name}'", sub.column)
            elif isinstance(sub, ast.Call):
                expected = self.arity.get(sub.name, BUILTINS.get(sub.name))
                if expected is None:
                    self.error(file, sub.line, f"call to undefined function '{sub.name}'", sub.column)
                elif expected != len(sub.args):
                    self.error(file, sub.line,
                               f"'{sub.name}' expects {expected} argument(s), got {len(sub.args)}", sub.column)


def check_program(program: ast.Program, suite: Optional[ast.TestSuiteDef] = None) -> List[Diagnostic]:
    """Return every static error found in the program and, if given, its tests"""
    checker = _Checker(program)
    checker.check_declarations()
    for function in program.functions:
        checker.check_block(function.body, function.file, function.params)
    if suite is not None:
        seen: Set[str] = set()
        for test in suite.tests:
            if test.test_id in seen:
                checker.error(test.file, test.line, f"test '{test.test_id}' is defined more than once")
            seen.add(test.test_id)
            checker.check_block(test.body, test.file)
    return checker.diagnostics
