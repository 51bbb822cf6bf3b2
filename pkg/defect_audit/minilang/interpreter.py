"""
Tree-walking interpreter with statement tracing and a step budget

Fuel: one step per executed statement, per function call and per loop
condition check.
"""

import time
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..subject.types import StatementLocation
from . import ast
from .exceptions import AssertionFailed, FuelExhausted, MiniRuntimeError

DEFAULT_FUEL = 1_000_000
MAX_CALL_DEPTH = 50
DEADLINE_CHECK_INTERVAL = 1024


class _Unit:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return 'unit'


UNIT = _Unit()


def _type_name(value: Any) -> str:
    if value is UNIT:
        return 'unit'
    return {bool: 'bool', int: 'int', str: 'string'}.get(type(value), type(value).__name__)


def to_text(value: Any) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if value is UNIT:
        return 'unit'
    return str(value)


def values_equal(left: Any, right: Any) -> bool:
    return type(left) is type(right) and left == right


class _Return(Exception):
    def __init__(self, value: Any):
        self.value = value


class Interpreter:
    """
    One execution context: globals persist for the lifetime of the instance

    The trace records each executed StatementLocation once, in order of first
    execution.
    """

    def __init__(self, program: ast.Program, fuel: int = DEFAULT_FUEL, deadline: Optional[float] = None):
        self.program = program
        self.fuel = fuel
        self.deadline = deadline
        self.steps = 0
        self.depth = 0
        self.globals: Dict[str, Any] = {}
        self._trace: Dict[StatementLocation, None] = {}
        self._initialized = False
        self._file: Optional[str] = None

    @property
    def trace(self) -> List[StatementLocation]:
        return list(self._trace)

    def reset_trace(self) -> None:
        self._trace = {}

    def refuel(self, fuel: Optional[int] = None, deadline: Optional[float] = None) -> None:
        self.fuel = fuel if fuel is not None else self.fuel
        self.deadline = deadline
        self.steps = 0

    def initialize(self) -> None:
        """Evaluate global initializers once, in declaration order"""
        if self._initialized:
            return
        self._initialized = True
        for decl in self.program.globals:
            self._file = decl.file
            self.globals[decl.name] = self._eval(decl.initializer, {})

    def _tick(self, line: int = 0) -> None:
        self.steps += 1
        if self.steps > self.fuel:
            raise FuelExhausted(f"step budget of {self.fuel} exhausted", line, self._file)
        if self.deadline is not None and self.steps % DEADLINE_CHECK_INTERVAL == 0 \
                and time.monotonic() > self.deadline:
            raise FuelExhausted("time limit exceeded", line, self._file)

    def _fail(self, message: str, line: int) -> MiniRuntimeError:
        return MiniRuntimeError(message, line, self._file)

    # calls

    def call(self, name: str, args: Sequence[Any], line: int = 0) -> Any:
        if name == 'len':
            (value,) = args
            if not isinstance(value, str):
                raise self._fail(f"len expects a string, got {_type_name(value)}", line)
            return len(value)
        if name == 'str':
            (value,) = args
            return to_text(value)

        function = self.program.function_map.get(name)
        if function is None:
            raise self._fail(f"undefined function '{name}'", line)
        if len(args) != len(function.params):
            raise self._fail(f"'{name}' expects {len(function.params)} argument(s), got {len(args)}", line)
        if self.depth >= MAX_CALL_DEPTH:
            raise self._fail(f"call depth limit of {MAX_CALL_DEPTH} exceeded", line)

        self._tick(line)
        caller_file = self._file
        self.depth += 1
        self._file = function.file
        try:
            self.execute_block(function.body, dict(zip(function.params, args)))
            return UNIT
        except _Return as r:
            return r.value
        finally:
            self.depth -= 1
            self._file = caller_file

    def run_body(self, body: Tuple[ast.Stmt, ...], file: str) -> None:
        """Execute a test body in a frame of its own"""
        self._file = file
        try:
            self.execute_block(body, {})
        except _Return:
            pass

    # statements

    def execute_block(self, block: Tuple[ast.Stmt, ...], frame: Dict[str, Any]) -> None:
        for stmt in block:
            self.execute(stmt, frame)

    def execute(self, stmt: ast.Stmt, frame: Dict[str, Any]) -> None:
        if stmt.loc is not None:
            self._trace.setdefault(stmt.loc, None)
        self._tick(stmt.line)

        if isinstance(stmt, ast.Assign):
            frame[stmt.name] = self._eval(stmt.value, frame)
        elif isinstance(stmt, ast.GlobalAssign):
            if stmt.name not in self.globals:
                raise self._fail(f"undeclared global '{stmt.name}'", stmt.line)
            self.globals[stmt.name] = self._eval(stmt.value, frame)
        elif isinstance(stmt, ast.If):
            if self._condition(stmt.condition, frame):
                self.execute_block(stmt.then, frame)
            else:
                self.execute_block(stmt.orelse, frame)
        elif isinstance(stmt, ast.While):
            while True:
                self._tick(stmt.line)
                if not self._condition(stmt.condition, frame):
                    break
                self.execute_block(stmt.body, frame)
        elif isinstance(stmt, ast.Return):
            raise _Return(UNIT if stmt.value is None else self._eval(stmt.value, frame))
        elif isinstance(stmt, ast.ExprStmt):
            self._eval(stmt.call, frame)
        elif isinstance(stmt, ast.Assert):
            if not self._condition(stmt.condition, frame):
                raise AssertionFailed("assertion failed", stmt.line, self._file)
        else:
            raise self._fail(f"unknown statement {type(stmt).__name__}", stmt.line)

    def _condition(self, expr: ast.Expr, frame: Dict[str, Any]) -> bool:
        value = self._eval(expr, frame)
        if not isinstance(value, bool):
            raise self._fail(f"condition must be bool, got {_type_name(value)}", expr.line)
        return value

    # expressions

    def _eval(self, expr: ast.Expr, frame: Dict[str, Any]) -> Any:
        if isinstance(expr, (ast.IntLit, ast.BoolLit, ast.StrLit)):
            return expr.value
        if isinstance(expr, ast.Name):
            if expr.name in frame:
                return frame[expr.name]
            if expr.name in self.globals:
                return self.globals[expr.name]
            raise self._fail(f"undefined variable '{expr.name}'", expr.line)
        if isinstance(expr, ast.Call):
            args = [self._eval(arg, frame) for arg in expr.args]
            return self.call(expr.name, args, expr.line)
        if isinstance(expr, ast.Unary):
            value = self._eval(expr.operand, frame)
            if expr.op == '!':
                if not isinstance(value, bool):
                    raise self._fail(f"'!' expects bool, got {_type_name(value)}", expr.line)
                return not value
            self._require_int(value, '-', expr.line)
            return -value
        if isinstance(expr, ast.Binary):
            return self._binary(expr, frame)
        raise self._fail(f"unknown expression {type(expr).__name__}", getattr(expr, 'line', 0))

    def _require_int(self, value: Any, op: str, line: int) -> None:
        if type(value) is not int:
            raise self._fail(f"'{op}' expects int, got {_type_name(value)}", line)

    def _binary(self, expr: ast.Binary, frame: Dict[str, Any]) -> Any:
        op = expr.op
        if op in ('&&', '||'):
            left = self._condition(expr.left, frame)
            if (op == '&&' and not left) or (op == '||' and left):
                return left
            return self._condition(expr.right, frame)

        left = self._eval(expr.left, frame)
        right = self._eval(expr.right, frame)
        if op == '==':
            return values_equal(left, right)
        if op == '!=':
            return not values_equal(left, right)
        if op == '+' and isinstance(left, str) and isinstance(right, str):
            return left + right
        if op in ('<', '<=', '>', '>=') and isinstance(left, str) and isinstance(right, str):
            return _compare(op, left, right)

        self._require_int(left, op, expr.line)
        self._require_int(right, op, expr.line)
        if op == '+':
            return left + right
        if op == '-':
            return left - right
        if op == '*':
            return left * right
        if op in ('/', '%'):
            if right == 0:
                raise self._fail("division by zero", expr.line)
            quotient = abs(left) // abs(right)
            if (left < 0) != (right < 0):
                quotient = -quotient
            return quotient if op == '/' else left - right * quotient
        return _compare(op, left, right)


def _compare(op: str, left: Any, right: Any) -> bool:
    if op == '<':
        return left < right
    if op == '<=':
        return left <= right
    if op == '>':
        return left > right
    return left >= right


def interpret(program: ast.Program, entry_function: str, args: Sequence[Any] = (),
              fuel: int = DEFAULT_FUEL, deadline: Optional[float] = None) -> Tuple[Any, List[StatementLocation]]:
    """
    Run one function of a statically valid program

    Returns the function's value and the executed-statement trace.

    Raises:
        MiniRuntimeError: with ``trace`` holding the statements executed so far
    """
    interpreter = Interpreter(program, fuel=fuel, deadline=deadline)
    try:
        interpreter.initialize()
        value = interpreter.call(entry_function, list(args))
    except MiniRuntimeError as e:
        e.trace = interpreter.trace
        raise
    return value, interpreter.trace
