"""
Tokenizer and recursive-descent parser for minilang

Statements of source files are numbered per file in pre-order starting at 1:
a compound statement takes its number before the statements it contains.
Statements of test files are not numbered.
"""

import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from ..subject.types import Diagnostic, StatementLocation
from . import ast
from .exceptions import MiniSyntaxError

KEYWORDS = {'fn', 'global', 'if', 'else', 'while', 'return', 'assert', 'true', 'false', 'test'}

_TOKEN_RE = re.compile(r'''
    (?P<ws>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>//[^\n]*)
  | (?P<int>\d+)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>&&|\|\||==|!=|<=|>=|[-+*/%<>=!(){},;])
''', re.VERBOSE)

_ESCAPES = {'n': '\n', 't': '\t', '"': '"', '\\': '\\'}

_BINARY_LEVELS = (
    ('||',),
    ('&&',),
    ('==', '!='),
    ('<', '<=', '>', '>='),
    ('+', '-'),
    ('*', '/', '%'),
)


@dataclass(frozen=True)
class Token:
    kind: str  # int, string, ident, keyword, op, eof
    text: str
    line: int
    column: int


def _unescape(body: str) -> str:
    return re.sub(r'\\(.)', lambda m: _ESCAPES.get(m.group(1), m.group(1)), body)


def tokenize(text: str, file: str) -> List[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            raise MiniSyntaxError([Diagnostic(file, line, f"unexpected character {text[pos]!r}", column)])
        kind = match.lastgroup
        value = match.group()
        if kind == 'newline':
            line += 1
            line_start = match.end()
        elif kind == 'ident' and value in KEYWORDS:
            tokens.append(Token('keyword', value, line, column))
        elif kind == 'string':
            tokens.append(Token('string', _unescape(value[1:-1]), line, column))
        elif kind not in ('ws', 'comment'):
            tokens.append(Token(kind, value, line, column))
        pos = match.end()
    tokens.append(Token('eof', '', line, pos - line_start + 1))
    return tokens


class Parser:
    """Parses one file; numbered=True assigns StatementLocations"""

    def __init__(self, text: str, file: str, numbered: bool = True):
        self.file = file
        self.tokens = tokenize(text, file)
        self.pos = 0
        self.numbered = numbered
        self.counter = 0

    # token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _error(self, message: str, token: Optional[Token] = None) -> MiniSyntaxError:
        token = token or self.current
        found = 'end of file' if token.kind == 'eof' else repr(token.text)
        return MiniSyntaxError([Diagnostic(self.file, token.line, f"{message}, found {found}", token.column)])

    def _check(self, text: str) -> bool:
        return self.current.kind in ('op', 'keyword') and self.current.text == text

    def _accept(self, text: str) -> Optional[Token]:
        if self._check(text):
            token = self.current
            self.pos += 1
            return token
        return None

    def _expect(self, text: str) -> Token:
        token = self._accept(text)
        if token is None:
            raise self._error(f"expected '{text}'")
        return token

    def _expect_ident(self) -> Token:
        token = self.current
        if token.kind != 'ident':
            raise self._error("expected a name")
        self.pos += 1
        return token

    def _next_location(self) -> Optional[StatementLocation]:
        if not self.numbered:
            return None
        self.counter += 1
        return StatementLocation(file=self.file, statement_index=self.counter)

    # declarations

    def parse_program(self) -> ast.Program:
        globals_, functions = [], []
        while self.current.kind != 'eof':
            if self._check('global'):
                token = self._expect('global')
                name = self._expect_ident().text
                self._expect('=')
                value = self.parse_expr()
                self._expect(';')
                globals_.append(ast.GlobalDecl(name, value, self.file, token.line))
            elif self._check('fn'):
                functions.append(self._parse_function())
            else:
                raise self._error("expected 'fn' or 'global'")
        return ast.Program(globals=tuple(globals_), functions=tuple(functions))

    def _parse_function(self) -> ast.Function:
        token = self._expect('fn')
        name = self._expect_ident().text
        self._expect('(')
        params = []
        if not self._check(')'):
            params.append(self._expect_ident().text)
            while self._accept(','):
                params.append(self._expect_ident().text)
        self._expect(')')
        body = self._parse_block()
        return ast.Function(name, tuple(params), body, self.file, token.line)

    def parse_tests(self) -> ast.TestSuiteDef:
        tests = []
        while self.current.kind != 'eof':
            token = self._expect('test')
            name = self._expect_ident().text
            tests.append(ast.TestCase(name, self._parse_block(), self.file, token.line))
        return ast.TestSuiteDef(tests=tuple(tests))

    # statements

    def _parse_block(self) -> Tuple[ast.Stmt, ...]:
        self._expect('{')
        stmts = []
        while not self._check('}'):
            if self.current.kind == 'eof':
                raise self._error("expected '}'")
            stmts.append(self._parse_statement())
        self._expect('}')
        return tuple(stmts)

    def _parse_statement(self) -> ast.Stmt:
        token = self.current
        if self._accept('if'):
            return self._parse_if(token)
        if self._accept('while'):
            loc = self._next_location()
            condition = self.parse_expr()
            return ast.While(condition, self._parse_block(), loc, token.line)
        if self._accept('return'):
            loc = self._next_location()
            value = None if self._check(';') else self.parse_expr()
            self._expect(';')
            return ast.Return(value, loc, token.line)
        if self._accept('assert'):
            loc = self._next_location()
            condition = self.parse_expr()
            self._expect(';')
            return ast.Assert(condition, loc, token.line)
        if self._accept('global'):
            loc = self._next_location()
            name = self._expect_ident().text
            self._expect('=')
            value = self.parse_expr()
            self._expect(';')
            return ast.GlobalAssign(name, value, loc, token.line)
        if token.kind == 'ident':
            following = self.tokens[self.pos + 1]
            if following.kind == 'op' and following.text == '=':
                loc = self._next_location()
                self.pos += 2
                value = self.parse_expr()
                self._expect(';')
                return ast.Assign(token.text, value, loc, token.line)
            if following.kind == 'op' and following.text == '(':
                loc = self._next_location()
                call = self.parse_expr()
                if not isinstance(call, ast.Call):
                    raise self._error("expected ';' after call statement")
                self._expect(';')
                return ast.ExprStmt(call, loc, token.line)
        raise self._error("expected a statement")

    def _parse_if(self, token: Token) -> ast.If:
        loc = self._next_location()
        condition = self.parse_expr()
        then = self._parse_block()
        orelse: Tuple[ast.Stmt, ...] = ()
        if self._accept('else'):
            nested = self.current
            if self._accept('if'):
                orelse = (self._parse_if(nested),)
            else:
                orelse = self._parse_block()
        return ast.If(condition, then, orelse, loc, token.line)

    # expressions

    def parse_expr(self, level: int = 0) -> ast.Expr:
        if level == len(_BINARY_LEVELS):
            return self._parse_unary()
        left = self.parse_expr(level + 1)
        while self.current.kind == 'op' and self.current.text in _BINARY_LEVELS[level]:
            op = self.current
            self.pos += 1
            right = self.parse_expr(level + 1)
            left = ast.Binary(op.text, left, right, op.line, op.column)
        return left

    def _parse_unary(self) -> ast.Expr:
        token = self.current
        if token.kind == 'op' and token.text in ('!', '-'):
            self.pos += 1
            return ast.Unary(token.text, self._parse_unary(), token.line, token.column)
        return self._parse_primary()

    def _parse_primary(self) -> ast.Expr:
        token = self.current
        if token.kind == 'int':
            self.pos += 1
            return ast.IntLit(int(token.text), token.line, token.column)
        if token.kind == 'string':
            self.pos += 1
            return ast.StrLit(token.text, token.line, token.column)
        if token.kind == 'keyword' and token.text in ('true', 'false'):
            self.pos += 1
            return ast.BoolLit(token.text == 'true', token.line, token.column)
        if token.kind == 'ident':
            self.pos += 1
            if self._accept('('):
                args = []
                if not self._check(')'):
                    args.append(self.parse_expr())
                    while self._accept(','):
                        args.append(self.parse_expr())
                self._expect(')')
                return ast.Call(token.text, tuple(args), token.line, token.column)
            return ast.Name(token.text, token.line, token.column)
        if self._accept('('):
            inner = self.parse_expr()
            self._expect(')')
            return inner
        raise self._error("expected an expression")


def parse_program(source_text: str, file: str = 'main.mini') -> ast.Program:
    """
    Parse one source file

    Raises:
        MiniSyntaxError: with the diagnostic of the first syntax error
    """
    parser = Parser(source_text, file)
    return _nesting_guard(parser, parser.parse_program)


def parse_tests(source_text: str, file: str = 'main.minitest') -> ast.TestSuiteDef:
    parser = Parser(source_text, file, numbered=False)
    return _nesting_guard(parser, parser.parse_tests)


def _nesting_guard(parser: Parser, parse):
    try:
        return parse()
    except RecursionError:
        raise parser._error("nesting is too deep") from None


def _read(path: Path) -> str:
    with open(path, 'r', encoding='utf-8') as f:
        return f.read()


def _collect(root: Path, suffix: str, parse) -> Tuple[list, List[Diagnostic]]:
    parsed, diagnostics = [], []
    for path in sorted(root.rglob(f'*{suffix}'), key=lambda p: p.relative_to(root).as_posix()):
        relative = path.relative_to(root).as_posix()
        try:
            parsed.append(parse(_read(path), relative))
        except MiniSyntaxError as e:
            diagnostics.extend(e.diagnostics)
    return parsed, diagnostics


def parse_source_tree(root: Path) -> Tuple[ast.Program, List[Diagnostic]]:
    """Parse every ``*.mini`` file below root, ordered by relative path"""
    programs, diagnostics = _collect(Path(root), '.mini', parse_program)
    merged = ast.Program()
    for program in programs:
        merged = merged.merge(program)
    return merged, diagnostics


def parse_test_tree(root: Path) -> Tuple[ast.TestSuiteDef, List[Diagnostic]]:
    """Parse every ``*.minitest`` file below root, ordered by relative path"""
    suites, diagnostics = _collect(Path(root), '.minitest', parse_tests)
    merged = ast.TestSuiteDef()
    for suite in suites:
        merged = merged.merge(suite)
    return merged, diagnostics
