"""
Single-statement deletion on minilang programs
"""

from dataclasses import replace
from typing import Iterable, List, Tuple

from ..errors import NotDeletable
from ..subject.types import StatementLocation
from . import ast


def _without(block: Tuple[ast.Stmt, ...], loc: StatementLocation) -> Tuple[Tuple[ast.Stmt, ...], bool]:
    kept, found = [], False
    for stmt in block:
        if stmt.loc == loc:
            found = True
            continue
        if not found and isinstance(stmt, ast.If):
            then, found = _without(stmt.then, loc)
            orelse = stmt.orelse
            if not found:
                orelse, found = _without(stmt.orelse, loc)
            if found:
                stmt = replace(stmt, then=then, orelse=orelse)
        elif not found and isinstance(stmt, ast.While):
            body, found = _without(stmt.body, loc)
            if found:
                stmt = replace(stmt, body=body)
        kept.append(stmt)
    return tuple(kept), found


def delete_statement(program: ast.Program, loc: StatementLocation) -> ast.Program:
    """
    Return a new program without the statement at loc

    Deleting an if or while removes everything it contains. Every other
    statement keeps its location.

    Raises:
        NotDeletable: loc does not name a statement of the program
    """
    if loc not in program.statement_table:
        raise NotDeletable(f"{loc} is not a deletable statement")
    functions = []
    for function in program.functions:
        if function.file == loc.file:
            body, found = _without(function.body, loc)
            if found:
                function = replace(function, body=body)
        functions.append(function)
    return ast.Program(globals=program.globals, functions=tuple(functions))


def apply_deletions(program: ast.Program, locations: Iterable[StatementLocation]) -> ast.Program:
    """Delete several statements; locations already removed with an enclosing statement are skipped"""
    for loc in locations:
        if loc in program.statement_table:
            program = delete_statement(program, loc)
    return program


def deletion_candidates(program: ast.Program) -> List[StatementLocation]:
    return sorted(program.statement_table)
