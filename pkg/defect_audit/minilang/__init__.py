"""
minilang: a small deterministic subject language

Sources live in ``*.mini`` files and tests in ``*.minitest`` files. The
package parses, checks, interprets and mutates programs and serves them
through the ``minilang`` adapter.
"""

from .exceptions import AssertionFailed, FuelExhausted, MiniError, MiniRuntimeError, MiniSyntaxError

__all__ = ['AssertionFailed', 'FuelExhausted', 'MiniError', 'MiniRuntimeError', 'MiniSyntaxError']
