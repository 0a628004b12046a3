"""Exact evaluation of small arithmetic formulas over rationals.

Only integer literals, names, + - * /, unary minus and integer powers are
accepted; anything else is rejected rather than evaluated.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Mapping

from .errors import ParseError

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def _eval(node, env: Mapping[str, Fraction]) -> Fraction:
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise ParseError(f"unbound name {node.id!r}")
        return Fraction(env[node.id])
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
        if isinstance(node.op, ast.Pow):
            e = _eval(node.right, env)
            if e.denominator != 1:
                raise ParseError("only integer exponents are exact")
            return _eval(node.left, env) ** int(e)
    raise ParseError(f"unsupported syntax: {ast.dump(node)[:60]}")


def evaluate(text: str, **env) -> Fraction:
    """``evaluate("2*q**2/(2+kappa)", q=Fraction(3), kappa=Fraction(1, 2))``."""
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    return _eval(tree, env)
