"""A small whitelisted expression language for the F and G maps.

Expressions are ordinary Python arithmetic over named variables: numbers,
+ - * / **, unary minus, and the functions abs, min, max, sqrt. Nothing
else parses.
"""
from __future__ import annotations

import ast
import math
from typing import Callable

_FUNCS = {"abs": abs, "min": min, "max": max, "sqrt": math.sqrt}
_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a**b,
}

BUILTIN_F = {
    "identity": "t",
    "sqrt": "sqrt(t)",
}
BUILTIN_G = {
    "absdiff": "abs(r - s)",
    "sum": "r + s + t",
    "cross": "t",
}


class ExpressionError(ValueError):
    pass


def _check(node: ast.AST, names: tuple[str, ...]) -> None:
    if isinstance(node, ast.Expression):
        _check(node.body, names)
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)) or isinstance(node.value, bool):
            raise ExpressionError(f"constant {node.value!r} not allowed")
    elif isinstance(node, ast.Name):
        if node.id not in names:
            raise ExpressionError(f"unknown variable {node.id!r}; allowed: {', '.join(names)}")
    elif isinstance(node, ast.BinOp):
        if type(node.op) not in _BINOPS:
            raise ExpressionError(f"operator {type(node.op).__name__} not allowed")
        _check(node.left, names)
        _check(node.right, names)
    elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        _check(node.operand, names)
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCS or node.keywords:
            raise ExpressionError("only abs, min, max, sqrt calls are allowed")
        for a in node.args:
            _check(a, names)
    else:
        raise ExpressionError(f"{type(node).__name__} not allowed in expressions")


def _eval(node: ast.AST, env: dict):
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.Constant):
        return node.value
    if isinstance(node, ast.Name):
        return env[node.id]
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Call):
        return _FUNCS[node.func.id](*(_eval(a, env) for a in node.args))
    raise ExpressionError(type(node).__name__)  # pragma: no cover


def compile_expr(source: str, names: tuple[str, ...]) -> Callable:
    """Parse ``source`` into a function of the positional variables ``names``."""
    try:
        tree = ast.parse(source.strip(), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {source!r}") from exc
    _check(tree, names)

    def fn(*args):
        if len(args) != len(names):
            raise ExpressionError(f"expected {len(names)} arguments")
        return _eval(tree, dict(zip(names, args)))

    fn.__name__ = source
    return fn


def make_F(spec: str) -> Callable:
    """F(t): a builtin name, "power:<p>", or an expression in t."""
    if spec.startswith("power:"):
        return compile_expr(f"t ** (1 / {float(spec.split(':', 1)[1])!r})", ("t",))
    return compile_expr(BUILTIN_F.get(spec, spec), ("t",))


def make_G(spec: str) -> Callable:
    """G(r, s, t): a builtin name, "absdiff:<p>", or an expression in r, s, t."""
    if spec.startswith("absdiff:"):
        return compile_expr(f"abs(r - s) ** {float(spec.split(':', 1)[1])!r}", ("r", "s", "t"))
    return compile_expr(BUILTIN_G.get(spec, spec), ("r", "s", "t"))
