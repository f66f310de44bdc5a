"""Tiny evaluator for constant expressions such as ``"-sqrt(2)"`` or
``"cos(2*pi/5)"`` appearing in polytope spec files."""

import ast
import math
import operator

from .errors import SpecParseError

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}
_FUNCS = {"sqrt": math.sqrt, "cos": math.cos, "sin": math.sin}
_CONSTS = {"pi": math.pi}


def evaluate(expr, names=None):
    """Evaluate ``expr`` (a number or a string) to a float.

    Only ``+ - * /``, parentheses, numeric literals, ``pi``, ``sqrt``,
    ``cos``, ``sin`` and the entries of ``names`` are allowed.
    """
    if isinstance(expr, bool):
        raise SpecParseError(f"boolean is not a number: {expr!r}")
    if isinstance(expr, (int, float)):
        return float(expr)
    if not isinstance(expr, str):
        raise SpecParseError(f"expected a number or expression string, got {expr!r}")
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise SpecParseError(f"cannot parse expression {expr!r}") from exc
    scope = dict(_CONSTS)
    if names:
        scope.update(names)
    try:
        return float(_eval(tree.body, scope, expr))
    except (ZeroDivisionError, ValueError) as exc:
        raise SpecParseError(f"cannot evaluate {expr!r}: {exc}") from exc


def _eval(node, scope, src):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        return node.value
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left, scope, src),
                                      _eval(node.right, scope, src))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
        return _UNOPS[type(node.op)](_eval(node.operand, scope, src))
    if isinstance(node, ast.Name):
        if node.id not in scope:
            raise SpecParseError(f"unknown name {node.id!r} in {src!r}")
        return scope[node.id]
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
            and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords:
        return _FUNCS[node.func.id](_eval(node.args[0], scope, src))
    raise SpecParseError(f"unsupported syntax in {src!r}")
