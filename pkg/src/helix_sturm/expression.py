"""Restricted arithmetic expressions in ``r`` for raw potential overrides.

Config files may replace the model potential by a formula such as
``"r**2"`` or ``"-2/r + 0.5/r**2"``.  Only numbers, the variable ``r``,
arithmetic operators and a few numpy functions are accepted; anything else
is rejected before compilation.
"""

from __future__ import annotations

import ast

import numpy as np

FUNCTIONS = {
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "abs": np.abs,
}
CONSTANTS = {"pi": np.pi}

_ALLOWED = (
    ast.Expression,
    ast.BinOp,
    ast.UnaryOp,
    ast.Call,
    ast.Name,
    ast.Load,
    ast.Constant,
    ast.Add,
    ast.Sub,
    ast.Mult,
    ast.Div,
    ast.Pow,
    ast.USub,
    ast.UAdd,
)


class ExpressionError(ValueError):
    pass


def _check(tree):
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED):
            raise ExpressionError(f"disallowed syntax: {type(node).__name__}")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
            raise ExpressionError(f"only numeric constants are allowed, got {node.value!r}")
        if isinstance(node, ast.Name) and node.id not in FUNCTIONS and node.id not in CONSTANTS and node.id != "r":
            raise ExpressionError(f"unknown name {node.id!r}")
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
                raise ExpressionError("only the whitelisted functions may be called")
            if node.keywords or len(node.args) != 1:
                raise ExpressionError("functions take exactly one positional argument")


class PotentialExpression:
    """Callable ``u(r)`` compiled from a whitelisted expression string.

    Instances pickle by their source text, so they can cross process pools.
    """

    def __init__(self, source: str):
        try:
            tree = ast.parse(source.strip(), mode="eval")
        except SyntaxError as exc:
            raise ExpressionError(f"cannot parse {source!r}: {exc.msg}") from None
        _check(tree)
        self.source = source
        self._code = compile(tree, "<u_override>", "eval")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        namespace = {"__builtins__": {}, "r": r, **FUNCTIONS, **CONSTANTS}
        return np.broadcast_to(np.asarray(eval(self._code, namespace), dtype=float), r.shape)

    def __reduce__(self):
        return (type(self), (self.source,))

    def __eq__(self, other):
        return isinstance(other, PotentialExpression) and other.source == self.source

    def __hash__(self):
        return hash(self.source)

    def __repr__(self):
        return f"PotentialExpression({self.source!r})"
