"""Compile trees to stack programs and evaluate them through the kernel backend."""

from __future__ import annotations

import numpy as np

from .. import _backend
from ..errors import EvalError
from .nodes import Add, Const, Div, Func, Mul, Pow, Sym

_FUNC_OPS = {"exp": 8, "log": 9, "sin": 10, "cos": 11, "sqrt": 12}
_ERRORS = {
    1: "division by zero",
    2: "log of a non-positive number",
    3: "sqrt of a negative number",
    4: "non-finite value",
    10: "left the chart domain",
}


def error_message(code):
    return _ERRORS.get(code, f"error {code}")


class Program:
    """Several expressions compiled against one variable ordering."""

    def __init__(self, exprs, variables):
        self.variables = tuple(variables)
        index = {v: i for i, v in enumerate(self.variables)}
        code = []
        consts = []
        const_index = {}
        starts = [0]
        depth = 0
        for e in exprs:
            missing = e.free_symbols - index.keys()
            if missing:
                raise EvalError(f"no value for symbols {sorted(missing)}")
            depth = max(depth, _emit(e, index, code, consts, const_index))
            starts.append(len(code) // 2)
        self.code = np.asarray(code, dtype=np.int32)
        self.consts = np.asarray(consts if consts else [0.0], dtype=np.float64)
        self.starts = np.asarray(starts, dtype=np.int_)
        self.stack_size = max(depth, 1)
        self.size = len(starts) - 1

    def run(self, points):
        """Evaluate at an ``(n, len(variables))`` array.

        Returns ``(values, scales, err)``; ``scales`` holds the largest
        absolute intermediate value per entry, ``err`` a per-point error code.
        """
        pts = np.ascontiguousarray(points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(1, -1)
        n = pts.shape[0]
        out = np.empty((n, self.size))
        scale = np.empty((n, self.size))
        err = np.zeros(n, dtype=np.int32)
        if self.size:
            _backend.kernels.eval_batch(self.code, self.consts, self.starts, self.stack_size,
                                        pts, out, scale, err)
        return out, scale, err


def _emit(e, index, code, consts, const_index):
    """Append code for ``e``; returns the stack depth it needs."""
    if isinstance(e, Const):
        v = float(e.value)
        k = const_index.get(v)
        if k is None:
            k = const_index[v] = len(consts)
            consts.append(v)
        code += (0, k)
        return 1
    if isinstance(e, Sym):
        code += (1, index[e.name])
        return 1
    if isinstance(e, (Add, Mul)):
        items = e.terms if isinstance(e, Add) else e.factors
        op = 2 if isinstance(e, Add) else 4
        depth = _emit(items[0], index, code, consts, const_index)
        for t in items[1:]:
            depth = max(depth, 1 + _emit(t, index, code, consts, const_index))
            code += (op, 0)
        return depth
    if isinstance(e, Div):
        d1 = _emit(e.num, index, code, consts, const_index)
        d2 = _emit(e.den, index, code, consts, const_index)
        code += (5, 0)
        return max(d1, 1 + d2)
    if isinstance(e, Pow):
        d = _emit(e.base, index, code, consts, const_index)
        code += (7, e.exp)
        return d
    if isinstance(e, Func):
        d = _emit(e.arg, index, code, consts, const_index)
        code += (_FUNC_OPS[e.fname], 0)
        return d
    raise TypeError(type(e).__name__)


def evaluate(e, point) -> float:
    """IEEE double value of ``e`` at ``point`` (a mapping name -> number)."""
    names = sorted(e.free_symbols)
    missing = [n for n in names if n not in point]
    if missing:
        raise EvalError(f"no value for symbols {missing}")
    prog = Program([e], names)
    out, _, err = prog.run(np.array([[float(point[n]) for n in names]]))
    if err[0]:
        raise EvalError(f"cannot evaluate {e}: {error_message(int(err[0]))}")
    return float(out[0, 0])


def evaluate_many(exprs, point):
    """Values of several expressions at one point, as a float array."""
    exprs = list(exprs)
    names = sorted(set().union(*(e.free_symbols for e in exprs))) if exprs else []
    missing = [n for n in names if n not in point]
    if missing:
        raise EvalError(f"no value for symbols {missing}")
    prog = Program(exprs, names)
    out, _, err = prog.run(np.array([[float(point[n]) for n in names]]))
    if err[0]:
        raise EvalError(f"evaluation failed: {error_message(int(err[0]))}")
    return out[0]
