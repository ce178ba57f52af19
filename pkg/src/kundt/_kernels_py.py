"""Pure-Python twin of the compiled kernels in ``_kernels.pyx``.

Programs are flat ``int32`` arrays of ``(opcode, argument)`` pairs, executed on
a value stack.  Several programs live in one array; program ``k`` occupies
pairs ``starts[k]:starts[k+1]``.

=======  =====  ==========================================
opcode   arg    effect
=======  =====  ==========================================
0        i      push ``consts[i]``
1        j      push coordinate ``x[j]``
2-5      --     pop b, a; push a+b, a-b, a*b, a/b
6        --     negate top
7        n      top ** n (integer, possibly negative)
8-12     --     exp, log, sin, cos, sqrt of top
=======  =====  ==========================================

Error codes: 1 division by zero, 2 log of a non-positive number, 3 sqrt of a
negative number, 4 non-finite result, 10 integration left the chart domain.
"""

import math

ERR_DIV, ERR_LOG, ERR_SQRT, ERR_NONFINITE, ERR_DOMAIN = 1, 2, 3, 4, 10


def _run(code, consts, start, stop, x):
    stack = []
    push = stack.append
    mx = 0.0
    for pc in range(start, stop):
        op = code[2 * pc]
        arg = code[2 * pc + 1]
        if op == 0:
            push(consts[arg])
        elif op == 1:
            push(x[arg])
        elif op == 6:
            stack[-1] = -stack[-1]
        elif op <= 5:
            b = stack.pop()
            a = stack[-1]
            if op == 2:
                r = a + b
            elif op == 3:
                r = a - b
            elif op == 4:
                r = a * b
            else:
                if b == 0.0:
                    return ERR_DIV, 0.0, 0.0
                r = a / b
            stack[-1] = r
        elif op == 7:
            a = stack[-1]
            if arg < 0:
                if a == 0.0:
                    return ERR_DIV, 0.0, 0.0
                stack[-1] = 1.0 / (a ** -arg)
            else:
                stack[-1] = a ** arg
        else:
            a = stack[-1]
            if op == 8:
                try:
                    r = math.exp(a)
                except OverflowError:
                    return ERR_NONFINITE, 0.0, 0.0
            elif op == 9:
                if a <= 0.0:
                    return ERR_LOG, 0.0, 0.0
                r = math.log(a)
            elif op == 10:
                r = math.sin(a)
            elif op == 11:
                r = math.cos(a)
            else:
                if a < 0.0:
                    return ERR_SQRT, 0.0, 0.0
                r = math.sqrt(a)
            stack[-1] = r
        v = abs(stack[-1])
        if v > mx:
            mx = v
    if not math.isfinite(stack[0]):
        return ERR_NONFINITE, 0.0, 0.0
    return 0, stack[0], mx


def eval_batch(code, consts, starts, stack_size, points, out, scale, err):
    code = code.tolist()
    consts = consts.tolist()
    starts = starts.tolist()
    nprog = len(starts) - 1
    for p in range(points.shape[0]):
        x = points[p].tolist()
        err[p] = 0
        for k in range(nprog):
            status, val, sc = _run(code, consts, starts[k], starts[k + 1], x)
            if status:
                err[p] = status
                out[p, k] = math.nan
                scale[p, k] = math.nan
            else:
                out[p, k] = val
                scale[p, k] = sc
    return 0


def _accel(code, consts, starts, entries, x, v, d):
    acc = [0.0] * d
    for t, (k, i, j) in enumerate(entries):
        status, val, _ = _run(code, consts, starts[t], starts[t + 1], x)
        if status:
            return status, None
        acc[k] -= val * v[i] * v[j]
    return 0, acc


def _inside(x, lo, hi):
    return all(a < xi < b for xi, a, b in zip(x, lo, hi))


def rk4_geodesic(code, consts, starts, stack_size, kidx, iidx, jidx, x0, v0, dt, steps, lo, hi, xs, vs):
    code = code.tolist()
    consts = consts.tolist()
    starts = starts.tolist()
    entries = list(zip(kidx.tolist(), iidx.tolist(), jidx.tolist()))
    lo = lo.tolist()
    hi = hi.tolist()
    d = len(x0)
    x = list(map(float, x0))
    v = list(map(float, v0))
    xs[0] = x
    vs[0] = v
    for n in range(steps):
        s, k1v = _accel(code, consts, starts, entries, x, v, d)
        if s:
            return s, n
        k1x = v
        tx = [x[i] + 0.5 * dt * k1x[i] for i in range(d)]
        tv = [v[i] + 0.5 * dt * k1v[i] for i in range(d)]
        if not _inside(tx, lo, hi):
            return ERR_DOMAIN, n
        s, k2v = _accel(code, consts, starts, entries, tx, tv, d)
        if s:
            return s, n
        k2x = tv
        tx = [x[i] + 0.5 * dt * k2x[i] for i in range(d)]
        tv = [v[i] + 0.5 * dt * k2v[i] for i in range(d)]
        if not _inside(tx, lo, hi):
            return ERR_DOMAIN, n
        s, k3v = _accel(code, consts, starts, entries, tx, tv, d)
        if s:
            return s, n
        k3x = tv
        tx = [x[i] + dt * k3x[i] for i in range(d)]
        tv = [v[i] + dt * k3v[i] for i in range(d)]
        if not _inside(tx, lo, hi):
            return ERR_DOMAIN, n
        s, k4v = _accel(code, consts, starts, entries, tx, tv, d)
        if s:
            return s, n
        k4x = tv
        x = [x[i] + dt / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]) for i in range(d)]
        v = [v[i] + dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]) for i in range(d)]
        xs[n + 1] = x
        vs[n + 1] = v
        if not _inside(x, lo, hi):
            return ERR_DOMAIN, n + 1
    return 0, steps

