# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled stack machine for expression programs and the RK4 geodesic stepper.

Mirrors :mod:`kundt._kernels_py` exactly; see that module for the opcode table.
"""

import numpy as np
from libc.math cimport exp, log, sin, cos, sqrt, fabs, isfinite

cdef enum:
    OP_CONST = 0
    OP_VAR = 1
    OP_ADD = 2
    OP_SUB = 3
    OP_MUL = 4
    OP_DIV = 5
    OP_NEG = 6
    OP_POWI = 7
    OP_EXP = 8
    OP_LOG = 9
    OP_SIN = 10
    OP_COS = 11
    OP_SQRT = 12

cdef enum:
    ERR_DIV = 1
    ERR_LOG = 2
    ERR_SQRT = 3
    ERR_NONFINITE = 4
    ERR_DOMAIN = 10


cdef inline int _run(const int[:] code, const double[:] consts, Py_ssize_t start, Py_ssize_t stop,
                     const double[:] x, double* stack, double* result, double* scale) nogil:
    cdef Py_ssize_t pc = start
    cdef int sp = -1
    cdef int op, arg, k
    cdef double a, b, r, mx = 0.0
    while pc < stop:
        op = code[2 * pc]
        arg = code[2 * pc + 1]
        pc += 1
        if op == OP_CONST:
            sp += 1
            stack[sp] = consts[arg]
        elif op == OP_VAR:
            sp += 1
            stack[sp] = x[arg]
        elif op == OP_NEG:
            stack[sp] = -stack[sp]
        elif op <= OP_DIV:
            b = stack[sp]
            sp -= 1
            a = stack[sp]
            if op == OP_ADD:
                r = a + b
            elif op == OP_SUB:
                r = a - b
            elif op == OP_MUL:
                r = a * b
            else:
                if b == 0.0:
                    return ERR_DIV
                r = a / b
            stack[sp] = r
        elif op == OP_POWI:
            a = stack[sp]
            r = 1.0
            k = arg if arg >= 0 else -arg
            b = a
            while k:
                if k & 1:
                    r *= b
                k >>= 1
                if k:
                    b *= b
            if arg < 0:
                if r == 0.0:
                    return ERR_DIV
                r = 1.0 / r
            stack[sp] = r
        else:
            a = stack[sp]
            if op == OP_EXP:
                r = exp(a)
            elif op == OP_LOG:
                if a <= 0.0:
                    return ERR_LOG
                r = log(a)
            elif op == OP_SIN:
                r = sin(a)
            elif op == OP_COS:
                r = cos(a)
            else:
                if a < 0.0:
                    return ERR_SQRT
                r = sqrt(a)
            stack[sp] = r
        if fabs(stack[sp]) > mx:
            mx = fabs(stack[sp])
    if not isfinite(stack[0]):
        return ERR_NONFINITE
    result[0] = stack[0]
    scale[0] = mx
    return 0


def eval_batch(const int[:] code, const double[:] consts, const long[:] starts, int stack_size,
               const double[:, :] points, double[:, :] out, double[:, :] scale, int[:] err):
    """Evaluate every program at every point; ``err[p]`` flags failed points."""
    cdef Py_ssize_t npts = points.shape[0]
    cdef Py_ssize_t nprog = starts.shape[0] - 1
    cdef Py_ssize_t p, k
    cdef int status
    cdef double res, sc
    cdef double[::1] stack = np.empty(stack_size + 1)
    for p in range(npts):
        err[p] = 0
        for k in range(nprog):
            status = _run(code, consts, starts[k], starts[k + 1], points[p], &stack[0], &res, &sc)
            if status:
                err[p] = status
                out[p, k] = float("nan")
                scale[p, k] = float("nan")
            else:
                out[p, k] = res
                scale[p, k] = sc
    return 0


cdef int _accel(const int[:] code, const double[:] consts, const long[:] starts,
                const int[:] kidx, const int[:] iidx, const int[:] jidx,
                const double[:] x, const double[:] v, double[:] acc, double* stack) nogil:
    cdef Py_ssize_t n = kidx.shape[0]
    cdef Py_ssize_t t, d = acc.shape[0]
    cdef double res, sc
    cdef int status
    for t in range(d):
        acc[t] = 0.0
    for t in range(n):
        status = _run(code, consts, starts[t], starts[t + 1], x, stack, &res, &sc)
        if status:
            return status
        acc[kidx[t]] -= res * v[iidx[t]] * v[jidx[t]]
    return 0


cdef int _inside(const double[:] x, const double[:] lo, const double[:] hi) nogil:
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        if not (x[i] > lo[i] and x[i] < hi[i]):
            return 0
    return 1


def rk4_geodesic(const int[:] code, const double[:] consts, const long[:] starts, int stack_size,
                 const int[:] kidx, const int[:] iidx, const int[:] jidx,
                 double[:] x0, double[:] v0, double dt, int steps,
                 const double[:] lo, const double[:] hi,
                 double[:, :] xs, double[:, :] vs):
    """Classical RK4 for x'' = -Gamma(x)[v, v].  Returns (status, failed_step)."""
    cdef Py_ssize_t d = x0.shape[0]
    cdef Py_ssize_t n, i
    cdef int status
    cdef double[::1] stack = np.empty(stack_size + 1)
    cdef double[::1] k1x = np.empty(d), k2x = np.empty(d), k3x = np.empty(d), k4x = np.empty(d)
    cdef double[::1] k1v = np.empty(d), k2v = np.empty(d), k3v = np.empty(d), k4v = np.empty(d)
    cdef double[::1] tx = np.empty(d), tv = np.empty(d)
    for i in range(d):
        xs[0, i] = x0[i]
        vs[0, i] = v0[i]
    for n in range(steps):
        # stage 1
        for i in range(d):
            k1x[i] = vs[n, i]
        status = _accel(code, consts, starts, kidx, iidx, jidx, xs[n], vs[n], k1v, &stack[0])
        if status:
            return status, n
        # stage 2
        for i in range(d):
            tx[i] = xs[n, i] + 0.5 * dt * k1x[i]
            tv[i] = vs[n, i] + 0.5 * dt * k1v[i]
            k2x[i] = tv[i]
        if not _inside(tx, lo, hi):
            return ERR_DOMAIN, n
        status = _accel(code, consts, starts, kidx, iidx, jidx, tx, tv, k2v, &stack[0])
        if status:
            return status, n
        # stage 3
        for i in range(d):
            tx[i] = xs[n, i] + 0.5 * dt * k2x[i]
            tv[i] = vs[n, i] + 0.5 * dt * k2v[i]
            k3x[i] = tv[i]
        if not _inside(tx, lo, hi):
            return ERR_DOMAIN, n
        status = _accel(code, consts, starts, kidx, iidx, jidx, tx, tv, k3v, &stack[0])
        if status:
            return status, n
        # stage 4
        for i in range(d):
            tx[i] = xs[n, i] + dt * k3x[i]
            tv[i] = vs[n, i] + dt * k3v[i]
            k4x[i] = tv[i]
        if not _inside(tx, lo, hi):
            return ERR_DOMAIN, n
        status = _accel(code, consts, starts, kidx, iidx, jidx, tx, tv, k4v, &stack[0])
        if status:
            return status, n
        for i in range(d):
            xs[n + 1, i] = xs[n, i] + dt / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i])
            vs[n + 1, i] = vs[n, i] + dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i])
        if not _inside(xs[n + 1], lo, hi):
            return ERR_DOMAIN, n + 1
    return 0, steps
