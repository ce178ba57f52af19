"""Deciding identical vanishing of an expression on a box.

Two routes:

1. *Exact.*  If the canonical form contains no transcendental atoms it is a
   quotient of polynomials with rational coefficients, and the expression
   vanishes iff the numerator is the zero polynomial.  No randomness.
2. *Sampled.*  Otherwise the canonical numerator (a polynomial in symbols and
   atoms, so poles of the denominator never matter) is evaluated at
   ``samples`` points drawn uniformly from the box.  It is declared zero iff
   ``|value| <= tol * (1 + largest intermediate magnitude)`` at every point.

Soundness of the sampled route.  Uniform doubles in a box of width ``w``
take at least ``2**40`` distinct values per axis when ``w >= 2**-12``.  A
nonzero polynomial of total degree ``D`` then vanishes at a random grid point
with probability at most ``D / 2**40`` (Schwartz-Zippel), independently per
sample, so ``samples`` points all landing on the zero set has probability at
most ``(D / 2**40) ** samples``; see :func:`schwartz_zippel_bound`.  For
``D = 12`` and 64 samples that is far below ``1e-12`` (already 2 samples
suffice).  Rational inputs never reach this route.
"""

from __future__ import annotations

import numpy as np

from ..errors import SamplingExhausted
from .evaluate import Program
from .ratfunc import canon, poly_to_tree

DEFAULT_SAMPLES = 64
DEFAULT_TOL = 1e-9
MAX_RETRIES = 32
DEFAULT_HALF_WIDTH = 2.0
GRID_BITS = 40


def schwartz_zippel_bound(degree, samples, grid_size=2 ** GRID_BITS):
    """Upper bound on P(nonzero polynomial passes every sample)."""
    per_point = min(1.0, degree / grid_size)
    return per_point ** samples


def default_box(names, constraints=None):
    """``[-2, 2]`` per symbol, narrowed by declared constraints.

    ``constraints`` maps name -> ``("positive",)`` or ``("interval", lo, hi)``.
    Positive symbols get ``[0.1, 2]``.
    """
    constraints = constraints or {}
    box = {}
    for n in names:
        c = constraints.get(n)
        lo, hi = -DEFAULT_HALF_WIDTH, DEFAULT_HALF_WIDTH
        if c is not None:
            if c[0] == "positive":
                lo = 0.1
            elif c[0] == "interval":
                clo, chi = float(c[1]), float(c[2])
                nlo, nhi = max(lo, clo), min(hi, chi)
                if nlo >= nhi:
                    nlo, nhi = clo, chi
                pad = 0.05 * (nhi - nlo)
                lo, hi = nlo + pad, nhi - pad
        box[n] = (lo, hi)
    return box


def is_zero(e, box=None, seed=0, samples=DEFAULT_SAMPLES, tol=DEFAULT_TOL):
    """True iff ``e`` vanishes identically on ``box`` (name -> (lo, hi)).

    Symbols missing from ``box`` are sampled from ``[-2, 2]``.
    """
    return is_zero_rf(canon(e), box, seed, samples, tol)


def is_zero_rf(rf, box=None, seed=0, samples=DEFAULT_SAMPLES, tol=DEFAULT_TOL):
    """:func:`is_zero` for an already canonical rational form."""
    if rf.is_zero:
        return True
    if not rf.has_atoms:
        return False
    num = poly_to_tree(rf.num)
    return _sampled_zero(num, box or {}, seed, samples, tol)


def _sampled_zero(e, box, seed, samples, tol):
    names = sorted(e.free_symbols)
    lo = np.array([box.get(n, (-DEFAULT_HALF_WIDTH, DEFAULT_HALF_WIDTH))[0] for n in names])
    hi = np.array([box.get(n, (-DEFAULT_HALF_WIDTH, DEFAULT_HALF_WIDTH))[1] for n in names])
    rng = np.random.default_rng(seed)
    prog = Program([e], names)
    pts = rng.uniform(lo, hi, size=(samples, len(names)))
    vals, scales, err = prog.run(pts)
    retries = 0
    while err.any():
        bad = np.nonzero(err)[0]
        retries += 1
        if retries > MAX_RETRIES:
            raise SamplingExhausted(
                f"could not find {samples} regular sample points for {e} after {MAX_RETRIES} retries")
        pts[bad] = rng.uniform(lo, hi, size=(len(bad), len(names)))
        v2, s2, e2 = prog.run(pts[bad])
        vals[bad], scales[bad], err[bad] = v2, s2, e2
    return bool(np.all(np.abs(vals[:, 0]) <= tol * (1.0 + scales[:, 0])))
