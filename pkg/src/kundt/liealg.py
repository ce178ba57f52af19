"""Left-invariant Lorentzian metrics on Lie algebras, in exact arithmetic.

Vectors are tuples of ``Fraction`` in the chosen basis.  Structure constants
satisfy ``[e_i, e_j] = sum_k c[i][j][k] e_k``.

Two Levi-Civita computations are provided:

* :func:`levi_civita_invariant` for left-invariant fields,
  ``2<nabla_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>``;
* :func:`koszul_killing` for right-invariant (Killing) fields at the identity.
  Their bracket at the identity is minus the algebra bracket, and for Killing
  fields ``2g(nabla_U V, W) = g([U,V],W) + g([V,W],U) - g([W,U],V)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BadParameter, DegenerateMetric, InvalidMetric, NotADerivation, NotLightlike

F0 = Fraction(0)


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


class LieAlgebra:
    """Basis names and exact structure constants."""

    def __init__(self, basis, brackets):
        """``brackets`` maps ``(a, b)`` name pairs to ``{name: coefficient}``."""
        self.basis = tuple(basis)
        if len(set(self.basis)) != len(self.basis):
            raise BadParameter("basis names must be distinct")
        self.dim = n = len(self.basis)
        self.index = {b: i for i, b in enumerate(self.basis)}
        c = [[[F0] * n for _ in range(n)] for _ in range(n)]
        seen = {}
        for (a, b), comb in brackets.items():
            i, j = self.index[a], self.index[b]
            if i == j:
                if any(_frac(v) != 0 for v in comb.values()):
                    raise BadParameter(f"[{a},{a}] must vanish")
                continue
            col = [F0] * n
            for name, coef in comb.items():
                col[self.index[name]] += _frac(coef)
            if (j, i) in seen and seen[(j, i)] != [-x for x in col]:
                raise BadParameter(f"brackets [{a},{b}] and [{b},{a}] are not antisymmetric")
            seen[(i, j)] = col
            c[i][j] = col
            c[j][i] = [-x for x in col]
        self.c = c

    def e(self, name):
        v = [F0] * self.dim
        v[self.index[name]] = Fraction(1)
        return tuple(v)

    def vector(self, comb):
        """Vector from ``{name: coefficient}`` or a basis name."""
        if isinstance(comb, str):
            return self.e(comb)
        v = [F0] * self.dim
        for name, coef in comb.items():
            v[self.index[name]] += _frac(coef)
        return tuple(v)

    def bracket(self, x, y):
        n = self.dim
        out = [F0] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                cij = self.c[i][j]
                f = x[i] * y[j]
                for k in range(n):
                    if cij[k]:
                        out[k] += f * cij[k]
        return tuple(out)

    def ad(self, x):
        """Matrix of ``ad_x`` (columns are images of basis vectors)."""
        cols = [self.bracket(x, self.e(b)) for b in self.basis]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def killing_bracket(self, x, y):
        """Bracket of the right-invariant fields generated by ``x`` and ``y``, at the identity."""
        return tuple(-v for v in self.bracket(x, y))


def check_jacobi(L: LieAlgebra) -> bool:
    n = L.dim
    c = L.c
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    s = F0
                    for m in range(n):
                        s += c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l] + c[k][i][m] * c[m][j][l]
                    if s:
                        return False
    return True


class InvariantMetric:
    """Symmetric nondegenerate Lorentzian scalar product on a Lie algebra."""

    def __init__(self, L: LieAlgebra, matrix):
        n = L.dim
        m = [[_frac(x) for x in row] for row in matrix]
        if len(m) != n or any(len(r) != n for r in m):
            raise InvalidMetric(f"scalar product must be {n}x{n}")
        if any(m[i][j] != m[j][i] for i in range(n) for j in range(n)):
            raise InvalidMetric("scalar product is not symmetric")
        self.L = L
        self.m = m
        self._inv = _inverse(m)
        ev = np.linalg.eigvalsh(np.array(m, dtype=float))
        if int(np.sum(ev < 0)) != 1:
            raise InvalidMetric(f"scalar product is not Lorentzian (eigenvalues {ev.round(6).tolist()})")

    @classmethod
    def from_pairs(cls, L, pairs):
        """From ``{(a, b): value}`` with basis names; unspecified pairs are 0."""
        n = L.dim
        m = [[F0] * n for _ in range(n)]
        for (a, b), val in pairs.items():
            i, j = L.index[a], L.index[b]
            m[i][j] = m[j][i] = _frac(val)
        return cls(L, m)

    def __call__(self, x, y):
        n = len(x)
        s = F0
        for i in range(n):
            if x[i]:
                for j in range(n):
                    if y[j] and self.m[i][j]:
                        s += x[i] * self.m[i][j] * y[j]
        return s

    def raise_index(self, covec):
        n = len(covec)
        return tuple(sum((self._inv[i][j] * covec[j] for j in range(n)), F0) for i in range(n))


def _inverse(m):
    """Exact Gauss-Jordan inverse; raises ``DegenerateMetric`` if singular."""
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise DegenerateMetric("scalar product is degenerate")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def koszul_killing(L: LieAlgebra, m: InvariantMetric, u, v, w) -> Fraction:
    """``g(nabla_U V, W)`` at the identity for the Killing fields generated by ``u, v, w``."""
    kb = L.killing_bracket
    return (m(kb(u, v), w) + m(kb(v, w), u) - m(kb(w, u), v)) / 2


def levi_civita_invariant(L: LieAlgebra, m: InvariantMetric, x, y):
    """``nabla_X Y`` for left-invariant fields, as an algebra vector."""
    br = L.bracket
    xy = br(x, y)
    cov = []
    for b in L.basis:
        z = L.e(b)
        cov.append((m(xy, z) - m(br(y, z), x) + m(br(z, x), y)) / 2)
    return m.raise_index(cov)


def check_derivation(L: LieAlgebra, A) -> bool:
    """``A[x, y] == [Ax, y] + [x, Ay]`` on all basis pairs."""
    n = L.dim
    A = [[_frac(x) for x in row] for row in A]

    def apply(x):
        return tuple(sum((A[i][j] * x[j] for j in range(n)), F0) for i in range(n))

    for a in L.basis:
        for b in L.basis:
            x, y = L.e(a), L.e(b)
            lhs = apply(L.bracket(x, y))
            r1, r2 = L.bracket(apply(x), y), L.bracket(x, apply(y))
            if lhs != tuple(p + q for p, q in zip(r1, r2)):
                return False
    return True


def _nullspace_of_functional(f):
    """Basis of ``{x : sum f_i x_i = 0}`` (exact)."""
    n = len(f)
    p = next((i for i in range(n) if f[i] != 0), None)
    if p is None:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    out = []
    for i in range(n):
        if i == p:
            continue
        v = [F0] * n
        v[i] = Fraction(1)
        v[p] = -f[i] / f[p]
        out.append(tuple(v))
    return out


def _parallel(x, v):
    """Whether ``x`` is a multiple of the nonzero vector ``v``."""
    p = next(i for i in range(len(v)) if v[i] != 0)
    t = x[p] / v[p]
    return all(xi == t * vi for xi, vi in zip(x, v))


@dataclass
class AlgebraicReport:
    lightlike: bool
    subalgebra: bool
    normality: bool
    geodesic: bool
    nabla_v_zero: bool  # identity-certified only
    algebraic_kundt: bool
    brinkmann_type: bool

    def as_dict(self):
        return {"lightlike": self.lightlike, "subalgebra": self.subalgebra,
                "normality": self.normality, "geodesic": self.geodesic,
                "nabla_v_zero_identity_certified": self.nabla_v_zero,
                "algebraic_kundt": self.algebraic_kundt, "brinkmann_type": self.brinkmann_type}


def orthogonal_complement(L, m, V):
    return _nullspace_of_functional([m(V, L.e(b)) for b in L.basis])


def analyze_algebraic(L: LieAlgebra, m: InvariantMetric, V) -> AlgebraicReport:
    """Lightlike, integrable and normal checks for ``V`` and ``V^perp`` at the algebra level."""
    if m(V, V) != 0:
        raise NotLightlike(f"<V,V> = {m(V, V)}")
    if not any(V):
        raise NotLightlike("V is zero")
    perp = orthogonal_complement(L, m, V)
    sub = all(m(L.bracket(a, b), V) == 0 for a in perp for b in perp)
    normal = all(_parallel(L.bracket(V, w), V) for w in perp)
    basis = [L.e(b) for b in L.basis]
    geodesic = all(koszul_killing(L, m, V, V, w) == 0 for w in basis)
    nabla_zero = all(koszul_killing(L, m, u, V, w) == 0 for u in basis for w in basis)
    kundt = sub and normal
    return AlgebraicReport(True, sub, normal, geodesic, nabla_zero, kundt, kundt and nabla_zero)


def _expm(M):
    """Matrix exponential by its power series, to machine precision."""
    n = M.shape[0]
    out = np.eye(n)
    term = np.eye(n)
    for k in range(1, 80):
        term = term @ M / k
        out = out + term
        if np.max(np.abs(term)) < 1e-18 * max(1.0, np.max(np.abs(out))):
            break
    return out


def sample_group_check(L: LieAlgebra, m: InvariantMetric, V, samples=50, seed=0, tol=1e-9) -> bool:
    """Re-check lightlikeness and normality of ``Ad(exp a)^-1 V`` at random ``a``.

    ``Ad(exp a) = exp(ad_a)``; the complement ``V^perp`` is transported by the
    same automorphism.
    """
    rng = np.random.default_rng(seed)
    n = L.dim
    C = np.array([[[float(x) for x in row] for row in mat] for mat in L.c])  # C[i][j][k]
    G = np.array(m.m, dtype=float)
    v = np.array([float(x) for x in V])
    perp = np.array([[float(x) for x in w] for w in orthogonal_complement(L, m, V)])

    def br(x, y):
        return np.einsum("i,j,ijk->k", x, y, C)

    for _ in range(samples):
        a = rng.uniform(-1.0, 1.0, n)
        ad = np.einsum("i,ijk->kj", a, C)
        Ainv = _expm(-ad)
        w = Ainv @ v
        scale = 1.0 + float(np.abs(w) @ np.abs(G) @ np.abs(w))
        if abs(w @ G @ w) > tol * scale:
            return False
        for p in perp:
            q = br(w, Ainv @ p)
            rest = q - (q @ w) / (w @ w) * w
            if np.max(np.abs(rest)) > tol * (1.0 + np.max(np.abs(q))):
                return False
    return True


# --- fixtures --------------------------------------------------------------

@dataclass
class AlgebraFixture:
    name: str
    L: LieAlgebra
    m: InvariantMetric
    V: tuple
    derivation: list | None = None


def heis3():
    L = LieAlgebra("XYZ", {("X", "Y"): {"Z": 1}})
    m = InvariantMetric.from_pairs(L, {("X", "X"): 1, ("Y", "Z"): 1})
    return AlgebraFixture("heis3", L, m, L.e("Z"))


def heis3_plus_r():
    L = LieAlgebra("XYZW", {("X", "Y"): {"Z": 1}})
    m = InvariantMetric.from_pairs(L, {("X", "X"): 1, ("Y", "Y"): 1, ("Z", "W"): 1})
    return AlgebraFixture("heis3_plus_r", L, m, L.e("Z"))


def oscillator():
    L = LieAlgebra("TXYZ", {("X", "Y"): {"Z": 1}, ("T", "X"): {"Y": 1}, ("T", "Y"): {"X": -1}})
    m = InvariantMetric.from_pairs(L, {("T", "Z"): 1, ("X", "X"): 1, ("Y", "Y"): 1})
    return AlgebraFixture("oscillator", L, m, L.e("Z"))


DEFAULT_DERIVATION = ((1, 0, 0), (0, 0, 0), (0, 0, 1))


def r_ltimes_heis(A=DEFAULT_DERIVATION):
    """``R x| heis3`` with ``[T, w] = A w``; ``A`` acts on ``(X, Y, Z)`` and must be a derivation."""
    h = LieAlgebra("XYZ", {("X", "Y"): {"Z": 1}})
    A = [[_frac(x) for x in row] for row in A]
    if len(A) != 3 or any(len(r) != 3 for r in A):
        raise BadParameter("derivation must be a 3x3 matrix")
    if not check_derivation(h, A):
        raise NotADerivation("A[x,y] != [Ax,y] + [x,Ay] on heis3")
    br = {("X", "Y"): {"Z": 1}}
    for j, w in enumerate("XYZ"):
        col = {b: A[i][j] for i, b in enumerate("XYZ") if A[i][j]}
        if col:
            br[("T", w)] = col
    L = LieAlgebra("TXYZ", br)
    m = InvariantMetric.from_pairs(L, {("X", "X"): 1, ("Y", "Y"): 1, ("T", "Z"): 1})
    return AlgebraFixture("r_ltimes_heis", L, m, L.e("Z"), [list(r) for r in A])


def sl2_det():
    """``sl(2)`` with ``A = aH + bE + cF`` and ``<A, A> = -det A = a^2 + bc``."""
    L = LieAlgebra("HEF", {("H", "E"): {"E": 2}, ("H", "F"): {"F": -2}, ("E", "F"): {"H": 1}})
    m = InvariantMetric.from_pairs(L, {("H", "H"): 1, ("E", "F"): Fraction(1, 2)})
    return AlgebraFixture("sl2_det", L, m, L.e("F"))
