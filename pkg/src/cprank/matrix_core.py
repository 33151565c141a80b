"""Exact rational symmetric matrices.

Index conventions: positional access (``A[i, j]``, vector entries) is 0-based
like any Python sequence, while *index sets* (supports, principal submatrix
selections) are 1-based frozensets, so that ``support((0, 3, 1)) == {2, 3}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .graphs import LabeledGraph

Vector = tuple[Fraction, ...]
IndexSet = frozenset


class NonPositiveDiagonal(ValueError):
    pass


class NotNonnegative(ValueError):
    pass


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions, ``"p/q"`` strings and ``[p, q]`` pairs."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (list, tuple)):
        p, q = x
        return Fraction(int(p), int(q))
    if isinstance(x, float):
        # floats are accepted only when they are exactly representable
        return Fraction(x)
    return Fraction(x)


def vec(xs: Iterable) -> Vector:
    return tuple(to_fraction(x) for x in xs)


def support(v: Sequence) -> IndexSet:
    """1-based support of a vector."""
    return frozenset(i + 1 for i, x in enumerate(v) if x != 0)


def fmt_set(s: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in sorted(s)) + "}"


def fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class SymMatrix:
    """Symmetric matrix with exact rational entries, immutable."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __init__(self, rows):
        rows = tuple(tuple(to_fraction(x) for x in r) for r in rows)
        n = len(rows)
        if n == 0:
            raise ValueError("empty matrix")
        for r in rows:
            if len(r) != n:
                raise ValueError("matrix is not square")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i + 1},{j + 1})")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __repr__(self):
        body = "; ".join(" ".join(fmt_fraction(x) for x in r) for r in self.rows)
        return f"SymMatrix([{body}])"

    # constructors
    @classmethod
    def identity(cls, n: int) -> SymMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def ones(cls, n: int) -> SymMatrix:
        return cls([[1] * n for _ in range(n)])

    @classmethod
    def zeros(cls, n: int) -> SymMatrix:
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def elementary(cls, n: int, i: int, j: int) -> SymMatrix:
        """E_ij with 1-based i, j: ones at (i,j) and (j,i)."""
        rows = [[0] * n for _ in range(n)]
        rows[i - 1][j - 1] = 1
        rows[j - 1][i - 1] = 1
        return cls(rows)

    @classmethod
    def from_upper(cls, n: int, upper: Sequence) -> SymMatrix:
        """Build from the row-major upper triangle (diagonal included)."""
        if len(upper) != n * (n + 1) // 2:
            raise ValueError(f"expected {n * (n + 1) // 2} upper-triangle entries, got {len(upper)}")
        rows = [[Fraction(0)] * n for _ in range(n)]
        it = iter(upper)
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = to_fraction(next(it))
        return cls(rows)

    def upper(self) -> list[Fraction]:
        return [self.rows[i][j] for i in range(self.n) for j in range(i, self.n)]

    # arithmetic
    def __add__(self, other: SymMatrix) -> SymMatrix:
        return SymMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: SymMatrix) -> SymMatrix:
        return SymMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> SymMatrix:
        return SymMatrix([[-a for a in r] for r in self.rows])

    def scale(self, c) -> SymMatrix:
        c = to_fraction(c)
        return SymMatrix([[c * a for a in r] for r in self.rows])

    def congruence(self, d: Sequence) -> SymMatrix:
        """diag(d) A diag(d) for a rational vector d."""
        d = vec(d)
        return SymMatrix([[d[i] * a * d[j] for j, a in enumerate(r)] for i, r in enumerate(self.rows)])

    def permute(self, perm: Sequence[int]) -> SymMatrix:
        """P A P^T where row k of the result is row ``perm[k]`` (0-based) of A."""
        return SymMatrix([[self.rows[p][q] for q in perm] for p in perm])

    def direct_sum(self, other: SymMatrix) -> SymMatrix:
        n, m = self.n, other.n
        rows = [list(r) + [0] * m for r in self.rows]
        rows += [[0] * n + list(r) for r in other.rows]
        return SymMatrix(rows)

    def matvec(self, x: Sequence) -> Vector:
        return tuple(sum((a * b for a, b in zip(r, x)), Fraction(0)) for r in self.rows)

    def quad(self, x: Sequence) -> Fraction:
        return sum((xi * yi for xi, yi in zip(x, self.matvec(x))), Fraction(0))

    def diag(self) -> Vector:
        return tuple(self.rows[i][i] for i in range(self.n))

    def principal(self, alpha: Iterable[int]) -> SymMatrix:
        """A[alpha] for a 1-based index set."""
        idx = sorted(alpha)
        return SymMatrix([[self.rows[i - 1][j - 1] for j in idx] for i in idx])

    def delete(self, alpha: Iterable[int]) -> SymMatrix:
        """A(alpha): the principal submatrix on the complement of alpha."""
        gone = set(alpha)
        return self.principal(i for i in range(1, self.n + 1) if i not in gone)

    def is_nonnegative(self) -> bool:
        return all(a >= 0 for r in self.rows for a in r)

    def tolist(self) -> list[list[float]]:
        return [[float(a) for a in r] for r in self.rows]


def outer_sum(n: int, terms: Iterable[tuple[Sequence, Fraction]]) -> SymMatrix:
    """Sum of weight * v v^T."""
    acc = [[Fraction(0)] * n for _ in range(n)]
    for v, w in terms:
        nz = [(i, x) for i, x in enumerate(v) if x != 0]
        for i, x in nz:
            for j, y in nz:
                acc[i][j] += w * x * y
    return SymMatrix(acc)


# --- exact linear algebra over Q -------------------------------------------

def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[to_fraction(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Basis of {x : M x = 0}, one vector per free column, free entry 1."""
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for an empty system")
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    red, pivots = rref(rows)
    ncols = len(red[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -red[r][f]
        basis.append(tuple(x))
    return basis


def solve_unique(rows: Sequence[Sequence], rhs: Sequence) -> Vector | None:
    """The unique solution of M x = b, or None if there is none or many."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    ncols = len(aug[0]) - 1
    if ncols in pivots or len(pivots) != ncols:
        return None
    return tuple(red[k][ncols] for k in range(ncols))


def det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = [[to_fraction(x) for x in r] for r in rows]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


# --- square roots carried symbolically --------------------------------------

def _squarefree_split(k: int) -> tuple[int, int]:
    """k = s^2 * r with r squarefree; returns (s, r)."""
    s, r = 1, 1
    p = 2
    while p * p <= k:
        while k % (p * p) == 0:
            k //= p * p
            s *= p
        if k % p == 0:
            k //= p
            r *= p
        p += 1
    return s, r * k


@dataclass(frozen=True)
class Surd:
    """The real number ``coef * sqrt(radicand)`` with squarefree integer radicand.

    Products of surds are surds again, which is all diagonal congruence by
    ``1/sqrt(a_ii)`` ever needs.
    """

    coef: Fraction
    radicand: int = 1

    @classmethod
    def sqrt(cls, x, coef=1) -> Surd:
        x, coef = to_fraction(x), to_fraction(coef)
        if x < 0:
            raise ValueError("negative radicand")
        if x == 0 or coef == 0:
            return cls(Fraction(0), 1)
        # sqrt(p/q) = sqrt(p*q) / q
        s, r = _squarefree_split(x.numerator * x.denominator)
        return cls(coef * Fraction(s, x.denominator), r)

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1 or self.coef == 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.coef

    def __mul__(self, other) -> Surd:
        if isinstance(other, Surd):
            return Surd.sqrt(self.radicand * other.radicand, self.coef * other.coef)
        return Surd(self.coef * to_fraction(other), self.radicand)

    __rmul__ = __mul__

    def __float__(self):
        return float(self.coef) * math.sqrt(self.radicand)

    def __str__(self):
        if self.is_rational:
            return fmt_fraction(self.coef)
        c = "" if self.coef == 1 else fmt_fraction(self.coef) + "*"
        return f"{c}sqrt({self.radicand})"


@dataclass(frozen=True)
class SurdMatrix:
    """Symmetric matrix whose entries are surds (not closed under addition)."""

    rows: tuple[tuple[Surd, ...], ...]

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij) -> Surd:
        return self.rows[ij[0]][ij[1]]


def unit_diagonal_scale(A: SymMatrix) -> tuple[tuple[Surd, ...], SymMatrix | SurdMatrix]:
    """Scale A to unit diagonal by D = diag(1/sqrt(a_ii)).

    Returns ``(D, B)`` with ``B = D A D``.  B is a :class:`SymMatrix` when every
    ``a_ii a_jj`` with ``a_ij != 0`` is a rational square, otherwise a
    :class:`SurdMatrix`.
    """
    d = A.diag()
    if any(x <= 0 for x in d):
        raise NonPositiveDiagonal(f"diagonal {[fmt_fraction(x) for x in d]} is not positive")
    D = tuple(Surd.sqrt(1 / x) for x in d)
    entries = tuple(tuple(D[i] * D[j] * A[i, j] for j in range(A.n)) for i in range(A.n))
    if all(e.is_rational for r in entries for e in r):
        return D, SymMatrix([[e.coef for e in r] for r in entries])
    return D, SurdMatrix(entries)


def unscale(D: Sequence[Surd], B: SymMatrix | SurdMatrix) -> SymMatrix:
    """Undo :func:`unit_diagonal_scale`: returns D^{-1} B D^{-1}, which must be rational."""
    inv = [Surd.sqrt(1 / (x.coef * x.coef * x.radicand)) for x in D]
    out = []
    for i in range(B.n):
        row = []
        for j in range(B.n):
            b = B[i, j]
            b = b if isinstance(b, Surd) else Surd(to_fraction(b))
            row.append((inv[i] * inv[j] * b).to_fraction())
        out.append(row)
    return SymMatrix(out)


# --- positive semidefiniteness ---------------------------------------------

@dataclass(frozen=True)
class PsdDecision:
    psd: bool
    nullspace: tuple[Vector, ...] = ()

    def __bool__(self):
        return self.psd


def _schur_psd(m: list[list[Fraction]]) -> bool:
    while m:
        n = len(m)
        diag = [m[i][i] for i in range(n)]
        if any(x < 0 for x in diag):
            return False
        p = max(range(n), key=lambda i: diag[i])
        if diag[p] == 0:
            # all pivots zero: PSD only if the whole block vanishes
            return all(x == 0 for r in m for x in r)
        piv = m[p][p]
        col = [m[i][p] for i in range(n)]
        keep = [i for i in range(n) if i != p]
        m = [[m[i][j] - col[i] * col[j] / piv for j in keep] for i in keep]
    return True


def psd_decision(A: SymMatrix) -> PsdDecision:
    """Decide x^T A x >= 0 for all real x by Schur complementation.

    Each step pivots on the largest diagonal entry; a negative diagonal entry,
    or a zero diagonal with a nonzero remainder, refutes semidefiniteness.
    When A is PSD the exact nullspace basis is attached.
    """
    if not _schur_psd([list(r) for r in A.rows]):
        return PsdDecision(False)
    return PsdDecision(True, tuple(nullspace(A.rows)))


def is_psd(A: SymMatrix) -> bool:
    return psd_decision(A).psd


# --- matrix graphs ----------------------------------------------------------

def graph_of(A: SymMatrix) -> LabeledGraph:
    """G(A): vertices 1..n, edge ij iff a_ij != 0 (i != j)."""
    n = A.n
    return LabeledGraph.build(
        range(1, n + 1),
        [(i + 1, j + 1) for i, j in combinations(range(n), 2) if A[i, j] != 0],
    )


def graph_minus_one(A: SymMatrix) -> LabeledGraph:
    """G_{-1}(A): vertices 1..n, edge ij iff a_ij == -1 exactly."""
    n = A.n
    return LabeledGraph.build(
        range(1, n + 1),
        [(i + 1, j + 1) for i, j in combinations(range(n), 2) if A[i, j] == -1],
    )


# --- diagonal dominance ------------------------------------------------------

def is_diagonally_dominant(A: SymMatrix) -> bool:
    return all(
        abs(A[i, i]) >= sum(abs(A[i, j]) for j in range(A.n) if j != i) for i in range(A.n)
    )


def _component_witness(A: SymMatrix, comp: list[int]) -> list[Fraction] | None:
    """Positive d on one connected component of G(A) with d_i a_ii >= sum_j a_ij d_j.

    With Z = I - P, P = diag(a_ii)^{-1} offdiag(A) irreducible and nonnegative,
    such a d exists iff rho(P) <= 1.  If Z is nonsingular the candidate is
    Z^{-1} 1; if singular it must be the (rational) Perron null vector.
    """
    if len(comp) == 1:
        return [Fraction(1)]
    if any(A[i, i] == 0 for i in comp):
        return None
    Z = [[Fraction(int(i == j)) if i == j else -A[i, j] / A[i, i] for j in comp] for i in comp]
    x = solve_unique(Z, [Fraction(1)] * len(comp))
    if x is not None:
        return list(x) if all(v > 0 for v in x) else None
    ns = nullspace(Z)
    if len(ns) != 1:
        return None
    v = ns[0]
    if all(t < 0 for t in v):
        v = tuple(-t for t in v)
    return list(v) if all(t > 0 for t in v) else None


def dd_orbit_witness(A: SymMatrix) -> Vector | None:
    """Positive rational d with diag(d) A diag(d) diagonally dominant, or None.

    Exact: the cone of admissible d splits along connected components of G(A),
    and on each component the question is a Perron-Frobenius one answered by a
    single rational solve.
    """
    if not A.is_nonnegative():
        raise NotNonnegative("dd_orbit_witness needs an entrywise nonnegative matrix")
    n = A.n
    g = graph_of(A)
    d = [Fraction(0)] * n
    for comp in g.components():
        idx = sorted(v - 1 for v in comp)
        w = _component_witness(A, idx)
        if w is None:
            return None
        # clear denominators for a tidy witness
        lcm = math.lcm(*(x.denominator for x in w))
        g_ = math.gcd(*(int(x * lcm) for x in w))
        for i, x in zip(idx, w):
            d[i] = x * lcm / g_
    d = tuple(d)
    assert is_diagonally_dominant(A.congruence(d))
    return d
