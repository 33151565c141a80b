"""Exact decisions on the copositive cone: membership, zeros, irreducibility."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import networkx as nx

from .graphs import complete_bipartition
from .matrix_core import (
    SymMatrix,
    Vector,
    graph_minus_one,
    psd_decision,
    rank,
    solve_unique,
)

MAX_N = 12

# Minimal supports of any Hildebrand matrix (up to permutation); no entries.
HILDEBRAND_SUPPORTS = (
    frozenset({1, 2, 3}),
    frozenset({2, 3, 4}),
    frozenset({3, 4, 5}),
    frozenset({1, 4, 5}),
    frozenset({1, 2, 5}),
)


class DimensionTooLarge(ValueError):
    pass


class NotCopositive(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


def horn_matrix() -> SymMatrix:
    return SymMatrix([
        [1, -1, 1, 1, -1],
        [-1, 1, -1, 1, 1],
        [1, -1, 1, -1, 1],
        [1, 1, -1, 1, -1],
        [-1, 1, 1, -1, 1],
    ])


@dataclass(frozen=True)
class Zero:
    vector: Vector
    support: frozenset
    minimal: bool


@dataclass(frozen=True)
class MinimalZeroMatrix:
    """Columns w_1..w_k, one per minimal support, ordered by sorted support."""

    n: int
    columns: tuple[Vector, ...]

    @property
    def k(self) -> int:
        return len(self.columns)

    @property
    def supports(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(i + 1 for i, x in enumerate(c) if x != 0) for c in self.columns)

    def rows(self) -> list[list[Fraction]]:
        """W as an n x k list of rows."""
        return [[c[i] for c in self.columns] for i in range(self.n)]


@dataclass(frozen=True)
class SimplexMinimum:
    value: Fraction
    faces: tuple[tuple[frozenset, Vector], ...]


def _check_dim(A: SymMatrix):
    if A.n > MAX_N:
        raise DimensionTooLarge(f"n = {A.n} exceeds {MAX_N}")


def _faces(n: int):
    for size in range(1, n + 1):
        for c in combinations(range(1, n + 1), size):
            yield frozenset(c)


def _sort_key(s: frozenset):
    return (len(s), tuple(sorted(s)))


def _embed(n: int, sigma: frozenset, values) -> Vector:
    out = [Fraction(0)] * n
    for i, x in zip(sorted(sigma), values):
        out[i - 1] = x
    return tuple(out)


def _normalize_min_one(v: Vector) -> Vector:
    m = min(x for x in v if x != 0)
    return tuple(x / m for x in v)


def _kkt_point(A: SymMatrix, sigma: frozenset):
    """Unique (u, lam) with A[sigma] u = lam 1, sum u = 1, or None."""
    sub = A.principal(sigma)
    k = sub.n
    rows = [list(sub.rows[i]) + [Fraction(-1)] for i in range(k)]
    rows.append([Fraction(1)] * k + [Fraction(0)])
    sol = solve_unique(rows, [Fraction(0)] * k + [Fraction(1)])
    if sol is None:
        return None
    return sol[:k], sol[k]


def _min_value(A: SymMatrix) -> Fraction:
    # A minimiser of least support is the unique stationary point of its face,
    # so scanning uniquely solvable faces is exhaustive.
    best = None
    for sigma in _faces(A.n):
        kkt = _kkt_point(A, sigma)
        if kkt is None:
            continue
        u, lam = kkt
        if all(x > 0 for x in u) and (best is None or lam < best):
            best = lam
    return best


def _zero_structure(A: SymMatrix):
    """Minimal zeros and zero supports of A, assuming A is copositive.

    A face sigma carries zeros only if A[sigma] is PSD, and then the zeros with
    support inside sigma are exactly the nonnegative null vectors of A[sigma].
    The vertices of that polytope are the minimal zeros inside sigma: faces
    whose PSD block has a one-dimensional, strictly signed nullspace.  sigma is
    a zero support iff those vertex supports cover it.
    """
    n = A.n
    minimal: dict[frozenset, Vector] = {}
    zeros: dict[frozenset, Vector] = {}
    for sigma in _faces(n):
        dec = psd_decision(A.principal(sigma))
        if not dec.psd or not dec.nullspace:
            continue
        if len(dec.nullspace) == 1:
            v = dec.nullspace[0]
            if all(x < 0 for x in v):
                v = tuple(-x for x in v)
            if all(x > 0 for x in v):
                w = _normalize_min_one(_embed(n, sigma, v))
                minimal[sigma] = w
                zeros[sigma] = w
                continue
        inside = [s for s in minimal if s <= sigma]
        if inside and frozenset().union(*inside) == sigma:
            zeros[sigma] = tuple(sum(c) for c in zip(*(minimal[s] for s in inside)))
    return minimal, zeros


def simplex_minimum(A: SymMatrix) -> SimplexMinimum:
    """Exact min of x^T A x over the standard simplex, with every minimizing face.

    The value comes from the stationary points of all faces; the minimizing
    faces are the zero supports of the copositive shift A - value * J, each
    with a witness normalized to sum 1.
    """
    _check_dim(A)
    m = _min_value(A)
    shifted = A - SymMatrix.ones(A.n).scale(m)
    _, zeros = _zero_structure(shifted)
    faces = []
    for sigma in sorted(zeros, key=_sort_key):
        w = zeros[sigma]
        s = sum(w)
        faces.append((sigma, tuple(x / s for x in w)))
    return SimplexMinimum(m, tuple(faces))


def is_copositive(A: SymMatrix) -> bool:
    _check_dim(A)
    return _min_value(A) >= 0


def _require_copositive(A: SymMatrix):
    if not is_copositive(A):
        raise NotCopositive("matrix is not copositive")


def zero_supports(A: SymMatrix) -> set[frozenset]:
    _require_copositive(A)
    return set(_zero_structure(A)[1])


def minimal_zeros(A: SymMatrix) -> MinimalZeroMatrix:
    """Matrix W of minimal zeros, smallest entry of each column scaled to 1."""
    _require_copositive(A)
    minimal, _ = _zero_structure(A)
    cols = [minimal[s] for s in sorted(minimal, key=lambda s: tuple(sorted(s)))]
    return MinimalZeroMatrix(A.n, tuple(cols))


def zeros_report(A: SymMatrix) -> list[Zero]:
    """One witness zero per zero support (minimal ones flagged), canonical order."""
    _require_copositive(A)
    minimal, zeros = _zero_structure(A)
    return [Zero(zeros[s], s, s in minimal) for s in sorted(zeros, key=_sort_key)]


@dataclass(frozen=True)
class Irreducibility:
    n: int
    flags: dict  # (i, j) with 1 <= i <= j <= n -> bool
    witnesses: dict  # (i, j) -> minimal zero or None

    @property
    def n_irreducible(self) -> bool:
        return all(self.flags.values())

    @property
    def n_tilde_irreducible(self) -> bool:
        return all(f for (i, j), f in self.flags.items() if i != j)


def irreducibility(A: SymMatrix) -> Irreducibility:
    """E_ij-irreducibility for all i <= j.

    A is E_ij-irreducible iff some zero u has (Au)_i = (Au)_j = 0 and
    u_i + u_j > 0.  Since Au >= 0 for every zero and zeros are nonnegative
    combinations of minimal zeros, it suffices to scan the minimal zeros.
    """
    _require_copositive(A)
    n = A.n
    minimal, _ = _zero_structure(A)
    cols = [minimal[s] for s in sorted(minimal, key=_sort_key)]
    images = [A.matvec(w) for w in cols]
    flags, wit = {}, {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            found = None
            for w, aw in zip(cols, images):
                if aw[i - 1] == 0 and aw[j - 1] == 0 and w[i - 1] + w[j - 1] > 0:
                    found = w
                    break
            flags[(i, j)] = found is not None
            wit[(i, j)] = found
    return Irreducibility(n, flags, wit)


def _check_unit_pattern(A: SymMatrix):
    if any(x != 1 for x in A.diag()):
        raise PreconditionViolated("diagonal must be all ones")
    if any(A[i, j] < -1 for i in range(A.n) for j in range(A.n)):
        raise PreconditionViolated("entries must be >= -1")
    g = graph_minus_one(A)
    if not g.is_connected():
        raise PreconditionViolated("G_{-1}(A) must be connected")
    return g


def spn_connected_test(A: SymMatrix) -> bool:
    """SPN test for unit diagonal, entries >= -1 and connected G_{-1}(A).

    Such A is SPN iff G_{-1}(A) is bipartite and a_ij >= 1 for every pair at
    even distance in G_{-1}(A).
    """
    g = _check_unit_pattern(A)
    if not nx.is_bipartite(g.to_networkx()):
        return False
    for i in range(1, A.n + 1):
        dist = g.distances_from(i)
        for j in range(i + 1, A.n + 1):
            if dist[j] % 2 == 0 and A[i - 1, j - 1] < 1:
                return False
    return True


def psd_rank1_pm1_test(A: SymMatrix) -> bool:
    """Under the same preconditions, PSD means: +-1 entries, rank 1, G_{-1} complete bipartite."""
    g = _check_unit_pattern(A)
    if any(abs(x) != 1 for r in A.rows for x in r):
        return False
    return rank(A.rows) == 1 and complete_bipartition(g) is not None
