"""Completely positive decompositions, their rewrites, and cp-rank bounds.

A decomposition is stored as weighted terms ``(v, lam)`` meaning
``sum lam * v v^T``; the weight absorbs the square roots that rotations of
pairs of vectors would otherwise introduce, so every rewrite stays rational.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .graphs import LabeledGraph, is_outerplanar, is_wheel_subgraph
from .matrix_core import (
    SymMatrix,
    Vector,
    fmt_set,
    graph_of,
    is_diagonally_dominant,
    outer_sum,
    solve_unique,
    support,
    to_fraction,
    vec,
)


class SupportNotNested(ValueError):
    pass


class NotDD(ValueError):
    pass


class NotTriangleFree(ValueError):
    pass


class NotInCone(ValueError):
    def __init__(self, column: int):
        super().__init__(f"column {column + 1} of B is not a nonnegative combination of the minimal zeros")
        self.column = column


class WitnessNotFound(RuntimeError):
    pass


@dataclass(frozen=True)
class Term:
    vector: Vector
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "vector", vec(self.vector))
        object.__setattr__(self, "weight", to_fraction(self.weight))
        if any(x < 0 for x in self.vector):
            raise ValueError("term vectors must be nonnegative")
        if all(x == 0 for x in self.vector):
            raise ValueError("zero vector in a decomposition")
        if self.weight <= 0:
            raise ValueError("weights must be positive")

    @property
    def support(self) -> frozenset:
        return support(self.vector)


@dataclass(frozen=True)
class WeightedCpDecomposition:
    n: int
    terms: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            if len(t.vector) != self.n:
                raise ValueError("term length does not match n")

    @classmethod
    def of(cls, vectors, weights=None) -> WeightedCpDecomposition:
        vectors = [vec(v) for v in vectors]
        weights = weights or [1] * len(vectors)
        return cls(len(vectors[0]), tuple(Term(v, w) for v, w in zip(vectors, weights)))

    def realize(self) -> SymMatrix:
        return outer_sum(self.n, ((t.vector, t.weight) for t in self.terms))

    def supports(self) -> list[frozenset]:
        return [t.support for t in self.terms]


def pairmove(b: Term, d: Term) -> tuple[Term | None, Term]:
    """Rotate a nested pair so that b loses at least one support index.

    With r = min_{i in supp b} d_i / b_i this returns ``b~ = d - r b`` and
    ``d~ = b + (lam_d/lam_b) r d`` (weights ``lam_d/(1+rho)`` and
    ``lam_b/(1+rho)``, ``rho = r^2 lam_d / lam_b``), which preserves
    ``lam_b bb^T + lam_d dd^T`` exactly.  ``b~`` is None when it vanishes.
    """
    sb, sd = b.support, d.support
    if not sb <= sd:
        raise SupportNotNested(f"supp b = {fmt_set(sb)} is not inside supp d = {fmt_set(sd)}")
    r = min(d.vector[i - 1] / b.vector[i - 1] for i in sb)
    ratio = d.weight / b.weight
    rho = r * r * ratio
    bt = tuple(x - r * y for x, y in zip(d.vector, b.vector))
    dt = tuple(y + ratio * r * x for x, y in zip(d.vector, b.vector))
    new_d = Term(dt, b.weight / (1 + rho))
    if all(x == 0 for x in bt):
        return None, new_d
    return Term(bt, d.weight / (1 + rho)), new_d


def distinct_supports(decomp: WeightedCpDecomposition) -> WeightedCpDecomposition:
    """Rewrite until all term supports differ; never adds terms.

    Each round picks the largest support shared by two terms (ties broken by
    sorted index tuple) and applies :func:`pairmove` to its first two holders.
    """
    terms = list(decomp.terms)
    while True:
        seen: dict[frozenset, list[int]] = {}
        for k, t in enumerate(terms):
            seen.setdefault(t.support, []).append(k)
        shared = [s for s, ks in seen.items() if len(ks) > 1]
        if not shared:
            return WeightedCpDecomposition(decomp.n, tuple(terms))
        s = max(shared, key=lambda s: (len(s), tuple(-i for i in sorted(s))))
        i, j = seen[s][:2]
        bt, dt = pairmove(terms[i], terms[j])
        terms[j] = dt
        if bt is None:
            del terms[i]
        else:
            terms[i] = bt


def dd_decomposition(A: SymMatrix, d) -> WeightedCpDecomposition:
    """Decomposition with supports of size <= 2 from a diagonal-dominance witness d.

    In the scaled matrix S = diag(d) A diag(d) every positive off-diagonal s_ij
    becomes the term (e_i + e_j) with weight s_ij, every positive slack
    s_ii - sum_j s_ij the term e_i; dividing vectors by d undoes the scaling.
    """
    d = vec(d)
    if not A.is_nonnegative():
        raise NotDD("matrix has a negative entry")
    if any(x <= 0 for x in d):
        raise NotDD("witness must be positive")
    S = A.congruence(d)
    if not is_diagonally_dominant(S):
        raise NotDD("diag(d) A diag(d) is not diagonally dominant")
    n = A.n
    terms = []
    for i, j in combinations(range(n), 2):
        if S[i, j] > 0:
            v = [Fraction(0)] * n
            v[i], v[j] = 1 / d[i], 1 / d[j]
            terms.append(Term(v, S[i, j]))
    for i in range(n):
        slack = S[i, i] - sum(S[i, j] for j in range(n) if j != i)
        if slack > 0:
            v = [Fraction(0)] * n
            v[i] = 1 / d[i]
            terms.append(Term(v, slack))
    return WeightedCpDecomposition(n, tuple(terms))


# --- cp-rank values and bounds ------------------------------------------------

def cpr_triangle_free(A: SymMatrix) -> int:
    """cp-rank of a completely positive A whose graph is triangle free: max(n, |E|)."""
    g = graph_of(A)
    if not g.is_triangle_free():
        raise NotTriangleFree("G(A) contains a triangle")
    return max(A.n, g.size)


def cpr_wheel(n: int) -> int:
    if n < 4:
        raise ValueError("wheels need n >= 4")
    return (3 * n - 3) // 2 if n % 2 else (3 * n - 4) // 2


# maximal cp-rank p_m over all m x m completely positive matrices, where known
KNOWN_MAX_CPR = {0: 0, 1: 1, 2: 2, 3: 3, 4: 4, 5: 6}


def max_cpr_bound(m: int) -> tuple[int, bool]:
    """Best available upper bound on p_m and whether it rests on the open p_6 entry."""
    if m in KNOWN_MAX_CPR:
        return KNOWN_MAX_CPR[m], False
    return m * (m + 1) // 2 - 4, m == 6


@dataclass(frozen=True)
class Derivation:
    value: int
    rule: str
    detail: str
    children: tuple = ()
    uses_p6: bool = False

    def lines(self, indent: int = 0) -> list[str]:
        flag = "  [uses p_6]" if self.uses_p6 and self.rule == "vertex-count" else ""
        out = [" " * indent + f"{self.value} <- {self.rule}: {self.detail}{flag}"]
        for c in self.children:
            out.extend(c.lines(indent + 2))
        return out

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "rule": self.rule,
            "detail": self.detail,
            "uses_p6": self.uses_p6,
            "children": [c.to_json() for c in self.children],
        }


MAX_RULE_VERTICES = 8


def _vertex_bound(g: LabeledGraph) -> Derivation:
    val, p6 = max_cpr_bound(g.order)
    return Derivation(val, "vertex-count", f"any graph on {g.order} vertices", (), p6)


@lru_cache(maxsize=4096)
def _derive(g: LabeledGraph) -> Derivation:
    from .zero_structure import tf_exact

    n = g.order
    if n == 0:
        return Derivation(0, "empty", "no vertices")
    cands: list[Derivation] = []
    comps = g.components()
    if len(comps) > 1:
        kids = tuple(_derive(g.induced(c)) for c in comps)
        cands.append(Derivation(
            sum(k.value for k in kids), "direct-sum", f"{len(comps)} components",
            kids, any(k.uses_p6 for k in kids),
        ))
    if g.is_triangle_free():
        cands.append(Derivation(max(n, g.size), "triangle-free", f"max(n={n}, |E|={g.size})"))
    if is_wheel_subgraph(g):
        cands.append(Derivation(cpr_wheel(n), "wheel-subgraph", f"spanning subgraph of W_{n}"))
    if len(comps) == 1 and g.size <= 20 and is_outerplanar(g):
        tf, _ = tf_exact(g)
        if tf >= n:
            cands.append(Derivation(tf, "outerplanar", f"connected outerplanar, tf={tf} >= n={n}"))
    for v in g.vertices:
        deg = g.degree(v)
        if 1 <= deg <= 2:
            rest = _derive(g.remove_vertex(v))
            cands.append(Derivation(
                deg + rest.value, "low-degree", f"delete vertex {_lab(v)} of degree {deg}",
                (rest,), rest.uses_p6,
            ))
    cands.append(_vertex_bound(g))
    return min(cands, key=lambda d: (d.value, d.uses_p6))


def _lab(v) -> str:
    return fmt_set(v) if isinstance(v, frozenset) else str(v)


def derive_cpr_bound(g: LabeledGraph) -> Derivation:
    """Smallest upper bound on cpr(g) obtainable by composing the known rules."""
    if g.order > MAX_RULE_VERTICES:
        raise ValueError(f"rule engine handles at most {MAX_RULE_VERTICES} vertices")
    return _derive(g)


def cpr_bound_rules(g: LabeledGraph) -> int:
    return derive_cpr_bound(g).value


# --- coordinates with respect to minimal zeros -----------------------------------

@dataclass(frozen=True)
class ZeroCoordinates:
    """Nonnegative X (k x m rows) with W X = B."""

    X: tuple[tuple[Fraction, ...], ...]

    def column_supports(self) -> list[frozenset]:
        k = len(self.X)
        m = len(self.X[0]) if k else 0
        return [frozenset(i + 1 for i in range(k) if self.X[i][j] != 0) for j in range(m)]


def _min_support_vertex(W: list[list[Fraction]], b: Vector) -> Vector | None:
    n, k = len(W), len(W[0])
    if all(x == 0 for x in b):
        return tuple(Fraction(0) for _ in range(k))
    for size in range(1, min(k, n) + 1):
        for S in combinations(range(k), size):
            sol = solve_unique([[W[i][j] for j in S] for i in range(n)], b)
            if sol is not None and all(x > 0 for x in sol):
                x = [Fraction(0)] * k
                for j, v in zip(S, sol):
                    x[j] = v
                return tuple(x)
    return None


def factor_through_zeros(B, W) -> ZeroCoordinates:
    """Write each column of B (n x m rows) as a least-support vertex of {x >= 0 : W x = b}."""
    B = [vec(r) for r in B]
    Wr = W.rows()
    m = len(B[0])
    cols = []
    for j in range(m):
        x = _min_support_vertex(Wr, tuple(r[j] for r in B))
        if x is None:
            raise NotInCone(j)
        cols.append(x)
    return ZeroCoordinates(tuple(tuple(c[i] for c in cols) for i in range(W.k)))


# --- the one floating-point routine ---------------------------------------------

def _cayley(S: np.ndarray) -> np.ndarray:
    eye = np.eye(3)
    return np.linalg.solve(eye - S / 2, eye + S / 2)


def _polar(Q: np.ndarray) -> np.ndarray:
    u, _, vt = np.linalg.svd(Q)
    return u @ vt


def _softmin(P: np.ndarray, tau: float) -> float:
    m = P.min()
    return m - tau * np.log(np.exp(-(P - m) / tau).sum())


def nearly_positive_witness(Y, eps: float = 1e-6, seed: int = 0, max_iter: int = 4000) -> np.ndarray:
    """Orthogonal Q with every entry of Y Q^T at least eps, for 3x3 Y >= 0 with Y Y^T > 0.

    Ascends a softened minimum entry over rotations Q <- cayley(h Omega) Q from
    the identity, shrinking the smoothing as it goes; deterministic for a given
    seed (used only for restarts).
    """
    Yf = [vec(r) for r in Y]
    if len(Yf) != 3 or any(len(r) != 3 for r in Yf):
        raise ValueError("Y must be 3x3")
    if any(x < 0 for r in Yf for x in r):
        raise ValueError("Y must be nonnegative")
    if any(sum(a * b for a, b in zip(r, s)) <= 0 for r in Yf for s in Yf):
        raise ValueError("Y Y^T is not entrywise positive")
    Y = np.array([[float(x) for x in r] for r in Yf])
    if Y.min() >= eps:
        return np.eye(3)
    Yn = Y / np.linalg.norm(Y, axis=1)[:, None]
    rng = np.random.default_rng(seed)
    starts = [np.eye(3)] + [_cayley(_skew(rng.normal(scale=0.3, size=3))) for _ in range(5)]
    for Q in starts:
        tau, h = 0.05, 0.2
        for _ in range(max_iter):
            P = Yn @ Q.T
            if (Y @ Q.T).min() >= eps and P.min() > 1e-3:
                break
            w = np.exp(-(P - P.min()) / tau)
            w /= w.sum()
            G = w.T @ Yn
            Om = G @ Q.T - Q @ G.T
            cur = _softmin(P, tau)
            while h > 1e-12:
                cand = _cayley(h * Om) @ Q
                if _softmin(Yn @ cand.T, tau) > cur:
                    Q = cand
                    h *= 1.5
                    break
                h /= 2
            else:
                tau /= 2
                h = 0.2
                if tau < 1e-9:
                    break
        Q = _polar(Q)
        if (Y @ Q.T).min() >= eps and np.abs(Q @ Q.T - np.eye(3)).max() <= 1e-12:
            return Q
    raise WitnessNotFound("no rotation with positive margin found")


def _skew(w) -> np.ndarray:
    a, b, c = w
    return np.array([[0, -c, b], [c, 0, -a], [-b, a, 0]])
