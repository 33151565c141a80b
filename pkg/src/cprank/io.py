"""JSON forms of matrices, graphs, decompositions, support families and certificates.

Rationals are written as ``[numerator, denominator]`` pairs; on input, ints
and ``"p/q"`` strings are accepted as well.  Index sets are 1-based lists.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .case_engine import BoundCertificate
from .cp_decomp import Term, WeightedCpDecomposition
from .graphs import LabeledGraph, parse_dot
from .matrix_core import SymMatrix, to_fraction
from .zero_structure import SupportFamily


class InputError(ValueError):
    pass


def frac_json(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


def matrix_to_json(A: SymMatrix) -> dict:
    return {"n": A.n, "entries": [frac_json(x) for x in A.upper()]}


def matrix_from_json(data: dict) -> SymMatrix:
    try:
        if "rows" in data:
            return SymMatrix([[to_fraction(x) for x in r] for r in data["rows"]])
        n = int(data["n"])
        entries = [to_fraction(x) for x in data["entries"]]
        if len(entries) != n * (n + 1) // 2:
            raise InputError(f"expected {n * (n + 1) // 2} upper-triangle entries, got {len(entries)}")
        return SymMatrix.from_upper(n, entries)
    except (KeyError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"malformed matrix: {exc!r}") from exc


def graph_to_json(g: LabeledGraph) -> dict:
    return g.to_json()


def graph_from_json(data: dict) -> LabeledGraph:
    try:
        return LabeledGraph.from_json(data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed graph: {exc!r}") from exc


def decomposition_to_json(d: WeightedCpDecomposition) -> dict:
    return {
        "n": d.n,
        "terms": [{"vector": [frac_json(x) for x in t.vector], "weight": frac_json(t.weight)} for t in d.terms],
    }


def decomposition_from_json(data: dict) -> WeightedCpDecomposition:
    try:
        terms = tuple(Term(t["vector"], t.get("weight", 1)) for t in data["terms"])
        return WeightedCpDecomposition(int(data["n"]), terms)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed decomposition: {exc!r}") from exc


def family_to_json(f: SupportFamily) -> dict:
    return {"n": f.n, "supports": [sorted(s) for s in f.supports]}


def family_from_json(data: dict) -> SupportFamily:
    try:
        return SupportFamily.of(int(data["n"]), data["supports"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed support family: {exc!r}") from exc


def certificate_to_json(c: BoundCertificate) -> dict:
    return c.to_json()


def certificate_from_json(data: dict) -> BoundCertificate:
    return BoundCertificate.from_json(data)


def read_json(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(str(exc)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: {exc}") from exc


def read_graph(path: str | Path) -> LabeledGraph:
    """A graph from JSON, or from DOT when the file does not parse as JSON."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(str(exc)) from exc
    try:
        return graph_from_json(json.loads(text))
    except json.JSONDecodeError:
        pass
    try:
        return parse_dot(text)
    except ValueError as exc:
        raise InputError(f"{path}: neither JSON nor DOT ({exc})") from exc


def dumps(data) -> str:
    return json.dumps(data, indent=2) + "\n"
