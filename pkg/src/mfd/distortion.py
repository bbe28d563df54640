"""Partial distortion matrices, cycle condition, extension, groupoid homs.

A distortion assigns a positive scalar to every support edge. The cycle
condition (products around any support cycle agree in both alternating
directions) is equivalent to the existence of a factorization
delta_ij = xi_j / eta_i, to a unique extension to the complete bipartite
graph, and to an extension to a groupoid homomorphism on a+b objects. The
checks below run on fundamental cycles of the cached spanning tree, which
generate the cycle space.
"""

from dataclasses import dataclass
from typing import Optional

from .core import BipartiteGraph, InclusionData
from .errors import (
    CycleViolation,
    ExtensionConditionViolation,
    MissingEntry,
    NotGroupoidHom,
)
from .numbers import DEFAULT_TOLERANCE, close, div, is_exact


@dataclass
class DistortionMatrix:
    a: int
    b: int
    entries: dict  # (i, j) -> value, defined on the parent support
    total: Optional[tuple] = None
    eta: Optional[tuple] = None
    xi: Optional[tuple] = None

    def get(self, i, j):
        if (i, j) in self.entries:
            return self.entries[(i, j)]
        if self.total is not None:
            return self.total[i][j]
        raise MissingEntry((i, j))

    def has(self, i, j):
        return (i, j) in self.entries or self.total is not None

    def rows(self):
        """Nested list view; None where undefined."""
        if self.total is not None:
            return [list(r) for r in self.total]
        return [[self.entries.get((i, j)) for j in range(self.b)]
                for i in range(self.a)]

    @property
    def support(self):
        return sorted(self.entries)


def _graph_of(obj):
    if isinstance(obj, InclusionData):
        return obj.graph
    if isinstance(obj, BipartiteGraph):
        return obj
    raise TypeError(f"expected InclusionData or BipartiteGraph, got {type(obj)!r}")


def as_distortion(data, shape_or_graph=None):
    """Coerce nested lists (None marking absent entries) or dicts.

    When a graph or inclusion is supplied, every support edge must carry a
    positive value; extra defined entries are kept as part of a total matrix
    when no entry is missing anywhere.
    """
    if isinstance(data, DistortionMatrix):
        return data
    graph = _graph_of(shape_or_graph) if shape_or_graph is not None else None
    if isinstance(data, dict):
        if graph is None:
            raise TypeError("dict input needs a graph for its shape")
        entries = dict(data)
        a, b = graph.a, graph.b
        total = None
    else:
        rows = [list(r) for r in data]
        a, b = len(rows), len(rows[0])
        entries = {(i, j): rows[i][j]
                   for i in range(a) for j in range(b) if rows[i][j] is not None}
        total = tuple(tuple(r) for r in rows) if len(entries) == a * b else None
    for pos, v in entries.items():
        if not v > 0:
            raise ValueError(f"distortion entry at {pos} is not positive: {v}")
    if graph is not None:
        if (a, b) != (graph.a, graph.b):
            raise ValueError(f"shape {(a, b)} does not match graph {(graph.a, graph.b)}")
        for e in graph.edges:
            if e not in entries:
                raise MissingEntry(e)
        support_entries = {e: entries[e] for e in graph.edges}
        return DistortionMatrix(a=a, b=b, entries=support_entries, total=total)
    return DistortionMatrix(a=a, b=b, entries=entries, total=total)


@dataclass
class CycleCheck:
    holds: bool
    witness: Optional[tuple] = None
    left: Optional[object] = None
    right: Optional[object] = None

    def __bool__(self):
        return self.holds


def _cycle_products(delta, cycle):
    left = right = 1
    length = len(cycle)
    for t in range(length):
        u = cycle[t]
        w = cycle[(t + 1) % length]
        if u[0] == "row":
            left = left * delta.get(u[1], w[1])
        else:
            right = right * delta.get(w[1], u[1])
    return left, right


def check_cycle_condition(delta, graph, tol=None):
    """Products around every fundamental cycle must agree.

    Float tolerance is scaled by the cycle length to absorb accumulated
    rounding.
    """
    graph = _graph_of(graph)
    delta = as_distortion(delta, graph)
    base = DEFAULT_TOLERANCE if tol is None else tol
    for cycle in graph.fundamental_cycles():
        left, right = _cycle_products(delta, cycle)
        if is_exact(left) and is_exact(right):
            ok = left == right
        else:
            ok = close(left, right, base * len(cycle))
        if not ok:
            return CycleCheck(holds=False, witness=cycle, left=left, right=right)
    return CycleCheck(holds=True)


def factorize(delta, graph, tol=None):
    """Weights (eta, xi) with delta_ij = xi_j / eta_i on every edge, eta_0 = 1.

    Built by tree-path products from the root; non-tree edges are then checked
    and a violating fundamental cycle is reported if they disagree.
    """
    graph = _graph_of(graph)
    delta = as_distortion(delta, graph)
    check = check_cycle_condition(delta, graph, tol)
    if not check:
        raise CycleViolation(check.witness, check.left, check.right)
    eta = [None] * graph.a
    xi = [None] * graph.b
    eta[0] = 1
    for v in graph.bfs_order[1:]:
        p = graph.parent[v]
        if v[0] == "col":
            i, j = p[1], v[1]
            xi[j] = delta.get(i, j) * eta[i]
        else:
            i, j = v[1], p[1]
            eta[i] = div(xi[j], delta.get(i, j))
    return tuple(eta), tuple(xi)


def extend_to_complete(delta, graph, tol=None):
    """Unique total extension xi_j / eta_i agreeing with delta on support."""
    graph = _graph_of(graph)
    delta = as_distortion(delta, graph)
    eta, xi = factorize(delta, graph, tol)
    total = tuple(tuple(div(xi[j], eta[i]) for j in range(graph.b)) for i in range(graph.a))
    entries = {e: delta.get(*e) for e in graph.edges}
    return DistortionMatrix(a=graph.a, b=graph.b, entries=entries, total=total,
                            eta=eta, xi=xi)


@dataclass
class GroupoidHom:
    n: int
    values: tuple
    potential: Optional[tuple] = None


def _total_rows(delta):
    if isinstance(delta, DistortionMatrix):
        if delta.total is None:
            raise MissingEntry("total extension required")
        return [list(r) for r in delta.total]
    rows = [list(r) for r in delta]
    if any(x is None for r in rows for x in r):
        raise MissingEntry("total matrix required")
    return rows


def check_extension_condition(rows, tol=None):
    a, b = len(rows), len(rows[0])
    for i in range(a):
        for i2 in range(i + 1, a):
            for j in range(b):
                for j2 in range(j + 1, b):
                    lhs = rows[i][j] * rows[i2][j2]
                    rhs = rows[i][j2] * rows[i2][j]
                    if is_exact(lhs) and is_exact(rhs):
                        ok = lhs == rhs
                    else:
                        ok = close(lhs, rhs, tol)
                    if not ok:
                        return (i, j, i2, j2)
    return None


def extend_to_groupoid(delta, tol=None):
    """Extend a total distortion to a groupoid hom on a+b objects.

    Objects 0..a-1 are the row summands, a..a+b-1 the column summands; the
    cross blocks are delta and 1/delta, the diagonal blocks the forced ratios.
    """
    rows = _total_rows(delta)
    bad = check_extension_condition(rows, tol)
    if bad is not None:
        raise ExtensionConditionViolation(bad)
    a, b = len(rows), len(rows[0])
    n = a + b
    values = [[None] * n for _ in range(n)]
    for i in range(a):
        for i2 in range(a):
            values[i][i2] = div(rows[i][0], rows[i2][0])
    for j in range(b):
        for j2 in range(b):
            values[a + j][a + j2] = div(rows[0][j2], rows[0][j])
    for i in range(a):
        for j in range(b):
            values[i][a + j] = rows[i][j]
            values[a + j][i] = div(1, rows[i][j])
    values = tuple(tuple(r) for r in values)
    return GroupoidHom(n=n, values=values, potential=values[0])


def square_groupoid_potential(values, tol=None):
    """Potential (lambda_i) with values_ij = lambda_j / lambda_i, lambda_0 = 1."""
    if isinstance(values, GroupoidHom):
        values = values.values
    rows = [list(r) for r in values]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("groupoid hom values must be square")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = rows[i][j] * rows[j][k]
                rhs = rows[i][k]
                if is_exact(lhs) and is_exact(rhs):
                    ok = lhs == rhs
                else:
                    ok = close(lhs, rhs, tol)
                if not ok:
                    raise NotGroupoidHom((i, j, k))
    return tuple(rows[0])


@dataclass
class ExtremalityReport:
    jones_equals_statistical: bool
    cycle_condition_holds: bool
    witness: Optional[tuple] = None

    @property
    def extremal(self):
        return self.jones_equals_statistical and self.cycle_condition_holds


def check_extremality(incl, delta, tol=None):
    """D == Jones matrix entrywise, and the cycle condition on delta."""
    d_eq = all(close(incl.D[i][j], incl.Delta[i][j], tol)
               for i in range(incl.a) for j in range(incl.b))
    check = check_cycle_condition(delta, incl.graph, tol)
    return ExtremalityReport(jones_equals_statistical=d_eq,
                             cycle_condition_holds=check.holds,
                             witness=check.witness)
