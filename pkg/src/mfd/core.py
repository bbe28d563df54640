"""Data model and spectral engine.

An inclusion is encoded by its statistical dimension matrix D and optional
Jones dimension matrix (defaulting to D) over a connected bipartite support
graph: rows are the central summands of the small algebra, columns those of
the big one. Frobenius-Perron data follows the row-vector convention
alpha D = d beta, beta D^T = d alpha with unit 2-norm vectors.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    DisconnectedSupport,
    NegativeEntry,
    NonConvergence,
    SupportMismatch,
)
from .numbers import close, is_exact


class BipartiteGraph:
    """Support graph with vertices ("row", i) and ("col", j).

    Caches connected components and, when connected, a BFS spanning tree
    rooted at ("row", 0) with parent pointers for path reconstruction.
    """

    def __init__(self, a, b, edges):
        self.a = a
        self.b = b
        self.edges = tuple(sorted(edges))
        adj = {("row", i): [] for i in range(a)}
        adj.update({("col", j): [] for j in range(b)})
        for i, j in self.edges:
            adj[("row", i)].append(("col", j))
            adj[("col", j)].append(("row", i))
        self._adj = adj
        self.components = self._components()
        self.is_connected = len(self.components) == 1
        self.parent = {}
        self.tree_edges = ()
        if self.is_connected and a > 0:
            self._build_tree()

    def _components(self):
        seen = set()
        comps = []
        for start in self._adj:
            if start in seen:
                continue
            queue = [start]
            seen.add(start)
            rows, cols = set(), set()
            while queue:
                v = queue.pop()
                (rows if v[0] == "row" else cols).add(v[1])
                for w in self._adj[v]:
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
            comps.append((frozenset(rows), frozenset(cols)))
        return comps

    def _build_tree(self):
        root = ("row", 0)
        self.parent = {root: None}
        order = [root]
        head = 0
        tree = []
        while head < len(order):
            v = order[head]
            head += 1
            for w in self._adj[v]:
                if w not in self.parent:
                    self.parent[w] = v
                    edge = (v[1], w[1]) if v[0] == "row" else (w[1], v[1])
                    tree.append(edge)
                    order.append(w)
        self.bfs_order = tuple(order)
        self.tree_edges = tuple(tree)

    def tree_path(self, u, v):
        """Vertex path from u to v inside the spanning tree."""
        def to_root(x):
            path = [x]
            while self.parent[x] is not None:
                x = self.parent[x]
                path.append(x)
            return path

        pu, pv = to_root(u), to_root(v)
        set_u = {x: k for k, x in enumerate(pu)}
        meet = next(x for x in pv if x in set_u)
        down = pv[: pv.index(meet)]
        return pu[: set_u[meet] + 1] + list(reversed(down))

    def fundamental_cycles(self):
        """One vertex cycle per non-tree edge; empty list on a tree support."""
        tree = set(self.tree_edges)
        cycles = []
        for i, j in self.edges:
            if (i, j) in tree:
                continue
            path = self.tree_path(("col", j), ("row", i))
            cycles.append(tuple(path))
        return cycles


@dataclass(frozen=True)
class InclusionData:
    a: int
    b: int
    D: tuple
    Delta: tuple
    graph: BipartiteGraph = field(compare=False)

    @property
    def support(self):
        return self.graph.edges

    def d_at(self, i, j):
        return self.D[i][j]

    def jones_at(self, i, j):
        return self.Delta[i][j]


@dataclass(frozen=True)
class PerronData:
    d: float
    alpha: tuple
    beta: tuple

    @property
    def d_squared(self):
        return self.d * self.d


def _coerce_matrix(raw, name):
    if raw is None:
        raise ValueError(f"{name} is missing")
    rows = [list(r) for r in raw]
    if not rows or not rows[0]:
        raise ValueError(f"{name} is empty")
    width = len(rows[0])
    out = []
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"{name} is ragged at row {i}")
        coerced = []
        for j, x in enumerate(row):
            if not isinstance(x, (int, float, Fraction)) or isinstance(x, bool):
                raise ValueError(f"{name}[{i}][{j}] is not a number: {x!r}")
            if x < 0:
                raise NegativeEntry((i, j), x)
            coerced.append(x)
        out.append(tuple(coerced))
    return tuple(out)


def validate_inclusion(D, Delta=None):
    """Validate raw matrices into InclusionData.

    Checks shape, nonnegativity, the shared zero pattern of D and the Jones
    matrix, and connectivity of the bipartite support graph.
    """
    Dm = _coerce_matrix(D, "D")
    a, b = len(Dm), len(Dm[0])
    if Delta is None:
        Jm = Dm
    else:
        Jm = _coerce_matrix(Delta, "Delta")
        if (len(Jm), len(Jm[0])) != (a, b):
            raise ValueError("D and Delta have different shapes")
        for i in range(a):
            for j in range(b):
                if (Dm[i][j] == 0) != (Jm[i][j] == 0):
                    raise SupportMismatch((i, j))
    edges = [(i, j) for i in range(a) for j in range(b) if Dm[i][j] != 0]
    graph = BipartiteGraph(a, b, edges)
    if not graph.is_connected:
        raise DisconnectedSupport(graph.components)
    return InclusionData(a=a, b=b, D=Dm, Delta=Jm, graph=graph)


def _fp_eigen(M, max_iter, tol=1e-15):
    """Largest eigenpair of a symmetric nonnegative irreducible matrix.

    Power iteration from the all-ones vector (deterministic), then one inverse
    iteration at the Rayleigh quotient to polish. M is PSD with positive
    diagonal here, so the top eigenvalue is simple and the iteration is safe.
    """
    n = M.shape[0]
    v = np.ones(n) / np.sqrt(n)
    lam = float(v @ M @ v)
    for _ in range(max_iter):
        w = M @ v
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            raise NonConvergence(max_iter)
        w /= norm
        lam_new = float(w @ M @ w)
        done = abs(lam_new - lam) <= tol * max(abs(lam_new), 1.0) and \
            float(np.max(np.abs(w - v))) <= 1e-13
        v, lam = w, lam_new
        if done:
            break
    else:
        raise NonConvergence(max_iter, residual=float(np.max(np.abs(M @ v - lam * v))))
    try:
        w = np.linalg.solve(M - (lam + 1e-14) * np.eye(n), v)
        w = np.abs(w)
        norm = float(np.linalg.norm(w))
        if norm > 0 and np.all(w > 0):
            w /= norm
            lam_ref = float(w @ M @ w)
            if float(np.max(np.abs(M @ w - lam_ref * w))) <= \
                    float(np.max(np.abs(M @ v - lam * v))):
                v, lam = w, lam_ref
    except np.linalg.LinAlgError:
        pass
    return lam, np.abs(v)


def perron_data(incl, max_iter=10**5):
    """Frobenius-Perron data: d and unit row vectors with alpha D = d beta."""
    Df = np.array([[float(x) for x in row] for row in incl.D])
    M = Df.T @ Df
    lam, beta = _fp_eigen(M, max_iter)
    d = float(np.sqrt(lam))
    alpha = Df @ beta / d
    alpha = np.abs(alpha) / float(np.linalg.norm(alpha))
    return PerronData(d=d, alpha=tuple(float(x) for x in alpha),
                      beta=tuple(float(x) for x in beta))


def standard_distortion(perron):
    """sigma_ij = d beta_j / alpha_i, defined for every (i, j)."""
    return [[perron.d * bj / ai for bj in perron.beta] for ai in perron.alpha]


def dual_functor_hom(perron):
    """pi_ij = alpha_i^2 / beta_j^2."""
    return [[(ai * ai) / (bj * bj) for bj in perron.beta] for ai in perron.alpha]


def scalars_exact(matrix):
    return all(is_exact(x) for row in matrix for x in row)


def matrices_close(A, B, tol=None):
    if len(A) != len(B):
        return False
    for ra, rb in zip(A, B):
        if len(ra) != len(rb):
            return False
        if not all(close(x, y, tol) for x, y in zip(ra, rb)):
            return False
    return True
