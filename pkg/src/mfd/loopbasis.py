"""Loop model of a finite-dimensional inclusion N0 in N1.

A two-layer Bratteli diagram with a base point: m0(i) edges from the
base point to bottom vertex i, Lambda_ij edges from i to top vertex j.
Loops based at the base point of length 2 span N0 and loops of length 4
span N1, with matrix-unit structure constants.  This gives exact
arithmetic for the traces, the conditional expectation onto N0, an
explicit Pimsner-Popa basis, the central transfer matrix, and the
density sequence of the tower, plus small helpers for commuting-square
nondegeneracy and relative commutants of concrete matrix algebras.

The diagonal dimension matrix diag(m0) is called DimDiag here; the name
Delta is reserved for Jones matrices elsewhere in the package.
"""

import math
from dataclasses import dataclass, field

from .errors import (InconsistentDimensions, InconsistentTraces,
                     NegativeEntry, NotCentral, WrongAlgebraTag)
from .linear import mat_mul, mat_vec, nullspace, transpose, vec_mat
from .markov import finite_dim_markov
from .numbers import close, div, is_exact, to_float

PP_TOLERANCE = 1e-10


def _conj(x):
    return x.conjugate() if hasattr(x, "conjugate") else x


@dataclass(frozen=True)
class LoopAlgebraPair:
    """Loop presentations of N0 and N1 with their Markov trace data."""

    m0: tuple
    Lambda: tuple
    m1: tuple
    eta_edges: tuple  # ("eta", i, t): edge number t from the base point to i
    eps_edges: tuple  # ("eps", i, j, t): edge number t from i to j
    lambda0: tuple
    lambda1: tuple
    d: float
    d_squared: float
    n0_loops: tuple  # (eta, eta') with equal targets
    n1_loops: tuple  # (eta, eps, eps', eta') forming a closed loop

    @property
    def k0(self):
        return len(self.m0)

    @property
    def k1(self):
        return len(self.Lambda[0])

    @property
    def dim_diag(self):
        return tuple(tuple(self.m0[i] if i == k else 0 for k in range(self.k0))
                     for i in range(self.k0))

    def zero(self, algebra):
        return LoopElement(pair=self, algebra=algebra, coeffs={})

    def loop(self, algebra, key, coeff=1):
        return LoopElement(pair=self, algebra=algebra, coeffs={key: coeff})

    def identity(self, algebra):
        if algebra == "N0":
            coeffs = {(e, e): 1 for e in self.eta_edges}
        else:
            coeffs = {(e, f, f, e): 1 for e in self.eta_edges
                      for f in self.eps_edges if f[1] == e[1]}
        return LoopElement(pair=self, algebra=algebra, coeffs=coeffs)

    def central_projection(self, i):
        coeffs = {(e, e): 1 for e in self.eta_edges if e[1] == i}
        return LoopElement(pair=self, algebra="N0", coeffs=coeffs)


def build_loop_algebra(m0, Lambda):
    """Enumerate edges and loops and attach the Markov trace data."""
    m0 = tuple(int(x) for x in m0)
    for i, v in enumerate(m0):
        if v <= 0:
            raise NegativeEntry(("m0", i), v)
    fdm = finite_dim_markov(Lambda, m0)  # raises Disconnected
    Lam = tuple(tuple(int(x) for x in row) for row in Lambda)
    k0 = len(m0)
    k1 = len(Lam[0])
    m1 = tuple(fdm.m_B)
    eta_edges = tuple(("eta", i, t) for i in range(k0) for t in range(m0[i]))
    eps_edges = tuple(("eps", i, j, t) for i in range(k0) for j in range(k1)
                      for t in range(Lam[i][j]))
    n0_loops = tuple((e, f) for e in eta_edges for f in eta_edges if e[1] == f[1])
    paths = [(e, f) for e in eta_edges for f in eps_edges if f[1] == e[1]]
    n1_loops = tuple((p[0], p[1], q[1], q[0]) for p in paths for q in paths
                     if p[1][2] == q[1][2])
    return LoopAlgebraPair(m0=m0, Lambda=Lam, m1=m1, eta_edges=eta_edges,
                           eps_edges=eps_edges,
                           lambda0=tuple(fdm.lambda_A), lambda1=tuple(fdm.lambda_B),
                           d=math.sqrt(float(fdm.d_squared)),
                           d_squared=float(fdm.d_squared),
                           n0_loops=n0_loops, n1_loops=n1_loops)


@dataclass
class LoopElement:
    """Sparse linear combination of loops in N0 or N1."""

    pair: LoopAlgebraPair
    algebra: str  # "N0" | "N1"
    coeffs: dict = field(default_factory=dict)

    def _require(self, other):
        if self.algebra != other.algebra:
            raise WrongAlgebraTag(self.algebra, other.algebra)

    def __add__(self, other):
        self._require(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            w = out.get(k, 0) + v
            if w == 0:
                out.pop(k, None)
            else:
                out[k] = w
        return LoopElement(pair=self.pair, algebra=self.algebra, coeffs=out)

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, scalar):
        if isinstance(scalar, LoopElement):
            raise TypeError("use * with the left factor first")
        if scalar == 0:
            return self.pair.zero(self.algebra)
        return LoopElement(pair=self.pair, algebra=self.algebra,
                           coeffs={k: scalar * v for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, LoopElement):
            return other * self
        self._require(other)
        out = {}
        if self.algebra == "N0":
            for (a1, a2), u in self.coeffs.items():
                for (b1, b2), v in other.coeffs.items():
                    if a2 == b1:
                        key = (a1, b2)
                        w = out.get(key, 0) + u * v
                        if w == 0:
                            out.pop(key, None)
                        else:
                            out[key] = w
        else:
            for (h1, e1, e2, h2), u in self.coeffs.items():
                for (g1, f1, f2, g2), v in other.coeffs.items():
                    if h2 == g1 and e2 == f1:
                        key = (h1, e1, f2, g2)
                        w = out.get(key, 0) + u * v
                        if w == 0:
                            out.pop(key, None)
                        else:
                            out[key] = w
        return LoopElement(pair=self.pair, algebra=self.algebra, coeffs=out)

    def adjoint(self):
        out = {}
        if self.algebra == "N0":
            for (a1, a2), v in self.coeffs.items():
                out[(a2, a1)] = _conj(v)
        else:
            for (h1, e1, e2, h2), v in self.coeffs.items():
                out[(h2, e2, e1, h1)] = _conj(v)
        return LoopElement(pair=self.pair, algebra=self.algebra, coeffs=out)

    def trace(self):
        s = 0
        if self.algebra == "N0":
            for (a1, a2), v in self.coeffs.items():
                if a1 == a2:
                    s = s + v * self.pair.lambda0[a1[1]]
        else:
            for (h1, e1, e2, h2), v in self.coeffs.items():
                if h1 == h2 and e1 == e2:
                    s = s + v * self.pair.lambda1[e1[2]]
        return s

    def sup_coeff(self):
        return max((abs(to_float(v)) for v in self.coeffs.values()), default=0.0)


def include_in_N1(x: LoopElement, pair: LoopAlgebraPair = None):
    """Unital inclusion N0 -> N1: split each loop along all top edges."""
    pair = pair or x.pair
    if x.algebra != "N0":
        raise WrongAlgebraTag("N0", x.algebra)
    out = pair.zero("N1")
    coeffs = out.coeffs
    for (a1, a2), v in x.coeffs.items():
        for f in pair.eps_edges:
            if f[1] == a1[1]:
                key = (a1, f, f, a2)
                coeffs[key] = coeffs.get(key, 0) + v
    return out


def cond_expectation_N0(x: LoopElement, pair: LoopAlgebraPair = None):
    """Trace-preserving conditional expectation N1 -> N0.

    Sends [eta1 eps1 eps2* eta2*] to 0 unless eps1 = eps2, and then to
    (lambda1(t(eps)) / lambda0(s(eps))) [eta1 eta2*].
    """
    pair = pair or x.pair
    if x.algebra != "N1":
        raise WrongAlgebraTag("N1", x.algebra)
    out = pair.zero("N0")
    coeffs = out.coeffs
    for (h1, e1, e2, h2), v in x.coeffs.items():
        if e1 == e2:
            w = v * pair.lambda1[e1[2]] / pair.lambda0[e1[1]]
            key = (h1, h2)
            coeffs[key] = coeffs.get(key, 0) + w
    return out


def pimsner_popa_basis(pair: LoopAlgebraPair):
    """Explicit Pimsner-Popa basis of N1 over N0.

    B1 has one element per ordered pair of parallel top edges, summed
    over all bottom edges into their common source; B2 has one element
    per loop whose two halves pass through different bottom vertices.
    Coefficients are sqrt(lambda0(s) / lambda1(t)) for B1 and
    sqrt(lambda0(s(eps2)) / (m0(s(eps2)) lambda1(t))) for B2; with
    these the Watatani sum is d^2 exactly.
    """
    basis = []
    for e1 in pair.eps_edges:
        for e2 in pair.eps_edges:
            if e1[1] == e2[1] and e1[2] == e2[2]:
                i, j = e1[1], e1[2]
                c = math.sqrt(pair.lambda0[i] / pair.lambda1[j])
                coeffs = {(h, e1, e2, h): c for h in pair.eta_edges if h[1] == i}
                basis.append(LoopElement(pair=pair, algebra="N1", coeffs=coeffs))
    for e1 in pair.eps_edges:
        for e2 in pair.eps_edges:
            if e1[2] == e2[2] and e1[1] != e2[1]:
                i2, j = e2[1], e2[2]
                c = math.sqrt(pair.lambda0[i2] / (pair.m0[i2] * pair.lambda1[j]))
                for h1 in pair.eta_edges:
                    if h1[1] != e1[1]:
                        continue
                    for h2 in pair.eta_edges:
                        if h2[1] != i2:
                            continue
                        basis.append(LoopElement(pair=pair, algebra="N1",
                                                 coeffs={(h1, e1, e2, h2): c}))
    return basis


def verify_pp_identity(pair: LoopAlgebraPair, basis):
    """Check the Pimsner-Popa identity and the Watatani index sum.

    Returns a report with the maximal deviations of
    sum_b b i(E(b* x)) - x over all N1 loops x, and of
    sum_b b b* - d^2 1.
    """
    watatani = pair.zero("N1")
    for b in basis:
        watatani = watatani + b * b.adjoint()
    diff = watatani - pair.d_squared * pair.identity("N1")
    watatani_dev = diff.sup_coeff()

    pp_dev = 0.0
    for key in pair.n1_loops:
        x = pair.loop("N1", key)
        rebuilt = pair.zero("N1")
        for b in basis:
            rebuilt = rebuilt + b * include_in_N1(cond_expectation_N0(b.adjoint() * x, pair), pair)
        pp_dev = max(pp_dev, (rebuilt - x).sup_coeff())

    return {
        "basis_size": len(basis),
        "d_squared": pair.d_squared,
        "watatani_deviation": watatani_dev,
        "pp_deviation": pp_dev,
        "tolerance": PP_TOLERANCE,
        "watatani_ok": watatani_dev <= PP_TOLERANCE,
        "pp_ok": pp_dev <= PP_TOLERANCE,
    }


def _central_vector(pair: LoopAlgebraPair, x: LoopElement, tol=None):
    if x.algebra != "N0":
        raise WrongAlgebraTag("N0", x.algebra)
    for (a1, a2), v in x.coeffs.items():
        if a1 != a2 and not close(v, 0, tol):
            raise NotCentral(f"off-diagonal loop ({a1}, {a2}) has coefficient {v}")
    out = []
    for i in range(pair.k0):
        vals = [x.coeffs.get((e, e), 0) for e in pair.eta_edges if e[1] == i]
        for v in vals[1:]:
            if not close(v, vals[0], tol):
                raise NotCentral(f"unequal coefficients on block {i}")
        out.append(vals[0])
    return tuple(out)


def _central_element(pair: LoopAlgebraPair, vec):
    out = pair.zero("N0")
    for i, v in enumerate(vec):
        if v != 0:
            out = out + v * pair.central_projection(i)
    return out


def transfer_matrix(pair: LoopAlgebraPair):
    """DimDiag^{-1} Lambda Lambda^T DimDiag as exact entries."""
    LLt = mat_mul(pair.Lambda, transpose(pair.Lambda))
    k = pair.k0
    return tuple(tuple(div(LLt[i][h] * pair.m0[h], pair.m0[i]) for h in range(k))
                 for i in range(k))


def central_transfer(pair: LoopAlgebraPair, basis, x):
    """sum_b E(b* x b) on a central element, as a vector on the blocks.

    Computed both through loop arithmetic and through the closed form
    DimDiag^{-1} Lambda Lambda^T DimDiag; the two must agree.  x may be
    a central LoopElement or a coefficient vector on the minimal
    central projections.
    """
    if isinstance(x, LoopElement):
        vec = _central_vector(pair, x)
    else:
        vec = tuple(x)
        if len(vec) != pair.k0:
            raise InconsistentDimensions(pair.k0, len(vec))
    closed = mat_vec(transfer_matrix(pair), vec)

    elem = include_in_N1(_central_element(pair, vec), pair)
    total = pair.zero("N0")
    for b in basis:
        total = total + cond_expectation_N0(b.adjoint() * elem * b, pair)
    via_loops = _central_vector(pair, total, tol=1e-8)
    for i in range(pair.k0):
        if abs(to_float(via_loops[i]) - to_float(closed[i])) > 1e-9 * max(1.0, abs(to_float(closed[i]))):
            raise RuntimeError(
                f"transfer mismatch on block {i}: loops {via_loops[i]} vs closed {closed[i]}")
    return tuple(closed)


@dataclass
class DensitySequence:
    levels: list  # vectors h_0 .. h_n on the central blocks
    h_inf: tuple
    recursion_deviation: float


def density_sequence(pair: LoopAlgebraPair, n, basis=None):
    """Densities of the iterated tower traces against tr0.

    h_0 is the all-ones vector and h_m = d^{-2} T h_{m-1} with T the
    central transfer matrix; the same sequence is recomputed through
    the Pimsner-Popa recursion h_m = d^{-2} sum_b E(b* h_{m-1} b) and
    the limit h_inf is DimDiag^{-1} lambda0 normalized to trace one.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if basis is None:
        basis = pimsner_popa_basis(pair)
    T = transfer_matrix(pair)
    d2 = pair.d_squared
    levels = [tuple(1.0 for _ in range(pair.k0))]
    while len(levels) <= n:
        prev = levels[-1]
        levels.append(tuple(to_float(x) / d2 for x in mat_vec(T, prev)))

    deviation = 0.0
    h_loop = tuple(1.0 for _ in range(pair.k0))
    for m in range(1, n + 1):
        elem = include_in_N1(_central_element(pair, h_loop), pair)
        total = pair.zero("N0")
        for b in basis:
            total = total + cond_expectation_N0(b.adjoint() * elem * b, pair)
        h_loop = tuple(to_float(v) / d2 for v in _central_vector(pair, total, tol=1e-8))
        deviation = max(deviation,
                        max(abs(h_loop[i] - levels[m][i]) for i in range(pair.k0)))

    norm = sum(l * l for l in pair.lambda0)
    h_inf = tuple(pair.lambda0[i] / (pair.m0[i] * norm) for i in range(pair.k0))
    return DensitySequence(levels=levels, h_inf=h_inf, recursion_deviation=deviation)


def trace_of_central(pair: LoopAlgebraPair, vec):
    """tr0 of sum_i vec_i p_i."""
    return sum(to_float(vec[i]) * pair.m0[i] * pair.lambda0[i] for i in range(pair.k0))


# ---------------------------------------------------------------------------
# Concrete matrix algebras and relative commutants.

@dataclass
class MatrixAlgebraPresentation:
    n: int
    generators: list
    unit: tuple


def _mat_adjoint(m):
    return tuple(tuple(_conj(m[j][i]) for j in range(len(m))) for i in range(len(m[0])))


def matrix_algebra(n, generators, unit=None):
    """Package generators of a *-subalgebra of the n x n matrices.

    Adjoints of the generators are appended when missing; the unit
    defaults to the identity matrix.
    """
    gens = [tuple(tuple(row) for row in g) for g in generators]
    for g in gens:
        if len(g) != n or any(len(row) != n for row in g):
            raise InconsistentDimensions(n, (len(g), len(g[0]) if g else 0))
    out = list(gens)
    for g in gens:
        ga = _mat_adjoint(g)
        if ga not in out:
            out.append(ga)
    if unit is None:
        unit = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    else:
        unit = tuple(tuple(row) for row in unit)
    return MatrixAlgebraPresentation(n=n, generators=out, unit=unit)


def _vec(m, n):
    return [m[i][j] for i in range(n) for j in range(n)]


def _unvec(v, n):
    return tuple(tuple(v[i * n + j] for j in range(n)) for i in range(n))


class _SpanBuilder:
    """Incrementally reduced basis of a subspace of vectorized matrices."""

    def __init__(self, n, exact):
        self.n = n
        self.exact = exact
        self.rows = []  # (pivot index, reduced vector)
        self.mats = []

    def _reduce(self, vec):
        v = list(vec)
        for pivot, row in self.rows:
            if v[pivot] != 0:
                c = v[pivot]
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def add(self, mat):
        v = self._reduce(_vec(mat, self.n))
        pivot = None
        for idx, x in enumerate(v):
            if (x != 0) if self.exact else (abs(x) > 1e-10):
                pivot = idx
                break
        if pivot is None:
            return False
        c = v[pivot]
        v = [div(x, c) if self.exact else x / c for x in v]
        for i, (p, row) in enumerate(self.rows):
            if row[pivot] != 0:
                cc = row[pivot]
                self.rows[i] = (p, [x - cc * y for x, y in zip(row, v)])
        self.rows.append((pivot, v))
        self.mats.append(mat)
        return True


def _span_closure(pres: MatrixAlgebraPresentation):
    n = pres.n
    exact = all(is_exact(x) for g in [pres.unit] + list(pres.generators) for row in g for x in row)
    builder = _SpanBuilder(n, exact)
    queue = [pres.unit] + [tuple(tuple(row) for row in g) for g in pres.generators]
    gens = [tuple(tuple(row) for row in g) for g in pres.generators]
    while queue:
        m = queue.pop(0)
        if builder.add(m):
            for g in gens:
                queue.append(tuple(tuple(r) for r in mat_mul(m, g)))
                queue.append(tuple(tuple(r) for r in mat_mul(g, m)))
    return builder.mats, exact


def relative_commutant(sub: MatrixAlgebraPresentation, ambient: MatrixAlgebraPresentation):
    """Basis of {x in alg(ambient) : [x, g] = 0 for all generators of sub}.

    Both presentations must share the ambient matrix size.  The result
    is orthogonalized for the normalized trace inner product
    <x, y> = tr(y* x) / n.
    """
    if sub.n != ambient.n:
        raise InconsistentDimensions(ambient.n, sub.n)
    n = ambient.n
    span_mats, exact = _span_closure(ambient)
    if not exact:
        span_mats = [tuple(tuple(float(x) for x in row) for row in m) for m in span_mats]

    # Constraint matrix: one column per span element, one block of n^2
    # rows per sub generator, expressing vec([s, g]) = 0.
    cols = []
    for s in span_mats:
        col = []
        for g in sub.generators:
            sg = mat_mul(s, g)
            gs = mat_mul(g, s)
            comm = [[sg[i][j] - gs[i][j] for j in range(n)] for i in range(n)]
            col.extend(_vec(comm, n))
        cols.append(col)
    nrows = len(cols[0]) if cols else 0
    A = [[cols[k][r] for k in range(len(cols))] for r in range(nrows)]
    if not A:
        A = [[0] * len(span_mats)]
    if exact:
        coeff_vectors = nullspace(A)
    else:
        import numpy as np
        M = np.array(A, dtype=float)
        _, svals, vt = np.linalg.svd(M)
        top = svals[0] if len(svals) else 1.0
        rank = int(sum(sv > 1e-10 * max(top, 1.0) for sv in svals))
        coeff_vectors = [list(vt[k]) for k in range(rank, vt.shape[0])]

    out = []
    for cv in coeff_vectors:
        m = [[0] * n for _ in range(n)]
        for c, s in zip(cv, span_mats):
            if c == 0:
                continue
            for i in range(n):
                for j in range(n):
                    m[i][j] = m[i][j] + c * s[i][j]
        out.append(tuple(tuple(row) for row in m))

    def inner(x, y):
        s = 0
        for i in range(n):
            for j in range(n):
                s = s + _conj(y[i][j]) * x[i][j]
        return div(s, n) if is_exact(s) else s / n

    ortho = []
    for m in out:
        cur = [list(row) for row in m]
        for b in ortho:
            nb = inner(tuple(tuple(r) for r in cur), b)
            db = inner(b, b)
            c = div(nb, db) if is_exact(nb) and is_exact(db) else to_float(nb) / to_float(db)
            for i in range(n):
                for j in range(n):
                    cur[i][j] = cur[i][j] - c * b[i][j]
        if any(x != 0 if exact else abs(x) > 1e-10 for row in cur for x in row):
            ortho.append(tuple(tuple(row) for row in cur))
    return ortho


# ---------------------------------------------------------------------------
# Commuting-square nondegeneracy on Bratteli data.

@dataclass(frozen=True)
class CommutingSquareData:
    """Inclusion matrices of a square of finite-dimensional algebras.

        N0 in N1   (Lambda_bot, k0 x k1)
        N0 in M0   (V0, k0 x l0)
        N1 in M1   (V1, k1 x l1)
        M0 in M1   (Lambda_top, l0 x l1)

    together with the dimension vector of N0.  The trace on everything
    is the Markov trace of M0 in M1 restricted along the inclusions.
    """

    Lambda_top: tuple
    Lambda_bot: tuple
    V0: tuple
    V1: tuple
    m_N0: tuple

    def __post_init__(self):
        for name in ("Lambda_top", "Lambda_bot", "V0", "V1"):
            rows = tuple(tuple(r) for r in getattr(self, name))
            object.__setattr__(self, name, rows)
        object.__setattr__(self, "m_N0", tuple(self.m_N0))
        k0 = len(self.Lambda_bot)
        k1 = len(self.Lambda_bot[0])
        l0 = len(self.Lambda_top)
        l1 = len(self.Lambda_top[0])
        if len(self.V0) != k0 or len(self.V0[0]) != l0:
            raise InconsistentTraces("V0 shape does not match the corner algebras")
        if len(self.V1) != k1 or len(self.V1[0]) != l1:
            raise InconsistentTraces("V1 shape does not match the corner algebras")
        if len(self.m_N0) != k0:
            raise InconsistentTraces("dimension vector length differs from N0 vertex count")


def nondegeneracy_check(square: CommutingSquareData, tol=1e-10):
    """True iff the bottom inclusion inherits the full Markov index.

    The restriction of the top Markov trace to N1 is tested for being
    an eigenvector of Lambda_bot^T Lambda_bot at the top index d^2;
    smaller index means the square is degenerate.
    """
    lb = square.Lambda_bot
    lt = square.Lambda_top
    paths_via_N1 = mat_mul(lb, square.V1)
    paths_via_M0 = mat_mul(square.V0, lt)
    k0 = len(lb)
    l1 = len(lt[0])
    for i in range(k0):
        for j in range(l1):
            if paths_via_N1[i][j] != paths_via_M0[i][j]:
                raise InconsistentTraces(
                    f"path counts from N0 vertex {i} to M1 vertex {j} disagree")

    m_M0 = vec_mat(square.m_N0, square.V0)
    if any(x <= 0 for x in m_M0):
        raise InconsistentTraces("M0 dimension vector has a nonpositive entry")
    fdm = finite_dim_markov(lt, m_M0)
    d2 = float(fdm.d_squared)
    lam_M1 = fdm.lambda_B
    lam_N1 = mat_vec(square.V1, lam_M1)
    if any(not x > 0 for x in lam_N1):
        raise InconsistentTraces("restricted trace vanishes on a block of N1")
    w = mat_vec(transpose(lb), mat_vec(lb, lam_N1))
    scale = max(abs(float(x)) for x in lam_N1)
    return all(abs(float(w[j]) - d2 * float(lam_N1[j])) <= tol * d2 * max(scale, 1.0)
               for j in range(len(lam_N1)))


def basic_construction_square(square: CommutingSquareData):
    """One basic-construction step applied to the whole square.

    The horizontal inclusions transpose; the left vertical becomes the
    old right vertical and the new right vertical reuses the old left
    one.  Meaningful for nondegenerate squares, where the data stays
    consistent.
    """
    return CommutingSquareData(
        Lambda_top=transpose(square.Lambda_top),
        Lambda_bot=transpose(square.Lambda_bot),
        V0=square.V1,
        V1=square.V0,
        m_N0=tuple(vec_mat(square.m_N0, square.Lambda_bot)),
    )
