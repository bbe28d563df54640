"""Markov traces, trace matrices, expectation coefficients, extremal tests.

The trace matrices of an inclusion are determined by the distortion and the
Jones matrix: T_ij = Jones_ij / delta_ij and Ttilde_ji = delta_ij * Jones_ij
on the support, zero elsewhere. The Markov trace pair is the Frobenius-Perron
eigendata of Ttilde T; its eigenvalue is the Markov index d^2.
"""

from dataclasses import dataclass

import numpy as np

from .core import BipartiteGraph, PerronData, _fp_eigen
from .distortion import as_distortion, extend_to_complete
from .errors import (
    ColumnNormalizationViolation,
    Disconnected,
    MissingDistortionEntry,
    MissingEntry,
)
from .numbers import close, div, is_exact


@dataclass(frozen=True)
class TracePair:
    tr_A: tuple
    tr_B: tuple
    d_squared: float


@dataclass(frozen=True)
class TraceMatrices:
    T: tuple       # a x b
    T_tilde: tuple  # b x a


@dataclass(frozen=True)
class ExpectationCoefficients:
    lambda_markov: dict   # support -> coefficient
    lambda_minimal: tuple  # a x b, zero off support by the formula itself


def trace_matrices(incl, delta):
    try:
        delta = as_distortion(delta, incl.graph)
    except MissingEntry as exc:
        raise MissingDistortionEntry(exc.position) from exc
    support = set(incl.support)
    T = [[0] * incl.b for _ in range(incl.a)]
    Tt = [[0] * incl.a for _ in range(incl.b)]
    for i, j in support:
        d_ij = delta.get(i, j)
        T[i][j] = div(incl.Delta[i][j], d_ij)
        Tt[j][i] = d_ij * incl.Delta[i][j]
    return TraceMatrices(T=tuple(map(tuple, T)), T_tilde=tuple(map(tuple, Tt)))


def _fp_nonneg(M, max_iter=10**5):
    """Top eigenpair of a nonnegative irreducible matrix with positive trace.

    Dense eigen-solve first, validated by residual; deterministic power
    iteration as fallback.
    """
    n = M.shape[0]
    try:
        vals, vecs = np.linalg.eig(M)
        k = int(np.argmax(vals.real))
        lam = float(vals[k].real)
        v = np.abs(vecs[:, k].real)
        s = float(v.sum())
        if s > 0:
            v = v / s
            if float(np.max(np.abs(M @ v - lam * v))) <= 1e-10 * max(abs(lam), 1.0):
                return lam, v
    except np.linalg.LinAlgError:
        pass
    v = np.ones(n) / n
    lam = 0.0
    for _ in range(max_iter):
        w = M @ v
        s = float(w.sum())
        w /= s
        if float(np.max(np.abs(w - v))) <= 1e-15:
            v = w
            lam = s
            break
        v, lam = w, s
    lam = float((v @ M @ v) / (v @ v))
    return lam, v / float(v.sum())


def markov_trace(incl, delta, require_normalized=True, tol=None):
    """Trace pair of the unique Markov trace.

    d^2 is the spectral radius of Ttilde T, tr_B its Frobenius-Perron
    eigenvector normalized to a state, tr_A = T tr_B. When delta is not
    realizable by any inclusion the column sums of T differ from 1; with
    require_normalized the violation is raised, otherwise the purely spectral
    trace pair is still returned for diagnostics.
    """
    tm = trace_matrices(incl, delta)
    if require_normalized:
        for j in range(incl.b):
            total = sum(tm.T[i][j] for i in range(incl.a))
            if is_exact(total):
                ok = total == 1
            else:
                ok = close(total, 1, tol)
            if not ok:
                raise ColumnNormalizationViolation(j, total)
    Tf = np.array([[float(x) for x in row] for row in tm.T])
    Ttf = np.array([[float(x) for x in row] for row in tm.T_tilde])
    d2, tr_B = _fp_nonneg(Ttf @ Tf)
    tr_A = Tf @ tr_B
    return TracePair(tr_A=tuple(float(x) for x in tr_A),
                     tr_B=tuple(float(x) for x in tr_B),
                     d_squared=float(d2))


@dataclass(frozen=True)
class FiniteDimMarkov:
    lambda_A: tuple
    lambda_B: tuple
    d_squared: float
    m_A: tuple
    m_B: tuple

    def __iter__(self):
        return iter((self.lambda_A, self.lambda_B, self.d_squared))


def finite_dim_markov(Lambda, m_A=None, max_iter=10**5):
    """Markov trace vectors of a finite-dimensional inclusion from (m_A, Lambda).

    lambda_B is the Frobenius-Perron eigenvector of Lambda^T Lambda normalized
    by m_B . lambda_B = 1 with m_B = m_A Lambda; lambda_A = Lambda lambda_B,
    which then satisfies m_A . lambda_A = 1 automatically.
    """
    L = [list(row) for row in Lambda]
    a = len(L)
    b = len(L[0])
    for row in L:
        for x in row:
            if x < 0 or x != int(x):
                raise ValueError(f"multiplicity matrix entries must be nonnegative integers: {x}")
    edges = [(i, j) for i in range(a) for j in range(b) if L[i][j] != 0]
    graph = BipartiteGraph(a, b, edges)
    if not graph.is_connected:
        raise Disconnected(graph.components)
    if m_A is None:
        m_A = tuple(1 for _ in range(a))
    else:
        m_A = tuple(m_A)
        if len(m_A) != a or any(m <= 0 for m in m_A):
            raise ValueError("m_A must be a positive vector of length a")
    m_B = tuple(sum(m_A[i] * L[i][j] for i in range(a)) for j in range(b))
    Lf = np.array([[float(x) for x in row] for row in L])
    d2, v = _fp_eigen(Lf.T @ Lf, max_iter)
    v = v / float(np.array([float(m) for m in m_B]) @ v)
    lam_B = tuple(float(x) for x in v)
    lam_A = tuple(float(sum(L[i][j] * lam_B[j] for j in range(b))) for i in range(a))
    return FiniteDimMarkov(lambda_A=lam_A, lambda_B=lam_B, d_squared=float(d2),
                           m_A=m_A, m_B=m_B)


def finite_dim_trace_matrices(m_A, Lambda):
    """Exact trace matrices of a finite-dimensional inclusion.

    T_ij = Lambda_ij m_A(i) / m_B(j) and Ttilde_ji = Lambda_ij m_B(j) / m_A(i)
    depend only on the dimension data, so they stay rational.
    """
    L = [list(row) for row in Lambda]
    a, b = len(L), len(L[0])
    m_A = list(m_A)
    m_B = [sum(m_A[i] * L[i][j] for i in range(a)) for j in range(b)]
    T = tuple(tuple(div(L[i][j] * m_A[i], m_B[j]) if L[i][j] else 0 for j in range(b))
              for i in range(a))
    Tt = tuple(tuple(div(L[i][j] * m_B[j], m_A[i]) if L[i][j] else 0 for i in range(a))
               for j in range(b))
    return TraceMatrices(T=T, T_tilde=Tt)


def distortion_from_trace_matrix(incl, T):
    """Recover the total distortion from a trace matrix: delta = Jones/T on support."""
    entries = {}
    for i, j in incl.support:
        t = T[i][j]
        if not t > 0:
            raise MissingDistortionEntry((i, j))
        entries[(i, j)] = div(incl.Delta[i][j], t)
    return extend_to_complete(entries, incl.graph)


def expectation_coefficients(incl, delta, trace_pair, perron):
    delta = as_distortion(delta, incl.graph)
    lam_markov = {}
    for i, j in incl.support:
        lam_markov[(i, j)] = float(div(incl.Delta[i][j], delta.get(i, j))) \
            * trace_pair.tr_B[j] / trace_pair.tr_A[i]
    lam_min = tuple(tuple(float(incl.D[i][j]) * perron.beta[j] / (perron.d * perron.alpha[i])
                          for j in range(incl.b))
                    for i in range(incl.a))
    return ExpectationCoefficients(lambda_markov=lam_markov, lambda_minimal=lam_min)


@dataclass(frozen=True)
class ExtremalInclusionReport:
    e1: bool
    e2: bool
    e3: bool

    @property
    def consistent(self):
        return self.e1 == self.e2 == self.e3

    @property
    def extremal(self):
        return self.e1


def check_extremal_inclusion(incl, delta, trace_pair, perron, tol=None):
    """The three equivalent extremal-inclusion conditions.

    e1: the Markov expectation coefficients equal the minimal ones and the
        Jones matrix equals D (the expectation indices).
    e2: Jones == D and delta_ij = d (tr_B(j)/beta_j)(alpha_i/tr_A(i)).
    e3: Jones == D and the cycle condition holds.
    """
    from .distortion import check_extremality

    delta = as_distortion(delta, incl.graph)
    d_eq = all(close(incl.D[i][j], incl.Delta[i][j], tol)
               for i in range(incl.a) for j in range(incl.b))
    coeffs = expectation_coefficients(incl, delta, trace_pair, perron)
    e1 = d_eq and all(close(coeffs.lambda_markov[e], coeffs.lambda_minimal[e[0]][e[1]], tol)
                      for e in incl.support)
    e2 = d_eq
    if e2:
        for i, j in incl.support:
            expected = perron.d * (trace_pair.tr_B[j] / perron.beta[j]) \
                * (perron.alpha[i] / trace_pair.tr_A[i])
            if not close(float(delta.get(i, j)), expected, tol):
                e2 = False
                break
    e3 = check_extremality(incl, delta, tol).extremal
    return ExtremalInclusionReport(e1=e1, e2=e2, e3=e3)


def distortion_from_trace(tr_A, incl, perron):
    """delta_ij = (alpha_i / tr_A(i)) sum_h (tr_A(h) / alpha_h) D_hj, total."""
    tr_A = [float(x) for x in tr_A]
    ratios = [tr_A[h] / perron.alpha[h] for h in range(incl.a)]
    col = [sum(ratios[h] * float(incl.D[h][j]) for h in range(incl.a))
           for j in range(incl.b)]
    rows = [[(perron.alpha[i] / tr_A[i]) * col[j] for j in range(incl.b)]
            for i in range(incl.a)]
    return extend_to_complete(rows, incl.graph)


def check_super_extremal_findim(m0, Lambda, tol=None):
    """nu Lambda^T == d^2 mu with mu = m0, nu = m0 Lambda, d^2 = |nu|^2/|mu|^2."""
    L = [list(row) for row in Lambda]
    a, b = len(L), len(L[0])
    mu = list(m0)
    nu = [sum(mu[i] * L[i][j] for i in range(a)) for j in range(b)]
    d2 = div(sum(x * x for x in nu), sum(x * x for x in mu))
    lhs = [sum(nu[j] * L[i][j] for j in range(b)) for i in range(a)]
    return all(close(lhs[i], d2 * mu[i], tol) for i in range(a))


def basic_construction_trace(trace_pair, incl, delta):
    """Trace vector on the basic construction and the next trace matrix.

    tr2_i = d^-2 tr_A(i) sum_k delta_ik Jones_ik, and the trace matrix of the
    middle algebra inside the basic construction is
    T_ji = delta_ij Jones_ij / sum_k delta_ik Jones_ik on the transposed support.
    """
    delta = as_distortion(delta, incl.graph)
    support = set(incl.support)
    s = []
    for i in range(incl.a):
        s.append(sum(delta.get(i, k) * incl.Delta[i][k]
                     for k in range(incl.b) if (i, k) in support))
    tr2 = tuple(trace_pair.tr_A[i] * float(s[i]) / trace_pair.d_squared
                for i in range(incl.a))
    T_next = tuple(tuple(div(delta.get(i, j) * incl.Delta[i][j], s[i])
                         if (i, j) in support else 0
                         for i in range(incl.a))
                   for j in range(incl.b))
    return tr2, T_next
