"""Tower dynamics for distortion matrices.

Passing to the basic construction turns an a x b distortion into a b x a
one; doing it twice gives the order-two update Phi.  Iterating Phi from
any totally defined factorizable start converges to the standard
distortion, and the fixed points are exactly the homogeneous ones.  The
downward direction asks for a column vector pi with M pi = 1 where
M_ij = delta_ij * Delta_ij; existence in (0,1]^b is the strict
feasibility question, existence in [0,1]^b the Markov-tunnel one.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import BipartiteGraph, InclusionData, PerronData, perron_data, standard_distortion
from .distortion import DistortionMatrix, as_distortion, extend_to_complete
from .errors import CycleViolation, NonConvergence, ZeroPi
from .lp import solve_lp
from .linear import solve
from .markov import TracePair, basic_construction_trace, markov_trace
from .numbers import DEFAULT_TOLERANCE, close, close_all, div, is_exact, to_float


def _support_graph(jones):
    a = len(jones)
    b = len(jones[0])
    edges = [(i, j) for i in range(a) for j in range(b) if jones[i][j] != 0]
    return BipartiteGraph(a, b, edges)


def _jones_matrix(jones):
    if isinstance(jones, InclusionData):
        return jones.Delta
    return jones


def basic_construction_distortion(delta, jones):
    """Distortion of the next inclusion in the tower.

    delta is an a x b distortion for an inclusion with Jones matrix
    ``jones`` (a matrix, or an InclusionData whose Delta is used).  The
    result is the b x a distortion of B in the basic construction,
    defined on the transposed support:

        delta'_{ji} = (sum_k delta_ik Delta_ik) / delta_ij.
    """
    Delta = _jones_matrix(jones)
    graph = jones.graph if isinstance(jones, InclusionData) else _support_graph(Delta)
    dm = as_distortion(delta, graph)
    a, b = graph.a, graph.b
    row_sum = []
    for i in range(a):
        s = 0
        for j in range(b):
            if Delta[i][j] != 0:
                s = s + dm.get(i, j) * Delta[i][j]
        row_sum.append(s)
    entries = {}
    for (i, j) in graph.edges:
        entries[(j, i)] = div(row_sum[i], dm.get(i, j))
    return DistortionMatrix(a=b, b=a, entries=entries)


def phi_step(delta, incl):
    """One order-two tower step: two basic constructions.

    Uses the factorization potentials of delta, so delta must satisfy
    the cycle condition.  Returns a totally defined distortion; with
    rational inputs the output stays rational.
    """
    dm = as_distortion(delta, incl.graph)
    if dm.xi is not None and dm.eta is not None:
        eta, xi = dm.eta, dm.xi
    else:
        total = extend_to_complete(dm, incl.graph)
        eta, xi = total.eta, total.xi
    a, b = incl.a, incl.b
    D = incl.D
    # eta' = xi D^T, xi' = xi D^T D, then delta'_ij = xi'_j / eta'_i.
    eta_new = []
    for i in range(a):
        s = 0
        for j in range(b):
            if D[i][j] != 0:
                s = s + xi[j] * D[i][j]
        eta_new.append(s)
    xi_new = []
    for j in range(b):
        s = 0
        for i in range(a):
            if D[i][j] != 0:
                s = s + eta_new[i] * D[i][j]
        xi_new.append(s)
    gauge = eta_new[0]
    eta_new = [div(x, gauge) for x in eta_new]
    xi_new = [div(x, gauge) for x in xi_new]
    total = tuple(tuple(div(xi_new[j], eta_new[i]) for j in range(b)) for i in range(a))
    entries = {(i, j): total[i][j] for (i, j) in incl.graph.edges}
    return DistortionMatrix(a=a, b=b, entries=entries, total=total,
                            eta=tuple(eta_new), xi=tuple(xi_new))


@dataclass
class TowerLevel:
    level: int
    matrix: DistortionMatrix
    orientation: str  # "even" (a x b) or "odd" (b x a)


@dataclass
class TowerTrace:
    levels: list
    iterations: int  # completed Phi steps (pairs of basic constructions)
    residual: float
    converged: bool


def relative_residual(dm, sigma):
    worst = 0.0
    for i in range(len(sigma)):
        for j in range(len(sigma[0])):
            s = sigma[i][j]
            val = dm.total[i][j] if dm.total is not None else dm.get(i, j)
            if val is None:
                continue
            dev = abs(to_float(val) - s) / s
            if dev > worst:
                worst = dev
    return worst


def iterate_to_fixed_point(delta0, incl, tol=1e-9, max_iter=10 ** 4,
                           perron: Optional[PerronData] = None):
    """Iterate the tower dynamics until the standard distortion is reached.

    Records every basic-construction half-step.  Convergence is measured
    as the relative sup deviation of the even levels from the standard
    distortion.  Raises NonConvergence if max_iter Phi steps do not get
    within tol.
    """
    if perron is None:
        perron = perron_data(incl)
    sigma = standard_distortion(perron)
    graph = incl.graph
    graph_t = BipartiteGraph(incl.b, incl.a, [(j, i) for (i, j) in graph.edges])
    D = incl.D
    Dt = tuple(tuple(D[i][j] for i in range(incl.a)) for j in range(incl.b))

    dm = extend_to_complete(as_distortion(delta0, graph), graph)
    levels = [TowerLevel(0, dm, "even")]
    residual = relative_residual(dm, sigma)
    if residual <= tol:
        return TowerTrace(levels=levels, iterations=0, residual=residual, converged=True)
    for n in range(1, max_iter + 1):
        odd = extend_to_complete(basic_construction_distortion(dm, D), graph_t)
        levels.append(TowerLevel(2 * n - 1, odd, "odd"))
        dm = extend_to_complete(basic_construction_distortion(odd, Dt), graph)
        levels.append(TowerLevel(2 * n, dm, "even"))
        residual = relative_residual(dm, sigma)
        if residual <= tol:
            return TowerTrace(levels=levels, iterations=n, residual=residual, converged=True)
    raise NonConvergence(max_iter, residual=residual)


@dataclass
class HomogeneityReport:
    h2_row_sums: bool
    h3_fixed_point: bool
    h4_standard: bool
    h5_scalar_jones_trace: bool
    h6_trace_preserved: bool
    h7_super_extremal: bool
    row_sums: tuple = ()

    @property
    def flags(self):
        return {
            "H2_row_sums": self.h2_row_sums,
            "H3_fixed_point": self.h3_fixed_point,
            "H4_standard": self.h4_standard,
            "H5_scalar_jones_trace": self.h5_scalar_jones_trace,
            "H6_trace_preserved": self.h6_trace_preserved,
            "H7_super_extremal": self.h7_super_extremal,
        }

    @property
    def homogeneous(self):
        return all(self.flags.values())

    @property
    def all_flags_agree(self):
        vals = set(self.flags.values())
        return len(vals) == 1


def homogeneity_report(incl, delta, trace_pair: Optional[TracePair] = None,
                       perron: Optional[PerronData] = None, tol=None):
    """Evaluate the equivalent homogeneity conditions for (incl, delta).

    For a genuine distortion all six flags agree; they are reported
    separately so disagreement can flag numerical or modelling trouble.
    """
    if tol is None:
        tol = DEFAULT_TOLERANCE
    if perron is None:
        perron = perron_data(incl)
    dm = as_distortion(delta, incl.graph)
    d2 = perron.d_squared
    a, b = incl.a, incl.b

    row_sums = []
    jones_sums = []
    for i in range(a):
        s_d = 0
        s_j = 0
        for j in range(b):
            if incl.D[i][j] != 0:
                s_d = s_d + dm.get(i, j) * incl.D[i][j]
                s_j = s_j + dm.get(i, j) * incl.Delta[i][j]
        row_sums.append(s_d)
        jones_sums.append(s_j)
    h2 = all(close(s, d2, tol) for s in row_sums)

    try:
        phi = phi_step(dm, incl)
        h3 = all(close(phi.get(i, j), dm.get(i, j), tol) for (i, j) in incl.graph.edges)
    except CycleViolation:
        h3 = False

    sigma = standard_distortion(perron)
    h4 = all(close(dm.get(i, j), sigma[i][j], tol) for (i, j) in incl.graph.edges)

    h5 = all(close(s, jones_sums[0], tol) for s in jones_sums)

    if trace_pair is None:
        trace_pair = markov_trace(incl, dm, require_normalized=False)
    tr2, _ = basic_construction_trace(trace_pair, incl, dm)
    h6 = close_all(tr2, trace_pair.tr_A, tol)

    alpha_sq = tuple(x * x for x in perron.alpha)
    beta_sq = tuple(x * x for x in perron.beta)
    h7 = close_all(trace_pair.tr_A, alpha_sq, tol) and close_all(trace_pair.tr_B, beta_sq, tol)

    return HomogeneityReport(h2_row_sums=h2, h3_fixed_point=h3, h4_standard=h4,
                             h5_scalar_jones_trace=h5, h6_trace_preserved=h6,
                             h7_super_extremal=h7, row_sums=tuple(row_sums))


@dataclass
class FeasibilityResult:
    status: str  # "Feasible" | "Infeasible" | "MarkovTunnelOnly"
    pi: Optional[tuple] = None
    certificate: Optional[dict] = None

    @property
    def feasible(self):
        return self.status == "Feasible"


def _as_fraction_matrix(M):
    return [[Fraction(x) if is_exact(x) else Fraction(float(x)) for x in row] for row in M]


def _classify_pi(pi, exact_inputs, tol):
    """Split candidate solution entries into negative / zero / interior / above-one."""
    zeros = []
    for j, x in enumerate(pi):
        if exact_inputs:
            if x < 0 or x > 1:
                return "out_of_box", []
            if x == 0:
                zeros.append(j)
        else:
            xf = float(x)
            if xf < -tol or xf > 1 + tol:
                return "out_of_box", []
            if abs(xf) <= tol:
                zeros.append(j)
    if zeros:
        return "boundary", zeros
    return "interior", []


def downward_feasibility(incl, delta, mode="strict", tol=None):
    """Decide whether a downward basic construction exists.

    Solves M pi = 1 with M_ij = delta_ij * Delta_ij, pi in (0,1]^b
    (mode "strict") or [0,1]^b with zeros allowed (mode "markov_tunnel").
    The linear algebra is exact over the rationals; when the solution
    set is a ray or higher dimensional, an exact LP maximizes the
    smallest entry of pi over the box.
    """
    if mode not in ("strict", "markov_tunnel"):
        raise ValueError("mode must be 'strict' or 'markov_tunnel'")
    if tol is None:
        tol = DEFAULT_TOLERANCE
    dm = as_distortion(delta, incl.graph)
    a, b = incl.a, incl.b
    M = [[0] * b for _ in range(a)]
    exact_inputs = True
    for (i, j) in incl.graph.edges:
        v = dm.get(i, j) * incl.Delta[i][j]
        if not is_exact(v):
            exact_inputs = False
        M[i][j] = v
    MF = _as_fraction_matrix(M)
    ones = [Fraction(1)] * a
    kind, payload = solve(MF, ones)

    def _emit(pi_frac):
        if exact_inputs:
            return tuple(pi_frac)
        return tuple(float(x) for x in pi_frac)

    if kind == "inconsistent":
        return FeasibilityResult(status="Infeasible",
                                 certificate={"reason": "linear system has no solution",
                                              "inconsistent_row": payload})
    if kind == "unique":
        pi = list(payload)
        box, zeros = _classify_pi(pi, exact_inputs, tol)
        if box == "out_of_box":
            return FeasibilityResult(status="Infeasible",
                                     certificate={"reason": "unique candidate leaves [0,1]",
                                                  "candidate_pi": _emit(pi)})
        if box == "boundary":
            if mode == "strict":
                return FeasibilityResult(status="Infeasible",
                                         certificate={"reason": "unique candidate has zero entries",
                                                      "candidate_pi": _emit(pi),
                                                      "zero_columns": zeros})
            return FeasibilityResult(status="MarkovTunnelOnly", pi=_emit(pi),
                                     certificate={"zero_columns": zeros})
        return FeasibilityResult(status="Feasible", pi=_emit(pi))

    # Underdetermined: maximize t subject to M pi = 1, pi + s = 1,
    # pi - t - u = 0, all variables nonnegative.  t* is the best
    # possible min_j pi_j over box solutions.
    nvars = 2 * b + 1 + b  # pi, t, s, u
    A = []
    rhs = []
    for i in range(a):
        row = [Fraction(0)] * nvars
        for j in range(b):
            row[j] = MF[i][j]
        A.append(row)
        rhs.append(Fraction(1))
    for j in range(b):
        row = [Fraction(0)] * nvars
        row[j] = Fraction(1)
        row[b + 1 + j] = Fraction(1)
        A.append(row)
        rhs.append(Fraction(1))
    for j in range(b):
        row = [Fraction(0)] * nvars
        row[j] = Fraction(1)
        row[b] = Fraction(-1)
        row[b + 1 + b + j] = Fraction(-1)
        A.append(row)
        rhs.append(Fraction(0))
    c = [Fraction(0)] * nvars
    c[b] = Fraction(-1)  # maximize t
    status, x, value = solve_lp(A, rhs, c)
    if status == "infeasible":
        return FeasibilityResult(status="Infeasible",
                                 certificate={"reason": "no solution of M pi = 1 inside [0,1]"})
    if status != "optimal":
        raise RuntimeError("unexpected LP status %r" % status)
    pi = x[:b]
    t_star = x[b]
    if t_star > 0:
        return FeasibilityResult(status="Feasible", pi=_emit(pi))
    zeros = [j for j in range(b) if pi[j] == 0]
    if mode == "strict":
        return FeasibilityResult(status="Infeasible",
                                 certificate={"reason": "max-min entry over the box is zero",
                                              "candidate_pi": _emit(pi),
                                              "zero_columns": zeros})
    return FeasibilityResult(status="MarkovTunnelOnly", pi=_emit(pi),
                             certificate={"zero_columns": zeros})


def downward_distortion(delta, pi):
    """Distortion of the downward inclusion B_{-1} in A.

    gamma_ji = 1 / (pi_j delta_ij), defined wherever delta is.  Raises
    ZeroPi if a needed pi_j vanishes.
    """
    dm = delta if isinstance(delta, DistortionMatrix) else None
    if dm is None:
        raise TypeError("downward_distortion expects a DistortionMatrix; "
                        "use as_distortion first")
    used = set()
    if dm.total is not None:
        used = set(range(dm.b))
    else:
        used = {j for (_, j) in dm.entries}
    for j in sorted(used):
        if pi[j] == 0:
            raise ZeroPi(j)
    entries = {(j, i): div(1, pi[j] * v) for (i, j), v in dm.entries.items()}
    total = None
    if dm.total is not None:
        total = tuple(tuple(div(1, pi[j] * dm.total[i][j]) for i in range(dm.a))
                      for j in range(dm.b))
    return DistortionMatrix(a=dm.b, b=dm.a, entries=entries, total=total)
