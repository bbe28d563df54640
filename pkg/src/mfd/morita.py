"""Rescaling of distortions by Morita weights.

Cutting the bimodule by projections whose left dimensions are rho_i
changes the distortion by

    delta'_ij = delta_ij * rho_i^{-1} * sum_h rho_h Delta_hj / delta_hj.

Two weight vectors differing by a global constant give the same
rescaled distortion, consecutive rescalings compose by entrywise
product, and every matrix in the orbit of the standard distortion is
realizable by an actual trace.
"""

from dataclasses import dataclass

from .core import InclusionData, PerronData, standard_distortion
from .distortion import DistortionMatrix, as_distortion, extend_to_complete, factorize
from .errors import NegativeEntry
from .numbers import DEFAULT_TOLERANCE, close, div, to_float


@dataclass(frozen=True)
class MoritaWeights:
    rho: tuple

    def __post_init__(self):
        for i, r in enumerate(self.rho):
            if not r > 0:
                raise NegativeEntry(("rho", i), r)

    def __len__(self):
        return len(self.rho)

    def __getitem__(self, i):
        return self.rho[i]

    def compose(self, other):
        if len(other) != len(self):
            raise ValueError("weight vectors of different lengths")
        return MoritaWeights(tuple(x * y for x, y in zip(self.rho, other.rho)))


def _weights(rho, a):
    w = rho.rho if isinstance(rho, MoritaWeights) else tuple(rho)
    if len(w) != a:
        raise ValueError(f"expected {a} weights, got {len(w)}")
    for i, r in enumerate(w):
        if not r > 0:
            raise NegativeEntry(("rho", i), r)
    return w


def morita_distortion(delta, jones, rho):
    """Rescale a distortion by the weight vector rho.

    jones is the Jones matrix (or an InclusionData whose Delta is
    used).  The output is defined exactly where delta is and stays
    rational for rational inputs.
    """
    if isinstance(jones, InclusionData):
        Delta = jones.Delta
        graph = jones.graph
    else:
        Delta = jones
        graph = None
    a = len(Delta)
    b = len(Delta[0])
    if graph is not None:
        dm = as_distortion(delta, graph)
    else:
        dm = as_distortion(delta)
        if (dm.a, dm.b) != (a, b):
            raise ValueError(f"delta shape {(dm.a, dm.b)} does not match "
                             f"Jones matrix shape {(a, b)}")
    w = _weights(rho, a)
    col_sum = []
    for j in range(b):
        s = 0
        for h in range(a):
            if Delta[h][j] != 0:
                s = s + w[h] * div(Delta[h][j], dm.get(h, j))
        col_sum.append(s)
    entries = {(i, j): dm.get(i, j) * div(col_sum[j], w[i]) for (i, j) in dm.entries}
    total = None
    if dm.total is not None:
        total = tuple(tuple(dm.total[i][j] * div(col_sum[j], w[i]) for j in range(b))
                      for i in range(a))
    return DistortionMatrix(a=a, b=b, entries=entries, total=total)


@dataclass
class RealizabilityResult:
    realizable: bool
    eta: tuple = ()
    xi: tuple = ()
    violation: dict = None

    def __bool__(self):
        return self.realizable


def realizability_check(delta, incl, tol=None):
    """Is delta the distortion of some Markov trace on incl?

    Equivalent tests: the factorization potentials satisfy
    xi_j = sum_h eta_h D_hj, or the trace matrix T has unit column
    sums.  The first form is checked here; a failing column is
    reported.  A CycleViolation from the factorization propagates.
    """
    if tol is None:
        tol = DEFAULT_TOLERANCE
    dm = as_distortion(delta, incl.graph)
    total = extend_to_complete(dm, incl.graph)
    eta, xi = total.eta, total.xi
    for j in range(incl.b):
        s = 0
        for h in range(incl.a):
            if incl.D[h][j] != 0:
                s = s + eta[h] * incl.D[h][j]
        if not close(s, xi[j], tol):
            return RealizabilityResult(realizable=False, eta=eta, xi=xi,
                                       violation={"column": j, "xi": xi[j],
                                                  "eta_dot_D": s})
    return RealizabilityResult(realizable=True, eta=eta, xi=xi)


def rescale_to_standard(delta, incl, perron: PerronData, tol=None):
    """Weights rho with morita_distortion(delta, Delta, rho) standard.

    Works for any factorizable delta on the support of incl: the ratio
    delta/sigma factorizes as xi'_j / eta'_i and rho_i = 1/eta'_i does
    the job (gauge rho_0 = 1).  Raises CycleViolation when delta does
    not factorize.
    """
    if tol is None:
        tol = DEFAULT_TOLERANCE
    dm = as_distortion(delta, incl.graph)
    sigma = standard_distortion(perron)
    ratio = {}
    for (i, j) in incl.graph.edges:
        ratio[(i, j)] = to_float(dm.get(i, j)) / sigma[i][j]
    eta_p, _ = factorize(DistortionMatrix(a=incl.a, b=incl.b, entries=ratio),
                         incl.graph, tol=tol)
    return MoritaWeights(tuple(div(1, e) for e in eta_p))
