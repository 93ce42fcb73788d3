"""Bounding the growth of interpretation values.

Three routes are provided:

* the triangular criterion on the pointwise maximum ``M_max`` of all
  argument coefficients;
* the spectral criterion, which decides spectral radius <= 1 of ``M_max``
  exactly from the strongly connected components of its support graph and
  reads the degree off the multiplicity of eigenvalue 1 of its
  characteristic polynomial;
* a product-growth harness that enumerates every product of coefficient
  matrices up to a length bound. It is diagnostic only.

Everything is integer arithmetic; no eigenvalue is ever approximated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetExceeded, NonSquareMatrix
from .interpretation import LinearInterpretation, certify_termination
from .matrix import (
    GuardedMatrix,
    identity,
    linear_norm,
    mul,
    pointwise_max,
    require_nonnegative,
    zeros,
)
from .poly import Polynomial, char_poly, multiplicity_of_root_one
from .terms import Trs
from .verdict import CERTIFIED, REJECTED, Verdict

NILPOTENT = "nilpotent-trivial"
UNIT_LOOP = "unit-loop"
UNIT_CYCLE = "unit-cycle"
EXPANDING = "expanding"
UNIT_KINDS = (UNIT_LOOP, UNIT_CYCLE)

DEFAULT_BUDGET = 1 << 20


@dataclass(frozen=True)
class CoefficientSet:
    dimension: int
    matrices: tuple
    constants: tuple

    def __post_init__(self):
        for M in self.matrices + self.constants:
            if M.shape != (self.dimension, self.dimension):
                raise NonSquareMatrix("CoefficientSet", M.shape)
            require_nonnegative("CoefficientSet", M)

    @property
    def m_max(self) -> GuardedMatrix:
        return pointwise_max(self.matrices)


def _dedupe(ms):
    return tuple(sorted(set(ms), key=lambda M: M.entries))


def coefficient_set(I: LinearInterpretation) -> CoefficientSet:
    """Argument coefficients and constant parts of every interpreted symbol.

    An interpretation with constants only gets the zero matrix as its sole
    coefficient so that ``M_max`` is always defined.
    """
    matrices = _dedupe(A for si in I.assigns.values() for A in si.coeffs)
    constants = _dedupe(si.constant for si in I.assigns.values())
    if not matrices:
        matrices = (zeros(I.dimension),)
    return CoefficientSet(I.dimension, matrices, constants)


def constant_bound(cs: CoefficientSet) -> int:
    return max([1] + [linear_norm(C) for C in cs.constants])


@dataclass(frozen=True)
class CriterionResult:
    name: str
    accepted: bool
    degree: int | None = None
    witness: str | None = None
    details: dict = field(default_factory=dict, compare=False)


def _square_nonneg(op, M):
    if not M.is_square:
        raise NonSquareMatrix(op, M.shape)
    require_nonnegative(op, M)


def check_triangular(M: GuardedMatrix) -> CriterionResult:
    """Upper triangular with diagonal entries at most 1 gives degree n."""
    _square_nonneg("check_triangular", M)
    n = M.rows
    for i, j in M.indices():
        if i > j and M[i, j] != 0:
            return CriterionResult("triangular", False, witness=f"entry ({i},{j}) = {M[i, j]} below the diagonal")
    for i in range(n):
        if M[i, i] > 1:
            return CriterionResult("triangular", False, witness=f"diagonal entry ({i},{i}) = {M[i, i]} exceeds 1")
    return CriterionResult("triangular", True, degree=n)


# -- strongly connected components ------------------------------------------


def _tarjan(n, succ):
    index = {}
    lowlink = {}
    stack = []
    on_stack = set()
    counter = itertools.count()
    out = []

    def strongconnect(v):
        index[v] = lowlink[v] = next(counter)
        stack.append(v)
        on_stack.add(v)
        for w in succ[v]:
            if w not in index:
                strongconnect(w)
                lowlink[v] = min(lowlink[v], lowlink[w])
            elif w in on_stack:
                lowlink[v] = min(lowlink[v], index[w])
        if lowlink[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on_stack.discard(w)
                comp.append(w)
                if w == v:
                    break
            out.append(tuple(sorted(comp)))

    for v in range(n):
        if v not in index:
            strongconnect(v)
    # Tarjan emits sinks first
    return out[::-1]


@dataclass(frozen=True)
class SccAnalysis:
    """Components in topological order of the condensation (sources first)."""

    components: tuple
    kinds: tuple
    edges: frozenset

    def component_of(self, i: int) -> int:
        for c, comp in enumerate(self.components):
            if i in comp:
                return c
        raise IndexError(i)

    @property
    def unit_count(self) -> int:
        return sum(1 for k in self.kinds if k in UNIT_KINDS)

    @property
    def has_expanding(self) -> bool:
        return EXPANDING in self.kinds


def _classify(M, comp):
    if len(comp) == 1:
        v = M[comp[0], comp[0]]
        if v == 0:
            return NILPOTENT
        return UNIT_LOOP if v == 1 else EXPANDING
    for i in comp:
        row = [M[i, j] for j in comp]
        if any(x not in (0, 1) for x in row) or sum(row) != 1:
            return EXPANDING
    return UNIT_CYCLE


def scc_analysis(M: GuardedMatrix) -> SccAnalysis:
    _square_nonneg("scc_analysis", M)
    n = M.rows
    succ = [[j for j in range(n) if M[i, j] > 0] for i in range(n)]
    comps = _tarjan(n, succ)
    where = {v: c for c, comp in enumerate(comps) for v in comp}
    edges = frozenset(
        (where[i], where[j]) for i in range(n) for j in succ[i] if where[i] != where[j]
    )
    kinds = tuple(_classify(M, comp) for comp in comps)
    return SccAnalysis(tuple(comps), kinds, edges)


def spectral_radius_leq_one(M: GuardedMatrix) -> bool:
    """Exact test for spectral radius <= 1 of a nonnegative integer matrix.

    An irreducible block with spectral radius <= 1 must have all row sums
    equal to 1 (otherwise its spectral radius lies strictly above the
    smallest row sum, which is >= 1), so it is a single 1-loop or a
    permutation cycle. Reducible matrices are block triangular, so the
    condition applies per component.
    """
    return not scc_analysis(M).has_expanding


def complexity_degree_spectral(M: GuardedMatrix) -> CriterionResult:
    scc = scc_analysis(M)
    chi = char_poly(M)
    if scc.has_expanding:
        bad = [comp for comp, k in zip(scc.components, scc.kinds) if k == EXPANDING]
        return CriterionResult(
            "spectral",
            False,
            witness=f"spectral radius exceeds 1: expanding component on indices {list(bad[0])}",
            details={"char_poly": chi},
        )
    m = multiplicity_of_root_one(chi)
    return CriterionResult("spectral", True, degree=max(1, m), details={"char_poly": chi, "m": m})


@dataclass(frozen=True)
class GrowthDegree:
    """Asymptotic class of max-entry(M^k): Theta(k^degree), eventually zero,
    or exponential."""

    kind: str  # "polynomial", "eventually-zero", "unbounded"
    degree: int | None = None

    def __str__(self):
        return str(self.degree) if self.kind == "polynomial" else self.kind


def exact_growth_degree(M: GuardedMatrix) -> GrowthDegree:
    scc = scc_analysis(M)
    if scc.has_expanding:
        return GrowthDegree("unbounded")
    if scc.unit_count == 0:
        return GrowthDegree("eventually-zero")
    succ = {c: [] for c in range(len(scc.components))}
    for a, b in scc.edges:
        succ[a].append(b)
    # components are topologically sorted, so a reverse sweep is a DP
    best = [0] * len(scc.components)
    for c in range(len(scc.components) - 1, -1, -1):
        here = 1 if scc.kinds[c] in UNIT_KINDS else 0
        best[c] = here + max((best[d] for d in succ[c]), default=0)
    return GrowthDegree("polynomial", max(best) - 1)


# -- product growth harness -------------------------------------------------


@dataclass
class GrowthReport:
    product_norms: list  # index k-1 holds the max norm over products of length k
    mmax_norms: list
    degree_estimate: int | None
    unbounded: bool
    eventually_zero: bool
    truncated: bool = False

    @property
    def max_len(self) -> int:
        return len(self.product_norms)

    @property
    def gap(self) -> list[int]:
        """Lengths at which the M_max power overestimates every product."""
        return [k + 1 for k, (p, q) in enumerate(zip(self.product_norms, self.mmax_norms)) if q > p]

    def rows(self):
        for k, (p, q) in enumerate(zip(self.product_norms, self.mmax_norms), start=1):
            yield k, p, q

    def to_dict(self) -> dict:
        return {
            "max_len": self.max_len,
            "product_norms": list(self.product_norms),
            "mmax_power_norms": list(self.mmax_norms),
            "degree_estimate": self.degree_estimate,
            "unbounded": self.unbounded,
            "eventually_zero": self.eventually_zero,
            "approximation_gap_at": self.gap,
            "truncated": self.truncated,
        }


def estimate_degree(norms: list, dimension: int, margin=1):
    """Least d <= dimension with norms[k] <= norms[k0] * (k/k0)^d * margin on the
    tail k0..K, k0 = max(1, K // 2). Returns (d or None, unbounded flag)."""
    K = len(norms)
    k0 = max(1, K // 2)
    base = norms[k0 - 1]
    if base == 0:
        return 0, False
    for d in range(dimension + 1):
        if all(
            norms[k - 1] <= base * Fraction(k, k0) ** d * margin for k in range(k0, K + 1)
        ):
            return d, False
    return None, True


def product_growth_measure(cs: CoefficientSet, K: int, budget: int = DEFAULT_BUDGET) -> GrowthReport:
    if K < 1:
        raise ValueError("K must be >= 1")
    requested = len(cs.matrices) ** K
    if requested > budget:
        raise BudgetExceeded(requested, budget)
    m_max = cs.m_max
    level = {identity(cs.dimension)}
    product_norms = []
    mmax_norms = []
    P = identity(cs.dimension)
    for _ in range(K):
        # distinct products suffice for the exact maximum
        level = {mul(A, N) for A in level for N in cs.matrices}
        product_norms.append(max(linear_norm(A) for A in level))
        P = mul(P, m_max)
        mmax_norms.append(linear_norm(P))
    degree, unbounded = estimate_degree(product_norms, cs.dimension)
    return GrowthReport(
        product_norms,
        mmax_norms,
        degree,
        unbounded,
        eventually_zero=product_norms[-1] == 0,
    )


def affordable_length(cs: CoefficientSet, K: int, budget: int = DEFAULT_BUDGET) -> int:
    k = K
    while k > 1 and len(cs.matrices) ** k > budget:
        k -= 1
    return k


# -- verdicts ---------------------------------------------------------------


def _matrix_json(M):
    return M.to_rows()


def certify_complexity(I: LinearInterpretation, R: Trs, diagnostic_len: int = 6) -> Verdict:
    term = certify_termination(I, R)
    if not term.certified:
        return Verdict(
            REJECTED,
            "complexity",
            witnesses=["termination not certified"] + term.witnesses,
            details={"termination": term.details},
        )
    cs = coefficient_set(I)
    m_max = cs.m_max
    c = constant_bound(cs)
    tri = check_triangular(m_max)
    spec = complexity_degree_spectral(m_max)
    chi: Polynomial = spec.details["char_poly"]
    details = {
        "dimension": I.dimension,
        "c": c,
        "m_max": _matrix_json(m_max),
        "char_poly": list(chi.coeffs),
        "m": multiplicity_of_root_one(chi),
        "triangular": {"accepted": tri.accepted, "degree": tri.degree, "witness": tri.witness},
        "spectral": {"accepted": spec.accepted, "degree": spec.degree, "witness": spec.witness},
        "exact_growth_degree": str(exact_growth_degree(m_max)),
    }
    accepted = [r for r in (tri, spec) if r.accepted]
    if accepted:
        best = min(accepted, key=lambda r: r.degree)
        details["accepted_criteria"] = [r.name for r in accepted]
        return Verdict(CERTIFIED, "complexity", degree=best.degree, criterion=best.name, details=details)
    k = affordable_length(cs, diagnostic_len)
    report = product_growth_measure(cs, k)
    details["growth_report"] = report.to_dict()
    return Verdict(
        REJECTED,
        "complexity",
        witnesses=[f"triangular: {tri.witness}", f"spectral: {spec.witness}"],
        details=details,
    )
