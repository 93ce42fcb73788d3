"""Linear matrix interpretations of terms and the termination check.

Each symbol f of arity k is interpreted as

    f(X_1, ..., X_k) = C_f + A_{f,1} X_1 + ... + A_{f,k} X_k

over n x n matrices of natural numbers. Matrices are compared by a strict
decrease at entry (0, 0) and a weak decrease at every other entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import InputError, InterpretationError
from .matrix import GuardedMatrix, add, geq, gt, identity, mat_guard, mul, require_nonnegative, zeros
from .terms import Rule, Term, Trs, Var, term_vars
from .verdict import CERTIFIED, REJECTED, Verdict


@dataclass(frozen=True)
class SymbolInterpretation:
    constant: GuardedMatrix
    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def arity(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class LinearInterpretation:
    dimension: int
    assigns: Mapping[str, SymbolInterpretation] = field(default_factory=dict)

    def __post_init__(self):
        n = self.dimension
        if n < 1:
            raise InputError(f"dimension must be >= 1, got {n}")
        for f, si in self.assigns.items():
            for what, M in [("constant", si.constant)] + [
                (f"argument {i + 1}", A) for i, A in enumerate(si.coeffs)
            ]:
                if not mat_guard(n, n, M):
                    raise InputError(f"{f}: {what} is {M.rows}x{M.cols}, expected {n}x{n}")
                try:
                    require_nonnegative(f"{f} {what}", M)
                except ValueError as e:
                    raise InputError(str(e)) from None
        object.__setattr__(self, "assigns", dict(sorted(self.assigns.items())))

    def __hash__(self):
        return hash((self.dimension, tuple(self.assigns.items())))

    def __getitem__(self, symbol: str) -> SymbolInterpretation:
        try:
            return self.assigns[symbol]
        except KeyError:
            raise InterpretationError(f"symbol {symbol!r} has no interpretation") from None

    def covers(self, R: Trs) -> list[str]:
        """Problems preventing this interpretation from covering R's signature."""
        problems = []
        for f, k in R.signature.items():
            si = self.assigns.get(f)
            if si is None:
                problems.append(f"symbol {f!r} has no interpretation")
            elif si.arity != k:
                problems.append(f"symbol {f!r} has arity {k} but {si.arity} argument matrices")
        return problems

    def with_constant(self, name: str) -> LinearInterpretation:
        """Add ``name`` as a constant interpreted by the zero matrix, unless
        it is already interpreted."""
        if name in self.assigns:
            return self
        assigns = dict(self.assigns)
        assigns[name] = SymbolInterpretation(zeros(self.dimension), ())
        return LinearInterpretation(self.dimension, assigns)


@dataclass(frozen=True)
class LinearForm:
    """``constant + sum(coeff[x] @ alpha[x])``; absent variables have coefficient 0."""

    constant: GuardedMatrix
    coeff: Mapping[str, GuardedMatrix] = field(default_factory=dict)

    def coefficient(self, x: str) -> GuardedMatrix:
        M = self.coeff.get(x)
        return M if M is not None else zeros(self.constant.rows)

    def instantiate(self, alpha: Mapping[str, GuardedMatrix]) -> GuardedMatrix:
        out = self.constant
        for x, A in sorted(self.coeff.items()):
            out = add(out, mul(A, alpha[x]))
        return out


def linear_form(I: LinearInterpretation, t: Term) -> LinearForm:
    n = I.dimension
    if isinstance(t, Var):
        return LinearForm(zeros(n), {t.name: identity(n)})
    si = I[t.symbol]
    if si.arity != len(t.args):
        raise InterpretationError(
            f"symbol {t.symbol!r} applied to {len(t.args)} arguments, interpreted with {si.arity}"
        )
    constant = si.constant
    coeff: dict[str, GuardedMatrix] = {}
    for A, arg in zip(si.coeffs, t.args):
        child = linear_form(I, arg)
        constant = add(constant, mul(A, child.constant))
        for x, B in child.coeff.items():
            AB = mul(A, B)
            coeff[x] = add(coeff[x], AB) if x in coeff else AB
    return LinearForm(constant, coeff)


def evaluate(I: LinearInterpretation, alpha: Mapping[str, GuardedMatrix], t: Term) -> GuardedMatrix:
    if isinstance(t, Var):
        try:
            return alpha[t.name]
        except KeyError:
            raise InterpretationError(f"assignment has no value for variable {t.name!r}") from None
    si = I[t.symbol]
    if si.arity != len(t.args):
        raise InterpretationError(
            f"symbol {t.symbol!r} applied to {len(t.args)} arguments, interpreted with {si.arity}"
        )
    out = si.constant
    for A, arg in zip(si.coeffs, t.args):
        out = add(out, mul(A, evaluate(I, alpha, arg)))
    return out


def interpret_bound(I: LinearInterpretation, t: Term) -> int:
    """Entry (0, 0) of [t], with every variable read as the zero matrix."""
    Z = zeros(I.dimension)
    alpha = {x: Z for x in term_vars(t)}
    return evaluate(I, alpha, t)[0, 0]


@dataclass
class MonotonicityCheck:
    ok: bool
    failures: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def check_monotone(I: LinearInterpretation) -> MonotonicityCheck:
    failures = []
    for f, si in I.assigns.items():
        for i, A in enumerate(si.coeffs):
            if A[0, 0] < 1:
                failures.append(
                    f"symbol {f!r} argument {i + 1}: coefficient entry (0,0) is {A[0, 0]}, needs >= 1"
                )
    return MonotonicityCheck(not failures, failures)


STRICT = "strict"
WEAK = "weak-only"
NOT_ORIENTED = "not-oriented"


@dataclass(frozen=True)
class Orientation:
    status: str
    witness: str | None = None

    @property
    def strict(self) -> bool:
        return self.status == STRICT


def _first_failure(label, L, R):
    for (i, j), a, b in zip(L.indices(), L.entries, R.entries):
        if a < b:
            return f"{label} entry ({i},{j}): lhs {a} < rhs {b}"
    return None


def check_rule_orientation(I: LinearInterpretation, rule: Rule) -> Orientation:
    L = linear_form(I, rule.lhs)
    R = linear_form(I, rule.rhs)
    comparisons = [("constant", L.constant, R.constant)]
    for x in sorted(term_vars(rule.rhs)):
        comparisons.append((f"coefficient of {x}", L.coefficient(x), R.coefficient(x)))
    for label, a, b in comparisons:
        if not geq(a, b):
            return Orientation(NOT_ORIENTED, _first_failure(label, a, b))
    if gt(L.constant, R.constant):
        return Orientation(STRICT)
    return Orientation(
        WEAK,
        f"constant not strictly decreased at (0,0): lhs {L.constant[0, 0]}, rhs {R.constant[0, 0]}",
    )


def certify_termination(I: LinearInterpretation, R: Trs) -> Verdict:
    problems = I.covers(R)
    if problems:
        raise InputError("; ".join(problems))
    witnesses = []
    mono = check_monotone(I)
    witnesses.extend(f"not monotone: {w}" for w in mono.failures)
    orientations = {}
    for rule in R.rules:
        o = check_rule_orientation(I, rule)
        orientations[str(rule)] = o.status
        if not o.strict:
            witnesses.append(f"rule {rule} is {o.status}: {o.witness}")
    details = {"dimension": I.dimension, "monotone": mono.ok, "rules": orientations}
    if witnesses:
        return Verdict(REJECTED, "termination", witnesses=witnesses, details=details)
    return Verdict(CERTIFIED, "termination", details=details)
