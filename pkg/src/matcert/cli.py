"""Command-line interface: ``matcert check | oracle | analyze``.

Exit codes: 0 certified / ok, 1 rejected / oracle failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import BudgetExceeded, InputError, MatcertError
from .formats import Certificate, parse_certificate, parse_trs
from .growth import (
    DEFAULT_BUDGET,
    affordable_length,
    certify_complexity,
    check_triangular,
    coefficient_set,
    complexity_degree_spectral,
    constant_bound,
    exact_growth_degree,
    product_growth_measure,
)
from .interpretation import LinearInterpretation, certify_termination, interpret_bound
from .poly import multiplicity_of_root_one
from .terms import (
    DerivationSearch,
    NonTermination,
    Trs,
    dc_table,
    enumerate_ground_terms,
    ground_signature,
)
from .verdict import INPUT_ERROR, Verdict

NOTES = [
    "derivation lengths are counted in rewrite steps; counting terms instead adds 1",
    "ground terms are built over the signature plus one fresh constant when it has none; "
    "the fresh constant is interpreted as the zero matrix unless the certificate assigns it",
    "the spectral degree is floored at 1 because the |t| factor of the bound is already linear",
]


def _fmt_fraction(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"cannot read {path}: {e}") from None


def _load_check_inputs(trs_path, cert_path) -> tuple[Trs, Certificate]:
    try:
        R = parse_trs(_read(trs_path))
    except InputError as e:
        raise InputError(e.message, f"{trs_path}:{e.where}" if e.where else str(trs_path)) from None
    try:
        C = parse_certificate(_read(cert_path))
    except InputError as e:
        raise InputError(e.message, f"{cert_path} {e.where}" if e.where else str(cert_path)) from None
    problems = C.interpretation.covers(R)
    if problems:
        raise InputError("; ".join(problems), str(cert_path))
    return R, C


def ground_interpretation(I: LinearInterpretation, R: Trs) -> LinearInterpretation:
    """I extended by the enumeration's fresh constant, if one is needed."""
    for f in ground_signature(R.signature):
        if f not in R.signature:
            I = I.with_constant(f)
    return I


def oracle_cross_check(R: Trs, I: LinearInterpretation, verdict: Verdict, max_size: int, step_cap: int) -> dict:
    """Brute-force derivation lengths compared with the certified bound."""
    I = ground_interpretation(I, R)
    search = DerivationSearch(R, step_cap)
    violations = []
    for t in enumerate_ground_terms(R.signature, max_size):
        r = search.longest(t)
        if isinstance(r, NonTermination):
            return {"max_size": max_size, "nontermination": str(r)}
        b = interpret_bound(I, t)
        if r > b:
            violations.append(f"{t}: {r} steps > bound {b}")
    table = dc_table(R, max_size, step_cap)
    out = {"max_size": max_size, "dc": table, "bound_violations": violations}
    if verdict.certified and verdict.degree is not None:
        d = verdict.degree
        out["fit_constant"] = _fmt_fraction(max(Fraction(v, n ** d) for n, v in enumerate(table, 1)))
    return out


def _render_check(R, C, verdict, trs_path, cert_path) -> str:
    out = [f"matcert check {trs_path} {cert_path}"]
    out.append(f"goal: {C.goal}   dimension: {C.dimension}   rules: {len(R.rules)}")
    out.append(f"status: {verdict.status.upper()}")
    if verdict.certified:
        if verdict.claim == "complexity":
            out.append(f"claim: derivational complexity in O(n^{verdict.degree})")
            out.append(f"criterion: {verdict.criterion}")
        else:
            out.append("claim: termination")
    for w in verdict.witnesses:
        out.append(f"witness: {w}")
    d = verdict.details
    if "m_max" in d:
        out.append(f"  c = {d['c']}")
        out.append(f"  M_max = {d['m_max']}")
        out.append(f"  char poly (ascending coefficients) = {d['char_poly']}, m = {d['m']}")
        for name in ("triangular", "spectral"):
            r = d[name]
            state = f"accepted, degree {r['degree']}" if r["accepted"] else f"rejected ({r['witness']})"
            out.append(f"  {name}: {state}")
        out.append(f"non-certified diagnostic: exact growth degree of M_max^k = {d['exact_growth_degree']}")
    if verdict.oracle is not None:
        o = verdict.oracle
        if "nontermination" in o:
            out.append(f"oracle: nontermination evidence: {o['nontermination']}")
        else:
            out.append(f"oracle: dc(n) for n = 1..{o['max_size']}: {o['dc']}")
            if "fit_constant" in o:
                out.append(f"oracle: least C with dc(n) <= C*n^{verdict.degree}: {o['fit_constant']}")
            out.append(f"oracle: derivation-bound violations: {len(o['bound_violations'])}")
    out.append("notes:")
    out.extend(f"  - {n}" for n in NOTES)
    return "\n".join(out) + "\n"


def cmd_check(args) -> int:
    try:
        R, C = _load_check_inputs(args.trs, args.cert)
        if C.goal == "complexity":
            verdict = certify_complexity(C.interpretation, R)
        else:
            verdict = certify_termination(C.interpretation, R)
        if args.oracle:
            verdict.oracle = oracle_cross_check(R, C.interpretation, verdict, args.oracle, args.step_cap)
        report = _render_check(R, C, verdict, args.trs, args.cert)
    except MatcertError as e:
        verdict = Verdict(INPUT_ERROR, "none", details={"error": str(e)})
        report = f"matcert check {args.trs} {args.cert}\nstatus: INPUT-ERROR\nerror: {e}\n"
    sys.stdout.write(report)
    if args.json:
        Path(args.json).write_text(verdict.to_json(), encoding="utf-8")
    return verdict.exit_code


def slope_exceeds(prev, cur, n, d) -> bool:
    """Local log-log slope of dc between n-1 and n is at least d + 1/2."""
    if cur == 0:
        return False
    if prev == 0:
        return True
    # (cur/prev)^2 >= (n/(n-1))^(2d+1), exactly
    return Fraction(cur, prev) ** 2 >= Fraction(n, n - 1) ** (2 * d + 1)


def degree_fit(table: list[int], d: int) -> tuple[Fraction, bool]:
    """Least C0 with dc(n) <= C0*n^d, and whether the fit looks consistent.

    Heuristic: the fit is flagged when the last three local slopes all
    exceed d + 1/2, i.e. the data keeps outgrowing n^d.
    """
    c0 = max(Fraction(v, n ** d) for n, v in enumerate(table, 1))
    N = len(table)
    if N < 4:
        return c0, True
    steep = [slope_exceeds(table[n - 2], table[n - 1], n, d) for n in range(N - 2, N + 1)]
    return c0, not all(steep)


def cmd_oracle(args) -> int:
    try:
        R = parse_trs(_read(args.trs))
        if args.max_size < 1 or args.step_cap < 1:
            raise InputError("--max-size and --step-cap must be positive")
    except InputError as e:
        sys.stdout.write(f"matcert oracle {args.trs}\nerror: {e}\n")
        return 2
    out = [f"matcert oracle {args.trs}   max size {args.max_size}   step cap {args.step_cap}"]
    gsig = ground_signature(R.signature)
    fresh = [f for f in gsig if f not in R.signature]
    if fresh:
        out.append(f"fresh constant added for enumeration: {fresh[0]}")
    table = dc_table(R, args.max_size, args.step_cap)
    if isinstance(table, NonTermination):
        out.append(f"nontermination evidence ({table.reason}): {' -> '.join(str(t) for t in table.trace)}")
        sys.stdout.write("\n".join(out) + "\n")
        return 1
    out.append("   n   dc(n) [steps]")
    out.extend(f"{n:4d}   {v}" for n, v in enumerate(table, 1))
    code = 0
    if args.degree is not None:
        c0, ok = degree_fit(table, args.degree)
        out.append(f"least C0 with dc(n) <= C0*n^{args.degree} for n <= {args.max_size}: {_fmt_fraction(c0)}")
        out.append(
            "heuristic growth check (not a proof): "
            + ("consistent" if ok else f"dc keeps outgrowing n^{args.degree}")
        )
        code = 0 if ok else 1
    sys.stdout.write("\n".join(out) + "\n")
    return code


def analyze_certificate(C: Certificate, max_len: int, budget: int = DEFAULT_BUDGET) -> dict:
    cs = coefficient_set(C.interpretation)
    m_max = cs.m_max
    tri = check_triangular(m_max)
    spec = complexity_degree_spectral(m_max)
    chi = spec.details["char_poly"]
    k = max_len
    truncated = False
    try:
        report = product_growth_measure(cs, k, budget)
    except BudgetExceeded:
        k = affordable_length(cs, max_len, budget)
        report = product_growth_measure(cs, k, budget)
        report.truncated = truncated = True
    return {
        "dimension": C.dimension,
        "coefficients": [M.to_rows() for M in cs.matrices],
        "c": constant_bound(cs),
        "m_max": m_max.to_rows(),
        "triangular": {"accepted": tri.accepted, "degree": tri.degree, "witness": tri.witness},
        "spectral": {"accepted": spec.accepted, "degree": spec.degree, "witness": spec.witness},
        "char_poly": list(chi.coeffs),
        "m": multiplicity_of_root_one(chi),
        "exact_growth_degree": str(exact_growth_degree(m_max)),
        "growth": report.to_dict(),
        "requested_len": max_len,
        "truncated": truncated,
    }


def _render_analyze(a: dict, path) -> str:
    out = [f"matcert analyze {path}", f"dimension: {a['dimension']}   distinct coefficients: {len(a['coefficients'])}"]
    out.append(f"M_max = {a['m_max']}")
    for name in ("triangular", "spectral"):
        r = a[name]
        state = f"accepted, degree {r['degree']}" if r["accepted"] else f"rejected ({r['witness']})"
        out.append(f"{name} criterion: {state}")
    out.append(f"char poly (ascending coefficients): {a['char_poly']}   multiplicity of eigenvalue 1: m = {a['m']}")
    out.append(f"exact growth degree of M_max^k (non-certified): {a['exact_growth_degree']}")
    g = a["growth"]
    if a["truncated"]:
        out.append(f"PARTIAL: product enumeration budget exceeded, table cut at k = {g['max_len']} "
                   f"(requested {a['requested_len']})")
    out.append("   k   max product norm   norm of M_max^k")
    for k, (p, q) in enumerate(zip(g["product_norms"], g["mmax_power_norms"]), 1):
        out.append(f"{k:4d}   {p:16d}   {q:15d}")
    if g["unbounded"]:
        out.append("product growth estimate: unbounded (faster than any degree <= dimension)")
    elif g["eventually_zero"]:
        out.append("product growth estimate: products vanish")
    else:
        out.append(f"product growth estimate: degree {g['degree_estimate']} (estimate, not a certificate)")
    if g["approximation_gap_at"]:
        ks = g["approximation_gap_at"]
        out.append(f"approximation gap: M_max^k overestimates every product at {len(ks)} of {g['max_len']} lengths "
                   f"(k = {', '.join(map(str, ks))})")
    else:
        out.append("approximation gap: none (M_max^k attains the product maximum)")
    return "\n".join(out) + "\n"


def cmd_analyze(args) -> int:
    try:
        C = parse_certificate(_read(args.cert))
        if args.max_len < 1:
            raise InputError("--max-len must be positive")
    except InputError as e:
        sys.stdout.write(f"matcert analyze {args.cert}\nerror: {e}\n")
        return 2
    a = analyze_certificate(C, args.max_len, args.budget)
    sys.stdout.write(_render_analyze(a, args.cert))
    if args.json:
        Path(args.json).write_text(json.dumps(a, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="matcert", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="check a certificate against a rewrite system")
    c.add_argument("trs")
    c.add_argument("cert")
    c.add_argument("--json", metavar="PATH", help="write the verdict as JSON")
    c.add_argument("--oracle", metavar="N", type=int, default=0,
                   help="also cross-check against brute-force derivations of ground terms of size <= N")
    c.add_argument("--step-cap", type=int, default=10_000)
    c.set_defaults(func=cmd_check)

    o = sub.add_parser("oracle", help="brute-force derivational complexity table")
    o.add_argument("trs")
    o.add_argument("--max-size", type=int, required=True)
    o.add_argument("--step-cap", type=int, required=True)
    o.add_argument("--degree", type=int)
    o.set_defaults(func=cmd_oracle)

    a = sub.add_parser("analyze", help="growth diagnostics for a certificate's coefficients")
    a.add_argument("cert")
    a.add_argument("--max-len", type=int, default=8)
    a.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    a.add_argument("--json", metavar="PATH")
    a.set_defaults(func=cmd_analyze)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse usage errors are input errors
        return 0 if e.code == 0 else 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
