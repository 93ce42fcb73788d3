"""Reading and writing rewrite systems and certificates.

TRS files use a small TPDB-like dialect::

    ; comment
    (VAR x y)
    (RULES
      plus(zero, y) -> y
      plus(s(x), y) -> s(plus(x, y))
    )

Certificates are JSON::

    {"dimension": 1, "goal": "complexity",
     "interpretation": {"f": {"const": [[1]], "args": [[[1]]]},
                        "c": {"const": [[0]], "args": []}}}
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .errors import InputError
from .interpretation import LinearInterpretation, SymbolInterpretation
from .matrix import GuardedMatrix
from .terms import App, Rule, Term, Trs, Var, term_vars

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
GOALS = ("termination", "complexity")

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>;[^\n]*)|(?P<arrow>->)|(?P<punct>[(),])|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int

    @property
    def where(self):
        return f"{self.line}:{self.col}"


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise InputError(f"unexpected character {text[pos]!r}", f"{line}:{pos - line_start + 1}")
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        for k, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                line_start = pos + k + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _TrsParser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0
        self.variables: set[str] = set()
        self.arity: dict[str, tuple[int, str]] = {}

    @property
    def tok(self):
        return self.toks[self.i]

    def take(self, kind=None, text=None):
        t = self.tok
        if (kind and t.kind != kind) or (text and t.text != text):
            want = text or kind
            got = t.text or "end of input"
            raise InputError(f"expected {want!r}, found {got!r}", t.where)
        self.i += 1
        return t

    def parse(self) -> Trs:
        self.take(text="(")
        head = self.take("ident")
        if head.text == "VAR":
            while self.tok.kind == "ident":
                self.variables.add(self.take().text)
            self.take(text=")")
            self.take(text="(")
            head = self.take("ident")
        if head.text != "RULES":
            raise InputError(f"expected VAR or RULES block, found {head.text!r}", head.where)
        rules = []
        while not (self.tok.kind == "punct" and self.tok.text == ")"):
            start = self.tok
            lhs = self.term()
            self.take("arrow")
            rhs = self.term()
            try:
                rules.append(Rule(lhs, rhs))
            except InputError as e:
                raise InputError(e.message, start.where) from None
        self.take(text=")")
        if self.tok.kind != "eof":
            raise InputError(f"unexpected {self.tok.text!r} after RULES block", self.tok.where)
        return Trs(rules, {f: k for f, (k, _) in self.arity.items()})

    def term(self) -> Term:
        name = self.take("ident")
        if self.tok.text == "(":
            if name.text in self.variables:
                raise InputError(f"variable {name.text!r} applied to arguments", name.where)
            self.take(text="(")
            args = []
            if self.tok.text != ")":
                args.append(self.term())
                while self.tok.text == ",":
                    self.take(text=",")
                    args.append(self.term())
            self.take(text=")")
            return self.symbol(name, tuple(args))
        if name.text in self.variables:
            return Var(name.text)
        return self.symbol(name, ())

    def symbol(self, name, args):
        k = len(args)
        seen = self.arity.setdefault(name.text, (k, name.where))
        if seen[0] != k:
            raise InputError(
                f"symbol {name.text!r} used with arity {k}, but with arity {seen[0]} at {seen[1]}",
                name.where,
            )
        return App(name.text, args)


def parse_trs(text: str) -> Trs:
    return _TrsParser(text).parse()


def print_term(t: Term) -> str:
    return str(t)


def print_trs(R: Trs) -> str:
    variables = sorted(set().union(*(term_vars(r.lhs) for r in R.rules)) if R.rules else ())
    lines = [f"(VAR {' '.join(variables)})" if variables else "(VAR)", "(RULES"]
    lines += [f"  {r.lhs} -> {r.rhs}" for r in R.rules]
    lines.append(")")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Certificate:
    dimension: int
    goal: str
    interpretation: LinearInterpretation


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def _matrix(value, n, path) -> GuardedMatrix:
    if not isinstance(value, list) or len(value) != n:
        raise InputError(f"expected a list of {n} rows", path)
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != n:
            raise InputError(f"expected a row of length {n}", f"{path}[{i}]")
        for j, x in enumerate(row):
            if not _is_int(x):
                raise InputError(f"expected an integer, found {json.dumps(x)}", f"{path}[{i}][{j}]")
            if x < 0:
                raise InputError(f"nonnegativity: entry {x} is negative", f"{path}[{i}][{j}]")
    return GuardedMatrix.from_rows(value)


def certificate_from_dict(data) -> Certificate:
    if not isinstance(data, dict):
        raise InputError("certificate must be a JSON object", "$")
    extra = set(data) - {"dimension", "goal", "interpretation"}
    if extra:
        raise InputError(f"unknown keys {sorted(extra)}", "$")
    for key in ("dimension", "goal", "interpretation"):
        if key not in data:
            raise InputError(f"missing key {key!r}", "$")
    n = data["dimension"]
    if not _is_int(n) or n < 1:
        raise InputError("dimension must be a positive integer", "$.dimension")
    goal = data["goal"]
    if goal not in GOALS:
        raise InputError(f"goal must be one of {list(GOALS)}", "$.goal")
    interp = data["interpretation"]
    if not isinstance(interp, dict):
        raise InputError("interpretation must be an object", "$.interpretation")
    assigns = {}
    for f, entry in interp.items():
        path = f"$.interpretation.{f}"
        if not IDENT.fullmatch(f):
            raise InputError(f"{f!r} is not a valid symbol name", path)
        if not isinstance(entry, dict):
            raise InputError("expected an object with 'const' and 'args'", path)
        extra = set(entry) - {"const", "args"}
        if extra:
            raise InputError(f"unknown keys {sorted(extra)}", path)
        if "const" not in entry:
            raise InputError("missing key 'const'", path)
        const = _matrix(entry["const"], n, f"{path}.const")
        args = entry.get("args", [])
        if not isinstance(args, list):
            raise InputError("args must be a list of matrices", f"{path}.args")
        coeffs = tuple(_matrix(A, n, f"{path}.args[{i}]") for i, A in enumerate(args))
        assigns[f] = SymbolInterpretation(const, coeffs)
    return Certificate(n, goal, LinearInterpretation(n, assigns))


def parse_certificate(text: str) -> Certificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON: {e.msg}", f"{e.lineno}:{e.colno}") from None
    return certificate_from_dict(data)


def certificate_to_dict(C: Certificate) -> dict:
    return {
        "dimension": C.dimension,
        "goal": C.goal,
        "interpretation": {
            f: {"const": si.constant.to_rows(), "args": [A.to_rows() for A in si.coeffs]}
            for f, si in C.interpretation.assigns.items()
        },
    }


def print_certificate(C: Certificate) -> str:
    return json.dumps(certificate_to_dict(C), sort_keys=True, indent=2) + "\n"
