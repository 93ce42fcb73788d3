"""First-order terms, rewrite systems, and brute-force derivation oracles.

Contexts are not reified: a position is a tuple of 0-based argument indices
and rewriting replaces the subterm at a position. Derivation lengths are
counted in steps (a normal form has length 0).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

from .errors import InputError

FRESH_CONSTANT = "c"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        if not self.args:
            return self.symbol
        return f"{self.symbol}({', '.join(str(a) for a in self.args)})"


Term = Union[Var, App]
Substitution = Mapping[str, Term]


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    out = set()
    for a in t.args:
        out |= term_vars(a)
    return out


def is_ground(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    return all(is_ground(a) for a in t.args)


def symbols_of(t: Term, into: dict | None = None, where: str = "term") -> dict[str, int]:
    """Collect symbol arities; raise :class:`InputError` on an arity clash."""
    sig = {} if into is None else into
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, App):
            k = len(s.args)
            if sig.setdefault(s.symbol, k) != k:
                raise InputError(
                    f"symbol {s.symbol!r} used with arity {k} and {sig[s.symbol]}", where
                )
            stack.extend(s.args)
    return sig


def term_key(t: Term):
    """Total order on terms: size first, then printed form."""
    return (term_size(t), str(t))


def substitute(t: Term, sigma: Substitution) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if not t.args:
        return t
    return App(t.symbol, tuple(substitute(a, sigma) for a in t.args))


def match(pattern: Term, subject: Term) -> dict[str, Term] | None:
    """The unique substitution s with pattern*s == subject, or None."""
    sigma: dict[str, Term] = {}
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            bound = sigma.get(p.name)
            if bound is None:
                sigma[p.name] = s
            elif bound != s:
                return None
        elif isinstance(s, Var) or p.symbol != s.symbol or len(p.args) != len(s.args):
            return None
        else:
            stack.extend(zip(p.args, s.args))
    return sigma


def positions(t: Term) -> Iterator[tuple[int, ...]]:
    yield ()
    if isinstance(t, App):
        for i, a in enumerate(t.args):
            for p in positions(a):
                yield (i,) + p


def subterm_at(t: Term, pos: tuple[int, ...]) -> Term:
    for i in pos:
        t = t.args[i]
    return t


def replace_at(t: Term, pos: tuple[int, ...], s: Term) -> Term:
    if not pos:
        return s
    i, rest = pos[0], pos[1:]
    args = list(t.args)
    args[i] = replace_at(args[i], rest, s)
    return App(t.symbol, tuple(args))


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if isinstance(self.lhs, Var):
            raise InputError(f"variable left-hand side in rule {self}")
        extra = term_vars(self.rhs) - term_vars(self.lhs)
        if extra:
            raise InputError(
                f"right-hand side variables {sorted(extra)} do not occur on the left in rule {self}"
            )

    def __str__(self):
        return f"{self.lhs} -> {self.rhs}"


@dataclass(frozen=True)
class Trs:
    rules: tuple = ()
    signature: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        sig = dict(self.signature)
        declared = dict(sig)
        for r in self.rules:
            symbols_of(r.lhs, sig, where=str(r))
            symbols_of(r.rhs, sig, where=str(r))
        for f, k in declared.items():
            if sig[f] != k:
                raise InputError(f"signature declares {f}/{k} but rules use arity {sig[f]}")
        object.__setattr__(self, "signature", dict(sorted(sig.items())))

    def __hash__(self):
        return hash((self.rules, tuple(self.signature.items())))


def rewrite_successors(R: Trs, t: Term) -> set[Term]:
    out = set()
    for pos in positions(t):
        sub = subterm_at(t, pos)
        if isinstance(sub, Var):
            continue
        for rule in R.rules:
            sigma = match(rule.lhs, sub)
            if sigma is not None:
                out.add(replace_at(t, pos, substitute(rule.rhs, sigma)))
    return out


@dataclass(frozen=True)
class NonTermination:
    """Evidence that a derivation search did not terminate within bounds.

    ``reason`` is ``"cycle"`` (the last term of ``trace`` already occurs
    earlier in it) or ``"step-cap"`` (a derivation longer than the cap).
    """

    reason: str
    trace: tuple

    def __str__(self):
        return f"{self.reason}: " + " -> ".join(str(t) for t in self.trace)


class DerivationSearch:
    """Memoized longest-derivation search over one rewrite system.

    The memo table is shared by every start term, so scanning many start
    terms (as :func:`dc_oracle` does) reuses earlier work.
    """

    def __init__(self, R: Trs, step_cap: int):
        if step_cap <= 0:
            raise ValueError("step_cap must be positive")
        self.R = R
        self.step_cap = step_cap
        self.memo: dict[Term, int] = {}
        self._succ: dict[Term, list[Term]] = {}

    def successors(self, t: Term) -> list[Term]:
        s = self._succ.get(t)
        if s is None:
            s = sorted(rewrite_successors(self.R, t), key=term_key)
            self._succ[t] = s
        return s

    def longest(self, t: Term) -> int | NonTermination:
        if t in self.memo:
            return self.memo[t]
        cap = self.step_cap
        # frame: [term, successor iterator, best length so far]
        frames = [[t, iter(self.successors(t)), 0]]
        on_stack = {t}
        while frames:
            frame = frames[-1]
            node, succs = frame[0], frame[1]
            pushed = False
            for s in succs:
                if s in self.memo:
                    frame[2] = max(frame[2], self.memo[s] + 1)
                    continue
                if s in on_stack:
                    path = [f[0] for f in frames]
                    return NonTermination("cycle", tuple(path[path.index(s):]) + (s,))
                if len(frames) > cap:
                    return NonTermination("step-cap", tuple(f[0] for f in frames) + (s,))
                frames.append([s, iter(self.successors(s)), 0])
                on_stack.add(s)
                pushed = True
                break
            if pushed:
                continue
            frames.pop()
            on_stack.discard(node)
            best = frame[2]
            if best + len(frames) > cap:
                return NonTermination("step-cap", tuple(f[0] for f in frames) + (node,))
            self.memo[node] = best
            if frames:
                frames[-1][2] = max(frames[-1][2], best + 1)
        return self.memo[t]


def longest_derivation_steps(R: Trs, t: Term, step_cap: int) -> int | NonTermination:
    return DerivationSearch(R, step_cap).longest(t)


def fresh_constant(signature: Mapping[str, int]) -> str:
    name = FRESH_CONSTANT
    i = 0
    while name in signature:
        i += 1
        name = f"{FRESH_CONSTANT}_{i}"
    return name


def ground_signature(signature: Mapping[str, int]) -> dict[str, int]:
    """The signature used for ground enumeration: a fresh constant is added
    when the signature has none."""
    sig = dict(signature)
    if not any(k == 0 for k in sig.values()):
        sig[fresh_constant(sig)] = 0
    return dict(sorted(sig.items()))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways to write ``total`` as ``parts`` positive integers."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_ground_terms(signature: Mapping[str, int], size_bound: int) -> list[Term]:
    """All ground terms of size <= size_bound, ordered by size, then by
    symbol name, then lexicographically by argument sizes and arguments."""
    if size_bound < 1:
        raise ValueError("size_bound must be >= 1")
    sig = ground_signature(signature)
    by_size: dict[int, list[Term]] = {}
    for size in range(1, size_bound + 1):
        level = []
        for f, k in sig.items():
            for comp in _compositions(size - 1, k):
                pools = [by_size[s] for s in comp]
                for args in itertools.product(*pools):
                    level.append(App(f, args))
        by_size[size] = level
    return [t for size in range(1, size_bound + 1) for t in by_size[size]]


def dc_oracle(R: Trs, n: int, step_cap: int, search: DerivationSearch | None = None) -> int | NonTermination:
    """Longest derivation (in steps) from any ground term of size <= n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    search = search or DerivationSearch(R, step_cap)
    best = 0
    for t in enumerate_ground_terms(R.signature, n):
        r = search.longest(t)
        if isinstance(r, NonTermination):
            return r
        best = max(best, r)
    return best


def dc_table(R: Trs, max_size: int, step_cap: int) -> list[int] | NonTermination:
    """dc_oracle for n = 1..max_size, sharing one memo table."""
    search = DerivationSearch(R, step_cap)
    out = []
    for n in range(1, max_size + 1):
        r = dc_oracle(R, n, step_cap, search)
        if isinstance(r, NonTermination):
            return r
        out.append(r)
    return out
