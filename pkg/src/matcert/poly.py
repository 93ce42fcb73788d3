"""Univariate polynomials with exact coefficients, and their use on matrices.

Coefficients are stored in ascending degree order; the zero polynomial is the
empty tuple. Integral coefficients are kept as ``int``, everything else as
``Fraction``, so equal polynomials always compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NonIntegralPolynomial, NonSquareMatrix, ZeroPolynomial
from .matrix import GuardedMatrix, add, identity, mul, scale, zeros


def _normalize(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple = ()

    def __post_init__(self):
        cs = [_normalize(Fraction(c) if not isinstance(c, int) else c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def x(cls) -> Polynomial:
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls((c,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        return poly_add(self, other)

    def __mul__(self, other):
        return poly_mul(self, other)

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return poly_add(self, -other)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else f"{mag}*") + ("x" if k == 1 else f"x^{k}")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def poly(coeffs: Sequence) -> Polynomial:
    return Polynomial(tuple(coeffs))


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    n = max(len(p.coeffs), len(q.coeffs))
    a = p.coeffs + (0,) * (n - len(p.coeffs))
    b = q.coeffs + (0,) * (n - len(q.coeffs))
    return Polynomial(tuple(x + y for x, y in zip(a, b)))


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.is_zero or q.is_zero:
        return Polynomial()
    out = [0] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return Polynomial(tuple(out))


def eval_at_matrix(p: Polynomial, M: GuardedMatrix) -> GuardedMatrix:
    """Sum of c_k * M^k, with M^0 the identity. Horner scheme, exact."""
    if not M.is_square or M.rows < 1:
        raise NonSquareMatrix("eval_at_matrix", M.shape)
    if not p.is_integral:
        raise NonIntegralPolynomial(f"eval_at_matrix needs integral coefficients, got {p}")
    n = M.rows
    I = identity(n)
    acc = zeros(n)
    for c in reversed(p.coeffs):
        acc = add(mul(acc, M), scale(c, I))
    return acc


def char_poly(M: GuardedMatrix) -> Polynomial:
    """det(xI - M) by the Faddeev-LeVerrier recurrence over the rationals.

    With A = M, N_0 = 0 and c_n = 1, for k = 1..n::

        N_k     = A N_{k-1} + c_{n-k+1} I
        c_{n-k} = -tr(A N_k) / k
    """
    if not M.is_square:
        raise NonSquareMatrix("char_poly", M.shape)
    n = M.rows
    if n == 0:
        return Polynomial((1,))
    I = identity(n)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    N = zeros(n)
    for k in range(1, n + 1):
        N = add(mul(M, N), scale(coeffs[n - k + 1], I))
        AN = mul(M, N)
        trace = sum(AN[i, i] for i in range(n))
        coeffs[n - k] = -Fraction(trace) / k
    if any(c.denominator != 1 for c in coeffs):
        raise AssertionError(f"characteristic polynomial came out non-integral: {coeffs}")
    return Polynomial(tuple(c.numerator for c in coeffs))


def cayley_hamilton_check(M: GuardedMatrix) -> bool:
    Z = eval_at_matrix(char_poly(M), M)
    return all(x == 0 for x in Z.entries)


def synthetic_div_by_x_minus_one(p: Polynomial) -> tuple[Polynomial, object]:
    """Return (q, r) with p = q*(x - 1) + r."""
    if p.is_zero:
        raise ZeroPolynomial("synthetic division of the zero polynomial")
    # descending: b_{d-1} = a_d, b_{k-1} = a_k + b_k; remainder = a_0 + b_0
    desc = list(reversed(p.coeffs))
    acc = 0
    out = []
    for a in desc:
        acc = acc + a
        out.append(acc)
    remainder = out.pop()
    return Polynomial(tuple(reversed(out))), remainder


def multiplicity_of_root_one(p: Polynomial) -> int:
    if p.is_zero:
        raise ZeroPolynomial("multiplicity of a root of the zero polynomial")
    if not p.is_integral:
        raise NonIntegralPolynomial(f"expected integral coefficients, got {p}")
    m = 0
    while p.degree >= 1:
        q, r = synthetic_div_by_x_minus_one(p)
        if r != 0:
            break
        m += 1
        p = q
    return m
