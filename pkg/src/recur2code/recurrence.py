"""Second-order linear recurrences g_{n+2} = a g_{n+1} + b g_n over F_q.

The characteristic polynomial P(a,b;x) = x^2 - a x - b falls into one of
three cases, and each gives a closed form for the generic solution:

* irreducible over F_q, roots alpha, alpha^q in F_{q^2}: lambda alpha^n + lambda^q alpha^{qn}
* two distinct roots in F_q: lambda alpha^n + mu beta^n
* a square (x - alpha)^2: (lambda + mu n) alpha^n

From the roots we read off the period N of every solution and the rank e,
the spacing between the zeros of any solution that has zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .exceptions import FieldError, InvariantViolation
from .gf import (
    FieldElement,
    GaloisField,
    QuadraticExtension,
    build_quadratic_extension,
    mult_order,
)

__all__ = [
    "Case",
    "CharFactorization",
    "RecurrenceParams",
    "SequenceProfile",
    "SolutionCoeffs",
    "classify",
    "closed_form",
    "companion_order",
    "generate_sequence",
    "period",
    "profile",
    "rank",
    "solve_coefficients",
    "zero_positions",
]


class Case(str, Enum):
    IRREDUCIBLE = "irreducible"
    DISTINCT = "distinct"
    REPEATED = "repeated"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RecurrenceParams:
    """Coefficients of g_{n+2} = a g_{n+1} + b g_n; ``b`` must be nonzero."""

    a: FieldElement
    b: FieldElement

    def __post_init__(self):
        if self.a.field != self.b.field:
            raise FieldError("a and b must belong to the same field")
        if self.b.is_zero():
            raise FieldError("b must be nonzero: the recurrence needs x^2 - a x - b with b != 0")

    @property
    def field(self) -> GaloisField:
        return self.a.field


@dataclass(frozen=True)
class CharFactorization:
    """Factorisation of x^2 - a x - b.

    ``alpha`` and ``beta`` are the two roots; for IRREDUCIBLE they live in the
    quadratic extension (``beta == alpha**q``), for REPEATED ``beta == alpha``.
    The root with the smaller discrete log is ``alpha``.
    """

    case: Case
    alpha: FieldElement
    beta: FieldElement
    extension: QuadraticExtension | None = None

    @property
    def root_field(self) -> GaloisField:
        return self.alpha.field


@dataclass(frozen=True)
class SequenceProfile:
    N: int
    e: int
    K: int

    def __post_init__(self):
        if self.N % self.e or self.K * self.e != self.N:
            raise InvariantViolation(f"rank {self.e} does not divide period {self.N}")


@dataclass(frozen=True)
class SolutionCoeffs:
    lam: FieldElement
    mu: FieldElement


def _check_params(field: GaloisField, params: RecurrenceParams) -> None:
    if params.field != field:
        raise FieldError("recurrence coefficients are not elements of the given field")


def _roots(field: GaloisField, a_raw: int, b_raw: int) -> list[int]:
    """Raw values x with x^2 - a x - b = 0, by evaluating at every element."""
    xs = np.arange(field.order, dtype=np.int64)
    sq = (2 * xs) % field.order
    val = field.vadd(field.vadd(sq, field.vneg(field.vmul(xs, a_raw))), field.rneg(b_raw))
    return [int(x) for x in xs[val == field.zero_log]]


@lru_cache(maxsize=4096)
def _classify(field: GaloisField, a_raw: int, b_raw: int) -> CharFactorization:
    roots = _roots(field, a_raw, b_raw)
    if len(roots) == 2:
        alpha, beta = field.element(roots[0]), field.element(roots[1])
        return CharFactorization(Case.DISTINCT, alpha, beta)
    if len(roots) == 1:
        alpha = field.element(roots[0])
        return CharFactorization(Case.REPEATED, alpha, alpha)
    if roots:
        raise InvariantViolation(f"quadratic has {len(roots)} roots")
    ext = build_quadratic_extension(field)
    big = ext.ext
    a_ext = ext.embed(field.element(a_raw)).raw
    b_ext = ext.embed(field.element(b_raw)).raw
    roots = _roots(big, a_ext, b_ext)
    if len(roots) != 2:
        raise InvariantViolation(f"irreducible quadratic has {len(roots)} roots in F_q^2")
    alpha, beta = big.element(roots[0]), big.element(roots[1])
    if alpha**field.q != beta:
        raise InvariantViolation("extension roots are not Frobenius conjugates")
    return CharFactorization(Case.IRREDUCIBLE, alpha, beta, ext)


def classify(field: GaloisField, params: RecurrenceParams) -> CharFactorization:
    """Factor P(a,b;x) = x^2 - a x - b by exhaustive root search.

    Roots are looked for in F_q first and then in F_{q^2}, so characteristic 2
    needs no special handling.
    """
    _check_params(field, params)
    return _classify(field, params.a.raw, params.b.raw)


def period(field: GaloisField, params: RecurrenceParams) -> int:
    fact = classify(field, params)
    if fact.case is Case.IRREDUCIBLE:
        return mult_order(fact.alpha)
    if fact.case is Case.DISTINCT:
        return math.lcm(mult_order(fact.alpha), mult_order(fact.beta))
    return field.p * mult_order(fact.alpha)


def rank(field: GaloisField, params: RecurrenceParams) -> int:
    """Order of beta/alpha; for a repeated root the characteristic p."""
    fact = classify(field, params)
    if fact.case is Case.REPEATED:
        return field.p
    return mult_order(fact.beta / fact.alpha)


def profile(field: GaloisField, params: RecurrenceParams) -> SequenceProfile:
    N = period(field, params)
    e = rank(field, params)
    return SequenceProfile(N, e, N // e)


def solve_coefficients(fact: CharFactorization, g0: FieldElement, g1: FieldElement) -> SolutionCoeffs:
    """Coefficients of the closed form matching the initial state (g0, g1)."""
    if g0.is_zero() and g1.is_zero():
        raise ValueError("initial state (0, 0) gives the zero sequence")
    if fact.case is Case.REPEATED:
        lam = g0
        mu = g1 / fact.alpha - g0
        coeffs = SolutionCoeffs(lam, mu)
    else:
        if fact.case is Case.IRREDUCIBLE:
            g0, g1 = fact.extension.embed(g0), fact.extension.embed(g1)
        alpha, beta = fact.alpha, fact.beta
        d = alpha - beta
        coeffs = SolutionCoeffs((g1 - beta * g0) / d, (alpha * g0 - g1) / d)
        if fact.case is Case.IRREDUCIBLE and coeffs.mu != coeffs.lam ** fact.extension.q:
            raise InvariantViolation("irreducible solution coefficients are not conjugate")
    return coeffs


def closed_form(fact: CharFactorization, coeffs: SolutionCoeffs, n: int) -> FieldElement:
    """g_n from the closed form; lands in F_q in every case."""
    alpha = fact.alpha
    if fact.case is Case.REPEATED:
        return (coeffs.lam + coeffs.mu * n) * alpha**n
    value = coeffs.lam * alpha**n + coeffs.mu * fact.beta**n
    if fact.case is Case.IRREDUCIBLE:
        return fact.extension.restrict(value)
    return value


def generate_sequence(
    field: GaloisField,
    params: RecurrenceParams,
    g0: FieldElement,
    g1: FieldElement,
    length: int,
) -> list[FieldElement]:
    """First ``length`` terms of g_{n+2} = a g_{n+1} + b g_n."""
    _check_params(field, params)
    if length < 0:
        raise ValueError("length must be non-negative")
    a, b = params.a.raw, params.b.raw
    x, y = g0.raw, g1.raw
    out = []
    for _ in range(length):
        out.append(x)
        x, y = y, field.radd(field.rmul(a, y), field.rmul(b, x))
    return [field.element(v) for v in out]


def zero_positions(field: GaloisField, params: RecurrenceParams, g0: FieldElement, g1: FieldElement) -> set[int]:
    """Indices n in [0, N) with g_n = 0."""
    if g0.is_zero() and g1.is_zero():
        raise ValueError("initial state (0, 0) gives the zero sequence")
    N = period(field, params)
    seq = generate_sequence(field, params, g0, g1, N)
    return {n for n, g in enumerate(seq) if g.is_zero()}


def companion_order(field: GaloisField, params: RecurrenceParams) -> int:
    """Order of [[0, 1], [b, a]] in GL_2(F_q), by repeated multiplication."""
    _check_params(field, params)
    a, b = params.a.raw, params.b.raw
    add, mul = field.radd, field.rmul
    zero, one = field.zero_log, 0
    # rows of M^t; start from M itself
    m00, m01, m10, m11 = zero, one, b, a
    t = 1
    limit = field.q * field.q
    while not (m00 == one and m11 == one and m01 == zero and m10 == zero):
        # M^{t+1} = M^t . M, with M = [[0, 1], [b, a]]
        m00, m01 = mul(m01, b), add(m00, mul(m01, a))
        m10, m11 = mul(m11, b), add(m10, mul(m11, a))
        t += 1
        if t > limit:
            raise InvariantViolation("companion matrix order exceeds q^2")
    return t
