"""Exhaustive invariant suites over small fields (the ``selftest`` command).

Each suite walks every (a, b) with b != 0 and compares a closed-form claim
with an independent computation: companion-matrix powering for the period,
codeword enumeration for weights, polynomial division for the check
polynomial, term-by-term iteration for the closed-form solution.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Iterator

import numpy as np

from .codes import (
    CodeReport,
    analyze,
    build_code,
    check_polynomials,
    generator_matrix,
)
from .exceptions import InvariantViolation
from .gf import GaloisField, field_for_order, format_element, mult_order, prime_power
from .recurrence import (
    Case,
    RecurrenceParams,
    classify,
    closed_form,
    companion_order,
    generate_sequence,
    profile,
    solve_coefficients,
)

__all__ = ["PairResult", "SuiteResult", "prime_powers_upto", "run_selftest", "sweep_field"]

# exhaustive closed-form vs iteration check is O(q^2 N) Python work per pair
SEQUENCE_CHECK_MAX_Q = 9
CHECK_POLY_MAX_N = 2500


def prime_powers_upto(max_q: int) -> list[int]:
    out = []
    for q in range(2, max_q + 1):
        try:
            prime_power(q)
        except ValueError:
            continue
        out.append(q)
    return out


@dataclass
class PairResult:
    """Raw facts about one (a, b) gathered by :func:`sweep_field`."""

    q: int
    p: int
    a: str
    b: str
    case: str
    N: int
    e: int
    K: int
    companion: int
    alpha_order: int
    neg_b_order: int
    reconstructs: bool
    report: CodeReport
    zero_sizes: frozenset
    single_residue_class: bool
    check_poly_ok: bool | None
    column_form_ok: bool


@dataclass
class SuiteResult:
    counts: Counter = dc_field(default_factory=Counter)
    failures: list[str] = dc_field(default_factory=list)

    def record(self, suite: str, ok: bool, detail: str) -> None:
        self.counts[suite] += 1
        if not ok:
            self.failures.append(f"[{suite}] {detail}")

    @property
    def ok(self) -> bool:
        return not self.failures


def _reconstructs(field: GaloisField, params: RecurrenceParams) -> bool:
    """Expanding the factorisation gives back x^2 - a x - b."""
    fact = classify(field, params)
    s, prod = fact.alpha + fact.beta, fact.alpha * fact.beta
    if fact.case is Case.IRREDUCIBLE:
        ext = fact.extension
        if ext.contains(fact.alpha):
            return False
        s, prod = ext.restrict(s), ext.restrict(prod)
    elif fact.case is Case.DISTINCT and fact.alpha == fact.beta:
        return False
    return s == params.a and prod == -params.b


def _zero_structure(code, e: int) -> tuple[frozenset, bool]:
    """Zero-set sizes over all nonzero states, and whether each zero set is one class mod e."""
    F, N, q = code.field, code.N, code.field.q
    scal = np.arange(q, dtype=np.int64)
    A = F.vmul(scal[:, None], code.G[0][None, :])
    B = F.vneg(F.vmul(scal[:, None], code.G[1][None, :]))
    n = np.arange(N)
    sizes, single = set(), True
    for lam in range(q):
        mask = A[lam][None, :] == B
        if lam == F.zero_log:
            mask = mask[: F.order]  # drop mu = 0
        cnt = mask.sum(axis=1)
        sizes.update(int(c) for c in cnt)
        has = cnt > 0
        if has.any():
            first = mask[has].argmax(axis=1)
            off = (n[None, :] - first[:, None]) % e != 0
            single &= not bool((mask[has] & off).any())
    return frozenset(sizes), single


def _sequence_agrees(field: GaloisField, params: RecurrenceParams, N: int) -> bool:
    fact = classify(field, params)
    for g0 in field.elements():
        for g1 in field.elements():
            if g0.is_zero() and g1.is_zero():
                continue
            coeffs = solve_coefficients(fact, g0, g1)
            seq = generate_sequence(field, params, g0, g1, N + 2)
            if seq[N] != g0 or seq[N + 1] != g1:
                return False
            if any(closed_form(fact, coeffs, i) != g for i, g in enumerate(seq)):
                return False
    return True


def sweep_field(q: int, *, sequence_check: bool | None = None) -> Iterator[PairResult]:
    """Analyse every (a, b) over F_q with brute force forced on."""
    field = field_for_order(q)
    if sequence_check is None:
        sequence_check = q <= SEQUENCE_CHECK_MAX_Q
    for a in field.elements():
        for b in field.nonzero():
            params = RecurrenceParams(a, b)
            fact = classify(field, params)
            prof = profile(field, params)
            report = analyze(field, params, brute_force=True)
            code = build_code(field, params)
            sizes, single = _zero_structure(code, prof.e)
            cp_ok = None
            if prof.N <= CHECK_POLY_MAX_N:
                try:
                    check_polynomials(field, params, prof.N)
                    cp_ok = True
                except InvariantViolation:
                    cp_ok = False
            try:
                generator_matrix(code)
                form_ok = True
            except InvariantViolation:
                form_ok = False
            if sequence_check and not _sequence_agrees(field, params, prof.N):
                raise InvariantViolation(f"closed form disagrees with iteration at q={q}, a={a}, b={b}")
            yield PairResult(
                q=q,
                p=field.p,
                a=format_element(a),
                b=format_element(b),
                case=fact.case.value,
                N=prof.N,
                e=prof.e,
                K=prof.K,
                companion=companion_order(field, params),
                alpha_order=mult_order(fact.alpha),
                neg_b_order=mult_order(-b),
                reconstructs=_reconstructs(field, params),
                report=report,
                zero_sizes=sizes,
                single_residue_class=single,
                check_poly_ok=cp_ok,
                column_form_ok=form_ok,
            )


def check_pair(r: PairResult, result: SuiteResult) -> None:
    q, N, e, K = r.q, r.N, r.e, r.K
    tag = f"q={q} a={r.a} b={r.b}"
    rep = r.report
    result.record("period=companion", N == r.companion, f"{tag}: N={N}, companion={r.companion}")
    if r.case == "irreducible":
        ok = ((q + 1) * r.neg_b_order) % N == 0
    elif r.case == "distinct":
        ok = (q - 1) % N == 0
    else:
        ok = N == r.p * r.alpha_order
    result.record("period-bounds", ok, f"{tag}: {r.case} N={N}")
    result.record("factorization", r.reconstructs, f"{tag}: roots do not multiply back")
    result.record("rank|period", N % e == 0, f"{tag}: e={e} N={N}")
    expected_sizes = {0, K} if r.case != "repeated" else {0, N // r.p}
    result.record("zero-sets", r.zero_sizes <= expected_sizes and r.single_residue_class, f"{tag}: sizes {sorted(r.zero_sizes)}")
    result.record("two-weights", len(rep.distribution) <= 2, f"{tag}: {rep.distribution}")
    dist = rep.distribution
    result.record(
        "pless-moments",
        dist.total() == q * q - 1 and dist.moment(1) == q * (q - 1) * N,
        f"{tag}: {dist}",
    )
    if r.case == "irreducible":
        ok = e <= q + 1 and rep.is_one_weight == (e == q + 1)
        result.record("one-weight-dichotomy", ok, f"{tag}: e={e} one_weight={rep.is_one_weight}")
    ok = rep.d_dual in (2, 3) and rep.is_mds == rep.is_projective == (rep.d == N - 1)
    result.record("duality", ok, f"{tag}: d={rep.d} d_dual={rep.d_dual}")
    result.record("mds<=>K=1", rep.is_mds == (K == 1), f"{tag}: mds={rep.is_mds} K={K}")
    result.record("column-form", r.column_form_ok, f"{tag}: generator columns")
    if r.check_poly_ok is not None:
        result.record("check-polynomial", r.check_poly_ok, f"{tag}: g*h != x^N - 1")


def run_selftest(max_q: int, *, echo=None) -> SuiteResult:
    """Run every suite on each prime power q <= max_q."""
    if max_q < 2:
        raise ValueError("max_q must be at least 2")
    result = SuiteResult()
    for q in prime_powers_upto(max_q):
        before = sum(result.counts.values())
        pairs = 0
        try:
            for r in sweep_field(q):
                check_pair(r, result)
                pairs += 1
        except InvariantViolation as exc:
            result.failures.append(f"[analysis] q={q}: {exc}")
        if echo:
            echo(f"q={q}: {pairs} pairs, {sum(result.counts.values()) - before} checks")
    return result

