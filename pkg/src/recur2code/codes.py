"""The cyclic code C(a,b,q) and its parameters.

C(a,b,q) is the [N, 2] cyclic code over F_q whose codewords are the
N-periodic solutions of g_{n+2} = a g_{n+1} + b g_n, N the period.  Its
check polynomial is the monic reciprocal of x^2 - a x - b.

Weight distributions are available two ways: from the closed forms
(:func:`weights_theoretical`) and by enumerating all q^2 - 1 nonzero
codewords (:func:`weights_bruteforce`).  :func:`analyze` computes both and
refuses to return a report when they disagree.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any

import numpy as np

from .exceptions import BudgetExceeded, FieldError, InvariantViolation
from .gf import FieldElement, GaloisField, format_element, mult_order
from .recurrence import (
    Case,
    RecurrenceParams,
    SequenceProfile,
    classify,
    period,
    profile,
)

DEFAULT_BUDGET = 10**9

__all__ = [
    "DEFAULT_BUDGET",
    "CheckPolynomials",
    "Classification",
    "CodeReport",
    "GeneratorMatrix",
    "TwoDimCyclicCode",
    "WeightDistribution",
    "analyze",
    "build_code",
    "check_polynomials",
    "dual_distance",
    "generator_matrix",
    "is_mds",
    "is_projective",
    "min_distance",
    "swc_classification",
    "weights_bruteforce",
    "weights_theoretical",
]


@dataclass(frozen=True)
class WeightDistribution:
    """Nonzero codeword counts by Hamming weight, weights increasing."""

    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def from_counts(cls, counts: dict[int, int]) -> WeightDistribution:
        return cls(tuple(sorted((int(w), int(f)) for w, f in counts.items() if f)))

    @property
    def weights(self) -> list[int]:
        return [w for w, _ in self.pairs]

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def total(self) -> int:
        return sum(f for _, f in self.pairs)

    def moment(self, j: int = 1) -> int:
        return sum(f * w**j for w, f in self.pairs)

    def min_weight(self) -> int:
        return self.pairs[0][0]

    def __len__(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        return ", ".join(f"{w}:{f}" for w, f in self.pairs)


@dataclass(frozen=True)
class TwoDimCyclicCode:
    """C(a,b,q) with generator rows from the initial states (1,0) and (0,1).

    ``G`` holds raw field values (see :class:`~recur2code.gf.GaloisField`).
    """

    field: GaloisField
    params: RecurrenceParams
    N: int
    G: np.ndarray = dc_field(repr=False, compare=False)

    def rows(self) -> list[list[FieldElement]]:
        return [[self.field.element(v) for v in row] for row in self.G]

    def codeword(self, lam: FieldElement, mu: FieldElement) -> list[FieldElement]:
        F = self.field
        raw = F.vadd(F.vmul(lam.raw, self.G[0]), F.vmul(mu.raw, self.G[1]))
        return [F.element(v) for v in raw]


@dataclass(frozen=True)
class GeneratorMatrix:
    """``G`` plus the closed-form column description ``predicted = M . G``."""

    G: np.ndarray
    predicted: list[list[FieldElement]]
    change_of_basis: tuple[tuple[FieldElement, FieldElement], tuple[FieldElement, FieldElement]]
    column_form: str


@dataclass(frozen=True)
class Classification:
    u: int
    subfield: bool
    semiprimitive: bool
    trivial_u: bool

    @property
    def outside(self) -> bool:
        return not (self.subfield or self.semiprimitive)


@dataclass(frozen=True)
class CheckPolynomials:
    h: tuple[FieldElement, ...]
    g: tuple[FieldElement, ...]


def _impulse_rows(field: GaloisField, params: RecurrenceParams, N: int) -> np.ndarray:
    a, b = params.a.raw, params.b.raw
    G = np.empty((2, N), dtype=np.int64)
    for i, (x, y) in enumerate([(0, field.zero_log), (field.zero_log, 0)]):
        for n in range(N):
            G[i, n] = x
            x, y = y, field.radd(field.rmul(a, y), field.rmul(b, x))
    return G


def build_code(field: GaloisField, params: RecurrenceParams) -> TwoDimCyclicCode:
    N = period(field, params)
    G = _impulse_rows(field, params, N)
    # shift of the (1,0) row starts at (0, b); shift of the (0,1) row starts at (1, a)
    F, a, b = field, params.a.raw, params.b.raw
    shifted = np.roll(G, -1, axis=1)
    if not np.array_equal(shifted[0], F.vmul(b, G[1])):
        raise InvariantViolation("code is not closed under the cyclic shift")
    if not np.array_equal(shifted[1], F.vadd(G[0], F.vmul(a, G[1]))):
        raise InvariantViolation("code is not closed under the cyclic shift")
    if np.any((G[0] == F.zero_log) & (G[1] == F.zero_log)):
        raise InvariantViolation("generator matrix has a zero column")
    return TwoDimCyclicCode(field, params, N, G)


def generator_matrix(code: TwoDimCyclicCode) -> GeneratorMatrix:
    """Return ``G`` and check it against the closed-form column shape.

    The columns are, up to a fixed invertible change of basis,
    (tr a^n, tr a^{n+1}), (a^n, b^n) or (a^n, n a^n) for the irreducible,
    distinct and repeated cases (a, b the roots).
    """
    F, N = code.field, code.N
    fact = classify(F, code.params)
    alpha = fact.alpha
    if fact.case is Case.IRREDUCIBLE:
        ext = fact.extension
        traces = [ext.trace(alpha**n) for n in range(N + 1)]
        predicted = [traces[:N], traces[1:]]
        form = "(tr(alpha^n), tr(alpha^(n+1)))"
    elif fact.case is Case.DISTINCT:
        predicted = [[alpha**n for n in range(N)], [fact.beta**n for n in range(N)]]
        form = "(alpha^n, beta^n)"
    else:
        powers = [alpha**n for n in range(N)]
        predicted = [powers, [x * n for n, x in enumerate(powers)]]
        form = "(alpha^n, n*alpha^n)"
    # columns 0 and 1 of G are the unit vectors, so M is read off directly
    m = ((predicted[0][0], predicted[0][1]), (predicted[1][0], predicted[1][1]))
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if det.is_zero():
        raise InvariantViolation("closed-form columns are not a change of basis of G")
    P = np.array([[x.raw for x in row] for row in predicted], dtype=np.int64)
    for i in range(2):
        image = F.vadd(F.vmul(m[i][0].raw, code.G[0]), F.vmul(m[i][1].raw, code.G[1]))
        if not np.array_equal(image, P[i]):
            raise InvariantViolation(f"generator columns do not match the form {form}")
    return GeneratorMatrix(code.G, predicted, m, form)


def weights_theoretical(field: GaloisField, params: RecurrenceParams) -> WeightDistribution:
    """Weight distribution from the closed forms.

    Two-weight cases: N-K occurs (q-1)N/K times and N occurs
    (q-1)(K(q+1)-N)/K times.  Irreducible with e = q+1: only N-K.
    Repeated root: N - N/p occurs p(q-1) times, N occurs (q-1)(q+1-p) times.
    """
    fact = classify(field, params)
    prof = profile(field, params)
    q, p, N, K = field.q, field.p, prof.N, prof.K
    if fact.case is Case.REPEATED:
        return WeightDistribution.from_counts({N - N // p: p * (q - 1), N: (q - 1) * (q + 1 - p)})
    if fact.case is Case.IRREDUCIBLE and prof.e == q + 1:
        return WeightDistribution.from_counts({N - K: q * q - 1})
    return WeightDistribution.from_counts(
        {N - K: (q - 1) * N // K, N: (q - 1) * (K * (q + 1) - N) // K}
    )


def _zero_counts(code: TwoDimCyclicCode, budget: int) -> np.ndarray:
    """Zero count of every codeword lam*G0 + mu*G1, indexed [lam, mu] by raw value."""
    F, N, q = code.field, code.N, code.field.q
    if q * q * N > budget:
        raise BudgetExceeded(f"enumerating {q * q - 1} codewords of length {N} exceeds budget {budget}")
    scal = np.arange(q, dtype=np.int64)  # raw values, q-1 is zero
    dtype = np.int16 if q <= 2**15 else np.int32
    # coordinate n of lam*G0 + mu*G1 vanishes iff lam*G0[n] == -(mu*G1[n])
    A = F.vmul(scal[:, None], code.G[0][None, :]).astype(dtype)
    B = F.vneg(F.vmul(scal[:, None], code.G[1][None, :])).astype(dtype)
    counts = np.empty((q, q), dtype=np.int64)
    step = max(1, 4_000_000 // (q * N))
    for lo in range(0, q, step):
        counts[lo : lo + step] = np.count_nonzero(A[lo : lo + step, None, :] == B[None, :, :], axis=2)
    return counts


def weights_bruteforce(code: TwoDimCyclicCode, budget: int = DEFAULT_BUDGET) -> WeightDistribution:
    """Enumerate all nonzero codewords and tally their Hamming weights."""
    zq = code.field.zero_log
    counts = _zero_counts(code, budget)
    counts[zq, zq] = -1  # the zero codeword
    values, freq = np.unique(counts[counts >= 0], return_counts=True)
    return WeightDistribution.from_counts({code.N - int(z): int(f) for z, f in zip(values, freq)})


def min_distance(code: TwoDimCyclicCode, budget: int = DEFAULT_BUDGET) -> int:
    return weights_bruteforce(code, budget).min_weight()


def dual_distance(code: TwoDimCyclicCode) -> int:
    """3 if no two columns of G are proportional, else 2."""
    F = code.field
    g0, g1 = code.G
    # projective point of each column: ratio g1/g0, or "infinity" when g0 = 0
    inv0 = np.where(g0 == F.zero_log, 0, (-g0) % F.order)
    keys = np.where(g0 == F.zero_log, -1, F.vmul(g1, inv0))
    return 3 if len(np.unique(keys)) == code.N else 2


def is_mds(code: TwoDimCyclicCode, budget: int = DEFAULT_BUDGET) -> bool:
    mds = min_distance(code, budget) == code.N - 1
    if mds != is_projective(code):
        raise InvariantViolation("MDS and projective disagree for a two-dimensional code")
    return mds


def is_projective(code: TwoDimCyclicCode) -> bool:
    return dual_distance(code) >= 3


def _order_mod(q: int, u: int) -> int:
    t, x = 1, q % u
    while x != 1 % u:
        x = x * q % u
        t += 1
    return t


def swc_classification(field: GaloisField, params: RecurrenceParams) -> Classification:
    """Subfield / semiprimitive flags of an irreducible C(a,b,q).

    With q^2 - 1 = N u, the code is semiprimitive when -1 is a power of q
    modulo u (reported true, with ``trivial_u``, when u = 1).  It is a subfield
    code when the root generates the multiplicative group of a proper subfield
    of F_{q^2}, i.e. its order is p^d - 1 with d | 2k, d < 2k.
    """
    fact = classify(field, params)
    if fact.case is not Case.IRREDUCIBLE:
        raise ValueError("the two-weight classification applies to irreducible codes only")
    q, p, k = field.q, field.p, field.k
    N = mult_order(fact.alpha)
    if (q * q - 1) % N:
        raise InvariantViolation("period does not divide q^2 - 1")
    u = (q * q - 1) // N
    if u == 1:
        semiprimitive = True
    else:
        semiprimitive = any(pow(q, j, u) == u - 1 for j in range(_order_mod(q, u)))
    subfield = any(N == p**d - 1 for d in range(1, 2 * k) if (2 * k) % d == 0)
    return Classification(u, subfield, semiprimitive, u == 1)


def check_polynomials(field: GaloisField, params: RecurrenceParams, N: int) -> CheckPolynomials:
    """h = monic reciprocal of x^2 - a x - b, g = (x^N - 1) / h."""
    F = field
    a, b = params.a, params.b
    h = (-b.inverse(), a / b, F.one)  # x^2 + (a/b) x - 1/b
    if N < 2:
        raise InvariantViolation(f"period {N} is shorter than deg h")
    # long division of x^N - 1 by the monic quadratic h, raw arithmetic
    h0, h1 = h[0].raw, h[1].raw
    rem = [F.zero_log] * (N + 1)
    rem[N] = 0
    rem[0] = F.rneg(0)
    quot = [F.zero_log] * (N - 1)
    for i in range(N, 1, -1):
        c = rem[i]
        if c == F.zero_log:
            continue
        quot[i - 2] = c
        rem[i] = F.zero_log
        rem[i - 1] = F.rsub(rem[i - 1], F.rmul(c, h1))
        rem[i - 2] = F.rsub(rem[i - 2], F.rmul(c, h0))
    if rem[0] != F.zero_log or rem[1] != F.zero_log:
        raise InvariantViolation(f"h does not divide x^{N} - 1")
    # g * h must give back x^N - 1
    prod = [F.zero_log] * (N + 1)
    for i, c in enumerate(quot):
        if c == F.zero_log:
            continue
        for j, hj in enumerate((h0, h1, 0)):
            prod[i + j] = F.radd(prod[i + j], F.rmul(c, hj))
    target = [F.zero_log] * (N + 1)
    target[0], target[N] = F.rneg(0), 0
    if prod != target:
        raise InvariantViolation("g * h != x^N - 1")
    return CheckPolynomials(h, tuple(F.element(c) for c in quot))


# ---------------------------------------------------------------------------
# reports

REPORT_KEYS = (
    "q", "a", "b", "case", "N", "e", "K", "weights", "d", "d_dual",
    "mds", "projective", "one_weight", "u", "subfield", "semiprimitive", "flags",
)  # fmt: skip


@dataclass(frozen=True)
class CodeReport:
    """Everything computed for one C(a,b,q); elements are kept in ``r^n`` text."""

    q: int
    a: str
    b: str
    case: str
    profile: SequenceProfile
    distribution: WeightDistribution
    d: int
    d_dual: int
    is_mds: bool
    is_projective: bool
    is_one_weight: bool
    classification: Classification | None = None
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if self.d_dual not in (2, 3):
            raise InvariantViolation(f"dual distance {self.d_dual} outside {{2, 3}}")
        if self.is_projective != (self.d_dual == 3):
            raise InvariantViolation("projective flag inconsistent with dual distance")
        if self.is_mds != (self.d == self.profile.N - 1):
            raise InvariantViolation("MDS flag inconsistent with minimum distance")
        if len(self.distribution) > 2:
            raise InvariantViolation(f"more than two nonzero weights: {self.distribution}")

    @property
    def N(self) -> int:
        return self.profile.N

    @property
    def e(self) -> int:
        return self.profile.e

    @property
    def K(self) -> int:
        return self.profile.K

    def to_dict(self) -> dict[str, Any]:
        c = self.classification
        values = (
            self.q, self.a, self.b, self.case, self.N, self.e, self.K,
            [list(p) for p in self.distribution.pairs], self.d, self.d_dual,
            self.is_mds, self.is_projective, self.is_one_weight,
            None if c is None else c.u,
            None if c is None else c.subfield,
            None if c is None else c.semiprimitive,
            list(self.flags),
        )  # fmt: skip
        return dict(zip(REPORT_KEYS, values))

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CodeReport:
        classification = None
        if data.get("u") is not None:
            classification = Classification(
                int(data["u"]), bool(data["subfield"]), bool(data["semiprimitive"]), int(data["u"]) == 1
            )
        return cls(
            q=int(data["q"]),
            a=str(data["a"]),
            b=str(data["b"]),
            case=str(data["case"]),
            profile=SequenceProfile(int(data["N"]), int(data["e"]), int(data["K"])),
            distribution=WeightDistribution(tuple((int(w), int(f)) for w, f in data["weights"])),
            d=int(data["d"]),
            d_dual=int(data["d_dual"]),
            is_mds=bool(data["mds"]),
            is_projective=bool(data["projective"]),
            is_one_weight=bool(data["one_weight"]),
            classification=classification,
            flags=tuple(data.get("flags") or ()),
        )


def analyze(
    field: GaloisField,
    params: RecurrenceParams,
    *,
    brute_force: bool | None = None,
    budget: int = DEFAULT_BUDGET,
) -> CodeReport:
    """Full analysis of C(a,b,q).

    With ``brute_force=None`` the enumeration runs whenever it fits in
    ``budget``; otherwise the report rests on the closed forms alone and
    carries the ``theory-only`` flag.  Disagreement between the two raises
    :class:`InvariantViolation`.
    """
    if params.field != field:
        raise FieldError("recurrence coefficients are not elements of the given field")
    fact = classify(field, params)
    prof = profile(field, params)
    code = build_code(field, params)
    theory = weights_theoretical(field, params)
    flags = []
    if theory.total() != field.q**2 - 1:
        raise InvariantViolation("theoretical frequencies do not sum to q^2 - 1")
    if brute_force is None:
        brute_force = field.q**2 * code.N <= budget
    if brute_force:
        observed = weights_bruteforce(code, budget)
        if observed != theory:
            raise InvariantViolation(
                f"closed-form weights {theory} differ from enumeration {observed} "
                f"for q={field.q}, a={params.a}, b={params.b}"
            )
        distribution = observed
    else:
        distribution = theory
        flags.append("theory-only")
    d = distribution.min_weight()
    d_dual = dual_distance(code)
    mds = d == code.N - 1
    projective = d_dual == 3
    if mds != projective:
        raise InvariantViolation("MDS and projective disagree for a two-dimensional code")
    one_weight = len(distribution) == 1
    classification = None
    if fact.case is Case.IRREDUCIBLE:
        classification = swc_classification(field, params)
        if classification.trivial_u:
            flags.append("trivial-u")
        if classification.outside and not one_weight:
            flags.append("outside-classification")
    if mds and fact.case is Case.REPEATED:
        flags.append("square-mds")
    return CodeReport(
        q=field.q,
        a=format_element(params.a),
        b=format_element(params.b),
        case=fact.case.value,
        profile=prof,
        distribution=distribution,
        d=d,
        d_dual=d_dual,
        is_mds=mds,
        is_projective=projective,
        is_one_weight=one_weight,
        classification=classification,
        flags=tuple(flags),
    )


def pless_moments_hold(report: CodeReport, q: int) -> bool:
    """First two power moments for a code with dual distance >= 2."""
    dist = report.distribution
    return dist.total() == q * q - 1 and dist.moment(1) == q * (q - 1) * report.N

