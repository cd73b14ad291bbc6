"""Acceptance criteria 1-8, one PASS/FAIL line each.

Each test prints its verdict straight to the terminal (bypassing capture) and
then asserts it, so ``pytest -v`` shows both the line and the outcome.
"""

import time

import pytest

from recur2code.catalog import load_fixtures, mds_census, reproduce_table, scan_field
from recur2code.checks import sweep_field
from recur2code.codes import WeightDistribution, check_polynomials, weights_theoretical
from recur2code.gf import field_for_order, format_element, parse_element
from recur2code.recurrence import RecurrenceParams, profile

from conftest import SMALL_Q


def verdict(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}", flush=True)
    assert ok, detail


@pytest.fixture(scope="module")
def sweep():
    """Every (a, b) over the exhaustive range, brute force forced on."""
    t0 = time.perf_counter()
    pairs = [r for q in SMALL_Q for r in sweep_field(q)]
    return pairs, time.perf_counter() - t0


def _params(r):
    F = field_for_order(r.q)
    return F, RecurrenceParams(parse_element(F, r.a), parse_element(F, r.b))


def test_criterion_1_tables(capsys):
    t0 = time.perf_counter()
    reports = [reproduce_table(t) for t in (1, 2, 3)]
    elapsed = time.perf_counter() - t0
    misses = [
        f"table {rep.table} q={row.fixture.q} a=r^{row.fixture.a_exp} b=r^{row.fixture.b_exp}: "
        f"N={row.N} (printed {row.fixture.N})"
        for rep in reports
        for row in rep.rows
        if not row.ok
    ]
    ok = all(rep.passed for rep in reports) and elapsed < 5
    summary = ", ".join(f"table {rep.table} {rep.summary()}" for rep in reports)
    verdict(capsys, 1, ok, f"{summary}; {elapsed:.2f}s" + (f"; mismatches: {misses}" if misses else ""))


def test_criterion_2_main_theorem(capsys, sweep):
    pairs, elapsed = sweep
    bad = []
    for r in pairs:
        F, P = _params(r)
        dist = r.report.distribution
        if len(dist) > 2 or dist != weights_theoretical(F, P) or "theory-only" in r.report.flags:
            bad.append((r.q, r.a, r.b))
    ok = not bad and elapsed < 300
    verdict(capsys, 2, ok, f"{len(pairs)} pairs over q in {SMALL_Q}, {len(bad)} disagreements, sweep {elapsed:.1f}s")


def test_criterion_3_divisibility(capsys, sweep):
    pairs, _ = sweep
    bad = []
    for r in pairs:
        if r.case == "irreducible":
            ok = ((r.q + 1) * r.neg_b_order) % r.N == 0
        elif r.case == "distinct":
            ok = (r.q - 1) % r.N == 0
        else:
            ok = r.N == r.p * r.alpha_order
        if not ok or r.N != r.companion:
            bad.append((r.q, r.a, r.b))
    verdict(capsys, 3, not bad, f"{len(pairs)} pairs, {len(bad)} violations of period bounds or companion order")


def test_criterion_4_one_weight_dichotomy(capsys, sweep):
    pairs, _ = sweep
    irr = [r for r in pairs if r.case == "irreducible"]
    bad = [(r.q, r.a, r.b) for r in irr if r.e > r.q + 1 or r.report.is_one_weight != (r.e == r.q + 1)]
    one = sum(r.report.is_one_weight for r in irr)
    verdict(capsys, 4, not bad, f"{len(irr)} irreducible pairs ({one} one-weight), {len(bad)} violations")


def _literal_frequencies(r):
    """Frequency formulas exactly as the criterion states them."""
    q, p, N, K = r.q, r.p, r.N, r.K
    if r.case == "repeated":
        counts = {N - N // p: q * q - q, N: q - 1}
    else:
        counts = {N - K: (q - 1) * N // K, N: (q - 1) * (K * (q + 1) - N) // K}
    return WeightDistribution.from_counts({w: f for w, f in counts.items() if f})


def test_criterion_5_frequencies(capsys, sweep):
    pairs, _ = sweep
    bad = [r for r in pairs if r.report.distribution != _literal_frequencies(r)]
    moments_bad = [
        r
        for r in pairs
        if r.report.distribution.total() != r.q**2 - 1
        or r.report.distribution.moment(1) != r.q * (r.q - 1) * r.N
    ]
    detail = f"{len(pairs)} pairs, {len(bad)} mismatches with the stated formulas, {len(moments_bad)} Pless failures"
    if bad:
        fields = sorted({r.q for r in bad})
        cases = sorted({r.case for r in bad})
        ex = bad[0]
        detail += (
            f"; mismatches confined to case {cases} in q={fields}, e.g. q={ex.q} a={ex.a} b={ex.b}: "
            f"enumerated {ex.report.distribution} vs stated {_literal_frequencies(ex)}"
        )
    verdict(capsys, 5, not bad and not moments_bad, detail)


def test_criterion_6_duality_and_mds(capsys, sweep):
    pairs, _ = sweep
    reports = [r.report for r in pairs]
    bad = [
        (r.q, r.a, r.b)
        for r in reports
        if r.d_dual not in (2, 3) or not (r.is_mds == r.is_projective == (r.d == r.N - 1))
    ]
    census = mds_census(reports)
    square = census.square_mds
    # the divergent family: (x - 1)^2, so a = 2 and b = -1, of length p
    family = []
    for q in SMALL_Q:
        F = field_for_order(q)
        family.append((q, format_element(F.from_int(2)), format_element(-F.one)))
    ok = not bad and census.mds_equals_k_one and sorted(square) == sorted(family)
    verdict(
        capsys,
        6,
        ok,
        f"{len(census.mds)} MDS codes == {len(census.k_one)} K=1 codes: {census.mds_equals_k_one}; "
        f"{len(bad)} duality violations; repeated-root alpha=1 MDS codes (documented divergence "
        f"from the square-case exclusion): {square}",
    )


def test_criterion_7_outside_classification(capsys):
    t0 = time.perf_counter()
    records = scan_field(49, ["outside-classification"])
    elapsed = time.perf_counter() - t0
    hit = [r for r in records if (r.a, r.b) == ("r^5", "r^30")]
    ok = False
    detail = f"{len(records)} outside-classification codes over F_49 in {elapsed:.1f}s"
    if hit:
        w = hit[0]
        c = w.classification
        ok = (
            w.case == "irreducible" and not w.is_one_weight and w.N == 400 and c.u == 6
            and not c.semiprimitive and not c.subfield and elapsed < 60
        )  # fmt: skip
        detail += f"; witness r^5, r^30: N={w.N}, u={c.u}, weights {w.distribution}"
    verdict(capsys, 7, ok, detail)


def test_criterion_8_check_polynomials(capsys, sweep):
    pairs, _ = sweep
    scanned = [r for r in pairs if r.N <= 2500]
    bad = [(r.q, r.a, r.b) for r in scanned if not r.check_poly_ok]
    table_bad = []
    rows = load_fixtures()
    for fx in rows:
        F = field_for_order(fx.q)
        P = RecurrenceParams(F.r**fx.a_exp, F.r**fx.b_exp)
        try:
            check_polynomials(F, P, profile(F, P).N)
        except Exception as exc:  # noqa: BLE001 - any failure is a miss
            table_bad.append((fx.table, fx.q, fx.a_exp, fx.b_exp, str(exc)))
    verdict(
        capsys,
        8,
        not bad and not table_bad,
        f"{len(scanned)} scanned pairs with N <= 2500 and {len(rows)} table rows; "
        f"{len(bad) + len(table_bad)} failures",
    )
