"""Field-wide scans, reproduction of the published tables, JSONL/CSV export."""

from __future__ import annotations

import csv
import io
import json
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

from .codes import DEFAULT_BUDGET, REPORT_KEYS, CodeReport, analyze
from .gf import GaloisField, field_for_order, format_element, parse_element
from .recurrence import RecurrenceParams, classify, profile

__all__ = [
    "CSV_HEADER",
    "FILTERS",
    "RowCheck",
    "TableFixture",
    "TableReport",
    "export_records",
    "iter_scan",
    "MdsCensus",
    "load_fixtures",
    "load_records",
    "mds_census",
    "reproduce_table",
    "scan_field",
    "scan_summary",
]

CSV_HEADER = (
    "q", "a", "b", "case", "N", "e", "K", "w1", "f1", "w2", "f2", "d", "d_dual",
    "mds", "projective", "one_weight", "u", "subfield", "semiprimitive", "flags",
)  # fmt: skip

FILTERS = {
    "mds": lambda r: r.is_mds,
    "projective": lambda r: r.is_projective,
    "one_weight": lambda r: r.is_one_weight,
    "two_weight": lambda r: not r.is_one_weight,
    "outside_classification": lambda r: "outside-classification" in r.flags,
    "irreducible": lambda r: r.case == "irreducible",
    "distinct": lambda r: r.case == "distinct",
    "repeated": lambda r: r.case == "repeated",
}


def _normalize_filters(filters: Iterable[str] | None) -> list[str]:
    names = []
    for name in filters or ():
        key = name.strip().lower().replace("-", "_")
        if key.startswith("case="):
            key = key[5:]
        if key not in FILTERS:
            raise ValueError(f"unknown filter {name!r}; choose from {', '.join(sorted(FILTERS))}")
        names.append(key)
    return names


# ---------------------------------------------------------------------------
# scanning


def _scan_chunk(
    field: GaloisField, a_raw: int, filters: Sequence[str], brute_force: bool | None, budget: int
) -> list[CodeReport]:
    a = field.element(a_raw)
    out = []
    for b in field.nonzero():
        report = analyze(field, RecurrenceParams(a, b), brute_force=brute_force, budget=budget)
        if all(FILTERS[f](report) for f in filters):
            out.append(report)
    return out


def iter_scan(
    q: int,
    filters: Iterable[str] | None = None,
    *,
    modulus: Sequence[int] | None = None,
    workers: int = 1,
    brute_force: bool | None = None,
    budget: int = DEFAULT_BUDGET,
    start_at: str | None = None,
) -> Iterator[tuple[str, list[CodeReport]]]:
    """Yield ``(a, records)`` per value of ``a`` in scan order.

    Scan order puts a = 0 first and then a = r^0, r^1, ...; within a chunk
    records are ordered by log b.  ``start_at`` resumes from the given a.
    """
    field = field_for_order(q, modulus)
    names = _normalize_filters(filters)
    a_values = [field.zero_log] + list(range(field.order))
    if start_at is not None:
        first = parse_element(field, start_at).raw
        a_values = a_values[a_values.index(first) :]
    if workers <= 1:
        for a_raw in a_values:
            yield format_element(field.element(a_raw)), _scan_chunk(field, a_raw, names, brute_force, budget)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        jobs = pool.map(
            _scan_chunk,
            [field] * len(a_values),
            a_values,
            [names] * len(a_values),
            [brute_force] * len(a_values),
            [budget] * len(a_values),
        )
        for a_raw, records in zip(a_values, jobs):
            yield format_element(field.element(a_raw)), records


def scan_field(
    q: int,
    filters: Iterable[str] | None = None,
    *,
    modulus: Sequence[int] | None = None,
    workers: int = 1,
    brute_force: bool | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[CodeReport]:
    """Analyse every C(a,b,q) with b != 0 and keep those passing all ``filters``."""
    records = []
    for _, chunk in iter_scan(
        q, filters, modulus=modulus, workers=workers, brute_force=brute_force, budget=budget
    ):
        records.extend(chunk)
    return records


def scan_summary(records: Iterable[CodeReport]) -> dict[str, Counter]:
    by_case, by_flag = Counter(), Counter()
    for r in records:
        by_case[r.case] += 1
        for flag in r.flags:
            by_flag[flag] += 1
        if r.is_mds:
            by_flag["mds"] += 1
        if r.is_one_weight:
            by_flag["one-weight"] += 1
    return {"case": by_case, "flag": by_flag}


@dataclass(frozen=True)
class MdsCensus:
    mds: list[tuple[int, str, str]]
    k_one: list[tuple[int, str, str]]
    square_mds: list[tuple[int, str, str]]

    @property
    def mds_equals_k_one(self) -> bool:
        return self.mds == self.k_one


def mds_census(records: Iterable[CodeReport]) -> MdsCensus:
    """The MDS codes in ``records`` next to the K = 1 codes.

    Repeated-root MDS codes are listed separately: they exist (alpha = 1, N = p)
    even though the square case is often said to exclude MDS.
    """
    mds, k_one, square = [], [], []
    for r in records:
        key = (r.q, r.a, r.b)
        if r.is_mds:
            mds.append(key)
            if r.case == "repeated":
                square.append(key)
        if r.K == 1:
            k_one.append(key)
    return MdsCensus(mds, k_one, square)


# ---------------------------------------------------------------------------
# published tables


@dataclass(frozen=True)
class TableFixture:
    table: int
    q: int
    a_exp: int
    b_exp: int
    N: int
    e: int | None = None


@dataclass(frozen=True)
class RowCheck:
    fixture: TableFixture
    case: str
    N: int
    e: int

    @property
    def N_ok(self) -> bool:
        return self.N == self.fixture.N

    @property
    def e_ok(self) -> bool:
        return self.fixture.e is None or self.e == self.fixture.e

    @property
    def ok(self) -> bool:
        return self.N_ok and self.e_ok


@dataclass(frozen=True)
class TableReport:
    table: int
    rows: list[RowCheck]
    moduli: dict[int, tuple[int, ...]]

    @property
    def matched(self) -> int:
        return sum(row.ok for row in self.rows)

    @property
    def passed(self) -> bool:
        return self.matched == len(self.rows)

    def summary(self) -> str:
        return f"{self.matched}/{len(self.rows)} rows match"


def parse_fixtures(text: str) -> list[TableFixture]:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [int(tok) for tok in line.split()]
        if len(fields) not in (5, 6):
            raise ValueError(f"fixture line {lineno}: expected 'table q a_exp b_exp N [e]'")
        rows.append(TableFixture(*fields))
    return rows


def load_fixtures(table: int | None = None) -> list[TableFixture]:
    text = resources.files("recur2code").joinpath("data/tables.txt").read_text()
    rows = parse_fixtures(text)
    return [r for r in rows if table is None or r.table == table]


def reproduce_table(table: int) -> TableReport:
    """Recompute N (and e where given) for every row of a published table."""
    if table not in (1, 2, 3):
        raise ValueError(f"table id must be 1, 2 or 3, got {table}")
    checks, moduli = [], {}
    for fx in load_fixtures(table):
        field = field_for_order(fx.q)
        moduli[fx.q] = field.modulus
        params = RecurrenceParams(field.r**fx.a_exp, field.r**fx.b_exp)
        prof = profile(field, params)
        checks.append(RowCheck(fx, classify(field, params).case.value, prof.N, prof.e))
    return TableReport(table, checks, moduli)


# ---------------------------------------------------------------------------
# export / import


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _csv_row(report: CodeReport) -> list[str]:
    data = report.to_dict()
    weights = data.pop("weights") + [[None, None]] * 2
    data["flags"] = ";".join(data["flags"])
    (w1, f1), (w2, f2) = weights[:2]
    data.update(w1=w1, f1=f1, w2=w2, f2=f2)
    return [_cell(data[k]) for k in CSV_HEADER]


def _render(records: Iterable[CodeReport], fmt: str) -> str:
    if fmt == "jsonl":
        return "".join(json.dumps(r.to_dict()) + "\n" for r in records)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow(_csv_row(r))
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}; expected 'jsonl' or 'csv'")


def export_records(
    records: Iterable[CodeReport],
    fmt: str,
    destination: str | os.PathLike | IO[str],
    *,
    append: bool = False,
    header: bool = True,
) -> int:
    """Write ``records`` as JSON lines or CSV; return the number of bytes written."""
    text = _render(records, fmt)
    if fmt == "csv" and not header:
        text = text.split("\n", 1)[1]
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        try:
            with open(destination, "a" if append else "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {destination}: {exc.strerror}") from exc
    return len(text.encode("utf-8"))


def _from_csv_row(row: dict[str, str]) -> CodeReport:
    def opt_bool(s):
        return None if s == "" else s == "true"

    weights = [[int(row[w]), int(row[f])] for w, f in (("w1", "f1"), ("w2", "f2")) if row[w] != ""]
    data = {
        "q": int(row["q"]),
        "a": row["a"],
        "b": row["b"],
        "case": row["case"],
        "N": int(row["N"]),
        "e": int(row["e"]),
        "K": int(row["K"]),
        "weights": weights,
        "d": int(row["d"]),
        "d_dual": int(row["d_dual"]),
        "mds": row["mds"] == "true",
        "projective": row["projective"] == "true",
        "one_weight": row["one_weight"] == "true",
        "u": None if row["u"] == "" else int(row["u"]),
        "subfield": opt_bool(row["subfield"]),
        "semiprimitive": opt_bool(row["semiprimitive"]),
        "flags": [f for f in row["flags"].split(";") if f],
    }
    return CodeReport.from_dict(data)


def load_records(source: str | os.PathLike | IO[str], fmt: str) -> list[CodeReport]:
    """Inverse of :func:`export_records`."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    if fmt == "jsonl":
        out = []
        for line in text.splitlines():
            if line.strip():
                data = json.loads(line)
                if tuple(data) != REPORT_KEYS:
                    raise ValueError(f"unexpected keys in record: {list(data)}")
                out.append(CodeReport.from_dict(data))
        return out
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None:
            return []
        if tuple(reader.fieldnames) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {reader.fieldnames}")
        return [_from_csv_row(row) for row in reader]
    raise ValueError(f"unknown format {fmt!r}; expected 'jsonl' or 'csv'")


def field_label(field: GaloisField) -> str:
    return f"F_{field.q} mod {list(field.modulus)}"

