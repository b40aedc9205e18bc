"""Machine-readable report records.

JSON layout::

    {"params": {"p", "m", "n", "l", "e"},
     "invariants": {"k", "k0", "k1", "l", "e"},
     "checks": [{"name", "pass", "detail"}],
     "provenance": "proved" | "extrapolated"}

Integers are written as decimal strings so consumers never round them.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Iterable

PARAM_KEYS = ("p", "m", "n", "l", "e")
INVARIANT_KEYS = ("k", "k0", "k1", "l", "e")


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ReportRecord:
    params: dict[str, int]
    invariants: dict[str, int]
    checks: tuple[Check, ...]
    provenance: str
    # wall time in nanoseconds; only serialized on request
    timing_ns: int | None = field(default=None, compare=False)

    def to_dict(self, timing: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "params": {k: str(self.params[k]) for k in PARAM_KEYS},
            "invariants": {k: str(self.invariants[k]) for k in INVARIANT_KEYS},
            "checks": [{"name": c.name, "pass": c.passed, "detail": c.detail} for c in self.checks],
            "provenance": self.provenance,
        }
        if timing and self.timing_ns is not None:
            out["timing_ns"] = str(self.timing_ns)
        return out

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ReportRecord:
        timing = data.get("timing_ns")
        return cls(
            params={k: int(data["params"][k]) for k in PARAM_KEYS},
            invariants={k: int(data["invariants"][k]) for k in INVARIANT_KEYS},
            checks=tuple(Check(c["name"], bool(c["pass"]), c.get("detail", "")) for c in data["checks"]),
            provenance=data["provenance"],
            timing_ns=None if timing is None else int(timing),
        )

    @classmethod
    def from_json(cls, text: str) -> ReportRecord:
        return cls.from_dict(json.loads(text))

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)


CSV_COLUMNS = (
    [f"params.{k}" for k in PARAM_KEYS]
    + [f"invariants.{k}" for k in INVARIANT_KEYS]
    + ["checks", "provenance"]
)


def _checks_cell(checks: Iterable[Check]) -> str:
    return ";".join(f"{c.name}={'pass' if c.passed else 'FAIL'}" for c in checks)


def to_csv(records: Iterable[ReportRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(
            [rec.params[k] for k in PARAM_KEYS]
            + [rec.invariants[k] for k in INVARIANT_KEYS]
            + [_checks_cell(rec.checks), rec.provenance]
        )
    return buf.getvalue()


def from_csv(text: str) -> list[ReportRecord]:
    """Inverse of :func:`to_csv`; check details are not carried by CSV."""
    rows = list(csv.DictReader(io.StringIO(text)))
    records = []
    for row in rows:
        checks = []
        if row["checks"]:
            for cell in row["checks"].split(";"):
                name, verdict = cell.rsplit("=", 1)
                checks.append(Check(name, verdict == "pass"))
        records.append(
            ReportRecord(
                params={k: int(row[f"params.{k}"]) for k in PARAM_KEYS},
                invariants={k: int(row[f"invariants.{k}"]) for k in INVARIANT_KEYS},
                checks=tuple(checks),
                provenance=row["provenance"],
            )
        )
    return records


def to_text(rec: ReportRecord) -> str:
    p = rec.params
    inv = rec.invariants
    lines = [
        f"D = C({p['p']}^{p['m']}) x| C({p['p']}^{p['n']})  (l={p['l']}, e={p['e']})",
        f"k(B)={inv['k']}  k0(B)={inv['k0']}  k1(B)={inv['k1']}  l(B)={inv['l']}  e(B)={inv['e']}",
        f"provenance: {rec.provenance}",
    ]
    lines += [f"  [{'ok' if c.passed else 'FAIL'}] {c.name}" + (f"  {c.detail}" if c.detail else "") for c in rec.checks]
    return "\n".join(lines)
