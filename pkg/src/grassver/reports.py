"""Serialization of verification results.

Three output shapes: human-readable text lines, newline-delimited JSON
records (one self-describing record per check), and CSV for the tables.
All output is deterministic: dict keys are sorted and rows are emitted in
a canonical order.
"""

from __future__ import annotations

import csv
import io
import json


def check_record(suite: str, check: str, instance, passed: bool,
                 seconds: float, detail: dict | None = None) -> dict:
    rec = {
        "record": "check",
        "version": 1,
        "suite": suite,
        "check": check,
        "instance": list(instance),
        "pass": passed,
        "seconds": round(seconds, 3),
    }
    if detail:
        rec["detail"] = detail
    return rec


def format_check_line(rec: dict) -> str:
    status = "PASS" if rec["pass"] else "FAIL"
    inst = ",".join(str(v) for v in rec["instance"])
    return (f"{status} {rec['suite']}:{rec['check']} "
            f"({inst}) {rec['seconds']:.2f}s")


def records_to_ndjson(records) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


def checks_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "check", "instance", "pass", "seconds"])
    for r in records:
        w.writerow([
            r["suite"], r["check"],
            " ".join(str(v) for v in r["instance"]),
            "1" if r["pass"] else "0",
            f"{r['seconds']:.3f}",
        ])
    return buf.getvalue()


def _cell_str(value) -> str:
    if isinstance(value, tuple):
        return "(" + " ".join(str(v) for v in value) + ")"
    return str(value)


def table_to_csv(report) -> str:
    """CSV for a TableReport: one row per cell, brute and closed columns."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    q, n, k, i = report.instance
    w.writerow(["kind", "q", "n", "k", "i", "cell",
                "brute", "closed", "match"])
    for cell in sorted(report.expected):
        name = "|".join(cell) if isinstance(cell, tuple) else str(cell)
        brute = report.observed.get(cell, "")
        closed = report.expected[cell]
        ok = (cell not in report.mismatches
              and cell not in report.inequitable
              and cell in report.observed)
        w.writerow([report.kind, q, n, k, i, name,
                    _cell_str(brute), _cell_str(closed), "1" if ok else "0"])
    return buf.getvalue()


def table_to_text(report, title: str) -> str:
    lines = [f"{title} at (q,n,k,i)={report.instance}"]
    width = max(len("|".join(c) if isinstance(c, tuple) else str(c))
                for c in report.expected)
    for cell in sorted(report.expected):
        name = "|".join(cell) if isinstance(cell, tuple) else str(cell)
        brute = _cell_str(report.observed.get(cell, "?"))
        closed = _cell_str(report.expected[cell])
        mark = "ok" if brute == closed else "MISMATCH"
        if cell in report.inequitable:
            mark = "NOT CONSTANT"
        lines.append(f"  {name:<{width}}  brute={brute:<14} "
                     f"closed={closed:<14} {mark}")
    lines.append(f"  => {'PASS' if report.holds else 'FAIL'}")
    return "\n".join(lines)
