"""
report.py — Output helpers for the JordanCone command line
"""
import json
import sys
from typing import TextIO

from jordan_cone.core.suite_runner import SuiteReport
from jordan_cone.core.utils import format_duration_ms, format_residual


def to_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def emit(payload: dict, as_json: bool, stream: TextIO | None = None) -> None:
    """JSON when asked, otherwise one 'key: value' line per entry."""
    stream = stream or sys.stdout
    if as_json:
        stream.write(to_json(payload) + "\n")
        return
    width = max((len(k) for k in payload), default=0)
    for key, value in payload.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        stream.write(f"{key:<{width}}  {value}\n")


def print_error(message: str) -> None:
    sys.stderr.write(f"[error] {message}\n")


def summarize(report: SuiteReport, stream: TextIO | None = None) -> None:
    """Human summary: failing records, then one totals line."""
    stream = stream or sys.stderr
    records = report.records
    algebras = sorted({r["algebra"] for r in records})
    stream.write(
        f"[verify {report.suite}] seed={report.seed} algebras={len(algebras)} "
        f"checks={len(records)} time={format_duration_ms(report.wall_time_ms)}\n"
    )
    for r in report.failures:
        detail = r.get("error") or f"residual {format_residual(r['max_residual'])} > tol {r['tolerance']:.1e}"
        stream.write(f"  FAIL  {r['name']:<36} {r['algebra']:<28} {detail}\n")
    passed = len(records) - len(report.failures)
    verdict = "OK" if report.passed else "FAIL"
    stream.write(f"[verify {report.suite}] {verdict} ({passed}/{len(records)} passed)\n")
