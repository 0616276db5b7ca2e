"""Report assembly and serialization (JSON and TSV)."""
from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path
from typing import Iterable, List, Optional

from . import __version__
from .suites import RunConfig, SuiteResult

SCHEMA_VERSION = 1


def build_report(results: Iterable[SuiteResult], config: Optional[RunConfig] = None,
                 command: str = "") -> dict:
    suites = [r.to_dict() for r in results]
    if not suites:
        overall = "empty"
    elif any(s["status"] == "fail" for s in suites):
        overall = "fail"
    else:
        overall = "pass"
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "regulator-lab",
        "version": __version__,
        "command": command,
        "config": asdict(config) if config else None,
        "overall": overall,
        "suites": suites,
    }


def strip_timings(report: dict) -> dict:
    """Copy of a report without timing fields (for determinism comparisons)."""
    out = json.loads(json.dumps(report))
    for s in out.get("suites", []):
        s.pop("timings", None)
    return out


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


TSV_HEADER = ["suite", "status", "witnesses", "failed", "recorded", "min_absprec", "seconds"]


def to_tsv(report: dict) -> str:
    lines: List[str] = ["\t".join(TSV_HEADER)]
    for s in report.get("suites", []):
        w = s["witnesses"].values()
        failed = sum(1 for x in w if x["status"] == "fail")
        recorded = sum(1 for x in w if x["status"] == "recorded")
        precs = [b["min_absprec"] for b in s["valuation_bounds"]]
        lines.append("\t".join(str(x) for x in (
            s["suite"], s["status"], len(s["witnesses"]), failed, recorded,
            min(precs) if precs else "", s.get("timings", {}).get("seconds", ""))))
    return "\n".join(lines) + "\n"


def write_report(report: dict, fmt: str, path: str) -> None:
    text = to_json(report) if fmt == "json" else to_tsv(report)
    Path(path).write_text(text, encoding="utf-8")


def load_run(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        return build_report([])
    return json.loads(p.read_text(encoding="utf-8"))
