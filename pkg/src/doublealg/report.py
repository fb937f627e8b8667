"""Verification reports: deterministic, byte-identical for identical inputs.

The timing field exists in the schema but is always emitted as null: any
wall-clock value would break the byte-identity invariant, which the report
format guarantees for identical inputs and tool version.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import List, Optional, Tuple

from . import __version__
from .verdicts import CheckReport


@dataclass(frozen=True)
class ResultEntry:
    result_id: str
    verdict: str  # "pass" | "fail"
    witness: str = ""
    detail: Tuple[str, ...] = ()
    timing: Optional[float] = None  # always None: reports are reproducible

    def as_dict(self) -> dict:
        return {
            "id": self.result_id,
            "verdict": self.verdict,
            "witness": self.witness,
            "detail": list(self.detail),
            "timing": self.timing,
        }


@dataclass(frozen=True)
class Report:
    command: str
    input_digest: str
    results: Tuple[ResultEntry, ...]
    version: str = __version__

    @property
    def ok(self) -> bool:
        return all(r.verdict == "pass" for r in self.results)

    @property
    def summary(self) -> str:
        return "pass" if self.ok else "fail"

    def as_dict(self) -> dict:
        return {
            "tool_version": self.version,
            "command": self.command,
            "input_digest": self.input_digest,
            "results": [r.as_dict() for r in self.results],
            "summary": self.summary,
        }


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def entries_from_check(prefix: str, report: CheckReport) -> List[ResultEntry]:
    return [
        ResultEntry(
            f"{prefix}.{item.check_id}",
            "pass" if item.ok else "fail",
            item.witness,
        )
        for item in report.items
    ]


def emit_report(report: Report, fmt: str = "text") -> bytes:
    if fmt == "json":
        return (json.dumps(report.as_dict(), indent=2) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [
        "doublealg report",
        f"version: {report.version}",
        f"command: {report.command}",
        f"input: {report.input_digest}",
    ]
    for entry in report.results:
        status = "pass" if entry.verdict == "pass" else "FAIL"
        lines.append(f"result {entry.result_id}: {status}")
        if entry.witness:
            lines.append(f"  witness: {entry.witness}")
        for detail_line in entry.detail:
            lines.append(f"  | {detail_line}")
    lines.append(f"summary: {report.summary}")
    return ("\n".join(lines) + "\n").encode("utf-8")
