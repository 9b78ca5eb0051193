"""Structured parsing of the compiler's inlining diagnostic stream.

Accepts the stderr text produced under -Rpass=inline / -Rpass-missed=inline /
-Rpass-analysis=inline and turns matching lines into records. The line
grammar:

    [<file>:<line>:<col>: ]remark: '<callee>' <verb-phrase> '<caller>'
        [ with (cost=<int>, threshold=<int>)][ because <reason>]
        [-Rpass<suffix>=inline]

with verb-phrase one of "inlined into" / "not inlined into" /
"will not be inlined into" and suffix one of "" / "-missed" / "-analysis".
Names are accepted quoted (canonical since clang 10) or bare. Newer compilers
append annotations after the caller (": always inline attribute",
"at callsite f:1:2;"); those are tolerated, and an integer
"(cost=..., threshold=...)" group is recognized wherever it appears.
Anything else on stderr is passed over silently - parsing is total.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum

from .ground_truth import InliningReport, Presence

_REMARK_RE = re.compile(
    r"^(?:(?P<file>[^:\s][^:]*):(?P<line>\d+):(?P<col>\d+):\s+)?"
    r"remark: "
    r"(?P<callee>'[^']*'|\S+) "
    r"(?P<verb>inlined into|not inlined into|will not be inlined into) "
    r"(?P<caller>'[^']*'|[^\s']+)"
    r"(?P<tail>.*?)"
    r" \[-Rpass(?P<suffix>|-missed|-analysis)=inline\]\s*$"
)

_COST_GROUP_RE = re.compile(r"\(cost=(-?\d+), threshold=(-?\d+)\)")
_REASON_RE = re.compile(r"\bbecause (?P<reason>.+)$")


class RemarkKind(Enum):
    Passed = "Passed"
    Missed = "Missed"
    Analysis = "Analysis"


@dataclass
class InlineRemark:
    kind: RemarkKind
    callee: str
    caller: str
    cost: int | None = None
    threshold: int | None = None
    reason: str | None = None
    location: tuple[str, int, int] | None = None


@dataclass
class RemarkSummary:
    passed_count: int
    missed_count: int
    analysis_count: int
    reason_histogram: dict[str, int]
    inlined_pairs: set[tuple[str, str]]


@dataclass
class DiscrepancyReport:
    in_remarks_not_dwarf: set[str]
    in_dwarf_not_remarks: set[str]
    agreed: set[str]
    warnings: list[str] = field(default_factory=list)


def _unquote(token: str) -> str:
    if len(token) >= 2 and token.startswith("'") and token.endswith("'"):
        return token[1:-1]
    return token


def parse_remark_line(line: str) -> InlineRemark | None:
    """One stderr line -> remark, or None when the line is not an inline remark."""
    m = _REMARK_RE.match(line.rstrip("\n"))
    if m is None:
        return None
    callee = _unquote(m.group("callee"))
    caller = _unquote(m.group("caller"))
    if not callee or not caller:
        return None
    tail = m.group("tail") or ""

    cost = threshold = None
    cost_match = _COST_GROUP_RE.search(tail)
    if cost_match:
        cost, threshold = int(cost_match.group(1)), int(cost_match.group(2))

    reason = None
    reason_match = _REASON_RE.search(tail)
    if reason_match:
        reason = reason_match.group(1).strip()
        # An integer cost group trailing the reason belongs to the cost fields,
        # not the reason text.
        stripped = _COST_GROUP_RE.sub("", reason).rstrip()
        if stripped != reason and stripped:
            reason = stripped

    verb = m.group("verb")
    suffix = m.group("suffix")
    if verb == "inlined into" and suffix == "":
        kind = RemarkKind.Passed
    elif suffix == "-analysis":
        kind = RemarkKind.Analysis
    else:
        kind = RemarkKind.Missed

    location = None
    if m.group("file") is not None:
        location = (m.group("file"), int(m.group("line")), int(m.group("col")))

    return InlineRemark(
        kind=kind,
        callee=callee,
        caller=caller,
        cost=cost,
        threshold=threshold,
        reason=reason,
        location=location,
    )


def parse_remark_stream(text: str) -> list[InlineRemark]:
    """Order-preserving filter-map of parse_remark_line over the lines."""
    out = []
    for line in text.splitlines():
        remark = parse_remark_line(line)
        if remark is not None:
            out.append(remark)
    return out


def summarize(remarks: list[InlineRemark]) -> RemarkSummary:
    histogram: dict[str, int] = {}
    pairs: set[tuple[str, str]] = set()
    passed = missed = analysis = 0
    for r in remarks:
        if r.kind is RemarkKind.Passed:
            passed += 1
            pairs.add((r.caller, r.callee))
        elif r.kind is RemarkKind.Missed:
            missed += 1
            key = r.reason if r.reason is not None else "<unspecified>"
            histogram[key] = histogram.get(key, 0) + 1
        else:
            analysis += 1
    return RemarkSummary(passed, missed, analysis, histogram, pairs)


def reconcile(remarks: list[InlineRemark], report: InliningReport) -> DiscrepancyReport:
    """Compare remark evidence against DWARF evidence from the same build."""
    from_remarks = {r.callee for r in remarks if r.kind is RemarkKind.Passed}
    from_dwarf = {
        e.name
        for e in report.entries
        if e.presence in (Presence.InlinedRemaining, Presence.InlinedEliminated)
    }
    warnings = []
    missing = from_remarks - from_dwarf
    if missing:
        warnings.append(
            f"{len(missing)} inlined callee(s) reported by the compiler have no "
            "DWARF inlining record (dead-code-eliminated bodies or intrinsics)"
        )
    return DiscrepancyReport(
        in_remarks_not_dwarf=missing,
        in_dwarf_not_remarks=from_dwarf - from_remarks,
        agreed=from_remarks & from_dwarf,
        warnings=warnings,
    )


# --- canonical JSON forms ---

def remark_to_dict(r: InlineRemark) -> dict:
    return {
        "kind": r.kind.value,
        "callee": r.callee,
        "caller": r.caller,
        "cost": r.cost,
        "threshold": r.threshold,
        "reason": r.reason,
        "location": (
            {"file": r.location[0], "line": r.location[1], "column": r.location[2]}
            if r.location
            else None
        ),
    }


def remark_from_dict(doc: dict) -> InlineRemark:
    loc = doc.get("location")
    return InlineRemark(
        kind=RemarkKind(doc["kind"]),
        callee=doc["callee"],
        caller=doc["caller"],
        cost=doc.get("cost"),
        threshold=doc.get("threshold"),
        reason=doc.get("reason"),
        location=(loc["file"], loc["line"], loc["column"]) if loc else None,
    )


def remarks_to_json(remarks: list[InlineRemark]) -> str:
    return json.dumps([remark_to_dict(r) for r in remarks], indent=2) + "\n"


def remarks_from_json(text: str) -> list[InlineRemark]:
    return [remark_from_dict(d) for d in json.loads(text)]


def discrepancy_to_dict(d: DiscrepancyReport) -> dict:
    return {
        "in_remarks_not_dwarf": sorted(d.in_remarks_not_dwarf),
        "in_dwarf_not_remarks": sorted(d.in_dwarf_not_remarks),
        "agreed": sorted(d.agreed),
        "warnings": list(d.warnings),
    }
