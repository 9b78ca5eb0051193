"""Function-inlining ground truth from debug-annotated ELF binaries.

Recovers one entry per named subprogram, one record per inlined-subroutine
instance, classifies each function's presence in the final image, and rolls
everything into a report with the inlining ratio. Matching between builds is
by function name; duplicate subprogram DIEs of one name (abstract instance,
out-of-line copy, cross-unit declarations) merge into a single entry.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from enum import Enum

from . import dwarf as dw
from .elf import ElfFile
from .errors import EmptyFunctionUniverse, MalformedDwarf, MissingDebugInfo

# Markers of compiler-generated clone/part symbols; kept, counted, but flagged.
ARTIFICIAL_NAME_MARKERS = (".isra.", ".part.", ".constprop.", ".cold", ".llvm.")


class InlineAttr(Enum):
    NotInlined = 0
    Inlined = 1
    DeclaredNotInlined = 2
    DeclaredInlined = 3


class Presence(Enum):
    NeverInlined = "NeverInlined"
    InlinedRemaining = "InlinedRemaining"
    InlinedEliminated = "InlinedEliminated"


@dataclass
class FunctionEntry:
    name: str
    decl_file: str | None = None
    inline_attr: InlineAttr = InlineAttr.NotInlined
    has_concrete_range: bool = False
    presence: Presence = Presence.NeverInlined
    symbol_present: bool = False
    inline_instance_count: int = 0

    @property
    def is_inlined(self) -> bool:
        """Conservative ground truth: attribute evidence or instance evidence."""
        return (
            self.inline_attr in (InlineAttr.Inlined, InlineAttr.DeclaredInlined)
            or self.inline_instance_count > 0
        )


@dataclass
class InlineInstance:
    abstract_origin: str  # name of the inlined callee
    host_function: str
    call_file: str | None = None
    call_line: int | None = None
    call_column: int | None = None
    pc_ranges: list[tuple[int, int]] = field(default_factory=list)


@dataclass
class InliningReport:
    binary_id: str
    total_functions: int
    inlined_functions: int
    remaining_inlined: int
    eliminated_inlined: int
    inlining_ratio: float
    entries: list[FunctionEntry]
    instances: list[InlineInstance]
    warnings: list[str] = field(default_factory=list)


@dataclass
class FlowCounts:
    not_inlined: int
    inlined_remaining: int
    inlined_eliminated: int
    only_in_baseline: int
    only_in_variant: int
    warnings: list[str] = field(default_factory=list)


def _load_dwarf(binary_image: bytes) -> tuple[ElfFile, dw.DwarfInfo]:
    elf = ElfFile(binary_image)
    info = elf.debug_section_data("info")
    if info is None or len(info) == 0:
        raise MissingDebugInfo("no .debug_info section in this binary")
    abbrev = elf.debug_section_data("abbrev")
    if abbrev is None:
        raise MalformedDwarf("missing .debug_abbrev section")
    dwarf = dw.DwarfInfo(
        info,
        abbrev,
        debug_str=elf.debug_section_data("str") or b"",
        line_str=elf.debug_section_data("line_str") or b"",
        str_offsets=elf.debug_section_data("str_offsets") or b"",
        debug_addr=elf.debug_section_data("addr") or b"",
        rnglists=elf.debug_section_data("rnglists") or b"",
        ranges=elf.debug_section_data("ranges") or b"",
        line=elf.debug_section_data("line") or b"",
    )
    return elf, dwarf


def _resolved_name(die: dw.Die) -> str | None:
    """Subprogram name; linkage name preferred, reference chains followed."""
    seen: set[int] = set()
    current: dw.Die | None = die
    while current is not None and current.offset not in seen:
        seen.add(current.offset)
        name = current.string(dw.DW_AT_linkage_name) or current.string(
            dw.DW_AT_MIPS_linkage_name
        )
        if name:
            return name
        name = current.string(dw.DW_AT_name)
        if name:
            return name
        current = current.reference(dw.DW_AT_specification) or current.reference(
            dw.DW_AT_abstract_origin
        )
    return None


def _decl_file(die: dw.Die) -> str | None:
    seen: set[int] = set()
    current: dw.Die | None = die
    while current is not None and current.offset not in seen:
        seen.add(current.offset)
        index = current.constant(dw.DW_AT_decl_file)
        if index is not None:
            return current.cu.file_name(index)
        current = current.reference(dw.DW_AT_specification) or current.reference(
            dw.DW_AT_abstract_origin
        )
    return None


def extract_functions(binary_image: bytes) -> list[FunctionEntry]:
    """One entry per named subprogram, merged across duplicate DIEs."""
    entries, _ = _extract_functions_with_warnings(binary_image)
    return entries


def _extract_functions_with_warnings(
    binary_image: bytes,
) -> tuple[list[FunctionEntry], list[str]]:
    _, dwarf = _load_dwarf(binary_image)
    merged: dict[str, FunctionEntry] = {}
    order: list[str] = []
    warnings: list[str] = []
    for die in dwarf.walk():
        if die.tag != dw.DW_TAG_subprogram:
            continue
        name = _resolved_name(die)
        if not name:
            continue
        attr_value = die.constant(dw.DW_AT_inline)
        inline_attr = (
            InlineAttr(attr_value) if attr_value in (0, 1, 2, 3) else InlineAttr.NotInlined
        )
        has_range = die.has(dw.DW_AT_low_pc)
        decl = _decl_file(die)
        entry = merged.get(name)
        if entry is None:
            merged[name] = FunctionEntry(
                name=name,
                decl_file=decl,
                inline_attr=inline_attr,
                has_concrete_range=has_range,
            )
            order.append(name)
            if any(marker in name for marker in ARTIFICIAL_NAME_MARKERS):
                warnings.append(f"artificial compiler-generated name kept: {name!r}")
        else:
            if inline_attr.value > entry.inline_attr.value:
                entry.inline_attr = inline_attr
            entry.has_concrete_range = entry.has_concrete_range or has_range
            if entry.decl_file is None:
                entry.decl_file = decl
    return [merged[n] for n in order], warnings


def extract_inline_instances(binary_image: bytes) -> list[InlineInstance]:
    instances, _ = _extract_instances_with_warnings(binary_image)
    return instances


def _host_function(die: dw.Die) -> str | None:
    """Name of the nearest enclosing concrete subprogram."""
    ancestor = die.parent
    while ancestor is not None:
        if ancestor.tag == dw.DW_TAG_subprogram and (
            ancestor.has(dw.DW_AT_low_pc) or ancestor.has(dw.DW_AT_ranges)
        ):
            return _resolved_name(ancestor)
        ancestor = ancestor.parent
    return None


def _extract_instances_with_warnings(
    binary_image: bytes,
) -> tuple[list[InlineInstance], list[str]]:
    _, dwarf = _load_dwarf(binary_image)
    instances: list[InlineInstance] = []
    warnings: list[str] = []
    for die in dwarf.walk():
        if die.tag != dw.DW_TAG_inlined_subroutine:
            continue
        origin = die.reference(dw.DW_AT_abstract_origin)
        origin_name = _resolved_name(origin) if origin is not None else None
        if origin_name is None:
            warnings.append(
                f"dangling abstract origin for inlined subroutine at offset {die.offset:#x}"
            )
            continue
        call_file = die.cu.file_name(die.constant(dw.DW_AT_call_file))
        instances.append(
            InlineInstance(
                abstract_origin=origin_name,
                host_function=_host_function(die) or "<unknown>",
                call_file=call_file,
                call_line=die.constant(dw.DW_AT_call_line),
                call_column=die.constant(dw.DW_AT_call_column),
                pc_ranges=die.pc_ranges(),
            )
        )
    return instances, warnings


def classify_presence(
    entries: list[FunctionEntry], func_symbol_names: set[str]
) -> list[FunctionEntry]:
    """Fill symbol_present and presence; total over its inputs."""
    out: list[FunctionEntry] = []
    for entry in entries:
        symbol_present = entry.name in func_symbol_names
        if (
            entry.inline_attr in (InlineAttr.NotInlined, InlineAttr.DeclaredNotInlined)
            and entry.inline_instance_count == 0
        ):
            presence = Presence.NeverInlined
        elif symbol_present or entry.has_concrete_range:
            presence = Presence.InlinedRemaining
        else:
            presence = Presence.InlinedEliminated
        out.append(replace(entry, symbol_present=symbol_present, presence=presence))
    return out


def compute_inlining_report(binary_image: bytes, source_label: str = "<memory>") -> InliningReport:
    """Full pipeline: extract, count instances, classify, and aggregate."""
    elf = ElfFile(binary_image)
    entries, warnings = _extract_functions_with_warnings(binary_image)
    instances, instance_warnings = _extract_instances_with_warnings(binary_image)
    warnings.extend(instance_warnings)

    counts: dict[str, int] = {}
    for inst in instances:
        counts[inst.abstract_origin] = counts.get(inst.abstract_origin, 0) + 1
    for entry in entries:
        entry.inline_instance_count = counts.get(entry.name, 0)

    entries = classify_presence(entries, elf.func_symbol_names())
    total = len(entries)
    if total == 0:
        raise EmptyFunctionUniverse("binary reports zero named subprograms")
    remaining = sum(1 for e in entries if e.presence is Presence.InlinedRemaining)
    eliminated = sum(1 for e in entries if e.presence is Presence.InlinedEliminated)
    inlined = remaining + eliminated

    digest = hashlib.sha256(binary_image).hexdigest()[:16]
    return InliningReport(
        binary_id=f"{source_label}:{digest}",
        total_functions=total,
        inlined_functions=inlined,
        remaining_inlined=remaining,
        eliminated_inlined=eliminated,
        inlining_ratio=inlined / total,
        entries=sorted(entries, key=lambda e: e.name),
        instances=sorted(
            instances, key=lambda i: (i.host_function, i.abstract_origin, i.pc_ranges)
        ),
        warnings=warnings,
    )


def delta_flow(baseline: InliningReport, variant: InliningReport) -> FlowCounts:
    """Flow of the baseline function universe into the variant's presence buckets."""
    base_names = {e.name for e in baseline.entries}
    var_by_name = {e.name: e for e in variant.entries}
    shared = base_names & set(var_by_name)

    buckets = {Presence.NeverInlined: 0, Presence.InlinedRemaining: 0,
               Presence.InlinedEliminated: 0}
    for name in shared:
        buckets[var_by_name[name].presence] += 1

    only_in_baseline = len(base_names - set(var_by_name))
    only_in_variant = len(set(var_by_name) - base_names)
    warnings = []
    if only_in_baseline:
        warnings.append(
            f"{only_in_baseline} baseline function(s) have no DWARF record in the variant"
        )
    return FlowCounts(
        not_inlined=buckets[Presence.NeverInlined],
        inlined_remaining=buckets[Presence.InlinedRemaining],
        inlined_eliminated=buckets[Presence.InlinedEliminated],
        only_in_baseline=only_in_baseline,
        only_in_variant=only_in_variant,
        warnings=warnings,
    )


# --- JSON serialization (stable external schema) ---

def entry_to_dict(entry: FunctionEntry) -> dict:
    return {
        "name": entry.name,
        "decl_file": entry.decl_file,
        "inline_attr": entry.inline_attr.name,
        "has_concrete_range": entry.has_concrete_range,
        "presence": entry.presence.value,
        "symbol_present": entry.symbol_present,
        "inline_instance_count": entry.inline_instance_count,
    }


def instance_to_dict(inst: InlineInstance) -> dict:
    return {
        "abstract_origin": inst.abstract_origin,
        "host_function": inst.host_function,
        "call_file": inst.call_file,
        "call_line": inst.call_line,
        "call_column": inst.call_column,
        "pc_ranges": [[low, high] for low, high in inst.pc_ranges],
    }


def report_to_dict(report: InliningReport) -> dict:
    return {
        "binary_id": report.binary_id,
        "totals": {
            "functions": report.total_functions,
            "inlined": report.inlined_functions,
            "remaining": report.remaining_inlined,
            "eliminated": report.eliminated_inlined,
            "ratio": round(report.inlining_ratio, 4),
        },
        "entries": [entry_to_dict(e) for e in report.entries],
        "instances": [instance_to_dict(i) for i in report.instances],
        "warnings": list(report.warnings),
    }


def report_to_json(report: InliningReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n"


def flow_to_dict(flow: FlowCounts) -> dict:
    return {
        "not_inlined": flow.not_inlined,
        "inlined_remaining": flow.inlined_remaining,
        "inlined_eliminated": flow.inlined_eliminated,
        "only_in_baseline": flow.only_in_baseline,
        "only_in_variant": flow.only_in_variant,
        "warnings": list(flow.warnings),
    }


def report_from_dict(doc: dict) -> InliningReport:
    """Rebuild a report from its JSON form (service and CLI round trips)."""
    entries = [
        FunctionEntry(
            name=e["name"],
            decl_file=e.get("decl_file"),
            inline_attr=InlineAttr[e["inline_attr"]],
            has_concrete_range=e["has_concrete_range"],
            presence=Presence(e["presence"]),
            symbol_present=e["symbol_present"],
            inline_instance_count=e["inline_instance_count"],
        )
        for e in doc.get("entries", [])
    ]
    instances = [
        InlineInstance(
            abstract_origin=i["abstract_origin"],
            host_function=i["host_function"],
            call_file=i.get("call_file"),
            call_line=i.get("call_line"),
            call_column=i.get("call_column"),
            pc_ranges=[(int(low), int(high)) for low, high in i.get("pc_ranges", [])],
        )
        for i in doc.get("instances", [])
    ]
    totals = doc["totals"]
    return InliningReport(
        binary_id=doc["binary_id"],
        total_functions=totals["functions"],
        inlined_functions=totals["inlined"],
        remaining_inlined=totals["remaining"],
        eliminated_inlined=totals["eliminated"],
        inlining_ratio=float(totals["ratio"]),
        entries=entries,
        instances=instances,
        warnings=list(doc.get("warnings", [])),
    )
