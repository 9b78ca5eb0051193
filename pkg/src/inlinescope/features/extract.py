"""Assemble 62-slot feature vectors per function and per binary."""

from __future__ import annotations

import io
from dataclasses import dataclass

from .cfg import build_cfg, detect_loops, loop_nesting_depth
from .listing import Function, Listing
from .registry import (
    CATEGORY_COUNT_SLOTS,
    CATEGORY_RATIO_SLOTS,
    REGISTRY_VERSION,
    get_registry,
)

INDIRECT_SINK = "<indirect>"


@dataclass
class FeatureVector:
    values: list[float]  # 62 slots, index i stored at values[i-1]
    registry_version: str = REGISTRY_VERSION

    def slot(self, index: int) -> float:
        return self.values[index - 1]


def _strip_plt(label: str) -> str:
    name = label.split("+")[0]
    if name.endswith("@plt"):
        name = name[: -len("@plt")]
    return name


def _call_target(function_names: set[str], insn) -> str | None:
    """Resolved callee name, INDIRECT_SINK, or an external label."""
    if not insn.is_call:
        return None
    if insn.is_indirect or insn.explicit_branch_target is None:
        return INDIRECT_SINK
    if insn.target_label:
        name = _strip_plt(insn.target_label)
        return name if name else INDIRECT_SINK
    return INDIRECT_SINK


def _instruction_slots(fn: Function, values: list[float]) -> None:
    insns = fn.instructions
    total = len(insns)
    values[0] = total
    if total == 0:
        return
    counts: dict[str, int] = {}
    conditional = unconditional = with_target = 0
    mnemonics = set()
    total_bytes = 0
    for insn in insns:
        counts[insn.category] = counts.get(insn.category, 0) + 1
        mnemonics.add(insn.mnemonic.lower())
        total_bytes += insn.byte_size
        if insn.is_conditional:
            conditional += 1
        elif insn.is_unconditional_jump:
            unconditional += 1
        if insn.explicit_branch_target is not None:
            with_target += 1
    for category, slot in CATEGORY_COUNT_SLOTS.items():
        values[slot - 1] = counts.get(category, 0)
    for category, slot in CATEGORY_RATIO_SLOTS.items():
        values[slot - 1] = counts.get(category, 0) / total
    values[8 - 1] = counts.get("arithmetic", 0) + counts.get("shift", 0)
    values[23 - 1] = (counts.get("floating_point", 0) + counts.get("vector", 0)) / total
    values[30 - 1] = conditional
    values[31 - 1] = conditional / total
    values[32 - 1] = unconditional
    values[33 - 1] = len(mnemonics)
    values[34 - 1] = total_bytes / total
    values[35 - 1] = total_bytes
    values[36 - 1] = with_target


def _cfg_slots(fn: Function, values: list[float]) -> None:
    cfg = build_cfg(fn)
    blocks = cfg.blocks
    n_blocks = len(blocks)
    values[37 - 1] = n_blocks
    if n_blocks == 0:
        return
    loops = detect_loops(cfg)
    loop_sizes = [lp.size for lp in loops]
    back_edges = sum(len(lp.back_edges) for lp in loops)
    out_degrees = [len(b.successors) for b in blocks]
    in_degrees = [len(b.predecessors) for b in blocks]
    block_sizes = [b.size for b in blocks]
    loop_blocks: set[int] = set()
    for lp in loops:
        loop_blocks |= lp.body

    values[38 - 1] = len(loops)
    values[39 - 1] = back_edges
    values[40 - 1] = cfg.edge_count
    values[41 - 1] = cfg.edge_count / n_blocks
    values[42 - 1] = len(loop_blocks)
    values[43 - 1] = max(out_degrees)
    values[44 - 1] = sum(out_degrees) / n_blocks
    values[45 - 1] = max(in_degrees)
    values[46 - 1] = max(loop_sizes) if loop_sizes else 0
    values[47 - 1] = sum(in_degrees) / n_blocks
    values[48 - 1] = sum(loop_sizes) / len(loop_sizes) if loop_sizes else 0
    values[49 - 1] = sum(loop_sizes)
    values[50 - 1] = sum(1 for b in blocks if b.terminator and b.terminator.is_return)
    values[51 - 1] = sum(block_sizes) / n_blocks
    values[52 - 1] = max(block_sizes)
    values[53 - 1] = len(cfg.unreachable)
    values[54 - 1] = loop_nesting_depth(loops)
    values[55 - 1] = sum(1 for b in blocks if b.terminator and b.terminator.is_conditional)
    values[56 - 1] = sum(1 for b in blocks if b.index in b.successors)


def extract_features(
    listing: Listing, registry_version: str = REGISTRY_VERSION
) -> tuple[dict[str, FeatureVector], FeatureVector]:
    """Per-function vectors plus the binary aggregate."""
    registry = get_registry(registry_version)

    function_names = {fn.name for fn in listing.functions}
    callees: dict[str, list[str]] = {fn.name: [] for fn in listing.functions}
    callers_count: dict[str, int] = {fn.name: 0 for fn in listing.functions}
    for fn in listing.functions:
        for insn in fn.instructions:
            target = _call_target(function_names, insn)
            if target is None:
                continue
            callees[fn.name].append(target)
            if target in callers_count:
                callers_count[target] += 1

    caller_sets: dict[str, set[str]] = {fn.name: set() for fn in listing.functions}
    for caller, targets in callees.items():
        for t in targets:
            if t in caller_sets:
                caller_sets[t].add(caller)

    per_function: dict[str, FeatureVector] = {}
    for fn in listing.functions:
        values = [0.0] * 62
        _instruction_slots(fn, values)
        _cfg_slots(fn, values)
        targets = callees[fn.name]
        internal = {t for t in targets if t in function_names}
        external = {t for t in targets if t not in function_names}
        values[57 - 1] = len(internal)
        values[58 - 1] = len(caller_sets[fn.name])
        values[59 - 1] = len(external)
        values[60 - 1] = 1 if fn.name in internal else 0
        values[61 - 1] = len(targets)
        values[62 - 1] = callers_count[fn.name]
        per_function[fn.name] = FeatureVector(values, registry.version)

    aggregate_values = [0.0] * 62
    total_weight = sum(v.values[0] for v in per_function.values())
    for slot in registry.slots:
        i = slot.index - 1
        if slot.aggregation == "sum":
            aggregate_values[i] = sum(v.values[i] for v in per_function.values())
        else:  # size-weighted mean, weight = instruction count
            if total_weight > 0:
                aggregate_values[i] = (
                    sum(v.values[i] * v.values[0] for v in per_function.values())
                    / total_weight
                )
    return per_function, FeatureVector(aggregate_values, registry.version)


BINARY_ROW = "__binary__"


def features_to_csv(
    per_function: dict[str, FeatureVector], aggregate: FeatureVector
) -> str:
    out = io.StringIO()
    header = ["function"] + [f"f{i}" for i in range(1, 63)]
    out.write(",".join(header) + "\n")

    def fmt(x: float) -> str:
        return format(x, ".6g")

    for name in sorted(per_function):
        vec = per_function[name]
        out.write(",".join(['"%s"' % name.replace('"', '""')] + [fmt(v) for v in vec.values]))
        out.write("\n")
    out.write(",".join([BINARY_ROW] + [fmt(v) for v in aggregate.values]) + "\n")
    return out.getvalue()


def features_from_csv(text: str) -> tuple[dict[str, list[float]], list[float] | None]:
    """Parse the CSV produced by features_to_csv (also accepts plain names)."""
    import csv as _csv

    rows: dict[str, list[float]] = {}
    aggregate: list[float] | None = None
    reader = _csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or header[0] != "function":
        raise ValueError("not a feature CSV: missing 'function' header")
    for row in reader:
        if not row:
            continue
        name, values = row[0], [float(v) for v in row[1:]]
        if name == BINARY_ROW:
            aggregate = values
        else:
            rows[name] = values
    return rows, aggregate
