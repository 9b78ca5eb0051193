"""Standalone simulator of the compiler's inline decision pipeline.

The pipeline scores one call site at a time: hard never-inline heuristics
first, then attribute resolution, then threshold initialization/adjustment
and cost accumulation, and finally the mechanical verdict (inline iff
cost < threshold, strictly). Every adjustment is recorded in a replayable
trace so a decision can be audited term by term.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from enum import Enum

from .errors import NegativeCountError

DEFAULT_LEVEL_THRESHOLDS = {"O0": 0, "O1": 225, "O2": 225, "O3": 250, "Os": 50, "Oz": 5}


class Attribute(Enum):
    AlwaysInline = "AlwaysInline"
    InlineHint = "InlineHint"
    NoInline = "NoInline"
    OptNone = "OptNone"
    Naked = "Naked"
    MinSize = "MinSize"
    OptSize = "OptSize"
    NoDuplicate = "NoDuplicate"
    Flatten = "Flatten"


# Resolution order for conflicting directives, strongest first.
ATTRIBUTE_PRIORITY = [
    Attribute.OptNone,
    Attribute.NoInline,
    Attribute.MinSize,
    Attribute.OptSize,
    Attribute.InlineHint,
    Attribute.AlwaysInline,
]


class Linkage(Enum):
    External = "External"
    Internal = "Internal"
    Private = "Private"
    Interposable = "Interposable"


class Hotness(Enum):
    Cold = "Cold"
    Neutral = "Neutral"
    LocallyHot = "LocallyHot"
    Hot = "Hot"


class OptLevel(Enum):
    O0 = "O0"
    O1 = "O1"
    O2 = "O2"
    O3 = "O3"
    Os = "Os"
    Oz = "Oz"


class NeverReason(Enum):
    MisusedBlockAddress = "MisusedBlockAddress"
    CallerOptNone = "CallerOptNone"
    CallerNoDuplicate = "CallerNoDuplicate"
    ConflictingAttributes = "ConflictingAttributes"
    IncompatibleNullPointer = "IncompatibleNullPointer"
    CalleeNoInline = "CalleeNoInline"
    InterposableCallee = "InterposableCallee"
    UnsplitCoroutine = "UnsplitCoroutine"
    CallSiteNoInline = "CallSiteNoInline"
    ByvalBadAddressSpace = "ByvalBadAddressSpace"
    IndirectCall = "IndirectCall"
    DynamicAlloca = "DynamicAlloca"
    ReturnsTwice = "ReturnsTwice"
    VariadicInit = "VariadicInit"
    IndirectBranch = "IndirectBranch"
    ComplexIntrinsic = "ComplexIntrinsic"
    Recursive = "Recursive"


class Verdict(Enum):
    Never = "Never"
    Always = "Always"
    Inline = "Inline"
    Decline = "Decline"


@dataclass(frozen=True)
class InlineParams:
    """Tunable knobs of the cost model; defaults mirror the modeled compiler."""

    inline_threshold: int = 225
    inlinehint_threshold: int = 335
    cold_callsite_threshold: int = 45
    hot_callsite_threshold: int = 3000
    locally_hot_callsite_threshold: int = 525
    cold_callsite_rel_freq: int = 2
    hot_callsite_rel_freq: int = 60
    inline_call_penalty: int = 25
    inline_savings_multiplier: int = 8
    inline_size_allowance: int = 100
    cost_benefit_analysis: bool = False
    caller_superset_nobuiltin: bool = True
    # Per-IR-instruction base cost. Not named by the option tables; this is
    # the long-standing per-instruction constant of the modeled inliner,
    # exposed so parity suites can calibrate it.
    instruction_cost: int = 5
    last_call_to_static_bonus: int = -15000

    @classmethod
    def from_dict(cls, doc: dict) -> "InlineParams":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown InlineParams field(s): {sorted(unknown)}")
        return cls(**doc)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class BodySummary:
    """Declarative summary of the callee body as the inliner would walk it."""

    instruction_count: int = 0
    simplified_away_count: int = 0
    internal_call_count: int = 0
    intrinsic_count: int = 0
    vector_instruction_count: int = 0
    has_complex_branching: bool = False
    indirect_to_direct_conversions: int = 0
    byval_value_args: int = 0


@dataclass
class CallSiteDescription:
    callee_attrs: set[Attribute] = field(default_factory=set)
    caller_attrs: set[Attribute] = field(default_factory=set)
    callee_linkage: Linkage = Linkage.External
    callee_is_recursive: bool = False
    callee_is_variadic: bool = False
    callee_returns_twice: bool = False
    callee_has_indirect_branch: bool = False
    callee_is_unsplit_coroutine: bool = False
    callee_has_dynamic_alloca: bool = False
    callee_has_complex_intrinsic: bool = False
    call_is_indirect: bool = False
    byval_bad_addrspace: bool = False
    incompatible_null_pointer: bool = False
    misused_blockaddress: bool = False
    # The never-inline table has a call-site-scoped noinline case that the
    # attribute sets above cannot express; carried as its own flag.
    call_site_noinline: bool = False
    is_last_call_to_static: bool = False
    hotness: Hotness = Hotness.Neutral
    body_summary: BodySummary = field(default_factory=BodySummary)

    @classmethod
    def from_dict(cls, doc: dict) -> "CallSiteDescription":
        doc = dict(doc)
        body = BodySummary(**doc.pop("body_summary", {}))
        callee_attrs = {Attribute(a) for a in doc.pop("callee_attrs", [])}
        caller_attrs = {Attribute(a) for a in doc.pop("caller_attrs", [])}
        linkage = Linkage(doc.pop("callee_linkage", "External"))
        hotness = Hotness(doc.pop("hotness", "Neutral"))
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown CallSiteDescription field(s): {sorted(unknown)}")
        return cls(
            callee_attrs=callee_attrs,
            caller_attrs=caller_attrs,
            callee_linkage=linkage,
            hotness=hotness,
            body_summary=body,
            **doc,
        )


@dataclass
class TraceStep:
    rule: str
    delta: int
    value: int  # running value after this step


@dataclass
class InlineDecision:
    verdict: Verdict
    reason: NeverReason | None = None
    cost: int | None = None
    threshold: int | None = None
    cost_trace: list[TraceStep] = field(default_factory=list)
    threshold_trace: list[TraceStep] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "reason": self.reason.value if self.reason else None,
            "cost": self.cost,
            "threshold": self.threshold,
            "trace": {
                "cost": [
                    {"rule": s.rule, "delta": s.delta, "value": s.value}
                    for s in self.cost_trace
                ],
                "threshold": [
                    {"rule": s.rule, "delta": s.delta, "value": s.value}
                    for s in self.threshold_trace
                ],
            },
            "notes": list(self.notes),
        }


def resolve_attributes(attrs: set[Attribute]) -> Attribute | None:
    """Highest-priority member of the set; directives outside the order are inert."""
    for attr in ATTRIBUTE_PRIORITY:
        if attr in attrs:
            return attr
    return None


def check_never_inline(site: CallSiteDescription) -> NeverReason | None:
    """First matching hard veto in the fixed evaluation order, if any."""
    if site.misused_blockaddress:
        return NeverReason.MisusedBlockAddress
    if Attribute.OptNone in site.caller_attrs:
        return NeverReason.CallerOptNone
    if Attribute.NoDuplicate in site.caller_attrs:
        return NeverReason.CallerNoDuplicate
    if Attribute.AlwaysInline in site.callee_attrs and Attribute.NoInline in site.callee_attrs:
        return NeverReason.ConflictingAttributes
    if site.incompatible_null_pointer:
        return NeverReason.IncompatibleNullPointer
    if Attribute.NoInline in site.callee_attrs:
        return NeverReason.CalleeNoInline
    if site.callee_linkage is Linkage.Interposable:
        return NeverReason.InterposableCallee
    if site.callee_is_unsplit_coroutine:
        return NeverReason.UnsplitCoroutine
    if site.call_site_noinline:
        return NeverReason.CallSiteNoInline
    if site.byval_bad_addrspace:
        return NeverReason.ByvalBadAddressSpace
    if site.call_is_indirect:
        return NeverReason.IndirectCall
    if site.callee_has_dynamic_alloca:
        return NeverReason.DynamicAlloca
    if site.callee_returns_twice:
        return NeverReason.ReturnsTwice
    if site.callee_is_variadic:
        return NeverReason.VariadicInit
    if site.callee_has_indirect_branch:
        return NeverReason.IndirectBranch
    if site.callee_has_complex_intrinsic:
        return NeverReason.ComplexIntrinsic
    if site.callee_is_recursive:
        return NeverReason.Recursive
    return None


def init_threshold(opt_level: OptLevel, params: InlineParams) -> int:
    """Per-level base threshold; a non-default inline_threshold overrides all levels."""
    if opt_level is OptLevel.O0:
        return 0  # trace mode only; O0 short-circuits before thresholds apply
    if params.inline_threshold != 225:
        return params.inline_threshold
    return DEFAULT_LEVEL_THRESHOLDS[opt_level.value]


def _halve_toward_zero(value: int) -> int:
    return -((-value) // 2) if value < 0 else value // 2


def adjust_threshold(
    base: int,
    site: CallSiteDescription,
    params: InlineParams,
    trace: list[TraceStep] | None = None,
) -> int:
    """Apply the threshold conditions in their fixed order, tracing each."""
    value = base

    def apply(rule: str, new_value: int) -> None:
        nonlocal value
        if trace is not None:
            trace.append(TraceStep(rule, new_value - value, new_value))
        value = new_value

    if resolve_attributes(site.callee_attrs) is Attribute.InlineHint:
        apply("inlinehint-threshold", max(value, params.inlinehint_threshold))
    if site.hotness is Hotness.Hot:
        apply("hot-callsite-threshold", max(value, params.hot_callsite_threshold))
    elif site.hotness is Hotness.LocallyHot:
        apply("locally-hot-callsite-threshold",
              max(value, params.locally_hot_callsite_threshold))
    elif site.hotness is Hotness.Cold:
        apply("cold-callsite-threshold", min(value, params.cold_callsite_threshold))
    if site.caller_attrs & {Attribute.MinSize, Attribute.OptSize}:
        apply("caller-size-pressure", min(value, params.cold_callsite_threshold))
    if site.body_summary.has_complex_branching:
        apply("complex-branching", _halve_toward_zero(value))
    if site.body_summary.vector_instruction_count > 0:
        apply("vectorization", _halve_toward_zero(value))
    return value


def init_cost(site: CallSiteDescription, params: InlineParams) -> int:
    """Zero, except the last call of an internal (static) function."""
    if site.is_last_call_to_static and site.callee_linkage is Linkage.Internal:
        return params.last_call_to_static_bonus
    return 0


def compute_cost(
    site: CallSiteDescription,
    params: InlineParams,
    trace: list[TraceStep] | None = None,
) -> int:
    """Accumulate the per-instruction walk over the callee body summary."""
    body = site.body_summary
    surviving = body.instruction_count - body.simplified_away_count
    if surviving < 0:
        raise NegativeCountError(
            f"simplified_away_count {body.simplified_away_count} exceeds "
            f"instruction_count {body.instruction_count}"
        )
    for name in ("instruction_count", "simplified_away_count", "internal_call_count",
                 "intrinsic_count", "indirect_to_direct_conversions", "byval_value_args"):
        if getattr(body, name) < 0:
            raise NegativeCountError(f"{name} is negative")

    value = init_cost(site, params)

    def apply(rule: str, delta: int) -> None:
        nonlocal value
        value += delta
        if trace is not None:
            trace.append(TraceStep(rule, delta, value))

    if trace is not None and value != 0:
        trace.append(TraceStep("last-call-to-static", value, value))
    if surviving:
        apply("surviving-instructions", params.instruction_cost * surviving)
    if body.internal_call_count:
        apply("call-penalty", params.inline_call_penalty * body.internal_call_count)
    if body.intrinsic_count:
        apply("intrinsic-penalty", params.instruction_cost * body.intrinsic_count)
    if body.indirect_to_direct_conversions:
        apply("indirect-to-direct-savings",
              -params.instruction_cost * body.indirect_to_direct_conversions)
    if body.byval_value_args:
        apply("byval-argument-savings", -params.instruction_cost * body.byval_value_args)
    return value


def decide(
    site: CallSiteDescription,
    opt_level: OptLevel = OptLevel.O2,
    params: InlineParams | None = None,
) -> InlineDecision:
    """Full pipeline for one call site."""
    params = params or InlineParams()

    reason = check_never_inline(site)
    if reason is not None:
        return InlineDecision(Verdict.Never, reason=reason,
                              notes=[f"hard heuristic: {reason.value}"])

    if resolve_attributes(site.callee_attrs) is Attribute.AlwaysInline:
        return InlineDecision(
            Verdict.Always,
            notes=["always_inline directive applies regardless of optimization level"],
        )

    if opt_level is OptLevel.O0:
        return InlineDecision(
            Verdict.Decline,
            notes=["O0 performs no cost-model inlining; only always_inline survives"],
        )

    threshold_trace: list[TraceStep] = []
    base = init_threshold(opt_level, params)
    threshold_trace.append(TraceStep(f"init-{opt_level.value}", base, base))
    threshold = adjust_threshold(base, site, params, threshold_trace)

    cost_trace: list[TraceStep] = []
    cost = compute_cost(site, params, cost_trace)

    verdict = Verdict.Inline if cost < threshold else Verdict.Decline
    decision = InlineDecision(
        verdict,
        cost=cost,
        threshold=threshold,
        cost_trace=cost_trace,
        threshold_trace=threshold_trace,
    )
    if params.cost_benefit_analysis:
        # The knobs exist but no verdict-altering formula is modeled; annotate only.
        decision.notes.append(
            "cost-benefit annotation: savings-multiplier="
            f"{params.inline_savings_multiplier}, size-allowance={params.inline_size_allowance}"
        )
    if verdict is Verdict.Decline and cost == threshold:
        decision.notes.append("tie: cost equals threshold; strict less-than declines")
    return decision


def decision_to_json(decision: InlineDecision) -> str:
    return json.dumps(decision.to_dict(), indent=2) + "\n"
