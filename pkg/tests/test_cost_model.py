import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from inlinescope.cost_model import (
    Attribute,
    BodySummary,
    CallSiteDescription,
    Hotness,
    InlineParams,
    Linkage,
    NeverReason,
    OptLevel,
    Verdict,
    adjust_threshold,
    check_never_inline,
    compute_cost,
    decide,
    init_cost,
    init_threshold,
    resolve_attributes,
)
from inlinescope.errors import NegativeCountError
from inlinescope.remarks import RemarkKind, parse_remark_stream

from conftest import REMARKS, SITES

PRIORITY = [
    Attribute.OptNone,
    Attribute.NoInline,
    Attribute.MinSize,
    Attribute.OptSize,
    Attribute.InlineHint,
    Attribute.AlwaysInline,
]


class TestResolveAttributes:
    def test_paper_examples(self):
        assert resolve_attributes({Attribute.InlineHint, Attribute.OptNone}) is Attribute.OptNone
        assert resolve_attributes({Attribute.AlwaysInline, Attribute.NoInline}) is Attribute.NoInline
        assert resolve_attributes(set()) is None

    def test_all_subsets_resolve_to_highest_priority(self):
        for r in range(len(PRIORITY) + 1):
            for subset in itertools.combinations(PRIORITY, r):
                expected = None
                for attr in PRIORITY:
                    if attr in subset:
                        expected = attr
                        break
                assert resolve_attributes(set(subset)) is expected

    def test_permutation_insensitive(self):
        for perm in itertools.permutations(
            [Attribute.OptSize, Attribute.InlineHint, Attribute.NoInline]
        ):
            assert resolve_attributes(set(perm)) is Attribute.NoInline

    def test_idempotent(self):
        effective = resolve_attributes({Attribute.MinSize, Attribute.AlwaysInline})
        assert resolve_attributes({effective}) is effective

    def test_unranked_attributes_are_inert(self):
        assert resolve_attributes({Attribute.Naked, Attribute.Flatten}) is None


class TestNeverInline:
    def test_fixed_order_first_match_wins(self):
        site = CallSiteDescription(
            misused_blockaddress=True, callee_is_recursive=True, call_is_indirect=True
        )
        assert check_never_inline(site) is NeverReason.MisusedBlockAddress

    def test_each_predicate(self):
        cases = [
            (dict(misused_blockaddress=True), NeverReason.MisusedBlockAddress),
            (dict(caller_attrs={Attribute.OptNone}), NeverReason.CallerOptNone),
            (dict(caller_attrs={Attribute.NoDuplicate}), NeverReason.CallerNoDuplicate),
            (
                dict(callee_attrs={Attribute.AlwaysInline, Attribute.NoInline}),
                NeverReason.ConflictingAttributes,
            ),
            (dict(incompatible_null_pointer=True), NeverReason.IncompatibleNullPointer),
            (dict(callee_attrs={Attribute.NoInline}), NeverReason.CalleeNoInline),
            (dict(callee_linkage=Linkage.Interposable), NeverReason.InterposableCallee),
            (dict(callee_is_unsplit_coroutine=True), NeverReason.UnsplitCoroutine),
            (dict(call_site_noinline=True), NeverReason.CallSiteNoInline),
            (dict(byval_bad_addrspace=True), NeverReason.ByvalBadAddressSpace),
            (dict(call_is_indirect=True), NeverReason.IndirectCall),
            (dict(callee_has_dynamic_alloca=True), NeverReason.DynamicAlloca),
            (dict(callee_returns_twice=True), NeverReason.ReturnsTwice),
            (dict(callee_is_variadic=True), NeverReason.VariadicInit),
            (dict(callee_has_indirect_branch=True), NeverReason.IndirectBranch),
            (dict(callee_has_complex_intrinsic=True), NeverReason.ComplexIntrinsic),
            (dict(callee_is_recursive=True), NeverReason.Recursive),
        ]
        for kwargs, reason in cases:
            assert check_never_inline(CallSiteDescription(**kwargs)) is reason

    def test_clean_site_passes(self):
        assert check_never_inline(CallSiteDescription()) is None

    @given(
        st.integers(min_value=0, max_value=2**11 - 1),
        st.integers(min_value=0, max_value=500000),
        st.integers(min_value=0, max_value=1000),
    )
    @settings(max_examples=120)
    def test_never_dominates_all_params(self, mask, threshold, penalty):
        flags = [
            "misused_blockaddress", "incompatible_null_pointer",
            "callee_is_unsplit_coroutine", "call_site_noinline",
            "byval_bad_addrspace", "call_is_indirect", "callee_has_dynamic_alloca",
            "callee_returns_twice", "callee_is_variadic",
            "callee_has_indirect_branch", "callee_has_complex_intrinsic",
        ]
        kwargs = {name: bool(mask & (1 << i)) for i, name in enumerate(flags)}
        if not any(kwargs.values()):
            kwargs["callee_is_recursive"] = True
        site = CallSiteDescription(**kwargs)
        params = InlineParams(inline_threshold=threshold, inline_call_penalty=penalty)
        decision = decide(site, OptLevel.O2, params)
        assert decision.verdict is Verdict.Never


class TestThreshold:
    def test_level_defaults(self):
        p = InlineParams()
        assert init_threshold(OptLevel.Oz, p) == 5
        assert init_threshold(OptLevel.Os, p) == 50
        assert init_threshold(OptLevel.O1, p) == 225
        assert init_threshold(OptLevel.O2, p) == 225
        assert init_threshold(OptLevel.O3, p) == 250
        assert init_threshold(OptLevel.O0, p) == 0

    def test_override_applies_to_all_levels(self):
        p = InlineParams(inline_threshold=2225)
        for level in (OptLevel.O1, OptLevel.O2, OptLevel.O3, OptLevel.Os, OptLevel.Oz):
            assert init_threshold(level, p) == 2225

    def test_adjust_rules(self):
        p = InlineParams()
        assert adjust_threshold(
            225, CallSiteDescription(callee_attrs={Attribute.InlineHint}), p
        ) == 335
        assert adjust_threshold(225, CallSiteDescription(hotness=Hotness.Hot), p) == 3000
        assert adjust_threshold(
            225, CallSiteDescription(hotness=Hotness.LocallyHot), p
        ) == 525
        assert adjust_threshold(225, CallSiteDescription(hotness=Hotness.Cold), p) == 45
        assert adjust_threshold(
            225, CallSiteDescription(caller_attrs={Attribute.OptSize}), p
        ) == 45
        assert adjust_threshold(
            225,
            CallSiteDescription(body_summary=BodySummary(has_complex_branching=True)),
            p,
        ) == 112
        assert adjust_threshold(
            225,
            CallSiteDescription(body_summary=BodySummary(vector_instruction_count=3)),
            p,
        ) == 112
        assert adjust_threshold(225, CallSiteDescription(), p) == 225

    def test_hint_does_not_lower_large_base(self):
        p = InlineParams()
        site = CallSiteDescription(callee_attrs={Attribute.InlineHint})
        assert adjust_threshold(3000, site, p) == 3000


class TestCost:
    def test_worked_example(self):
        site = CallSiteDescription(
            body_summary=BodySummary(
                instruction_count=10, simplified_away_count=2, internal_call_count=1
            )
        )
        assert compute_cost(site, InlineParams()) == 65

    def test_empty_body(self):
        assert compute_cost(CallSiteDescription(), InlineParams()) == 0

    def test_last_call_to_static(self):
        p = InlineParams()
        site = CallSiteDescription(
            is_last_call_to_static=True,
            callee_linkage=Linkage.Internal,
            body_summary=BodySummary(instruction_count=100),
        )
        assert init_cost(site, p) == -15000
        assert compute_cost(site, p) == -14500

    def test_bonus_requires_internal_linkage(self):
        site = CallSiteDescription(
            is_last_call_to_static=True, callee_linkage=Linkage.External
        )
        assert init_cost(site, InlineParams()) == 0

    def test_savings_terms(self):
        site = CallSiteDescription(
            body_summary=BodySummary(
                instruction_count=20,
                indirect_to_direct_conversions=2,
                byval_value_args=1,
            )
        )
        assert compute_cost(site, InlineParams()) == 100 - 10 - 5

    def test_negative_count_rejected(self):
        site = CallSiteDescription(
            body_summary=BodySummary(instruction_count=1, simplified_away_count=5)
        )
        with pytest.raises(NegativeCountError):
            compute_cost(site, InlineParams())


class TestDecide:
    def test_always_inline_at_o0(self):
        site = CallSiteDescription(callee_attrs={Attribute.AlwaysInline})
        assert decide(site, OptLevel.O0).verdict is Verdict.Always

    def test_o0_declines_everything_else(self):
        assert decide(CallSiteDescription(), OptLevel.O0).verdict is Verdict.Decline

    def test_cost_under_threshold_inlines(self):
        site = CallSiteDescription(body_summary=BodySummary(instruction_count=9))
        d = decide(site, OptLevel.O2)
        assert d.verdict is Verdict.Inline and d.cost == 45 and d.threshold == 225

    def test_tie_declines(self):
        site = CallSiteDescription(body_summary=BodySummary(instruction_count=45))
        d = decide(site, OptLevel.O2)
        assert d.cost == d.threshold == 225
        assert d.verdict is Verdict.Decline

    def test_never_beats_always(self):
        site = CallSiteDescription(
            callee_attrs={Attribute.AlwaysInline}, callee_is_recursive=True
        )
        d = decide(site, OptLevel.O2)
        assert d.verdict is Verdict.Never and d.reason is NeverReason.Recursive

    def test_caller_noinline_does_not_block_always_inline(self):
        # -fno-inline marks callers noinline; the always_inline callee still wins
        site = CallSiteDescription(
            callee_attrs={Attribute.AlwaysInline},
            caller_attrs={Attribute.NoInline},
        )
        assert decide(site, OptLevel.O2).verdict is Verdict.Always

    def test_trace_conservation(self):
        site = CallSiteDescription(
            callee_attrs={Attribute.InlineHint},
            hotness=Hotness.Hot,
            is_last_call_to_static=True,
            callee_linkage=Linkage.Internal,
            body_summary=BodySummary(
                instruction_count=40,
                simplified_away_count=3,
                internal_call_count=2,
                intrinsic_count=1,
                indirect_to_direct_conversions=1,
                vector_instruction_count=2,
            ),
        )
        d = decide(site, OptLevel.O2)
        assert d.cost == sum(step.delta for step in d.cost_trace)
        threshold_replay = d.threshold_trace[0].value + sum(
            step.delta for step in d.threshold_trace[1:]
        )
        assert threshold_replay == d.threshold

    site_strategy = st.builds(
        CallSiteDescription,
        hotness=st.sampled_from(list(Hotness)),
        is_last_call_to_static=st.booleans(),
        callee_linkage=st.sampled_from(list(Linkage)),
        body_summary=st.builds(
            BodySummary,
            instruction_count=st.integers(0, 400),
            simplified_away_count=st.just(0),
            internal_call_count=st.integers(0, 10),
            intrinsic_count=st.integers(0, 10),
            vector_instruction_count=st.integers(0, 3),
            has_complex_branching=st.booleans(),
            indirect_to_direct_conversions=st.integers(0, 5),
            byval_value_args=st.integers(0, 5),
        ),
    )

    @given(
        site_strategy,
        st.integers(0, 5000),
        st.integers(0, 5000),
        st.sampled_from([OptLevel.O1, OptLevel.O2, OptLevel.O3, OptLevel.Os, OptLevel.Oz]),
    )
    @settings(max_examples=150)
    def test_threshold_monotonicity(self, site, low, bump, level):
        if site.callee_linkage is Linkage.Interposable:
            return
        lo = decide(site, level, InlineParams(inline_threshold=low))
        hi = decide(site, level, InlineParams(inline_threshold=low + bump))
        if lo.verdict is Verdict.Inline:
            assert hi.verdict is Verdict.Inline

    @given(site_strategy, st.integers(0, 500), st.integers(0, 500))
    @settings(max_examples=150)
    def test_call_penalty_monotonicity(self, site, penalty, bump):
        if site.callee_linkage is Linkage.Interposable:
            return
        lo = decide(site, OptLevel.O2, InlineParams(inline_call_penalty=penalty))
        hi = decide(site, OptLevel.O2, InlineParams(inline_call_penalty=penalty + bump))
        if lo.verdict is Verdict.Decline:
            assert hi.verdict is not Verdict.Inline


def load_case(case: dict):
    site_doc = json.loads((SITES / f"{case['case']}.site.json").read_text())
    site = CallSiteDescription.from_dict(site_doc)
    params = InlineParams()
    if case["has_params"]:
        params = InlineParams.from_dict(
            json.loads((SITES / f"{case['case']}.params.json").read_text())
        )
    return site, params, OptLevel(case["opt_level"])


def observed_outcome(case: dict):
    """(kind, threshold) for this case's call site from the golden stderr."""
    remarks = parse_remark_stream(
        (REMARKS / f"{case['case']}.stderr.txt").read_text()
    )
    for r in remarks:
        if r.callee == case["callee"] and r.caller == case["caller"]:
            return r
    raise AssertionError(f"no golden remark for {case['case']}")


class TestDecisionParity:
    def test_verdicts_match_compiler(self, micro_cases):
        assert len(micro_cases) >= 10
        agreements = 0
        for case in micro_cases:
            site, params, level = load_case(case)
            decision = decide(site, level, params)
            remark = observed_outcome(case)
            simulated_inline = decision.verdict in (Verdict.Inline, Verdict.Always)
            observed_inline = remark.kind is RemarkKind.Passed
            if simulated_inline == observed_inline:
                agreements += 1
        assert agreements >= len(micro_cases) - 1, f"{agreements}/{len(micro_cases)}"

    def test_thresholds_match_exactly(self, micro_cases):
        checked = 0
        for case in micro_cases:
            remark = observed_outcome(case)
            if remark.threshold is None:
                continue
            site, params, level = load_case(case)
            decision = decide(site, level, params)
            assert decision.threshold == remark.threshold, case["case"]
            checked += 1
        assert checked >= 5
