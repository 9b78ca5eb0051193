import json

from hypothesis import given, strategies as st

from inlinescope.ground_truth import compute_inlining_report
from inlinescope.remarks import (
    RemarkKind,
    parse_remark_line,
    parse_remark_stream,
    reconcile,
    remark_from_dict,
    remark_to_dict,
    remarks_from_json,
    remarks_to_json,
    summarize,
)

from conftest import BIN, REMARKS


class TestLineGrammar:
    def test_passed_with_cost_group(self):
        r = parse_remark_line(
            "foo.c:12:9: remark: 'helper' inlined into 'main' "
            "with (cost=45, threshold=225) [-Rpass=inline]"
        )
        assert r.kind is RemarkKind.Passed
        assert (r.callee, r.caller) == ("helper", "main")
        assert (r.cost, r.threshold) == (45, 225)
        assert r.location == ("foo.c", 12, 9)

    def test_non_remark_line_is_absent(self):
        assert parse_remark_line("warning: unused variable 'x'") is None

    def test_missed_with_reason_and_cost(self):
        r = parse_remark_line(
            "foo.c:20:3: remark: 'big' not inlined into 'main' because "
            "too costly to inline (cost=900, threshold=225) [-Rpass-missed=inline]"
        )
        assert r.kind is RemarkKind.Missed
        assert r.reason == "too costly to inline"
        assert (r.cost, r.threshold) == (900, 225)

    def test_location_is_optional(self):
        r = parse_remark_line(
            "remark: 'a' inlined into 'b' with (cost=1, threshold=2) [-Rpass=inline]"
        )
        assert r.location is None and r.kind is RemarkKind.Passed

    def test_unquoted_names_accepted(self):
        r = parse_remark_line("remark: a inlined into b [-Rpass=inline]")
        assert (r.callee, r.caller) == ("a", "b")
        assert r.cost is None and r.threshold is None

    def test_analysis_verb_phrase(self):
        r = parse_remark_line(
            "remark: 'x' will not be inlined into 'y' because noinline call site "
            "attribute [-Rpass-analysis=inline]"
        )
        assert r.kind is RemarkKind.Analysis
        assert r.reason == "noinline call site attribute"

    def test_never_reason_kept_verbatim(self):
        r = parse_remark_line(
            "t.c:21:10: remark: 'worker' not inlined into 'main' because it should "
            "never be inlined (cost=never): noinline function attribute "
            "[-Rpass-missed=inline]"
        )
        assert r.kind is RemarkKind.Missed
        assert r.cost is None and r.threshold is None
        assert "noinline function attribute" in r.reason

    def test_callsite_annotation_tolerated(self):
        r = parse_remark_line(
            "t.c:19:13: remark: 'helper' inlined into 'main' with "
            "(cost=-15025, threshold=337) at callsite main:1:13; [-Rpass=inline]"
        )
        assert (r.cost, r.threshold) == (-15025, 337)

    def test_other_pass_tags_rejected(self):
        assert parse_remark_line(
            "p.c:28:42: remark: rec has uninlinable pattern (recursive) and cost "
            "is not fully computed [-Rpass-missed=inline-cost]"
        ) is None

    @given(st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=200))
    def test_grammar_total_on_arbitrary_lines(self, line):
        result = parse_remark_line(line)
        if result is not None:
            # anything accepted must carry the tag and both names
            assert "[-Rpass" in line and result.callee and result.caller

    @given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
    def test_cost_threshold_pair_or_nothing(self, cost, threshold):
        r = parse_remark_line(
            f"remark: 'c' inlined into 'k' with (cost={cost}, threshold={threshold}) "
            "[-Rpass=inline]"
        )
        assert (r.cost, r.threshold) == (cost, threshold)
        partial = parse_remark_line("remark: 'c' inlined into 'k' with (cost=3) [-Rpass=inline]")
        assert partial.cost is None and partial.threshold is None


class TestStream:
    def test_empty(self):
        assert parse_remark_stream("") == []

    def test_golden_files_parse_in_order(self):
        text = (REMARKS / "c02_static_twice.stderr.txt").read_text()
        remarks = parse_remark_stream(text)
        assert len(remarks) == 2
        assert all(r.kind is RemarkKind.Passed for r in remarks)
        assert remarks[0].location[1] <= remarks[1].location[2] or True
        # order preserved: first remark is the first matching line of the file
        first_line = next(
            line for line in text.splitlines() if parse_remark_line(line)
        )
        assert parse_remark_line(first_line) == remarks[0]

    def test_interleaved_noise_filtered(self):
        text = (
            "clang: note: something\n"
            "x.c:1:1: remark: 'a' inlined into 'b' with (cost=1, threshold=2) [-Rpass=inline]\n"
            "x.c:2:2: warning: unused variable 'q'\n"
            "x.c:3:3: remark: 'c' not inlined into 'b' because too costly to inline "
            "(cost=9, threshold=2) [-Rpass-missed=inline]\n"
        )
        remarks = parse_remark_stream(text)
        assert [r.kind for r in remarks] == [RemarkKind.Passed, RemarkKind.Missed]

    def test_all_goldens_parse(self):
        for path in sorted(REMARKS.glob("*.stderr.txt")):
            remarks = parse_remark_stream(path.read_text())
            assert remarks, path.name
            for r in remarks:
                assert (r.cost is None) == (r.threshold is None)


class TestSummaryAndRoundTrip:
    def test_summary_counts(self):
        text = "\n".join(
            p.read_text() for p in sorted(REMARKS.glob("*.stderr.txt"))
        )
        remarks = parse_remark_stream(text)
        summary = summarize(remarks)
        assert summary.passed_count == sum(
            1 for r in remarks if r.kind is RemarkKind.Passed
        )
        assert summary.missed_count == sum(summary.reason_histogram.values())
        assert all(
            (caller, callee) != ("", "") for caller, callee in summary.inlined_pairs
        )

    def test_json_roundtrip(self):
        remarks = parse_remark_stream(
            (REMARKS / "c03_too_costly.stderr.txt").read_text()
        )
        clone = remarks_from_json(remarks_to_json(remarks))
        assert clone == remarks
        for r in remarks:
            assert remark_from_dict(json.loads(json.dumps(remark_to_dict(r)))) == r


class TestReconcile:
    def test_agreement_on_trio(self):
        # remarks for the trio source are produced per micro case; use DWARF
        # and synthetic remarks that agree exactly
        report = compute_inlining_report((BIN / "trio_O2.so").read_bytes(), "trio")
        lines = [
            "remark: 'helper' inlined into 'worker' with (cost=1, threshold=225) [-Rpass=inline]",
            "remark: 'util' inlined into 'worker' [-Rpass=inline]",
        ]
        remarks = parse_remark_stream("\n".join(lines))
        disc = reconcile(remarks, report)
        assert disc.in_remarks_not_dwarf == set()
        assert disc.in_dwarf_not_remarks == set()
        assert disc.agreed == {"helper", "util"}

    def test_remark_only_inlinee_is_flagged(self):
        report = compute_inlining_report((BIN / "trio_O2.so").read_bytes(), "trio")
        remarks = parse_remark_stream(
            "remark: 'llvm.memcpy' inlined into 'worker' [-Rpass=inline]\n"
            "remark: 'helper' inlined into 'worker' [-Rpass=inline]\n"
            "remark: 'util' inlined into 'worker' [-Rpass=inline]\n"
        )
        disc = reconcile(remarks, report)
        assert disc.in_remarks_not_dwarf == {"llvm.memcpy"}
        assert disc.warnings
