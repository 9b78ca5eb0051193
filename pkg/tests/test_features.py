import itertools

import pytest

from inlinescope.errors import ListingSyntaxError, UnknownRegistryVersion
from inlinescope.features import (
    build_cfg,
    categorize_instruction,
    detect_loops,
    extract_features,
    features_to_csv,
    get_registry,
    parse_listing,
)
from inlinescope.features.extract import features_from_csv
from inlinescope.features.registry import CATEGORY_COUNT_SLOTS, REGISTRY_VERSION

from conftest import LISTINGS

STRAIGHT = """0000000000000000 <straight>:
   0:\t55                   \tpush   %rbp
   1:\t48 89 e5             \tmov    %rsp,%rbp
   4:\t48 83 c0 01          \tadd    $0x1,%rax
   8:\t5d                   \tpop    %rbp
   9:\tc3                   \tret
"""

DIAMOND = """0000000000000000 <diamond>:
   0:\t48 85 ff             \ttest   %rdi,%rdi
   3:\t74 08                \tje     d <diamond+0xd>
   5:\t48 83 c7 01          \tadd    $0x1,%rdi
   9:\teb 04                \tjmp    f <diamond+0xf>
   d:\t31 ff                \txor    %edi,%edi
   f:\tc3                   \tret
"""

SELF_LOOP = """0000000000000000 <spin>:
   0:\teb fe                \tjmp    0 <spin>
"""

SINGLE_BACK_EDGE = """0000000000000000 <countdown>:
   0:\t48 83 ef 01          \tsub    $0x1,%rdi
   4:\t48 85 ff             \ttest   %rdi,%rdi
   7:\t75 f7                \tjne    0 <countdown>
   9:\tc3                   \tret
"""

NESTED_LOOPS = """0000000000000000 <nested>:
   0:\t31 c0                \txor    %eax,%eax
   2:\t31 c9                \txor    %ecx,%ecx
   4:\t48 83 c1 01          \tadd    $0x1,%rcx
   8:\t48 39 d1             \tcmp    %rdx,%rcx
   b:\t75 f7                \tjne    4 <nested+0x4>
   d:\t48 83 c0 01          \tadd    $0x1,%rax
  11:\t48 39 f8             \tcmp    %rdi,%rax
  14:\t75 ec                \tjne    2 <nested+0x2>
  16:\tc3                   \tret
"""


def brute_force_loops(cfg):
    """Exhaustive back-edge oracle: dominators by path enumeration.

    h dominates t iff every acyclic entry->t path passes through h. Usable on
    the <= 8 block fixtures only.
    """
    blocks = [b.index for b in cfg.blocks if b.index not in cfg.unreachable]
    if not blocks:
        return []
    paths_to: dict[int, list[list[int]]] = {n: [] for n in blocks}

    def walk(node, path):
        path = path + [node]
        paths_to[node].append(path)
        for s in cfg.blocks[node].successors:
            if s in cfg.unreachable or s in path:
                continue
            walk(s, path)

    walk(0, [])

    def dominates(h, t):
        return all(h in p for p in paths_to[t]) if paths_to[t] else False

    back_edges = []
    for b in cfg.blocks:
        if b.index in cfg.unreachable:
            continue
        for s in b.successors:
            if s not in cfg.unreachable and dominates(s, b.index):
                back_edges.append((b.index, s))
    headers = {}
    for tail, header in back_edges:
        body = {header}
        stack = [tail]
        while stack:
            n = stack.pop()
            if n in body:
                continue
            body.add(n)
            stack.extend(p for p in cfg.blocks[n].predecessors
                         if p not in cfg.unreachable)
        headers.setdefault(header, set()).update(body)
    return sorted((h, frozenset(bd)) for h, bd in headers.items())


class TestListing:
    def test_hand_fixture(self):
        listing = parse_listing(DIAMOND)
        assert len(listing.functions) == 1
        fn = listing.functions[0]
        assert fn.name == "diamond" and len(fn.instructions) == 6
        je = fn.instructions[1]
        assert je.is_conditional and je.explicit_branch_target == 0xD

    def test_empty_input(self):
        assert parse_listing("").functions == []

    def test_malformed_address_column(self):
        bad = "0000000000000000 <f>:\n   zz:\t90                   \tnop\n"
        with pytest.raises(ListingSyntaxError) as err:
            parse_listing(bad)
        assert err.value.line_number == 2

    def test_objdump_chrome_tolerated(self):
        text = (LISTINGS / "trio_O2.objdump.txt").read_text()
        listing = parse_listing(text)
        names = {f.name for f in listing.functions}
        assert {"util", "worker"} <= names

    def test_byte_continuation_lines(self):
        text = (
            "0000000000000000 <f>:\n"
            "   0:\t48 ba 88 77 66 55 44 \tmovabs $0x1122334455667788,%rdx\n"
            "   7:\t33 22 11\n"
            "   a:\tc3                   \tret\n"
        )
        fn = parse_listing(text).functions[0]
        assert len(fn.instructions) == 2
        assert fn.instructions[0].byte_size == 10

    def test_prefix_folding(self):
        text = (
            "0000000000000000 <f>:\n"
            "   0:\tf3 48 ab             \trep stos %rax,%es:(%rdi)\n"
            "   3:\tc3                   \tret\n"
        )
        fn = parse_listing(text).functions[0]
        assert fn.instructions[0].mnemonic == "rep stos"
        assert fn.instructions[0].category == "string_op"


class TestCategorize:
    def test_spec_examples(self):
        assert categorize_instruction("add") == "arithmetic"
        assert categorize_instruction("rep stosq") == "string_op"
        assert categorize_instruction("xyzzy") == "unknown"

    def test_total_mapping(self):
        categories = {
            "mov": "data_transfer", "movq": "data_transfer", "lea": "data_transfer",
            "addl": "arithmetic", "imul": "arithmetic", "xor": "logic",
            "shl": "shift", "cmp": "compare", "jmp": "control_transfer",
            "jne": "control_transfer", "call": "call", "ret": "return",
            "retq": "return", "addsd": "floating_point", "movaps": "vector",
            "paddd": "vector", "vaddps": "vector", "nop": "misc",
            "endbr64": "misc", "sete": "data_transfer", "cmovne": "data_transfer",
            # ARM
            "ldr": "data_transfer", "orr": "logic", "lsl": "shift",
            "bl": "call", "beq": "control_transfer", "svc": "misc",
        }
        for mnemonic, expected in categories.items():
            assert categorize_instruction(mnemonic) == expected, mnemonic

    def test_empty_and_garbage(self):
        assert categorize_instruction("") == "unknown"
        assert categorize_instruction("  ") == "unknown"


class TestCfg:
    def test_straight_line(self):
        cfg = build_cfg(parse_listing(STRAIGHT).functions[0])
        assert len(cfg.blocks) == 1 and cfg.edge_count == 0
        assert detect_loops(cfg) == []

    def test_diamond(self):
        cfg = build_cfg(parse_listing(DIAMOND).functions[0])
        assert len(cfg.blocks) == 4 and cfg.edge_count == 4
        assert detect_loops(cfg) == []

    def test_self_loop(self):
        cfg = build_cfg(parse_listing(SELF_LOOP).functions[0])
        assert len(cfg.blocks) == 1 and cfg.edge_count == 1
        loops = detect_loops(cfg)
        assert len(loops) == 1 and loops[0].size == 1

    def test_single_back_edge(self):
        cfg = build_cfg(parse_listing(SINGLE_BACK_EDGE).functions[0])
        loops = detect_loops(cfg)
        assert len(loops) == 1
        assert loops[0].size == 3  # sub, test, jne

    def test_nested_loops_contained(self):
        cfg = build_cfg(parse_listing(NESTED_LOOPS).functions[0])
        loops = detect_loops(cfg)
        assert len(loops) == 2
        inner, outer = sorted(loops, key=lambda l: len(l.body))
        assert inner.body < outer.body

    def test_dangling_target_recorded(self):
        # branch lands mid-instruction: intra-range but not an instruction start
        text = (
            "0000000000000000 <f>:\n"
            "   0:\t74 ff                \tje     1 <f+0x1>\n"
            "   2:\tc3                   \tret\n"
        )
        cfg = build_cfg(parse_listing(text).functions[0])
        assert cfg.dangling_targets == [1]
        assert cfg.edge_count == 1  # only the fall-through edge survives

    def test_external_target_flagged(self):
        text = (
            "0000000000000000 <f>:\n"
            "   0:\teb 20                \tjmp    22 <g>\n"
        )
        cfg = build_cfg(parse_listing(text).functions[0])
        assert cfg.external_targets == [0x22]
        assert cfg.edge_count == 0

    def test_loops_match_brute_force_oracle(self):
        fixtures = [STRAIGHT, DIAMOND, SELF_LOOP, SINGLE_BACK_EDGE, NESTED_LOOPS]
        for text in fixtures:
            cfg = build_cfg(parse_listing(text).functions[0])
            assert len(cfg.blocks) <= 8
            expected = brute_force_loops(cfg)
            actual = sorted((l.header, frozenset(l.body)) for l in detect_loops(cfg))
            assert actual == expected

    def test_real_listing_loops_match_oracle(self):
        listing = parse_listing((LISTINGS / "trio_O2.objdump.txt").read_text())
        for fn in listing.functions:
            cfg = build_cfg(fn)
            if len(cfg.blocks) > 8:
                continue
            expected = brute_force_loops(cfg)
            actual = sorted((l.header, frozenset(l.body)) for l in detect_loops(cfg))
            assert actual == expected, fn.name


class TestFeatureVector:
    def test_registry_shape(self):
        registry = get_registry()
        by_cat = {"instruction": 0, "cfg": 0, "cg": 0}
        for slot in registry.slots:
            by_cat[slot.category] += 1
        assert (by_cat["instruction"], by_cat["cfg"], by_cat["cg"]) == (36, 20, 6)
        names = registry.names()
        assert len(set(names)) == 62
        assert names[3] == "number of unknown instructions"  # slot 4 anchor

    def test_unknown_registry_version(self):
        with pytest.raises(UnknownRegistryVersion):
            extract_features(parse_listing(STRAIGHT), "bogus.v9")

    def test_hand_counted_function(self):
        text = (
            "0000000000000000 <counted>:\n"
            "   0:\t48 01 c8             \tadd    %rcx,%rax\n"
            "   3:\t48 01 c8             \tadd    %rcx,%rax\n"
            "   6:\t48 01 c8             \tadd    %rcx,%rax\n"
            "   9:\te8 00 00 00 00       \tcall   e <counted+0xe>\n"
            "   e:\tc3                   \tret\n"
        )
        per_fn, _ = extract_features(parse_listing(text))
        vec = per_fn["counted"]
        assert vec.slot(1) == 5
        assert vec.slot(6) == 3  # arithmetic
        assert vec.slot(17) == 1  # call
        assert vec.slot(19) == 1  # return

    def test_empty_function_all_zero(self):
        text = "0000000000000000 <hollow>:\n"
        per_fn, _ = extract_features(parse_listing(text))
        assert per_fn["hollow"].values == [0.0] * 62

    def test_category_counts_sum_to_total(self):
        listing = parse_listing((LISTINGS / "corpus_O2.objdump.txt").read_text())
        per_fn, _ = extract_features(listing)
        slots = list(CATEGORY_COUNT_SLOTS.values())
        for name, vec in per_fn.items():
            assert sum(vec.slot(s) for s in slots) == vec.slot(1), name

    def test_callgraph_slots(self):
        text = (
            "0000000000000000 <leaf>:\n"
            "   0:\tc3                   \tret\n"
            "0000000000000010 <mid>:\n"
            "  10:\te8 eb ff ff ff       \tcall   0 <leaf>\n"
            "  15:\te8 e6 ff ff ff       \tcall   0 <leaf>\n"
            "  1a:\te8 00 00 00 00       \tcall   1f <printf@plt>\n"
            "  1f:\tc3                   \tret\n"
            "0000000000000020 <top>:\n"
            "  20:\te8 eb ff ff ff       \tcall   10 <mid>\n"
            "  25:\tff d0                \tcall   *%rax\n"
            "  27:\te8 f4 ff ff ff       \tcall   20 <top>\n"
            "  2c:\tc3                   \tret\n"
        )
        per_fn, _ = extract_features(parse_listing(text))
        mid = per_fn["mid"]
        assert mid.slot(57) == 1  # internal callees: leaf
        assert mid.slot(58) == 1  # internal callers: top
        assert mid.slot(59) == 1  # external: printf
        assert mid.slot(61) == 3  # outgoing call sites
        leaf = per_fn["leaf"]
        assert leaf.slot(62) == 2  # two calls from mid
        top = per_fn["top"]
        assert top.slot(60) == 1  # recursive
        assert top.slot(59) == 1  # indirect sink

    def test_aggregate_and_determinism(self):
        listing = parse_listing((LISTINGS / "trio_O2.objdump.txt").read_text())
        per_a, agg_a = extract_features(listing)
        per_b, agg_b = extract_features(parse_listing(
            (LISTINGS / "trio_O2.objdump.txt").read_text()
        ))
        assert agg_a.values == agg_b.values
        assert {n: v.values for n, v in per_a.items()} == {
            n: v.values for n, v in per_b.items()
        }
        assert agg_a.slot(1) == sum(v.slot(1) for v in per_a.values())

    def test_csv_roundtrip(self):
        listing = parse_listing((LISTINGS / "trio_O2.objdump.txt").read_text())
        per_fn, agg = extract_features(listing)
        text = features_to_csv(per_fn, agg)
        header = text.splitlines()[0].split(",")
        assert header == ["function"] + [f"f{i}" for i in range(1, 63)]
        rows, aggregate = features_from_csv(text)
        assert set(rows) == set(per_fn)
        assert aggregate is not None
        for name, values in rows.items():
            assert len(values) == 62
