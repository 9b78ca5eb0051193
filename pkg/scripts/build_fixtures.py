#!/usr/bin/env python3
"""Regenerate the checked-in test fixtures.

Needs clang 14, objcopy, objdump, and readelf on PATH. Produces, under
tests/fixtures/:

  src/        fixture C sources (written by this script, kept in git)
  bin/        pre-built ELF fixtures
  remarks/    golden -Rpass stderr captures for the micro corpus
  sites/      call-site and parameter JSON descriptions per micro case
  reports/    frozen inlining reports (byte-exact oracle for extraction)
  oracle/     independent readelf-derived DWARF summaries
  listings/   objdump disassembly captures
  sweepproj/  tiny project used by sweep tests
  micro_cases.json   manifest tying the micro corpus together

The script asserts every fixture property the test suite relies on, so a
successful run re-validates the corpus design against the local toolchain.
"""

from __future__ import annotations

import json
import re
import shutil
import subprocess
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "tests" / "fixtures"
SRC = FIXTURES / "src"
BIN = FIXTURES / "bin"
REMARKS = FIXTURES / "remarks"
SITES = FIXTURES / "sites"
REPORTS = FIXTURES / "reports"
ORACLE = FIXTURES / "oracle"
LISTINGS = FIXTURES / "listings"
SWEEPPROJ = FIXTURES / "sweepproj"

RFLAGS = ["-Rpass=inline", "-Rpass-missed=inline", "-Rpass-analysis=inline"]

sys.path.insert(0, str(REPO / "src"))

from inlinescope.ground_truth import (  # noqa: E402
    InlineAttr,
    Presence,
    compute_inlining_report,
    report_to_json,
)

TRIO_C = """\
static int helper(int x) {
    int acc = x;
    for (int i = 0; i < 8; i++)
        acc += (acc >> 1) ^ (i * 3);
    return acc;
}

__attribute__((always_inline)) int util(int x) {
    int acc = 0;
    for (int i = 1; i <= x % 7; i++)
        acc += i * i - x;
    return acc + 5;
}

__attribute__((noinline)) int worker(int seed) {
    int v = helper(seed);
    v += util(v);
    return v * 2 + 1;
}
"""

TRIO_NOALWAYS_C = TRIO_C.replace("__attribute__((always_inline)) ", "")

CORPUS_C = """\
/* Graded-size function corpus for inlining-ratio measurements.
 * The size bands are straight-line arithmetic chains so each band's inline
 * cost stays stable across optimization levels (loops would be unrolled
 * differently per level and blur the bands). */

static int tiny_a(int x) {
    int a = x + 1;
    a ^= a >> 3;
    return a * 2 + (x & 5);
}

static int tiny_b(int x) {
    int a = x * 2 - 1;
    a += a >> 2;
    return a ^ (x | 9);
}

static int small_a(int x) {
    int a = x;
    a += (a >> 1) ^ 11; a = a * 3 + 7; a ^= a << 2; a -= x & 31;
    a += (a >> 4) | 3;  a = a * 5 + 1; a ^= a >> 3; a += x * 3;
    return a;
}

static int small_b(int x) {
    int a = x ^ 0x1234;
    a = a * 7 + 5; a ^= a >> 2; a += x & 63; a -= a >> 5;
    a = a * 9 + 3; a ^= a << 1; a += x * 5;  a |= 17;
    return a;
}

static int medium_a(int x) {
    int a = x;
    a = a * 3 + 1;  a ^= a >> 2; a += x * 5;  a |= 12; a -= x / 3;
    a = a * 5 + 2;  a ^= a >> 3; a += x * 7;  a &= ~1; a += x % 9;
    a = a * 7 + 3;  a ^= a >> 4; a += x * 11; a |= 5;  a -= x / 7;
    a = a * 11 + 4; a ^= a >> 5; a += x * 13; a &= ~2; a += x % 11;
    a = a * 13 + 5; a ^= a >> 6; a += x * 17; a |= 9;  a -= x / 9;
    return a;
}

static int medium_b(int x) {
    int a = x + 99;
    a = a * 17 + 1; a ^= a >> 3; a += x * 19; a |= 33; a -= x / 2;
    a = a * 19 + 2; a ^= a >> 4; a += x * 23; a &= ~4; a += x % 7;
    a = a * 23 + 3; a ^= a >> 5; a += x * 29; a |= 65; a -= x / 5;
    a = a * 29 + 4; a ^= a >> 6; a += x * 31; a &= ~8; a += x % 13;
    a = a * 31 + 5; a ^= a >> 7; a += x * 37; a |= 129; a -= x / 8;
    return a;
}

#define ROUND(k) \\
    a = a * (k) + 1; a ^= a >> 2; a += x * (k); a |= (k); a -= x / ((k) + 2); \\
    a = a * (k) + 3; a ^= a >> 4; a -= x * ((k) - 1); a &= ~(k); a += x % ((k) + 5);

int large_a(int x) {
    int a = x;
    ROUND(3) ROUND(5) ROUND(7) ROUND(9) ROUND(11) ROUND(13) ROUND(15) ROUND(17)
    ROUND(19) ROUND(21) ROUND(23) ROUND(25)
    return a;
}

int large_b(int x) {
    int a = x + 7;
    ROUND(4) ROUND(6) ROUND(8) ROUND(10) ROUND(12) ROUND(14) ROUND(16) ROUND(18)
    ROUND(20) ROUND(22) ROUND(24) ROUND(26)
    return a;
}

int huge_a(int x) {
    int a = x;
    ROUND(3) ROUND(4) ROUND(5) ROUND(6) ROUND(7) ROUND(8) ROUND(9) ROUND(10)
    ROUND(11) ROUND(12) ROUND(13) ROUND(14) ROUND(15) ROUND(16) ROUND(17)
    ROUND(18) ROUND(19) ROUND(20) ROUND(21) ROUND(22) ROUND(23) ROUND(24)
    ROUND(25) ROUND(26) ROUND(27) ROUND(28) ROUND(29) ROUND(30) ROUND(31)
    ROUND(32) ROUND(33) ROUND(34) ROUND(35) ROUND(36) ROUND(37) ROUND(38)
    ROUND(39) ROUND(40) ROUND(41) ROUND(42) ROUND(43) ROUND(44) ROUND(45)
    ROUND(46) ROUND(47) ROUND(48)
    return a;
}

__attribute__((noinline)) int pinned(int x) {
    int acc = 0;
    for (int i = 0; i < (x & 7); i++) acc += i * x;
    return acc;
}

__attribute__((always_inline)) int forced(int x) {
    int acc = x;
    for (int i = 0; i < 3; i++) acc += (acc >> 1) ^ i;
    return acc;
}

int chain(int x) { return x <= 1 ? 1 : x + chain(x - 1); }

#include <stdarg.h>
int varsum(int n, ...) {
    va_list ap; va_start(ap, n);
    int s = 0;
    for (int i = 0; i < n; i++) s += va_arg(ap, int);
    va_end(ap);
    return s;
}

int harness(int seed) {
    int v = seed;
    v += tiny_a(v); v += tiny_a(v + 3); v += tiny_b(v); v += tiny_b(v - 4);
    v += small_a(v); v += small_a(v + 1); v += small_b(v); v += small_b(v - 2);
    v += medium_a(v); v += medium_a(v + 5); v += medium_b(v); v += medium_b(v - 7);
    v += large_a(v); v += large_a(v + 9); v += large_b(v); v += large_b(v - 11);
    v += huge_a(v); v += huge_a(v + 13);
    v += pinned(v); v += forced(v); v += forced(v + 1);
    v += chain(v & 7); v += varsum(3, v, seed, 42);
    return v;
}
"""

SWEEPPROJ_C = """\
static int tiny(int x) {
    int a = x + 1;
    a ^= a >> 3;
    return a * 2 + (x & 5);
}

static int small(int x) {
    int a = x;
    a += (a >> 1) ^ 11; a = a * 3 + 7; a ^= a << 2; a -= x & 31;
    a += (a >> 4) | 3;  a = a * 5 + 1; a ^= a >> 3; a += x * 3;
    return a;
}

#define ROUND(k) \\
    a = a * (k) + 1; a ^= a >> 2; a += x * (k); a |= (k); a -= x / ((k) + 2); \\
    a = a * (k) + 3; a ^= a >> 4; a -= x * ((k) - 1); a &= ~(k); a += x % ((k) + 5);

int medium(int x) {
    int a = x;
    ROUND(3) ROUND(5) ROUND(7)
    return a;
}

int large(int x) {
    int a = x;
    ROUND(3) ROUND(5) ROUND(7) ROUND(9) ROUND(11) ROUND(13) ROUND(15) ROUND(17)
    ROUND(19) ROUND(21) ROUND(23) ROUND(25)
    return a;
}

int harness(int seed) {
    int v = seed;
    v += tiny(v); v += tiny(v + 3);
    v += small(v); v += small(v + 1);
    v += medium(v); v += medium(v + 5);
    v += large(v); v += large(v + 9);
    return v;
}
"""

MICRO_SOURCES = {
    "c01_static_once": """\
static int helper(int x) {
    int a = x;
    for (int i = 0; i < (x & 7); i++)
        a += (a >> 1) ^ (i * 3);
    return a;
}

int driver(int seed) {
    return helper(seed) * 2 + 1;
}
""",
    "c02_static_twice": """\
static int helper(int x) {
    int a = x;
    for (int i = 0; i < (x & 7); i++)
        a += (a >> 1) ^ (i * 3);
    return a;
}

int driver(int seed) {
    return helper(seed) + helper(seed + 1);
}
""",
    "c03_too_costly": """\
#define ROUND(k) \\
    a = a * (k) + 1; a ^= a >> 2; a += x * (k); a |= (k); a -= x / ((k) + 2); \\
    a = a * (k) + 3; a ^= a >> 4; a -= x * ((k) - 1); a &= ~(k); a += x % ((k) + 5);

int big(int x) {
    int a = x;
    for (int i = 0; i < (x & 3); i++)
        a ^= (a >> i) + x;
    ROUND(3) ROUND(5) ROUND(7) ROUND(9) ROUND(11) ROUND(13) ROUND(15) ROUND(17)
    ROUND(19) ROUND(21) ROUND(23) ROUND(25)
    return a;
}

int driver(int seed) {
    return big(seed) + seed;
}
""",
    "c04_noinline": """\
__attribute__((noinline)) int worker(int x) {
    int a = x;
    for (int i = 0; i < 4; i++)
        a += i * x;
    return a;
}

int driver(int seed) {
    return worker(seed) + 1;
}
""",
    "c05_recursive": """\
int spiral(int x) {
    if (x <= 1)
        return 1;
    return x + spiral(x - 1);
}

int driver(int seed) {
    return spiral(seed & 15);
}
""",
    "c06_variadic": """\
#include <stdarg.h>

int gather(int n, ...) {
    va_list ap;
    va_start(ap, n);
    int s = 0;
    for (int i = 0; i < n; i++)
        s += va_arg(ap, int);
    va_end(ap);
    return s;
}

int driver(int seed) {
    return gather(3, seed, seed * 2, seed * 3);
}
""",
    "c07_always_o0": """\
__attribute__((always_inline)) int fast(int x) {
    int a = x;
    for (int i = 0; i < 3; i++)
        a += (a >> 1) ^ i;
    return a;
}

int driver(int seed) {
    return fast(seed) + 5;
}
""",
    "c08_o3_small": """\
int nudge(int x) {
    int a = x ^ 0x77;
    for (int i = 0; i < (x & 3); i++)
        a += (a >> 1) ^ i;
    a = a * 3 + 1; a ^= a >> 2; a += x * 5;
    return a;
}

int driver(int seed) {
    return nudge(seed) + nudge(seed + 1);
}
""",
    "c11_o1_small": """\
int bump(int x) {
    int a = x + 3;
    for (int i = 0; i < (x & 1); i++)
        a ^= x >> i;
    a = a * 7 + 1; a ^= a >> 3; a += x & 31;
    return a;
}

int driver(int seed) {
    return bump(seed) + bump(seed + 2);
}
""",
    "c12_optnone_caller": """\
int plain(int x) {
    int a = x;
    for (int i = 1; i < 5; i++)
        a *= i + x;
    return a;
}

__attribute__((optnone)) int curator(int seed) {
    return plain(seed) + 1;
}
""",
}

# c09/c10 reuse the c03 source with different compile settings.
MICRO_CASES = [
    # case, source, opt, extra flags, callee, caller, site description
    {
        "case": "c01_static_once",
        "source": "c01_static_once",
        "opt_level": "O2",
        "extra_flags": [],
        "callee": "helper",
        "caller": "driver",
        "site": {
            "callee_linkage": "Internal",
            "is_last_call_to_static": True,
            "body_summary": {"instruction_count": 14, "internal_call_count": 0},
        },
    },
    {
        "case": "c02_static_twice",
        "source": "c02_static_twice",
        "opt_level": "O2",
        "extra_flags": [],
        "callee": "helper",
        "caller": "driver",
        "site": {
            "callee_linkage": "Internal",
            "body_summary": {"instruction_count": 14, "simplified_away_count": 2},
        },
    },
    {
        "case": "c03_too_costly",
        "source": "c03_too_costly",
        "opt_level": "O2",
        "extra_flags": [],
        "callee": "big",
        "caller": "driver",
        "site": {"body_summary": {"instruction_count": 220, "simplified_away_count": 10}},
    },
    {
        "case": "c04_noinline",
        "source": "c04_noinline",
        "opt_level": "O2",
        "extra_flags": [],
        "callee": "worker",
        "caller": "driver",
        "site": {
            "callee_attrs": ["NoInline"],
            "body_summary": {"instruction_count": 12},
        },
    },
    {
        "case": "c05_recursive",
        "source": "c05_recursive",
        "opt_level": "O2",
        "extra_flags": [],
        "callee": "spiral",
        "caller": "spiral",
        "site": {
            "callee_is_recursive": True,
            "body_summary": {"instruction_count": 10},
        },
    },
    {
        "case": "c06_variadic",
        "source": "c06_variadic",
        "opt_level": "O2",
        "extra_flags": [],
        "callee": "gather",
        "caller": "driver",
        "site": {
            "callee_is_variadic": True,
            "body_summary": {"instruction_count": 25},
        },
    },
    {
        "case": "c07_always_o0",
        "source": "c07_always_o0",
        "opt_level": "O0",
        "extra_flags": [],
        "callee": "fast",
        "caller": "driver",
        "site": {
            "callee_attrs": ["AlwaysInline"],
            "body_summary": {"instruction_count": 12},
        },
    },
    {
        "case": "c08_o3_small",
        "source": "c08_o3_small",
        "opt_level": "O3",
        "extra_flags": [],
        "callee": "nudge",
        "caller": "driver",
        "site": {"body_summary": {"instruction_count": 16}},
    },
    {
        "case": "c09_o3_big",
        "source": "c03_too_costly",
        "opt_level": "O3",
        "extra_flags": [],
        "callee": "big",
        "caller": "driver",
        "site": {"body_summary": {"instruction_count": 220, "simplified_away_count": 10}},
    },
    {
        "case": "c10_override",
        "source": "c03_too_costly",
        "opt_level": "O2",
        "extra_flags": ["-mllvm", "-inline-threshold=2225"],
        "callee": "big",
        "caller": "driver",
        "site": {"body_summary": {"instruction_count": 220, "simplified_away_count": 10}},
        "params": {"inline_threshold": 2225},
    },
    {
        "case": "c11_o1_small",
        "source": "c11_o1_small",
        "opt_level": "O1",
        "extra_flags": [],
        "callee": "bump",
        "caller": "driver",
        "site": {"body_summary": {"instruction_count": 11}},
    },
    {
        "case": "c12_optnone_caller",
        "source": "c12_optnone_caller",
        "opt_level": "O2",
        "extra_flags": [],
        "callee": "plain",
        "caller": "curator",
        "site": {
            "caller_attrs": ["OptNone"],
            "body_summary": {"instruction_count": 14},
        },
    },
]


def run(cmd: list[str], **kwargs) -> subprocess.CompletedProcess:
    proc = subprocess.run(cmd, capture_output=True, text=True, **kwargs)
    if proc.returncode != 0:
        raise SystemExit(
            f"command failed ({proc.returncode}): {' '.join(cmd)}\n{proc.stderr[-2000:]}"
        )
    return proc


def clang_version() -> str:
    out = run(["clang", "--version"]).stdout.splitlines()[0]
    return out.strip()


def build_shared(source: Path, output: Path, flags: list[str]) -> None:
    run(["clang", "-shared", "-fPIC", *flags, str(source), "-o", str(output)])


def readelf_oracle(binary: Path) -> dict:
    """Independent DWARF summary parsed from readelf --debug-dump=info.

    Two passes: collect every DIE with its attributes keyed by offset, then
    resolve subprogram names through abstract-origin/specification chains and
    aggregate per name, mirroring the merge rule of the extractor under test
    without sharing any of its code.
    """
    text = run(["readelf", "--debug-dump=info", str(binary)]).stdout
    dies: dict[int, dict] = {}
    order: list[int] = []
    inlined_subroutines = 0
    current: dict | None = None
    header = re.compile(r" <\d+><([0-9a-f]+)>: Abbrev Number: (\d+)(?: \((DW_TAG_\w+)\))?")
    for line in text.splitlines():
        m = header.match(line)
        if m:
            offset, code, tag = int(m.group(1), 16), int(m.group(2)), m.group(3)
            if code == 0:
                current = None
                continue
            if tag == "DW_TAG_inlined_subroutine":
                inlined_subroutines += 1
            current = {"tag": tag, "name": None, "inline": None, "low_pc": False,
                       "origin": None, "spec": None}
            dies[offset] = current
            order.append(offset)
            continue
        if current is None:
            continue
        nm = re.search(r"DW_AT_name\s+:.*?:\s*(\S+)\s*$", line)
        if nm and current["name"] is None:
            current["name"] = nm.group(1)
        if "DW_AT_low_pc" in line:
            current["low_pc"] = True
        im = re.search(r"DW_AT_inline\s+:\s*(\d+)", line)
        if im:
            current["inline"] = int(im.group(1))
        om = re.search(r"DW_AT_abstract_origin\s*:\s*<0x([0-9a-f]+)>", line)
        if om:
            current["origin"] = int(om.group(1), 16)
        sm = re.search(r"DW_AT_specification\s*:\s*<0x([0-9a-f]+)>", line)
        if sm:
            current["spec"] = int(sm.group(1), 16)

    def resolved_name(offset: int) -> str | None:
        seen = set()
        at = offset
        while at is not None and at not in seen:
            seen.add(at)
            die = dies.get(at)
            if die is None:
                return None
            if die["name"]:
                return die["name"]
            at = die["spec"] if die["spec"] is not None else die["origin"]
        return None

    entries: dict[str, dict] = {}
    for offset in order:
        die = dies[offset]
        if die["tag"] != "DW_TAG_subprogram":
            continue
        name = resolved_name(offset)
        if not name:
            continue
        slot = entries.setdefault(name, {"inline": 0, "has_low_pc": False})
        if die["inline"] is not None:
            slot["inline"] = max(slot["inline"], die["inline"])
        slot["has_low_pc"] = slot["has_low_pc"] or die["low_pc"]
    return {"functions": entries, "inlined_subroutine_count": inlined_subroutines}


def check(condition: bool, message: str) -> None:
    if not condition:
        raise SystemExit(f"fixture validation failed: {message}")


def main() -> None:
    for d in (SRC, BIN, REMARKS, SITES, REPORTS, ORACLE, LISTINGS, SWEEPPROJ):
        d.mkdir(parents=True, exist_ok=True)

    print(f"toolchain: {clang_version()}")

    # --- sources ---
    (SRC / "trio.c").write_text(TRIO_C)
    (SRC / "trio_noalways.c").write_text(TRIO_NOALWAYS_C)
    (SRC / "corpus.c").write_text(CORPUS_C)
    (SWEEPPROJ / "mini.c").write_text(SWEEPPROJ_C)
    for name, source in MICRO_SOURCES.items():
        (SRC / f"{name}.c").write_text(source)

    # --- trio fixtures ---
    build_shared(SRC / "trio.c", BIN / "trio_O0.so", ["-O0", "-g"])
    build_shared(SRC / "trio.c", BIN / "trio_O2.so", ["-O2", "-g"])
    build_shared(SRC / "trio.c", BIN / "trio_O2_fni.so", ["-O2", "-fno-inline", "-g"])
    build_shared(SRC / "trio.c", BIN / "trio_nodebug.so", ["-O2"])
    build_shared(SRC / "trio_noalways.c", BIN / "trio_O0_noalways.so", ["-O0", "-g"])
    run([
        "objcopy", "--strip-all", "--keep-section=.debug_*",
        str(BIN / "trio_O2.so"), str(BIN / "trio_O2_nosym.so"),
    ])
    build_shared(SRC / "trio.c", BIN / "trio_O2_dwarf4.so", ["-O2", "-gdwarf-4"])

    # data-only compilation unit: valid DWARF, zero subprograms
    (SRC / "dataonly.c").write_text("int the_answer = 42;\n")
    run(["clang", "-c", "-g", str(SRC / "dataonly.c"), "-o", str(BIN / "dataonly.o")])

    # --- corpus fixtures ---
    corpus_builds = {
        "corpus_O0.so": ["-O0", "-g"],
        "corpus_O1.so": ["-O1", "-g"],
        "corpus_O2.so": ["-O2", "-g"],
        "corpus_O3.so": ["-O3", "-g"],
        "corpus_Os.so": ["-Os", "-g"],
        "corpus_Oz.so": ["-Oz", "-g"],
        "corpus_O2_thr10000.so": ["-O2", "-g", "-mllvm", "-inline-threshold=10000"],
        "corpus_extreme.so": [
            "-O3", "-flto=full", "-fuse-ld=lld", "-g",
            "-mllvm", "-inline-threshold=200000",
        ],
        "corpus_O2_fni.so": ["-O2", "-fno-inline", "-g"],
    }
    for name, flags in corpus_builds.items():
        build_shared(SRC / "corpus.c", BIN / name, flags)

    # --- micro corpus: golden remark streams ---
    for case in MICRO_CASES:
        source = SRC / f"{case['source']}.c"
        opt = f"-{case['opt_level']}"
        cmd = ["clang", opt, "-c", "-g", *case["extra_flags"], *RFLAGS,
               str(source), "-o", "/dev/null"]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        if proc.returncode != 0:
            raise SystemExit(f"micro case {case['case']} failed to compile:\n{proc.stderr}")
        (REMARKS / f"{case['case']}.stderr.txt").write_text(proc.stderr)
        (SITES / f"{case['case']}.site.json").write_text(
            json.dumps(case["site"], indent=2) + "\n"
        )
        if "params" in case:
            (SITES / f"{case['case']}.params.json").write_text(
                json.dumps(case["params"], indent=2) + "\n"
            )
    manifest = [
        {k: case[k] for k in ("case", "source", "opt_level", "extra_flags",
                              "callee", "caller")}
        | {"has_params": "params" in case}
        for case in MICRO_CASES
    ]
    (FIXTURES / "micro_cases.json").write_text(json.dumps(manifest, indent=2) + "\n")

    # --- listings ---
    for binary in ("trio_O2.so", "corpus_O2.so"):
        proc = subprocess.run(
            ["objdump", "-d", str(BIN / binary)], capture_output=True, text=True
        )
        if proc.returncode != 0:
            raise SystemExit(f"objdump failed on {binary}: {proc.stderr[-500:]}")
        (LISTINGS / f"{Path(binary).stem}.objdump.txt").write_text(proc.stdout)

    # --- frozen extraction reports + independent oracle ---
    frozen = [
        "trio_O0.so", "trio_O2.so", "trio_O2_fni.so", "trio_O0_noalways.so",
        "trio_O2_nosym.so", "trio_O2_dwarf4.so",
        "corpus_O0.so", "corpus_O2.so",
    ]
    reports = {}
    for name in frozen:
        report = compute_inlining_report((BIN / name).read_bytes(), name)
        reports[name] = report
        (REPORTS / f"{name}.report.json").write_text(report_to_json(report))
    for name in ("trio_O0.so", "trio_O2.so"):
        oracle = readelf_oracle(BIN / name)
        (ORACLE / f"{name}.oracle.json").write_text(json.dumps(oracle, indent=2) + "\n")
        ours = {e.name: e for e in reports[name].entries}
        check(set(oracle["functions"]) == set(ours),
              f"{name}: entry names disagree with readelf")
        for fn, expected in oracle["functions"].items():
            check(ours[fn].inline_attr.value == expected["inline"],
                  f"{name}:{fn}: inline attr {ours[fn].inline_attr} != {expected['inline']}")
            check(ours[fn].has_concrete_range == expected["has_low_pc"],
                  f"{name}:{fn}: low-pc presence mismatch")
        check(len(reports[name].instances) == oracle["inlined_subroutine_count"],
              f"{name}: inline instance count mismatch")

    # --- fixture property validation ---
    trio_o2 = {e.name: e for e in reports["trio_O2.so"].entries}
    check(len(trio_o2) == 3, "trio_O2 should have exactly 3 entries")
    check(trio_o2["helper"].inline_attr is InlineAttr.Inlined, "helper attr")
    check(trio_o2["helper"].presence is Presence.InlinedEliminated, "helper presence")
    check(trio_o2["util"].presence is Presence.InlinedRemaining, "util presence")
    check(trio_o2["util"].symbol_present, "util symbol")
    check(trio_o2["worker"].inline_attr is InlineAttr.NotInlined, "worker attr")
    check(trio_o2["worker"].presence is Presence.NeverInlined, "worker presence")

    trio_o0 = {e.name: e for e in reports["trio_O0.so"].entries}
    check(reports["trio_O0.so"].inlined_functions >= 1, "always_inline at O0")
    check(trio_o0["util"].inline_instance_count >= 1, "util instance at O0")
    check(len(reports["trio_O0_noalways.so"].instances) == 0, "no instances at O0 w/o always")
    check(reports["trio_O2_fni.so"].inlined_functions >= 1, "always_inline under -fno-inline")
    nosym = {e.name: e for e in reports["trio_O2_nosym.so"].entries}
    check(not any(e.symbol_present for e in nosym.values()), "nosym symbols")

    ratios = {}
    for name in corpus_builds:
        report = compute_inlining_report((BIN / name).read_bytes(), name)
        ratios[name] = report.inlining_ratio
        print(f"  {name:24s} total={report.total_functions:2d} "
              f"inlined={report.inlined_functions:2d} ratio={report.inlining_ratio:.4f}")
    check(ratios["corpus_O0.so"] < ratios["corpus_O2.so"], "O0 < O2")
    check(ratios["corpus_Oz.so"] <= ratios["corpus_Os.so"], "Oz <= Os")
    check(ratios["corpus_Os.so"] <= ratios["corpus_O2.so"], "Os <= O2")
    check(ratios["corpus_O2_thr10000.so"] >= ratios["corpus_O2.so"], "threshold direction")
    check(ratios["corpus_extreme.so"] >= ratios["corpus_O3.so"], "extreme >= O3")

    shutil.rmtree(FIXTURES / "__pycache__", ignore_errors=True)
    print(f"fixtures written under {FIXTURES}")


if __name__ == "__main__":
    main()
