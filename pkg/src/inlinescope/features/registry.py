"""Instruction categories and the 62-slot feature registry.

The mnemonic tables cover the x86-64 (AT&T syntax) and 32-bit ARM output of
common ELF disassemblers. Classification is total: anything outside the
tables lands in the "unknown" category, which is itself a tracked feature.
Slot definitions, anchors, and aggregation rules are documented in
REGISTRY.md at the repository root.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import UnknownRegistryVersion

REGISTRY_VERSION = "insc62.v1"

CATEGORIES = (
    "data_transfer",
    "arithmetic",
    "logic",
    "shift",
    "compare",
    "control_transfer",
    "call",
    "return",
    "floating_point",
    "vector",
    "string_op",
    "misc",
    "unknown",
)

_PREFIX_TOKENS = {
    "rep", "repz", "repe", "repne", "repnz", "lock", "bnd", "notrack",
    "data16", "addr32", "cs", "ds", "es", "fs", "gs", "ss",
}

_DATA_TRANSFER = {
    "mov", "movabs", "movzx", "movsx", "movsxd", "lea", "push", "pop", "xchg",
    "movzb", "movzw", "movzbl", "movzbw", "movzbq", "movzwl", "movzwq",
    "movsbl", "movsbw", "movsbq", "movswl", "movswq", "movslq",
    "pushf", "popf", "pusha", "popa", "bswap",
    # ARM
    "ldr", "str", "ldrb", "strb", "ldrh", "strh", "ldrd", "strd", "ldrsb",
    "ldrsh", "ldm", "stm", "ldmia", "stmia", "ldmdb", "stmdb", "mvn",
    "movw", "movt",
}

_ARITHMETIC = {
    "add", "sub", "inc", "dec", "neg", "adc", "sbb", "mul", "imul", "div",
    "idiv", "xadd",
    # ARM
    "rsb", "rsc", "sbc", "mla", "mls", "umull", "smull", "umlal", "smlal",
    "sdiv", "udiv", "adds", "subs", "adcs", "sbcs", "rsbs", "muls",
    "smulbb", "smultb", "smulbt", "smultt", "uxtab", "sxtab",
}

_LOGIC = {
    "and", "or", "xor", "not", "andn", "popcnt", "lzcnt", "tzcnt", "bsf",
    "bsr", "bt", "btc", "btr", "bts",
    # ARM
    "orr", "eor", "bic", "orn", "ands", "orrs", "eors", "bics", "clz",
    "uxtb", "uxth", "sxtb", "sxth", "ubfx", "sbfx", "bfi", "bfc", "rbit",
    "rev", "rev16",
}

_SHIFT = {
    "shl", "shr", "sar", "sal", "rol", "ror", "rcl", "rcr", "shld", "shrd",
    "sarx", "shlx", "shrx", "rorx",
    # ARM
    "lsl", "lsr", "asr", "rrx", "lsls", "lsrs", "asrs", "rors",
}

_COMPARE = {
    "cmp", "test", "cmpxchg",
    # ARM
    "cmn", "tst", "teq",
}

_CALL = {"call", "bl", "blx"}

_RETURN = {"ret", "retn", "retf", "iret"}

_FLOAT = {
    # x87
    "fld", "fst", "fstp", "fild", "fist", "fistp", "fadd", "faddp", "fsub",
    "fsubp", "fsubr", "fmul", "fmulp", "fdiv", "fdivp", "fdivr", "fabs",
    "fchs", "fsqrt", "fcom", "fcomp", "fcompp", "fcomi", "fcomip", "fucomi",
    "fucomip", "fxch", "fldz", "fld1", "fninit", "fnstcw", "fldcw", "fnstsw",
    # scalar SSE
    "movss", "movsd", "addss", "addsd", "subss", "subsd", "mulss", "mulsd",
    "divss", "divsd", "sqrtss", "sqrtsd", "minss", "minsd", "maxss", "maxsd",
    "comiss", "comisd", "ucomiss", "ucomisd", "cvtsi2ss", "cvtsi2sd",
    "cvtss2sd", "cvtsd2ss", "cvttss2si", "cvttsd2si", "cvtss2si", "cvtsd2si",
    "roundss", "roundsd",
    # ARM VFP scalar
    "vldr", "vstr", "vcvt", "vcmp", "vcmpe", "vsqrt", "vneg", "vabs",
    "vmrs", "vmsr",
}

_VECTOR = {
    "movaps", "movapd", "movups", "movupd", "movdqa", "movdqu", "movd",
    "movq2dq", "movdq2q", "lddqu", "movntdq", "movnti", "movhps", "movlps",
    "movhlps", "movlhps", "movmskps", "movmskpd", "pmovmskb",
    "addps", "addpd", "subps", "subpd", "mulps", "mulpd", "divps", "divpd",
    "minps", "minpd", "maxps", "maxpd", "sqrtps", "sqrtpd", "rcpps",
    "rsqrtps", "andps", "andpd", "andnps", "andnpd", "orps", "orpd",
    "xorps", "xorpd", "shufps", "shufpd", "unpckhps", "unpckhpd",
    "unpcklps", "unpcklpd", "cmpps", "cmppd", "cvtdq2ps", "cvtps2dq",
    "cvtdq2pd", "cvtpd2dq", "cvttps2dq", "cvttpd2dq", "blendps", "blendpd",
    "haddps", "haddpd", "hsubps", "hsubpd", "dpps", "dppd", "insertps",
    "extractps", "palignr", "aesenc", "aesdec", "pclmulqdq",
    # ARM NEON core
    "vadd", "vsub", "vmul", "vmla", "vmls", "vand", "vorr", "veor", "vbic",
    "vld1", "vld2", "vld3", "vld4", "vst1", "vst2", "vst3", "vst4", "vdup",
    "vmov", "vmovl", "vmovn", "vpadd", "vpmax", "vpmin", "vext", "vzip",
    "vuzp", "vtrn", "vtbl", "vtbx", "vshl", "vshr", "vsra", "vrshr", "vqadd",
    "vqsub", "vqmov", "vcge", "vcgt", "vceq", "vcle", "vclt", "vmax", "vmin",
}

_STRING = {
    "movsb", "movsw", "movsl", "movsq", "stos", "stosb", "stosw", "stosl",
    "stosq", "lods", "lodsb", "lodsw", "lodsl", "lodsq", "scas", "scasb",
    "scasw", "scasl", "scasq", "cmpsb", "cmpsw", "cmpsl", "cmpsq", "insb",
    "insw", "insl", "outsb", "outsw", "outsl", "xlat",
}

_MISC = {
    "nop", "nopl", "nopw", "endbr64", "endbr32", "leave", "enter", "hlt",
    "ud2", "int3", "int", "into", "syscall", "sysenter", "sysexit", "sysret",
    "cpuid", "pause", "lfence", "mfence", "sfence", "clflush", "prefetcht0",
    "prefetcht1", "prefetcht2", "prefetchnta", "prefetchw", "rdtsc",
    "rdtscp", "rdrand", "rdseed", "xgetbv", "xsetbv", "cld", "std", "cli",
    "sti", "clc", "stc", "cmc", "sahf", "lahf", "cwtl", "cltq", "cltd",
    "cbtw", "cwtd", "cqto", "cdq", "cdqe", "cqo", "cbw", "cwde", "wait",
    "fwait", "emms", "vzeroupper", "vzeroall", "xrstor", "xsave",
    # ARM
    "svc", "bkpt", "dmb", "dsb", "isb", "wfi", "wfe", "sev", "yield",
    "mrs", "msr", "it", "itt", "ite", "ittt", "itte", "itet", "itee",
    "cpsie", "cpsid", "udf",
}

_JMP_UNCONDITIONAL = {"jmp", "jmpq", "ljmp", "b", "bx"}

_JCC = {
    "ja", "jae", "jb", "jbe", "jc", "jcxz", "jecxz", "jrcxz", "je", "jg",
    "jge", "jl", "jle", "jna", "jnae", "jnb", "jnbe", "jnc", "jne", "jng",
    "jnge", "jnl", "jnle", "jno", "jnp", "jns", "jnz", "jo", "jp", "jpe",
    "jpo", "js", "jz", "loop", "loope", "loopne", "loopz", "loopnz",
    # ARM conditional branches
    "beq", "bne", "bcs", "bhs", "bcc", "blo", "bmi", "bpl", "bvs", "bvc",
    "bhi", "bls", "bge", "blt", "bgt", "ble", "cbz", "cbnz", "tbb", "tbh",
}

_SETCC_SUFFIXES = {
    "a", "ae", "b", "be", "c", "e", "g", "ge", "l", "le", "na", "nae", "nb",
    "nbe", "nc", "ne", "ng", "nge", "nl", "nle", "no", "np", "ns", "nz",
    "o", "p", "pe", "po", "s", "z",
}

_SIZE_SUFFIXES = "bwlq"

_PACKED_PREFIXES = (
    "padd", "psub", "pmul", "pmin", "pmax", "pcmp", "pand", "por", "pxor",
    "punpck", "pack", "pshuf", "psll", "psrl", "psra", "pinsr", "pextr",
    "pmov", "ptest", "pabs", "pavg", "psign", "pblend", "phadd", "phsub",
    "pbroadcast", "palign",
)

_EXACT: dict[str, str] = {}
for _names, _cat in (
    (_DATA_TRANSFER, "data_transfer"),
    (_ARITHMETIC, "arithmetic"),
    (_LOGIC, "logic"),
    (_SHIFT, "shift"),
    (_COMPARE, "compare"),
    (_JMP_UNCONDITIONAL, "control_transfer"),
    (_JCC, "control_transfer"),
    (_CALL, "call"),
    (_RETURN, "return"),
    (_FLOAT, "floating_point"),
    (_VECTOR, "vector"),
    (_STRING, "string_op"),
    (_MISC, "misc"),
):
    for _n in _names:
        _EXACT.setdefault(_n, _cat)


def categorize_instruction(mnemonic: str) -> str:
    """Total mapping of a mnemonic (possibly prefixed, e.g. "rep stosq")."""
    token = mnemonic.strip().lower()
    if not token:
        return "unknown"
    parts = token.split()
    while len(parts) > 1 and parts[0] in _PREFIX_TOKENS:
        parts = parts[1:]
    if len(parts) > 1:
        return "unknown"
    m = parts[0]
    # Bare prefix ("rep" with the real op in the operand field) is a string op
    # in practice; classify it as such rather than unknown.
    if m in _PREFIX_TOKENS:
        return "string_op" if m.startswith("rep") else "misc"

    cat = _EXACT.get(m)
    if cat:
        return cat
    # AT&T size-suffixed form (addl, cmpq, pushw, ...)
    if len(m) > 1 and m[-1] in _SIZE_SUFFIXES:
        cat = _EXACT.get(m[:-1])
        if cat:
            return cat
    if m.startswith("set") and m[3:] in _SETCC_SUFFIXES:
        return "data_transfer"
    if m.startswith("cmov"):
        return "data_transfer"
    if m.startswith("fcmov"):
        return "floating_point"
    if m.startswith(_PACKED_PREFIXES):
        return "vector"
    if m.startswith("v") and len(m) > 2:
        return "vector"
    # ARM condition-suffixed branch not in the table (e.g. "bxne")
    if m.startswith("bx"):
        return "control_transfer"
    return "unknown"


def is_conditional_mnemonic(mnemonic: str) -> bool:
    m = mnemonic.strip().lower().split()[-1]
    return m in _JCC


def is_call_mnemonic(mnemonic: str) -> bool:
    m = mnemonic.strip().lower().split()[-1]
    return m in _CALL or (len(m) > 1 and m[-1] in _SIZE_SUFFIXES and m[:-1] in _CALL)


def is_return_mnemonic(mnemonic: str, operand_text: str = "") -> bool:
    m = mnemonic.strip().lower().split()[-1]
    if m in _RETURN or (len(m) > 1 and m[-1] in _SIZE_SUFFIXES and m[:-1] in _RETURN):
        return True
    op = operand_text.strip().lower()
    if m == "bx" and op == "lr":
        return True
    if m in ("pop", "ldm", "ldmia") and "pc" in op:
        return True
    return False


def is_unconditional_jump(mnemonic: str) -> bool:
    m = mnemonic.strip().lower().split()[-1]
    if m in _JCC:
        return False
    return m in _JMP_UNCONDITIONAL or (
        len(m) > 1 and m[-1] in _SIZE_SUFFIXES and m[:-1] in _JMP_UNCONDITIONAL
    )


@dataclass(frozen=True)
class FeatureSlot:
    index: int
    name: str
    category: str  # instruction | cfg | cg
    aggregation: str  # sum | weighted_mean
    anchored: bool = False


_SLOTS: list[FeatureSlot] = [
    FeatureSlot(1, "number of instructions", "instruction", "sum"),
    FeatureSlot(2, "number of data transfer instructions", "instruction", "sum"),
    FeatureSlot(3, "number of miscellaneous instructions", "instruction", "sum"),
    FeatureSlot(4, "number of unknown instructions", "instruction", "sum", anchored=True),
    FeatureSlot(5, "ratio of data transfer instructions", "instruction", "weighted_mean"),
    FeatureSlot(6, "number of arithmetic instructions", "instruction", "sum", anchored=True),
    FeatureSlot(7, "ratio of arithmetic instructions", "instruction", "weighted_mean"),
    FeatureSlot(8, "number of arithmetic and shift instructions", "instruction", "sum",
                anchored=True),
    FeatureSlot(9, "number of logic instructions", "instruction", "sum"),
    FeatureSlot(10, "ratio of logic instructions", "instruction", "weighted_mean"),
    FeatureSlot(11, "number of shift instructions", "instruction", "sum"),
    FeatureSlot(12, "ratio of shift instructions", "instruction", "weighted_mean"),
    FeatureSlot(13, "number of compare instructions", "instruction", "sum"),
    FeatureSlot(14, "ratio of compare instructions", "instruction", "weighted_mean"),
    FeatureSlot(15, "number of control transfer instructions", "instruction", "sum"),
    FeatureSlot(16, "ratio of control transfer instructions", "instruction", "weighted_mean"),
    FeatureSlot(17, "number of call instructions", "instruction", "sum"),
    FeatureSlot(18, "ratio of call instructions", "instruction", "weighted_mean"),
    FeatureSlot(19, "number of return instructions", "instruction", "sum"),
    FeatureSlot(20, "ratio of return instructions", "instruction", "weighted_mean"),
    FeatureSlot(21, "number of floating point instructions", "instruction", "sum"),
    FeatureSlot(22, "ratio of floating point instructions", "instruction", "weighted_mean"),
    FeatureSlot(23, "ratio of floating point and vector instructions", "instruction",
                "weighted_mean"),
    FeatureSlot(24, "number of vector instructions", "instruction", "sum"),
    FeatureSlot(25, "ratio of vector instructions", "instruction", "weighted_mean"),
    FeatureSlot(26, "number of string operation instructions", "instruction", "sum"),
    FeatureSlot(27, "ratio of string operation instructions", "instruction", "weighted_mean"),
    FeatureSlot(28, "ratio of miscellaneous instructions", "instruction", "weighted_mean"),
    FeatureSlot(29, "ratio of unknown instructions", "instruction", "weighted_mean"),
    FeatureSlot(30, "number of conditional control transfers", "instruction", "sum"),
    FeatureSlot(31, "ratio of conditional control transfers", "instruction", "weighted_mean"),
    FeatureSlot(32, "number of unconditional control transfers", "instruction", "sum"),
    FeatureSlot(33, "number of distinct mnemonics", "instruction", "sum"),
    FeatureSlot(34, "mean instruction size in bytes", "instruction", "weighted_mean"),
    FeatureSlot(35, "total instruction bytes", "instruction", "sum"),
    FeatureSlot(36, "number of instructions with an explicit branch target", "instruction",
                "sum"),
    FeatureSlot(37, "number of basic blocks", "cfg", "sum"),
    FeatureSlot(38, "number of natural loops", "cfg", "sum", anchored=True),
    FeatureSlot(39, "number of back edges", "cfg", "sum", anchored=True),
    FeatureSlot(40, "number of CFG edges", "cfg", "sum"),
    FeatureSlot(41, "CFG edge density", "cfg", "weighted_mean"),
    FeatureSlot(42, "number of basic blocks inside loops", "cfg", "sum"),
    FeatureSlot(43, "maximum out-degree", "cfg", "weighted_mean"),
    FeatureSlot(44, "mean out-degree", "cfg", "weighted_mean"),
    FeatureSlot(45, "maximum in-degree", "cfg", "weighted_mean"),
    FeatureSlot(46, "maximum loop size in instructions", "cfg", "weighted_mean", anchored=True),
    FeatureSlot(47, "mean in-degree", "cfg", "weighted_mean"),
    FeatureSlot(48, "mean loop size in instructions", "cfg", "weighted_mean", anchored=True),
    FeatureSlot(49, "total loop size in instructions", "cfg", "sum", anchored=True),
    FeatureSlot(50, "number of exit blocks", "cfg", "sum"),
    FeatureSlot(51, "mean basic block size in instructions", "cfg", "weighted_mean"),
    FeatureSlot(52, "maximum basic block size in instructions", "cfg", "weighted_mean"),
    FeatureSlot(53, "number of unreachable basic blocks", "cfg", "sum"),
    FeatureSlot(54, "maximum loop nesting depth", "cfg", "weighted_mean"),
    FeatureSlot(55, "number of conditional branch blocks", "cfg", "sum"),
    FeatureSlot(56, "number of self-loop blocks", "cfg", "sum"),
    FeatureSlot(57, "number of distinct internal callees", "cg", "sum"),
    FeatureSlot(58, "number of distinct internal callers", "cg", "sum"),
    FeatureSlot(59, "number of distinct external callees", "cg", "sum"),
    FeatureSlot(60, "recursive flag", "cg", "sum"),
    FeatureSlot(61, "total outgoing call sites", "cg", "sum"),
    FeatureSlot(62, "total incoming call sites", "cg", "sum"),
]

# Slots whose values are per-category instruction counts; they partition the
# instruction stream, so their sum equals slot 1 for every function.
CATEGORY_COUNT_SLOTS: dict[str, int] = {
    "data_transfer": 2,
    "misc": 3,
    "unknown": 4,
    "arithmetic": 6,
    "logic": 9,
    "shift": 11,
    "compare": 13,
    "control_transfer": 15,
    "call": 17,
    "return": 19,
    "floating_point": 21,
    "vector": 24,
    "string_op": 26,
}

CATEGORY_RATIO_SLOTS: dict[str, int] = {
    "data_transfer": 5,
    "arithmetic": 7,
    "logic": 10,
    "shift": 12,
    "compare": 14,
    "control_transfer": 16,
    "call": 18,
    "return": 20,
    "floating_point": 22,
    "vector": 25,
    "string_op": 27,
    "misc": 28,
    "unknown": 29,
}


class FeatureRegistry:
    def __init__(self, version: str, slots: list[FeatureSlot]):
        self.version = version
        self.slots = slots
        assert len(slots) == 62
        by_cat = {"instruction": 0, "cfg": 0, "cg": 0}
        for s in slots:
            by_cat[s.category] += 1
        assert (by_cat["instruction"], by_cat["cfg"], by_cat["cg"]) == (36, 20, 6)

    def slot(self, index: int) -> FeatureSlot:
        return self.slots[index - 1]

    def names(self) -> list[str]:
        return [s.name for s in self.slots]


_REGISTRIES = {REGISTRY_VERSION: FeatureRegistry(REGISTRY_VERSION, _SLOTS)}


def get_registry(version: str = REGISTRY_VERSION) -> FeatureRegistry:
    if version not in _REGISTRIES:
        raise UnknownRegistryVersion(
            f"registry {version!r} unknown; available: {sorted(_REGISTRIES)}"
        )
    return _REGISTRIES[version]
