"""Line-oriented parser for disassembly listings.

Grammar (matching the de-facto output of common ELF disassembly dumps):

    function header:   <hex-address> <<name>>:
    instruction line:  <hex-address>:\t<bytes>\t<mnemonic>[ <operands>]

Trailing "<hex-address> <<name[+off]>>" in the operands is recognized as an
explicit branch target. Dump chrome (file-format banner, section banners,
"..." ellipses, byte-continuation lines) is tolerated; a line that looks
like an instruction but has a malformed address column is an error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import ListingSyntaxError
from .registry import (
    categorize_instruction,
    is_call_mnemonic,
    is_conditional_mnemonic,
    is_return_mnemonic,
    is_unconditional_jump,
)

_HEADER_RE = re.compile(r"^([0-9a-fA-F]+) <(.+)>:\s*$")
_INSN_RE = re.compile(r"^\s*([0-9a-fA-F]+):\t([0-9a-fA-F]{2}(?: [0-9a-fA-F]{2})*)\s*(?:\t(.*))?$")
_BAD_INSN_RE = re.compile(r"^\s*(\S+):\t")
_TARGET_RE = re.compile(r"(?:^|\s)([0-9a-fA-F]+)\s+<([^>]+)>\s*$")
_PREFIX_TOKENS = {"rep", "repz", "repe", "repne", "repnz", "lock", "bnd", "notrack", "data16"}

_NOISE_PREFIXES = ("Disassembly of section", ";")


@dataclass
class Instruction:
    address: int
    byte_size: int
    mnemonic: str
    operand_text: str = ""
    explicit_branch_target: int | None = None
    target_label: str | None = None
    is_call: bool = False
    is_return: bool = False
    is_conditional: bool = False
    is_unconditional_jump: bool = False
    is_indirect: bool = False

    @property
    def category(self) -> str:
        return categorize_instruction(self.mnemonic)


@dataclass
class Function:
    name: str
    start_address: int
    instructions: list[Instruction] = field(default_factory=list)

    @property
    def end_address(self) -> int:
        if not self.instructions:
            return self.start_address
        last = self.instructions[-1]
        return last.address + last.byte_size


@dataclass
class Listing:
    functions: list[Function] = field(default_factory=list)


def _is_noise(line: str) -> bool:
    stripped = line.strip()
    if not stripped or stripped == "...":
        return True
    if "file format" in line and ":" in line:
        return True
    return any(stripped.startswith(p) for p in _NOISE_PREFIXES)


def _split_mnemonic(text: str) -> tuple[str, str]:
    """Split the opcode field into (mnemonic, operands), folding prefixes in."""
    tokens = text.split()
    if not tokens:
        return "", ""
    mnemonic = tokens[0]
    rest = tokens[1:]
    while rest and mnemonic.lower() in _PREFIX_TOKENS:
        mnemonic = f"{mnemonic} {rest[0]}"
        rest = rest[1:]
    return mnemonic, " ".join(rest)


def parse_listing(text: str) -> Listing:
    listing = Listing()
    current: Function | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if _is_noise(line):
            continue
        header = _HEADER_RE.match(line)
        if header:
            current = Function(name=header.group(2), start_address=int(header.group(1), 16))
            listing.functions.append(current)
            continue
        insn_match = _INSN_RE.match(line)
        if insn_match:
            if current is None:
                raise ListingSyntaxError("instruction before any function header", lineno)
            address = int(insn_match.group(1), 16)
            byte_count = len(insn_match.group(2).split())
            opcode_field = (insn_match.group(3) or "").strip()
            if not opcode_field:
                # byte-continuation line of a long instruction
                if current.instructions:
                    current.instructions[-1].byte_size += byte_count
                continue
            # strip disassembler annotation comments before target recognition
            operand_source = opcode_field.split("#", 1)[0].rstrip()
            mnemonic, operands = _split_mnemonic(operand_source)
            insn = Instruction(address=address, byte_size=byte_count, mnemonic=mnemonic,
                               operand_text=operands)
            target = _TARGET_RE.search(operands)
            if target:
                insn.explicit_branch_target = int(target.group(1), 16)
                insn.target_label = target.group(2)
            insn.is_call = is_call_mnemonic(mnemonic)
            insn.is_return = is_return_mnemonic(mnemonic, operands)
            insn.is_conditional = is_conditional_mnemonic(mnemonic)
            insn.is_unconditional_jump = (
                is_unconditional_jump(mnemonic) and not insn.is_return
            )
            insn.is_indirect = operands.startswith("*")
            current.instructions.append(insn)
            continue
        if _BAD_INSN_RE.match(line):
            raise ListingSyntaxError(f"malformed address column: {line.strip()!r}", lineno)
        # anything else (symbol annotations, relocation notes) is ignored
    return listing
