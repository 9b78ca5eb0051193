"""Minimal read-only ELF parser: section headers, section data, symbol table.

Covers little-endian 32/64-bit images, which is all the ground-truth module
accepts. Compressed debug sections (SHF_COMPRESSED with ELFCOMPRESS_ZLIB, and
legacy .zdebug_* naming) are transparently decompressed.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass

from .errors import MalformedElf

ELF_MAGIC = b"\x7fELF"

SHT_SYMTAB = 2
SHF_COMPRESSED = 0x800
ELFCOMPRESS_ZLIB = 1
STT_FUNC = 2


@dataclass(frozen=True)
class Section:
    name: str
    sh_type: int
    flags: int
    addr: int
    offset: int
    size: int
    link: int
    entsize: int


@dataclass(frozen=True)
class Symbol:
    name: str
    value: int
    size: int
    sym_type: int
    bind: int
    shndx: int

    @property
    def is_func(self) -> bool:
        return self.sym_type == STT_FUNC


class ElfFile:
    """Parsed ELF image held fully in memory."""

    def __init__(self, data: bytes):
        self.data = data
        if len(data) < 52 or data[:4] != ELF_MAGIC:
            raise MalformedElf("not an ELF file (bad magic)")
        ei_class = data[4]
        ei_data = data[5]
        if ei_class == 1:
            self.is_64 = False
        elif ei_class == 2:
            self.is_64 = True
        else:
            raise MalformedElf(f"unsupported ELF class {ei_class}")
        if ei_data != 1:
            raise MalformedElf("big-endian ELF is not supported")

        try:
            if self.is_64:
                (self.e_shoff,) = struct.unpack_from("<Q", data, 0x28)
                self.e_shentsize, self.e_shnum, self.e_shstrndx = struct.unpack_from(
                    "<HHH", data, 0x3A
                )
            else:
                (self.e_shoff,) = struct.unpack_from("<I", data, 0x20)
                self.e_shentsize, self.e_shnum, self.e_shstrndx = struct.unpack_from(
                    "<HHH", data, 0x2E
                )
        except struct.error as exc:
            raise MalformedElf(f"truncated ELF header: {exc}") from exc

        self.sections: list[Section] = []
        self._by_name: dict[str, Section] = {}
        self._parse_sections()

    def _parse_sections(self) -> None:
        if self.e_shoff == 0 or self.e_shnum == 0:
            return
        raw: list[tuple[int, int, int, int, int, int, int, int]] = []
        for i in range(self.e_shnum):
            base = self.e_shoff + i * self.e_shentsize
            try:
                if self.is_64:
                    name_off, sh_type, flags, addr, offset, size, link, _info, _align, entsize = (
                        struct.unpack_from("<IIQQQQIIQQ", self.data, base)
                    )
                else:
                    name_off, sh_type, flags, addr, offset, size, link, _info, _align, entsize = (
                        struct.unpack_from("<IIIIIIIIII", self.data, base)
                    )
            except struct.error as exc:
                raise MalformedElf(f"truncated section header {i}: {exc}") from exc
            raw.append((name_off, sh_type, flags, addr, offset, size, link, entsize))

        if self.e_shstrndx >= len(raw):
            raise MalformedElf("section-name string table index out of range")
        shstr_off, shstr_size = raw[self.e_shstrndx][4], raw[self.e_shstrndx][5]
        shstrtab = self.data[shstr_off : shstr_off + shstr_size]

        for name_off, sh_type, flags, addr, offset, size, link, entsize in raw:
            end = shstrtab.find(b"\x00", name_off)
            name = shstrtab[name_off:end].decode("utf-8", "replace") if end >= 0 else ""
            sec = Section(name, sh_type, flags, addr, offset, size, link, entsize)
            self.sections.append(sec)
            self._by_name.setdefault(name, sec)

    def section(self, name: str) -> Section | None:
        return self._by_name.get(name)

    def section_data(self, sec: Section) -> bytes:
        payload = self.data[sec.offset : sec.offset + sec.size]
        if sec.flags & SHF_COMPRESSED:
            hdr = "<IIQQ" if self.is_64 else "<III"
            hdr_size = struct.calcsize(hdr)
            fields = struct.unpack_from(hdr, payload, 0)
            ch_type = fields[0]
            if ch_type != ELFCOMPRESS_ZLIB:
                raise MalformedElf(f"unsupported section compression type {ch_type}")
            return zlib.decompress(payload[hdr_size:])
        if sec.name.startswith(".zdebug_") and payload[:4] == b"ZLIB":
            return zlib.decompress(payload[12:])
        return payload

    def debug_section_data(self, short: str) -> bytes | None:
        """Return decompressed contents of .debug_<short> (or .zdebug_<short>)."""
        sec = self.section(f".debug_{short}") or self.section(f".zdebug_{short}")
        if sec is None:
            return None
        return self.section_data(sec)

    def symbols(self) -> list[Symbol]:
        """Entries of .symtab; empty when the file was stripped of symbols."""
        out: list[Symbol] = []
        for sec in self.sections:
            if sec.sh_type != SHT_SYMTAB or sec.name != ".symtab":
                continue
            strtab_sec = self.sections[sec.link] if sec.link < len(self.sections) else None
            strtab = self.section_data(strtab_sec) if strtab_sec else b""
            entsize = sec.entsize or (24 if self.is_64 else 16)
            count = sec.size // entsize
            for i in range(count):
                base = sec.offset + i * entsize
                if self.is_64:
                    name_off, info, _other, shndx, value, size = struct.unpack_from(
                        "<IBBHQQ", self.data, base
                    )
                else:
                    name_off, value, size, info, _other, shndx = struct.unpack_from(
                        "<IIIBBH", self.data, base
                    )
                end = strtab.find(b"\x00", name_off)
                name = strtab[name_off:end].decode("utf-8", "replace") if end >= 0 else ""
                out.append(Symbol(name, value, size, info & 0xF, info >> 4, shndx))
        return out

    def func_symbol_names(self) -> set[str]:
        return {s.name for s in self.symbols() if s.is_func and s.name}
