"""Minimal DWARF v4/v5 reader for function-inlining ground truth.

Parses .debug_info DIE trees (with .debug_abbrev), resolves strings
(.debug_str, .debug_line_str, .debug_str_offsets), indexed addresses
(.debug_addr), PC ranges (.debug_ranges v4, .debug_rnglists v5), and the
line-table file tables (.debug_line) needed to turn DW_AT_decl_file /
DW_AT_call_file indices into paths. It deliberately decodes only what the
ground-truth extraction consumes; every other attribute is read (so the
stream stays in sync) and kept raw.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from .errors import MalformedDwarf

# Tags
DW_TAG_compile_unit = 0x11
DW_TAG_partial_unit = 0x3C
DW_TAG_subprogram = 0x2E
DW_TAG_inlined_subroutine = 0x1D

# Attributes
DW_AT_name = 0x03
DW_AT_stmt_list = 0x10
DW_AT_low_pc = 0x11
DW_AT_high_pc = 0x12
DW_AT_comp_dir = 0x1B
DW_AT_inline = 0x20
DW_AT_abstract_origin = 0x31
DW_AT_decl_file = 0x3A
DW_AT_external = 0x3F
DW_AT_specification = 0x47
DW_AT_entry_pc = 0x52
DW_AT_ranges = 0x55
DW_AT_call_column = 0x57
DW_AT_call_file = 0x58
DW_AT_call_line = 0x59
DW_AT_linkage_name = 0x6E
DW_AT_MIPS_linkage_name = 0x2007
DW_AT_str_offsets_base = 0x72
DW_AT_addr_base = 0x73
DW_AT_rnglists_base = 0x74

# Forms
DW_FORM_addr = 0x01
DW_FORM_block2 = 0x03
DW_FORM_block4 = 0x04
DW_FORM_data2 = 0x05
DW_FORM_data4 = 0x06
DW_FORM_data8 = 0x07
DW_FORM_string = 0x08
DW_FORM_block = 0x09
DW_FORM_block1 = 0x0A
DW_FORM_data1 = 0x0B
DW_FORM_flag = 0x0C
DW_FORM_sdata = 0x0D
DW_FORM_strp = 0x0E
DW_FORM_udata = 0x0F
DW_FORM_ref_addr = 0x10
DW_FORM_ref1 = 0x11
DW_FORM_ref2 = 0x12
DW_FORM_ref4 = 0x13
DW_FORM_ref8 = 0x14
DW_FORM_ref_udata = 0x15
DW_FORM_indirect = 0x16
DW_FORM_sec_offset = 0x17
DW_FORM_exprloc = 0x18
DW_FORM_flag_present = 0x19
DW_FORM_strx = 0x1A
DW_FORM_addrx = 0x1B
DW_FORM_ref_sup4 = 0x1C
DW_FORM_strp_sup = 0x1D
DW_FORM_data16 = 0x1E
DW_FORM_line_strp = 0x1F
DW_FORM_ref_sig8 = 0x20
DW_FORM_implicit_const = 0x21
DW_FORM_loclistx = 0x22
DW_FORM_rnglistx = 0x23
DW_FORM_ref_sup8 = 0x24
DW_FORM_strx1 = 0x25
DW_FORM_strx2 = 0x26
DW_FORM_strx3 = 0x27
DW_FORM_strx4 = 0x28
DW_FORM_addrx1 = 0x29
DW_FORM_addrx2 = 0x2A
DW_FORM_addrx3 = 0x2B
DW_FORM_addrx4 = 0x2C

_CONSTANT_CLASS_FORMS = {
    DW_FORM_data1, DW_FORM_data2, DW_FORM_data4, DW_FORM_data8,
    DW_FORM_udata, DW_FORM_sdata, DW_FORM_implicit_const,
}
_REF_CU_FORMS = {DW_FORM_ref1, DW_FORM_ref2, DW_FORM_ref4, DW_FORM_ref8, DW_FORM_ref_udata}
_STRX_FORMS = {DW_FORM_strx, DW_FORM_strx1, DW_FORM_strx2, DW_FORM_strx3, DW_FORM_strx4}
_ADDRX_FORMS = {DW_FORM_addrx, DW_FORM_addrx1, DW_FORM_addrx2, DW_FORM_addrx3, DW_FORM_addrx4}

# Range-list entry kinds (.debug_rnglists)
_RLE_END_OF_LIST = 0x00
_RLE_BASE_ADDRESSX = 0x01
_RLE_STARTX_ENDX = 0x02
_RLE_STARTX_LENGTH = 0x03
_RLE_OFFSET_PAIR = 0x04
_RLE_BASE_ADDRESS = 0x05
_RLE_START_END = 0x06
_RLE_START_LENGTH = 0x07

# Line-table content types (v5)
_DW_LNCT_path = 1
_DW_LNCT_directory_index = 2


class Reader:
    """Little-endian cursor over one section's bytes."""

    __slots__ = ("data", "pos")

    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def eof(self) -> bool:
        return self.pos >= len(self.data)

    def _take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise MalformedDwarf("unexpected end of section", self.pos)
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return self._take(1)[0]

    def u16(self) -> int:
        return struct.unpack("<H", self._take(2))[0]

    def u24(self) -> int:
        b = self._take(3)
        return b[0] | (b[1] << 8) | (b[2] << 16)

    def u32(self) -> int:
        return struct.unpack("<I", self._take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self._take(8))[0]

    def s8(self) -> int:
        return struct.unpack("<b", self._take(1))[0]

    def uleb(self) -> int:
        result = 0
        shift = 0
        while True:
            byte = self.u8()
            result |= (byte & 0x7F) << shift
            if not byte & 0x80:
                return result
            shift += 7

    def sleb(self) -> int:
        result = 0
        shift = 0
        while True:
            byte = self.u8()
            result |= (byte & 0x7F) << shift
            shift += 7
            if not byte & 0x80:
                if byte & 0x40:
                    result -= 1 << shift
                return result

    def raw(self, n: int) -> bytes:
        return self._take(n)

    def cstr(self) -> bytes:
        end = self.data.find(b"\x00", self.pos)
        if end < 0:
            raise MalformedDwarf("unterminated string", self.pos)
        out = self.data[self.pos : end]
        self.pos = end + 1
        return out

    def address(self, size: int) -> int:
        if size == 8:
            return self.u64()
        if size == 4:
            return self.u32()
        raise MalformedDwarf(f"unsupported address size {size}", self.pos)


@dataclass
class AbbrevDecl:
    tag: int
    has_children: bool
    # (attribute, form, implicit_const_value)
    attrs: list[tuple[int, int, int | None]]


def parse_abbrev_table(data: bytes, offset: int) -> dict[int, AbbrevDecl]:
    r = Reader(data, offset)
    table: dict[int, AbbrevDecl] = {}
    while True:
        code = r.uleb()
        if code == 0:
            return table
        tag = r.uleb()
        has_children = r.u8() != 0
        attrs: list[tuple[int, int, int | None]] = []
        while True:
            attr = r.uleb()
            form = r.uleb()
            const = r.sleb() if form == DW_FORM_implicit_const else None
            if attr == 0 and form == 0:
                break
            attrs.append((attr, form, const))
        table[code] = AbbrevDecl(tag, has_children, attrs)


@dataclass
class Die:
    tag: int
    offset: int  # section-global offset, usable as a stable identity
    cu: "CompileUnit"
    parent: "Die | None" = None
    attrs: dict[int, tuple[int, object]] = field(default_factory=dict)  # attr -> (form, raw)
    children: list["Die"] = field(default_factory=list)

    def has(self, attr: int) -> bool:
        return attr in self.attrs

    def raw(self, attr: int):
        got = self.attrs.get(attr)
        return got[1] if got else None

    def form(self, attr: int) -> int | None:
        got = self.attrs.get(attr)
        return got[0] if got else None

    # -- typed accessors -------------------------------------------------

    def constant(self, attr: int) -> int | None:
        got = self.attrs.get(attr)
        if got is None:
            return None
        form, raw = got
        if form in _CONSTANT_CLASS_FORMS or form in (DW_FORM_sec_offset, DW_FORM_flag,
                                                     DW_FORM_flag_present):
            return int(raw)  # type: ignore[arg-type]
        return None

    def string(self, attr: int) -> str | None:
        got = self.attrs.get(attr)
        if got is None:
            return None
        form, raw = got
        dw = self.cu.dwarf
        if form == DW_FORM_string:
            return raw.decode("utf-8", "replace")  # type: ignore[union-attr]
        if form == DW_FORM_strp:
            return dw.str_at(int(raw))  # type: ignore[arg-type]
        if form == DW_FORM_line_strp:
            return dw.line_str_at(int(raw))  # type: ignore[arg-type]
        if form in _STRX_FORMS:
            return dw.strx(self.cu, int(raw))  # type: ignore[arg-type]
        return None

    def addr(self, attr: int) -> int | None:
        got = self.attrs.get(attr)
        if got is None:
            return None
        form, raw = got
        if form == DW_FORM_addr:
            return int(raw)  # type: ignore[arg-type]
        if form in _ADDRX_FORMS:
            return self.cu.dwarf.addrx(self.cu, int(raw))  # type: ignore[arg-type]
        return None

    def reference(self, attr: int) -> "Die | None":
        got = self.attrs.get(attr)
        if got is None:
            return None
        form, raw = got
        if form in _REF_CU_FORMS:
            target = self.cu.offset + int(raw)  # type: ignore[arg-type]
        elif form == DW_FORM_ref_addr:
            target = int(raw)  # type: ignore[arg-type]
        else:
            return None
        return self.cu.dwarf.die_at(target)

    def low_pc(self) -> int | None:
        return self.addr(DW_AT_low_pc)

    def high_pc(self, low: int | None) -> int | None:
        got = self.attrs.get(DW_AT_high_pc)
        if got is None:
            return None
        form, raw = got
        if form == DW_FORM_addr or form in _ADDRX_FORMS:
            return self.addr(DW_AT_high_pc)
        if low is None:
            return None
        return low + int(raw)  # constant class: offset past low_pc

    def pc_ranges(self) -> list[tuple[int, int]]:
        """Machine-address ranges of this DIE; empty ranges are dropped."""
        low = self.low_pc()
        if low is not None and DW_AT_high_pc in self.attrs:
            high = self.high_pc(low)
            if high is not None and high > low:
                return [(low, high)]
            return []
        got = self.attrs.get(DW_AT_ranges)
        if got is None:
            return []
        form, raw = got
        return self.cu.dwarf.resolve_ranges(self.cu, form, int(raw))  # type: ignore[arg-type]


@dataclass
class CompileUnit:
    offset: int
    version: int
    address_size: int
    dwarf: "DwarfInfo"
    root: Die | None = None
    str_offsets_base: int | None = None
    addr_base: int | None = None
    rnglists_base: int | None = None
    stmt_list: int | None = None
    comp_dir: str | None = None
    base_address: int | None = None
    _file_table: list[str] | None = None

    def file_name(self, index: int | None) -> str | None:
        """Resolve a DW_AT_decl_file / DW_AT_call_file index to a path."""
        if index is None:
            return None
        if self.version < 5:
            if index == 0:
                return None  # v4: 0 means "not specified"
            table_index = index  # 1-based, table stored with dummy slot 0
        else:
            table_index = index  # v5: 0-based including primary file
        table = self.dwarf.line_file_table(self)
        if table is None or not (0 <= table_index < len(table)):
            return None
        return table[table_index]


class DwarfInfo:
    """All parsed compile units of one binary plus lazy section resolvers."""

    def __init__(
        self,
        info: bytes,
        abbrev: bytes,
        debug_str: bytes = b"",
        line_str: bytes = b"",
        str_offsets: bytes = b"",
        debug_addr: bytes = b"",
        rnglists: bytes = b"",
        ranges: bytes = b"",
        line: bytes = b"",
    ):
        self._info = info
        self._abbrev = abbrev
        self._str = debug_str
        self._line_str = line_str
        self._str_offsets = str_offsets
        self._addr = debug_addr
        self._rnglists = rnglists
        self._ranges = ranges
        self._line = line
        self._abbrev_cache: dict[int, dict[int, AbbrevDecl]] = {}
        self._line_tables: dict[int, list[str] | None] = {}
        self.units: list[CompileUnit] = []
        self._die_index: dict[int, Die] = {}
        self._parse_units()

    # -- string / address helpers ---------------------------------------

    def _cstr_at(self, data: bytes, offset: int, what: str) -> str:
        end = data.find(b"\x00", offset)
        if offset >= len(data) or end < 0:
            raise MalformedDwarf(f"bad {what} offset {offset:#x}")
        return data[offset:end].decode("utf-8", "replace")

    def str_at(self, offset: int) -> str:
        return self._cstr_at(self._str, offset, ".debug_str")

    def line_str_at(self, offset: int) -> str:
        return self._cstr_at(self._line_str, offset, ".debug_line_str")

    def strx(self, cu: CompileUnit, index: int) -> str:
        base = cu.str_offsets_base if cu.str_offsets_base is not None else 8
        pos = base + 4 * index
        if pos + 4 > len(self._str_offsets):
            raise MalformedDwarf(f"string index {index} outside .debug_str_offsets")
        (off,) = struct.unpack_from("<I", self._str_offsets, pos)
        return self.str_at(off)

    def addrx(self, cu: CompileUnit, index: int) -> int:
        base = cu.addr_base if cu.addr_base is not None else 8
        pos = base + cu.address_size * index
        if pos + cu.address_size > len(self._addr):
            raise MalformedDwarf(f"address index {index} outside .debug_addr")
        if cu.address_size == 8:
            return struct.unpack_from("<Q", self._addr, pos)[0]
        return struct.unpack_from("<I", self._addr, pos)[0]

    def die_at(self, offset: int) -> Die | None:
        return self._die_index.get(offset)

    # -- ranges ----------------------------------------------------------

    def resolve_ranges(self, cu: CompileUnit, form: int, raw: int) -> list[tuple[int, int]]:
        if cu.version >= 5:
            if form == DW_FORM_rnglistx:
                base = cu.rnglists_base if cu.rnglists_base is not None else 12
                pos = base + 4 * raw
                if pos + 4 > len(self._rnglists):
                    raise MalformedDwarf(f"range-list index {raw} outside .debug_rnglists")
                (rel,) = struct.unpack_from("<I", self._rnglists, pos)
                offset = base + rel
            else:
                offset = raw
            return self._read_rnglist(cu, offset)
        return self._read_v4_ranges(cu, raw)

    def _read_rnglist(self, cu: CompileUnit, offset: int) -> list[tuple[int, int]]:
        r = Reader(self._rnglists, offset)
        base = cu.base_address or 0
        out: list[tuple[int, int]] = []
        while True:
            kind = r.u8()
            if kind == _RLE_END_OF_LIST:
                return out
            if kind == _RLE_BASE_ADDRESSX:
                base = self.addrx(cu, r.uleb())
            elif kind == _RLE_STARTX_ENDX:
                start = self.addrx(cu, r.uleb())
                end = self.addrx(cu, r.uleb())
                if end > start:
                    out.append((start, end))
            elif kind == _RLE_STARTX_LENGTH:
                start = self.addrx(cu, r.uleb())
                length = r.uleb()
                if length:
                    out.append((start, start + length))
            elif kind == _RLE_OFFSET_PAIR:
                s = r.uleb()
                e = r.uleb()
                if e > s:
                    out.append((base + s, base + e))
            elif kind == _RLE_BASE_ADDRESS:
                base = r.address(cu.address_size)
            elif kind == _RLE_START_END:
                start = r.address(cu.address_size)
                end = r.address(cu.address_size)
                if end > start:
                    out.append((start, end))
            elif kind == _RLE_START_LENGTH:
                start = r.address(cu.address_size)
                length = r.uleb()
                if length:
                    out.append((start, start + length))
            else:
                raise MalformedDwarf(f"unknown range-list entry kind {kind}", r.pos)

    def _read_v4_ranges(self, cu: CompileUnit, offset: int) -> list[tuple[int, int]]:
        r = Reader(self._ranges, offset)
        base = cu.base_address or 0
        max_addr = (1 << (8 * cu.address_size)) - 1
        out: list[tuple[int, int]] = []
        while True:
            begin = r.address(cu.address_size)
            end = r.address(cu.address_size)
            if begin == 0 and end == 0:
                return out
            if begin == max_addr:
                base = end
                continue
            if end > begin:
                out.append((base + begin, base + end))

    # -- .debug_line file tables ------------------------------------------

    def line_file_table(self, cu: CompileUnit) -> list[str] | None:
        if cu.stmt_list is None:
            return None
        if cu.stmt_list in self._line_tables:
            return self._line_tables[cu.stmt_list]
        try:
            table = self._parse_line_header(cu, cu.stmt_list)
        except MalformedDwarf:
            table = None
        self._line_tables[cu.stmt_list] = table
        return table

    def _join(self, cu: CompileUnit, directory: str | None, name: str) -> str:
        if name.startswith("/") or directory in (None, ""):
            return name
        return f"{directory.rstrip('/')}/{name}"

    def _parse_line_header(self, cu: CompileUnit, offset: int) -> list[str]:
        r = Reader(self._line, offset)
        unit_length = r.u32()
        if unit_length == 0xFFFFFFFF:
            raise MalformedDwarf("64-bit DWARF line table unsupported", offset)
        version = r.u16()
        if version >= 5:
            r.u8()  # address size
            r.u8()  # segment selector size
        r.u32()  # header_length
        r.u8()  # minimum_instruction_length
        if version >= 4:
            r.u8()  # maximum_operations_per_instruction
        r.u8()  # default_is_stmt
        r.s8()  # line_base
        r.u8()  # line_range
        opcode_base = r.u8()
        r.raw(opcode_base - 1)

        if version < 5:
            directories: list[str] = []
            while True:
                d = r.cstr()
                if not d:
                    break
                directories.append(d.decode("utf-8", "replace"))
            files: list[str] = ["<unknown>"]  # dummy slot: v4 indices are 1-based
            while True:
                name_b = r.cstr()
                if not name_b:
                    break
                dir_index = r.uleb()
                r.uleb()  # mtime
                r.uleb()  # length
                name = name_b.decode("utf-8", "replace")
                directory = cu.comp_dir if dir_index == 0 else (
                    directories[dir_index - 1] if dir_index - 1 < len(directories) else None
                )
                files.append(self._join(cu, directory, name))
            return files

        # v5: directories and files are form-encoded entry tables
        def read_entries(formats: list[tuple[int, int]], count: int) -> list[dict[int, object]]:
            entries = []
            for _ in range(count):
                values: dict[int, object] = {}
                for content_type, form in formats:
                    values[content_type] = self._read_line_form(r, cu, form)
                entries.append(values)
            return entries

        dir_format_count = r.u8()
        dir_formats = [(r.uleb(), r.uleb()) for _ in range(dir_format_count)]
        dir_count = r.uleb()
        dir_entries = read_entries(dir_formats, dir_count)
        directories5 = [str(e.get(_DW_LNCT_path, "")) for e in dir_entries]

        file_format_count = r.u8()
        file_formats = [(r.uleb(), r.uleb()) for _ in range(file_format_count)]
        file_count = r.uleb()
        file_entries = read_entries(file_formats, file_count)

        files5: list[str] = []
        for e in file_entries:
            name = str(e.get(_DW_LNCT_path, ""))
            dir_index = e.get(_DW_LNCT_directory_index, 0)
            directory = None
            if isinstance(dir_index, int) and 0 <= dir_index < len(directories5):
                directory = directories5[dir_index]
            files5.append(self._join(cu, directory, name))
        return files5

    def _read_line_form(self, r: Reader, cu: CompileUnit, form: int):
        if form == DW_FORM_string:
            return r.cstr().decode("utf-8", "replace")
        if form == DW_FORM_line_strp:
            return self.line_str_at(r.u32())
        if form == DW_FORM_strp:
            return self.str_at(r.u32())
        if form == DW_FORM_udata:
            return r.uleb()
        if form == DW_FORM_data1:
            return r.u8()
        if form == DW_FORM_data2:
            return r.u16()
        if form == DW_FORM_data4:
            return r.u32()
        if form == DW_FORM_data8:
            return r.u64()
        if form == DW_FORM_data16:
            return r.raw(16)
        if form == DW_FORM_block:
            return r.raw(r.uleb())
        raise MalformedDwarf(f"unsupported line-table form {form:#x}", r.pos)

    # -- unit / DIE parsing ------------------------------------------------

    def _abbrevs(self, offset: int) -> dict[int, AbbrevDecl]:
        if offset not in self._abbrev_cache:
            try:
                self._abbrev_cache[offset] = parse_abbrev_table(self._abbrev, offset)
            except MalformedDwarf:
                raise
            except Exception as exc:  # struct/index errors become MalformedDwarf
                raise MalformedDwarf(f"bad abbreviation table at {offset:#x}: {exc}") from exc
        return self._abbrev_cache[offset]

    def _parse_units(self) -> None:
        r = Reader(self._info, 0)
        while not r.eof():
            self._parse_one_unit(r)

    def _parse_one_unit(self, r: Reader) -> None:
        unit_offset = r.pos
        unit_length = r.u32()
        if unit_length == 0xFFFFFFFF:
            raise MalformedDwarf("64-bit DWARF is not supported", unit_offset)
        unit_end = r.pos + unit_length
        if unit_end > len(self._info):
            raise MalformedDwarf(f"unit length {unit_length:#x} overruns section", unit_offset)
        version = r.u16()
        if version not in (2, 3, 4, 5):
            raise MalformedDwarf(f"unsupported DWARF version {version}", unit_offset)
        if version >= 5:
            unit_type = r.u8()
            address_size = r.u8()
            abbrev_offset = r.u32()
            if unit_type not in (0x01, 0x03):  # compile / partial
                r.pos = unit_end  # skip type/skeleton/split units
                return
        else:
            abbrev_offset = r.u32()
            address_size = r.u8()

        cu = CompileUnit(unit_offset, version, address_size, self)
        abbrevs = self._abbrevs(abbrev_offset)

        stack: list[Die] = []
        while r.pos < unit_end:
            die_offset = r.pos
            code = r.uleb()
            if code == 0:
                if stack:
                    stack.pop()
                if not stack:
                    # null terminator beyond the root: remaining bytes, if any,
                    # belong to sibling chains that a producer never emits here.
                    if r.pos >= unit_end:
                        break
                continue
            decl = abbrevs.get(code)
            if decl is None:
                raise MalformedDwarf(f"abbreviation code {code} not in table", die_offset)
            die = Die(decl.tag, die_offset, cu, parent=stack[-1] if stack else None)
            for attr, form, const in decl.attrs:
                value = self._read_form(r, cu, form, const)
                if attr:
                    die.attrs[attr] = value
            self._die_index[die_offset] = die
            if die.parent is not None:
                die.parent.children.append(die)
            if cu.root is None:
                cu.root = die
                self._capture_cu_bases(cu, die)
            if decl.has_children:
                stack.append(die)
        self.units.append(cu)
        r.pos = unit_end

    def _capture_cu_bases(self, cu: CompileUnit, root: Die) -> None:
        cu.str_offsets_base = root.constant(DW_AT_str_offsets_base)
        cu.addr_base = root.constant(DW_AT_addr_base)
        cu.rnglists_base = root.constant(DW_AT_rnglists_base)
        cu.stmt_list = root.constant(DW_AT_stmt_list)
        cu.comp_dir = root.string(DW_AT_comp_dir)
        cu.base_address = root.low_pc()

    def _read_form(self, r: Reader, cu: CompileUnit, form: int,
                   const: int | None) -> tuple[int, object]:
        pos = r.pos
        try:
            if form == DW_FORM_addr:
                return form, r.address(cu.address_size)
            if form == DW_FORM_block1:
                return form, r.raw(r.u8())
            if form == DW_FORM_block2:
                return form, r.raw(r.u16())
            if form == DW_FORM_block4:
                return form, r.raw(r.u32())
            if form in (DW_FORM_block, DW_FORM_exprloc):
                return form, r.raw(r.uleb())
            if form in (DW_FORM_data1, DW_FORM_ref1, DW_FORM_strx1, DW_FORM_addrx1,
                        DW_FORM_flag):
                return form, r.u8()
            if form in (DW_FORM_data2, DW_FORM_ref2, DW_FORM_strx2, DW_FORM_addrx2):
                return form, r.u16()
            if form in (DW_FORM_strx3, DW_FORM_addrx3):
                return form, r.u24()
            if form in (DW_FORM_data4, DW_FORM_ref4, DW_FORM_strx4, DW_FORM_addrx4,
                        DW_FORM_sec_offset, DW_FORM_strp, DW_FORM_line_strp,
                        DW_FORM_ref_addr, DW_FORM_ref_sup4, DW_FORM_strp_sup):
                return form, r.u32()
            if form in (DW_FORM_data8, DW_FORM_ref8, DW_FORM_ref_sig8, DW_FORM_ref_sup8):
                return form, r.u64()
            if form == DW_FORM_data16:
                return form, r.raw(16)
            if form == DW_FORM_string:
                return form, r.cstr()
            if form in (DW_FORM_udata, DW_FORM_strx, DW_FORM_addrx, DW_FORM_ref_udata,
                        DW_FORM_loclistx, DW_FORM_rnglistx):
                return form, r.uleb()
            if form == DW_FORM_sdata:
                return form, r.sleb()
            if form == DW_FORM_flag_present:
                return form, 1
            if form == DW_FORM_implicit_const:
                return form, const if const is not None else 0
            if form == DW_FORM_indirect:
                return self._read_form(r, cu, r.uleb(), None)
        except MalformedDwarf:
            raise
        except Exception as exc:
            raise MalformedDwarf(f"failed decoding form {form:#x}: {exc}", pos) from exc
        raise MalformedDwarf(f"unknown attribute form {form:#x}", pos)

    # -- traversal ---------------------------------------------------------

    def walk(self):
        """Yield every DIE in declaration order across all units."""

        def visit(die: Die):
            yield die
            for child in die.children:
                yield from visit(child)

        for cu in self.units:
            if cu.root is not None:
                yield from visit(cu.root)
