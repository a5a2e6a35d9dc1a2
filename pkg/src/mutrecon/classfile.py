"""JVM class-file parsing, just deep enough for debug reconstruction.

Extracts, per method carrying a Code attribute: the decoded instruction
stream (offset, mnemonic, width) and the LineNumberTable. That is all the
bytecode-side information needed to map a per-method instruction index back
to an occurrence of an operator on a source line. Verification, stack maps,
annotations and constant semantics are out of scope; constant-pool entries
other than the navigation tags are skipped by size.
"""

from __future__ import annotations

import logging
import struct
from bisect import bisect_right
from dataclasses import dataclass, field

from .opcodes import (
    IINC,
    LOOKUPSWITCH,
    MNEMONICS,
    TABLESWITCH,
    WIDE,
    WIDENABLE,
    WIDTHS,
)

log = logging.getLogger(__name__)

MAGIC = 0xCAFEBABE

# Newest class-file major version this parser has been exercised against
# (69 = Java 25). Newer versions still parse; they only log a warning.
KNOWN_MAJOR = 69


class ClassFileError(Exception):
    """Structural problem in a .class byte stream."""


class NotAClassFile(ClassFileError):
    def __init__(self) -> None:
        super().__init__("bad magic, not a class file")


class TruncatedClassFile(ClassFileError):
    def __init__(self, offset: int):
        super().__init__(f"class file truncated at offset {offset}")
        self.offset = offset


class UnsupportedConstantTag(ClassFileError):
    def __init__(self, tag: int, offset: int):
        super().__init__(f"unsupported constant pool tag {tag} at offset {offset}")
        self.tag = tag
        self.offset = offset


class UnknownOpcode(ClassFileError):
    def __init__(self, byte: int, offset: int):
        super().__init__(f"unknown opcode 0x{byte:02x} at code offset {offset}")
        self.byte = byte
        self.offset = offset


class TruncatedCode(ClassFileError):
    def __init__(self, offset: int):
        super().__init__(f"code array truncated at offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Instruction:
    offset: int
    opcode: int
    mnemonic: str
    width: int


@dataclass
class MethodCode:
    """One method's decoded bytecode plus its offset-to-line table."""

    name: str
    descriptor: str
    instructions: list[Instruction]
    line_table: list[tuple[int, int]]  # (start_offset, line), sorted


@dataclass
class ClassDebugInfo:
    class_name: str  # dotted binary name, e.g. "com.example.Foo$Bar"
    methods: list[MethodCode] = field(default_factory=list)

    def find_methods(self, name: str, descriptor: str | None = None) -> list[MethodCode]:
        return [
            m
            for m in self.methods
            if m.name == name and (descriptor is None or m.descriptor == descriptor)
        ]


class _Reader:
    """Cursor over a byte sequence with big-endian primitive reads."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def _take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedClassFile(self.pos)
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u1(self) -> int:
        return self._take(1)[0]

    def u2(self) -> int:
        return struct.unpack(">H", self._take(2))[0]

    def u4(self) -> int:
        return struct.unpack(">I", self._take(4))[0]

    def skip(self, n: int) -> None:
        self._take(n)


# Constant pool tag -> payload size in bytes, for tags we skip over.
# Utf8 (1) is variable and handled separately; Long/Double occupy two slots.
_CP_SIZES = {
    3: 4,  # Integer
    4: 4,  # Float
    5: 8,  # Long
    6: 8,  # Double
    7: 2,  # Class
    8: 2,  # String
    9: 4,  # Fieldref
    10: 4,  # Methodref
    11: 4,  # InterfaceMethodref
    12: 4,  # NameAndType
    15: 3,  # MethodHandle
    16: 2,  # MethodType
    17: 4,  # Dynamic
    18: 4,  # InvokeDynamic
    19: 2,  # Module
    20: 2,  # Package
}
_TWO_SLOT_TAGS = {5, 6}


def _parse_constant_pool(r: _Reader) -> tuple[dict[int, str], dict[int, int]]:
    """Return (utf8 strings by index, Class entries' name indexes)."""
    count = r.u2()
    utf8: dict[int, str] = {}
    classes: dict[int, int] = {}
    index = 1
    while index < count:
        tag_offset = r.pos
        tag = r.u1()
        if tag == 1:
            length = r.u2()
            raw = r._take(length)
            # Class files use modified UTF-8; names of interest are ASCII,
            # so plain UTF-8 with replacement is sufficient here.
            utf8[index] = raw.decode("utf-8", errors="replace")
        elif tag == 7:
            classes[index] = r.u2()
        elif tag in _CP_SIZES:
            r.skip(_CP_SIZES[tag])
        else:
            raise UnsupportedConstantTag(tag, tag_offset)
        index += 2 if tag in _TWO_SLOT_TAGS else 1
    return utf8, classes


def decode_instructions(code_bytes: bytes) -> list[Instruction]:
    """Decode a Code attribute's code array into an instruction list.

    The list index of each instruction is the per-method instruction
    counter that mutation-report `index` values are compared against.
    """
    out: list[Instruction] = []
    data = code_bytes
    n = len(data)
    offset = 0
    while offset < n:
        opcode = data[offset]
        if opcode not in MNEMONICS:
            raise UnknownOpcode(opcode, offset)
        mnemonic = MNEMONICS[opcode]
        width = WIDTHS[opcode]
        if opcode == WIDE:
            if offset + 1 >= n:
                raise TruncatedCode(offset)
            base = data[offset + 1]
            if base not in WIDENABLE:
                raise UnknownOpcode(base, offset + 1)
            width = 6 if base == IINC else 4
            mnemonic = MNEMONICS[base] + "_w"
        elif opcode in (TABLESWITCH, LOOKUPSWITCH):
            pad = (4 - (offset + 1) % 4) % 4
            base = offset + 1 + pad
            if opcode == TABLESWITCH:
                if base + 12 > n:
                    raise TruncatedCode(offset)
                low, high = struct.unpack(">ii", data[base + 4 : base + 12])
                if high < low:
                    raise TruncatedCode(offset)
                width = 1 + pad + 12 + 4 * (high - low + 1)
            else:
                if base + 8 > n:
                    raise TruncatedCode(offset)
                (npairs,) = struct.unpack(">i", data[base + 4 : base + 8])
                if npairs < 0:
                    raise TruncatedCode(offset)
                width = 1 + pad + 8 + 8 * npairs
        if offset + width > n:
            raise TruncatedCode(offset)
        out.append(Instruction(offset=offset, opcode=opcode, mnemonic=mnemonic, width=width))
        offset += width
    return out


def _parse_code_attribute(r: _Reader, utf8: dict[int, str]) -> tuple[bytes, list[tuple[int, int]]]:
    r.u2()  # max_stack
    r.u2()  # max_locals
    code_length = r.u4()
    code = r._take(code_length)
    exception_count = r.u2()
    r.skip(exception_count * 8)
    line_table: list[tuple[int, int]] = []
    attr_count = r.u2()
    for _ in range(attr_count):
        name = utf8.get(r.u2(), "")
        length = r.u4()
        end = r.pos + length
        if name == "LineNumberTable":
            entries = r.u2()
            for _ in range(entries):
                start_pc = r.u2()
                line = r.u2()
                line_table.append((start_pc, line))
        if r.pos > end:
            raise TruncatedClassFile(r.pos)
        r.skip(end - r.pos)
    line_table.sort(key=lambda e: e[0])
    return code, line_table


def parse_class(class_bytes: bytes) -> ClassDebugInfo:
    """Parse a class file down to per-method instructions and line tables.

    Methods without a Code attribute (abstract, native) are omitted. A
    missing LineNumberTable yields an empty line_table for that method.
    """
    r = _Reader(class_bytes)
    if r.u4() != MAGIC:
        raise NotAClassFile()
    r.u2()  # minor
    major = r.u2()
    if major > KNOWN_MAJOR:
        log.warning("class file major version %d is newer than this parser", major)

    utf8, classes = _parse_constant_pool(r)

    r.u2()  # access_flags
    this_class = r.u2()
    class_name = utf8.get(classes.get(this_class, -1), "").replace("/", ".")
    r.u2()  # super_class
    interface_count = r.u2()
    r.skip(interface_count * 2)

    def skip_attributes() -> None:
        count = r.u2()
        for _ in range(count):
            r.u2()
            r.skip(r.u4())

    field_count = r.u2()
    for _ in range(field_count):
        r.skip(6)  # access, name, descriptor
        skip_attributes()

    methods: list[MethodCode] = []
    method_count = r.u2()
    for _ in range(method_count):
        r.u2()  # access
        name = utf8.get(r.u2(), "")
        descriptor = utf8.get(r.u2(), "")
        code: bytes | None = None
        line_table: list[tuple[int, int]] = []
        attr_count = r.u2()
        for _ in range(attr_count):
            attr_name = utf8.get(r.u2(), "")
            length = r.u4()
            end = r.pos + length
            if attr_name == "Code":
                code, line_table = _parse_code_attribute(r, utf8)
            if r.pos > end:
                raise TruncatedClassFile(r.pos)
            r.skip(end - r.pos)
        if code is not None:
            methods.append(
                MethodCode(
                    name=name,
                    descriptor=descriptor,
                    instructions=decode_instructions(code),
                    line_table=line_table,
                )
            )
    return ClassDebugInfo(class_name=class_name, methods=methods)


def line_of(method: MethodCode, offset: int) -> int | None:
    """Source line of the instruction at `offset`, per the line table.

    Returns the line of the last table entry starting at or before the
    offset; None when the table is empty or the offset precedes it.
    """
    table = method.line_table
    if not table:
        return None
    starts = [s for s, _ in table]
    i = bisect_right(starts, offset)
    if i == 0:
        return None
    return table[i - 1][1]


def occurrence_ordinal(
    method: MethodCode,
    line: int,
    opcode_family: frozenset[int] | set[int],
    mutation_index: int,
) -> int | None:
    """Position of the indexed instruction among same-family, same-line ones.

    Filters the method's instructions to those on `line` whose opcode is in
    `opcode_family`, then returns the zero-based rank of the instruction
    whose per-method counter equals `mutation_index`. None when the index
    does not name such an instruction (wrong line, wrong family, or out of
    range) -- the caller reports that as an unresolvable mutation.
    """
    hits = [
        counter
        for counter, ins in enumerate(method.instructions)
        if ins.opcode in opcode_family and line_of(method, ins.offset) == line
    ]
    try:
        return hits.index(mutation_index)
    except ValueError:
        return None
