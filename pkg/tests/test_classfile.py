"""Class-file parsing and decoding, checked against the committed
disassembly oracle and, when a JDK is around, against live javap."""

from __future__ import annotations

import re
import shutil
import struct
import subprocess

import pytest
from hypothesis import given, strategies as st

from mutrecon.classfile import (
    MethodCode,
    NotAClassFile,
    TruncatedClassFile,
    TruncatedCode,
    UnknownOpcode,
    UnsupportedConstantTag,
    decode_instructions,
    line_of,
    occurrence_ordinal,
    parse_class,
)
from mutrecon.opcodes import ADD_OPS, OPCODES

from conftest import all_fixture_classes, load_oracle


def test_decode_three_simple_opcodes():
    instructions = decode_instructions(bytes([0x04, 0x3C, 0xB1]))
    assert [(i.offset, i.mnemonic, i.width) for i in instructions] == [
        (0, "iconst_1", 1),
        (1, "istore_1", 1),
        (2, "return", 1),
    ]


def test_decode_empty_code():
    assert decode_instructions(b"") == []


def test_decode_unknown_opcode():
    with pytest.raises(UnknownOpcode) as exc:
        decode_instructions(bytes([0x00, 0xCB]))
    assert exc.value.offset == 1
    assert exc.value.byte == 0xCB


def test_decode_truncated_operand():
    with pytest.raises(TruncatedCode):
        decode_instructions(bytes([0x10]))  # bipush missing its byte


def test_decode_invokedynamic_width():
    code = bytes([0xBA, 0x00, 0x01, 0x00, 0x00, 0xB1])
    instructions = decode_instructions(code)
    assert [i.mnemonic for i in instructions] == ["invokedynamic", "return"]
    assert instructions[0].width == 5


def test_decode_wide_forms():
    # wide iload 300; wide iinc 300 by -2; return
    code = struct.pack(">BBH", 0xC4, OPCODES["iload"], 300)
    code += struct.pack(">BBHh", 0xC4, OPCODES["iinc"], 300, -2)
    code += bytes([0xB1])
    instructions = decode_instructions(code)
    assert [(i.mnemonic, i.width) for i in instructions] == [
        ("iload_w", 4),
        ("iinc_w", 6),
        ("return", 1),
    ]


def test_not_a_class_file():
    with pytest.raises(NotAClassFile):
        parse_class(b"\x00\x01\x02\x03" + b"\x00" * 16)


def test_truncated_class_file():
    with pytest.raises(TruncatedClassFile):
        parse_class(struct.pack(">I", 0xCAFEBABE) + b"\x00\x00")


def test_unsupported_constant_tag():
    data = struct.pack(">IHH", 0xCAFEBABE, 0, 52)
    data += struct.pack(">H", 2)  # constant_pool_count: one entry
    data += bytes([99])  # bogus tag
    with pytest.raises(UnsupportedConstantTag) as exc:
        parse_class(data)
    assert exc.value.tag == 99


def test_future_class_version_warns_but_parses(caplog):
    path = dict((name, p) for name, p in all_fixture_classes())["com.example.Stripped"]
    data = bytearray(path.read_bytes())
    data[6:8] = struct.pack(">H", 99)  # far-future major version
    with caplog.at_level("WARNING", logger="mutrecon.classfile"):
        info = parse_class(bytes(data))
    assert info.methods
    assert any("major version 99" in message for message in caplog.messages)


def test_interface_has_no_code_methods():
    path = dict((name, p) for name, p in all_fixture_classes())["com.example.Greeter"]
    info = parse_class(path.read_bytes())
    assert info.class_name == "com.example.Greeter"
    assert info.methods == []


def test_stripped_class_has_empty_line_tables():
    path = dict((name, p) for name, p in all_fixture_classes())["com.example.Stripped"]
    info = parse_class(path.read_bytes())
    names = {m.name for m in info.methods}
    assert "sum" in names
    assert all(m.line_table == [] for m in info.methods)
    sum_method = info.find_methods("sum")[0]
    assert line_of(sum_method, 0) is None


@pytest.mark.parametrize("class_name,path", all_fixture_classes())
def test_differential_against_committed_oracle(class_name, path):
    """(offset, mnemonic, line) and the line table match the oracle listing."""
    oracle = load_oracle(class_name)
    info = parse_class(path.read_bytes())
    assert info.class_name == class_name

    expected_concrete = {key for key, m in oracle.items() if not m["abstract"]}
    parsed = {f"{m.name} {m.descriptor}": m for m in info.methods}
    assert set(parsed) == expected_concrete

    for key, method in parsed.items():
        want = oracle[key]
        got = [(i.offset, i.mnemonic, line_of(method, i.offset)) for i in method.instructions]
        assert got == want["instructions"], f"{class_name} {key}"
        assert method.line_table == want["line_table"], f"{class_name} {key}"


@pytest.mark.parametrize("class_name,path", all_fixture_classes())
def test_widths_tile_the_code_array(class_name, path):
    info = parse_class(path.read_bytes())
    for method in info.methods:
        offset = 0
        for ins in method.instructions:
            assert ins.offset == offset
            assert ins.width >= 1
            offset += ins.width


def test_line_of_interval_lookup():
    method = MethodCode("m", "()V", [], [(0, 10), (5, 11)])
    assert line_of(method, 6) == 11
    assert line_of(method, 5) == 11
    assert line_of(method, 4) == 10
    assert line_of(method, 0) == 10


def test_line_of_empty_table():
    method = MethodCode("m", "()V", [], [])
    assert line_of(method, 3) is None


def test_line_of_before_first_entry():
    method = MethodCode("m", "()V", [], [(4, 10)])
    assert line_of(method, 2) is None


def _method_with_adds(counters_to_lines: dict[int, int], total: int) -> MethodCode:
    from mutrecon.classfile import Instruction

    instructions = [
        Instruction(
            offset=counter,
            opcode=OPCODES["iadd"] if counter in counters_to_lines else OPCODES["nop"],
            mnemonic="iadd" if counter in counters_to_lines else "nop",
            width=1,
        )
        for counter in range(total)
    ]
    # one line-table entry per instruction keeps the mapping explicit
    table = [(counter, counters_to_lines.get(counter, 999)) for counter in range(total)]
    return MethodCode("m", "()V", instructions, table)


def test_occurrence_ordinal_two_adds_same_line():
    # iadd instructions at per-method counters 7 and 12, both on line 40
    method = _method_with_adds({7: 40, 12: 40}, total=15)
    assert occurrence_ordinal(method, 40, ADD_OPS, 12) == 1
    assert occurrence_ordinal(method, 40, ADD_OPS, 7) == 0


def test_occurrence_ordinal_unique_match():
    method = _method_with_adds({3: 21}, total=6)
    assert occurrence_ordinal(method, 21, ADD_OPS, 3) == 0


def test_occurrence_ordinal_wrong_line_is_absent():
    method = _method_with_adds({3: 21, 9: 22}, total=12)
    assert occurrence_ordinal(method, 21, ADD_OPS, 9) is None
    assert occurrence_ordinal(method, 23, ADD_OPS, 3) is None


def test_occurrence_ordinal_monotone_on_fixture(toy_layout):
    info = parse_class(
        (toy_layout.classes_root / "com/example/Calculator.class").read_bytes()
    )
    method = info.find_methods("windowSum")[0]
    line = method.line_table[0][1]
    adds = [
        counter
        for counter, ins in enumerate(method.instructions)
        if ins.opcode in ADD_OPS and line_of(method, ins.offset) == line
    ]
    ordinals = [occurrence_ordinal(method, line, ADD_OPS, c) for c in adds]
    assert ordinals == sorted(ordinals) == list(range(len(adds)))


# --- hypothesis: assembler/decoder round trip ----------------------------------

_SIMPLE = st.sampled_from(
    ["nop", "iconst_0", "iconst_1", "iadd", "isub", "pop", "dup", "swap", "iaload"]
)
_WITH_OPERAND = st.one_of(
    st.tuples(st.just("bipush"), st.integers(-128, 127)),
    st.tuples(st.just("sipush"), st.integers(-32768, 32767)),
    st.tuples(st.just("iload"), st.integers(0, 255)),
    st.tuples(st.just("iinc"), st.integers(0, 255), st.integers(-128, 127)),
)
_ITEM = st.one_of(_SIMPLE.map(lambda m: (m,)), _WITH_OPERAND)


@given(st.lists(_ITEM, max_size=40), st.booleans())
def test_decode_inverts_independent_assembler(items, with_switch):
    from classbuilder import ConstantPool, assemble

    listing_in = [(1, *item) for item in items]
    if with_switch:
        # a switch forces alignment padding to be exercised
        listing_in.append((1, "tableswitch", "END", 0, ["END", "END"]))
    listing_in.append(("label", "END"))
    listing_in.append((1, "return"))
    code, listing, _lines, _exc = assemble(ConstantPool(), listing_in)

    decoded = decode_instructions(code)
    assert [(i.offset, i.mnemonic) for i in decoded] == [(o, m) for o, m, _ in listing]
    assert sum(i.width for i in decoded) == len(code)


# --- optional live-javap tier ---------------------------------------------------

_JAVAP = shutil.which("javap")

_INS_RE = re.compile(r"^\s*(\d+):\s+([a-z0-9_]+)")
_LINE_RE = re.compile(r"^\s*line (\d+): (\d+)")


@pytest.mark.skipif(_JAVAP is None, reason="no JDK/javap on PATH")
@pytest.mark.parametrize("class_name,path", all_fixture_classes())
def test_differential_against_live_javap(class_name, path):
    out = subprocess.run(
        [_JAVAP, "-c", "-l", "-p", str(path)], capture_output=True, text=True, check=True
    ).stdout
    # javap groups per method; compare the bag of (offset, mnemonic) pairs and
    # the bag of line-table entries across the file.
    javap_instructions = [
        (int(m.group(1)), m.group(2)) for m in map(_INS_RE.match, out.splitlines()) if m
    ]
    javap_lines = [
        (int(m.group(2)), int(m.group(1))) for m in map(_LINE_RE.match, out.splitlines()) if m
    ]
    info = parse_class(path.read_bytes())
    ours_instructions = [
        (i.offset, i.mnemonic) for m in info.methods for i in m.instructions
    ]
    ours_lines = [entry for m in info.methods for entry in m.line_table]
    assert sorted(javap_instructions) == sorted(ours_instructions)
    assert sorted(javap_lines) == sorted(ours_lines)
