"""Robustness properties: fuzzed inputs must fail with typed errors only."""

from __future__ import annotations

import struct

from hypothesis import given, settings, strategies as st

from mutrecon.classfile import ClassDebugInfo, ClassFileError, decode_instructions, parse_class
from mutrecon.javasrc import SourceUnit, _split_lines, lex, LexError, UnbalancedBraces


@given(st.binary(max_size=400))
@settings(max_examples=300)
def test_parse_class_total_over_junk(data):
    try:
        info = parse_class(data)
    except ClassFileError:
        return
    assert isinstance(info, ClassDebugInfo)


@given(st.binary(max_size=300))
@settings(max_examples=300)
def test_parse_class_total_over_magic_prefixed_junk(data):
    blob = struct.pack(">I", 0xCAFEBABE) + data
    try:
        info = parse_class(blob)
    except ClassFileError:
        return
    assert isinstance(info, ClassDebugInfo)


@given(st.binary(max_size=200))
@settings(max_examples=300)
def test_decode_instructions_total(data):
    try:
        instructions = decode_instructions(data)
    except ClassFileError:
        return
    assert sum(i.width for i in instructions) == len(data)


@given(st.text(alphabet=st.sampled_from(list("ab \t\r\n")), max_size=200))
def test_split_lines_round_trip(text):
    lines, endings = _split_lines(text)
    assert len(lines) == len(endings)
    assert "".join(line + ending for line, ending in zip(lines, endings)) == text
    assert all(not line.endswith(("\r", "\n")) for line in lines)


_JAVAISH = st.text(
    alphabet=st.sampled_from(list("abc123 =+-*/<>(){};.\"'\n\t_$#@\\")), max_size=120
)


@given(_JAVAISH)
@settings(max_examples=300)
def test_lexer_total_over_javaish_text(text):
    try:
        tokens = lex(text)
    except LexError:
        return
    # token texts, with the gaps, reassemble into the input
    cursor = 0
    for token in tokens:
        found = text.find(token.text, cursor)
        assert found >= 0
        cursor = found + len(token.text)


@given(_JAVAISH)
@settings(max_examples=200)
def test_source_unit_total_over_javaish_text(text):
    try:
        unit = SourceUnit.from_text(text)
    except (LexError, UnbalancedBraces):
        return
    assert unit.render() == text
