"""Occurrence resolution, including the bytecode fast path guarantee."""

from __future__ import annotations

import pytest

from mutrecon.catalog import CandidateOccurrence, rule_for
from mutrecon.classfile import parse_class
from mutrecon.errors import FailureCode, ReconstructionError
from mutrecon.javasrc import find_candidates
from mutrecon.report import MutationRecord
from mutrecon.resolver import resolve

MATH = "org.pitest.mutationtest.engine.gregor.mutators.MathMutator"
ADD_RULE = rule_for(MATH, "Replaced integer addition with subtraction")


def _record(**overrides) -> MutationRecord:
    values = dict(
        mutant_id="com.example.Calculator:12:Math:2",
        source_file="Calculator.java",
        mutated_class="com.example.Calculator",
        mutated_method="windowSum",
        method_descriptor="(II)I",
        line=12,
        mutator=MATH,
        description="Replaced integer addition with subtraction",
        index=2,
        block=0,
        status="KILLED",
        detected=True,
    )
    values.update(overrides)
    return MutationRecord(**values)


@pytest.fixture(scope="module")
def calculator_info(toy_layout):
    return parse_class((toy_layout.classes_root / "com/example/Calculator.class").read_bytes())


def _candidates(line_text: str):
    return find_candidates(line_text, ADD_RULE)


def test_single_candidate_never_touches_class_file():
    calls = []

    def loader():
        calls.append(1)
        raise AssertionError("class file must not be read on the fast path")

    (candidate,) = _candidates("int x = a + 1;")
    chosen = resolve([candidate], _record(), loader, ADD_RULE)
    assert chosen is candidate
    assert calls == []


def test_two_additions_resolved_by_bytecode(calculator_info, toy_layout):
    line_text = "        int sum = (index + 1) * (length + index);"
    candidates = _candidates(line_text)
    assert len(candidates) == 2

    method = calculator_info.find_methods("windowSum")[0]
    add_counters = [
        counter for counter, ins in enumerate(method.instructions) if ins.mnemonic == "iadd"
    ]
    first, second = add_counters

    chosen = resolve(candidates, _record(index=second), calculator_info, ADD_RULE)
    assert chosen is candidates[1]
    chosen = resolve(candidates, _record(index=first), calculator_info, ADD_RULE)
    assert chosen is candidates[0]


def test_empty_candidates_is_typed_error(calculator_info):
    with pytest.raises(ReconstructionError) as exc:
        resolve([], _record(), calculator_info, ADD_RULE)
    assert exc.value.code is FailureCode.NO_CANDIDATE_ON_LINE


def test_method_not_found(calculator_info):
    candidates = _candidates("int x = a + b + c;")
    with pytest.raises(ReconstructionError) as exc:
        resolve(candidates, _record(mutated_method="nope"), calculator_info, ADD_RULE)
    assert exc.value.code is FailureCode.METHOD_NOT_FOUND


def test_descriptor_absent_falls_back_to_name(calculator_info):
    candidates = _candidates("int sum = (index + 1) * (length + index);")
    method = calculator_info.find_methods("windowSum")[0]
    second = [c for c, i in enumerate(method.instructions) if i.mnemonic == "iadd"][1]
    chosen = resolve(
        candidates, _record(method_descriptor="", index=second), calculator_info, ADD_RULE
    )
    assert chosen is candidates[1]


def test_name_only_ambiguity_is_an_error(calculator_info):
    # two methods named windowSum with different descriptors
    import copy

    info = copy.deepcopy(calculator_info)
    clone = copy.deepcopy(info.find_methods("windowSum")[0])
    clone.descriptor = "(III)I"
    info.methods.append(clone)
    candidates = _candidates("int x = a + b + c;")
    with pytest.raises(ReconstructionError) as exc:
        resolve(candidates, _record(method_descriptor=""), info, ADD_RULE)
    assert exc.value.code is FailureCode.METHOD_NOT_FOUND
    assert "ambiguous" in exc.value.detail


def test_ordinal_unresolved_when_index_is_elsewhere(calculator_info):
    candidates = _candidates("int x = a + b + c;")
    with pytest.raises(ReconstructionError) as exc:
        resolve(candidates, _record(index=0), calculator_info, ADD_RULE)  # iload_1, not iadd
    assert exc.value.code is FailureCode.ORDINAL_UNRESOLVED


def test_ordinal_out_of_range():
    """Bytecode sees three same-line additions, source only two."""
    from mutrecon.classfile import ClassDebugInfo, Instruction, MethodCode
    from mutrecon.opcodes import OPCODES

    iadd = OPCODES["iadd"]
    instructions = [Instruction(offset=k, opcode=iadd, mnemonic="iadd", width=1) for k in range(3)]
    method = MethodCode("windowSum", "(II)I", instructions, [(0, 12)])
    info = ClassDebugInfo("com.example.Calculator", [method])
    candidates = [
        CandidateOccurrence(line=12, column_start=1, column_end=2, ordinal=0),
        CandidateOccurrence(line=12, column_start=3, column_end=4, ordinal=1),
    ]
    with pytest.raises(ReconstructionError) as exc:
        resolve(candidates, _record(index=2), info, ADD_RULE)
    assert exc.value.code is FailureCode.ORDINAL_OUT_OF_RANGE


def test_every_fixture_mutation_terminates(toy_report, toy_layout):
    """resolve() is total: candidate or typed error, never a crash."""
    from mutrecon.catalog import rule_for as rf
    from mutrecon.javasrc import SourceUnit

    units: dict[str, SourceUnit] = {}
    infos: dict[str, object] = {}
    for record in toy_report:
        outer = record.mutated_class.split("$")[0]
        src = toy_layout.sources_root / (outer.replace(".", "/") + ".java")
        unit = units.setdefault(str(src), SourceUnit.from_bytes(src.read_bytes(), path=str(src)))
        try:
            rule = rf(record.mutator, record.description)
        except ReconstructionError:
            continue
        if rule.candidate_kind.value == "switch_label":
            continue
        candidates = find_candidates(unit.line(record.line), rule, line_no=record.line)
        cls_file = toy_layout.classes_root / (record.mutated_class.replace(".", "/") + ".class")
        info = infos.setdefault(
            record.mutated_class, parse_class(cls_file.read_bytes())
        )
        try:
            chosen = resolve(candidates, record, info, rule)
            assert chosen in candidates
        except ReconstructionError as exc:
            assert isinstance(exc.code, FailureCode)
