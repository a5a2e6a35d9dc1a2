"""Operator catalog: what each mutation description means at source level.

Maps a (mutator, description) pair from a mutation report to a rewrite
rule: the token pattern to look for on the reported line, the replacement
to produce, and the opcode family that disambiguates between several
same-line occurrences. The built-in table covers the twelve stock
operators; a plain-text rules file can extend it without code changes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from . import opcodes as ops
from .errors import FailureCode, ReconstructionError


class CandidateKind(str, Enum):
    BINARY_OPERATOR = "binary_operator"
    RELATIONAL_OPERATOR = "relational_operator"
    INCR_DECR = "incr_decr"
    UNARY_MINUS = "unary_minus"
    RETURN_STATEMENT = "return_statement"
    CALL_STATEMENT = "call_statement"
    CONDITION_EXPRESSION = "condition_expression"
    SWITCH_LABEL = "switch_label"


@dataclass(frozen=True)
class CandidateOccurrence:
    """One candidate region on a source line; columns are 1-based, end exclusive."""

    line: int
    column_start: int
    column_end: int
    ordinal: int


@dataclass(frozen=True)
class RewriteRule:
    mutator: str  # canonical operator name, e.g. "Math"
    description_pattern: str
    candidate_kind: CandidateKind
    opcode_family: frozenset[int]
    token_map: Mapping[str, str] | None = None
    replacement_text: str | None = None
    callee: str | None = None


class NoOpRewrite(Exception):
    """Replacement equals the original slice; the rule table is wrong."""


def apply_replacement(line_text: str, occurrence: CandidateOccurrence, rule: RewriteRule) -> str:
    """Rewrite one candidate region, leaving every other byte untouched."""
    s = occurrence.column_start - 1
    e = occurrence.column_end - 1
    original = line_text[s:e]
    kind = rule.candidate_kind
    if kind in (
        CandidateKind.BINARY_OPERATOR,
        CandidateKind.RELATIONAL_OPERATOR,
        CandidateKind.INCR_DECR,
    ):
        replacement = (rule.token_map or {})[original]
    elif kind in (CandidateKind.UNARY_MINUS, CandidateKind.CALL_STATEMENT):
        replacement = ""
    else:
        if rule.replacement_text is None:
            raise ValueError(f"rule for {rule.mutator} has no replacement text")
        replacement = rule.replacement_text
    if replacement == original:
        raise NoOpRewrite(f"{rule.mutator}: replacing {original!r} with itself")
    mutated = line_text[:s] + replacement + line_text[e:]
    if mutated == line_text:
        raise NoOpRewrite(f"{rule.mutator}: rewrite left the line unchanged")
    return mutated


# --- operator naming ----------------------------------------------------------

_SHORT_NAMES = {
    "MathMutator": "Math",
    "ConditionalsBoundaryMutator": "ConditionalsBoundary",
    "RemoveConditionalMutator": "RemoveConditionals",
    "IncrementsMutator": "Increments",
    "InvertNegsMutator": "InvertNegatives",
    "NullReturnValsMutator": "NullReturns",
    "BooleanTrueReturnValsMutator": "TrueReturns",
    "BooleanFalseReturnValsMutator": "FalseReturns",
    "PrimitiveReturnsMutator": "PrimitiveReturns",
    "EmptyObjectReturnValsMutator": "EmptyReturns",
    "VoidMethodCallMutator": "VoidMethodCall",
    "SwitchMutator": "ExperimentalSwitch",
}


def operator_short_name(mutator: str) -> str:
    """Canonical operator name for a fully-qualified mutator class name.

    Unknown mutators fall back to their simple class name without the
    `Mutator` suffix, so ids and stats stay readable for operators the
    catalog does not know.
    """
    simple = mutator.rsplit(".", 1)[-1]
    for class_name, short in _SHORT_NAMES.items():
        if simple == class_name or simple.startswith(class_name + "_"):
            return short
    if simple.endswith("Mutator") and len(simple) > len("Mutator"):
        return simple[: -len("Mutator")]
    return simple


# --- built-in rule table --------------------------------------------------------

_MATH_WORD_SWAPS = (
    ("addition with subtraction", {"+": "-", "+=": "-="}, ops.ADD_OPS),
    ("subtraction with addition", {"-": "+", "-=": "+="}, ops.SUB_OPS),
    ("multiplication with division", {"*": "/", "*=": "/="}, ops.MUL_OPS),
    ("division with multiplication", {"/": "*", "/=": "*="}, ops.DIV_OPS),
    ("modulus with multiplication", {"%": "*", "%=": "*="}, ops.REM_OPS),
)

_MATH_FIXED_SWAPS = (
    ("Replaced bitwise OR with AND", {"|": "&", "|=": "&="}, ops.OR_OPS),
    ("Replaced bitwise AND with OR", {"&": "|", "&=": "|="}, ops.AND_OPS),
    ("Replaced XOR with AND", {"^": "&", "^=": "&="}, ops.XOR_OPS),
    ("Replaced Shift Left with Shift Right", {"<<": ">>", "<<=": ">>="}, ops.SHL_OPS),
    ("Replaced Unsigned Shift Right with Shift Left", {">>>": "<<", ">>>=": "<<="}, ops.USHR_OPS),
    ("Replaced Shift Right with Shift Left", {">>": "<<", ">>=": "<<="}, ops.SHR_OPS),
)

_NUMERIC_TYPE_WORDS = ("integer", "long", "float", "double")

_BOUNDARY_MAP = {"<": "<=", "<=": "<", ">": ">=", ">=": ">"}

# Empty-value factory names as they appear in report descriptions.
_EMPTY_FACTORIES = {
    "Optional.empty",
    "Collections.emptyList",
    "Collections.emptyMap",
    "Collections.emptySet",
    "Stream.empty",
    "List.of",
    "Set.of",
    "Map.of",
}

_PRIMITIVE_RETURN_WORDS = ("int", "short", "byte", "char", "long", "float", "double", "boolean")


def _freeze(token_map: dict[str, str]) -> Mapping[str, str]:
    return MappingProxyType(dict(token_map))


def _math_rule(description: str) -> RewriteRule | None:
    for suffix, token_map, family in _MATH_WORD_SWAPS:
        for type_word in _NUMERIC_TYPE_WORDS:
            pattern = f"Replaced {type_word} {suffix}"
            if description.startswith(pattern):
                return RewriteRule(
                    mutator="Math",
                    description_pattern=pattern,
                    candidate_kind=CandidateKind.BINARY_OPERATOR,
                    opcode_family=family,
                    token_map=_freeze(token_map),
                )
    for pattern, token_map, family in _MATH_FIXED_SWAPS:
        if description.startswith(pattern):
            return RewriteRule(
                mutator="Math",
                description_pattern=pattern,
                candidate_kind=CandidateKind.BINARY_OPERATOR,
                opcode_family=family,
                token_map=_freeze(token_map),
            )
    return None


def _boundary_rule(description: str) -> RewriteRule | None:
    pattern = "changed conditional boundary"
    if not description.startswith(pattern):
        return None
    return RewriteRule(
        mutator="ConditionalsBoundary",
        description_pattern=pattern,
        candidate_kind=CandidateKind.RELATIONAL_OPERATOR,
        opcode_family=ops.ORDER_BRANCH_OPS,
        token_map=_freeze(_BOUNDARY_MAP),
    )


def _remove_conditional_rule(description: str) -> RewriteRule | None:
    prefix = "removed conditional - replaced "
    if not description.startswith(prefix):
        return None
    for check, family in (("equality check", ops.EQUALITY_BRANCH_OPS), ("comparison check", ops.ORDER_BRANCH_OPS)):
        for value in ("true", "false"):
            pattern = f"{prefix}{check} with {value}"
            if description.startswith(pattern):
                return RewriteRule(
                    mutator="RemoveConditionals",
                    description_pattern=pattern,
                    candidate_kind=CandidateKind.CONDITION_EXPRESSION,
                    opcode_family=family,
                    replacement_text=value,
                )
    return None


def _increments_rule(description: str) -> RewriteRule | None:
    prefix = "Changed increment from "
    if not description.startswith(prefix):
        return None
    head = description[len(prefix):].split(" to ", 1)[0].strip()
    try:
        delta = int(head)
    except ValueError:
        return None
    token_map = {"++": "--", "+=": "-="} if delta >= 0 else {"--": "++", "-=": "+="}
    return RewriteRule(
        mutator="Increments",
        description_pattern=prefix,
        candidate_kind=CandidateKind.INCR_DECR,
        opcode_family=ops.IINC_OPS,
        token_map=_freeze(token_map),
    )


def _invert_negatives_rule(description: str) -> RewriteRule | None:
    pattern = "removed negation"
    if not description.lower().startswith(pattern):
        return None
    return RewriteRule(
        mutator="InvertNegatives",
        description_pattern=pattern,
        candidate_kind=CandidateKind.UNARY_MINUS,
        opcode_family=ops.NEG_OPS,
    )


def _return_rule(short: str, pattern: str, replacement: str) -> RewriteRule:
    return RewriteRule(
        mutator=short,
        description_pattern=pattern,
        candidate_kind=CandidateKind.RETURN_STATEMENT,
        opcode_family=ops.RETURN_OPS,
        replacement_text=replacement,
    )


def _null_returns_rule(description: str) -> RewriteRule | None:
    pattern = "replaced return value with null"
    if description.startswith(pattern):
        return _return_rule("NullReturns", pattern, "null")
    return None


def _true_returns_rule(description: str) -> RewriteRule | None:
    pattern = "replaced boolean return with true"
    if description.startswith(pattern):
        return _return_rule("TrueReturns", pattern, "true")
    return None


def _false_returns_rule(description: str) -> RewriteRule | None:
    pattern = "replaced boolean return with false"
    if description.startswith(pattern):
        return _return_rule("FalseReturns", pattern, "false")
    return None


def _primitive_returns_rule(description: str) -> RewriteRule | None:
    for word in _PRIMITIVE_RETURN_WORDS:
        pattern = f"replaced {word} return with 0"
        if description.startswith(pattern):
            return _return_rule("PrimitiveReturns", pattern, "0")
    return None


def _empty_returns_rule(description: str) -> RewriteRule | None:
    marker = " return value with "
    if not description.startswith("replaced ") or marker not in description:
        return None
    value = description.split(marker, 1)[1]
    value = value.split(" for ", 1)[0].strip()
    if not value:
        return None
    replacement = f"{value}()" if value in _EMPTY_FACTORIES else value
    return _return_rule("EmptyReturns", "replaced ... return value with " + value, replacement)


def _void_call_rule(description: str) -> RewriteRule | None:
    prefix = "removed call to "
    if not description.startswith(prefix) or "::" not in description:
        return None
    callee = description[len(prefix):].split("::", 1)[1].split()[0].strip()
    if not callee:
        return None
    return RewriteRule(
        mutator="VoidMethodCall",
        description_pattern=prefix,
        candidate_kind=CandidateKind.CALL_STATEMENT,
        opcode_family=ops.INVOKE_OPS,
        callee=callee,
    )


def _switch_rule(description: str) -> RewriteRule:
    # The report never names the label; the rewrite is specialized against
    # the source once the switch block has been inspected.
    return RewriteRule(
        mutator="ExperimentalSwitch",
        description_pattern="",
        candidate_kind=CandidateKind.SWITCH_LABEL,
        opcode_family=ops.SWITCH_OPS,
    )


_BUILTIN_MATCHERS = {
    "Math": _math_rule,
    "ConditionalsBoundary": _boundary_rule,
    "RemoveConditionals": _remove_conditional_rule,
    "Increments": _increments_rule,
    "InvertNegatives": _invert_negatives_rule,
    "NullReturns": _null_returns_rule,
    "TrueReturns": _true_returns_rule,
    "FalseReturns": _false_returns_rule,
    "PrimitiveReturns": _primitive_returns_rule,
    "EmptyReturns": _empty_returns_rule,
    "VoidMethodCall": _void_call_rule,
    "ExperimentalSwitch": _switch_rule,
}


# --- extension rules ------------------------------------------------------------

_EXTENSION_KINDS_WITH_MAP = {
    CandidateKind.BINARY_OPERATOR,
    CandidateKind.RELATIONAL_OPERATOR,
    CandidateKind.INCR_DECR,
}


class RulesFileError(Exception):
    """Malformed line in an extension rules file."""


def _parse_extension_line(line: str, lineno: int) -> tuple[str, str, RewriteRule]:
    parts = [p.strip() for p in line.split("|")]
    if len(parts) not in (4, 5):
        raise RulesFileError(f"line {lineno}: expected 4 or 5 '|' fields")
    mutator_suffix, pattern, kind_name, replacement = parts[:4]
    mnemonics = parts[4] if len(parts) == 5 else ""
    try:
        kind = CandidateKind(kind_name)
    except ValueError:
        raise RulesFileError(f"line {lineno}: unknown candidate kind {kind_name!r}") from None
    family = frozenset(
        ops.OPCODES[name.strip()] for name in mnemonics.split(",") if name.strip()
    )
    token_map = None
    replacement_text = None
    if kind in _EXTENSION_KINDS_WITH_MAP:
        pairs = {}
        for pair in replacement.split(","):
            # spaces around the arrow keep '=' and '>' usable inside tokens
            if " => " not in pair:
                raise RulesFileError(f"line {lineno}: token map entries use 'from => to'")
            src, dst = pair.split(" => ", 1)
            pairs[src.strip()] = dst.strip()
        token_map = _freeze(pairs)
    elif kind in (CandidateKind.RETURN_STATEMENT, CandidateKind.CONDITION_EXPRESSION):
        replacement_text = replacement
    elif kind in (CandidateKind.UNARY_MINUS, CandidateKind.CALL_STATEMENT, CandidateKind.SWITCH_LABEL):
        pass  # replacement comes from the kind itself or from specialization
    short = operator_short_name(mutator_suffix)
    rule = RewriteRule(
        mutator=short,
        description_pattern=pattern,
        candidate_kind=kind,
        opcode_family=family,
        token_map=token_map,
        replacement_text=replacement_text,
    )
    return mutator_suffix, pattern, rule


class OperatorCatalog:
    """Immutable rule lookup; extension rules are checked after builtins."""

    def __init__(self, extensions: tuple[tuple[str, str, RewriteRule], ...] = ()):
        self._extensions = extensions

    @classmethod
    def with_rules_file(cls, path: str | Path) -> "OperatorCatalog":
        text = Path(path).read_text(encoding="utf-8")
        extensions = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            extensions.append(_parse_extension_line(line, lineno))
        return cls(tuple(extensions))

    def rule_for(self, mutator: str, description: str) -> RewriteRule:
        """The unique rule matching mutator and description.

        Raises ReconstructionError with UnknownMutator when no rule set
        exists for the mutator, UnrecognizedDescription when the mutator
        is known but the description matches nothing.
        """
        short = operator_short_name(mutator)
        matcher = _BUILTIN_MATCHERS.get(short)
        known = matcher is not None
        if matcher is not None:
            rule = matcher(description)
            if rule is not None:
                return rule
        simple = mutator.rsplit(".", 1)[-1]
        for suffix, pattern, rule in self._extensions:
            if (simple == suffix or simple.endswith(suffix) or short == operator_short_name(suffix)):
                known = True
                if description.startswith(pattern):
                    return rule
        if not known:
            raise ReconstructionError(FailureCode.UNKNOWN_MUTATOR, mutator)
        raise ReconstructionError(
            FailureCode.UNRECOGNIZED_DESCRIPTION, f"{mutator}: {description!r}"
        )


DEFAULT_CATALOG = OperatorCatalog()


def rule_for(mutator: str, description: str) -> RewriteRule:
    return DEFAULT_CATALOG.rule_for(mutator, description)
