"""Java source lexing and line-level structure recovery.

Provides the source half of mutant reconstruction: a full tokenizer
(comments included), method/constructor/initializer span detection by
brace matching over the token stream, Javadoc lookup, and location of
candidate operator tokens on a single source line. Deliberately not a
parser: no types, no symbol tables, no AST. Unicode escapes (\\uXXXX) in
source are taken literally, not pre-processed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .catalog import CandidateKind, CandidateOccurrence, RewriteRule
from .errors import FailureCode, ReconstructionError


class TokenKind(str, Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    OPERATOR = "operator"
    SEPARATOR = "separator"
    INT_LITERAL = "int_literal"
    FLOAT_LITERAL = "float_literal"
    STRING_LITERAL = "string_literal"
    CHAR_LITERAL = "char_literal"
    LINE_COMMENT = "line_comment"
    BLOCK_COMMENT = "block_comment"
    JAVADOC_COMMENT = "javadoc_comment"


_COMMENT_KINDS = frozenset(
    {TokenKind.LINE_COMMENT, TokenKind.BLOCK_COMMENT, TokenKind.JAVADOC_COMMENT}
)

_LITERAL_KINDS = frozenset(
    {
        TokenKind.INT_LITERAL,
        TokenKind.FLOAT_LITERAL,
        TokenKind.STRING_LITERAL,
        TokenKind.CHAR_LITERAL,
    }
)


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int  # 1-based
    column: int  # 1-based

    @property
    def end_column(self) -> int:
        return self.column + len(self.text)


class LexError(Exception):
    def __init__(self, line: int, column: int, reason: str):
        super().__init__(f"lex error at {line}:{column}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


class UnbalancedBraces(Exception):
    def __init__(self, line: int):
        super().__init__(f"unbalanced braces at line {line}")
        self.line = line


KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package
    private protected public return short static strictfp super switch
    synchronized this throw throws transient try void volatile while
    true false null
    """.split()
)

# Longest-match-first operator munch. '/' is dispatched before this table
# because of comments; '...' and '@' are separators.
_OPERATORS = (
    ">>>=",
    ">>>", "<<=", ">>=",
    "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "<<", ">>", "->", "::",
    "=", ">", "<", "!", "~", "?", ":",
    "+", "-", "*", "/", "%", "&", "|", "^",
)

_SEPARATOR_CHARS = "(){}[];,.@"

_HEX_DIGITS = set("0123456789abcdefABCDEF_")


def _advance(line: int, column: int, text: str) -> tuple[int, int]:
    """Position after consuming `text`, treating \\r\\n as one break."""
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            column = 1
            i += 1
        elif c == "\r":
            line += 1
            column = 1
            i += 2 if i + 1 < n and text[i + 1] == "\n" else 1
        else:
            column += 1
            i += 1
    return line, column


def _is_ident_start(c: str) -> bool:
    return c.isalpha() or c in "_$"


def _is_ident_part(c: str) -> bool:
    return c.isalnum() or c in "_$"


def lex(text: str, *, recover: bool = False) -> list[Token]:
    """Tokenize Java source text, comments included.

    With recover=True, unterminated literals and comments become tokens
    ending at the line or text end instead of raising; used when lexing
    one line in isolation.
    """
    tokens: list[Token] = []
    pos = 0
    line = 1
    column = 1
    n = len(text)

    def emit(kind: TokenKind, end: int) -> None:
        nonlocal pos, line, column
        tok_text = text[pos:end]
        tokens.append(Token(kind, tok_text, line, column))
        line, column = _advance(line, column, tok_text)
        pos = end

    def skip(end: int) -> None:
        nonlocal pos, line, column
        line, column = _advance(line, column, text[pos:end])
        pos = end

    while pos < n:
        c = text[pos]

        if c in " \t\f\r\n":
            end = pos
            while end < n and text[end] in " \t\f\r\n":
                end += 1
            skip(end)
            continue

        if c == "/" and pos + 1 < n and text[pos + 1] == "/":
            end = pos
            while end < n and text[end] not in "\r\n":
                end += 1
            emit(TokenKind.LINE_COMMENT, end)
            continue

        if c == "/" and pos + 1 < n and text[pos + 1] == "*":
            close = text.find("*/", pos + 2)
            if close < 0:
                if not recover:
                    raise LexError(line, column, "unterminated block comment")
                end = n
            else:
                end = close + 2
            chunk = text[pos:end]
            kind = (
                TokenKind.JAVADOC_COMMENT
                if chunk.startswith("/**") and len(chunk) >= 5
                else TokenKind.BLOCK_COMMENT
            )
            emit(kind, end)
            continue

        if c == '"':
            if text.startswith('"""', pos):
                # Text block; lexed as one string literal.
                i = pos + 3
                while i < n:
                    if text[i] == "\\":
                        i += 2
                        continue
                    if text.startswith('"""', i):
                        i += 3
                        break
                    i += 1
                else:
                    if not recover:
                        raise LexError(line, column, "unterminated text block")
                    i = n
                emit(TokenKind.STRING_LITERAL, min(i, n))
                continue
            i = pos + 1
            while i < n and text[i] not in "\r\n":
                if text[i] == "\\":
                    i += 2
                    continue
                if text[i] == '"':
                    i += 1
                    break
                i += 1
            else:
                if not recover:
                    raise LexError(line, column, "unterminated string literal")
                emit(TokenKind.STRING_LITERAL, min(i, n))
                continue
            if i > n or text[i - 1] != '"' or i - 1 == pos:
                if not recover:
                    raise LexError(line, column, "unterminated string literal")
                emit(TokenKind.STRING_LITERAL, min(i, n))
                continue
            emit(TokenKind.STRING_LITERAL, i)
            continue

        if c == "'":
            i = pos + 1
            closed = False
            while i < n and text[i] not in "\r\n":
                if text[i] == "\\":
                    i += 2
                    continue
                if text[i] == "'":
                    i += 1
                    closed = True
                    break
                i += 1
            if not closed:
                if not recover:
                    raise LexError(line, column, "unterminated char literal")
                emit(TokenKind.CHAR_LITERAL, min(i, n))
                continue
            emit(TokenKind.CHAR_LITERAL, i)
            continue

        if c.isdigit() or (c == "." and pos + 1 < n and text[pos + 1].isdigit()):
            end, kind = _scan_number(text, pos)
            emit(kind, end)
            continue

        if _is_ident_start(c):
            end = pos + 1
            while end < n and _is_ident_part(text[end]):
                end += 1
            word = text[pos:end]
            emit(TokenKind.KEYWORD if word in KEYWORDS else TokenKind.IDENTIFIER, end)
            continue

        if text.startswith("...", pos):
            emit(TokenKind.SEPARATOR, pos + 3)
            continue

        if c in _SEPARATOR_CHARS:
            emit(TokenKind.SEPARATOR, pos + 1)
            continue

        for op in _OPERATORS:
            if text.startswith(op, pos):
                emit(TokenKind.OPERATOR, pos + len(op))
                break
        else:
            raise LexError(line, column, f"illegal character {c!r}")

    return tokens


def _scan_number(text: str, pos: int) -> tuple[int, TokenKind]:
    n = len(text)
    i = pos
    is_float = False
    if text.startswith(("0x", "0X"), pos):
        i = pos + 2
        while i < n and text[i] in _HEX_DIGITS:
            i += 1
        if i < n and text[i] == ".":
            is_float = True
            i += 1
            while i < n and text[i] in _HEX_DIGITS:
                i += 1
        if i < n and text[i] in "pP":
            is_float = True
            i += 1
            if i < n and text[i] in "+-":
                i += 1
            while i < n and (text[i].isdigit() or text[i] == "_"):
                i += 1
    elif text.startswith(("0b", "0B"), pos):
        i = pos + 2
        while i < n and text[i] in "01_":
            i += 1
    else:
        while i < n and (text[i].isdigit() or text[i] == "_"):
            i += 1
        if i < n and text[i] == "." and (i + 1 < n and (text[i + 1].isdigit() or text[i + 1] in "fFdD")):
            is_float = True
            i += 1
            while i < n and (text[i].isdigit() or text[i] == "_"):
                i += 1
        if i < n and text[i] in "eE":
            j = i + 1
            if j < n and text[j] in "+-":
                j += 1
            if j < n and text[j].isdigit():
                is_float = True
                i = j
                while i < n and (text[i].isdigit() or text[i] == "_"):
                    i += 1
    if i < n and text[i] in "lL":
        i += 1
    elif i < n and text[i] in "fFdD":
        is_float = True
        i += 1
    return i, TokenKind.FLOAT_LITERAL if is_float else TokenKind.INT_LITERAL


@dataclass
class MethodSpan:
    """Line extent of one method, constructor, or initializer block."""

    owner_class: str
    method_name: str
    signature_line: int
    start_line: int
    end_line: int
    javadoc: str | None = None


@dataclass
class SourceUnit:
    """One source file, byte-reconstructible from lines plus endings."""

    path: str
    lines: list[str]
    endings: list[str]  # per-line terminator ("\n", "\r\n", "\r", or "")
    bom: bool
    tokens: list[Token]
    method_spans: list[MethodSpan] = field(default_factory=list)

    @classmethod
    def from_text(cls, text: str, path: str = "<memory>", bom: bool = False) -> "SourceUnit":
        lines, endings = _split_lines(text)
        tokens = lex(text)
        unit = cls(path=path, lines=lines, endings=endings, bom=bom, tokens=tokens)
        unit.method_spans = scan_method_spans(unit)
        for span in unit.method_spans:
            span.javadoc = extract_javadoc(unit, span.start_line)
        return unit

    @classmethod
    def from_bytes(cls, data: bytes, path: str = "<memory>") -> "SourceUnit":
        bom = data.startswith(b"\xef\xbb\xbf")
        if bom:
            data = data[3:]
        return cls.from_text(data.decode("utf-8"), path=path, bom=bom)

    def line(self, line_no: int) -> str:
        return self.lines[line_no - 1]

    def render(self, replace: dict[int, str] | None = None) -> str:
        replace = replace or {}
        parts = []
        for i, (text, ending) in enumerate(zip(self.lines, self.endings), start=1):
            parts.append(replace.get(i, text))
            parts.append(ending)
        return "".join(parts)

    def render_bytes(self, replace: dict[int, str] | None = None) -> bytes:
        data = self.render(replace).encode("utf-8")
        return (b"\xef\xbb\xbf" + data) if self.bom else data


def _split_lines(text: str) -> tuple[list[str], list[str]]:
    lines: list[str] = []
    endings: list[str] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            lines.append(text[start:i])
            endings.append("\n")
            i += 1
            start = i
        elif c == "\r":
            if i + 1 < n and text[i + 1] == "\n":
                lines.append(text[start:i])
                endings.append("\r\n")
                i += 2
            else:
                lines.append(text[start:i])
                endings.append("\r")
                i += 1
            start = i
        else:
            i += 1
    if start < n:
        lines.append(text[start:])
        endings.append("")
    return lines, endings


# --- method span scanning ---------------------------------------------------

_TYPE_KEYWORDS = frozenset({"class", "interface", "enum"})


@dataclass
class _Ctx:
    kind: str  # "type" | "method" | "block"
    name: str = ""
    is_enum: bool = False
    in_constants: bool = False
    method_name: str = ""
    owner: str = ""
    signature_line: int = 0
    start_line: int = 0


def _strip_annotations(buf: list[Token]) -> list[Token]:
    out: list[Token] = []
    i = 0
    while i < len(buf):
        t = buf[i]
        if t.kind is TokenKind.SEPARATOR and t.text == "@":
            if i + 1 < len(buf) and buf[i + 1].text == "interface":
                i += 1  # @interface declaration: keep the keyword visible
                continue
            j = i + 1
            while (
                j + 1 < len(buf)
                and buf[j].kind is TokenKind.IDENTIFIER
                and buf[j + 1].text == "."
            ):
                j += 2
            if j < len(buf) and buf[j].kind is TokenKind.IDENTIFIER:
                j += 1
            if j < len(buf) and buf[j].text == "(":
                depth = 1
                j += 1
                while j < len(buf) and depth:
                    if buf[j].text == "(":
                        depth += 1
                    elif buf[j].text == ")":
                        depth -= 1
                    j += 1
            i = j
        else:
            out.append(t)
            i += 1
    return out


def _find_type_decl(decl: list[Token]) -> tuple[Token, Token] | None:
    """(keyword token, name token) when decl declares a named type."""
    depth = 0
    for i, t in enumerate(decl):
        if t.text == "(":
            depth += 1
        elif t.text == ")":
            depth -= 1
        elif depth == 0:
            is_type_kw = t.kind is TokenKind.KEYWORD and t.text in _TYPE_KEYWORDS
            is_record = (
                t.kind is TokenKind.IDENTIFIER
                and t.text == "record"
                and i + 1 < len(decl)
                and decl[i + 1].kind is TokenKind.IDENTIFIER
            )
            if is_type_kw or is_record:
                for name_tok in decl[i + 1 :]:
                    if name_tok.kind is TokenKind.IDENTIFIER:
                        return t, name_tok
                return None
    return None


def _method_name_token(decl: list[Token]) -> Token | None:
    depth = 0
    prev: Token | None = None
    for t in decl:
        if t.text == "(":
            if depth == 0:
                return prev if prev is not None and prev.kind is TokenKind.IDENTIFIER else None
            depth += 1
        elif t.text == ")":
            depth -= 1
        prev = t
    return None


def _has_assignment_before_params(decl: list[Token]) -> bool:
    depth = 0
    for t in decl:
        if t.text == "(":
            if depth == 0:
                return False
            depth += 1
        elif t.text == ")":
            depth -= 1
        elif depth == 0 and t.kind is TokenKind.OPERATOR and t.text == "=":
            return True
    return False


def scan_method_spans(unit: SourceUnit) -> list[MethodSpan]:
    """Brace-balanced line spans of methods, constructors and initializers.

    Lambda bodies and anonymous-class bodies do not open spans of their
    own; nested and local named classes do.
    """
    code = [t for t in unit.tokens if t.kind not in _COMMENT_KINDS]
    spans: list[MethodSpan] = []
    stack: list[_Ctx] = []
    buf: list[Token] = []
    paren_depth = 0
    last_line = 1

    def owner_name() -> str:
        return ".".join(c.name for c in stack if c.kind == "type")

    for tok in code:
        last_line = tok.line
        if tok.text == "(" and tok.kind is TokenKind.SEPARATOR:
            paren_depth += 1
            buf.append(tok)
            continue
        if tok.text == ")" and tok.kind is TokenKind.SEPARATOR:
            paren_depth = max(0, paren_depth - 1)
            buf.append(tok)
            continue
        if paren_depth > 0:
            buf.append(tok)
            continue

        if tok.text == "{" and tok.kind is TokenKind.SEPARATOR:
            stack.append(_classify_brace(buf, tok, stack, owner_name()))
            buf = []
            continue
        if tok.text == "}" and tok.kind is TokenKind.SEPARATOR:
            if not stack:
                raise UnbalancedBraces(tok.line)
            ctx = stack.pop()
            if ctx.kind == "method":
                spans.append(
                    MethodSpan(
                        owner_class=ctx.owner,
                        method_name=ctx.method_name,
                        signature_line=ctx.signature_line,
                        start_line=ctx.start_line,
                        end_line=tok.line,
                    )
                )
            buf = []
            continue
        if tok.text == ";" and tok.kind is TokenKind.SEPARATOR:
            if stack and stack[-1].kind == "type" and stack[-1].in_constants:
                stack[-1].in_constants = False
            buf = []
            continue
        buf.append(tok)

    if stack:
        raise UnbalancedBraces(last_line)

    spans.sort(key=lambda s: (s.start_line, -s.end_line))
    return spans


def _classify_brace(buf: list[Token], brace: Token, stack: list[_Ctx], owner: str) -> _Ctx:
    decl = _strip_annotations(buf)
    level = stack[-1].kind if stack else "file"

    type_decl = _find_type_decl(decl)
    if type_decl is not None:
        kw, name = type_decl
        return _Ctx(kind="type", name=name.text, is_enum=(kw.text == "enum"), in_constants=(kw.text == "enum"))

    if level == "type":
        ctx = stack[-1]
        if ctx.is_enum and ctx.in_constants:
            return _Ctx(kind="block")  # enum constant body
        if not decl:
            return _Ctx(
                kind="method",
                method_name="<initializer>",
                owner=owner,
                signature_line=brace.line,
                start_line=brace.line,
            )
        if len(decl) == 1 and decl[0].text == "static":
            return _Ctx(
                kind="method",
                method_name="<clinit>",
                owner=owner,
                signature_line=decl[0].line,
                start_line=decl[0].line,
            )
        if _has_assignment_before_params(decl):
            return _Ctx(kind="block")  # field initializer, lambda, array init
        name_tok = _method_name_token(decl)
        if name_tok is not None:
            method_name = "<init>" if name_tok.text == ctx.name else name_tok.text
            return _Ctx(
                kind="method",
                method_name=method_name,
                owner=owner,
                signature_line=name_tok.line,
                start_line=decl[0].line,
            )
    return _Ctx(kind="block")


def enclosing_span(spans: list[MethodSpan], line: int) -> MethodSpan | None:
    """Innermost span containing `line`, or None outside any method."""
    best: MethodSpan | None = None
    for span in spans:
        if span.start_line <= line <= span.end_line:
            if best is None or (span.end_line - span.start_line) < (best.end_line - best.start_line):
                best = span
    return best


def extract_javadoc(unit: SourceUnit, method_start_line: int) -> str | None:
    """Verbatim `/** ... */` block immediately above a method start.

    Annotations (with possibly multi-line argument lists) between the
    Javadoc and the method are skipped; any other intervening construct,
    including ordinary comments, means there is no Javadoc.
    """
    tokens = unit.tokens
    anchor = None
    for idx, tok in enumerate(tokens):
        if tok.kind in _COMMENT_KINDS:
            continue
        if tok.line >= method_start_line:
            anchor = idx
            break
    if anchor is None or anchor == 0:
        return None

    i = anchor - 1
    while i >= 0:
        tok = tokens[i]
        if tok.kind is TokenKind.JAVADOC_COMMENT:
            return tok.text
        if tok.kind in _COMMENT_KINDS:
            return None
        if tok.text == ")":
            depth = 1
            i -= 1
            while i >= 0 and depth:
                if tokens[i].text == ")":
                    depth += 1
                elif tokens[i].text == "(":
                    depth -= 1
                i -= 1
            # fall through to the qualified-name walk below
        if i < 0:
            return None
        tok = tokens[i]
        if tok.kind is TokenKind.IDENTIFIER:
            while i >= 2 and tokens[i - 1].text == "." and tokens[i - 2].kind is TokenKind.IDENTIFIER:
                i -= 2
            if i >= 1 and tokens[i - 1].text == "@":
                i -= 2
                continue
            return None
        return None
    return None


# --- candidate location ------------------------------------------------------

_BINARY_PREV_SEPARATORS = {")", "]"}


def _code_tokens(tokens: list[Token]) -> list[Token]:
    return [t for t in tokens if t.kind not in _COMMENT_KINDS]


def _prev_code(tokens: list[Token], i: int) -> Token | None:
    return tokens[i - 1] if i > 0 else None


def _is_value_end(tok: Token | None) -> bool:
    if tok is None:
        return False
    if tok.kind is TokenKind.IDENTIFIER or tok.kind in _LITERAL_KINDS:
        return True
    if tok.kind is TokenKind.KEYWORD and tok.text in ("this", "true", "false", "null"):
        return True
    return tok.kind is TokenKind.SEPARATOR and tok.text in _BINARY_PREV_SEPARATORS


def _generic_marks(tokens: list[Token]) -> set[int]:
    """Indexes of '<'/'>' tokens that read as type-argument brackets."""
    marks: set[int] = set()
    n = len(tokens)
    for i, tok in enumerate(tokens):
        if not (tok.kind is TokenKind.OPERATOR and tok.text == "<"):
            continue
        depth = 1
        j = i + 1
        ok = False
        while j < n:
            t = tokens[j]
            text = t.text
            if text == "<" and t.kind is TokenKind.OPERATOR:
                depth += 1
            elif text in (">", ">>", ">>>") and t.kind is TokenKind.OPERATOR:
                depth -= len(text)
                if depth <= 0:
                    ok = depth == 0
                    break
            elif t.kind is TokenKind.IDENTIFIER:
                pass
            elif t.kind is TokenKind.KEYWORD and t.text in (
                "boolean", "byte", "short", "char", "int", "long", "float",
                "double", "extends", "super",
            ):
                pass
            elif t.kind is TokenKind.OPERATOR and text == "?":
                pass
            elif t.kind is TokenKind.SEPARATOR and text in (",", ".", "[", "]"):
                pass
            elif t.kind is TokenKind.OPERATOR and text == "&":
                pass
            else:
                break
            j += 1
        if ok:
            # the whole span is bracket structure: nested '<' that a '>>'
            # closes in one token, wildcards, and the closers themselves
            marks.update(
                k
                for k in range(i, j + 1)
                if tokens[k].kind is TokenKind.OPERATOR
                and tokens[k].text in ("<", ">", ">>", ">>>", "?")
            )
    return marks


def find_candidates(line_text: str, rule: RewriteRule, line_no: int = 1) -> list[CandidateOccurrence]:
    """All non-overlapping token-level matches of the rule on one line.

    Matches inside comments and string/char literals never appear because
    the line is lexed first. Returned occurrences are ordered left to
    right and carry their ordinal.
    """
    try:
        tokens = _code_tokens(lex(line_text, recover=True))
    except LexError:
        return []

    kind = rule.candidate_kind
    ranges: list[tuple[int, int]] = []

    if kind in (CandidateKind.BINARY_OPERATOR, CandidateKind.INCR_DECR):
        wanted = set(rule.token_map or {})
        for i, tok in enumerate(tokens):
            if tok.kind is not TokenKind.OPERATOR or tok.text not in wanted:
                continue
            if tok.text in ("+", "-") and not _is_value_end(_prev_code(tokens, i)):
                continue
            ranges.append((tok.column, tok.end_column))

    elif kind is CandidateKind.RELATIONAL_OPERATOR:
        wanted = set(rule.token_map or {})
        marks = _generic_marks(tokens)
        for i, tok in enumerate(tokens):
            if tok.kind is not TokenKind.OPERATOR or tok.text not in wanted:
                continue
            if tok.text in ("<", ">"):
                if i in marks or not _is_value_end(_prev_code(tokens, i)):
                    continue
            ranges.append((tok.column, tok.end_column))

    elif kind is CandidateKind.UNARY_MINUS:
        for i, tok in enumerate(tokens):
            if tok.kind is not TokenKind.OPERATOR or tok.text != "-":
                continue
            prev = _prev_code(tokens, i)
            if prev is not None and _is_value_end(prev):
                continue
            if prev is not None and prev.kind not in (
                TokenKind.OPERATOR,
                TokenKind.SEPARATOR,
                TokenKind.KEYWORD,
            ):
                continue
            ranges.append((tok.column, tok.end_column))

    elif kind is CandidateKind.RETURN_STATEMENT:
        for i, tok in enumerate(tokens):
            if not (tok.kind is TokenKind.KEYWORD and tok.text == "return"):
                continue
            semi = _find_statement_end(tokens, i + 1)
            if semi is None or semi == i + 1:
                continue
            ranges.append((tokens[i + 1].column, tokens[semi].column))

    elif kind is CandidateKind.CALL_STATEMENT:
        ranges.extend(_call_statement_ranges(tokens, rule.callee or ""))

    elif kind is CandidateKind.CONDITION_EXPRESSION:
        ranges.extend(_condition_ranges(tokens))

    elif kind is CandidateKind.SWITCH_LABEL:
        ranges.extend(_label_ranges(tokens))

    ranges.sort()
    out: list[CandidateOccurrence] = []
    last_end = 0
    for start, end in ranges:
        if start < last_end:
            continue  # keep candidates disjoint, leftmost wins
        out.append(
            CandidateOccurrence(line=line_no, column_start=start, column_end=end, ordinal=len(out))
        )
        last_end = end
    return out


def _find_statement_end(tokens: list[Token], start: int) -> int | None:
    """Index of the ';' closing the statement begun at `start`, if on line."""
    depth = 0
    for j in range(start, len(tokens)):
        text = tokens[j].text
        if tokens[j].kind is TokenKind.SEPARATOR:
            if text in "([{":
                depth += 1
            elif text in ")]}":
                depth -= 1
            elif text == ";" and depth <= 0:
                return j
    return None


def _call_statement_ranges(tokens: list[Token], callee: str) -> list[tuple[int, int]]:
    ranges: list[tuple[int, int]] = []
    for i, tok in enumerate(tokens):
        if tok.kind is not TokenKind.IDENTIFIER or tok.text != callee:
            continue
        if i + 1 >= len(tokens) or tokens[i + 1].text != "(":
            continue
        start = _chain_start(tokens, i)
        prev = _prev_code(tokens, start)
        if prev is not None and prev.text not in (";", "{", "}", ":", ")", "else", "do", "->"):
            continue
        semi = _find_statement_end(tokens, i + 1)
        if semi is None:
            continue
        ranges.append((tokens[start].column, tokens[semi].end_column))
    return ranges


def _is_receiver_name(tok: Token) -> bool:
    return tok.kind is TokenKind.IDENTIFIER or (
        tok.kind is TokenKind.KEYWORD and tok.text in ("this", "super")
    )


def _chain_start(tokens: list[Token], i: int) -> int:
    """Walk back from a callee name over `a.b().c` style receiver chains."""
    start = i
    j = i - 1
    while j >= 0 and tokens[j].text == ".":
        j -= 1
        if j < 0:
            break
        if tokens[j].text == ")":
            depth = 1
            j -= 1
            while j >= 0 and depth:
                if tokens[j].text == ")":
                    depth += 1
                elif tokens[j].text == "(":
                    depth -= 1
                j -= 1
            start = j + 1  # the '(' of the preceding call or group
            if j >= 0 and _is_receiver_name(tokens[j]):
                start = j
                j -= 1
            else:
                break  # parenthesized receiver; chain starts at its '('
        elif _is_receiver_name(tokens[j]):
            start = j
            j -= 1
        else:
            break
    return start


_CONDITION_STOP_TEXTS = frozenset(
    {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
     ",", ";", ":", "?", "{", "}"}
)


def _condition_ranges(tokens: list[Token]) -> list[tuple[int, int]]:
    ranges: list[tuple[int, int]] = []
    marks = _generic_marks(tokens)
    n = len(tokens)

    for i, tok in enumerate(tokens):
        if tok.kind is TokenKind.KEYWORD and tok.text in ("if", "while") and i + 1 < n and tokens[i + 1].text == "(":
            close = _matching_paren(tokens, i + 1)
            if close is not None and close > i + 2:
                ranges.append((tokens[i + 2].column, tokens[close].column))
        elif tok.kind is TokenKind.KEYWORD and tok.text == "for" and i + 1 < n and tokens[i + 1].text == "(":
            close = _matching_paren(tokens, i + 1)
            if close is None:
                continue
            semis = [
                j
                for j in range(i + 2, close)
                if tokens[j].text == ";" and _paren_depth_between(tokens, i + 1, j) == 1
            ]
            if len(semis) >= 2 and semis[1] > semis[0] + 1:
                first = tokens[semis[0] + 1]
                last = tokens[semis[1] - 1]
                ranges.append((first.column, last.end_column))
        elif tok.kind is TokenKind.OPERATOR and tok.text == "?" and i not in marks:
            start = _ternary_condition_start(tokens, i)
            if start is not None and start < i:
                ranges.append((tokens[start].column, tokens[i - 1].end_column))

    # Drop spans nested inside another candidate span: the enclosing
    # condition is the rewrite target and candidates must stay disjoint.
    ranges.sort(key=lambda r: (r[0], -r[1]))
    kept: list[tuple[int, int]] = []
    for start, end in ranges:
        if kept and start >= kept[-1][0] and end <= kept[-1][1]:
            continue
        kept.append((start, end))
    return kept


def _matching_paren(tokens: list[Token], open_index: int) -> int | None:
    depth = 0
    for j in range(open_index, len(tokens)):
        if tokens[j].text == "(":
            depth += 1
        elif tokens[j].text == ")":
            depth -= 1
            if depth == 0:
                return j
    return None


def _paren_depth_between(tokens: list[Token], open_index: int, at: int) -> int:
    depth = 0
    for j in range(open_index, at):
        if tokens[j].text == "(":
            depth += 1
        elif tokens[j].text == ")":
            depth -= 1
    return depth


def _ternary_condition_start(tokens: list[Token], q: int) -> int | None:
    depth = 0
    j = q - 1
    start = None
    while j >= 0:
        t = tokens[j]
        text = t.text
        if text in ")]":
            depth += 1
        elif text in "([":
            if depth == 0:
                break
            depth -= 1
        elif depth == 0:
            if text in _CONDITION_STOP_TEXTS:
                break
            if t.kind is TokenKind.KEYWORD and text in ("return", "case", "else", "do"):
                break
        start = j
        j -= 1
    return start


def _label_ranges(tokens: list[Token]) -> list[tuple[int, int]]:
    ranges: list[tuple[int, int]] = []
    for i, tok in enumerate(tokens):
        if tok.kind is TokenKind.KEYWORD and tok.text in ("case", "default"):
            for j in range(i + 1, len(tokens)):
                if tokens[j].kind is TokenKind.OPERATOR and tokens[j].text == ":":
                    ranges.append((tok.column, tokens[j].end_column))
                    break
                if tokens[j].text in ("{", "}", ";", "->"):
                    break
    return ranges


def classify_no_candidate(line_text: str, rule: RewriteRule) -> FailureCode:
    """Failure code for an empty candidate list on the reported line.

    A construct that starts on the line but does not finish there is a
    multi-line expression; a line with no trace of the construct at all
    is a plain source-position mismatch.
    """
    try:
        tokens = _code_tokens(lex(line_text, recover=True))
    except LexError:
        return FailureCode.NO_CANDIDATE_ON_LINE

    kind = rule.candidate_kind
    if kind is CandidateKind.RETURN_STATEMENT:
        if any(t.kind is TokenKind.KEYWORD and t.text == "return" for t in tokens):
            return FailureCode.MULTI_LINE_EXPRESSION
    elif kind is CandidateKind.CALL_STATEMENT:
        callee = rule.callee or ""
        if any(t.kind is TokenKind.IDENTIFIER and t.text == callee for t in tokens):
            return FailureCode.MULTI_LINE_EXPRESSION
    elif kind is CandidateKind.CONDITION_EXPRESSION:
        if any(t.kind is TokenKind.KEYWORD and t.text in ("if", "while", "for") for t in tokens):
            return FailureCode.MULTI_LINE_EXPRESSION
        marks = _generic_marks(tokens)
        if any(
            t.kind is TokenKind.OPERATOR and t.text == "?" and i not in marks
            for i, t in enumerate(tokens)
        ):
            return FailureCode.MULTI_LINE_EXPRESSION
    return FailureCode.NO_CANDIDATE_ON_LINE


# --- switch label rewriting ---------------------------------------------------


def switch_label_rewrite(unit: SourceUnit, line_no: int) -> tuple[CandidateOccurrence, str]:
    """Locate the switch label on `line_no` and its one-line replacement.

    A `case K:` label becomes `default:`; a `default:` label becomes the
    block's first `case K:` label text. Valid only when the enclosing
    switch block carries both label kinds and the label (keyword through
    colon) is local to the reported line. Everything else raises an
    UnsupportedSwitchShape reconstruction error.
    """

    def unsupported(detail: str) -> ReconstructionError:
        return ReconstructionError(FailureCode.UNSUPPORTED_SWITCH_SHAPE, detail)

    code = _code_tokens(unit.tokens)
    for s_idx, tok in enumerate(code):
        if not (tok.kind is TokenKind.KEYWORD and tok.text == "switch"):
            continue
        if s_idx + 1 >= len(code) or code[s_idx + 1].text != "(":
            continue
        close = _matching_paren(code, s_idx + 1)
        if close is None or close + 1 >= len(code) or code[close + 1].text != "{":
            continue
        body_start = close + 1
        depth = 0
        body_end = None
        labels: list[tuple[str, Token, Token | None]] = []
        for j in range(body_start, len(code)):
            text = code[j].text
            if text == "{":
                depth += 1
            elif text == "}":
                depth -= 1
                if depth == 0:
                    body_end = j
                    break
            elif depth == 1 and code[j].kind is TokenKind.KEYWORD and text in ("case", "default"):
                colon = None
                for k in range(j + 1, len(code)):
                    if code[k].kind is TokenKind.OPERATOR and code[k].text == ":":
                        colon = code[k]
                        break
                    if code[k].text in ("{", "}", ";", "->"):
                        break
                labels.append((text, code[j], colon))
        if body_end is None:
            continue
        on_line = [lbl for lbl in labels if lbl[1].line == line_no]
        if not on_line:
            continue

        kind, label_tok, colon = on_line[0]
        if colon is None or colon.line != line_no:
            raise unsupported("switch label is not line-local")
        has_case = any(k == "case" for k, _, _ in labels)
        has_default = any(k == "default" for k, _, _ in labels)
        if not (has_case and has_default):
            raise unsupported("switch block lacks a case/default pair")
        occurrence = CandidateOccurrence(
            line=line_no,
            column_start=label_tok.column,
            column_end=colon.end_column,
            ordinal=0,
        )
        if kind == "case":
            return occurrence, "default:"
        first_case = next((lbl for lbl in labels if lbl[0] == "case"), None)
        if first_case is None or first_case[2] is None or first_case[2].line != first_case[1].line:
            raise unsupported("no line-local case label to swap with default")
        case_tok, case_colon = first_case[1], first_case[2]
        replacement = unit.line(case_tok.line)[case_tok.column - 1 : case_colon.end_column - 1]
        return occurrence, replacement

    raise unsupported(f"no switch label found on line {line_no}")
