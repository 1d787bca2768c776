"""Fact extraction from C++ sources and the two source-level smell checks.

Extraction is lexical: comments and literals are blanked out (keeping every
offset and newline in place), then creations, member assignments and loop
bodies are located with patterns and brace matching.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field
from enum import Enum

from .ini import decode_text
from .rules import Category, Finding, Severity


class Mechanism(str, Enum):
    CREATE_DEFAULT_SUBOBJECT = "CreateDefaultSubobject"
    NEW_OBJECT = "NewObject"
    SPAWN_ACTOR = "SpawnActor"


@dataclass(frozen=True)
class CreationEvent:
    variable: str
    created_type: str
    mechanism: Mechanism
    line: int


@dataclass(frozen=True)
class AssignmentEvent:
    receiver: str
    member: str
    value: str
    line: int


@dataclass(frozen=True)
class SourceModel:
    path: str
    creations: tuple[CreationEvent, ...] = ()
    assignments: tuple[AssignmentEvent, ...] = ()
    loop_regions: tuple[tuple[int, int], ...] = ()
    type_mentions: frozenset[str] = frozenset()
    includes: tuple[str, ...] = ()
    diagnostics: tuple[tuple[int, str], ...] = field(default=(), compare=False)

    def in_loop(self, line: int) -> bool:
        return any(start <= line <= end for start, end in self.loop_regions)


def neutralize(text: str) -> str:
    """Blank out comments and the bodies of string/char literals.

    Delimiters of literals stay so the token shape survives; comment text and
    literal contents become spaces. Newlines are never removed, so offsets and
    line numbers match the input exactly.
    """
    out = list(text)
    n = len(text)
    i = 0

    def blank(start: int, end: int):
        for k in range(start, min(end, n)):
            if out[k] != "\n":
                out[k] = " "

    while i < n:
        c = text[i]
        if c == "/" and i + 1 < n and text[i + 1] == "/":
            end = i
            # A backslash-newline continues a line comment.
            while end < n and text[end] != "\n":
                end += 2 if text[end] == "\\" and end + 1 < n else 1
            blank(i, end)
            i = end
        elif c == "/" and i + 1 < n and text[i + 1] == "*":
            end = text.find("*/", i + 2)
            end = n if end < 0 else end + 2
            blank(i, end)
            i = end
        elif c == '"':
            raw = re.match(r'R"([^ ()\\\t\n]{0,16})\(', text[i - 1:i + 20]) if i and text[i - 1] == "R" else None
            if raw is not None:
                closing = ")" + raw.group(1) + '"'
                body_start = i + len(raw.group(0)) - 1
                end = text.find(closing, body_start)
                end = n if end < 0 else end + len(closing)
                blank(i + 1, end - 1)
                i = end
                continue
            i = _skip_quoted(text, i, '"', blank)
        elif c == "'":
            if _is_digit_separator(text, i):
                i += 1
                continue
            i = _skip_quoted(text, i, "'", blank)
        else:
            i += 1
    return "".join(out)


def _ident_char(c: str) -> bool:
    return c.isalnum() or c == "_"


def _is_digit_separator(text: str, i: int) -> bool:
    """True for the quote in ``1'000``; False for ``'x'``, ``u'x'``, ``u8'x'``."""
    before = text[max(0, i - 3):i]
    for prefix in ("u8", "u", "U", "L"):
        if before.endswith(prefix):
            lead = before[:-len(prefix)]
            if not lead or not _ident_char(lead[-1]):
                return False
    return bool(before) and _ident_char(before[-1])


def _skip_quoted(text: str, start: int, quote: str, blank) -> int:
    """Blank a literal's body; an unterminated literal stops at end of line."""
    n = len(text)
    i = start + 1
    while i < n:
        c = text[i]
        if c == "\\":
            i += 2
            continue
        if c == quote:
            blank(start + 1, i)
            return i + 1
        if c == "\n":
            break
        i += 1
    blank(start + 1, i)
    return i


_IDENT = r"[A-Za-z_]\w*"
_TEMPLATE_ARG = r"<(?P<type>[^<>;{}]*(?:<[^<>;{}]*>[^<>;{}]*)*)>"
_CREATION = re.compile(
    r"\b(?P<mech>CreateDefaultSubobject|NewObject|SpawnActor)\s*(?:" + _TEMPLATE_ARG + r")?\s*\("
)
# Matched against the text just before a creation call.
_ASSIGN_TARGET = re.compile(
    r"(?:\bthis\s*->\s*)?\b(?P<var>" + _IDENT + r")\s*=\s*"
    r"(?:(?:::)?" + _IDENT + r"(?:\s*\(\s*\))?\s*(?:->|\.|::)\s*)*$"
)
_MEMBER_ASSIGN = re.compile(
    r"\b(?P<recv>" + _IDENT + r")\s*(?:->|\.)\s*(?P<member>" + _IDENT + r")\s*=(?!=)\s*(?P<value>[^;{}]*?)\s*;"
)
_LOOP_KEYWORD = re.compile(r"\b(?P<kw>for|while|do)\b")
_TEMPLATE_TYPES = re.compile(r"<\s*(?:const\s+)?(?P<name>" + _IDENT + r")")
_DECLARED_TYPES = re.compile(r"\b(?P<name>" + _IDENT + r")\s*(?:[*&]+\s*|\s)\s*" + _IDENT + r"\s*[;=,()\[{]")
_QUALIFIED_TYPES = re.compile(r"\b(?P<name>" + _IDENT + r")\s*::")
_INCLUDE = re.compile(r'^[ \t]*#[ \t]*include[ \t]*"(?P<path>[^"\n]+)"', re.MULTILINE)

_CLOSERS = {"(": ")", "{": "}", "[": "]"}


class _Lines:
    def __init__(self, text: str):
        self.starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def __call__(self, offset: int) -> int:
        return bisect.bisect_right(self.starts, offset)

    @property
    def count(self) -> int:
        return len(self.starts)


def _match_bracket(code: str, open_at: int) -> int:
    """Offset of the bracket closing the one at ``open_at``, or -1."""
    want = _CLOSERS[code[open_at]]
    opener = code[open_at]
    depth = 0
    for i in range(open_at, len(code)):
        c = code[i]
        if c == opener:
            depth += 1
        elif c == want:
            depth -= 1
            if depth == 0:
                return i
    return -1


def _skip_ws(code: str, i: int) -> int:
    while i < len(code) and code[i].isspace():
        i += 1
    return i


def _statement_end(code: str, i: int) -> int:
    """End offset of the statement starting at ``i`` (braces, ``;`` or EOF)."""
    n = len(code)
    depth = 0
    while i < n:
        c = code[i]
        if c in "([":
            depth += 1
        elif c in ")]":
            depth -= 1
        elif c == ";" and depth <= 0:
            return i
        elif c == "{" and depth <= 0:
            close = _match_bracket(code, i)
            if close < 0:
                return n - 1
            after = _skip_ws(code, close + 1)
            if code.startswith("else", after) and not code[after + 4:after + 5].isalnum():
                i = after + 4
                continue
            return close
        i += 1
    return n - 1


def _loop_regions(code: str, line_of: _Lines, diagnostics: list) -> list[tuple[int, int]]:
    regions = []
    for m in _LOOP_KEYWORD.finditer(code):
        start_line = line_of(m.start())
        if m.group("kw") == "do":
            body = _skip_ws(code, m.end())
        else:
            paren = _skip_ws(code, m.end())
            if paren >= len(code) or code[paren] != "(":
                continue
            close = _match_bracket(code, paren)
            if close < 0:
                diagnostics.append((start_line, f"unbalanced parentheses after '{m.group('kw')}'"))
                continue
            body = _skip_ws(code, close + 1)
        if body >= len(code) or code[body] == ";":
            continue  # empty body, or the tail of a do-while
        if code[body] == "{":
            close = _match_bracket(code, body)
            if close < 0:
                diagnostics.append((start_line, "unbalanced braces; loop body runs to end of file"))
                regions.append((start_line, line_of.count))
                continue
            regions.append((start_line, line_of(close)))
        else:
            regions.append((start_line, line_of(_statement_end(code, body))))
    return regions


def _normalize_value(value: str) -> str:
    value = " ".join(value.split())
    return value.lower() if value.lower() in ("true", "false") else value


def build_source_model(text: bytes | str, path: str = "") -> SourceModel:
    text = decode_text(text)
    code = neutralize(text)
    line_of = _Lines(code)
    diagnostics: list[tuple[int, str]] = []

    creations = []
    for m in _CREATION.finditer(code):
        target = _ASSIGN_TARGET.search(code, max(0, m.start() - 256), m.start())
        created_type = "".join((m.group("type") or "").split())
        mech = Mechanism(m.group("mech"))
        if not created_type and mech is not Mechanism.SPAWN_ACTOR:
            continue  # a declaration or an untemplated helper with the same name
        creations.append(CreationEvent(
            variable=target.group("var") if target else "",
            created_type=created_type,
            mechanism=mech,
            line=line_of(m.start()),
        ))

    assignments = [
        AssignmentEvent(m.group("recv"), m.group("member"), _normalize_value(m.group("value")),
                        line_of(m.start("member")))
        for m in _MEMBER_ASSIGN.finditer(code)
    ]

    mentions = set()
    for pattern in (_TEMPLATE_TYPES, _DECLARED_TYPES, _QUALIFIED_TYPES):
        mentions.update(m.group("name") for m in pattern.finditer(code))
    for c in creations:
        mentions.update(re.findall(_IDENT, c.created_type))

    # Include paths live inside string literals, so read them from the raw
    # text but only where the directive itself survived neutralization.
    includes = tuple(
        m.group("path") for m in _INCLUDE.finditer(text)
        if code[m.start():m.start("path")] == text[m.start():m.start("path")]
    )

    return SourceModel(
        path=path,
        creations=tuple(creations),
        assignments=tuple(assignments),
        loop_regions=tuple(_loop_regions(code, line_of, diagnostics)),
        type_mentions=frozenset(mentions),
        includes=includes,
        diagnostics=tuple(diagnostics),
    )


MOTION_CONTROLLER_TYPE = "UMotionControllerComponent"
LOW_LATENCY_MEMBER = "bDisableLowLatencyUpdate"
STATIC_MESH_TYPE = "UStaticMeshComponent"
INSTANCED_MESH_TYPES = frozenset({
    "UInstancedStaticMeshComponent",
    "UHierarchicalInstancedStaticMeshComponent",
})

MOTION_CONTROLLER_RULE = ("UEP-C01", "Motion Controller Code Smell",
                          "Not setting bDisableLowLatencyUpdate to false can cause performance issues.")
STATIC_MESH_RULE = ("UEP-C02", "Instanced Static Mesh Code Smell",
                    "Use UInstancedStaticMeshComponent to draw repeated identical meshes in a single draw call.")


def _finding(rule: tuple[str, str, str], category: Category, path: str, line: int) -> Finding:
    rule_id, name, suggestion = rule
    return Finding(path, rule_id, line, name, category.value, suggestion, Severity.WARNING.value)


def detect_motion_controller_smell(model: SourceModel) -> list[Finding]:
    """Motion controllers created without low-latency updates switched off.

    An assignment ``var->bDisableLowLatencyUpdate = true`` clears the most
    recent creation of ``var`` at or before its line.
    """
    fixed_lines = set()
    by_var: dict[str, list[CreationEvent]] = {}
    for c in model.creations:
        by_var.setdefault(c.variable, []).append(c)
    for a in model.assignments:
        if a.member != LOW_LATENCY_MEMBER or a.value != "true":
            continue
        earlier = [c.line for c in by_var.get(a.receiver, ()) if c.line <= a.line]
        if earlier:
            fixed_lines.add((a.receiver, max(earlier)))

    findings = {
        _finding(MOTION_CONTROLLER_RULE, Category.MOTION_CONTROLLER, model.path, c.line)
        for c in model.creations
        if c.created_type == MOTION_CONTROLLER_TYPE
        and not (c.variable and (c.variable, c.line) in fixed_lines)
    }
    return sorted(findings, key=lambda f: f.line)


def detect_static_mesh_smell(model: SourceModel, threshold: int = 3,
                             extra_mentions: frozenset[str] = frozenset()) -> list[Finding]:
    """Heuristic for static meshes that should be instanced.

    Flags mesh components (and spawned actors) created inside loops, plus the
    first of ``threshold`` or more sibling mesh components in one file. Any
    mention of an instanced mesh type, here or in ``extra_mentions`` (facts
    from related headers), suppresses the check.
    """
    if threshold < 1:
        raise ValueError("threshold must be a positive integer")
    if (model.type_mentions | extra_mentions) & INSTANCED_MESH_TYPES:
        return []
    lines = {
        c.line for c in model.creations
        if (c.created_type == STATIC_MESH_TYPE or c.mechanism is Mechanism.SPAWN_ACTOR)
        and model.in_loop(c.line)
    }
    meshes = [c for c in model.creations if c.created_type == STATIC_MESH_TYPE]
    if len(meshes) >= threshold:
        lines.add(min(c.line for c in meshes))
    return [_finding(STATIC_MESH_RULE, Category.STATIC_MESH, model.path, line) for line in sorted(lines)]
