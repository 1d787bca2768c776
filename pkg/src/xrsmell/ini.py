"""Line-preserving reader for Unreal-style ``.ini`` settings files."""

from __future__ import annotations

import codecs
from dataclasses import dataclass, field
from enum import Enum

COMMENT_PREFIXES = (";", "#")


class Op(str, Enum):
    SET = "set"
    ARRAY_ADD = "array-add"
    ARRAY_REMOVE = "array-remove"
    SET_IF_ABSENT = "set-if-absent"
    CLEAR = "clear"


OP_PREFIXES = {
    "+": Op.ARRAY_ADD,
    "-": Op.ARRAY_REMOVE,
    ".": Op.SET_IF_ABSENT,
    "!": Op.CLEAR,
}


@dataclass(frozen=True)
class IniEntry:
    key: str
    value: str
    line: int
    op: Op = Op.SET

    def __post_init__(self):
        if self.line < 1:
            raise ValueError(f"line must be >= 1, got {self.line}")
        if not self.key:
            raise ValueError("key must be non-empty")


@dataclass(frozen=True)
class IniSection:
    name: str
    entries: tuple[IniEntry, ...]
    line: int


@dataclass(frozen=True)
class IniDocument:
    path: str
    sections: tuple[IniSection, ...] = ()
    entries_before_first_section: tuple[IniEntry, ...] = ()
    diagnostics: tuple[tuple[int, str], ...] = field(default=(), compare=False)

    def sections_named(self, name: str) -> list[IniSection]:
        """All sections called ``name`` (case-insensitive), in file order."""
        wanted = name.casefold()
        return [s for s in self.sections if s.name.casefold() == wanted]


def decode_text(data: bytes | str) -> str:
    """Decode raw file bytes; BOM-marked UTF-8/UTF-16 is honoured, anything
    else is read as UTF-8 with replacement characters."""
    if isinstance(data, str):
        return data[1:] if data.startswith("\ufeff") else data
    if data.startswith(codecs.BOM_UTF8):
        return data[len(codecs.BOM_UTF8):].decode("utf-8", errors="replace")
    if data.startswith(codecs.BOM_UTF16_LE):
        return data[2:].decode("utf-16-le", errors="replace")
    if data.startswith(codecs.BOM_UTF16_BE):
        return data[2:].decode("utf-16-be", errors="replace")
    return data.decode("utf-8", errors="replace")


def split_lines(text: str) -> list[str]:
    # Only \n (optionally preceded by \r) ends a line; str.splitlines also
    # breaks on form feeds and unicode separators, which would skew numbering.
    return [ln[:-1] if ln.endswith("\r") else ln for ln in text.split("\n")]


def _find_separator(line: str) -> int:
    """Index of the first '=' not escaped by a backslash, or -1."""
    i = line.find("=")
    while i > 0 and line[i - 1] == "\\":
        i = line.find("=", i + 1)
    return i


def _unquote(value: str) -> str:
    if len(value) >= 2 and value[0] == '"' and value[-1] == '"':
        return value[1:-1]
    return value


def parse_ini(text: bytes | str, path: str = "") -> IniDocument:
    """Parse settings text into an :class:`IniDocument`.

    Never raises on content: lines that are neither headers, comments nor
    ``key=value`` pairs end up in ``diagnostics`` as ``(line, message)``.
    """
    text = decode_text(text)
    sections: list[IniSection] = []
    preamble: list[IniEntry] = []
    diagnostics: list[tuple[int, str]] = []

    current_name: str | None = None
    current_line = 0
    current: list[IniEntry] = preamble

    def close_section():
        if current_name is not None:
            sections.append(IniSection(current_name, tuple(current), current_line))

    for lineno, raw in enumerate(split_lines(text), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith(COMMENT_PREFIXES):
            continue
        if stripped.startswith("["):
            name = stripped[1:-1].strip() if stripped.endswith("]") else ""
            if name:
                close_section()
                current_name = name
                current_line = lineno
                current = []
            else:
                diagnostics.append((lineno, f"malformed section header: {stripped!r}"))
            continue

        sep = _find_separator(stripped)
        if sep < 0:
            diagnostics.append((lineno, "line has no '=' and was ignored"))
            continue
        key = stripped[:sep].strip()
        op = Op.SET
        if key and key[0] in OP_PREFIXES:
            op = OP_PREFIXES[key[0]]
            key = key[1:].strip()
        if not key:
            diagnostics.append((lineno, "entry with empty key was ignored"))
            continue
        value = _unquote(stripped[sep + 1:].strip())
        current.append(IniEntry(key, value, lineno, op))

    close_section()
    return IniDocument(path, tuple(sections), tuple(preamble), tuple(diagnostics))


def lookup(doc: IniDocument, section: str, key: str) -> list[IniEntry]:
    """Every entry for ``key`` across all sections named ``section``.

    Both names compare case-insensitively; duplicates are kept in file order.
    """
    wanted = key.casefold()
    return [
        entry
        for sec in doc.sections_named(section)
        for entry in sec.entries
        if entry.key.casefold() == wanted
    ]
