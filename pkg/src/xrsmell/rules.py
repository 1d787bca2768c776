"""Settings rules: schema, the built-in registry, evaluation and loading."""

from __future__ import annotations

import fnmatch
import json
import math
import re
from dataclasses import MISSING, dataclass, field, fields, replace
from enum import Enum

from .ini import IniDocument, IniEntry, Op, lookup


class Category(str, Enum):
    FRAMERATE = "Framerate"
    DISPLAY = "Display"
    RENDERING = "Rendering"
    MOTION_CONTROLLER = "Motion Controller"
    STATIC_MESH = "Static Mesh"


class Comparator(str, Enum):
    BOOL_EQ = "bool-eq"
    NUMERIC_EQ = "numeric-eq"
    NUMERIC_GTE = "numeric-gte"
    EMPTY_OR_NONE = "empty-or-none"


class MissingPolicy(str, Enum):
    FLAG = "flag-when-missing"
    IGNORE = "ignore-when-missing"


class Severity(str, Enum):
    WARNING = "warning"
    ADVISORY = "advisory"


class RuleConfigError(ValueError):
    """A rule definition or rules file does not fit the schema."""


TRUE_WORDS = frozenset({"true", "yes", "on", "1"})
FALSE_WORDS = frozenset({"false", "no", "off", "0"})
_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")


def parse_bool(text: str) -> bool | None:
    word = text.strip().casefold()
    if word in TRUE_WORDS:
        return True
    if word in FALSE_WORDS:
        return False
    return None


def parse_number(text) -> float | None:
    if isinstance(text, bool):
        return None
    if isinstance(text, (int, float)):
        return float(text) if math.isfinite(text) else None
    text = text.strip()
    # Allow a trailing 'f' as written in C++-flavoured settings.
    if text[-1:] in ("f", "F") and _NUMBER.match(text[:-1]):
        text = text[:-1]
    return float(text) if _NUMBER.match(text) else None


@dataclass(frozen=True, order=True)
class Finding:
    # Field order doubles as the report sort key: (file_path, rule_id, line).
    file_path: str
    rule_id: str
    line: int
    name: str
    category: str
    suggestion: str
    severity: str = Severity.WARNING.value


@dataclass(frozen=True)
class SettingsRule:
    id: str
    name: str
    category: Category
    target_file: str
    sections: tuple[str, ...]
    key: str
    comparator: Comparator
    expected: str | float
    missing_policy: MissingPolicy
    severity: Severity = Severity.WARNING
    suggestion: str = ""
    tolerance: float = 1e-6

    def __post_init__(self):
        for name in ("id", "name", "target_file", "key"):
            if not isinstance(getattr(self, name), str) or not getattr(self, name):
                raise RuleConfigError(f"rule {self.id!r}: field '{name}' must be a non-empty string")
        if not self.sections or not all(isinstance(s, str) and s for s in self.sections):
            raise RuleConfigError(f"rule {self.id!r}: field 'sections' must be a non-empty list of names")
        if self.comparator is Comparator.BOOL_EQ:
            if parse_bool(str(self.expected)) is None:
                raise RuleConfigError(f"rule {self.id!r}: field 'expected' is not a boolean")
        elif self.comparator in (Comparator.NUMERIC_EQ, Comparator.NUMERIC_GTE):
            if parse_number(self.expected) is None:
                raise RuleConfigError(f"rule {self.id!r}: field 'expected' is not a number")
        if not (isinstance(self.tolerance, (int, float)) and self.tolerance >= 0):
            raise RuleConfigError(f"rule {self.id!r}: field 'tolerance' must be >= 0")

    def accepts(self, value: str) -> bool | None:
        """Whether ``value`` satisfies the rule; None when it cannot be read
        in the comparator's domain."""
        if self.comparator is Comparator.EMPTY_OR_NONE:
            return value.strip().casefold() in ("", "none")
        if self.comparator is Comparator.BOOL_EQ:
            got = parse_bool(value)
            return None if got is None else got == parse_bool(str(self.expected))
        got = parse_number(value)
        if got is None:
            return None
        want = parse_number(self.expected)
        if self.comparator is Comparator.NUMERIC_EQ:
            return abs(got - want) <= self.tolerance
        return got >= want

    def applies_to(self, file_name: str) -> bool:
        return fnmatch.fnmatch(file_name.casefold(), self.target_file.casefold())

    def finding(self, file_path: str, line: int) -> Finding:
        return Finding(
            file_path=file_path,
            rule_id=self.id,
            line=line,
            name=self.name,
            category=Category(self.category).value,
            suggestion=self.suggestion,
            severity=Severity(self.severity).value,
        )


@dataclass(frozen=True)
class Ruleset:
    rules: tuple[SettingsRule, ...]
    disabled_ids: frozenset[str] = field(default_factory=frozenset)

    def enabled(self) -> list[SettingsRule]:
        return [r for r in self.rules if r.id not in self.disabled_ids]

    def get(self, rule_id: str) -> SettingsRule:
        for rule in self.rules:
            if rule.id == rule_id:
                return rule
        raise KeyError(rule_id)

    def disable(self, *rule_ids: str) -> Ruleset:
        return replace(self, disabled_ids=self.disabled_ids | frozenset(rule_ids))

    def with_min_fps(self, fps: float) -> Ruleset:
        """Copy with the minimum-desired-framerate threshold replaced."""
        suggestion = f"MinDesiredFrameRate should be at least {fps:g} in DefaultEngine.ini"
        rules = tuple(
            replace(r, expected=fps, suggestion=suggestion) if r.id == MIN_FPS_RULE_ID else r
            for r in self.rules
        )
        return replace(self, rules=rules)


ENGINE = "/Script/Engine.Engine"
RENDERER = "/Script/Engine.RendererSettings"
DEFAULT_ENGINE = "DefaultEngine.ini"
MIN_FPS_RULE_ID = "UEP-S04"


def _rule(id, name, category, sections, key, comparator, expected, missing, suggestion,
          severity=Severity.WARNING):
    return SettingsRule(
        id=id, name=name, category=category, target_file=DEFAULT_ENGINE,
        sections=tuple(sections), key=key, comparator=comparator, expected=expected,
        missing_policy=missing, severity=severity, suggestion=suggestion,
    )


_F, _D, _R = Category.FRAMERATE, Category.DISPLAY, Category.RENDERING
_FLAG, _IGNORE = MissingPolicy.FLAG, MissingPolicy.IGNORE
_BOOL = Comparator.BOOL_EQ

BUILTIN_RULES: tuple[SettingsRule, ...] = (
    _rule("UEP-S01", "Smooth Framerate", _F, [ENGINE], "bSmoothFrameRate", _BOOL, "False", _FLAG,
          "bSmoothFrameRate should be set to false in DefaultEngine.ini"),
    _rule("UEP-S02", "Fixed Framerate", _F, [ENGINE], "bUseFixedFrameRate", _BOOL, "False", _IGNORE,
          "bUseFixedFrameRate should be set to false in DefaultEngine.ini"),
    _rule("UEP-S03", "Custom Timestep", _F, [ENGINE], "CustomTimeStepClassName",
          Comparator.EMPTY_OR_NONE, "None", _IGNORE,
          "CustomTimeStepClassName should be empty in DefaultEngine.ini"),
    _rule("UEP-S04", "Min Desired Framerate", _F, [ENGINE], "MinDesiredFrameRate",
          Comparator.NUMERIC_GTE, 90.0, _FLAG,
          "MinDesiredFrameRate should be at least 90 in DefaultEngine.ini"),
    _rule("UEP-S05", "Pixel Density", _D, [RENDERER, "SystemSettings"], "vr.PixelDensity",
          Comparator.NUMERIC_EQ, 1.0, _IGNORE,
          "PixelDensity should be set to 1 in DefaultEngine.ini"),
    _rule("UEP-S06", "Instance Stereo", _D, [RENDERER], "vr.InstancedStereo", _BOOL, "True", _FLAG,
          "InstancedStereo should be set to true in DefaultEngine.ini"),
    _rule("UEP-S07", "Mobile Multiview", _D, [RENDERER], "vr.MobileMultiView", _BOOL, "True", _FLAG,
          "MobileMultiView should be set to true in DefaultEngine.ini"),
    _rule("UEP-S08", "Separate Translucency", _D, [RENDERER], "r.SeparateTranslucency", _BOOL,
          "False", _FLAG, "SeparateTranslucency should be set to false in DefaultEngine.ini"),
    _rule("UEP-S09", "Occlusion Culling", _R, [RENDERER], "r.AllowOcclusionQueries", _BOOL, "False",
          _FLAG, "AllowOcclusionQueries should be set to false in DefaultEngine.ini for mobile targets",
          severity=Severity.ADVISORY),
    _rule("UEP-S10", "Forward Shading", _R, [RENDERER], "r.ForwardShading", _BOOL, "True", _FLAG,
          "ForwardShading should be set to true in DefaultEngine.ini"),
    _rule("UEP-S11", "Ray Tracing", _R, [RENDERER], "r.RayTracing", _BOOL, "False", _IGNORE,
          "RayTracing should be set to false in DefaultEngine.ini unless its cost is budgeted",
          severity=Severity.ADVISORY),
)


def builtin_ruleset() -> Ruleset:
    return Ruleset(BUILTIN_RULES)


def effective_entry(entries: list[IniEntry]) -> IniEntry | None:
    """Resolve a key's entries the way the engine layers them: later writes
    win, ``.`` only fills a gap, ``!`` clears and ``-`` removes a match."""
    current = None
    for entry in entries:
        if entry.op in (Op.SET, Op.ARRAY_ADD):
            current = entry
        elif entry.op is Op.SET_IF_ABSENT:
            current = current or entry
        elif entry.op is Op.CLEAR:
            current = None
        elif current is not None and current.value == entry.value:
            current = None
    return current


def evaluate_settings_rule(rule: SettingsRule, doc: IniDocument,
                           diagnostics: list[tuple[str, str]] | None = None) -> list[Finding]:
    """Check one document against one rule; at most one finding comes back.

    Unreadable values count as violations and, when ``diagnostics`` is given,
    append a ``(path, message)`` note to it.
    """
    for section in rule.sections:
        entry = effective_entry(lookup(doc, section, rule.key))
        if entry is None:
            continue
        verdict = rule.accepts(entry.value)
        if verdict:
            return []
        if verdict is None and diagnostics is not None:
            diagnostics.append((doc.path, f"line {entry.line}: {rule.key} value "
                                          f"{entry.value!r} is not a valid {rule.comparator.value} operand"))
        return [rule.finding(doc.path, entry.line)]
    if rule.missing_policy is MissingPolicy.FLAG:
        return [rule.finding(doc.path, 0)]
    return []


_RULE_FIELDS = {f.name for f in fields(SettingsRule)}
_ENUM_FIELDS = {
    "category": Category,
    "comparator": Comparator,
    "missing_policy": MissingPolicy,
    "severity": Severity,
}


def _rule_from_record(record: dict, base: SettingsRule | None) -> SettingsRule:
    rule_id = record.get("id")
    if not isinstance(rule_id, str) or not rule_id:
        raise RuleConfigError("rule record is missing field 'id'")
    unknown = sorted(set(record) - _RULE_FIELDS)
    if unknown:
        raise RuleConfigError(f"rule {rule_id!r}: unknown field '{unknown[0]}'")
    values = dict(record)
    for name, enum in _ENUM_FIELDS.items():
        if name in values:
            try:
                values[name] = enum(values[name])
            except ValueError:
                raise RuleConfigError(
                    f"rule {rule_id!r}: field '{name}' has invalid value {values[name]!r}") from None
    if "sections" in values:
        if isinstance(values["sections"], str) or not isinstance(values["sections"], list):
            raise RuleConfigError(f"rule {rule_id!r}: field 'sections' must be a list")
        values["sections"] = tuple(values["sections"])
    if base is not None:
        return replace(base, **values)
    missing = sorted(
        f.name for f in fields(SettingsRule)
        if f.name not in values and f.default is MISSING and f.default_factory is MISSING
    )
    if missing:
        raise RuleConfigError(f"rule {rule_id!r}: missing field '{missing[0]}'")
    return SettingsRule(**values)


def load_ruleset(config_text: str) -> Ruleset:
    """Merge a JSON rules file over the built-in rules.

    The document is ``{"rules": [...], "disabled": [...]}``. A record whose
    ``id`` matches a built-in rule overrides only the fields it lists; any
    other record must carry every required field.
    """
    if not config_text.strip():
        return builtin_ruleset()
    try:
        doc = json.loads(config_text)
    except json.JSONDecodeError as exc:
        raise RuleConfigError(f"rules file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise RuleConfigError("rules file must be a JSON object")
    extra = sorted(set(doc) - {"rules", "disabled"})
    if extra:
        raise RuleConfigError(f"unknown top-level field '{extra[0]}'")

    records = doc.get("rules", [])
    disabled = doc.get("disabled", [])
    if not isinstance(records, list) or not all(isinstance(r, dict) for r in records):
        raise RuleConfigError("field 'rules' must be a list of objects")
    if not isinstance(disabled, list) or not all(isinstance(d, str) for d in disabled):
        raise RuleConfigError("field 'disabled' must be a list of rule ids")

    rules = {r.id: r for r in BUILTIN_RULES}
    seen: set[str] = set()
    for record in records:
        rule = _rule_from_record(record, rules.get(record.get("id")))
        if rule.id in seen:
            raise RuleConfigError(f"rule {rule.id!r}: field 'id' is duplicated")
        seen.add(rule.id)
        rules[rule.id] = rule
    return Ruleset(tuple(rules.values()), frozenset(disabled))
