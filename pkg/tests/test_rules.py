import json
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import listing
from xrsmell.ini import lookup, parse_ini
from xrsmell.rules import (
    BUILTIN_RULES,
    Comparator,
    MissingPolicy,
    RuleConfigError,
    Severity,
    SettingsRule,
    builtin_ruleset,
    effective_entry,
    evaluate_settings_rule,
    load_ruleset,
    parse_bool,
    parse_number,
)

RULES = builtin_ruleset()


def evaluate(rule_id, text, ruleset=RULES):
    return evaluate_settings_rule(ruleset.get(rule_id), parse_ini(text, "DefaultEngine.ini"))


def renderer(*lines):
    return "\n".join(["[/Script/Engine.RendererSettings]", *lines]) + "\n"


def engine(*lines):
    return "\n".join(["[/Script/Engine.Engine]", *lines]) + "\n"


def test_builtin_ids_and_categories():
    ids = [r.id for r in RULES.rules]
    assert ids == [f"UEP-S{i:02d}" for i in range(1, 12)]
    assert Counter(r.category.value for r in RULES.rules) == {"Framerate": 4, "Display": 4, "Rendering": 3}
    assert all(r.target_file == "DefaultEngine.ini" for r in RULES.rules)
    assert builtin_ruleset() == builtin_ruleset()


def test_builtin_table():
    table = {r.id: (r.name, r.key, r.comparator, str(r.expected), r.missing_policy, r.severity)
             for r in RULES.rules}
    flag, ignore = MissingPolicy.FLAG, MissingPolicy.IGNORE
    warn, adv = Severity.WARNING, Severity.ADVISORY
    assert table == {
        "UEP-S01": ("Smooth Framerate", "bSmoothFrameRate", Comparator.BOOL_EQ, "False", flag, warn),
        "UEP-S02": ("Fixed Framerate", "bUseFixedFrameRate", Comparator.BOOL_EQ, "False", ignore, warn),
        "UEP-S03": ("Custom Timestep", "CustomTimeStepClassName", Comparator.EMPTY_OR_NONE, "None", ignore, warn),
        "UEP-S04": ("Min Desired Framerate", "MinDesiredFrameRate", Comparator.NUMERIC_GTE, "90.0", flag, warn),
        "UEP-S05": ("Pixel Density", "vr.PixelDensity", Comparator.NUMERIC_EQ, "1.0", ignore, warn),
        "UEP-S06": ("Instance Stereo", "vr.InstancedStereo", Comparator.BOOL_EQ, "True", flag, warn),
        "UEP-S07": ("Mobile Multiview", "vr.MobileMultiView", Comparator.BOOL_EQ, "True", flag, warn),
        "UEP-S08": ("Separate Translucency", "r.SeparateTranslucency", Comparator.BOOL_EQ, "False", flag, warn),
        "UEP-S09": ("Occlusion Culling", "r.AllowOcclusionQueries", Comparator.BOOL_EQ, "False", flag, adv),
        "UEP-S10": ("Forward Shading", "r.ForwardShading", Comparator.BOOL_EQ, "True", flag, warn),
        "UEP-S11": ("Ray Tracing", "r.RayTracing", Comparator.BOOL_EQ, "False", ignore, adv),
    }
    assert RULES.get("UEP-S05").sections == ("/Script/Engine.RendererSettings", "SystemSettings")
    assert RULES.get("UEP-S06").suggestion == "InstancedStereo should be set to true in DefaultEngine.ini"


def test_instanced_stereo_listing3():
    pre = parse_ini(listing("listing3_pre.ini"), "DefaultEngine.ini")
    (finding,) = evaluate_settings_rule(RULES.get("UEP-S06"), pre)
    assert finding.line == 4 and finding.name == "Instance Stereo"
    post = parse_ini(listing("listing3_post.ini"), "DefaultEngine.ini")
    assert evaluate_settings_rule(RULES.get("UEP-S06"), post) == []


def test_min_fps_listing2():
    assert evaluate("UEP-S04", engine("MinDesiredFrameRate=120.000000")) == []
    (finding,) = evaluate("UEP-S04", engine("MinDesiredFrameRate=60.000000"))
    assert finding.line == 2


def test_occlusion_listing4():
    (finding,) = evaluate("UEP-S09", renderer("r.AllowOcclusionQueries=True"))
    assert finding.severity == "advisory"


def test_missing_policies():
    assert evaluate("UEP-S02", engine("bSmoothFrameRate=False")) == []
    (finding,) = evaluate("UEP-S01", engine("bUseFixedFrameRate=False"))
    assert finding.line == 0
    # key present in a different section is still missing
    (finding,) = evaluate("UEP-S06", "[SystemSettings]\nvr.InstancedStereo=True\n")
    assert finding.line == 0


def test_pixel_density_sections_and_tolerance():
    assert evaluate("UEP-S05", renderer("vr.PixelDensity=1.0000004")) == []
    assert len(evaluate("UEP-S05", renderer("vr.PixelDensity=1.00001"))) == 1
    (f,) = evaluate("UEP-S05", "[SystemSettings]\nvr.PixelDensity=0.5\n")
    assert f.line == 2
    # first listed section wins when both carry the key
    text = "[SystemSettings]\nvr.PixelDensity=0.5\n" + renderer("vr.PixelDensity=1.0")
    assert evaluate("UEP-S05", text) == []


def test_custom_timestep():
    assert evaluate("UEP-S03", engine("CustomTimeStepClassName=")) == []
    assert evaluate("UEP-S03", engine("CustomTimeStepClassName=none")) == []
    assert len(evaluate("UEP-S03", engine("CustomTimeStepClassName=/Script/Engine.X"))) == 1


def test_unparseable_numeric_value_is_a_violation_with_diagnostic():
    notes = []
    doc = parse_ini(engine("MinDesiredFrameRate=fast"), "DefaultEngine.ini")
    (finding,) = evaluate_settings_rule(RULES.get("UEP-S04"), doc, notes)
    assert finding.line == 2
    assert len(notes) == 1 and "MinDesiredFrameRate" in notes[0][1]


def test_last_write_wins():
    assert evaluate("UEP-S06", renderer("vr.InstancedStereo=False", "vr.InstancedStereo=True")) == []
    (f,) = evaluate("UEP-S06", renderer("vr.InstancedStereo=True", "vr.InstancedStereo=False"))
    assert f.line == 3


def test_effective_entry_ops():
    def eff(*lines):
        doc = parse_ini("[S]\n" + "\n".join(lines))
        entry = effective_entry(lookup(doc, "S", "k"))
        return entry and entry.value

    assert eff("k=1", ".k=2") == "1"
    assert eff(".k=2") == "2"
    assert eff("k=1", "!k=ClearArray") is None
    assert eff("k=1", "-k=1") is None
    assert eff("k=1", "-k=2") == "1"
    assert eff("k=1", "+k=3") == "3"


@pytest.mark.parametrize("spelling", ["true", "True", "TRUE", "tRuE", "1", "yes", "On"])
def test_bool_spellings(spelling):
    assert evaluate("UEP-S06", renderer(f"vr.InstancedStereo={spelling}")) == []


def test_parsers():
    assert parse_bool(" FALSE ") is False and parse_bool("maybe") is None
    assert parse_number("120.000000") == 120.0
    assert parse_number("1.5f") == 1.5
    assert parse_number("-3e2") == -300.0
    assert parse_number("nan") is None and parse_number("") is None and parse_number(True) is None


def test_rule_validation():
    base = RULES.get("UEP-S06")
    with pytest.raises(RuleConfigError, match="sections"):
        SettingsRule(**{**base.__dict__, "sections": ()})
    with pytest.raises(RuleConfigError, match="expected"):
        SettingsRule(**{**base.__dict__, "expected": "perhaps"})
    with pytest.raises(RuleConfigError, match="expected"):
        SettingsRule(**{**RULES.get("UEP-S04").__dict__, "expected": "ninety"})


def test_load_empty_config_is_builtin():
    assert load_ruleset("") == builtin_ruleset()
    assert load_ruleset("  \n") == builtin_ruleset()


def test_load_override_threshold():
    fixture = engine("MinDesiredFrameRate=80")
    relaxed = load_ruleset(json.dumps({"rules": [{"id": "UEP-S04", "expected": 72}]}))
    assert evaluate("UEP-S04", fixture, relaxed) == []
    assert len(evaluate("UEP-S04", fixture, RULES)) == 1
    assert relaxed.get("UEP-S04").name == "Min Desired Framerate"


def test_load_disabled_and_new_rule():
    config = {
        "disabled": ["UEP-S09"],
        "rules": [{
            "id": "TEAM-01", "name": "Mobile HDR", "category": "Rendering",
            "target_file": "DefaultEngine.ini", "sections": ["/Script/Engine.RendererSettings"],
            "key": "r.MobileHDR", "comparator": "bool-eq", "expected": "False",
            "missing_policy": "ignore-when-missing", "suggestion": "Disable mobile HDR",
        }],
    }
    rs = load_ruleset(json.dumps(config))
    assert rs.disabled_ids == {"UEP-S09"}
    assert "UEP-S09" in [r.id for r in rs.rules]
    assert "UEP-S09" not in [r.id for r in rs.enabled()]
    assert len(evaluate("TEAM-01", renderer("r.MobileHDR=True"), rs)) == 1


@pytest.mark.parametrize("config,message", [
    ("{", "not valid JSON"),
    ("[]", "JSON object"),
    ('{"extra": 1}', "extra"),
    ('{"rules": [{"name": "x"}]}', "'id'"),
    ('{"rules": [{"id": "UEP-S04", "bogus": 1}]}', "'bogus'"),
    ('{"rules": [{"id": "UEP-S04", "comparator": "fuzzy"}]}', "'comparator'"),
    ('{"rules": [{"id": "UEP-S04", "expected": "ninety"}]}', "'expected'"),
    ('{"rules": [{"id": "NEW-1", "name": "x"}]}', "NEW-1"),
    ('{"rules": [{"id": "UEP-S04", "sections": "X"}]}', "'sections'"),
    ('{"disabled": "UEP-S01"}', "'disabled'"),
    ('{"rules": [{"id": "UEP-S01"}, {"id": "UEP-S01"}]}', "duplicated"),
])
def test_load_errors(config, message):
    with pytest.raises(RuleConfigError, match=message):
        load_ruleset(config)


def test_with_min_fps():
    rs = RULES.with_min_fps(72)
    assert evaluate("UEP-S04", engine("MinDesiredFrameRate=80"), rs) == []
    assert "72" in rs.get("UEP-S04").suggestion


# Properties over generated renderer/engine documents.

_bool_words = st.sampled_from(["True", "False", "true", "FALSE", "1", "0", "garbage"])
_numbers = st.one_of(st.floats(0, 200, allow_nan=False).map(lambda x: f"{x:.6f}"), st.just("abc"))


@st.composite
def rule_and_document(draw):
    rule = draw(st.sampled_from(BUILTIN_RULES))
    section = draw(st.sampled_from(rule.sections))
    if rule.comparator is Comparator.BOOL_EQ:
        values = _bool_words
    elif rule.comparator is Comparator.EMPTY_OR_NONE:
        values = st.sampled_from(["", "None", "/Script/Engine.FixedFrameRateCustomTimeStep"])
    else:
        values = _numbers
    lines = [f"[{section}]"]
    for value in draw(st.lists(values, max_size=3)):
        lines.append(f"{rule.key}={value}")
        if draw(st.booleans()):
            lines.append("Other.Key=1")
    if draw(st.booleans()):
        lines.insert(0, "[/Script/Engine.PhysicsSettings]\nDefaultGravityZ=-980.000000")
    return rule, "\n".join(lines) + "\n"


def _fix(rule, text):
    doc = parse_ini(text)
    for section in rule.sections:
        entry = effective_entry(lookup(doc, section, rule.key))
        if entry is not None:
            lines = text.split("\n")
            lines[entry.line - 1] = f"{rule.key}={rule.expected}"
            return "\n".join(lines)
    return text.replace(f"[{rule.sections[0]}]", f"[{rule.sections[0]}]\n{rule.key}={rule.expected}", 1) \
        if f"[{rule.sections[0]}]" in text else text + f"\n[{rule.sections[0]}]\n{rule.key}={rule.expected}\n"


@given(rule_and_document())
@settings(max_examples=100)
def test_monotonic_fix(case):
    rule, text = case
    assert len(evaluate_settings_rule(rule, parse_ini(text))) <= 1
    if evaluate_settings_rule(rule, parse_ini(text)):
        assert evaluate_settings_rule(rule, parse_ini(_fix(rule, text))) == []


@given(rule_and_document())
def test_evaluation_is_pure(case):
    rule, text = case
    assert evaluate_settings_rule(rule, parse_ini(text)) == evaluate_settings_rule(rule, parse_ini(text))


@given(st.sampled_from(["true", "True", "TRUE", "tRUE"]), st.sampled_from(["false", "False", "FALSE"]))
def test_bool_case_insensitivity(t, f):
    assert evaluate("UEP-S10", renderer(f"r.ForwardShading={t}")) == []
    assert len(evaluate("UEP-S10", renderer(f"r.ForwardShading={f}"))) == 1
