"""Whole-project analysis: scan, per-file checks, join, report."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

from .cpp import INSTANCED_MESH_TYPES, build_source_model, detect_motion_controller_smell, detect_static_mesh_smell
from .ini import parse_ini
from .report import Report, assemble_report
from .rules import Ruleset, SettingsRule, builtin_ruleset, evaluate_settings_rule
from .scanner import FileInventory, scan


@dataclass(frozen=True)
class AnalysisOptions:
    ruleset: Ruleset = field(default_factory=builtin_ruleset)
    exclusions: tuple[str, ...] = ()
    use_default_excludes: bool = True
    static_mesh_threshold: int = 3
    jobs: int = 1


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def analyze_ini_file(path: str, rules: tuple[SettingsRule, ...]):
    try:
        data = _read(path)
    except OSError as exc:
        return [], [(path, f"could not read file: {exc.strerror}")]
    doc = parse_ini(data, path)
    diagnostics = [(path, f"line {line}: {msg}") for line, msg in doc.diagnostics]
    findings = []
    name = os.path.basename(path)
    for rule in rules:
        if rule.applies_to(name):
            findings += evaluate_settings_rule(rule, doc, diagnostics)
    return findings, diagnostics


def header_mentions(path: str) -> frozenset[str]:
    """Instanced-mesh type names a header mentions (all the check needs)."""
    try:
        data = _read(path)
    except OSError:
        return frozenset()
    return build_source_model(data, path).type_mentions & INSTANCED_MESH_TYPES


def analyze_cpp_file(path: str, threshold: int, headers: dict[str, frozenset[str]]):
    try:
        data = _read(path)
    except OSError as exc:
        return [], [(path, f"could not read file: {exc.strerror}")]
    model = build_source_model(data, path)
    related = {os.path.splitext(os.path.basename(path))[0].lower() + ".h"}
    related.update(os.path.basename(inc.replace("\\", "/")).lower() for inc in model.includes)
    extra = frozenset().union(*(headers.get(name, frozenset()) for name in related))
    findings = detect_motion_controller_smell(model) + detect_static_mesh_smell(model, threshold, extra)
    diagnostics = [(path, f"line {line}: {msg}") for line, msg in model.diagnostics]
    return findings, diagnostics


def _fan_out(func, items, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items, chunksize=max(1, len(items) // (jobs * 4))))


def analyze_inventory(inventory: FileInventory, options: AnalysisOptions) -> Report:
    rules = tuple(options.ruleset.enabled())
    findings, diagnostics = [], []

    for f, d in _fan_out(partial(analyze_ini_file, rules=rules), inventory.ini_files, options.jobs):
        findings += f
        diagnostics += d

    headers: dict[str, frozenset[str]] = {}
    mentions = _fan_out(header_mentions, inventory.header_files, options.jobs)
    for path, found in zip(inventory.header_files, mentions):
        name = os.path.basename(path).lower()
        headers[name] = headers.get(name, frozenset()) | found

    worker = partial(analyze_cpp_file, threshold=options.static_mesh_threshold, headers=headers)
    for f, d in _fan_out(worker, inventory.cpp_files, options.jobs):
        findings += f
        diagnostics += d

    diagnostics += [(path, reason) for path, reason in inventory.skipped if reason.startswith("unreadable")]
    return assemble_report(inventory, findings, diagnostics)


def analyze_project(root, options: AnalysisOptions | None = None) -> Report:
    options = options or AnalysisOptions()
    inventory = scan(root, options.exclusions, options.use_default_excludes)
    return analyze_inventory(inventory, options)
