"""Report assembly plus the results.json and plain-text renderings."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .rules import Finding
from .scanner import FileInventory


@dataclass(frozen=True)
class Report:
    project_path: str
    total_cpp_files_checked: int
    total_ini_files_checked: int
    findings: tuple[Finding, ...] = ()
    diagnostics: tuple[tuple[str, str], ...] = ()
    rule_distribution: dict[str, int] = field(default_factory=dict)


def assemble_report(inventory: FileInventory, findings, diagnostics=()) -> Report:
    unique = tuple(sorted(set(findings)))
    distribution = Counter(f.name for f in unique)
    return Report(
        project_path=inventory.root,
        total_cpp_files_checked=len(inventory.cpp_files),
        total_ini_files_checked=len(inventory.ini_files),
        findings=unique,
        diagnostics=tuple(sorted(set(diagnostics))),
        rule_distribution=dict(sorted(distribution.items())),
    )


def _slashes(path: str) -> str:
    return path.replace("\\", "/")


def to_dict(report: Report, extended: bool = False) -> dict:
    project = _slashes(report.project_path)
    if not project.endswith("/"):
        project += "/"
    smells = []
    for f in report.findings:
        smell = {
            "FilePath": _slashes(f.file_path),
            "CodeSmellName": f.name,
            "CodeSmellSuggestion": f.suggestion,
            "LineNumber": f.line,
        }
        if extended:
            smell.update(RuleId=f.rule_id, Category=f.category, Severity=f.severity)
        smells.append(smell)
    out = {
        "ProjectPath": project,
        "TotalCppFilesChecked": report.total_cpp_files_checked,
        "TotalIniFilesChecked": report.total_ini_files_checked,
        "FoundCodeSmells": smells,
    }
    if extended:
        out["Diagnostics"] = [
            {"FilePath": _slashes(path), "Message": msg} for path, msg in report.diagnostics
        ]
        out["RuleDistribution"] = dict(report.rule_distribution)
    return out


def to_compat_json(report: Report, extended: bool = False) -> str:
    """results.json text: 4-space indent, ``"Key" : value`` separators."""
    return json.dumps(to_dict(report, extended), indent=4, separators=(",", " : "),
                      ensure_ascii=False) + "\n"


def render_text(report: Report) -> str:
    lines = [
        f"{f.severity} {f.rule_id} {f.file_path}:{f.line} {f.name} — {f.suggestion}"
        for f in report.findings
    ]
    if lines:
        lines.append("")
    by_category = Counter(f.category for f in report.findings)
    lines += [
        f"Project: {report.project_path}",
        f"Files checked: {report.total_ini_files_checked} ini, {report.total_cpp_files_checked} cpp",
        f"Findings: {len(report.findings)}",
    ]
    lines += [f"  {category}: {count}" for category, count in sorted(by_category.items())]
    if report.diagnostics:
        lines.append(f"Diagnostics: {len(report.diagnostics)}")
    return "\n".join(lines) + "\n"
