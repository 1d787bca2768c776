"""Command-line front end."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

from .pipeline import AnalysisOptions, analyze_project
from .report import render_text, to_compat_json
from .rules import RuleConfigError, builtin_ruleset, load_ruleset
from .scanner import ScanError

EXIT_CLEAN = 0
EXIT_FINDINGS = 1
EXIT_ERROR = 2

FORMATS = ("json-compat", "json-extended", "text")


@dataclass
class RunConfig:
    project_dir: str
    output_path: str | None = None
    format: str = "json-compat"
    disabled_rules: set[str] = field(default_factory=set)
    rules_file: str | None = None
    exclusions: list[str] = field(default_factory=list)
    use_default_excludes: bool = True
    static_mesh_threshold: int = 3
    min_fps_threshold: float | None = None
    fail_on_findings: bool = False
    parallelism: int | str = 1

    def __post_init__(self):
        if not self.project_dir:
            raise ValueError("project_dir is required")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {', '.join(FORMATS)}")
        if self.static_mesh_threshold < 1:
            raise ValueError("static mesh threshold must be positive")
        if self.min_fps_threshold is not None and self.min_fps_threshold <= 0:
            raise ValueError("min fps threshold must be positive")
        if self.parallelism != "auto" and (not isinstance(self.parallelism, int) or self.parallelism < 1):
            raise ValueError("parallelism must be a positive integer or 'auto'")

    @property
    def jobs(self) -> int:
        if self.parallelism == "auto":
            return os.cpu_count() or 1
        return int(self.parallelism)


def run(config: RunConfig) -> int:
    try:
        if config.rules_file:
            with open(config.rules_file, encoding="utf-8") as fh:
                ruleset = load_ruleset(fh.read())
        else:
            ruleset = builtin_ruleset()
        if config.min_fps_threshold is not None:
            ruleset = ruleset.with_min_fps(config.min_fps_threshold)
        ruleset = ruleset.disable(*config.disabled_rules)
        options = AnalysisOptions(
            ruleset=ruleset,
            exclusions=tuple(config.exclusions),
            use_default_excludes=config.use_default_excludes,
            static_mesh_threshold=config.static_mesh_threshold,
            jobs=config.jobs,
        )
        report = analyze_project(config.project_dir, options)
        if config.format == "text":
            sys.stdout.write(render_text(report))
            if config.output_path:
                _write(config.output_path, render_text(report))
        else:
            output = config.output_path or os.path.join(config.project_dir, "results.json")
            _write(output, to_compat_json(report, extended=config.format == "json-extended"))
    except (OSError, RuleConfigError, ScanError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if report.findings and config.fail_on_findings:
        return EXIT_FINDINGS
    return EXIT_CLEAN


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _jobs(text: str) -> int | str:
    return "auto" if text == "auto" else _positive_int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xrsmell",
        description="Detect performance smells in Unreal Engine XR project settings and C++ sources.",
    )
    parser.add_argument("project_dir", help="project directory to analyze")
    parser.add_argument("--output", help="report path (default: <project_dir>/results.json)")
    parser.add_argument("--format", choices=FORMATS, default="json-compat")
    parser.add_argument("--disable", action="append", default=[], metavar="ID",
                        help="disable a rule by id; repeatable")
    parser.add_argument("--rules", metavar="PATH", help="JSON rules file merged over the built-in rules")
    parser.add_argument("--exclude", action="append", default=[], metavar="GLOB",
                        help="extra exclusion glob; repeatable")
    parser.add_argument("--no-default-excludes", action="store_true",
                        help="also scan Intermediate/, Saved/, Binaries/, DerivedDataCache/, .git/")
    parser.add_argument("--static-mesh-threshold", type=_positive_int, default=3, metavar="N")
    parser.add_argument("--min-fps", type=_positive_float, default=None, metavar="N")
    parser.add_argument("--fail-on-findings", action="store_true", help="exit 1 when anything is found")
    parser.add_argument("--jobs", type=_jobs, default=1, metavar="N", help="worker processes, or 'auto'")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        project_dir=args.project_dir,
        output_path=args.output,
        format=args.format,
        disabled_rules=set(args.disable),
        rules_file=args.rules,
        exclusions=args.exclude,
        use_default_excludes=not args.no_default_excludes,
        static_mesh_threshold=args.static_mesh_threshold,
        min_fps_threshold=args.min_fps,
        fail_on_findings=args.fail_on_findings,
        parallelism=args.jobs,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
