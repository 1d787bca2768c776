"""Scoring findings against a hand-labeled corpus, and corpus statistics."""

from __future__ import annotations

import json
import os
from collections import Counter
from dataclasses import dataclass

from .report import Report

Site = tuple[str, str, int]  # (root-relative path, rule id, line)


@dataclass(frozen=True)
class Labels:
    positives: frozenset[Site]
    negatives: frozenset[Site]

    @classmethod
    def from_json(cls, text: str) -> Labels:
        doc = json.loads(text)

        def sites(key):
            return frozenset((s["file"], s["rule_id"], int(s["line"])) for s in doc.get(key, []))

        positives, negatives = sites("positives"), sites("negatives")
        overlap = positives & negatives
        if overlap:
            raise ValueError(f"site labeled both positive and negative: {sorted(overlap)[0]}")
        return cls(positives, negatives)


@dataclass(frozen=True)
class Score:
    tp: int
    fp: int
    fn: int
    tn: int
    false_positives: tuple[Site, ...] = ()
    missed: tuple[Site, ...] = ()

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 1.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 1.0

    @property
    def accuracy(self) -> float:
        total = self.tp + self.fp + self.fn + self.tn
        return (self.tp + self.tn) / total if total else 1.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


def reported_sites(report: Report) -> set[Site]:
    root = report.project_path.rstrip("/")
    return {
        (os.path.relpath(f.file_path, root).replace(os.sep, "/"), f.rule_id, f.line)
        for f in report.findings
    }


def score(found: set[Site], labels: Labels) -> Score:
    """Any finding not labeled positive counts against precision, whether
    or not it sits on a labeled negative."""
    tp = found & labels.positives
    fp = found - labels.positives
    missed = labels.positives - found
    tn = labels.negatives - found
    return Score(len(tp), len(fp), len(missed), len(tn), tuple(sorted(fp)), tuple(sorted(missed)))


def rule_distribution(reports: list[Report]) -> dict[str, int]:
    """Finding counts per rule name summed over several project reports."""
    total = Counter()
    for report in reports:
        total.update(report.rule_distribution)
    return dict(sorted(total.items()))


def files_checked(reports: list[Report]) -> tuple[int, int]:
    """Total (cpp, ini) files checked over several project reports."""
    return (sum(r.total_cpp_files_checked for r in reports),
            sum(r.total_ini_files_checked for r in reports))
