"""Score the analyzer against a labeled corpus.

    python3 scripts/evaluate_corpus.py tests/data/corpus
"""

import argparse
import json
import sys
from pathlib import Path

from xrsmell.evaluation import Labels, reported_sites, score
from xrsmell.pipeline import analyze_project


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("corpus", type=Path)
    parser.add_argument("--labels", type=Path, help="defaults to <corpus>/labels.json")
    args = parser.parse_args(argv)

    labels = Labels.from_json((args.labels or args.corpus / "labels.json").read_text())
    report = analyze_project(args.corpus)
    s = score(reported_sites(report), labels)
    print(f"files: {report.total_ini_files_checked} ini, {report.total_cpp_files_checked} cpp")
    print(f"labels: {len(labels.positives)} positives, {len(labels.negatives)} negatives")
    print(f"tp={s.tp} fp={s.fp} fn={s.fn} tn={s.tn}")
    print(f"precision={s.precision:.3f} recall={s.recall:.3f} accuracy={s.accuracy:.3f} f1={s.f1:.3f}")
    print("distribution:", json.dumps(report.rule_distribution, indent=2, sort_keys=True))
    for site in s.missed:
        print("missed:", *site)
    for site in s.false_positives:
        print("false positive:", *site)
    return 0 if not s.missed else 1


if __name__ == "__main__":
    sys.exit(main())
