"""Time a full run over a synthetic project tree."""

import argparse
import tempfile
import time
from pathlib import Path

from xrsmell.cli import main as cli_main
from xrsmell.synthetic import write_tree


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cpp", type=int, default=500)
    parser.add_argument("--ini", type=int, default=470)
    parser.add_argument("--lines", type=int, default=200, help="approximate lines per source file")
    parser.add_argument("--jobs", default="1", help="N or auto")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp) / "project"
        write_tree(str(root), args.cpp, args.ini, args.lines, args.seed)
        out = Path(tmp) / "results.json"
        times = []
        for _ in range(args.repeat):
            start = time.perf_counter()
            cli_main([str(root), "--jobs", args.jobs, "--output", str(out)])
            times.append(time.perf_counter() - start)
        print(f"{args.cpp} cpp x ~{args.lines} lines + {args.ini} ini, jobs={args.jobs}")
        print("runs: " + ", ".join(f"{t:.2f}s" for t in times) + f"; best {min(times):.2f}s")


if __name__ == "__main__":
    main()
