#!/usr/bin/env python3
"""Run the full pipeline on the demo monolith: mine, decompose, sweep, analyze.

Builds the demo monolith first if it is not there yet, then leaves all
artifacts (history.json, decomposition.json, matrix.csv, results.csv,
report.json) in the output directory and prints the headline numbers.
"""

import argparse
import json
import subprocess
import sys
from pathlib import Path

from monosplit.cli import main as monosplit


def _ensure_demo(dest: Path) -> None:
    if (dest / "repo").is_dir() and (dest / "accesses.json").is_file():
        return
    builder = Path(__file__).with_name("make_demo_monolith.py")
    subprocess.run(
        [sys.executable, str(builder), "--dest", str(dest), "--force"], check=True
    )


def _run(argv: list) -> None:
    code = monosplit(argv)
    if code != 0:
        raise SystemExit(f"step failed with exit code {code}: {' '.join(argv)}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--demo", default="demo_monolith", help="demo monolith directory")
    parser.add_argument("--out", default="demo_out", help="artifact output directory")
    parser.add_argument("--parallelism", type=int, default=1, help="sweep worker processes")
    args = parser.parse_args(argv)

    demo = Path(args.demo)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _ensure_demo(demo)

    repo = demo / "repo"
    accesses = demo / "accesses.json"
    history = out / "history.json"
    decomposition = out / "decomposition.json"
    matrix = out / "matrix.csv"
    results = out / "results.csv"
    report = out / "report.json"

    _run(["mine", str(repo), "--out", str(history)])
    _run(
        [
            "decompose",
            "--history", str(history),
            "--accesses", str(accesses),
            "--weights", "20,15,15,10,20,20",
            "--clusters", "3",
            "--codebase", "demo-shop",
            "--matrix-out", str(matrix),
            "--out", str(decomposition),
        ]
    )
    _run(
        [
            "--parallelism", str(args.parallelism),
            "sweep",
            "--history", str(history),
            "--accesses", str(accesses),
            "--codebase", "demo-shop",
            "--out", str(results),
        ]
    )
    _run(
        [
            "analyze", str(results),
            "--groups",
            "--best", "combined",
            "--out", str(report),
        ]
    )

    chosen = json.loads(decomposition.read_text(encoding="utf-8"))
    print(f"decomposition at weights {chosen['weights']}:")
    for cluster in chosen["clusters"]:
        print(f"  service: {', '.join(cluster)}")

    analysis = json.loads(report.read_text(encoding="utf-8"))
    best = analysis["best"]["rows"][0]
    weights = [best[k] for k in ("wAccess", "wRead", "wWrite", "wSequence", "wCommit", "wAuthor")]
    print(f"best combined score {best['combined']:.6f} ({best['group']}, weights {weights})")
    for group, summary in analysis["summaries"]["combined"].items():
        if summary["count"]:
            print(f"  {group}: median combined {summary['median']:.6f} over {summary['count']} rows")
    print(f"artifacts in {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
