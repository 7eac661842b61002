#!/usr/bin/env python3
"""Run the bundled task corpus and print the results table.

Usage:
    python3 scripts/run_bench.py [corpus-dir] [--jobs N] [--json out.json]
"""
import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cqsearch.bench import render_table, run_corpus

REPO = Path(__file__).resolve().parent.parent


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("corpus", nargs="?", default=str(REPO / "corpus"))
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--k-bound", type=int, default=2)
    parser.add_argument("--json", help="also write per-task results here")
    args = parser.parse_args()

    results = run_corpus(Path(args.corpus), k_bound=args.k_bound, jobs=args.jobs)
    print(render_table(results))
    if args.json:
        Path(args.json).write_text(
            json.dumps([r.to_doc() for r in results], indent=2) + "\n")
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
