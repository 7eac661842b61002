#!/usr/bin/env python3
"""Compare full pruning against the two ablations on the task corpus.

For every task, synthesis runs three ways: as shipped, without representation
reduction, and without early termination (capped one relation-count level past
where the normal run stopped, so the comparison terminates). Reports explored
graph counts and whether the selected queries agree.
"""
import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cqsearch import minijava
from cqsearch.extract import extract
from cqsearch.query import canonical_form
from cqsearch.select import make_context, synthesize

REPO = Path(__file__).resolve().parent.parent


def run_task(task_dir: Path, hmap: dict):
    doc = json.loads((task_dir / "task.json").read_text())
    prog = minijava.parse_files([task_dir / s for s in doc["source"]])
    facts, part, _ = extract(prog, doc["target"])
    ctx = make_context(hmap, doc["description"])

    def timed(**kwargs):
        t0 = time.monotonic()
        result = synthesize(facts.schema, facts, part, ctx, k_bound=2, **kwargs)
        return result, time.monotonic() - t0

    normal, t_normal = timed()
    cap = max(m for m, _ in normal.levels_explored)
    no_red, t_nr = timed(use_reduction=False, max_relations=cap)
    no_stop, t_ns = timed(early_stop=False, max_relations=cap + 1)

    selections = [{canonical_form(s.graph) for s in r.selected}
                  for r in (normal, no_red, no_stop)]
    return {
        "name": doc["name"],
        "agree": selections[0] == selections[1] == selections[2],
        "explored": [normal.state.generated_total(),
                     no_red.state.generated_total(),
                     no_stop.state.generated_total()],
        "seconds": [round(t_normal, 2), round(t_nr, 2), round(t_ns, 2)],
    }


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("corpus", nargs="?", default=str(REPO / "corpus"))
    args = parser.parse_args()
    corpus = Path(args.corpus)
    hmap = json.loads((corpus / "hmap.json").read_text())

    header = f"{'task':<28} {'agree':<6} {'explored n/nr/nes':<24} seconds n/nr/nes"
    print(header)
    print("-" * len(header))
    totals = [0, 0, 0]
    ok = True
    for task_dir in sorted(corpus.glob("t*/")):
        row = run_task(task_dir, hmap)
        ok = ok and row["agree"]
        totals = [a + b for a, b in zip(totals, row["explored"])]
        print(f"{row['name']:<28} {str(row['agree']):<6} "
              f"{'/'.join(str(n) for n in row['explored']):<24} "
              f"{'/'.join(str(s) for s in row['seconds'])}")
    print(f"{'TOTAL':<28} {str(ok):<6} {'/'.join(str(n) for n in totals)}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
