"""Dummy-relation removal.

A relation is kept iff some undirected relation path from the target both
(a) activates a positive and a negative tuple differently, and (b) empties no
positive's activation. Everything else cannot help separate the partition and
is dropped before query enumeration. The examined path set is the acyclic
paths plus every cycle spliced in once, which covers all paths up to the
repetition-insensitivity of activation.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import FactBase, RelationPartition, Schema, Tuple
from .schema_graph import (SchemaGraph, activated_relation, acyclic_paths,
                           augment_with_cycles, build_schema_graph,
                           compile_path, simple_cycles)


class DropReason(str, Enum):
    EMPTY_ACTIVATION = "EmptyActivation"
    INDISTINGUISHABLE = "IndistinguishableActivation"
    UNREACHABLE = "Unreachable"


@dataclass(frozen=True)
class ReducedRepresentation:
    kept: frozenset[str]
    dropped: frozenset[tuple[str, DropReason]]

    def dropped_names(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.dropped)

    def report_lines(self) -> list[str]:
        lines = [f"keep {name}" for name in sorted(self.kept)]
        lines += [f"drop {name} ({reason.value})" for name, reason in sorted(self.dropped)]
        return lines


def _activations(compiled, tuples, facts: FactBase) -> dict[Tuple, frozenset]:
    return {t: activated_relation(t, None, facts, _compiled=compiled) for t in tuples}


def reduce(schema: Schema, facts: FactBase, part: RelationPartition,
           *, graph: SchemaGraph | None = None,
           max_cycle_len: int = 8) -> ReducedRepresentation:
    g = graph if graph is not None else build_schema_graph(schema)
    cycles = simple_cycles(g, max_cycle_len)
    kept: set[str] = set()
    dropped: set[tuple[str, DropReason]] = set()
    positives = sorted(part.positives)
    negatives = sorted(part.negatives)
    for rel in schema:
        paths = augment_with_cycles(acyclic_paths(g, part.target, rel), g,
                                    cycles=cycles)
        if not paths:
            dropped.add((rel, DropReason.UNREACHABLE))
            continue
        # Short paths first: the keep decision usually falls out of one of them.
        paths.sort(key=lambda p: len(p.steps))
        keep = False
        some_path_total = False  # a path along which every positive activates
        for path in paths:
            compiled = compile_path(path, schema)
            pos_acts = _activations(compiled, positives, facts)
            if any(not act for act in pos_acts.values()):
                continue
            some_path_total = True
            neg_acts = _activations(compiled, negatives, facts)
            if any(pos_acts[tp] != neg_acts[tn]
                   for tp in positives for tn in negatives):
                keep = True
                break
        if keep:
            kept.add(rel)
        elif some_path_total:
            dropped.add((rel, DropReason.INDISTINGUISHABLE))
        else:
            dropped.add((rel, DropReason.EMPTY_ACTIVATION))
    return ReducedRepresentation(frozenset(kept), frozenset(dropped))


def reduced_subgraph_size(g: SchemaGraph, kept: frozenset[str]) -> tuple[int, int]:
    """(nodes, edges) of the schema subgraph induced by kept relations + STR."""
    from .core import STR_NODE
    nodes = len(kept) + 1
    edges = sum(1 for e in g.edges
                if e.src in kept and (e.dst in kept or e.dst == STR_NODE))
    return nodes, edges
