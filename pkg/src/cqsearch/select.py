"""Dual-metric candidate selection blended with the refinement loop.

Named-entity coverage measures how much of the description's vocabulary the
query's selection condition touches, through a hand-written mapping from
relation attributes to words; structural complexity is relation count plus
atom count. Queries are ranked by coverage first (higher wins), complexity
second (lower wins); synthesis keeps exactly the top equivalence class.

The loop walks levels (m, k) in increasing order and stops early once
coverage has hit its schema-wide upper bound and every query still derivable
from the current refinable frontier is provably no simpler than the
selection; derivation strictly grows complexity, which makes the frontier
minimum a sound bound.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import FK, FactBase, RelationPartition, Schema
from .query import (ConjunctiveQuery, Equality, QueryGraph, StringAtom,
                    canonical_form, from_graph)
from .reduction import ReducedRepresentation, reduce
from .refine import RefinementEngine, RefinementState
from .schema_graph import build_schema_graph


class ContextError(Exception):
    """Unusable entity context (empty description entity set, bad h map)."""


@dataclass(frozen=True)
class EntityContext:
    dictionary: frozenset[str]
    h: dict[tuple[str, str], frozenset[str]]
    entities: frozenset[str]  # named entities of the description

    def __post_init__(self):
        if not self.entities <= self.dictionary:
            raise ContextError("description entities must come from the dictionary")
        for key, words in self.h.items():
            if not words <= self.dictionary:
                raise ContextError(f"h{key!r} maps outside the dictionary")


def extract_entities(description: str, dictionary: Iterable[str]) -> frozenset[str]:
    """Lowercase alphanumeric tokens resolved against the dictionary.

    Plural forms fall back to their singular ('methods' -> 'method').
    """
    words = frozenset(dictionary)
    found = set()
    for token in re.findall(r"[a-z0-9]+", description.lower()):
        if token in words:
            found.add(token)
        elif token.endswith("s") and token[:-1] in words:
            found.add(token[:-1])
        elif token.endswith("es") and token[:-2] in words:
            found.add(token[:-2])
    return frozenset(found)


def load_hmap(doc: dict) -> tuple[frozenset[str], dict[tuple[str, str], frozenset[str]]]:
    try:
        dictionary = frozenset(doc["dictionary"])
        entries = doc["h"]
    except (KeyError, TypeError):
        raise ContextError("hmap document needs 'dictionary' and 'h'")
    h = {}
    for key, words in entries.items():
        rel, _, attr = key.partition(".")
        if not rel or not attr:
            raise ContextError(f"h key {key!r} is not Relation.attribute")
        h[(rel, attr)] = frozenset(words)
    return dictionary, h


def make_context(hmap_doc: dict, description: str) -> EntityContext:
    dictionary, h = load_hmap(hmap_doc)
    return EntityContext(dictionary, h, extract_entities(description, dictionary))


def condition_attrs(q: ConjunctiveQuery) -> frozenset[tuple[str, str]]:
    """(relation, attribute) pairs appearing in the selection condition."""
    pairs = set()
    for atom in q.conditions:
        if isinstance(atom, Equality):
            pairs.add((q.relation_of(atom.pk_alias), atom.pk_attr))
            pairs.add((q.relation_of(atom.fk_alias), atom.fk_attr))
        elif isinstance(atom, StringAtom):
            pairs.add((q.relation_of(atom.alias), atom.attr))
    return frozenset(pairs)


def coverage(q: ConjunctiveQuery, ctx: EntityContext) -> Fraction:
    """Fraction of description entities the condition's attributes reach."""
    if not ctx.entities:
        raise ContextError("no named entities in the description")
    covered = set()
    for pair in condition_attrs(q):
        covered |= ctx.h.get(pair, frozenset()) & ctx.entities
    return Fraction(len(covered), len(ctx.entities))


def complexity(q: ConjunctiveQuery) -> int:
    """Relation occurrences plus atomic conditions."""
    return len(q.product) + len(q.conditions)


def compare(q1: ConjunctiveQuery, q2: ConjunctiveQuery, ctx: EntityContext) -> int:
    """1 if q1 ranks above q2, -1 if below, 0 on a tie."""
    key1 = (coverage(q1, ctx), -complexity(q1))
    key2 = (coverage(q2, ctx), -complexity(q2))
    return (key1 > key2) - (key1 < key2)


@dataclass(frozen=True)
class SelectedQuery:
    graph: QueryGraph
    query: ConjunctiveQuery
    alpha: Fraction
    beta: int


@dataclass
class SynthesisResult:
    selected: tuple[SelectedQuery, ...]
    alpha_max: Fraction | None
    beta_min: int | None
    terminated_early: bool
    levels_explored: tuple[tuple[int, int], ...]
    reduced: ReducedRepresentation
    state: RefinementState

    @property
    def queries(self) -> tuple[ConjunctiveQuery, ...]:
        return tuple(s.query for s in self.selected)


def coverage_upper_bound(schema: Schema, kept: frozenset[str],
                         ctx: EntityContext) -> Fraction:
    """Description entities reachable through kept relations' attributes."""
    if not ctx.entities:
        raise ContextError("no named entities in the description")
    covered = set()
    for rel in kept:
        for a in schema[rel]:
            if a.kind == FK and a.target not in kept:
                continue
            covered |= ctx.h.get((rel, a.name), frozenset()) & ctx.entities
    return Fraction(len(covered), len(ctx.entities))


def _frontier_min_beta(state: RefinementState, m: int, k: int,
                       k_cap: int) -> int | None:
    """Least complexity among refinable graphs future levels can build on."""
    graphs: list[QueryGraph] = []
    for j in range(1, k + 1):
        graphs += state.refinable(m, j)
    if k < min(k_cap, m):
        for j in range(k, min(k_cap, m) + 1):
            graphs += state.refinable(m - 1, j)
    if not graphs:
        return None
    return min(g.complexity() for g in graphs)


def synthesize(schema: Schema, facts: FactBase, part: RelationPartition,
               ctx: EntityContext, k_bound: int = 2, *,
               early_stop: bool = True, use_reduction: bool = True,
               max_relations: int | None = None,
               max_cycle_len: int = 8) -> SynthesisResult:
    if not ctx.entities:
        raise ContextError("no named entities in the description")
    graph = build_schema_graph(schema)
    if use_reduction:
        reduced = reduce(schema, facts, part, graph=graph,
                         max_cycle_len=max_cycle_len)
    else:
        reduced = ReducedRepresentation(frozenset(schema), frozenset())
    kept = reduced.kept
    alpha_bound = coverage_upper_bound(schema, kept, ctx)

    engine = RefinementEngine(schema, graph, facts, part, sorted(kept))
    state = RefinementState()
    alpha_max: Fraction | None = None
    beta_min: int | None = None
    selected: dict = {}
    levels: list[tuple[int, int]] = []
    terminated_early = False

    m_cap = k_bound * len(kept)
    if max_relations is not None:
        m_cap = min(m_cap, max_relations)

    for m in range(1, m_cap + 1):
        if terminated_early:
            break
        for k in range(1, min(k_bound, m) + 1):
            if (m, k) != (1, 1):
                if not state.refinable(m - 1, k) and not state.refinable(m - 1, k - 1):
                    continue
            engine.refine(state, m, k)
            levels.append((m, k))
            for g in state.candidates(m, k):
                q = from_graph(g, schema)
                alpha = coverage(q, ctx)
                beta = g.complexity()
                key = (alpha, -beta)
                if alpha_max is None or key > (alpha_max, -beta_min):
                    alpha_max, beta_min = alpha, beta
                    selected = {canonical_form(g): SelectedQuery(g, q, alpha, beta)}
                elif key == (alpha_max, -beta_min):
                    selected.setdefault(canonical_form(g),
                                        SelectedQuery(g, q, alpha, beta))
            if early_stop and selected and alpha_max == alpha_bound:
                frontier = _frontier_min_beta(state, m, k, k_bound)
                if frontier is None or beta_min <= frontier:
                    terminated_early = True
                    break

    chosen = tuple(selected[c] for c in sorted(selected))
    return SynthesisResult(chosen, alpha_max, beta_min, terminated_early,
                           tuple(levels), reduced, state)
