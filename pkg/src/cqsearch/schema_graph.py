"""Schema graph and undirected relation paths.

The schema graph has one node per relation plus the STR sink, and one labeled
edge per foreign key / string attribute. Relation paths walk foreign-key edges
in either direction, recording the direction; chaining key equalities along a
path from a start tuple yields its activated tuple set, the workhorse of
dummy-relation detection.

Cycle handling follows the repetition-insensitivity property: activation is
identical whether a cycle is walked once or many times, so path enumeration is
acyclic paths plus each cycle spliced in once. "Cycle" here includes the
back-and-forth traversal of a single foreign-key edge, which the definition of
activation makes meaningful (follow the key, then collect all referrers).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .core import FK, STR, STR_NODE, FactBase, Schema, Tuple


@dataclass(frozen=True)
class SchemaEdge:
    src: str
    dst: str  # relation name or STR_NODE
    attr: str


class PathStep(NamedTuple):
    attr: str
    direction: int  # +1 follows the foreign key, -1 walks it backwards
    next: str


@dataclass(frozen=True)
class RelationPath:
    start: str
    steps: tuple[PathStep, ...]

    @property
    def end(self) -> str:
        return self.steps[-1].next if self.steps else self.start

    def nodes(self) -> tuple[str, ...]:
        return (self.start,) + tuple(s.next for s in self.steps)

    def __str__(self) -> str:
        out = [self.start]
        for s in self.steps:
            arrow = "+" if s.direction == 1 else "-"
            out.append(f"-({s.attr},{arrow})-> {s.next}")
        return " ".join(out)


class SchemaGraph:
    def __init__(self, schema: Schema):
        self.schema = schema
        self.nodes: tuple[str, ...] = tuple(sorted(schema)) + (STR_NODE,)
        edges = []
        for rel in schema:
            for a in schema[rel]:
                if a.kind == FK:
                    edges.append(SchemaEdge(rel, a.target, a.name))
                elif a.kind == STR:
                    edges.append(SchemaEdge(rel, STR_NODE, a.name))
        self.edges: tuple[SchemaEdge, ...] = tuple(
            sorted(edges, key=lambda e: (e.src, e.dst, e.attr)))
        self.fk_edges: tuple[SchemaEdge, ...] = tuple(
            e for e in self.edges if e.dst != STR_NODE)
        self._incident: dict[str, list[SchemaEdge]] = {r: [] for r in schema}
        for e in self.fk_edges:
            self._incident[e.src].append(e)
            if e.dst != e.src:
                self._incident[e.dst].append(e)
        self._steps: dict[str, tuple[PathStep, ...]] = {}
        for rel in schema:
            steps = []
            for e in self._incident[rel]:
                if e.src == rel:
                    steps.append(PathStep(e.attr, 1, e.dst))
                if e.dst == rel:
                    steps.append(PathStep(e.attr, -1, e.src))
            self._steps[rel] = tuple(sorted(steps))

    def incident(self, rel: str) -> list[SchemaEdge]:
        """Foreign-key edges touching ``rel`` (either endpoint)."""
        return self._incident[rel]

    def steps_from(self, rel: str) -> tuple[PathStep, ...]:
        """Every legal single step out of ``rel``, in deterministic order."""
        return self._steps[rel]

    def has_step(self, rel: str, step: PathStep) -> bool:
        if step.direction == 1:
            return SchemaEdge(rel, step.next, step.attr) in self._edge_set()
        return SchemaEdge(step.next, rel, step.attr) in self._edge_set()

    def _edge_set(self) -> frozenset[SchemaEdge]:
        cached = getattr(self, "_edge_set_cache", None)
        if cached is None:
            cached = frozenset(self.fk_edges)
            self._edge_set_cache = cached
        return cached

    def to_dot(self) -> str:
        lines = ["digraph schema {"]
        for n in self.nodes:
            shape = "box" if n != STR_NODE else "ellipse"
            lines.append(f'  "{n}" [shape={shape}];')
        for e in self.edges:
            lines.append(f'  "{e.src}" -> "{e.dst}" [label="{e.attr}"];')
        lines.append("}")
        return "\n".join(lines)


def build_schema_graph(schema: Schema) -> SchemaGraph:
    return SchemaGraph(schema)


def validate_path(g: SchemaGraph, path: RelationPath) -> bool:
    """Replay a path against the schema graph's edge set."""
    cur = path.start
    if cur not in g.schema:
        return False
    for step in path.steps:
        if step.next not in g.schema or not g.has_step(cur, step):
            return False
        cur = step.next
    return True


def acyclic_paths(g: SchemaGraph, src: str, dst: str) -> list[RelationPath]:
    """All simple undirected relation paths src -> dst.

    src == dst yields just the zero-step path (cycles through src are handled
    by augmentation).
    """
    if src == dst:
        return [RelationPath(src, ())]
    out: list[RelationPath] = []

    def walk(cur: str, visited: set[str], steps: list[PathStep]):
        for step in g.steps_from(cur):
            if step.next in visited:
                continue
            steps.append(step)
            if step.next == dst:
                out.append(RelationPath(src, tuple(steps)))
            else:
                visited.add(step.next)
                walk(step.next, visited, steps)
                visited.remove(step.next)
            steps.pop()

    walk(src, {src}, [])
    out.sort(key=lambda p: p.steps)
    return out


@dataclass(frozen=True)
class Cycle:
    """A closed walk with distinct interior nodes, in canonical form.

    Covers proper simple cycles, single self-loop steps, and the two-step
    back-and-forth over one edge.
    """
    anchor: str
    steps: tuple[PathStep, ...]

    def nodes(self) -> frozenset[str]:
        return frozenset((self.anchor,) + tuple(s.next for s in self.steps))

    def rotated_to(self, node: str) -> tuple[PathStep, ...]:
        order = [self.anchor] + [s.next for s in self.steps]
        idx = order.index(node)
        return self.steps[idx:] + self.steps[:idx]


def simple_cycles(g: SchemaGraph, max_len: int = 8) -> list[Cycle]:
    """Enumerate cycles up to ``max_len`` steps, one canonical walk each."""
    raw: set[tuple[str, tuple[PathStep, ...]]] = set()

    # Echo cycles: out and straight back over the same edge.
    for e in g.fk_edges:
        raw.add((e.src, (PathStep(e.attr, 1, e.dst), PathStep(e.attr, -1, e.src))))
        raw.add((e.dst, (PathStep(e.attr, -1, e.src), PathStep(e.attr, 1, e.dst))))
        if e.src == e.dst:  # self-loop: single steps are closed walks too
            raw.add((e.src, (PathStep(e.attr, 1, e.dst),)))
            raw.add((e.src, (PathStep(e.attr, -1, e.src),)))

    # Proper cycles: distinct edges, no repeated interior node.
    def walk(start: str, cur: str, steps: list[PathStep],
             used: set[SchemaEdge], visited: set[str]):
        if len(steps) >= max_len:
            return
        for step in g.steps_from(cur):
            edge = (SchemaEdge(cur, step.next, step.attr) if step.direction == 1
                    else SchemaEdge(step.next, cur, step.attr))
            if edge in used:
                continue
            if step.next == start:
                if len(steps) >= 1 and step.next != cur:
                    raw.add((start, tuple(steps + [step])))
                continue
            if step.next in visited:
                continue
            steps.append(step)
            used.add(edge)
            visited.add(step.next)
            walk(start, step.next, steps, used, visited)
            visited.remove(step.next)
            used.remove(edge)
            steps.pop()

    for start in sorted(g.schema):
        walk(start, start, [], set(), {start})

    # Deduplicate rotations of the same closed walk: normalize every cycle to
    # its lexicographically least (anchor, steps) rotation. Reversed
    # traversals are distinct cycles on purpose: activation follows key
    # direction, so walking a cycle the other way constrains differently
    # (back-and-forth echoes coincide with their reversal and dedupe anyway).
    canon: dict[tuple, Cycle] = {}
    for anchor, steps in raw:
        variants = []
        order = [anchor] + [s.next for s in steps]
        for i in range(len(steps)):
            variants.append((order[i], steps[i:] + steps[:i]))
        best = min(variants)
        canon[best] = Cycle(best[0], best[1])
    return sorted(canon.values(), key=lambda c: (c.anchor, c.steps))


def augment_with_cycles(paths: Iterable[RelationPath], g: SchemaGraph,
                        max_cycle_len: int = 8,
                        cycles: list[Cycle] | None = None) -> list[RelationPath]:
    """Each input path, plus each cycle spliced once at its first shared node."""
    if cycles is None:
        cycles = simple_cycles(g, max_cycle_len)
    out: list[RelationPath] = []
    seen: set[tuple] = set()

    def emit(p: RelationPath):
        key = (p.start, p.steps)
        if key not in seen:
            seen.add(key)
            out.append(p)

    for path in paths:
        emit(path)
        nodes = path.nodes()
        for cyc in cycles:
            cyc_nodes = cyc.nodes()
            splice_at = next((i for i, n in enumerate(nodes) if n in cyc_nodes), None)
            if splice_at is None:
                continue
            loop = cyc.rotated_to(nodes[splice_at])
            steps = path.steps[:splice_at] + loop + path.steps[splice_at:]
            emit(RelationPath(path.start, steps))
    return out


def compile_path(path: RelationPath, schema: Schema) -> list[tuple[int, int, str]]:
    """Per step: (direction, attribute position, next relation)."""
    compiled = []
    cur = path.start
    for step in path.steps:
        holder = cur if step.direction == 1 else step.next
        compiled.append((step.direction, schema.attr_pos(holder, step.attr), step.next))
        cur = step.next
    return compiled


def activated_relation(t0: Tuple, path: RelationPath, facts: FactBase,
                       _compiled=None) -> frozenset[Tuple]:
    """Terminal tuples reachable from ``t0`` by chaining key equalities.

    The zero-step path returns {t0}.
    """
    steps = _compiled if _compiled is not None else compile_path(path, facts.schema)
    frontier: set[Tuple] = {t0}
    for direction, pos, next_rel in steps:
        nxt: set[Tuple] = set()
        if direction == 1:
            for t in frontier:
                hit = facts.pk_lookup(next_rel, t[pos])
                if hit is not None:
                    nxt.add(hit)
        else:
            for t in frontier:
                nxt.update(facts.by_attr(next_rel, pos, t[0]))
        frontier = nxt
        if not frontier:
            break
    return frozenset(frontier)
