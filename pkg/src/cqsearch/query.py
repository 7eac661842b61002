"""Conjunctive queries and their graph form.

A query is a projection of a selection over a product of aliased relations;
its graph form has one node per alias, one labeled edge per pk/fk equality
atom, and one (predicate, literal) decoration per constrained string slot.
The two forms are interconvertible up to alias renaming; canonical forms make
that renaming irrelevant for deduplication and golden comparisons.

The projection head is always the first alias and names the partition target.
"""
from __future__ import annotations

from dataclasses import dataclass
from .core import FK, STR, Schema

# String predicates, strongest first. equal implies prefix and suffix,
# either of which implies contain.
PREDICATES = ("equal", "prefix", "suffix", "contain")


class GraphError(Exception):
    """Query graph edge or constraint that the schema does not license."""


def pred_holds(pred: str, value: str, literal: str) -> bool:
    if pred == "equal":
        return value == literal
    if pred == "prefix":
        return value.startswith(literal)
    if pred == "suffix":
        return value.endswith(literal)
    if pred == "contain":
        return literal in value
    raise ValueError(f"unknown string predicate {pred!r}")


@dataclass(frozen=True, order=True)
class Equality:
    """fk_alias.fk_attr = pk_alias.pk_attr (the referenced primary key)."""
    fk_alias: str
    fk_attr: str
    pk_alias: str
    pk_attr: str


@dataclass(frozen=True, order=True)
class StringAtom:
    alias: str
    attr: str
    pred: str
    literal: str


Atom = Equality | StringAtom


@dataclass(frozen=True)
class ConjunctiveQuery:
    product: tuple[tuple[str, str], ...]  # (alias, relation), head first
    conditions: tuple[Atom, ...]

    @property
    def head_alias(self) -> str:
        return self.product[0][0]

    @property
    def head_relation(self) -> str:
        return self.product[0][1]

    def relation_of(self, alias: str) -> str:
        for a, r in self.product:
            if a == alias:
                return r
        raise GraphError(f"unknown alias {alias!r}")


@dataclass(frozen=True)
class QueryGraph:
    nodes: tuple[tuple[str, str], ...]  # (relation, alias), head first
    eq_edges: frozenset[tuple[str, str, str]]  # (fk_alias, pk_alias, fk_attr)
    str_edges: tuple[tuple[str, str, str, str], ...]  # (alias, attr, pred, literal), sorted

    @staticmethod
    def empty() -> "QueryGraph":
        return QueryGraph((), frozenset(), ())

    @property
    def head_alias(self) -> str:
        return self.nodes[0][1]

    @property
    def head_relation(self) -> str:
        return self.nodes[0][0]

    def aliases(self) -> tuple[str, ...]:
        return tuple(a for _, a in self.nodes)

    def relation_of(self, alias: str) -> str:
        for r, a in self.nodes:
            if a == alias:
                return r
        raise GraphError(f"unknown alias {alias!r}")

    def constrained_slots(self) -> frozenset[tuple[str, str]]:
        return frozenset((a, attr) for a, attr, _, _ in self.str_edges)

    def with_node(self, relation: str, alias: str,
                  edges: frozenset[tuple[str, str, str]]) -> "QueryGraph":
        return QueryGraph(self.nodes + ((relation, alias),),
                          self.eq_edges | edges, self.str_edges)

    def with_constraint(self, alias: str, attr: str, pred: str, literal: str) -> "QueryGraph":
        extra = (alias, attr, pred, literal)
        return QueryGraph(self.nodes, self.eq_edges,
                          tuple(sorted(self.str_edges + (extra,))))

    def size(self) -> tuple[int, int, int]:
        """(relations, equality constraints, string constraints)."""
        return (len(self.nodes), len(self.eq_edges), len(self.str_edges))

    def complexity(self) -> int:
        return len(self.nodes) + len(self.eq_edges) + len(self.str_edges)


def multiplicity(g: QueryGraph, relation: str) -> int:
    return sum(1 for r, _ in g.nodes if r == relation)


def max_multiplicity(g: QueryGraph) -> int:
    counts: dict[str, int] = {}
    for r, _ in g.nodes:
        counts[r] = counts.get(r, 0) + 1
    return max(counts.values(), default=0)


def _check_edge(schema: Schema, fk_rel: str, fk_attr: str, pk_rel: str):
    attr = schema.attr(fk_rel, fk_attr)
    if attr.kind != FK or attr.target != pk_rel:
        raise GraphError(
            f"{fk_rel}.{fk_attr} is not a foreign key referencing {pk_rel}")


def _check_string_slot(schema: Schema, rel: str, attr: str):
    if schema.attr(rel, attr).kind != STR:
        raise GraphError(f"{rel}.{attr} is not a string attribute")


def to_graph(q: ConjunctiveQuery, schema: Schema) -> QueryGraph:
    nodes = tuple((r, a) for a, r in q.product)
    rel_of = dict(q.product)
    eq = set()
    strs = []
    for atom in q.conditions:
        if isinstance(atom, Equality):
            _check_edge(schema, rel_of[atom.fk_alias], atom.fk_attr, rel_of[atom.pk_alias])
            if schema.pk_attr(rel_of[atom.pk_alias]).name != atom.pk_attr:
                raise GraphError(
                    f"{atom.pk_alias}.{atom.pk_attr} is not the primary key of "
                    f"{rel_of[atom.pk_alias]}")
            eq.add((atom.fk_alias, atom.pk_alias, atom.fk_attr))
        else:
            _check_string_slot(schema, rel_of[atom.alias], atom.attr)
            if atom.pred not in PREDICATES:
                raise GraphError(f"unknown predicate {atom.pred!r}")
            strs.append((atom.alias, atom.attr, atom.pred, atom.literal))
    return QueryGraph(nodes, frozenset(eq), tuple(sorted(strs)))


def from_graph(g: QueryGraph, schema: Schema) -> ConjunctiveQuery:
    """Induced query with fresh aliases A1..Am in node order."""
    rename = {alias: f"A{i + 1}" for i, (_, alias) in enumerate(g.nodes)}
    rel_of = {a: r for r, a in g.nodes}
    product = tuple((rename[a], r) for r, a in g.nodes)
    conds: list[Atom] = []
    for fk_alias, pk_alias, attr in sorted(g.eq_edges):
        _check_edge(schema, rel_of[fk_alias], attr, rel_of[pk_alias])
        conds.append(Equality(rename[fk_alias], attr, rename[pk_alias],
                              schema.pk_attr(rel_of[pk_alias]).name))
    for alias, attr, pred, literal in g.str_edges:
        _check_string_slot(schema, rel_of[alias], attr)
        conds.append(StringAtom(rename[alias], attr, pred, literal))
    order = {rename[a]: i for i, (_, a) in enumerate(g.nodes)}
    conds.sort(key=lambda c: ((order[c.fk_alias], c.fk_attr, order[c.pk_alias], 0)
                              if isinstance(c, Equality)
                              else (order[c.alias], c.attr, 0, 1)))
    return ConjunctiveQuery(product, tuple(conds))


# --- canonical form -------------------------------------------------------
#
# Graphs that differ only by alias renaming must collapse to one key. The head
# stays pinned at position 0; remaining nodes are ordered by branch-and-bound
# over candidate placements, keeping only orders that minimize the encoding.

def canonical_form(g: QueryGraph):
    n = len(g.nodes)
    if n == 0:
        return ("empty",)
    alias_rel = {a: r for r, a in g.nodes}
    out_edges: dict[str, list] = {a: [] for a in alias_rel}
    for fk_alias, pk_alias, attr in g.eq_edges:
        out_edges[fk_alias].append(("f", attr, pk_alias))
        out_edges[pk_alias].append(("p", attr, fk_alias))
    strs: dict[str, list] = {a: [] for a in alias_rel}
    for alias, attr, pred, literal in g.str_edges:
        strs[alias].append((attr, pred, literal))

    aliases = [a for _, a in g.nodes]
    head = aliases[0]

    def node_key(alias, placed_index):
        # Edges to already-placed nodes, by placed position; string constraints.
        edges = sorted((kind, attr, placed_index[other])
                       for kind, attr, other in out_edges[alias]
                       if other in placed_index)
        return (alias_rel[alias], tuple(edges), tuple(sorted(strs[alias])))

    best: list = [None]

    def place(order, placed_index, encoding):
        if best[0] is not None and tuple(encoding) > best[0][:len(encoding)]:
            return
        if len(order) == n:
            enc = tuple(encoding)
            if best[0] is None or enc < best[0]:
                best[0] = enc
            return
        remaining = [a for a in aliases if a not in placed_index]
        keyed = [(node_key(a, placed_index), a) for a in remaining]
        min_key = min(k for k, _ in keyed)
        for key, a in keyed:
            if key != min_key:
                continue
            placed_index[a] = len(order)
            order.append(a)
            encoding.append(key)
            place(order, placed_index, encoding)
            encoding.pop()
            order.pop()
            del placed_index[a]

    head_key = node_key(head, {})
    place([head], {head: 0}, [head_key])
    return best[0]


# --- relational-algebra rendering -----------------------------------------

def render_ra(q: ConjunctiveQuery) -> str:
    head = q.head_alias
    product = " × ".join(f"ρ_{a}({r})" for a, r in q.product)
    if not q.conditions:
        return f"Π_({head}.*)(σ_true({product}))"
    parts = []
    for atom in q.conditions:
        if isinstance(atom, Equality):
            parts.append(f"({atom.fk_alias}.{atom.fk_attr} = {atom.pk_alias}.{atom.pk_attr})")
        else:
            parts.append(f'{atom.pred}({atom.alias}.{atom.attr}, "{atom.literal}")')
    theta = " ∧ ".join(parts)
    return f"Π_({head}.*)(σ_Θ({product})) where Θ := {theta}"
