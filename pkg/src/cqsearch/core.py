"""Typed relational facts: schemas, relations, tuples, and target partitions.

A schema types every relation attribute as a primary key (always attribute 0),
a foreign key into another relation, or a string. Facts are immutable once
loaded; referential integrity is checked at ingestion, and all downstream
machinery (path activation, query evaluation) relies on that.

Values are plain Python strings for both entity ids and text; the attribute
kind carries the distinction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

PK = "pk"
FK = "fk"
STR = "str"

# Reserved schema-graph node name for the string sink.
STR_NODE = "STR"

Tuple = tuple[str, ...]


class SchemaError(Exception):
    """Malformed schema document (names, keys, foreign-key targets)."""


class FactError(Exception):
    """Facts that do not fit the schema (arity, kinds, dangling keys)."""


class PartitionError(Exception):
    """Degenerate or inconsistent positive/negative split of the target."""


@dataclass(frozen=True)
class AttributeDecl:
    name: str
    kind: str  # PK | FK | STR
    target: str | None = None  # FK only: referenced relation

    def __post_init__(self):
        if self.kind not in (PK, FK, STR):
            raise SchemaError(f"unknown attribute kind {self.kind!r}")
        if (self.kind == FK) != (self.target is not None):
            raise SchemaError(f"attribute {self.name!r}: target iff foreign key")


class Schema(Mapping[str, tuple[AttributeDecl, ...]]):
    """Ordered mapping relation name -> attribute declarations.

    Every relation has exactly one primary key and it sits at position 0.
    """

    def __init__(self, relations: Mapping[str, Iterable[AttributeDecl]]):
        rels: dict[str, tuple[AttributeDecl, ...]] = {}
        for name, attrs in relations.items():
            attrs = tuple(attrs)
            if name in rels:
                raise SchemaError(f"duplicate relation {name!r}")
            if name == STR_NODE:
                raise SchemaError(f"{STR_NODE!r} is reserved for the string sink")
            if not attrs:
                raise SchemaError(f"relation {name!r} has no attributes")
            pks = [a for a in attrs if a.kind == PK]
            if len(pks) != 1:
                raise SchemaError(f"relation {name!r} needs exactly one primary key, has {len(pks)}")
            if attrs[0].kind != PK:
                raise SchemaError(f"relation {name!r}: primary key must be attribute 0")
            seen = set()
            for a in attrs:
                if a.name in seen:
                    raise SchemaError(f"relation {name!r}: duplicate attribute {a.name!r}")
                seen.add(a.name)
            rels[name] = attrs
        for name, attrs in rels.items():
            for a in attrs:
                if a.kind == FK and a.target not in rels:
                    raise SchemaError(
                        f"{name}.{a.name}: foreign key target {a.target!r} not in schema")
        self._rels = rels
        self._pos = {(name, a.name): i
                     for name, attrs in rels.items()
                     for i, a in enumerate(attrs)}

    def __getitem__(self, name: str) -> tuple[AttributeDecl, ...]:
        return self._rels[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._rels)

    def __len__(self) -> int:
        return len(self._rels)

    def attr_pos(self, rel: str, attr: str) -> int:
        got = self._pos.get((rel, attr))
        if got is None:
            raise SchemaError(f"relation {rel!r} has no attribute {attr!r}")
        return got

    def attr(self, rel: str, name: str) -> AttributeDecl:
        return self._rels[rel][self.attr_pos(rel, name)]

    def pk_attr(self, rel: str) -> AttributeDecl:
        return self._rels[rel][0]

    def fk_attrs(self, rel: str) -> tuple[AttributeDecl, ...]:
        return tuple(a for a in self._rels[rel] if a.kind == FK)

    def string_attrs(self, rel: str) -> tuple[AttributeDecl, ...]:
        return tuple(a for a in self._rels[rel] if a.kind == STR)

    @staticmethod
    def from_doc(doc: dict) -> "Schema":
        try:
            entries = doc["relations"]
        except (KeyError, TypeError):
            raise SchemaError("schema document must have a 'relations' list")
        rels: dict[str, list[AttributeDecl]] = {}
        for entry in entries:
            name = entry.get("name")
            if not isinstance(name, str):
                raise SchemaError(f"relation entry without a name: {entry!r}")
            if name in rels:
                raise SchemaError(f"duplicate relation {name!r}")
            attrs = []
            for a in entry.get("attributes", []):
                kind = a.get("kind")
                if kind not in (PK, FK, STR):
                    raise SchemaError(f"{name}.{a.get('name')}: unknown kind {kind!r}")
                attrs.append(AttributeDecl(a["name"], kind, a.get("target")))
            rels[name] = attrs
        return Schema(rels)

    def to_doc(self) -> dict:
        out = []
        for name, attrs in self._rels.items():
            entry = {"name": name, "attributes": []}
            for a in attrs:
                rec = {"name": a.name, "kind": a.kind}
                if a.kind == FK:
                    rec["target"] = a.target
                entry["attributes"].append(rec)
            out.append(entry)
        return {"relations": out}


@dataclass(frozen=True)
class Relation:
    name: str
    tuples: frozenset[Tuple]

    def __len__(self) -> int:
        return len(self.tuples)


@dataclass(frozen=True)
class RelationPartition:
    """Positive/negative split of the target relation's tuples.

    Disjoint, jointly exhaustive over the target, and both sides non-empty.
    """
    target: str
    positives: frozenset[Tuple]
    negatives: frozenset[Tuple]


class FactBase(Mapping[str, Relation]):
    """Validated relations with lazy per-attribute indexes.

    Immutable after construction; safe to share. Every declared relation is
    present (possibly empty), every foreign-key value resolves.
    """

    def __init__(self, schema: Schema, relations: Iterable[Relation]):
        self.schema = schema
        rels: dict[str, Relation] = {}
        for r in relations:
            if r.name not in schema:
                raise FactError(f"facts for undeclared relation {r.name!r}")
            if r.name in rels:
                raise FactError(f"duplicate relation {r.name!r} in facts")
            rels[r.name] = r
        for name in schema:
            rels.setdefault(name, Relation(name, frozenset()))
        self._rels = {name: rels[name] for name in schema}
        self._pk: dict[str, dict[str, Tuple]] = {}
        self._by_attr: dict[tuple[str, int], dict[str, tuple[Tuple, ...]]] = {}
        self._validate()

    def _validate(self):
        for name, rel in self._rels.items():
            attrs = self.schema[name]
            pk_index: dict[str, Tuple] = {}
            for t in rel.tuples:
                if len(t) != len(attrs):
                    raise FactError(
                        f"{name}: tuple {t!r} has arity {len(t)}, schema says {len(attrs)}")
                for v, a in zip(t, attrs):
                    if not isinstance(v, str):
                        raise FactError(f"{name}.{a.name}: non-string value {v!r}")
                    if a.kind in (PK, FK) and not v:
                        raise FactError(f"{name}.{a.name}: empty key value in {t!r}")
                if t[0] in pk_index:
                    raise FactError(f"{name}: duplicate primary key {t[0]!r}")
                pk_index[t[0]] = t
            self._pk[name] = pk_index
        for name, rel in self._rels.items():
            for i, a in enumerate(self.schema[name]):
                if a.kind != FK:
                    continue
                target_index = self._pk[a.target]
                for t in rel.tuples:
                    if t[i] not in target_index:
                        raise FactError(
                            f"{name}.{a.name}: dangling foreign key {t[i]!r} in {t!r}")

    def __getitem__(self, name: str) -> Relation:
        return self._rels[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._rels)

    def __len__(self) -> int:
        return len(self._rels)

    def tuples(self, rel: str) -> frozenset[Tuple]:
        return self._rels[rel].tuples

    def pk_lookup(self, rel: str, value: str) -> Tuple | None:
        return self._pk[rel].get(value)

    def by_attr(self, rel: str, pos: int, value: str) -> tuple[Tuple, ...]:
        """All tuples of ``rel`` whose attribute at ``pos`` equals ``value``."""
        key = (rel, pos)
        index = self._by_attr.get(key)
        if index is None:
            built: dict[str, list[Tuple]] = {}
            for t in self._rels[rel].tuples:
                built.setdefault(t[pos], []).append(t)
            index = {v: tuple(ts) for v, ts in built.items()}
            self._by_attr[key] = index
        return index.get(value, ())


def load_facts(schema_doc: dict, facts_doc: dict) -> tuple[Schema, FactBase]:
    """Parse and validate the schema.json / facts.json documents."""
    schema = Schema.from_doc(schema_doc)
    if not isinstance(facts_doc, dict):
        raise FactError("facts document must be an object of relation -> rows")
    relations = []
    for name, rows in facts_doc.items():
        tuples = set()
        for row in rows:
            if not isinstance(row, list):
                raise FactError(f"{name}: row {row!r} is not a list")
            tuples.add(tuple(row))
        relations.append(Relation(name, frozenset(tuples)))
    return schema, FactBase(schema, relations)


def make_partition(target: str, positive_ids: Iterable[str],
                   facts: FactBase) -> RelationPartition:
    """Split the target relation by primary key; everything unlisted is negative."""
    if target not in facts:
        raise PartitionError(f"unknown target relation {target!r}")
    wanted = set(positive_ids)
    positives = set()
    for pid in sorted(wanted):
        t = facts.pk_lookup(target, pid)
        if t is None:
            raise PartitionError(f"{target}: no tuple with primary key {pid!r}")
        positives.add(t)
    negatives = facts.tuples(target) - positives
    if not positives:
        raise PartitionError("no positive tuples")
    if not negatives:
        raise PartitionError("no negative tuples: every target tuple is positive")
    return RelationPartition(target, frozenset(positives), frozenset(negatives))


def partition_from_doc(doc: dict, facts: FactBase) -> RelationPartition:
    try:
        target = doc["target"]
        positive = doc["positive"]
    except (KeyError, TypeError):
        raise PartitionError("partition document needs 'target' and 'positive'")
    return make_partition(target, positive, facts)
