"""Single-rule Datalog rendering and parsing of conjunctive queries.

A query renders as one rule: the head projects every attribute of the first
body atom, equality atoms become shared variables, and string constraints
become str_<predicate>(Var, "literal") atoms. Parsing inverts this; shared
variables are decomposed into primary-key/foreign-key equality atoms through
a deterministic spanning of each variable class.
"""
from __future__ import annotations

import re

from .core import FK, STR, Schema
from .query import (ConjunctiveQuery, Equality, GraphError, StringAtom,
                    PREDICATES, to_graph)


class DatalogError(Exception):
    """Rule text that does not describe a legal conjunctive query."""


def render_datalog(q: ConjunctiveQuery, schema: Schema) -> str:
    classes: dict[tuple[str, int], tuple[str, int]] = {}

    def find(slot):
        while classes.get(slot, slot) != slot:
            slot = classes[slot]
        return slot

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            classes[max(ra, rb)] = min(ra, rb)

    rel_of = dict(q.product)
    for atom in q.conditions:
        if isinstance(atom, Equality):
            fk_slot = (atom.fk_alias, schema.attr_pos(rel_of[atom.fk_alias], atom.fk_attr))
            pk_slot = (atom.pk_alias, 0)
            classes.setdefault(fk_slot, fk_slot)
            classes.setdefault(pk_slot, pk_slot)
            union(fk_slot, pk_slot)

    names: dict[tuple[str, int], str] = {}
    counter = 0
    body = []
    for alias, rel in q.product:
        args = []
        for pos in range(len(schema[rel])):
            root = find((alias, pos))
            if root not in names:
                names[root] = f"V{counter}"
                counter += 1
            args.append(names[root])
        body.append(f"{rel}({', '.join(args)})")
    for atom in q.conditions:
        if isinstance(atom, StringAtom):
            pos = schema.attr_pos(rel_of[atom.alias], atom.attr)
            var = names[find((atom.alias, pos))]
            literal = atom.literal.replace("\\", "\\\\").replace('"', '\\"')
            body.append(f'str_{atom.pred}({var}, "{literal}")')
    head_alias, head_rel = q.product[0]
    head_args = [names[find((head_alias, pos))] for pos in range(len(schema[head_rel]))]
    return f"out({', '.join(head_args)}) :- {', '.join(body)}."


_TOKEN = re.compile(r'''\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)
                          |(?P<str>"(?:[^"\\]|\\.)*")
                          |(?P<punct>:-|[(),.])
                          )''', re.VERBOSE)


def _tokenize(text: str):
    text = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise DatalogError(f"cannot tokenize near {text[pos:pos + 20]!r}")
            break
        pos = m.end()
        if m.lastgroup == "str":
            raw = m.group("str")[1:-1]
            out.append(("str", re.sub(r"\\(.)", r"\1", raw)))
        elif m.lastgroup == "name":
            out.append(("name", m.group("name")))
        elif m.lastgroup == "punct":
            out.append(("punct", m.group("punct")))
    return out


def _parse_atoms(tokens):
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else ("punct", "<end>")

    def expect(kind, value=None):
        nonlocal i
        got_kind, got = peek()
        if got_kind != kind or (value is not None and got != value):
            raise DatalogError(f"expected {value or kind}, got {got!r}")
        i += 1
        return got

    def atom():
        nonlocal i
        name = expect("name")
        expect("punct", "(")
        args = []
        while True:
            kind, value = peek()
            if kind not in ("name", "str"):
                raise DatalogError(f"expected an argument, got {value!r}")
            args.append((kind, value))
            i += 1
            if peek() == ("punct", ","):
                i += 1
                continue
            break
        expect("punct", ")")
        return name, args

    atoms = [atom()]
    expect("punct", ":-")
    while True:
        atoms.append(atom())
        if peek() == ("punct", ","):
            i += 1
            continue
        break
    expect("punct", ".")
    if i != len(tokens):
        raise DatalogError("trailing input after the rule")
    return atoms


def parse_datalog(text: str, schema: Schema) -> ConjunctiveQuery:
    atoms = _parse_atoms(_tokenize(text))
    if not atoms or atoms[0][0] != "out":
        raise DatalogError("rule must start with an out(...) head")
    head_args = atoms[0][1]
    rel_atoms = []
    str_atoms = []
    for name, args in atoms[1:]:
        if name.startswith("str_"):
            pred = name[4:]
            if pred not in PREDICATES:
                raise DatalogError(f"unknown string predicate {name!r}")
            if len(args) != 2 or args[0][0] != "name" or args[1][0] != "str":
                raise DatalogError(f"{name} expects (Variable, \"literal\")")
            str_atoms.append((pred, args[0][1], args[1][1]))
        else:
            if name not in schema:
                raise DatalogError(f"unknown relation {name!r}")
            if any(kind != "name" for kind, _ in args):
                raise DatalogError(f"{name}: literals in relation atoms are not supported")
            if len(args) != len(schema[name]):
                raise DatalogError(
                    f"{name} has arity {len(schema[name])}, got {len(args)} arguments")
            rel_atoms.append((name, [v for _, v in args]))
    if not rel_atoms:
        raise DatalogError("rule needs at least one relation atom")
    if [v for _, v in head_args] != rel_atoms[0][1] or any(k != "name" for k, _ in head_args):
        raise DatalogError("head must project the first body atom's variables")

    product = tuple((f"A{i + 1}", rel) for i, (rel, _) in enumerate(rel_atoms))
    slots_by_var: dict[str, list[tuple[int, int]]] = {}
    for idx, (_, vars_) in enumerate(rel_atoms):
        for pos, var in enumerate(vars_):
            slots_by_var.setdefault(var, []).append((idx, pos))

    conds: list = []
    for var in sorted(slots_by_var):
        slots = slots_by_var[var]
        if len(slots) == 1:
            continue
        pairs = []
        for fi, fp in slots:
            frel = rel_atoms[fi][0]
            attr = schema[frel][fp]
            if attr.kind != FK:
                continue
            for pi, pp in slots:
                if pp == 0 and (fi, fp) != (pi, pp) and rel_atoms[pi][0] == attr.target:
                    pairs.append(((fi, fp), (pi, pp)))
        # Deterministic spanning of the class through legal pk/fk pairs.
        parent = {s: s for s in slots}

        def find(s):
            while parent[s] != s:
                s = parent[s]
            return s

        chosen = []
        for fk_slot, pk_slot in sorted(pairs):
            if find(fk_slot) != find(pk_slot):
                parent[find(fk_slot)] = find(pk_slot)
                chosen.append((fk_slot, pk_slot))
        if len({find(s) for s in slots}) != 1:
            raise DatalogError(
                f"variable {var!r} equates attributes that no pk/fk chain can express")
        for (fi, fp), (pi, _) in chosen:
            frel = rel_atoms[fi][0]
            prel = rel_atoms[pi][0]
            conds.append(Equality(f"A{fi + 1}", schema[frel][fp].name,
                                  f"A{pi + 1}", schema.pk_attr(prel).name))

    seen_slots = set()
    for pred, var, literal in str_atoms:
        slots = slots_by_var.get(var)
        if not slots:
            raise DatalogError(f"string variable {var!r} is not bound by any atom")
        if len(slots) != 1:
            raise DatalogError(f"string variable {var!r} cannot also join relations")
        idx, pos = slots[0]
        rel = rel_atoms[idx][0]
        if schema[rel][pos].kind != STR:
            raise DatalogError(f"{rel} argument {pos} is not a string attribute")
        slot = (idx, schema[rel][pos].name)
        if slot in seen_slots:
            raise DatalogError(f"duplicate string constraint on {rel}.{slot[1]}")
        seen_slots.add(slot)
        conds.append(StringAtom(f"A{idx + 1}", schema[rel][pos].name, pred, literal))

    query = ConjunctiveQuery(product, tuple(conds))
    try:
        to_graph(query, schema)
    except GraphError as exc:
        raise DatalogError(str(exc)) from exc
    return query
