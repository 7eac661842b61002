import random

from cqsearch.core import (PK, STR, AttributeDecl, FactBase, Relation,
                           Schema, make_partition)
from cqsearch.reduction import DropReason, reduce, reduced_subgraph_size
from cqsearch.schema_graph import build_schema_graph
import gen
from oracles import brute_force_candidates


class TestFig1Reduction:
    def test_modifier_is_the_only_dummy(self, schema, facts, partition):
        red = reduce(schema, facts, partition)
        assert red.kept == {"Method", "Parameter", "Type", "Identifier"}
        assert red.dropped == {("Modifier", DropReason.INDISTINGUISHABLE)}

    def test_identifier_kept_by_distinct_names(self, schema, facts, partition):
        # foo vs f2/f3 names differ, so the name path distinguishes.
        red = reduce(schema, facts, partition)
        assert "Identifier" in red.kept

    def test_target_always_kept(self, schema, facts, partition):
        assert partition.target in reduce(schema, facts, partition).kept

    def test_deterministic(self, schema, facts, partition):
        assert reduce(schema, facts, partition) == reduce(schema, facts, partition)

    def test_report_lines_stable(self, schema, facts, partition):
        lines = reduce(schema, facts, partition).report_lines()
        assert lines == ["keep Identifier", "keep Method", "keep Parameter",
                         "keep Type", "drop Modifier (IndistinguishableActivation)"]

    def test_subgraph_size(self, schema, facts, partition):
        red = reduce(schema, facts, partition)
        g = build_schema_graph(schema)
        nodes, edges = reduced_subgraph_size(g, red.kept)
        assert nodes == 5  # four kept relations plus STR
        # Method->idf/ret, Parameter->idf/type/method, Identifier/Type->STR
        assert edges == 7


class TestDropReasons:
    def test_empty_relation_dropped(self, schema, partition):
        facts = FactBase(schema, [
            Relation("Method", frozenset({("M1", "I1", "T1", "D1"),
                                          ("M2", "I1", "T1", "D1")})),
            Relation("Identifier", frozenset({("I1", "x")})),
            Relation("Type", frozenset({("T1", "int")})),
            Relation("Modifier", frozenset({("D1", "public")})),
            Relation("Parameter", frozenset()),
        ])
        part = make_partition("Method", ["M1"], facts)
        red = reduce(schema, facts, part)
        assert ("Parameter", DropReason.EMPTY_ACTIVATION) in red.dropped

    def test_unreachable_relation(self):
        schema = Schema({
            "A": [AttributeDecl("id", PK)],
            "Island": [AttributeDecl("id", PK), AttributeDecl("s", STR)],
        })
        facts = FactBase(schema, [
            Relation("A", frozenset({("a1",), ("a2",)})),
            Relation("Island", frozenset({("i1", "x")})),
        ])
        part = make_partition("A", ["a1"], facts)
        red = reduce(schema, facts, part)
        assert ("Island", DropReason.UNREACHABLE) in red.dropped
        assert red.kept == {"A"}

    def test_kept_and_dropped_cover_schema(self, schema, facts, partition):
        red = reduce(schema, facts, partition)
        assert red.kept | red.dropped_names() == set(schema)
        assert not red.kept & red.dropped_names()


class TestReductionSoundness:
    def test_candidates_survive_reduction_on_random_instances(self):
        # Wherever unreduced brute force finds a candidate, one using only
        # kept relations exists too (checked through the reduced search in
        # the acceptance suite; here: each brute-force candidate set has a
        # member over kept relations, on small instances).
        rng = random.Random(13)
        found_any = 0
        for _ in range(30):
            schema, facts, part = gen.random_instance(
                rng, max_relations=3, max_fks=2, max_strs=1)
            cands = brute_force_candidates(facts, part, m_max=3, k_max=2)
            if not cands:
                continue
            found_any += 1
            kept = reduce(schema, facts, part).kept
            assert any(all(rel in kept for rel, _ in g.nodes) for g in cands), \
                f"no candidate over kept={sorted(kept)}"
        assert found_any >= 3  # the generator must exercise the property

    def test_dropping_dummies_preserves_candidate_existence(self):
        # Restricting the space to kept relations never flips the verdict.
        rng = random.Random(99)
        for _ in range(20):
            schema, facts, part = gen.random_instance(
                rng, max_relations=3, max_fks=2, max_strs=1)
            kept = reduce(schema, facts, part).kept
            all_cands = brute_force_candidates(facts, part, m_max=3, k_max=2)
            kept_cands = [g for g in all_cands
                          if all(rel in kept for rel, _ in g.nodes)]
            assert bool(all_cands) == bool(kept_cands)
