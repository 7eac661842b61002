import random
from fractions import Fraction

import pytest

from cqsearch.core import FactBase, Relation, make_partition
from cqsearch.evaluator import evaluate
from cqsearch.query import (ConjunctiveQuery, Equality, StringAtom,
                            canonical_form)
from cqsearch.select import (ContextError, EntityContext, compare, complexity,
                             coverage, coverage_upper_bound, extract_entities,
                             load_hmap, make_context, synthesize)
from conftest import (MOTIVATING_DESCRIPTION, fig1c_graph, fig1c_query,
                      fig1_schema)
import gen


def foo_query():
    """Method joined to its identifier, name pinned to "foo"."""
    return ConjunctiveQuery(
        (("A1", "Method"), ("A2", "Identifier")),
        (Equality("A1", "idf_id", "A2", "id"),
         StringAtom("A2", "name", "equal", "foo")))


class TestExtractEntities:
    def test_motivating_sentence(self, hmap_doc):
        dictionary, _ = load_hmap(hmap_doc)
        got = extract_entities(MOTIVATING_DESCRIPTION, dictionary)
        assert got == {"method", "type", "parameter", "return"}

    def test_empty_description(self, hmap_doc):
        dictionary, _ = load_hmap(hmap_doc)
        assert extract_entities("", dictionary) == frozenset()

    def test_tokenize_and_intersect(self):
        got = extract_entities("public static methods",
                               ["method", "static", "modifier"])
        assert got == {"method", "static"}

    def test_plural_es_fallback(self):
        assert extract_entities("Find the classes", ["class"]) == {"class"}


class TestCoverage:
    def test_motivating_query_covers_everything(self, context):
        assert coverage(fig1c_query(), context) == 1

    def test_foo_query_covers_one_quarter(self, context):
        assert coverage(foo_query(), context) == Fraction(1, 4)

    def test_empty_condition_covers_nothing(self, context):
        q = ConjunctiveQuery((("A1", "Method"),), ())
        assert coverage(q, context) == 0

    def test_requires_entities(self, hmap_doc):
        dictionary, h = load_hmap(hmap_doc)
        ctx = EntityContext(dictionary, h, frozenset())
        with pytest.raises(ContextError):
            coverage(fig1c_query(), ctx)


class TestComplexity:
    def test_motivating_query_is_nine(self):
        assert complexity(fig1c_query()) == 9

    def test_four_relations_six_atoms_is_ten(self):
        q = ConjunctiveQuery(
            fig1c_query().product,
            fig1c_query().conditions + (StringAtom("A2", "name", "contain", "C"),))
        assert complexity(q) == 10

    def test_bare_query_is_one(self):
        assert complexity(ConjunctiveQuery((("A1", "Method"),), ())) == 1


class TestCompare:
    def test_coverage_dominates(self, context):
        assert compare(fig1c_query(), foo_query(), context) == 1
        assert compare(foo_query(), fig1c_query(), context) == -1

    def test_complexity_breaks_ties(self, context):
        heavier = ConjunctiveQuery(
            fig1c_query().product,
            fig1c_query().conditions + (StringAtom("A4", "name", "contain", "L"),))
        assert coverage(heavier, context) == coverage(fig1c_query(), context)
        assert compare(fig1c_query(), heavier, context) == 1

    def test_reflexive_tie(self, context):
        assert compare(fig1c_query(), fig1c_query(), context) == 0

    def test_total_preorder_on_random_queries(self, facts, context):
        rng = random.Random(37)
        qs = []
        from cqsearch.query import from_graph
        for _ in range(12):
            g = gen.random_query_graph(rng, facts.schema, m_max=3)
            qs.append(from_graph(g, facts.schema))
        for a in qs:
            for b in qs:
                assert compare(a, b, context) == -compare(b, a, context)
                for c in qs:
                    if compare(a, b, context) >= 0 and compare(b, c, context) >= 0:
                        assert compare(a, c, context) >= 0


class TestSynthesize:
    def test_motivating_instance(self, schema, facts, partition, context):
        result = synthesize(schema, facts, partition, context, k_bound=2)
        assert result.alpha_max == 1
        assert result.beta_min == 9
        assert result.terminated_early
        canons = {canonical_form(s.graph) for s in result.selected}
        assert canons == {canonical_form(fig1c_graph())}

    def test_upper_bound_on_motivating(self, schema, facts, partition, context):
        assert coverage_upper_bound(schema, frozenset(schema) - {"Modifier"},
                                    context) == 1

    def test_no_early_stop_same_selection(self, schema, facts, partition, context):
        # Capped at the same depth for both runs; the eager run stops at (5,2).
        eager = synthesize(schema, facts, partition, context, k_bound=2,
                           max_relations=5)
        full = synthesize(schema, facts, partition, context, k_bound=2,
                          early_stop=False, max_relations=5)
        assert not full.terminated_early
        assert (eager.alpha_max, eager.beta_min) == (full.alpha_max, full.beta_min)
        assert {canonical_form(s.graph) for s in eager.selected} == \
            {canonical_form(s.graph) for s in full.selected}
        assert full.state.generated_total() >= eager.state.generated_total()

    def test_unseparable_instance_returns_empty(self, hmap_doc):
        schema = fig1_schema()
        facts = FactBase(schema, [
            Relation("Method", frozenset({("M1", "I1", "T1", "D1"),
                                          ("M2", "I1", "T1", "D1")})),
            Relation("Identifier", frozenset({("I1", "go")})),
            Relation("Type", frozenset({("T1", "int")})),
            Relation("Modifier", frozenset({("D1", "public")})),
            Relation("Parameter", frozenset()),
        ])
        part = make_partition("Method", ["M1"], facts)
        ctx = make_context(hmap_doc, "Find all the methods")
        result = synthesize(schema, facts, part, ctx, k_bound=2)
        assert result.selected == ()
        assert result.alpha_max is None

    def test_name_only_instance(self, hmap_doc):
        # The only separating feature is the method name.
        schema = fig1_schema()
        facts = FactBase(schema, [
            Relation("Method", frozenset({("M1", "I1", "T1", "D1"),
                                          ("M2", "I2", "T1", "D1")})),
            Relation("Identifier", frozenset({("I1", "save"), ("I2", "drop")})),
            Relation("Type", frozenset({("T1", "void")})),
            Relation("Modifier", frozenset({("D1", "public")})),
            Relation("Parameter", frozenset()),
        ])
        part = make_partition("Method", ["M1"], facts)
        ctx = make_context(hmap_doc, "Find all the methods")
        result = synthesize(schema, facts, part, ctx, k_bound=2)
        assert len(result.selected) == 1
        sel = result.selected[0]
        assert evaluate(sel.query, facts) == part.positives
        assert sel.graph.size() == (2, 1, 1)
        assert sel.alpha == 1  # "method" is covered through the join

    def test_context_error_without_entities(self, schema, facts, partition, hmap_doc):
        ctx = make_context(hmap_doc, "")
        with pytest.raises(ContextError):
            synthesize(schema, facts, partition, ctx)

    def test_selected_queries_are_exact(self, schema, facts, partition, context):
        result = synthesize(schema, facts, partition, context, k_bound=2)
        for sel in result.selected:
            assert evaluate(sel.query, facts) == partition.positives
