import json

import pytest

from cqsearch import minijava as mj
from cqsearch.core import PartitionError
from cqsearch.extract import (ExtractError, build_facts, extract,
                              facts_to_doc)
from test_minijava import FIG1_SOURCE


class TestFig1Extraction:
    def test_method_rows_share_types_and_modifiers(self):
        facts, part, _ = extract(mj.parse(FIG1_SOURCE), "Method")
        methods = {t[0]: t for t in facts.tuples("Method")}
        assert len(methods) == 3
        by_name = {}
        idents = {t[0]: t[1] for t in facts.tuples("Identifier")}
        for t in facts.tuples("Method"):
            by_name[idents[t[1]]] = t
        # foo and f2 share the CacheConfig return type row
        assert by_name["foo"][2] == by_name["f2"][2]
        types = {t[0]: t[1] for t in facts.tuples("Type")}
        assert types[by_name["foo"][2]] == "CacheConfig"
        # all three share the public modifier row
        assert len({t[3] for t in facts.tuples("Method")}) == 1

    def test_partition_from_annotations(self):
        facts, part, _ = extract(mj.parse(FIG1_SOURCE), "Method")
        idents = {t[0]: t[1] for t in facts.tuples("Identifier")}
        pos_names = {idents[t[1]] for t in part.positives}
        assert pos_names == {"foo"}
        assert len(part.negatives) == 2

    def test_parameters_share_interned_identifier(self):
        facts, _, _ = extract(mj.parse(FIG1_SOURCE), "Method")
        assert len({t[1] for t in facts.tuples("Parameter")}) == 1  # "utils"


class TestInterning:
    def test_same_type_name_one_row(self):
        prog = mj.parse("class A { Log4jUtils x; Log4jUtils y; }")
        facts, _, _ = build_facts(prog)[0], None, None
        facts = build_facts(prog)[0]
        names = [t[1] for t in facts.tuples("Type")]
        assert names.count("Log4jUtils") == 1
        assert len(facts.tuples("Field")) == 2

    def test_identifier_rows_equal_distinct_names(self):
        prog = mj.parse(FIG1_SOURCE)
        facts = build_facts(prog)[0]
        names = {t[1] for t in facts.tuples("Identifier")}
        # class name, Object, method names, shared parameter name
        assert names == {"Service", "Object", "foo", "f2", "f3", "utils"}
        assert len(facts.tuples("Identifier")) == len(names)


class TestClassRows:
    def test_extends_references_superclass_row(self):
        prog = mj.parse("class Base { }\nclass Mid extends Base { }")
        facts = build_facts(prog)[0]
        idents = {t[0]: t[1] for t in facts.tuples("Identifier")}
        rows = {idents[t[1]]: t for t in facts.tuples("Class")}
        assert rows["Mid"][3] == rows["Base"][0]
        assert rows["Base"][3] == rows["Object"][0]
        assert rows["Object"][3] == rows["Object"][0]          # root loops
        assert rows["Object"][4] == "external"

    def test_interface_kind(self):
        prog = mj.parse("interface Greeter { }")
        facts = build_facts(prog)[0]
        kinds = {t[4] for t in facts.tuples("Class")}
        assert "interface" in kinds


class TestDeterminism:
    def test_identical_source_identical_facts(self):
        a = facts_to_doc(build_facts(mj.parse(FIG1_SOURCE))[0])
        b = facts_to_doc(build_facts(mj.parse(FIG1_SOURCE))[0])
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_facts_validate_on_construction(self):
        # FactBase enforces referential integrity; extraction must satisfy it.
        prog = mj.parse("""
import java.util.List;
class A extends Missing {
    public int f;
    int go(int n) {
        double d = 1.0;
        if (n > 1 && ready()) { poke(); }
        for (int i = 0; i < n; i = i + 1) { d = d + i; }
        return n;
    }
}
""")
        facts = build_facts(prog)[0]
        assert len(facts.tuples("IfStmt")) == 1
        assert len(facts.tuples("Expr")) == 2  # if condition and for condition
        assert len(facts.tuples("Call")) == 2  # ready() and poke()
        assert len(facts.tuples("Variable")) == 2  # d and the loop counter


class TestAnnotationErrors:
    def test_wrong_construct_for_target(self):
        with pytest.raises(ExtractError, match="target relation is Class"):
            extract(mj.parse(FIG1_SOURCE), "Class")

    def test_no_positive_annotation(self):
        prog = mj.parse("class A { int f() { } }")
        with pytest.raises(ExtractError, match="no @pos"):
            extract(prog, "Method")

    def test_contradictory_annotations(self):
        prog = mj.parse("class A { /*@pos*/ /*@neg*/ int f() { }"
                        " int g() { } }")
        with pytest.raises(PartitionError, match="both"):
            extract(prog, "Method")

    def test_annotation_on_rowless_construct(self):
        with pytest.raises(ExtractError, match="no example rows"):
            extract(mj.parse("class A { int f() { /*@pos*/ return 1; } }"),
                    "Method")

    def test_unannotated_targets_default_negative(self):
        prog = mj.parse("class A { /*@pos*/ int f() { } int g() { } int h() { } }")
        _, part, _ = extract(prog, "Method")
        assert len(part.positives) == 1
        assert len(part.negatives) == 2


class TestMultipleFiles:
    def test_merged_programs_renumber_deterministically(self, tmp_path):
        (tmp_path / "a.java").write_text("class A { /*@pos*/ int f() { } }")
        (tmp_path / "b.java").write_text("class B { int g() { } }")
        prog = mj.parse_files([tmp_path / "a.java", tmp_path / "b.java"])
        facts, part, positions = extract(prog, "Method")
        assert len(facts.tuples("Method")) == 2
        assert len(facts.tuples("Class")) == 3  # A, B, Object
        files = {p["file"] for p in positions.values()}
        assert {str(tmp_path / "a.java"), str(tmp_path / "b.java")} <= files
