import random

import pytest

from confik.errors import ModelSemanticError, ModelSyntaxError
from confik.logic import (
    And,
    Iff,
    Implies,
    Not,
    Or,
    Var,
    all_model_masks,
    solve,
    to_cnf,
)
from confik.model import (
    format_constraint,
    parse_model,
    print_model,
    synthesize_model,
    translate,
)

from helpers import FIG1B, FIG1D_COMBINATIONS, eval_expr_mask, names_of


class TestParse:
    def test_fig1b_shape(self):
        fm = parse_model(FIG1B)
        assert [f.name for f in fm.features] == ["x", "y", "a", "b", "c", "d"]
        assert fm.features[fm.id_of("y")].kind == "mandatory"
        assert fm.features[fm.id_of("c")].kind == "optional"
        assert fm.features[fm.id_of("d")].kind == "optional"
        assert len(fm.groups) == 1
        g = fm.groups[0]
        assert g.kind == "xor" and g.parent == fm.id_of("y")
        assert [fm.name_of(m) for m in g.members] == ["a", "b"]
        for m in g.members:
            assert fm.features[m].kind == "member"

    def test_lone_root(self):
        fm = parse_model("feature r\n")
        assert len(fm.features) == 1
        assert fm.features[0].kind == "root"

    def test_default_edge_is_optional(self):
        fm = parse_model("feature r\n  feature c\n")
        assert fm.features[1].kind == "optional"

    def test_comments_and_blanks(self):
        fm = parse_model("# heading\nfeature r  # root\n\n  feature c optional\n")
        assert [f.name for f in fm.features] == ["r", "c"]

    def test_singleton_group_rejected(self):
        with pytest.raises(ModelSemanticError):
            parse_model("feature r\n  xor\n    feature a\n")

    def test_duplicate_name_rejected(self):
        with pytest.raises(ModelSemanticError):
            parse_model("feature r\n  feature r optional\n")

    def test_second_root_rejected(self):
        with pytest.raises(ModelSemanticError):
            parse_model("feature r\nfeature s\n")

    def test_member_suffix_rejected(self):
        with pytest.raises(ModelSemanticError):
            parse_model("feature r\n  xor\n    feature a mandatory\n    feature b\n")

    def test_bad_indent(self):
        with pytest.raises(ModelSyntaxError) as exc:
            parse_model("feature r\n   feature c\n")
        assert exc.value.line == 2

    def test_indent_jump(self):
        with pytest.raises(ModelSyntaxError):
            parse_model("feature r\n      feature c\n")

    def test_unknown_keyword(self):
        with pytest.raises(ModelSyntaxError):
            parse_model("gadget r\n")

    def test_group_without_parent(self):
        with pytest.raises(ModelSyntaxError):
            parse_model("xor\n  feature a\n  feature b\n")

    def test_constraint_unknown_feature(self):
        with pytest.raises(ModelSemanticError) as exc:
            parse_model("feature r\nconstraint r -> q\n")
        assert exc.value.line == 2

    def test_constraint_syntax_error(self):
        with pytest.raises(ModelSyntaxError):
            parse_model("feature r\nconstraint r ->\n")

    def test_empty_model(self):
        with pytest.raises(ModelSyntaxError):
            parse_model("# nothing here\n")

    def test_constraint_grammar_precedence(self):
        fm = parse_model(
            "feature r\n  feature a\n  feature b\n  feature c\n"
            "constraint a -> b | c & !a\n"
            "constraint a <-> b -> c\n"
        )
        a, b, c = (Var(fm.id_of(n)) for n in "abc")
        assert fm.constraints[0] == Implies(a, Or((b, And((c, Not(a))))))
        assert fm.constraints[1] == Iff(a, Implies(b, c))


class TestTranslate:
    def test_fig1b_conjuncts_exact(self):
        fm = parse_model(FIG1B)
        x, y, a, b, c, d = (Var(fm.id_of(n)) for n in "xyabcd")
        expected = And(
            (
                x,
                Iff(y, x),
                Implies(c, x),
                Implies(d, x),
                Implies(a, y),
                Implies(b, y),
                Implies(y, Or((a, b))),
                Implies(y, Not(And((a, b)))),
            )
        )
        assert translate(fm) == expected

    def test_lone_root_semantics(self):
        fm = parse_model("feature r\n")
        e = translate(fm)
        assert e == Var(0)
        cs = to_cnf(e, fm.var_table)
        assert [names_of(m, fm.var_table) for m in all_model_masks(cs)] == [{"r"}]

    def test_xor_three_members_truth_table(self):
        fm = parse_model("feature r\n  xor\n    feature a\n    feature b\n    feature c\n")
        e = translate(fm)
        # brute-force truth table over the 4 variables, no CNF involved
        models = [names_of(m, fm.var_table) for m in range(16) if eval_expr_mask(e, m)]
        assert sorted(map(sorted, models)) == [["a", "r"], ["b", "r"], ["c", "r"]]

    def test_or_group_allows_overlap(self):
        fm = parse_model("feature r\n  or\n    feature a\n    feature b\n")
        e = translate(fm)
        models = {frozenset(names_of(m, fm.var_table)) for m in range(8) if eval_expr_mask(e, m)}
        assert models == {
            frozenset({"r", "a"}),
            frozenset({"r", "b"}),
            frozenset({"r", "a", "b"}),
        }

    def test_fig1b_model_set_matches_combinations(self):
        fm = parse_model(FIG1B)
        cs = to_cnf(translate(fm), fm.var_table)
        combos = {frozenset(names_of(m, fm.var_table)) for m in all_model_masks(cs)}
        assert combos == {frozenset(c) for c in FIG1D_COMBINATIONS}

    def test_no_extra_variables(self):
        fm = parse_model(FIG1B)
        cs = to_cnf(translate(fm), fm.var_table)
        assert len(cs.var_table) == len(fm.features)


class TestPrinter:
    def test_round_trip_fig1b(self):
        fm = parse_model(FIG1B)
        again = parse_model(print_model(fm))
        assert [f.name for f in again.features] == [f.name for f in fm.features]
        assert again.groups == fm.groups
        assert [f.kind for f in again.features] == [f.kind for f in fm.features]

    def test_round_trip_with_constraints(self):
        text = "feature r\n  feature a\n  feature b\nconstraint a -> !b\n"
        fm = parse_model(text)
        printed = print_model(fm)
        assert "constraint a -> !b" in printed
        again = parse_model(printed)
        assert again.constraints == fm.constraints

    def test_round_trip_random_models(self):
        for seed in range(8):
            text = synthesize_model(seed, 25)
            fm = parse_model(text)
            again = parse_model(print_model(fm))
            assert again.features == fm.features
            assert again.groups == fm.groups
            assert again.constraints == fm.constraints

    def test_constraint_formatting_parenthesizes(self):
        fm = parse_model(
            "feature r\n  feature a\n  feature b\n  feature c\n"
            "constraint (a | b) & c\n"
        )
        out = format_constraint(fm.constraints[0], fm.var_table)
        assert out == "(a | b) & c"
        again = parse_model(f"feature r\n  feature a\n  feature b\n  feature c\nconstraint {out}\n")
        assert again.constraints[0] == fm.constraints[0]


class TestSynthesize:
    def test_deterministic_and_satisfiable(self):
        a = synthesize_model(3, 40)
        b = synthesize_model(3, 40)
        assert a == b
        fm = parse_model(a)
        assert len(fm.features) == 40
        assert solve(to_cnf(translate(fm), fm.var_table)) is not None

    def test_sizes(self):
        rng = random.Random(0)
        for _ in range(5):
            n = rng.randint(10, 60)
            fm = parse_model(synthesize_model(rng.randint(0, 999), n))
            assert len(fm.features) == n
