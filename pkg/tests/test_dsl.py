from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistor_moduli import dsl
from twistor_moduli.dsl import LexError, ParseError, parse, print_script
from twistor_moduli.interpreter import (AssertionFailed, DegreeError, EvalError, UnboundError,
                                        execute, run_text)

SCRIPTS = sorted((Path(__file__).parent / "scripts").glob("*.tws"))
FIXTURES = Path(__file__).parent / "fixtures"


def test_corpus_size():
    assert len(SCRIPTS) >= 20


@pytest.mark.parametrize("path", SCRIPTS, ids=lambda p: p.name)
def test_roundtrip(path):
    tree = parse(path.read_text())
    printed = print_script(tree)
    assert parse(printed) == tree
    assert print_script(parse(printed)) == printed


@pytest.mark.parametrize("path", SCRIPTS, ids=lambda p: p.name)
def test_corpus_runs(path):
    outputs = execute(parse(path.read_text()))
    assert all(o.passed is not False for o in outputs)


def test_three_statements():
    tree = parse("space n=0\nbundle V rank=2 c1=0 c2=1*F\ndim V\n")
    assert len(tree.statements) == 3
    assert isinstance(tree.statements[1], dsl.BundleDef)
    assert tree.statements[2] == dsl.Query("dim", dsl.BundleRef("V"))


def test_unbound_generator_is_runtime_error():
    tree = parse("space n=1\nlet s = e1 + e2\n")  # parses fine
    with pytest.raises(UnboundError) as exc:
        execute(tree)
    assert exc.value.statement == 1
    assert exc.value.line == 2
    assert "e2" in exc.value.message


def test_chi_sugar():
    tree = parse("chi End(V)(-S)")
    (q,) = tree.statements
    assert q.arg == dsl.Twist(dsl.EndOf(dsl.BundleRef("V")), dsl.Neg(dsl.Name("S")))


def test_execute_examples():
    (out,) = run_text("space n=3\nprint integrate(w^2 * e1)\n")
    assert out.text == "1"
    (out,) = run_text("space n=2 a=[1,0]\nassert 2*S + 2*Sbar == c1P\n")
    assert out.passed
    (out,) = run_text("sweep n<=4 r<=3 k<=5 verify lemma2.5")
    assert out.passed and out.value["pass"]


def test_assert_failure_reports_both_sides():
    with pytest.raises(AssertionFailed) as exc:
        run_text((FIXTURES / "failing_assert.tws").read_text())
    assert "-1*pt" in exc.value.message and "1*pt" in exc.value.message
    assert exc.value.statement == 1


def test_error_kinds():
    with pytest.raises(LexError) as exc:
        parse("space n=1\nlet x = w $ 2")
    assert (exc.value.line, exc.value.col) == (2, 11)
    with pytest.raises(ParseError) as exc:
        parse((FIXTURES / "syntax_error.tws").read_text())
    assert exc.value.line == 2 and exc.value.code == "syntax"
    with pytest.raises(DegreeError):
        run_text("space n=1\nbundle V rank=2 c1=F c2=0")
    with pytest.raises(DegreeError):
        run_text("space n=1\nbundle V = bundle(rank=2, c1=[1,2], c2=0)")
    with pytest.raises(EvalError):
        run_text("print w")
    with pytest.raises(UnboundError):
        run_text("space n=0\ndim V")
    with pytest.raises(ParseError):
        parse("frobnicate 3")
    with pytest.raises(ParseError):
        parse("space n=1 c2=weird")
    codes = {LexError.code, ParseError.code, UnboundError.code, DegreeError.code,
             EvalError.code, AssertionFailed.code}
    assert len(codes) == 6


def test_semantic_error_at_right_statement():
    text = "space n=2\nprint w\nprint e1\nlet t = q + w\nprint t\n"
    tree = parse(text)
    with pytest.raises(UnboundError) as exc:
        execute(tree)
    assert exc.value.statement == 3


def test_space_resets_scope():
    with pytest.raises(UnboundError):
        run_text("space n=1\nlet h = w\nspace n=1\nprint h")


def test_power_binds_tighter_than_product():
    tree = parse("print 2*w^2")
    (q,) = tree.statements
    assert q.arg == dsl.BinOp("*", dsl.Num(2), dsl.Pow(dsl.Name("w"), 2))


def test_comments_and_semicolons():
    tree = parse("# header\nspace n=1 # trailing\n\nprint w; print e1\n")
    assert len(tree.statements) == 3


def test_dim_of_formal_data_errors():
    with pytest.raises(EvalError) as exc:
        run_text("space n=1 a=[1]\nbundle V rank=1 c1=0 c2=0\ndim V")
    assert "1/2" in exc.value.message


# -- generated expressions round trip -------------------------------------------

atoms = st.one_of(st.integers(0, 20).map(dsl.Num),
                  st.sampled_from(["w", "e1", "e2", "F", "S", "Sbar", "pt", "h"]).map(dsl.Name))


def _extend(children):
    return st.one_of(
        st.builds(dsl.BinOp, st.sampled_from(["+", "-", "*"]), children, children),
        st.builds(dsl.Neg, children),
        st.builds(dsl.Pow, children, st.integers(0, 4)),
    )


exprs = st.recursive(atoms, _extend, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(exprs)
def test_expression_roundtrip(e):
    stmt = dsl.LetDef("x", e)
    tree = dsl.Script((stmt,))
    assert parse(print_script(tree)) == tree


@settings(max_examples=100, deadline=None)
@given(exprs)
def test_printed_expression_evaluates_like_tree(e):
    from twistor_moduli.interpreter import Interpreter
    interp = Interpreter()
    interp.run(parse("space n=2\nlet h = w + e2"))
    direct = interp.eval(e)
    (stmt,) = parse("print " + dsl.print_expr(e)).statements
    assert interp.eval(stmt.arg) == direct
