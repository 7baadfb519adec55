import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from cmvf import parse_vf
from cmvf.errors import ArityMismatch, EvalDomain, UnknownVariable, VFSyntaxError
from cmvf.expr import BinOp, Call, Const, Neg, Num, Pow, Var, eval_node, eval_vf, parse_expr, to_source
from cmvf.systems import BUILTINS

PLANAR = ["x1*(1 - x1^2 - 3*x2^2) - 0.01", "x2*(1 - 3*x1^2 - 2*x2^2) + 0.05"]


def value(src, point, n=2, constants=None):
    return eval_node(parse_expr(src, n, constants), point)


def test_planar_field_at_origin():
    assert value(PLANAR[0], (0, 0)) == pytest.approx(-0.01)
    f = parse_vf(PLANAR, 2)
    assert f((0.0, 0.0)) == pytest.approx((-0.01, 0.05))
    assert parse_vf(";".join(PLANAR), 2) == f


def test_builtin_planar_system_matches():
    f = BUILTINS["planar9"].vector_field()
    assert f((0.0, 0.0)) == pytest.approx((-0.01, 0.05))
    assert f((0.5, -0.25)) == pytest.approx(parse_vf(PLANAR, 2)((0.5, -0.25)))


def test_simple_sum():
    assert value("x1 + x2", (1, 2)) == 3


@pytest.mark.parametrize(
    "src, expected",
    [
        ("1 + 2*3", 7),
        ("(1 + 2)*3", 9),
        ("2^3*2", 16),
        ("-2^2", -4),
        ("(-2)^2", 4),
        ("8/4/2", 1),
        ("8 - 4 - 2", 2),
        ("2^-1", 0.5),
        ("-x1", -3),
        ("+x1", 3),
        ("x1^2 - x2", 7),
        ("1.5e1 + .5", 15.5),
        ("2*pi", 2 * math.pi),
        ("sin(0) + cos(0) + exp(0)", 2),
    ],
)
def test_precedence_and_literals(src, expected):
    assert value(src, (3, 2)) == pytest.approx(expected)


def test_named_constants():
    assert value("lam*x1", (2, 0), constants={"lam": 1.5}) == 3.0
    with pytest.raises(UnknownVariable):
        parse_expr("lam*x1", 2)


def test_unknown_variable():
    with pytest.raises(UnknownVariable):
        parse_expr("x3", 2)
    with pytest.raises(UnknownVariable):
        parse_expr("x0", 2)
    with pytest.raises(UnknownVariable):
        parse_expr("tan(x1)", 2)


@pytest.mark.parametrize("src, pos", [("1 +", 3), ("(x1", 3), ("x1 $ 2", 3), ("x1 2", 3), ("2^x1", 2)])
def test_syntax_errors_carry_position(src, pos):
    with pytest.raises(VFSyntaxError) as info:
        parse_expr(src, 2)
    assert info.value.position == pos


def test_arity():
    with pytest.raises(ArityMismatch):
        parse_vf(["x1"], 2)
    with pytest.raises(ArityMismatch):
        parse_expr("sin(x1, x2)", 2)
    with pytest.raises(ArityMismatch):
        eval_vf(parse_vf(PLANAR, 2), (1.0,))


def test_eval_domain():
    with pytest.raises(EvalDomain):
        value("1/x1", (0, 1))
    with pytest.raises(EvalDomain):
        value("x1^-1", (0, 1))
    with pytest.raises(EvalDomain):
        parse_vf(["1/x1", "x2"], 2).evaluate_many(np.array([[0.0, 1.0]]))


def test_evaluate_many_matches_pointwise():
    f = BUILTINS["allencahn3d"].vector_field()
    pts = np.random.default_rng(0).uniform(-1, 1, size=(50, 3))
    many = f.evaluate_many(pts)
    for p, row in zip(pts, many):
        assert row == pytest.approx(eval_vf(f, p), rel=1e-12, abs=1e-12)


# -- printer round trip -----------------------------------------------------------------
leaves = st.one_of(
    st.integers(0, 20).map(Num),
    st.floats(0, 100, allow_nan=False, allow_infinity=False).map(Num),
    st.integers(0, 2).map(Var),
    st.just(Const("pi", math.pi)),
)


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.tuples(st.sampled_from("+-*/"), children, children).map(lambda t: BinOp(*t)),
        st.tuples(children, st.integers(-3, 4)).map(lambda t: Pow(*t)),
        st.tuples(st.sampled_from(["sin", "cos"]), children).map(lambda t: Call(*t)),
    )


trees = st.recursive(leaves, _extend, max_leaves=12)


@settings(max_examples=300)
@given(trees)
def test_printer_round_trip(tree):
    src = to_source(tree)
    again = parse_expr(src, 3)
    assert again == tree
    assert to_source(again) == src


@settings(max_examples=200)
@given(trees, st.tuples(*[st.floats(-2, 2, allow_nan=False)] * 3))
def test_vectorised_and_scalar_evaluation_agree(tree, point):
    try:
        expected = eval_node(tree, point)
    except (EvalDomain, ZeroDivisionError, OverflowError):
        return
    assume(math.isfinite(expected) and abs(expected) < 1e12)
    f = parse_vf([to_source(tree)] * 3, 3)
    try:
        got = f.evaluate_many(np.array([point]))[0, 0]
    except EvalDomain:
        return
    assert got == pytest.approx(expected, rel=1e-9, abs=1e-9)
