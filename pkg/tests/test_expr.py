import math
import pickle
import random

import pytest

from sturmspec import EvaluationError
from sturmspec.expr import ExprSyntaxError, parse_expression


def test_linear_profile_expression():
    assert parse_expression("8*x+1.1")(0.1) == pytest.approx(1.9)


def test_precedence():
    assert parse_expression("-x^2")(3.0) == -9.0
    assert parse_expression("2^3^2")(0.0) == 512.0
    assert parse_expression("8/4/2")(0.0) == 1.0
    assert parse_expression("1-2-3")(0.0) == -4.0
    assert parse_expression("2*-x")(1.5) == -3.0


def test_exp_minus_x_squared_finite():
    e = parse_expression("exp(-x^2)")
    for x in (0.0, 0.25, 0.5, 1.0):
        assert e(x) == pytest.approx(math.exp(-x * x))


@pytest.mark.parametrize("src,pos", [("2**x", 2), ("x+", 2), ("(x", 2),
                                     ("3 $ x", 2), ("foo(x)", 0),
                                     ("x x", 2)])
def test_syntax_errors(src, pos):
    with pytest.raises(ExprSyntaxError) as info:
        parse_expression(src)
    assert info.value.position == pos


def test_evaluation_errors():
    with pytest.raises(EvaluationError):
        parse_expression("log(x)")(0.0)
    with pytest.raises(EvaluationError):
        parse_expression("1/x")(0.0)
    with pytest.raises(EvaluationError):
        parse_expression("sqrt(x-1)")(0.0)


def test_pickle_roundtrip():
    e = parse_expression("1 + sin(x)^2")
    e2 = pickle.loads(pickle.dumps(e))
    assert e2 == e and e2(0.3) == e(0.3)


_FUNCS = ("exp", "sin", "cos", "tanh")


def _random_expr(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(["x", str(rng.randint(0, 9)),
                           f"{rng.uniform(0, 5):.3f}"])
    kind = rng.random()
    if kind < 0.5:
        op = rng.choice(["+", "-", "*", "/"])
        return f"{_random_expr(rng, depth - 1)} {op} {_random_expr(rng, depth - 1)}"
    if kind < 0.65:
        return f"-{_random_expr(rng, depth - 1)}"
    if kind < 0.8:
        base = rng.choice(["x", str(rng.randint(1, 3)),
                           f"({_random_expr(rng, depth - 1)})"])
        return f"{base}^{rng.choice(['2', '3', '-1', '0.5'])}"
    if kind < 0.9:
        return f"({_random_expr(rng, depth - 1)})"
    return f"{rng.choice(_FUNCS)}({_random_expr(rng, depth - 1)})"


def _reference(src, x):
    py = src.replace("^", "**")
    env = {name: getattr(math, name) for name in _FUNCS}
    env["x"] = x
    return eval(py, {"__builtins__": {}}, env)


def test_fuzz_against_python_eval():
    rng = random.Random(2024)
    checked = 0
    while checked < 100:
        src = _random_expr(rng, 4)
        x = rng.uniform(0.1, 2.0)
        try:
            ref = _reference(src, x)
        except (ZeroDivisionError, OverflowError, ValueError):
            continue
        if isinstance(ref, complex) or not math.isfinite(ref):
            continue
        assert parse_expression(src)(x) == pytest.approx(ref, rel=1e-12,
                                                         abs=1e-12), src
        checked += 1
