import pytest

from petrilive import presburger as pb
from petrilive.errors import BudgetError, InputError
from petrilive.presburger import (FALSE, TRUE, And, Divides, Eq, Exists, Forall, Ge, Le, Not,
                                  Or, Term, decide, eliminate_exists, evaluate, parse_formula)

from oracles import elimination_disagreements, fresh_rng, random_qf, random_sentence

x, y, z = Term.var("x"), Term.var("y"), Term.var("z")


def test_term_drops_zero_coefficients():
    t = x + y - y
    assert t.coeffs == (("x", 1),)
    assert (2 * x + 3).value({"x": 4}) == 11


def test_evaluate_examples():
    assert evaluate(Le(x + y, 3), {"x": 1, "y": 2})
    assert not evaluate(Divides(2, x), {"x": 5})
    p1, p2, p3 = Term.var("p1"), Term.var("p2"), Term.var("p3")
    live = And(Ge(p2 + p3, 1), Not(Divides(2, p1 + p3)))
    assert evaluate(live, {"p1": 3, "p2": 1, "p3": 0})
    assert not evaluate(live, {"p1": 4, "p2": 1, "p3": 0})


def test_evaluate_rejects_quantifiers_and_unbound():
    with pytest.raises(InputError):
        evaluate(Exists(["x"], Eq(x, y)), {"y": 1})
    with pytest.raises(InputError):
        evaluate(Le(x, 1), {})


def test_divisor_must_be_positive():
    with pytest.raises(InputError):
        Divides(0, x)


def test_eliminate_successor():
    assert eliminate_exists(Eq(x, y + 1), "x") == TRUE


def test_eliminate_even():
    g = eliminate_exists(Eq(2 * x, y), "x")
    for v in range(12):
        assert evaluate(g, {"y": v}) == (v % 2 == 0)
    assert g == Divides(2, y)


def test_eliminate_absent_variable_is_identity():
    f = And(Le(y, 3), Divides(3, y + z))
    assert eliminate_exists(f, "x") == f


def test_eliminate_respects_naturals():
    # over the integers x = y - 5 always exists; over N only when y >= 5
    g = eliminate_exists(Eq(x + 5, y), "x")
    assert [evaluate(g, {"y": v}) for v in range(8)] == [False] * 5 + [True] * 3


def test_decide_examples():
    parity = Forall(["x"], Exists(["y"], Or(Eq(x, y + y), Eq(x, y + y + 1))))
    assert decide(parity) is True
    assert decide(Exists(["x"], And(Divides(2, x), Not(Divides(2, x))))) is False
    assert decide(Forall(["x"], Ge(x, 0)))
    assert not decide(Exists(["x"], Le(x + 1, 0)))


def test_decide_requires_closed():
    with pytest.raises(InputError):
        decide(Le(x, 1))


def test_size_guard():
    f = Exists(["x", "y", "z"], And(*[Divides(k, x + k * y + z + k) for k in range(2, 9)],
                                    Le(x, y + 50)))
    with pytest.raises(BudgetError):
        decide(f, max_nodes=50)


def test_elimination_vs_enumeration():
    assert elimination_disagreements(fresh_rng(3), count=200) == 0


def test_negation_and_de_morgan():
    rng = fresh_rng(5)
    for _ in range(60):
        f, g = random_sentence(rng), random_sentence(rng)
        a, b = decide(f), decide(g)
        assert decide(Not(f)) == (not a)
        assert decide(Not(And(f, g))) == decide(Or(Not(f), Not(g))) == (not (a and b))
        assert decide(Not(Or(f, g))) == decide(And(Not(f), Not(g)))


def test_quantifier_duality():
    rng = fresh_rng(6)
    for _ in range(40):
        f = random_qf(rng, ("x",))
        assert decide(Forall(["x"], f)) == (not decide(Exists(["x"], Not(f))))


def test_parse_formula():
    f = parse_formula("(forall x (exists y (or (= x (+ y y)) (= x (+ y y 1)))))")
    assert decide(f)
    g = parse_formula("(and (<= (+ x (* 2 y)) 7) (divides 3 x))")
    assert evaluate(g, {"x": 3, "y": 2}) and not evaluate(g, {"x": 1, "y": 0})
    assert parse_formula("true") == TRUE and parse_formula("(not true)") == FALSE


@pytest.mark.parametrize("text", ["(", "(and", "(<= x)", "(* x y)", "(frob x)", "(= x 1) 2"])
def test_parse_errors(text):
    with pytest.raises(InputError):
        parse_formula(text)
