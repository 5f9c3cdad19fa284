import numpy as np
import pytest

from condpres.logic import (
    TOP,
    And,
    Atom,
    Conditional,
    Indicator,
    KnowledgeBase,
    LogicError,
    Not,
    Or,
    ParseError,
    Signature,
    World,
    conj,
    indicator,
    is_perpendicular,
    is_subconditional,
    literal,
    parse_conditional,
    parse_formula,
    parse_kb,
    parse_world,
    render_conditional,
    render_formula,
    render_kb,
    render_world,
)

SIG = Signature(("a", "b", "c"))


def test_world_order_starts_all_true():
    assert [str(w) for w in SIG.worlds()][:3] == ["abc", "ab!c", "a!bc"]
    assert str(World(SIG, 7)) == "!a!b!c"


def test_world_roundtrip():
    for w in SIG.worlds():
        assert parse_world(str(w), SIG) == w
        assert render_world(w.index, SIG) == str(w)


def test_world_assignment():
    w = SIG.world("a!bc")
    assert w.assignment() == (True, False, True)
    assert w.truth(1) is False


@pytest.mark.parametrize("bad", ["ab", "abcd", "a!b!", "ba c"])
def test_parse_world_rejects(bad):
    with pytest.raises(ParseError):
        parse_world(bad, SIG)


def test_signature_validation():
    with pytest.raises(LogicError):
        Signature(())
    with pytest.raises(LogicError):
        Signature(("a", "a"))
    with pytest.raises(LogicError):
        Signature(("A",))
    with pytest.raises(LogicError):
        Signature(tuple(f"x{i}" for i in range(5)), max_atoms=4)


def test_truth_table_shape():
    tt = SIG.truth_table
    assert tt.shape == (8, 3)
    assert tt[0].all() and not tt[7].any()


def test_formula_models():
    f = parse_formula("a, !b; c", SIG)
    expected = [(w.truth(0) and not w.truth(1)) or w.truth(2) for w in SIG.worlds()]
    assert f.models(SIG).tolist() == expected


def test_precedence_and_parens():
    assert parse_formula("a; b, c", SIG) == Or((Atom("a"), And((Atom("b"), Atom("c")))))
    assert parse_formula("(a; b), c", SIG) == And((Or((Atom("a"), Atom("b"))), Atom("c")))
    assert parse_formula("!!a", SIG) == Not(Not(Atom("a")))


@pytest.mark.parametrize("text", ["a, !b; c", "(a; b), c", "!(a, b)", "top", "bot", "a; b; !c"])
def test_render_roundtrip(text):
    f = parse_formula(text, SIG)
    assert parse_formula(render_formula(f), SIG) == f


@pytest.mark.parametrize(
    "text, fragment",
    [("a, x", "unknown atom"), ("(a, b", "unbalanced"), ("a)", "unbalanced"), ("a & b", "unexpected"), ("", "end of input")],
)
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_formula(text, SIG)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_formula("a, zz", SIG)
    assert info.value.pos == 3


def test_conditional_parse_and_render():
    c = parse_conditional("(c | a, !b)", SIG)
    assert render_conditional(c) == "(c | a, !b)"
    fact = parse_conditional("a; b", SIG)
    assert fact.antecedent == TOP


def test_conditional_double_bar():
    with pytest.raises(ParseError, match="more than one"):
        parse_conditional("(a | b | c)", SIG)


def test_indicator_classes():
    c = parse_conditional("(b | a)", SIG)
    assert indicator(c, SIG.world("abc")) is Indicator.VERIFIES
    assert indicator(c, SIG.world("a!bc")) is Indicator.FALSIFIES
    assert indicator(c, SIG.world("!abc")) is Indicator.NOT_APPLICABLE
    assert (c.verification(SIG) | c.falsification(SIG)).tolist() == c.antecedent.models(SIG).tolist()


def test_subconditional():
    c = parse_conditional("(c | a)", SIG)
    assert is_subconditional(parse_conditional("(c | a, b)", SIG), c, SIG)
    assert not is_subconditional(parse_conditional("(c | b)", SIG), c, SIG)
    assert is_subconditional(c, c, SIG)


def test_perpendicular():
    c = parse_conditional("(c | a)", SIG)
    assert is_perpendicular(parse_conditional("(b | !a)", SIG), c, SIG)
    assert is_perpendicular(parse_conditional("(b | a, c)", SIG), c, SIG)
    assert not is_perpendicular(parse_conditional("(b | a)", SIG), c, SIG)


def test_literal_and_conj():
    f = conj(literal("a"), literal("b", False))
    assert f.models(SIG).tolist() == parse_formula("a, !b", SIG).models(SIG).tolist()


def test_kb_labels_and_matrices():
    kb = parse_kb("signature: a, b\n# comment\nfirst: (b | a)\n(a | top)\n")
    assert kb.labels == ["first", "r2"]
    assert kb.verify.shape == (4, 2)
    assert kb.verify[:, 0].tolist() == [True, False, False, False]
    assert kb.falsify[:, 0].tolist() == [False, True, False, False]
    with pytest.raises(ValueError):
        kb.verify[0, 0] = False


def test_kb_render_roundtrip():
    kb = parse_kb("sig: a, b, c\nx: (c | a, b)\ny: (!a | c; b)\n")
    again = parse_kb(render_kb(kb))
    assert again == kb


@pytest.mark.parametrize(
    "text, line",
    [
        ("(b | a)\n", 1),
        ("signature: a, b\n(b | a\n", 2),
        ("signature: a, b\nr: (b|a)\nr: (a|b)\n", 3),
        ("signature: a, b\n(b | a, !a)\n", 2),
        ("signature: a, b\n(q | a)\n", 2),
    ],
)
def test_kb_errors_report_lines(text, line):
    with pytest.raises(ParseError) as info:
        parse_kb(text)
    assert info.value.line == line


def test_kb_rejects_unknown_atoms_directly():
    with pytest.raises(LogicError):
        KnowledgeBase(SIG, (Conditional(Atom("z")),))


def test_kb_subset():
    kb = parse_kb("signature: a, b\n(b|a)\n(a|b)\n(!a|top)\n")
    sub = kb.subset([0, 2])
    assert sub.labels == ["r1", "r3"]
    assert np.array_equal(sub.verify, kb.verify[:, [0, 2]])
