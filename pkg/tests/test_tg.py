import itertools
import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import signed_irreducibles
from systems import certified, coloured_system
from tgrw import (
    CommutationAlphabet,
    GroupCallbacks,
    Presentation,
    TGElement,
    certify_convergence,
    concat,
    evaluate_trace,
    extend_exponents,
    extend_homomorphism,
    finite_system,
    group_presentation,
    tg_inv,
    tg_mul,
    universal_invariant,
)
from tgrw.errors import DomainError, PreconditionError, UnsupportedOperation
from tgrw.graphs import complete_graph, graph_letter, graph_system, tutte_callbacks
from tgrw.packs import pbw_system, pbw_weight, weyl_system, weyl_weight
from tgrw.poly import BivarPoly
from tgrw.tg import reduce_signed

GOLDEN = Path(__file__).parent / "golden"

XYZ = CommutationAlphabet.finite_alphabet("xyz", [("x", "y")])
TOTAL = CommutationAlphabet.finite_alphabet("xyz", "total")

signed = st.tuples(st.sampled_from("xyz"), st.sampled_from([1, -1]))
signed_words = st.lists(signed, max_size=8)
INTS = GroupCallbacks(multiply=lambda a, b: a + b, invert=lambda a: -a, identity=0, image=lambda x: 1)


def el(word, alphabet=XYZ):
    return TGElement.from_signed(word, alphabet)


def test_cancellation():
    assert tg_mul(el([("x", 1)]), el([("x", -1)])).is_identity


def test_no_cancellation_across_a_blocking_letter():
    got = tg_mul(el([("x", 1), ("z", 1)]), el([("x", -1)]))
    assert got.word == (("x", 1), ("z", 1), ("x", -1))
    assert signed_irreducibles(got.word, XYZ.commutes) == {got.word}


def test_cancellation_across_a_commuting_letter():
    got = tg_mul(el([("x", 1), ("y", 1)]), el([("x", -1)]))
    assert got.word == (("y", 1),)


def test_inverse():
    assert tg_inv(el([("x", 1), ("z", 1)])).word == (("z", -1), ("x", -1))
    assert tg_inv(TGElement.identity(XYZ)).is_identity


def test_exponent_maps_under_total_commutation():
    a = TGElement.from_exponents({"x": 2}, TOTAL)
    b = TGElement.from_exponents({"x": -1, "y": 3}, TOTAL)
    assert (a * b).exponents() == {"x": 1, "y": 3}
    assert tg_inv(TGElement.from_exponents({"x": 2, "y": -1}, TOTAL)).exponents() == {"x": -2, "y": 1}
    with pytest.raises(DomainError):
        TGElement.from_exponents({"x": 1}, XYZ)


def test_signs_validated():
    with pytest.raises(DomainError):
        reduce_signed([("x", 2)], XYZ)


def test_reduction_unique_up_to_length_5():
    letters = [(x, e) for x in "xyz" for e in (1, -1)]
    for n in range(6):
        for w in itertools.product(letters, repeat=n):
            assert signed_irreducibles(w, XYZ.commutes) == {reduce_signed(w, XYZ)}


@given(signed_words, signed_words, signed_words)
def test_group_laws(a, b, c):
    A, B, C = el(a), el(b), el(c)
    assert (A * B) * C == A * (B * C)
    assert (A * tg_inv(A)).is_identity and (tg_inv(A) * A).is_identity
    assert A * TGElement.identity(XYZ) == A


def test_commutators_vanish_exactly_on_theta():
    for x, y in itertools.combinations("xyz", 2):
        X, Y = el([(x, 1)]), el([(y, 1)])
        comm = X * Y * tg_inv(X) * tg_inv(Y)
        assert comm.is_identity == XYZ.commutes(x, y)


@given(signed_words, signed_words)
def test_abelian_collapse(a, b):
    A, B = el(a, TOTAL), el(b, TOTAL)
    want = {x: sum(e for y, e in a + b if y == x) for x in "xyz"}
    assert (A * B).exponents() == {x: k for x, k in want.items() if k}


@given(st.lists(st.sampled_from("xyz"), min_size=1, max_size=6), st.lists(st.sampled_from("xyz"), min_size=1, max_size=6))
def test_monoid_embedding(u, v):
    from tgrw import canonicalize

    tu, tv = canonicalize(u, XYZ), canonicalize(v, XYZ)
    assert TGElement.embed(concat(tu, tv)) == TGElement.embed(tu) * TGElement.embed(tv)
    # injectivity on positive words: distinct traces stay distinct
    assert (TGElement.embed(tu) == TGElement.embed(tv)) == (tu == tv)


def test_universal_invariant_examples():
    w = weyl_system()
    wc = w.with_certificate(certify_convergence(w, weyl_weight, w.alphabet.enumerate(5)))
    assert universal_invariant(wc, "babab").exponents() == {"b": 1, "bba": 3, "bbbaa": 1}
    p = pbw_system("abc")
    pc = p.with_certificate(certify_convergence(p, pbw_weight("abc"), p.alphabet.enumerate(3)))
    assert universal_invariant(pc, "cba").word == (("abc", 1),)
    assert universal_invariant(pc, "abc").word == (("abc", 1),)


def test_universal_invariant_needs_certificate():
    with pytest.raises(UnsupportedOperation):
        universal_invariant(weyl_system(), "ab")


def test_letter_count_evaluation():
    s = finite_system("ab", "none")
    assert evaluate_trace(INTS, s.trace("abab")) == 4
    TOTAL_SYS = finite_system("xyz", "total")
    assert extend_exponents(INTS, {"x": 2, "y": -5}, TOTAL_SYS.alphabet) == -3


def test_tutte_evaluation_of_triangle_normal_form():
    g = graph_system()
    tri = graph_letter(complete_graph(3))
    nf = g.letterwise_normal_form(g.trace([tri]))
    assert evaluate_trace(tutte_callbacks(), nf, g) == BivarPoly({(2, 0): 1, (1, 0): 1, (0, 1): 1})


def test_h_of_identity():
    assert extend_homomorphism(INTS, TGElement.identity(XYZ)) == 0


def test_non_commuting_images_rejected():
    # images in S3 that do not commute, for a commuting pair
    from systems import compose, inverse

    imgs = {"x": (1, 0, 2), "y": (0, 2, 1), "z": (0, 1, 2)}
    f = GroupCallbacks(compose, inverse, (0, 1, 2), imgs.__getitem__)
    s = finite_system("xyz", [("x", "y")])
    with pytest.raises(PreconditionError, match="x"):
        evaluate_trace(f, s.trace("xy"))


def test_non_invariant_map_rejected():
    s = finite_system("xab", "none", {"x": [["a", "b"]]})
    f = GroupCallbacks(lambda a, b: a + b, lambda a: -a, 0, {"x": 1, "a": 1, "b": 1}.__getitem__)
    with pytest.raises(PreconditionError, match="R-invariant"):
        evaluate_trace(f, s.trace("x"), s)


@settings(max_examples=200)
@given(st.integers(0, 39), st.data())
def test_evaluation_constant_along_steps(seed, data):
    cs = coloured_system(seed)
    letters = cs.irreducible + cs.reducible
    word = data.draw(st.lists(st.sampled_from(letters), min_size=1, max_size=5))
    t = cs.system.trace(word)
    value = evaluate_trace(cs.group, t, cs.system)
    for r in cs.system.one_step_reducts(t):
        assert evaluate_trace(cs.group, r, check=False) == value


@settings(max_examples=100)
@given(st.integers(0, 39))
def test_h_after_t_is_f(seed):
    system, _ = certified(seed)
    cs = coloured_system(seed)
    for x in cs.irreducible + cs.reducible:
        assert extend_homomorphism(cs.group, universal_invariant(system, x), system) == cs.group.image(x)


def test_r_invariance_of_t_on_pack_rules():
    w = weyl_system()
    wc = w.with_certificate(certify_convergence(w, weyl_weight, w.alphabet.enumerate(4)))
    for x in w.alphabet.enumerate(4):
        for rhs in wc.letter_rewrites(x):
            assert universal_invariant(wc, x) == TGElement.embed(wc.letterwise_normal_form(rhs))


@pytest.mark.parametrize("name", ["free_one", "one_rule", "commuting_pair"])
def test_presentation_golden(name):
    from tgrw.cli import parse_system, presentation_to_json

    system = parse_system((GOLDEN / f"{name}.system.json").read_text(encoding="utf-8"))
    got = presentation_to_json(group_presentation(system))
    want = json.loads((GOLDEN / f"{name}.presentation.json").read_text(encoding="utf-8"))
    assert got == want


def test_presentation_round_trip():
    s = finite_system("xyab", [("x", "y")], {"x": [["a", "b"]]})
    p = group_presentation(s)
    assert Presentation.from_dict(p.to_dict()) == p


def test_presentation_needs_finite_alphabet():
    with pytest.raises(UnsupportedOperation):
        group_presentation(weyl_system())
    p = group_presentation(weyl_system(), ["ab", "ba", "𝟙"])
    assert p.relators()[-1] == (("ab", 1), ("𝟙", -1), ("ba", -1))
