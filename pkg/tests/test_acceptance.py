"""Acceptance suite: eight criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` or directly with
``python tests/test_acceptance.py``.
"""
import itertools
import json
import random
import sys
import time
from collections import Counter
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import SignedReducer, normal_ordered_matrix, operator_matrix, trial_division  # noqa: E402
from systems import certified, coloured_system  # noqa: E402
from tgrw import (  # noqa: E402
    CommutationAlphabet,
    GroupCallbacks,
    TGElement,
    certify_convergence,
    concat,
    evaluate_trace,
    extend_homomorphism,
    finite_system,
    group_presentation,
    replay_counterexample,
    universal_invariant,
)
from tgrw.cli import parse_system, presentation_to_json, run  # noqa: E402
from tgrw.graphs import (  # noqa: E402
    Multigraph,
    complete_graph,
    cycle_graph,
    edge_weight,
    enumerate_multigraphs,
    graph_system,
    parse_certificate,
    tutte_oracle,
    tutte_polynomial,
)
from tgrw.packs import (  # noqa: E402
    UNIT,
    arith_invariant,
    arith_letter,
    arith_prefab,
    commutative_image,
    pbw_normal_form,
    pbw_system,
    pbw_weight,
    shuffle_prefab_invariant,
    shuffle_set,
    weyl_normal_order,
    weyl_system,
    weyl_weight,
)
from tgrw.poly import BivarPoly, X, Y  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"
CASES = 1000


def report(number: int, title: str, ok: bool, note: str = "", capsys=None):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({note})" if note else "")
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    return line


def _check(number, title, body, capsys=None):
    start = time.perf_counter()
    failures = body()
    elapsed = time.perf_counter() - start
    note = f"{elapsed:.1f}s" if not failures else f"{len(failures)} failures, first: {failures[0]}"
    report(number, title, not failures, note, capsys)
    assert not failures, failures[:5]


# -- 1 ---------------------------------------------------------------------------

def weyl_failures():
    bad = []
    if weyl_normal_order("babab") != {"bbbaa": 1, "bba": 3, "b": 1}:
        bad.append(("babab", weyl_normal_order("babab")))
    count = 0
    for n in range(1, 8):
        for w in itertools.product("ab", repeat=n):
            w = "".join(w)
            count += 1
            if normal_ordered_matrix(weyl_normal_order(w)) != operator_matrix(w):
                bad.append(w)
    if count != 254:
        bad.append(f"swept {count} words")
    return bad


def test_criterion_1_weyl_normal_ordering(capsys):
    _check(1, "Weyl normal ordering vs operator oracle, all words of length <= 7", weyl_failures, capsys)


# -- 2 ---------------------------------------------------------------------------

def random_multigraph(rng):
    n = rng.randint(1, 6)
    m = rng.randint(0, 8)
    return Multigraph(n, tuple((rng.randrange(n), rng.randrange(n)) for _ in range(m)))


def tutte_failures():
    bad = []
    k4 = X**3 + BivarPoly.constant(3) * X**2 + BivarPoly.constant(2) * X + BivarPoly.constant(4) * X * Y \
        + BivarPoly.constant(2) * Y + BivarPoly.constant(3) * Y**2 + Y**3
    named = [
        ("edge", Multigraph(2, ((0, 1),)), X),
        ("loop", Multigraph(1, ((0, 0),)), Y),
        ("C4", cycle_graph(4), X**3 + X**2 + X + Y),
        ("K3", complete_graph(3), X**2 + X + Y),
        ("K4", complete_graph(4), k4),
    ]
    for name, G, want in named:
        got = tutte_polynomial(G)
        if got != want or tutte_oracle(G) != want:
            bad.append((name, str(got)))
    small = enumerate_multigraphs(6, 4, connected=True)
    for cert in small:
        G = parse_certificate(cert)
        if tutte_polynomial(G) != tutte_oracle(G):
            bad.append(cert)
    rng = random.Random(20240501)
    for _ in range(100):
        G = random_multigraph(rng)
        if tutte_polynomial(G) != tutte_oracle(G):
            bad.append(G.to_dict())
    return bad


def test_criterion_2_tutte_polynomials(capsys):
    _check(2, "Tutte polynomial = subset expansion (named, exhaustive <= 4 vertices / 6 edges, 100 random)",
           tutte_failures, capsys)


# -- 3 ---------------------------------------------------------------------------

def pbw_failures():
    bad = []
    system = pbw_system("abc")
    for n in range(1, 7):
        for w in itertools.product("abc", repeat=n):
            w = "".join(w)
            nf = system.normal_form(system.trace([w]))
            if nf.word != ("".join(sorted(w)),) or pbw_normal_form(w, "abc", system) != {"".join(sorted(w)): 1}:
                bad.append(w)
    return bad


def test_criterion_3_pbw(capsys):
    _check(3, "PBW normal form = sorting, all words of length <= 6 over a 3-letter base", pbw_failures, capsys)


# -- 4 ---------------------------------------------------------------------------

def prefab_failures():
    bad = []
    if shuffle_set("αγ", "ββ") != {"αγββ", "αβγβ", "αββγ", "βαγβ", "βαβγ", "ββαγ"}:
        bad.append(sorted(shuffle_set("αγ", "ββ")))
    for n in range(1, 6):
        for w in itertools.product("abc", repeat=n):
            w = "".join(w)
            if shuffle_prefab_invariant(w) != commutative_image(w):
                bad.append(w)
    for m in range(2, 10_001):
        if arith_invariant(m) != trial_division(m):
            bad.append(m)
    return bad


def test_criterion_4_prefabs(capsys):
    _check(4, "prefabs: shuffle set, shuffle invariant |w| <= 5, arithmetic invariant m <= 10000",
           prefab_failures, capsys)


# -- 5 ---------------------------------------------------------------------------

def _weyl_images(word):
    if word == UNIT:
        return tuple(tuple([0] * k + [1]) for k in range(5))
    return tuple(tuple(col) for col in operator_matrix(word, 4))


def _add_columns(a, b):
    out = []
    for p, q in zip(a, b):
        n = max(len(p), len(q))
        s = [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]
        while len(s) > 1 and s[-1] == 0:
            s.pop()
        out.append(tuple(s))
    return tuple(out)


ZERO_OPERATOR = tuple((0,) for _ in range(5))
WEYL_F = GroupCallbacks(
    multiply=_add_columns,
    invert=lambda a: tuple(tuple(-c for c in col) for col in a),
    identity=ZERO_OPERATOR,
    image=_weyl_images,
)
PBW_F = GroupCallbacks(
    multiply=lambda a, b: tuple(x + y for x, y in zip(a, b)),
    invert=lambda a: tuple(-x for x in a),
    identity=(0, 0, 0),
    image=lambda w: tuple(w.count(c) for c in "abc"),
)

_PACKS = {}


def _certified_pack(name):
    if name not in _PACKS:
        if name == "weyl":
            s = weyl_system()
            _PACKS[name] = s.with_certificate(certify_convergence(s, weyl_weight, s.alphabet.enumerate(5)))
        else:
            s = pbw_system("abc")
            _PACKS[name] = s.with_certificate(certify_convergence(s, pbw_weight("abc"), s.alphabet.enumerate(5)))
    return _PACKS[name]


def sample_case(i):
    """(system, letters, irreducible letters, target group) for case i."""
    rng = random.Random(i)
    pick = rng.random()
    if pick < 0.8:
        seed = rng.randrange(40)
        system, report = certified(seed)
        assert report.convergent
        cs = coloured_system(seed)
        return rng, system, cs.irreducible + cs.reducible, cs.irreducible, cs.group
    name = "weyl" if pick < 0.9 else "pbw"
    system = _certified_pack(name)
    letters = [x for x in system.alphabet.enumerate(4)]
    irr = [x for x in letters if not system.is_reducible_letter(x)]
    return rng, system, letters, irr, WEYL_F if name == "weyl" else PBW_F


def _random_trace(rng, system, letters, max_len=4):
    return system.trace([rng.choice(letters) for _ in range(rng.randint(1, max_len))])


def structure_failures():
    bad = Counter()
    for i in range(CASES):
        rng, system, letters, irr, f = sample_case(i)
        t = _random_trace(rng, system, letters)
        u = _random_trace(rng, system, letters)
        nt, nu = system.normal_form(t), system.normal_form(u)
        # N is a homomorphism
        if system.normal_form(concat(t, u)) != concat(nt, nu):
            bad["homomorphism"] += 1
        # normal forms live exactly on the irreducible letters, both directions
        if not (system.is_irreducible(nt) and set(nt.counts) <= set(irr)):
            bad["irr-forward"] += 1
        v = _random_trace(rng, system, irr)
        if not system.is_irreducible(v) or system.normal_form(v) != v:
            bad["irr-backward"] += 1
        if system.is_irreducible(t) != (set(t.counts) <= set(irr)):
            bad["irr-letters"] += 1
        # products of irreducibles are irreducible
        w = _random_trace(rng, system, irr)
        if not system.is_irreducible(concat(v, w)):
            bad["closed-product"] += 1
        # strategy independence
        forms = {system.normal_form(t, "rightmost"), system.normal_form(t, "random", rng.randrange(2**31))}
        if forms != {nt}:
            bad["strategy"] += 1
        # evaluation constant along one-step rewrites
        value = evaluate_trace(f, t, system)
        if any(evaluate_trace(f, r, check=False) != value for r in system.one_step_reducts(t)):
            bad["evaluation"] += 1
        # h o t = f on a sampled letter
        x = rng.choice(letters)
        if not f.same(extend_homomorphism(f, universal_invariant(system, x), system), f.image(x)):
            bad["h-after-t"] += 1
    return [f"{k}: {v}/{CASES}" for k, v in sorted(bad.items())]


def test_criterion_5_structure_properties(capsys):
    _check(5, f"structure properties, {CASES} randomized cases each", structure_failures, capsys)


# -- 6 ---------------------------------------------------------------------------

def tg_failures():
    bad = []
    alphabet = CommutationAlphabet.finite_alphabet("xyz", [("x", "y")])
    reducer = SignedReducer(alphabet.commutes)
    signed = [(x, e) for x in "xyz" for e in (1, -1)]
    for n in range(7):
        for w in itertools.product(signed, repeat=n):
            irreducibles = reducer.irreducibles(w)
            if len(irreducibles) != 1 or irreducibles != {TGElement.from_signed(w, alphabet).word}:
                bad.append(w)
    total = CommutationAlphabet.finite_alphabet("xyz", "total")
    rng = random.Random(6)
    for _ in range(CASES):
        a = {x: rng.randint(-4, 4) for x in "xyz"}
        b = {x: rng.randint(-4, 4) for x in "xyz"}
        got = (TGElement.from_exponents(a, total) * TGElement.from_exponents(b, total)).exponents()
        want = {x: a[x] + b[x] for x in "xyz" if a[x] + b[x]}
        if got != want:
            bad.append((a, b))
    return bad


def test_criterion_6_tg_group_laws(capsys):
    _check(6, "signed-trace reduction unique on all words of length <= 6; abelian collapse", tg_failures, capsys)


# -- 7 ---------------------------------------------------------------------------

def convergence_failures():
    bad = []
    w = weyl_system()
    p = pbw_system("abc")
    g = graph_system()
    a = arith_prefab().system()
    runs = [
        ("weyl", w, weyl_weight, w.alphabet.enumerate(6)),
        ("pbw", p, pbw_weight("abc"), p.alphabet.enumerate(6)),
        ("graphs", g, edge_weight, g.alphabet.enumerate(4)),
        ("arith", a, arith_prefab().weight, [arith_letter(n) for n in range(2, 201)]),
    ]
    for name, system, weight, scope in runs:
        result = certify_convergence(system, weight, scope, max_trace_len=2)
        if not result.convergent:
            bad.append((name, result.status, result.counterexample and result.counterexample.to_dict()))
    conflict = finite_system("xab", "none", {"x": [["a"], ["b"]]})
    result = certify_convergence(conflict)
    peak = result.counterexample
    if result.status != "not-confluent" or peak is None or not replay_counterexample(conflict, peak):
        bad.append(("conflict", result.to_dict()))
    elif {peak.left.word, peak.right.word} != {("a",), ("b",)}:
        bad.append(("conflict-peak", peak.to_dict()))
    code, doc = run(["--no-timing", "check", "--system", str(GOLDEN / "xab_conflict.system.json")])
    if code != 2 or doc["result"].get("counterexample") is None:
        bad.append(("cli", code, doc["status"]))
    return bad


def test_criterion_7_convergence_tooling(capsys):
    _check(7, "certify Weyl, PBW, graphs, arithmetic prefab; replayable counterexample, CLI exit 2",
           convergence_failures, capsys)


# -- 8 ---------------------------------------------------------------------------

def presentation_failures():
    bad = []
    for name in ("free_one", "one_rule", "commuting_pair"):
        system = parse_system((GOLDEN / f"{name}.system.json").read_text(encoding="utf-8"))
        got = presentation_to_json(group_presentation(system))
        want = json.loads((GOLDEN / f"{name}.presentation.json").read_text(encoding="utf-8"))
        if got != want:
            bad.append((name, got["text"]))
    return bad


def test_criterion_8_presentations(capsys):
    _check(8, "group presentations match golden files", presentation_failures, capsys)


if __name__ == "__main__":
    bodies = [
        (1, "Weyl normal ordering", weyl_failures),
        (2, "Tutte polynomials", tutte_failures),
        (3, "PBW", pbw_failures),
        (4, "prefabs", prefab_failures),
        (5, "structure properties", structure_failures),
        (6, "TG group laws", tg_failures),
        (7, "convergence tooling", convergence_failures),
        (8, "presentations", presentation_failures),
    ]
    failed = 0
    for number, title, body in bodies:
        try:
            _check(number, title, body)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
