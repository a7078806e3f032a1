"""Random convergent systems over partially commutative alphabets, with matching target groups.

Each letter carries a set of colours and two letters commute iff their
colour sets are disjoint. Reducible letters rewrite into earlier letters and
inherit the union of their colours, so a free occurrence next to a rewritten
letter commutes with everything the rule produces. A second rule, when
present, is a one-step reduct of the first right-hand side, which keeps every
rule-level peak joinable.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from tgrw import GroupCallbacks, certify_convergence, finite_system

COLOURS = 4
S3 = list(itertools.permutations(range(3)))


def compose(p, q):
    """(p * q)(i) = p(q(i))."""
    return tuple(p[i] for i in q)


def inverse(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


IDENTITY = tuple(range(3))


@dataclass
class ColouredSystem:
    system: object
    colours: dict
    irreducible: list
    reducible: list
    group: GroupCallbacks


def _random_colours(rng):
    k = rng.randint(1, 2)
    return frozenset(rng.sample(range(COLOURS), k))


@lru_cache(maxsize=None)
def coloured_system(seed: int) -> ColouredSystem:
    rng = random.Random(seed)
    irreducible = [f"i{k}" for k in range(rng.randint(2, 4))]
    colours = {x: _random_colours(rng) for x in irreducible}
    reducible = []
    rules = {}
    for k in range(rng.randint(1, 4)):
        x = f"r{k}"
        earlier = irreducible + reducible
        rhs = [rng.choice(earlier) for _ in range(rng.randint(1, 3))]
        rules[x] = [rhs]
        colours[x] = frozenset().union(*(colours[y] for y in rhs))
        expandable = [p for p, y in enumerate(rhs) if y in rules]
        if expandable and rng.random() < 0.7:
            p = rng.choice(expandable)
            rules[x].append(rhs[:p] + list(rules[rhs[p]][0]) + rhs[p + 1:])
        reducible.append(x)
    letters = irreducible + reducible
    pairs = [(x, y) for x, y in itertools.combinations(letters, 2) if not colours[x] & colours[y]]
    system = finite_system(letters, pairs, rules, name=f"coloured-{seed}")

    # target: one copy of S3 per colour; a letter acts only on its colours
    images = {}
    for x in irreducible:
        images[x] = tuple(rng.choice(S3) if c in colours[x] else IDENTITY for c in range(COLOURS))

    def mul(a, b):
        return tuple(compose(p, q) for p, q in zip(a, b))

    unit = (IDENTITY,) * COLOURS
    for x in reducible:
        acc = unit
        for y in rules[x][0]:
            acc = mul(acc, images[y])
        images[x] = acc
    group = GroupCallbacks(
        multiply=mul,
        invert=lambda a: tuple(inverse(p) for p in a),
        identity=unit,
        image=images.__getitem__,
    )
    return ColouredSystem(system, colours, irreducible, reducible, group)


@lru_cache(maxsize=None)
def certified(seed: int):
    cs = coloured_system(seed)
    report = certify_convergence(cs.system, max_trace_len=2)
    return cs.system.with_certificate(report), report
