"""Built-in totally commutative systems whose letters are words or indices.

Weyl normal ordering (ab -> ba + 1), PBW re-ordering, and two prefabs: the
shuffle prefab on words and the multiplicative prefab on indices x_n.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import InputError
from .rewriting import Budgets, RewriteSystem
from .trace import CommutationAlphabet, Letter

UNIT = "𝟙"
"""The empty word as a letter: the constant term 1. Never rewritten."""


def _words(base: str, max_len: int) -> Iterable[str]:
    for n in range(1, max_len + 1):
        for w in itertools.product(base, repeat=n):
            yield "".join(w)


def inversions(word: str, rank: dict[str, int]) -> int:
    return sum(1 for i, j in itertools.combinations(range(len(word)), 2) if rank[word[i]] > rank[word[j]])


# -- Weyl algebra -------------------------------------------------------------

def weyl_letter(word: str, central: bool = False) -> Letter:
    """Token of the letter ``word``; with ``central`` the c's (which commute with a, b) move to the front."""
    allowed = "abc" if central else "ab"
    if word == UNIT:
        return UNIT
    if any(ch not in allowed for ch in word):
        raise InputError(f"{word!r} is not a word over {{{', '.join(allowed)}}}")
    if central:
        word = "c" * word.count("c") + word.replace("c", "")
    return word or UNIT


def _is_weyl_letter(token, central: bool) -> bool:
    if not isinstance(token, str):
        return False
    if token == UNIT:
        return True
    try:
        return bool(token) and weyl_letter(token, central) == token
    except InputError:
        return False


def weyl_rules(x: Letter, central: bool = False) -> list[tuple[Letter, Letter]]:
    """For each factor ab of x = u·ab·v: the right-hand side {u·ba·v, u·v} (u·v = 1 when empty)."""
    if x == UNIT:
        return []
    cs = x[: len(x) - len(x.lstrip("c"))] if central else ""
    core = x[len(cs):]
    out = []
    for i in range(len(core) - 1):
        if core[i:i + 2] == "ab":
            u, v = core[:i], core[i + 2:]
            out.append((cs + u + "ba" + v, cs + u + v or UNIT))
    return out


def weyl_weight(x: Letter) -> int:
    """1 + #{(i, j): i < j, x_i = a, x_j = b}; c's are ignored."""
    if x == UNIT:
        return 1
    count = 0
    a_seen = 0
    for ch in x:
        if ch == "a":
            a_seen += 1
        elif ch == "b":
            count += a_seen
    return 1 + count


def weyl_system(central: bool = False, budgets: Budgets = Budgets()) -> RewriteSystem:
    base = "abc" if central else "ab"

    def enumerate_letters(max_len):
        letters = sorted({weyl_letter(w, central) for w in _words(base, max_len)}, key=lambda w: (len(w), w))
        return [UNIT] + letters

    alphabet = CommutationAlphabet(
        is_letter=lambda t: _is_weyl_letter(t, central),
        total=True,
        enumerate_up_to=enumerate_letters,
        name="weyl-central" if central else "weyl",
    )
    return RewriteSystem(
        alphabet, lambda x: weyl_rules(x, central), budgets,
        name=alphabet.name, source={"pack": "weyl", "central": central},
    )


def weyl_normal_order(word: str, central: bool = False, system: RewriteSystem | None = None) -> dict[str, int]:
    """Normal-ordered form of ``word`` as {b^i a^j word: coefficient}; the constant term is keyed ""."""
    if not word:
        raise InputError("weyl_normal_order needs a nonempty word")
    system = system or weyl_system(central)
    counts = system.normal_counts(weyl_letter(word, central))
    return {("" if x == UNIT else x): k for x, k in sorted(counts.items(), key=lambda kv: (len(kv[0]), kv[0]))}


# -- PBW re-ordering ----------------------------------------------------------

def _base_rank(base: Sequence[str]) -> dict[str, int]:
    base = list(base)
    if not base or any(not isinstance(g, str) or len(g) != 1 for g in base):
        raise InputError("the ordered base must be a nonempty sequence of single characters")
    if len(set(base)) != len(base):
        raise InputError("the ordered base has repeated letters")
    return {g: i for i, g in enumerate(base)}


def pbw_rules(x: Letter, rank: dict[str, int]) -> list[tuple[Letter]]:
    """One rule per descent h·g (g < h): swap it."""
    return [
        (x[:i] + x[i + 1] + x[i] + x[i + 2:],)
        for i in range(len(x) - 1)
        if rank[x[i]] > rank[x[i + 1]]
    ]


def pbw_system(base: Sequence[str] = "abc", budgets: Budgets = Budgets()) -> RewriteSystem:
    rank = _base_rank(base)
    base_str = "".join(base)
    alphabet = CommutationAlphabet(
        is_letter=lambda t: isinstance(t, str) and bool(t) and all(ch in rank for ch in t),
        total=True,
        enumerate_up_to=lambda max_len: list(_words(base_str, max_len)),
        name=f"pbw[{base_str}]",
    )
    return RewriteSystem(
        alphabet, lambda x: pbw_rules(x, rank), budgets,
        name=alphabet.name, source={"pack": "pbw", "base": base_str},
    )


def pbw_weight(base: Sequence[str]) -> Callable[[Letter], int]:
    rank = _base_rank(base)
    return lambda x: 1 + inversions(x, rank)


def pbw_normal_form(word: str, base: Sequence[str] = "abc", system: RewriteSystem | None = None) -> dict[str, int]:
    system = system or pbw_system(base)
    system.alphabet.check_letter(word)
    return dict(system.normal_counts(word))


# -- prefabs --------------------------------------------------------------------

@dataclass(frozen=True)
class Prefab:
    """A commutative multivalued composition with identity, seen as a rewriting system.

    ``decompositions(x)`` lists the nontrivial ways of writing x as a
    composite (tuples of non-identity elements); each becomes a rule
    x -> y1 + ... + yk. ``compose(y, z)`` returns y o z and is used only for
    sampled checks.
    """

    name: str
    identity: str
    is_element: Callable[[str], bool]
    compose: Callable[[str, str], frozenset]
    decompositions: Callable[[str], Iterable[tuple[str, ...]]]
    enumerate_up_to: Callable[[int], Iterable[str]] | None = None
    key: Callable[[str], object] = lambda x: x
    weight: Callable[[str], int] | None = None

    def system(self, budgets: Budgets = Budgets(), source: dict | None = None) -> RewriteSystem:
        alphabet = CommutationAlphabet(
            is_letter=lambda t: isinstance(t, str) and t != self.identity and self.is_element(t),
            key=self.key,
            total=True,
            enumerate_up_to=self.enumerate_up_to,
            name=self.name,
        )
        return RewriteSystem(
            alphabet, lambda x: list(self.decompositions(x)), budgets,
            name=self.name, source=source or {"pack": "prefab", "kind": self.name},
        )


def shuffle_set(w1: str, w2: str) -> set[str]:
    """All interleavings of w1 and w2 that keep each word's internal order."""
    if not w1 or not w2:
        raise InputError("shuffle_set needs two nonempty words")
    n = len(w1) + len(w2)
    out = set()
    for positions in itertools.combinations(range(n), len(w1)):
        chosen = set(positions)
        it1, it2 = iter(w1), iter(w2)
        out.add("".join(next(it1) if k in chosen else next(it2) for k in range(n)))
    return out


def shuffle_decompositions(w: str) -> list[tuple[str, str]]:
    """Unordered pairs {w', w''} of nonempty words with w a shuffle of w' and w''."""
    n = len(w)
    pairs = set()
    for r in range(1, n):
        for positions in itertools.combinations(range(n), r):
            chosen = set(positions)
            left = "".join(w[k] for k in positions)
            right = "".join(w[k] for k in range(n) if k not in chosen)
            pairs.add(tuple(sorted((left, right))))
    return sorted(pairs, key=lambda p: (len(p[0]), p))


def commutative_image(w: str) -> dict[str, int]:
    return dict(Counter(w))


def shuffle_prefab(base: str) -> Prefab:
    base = "".join(dict.fromkeys(base))
    if not base:
        raise InputError("the shuffle prefab needs a nonempty base alphabet")
    return Prefab(
        name=f"shuffle[{base}]",
        identity="",
        is_element=lambda t: all(ch in base for ch in t),
        compose=lambda y, z: frozenset(shuffle_set(y, z)),
        decompositions=shuffle_decompositions,
        enumerate_up_to=lambda max_len: list(_words(base, max_len)),
        key=lambda w: (len(w), w),
        weight=len,
    )


def shuffle_prefab_invariant(w: str, system: RewriteSystem | None = None) -> dict[str, int]:
    if not w:
        raise InputError("shuffle_prefab_invariant needs a nonempty word")
    system = system or shuffle_prefab("".join(dict.fromkeys(w))).system()
    system.alphabet.check_letter(w)
    return dict(sorted(system.normal_counts(w).items()))


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _factorizations(n: int, largest: int) -> Iterable[tuple[int, ...]]:
    """Non-increasing tuples of factors >= 2, each <= ``largest``, with product n."""
    if n == 1:
        yield ()
        return
    for f in reversed(_divisors(n)):
        if 2 <= f <= largest:
            for rest in _factorizations(n // f, f):
                yield (f,) + rest


def arith_decompositions(n: int) -> list[dict[int, int]]:
    """All {i: k_i} with i >= 2 and prod i^k_i = n, including the trivial {n: 1}."""
    if not isinstance(n, int) or n < 2:
        raise InputError(f"arithmetic prefab indices start at 2, got {n!r}")
    return [dict(sorted(Counter(f).items())) for f in sorted(_factorizations(n, n))]


def arith_compose(m: int, n: int) -> set[frozenset]:
    """x_m o x_n = {f + g : f in D(x_m), g in D(x_n)}, each sum a multiset of indices."""
    out = set()
    for f in arith_decompositions(m):
        for g in arith_decompositions(n):
            out.add(frozenset((Counter(f) + Counter(g)).items()))
    return out


def arith_letter(n: int) -> Letter:
    return f"x{n}"


def arith_index(token) -> int:
    if not isinstance(token, str) or not token.startswith("x") or not token[1:].isdigit():
        raise InputError(f"{token!r} is not an arithmetic prefab letter x<n>")
    n = int(token[1:])
    if n < 2 or token != arith_letter(n):
        raise InputError(f"{token!r} is not an arithmetic prefab letter with index >= 2")
    return n


def _is_arith(token) -> bool:
    try:
        arith_index(token)
    except InputError:
        return False
    return True


def _arith_rules(x: Letter) -> list[tuple[Letter, ...]]:
    n = arith_index(x)
    out = []
    for f in sorted(_factorizations(n, n)):
        if len(f) > 1:
            out.append(tuple(arith_letter(i) for i in sorted(f)))
    return out


def big_omega(n: int) -> int:
    count, p = 0, 2
    while p * p <= n:
        while n % p == 0:
            n //= p
            count += 1
        p += 1
    return count + (1 if n > 1 else 0)


def arith_prefab() -> Prefab:
    return Prefab(
        name="arith",
        identity="x1",
        is_element=_is_arith,
        compose=lambda y, z: frozenset(arith_compose(arith_index(y), arith_index(z))),
        decompositions=_arith_rules,
        enumerate_up_to=lambda max_n: [arith_letter(n) for n in range(2, max_n + 1)],
        key=arith_index,
        weight=lambda x: 1 + big_omega(arith_index(x)),
    )


def arith_invariant(m: int, system: RewriteSystem | None = None) -> dict[int, int]:
    """Normal form of x_m as {prime: exponent}."""
    if not isinstance(m, int) or m < 2:
        raise InputError(f"arith_invariant needs m >= 2, got {m!r}")
    system = system or _arith_system()
    counts = system.normal_counts(arith_letter(m))
    return {arith_index(x): k for x, k in sorted(counts.items(), key=lambda kv: arith_index(kv[0]))}


_ARITH: list[RewriteSystem] = []


def _arith_system() -> RewriteSystem:
    if not _ARITH:
        _ARITH.append(arith_prefab().system(source={"pack": "prefab", "kind": "arith"}))
    return _ARITH[0]
