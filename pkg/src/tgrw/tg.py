"""The Tutte-Grothendieck group, the universal invariant and group presentations.

Under a convergence certificate, TG(X, theta, R) is the free partially
commutative group on the irreducible letters; its elements are reduced signed
traces. Without one, only the presentation and evaluation through a
user-supplied R-invariant map are offered.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import DomainError, PreconditionError, UnsupportedOperation
from .rewriting import RewriteSystem
from .trace import CommutationAlphabet, Letter, Trace, lex_least

Signed = tuple[Letter, int]

_SUP = {1: "", -1: "⁻¹"}


def _cancel(word: list[Signed], commutes) -> list[Signed]:
    """Delete x^e ... x^-e pairs whose in-between letters all commute with x, to a fixed point."""
    changed = True
    while changed:
        changed = False
        for j in range(1, len(word)):
            y, d = word[j]
            for i in range(j - 1, -1, -1):
                x, e = word[i]
                if x == y:
                    if e == -d:
                        del word[j]
                        del word[i]
                        changed = True
                    break
                if not commutes(x, y):
                    break
            if changed:
                break
    return word


def reduce_signed(word: Iterable[Signed], alphabet: CommutationAlphabet) -> tuple[Signed, ...]:
    word = [(x, int(e)) for x, e in word]
    for x, e in word:
        if e not in (1, -1):
            raise DomainError(f"sign of {x!r} must be +1 or -1, got {e}")
    reduced = _cancel(word, alphabet.commutes)
    if alphabet.total:
        return tuple(sorted(reduced, key=lambda s: (alphabet.key(s[0]), -s[1])))
    return lex_least(
        reduced,
        lambda a, b: alphabet.commutes(a[0], b[0]),
        lambda s: (alphabet.key(s[0]), -s[1]),
    )


@dataclass(frozen=True)
class TGElement:
    """Reduced signed trace; the empty word is the identity."""

    word: tuple[Signed, ...]
    alphabet: CommutationAlphabet = field(compare=False, repr=False)

    @classmethod
    def from_signed(cls, word: Iterable[Signed], alphabet: CommutationAlphabet) -> "TGElement":
        word = list(word)
        for x, _ in word:
            alphabet.check_letter(x)
        return cls(reduce_signed(word, alphabet), alphabet)

    @classmethod
    def identity(cls, alphabet: CommutationAlphabet) -> "TGElement":
        return cls((), alphabet)

    @classmethod
    def embed(cls, t: Trace) -> "TGElement":
        return cls.from_signed(((x, 1) for x in t.word), t.alphabet)

    @classmethod
    def from_exponents(cls, exponents: Mapping[Letter, int], alphabet: CommutationAlphabet) -> "TGElement":
        if not alphabet.total:
            raise DomainError("exponent maps only represent elements when commutation is total")
        word = []
        for x, k in exponents.items():
            word.extend([(x, 1 if k > 0 else -1)] * abs(k))
        return cls.from_signed(word, alphabet)

    def exponents(self) -> dict[Letter, int]:
        """Exponent sum of each letter: the abelianization (faithful when theta is total)."""
        out: Counter = Counter()
        for x, e in self.word:
            out[x] += e
        return {x: k for x, k in sorted(out.items(), key=lambda kv: self.alphabet.key(kv[0])) if k}

    @property
    def is_identity(self) -> bool:
        return not self.word

    def __mul__(self, other: "TGElement") -> "TGElement":
        return tg_mul(self, other)

    def __str__(self) -> str:
        if not self.word:
            return "1"
        return "·".join(x + _SUP[e] for x, e in self.word)

    def to_list(self) -> list:
        return [[x, e] for x, e in self.word]


def tg_mul(a: TGElement, b: TGElement) -> TGElement:
    if a.alphabet is not b.alphabet:
        raise DomainError("elements of different groups")
    return TGElement(reduce_signed(a.word + b.word, a.alphabet), a.alphabet)


def tg_inv(a: TGElement) -> TGElement:
    return TGElement(reduce_signed(((x, -e) for x, e in reversed(a.word)), a.alphabet), a.alphabet)


def universal_invariant(system: RewriteSystem, x: Letter) -> TGElement:
    """t(x) = N(x), embedded as a positive signed word over the irreducible letters."""
    system.require_certificate("universal_invariant")
    system.alphabet.check_letter(x)
    return TGElement.embed(system.letterwise_normal_form(system.trace([x])))


@dataclass(frozen=True)
class GroupCallbacks:
    """A target group and a letter map ``image`` into it.

    Values are compared with ``equal`` when given, else through ``encode``,
    else with ``==``.
    """

    multiply: Callable[[Any, Any], Any]
    invert: Callable[[Any], Any]
    identity: Any
    image: Callable[[Letter], Any]
    equal: Callable[[Any, Any], bool] | None = None
    encode: Callable[[Any], Any] | None = None

    def same(self, a, b) -> bool:
        if self.equal is not None:
            return bool(self.equal(a, b))
        if self.encode is not None:
            return self.encode(a) == self.encode(b)
        return a == b

    def fold(self, word: Sequence[Letter]):
        acc = self.identity
        for x in word:
            acc = self.multiply(acc, self.image(x))
        return acc


def _spot_check(f: GroupCallbacks, letters: Iterable[Letter], alphabet: CommutationAlphabet,
                system: RewriteSystem | None):
    letters = sorted(set(letters), key=alphabet.key)
    images = {x: f.image(x) for x in letters}
    for i, x in enumerate(letters):
        for y in letters[i + 1:]:
            if alphabet.commutes(x, y):
                if not f.same(f.multiply(images[x], images[y]), f.multiply(images[y], images[x])):
                    raise PreconditionError(f"f does not respect the commutation of ({x}, {y})")
    if system is not None:
        for x in letters:
            for rhs in system._rewrites(x):
                if not f.same(images[x], f.fold(rhs.word)):
                    raise PreconditionError(f"f is not R-invariant on rule {x} -> {rhs}")


def evaluate_trace(f: GroupCallbacks, t: Trace, system: RewriteSystem | None = None, check: bool = True):
    """f^S(t): fold the letter images along the canonical word.

    With ``check`` the commutation pairs among letters of ``t`` are spot
    checked, and, when ``system`` is given, R-invariance on their rules.
    """
    if check:
        _spot_check(f, t.counts, t.alphabet, system)
    return f.fold(t.word)


def extend_homomorphism(f: GroupCallbacks, e: TGElement, system: RewriteSystem | None = None, check: bool = True):
    """h(e) for the unique homomorphism h with h(t(x)) = f(x)."""
    if check:
        _spot_check(f, {x for x, _ in e.word}, e.alphabet, system)
    acc = f.identity
    for x, s in e.word:
        value = f.image(x)
        acc = f.multiply(acc, value if s > 0 else f.invert(value))
    return acc


def _power(f: GroupCallbacks, value, k: int):
    if k < 0:
        value, k = f.invert(value), -k
    acc = f.identity
    while k:
        if k & 1:
            acc = f.multiply(acc, value)
        value = f.multiply(value, value)
        k >>= 1
    return acc


def extend_exponents(f: GroupCallbacks, exponents: Mapping[Letter, int], alphabet: CommutationAlphabet,
                     system: RewriteSystem | None = None, check: bool = True):
    """h on an element of a free abelian TG group given by its exponent map.

    Same value as :func:`extend_homomorphism` on ``TGElement.from_exponents``
    without expanding the signed word; needs total commutation.
    """
    if not alphabet.total:
        raise DomainError("exponent maps only represent elements when commutation is total")
    if check:
        _spot_check(f, [x for x, k in exponents.items() if k], alphabet, system)
    acc = f.identity
    for x in sorted(exponents, key=alphabet.key):
        if exponents[x]:
            acc = f.multiply(acc, _power(f, f.image(x), exponents[x]))
    return acc


@dataclass(frozen=True)
class Presentation:
    """Generators and relations ``lhs = rhs`` between signed words."""

    generators: tuple[Letter, ...]
    relations: tuple[tuple[tuple[Signed, ...], tuple[Signed, ...]], ...]

    def __post_init__(self):
        gens = set(self.generators)
        for lhs, rhs in self.relations:
            for x, _ in lhs + rhs:
                if x not in gens:
                    raise DomainError(f"relation mentions {x!r}, not a generator")

    def relators(self) -> list[tuple[Signed, ...]]:
        """Each relation as a single word lhs * rhs^-1, freely reduced."""
        out = []
        for lhs, rhs in self.relations:
            word: list[Signed] = []
            for s in lhs + tuple((x, -e) for x, e in reversed(rhs)):
                if word and word[-1] == (s[0], -s[1]):
                    word.pop()
                else:
                    word.append(s)
            out.append(tuple(word))
        return out

    def to_text(self) -> str:
        rels = ", ".join("·".join(x + _SUP[e] for x, e in r) for r in self.relators())
        return f"⟨{','.join(self.generators)} | {rels}⟩"

    def to_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "relations": [
                {"lhs": [[x, e] for x, e in lhs], "rhs": [[x, e] for x, e in rhs]}
                for lhs, rhs in self.relations
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Presentation":
        return cls(
            tuple(doc["generators"]),
            tuple(
                (tuple((x, int(e)) for x, e in r["lhs"]), tuple((x, int(e)) for x, e in r["rhs"]))
                for r in doc["relations"]
            ),
        )


def group_presentation(system: RewriteSystem, letters: Sequence[Letter] | None = None) -> Presentation:
    """Generators X; relators xyx^-1y^-1 for commuting pairs, and x = w for every rule."""
    alphabet = system.alphabet
    if letters is None:
        if not alphabet.finite:
            raise UnsupportedOperation("group_presentation needs a finite, enumerable alphabet")
        letters = alphabet.letters
    letters = tuple(letters)
    for x in letters:
        alphabet.check_letter(x)
    relations = []
    for i, x in enumerate(letters):
        for y in letters[i + 1:]:
            if alphabet.commutes(x, y):
                relations.append((((x, 1), (y, 1), (x, -1), (y, -1)), ()))
    for x in letters:
        for rhs in system._rewrites(x):
            relations.append((((x, 1),), tuple((y, 1) for y in rhs.word)))
    return Presentation(letters, tuple(relations))
