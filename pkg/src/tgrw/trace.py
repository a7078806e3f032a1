"""Commutation alphabets and traces (elements of free partially commutative semigroups).

A trace is stored as the lexicographically least word of its class under
swapping adjacent commuting letters, so equality of traces is plain equality
of tuples.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterable, Iterator, Sequence

from .errors import DomainError, InputError

Letter = str


def _identity(x):
    return x


@dataclass(frozen=True, eq=False)
class CommutationAlphabet:
    """Letters, a total order on them and an irreflexive symmetric commutation relation.

    ``relation`` is only consulted for distinct letters; a letter never
    commutes with itself. ``total=True`` means every pair of distinct letters
    commutes (the free commutative case), ``free=True`` that no pair does.
    """

    is_letter: Callable[[Letter], bool]
    relation: Callable[[Letter, Letter], bool] | None = None
    key: Callable[[Letter], Any] = _identity
    enumerate_up_to: Callable[[int], Iterable[Letter]] | None = None
    letters: tuple[Letter, ...] | None = None
    total: bool = False
    name: str = ""

    def __post_init__(self):
        if self.total and self.relation is not None:
            raise InputError("a totally commutative alphabet takes no relation")

    @property
    def free(self) -> bool:
        return not self.total and self.relation is None

    @property
    def finite(self) -> bool:
        return self.letters is not None

    @classmethod
    def finite_alphabet(cls, letters: Iterable[Letter], commutations="none", name="") -> "CommutationAlphabet":
        """Finite alphabet; ``commutations`` is "none", "total" or an iterable of pairs.

        The letter order is the order in which ``letters`` are listed.
        """
        letters = tuple(letters)
        if len(set(letters)) != len(letters):
            raise InputError("duplicate letters in alphabet")
        for x in letters:
            if not isinstance(x, str) or not x:
                raise InputError(f"letters must be nonempty strings, got {x!r}")
        members = frozenset(letters)
        rank = {x: i for i, x in enumerate(letters)}
        if commutations == "none":
            relation, total = None, False
        elif commutations == "total":
            relation, total = None, True
        else:
            pairs = set()
            for pair in commutations:
                x, y = pair
                if x not in members or y not in members:
                    raise InputError(f"commutation pair {pair!r} mentions an unknown letter")
                if x == y:
                    raise InputError(f"commutation must be irreflexive, got ({x}, {x})")
                pairs.add(frozenset((x, y)))
            frozen = frozenset(pairs)
            relation, total = (lambda a, b: frozenset((a, b)) in frozen), False
        return cls(
            is_letter=members.__contains__,
            relation=relation,
            key=rank.__getitem__,
            enumerate_up_to=lambda _size: letters,
            letters=letters,
            total=total,
            name=name,
        )

    def commutes(self, x: Letter, y: Letter) -> bool:
        if x == y:
            return False
        if self.total:
            return True
        if self.relation is None:
            return False
        return bool(self.relation(x, y))

    def check_letter(self, x: Letter) -> Letter:
        if not isinstance(x, str) or not self.is_letter(x):
            raise InputError(f"{x!r} is not a letter of alphabet {self.name or '?'}")
        return x

    def enumerate(self, size: int) -> list[Letter]:
        if self.enumerate_up_to is None:
            raise DomainError(f"alphabet {self.name or '?'} has no enumerator")
        return list(self.enumerate_up_to(size))

    def commuting_pairs(self) -> Iterator[tuple[Letter, Letter]]:
        """Unordered commuting pairs of a finite alphabet, in letter order."""
        if self.letters is None:
            raise DomainError("commuting pairs are only listed for finite alphabets")
        for i, x in enumerate(self.letters):
            for y in self.letters[i + 1:]:
                if self.commutes(x, y):
                    yield x, y

    def restrict(self, member_of_y: Callable[[Letter], bool], name="") -> "CommutationAlphabet":
        """The sub-alphabet (Y, theta restricted to Y)."""
        letters = None
        if self.letters is not None:
            letters = tuple(x for x in self.letters if member_of_y(x))
        enum = None
        if self.enumerate_up_to is not None:
            parent = self.enumerate_up_to
            enum = lambda size: [x for x in parent(size) if member_of_y(x)]
        return CommutationAlphabet(
            is_letter=lambda x: self.is_letter(x) and member_of_y(x),
            relation=self.relation,
            key=self.key,
            enumerate_up_to=enum,
            letters=letters,
            total=self.total,
            name=name or f"{self.name}|Y",
        )


def lex_least(word: Sequence, commutes: Callable[[Any, Any], bool], key: Callable = _identity) -> tuple:
    """Lexicographically least word equivalent to ``word`` under commuting swaps.

    Greedy: repeatedly emit the smallest letter among the occurrences that no
    earlier remaining occurrence blocks.
    """
    rest = list(word)
    out = []
    while rest:
        best = -1
        best_key = None
        blockers: list = []
        blocker_set: set = set()
        for i, x in enumerate(rest):
            if x not in blocker_set and all(commutes(y, x) for y in blockers):
                k = key(x)
                if best < 0 or k < best_key:
                    best, best_key = i, k
            if x not in blocker_set:
                blocker_set.add(x)
                blockers.append(x)
        out.append(rest.pop(best))
    return tuple(out)


@dataclass(frozen=True)
class Trace:
    """Element of S(X, theta), held as its lexicographically least word.

    Build traces with :func:`canonicalize`; the constructor trusts its input.
    """

    word: tuple[Letter, ...]
    alphabet: CommutationAlphabet = field(compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.word)

    def __iter__(self):
        return iter(self.word)

    def __str__(self) -> str:
        return "·".join(self.word)

    @cached_property
    def counts(self) -> Counter:
        return Counter(self.word)

    def letters(self) -> set[Letter]:
        return set(self.word)


def canonical_word(word: Sequence[Letter], alphabet: CommutationAlphabet) -> tuple[Letter, ...]:
    """Canonical word of a (possibly empty) sequence of already validated letters."""
    if alphabet.total:
        return tuple(sorted(word, key=alphabet.key))
    if alphabet.free:
        return tuple(word)
    return lex_least(word, alphabet.commutes, alphabet.key)


def canonicalize(word: Iterable[Letter], alphabet: CommutationAlphabet) -> Trace:
    word = tuple(word)
    if not word:
        raise DomainError("traces are nonempty: the empty word is not an element of S(X, theta)")
    for x in word:
        alphabet.check_letter(x)
    return Trace(canonical_word(word, alphabet), alphabet)


def concat(t: Trace, u: Trace) -> Trace:
    if t.alphabet is not u.alphabet:
        raise DomainError("cannot concatenate traces over different alphabets")
    return Trace(canonical_word(t.word + u.word, t.alphabet), t.alphabet)


def letter_count(t: Trace, x: Letter) -> int:
    t.alphabet.check_letter(x)
    return t.counts.get(x, 0)


def supported_on(t: Trace, member_of_y: Callable[[Letter], bool]) -> bool:
    return all(member_of_y(x) for x in t.counts)
