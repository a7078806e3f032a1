"""Alphabetic rewriting on traces: one-step reducts, normalization, Thue equivalence."""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Any, Callable, Iterable, Iterator, Sequence

from .errors import DomainError, InputError, ResourceError, UnsupportedOperation
from .trace import CommutationAlphabet, Letter, Trace, canonical_word, canonicalize

RuleGenerator = Callable[[Letter], Iterable[Sequence[Letter]]]

STRATEGIES = ("leftmost", "rightmost", "random")


@dataclass(frozen=True)
class Budgets:
    max_steps: int = 100_000
    max_nodes: int = 10_000
    max_len: int = 10_000

    def __post_init__(self):
        for name in ("max_steps", "max_nodes", "max_len"):
            if getattr(self, name) <= 0:
                raise InputError(f"budget {name} must be positive")


@dataclass(frozen=True)
class ReductionReport:
    """Outcome of :meth:`RewriteSystem.normalize`.

    ``result`` is the irreducible trace reached, or None when a budget ran
    out; ``last`` is always the last trace reached.
    """

    result: Trace | None
    last: Trace
    steps: int
    budget_hit: bool = False
    failure: str | None = None

    @property
    def ok(self) -> bool:
        return self.result is not None


@dataclass(frozen=True)
class Reducts:
    """A deduplicated set of one-step reducts; ``truncated`` flags a budget cut."""

    traces: frozenset
    truncated: bool = False

    def __iter__(self) -> Iterator[Trace]:
        return iter(sorted(self.traces, key=lambda t: t.word))

    def __len__(self) -> int:
        return len(self.traces)

    def __contains__(self, t) -> bool:
        return t in self.traces


def dependence_masks(word: Sequence[Letter], commutes) -> tuple[list[int], list[int]]:
    """Strict predecessor / successor bitmasks of each occurrence in the dependence order."""
    n = len(word)
    pred = [0] * n
    for k in range(n):
        m = 0
        for j in range(k):
            if not commutes(word[j], word[k]):
                m |= pred[j] | (1 << j)
        pred[k] = m
    succ = [0] * n
    for k in range(n):
        bit = 1 << k
        for j in range(k + 1, n):
            if pred[j] & bit:
                succ[k] |= 1 << j
    return pred, succ


@dataclass(frozen=True, eq=False)
class RewriteSystem:
    """An alphabetic rewriting system R on S(X, theta).

    ``rules`` maps a letter to the right-hand sides of its rules, each a
    nonempty sequence of letters. Rule generation is memoized per instance.
    ``certificate`` is a convergence report; it unlocks the operations that
    need a unique normal form.
    """

    alphabet: CommutationAlphabet
    rules: RuleGenerator
    budgets: Budgets = Budgets()
    certificate: Any = None
    name: str = ""
    source: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_rewrites", lru_cache(maxsize=None)(self._compute_rewrites))
        object.__setattr__(self, "_nf_active", set())
        object.__setattr__(self, "_letter_nf", lru_cache(maxsize=None)(self._compute_letter_nf))
        object.__setattr__(
            self, "_letter_nf_trace", lru_cache(maxsize=None)(lambda x: self.normal_form(self.trace([x])))
        )

    # -- rules -----------------------------------------------------------
    def _compute_rewrites(self, x: Letter) -> tuple[Trace, ...]:
        out = []
        for rhs in self.rules(x):
            if isinstance(rhs, Trace):
                rhs = rhs.word
            rhs = tuple(rhs)
            if not rhs:
                raise DomainError(f"rule for {x!r} has an empty right-hand side: rules must map into S, not M")
            out.append(canonicalize(rhs, self.alphabet))
        return tuple(out)

    def letter_rewrites(self, x: Letter) -> tuple[Trace, ...]:
        self.alphabet.check_letter(x)
        return self._rewrites(x)

    def is_reducible_letter(self, x: Letter) -> bool:
        return bool(self._rewrites(x))

    def is_irreducible(self, t: Trace) -> bool:
        return not any(self._rewrites(x) for x in t.counts)

    def irreducible_letters(self, size: int) -> list[Letter]:
        return [x for x in self.alphabet.enumerate(size) if not self._rewrites(x)]

    def trace(self, word: Iterable[Letter]) -> Trace:
        return canonicalize(word, self.alphabet)

    def with_budgets(self, budgets: Budgets) -> "RewriteSystem":
        return replace(self, budgets=budgets)

    def with_certificate(self, certificate) -> "RewriteSystem":
        return replace(self, certificate=certificate)

    @property
    def convergent(self) -> bool:
        return self.certificate is not None and bool(getattr(self.certificate, "convergent", False))

    def require_certificate(self, what: str):
        if not self.convergent:
            raise UnsupportedOperation(
                f"{what} needs a convergence certificate (certify_convergence) which this system lacks"
            )

    # -- one step --------------------------------------------------------
    def _relevant(self, word, free_mask: int, rhs: tuple) -> list[int]:
        if self.alphabet.total:
            return []
        rhs_letters = set(rhs)
        commutes = self.alphabet.commutes
        return [
            j for j in range(len(word))
            if free_mask >> j & 1 and not all(commutes(word[j], y) for y in rhs_letters)
        ]

    def _split_reduct(self, word, i: int, rhs: tuple, u_mask: int) -> Trace:
        u = [word[j] for j in range(len(word)) if u_mask >> j & 1]
        v = [word[j] for j in range(len(word)) if j != i and not u_mask >> j & 1]
        return Trace(canonical_word(u + list(rhs) + v, self.alphabet), self.alphabet)

    def _splits(self, word, i, rhs, pred, succ) -> Iterator[int]:
        """Left factors u (order ideals of the dependence order) covering every distinct reduct."""
        n = len(word)
        full = (1 << n) - 1
        bit = 1 << i
        free = full & ~(pred[i] | succ[i] | bit)
        relevant = self._relevant(word, free, rhs)
        rel_mask = sum(1 << j for j in relevant)
        for sub in range(1 << len(relevant)):
            a_mask = 0
            down = pred[i]
            for k, j in enumerate(relevant):
                if sub >> k & 1:
                    a_mask |= 1 << j
                    down |= pred[j] | (1 << j)
            if down & (succ[i] | bit):
                continue
            if down & rel_mask & ~a_mask:
                continue
            yield down

    def one_step_reducts(self, t: Trace) -> Reducts:
        word = t.word
        budget = self.budgets.max_nodes
        found: set[Trace] = set()
        explored = 0
        if self.alphabet.total:
            seen_letters = set()
            for i, x in enumerate(word):
                if x in seen_letters:
                    continue
                seen_letters.add(x)
                for rhs in self._rewrites(x):
                    found.add(self._split_reduct(word, i, rhs.word, (1 << i) - 1))
                    if len(found) > budget:
                        return Reducts(frozenset(list(found)[:budget]), True)
            return Reducts(frozenset(found))
        pred, succ = dependence_masks(word, self.alphabet.commutes)
        for i, x in enumerate(word):
            for rhs in self._rewrites(x):
                for u_mask in self._splits(word, i, rhs.word, pred, succ):
                    explored += 1
                    found.add(self._split_reduct(word, i, rhs.word, u_mask))
                    if len(found) >= budget or explored >= 8 * budget:
                        return Reducts(frozenset(found), True)
        return Reducts(frozenset(found))

    # -- normalization ---------------------------------------------------
    def _step(self, word, strategy: str, rng: random.Random):
        reducible = [i for i, x in enumerate(word) if self._rewrites(x)]
        if not reducible:
            return None
        if strategy == "leftmost":
            i = reducible[0]
            rhs = self._rewrites(word[i])[0]
            return self._split_reduct(word, i, rhs.word, (1 << i) - 1)
        if strategy == "rightmost":
            i = reducible[-1]
            rhs = self._rewrites(word[i])[0]
            return self._split_reduct(word, i, rhs.word, (1 << i) - 1)
        i = rng.choice(reducible)
        rhs = rng.choice(self._rewrites(word[i]))
        u_mask = (1 << i) - 1
        if not self.alphabet.total:
            pred, succ = dependence_masks(word, self.alphabet.commutes)
            splits = list(self._splits(word, i, rhs.word, pred, succ))
            if splits:
                u_mask = rng.choice(splits)
        return self._split_reduct(word, i, rhs.word, u_mask)

    def normalize(self, t: Trace, strategy: str = "leftmost", seed: int | None = None) -> ReductionReport:
        """Rewrite ``t`` until irreducible or a budget runs out.

        The default strategy rewrites the leftmost reducible occurrence of the
        canonical word with its first rule, keeping the canonical prefix and
        suffix as context.
        """
        if strategy not in STRATEGIES:
            raise InputError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
        rng = random.Random(seed)
        current = t
        steps = 0
        while True:
            nxt = self._step(current.word, strategy, rng)
            if nxt is None:
                return ReductionReport(current, current, steps)
            if steps >= self.budgets.max_steps:
                return ReductionReport(None, current, steps, True, "max_steps")
            steps += 1
            current = nxt
            if len(current) > self.budgets.max_len:
                return ReductionReport(None, current, steps, True, "max_len")

    def normal_form(self, t: Trace, strategy: str = "leftmost", seed: int | None = None) -> Trace:
        report = self.normalize(t, strategy, seed)
        if report.result is None:
            raise ResourceError(f"normalization ran out of budget ({report.failure}) after {report.steps} steps")
        return report.result

    # -- memoized letterwise normal forms ---------------------------------
    def _compute_letter_nf(self, x: Letter) -> tuple[Counter, int]:
        """(normal form counts, number of rewriting steps taken) for one letter."""
        rewrites = self._rewrites(x)
        if not rewrites:
            return Counter({x: 1}), 0
        if x in self._nf_active:
            raise ResourceError(f"letterwise normalization of {x!r} reaches {x!r} again")
        self._nf_active.add(x)
        try:
            out: Counter = Counter()
            steps = 1
            for y, k in rewrites[0].counts.items():
                nf, s = self._letter_nf(y)
                steps += k * s
                for z, m in nf.items():
                    out[z] += k * m
        finally:
            self._nf_active.discard(x)
        return out, steps

    def normal_counts(self, t: Trace | Letter) -> Counter:
        """Normal form as a multiplicity map, rewriting each letter independently.

        Rewriting letters one at a time with their first rule is a legitimate
        reduction sequence, so under convergence this is N(t). Results are
        memoized per letter on this system; the step and length budgets apply
        to the reduction sequence the memo stands for. For a totally
        commutative alphabet the map determines the trace.
        """
        if isinstance(t, str):
            t = self.trace([t])
        out: Counter = Counter()
        steps = 0
        for x, k in t.counts.items():
            try:
                nf, s = self._letter_nf(x)
            except RecursionError:
                raise ResourceError(f"letterwise normalization of {x!r} did not bottom out") from None
            steps += k * s
            for z, m in nf.items():
                out[z] += k * m
        if steps > self.budgets.max_steps:
            raise ResourceError(f"normalization needs {steps} steps, over max_steps={self.budgets.max_steps}")
        if sum(out.values()) > self.budgets.max_len:
            raise ResourceError(f"normal form longer than max_len={self.budgets.max_len}")
        return out

    def letterwise_normal_form(self, t: Trace) -> Trace:
        if self.alphabet.total:
            word = list(self.normal_counts(t).elements())
        else:
            word = [z for x in t.word for z in self._letter_nf_trace(x).word]
        if len(word) > self.budgets.max_len:
            raise ResourceError(f"normal form longer than max_len={self.budgets.max_len}")
        return Trace(canonical_word(word, self.alphabet), self.alphabet)

    # -- Thue congruence -------------------------------------------------
    def thue_equivalent(self, t: Trace, u: Trace) -> bool:
        self.require_certificate("thue_equivalent")
        return self.normal_form(t) == self.normal_form(u)


def finite_rule_generator(rules: dict[Letter, Sequence[Sequence[Letter]]]) -> RuleGenerator:
    table = {x: tuple(tuple(rhs) for rhs in rhss) for x, rhss in rules.items()}
    return lambda x: table.get(x, ())


def finite_system(letters, commutations="none", rules=None, budgets=Budgets(), name="") -> RewriteSystem:
    """System over a finite alphabet; ``rules`` maps letters to lists of right-hand words."""
    alphabet = CommutationAlphabet.finite_alphabet(letters, commutations, name=name)
    rules = dict(rules or {})
    for x, rhss in rules.items():
        alphabet.check_letter(x)
        for rhs in rhss:
            if not rhs:
                raise InputError(f"rule for {x!r} has an empty right-hand side: rules must map into S, not M")
            for y in rhs:
                alphabet.check_letter(y)
    return RewriteSystem(alphabet, finite_rule_generator(rules), budgets, name=name)
