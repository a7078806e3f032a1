"""Termination certificates and bounded local-confluence checks.

Every positive answer here is a claim about the checked scope only; a
report never upgrades a sampled check into a global proof.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .errors import InputError, ResourceError
from .rewriting import Budgets, RewriteSystem
from .trace import Letter, Trace

CERTIFIED = "certified"
UNKNOWN = "unknown"
REFUTED = "refuted-by-cycle"
VERIFIED = "verified-on-scope"
COUNTEREXAMPLE = "counterexample"
EXHAUSTED = "budget-exhausted"
UNCHECKED = "unchecked"


@dataclass(frozen=True)
class Peak:
    """A peak ``left <= source => right`` whose two sides have disjoint reduct closures."""

    source: Trace
    left: Trace
    right: Trace

    def to_dict(self) -> dict:
        return {"source": list(self.source.word), "left": list(self.left.word), "right": list(self.right.word)}


@dataclass(frozen=True)
class ConvergenceReport:
    termination: str = UNKNOWN
    confluence: str = UNCHECKED
    scope: dict = field(default_factory=dict)
    counterexample: Peak | None = None
    detail: str = ""

    @property
    def terminating(self) -> bool:
        return self.termination == CERTIFIED

    @property
    def convergent(self) -> bool:
        return self.termination == CERTIFIED and self.confluence == VERIFIED

    @property
    def status(self) -> str:
        if self.convergent:
            return "convergent-on-scope"
        if self.confluence == COUNTEREXAMPLE:
            return "not-confluent"
        if self.termination == REFUTED:
            return "not-terminating"
        if self.confluence == EXHAUSTED:
            return "budget-exhausted"
        return "unknown"

    def to_dict(self) -> dict:
        out = {
            "status": self.status,
            "termination": self.termination,
            "local_confluence": self.confluence,
            "scope": dict(self.scope),
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_dict()
        if self.detail:
            out["detail"] = self.detail
        return out


def _weight_fn(weight) -> Callable[[Letter], int]:
    if isinstance(weight, Mapping):
        table = dict(weight)

        def lookup(x):
            if x not in table:
                raise InputError(f"no weight given for letter {x!r}")
            return table[x]

        return lookup
    return weight


def _scope_letters(system: RewriteSystem, scope) -> tuple[list[Letter], bool]:
    if scope is None:
        if not system.alphabet.finite:
            raise InputError("an infinite alphabet needs an explicit letter scope")
        return list(system.alphabet.letters), True
    letters = list(dict.fromkeys(scope))
    full = system.alphabet.finite and set(letters) >= set(system.alphabet.letters)
    return letters, full


def find_rule_cycle(system: RewriteSystem, letters: Iterable[Letter], max_nodes: int = 10_000) -> list[Letter] | None:
    """A cycle x0 -> x1 -> ... -> x0 in the "occurs in a right-hand side of" graph.

    Any such cycle gives an infinite rewriting chain x0 => ...x0... => ...
    """
    color: dict[Letter, int] = {}
    visited = 0
    for start in letters:
        if start in color:
            continue
        stack = [(start, iter(sorted(_successors(system, start))))]
        path = [start]
        color[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = 2
                stack.pop()
                path.pop()
                continue
            if color.get(nxt) == 1:
                return path[path.index(nxt):] + [nxt]
            if nxt in color:
                continue
            visited += 1
            if visited > max_nodes:
                return None
            color[nxt] = 1
            path.append(nxt)
            stack.append((nxt, iter(sorted(_successors(system, nxt)))))
    return None


def _successors(system: RewriteSystem, x: Letter) -> set[Letter]:
    return {y for rhs in system._rewrites(x) for y in rhs.word}


def derive_weights(system: RewriteSystem) -> dict[Letter, int]:
    """Longest-descent weights for a finite alphabet whose rule graph is acyclic."""
    if not system.alphabet.finite:
        raise InputError("weights can only be derived for a finite alphabet")
    if find_rule_cycle(system, system.alphabet.letters) is not None:
        raise InputError("the rule graph has a cycle; no weight certificate exists")
    weights: dict[Letter, int] = {}

    def depth(x):
        if x not in weights:
            weights[x] = 1 + max((depth(y) for y in _successors(system, x)), default=0)
        return weights[x]

    for x in system.alphabet.letters:
        depth(x)
    return weights


def verify_weight_certificate(system: RewriteSystem, weight, scope: Iterable[Letter] | None = None) -> ConvergenceReport:
    """Check weight(y) < weight(x) for every rule (x, w) in scope and every letter y of w.

    Each rewriting step then trades one letter for finitely many strictly
    lighter ones, so the multiset of weights decreases in the multiset order.
    """
    weigh = _weight_fn(weight)
    letters, full = _scope_letters(system, scope)
    scope_info = {"letters": len(letters), "full_alphabet": full}

    def checked(x):
        w = weigh(x)
        if not isinstance(w, int) or isinstance(w, bool) or w <= 0:
            raise InputError(f"weight of {x!r} must be a positive integer, got {w!r}")
        return w

    for x in letters:
        wx = checked(x)
        for rhs in system._rewrites(x):
            for y in rhs.counts:
                if checked(y) >= wx:
                    detail = f"rule {x} -> {rhs} does not decrease weight at {y} ({checked(y)} >= {wx})"
                    cycle = find_rule_cycle(system, [x], system.budgets.max_nodes)
                    if cycle is not None:
                        return ConvergenceReport(
                            REFUTED, scope=scope_info, detail="rule cycle " + " -> ".join(cycle)
                        )
                    return ConvergenceReport(UNKNOWN, scope=scope_info, detail=detail)
    detail = "" if full else "termination certified on the sampled letters only"
    return ConvergenceReport(CERTIFIED, scope=scope_info, detail=detail)


def _closure(system: RewriteSystem, start: Trace, limit: int):
    """Breadth-first reduct closure of ``start``; returns (set, complete)."""
    seen = {start}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        reducts = system.one_step_reducts(t)
        if reducts.truncated:
            return seen, False
        for r in reducts.traces:
            if r not in seen:
                if len(seen) >= limit:
                    return seen, False
                seen.add(r)
                queue.append(r)
    return seen, True


def joinable(system: RewriteSystem, a: Trace, b: Trace) -> bool | None:
    """True/False when decided, None when the node budget ran out first."""
    if a == b:
        return True
    try:
        if system.letterwise_normal_form(a) == system.letterwise_normal_form(b):
            return True
    except (RecursionError, ResourceError):  # fall through to the bounded search
        pass
    limit = system.budgets.max_nodes
    ca, complete_a = _closure(system, a, limit)
    if b in ca:
        return True
    cb, complete_b = _closure(system, b, limit)
    if ca & cb:
        return True
    if complete_a and complete_b:
        return False
    return None


def replay_counterexample(system: RewriteSystem, peak: Peak) -> bool:
    """Recheck a reported peak: both sides are reducts of the source and never meet."""
    reducts = system.one_step_reducts(peak.source)
    if peak.left not in reducts or peak.right not in reducts:
        return False
    limit = system.budgets.max_nodes
    ca, complete_a = _closure(system, peak.left, limit)
    cb, complete_b = _closure(system, peak.right, limit)
    return complete_a and complete_b and not (ca & cb)


def _scoped_traces(system: RewriteSystem, letters: list[Letter], max_trace_len: int) -> Iterable[Trace]:
    alphabet = system.alphabet
    reducible = [x for x in letters if system._rewrites(x)]
    if not reducible:
        return
    seen: set[tuple] = set()
    for length in range(1, max_trace_len + 1):
        if alphabet.total:
            words = itertools.combinations_with_replacement(letters, length)
        else:
            words = itertools.product(letters, repeat=length)
        for word in words:
            if not any(x in reducible for x in word):
                continue
            t = system.trace(word)
            if t.word in seen:
                continue
            seen.add(t.word)
            yield t


def check_local_confluence(
    system: RewriteSystem,
    scope: Iterable[Letter] | None = None,
    max_trace_len: int = 2,
    budgets: Budgets | None = None,
) -> ConvergenceReport:
    """Rule-level peaks for every scoped letter, then every peak of every trace up to ``max_trace_len``.

    Under total commutation the trace pass is skipped: two steps at different
    occurrences of a multiset commute and join in one step each, so only the
    rule-level peaks can fail.
    """
    if budgets is not None:
        system = system.with_budgets(budgets)
    letters, full = _scope_letters(system, scope)
    scope_info = {"letters": len(letters), "full_alphabet": full, "max_trace_len": max_trace_len}
    if system.alphabet.total and max_trace_len > 1:
        scope_info["trace_pass"] = "skipped under total commutation"
        max_trace_len = 1
    exhausted = False

    def examine(source: Trace, candidates) -> ConvergenceReport | None:
        nonlocal exhausted
        for left, right in itertools.combinations(candidates, 2):
            verdict = joinable(system, left, right)
            if verdict is False:
                return ConvergenceReport(
                    UNCHECKED, COUNTEREXAMPLE, scope_info, Peak(source, left, right),
                    detail=f"{left} and {right} have no common reduct",
                )
            if verdict is None:
                exhausted = True
        return None

    for x in letters:
        rhss = sorted(set(system._rewrites(x)), key=lambda t: t.word)
        if len(rhss) >= 2:
            found = examine(system.trace([x]), rhss)
            if found:
                return found
    for t in _scoped_traces(system, letters, max_trace_len):
        reducts = system.one_step_reducts(t)
        if reducts.truncated:
            exhausted = True
        if len(reducts) >= 2:
            found = examine(t, list(reducts))
            if found:
                return found
    return ConvergenceReport(UNCHECKED, EXHAUSTED if exhausted else VERIFIED, scope_info)


def certify_convergence(
    system: RewriteSystem,
    weight=None,
    scope: Iterable[Letter] | None = None,
    max_trace_len: int = 2,
    budgets: Budgets | None = None,
) -> ConvergenceReport:
    """Termination by weight certificate plus bounded local confluence (Newman's lemma).

    ``weight=None`` derives longest-descent weights, which needs a finite
    alphabet. Attach the report with ``system.with_certificate(report)``.
    """
    if budgets is not None:
        system = system.with_budgets(budgets)
    scope = None if scope is None else list(scope)
    derived = weight is None
    if derived:
        cycle = find_rule_cycle(system, system.alphabet.letters) if system.alphabet.finite else None
        if cycle is not None:
            letters, full = _scope_letters(system, scope)
            term = ConvergenceReport(
                REFUTED, scope={"letters": len(letters), "full_alphabet": full},
                detail="rule cycle " + " -> ".join(cycle),
            )
        else:
            term = verify_weight_certificate(system, derive_weights(system), scope)
    else:
        term = verify_weight_certificate(system, weight, scope)
    if term.termination == REFUTED:
        # joinability searches on a non-terminating system only burn budget
        conf = ConvergenceReport(
            UNCHECKED, UNCHECKED, dict(term.scope, max_trace_len=max_trace_len),
            detail="local confluence not checked",
        )
    else:
        conf = check_local_confluence(system, scope, max_trace_len)
    scope_info = dict(conf.scope)
    scope_info["weights"] = "derived" if derived else "given"
    detail = "; ".join(d for d in (term.detail, conf.detail) if d)
    return ConvergenceReport(term.termination, conf.confluence, scope_info, conf.counterexample, detail)
