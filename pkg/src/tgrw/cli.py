"""Command line front end: ``tgrw <command> ...``.

Every command prints one JSON run report on stdout and exits with
0 (ok), 1 (input error), 2 (check failed) or 3 (budget exceeded).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict
from typing import Any

from . import convergence, graphs, packs
from .errors import InputError, PreconditionError, ResourceError, TGRWError, UnsupportedOperation
from .rewriting import STRATEGIES, Budgets, RewriteSystem, finite_system
from .tg import TGElement, group_presentation, universal_invariant

EXIT = {"ok": 0, "input-error": 1, "precondition-error": 2, "check-failed": 2, "budget-exceeded": 3}

PACK_WEIGHTS = {"weyl": "inversions", "pbw": "inversions", "tutte": "edges", "shuffle": "length", "arith": "omega"}


class ReportedFailure(TGRWError):
    """A failure whose report still carries a result payload."""

    def __init__(self, status: str, message: str, payload: dict | None = None):
        super().__init__(message)
        self.status = status
        self.payload = payload or {}


# -- documents -------------------------------------------------------------------

def _budgets_from(doc: dict, where: str) -> Budgets:
    raw = doc.get("budgets", {})
    if not isinstance(raw, dict):
        raise InputError(f"{where}budgets: expected an object")
    unknown = set(raw) - {"max_steps", "max_nodes", "max_len"}
    if unknown:
        raise InputError(f"{where}budgets: unknown keys {sorted(unknown)}")
    for k, v in raw.items():
        if not isinstance(v, int) or isinstance(v, bool):
            raise InputError(f"{where}budgets.{k}: expected an integer")
    return Budgets(**raw)


def _pack_kind(doc: dict) -> str:
    pack = doc["pack"]
    if pack == "prefab":
        return doc.get("kind", "")
    return "tutte" if pack == "graph" else pack


def parse_system(text: str | dict) -> RewriteSystem:
    """Validate a system document (JSON text or already-decoded object)."""
    if isinstance(text, str):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise InputError(f"malformed JSON at line {err.lineno} column {err.colno}: {err.msg}") from None
    else:
        doc = text
    if not isinstance(doc, dict):
        raise InputError("system document: expected a JSON object")
    budgets = _budgets_from(doc, "")
    if "pack" in doc:
        return _parse_pack(doc, budgets)
    return _parse_finite(doc, budgets)


def _parse_pack(doc: dict, budgets: Budgets) -> RewriteSystem:
    pack = doc["pack"]
    normalized: dict[str, Any] = {"pack": pack}
    if pack == "weyl":
        central = doc.get("central", False)
        if not isinstance(central, bool):
            raise InputError("central: expected true or false")
        system = packs.weyl_system(central, budgets)
        normalized["central"] = central
    elif pack == "pbw":
        base = doc.get("base", "abc")
        if not isinstance(base, str):
            raise InputError("base: expected a string of single-character base letters")
        system = packs.pbw_system(base, budgets)
        normalized["base"] = base
    elif pack in ("tutte", "graph"):
        cap = doc.get("cap", graphs.DEFAULT_CAP)
        if not isinstance(cap, int) or cap < 1:
            raise InputError("cap: expected a positive integer")
        identify = doc.get("identify", True)
        if not isinstance(identify, bool):
            raise InputError("identify: expected true or false")
        system = graphs.graph_system(cap, budgets, identify)
        normalized["cap"] = cap
        if not identify:
            normalized["identify"] = False
    elif pack == "prefab":
        kind = doc.get("kind")
        normalized["kind"] = kind
        if kind == "shuffle":
            base = doc.get("base")
            if not isinstance(base, str) or not base:
                raise InputError("base: the shuffle prefab needs a nonempty base string")
            prefab = packs.shuffle_prefab(base)
            normalized["base"] = base
        elif kind == "arith":
            prefab = packs.arith_prefab()
        else:
            raise InputError(f"kind: unknown prefab {kind!r} (expected 'shuffle' or 'arith')")
        system = prefab.system(budgets)
    else:
        raise InputError(f"pack: unknown pack {pack!r}")
    normalized["budgets"] = asdict(budgets)
    return RewriteSystem(system.alphabet, system.rules, budgets, name=system.name, source=normalized)


def _parse_finite(doc: dict, budgets: Budgets) -> RewriteSystem:
    unknown = set(doc) - {"letters", "commutations", "rules", "weights", "budgets"}
    if unknown:
        raise InputError(f"system document: unknown keys {sorted(unknown)}")
    letters = doc.get("letters")
    if not isinstance(letters, list) or not letters:
        raise InputError("letters: expected a nonempty array of tokens")
    for i, x in enumerate(letters):
        if not isinstance(x, str) or not x:
            raise InputError(f"letters[{i}]: expected a nonempty string")
    members = set(letters)
    commutations = doc.get("commutations", "none")
    if isinstance(commutations, list):
        for i, pair in enumerate(commutations):
            if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(p, str) for p in pair)):
                raise InputError(f"commutations[{i}]: expected a pair of tokens")
            if pair[0] == pair[1]:
                raise InputError(f"commutations[{i}]: commutation pairs must be irreflexive")
            for p in pair:
                if p not in members:
                    raise InputError(f"commutations[{i}]: unknown letter {p!r}")
    elif commutations not in ("none", "total"):
        raise InputError('commutations: expected "none", "total" or an array of pairs')
    rules: dict[str, list[list[str]]] = {}
    raw_rules = doc.get("rules", [])
    if not isinstance(raw_rules, list):
        raise InputError("rules: expected an array")
    for i, rule in enumerate(raw_rules):
        if not isinstance(rule, dict) or set(rule) != {"lhs", "rhs"}:
            raise InputError(f"rules[{i}]: expected an object with keys lhs and rhs")
        lhs, rhs = rule["lhs"], rule["rhs"]
        if lhs not in members:
            raise InputError(f"rules[{i}].lhs: unknown letter {lhs!r}")
        if not isinstance(rhs, list) or not rhs:
            raise InputError(f"rules[{i}].rhs: rules must map into S, not M (nonempty token array)")
        for j, y in enumerate(rhs):
            if y not in members:
                raise InputError(f"rules[{i}].rhs[{j}]: unknown letter {y!r}")
        rules.setdefault(lhs, []).append(list(rhs))
    weights = doc.get("weights")
    if weights is not None:
        if not isinstance(weights, dict):
            raise InputError("weights: expected an object token -> positive integer")
        for x, w in weights.items():
            if x not in members:
                raise InputError(f"weights.{x}: unknown letter")
            if not isinstance(w, int) or isinstance(w, bool) or w <= 0:
                raise InputError(f"weights.{x}: expected a positive integer")
    system = finite_system(letters, commutations, rules, budgets)
    if isinstance(commutations, list):
        commutations = [list(p) for p in system.alphabet.commuting_pairs()]
    normalized: dict[str, Any] = {
        "letters": list(letters),
        "commutations": commutations,
        "rules": [{"lhs": r["lhs"], "rhs": list(r["rhs"])} for r in raw_rules],
    }
    if weights is not None:
        normalized["weights"] = {x: weights[x] for x in letters if x in weights}
    normalized["budgets"] = asdict(budgets)
    return RewriteSystem(system.alphabet, system.rules, budgets, source=normalized)


def serialize_system(system: RewriteSystem) -> dict:
    if system.source is None:
        raise UnsupportedOperation("only systems built from documents can be serialized")
    return json.loads(json.dumps(system.source))


def trace_to_json(t) -> list[str]:
    return list(t.word)


def parse_trace(system: RewriteSystem, text: str):
    try:
        tokens = json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(f"trace: malformed JSON ({err.msg})") from None
    if not isinstance(tokens, list) or not all(isinstance(x, str) for x in tokens):
        raise InputError("trace: expected a JSON array of letter tokens")
    return system.trace(tokens)


def presentation_to_json(p) -> dict:
    out = p.to_dict()
    out["text"] = p.to_text()
    return out


# -- scopes and weights -------------------------------------------------------------

def _weight_for(system: RewriteSystem, name: str | None):
    source = system.source or {}
    kind = _pack_kind(source) if "pack" in source else None
    if name is None:
        if kind is not None:
            name = PACK_WEIGHTS[kind]
        elif "weights" in source:
            name = "document"
        else:
            name = "derived"
    if name == "derived":
        return None
    if name == "document":
        if "weights" not in source:
            raise InputError("--weights document: the system document has no weights")
        return source["weights"]
    table = {
        ("weyl", "inversions"): packs.weyl_weight,
        ("tutte", "edges"): graphs.edge_weight,
        ("shuffle", "length"): len,
        ("arith", "omega"): lambda x: 1 + packs.big_omega(packs.arith_index(x)),
    }
    if kind == "pbw" and name == "inversions":
        return packs.pbw_weight(source["base"])
    if (kind, name) in table:
        return table[(kind, name)]
    raise InputError(f"--weights {name}: not available for this system")


def _scope_for(system: RewriteSystem, args) -> list[str] | None:
    source = system.source or {}
    if "pack" not in source:
        return None
    kind = _pack_kind(source)
    if kind == "tutte":
        return system.alphabet.enumerate(args.max_edges)
    if kind == "arith":
        return system.alphabet.enumerate(args.max_index)
    return system.alphabet.enumerate(args.max_letter_len)


def _default_trace_len(system: RewriteSystem, args) -> int:
    if args.max_trace_len is not None:
        return args.max_trace_len
    return 2


def _certified(system: RewriteSystem, args, extra_letters=()) -> tuple[RewriteSystem, convergence.ConvergenceReport]:
    scope = _scope_for(system, args)
    if scope is not None:
        scope = list(dict.fromkeys(list(scope) + list(extra_letters)))
    report = convergence.certify_convergence(
        system, _weight_for(system, args.weights), scope, _default_trace_len(system, args)
    )
    return system.with_certificate(report), report


# -- commands ----------------------------------------------------------------------

def _load_system(args) -> RewriteSystem:
    try:
        with open(args.system, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise InputError(f"--system: cannot read {args.system}: {err.strerror}") from None
    system = parse_system(text)
    return system.with_budgets(_budgets(system.budgets, args))


def _budgets(base: Budgets, args) -> Budgets:
    steps = base.max_steps
    env = os.environ.get("TGRW_BUDGET_STEPS")
    if env is not None:
        try:
            steps = int(env)
        except ValueError:
            raise InputError(f"TGRW_BUDGET_STEPS: expected an integer, got {env!r}") from None
    if args.max_steps is not None:
        steps = args.max_steps
    return Budgets(
        max_steps=steps,
        max_nodes=args.max_nodes if args.max_nodes is not None else base.max_nodes,
        max_len=args.max_len if args.max_len is not None else base.max_len,
    )


def cmd_check(args) -> dict:
    system = _load_system(args)
    _, report = _certified(system, args)
    payload = report.to_dict()
    if report.convergent:
        return payload
    if report.confluence == convergence.EXHAUSTED and report.termination == convergence.CERTIFIED:
        raise ReportedFailure("budget-exceeded", "local confluence check ran out of budget", payload)
    raise ReportedFailure("check-failed", f"system is {report.status}", payload)


def cmd_normalize(args) -> dict:
    system = _load_system(args)
    t = parse_trace(system, args.trace)
    report = system.normalize(t, args.strategy, args.seed)
    if report.result is None:
        raise ResourceError(f"normalization stopped at {report.failure} after {report.steps} steps")
    return {"trace": trace_to_json(report.result), "steps": report.steps,
            "irreducible": system.is_irreducible(report.result)}


def cmd_irr(args) -> dict:
    system = _load_system(args)
    scope = _scope_for(system, args)
    letters = system.alphabet.letters if scope is None else scope
    return {"irreducible": [x for x in letters if not system.is_reducible_letter(x)], "scope": len(letters)}


def cmd_equiv(args) -> dict:
    system = _load_system(args)
    t, u = parse_trace(system, args.trace), parse_trace(system, args.other)
    certified, report = _certified(system, args, [*t.counts, *u.counts])
    if not report.convergent:
        raise PreconditionError(f"equiv needs a convergence certificate; check says {report.status}")
    equal = certified.thue_equivalent(t, u)
    return {
        "equivalent": equal,
        "normal_forms": [trace_to_json(certified.normal_form(t)), trace_to_json(certified.normal_form(u))],
    }


def cmd_invariant(args) -> dict:
    system = _load_system(args)
    system.alphabet.check_letter(args.letter)
    certified, report = _certified(system, args, [args.letter])
    if not report.convergent:
        raise PreconditionError(f"invariant needs a convergence certificate; check says {report.status}")
    value: TGElement = universal_invariant(certified, args.letter)
    out: dict[str, Any] = {"letter": args.letter, "signed_word": value.to_list()}
    if system.alphabet.total:
        out["exponents"] = value.exponents()
    return out


def cmd_present(args) -> dict:
    system = _load_system(args)
    return presentation_to_json(group_presentation(system))


def cmd_tutte(args) -> dict:
    try:
        with open(args.graph, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as err:
        raise InputError(f"--graph: cannot read {args.graph}: {err.strerror}") from None
    except json.JSONDecodeError as err:
        raise InputError(f"--graph: malformed JSON at line {err.lineno}: {err.msg}") from None
    if not isinstance(doc, dict):
        raise InputError("--graph: expected an object with vertices and edges")
    G = graphs.Multigraph.from_dict(doc)
    system = graphs.graph_system(args.cap).with_budgets(_budgets(Budgets(), args))
    poly = graphs.tutte_polynomial(G, system)
    out = poly.to_dict()
    out["text"] = str(poly)
    if args.check:
        oracle = graphs.tutte_oracle(G)
        if oracle != poly:
            raise ReportedFailure("check-failed", "deletion-contraction disagrees with subset expansion",
                              {"polynomial": out, "oracle": oracle.to_dict()})
        out["oracle_agrees"] = True
    return out


def cmd_weyl(args) -> dict:
    system = packs.weyl_system(args.central, _budgets(Budgets(), args))
    return {"word": args.word, "normal_order": packs.weyl_normal_order(args.word, args.central, system)}


def cmd_pbw(args) -> dict:
    system = packs.pbw_system(args.base, _budgets(Budgets(), args))
    return {"word": args.word, "normal_form": packs.pbw_normal_form(args.word, args.base, system)}


def cmd_prefab(args) -> dict:
    if args.kind == "shuffle":
        if not args.word:
            raise InputError("prefab shuffle needs --word")
        return {"word": args.word, "invariant": packs.shuffle_prefab_invariant(args.word)}
    if args.kind == "shuffle-set":
        if not args.word or not args.other:
            raise InputError("prefab shuffle-set needs --word and --other")
        return {"shuffles": sorted(packs.shuffle_set(args.word, args.other))}
    if args.n is None:
        raise InputError("prefab arith needs --n")
    return {"n": args.n, "invariant": {str(p): k for p, k in packs.arith_invariant(args.n).items()}}


# -- argument parsing ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tgrw", description="Alphabetic rewriting on traces and Tutte-Grothendieck invariants.")
    parser.add_argument("--no-timing", action="store_true", help="omit the timing field from the report")
    sub = parser.add_subparsers(dest="command", required=True)

    def budget_flags(p):
        p.add_argument("--max-steps", type=int)
        p.add_argument("--max-nodes", type=int)
        p.add_argument("--max-len", type=int)

    def scope_flags(p):
        p.add_argument("--weights", help="inversions, edges, length, omega, document or derived")
        p.add_argument("--max-letter-len", type=int, default=4)
        p.add_argument("--max-edges", type=int, default=4)
        p.add_argument("--max-index", type=int, default=200)
        p.add_argument("--max-trace-len", type=int)

    def system_cmd(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--system", required=True, help="system document (JSON)")
        budget_flags(p)
        p.set_defaults(func=func)
        return p

    scope_flags(system_cmd("check", cmd_check, "certify termination and local confluence on a scope"))
    p = system_cmd("normalize", cmd_normalize, "normalize a trace")
    p.add_argument("--trace", required=True, help="JSON array of letter tokens")
    p.add_argument("--strategy", choices=STRATEGIES, default="leftmost")
    p.add_argument("--seed", type=int)
    scope_flags(system_cmd("irr", cmd_irr, "list irreducible letters in scope"))
    p = system_cmd("equiv", cmd_equiv, "decide Thue equivalence of two traces")
    p.add_argument("--trace", required=True)
    p.add_argument("--other", required=True)
    scope_flags(p)
    p = system_cmd("invariant", cmd_invariant, "universal invariant t(x) of a letter")
    p.add_argument("--letter", required=True)
    scope_flags(p)
    system_cmd("present", cmd_present, "group presentation of TG(X, theta, R)")

    p = sub.add_parser("tutte", help="Tutte polynomial of a multigraph document")
    p.add_argument("--graph", required=True)
    p.add_argument("--cap", type=int, default=graphs.DEFAULT_CAP)
    p.add_argument("--check", action="store_true", help="cross-check against subset expansion")
    budget_flags(p)
    p.set_defaults(func=cmd_tutte)

    p = sub.add_parser("weyl", help="normal ordering in the integral Weyl algebra")
    p.add_argument("--word", required=True)
    p.add_argument("--central", action="store_true")
    budget_flags(p)
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("pbw", help="PBW re-ordering of a word")
    p.add_argument("--word", required=True)
    p.add_argument("--base", default="abc")
    budget_flags(p)
    p.set_defaults(func=cmd_pbw)

    p = sub.add_parser("prefab", help="prefab invariants")
    p.add_argument("--kind", choices=("shuffle", "shuffle-set", "arith"), required=True)
    p.add_argument("--word")
    p.add_argument("--other")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_prefab)
    return parser


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = 0 if exc.code == 0 else 1
        return code, {"command": argv, "status": "ok" if code == 0 else "input-error", "result": None}
    start = time.perf_counter()
    result: Any = None
    try:
        result = args.func(args)
        status = "ok"
    except ReportedFailure as err:
        status, result = err.status, {"error": str(err), **err.payload}
    except ResourceError as err:
        status, result = "budget-exceeded", {"error": str(err)}
    except (PreconditionError, UnsupportedOperation) as err:
        status, result = "precondition-error", {"error": str(err)}
    except TGRWError as err:
        status, result = "input-error", {"error": str(err)}
    if status != "ok":
        print(f"tgrw {args.command}: {result['error']}", file=sys.stderr)
    report = {"command": argv, "status": status, "result": result}
    if not args.no_timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return EXIT[status], report


def main(argv: list[str] | None = None) -> int:
    code, report = run(argv)
    print(json.dumps(report, ensure_ascii=False, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
