"""Deletion-contraction on isomorphism classes of multigraphs, and the Tutte polynomial.

Letters of the graph alphabet are canonical certificates of multigraphs,
e.g. ``"G3:0-1,0-2,1-2"`` for the triangle. The alphabet is totally
commutative: a trace is a multiset of graph classes (their disjoint sum).

Graphs without links are identified by their numbers of bridges and loops:
each such class is represented by a path of b bridges carrying l loops at
one end. On bare isomorphism classes deletion-contraction is not confluent
(a triangle with a pendant edge reduces to both the star and the path on
four vertices), while the counts (b, l) of the final graphs are forced.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .errors import InputError, ResourceError
from .poly import BivarPoly
from .rewriting import Budgets, RewriteSystem
from .tg import GroupCallbacks, extend_exponents
from .trace import CommutationAlphabet, Letter

DEFAULT_CAP = 10
_CERT_RE = re.compile(r"^G(\d+):((?:\d+-\d+)(?:,\d+-\d+)*)?$")


@dataclass(frozen=True)
class Multigraph:
    """Finite multigraph on vertices 0..n-1; loops and parallel edges allowed."""

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise InputError("a multigraph needs at least one vertex")
        norm = []
        for e in self.edges:
            u, v = e
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge {e!r} has an endpoint outside [0, {self.n})")
            norm.append((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @classmethod
    def from_dict(cls, doc: dict) -> "Multigraph":
        try:
            return cls(int(doc["vertices"]), tuple(tuple(e) for e in doc["edges"]))
        except (KeyError, TypeError, ValueError) as err:
            raise InputError(f"bad graph document: {err}") from None

    def to_dict(self) -> dict:
        return {"vertices": self.n, "edges": [list(e) for e in self.edges]}

    def delete(self, index: int) -> "Multigraph":
        return Multigraph(self.n, self.edges[:index] + self.edges[index + 1:])

    def contract(self, index: int) -> "Multigraph":
        u, v = self.edges[index]
        if u == v:
            return self.delete(index)

        def relabel(w):
            w = u if w == v else w
            return w - 1 if w > v else w

        rest = self.edges[:index] + self.edges[index + 1:]
        return Multigraph(self.n - 1, tuple((relabel(a), relabel(b)) for a, b in rest))

    def components(self, edges: Iterable[tuple[int, int]] | None = None) -> int:
        parent = list(range(self.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        count = self.n
        for a, b in self.edges if edges is None else edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                count -= 1
        return count

    @property
    def connected(self) -> bool:
        return self.components() == 1

    def edge_kind(self, index: int) -> str:
        u, v = self.edges[index]
        if u == v:
            return "loop"
        if self.delete(index).components() > self.components():
            return "bridge"
        return "link"

    def loops(self) -> int:
        return sum(1 for u, v in self.edges if u == v)

    def bridges(self) -> int:
        return sum(1 for i in range(len(self.edges)) if self.edge_kind(i) == "bridge")


def _find_edge(G: Multigraph, e) -> int:
    if isinstance(e, int):
        if not 0 <= e < len(G.edges):
            raise InputError(f"edge index {e} out of range")
        return e
    u, v = e
    key = (min(u, v), max(u, v))
    try:
        return G.edges.index(key)
    except ValueError:
        raise InputError(f"edge {tuple(e)!r} is not an edge of the graph") from None


def edge_classify(G: Multigraph, e) -> str:
    """``"loop"``, ``"bridge"`` or ``"link"``; ``e`` is an edge index or an endpoint pair."""
    return G.edge_kind(_find_edge(G, e))


# -- canonical labelling -------------------------------------------------------

def _adjacency(G: Multigraph) -> list[list[int]]:
    adj = [[0] * G.n for _ in range(G.n)]
    for u, v in G.edges:
        adj[u][v] += 1
        if u != v:
            adj[v][u] += 1
    return adj


def _refine(adj, colors: list[int]) -> list[int]:
    n = len(adj)
    classes = len(set(colors))
    while True:
        sigs = [
            (colors[v], adj[v][v], tuple(sorted((colors[w], adj[v][w]) for w in range(n) if w != v and adj[v][w])))
            for v in range(n)
        ]
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [rank[s] for s in sigs]
        if len(rank) == classes:
            return colors
        classes = len(rank)


def _twins(adj, u: int, v: int) -> bool:
    if adj[u][u] != adj[v][v]:
        return False
    return all(adj[u][w] == adj[v][w] for w in range(len(adj)) if w != u and w != v)


def _best_encoding(G: Multigraph, adj, colors: list[int]) -> tuple:
    colors = _refine(adj, colors)
    n = G.n
    if len(set(colors)) == n:
        return tuple(sorted((min(colors[u], colors[v]), max(colors[u], colors[v])) for u, v in G.edges))
    sizes: dict[int, int] = {}
    for c in colors:
        sizes[c] = sizes.get(c, 0) + 1
    target = min(c for c, k in sizes.items() if k > 1)
    reps: list[int] = []
    for v in range(n):
        if colors[v] == target and not any(_twins(adj, v, r) for r in reps):
            reps.append(v)
    best = None
    for v in reps:
        split = [2 * c + 1 for c in colors]
        split[v] = 2 * colors[v]
        enc = _best_encoding(G, adj, split)
        if best is None or enc < best:
            best = enc
    return best


def canonical_certificate(G: Multigraph, cap: int = DEFAULT_CAP) -> Letter:
    """A token that is equal for two multigraphs iff they are isomorphic.

    The minimum sorted edge list over the leaves of an individualization /
    colour-refinement search tree; twin vertices are branched on once.
    """
    if G.n > cap:
        raise ResourceError(f"{G.n} vertices exceeds the certificate cap of {cap}")
    return _cert(G)


@lru_cache(maxsize=65536)
def _cert(G: Multigraph) -> Letter:
    enc = _best_encoding(G, _adjacency(G), [0] * G.n)
    return f"G{G.n}:" + ",".join(f"{u}-{v}" for u, v in enc)


def parse_certificate(token: str) -> Multigraph:
    m = _CERT_RE.match(token) if isinstance(token, str) else None
    if not m:
        raise InputError(f"{token!r} is not a graph certificate")
    n = int(m.group(1))
    edges = []
    if m.group(2):
        for part in m.group(2).split(","):
            u, v = part.split("-")
            edges.append((int(u), int(v)))
    return Multigraph(n, tuple(edges))


def is_certificate(token: str, cap: int = DEFAULT_CAP) -> bool:
    try:
        G = parse_certificate(token)
    except InputError:
        return False
    return G.n <= cap and _cert(G) == token


def has_link(G: Multigraph) -> bool:
    return any(G.edge_kind(i) == "link" for i in range(len(G.edges)))


def bridge_loop_representative(bridges: int, loops: int) -> Multigraph:
    """Path with ``bridges`` edges and ``loops`` loops at vertex 0."""
    path = tuple((i, i + 1) for i in range(bridges))
    return Multigraph(bridges + 1, path + ((0, 0),) * loops)


@lru_cache(maxsize=65536)
def _letter(G: Multigraph, identify: bool) -> Letter:
    if identify and not has_link(G):
        G = bridge_loop_representative(G.bridges(), G.loops())
    return _cert(G)


def graph_letter(G: Multigraph, cap: int = DEFAULT_CAP, identify: bool = True) -> Letter:
    """The alphabet letter of G: its certificate, or that of its (bridges, loops) representative."""
    if G.n > cap:
        raise ResourceError(f"{G.n} vertices exceeds the certificate cap of {cap}")
    return _letter(G, identify)


def is_graph_letter(token: str, cap: int = DEFAULT_CAP, identify: bool = True) -> bool:
    if not is_certificate(token, cap):
        return False
    return not identify or _letter(parse_certificate(token), True) == token


# -- enumeration ----------------------------------------------------------------

def enumerate_multigraphs(max_edges: int, max_vertices: int | None = None, connected: bool = True,
                          identify: bool = False) -> list[Letter]:
    """Certificates of all multigraphs with at most ``max_edges`` edges, up to isomorphism.

    With ``identify`` the link-free ones collapse to their representatives.
    """
    if max_vertices is None:
        max_vertices = max_edges + 1
    found: set[Letter] = set()
    for n in range(1, max_vertices + 1):
        pairs = [(u, v) for u in range(n) for v in range(u, n)]
        for m in range(0, max_edges + 1):
            if connected and m < n - 1:
                continue
            for edges in itertools.combinations_with_replacement(pairs, m):
                G = Multigraph(n, edges)
                if connected and not G.connected:
                    continue
                found.add(_letter(G, identify))
    return sorted(found, key=lambda c: (parse_certificate(c).n, len(parse_certificate(c).edges), c))


# -- rewriting system -------------------------------------------------------------

def deletion_contraction_rules(G: Multigraph | Letter, cap: int = DEFAULT_CAP,
                               identify: bool = True) -> list[tuple[Letter, Letter]]:
    """One right-hand side {G - e, G / e} per link e of G, as letters."""
    if isinstance(G, str):
        G = parse_certificate(G)
    if G.n > cap:
        raise ResourceError(f"{G.n} vertices exceeds the certificate cap of {cap}")
    out = []
    for i in range(len(G.edges)):
        if G.edge_kind(i) == "link":
            out.append((_letter(G.delete(i), identify), _letter(G.contract(i), identify)))
    return out


def edge_weight(letter: Letter) -> int:
    """1 + number of edges: strictly larger than both sides of any deletion-contraction."""
    return 1 + len(parse_certificate(letter).edges)


def graph_system(cap: int = DEFAULT_CAP, budgets: Budgets = Budgets(), identify: bool = True) -> RewriteSystem:
    """Deletion-contraction on connected-or-not multigraphs with at most ``cap`` vertices.

    ``identify=False`` keeps every isomorphism class as its own letter; that
    system terminates but is not confluent.
    """
    alphabet = CommutationAlphabet(
        is_letter=lambda t: is_graph_letter(t, cap, identify),
        total=True,
        enumerate_up_to=lambda k: enumerate_multigraphs(k, identify=identify),
        name="multigraphs" if identify else "multigraph-classes",
    )
    source = {"pack": "tutte", "cap": cap}
    if not identify:
        source["identify"] = False
    return RewriteSystem(
        alphabet, lambda x: deletion_contraction_rules(x, cap, identify), budgets,
        name="tutte", source=source,
    )


def monomial_image(letter: Letter) -> BivarPoly:
    """x^(#bridges) y^(#loops): the Tutte polynomial on bridge/loop-only graphs."""
    H = parse_certificate(letter)
    return BivarPoly.monomial(H.bridges(), H.loops())


POLY_SUM = dict(multiply=lambda a, b: a + b, invert=lambda a: -a, identity=BivarPoly())


def tutte_callbacks() -> GroupCallbacks:
    return GroupCallbacks(image=monomial_image, **POLY_SUM)


def tutte_polynomial(G: Multigraph, system: RewriteSystem | None = None) -> BivarPoly:
    """Normalize cert(G), then send each irreducible class H to x^bridges(H) y^loops(H)."""
    if system is None:
        system = _default_system()
    source = system.source or {}
    letter = graph_letter(G, _cap(system), source.get("identify", True))
    counts = system.normal_counts(letter)
    return extend_exponents(tutte_callbacks(), counts, system.alphabet, system)


def _cap(system: RewriteSystem) -> int:
    return (system.source or {}).get("cap", DEFAULT_CAP)


@lru_cache(maxsize=1)
def _default_system() -> RewriteSystem:
    return graph_system()


def tutte_oracle(G: Multigraph) -> BivarPoly:
    """Rank-nullity subset expansion: sum over A of (x-1)^(r(E)-r(A)) (y-1)^(|A|-r(A))."""
    m = len(G.edges)
    if m > 20:
        raise ResourceError(f"subset expansion over {m} edges is too large (limit 20)")
    rank_e = G.n - G.components()
    xm1 = BivarPoly({(1, 0): 1, (0, 0): -1})
    ym1 = BivarPoly({(0, 1): 1, (0, 0): -1})
    total = BivarPoly()
    tally: dict[tuple[int, int], int] = {}
    for mask in range(1 << m):
        subset = [G.edges[i] for i in range(m) if mask >> i & 1]
        rank_a = G.n - G.components(subset)
        key = (rank_e - rank_a, len(subset) - rank_a)
        tally[key] = tally.get(key, 0) + 1
    for (a, b), k in tally.items():
        total = total + BivarPoly.constant(k) * xm1**a * ym1**b
    return total


def graph_from_edges(n: int, edges) -> Multigraph:
    return Multigraph(n, tuple(tuple(e) for e in edges))


def complete_graph(n: int) -> Multigraph:
    return Multigraph(n, tuple(itertools.combinations(range(n), 2)))


def cycle_graph(n: int) -> Multigraph:
    if n == 1:
        return Multigraph(1, ((0, 0),))
    return Multigraph(n, tuple((i, (i + 1) % n) for i in range(n)))
