"""Canonical forms, isomorphism, automorphism counts and root orbits.

Canonical identity is an adjacency bitstring of a canonically relabelled
copy, packed column-major: for positions j = 2..n the block of bits
(1,j), (2,j), ..., (j-1,j).  Two routes produce the string:

* graphs with a cycle: exhaustive frontier search for the
  lexicographically minimal string over all relabellings (the minimal
  ordering is built position by position; the frontier holds every
  prefix achieving the minimum, so the number of complete minimal
  orderings equals aut G);
* forests: a classic rooted-code construction (children sorted by code,
  centre-rooted), which keeps the equal-form-iff-isomorphic contract at
  any order where the minimal-string search would drown in factorially
  many ties (stars).

The route is decided by the isomorphism-invariant forest test, so every
unlabelled graph has exactly one canonical string.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from .graphs import SMALL_CAP, Graph, components, induced, is_connected, is_forest

_FRONTIER_LIMIT = 2_000_000


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Canonical adjacency bitstring; equal forms iff isomorphic graphs."""

    n: int
    bits: bytes

    def hex(self) -> str:
        return f"{self.n:02x}:{self.bits.hex()}"

    @staticmethod
    def from_hex(text: str) -> "CanonicalForm":
        head, _, body = text.partition(":")
        return CanonicalForm(int(head, 16), bytes.fromhex(body))

    def to_graph(self) -> Graph:
        """Rebuild the canonical representative."""
        n = self.n
        total = n * (n - 1) // 2
        acc = int.from_bytes(self.bits, "big") >> ((-total) % 8) if self.bits else 0
        rows = [0] * n
        # blocks were packed j = 1..n-1, most recent block in the low bits
        for j in range(n - 1, 0, -1):
            block = acc & ((1 << j) - 1)
            acc >>= j
            for i in range(j):
                if (block >> (j - 1 - i)) & 1:
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
        return Graph(n, tuple(rows))


@dataclass(frozen=True)
class RootedGraph:
    """Connected graph with a distinguished root vertex."""

    graph: Graph
    root: int

    def __post_init__(self) -> None:
        self.graph._check_vertex(self.root)
        if not is_connected(self.graph):
            raise ValueError("rooted graph must be connected")

    @property
    def order(self) -> int:
        return self.graph.n


def _pack_blocks(n: int, blocks: list[int]) -> bytes:
    total = n * (n - 1) // 2
    acc = 0
    for j, b in enumerate(blocks, start=1):
        acc = (acc << j) | b
    pad = (-total) % 8
    acc <<= pad
    nbytes = (total + pad) // 8
    return acc.to_bytes(nbytes, "big")


# -- minimal-string frontier search (graphs with a cycle) ---------------


def _min_order_search(adj: tuple[int, ...], n: int, first: int | None = None):
    """Return (blocks, orderings) for the minimal column-major string.

    ``orderings`` is the complete list of vertex orders (0-based tuples)
    achieving the minimum; its length is the automorphism count (root
    fixing count when ``first`` is given).
    """
    if n == 1:
        return [], [(0,)]
    frontier: list[tuple[int, ...]] = (
        [(first,)] if first is not None else [(v,) for v in range(n)]
    )
    blocks: list[int] = []
    for level in range(1, n):
        best = -1
        new_frontier: list[tuple[int, ...]] = []
        for pre in frontier:
            placed = 0
            for p in pre:
                placed |= 1 << p
            for v in range(n):
                if (placed >> v) & 1:
                    continue
                row = adj[v]
                b = 0
                for p in pre:
                    b = (b << 1) | ((row >> p) & 1)
                if best < 0 or b < best:
                    best = b
                    new_frontier = [pre + (v,)]
                elif b == best:
                    new_frontier.append(pre + (v,))
        blocks.append(best)
        frontier = new_frontier
        if len(frontier) > _FRONTIER_LIMIT:
            raise RuntimeError("canonical search frontier exploded; graph too symmetric")
    return blocks, frontier


# -- forest route --------------------------------------------------------


def _rooted_code(g: Graph, root: int, banned: int = 0) -> tuple:
    """AHU-style nested-tuple code of the tree hanging from ``root``.

    ``banned`` is a bitmask of vertices the walk must not enter (used to
    split a bicentral tree at its central edge).
    """
    adj = g.adj

    def rec(v: int, parent_bit: int, blocked: int) -> tuple:
        child_codes = []
        row = adj[v] & ~parent_bit & ~blocked
        while row:
            w = (row & -row).bit_length() - 1
            row &= row - 1
            child_codes.append(rec(w, 1 << v, blocked))
        return tuple(sorted(child_codes))

    return rec(root - 1, 0, banned)


def _tree_centers(g: Graph, comp: tuple[int, ...]) -> list[int]:
    """Iterative leaf stripping inside one tree component."""
    if len(comp) <= 2:
        return list(comp)
    alive = set(comp)
    degree = {v: g.degree(v) for v in comp}
    leaves = [v for v in comp if degree[v] == 1]
    while len(alive) > 2:
        nxt = []
        for v in leaves:
            alive.discard(v)
            for w in g.neighbors(v):
                if w in alive:
                    degree[w] -= 1
                    if degree[w] == 1:
                        nxt.append(w)
        leaves = nxt
    return sorted(alive)


def _tree_free_code(g: Graph, comp: tuple[int, ...]) -> tuple:
    centers = _tree_centers(g, comp)
    if len(centers) == 1:
        return ("u", _rooted_code(g, centers[0]))
    c1, c2 = centers
    code1 = _rooted_code(g, c1, banned=1 << (c2 - 1))
    code2 = _rooted_code(g, c2, banned=1 << (c1 - 1))
    lo, hi = sorted([code1, code2])
    return ("b", lo, hi)


def _code_order(code: tuple) -> int:
    """Vertex count of a rooted code."""
    return 1 + sum(_code_order(c) for c in code)


def _rebuild_rooted(code: tuple, start_label: int, edges: list[tuple[int, int]]) -> int:
    """Lay out a rooted code in preorder; returns the next free label."""
    nxt = start_label + 1
    for child in code:
        edges.append((start_label, nxt))
        nxt = _rebuild_rooted(child, nxt, edges)
    return nxt


def _forest_canonical(g: Graph) -> CanonicalForm:
    comps = components(g)
    keyed = []
    for comp in comps:
        code = _tree_free_code(g, comp)
        keyed.append((len(comp), code))
    keyed.sort()
    edges: list[tuple[int, int]] = []
    label = 1
    for size, code in keyed:
        if code[0] == "u":
            label = _rebuild_rooted(code[1], label, edges)
        else:
            r1 = label
            label = _rebuild_rooted(code[1], label, edges)
            edges.append((r1, label))
            label = _rebuild_rooted(code[2], label, edges)
    n = g.n
    rows = [0] * n
    for a, b in edges:
        rows[a - 1] |= 1 << (b - 1)
        rows[b - 1] |= 1 << (a - 1)
    blocks = []
    for j in range(1, n):
        b = 0
        for i in range(j):
            b = (b << 1) | ((rows[i] >> j) & 1)
        blocks.append(b)
    return CanonicalForm(n, _pack_blocks(n, blocks))


def _rooted_aut_from_code(code: tuple) -> int:
    total = 1
    i = 0
    while i < len(code):
        j = i
        while j < len(code) and code[j] == code[i]:
            j += 1
        mult = j - i
        total *= factorial(mult) * _rooted_aut_from_code(code[i]) ** mult
        i = j
    return total


def _tree_aut(g: Graph, comp: tuple[int, ...]) -> int:
    centers = _tree_centers(g, comp)
    if len(centers) == 1:
        return _rooted_aut_from_code(_rooted_code(g, centers[0]))
    c1, c2 = centers
    code1 = _rooted_code(g, c1, banned=1 << (c2 - 1))
    code2 = _rooted_code(g, c2, banned=1 << (c1 - 1))
    a = _rooted_aut_from_code(code1) * _rooted_aut_from_code(code2)
    return a * 2 if code1 == code2 else a


def _forest_aut(g: Graph) -> int:
    comps = components(g)
    groups: dict[tuple, int] = {}
    comp_aut: dict[tuple, int] = {}
    for comp in comps:
        key = (len(comp), _tree_free_code(g, comp))
        groups[key] = groups.get(key, 0) + 1
        if key not in comp_aut:
            comp_aut[key] = _tree_aut(g, comp)
    total = 1
    for key, mult in groups.items():
        total *= factorial(mult) * comp_aut[key] ** mult
    return total


# -- public api ----------------------------------------------------------


def _require_small(g: Graph, what: str) -> None:
    if g.n > SMALL_CAP:
        raise ValueError(f"{what} supported only up to {SMALL_CAP} vertices for non-forests (got {g.n})")


def canonical_form(g: Graph) -> CanonicalForm:
    if is_forest(g):
        return _forest_canonical(g)
    _require_small(g, "canonical_form")
    blocks, _ = _min_order_search(g.adj, g.n)
    return CanonicalForm(g.n, _pack_blocks(g.n, blocks))


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.edge_count() != g2.edge_count():
        return False
    if sorted(g1.degree(v) for v in g1.vertices()) != sorted(g2.degree(v) for v in g2.vertices()):
        return False
    return canonical_form(g1) == canonical_form(g2)


def aut(g: Graph) -> int:
    """Order of the automorphism group."""
    if is_forest(g):
        return _forest_aut(g)
    _require_small(g, "aut")
    _, orderings = _min_order_search(g.adj, g.n)
    return len(orderings)


def aut_rooted(h: RootedGraph) -> int:
    """Order of the subgroup of automorphisms fixing the root."""
    g = h.graph
    if is_forest(g):
        return _rooted_aut_from_code(_rooted_code(g, h.root))
    _require_small(g, "aut_rooted")
    _, orderings = _min_order_search(g.adj, g.n, first=h.root - 1)
    return len(orderings)


def rooted_key(g: Graph, root: int):
    """Hashable canonical key for (connected graph, root) up to rooted isomorphism."""
    if is_forest(g):
        return ("t", g.n, _rooted_code(g, root))
    _require_small(g, "rooted_key")
    blocks, _ = _min_order_search(g.adj, g.n, first=root - 1)
    return ("g", g.n, _pack_blocks(g.n, blocks))


def is_rooted_isomorphic(h1: RootedGraph, h2: RootedGraph) -> bool:
    if h1.order != h2.order:
        return False
    return rooted_key(h1.graph, h1.root) == rooted_key(h2.graph, h2.root)


def root_orbits(g: Graph) -> list[tuple[int, ...]]:
    """Orbits of the automorphism action on V(g); g must be connected."""
    if not is_connected(g):
        raise ValueError("root_orbits requires a connected graph")
    if is_forest(g):
        signature = {v: _rooted_code(g, v) for v in g.vertices()}
        buckets: dict[tuple, list[int]] = {}
        for v in g.vertices():
            buckets.setdefault(signature[v], []).append(v)
        return sorted((tuple(sorted(vs)) for vs in buckets.values()), key=lambda t: t[0])
    _require_small(g, "root_orbits")
    _, orderings = _min_order_search(g.adj, g.n)
    base = orderings[0]
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for other in orderings:
        for pos in range(g.n):
            a, b = find(base[pos]), find(other[pos])
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v + 1)
    return sorted((tuple(vs) for vs in groups.values()), key=lambda t: t[0])


def canonical_multiset(graphs_: list[Graph]) -> tuple[CanonicalForm, ...]:
    """Sorted tuple of canonical forms: the package-wide unlabelled multiset."""
    return tuple(sorted(canonical_form(g) for g in graphs_))


@lru_cache(maxsize=100_000)
def _cached_component_form(n: int, rows: tuple[int, ...]) -> CanonicalForm:
    return canonical_form(Graph(n, rows))


def component_form(g: Graph, comp: tuple[int, ...]) -> CanonicalForm:
    """Canonical form of one induced component, memoised on its normalised mask."""
    sub = induced(g, comp)
    return _cached_component_form(sub.n, sub.adj)
