"""Pendant and vertex-pendant appearances: detection, counting, surgery.

Appearance enumeration scans bridges rather than vertex subsets: the
link of any pendant appearance is a bridge, so orienting each bridge
both ways and testing the far-side component is complete.  The far side
of a bridge is a contiguous DFS-preorder interval (child side) or the
rest of its component (parent side), so candidates of a given order are
located without touching the whole graph.  A subset-scan oracle lives in
the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .canon import CanonicalForm, RootedGraph, canonical_form, component_form, rooted_key
from .frag import as_predicate
from .graphs import SMALL_CAP, BridgeData, Graph, bridge_data, induced, is_connected


@dataclass(frozen=True)
class PendantAppearance:
    """Induced copy on W joined to the rest by the single oriented link (w, x)."""

    vertex_set: tuple[int, ...]
    link: tuple[int, int]          # (w, x), w inside W, x outside
    shape: CanonicalForm
    root_image: int

    def key(self) -> tuple:
        return (self.vertex_set, self.link)


@dataclass(frozen=True)
class VertexPendantAppearance:
    """Copy of a rooted graph on W touching the outside only at w*."""

    vertex_set: tuple[int, ...]
    distinguished: int
    shape: CanonicalForm
    root_code: tuple  # rooted canonical key of (G[W], w*)


def _comp_starts(data: BridgeData) -> list[int]:
    starts = [0]
    for s in data.comp_size[:-1]:
        starts.append(starts[-1] + s)
    return starts


def _oriented_sides(g: Graph, data: BridgeData, max_order: int | None = None):
    """Yield (W_vertices, w, x) for both orientations of every bridge.

    Sizes are known from the DFS decoration, so orientations beyond
    ``max_order`` are skipped before any vertex tuple is built.
    """
    starts = _comp_starts(data)
    for e in sorted(data.bridges):
        u, v = e
        child = v if data.parent[v - 1] == u else u
        par = u if child == v else v
        lo = data.pre[child - 1]
        sz = data.size[child - 1]
        cid = data.comp_id[child - 1]
        cstart = starts[cid]
        csz = data.comp_size[cid]
        if max_order is None or sz <= max_order:
            yield data.order[lo:lo + sz], child, par
        if max_order is None or csz - sz <= max_order:
            yield data.order[cstart:lo] + data.order[lo + sz:cstart + csz], par, child


def appearances(g: Graph, max_order: int | None = None, data: BridgeData | None = None):
    """All pendant appearances in g (of any connected graph), optionally order-capped."""
    if data is None:
        data = bridge_data(g)
    out = []
    for side, w, x in _oriented_sides(g, data, max_order):
        vs = tuple(sorted(side))
        out.append(PendantAppearance(vs, (w, x), component_form(g, vs), w))
    return out


def pend_total(g: Graph) -> int:
    """pend(G): twice the number of bridges."""
    return 2 * len(bridge_data(g).bridges)


def pend_rooted(g: Graph, h: RootedGraph, data: BridgeData | None = None) -> list[PendantAppearance]:
    """All pendant appearances of the rooted graph h in g."""
    target = rooted_key(h.graph, h.root)
    order = h.order
    if data is None:
        data = bridge_data(g)
    found = []
    for side, w, x in _oriented_sides(g, data, max_order=order):
        if len(side) != order:
            continue
        vs = sorted(side)
        sub = induced(g, vs)
        local_root = vs.index(w) + 1
        if rooted_key(sub, local_root) == target:
            found.append(PendantAppearance(tuple(vs), (w, x), canonical_form(sub), w))
    return found


def pend_unrooted(g: Graph, h: Graph, data: BridgeData | None = None) -> int:
    """pend(G, H): appearances of H for some choice of root."""
    if not is_connected(h):
        raise ValueError("pend_unrooted requires a connected graph")
    target = canonical_form(h)
    if data is None:
        data = bridge_data(g)
    count = 0
    for side, _, _ in _oriented_sides(g, data, max_order=h.n):
        if len(side) == h.n and component_form(g, tuple(sorted(side))) == target:
            count += 1
    return count


def pend_counts(g: Graph, targets: list[Graph]) -> list[int]:
    """pend(G, H) for several small connected H from one bridge scan."""
    forms = [canonical_form(h) for h in targets]
    orders = {h.n for h in targets}
    cap = max(orders)
    data = bridge_data(g)
    counts = [0] * len(targets)
    for side, _, _ in _oriented_sides(g, data, max_order=cap):
        if len(side) not in orders:
            continue
        form = component_form(g, tuple(sorted(side)))
        for i, f in enumerate(forms):
            if f == form:
                counts[i] += 1
    return counts


def appearances_in_class(g: Graph, c, h_star: int, data: BridgeData | None = None) -> list[PendantAppearance]:
    """Pend(G, C) for a class c of connected graphs of order <= h_star."""
    member = as_predicate(c)
    out = []
    for a in appearances(g, max_order=h_star, data=data):
        if member(a.shape.to_graph()):
            out.append(a)
    return out


# -- vertex-pendant appearances -----------------------------------------


def _check_vertex_rooted(k: RootedGraph) -> None:
    if k.order < 2:
        raise ValueError("vertex-pendant root graph needs at least 2 vertices")
    rest = [v for v in k.graph.vertices() if v != k.root]
    if not is_connected(induced(k.graph, rest)):
        raise ValueError("invalid-root: K - r must be connected")


def vpend(g: Graph, k: RootedGraph) -> list[VertexPendantAppearance]:
    """All vertex-pendant appearances of K* in g.

    Scans connected induced subgraphs S of order v(K)-1 whose external
    neighbourhood is a single vertex w*; the appearance set is S + w*.
    """
    _check_vertex_rooted(k)
    if g.n > SMALL_CAP:
        raise ValueError(f"vpend subset scan capped at {SMALL_CAP} vertices")
    h = k.order - 1
    if h > g.n:
        return []
    target = rooted_key(k.graph, k.root)
    found = []
    for combo in combinations(range(g.n), h):
        smask = 0
        for i in combo:
            smask |= 1 << i
        if not _mask_connected(g, smask):
            continue
        ext = 0
        for i in combo:
            ext |= g.adj[i]
        ext &= ~smask
        if bin(ext).count("1") != 1:
            continue
        wstar = ext.bit_length()  # single bit -> 1-based label
        vs = sorted(v + 1 for v in combo) + [wstar]
        vs.sort()
        sub = induced(g, vs)
        local_root = vs.index(wstar) + 1
        code = rooted_key(sub, local_root)
        if code == target:
            found.append(
                VertexPendantAppearance(tuple(vs), wstar, canonical_form(sub), code)
            )
    return found


def _mask_connected(g: Graph, mask: int) -> bool:
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        m = frontier
        while m:
            i = (m & -m).bit_length() - 1
            m &= m - 1
            nxt |= g.adj[i]
        frontier = nxt & mask & ~seen
        seen |= frontier
    return seen == mask


def near_disjoint(a1: VertexPendantAppearance, a2: VertexPendantAppearance) -> bool:
    common = set(a1.vertex_set) & set(a2.vertex_set)
    if not common:
        return True
    return common == {a1.distinguished} and a1.distinguished == a2.distinguished


# -- surgery -------------------------------------------------------------


def plus_root(h: RootedGraph) -> RootedGraph:
    """(H+)*: add a vertex adjacent to the root and make it the new root."""
    g = h.graph
    rows = list(g.adj) + [0]
    new = g.n + 1
    rows[h.root - 1] |= 1 << (new - 1)
    rows[new - 1] |= 1 << (h.root - 1)
    return RootedGraph(Graph(new, tuple(rows)), new)


def attach_pendant(g: Graph, h: RootedGraph, host: int, labels) -> Graph:
    """Glue a pendant copy of h onto ``host`` using the fresh ``labels``.

    ``labels[i]`` receives vertex i+1 of h; the link edge joins the root
    image to host.  Labels must be exactly {n+1 .. n+v(h)} so the result
    is again a graph on an initial segment.
    """
    g._check_vertex(host)
    labels = list(labels)
    m = h.order
    if len(labels) != m:
        raise ValueError("label count must match v(h)")
    if sorted(labels) != list(range(g.n + 1, g.n + m + 1)):
        raise ValueError(f"label collision: fresh labels must be exactly {{{g.n + 1}..{g.n + m}}}")
    pairs = list(g.edges())
    for u, v in h.graph.edges():
        pairs.append((labels[u - 1], labels[v - 1]))
    pairs.append((labels[h.root - 1], host))
    from .graphs import from_edges

    return from_edges(g.n + m, pairs)


def _validate_appearance(g: Graph, a: PendantAppearance) -> None:
    vs = set(a.vertex_set)
    w, x = a.link
    if not vs or any(not 1 <= v <= g.n for v in vs) or w not in vs or x in vs:
        raise ValueError("stale appearance: vertices outside graph")
    out_edges = []
    for v in sorted(vs):
        for nb in g.neighbors(v):
            if nb not in vs:
                out_edges.append((v, nb))
    if out_edges != [(w, x)]:
        raise ValueError("stale appearance: link is not the unique outgoing edge")
    sub = induced(g, sorted(vs))
    if not is_connected(sub) or canonical_form(sub) != a.shape:
        raise ValueError("stale appearance: induced shape changed")


def detach_pendant(g: Graph, a: PendantAppearance) -> Graph:
    """Remove the appearance's vertex set; remaining labels close ranks order-preservingly."""
    _validate_appearance(g, a)
    keep = [v for v in g.vertices() if v not in set(a.vertex_set)]
    if not keep:
        raise ValueError("cannot detach: appearance covers every vertex")
    return induced(g, keep)


def kill_set(g: Graph, c, a: PendantAppearance, h_star: int | None = None) -> set[PendantAppearance]:
    """Q = Pend(G, C) minus Pend(G - W, C), compared in the labels of g."""
    if h_star is None:
        h_star = getattr(c, "max_member_order", None)
    if h_star is None:
        raise ValueError("kill_set needs the class order bound h_star")
    _validate_appearance(g, a)
    before = appearances_in_class(g, c, h_star)
    keep = [v for v in g.vertices() if v not in set(a.vertex_set)]
    surviving: set[tuple] = set()
    if keep:
        sub = induced(g, keep)
        back = {i + 1: keep[i] for i in range(len(keep))}
        for b in appearances_in_class(sub, c, h_star):
            vs = tuple(sorted(back[v] for v in b.vertex_set))
            link = (back[b.link[0]], back[b.link[1]])
            surviving.add((vs, link))
    return {b for b in before if b.key() not in surviving}
