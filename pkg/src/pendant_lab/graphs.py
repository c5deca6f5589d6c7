"""Labelled simple graphs on vertex set {1..n} with bitset adjacency.

Adjacency rows are Python ints used as bitsets: bit ``j-1`` of
``adj[i-1]`` is set iff ``{i, j}`` is an edge.  Rows being arbitrary
precision ints, the representation itself has no hard size limit; the
exhaustive machinery (canonical forms of non-forests, census scans,
minor search) enforces ``SMALL_CAP``.  Graphs are immutable values:
every edit returns a new graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

SMALL_CAP = 16


class Edge(NamedTuple):
    """Unordered edge stored with u < v (1-based labels)."""

    u: int
    v: int

    @staticmethod
    def of(a: int, b: int) -> "Edge":
        if a == b:
            raise ValueError(f"loop edge at vertex {a}")
        return Edge(a, b) if a < b else Edge(b, a)


@dataclass(frozen=True)
class Graph:
    """Simple graph on {1..n}; ``adj[i]`` is the 0-based neighbour bitset of vertex i+1."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        n, adj = self.n, self.adj
        if n < 1:
            raise ValueError("graph must have at least one vertex")
        if len(adj) != n:
            raise ValueError("adjacency length must equal n")
        full = (1 << n) - 1
        for i, row in enumerate(adj):
            if row & ~full:
                raise ValueError(f"adjacency row {i + 1} has bits outside 1..{n}")
            if (row >> i) & 1:
                raise ValueError(f"loop at vertex {i + 1}")
        for i in range(n):
            row = adj[i]
            while row:
                j = (row & -row).bit_length() - 1
                row &= row - 1
                if not (adj[j] >> i) & 1:
                    raise ValueError(f"adjacency not symmetric at {i + 1},{j + 1}")

    # -- basic queries ------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return bool((self.adj[u - 1] >> (v - 1)) & 1)

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return bin(self.adj[v - 1]).count("1")

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return bits_to_vertices(self.adj[v - 1])

    def edges(self) -> Iterator[Edge]:
        for i in range(self.n):
            row = self.adj[i] >> (i + 1) << (i + 1)  # keep only j > i
            while row:
                j = (row & -row).bit_length() - 1
                row &= row - 1
                yield Edge(i + 1, j + 1)

    def edge_count(self) -> int:
        return sum(bin(r).count("1") for r in self.adj) // 2

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def _check_vertex(self, v: int) -> None:
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex {v} outside 1..{self.n}")

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        es = ",".join(f"{u}-{v}" for u, v in self.edges())
        return f"Graph(n={self.n}, edges=[{es}])"


# -- constructors ------------------------------------------------------


def unchecked_graph(n: int, rows: tuple[int, ...]) -> Graph:
    """Skip invariant validation; caller guarantees a symmetric loop-free matrix."""
    g = Graph.__new__(Graph)
    object.__setattr__(g, "n", n)
    object.__setattr__(g, "adj", rows)
    return g


def unchecked_from_edges(n: int, pairs: Iterable[tuple[int, int]]) -> Graph:
    """Fast path for edges produced by trusted generators (samplers, decoders)."""
    rows = [0] * n
    for a, b in pairs:
        rows[a - 1] |= 1 << (b - 1)
        rows[b - 1] |= 1 << (a - 1)
    return unchecked_graph(n, tuple(rows))


def from_edges(n: int, pairs: Iterable[tuple[int, int]]) -> Graph:
    rows = [0] * n
    for a, b in pairs:
        e = Edge.of(a, b)
        if not (1 <= e.u <= n and 1 <= e.v <= n):
            raise ValueError(f"edge {e} outside 1..{n}")
        rows[e.u - 1] |= 1 << (e.v - 1)
        rows[e.v - 1] |= 1 << (e.u - 1)
    return Graph(n, tuple(rows))


def empty(n: int) -> Graph:
    return Graph(n, (0,) * n)


def path(n: int) -> Graph:
    return from_edges(n, [(i, i + 1) for i in range(1, n)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return from_edges(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])


def complete(n: int) -> Graph:
    return from_edges(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def star(leaves: int) -> Graph:
    """K_{1,leaves} with the centre at label 1."""
    return from_edges(leaves + 1, [(1, i) for i in range(2, leaves + 2)])


def complete_bipartite(a: int, b: int) -> Graph:
    return from_edges(a + b, [(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)])


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    rows = list(g1.adj) + [row << g1.n for row in g2.adj]
    return Graph(g1.n + g2.n, tuple(rows))


# -- edits (value semantics) ------------------------------------------


def add_edge(g: Graph, e: tuple[int, int]) -> Graph:
    e = Edge.of(*e)
    if g.has_edge(e.u, e.v):
        raise ValueError(f"edge {e.u}-{e.v} already present")
    rows = list(g.adj)
    rows[e.u - 1] |= 1 << (e.v - 1)
    rows[e.v - 1] |= 1 << (e.u - 1)
    return Graph(g.n, tuple(rows))


def delete_edge(g: Graph, e: tuple[int, int]) -> Graph:
    e = Edge.of(*e)
    if not g.has_edge(e.u, e.v):
        raise ValueError(f"edge {e.u}-{e.v} absent")
    rows = list(g.adj)
    rows[e.u - 1] &= ~(1 << (e.v - 1))
    rows[e.v - 1] &= ~(1 << (e.u - 1))
    return Graph(g.n, tuple(rows))


def induced(g: Graph, vertices: Sequence[int]) -> Graph:
    """Induced subgraph relabelled order-preservingly to {1..k}."""
    vs = sorted(set(vertices))
    for v in vs:
        g._check_vertex(v)
    index = {v: i for i, v in enumerate(vs)}
    rows = [0] * len(vs)
    for v in vs:
        row = g.adj[v - 1]
        while row:
            j = (row & -row).bit_length()
            row &= row - 1
            if j in index:
                rows[index[v]] |= 1 << index[j]
    return Graph(len(vs), tuple(rows))


# -- bit helpers -------------------------------------------------------


def bits_to_vertices(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        out.append((mask & -mask).bit_length())
        mask &= mask - 1
    return tuple(out)


def vertices_to_bits(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << (v - 1)
    return mask


# -- connectivity ------------------------------------------------------


def components(g: Graph) -> list[tuple[int, ...]]:
    """Partition of {1..n} into connected parts, sorted by smallest label."""
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges():
        ru, rv = find(u - 1), find(v - 1)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for i in range(g.n):
        groups.setdefault(find(i), []).append(i + 1)
    return [tuple(groups[r]) for r in sorted(groups)]


def is_connected(g: Graph) -> bool:
    return len(components(g)) == 1


def is_forest(g: Graph) -> bool:
    """Acyclicity via union-find cycle detection."""
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges():
        ru, rv = find(u - 1), find(v - 1)
        if ru == rv:
            return False
        parent[max(ru, rv)] = min(ru, rv)
    return True


def is_tree(g: Graph) -> bool:
    return g.edge_count() == g.n - 1 and is_connected(g)


@dataclass(frozen=True)
class BridgeData:
    """DFS decoration shared by bridge detection and appearance scans.

    ``order``/``pre`` give the preorder; each DFS subtree occupies the
    contiguous preorder interval [pre[v], pre[v]+size[v]).  For a bridge
    (parent[v], v) the child side of the cut is exactly that interval.
    """

    order: tuple[int, ...]          # preorder position -> vertex label
    pre: tuple[int, ...]            # vertex label-1 -> preorder position
    parent: tuple[int, ...]         # vertex label-1 -> parent label (0 for roots)
    size: tuple[int, ...]           # vertex label-1 -> DFS subtree size
    comp_id: tuple[int, ...]        # vertex label-1 -> component index
    comp_size: tuple[int, ...]      # component index -> order
    bridges: frozenset[Edge]

    def subtree_vertices(self, v: int) -> tuple[int, ...]:
        lo = self.pre[v - 1]
        return self.order[lo:lo + self.size[v - 1]]


def bridge_data(g: Graph) -> BridgeData:
    """Iterative lowpoint DFS over all components."""
    n = g.n
    pre = [-1] * n
    low = [0] * n
    parent = [0] * n
    size = [1] * n
    comp_id = [-1] * n
    order: list[int] = []
    comp_sizes: list[int] = []
    bridges: set[Edge] = set()
    counter = 0
    adj = g.adj

    for root in range(n):
        if pre[root] >= 0:
            continue
        cid = len(comp_sizes)
        start_counter = counter
        # stack entries: (vertex, iterator state as remaining-neighbour mask)
        stack = [(root, adj[root])]
        pre[root] = counter
        low[root] = counter
        order.append(root + 1)
        comp_id[root] = cid
        counter += 1
        while stack:
            v, rest = stack[-1]
            if rest:
                w = (rest & -rest).bit_length() - 1
                stack[-1] = (v, rest & (rest - 1))
                if pre[w] < 0:
                    parent[w] = v + 1
                    pre[w] = counter
                    low[w] = counter
                    order.append(w + 1)
                    comp_id[w] = cid
                    counter += 1
                    stack.append((w, adj[w] & ~(1 << v)))
                else:
                    if low[v] > pre[w]:
                        low[v] = pre[w]
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    if low[v] < low[p]:
                        low[p] = low[v]
                    size[p] += size[v]
                    if low[v] == pre[v]:
                        bridges.add(Edge.of(p + 1, v + 1))
        comp_sizes.append(counter - start_counter)

    return BridgeData(
        order=tuple(order),
        pre=tuple(pre),
        parent=tuple(parent),
        size=tuple(size),
        comp_id=tuple(comp_id),
        comp_size=tuple(comp_sizes),
        bridges=frozenset(bridges),
    )


def bridges(g: Graph) -> frozenset[Edge]:
    """Edges whose deletion increases the component count."""
    return bridge_data(g).bridges


# -- text format -------------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse the CLI text format: first line n, then one ``u v`` pair per line.

    An optional trailing ``root r`` line is tolerated (consumed by rooted
    readers); it is ignored here.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ValueError("empty graph file")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise ValueError(f"first line must be the vertex count, got {lines[0]!r}") from exc
    pairs = []
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "root":
            continue
        if len(parts) != 2:
            raise ValueError(f"malformed edge line {ln!r}")
        pairs.append((int(parts[0]), int(parts[1])))
    return from_edges(n, pairs)


def format_edge_list(g: Graph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"
