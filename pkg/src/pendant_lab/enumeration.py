"""Exhaustive small-graph enumeration over edge-bitmask integers.

A labelled graph on {1..n} is an integer whose bit t encodes the t-th
edge slot; slots are ordered (1,2),(1,3),...,(1,n),(2,3),... so counts
and member lists are reproducible regardless of sharding.  The hot
loops work on raw masks; Graph objects are materialised only when a
predicate needs one.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterator

from .graphs import Graph, unchecked_graph

MASK_CAP = 8  # 2^28 masks at n=8 is the practical exhaustive limit


@lru_cache(maxsize=None)
def edge_slots(n: int) -> tuple[tuple[int, int], ...]:
    """0-based endpoint pairs for each edge-bit position."""
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


@lru_cache(maxsize=None)
def _slot_rows(n: int) -> tuple[tuple[int, int, int, int], ...]:
    """(i, j, bit j, bit i) per slot for fast adjacency assembly."""
    out = []
    for i, j in edge_slots(n):
        out.append((i, j, (1 << j), (1 << i)))
    return tuple(out)


def mask_to_rows(n: int, mask: int) -> tuple[int, ...]:
    rows = [0] * n
    slots = _slot_rows(n)
    while mask:
        t = (mask & -mask).bit_length() - 1
        mask &= mask - 1
        i, j, bi, bj = slots[t]
        rows[i] |= bi
        rows[j] |= bj
    return tuple(rows)


def mask_to_graph(n: int, mask: int) -> Graph:
    return unchecked_graph(n, mask_to_rows(n, mask))


def graph_to_mask(g: Graph) -> int:
    slots = edge_slots(g.n)
    index = {pair: t for t, pair in enumerate(slots)}
    mask = 0
    for u, v in g.edges():
        mask |= 1 << index[(u - 1, v - 1)]
    return mask


def total_masks(n: int) -> int:
    return 1 << (n * (n - 1) // 2)


def iter_graphs(n: int) -> Iterator[Graph]:
    """All labelled graphs on {1..n} in ascending mask order."""
    if n > MASK_CAP:
        raise ValueError(f"exhaustive enumeration capped at n={MASK_CAP}")
    for mask in range(total_masks(n)):
        yield mask_to_graph(n, mask)


def iter_masks_with_edge_budget(n: int, max_edges: int) -> Iterator[int]:
    """Masks with at most ``max_edges`` bits, ascending within each count."""
    slots = n * (n - 1) // 2
    for k in range(min(max_edges, slots) + 1):
        for combo in combinations(range(slots), k):
            mask = 0
            for t in combo:
                mask |= 1 << t
            yield mask


# -- mask-level structure ----------------------------------------------


def mask_component_sizes(n: int, mask: int) -> list[int]:
    """Component sizes via union-find directly on the mask."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    slots = edge_slots(n)
    m = mask
    while m:
        t = (m & -m).bit_length() - 1
        m &= m - 1
        i, j = slots[t]
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    sizes: dict[int, int] = {}
    for x in range(n):
        r = find(x)
        sizes[r] = sizes.get(r, 0) + 1
    return sorted(sizes.values(), reverse=True)


def mask_is_forest(n: int, mask: int) -> bool:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    slots = edge_slots(n)
    while mask:
        t = (mask & -mask).bit_length() - 1
        mask &= mask - 1
        i, j = slots[t]
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[max(ri, rj)] = min(ri, rj)
    return True


def mask_is_connected(n: int, mask: int) -> bool:
    rows = mask_to_rows(n, mask)
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        m = frontier
        while m:
            i = (m & -m).bit_length() - 1
            m &= m - 1
            nxt |= rows[i]
        frontier = nxt & ~seen
        seen |= frontier
    return seen == (1 << n) - 1


# -- isomorphism-class scans ---------------------------------------------

_repr_cache: dict[int, tuple[Graph, ...]] = {}
_conn_repr_cache: dict[int, tuple[Graph, ...]] = {}


def representatives(n: int) -> tuple[Graph, ...]:
    """One representative per unlabelled graph on n vertices (ascending mask)."""
    if n not in _repr_cache:
        from .canon import canonical_form

        seen = {}
        for mask in range(total_masks(n)):
            g = mask_to_graph(n, mask)
            form = canonical_form(g)
            if form not in seen:
                seen[form] = g
        _repr_cache[n] = tuple(seen.values())
    return _repr_cache[n]


def connected_representatives(n: int) -> tuple[Graph, ...]:
    if n not in _conn_repr_cache:
        _conn_repr_cache[n] = tuple(
            g for g in representatives(n) if mask_is_connected(n, graph_to_mask(g))
        )
    return _conn_repr_cache[n]


def count_masks(
    n: int,
    predicate: Callable[[Graph], bool],
    start: int = 0,
    stop: int | None = None,
) -> tuple[int, int]:
    """(members, connected members) over a mask range; shardable."""
    stop = total_masks(n) if stop is None else stop
    total = 0
    conn = 0
    for mask in range(start, stop):
        g = mask_to_graph(n, mask)
        if predicate(g):
            total += 1
            if mask_is_connected(n, mask):
                conn += 1
    return total, conn
