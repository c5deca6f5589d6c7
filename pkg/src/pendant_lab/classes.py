"""Graph classes: membership predicates, minor containment, structural checkers.

Structural hypotheses (bridge-addable, bridge-deletable in A,
bridge-addable in A, bridge-stable, attachable/detachable) are checked
exhaustively up to a stated order; each checker returns ``None`` on
success or a concrete witness tuple.  Only the strong attachability
properties are machine-checked; the weak ones quantify over auxiliary
classes with equal convergence radius and admit no finite certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .canon import RootedGraph, canonical_form
from .graphs import (
    SMALL_CAP,
    Graph,
    add_edge,
    bridges,
    complete,
    complete_bipartite,
    components,
    delete_edge,
    disjoint_union,
    from_edges,
    induced,
    is_connected,
    is_forest,
    is_tree,
)
from .pendant import detach_pendant, pend_rooted


@dataclass(frozen=True)
class GraphClass:
    """Isomorphism-closed family given by a membership predicate.

    ``flags`` record declared structural properties used as test
    expectations.  ``order_cap`` bounds the orders the predicate can
    decide (None = unbounded); ``max_member_order`` bounds member sizes
    for finite classes such as the kill-set classes of connected graphs.
    """

    name: str
    membership: Callable[[Graph], bool]
    flags: dict = field(default_factory=dict, compare=False)
    order_cap: int | None = None
    max_member_order: int | None = None
    rho: float | None = None  # radius of convergence when known

    def contains(self, g: Graph) -> bool:
        if self.order_cap is not None and g.n > self.order_cap:
            raise ValueError(f"class {self.name}: membership capped at order {self.order_cap}")
        if self.max_member_order is not None and g.n > self.max_member_order:
            return False
        return self.membership(g)

    def __call__(self, g: Graph) -> bool:
        return self.contains(g)


@dataclass(frozen=True)
class MinorSpec:
    excluded: tuple[Graph, ...]

    def __post_init__(self) -> None:
        for m in self.excluded:
            if m.n < 1:
                raise ValueError("excluded minor needs at least one vertex")


# -- minor containment ---------------------------------------------------


def _connected_submasks(g: Graph, allowed: int, max_size: int) -> list[int]:
    """All connected vertex subsets (as bitmasks) inside ``allowed``."""
    found: set[int] = set()
    singles = []
    m = allowed
    while m:
        b = m & -m
        m &= m - 1
        singles.append(b)
        found.add(b)
    frontier = list(found)
    while frontier:
        nxt = []
        for mask in frontier:
            if bin(mask).count("1") >= max_size:
                continue
            nbhd = 0
            mm = mask
            while mm:
                i = (mm & -mm).bit_length() - 1
                mm &= mm - 1
                nbhd |= g.adj[i]
            nbhd &= allowed & ~mask
            while nbhd:
                b = nbhd & -nbhd
                nbhd &= nbhd - 1
                grown = mask | b
                if grown not in found:
                    found.add(grown)
                    nxt.append(grown)
        frontier = nxt
    return sorted(found)


def has_minor(g: Graph, m: Graph) -> bool:
    """Branching search for a minor model: disjoint connected branch sets,
    one per vertex of m, with an edge between sets for every edge of m."""
    if g.n > SMALL_CAP or m.n > SMALL_CAP:
        raise ValueError(f"minor search capped at {SMALL_CAP} vertices")
    k = m.n
    if g.n < k or g.edge_count() < m.edge_count():
        return False
    gdeg = sorted((g.degree(v) for v in g.vertices()), reverse=True)
    mdeg = sorted((m.degree(v) for v in m.vertices()), reverse=True)
    # a branch set can host an m-vertex of degree d only with enough boundary
    if gdeg[k - 1] == 0 and mdeg[k - 1] > 0 and g.n == k:
        return False

    # order m's vertices by degree, keeping the assignment front connected
    morder: list[int] = []
    remaining = set(range(m.n))
    while remaining:
        nbrs = [v for v in remaining if any(((m.adj[v] >> u) & 1) for u in morder)]
        pool = nbrs if nbrs else list(remaining)
        pick = max(pool, key=lambda v: bin(m.adj[v]).count("1"))
        morder.append(pick)
        remaining.discard(pick)

    full = (1 << g.n) - 1
    max_block = g.n - k + 1
    subsets_cache: dict[int, list[int]] = {}

    def candidates(free: int) -> list[int]:
        if free not in subsets_cache:
            subsets_cache[free] = _connected_submasks(g, free, max_block)
        return subsets_cache[free]

    def neighbourhood(mask: int) -> int:
        nbhd = 0
        mm = mask
        while mm:
            i = (mm & -mm).bit_length() - 1
            mm &= mm - 1
            nbhd |= g.adj[i]
        return nbhd & ~mask

    blocks: dict[int, int] = {}

    def place(idx: int, free: int) -> bool:
        if idx == k:
            return True
        if bin(free).count("1") < k - idx:
            return False
        mv = morder[idx]
        need = [u for u in morder[:idx] if (m.adj[mv] >> u) & 1]
        for mask in candidates(free):
            nb = None
            ok = True
            for u in need:
                if nb is None:
                    nb = neighbourhood(mask)
                if not nb & blocks[u]:
                    ok = False
                    break
            if not ok:
                continue
            blocks[mv] = mask
            if place(idx + 1, free & ~mask):
                return True
            del blocks[mv]
        return False

    return place(0, full)


def minor_closed_class(spec: MinorSpec, name: str | None = None) -> GraphClass:
    label = name or ("minor-free(" + ",".join(f"{m.n}v{m.edge_count()}e" for m in spec.excluded) + ")")

    def member(g: Graph) -> bool:
        return not any(has_minor(g, m) for m in spec.excluded)

    return GraphClass(label, member, flags={"minor_closed": True}, order_cap=SMALL_CAP)


# -- cycle machinery -----------------------------------------------------


def longest_cycle(g: Graph) -> int:
    """Length of a longest cycle (0 if acyclic); DFS path extension."""
    if g.n > SMALL_CAP:
        raise ValueError(f"longest_cycle capped at {SMALL_CAP} vertices")
    if is_forest(g):
        return 0
    best = 0
    adj = g.adj
    for start in range(g.n):
        # only cycles whose minimum vertex is `start`: prunes relabellings
        allowed = ~((1 << start) - 1)

        def extend(v: int, mask: int, length: int) -> None:
            nonlocal best
            row = adj[v] & allowed
            if length >= 3 and (adj[v] >> start) & 1 and length > best:
                best = length
            m = row & ~mask
            while m:
                w = (m & -m).bit_length() - 1
                m &= m - 1
                extend(w, mask | (1 << w), length + 1)

        extend(start, 1 << start, 1)
    return best


# -- built-in classes ------------------------------------------------------


def _core_rows(g: Graph) -> tuple[int, list[int]]:
    """Iteratively delete degree-<=1 vertices and suppress degree-2 ones.

    Sound for minor targets of minimum degree >= 3 (K4, K5, K33): a
    branch set never needs the removed vertex.  Returns (live count,
    bitset rows over the original labels).
    """
    rows = list(g.adj)
    alive = (1 << g.n) - 1
    changed = True
    while changed:
        changed = False
        m = alive
        while m:
            i = (m & -m).bit_length() - 1
            m &= m - 1
            row = rows[i]
            d = bin(row).count("1")
            if d <= 1:
                if d == 1:
                    j = (row & -row).bit_length() - 1
                    rows[j] &= ~(1 << i)
                rows[i] = 0
                alive &= ~(1 << i)
                changed = True
            elif d == 2:
                a = (row & -row).bit_length() - 1
                b = (row & (row - 1)).bit_length() - 1
                rows[a] &= ~(1 << i)
                rows[b] &= ~(1 << i)
                rows[a] |= 1 << b
                rows[b] |= 1 << a
                rows[i] = 0
                alive &= ~(1 << i)
                changed = True
    return bin(alive).count("1"), rows


def _core_graph(g: Graph) -> Graph | None:
    """Min-degree-3 core of g, or None when the reductions consume it."""
    count, rows = _core_rows(g)
    if count == 0:
        return None
    keep = [i for i in range(g.n) if rows[i]]
    index = {v: k for k, v in enumerate(keep)}
    out = [0] * len(keep)
    for v in keep:
        row = rows[v]
        while row:
            j = (row & -row).bit_length() - 1
            row &= row - 1
            out[index[v]] |= 1 << index[j]
    return Graph(len(keep), tuple(out))


def _planar_member(g: Graph) -> bool:
    # Euler count rules out dense graphs before any minor search; the
    # degree-<=2 core decides the rest (K5 needs 10 edges, K33 needs 9).
    comps = components(g)
    if len(comps) > 1:
        return all(_planar_member(induced(g, c)) for c in comps)
    e = g.edge_count()
    if g.n >= 3 and e > 3 * g.n - 6:
        return False
    if e < 9:
        return True
    core = _core_graph(g)
    if core is None or core.n < 5 or core.edge_count() < 9:
        return True
    if core.n >= 3 and core.edge_count() > 3 * core.n - 6:
        return False
    return not (has_minor(core, complete(5)) or has_minor(core, complete_bipartite(3, 3)))


_K4 = complete(4)
_K23 = complete_bipartite(2, 3)


def _series_parallel_member(g: Graph) -> bool:
    core = _core_graph(g)
    if core is None or core.n < 4 or core.edge_count() < 6:
        return True
    return not has_minor(core, _K4)


def _outerplanar_member(g: Graph) -> bool:
    # K23 has degree-2 vertices, so the degree-2 suppression is not sound here
    return not (has_minor(g, _K4) or has_minor(g, _K23))


def cycle_capped(base: GraphClass, t, name: str | None = None) -> GraphClass:
    """Members of ``base`` whose cycles all have length <= t(n), n = order of the graph.

    ``t`` is an int, a callable n -> bound, or one of "sqrt", "log", "inf".
    """
    if t == "inf":
        bound = lambda n: n
    elif t == "sqrt":
        import math

        bound = lambda n: max(3, math.isqrt(n))
    elif t == "log":
        import math

        bound = lambda n: max(3, int(math.log2(n + 1)))
    elif callable(t):
        bound = t
    else:
        tval = int(t)
        bound = lambda n: tval

    def member(g: Graph) -> bool:
        if not base.contains(g):
            return False
        return longest_cycle(g) <= bound(g.n)

    return GraphClass(
        name or f"cycle-capped({base.name})",
        member,
        flags=dict(base.flags),
        order_cap=base.order_cap or SMALL_CAP,
        rho=base.rho,
    )


def _parity_mixed_member(g: Graph) -> bool:
    # planar graphs in which every component has even order
    if any(len(c) % 2 for c in components(g)):
        return False
    return _planar_member(g)


_E = 2.718281828459045


def builtin(name: str) -> GraphClass:
    """Named families; raises on unknown names."""
    if name == "all":
        return GraphClass("all", lambda g: True, flags={"bridge_addable": True, "decomposable": True})
    if name == "forests":
        return GraphClass(
            "forests", is_forest, flags={"bridge_addable": True, "decomposable": True}, rho=1.0 / _E
        )
    if name == "trees":
        return GraphClass("trees", is_tree, flags={"connected_only": True}, rho=1.0 / _E)
    if name == "planar":
        return GraphClass(
            "planar",
            _planar_member,
            flags={"bridge_addable": True, "decomposable": True, "minor_closed": True},
            order_cap=SMALL_CAP,
            rho=0.0367,
        )
    if name == "connected_planar":
        return GraphClass(
            "connected_planar",
            lambda g: is_connected(g) and _planar_member(g),
            flags={"connected_only": True},
            order_cap=SMALL_CAP,
            rho=0.0367,
        )
    if name == "series_parallel":
        return GraphClass(
            "series_parallel",
            _series_parallel_member,
            flags={"bridge_addable": True, "decomposable": True, "minor_closed": True},
            order_cap=SMALL_CAP,
        )
    if name == "outerplanar":
        return GraphClass(
            "outerplanar",
            _outerplanar_member,
            flags={"bridge_addable": True, "decomposable": True, "minor_closed": True},
            order_cap=SMALL_CAP,
        )
    if name == "parity_mixed":
        return GraphClass("parity_mixed", _parity_mixed_member, order_cap=SMALL_CAP)
    if name.startswith("cycle_capped:") or name.startswith("cycle-capped:"):
        _, base_name, t = name.replace("_", "-").split(":", 2)
        return cycle_capped(builtin(base_name.replace("-", "_")), t)
    if name.startswith("minor-closed:") or name.startswith("minor_closed:"):
        _, spec = name.replace("_", "-").split(":", 1)
        minors = tuple(named_graph(s) for s in spec.split(","))
        return minor_closed_class(MinorSpec(minors), name=f"minor-closed:{spec}")
    raise KeyError(f"unknown graph class {name!r}")


def connected_up_to(h_star: int, base: GraphClass | None = None, name: str | None = None) -> GraphClass:
    """Connected members of ``base`` (default: all graphs) of order <= h_star."""
    inner = base.contains if base is not None else (lambda g: True)
    return GraphClass(
        name if name is not None else f"connected<={h_star}",
        lambda g: is_connected(g) and inner(g),
        max_member_order=h_star,
    )


def paths_up_to(h_star: int) -> GraphClass:
    def member(g: Graph) -> bool:
        if not is_tree(g):
            return False
        return all(g.degree(v) <= 2 for v in g.vertices())

    return GraphClass(f"paths<={h_star}", member, max_member_order=h_star)


def even_order_subclass(base: GraphClass, name: str | None = None) -> GraphClass:
    return GraphClass(
        name or f"{base.name}-even",
        lambda g: g.n % 2 == 0 and base.contains(g),
        order_cap=base.order_cap,
    )


def named_graph(name: str) -> Graph:
    """Small graphs by conventional name: K4, P3, C5, K2,3 / K23, star S3."""
    name = name.strip()
    if name.upper().startswith("K") and "," in name:
        a, b = name[1:].split(",")
        return complete_bipartite(int(a), int(b))
    kind, num = name[0].upper(), name[1:]
    if kind == "K" and len(num) == 2 and num.isdigit() and num[0] != "1":
        # two-digit shorthand like K33
        return complete_bipartite(int(num[0]), int(num[1]))
    n = int(num)
    if kind == "K":
        return complete(n)
    if kind == "P":
        from .graphs import path

        return path(n)
    if kind == "C":
        from .graphs import cycle

        return cycle(n)
    if kind == "S":
        from .graphs import star

        return star(n)
    raise KeyError(f"unknown graph name {name!r}")


# -- exhaustive structural checkers ---------------------------------------

# Witnesses are plain tuples whose first element names the violated clause.


def _iter_members(c: GraphClass, n_max: int, connected_only: bool = False):
    from .enumeration import iter_graphs

    for n in range(1, n_max + 1):
        for g in iter_graphs(n):
            if connected_only and not is_connected(g):
                continue
            if c.contains(g):
                yield g


def check_bridge_addable(c: GraphClass, n_max: int):
    """Members stay members under adding any edge across two components."""
    for g in _iter_members(c, n_max):
        comps = components(g)
        if len(comps) < 2:
            continue
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                for u in comps[i]:
                    for v in comps[j]:
                        if not c.contains(add_edge(g, (u, v))):
                            return ("bridge_addable", g, u, v)
    return None


def check_bridge_deletable(c: GraphClass, h: Graph, n_max: int):
    """If a bridge deletion splits off a copy of h, the result stays in c."""
    hform = canonical_form(h)
    for g in _iter_members(c, n_max):
        for e in bridges(g):
            cut = delete_edge(g, e)
            comps = components(cut)
            for comp in comps:
                if len(comp) == h.n and canonical_form(induced(cut, comp)) == hform:
                    if not c.contains(cut):
                        return ("bridge_deletable", g, e)
                    break
    return None


def check_bridge_addable_in(c: GraphClass, h: Graph, n_max: int):
    """h is bridge-addable in c: joining an h-component to the rest stays in c."""
    hform = canonical_form(h)
    for g in _iter_members(c, n_max):
        comps = components(g)
        if len(comps) < 2:
            continue
        for comp in comps:
            if len(comp) != h.n or canonical_form(induced(g, comp)) != hform:
                continue
            inside = set(comp)
            for u in comp:
                for v in g.vertices():
                    if v in inside:
                        continue
                    if not c.contains(add_edge(g, (u, v))):
                        return ("bridge_addable_in", g, u, v)
    return None


def check_bridge_stable(c: GraphClass, n_max: int):
    """Clause (a): C + bridge + C lands in C; clause (b): C + bridge + non-C does not.

    c must contain only connected graphs; pairs are enumerated up to
    isomorphism with total order <= n_max, over all bridge endpoints.
    """
    from .enumeration import connected_representatives

    for n1 in range(1, n_max):
        for n2 in range(1, n_max - n1 + 1):
            if n2 < n1:
                continue
            for g1 in connected_representatives(n1):
                in1 = c.contains(g1)
                for g2 in connected_representatives(n2):
                    in2 = c.contains(g2)
                    if not (in1 or in2):
                        continue
                    joined = disjoint_union(g1, g2)
                    for u in range(1, n1 + 1):
                        for v in range(n1 + 1, n1 + n2 + 1):
                            merged = add_edge(joined, (u, v))
                            got = c.contains(merged)
                            if in1 and in2 and not got:
                                return ("bridge_stable_a", g1, g2, u, v)
                            if in1 != in2 and got:
                                return ("bridge_stable_b", g1, g2, u, v)
    return None


def check_attachable(c: GraphClass, h: RootedGraph, n_max: int):
    """If G has a pendant h-appearance on W and G - W is in c, then G is in c."""
    from .enumeration import iter_graphs

    for n in range(h.order + 1, n_max + 1):
        for g in iter_graphs(n):
            for a in pend_rooted(g, h):
                rest = detach_pendant(g, a)
                if c.contains(rest) and not c.contains(g):
                    return ("attachable", g, a.vertex_set)
    return None


def check_detachable(c: GraphClass, h: RootedGraph, n_max: int):
    """Members keep membership after cutting off any pendant h-appearance."""
    for g in _iter_members(c, n_max):
        if g.n <= h.order:
            continue
        for a in pend_rooted(g, h):
            if not c.contains(detach_pendant(g, a)):
                return ("detachable", g, a.vertex_set)
    return None


def isomorphism_invariance_sample(c: GraphClass, g: Graph, relabellings: int, seed: int) -> bool:
    """Spot-check that membership is label-blind under random relabellings."""
    import random

    rng = random.Random(seed)
    base = c.contains(g)
    labels = list(g.vertices())
    for _ in range(relabellings):
        perm = labels[:]
        rng.shuffle(perm)
        mapping = {v: perm[i] for i, v in enumerate(labels)}
        relabelled = from_edges(g.n, [(mapping[u], mapping[v]) for u, v in g.edges()])
        if c.contains(relabelled) != base:
            return False
    return True
