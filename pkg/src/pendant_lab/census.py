"""Exhaustive census machinery: labelled counts, unlabelled connected
lists, closed-form forest/tree counting, growth sequences and partial
EGF sums.

Counting is exact.  The optimised engine may restrict the mask space
when a class declares an edge budget (forests fit in n-1 edges) and
memoises per-component membership for expensive isomorphism-invariant
predicates; the plain full-mask scan survives as the oracle the test
suite trusts first.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial
from pathlib import Path
from typing import Iterable, NamedTuple

from .canon import CanonicalForm, aut, canonical_form
from .classes import GraphClass
from .enumeration import (
    MASK_CAP,
    edge_slots,
    iter_masks_with_edge_budget,
    mask_is_connected,
    mask_to_graph,
    total_masks,
)
from .graphs import Graph

CODE_VERSION = 1


class UnlabelledEntry(NamedTuple):
    form: CanonicalForm
    order: int
    aut: int


@dataclass(frozen=True)
class UnlabelledList:
    """Connected unlabelled census H_1, H_2, ... sorted by order then form."""

    class_name: str
    max_order: int
    entries: tuple[UnlabelledEntry, ...]

    def __post_init__(self) -> None:
        keys = [(e.order, e.form) for e in self.entries]
        if keys != sorted(keys) or len(set(keys)) != len(keys):
            raise ValueError("unlabelled census must be sorted and duplicate-free")

    def of_order(self, k: int) -> list[UnlabelledEntry]:
        return [e for e in self.entries if e.order == k]

    def labelled_count(self, k: int) -> int:
        return sum(factorial(k) // e.aut for e in self.of_order(k))


@dataclass(frozen=True)
class CensusRecord:
    class_name: str
    n: int
    labelled_count: int
    connected_count: int
    shape_tallies: dict[str, int] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.connected_count > self.labelled_count:
            raise ValueError("connected count exceeds labelled count")
        if self.shape_tallies is not None:
            if sum(self.shape_tallies.values()) != self.labelled_count:
                raise ValueError("shape tallies must sum to the labelled count")


# -- persistent store ------------------------------------------------------


class Store:
    """Append-only line-delimited JSON store; last record per key wins.

    The directory comes from the constructor or PENDANT_LAB_STORE; with
    neither, persistence is disabled and every result is recomputed.
    """

    def __init__(self, root: str | Path | None = None):
        root = root if root is not None else os.environ.get("PENDANT_LAB_STORE")
        self.root = Path(root) if root else None
        self._cache: dict[str, dict] | None = None

    def _file(self) -> Path | None:
        if self.root is None:
            return None
        self.root.mkdir(parents=True, exist_ok=True)
        return self.root / "census.jsonl"

    def _load_all(self) -> dict[str, dict]:
        if self._cache is None:
            self._cache = {}
            f = self._file()
            if f is not None and f.exists():
                with open(f) as fh:
                    for line in fh:
                        line = line.strip()
                        if not line:
                            continue
                        rec = json.loads(line)
                        self._cache[rec["key"]] = rec["payload"]
        return self._cache

    def load(self, key: str) -> dict | None:
        return self._load_all().get(f"v{CODE_VERSION}:{key}")

    def save(self, key: str, payload: dict) -> None:
        full = f"v{CODE_VERSION}:{key}"
        self._load_all()[full] = payload
        f = self._file()
        if f is not None:
            with open(f, "a") as fh:
                fh.write(json.dumps({"key": full, "payload": payload}) + "\n")


# -- labelled counting -----------------------------------------------------


def count_labelled(
    c: GraphClass,
    n: int,
    shapes: bool = False,
    store: Store | None = None,
    workers: int = 1,
) -> CensusRecord:
    """Exact census of c on vertex set {1..n} by edge-bitmask iteration."""
    if n > MASK_CAP:
        raise ValueError(f"census capped at n={MASK_CAP}")
    key = f"census:{c.name}:{n}:shapes={int(shapes)}"
    if store is not None:
        hit = store.load(key)
        if hit is not None:
            return CensusRecord(
                c.name, n, hit["labelled"], hit["connected"], hit.get("tallies")
            )

    budget = _edge_budget(c, n)
    tallies: dict[str, int] | None = {} if shapes else None
    total = 0
    connected = 0
    if budget is not None:
        masks: Iterable[int] = iter_masks_with_edge_budget(n, budget)
    else:
        masks = range(total_masks(n))
    if workers > 1 and budget is None:
        total, connected, tallies = _count_parallel(c, n, shapes, workers)
    else:
        for mask in masks:
            g = mask_to_graph(n, mask)
            if not c.contains(g):
                continue
            total += 1
            if mask_is_connected(n, mask):
                connected += 1
            if tallies is not None:
                hx = canonical_form(g).hex()
                tallies[hx] = tallies.get(hx, 0) + 1

    if store is not None:
        store.save(key, {"labelled": total, "connected": connected, "tallies": tallies})
    return CensusRecord(c.name, n, total, connected, tallies)


def _edge_budget(c: GraphClass, n: int) -> int | None:
    if c.name in ("forests", "trees"):
        return n - 1
    return None


_PARALLEL_STATE: dict = {}


def _count_init(class_obj, n, shapes):
    _PARALLEL_STATE["c"] = class_obj
    _PARALLEL_STATE["n"] = n
    _PARALLEL_STATE["shapes"] = shapes


def _count_chunk(bounds: tuple[int, int]):
    c = _PARALLEL_STATE["c"]
    n = _PARALLEL_STATE["n"]
    shapes = _PARALLEL_STATE["shapes"]
    lo, hi = bounds
    total = 0
    conn = 0
    tallies: dict[str, int] | None = {} if shapes else None
    for mask in range(lo, hi):
        g = mask_to_graph(n, mask)
        if not c.contains(g):
            continue
        total += 1
        if mask_is_connected(n, mask):
            conn += 1
        if tallies is not None:
            hx = canonical_form(g).hex()
            tallies[hx] = tallies.get(hx, 0) + 1
    return total, conn, tallies


def _count_parallel(c: GraphClass, n: int, shapes: bool, workers: int):
    import multiprocessing as mp

    top = total_masks(n)
    chunk = (top + workers * 8 - 1) // (workers * 8)
    bounds = [(lo, min(lo + chunk, top)) for lo in range(0, top, chunk)]
    ctx = mp.get_context("fork")
    with ctx.Pool(workers, initializer=_count_init, initargs=(c, n, shapes)) as pool:
        parts = pool.map(_count_chunk, bounds)
    total = sum(p[0] for p in parts)
    conn = sum(p[1] for p in parts)
    tallies: dict[str, int] | None = None
    if shapes:
        tallies = {}
        for _, _, t in parts:
            for k, v in t.items():
                tallies[k] = tallies.get(k, 0) + v
    return total, conn, tallies


# -- unlabelled connected census --------------------------------------------


def _free_tree_multisets(total: int, bound):
    """Non-increasing child-code multisets of given total order."""
    if total == 0:
        yield ()
        return
    max_size = min(total, bound[0])
    for size in range(max_size, 0, -1):
        for code in rooted_tree_codes(size):
            key = (size, code)
            if key > bound:
                continue
            for rest in _free_tree_multisets(total - size, key):
                yield (key,) + rest


@lru_cache(maxsize=None)
def rooted_tree_codes(k: int) -> tuple[tuple, ...]:
    """All rooted-tree codes on k vertices (children sorted ascending)."""
    if k == 1:
        return ((),)
    out = set()
    bound = (k - 1, max(rooted_tree_codes(k - 1)))
    for mset in _free_tree_multisets(k - 1, bound):
        out.add(tuple(sorted(code for _, code in mset)))
    return tuple(sorted(out))


def free_trees(max_order: int) -> list[Graph]:
    """One representative per unlabelled free tree of order <= max_order."""
    from .canon import _rebuild_rooted, _tree_free_code
    from .graphs import from_edges

    reps: dict[tuple, Graph] = {}
    for k in range(1, max_order + 1):
        for code in rooted_tree_codes(k):
            edges: list[tuple[int, int]] = []
            _rebuild_rooted(code, 1, edges)
            g = from_edges(k, edges)
            key = (k, _tree_free_code(g, tuple(range(1, k + 1))))
            if key not in reps:
                reps[key] = g
    return list(reps.values())


def list_unlabelled_connected(
    c: GraphClass, max_order: int, method: str = "auto", store: Store | None = None
) -> UnlabelledList:
    """Connected unlabelled census with automorphism counts.

    Tree classes enumerate free trees directly (feasible far beyond the
    mask cap); everything else scans connected masks and clusters by
    canonical form.  Both routes verify the labelled-count identity
    sum k!/aut = connected labelled count before returning.
    """
    if method == "auto":
        method = "trees" if c.flags.get("tree_class") or c.name in ("trees",) else "masks"
    entries: list[UnlabelledEntry] = []
    if method == "trees":
        for g in free_trees(max_order):
            if c.contains(g):
                entries.append(UnlabelledEntry(canonical_form(g), g.n, aut(g)))
    else:
        if max_order > MASK_CAP:
            raise ValueError(f"mask census capped at order {MASK_CAP}")
        for k in range(1, max_order + 1):
            seen: dict[CanonicalForm, int] = {}
            for mask in range(total_masks(k)):
                if not mask_is_connected(k, mask):
                    continue
                g = mask_to_graph(k, mask)
                if not c.contains(g):
                    continue
                form = canonical_form(g)
                seen[form] = seen.get(form, 0) + 1
            for form, labelled in sorted(seen.items()):
                a = aut(form.to_graph())
                if factorial(k) // a != labelled:
                    raise AssertionError(
                        f"census inconsistency for {c.name} order {k}: {labelled} != {k}!/{a}"
                    )
                entries.append(UnlabelledEntry(form, k, a))
    entries.sort(key=lambda e: (e.order, e.form))
    if method == "trees" and c.name == "trees":
        for k in range(1, max_order + 1):
            got = sum(factorial(k) // e.aut for e in entries if e.order == k)
            if got != tree_count(k):
                raise AssertionError(f"tree census at order {k}: {got} != {tree_count(k)}")
    return UnlabelledList(c.name, max_order, tuple(entries))


# -- closed-form counts ------------------------------------------------------


def tree_count(n: int) -> int:
    """Labelled trees on n vertices (Cayley)."""
    if n < 1:
        raise ValueError("n >= 1")
    return 1 if n <= 2 else n ** (n - 2)


_FOREST_CAP = 2000
_forest_table: list[int] = [1]  # F_0


def forest_count_exact(n: int) -> int:
    """Labelled forests on n vertices via the vertex-1-component recursion."""
    if n > _FOREST_CAP:
        raise ValueError(f"forest recursion capped at n={_FOREST_CAP}")
    while len(_forest_table) <= n:
        m = len(_forest_table)
        total = 0
        for k in range(1, m + 1):
            total += comb(m - 1, k - 1) * tree_count(k) * _forest_table[m - k]
        _forest_table.append(total)
    return _forest_table[n]


def forest_connected_ratio(n: int) -> float:
    """Exact P(uniform forest on [n] is connected) = n^(n-2) / F_n as a float."""
    num = tree_count(n)
    den = forest_count_exact(n)
    # ratio is ~e^{-1/2}; divide in log space to dodge overflow
    return math.exp(math.log(num) - math.log(den)) if n > 140 else num / den


def growth_point(count: int, n: int) -> float:
    """(count / n!)^(1/n)."""
    if count == 0:
        return 0.0
    return math.exp((math.log(count) - math.lgamma(n + 1)) / n)


def growth_sequence(c: GraphClass, n_max: int, store: Store | None = None, workers: int = 1) -> list[float]:
    out = []
    for n in range(1, n_max + 1):
        rec = count_labelled(c, n, store=store, workers=workers)
        out.append(growth_point(rec.labelled_count, n))
    return out


# -- partial EGF sums --------------------------------------------------------


def mu(entry: UnlabelledEntry, rho: float) -> float:
    """Boltzmann weight rho^v(H) / aut H."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    return rho ** entry.order / entry.aut


def sigma_k(census: UnlabelledList, rho: float, k: int) -> float:
    """Partial sum of mu over the first k census entries."""
    if k > len(census.entries):
        raise ValueError("k exceeds census length")
    return sum(mu(e, rho) for e in census.entries[:k])


def _log_term(log_count: float, rho: float, k: int) -> float:
    return log_count + k * math.log(rho) - math.lgamma(k + 1)


def sigma_from_labelled_counts(counts: dict[int, int], rho: float) -> float:
    """sum_k (labelled connected count at k) rho^k / k!.

    This equals sum mu(H) over the same orders: the unlabelled graphs of
    order k contribute k!/aut(H) labelled copies each.
    """
    total = 0.0
    for k, ck in sorted(counts.items()):
        if ck:
            total += math.exp(_log_term(math.log(ck), rho, k))
    return total


def tree_sigma_partial(rho: float, max_order: int) -> float:
    """sum_{k<=K} k^(k-2) rho^k / k! (log-space; exact route for trees)."""
    total = 0.0
    for k in range(1, max_order + 1):
        lc = 0.0 if k <= 2 else (k - 2) * math.log(k)
        total += math.exp(_log_term(lc, rho, k))
    return total


def tree_sigma_tail_bound(rho: float, max_order: int) -> float:
    """Upper bound for the neglected tail of tree_sigma_partial.

    Stirling gives k^(k-2) e^(-k) / k! <= k^(-5/2) / sqrt(2 pi); for
    rho <= 1/e the tail is at most the integral bound below.
    """
    if rho > 1.0 / math.e + 1e-12:
        raise ValueError("certified tail bound requires rho <= 1/e")
    scale = (rho * math.e) ** (max_order + 1)
    return scale * (2.0 / 3.0) * max_order ** (-1.5) / math.sqrt(2 * math.pi)


def tree_rho_cprime_partial(rho: float, max_order: int) -> float:
    """Partial sum of rho C'(rho) for trees: sum k^(k-1) rho^k / k!."""
    total = 0.0
    for k in range(1, max_order + 1):
        total += math.exp(_log_term((k - 1) * math.log(k), rho, k))
    return total
