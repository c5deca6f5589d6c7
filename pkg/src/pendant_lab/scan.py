"""Full-space census scans with per-component memoisation.

One pass over every edge mask of a given order collects the exact
quantities the verification harness needs: member and connected counts,
fragment sizes, kappa-plus histograms against a restriction class, and
(optionally) the exact distribution of fragment shape multisets.
Expensive isomorphism-invariant predicates (planarity, minor freeness)
are evaluated once per distinct normalised component mask, which is
what makes the 2^21-mask order-7 scans affordable.

Chunks of the mask range can be farmed out to forked workers; the merge
is a plain sum, so results are independent of the worker count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .canon import canonical_form
from .classes import GraphClass
from .enumeration import MASK_CAP, edge_slots, mask_to_graph, total_masks
from .graphs import unchecked_graph


@dataclass
class ScanResult:
    class_name: str
    restrict_name: str
    n: int
    count: int = 0
    connected: int = 0
    frag_sum: int = 0
    frag_restricted_sum: int = 0
    frag_empty: int = 0          # members whose restricted fragment is empty
    kappa_plus_hist: dict[int, int] = field(default_factory=dict)
    frag_shape_hist: dict[tuple[str, ...], int] | None = None

    def merge(self, other: "ScanResult") -> None:
        self.count += other.count
        self.connected += other.connected
        self.frag_sum += other.frag_sum
        self.frag_restricted_sum += other.frag_restricted_sum
        self.frag_empty += other.frag_empty
        for k, v in other.kappa_plus_hist.items():
            self.kappa_plus_hist[k] = self.kappa_plus_hist.get(k, 0) + v
        if other.frag_shape_hist is not None:
            if self.frag_shape_hist is None:
                self.frag_shape_hist = {}
            for k, v in other.frag_shape_hist.items():
                self.frag_shape_hist[k] = self.frag_shape_hist.get(k, 0) + v

    def mean_frag(self) -> float:
        return self.frag_sum / self.count

    def mean_frag_restricted(self) -> float:
        return self.frag_restricted_sum / self.count

    def kappa_plus_tail(self, k: int) -> float:
        tot = sum(v for kk, v in self.kappa_plus_hist.items() if kk >= k)
        return tot / self.count


class _Memo:
    """Per-process caches keyed by (order, normalised component mask)."""

    def __init__(self, c: GraphClass, restrict: GraphClass):
        self.c = c
        self.restrict = restrict
        self.member: dict[tuple[int, int], bool] = {}
        self.inner: dict[tuple[int, int], bool] = {}
        self.shape: dict[tuple[int, int], str] = {}

    def is_member_component(self, key: tuple[int, int]) -> bool:
        hit = self.member.get(key)
        if hit is None:
            hit = self.c.contains(mask_to_graph(key[0], key[1]))
            self.member[key] = hit
        return hit

    def in_restrict(self, key: tuple[int, int]) -> bool:
        hit = self.inner.get(key)
        if hit is None:
            hit = self.restrict.contains(mask_to_graph(key[0], key[1]))
            self.inner[key] = hit
        return hit

    def shape_hex(self, key: tuple[int, int]) -> str:
        hit = self.shape.get(key)
        if hit is None:
            hit = canonical_form(mask_to_graph(key[0], key[1])).hex()
            self.shape[key] = hit
        return hit


def _component_keys(n: int, rows: tuple[int, ...]):
    """(vertices, (order, submask)) per component, via union-find on rows."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        row = rows[i] >> (i + 1) << (i + 1)
        while row:
            j = (row & -row).bit_length() - 1
            row &= row - 1
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    out = []
    slots_cache: dict[int, tuple] = {}
    for root in sorted(groups):
        comp = groups[root]
        k = len(comp)
        slots = slots_cache.get(k)
        if slots is None:
            slots = edge_slots(k)
            slots_cache[k] = slots
        submask = 0
        for t, (a, b) in enumerate(slots):
            if (rows[comp[a]] >> comp[b]) & 1:
                submask |= 1 << t
        out.append((comp, (k, submask)))
    return out


def _scan_chunk(
    c: GraphClass,
    restrict: GraphClass,
    n: int,
    lo: int,
    hi: int,
    want_shapes: bool,
    memo: _Memo,
    members_out: list[int] | None,
) -> ScanResult:
    from .enumeration import mask_to_rows

    res = ScanResult(c.name, restrict.name, n)
    if want_shapes:
        res.frag_shape_hist = {}
    decomposable = bool(c.flags.get("decomposable"))
    for mask in range(lo, hi):
        rows = mask_to_rows(n, mask)
        comps = _component_keys(n, rows)
        if decomposable:
            ok = all(memo.is_member_component(key) for _, key in comps)
        else:
            ok = c.contains(unchecked_graph(n, rows))
        if not ok:
            continue
        res.count += 1
        if members_out is not None:
            members_out.append(mask)
        if len(comps) == 1:
            res.connected += 1
            res.frag_empty += 1
            # kappa+ of a connected graph is 1 whether or not it lies in the restriction
            res.kappa_plus_hist[1] = res.kappa_plus_hist.get(1, 0) + 1
            if want_shapes:
                res.frag_shape_hist[()] = res.frag_shape_hist.get((), 0) + 1
            continue
        # biggest component: max order, ties to the smallest vertex label
        big_idx = max(range(len(comps)), key=lambda i: (len(comps[i][0]), -comps[i][0][0]))
        inside = 0
        outside = False
        frag_r = 0
        shapes: list[str] = []
        for i, (comp, key) in enumerate(comps):
            in_r = memo.in_restrict(key)
            if in_r:
                inside += 1
            else:
                outside = True
            if i != big_idx:
                res.frag_sum += len(comp)
                if in_r:
                    frag_r += len(comp)
                    if want_shapes:
                        shapes.append(memo.shape_hex(key))
        res.frag_restricted_sum += frag_r
        if frag_r == 0:
            res.frag_empty += 1
        kp = inside + (1 if outside else 0)
        res.kappa_plus_hist[kp] = res.kappa_plus_hist.get(kp, 0) + 1
        if want_shapes:
            ms = tuple(sorted(shapes))
            res.frag_shape_hist[ms] = res.frag_shape_hist.get(ms, 0) + 1
    return res


_WORKER: dict = {}


def _worker_init(c, restrict, n, want_shapes):
    _WORKER["memo"] = _Memo(c, restrict)
    _WORKER["args"] = (c, restrict, n, want_shapes)


def _worker_chunk(bounds):
    c, restrict, n, want_shapes = _WORKER["args"]
    lo, hi = bounds
    members: list[int] = []
    res = _scan_chunk(c, restrict, n, lo, hi, want_shapes, _WORKER["memo"], members)
    return res, members


def exact_scan(
    c: GraphClass,
    n: int,
    restrict: GraphClass | None = None,
    want_shapes: bool = False,
    workers: int = 1,
    store=None,
) -> ScanResult:
    """Exact member statistics of c on {1..n}; results cached in the store."""
    if n > MASK_CAP:
        raise ValueError(f"exact scan capped at n={MASK_CAP}")
    if restrict is None:
        from .classes import builtin

        restrict = builtin("all")
    key = f"scan:{c.name}:{n}:restrict={restrict.name}:shapes={int(want_shapes)}"
    if store is not None:
        hit = store.load(key)
        if hit is not None:
            res = ScanResult(c.name, restrict.name, n)
            res.count = hit["count"]
            res.connected = hit["connected"]
            res.frag_sum = hit["frag_sum"]
            res.frag_restricted_sum = hit["frag_restricted_sum"]
            res.frag_empty = hit["frag_empty"]
            res.kappa_plus_hist = {int(k): v for k, v in hit["kappa_plus_hist"].items()}
            if hit.get("frag_shape_hist") is not None:
                res.frag_shape_hist = {
                    tuple(k.split("|")) if k else (): v for k, v in hit["frag_shape_hist"].items()
                }
            return res

    top = total_masks(n)
    members: list[int] = []
    if workers <= 1:
        memo = _Memo(c, restrict)
        res = _scan_chunk(c, restrict, n, 0, top, want_shapes, memo, members)
    else:
        import multiprocessing as mp

        chunk = (top + workers * 4 - 1) // (workers * 4)
        bounds = [(lo, min(lo + chunk, top)) for lo in range(0, top, chunk)]
        ctx = mp.get_context("fork")
        with ctx.Pool(workers, initializer=_worker_init, initargs=(c, restrict, n, want_shapes)) as pool:
            parts = pool.map(_worker_chunk, bounds)
        res = ScanResult(c.name, restrict.name, n)
        if want_shapes:
            res.frag_shape_hist = {}
        for part, ms in parts:
            res.merge(part)
            members.extend(ms)

    if store is not None:
        payload = {
            "count": res.count,
            "connected": res.connected,
            "frag_sum": res.frag_sum,
            "frag_restricted_sum": res.frag_restricted_sum,
            "frag_empty": res.frag_empty,
            "kappa_plus_hist": {str(k): v for k, v in res.kappa_plus_hist.items()},
            "frag_shape_hist": None
            if res.frag_shape_hist is None
            else {"|".join(k): v for k, v in res.frag_shape_hist.items()},
        }
        store.save(key, payload)
        if store.root is not None:
            # the sampler indexes members in this exact enumeration order
            path = store.root / f"members_{c.name.replace('/', '_').replace(':', '_')}_{n}.npz"
            if not path.exists():
                np.savez_compressed(path, masks=np.array(members, dtype=np.int64))
    return res
