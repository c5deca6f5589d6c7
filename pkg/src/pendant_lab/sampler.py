"""Exact seeded samplers: uniform R_n from a class, uniform trees and
forests, and the Boltzmann Poisson random graph.

Randomness comes from numpy's PCG64 bit generator.  Substreams are
derived by SplitMix64-mixing a 64-bit seed with a counter, so draw i of
any bulk experiment is reproducible regardless of scheduling; the same
(seed, index) always yields the same value on every platform.
Poisson variates use plain inversion (all means here are far below 10),
and uniform integers below an arbitrary-precision bound use rejection
on raw generator bytes, so no distribution depends on library
internals.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from math import comb

import numpy as np

from .canon import CanonicalForm, RootedGraph, aut, aut_rooted, canonical_form
from .census import (
    UnlabelledEntry,
    UnlabelledList,
    forest_count_exact,
    mu,
    tree_count,
    tree_sigma_partial,
    tree_sigma_tail_bound,
)
from .classes import GraphClass
from .enumeration import MASK_CAP, mask_to_graph, total_masks
from .graphs import Graph, unchecked_from_edges

_MASK64 = (1 << 64) - 1

RNG_ALGORITHM = "PCG64 with SplitMix64 counter mixing"


@dataclass(frozen=True)
class Seed:
    """64-bit seed; same seed means identical sample streams everywhere."""

    value: int

    algorithm = RNG_ALGORITHM

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.value & _MASK64)


def _mix64(a: int, b: int) -> int:
    x = (a ^ ((b * 0x9E3779B97F4A7C15) & _MASK64)) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def _seed_value(seed) -> int:
    return seed.value if isinstance(seed, Seed) else int(seed) & _MASK64


def substream(seed, index: int) -> np.random.Generator:
    """Generator for draw ``index`` of the stream rooted at ``seed``."""
    return np.random.Generator(np.random.PCG64(_mix64(_seed_value(seed), index)))


def rand_below(rng: np.random.Generator, bound: int) -> int:
    """Exactly uniform integer in [0, bound); bound may be a big int."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    bits = bound.bit_length()
    nbytes = (bits + 7) // 8
    shift = nbytes * 8 - bits
    while True:
        x = int.from_bytes(rng.bytes(nbytes), "big") >> shift
        if x < bound:
            return x


def poisson(rng: np.random.Generator, lam: float) -> int:
    """Poisson by inversion; exact and portable for the small means used here."""
    u = rng.random()
    p = math.exp(-lam)
    cdf = p
    x = 0
    while u > cdf:
        x += 1
        p *= lam / x
        cdf += p
        if x > 10_000:  # numerically impossible for lam < 10
            raise RuntimeError("poisson inversion runaway")
    return x


def poisson_array(rng: np.random.Generator, lam: float, size: int) -> np.ndarray:
    """Vectorised inversion with the same law as :func:`poisson`."""
    u = rng.random(size)
    out = np.zeros(size, dtype=np.int64)
    p = math.exp(-lam)
    cdf = np.full(size, p)
    pterm = np.full(size, p)
    x = 0
    active = u > cdf
    while active.any():
        x += 1
        pterm = pterm * (lam / x)
        cdf = cdf + pterm
        out[active] = x
        active = u > cdf
        if x > 10_000:
            raise RuntimeError("poisson inversion runaway")
    return out


# -- uniform samplers -------------------------------------------------------


_member_cache: dict[tuple[str, int], list[int]] = {}


def member_masks(c: GraphClass, n: int, store=None) -> list[int]:
    """Ascending member masks of c on {1..n} (the enumeration order)."""
    key = (c.name, n)
    if key in _member_cache:
        return _member_cache[key]
    masks = None
    if store is not None and store.root is not None:
        path = store.root / f"members_{c.name.replace('/', '_').replace(':', '_')}_{n}.npz"
        if path.exists():
            masks = [int(x) for x in np.load(path)["masks"]]
    if masks is None:
        if n > MASK_CAP:
            raise ValueError(f"enumerative sampling capped at n={MASK_CAP}")
        masks = [m for m in range(total_masks(n)) if c.contains(mask_to_graph(n, m))]
        if store is not None and store.root is not None:
            store.root.mkdir(parents=True, exist_ok=True)
            np.savez_compressed(
                store.root / f"members_{c.name.replace('/', '_').replace(':', '_')}_{n}.npz",
                masks=np.array(masks, dtype=np.int64),
            )
    _member_cache[key] = masks
    return masks


def uniform_enumerative(c: GraphClass, n: int, seed, index: int = 0, store=None) -> Graph:
    """Exactly uniform member of c on {1..n} by indexing the enumeration order."""
    masks = member_masks(c, n, store=store)
    if not masks:
        raise ValueError(f"{c.name} has no graphs on {n} vertices")
    rng = substream(seed, index)
    return mask_to_graph(n, masks[rand_below(rng, len(masks))])


def _prufer_decode(seq: list[int], k: int) -> list[tuple[int, int]]:
    """Edges (0-based) of the tree with Prufer sequence ``seq`` on 0..k-1."""
    deg = [1] * k
    for x in seq:
        deg[x] += 1
    edges = []
    ptr = 0
    while deg[ptr] != 1:
        ptr += 1
    leaf = ptr
    for x in seq:
        edges.append((leaf, x))
        deg[x] -= 1
        if deg[x] == 1 and x < ptr:
            leaf = x
        else:
            ptr += 1
            while deg[ptr] != 1:
                ptr += 1
            leaf = ptr
    edges.append((leaf, k - 1))
    return edges


def _tree_on_labels(rng: np.random.Generator, labels: list[int]) -> list[tuple[int, int]]:
    k = len(labels)
    if k == 1:
        return []
    if k == 2:
        return [(labels[0], labels[1])]
    seq = [int(x) for x in rng.integers(0, k, size=k - 2)]
    return [(labels[a], labels[b]) for a, b in _prufer_decode(seq, k)]


def uniform_tree(n: int, seed, index: int = 0) -> Graph:
    """Uniform over the n^(n-2) labelled trees (Prufer bijection)."""
    if n < 1:
        raise ValueError("n >= 1")
    rng = substream(seed, index)
    return unchecked_from_edges(n, _tree_on_labels(rng, list(range(1, n + 1))))


# component-size tables for the forest sampler; cumulative big-int sums
_forest_cum_small: dict[int, list[int]] = {}
_forest_cum_big: dict[int, list[int]] = {}
_FOREST_CACHE_SMALL = 400
_FOREST_CACHE_BIG_SLOTS = 8


def _forest_cumulative(m: int) -> list[int]:
    """cum[k-1] = sum_{j<=k} C(m-1, j-1) j^(j-2) F_{m-j}; total F_m."""
    if m <= _FOREST_CACHE_SMALL:
        hit = _forest_cum_small.get(m)
        if hit is not None:
            return hit
    else:
        hit = _forest_cum_big.get(m)
        if hit is not None:
            return hit
    cum = []
    run = 0
    for k in range(1, m + 1):
        run += comb(m - 1, k - 1) * tree_count(k) * forest_count_exact(m - k)
        cum.append(run)
    assert cum[-1] == forest_count_exact(m)
    if m <= _FOREST_CACHE_SMALL:
        _forest_cum_small[m] = cum
    else:
        if len(_forest_cum_big) >= _FOREST_CACHE_BIG_SLOTS:
            _forest_cum_big.pop(next(iter(_forest_cum_big)))
        _forest_cum_big[m] = cum
    return cum


def uniform_forest(n: int, seed, index: int = 0) -> Graph:
    """Exactly uniform labelled forest on {1..n}.

    Repeatedly: the component of the smallest remaining label gets its
    order k with probability C(m-1,k-1) k^(k-2) F_{m-k} / F_m, a uniform
    set of companions, and a uniform tree on those labels.
    """
    if n < 1:
        raise ValueError("n >= 1")
    rng = substream(seed, index)
    labels = list(range(1, n + 1))
    edges: list[tuple[int, int]] = []
    while labels:
        m = len(labels)
        if m == 1:
            break
        cum = _forest_cumulative(m)
        x = rand_below(rng, cum[-1])
        k = bisect_right(cum, x) + 1
        anchor, pool = labels[0], labels[1:]
        if k > 1:
            perm = rng.permutation(m - 1)
            chosen = sorted([anchor] + [pool[int(t)] for t in perm[: k - 1]])
            labels = sorted(pool[int(t)] for t in perm[k - 1:])
        else:
            chosen = [anchor]
            labels = pool
        edges.extend(_tree_on_labels(rng, chosen))
    return unchecked_from_edges(n, edges)


# -- Boltzmann Poisson sampling ---------------------------------------------


@dataclass(frozen=True)
class BoltzmannSpec:
    """Truncated BP(C, rho) model: per-order Poisson means plus a shape rule.

    ``mode`` "census" draws shapes from an explicit unlabelled census;
    "trees" draws a uniform labelled tree of the required order, which
    hits each unlabelled tree H with probability mu(H)/lambda_k exactly.
    ``tail_note`` states the certified bound on the neglected mass
    sum_{v(H)>cutoff} mu(H), or declares it uncertified.
    """

    class_name: str
    rho: float
    cutoff: int
    lambdas: tuple[float, ...]
    sigma: float
    tail_note: str
    mode: str
    entries: tuple[UnlabelledEntry, ...] | None = None

    def __post_init__(self) -> None:
        if self.rho <= 0:
            raise ValueError("rho must be positive")
        if abs(sum(self.lambdas) - self.sigma) > 1e-9:
            raise ValueError("sigma must equal the sum of per-order means")
        if self.mode == "census":
            if self.entries is None:
                raise ValueError("census mode needs entries")
            for e in self.entries:
                if mu(e, self.rho) <= 0:
                    raise ValueError("every mu must be positive")


def bp_spec_from_census(census: UnlabelledList, rho: float, cutoff: int | None = None) -> BoltzmannSpec:
    cutoff = census.max_order if cutoff is None else cutoff
    entries = tuple(e for e in census.entries if e.order <= cutoff)
    lambdas = [0.0] * cutoff
    for e in entries:
        lambdas[e.order - 1] += mu(e, rho)
    note = "uncertified: tail mass beyond the cutoff unknown for this class"
    if census.class_name == "trees" and rho <= 1 / math.e + 1e-12:
        note = f"tail <= {tree_sigma_tail_bound(rho, cutoff):.3e} (Stirling term bound)"
    return BoltzmannSpec(
        census.class_name, rho, cutoff, tuple(lambdas), float(sum(lambdas)), note, "census", entries
    )


def bp_spec_trees(rho: float = 1.0 / math.e, cutoff: int = 60) -> BoltzmannSpec:
    """BP(trees, rho) truncated by component order, shapes via Prufer draws."""
    lambdas = []
    for k in range(1, cutoff + 1):
        lc = 0.0 if k <= 2 else (k - 2) * math.log(k)
        lambdas.append(math.exp(lc + k * math.log(rho) - math.lgamma(k + 1)))
    sigma = tree_sigma_partial(rho, cutoff)
    note = f"tail <= {tree_sigma_tail_bound(rho, cutoff):.3e} (Stirling term bound)"
    return BoltzmannSpec("trees", rho, cutoff, tuple(lambdas), sigma, note, "trees")


def bp_sample(spec: BoltzmannSpec, seed, index: int = 0) -> tuple[CanonicalForm, ...]:
    """One draw of the truncated BP law, as a sorted canonical-form multiset."""
    rng = substream(seed, index)
    forms: list[CanonicalForm] = []
    if spec.mode == "census":
        for e in spec.entries:
            count = poisson(rng, mu(e, spec.rho))
            forms.extend([e.form] * count)
    else:
        for k in range(1, spec.cutoff + 1):
            count = poisson(rng, spec.lambdas[k - 1])
            for _ in range(count):
                g = from_edges(k, _tree_on_labels(rng, list(range(1, k + 1))))
                forms.append(canonical_form(g))
    return tuple(sorted(forms))


def bp_order_totals(spec: BoltzmannSpec, seed, count: int, block: int = 100_000) -> np.ndarray:
    """v(R) for ``count`` independent draws, marginalising out shapes.

    Component counts per order are the independent Poissons of the BP
    law; total order ignores which shape each component takes, so the
    per-order counts alone determine it.  Order k uses substream k.
    """
    totals = np.zeros(count, dtype=np.int64)
    for k in range(1, spec.cutoff + 1):
        rng = substream(seed, k)
        done = 0
        while done < count:
            step = min(block, count - done)
            totals[done:done + step] += k * poisson_array(rng, spec.lambdas[k - 1], step)
            done += step
    return totals


def bp_entry_count_sums(spec: BoltzmannSpec, seed, count: int, block: int = 100_000):
    """Per-entry (sum, sum of squares) of component counts over ``count`` draws.

    Census mode only: entry i uses substream i, each count ~ Po(mu).
    """
    if spec.mode != "census":
        raise ValueError("per-entry counts need an explicit census")
    sums = []
    for i, e in enumerate(spec.entries):
        rng = substream(seed, i)
        m = mu(e, spec.rho)
        s = 0
        s2 = 0
        done = 0
        while done < count:
            step = min(block, count - done)
            xs = poisson_array(rng, m, step)
            s += int(xs.sum())
            s2 += int((xs * xs).sum())
            done += step
        sums.append((s, s2))
    return sums


# -- pendant-appearance densities -------------------------------------------


def alpha_rooted(h: RootedGraph, rho: float) -> float:
    """Limiting pend(R_n, H*)/n: rho^v(H) / aut H*."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    return rho ** h.order / aut_rooted(h)


def alpha_unrooted(h: Graph, rho: float) -> float:
    """Limiting pend(R_n, H)/n: v(H) rho^v(H) / aut H."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    return h.n * rho ** h.n / aut(h)


def alpha_vertex(k: RootedGraph, rho: float) -> float:
    """Limiting vpend(R_n, K*)/n: rho^(v(K)-1) / aut K*."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    return rho ** (k.order - 1) / aut_rooted(k)
