"""Fragment decomposition, crossing non-edges and component counts.

Class arguments are anything callable on a Graph or carrying a
``contains`` method (the GraphClass type from :mod:`pendant_lab.classes`
qualifies); this module never inspects more than membership.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .canon import CanonicalForm, canonical_form, component_form, is_isomorphic
from .graphs import Graph, components, induced


def as_predicate(f) -> Callable[[Graph], bool]:
    if hasattr(f, "contains"):
        return f.contains
    if callable(f):
        return f
    raise TypeError(f"not a graph-class predicate: {f!r}")


@dataclass(frozen=True)
class FragDecomposition:
    """Largest component (ties: smallest vertex label) vs the unlabelled rest."""

    big: Graph
    big_vertices: tuple[int, ...]
    frag: tuple[CanonicalForm, ...]
    frag_order: int


def _split_components(g: Graph) -> tuple[tuple[int, ...], list[tuple[int, ...]]]:
    comps = components(g)
    best = max(comps, key=lambda c: (len(c), -c[0]))
    rest = [c for c in comps if c is not best]
    return best, rest


def frag_decompose(g: Graph) -> FragDecomposition:
    big_comp, rest = _split_components(g)
    forms = tuple(sorted(component_form(g, c) for c in rest))
    return FragDecomposition(
        big=induced(g, big_comp),
        big_vertices=big_comp,
        frag=forms,
        frag_order=sum(len(c) for c in rest),
    )


def frag_order(g: Graph) -> int:
    """frag(G): number of vertices outside the retained largest component."""
    big_comp, rest = _split_components(g)
    return g.n - len(big_comp)


def frag_restricted(g: Graph, f) -> tuple[tuple[CanonicalForm, ...], int]:
    """Frag(G, F): keep only fragment components lying in F."""
    member = as_predicate(f)
    _, rest = _split_components(g)
    kept = [c for c in rest if member(induced(g, c))]
    forms = tuple(sorted(component_form(g, c) for c in kept))
    return forms, sum(len(c) for c in kept)


def cross(g: Graph, f) -> int:
    """|Cross(G, F)|: non-edges across two components, one of them in F."""
    member = as_predicate(f)
    comps = components(g)
    if len(comps) == 1:
        return 0
    in_f = [member(induced(g, c)) for c in comps]
    total = 0
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            if in_f[i] or in_f[j]:
                total += len(comps[i]) * len(comps[j])
    return total


def kappa(g: Graph) -> int:
    return len(components(g))


def kappa_of(g: Graph, h: Graph) -> int:
    """Components of g isomorphic to the connected graph h."""
    from .graphs import is_connected

    if not is_connected(h):
        raise ValueError("kappa_of requires a connected reference graph")
    count = 0
    for c in components(g):
        if len(c) == h.n and is_isomorphic(induced(g, c), h):
            count += 1
    return count


def kappa_in(g: Graph, f) -> int:
    member = as_predicate(f)
    return sum(1 for c in components(g) if member(induced(g, c)))


def kappa_plus(g: Graph, f) -> int:
    """kappa(G, F), plus one when some component falls outside F."""
    member = as_predicate(f)
    inside = 0
    outside = False
    for c in components(g):
        if member(induced(g, c)):
            inside += 1
        else:
            outside = True
    return inside + (1 if outside else 0)
