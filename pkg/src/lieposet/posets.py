"""Finite naturally-labeled posets and their derived combinatorics.

Elements are the integers 1..n and every strict relation (i, j) satisfies
i < j, so the identity labeling is a linear extension.  The strict relation
is stored transitively closed as a boolean n x n table (one int bitmask per
row); covers, heights, components and extremal data are derived lazily and
cached on the instance.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional

from .errors import (
    HeightBound,
    LabelOrderViolation,
    NotInterior,
    OutOfRange,
    SizeBound,
)

#: Canonical forms and enumeration are exact but exponential; this is the
#: largest n they accept.
ENUMERATION_BOUND = 9


def _close(succ: list[int]) -> tuple[int, ...]:
    """Transitively close bitmask rows in place (bit j-1 of succ[i-1] means i < j)."""
    n = len(succ)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = succ[i]
            m = acc
            while m:
                k = (m & -m).bit_length() - 1
                m &= m - 1
                acc |= succ[k]
            if acc != succ[i]:
                succ[i] = acc
                changed = True
    return tuple(succ)


def _bits(mask: int) -> Iterator[int]:
    """Yield 1-based element labels set in a mask."""
    while mask:
        low = mask & -mask
        yield low.bit_length()
        mask &= mask - 1


@dataclass(frozen=True)
class Poset:
    """A finite poset on {1..n} with a transitively closed strict relation.

    Instances are immutable and hashable; all derived combinatorics is
    cached.  Construct through :func:`make_poset` (which closes generator
    relations and validates labels) rather than directly.
    """

    n: int
    succ: tuple[int, ...]  # succ[i-1] bit (j-1) set  <=>  i strictly below j

    def __post_init__(self):
        assert len(self.succ) == self.n

    # -- raw views ---------------------------------------------------------

    @cached_property
    def pred(self) -> tuple[int, ...]:
        pred = [0] * self.n
        for i in range(self.n):
            for j in _bits(self.succ[i]):
                pred[j - 1] |= 1 << i
        return tuple(pred)

    @cached_property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """All strict relations (i, j), sorted."""
        return tuple(
            (i, j) for i in range(1, self.n + 1) for j in _bits(self.succ[i - 1])
        )

    @cached_property
    def pair_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.pairs)

    def leq(self, i: int, j: int) -> bool:
        return i == j or bool(self.succ[i - 1] >> (j - 1) & 1)

    def related(self, i: int, j: int) -> bool:
        """Comparable in either direction (and not equal)."""
        return bool(self.succ[i - 1] >> (j - 1) & 1 or self.succ[j - 1] >> (i - 1) & 1)

    # -- derived combinatorics ----------------------------------------------

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        out = []
        for i, j in self.pairs:
            between = self.succ[i - 1] & self.pred[j - 1]
            if not between:
                out.append((i, j))
        return tuple(out)

    @cached_property
    def minimal(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if not self.pred[i - 1])

    @cached_property
    def maximal(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if not self.succ[i - 1])

    @cached_property
    def ext(self) -> tuple[int, ...]:
        return tuple(
            i
            for i in range(1, self.n + 1)
            if not self.pred[i - 1] or not self.succ[i - 1]
        )

    @cached_property
    def interior(self) -> tuple[int, ...]:
        return tuple(
            i
            for i in range(1, self.n + 1)
            if self.pred[i - 1] and self.succ[i - 1]
        )

    @cached_property
    def heights(self) -> tuple[int, ...]:
        """heights[i-1] = rank of i in a longest chain ending at i."""
        h = [0] * self.n
        for j in range(1, self.n + 1):  # labels are a linear extension
            if self.pred[j - 1]:
                h[j - 1] = 1 + max(h[i - 1] for i in _bits(self.pred[j - 1]))
        return tuple(h)

    @property
    def height(self) -> int:
        return max(self.heights) if self.n else 0

    @cached_property
    def component_ids(self) -> tuple[int, ...]:
        """Connected component index (0-based) of each element, under cover edges."""
        parent = list(range(self.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i, j in self.pairs:
            ra, rb = find(i - 1), find(j - 1)
            if ra != rb:
                parent[rb] = ra
        roots = {}
        ids = []
        for v in range(self.n):
            r = find(v)
            ids.append(roots.setdefault(r, len(roots)))
        return tuple(ids)

    @property
    def components(self) -> int:
        return len(set(self.component_ids)) if self.n else 0

    @property
    def is_connected(self) -> bool:
        return self.components == 1

    def __repr__(self):
        return f"Poset(n={self.n}, rel={list(self.pairs)})"


@dataclass(frozen=True)
class HasseData:
    covers: tuple[tuple[int, int], ...]
    components: int
    heights: dict[int, int]


@dataclass(frozen=True)
class ExtremalData:
    ext: tuple[int, ...]
    rel_e: tuple[tuple[int, int], ...]
    interior: tuple[int, ...]


# ---------------------------------------------------------------------------
# construction


def make_poset(n: int, generators) -> Poset:
    """Build the poset on {1..n} whose strict relation is the transitive
    closure of `generators`.

    Raises LabelOrderViolation for a generator (i, j) with i >= j, and
    OutOfRange for elements outside {1..n}.
    """
    if n < 1:
        raise OutOfRange(f"poset must have at least one element, got n={n}")
    succ = [0] * n
    for i, j in generators:
        if not (1 <= i <= n and 1 <= j <= n):
            raise OutOfRange(f"relation ({i}, {j}) outside 1..{n}")
        if i >= j:
            raise LabelOrderViolation(
                f"relation ({i}, {j}) violates natural labeling (need i < j)"
            )
        succ[i - 1] |= 1 << (j - 1)
    return Poset(n, _close(succ))


def complete_poset(ranks) -> Poset:
    """The pure poset with ranks[i] elements at rank i and every cross-rank
    relation, labeled rank by rank."""
    ranks = list(ranks)
    if not ranks or any(r < 1 for r in ranks):
        raise ValueError("ranks must be a nonempty list of positive integers")
    n = sum(ranks)
    gens = []
    start = 1
    starts = []
    for r in ranks:
        starts.append(start)
        start += r
    for lo in range(len(ranks)):
        for hi in range(lo + 1, len(ranks)):
            for a in range(starts[lo], starts[lo] + ranks[lo]):
                for b in range(starts[hi], starts[hi] + ranks[hi]):
                    gens.append((a, b))
    return make_poset(n, gens)


def disjoint_sum(P: Poset, Q: Poset) -> Poset:
    """Disjoint sum; Q's elements are shifted up by |P|."""
    gens = list(P.pairs) + [(i + P.n, j + P.n) for i, j in Q.pairs]
    return make_poset(P.n + Q.n, gens)


def relabel(P: Poset, perm: dict[int, int]) -> Poset:
    """Relabel through a bijection {1..n} -> {1..n}; the image must again be
    naturally labeled."""
    return make_poset(P.n, [(perm[i], perm[j]) for i, j in P.pairs])


def induced_subposet(P: Poset, elements) -> tuple[Poset, dict[int, int]]:
    """Induced subposet on `elements`, relabeled naturally by ascending label.

    Returns (subposet, mapping original -> new label).
    """
    elems = sorted(set(elements))
    if not elems:
        raise OutOfRange("induced subposet needs at least one element")
    if elems[0] < 1 or elems[-1] > P.n:
        raise OutOfRange(f"elements {elems} not all inside 1..{P.n}")
    to_new = {v: k + 1 for k, v in enumerate(elems)}
    gens = [
        (to_new[i], to_new[j]) for (i, j) in P.pairs if i in to_new and j in to_new
    ]
    return make_poset(len(elems), gens), to_new


def split_components(P: Poset) -> list[tuple[Poset, dict[int, int]]]:
    """Connected components as standalone posets, ordered by smallest element.

    Each entry is (component, mapping original -> component label).
    """
    groups: dict[int, list[int]] = {}
    for v in range(1, P.n + 1):
        groups.setdefault(P.component_ids[v - 1], []).append(v)
    comps = sorted(groups.values(), key=lambda g: g[0])
    return [induced_subposet(P, g) for g in comps]


# ---------------------------------------------------------------------------
# extremal and neighborhood data


def extremal_data(P: Poset) -> ExtremalData:
    """Minimal-or-maximal elements, the strict relations among them, and the interior."""
    ext = set(P.ext)
    rel_e = tuple((i, j) for (i, j) in P.pairs if i in ext and j in ext)
    return ExtremalData(P.ext, rel_e, P.interior)


def up_down(P: Poset, j: int) -> tuple[int, int, int]:
    """(D, U, UD) for element j: counts of strict predecessors and successors,
    and |U - D| with the convention that equal counts give 2."""
    if not 1 <= j <= P.n:
        raise OutOfRange(f"element {j} outside 1..{P.n}")
    d = bin(P.pred[j - 1]).count("1")
    u = bin(P.succ[j - 1]).count("1")
    return d, u, (abs(u - d) if u != d else 2)


def interior_shape(P: Poset, i: int) -> tuple[int, int, int]:
    """Shape (D, 1, U) of the neighborhood of an interior element of a
    height-at-most-two poset."""
    d, u, _ = up_down(P, i)
    return d, 1, u


def interior_neighborhood(P: Poset, i: int) -> Poset:
    """Induced subposet on everything comparable to the interior element i,
    relabeled naturally.

    For height <= 2 this is always the complete poset of shape
    (D(P, i), 1, U(P, i)).
    """
    if P.height > 2:
        raise HeightBound("interior neighborhoods are classified only for height <= 2")
    if not 1 <= i <= P.n:
        raise OutOfRange(f"element {i} outside 1..{P.n}")
    if i in P.ext:
        raise NotInterior(f"element {i} is extremal")
    elems = [i] + list(_bits(P.pred[i - 1])) + list(_bits(P.succ[i - 1]))
    sub, _ = induced_subposet(P, elems)
    return sub


# ---------------------------------------------------------------------------
# Hasse diagram queries


def hasse(P: Poset) -> HasseData:
    return HasseData(
        covers=P.covers,
        components=P.components,
        heights={v: P.heights[v - 1] for v in range(1, P.n + 1)},
    )


def height(P: Poset) -> int:
    return P.height


def is_connected(P: Poset) -> bool:
    return P.is_connected


def _find_cycle(vertices, edges) -> Optional[list[int]]:
    """First undirected simple cycle found by DFS (ascending order), or None."""
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    for v in adj:
        adj[v].sort()
    visited = set()
    for start in sorted(adj):
        if start in visited:
            continue
        stack = [(start, 0, iter(adj[start]))]
        on_path = [start]
        index = {start: 0}
        visited.add(start)
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w in index:
                    return on_path[index[w]:]
                if w in visited:
                    continue
                visited.add(w)
                index[w] = len(on_path)
                on_path.append(w)
                stack.append((w, v, iter(adj[w])))
                advanced = True
                break
            if not advanced:
                stack.pop()
                on_path.pop()
                del index[v]
    return None


def is_forest(P: Poset, restrict_to_ext: bool = False) -> tuple[bool, Optional[list[int]]]:
    """Whether the (optionally Ext-restricted) Hasse diagram is acyclic as an
    undirected graph.  Returns (flag, witness cycle or None); the witness is a
    vertex list in original labels, cyclically closed."""
    if restrict_to_ext:
        ext = set(P.ext)
        rel = [(i, j) for (i, j) in P.pairs if i in ext and j in ext]
        # covers within the induced subposet on Ext
        relset = set(rel)
        edges = [
            (i, j)
            for (i, j) in rel
            if not any((i, k) in relset and (k, j) in relset for k in ext)
        ]
        vertices = sorted(ext)
    else:
        edges = list(P.covers)
        vertices = list(range(1, P.n + 1))
    cycle = _find_cycle(vertices, edges)
    return cycle is None, cycle


# ---------------------------------------------------------------------------
# canonical forms and isomorphism


def _refine_classes(n, pairs, extra_color=None):
    """Partition {1..n} into isomorphism-invariant classes, returned as lists
    ordered by (height, ...) so that block labeling stays natural.

    `extra_color` optionally maps an element to extra invariant data that a
    relabeling must preserve (used when canonicalizing decorated posets).
    """
    preds: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
    succs: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
    for i, j in pairs:
        succs[i].add(j)
        preds[j].add(i)
    h = {v: 0 for v in range(1, n + 1)}
    for v in range(1, n + 1):
        if preds[v]:
            h[v] = 1 + max(h[u] for u in preds[v])

    raw = {
        v: (h[v], len(preds[v]), len(succs[v]), () if extra_color is None else extra_color(v))
        for v in range(1, n + 1)
    }
    order = sorted(set(raw.values()))
    color = {v: order.index(raw[v]) for v in raw}
    while True:
        raw2 = {
            v: (
                color[v],
                tuple(sorted(color[u] for u in preds[v])),
                tuple(sorted(color[u] for u in succs[v])),
            )
            for v in color
        }
        order2 = sorted(set(raw2.values()))
        if len(order2) == len(set(color.values())):
            break
        color = {v: order2.index(raw2[v]) for v in raw2}
    classes: dict[int, list[int]] = {}
    for v in sorted(color):
        classes.setdefault(color[v], []).append(v)
    return [classes[c] for c in sorted(classes)]


def _canonical_encoding(n, pairs, extra_color=None, decorate=None):
    """Minimum relabeled encoding over all class-respecting bijections.

    `decorate(relabel)` may return extra invariant data to fold into the
    encoding (and the minimization), given the candidate relabeling map.
    """
    classes = _refine_classes(n, pairs, extra_color)
    if not pairs and decorate is None:
        return ()
    best = None
    for perm_choice in itertools.product(*(itertools.permutations(c) for c in classes)):
        new = {}
        label = 1
        for members in perm_choice:
            for v in members:
                new[v] = label
                label += 1
        enc = tuple(sorted((new[a], new[b]) for a, b in pairs))
        if decorate is not None:
            enc = (enc, decorate(new))
        if best is None or enc < best:
            best = enc
    return best


def canonical_form(P: Poset):
    """A complete isomorphism invariant: the minimum relation-set encoding of
    P over all order-preserving relabelings.  Two posets are isomorphic iff
    their canonical forms are equal."""
    if P.n > ENUMERATION_BOUND:
        raise SizeBound(f"canonical form limited to n <= {ENUMERATION_BOUND}")
    return _canonical_encoding(P.n, P.pairs)


def canonical_poset(P: Poset) -> Poset:
    """The canonically labeled representative of P's isomorphism class."""
    return make_poset(P.n, canonical_form(P))


def are_isomorphic(P: Poset, Q: Poset) -> bool:
    if P.n != Q.n:
        return False
    return canonical_form(P) == canonical_form(Q)


# ---------------------------------------------------------------------------
# enumeration


def _labeled_posets(n: int, max_height: Optional[int]) -> Iterator[tuple[int, ...]]:
    """All naturally labeled posets on {1..n} as pred-mask tuples, generated
    by choosing, for each element in turn, a transitively closed set of
    predecessors among the earlier elements."""
    preds = [0] * (n + 1)
    hts = [0] * (n + 1)

    def rec(k: int) -> Iterator[tuple[int, ...]]:
        if k > n:
            yield tuple(preds[1:])
            return
        for s in range(1 << (k - 1)):
            m = s
            ok = True
            h = 0
            while m:
                low = m & -m
                i = low.bit_length()
                m &= m - 1
                if preds[i] & ~s:
                    ok = False
                    break
                if hts[i] + 1 > h:
                    h = hts[i] + 1
            if not ok or (max_height is not None and h > max_height):
                continue
            preds[k] = s
            hts[k] = h
            yield from rec(k + 1)
        preds[k] = 0
        hts[k] = 0

    return rec(1)


def enumerate_posets(
    n: int, max_height: Optional[int] = None, connected_only: bool = False
) -> Iterator[Poset]:
    """One canonically labeled representative per isomorphism class of posets
    on n elements with height <= max_height, in deterministic order."""
    if n > ENUMERATION_BOUND:
        raise SizeBound(f"enumeration limited to n <= {ENUMERATION_BOUND}")
    if n < 1:
        return
    seen = set()
    for pred_masks in _labeled_posets(n, max_height):
        succ = [0] * n
        for j in range(1, n + 1):
            for i in _bits(pred_masks[j - 1]):
                succ[i - 1] |= 1 << (j - 1)
        P = Poset(n, tuple(succ))
        key = _canonical_encoding(n, P.pairs)
        if key in seen:
            continue
        seen.add(key)
        Q = make_poset(n, key)
        if connected_only and not Q.is_connected:
            continue
        yield Q


# ---------------------------------------------------------------------------
# interchange formats


def poset_to_json(P: Poset) -> dict:
    return {"n": P.n, "relations": [list(p) for p in P.pairs]}


def poset_from_json(data: dict) -> Poset:
    try:
        n = int(data["n"])
        rels = [(int(i), int(j)) for i, j in data["relations"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise OutOfRange(f"malformed poset JSON: {exc}") from exc
    return make_poset(n, rels)


def poset_to_dot(P: Poset) -> str:
    """Hasse diagram in DOT format with rank-based layout hints."""
    lines = ["digraph poset {", "  rankdir=BT;", "  node [shape=circle];"]
    by_height: dict[int, list[int]] = {}
    for v in range(1, P.n + 1):
        by_height.setdefault(P.heights[v - 1], []).append(v)
    for h in sorted(by_height):
        row = " ".join(f'"{v}";' for v in by_height[h])
        lines.append(f"  {{ rank=same; {row} }}")
    for i, j in P.covers:
        lines.append(f'  "{i}" -> "{j}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_poset_file(path: str) -> Poset:
    with open(path, "r", encoding="utf-8") as fh:
        return poset_from_json(json.load(fh))
