"""Shared fixtures and independent brute-force oracles for the test suite.

The oracles here deliberately avoid the library's own elimination and
canonicalization code paths, so that every exact claim is checked twice.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations

import pytest

from lieposet.posets import Poset, make_poset


# ---------------------------------------------------------------------------
# poset oracles


def brute_force_isomorphic(P: Poset, Q: Poset) -> bool:
    """Isomorphism by trying every bijection."""
    if P.n != Q.n or len(P.pairs) != len(Q.pairs):
        return False
    qpairs = set(Q.pairs)
    for perm in permutations(range(1, Q.n + 1)):
        send = dict(zip(range(1, P.n + 1), perm))
        if all((send[a], send[b]) in qpairs for a, b in P.pairs):
            return True
    return False


def brute_force_labeled_posets(n: int):
    """Every transitively closed strict relation on {1..n} with natural
    labels, by filtering all subsets of the i < j pairs."""
    slots = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    out = []
    for mask in range(1 << len(slots)):
        rel = {slots[k] for k in range(len(slots)) if mask >> k & 1}
        if all((a, d) in rel for a, b in rel for c, d in rel if b == c):
            out.append(rel)
    return out


def brute_force_class_count(n: int, max_height=None) -> int:
    reps: list[Poset] = []
    for rel in brute_force_labeled_posets(n):
        P = make_poset(n, rel)
        if max_height is not None and P.height > max_height:
            continue
        if not any(brute_force_isomorphic(P, Q) for Q in reps):
            reps.append(P)
    return len(reps)


# ---------------------------------------------------------------------------
# exact linear-algebra oracles


def det_by_cofactors(rows) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j in range(n):
        if not rows[0][j]:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * Fraction(rows[0][j]) * det_by_cofactors(minor)
    return total


def pfaffian_by_pairings(rows) -> Fraction:
    """Sum over perfect matchings with crossing signs."""
    n = len(rows)
    if n % 2:
        raise ValueError("even size required")

    def rec(items):
        if not items:
            return Fraction(1)
        first, rest = items[0], items[1:]
        total = Fraction(0)
        sign = 1
        for k in range(len(rest)):
            entry = Fraction(rows[first][rest[k]])
            if entry:
                total += sign * entry * rec(rest[:k] + rest[k + 1:])
            sign = -sign
        return total

    return rec(tuple(range(n)))


def random_rational_matrix(rng: random.Random, rows: int, cols: int, span: int = 6):
    return [
        [Fraction(rng.randint(-span, span), rng.randint(1, 4)) for _ in range(cols)]
        for _ in range(rows)
    ]


def random_skew_matrix(rng: random.Random, n: int, span: int = 6):
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(rng.randint(-span, span))
            rows[i][j] = v
            rows[j][i] = -v
    return rows


# ---------------------------------------------------------------------------
# shared poset zoo


@pytest.fixture(scope="session")
def fork_poset():
    """Four elements, 1 < 2 < {3, 4}."""
    return make_poset(4, [(1, 2), (2, 3), (2, 4)])


@pytest.fixture(scope="session")
def six_element_cycle_poset():
    """1 < {3, 4} < 5, 2 < 4 < 6: its extremal Hasse diagram is a 4-cycle."""
    return make_poset(6, [(1, 3), (1, 4), (2, 4), (3, 5), (4, 5), (4, 6)])


@pytest.fixture(scope="session")
def crown_poset():
    """Height-one 4-crown: {1, 2} < {3, 4}."""
    return make_poset(4, [(1, 3), (1, 4), (2, 3), (2, 4)])


@pytest.fixture(scope="session")
def two_tree_forest():
    """Two disjoint 6-element Frobenius trees (12 elements total)."""
    from lieposet.posets import disjoint_sum

    a = make_poset(6, [(1, 2), (2, 4), (2, 5), (1, 3), (3, 5), (3, 6)])
    b = make_poset(6, [(1, 3), (3, 5), (3, 6), (1, 4), (4, 6), (2, 4)])
    return disjoint_sum(a, b)


@pytest.fixture(scope="session")
def index_one_noncontact_algebra():
    """Seven-dimensional algebra with index one that carries no contact form."""
    from lieposet.liealg import build_raw

    return build_raw(
        7,
        [
            (1, 4, {"4": 2}),
            (2, 4, {"4": 1}),
            (1, 5, {"5": 1}),
            (2, 5, {"5": 2}),
            (3, 5, {"5": 1}),
            (1, 6, {"6": 1}),
            (3, 6, {"6": 1}),
            (2, 7, {"7": 1}),
            (3, 7, {"7": 2}),
        ],
    )


def cycles_equal(a, b) -> bool:
    """Equality of vertex cycles up to rotation and reflection."""
    if len(a) != len(b) or set(a) != set(b):
        return False
    n = len(a)
    doubled = list(b) + list(b)
    fwd = any(doubled[k:k + n] == list(a) for k in range(n))
    rev = any(doubled[k:k + n] == list(reversed(a)) for k in range(n))
    return fwd or rev
