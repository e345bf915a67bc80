"""Matrix Lie algebras over the rationals attached to posets, raw
structure-constant algebras, and the Kirillov-form machinery.

The poset algebra basis is the trace-zero one used throughout:
differences E_{1,1} - E_{p,p} for p = 2..n, then matrix units E_{p,q} for
the strict relations (p, q), in lexicographic order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    EvenDimension,
    HeightBound,
    JacobiViolation,
    SizeBound,
    TooSmall,
)
from .linalg import Poly, RationalMatrix, symbolic_rank
from .posets import Poset, extremal_data, interior_shape, is_forest, up_down

SYMBOLIC_INDEX_BOUND = 8
JACOBI_CHECK_BOUND = 30


@dataclass(frozen=True)
class DiagDiff:
    """Basis label for E_{1,1} - E_{p,p}, p > 1."""

    p: int

    def __repr__(self):
        return f"D(1,{self.p})"


@dataclass(frozen=True)
class Elem:
    """Basis label for the matrix unit E_{p,q} with p strictly below q."""

    p: int
    q: int

    def __repr__(self):
        return f"E({self.p},{self.q})"


@dataclass(frozen=True)
class RawBasis:
    """Opaque basis label e_i of a raw structure-constant algebra."""

    i: int

    def __repr__(self):
        return f"e{self.i}"


BasisLabel = Union[DiagDiff, Elem, RawBasis]


class LieAlgebra:
    """A Lie algebra given by an ordered basis and its bracket table.

    brackets maps (i, j) with i < j (0-based basis indices) to the sparse
    coordinate vector of [b_i, b_j]; missing pairs commute.
    """

    __slots__ = ("dim", "basis", "brackets", "origin")

    def __init__(self, basis, brackets, origin: Optional[Poset] = None):
        self.basis = tuple(basis)
        self.dim = len(self.basis)
        self.brackets = {
            k: {t: Fraction(c) for t, c in v.items() if c}
            for k, v in brackets.items()
            if any(v.values())
        }
        self.origin = origin

    def bracket(self, i: int, j: int) -> dict[int, Fraction]:
        """Sparse coordinates of [b_i, b_j] over the basis."""
        if i == j:
            return {}
        if i < j:
            return self.brackets.get((i, j), {})
        return {t: -c for t, c in self.brackets.get((j, i), {}).items()}

    def bracket_coords(self, coords: dict[int, Fraction], j: int) -> dict[int, Fraction]:
        """[sum_k coords[k] b_k, b_j] as sparse coordinates."""
        out: dict[int, Fraction] = {}
        for k, ck in coords.items():
            for t, c in self.bracket(k, j).items():
                v = out.get(t, Fraction(0)) + ck * c
                if v:
                    out[t] = v
                else:
                    out.pop(t, None)
        return out

    def matrix_entries(self, k: int) -> dict[tuple[int, int], Fraction]:
        """Matrix of the k-th basis element as a sparse (row, col) -> value map."""
        label = self.basis[k]
        if isinstance(label, DiagDiff):
            return {(1, 1): Fraction(1), (label.p, label.p): Fraction(-1)}
        if isinstance(label, Elem):
            return {(label.p, label.q): Fraction(1)}
        raise TypeError("raw algebras have no matrix realization")

    @property
    def is_matrix_based(self) -> bool:
        return self.origin is not None

    def __repr__(self):
        kind = "poset" if self.is_matrix_based else "raw"
        return f"LieAlgebra(dim={self.dim}, {kind})"


def _jacobi_witness(alg: LieAlgebra):
    """First basis triple violating the Jacobi identity, or None."""
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            bij = alg.bracket(i, j)
            for k in range(j + 1, alg.dim):
                acc: dict[int, Fraction] = {}
                for term in (
                    alg.bracket_coords(bij, k),
                    alg.bracket_coords(alg.bracket(j, k), i),
                    alg.bracket_coords(alg.bracket(k, i), j),
                ):
                    for t, c in term.items():
                        acc[t] = acc.get(t, Fraction(0)) + c
                if any(acc.values()):
                    return (i + 1, j + 1, k + 1)
    return None


def build_type_a(P: Poset) -> LieAlgebra:
    """The trace-zero matrix algebra spanned by the incidence pattern of P,
    under the commutator bracket."""
    if P.n < 2:
        raise TooSmall("need at least two elements for a trace-zero algebra")
    n = P.n
    basis: list[BasisLabel] = [DiagDiff(p) for p in range(2, n + 1)]
    rel = list(P.pairs)
    basis.extend(Elem(p, q) for p, q in rel)
    idx = {lbl: k for k, lbl in enumerate(basis)}

    def diag_coords(p: int, q: int) -> dict[int, Fraction]:
        # E_{p,p} - E_{q,q} over the DiagDiff part (valid: trace zero)
        out: dict[int, Fraction] = {}
        if q != 1:
            out[idx[DiagDiff(q)]] = Fraction(1)
        if p != 1:
            out[idx[DiagDiff(p)]] = out.get(idx[DiagDiff(p)], Fraction(0)) - 1
        return {k: c for k, c in out.items() if c}

    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    ndiag = n - 1
    # [D_{1,p}, E_{q,r}] = ([q==1] - [p==q] + [p==r]) E_{q,r}
    for a in range(ndiag):
        p = basis[a].p
        for b, (q, r) in enumerate(rel):
            c = (1 if q == 1 else 0) - (1 if p == q else 0) + (1 if p == r else 0)
            if c:
                brackets[(a, ndiag + b)] = {ndiag + b: Fraction(c)}
    # [E_{p,q}, E_{r,s}] = d_{qr} E_{p,s} - d_{sp} E_{r,q}
    for a in range(len(rel)):
        p, q = rel[a]
        for b in range(a + 1, len(rel)):
            r, s = rel[b]
            out: dict[int, Fraction] = {}
            if q == r and s == p:
                out = diag_coords(p, q)
            else:
                if q == r:
                    out[idx[Elem(p, s)]] = Fraction(1)
                if s == p:
                    t = idx[Elem(r, q)]
                    out[t] = out.get(t, Fraction(0)) - 1
            out = {k: c for k, c in out.items() if c}
            if out:
                brackets[(ndiag + a, ndiag + b)] = out
    return LieAlgebra(basis, brackets, origin=P)


def build_raw(dim: int, brackets) -> LieAlgebra:
    """Algebra with opaque basis e_1..e_dim from a list of
    (i, j, coords) entries, 1-based; Jacobi is verified for dim <= 30.

    Entries given for both (i, j) and (j, i) must agree under antisymmetry.
    """
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i, j, coords in brackets:
        if not (1 <= i <= dim and 1 <= j <= dim):
            raise ValueError(f"bracket indices ({i}, {j}) outside 1..{dim}")
        if i == j:
            if any(Fraction(c) for c in coords.values()):
                raise JacobiViolation((i, i, i), f"[e{i}, e{i}] must vanish")
            continue
        vec = {int(t) - 1: Fraction(c) for t, c in coords.items() if Fraction(c)}
        key, flip = ((i - 1, j - 1), False) if i < j else ((j - 1, i - 1), True)
        if flip:
            vec = {t: -c for t, c in vec.items()}
        if key in table and table[key] != vec:
            raise JacobiViolation(
                (i, j, j), f"inconsistent antisymmetric entries for [e{i}, e{j}]"
            )
        table[key] = vec
    alg = LieAlgebra([RawBasis(i) for i in range(1, dim + 1)], table)
    if dim <= JACOBI_CHECK_BOUND:
        witness = _jacobi_witness(alg)
        if witness:
            raise JacobiViolation(witness)
    return alg


# ---------------------------------------------------------------------------
# one-forms


class Functional:
    """A linear one-form, stored either on matrix-entry duals E*_{i,j}
    (poset algebras) or on basis duals (raw algebras).  Missing positions
    read as zero."""

    __slots__ = ("kind", "coeffs")

    def __init__(self, kind: str, coeffs: dict):
        assert kind in ("positions", "basis")
        self.kind = kind
        self.coeffs = {k: Fraction(v) for k, v in coeffs.items() if Fraction(v)}

    @classmethod
    def on_positions(cls, coeffs: dict[tuple[int, int], object]) -> "Functional":
        return cls("positions", coeffs)

    @classmethod
    def on_basis(cls, coeffs: dict[int, object]) -> "Functional":
        """Coefficients on basis duals, keyed by 1-based basis index."""
        return cls("basis", coeffs)

    @classmethod
    def zero(cls) -> "Functional":
        return cls("positions", {})

    def value_on_basis(self, alg: LieAlgebra, k: int) -> Fraction:
        if self.kind == "basis":
            return self.coeffs.get(k + 1, Fraction(0))
        total = Fraction(0)
        for pos, c in alg.matrix_entries(k).items():
            total += c * self.coeffs.get(pos, Fraction(0))
        return total

    def values(self, alg: LieAlgebra) -> list[Fraction]:
        return [self.value_on_basis(alg, k) for k in range(alg.dim)]

    def value_on_coords(self, alg: LieAlgebra, coords: dict[int, Fraction]) -> Fraction:
        vals = self.values(alg)
        return sum((c * vals[k] for k, c in coords.items()), Fraction(0))

    def to_terms(self) -> list:
        """JSON-ready list of [key..., coefficient-string] terms."""
        if self.kind == "positions":
            return [[i, j, str(c)] for (i, j), c in sorted(self.coeffs.items())]
        return [[k, str(c)] for k, c in sorted(self.coeffs.items())]

    def __repr__(self):
        return f"Functional({self.kind}, {self.coeffs})"


def dual_positions(alg: LieAlgebra) -> list:
    """The duals a functional may carry coefficients on: matrix positions
    (diagonal plus relations) for poset algebras, basis indices for raw."""
    if alg.is_matrix_based:
        P = alg.origin
        return [(i, i) for i in range(1, P.n + 1)] + list(P.pairs)
    return list(range(1, alg.dim + 1))


def random_functional(alg: LieAlgebra, rng: random.Random, bound: int) -> Functional:
    """Uniform integer coefficients in [-bound, bound] on every dual."""
    keys = dual_positions(alg)
    coeffs = {k: rng.randint(-bound, bound) for k in keys}
    if alg.is_matrix_based:
        return Functional.on_positions(coeffs)
    return Functional.on_basis(coeffs)


# ---------------------------------------------------------------------------
# Kirillov machinery


def kirillov_matrix(alg: LieAlgebra, phi: Functional) -> RationalMatrix:
    """The skew matrix with (i, j) entry phi([b_i, b_j])."""
    vals = phi.values(alg)
    m = [[Fraction(0)] * alg.dim for _ in range(alg.dim)]
    for (i, j), vec in alg.brackets.items():
        v = sum((c * vals[t] for t, c in vec.items()), Fraction(0))
        if v:
            m[i][j] = v
            m[j][i] = -v
    return RationalMatrix(m)


def extended_matrix(alg: LieAlgebra, phi: Functional) -> RationalMatrix:
    """The Kirillov matrix bordered by the coefficient vector of phi;
    defined only in odd dimension."""
    if alg.dim % 2 == 0:
        raise EvenDimension(f"dimension {alg.dim} is even")
    vals = phi.values(alg)
    B = kirillov_matrix(alg, phi)
    top = [Fraction(0)] + vals
    body = [[-vals[i]] + list(B.data[i]) for i in range(alg.dim)]
    return RationalMatrix([top] + body)


def symbolic_kirillov(alg: LieAlgebra) -> tuple[list[list[Poly]], list]:
    """Kirillov matrix with one polynomial variable per dual coefficient.

    Returns (matrix, ordered dual keys).
    """
    keys = dual_positions(alg)
    key_index = {k: i for i, k in enumerate(keys)}
    nv = len(keys)

    def basis_poly(k: int) -> Poly:
        if alg.is_matrix_based:
            out = Poly.zero(nv)
            for pos, c in alg.matrix_entries(k).items():
                out = out + Poly.variable(key_index[pos], nv) * c
            return out
        return Poly.variable(key_index[k + 1], nv)

    vals = [basis_poly(k) for k in range(alg.dim)]
    zero = Poly.zero(nv)
    m = [[zero] * alg.dim for _ in range(alg.dim)]
    for (i, j), vec in alg.brackets.items():
        entry = Poly.zero(nv)
        for t, c in vec.items():
            entry = entry + vals[t] * c
        m[i][j] = entry
        m[j][i] = -entry
    return m, keys


def symbolic_extended(alg: LieAlgebra) -> tuple[list[list[Poly]], list]:
    if alg.dim % 2 == 0:
        raise EvenDimension(f"dimension {alg.dim} is even")
    m, keys = symbolic_kirillov(alg)
    nv = len(keys)
    key_index = {k: i for i, k in enumerate(keys)}

    def basis_poly(k: int) -> Poly:
        if alg.is_matrix_based:
            out = Poly.zero(nv)
            for pos, c in alg.matrix_entries(k).items():
                out = out + Poly.variable(key_index[pos], nv) * c
            return out
        return Poly.variable(key_index[k + 1], nv)

    vals = [basis_poly(k) for k in range(alg.dim)]
    top = [Poly.zero(nv)] + vals
    body = [[-vals[i]] + m[i] for i in range(alg.dim)]
    return [top] + body, keys


# ---------------------------------------------------------------------------
# index


@dataclass(frozen=True)
class IndexEstimate:
    """Result of the randomized index computation.

    `value` is a provable upper bound on the index; it equals the index
    except with probability at most `failure_bound` (Schwartz-Zippel over
    the sampling range, per trial, compounded over trials).
    """

    value: int
    trials: int
    seed: int
    sample_bound: int
    failure_bound: Fraction

    def __int__(self):
        return self.value


def index(alg: LieAlgebra, trials: int = 3, seed: int = 0, bound: int = 10**6) -> IndexEstimate:
    """dim - (max rank of the Kirillov matrix over random one-forms)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if alg.dim == 0:
        return IndexEstimate(0, trials, seed, bound, Fraction(0))
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        phi = random_functional(alg, rng, bound)
        r = kirillov_matrix(alg, phi).rank()
        best = max(best, r)
    per_trial = min(Fraction(alg.dim, bound), Fraction(1))
    return IndexEstimate(alg.dim - best, trials, seed, bound, per_trial**trials)


def index_certified(alg: LieAlgebra) -> int:
    """Exact index by symbolic rank over the rational function field;
    desk-scale guard dim <= 8."""
    if alg.dim > SYMBOLIC_INDEX_BOUND:
        raise SizeBound(f"symbolic index limited to dim <= {SYMBOLIC_INDEX_BOUND}")
    if alg.dim == 0:
        return 0
    m, _ = symbolic_kirillov(alg)
    return alg.dim - symbolic_rank(m)


def index_formula_h2(P: Poset) -> int:
    """Combinatorial index of the poset algebra, valid for height <= 2:
    |Rel_E| - |P| + 2 C - 1 + sum of UD over interior elements."""
    if P.height > 2:
        raise HeightBound("index formula requires height <= 2")
    ed = extremal_data(P)
    total = len(ed.rel_e) - P.n + 2 * P.components - 1
    for j in ed.interior:
        total += up_down(P, j)[2]
    return total


def is_frobenius_h2(P: Poset) -> bool:
    """Index zero, decided combinatorially: every interior neighborhood has
    three extremal elements and the Ext-restricted Hasse diagram is a tree."""
    if P.height > 2:
        raise HeightBound("Frobenius test requires height <= 2")
    for i in P.interior:
        d, _, u = interior_shape(P, i)
        if d + u != 3:
            return False
    acyclic, _ = is_forest(P, restrict_to_ext=True)
    if not acyclic:
        return False
    # a tree is connected: check the Ext comparability graph
    ext = list(P.ext)
    pos = {v: k for k, v in enumerate(ext)}
    parent = list(range(len(ext)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in P.pairs:
        if i in pos and j in pos:
            ra, rb = find(pos[i]), find(pos[j])
            if ra != rb:
                parent[rb] = ra
    return len({find(k) for k in range(len(ext))}) == 1


def center(alg: LieAlgebra) -> list[tuple[Fraction, ...]]:
    """Basis of the center, as coordinate vectors over the algebra basis,
    by exact nullspace computation of [z, b_i] = 0 for all i."""
    if alg.dim == 0:
        return []
    rows: dict[tuple[int, int], list[Fraction]] = {}
    for (i, j), vec in alg.brackets.items():
        # column k = coefficient of b_t in [b_k, b_j]-type equations:
        # equation rows are indexed by (other basis element, target)
        for t, c in vec.items():
            rows.setdefault((j, t), [Fraction(0)] * alg.dim)[i] += c
            rows.setdefault((i, t), [Fraction(0)] * alg.dim)[j] -= c
    if not rows:
        return [
            tuple(Fraction(1) if k == m else Fraction(0) for k in range(alg.dim))
            for m in range(alg.dim)
        ]
    mat = RationalMatrix([rows[k] for k in sorted(rows)])
    return mat.kernel()
