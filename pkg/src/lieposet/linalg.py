"""Exact linear algebra over the rationals, plus a small multivariate
polynomial ring for symbolic rank and Pfaffian certificates.

Determinants and ranks go through fraction-free Bareiss elimination on
integerized rows; kernels use rational Gauss-Jordan; Pfaffians use skew
congruence elimination, with a division-free expansion kept as an
independent oracle.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import ShapeMismatch


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class RationalMatrix:
    """An immutable matrix with exact rational entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence]):
        rows = tuple(tuple(_as_fraction(x) for x in row) for row in data)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ShapeMismatch("ragged rows")
        object.__setattr__(self, "data", rows)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", len(rows[0]) if rows else 0)

    def __setattr__(self, *args):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[0] * cols for _ in range(rows)])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        return f"RationalMatrix({[list(map(str, r)) for r in self.data]})"

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(list(zip(*self.data))) if self.rows else self

    def is_skew_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            self.data[i][j] == -self.data[j][i]
            for i in range(self.rows)
            for j in range(i, self.cols)
        )

    def mul_vector(self, v: Sequence) -> list[Fraction]:
        vec = [_as_fraction(x) for x in v]
        if len(vec) != self.cols:
            raise ShapeMismatch(f"vector length {len(vec)} != {self.cols} columns")
        return [sum((r[j] * vec[j] for j in range(self.cols)), Fraction(0)) for r in self.data]

    # -- integerization -----------------------------------------------------

    def _int_rows(self) -> tuple[list[list[int]], list[int]]:
        """Rows scaled to integers; returns (rows, per-row scale factors)."""
        out, scales = [], []
        for row in self.data:
            denom = 1
            for x in row:
                denom = denom * x.denominator // gcd(denom, x.denominator)
            out.append([int(x * denom) for x in row])
            scales.append(denom)
        return out, scales

    # -- elimination ---------------------------------------------------------

    def rank(self) -> int:
        rows, _ = self._int_rows()
        return _bareiss_echelon(rows)[0]

    def determinant(self) -> Fraction:
        if self.rows != self.cols:
            raise ShapeMismatch("determinant needs a square matrix")
        if self.rows == 0:
            return Fraction(1)
        rows, scales = self._int_rows()
        r, sign, last = _bareiss_echelon(rows)
        if r < self.rows:
            return Fraction(0)
        det = Fraction(sign * last)
        for s in scales:
            det /= s
        return det

    def kernel(self) -> list[tuple[Fraction, ...]]:
        """A basis of the right kernel, one vector per free column, with the
        free coordinate set to 1 (deterministic order)."""
        m = [list(row) for row in self.data]
        nrows, ncols = self.rows, self.cols
        pivots = []  # (row, col)
        r = 0
        for c in range(ncols):
            piv = next((i for i in range(r, nrows) if m[i][c]), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(nrows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append((r, c))
            r += 1
            if r == nrows:
                break
        pivot_cols = [c for _, c in pivots]
        free_cols = [c for c in range(ncols) if c not in pivot_cols]
        basis = []
        for fc in free_cols:
            v = [Fraction(0)] * ncols
            v[fc] = Fraction(1)
            for pr, pc in pivots:
                v[pc] = -m[pr][fc]
            basis.append(tuple(v))
        return basis

    def pfaffian(self) -> Fraction:
        """Pfaffian of a skew-symmetric matrix of even size, by congruence
        elimination.  pfaffian()**2 == determinant()."""
        if self.rows != self.cols:
            raise ShapeMismatch("pfaffian needs a square matrix")
        if self.rows % 2:
            raise ShapeMismatch("pfaffian needs even size")
        if not self.is_skew_symmetric():
            raise ShapeMismatch("pfaffian needs a skew-symmetric matrix")
        n = self.rows
        if n == 0:
            return Fraction(1)
        a = [list(row) for row in self.data]
        sign = 1
        result = Fraction(1)
        for k in range(0, n - 1, 2):
            piv = next((j for j in range(k + 1, n) if a[k][j]), None)
            if piv is None:
                return Fraction(0)
            if piv != k + 1:
                a[piv], a[k + 1] = a[k + 1], a[piv]
                for row in a:
                    row[piv], row[k + 1] = row[k + 1], row[piv]
                sign = -sign
            pivot = a[k][k + 1]
            result *= pivot
            for i in range(k + 2, n):
                if not a[k][i]:
                    continue
                f = a[k][i] / pivot
                for c in range(n):
                    a[i][c] -= f * a[k + 1][c]
                for r in range(n):
                    a[r][i] -= f * a[r][k + 1]
        return sign * result

    # -- plain text dumps -----------------------------------------------------

    def to_text(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.data) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RationalMatrix":
        rows = [
            [Fraction(tok) for tok in line.split()]
            for line in text.strip().splitlines()
            if line.strip()
        ]
        return cls(rows)


def _bareiss_echelon(rows: list[list[int]]) -> tuple[int, int, int]:
    """Fraction-free Bareiss elimination on integer rows, in place.

    Returns (rank, swap sign, last pivot value).
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    prev = 1
    sign = 1
    r = 0
    last = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        pc = rows[r][c]
        for i in range(r + 1, nrows):
            ric = rows[i][c]
            row_i, row_r = rows[i], rows[r]
            for j in range(c + 1, ncols):
                row_i[j] = (pc * row_i[j] - ric * row_r[j]) // prev
            row_i[c] = 0
        prev = pc
        last = pc
        r += 1
    return r, sign, last


_MODP_PRIME = 2147483629  # < 2^31, so products stay inside int64


def rank_mod_p(int_rows: list[list[int]], p: int = _MODP_PRIME) -> int:
    """Rank of an integer matrix modulo p (vectorized elimination).

    Always a lower bound on the rational rank, with equality unless p
    divides the relevant minors; callers combine it with an upper bound or
    fall back to exact elimination."""
    import numpy as np

    if not int_rows or not int_rows[0]:
        return 0
    a = np.array(int_rows, dtype=object) % p
    a = a.astype(np.int64)
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        mask = a[r + 1:, c] != 0
        if mask.any():
            factors = a[r + 1:, c][mask]
            block = a[r + 1:, c:]
            block[mask] = (block[mask] - factors[:, None] * a[r, c:]) % p
            a[r + 1:, c:] = block
        r += 1
        if r == nrows:
            break
    return r


def certified_nonsingular(mat: "RationalMatrix") -> bool:
    """Exact nonsingularity test with a fast path: a full rank modulo a
    prime certifies det != 0; otherwise decide by exact elimination."""
    if mat.rows != mat.cols:
        raise ShapeMismatch("nonsingularity needs a square matrix")
    rows, _ = mat._int_rows()
    if rank_mod_p(rows) == mat.rows:
        return True
    return mat.determinant() != 0


def certified_rank_at_least(mat: "RationalMatrix", k: int) -> bool:
    """Exact one-sided rank test with a mod-p fast path."""
    rows, _ = mat._int_rows()
    if rank_mod_p(rows) >= k:
        return True
    return mat.rank() >= k


def pfaffian_expansion(mat, zero, is_zero=None):
    """Pfaffian by recursive expansion along the first remaining row.

    Division-free, so it works over any commutative ring: entries need only
    +, -, * (used as the independent oracle for numeric Pfaffians and for the
    symbolic identically-zero certificate).
    """
    n = len(mat)
    if n % 2:
        raise ShapeMismatch("pfaffian needs even size")
    if is_zero is None:
        is_zero = lambda x: not x
    memo: dict[tuple, object] = {}

    def pf(cols: tuple) -> object:
        if not cols:
            return None  # sentinel: multiply by nothing
        if cols in memo:
            return memo[cols]
        a = cols[0]
        rest = cols[1:]
        total = zero
        sign = 1
        for t, b in enumerate(rest):
            entry = mat[a][b]
            if not is_zero(entry):
                sub = pf(rest[:t] + rest[t + 1:])
                term = entry if sub is None else entry * sub
                total = total + term if sign > 0 else total - term
            sign = -sign
        memo[cols] = total
        return total

    out = pf(tuple(range(n)))
    return zero if out is None else out


# ---------------------------------------------------------------------------
# small multivariate polynomials (for symbolic certificates)


class Poly:
    """Multivariate polynomial with Fraction coefficients and a fixed number
    of variables; monomials are dense exponent tuples."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "Poly":
        c = _as_fraction(c)
        return cls(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Poly":
        mono = tuple(1 if k == i else 0 for k in range(nvars))
        return cls(nvars, {mono: Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Poly(self.nvars, out)

    def __sub__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) - c
        return Poly(self.nvars, out)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Poly):
            out: dict[tuple, Fraction] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = tuple(a + b for a, b in zip(m1, m2))
                    out[m] = out.get(m, Fraction(0)) + c1 * c2
            return Poly(self.nvars, out)
        c = _as_fraction(other)
        return Poly(self.nvars, {m: v * c for m, v in self.terms.items()})

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        return self * c

    @staticmethod
    def _key(mono: tuple) -> tuple:
        return (sum(mono), mono)  # graded lexicographic

    def _lead(self) -> tuple[tuple, Fraction]:
        m = max(self.terms, key=self._key)
        return m, self.terms[m]

    def exact_div(self, other: "Poly") -> "Poly":
        """Exact division; raises ArithmeticError when the division does not
        come out even (never happens inside Bareiss elimination)."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lead_m, lead_c = other._lead()
        num = dict(self.terms)
        quo: dict[tuple, Fraction] = {}
        while num:
            m = max(num, key=self._key)
            c = num[m]
            qm = tuple(a - b for a, b in zip(m, lead_m))
            if any(e < 0 for e in qm):
                raise ArithmeticError("inexact polynomial division")
            qc = c / lead_c
            quo[qm] = quo.get(qm, Fraction(0)) + qc
            for m2, c2 in other.terms.items():
                mm = tuple(a + b for a, b in zip(qm, m2))
                nv = num.get(mm, Fraction(0)) - qc * c2
                if nv:
                    num[mm] = nv
                else:
                    num.pop(mm, None)
        return Poly(self.nvars, quo)

    def evaluate(self, values: Sequence) -> Fraction:
        vals = [_as_fraction(v) for v in values]
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                for _ in range(e):
                    t *= vals[i]
            total += t
        return total

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = []
        for m in sorted(self.terms, key=self._key, reverse=True):
            c = self.terms[m]
            vars_part = "*".join(
                f"x{i}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(m)
                if e
            )
            parts.append(f"{c}" + (f"*{vars_part}" if vars_part else ""))
        return "Poly(" + " + ".join(parts) + ")"


def symbolic_rank(mat: list[list[Poly]]) -> int:
    """Rank over the rational function field, by fraction-free Bareiss
    elimination with polynomial entries."""
    if not mat:
        return 0
    rows = [list(r) for r in mat]
    nrows, ncols = len(rows), len(rows[0])
    nvars = rows[0][0].nvars
    prev: Poly | None = None
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                t = rows[r][c] * rows[i][j] - rows[i][c] * rows[r][j]
                rows[i][j] = t if prev is None else t.exact_div(prev)
            rows[i][c] = Poly.zero(nvars)
        prev = rows[r][c]
        r += 1
    return r
