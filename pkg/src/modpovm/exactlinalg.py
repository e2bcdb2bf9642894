"""Exact dense linear algebra over cyclotomic fields.

Matrices hold :class:`~modpovm.cyclotomic.Cyc` entries lifted to one common
conductor.  Rank uses fraction-free (Bareiss) elimination with row content
stripping; an independent column-elimination rank and a mod-p lower bound are
provided for cross-checks and fast full-rank certification.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .cyclotomic import Cyc, euler_phi

__all__ = [
    "Mat",
    "herm_inner",
    "rank_column_oracle",
    "rank_lower_bound_modp",
    "nullspace",
    "eigenspace",
]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _as_cyc(x) -> Cyc:
    if isinstance(x, Cyc):
        return x
    return Cyc.rational(x)


class Mat:
    """Dense matrix over a cyclotomic field."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence]):
        rows = [[_as_cyc(x) for x in row] for row in data]
        if not rows or not rows[0]:
            raise ValueError("matrix must be non-empty")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        n = 1
        for r in rows:
            for x in r:
                n = _lcm(n, x.n)
        self.rows = len(rows)
        self.cols = ncols
        self.data = [[x.lift(n) for x in r] for r in rows]

    @property
    def conductor(self) -> int:
        return self.data[0][0].n

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(r: int, c: int) -> "Mat":
        return Mat([[0] * c for _ in range(r)])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return all(
            self.data[i][j] == other.data[i][j]
            for i in range(self.rows)
            for j in range(self.cols)
        )

    def __add__(self, other: "Mat") -> "Mat":
        self._check_same_shape(other)
        return Mat(
            [
                [self.data[i][j] + other.data[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_same_shape(other)
        return Mat(
            [
                [self.data[i][j] - other.data[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def scale(self, a) -> "Mat":
        a = _as_cyc(a)
        return Mat([[a * x for x in row] for row in self.data])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Cyc.zero(self.conductor)
                for k in range(self.cols):
                    x = self.data[i][k]
                    if x:
                        acc = acc + x * other.data[k][j]
                row.append(acc)
            out.append(row)
        return Mat(out)

    def __mul__(self, other):
        if isinstance(other, Mat):
            return self @ other
        return self.scale(other)

    __rmul__ = scale

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def trace(self) -> Cyc:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        acc = Cyc.zero(self.conductor)
        for i in range(self.rows):
            acc = acc + self.data[i][i]
        return acc

    def transpose(self) -> "Mat":
        return Mat([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def dagger(self) -> "Mat":
        """Conjugate transpose."""
        return Mat(
            [[self.data[i][j].conj() for i in range(self.rows)] for j in range(self.cols)]
        )

    def kron(self, other: "Mat") -> "Mat":
        """Kronecker product, first factor most significant in the index."""
        out = []
        for i1 in range(self.rows):
            for i2 in range(other.rows):
                row = []
                for j1 in range(self.cols):
                    a = self.data[i1][j1]
                    for j2 in range(other.cols):
                        row.append(a * other.data[i2][j2])
                out.append(row)
        return Mat(out)

    def is_hermitian(self) -> bool:
        return self.rows == self.cols and self == self.dagger()

    def _check_same_shape(self, other: "Mat") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    # -- rank ----------------------------------------------------------------

    def rank(self) -> int:
        """Exact rank by fraction-free Bareiss elimination."""
        a = [self._integral_row(row) for row in self.data]
        n_rows, n_cols = self.rows, self.cols
        one = Cyc.one(self.conductor)
        prev = one
        r = 0
        for c in range(n_cols):
            pivot = next((i for i in range(r, n_rows) if a[i][c]), None)
            if pivot is None:
                continue
            if pivot != r:
                a[r], a[pivot] = a[pivot], a[r]
            prev_inv = one if prev == 1 else prev.inv()
            pv = a[r][c]
            for i in range(r + 1, n_rows):
                ric = a[i][c]
                if ric:
                    a[i] = [
                        (pv * a[i][j] - ric * a[r][j]) * prev_inv for j in range(n_cols)
                    ]
                else:
                    a[i] = [pv * a[i][j] * prev_inv for j in range(n_cols)]
                a[i] = self._strip_content(a[i])
            prev = pv
            r += 1
            if r == n_rows:
                break
        return r

    def _integral_row(self, row: list[Cyc]) -> list[Cyc]:
        den = 1
        for x in row:
            den = _lcm(den, x.den)
        return [x * den for x in row] if den > 1 else list(row)

    @staticmethod
    def _strip_content(row: list[Cyc]) -> list[Cyc]:
        g = 0
        for x in row:
            for c in x.nums:
                g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            return [x * Fraction(1, g) for x in row]
        return row

    def to_json(self) -> list[list[str]]:
        return [[x.to_string() for x in row] for row in self.data]

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols} over Q(zeta_{self.conductor}))"


# -- vectors -------------------------------------------------------------------


def herm_inner(u: Sequence[Cyc], v: Sequence[Cyc]) -> Cyc:
    """Hermitian inner product sum(conj(u_k) * v_k)."""
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    acc = Cyc.zero(1)
    for x, y in zip(u, v):
        x = _as_cyc(x)
        y = _as_cyc(y)
        if x and y:
            acc = acc + x.conj() * y
    return acc


def outer(u: Sequence[Cyc], v: Sequence[Cyc]) -> Mat:
    """Rank-1 matrix u * conj(v)^T."""
    vc = [_as_cyc(y).conj() for y in v]
    return Mat([[_as_cyc(x) * y for y in vc] for x in u])


# -- independent rank oracle and fast lower bound ------------------------------


def rank_column_oracle(m: Mat) -> int:
    """Rank by plain column elimination; an independent cross-check of Mat.rank."""
    cols = [[m.data[i][j] for i in range(m.rows)] for j in range(m.cols)]
    rank = 0
    pivot_rows: list[int] = []
    basis: list[list[Cyc]] = []
    for col in cols:
        col = list(col)
        for b, pr in zip(basis, pivot_rows):
            f = col[pr]
            if f:
                col = [x - f * y for x, y in zip(col, b)]
        pr = next((i for i, x in enumerate(col) if x), None)
        if pr is None:
            continue
        inv = col[pr].inv()
        basis.append([x * inv for x in col])
        pivot_rows.append(pr)
        rank += 1
    return rank


def _smallest_prime_congruent(n: int, minimum: int = 10_000) -> int:
    p = minimum + (1 - minimum) % n
    while True:
        if p > 2 and _is_prime(p) and p % n == 1 % n:
            return p
        p += n if n > 1 else 1


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def _root_of_unity_modp(n: int, p: int) -> int:
    # A primitive n-th root of unity in F_p (requires p = 1 mod n).
    exp = (p - 1) // n
    for g in range(2, p):
        w = pow(g, exp, p)
        if n == 1:
            return 1
        ok = w != 1
        if ok:
            for q in _prime_factors(n):
                if pow(w, n // q, p) == 1:
                    ok = False
                    break
        if ok:
            return w
    raise ArithmeticError("no primitive root found")


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def rank_lower_bound_modp(m: Mat, seed: int = 0) -> int:
    """Rank of the matrix reduced modulo a prime splitting the conductor.

    The value is an exact lower bound on the true rank; in particular a full
    mod-p rank certifies full rank over the field.
    """
    n = m.conductor
    p = _smallest_prime_congruent(n, 10_000 + 977 * seed)
    den = 1
    for row in m.data:
        for x in row:
            den = _lcm(den, x.den)
    while den % p == 0:
        p = _smallest_prime_congruent(n, p + 1)
    w = _root_of_unity_modp(n, p)
    wpow = [1] * euler_phi(n)
    for j in range(1, len(wpow)):
        wpow[j] = wpow[j - 1] * w % p
    rows = []
    for row in m.data:
        out = []
        for x in row:
            v = sum(c * wpow[j] for j, c in enumerate(x.nums) if c) % p
            v = v * pow(x.den, p - 2, p) % p
            out.append(v)
        rows.append(out)
    return _rank_modp(rows, p)


def _rank_modp(rows: list[list[int]], p: int) -> int:
    n_rows = len(rows)
    n_cols = len(rows[0])
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if rows[i][c] % p), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == n_rows:
            break
    return r


# -- kernels and eigenspaces ----------------------------------------------------


def nullspace(m: Mat) -> list[list[Cyc]]:
    """Echelonized basis of the right kernel of m."""
    a = [list(row) for row in m.data]
    n_rows, n_cols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if a[i][c]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = a[r][c].inv()
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    zero, one = Cyc.zero(m.conductor), Cyc.one(m.conductor)
    for fc in free:
        vec = [zero] * n_cols
        vec[fc] = one
        for i, pc in enumerate(pivots):
            vec[pc] = -a[i][fc]
        basis.append(vec)
    return basis


def eigenspace(p: Mat, lam) -> list[list[Cyc]]:
    """Exact kernel basis of (p - lam*I); may be empty."""
    if p.rows != p.cols:
        raise ValueError("eigenspace of a non-square matrix")
    lam = _as_cyc(lam)
    shifted = Mat(
        [
            [p.data[i][j] - lam if i == j else p.data[i][j] for j in range(p.cols)]
            for i in range(p.rows)
        ]
    )
    return nullspace(shifted)
