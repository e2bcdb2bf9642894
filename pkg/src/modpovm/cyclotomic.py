"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Values are represented on the power basis {zeta_n^k : k < phi(n)} modulo the
n-th cyclotomic polynomial, with an integer numerator vector over a common
positive denominator.  All operations are exact; floating point only enters
through :meth:`Cyc.embed`, which is for reports and ordering, never for
certification.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd

__all__ = [
    "Cyc",
    "euler_phi",
    "cyclotomic_polynomial",
    "from_root",
    "conj",
    "field_norm",
    "embed",
    "reduce_conductor",
]


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    """Euler totient of n >= 1."""
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    """Positive divisors of n in increasing order."""
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


def _poly_divide_exact(num: list[int], den: list[int]) -> list[int]:
    # Exact division of integer polynomials (ascending coefficients).
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        assert c % den[-1] == 0
        q = c // den[-1]
        out[k] = q
        for j, dj in enumerate(den):
            num[k + j] -= q * dj
    assert all(c == 0 for c in num)
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Monic integer coefficients (ascending) of the n-th cyclotomic polynomial."""
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in divisors(n)[:-1]:
        poly = _poly_divide_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _xpow_table(n: int) -> tuple[tuple[int, ...], ...]:
    # x^k mod Phi_n for k in [0, max(n, 2*phi(n) - 1)), as integer vectors.
    phi = euler_phi(n)
    mod = cyclotomic_polynomial(n)
    top = max(n, 2 * phi - 1)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    rows.append(tuple(cur))
    for _ in range(1, top):
        nxt = [0] + cur[: phi - 1]
        lead = cur[phi - 1]
        if lead:
            for j in range(phi):
                nxt[j] -= lead * mod[j]
        rows.append(tuple(nxt))
        cur = nxt
    return tuple(rows)


_REDUCE_CACHE: dict[tuple, "Cyc"] = {}


def _normalize(nums: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        nums = [-c for c in nums]
        den = -den
    g = den
    for c in nums:
        g = gcd(g, c)
        if g == 1:
            break
    if g > 1:
        nums = [c // g for c in nums]
        den //= g
    return tuple(nums), den


class Cyc:
    """An element of Q(zeta_n) in reduced power-basis form."""

    __slots__ = ("n", "nums", "den")

    def __init__(self, n: int, nums, den: int = 1):
        if n < 1:
            raise ValueError("conductor must be positive")
        phi = euler_phi(n)
        if len(nums) != phi:
            raise ValueError(f"need {phi} coefficients for conductor {n}")
        self.n = n
        self.nums, self.den = _normalize(list(nums), den)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def rational(q, n: int = 1) -> "Cyc":
        """The rational number q as an element of Q(zeta_n)."""
        q = Fraction(q)
        nums = [0] * euler_phi(n)
        nums[0] = q.numerator
        return Cyc(n, nums, q.denominator)

    @staticmethod
    def zero(n: int = 1) -> "Cyc":
        return Cyc.rational(0, n)

    @staticmethod
    def one(n: int = 1) -> "Cyc":
        return Cyc.rational(1, n)

    @staticmethod
    def root(n: int, k: int = 1) -> "Cyc":
        """zeta_n^k reduced modulo the cyclotomic polynomial."""
        return Cyc(n, list(_xpow_table(n)[k % n]))

    @staticmethod
    def from_coeffs(n: int, coeffs) -> "Cyc":
        """Element with the given rational coefficients on the power basis."""
        fracs = [Fraction(c) for c in coeffs]
        den = 1
        for f in fracs:
            den = den * f.denominator // gcd(den, f.denominator)
        return Cyc(n, [int(f * den) for f in fracs], den)

    # -- basic structure ---------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Rational coefficients on the power basis of the conductor."""
        return tuple(Fraction(c, self.den) for c in self.nums)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.nums)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.nums[1:])

    def as_fraction(self) -> Fraction:
        """The value as a Fraction; raises if it is irrational."""
        x = self.reduce() if not self.is_rational() else self
        if not x.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(x.nums[0], x.den)

    def lift(self, m: int) -> "Cyc":
        """Rewrite over Q(zeta_m) where the current conductor divides m."""
        if m == self.n:
            return self
        if m % self.n != 0:
            raise ValueError(f"{m} is not a multiple of conductor {self.n}")
        table = _xpow_table(m)
        step = m // self.n
        out = [0] * euler_phi(m)
        for j, c in enumerate(self.nums):
            if c:
                row = table[(j * step) % m]
                for i, r in enumerate(row):
                    out[i] += c * r
        return Cyc(m, out, self.den)

    @staticmethod
    def common(a: "Cyc", b: "Cyc") -> tuple["Cyc", "Cyc"]:
        """Lift both operands to the lcm conductor."""
        if a.n == b.n:
            return a, b
        m = a.n * b.n // gcd(a.n, b.n)
        return a.lift(m), b.lift(m)

    # -- ring / field operations -------------------------------------------

    @staticmethod
    def _coerce(x) -> "Cyc":
        if isinstance(x, Cyc):
            return x
        if isinstance(x, (int, Fraction)):
            return Cyc.rational(x)
        return NotImplemented

    def __add__(self, other):
        other = Cyc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = Cyc.common(self, other)
        den = a.den * b.den // gcd(a.den, b.den)
        fa, fb = den // a.den, den // b.den
        return Cyc(a.n, [x * fa + y * fb for x, y in zip(a.nums, b.nums)], den)

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.n, [-c for c in self.nums], self.den)

    def __sub__(self, other):
        other = Cyc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = Cyc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = Cyc.common(self, other)
        phi = euler_phi(a.n)
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(a.nums):
            if x:
                for j, y in enumerate(b.nums):
                    if y:
                        conv[i + j] += x * y
        out = conv[:phi]
        table = _xpow_table(a.n)
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c:
                row = table[k]
                for i, r in enumerate(row):
                    out[i] += c * r
        return Cyc(a.n, out, a.den * b.den)

    __rmul__ = __mul__

    def inv(self) -> "Cyc":
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        # Extended Euclid in Q[x] against the cyclotomic polynomial.
        mod = [Fraction(c) for c in cyclotomic_polynomial(self.n)]
        a = [Fraction(c, self.den) for c in self.nums]
        r0, r1 = mod, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while any(r1):
            while r1 and r1[-1] == 0:
                r1.pop()
            q = _frac_poly_divmod(r0, r1)
            r0, r1 = r1, _frac_poly_sub(r0, _frac_poly_mul(q, r1))
            s0, s1 = s1, _frac_poly_sub(s0, _frac_poly_mul(q, s1))
            while r1 and r1[-1] == 0:
                r1.pop()
        while len(r0) > 1 and r0[-1] == 0:
            r0.pop()
        if len(r0) != 1:
            raise ZeroDivisionError("element is a zero divisor (not in reduced form)")
        lead = r0[0]
        phi = euler_phi(self.n)
        coeffs = [c / lead for c in s0] + [Fraction(0)] * phi
        inv = Cyc.from_coeffs(self.n, coeffs[:phi])
        # Fold back any degree overflow from s0 through multiplication identity.
        assert (inv * self - 1).is_zero()
        return inv

    def __truediv__(self, other):
        other = Cyc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return Cyc._coerce(other) * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = Cyc.one(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- Galois structure ----------------------------------------------------

    def galois(self, k: int) -> "Cyc":
        """Image under the automorphism zeta_n -> zeta_n^k, gcd(k, n) = 1."""
        if gcd(k, self.n) != 1:
            raise ValueError(f"{k} is not coprime to the conductor {self.n}")
        table = _xpow_table(self.n)
        out = [0] * euler_phi(self.n)
        for j, c in enumerate(self.nums):
            if c:
                row = table[(j * k) % self.n]
                for i, r in enumerate(row):
                    out[i] += c * r
        return Cyc(self.n, out, self.den)

    def conj(self) -> "Cyc":
        """Complex conjugate (the automorphism zeta -> zeta^-1)."""
        if self.n <= 2:
            return self
        return self.galois(self.n - 1)

    def is_real(self) -> bool:
        return self == self.conj()

    def field_norm(self, field: int | None = None) -> Fraction:
        """Product of all Galois conjugates over Q(zeta_field).

        The field defaults to the element's own conductor; pass a multiple to
        take the norm of the element viewed in a larger cyclotomic field.
        """
        x = self if field is None else self.lift(field)
        prod = Cyc.one(x.n)
        for k in range(1, x.n + 1):
            if gcd(k, x.n) == 1:
                prod = prod * x.galois(k)
        return prod.as_fraction()

    # -- embedding & reduction ----------------------------------------------

    def embed(self) -> complex:
        """Numerical value at zeta_n = exp(2*pi*i/n)."""
        z = 0j
        for j, c in enumerate(self.nums):
            if c:
                z += c * cmath.exp(2j * cmath.pi * j / self.n)
        return z / self.den

    def reduce(self) -> "Cyc":
        """Equal value over the smallest cyclotomic conductor containing it."""
        if self.n == 1:
            return self
        if self.is_rational():
            return Cyc(1, [self.nums[0]], self.den)
        cached = _REDUCE_CACHE.get((self.n, self.nums, self.den))
        if cached is not None:
            return cached
        phi = euler_phi(self.n)
        result = self
        for m in divisors(self.n)[:-1]:
            if euler_phi(m) > phi or not self._galois_stable_over(m):
                continue
            sol = self._express_over(m)
            if sol is not None:
                result = sol
                break
        _REDUCE_CACHE[(self.n, self.nums, self.den)] = result
        return result

    def _galois_stable_over(self, m: int) -> bool:
        # Membership in Q(zeta_m) means fixing by all automorphisms k = 1 mod m.
        for k in range(1 + m, self.n, m):
            if gcd(k, self.n) == 1 and self.galois(k) != self:
                return False
        return True

    def _express_over(self, m: int) -> "Cyc | None":
        # Solve for coefficients of self on the lifted power basis of Q(zeta_m).
        table = _xpow_table(self.n)
        step = self.n // m
        phi_m, phi_n = euler_phi(m), euler_phi(self.n)
        cols = [table[(j * step) % self.n] for j in range(phi_m)]
        rows = [
            [Fraction(cols[j][i]) for j in range(phi_m)] + [Fraction(self.nums[i], self.den)]
            for i in range(phi_n)
        ]
        sol = _solve_exact(rows, phi_m)
        if sol is None:
            return None
        return Cyc.from_coeffs(m, sol)

    # -- comparison, hashing, display ----------------------------------------

    def __eq__(self, other):
        other = Cyc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = Cyc.common(self, other)
        return a.nums == b.nums and a.den == b.den

    def __hash__(self):
        r = self.reduce()
        return hash((r.n, r.nums, r.den))

    def key(self) -> tuple:
        """Canonical hashable key (conductor-reduced form)."""
        r = self.reduce()
        return (r.n, r.nums, r.den)

    def to_string(self) -> str:
        """Stable textual form 'n:[c0,c1,...]' with rational coefficients."""
        parts = []
        for c in self.nums:
            f = Fraction(c, self.den)
            parts.append(str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}")
        return f"{self.n}:[{','.join(parts)}]"

    @staticmethod
    def from_string(s: str) -> "Cyc":
        head, _, body = s.partition(":")
        body = body.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ValueError(f"malformed cyclotomic literal: {s!r}")
        inner = body[1:-1].strip()
        coeffs = [Fraction(p) for p in inner.split(",")] if inner else []
        return Cyc.from_coeffs(int(head), coeffs)

    def __repr__(self):
        return f"Cyc({self.to_string()})"

    def __str__(self):
        if self.is_rational():
            return str(Fraction(self.nums[0], self.den))
        terms = []
        for j, c in enumerate(self.nums):
            if not c:
                continue
            f = Fraction(c, self.den)
            if j == 0:
                terms.append(str(f))
            else:
                mag = "" if abs(f) == 1 else f"{abs(f)}*"
                sign = "-" if f < 0 else ("+" if terms else "")
                power = f"z{self.n}" if j == 1 else f"z{self.n}^{j}"
                terms.append(f"{sign}{mag}{power}")
        return "".join(terms) if terms else "0"


# -- module-level operation aliases ------------------------------------------


def from_root(n: int, k: int) -> Cyc:
    """zeta_n^k as an exact element of Q(zeta_n)."""
    return Cyc.root(n, k)


def conj(x: Cyc) -> Cyc:
    return x.conj()


def field_norm(x: Cyc, field: int | None = None) -> Fraction:
    return x.field_norm(field)


def embed(x: Cyc) -> complex:
    return x.embed()


def reduce_conductor(x: Cyc) -> Cyc:
    return x.reduce()


# -- small exact polynomial / linear helpers ----------------------------------


def _frac_poly_divmod(num: list[Fraction], den: list[Fraction]) -> list[Fraction]:
    # Quotient of num by den over Q (ascending coefficients).
    num = list(num)
    if len(num) < len(den):
        return [Fraction(0)]
    out = [Fraction(0)] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        q = num[k + len(den) - 1] / den[-1]
        out[k] = q
        if q:
            for j, dj in enumerate(den):
                num[k + j] -= q * dj
    return out


def _frac_poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _frac_poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return out


def _solve_exact(aug: list[list[Fraction]], ncols: int) -> list[Fraction] | None:
    # Solve the augmented system by Gaussian elimination; None if inconsistent.
    rows = len(aug)
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if aug[i][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][ncols]
    return sol
