"""Pauli orbits of fiducial states and exact IC / SIC certification.

A fiducial is kept unnormalized with its exact norm-square; orbit projectors
are |psi_i><psi_i| / norm2 over the displacement operators in enumeration
order.  All certification quantities (POVM sum, Gram rank, trace spectrum,
field-norm Hermitian angles) are computed exactly; a mod-p rank lower bound is
used only to certify full rank quickly, with Bareiss elimination as the
general path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .cyclotomic import Cyc
from .exactlinalg import Mat, herm_inner, outer, rank_lower_bound_modp
from .pauli import PauliOp, apply, displacement, enumerate_group, label_str, phase_conductor, total_dim

__all__ = [
    "Fiducial",
    "ProjectorFiducial",
    "Orbit",
    "ICCertificate",
    "build_orbit",
    "povm_sum_check",
    "gram_matrix",
    "gram_rank",
    "pair_spectrum",
    "hermitian_angles",
    "verify",
    "qubit_t_projector",
    "qubit_h_projector",
]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def spectrum_sort_key(value: Cyc):
    z = value.embed()
    return (round(z.real, 9), round(z.imag, 9), value.to_string())


@dataclass(frozen=True)
class Fiducial:
    """An unnormalized fiducial vector together with its tensor factorization."""

    dims: tuple[int, ...]
    vec: tuple[Cyc, ...]

    def __post_init__(self):
        d = total_dim(self.dims)
        if len(self.vec) != d:
            raise ValueError(f"vector length {len(self.vec)} != dimension {d}")
        n2 = herm_inner(self.vec, self.vec)
        if n2.is_zero():
            raise ValueError("fiducial vector must be nonzero")
        if not n2.is_real():
            raise ValueError("norm-square must be totally real")

    @staticmethod
    def make(dims: Sequence[int], entries: Sequence) -> "Fiducial":
        vec = tuple(x if isinstance(x, Cyc) else Cyc.rational(x) for x in entries)
        return Fiducial(tuple(dims), vec)

    @property
    def norm2(self) -> Cyc:
        return herm_inner(self.vec, self.vec)

    def describe(self) -> str:
        return "[" + ",".join(x.to_string() for x in self.vec) + "]"


@dataclass(frozen=True)
class ProjectorFiducial:
    """A fiducial supplied as an exact rank-1 projector matrix.

    Needed when the state amplitudes are not cyclotomic but the projector is
    (the qubit magic states are the motivating case).
    """

    dims: tuple[int, ...]
    projector: Mat

    def __post_init__(self):
        d = total_dim(self.dims)
        if self.projector.shape != (d, d):
            raise ValueError("projector shape does not match dimension")
        if not (self.projector @ self.projector == self.projector):
            raise ValueError("input matrix is not idempotent")
        if not self.projector.is_hermitian():
            raise ValueError("input matrix is not Hermitian")
        if not (self.projector.trace() == 1):
            raise ValueError("projector must have rank one (unit trace)")

    def describe(self) -> str:
        return "projector:" + ";".join(",".join(x.to_string() for x in row) for row in self.projector.data)


class Orbit:
    """The d^2 projectors of a fiducial under the displacement group."""

    def __init__(self, fiducial):
        self.fiducial = fiducial
        self.dims = fiducial.dims
        self.d = total_dim(self.dims)
        self.ops = enumerate_group(self.dims)
        if isinstance(fiducial, Fiducial):
            self.norm2 = fiducial.norm2
            self.vectors = [apply(op, self.dims, list(fiducial.vec)) for op in self.ops]
            self.projectors = None
        else:
            self.norm2 = Cyc.one()
            self.vectors = None
            self.projectors = [
                displacement(self.dims, op) @ fiducial.projector @ displacement(self.dims, op).dagger()
                for op in self.ops
            ]
        self._overlaps: Mat | None = None

    def projector_list(self) -> list[Mat]:
        if self.projectors is None:
            inv = self.norm2.inv()
            self.projectors = [outer(v, v).scale(inv) for v in self.vectors]
        return self.projectors

    def overlaps(self) -> Mat:
        """Matrix of inner products <psi_i|psi_j> of the unnormalized orbit.

        Uses <psi_i|psi_j> = phase * <f|D_k f> with k the label difference, so
        only d^2 base inner products are formed.
        """
        if self._overlaps is not None:
            return self._overlaps
        if self.vectors is None:
            raise ValueError("overlap matrix requires a vector fiducial")
        dims = self.dims
        L = phase_conductor(dims)
        f = list(self.fiducial.vec)
        base: dict[tuple[tuple[int, int], ...], Cyc] = {}
        for op in self.ops:
            base[op.labels] = herm_inner(f, apply(op, dims, f))
        rows = []
        for opi in self.ops:
            row = []
            for opj in self.ops:
                exponent = 0
                labels = []
                for fd, (ai, bi), (aj, bj) in zip(dims, opi.labels, opj.labels):
                    exponent += (ai * bi - bi * aj) * (L // fd)
                    labels.append(((aj - ai) % fd, (bj - bi) % fd))
                row.append(Cyc.root(L, exponent % L) * base[tuple(labels)])
            rows.append(row)
        self._overlaps = Mat(rows)
        return self._overlaps

    def gram(self) -> Mat:
        """Gram matrix tr(Pi_i Pi_j), exactly."""
        if self.vectors is not None:
            m = self.overlaps()
            inv2 = (self.norm2 * self.norm2).inv()
            return Mat(
                [
                    [m.data[i][j] * m.data[j][i] * inv2 for j in range(len(self.ops))]
                    for i in range(len(self.ops))
                ]
            )
        return gram_matrix(self.projector_list())

    def triple_trace(self, i: int, j: int, k: int) -> Cyc:
        """tr(Pi_i Pi_j Pi_k) for the cyclic order (i, j, k)."""
        m = self.overlaps()
        inv3 = (self.norm2 ** 3).inv()
        return m.data[i][j] * m.data[j][k] * m.data[k][i] * inv3

    def tuple_trace(self, idx: Sequence[int]) -> Cyc:
        m = self.overlaps()
        acc = m.data[idx[-1]][idx[0]]
        for a, b in zip(idx, idx[1:]):
            acc = acc * m.data[a][b]
        return acc * (self.norm2 ** len(idx)).inv()

    def labels(self) -> list[str]:
        return [label_str(self.dims, op) for op in self.ops]


# -- spec-level operations on plain projector lists ----------------------------


def build_orbit(fid) -> list[Mat]:
    """The d^2 orbit projectors in displacement enumeration order."""
    return Orbit(fid).projector_list()


def povm_sum_check(projs: Sequence[Mat]) -> bool:
    """True iff the projectors sum to (dimension) * identity exactly."""
    d = projs[0].rows
    acc = projs[0]
    for p in projs[1:]:
        acc = acc + p
    return acc == Mat.identity(d).scale(d)


def gram_matrix(projs: Sequence[Mat]) -> Mat:
    """Matrix of pairwise Hilbert-Schmidt traces tr(Pi_i Pi_j)."""
    n = len(projs)
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            t = (projs[i] @ projs[j]).trace()
            rows[i][j] = t
            rows[j][i] = t.conj()
    return Mat(rows)


def gram_rank(projs: Sequence[Mat]) -> int:
    """Exact rank of the Gram matrix."""
    return _exact_rank(gram_matrix(projs))


def _exact_rank(g: Mat) -> int:
    n = g.rows
    lower = rank_lower_bound_modp(g)
    if lower == n:
        return n  # full mod-p rank certifies full rank exactly
    return g.rank()


def pair_spectrum(projs: Sequence[Mat]) -> list[tuple[Cyc, int]]:
    """Distinct exact off-diagonal trace values with multiplicities."""
    g = gram_matrix(projs)
    return _spectrum_from_gram(g)


def _spectrum_from_gram(g: Mat) -> list[tuple[Cyc, int]]:
    counts: dict[tuple, tuple[Cyc, int]] = {}
    for i in range(g.rows):
        for j in range(i + 1, g.cols):
            v = g.data[i][j].reduce()
            k = v.key()
            if k in counts:
                counts[k] = (counts[k][0], counts[k][1] + 1)
            else:
                counts[k] = (v, 1)
    return sorted(counts.values(), key=lambda vc: spectrum_sort_key(vc[0]))


def _integer_nth_root(x: int, n: int) -> int | None:
    if x < 0:
        return None
    if x in (0, 1):
        return x
    lo, hi = 1, 1 << ((x.bit_length() + n - 1) // n + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        p = mid**n
        if p == x:
            return mid
        if p < x:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def _fraction_root(q: Fraction, n: int) -> Fraction | None:
    a = _integer_nth_root(q.numerator, n)
    b = _integer_nth_root(q.denominator, n)
    if a is None or b is None:
        return None
    return Fraction(a, b)


@dataclass(frozen=True)
class AngleEntry:
    """Squared Hermitian angle of one class of pairs, in both norm conventions."""

    norm_of_value: Fraction | None
    norm_of_abs_square: Fraction | None
    raw_norm: Fraction
    multiplicity: int

    def to_json(self) -> dict:
        return {
            "norm_of_value": None if self.norm_of_value is None else str(self.norm_of_value),
            "norm_of_abs_square": None
            if self.norm_of_abs_square is None
            else str(self.norm_of_abs_square),
            "raw_norm": str(self.raw_norm),
            "multiplicity": self.multiplicity,
        }


def _angles_from_inner_products(
    values: list[tuple[Cyc, int]], norm2: Cyc, field: int
) -> list[AngleEntry]:
    # values: distinct inner products of unnormalized pairs with multiplicities.
    from .cyclotomic import euler_phi

    deg = euler_phi(field)
    n2 = norm2.lift(field)
    out = []
    for v, mult in values:
        x = v.lift(field) / n2
        if x.is_zero():
            out.append(AngleEntry(Fraction(0), Fraction(0), Fraction(0), mult))
            continue
        raw = abs(x.field_norm(field))
        sq_angle = _fraction_root(raw**2, deg)
        xx = x * x.conj()
        raw2 = abs(xx.field_norm(field))
        sq_angle2 = _fraction_root(raw2, deg)
        out.append(AngleEntry(sq_angle, sq_angle2, raw, mult))
    return _merge_angles(out)


def hermitian_angles(projs: Sequence[Mat], field: int | None = None) -> list[AngleEntry]:
    """Field-norm squared angles per pair class, from projectors alone.

    tr(Pi_i Pi_j) = |<psi_i|psi_j>|^2 for unit states, so the norm of the inner
    product is recovered as the exact positive square root of the norm of the
    trace value (cyclotomic fields are CM, hence the norm of a value equals
    the norm of its conjugate).
    """
    g = gram_matrix(projs)
    if field is None:
        field = 1
        for p in projs:
            field = _lcm(field, p.conductor)
    from .cyclotomic import euler_phi

    deg = euler_phi(field)
    out = []
    for v, mult in _spectrum_from_gram(g):
        t = v.lift(field)
        if t.is_zero():
            out.append(AngleEntry(Fraction(0), Fraction(0), Fraction(0), mult))
            continue
        raw2 = abs(t.field_norm(field))  # norm of |x|^2
        raw = _fraction_root(raw2, 2)
        if raw is None:
            raise ArithmeticError("norm of |x|^2 must be a perfect square in a CM field")
        out.append(
            AngleEntry(_fraction_root(raw**2, deg), _fraction_root(raw2, deg), raw, mult)
        )
    return _merge_angles(out)


def _merge_angles(entries: list[AngleEntry]) -> list[AngleEntry]:
    merged: dict[tuple, AngleEntry] = {}
    for e in entries:
        k = (e.norm_of_value, e.norm_of_abs_square, e.raw_norm)
        if k in merged:
            prev = merged[k]
            merged[k] = AngleEntry(e.norm_of_value, e.norm_of_abs_square, e.raw_norm, prev.multiplicity + e.multiplicity)
        else:
            merged[k] = e
    return sorted(merged.values(), key=lambda e: (e.raw_norm, e.multiplicity))


# -- certificates ----------------------------------------------------------------


@dataclass(frozen=True)
class ICCertificate:
    """Exact certification record for one fiducial orbit."""

    dims: tuple[int, ...]
    d: int
    fiducial: str
    povm_sum_ok: bool
    gram_rank: int
    trace_spectrum: tuple[tuple[Cyc, int], ...]
    angle_spectrum: tuple[AngleEntry, ...]
    is_ic: bool
    is_sic: bool
    conductor: int
    field_degree: int

    @property
    def pp(self) -> int:
        """Number of pairwise distinct off-diagonal products."""
        return len(self.trace_spectrum)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "dims": list(self.dims),
            "fiducial": self.fiducial,
            "povm_sum_ok": self.povm_sum_ok,
            "gram_rank": self.gram_rank,
            "is_ic": self.is_ic,
            "is_sic": self.is_sic,
            "pp": self.pp,
            "conductor": self.conductor,
            "field_degree": self.field_degree,
            "trace_spectrum": [
                {
                    "value": v.to_string(),
                    "approx": round(v.embed().real, 12),
                    "multiplicity": m,
                }
                for v, m in self.trace_spectrum
            ],
            "angle_spectrum": [e.to_json() for e in self.angle_spectrum],
        }


def verify(fid) -> ICCertificate:
    """Assemble the full exact certificate for a fiducial."""
    orbit = Orbit(fid)
    d = orbit.d
    if orbit.vectors is not None:
        m = orbit.overlaps()
        n2 = orbit.norm2
        sum_ok = _vector_povm_sum_ok(orbit)
        gram = orbit.gram()
        inner_classes = _distinct_upper(m)
        field = _lcm(m.conductor, n2.n)
        angles = _angles_from_inner_products(inner_classes, n2, field)
    else:
        projs = orbit.projector_list()
        sum_ok = povm_sum_check(projs)
        gram = gram_matrix(projs)
        field = 1
        for p in projs:
            field = _lcm(field, p.conductor)
        angles = hermitian_angles(projs, field)
    spectrum = _spectrum_from_gram(gram)
    rank = _exact_rank(gram)
    target = Cyc.rational(Fraction(1, d + 1))
    is_sic = len(spectrum) == 1 and spectrum[0][0] == target
    from .cyclotomic import euler_phi

    return ICCertificate(
        dims=tuple(orbit.dims),
        d=d,
        fiducial=fid.describe(),
        povm_sum_ok=sum_ok,
        gram_rank=rank,
        trace_spectrum=tuple(spectrum),
        angle_spectrum=tuple(angles),
        is_ic=sum_ok and rank == d * d,
        is_sic=sum_ok and rank == d * d and is_sic,
        conductor=field,
        field_degree=euler_phi(field),
    )


def _vector_povm_sum_ok(orbit: Orbit) -> bool:
    d = orbit.d
    n2 = orbit.norm2
    target = Mat.identity(d).scale(n2 * d)
    rows = [[Cyc.zero(1) for _ in range(d)] for _ in range(d)]
    for v in orbit.vectors:
        for r in range(d):
            if v[r]:
                vr = v[r]
                for s in range(d):
                    if v[s]:
                        rows[r][s] = rows[r][s] + vr * v[s].conj()
    return Mat(rows) == target


def _distinct_upper(m: Mat) -> list[tuple[Cyc, int]]:
    # Distinct values of the strict upper triangle, counting unordered pairs;
    # conjugate values (m[j][i]) share the same field norm and are not repeated.
    counts: dict[tuple, tuple[Cyc, int]] = {}
    for i in range(m.rows):
        for j in range(i + 1, m.cols):
            v = m.data[i][j].reduce()
            k = v.key()
            if k in counts:
                counts[k] = (counts[k][0], counts[k][1] + 1)
            else:
                counts[k] = (v, 1)
    return sorted(counts.values(), key=lambda vc: spectrum_sort_key(vc[0]))


# -- built-in qubit magic projectors -----------------------------------------------


def qubit_t_projector() -> ProjectorFiducial:
    """(I + (X + Y + Z)/sqrt(3))/2 over Q(zeta_12), the qubit SIC fiducial."""
    i = Cyc.root(12, 3)
    sqrt3 = Cyc.root(12, 1) + Cyc.root(12, 11)
    inv = (2 * sqrt3).inv()
    a = (sqrt3 + 1) * inv  # (1 + 1/sqrt3)/2
    b = (sqrt3 - 1) * inv
    c = (1 - i) * inv  # (1 - i)/(2 sqrt3)
    return ProjectorFiducial((2,), Mat([[a, c], [c.conj(), b]]))


def qubit_h_projector() -> ProjectorFiducial:
    """(I + (X + Z)/sqrt(2))/2 over Q(zeta_8), the Hadamard eigenstate."""
    sqrt2 = Cyc.root(8, 1) + Cyc.root(8, 7)
    inv = (2 * sqrt2).inv()
    a = (sqrt2 + 1) * inv
    b = (sqrt2 - 1) * inv
    c = inv
    return ProjectorFiducial((2,), Mat([[a, c], [c, b]]))
