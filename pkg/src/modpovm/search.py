"""Fiducial candidates from permutation-gate eigenspaces and the IC search.

Candidates are drawn from exact eigenspaces of single group elements (ordered
by word length in the generators) and from joint eigenspaces of commuting
element pairs; higher-dimensional eigenspaces are sampled through small
entry-alphabet combinations of basis vectors.  Candidates are deduplicated
projectively and certified exactly; cheap exact screens (orbit collisions,
mod-p Gram rank) avoid running the full certificate on hopeless candidates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from .cyclotomic import Cyc
from .exactlinalg import Mat, nullspace, _smallest_prime_congruent, _root_of_unity_modp, _rank_modp
from .modgroup import PermPair, cycles_of, perm_mul, permutation_matrix
from .pauli import apply as pauli_apply
from .pauli import _digits, enumerate_group, phase_conductor, total_dim
from .povm import Fiducial, ICCertificate, Orbit, verify

__all__ = ["SearchBudget", "SearchResult", "candidate_fiducials", "search_ic"]


def _default_entry_set() -> tuple[Cyc, ...]:
    w3 = Cyc.root(3)
    w6 = Cyc.root(6)
    i = Cyc.root(4)
    raw = [
        Cyc.zero(),
        Cyc.one(),
        -Cyc.one(),
        w3,
        -w3,
        w3 + 1,
        -(w3 + 1),
        w6,
        -w6,
        w6 - 1,
        1 - w6,
        i,
        -i,
    ]
    seen, out = set(), []
    for x in raw:
        k = x.key()
        if k not in seen:
            seen.add(k)
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class SearchBudget:
    """Bounds on the candidate generation."""

    entry_set: tuple[Cyc, ...] = field(default_factory=_default_entry_set)
    max_support: int = 3
    group_element_cap: int = 24

    def __post_init__(self):
        keys = {x.key() for x in self.entry_set}
        if Cyc.zero().key() not in keys or Cyc.one().key() not in keys:
            raise ValueError("entry set must contain 0 and 1")


@dataclass(frozen=True)
class SearchResult:
    certificates: tuple[ICCertificate, ...]
    truncated: bool
    candidates_scanned: int

    def __iter__(self):
        return iter(self.certificates)

    def __len__(self):
        return len(self.certificates)


# -- group elements by word length ----------------------------------------------


def _elements_by_word_length(pair: PermPair, cap: int) -> tuple[list[tuple[int, ...]], bool]:
    ident = tuple(range(pair.mu))
    gens = [pair.sigma_e, pair.sigma_v]
    seen = {ident}
    order: list[tuple[int, ...]] = []
    frontier = [ident]
    while frontier and len(order) < cap:
        nxt = []
        for w in frontier:
            for g in gens:
                h = perm_mul(w, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    order.append(h)
        frontier = nxt
    del seen
    order = order[:cap]
    return order, _group_not_closed(pair, order)


def _group_not_closed(pair: PermPair, order: list[tuple[int, ...]]) -> bool:
    have = set(order) | {tuple(range(pair.mu))}
    for w in order:
        for g in (pair.sigma_e, pair.sigma_v):
            if perm_mul(w, g) not in have:
                return True
    return False


# -- eigenspace machinery ----------------------------------------------------------


def _eigenvalues(perm: tuple[int, ...]) -> list[Cyc]:
    lengths = sorted({len(c) for c in cycles_of(perm)})
    seen, out = set(), []
    for ell in lengths:
        for j in range(ell):
            lam = Cyc.root(ell, j)
            k = lam.key()
            if k not in seen:
                seen.add(k)
                out.append(lam)
    return out


def _stack(mats: list[Mat]) -> Mat:
    rows = []
    for m in mats:
        rows.extend(m.data)
    return Mat(rows)


def _shifted(p: Mat, lam: Cyc) -> Mat:
    return Mat(
        [
            [p.data[i][j] - lam if i == j else p.data[i][j] for j in range(p.cols)]
            for i in range(p.rows)
        ]
    )


class _CandidateBag:
    def __init__(self):
        self.keys = set()
        self.vectors: list[tuple[Cyc, ...]] = []

    def add(self, vec: Sequence[Cyc]) -> None:
        lead = next((x for x in vec if x), None)
        if lead is None:
            return
        inv = lead.inv()
        normal = tuple((x * inv).reduce() for x in vec)
        key = tuple(x.key() for x in normal)
        if key not in self.keys:
            self.keys.add(key)
            self.vectors.append(normal)

    def add_space(self, basis: list[list[Cyc]], budget: SearchBudget) -> None:
        if not basis:
            return
        if len(basis) == 1:
            self.add(basis[0])
            return
        nonzero = [x for x in budget.entry_set if x]
        support = min(len(basis), budget.max_support)
        for size in range(1, support + 1):
            for subset in itertools.combinations(range(len(basis)), size):
                for coeffs in itertools.product(nonzero, repeat=size):
                    vec = None
                    for c, bi in zip(coeffs, subset):
                        term = [c * x for x in basis[bi]]
                        vec = term if vec is None else [a + b for a, b in zip(vec, term)]
                    self.add(vec)


def candidate_fiducials(pair: PermPair, budget: SearchBudget | None = None) -> tuple[list[tuple[Cyc, ...]], bool]:
    """Candidate fiducial vectors for dimension mu, with a truncation flag."""
    budget = budget or SearchBudget()
    elements, truncated = _elements_by_word_length(pair, budget.group_element_cap)
    bag = _CandidateBag()
    mats = {g: permutation_matrix(g) for g in elements}
    spaces: dict[tuple[int, ...], list[tuple[Cyc, list[list[Cyc]]]]] = {}
    for g in elements:
        pg = mats[g]
        spaces[g] = []
        for lam in _eigenvalues(g):
            basis = nullspace(_shifted(pg, lam))
            if basis:
                spaces[g].append((lam, basis))
                bag.add_space(basis, budget)
    # Joint eigenspaces of commuting pairs; 1-dim factors add nothing new.
    for gi in range(len(elements)):
        for gj in range(gi + 1, len(elements)):
            g, h = elements[gi], elements[gj]
            if perm_mul(g, h) != perm_mul(h, g):
                continue
            pg, ph = mats[g], mats[h]
            for lam, basis_g in spaces[g]:
                if len(basis_g) < 2:
                    continue
                sg = _shifted(pg, lam)
                for mu, basis_h in spaces[h]:
                    if len(basis_h) < 2:
                        continue
                    basis = nullspace(_stack([sg, _shifted(ph, mu)]))
                    if basis:
                        bag.add_space(basis, budget)
    return bag.vectors, truncated


# -- fast exact screens -------------------------------------------------------------


def _has_orbit_collision(dims: Sequence[int], vec: tuple[Cyc, ...]) -> bool:
    # A fiducial stabilized (projectively) by a non-identity displacement has
    # colliding orbit projectors, hence a deficient Gram matrix.
    for op in enumerate_group(dims):
        if op.is_identity():
            continue
        moved = pauli_apply(op, dims, list(vec))
        ratio = None
        proportional = True
        for x, y in zip(vec, moved):
            if x.is_zero() != y.is_zero():
                proportional = False
                break
            if x.is_zero():
                continue
            r = y / x
            if ratio is None:
                ratio = r
            elif r != ratio:
                proportional = False
                break
        if proportional:
            return True
    return False


def _modp_gram_rank(dims: Sequence[int], vec: tuple[Cyc, ...], seed: int = 0) -> int:
    """Rank of the orbit Gram matrix modulo a split prime (exact lower bound)."""
    n = phase_conductor(dims)
    for x in vec:
        n = n * x.n // gcd(n, x.n)
    d = total_dim(dims)
    attempt = 0
    while True:
        p = _smallest_prime_congruent(n, 10_000 + 977 * (seed + attempt))
        w = _root_of_unity_modp(n, p)
        wpow = [pow(w, j, p) for j in range(n)]

        def map_cyc(x: Cyc) -> int:
            v = sum(c * wpow[(j * (n // x.n)) % n] for j, c in enumerate(x.nums) if c) % p
            return v * pow(x.den, p - 2, p) % p

        fwd = [map_cyc(x) for x in vec]
        bwd = [map_cyc(x.conj()) for x in vec]
        norm2 = sum(a * b for a, b in zip(fwd, bwd)) % p
        if norm2 == 0:
            attempt += 1
            continue
        vecs_f, vecs_b = [], []
        L = phase_conductor(dims)
        for op in enumerate_group(dims):
            vf = [0] * d
            vb = [0] * d
            for j in range(d):
                digits = _digits(j, dims)
                target = 0
                exponent = 0
                for f, jt, (a, b) in zip(dims, digits, op.labels):
                    target = target * f + (jt + a) % f
                    exponent += b * jt * (L // f)
                e = exponent % L
                ph = wpow[(e * (n // L)) % n]
                phc = wpow[(-e * (n // L)) % n]
                vf[target] = fwd[j] * ph % p
                vb[target] = bwd[j] * phc % p
            vecs_f.append(vf)
            vecs_b.append(vb)
        m = [[0] * (d * d) for _ in range(d * d)]
        for i in range(d * d):
            bi = vecs_b[i]
            for j in range(d * d):
                fj = vecs_f[j]
                m[i][j] = sum(a * b for a, b in zip(bi, fj)) % p
        gram = [
            [m[i][j] * m[j][i] % p for j in range(d * d)] for i in range(d * d)
        ]
        return _rank_modp(gram, p)


# -- the search -----------------------------------------------------------------------


def search_ic(pair: PermPair, dims: Sequence[int], budget: SearchBudget | None = None) -> SearchResult:
    """Certify every candidate and return the IC certificates, deduplicated by
    (trace spectrum, angle spectrum) and deterministically ordered."""
    dims = tuple(dims)
    if total_dim(dims) != pair.mu:
        raise ValueError("product of tensor factors must equal the subgroup index")
    budget = budget or SearchBudget()
    candidates, truncated = candidate_fiducials(pair, budget)
    d2 = pair.mu * pair.mu
    certs: list[ICCertificate] = []
    seen_spectra = set()
    for vec in candidates:
        if _has_orbit_collision(dims, vec):
            continue
        if _modp_gram_rank(dims, vec, seed=0) < d2 and _modp_gram_rank(dims, vec, seed=1) < d2:
            # Prove the deficiency exactly on the (cheap) vectorization matrix.
            orbit = Orbit(Fiducial(dims, vec))
            if _vectorization_rank(orbit) < d2:
                continue
        cert = verify(Fiducial(dims, vec))
        if not cert.is_ic:
            continue
        key = (
            tuple(v.key() for v, _m in cert.trace_spectrum)
            + tuple((a.norm_of_value, a.norm_of_abs_square, a.multiplicity) for a in cert.angle_spectrum)
        )
        if key in seen_spectra:
            continue
        seen_spectra.add(key)
        certs.append(cert)
    certs.sort(key=lambda c: (c.pp, [v.to_string() for v, _m in c.trace_spectrum], c.fiducial))
    return SearchResult(tuple(certs), truncated, len(candidates))


def _vectorization_rank(orbit: Orbit) -> int:
    rows = []
    for v in orbit.vectors:
        conj = [x.conj() for x in v]
        rows.append([a * b for a in v for b in conj])
    return Mat(rows).rank()
