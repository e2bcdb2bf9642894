"""Finite-index subgroups of the modular group as transitive permutation pairs.

A subgroup of index mu is encoded by permutations (sigma_e, sigma_v) of
{0..mu-1} with sigma_e^2 = sigma_v^3 = identity and transitive joint action
(the images of the order-2 and order-3 generators on the cosets).  The module
enumerates conjugacy classes, computes geometric signatures (elliptic point
counts, cusp widths, genus, level) and decides congruence by an exact
principal-congruence-subgroup containment test.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Iterator, Sequence

from .exactlinalg import Mat

__all__ = [
    "PermPair",
    "Signature",
    "ResourceLimitError",
    "enumerate_index",
    "signature",
    "is_congruence",
    "gamma0",
    "gamma",
    "perm_matrices",
    "group_order",
    "perm_mul",
    "perm_order",
    "cycles_of",
    "format_cycles",
    "parse_cycles",
]


class ResourceLimitError(Exception):
    """Raised when a computation exceeds its configured resource bound."""


# -- permutation helpers (tuples of images, 0-based) ---------------------------


def perm_mul(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """Product 'apply p, then q' (right-action convention)."""
    return tuple(q[p[i]] for i in range(len(p)))


def perm_inverse(p: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_order(p: Sequence[int]) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), (len(c) for c in cycles_of(p)), 1)


def cycles_of(p: Sequence[int]) -> list[tuple[int, ...]]:
    """Disjoint cycles including fixed points, each rotated to start at its minimum."""
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        j = p[start]
        while j != start:
            cyc.append(j)
            seen[j] = True
            j = p[j]
        out.append(tuple(cyc))
    return out


def format_cycles(p: Sequence[int]) -> str:
    """1-based cycle notation, fixed points omitted; identity prints '()'."""
    parts = [
        "(" + ",".join(str(x + 1) for x in c) + ")" for c in cycles_of(p) if len(c) > 1
    ]
    return "".join(parts) if parts else "()"


def parse_cycles(s: str, mu: int) -> tuple[int, ...]:
    """Parse 1-based cycle notation into a permutation of {0..mu-1}."""
    out = list(range(mu))
    body = s.strip()
    if body in ("", "()"):
        return tuple(out)
    if not (body.startswith("(") and body.endswith(")")):
        raise ValueError(f"malformed cycle string: {s!r}")
    for chunk in body[1:-1].split(")("):
        pts = [int(x) - 1 for x in chunk.split(",") if x.strip()]
        if any(not 0 <= x < mu for x in pts) or len(set(pts)) != len(pts):
            raise ValueError(f"bad cycle {chunk!r} for degree {mu}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            out[a] = b
    return tuple(out)


def _is_transitive(mu: int, *perms: Sequence[int]) -> bool:
    seen = [False] * mu
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        x = stack.pop()
        for p in perms:
            y = p[x]
            if not seen[y]:
                seen[y] = True
                count += 1
                stack.append(y)
    return count == mu


# -- core types -----------------------------------------------------------------


@dataclass(frozen=True)
class PermPair:
    """A finite-index subgroup encoded by the generator images on cosets."""

    mu: int
    sigma_e: tuple[int, ...]
    sigma_v: tuple[int, ...]

    def __post_init__(self):
        if len(self.sigma_e) != self.mu or len(self.sigma_v) != self.mu:
            raise ValueError("permutation degree does not match index")
        ident = tuple(range(self.mu))
        if perm_mul(self.sigma_e, self.sigma_e) != ident:
            raise ValueError("sigma_e is not an involution")
        if perm_mul(perm_mul(self.sigma_v, self.sigma_v), self.sigma_v) != ident:
            raise ValueError("sigma_v does not have order dividing 3")
        if not _is_transitive(self.mu, self.sigma_e, self.sigma_v):
            raise ValueError("the pair does not act transitively")

    @property
    def sigma_t(self) -> tuple[int, ...]:
        """Image of the translation T = e*v (apply e, then v)."""
        return perm_mul(self.sigma_e, self.sigma_v)

    def canonical(self) -> "PermPair":
        """Conjugacy-class canonical form: lexicographic minimum over the
        breadth-first relabelings (edge order e, v, v^2) rooted at each point."""
        best = None
        for root in range(self.mu):
            relabel = self._bfs_relabel(root)
            e_new = tuple(
                relabel[self.sigma_e[x]] for x in sorted(range(self.mu), key=relabel.__getitem__)
            )
            v_new = tuple(
                relabel[self.sigma_v[x]] for x in sorted(range(self.mu), key=relabel.__getitem__)
            )
            cand = (e_new, v_new)
            if best is None or cand < best:
                best = cand
        return PermPair(self.mu, best[0], best[1])

    def _bfs_relabel(self, root: int) -> list[int]:
        vv = perm_mul(self.sigma_v, self.sigma_v)
        relabel = [-1] * self.mu
        relabel[root] = 0
        queue = [root]
        nxt = 1
        for x in queue:
            for p in (self.sigma_e, self.sigma_v, vv):
                y = p[x]
                if relabel[y] < 0:
                    relabel[y] = nxt
                    nxt += 1
                    queue.append(y)
        return relabel

    def to_json(self) -> dict:
        return {
            "index": self.mu,
            "sigma_e": format_cycles(self.sigma_e),
            "sigma_v": format_cycles(self.sigma_v),
        }

    @staticmethod
    def from_cycles(mu: int, e: str, v: str) -> "PermPair":
        return PermPair(mu, parse_cycles(e, mu), parse_cycles(v, mu))


@dataclass(frozen=True)
class Signature:
    """Geometric invariants of a finite-index subgroup."""

    index: int
    genus: int
    nu2: int
    nu3: int
    cusp_widths: tuple[int, ...]
    level: int
    congruence: bool

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "genus": self.genus,
            "nu2": self.nu2,
            "nu3": self.nu3,
            "cusp_widths": list(self.cusp_widths),
            "level": self.level,
            "congruence": self.congruence,
        }

    def cusp_label(self) -> str:
        """Width multiset in compact exponent form, e.g. '1^1 6^1'."""
        counts: dict[int, int] = {}
        for w in self.cusp_widths:
            counts[w] = counts.get(w, 0) + 1
        return " ".join(f"{w}^{c}" for w, c in sorted(counts.items()))

    def nc_label(self) -> str:
        return f"NC({self.genus},{self.level},{self.nu2},{self.nu3},[{self.cusp_label()}])"


# -- signature computation --------------------------------------------------------


def signature(pair: PermPair) -> Signature:
    """Elliptic point counts, cusp widths, genus, level and congruence flag."""
    nu2 = sum(1 for i, j in enumerate(pair.sigma_e) if i == j)
    nu3 = sum(1 for i, j in enumerate(pair.sigma_v) if i == j)
    widths = tuple(sorted(len(c) for c in cycles_of(pair.sigma_t)))
    level = reduce(lambda a, b: a * b // gcd(a, b), widths, 1)
    genus_num = 12 + pair.mu - 3 * nu2 - 4 * nu3 - 6 * len(widths)
    if genus_num % 12 != 0 or genus_num < 0:
        raise ValueError(
            f"inconsistent invariants: genus formula gives {genus_num}/12 "
            f"for index {pair.mu}, nu2={nu2}, nu3={nu3}, cusps={widths}"
        )
    return Signature(
        index=pair.mu,
        genus=genus_num // 12,
        nu2=nu2,
        nu3=nu3,
        cusp_widths=widths,
        level=level,
        congruence=is_congruence(pair),
    )


# -- enumeration up to conjugacy ---------------------------------------------------


def _involutions(mu: int) -> Iterator[tuple[int, ...]]:
    # All involutions of {0..mu-1}, generated by pairing the smallest free point.
    def rec(free: list[int], current: list[int]) -> Iterator[tuple[int, ...]]:
        if not free:
            yield tuple(current)
            return
        x = free[0]
        rest = free[1:]
        current[x] = x
        yield from rec(rest, current)
        for k, y in enumerate(rest):
            current[x], current[y] = y, x
            yield from rec(rest[:k] + rest[k + 1 :], current)
        current[x] = x

    yield from rec(list(range(mu)), list(range(mu)))


def _standard_v(mu: int, triples: int) -> tuple[int, ...]:
    # v = (0,1,2)(3,4,5)... with `triples` consecutive 3-cycles, rest fixed.
    out = list(range(mu))
    for t in range(triples):
        a = 3 * t
        out[a], out[a + 1], out[a + 2] = a + 1, a + 2, a
    return tuple(out)


def enumerate_index(mu: int, limit: int = 10) -> list[PermPair]:
    """Canonical representatives of all conjugacy classes of index-mu subgroups.

    Every transitive pair is conjugate to one whose order-3 permutation is in
    the standard form (0,1,2)(3,4,5)...; enumerating all involutions against
    those and reducing to canonical form therefore covers every class.
    """
    if mu < 1:
        raise ValueError("index must be positive")
    if mu > limit:
        raise ResourceLimitError(f"index {mu} exceeds the configured limit {limit}")
    seen: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    out: list[PermPair] = []
    for triples in range(mu // 3 + 1):
        sv = _standard_v(mu, triples)
        for se in _involutions(mu):
            if not _is_transitive(mu, se, sv):
                continue
            canon = PermPair(mu, se, sv).canonical()
            key = (canon.sigma_e, canon.sigma_v)
            if key not in seen:
                seen.add(key)
                out.append(canon)
    out.sort(key=lambda p: (p.sigma_e, p.sigma_v))
    return out


# -- named congruence subgroups -----------------------------------------------------


_S_MAT = (0, -1, 1, 0)
_T_MAT = (1, 1, 0, 1)


def _mat_mul(a: tuple[int, ...], b: tuple[int, ...], n: int) -> tuple[int, ...]:
    return (
        (a[0] * b[0] + a[1] * b[2]) % n,
        (a[0] * b[1] + a[1] * b[3]) % n,
        (a[2] * b[0] + a[3] * b[2]) % n,
        (a[2] * b[1] + a[3] * b[3]) % n,
    )


def _psl2_canonical(m: tuple[int, ...], n: int) -> tuple[int, ...]:
    m = tuple(x % n for x in m)
    neg = tuple((-x) % n for x in m)
    return min(m, neg)


def gamma0(N: int) -> PermPair:
    """Coset action of Gamma_0(N): the generators acting on P^1(Z/NZ)."""
    if N < 1:
        raise ValueError("N must be positive")
    units = [u for u in range(1, N) if gcd(u, N) == 1] or [1]

    def canon(c: int, d: int) -> tuple[int, int]:
        return min(((u * c) % N, (u * d) % N) for u in units)

    points = sorted(
        {
            canon(c, d)
            for c in range(N)
            for d in range(N)
            if gcd(gcd(c, d), N) == 1
        }
    )
    index = {pt: i for i, pt in enumerate(points)}

    def act(mat: tuple[int, ...]) -> tuple[int, ...]:
        a, b, c2, d2 = mat
        out = []
        for (c, d) in points:
            out.append(index[canon((c * a + d * c2) % N, (c * b + d * d2) % N)])
        return tuple(out)

    sv_mat = _mat_mul(_S_MAT, _T_MAT, N)  # the order-3 generator S*T
    return PermPair(len(points), act(tuple(x % N for x in _S_MAT)), act(sv_mat))


def _psl2_elements(N: int) -> tuple[list[tuple[int, ...]], dict, list[list[int]]]:
    # BFS closure of PSL(2, Z/N) from the identity under right multiplication
    # by S and T; returns (elements, index map, successor table [iS, iT]).
    ident = _psl2_canonical((1, 0, 0, 1), N)
    elements = [ident]
    index = {ident: 0}
    succ: list[list[int]] = []
    gens = [_psl2_canonical(_S_MAT, N), _psl2_canonical(_T_MAT, N)]
    head = 0
    while head < len(elements):
        g = elements[head]
        row = []
        for x in gens:
            h = _psl2_canonical(_mat_mul(g, x, N), N)
            if h not in index:
                index[h] = len(elements)
                elements.append(h)
            row.append(index[h])
        succ.append(row)
        head += 1
    return elements, index, succ


def gamma(N: int) -> PermPair:
    """Coset action of the principal congruence subgroup Gamma(N).

    The cosets are the elements of PSL(2, Z/NZ); the index is computed from
    the constructed action (|SL(2,Z/N)| halved for N > 2).
    """
    if N < 1:
        raise ValueError("N must be positive")
    elements, index, succ = _psl2_elements(N)
    se = tuple(succ[i][0] for i in range(len(elements)))
    st = tuple(succ[i][1] for i in range(len(elements)))
    sv = perm_mul(se, st)  # v = S*T, right-action product
    return PermPair(len(elements), se, sv)


# -- congruence test ------------------------------------------------------------------


def is_congruence(pair: PermPair) -> bool:
    """True iff the subgroup contains the principal congruence subgroup of its
    generalized level N (the Wohlfahrt criterion).

    The homomorphism sending e -> sigma_e, T -> sigma_T kills Gamma(N) exactly
    when it factors through PSL(2, Z/N); this is checked on the full right
    Cayley graph of PSL(2, Z/N), which verifies triviality of all Schreier
    generators of Gamma(N) at once.
    """
    widths = [len(c) for c in cycles_of(pair.sigma_t)]
    N = reduce(lambda a, b: a * b // gcd(a, b), widths, 1)
    elements, index, succ = _psl2_elements(N)
    ident = tuple(range(pair.mu))
    phi_gens = [pair.sigma_e, pair.sigma_t]
    perms: list[tuple[int, ...] | None] = [None] * len(elements)
    perms[0] = ident
    order = [0]
    head = 0
    while head < len(order):
        i = order[head]
        for gen_idx, phi_gen in enumerate(phi_gens):
            j = succ[i][gen_idx]
            candidate = perm_mul(perms[i], phi_gen)
            if perms[j] is None:
                perms[j] = candidate
                order.append(j)
            elif perms[j] != candidate:
                return False
        head += 1
    return True


# -- matrices and group order -----------------------------------------------------------


def perm_matrices(pair: PermPair) -> tuple[Mat, Mat]:
    """0/1 gate matrices with row i carrying a one in column sigma(i)."""
    return permutation_matrix(pair.sigma_e), permutation_matrix(pair.sigma_v)


def permutation_matrix(p: Sequence[int]) -> Mat:
    n = len(p)
    return Mat([[1 if j == p[i] else 0 for j in range(n)] for i in range(n)])


def group_order(pair: PermPair, max_order: int = 10**9) -> int:
    """Order of <sigma_e, sigma_v> by a stabilizer chain (Schreier's lemma)."""
    order = _subgroup_order([pair.sigma_e, pair.sigma_v], max_order)
    return order


def _subgroup_order(gens: list[tuple[int, ...]], max_order: int) -> int:
    gens = [g for g in set(gens) if any(i != x for i, x in enumerate(g))]
    if not gens:
        return 1
    n = len(gens[0])
    base = min(i for g in gens for i, x in enumerate(g) if x != i)
    # orbit of the base point with a transversal of coset representatives
    transversal: dict[int, tuple[int, ...]] = {base: tuple(range(n))}
    queue = [base]
    for x in queue:
        for g in gens:
            y = g[x]
            if y not in transversal:
                transversal[y] = perm_mul(transversal[x], g)
                queue.append(y)
    stab_gens = set()
    for x, ux in transversal.items():
        for g in gens:
            uxg = perm_mul(ux, g)
            s = perm_mul(uxg, perm_inverse(transversal[g[x]]))
            stab_gens.add(s)
    sub = _subgroup_order(list(stab_gens), max_order)
    total = len(transversal) * sub
    if total > max_order:
        raise ResourceLimitError(f"group order exceeds bound {max_order}")
    return total
