"""Generalized multi-qudit Pauli (shift/clock) groups.

Displacement operators are X^a Z^b per tensor factor with no phase prefactor:
X|j> = |j+1 mod f>, Z|j> = w_f^j |j>.  Matrices are monomial over Q(zeta_L)
with L the lcm of the factor dimensions; the monomial action and the label
product rule are available without materializing matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .cyclotomic import Cyc
from .exactlinalg import Mat

__all__ = [
    "PauliOp",
    "enumerate_group",
    "displacement",
    "apply",
    "op_product",
    "product_phase_exponent",
    "label_str",
    "total_dim",
    "phase_conductor",
]

_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def total_dim(dims: Sequence[int]) -> int:
    d = 1
    for f in dims:
        if f < 2:
            raise ValueError("tensor factors must be >= 2")
        d *= f
    return d


def phase_conductor(dims: Sequence[int]) -> int:
    """Conductor of the roots of unity generated by the clock operators."""
    L = 1
    for f in dims:
        L = L * f // gcd(L, f)
    return L


@dataclass(frozen=True)
class PauliOp:
    """Displacement labels, one (shift, clock) exponent pair per factor."""

    labels: tuple[tuple[int, int], ...]

    @staticmethod
    def make(dims: Sequence[int], labels: Sequence[Sequence[int]]) -> "PauliOp":
        if len(labels) != len(dims):
            raise ValueError("one (a,b) label per tensor factor required")
        return PauliOp(tuple((a % f, b % f) for (a, b), f in zip(labels, dims)))

    def is_identity(self) -> bool:
        return all(a == 0 and b == 0 for a, b in self.labels)

    def to_json(self) -> list[list[int]]:
        return [list(ab) for ab in self.labels]


def enumerate_group(dims: Sequence[int]) -> list[PauliOp]:
    """All d^2 displacement labels in lexicographic (a1,b1,a2,b2,...) order."""
    ops = [PauliOp(())]
    for f in dims:
        ops = [
            PauliOp(op.labels + ((a, b),))
            for op in ops
            for a in range(f)
            for b in range(f)
        ]
    return ops


def displacement(dims: Sequence[int], op: PauliOp) -> Mat:
    """Kronecker product over factors of X^a Z^b as an exact matrix."""
    _check(dims, op)
    mat: Mat | None = None
    for f, (a, b) in zip(dims, op.labels):
        rows = [[Cyc.zero(f) for _ in range(f)] for _ in range(f)]
        for j in range(f):
            rows[(j + a) % f][j] = Cyc.root(f, b * j)
        factor = Mat(rows)
        mat = factor if mat is None else mat.kron(factor)
    return mat


def apply(op: PauliOp, dims: Sequence[int], vec: Sequence[Cyc]) -> list[Cyc]:
    """Monomial action of the displacement on a vector, without its matrix."""
    _check(dims, op)
    d = total_dim(dims)
    if len(vec) != d:
        raise ValueError(f"vector length {len(vec)} != dimension {d}")
    L = phase_conductor(dims)
    out = [Cyc.zero(1)] * d
    for j in range(d):
        x = vec[j]
        digits = _digits(j, dims)
        target = 0
        exponent = 0
        for f, jt, (a, b) in zip(dims, digits, op.labels):
            target = target * f + (jt + a) % f
            exponent += b * jt * (L // f)
        if x:
            out[target] = Cyc.root(L, exponent % L) * x
        else:
            out[target] = x
    return out


def op_product(dims: Sequence[int], *ops: PauliOp) -> tuple[int, PauliOp]:
    """Product of displacements as (phase exponent over zeta_L, label sum).

    Per factor (X^a Z^b)(X^c Z^e) = w_f^(b*c) X^(a+c) Z^(b+e); the returned
    exponent is against the lcm conductor L of the factors.
    """
    L = phase_conductor(dims)
    acc = [(0, 0)] * len(dims)
    exponent = 0
    for op in ops:
        _check(dims, op)
        nxt = []
        for f, (a, b), (c, e) in zip(dims, acc, op.labels):
            exponent += b * c * (L // f)
            nxt.append(((a + c) % f, (b + e) % f))
        acc = nxt
    return exponent % L, PauliOp(tuple(acc))


def product_phase_exponent(dims: Sequence[int], ops: Sequence[PauliOp]) -> int | None:
    """Phase exponent of the product when it is a scalar, else None."""
    exponent, op = op_product(dims, *ops)
    return exponent if op.is_identity() else None


def label_str(dims: Sequence[int], op: PauliOp) -> str:
    """Readable operator name such as 'Z⊗XZ²'."""
    parts = []
    for (a, b) in op.labels:
        if a == 0 and b == 0:
            parts.append("I")
            continue
        s = ""
        if a:
            s += "X" + (str(a).translate(_SUPERSCRIPTS) if a > 1 else "")
        if b:
            s += "Z" + (str(b).translate(_SUPERSCRIPTS) if b > 1 else "")
        parts.append(s)
    return "⊗".join(parts)


def _digits(j: int, dims: Sequence[int]) -> list[int]:
    out = []
    for f in reversed(dims):
        out.append(j % f)
        j //= f
    return out[::-1]


def _check(dims: Sequence[int], op: PauliOp) -> None:
    if len(op.labels) != len(dims):
        raise ValueError("label count does not match tensor factors")
    for f, (a, b) in zip(dims, op.labels):
        if not (0 <= a < f and 0 <= b < f):
            raise ValueError(f"label ({a},{b}) out of range for factor {f}")
