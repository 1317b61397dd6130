"""Exact linear algebra over an arbitrary field object.

Vectors are tuples, matrices are lists of rows. Nothing here knows about
Lie algebras.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionMismatch
from .fields import QQ

Vector = tuple
Matrix = list


def zeros(n, field=QQ) -> tuple:
    return (field.zero,) * n


def unit(n, i, field=QQ) -> tuple:
    v = [field.zero] * n
    v[i] = field.one
    return tuple(v)


def identity(n, field=QQ) -> list:
    return [list(unit(n, i, field)) for i in range(n)]


def add(v, w):
    return tuple(a + b for a, b in zip(v, w))


def sub(v, w):
    return tuple(a - b for a, b in zip(v, w))


def scale(c, v):
    return tuple(c * a for a in v)


def neg(v):
    return tuple(-a for a in v)


def dot(v, w):
    acc = None
    for a, b in zip(v, w):
        if a and b:
            acc = a * b if acc is None else acc + a * b
    return acc if acc is not None else (v[0] - v[0] if v else 0)


def combination(coeffs, vectors, n, field=QQ):
    out = [field.zero] * n
    for c, vec in zip(coeffs, vectors):
        if c:
            for k, a in enumerate(vec):
                if a:
                    out[k] += c * a
    return tuple(out)


def is_zero(v) -> bool:
    return not any(v)


def transpose(m):
    return [list(col) for col in zip(*m)] if m else []


def matmul(a, b, field=QQ):
    if not a:
        return []
    cols = transpose(b)
    return [[dot(row, col) if cols else field.zero for col in cols] for row in a]


def matvec(m, v):
    return tuple(dot(row, v) for row in m)


def vecmat(v, m):
    """Row vector times matrix."""
    return tuple(dot(v, col) for col in transpose(m))


def mat_eq(a, b) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb)) and len(a) == len(b)


def rref(rows: Sequence[Sequence], field=QQ):
    """Reduced row-echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.one / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                ri = m[i]
                for k in range(c, ncols):
                    if m[r][k]:
                        ri[k] = ri[k] - f * m[r][k]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows, field=QQ) -> int:
    return len(rref(rows, field)[1])


def nullspace(m, ncols=None, field=QQ):
    """Basis of {x : m x = 0}, one vector per free column, in RREF-friendly order."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    red, pivots = rref(m, field) if m else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [field.zero] * ncols
        x[f] = field.one
        for row, pc in zip(red, pivots):
            if row[f]:
                x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(m, rhs, field=QQ):
    """One solution x of m x = rhs, or None when inconsistent."""
    ncols = len(m[0]) if m else 0
    aug = [list(row) + [b] for row, b in zip(m, rhs)]
    red, pivots = rref(aug, field)
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return tuple(x)


def inverse(m, field=QQ):
    n = len(m)
    aug = [list(row) + list(unit(n, i, field)) for i, row in enumerate(m)]
    red, pivots = rref(aug, field)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [list(row[n:]) for row in red]


def determinant(m, field=QQ):
    n = len(m)
    a = [list(r) for r in m]
    det = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return field.zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c]
        inv = field.one / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                for k in range(c, n):
                    a[i][k] = a[i][k] - f * a[c][k]
    return det


@dataclass(frozen=True)
class Subspace:
    """A subspace of F^n stored by its canonical reduced echelon basis.

    Two equal subspaces always carry identical ``basis`` tuples, so equality
    and hashing are structural.
    """

    ambient: int
    basis: tuple
    field: object = QQ

    @classmethod
    def span(cls, vectors, ambient: int, field=QQ) -> "Subspace":
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {ambient}")
        red, _ = rref(vectors, field) if vectors else ([], [])
        return cls(ambient, tuple(red), field)

    @classmethod
    def zero(cls, ambient: int, field=QQ) -> "Subspace":
        return cls(ambient, (), field)

    @classmethod
    def full(cls, ambient: int, field=QQ) -> "Subspace":
        return cls(ambient, tuple(unit(ambient, i, field) for i in range(ambient)), field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple:
        return tuple(next(i for i, a in enumerate(row) if a) for row in self.basis)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.basis)

    def contains(self, v) -> bool:
        if len(v) != self.ambient:
            raise DimensionMismatch("vector length differs from ambient dimension")
        rest = list(v)
        for row, pc in zip(self.basis, self.pivots):
            c = rest[pc]
            if c:
                rest = [a - c * b for a, b in zip(rest, row)]
        return not any(rest)

    def __contains__(self, v):
        return self.contains(v)

    def coordinates(self, v):
        """Coordinates of v in ``basis``; None if v is outside."""
        coords = [v[pc] for pc in self.pivots]
        if combination(coords, self.basis, self.ambient, self.field) != tuple(v):
            return None
        return tuple(coords)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(list(self.basis) + list(other.basis), self.ambient, self.field)

    def intersect(self, other: "Subspace") -> "Subspace":
        # x = sum a_i b_i = sum c_j d_j
        if not self.basis or not other.basis:
            return Subspace.zero(self.ambient, self.field)
        cols = list(self.basis) + [neg(d) for d in other.basis]
        m = transpose(cols)
        sols = nullspace(m, len(cols), self.field)
        vecs = [combination(s[: self.dim], self.basis, self.ambient, self.field) for s in sols]
        return Subspace.span(vecs, self.ambient, self.field)

    def annihilator(self):
        """Basis of the linear forms vanishing on the subspace."""
        if not self.basis:
            return [unit(self.ambient, i, self.field) for i in range(self.ambient)]
        return nullspace(list(self.basis), self.ambient, self.field)

    def complement_units(self):
        """Indices of standard basis vectors completing the subspace (lowest index first)."""
        return [i for i in range(self.ambient) if i not in set(self.pivots)]

    def image(self, m) -> "Subspace":
        return Subspace.span([matvec(m, b) for b in self.basis], self.ambient, self.field)
