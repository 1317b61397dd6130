"""Coadjoint orbits: skew forms, polarizations and an orbit canonical form."""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg as la
from .errors import DimensionMismatch, NormalizationFailure, NotASubalgebra, OddRank
from .group import GroupElement, coadjoint_apply, inverse, multiply
from .lie import NilpotentAlgebra, is_subalgebra, jordan_holder_basis
from .linalg import Subspace


def _functional(A, ell):
    if len(ell) != A.dim:
        raise DimensionMismatch(f"functional of length {len(ell)} on an algebra of dimension {A.dim}")
    return tuple(A.field(c) for c in ell)


def evaluate(ell, v):
    return la.dot(ell, v)


def skew_form(A: NilpotentAlgebra, ell):
    """B[i][j] = ell([e_i, e_j])."""
    ell = _functional(A, ell)
    n = A.dim
    B = [[A.field.zero] * n for _ in range(n)]
    for i, j, k, c in A.terms:
        val = c * ell[k]
        if val:
            B[i][j] += val
            B[j][i] -= val
    return B


def stabilizer_algebra(A: NilpotentAlgebra, ell) -> Subspace:
    """Radical of the skew form: the Lie algebra of the coadjoint stabilizer."""
    B = skew_form(A, ell)
    return Subspace.span(la.nullspace(B, A.dim, A.field), A.dim, A.field)


def orbit_dim(A: NilpotentAlgebra, ell) -> int:
    r = la.rank(skew_form(A, ell), A.field)
    if r % 2:
        raise OddRank(f"skew form of rank {r}")
    return r


def is_subordinate(A, ell, V: Subspace) -> bool:
    ell = _functional(A, ell)
    return all(
        not la.dot(ell, A.bracket(a, b)) for idx, a in enumerate(V.basis) for b in V.basis[idx + 1 :]
    )


def is_polarized(A: NilpotentAlgebra, ell, V):
    """(verdict, reason): V is subordinate to ell and of maximal dimension."""
    V = V if isinstance(V, Subspace) else Subspace.span(V, A.dim, A.field)
    if not is_subalgebra(A, V):
        raise NotASubalgebra("is_polarized expects a subalgebra")
    if not is_subordinate(A, ell, V):
        return False, "not subordinate: ell([V, V]) != 0"
    target = A.dim - orbit_dim(A, ell) // 2
    if V.dim != target:
        return False, f"subordinate but dim V = {V.dim}, maximal dimension is {target}"
    return True, "polarized"


@dataclass(frozen=True)
class PolarizedPair:
    functional: tuple
    subalgebra: Subspace
    orbit_dim: int
    subordinate_checked: bool = True


def _flag_vectors(A, flag):
    if flag is None:
        return jordan_holder_basis(A)
    vectors = tuple(tuple(A.field(c) for c in f) for f in flag)
    if len(vectors) != A.dim:
        raise DimensionMismatch("a flag needs one adapted vector per dimension")
    return vectors


def vergne_polarization(A: NilpotentAlgebra, ell, flag=None) -> PolarizedPair:
    """Sum over the flag of the radicals of ell restricted to each step.

    ``flag`` is a sequence of adapted vectors f_1..f_n with every
    span(f_1..f_i) an ideal; it defaults to the Jordan-Hoelder basis.
    """
    ell = _functional(A, ell)
    F = _flag_vectors(A, flag)
    n = A.dim
    Bf = [[la.dot(ell, A.bracket(F[a], F[b])) for b in range(n)] for a in range(n)]
    pieces = []
    for i in range(1, n + 1):
        block = [row[:i] for row in Bf[:i]]
        for x in la.nullspace(block, i, A.field):
            pieces.append(la.combination(x, F[:i], n, A.field))
    V = Subspace.span(pieces, n, A.field)
    ok, reason = is_polarized(A, ell, V)
    if not ok:
        raise NormalizationFailure(f"Vergne construction not polarized ({reason})")
    return PolarizedPair(ell, V, orbit_dim(A, ell))


@dataclass(frozen=True)
class OrbitCanonicalForm:
    jump_set: tuple  # 1-based flag indices
    canonical_rep: tuple
    conjugator: GroupElement

    def same_class(self, other: "OrbitCanonicalForm") -> bool:
        return self.jump_set == other.jump_set and self.canonical_rep == other.canonical_rep


def orbit_canonical_form(A: NilpotentAlgebra, ell, flag=None, acting=None) -> OrbitCanonicalForm:
    """Normalize ell along the flag from the bottom up.

    At step i the stabilizer of ell restricted to span(f_1..f_{i-1}) inside
    the acting algebra moves coordinate ell(f_i) affinely; if it moves at all,
    i is a jump and the coordinate is set to 0, otherwise it is frozen.
    The result depends only on the orbit of ell under exp(acting), which
    defaults to the whole algebra.
    """
    ell = _functional(A, ell)
    n = A.dim
    field = A.field
    F = _flag_vectors(A, flag)
    H = list(acting.basis) if acting is not None else [A.unit(a) for a in range(n)]
    # brackets[a][j] = [h_a, f_j]
    brackets = [[A.bracket(h, f) for f in F] for h in H]
    cur = ell
    conj = GroupElement.identity(A)
    jumps = []
    for i in range(n):
        rows = [[la.dot(cur, brackets[a][j]) for a in range(len(H))] for j in range(i)]
        if rows:
            coeffs = la.nullspace(rows, len(H), field)
        else:
            coeffs = [la.unit(len(H), a, field) for a in range(len(H))]
        stab = Subspace.span([la.combination(c, H, n, field) for c in coeffs], n, field)
        for X in stab.basis:
            rate = la.dot(cur, A.bracket(X, F[i]))
            if rate:
                t = la.dot(cur, F[i]) / rate
                if t:
                    g = GroupElement.exp(A, la.scale(t, X))
                    cur = coadjoint_apply(g, cur)
                    conj = multiply(g, conj)
                if la.dot(cur, F[i]):
                    raise NormalizationFailure(i + 1)
                jumps.append(i + 1)
                break
    if coadjoint_apply(conj, ell) != cur:
        raise NormalizationFailure(n)
    return OrbitCanonicalForm(tuple(jumps), cur, conj)


def same_orbit(A: NilpotentAlgebra, ell, ell2, flag=None, acting=None):
    """(verdict, conjugator g with coadjoint(g) ell = ell2, or None)."""
    ell = _functional(A, ell)
    ell2 = _functional(A, ell2)
    c1 = orbit_canonical_form(A, ell, flag, acting)
    c2 = orbit_canonical_form(A, ell2, flag, acting)
    if not c1.same_class(c2):
        return False, None
    g = multiply(inverse(c2.conjugator), c1.conjugator)
    if coadjoint_apply(g, ell) != ell2:
        raise NormalizationFailure(A.dim)
    return True, g


def central_values(A: NilpotentAlgebra, ell) -> tuple:
    """ell on the echelon basis of the center; constant along coadjoint orbits."""
    ell = _functional(A, ell)
    return tuple(la.dot(ell, z) for z in A.center.basis)


def twist(ell, a):
    """ell -> a^{-1} ell (the effect of rescaling the additive character by a)."""
    return tuple(c / a for c in ell)
