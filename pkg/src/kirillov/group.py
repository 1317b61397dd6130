"""The unipotent group in exponential coordinates.

Group elements are stored by the coordinates of their logarithm. The product
is the Baker-Campbell-Hausdorff series in Dynkin's form, which terminates at
the nilpotency class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from . import linalg as la
from .errors import AlgebraMismatch, ConstructionFailure, DimensionMismatch, NotASubalgebra
from .lie import NilpotentAlgebra, is_subalgebra, normalizer
from .linalg import Subspace


def _block_splits(word):
    """Ways to cut ``word`` into consecutive nonempty blocks of the shape X^r Y^s."""
    if not word:
        yield []
        return
    for end in range(1, len(word) + 1):
        block = word[:end]
        # X* Y* : no 'X' after a 'Y'
        if "YX" in block:
            break
        for rest in _block_splits(word[end:]):
            yield [block] + rest


@lru_cache(maxsize=None)
def dynkin_coefficients(degree: int) -> tuple:
    """Nonzero coefficients of right-nested words of length ``degree`` in log(e^X e^Y).

    Returns pairs (word, Fraction) where word is a string over "XY" and the
    term is coefficient * [w1, [w2, [..., w_N]]].
    """
    out = []
    for code in range(2**degree):
        word = "".join("Y" if (code >> (degree - 1 - b)) & 1 else "X" for b in range(degree))
        if degree > 1 and word[-1] == word[-2]:
            continue  # the innermost bracket vanishes
        total = Fraction(0)
        for blocks in _block_splits(word):
            k = len(blocks)
            denom = k * degree
            for b in blocks:
                denom *= factorial(b.count("X")) * factorial(b.count("Y"))
            total += Fraction((-1) ** (k - 1), denom)
        if total:
            out.append((word, total))
    return tuple(out)


def bch_denominator_primes(max_degree: int) -> set:
    """Primes dividing some Dynkin coefficient up to the given degree."""
    primes = set()
    for d in range(1, max_degree + 1):
        for _, c in dynkin_coefficients(d):
            q = c.denominator
            f = 2
            while f * f <= q:
                while q % f == 0:
                    primes.add(f)
                    q //= f
                f += 1
            if q > 1:
                primes.add(q)
    return primes


def bch(A: NilpotentAlgebra, v, w, order=None):
    """log(exp(v) exp(w)), truncated at ``order`` (default: the nilpotency class)."""
    n = A.dim
    if len(v) != n or len(w) != n:
        raise DimensionMismatch(f"vectors must have length {n}")
    order = A.nilpotency_class if order is None else order
    v = tuple(A.field(a) for a in v)
    w = tuple(A.field(a) for a in w)
    letters = {"X": v, "Y": w}
    memo = {}

    def nested(word):
        if word in memo:
            return memo[word]
        if len(word) == 1:
            val = letters[word]
        else:
            inner = nested(word[1:])
            val = A.bracket(letters[word[0]], inner) if any(inner) else inner
        memo[word] = val
        return val

    out = list(la.add(v, w))
    for degree in range(2, order + 1):
        for word, coeff in dynkin_coefficients(degree):
            term = nested(word)
            if any(term):
                for k, a in enumerate(term):
                    if a:
                        out[k] += coeff * a
    return tuple(out)


def exp_ad(A: NilpotentAlgebra, v):
    """exp(ad v) as an exact matrix; the series stops at the nilpotency class."""
    n = A.dim
    ad = A.ad(v)
    result = la.identity(n, A.field)
    power = la.identity(n, A.field)
    for k in range(1, A.nilpotency_class):
        power = la.matmul(power, ad, A.field)
        if not any(any(row) for row in power):
            break
        f = Fraction(1, factorial(k))
        result = [[r + f * p for r, p in zip(rrow, prow)] for rrow, prow in zip(result, power)]
    return result


@dataclass(frozen=True)
class GroupElement:
    algebra: NilpotentAlgebra
    log_coords: tuple

    def __post_init__(self):
        if len(self.log_coords) != self.algebra.dim:
            raise DimensionMismatch("log coordinates have the wrong length")

    @classmethod
    def exp(cls, A, v) -> "GroupElement":
        return cls(A, tuple(A.field(a) for a in v))

    @classmethod
    def identity(cls, A) -> "GroupElement":
        return cls(A, A.zero())

    def is_identity(self) -> bool:
        return not any(self.log_coords)

    def __mul__(self, other):
        return multiply(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and self.algebra.same_as(other.algebra)
            and tuple(self.log_coords) == tuple(other.log_coords)
        )

    def __hash__(self):
        return hash(tuple(self.log_coords))


def _check_same(g, h):
    if not g.algebra.same_as(h.algebra):
        raise AlgebraMismatch("group elements belong to different algebras")


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    _check_same(g, h)
    return GroupElement(g.algebra, bch(g.algebra, g.log_coords, h.log_coords))


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(g.algebra, la.neg(g.log_coords))


def product(elements, A=None) -> GroupElement:
    elements = list(elements)
    if not elements:
        return GroupElement.identity(A)
    out = elements[0]
    for g in elements[1:]:
        out = multiply(out, g)
    return out


def adjoint(g: GroupElement):
    """Ad(g) = exp(ad ln g)."""
    return exp_ad(g.algebra, g.log_coords)


def coadjoint(g: GroupElement):
    """Matrix of l -> l o Ad(g^-1) acting on coordinate columns of functionals."""
    return la.transpose(exp_ad(g.algebra, la.neg(g.log_coords)))


def coadjoint_apply(g: GroupElement, ell):
    return la.matvec(coadjoint(g), ell)


# -- complementary bases ----------------------------------------------------


@dataclass(frozen=True)
class ComplementaryBasis:
    """Ordered complement (u_1..u_d) of a subalgebra M with every M + span(u_1..u_j) a subalgebra."""

    algebra: NilpotentAlgebra
    subalgebra: Subspace
    vectors: tuple

    def chain(self) -> list:
        """[M, M + span(u_1), ..., M + span(u_1..u_d)]."""
        A = self.algebra
        return [
            Subspace.span(list(self.subalgebra.basis) + list(self.vectors[:j]), A.dim, A.field)
            for j in range(len(self.vectors) + 1)
        ]

    def verify(self) -> bool:
        chain = self.chain()
        return chain[-1].dim == self.algebra.dim and all(
            s.dim == self.subalgebra.dim + j and is_subalgebra(self.algebra, s) for j, s in enumerate(chain)
        )


def complementary_basis(A: NilpotentAlgebra, M) -> ComplementaryBasis:
    """Grow M one normalizing vector at a time; the normalizer of a proper
    subalgebra of a nilpotent algebra is strictly larger than it."""
    M = M if isinstance(M, Subspace) else Subspace.span(M, A.dim, A.field)
    if not is_subalgebra(A, M):
        raise NotASubalgebra("complementary_basis needs a subalgebra")
    vectors = []
    current = M
    while current.dim < A.dim:
        N = normalizer(A, current)
        u = next((b for b in N.basis if not current.contains(b)), None)
        if u is None:
            raise ConstructionFailure("normalizer of a proper subalgebra did not grow")
        vectors.append(u)
        current = current + Subspace.span([u], A.dim, A.field)
    cb = ComplementaryBasis(A, M, tuple(vectors))
    if not cb.verify():
        raise ConstructionFailure("complementary basis failed its post-hoc check")
    return cb


def phi_coords(B: ComplementaryBasis, m, t) -> GroupElement:
    """exp(m) exp(t_1 u_1) ... exp(t_d u_d)."""
    A = B.algebra
    if len(t) != len(B.vectors):
        raise DimensionMismatch(f"expected {len(B.vectors)} parameters")
    if not B.subalgebra.contains(tuple(m)):
        raise ValueError("m must lie in the subalgebra")
    g = GroupElement.exp(A, m)
    for ti, u in zip(t, B.vectors):
        g = multiply(g, GroupElement.exp(A, la.scale(A.field(ti), u)))
    return g


def phi_inverse(B: ComplementaryBasis, g: GroupElement):
    """Recover (m, t) by peeling exp(t_j u_j) off from the right, j = d .. 1."""
    A = B.algebra
    chain = B.chain()
    d = len(B.vectors)
    t = [A.field.zero] * d
    h = tuple(g.log_coords)
    for j in range(d, 0, -1):
        lower = chain[j - 1]
        u = B.vectors[j - 1]
        # h = m' + t u with m' in lower
        cols = list(lower.basis) + [u]
        coeffs = la.solve(la.transpose(cols), h, A.field)
        if coeffs is None:
            raise ConstructionFailure("log coordinate left the subalgebra chain")
        t[j - 1] = coeffs[-1]
        h = bch(A, h, la.scale(-coeffs[-1], u))
    if not B.subalgebra.contains(h):
        raise ConstructionFailure("residual is not in M")
    return h, tuple(t)
