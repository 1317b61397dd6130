from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kirillov import linalg as la
from kirillov.catalog import CATALOG_NAMES, CORE_ALGEBRAS, entry
from kirillov.errors import AlgebraMismatch, NotASubalgebra
from kirillov.group import (
    GroupElement,
    adjoint,
    bch,
    bch_denominator_primes,
    coadjoint,
    complementary_basis,
    dynkin_coefficients,
    inverse,
    multiply,
    phi_coords,
    phi_inverse,
)
from kirillov.lie import is_subalgebra
from kirillov.linalg import Subspace

from conftest import vec, vectors

algebra_names = st.sampled_from(CORE_ALGEBRAS)
_cache = {}


def algebra(name):
    if name not in _cache:
        _cache[name] = entry(name).algebra()
    return _cache[name]


def test_bch_heisenberg(h3):
    assert bch(h3, vec(1, 0, 0), vec(0, 1, 0)) == vec(1, 1, Fraction(1, 2))


def test_bch_low_degree_coefficients():
    # right-nested words: [X,Y]/2 is split as XY/4 - YX/4
    assert dict(dynkin_coefficients(1)) == {"X": 1, "Y": 1}
    deg2 = dict(dynkin_coefficients(2))
    assert deg2["XY"] - deg2.get("YX", 0) == Fraction(1, 2)


N4_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def _matrix(v):
    M = [[Fraction(0)] * 4 for _ in range(4)]
    for c, (i, j) in zip(v, N4_PAIRS):
        M[i][j] = Fraction(c)
    return M


def _series(N, coeff):
    out = [[Fraction(0)] * 4 for _ in range(4)]
    P = la.identity(4)
    for k in range(4):
        out = [[out[i][j] + coeff(k) * P[i][j] for j in range(4)] for i in range(4)]
        P = la.matmul(P, N)
    return out


def _expm(N):
    from math import factorial

    return _series(N, lambda k: Fraction(1, factorial(k)))


def _logm(M):
    N = [[M[i][j] - (1 if i == j else 0) for j in range(4)] for i in range(4)]
    return _series(N, lambda k: Fraction((-1) ** (k + 1), k) if k else Fraction(0))


def test_n4_brackets_are_commutators(n4):
    for a in range(6):
        for b in range(6):
            X, Y = _matrix(n4.unit(a)), _matrix(n4.unit(b))
            XY, YX = la.matmul(X, Y), la.matmul(Y, X)
            comm = [[XY[i][j] - YX[i][j] for j in range(4)] for i in range(4)]
            assert _matrix(n4.bracket(n4.unit(a), n4.unit(b))) == comm


@given(st.data())
def test_bch_matches_matrix_exp_log(data):
    # class 3, so degree-3 BCH terms are exercised against an independent route
    n4 = algebra("n4")
    v, w = data.draw(vectors(6)), data.draw(vectors(6))
    expected = _logm(la.matmul(_expm(_matrix(v)), _expm(_matrix(w))))
    assert _matrix(bch(n4, v, w)) == expected


def test_denominator_primes():
    assert bch_denominator_primes(2) == {2}
    assert bch_denominator_primes(3) == {2, 3}


@given(algebra_names, st.data())
def test_bch_inverse_law(name, data):
    A = algebra(name)
    v = data.draw(vectors(A.dim))
    assert la.is_zero(bch(A, v, la.neg(v)))


def test_free2_associativity(free2):
    import random

    rng = random.Random(7)
    for _ in range(50):
        a, b, c = (tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(6)) for _ in range(3))
        assert bch(free2, a, bch(free2, b, c)) == bch(free2, bch(free2, a, b), c)


@given(algebra_names, st.data())
def test_multiply_is_associative(name, data):
    A = algebra(name)
    g, h, k = (GroupElement.exp(A, data.draw(vectors(A.dim))) for _ in range(3))
    assert multiply(multiply(g, h), k) == multiply(g, multiply(h, k))


@given(algebra_names, st.data())
def test_group_axioms(name, data):
    A = algebra(name)
    g = GroupElement.exp(A, data.draw(vectors(A.dim)))
    e = GroupElement.identity(A)
    assert multiply(e, g) == g == multiply(g, e)
    assert multiply(g, inverse(g)).is_identity()


def test_heisenberg_product(h3):
    g = multiply(GroupElement.exp(h3, (1, 0, 0)), GroupElement.exp(h3, (0, 1, 0)))
    assert g.log_coords == vec(1, 1, Fraction(1, 2))


def test_algebra_mismatch(h3, h5):
    with pytest.raises(AlgebraMismatch):
        multiply(GroupElement.identity(h3), GroupElement.identity(h5))


def test_adjoint_examples(h3):
    assert adjoint(GroupElement.exp(h3, (0, 0, 7))) == la.identity(3)
    Ad = adjoint(GroupElement.exp(h3, (1, 0, 0)))
    assert la.matvec(Ad, vec(0, 1, 0)) == vec(0, 1, 1)
    assert la.matvec(Ad, vec(1, 0, 0)) == vec(1, 0, 0)
    assert la.matvec(Ad, vec(0, 0, 1)) == vec(0, 0, 1)


@given(algebra_names, st.data())
def test_adjoint_properties(name, data):
    A = algebra(name)
    g = GroupElement.exp(A, data.draw(vectors(A.dim)))
    h = GroupElement.exp(A, data.draw(vectors(A.dim)))
    a, b = data.draw(vectors(A.dim)), data.draw(vectors(A.dim))
    Ad = adjoint(g)
    # automorphism of the bracket
    assert la.matvec(Ad, A.bracket(a, b)) == A.bracket(la.matvec(Ad, a), la.matvec(Ad, b))
    # homomorphisms
    assert la.matmul(Ad, adjoint(h)) == adjoint(multiply(g, h))
    assert la.matmul(coadjoint(g), coadjoint(h)) == coadjoint(multiply(g, h))
    # unipotent: (Ad - I)^n = 0
    N = [[Ad[i][j] - (1 if i == j else 0) for j in range(A.dim)] for i in range(A.dim)]
    P = la.identity(A.dim)
    for _ in range(A.dim):
        P = la.matmul(P, N)
    assert all(c == 0 for row in P for c in row)


def test_complementary_basis_examples(h3, n4):
    B = complementary_basis(h3, Subspace.span([vec(0, 1, 0), vec(0, 0, 1)], 3))
    assert len(B.vectors) == 1 and B.verify()
    assert complementary_basis(h3, Subspace.full(3)).vectors == ()
    B = complementary_basis(n4, n4.center)
    assert len(B.vectors) == 5
    assert all(is_subalgebra(n4, V) for V in B.chain())
    with pytest.raises(NotASubalgebra):
        complementary_basis(h3, Subspace.span([vec(1, 0, 0), vec(0, 1, 0)], 3))


def test_phi_heisenberg(h3):
    M = Subspace.span([vec(0, 1, 0), vec(0, 0, 1)], 3)
    B = complementary_basis(h3, M)
    assert phi_coords(B, vec(0, 0, 0), (0,)).is_identity()
    m, t = vec(0, 2, 3), (Fraction(5),)
    g = phi_coords(B, m, t)
    assert phi_inverse(B, g) == (m, t)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_phi_round_trip(name):
    import random

    from kirillov.coadjoint import vergne_polarization

    A = entry(name).algebra()
    rng = random.Random(name)
    for _ in range(20):
        ell = tuple(Fraction(rng.randint(-3, 3)) for _ in range(A.dim))
        M = vergne_polarization(A, ell).subalgebra
        B = complementary_basis(A, M)
        m = la.combination([Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in M.basis], M.basis, A.dim)
        t = tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in B.vectors)
        assert phi_inverse(B, phi_coords(B, m, t)) == (m, t)
        g = GroupElement.exp(A, [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(A.dim)])
        assert phi_coords(B, *phi_inverse(B, g)) == g


@given(algebra_names, st.data())
def test_bch_truncation_is_exact(name, data):
    A = algebra(name)
    v, w = data.draw(vectors(A.dim)), data.draw(vectors(A.dim))
    c = A.nilpotency_class
    assert bch(A, v, w) == bch(A, v, w, order=c + 1)
