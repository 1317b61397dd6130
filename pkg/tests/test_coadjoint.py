from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kirillov import linalg as la
from kirillov.catalog import CORE_ALGEBRAS, entry
from kirillov.coadjoint import (
    central_values,
    is_polarized,
    orbit_canonical_form,
    orbit_dim,
    same_orbit,
    skew_form,
    stabilizer_algebra,
    twist,
    vergne_polarization,
)
from kirillov.errors import NotASubalgebra
from kirillov.finite_model import orbit_bfs, reduce_mod_p, reduce_vector
from kirillov.group import GroupElement, coadjoint_apply
from kirillov.lie import load_algebra
from kirillov.linalg import Subspace

from conftest import vec, vectors

_cache = {}


def algebra(name):
    if name not in _cache:
        _cache[name] = entry(name).algebra()
    return _cache[name]


algebra_names = st.sampled_from(CORE_ALGEBRAS)
Z = vec(0, 0, 1)


def span(*vs):
    return Subspace.span([vec(*v) for v in vs], 3)


def test_skew_form_examples(h3):
    assert skew_form(h3, Z) == [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]
    assert skew_form(h3, vec(0, 0, 0)) == [[0] * 3 for _ in range(3)]
    ab = load_algebra({"name": "ab", "dim": 2, "basis": ["a", "b"], "brackets": []})
    assert skew_form(ab, vec(3, 4)) == [[0, 0], [0, 0]]


def test_stabilizer_and_orbit_dim(h3, h5):
    assert stabilizer_algebra(h3, Z) == span((0, 0, 1))
    assert orbit_dim(h3, Z) == 2
    assert stabilizer_algebra(h3, vec(0, 0, 0)).dim == 3
    assert orbit_dim(h3, vec(0, 0, 0)) == 0
    assert orbit_dim(h5, vec(0, 0, 0, 0, 1)) == 4


def test_is_polarized_examples(h3):
    assert is_polarized(h3, Z, span((0, 1, 0), (0, 0, 1)))[0]
    ok, reason = is_polarized(h3, Z, span((0, 0, 1)))
    assert not ok and "dim" in reason
    ok, reason = is_polarized(h3, Z, Subspace.full(3))
    assert not ok and "subordinate" in reason
    with pytest.raises(NotASubalgebra):
        is_polarized(h3, Z, span((1, 0, 0), (0, 1, 0)))


def test_vergne_examples(h3, n4):
    assert vergne_polarization(h3, Z).subalgebra == span((0, 1, 0), (0, 0, 1))
    assert vergne_polarization(h3, vec(0, 0, 0)).subalgebra.dim == 3
    pair = vergne_polarization(n4, vec(0, 0, 1, 0, 0, 0))
    assert pair.subalgebra.dim == 4
    assert is_polarized(n4, pair.functional, pair.subalgebra)[0]


@given(algebra_names, st.data())
def test_fact_one(name, data):
    A = algebra(name)
    ell = data.draw(vectors(A.dim))
    r = la.rank(skew_form(A, ell))
    assert r % 2 == 0 and orbit_dim(A, ell) == r
    V = vergne_polarization(A, ell).subalgebra
    assert V.dim == A.dim - r // 2
    assert all(la.dot(ell, A.bracket(a, b)) == 0 for a in V.basis for b in V.basis)


def test_canonical_form_examples(h3):
    cf = orbit_canonical_form(h3, vec(5, 0, 1))
    assert cf.canonical_rep == Z
    assert cf.jump_set == (2, 3)
    assert coadjoint_apply(cf.conjugator, vec(5, 0, 1)) == Z
    cf0 = orbit_canonical_form(h3, vec(0, 0, 0))
    assert cf0.canonical_rep == vec(0, 0, 0) and cf0.jump_set == () and cf0.conjugator.is_identity()


@given(algebra_names, st.data())
def test_canonical_form_is_orbit_invariant(name, data):
    A = algebra(name)
    ell = data.draw(vectors(A.dim))
    g = GroupElement.exp(A, data.draw(vectors(A.dim)))
    moved = coadjoint_apply(g, ell)
    cf, cf2 = orbit_canonical_form(A, ell), orbit_canonical_form(A, moved)
    assert cf.same_class(cf2)
    assert len(cf.jump_set) == orbit_dim(A, ell)
    assert coadjoint_apply(cf.conjugator, ell) == cf.canonical_rep
    # central values are orbit invariants
    assert central_values(A, ell) == central_values(A, moved)
    same, h = same_orbit(A, ell, moved)
    assert same and coadjoint_apply(h, ell) == moved


def test_same_orbit_examples(h3):
    same, g = same_orbit(h3, Z, Z)
    assert same and g.is_identity()
    assert not same_orbit(h3, Z, vec(0, 0, 2))[0]
    same, g = same_orbit(h3, Z, vec(0, 3, 1))
    assert same and coadjoint_apply(g, Z) == vec(0, 3, 1)


def test_twist_scales(h3):
    assert twist(vec(2, 4, 6), 2) == vec(1, 2, 3)


@pytest.mark.parametrize("name,p", [("heisenberg3", 5), ("n4", 5), ("free2", 3)])
def test_same_orbit_against_finite_bfs(name, p):
    # integral functionals with distinct canonical data mod p; same over Q => same mod p
    import random

    A = algebra(name)
    FA = reduce_mod_p(A, p)
    rng = random.Random(f"{name}{p}")
    for _ in range(10):
        ell = tuple(Fraction(rng.randint(-2, 2)) for _ in range(A.dim))
        g = GroupElement.exp(A, [Fraction(rng.randint(-2, 2)) for _ in range(A.dim)])
        other = coadjoint_apply(g, ell)
        if not all(c.denominator % p for c in other):
            continue
        orbit = orbit_bfs(FA, reduce_vector(ell, p))
        assert orbit.contains_code(int(FA.encode(FA.vector(reduce_vector(other, p)))))
