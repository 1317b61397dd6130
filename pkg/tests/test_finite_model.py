from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kirillov import linalg as la
from kirillov.catalog import entry, involution_pairs
from kirillov.coadjoint import orbit_dim
from kirillov.errors import InadmissiblePrime
from kirillov.finite_model import (
    CyclotomicNumber,
    admissibility_problem,
    conjugacy_classes,
    cross_validate,
    distinction_multiplicity,
    distinction_table,
    distinction_table_arrays,
    exact_gram,
    kirillov_character,
    modular_gram_check,
    orbit_bfs,
    orbit_table,
    rank_mod_p,
    reduce_involution,
    reduce_mod_p,
    reduce_vector,
    vanishing_count,
    verify_character_table,
    _class_value_counts,
)
from kirillov.coadjoint import skew_form
from kirillov.involution import load_involution
from kirillov.lie import load_algebra


@pytest.fixture(scope="module")
def h3_3(h3):
    return reduce_mod_p(h3, 3)


@pytest.fixture(scope="module")
def h3_5(h3):
    return reduce_mod_p(h3, 5)


def abelian(n):
    return load_algebra({"name": "ab", "dim": n, "basis": [f"a{i}" for i in range(n)], "brackets": []})


def test_inadmissible_prime(h3):
    with pytest.raises(InadmissiblePrime) as info:
        reduce_mod_p(h3, 2)
    assert "2" in str(info.value)
    assert admissibility_problem(entry("n4").algebra(), 3) is not None
    assert admissibility_problem(h3, 3) is None


def test_denominator_in_structure_constants():
    A = load_algebra({"name": "t", "dim": 3, "basis": ["x", "y", "z"], "brackets": [{"i": 0, "j": 1, "coeffs": {"2": "1/7"}}]})
    with pytest.raises(InadmissiblePrime):
        reduce_mod_p(A, 7)


def test_heisenberg_mod_3(h3_3):
    assert h3_3.order == 27
    G = h3_3.all_vectors()
    # exponent 3
    assert not np.any(h3_3.power(G, 3))
    assert h3_3.check_associativity()


def test_n4_mod_5(n4):
    FA = reduce_mod_p(n4, 5)
    assert FA.order == 5**6
    assert FA.check_associativity(samples=500)


def test_orbit_bfs_examples(h3_5, h3_3):
    assert orbit_bfs(h3_5, (0, 0, 0)).size == 1
    orb = orbit_bfs(h3_5, (0, 0, 1))
    assert orb.size == 25
    assert {tuple(int(c) for c in e) for e in orb.elements} == {(a, b, 1) for a in range(5) for b in range(5)}
    table = orbit_table(h3_3)
    assert sorted(table.sizes.tolist()) == [1] * 9 + [9, 9]


def test_cyclotomic_arithmetic():
    p = 5
    z = CyclotomicNumber.zeta(p)
    total = CyclotomicNumber.rational(p, 0)
    power = CyclotomicNumber.rational(p, 1)
    for _ in range(p):
        total = total + power
        power = power * z
    assert total == 0
    assert power == 1  # zeta^p
    assert z * z.conjugate() == 1
    assert (z + z.conjugate()).conjugate() == z + z.conjugate()
    assert CyclotomicNumber.rational(p, Fraction(3, 2)).rational_value() == Fraction(3, 2)
    assert z.rational_value() is None


def test_characters_heisenberg_mod_3(h3_3):
    trivial = orbit_bfs(h3_3, (0, 0, 0))
    for g in h3_3.all_vectors():
        assert kirillov_character(h3_3, trivial, g) == 1
    orb = orbit_bfs(h3_3, (0, 0, 1))
    assert kirillov_character(h3_3, orb, (0, 0, 0)) == 3
    assert kirillov_character(h3_3, orb, (0, 0, 1)) == CyclotomicNumber.zeta(3) * 3
    assert kirillov_character(h3_3, orb, (1, 0, 0)) == 0


def test_orthonormality_by_direct_summation(h3_3):
    # independent of the class-based Gram: sum chi_i(g) conj(chi_j(g)) over all 27 elements
    table = orbit_table(h3_3)
    G = h3_3.all_vectors()
    chars = [[kirillov_character(h3_3, table.orbit(i), g) for g in G] for i in range(table.count)]
    for i in range(table.count):
        for j in range(table.count):
            s = CyclotomicNumber.rational(3, 0)
            for a, b in zip(chars[i], chars[j]):
                s = s + a * b.conjugate()
            assert s / 27 == int(i == j)


def test_character_table_reports(h3_3, h5):
    r = verify_character_table(h3_3)
    assert r.ok and r.exact_gram_checked
    assert sorted(r.degrees) == [1] * 9 + [3, 3]
    r = verify_character_table(reduce_mod_p(abelian(2), 5))
    assert r.ok and r.degrees == [1] * 25
    r = verify_character_table(reduce_mod_p(h5, 3))
    assert r.ok
    assert r.to_dict()["degree_histogram"] == {"1": 81, "9": 2}


def test_modular_gram_matches_exact(h3_5):
    table = orbit_table(h3_5)
    classes = conjugacy_classes(h3_5)
    counts = _class_value_counts(h3_5, table, h3_5.decode(classes.rep_codes))
    gram = exact_gram(5, counts, classes.sizes, table.sizes, h3_5.order)
    assert all(gram[i][j] == int(i == j) for i in range(table.count) for j in range(table.count))
    assert modular_gram_check(5, counts, classes.sizes, table.sizes, h3_5.order)["orthonormal"]
    # perturbing one count must be detected
    bad = counts.copy()
    bad[0, 0, 0] += 1
    bad[0, 0, 1] -= 1
    assert not modular_gram_check(5, bad, classes.sizes, table.sizes, h3_5.order)["orthonormal"]


def test_conjugacy_classes_heisenberg(h3_3):
    classes = conjugacy_classes(h3_3)
    assert classes.count == 11
    assert sorted(classes.sizes.tolist()) == [1, 1, 1] + [3] * 8


def test_distinction_examples(h3, h3_5, sign3):
    fs = reduce_involution(h3_5, sign3)
    assert fs.plus_dim == 1
    assert distinction_multiplicity(h3_5, fs, orbit_bfs(h3_5, (0, 0, 0))) == 1
    orb = orbit_bfs(h3_5, (0, 0, 1))
    assert distinction_multiplicity(h3_5, fs, orb) == 1
    assert vanishing_count(h3_5, fs, orb) == 5
    ident = reduce_involution(h3_5, load_involution(h3, la.identity(3)))
    assert distinction_multiplicity(h3_5, ident, orb) == 0
    assert vanishing_count(h3_5, ident, orb) == 0


@pytest.mark.parametrize("name,inv", [pair for pair in involution_pairs() if pair[0] != "n4"])
def test_multiplicity_one_and_counting(name, inv):
    e = entry(name)
    A = e.algebra()
    FA = reduce_mod_p(A, 3)
    table = orbit_table(FA)
    mult, vanish, degree = distinction_table_arrays(FA, reduce_involution(FA, e.involution(inv, A)), table)
    assert set(mult.tolist()) <= {0, 1}
    assert np.array_equal(mult == 1, vanish > 0)
    assert np.all(vanish[mult == 1] == degree[mult == 1])
    assert int(table.sizes.sum()) == FA.order


def test_vectorized_table_matches_per_orbit(h3_5, sign3):
    fs = reduce_involution(h3_5, sign3)
    table = orbit_table(h3_5)
    rows = distinction_table(h3_5, fs, table)
    mult, vanish, degree = distinction_table_arrays(h3_5, fs, table)
    assert rows == list(zip(mult.tolist(), vanish.tolist(), degree.tolist()))


@given(st.lists(st.integers(min_value=-3, max_value=3), min_size=6, max_size=6), st.sampled_from([5, 7]))
def test_bfs_size_matches_rank(coords, p):
    A = entry("n4").algebra()
    ell = tuple(Fraction(c) for c in coords)
    FA = reduce_mod_p(A, p, check=False)
    size = orbit_bfs(FA, reduce_vector(ell, p)).size
    r = rank_mod_p(skew_form(A, ell), p)
    assert size == p**r
    if r == orbit_dim(A, ell):
        assert size == p ** orbit_dim(A, ell)


def test_cross_validate_examples(h3, sign3):
    rows = cross_validate(h3, sign3, [3, 5, 7], [(0, 0, 0), (1, 0, 0)])
    assert len(rows) == 6 and all(r.agrees for r in rows)
    zero = [r for r in rows if not any(r.functional)]
    assert all(r.multiplicity == 1 and r.classifier for r in zero)
