from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kirillov import linalg as la
from kirillov.catalog import CORE_ALGEBRAS, entry
from kirillov.errors import (
    DimensionMismatch,
    JacobiViolation,
    MalformedRational,
    MalformedSpec,
    NotAnIdeal,
    NotNilpotent,
)
from kirillov.linalg import Subspace
from kirillov.lie import (
    center,
    is_ideal,
    is_subalgebra,
    jordan_holder_flag,
    load_algebra,
    quotient,
)

from conftest import vec, vectors


def spec(dim, brackets, names=None):
    names = names or [f"e{i}" for i in range(dim)]
    return {
        "name": "t",
        "dim": dim,
        "basis": names,
        "brackets": [{"i": i, "j": j, "coeffs": {str(k): c for k, c in v.items()}} for (i, j), v in brackets.items()],
    }


def span(A, *vs):
    return Subspace.span([vec(*v) for v in vs], A.dim)


def test_heisenberg_structure(h3):
    assert h3.dim == 3
    assert h3.nilpotency_class == 2
    assert h3.center == span(h3, (0, 0, 1))


def test_abelian_algebra():
    A = load_algebra(spec(2, {}))
    assert A.nilpotency_class == 1
    assert A.center.dim == 2


def test_so3_like_is_not_nilpotent():
    with pytest.raises(NotNilpotent):
        load_algebra(spec(3, {(0, 1): {2: "1"}, (1, 2): {0: "1"}, (0, 2): {1: "-1"}}))


def test_jacobi_violation_reports_defect():
    # [e0,e1]=e2, [e1,e2]=e3, [e0,e3]=e1 fails Jacobi on (e0, e1, e2)
    bad = spec(4, {(0, 1): {2: "1"}, (1, 2): {3: "1"}, (0, 3): {1: "1"}})
    with pytest.raises(JacobiViolation) as info:
        load_algebra(bad)
    assert any(info.value.defect)


def test_malformed_inputs():
    with pytest.raises(MalformedRational):
        load_algebra(spec(3, {(0, 1): {2: "one"}}))
    with pytest.raises(MalformedSpec):
        load_algebra({**spec(3, {(0, 1): {2: "1"}}), "colour": "red"})
    with pytest.raises(MalformedSpec):
        load_algebra(spec(0, {}, names=[]))


def test_center_of_n4(n4):
    assert n4.center == span(n4, (0, 0, 1, 0, 0, 0))


def test_subalgebra_and_ideal(h3):
    yz = span(h3, (0, 1, 0), (0, 0, 1))
    assert is_subalgebra(h3, yz) and is_ideal(h3, yz)
    x = span(h3, (1, 0, 0))
    assert is_subalgebra(h3, x) and not is_ideal(h3, x)
    xy = span(h3, (1, 0, 0), (0, 1, 0))
    assert not is_subalgebra(h3, xy)
    with pytest.raises(DimensionMismatch):
        is_ideal(h3, Subspace.span([vec(1, 0)], 2))


def test_flag_heisenberg(h3):
    flag = jordan_holder_flag(h3)
    assert [V.dim for V in flag] == [0, 1, 2, 3]
    assert flag[1] == span(h3, (0, 0, 1))
    assert flag[2] == span(h3, (0, 1, 0), (0, 0, 1))


def test_flag_abelian():
    A = load_algebra(spec(2, {}))
    flag = jordan_holder_flag(A)
    assert [V.dim for V in flag] == [0, 1, 2]


@pytest.mark.parametrize("name", CORE_ALGEBRAS + ("heisenberg3_gaussian",))
def test_flag_steps_are_ideals(name):
    A = entry(name).algebra()
    flag = jordan_holder_flag(A)
    assert [V.dim for V in flag] == list(range(A.dim + 1))
    assert all(is_ideal(A, V) for V in flag)
    assert all(flag[i].is_subspace_of(flag[i + 1]) for i in range(A.dim))


def test_n4_flag_starts_at_center(n4):
    flag = jordan_holder_flag(n4)
    assert len(flag) == 7
    assert flag[1] == n4.center


def test_quotients_of_heisenberg(h3):
    Q = quotient(h3, span(h3, (0, 0, 1))).algebra
    assert Q.dim == 2 and Q.nilpotency_class == 1
    Q = quotient(h3, span(h3, (0, 1, 0), (0, 0, 1))).algebra
    assert Q.dim == 1
    with pytest.raises(NotAnIdeal):
        quotient(h3, span(h3, (1, 0, 0)))


def test_n4_mod_center(n4):
    # [E12,E23]=E13 and [E23,E34]=E24 survive; everything landing in E14 dies
    q = quotient(n4, n4.center)
    Q = q.algebra
    assert Q.basis_names == ("E12", "E13", "E23", "E24", "E34")
    expected = load_algebra(
        spec(5, {(0, 2): {1: "1"}, (2, 4): {3: "1"}}, names=["E12", "E13", "E23", "E24", "E34"])
    )
    assert Q.same_as(expected)
    assert Q.nilpotency_class == 2 and Q.center.dim == 2


@given(st.data())
def test_quotient_respects_brackets(data):
    A = entry(data.draw(st.sampled_from(CORE_ALGEBRAS))).algebra()
    I = A.lower_central_series[-1]
    q = quotient(A, I)
    a = data.draw(vectors(A.dim))
    b = data.draw(vectors(A.dim))
    lhs = la.matvec(q.projection, A.bracket(a, b))
    rhs = q.algebra.bracket(la.matvec(q.projection, a), la.matvec(q.projection, b))
    assert lhs == rhs


@pytest.mark.parametrize("name", CORE_ALGEBRAS)
def test_center_is_kernel_of_ad(name):
    A = entry(name).algebra()
    stacked = [row for i in range(A.dim) for row in A.ad(A.unit(i))]
    kernel = Subspace.span(la.nullspace(stacked, A.dim), A.dim)
    assert center(A) == kernel and kernel.dim >= 1


@given(st.data())
def test_codimension_one_subalgebras_are_ideals(data):
    A = entry(data.draw(st.sampled_from(CORE_ALGEBRAS))).algebra()
    derived = A.derived
    # hyperplanes ker(phi); phi killing the derived algebra gives subalgebras
    phi = data.draw(vectors(A.dim))
    if data.draw(st.booleans()):
        ann = derived.annihilator()
        coeffs = data.draw(vectors(len(ann)))
        phi = la.combination(coeffs, ann, A.dim)
    if la.is_zero(phi):
        return
    H = Subspace.span(la.nullspace([phi], A.dim), A.dim)
    if is_subalgebra(A, H):
        assert is_ideal(A, H)


def test_jacobi_holds_on_catalog():
    for name in CORE_ALGEBRAS:
        A = entry(name).algebra()
        A.check_jacobi()


def test_spec_round_trip(n4):
    assert load_algebra(n4.to_spec()).same_as(n4)


def test_fraction_coefficients():
    A = load_algebra(spec(3, {(0, 1): {2: "3/4"}}))
    assert A.bracket(vec(1, 0, 0), vec(0, 1, 0)) == (0, 0, Fraction(3, 4))
