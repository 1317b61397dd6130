"""Number fields as multiplication tables, and restriction of scalars to Q.

A field F of degree m is stored through the products of a Q-basis
b_0..b_{m-1}. Its elements plug into every exact kernel of the package, so
algebras, polarizations and orbit canonical forms work over F unchanged.
Restricting an F-algebra to Q uses the basis e_i (x) b_j at index i*m + j.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import sympy

from . import linalg as la
from .coadjoint import is_polarized, orbit_dim, same_orbit, stabilizer_algebra, vergne_polarization
from .errors import DimensionMismatch, MalformedSpec, NotAField
from .fields import QQ, format_rational, parse_rational
from .group import GroupElement, coadjoint_apply
from .lie import NilpotentAlgebra
from .linalg import Subspace


class FieldElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: "NumberField", coords):
        self.field = field
        self.coords = tuple(coords)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise TypeError("elements of different fields")
            return other
        if isinstance(other, Rational):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            return FieldElement(self.field, [a * other for a in self.coords])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.field.multiply(self, other)

    __rmul__ = __mul__

    def inverse(self):
        return self.field.invert(self)

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return FieldElement(self.field, [a / other for a in self.coords])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def __bool__(self):
        return any(self.coords)

    def rational_value(self):
        """The rational number this element equals, or None."""
        one = self.field.one.coords
        k = next(i for i, a in enumerate(one) if a)
        c = self.coords[k] / one[k]
        return c if all(a == c * b for a, b in zip(self.coords, one)) else None

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, Rational):
            return self.rational_value() == other
        return NotImplemented

    def __hash__(self):
        r = self.rational_value()
        return hash(r) if r is not None else hash(self.coords)

    def __repr__(self):
        return self.field.format_text(self)


class NumberField:
    """A finite field extension of Q given by structure constants of a basis."""

    def __init__(self, name, table, basis_names=None):
        m = len(table)
        if m == 0:
            raise MalformedSpec("degree must be positive")
        if any(len(row) != m or any(len(cell) != m for cell in row) for row in table):
            raise DimensionMismatch(f"multiplication table must be {m} x {m} x {m}")
        self.name = name
        self.degree = m
        self.table = tuple(tuple(tuple(parse_rational(c) for c in cell) for cell in row) for row in table)
        self.basis_names = tuple(basis_names) if basis_names else tuple(f"b{j}" for j in range(m))
        self._check_algebra()
        self.zero = FieldElement(self, [Fraction(0)] * m)
        self.one = FieldElement(self, self._find_unit())
        self.trace_vector = tuple(
            sum((self.table[a][b][b] for b in range(m)), Fraction(0)) for a in range(m)
        )
        self._check_field()

    # -- validation ----------------------------------------------------------

    def _product_coords(self, x, y):
        m = self.degree
        out = [Fraction(0)] * m
        for a, xa in enumerate(x):
            if xa:
                for b, yb in enumerate(y):
                    if yb:
                        for c, t in enumerate(self.table[a][b]):
                            if t:
                                out[c] += xa * yb * t
        return out

    def _check_algebra(self):
        m = self.degree
        units = [la.unit(m, i) for i in range(m)]
        for a in range(m):
            for b in range(m):
                if self.table[a][b] != self.table[b][a]:
                    raise NotAField(f"multiplication is not commutative on basis pair ({a}, {b})")
                for c in range(m):
                    left = self._product_coords(self._product_coords(units[a], units[b]), units[c])
                    right = self._product_coords(units[a], self._product_coords(units[b], units[c]))
                    if left != right:
                        raise NotAField(f"multiplication is not associative on ({a}, {b}, {c})")

    def _find_unit(self):
        m = self.degree
        # u * b_b = b_b for every b: sum_a u_a T[a][b][c] = delta_bc
        rows, rhs = [], []
        for b in range(m):
            for c in range(m):
                rows.append([self.table[a][b][c] for a in range(m)])
                rhs.append(Fraction(int(b == c)))
        u = la.solve(rows, rhs)
        if u is None:
            raise NotAField("the multiplication table has no unit")
        return u

    def left_matrix(self, x) -> list:
        """Matrix of y -> x*y on coordinate columns."""
        m = self.degree
        return la.transpose([self._product_coords(x, la.unit(m, b)) for b in range(m)])

    def trace_form(self) -> list:
        m = self.degree
        return [
            [la.dot(self.trace_vector, self._product_coords(la.unit(m, a), la.unit(m, b))) for b in range(m)]
            for a in range(m)
        ]

    def _check_field(self):
        if la.determinant(self.trace_form()) == 0:
            raise NotAField("the trace pairing is degenerate, so this is not a separable field")
        # an etale algebra is a field iff the characteristic polynomial of a
        # primitive element is irreducible; small integer combinations suffice
        m = self.degree
        x = sympy.Symbol("x")
        for bound in range(1, 4):
            for coeffs in itertools.product(range(-bound, bound + 1), repeat=m):
                if max(map(abs, coeffs), default=0) != bound:
                    continue
                M = sympy.Matrix(self.left_matrix([Fraction(c) for c in coeffs]))
                poly = sympy.Poly(M.charpoly(x).as_expr(), x)
                if sympy.degree(sympy.gcd(poly, poly.diff(x)), x) == 0:
                    if not poly.is_irreducible:
                        raise NotAField(f"characteristic polynomial {poly.as_expr()} factors")
                    self.primitive_element = tuple(Fraction(c) for c in coeffs)
                    self.minimal_polynomial = poly.as_expr()
                    return
        raise NotAField("no primitive element found")

    # -- arithmetic ------------------------------------------------------------

    def __call__(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.field != self:
                raise TypeError("element of a different field")
            return x
        if isinstance(x, (list, tuple)):
            if len(x) != self.degree:
                raise DimensionMismatch(f"field elements need {self.degree} coordinates")
            return FieldElement(self, [parse_rational(c) for c in x])
        r = parse_rational(x)
        return FieldElement(self, [r * a for a in self.one.coords])

    def multiply(self, x: FieldElement, y: FieldElement) -> FieldElement:
        return FieldElement(self, self._product_coords(x.coords, y.coords))

    def invert(self, x: FieldElement) -> FieldElement:
        if not x:
            raise ZeroDivisionError("division by zero in a number field")
        sol = la.solve(self.left_matrix(x.coords), list(self.one.coords))
        return FieldElement(self, sol)

    def trace(self, x) -> Fraction:
        return la.dot(self.trace_vector, self(x).coords)

    def basis_element(self, j) -> FieldElement:
        return FieldElement(self, la.unit(self.degree, j))

    def format(self, x):
        return [format_rational(c) for c in self(x).coords]

    def parse(self, value):
        return self(value)

    def format_text(self, x):
        parts = []
        for c, name in zip(x.coords, self.basis_names):
            if c:
                parts.append(format_rational(c) + ("" if name == "1" else f"*{name}"))
        return " + ".join(parts) if parts else "0"

    def to_spec(self) -> dict:
        return {
            "degree": self.degree,
            "mult_table": [[[format_rational(c) for c in cell] for cell in row] for row in self.table],
        }

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return self.name


def load_field(spec, name="F") -> NumberField:
    """Field from ``{"degree": m, "mult_table": [[[...]]]}``."""
    if isinstance(spec, str):
        spec = json.loads(spec)
    if set(spec) - {"degree", "mult_table", "name", "basis"} or not {"degree", "mult_table"} <= set(spec):
        raise MalformedSpec("field JSON needs the fields degree and mult_table")
    table = spec["mult_table"]
    if len(table) != spec["degree"]:
        raise DimensionMismatch("degree does not match the multiplication table")
    return NumberField(spec.get("name", name), table, spec.get("basis"))


def quadratic_field(d: int, name=None) -> NumberField:
    """Q(sqrt d) on the basis (1, sqrt d)."""
    return NumberField(
        name or f"Q(sqrt({d}))",
        [[[1, 0], [0, 1]], [[0, 1], [d, 0]]],
        ["1", "i" if d == -1 else f"sqrt{d}"],
    )


def gaussian_field() -> NumberField:
    return quadratic_field(-1, "Q(i)")


def sqrt2_field() -> NumberField:
    return quadratic_field(2, "Q(sqrt2)")


BUILTIN_FIELDS = {"gaussian": gaussian_field, "sqrt2": sqrt2_field}


def field_conjugation(F: NumberField) -> list:
    """Matrix of the nontrivial automorphism of a quadratic field on coordinates."""
    if F.degree != 2:
        raise ValueError("conjugation is only provided for quadratic fields")
    # a + b*alpha -> a + b*(Tr(alpha) - alpha)
    t = F.trace(F.basis_element(1))
    conj_alpha = F(t) - F.basis_element(1)
    return la.transpose([list(F.one.coords), list(conj_alpha.coords)])


# -- restriction of scalars ------------------------------------------------------


@dataclass(frozen=True)
class RestrictedAlgebra:
    original: NilpotentAlgebra
    field: NumberField
    algebra: NilpotentAlgebra

    def flatten(self, v) -> tuple:
        """F-vector -> Q-coordinates on e_i (x) b_j."""
        F = self.field
        return tuple(c for a in v for c in F(a).coords)

    def unflatten(self, w) -> tuple:
        m = self.field.degree
        return tuple(self.field(list(w[i * m : (i + 1) * m])) for i in range(self.original.dim))


def restrict_algebra(A: NilpotentAlgebra, F: NumberField) -> RestrictedAlgebra:
    """The Q-algebra with brackets [e_i b, e_j b'] = sum_k c_ijk b b' e_k."""
    m = F.degree
    n = A.dim
    brackets = {}
    for i, j, k, c in A.terms:
        for a in range(m):
            for b in range(m):
                prod = F(c) * F.basis_element(a) * F.basis_element(b)
                for d, val in enumerate(prod.coords):
                    if not val:
                        continue
                    p, q = i * m + a, j * m + b
                    sign = 1
                    if p > q:
                        p, q, sign = q, p, -1
                    vec = brackets.setdefault((p, q), {})
                    vec[k * m + d] = vec.get(k * m + d, Fraction(0)) + sign * val
    names = [f"{A.basis_names[i]}*{F.basis_names[a]}" for i in range(n) for a in range(m)]
    R = NilpotentAlgebra.from_brackets(f"Res[{F.name}]({A.name})", names, brackets, QQ)
    return RestrictedAlgebra(A, F, R)


def restrict_functional(RA: RestrictedAlgebra, ell) -> tuple:
    """ell_K = Tr o ell on the restricted basis: ell_K(e_i b_j) = Tr(ell_i b_j)."""
    F = RA.field
    ell = [F(c) for c in ell]
    if len(ell) != RA.original.dim:
        raise DimensionMismatch("functional length does not match the F-algebra")
    return tuple(F.trace(c * F.basis_element(j)) for c in ell for j in range(F.degree))


def restrict_subspace(RA: RestrictedAlgebra, V) -> Subspace:
    """The Q-span of {b_j v : v in V}."""
    F = RA.field
    A = RA.original
    V = V if isinstance(V, Subspace) else Subspace.span(V, A.dim, F)
    vectors = [RA.flatten([F.basis_element(j) * c for c in v]) for v in V.basis for j in range(F.degree)]
    return Subspace.span(vectors, RA.algebra.dim, QQ)


def restrict_group_element(RA: RestrictedAlgebra, g: GroupElement) -> GroupElement:
    return GroupElement(RA.algebra, RA.flatten(g.log_coords))


def functional_map_matrix(RA: RestrictedAlgebra) -> list:
    """Matrix of the Q-linear map ell -> ell_K in flattened coordinates."""
    N = RA.algebra.dim
    cols = []
    for idx in range(N):
        e = [Fraction(0)] * N
        e[idx] = Fraction(1)
        cols.append(restrict_functional(RA, RA.unflatten(e)))
    return la.transpose(cols)


def functional_map_is_bijective(RA: RestrictedAlgebra) -> bool:
    return la.determinant(functional_map_matrix(RA)) != 0


def check_polarization_correspondence(RA: RestrictedAlgebra, ell, V) -> dict:
    """Polarized over F iff the restriction is polarized over Q; both verdicts reported."""
    A = RA.original
    F = RA.field
    V = V if isinstance(V, Subspace) else Subspace.span(V, A.dim, F)
    over_f, _ = is_polarized(A, ell, V)
    over_q, _ = is_polarized(RA.algebra, restrict_functional(RA, ell), restrict_subspace(RA, V))
    return {"over_F": over_f, "over_Q": over_q, "agree": over_f == over_q}


def check_stabilizer_dimension(RA: RestrictedAlgebra, ell) -> dict:
    dim_f = stabilizer_algebra(RA.original, ell).dim
    dim_q = stabilizer_algebra(RA.algebra, restrict_functional(RA, ell)).dim
    return {"dim_F": dim_f, "dim_Q": dim_q, "ok": dim_q == RA.field.degree * dim_f}


def check_orbit_injection(RA: RestrictedAlgebra, ell, ell2) -> dict:
    """Compare F-orbit equality with Q-orbit equality of the restrictions.

    A conjugator found over F is restricted and checked over Q as well.
    """
    A = RA.original
    same_f, g = same_orbit(A, ell, ell2)
    lk, lk2 = restrict_functional(RA, ell), restrict_functional(RA, ell2)
    same_q, _ = same_orbit(RA.algebra, lk, lk2)
    conj_ok = None
    if same_f:
        conj_ok = coadjoint_apply(restrict_group_element(RA, g), lk) == lk2
    return {"same_over_F": same_f, "same_over_Q": same_q, "conjugator_restricts": conj_ok, "agree": same_f == same_q}


def vergne_pair_over_field(RA: RestrictedAlgebra, ell):
    """Vergne polarization of ell over F and the correspondence verdict for it."""
    pair = vergne_polarization(RA.original, ell)
    report = check_polarization_correspondence(RA, ell, pair.subalgebra)
    report["orbit_dim_F"] = orbit_dim(RA.original, ell)
    return pair, report
