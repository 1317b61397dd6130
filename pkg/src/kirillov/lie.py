"""Nilpotent Lie algebras given by structure constants."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

from . import linalg as la
from .errors import (
    DimensionMismatch,
    JacobiViolation,
    MalformedSpec,
    NotAnIdeal,
    NotNilpotent,
)
from .fields import QQ
from .linalg import Subspace

_SPEC_KEYS = {"name", "dim", "basis", "brackets"}
_BRACKET_KEYS = {"i", "j", "coeffs"}


@dataclass(frozen=True, eq=False)
class NilpotentAlgebra:
    """A finite-dimensional nilpotent Lie algebra over ``field``.

    ``terms`` lists the nonzero structure constants as ``(i, j, k, c)`` with
    ``i < j`` meaning ``[e_i, e_j]`` has coefficient ``c`` on ``e_k``.
    Construct through :func:`load_algebra` or :meth:`from_brackets`, which
    validate antisymmetric storage, Jacobi and nilpotency.
    """

    name: str
    basis_names: tuple
    terms: tuple
    field: object = QQ

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_brackets(cls, name, basis_names, brackets, field=QQ, validate=True):
        """``brackets`` maps (i, j) with i < j to a dense or {k: c} vector."""
        n = len(basis_names)
        if n == 0:
            raise MalformedSpec("dimension 0 algebras are not supported")
        terms = []
        for (i, j), vec in sorted(brackets.items()):
            if not (0 <= i < j < n):
                raise MalformedSpec(f"bracket index pair ({i}, {j}) must satisfy 0 <= i < j < {n}")
            items = vec.items() if isinstance(vec, dict) else enumerate(vec)
            for k, c in sorted(items):
                if not 0 <= k < n:
                    raise MalformedSpec(f"coefficient index {k} out of range")
                c = field(c)
                if c:
                    terms.append((i, j, k, c))
        alg = cls(name, tuple(basis_names), tuple(terms), field)
        if validate:
            alg.validate()
        return alg

    def validate(self):
        self.check_jacobi()
        self.lower_central_series  # raises NotNilpotent
        return self

    # -- brackets ----------------------------------------------------------

    def zero(self):
        return la.zeros(self.dim, self.field)

    def unit(self, i):
        return la.unit(self.dim, i, self.field)

    @cached_property
    def _terms_by_pair(self):
        table = {}
        for i, j, k, c in self.terms:
            table.setdefault((i, j), []).append((k, c))
        return table

    def bracket(self, v, w):
        n = self.dim
        if len(v) != n or len(w) != n:
            raise DimensionMismatch(f"vectors must have length {n}")
        out = [self.field.zero] * n
        for (i, j), ks in self._terms_by_pair.items():
            coef = v[i] * w[j] - v[j] * w[i]
            if coef:
                for k, c in ks:
                    out[k] += c * coef
        return tuple(out)

    def basis_bracket(self, i, j):
        return self.bracket(self.unit(i), self.unit(j))

    def ad(self, v):
        """Matrix of ad(v): column j is [v, e_j]."""
        cols = [self.bracket(v, self.unit(j)) for j in range(self.dim)]
        return la.transpose(cols)

    def check_jacobi(self):
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    ei, ej, ek = self.unit(i), self.unit(j), self.unit(k)
                    defect = la.add(
                        la.add(self.bracket(ei, self.bracket(ej, ek)), self.bracket(ej, self.bracket(ek, ei))),
                        self.bracket(ek, self.bracket(ei, ej)),
                    )
                    if any(defect):
                        raise JacobiViolation(i, j, k, defect)

    # -- cached structure --------------------------------------------------

    @cached_property
    def lower_central_series(self) -> tuple:
        """(g^1, g^2, ..., g^c) with g^{k+1} = [g, g^k]; all terms nonzero."""
        n = self.dim
        terms = [Subspace.full(n, self.field)]
        while True:
            current = terms[-1]
            nxt = Subspace.span(
                [self.bracket(self.unit(i), b) for i in range(n) for b in current.basis], n, self.field
            )
            if nxt.dim == 0:
                return tuple(terms)
            if nxt == current:
                raise NotNilpotent(f"lower central series of {self.name!r} stabilizes at dimension {nxt.dim}")
            terms.append(nxt)

    @property
    def nilpotency_class(self) -> int:
        return len(self.lower_central_series)

    @cached_property
    def derived(self) -> Subspace:
        series = self.lower_central_series
        return series[1] if len(series) > 1 else Subspace.zero(self.dim, self.field)

    @cached_property
    def center(self) -> Subspace:
        return center(self)

    def is_abelian(self) -> bool:
        return not self.terms

    def to_spec(self) -> dict:
        """Inverse of :func:`load_algebra` (rational algebras only)."""
        brackets = []
        for (i, j), ks in sorted(self._terms_by_pair.items()):
            brackets.append({"i": i, "j": j, "coeffs": {str(k): self.field.format(c) for k, c in ks}})
        return {"name": self.name, "dim": self.dim, "basis": list(self.basis_names), "brackets": brackets}

    def same_as(self, other) -> bool:
        return self is other or (
            isinstance(other, NilpotentAlgebra)
            and self.basis_names == other.basis_names
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"NilpotentAlgebra({self.name!r}, dim={self.dim})"


def load_algebra(spec, field=QQ) -> NilpotentAlgebra:
    """Build and validate an algebra from its JSON description (dict, str or path-like content)."""
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise MalformedSpec(f"invalid JSON: {exc}") from exc
    if not isinstance(spec, dict):
        raise MalformedSpec("algebra description must be a JSON object")
    unknown = set(spec) - _SPEC_KEYS
    if unknown:
        raise MalformedSpec(f"unknown fields: {sorted(unknown)}")
    missing = {"dim", "basis", "brackets"} - set(spec)
    if missing:
        raise MalformedSpec(f"missing fields: {sorted(missing)}")
    n = spec["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MalformedSpec("dim must be a positive integer")
    names = spec["basis"]
    if len(names) != n or len(set(names)) != n:
        raise MalformedSpec("basis must list dim distinct names")
    brackets = {}
    for entry in spec["brackets"]:
        if not isinstance(entry, dict) or set(entry) - _BRACKET_KEYS or _BRACKET_KEYS - set(entry):
            raise MalformedSpec(f"bracket entries need exactly the fields i, j, coeffs: {entry!r}")
        i, j = entry["i"], entry["j"]
        if (i, j) in brackets:
            raise MalformedSpec(f"duplicate bracket ({i}, {j})")
        coeffs = {}
        for k, c in entry["coeffs"].items():
            try:
                k = int(k)
            except ValueError as exc:
                raise MalformedSpec(f"bad coefficient index {k!r}") from exc
            coeffs[k] = c
        brackets[(i, j)] = coeffs
    return NilpotentAlgebra.from_brackets(spec.get("name", "algebra"), names, brackets, field)


def center(A: NilpotentAlgebra) -> Subspace:
    n = A.dim
    # [X, e_j]_k = sum_i X_i [e_i, e_j]_k
    cols = [[A.basis_bracket(i, j) for j in range(n)] for i in range(n)]
    rows = [[cols[i][j][k] for i in range(n)] for j in range(n) for k in range(n)]
    return Subspace.span(la.nullspace(rows, n, A.field), n, A.field)


def _as_subspace(A, S) -> Subspace:
    if isinstance(S, Subspace):
        if S.ambient != A.dim:
            raise DimensionMismatch(f"subspace of F^{S.ambient} inside an algebra of dimension {A.dim}")
        return S
    return Subspace.span(S, A.dim, A.field)


def is_subalgebra(A: NilpotentAlgebra, S) -> bool:
    S = _as_subspace(A, S)
    return all(S.contains(A.bracket(a, b)) for idx, a in enumerate(S.basis) for b in S.basis[idx + 1 :])


def is_ideal(A: NilpotentAlgebra, S) -> bool:
    S = _as_subspace(A, S)
    return all(S.contains(A.bracket(A.unit(i), b)) for i in range(A.dim) for b in S.basis)


def normalizer(A: NilpotentAlgebra, M) -> Subspace:
    """{X : [X, M] in M}."""
    M = _as_subspace(A, M)
    n = A.dim
    ann = M.annihilator()
    rows = []
    for m in M.basis:
        images = [A.bracket(A.unit(i), m) for i in range(n)]
        for phi in ann:
            rows.append([la.dot(phi, images[i]) for i in range(n)])
    if not rows:
        return Subspace.full(n, A.field)
    return Subspace.span(la.nullspace(rows, n, A.field), n, A.field)


def centralizer(A: NilpotentAlgebra, vectors) -> Subspace:
    n = A.dim
    rows = []
    for v in vectors:
        images = [A.bracket(A.unit(i), v) for i in range(n)]
        rows.extend([images[i][k] for i in range(n)] for k in range(n))
    if not rows:
        return Subspace.full(n, A.field)
    return Subspace.span(la.nullspace(rows, n, A.field), n, A.field)


def _refine(lower: Subspace, upper: Subspace, candidates):
    """Vectors from ``candidates`` completing ``lower`` to ``upper``, greedily in order."""
    chosen = []
    current = lower
    for v in candidates:
        if current.dim == upper.dim:
            break
        if not current.contains(v):
            chosen.append(v)
            current = current + Subspace.span([v], lower.ambient, lower.field)
    return chosen


def jordan_holder_basis(A: NilpotentAlgebra, candidates_for=None) -> tuple:
    """Flag-adapted vectors (f_1, ..., f_n): span(f_1..f_i) is an ideal of dimension i.

    The descending lower central series is refined layer by layer; within the
    layer g^k / g^{k+1} the complement vectors are taken greedily from the
    echelon basis of g^k, and the flag removes them lowest pivot first when
    read from the top (so they are *added* highest pivot first).
    ``candidates_for(layer_subspace)`` may override the candidate order
    (used for involution-stable flags).
    """
    series = list(A.lower_central_series) + [Subspace.zero(A.dim, A.field)]
    vectors = []
    for k in range(len(series) - 2, -1, -1):
        upper, lower = series[k], series[k + 1]
        cands = candidates_for(upper) if candidates_for else list(upper.basis)
        chosen = _refine(lower, upper, cands)
        vectors.extend(reversed(chosen))
    return tuple(vectors)


def flag_from_basis(vectors, n, field=QQ) -> list:
    return [Subspace.span(vectors[:i], n, field) for i in range(len(vectors) + 1)]


def jordan_holder_flag(A: NilpotentAlgebra) -> list:
    """0 = g_0 < g_1 < ... < g_n = A, each g_i an ideal of dimension i."""
    return flag_from_basis(jordan_holder_basis(A), A.dim, A.field)


@dataclass(frozen=True)
class Quotient:
    algebra: NilpotentAlgebra
    projection: list  # (dim A/I) x (dim A) matrix
    complement: tuple  # indices of the standard basis vectors spanning the complement


def quotient(A: NilpotentAlgebra, I) -> Quotient:
    """A / I in the basis given by the standard basis vectors completing I."""
    I = _as_subspace(A, I)
    if not is_ideal(A, I):
        raise NotAnIdeal("quotient requires an ideal")
    comp = I.complement_units()
    # coordinates w.r.t. (I.basis, e_comp): invert the change of basis
    change = la.transpose(list(I.basis) + [A.unit(c) for c in comp])
    inv = la.inverse(change, A.field)
    proj = inv[I.dim :]
    brackets = {}
    for a in range(len(comp)):
        for b in range(a + 1, len(comp)):
            image = la.matvec(proj, A.basis_bracket(comp[a], comp[b]))
            if any(image):
                brackets[(a, b)] = image
    names = [A.basis_names[c] for c in comp]
    if not names:
        raise MalformedSpec("quotient by the whole algebra has dimension 0")
    Q = NilpotentAlgebra.from_brackets(f"{A.name}/ideal", names, brackets, A.field)
    return Quotient(Q, proj, tuple(comp))
