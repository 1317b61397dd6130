"""Involutions of the algebra, stable decompositions and distinction.

The involution is given by its differential ``S`` (a matrix acting on
coordinate columns); on the group it is exp o S o ln. On the dual space it
acts by sigma(phi) = -phi o S, so phi is sigma-fixed exactly when it vanishes
on the +1 eigenspace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import linalg as la
from .coadjoint import (
    OrbitCanonicalForm,
    PolarizedPair,
    _functional,
    coadjoint_apply,
    orbit_canonical_form,
    same_orbit,
    vergne_polarization,
)
from .errors import (
    CenterNotLine,
    ConstructionFailure,
    DimensionMismatch,
    FunctionalNotAntiInvariant,
    MalformedSpec,
    NotHomomorphism,
    NotInvolutive,
    WitnessSearchFailure,
)
from .group import GroupElement
from .lie import NilpotentAlgebra, centralizer, is_ideal, jordan_holder_basis
from .linalg import Subspace


@dataclass(frozen=True, eq=False)
class Involution:
    algebra: NilpotentAlgebra
    matrix: tuple
    plus_space: Subspace
    minus_space: Subspace
    name: str = "sigma"
    provenance: str = dc_field(default="", compare=False)

    def apply(self, v):
        return la.matvec(self.matrix, v)

    def p_plus(self, v):
        half = Fraction(1, 2)
        return tuple(half * (a + b) for a, b in zip(v, self.apply(v)))

    def p_minus(self, v):
        half = Fraction(1, 2)
        return tuple(half * (a - b) for a, b in zip(v, self.apply(v)))

    def parity(self, v):
        """+1 or -1 for an eigenvector, None otherwise."""
        Sv = self.apply(v)
        if Sv == tuple(v):
            return 1
        if Sv == la.neg(v):
            return -1
        return None

    def is_stable(self, V: Subspace) -> bool:
        return all(V.contains(self.apply(b)) for b in V.basis)

    def eigenbasis(self) -> tuple:
        return tuple(self.plus_space.basis) + tuple(self.minus_space.basis)

    def on_group(self, g: GroupElement) -> GroupElement:
        return GroupElement(g.algebra, self.apply(g.log_coords))

    def to_spec(self) -> dict:
        return {"matrix": [[self.algebra.field.format(c) for c in row] for row in self.matrix]}


def load_involution(A: NilpotentAlgebra, S, name="sigma", provenance="") -> Involution:
    """Validate S (a matrix or the JSON object {"matrix": ...}) as an involutive automorphism."""
    if isinstance(S, str):
        S = json.loads(S)
    if isinstance(S, dict):
        if set(S) != {"matrix"}:
            raise MalformedSpec(f"involution JSON needs exactly the field 'matrix', got {sorted(S)}")
        S = S["matrix"]
    n = A.dim
    if len(S) != n or any(len(row) != n for row in S):
        raise DimensionMismatch(f"involution matrix must be {n} x {n}")
    M = tuple(tuple(A.field(c) for c in row) for row in S)
    if not la.mat_eq(la.matmul(M, M, A.field), la.identity(n, A.field)):
        raise NotInvolutive("S^2 != I")
    for i in range(n):
        for j in range(i + 1, n):
            lhs = la.matvec(M, A.basis_bracket(i, j))
            rhs = A.bracket(la.matvec(M, A.unit(i)), la.matvec(M, A.unit(j)))
            if lhs != rhs:
                raise NotHomomorphism(i, j, la.sub(lhs, rhs))
    ident = la.identity(n, A.field)
    plus = [[M[r][c] - ident[r][c] for c in range(n)] for r in range(n)]
    minus = [[M[r][c] + ident[r][c] for c in range(n)] for r in range(n)]
    Up = Subspace.span(la.nullspace(plus, n, A.field), n, A.field)
    Um = Subspace.span(la.nullspace(minus, n, A.field), n, A.field)
    if Up.dim + Um.dim != n:
        raise NotInvolutive("eigenspaces do not span the algebra")
    return Involution(A, M, Up, Um, name, provenance)


def dual_sigma_action(sigma: Involution, phi):
    """sigma(phi) = -phi o S."""
    phi = _functional(sigma.algebra, phi)
    return la.neg(la.vecmat(phi, sigma.matrix))


def vanishes_on_plus(sigma: Involution, ell) -> bool:
    return all(not la.dot(ell, b) for b in sigma.plus_space.basis)


def anti_invariant_part(sigma: Involution, phi):
    """(phi - phi o S) / 2: the component of phi vanishing on U+."""
    phi = _functional(sigma.algebra, phi)
    half = Fraction(1, 2)
    return tuple(half * (a - b) for a, b in zip(phi, la.vecmat(phi, sigma.matrix)))


def _eigen_candidates(sigma: Involution, V: Subspace):
    """Eigenvectors spanning a stable subspace V: + part first, then - part."""
    plus = V.intersect(sigma.plus_space)
    minus = V.intersect(sigma.minus_space)
    return list(plus.basis) + list(minus.basis)


def sigma_stable_flag(sigma: Involution) -> tuple:
    """Flag-adapted eigenvectors f_1..f_n; every span(f_1..f_i) is a sigma-stable ideal.

    Terms of the lower central series are automatically stable, and within a
    layer any intermediate subspace is an ideal, so refining each layer by
    eigenvectors keeps both properties.
    """
    def candidates(V):
        # same lowest-pivot-first convention as the plain flag; + before - on ties
        cands = _eigen_candidates(sigma, V)
        return sorted(cands, key=lambda v: next(i for i, a in enumerate(v) if a))

    return jordan_holder_basis(sigma.algebra, candidates_for=candidates)


# -- Kirillov decomposition ---------------------------------------------------


@dataclass(frozen=True)
class KirillovDecomposition:
    x_vec: tuple
    y_vec: tuple
    z_vec: tuple
    W: Subspace
    U0: Subspace
    parity_x: int
    parity_y: int
    parity_z: int

    def check(self, A: NilpotentAlgebra, sigma: Involution | None = None) -> dict:
        n = A.dim
        line = lambda v: Subspace.span([v], n, A.field)  # noqa: E731
        total = line(self.x_vec) + line(self.y_vec) + line(self.z_vec) + self.W
        checks = {
            "center_is_z": A.center == line(self.z_vec),
            "xy_is_z": A.bracket(self.x_vec, self.y_vec) == tuple(self.z_vec),
            "y_commutes_with_W": all(not any(A.bracket(self.y_vec, w)) for w in self.W.basis),
            "direct_sum": total.dim == n and self.W.dim == n - 3,
            "U0_is_codim1_ideal": self.U0 == line(self.y_vec) + line(self.z_vec) + self.W
            and self.U0.dim == n - 1
            and is_ideal(A, self.U0),
        }
        if sigma is not None:
            checks["stable"] = all(
                sigma.is_stable(V) for V in (line(self.x_vec), line(self.y_vec), line(self.z_vec), self.W)
            )
        return checks


def sigma_kirillov_decomposition(A: NilpotentAlgebra, sigma: Involution) -> KirillovDecomposition:
    """x, y, z, W with [x, y] = z spanning the center, [y, W] = 0, all summands sigma-stable."""
    n = A.dim
    Z = A.center
    if Z.dim != 1 or A.is_abelian():
        raise CenterNotLine(f"center has dimension {Z.dim}; a one-dimensional center is required")
    z = _eigen_candidates(sigma, Z)[0]
    pz = sigma.parity(z)
    # second center: every subspace between Z and Z2 is an ideal
    Z2 = Subspace.span(
        la.nullspace(_mod_rows(A, Z), n, A.field), n, A.field
    )
    y = next((v for v in _eigen_candidates(sigma, Z2) if not Z.contains(v)), None)
    if y is None:
        raise ConstructionFailure("no eigenvector in the second center outside the center")
    py = sigma.parity(y)
    x0 = None
    for k in range(n):
        c = A.bracket(A.unit(k), y)
        if any(c):
            # [e_k, y] is a nonzero multiple of z
            ratio = next(a / b for a, b in zip(c, z) if b)
            x0 = la.scale(1 / ratio, A.unit(k))
            break
    if x0 is None:
        raise ConstructionFailure("y is central")
    x = None
    for proj in (sigma.p_plus, sigma.p_minus):
        cand = proj(x0)
        if any(cand) and A.bracket(cand, y) == tuple(z):
            x = cand
            break
    if x is None:
        raise ConstructionFailure("neither eigen-projection of x satisfies [x, y] = z")
    U0 = centralizer(A, [y])
    yz = Subspace.span([y, z], n, A.field)
    W_vecs = []
    current = yz
    for v in _eigen_candidates(sigma, U0):
        if not current.contains(v):
            W_vecs.append(v)
            current = current + Subspace.span([v], n, A.field)
    W = Subspace.span(W_vecs, n, A.field)
    dec = KirillovDecomposition(x, y, tuple(z), W, U0, sigma.parity(x), py, pz)
    if not all(dec.check(A, sigma).values()):
        raise ConstructionFailure(f"decomposition failed its checks: {dec.check(A, sigma)}")
    return dec


def _mod_rows(A, Z: Subspace):
    """Rows expressing [X, e_j] in Z as linear conditions on X."""
    n = A.dim
    ann = Z.annihilator()
    rows = []
    for j in range(n):
        images = [A.basis_bracket(i, j) for i in range(n)]
        for phi in ann:
            rows.append([la.dot(phi, images[i]) for i in range(n)])
    return rows


def sigma_stable_polarization(A: NilpotentAlgebra, sigma: Involution, ell) -> PolarizedPair:
    """Vergne polarization along a sigma-stable flag; stable when ell vanishes on U+."""
    ell = _functional(A, ell)
    if not vanishes_on_plus(sigma, ell):
        raise FunctionalNotAntiInvariant("the functional does not vanish on U+")
    pair = vergne_polarization(A, ell, flag=sigma_stable_flag(sigma))
    if not sigma.is_stable(pair.subalgebra):
        raise ConstructionFailure("polarization along a stable flag is not stable")
    return pair


# -- distinction ----------------------------------------------------------------


@dataclass(frozen=True)
class DistinctionVerdict:
    distinguished: bool
    witness: tuple | None = None
    conjugator: GroupElement | None = None
    sigma_stable_pair: PolarizedPair | None = None


def sigma_witness(A: NilpotentAlgebra, sigma: Involution, ell) -> OrbitCanonicalForm:
    """Canonical form along a sigma-stable eigenvector flag.

    Every flag vector is an eigenvector and sigma preserves the jump set, so
    for a conjugate self-dual orbit the canonical representative is itself
    sigma-fixed, i.e. vanishes on U+.
    """
    return orbit_canonical_form(A, ell, flag=sigma_stable_flag(sigma))


def classify_distinction(A: NilpotentAlgebra, sigma: Involution, ell) -> DistinctionVerdict:
    ell = _functional(A, ell)
    distinguished, _ = same_orbit(A, dual_sigma_action(sigma, ell), ell)
    if not distinguished:
        return DistinctionVerdict(False)
    cf = sigma_witness(A, sigma, ell)
    witness = cf.canonical_rep
    if not vanishes_on_plus(sigma, witness) or coadjoint_apply(cf.conjugator, ell) != witness:
        raise WitnessSearchFailure("canonical representative of a self-dual orbit is not sigma-fixed")
    pair = sigma_stable_polarization(A, sigma, witness)
    return DistinctionVerdict(True, witness, cf.conjugator, pair)


def plus_orbit_same(A: NilpotentAlgebra, sigma: Involution, ell, ell2):
    """Same orbit under U+ = exp(plus_space) only."""
    return same_orbit(A, ell, ell2, flag=sigma_stable_flag(sigma), acting=sigma.plus_space)


@dataclass
class ParametrizationReport:
    pairs_checked: int = 0
    same_orbit_pairs: int = 0
    violations: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def cdual_parametrization_check(A, sigma: Involution, sample, pairs=None) -> ParametrizationReport:
    """For functionals vanishing on U+, U-conjugacy must coincide with U+-conjugacy."""
    sample = [_functional(A, s) for s in sample]
    for s in sample:
        if not vanishes_on_plus(sigma, s):
            raise FunctionalNotAntiInvariant("sample functionals must vanish on U+")
    if pairs is None:
        pairs = [(i, j) for i in range(len(sample)) for j in range(i, len(sample))]
    report = ParametrizationReport()
    for i, j in pairs:
        full, _ = same_orbit(A, sample[i], sample[j])
        plus, g = plus_orbit_same(A, sigma, sample[i], sample[j])
        if plus and not sigma.plus_space.contains(g.log_coords):
            plus = False
        report.pairs_checked += 1
        report.same_orbit_pairs += int(full)
        if full != plus:
            report.violations.append((sample[i], sample[j], full, plus))
    return report
