"""Brute-force finite-field oracle.

Reduces a rational algebra mod an admissible prime p and works with the
finite group U(F_p) directly: coadjoint orbits by exhaustive search,
conjugacy classes by conjugating with the group law, Kirillov characters in
exact cyclotomic arithmetic, and distinction multiplicities by summing
characters over U+. Bulk work is vectorized with numpy; every quantity that
is compared is an exact integer or rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
import sympy
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import linalg as la
from .coadjoint import _functional, orbit_canonical_form, skew_form
from .errors import InadmissiblePrime, NonIntegralMultiplicity, NonSquareOrbit
from .group import bch_denominator_primes, dynkin_coefficients, inverse, multiply
from .lie import NilpotentAlgebra, jordan_holder_basis


# -- scalar helpers ------------------------------------------------------------


def mod_p(x, p) -> int:
    """Reduction of a p-integral rational; ValueError otherwise."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, p) % p


def is_p_integral(values, p) -> bool:
    return all(Fraction(x).denominator % p for x in values)


def reduce_vector(v, p) -> tuple:
    return tuple(mod_p(x, p) for x in v)


def lift_symmetric(v, p) -> tuple:
    """Integer lift with entries in (-p/2, p/2)."""
    return tuple(Fraction(int(x) - p if int(x) > p // 2 else int(x)) for x in v)


def rref_mod_p(rows, p):
    m = [[int(x) % p for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_mod_p(rows, p) -> int:
    return len(rref_mod_p(rows, p)[1])


# -- the reduced algebra --------------------------------------------------------


def admissibility_problem(A: NilpotentAlgebra, p: int):
    """None if p is admissible for A, else a reason string."""
    if not isinstance(p, int) or not sympy.isprime(p):
        return f"{p} is not a prime"
    for i, j, k, c in A.terms:
        if Fraction(c).denominator % p == 0:
            return f"structure constant {c} of [e_{i}, e_{j}] on e_{k} has denominator divisible by {p}"
    bad = bch_denominator_primes(A.nilpotency_class)
    if p in bad:
        for d in range(1, A.nilpotency_class + 1):
            for word, coeff in dynkin_coefficients(d):
                if coeff.denominator % p == 0:
                    return f"BCH coefficient {coeff} (word {word}) has denominator divisible by {p}"
    return None


class FiniteAlgebra:
    """A rational nilpotent algebra reduced mod p, with U(F_p) in exponential coordinates.

    Vectors are int64 numpy arrays with entries in [0, p); batches have shape (N, n).
    """

    def __init__(self, algebra: NilpotentAlgebra, p: int):
        self.algebra = algebra
        self.p = p
        self.n = algebra.dim
        self.order = p**self.n
        self.nilpotency_class = algebra.nilpotency_class
        self._terms = [(i, j, k, mod_p(c, p)) for i, j, k, c in algebra.terms]
        self._words = [
            [(word, mod_p(coeff, p)) for word, coeff in dynkin_coefficients(d)]
            for d in range(2, self.nilpotency_class + 1)
        ]
        self._weights = p ** np.arange(self.n - 1, -1, -1, dtype=np.int64)

    def __repr__(self):
        return f"FiniteAlgebra({self.algebra.name!r}, p={self.p})"

    # -- encoding -------------------------------------------------------------

    def encode(self, X) -> np.ndarray:
        """Base-p integer code; lexicographic order of vectors equals code order."""
        return np.asarray(X, dtype=np.int64) @ self._weights

    def decode(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // self._weights) % self.p

    def all_vectors(self) -> np.ndarray:
        return self.decode(np.arange(self.order, dtype=np.int64))

    def vector(self, v) -> np.ndarray:
        return np.array(reduce_vector(v, self.p), dtype=np.int64)

    # -- Lie and group structure ----------------------------------------------

    def bracket(self, X, Y) -> np.ndarray:
        X = np.atleast_2d(X)
        Y = np.atleast_2d(Y)
        out = np.zeros(np.broadcast_shapes(X.shape, Y.shape), dtype=np.int64)
        for i, j, k, c in self._terms:
            out[:, k] += c * ((X[:, i] * Y[:, j] - X[:, j] * Y[:, i]) % self.p)
        return out % self.p

    def bch(self, X, Y) -> np.ndarray:
        """Batched log(exp X exp Y) mod p."""
        X = np.atleast_2d(np.asarray(X, dtype=np.int64))
        Y = np.atleast_2d(np.asarray(Y, dtype=np.int64))
        letters = {"X": X, "Y": Y}
        memo = {}

        def nested(word):
            if word not in memo:
                memo[word] = letters[word] if len(word) == 1 else self.bracket(letters[word[0]], nested(word[1:]))
            return memo[word]

        out = (X + Y) % self.p
        for words in self._words:
            for word, c in words:
                out = (out + c * nested(word)) % self.p
        return out

    def multiply(self, X, Y) -> np.ndarray:
        return self.bch(X, Y)

    def inverse(self, X) -> np.ndarray:
        return (-np.asarray(X, dtype=np.int64)) % self.p

    def power(self, X, k: int) -> np.ndarray:
        out = np.zeros_like(np.atleast_2d(X))
        for _ in range(k):
            out = self.bch(out, X)
        return out

    def check_associativity(self, samples=2000, seed=0, exhaustive_limit=20_000) -> bool:
        """Exhaustive over all triples when there are few, random sample otherwise."""
        if self.order**3 <= exhaustive_limit:
            V = self.all_vectors()
            N = len(V)
            B = np.repeat(V, N, axis=0)
            C = np.tile(V, (N, 1))
            BC = self.bch(B, C)
            for a in range(N):
                Xa = np.broadcast_to(V[a], B.shape)
                if not np.array_equal(self.bch(self.bch(Xa, B), C), self.bch(Xa, BC)):
                    return False
            return True
        rng = np.random.default_rng(seed)
        X, Y, Z = (rng.integers(0, self.p, size=(samples, self.n)) for _ in range(3))
        return bool(np.array_equal(self.bch(self.bch(X, Y), Z), self.bch(X, self.bch(Y, Z))))

    def ad_matrix(self, v) -> np.ndarray:
        """Matrix of ad(v) mod p; column j is [v, e_j]."""
        v = np.asarray(v, dtype=np.int64)
        E = np.eye(self.n, dtype=np.int64)
        return self.bracket(np.broadcast_to(v, (self.n, self.n)), E).T % self.p

    def exp_ad_matrix(self, v) -> np.ndarray:
        p = self.p
        ad = self.ad_matrix(v)
        result = np.eye(self.n, dtype=np.int64)
        power = np.eye(self.n, dtype=np.int64)
        fact = 1
        for k in range(1, self.nilpotency_class):
            power = (power @ ad) % p
            fact *= k
            result = (result + pow(fact, -1, p) * power) % p
        return result

    def coadjoint_matrix(self, v) -> np.ndarray:
        """Matrix of ell -> ell o Ad(exp(-v)) on functional columns."""
        return self.exp_ad_matrix((-np.asarray(v, dtype=np.int64)) % self.p).T.copy()

    def coadjoint_apply(self, v, L) -> np.ndarray:
        """Apply Ad*(exp v) to a batch of functionals (rows)."""
        M = self.coadjoint_matrix(v)
        return (np.atleast_2d(L) @ M.T) % self.p

    def unit_generators(self) -> list:
        """exp(e_i), i < n: their powers exp(t e_i) give every one-parameter generator."""
        return [np.eye(self.n, dtype=np.int64)[i] for i in range(self.n)]


def reduce_mod_p(A: NilpotentAlgebra, p: int, check=True) -> FiniteAlgebra:
    problem = admissibility_problem(A, p)
    if problem:
        raise InadmissiblePrime(p, problem)
    FA = FiniteAlgebra(A, p)
    if check and not FA.check_associativity(samples=500, seed=p):
        raise InadmissiblePrime(p, "group law mod p is not associative")
    return FA


@dataclass(frozen=True)
class FiniteInvolution:
    matrix: np.ndarray
    plus_basis: np.ndarray  # rows spanning U+ mod p

    @property
    def plus_dim(self) -> int:
        return len(self.plus_basis)

    def plus_elements(self, FA: FiniteAlgebra) -> np.ndarray:
        """All vectors of U+ mod p, i.e. the log coordinates of U+(F_p)."""
        k = self.plus_dim
        if k == 0:
            return np.zeros((1, FA.n), dtype=np.int64)
        coeffs = (np.arange(FA.p**k)[:, None] // FA.p ** np.arange(k - 1, -1, -1)) % FA.p
        return (coeffs @ self.plus_basis) % FA.p


def reduce_involution(FA: FiniteAlgebra, sigma) -> FiniteInvolution:
    p = FA.p
    if not is_p_integral([c for row in sigma.matrix for c in row], p):
        raise InadmissiblePrime(p, "involution matrix is not p-integral")
    S = np.array([[mod_p(c, p) for c in row] for row in sigma.matrix], dtype=np.int64)
    half = pow(2, -1, p)
    P = ((np.eye(FA.n, dtype=np.int64) + S) * half) % p
    basis, _ = rref_mod_p(P.T.tolist(), p)
    return FiniteInvolution(S, np.array(basis, dtype=np.int64).reshape(-1, FA.n))


# -- orbits ---------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteOrbit:
    p: int
    codes: np.ndarray  # sorted codes of the members
    elements: np.ndarray

    @property
    def size(self) -> int:
        return len(self.codes)

    @property
    def representative(self) -> tuple:
        return tuple(int(x) for x in self.elements[0])

    @property
    def half_dim(self) -> int:
        return _half_log(self.size, self.p)

    def contains_code(self, code) -> bool:
        i = np.searchsorted(self.codes, code)
        return bool(i < len(self.codes) and self.codes[i] == code)


def _half_log(size, p) -> int:
    d2, rest = 0, size
    while rest % p == 0:
        rest //= p
        d2 += 1
    if rest != 1 or d2 % 2:
        raise NonSquareOrbit(f"orbit of size {size} is not an even power of {p}")
    return d2 // 2


def orbit_bfs(FA: FiniteAlgebra, ell, generators=None) -> FiniteOrbit:
    """Orbit of ell under the group generated by exp(g) for g in ``generators``.

    Defaults to exp(e_i), which generate U(F_p).
    """
    gens = FA.unit_generators() if generators is None else [np.asarray(g, dtype=np.int64) for g in generators]
    mats = [FA.coadjoint_matrix(g).T for g in gens]
    start = np.atleast_2d(np.asarray([int(x) % FA.p for x in ell], dtype=np.int64))
    seen = {int(FA.encode(start)[0])}
    frontier = start
    found = [start]
    while len(frontier):
        nxt = np.concatenate([(frontier @ M) % FA.p for M in mats])
        codes = FA.encode(nxt)
        codes, idx = np.unique(codes, return_index=True)
        keep = [i for c, i in zip(codes.tolist(), idx.tolist()) if c not in seen]
        seen.update(codes.tolist())
        frontier = nxt[keep]
        if len(frontier):
            found.append(frontier)
    elements = np.concatenate(found)
    codes = FA.encode(elements)
    order = np.argsort(codes)
    return FiniteOrbit(FA.p, codes[order], elements[order])


def _components(FA: FiniteAlgebra, images):
    """Connected components of the graph code -> image code, relabelled by smallest member."""
    N = FA.order
    src = np.concatenate([np.arange(N, dtype=np.int64)] * len(images))
    dst = np.concatenate(images)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(N, N)).tocsr()
    _, labels = connected_components(graph, directed=True, connection="weak")
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    # first[order] are the smallest codes of the components, increasing
    return relabel[labels], first[order]


@dataclass
class FiniteOrbitTable:
    FA: FiniteAlgebra
    labels: np.ndarray  # orbit index of every functional code
    rep_codes: np.ndarray  # smallest member of each orbit
    sizes: np.ndarray

    @property
    def count(self) -> int:
        return len(self.rep_codes)

    def representative(self, i) -> tuple:
        return tuple(int(x) for x in self.FA.decode(self.rep_codes[i]))

    def half_dims(self) -> list:
        return [_half_log(int(s), self.FA.p) for s in self.sizes]

    @cached_property
    def _grouped(self):
        order = np.argsort(self.labels, kind="stable")
        starts = np.concatenate([[0], np.cumsum(self.sizes)[:-1]])
        return order, starts

    def members(self, i) -> np.ndarray:
        order, starts = self._grouped
        return order[starts[i] : starts[i] + self.sizes[i]]

    def orbit(self, i) -> FiniteOrbit:
        codes = self.members(i)
        return FiniteOrbit(self.FA.p, codes, self.FA.decode(codes))

    def orbit_of(self, ell) -> int:
        return int(self.labels[int(self.FA.encode(np.array([int(x) % self.FA.p for x in ell])))])


def orbit_table(FA: FiniteAlgebra) -> FiniteOrbitTable:
    L = FA.all_vectors()
    images = [FA.encode(FA.coadjoint_apply(g, L)) for g in FA.unit_generators()]
    labels, reps = _components(FA, images)
    sizes = np.bincount(labels)
    table = FiniteOrbitTable(FA, labels, reps, sizes)
    table.half_dims()  # raises NonSquareOrbit
    return table


@dataclass
class ConjugacyClasses:
    labels: np.ndarray
    rep_codes: np.ndarray
    sizes: np.ndarray

    @property
    def count(self) -> int:
        return len(self.rep_codes)


def conjugacy_classes(FA: FiniteAlgebra) -> ConjugacyClasses:
    """Classes of U(F_p) from g h g^-1 computed with the group law, generators g = exp(e_i)."""
    G = FA.all_vectors()
    images = []
    for g in FA.unit_generators():
        gb = np.broadcast_to(g, G.shape)
        conj = FA.multiply(FA.multiply(gb, G), FA.inverse(gb))
        images.append(FA.encode(conj))
    labels, reps = _components(FA, images)
    return ConjugacyClasses(labels, reps, np.bincount(labels))


# -- cyclotomic numbers -------------------------------------------------------------


class CyclotomicNumber:
    """Element of Q(zeta_p) on the basis zeta, ..., zeta^(p-1)."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p, coeffs):
        self.p = p
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        if len(self.coeffs) != p - 1:
            raise ValueError(f"need {p - 1} coefficients")

    @classmethod
    def from_powers(cls, p, weights):
        """sum_k weights[k] zeta^k for k = 0..p-1, using 1 = -(zeta + ... + zeta^(p-1))."""
        w = [Fraction(x) for x in weights]
        return cls(p, [w[k] - w[0] for k in range(1, p)])

    @classmethod
    def rational(cls, p, r):
        return cls.from_powers(p, [r] + [0] * (p - 1))

    @classmethod
    def zeta(cls, p, k=1):
        w = [0] * p
        w[k % p] = 1
        return cls.from_powers(p, w)

    def powers(self) -> list:
        return [Fraction(0)] + list(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.p != self.p:
                raise ValueError("different cyclotomic fields")
            return other
        return CyclotomicNumber.rational(self.p, other)

    def __add__(self, other):
        other = self._coerce(other)
        return CyclotomicNumber(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.p, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        if not isinstance(other, CyclotomicNumber):
            r = Fraction(other)
            return CyclotomicNumber(self.p, [a * r for a in self.coeffs])
        other = self._coerce(other)
        p = self.p
        w = [Fraction(0)] * p
        a, b = self.powers(), other.powers()
        for i in range(1, p):
            if a[i]:
                for j in range(1, p):
                    if b[j]:
                        w[(i + j) % p] += a[i] * b[j]
        return CyclotomicNumber.from_powers(p, w)

    __rmul__ = __mul__

    def __truediv__(self, r):
        r = Fraction(r)
        return CyclotomicNumber(self.p, [a / r for a in self.coeffs])

    def conjugate(self):
        """zeta -> zeta^-1 (complex conjugation)."""
        w = self.powers()
        return CyclotomicNumber.from_powers(self.p, [w[(-k) % self.p] for k in range(self.p)])

    def rational_value(self):
        """The rational number this equals, or None; r = -(common coefficient)."""
        c = self.coeffs[0]
        return -c if all(x == c for x in self.coeffs) else None

    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self.p == other.p and self.coeffs == other.coeffs
        try:
            return self == CyclotomicNumber.rational(self.p, Fraction(other))
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def format(self) -> str:
        r = self.rational_value()
        if r is not None:
            return la_format(r)
        terms = [f"{la_format(c)}*z^{k}" for k, c in enumerate(self.coeffs, start=1) if c]
        return " + ".join(terms)

    def __repr__(self):
        return f"Cyclotomic[{self.p}]({self.format()})"


def la_format(r) -> str:
    r = Fraction(r)
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


# -- characters -----------------------------------------------------------------------


def character_value_counts(FA: FiniteAlgebra, orbit_elements, g) -> np.ndarray:
    """How many orbit members take each value ell'(ln g) in F_p."""
    vals = (np.atleast_2d(orbit_elements) @ np.asarray(g, dtype=np.int64)) % FA.p
    return np.bincount(vals, minlength=FA.p)


def kirillov_character(FA: FiniteAlgebra, orbit, g) -> CyclotomicNumber:
    """chi(g) = p^-d sum over the orbit of zeta^(ell'(ln g))."""
    elements = orbit.elements if isinstance(orbit, FiniteOrbit) else np.atleast_2d(orbit)
    d = _half_log(len(elements), FA.p)
    g = np.array([int(x) % FA.p for x in g], dtype=np.int64)
    counts = character_value_counts(FA, elements, g)
    return CyclotomicNumber.from_powers(FA.p, counts.tolist()) / FA.p**d


def _class_value_counts(FA, table: FiniteOrbitTable, class_reps, chunk=256):
    """counts[v][i, c] = #{ell' in orbit i : ell'(class rep c) = v}."""
    p = FA.p
    L = FA.all_vectors().astype(np.float64)
    K = len(class_reps)
    nb = table.count
    counts = np.zeros((p, nb, K), dtype=np.int64)
    reps = class_reps.astype(np.float64)
    lab = table.labels.astype(np.int64)[:, None]
    for c0 in range(0, K, chunk):
        kc = min(chunk, K - c0)
        vals = np.mod(L @ reps[c0 : c0 + kc].T, p).astype(np.int64)
        keys = (lab * kc + np.arange(kc)) * p + vals
        hist = np.bincount(keys.ravel(), minlength=nb * kc * p).reshape(nb, kc, p)
        counts[:, :, c0 : c0 + kc] = hist.transpose(2, 0, 1)
    return counts


def _gram_primes(p, max_q, bound):
    """Primes q = 1 mod p below max_q, largest first, with product > bound."""
    primes = []
    prod = 1
    q = max_q - (max_q - 1) % p  # q = 1 mod p
    while prod <= bound:
        if q <= p:
            raise ValueError("cannot find enough primes for the modular Gram check")
        if sympy.isprime(q):
            primes.append(q)
            prod *= q
        q -= p
    return primes


def _primitive_root_of_unity(p, q) -> int:
    for a in range(2, q):
        w = pow(a, (q - 1) // p, q)
        if w != 1:
            return w
    raise ValueError("no root of unity")


def modular_gram_check(p, counts, class_sizes, orbit_sizes, group_order) -> dict:
    """Exact check that the Gram matrix of the class-function table is diag(|G| |O_i|).

    With S_i(c) = sum over orbit i of zeta^(ell'(c)), T_ij = sum_c |C_c| S_i(c) conj(S_j(c))
    lies in Z[zeta]. Each prime q = 1 mod p splits completely, so checking
    T = D under all embeddings zeta -> w^k into F_q shows q divides T - D;
    with the product of the primes above every complex absolute value bound
    of T - D, T = D exactly. Every float product stays below 2^53.
    """
    K = counts.shape[2]
    bound = 2 * group_order * int(max(orbit_sizes)) ** 2
    max_q = int((2**53 // (K + 1)) ** 0.5)
    primes = _gram_primes(p, max_q, bound)
    sizes = np.asarray(class_sizes, dtype=np.float64)
    flat = counts.reshape(p, -1).astype(np.float64)
    half = (p - 1) // 2
    ok = True
    for q in primes:
        w = _primitive_root_of_unity(p, q)
        target = np.diag((group_order % q) * (np.asarray(orbit_sizes, dtype=np.int64) % q) % q)
        # rows: embeddings zeta -> w^k for k = 1..half, then w^-k
        powers = np.array(
            [[pow(w, k * v % p, q) for v in range(p)] for k in range(1, half + 1)]
            + [[pow(w, -k * v % p, q) for v in range(p)] for k in range(1, half + 1)],
            dtype=np.float64,
        )
        X = np.mod(powers @ flat, q).reshape(2 * half, *counts.shape[1:])
        sz = np.mod(sizes, q)
        for k in range(half):
            Y = np.mod(X[k] * sz, q)
            G = np.mod(Y @ X[half + k].T, q).astype(np.int64)
            if not np.array_equal(G, target):
                ok = False
    return {"orthonormal": ok, "moduli": primes, "bound": bound}


def exact_gram(p, counts, class_sizes, orbit_sizes, group_order) -> list:
    """<chi_i, chi_j> in CyclotomicNumber arithmetic (small tables only)."""
    n_orb, K = counts.shape[1], counts.shape[2]
    chars = [
        [CyclotomicNumber.from_powers(p, counts[:, i, c].tolist()) / _sqrt_power(orbit_sizes[i], p) for c in range(K)]
        for i in range(n_orb)
    ]
    conj = [[x.conjugate() for x in row] for row in chars]
    gram = []
    for i in range(n_orb):
        row = []
        for j in range(n_orb):
            acc = CyclotomicNumber.rational(p, 0)
            for c in range(K):
                acc = acc + chars[i][c] * conj[j][c] * int(class_sizes[c])
            row.append(acc / group_order)
        gram.append(row)
    return gram


def _sqrt_power(size, p):
    return p ** _half_log(int(size), p)


@dataclass
class CharacterTableReport:
    p: int
    group_order: int
    orbit_count: int
    class_count: int
    degrees: list
    degree_square_sum: int
    orthonormal: bool
    exact_gram_checked: bool
    moduli: list

    @property
    def ok(self) -> bool:
        return (
            self.degree_square_sum == self.group_order
            and self.orbit_count == self.class_count
            and self.orthonormal
        )

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "group_order": self.group_order,
            "orbits": self.orbit_count,
            "classes": self.class_count,
            "degree_histogram": {str(d): self.degrees.count(d) for d in sorted(set(self.degrees))},
            "degree_square_sum": self.degree_square_sum,
            "orthonormal": self.orthonormal,
            "exact_gram_checked": self.exact_gram_checked,
            "ok": self.ok,
        }


def verify_character_table(FA: FiniteAlgebra, exact_limit=30, table=None) -> CharacterTableReport:
    """Degrees, orthonormality and the orbit/class count for the whole group."""
    table = table or orbit_table(FA)
    classes = conjugacy_classes(FA)
    identity = np.zeros(FA.n, dtype=np.int64)
    degrees = []
    for i in range(table.count):
        chi1 = kirillov_character(FA, table.orbit(i), identity) if table.sizes[i] <= 4096 else None
        deg = chi1.rational_value() if chi1 is not None else Fraction(int(table.sizes[i]), _sqrt_power(table.sizes[i], FA.p))
        degrees.append(int(deg))
    square_sum = sum(d * d for d in degrees)
    if table.count != classes.count:
        return CharacterTableReport(
            FA.p, FA.order, table.count, classes.count, degrees, square_sum, False, False, []
        )
    counts = _class_value_counts(FA, table, FA.decode(classes.rep_codes))
    mod = modular_gram_check(FA.p, counts, classes.sizes, table.sizes, FA.order)
    orthonormal = mod["orthonormal"]
    exact_checked = False
    if classes.count <= exact_limit:
        gram = exact_gram(FA.p, counts, classes.sizes, table.sizes, FA.order)
        exact_ok = all(gram[i][j] == int(i == j) for i in range(table.count) for j in range(table.count))
        orthonormal = orthonormal and exact_ok
        exact_checked = True
    return CharacterTableReport(
        FA.p, FA.order, table.count, classes.count, degrees, square_sum, orthonormal, exact_checked, mod["moduli"]
    )


# -- distinction ------------------------------------------------------------------------


def _plus_sum_counts(FA, elements, plus_elements, chunk=1 << 22):
    """Histogram of ell'(u) over ell' in the orbit and u in U+."""
    counts = np.zeros(FA.p, dtype=np.int64)
    U = plus_elements.T
    step = max(1, chunk // max(1, len(plus_elements)))
    for s in range(0, len(elements), step):
        vals = (elements[s : s + step] @ U) % FA.p
        counts += np.bincount(vals.ravel(), minlength=FA.p)
    return counts


def distinction_multiplicity(FA: FiniteAlgebra, fsigma: FiniteInvolution, orbit) -> int:
    """|U+|^-1 sum_{u in U+} chi(u), summed exactly and required to be a rational integer."""
    elements = orbit.elements if isinstance(orbit, FiniteOrbit) else np.atleast_2d(orbit)
    d = _half_log(len(elements), FA.p)
    plus = fsigma.plus_elements(FA)
    counts = _plus_sum_counts(FA, elements, plus)
    total = CyclotomicNumber.from_powers(FA.p, counts.tolist()) / (FA.p**d * len(plus))
    m = total.rational_value()
    if m is None or m.denominator != 1 or m < 0:
        raise NonIntegralMultiplicity(f"character pairing {total.format()} is not a nonnegative integer")
    return int(m)


def vanishing_count(FA: FiniteAlgebra, fsigma: FiniteInvolution, orbit) -> int:
    """#{ell' in orbit : ell' vanishes on U+ mod p}."""
    elements = orbit.elements if isinstance(orbit, FiniteOrbit) else np.atleast_2d(orbit)
    if fsigma.plus_dim == 0:
        return len(elements)
    return int(np.count_nonzero(np.all((elements @ fsigma.plus_basis.T) % FA.p == 0, axis=1)))


def plus_orbit_bfs(FA: FiniteAlgebra, fsigma: FiniteInvolution, ell) -> FiniteOrbit:
    """Orbit of ell under U+(F_p) = exp(U+ mod p), generated by exp of a basis of U+."""
    return orbit_bfs(FA, ell, generators=list(fsigma.plus_basis))


def distinction_table(FA: FiniteAlgebra, fsigma: FiniteInvolution, table: FiniteOrbitTable) -> list:
    """(multiplicity, vanishing count, p^d) for every orbit, one orbit at a time."""
    rows = []
    for i in range(table.count):
        orb = table.orbit(i)
        rows.append((distinction_multiplicity(FA, fsigma, orb), vanishing_count(FA, fsigma, orb), FA.p**orb.half_dim))
    return rows


def distinction_table_arrays(FA: FiniteAlgebra, fsigma: FiniteInvolution, table: FiniteOrbitTable, chunk=1 << 22):
    """Vectorized distinction_table: arrays (multiplicity, vanishing count, p^d) over all orbits.

    The character sums over U+ are accumulated for every functional at once
    as histograms of ell'(u) per orbit; each orbit's total is then turned
    into a cyclotomic number and required to be a rational integer.
    """
    p = FA.p
    L = FA.all_vectors()
    plus = fsigma.plus_elements(FA)
    nb = table.count
    hist = np.zeros(nb * p, dtype=np.int64)
    step = max(1, chunk // len(plus))
    Lf, Uf = L.astype(np.float64), plus.T.astype(np.float64)
    for s in range(0, len(L), step):
        vals = np.mod(Lf[s : s + step] @ Uf, p).astype(np.int64)
        keys = table.labels[s : s + step, None].astype(np.int64) * p + vals
        hist += np.bincount(keys.ravel(), minlength=nb * p)
    hist = hist.reshape(nb, p)
    degrees = np.array([p**d for d in table.half_dims()], dtype=np.int64)
    mult = np.zeros(nb, dtype=np.int64)
    for i in range(nb):
        total = CyclotomicNumber.from_powers(p, hist[i].tolist()) / (int(degrees[i]) * len(plus))
        m = total.rational_value()
        if m is None or m.denominator != 1 or m < 0:
            raise NonIntegralMultiplicity(f"orbit {i}: character pairing {total.format()} is not a nonnegative integer")
        mult[i] = int(m)
    if fsigma.plus_dim:
        van = np.all((L @ fsigma.plus_basis.T) % p == 0, axis=1)
    else:
        van = np.ones(len(L), dtype=bool)
    vanish = np.bincount(table.labels, weights=van, minlength=nb).astype(np.int64)
    return mult, vanish, degrees


# -- comparing rational and mod-p data ---------------------------------------------------


def jump_set_by_rank(A: NilpotentAlgebra, ell, flag=None, acting=None, p=None) -> tuple:
    """Jump indices as rank increments of X -> (ell([X, f_j]))_{j <= i}, over Q or mod p."""
    ell = _functional(A, ell)
    F = jordan_holder_basis(A) if flag is None else flag
    B = skew_form(A, ell)
    H = list(acting.basis) if acting is not None else [A.unit(a) for a in range(A.dim)]
    HB = [la.vecmat(h, B) for h in H]
    cols = [[la.dot(row, f) for row in HB] for f in F]  # column i as a list over H
    jumps = []
    prev = 0
    for i in range(1, A.dim + 1):
        rows = la.transpose(cols[:i])
        if p is None:
            r = la.rank(rows)
        else:
            r = rank_mod_p([[mod_p(x, p) for x in row] for row in rows], p)
        if r > prev:
            jumps.append(i)
        prev = r
    return tuple(jumps)


def _reduction_data(A, ell, p, flag, acting):
    """Canonical form of ell if its reduction mod p is faithful, else None."""
    if not is_p_integral(ell, p):
        return None
    cf = orbit_canonical_form(A, ell, flag=flag, acting=acting)
    if not (is_p_integral(cf.canonical_rep, p) and is_p_integral(cf.conjugator.log_coords, p)):
        return None
    if jump_set_by_rank(A, ell, flag, acting, p) != cf.jump_set:
        return None
    return cf


def predicted_mod_p_relation(A, ell, ell2, p, flag=None, acting=None):
    """Whether ell, ell2 must be in one orbit mod p, from rational data; None if undecidable.

    Same rational orbit with a p-integral conjugator forces the same orbit mod p.
    Different rational orbits force different orbits mod p when both
    reductions are faithful (same jump sets, p-integral canonical data) and
    the canonical representatives stay distinct mod p.
    """
    c1 = _reduction_data(A, ell, p, flag, acting)
    c2 = _reduction_data(A, ell2, p, flag, acting)
    if c1 is None or c2 is None:
        return None
    if c1.same_class(c2):
        g = multiply(inverse(c2.conjugator), c1.conjugator)
        return True if is_p_integral(g.log_coords, p) else None
    if c1.jump_set != c2.jump_set:
        return False
    if reduce_vector(c1.canonical_rep, p) == reduce_vector(c2.canonical_rep, p):
        return None
    return False


@dataclass
class CrossValidationRow:
    functional: tuple
    p: int
    multiplicity: int
    classifier: bool
    prediction: bool | None
    witness_ok: bool | None
    orbit_size: int

    @property
    def agrees(self) -> bool:
        if self.multiplicity not in (0, 1):
            return False
        if self.prediction is None:
            return True
        return (self.multiplicity == 1) == self.prediction and self.witness_ok is not False

    def to_dict(self) -> dict:
        return {
            "functional": [la_format(c) for c in self.functional],
            "p": self.p,
            "multiplicity": self.multiplicity,
            "classifier": self.classifier,
            "comparable": self.prediction is not None,
            "agrees": self.agrees,
            "orbit_size": self.orbit_size,
        }


def cross_validate(A: NilpotentAlgebra, sigma, primes, sample) -> list:
    """Rational distinction verdicts against brute-force multiplicities mod p."""
    from .involution import classify_distinction, dual_sigma_action, sigma_stable_flag

    flag = sigma_stable_flag(sigma)
    rows = []
    for ell in sample:
        ell = _functional(A, ell)
        verdict = classify_distinction(A, sigma, ell)
        for p in primes:
            FA = reduce_mod_p(A, p, check=False)
            fs = reduce_involution(FA, sigma)
            if not is_p_integral(ell, p):
                continue
            orb = orbit_bfs(FA, reduce_vector(ell, p))
            mult = distinction_multiplicity(FA, fs, orb)
            prediction = predicted_mod_p_relation(A, dual_sigma_action(sigma, ell), ell, p, flag=flag)
            witness_ok = None
            if verdict.distinguished and is_p_integral(verdict.witness + verdict.conjugator.log_coords, p):
                w = FA.vector(verdict.witness)
                witness_ok = orb.contains_code(int(FA.encode(w))) and not np.any((fs.plus_basis @ w) % p)
            rows.append(CrossValidationRow(ell, p, mult, verdict.distinguished, prediction, witness_ok, orb.size))
    return rows
