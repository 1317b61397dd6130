"""Built-in algebras, involutions and functionals, and run configuration."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from .errors import MalformedSpec
from .fields import format_rational
from .involution import Involution, load_involution
from .lie import NilpotentAlgebra, load_algebra
from .res_scalars import BUILTIN_FIELDS, field_conjugation, gaussian_field, load_field, restrict_algebra


def _spec(name, basis, brackets):
    """brackets: {(i, j): {k: c}}."""
    return {
        "name": name,
        "dim": len(basis),
        "basis": list(basis),
        "brackets": [
            {"i": i, "j": j, "coeffs": {str(k): str(c) for k, c in vec.items()}}
            for (i, j), vec in sorted(brackets.items())
        ],
    }


def _diag(signs):
    n = len(signs)
    return [[signs[i] if i == j else 0 for j in range(n)] for i in range(n)]


def _from_images(images):
    """Matrix whose column j is the image of e_j."""
    n = len(images)
    return [[images[j][i] for j in range(n)] for i in range(n)]


def _unit(n, i, c=1):
    v = [0] * n
    v[i] = c
    return v


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    spec: dict
    involutions: dict  # name -> (matrix, provenance)
    functionals: dict  # name -> tuple of strings
    note: str = ""

    def algebra(self) -> NilpotentAlgebra:
        return load_algebra(self.spec)

    def involution(self, name, A=None) -> Involution:
        A = A or self.algebra()
        matrix, provenance = self.involutions[name]
        return load_involution(A, matrix, name=name, provenance=provenance)


def _heisenberg3():
    spec = _spec("heisenberg3", ["x", "y", "z"], {(0, 1): {2: 1}})
    return CatalogEntry(
        "heisenberg3",
        spec,
        {
            "sign": (_diag([-1, 1, -1]), "x -> -x, y -> y, z -> -z"),
            "swap": (_from_images([[0, -1, 0], [-1, 0, 0], [0, 0, -1]]), "x -> -y, y -> -x, z -> -z"),
            "identity": (_diag([1, 1, 1]), "trivial involution; only the zero orbit is distinguished"),
        },
        {"zero": ("0", "0", "0"), "z": ("0", "0", "1"), "z+5x": ("5", "0", "1"), "x": ("1", "0", "0")},
        "Heisenberg algebra [x, y] = z",
    )


def _heisenberg5():
    spec = _spec("heisenberg5", ["x1", "y1", "x2", "y2", "z"], {(0, 1): {4: 1}, (2, 3): {4: 1}})
    return CatalogEntry(
        "heisenberg5",
        spec,
        {
            "sign": (_diag([-1, 1, -1, 1, -1]), "x_i -> -x_i, y_i -> y_i, z -> -z"),
            "swap_pairs": (
                _from_images([_unit(5, 2), _unit(5, 3), _unit(5, 0), _unit(5, 1), _unit(5, 4)]),
                "(x1, y1) <-> (x2, y2), z -> z",
            ),
        },
        {"zero": ("0",) * 5, "z": ("0", "0", "0", "0", "1"), "y1": ("0", "1", "0", "0", "0")},
        "five-dimensional Heisenberg algebra with two hyperbolic pairs",
    )


def _n4():
    names = ["E12", "E13", "E14", "E23", "E24", "E34"]
    spec = _spec("n4", names, {(0, 3): {1: 1}, (0, 4): {2: 1}, (1, 5): {2: 1}, (3, 5): {4: 1}})
    # E_ij -> d_i d_j E_ij with d = (1, -1, 1, -1)
    d = {1: 1, 2: -1, 3: 1, 4: -1}
    pairs = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    sign = _diag([d[i] * d[j] for i, j in pairs])
    # X -> -J X^T J: E_ij -> -E_{5-j, 5-i}
    index = {ij: k for k, ij in enumerate(pairs)}
    flip = _from_images([_unit(6, index[(5 - j, 5 - i)], -1) for i, j in pairs])
    return CatalogEntry(
        "n4",
        spec,
        {
            "sign": (sign, "conjugation by diag(1, -1, 1, -1)"),
            "flip": (flip, "X -> -J X^T J with J the antidiagonal matrix"),
        },
        {"zero": ("0",) * 6, "E14": ("0", "0", "1", "0", "0", "0"), "E12+E34": ("1", "0", "0", "0", "0", "1")},
        "strictly upper triangular 4 x 4 matrices",
    )


def _free2():
    names = ["a", "b", "c", "ab", "ac", "bc"]
    spec = _spec("free2", names, {(0, 1): {3: 1}, (0, 2): {4: 1}, (1, 2): {5: 1}})
    swap = _from_images([_unit(6, 1), _unit(6, 0), _unit(6, 2), _unit(6, 3, -1), _unit(6, 5), _unit(6, 4)])
    return CatalogEntry(
        "free2",
        spec,
        {
            "sign": (_diag([-1, -1, -1, 1, 1, 1]), "generators -> -generators, brackets fixed"),
            "swap_ab": (swap, "a <-> b, c -> c"),
        },
        {"zero": ("0",) * 6, "ab": ("0", "0", "0", "1", "0", "0"), "bc+a": ("1", "0", "0", "0", "0", "1")},
        "free 2-step nilpotent algebra on three generators",
    )


def _heisenberg3_gaussian():
    F = gaussian_field()
    H = load_algebra(_heisenberg3().spec, field=F)
    RA = restrict_algebra(H, F)
    R = RA.algebra
    spec = R.to_spec()
    spec["name"] = "heisenberg3_gaussian"
    conj = field_conjugation(F)
    n = H.dim
    galois = [[conj[r % 2][c % 2] if r // 2 == c // 2 else 0 for c in range(2 * n)] for r in range(2 * n)]
    sign = _diag([s for s in (-1, 1, -1) for _ in range(2)])
    return CatalogEntry(
        "heisenberg3_gaussian",
        spec,
        {
            "galois": (galois, "complex conjugation of Q(i) acting on Res H3; fixed algebra H3(Q)"),
            "sign": (sign, "x -> -x, y -> y, z -> -z extended Q(i)-linearly"),
        },
        {"zero": ("0",) * 6, "z_i": ("0", "0", "0", "0", "0", "1"), "z_1": ("0", "0", "0", "0", "1", "0")},
        "Heisenberg algebra over Q(i) viewed as a six-dimensional rational algebra",
    )


_BUILDERS = {
    "heisenberg3": _heisenberg3,
    "heisenberg5": _heisenberg5,
    "n4": _n4,
    "free2": _free2,
    "heisenberg3_gaussian": _heisenberg3_gaussian,
}

CORE_ALGEBRAS = ("heisenberg3", "heisenberg5", "n4", "free2")
CATALOG_NAMES = tuple(_BUILDERS)


def catalog() -> list:
    return [build() for build in _BUILDERS.values()]


def entry(name) -> CatalogEntry:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise MalformedSpec(f"no built-in algebra named {name!r}; known: {sorted(_BUILDERS)}") from None


def _read_json(ref):
    path = Path(ref)
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise MalformedSpec(f"{ref}: invalid JSON ({exc})") from exc


def resolve_algebra(ref) -> tuple:
    """``builtin:NAME`` or a JSON file; returns (algebra, catalog entry or None)."""
    if isinstance(ref, str) and ref.startswith("builtin:"):
        e = entry(ref.split(":", 1)[1])
        return e.algebra(), e
    return load_algebra(_read_json(ref)), None


def resolve_involution(ref, A, catalog_entry=None) -> Involution:
    if isinstance(ref, str) and ref.startswith("builtin:"):
        name = ref.split(":", 1)[1]
        if catalog_entry is None or name not in catalog_entry.involutions:
            known = sorted(catalog_entry.involutions) if catalog_entry else []
            raise MalformedSpec(f"no built-in involution {name!r} for this algebra; known: {known}")
        return catalog_entry.involution(name, A)
    return load_involution(A, _read_json(ref), name=Path(ref).stem, provenance=str(ref))


def resolve_field(ref):
    if isinstance(ref, str) and ref.startswith("builtin:"):
        name = ref.split(":", 1)[1]
        if name not in BUILTIN_FIELDS:
            raise MalformedSpec(f"no built-in field {name!r}; known: {sorted(BUILTIN_FIELDS)}")
        return BUILTIN_FIELDS[name]()
    return load_field(_read_json(ref), name=Path(ref).stem)


def involution_pairs(names=None) -> list:
    """(entry name, involution name) for every catalog involution."""
    out = []
    for e in catalog():
        if names is None or e.name in names:
            out.extend((e.name, inv) for inv in e.involutions)
    return out


@dataclass(frozen=True)
class RunConfig:
    primes: tuple = (3, 5, 7)
    extra_primes: tuple = (11, 13)  # fill-ins when a configured prime is inadmissible
    algebras: tuple = CORE_ALGEBRAS
    fact1_samples: int = 100
    group_samples: int = 100
    orbit_pairs: int = 50
    sigma_samples: int = 50
    res_samples: int = 30
    param_pairs: int = 20
    lift_samples: int = 40
    witness_depth: int = 3
    seed: int = 20240611
    threads: int = 1
    output_dir: str | None = None
    criteria: tuple = (1, 2, 3, 4, 5, 6, 7, 8)

    def to_dict(self) -> dict:
        """Everything that influences results (threads and output location do not)."""
        d = asdict(self)
        d.pop("threads")
        d.pop("output_dir")
        return d


def format_vector(v) -> list:
    return [format_rational(c) for c in v]
