"""Exact orbit-method computations for rational nilpotent Lie algebras.

Coadjoint orbits, polarizations and orbit canonical forms over Q and number
fields, involution-stable constructions for distinction, and a brute-force
model over Z/p that checks the rational answers against character theory.
"""

from .errors import KirillovError
from .fields import QQ
from .lie import NilpotentAlgebra, load_algebra
from .group import GroupElement, bch, multiply, inverse
from .coadjoint import orbit_canonical_form, orbit_dim, same_orbit, vergne_polarization
from .involution import Involution, classify_distinction, load_involution, sigma_kirillov_decomposition
from .res_scalars import NumberField, load_field, restrict_algebra
from .finite_model import orbit_table, reduce_mod_p, verify_character_table
from .catalog import RunConfig, catalog, entry

__version__ = "0.1.0"

__all__ = [
    "KirillovError",
    "QQ",
    "NilpotentAlgebra",
    "load_algebra",
    "GroupElement",
    "bch",
    "multiply",
    "inverse",
    "orbit_canonical_form",
    "orbit_dim",
    "same_orbit",
    "vergne_polarization",
    "Involution",
    "classify_distinction",
    "load_involution",
    "sigma_kirillov_decomposition",
    "NumberField",
    "load_field",
    "restrict_algebra",
    "orbit_table",
    "reduce_mod_p",
    "verify_character_table",
    "RunConfig",
    "catalog",
    "entry",
]
