"""The Heisenberg algebra over Q(i) seen as a six-dimensional rational algebra.

Run: python3 demos/restriction_of_scalars.py
"""

from kirillov import load_algebra, restrict_algebra, vergne_polarization
from kirillov.catalog import entry
from kirillov.res_scalars import (
    check_orbit_injection,
    check_polarization_correspondence,
    functional_map_is_bijective,
    gaussian_field,
    restrict_functional,
)

F = gaussian_field()
A = load_algebra(entry("heisenberg3").spec, field=F)
RA = restrict_algebra(A, F)
print("restricted algebra:", RA.algebra.basis_names, "class", RA.algebra.nilpotency_class)
print("trace map on functionals bijective:", functional_map_is_bijective(RA))

ell = (F.zero, F([0, 1]), F([1, 1]))
print("ell =", [F.format_text(c) for c in ell], "-> ell_K =", [str(c) for c in restrict_functional(RA, ell)])
V = vergne_polarization(A, ell).subalgebra
print("polarization correspondence:", check_polarization_correspondence(RA, ell, V))
other = (F([2, -1]), F.zero, F([1, 1]))
print("orbit comparison:", check_orbit_injection(RA, ell, other))
