"""Coadjoint orbits of the Heisenberg algebra, over Q and mod 5.

Run: python3 demos/heisenberg_orbits.py
"""

from fractions import Fraction

from kirillov import entry, orbit_canonical_form, same_orbit, vergne_polarization
from kirillov.finite_model import orbit_bfs, orbit_table, reduce_mod_p

H = entry("heisenberg3").algebra()

for ell in [(5, 0, 1), (0, 3, 1), (0, 0, 2), (1, 2, 0)]:
    cf = orbit_canonical_form(H, ell)
    V = vergne_polarization(H, ell).subalgebra
    print(f"ell = {ell}: canonical {tuple(map(str, cf.canonical_rep))}, jumps {cf.jump_set}, "
          f"polarization dim {V.dim}")

same, g = same_orbit(H, (0, 0, 1), (0, 3, 1))
print("z* ~ z* + 3y*:", same, "via exp of", tuple(map(str, g.log_coords)))
print("z* ~ 2z*:", same_orbit(H, (0, 0, 1), (0, 0, 2))[0])

FA = reduce_mod_p(H, 5)
table = orbit_table(FA)
print(f"mod 5: {table.count} orbits, sizes {sorted(set(table.sizes.tolist()))}")
print("orbit of z* mod 5 has", orbit_bfs(FA, (0, 0, 1)).size, "elements")
print("half-integers stay exact:", [str(c) for c in orbit_canonical_form(H, (Fraction(1, 2), Fraction(1, 3), 3)).canonical_rep])
