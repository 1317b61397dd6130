"""Which orbits are distinguished by an involution, over Q and mod p.

For each catalog involution the rational classifier is compared with the
brute-force multiplicity dim Hom_{U+}(pi, 1) computed from characters mod p.

Run: python3 demos/distinction_sweep.py [prime]
"""

import sys

import numpy as np

from kirillov.catalog import catalog
from kirillov.errors import InadmissiblePrime
from kirillov.finite_model import (
    cross_validate,
    distinction_table_arrays,
    orbit_table,
    reduce_involution,
    reduce_mod_p,
)

p = int(sys.argv[1]) if len(sys.argv) > 1 else 5

for e in catalog():
    A = e.algebra()
    try:
        FA = reduce_mod_p(A, p)
    except InadmissiblePrime as exc:
        print(f"{e.name}: skipped ({exc})")
        continue
    table = orbit_table(FA)
    for name in e.involutions:
        sigma = e.involution(name, A)
        mult, vanish, degree = distinction_table_arrays(FA, reduce_involution(FA, sigma), table)
        rows = cross_validate(A, sigma, [p], [tuple(v) for v in e.functionals.values()])
        print(
            f"{e.name}/{name}: {table.count} orbits mod {p}, {int(np.sum(mult))} distinguished, "
            f"multiplicities {sorted(set(mult.tolist()))}, rational lifts agree: {all(r.agrees for r in rows)}"
        )
