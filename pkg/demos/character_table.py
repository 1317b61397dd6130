"""Kirillov characters of H5 mod 7 against the conjugacy classes of the group.

Run: python3 demos/character_table.py
"""

import time

from kirillov.catalog import entry
from kirillov.finite_model import orbit_table, reduce_mod_p, verify_character_table

for name, p in [("heisenberg3", 3), ("n4", 5), ("heisenberg5", 7)]:
    start = time.perf_counter()
    FA = reduce_mod_p(entry(name).algebra(), p)
    report = verify_character_table(FA, table=orbit_table(FA))
    print(f"{name} mod {p} ({time.perf_counter() - start:.1f} s):", report.to_dict())
