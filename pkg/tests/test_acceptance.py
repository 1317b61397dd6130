"""Acceptance gate: every criterion on the default configuration.

Each criterion prints one PASS/FAIL line (collected again in the terminal
summary). Criterion 9 reruns 1-8 with two threads and compares report bytes
against the cached single-thread results.
"""

import time

import pytest

from kirillov.acceptance import CRITERIA_NAMES, assemble_report, determinism_check, run_criterion
from kirillov.catalog import RunConfig, entry
from kirillov.finite_model import orbit_table, reduce_mod_p, verify_character_table

CONFIG = RunConfig()
BOUNDS = {1: 5, 2: 10, 3: 60, 4: 60, 5: 120, 6: 10, 7: 10, 8: 30}
RESULTS = {}
SUMMARY = []


def record(cid, passed, note, name=None):
    line = f"criterion {cid} [{name or CRITERIA_NAMES[cid]}]: {'PASS' if passed else 'FAIL'} ({note})"
    SUMMARY.append(line)
    print(line)


@pytest.mark.parametrize("cid", sorted(BOUNDS))
def test_criterion(cid):
    result, seconds = run_criterion(cid, CONFIG)
    RESULTS[cid] = result
    within = seconds < BOUNDS[cid]
    record(cid, result["passed"] and within, f"{seconds:.1f} s, bound {BOUNDS[cid]} s")
    assert result["passed"], result["details"]
    assert within, f"took {seconds:.1f} s"


def test_heisenberg5_mod_7_pipeline_time():
    start = time.perf_counter()
    FA = reduce_mod_p(entry("heisenberg5").algebra(), 7)
    report = verify_character_table(FA, table=orbit_table(FA))
    seconds = time.perf_counter() - start
    record(4, report.ok and seconds < 10, f"{seconds:.1f} s, bound 10 s", "H5 mod 7 full pipeline")
    assert report.ok and report.orbit_count == report.class_count
    assert seconds < 10


def test_determinism():
    missing = [cid for cid in BOUNDS if cid not in RESULTS]
    for cid in missing:
        RESULTS[cid], _ = run_criterion(cid, CONFIG)
    baseline = assemble_report(CONFIG, [RESULTS[cid] for cid in CONFIG.criteria])
    outcome = determinism_check(CONFIG, baseline_report=baseline, other_threads=2)
    record(9, outcome["passed"], f"threads {outcome['threads']}", outcome["name"])
    assert outcome["passed"]
