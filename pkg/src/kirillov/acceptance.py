"""The acceptance suite: eight exact checks plus a determinism rerun.

Each criterion returns a JSON-ready dict; nothing time- or thread-dependent
goes into it, so reports are byte-identical across runs and thread counts.
Wall-clock timings are returned separately.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import linalg as la
from .catalog import CATALOG_NAMES, RunConfig, entry, format_vector, involution_pairs, resolve_algebra
from .coadjoint import (
    is_polarized,
    is_subordinate,
    orbit_dim,
    same_orbit,
    vergne_polarization,
)
from .errors import InadmissiblePrime, KirillovError
from .finite_model import (
    admissibility_problem,
    distinction_table_arrays,
    is_p_integral,
    lift_symmetric,
    orbit_bfs,
    orbit_table,
    plus_orbit_bfs,
    predicted_mod_p_relation,
    reduce_involution,
    reduce_mod_p,
    reduce_vector,
    verify_character_table,
)
from .group import (
    GroupElement,
    adjoint,
    bch,
    coadjoint_apply,
    complementary_basis,
    inverse,
    multiply,
    phi_coords,
    phi_inverse,
)
from .involution import (
    cdual_parametrization_check,
    classify_distinction,
    dual_sigma_action,
    sigma_kirillov_decomposition,
    sigma_stable_flag,
    sigma_stable_polarization,
    vanishes_on_plus,
)
from .lie import NilpotentAlgebra, is_subalgebra, load_algebra
from .res_scalars import (
    check_orbit_injection,
    check_stabilizer_dimension,
    functional_map_is_bijective,
    gaussian_field,
    restrict_algebra,
    sqrt2_field,
    vergne_pair_over_field,
)

SCHEMA_VERSION = 1

CRITERIA_NAMES = {
    1: "polarization dimension and subordination",
    2: "group law identities",
    3: "orbit equality against the mod-p oracle",
    4: "finite character tables",
    5: "multiplicity one and the distinction criterion mod p",
    6: "involution-stable decompositions and polarizations",
    7: "restriction of scalars",
    8: "orbit parametrization under U+",
}


# -- random data ---------------------------------------------------------------


def rng_for(config: RunConfig, *labels) -> random.Random:
    return random.Random(":".join(str(x) for x in (config.seed,) + labels))


def small_rational(rng, height=3) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.choice((1, 1, 2)))


def random_vector(rng, n, height=3, field=None):
    v = tuple(small_rational(rng, height) for _ in range(n))
    return v if field is None else tuple(field(c) for c in v)


def random_field_vector(rng, n, F, height=3):
    return tuple(F([small_rational(rng, height) for _ in range(F.degree)]) for _ in range(n))


def random_in_subspace(rng, V, height=2):
    coeffs = [small_rational(rng, height) for _ in V.basis]
    return la.combination(coeffs, V.basis, V.ambient, V.field)


def random_anti_invariant(rng, sigma, height=3):
    """Random functional vanishing on U+ (combination of the annihilator basis)."""
    ann = sigma.plus_space.annihilator()
    n = sigma.algebra.dim
    coeffs = [small_rational(rng, height) for _ in ann]
    return la.combination(coeffs, ann, n, sigma.algebra.field)


def admissible_primes(A: NilpotentAlgebra, config: RunConfig, count=3):
    """First ``count`` admissible primes from the configured list, then the fill-ins."""
    chosen, skipped = [], {}
    for p in tuple(config.primes) + tuple(config.extra_primes):
        if len(chosen) == count:
            break
        reason = admissibility_problem(A, p)
        if reason is None:
            chosen.append(p)
        elif p in config.primes:
            skipped[str(p)] = reason
    return chosen, skipped


def configured_admissible(A, config: RunConfig):
    chosen, skipped = [], {}
    for p in config.primes:
        reason = admissibility_problem(A, p)
        if reason is None:
            chosen.append(p)
        else:
            skipped[str(p)] = reason
    return chosen, skipped


def _map(config: RunConfig, fn, items):
    items = list(items)
    if config.threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        return list(pool.map(fn, items))


def _algebras(config):
    """(label, algebra) for the configured algebras: catalog names, builtin:NAME or JSON files."""
    out = []
    for ref in config.algebras:
        if ref in CATALOG_NAMES:
            ref = f"builtin:{ref}"
        out.append((ref.removeprefix("builtin:"), resolve_algebra(ref)[0]))
    return out


# -- criteria ---------------------------------------------------------------------


def criterion_1(config: RunConfig) -> dict:
    def run(item):
        name, A = item
        rng = rng_for(config, 1, name)
        failures = []
        for _ in range(config.fact1_samples):
            ell = random_vector(rng, A.dim)
            r = orbit_dim(A, ell)
            pair = vergne_polarization(A, ell)
            V = pair.subalgebra
            ok = r % 2 == 0 and V.dim == A.dim - r // 2 and is_subordinate(A, ell, V) and is_subalgebra(A, V)
            if not ok:
                failures.append(format_vector(ell))
        return name, {"samples": config.fact1_samples, "failures": failures}

    details = dict(_map(config, run, _algebras(config)))
    return _result(1, all(not d["failures"] for d in details.values()), details)


def criterion_2(config: RunConfig) -> dict:
    def run(item):
        name, A = item
        rng = rng_for(config, 2, name)
        n = A.dim
        counts = {"associativity": 0, "inverse": 0, "adjoint": 0, "phi_round_trip": 0}
        for _ in range(config.group_samples):
            a, b, c = (random_vector(rng, n) for _ in range(3))
            if bch(A, bch(A, a, b), c) != bch(A, a, bch(A, b, c)):
                counts["associativity"] += 1
            g = GroupElement.exp(A, a)
            if not multiply(g, inverse(g)).is_identity() or not multiply(inverse(g), g).is_identity():
                counts["inverse"] += 1
            h = GroupElement.exp(A, b)
            Ag, Ah = adjoint(g), adjoint(h)
            hom = la.mat_eq(adjoint(multiply(g, h)), la.matmul(Ag, Ah))
            brackets = la.matvec(Ag, A.bracket(b, c)) == A.bracket(la.matvec(Ag, b), la.matvec(Ag, c))
            N = [[x - (1 if i == j else 0) for j, x in enumerate(row)] for i, row in enumerate(Ag)]
            P = la.identity(n)
            for _ in range(A.nilpotency_class):
                P = la.matmul(P, N)
            if not (hom and brackets and not any(any(row) for row in P)):
                counts["adjoint"] += 1
            # complementary basis of a polarization (a subalgebra) of a random functional
            M = vergne_polarization(A, c).subalgebra
            B = complementary_basis(A, M)
            m = random_in_subspace(rng, M)
            t = tuple(small_rational(rng) for _ in B.vectors)
            g2 = phi_coords(B, m, t)
            back = phi_inverse(B, g2)
            m2, t2 = phi_inverse(B, g)
            if back != (m, t) or phi_coords(B, m2, t2) != g:
                counts["phi_round_trip"] += 1
        return name, {"samples": config.group_samples, "failures": counts}

    details = dict(_map(config, run, _algebras(config)))
    return _result(2, all(not any(d["failures"].values()) for d in details.values()), details)


def criterion_3(config: RunConfig) -> dict:
    def run(item):
        name, A = item
        rng = rng_for(config, 3, name)
        primes, skipped = admissible_primes(A, config)
        finite = {p: reduce_mod_p(A, p) for p in primes}
        stats = {"pairs": 0, "same_over_Q": 0, "compared": 0, "not_comparable": 0, "mismatches": []}
        for k in range(config.orbit_pairs):
            ell = random_vector(rng, A.dim)
            if k % 2 == 0:
                g = GroupElement.exp(A, random_vector(rng, A.dim, height=2))
                ell2 = coadjoint_apply(g, ell)
            else:
                ell2 = random_vector(rng, A.dim)
            same, conj = same_orbit(A, ell, ell2)
            if same and coadjoint_apply(conj, ell) != ell2:
                stats["mismatches"].append({"pair": [format_vector(ell), format_vector(ell2)], "p": None})
            stats["pairs"] += 1
            stats["same_over_Q"] += int(same)
            for p in primes:
                prediction = predicted_mod_p_relation(A, ell, ell2, p)
                if prediction is None:
                    stats["not_comparable"] += 1
                    continue
                FA = finite[p]
                orb = orbit_bfs(FA, reduce_vector(ell, p))
                member = orb.contains_code(int(FA.encode(np.array(reduce_vector(ell2, p)))))
                stats["compared"] += 1
                if member != prediction:
                    stats["mismatches"].append(
                        {"pair": [format_vector(ell), format_vector(ell2)], "p": p, "bfs": member, "rational": same}
                    )
        stats["primes"] = primes
        stats["skipped_primes"] = skipped
        return name, stats

    details = dict(_map(config, run, _algebras(config)))
    ok = all(not d["mismatches"] and len(d["primes"]) == 3 for d in details.values())
    return _result(3, ok, details)


CHARACTER_TABLE_RUNS = (("heisenberg3", (3, 5, 7)), ("heisenberg5", (3, 5, 7)), ("n4", (5, 7)))


def criterion_4(config: RunConfig) -> dict:
    items = [(name, p) for name, ps in CHARACTER_TABLE_RUNS for p in ps]

    def run(item):
        name, p = item
        A = entry(name).algebra()
        report = verify_character_table(reduce_mod_p(A, p))
        return f"{name} mod {p}", report.to_dict()

    details = dict(_map(config, run, items))
    return _result(4, all(d["ok"] for d in details.values()), details)


def criterion_5(config: RunConfig) -> dict:
    names = sorted({name for name, _ in involution_pairs()})

    def run(name):
        e = entry(name)
        A = e.algebra()
        sigmas = {inv: e.involution(inv, A) for inv in e.involutions}
        flags = {inv: sigma_stable_flag(s) for inv, s in sigmas.items()}
        primes, skipped = configured_admissible(A, config)
        out = {}
        for p in primes:
            FA = reduce_mod_p(A, p)
            table = orbit_table(FA)
            for inv, sigma in sigmas.items():
                fs = reduce_involution(FA, sigma)
                mult, vanish, degree = distinction_table_arrays(FA, fs, table)
                bad_mult = int(np.count_nonzero((mult != 0) & (mult != 1)))
                bad_criterion = int(np.count_nonzero((mult == 1) != (vanish > 0)))
                bad_count = int(np.count_nonzero((mult == 1) & (vanish != degree)))
                # rational lifts of evenly spaced orbit representatives
                step = max(1, table.count // config.lift_samples)
                lifts = {"checked": 0, "compared": 0, "mismatches": []}
                for i in range(0, table.count, step):
                    ell = lift_symmetric(table.representative(i), p)
                    verdict = classify_distinction(A, sigma, ell)
                    lifts["checked"] += 1
                    prediction = predicted_mod_p_relation(A, dual_sigma_action(sigma, ell), ell, p, flag=flags[inv])
                    if prediction is None:
                        continue
                    lifts["compared"] += 1
                    agree = (int(mult[i]) == 1) == prediction and prediction == verdict.distinguished
                    if verdict.distinguished and is_p_integral(verdict.witness + verdict.conjugator.log_coords, p):
                        w = reduce_vector(verdict.witness, p)
                        agree = agree and table.orbit_of(w) == i and not np.any((fs.plus_basis @ np.array(w)) % p)
                    if not agree:
                        lifts["mismatches"].append({"functional": format_vector(ell), "multiplicity": int(mult[i])})
                out[f"{inv} mod {p}"] = {
                    "orbits": table.count,
                    "distinguished_orbits": int(np.count_nonzero(mult == 1)),
                    "bad_multiplicity": bad_mult,
                    "criterion_failures": bad_criterion,
                    "counting_failures": bad_count,
                    "lifts": lifts,
                }
        return name, {"runs": out, "skipped_primes": skipped}

    details = dict(_map(config, run, names))
    ok = all(
        r["bad_multiplicity"] == 0 and r["criterion_failures"] == 0 and r["counting_failures"] == 0
        and not r["lifts"]["mismatches"]
        for d in details.values()
        for r in d["runs"].values()
    )
    return _result(5, ok, details)


def criterion_6(config: RunConfig) -> dict:
    items = [(name, inv) for name, inv in involution_pairs()]

    def run(item):
        name, inv = item
        e = entry(name)
        A = e.algebra()
        sigma = e.involution(inv, A)
        out = {}
        if A.center.dim == 1:
            dec = sigma_kirillov_decomposition(A, sigma)
            out["decomposition"] = dec.check(A, sigma)
            out["parities"] = [dec.parity_x, dec.parity_y, dec.parity_z]
            out["W_dim"] = dec.W.dim
        else:
            out["decomposition_skipped"] = "center is not one-dimensional"
        rng = rng_for(config, 6, name, inv)
        failures = 0
        for _ in range(config.sigma_samples):
            ell = random_anti_invariant(rng, sigma)
            pair = sigma_stable_polarization(A, sigma, ell)
            ok, _ = is_polarized(A, ell, pair.subalgebra)
            if not (ok and sigma.is_stable(pair.subalgebra)):
                failures += 1
        out["polarization_samples"] = config.sigma_samples
        out["polarization_failures"] = failures
        return f"{name}/{inv}", out

    details = dict(_map(config, run, items))
    ok = all(
        all(d.get("decomposition", {}).values()) and d["polarization_failures"] == 0 for d in details.values()
    )
    return _result(6, ok, details)


def criterion_7(config: RunConfig) -> dict:
    items = [(a, f) for a in ("heisenberg3", "heisenberg5") for f in ("gaussian", "sqrt2")]
    builders = {"gaussian": gaussian_field, "sqrt2": sqrt2_field}

    def run(item):
        name, fname = item
        F = builders[fname]()
        A = load_algebra(entry(name).spec, field=F)
        RA = restrict_algebra(A, F)
        rng = rng_for(config, 7, name, fname)
        stats = {
            "bijective": functional_map_is_bijective(RA),
            "pairs": config.res_samples,
            "polarization_disagreements": 0,
            "stabilizer_failures": 0,
            "orbit_disagreements": 0,
        }
        for k in range(config.res_samples):
            ell = random_field_vector(rng, A.dim, F)
            _, rep = vergne_pair_over_field(RA, ell)
            if not (rep["agree"] and rep["over_F"]):
                stats["polarization_disagreements"] += 1
            if not check_stabilizer_dimension(RA, ell)["ok"]:
                stats["stabilizer_failures"] += 1
            if k % 3 == 0:
                if k % 2 == 0:
                    g = GroupElement.exp(A, random_field_vector(rng, A.dim, F, height=2))
                    ell2 = coadjoint_apply(g, ell)
                else:
                    ell2 = random_field_vector(rng, A.dim, F)
                inj = check_orbit_injection(RA, ell, ell2)
                if not inj["agree"] or inj["conjugator_restricts"] is False:
                    stats["orbit_disagreements"] += 1
        return f"{name} over {F.name}", stats

    details = dict(_map(config, run, items))
    ok = all(
        d["bijective"] and not d["polarization_disagreements"] and not d["stabilizer_failures"]
        and not d["orbit_disagreements"]
        for d in details.values()
    )
    return _result(7, ok, details)


def criterion_8(config: RunConfig) -> dict:
    items = involution_pairs()

    def run(item):
        name, inv = item
        e = entry(name)
        A = e.algebra()
        sigma = e.involution(inv, A)
        flag = sigma_stable_flag(sigma)
        rng = rng_for(config, 8, name, inv)
        sample, pairs = [], []
        for k in range(config.param_pairs):
            ell = random_anti_invariant(rng, sigma)
            if k % 2 == 0:
                u = GroupElement.exp(A, random_in_subspace(rng, sigma.plus_space))
                ell2 = coadjoint_apply(u, ell)
            else:
                ell2 = random_anti_invariant(rng, sigma)
            assert vanishes_on_plus(sigma, ell2)
            pairs.append((len(sample), len(sample) + 1))
            sample.extend([ell, ell2])
        report = cdual_parametrization_check(A, sigma, sample, pairs)
        primes, skipped = configured_admissible(A, config)
        mod = {"compared": 0, "not_comparable": 0, "mismatches": []}
        for p in primes:
            FA = reduce_mod_p(A, p, check=False)
            fs = reduce_involution(FA, sigma)
            for i, j in pairs:
                prediction = predicted_mod_p_relation(A, sample[i], sample[j], p, flag=flag, acting=sigma.plus_space)
                if prediction is None or not is_p_integral([c for b in sigma.plus_space.basis for c in b], p):
                    mod["not_comparable"] += 1
                    continue
                orb = plus_orbit_bfs(FA, fs, reduce_vector(sample[i], p))
                member = orb.contains_code(int(FA.encode(np.array(reduce_vector(sample[j], p)))))
                mod["compared"] += 1
                if member != prediction:
                    mod["mismatches"].append({"pair": [format_vector(sample[i]), format_vector(sample[j])], "p": p})
        return f"{name}/{inv}", {
            "pairs": report.pairs_checked,
            "same_orbit_pairs": report.same_orbit_pairs,
            "violations": len(report.violations),
            "mod_p": mod,
            "skipped_primes": skipped,
        }

    details = dict(_map(config, run, items))
    ok = all(d["violations"] == 0 and not d["mod_p"]["mismatches"] for d in details.values())
    return _result(8, ok, details)


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
}


def _result(cid, passed, details) -> dict:
    return {"id": cid, "name": CRITERIA_NAMES[cid], "passed": bool(passed), "details": details}


# -- runner ----------------------------------------------------------------------------


def validate_config(config: RunConfig):
    """Reject primes that no selected algebra admits (for example p = 2)."""
    algebras = [A for _, A in _algebras(config)]
    for p in config.primes:
        if all(admissibility_problem(A, p) for A in algebras):
            raise InadmissiblePrime(p, admissibility_problem(algebras[0], p))


def run_criterion(cid: int, config: RunConfig):
    start = time.perf_counter()
    try:
        result = CRITERIA[cid](config)
    except KirillovError as exc:
        result = _result(cid, False, {"error": f"{type(exc).__name__}: {exc}"})
    return result, time.perf_counter() - start


def assemble_report(config: RunConfig, results) -> dict:
    passed = all(r["passed"] for r in results)
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "criteria": list(results),
        "passed": passed,
    }
    failing = next((r for r in results if not r["passed"]), None)
    if failing is not None:
        report["first_failure"] = f"criterion {failing['id']}: {failing['name']}"
    return report


def run_acceptance(config: RunConfig = RunConfig()):
    """(exit code, report dict, timings). Exit code 0 iff every selected criterion passed."""
    try:
        validate_config(config)
    except KirillovError as exc:
        report = {
            "schema_version": SCHEMA_VERSION,
            "config": config.to_dict(),
            "error": f"{type(exc).__name__}: {exc}",
            "passed": False,
            "criteria": [],
        }
        return 2, report, {}
    results, timings = [], {}
    for cid in config.criteria:
        result, seconds = run_criterion(cid, config)
        results.append(result)
        timings[cid] = seconds
    report = assemble_report(config, results)
    passed = report["passed"]
    if config.output_dir:
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "acceptance_report.json").write_text(dump_report(report))
    return (0 if passed else 1), report, timings


def determinism_check(config: RunConfig, baseline_report=None, other_threads=2) -> dict:
    """Rerun with a different thread count and compare report bytes."""
    if baseline_report is None:
        _, baseline_report, _ = run_acceptance(config)
    threads = other_threads if config.threads != other_threads else 1
    _, again, _ = run_acceptance(replace(config, threads=threads, output_dir=None))
    same = dump_report(baseline_report) == dump_report(again)
    return {"id": 9, "name": "determinism across thread counts", "passed": same, "threads": [config.threads, threads]}


def dump_report(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
