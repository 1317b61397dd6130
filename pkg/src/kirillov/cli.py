"""Command-line interface: ``kirillov <subcommand> [options]``.

Inputs are local JSON files or built-ins (``builtin:NAME``); rationals are
written as strings "p/q" so every output vector can be passed back in.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import linalg as la
from .acceptance import SCHEMA_VERSION, determinism_check, dump_report, run_acceptance
from .catalog import RunConfig, resolve_algebra, resolve_field, resolve_involution
from .coadjoint import (
    orbit_canonical_form,
    orbit_dim,
    same_orbit,
    skew_form,
    stabilizer_algebra,
    vergne_polarization,
)
from .errors import KirillovError, MalformedSpec
from .fields import format_rational, parse_rational
from .finite_model import (
    cross_validate,
    distinction_table_arrays,
    orbit_table,
    reduce_involution,
    reduce_mod_p,
    verify_character_table,
)
from .group import GroupElement, adjoint, bch, coadjoint, product
from .involution import (
    classify_distinction,
    sigma_kirillov_decomposition,
    sigma_stable_polarization,
)
from .lie import jordan_holder_basis, load_algebra
from .res_scalars import (
    check_orbit_injection,
    check_polarization_correspondence,
    restrict_algebra,
    restrict_functional,
)


def parse_vector(text, n=None, field=None):
    """``"a,b,c"`` or a JSON array; entries are rationals (or coefficient arrays over a number field)."""
    text = text.strip()
    if text.startswith("["):
        values = json.loads(text)
    else:
        values = [t for t in text.split(",")] if text else []
    if field is not None:
        vec = tuple(field(v) for v in values)
    else:
        vec = tuple(parse_rational(v) for v in values)
    if n is not None and len(vec) != n:
        raise MalformedSpec(f"expected {n} coordinates, got {len(vec)}")
    return vec


def fmt_vec(v, field=None):
    if field is not None and hasattr(field, "degree") and field.degree > 1:
        return [field.format(c) for c in v]
    return [format_rational(c) for c in v]


def fmt_matrix(m):
    return [fmt_vec(row) for row in m]


def fmt_subspace(V):
    return [fmt_vec(b, V.field) for b in V.basis]


# -- subcommand handlers -------------------------------------------------------------


def _algebra(args):
    if not args.algebra:
        raise MalformedSpec("--algebra FILE|builtin:NAME is required")
    return resolve_algebra(args.algebra)


def _involution(args, A, e):
    if not args.involution:
        raise MalformedSpec("--involution FILE|builtin:NAME is required")
    return resolve_involution(args.involution, A, e)


def _functional(args, A, attr="functional"):
    value = getattr(args, attr)
    if value is None:
        raise MalformedSpec(f"--{attr} is required")
    return parse_vector(value, A.dim)


def cmd_describe(args):
    A, e = _algebra(args)
    out = {
        "name": A.name,
        "dim": A.dim,
        "basis": list(A.basis_names),
        "nilpotency_class": A.nilpotency_class,
        "lower_central_series_dims": [V.dim for V in A.lower_central_series],
        "center": fmt_subspace(A.center),
        "flag_basis": [fmt_vec(f) for f in jordan_holder_basis(A)],
        "spec": A.to_spec(),
    }
    if e is not None:
        out["involutions"] = {name: prov for name, (_, prov) in e.involutions.items()}
        out["functionals"] = {name: list(v) for name, v in e.functionals.items()}
    return out


def cmd_bch(args):
    A, _ = _algebra(args)
    x = parse_vector(args.x, A.dim)
    y = parse_vector(args.y, A.dim)
    return {"x": fmt_vec(x), "y": fmt_vec(y), "bch": fmt_vec(bch(A, x, y))}


def cmd_mul(args):
    A, _ = _algebra(args)
    elements = [GroupElement.exp(A, parse_vector(g, A.dim)) for g in args.element]
    return {"log_coords": fmt_vec(product(elements, A).log_coords)}


def cmd_ad(args):
    A, _ = _algebra(args)
    x = parse_vector(args.x, A.dim)
    g = GroupElement.exp(A, x)
    return {"ad": fmt_matrix(A.ad(x)), "Ad_exp": fmt_matrix(adjoint(g)), "coadjoint_exp": fmt_matrix(coadjoint(g))}


def cmd_orbit_dim(args):
    A, _ = _algebra(args)
    ell = _functional(args, A)
    return {
        "functional": fmt_vec(ell),
        "orbit_dim": orbit_dim(A, ell),
        "stabilizer": fmt_subspace(stabilizer_algebra(A, ell)),
        "skew_form": fmt_matrix(skew_form(A, ell)),
    }


def cmd_polarize(args):
    A, _ = _algebra(args)
    ell = _functional(args, A)
    pair = vergne_polarization(A, ell)
    return {"functional": fmt_vec(ell), "subalgebra": fmt_subspace(pair.subalgebra), "orbit_dim": pair.orbit_dim}


def _canonical_json(cf):
    return {
        "jump_set": list(cf.jump_set),
        "canonical_rep": fmt_vec(cf.canonical_rep),
        "conjugator": fmt_vec(cf.conjugator.log_coords),
    }


def cmd_canonical_form(args):
    A, _ = _algebra(args)
    ell = _functional(args, A)
    return {"functional": fmt_vec(ell), **_canonical_json(orbit_canonical_form(A, ell))}


def cmd_same_orbit(args):
    A, _ = _algebra(args)
    ell = _functional(args, A)
    ell2 = _functional(args, A, "other")
    same, g = same_orbit(A, ell, ell2)
    return {"same_orbit": same, "conjugator": fmt_vec(g.log_coords) if g else None}


def cmd_sigma_kirillov(args):
    A, e = _algebra(args)
    sigma = _involution(args, A, e)
    dec = sigma_kirillov_decomposition(A, sigma)
    return {
        "x": fmt_vec(dec.x_vec),
        "y": fmt_vec(dec.y_vec),
        "z": fmt_vec(dec.z_vec),
        "W": fmt_subspace(dec.W),
        "U0": fmt_subspace(dec.U0),
        "parities": {"x": dec.parity_x, "y": dec.parity_y, "z": dec.parity_z},
        "checks": dec.check(A, sigma),
    }


def cmd_sigma_polarize(args):
    A, e = _algebra(args)
    sigma = _involution(args, A, e)
    ell = _functional(args, A)
    pair = sigma_stable_polarization(A, sigma, ell)
    return {
        "functional": fmt_vec(ell),
        "subalgebra": fmt_subspace(pair.subalgebra),
        "sigma_stable": sigma.is_stable(pair.subalgebra),
        "orbit_dim": pair.orbit_dim,
    }


def cmd_distinguished(args):
    A, e = _algebra(args)
    sigma = _involution(args, A, e)
    ell = _functional(args, A)
    v = classify_distinction(A, sigma, ell)
    out = {"functional": fmt_vec(ell), "distinguished": v.distinguished}
    if v.distinguished:
        out["witness"] = fmt_vec(v.witness)
        out["conjugator"] = fmt_vec(v.conjugator.log_coords)
        out["sigma_stable_polarization"] = fmt_subspace(v.sigma_stable_pair.subalgebra)
    return out


def cmd_res_scalars(args):
    A_q, _ = _algebra(args)
    F = resolve_field(args.field)
    A = load_algebra(A_q.to_spec(), field=F)
    RA = restrict_algebra(A, F)
    ell = parse_vector(args.functional, A.dim, field=F) if args.functional else tuple(F.zero for _ in range(A.dim))
    out = {"field": F.name, "degree": F.degree, "restricted_dim": RA.algebra.dim, "functional": fmt_vec(ell, F)}
    if args.check == "functional":
        out["restricted_functional"] = fmt_vec(restrict_functional(RA, ell))
    elif args.check == "polarization":
        V = vergne_polarization(A, ell).subalgebra
        out["subalgebra"] = fmt_subspace(V)
        out.update(check_polarization_correspondence(RA, ell, V))
    else:
        if args.other is None:
            raise MalformedSpec("--check orbit needs --other")
        ell2 = parse_vector(args.other, A.dim, field=F)
        out["other"] = fmt_vec(ell2, F)
        out.update(check_orbit_injection(RA, ell, ell2))
    return out


def _first_prime(args):
    return args.prime[0] if args.prime else 5


def cmd_finite_orbits(args):
    A, e = _algebra(args)
    p = _first_prime(args)
    FA = reduce_mod_p(A, p)
    table = orbit_table(FA)
    sigma = _involution(args, A, e) if args.involution else None
    mult = None
    if sigma is not None:
        mult, _, _ = distinction_table_arrays(FA, reduce_involution(FA, sigma), table)
    rows = []
    for i, d in enumerate(table.half_dims()):
        row = {"representative": list(table.representative(i)), "size": int(table.sizes[i]), "degree": p**d}
        if mult is not None:
            row["multiplicity"] = {sigma.name: int(mult[i])}
        rows.append(row)
    return {"p": p, "group_order": FA.order, "orbit_count": table.count, "orbits": rows}


def cmd_finite_characters(args):
    A, _ = _algebra(args)
    reports = [verify_character_table(reduce_mod_p(A, p)).to_dict() for p in (args.prime or [5])]
    return {"reports": reports, "ok": all(r["ok"] for r in reports)}


def cmd_finite_distinction(args):
    A, e = _algebra(args)
    sigma = _involution(args, A, e)
    out = []
    for p in args.prime or [5]:
        FA = reduce_mod_p(A, p)
        table = orbit_table(FA)
        mult, vanish, degree = distinction_table_arrays(FA, reduce_involution(FA, sigma), table)
        rows = [
            {
                "representative": list(table.representative(i)),
                "size": int(table.sizes[i]),
                "degree": int(degree[i]),
                "multiplicity": {sigma.name: int(mult[i])},
                "vanishing_count": int(vanish[i]),
            }
            for i in range(table.count)
        ]
        out.append({"p": p, "orbits": rows, "distinguished": int(np.count_nonzero(mult == 1))})
    return {"involution": sigma.name, "runs": out}


def cmd_cross_validate(args):
    A, e = _algebra(args)
    sigma = _involution(args, A, e)
    if args.functional:
        sample = [parse_vector(args.functional, A.dim)]
    elif e is not None:
        sample = [parse_vector(",".join(v), A.dim) for v in e.functionals.values()]
    else:
        sample = [la.zeros(A.dim)]
    rows = cross_validate(A, sigma, args.prime or [3, 5, 7], sample)
    return {"rows": [r.to_dict() for r in rows], "mismatches": sum(not r.agrees for r in rows)}


def cmd_accept(args):
    config = RunConfig(seed=args.seed if args.seed is not None else RunConfig.seed, threads=args.threads)
    if args.prime:
        config = replace(config, primes=tuple(args.prime))
    if args.algebra:
        config = replace(config, algebras=(args.algebra,))
    if args.criteria:
        config = replace(config, criteria=tuple(int(c) for c in args.criteria.split(",")))
    if args.output_dir:
        config = replace(config, output_dir=args.output_dir)
    code, report, timings = run_acceptance(config)
    if args.determinism and code != 2:
        report["determinism"] = determinism_check(config, report)
        if not report["determinism"]["passed"]:
            code = 1
        if config.output_dir:
            (Path(config.output_dir) / "acceptance_report.json").write_text(dump_report(report))
    for cid, seconds in timings.items():
        print(f"criterion {cid}: {seconds:.2f} s", file=sys.stderr)
    if code:
        print(f"acceptance failed: {report.get('first_failure') or report.get('error')}", file=sys.stderr)
    return report, code


COMMANDS = {
    "describe": (cmd_describe, "structure of an algebra"),
    "bch": (cmd_bch, "log(exp x exp y)"),
    "mul": (cmd_mul, "product of group elements given by log coordinates"),
    "ad": (cmd_ad, "ad x, Ad(exp x) and the coadjoint matrix"),
    "orbit-dim": (cmd_orbit_dim, "orbit dimension and stabilizer of a functional"),
    "polarize": (cmd_polarize, "Vergne polarization of a functional"),
    "canonical-form": (cmd_canonical_form, "orbit canonical form with conjugator"),
    "same-orbit": (cmd_same_orbit, "decide whether two functionals share an orbit"),
    "sigma-kirillov": (cmd_sigma_kirillov, "involution-stable decomposition x, y, z, W"),
    "sigma-polarize": (cmd_sigma_polarize, "involution-stable polarization"),
    "distinguished": (cmd_distinguished, "distinction verdict with witness"),
    "res-scalars": (cmd_res_scalars, "restriction of scalars checks"),
    "finite-orbits": (cmd_finite_orbits, "all coadjoint orbits mod p"),
    "finite-characters": (cmd_finite_characters, "character table verification mod p"),
    "finite-distinction": (cmd_finite_distinction, "distinction multiplicities mod p"),
    "cross-validate": (cmd_cross_validate, "rational verdicts against mod-p multiplicities"),
    "accept": (cmd_accept, "run the acceptance suite"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", help="JSON file or builtin:NAME")
    common.add_argument("--involution", help="JSON file or builtin:NAME (a named involution of a built-in algebra)")
    common.add_argument("--functional", help='comma-separated rationals "a,b,c" or a JSON array')
    common.add_argument("--prime", type=int, action="append", help="prime p (repeatable)")
    common.add_argument("--seed", type=int)
    common.add_argument("--json", action="store_true", help="print JSON")

    parser = argparse.ArgumentParser(prog="kirillov", description="Exact orbit-method computations.")
    sub = parser.add_subparsers(dest="command", required=True)
    parsers = {name: sub.add_parser(name, parents=[common], help=h) for name, (_, h) in COMMANDS.items()}
    for name in ("bch", "ad"):
        parsers[name].add_argument("--x", required=True)
    parsers["bch"].add_argument("--y", required=True)
    parsers["mul"].add_argument("--element", action="append", required=True, help="log coordinates (repeatable)")
    parsers["same-orbit"].add_argument("--other", required=True)
    rs = parsers["res-scalars"]
    rs.add_argument("--field", default="builtin:gaussian", help="field JSON file or builtin:gaussian|sqrt2")
    rs.add_argument("--check", choices=["functional", "polarization", "orbit"], default="functional")
    rs.add_argument("--other")
    acc = parsers["accept"]
    acc.add_argument("--threads", type=int, default=1)
    acc.add_argument("--criteria", help="comma-separated criterion ids (default: all)")
    acc.add_argument("--output-dir")
    acc.add_argument("--determinism", action="store_true", help="also rerun with another thread count")
    return parser


def _print_text(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in _items(v)):
                print(f"{pad}{k}:")
                _print_text(v, indent + 1)
            else:
                print(f"{pad}{k}: {_inline(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                _print_text(v, indent + 1) if isinstance(v, dict) else print(f"{pad}- {_inline(v)}")
                if isinstance(v, dict):
                    print()
            else:
                print(f"{pad}- {_inline(v)}")
    else:
        print(f"{pad}{_inline(obj)}")


def _items(v):
    return v.values() if isinstance(v, dict) else v


def _inline(v):
    if isinstance(v, list):
        return "(" + ", ".join(_inline(x) for x in v) + ")"
    if isinstance(v, dict):
        return json.dumps(v)
    return str(v)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        result = handler(args)
    except (KirillovError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    code = 0
    if isinstance(result, tuple):
        result, code = result
        text = dump_report(result)
        print(text, end="") if args.json else _print_text({"passed": result.get("passed"), **_summary(result)})
        return code
    if args.json:
        print(json.dumps({"schema_version": SCHEMA_VERSION, **result}, indent=2))
    else:
        _print_text(result)
    return code


def _summary(report):
    rows = list(report["criteria"])
    if "determinism" in report:
        rows.append(report["determinism"])
    return {f"criterion {c['id']}": ("pass" if c["passed"] else "FAIL") + f"  {c['name']}" for c in rows}


if __name__ == "__main__":
    sys.exit(main())
