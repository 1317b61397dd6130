import json

import pytest

from kirillov.acceptance import run_acceptance, validate_config
from kirillov.catalog import CATALOG_NAMES, RunConfig, catalog, entry, involution_pairs, resolve_algebra
from kirillov.cli import main
from kirillov.errors import InadmissiblePrime, MalformedSpec


def run(capsys, *argv):
    code = main(list(argv) + ["--json"])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


H3 = ("--algebra", "builtin:heisenberg3")


def test_catalog_contents():
    names = [e.name for e in catalog()]
    assert names[:4] == ["heisenberg3", "heisenberg5", "n4", "free2"]
    h3 = entry("heisenberg3").algebra()
    assert (h3.dim, h3.nilpotency_class) == (3, 2)
    n4 = entry("n4").algebra()
    assert (n4.dim, n4.nilpotency_class) == (6, 3)
    assert all(len(e.involutions) >= 2 for e in catalog())
    assert "galois" in entry("heisenberg3_gaussian").involutions


@pytest.mark.parametrize("name,inv", involution_pairs())
def test_catalog_pairs_load(name, inv):
    e = entry(name)
    A = e.algebra()
    e.involution(inv, A)
    for coords in e.functionals.values():
        assert len(coords) == A.dim


def test_unknown_builtin():
    with pytest.raises(MalformedSpec):
        entry("so3")


def test_algebra_file(tmp_path, capsys):
    path = tmp_path / "h3.json"
    path.write_text(json.dumps(entry("heisenberg3").spec))
    A, e = resolve_algebra(str(path))
    assert e is None and A.dim == 3
    code, out, _ = run(capsys, "describe", "--algebra", str(path))
    assert code == 0 and out["nilpotency_class"] == 2


def test_describe_spec_round_trips(tmp_path, capsys):
    code, out, _ = run(capsys, "describe", "--algebra", "builtin:n4")
    path = tmp_path / "n4.json"
    path.write_text(json.dumps(out["spec"]))
    code, again, _ = run(capsys, "describe", "--algebra", str(path))
    assert again["spec"] == out["spec"] and again["center"] == out["center"]


def test_bch_and_mul(capsys):
    code, out, _ = run(capsys, "bch", *H3, "--x", "1,0,0", "--y", "0,1,0")
    assert code == 0 and out["bch"] == ["1", "1", "1/2"]
    code, out2, _ = run(capsys, "mul", *H3, "--element", ",".join(out["bch"]), "--element=-1,-1,-1/2")
    assert out2["log_coords"] == ["0", "0", "0"]


def test_canonical_form_round_trip(capsys):
    code, out, _ = run(capsys, "canonical-form", *H3, "--functional", "5,0,1")
    assert out["canonical_rep"] == ["0", "0", "1"] and out["jump_set"] == [2, 3]
    rep = json.dumps(out["canonical_rep"])
    code, again, _ = run(capsys, "canonical-form", *H3, "--functional", rep)
    assert again["canonical_rep"] == out["canonical_rep"]
    code, same, _ = run(capsys, "same-orbit", *H3, "--functional", "5,0,1", "--other", rep)
    assert same["same_orbit"] is True


def test_orbit_and_polarization(capsys):
    code, out, _ = run(capsys, "orbit-dim", "--algebra", "builtin:heisenberg5", "--functional", "0,0,0,0,1")
    assert out["orbit_dim"] == 4
    code, out, _ = run(capsys, "polarize", *H3, "--functional", "0,0,1")
    assert out["subalgebra"] == [["0", "1", "0"], ["0", "0", "1"]]


def test_involution_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "sigma-kirillov", *H3, "--involution", "builtin:sign")
    assert out["parities"] == {"x": -1, "y": 1, "z": -1} and all(out["checks"].values())
    code, out, _ = run(capsys, "distinguished", *H3, "--involution", "builtin:sign", "--functional", "0,0,1")
    assert out["distinguished"] is True and out["witness"] == ["0", "0", "1"]
    path = tmp_path / "sigma.json"
    path.write_text(json.dumps({"matrix": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]}))
    code, out, _ = run(capsys, "distinguished", *H3, "--involution", str(path), "--functional", "0,0,1")
    assert out["distinguished"] is False
    code, out, _ = run(capsys, "sigma-polarize", *H3, "--involution", "builtin:swap", "--functional", "0,0,1")
    assert out["sigma_stable"] is True


def test_res_scalars_command(capsys):
    args = ("res-scalars", *H3, "--field", "builtin:gaussian")
    code, out, _ = run(capsys, *args, "--functional", "[[0,0],[0,0],[1,0]]")
    assert out["restricted_functional"] == ["0", "0", "0", "0", "2", "0"]
    # F-valued output parses back
    code, again, _ = run(capsys, *args, "--functional", json.dumps(out["functional"]))
    assert again["functional"] == out["functional"]
    code, out, _ = run(capsys, *args, "--check", "polarization", "--functional", "[[0,0],[0,0],[1,0]]")
    assert out["agree"] is True
    code, out, _ = run(capsys, *args, "--check", "orbit", "--functional", "[[0,0],[0,0],[1,0]]", "--other", "[[3,1],[0,0],[1,0]]")
    assert out["same_over_F"] and out["same_over_Q"]


def test_finite_commands(capsys):
    code, out, _ = run(capsys, "finite-orbits", *H3, "--prime", "3", "--involution", "builtin:sign")
    assert out["orbit_count"] == 11
    rep = out["orbits"][1]["representative"]
    assert set(out["orbits"][0]) == {"representative", "size", "degree", "multiplicity"}
    code, orb, _ = run(capsys, "canonical-form", *H3, "--functional", ",".join(map(str, rep)))
    assert code == 0
    code, out, _ = run(capsys, "finite-characters", *H3, "--prime", "3", "--prime", "5")
    assert out["ok"] is True
    code, out, _ = run(capsys, "finite-distinction", *H3, "--involution", "builtin:sign", "--prime", "5")
    assert all(r["multiplicity"]["sign"] in (0, 1) for r in out["runs"][0]["orbits"])
    code, out, _ = run(capsys, "cross-validate", *H3, "--involution", "builtin:sign", "--prime", "3", "--prime", "5")
    assert out["mismatches"] == 0


def test_errors_exit_nonzero(capsys, tmp_path):
    code, _, err = run(capsys, "finite-orbits", *H3, "--prime", "2")
    assert code != 0 and "InadmissiblePrime" in err
    bad = {
        "name": "tampered",
        "dim": 4,
        "basis": ["a", "b", "c", "d"],
        "brackets": [
            {"i": 0, "j": 1, "coeffs": {"2": "1"}},
            {"i": 1, "j": 2, "coeffs": {"3": "1"}},
            {"i": 0, "j": 3, "coeffs": {"1": "1"}},
        ],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, _, err = run(capsys, "describe", "--algebra", str(path))
    assert code != 0 and "JacobiViolation" in err
    code, _, err = run(capsys, "orbit-dim", *H3, "--functional", "1,2")
    assert code != 0 and "MalformedSpec" in err
    code, _, err = run(capsys, "distinguished", *H3, "--involution", "builtin:nope", "--functional", "0,0,1")
    assert code != 0


def test_accept_rejects_prime_two(capsys):
    with pytest.raises(InadmissiblePrime):
        validate_config(RunConfig(primes=(2,)))
    code, report, _ = run_acceptance(RunConfig(primes=(2,), criteria=(1,)))
    assert code != 0 and "InadmissiblePrime" in report["error"]
    code, out, err = run(capsys, "accept", "--prime", "2", "--criteria", "1")
    assert code != 0 and "InadmissiblePrime" in err


def test_accept_subset_writes_report(capsys, tmp_path):
    code, out, _ = run(capsys, "accept", "--criteria", "1,6", "--output-dir", str(tmp_path))
    assert code == 0 and out["passed"] and out["schema_version"] == 1
    saved = json.loads((tmp_path / "acceptance_report.json").read_text())
    assert saved == out


def test_catalog_names_are_resolvable():
    for name in CATALOG_NAMES:
        A, e = resolve_algebra(f"builtin:{name}")
        assert e.name == name
