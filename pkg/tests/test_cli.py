"""Command-line surface: subcommands, exit codes, certificates."""

import json

import pytest

from tiltbench import checks as ck
from tiltbench import cli

A3R2_SPEC = """\
# linear A3, composite killed
field p=2
vertices 1 2 3
arrow a: 1 -> 2
arrow b: 2 -> 3
relation a*b
"""

PPA2_SPEC = """\
field p=2
vertices 1 2
arrow x: 1 -> 2
arrow y: 2 -> 1
relation x*y
relation y*x
"""

DUAL_SPEC = """\
field p=2
vertices 1
arrow t: 1 -> 1
relation t*t
"""


@pytest.fixture(scope="module")
def specs(tmp_path_factory):
    root = tmp_path_factory.mktemp("specs")
    paths = {}
    for name, text in (("a3r2", A3R2_SPEC), ("ppa2", PPA2_SPEC),
                       ("dual", DUAL_SPEC)):
        path = root / f"{name}.alg"
        path.write_text(text, encoding="utf-8")
        paths[name] = str(path)
    return paths


def run(argv):
    return cli.main(argv)


# ---------------------------------------------------------------------------
# indecs


def test_indecs_listing(specs, capsys, tmp_path):
    out = str(tmp_path / "indecs.json")
    assert run(["indecs", "--algebra", specs["a3r2"], "--out", out]) == 0
    text = capsys.readouterr().out
    assert "5 indecomposable modules over a3r2" in text
    data = json.loads(open(out).read())
    assert data["p"] == 2
    assert data["vertices"] == ["1", "2", "3"]
    assert len(data["modules"]) == 5
    by_name = {m["name"]: m for m in data["modules"]}
    assert by_name["P1"] == {"name": "P1", "dim": 2, "dim_vector": [1, 1, 0]}
    assert by_name["S2"]["dim_vector"] == [0, 1, 0]


def test_indecs_dual_numbers(specs, capsys):
    assert run(["indecs", "--algebra", specs["dual"]]) == 0
    assert "2 indecomposable modules" in capsys.readouterr().out


def test_indecs_field_override(specs, capsys):
    assert run(["indecs", "--algebra", specs["a3r2"], "--p", "3"]) == 0
    assert "p=3" in capsys.readouterr().out


def test_malformed_spec_reports_location(specs, capsys, tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text("field p=2\nvertices 1 2\narow a: 1 -> 2\n")
    assert run(["indecs", "--algebra", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "unknown section" in err
    assert "line 3" in err


def test_missing_spec_file(capsys):
    assert run(["indecs", "--algebra", "/nonexistent/x.alg"]) == 2
    assert "No such file" in capsys.readouterr().err


def test_enumeration_cap_exit_code(specs, capsys):
    assert run(["indecs", "--algebra", specs["a3r2"], "--max-ind", "2"]) == 3
    assert "cap exceeded" in capsys.readouterr().err


def test_n_below_two_rejected(specs, capsys):
    assert run(["indecs", "--algebra", specs["a3r2"], "--n", "1"]) == 2
    assert "n must be at least 2" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# search


def test_search_a3r2_single_hit(specs, capsys, tmp_path):
    out = str(tmp_path / "s.json")
    assert run(["search", "--algebra", specs["a3r2"], "--out", out]) == 0
    data = json.loads(open(out).read())
    assert data["n"] == 2
    assert len(data["subcategories"]) == 1
    hit = data["subcategories"][0]
    assert sorted(hit["generators"]) == ["P1", "P2", "S1", "S3"]
    assert hit["self_injective_base"] is False


def test_search_ppa2_two_hits_flagged(specs, tmp_path, capsys):
    out = str(tmp_path / "s.json")
    assert run(["search", "--algebra", specs["ppa2"], "--out", out]) == 0
    data = json.loads(open(out).read())
    hits = data["subcategories"]
    assert len(hits) == 2
    for hit in hits:
        assert hit["nZ"] is True
        assert hit["self_injective_base"] is True
    assert {frozenset(h["generators"]) for h in hits} == {
        frozenset(("P1", "P2", "S1")), frozenset(("P1", "P2", "S2"))}


def test_search_dual_numbers_empty(specs, capsys):
    assert run(["search", "--algebra", specs["dual"]]) == 0
    assert "0 2-cluster-tilting" in capsys.readouterr().out


# ---------------------------------------------------------------------------
# apply

M3 = ["--generators", "P1,P2,S1,S3"]
MPP = ["--generators", "P1,P2,S1"]


def test_apply_psi_named_value(specs, capsys):
    assert run(["apply", "--algebra", specs["a3r2"], *M3,
                "psi", "S3 -> P2"]) == 0
    text = capsys.readouterr().out
    assert "values P1:0 P2:0 S1:1 S3:0" in text
    assert "stHom(-,S1)|M" in text


def test_apply_upsilon_names_outside_module(specs, capsys):
    assert run(["apply", "--algebra", specs["a3r2"], *M3,
                "upsilon", "S3 -> P2"]) == 0
    text = capsys.readouterr().out
    assert "values P1:0 P2:1 S1:0 S3:0" in text
    assert "Hom(-,S2)|M" in text


def test_apply_theta_and_psi_prime(specs, capsys):
    assert run(["apply", "--algebra", specs["a3r2"], *M3,
                "theta", "P1 -> S1"]) == 0
    assert "stHom(-,S1)|M" in capsys.readouterr().out
    assert run(["apply", "--algebra", specs["a3r2"], *M3,
                "psi_prime", "P1 -> S1"]) == 0
    assert "Ext2(S1,-)|M" in capsys.readouterr().out


def test_apply_sigma_on_module_name(specs, capsys):
    assert run(["apply", "--algebra", specs["a3r2"], *M3,
                "sigma", "S1"]) == 0
    text = capsys.readouterr().out
    assert "Sigma" in text
    assert "Ext2(S1,-)|M" in text


def test_apply_phi_needs_self_injective(specs, capsys):
    assert run(["apply", "--algebra", specs["a3r2"], *M3,
                "phi", "S3 -> P2"]) == 2
    assert "NotSelfInjective" in capsys.readouterr().err


def test_apply_phi_zero_on_split_kind(specs, capsys):
    assert run(["apply", "--algebra", specs["ppa2"], *MPP,
                "phi", "S1 -> P2"]) == 0
    assert "the zero functor" in capsys.readouterr().out


def test_apply_tau_n_both_anchors(specs, capsys):
    assert run(["apply", "--algebra", specs["a3r2"], *M3,
                "tau_n", "S1"]) == 0
    assert "tau_2(S1) = S3" in capsys.readouterr().out
    assert run(["apply", "--algebra", specs["ppa2"], *MPP,
                "tau_n", "S1"]) == 0
    assert "tau_2(S1) = S1" in capsys.readouterr().out


def test_apply_auto_generators_take_first_hit(specs, capsys):
    assert run(["apply", "--algebra", specs["ppa2"],
                "psi", "S2 -> P1"]) == 0
    assert "stHom(-,S2)|M" in capsys.readouterr().out


def test_apply_argument_errors(specs, capsys):
    assert run(["apply", "--algebra", specs["a3r2"], *M3,
                "psi", "S1 -> S3"]) == 2
    assert "Hom(S1,S3) = 0" in capsys.readouterr().err
    assert run(["apply", "--algebra", specs["a3r2"], *M3,
                "psi", "Q9 -> P2"]) == 2
    assert "unknown module name 'Q9'" in capsys.readouterr().err
    assert run(["apply", "--algebra", specs["a3r2"], *M3,
                "psi", "P1 -> S1"]) == 2
    assert "not one-to-one" in capsys.readouterr().err
    assert run(["apply", "--algebra", specs["a3r2"], *M3,
                "theta", "S3 -> P2"]) == 2
    assert "not onto" in capsys.readouterr().err
    assert run(["apply", "--algebra", specs["a3r2"], *M3,
                "tau_n", "S3"]) == 2
    assert "non-projective" in capsys.readouterr().err


def test_apply_map_index_selection(specs, capsys):
    assert run(["apply", "--algebra", specs["a3r2"], *M3,
                "psi", "S3 -> P2 @ 0"]) == 0
    assert "stHom(-,S1)|M" in capsys.readouterr().out
    assert run(["apply", "--algebra", specs["a3r2"], *M3,
                "psi", "S3 -> P2 @ 5"]) == 2
    assert "out of range" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# verify


def _strip_timing(cert):
    clone = json.loads(json.dumps(cert))
    for rep in clone["reports"]:
        rep.pop("timing")
    return clone


def test_verify_full_run_writes_certificate(specs, capsys, tmp_path):
    out = str(tmp_path / "cert.json")
    code = run(["verify", "--algebra", specs["ppa2"], *MPP,
                "--max-dim", "8", "--mult-cap", "1", "--out", out])
    assert code == 0
    text = capsys.readouterr().out
    assert "14 passed, 0 failed, 0 skipped" in text
    assert f"certificate written to {out}" in text
    cert = json.loads(open(out).read())
    assert sorted(cert) == ["algebra_spec_hash", "caps", "field_p",
                            "generators", "n", "reports", "schema_version"]
    assert cert["generators"] == ["P1", "P2", "S1"]
    assert cert["caps"]["max_dim"] == 8
    assert len(cert["reports"]) == 15
    assert all(r["status"] == "pass" for r in cert["reports"])


def test_verify_subset_and_gating(specs, capsys, tmp_path):
    out = str(tmp_path / "cert.json")
    code = run(["verify", "--algebra", specs["a3r2"], *M3,
                "--out", out, "yoneda_equiv", "phi_suite"])
    assert code == 0
    cert = json.loads(open(out).read())
    assert [r["check_id"] for r in cert["reports"]] == ["yoneda_equiv",
                                                        "phi_suite"]
    assert cert["reports"][0]["status"] == "pass"
    assert cert["reports"][1]["status"] == "skipped"
    assert "not self-injective" in \
        cert["reports"][1]["witnesses"]["hypothesis"]


def test_verify_without_out_prints_json(specs, capsys):
    assert run(["verify", "--algebra", specs["a3r2"], *M3,
                "finite_type"]) == 0
    captured = capsys.readouterr()
    cert = json.loads(captured.out)
    assert cert["reports"][0]["check_id"] == "finite_type"
    assert "finite_type" in captured.err


def test_verify_uncertified_generators_warn_exit_zero(specs, capsys,
                                                      tmp_path):
    out = str(tmp_path / "cert.json")
    code = run(["verify", "--algebra", specs["ppa2"],
                "--generators", "P1,P2", "--out", out, "hilton_rees"])
    assert code == 0
    assert "every check was skipped" in capsys.readouterr().err
    cert = json.loads(open(out).read())
    assert cert["reports"][0]["status"] == "skipped"


def test_verify_unknown_check_id(specs, capsys):
    assert run(["verify", "--algebra", specs["a3r2"], *M3,
                "bogus_check"]) == 2
    assert "unknown check id" in capsys.readouterr().err


def test_verify_failure_sets_exit_one(specs, capsys, tmp_path,
                                      monkeypatch):
    def broken(sub, caps):
        return "fail", {"forced": True}

    patched = [(cid, broken if cid == "finite_type" else fn)
               for cid, fn in ck.CHECK_TABLE]
    monkeypatch.setattr(ck, "CHECK_TABLE", patched)
    out = str(tmp_path / "cert.json")
    code = run(["verify", "--algebra", specs["a3r2"], *M3,
                "--out", out, "finite_type"])
    assert code == 1
    cert = json.loads(open(out).read())
    assert cert["reports"][0]["status"] == "fail"


def test_verify_certificates_deterministic(specs, capsys, tmp_path):
    args = ["verify", "--algebra", specs["a3r2"], *M3,
            "yoneda_equiv", "hilton_rees", "tau_n_thm"]
    certs = []
    for name in ("one.json", "two.json"):
        out = str(tmp_path / name)
        assert run([*args, "--out", out]) == 0
        certs.append(json.loads(open(out).read()))
    capsys.readouterr()
    assert _strip_timing(certs[0]) == _strip_timing(certs[1])
