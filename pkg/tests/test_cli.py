"""CLI behavior: subcommands, exit codes, schemas, determinism, failure fixture."""

import csv
import json
import os

import pytest

from crql.cli import main
from crql.verify import CHECK_IDS, TAGS, RunConfig, selected_checks


def run(args):
    return main(args)


# -- verify-all --------------------------------------------------------------------


def test_only_filter_selects_star_checks():
    cfg = RunConfig(only="lemma-2.1")
    ids = selected_checks(cfg)
    assert ids == ["star-closed-form", "star-defining-pairing", "star-squared"]
    assert all(TAGS[c] == "lemma-2.1" for c in ids)


def test_every_check_has_a_tag():
    assert set(CHECK_IDS) == set(TAGS)
    assert len(CHECK_IDS) >= 25


def test_verify_all_subset_exit_zero(tmp_path):
    out = tmp_path / "report.json"
    rc = run(["verify-all", "--only", "lemma-2.1", "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["schema_version"] == "1"
    assert rep["summary"]["failed"] == 0
    assert {c["check_id"] for c in rep["checks"]} == {
        "star-closed-form", "star-defining-pairing", "star-squared",
    }
    for c in rep["checks"]:
        assert c["tag"] == "lemma-2.1"


def test_verify_all_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["verify-all", "--only", "levi", "--out", str(a)])
    run(["verify-all", "--only", "levi", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_injected_failure_exits_one(tmp_path):
    out = tmp_path / "report.json"
    rc = run(["verify-all", "--only", "eps-sign", "--inject-failure", "--out", str(out)])
    assert rc == 1
    rep = json.loads(out.read_text())
    failing = [c for c in rep["checks"] if c["status"] == "fail"]
    assert failing and failing[0]["check_id"] == "eps-sign-oracle"


def test_bad_config_exits_two(tmp_path):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"max_n": 0}))
    rc = run(["verify-all", "--config", str(cfgfile)])
    assert rc == 2
    cfgfile.write_text(json.dumps({"unknown_key": 1}))
    assert run(["verify-all", "--config", str(cfgfile)]) == 2
    cfgfile.write_text("not json")
    assert run(["verify-all", "--config", str(cfgfile)]) == 2


def test_config_file_with_flag_override(tmp_path):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"only": "levi-flat", "max_n": 2}))
    out = tmp_path / "r.json"
    rc = run(["verify-all", "--config", str(cfgfile), "--only", "levi-heisenberg",
              "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert [c["check_id"] for c in rep["checks"]] == ["levi-heisenberg"]
    assert rep["config"]["max_n"] == 2


def test_workers_pool_matches_serial(tmp_path):
    a, b = tmp_path / "serial.json", tmp_path / "pool.json"
    run(["verify-all", "--only", "sec4-levi", "--out", str(a), "--workers", "1"])
    run(["verify-all", "--only", "sec4-levi", "--out", str(b), "--workers", "2"])
    assert a.read_bytes() == b.read_bytes()


# -- build -------------------------------------------------------------------------


def test_build_dump_schema(tmp_path):
    out = tmp_path / "op.json"
    rc = run(["build", "--n", "2", "--op", "dbar", "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["n"] == 2
    assert data["op"] == "dbar"
    assert len(data["basis"]) == 16
    assert all(set(e) == {"row", "col", "op"} for e in data["entries"])


def test_build_bidegree_restriction(tmp_path):
    out = tmp_path / "op.json"
    run(["build", "--n", "2", "--op", "ql", "--bidegree", "0,1", "--out", str(out)])
    data = json.loads(out.read_text())
    basis = data["basis"]
    for e in data["entries"]:
        col = basis[e["col"]]
        assert (len(col["J"]), len(col["K"])) == (0, 1)


def test_build_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["build", "--n", "2", "--op", "ql", "--out", str(a)])
    run(["build", "--n", "2", "--op", "ql", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


# -- spectrum / kernel / fourier ------------------------------------------------------


def test_spectrum_csv_columns(tmp_path):
    out = tmp_path / "spec.csv"
    rc = run(["spectrum", "--n", "1", "--bidegree", "0,0", "--xi0", "1",
              "--cutoff", "4", "--k", "3", "--out", str(out)])
    assert rc == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["n", "p", "q", "xi0", "cutoff", "idx", "eigenvalue", "residual"]
    assert len(rows) == 3
    assert abs(float(rows[0]["eigenvalue"]) - 1.0) < 1e-8


def test_spectrum_rejects_zero_xi0(tmp_path):
    rc = run(["spectrum", "--n", "1", "--bidegree", "0,0", "--xi0", "0",
              "--cutoff", "4", "--out", str(tmp_path / "x.csv")])
    assert rc == 2


def test_kernel_check_both_branches():
    assert run(["kernel-check", "--branch", "both"]) == 0
    assert run(["kernel-check", "--branch", "pos"]) == 0
    assert run(["kernel-check", "--branch", "neg"]) == 0


def test_fourier_check_csv(tmp_path):
    out = tmp_path / "fourier.csv"
    rc = run(["fourier-check", "--tol", "1e-8", "--out", str(out)])
    assert rc == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["x0", "re_z1", "im_z1", "re_z2", "im_z2",
                             "u_closed", "u_quad", "abs_err"]
    assert len(rows) >= 20
    for row in rows:
        assert float(row["abs_err"]) < 1e-8


def test_fourier_check_points_file(tmp_path):
    pts = tmp_path / "pts.csv"
    with open(pts, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x0", "re_z1", "im_z1", "re_z2", "im_z2"])
        w.writerow([0.0, 1.0, 0.0, 0.0, 0.0])
        w.writerow([1.0, 0.0, 1.0, 0.0, 0.0])
    out = tmp_path / "out.csv"
    rc = run(["fourier-check", "--points", str(pts), "--tol", "1e-8", "--out", str(out)])
    assert rc == 0
    rows = list(csv.DictReader(open(out)))
    import math
    assert abs(float(rows[0]["u_closed"]) - 1 / math.pi) < 1e-12


# -- levi --------------------------------------------------------------------------


def test_levi_heisenberg_json(tmp_path):
    out = tmp_path / "levi.json"
    rc = run(["levi", "--frame", "heisenberg", "--n", "2", "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["signature"] == [2, 0]
    assert data["nonvanishing"] is True


def test_levi_hyperquadric_signature(tmp_path):
    out = tmp_path / "levi.json"
    run(["levi", "--frame", "hyperquadric", "--n", "3", "--p", "1", "--out", str(out)])
    data = json.loads(out.read_text())
    assert data["signature"] == [1, 2]


def test_levi_rigid_with_coefficient_map(tmp_path):
    fmap = tmp_path / "f.json"
    fmap.write_text(json.dumps({"2|2": "1"}))  # F = |z|^4, n = 1
    out = tmp_path / "levi.json"
    rc = run(["levi", "--frame", "rigid", "--n", "1", "--f-coeffs", str(fmap),
              "--out", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["nonvanishing"] is False
    rc = run(["levi", "--frame", "rigid", "--n", "1", "--f-coeffs", str(fmap),
              "--point", "1,0", "--out", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["nonvanishing"] is True


# -- emit-plots --------------------------------------------------------------------


def test_emit_plots(tmp_path):
    outdir = tmp_path / "plots"
    rc = run(["emit-plots", "--kind", "all", "--cutoff", "2", "--out-dir", str(outdir)])
    assert rc == 0
    sweep = list(csv.DictReader(open(outdir / "spectrum_sweep.csv")))
    zero_rows = [r for r in sweep if (r["p"], r["q"]) == ("0", "1")]
    gap_rows = [r for r in sweep if (r["p"], r["q"]) == ("0", "0")]
    assert zero_rows and gap_rows
    for r in zero_rows:
        assert float(r["min_abs_eigenvalue"]) < 1e-9
    for r in gap_rows:
        from fractions import Fraction
        assert abs(float(r["min_abs_eigenvalue"]) - 2 * abs(Fraction(r["xi0"]))) < 1e-6
    prof = list(csv.DictReader(open(outdir / "kernel_profile.csv")))
    import math
    row = next(r for r in prof if float(r["x0"]) == 0.0 and float(r["znorm"]) == 1.0)
    assert abs(float(row["u"]) - (-1 / math.pi)) > 0.1  # derived sign is +
    assert abs(float(row["u"]) - 1 / math.pi) < 1e-12
