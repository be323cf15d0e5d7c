"""Batch command-line driver.

Exit codes: 0 all checks pass (derived-with-note counts as pass), 1 at least
one check failed, 2 configuration error.  Reports are deterministic: floats
are serialized at fixed precision and timing is kept out of the report file
(use --show-timing for a stderr summary).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from fractions import Fraction

from .exact import ExactScalar
from .fiber import (
    closed_form_u,
    inverse_fourier_check,
    default_fourier_points,
    kernel_witness_check,
)
from .levi import levi_heisenberg, levi_rigid
from .opmatrix import build_box, build_dbar, build_dbar_star, build_ql
from .polyop import RealPolynomial, hyperquadric_f
from .spectra import assemble_fiber_matrix, spectrum
from .verify import RunConfig, report_to_json, verify_all

OPS = {
    "dbar": build_dbar,
    "dbar-star": build_dbar_star,
    "box": build_box,
    "ql": build_ql,
}


def _fmt(x: float) -> str:
    return f"{x:.12e}"


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data


def _parse_bidegree(text: str) -> tuple[int, int]:
    p, q = text.split(",")
    return int(p), int(q)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_verify_all(args) -> int:
    overrides = _load_config(args.config)
    if args.max_n is not None:
        overrides["max_n"] = args.max_n
    if args.only:
        overrides["only"] = args.only
    if args.inject_failure:
        overrides["corrupt_sign_table"] = True
    if args.workers is not None:
        overrides["workers"] = args.workers
    else:
        overrides.setdefault("workers", int(os.environ.get("CRQL_WORKERS", "1")))
    cfg = RunConfig.from_dict(overrides)

    t0 = time.perf_counter()
    report = verify_all(cfg)
    elapsed = time.perf_counter() - t0

    text = report_to_json(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for chk in report["checks"]:
        line = f"[{chk['status']:>17}] {chk['check_id']} ({chk['tag']})"
        print(line, file=sys.stderr)
    if args.show_timing:
        print(f"suite wall time: {elapsed:.2f}s", file=sys.stderr)
    return 1 if report["summary"]["failed"] else 0


def cmd_build(args) -> int:
    op = OPS[args.op](args.n)
    if args.bidegree:
        p, q = _parse_bidegree(args.bidegree)
        op = op.restrict_cols(p, q)
    payload = op.to_json()
    payload["op"] = args.op
    payload["schema_version"] = "1"
    with open(args.out, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.out}: n={args.n} op={args.op} entries={len(payload['entries'])}")
    return 0


def cmd_spectrum(args) -> int:
    p, q = _parse_bidegree(args.bidegree)
    xi0 = Fraction(args.xi0)
    fm = assemble_fiber_matrix(build_ql(args.n), p, q, xi0, args.cutoff)
    rep = spectrum(fm, k=args.k)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "p", "q", "xi0", "cutoff", "idx", "eigenvalue", "residual"])
        for i, (ev, res) in enumerate(zip(rep.eigenvalues, rep.residuals)):
            writer.writerow([args.n, p, q, str(xi0), args.cutoff, i, _fmt(ev), _fmt(res)])
    print(
        f"wrote {args.out}: min|lambda|={rep.min_abs:.6e} zero_modes={rep.zero_modes}"
        f" cond(G)={rep.condition:.3e}"
    )
    return 0


def cmd_kernel_check(args) -> int:
    branches = {"pos": (1,), "neg": (-1,), "both": (1, -1)}[args.branch]
    ok = True
    for s in branches:
        rep = kernel_witness_check(s)
        label = "+" if s > 0 else "-"
        for (p, q), good in sorted(rep.results.items()):
            print(f"branch {label}: Qhat_L(uhat theta) = 0 on ({p},{q}): {'ok' if good else 'FAIL'}")
            ok &= good
        print(f"branch {label}: nonzero on (0,0) sanity: {'ok' if rep.sanity_nonzero_00 else 'FAIL'}")
        ok &= rep.sanity_nonzero_00
    return 0 if ok else 1


def cmd_fourier_check(args) -> int:
    if args.points:
        pts = []
        with open(args.points, newline="") as fh:
            for row in csv.DictReader(fh):
                z = (
                    complex(float(row["re_z1"]), float(row["im_z1"])),
                    complex(float(row["re_z2"]), float(row["im_z2"])),
                )
                pts.append((float(row["x0"]), z))
    else:
        pts = default_fourier_points(24)
    rep = inverse_fourier_check(pts, args.tol)
    out = args.out or "fourier_check.csv"
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x0", "re_z1", "im_z1", "re_z2", "im_z2", "u_closed", "u_quad", "abs_err"])
        for pt in rep.points:
            writer.writerow(
                [
                    _fmt(pt.x0),
                    _fmt(pt.z[0].real), _fmt(pt.z[0].imag),
                    _fmt(pt.z[1].real), _fmt(pt.z[1].imag),
                    _fmt(pt.u_closed), _fmt(pt.u_quad), _fmt(pt.abs_err),
                ]
            )
    print(
        f"wrote {out}: {len(rep.points)} points, max rel err {rep.max_rel_err:.3e},"
        f" derived sign {rep.derived_sign:+d}"
    )
    return 0 if rep.ok() else 1


def cmd_levi(args) -> int:
    if args.frame == "heisenberg":
        rep = levi_heisenberg(args.n)
    else:
        if args.frame == "hyperquadric":
            F = hyperquadric_f(args.n, args.p if args.p is not None else args.n)
        elif args.frame == "flat":
            F = RealPolynomial(args.n, {})
        else:  # rigid: coefficient map from config file
            data = _load_config(args.f_coeffs)
            coeffs = {}
            for key, val in data.items():
                alpha_s, beta_s = key.split("|")
                alpha = tuple(int(t) for t in alpha_s.split(",")) if alpha_s else ()
                beta = tuple(int(t) for t in beta_s.split(",")) if beta_s else ()
                coeffs[(alpha, beta)] = Fraction(val)
            F = RealPolynomial(args.n, coeffs)
        point = [ExactScalar()] * args.n
        if args.point:
            vals = [Fraction(v) for v in args.point.split(",")]
            if len(vals) != 2 * args.n:
                raise ValueError("point needs re,im for each z_j")
            point = [
                ExactScalar(vals[2 * j], 0, vals[2 * j + 1], 0) for j in range(args.n)
            ]
        rep = levi_rigid(F, point, args.frame)
    payload = rep.to_json()
    payload["schema_version"] = "1"
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(
        f"frame {rep.frame_id}: nonvanishing={rep.nonvanishing} signature={rep.signature}",
        file=sys.stderr,
    )
    return 0


def cmd_emit_plots(args) -> int:
    os.makedirs(args.out_dir, exist_ok=True)
    if args.kind in ("spectrum-sweep", "all"):
        path = os.path.join(args.out_dir, "spectrum_sweep.csv")
        ql2 = build_ql(2)
        grid = [Fraction(x, 2) for x in range(-4, 5) if x != 0]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "p", "q", "xi0", "cutoff", "min_abs_eigenvalue", "zero_modes"])
            for (p, q) in ((0, 1), (0, 0)):
                for xi in grid:
                    rep = spectrum(assemble_fiber_matrix(ql2, p, q, xi, args.cutoff))
                    writer.writerow(
                        [2, p, q, str(xi), args.cutoff, _fmt(rep.min_abs), rep.zero_modes]
                    )
        print(f"wrote {path}")
    if args.kind in ("kernel-profile", "all"):
        path = os.path.join(args.out_dir, "kernel_profile.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x0", "znorm", "u"])
            for x0 in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]:
                for r in [0.25, 0.5, 1.0, 1.5, 2.0]:
                    writer.writerow([_fmt(x0), _fmt(r), _fmt(closed_form_u(x0, r * r))])
        print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="crql",
        description="Exact chirality/Kohn-Rossi operator engine with fiber-spectral witnesses",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    va = sub.add_parser("verify-all", help="run the full identity suite")
    va.add_argument("--config", help="JSON config file (flags override)")
    va.add_argument("--max-n", type=int, default=None, dest="max_n")
    va.add_argument("--only", help="filter checks by id or tag substring")
    va.add_argument("--out", help="write the JSON report here instead of stdout")
    va.add_argument("--workers", type=int, default=None,
                    help="worker processes (default: CRQL_WORKERS or 1)")
    va.add_argument("--inject-failure", action="store_true",
                    help="corrupt one sign-table entry (failure-path fixture)")
    va.add_argument("--show-timing", action="store_true")
    va.set_defaults(func=cmd_verify_all)

    bd = sub.add_parser("build", help="dump an operator matrix as JSON")
    bd.add_argument("--n", type=int, required=True)
    bd.add_argument("--op", choices=sorted(OPS), required=True)
    bd.add_argument("--bidegree", help="restrict columns to p,q")
    bd.add_argument("--out", required=True)
    bd.set_defaults(func=cmd_build)

    spx = sub.add_parser("spectrum", help="fiber spectrum of a bidegree block")
    spx.add_argument("--n", type=int, required=True)
    spx.add_argument("--bidegree", required=True, help="p,q")
    spx.add_argument("--xi0", required=True, help="rational, nonzero")
    spx.add_argument("--cutoff", type=int, default=6)
    spx.add_argument("--k", type=int, default=6)
    spx.add_argument("--out", required=True)
    spx.set_defaults(func=cmd_spectrum)

    kc = sub.add_parser("kernel-check", help="exact fiber kernel witnesses")
    kc.add_argument("--branch", choices=("pos", "neg", "both"), default="both")
    kc.set_defaults(func=cmd_kernel_check)

    fc = sub.add_parser("fourier-check", help="quadrature vs closed-form solution")
    fc.add_argument("--points", help="CSV with columns x0,re_z1,im_z1,re_z2,im_z2")
    fc.add_argument("--tol", type=float, default=1e-8)
    fc.add_argument("--out")
    fc.set_defaults(func=cmd_fourier_check)

    lv = sub.add_parser("levi", help="Levi form report for a frame")
    lv.add_argument("--frame", choices=("heisenberg", "hyperquadric", "flat", "rigid"),
                    required=True)
    lv.add_argument("--n", type=int, required=True)
    lv.add_argument("--p", type=int, help="positive eigenvalue count for hyperquadric")
    lv.add_argument("--f-coeffs", dest="f_coeffs",
                    help='JSON {"alpha|beta": coeff} coefficient map for rigid F')
    lv.add_argument("--point", help="rational re,im pairs, comma separated")
    lv.add_argument("--out")
    lv.set_defaults(func=cmd_levi)

    ep = sub.add_parser("emit-plots", help="CSV data for the gap/zero-mode dichotomy")
    ep.add_argument("--kind", choices=("spectrum-sweep", "kernel-profile", "all"),
                    default="all")
    ep.add_argument("--cutoff", type=int, default=4)
    ep.add_argument("--out-dir", default="plots")
    ep.set_defaults(func=cmd_emit_plots)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
