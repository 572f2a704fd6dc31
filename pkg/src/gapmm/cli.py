"""Command-line driver: instance generation, verification batches, the
saddle-point example, parameter sweeps, and the backend benchmark.

Exit codes: 0 = all applicable conclusions pass, 1 = some conclusion
failed, 2 = usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from .config import VerifyConfig
from .errors import GapmmError, ParseError
from .generate import KINDS, make_instance, make_ordered_pair, rng_for
from .perturb import split_pos_neg
from .report import (
    build_report,
    dump_report,
    jsonify,
    theorem_dict,
    write_csv,
)
from .spectral import compress, split
from .symmat import SymMatrix, check_form_sum, eigvals_sym, read_matrix, spectral_norm, write_matrix
from .theorems import (
    ConclusionCheck,
    TheoremReport,
    check_bounded_perturbation,
    check_commutator_bounds,
    check_heinz,
    check_offdiag_form,
    check_offdiag_operator,
    check_operator_perturbation,
    check_ordering,
    check_overlap_conditions,
    check_relative_perturbation,
    check_scaling_lipschitz,
    check_semibounded_pair,
)
from . import stokes as stokes_mod

THEOREMS = (
    "bounded-pert",
    "op-pert",
    "semibounded",
    "offdiag-op",
    "offdiag-form",
    "unbounded-style",
    "monotonicity",
    "lipschitz",
    "specrad",
    "overlap",
    "heinz",
    "form-sum",
)


def _parse_gap(text):
    try:
        c, d = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'c,d', got {text!r}")
    if not c < d:
        raise argparse.ArgumentTypeError("gap requires c < d")
    return c, d


def _parse_range(text):
    try:
        a, b, steps = text.split(":")
        a, b, steps = float(a), float(b), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a:b:steps', got {text!r}")
    if steps < 2:
        raise argparse.ArgumentTypeError("need at least 2 steps")
    return np.linspace(a, b, steps)


def _parse_dims(text):
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'lo:hi', got {text!r}")
    if not 2 <= lo <= hi:
        raise argparse.ArgumentTypeError("need 2 <= lo <= hi")
    return lo, hi


def _config_from_args(args) -> VerifyConfig:
    cfg = VerifyConfig(
        probe_trials=getattr(args, "trials", 500),
        k_max=getattr(args, "kmax", 5),
        seed=getattr(args, "seed", 0),
    )
    scale = getattr(args, "tol_scale", None)
    if scale is not None:
        cfg = cfg.with_tol_scale(scale)
    return cfg


# ---------------------------------------------------------------------------
# gen

def _instance_dir(out, index, count):
    if count == 1:
        return out
    return os.path.join(out, f"inst{index:04d}")


def cmd_gen(args) -> int:
    count = args.count
    for i in range(count):
        seed = args.seed + i
        dest = _instance_dir(args.out, i, count)
        os.makedirs(dest, exist_ok=True)
        if args.kind == "ordered-pair":
            inst = make_ordered_pair(args.dim, seed, gap=args.gap)
        else:
            inst = make_instance(
                args.kind, args.dim, seed, gap=args.gap, scale=args.scale, branch=args.branch
            )
        write_matrix(os.path.join(dest, "A.txt"), inst.a)
        files = {"A": "A.txt"}
        if inst.v is not None:
            write_matrix(os.path.join(dest, "V.txt"), inst.v)
            files["V"] = "V.txt"
        if inst.v1 is not None:
            write_matrix(os.path.join(dest, "V1.txt"), inst.v1)
            files["V1"] = "V1.txt"
        manifest = {
            "kind": inst.kind,
            "dim": inst.dim,
            "gap": [inst.c, inst.d],
            "gamma": inst.gamma,
            "seed": inst.seed,
            "branch": inst.branch,
            "margins": inst.margins,
            "files": files,
        }
        with open(os.path.join(dest, "manifest.json"), "w") as fh:
            json.dump(jsonify(manifest), fh, indent=2)
            fh.write("\n")
    print(f"wrote {count} instance(s) under {args.out}")
    return 0


def load_instance_dir(path):
    manifest_path = os.path.join(path, "manifest.json")
    if not os.path.exists(manifest_path):
        raise ParseError(f"no manifest.json in {path}")
    with open(manifest_path) as fh:
        try:
            manifest = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad manifest: {exc}", line=exc.lineno, column=exc.colno) from exc
    for key in ("kind", "gap", "gamma", "files"):
        if key not in manifest:
            raise ParseError(f"manifest missing required key {key!r}")
    files = manifest.get("files", {})
    mats = {}
    for key, rel in files.items():
        mats[key] = read_matrix(os.path.join(path, rel))
    return manifest, mats


# ---------------------------------------------------------------------------
# verify

def _default_tgrid(thm, cfg):
    if thm == "lipschitz":
        return np.linspace(0.0, 1.0, 21)
    if thm == "offdiag-op":
        return np.linspace(-1.0, 1.0, 7)
    if thm == "offdiag-form":
        half = 1.0 / (2.0 * cfg.form_b)
        return np.linspace(-0.9 * half, 0.9 * half, 9)
    return None


def _check_one(thm, inst_kind, a, v, v1, manifest, cfg, t_grid):
    c, d = manifest["gap"]
    gamma = manifest["gamma"]
    branch = manifest.get("branch", "lower")
    if thm == "bounded-pert":
        return check_bounded_perturbation(a, v, c, d, cfg)
    if thm == "op-pert":
        return check_operator_perturbation(a, v, gamma, cfg)
    if thm == "semibounded":
        return check_semibounded_pair(a, a + v, gamma, cfg, branch=branch)
    if thm == "offdiag-op":
        return check_offdiag_operator(a, v, gamma, cfg, t_grid=t_grid)
    if thm == "offdiag-form":
        return check_offdiag_form(a, v, gamma, cfg, t_grid=t_grid, branch=branch)
    if thm == "unbounded-style":
        b_slope = manifest.get("margins", {}).get("form_b")
        return check_relative_perturbation(a, v, c, d, cfg, branch=branch, b_slope=b_slope)
    if thm == "monotonicity":
        if v1 is None:
            raise GapmmError("monotonicity needs an ordered pair (V and V1)")
        return check_ordering(a, v, v1, c, d, cfg)
    if thm == "lipschitz":
        grid = t_grid if t_grid is not None else np.linspace(0.0, 1.0, 21)
        return check_scaling_lipschitz(a, v, c, d, grid, cfg)
    if thm == "specrad":
        return check_commutator_bounds(a, v, gamma, cfg)
    if thm == "overlap":
        return check_overlap_conditions(a, a + v, gamma, cfg)
    raise GapmmError(f"theorem id {thm!r} cannot run on matrix instances")


_THM_TO_KIND = {
    "bounded-pert": "bounded-pert",
    "op-pert": "bounded-pert",
    "semibounded": "semibounded",
    "offdiag-op": "offdiag-op",
    "offdiag-form": "offdiag-form",
    "unbounded-style": "unbounded-style",
    "lipschitz": "bounded-pert",
    "specrad": "bounded-pert",
    "overlap": "bounded-pert",
}


def _generated_batch(thm, args, cfg):
    lo, hi = args.dims
    dim_rng = rng_for(args.seed, 0xD1)
    for i in range(args.batch):
        dim = int(dim_rng.integers(lo, hi + 1))
        seed = args.seed + i
        if thm == "monotonicity":
            inst = make_ordered_pair(dim, seed, gap=args.gap)
        else:
            inst = make_instance(_THM_TO_KIND[thm], dim, seed, gap=args.gap)
        manifest = {
            "kind": inst.kind,
            "dim": inst.dim,
            "gap": [inst.c, inst.d],
            "gamma": inst.gamma,
            "seed": inst.seed,
            "branch": inst.branch,
            "margins": inst.margins,
        }
        yield f"{thm}-{i:04d}", inst.a, inst.v, inst.v1, manifest


def _heinz_batch(args, cfg):
    for i in range(args.batch):
        rng = rng_for(args.seed, 0x4E, i)
        dim = int(rng.integers(4, 21))
        g1 = rng.standard_normal((dim, dim))
        g2 = rng.standard_normal((dim, dim))
        l1 = g1 @ g1.T + 0.5 * np.eye(dim)
        l2 = g2 @ g2.T + 0.5 * np.eye(dim)
        s = rng.standard_normal((dim, dim))
        yield f"heinz-{i:04d}", l1, l2, s


def _formsum_report(lam, k, cfg, rng) -> TheoremReport:
    rep = TheoremReport(theorem_id="form-sum")
    fs = check_form_sum(lam, k, cfg.tols, rng=rng)
    bound = fs.tol * fs.scale
    rep.conclusions.append(
        ConclusionCheck("operator-term", fs.residual_operator_term <= bound, fs.residual_operator_term)
    )
    rep.conclusions.append(
        ConclusionCheck("form-term", fs.residual_form_term <= bound, fs.residual_form_term)
    )
    rep.extras["scale"] = fs.scale
    return rep


def cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    thm = args.thm
    t_start = time.time()
    t_grid = args.tgrid if args.tgrid is not None else _default_tgrid(thm, cfg)
    instance_dicts = []

    if thm == "heinz":
        nu_grid = np.linspace(0.0, 1.0, 11)
        for iid, l1, l2, s in _heinz_batch(args, cfg):
            rep = check_heinz(l1, l2, s, nu_grid, cfg)
            instance_dicts.append(theorem_dict(rep, iid, "heinz"))
    elif thm == "form-sum":
        for i in range(args.batch):
            rng = rng_for(args.seed, 0xF5, i)
            dim = int(rng.integers(3, 16))
            lam = rng.standard_normal((dim, dim))
            kmat = rng.standard_normal((dim, dim))
            rep = _formsum_report(
                SymMatrix.from_entries(0.5 * (lam + lam.T)),
                SymMatrix.from_entries(0.5 * (kmat + kmat.T)),
                cfg,
                rng,
            )
            instance_dicts.append(theorem_dict(rep, f"form-sum-{i:04d}", "form-sum"))
    elif args.inputs:
        for path in args.inputs:
            manifest, mats = load_instance_dir(path)
            rep = _check_one(
                thm,
                manifest.get("kind"),
                mats["A"],
                mats.get("V"),
                mats.get("V1"),
                manifest,
                cfg,
                t_grid,
            )
            instance_dicts.append(theorem_dict(rep, os.path.basename(path.rstrip("/")), manifest.get("kind")))
    else:
        for iid, a, v, v1, manifest in _generated_batch(thm, args, cfg):
            rep = _check_one(thm, manifest["kind"], a, v, v1, manifest, cfg, t_grid)
            instance_dicts.append(theorem_dict(rep, iid, manifest["kind"]))

    config_echo = {
        "thm": thm,
        "batch": args.batch,
        "dims": list(args.dims),
        "gap": list(args.gap) if args.gap else None,
        "kmax": cfg.k_max,
        "trials": cfg.probe_trials,
        "tol_scale": args.tol_scale,
        "tgrid": [float(t) for t in t_grid] if t_grid is not None else None,
    }
    report = build_report(args.seed, config_echo, instance_dicts, timing=time.time() - t_start)
    if args.json:
        dump_report(report, args.json)
    summary = report["summary"]
    print(f"{thm}: pass={summary['pass']} fail={summary['fail']} na={summary['na']}")
    return 0 if summary["fail"] == 0 else 1


# ---------------------------------------------------------------------------
# stokes

def cmd_stokes(args) -> int:
    cfg = _config_from_args(args)
    t_start = time.time()
    points_list = [int(p) for p in args.points.split(",")]
    if len(points_list) == 1 and args.levels > 1:
        base = points_list[0]
        points_list = [base * (2**i) for i in range(args.levels)]
    instance_dicts = []
    csv_rows = []
    first_eigs = []
    for pts in points_list:
        grid = stokes_mod.Grid(args.dim, pts)
        inst = stokes_mod.assemble_stokes(grid, args.nu, args.vstar)
        rep = stokes_mod.verify_stokes_bounds(inst, args.kmax, cfg)
        iid = f"stokes-{args.dim}d-p{pts}"
        instance_dicts.append(theorem_dict(rep, iid, "stokes"))
        nu_lam = rep.extras["nu_lambda_l"]
        lam_b = rep.extras["lambda_b_positive"]
        upper = [nl + inst.c_h * args.vstar**2 / args.nu for nl in nu_lam]
        for k in range(args.kmax):
            csv_rows.append([pts, k + 1, nu_lam[k], lam_b[k], upper[k], inst.c_h])
        first_eigs.append((grid.h, nu_lam[0]))

    if args.dim == 2 and len(first_eigs) >= 2:
        target = args.nu * 2.0 * math.pi**2
        errs = [(h, abs(target - lam)) for h, lam in first_eigs]
        orders = []
        for (h1, e1), (h2, e2) in zip(errs, errs[1:]):
            if e1 > 0 and e2 > 0:
                orders.append(math.log(e1 / e2) / math.log(h1 / h2))
        if orders:
            instance_dicts[-1]["extras"]["convergence_orders"] = orders
            print("observed convergence orders:", [f"{o:.2f}" for o in orders])

    config_echo = {
        "dim": args.dim,
        "points": points_list,
        "nu": args.nu,
        "vstar": args.vstar,
        "kmax": args.kmax,
        "trials": cfg.probe_trials,
    }
    report = build_report(args.seed, config_echo, instance_dicts, timing=time.time() - t_start)
    if args.json:
        dump_report(report, args.json)
    if args.csv:
        write_csv(
            args.csv,
            ["points", "k", "nu_lambda_laplacian", "lambda_block_positive", "upper_bound", "c_h"],
            csv_rows,
        )
    summary = report["summary"]
    print(f"stokes: pass={summary['pass']} fail={summary['fail']} na={summary['na']}")
    return 0 if summary["fail"] == 0 else 1


# ---------------------------------------------------------------------------
# sweep

def cmd_sweep(args) -> int:
    cfg = _config_from_args(args)
    t_start = time.time()
    manifest, mats = load_instance_dir(args.inp)
    kind = manifest.get("kind")
    a = mats["A"]
    v = mats.get("V")
    c, d = manifest["gap"]
    gamma = manifest["gamma"]
    t_grid = args.t

    vp, vn = split_pos_neg(v, cfg.tols)
    np_n = spectral_norm(vp, cfg.tols)
    nn_n = spectral_norm(vn, cfg.tols)
    norm_v = spectral_norm(v, cfg.tols)

    rows = []
    curves = []
    skipped = []
    for t in t_grid:
        t = float(t)
        if kind in ("bounded-pert", "semibounded"):
            # Positive/negative parts of tV swap roles for negative t.
            np_t = t * np_n if t >= 0 else -t * nn_n
            nn_t = t * nn_n if t >= 0 else -t * np_n
            if np_t + nn_t >= (d - c):
                skipped.append(t)
                continue
            gamma_t = 0.5 * ((c + np_t) + (d - nn_t))
        else:
            gamma_t = gamma
        b_t = SymMatrix.from_entries(a.entries + t * v.entries)
        try:
            s_t = split(b_t, gamma_t, cfg.tols)
        except GapmmError:
            skipped.append(t)
            continue
        vals = eigvals_sym(compress(b_t, s_t.basis_p, cfg.tols), cfg.tols)
        curves.append((t, [float(x) for x in vals]))
    if not curves:
        print("sweep: every grid point was skipped", file=sys.stderr)
        return 1
    k_max = min(min(len(v_) for _, v_ in curves), args.kmax)
    for t, vals in curves:
        rows.append([t] + vals[:k_max])

    worst = -math.inf
    worst_pair = None
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            t, lt = curves[i]
            s, ls = curves[j]
            for k in range(k_max):
                excess = abs(lt[k] - ls[k]) - norm_v * abs(t - s)
                if excess > worst:
                    worst = excess
                    worst_pair = (t, s, k + 1)
    ok = worst <= cfg.tols.mm_tol * (1.0 + norm_v)

    if args.csv:
        write_csv(args.csv, ["t"] + [f"lambda_{k+1}" for k in range(k_max)], rows)
    if args.json:
        payload = {
            "run": {"seed": args.seed, "config": {"t": [float(x) for x in t_grid], "kmax": args.kmax}},
            "kind": kind,
            "perturbation_norm": norm_v,
            "skipped_t": skipped,
            "max_excess_over_bound": worst,
            "worst_pair": list(worst_pair) if worst_pair else None,
            "holds": ok,
            "timing": time.time() - t_start,
        }
        with open(args.json, "w") as fh:
            json.dump(jsonify(payload), fh, indent=2)
            fh.write("\n")
    print(
        f"sweep: {len(curves)} points, skipped {len(skipped)}; "
        f"max excess over modulus bound {worst:.3e} -> {'ok' if ok else 'VIOLATION'}"
    )
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# bench

def cmd_bench(args) -> int:
    from . import _jacobi_py
    from .backend import BACKEND, jacobi_eigh

    try:
        from . import _jacobi

        compiled = _jacobi.jacobi_kernel
    except ImportError:
        compiled = None
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(0)
    print(f"active backend: {BACKEND}")
    print(f"{'n':>6} {'compiled':>12} {'python':>12} {'ratio':>8}")
    for n in sizes:
        m = rng.standard_normal((n, n))
        m = 0.5 * (m + m.T)
        t_c = math.nan
        if compiled is not None:
            best = math.inf
            for _ in range(args.repeats):
                t0 = time.perf_counter()
                jacobi_eigh(m, kernel=compiled)
                best = min(best, time.perf_counter() - t0)
            t_c = best
        best = math.inf
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            jacobi_eigh(m, kernel=_jacobi_py.jacobi_kernel)
            best = min(best, time.perf_counter() - t0)
        t_p = best
        ratio = t_p / t_c if compiled is not None else math.nan
        print(f"{n:>6} {t_c:>12.6f} {t_p:>12.6f} {ratio:>8.1f}")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gapmm",
        description="Verify minimax characterizations of eigenvalues in spectral gaps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate instance files")
    p.add_argument("--kind", required=True, choices=KINDS + ("ordered-pair",))
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--gap", type=_parse_gap, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--scale", type=float, default=None)
    p.add_argument("--branch", choices=("lower", "upper"), default="lower")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="run a verification batch")
    p.add_argument("--thm", required=True, choices=THEOREMS)
    p.add_argument("--in", dest="inputs", nargs="+", default=None, help="instance directories")
    p.add_argument("--batch", type=int, default=20)
    p.add_argument("--dims", type=_parse_dims, default=(20, 60))
    p.add_argument("--gap", type=_parse_gap, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kmax", type=int, default=5)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--tgrid", type=_parse_range, default=None)
    p.add_argument("--tol-scale", dest="tol_scale", type=float, default=None)
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stokes", help="saddle-point block operator battery")
    p.add_argument("--dim", type=int, choices=(1, 2), required=True)
    p.add_argument("--points", required=True, help="interior points per axis (comma list)")
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--vstar", type=float, required=True)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol-scale", dest="tol_scale", type=float, default=None)
    p.add_argument("--json", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_stokes)

    p = sub.add_parser("sweep", help="eigenvalue curves along a scaling of the perturbation")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--t", type=_parse_range, required=True)
    p.add_argument("--kmax", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol-scale", dest="tol_scale", type=float, default=None)
    p.add_argument("--json", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="compare the compiled and Python kernels")
    p.add_argument("--sizes", default="16,32,64,128")
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    except GapmmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
