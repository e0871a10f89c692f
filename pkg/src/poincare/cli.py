"""Batch driver: every scan and check as a subcommand with CSV or JSON output."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import classical, fund_domain, hecke, quadform, siegel
from .modgroup import SiegelPoint
from .numerics import QuadratureGrid
from .report import ScanReport, fmt

EXIT_OK, EXIT_ENVELOPE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """'a:b:step' (inclusive), 'a:b' (step 1), or a comma list."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            a, b, step = parts
            if step <= 0:
                raise ValueError
            return list(range(a, b + 1, step))
        return [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; expected a:b:step") from None


def parse_form(text: str) -> quadform.HalfIntegralForm:
    try:
        return quadform.HalfIntegralForm.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_exponents(text: str) -> dict[int, int]:
    """'2:1,3:2' -> {2: 1, 3: 2}; empty string means all exponents zero."""
    out = {}
    try:
        for item in filter(None, text.split(",")):
            p, n = item.split(":")
            out[int(p)] = int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad exponent list {text!r}; expected p:n,...") from None
    return out


def _pmap(fn, items, threads: int) -> list:
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# ---------------------------------------------------------------------------
# output

def emit_report(report: ScanReport, cfg: argparse.Namespace) -> None:
    text = report.to_json() if cfg.format == "json" else report.to_csv()
    _write(text, cfg)


def emit_records(records: list[dict], cfg: argparse.Namespace) -> None:
    if cfg.format == "json":
        text = json.dumps(records if len(records) != 1 else records[0], indent=2)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        cols = list(records[0]) if records else []
        writer.writerow(cols)
        for r in records:
            writer.writerow([_csv_cell(r[c]) for c in cols])
        text = buf.getvalue()
    _write(text, cfg)


def _csv_cell(v) -> str:
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v)
    if isinstance(v, bool):
        return str(v).lower()
    return fmt(v)


def _write(text: str, cfg) -> None:
    if cfg.output in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    try:
        with open(cfg.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {cfg.output}: {exc.strerror}") from exc


# ---------------------------------------------------------------------------
# subcommands

def cmd_classical_coeff(cfg):
    p = classical.ClassicalParams(k=cfg.k, m=cfg.m, n=cfg.n, q=cfg.q, y0=cfg.y0, B=cfg.B, N=cfg.N)
    report = ScanReport(("m", "n", "k", "q", "method"))
    methods = ["quadrature", "kloosterman"] if cfg.method == "both" else [cfg.method]
    target = classical.delta(cfg.m, cfg.n)
    for method in methods:
        t0 = time.perf_counter()
        if method == "quadrature":
            val, err = classical.coeff_quadrature_adaptive(p, cfg.tol)
        else:
            val, err = classical.coeff_kloosterman_auto(p)
        report.add((cfg.m, cfg.n, cfg.k, cfg.q, method), val, target, err, time.perf_counter() - t0)
    emit_report(report, cfg)


def _classical_scan(cfg, ks, qs):
    report = ScanReport(("m", "n", "k", "q"))

    def row(kq):
        k, q = kq
        t0 = time.perf_counter()
        p = classical.ClassicalParams(k=k, m=cfg.m, n=cfg.n, q=q, y0=cfg.y0, B=cfg.B, N=cfg.N)
        val, err = classical._coefficient(p, cfg.method, cfg.tol)
        return (cfg.m, cfg.n, k, q), val, err, time.perf_counter() - t0

    for params, val, err, sec in _pmap(row, [(k, q) for k in ks for q in qs], cfg.threads):
        report.add(params, val, classical.delta(cfg.m, cfg.n), err, sec)
    emit_report(report, cfg)


def cmd_weight_scan(cfg):
    _classical_scan(cfg, cfg.k, [cfg.q])


def cmd_level_scan(cfg):
    _classical_scan(cfg, [cfg.k], cfg.q)


def cmd_siegel_coeff(cfg):
    p = siegel.SiegelParams(cfg.s, cfg.t, cfg.k, cfg.y0, cfg.B, cfg.N)
    t0 = time.perf_counter()
    val, err = siegel.siegel_coeff(p, workers=cfg.threads)
    report = ScanReport(("s", "t", "k", "y0", "B", "N"))
    report.add((str(cfg.s), str(cfg.t), cfg.k, cfg.y0, cfg.B, cfg.N), val,
               quadform.orbit_count(cfg.s, cfg.t), err, time.perf_counter() - t0)
    emit_report(report, cfg)


def cmd_siegel_scan(cfg):
    emit_report(siegel.siegel_weight_scan(cfg.s, cfg.t, cfg.k, cfg.y0, cfg.B, cfg.N,
                                          workers=cfg.threads), cfg)


def cmd_reduce_form(cfg):
    red, u = quadform.reduce(cfg.form)
    emit_records([{"form": str(cfg.form), "reduced": str(red), "u": [list(r) for r in u]}], cfg)


def cmd_aut(cfg):
    group = quadform.aut_group(cfg.form)
    emit_records([{"form": str(cfg.form), "order": len(group),
                   "generators": [[list(r) for r in g] for g in quadform.generators(group)]}], cfg)


def cmd_fd_membership(cfg):
    vals = [float(v) for v in cfg.z.split(",")]
    if len(vals) != 6:
        raise UsageError("--z needs x11,x12,x22,y11,y12,y22")
    x11, x12, x22, y11, y12, y22 = vals
    z = SiegelPoint([[x11, x12], [x12, x22]], [[y11, y12], [y12, y22]])
    m = fund_domain.in_fundamental_domain(z)
    emit_records([{"z": cfg.z, "status": m.status, "inside": m.inside,
                   "failing": m.failing or ""}], cfg)


def cmd_gottschling(cfg):
    recs = [{"index": i, "c": [list(r) for r in p.c], "d": [list(r) for r in p.d], "rank_c": p.rank_c}
            for i, p in enumerate(fund_domain.gottschling_set())]
    emit_records(recs, cfg)


def cmd_y0_search(cfg):
    grid = QuadratureGrid(3, cfg.N)
    y0 = fund_domain.search_y0(cfg.tol, grid)
    cert = fund_domain.certify_y0(y0, grid)
    rec = json.loads(cert.to_json())
    rec["tol"] = cfg.tol
    emit_records([rec], cfg)


def cmd_alpha_poly_check(cfg):
    from .sampling import random_bottom_rows, random_x
    rng = np.random.default_rng(cfg.seed)
    rows = random_bottom_rows(rng, cfg.samples)
    recs = []
    for i, (c, d) in enumerate(rows):
        x = random_x(rng)
        coeffs = fund_domain.det_alpha_polynomial(c, d, x)
        rank = int(np.linalg.matrix_rank(c))
        recs.append({"sample": i, "rank_c": rank, "p0": float(coeffs[0]), "p1": float(coeffs[1]),
                     "p2": float(coeffs[2]), "top_degree": fund_domain.top_degree(coeffs),
                     "ok": bool(min(coeffs) >= -1e-9 and fund_domain.top_degree(coeffs) == rank)})
    emit_records(recs, cfg)


def cmd_hecke_eigen(cfg):
    fits = _pmap(lambda k: hecke.estimate_weights(k), cfg.k, cfg.threads)
    _write(hecke.eigen_csv(fits, cfg.P) if cfg.format == "csv"
           else json.dumps([{"k": f.weight, "forms": [
               {"form": w.form_index, "omega": float(fmt(w.omega)),
                "lambda": {str(p): float(fmt(lam)) for p, lam in form.eigenvalues(cfg.P).items()}}
               for w, form in zip(f.weights, f.forms)]} for f in fits], indent=2), cfg)


def cmd_weights(cfg):
    fits = _pmap(lambda k: hecke.estimate_weights(k), cfg.k, cfg.threads)
    recs = [{"k": f.weight, "form": w.form_index, "omega": w.omega, "residual": f.residual}
            for f in fits for w in f.weights]
    emit_records(recs, cfg)


def cmd_weyl_scan(cfg):
    m = 1
    for p, n in cfg.exps.items():
        m *= p**n
    report = ScanReport(("m", "k"))

    def row(k):
        t0 = time.perf_counter()
        w = hecke.weyl_sum(k, cfg.exps)
        ref = classical.petersson_delta(m, 1, k, 1, 200)[0]
        return k, w, abs(w - ref), time.perf_counter() - t0

    for k, w, err, sec in _pmap(row, cfg.k, cfg.threads):
        report.add((m, k), w, classical.delta(m, 1), err, sec)
    emit_report(report, cfg)


def cmd_selftest(cfg):
    from . import acceptance
    results = acceptance.run_all(skip=set(cfg.skip or ()), log=sys.stderr)
    recs = [{"criterion": r.name, "passed": r.passed, "detail": r.detail, "seconds": r.seconds}
            for r in results]
    emit_records(recs, cfg)
    return EXIT_OK if all(r.passed for r in results) else EXIT_ENVELOPE


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="output format (csv)")
    common.add_argument("--output", "-o", default=None, help="output path (stdout)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker threads (all cores); output does not depend on it")
    common.add_argument("--tol", type=float, default=1e-8, help="refinement tolerance (1e-8)")

    parser = argparse.ArgumentParser(prog="poincare", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    def classical_opts(p, k_range=False, q_range=False):
        p.add_argument("--m", type=int, default=1, help="series index (1)")
        p.add_argument("--n", type=int, default=1, help="coefficient index (1)")
        p.add_argument("--k", type=parse_range if k_range else int, default=[12] if k_range else 12,
                       help="weight" + (" range a:b:step" if k_range else "") + " (12)")
        p.add_argument("--q", type=parse_range if q_range else int, default=[1] if q_range else 1,
                       help="level" + (" range a:b:step" if q_range else "") + " (1)")
        p.add_argument("--y0", type=float, default=1.1, help="height of the segment (1.1)")
        p.add_argument("--B", type=int, default=30, help="coset height (30)")
        p.add_argument("--N", type=int, default=64, help="quadrature points (64)")

    p = add("classical-coeff", cmd_classical_coeff, "p_{m,k}(n) by quadrature and/or Kloosterman")
    classical_opts(p)
    p.add_argument("--method", choices=("quadrature", "kloosterman", "both"), default="both")

    for name, func, kr, qr in (("weight-scan", cmd_weight_scan, True, False),
                               ("level-scan", cmd_level_scan, False, True)):
        p = add(name, func, "limit scan of p_{m,k}(n) against delta(m,n)")
        classical_opts(p, kr, qr)
        p.add_argument("--method", choices=("quadrature", "kloosterman"), default="kloosterman")

    def siegel_opts(p, k_range=False):
        p.add_argument("--s", type=parse_form, default=parse_form("1,0,1"), help="series index a,b,c (1,0,1)")
        p.add_argument("--t", type=parse_form, default=parse_form("1,0,1"), help="coefficient index (1,0,1)")
        p.add_argument("--k", type=parse_range if k_range else int,
                       default=[20, 24, 28, 32, 36, 40] if k_range else 20, help="weight")
        p.add_argument("--y0", type=float, default=siegel.DEFAULT_Y0, help="height (1.05)")
        p.add_argument("--B", type=int, default=2, help="coset height (2)")
        p.add_argument("--N", type=int, default=16, help="points per axis (16)")

    siegel_opts(add("siegel-coeff", cmd_siegel_coeff, "p_{s,k}(t) by 3-D quadrature"))
    siegel_opts(add("siegel-scan", cmd_siegel_scan, "weight scan of p_{s,k}(t)"), k_range=True)

    for name, func in (("reduce-form", cmd_reduce_form), ("aut", cmd_aut)):
        p = add(name, func, "binary form reduction" if name == "reduce-form" else "automorphism group")
        p.add_argument("--form", type=parse_form, required=True, help="a,b,c meaning s11,2*s12,s22")

    p = add("fd-membership", cmd_fd_membership, "test z against the genus-2 fundamental domain")
    p.add_argument("--z", required=True, help="x11,x12,x22,y11,y12,y22")

    add("gottschling", cmd_gottschling, "list the 19 Gottschling pairs")

    p = add("y0-search", cmd_y0_search, "bisection for the smallest certified y0")
    p.add_argument("--N", type=int, default=32, help="grid points per axis (32)")
    p.set_defaults(tol=1e-3)

    p = add("alpha-poly-check", cmd_alpha_poly_check, "alpha^2-polynomial structure on random rows")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = add("hecke-eigen", cmd_hecke_eigen, "level-1 eigenvalues and weights")
    p.add_argument("--k", type=parse_range, default=[12], help="weights a:b:step (12)")
    p.add_argument("--P", type=int, default=hecke.MAX_PRIME, help="prime bound (50)")

    p = add("weights", cmd_weights, "fitted Petersson weights")
    p.add_argument("--k", type=parse_range, default=[12, 16, 18, 20, 22, 24])

    p = add("weyl-scan", cmd_weyl_scan, "Weyl sums against the Kloosterman route")
    p.add_argument("--k", type=parse_range, default=[12, 16, 18, 20, 22, 24])
    p.add_argument("--exps", type=parse_exponents, default={2: 1}, help="p:n,... (2:1)")

    p = add("selftest", cmd_selftest, "run the acceptance criteria")
    p.add_argument("--skip", type=int, action="append", help="criterion number to skip")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        cfg = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(cfg, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        code = cfg.func(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENVELOPE
    return code or EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
