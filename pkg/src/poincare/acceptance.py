"""The ten acceptance checks, shared by the test suite and ``poincare selftest``."""

from __future__ import annotations

import contextlib
import io
import itertools
import os
import tempfile
import time
from dataclasses import dataclass

import numpy as np

from . import classical, fund_domain, hecke, quadform, siegel
from .modgroup import enumerate_g1_cosets, enumerate_g2_cosets, normalize_sign
from .numerics import QuadratureGrid
from .quadform import HalfIntegralForm
from .sampling import random_bottom_rows, random_form, random_positive, random_x

ROUNDOFF_FLOOR = 1e-12


@dataclass(frozen=True)
class Result:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f} s)"


def _timed(number, name, budget):
    def wrap(fn):
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            ok, detail = fn(*args, **kwargs)
            sec = time.perf_counter() - t0
            if sec > budget:
                ok, detail = False, f"{detail}; over the {budget:.0f} s budget"
            return Result(number, name, bool(ok), detail, sec)
        run.number = number
        return run
    return wrap


# ---------------------------------------------------------------------------

@_timed(1, "classical oracle equivalence", 120)
def check_oracle_equivalence():
    worst = 0.0
    for m, n, k in itertools.product((1, 2, 3), (1, 2, 3), (12, 16, 20)):
        p = classical.ClassicalParams(k=k, m=m, n=n)
        quad, _ = classical.coeff_quadrature_adaptive(p)
        kl, tail = classical.coeff_kloosterman_auto(p)
        excess = abs(quad - kl) - (1e-6 + tail)
        worst = max(worst, abs(quad - kl))
        if excess >= 0:
            return False, f"(m,n,k)=({m},{n},{k}): |{quad:.10g} - {kl:.10g}| too large"
    return True, f"27 points, max |quadrature - Kloosterman| = {worst:.2e}"


@_timed(2, "weight limit", 10)
def check_weight_limit():
    parts = []
    for m, n in ((1, 1), (1, 2), (2, 3)):
        e12, e60 = (abs(classical.coeff_kloosterman_auto(classical.ClassicalParams(k=k, m=m, n=n))[0]
                        - classical.delta(m, n)) for k in (12, 60))
        if not (e60 < 0.02 and e60 < e12):
            return False, f"(m,n)=({m},{n}): err(60)={e60:.3g}, err(12)={e12:.3g}"
        parts.append(f"({m},{n}) {e60:.1e}")
    return True, "err at k=60: " + ", ".join(parts)


@_timed(3, "level limit", 10)
def check_level_limit():
    worst = 0.0
    for m, n in ((1, 1), (1, 2)):
        for q in range(20, 201):
            p = classical.ClassicalParams(k=12, m=m, n=n, q=q)
            worst = max(worst, abs(classical.coeff_kloosterman_auto(p)[0] - classical.delta(m, n)))
    return worst < 0.01, f"max |p - delta| over q in 20..200 = {worst:.2e}"


SIEGEL_WEIGHTS = (20, 24, 28, 32, 36, 40)


def siegel_table(workers: int = 1):
    """Values and error estimates for t = I and t = diag(1,2), s = I, at B=2, N=16."""
    one = HalfIntegralForm(1, 0, 1)
    return siegel.siegel_coeff_estimates(one, [one, HalfIntegralForm.diag(1, 2)], SIEGEL_WEIGHTS,
                                         siegel.DEFAULT_Y0, 2, 16, workers)


@_timed(4, "Siegel orthogonality", 1800)
def check_siegel(table=None):
    if not fund_domain.certify_y0(siegel.DEFAULT_Y0).passed:
        return False, f"y0={siegel.DEFAULT_Y0} not certified"
    value, err = table if table is not None else siegel_table()
    target = quadform.orbit_count(HalfIntegralForm(1, 0, 1), HalfIntegralForm(1, 0, 1))
    top, off = value[-1, 0], value[-1, 1]
    floored = np.maximum(err[:, 0], ROUNDOFF_FLOOR)
    decreasing = bool(np.all(np.diff(floored) <= 0))
    ok = abs(top - target) < 0.1 and abs(off) < 0.05 and decreasing
    return ok, (f"k=40: p(I,I)={top:.8f} (target {target}), p(I,diag(1,2))={off:.2e}, "
                f"errors {', '.join(f'{e:.1e}' for e in err[:, 0])}")


def brute_force_g2_cosets() -> set:
    """Bottom rows of all 4x4 symplectic matrices with entries in {-1,0,1}, up to sign."""
    J = np.block([[np.zeros((2, 2), int), np.eye(2, dtype=int)],
                  [-np.eye(2, dtype=int), np.zeros((2, 2), int)]])
    rows = np.array(list(itertools.product((-1, 0, 1), repeat=4)))
    pairs2 = np.array(list(itertools.product(range(len(rows)), repeat=2)))
    blocks = np.stack([rows[pairs2[:, 0]], rows[pairs2[:, 1]]], axis=1)  # (6561, 2, 4)
    form = np.einsum("nij,jk,nlk->nil", blocks, J, blocks)
    # M J M^T = J: both row blocks isotropic and top J bottom^T = I
    isotropic = blocks[np.all(form == 0, axis=(1, 2))]
    out = set()
    for bot in isotropic:
        cross = np.einsum("nij,jk,lk->nil", isotropic, J, bot)
        if np.any(np.all(cross == np.eye(2, dtype=int), axis=(1, 2))):
            c, d = normalize_sign(bot[:, :2], bot[:, 2:])
            out.add((tuple(map(tuple, c)), tuple(map(tuple, d))))
    return out


@_timed(5, "coset enumeration", 60)
def check_cosets():
    g1 = {(r.c, r.d) for r in enumerate_g1_cosets(1)}
    if g1 != {(0, 1), (1, 0), (1, 1), (1, -1)}:
        return False, f"genus 1 gives {sorted(g1)}"
    ours = {(tuple(map(tuple, r.c)), tuple(map(tuple, r.d))) for r in enumerate_g2_cosets(1)}
    oracle = brute_force_g2_cosets()
    return ours == oracle, f"genus 2: {len(ours)} enumerated, {len(oracle)} by brute force"


@_timed(6, "Gottschling set and y0", 120)
def check_gottschling():
    pairs = fund_domain.gottschling_set()
    ranks = [p.rank_c for p in pairs]
    if len(pairs) != 19 or ranks.count(1) != 4 or ranks.count(2) != 15:
        return False, f"{len(pairs)} pairs, rank split {ranks.count(1)}/{ranks.count(2)}"
    cert = fund_domain.certify_y0(1.05, QuadratureGrid(3, 64))
    y0 = fund_domain.search_y0(1e-3)
    ok = cert.passed and cert.margin > 1e-3 and 1 < y0 < 1.1
    return ok, f"19 pairs (4/15), margin at 1.05 = {cert.margin:.4f}, search_y0 = {y0:.5f}"


@_timed(7, "lemma machinery", 60)
def check_lemma():
    rng = np.random.default_rng(2024)
    for c, d in random_bottom_rows(rng, 100):
        coeffs = fund_domain.det_alpha_polynomial(c, d, random_x(rng))
        if min(coeffs) < -1e-9 or fund_domain.top_degree(coeffs) != np.linalg.matrix_rank(c):
            return False, f"alpha polynomial {coeffs} for c={c.tolist()}, d={d.tolist()}"
    worst = 0.0
    for pair in fund_domain.gottschling_set():
        if round(np.linalg.det(np.array(pair.c, float))) != 0:
            rep = fund_domain.rank_asymptotic_check(pair.c, pair.d, [50.0])
            worst = max(worst, rep.rows[0].value)
    if worst >= 0.1:
        return False, f"ratio deviation {worst:.3g} at y=50"
    traces = [np.trace(random_form(rng).matrix @ random_positive(rng)) for _ in range(1000)]
    ok = min(traces) >= 0
    return ok, f"100 rows ok, worst ratio deviation at y=50 = {worst:.4f}, min Tr(sy) = {min(traces):.3g}"


@_timed(8, "automorphism counts", 10)
def check_aut():
    forms = {"diag(1,2)": HalfIntegralForm(1, 0, 2), "I": HalfIntegralForm(1, 0, 1),
             "hex": HalfIntegralForm(1, 1, 1)}
    orders = [len(quadform.aut_group(s)) for s in forms.values()]
    orbits = [quadform.orbit_count(s, s) for s in forms.values()]
    red = quadform.reduce(HalfIntegralForm(5, 4, 1))[0]
    ok = orders == [4, 8, 12] and orbits == [2, 4, 6] and red == HalfIntegralForm(1, 0, 1)
    return ok, f"orders {orders}, orbit counts {orbits}, (5,4,1) -> ({red})"


HECKE_WEIGHTS = tuple(range(12, 61, 2))


@_timed(9, "eigenvalue pipeline", 300)
def check_hecke():
    tau2 = hecke.miller_basis(12, 4)[0][2]
    if tau2 != -24:
        return False, f"tau(2) = {tau2}"
    fits = {k: hecke.estimate_weights(k) for k in HECKE_WEIGHTS}
    for k in range(12, 25, 2):
        for f in fits[k].forms:
            for p in (2, 3, 5, 7):
                if abs(f.lam(p * p) - (f.lam(p) ** 2 - 1)) > 1e-10:
                    return False, f"Hecke recursion fails at k={k}, p={p}"
    worst_res = max(fits[k].residual for k in (12, 16, 18, 20, 22, 24))
    if worst_res >= 1e-5:
        return False, f"weight residual {worst_res:.3g}"
    w = {k: hecke.weyl_sum(k, {2: 1}, fits[k]) for k in HECKE_WEIGHTS}
    gap = max(abs(w[k] - classical.petersson_delta(2, 1, k, 1, 200)[0]) for k in HECKE_WEIGHTS)
    if gap >= 1e-6:
        return False, f"Weyl sum differs from the Kloosterman route by {gap:.3g}"
    # trend check: block maxima of |W| over low, middle and high weights strictly decrease
    blocks = [max(abs(w[k]) for k in HECKE_WEIGHTS if lo <= k <= hi)
              for lo, hi in ((12, 24), (26, 40), (42, 60))]
    if not (blocks[0] > blocks[1] > blocks[2] and abs(w[60]) < abs(w[12])):
        return False, f"Weyl sums do not decay: block maxima {blocks}"
    total = hecke.weyl_sum(60, {}, fits[60])
    ok = abs(total - 1) < 0.02
    return ok, (f"tau(2)=-24, residual {worst_res:.1e}, Weyl gap {gap:.1e}, "
                f"|W_2| block maxima {blocks[0]:.2g} > {blocks[1]:.2g} > {blocks[2]:.2g}, "
                f"sum omega at k=60 = {total:.6f}")


# one cheap invocation per subcommand; selftest is excluded since it would recurse
DETERMINISM_RUNS = (
    ["classical-coeff", "--m", "2", "--n", "3", "--k", "16"],
    ["weight-scan", "--m", "1", "--n", "2", "--k", "12:24:4"],
    ["level-scan", "--m", "1", "--n", "1", "--q", "1:6"],
    ["siegel-coeff", "--k", "20", "--B", "1", "--N", "4"],
    ["siegel-scan", "--k", "20:24:4", "--B", "1", "--N", "4"],
    ["reduce-form", "--form", "5,4,1"],
    ["aut", "--form", "1,1,1", "--format", "json"],
    ["fd-membership", "--z", "0.1,0.05,-0.2,1.2,0.3,1.5"],
    ["gottschling"],
    ["y0-search", "--N", "16", "--format", "json"],
    ["alpha-poly-check", "--samples", "20"],
    ["hecke-eigen", "--k", "24"],
    ["weights", "--k", "12:24:12"],
    ["weyl-scan", "--k", "12:24:12"],
)


def data_rows(text: str) -> str:
    """Output with the timing column removed."""
    lines = text.splitlines()
    if lines and lines[0].endswith(",seconds"):
        lines = [line.rsplit(",", 1)[0] for line in lines]
    return "\n".join(line for line in lines if '"seconds"' not in line)


@_timed(10, "determinism across thread counts", 600)
def check_determinism():
    from .cli import run
    with tempfile.TemporaryDirectory() as tmp:
        for argv in DETERMINISM_RUNS:
            outputs = []
            for threads in (1, 2, 8):
                path = os.path.join(tmp, "out")
                with contextlib.redirect_stderr(io.StringIO()):
                    code = run(argv + ["--threads", str(threads), "--output", path])
                if code != 0:
                    return False, f"{argv[0]} exited {code}"
                with open(path) as fh:
                    outputs.append(data_rows(fh.read()))
            if len(set(outputs)) != 1:
                return False, f"{argv[0]} output depends on the thread count"
    return True, f"{len(DETERMINISM_RUNS)} subcommands identical at 1, 2 and 8 threads"


CHECKS = (check_oracle_equivalence, check_weight_limit, check_level_limit, check_siegel,
          check_cosets, check_gottschling, check_lemma, check_aut, check_hecke, check_determinism)


def run_all(skip=(), log=None) -> list[Result]:
    results = []
    for check in CHECKS:
        if check.number in skip:
            continue
        res = check()
        if log is not None:
            print(res.line(), file=log, flush=True)
        results.append(res)
    return results
