"""Seeded randomized campaigns and the JSON report they produce.

Every trial draws its inputs from ``trial_rng(seed, trial)`` only, so a
report is reproducible for any worker count. Reports are plain dicts under
the ``tensorword-report/1`` schema; ``timestamp`` and ``wall_time`` are the
only fields that vary between identical runs.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .config import ENUM_CAP, Tolerances, resolve_max_dim
from .errors import TensorWordError
from .gmf import MatrixFunctional, parse_functional, superadditivity_gap2, superadditivity_gap3
from .induced import bridging_identity_check
from .inexcl import (_accumulate, check_theorem1_bounds, draw_psd_family, surjective_bounds,
                     theorem2_trial, trial_rng)
from .matcore import _eigh, random_complex
from .symgroup import parse_character, parse_group

SCHEMA = "tensorword-report/1"
TIMING_FIELDS = ("timestamp", "wall_time")

VERDICT_PASS = "pass"
VERDICT_FAIL = "fail"
VERDICT_NUMERICAL = "numerical-failure"


def parse_range(text: str) -> list:
    """``"3"`` -> [3]; ``"3..5"`` -> [3, 4, 5] (inclusive); comma lists allowed."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        lo, sep, hi = part.partition("..")
        try:
            if sep:
                a, b = int(lo), int(hi)
                if a > b:
                    raise ValueError
                out.extend(range(a, b + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise ValueError(f"bad range {text!r}; use N or A..B") from None
    if not out:
        raise ValueError(f"empty range {text!r}")
    return out


@dataclass
class CampaignConfig:
    n: list = field(default_factory=lambda: [2])
    k: list = field(default_factory=lambda: [3])
    m: list = field(default_factory=lambda: [3])
    trials: int = 25
    seed: int = 0
    tol: Tolerances = field(default_factory=Tolerances)
    max_dim: int | None = None
    enum_cap: int = ENUM_CAP
    workers: int = 1
    out: str | None = None

    def __post_init__(self):
        self.max_dim = resolve_max_dim(self.max_dim)
        for name in ("n", "k", "m"):
            if not getattr(self, name):
                raise ValueError(f"range {name} is empty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("workers")  # reports must not depend on it
        return d


def _map(fn, args, workers):
    if workers <= 1 or len(args) <= 1:
        return [fn(*a) for a in args]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_star, [(fn, a) for a in args]))


def _star(job):
    fn, a = job
    return fn(*a)


def _min(values):
    values = [v for v in values if v is not None]
    return min(values) if values else None


def _max(values):
    values = [v for v in values if v is not None]
    return max(values) if values else None


def _cell(params, trials, t0, **extra):
    passed = sum(1 for t in trials if t["passed"])
    errors = sum(1 for t in trials if t.get("error"))
    failed = len(trials) - passed - errors
    status = VERDICT_PASS if failed == 0 and errors == 0 else (VERDICT_FAIL if failed else VERDICT_NUMERICAL)
    cell = {"params": params, "status": status, "trials": len(trials), "passed": passed,
            "failed": failed, "errors": errors}
    cell.update(extra)
    cell["wall_time"] = round(time.perf_counter() - t0, 6)
    return cell


def _skipped(params, notice):
    return {"params": params, "status": "skipped", "notice": notice}


def build_report(command: str, config: dict, cells: list) -> dict:
    active = [c for c in cells if c["status"] != "skipped"]
    if any(c["status"] == VERDICT_FAIL for c in active):
        verdict = VERDICT_FAIL
    elif any(c["status"] == VERDICT_NUMERICAL for c in active):
        verdict = VERDICT_NUMERICAL
    else:
        verdict = VERDICT_PASS
    return {
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": command,
        "config": config,
        "cells": cells,
        "summary": {
            "cells": len(cells),
            "skipped": len(cells) - len(active),
            "passed": sum(1 for c in active if c["status"] == VERDICT_PASS),
            "trials": sum(c["trials"] for c in active),
            "trials_passed": sum(c["passed"] for c in active),
        },
        "verdict": verdict,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def strip_timing(obj):
    """Copy of a report without timestamp/wall-time fields."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_FIELDS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


# -- inclusion-exclusion ------------------------------------------------

def run_thm2(cfg: CampaignConfig) -> dict:
    cells = []
    for n in cfg.n:
        for k in cfg.k:
            for m in cfg.m:
                params = {"n": n, "k": k, "m": m}
                if n**m > cfg.max_dim:
                    cells.append(_skipped(params, f"n^m = {n**m} > max_dim = {cfg.max_dim}"))
                    continue
                t0 = time.perf_counter()
                args = [(n, k, m, cfg.seed, i, cfg.tol, cfg.max_dim, cfg.enum_cap) for i in range(cfg.trials)]
                reports = [r.to_dict() for r in _map(theorem2_trial, args, cfg.workers)]
                rel = [r["lambda_min"] / r["scale"] for r in reports if r["lambda_min"] is not None]
                cells.append(_cell(
                    params, reports, t0,
                    worst_lambda_min=_min(r["lambda_min"] for r in reports),
                    worst_lambda_min_rel=_min(rel),
                    worst_residual=_max(r["oracle_residual"] for r in reports),
                    worst_zero_entry_rel=_max(r["max_entry"] / r["scale"] for r in reports
                                              if m < k and r["max_entry"] is not None),
                    oracle_skipped=sum(r["oracle_skipped"] for r in reports),
                ))
    return build_report("verify thm2", cfg.echo(), cells)


def thm1_bounds_trial(n, m, seed, trial, psd_tol, max_dim, general_k=None):
    out = {"trial": trial, "passed": False, "error": None}
    try:
        rng = trial_rng(seed, trial)
        a1, a2, a3 = draw_psd_family(rng, 3, n)
        check = check_theorem1_bounds(a1, a2, a3, m, psd_tol, max_dim)
        out.update(asdict(check))
        out["passed"] = check.ok
        if general_k:
            mats = draw_psd_family(rng, general_k, n)
            lower, upper, count = surjective_bounds(mats, m)
            L, scale = _accumulate(mats, m, max_dim)
            w = _eigh(L, vectors=False)
            out["experimental"] = {"k": general_k, "lower": lower, "upper": upper, "count": count,
                                   "lambda_min": float(w[0]), "lambda_max": float(w[-1]),
                                   "inside": bool(w[0] >= lower - psd_tol * scale
                                                  and w[-1] <= upper + psd_tol * scale)}
    except TensorWordError as exc:
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


def run_thm1_bounds(cfg: CampaignConfig, general_k: int | None = None) -> dict:
    cells = []
    for n in cfg.n:
        for m in cfg.m:
            params = {"n": n, "m": m}
            if n**m > cfg.max_dim:
                cells.append(_skipped(params, f"n^m = {n**m} > max_dim = {cfg.max_dim}"))
                continue
            t0 = time.perf_counter()
            args = [(n, m, cfg.seed, i, cfg.tol.psd, cfg.max_dim, general_k) for i in range(cfg.trials)]
            trials = _map(thm1_bounds_trial, args, cfg.workers)
            ok = [t for t in trials if not t["error"]]
            extra = {
                "marginal": sum(1 for t in ok if t["status"] == "marginal"),
                "worst_lower_excess": _max(t["lower"] - t["lambda_min"] for t in ok),
                "worst_upper_excess": _max(t["lambda_max"] - t["upper"] for t in ok),
            }
            if general_k:
                extra["experimental_outside"] = sum(1 for t in ok if not t["experimental"]["inside"])
            cells.append(_cell(params, trials, t0, **extra))
    config = cfg.echo()
    config["general_k"] = general_k
    return build_report("verify thm1-bounds", config, cells)


# -- matrix functionals ---------------------------------------------------

def gap3_trial(spec, allow_reducible, m, seed, trial, psd_tol, imag_tol):
    f = parse_functional(spec, allow_reducible)
    out = {"trial": trial, "passed": False, "error": None}
    try:
        mats = draw_psd_family(trial_rng(seed, trial), 3, m)
        gap = superadditivity_gap3(f, *mats, psd_tol=psd_tol)
        out.update(gap=gap.value, imag=gap.imag, scale=gap.scale)
        out["passed"] = gap.ok(psd_tol, imag_tol) if f.irreducible else abs(gap.imag) <= imag_tol * gap.scale
    except TensorWordError as exc:
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


def run_thm3(cfg: CampaignConfig, funcs: list, allow_reducible: bool = False,
             imag_tol: float = 1e-9) -> dict:
    """Gap campaigns for each functional; gmf functionals fix their own m.

    Reducible characters (only with ``allow_reducible``) are run as
    experiments: their gap sign is recorded but not asserted.
    """
    cells = []
    for spec in funcs:
        f: MatrixFunctional = parse_functional(spec, allow_reducible)
        ms = [f.arity] if f.arity is not None else cfg.m
        for m in ms:
            params = {"func": str(f), "spec": spec, "m": m}
            t0 = time.perf_counter()
            args = [(spec, allow_reducible, m, cfg.seed, i, cfg.tol.psd, imag_tol) for i in range(cfg.trials)]
            trials = _map(gap3_trial, args, cfg.workers)
            ok = [t for t in trials if not t["error"]]
            cells.append(_cell(params, trials, t0,
                               experimental=not f.irreducible,
                               worst_gap_rel=_min(t["gap"] / t["scale"] for t in ok),
                               worst_imag_rel=_max(abs(t["imag"]) / t["scale"] for t in ok)))
    config = cfg.echo()
    config.update(funcs=list(funcs), allow_reducible=allow_reducible, imag_tol=imag_tol)
    return build_report("verify thm3", config, cells)


def corollary_trial(kind, m, seed, trial, psd_tol):
    f = MatrixFunctional(kind)
    out = {"trial": trial, "passed": False, "error": None}
    try:
        a, b = draw_psd_family(trial_rng(seed, trial), 2, m)
        gap = superadditivity_gap2(f, a, b, psd_tol=psd_tol)
        out.update(gap=gap.value, imag=gap.imag, scale=gap.scale)
        out["passed"] = gap.ok(psd_tol)
    except TensorWordError as exc:
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


def identity_gap3(kind: str, m: int) -> dict:
    """gap3 at A1 = A2 = A3 = I_m; exact value 3^m + 3 - 3 * 2^m."""
    eye = np.eye(m)
    gap = superadditivity_gap3(MatrixFunctional(kind), eye, eye, eye)
    expected = 3**m + 3 - 3 * 2**m
    return {"gap": gap.value, "expected": expected, "passed": abs(gap.value - expected) <= 1e-9 * gap.scale}


def run_corollaries(cfg: CampaignConfig) -> dict:
    cells = []
    for kind in ("det", "per"):
        for m in cfg.m:
            params = {"func": kind, "m": m}
            t0 = time.perf_counter()
            ident = identity_gap3(kind, m)
            args = [(kind, m, cfg.seed, i, cfg.tol.psd) for i in range(cfg.trials)]
            trials = _map(corollary_trial, args, cfg.workers)
            ok = [t for t in trials if not t["error"]]
            cell = _cell(params, trials, t0, identity_gap3=ident,
                         worst_gap2_rel=_min(t["gap"] / t["scale"] for t in ok))
            if not ident["passed"]:
                cell["status"] = VERDICT_FAIL
            cells.append(cell)
    return build_report("verify corollaries", cfg.echo(), cells)


DEFAULT_BRIDGING_CASES = (
    ("sym:2", "sign"), ("sym:3", "sign"), ("sym:2", "trivial"), ("sym:3", "trivial"),
    ("cyclic:3", "omega:0"), ("cyclic:3", "omega:1"), ("cyclic:3", "omega:2"),
)


def bridging_trial(group_spec, char_spec, seed, trial, tol, max_dim):
    out = {"trial": trial, "passed": False, "error": None}
    try:
        group = parse_group(group_spec)
        chi = parse_character(group, char_spec)
        mat = random_complex((group.degree, group.degree), trial_rng(seed, trial))
        rep = bridging_identity_check(mat, group, chi, max_dim)
        out.update(lhs=[rep.lhs.real, rep.lhs.imag], rhs=[rep.rhs.real, rep.rhs.imag],
                   residual=rep.residual, class_dim=rep.class_dim, degenerate=rep.degenerate)
        out["passed"] = rep.ok(tol)
    except TensorWordError as exc:
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


def run_bridging(cfg: CampaignConfig, cases=DEFAULT_BRIDGING_CASES, tol: float = 1e-8) -> dict:
    cells = []
    for group_spec, char_spec in cases:
        params = {"group": group_spec, "char": char_spec}
        t0 = time.perf_counter()
        args = [(group_spec, char_spec, cfg.seed, i, tol, cfg.max_dim) for i in range(cfg.trials)]
        trials = _map(bridging_trial, args, cfg.workers)
        ok = [t for t in trials if not t["error"]]
        cells.append(_cell(params, trials, t0, worst_residual=_max(t["residual"] for t in ok)))
    config = cfg.echo()
    config.update(cases=[list(c) for c in cases], bridging_tol=tol)
    return build_report("verify bridging", config, cells)
