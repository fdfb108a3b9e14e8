"""Seeded trial batteries for the concentration and convergence statements.

Every trial ``t`` of a battery with master seed ``s`` draws its realisation
from ``trial_seed(s, t)`` alone, so trials can run in any order on any number
of threads and the aggregated report is identical.  Pass thresholds used by
the assertions are calibration constants of this harness; they are recorded
in each report next to the quantities they judge.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from . import __version__
from .covering import empirical_theta_exponent, required_depth
from .exactscale import as_theta, ratio_stats, scale_from_vertical_product
from .formulas import assouad_spectrum
from .model import Ensemble
from .sampler import sample_array, trial_seed

# relative slack when an event boundary is hit exactly, e.g. q*log 8 vs 1.5*q*log 4
EVENT_TOL = 1e-9


@dataclass
class TrialReport:
    kind: str
    params: dict
    seeds: list[str]
    summary: dict
    per_trial: list | None = None
    assertions: list[dict] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    @property
    def trials(self) -> int:
        return len(self.seeds)

    @property
    def passed(self) -> bool:
        return all(a["passed"] for a in self.assertions)

    def check(self, name: str, passed: bool, **detail) -> None:
        self.assertions.append({"name": name, "passed": bool(passed), **detail})

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "version": __version__,
            "params": self.params,
            "trials": self.trials,
            "seeds": self.seeds,
            "summary": self.summary,
            "per_trial": self.per_trial,
            "assertions": self.assertions,
            "flags": self.flags,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(_plain(self.to_dict()), sort_keys=True, indent=1)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def run_trials(fn: Callable[[int, int], object], master_seed: int, trials: int,
               threads: int = 1) -> tuple[list[int], list]:
    """Run ``fn(trial_index, seed)`` for every trial; results come back in trial order."""
    seeds = [trial_seed(master_seed, t) for t in range(trials)]
    if threads <= 1:
        return seeds, [fn(t, s) for t, s in enumerate(seeds)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return seeds, list(pool.map(fn, range(trials), seeds))


def _log_stat(e: Ensemble, stat: str) -> np.ndarray:
    return np.log(np.array(e.stat_values(stat), dtype=float))


def _fit_slope(qs, ps) -> float | None:
    qs, ps = np.asarray(qs, float), np.asarray(ps, float)
    ok = ps > 0
    if ok.sum() < 2:
        return None
    return float(np.polyfit(qs[ok], np.log(ps[ok]), 1)[0])


def exact_tail_probability(e: Ensemble, stat: str, epsilon: float, q: int, upper: bool = True) -> float:
    """Exact P{sum of q log-stats >= (1+eps) q log(stat-bar)} (or the lower tail).

    Enumerates the multinomial counts of the distinct stat values; intended as
    an oracle for small ``q`` and few distinct values.
    """
    vals: dict[int, float] = {}
    for v, w in zip(e.stat_values(stat), e.weights):
        vals[v] = vals.get(v, 0.0) + w
    items = sorted(vals.items())
    L = math.fsum(w * math.log(v) for v, w in items)
    thr = ((1 + epsilon) if upper else (1 - epsilon)) * q * L
    slack = EVENT_TOL * max(1.0, abs(thr))
    total = 0.0

    def rec(i, left, logsum, logprob, coef):
        nonlocal total
        if i == len(items) - 1:
            v, w = items[i]
            s = logsum + left * math.log(v)
            hit = s >= thr - slack if upper else s <= thr + slack
            if hit:
                total += coef * math.exp(logprob + (left * math.log(w) if left else 0.0))
            return
        v, w = items[i]
        for k in range(left + 1):
            rec(i + 1, left - k, logsum + k * math.log(v),
                logprob + (k * math.log(w) if k else 0.0), coef * math.comb(left, k))

    rec(0, q, 0.0, 0.0, 1)
    return total


def chernoff_decay(e: Ensemble, stat: str, epsilon: float, lengths: Sequence[int], trials: int,
                   seed: int, threads: int = 1, max_prob_at_end: float | None = None) -> TrialReport:
    """Empirical upper/lower tail probabilities of sums of ``log stat`` along omega."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    lengths = sorted(int(q) for q in lengths)
    logs = _log_stat(e, stat)
    L = float(np.dot(e.weights, logs))
    qmax = lengths[-1]
    qs = np.array(lengths)
    up_thr = (1 + epsilon) * qs * L
    lo_thr = (1 - epsilon) * qs * L
    up_thr = up_thr - EVENT_TOL * np.maximum(1.0, np.abs(up_thr))
    lo_thr = lo_thr + EVENT_TOL * np.maximum(1.0, np.abs(lo_thr))
    params = {"stat": stat, "epsilon": epsilon, "lengths": lengths, "master_seed": seed}
    degenerate = len(set(e.stat_values(stat))) == 1

    def one(t, s):
        if degenerate:
            return np.zeros(len(qs), bool), np.zeros(len(qs), bool)
        sums = np.cumsum(logs[sample_array(e, s, qmax) - 1])[qs - 1]
        return sums >= up_thr, sums <= lo_thr

    seeds, results = run_trials(one, seed, trials, threads)
    up = np.sum([r[0] for r in results], axis=0) / trials
    lo = np.sum([r[1] for r in results], axis=0) / trials
    se_up = np.sqrt(up * (1 - up) / trials)
    se_lo = np.sqrt(lo * (1 - lo) / trials)
    rep = TrialReport("chernoff", params, [str(s) for s in seeds], {
        "log_stat_bar": L,
        "p_upper": up.tolist(), "p_lower": lo.tolist(),
        "se_upper": se_up.tolist(), "se_lower": se_lo.tolist(),
        "slope_upper": _fit_slope(qs, up), "slope_lower": _fit_slope(qs, lo),
    })
    if degenerate:
        rep.flags.append("deterministic stat, probability identically 0")
        rep.check("probabilities_zero", not up.any() and not lo.any())
        return rep
    for side, p in (("upper", up), ("lower", lo)):
        slope = rep.summary[f"slope_{side}"]
        rep.check(f"slope_{side}_negative", slope is not None and slope < 0, slope=slope)
        rep.check(f"{side}_non_increasing_trend", bool(np.all(np.diff(p) <= 0)) or
                  (stats.kendalltau(qs, p).statistic < 0))
    if max_prob_at_end is not None:
        rep.check("upper_tail_small_at_max_length", up[-1] < max_prob_at_end,
                  value=float(up[-1]), threshold=max_prob_at_end)
    return rep


def product_window(e: Ensemble, epsilon: float, q_max: int, trials: int, seed: int,
                   stat: str = "n", grid: Sequence[int] | None = None, clean_after: int | None = None,
                   clean_fraction: float = 0.99, threads: int = 1) -> TrialReport:
    """Last level where ``sum log stat`` leaves ``[(1-eps) q L, (1+eps) q L]``.

    ``L = log(stat-bar)``; a trial's last violation is 0 when it never leaves
    the window on ``1..q_max``.
    """
    logs = _log_stat(e, stat)
    L = float(np.dot(e.weights, logs))
    qs = np.arange(1, q_max + 1)
    lo_thr = (1 - epsilon) * qs * L
    hi_thr = (1 + epsilon) * qs * L
    slack = EVENT_TOL * np.maximum(1.0, hi_thr)

    def one(t, s):
        sums = np.cumsum(logs[sample_array(e, s, q_max) - 1])
        bad = (sums < lo_thr - slack) | (sums > hi_thr + slack)
        idx = np.flatnonzero(bad)
        return int(idx[-1] + 1) if idx.size else 0

    seeds, last = run_trials(one, seed, trials, threads)
    last = np.array(last)
    if grid is None:
        grid = list(range(max(1, q_max // 50), q_max + 1, max(1, q_max // 50)))
    grid = [int(g) for g in grid]
    frac = [float(np.mean(last >= g)) for g in grid]
    params = {"stat": stat, "epsilon": epsilon, "q_max": q_max, "master_seed": seed, "grid": grid}
    rep = TrialReport("window", params, [str(s) for s in seeds], {
        "log_stat_bar": L,
        "violation_fraction_at_or_beyond": frac,
        "trials_with_any_violation": int(np.sum(last > 0)),
    }, per_trial=last.tolist())
    if not np.any(last):
        rep.flags.append("no violations observed")
        rep.check("violation_fraction_non_increasing", True)
    else:
        tau = stats.kendalltau(grid, frac)
        rep.summary["kendall_tau"] = float(tau.statistic)
        rep.summary["kendall_p"] = float(tau.pvalue)
        rep.check("violation_fraction_decreasing", tau.statistic < 0 and tau.pvalue < 0.01,
                  tau=float(tau.statistic), p=float(tau.pvalue), level=0.01)
    if clean_after is not None:
        ok = float(np.mean(last <= clean_after))
        rep.summary["clean_after_fraction"] = ok
        rep.check("clean_after", ok >= clean_fraction, q=clean_after, fraction=ok,
                  threshold=clean_fraction)
    return rep


def ratio_convergence(e: Ensemble, theta, delta: float, q_values: Sequence[int], trials: int,
                      seed: int, threads: int = 1, mean_tol: float | None = None) -> TrialReport:
    """Stopping-time ratios at ``R_q`` against their almost-sure limits."""
    theta = as_theta(theta)
    a = e.averages
    th = float(theta)
    limits = {
        "k1R/k2Rt": th * a.logn / a.logm,
        "k1R/k2R": a.logn / a.logm,
        "k1R/k1Rt": th,
        "k2R/k2Rt": th,
    }
    q_values = sorted(int(q) for q in q_values)
    n_max = e.n_max
    m_min = min(p.m for p in e.patterns)
    depth = math.ceil(q_values[-1] * math.log(n_max) / (th * math.log(m_min))) + 2

    def one(t, s):
        w = sample_array(e, s, depth).tolist()
        rows = []
        for q in q_values:
            R = scale_from_vertical_product(w, e, q)
            r = ratio_stats(w, e, R, theta)
            dev = {k: r.ratios[k] - limits[k] for k in limits}
            inside = all(abs(r.ratios[k] - limits[k]) <= delta * limits[k] for k in limits)
            rows.append({"q": q, **r.to_dict(), "deviation": dev, "in_window": inside})
        return rows

    seeds, results = run_trials(one, seed, trials, threads)
    per_q = []
    for j, q in enumerate(q_values):
        rows = [res[j] for res in results]
        per_q.append({
            "q": q,
            "pass_fraction": float(np.mean([r["in_window"] for r in rows])),
            "mean_abs_deviation": {k: float(np.mean([abs(r["deviation"][k]) for r in rows]))
                                   for k in limits},
        })
    params = {"theta": str(theta), "delta": delta, "q_values": q_values, "master_seed": seed}
    rep = TrialReport("ratios", params, [str(s) for s in seeds],
                      {"limits": limits, "per_q": per_q}, per_trial=results)
    fr = [p["pass_fraction"] for p in per_q]
    if len(fr) > 1:
        rep.check("pass_fraction_increasing", fr[-1] >= fr[0] and fr[-1] > 0,
                  first=fr[0], last=fr[-1])
    if mean_tol is not None:
        dev = per_q[-1]["mean_abs_deviation"]["k1R/k2Rt"]
        rep.check("k1R/k2Rt_mean_abs_deviation", dev < mean_tol, value=dev, threshold=mean_tol)
    return rep


def spectrum_estimate(e: Ensemble, theta, q: int, trials: int, seed: int, mode: str = "formula",
                      mean_tol: float = 0.05, trial_tol: float = 0.1, trial_fraction: float = 0.95,
                      threads: int = 1, budget: int = 10 ** 7) -> TrialReport:
    """Witness covering exponent at ``R_q`` per trial, against the closed-form spectrum."""
    theta = as_theta(theta)
    target = assouad_spectrum(e, float(theta))

    def one(t, s):
        w = sample_array(e, s, q).tolist()
        R = scale_from_vertical_product(w, e, q)
        w = sample_array(e, s, required_depth(e, R, theta)).tolist()
        return empirical_theta_exponent(w, e, R, theta, mode=mode, budget=budget)

    seeds, vals = run_trials(one, seed, trials, threads)
    vals = np.array(vals)
    dev = np.abs(vals - target)
    params = {"theta": str(theta), "q": q, "mode": mode, "master_seed": seed}
    rep = TrialReport("spectrum", params, [str(s) for s in seeds], {
        "target": target,
        "mean": float(vals.mean()),
        "std": float(vals.std()),
        "max_abs_deviation": float(dev.max()),
        "fraction_within_trial_tol": float(np.mean(dev <= trial_tol)),
    }, per_trial=vals.tolist())
    rep.check("mean_within_tol", abs(vals.mean() - target) <= mean_tol,
              value=float(abs(vals.mean() - target)), threshold=mean_tol)
    rep.check("trials_within_tol", np.mean(dev <= trial_tol) >= trial_fraction,
              tolerance=trial_tol, fraction=float(np.mean(dev <= trial_tol)), threshold=trial_fraction)
    return rep
