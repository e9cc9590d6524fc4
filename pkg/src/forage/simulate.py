"""Event-driven Monte Carlo for allocation policies.

Each path draws the two project qualities and one unit-exponential hazard
budget per project.  News on a project arrives once its accumulated intensity
(attention times the quality-dependent rate) exhausts the budget, which is
exact for piecewise-constant attention.  Payoffs are integrated in closed form
on every constant-allocation stretch.

Path ``i`` takes its randomness from counter ``i`` of a Philox stream keyed by
the master seed, so results do not depend on chunking or execution order.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .model import (
    HIGH, LOW, BeliefState, Scenario, drift_posterior, jump_posterior,
)

DRAWS_PER_PATH = 4


@dataclass(frozen=True)
class WorldDraw:
    low_good: bool
    high_good: bool


@dataclass
class Trajectory:
    events: list = field(default_factory=list)      # (time, project, good)
    segments: list = field(default_factory=list)    # (start, end, Allocation, BeliefState)
    payoff: float = 0.0
    final_allocation: object = None
    final_belief: BeliefState = None


@dataclass(frozen=True)
class MonteCarloReport:
    mean: float
    std_error: float
    n_paths: int
    horizon: float
    tail_bound: float


def path_draws(master_seed: int, start: int, count: int) -> np.ndarray:
    """Uniform draws for paths ``start .. start + count - 1``, one row per path."""
    bits = np.random.Philox(key=int(master_seed), counter=[int(start), 0, 0, 0])
    return np.random.Generator(bits).random((count, DRAWS_PER_PATH))


def world_from_draws(scenario: Scenario, row) -> tuple:
    world = WorldDraw(bool(scenario.low.is_safe or row[0] < scenario.low.prior_good),
                      bool(row[1] < scenario.high.prior_good))
    budgets = (-math.log1p(-row[2]), -math.log1p(-row[3]))
    return world, budgets


def default_horizon(scenario: Scenario) -> float:
    return 30.0 / scenario.discount


def run_path(policy, world: WorldDraw, scenario: Scenario, stream, horizon: float,
             record: bool = True) -> Trajectory:
    """Simulate one path.

    ``stream`` is either a pair of hazard budgets (L, H) or a numpy Generator
    from which they are drawn.
    """
    if not horizon > 0.0:
        raise ValueError("horizon must be positive")
    if isinstance(stream, np.random.Generator):
        budget = list(stream.exponential(size=2))
    else:
        budget = list(stream)
    r = scenario.discount
    lo, hi = scenario.low, scenario.high
    rate_low = lo.rate_good if world.low_good else lo.rate_bad
    rate_high = hi.rate_good if world.high_good else hi.rate_bad
    flow_low = lo.reward if world.low_good else 0.0
    flow_high = hi.reward if world.high_good else 0.0

    traj = Trajectory()
    anchor = BeliefState.from_scenario(scenario)
    t0 = 0.0
    used = [0.0, 0.0]
    payoff = 0.0
    alloc = None
    while t0 < horizon:
        plan = policy.plan(anchor)
        unknown_low, unknown_high = anchor.unknown(LOW), anchor.unknown(HIGH)
        att = [0.0, 0.0]
        news = None
        for seg in plan.segments:
            a = t0 + seg.start
            if a >= horizon:
                break
            b = min(t0 + seg.end, horizon)
            alloc = seg.allocation
            i_low = alloc.explore_low * rate_low if unknown_low else 0.0
            i_high = alloc.explore_high * rate_high if unknown_high else 0.0
            wait_low = (budget[0] - used[0]) / i_low if i_low > 0.0 else math.inf
            wait_high = (budget[1] - used[1]) / i_high if i_high > 0.0 else math.inf
            wait = min(wait_low, wait_high)
            end = b if a + wait >= b else a + wait
            dt = end - a
            payoff += (alloc.exploit_low * flow_low + alloc.exploit_high * flow_high) * (
                math.exp(-r * a) - math.exp(-r * end))
            used[0] += i_low * dt
            used[1] += i_high * dt
            att[0] += alloc.explore_low * dt
            att[1] += alloc.explore_high * dt
            if record:
                traj.segments.append((a, end, alloc, anchor))
            if end < b or (a + wait == b and b < horizon):
                news = (end, LOW if wait_low <= wait_high else HIGH)
                break
        p_low = anchor.p_low
        p_high = anchor.p_high
        if unknown_low:
            p_low = drift_posterior(p_low, lo.rate_good, lo.rate_bad, 1.0, att[0])
        if unknown_high:
            p_high = drift_posterior(p_high, hi.rate_good, hi.rate_bad, 1.0, att[1])
        drifted = BeliefState(p_low, p_high, anchor.resolved_low, anchor.resolved_high)
        if news is None:
            anchor = drifted
            break
        t_news, which = news
        good = world.low_good if which == LOW else world.high_good
        anchor = jump_posterior(drifted, which, good)
        if record:
            traj.events.append((t_news, which, good))
        t0 = t_news
    traj.payoff = payoff
    traj.final_allocation = alloc
    traj.final_belief = anchor
    return traj


def _chunk(policy, scenario, master_seed, start, count, horizon, mode):
    draws = path_draws(master_seed, start, count)
    out = np.empty(count)
    for k in range(count):
        world, budgets = world_from_draws(scenario, draws[k])
        traj = run_path(policy, world, scenario, budgets, horizon, record=False)
        if mode == "payoff":
            out[k] = traj.payoff
        elif mode == "belief_high":
            out[k] = traj.final_belief.p_high
        elif mode == "belief_low":
            out[k] = traj.final_belief.p_low
        else:
            out[k] = _exploits_best(traj.final_allocation, world)
    return out


def _exploits_best(alloc, world: WorldDraw) -> float:
    if world.high_good:
        best = HIGH
    elif world.low_good:
        best = LOW
    else:
        return 1.0
    return 1.0 if alloc.exploited == best else 0.0


def thread_count() -> int:
    cap = os.environ.get("FORAGE_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


_SHARED = {}


def _worker(args):
    start, count = args
    s = _SHARED
    return start, _chunk(s["policy"], s["scenario"], s["seed"], start, count, s["horizon"], s["mode"])


def per_path_values(policy, scenario, n_paths, horizon, master_seed, mode="payoff",
                    threads=None) -> np.ndarray:
    """Per-path results in path order."""
    threads = thread_count() if threads is None else threads
    if threads <= 1 or n_paths < 2000:
        return _chunk(policy, scenario, master_seed, 0, n_paths, horizon, mode)
    import multiprocessing as mp

    size = -(-n_paths // (threads * 4))
    jobs = [(s, min(size, n_paths - s)) for s in range(0, n_paths, size)]
    _SHARED.update(policy=policy, scenario=scenario, seed=master_seed, horizon=horizon, mode=mode)
    out = np.empty(n_paths)
    with ProcessPoolExecutor(threads, mp_context=mp.get_context("fork")) as pool:
        for start, vals in pool.map(_worker, jobs):
            out[start:start + len(vals)] = vals
    return out


def monte_carlo(policy, scenario: Scenario, n_paths: int, horizon: float = None,
                master_seed: int = 0, threads: int = None) -> MonteCarloReport:
    if n_paths < 1:
        raise ValueError("n_paths must be at least 1")
    horizon = default_horizon(scenario) if horizon is None else horizon
    vals = per_path_values(policy, scenario, n_paths, horizon, master_seed, "payoff", threads)
    mean = float(np.sum(vals) / n_paths)
    se = float(np.std(vals, ddof=1) / math.sqrt(n_paths)) if n_paths > 1 else math.inf
    tail = math.exp(-scenario.discount * horizon) * scenario.high.reward
    return MonteCarloReport(mean, se, n_paths, horizon, tail)


def asymptotic_exploitation_rate(policy, scenario: Scenario, t_check: float, n_paths: int,
                                 master_seed: int = 0, threads: int = None) -> float:
    """Share of paths exploiting the realized best project at ``t_check``."""
    vals = per_path_values(policy, scenario, n_paths, t_check, master_seed, "best", threads)
    return float(np.sum(vals) / n_paths)


def no_news_timeline(policy, scenario: Scenario, horizon: float, n_points: int = 201):
    """Rows (t, p_L, p_H, explored, exploited) along the path without news."""
    anchor = BeliefState.from_scenario(scenario)
    plan = policy.plan(anchor)
    lo, hi = scenario.low, scenario.high
    times = np.linspace(0.0, horizon, n_points)
    rows = []
    for t in times:
        att_low = att_high = 0.0
        for seg in plan.segments:
            if seg.start >= t:
                break
            d = min(seg.end, t) - seg.start
            att_low += seg.allocation.explore_low * d
            att_high += seg.allocation.explore_high * d
        p_low = anchor.p_low if not anchor.unknown(LOW) else drift_posterior(
            anchor.p_low, lo.rate_good, lo.rate_bad, 1.0, att_low)
        p_high = drift_posterior(anchor.p_high, hi.rate_good, hi.rate_bad, 1.0, att_high)
        alloc = plan.at(float(t))
        rows.append((float(t), p_low, p_high, alloc.explored, alloc.exploited))
    return rows


__all__ = [
    "WorldDraw", "Trajectory", "MonteCarloReport", "run_path", "monte_carlo",
    "asymptotic_exploitation_rate", "path_draws", "world_from_draws", "per_path_values",
    "no_news_timeline", "default_horizon", "thread_count",
]
