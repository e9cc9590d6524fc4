"""Optimal allocation policies and the classical fully entangled baseline.

A policy maps the belief at the last news event (the *anchor*) and the time
elapsed since then without news (the *clock*) to an Allocation.  Because
beliefs move deterministically between news events, each anchor induces a
piecewise-constant plan, which is what the simulator consumes.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

from scipy.optimize import brentq

from . import closedform as cf
from .model import (
    HIGH, LOW, Allocation, BeliefState, ModelError, NewsRegime, Resolution, Scenario,
    classify_regime, drift_posterior, drift_time, other, pure,
)

INF = math.inf


@dataclass(frozen=True)
class Segment:
    start: float
    end: float
    allocation: Allocation


class Plan:
    """Piecewise-constant allocation over the no-news clock, from 0 to infinity."""

    def __init__(self, segments):
        merged = []
        for seg in segments:
            if seg.end <= seg.start:
                continue
            if merged and merged[-1].allocation == seg.allocation:
                merged[-1] = Segment(merged[-1].start, seg.end, seg.allocation)
            else:
                merged.append(seg)
        self.segments = merged
        self.starts = [s.start for s in merged]

    def at(self, clock: float) -> Allocation:
        i = max(bisect_right(self.starts, clock) - 1, 0)
        return self.segments[i].allocation

    def switch_times(self, attr: str) -> list:
        """Clocks at which ``explored`` or ``exploited`` changes."""
        out = []
        for a, b in zip(self.segments, self.segments[1:]):
            if getattr(a.allocation, attr) != getattr(b.allocation, attr):
                out.append(b.start)
        return out


@dataclass
class Policy:
    name: str
    scenario: Scenario
    planner: object
    notes: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def plan(self, anchor: BeliefState) -> Plan:
        key = anchor.key()
        hit = self._cache.get(key)
        if hit is None:
            hit = Plan(self.planner(anchor))
            if len(self._cache) > 4096:
                self._cache.clear()
            self._cache[key] = hit
        return hit

    def decide(self, state: BeliefState, clock: float) -> Allocation:
        """Allocation after ``clock`` without news since the belief ``state``."""
        return self.plan(state).at(clock)

    @property
    def descriptor(self) -> dict:
        start = BeliefState.from_scenario(self.scenario)
        plan = self.plan(start)
        explore_switches = plan.switch_times("explored")
        desc = {
            "policy": self.name,
            "initial_explored": plan.segments[0].allocation.explored,
            "initial_exploited": plan.segments[0].allocation.exploited,
            "switch_time": explore_switches[0] if explore_switches else INF,
            "exploit_switch_times": plan.switch_times("exploited"),
        }
        desc.update(self.notes)
        return desc


# -- shared planning helpers ---------------------------------------------------------

def _exploit_choice(v_low, v_high, current, trend_x, x):
    """Myopic exploitation, with ties kept on ``current`` unless drift breaks them.

    Values within a relative 1e-12 count as tied, so a belief placed exactly
    on a crossing is not pushed back across it by rounding.
    """
    if abs(v_low - v_high) > 1e-12 * max(abs(v_low), abs(v_high)):
        return LOW if v_low > v_high else HIGH
    if trend_x > 0:
        return x
    if trend_x < 0:
        return other(x)
    return current


def myopic_segments(scenario: Scenario, anchor: BeliefState, phases) -> list:
    """Segments for an exploration schedule with myopic exploitation.

    ``phases`` is a list of (duration, explored project); the last duration
    should be infinite.
    """
    p = {LOW: anchor.p_low, HIGH: anchor.p_high}
    spec = {LOW: scenario.low, HIGH: scenario.high}
    current = HIGH
    segments = []
    t = 0.0
    for duration, x in phases:
        end = t + duration
        xs, y = spec[x], other(x)
        moving = anchor.unknown(x) and xs.rate_good != xs.rate_bad and 0.0 < p[x] < 1.0
        trend = 0 if not moving else (1 if xs.rate_bad > xs.rate_good else -1)
        v_y = p[y] * spec[y].reward
        start = t
        for _ in range(64):
            vals = {x: p[x] * xs.reward, y: v_y}
            exploit = _exploit_choice(vals[LOW], vals[HIGH], current, trend, x)
            cross, target = INF, None
            # the explored project's value drifts towards the other's
            if moving and ((exploit == x and trend < 0) or (exploit == y and trend > 0)):
                target = v_y / xs.reward
                if 0.0 < target < 1.0:
                    cross = drift_time(p[x], target, xs.rate_good, xs.rate_bad)
            stop = min(end, start + cross)
            segments.append(Segment(start, stop, pure(x, exploit)))
            current = exploit
            if stop >= end:
                if moving and math.isfinite(end):
                    p[x] = drift_posterior(p[x], xs.rate_good, xs.rate_bad, 1.0, end - start)
                break
            p[x] = target
            start = stop
        else:
            raise ModelError("exploitation crossings did not terminate")
        t = end
        if not math.isfinite(t):
            break
    return segments


def _safe_plan(scenario: Scenario, anchor: BeliefState, alpha: float) -> list:
    """Cutoff policy when L is known good and H is uncertain."""
    hi = scenario.high
    R_L, R_H = scenario.low.reward, hi.reward
    exploit_h = Allocation(0.0, 1.0, 0.0, 1.0)
    exploit_l = Allocation(alpha, 1.0 - alpha, 1.0, 0.0)
    res = anchor.resolved_high
    if res is Resolution.KNOWN_GOOD:
        return [Segment(0.0, INF, exploit_h)]
    if res is Resolution.KNOWN_BAD:
        return [Segment(0.0, INF, Allocation(1.0, 0.0, 1.0, 0.0))]
    p = anchor.p_high
    c = cf.cutoff_pbar(alpha, scenario.discount, hi.max_rate, R_L, R_H)
    if hi.rate_good > hi.rate_bad:
        if p >= c:
            T = drift_time(p, c, hi.rate_good, hi.rate_bad, 1.0)
            return [Segment(0.0, T, exploit_h), Segment(T, INF, exploit_l)]
        return [Segment(0.0, INF, exploit_l)]
    if hi.rate_good < hi.rate_bad:
        if p >= c:
            return [Segment(0.0, INF, exploit_h)]
        T = drift_time(p, c, hi.rate_good, hi.rate_bad, 1.0 - alpha) if alpha < 1.0 else INF
        return [Segment(0.0, T, exploit_l), Segment(T, INF, exploit_h)]
    return [Segment(0.0, INF, exploit_h if p >= c else exploit_l)]


def _post_news_plan(scenario: Scenario, anchor: BeliefState, alpha: float = 0.0) -> list:
    """Plans once at least one project is resolved."""
    rl, rh = anchor.resolved_low, anchor.resolved_high
    if rl is Resolution.KNOWN_GOOD:
        return _safe_plan(scenario, anchor, alpha)
    if rh is Resolution.KNOWN_GOOD:
        explore = LOW if rl is Resolution.UNKNOWN else HIGH
        return [Segment(0.0, INF, pure(explore, HIGH))]
    if rh is Resolution.KNOWN_BAD:
        return [Segment(0.0, INF, pure(LOW, LOW))]
    # L known bad, H unknown
    return [Segment(0.0, INF, pure(HIGH, HIGH))]


def _both_unknown(anchor: BeliefState) -> bool:
    return anchor.unknown(LOW) and anchor.unknown(HIGH)


def _favorable_pair(scenario: Scenario, anchor: BeliefState):
    v_low = anchor.p_low * scenario.low.reward
    v_high = anchor.p_high * scenario.high.reward
    x = LOW if v_low > v_high else HIGH
    return x, other(x)


class _OracleCache:
    """Lazily solved two-risky oracle for choices the closed forms leave open."""

    def __init__(self, scenario: Scenario, grid_n: int):
        self.scenario = scenario
        self.grid_n = grid_n
        self._paths = {}

    def path(self, anchor: BeliefState):
        key = (anchor.p_low, anchor.p_high)
        if key not in self._paths:
            from .dp_oracle import oracle_no_news_path, value_iteration_two_risky

            sc = self.scenario.with_priors(anchor.p_low, anchor.p_high)
            grid = value_iteration_two_risky(sc, grid_n=self.grid_n)
            self._paths[key] = oracle_no_news_path(grid)
        return self._paths[key]


# -- policy constructors ----------------------------------------------------------------

def safe_project_policy(scenario: Scenario) -> Policy:
    """Cutoff policy with a safe L: exploit H iff its posterior is at least the cutoff."""
    if not scenario.safe_low:
        raise ModelError("safe_project_policy requires a safe project L")
    alpha = scenario.alpha
    lam = scenario.high.max_rate
    notes = {"cutoff": cf.cutoff_pbar(alpha, scenario.discount, lam,
                                      scenario.low.reward, scenario.high.reward)}
    return Policy("safe", scenario, lambda a: _safe_plan(scenario, a, alpha), notes)


def balanced_policy(scenario: Scenario) -> Policy:
    if classify_regime(scenario) is not NewsRegime.BALANCED:
        raise ModelError("balanced_policy requires balanced news")
    _require_disentangled(scenario)

    def planner(anchor):
        if not _both_unknown(anchor):
            return _post_news_plan(scenario, anchor)
        rep = cf.balanced_index(scenario, anchor)
        first = LOW if rep.explored_first == LOW else HIGH
        return myopic_segments(scenario, anchor, [(INF, first)])

    return Policy("balanced", scenario, planner)


def _require_disentangled(scenario):
    if scenario.alpha != 0.0:
        raise ModelError("two-risky optimal policies assume alpha = 0")


def good_news_plan_parameters(scenario: Scenario, anchor: BeliefState, oracle=None):
    """Initial explored project and exploration switch clock under good news.

    Returns (initial, T, source) where ``source`` records which rule decided.
    """
    x, y = _favorable_pair(scenario, anchor)
    sx, sy = scenario.project(x), scenario.project(y)
    p_x, p_y = anchor.p(x), anchor.p(y)
    root_region = sy.reward > p_x * sx.reward
    d0 = cf.switch_gain(p_x, sx, sy)
    if cf.in_pure_good_news_wedge(scenario, anchor):
        initial = HIGH if cf.claim2_explore_high_first(scenario, anchor) else LOW
        source = "wedge-inequality"
    elif sx.rate_bad > 0.0 and (not root_region or d0 > 0.0):
        # information on the favorable project is immediately valuable
        initial, source = x, "switch-gain"
    else:
        if oracle is None:
            raise ModelError("initial exploration needs the oracle in this region")
        initial, source = oracle.path(anchor).initial_explored, "oracle"
    if initial == y or sx.rate_bad == 0.0:
        return initial, INF, source
    slope = -sx.rate_bad + sy.rate_good * sx.reward / sy.reward
    try:
        root = cf.claim1_switch_probability(sx, sy)
    except cf.NonGenericParameters:
        root = None
    p_unfav = p_y * sy.reward / sx.reward
    if root is None or slope <= 0.0 or not (p_unfav < root < p_x):
        return initial, INF, source
    return initial, drift_time(p_x, root, sx.rate_good, sx.rate_bad), source


def good_news_policy(scenario: Scenario, oracle_grid: int = 400) -> Policy:
    if classify_regime(scenario) is not NewsRegime.GOOD_NEWS:
        raise ModelError("good_news_policy requires good news")
    _require_disentangled(scenario)
    oracle = _OracleCache(scenario, oracle_grid)
    notes = {}

    def planner(anchor):
        if not _both_unknown(anchor):
            return _post_news_plan(scenario, anchor)
        initial, T, source = good_news_plan_parameters(scenario, anchor, oracle)
        if anchor == BeliefState.from_scenario(scenario):
            notes["initial_rule"] = source
        phases = [(INF, initial)] if not math.isfinite(T) else [(T, initial), (INF, other(initial))]
        return myopic_segments(scenario, anchor, phases)

    return Policy("good_news", scenario, planner, notes)


def bad_news_plan_parameters(scenario: Scenario, anchor: BeliefState, oracle=None):
    """Initial explored project and switch clock under bad news."""
    lo, hi = scenario.low, scenario.high
    v_low, v_high = anchor.p_low * lo.reward, anchor.p_high * hi.reward
    if v_high >= lo.reward:
        return HIGH, INF, "dominant-high"
    p_hat = cf.hat_p_L(scenario)
    if v_low > v_high and anchor.p_low >= p_hat:
        return HIGH, INF, "p-hat"
    # below the threshold the timing is only characterized qualitatively
    if oracle is None:
        raise ModelError("the switch time needs the oracle in this region")
    path = oracle.path(anchor)
    initial, T = path.initial_explored, path.first_switch()
    if initial == HIGH:
        return HIGH, INF, "oracle"
    if v_low > v_high:
        T = min(T, drift_time(anchor.p_low, p_hat, lo.rate_good, lo.rate_bad))
    return LOW, T, "oracle"


def bad_news_policy(scenario: Scenario, oracle_grid: int = 400) -> Policy:
    if classify_regime(scenario) is not NewsRegime.BAD_NEWS:
        raise ModelError("bad_news_policy requires bad news")
    _require_disentangled(scenario)
    oracle = _OracleCache(scenario, oracle_grid)
    notes = {"p_hat_L": cf.hat_p_L(scenario)}

    def planner(anchor):
        if not _both_unknown(anchor):
            return _post_news_plan(scenario, anchor)
        initial, T, source = bad_news_plan_parameters(scenario, anchor, oracle)
        if anchor == BeliefState.from_scenario(scenario):
            notes["initial_rule"] = source
        if initial == HIGH:
            return myopic_segments(scenario, anchor, [(INF, HIGH)])
        return myopic_segments(scenario, anchor, [(T, LOW), (INF, HIGH)])

    return Policy("bad_news", scenario, planner, notes)


def optimal_policy(scenario: Scenario, oracle_grid: int = 400) -> Policy:
    """The optimal policy for the scenario's regime and alpha."""
    if scenario.safe_low:
        return safe_project_policy(scenario)
    regime = classify_regime(scenario)
    if regime is NewsRegime.BALANCED:
        return balanced_policy(scenario)
    if regime is NewsRegime.GOOD_NEWS:
        return good_news_policy(scenario, oracle_grid)
    return bad_news_policy(scenario, oracle_grid)


def scheduled_policy(scenario: Scenario, initial: str, switch_time: float, name="scheduled") -> Policy:
    """Explore ``initial`` until ``switch_time`` then the other project; myopic
    exploitation and the standard post-news continuation."""
    start = BeliefState.from_scenario(scenario)

    def planner(anchor):
        if not _both_unknown(anchor):
            return _post_news_plan(scenario, anchor)
        if anchor != start:
            raise ModelError("scheduled policies are defined from the prior only")
        if not math.isfinite(switch_time):
            return myopic_segments(scenario, anchor, [(INF, initial)])
        return myopic_segments(scenario, anchor, [(switch_time, initial), (INF, other(initial))])

    return Policy(name, scenario, planner)


# -- classical baseline -------------------------------------------------------------

def _index(p, spec, r):
    return cf.gittins_index_classical(p, spec.reward, spec.max_rate, r)


SPLIT_STEP = 0.05
SPLIT_SEGMENTS = 4000


def _split_segments(scenario: Scenario, p_low: float, p_high: float, t0: float) -> list:
    """Attention split that keeps both indices equal while they fall together."""
    lo, hi, r = scenario.low, scenario.high, scenario.discount
    dt = SPLIT_STEP / max(lo.max_rate, hi.max_rate, r)
    segments = []
    t = t0
    for _ in range(SPLIT_SEGMENTS):
        def gap(phi):
            ph = drift_posterior(p_high, hi.rate_good, hi.rate_bad, phi, dt)
            pl = drift_posterior(p_low, lo.rate_good, lo.rate_bad, 1.0 - phi, dt)
            return _index(ph, hi, r) - _index(pl, lo, r)

        g0, g1 = gap(0.0), gap(1.0)
        if g0 <= 0.0:
            phi = 0.0
        elif g1 >= 0.0:
            phi = 1.0
        else:
            phi = brentq(gap, 0.0, 1.0, xtol=1e-14)
        segments.append(Segment(t, t + dt, Allocation(1.0 - phi, phi, 1.0 - phi, phi)))
        p_high = drift_posterior(p_high, hi.rate_good, hi.rate_bad, phi, dt)
        p_low = drift_posterior(p_low, lo.rate_good, lo.rate_bad, 1.0 - phi, dt)
        t += dt
    last = segments[-1].allocation
    segments.append(Segment(t, INF, last))
    return segments


def classical_policy(scenario: Scenario) -> Policy:
    """Fully entangled baseline: explore and exploit the larger-index project."""
    r = scenario.discount

    def planner(anchor):
        if scenario.safe_low or not _both_unknown(anchor):
            if anchor.resolved_low is Resolution.KNOWN_GOOD:
                return _safe_plan(scenario, anchor, 1.0)
            return _post_news_plan(scenario, anchor, 1.0)
        lo, hi = scenario.low, scenario.high
        g_low, g_high = _index(anchor.p_low, lo, r), _index(anchor.p_high, hi, r)
        x = LOW if g_low > g_high else HIGH
        y = other(x)
        if classify_regime(scenario) is not NewsRegime.GOOD_NEWS:
            return [Segment(0.0, INF, pure(x, x))]
        sx = scenario.project(x)
        g_y = min(g_low, g_high)
        target = cf.gittins_inverse(g_y, sx.reward, sx.max_rate, r)
        T = drift_time(anchor.p(x), target, sx.rate_good, sx.rate_bad) if g_low != g_high else 0.0
        if not math.isfinite(T):
            return [Segment(0.0, INF, pure(x, x))]
        p_x_T = target if T > 0.0 else anchor.p(x)
        p_low = p_x_T if x == LOW else anchor.p_low
        p_high = p_x_T if x == HIGH else anchor.p_high
        head = [Segment(0.0, T, pure(x, x))] if T > 0.0 else []
        return head + _split_segments(scenario, p_low, p_high, T)

    return Policy("classical", scenario, planner)


__all__ = [
    "Policy", "Plan", "Segment", "safe_project_policy", "balanced_policy", "good_news_policy",
    "bad_news_policy", "classical_policy", "optimal_policy", "scheduled_policy",
    "myopic_segments", "good_news_plan_parameters", "bad_news_plan_parameters",
]
