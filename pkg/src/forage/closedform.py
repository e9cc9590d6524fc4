"""Closed-form cutoffs, payoffs, indices and indifference times.

All payoffs are flow-normalized: a value of ``R`` means the discounted stream
is worth a constant flow of ``R``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    BOTH, EITHER, HIGH, LOW, BeliefState, ModelError, NewsRegime, ProjectSpec,
    Scenario, classify_regime, expected_discount, is_pure_news, other,
)


@dataclass(frozen=True)
class SafeCasePayoffs:
    pi_alpha0: float
    pi_alpha1: float
    delta_pi_normalized: float


@dataclass(frozen=True)
class OddsRatio:
    value: float

    @classmethod
    def of(cls, p: float) -> "OddsRatio":
        if not 0.0 < p <= 1.0:
            raise ModelError(f"odds ratio undefined at p={p}")
        return cls((1.0 - p) / p)


@dataclass(frozen=True)
class BalancedIndexReport:
    index_low: float
    index_high: float
    adjusted_p_low: float
    adjusted_p_high: float
    explored_first: str


def myopic_cutoff(scenario: Scenario) -> float:
    if not scenario.safe_low:
        raise ModelError("myopic cutoff requires a safe project L")
    return scenario.low.reward / scenario.high.reward


def cutoff_pbar(alpha: float, r: float, lam: float, R_L: float, R_H: float) -> float:
    """Posterior above which the risky project H is exploited."""
    return (r + lam * (1.0 - alpha)) * R_L / ((r + lam) * R_H - lam * alpha * R_L)


def deviation_gain_rate(p, alpha, r, lam, R_L, R_H):
    """Rate of gain from exploiting H briefly instead of L at posterior ``p``."""
    info = p * lam * alpha * (r / (r + (1.0 - alpha) * lam)) * (R_H - R_L)
    return -r * (R_L - p * R_H) + info


def _pure_rate(regime: NewsRegime, lam: float) -> float:
    if regime is NewsRegime.BALANCED:
        raise ModelError("closed-form payoffs are stated for pure news only")
    if not lam > 0.0:
        raise ModelError("the news rate must be positive")
    return lam


def payoff_disentangled(p, r, lam, regime, R_L, R_H):
    """Expected payoff with a safe L, pure news at rate ``lam`` and alpha = 0."""
    _pure_rate(regime, lam)
    if p <= 0.0:
        return R_L
    if p >= 1.0:
        return R_H
    p_m = R_L / R_H
    rho = expected_discount(r, lam)
    ratio = OddsRatio.of(p).value / OddsRatio.of(p_m).value
    if regime is NewsRegime.GOOD_NEWS:
        if p <= p_m:
            return R_L + p * rho * (R_H - R_L)
        return p * R_H + (1.0 - p) * ratio ** (r / lam) * rho * R_L
    if p <= p_m:
        return R_L + p * (1.0 / ratio) ** (r / lam) * rho * (R_H - R_L)
    return p * R_H + (1.0 - p) * rho * R_L


def payoff_entangled(p, r, lam, regime, R_L, R_H):
    """Expected payoff with a safe L, pure news at rate ``lam`` and alpha = 1."""
    _pure_rate(regime, lam)
    if p >= 1.0:
        return R_H
    pbar = cutoff_pbar(1.0, r, lam, R_L, R_H)
    if p <= pbar:
        return R_L
    if regime is NewsRegime.GOOD_NEWS:
        ratio = OddsRatio.of(p).value / OddsRatio.of(pbar).value
        return p * R_H + (1.0 - p) / (1.0 - pbar) * ratio ** (r / lam) * (R_L - pbar * R_H)
    return p * R_H + (1.0 - p) * expected_discount(r, lam) * R_L


def payoff_balanced_constrained(p, alpha, r, lam, R_L, R_H):
    """Expected payoff with a safe L and balanced news at rate ``lam``."""
    if p >= cutoff_pbar(alpha, r, lam, R_L, R_H):
        return p * R_H + (1.0 - p) * expected_discount(r, lam) * R_L
    rate = lam * (1.0 - alpha)
    return R_L + p * (rate / (r + rate)) * (R_H - R_L)


def delta_pi(p, r_over_lam, regime, R_L, R_H) -> SafeCasePayoffs:
    # payoffs depend on (r, lam) only through their ratio
    r, lam = r_over_lam, 1.0
    pi0 = payoff_disentangled(p, r, lam, regime, R_L, R_H)
    pi1 = payoff_entangled(p, r, lam, regime, R_L, R_H)
    return SafeCasePayoffs(pi0, pi1, (pi0 - pi1) / (p * R_H + (1.0 - p) * R_L))


def delta_pi_argmax(regime, r_over_lam, R_L, R_H, step=1e-4, tol=1e-12) -> float:
    """Maximizer of the disentanglement value over the prior of H.

    A uniform scan brackets the maximum, golden-section search refines it.
    Ties go to the smaller prior.
    """
    grid = np.arange(step, 1.0, step)
    vals = np.array([delta_pi(p, r_over_lam, regime, R_L, R_H).delta_pi_normalized
                     for p in grid])
    k = int(np.argmax(vals))  # first occurrence: smaller p wins ties
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, len(grid) - 1)]

    def f(p):
        return delta_pi(p, r_over_lam, regime, R_L, R_H).delta_pi_normalized

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - inv_phi * (b - a), a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    best = 0.5 * (a + b)
    return best if f(best) >= vals[k] else float(grid[k])


def _posteriors(x: ProjectSpec, y: ProjectSpec, state, which):
    if state is None:
        return x.prior_good, y.prior_good
    return state.p(which), state.p(other(which))


def adjusted_prob_scalar(p_x: float, reward_x: float, p_y: float, reward_y: float) -> float:
    """Success probability of x, raised to the indifference level when x is unfavorable."""
    if p_x * reward_x >= p_y * reward_y:
        return p_x
    return min(p_y * reward_y / reward_x, 1.0)


def adjusted_prob(x: ProjectSpec, y: ProjectSpec, state: BeliefState | None = None,
                  which: str = HIGH) -> float:
    """Adjusted probability of project x against y.

    Posteriors come from ``state`` (x sitting at slot ``which``) or, without a
    state, from the specs' ``prior_good``.
    """
    p_x, p_y = _posteriors(x, y, state, which)
    return adjusted_prob_scalar(p_x, x.reward, p_y, y.reward)


def information_index(p_x, reward_x, rate_x, p_y, reward_y) -> float:
    return rate_x * (1.0 - adjusted_prob_scalar(p_x, reward_x, p_y, reward_y))


def _balanced_rate(spec: ProjectSpec) -> float:
    if spec.rate_good != spec.rate_bad:
        raise ModelError("balanced news requires equal good and bad news rates")
    return spec.rate_good


def balanced_index(scenario: Scenario, state: BeliefState) -> BalancedIndexReport:
    lo, hi = scenario.low, scenario.high
    pt_low = adjusted_prob(lo, hi, state, LOW)
    pt_high = adjusted_prob(hi, lo, state, HIGH)
    # a resolved project carries no information
    rate_low = _balanced_rate(lo) if state.unknown(LOW) else 0.0
    rate_high = _balanced_rate(hi) if state.unknown(HIGH) else 0.0
    i_low = rate_low * (1.0 - pt_low)
    i_high = rate_high * (1.0 - pt_high)
    first = LOW if i_low > i_high else HIGH if i_high > i_low else EITHER
    return BalancedIndexReport(i_low, i_high, pt_low, pt_high, first)


def balanced_sequential_value(scenario: Scenario, state: BeliefState, first: str) -> float:
    """Value of exploring ``first`` until news, then the other project until news."""
    specs = {LOW: scenario.low, HIGH: scenario.high}
    p = {LOW: state.p_low, HIGH: state.p_high}
    v = {z: p[z] * specs[z].reward for z in (LOW, HIGH)}
    e0 = max(v.values())
    e_star = v[HIGH] + (1.0 - p[HIGH]) * v[LOW]

    def e_learn(x):
        y = other(x)
        if v[x] >= v[y]:
            return e0 + (1.0 - p[x]) * v[y]
        return e0 + p[x] * max(specs[x].reward - v[y], 0.0)

    x, y = first, other(first)
    rho_x = expected_discount(scenario.discount, _balanced_rate(specs[x]))
    rho_y = expected_discount(scenario.discount, _balanced_rate(specs[y]))
    return (1.0 - rho_x) * e0 + rho_x * (1.0 - rho_y) * e_learn(x) + rho_x * rho_y * e_star


# -- no-index cycle -----------------------------------------------------------

class NoCycleFound(RuntimeError):
    pass


def _prefers(a, b) -> bool:
    """True when, facing projects a and b (each (p, R, lam)), a is explored."""
    i_a = information_index(a[0], a[1], a[2], b[0], b[1])
    i_b = information_index(b[0], b[1], b[2], a[0], a[1])
    return i_a > i_b


def cycle_inequalities(triple) -> tuple[bool, bool, bool]:
    (p1, R1, l1), (p2, R2, l2), (p3, R3, l3) = triple
    g1 = p2 * R2 > p1 * R1 and l2 * (1 - p2) < l1 * (1 - p2 * R2 / R1)
    g2 = p2 * R2 > R3 > p3 * R3 > p1 * R1
    g3 = l3 * (1 - p3) > l1 * (1 - p3 * R3 / R1)
    return g1, g2, g3


def verify_cycle(triple) -> bool:
    t1, t2, t3 = triple
    return (all(cycle_inequalities(triple))
            and _prefers(t1, t2) and _prefers(t2, t3) and _prefers(t3, t1))


def find_no_index_cycle(box, n_draws=200_000, seed=0):
    """Search a parameter box for three projects whose pairwise optimal
    exploration choices form a cycle.

    ``box`` maps ``"p"``, ``"R"`` and ``"lam"`` to (low, high) ranges.
    Returns three ProjectSpecs with balanced news.
    """
    rng = np.random.default_rng(seed)
    lo = np.array([box["p"][0], box["R"][0], box["lam"][0]], dtype=float)
    hi = np.array([box["p"][1], box["R"][1], box["lam"][1]], dtype=float)
    draws = lo + (hi - lo) * rng.random((n_draws, 3, 3))
    for cand in draws:
        triple = [tuple(map(float, row)) for row in cand]
        if verify_cycle(triple):
            return tuple(ProjectSpec(p, R, lam, lam) for p, R, lam in triple)
    raise NoCycleFound("no exploration cycle in the search box")


# -- good news: indifference time and switching --------------------------------

def indifference_time_tbar(x: ProjectSpec, other_expected: float,
                           state: BeliefState | None = None, which: str = HIGH) -> float:
    """No-news exploration time of x after which its expected value falls to
    ``other_expected``.  Returns ``math.inf`` when it never does."""
    p_x = x.prior_good if state is None else state.p(which)
    return tbar(p_x, x.reward, x.rate_good, x.rate_bad, other_expected)


def tbar(p_x, reward_x, rate_good_x, rate_bad_x, other_expected) -> float:
    if rate_good_x < rate_bad_x:
        raise ModelError("indifference time is defined for good or balanced news")
    if p_x * reward_x <= other_expected:
        return 0.0
    if rate_good_x == rate_bad_x or other_expected <= 0.0 or p_x >= 1.0:
        return math.inf
    arg = p_x * (reward_x - other_expected) / (other_expected * (1.0 - p_x))
    return math.log(arg) / (rate_good_x - rate_bad_x)


class NonGenericParameters(ModelError):
    pass


def switch_gain(p_x, x: ProjectSpec, y: ProjectSpec) -> float:
    """Sign-determining factor of the gain from exploring x a moment longer
    before moving to y."""
    return x.rate_bad * (1.0 - p_x) - y.rate_good * (1.0 - p_x * x.reward / y.reward)


def claim1_switch_probability(x: ProjectSpec, y: ProjectSpec):
    """Posterior of x at which exploration moves from x to y, or None.

    Only roots where x's expected value stays below ``y.reward`` are returned.
    """
    slope = -x.rate_bad + y.rate_good * x.reward / y.reward
    if slope == 0.0:
        raise NonGenericParameters("rate_bad_x * R_y == rate_good_y * R_x")
    root = (x.rate_bad - y.rate_good) / (x.rate_bad - y.rate_good * x.reward / y.reward)
    if 0.0 < root < 1.0 and root * x.reward < y.reward:
        return root
    return None


def claim2_explore_high_first(scenario: Scenario, state: BeliefState) -> bool:
    lo, hi = scenario.low, scenario.high
    if lo.rate_bad != 0.0 or hi.rate_bad != 0.0 or lo.is_safe:
        raise ModelError("requires pure good news on two risky projects")
    v_low, v_high = state.p_low * lo.reward, state.p_high * hi.reward
    if not v_low < v_high < lo.reward:
        raise ModelError("requires p_L R_L < p_H R_H < R_L")
    r = scenario.discount
    t_high = tbar(state.p_high, hi.reward, hi.rate_good, 0.0, v_low)
    w = math.exp(-r * t_high)
    rho_low = expected_discount(r, lo.rate_good)
    pt_low = v_high / lo.reward
    lhs = hi.rate_good * (w - rho_low) / (1.0 - rho_low) * (1.0 - state.p_high)
    rhs = lo.rate_good * (1.0 - pt_low)
    return lhs >= rhs


def in_pure_good_news_wedge(scenario: Scenario, state: BeliefState) -> bool:
    lo, hi = scenario.low, scenario.high
    return (not lo.is_safe and lo.rate_bad == 0.0 and hi.rate_bad == 0.0
            and state.p_low * lo.reward < state.p_high * hi.reward < lo.reward)


def hat_p_L(scenario: Scenario) -> float:
    """Posterior on L above which H is explored while L is favorable (bad news)."""
    lam_h = scenario.high.rate_good
    lam_l = scenario.low.rate_bad
    ratio = scenario.low.reward / scenario.high.reward
    # gain from exploring H is linear in p_L: f(p) = lam_h (1 - p ratio) - lam_l (1 - p)
    f0 = lam_h - lam_l
    f1 = lam_h * (1.0 - ratio)
    if f0 >= 0.0:
        return 0.0
    if f1 <= 0.0:
        return 1.0
    return min(max(-f0 / (f1 - f0), 0.0), 1.0)


def gittins_index_classical(p, R, lam, r) -> float:
    return p * R * (r + lam) / (r + p * lam)


def gittins_inverse(index, R, lam, r) -> float:
    """Posterior at which a project's classical index equals ``index``."""
    return r * index / (R * (r + lam) - index * lam)


def regime_rate(spec: ProjectSpec) -> float:
    return spec.max_rate


def pure_regime(scenario: Scenario) -> NewsRegime:
    regime = classify_regime(scenario)
    if regime is NewsRegime.BALANCED or not is_pure_news(scenario.high):
        raise ModelError("a pure good or pure bad news scenario is required")
    return regime


__all__ = [
    "SafeCasePayoffs", "OddsRatio", "BalancedIndexReport", "myopic_cutoff",
    "cutoff_pbar", "deviation_gain_rate", "payoff_disentangled", "payoff_entangled",
    "payoff_balanced_constrained", "delta_pi", "delta_pi_argmax", "adjusted_prob",
    "information_index", "balanced_index", "balanced_sequential_value",
    "find_no_index_cycle", "verify_cycle", "cycle_inequalities", "NoCycleFound",
    "indifference_time_tbar", "tbar", "adjusted_prob_scalar", "claim1_switch_probability", "switch_gain",
    "claim2_explore_high_first", "in_pure_good_news_wedge", "hat_p_L",
    "gittins_index_classical", "gittins_inverse", "BOTH", "EITHER",
]
