import math

import numpy as np
import pytest

from forage.acceptance import safe_scenario
from forage.dp_oracle import value_iteration_safe, value_iteration_two_risky
from forage.model import HIGH, NewsRegime, ProjectSpec, Scenario, other
from forage.policy import Plan, Policy, Segment, optimal_policy, scheduled_policy
from forage.simulate import WorldDraw, monte_carlo, run_path

GOOD, BAD = NewsRegime.GOOD_NEWS, NewsRegime.BAD_NEWS


@pytest.mark.parametrize("rates", [((2, 0.5), (3, 1)), ((0.5, 3), (1, 2)), ((2, 2), (1, 1))])
def test_oracle_monotone_in_priors_and_rewards(rates):
    (gl, bl), (gh, bh) = rates
    sc = Scenario(ProjectSpec(0.5, 10.0, gl, bl), ProjectSpec(0.4, 15.0, gh, bh), 1.0)
    grid = value_iteration_two_risky(sc, grid_n=200)
    V = grid.values
    assert np.all(np.diff(V, axis=0) >= -1e-9)
    assert np.all(np.diff(V, axis=1) >= -1e-9)
    richer = Scenario(ProjectSpec(0.5, 10.0, gl, bl), ProjectSpec(0.4, 16.0, gh, bh), 1.0)
    g2 = value_iteration_two_risky(richer, grid_n=200)
    a, b = grid.grid_spec["anchor"], g2.grid_spec["anchor"]
    assert g2.values[b] >= V[a] - 1e-9


@pytest.mark.parametrize("regime", [GOOD, BAD])
def test_disentanglement_helps_pointwise(regime):
    v0 = value_iteration_safe(safe_scenario(0.5, regime, 0.0), 1e-3, 400).values
    v1 = value_iteration_safe(safe_scenario(0.5, regime, 1.0), 1e-3, 400).values
    assert np.all(v0 >= v1 - 1e-9)


def test_oracle_sweep_is_exact():
    grid = value_iteration_two_risky(
        Scenario(ProjectSpec(0.5, 10.0, 2, 0.5), ProjectSpec(0.4, 15.0, 3, 1), 1.0), grid_n=200)
    assert grid.sup_change < 1e-9


def test_payoff_invariant_to_segment_refinement():
    sc = Scenario(ProjectSpec(0.5, 10.0, 2, 0.5), ProjectSpec(0.6, 15.0, 3, 1), 1.0)
    base = scheduled_policy(sc, HIGH, 0.7)

    def refined(anchor):
        out = []
        for s in base.plan(anchor).segments:
            end = s.end if math.isfinite(s.end) else s.start + 50.0
            cuts = np.linspace(s.start, end, 7)
            out += [Segment(a, b, s.allocation) for a, b in zip(cuts, cuts[1:])]
            if not math.isfinite(s.end):
                out.append(Segment(end, math.inf, s.allocation))
        return out

    fine = Policy("refined", sc, refined)
    rng = np.random.default_rng(0)
    for _ in range(50):
        world = WorldDraw(bool(rng.random() < 0.5), bool(rng.random() < 0.6))
        budgets = tuple(rng.exponential(size=2))
        a = run_path(base, world, sc, budgets, 30.0).payoff
        b = run_path(fine, world, sc, budgets, 30.0).payoff
        assert abs(a - b) <= 1e-12 * max(abs(a), 1.0)


def _perturbations(desc, r):
    init, T = desc["initial_explored"], desc["switch_time"]
    if math.isfinite(T):
        times = [T * f for f in np.linspace(0.8, 1.2, 11) if f != 1.0]
    else:
        times = [k / r for k in (0.25, 0.5, 1, 2, 4, 8, 16, 32, 64, 128)]
    out = [(init, t) for t in times]
    out += [(other(init), t) for t in ([math.inf] + times[:9])]
    return out[:20]


@pytest.mark.slow
def test_statistical_dominance():
    rng = np.random.default_rng(11)
    worst = math.inf
    for k in range(10):
        regime = (GOOD, BAD)[k % 2]
        pl, ph = rng.uniform(0.2, 0.8, 2)
        rl, rh = np.sort(rng.uniform(2, 20, 2))
        hi = rng.uniform(1, 4, 2)
        lo = rng.uniform(0.1, 0.5, 2) * hi
        rates = [(h, l) if regime is GOOD else (l, h) for h, l in zip(hi, lo)]
        sc = Scenario(ProjectSpec(pl, rl, *rates[0]), ProjectSpec(ph, rh, *rates[1]), 1.0)
        opt = optimal_policy(sc, 200)
        best = monte_carlo(opt, sc, 20_000, master_seed=k)
        for init, t in _perturbations(opt.descriptor, sc.discount):
            alt = monte_carlo(scheduled_policy(sc, init, t), sc, 20_000, master_seed=k)
            slack = best.mean - alt.mean + 3 * math.hypot(best.std_error, alt.std_error)
            worst = min(worst, slack)
            assert slack >= 0, (sc, init, t, best.mean, alt.mean)
