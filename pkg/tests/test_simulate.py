import math

import numpy as np
import pytest
from scipy import stats

from forage import closedform as cf
from forage.model import HIGH, BeliefState, NewsRegime, ProjectSpec, Scenario
from forage.policy import safe_project_policy, scheduled_policy
from forage.simulate import (
    WorldDraw, monte_carlo, path_draws, per_path_values, run_path, world_from_draws,
)

GOOD = NewsRegime.GOOD_NEWS


def safe(p, g, b, alpha):
    return Scenario(ProjectSpec(1.0, 10.0, 5, 5), ProjectSpec(p, 15.0, g, b), 1.0, alpha)


def test_both_bad_pays_nothing():
    sc = Scenario(ProjectSpec(0.5, 10.0, 2, 0.5), ProjectSpec(0.6, 15.0, 3, 1), 1.0)
    pol = scheduled_policy(sc, HIGH, 0.7)
    for budgets in ((0.3, 0.1), (5.0, 0.01), (math.inf, math.inf)):
        assert run_path(pol, WorldDraw(False, False), sc, budgets, 30.0).payoff == 0.0


def test_exploit_high_forever():
    sc = safe(0.9, 0, 5, 0.0)
    traj = run_path(safe_project_policy(sc), WorldDraw(True, True), sc, (1.0, 1.0), 7.0)
    assert traj.payoff == pytest.approx(15.0 * (1 - math.exp(-7.0)), rel=1e-14)


def test_first_news_time_is_exponential():
    alpha = 0.4
    sc = safe(0.3, 5, 0, alpha)
    pol = safe_project_policy(sc)
    rng = np.random.default_rng(7)
    times = []
    for _ in range(10_000):
        traj = run_path(pol, WorldDraw(True, True), sc, rng, 50.0)
        times.append(traj.events[0][0])
    res = stats.kstest(times, "expon", args=(0, 1 / ((1 - alpha) * 5)))
    assert res.pvalue > 0.01


def test_no_news_posterior_matches_drift():
    # among good-news paths without news by ln 2, one third have a good project
    sc = safe(0.5, 1, 0, 0.0)
    draws = path_draws(3, 0, 100_000)
    good, quiet = 0, 0
    for row in draws:
        world, budgets = world_from_draws(sc, row)
        rate = 1.0 if world.high_good else 0.0
        if budgets[1] / rate > math.log(2) if rate else True:
            quiet += 1
            good += world.high_good
    frac = good / quiet
    se = math.sqrt(frac * (1 - frac) / quiet)
    assert abs(frac - 1 / 3) < 3 * se


@pytest.mark.parametrize("alpha", [0.0, 1.0])
def test_monte_carlo_matches_closed_form(alpha):
    sc = safe(0.5, 5, 0, alpha)
    rep = monte_carlo(safe_project_policy(sc), sc, 100_000, master_seed=42)
    formula = cf.payoff_disentangled if alpha == 0.0 else cf.payoff_entangled
    exact = formula(0.5, 1.0, 5.0, GOOD, 10.0, 15.0)
    assert abs(rep.mean - exact) <= 3 * rep.std_error + rep.tail_bound
    assert rep.horizon == 30.0


def test_determinism_and_chunking():
    sc = Scenario(ProjectSpec(0.5, 10.0, 2, 0.5), ProjectSpec(0.6, 15.0, 3, 1), 1.0)
    pol = scheduled_policy(sc, HIGH, 0.7)
    a = per_path_values(pol, sc, 3000, 30.0, 9, threads=1)
    b = per_path_values(pol, sc, 3000, 30.0, 9, threads=2)
    assert np.array_equal(a, b)
    head = per_path_values(pol, sc, 10, 30.0, 9, threads=1)
    assert np.array_equal(head, a[:10])
    world, budgets = world_from_draws(sc, path_draws(9, 0, 1)[0])
    t1 = run_path(pol, world, sc, budgets, 30.0)
    t2 = run_path(pol, world, sc, budgets, 30.0)
    assert t1.payoff == t2.payoff and t1.events == t2.events


def test_validation():
    sc = safe(0.5, 5, 0, 0.0)
    with pytest.raises(ValueError):
        monte_carlo(safe_project_policy(sc), sc, 0)
    with pytest.raises(ValueError):
        run_path(safe_project_policy(sc), WorldDraw(True, True), sc, (1.0, 1.0), 0.0)


def test_final_belief_drifts_without_news():
    sc = safe(0.5, 1, 0, 0.0)
    traj = run_path(safe_project_policy(sc), WorldDraw(True, False), sc, (math.inf, math.inf), math.log(2))
    assert traj.final_belief.p_high == pytest.approx(1 / 3, abs=1e-12)
    assert traj.final_belief == BeliefState(1.0, traj.final_belief.p_high, traj.final_belief.resolved_low)
