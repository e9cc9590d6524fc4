import math

import pytest

from forage import closedform as cf
from forage.model import (
    HIGH, LOW, Allocation, BeliefState, ProjectSpec, Resolution, Scenario, drift_time,
)
from forage.policy import (
    Plan, Segment, balanced_policy, bad_news_policy, classical_policy, good_news_policy,
    optimal_policy, safe_project_policy, scheduled_policy,
)
from forage.simulate import WorldDraw, run_path

INF = math.inf


def safe(p, g, b, alpha):
    return Scenario(ProjectSpec(1.0, 10.0, 5, 5), ProjectSpec(p, 15.0, g, b), 1.0, alpha)


def no_news(policy, scenario, horizon=200.0):
    return run_path(policy, WorldDraw(True, True), scenario, (math.inf, math.inf), horizon).segments


def test_plan_merges_and_lookup():
    a, b = Allocation(0, 1, 1, 0), Allocation(1, 0, 1, 0)
    plan = Plan([Segment(0, 1, a), Segment(1, 2, a), Segment(2, INF, b)])
    assert len(plan.segments) == 2
    assert plan.at(0.5) == a and plan.at(5.0) == b
    assert plan.switch_times("explored") == [2]


def test_safe_good_news_below_cutoff():
    for alpha in (0.0, 0.5):
        sc = safe(0.2, 5, 0, alpha)
        plan = safe_project_policy(sc).plan(BeliefState.from_scenario(sc))
        assert len(plan.segments) == 1
        alloc = plan.segments[0].allocation
        assert alloc.exploit_low == 1.0
        assert alloc.explore_high == pytest.approx(1 - alpha)
        alloc.check(alpha)


def test_safe_bad_news_never_switches():
    sc = safe(0.8, 0, 5, 0.5)
    plan = safe_project_policy(sc).plan(BeliefState.from_scenario(sc))
    assert all(s.allocation.exploited == HIGH for s in plan.segments)


def test_safe_good_news_switch_time():
    alpha = 0.5
    sc = safe(0.8, 5, 0, alpha)
    pbar = cf.cutoff_pbar(alpha, 1.0, 5.0, 10.0, 15.0)
    plan = safe_project_policy(sc).plan(BeliefState.from_scenario(sc))
    expected = drift_time(0.8, pbar, 5, 0)
    assert plan.switch_times("exploited") == [pytest.approx(expected, rel=1e-12)]


def test_balanced_policy():
    sc = Scenario(ProjectSpec(0.6, 10.0, 2, 2), ProjectSpec(0.5, 15.0, 1, 1), 1.0)
    pol = balanced_policy(sc)
    segs = no_news(pol, sc)
    assert len({s[2].explored for s in segs}) == 1
    assert pol.descriptor["switch_time"] == INF
    after = pol.plan(BeliefState(0.6, 1.0, resolved_high=Resolution.KNOWN_GOOD))
    assert all(s.allocation.exploited == HIGH for s in after.segments)


def test_balanced_double_exploitation_switch():
    # explores unfavorable L first; good news on L then on H moves exploitation twice
    sc = Scenario(ProjectSpec(0.3, 10.0, 4, 4), ProjectSpec(0.5, 15.0, 0.5, 0.5), 1.0)
    pol = balanced_policy(sc)
    assert pol.descriptor["initial_explored"] == LOW
    assert pol.descriptor["initial_exploited"] == HIGH
    traj = run_path(pol, WorldDraw(True, True), sc, (0.1, 0.2), 10.0)
    exploited = [s[2].exploited for s in traj.segments]
    assert exploited[0] == HIGH and LOW in exploited and exploited[-1] == HIGH


def test_identical_projects_good_news():
    sc = Scenario(ProjectSpec(0.5, 10.0, 1, 0), ProjectSpec(0.5, 10.0, 1, 0), 1.0)
    segs = no_news(good_news_policy(sc), sc)
    assert len(segs) == 1
    a = segs[0][2]
    assert a.explored != a.exploited


def test_good_news_exploration_diverges():
    sc = Scenario(ProjectSpec(0.5, 10.0, 2, 0.5), ProjectSpec(0.6, 15.0, 3, 1), 1.0)
    d = good_news_policy(sc).descriptor
    assert d["initial_explored"] == HIGH and d["initial_exploited"] == HIGH
    assert 0 < d["switch_time"] < INF
    assert d["exploit_switch_times"] == []


def test_good_news_unfavorable_explored_never_switches():
    sc = Scenario(ProjectSpec(0.5, 10.0, 1, 0), ProjectSpec(0.6, 15.0, 1, 0), 1.0)
    pol = good_news_policy(sc)
    segs = no_news(pol, sc, 1000.0)
    assert len({s[2].explored for s in segs}) == 1


def test_bad_news_structure():
    start_h = Scenario(ProjectSpec(0.3, 10.0, 0, 1), ProjectSpec(0.5, 15.0, 0, 1), 1.0)
    segs = no_news(bad_news_policy(start_h), start_h)
    assert {s[2].explored for s in segs} == {HIGH}
    start_l = Scenario(ProjectSpec(0.7, 10.0, 0.5, 3), ProjectSpec(0.3, 15.0, 1, 2), 1.0)
    d = bad_news_policy(start_l).descriptor
    assert d["initial_explored"] == LOW and math.isfinite(d["switch_time"])


def test_bad_news_exploitation_switch_order():
    sc = Scenario(ProjectSpec(0.21919387276444172, 11.953648165858496, 0.002430409172411092, 2.3989807214854024),
                  ProjectSpec(0.19357741690880328, 17.31507517920087, 0.12749210822661405, 0.5584555650265579), 1.0)
    d = bad_news_policy(sc, 200).descriptor
    assert d["initial_explored"] == LOW and d["initial_exploited"] == HIGH
    t1, t2 = d["exploit_switch_times"]
    assert t1 < d["switch_time"] < t2


def test_optimal_dispatch():
    assert optimal_policy(safe(0.5, 5, 0, 0.3)).name == "safe"
    bal = Scenario(ProjectSpec(0.6, 10.0, 2, 2), ProjectSpec(0.5, 15.0, 1, 1), 1.0)
    assert optimal_policy(bal).name == "balanced"


def test_scheduled_policy():
    sc = Scenario(ProjectSpec(0.5, 10.0, 2, 0.5), ProjectSpec(0.6, 15.0, 3, 1), 1.0)
    d = scheduled_policy(sc, HIGH, 0.7).descriptor
    assert d["initial_explored"] == HIGH and d["switch_time"] == pytest.approx(0.7)


def test_classical_safe_good_news():
    sc = safe(0.8, 5, 0, 1.0)
    plan = classical_policy(sc).plan(BeliefState.from_scenario(sc))
    t = drift_time(0.8, 0.25, 5, 0)
    assert plan.switch_times("exploited") == [pytest.approx(t, rel=1e-12)]
    assert all(s.allocation.explored == s.allocation.exploited for s in plan.segments)


def test_classical_identical_split():
    sc = Scenario(ProjectSpec(0.5, 10.0, 1, 0), ProjectSpec(0.5, 10.0, 1, 0), 1.0, 1.0)
    plan = classical_policy(sc).plan(BeliefState.from_scenario(sc))
    a = plan.at(3.0)
    assert a.explore_low == pytest.approx(0.5, abs=1e-9)
    assert a.exploit_low == pytest.approx(0.5, abs=1e-9)


def test_classical_example2_stays_on_low():
    sc = Scenario(ProjectSpec(0.9, 10.0, 0.0, 1.0), ProjectSpec(0.3, 15.0, 0.0, 1.0), 1.0, 1.0)
    segs = no_news(classical_policy(sc), sc)
    assert {(s[2].explored, s[2].exploited) for s in segs} == {(LOW, LOW)}
