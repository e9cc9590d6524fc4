import numpy as np
import pytest

from forage import closedform as cf
from forage.acceptance import oracle_low_to_high_boundary, safe_scenario
from forage.dp_oracle import (
    NonMonotonePolicy, ValueGrid, exploits_high, explores_high, extract_threshold, local_cell,
    oracle_no_news_path, value_iteration_safe, value_iteration_two_risky,
)
from forage.model import HIGH, NewsRegime, ProjectSpec, Scenario
from forage.policy import good_news_policy
from forage.simulate import monte_carlo

GOOD, BAD = NewsRegime.GOOD_NEWS, NewsRegime.BAD_NEWS

# thresholds frozen from a grid-400, delta 2e-4 run
FROZEN_THRESHOLDS = {0.0: 0.66625, 0.25: 0.61375, 0.5: 0.53875, 1.0: 0.25125}


@pytest.mark.parametrize("alpha", sorted(FROZEN_THRESHOLDS))
@pytest.mark.parametrize("regime", [GOOD, BAD])
def test_safe_thresholds(alpha, regime):
    grid = value_iteration_safe(safe_scenario(0.5, regime, alpha), 2e-4, 400)
    th = extract_threshold(grid, 0, exploits_high)
    assert th == pytest.approx(FROZEN_THRESHOLDS[alpha], abs=1e-12)
    assert abs(th - cf.cutoff_pbar(alpha, 1.0, 5.0, 10.0, 15.0)) * 400 <= 2


def test_safe_values_match_closed_forms():
    for regime in (GOOD, BAD):
        g0 = value_iteration_safe(safe_scenario(0.5, regime, 0.0), 1e-3, 400)
        g1 = value_iteration_safe(safe_scenario(0.5, regime, 1.0), 1e-3, 400)
        for p in (0.1, 0.3, 0.5, 0.7, 0.9):
            assert g0.value_at(p) == pytest.approx(cf.payoff_disentangled(p, 1, 5, regime, 10, 15), abs=5e-3)
            assert g1.value_at(p) == pytest.approx(cf.payoff_entangled(p, 1, 5, regime, 10, 15), abs=5e-3)
        assert g0.values[-1] == pytest.approx(15.0)


def test_first_order_convergence():
    sc = safe_scenario(0.5, GOOD, 1.0)
    exact = cf.payoff_entangled(0.5, 1, 5, GOOD, 10, 15)
    gaps = [abs(value_iteration_safe(sc, d, 400).value_at(0.5) - exact) for d in (1e-2, 1e-3)]
    assert gaps[1] <= gaps[0] + 1e-9


def test_gittins_cross_check():
    # alpha 1 prefers a risky arm with index 8.571 over a safe 8.5 but not over 8.6
    for safe, prefers_risky in ((8.5, True), (8.6, False)):
        sc = Scenario(ProjectSpec(1.0, safe, 5, 5), ProjectSpec(0.5, 10.0, 5, 0), 1.0, 1.0)
        grid = value_iteration_safe(sc, 2e-4, 400)
        assert (extract_threshold(grid, 0, exploits_high) < 0.5) == prefers_risky


def test_two_risky_safe_strip():
    sc = Scenario(ProjectSpec(0.6, 10.0, 2, 0), ProjectSpec(0.4, 15.0, 3, 0), 1.0)
    grid = value_iteration_two_risky(sc, grid_n=200)
    ref = value_iteration_safe(Scenario(ProjectSpec(1.0, 10.0, 2, 0), ProjectSpec(0.4, 15.0, 3, 0), 1.0),
                               grid_n=200)
    pH = grid.axes[1]
    mid = (pH > 0.05) & (pH < 0.95)
    strip = grid.strips["low_good"][mid]
    assert np.max(np.abs(strip - [ref.value_at(p) for p in pH[mid]])) < 1e-2
    assert grid.iterations == 2


def test_claim1_switch_value_matches_oracle():
    # the oracle is indifferent between switching at the root and staying,
    # so compare values rather than switch locations
    x = ProjectSpec(0.9, 15.0, 3, 1)
    y = ProjectSpec(0.5, 12.0, 2, 0.5)
    assert cf.claim1_switch_probability(x, y) == pytest.approx(2 / 3)
    sc = Scenario(y, x, 1.0)
    grid = value_iteration_two_risky(sc, grid_n=400)
    oracle_value = grid.values[grid.grid_spec["anchor"]]
    assert oracle_value == pytest.approx(13.811111111, abs=1e-8)
    path = oracle_no_news_path(grid)
    assert path.initial_explored == HIGH
    rep = monte_carlo(good_news_policy(sc), sc, 200_000, master_seed=101)
    assert abs(rep.mean - oracle_value) <= 3 * rep.std_error


def test_hat_p_matches_oracle_when_high_bad_news_is_slow():
    sc = Scenario(ProjectSpec(0.7, 10, 0, 2), ProjectSpec(0.1, 15, 1, 1.5), 1.0)
    grid = value_iteration_two_risky(sc, grid_n=400)
    boundary = oracle_low_to_high_boundary(grid, sc)
    assert abs(boundary - 0.75) <= 2 * local_cell(grid, 0, 0.75)


def test_extract_threshold_errors():
    grid = value_iteration_safe(safe_scenario(0.5, GOOD, 0.0), 2e-4, 50)
    const = ValueGrid(grid.grid_spec, grid.values, np.full_like(grid.policy_map, 3), 2, 0.0)
    with pytest.raises(NonMonotonePolicy):
        extract_threshold(const, 0, exploits_high)
    wobbly = grid.policy_map.copy()
    wobbly[5] = 3
    with pytest.raises(NonMonotonePolicy):
        extract_threshold(ValueGrid(grid.grid_spec, grid.values, wobbly, 2, 0.0), 0, exploits_high)


def test_balanced_initial_choice_example():
    sc = Scenario(ProjectSpec(0.8, 10.0, 2, 2), ProjectSpec(0.3, 15.0, 2, 2), 1.0)
    grid = value_iteration_two_risky(sc, grid_n=200)
    assert explores_high(grid.policy_map[grid.grid_spec["anchor"]])


def test_delta_validation():
    with pytest.raises(ValueError):
        value_iteration_safe(safe_scenario(0.5, GOOD, 0.0), -1.0, 100)
