"""Acceptance batteries shared by ``forage verify`` and the test suite.

Each ``criterion_*`` function runs one battery at its stated tolerance and
returns a CheckResult listing every failing tuple.
"""
from __future__ import annotations

import inspect
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import closedform as cf
from .dp_oracle import (
    explores_high, exploits_high, extract_threshold, local_cell, oracle_no_news_path,
    value_iteration_safe, value_iteration_two_risky,
)
from .model import (
    HIGH, LOW, BeliefState, NewsRegime, ProjectSpec, Scenario, drift_posterior, other,
)
from .policy import (
    bad_news_policy, classical_policy, good_news_policy, optimal_policy, safe_project_policy,
    scheduled_policy,
)
from .simulate import (
    WorldDraw, asymptotic_exploitation_rate, monte_carlo, per_path_values, run_path,
)

GOOD, BAD = NewsRegime.GOOD_NEWS, NewsRegime.BAD_NEWS
FIG_R, FIG_LAM, FIG_RL, FIG_RH = 1.0, 5.0, 10.0, 15.0


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    detail: str = ""
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def fail(self, what):
        self.passed = False
        self.failures.append(what)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _timed(fn):
    def wrapper(*args, **kwargs):
        t = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def safe_scenario(p_high, regime, alpha, r=FIG_R, lam=FIG_LAM, R_L=FIG_RL, R_H=FIG_RH):
    g, b = (lam, 0.0) if regime is GOOD else (0.0, lam) if regime is BAD else (lam, lam)
    return Scenario(ProjectSpec(1.0, R_L, lam, lam), ProjectSpec(p_high, R_H, g, b), r, alpha)


# -- 1 --------------------------------------------------------------------------

@_timed
def criterion_1_cutoff(grid_n=400, delta=2e-4) -> CheckResult:
    """Oracle exploitation threshold against the closed-form cutoff."""
    res = CheckResult("1 cutoff agreement")
    worst = 0.0
    for regime in (GOOD, BAD):
        for alpha in (0.0, 0.25, 0.5, 1.0):
            grid = value_iteration_safe(safe_scenario(0.5, regime, alpha), delta, grid_n)
            th = extract_threshold(grid, 0, exploits_high)
            pbar = cf.cutoff_pbar(alpha, FIG_R, FIG_LAM, FIG_RL, FIG_RH)
            cells = abs(th - pbar) * grid_n
            worst = max(worst, cells)
            if cells > 2.0:
                res.fail((regime.value, alpha, th, pbar, cells))
    res.detail = f"max gap {worst:.2f} cells (limit 2)"
    return res


# -- 2 --------------------------------------------------------------------------

PAYOFF_POINTS = tuple(np.round(np.linspace(0.05, 0.95, 10), 4))


@_timed
def criterion_2_payoffs(n_paths=100_000, delta=1e-3, seed=2024, points=PAYOFF_POINTS,
                        monte_carlo_check=True, oracle_check=True) -> CheckResult:
    """Closed-form payoffs against the oracle and against Monte Carlo."""
    res = CheckResult("2 payoff formulas")
    worst_oracle, worst_z = 0.0, 0.0
    formulas = {0.0: cf.payoff_disentangled, 1.0: cf.payoff_entangled}
    k = 0
    for regime in (GOOD, BAD):
        for alpha, formula in formulas.items():
            if oracle_check:
                coarse = value_iteration_safe(safe_scenario(0.5, regime, alpha), delta, 400)
                fine = value_iteration_safe(safe_scenario(0.5, regime, alpha), delta / 2, 400)
            for p in points:
                exact = formula(p, FIG_R, FIG_LAM, regime, FIG_RL, FIG_RH)
                if oracle_check:
                    g1 = abs(coarse.value_at(p) - exact)
                    g2 = abs(fine.value_at(p) - exact)
                    worst_oracle = max(worst_oracle, g1)
                    if g1 > 5e-3:
                        res.fail(("oracle", regime.value, alpha, p, g1))
                    # first order: halving the step must not grow the gap
                    if g2 > 0.75 * g1 + 1e-6:
                        res.fail(("halving", regime.value, alpha, p, g1, g2))
                if monte_carlo_check:
                    sc = safe_scenario(p, regime, alpha)
                    rep = monte_carlo(safe_project_policy(sc), sc, n_paths, master_seed=seed + k)
                    k += 1
                    excess = max(abs(rep.mean - exact) - rep.tail_bound, 0.0)
                    z = excess / rep.std_error if excess > 0.0 else 0.0
                    worst_z = max(worst_z, z)
                    if abs(rep.mean - exact) > 3.0 * rep.std_error + rep.tail_bound:
                        res.fail(("montecarlo", regime.value, alpha, p, rep.mean, exact, z))
    res.detail = (f"{2 * len(points)} points x 2 alphas; max oracle gap {worst_oracle:.2e}"
                  f" (limit 5e-3); max |z| net of tail {worst_z:.2f} (limit 3)")
    return res


# -- 3 --------------------------------------------------------------------------

@_timed
def criterion_3_surface(n=50) -> CheckResult:
    """Qualitative shape of the disentanglement value surface."""
    res = CheckResult("3 delta-pi surface")
    ps = np.linspace(0.0, 1.0, n + 2)[1:-1]
    ratios = np.logspace(-2, 2, n)
    step = ps[1] - ps[0]
    for regime in (GOOD, BAD):
        for ratio in ratios:
            r, lam = ratio, 1.0
            pbar0 = cf.cutoff_pbar(0.0, r, lam, FIG_RL, FIG_RH)
            pbar1 = cf.cutoff_pbar(1.0, r, lam, FIG_RL, FIG_RH)
            col = np.array([cf.delta_pi(p, ratio, regime, FIG_RL, FIG_RH).delta_pi_normalized
                            for p in ps])
            if col.min() < -1e-12:
                res.fail(("negative", regime.value, ratio, col.min()))
            if regime is BAD:
                tail = np.abs(col[ps >= pbar0])
                if tail.size and tail.max() >= 1e-12:
                    res.fail(("nonzero above cutoff", ratio, tail.max()))
            best = ps[int(np.argmax(col))]
            if regime is GOOD:
                # the interval can be narrower than a grid step, so refine
                exact = cf.delta_pi_argmax(regime, ratio, FIG_RL, FIG_RH)
                if not (pbar1 < exact < pbar0) or abs(best - exact) > step:
                    res.fail(("good-news maximizer", ratio, exact, best, pbar1, pbar0))
            if regime is BAD and abs(best - pbar1) > step:
                res.fail(("bad-news maximizer", ratio, best, pbar1))
    # vanishing limits
    for regime in (GOOD, BAD):
        for p in (1e-9, 1 - 1e-9):
            v = cf.delta_pi(p, 1.0, regime, FIG_RL, FIG_RH).delta_pi_normalized
            if v > 1e-6:
                res.fail(("edge p", regime.value, p, v))
        for ratio in (1e-7, 1e7):
            peak = max(cf.delta_pi(p, ratio, regime, FIG_RL, FIG_RH).delta_pi_normalized
                       for p in ps)
            if peak > 1e-3:
                res.fail(("limit r/lambda", regime.value, ratio, peak))
    res.detail = f"{n}x{n} grid, both regimes, {len(res.failures)} violations"
    return res


# -- 4 --------------------------------------------------------------------------

def random_balanced(rng) -> Scenario:
    p_low, p_high = rng.uniform(0.05, 0.95, 2)
    R_L, R_H = np.sort(rng.uniform(1.0, 20.0, 2))
    lam_low, lam_high = rng.uniform(0.2, 5.0, 2)
    return Scenario(ProjectSpec(p_low, R_L, lam_low, lam_low),
                    ProjectSpec(p_high, R_H, lam_high, lam_high), 1.0)


def _flips_nearby(decide, scenario, grid, cells=2):
    """True when ``decide`` changes within ``cells`` grid cells of the priors."""
    base = decide(scenario)
    for axis, which in ((0, LOW), (1, HIGH)):
        p0 = scenario.project(which).prior_good
        h = local_cell(grid, axis, p0)
        for shift in np.linspace(-cells * h, cells * h, 9):
            p = min(max(p0 + shift, 1e-6), 1 - 1e-6)
            pl = p if which == LOW else scenario.low.prior_good
            ph = p if which == HIGH else scenario.high.prior_good
            try:
                if decide(scenario.with_priors(pl, ph)) != base:
                    return True
            except cf.ModelError:
                return True
    return False


@_timed
def criterion_4_balanced(n=50, seed=4, grid_n=400) -> CheckResult:
    """Balanced-news index against the oracle's initial exploration choice."""
    res = CheckResult("4 balanced index vs oracle")
    rng = np.random.default_rng(seed)
    matches = 0
    for _ in range(n):
        sc = random_balanced(rng)
        grid = value_iteration_two_risky(sc, grid_n=grid_n)
        oracle = HIGH if explores_high(grid.policy_map[grid.grid_spec["anchor"]]) else LOW

        def decide(s):
            first = cf.balanced_index(s, BeliefState.from_scenario(s)).explored_first
            return LOW if first == LOW else HIGH

        if decide(sc) == oracle:
            matches += 1
        elif not _flips_nearby(decide, sc, grid):
            res.fail(("mismatch away from tie", sc))
    if matches < n - 2:
        res.fail(("matches", matches))
    res.detail = f"{matches}/{n} match (need {n - 2})"
    return res


# -- 5 --------------------------------------------------------------------------

CYCLE_TRIPLE = ((0.3, 10.0, 1.0), (0.8, 5.0, 2.0), (0.9, 3.8, 7.0))
CYCLE_BOX = {"p": (0.05, 0.95), "R": (1.0, 12.0), "lam": (0.5, 8.0)}


def pairwise_cycle_check(triple_specs) -> list:
    """Explored project for each ordered pair (1,2), (2,3), (3,1)."""
    out = []
    for a, b in ((0, 1), (1, 2), (2, 0)):
        sa, sb = triple_specs[a], triple_specs[b]
        # reward ordering decides which slot is L; ties on reward favour slot H for a
        if sa.reward > sb.reward:
            sc, slot_a = Scenario(sb, sa, 1.0), HIGH
        else:
            sc, slot_a = Scenario(sa, sb, 1.0), LOW
        first = cf.balanced_index(sc, BeliefState.from_scenario(sc)).explored_first
        out.append((a + 1, b + 1, first == slot_a))
    return out


@_timed
def criterion_5_cycle(seed=5) -> CheckResult:
    """The three-project exploration cycle."""
    res = CheckResult("5 no-index cycle")
    given = tuple(ProjectSpec(p, R, lam, lam) for p, R, lam in CYCLE_TRIPLE)
    found = cf.find_no_index_cycle(CYCLE_BOX, seed=seed)
    for label, triple in (("given", given), ("found", found)):
        rows = [(s.prior_good, s.reward, s.rate_good) for s in triple]
        if not all(cf.cycle_inequalities(rows)):
            res.fail((label, "inequalities", cf.cycle_inequalities(rows)))
        for a, b, ok in pairwise_cycle_check(triple):
            if not ok:
                res.fail((label, "pair", a, b))
    res.detail = "given triple and searched triple verified pairwise"
    return res


# -- 6 --------------------------------------------------------------------------

def random_good_news(rng, pure=False) -> Scenario:
    p_low, p_high = rng.uniform(0.05, 0.95, 2)
    R_L, R_H = np.sort(rng.uniform(1.0, 20.0, 2))

    def rates():
        g = rng.uniform(0.5, 5.0)
        b = 0.0 if pure or rng.random() < 0.3 else rng.uniform(0.0, 0.8) * g
        return g, b

    (gl, bl), (gh, bh) = rates(), rates()
    return Scenario(ProjectSpec(p_low, R_L, gl, bl), ProjectSpec(p_high, R_H, gh, bh),
                    rng.uniform(0.5, 2.0))


def no_news_trajectory(policy, scenario, horizon):
    """Segments of the path on which no news ever arrives."""
    world = WorldDraw(True, True)
    traj = run_path(policy, world, scenario, (math.inf, math.inf), horizon)
    return traj.segments


def exploration_switches(segments) -> list:
    out = []
    for a, b in zip(segments, segments[1:]):
        if a[2].explored != b[2].explored:
            out.append(b[0])
    return out


def random_pure_good_news_wedge(rng) -> Scenario:
    while True:
        p_low, p_high = rng.uniform(0.05, 0.95, 2)
        R_L, R_H = np.sort(rng.uniform(1.0, 20.0, 2))
        if p_low * R_L < p_high * R_H < R_L:
            break
    gl, gh = rng.uniform(0.2, 5.0, 2)
    return Scenario(ProjectSpec(p_low, R_L, gl, 0.0), ProjectSpec(p_high, R_H, gh, 0.0),
                    rng.uniform(0.2, 2.0))


@_timed
def criterion_6_good_news(n=30, seed=6, grid_n=400) -> CheckResult:
    """Good-news exploration structure and the initial choice rule."""
    res = CheckResult("6 good-news structure")
    rng = np.random.default_rng(seed)
    n_switch = 0
    for _ in range(n):
        sc = random_good_news(rng)
        pol = good_news_policy(sc, oracle_grid=grid_n)
        segs = no_news_trajectory(pol, sc, 100.0 / sc.discount)
        sw = exploration_switches(segs)
        n_switch += len(sw)
        start = BeliefState.from_scenario(sc)
        x = HIGH if start.p_high * sc.high.reward >= start.p_low * sc.low.reward else LOW
        y = other(x)
        t_bar = cf.indifference_time_tbar(sc.project(x), start.p(y) * sc.project(y).reward, start, x)
        if len(sw) > 1:
            res.fail(("switches", len(sw), sc))
        if sw and sw[0] > t_bar + 1e-9:
            res.fail(("late switch", sw[0], t_bar, sc))
        if sc.project(x).rate_bad == 0.0 and sw:
            res.fail(("switch with pure good news", sc))
    agree = 0
    for _ in range(n):
        sc = random_pure_good_news_wedge(rng)
        grid = value_iteration_two_risky(sc, grid_n=grid_n)
        oracle_high = bool(explores_high(grid.policy_map[grid.grid_spec["anchor"]]))

        def decide(s):
            return cf.claim2_explore_high_first(s, BeliefState.from_scenario(s))

        if decide(sc) == oracle_high:
            agree += 1
        elif not _flips_nearby(decide, sc, grid):
            res.fail(("initial-choice mismatch", sc))
    res.detail = (f"{n} trajectories, {n_switch} switches in total; "
                  f"initial-choice rule agrees with oracle {agree}/{n}")
    return res


# -- 7 --------------------------------------------------------------------------

def random_bad_news(rng, low_favorable=False) -> Scenario:
    while True:
        p_low, p_high = rng.uniform(0.05, 0.95, 2)
        R_L, R_H = np.sort(rng.uniform(1.0, 20.0, 2))
        if not low_favorable or p_low * R_L > p_high * R_H:
            break

    def rates():
        b = rng.uniform(0.5, 5.0)
        g = 0.0 if rng.random() < 0.3 else rng.uniform(0.0, 0.8) * b
        return g, b

    (gl, bl), (gh, bh) = rates(), rates()
    return Scenario(ProjectSpec(p_low, R_L, gl, bl), ProjectSpec(p_high, R_H, gh, bh),
                    rng.uniform(0.5, 2.0))


def oracle_low_to_high_boundary(grid, scenario) -> float:
    """Upper end of the explore-L region along p_L at the anchor's p_H,
    restricted to where L is favorable.  1.0 when H is never explored there."""
    pL, pH = grid.axes
    j = grid.grid_spec["anchor"][1]
    fav = pH[j] * scenario.high.reward / scenario.low.reward
    row = np.array([explores_high(int(c)) for c in grid.policy_map[:, j]])
    idx = np.flatnonzero(pL > fav)
    if idx.size == 0:
        return math.nan
    flags = row[idx]
    if flags.all():
        return float(fav)
    if not flags[-1]:
        return 1.0
    k = np.flatnonzero(~flags)[-1]
    return float(0.5 * (pL[idx[k]] + pL[idx[k + 1]]))


@_timed
def criterion_7_bad_news(n=30, seed=7, grid_n=400) -> CheckResult:
    """Bad-news exploration structure and the explore-H threshold."""
    res = CheckResult("7 bad-news structure")
    rng = np.random.default_rng(seed)
    starts = {LOW: 0, HIGH: 0}
    for _ in range(n):
        sc = random_bad_news(rng)
        pol = bad_news_policy(sc, oracle_grid=grid_n)
        segs = no_news_trajectory(pol, sc, 100.0 / sc.discount)
        sw = exploration_switches(segs)
        first = segs[0][2].explored
        starts[first] += 1
        if first == LOW and (len(sw) != 1 or not math.isfinite(sw[0])):
            res.fail(("no finite switch from L", sw, sc))
        if first == HIGH and sw:
            res.fail(("switch from H", sw, sc))
    gaps = []
    for _ in range(n):
        sc = random_bad_news(rng, low_favorable=True)
        grid = value_iteration_two_risky(sc, grid_n=grid_n)
        boundary = oracle_low_to_high_boundary(grid, sc)
        p_hat = cf.hat_p_L(sc)
        # the rule explores H at once when p_hat lies below the favorability line
        fav = sc.high.prior_good * sc.high.reward / sc.low.reward
        target = max(p_hat, fav)
        cell = local_cell(grid, 0, min(max(target, 1e-6), 1 - 1e-6))
        gap = abs(boundary - target) / cell if cell > 0 else math.inf
        gaps.append(gap)
        if not gap <= 2.0:
            res.fail(("boundary", round(boundary, 4), round(p_hat, 4), round(gap, 1), sc))
    n_bad = sum(1 for g in gaps if not g <= 2.0)
    res.detail = (f"{n} trajectories (start L: {starts[LOW]}, start H: {starts[HIGH]}); "
                  f"threshold within 2 cells in {n - n_bad}/{n} scenarios")
    return res


# -- 8 --------------------------------------------------------------------------

def random_two_risky(rng, regime) -> Scenario:
    p_low, p_high = rng.uniform(0.1, 0.9, 2)
    R_L, R_H = np.sort(rng.uniform(2.0, 20.0, 2))

    def rates():
        hi_rate = rng.uniform(1.0, 5.0)
        lo_rate = rng.uniform(0.0, 0.5) * hi_rate
        if regime is GOOD:
            return hi_rate, lo_rate
        if regime is BAD:
            return lo_rate, hi_rate
        return hi_rate, hi_rate

    (gl, bl), (gh, bh) = rates(), rates()
    return Scenario(ProjectSpec(p_low, R_L, gl, bl), ProjectSpec(p_high, R_H, gh, bh), 1.0)


EXAMPLE2 = Scenario(ProjectSpec(0.9, 10.0, 0.0, 1.0), ProjectSpec(0.3, 15.0, 0.0, 1.0), 1.0, 1.0)


def check_time(scenario: Scenario) -> float:
    rates = [scenario.low.rate_good, scenario.low.rate_bad,
             scenario.high.rate_good, scenario.high.rate_bad]
    return 50.0 / max(scenario.discount, min(rates))


@_timed
def criterion_8_asymptotic(n_paths=10_000, per_regime=5, seed=8) -> CheckResult:
    """Long-run exploitation of the best project."""
    res = CheckResult("8 asymptotic optimality")
    rng = np.random.default_rng(seed)
    lowest = 1.0
    for regime in (GOOD, BAD, NewsRegime.BALANCED):
        for k in range(per_regime):
            sc = random_two_risky(rng, regime)
            rate = asymptotic_exploitation_rate(optimal_policy(sc), sc, check_time(sc), n_paths,
                                                master_seed=seed * 100 + k)
            lowest = min(lowest, rate)
            if rate < 0.95:
                res.fail((regime.value, rate, sc))
    classical = asymptotic_exploitation_rate(classical_policy(EXAMPLE2), EXAMPLE2,
                                             check_time(EXAMPLE2), n_paths, master_seed=seed)
    if classical >= 0.9:
        res.fail(("classical", classical))
    res.detail = f"lowest optimal rate {lowest:.4f} (need 0.95); classical {classical:.4f} (need < 0.9)"
    return res


# -- 9 --------------------------------------------------------------------------

@_timed
def criterion_9_properties(n_draws=1000, n_paths=100_000, seed=9) -> CheckResult:
    """Martingale, drift composition, branch continuity and cutoff monotonicity."""
    res = CheckResult("9 property suites")
    rng = np.random.default_rng(seed)
    # martingale under a fixed exploration schedule
    sc = Scenario(ProjectSpec(0.4, 10.0, 2.0, 0.5), ProjectSpec(0.6, 15.0, 1.5, 0.3), 1.0)
    pol = scheduled_policy(sc, HIGH, 0.7, name="fixed")
    for mode, prior in (("belief_high", 0.6), ("belief_low", 0.4)):
        vals = per_path_values(pol, sc, n_paths, 1.5, seed, mode)
        se = vals.std(ddof=1) / math.sqrt(n_paths)
        if abs(vals.mean() - prior) > 3.0 * se:
            res.fail(("martingale", mode, vals.mean(), prior, se))
    # drift composition
    worst = 0.0
    for _ in range(n_draws):
        p = rng.uniform(1e-3, 1 - 1e-3)
        g, b = rng.uniform(0, 5, 2)
        a = rng.uniform(0, 1)
        t1, t2 = rng.uniform(0, 3, 2)
        two = drift_posterior(drift_posterior(p, g, b, a, t1), g, b, a, t2)
        one = drift_posterior(p, g, b, a, t1 + t2)
        worst = max(worst, abs(two - one) / one)
    if worst > 1e-12:
        res.fail(("drift composition", worst))
    # branch continuity and cutoff monotonicity
    cont = 0.0
    for _ in range(n_draws):
        r, lam = rng.uniform(0.1, 5, 2)
        R_L = rng.uniform(1, 10)
        R_H = R_L * rng.uniform(1.05, 3)
        p_m = R_L / R_H
        p1 = cf.cutoff_pbar(1.0, r, lam, R_L, R_H)
        for regime in (GOOD, BAD):
            lo_side = cf.payoff_disentangled(p_m * (1 - 1e-15), r, lam, regime, R_L, R_H)
            hi_side = cf.payoff_disentangled(p_m, r, lam, regime, R_L, R_H)
            cont = max(cont, abs(lo_side - hi_side) / hi_side)
            left = cf.payoff_entangled(p1, r, lam, regime, R_L, R_H)
            right = cf.payoff_entangled(p1 * (1 + 1e-15), r, lam, regime, R_L, R_H)
            cont = max(cont, abs(left - right) / left)
        a1, a2 = np.sort(rng.uniform(0, 1, 2))
        c1 = cf.cutoff_pbar(a1, r, lam, R_L, R_H)
        c2 = cf.cutoff_pbar(a2, r, lam, R_L, R_H)
        if a2 > a1 and not c2 < c1:
            res.fail(("decreasing in alpha", a1, a2, c1, c2))
        if not cf.cutoff_pbar(a2, r * 1.1, lam, R_L, R_H) > c2:
            res.fail(("increasing in r", r))
        if not cf.cutoff_pbar(a2, r, lam, R_L, R_H * 1.1) < c2:
            res.fail(("decreasing in reward ratio", R_H))
        if a2 > 0 and not cf.cutoff_pbar(a2, r, lam * 1.1, R_L, R_H) < c2:
            res.fail(("decreasing in lambda", lam))
        if abs(cf.cutoff_pbar(0.0, r, lam * 1.7, R_L, R_H) - p_m) > 1e-12:
            res.fail(("independent of lambda at alpha 0", lam))
        if abs(cf.deviation_gain_rate(c2, a2, r, lam, R_L, R_H)) > 1e-10 * r * R_H:
            res.fail(("root of deviation gain", a2))
    if cont > 1e-12:
        res.fail(("branch continuity", cont))
    res.detail = f"drift composition {worst:.1e}, branch continuity {cont:.1e}, {n_draws} draws"
    return res


CRITERIA = {
    1: criterion_1_cutoff, 2: criterion_2_payoffs, 3: criterion_3_surface,
    4: criterion_4_balanced, 5: criterion_5_cycle, 6: criterion_6_good_news,
    7: criterion_7_bad_news, 8: criterion_8_asymptotic, 9: criterion_9_properties,
}

SUITES = {
    "formulas": (3, 9),
    "oracle": (1, 4, 6, 7),
    "montecarlo": (2,),
    "cycle": (5,),
    "asymptotic": (8,),
}


def run_suite(name: str, seed: int = None):
    """Run a named battery; ``seed`` overrides the per-criterion default seeds."""
    results = []
    for k in SUITES[name]:
        fn = CRITERIA[k]
        takes_seed = "seed" in inspect.signature(fn).parameters
        results.append(fn(seed=seed) if seed is not None and takes_seed else fn())
    return results
