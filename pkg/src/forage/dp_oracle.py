"""Value-function oracle on a belief grid.

The grid is uniform in log-odds.  Absent news the log-odds of the explored
project move at a constant speed, so every exploration step is sized to land
exactly on the neighbouring node; the step duration then depends on the
attention it uses.  Within a step all integrals (flow payoffs, news arrivals,
discounting) are evaluated in closed form, including a myopic exploitation
switch inside the step when exploitation does not constrain attention.  The
only approximation left is that exploration may change only at nodes.

Because drift is monotone, each node depends only on a neighbour that lies
further along the drift, so a single sweep in drift order solves the Bellman
equation.  A second sweep measures the residual reported as ``sup_change``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .model import (
    HIGH, LOW, ModelError, NewsRegime, Scenario, classify_regime, log_odds,
)

# policy codes: explore * 2 + exploit, 0 = L and 1 = H
EXPLORE_L_EXPLOIT_L = 0
EXPLORE_L_EXPLOIT_H = 1
EXPLORE_H_EXPLOIT_L = 2
EXPLORE_H_EXPLOIT_H = 3

TOLERANCE = 1e-10


def explored_of(code: int) -> str:
    return HIGH if code >= 2 else LOW


def exploited_of(code: int) -> str:
    return HIGH if code % 2 == 1 else LOW


def explores_high(code) -> bool:
    return code >= 2


def exploits_high(code) -> bool:
    return code % 2 == 1


class NonMonotonePolicy(ModelError):
    """The policy map crosses the predicate more than once along the axis."""


@dataclass
class ValueGrid:
    grid_spec: dict
    values: np.ndarray
    policy_map: np.ndarray
    iterations: int
    sup_change: float
    strips: dict = field(default_factory=dict)

    @property
    def axes(self) -> tuple:
        return self.grid_spec["axes"]

    def value_at(self, *ps: float) -> float:
        """Value interpolated linearly in log-odds between nodes."""
        if len(ps) == 1:
            z = self.grid_spec["internal_logits"]
            return float(_interp_logit(z, self.grid_spec["internal_values"], ps[0]))
        zl, zh = self.grid_spec["logits"]
        vals = self.values
        a = np.array([_interp_logit(zh, vals[i], ps[1]) for i in range(len(zl))])
        return float(_interp_logit(zl, a, ps[0]))

    def to_csv_rows(self):
        axes = self.axes
        if len(axes) == 1:
            for p, v, a in zip(axes[0], self.values, self.policy_map):
                yield (p, v, int(a))
        else:
            for i, pl in enumerate(axes[0]):
                for j, ph in enumerate(axes[1]):
                    yield (pl, ph, self.values[i, j], int(self.policy_map[i, j]))


def _interp_logit(z, v, p):
    if p <= 0.0 or p >= 1.0:
        raise ModelError("interpolation needs an interior posterior")
    return np.interp(log_odds(p), z, v)


# -- closed-form step integrals ------------------------------------------------

def _window(k, t0, t1):
    """Integral of exp(-k t) over [t0, t1]; k > 0 and t1 may be infinite."""
    k = np.asarray(k, dtype=float)
    t0 = np.asarray(t0, dtype=float)
    t1 = np.asarray(t1, dtype=float)
    with np.errstate(invalid="ignore"):
        span = t1 - t0
    head = np.exp(-k * t0) / k
    finite = np.isfinite(span)
    with np.errstate(invalid="ignore", over="ignore"):
        tail = np.where(finite, -np.expm1(-k * np.where(finite, span, 0.0)), 1.0)
    return np.where(span > 0.0, head * tail, 0.0)


def _crossing(P, Q, g, b):
    """Time at which the sign of P e^{-g t} - Q e^{-b t} changes (or 0 / inf).

    Returns (t_star, x_first): with x_first True the difference is positive
    before t_star, otherwise after it.
    """
    P, Q, g, b = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (P, Q, g, b)))
    t_star = np.zeros(P.shape)
    x_first = g >= b
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.log(P / Q)
        good = g > b
        # good-news drift: positive first, until t_star
        tg = np.where(P <= 0.0, 0.0, np.where(Q <= 0.0, np.inf, np.maximum(ratio / (g - b), 0.0)))
        # bad-news drift: positive after t_star
        tb = np.where(P <= 0.0, np.inf, np.where(Q <= 0.0, 0.0, np.maximum(-ratio / (b - g), 0.0)))
        # no drift: constant sign
        te = np.where(P >= Q, np.inf, 0.0)
    t_star = np.where(good, tg, np.where(g < b, tb, te))
    return t_star, x_first


def step_coefficients(p, A, Y, g, b, r, tau, mode, v_good, v_bad):
    """Closed-form terms of one exploration step on project x.

    Over a step of length ``tau`` with news intensities ``g`` (x good) and
    ``b`` (x bad), the flow-normalized value is ``c + k * V_next``.  ``A`` is
    the expected flow of exploiting x (p_x R_x) and ``Y`` that of exploiting
    the other project.  ``mode`` is "x", "y" or "max" (myopic switching
    inside the step).  ``v_good`` and ``v_bad`` are values after news on x.
    """
    p, A, Y, g, b, tau, v_good, v_bad = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (p, A, Y, g, b, tau, v_good, v_bad)))
    kg, kb = r + g, r + b
    zero = np.zeros(p.shape)

    def flow_x(t0, t1):
        return r * A * _window(kg, t0, t1)

    def flow_y(t0, t1):
        return r * Y * (p * _window(kg, t0, t1) + (1.0 - p) * _window(kb, t0, t1))

    if mode == "x":
        flow = flow_x(zero, tau)
    elif mode == "y":
        flow = flow_y(zero, tau)
    else:
        t_star, x_first = _crossing(A - Y * p, Y * (1.0 - p), g, b)
        t_star = np.minimum(t_star, tau)
        first = np.where(x_first, flow_x(zero, t_star), flow_y(zero, t_star))
        second = np.where(x_first, flow_y(t_star, tau), flow_x(t_star, tau))
        flow = first + second
    news = p * g * _window(kg, zero, tau) * v_good + (1.0 - p) * b * _window(kb, zero, tau) * v_bad
    with np.errstate(invalid="ignore"):
        k = np.where(np.isfinite(tau),
                     p * np.exp(-kg * np.where(np.isfinite(tau), tau, 0.0))
                     + (1.0 - p) * np.exp(-kb * np.where(np.isfinite(tau), tau, 0.0)),
                     0.0)
    return flow + news, k


def safe_value_disentangled(p, scenario: Scenario):
    """Exact value with a safe L and alpha = 0 for any news structure.

    H is explored with full attention forever and exploitation is myopic, so
    the whole value is a single infinite-horizon step.
    """
    hi = scenario.high
    p = np.asarray(p, dtype=float)
    c, _ = step_coefficients(p, p * hi.reward, scenario.low.reward, hi.rate_good, hi.rate_bad,
                             scenario.discount, np.inf, "max", hi.reward, scenario.low.reward)
    return c


# -- sweeps ---------------------------------------------------------------------

@njit(cache=True)
def _sweep_1d(c, k, boundary, direction):
    """V[i] = max_a c[a, i] + k[a, i] * V[next]; next = i + direction."""
    n = c.shape[1]
    n_act = c.shape[0]
    V = np.empty(n)
    act = np.empty(n, dtype=np.int64)
    if direction < 0:
        order = np.arange(n)
    else:
        order = np.arange(n - 1, -1, -1)
    for idx in range(n):
        i = order[idx]
        j = i + direction
        if direction == 0:
            best = -np.inf
            best_a = 0
            for a in range(n_act):
                val = c[a, i] / (1.0 - k[a, i])
                if val > best:
                    best = val
                    best_a = a
        else:
            nxt = boundary if (j < 0 or j >= n) else V[j]
            best = -np.inf
            best_a = 0
            for a in range(n_act):
                val = c[a, i] + k[a, i] * nxt
                if val > best:
                    best = val
                    best_a = a
        V[i] = best
        act[i] = best_a
    return V, act


@njit(cache=True)
def _residual_1d(V, c, k, boundary, direction):
    n = V.shape[0]
    worst = 0.0
    for i in range(n):
        j = i + direction
        if direction == 0:
            nxt = V[i]
        else:
            nxt = boundary if (j < 0 or j >= n) else V[j]
        best = -np.inf
        for a in range(c.shape[0]):
            val = c[a, i] + k[a, i] * nxt
            if val > best:
                best = val
        d = abs(best - V[i])
        if d > worst:
            worst = d
    return worst


@njit(cache=True)
def _sweep_2d(cL, kL, cH, kH, edgeL, edgeH, direction):
    """Two-action sweep on an (n_L, n_H) grid.

    Exploring L moves along axis 0, exploring H along axis 1, both by
    ``direction``.  edgeL[j] is the value when the L move leaves the grid at
    column j, edgeH[i] likewise for H.  Returns values and 0/1 for explore H.
    """
    nL, nH = cL.shape
    V = np.empty((nL, nH))
    act = np.empty((nL, nH), dtype=np.int64)
    for ii in range(nL):
        i = ii if direction <= 0 else nL - 1 - ii
        for jj in range(nH):
            j = jj if direction <= 0 else nH - 1 - jj
            if direction == 0:
                vl = cL[i, j] / (1.0 - kL[i, j])
                vh = cH[i, j] / (1.0 - kH[i, j])
            else:
                i2 = i + direction
                j2 = j + direction
                nl = edgeL[j] if (i2 < 0 or i2 >= nL) else V[i2, j]
                nh = edgeH[i] if (j2 < 0 or j2 >= nH) else V[i, j2]
                vl = cL[i, j] + kL[i, j] * nl
                vh = cH[i, j] + kH[i, j] * nh
            if vh >= vl:
                V[i, j] = vh
                act[i, j] = 1
            else:
                V[i, j] = vl
                act[i, j] = 0
    return V, act


@njit(cache=True)
def _residual_2d(V, cL, kL, cH, kH, edgeL, edgeH, direction):
    nL, nH = V.shape
    worst = 0.0
    for i in range(nL):
        for j in range(nH):
            if direction == 0:
                nl = V[i, j]
                nh = V[i, j]
            else:
                i2 = i + direction
                j2 = j + direction
                nl = edgeL[j] if (i2 < 0 or i2 >= nL) else V[i2, j]
                nh = edgeH[i] if (j2 < 0 or j2 >= nH) else V[i, j2]
            best = max(cL[i, j] + kL[i, j] * nl, cH[i, j] + kH[i, j] * nh)
            d = abs(best - V[i, j])
            if d > worst:
                worst = d
    return worst


def _check_step(scenario: Scenario, delta: float) -> None:
    rates = [scenario.discount, scenario.high.max_rate]
    if not scenario.low.is_safe:
        rates.append(scenario.low.max_rate)
    if not delta > 0.0:
        raise ModelError("the time step must be positive")
    worst = max(rates) * delta
    if worst >= 0.1:
        raise ModelError(f"time step too coarse: largest per-step event probability {worst:.3g} >= 0.1")


def _drift_direction(regime: NewsRegime) -> int:
    return {NewsRegime.GOOD_NEWS: -1, NewsRegime.BAD_NEWS: 1, NewsRegime.BALANCED: 0}[regime]


# -- safe project L ------------------------------------------------------------

SAFE_LOGIT_SPAN = 20.0


def value_iteration_safe(scenario: Scenario, delta: float = None, grid_n: int = 400) -> ValueGrid:
    """Oracle for a safe L and a risky H at any alpha.

    Each step either exploits H (full attention on H) or exploits L (attention
    1 - alpha on H).  Exploiting H for one step takes ``delta``.  Results are
    resampled onto ``grid_n + 1`` equally spaced posteriors in [0, 1].
    """
    if not scenario.safe_low:
        raise ModelError("value_iteration_safe requires a safe project L")
    hi = scenario.high
    r, alpha = scenario.discount, scenario.alpha
    R_L, R_H = scenario.low.reward, hi.reward
    if delta is None:
        delta = 1e-3 / max(r, hi.max_rate)
    _check_step(scenario, delta)
    regime = classify_regime(scenario)
    direction = _drift_direction(regime)
    speed = abs(hi.rate_bad - hi.rate_good)

    if direction == 0:
        p = np.linspace(0.0, 1.0, grid_n + 1)[1:-1]
        z = np.array([log_odds(x) for x in p])
    else:
        h = speed * delta
        m = int(math.ceil(SAFE_LOGIT_SPAN / h))
        z = np.arange(-m, m + 1) * h
        p = 1.0 / (1.0 + np.exp(-z))

    # action 0: exploit L with attention 1 - alpha; action 1: exploit H
    tau_h = delta
    cH, kH = step_coefficients(p, p * R_H, R_L, hi.rate_good, hi.rate_bad, r, tau_h,
                               "max" if alpha == 0.0 else "x", R_H, R_L)
    att = 1.0 - alpha
    if att > 0.0:
        tau_l = delta / att
        cL, kL = step_coefficients(p, p * R_H, R_L, att * hi.rate_good, att * hi.rate_bad, r,
                                   tau_l, "y", R_H, R_L)
    else:
        # no information while exploiting L: stopping at the safe value
        cL, kL = np.full(p.shape, R_L), np.zeros(p.shape)
    c = np.vstack([cL, cH])
    k = np.vstack([kL, kH])
    boundary = R_L if direction < 0 else R_H
    V, act = _sweep_1d(c, k, boundary, direction)
    sup_change = _residual_1d(V, c, k, boundary, direction)

    out_p = np.linspace(0.0, 1.0, grid_n + 1)
    out_v = np.empty(grid_n + 1)
    out_a = np.empty(grid_n + 1, dtype=np.int64)
    out_v[0], out_v[-1] = R_L, R_H
    out_a[0], out_a[-1] = EXPLORE_H_EXPLOIT_L, EXPLORE_H_EXPLOIT_H
    inner = out_p[1:-1]
    zi = np.log(inner) - np.log1p(-inner)
    out_v[1:-1] = np.interp(zi, z, V)
    nearest = np.clip(np.searchsorted(z, zi), 1, len(z) - 1)
    nearest = np.where(np.abs(z[nearest - 1] - zi) <= np.abs(z[nearest] - zi), nearest - 1, nearest)
    out_a[1:-1] = np.where(act[nearest] == 1, EXPLORE_H_EXPLOIT_H, EXPLORE_H_EXPLOIT_L)
    if alpha == 0.0:
        # exploitation is myopic at the node itself
        out_a[1:-1] = np.where(inner * R_H >= R_L, EXPLORE_H_EXPLOIT_H, EXPLORE_H_EXPLOIT_L)

    spec = {"axes": (out_p,), "delta": delta, "grid_n": grid_n, "kind": "safe",
            "internal_logits": z, "internal_values": V, "internal_actions": act,
            "regime": regime}
    return ValueGrid(spec, out_v, out_a, iterations=2, sup_change=float(sup_change))


# -- two risky projects ---------------------------------------------------------

TWO_RISKY_LOGIT_SPAN = 12.0


def _axis(anchor_p: float, h: float, span: float) -> np.ndarray:
    z0 = log_odds(anchor_p)
    lo = int(math.floor((-span - z0) / h))
    hi = int(math.ceil((span - z0) / h))
    return z0 + np.arange(lo, hi + 1) * h


def value_iteration_two_risky(scenario: Scenario, delta: float = None, grid_n: int = 400,
                              span: float = TWO_RISKY_LOGIT_SPAN) -> ValueGrid:
    """Oracle for two risky projects with full disentanglement.

    The grid has about ``grid_n`` nodes per axis spanning log-odds
    [-span, span], shifted so that the scenario's priors sit on a node.
    Values after conclusive news are exact closed-form continuation values.
    """
    if scenario.alpha != 0.0:
        raise ModelError("the two-risky oracle covers alpha = 0 only")
    lo, hi = scenario.low, scenario.high
    if lo.is_safe or not (0.0 < lo.prior_good < 1.0 and 0.0 < hi.prior_good < 1.0):
        raise ModelError("both priors must lie strictly inside (0, 1)")
    r = scenario.discount
    if delta is None:
        delta = 1e-3 / max(r, lo.max_rate, hi.max_rate)
    _check_step(scenario, delta)
    regime = classify_regime(scenario)
    direction = _drift_direction(regime)

    h = 2.0 * span / grid_n
    zL = _axis(lo.prior_good, h, span)
    zH = _axis(hi.prior_good, h, span)
    pL = 1.0 / (1.0 + np.exp(-zL))
    pH = 1.0 / (1.0 + np.exp(-zH))
    PL, PH = np.meshgrid(pL, pH, indexing="ij")
    vL, vH = PL * lo.reward, PH * hi.reward

    if direction == 0:
        tau_l = tau_h = 1.0 / (r + max(lo.max_rate, hi.max_rate))
    else:
        tau_l = h / abs(lo.rate_bad - lo.rate_good)
        tau_h = h / abs(hi.rate_bad - hi.rate_good)

    w_high = safe_value_disentangled(pH, scenario)      # L known good
    cL, kL = step_coefficients(PL, vL, vH, lo.rate_good, lo.rate_bad, r, tau_l, "max",
                               np.broadcast_to(w_high, PL.shape), vH)
    cH, kH = step_coefficients(PH, vH, vL, hi.rate_good, hi.rate_bad, r, tau_h, "max",
                               hi.reward, vL)
    if direction < 0:
        edgeL, edgeH = pH * hi.reward, pL * lo.reward
    else:
        edgeL, edgeH = w_high, np.full(len(pL), hi.reward)
    V, act = _sweep_2d(cL, kL, cH, kH, edgeL, edgeH, direction)
    sup_change = _residual_2d(V, cL, kL, cH, kH, edgeL, edgeH, direction)

    exploit_h = (vH >= vL).astype(np.int64)
    policy = act * 2 + exploit_h
    anchor = (int(np.argmin(np.abs(zL - log_odds(lo.prior_good)))),
              int(np.argmin(np.abs(zH - log_odds(hi.prior_good)))))
    spec = {"axes": (pL, pH), "logits": (zL, zH), "delta": delta, "grid_n": grid_n,
            "kind": "two_risky", "step_times": (tau_l, tau_h), "anchor": anchor,
            "regime": regime, "direction": direction}
    strips = {"low_good": w_high, "low_bad": pH * hi.reward,
              "high_good": np.full(len(pL), hi.reward), "high_bad": pL * lo.reward}
    return ValueGrid(spec, V, policy, iterations=2, sup_change=float(sup_change), strips=strips)


# -- threshold extraction and no-news paths --------------------------------------

def extract_threshold(grid: ValueGrid, axis: int = 0, predicate=exploits_high,
                      at: int = None, within: tuple = None) -> float:
    """Posterior where ``predicate(action)`` flips along ``axis``.

    For two-dimensional grids the other coordinate is fixed at node ``at``
    (default: the anchor).  ``within`` restricts the scan to a posterior
    range.  Returns the midpoint of the bracketing nodes.
    """
    p = grid.axes[axis]
    codes = grid.policy_map
    if codes.ndim == 2:
        if at is None:
            at = grid.grid_spec["anchor"][1 - axis]
        codes = codes[:, at] if axis == 0 else codes[at, :]
    flags = np.array([bool(predicate(int(c))) for c in codes])
    if within is not None:
        keep = (p >= within[0]) & (p <= within[1])
        p, flags = p[keep], flags[keep]
    flips = np.flatnonzero(flags[1:] != flags[:-1])
    if len(flips) == 0:
        raise NonMonotonePolicy("predicate never changes along the axis")
    if len(flips) > 1:
        raise NonMonotonePolicy(f"predicate changes {len(flips)} times along the axis")
    i = flips[0]
    return 0.5 * (p[i] + p[i + 1])


def local_cell(grid: ValueGrid, axis: int, p: float) -> float:
    """Width of the grid cell containing posterior ``p``."""
    ax = grid.axes[axis]
    i = int(np.clip(np.searchsorted(ax, p), 1, len(ax) - 1))
    return float(ax[i] - ax[i - 1])


@dataclass
class OraclePath:
    times: list
    codes: list
    p_low: list
    p_high: list

    @property
    def initial_explored(self) -> str:
        return explored_of(self.codes[0])

    def first_switch(self) -> float:
        """No-news time of the first change in the explored project."""
        first = explores_high(self.codes[0])
        for t, c in zip(self.times, self.codes):
            if explores_high(c) != first:
                return t
        return math.inf

    def switches(self) -> list:
        out = []
        for k in range(1, len(self.codes)):
            if explores_high(self.codes[k]) != explores_high(self.codes[k - 1]):
                out.append(self.times[k])
        return out


def oracle_no_news_path(grid: ValueGrid, start: tuple = None, max_steps: int = 10**6) -> OraclePath:
    """Follow the policy map from ``start`` (node indices) while no news arrives."""
    if grid.grid_spec["kind"] != "two_risky":
        raise ModelError("no-news paths are defined on two-risky grids")
    i, j = start if start is not None else grid.grid_spec["anchor"]
    d = grid.grid_spec["direction"]
    tau_l, tau_h = grid.grid_spec["step_times"]
    pL, pH = grid.axes
    nL, nH = grid.policy_map.shape
    t = 0.0
    path = OraclePath([], [], [], [])
    for _ in range(max_steps):
        code = int(grid.policy_map[i, j])
        path.times.append(t)
        path.codes.append(code)
        path.p_low.append(float(pL[i]))
        path.p_high.append(float(pH[j]))
        if d == 0:
            break
        if explores_high(code):
            j += d
            t += tau_h
        else:
            i += d
            t += tau_l
        if not (0 <= i < nL and 0 <= j < nH):
            break
    return path


__all__ = [
    "ValueGrid", "value_iteration_safe", "value_iteration_two_risky", "extract_threshold",
    "oracle_no_news_path", "OraclePath", "step_coefficients", "safe_value_disentangled",
    "explores_high", "exploits_high", "explored_of", "exploited_of", "local_cell",
    "NonMonotonePolicy", "EXPLORE_L_EXPLOIT_L", "EXPLORE_L_EXPLOIT_H",
    "EXPLORE_H_EXPLOIT_L", "EXPLORE_H_EXPLOIT_H",
]
