"""Domain types and Bayesian belief dynamics for two-armed Poisson bandits.

Projects are indexed by ``LOW`` and ``HIGH`` (the one with the larger reward
flow).  Each project is good or bad; exploring it produces conclusive news at a
Poisson rate that depends on its quality.  Absent news, the posterior drifts
deterministically, which we compute in log-odds space.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

LOW = "L"
HIGH = "H"
BOTH = "Both"
EITHER = "Either"

# only used inside drift computations, never written back into a BeliefState
_CLAMP = 1e-15


class ModelError(ValueError):
    """Raised when parameters violate a model assumption."""


class NewsRegime(enum.Enum):
    GOOD_NEWS = "good"
    BAD_NEWS = "bad"
    BALANCED = "balanced"


class Resolution(enum.Enum):
    UNKNOWN = "unknown"
    KNOWN_GOOD = "good"
    KNOWN_BAD = "bad"


@dataclass(frozen=True)
class ProjectSpec:
    prior_good: float
    reward: float
    rate_good: float
    rate_bad: float

    def __post_init__(self):
        for name in ("prior_good", "reward", "rate_good", "rate_bad"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not 0.0 < self.prior_good <= 1.0:
            raise ModelError(f"prior_good must lie in (0, 1], got {self.prior_good}")
        if not self.reward > 0.0:
            raise ModelError(f"reward must be positive, got {self.reward}")
        if self.rate_good < 0.0 or self.rate_bad < 0.0:
            raise ModelError("arrival rates must be non-negative")
        if max(self.rate_good, self.rate_bad) <= 0.0:
            raise ModelError("at least one arrival rate must be positive")

    @property
    def max_rate(self) -> float:
        return max(self.rate_good, self.rate_bad)

    @property
    def is_safe(self) -> bool:
        return self.prior_good == 1.0


@dataclass(frozen=True)
class Scenario:
    """Two projects, a discount rate and the entanglement fraction alpha.

    ``high.reward > low.reward`` is required, except that two risky projects
    may share a reward (the ex-ante identical case).
    """

    low: ProjectSpec
    high: ProjectSpec
    discount: float
    alpha: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "discount", float(self.discount))
        object.__setattr__(self, "alpha", float(self.alpha))
        if not self.discount > 0.0:
            raise ModelError(f"discount must be positive, got {self.discount}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ModelError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.high.reward < self.low.reward or (
            self.high.reward == self.low.reward and self.low.is_safe
        ):
            raise ModelError("high.reward must exceed low.reward")
        if self.high.is_safe:
            raise ModelError("project H must be risky (prior_good < 1)")
        _regime_sign(self.low, self.high)

    @property
    def safe_low(self) -> bool:
        return self.low.is_safe

    def project(self, which: str) -> ProjectSpec:
        return self.low if which == LOW else self.high

    def with_priors(self, p_low: float, p_high: float) -> "Scenario":
        return replace(
            self,
            low=replace(self.low, prior_good=p_low),
            high=replace(self.high, prior_good=p_high),
        )


@dataclass(frozen=True)
class BeliefState:
    p_low: float
    p_high: float
    resolved_low: Resolution = Resolution.UNKNOWN
    resolved_high: Resolution = Resolution.UNKNOWN

    def __post_init__(self):
        object.__setattr__(self, "p_low", float(self.p_low))
        object.__setattr__(self, "p_high", float(self.p_high))
        for p, res in ((self.p_low, self.resolved_low), (self.p_high, self.resolved_high)):
            if not 0.0 <= p <= 1.0:
                raise ModelError(f"posterior {p} outside [0, 1]")
            if res is Resolution.KNOWN_GOOD and p != 1.0:
                raise ModelError("KnownGood requires posterior 1")
            if res is Resolution.KNOWN_BAD and p != 0.0:
                raise ModelError("KnownBad requires posterior 0")

    @classmethod
    def from_scenario(cls, scenario: Scenario) -> "BeliefState":
        def res(spec):
            return Resolution.KNOWN_GOOD if spec.is_safe else Resolution.UNKNOWN

        return cls(scenario.low.prior_good, scenario.high.prior_good,
                   res(scenario.low), res(scenario.high))

    def p(self, which: str) -> float:
        return self.p_low if which == LOW else self.p_high

    def resolution(self, which: str) -> Resolution:
        return self.resolved_low if which == LOW else self.resolved_high

    def unknown(self, which: str) -> bool:
        return self.resolution(which) is Resolution.UNKNOWN

    def key(self) -> tuple:
        return (self.p_low, self.p_high, self.resolved_low, self.resolved_high)


@dataclass(frozen=True)
class Allocation:
    explore_low: float
    explore_high: float
    exploit_low: float
    exploit_high: float

    def check(self, alpha: float, tol: float = 1e-12) -> None:
        """Raise ModelError unless budgets and the alpha-constraint hold."""
        for v in (self.explore_low, self.explore_high, self.exploit_low, self.exploit_high):
            if v < -tol or v > 1.0 + tol:
                raise ModelError(f"allocation share {v} outside [0, 1]")
        if abs(self.explore_low + self.explore_high - 1.0) > tol:
            raise ModelError("exploration shares must sum to 1")
        if abs(self.exploit_low + self.exploit_high - 1.0) > tol:
            raise ModelError("exploitation shares must sum to 1")
        if self.exploit_low == 1.0 and self.explore_low < alpha - tol:
            raise ModelError("alpha-constraint violated on L")
        if self.exploit_high == 1.0 and self.explore_high < alpha - tol:
            raise ModelError("alpha-constraint violated on H")

    @property
    def explored(self) -> str:
        """The project receiving the larger exploration share (H on a split)."""
        return LOW if self.explore_low > self.explore_high else HIGH

    @property
    def exploited(self) -> str:
        return LOW if self.exploit_low > self.exploit_high else HIGH

    def attention(self, which: str) -> float:
        return self.explore_low if which == LOW else self.explore_high

    def investment(self, which: str) -> float:
        return self.exploit_low if which == LOW else self.exploit_high


def pure(explore: str, exploit: str) -> Allocation:
    el = 1.0 if explore == LOW else 0.0
    kl = 1.0 if exploit == LOW else 0.0
    return Allocation(el, 1.0 - el, kl, 1.0 - kl)


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def _regime_sign(low: ProjectSpec, high: ProjectSpec) -> int:
    s_low = _sign(low.rate_good - low.rate_bad)
    s_high = _sign(high.rate_good - high.rate_bad)
    if low.is_safe:
        # news on a known project is never observed, so only H sets the regime
        return s_high
    if s_low != s_high:
        raise ModelError("news structure must have the same sign on both projects")
    return s_high


def classify_regime(scenario: Scenario) -> NewsRegime:
    s = _regime_sign(scenario.low, scenario.high)
    if s > 0:
        return NewsRegime.GOOD_NEWS
    if s < 0:
        return NewsRegime.BAD_NEWS
    return NewsRegime.BALANCED


def is_pure_news(spec: ProjectSpec) -> bool:
    return min(spec.rate_good, spec.rate_bad) == 0.0


def log_odds(p: float) -> float:
    p = min(max(p, _CLAMP), 1.0 - _CLAMP)
    return math.log(p) - math.log1p(-p)


def from_log_odds(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def drift_posterior(p: float, rate_good: float, rate_bad: float,
                    attention: float, t: float) -> float:
    """Posterior that a project is good after ``t`` of no news.

    The log-odds move by ``(rate_bad - rate_good) * attention * t``.
    """
    if p <= 0.0 or p >= 1.0 or t == 0.0 or attention == 0.0 or rate_good == rate_bad:
        return p
    return from_log_odds(log_odds(p) + (rate_bad - rate_good) * attention * t)


def drift_time(p_from: float, p_to: float, rate_good: float, rate_bad: float,
               attention: float = 1.0) -> float:
    """Exploration time without news needed to move the posterior from
    ``p_from`` to ``p_to``; ``math.inf`` if the drift never gets there."""
    if p_from == p_to:
        return 0.0
    speed = (rate_bad - rate_good) * attention
    gap = log_odds(p_to) - log_odds(p_from)
    if speed == 0.0 or gap / speed < 0.0 or p_to in (0.0, 1.0):
        return math.inf
    return gap / speed


def jump_posterior(state: BeliefState, project: str, good: bool) -> BeliefState:
    if not state.unknown(project):
        raise ModelError(f"project {project} is already resolved")
    p, res = (1.0, Resolution.KNOWN_GOOD) if good else (0.0, Resolution.KNOWN_BAD)
    if project == LOW:
        return replace(state, p_low=p, resolved_low=res)
    return replace(state, p_high=p, resolved_high=res)


def expected_discount(r: float, lam: float) -> float:
    """E[exp(-r * tau)] for tau exponential with rate ``lam``."""
    if math.isinf(lam):
        return 1.0
    return lam / (r + lam)


def favorable(state: BeliefState, scenario: Scenario) -> str:
    v_low = state.p_low * scenario.low.reward
    v_high = state.p_high * scenario.high.reward
    if v_low > v_high:
        return LOW
    if v_high > v_low:
        return HIGH
    return BOTH


def other(which: str) -> str:
    return HIGH if which == LOW else LOW
