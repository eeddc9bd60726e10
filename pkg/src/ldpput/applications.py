"""Worked tasks: private hypothesis testing and a circular location family.

Both tasks are invariant under a transitive group (the full symmetric
group for hypothesis testing, rotations for the location family), so
their trade-offs reduce to a minimum over subset orbits with
closed-form per-orbit risks.  A grid-integration oracle validates the
location family's analytic risk without reusing its derivation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .channels import Channel, PrivacyLevel, as_level
from .decision import DecisionProblem, Prior, check_equalizer
from .groups import FiniteAlphabet, mask_to_positions, positions_to_mask
from .invariant import SubsetOrbit, ss_mechanism
from .rationals import as_fraction, format_fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def ht_problem(m: int, gamma) -> tuple[DecisionProblem, Prior]:
    """m-ary hypothesis testing: guess which letter the data favors.

    Under parameter i the letter distribution is uniform tilted toward
    letter i with strength gamma; the loss is 0-1 on guessing i.
    """
    gamma = as_fraction(gamma)
    if not 0 < gamma <= 1:
        raise ValueError("signal strength gamma must lie in (0, 1]")
    base = (1 - gamma) / m
    model = tuple(
        tuple(base + (gamma if x == i else _ZERO) for i in range(m))
        for x in range(m)
    )
    loss = tuple(
        tuple(_ZERO if a == i else _ONE for a in range(m))
        for i in range(m)
    )
    problem = DecisionProblem(parameters=tuple(range(m)),
                              input_alphabet=FiniteAlphabet(tuple(range(m))),
                              model=model,
                              actions=tuple(range(m)),
                              loss=loss)
    return problem, Prior.uniform(m)


def ht_put_closed_form(m: int, gamma, level) -> Fraction:
    """Optimal Bayes testing risk under the privacy constraint.

    The singleton orbit (randomized response) wins for every m, gamma,
    and t; its risk is 1 - (1-gamma)/m - gamma*t/(t+m-1).
    """
    gamma = as_fraction(gamma)
    t = as_level(level).t
    return 1 - (1 - gamma) / m - gamma * t / (t + m - 1)


def ht_subset_risk(m: int, gamma, level, k: int) -> Fraction:
    """Bayes testing risk of subset selection at size k (closed form)."""
    gamma = as_fraction(gamma)
    t = as_level(level).t
    return 1 - (1 - gamma) / m - gamma * t / (k * t + m - k)


def ht_minimax_equals_bayes(m: int, gamma, level) -> bool:
    """Equalizer certificate at the optimal testing channel.

    The Bayes rule of randomized response has the same risk under every
    hypothesis, so its Bayes and minimax risks coincide; this runs the
    exact check rather than trusting the symmetry argument.
    """
    problem, prior = ht_problem(m, gamma)
    channel = ss_mechanism(problem.input_alphabet, 1, level)
    return check_equalizer(problem, prior, channel, 0)


def z_magnitude(mask: int, m: int) -> float:
    """Magnitude of the subset's sum of m-th roots of unity."""
    total = sum(cmath.exp(2j * cmath.pi * x / m) for x in mask_to_positions(mask))
    return abs(total)


@dataclass(frozen=True)
class CardioidSpec:
    """Circular location family on m letters with signal strength gamma.

    Observations follow (1 + gamma*cos(2*pi*x/m - theta))/m for a
    uniform direction theta; actions are directions, with loss
    1 - cos(theta - a).
    """

    m: int
    gamma: Fraction
    level: PrivacyLevel

    def __post_init__(self):
        if self.m < 3:
            raise ValueError("the circular family needs at least 3 letters")
        if not 0 < self.gamma <= 1:
            raise ValueError("signal strength gamma must lie in (0, 1]")

    @classmethod
    def build(cls, m: int, gamma, level) -> "CardioidSpec":
        return cls(m=m, gamma=as_fraction(gamma), level=as_level(level))


def cardioid_orbit_risk(spec: CardioidSpec, mask: int) -> float:
    """Bayes risk of the pure rotation-orbit channel through this subset.

    The rotation-orbit size cancels, leaving
    1 - gamma*(t-1)*|Z|/(2*(k*t + m - k)) with |Z| the root-of-unity
    sum magnitude of the subset; orbits whose roots cancel (|Z| = 0)
    carry no directional information and sit at risk 1.
    """
    m = spec.m
    k = len(mask_to_positions(mask))
    t = spec.level.t
    amplitude = z_magnitude(mask, m)
    return 1.0 - float(spec.gamma) * (float(t) - 1.0) * amplitude \
        / (2.0 * (k * float(t) + m - k))


def cardioid_consecutive_maximizer(m: int, k: int) -> int:
    """The size-k subset maximizing |Z|: a consecutive run.

    For m <= 12 this is verified against every size-k subset rather
    than assumed.
    """
    if not 1 <= k <= m - 1:
        raise ValueError(f"subset size must be in 1..{m - 1}")
    best = positions_to_mask(range(k))
    if m <= 12:
        target = z_magnitude(best, m)
        for positions in combinations(range(m), k):
            if z_magnitude(positions_to_mask(positions), m) > target + 1e-9:
                raise AssertionError("a non-consecutive subset beat the run")
    return best


def cardioid_put_closed_form(spec: CardioidSpec) -> float:
    """Optimal location risk under the privacy constraint.

    Consecutive runs maximize |Z| at each size, giving
    1 - gamma*(t-1)/(2*sin(pi/m)) * max_k sin(pi*k/m)/(k*t + m - k).
    """
    m = spec.m
    t = float(spec.level.t)
    best = max(math.sin(math.pi * k / m) / (k * t + m - k) for k in range(1, m))
    return 1.0 - float(spec.gamma) * (t - 1.0) / (2.0 * math.sin(math.pi / m)) * best


def cardioid_bayes_risk(spec: CardioidSpec, channel: Channel) -> float:
    """Bayes location risk of an arbitrary channel on the same alphabet.

    The model's moments against 1, cos, sin reduce each output's best
    action to the phase of a complex sum, so the risk is a finite
    expression even though the parameter is continuous.
    """
    m = spec.m
    if channel.input_alphabet.size != m:
        raise ValueError("channel input size must match the family size")
    gamma = float(spec.gamma)
    m0 = [1.0 / m] * m
    mc = [gamma * math.cos(2.0 * math.pi * x / m) / (2.0 * m) for x in range(m)]
    ms = [gamma * math.sin(2.0 * math.pi * x / m) / (2.0 * m) for x in range(m)]
    total = 0.0
    for row in channel.rows:
        c0 = sum(float(v) * m0[x] for x, v in enumerate(row))
        cc = sum(float(v) * mc[x] for x, v in enumerate(row))
        cs = sum(float(v) * ms[x] for x, v in enumerate(row))
        total += c0 - math.hypot(cc, cs)
    return total


def cardioid_orbit_risk_numeric(spec: CardioidSpec, mask: int,
                                theta_grid: int = 10 ** 4,
                                action_grid: int = 10 ** 4) -> float:
    """Grid-integration oracle for the pure orbit channel's Bayes risk.

    Works from the raw model and loss: the posterior cost of each
    action is integrated over theta on a trapezoid grid (the integrand
    is a trigonometric polynomial, so the full-period trapezoid rule is
    extremely accurate), and the best action is found by scanning an
    action grid.  No step reuses the analytic risk formula.
    """
    m = spec.m
    t = float(spec.level.t)
    gamma = float(spec.gamma)
    k = len(mask_to_positions(mask))
    orbit_masks = _rotation_orbit(mask, m)
    weight = m / (len(orbit_masks) * (k * t + m - k))

    thetas = np.linspace(0.0, 2.0 * np.pi, theta_grid, endpoint=False)
    dtheta = 2.0 * np.pi / theta_grid
    # Per-letter moments of the model against 1, cos, sin; the loss
    # 1 - cos(theta - a) expands over exactly this basis.
    xs = np.arange(m)
    model = (1.0 + gamma * np.cos(2.0 * np.pi * xs[:, None] / m - thetas[None, :])) / m
    prior_density = 1.0 / (2.0 * np.pi)
    m0 = (model * prior_density).sum(axis=1) * dtheta
    mc = (model * np.cos(thetas)[None, :] * prior_density).sum(axis=1) * dtheta
    ms = (model * np.sin(thetas)[None, :] * prior_density).sum(axis=1) * dtheta

    actions = np.linspace(0.0, 2.0 * np.pi, action_grid, endpoint=False)
    total = 0.0
    for member in orbit_masks:
        srow = np.array([t if member >> x & 1 else 1.0 for x in range(m)])
        c0 = float((srow * m0).sum())
        cc = float((srow * mc).sum())
        cs = float((srow * ms).sum())
        costs = c0 - np.cos(actions) * cc - np.sin(actions) * cs
        total += weight * float(costs.min())
    return total


def _rotation_orbit(mask: int, m: int) -> list[int]:
    seen = set()
    current = mask
    while current not in seen:
        seen.add(current)
        current = _rotate_mask(current, m)
    return sorted(seen)


def _rotate_mask(mask: int, m: int) -> int:
    out = 0
    for x in mask_to_positions(mask):
        out |= 1 << ((x + 1) % m)
    return out


def cardioid_rule_risk(spec: CardioidSpec, mask: int, theta: float) -> float:
    """Risk at a fixed direction for the pure orbit channel and the
    point-the-subset rule a(y) = arg(Z_y).

    For informative orbits of size >= 3 this curve is flat in theta (an
    equalizer), which is how the location family's Bayes risk doubles
    as its worst-case risk.
    """
    m = spec.m
    t = float(spec.level.t)
    gamma = float(spec.gamma)
    k = len(mask_to_positions(mask))
    orbit_masks = _rotation_orbit(mask, m)
    weight = m / (len(orbit_masks) * (k * t + m - k))
    total = 0.0
    for member in orbit_masks:
        z = sum(cmath.exp(2j * cmath.pi * x / m) for x in mask_to_positions(member))
        mass = 0.0
        for x in range(m):
            p_x = (1.0 + gamma * math.cos(2.0 * math.pi * x / m - theta)) / m
            s_x = t if member >> x & 1 else 1.0
            mass += p_x * s_x
        if abs(z) > 1e-12:
            loss = 1.0 - math.cos(theta - cmath.phase(z))
        else:
            # Uninformative member: a uniform random action has average
            # loss exactly 1 at every direction.
            loss = 1.0
        total += weight * mass * loss
    return total


@dataclass(frozen=True)
class ExperimentResult:
    task: str
    m: int
    gamma: Fraction
    level: PrivacyLevel
    method: str
    value: Fraction | float
    winner: str
    certificate: str

    def csv_row(self) -> list[str]:
        value = format_fraction(self.value) if isinstance(self.value, Fraction) \
            else repr(self.value)
        return [self.task, str(self.m), format_fraction(self.gamma),
                format_fraction(self.level.t), self.method, value,
                self.winner, self.certificate]


CSV_HEADER = ["task", "m", "gamma", "t", "method", "value", "winner", "certificate"]
