"""The truncated-series differentiation method and its parameter-choice rule.

Given perturbed coefficients <f_delta, phi_k phi_j> on an information domain
(hyperbolic cross or box), the method differentiates the truncated series
exactly:

    D_n f_delta(t, tau) = sum_{(k,j) in domain} <f_delta, phi_{k,j}>
                          phi_k^(r)(t) phi_j^(r)(tau).

The truncation level n acts as the regularization parameter: it is either
supplied directly or chosen from the noise level delta by

    n = ceil(constant * (delta^-1 * ln(1/delta)^(1/p - 1/s))^(1/(mu - 1/p + 1/s)))

with a floor of r + 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import series_eval_grid, series_eval_points
from .basis import DOMAIN_TOL
from .coeffs import CoeffField
from .derivative import differentiate_axis
from .index import IndexDomain

__all__ = [
    "ConfigError",
    "MethodConfig",
    "LegendreSeries2D",
    "ApproxDerivative",
    "choose_n",
    "run",
    "evaluate",
]


class ConfigError(ValueError):
    """A parameter combination violates the method's validity constraints."""


@dataclass(frozen=True)
class MethodConfig:
    """Everything needed to run the method once.

    The smoothness-vs-order constraint mu > 2r - 1/s + 1/2 is required (it is
    the hypothesis under which the square-mean error bound holds); the
    stronger uniform-norm hypothesis mu > 2r - 1/s + 3/2 is advisory and
    exposed as :attr:`satisfies_sup_hypothesis`.  delta = 0 is allowed only
    together with ``n_override`` (nothing else consumes delta then).
    """

    r: int
    mu: float
    delta: float
    s: float = 2.0
    p: float = 2.0
    n_override: int | None = None
    rule_constant: float = 1.0
    domain_shape: str = "cross"

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ConfigError(f"derivative order r={self.r} must be >= 1")
        if not (1.0 <= self.s) or math.isinf(self.s):
            raise ConfigError(f"s={self.s} must satisfy 1 <= s < inf")
        if not (1.0 <= self.p):
            raise ConfigError(f"p={self.p} must satisfy 1 <= p <= inf")
        if self.domain_shape not in ("cross", "box"):
            raise ConfigError(f"domain shape must be 'cross' or 'box', got {self.domain_shape!r}")
        if self.rule_constant <= 0.0:
            raise ConfigError(f"rule constant {self.rule_constant} must be positive")
        if self.n_override is not None:
            if self.n_override <= self.r:
                raise ConfigError(
                    f"n={self.n_override} must exceed r={self.r}"
                )
            if not (0.0 <= self.delta < 1.0):
                raise ConfigError(f"delta={self.delta} must lie in [0, 1)")
        elif not (0.0 < self.delta < 1.0):
            raise ConfigError(
                f"delta={self.delta} must lie in (0, 1) when n is not given"
            )
        bound = 2.0 * self.r - 1.0 / self.s + 0.5
        if not (self.mu > bound):
            raise ConfigError(
                f"smoothness mu={self.mu} violates mu > 2r - 1/s + 1/2 = {bound}"
            )

    @property
    def satisfies_sup_hypothesis(self) -> bool:
        """Whether mu > 2r - 1/s + 3/2, the uniform-norm validity condition."""
        return self.mu > 2.0 * self.r - 1.0 / self.s + 1.5

    def resolve_n(self) -> int:
        """The truncation level: ``n_override`` if present, else the rule."""
        if self.n_override is not None:
            return self.n_override
        return choose_n(
            self.delta, self.mu, p=self.p, s=self.s,
            rule_constant=self.rule_constant, r=self.r,
        )

    def domain(self) -> IndexDomain:
        """The information domain at the resolved truncation level."""
        n = self.resolve_n()
        if self.domain_shape == "cross":
            return IndexDomain.cross(self.r, n)
        return IndexDomain.box(self.r, n)


@dataclass(frozen=True)
class LegendreSeries2D:
    """A coefficient field with evaluation semantics sum c_{k,j} phi_k(t) phi_j(tau)."""

    field: CoeffField

    def _dense(self) -> np.ndarray:
        return self.field.to_dense()

    def eval_grid(self, t: np.ndarray, tau: np.ndarray) -> np.ndarray:
        """Series values on the tensor grid t x tau, shape (len(t), len(tau))."""
        t = np.ascontiguousarray(t, dtype=np.float64)
        tau = np.ascontiguousarray(tau, dtype=np.float64)
        _check_points(t, tau)
        return series_eval_grid(self._dense(), t, tau)

    def eval_points(self, t: np.ndarray, tau: np.ndarray) -> np.ndarray:
        """Series values at paired points (t_i, tau_i)."""
        t = np.ascontiguousarray(t, dtype=np.float64)
        tau = np.ascontiguousarray(tau, dtype=np.float64)
        if t.shape != tau.shape:
            raise ValueError("t and tau must have identical shapes")
        _check_points(t, tau)
        return series_eval_points(self._dense(), t, tau)


def _check_points(t: np.ndarray, tau: np.ndarray) -> None:
    if (t.size and np.max(np.abs(t)) > 1.0 + DOMAIN_TOL) or (
        tau.size and np.max(np.abs(tau)) > 1.0 + DOMAIN_TOL
    ):
        raise ValueError("evaluation points must lie in [-1, 1]^2")


@dataclass(frozen=True)
class ApproxDerivative:
    """The method's output: a low-degree series approximating f^(r,r)."""

    series: LegendreSeries2D
    config: MethodConfig
    n_used: int
    information_count: int


def choose_n(
    delta: float,
    mu: float,
    p: float = 2.0,
    s: float = 2.0,
    rule_constant: float = 1.0,
    r: int = 1,
) -> int:
    """Truncation level from the noise level.

    n = ceil(rule_constant * (delta^-1 * ln(1/delta)^(1/p - 1/s))
             ^ (1 / (mu - 1/p + 1/s))), floored at r + 2.

    When p = s the logarithmic factor drops out and n scales as delta^(-1/mu).
    """
    if not (0.0 < delta < 1.0):
        raise ConfigError(f"delta={delta} must lie in (0, 1)")
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    exponent_denom = mu - inv_p + 1.0 / s
    if exponent_denom <= 0.0:
        raise ConfigError(
            f"mu - 1/p + 1/s = {exponent_denom} must be positive"
        )
    log_term = math.log(1.0 / delta)
    raw = rule_constant * (
        (1.0 / delta) * log_term ** (inv_p - 1.0 / s)
    ) ** (1.0 / exponent_denom)
    nearest = round(raw)
    if abs(raw - nearest) <= 1e-9 * max(1.0, abs(raw)):
        raw = float(nearest)
    return max(int(math.ceil(raw)), r + 2)


def run(field_perturbed: CoeffField, config: MethodConfig) -> ApproxDerivative:
    """Run the method: mask to the domain, then differentiate exactly.

    Entries of ``field_perturbed`` outside the domain are ignored; domain
    pairs missing from the field count as exact zeros.
    """
    domain = config.domain()
    n = config.resolve_n()
    deg_k, deg_j = domain.max_degree()
    dense = np.zeros((deg_k + 1, deg_j + 1), dtype=np.float64)
    for k, j in domain.members():
        dense[k, j] = field_perturbed.value(k, j)
    masked = CoeffField.from_dense(dense)
    derived = differentiate_axis(masked, "t", config.r)
    derived = differentiate_axis(derived, "tau", config.r)
    return ApproxDerivative(
        series=LegendreSeries2D(field=derived),
        config=config,
        n_used=n,
        information_count=domain.cardinality(),
    )


def evaluate(approx: ApproxDerivative, points) -> np.ndarray:
    """Values of the approximation at a sequence of (t, tau) points in Q."""
    pts = np.asarray(list(points), dtype=np.float64)
    if pts.size == 0:
        return np.zeros(0, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be a sequence of (t, tau) pairs")
    return approx.series.eval_points(pts[:, 0], pts[:, 1])
