"""Orthonormal Legendre polynomials and Gauss-Legendre quadrature on [-1, 1].

The working basis is phi_k(t) = sqrt(k + 1/2) * P_k(t) with P_k the classical
Legendre polynomial, so that integral(phi_k * phi_l) = delta_{kl} over [-1, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._kernels import legendre_table

__all__ = [
    "DOMAIN_TOL",
    "QuadratureRule",
    "eval_phi_row",
    "eval_phi_table",
    "gauss_rule",
    "composite_gauss_rule",
]

#: Points are accepted as inside [-1, 1] up to this absolute slack.
DOMAIN_TOL = 1e-12

_NEWTON_TOL = 1e-14
_NEWTON_MAX_ITER = 100


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights of a quadrature rule on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        nodes = np.ascontiguousarray(self.nodes, dtype=np.float64)
        weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        if nodes.ndim != 1 or weights.ndim != 1 or nodes.size != weights.size:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return self.nodes.size

    def integrate(self, values: np.ndarray) -> float:
        """Apply the rule to integrand values sampled at the nodes."""
        return float(self.weights @ np.asarray(values, dtype=np.float64))

    def validate(self) -> None:
        """Check the rule invariants, raising AssertionError on violation."""
        assert abs(self.weights.sum() - 2.0) < 1e-12, "weights must sum to 2"
        assert np.all(np.diff(self.nodes) > 0.0), "nodes must be strictly increasing"
        assert np.all(np.abs(self.nodes) < 1.0), "nodes must lie inside (-1, 1)"
        assert np.all(self.weights > 0.0), "weights must be positive"


def _check_in_domain(t: np.ndarray) -> None:
    bad = np.abs(t) > 1.0 + DOMAIN_TOL
    if np.any(bad):
        worst = float(np.asarray(t, dtype=np.float64).flat[int(np.argmax(np.abs(t)))])
        raise ValueError(f"point {worst!r} lies outside [-1, 1]")


def eval_phi_row(k_max: int, t: float) -> np.ndarray:
    """Values phi_0(t) .. phi_{k_max}(t) at a single point t in [-1, 1]."""
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    arr = np.asarray([t], dtype=np.float64)
    _check_in_domain(arr)
    return legendre_table(k_max, arr)[:, 0].copy()


def eval_phi_table(k_max: int, t: np.ndarray) -> np.ndarray:
    """Values phi_k(t_i), shape (k_max+1, len(t)), for points t in [-1, 1]."""
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    arr = np.ascontiguousarray(t, dtype=np.float64)
    _check_in_domain(arr)
    return legendre_table(k_max, arr)


def _legendre_value_and_derivative(G: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P_G(x) and P_G'(x) via the three-term recurrence."""
    p_prev = np.ones_like(x)
    p_cur = x.copy()
    for k in range(1, G):
        p_next = ((2 * k + 1) * x * p_cur - k * p_prev) / (k + 1)
        p_prev = p_cur
        p_cur = p_next
    # P_G'(x) = G * (x P_G(x) - P_{G-1}(x)) / (x^2 - 1); nodes never reach +-1
    deriv = G * (x * p_cur - p_prev) / (x * x - 1.0)
    return p_cur, deriv


@lru_cache(maxsize=None)
def gauss_rule(G: int) -> QuadratureRule:
    """G-point Gauss-Legendre rule on [-1, 1].

    Nodes are the roots of P_G, located from Chebyshev-angle initial guesses
    and polished by Newton iteration to 1e-14.
    """
    if G < 1:
        raise ValueError("G must be a positive integer")
    i = np.arange(G, dtype=np.float64)
    x = np.cos(np.pi * (i + 0.75) / (G + 0.5))
    for _ in range(_NEWTON_MAX_ITER):
        value, deriv = _legendre_value_and_derivative(G, x)
        dx = value / deriv
        x -= dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    else:
        raise RuntimeError(f"Newton iteration failed to converge for G={G}")
    _, deriv = _legendre_value_and_derivative(G, x)
    w = 2.0 / ((1.0 - x * x) * deriv * deriv)
    order = np.argsort(x)
    x = x[order]
    w = w[order]
    # the rule is symmetric; enforce it exactly
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(nodes=x, weights=w)


def composite_gauss_rule(G: int, edges: tuple[float, ...] = (-1.0, 1.0)) -> QuadratureRule:
    """G points of Gauss-Legendre quadrature on each panel between consecutive edges.

    ``edges`` must be strictly increasing and span exactly [-1, 1].  Splitting at
    interior breakpoints keeps Gauss accuracy for piecewise-smooth integrands.
    """
    edges_arr = np.asarray(edges, dtype=np.float64)
    if edges_arr.size < 2 or np.any(np.diff(edges_arr) <= 0.0):
        raise ValueError("edges must be strictly increasing")
    if abs(edges_arr[0] + 1.0) > DOMAIN_TOL or abs(edges_arr[-1] - 1.0) > DOMAIN_TOL:
        raise ValueError("edges must span [-1, 1]")
    base = gauss_rule(G)
    nodes = []
    weights = []
    for a, b in zip(edges_arr[:-1], edges_arr[1:]):
        half = 0.5 * (b - a)
        nodes.append(0.5 * (a + b) + half * base.nodes)
        weights.append(half * base.weights)
    return QuadratureRule(nodes=np.concatenate(nodes), weights=np.concatenate(weights))
