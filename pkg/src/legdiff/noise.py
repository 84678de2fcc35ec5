"""Deterministic perturbation of coefficient fields.

Two mechanisms are provided.  ``gaussian`` adds an independent draw
delta * N(0, 1) to every stored entry — the raw scheme used by the bundled
experiment presets.  ``projected`` draws the same Gaussian vector and then
rescales it so its l_p norm equals delta exactly, matching the formal
noise model ||xi||_{l_p} <= delta with equality.

Draws come from a 64-bit counter-based generator (Philox) pushed through an
explicit Box-Muller transform, consumed in the lexicographic entry order of
the field, so results are reproducible bit-for-bit given the seed and are
independent of map iteration order or thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coeffs import CoeffField

__all__ = ["NoiseSpec", "standard_normals", "noise_vector", "perturb"]

_KINDS = ("none", "gaussian", "projected")


@dataclass(frozen=True)
class NoiseSpec:
    """How a coefficient field is perturbed.

    ``kind`` is "none", "gaussian" (raw delta-scaled normals), or "projected"
    (Gaussian vector rescaled to l_p norm exactly delta).  The noise level
    must satisfy 0 < delta < 1 whenever kind is not "none"; p may be
    ``math.inf``.
    """

    kind: str
    delta: float = 0.0
    p: float = 2.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}; expected {_KINDS}")
        if self.kind != "none" and not (0.0 < self.delta < 1.0):
            raise ValueError(f"noise level delta={self.delta} must lie in (0, 1)")
        if not (1.0 <= self.p):
            raise ValueError(f"p={self.p} must satisfy 1 <= p <= inf")


def standard_normals(seed: int, count: int) -> np.ndarray:
    """``count`` standard normal draws from Philox(seed) via Box-Muller."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count == 0:
        return np.zeros(0, dtype=np.float64)
    gen = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    half = (count + 1) // 2
    u1 = 1.0 - gen.random(half)  # in (0, 1], keeps the log finite
    u2 = gen.random(half)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    out = np.empty(2 * half, dtype=np.float64)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:count]


def _lp_norm(x: np.ndarray, p: float) -> float:
    if math.isinf(p):
        return float(np.max(np.abs(x)))
    return float(np.sum(np.abs(x) ** p) ** (1.0 / p))


def noise_vector(field: CoeffField, spec: NoiseSpec) -> np.ndarray:
    """The additive noise ``perturb`` would inject, in lexicographic entry order.

    Empty for kind "none" or an empty field.  Exposed separately so the noise
    model itself can be verified without reconstructing it by subtraction
    (which would be polluted by rounding when entries dwarf delta).
    """
    if spec.kind == "none":
        return np.zeros(0, dtype=np.float64)
    count = len(field)
    if count == 0:
        return np.zeros(0, dtype=np.float64)
    draws = standard_normals(spec.seed, count)
    if spec.kind == "gaussian":
        return spec.delta * draws
    norm = _lp_norm(draws, spec.p)
    if norm == 0.0:
        raise RuntimeError("degenerate all-zero noise draw")
    return (spec.delta / norm) * draws


def perturb(field: CoeffField, spec: NoiseSpec) -> CoeffField:
    """Perturbed copy of ``field`` according to ``spec``.

    The stored entries are perturbed in lexicographic (k, j) order; entries
    absent from the field receive no noise.  With kind "none" the field is
    returned unchanged.
    """
    if spec.kind == "none":
        return field
    items = field.items_sorted()
    if not items:
        return field
    xi = noise_vector(field, spec)
    entries = {key: value + float(x) for ((key, value), x) in zip(items, xi)}
    return CoeffField(entries=entries, k_max=field.k_max, j_max=field.j_max)
