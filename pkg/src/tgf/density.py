"""Spectral density reconstruction by Legendre projection.

The symmetric spectral measure lives on J = [-(q+1), q+1].  Projecting it
onto the span of 1, t, ..., t^(2N) in L^2(J, dt) gives the unique degree-2N
polynomial density estimate matching all moments up to order 2N.  The
projection coefficients onto the orthonormal scaled Legendre basis factor
as (rational core) x sqrt((n + 1/2)/(q+1)); the cores are kept as exact
rationals so moment matching is an identity, and the two square roots fuse
into the rational factor (2n+1)/(2(q+1)) at evaluation time.  The estimate
is a signed density: no clipping is applied anywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import UsageError
from .polynomials import legendre_p
from .sequences import m_free
from .spectral import MomentVector


@dataclass(frozen=True)
class LegendreExpansion:
    """Density estimate of order 2N.  cores[n] is the exact rational part of
    the n-th projection coefficient; odd cores vanish by symmetry."""

    q: int
    order: int
    cores: tuple[Fraction, ...]

    @property
    def support(self) -> tuple[float, float]:
        return (-(self.q + 1), self.q + 1)


@dataclass(frozen=True)
class DensityCurve:
    grid: tuple[float, ...]
    values: tuple[float, ...]
    label: str = ""

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise UsageError("curve grid must be strictly increasing")


def project_density(mv: MomentVector, order: int) -> LegendreExpansion:
    """Exact rational cores r_n = integral of P_n(t/(q+1)) against the
    measure, evaluated through the moments."""
    if order > mv.top:
        raise UsageError(f"projection order {order} needs moments up to m_{order}")
    scale = Fraction(1, mv.q + 1)
    cores = []
    for n in range(2 * order + 1):
        if n % 2:
            cores.append(Fraction(0))
            continue
        total = Fraction(0)
        for j, coeff in enumerate(legendre_p(n)):
            if j % 2 == 0 and coeff:
                total += coeff * scale**j * mv.m[j // 2]
        cores.append(total)
    return LegendreExpansion(mv.q, order, tuple(cores))


def expansion_moment(exp: LegendreExpansion, k: int) -> Fraction:
    """Exact integral of t^(2k) against the density estimate over J."""
    width = Fraction(exp.q + 1)
    total = Fraction(0)
    for n in range(0, 2 * exp.order + 1, 2):
        core = exp.cores[n]
        if not core:
            continue
        weight = core * Fraction(2 * n + 1, 2 * (exp.q + 1))
        # integral of t^{2k} P_n(t/(q+1)) over J, exactly
        inner = Fraction(0)
        for j, coeff in enumerate(legendre_p(n)):
            if coeff and (j + 2 * k) % 2 == 0:
                inner += coeff * Fraction(2, j + 2 * k + 1)
        total += weight * inner * width ** (2 * k + 1)
    return total


def evaluate(exp: LegendreExpansion, points) -> list[float]:
    """Evaluate via the Legendre three-term recurrence (no monomial blowup)."""
    weights = [
        float(exp.cores[n]) * (2 * n + 1) / (2 * (exp.q + 1))
        for n in range(2 * exp.order + 1)
    ]
    out = []
    for t in points:
        u = t / (exp.q + 1)
        p_prev, p_cur = 1.0, u
        total = weights[0]
        if len(weights) > 1:
            total += weights[1] * u
        for n in range(1, 2 * exp.order):
            p_next = ((2 * n + 1) * u * p_cur - n * p_prev) / (n + 1)
            total += weights[n + 1] * p_next
            p_prev, p_cur = p_cur, p_next
        out.append(total)
    return out


def _grid(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0 or hi <= lo:
        raise UsageError("need step > 0 and hi > lo")
    count = round((hi - lo) / step)
    points = [lo + i * step for i in range(count)]
    points.append(hi)
    return points


def evaluate_curve(
    exp: LegendreExpansion, lo: float, hi: float, step: float = 0.01, label: str = ""
) -> DensityCurve:
    half = exp.q + 1
    if lo < -half - 1e-9 or hi > half + 1e-9:
        raise UsageError(f"range [{lo}, {hi}] leaves the support [-{half}, {half}]")
    grid = _grid(lo, hi, step)
    return DensityCurve(tuple(grid), tuple(evaluate(exp, grid)), label)


def tail_average(
    e1: LegendreExpansion,
    e2: LegendreExpansion,
    lo: float,
    hi: float,
    step: float = 0.01,
    label: str = "",
) -> DensityCurve:
    """Pointwise mean of two consecutive orders; successive estimates
    oscillate with opposite signs near the support edge, so their average
    tracks the measure better there."""
    if e1.q != e2.q:
        raise UsageError("tail average needs expansions over the same support")
    if abs(e1.order - e2.order) > 1:
        raise UsageError("tail average expects consecutive orders")
    c1 = evaluate_curve(e1, lo, hi, step)
    c2 = evaluate_curve(e2, lo, hi, step)
    values = tuple((a + b) / 2 for a, b in zip(c1.values, c2.values))
    return DensityCurve(c1.grid, values, label)


def free_density(q: int, t: float) -> float:
    """Closed-form spectral density for a Leinert generator set:
    (q+1)/(2 pi) * sqrt(4q - t^2) / ((q+1)^2 - t^2) on [-2 sqrt q, 2 sqrt q]."""
    if t * t >= 4 * q:
        return 0.0
    return (q + 1) / (2 * math.pi) * math.sqrt(4 * q - t * t) / ((q + 1) ** 2 - t * t)


def free_density_curve(
    q: int, lo: float, hi: float, step: float = 0.01, label: str = ""
) -> DensityCurve:
    grid = _grid(lo, hi, step)
    return DensityCurve(tuple(grid), tuple(free_density(q, t) for t in grid), label)


def free_moment_vector(q: int, order: int) -> MomentVector:
    """Moments of the closed-form free measure, for oracle comparisons."""
    return MomentVector(q, tuple([1] + [m_free(q, n) for n in range(1, order + 1)]))
