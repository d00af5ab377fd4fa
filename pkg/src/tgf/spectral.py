"""Norm estimation from an exact moment sequence.

The even moments of the symmetrized operator define a symmetric measure on
[-(q+1), q+1].  From the exact Hankel determinants of that measure we get
the recurrence coefficients alpha_n of its orthonormal polynomials, hence
the truncated tridiagonal multiplication matrices M_n whose largest
eigenvalues form a nondecreasing chain of certified lower bounds for the
operator norm.  Everything before the final eigenvalue extraction is exact
integer / rational arithmetic: Hankel conditioning destroys a floating
pipeline long before n = 37, so alpha_n is computed as the square root of
an exact determinant ratio at a configurable bit precision (default 512).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .errors import NumericError, UsageError, VerificationError

DEFAULT_PRECISION_BITS = 512
DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class MomentVector:
    """Moments m_0..m_N of h*h (m_0 = 1); the symmetric measure has even
    moments c_{2k} = m_k and vanishing odd moments."""

    q: int
    m: tuple[int, ...]

    def __post_init__(self):
        if not self.m or self.m[0] != 1:
            raise UsageError("moment vector must start with m_0 = 1")
        if len(self.m) > 1 and self.m[1] != self.q + 1:
            raise UsageError(f"m_1 = {self.m[1]} but q+1 = {self.q + 1}")
        for i, value in enumerate(self.m):
            if value <= 0:
                raise UsageError(f"moment m_{i} = {value} is not positive")
        for i in range(2, len(self.m)):
            if self.m[i] * self.m[i - 2] < self.m[i - 1] ** 2:
                raise UsageError(f"moment ratios decrease at n = {i}")

    @property
    def top(self) -> int:
        return len(self.m) - 1

    def symmetric_moment(self, k: int) -> int:
        return self.m[k // 2] if k % 2 == 0 else 0


@dataclass(frozen=True)
class HankelLadder:
    """Exact determinants D_n of the (n+1)x(n+1) symmetric-moment Hankel
    matrices, n = 0..; truncated at the first non-positive value."""

    determinants: tuple[int, ...]
    degenerate_at: Optional[int] = None

    def det(self, n: int) -> int:
        if n == -1:
            return 1
        return self.determinants[n]

    @property
    def top(self) -> int:
        return len(self.determinants) - 1


def hankel_ladder(mv: MomentVector, order: int) -> HankelLadder:
    """All leading principal minors via one fraction-free (Bareiss)
    elimination pass; a non-positive pivot truncates the ladder there."""
    if order > mv.top:
        raise UsageError(f"need moments up to m_{order}, have m_{mv.top}")
    size = order + 1
    mat = [[mv.symmetric_moment(i + j) for j in range(size)] for i in range(size)]
    dets: list[int] = []
    prev = 1
    for k in range(size):
        pivot = mat[k][k]
        if pivot <= 0:
            return HankelLadder(tuple(dets), degenerate_at=k)
        dets.append(pivot)
        row_k = mat[k]
        for i in range(k + 1, size):
            row_i = mat[i]
            lead = row_i[k]
            for j in range(k + 1, size):
                row_i[j] = (row_i[j] * pivot - lead * row_k[j]) // prev
        prev = pivot
    return HankelLadder(tuple(dets))


@dataclass(frozen=True)
class JacobiCoefficients:
    """Off-diagonal recurrence coefficients alpha_1..alpha_N (index 0 unused).

    alpha_sq holds the exact rationals D_{n-2} D_n / D_{n-1}^2; alpha holds
    their square roots at `precision_bits` bits.
    """

    alpha: tuple
    alpha_sq: tuple
    precision_bits: int

    @property
    def top(self) -> int:
        return len(self.alpha) - 1

    def pair_sum(self, n: int):
        return self.alpha[n - 1] + self.alpha[n]

    def max_pair_sum(self, n: int):
        return max(self.alpha[k - 1] + self.alpha[k] for k in range(2, n + 1))


def jacobi_coefficients(
    hl: HankelLadder, precision_bits: int = DEFAULT_PRECISION_BITS
) -> JacobiCoefficients:
    alphas = [None]
    alpha_sq = [None]
    with mpmath.workprec(precision_bits):
        for n in range(1, hl.top + 1):
            ratio = Fraction(hl.det(n - 2) * hl.det(n), hl.det(n - 1) ** 2)
            alpha_sq.append(ratio)
            value = mpmath.sqrt(
                mpmath.mpf(ratio.numerator) / mpmath.mpf(ratio.denominator)
            )
            alphas.append(value)
    return JacobiCoefficients(tuple(alphas), tuple(alpha_sq), precision_bits)


def _eigenvalues_below(alpha_sq_mpf: Sequence, n: int, x, tiny) -> int:
    """Sturm count for the (n+1)x(n+1) zero-diagonal tridiagonal matrix."""
    count = 0
    d = -x
    if d < 0:
        count += 1
    for i in range(1, n + 1):
        if d == 0:
            d = tiny
        d = -x - alpha_sq_mpf[i] / d
        if d < 0:
            count += 1
    return count


def lambda_max(
    jc: JacobiCoefficients,
    n: int,
    tol: float = DEFAULT_TOL,
    lower: Optional[object] = None,
):
    """Largest eigenvalue of M_n by Sturm-count bisection.

    The bracket starts at `lower` (any known lower bound, e.g. the moment
    ratio root) or max_k alpha_k, and ends at the Schur bound
    max_k (alpha_{k-1} + alpha_k)."""
    if not 1 <= n <= jc.top:
        raise UsageError(f"need alpha_1..alpha_{n}")
    if tol <= 0:
        raise UsageError("tolerance must be positive")
    if n == 1:
        return jc.alpha[1]
    if n == 2:
        # eigenvalues of M_2 are 0 and +-sqrt(alpha_1^2 + alpha_2^2); the
        # closed form also sidesteps the bracket, whose lower end (the
        # moment ratio) coincides with lambda_max exactly at this order
        r = jc.alpha_sq[1] + jc.alpha_sq[2]
        with mpmath.workprec(jc.precision_bits):
            return mpmath.sqrt(mpmath.mpf(r.numerator) / mpmath.mpf(r.denominator))
    with mpmath.workprec(jc.precision_bits):
        alpha_sq_mpf = [None] + [
            mpmath.mpf(r.numerator) / mpmath.mpf(r.denominator)
            for r in jc.alpha_sq[1 : n + 1]
        ]
        tiny = mpmath.mpf(2) ** (-4 * jc.precision_bits)
        lo = mpmath.mpf(lower) if lower is not None else max(jc.alpha[1 : n + 1])
        hi = jc.max_pair_sum(n) + mpmath.mpf(tol)
        full = n + 1
        if _eigenvalues_below(alpha_sq_mpf, n, hi, tiny) != full:
            raise NumericError("eigenvalue bracket failed; alpha precision suspect")
        if _eigenvalues_below(alpha_sq_mpf, n, lo, tiny) == full:
            raise NumericError("lower bracket already above top eigenvalue")
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if _eigenvalues_below(alpha_sq_mpf, n, mid, tiny) == full:
                hi = mid
            else:
                lo = mid
        return (lo + hi) / 2


@dataclass(frozen=True)
class NormBoundsRow:
    n: int
    root_moment: object
    ratio_root: object
    lambda_max: object
    alpha: object
    alpha_sum: Optional[object]


@dataclass(frozen=True)
class BoundsDiagnostics:
    """Schur-bound bookkeeping: prefix max of the alpha pair sums (a valid
    upper bound for every lambda_max) and suffix min (a limit-inferior
    estimate, itself a likely lower bound for the norm)."""

    prefix_max_pair: tuple
    suffix_min_pair: tuple


def bounds_table(
    mv: MomentVector,
    jc: JacobiCoefficients,
    order: Optional[int] = None,
    tol: float = DEFAULT_TOL,
) -> tuple[list[NormBoundsRow], BoundsDiagnostics]:
    """Rows of norm lower bounds for n = 1..order, invariant-checked."""
    order = jc.top if order is None else order
    if order > jc.top or order > mv.top:
        raise UsageError("order exceeds available coefficients")
    rows = []
    slack = mpmath.mpf(tol) * 8
    with mpmath.workprec(jc.precision_bits):
        prev_lambda = None
        for n in range(1, order + 1):
            root_moment = mpmath.root(mpmath.mpf(mv.m[n]), 2 * n)
            ratio_root = mpmath.sqrt(mpmath.mpf(mv.m[n]) / mpmath.mpf(mv.m[n - 1]))
            lam = lambda_max(jc, n, tol=tol, lower=ratio_root)
            pair = jc.pair_sum(n) if n >= 2 else None
            if not root_moment <= ratio_root <= lam + slack:
                raise VerificationError(
                    f"bound ordering violated at n={n}: "
                    f"{root_moment} / {ratio_root} / {lam}"
                )
            if prev_lambda is not None and lam < prev_lambda - slack:
                raise VerificationError(f"lambda_max decreased at n={n}")
            if n >= 2 and lam > jc.max_pair_sum(n) + slack:
                raise VerificationError(f"Schur bound violated at n={n}")
            rows.append(
                NormBoundsRow(n, root_moment, ratio_root, lam, jc.alpha[n], pair)
            )
            prev_lambda = lam
    pairs = [row.alpha_sum for row in rows if row.alpha_sum is not None]
    prefix = []
    for value in pairs:
        prefix.append(value if not prefix else max(prefix[-1], value))
    suffix: list = []
    for value in reversed(pairs):
        suffix.append(value if not suffix else min(suffix[-1], value))
    diag = BoundsDiagnostics(tuple(prefix), tuple(reversed(suffix)))
    return rows, diag


def moment_reconstruction_error(
    mv: MomentVector, jc: JacobiCoefficients, n: int, k_max: int
):
    """max_k |  ||M_n^k delta_0||^2 - m_k | / m_k for k <= k_max (needs k <= n);
    a high-precision consistency check tying the Jacobi data back to the
    moments."""
    if k_max > n:
        raise UsageError("reconstruction needs k <= n")
    worst = mpmath.mpf(0)
    with mpmath.workprec(jc.precision_bits):
        vec = [mpmath.mpf(0)] * (n + 1)
        vec[0] = mpmath.mpf(1)
        for k in range(1, k_max + 1):
            nxt = [mpmath.mpf(0)] * (n + 1)
            for i in range(n + 1):
                if i > 0:
                    nxt[i] += jc.alpha[i] * vec[i - 1]
                if i < n:
                    nxt[i] += jc.alpha[i + 1] * vec[i + 1]
            vec = nxt
            norm_sq = mpmath.fsum(v * v for v in vec)
            err = abs(norm_sq - mv.m[k]) / mpmath.mpf(mv.m[k])
            worst = max(worst, err)
    return worst


def gamma_cogrowth(norm_estimate, q: int):
    """Growth rate of the identity-word counts from a norm estimate:
    the larger root of g + q/g = norm."""
    with mpmath.workprec(128):
        norm = mpmath.mpf(norm_estimate)
        lo = 2 * mpmath.sqrt(q)
        if norm < lo * (1 - mpmath.mpf("1e-15")) or norm > q + 1 + mpmath.mpf("1e-15"):
            raise UsageError(f"norm estimate {norm} outside [2 sqrt q, q+1]")
        disc = norm * norm - 4 * q
        if disc < 0:
            disc = mpmath.mpf(0)
        return (norm + mpmath.sqrt(disc)) / 2


# ---------------------------------------------------------------------------
# extrapolation fit


@dataclass(frozen=True)
class FitParams:
    a: float
    b: float
    c: float
    d: float
    residual: float
    window: tuple[int, int]

    def predict(self, n: float) -> float:
        return self.a - self.b * (n - self.c) ** (-self.d)


def fit_extrapolation(
    points: list[tuple[int, float]],
    n_lo: int,
    n_hi: int,
    restarts_budget: int = 4000,
) -> FitParams:
    """Least-squares fit of f(n) = a - b (n-c)^(-d) to the bound sequence.

    Derivative-free simplex descent with a grid of multi-starts; c is kept
    below the window start and b, d positive via log parameters.
    """
    from scipy.optimize import minimize

    data = [(n, float(v)) for n, v in points if n_lo <= n <= n_hi]
    if len(data) < 4 or n_hi - n_lo < 6:
        raise UsageError("fit window must span at least 7 levels")
    ns = [float(n) for n, _ in data]
    vs = [v for _, v in data]
    c_cap = n_lo - 0.25

    def sse(params) -> float:
        a, log_b, c, log_d = params
        if c > c_cap:
            return 1e9 * (1 + c - c_cap)
        b, d = math.exp(log_b), math.exp(log_d)
        total = 0.0
        for n, v in zip(ns, vs):
            total += (a - b * (n - c) ** (-d) - v) ** 2
        return total

    best = None
    for c0 in (0.0, 0.5, 1.0, float(n_lo) / 2):
        for d0 in (0.5, 1.0, 2.0, 3.0):
            lo_term = (ns[0] - c0) ** (-d0)
            hi_term = (ns[-1] - c0) ** (-d0)
            b0 = max((vs[-1] - vs[0]) / (lo_term - hi_term), 1e-8)
            a0 = vs[-1] + b0 * hi_term
            start = [a0, math.log(b0), c0, math.log(d0)]
            result = minimize(
                sse,
                start,
                method="Nelder-Mead",
                options={"maxiter": restarts_budget, "xatol": 1e-10, "fatol": 1e-14},
            )
            if best is None or result.fun < best.fun:
                best = result
    if best is None or not (best.fun < float("inf")):
        raise NumericError("extrapolation fit did not converge", best=best)
    a, log_b, c, log_d = best.x
    return FitParams(
        a=float(a),
        b=float(math.exp(log_b)),
        c=float(c),
        d=float(math.exp(log_d)),
        residual=float(best.fun),
        window=(n_lo, n_hi),
    )
