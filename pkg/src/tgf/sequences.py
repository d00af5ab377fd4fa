"""Integer sequences attached to a generator set and the transforms between
them.

Five exact integer sequences describe the pair (backend, Y): the squared
2-norms of the ladder levels, the shifted norms xi_n, the reduced numbers
eta_n (alternating words of length 2n equal to the identity), the cyclic
numbers zeta_n (the same with the cyclic adjacency constraint), and the
moments m_n of h*h.  Each determines the others through exact integer
transforms; this module implements the transforms, the closed form for the
free (Leinert) moments, definition-level brute-force oracles, the
group-ring identity checks, the Moebius/parity verification suite, and the
cogrowth diagnostics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb
from typing import Optional

from .errors import ResourceError, UsageError, VerificationError
from .groups import GroupBackend
from .ladder import GeneratorSet, LadderRun, MultiplicityVector, build_ladder
from .polynomials import ladder_poly_even_core

# ---------------------------------------------------------------------------
# transforms; all lists are indexed so that entry i corresponds to n = i+1


def xi_from_h2norm(q: int, h2norms: list[int]) -> list[int]:
    return [h2 - (q + 1) * q**i for i, h2 in enumerate(h2norms)]


def h2norm_from_xi(q: int, xis: list[int]) -> list[int]:
    return [xi + (q + 1) * q**i for i, xi in enumerate(xis)]


def eta_from_xi(q: int, xis: list[int]) -> list[int]:
    out, prefix = [], 0
    for xi in xis:
        out.append(xi - (q - 1) * prefix)
        prefix += xi
    return out


def xi_from_eta(q: int, etas: list[int]) -> list[int]:
    out, s = [], 0
    for eta in etas:
        out.append(eta + (q - 1) * s)
        s = eta + q * s
    return out


def zeta_from_eta(q: int, etas: list[int]) -> list[int]:
    out, prefix = [], 0
    for eta in etas:
        out.append(eta - (q - 1) * prefix)
        prefix += eta
    return out


def eta_from_zeta(q: int, zetas: list[int]) -> list[int]:
    out, s = [], 0
    for zeta in zetas:
        out.append(zeta + (q - 1) * s)
        s = zeta + q * s
    return out


def m_free(q: int, n: int) -> int:
    """2n-th moment of the Kesten measure: the moments when Y is Leinert."""
    if q < 1 or n < 1:
        raise UsageError("m_free needs q >= 1 and n >= 1")
    return comb(2 * n, n) * q**n - (q - 1) * sum(
        comb(2 * n, k) * q**k for k in range(n)
    )


def m_from_zeta(q: int, zetas: list[int]) -> list[int]:
    out = []
    for n in range(1, len(zetas) + 1):
        extra = sum(comb(2 * n, k) * q**k * zetas[n - k - 1] for k in range(n))
        out.append(m_free(q, n) + extra)
    return out


def zeta_from_m(q: int, ms: list[int]) -> list[int]:
    zetas: list[int] = []
    for n in range(1, len(ms) + 1):
        tail = sum(comb(2 * n, k) * q**k * zetas[n - k - 1] for k in range(1, n))
        zetas.append(ms[n - 1] - m_free(q, n) - tail)
    return zetas


# ---------------------------------------------------------------------------


@dataclass
class SequenceTable:
    """Exact sequences for n = 1..max_n (lists hold n = i+1 at index i)."""

    q: int
    h2norm: list[int]
    xi: list[int]
    eta: list[int]
    zeta: list[int]
    m: list[int]

    @property
    def max_n(self) -> int:
        return len(self.h2norm)

    @classmethod
    def from_h2norms(cls, q: int, h2norms: list[int]) -> "SequenceTable":
        xi = xi_from_h2norm(q, h2norms)
        eta = eta_from_xi(q, xi)
        zeta = zeta_from_eta(q, eta)
        m = m_from_zeta(q, zeta)
        return cls(q, list(h2norms), xi, eta, zeta, m)

    def row(self, n: int) -> tuple[int, int, int, int, int]:
        i = n - 1
        return (self.h2norm[i], self.xi[i], self.eta[i], self.zeta[i], self.m[i])

    def moments(self) -> list[int]:
        """m_0..m_max_n including the trivial zeroth moment."""
        return [1] + list(self.m)


def table_from_ladder(gen: GeneratorSet, run: LadderRun) -> SequenceTable:
    return SequenceTable.from_h2norms(gen.q, run.h2norms())


def compute_table(
    gen: GeneratorSet,
    max_n: int,
    threads: int = 1,
    checkpoint_dir=None,
) -> SequenceTable:
    run = build_ladder(gen, max_n, threads=threads, checkpoint_dir=checkpoint_dir)
    return table_from_ladder(gen, run)


# ---------------------------------------------------------------------------
# brute-force oracles straight from the definitions


def brute_force_sequences(
    gen: GeneratorSet, max_n: int, budget: int = 10**8
) -> SequenceTable:
    """m, eta, zeta by exhaustive product evaluation; h2norm by materializing
    each ladder element from its definition.  Independent of the recursion."""
    size = len(gen.elements)
    if size ** (2 * max_n) > budget:
        raise ResourceError(
            f"enumeration of {size}^{2 * max_n} products exceeds budget {budget}"
        )
    backend = gen.backend
    e = backend.identity_key()
    mul = backend.multiply_keys
    y = gen.keys()
    y_inv = gen.inverse_keys()

    ms = [0] * max_n
    etas = [0] * max_n
    zetas = [0] * max_n

    def alternating(depth: int, prod: bytes, constrained: bool, first: int, last: int):
        # product s_1^-1 s_2 s_3^-1 ... ; odd positions contribute inverses
        if depth and depth % 2 == 0 and prod == e:
            ms[depth // 2 - 1] += 1
        if depth == 2 * max_n:
            return
        factor = y_inv if depth % 2 == 0 else y
        for i in range(size):
            alternating(depth + 1, mul(prod, factor[i]), False, 0, i)

    def alternating_reduced(depth: int, prod: bytes, first: int, last: int):
        if depth and depth % 2 == 0 and prod == e:
            etas[depth // 2 - 1] += 1
            if first != last:
                zetas[depth // 2 - 1] += 1
        if depth == 2 * max_n:
            return
        factor = y_inv if depth % 2 == 0 else y
        for i in range(size):
            if depth and i == last:
                continue
            alternating_reduced(depth + 1, mul(prod, factor[i]), first if depth else i, i)

    alternating(0, e, False, 0, 0)
    alternating_reduced(0, e, 0, 0)

    h2norms = [brute_force_ladder_element(gen, n).squared_two_norm()
               for n in range(1, max_n + 1)]
    xis = xi_from_h2norm(gen.q, h2norms)
    return SequenceTable(gen.q, h2norms, xis, etas, zetas, ms)


def brute_force_ladder_element(gen: GeneratorSet, n: int) -> MultiplicityVector:
    """h_n materialized term by term from its defining sum over E_n."""
    backend = gen.backend
    mul = backend.multiply_keys
    y = gen.keys()
    y_inv = gen.inverse_keys()
    size = len(y)
    entries: dict[bytes, int] = {}

    # position i (1-based) enters inverted exactly when n - i is odd
    def rec(depth: int, prod: bytes, last: int):
        if depth == n:
            entries[prod] = entries.get(prod, 0) + 1
            return
        inverted = (n - depth - 1) % 2 == 1
        factor = y_inv if inverted else y
        for i in range(size):
            if depth and i == last:
                continue
            rec(depth + 1, mul(prod, factor[i]), i)

    rec(0, backend.identity_key(), 0)
    return MultiplicityVector(n, entries)


# ---------------------------------------------------------------------------
# group-ring identity checks (small n; signed exact convolution)


def _convolve(backend: GroupBackend, u: dict, v: dict) -> dict:
    mul = backend.multiply_keys
    out: dict[bytes, int] = {}
    get = out.get
    for ku, cu in u.items():
        for kv, cv in v.items():
            k = mul(ku, kv)
            value = get(k, 0) + cu * cv
            if value:
                out[k] = value
            else:
                out.pop(k, None)
    return out


def _scaled_sum(terms: list[tuple[int, dict]]) -> dict:
    out: dict[bytes, int] = {}
    for scale, vec in terms:
        for k, c in vec.items():
            value = out.get(k, 0) + scale * c
            if value:
                out[k] = value
            else:
                out.pop(k, None)
    return out


def _adjoint(backend: GroupBackend, u: dict) -> dict:
    inv = backend.invert_key
    return {inv(k): c for k, c in u.items()}


def _first_difference(u: dict, v: dict) -> Optional[bytes]:
    for k in sorted(set(u) | set(v)):
        if u.get(k, 0) != v.get(k, 0):
            return k
    return None


def group_ring_check(gen: GeneratorSet, m: int, threads: int = 1) -> None:
    """Verify the polynomial and convolution identities tying the ladder to
    the group ring, at level 2m:

      * h_{2m} equals the even ladder polynomial evaluated at h*h,
      * h_m* h_m expands into ladder levels with the (q-1) q^(i-1) weights,
      * the companion ladder k_n has the same 2-norm as h_n (n <= 2m).

    Raises VerificationError with the first differing key on mismatch.
    """
    if not 1 <= m <= 4:
        raise UsageError("group-ring check supports 1 <= m <= 4")
    backend, q = gen.backend, gen.q
    e = backend.identity_key()
    run = build_ladder(gen, 2 * m, threads=threads,
                       keep_levels=tuple(range(1, 2 * m + 1)))
    levels = run.kept

    h1 = {k: 1 for k in gen.keys()}
    hstar = _adjoint(backend, h1)
    hstar_h = _convolve(backend, hstar, h1)

    coeffs = ladder_poly_even_core(gen.q, m)
    power = {e: 1}
    acc = _scaled_sum([(coeffs[0], power)])
    for j in range(1, len(coeffs)):
        power = _convolve(backend, power, hstar_h)
        acc = _scaled_sum([(1, acc), (coeffs[j], power)])
    diff = _first_difference(acc, levels[2 * m].entries)
    if diff is not None:
        raise VerificationError(
            f"ladder level {2*m} disagrees with polynomial in h*h at key {diff.hex()}"
        )

    hm = levels[m].entries
    lhs = _convolve(backend, _adjoint(backend, hm), hm)
    terms = [(1, levels[2 * m].entries), ((q + 1) * q ** (m - 1), {e: 1})]
    for i in range(1, m):
        terms.append(((q - 1) * q ** (i - 1), levels[2 * m - 2 * i].entries))
    rhs = _scaled_sum(terms)
    diff = _first_difference(lhs, rhs)
    if diff is not None:
        raise VerificationError(
            f"h_{m}* h_{m} expansion fails at key {diff.hex()}"
        )

    for n, k_n in _companion_ladder(gen, 2 * m).items():
        knorm = sum(c * c for c in k_n.values())
        if knorm != levels[n].squared_two_norm():
            raise VerificationError(f"companion ladder 2-norm differs at n={n}")


def _companion_ladder(gen: GeneratorSet, max_n: int) -> dict[int, dict]:
    """k_n ladder: the same recursion started from h* with factors swapped."""
    backend, q = gen.backend, gen.q
    e = backend.identity_key()
    h1 = {k: 1 for k in gen.keys()}
    hstar = _adjoint(backend, h1)
    out = {1: hstar}
    cur = _scaled_sum([(1, _convolve(backend, h1, hstar)), (-(q + 1), {e: 1})])
    out[2] = cur
    prev = hstar
    for n in range(2, max_n):
        factor = hstar if n % 2 == 0 else h1
        nxt = _scaled_sum([(1, _convolve(backend, factor, cur)), (-q, prev)])
        out[n + 1] = nxt
        prev, cur = cur, nxt
    return {n: vec for n, vec in out.items() if n <= max_n}


# ---------------------------------------------------------------------------
# Moebius / parity verification


def moebius(n: int) -> int:
    """Moebius function by trial division (n stays tiny here)."""
    if n == 1:
        return 1
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


@dataclass(frozen=True)
class MoebiusRow:
    n: int
    value: int
    nonnegative: bool
    divisible: bool


@dataclass
class VerifyReport:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    moebius_rows: list[MoebiusRow] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks.append((name, ok, detail))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failures(self) -> list[str]:
        return [f"{name}: {detail}" for name, ok, detail in self.checks if not ok]

    def raise_if_failed(self):
        if not self.ok:
            raise VerificationError("; ".join(self.failures()))


def moebius_verify(table: SequenceTable, torsion_free: bool = True) -> VerifyReport:
    """Divisibility test on the cyclic numbers plus the parity rules.

    For torsion-free groups the Moebius transform of zeta must be
    non-negative and divisible by 2n; a failure flags a computation bug
    with probability >= 1 - 1/(2n) per affected level.
    """
    report = VerifyReport()
    q = table.q
    if table.max_n >= 1:
        first = (table.xi[0], table.eta[0], table.zeta[0])
        report.add("base_case", first == (0, 0, 0) and table.m[0] == q + 1
                   and table.h2norm[0] == q + 1,
                   f"xi1,eta1,zeta1={first} m1={table.m[0]} h2norm1={table.h2norm[0]}")
    for n in range(2, table.max_n + 1):
        i = n - 1
        even = all(v % 2 == 0 for v in
                   (table.h2norm[i], table.xi[i], table.eta[i], table.zeta[i]))
        parity_m = (table.m[i] - (q + 1)) % 2 == 0
        if not (even and parity_m):
            report.add(f"parity_n{n}", False,
                       f"row {table.row(n)} violates parity rules")
    if torsion_free:
        for n in range(1, table.max_n + 1):
            value = sum(
                moebius(n // d) * table.zeta[d - 1] for d in range(1, n + 1)
                if n % d == 0
            )
            row = MoebiusRow(n, value, value >= 0, value % (2 * n) == 0)
            report.moebius_rows.append(row)
            if not (row.nonnegative and row.divisible):
                report.add(f"moebius_n{n}", False,
                           f"transformed zeta = {value}, not a multiple of {2*n}")
    report.add("moebius_parity", True, "all levels checked")
    return report


def check_chain_bounds(table: SequenceTable) -> VerifyReport:
    """0 <= zeta_n <= eta_n <= xi_n <= 4 q^(2n) for every n."""
    report = VerifyReport()
    q = table.q
    for n in range(1, table.max_n + 1):
        i = n - 1
        ok = 0 <= table.zeta[i] <= table.eta[i] <= table.xi[i] <= 4 * q ** (2 * n)
        if not ok:
            report.add(f"chain_n{n}", False, f"row {table.row(n)}")
    report.add("chain_bounds", True, "")
    return report


# ---------------------------------------------------------------------------
# cogrowth diagnostics


@dataclass(frozen=True)
class CogrowthRow:
    n: int
    zeta_root: float
    eta_root: float
    xi_root: float
    h2_root: float
    m_root: float


def _root(value: int, k: int) -> float:
    # via logs so that integers beyond float range still work
    if value == 0:
        return 0.0
    return math.exp(math.log(value) / k)


def cogrowth_diagnostics(table: SequenceTable) -> list[CogrowthRow]:
    """2n-th roots of the sequences; they approach q exactly for amenable
    subgroups (and m_root approaches q+1), staying below otherwise."""
    rows = []
    for n in range(1, table.max_n + 1):
        i = n - 1
        rows.append(
            CogrowthRow(
                n=n,
                zeta_root=_root(table.zeta[i], 2 * n),
                eta_root=_root(table.eta[i], 2 * n),
                xi_root=_root(table.xi[i], 2 * n),
                h2_root=_root(table.h2norm[i], 2 * n),
                m_root=_root(table.m[i], 2 * n),
            )
        )
    return rows
