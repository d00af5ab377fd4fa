"""Composite verification suite.

Runs every cheap cross-check we have against a generator set: the ladder
pipeline against definition-level brute force, the direct reduced numbers
against the transform chain, the group-ring polynomial identities, exact
transform roundtrips, the Moebius/parity/chain tests, and the spectral
invariants of the resulting moments.  Returns a report suitable for JSON
output; any failed entry is a strong signal of a computation bug.
"""
from __future__ import annotations

import mpmath

from .errors import ResourceError, VerificationError
from .ladder import GeneratorSet, build_ladder, eta_direct
from .sequences import (
    SequenceTable,
    VerifyReport,
    check_chain_bounds,
    cogrowth_diagnostics,
    eta_from_xi,
    eta_from_zeta,
    group_ring_check,
    h2norm_from_xi,
    moebius_verify,
    m_from_zeta,
    table_from_ladder,
    xi_from_eta,
    xi_from_h2norm,
    zeta_from_eta,
    zeta_from_m,
)
from .spectral import (
    MomentVector,
    bounds_table,
    hankel_ladder,
    jacobi_coefficients,
    moment_reconstruction_error,
)


def default_brute_depth(gen: GeneratorSet, cap: int = 300_000) -> int:
    n = 0
    size = len(gen.elements)
    while size ** (2 * (n + 1)) <= cap:
        n += 1
    return max(n, 1)


def run_suite(
    gen: GeneratorSet,
    max_n: int = 10,
    brute_max_n: int | None = None,
    ring_max_m: int = 2,
    threads: int = 1,
    precision_bits: int = 512,
    spectral_order: int | None = None,
) -> VerifyReport:
    report = VerifyReport()
    run = build_ladder(gen, max_n, threads=threads, keep_levels=tuple(
        n for n in range(2, max_n + 1, 2)))
    table = table_from_ladder(gen, run)

    # direct reduced numbers vs the transform chain
    e = gen.backend.identity_key()
    ok = all(
        eta_direct(vec, e) == table.eta[n // 2 - 1]
        for n, vec in run.kept.items()
    )
    report.add("eta_direct_vs_transforms", ok,
               "identity coefficients of even levels match eta")

    if brute_max_n is None:
        brute_max_n = min(max_n, default_brute_depth(gen))
    try:
        brute = brute_force_equivalence(gen, min(brute_max_n, max_n), table)
        report.add("brute_force_equivalence", brute is None, brute or
                   f"definitions match pipeline for n <= {min(brute_max_n, max_n)}")
    except ResourceError as exc:
        report.add("brute_force_equivalence", False, str(exc))

    for m in range(1, min(ring_max_m, max_n // 2 if max_n >= 2 else 0) + 1):
        try:
            group_ring_check(gen, m, threads=threads)
            report.add(f"group_ring_identities_m{m}", True, "")
        except VerificationError as exc:
            report.add(f"group_ring_identities_m{m}", False, str(exc))

    report.add("transform_roundtrips", transform_roundtrips(table),
               "xi<->eta, eta<->zeta, zeta<->m, xi<->h2norm")

    moe = moebius_verify(table, torsion_free=gen.backend.is_torsion_free)
    report.checks.extend(moe.checks)
    report.moebius_rows = moe.moebius_rows
    report.checks.extend(check_chain_bounds(table).checks)

    rows = cogrowth_diagnostics(table)
    report.add("cogrowth_diagnostics", all(
        row.m_root <= gen.q + 1 + 1e-9 for row in rows),
        f"m-root at n={max_n}: {rows[-1].m_root:.5f} (limit {gen.q + 1} iff amenable)")

    order = spectral_order if spectral_order is not None else min(max_n, 12)
    try:
        spectral_invariants(table, order, precision_bits)
        report.add("spectral_invariants", True,
                   f"Hankel positive, bound chain ordered, moments rebuilt (order {order})")
    except (VerificationError, ValueError) as exc:
        report.add("spectral_invariants", False, str(exc))
    return report


def brute_force_equivalence(
    gen: GeneratorSet, max_n: int, table: SequenceTable
) -> str | None:
    """Definition-level enumeration vs the ladder pipeline; None if equal."""
    from .sequences import brute_force_sequences

    brute = brute_force_sequences(gen, max_n)
    for n in range(1, max_n + 1):
        if brute.row(n) != table.row(n):
            return f"n={n}: brute {brute.row(n)} != pipeline {table.row(n)}"
    return None


def transform_roundtrips(table: SequenceTable) -> bool:
    q = table.q
    return (
        eta_from_xi(q, xi_from_eta(q, table.eta)) == table.eta
        and xi_from_eta(q, eta_from_xi(q, table.xi)) == table.xi
        and eta_from_zeta(q, zeta_from_eta(q, table.eta)) == table.eta
        and zeta_from_m(q, m_from_zeta(q, table.zeta)) == table.zeta
        and h2norm_from_xi(q, xi_from_h2norm(q, table.h2norm)) == table.h2norm
        and xi_from_h2norm(q, table.h2norm) == table.xi
        and eta_from_xi(q, table.xi) == table.eta
        and zeta_from_eta(q, table.eta) == table.zeta
        and m_from_zeta(q, table.zeta) == table.m
    )


def spectral_invariants(table: SequenceTable, order: int, precision_bits: int):
    """Hankel positivity, ordered bound chain, eigenvalue symmetry, and the
    moment reconstruction identity on the table's own moments."""
    from .errors import NumericError

    mv = MomentVector(table.q, tuple(table.moments()))
    order = min(order, mv.top)
    hl = hankel_ladder(mv, order)
    if hl.degenerate_at is not None:
        raise VerificationError(f"Hankel determinant not positive at {hl.degenerate_at}")
    jc = jacobi_coefficients(hl, precision_bits)
    try:
        bounds_table(mv, jc, order)  # raises on any ordering violation
    except NumericError as exc:
        # a lost eigenvalue bracket here means the ordering chain is broken,
        # i.e. the input is not a genuine moment sequence
        raise VerificationError(f"bound chain failed: {exc}") from exc
    k_max = min(order, 12)
    err = moment_reconstruction_error(mv, jc, order, k_max)
    if err > mpmath.mpf(2) ** (-precision_bits // 2):
        raise VerificationError(f"moment reconstruction error {err}")


def report_to_dict(report: VerifyReport) -> dict:
    return {
        "ok": report.ok,
        "checks": [
            {"name": name, "ok": ok, "detail": detail}
            for name, ok, detail in report.checks
        ],
        "moebius": [
            {
                "n": row.n,
                "value": row.value,
                "nonnegative": row.nonnegative,
                "divisible_by_2n": row.divisible,
            }
            for row in report.moebius_rows
        ],
    }
