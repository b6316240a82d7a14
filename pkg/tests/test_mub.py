"""Operator family and eigenbasis checks, exact backend first, float as oracle."""

import numpy as np
import pytest

from meanking.cyclotomic import Amplitude, CyclotomicInt, exact_overlap
from meanking.mub import (
    EXACT,
    FLOAT,
    CompositeDiagnosis,
    MubFamily,
    PrimeDim,
    build_ancilla_observable,
    build_ancilla_weyl_pair,
    build_mub_family,
    build_observable,
    build_weyl_pair,
    diagnose_composite,
    exact_apply,
    exact_eye,
    exact_mat_equal,
    exact_mat_pow,
    exact_matmul,
    exact_scale,
    ket_projector,
    projector_power_sum,
    root_amplitude,
    verify_trace_relations,
    verify_unbiasedness,
)

SMALL_PRIMES = [2, 3, 5, 7]


def test_prime_dim_accepts_primes_and_rejects_composites():
    for p in [2, 3, 5, 7, 11, 13, 31]:
        assert PrimeDim(p).p == p
    for n in [0, 1, 4, 6, 9, 15, 21]:
        with pytest.raises(ValueError):
            PrimeDim(n)


def test_weyl_pair_p2_is_diag_and_exchange():
    u0, up = build_weyl_pair(PrimeDim(2), EXACT)
    minus_one = Amplitude(CyclotomicInt.integer(2, -1))
    one = Amplitude.one(2)
    zero = Amplitude.zero(2)
    assert u0 == [[minus_one, zero], [zero, one]]
    assert up == [[zero, one], [one, zero]]


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_weyl_commutation_relation(p):
    dim = PrimeDim(p)
    u0, up = build_weyl_pair(dim, EXACT)
    lhs = exact_matmul(u0, up)
    rhs = exact_scale(exact_matmul(up, u0), root_amplitude(p, p - 1))
    assert exact_mat_equal(lhs, rhs)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_observables_have_period_p(p):
    dim = PrimeDim(p)
    eye = exact_eye(p)
    for m in range(p + 1):
        u = build_observable(dim, m, EXACT)
        assert exact_mat_equal(exact_mat_pow(u, p), eye), m
        for r in range(1, p):
            assert not exact_mat_equal(exact_mat_pow(u, r), eye), (m, r)


def test_observable_label_out_of_range():
    with pytest.raises(ValueError):
        build_observable(PrimeDim(3), 4)
    with pytest.raises(ValueError):
        build_observable(PrimeDim(3), -1)


def test_shift_moves_bras_forward():
    # <0_k| U_p = <0_{k+1}|: row k-1 of U_p is the (k mod p)-th unit row
    for p in SMALL_PRIMES:
        _, up = build_weyl_pair(PrimeDim(p), EXACT)
        for k in range(1, p + 1):
            row = up[k - 1]
            for j in range(p):
                expected = Amplitude.one(p) if j == k % p else Amplitude.zero(p)
                assert row[j] == expected


def test_clock_moves_fourier_kets_forward():
    # U_0 |p_k> = |p_{k+1}> with wraparound, exactly in the pinned phases
    for p in SMALL_PRIMES:
        dim = PrimeDim(p)
        u0, _ = build_weyl_pair(dim, EXACT)
        fam = build_mub_family(dim, "object", EXACT)
        for k in range(1, p + 1):
            moved = exact_apply(u0, fam.ket(p, k))
            target = fam.ket(p, k % p + 1)
            assert all((a - b).is_zero() for a, b in zip(moved, target)), (p, k)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_eigen_equation_for_every_basis(p):
    dim = PrimeDim(p)
    fam = build_mub_family(dim, "object", EXACT)
    for m in range(p + 1):
        u = build_observable(dim, m, EXACT)
        for k in range(1, p + 1):
            ket = fam.ket(m, k)
            moved = exact_apply(u, ket)
            eig = root_amplitude(p, k)
            assert all((a - eig * b).is_zero() for a, b in zip(moved, ket)), (m, k)


def test_fourier_basis_components():
    # the m=p basis is the plain Fourier basis p^{-1/2} q^{jk}
    for p in SMALL_PRIMES:
        fam = build_mub_family(PrimeDim(p), "object", EXACT)
        for k in range(1, p + 1):
            ket = fam.ket(p, k)
            for j0 in range(p):
                expected = Amplitude(CyclotomicInt.root_power(p, (j0 + 1) * k), 1)
                assert ket[j0] == expected


def test_p2_family_matches_pauli_eigenbases():
    fam = build_mub_family(PrimeDim(2), "object", FLOAT)
    z_basis = fam.bases[0]
    y_basis = fam.bases[1]
    x_basis = fam.bases[2]
    assert np.allclose(z_basis, np.eye(2))
    s = 1 / np.sqrt(2)
    assert np.allclose(y_basis, np.array([[s, 1j * s], [s, -1j * s]]))
    assert np.allclose(np.abs(x_basis), s)
    for b1 in (z_basis, y_basis, x_basis):
        for b2 in (z_basis, y_basis, x_basis):
            if b1 is b2:
                continue
            overlaps = np.abs(b1.conj() @ b2.T) ** 2
            assert np.allclose(overlaps, 0.5, atol=1e-12)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_unbiasedness_report_is_clean(p):
    fam = build_mub_family(PrimeDim(p), "object", EXACT)
    report = verify_unbiasedness(fam)
    assert report.passed
    assert report.checks == ((p + 1) * p) ** 2


def test_p3_cross_overlaps_are_exactly_one_third():
    fam = build_mub_family(PrimeDim(3), "object", EXACT)
    third = Amplitude(CyclotomicInt.one(3), 2)
    for m1 in range(4):
        for m2 in range(4):
            if m1 == m2:
                continue
            for k1 in range(1, 4):
                for k2 in range(1, 4):
                    sq = exact_overlap(fam.ket(m1, k1), fam.ket(m2, k2)).squared_modulus()
                    assert sq == third


def test_corrupted_family_is_reported_with_the_quadruple():
    p = 3
    fam = build_mub_family(PrimeDim(p), "object", EXACT)
    bases = [list(b) for b in fam.bases]
    bases[2][0] = fam.ket(0, 1)  # computational ket planted inside basis m=2
    broken = MubFamily(p=p, side="object", backend=EXACT, bases=tuple(tuple(b) for b in bases))
    report = verify_unbiasedness(broken)
    assert not report.passed
    quads = {(v["m"], v["k"], v["m2"], v["k2"]) for v in report.violations}
    assert (0, 1, 2, 1) in quads


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_trace_relations_exact(p):
    report = verify_trace_relations(PrimeDim(p), EXACT)
    assert report.passed, report.violations[:3]


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_trace_relations_float(p):
    report = verify_trace_relations(PrimeDim(p), FLOAT)
    assert report.passed, report.violations[:3]


@pytest.mark.parametrize("p", [11, 13])
def test_unbiasedness_float_oracle(p):
    fam = build_mub_family(PrimeDim(p), "object", FLOAT)
    assert verify_unbiasedness(fam).passed


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_exact_family_agrees_with_float_construction(p):
    # bridging the exact amplitudes to complex must land on the independently
    # built float family, and the bridged family must still pass the checks
    dim = PrimeDim(p)
    bridged = build_mub_family(dim, "object", EXACT).as_float()
    direct = build_mub_family(dim, "object", FLOAT)
    assert np.max(np.abs(bridged.bases - direct.bases)) < 1e-12
    assert verify_unbiasedness(bridged, atol=1e-10).passed


def test_projector_power_sum_equals_outer_product():
    for p in [2, 3, 5]:
        fam = build_mub_family(PrimeDim(p), "object", EXACT)
        for m in range(p + 1):
            for k in range(1, p + 1):
                power_sum = projector_power_sum(fam, m, k)
                outer = ket_projector(fam, m, k)
                assert exact_mat_equal(power_sum, outer), (p, m, k)


def test_projector_power_sums_resolve_identity_and_have_unit_trace():
    p = 5
    fam = build_mub_family(PrimeDim(p), "object", EXACT)
    for m in range(p + 1):
        total = [[Amplitude.zero(p) for _ in range(p)] for _ in range(p)]
        for k in range(1, p + 1):
            proj = projector_power_sum(fam, m, k)
            trace = Amplitude.zero(p)
            for i in range(p):
                trace = trace + proj[i][i]
            assert trace.as_fraction() == 1
            total = [[x + y for x, y in zip(ra, rp)] for ra, rp in zip(total, proj)]
        assert exact_mat_equal(total, exact_eye(p))


def test_ancilla_shift_moves_kets_forward():
    for p in SMALL_PRIMES:
        dim = PrimeDim(p)
        _, aup = build_ancilla_weyl_pair(dim, EXACT)
        fam = build_mub_family(dim, "ancilla", EXACT)
        for k in range(1, p + 1):
            moved = exact_apply(aup, fam.ket(0, k))
            target = fam.ket(0, k % p + 1)
            assert all((a - b).is_zero() for a, b in zip(moved, target))


def test_ancilla_clock_moves_fourier_bras_forward():
    # <p-bar_k| U-bar_0 = <p-bar_{k+1}|
    for p in SMALL_PRIMES:
        dim = PrimeDim(p)
        au0, _ = build_ancilla_weyl_pair(dim, EXACT)
        fam = build_mub_family(dim, "ancilla", EXACT)
        for k in range(1, p + 1):
            bra = [amp.conjugate() for amp in fam.ket(p, k)]
            moved = [
                sum(
                    (bra[i] * au0[i][j] for i in range(p)),
                    start=Amplitude.zero(p),
                )
                for j in range(p)
            ]
            target = [amp.conjugate() for amp in fam.ket(p, k % p + 1)]
            assert all((a - b).is_zero() for a, b in zip(moved, target)), (p, k)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_ancilla_eigen_equation(p):
    # conjugated kets diagonalize the interchanged-role ancilla observables
    dim = PrimeDim(p)
    fam = build_mub_family(dim, "ancilla", EXACT)
    for m in range(p + 1):
        u = build_ancilla_observable(dim, m, EXACT)
        for k in range(1, p + 1):
            ket = fam.ket(m, k)
            moved = exact_apply(u, ket)
            eig = root_amplitude(p, k)
            assert all((a - eig * b).is_zero() for a, b in zip(moved, ket)), (m, k)


def test_family_json_shapes():
    fam = build_mub_family(PrimeDim(2), "object", EXACT)
    doc = fam.to_json()
    assert doc["p"] == 2
    assert len(doc["bases"]) == 3
    assert all(len(basis) == 2 for basis in doc["bases"])
    float_doc = build_mub_family(PrimeDim(2), "object", FLOAT).to_json()
    assert {"re", "im"} == set(float_doc["bases"][1][0][0])


class TestDiagnoseComposite:
    def test_n6_reports_violations(self):
        diag = diagnose_composite(6)
        assert isinstance(diag, CompositeDiagnosis)
        assert diag.witnesses
        kinds = {w["kind"] for w in diag.witnesses}
        assert kinds & {"period", "operator_basis_gap", "unbiasedness"}

    def test_n4_reports_something_concrete(self):
        diag = diagnose_composite(4)
        assert diag.witnesses
        assert diag.first_failure != "none"

    def test_every_composite_up_to_16_fails_somewhere(self):
        for n in [4, 6, 8, 9, 10, 12, 14, 15, 16]:
            assert diagnose_composite(n).witnesses, n

    def test_prime_input_is_refused(self):
        with pytest.raises(ValueError, match="prime"):
            diagnose_composite(7)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            diagnose_composite(18)
