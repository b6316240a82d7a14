"""Complementary observables and their eigenbases for prime dimension p.

Constructs the reciprocal clock/shift pair (U_0 diagonal in the computational
basis, U_p the cyclic shift), the full family U_0..U_p of period-p unitaries,
and the p+1 mutually unbiased eigenbases.  Everything exists in two backends:
an exact one over the cyclotomic ring, where every identity is tested for
literal zero, and a float one that serves as an independent numerical oracle.

For p = 2 the bare product U_0^m U_p has period 4 rather than 2, so the third
observable carries a compensating phase -i (making it the sigma_y-like
operator) and its eigenbasis {(1, i)/sqrt(2), (1, -i)/sqrt(2)} is written out
explicitly; the odd-prime amplitude formula degenerates there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cyclotomic import Amplitude, CyclotomicInt, exact_overlap

FLOAT_ATOL = 1e-10

EXACT = "exact"
FLOAT = "float"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeDim:
    """A validated prime dimension."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise ValueError(f"dimension must be an integer, got {self.p!r}")
        if not _is_prime(self.p):
            raise ValueError(f"dimension must be prime, got {self.p}")


def _check_backend(backend: str) -> None:
    if backend not in (EXACT, FLOAT):
        raise ValueError(f"unknown backend {backend!r}")


# --- exact dense matrices (lists of Amplitude rows) ---


def exact_zeros(p: int) -> list[list[Amplitude]]:
    z = Amplitude.zero(p)
    return [[z for _ in range(p)] for _ in range(p)]


def exact_eye(p: int) -> list[list[Amplitude]]:
    m = exact_zeros(p)
    one = Amplitude.one(p)
    for i in range(p):
        m[i][i] = one
    return m


def exact_matmul(a, b) -> list[list[Amplitude]]:
    p = len(a)
    out = exact_zeros(p)
    for i in range(p):
        for k in range(p):
            aik = a[i][k]
            if aik.is_zero():
                continue
            for j in range(p):
                if b[k][j].is_zero():
                    continue
                out[i][j] = out[i][j] + aik * b[k][j]
    return out


def exact_mat_pow(a, r: int) -> list[list[Amplitude]]:
    out = exact_eye(len(a))
    for _ in range(r):
        out = exact_matmul(out, a)
    return out


def exact_dagger(a) -> list[list[Amplitude]]:
    p = len(a)
    return [[a[j][i].conjugate() for j in range(p)] for i in range(p)]


def exact_scale(a, factor: Amplitude) -> list[list[Amplitude]]:
    return [[entry * factor for entry in row] for row in a]


def exact_mat_equal(a, b) -> bool:
    return all(
        (x - y).is_zero() for row_a, row_b in zip(a, b) for x, y in zip(row_a, row_b)
    )


def exact_apply(a, vec: Sequence[Amplitude]) -> list[Amplitude]:
    p = len(a)
    out = []
    for i in range(p):
        acc = Amplitude.zero(vec[0].p)
        for j in range(p):
            if a[i][j].is_zero() or vec[j].is_zero():
                continue
            acc = acc + a[i][j] * vec[j]
        out.append(acc)
    return out


def _nonzeros(a) -> list[tuple[int, int, Amplitude]]:
    return [
        (i, j, entry)
        for i, row in enumerate(a)
        for j, entry in enumerate(row)
        if not entry.is_zero()
    ]


def exact_trace_product(a, b) -> Amplitude:
    """tr(a @ b) using the sparsity of a."""
    acc = Amplitude.zero(a[0][0].p)
    for i, j, entry in _nonzeros(a):
        if not b[j][i].is_zero():
            acc = acc + entry * b[j][i]
    return acc


def root_amplitude(p: int, e: int) -> Amplitude:
    return Amplitude(CyclotomicInt.root_power(p, e))


# --- operator construction ---


def build_weyl_pair(dim: PrimeDim, backend: str = EXACT):
    """The reciprocal pair: U_0 = diag(q^1..q^p) and the cyclic shift U_p.

    U_p satisfies <0_k| U_p = <0_{k+1}| with wraparound, and the pair obeys
    U_0 U_p = q^{-1} U_p U_0.
    """
    _check_backend(backend)
    p = dim.p
    if backend == EXACT:
        u0 = exact_zeros(p)
        up = exact_zeros(p)
        one = Amplitude.one(p)
        for i in range(p):
            u0[i][i] = root_amplitude(p, i + 1)
            up[i][(i + 1) % p] = one
        return u0, up
    u0 = np.diag([np.exp(2j * np.pi * (i + 1) / p) for i in range(p)])
    up = np.zeros((p, p), dtype=complex)
    for i in range(p):
        up[i][(i + 1) % p] = 1.0
    return u0, up


def build_observable(dim: PrimeDim, m: int, backend: str = EXACT):
    """The m-th period-p observable: U_0 for m=0, else U_0^m U_p (phased for p=2).

    For p = 2, m = 1 the bare product squares to -1, so a factor -i restores
    period 2 and the spectrum {q, q^2}.
    """
    _check_backend(backend)
    p = dim.p
    if not 0 <= m <= p:
        raise ValueError(f"observable label must be in 0..{p}, got {m}")
    u0, up = build_weyl_pair(dim, backend)
    if m == 0:
        return u0
    if backend == EXACT:
        mat = exact_matmul(exact_mat_pow(u0, m), up)
        if p == 2 and m == 1:
            minus_i = Amplitude(-CyclotomicInt.imaginary_unit())
            mat = exact_scale(mat, minus_i)
        return mat
    mat = np.linalg.matrix_power(u0, m) @ up
    if p == 2 and m == 1:
        mat = -1j * mat
    return mat


def build_ancilla_weyl_pair(dim: PrimeDim, backend: str = EXACT):
    """The ancilla pair with interchanged roles: the shift moves kets, not bras."""
    u0, up = build_weyl_pair(dim, backend)
    if backend == EXACT:
        p = dim.p
        up_t = [[up[j][i] for j in range(p)] for i in range(p)]
        return u0, up_t
    return u0, up.T.copy()


def build_ancilla_observable(dim: PrimeDim, m: int, backend: str = EXACT):
    """The m-th ancilla observable U_p-bar U_0-bar^m (phased for p=2)."""
    _check_backend(backend)
    p = dim.p
    if not 0 <= m <= p:
        raise ValueError(f"observable label must be in 0..{p}, got {m}")
    au0, aup = build_ancilla_weyl_pair(dim, backend)
    if m == 0:
        return au0
    if backend == EXACT:
        mat = exact_matmul(aup, exact_mat_pow(au0, m))
        if p == 2 and m == 1:
            minus_i = Amplitude(-CyclotomicInt.imaginary_unit())
            mat = exact_scale(mat, minus_i)
        return mat
    mat = aup @ np.linalg.matrix_power(au0, m)
    if p == 2 and m == 1:
        mat = -1j * mat
    return mat


# --- eigenbasis family ---


@dataclass(frozen=True)
class MubFamily:
    """The p+1 orthonormal bases; basis m=0 is computational, bases 1..p unbiased to it.

    Exact backend: bases[m][k-1] is a tuple of p Amplitudes.
    Float backend: bases is an ndarray of shape (p+1, p, p), kets along axis 1.
    """

    p: int
    side: str
    backend: str
    bases: tuple | np.ndarray

    def ket(self, m: int, k: int):
        if not 0 <= m <= self.p:
            raise ValueError(f"basis label must be in 0..{self.p}, got {m}")
        if not 1 <= k <= self.p:
            raise ValueError(f"ket label must be in 1..{self.p}, got {k}")
        return self.bases[m][k - 1]

    def as_float(self) -> "MubFamily":
        if self.backend == FLOAT:
            return self
        arr = np.array(
            [
                [[amp.to_complex() for amp in ket] for ket in basis]
                for basis in self.bases
            ],
            dtype=complex,
        )
        return MubFamily(p=self.p, side=self.side, backend=FLOAT, bases=arr)

    def to_json(self) -> dict:
        if self.backend == EXACT:
            bases = [
                [[amp.to_json() for amp in ket] for ket in basis]
                for basis in self.bases
            ]
        else:
            bases = [
                [
                    [{"re": float(z.real), "im": float(z.imag)} for z in ket]
                    for ket in basis
                ]
                for basis in self.bases
            ]
        return {"p": self.p, "side": self.side, "backend": self.backend, "bases": bases}


def _ket_exponent(p: int, m: int, j: int, k: int) -> int:
    # j-th computational amplitude of |m_k>, valid for odd p and m >= 1
    return (j * k - m * (j * (j - 1) // 2)) % p


def build_mub_family(dim: PrimeDim, side: str = "object", backend: str = EXACT) -> MubFamily:
    """All p+1 bases; ancilla side is the entrywise conjugate of the object side."""
    _check_backend(backend)
    if side not in ("object", "ancilla"):
        raise ValueError(f"side must be 'object' or 'ancilla', got {side!r}")
    p = dim.p

    if backend == EXACT:
        one = Amplitude.one(p)
        zero = Amplitude.zero(p)
        bases = []
        computational = tuple(
            tuple(one if j == k - 1 else zero for j in range(p)) for k in range(1, p + 1)
        )
        bases.append(computational)
        for m in range(1, p + 1):
            if p == 2 and m == 1:
                i_unit = Amplitude(CyclotomicInt.imaginary_unit())
                half = Amplitude(CyclotomicInt.one(2), 1)
                basis = (
                    (half, half * i_unit),
                    (half, -(half * i_unit)),
                )
            else:
                basis = tuple(
                    tuple(
                        Amplitude(
                            CyclotomicInt.root_power(p, _ket_exponent(p, m, j0 + 1, k)), 1
                        )
                        for j0 in range(p)
                    )
                    for k in range(1, p + 1)
                )
            bases.append(basis)
        if side == "ancilla":
            bases = [
                tuple(tuple(amp.conjugate() for amp in ket) for ket in basis)
                for basis in bases
            ]
        return MubFamily(p=p, side=side, backend=EXACT, bases=tuple(bases))

    arr = np.zeros((p + 1, p, p), dtype=complex)
    for k in range(1, p + 1):
        arr[0][k - 1][k - 1] = 1.0
    scale = 1 / math.sqrt(p)
    for m in range(1, p + 1):
        if p == 2 and m == 1:
            arr[1] = np.array([[1, 1j], [1, -1j]]) * scale
            continue
        for k in range(1, p + 1):
            for j0 in range(p):
                e = _ket_exponent(p, m, j0 + 1, k)
                arr[m][k - 1][j0] = scale * np.exp(2j * np.pi * e / p)
    if side == "ancilla":
        arr = arr.conj()
    return MubFamily(p=p, side=side, backend=FLOAT, bases=arr)


# --- verification ---


@dataclass
class CheckReport:
    """Outcome of one identity family; violations are entries, not exceptions."""

    name: str
    checks: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "checks": self.checks,
            "passed": self.passed,
            "violations": self.violations,
        }


def verify_unbiasedness(fam: MubFamily, atol: float = FLOAT_ATOL) -> CheckReport:
    """Check every squared overlap: delta within a basis, exactly 1/p across bases."""
    p = fam.p
    report = CheckReport(name="unbiasedness")
    if fam.backend == EXACT:
        one = Amplitude.one(p)
        inv_p = Amplitude(CyclotomicInt.one(p), 2)
        zero = Amplitude.zero(p)
        for m1 in range(p + 1):
            for k1 in range(1, p + 1):
                bra = fam.ket(m1, k1)
                for m2 in range(p + 1):
                    for k2 in range(1, p + 1):
                        sq = exact_overlap(bra, fam.ket(m2, k2)).squared_modulus()
                        if m1 == m2:
                            expected = one if k1 == k2 else zero
                        else:
                            expected = inv_p
                        report.checks += 1
                        if not (sq - expected).is_zero():
                            report.violations.append(
                                {
                                    "m": m1,
                                    "k": k1,
                                    "m2": m2,
                                    "k2": k2,
                                    "actual": sq.to_json(),
                                }
                            )
        return report

    flat = fam.bases.reshape((p + 1) * p, p)
    gram_sq = np.abs(flat.conj() @ flat.T) ** 2
    expected = np.full_like(gram_sq, 1.0 / p)
    for m in range(p + 1):
        block = slice(m * p, (m + 1) * p)
        expected[block, block] = np.eye(p)
    report.checks = gram_sq.size
    bad = np.argwhere(np.abs(gram_sq - expected) > atol)
    for idx1, idx2 in bad:
        report.violations.append(
            {
                "m": int(idx1 // p),
                "k": int(idx1 % p) + 1,
                "m2": int(idx2 // p),
                "k2": int(idx2 % p) + 1,
                "actual": float(gram_sq[idx1, idx2]),
            }
        )
    return report


def _periodic_delta(p: int, r: int, s: int) -> int:
    return 1 if (r - s) % p == 0 else 0


def verify_trace_relations(dim: PrimeDim, backend: str = EXACT, atol: float = FLOAT_ATOL) -> CheckReport:
    """Operator-level identities: periods, the commutation relation, the trace
    table, tracelessness of the non-identity basis operators, and completeness
    (trace-orthogonality) of both operator bases."""
    _check_backend(backend)
    p = dim.p
    report = CheckReport(name="trace_relations")
    obs = [build_observable(dim, m, backend) for m in range(p + 1)]

    if backend == EXACT:
        eye = exact_eye(p)
        powers = []
        for mat in obs:
            row = [eye]
            for _ in range(p):
                row.append(exact_matmul(row[-1], mat))
            powers.append(row)

        # unitarity: U_m U_m-dagger = 1
        for m, mat in enumerate(obs):
            report.checks += 1
            if not exact_mat_equal(exact_matmul(mat, exact_dagger(mat)), eye):
                report.violations.append({"kind": "unitarity", "m": m})

        # period p exactly: U_m^p = 1 and no smaller power is
        for m, row in enumerate(powers):
            report.checks += 1
            if not exact_mat_equal(row[p], eye):
                report.violations.append({"kind": "period", "m": m, "r": p})
            for r in range(1, p):
                report.checks += 1
                if exact_mat_equal(row[r], eye):
                    report.violations.append({"kind": "premature_period", "m": m, "r": r})

        # U_0 U_p = q^{-1} U_p U_0
        u0, up = obs[0], obs[p]
        lhs = exact_matmul(u0, up)
        rhs = exact_scale(exact_matmul(up, u0), root_amplitude(p, p - 1))
        report.checks += 1
        if not exact_mat_equal(lhs, rhs):
            report.violations.append({"kind": "commutation"})

        # trace table over all m, m' and r, s in 0..p-1
        for m1 in range(p + 1):
            for m2 in range(p + 1):
                for r in range(p):
                    for s in range(p):
                        tr = exact_trace_product(powers[m1][r], powers[m2][s])
                        if m1 == m2:
                            want = _periodic_delta(p, r, -s)
                        else:
                            want = _periodic_delta(p, r, 0) * _periodic_delta(p, s, 0)
                        report.checks += 1
                        diff = tr - Amplitude(CyclotomicInt.integer(p, want * p))
                        if not diff.is_zero():
                            report.violations.append(
                                {"kind": "trace", "m": m1, "m2": m2, "r": r, "s": s}
                            )

        # clock/shift monomials U_0^r U_p^s: traceless except identity,
        # and trace-orthogonal (Gram = p * identity)
        monomials = {}
        for r in range(1, p + 1):
            for s in range(1, p + 1):
                monomials[(r, s)] = exact_matmul(powers[0][r % p], powers[p][s % p])
        for (r, s), mat in monomials.items():
            tr = exact_trace_product(mat, eye)
            want = p if (r % p == 0 and s % p == 0) else 0
            report.checks += 1
            if not (tr - Amplitude(CyclotomicInt.integer(p, want))).is_zero():
                report.violations.append({"kind": "monomial_trace", "r": r, "s": s})
        keys = sorted(monomials)
        for i, key1 in enumerate(keys):
            dag = exact_dagger(monomials[key1])
            for key2 in keys:
                tr = exact_trace_product(dag, monomials[key2])
                want = p if key1 == key2 else 0
                report.checks += 1
                if not (tr - Amplitude(CyclotomicInt.integer(p, want))).is_zero():
                    report.violations.append(
                        {"kind": "monomial_gram", "pair": [list(key1), list(key2)]}
                    )

        # the p^2-1 powers U_m^r (r = 1..p-1) plus identity: also trace-orthogonal
        family = [("id", 0, eye)] + [
            (m, r, powers[m][r]) for m in range(p + 1) for r in range(1, p)
        ]
        for m1, r1, mat1 in family:
            dag = exact_dagger(mat1)
            for m2, r2, mat2 in family:
                tr = exact_trace_product(dag, mat2)
                want = p if (m1, r1) == (m2, r2) else 0
                report.checks += 1
                if not (tr - Amplitude(CyclotomicInt.integer(p, want))).is_zero():
                    report.violations.append(
                        {"kind": "power_gram", "pair": [[m1, r1], [m2, r2]]}
                    )
        return report

    # float backend
    eye = np.eye(p, dtype=complex)
    powers = []
    for mat in obs:
        row = [eye]
        for _ in range(p):
            row.append(row[-1] @ mat)
        powers.append(row)
    for m, mat in enumerate(obs):
        report.checks += 1
        if np.max(np.abs(mat @ mat.conj().T - eye)) > atol:
            report.violations.append({"kind": "unitarity", "m": m})
    for m, row in enumerate(powers):
        report.checks += 1
        if np.max(np.abs(row[p] - eye)) > atol:
            report.violations.append({"kind": "period", "m": m, "r": p})
        for r in range(1, p):
            report.checks += 1
            if np.max(np.abs(row[r] - eye)) <= atol:
                report.violations.append({"kind": "premature_period", "m": m, "r": r})
    q_inv = np.exp(-2j * np.pi / p)
    report.checks += 1
    if np.max(np.abs(obs[0] @ obs[p] - q_inv * obs[p] @ obs[0])) > atol:
        report.violations.append({"kind": "commutation"})
    for m1 in range(p + 1):
        for m2 in range(p + 1):
            for r in range(p):
                for s in range(p):
                    tr = np.trace(powers[m1][r] @ powers[m2][s]) / p
                    if m1 == m2:
                        want = _periodic_delta(p, r, -s)
                    else:
                        want = _periodic_delta(p, r, 0) * _periodic_delta(p, s, 0)
                    report.checks += 1
                    if abs(tr - want) > atol:
                        report.violations.append(
                            {"kind": "trace", "m": m1, "m2": m2, "r": r, "s": s}
                        )
    monomials = {
        (r, s): np.linalg.matrix_power(obs[0], r) @ np.linalg.matrix_power(obs[p], s)
        for r in range(1, p + 1)
        for s in range(1, p + 1)
    }
    for (r, s), mat in monomials.items():
        want = p if (r % p == 0 and s % p == 0) else 0
        report.checks += 1
        if abs(np.trace(mat) - want) > atol:
            report.violations.append({"kind": "monomial_trace", "r": r, "s": s})
    keys = sorted(monomials)
    stack = np.array([monomials[key] for key in keys])
    gram = np.einsum("aji,bji->ab", stack.conj(), stack)
    report.checks += gram.size
    if np.max(np.abs(gram - p * np.eye(len(keys)))) > atol:
        bad = np.argwhere(np.abs(gram - p * np.eye(len(keys))) > atol)
        for i1, i2 in bad[:10]:
            report.violations.append(
                {"kind": "monomial_gram", "pair": [list(keys[i1]), list(keys[i2])]}
            )
    family = [eye] + [powers[m][r] for m in range(p + 1) for r in range(1, p)]
    stack = np.array(family)
    gram = np.einsum("aji,bji->ab", stack.conj(), stack)
    report.checks += gram.size
    if np.max(np.abs(gram - p * np.eye(len(family)))) > atol:
        report.violations.append({"kind": "power_gram"})
    return report


def projector_power_sum(fam: MubFamily, m: int, k: int):
    """The rank-one projector onto |m_k> as the power sum (1/p) sum_r (q^{-k} U_m)^r."""
    dim = PrimeDim(fam.p)
    p = fam.p
    if fam.backend == EXACT:
        u = build_observable(dim, m, EXACT)
        shifted = exact_scale(u, root_amplitude(p, -k % p))
        acc = exact_zeros(p)
        term = exact_eye(p)
        for _ in range(p):
            term = exact_matmul(term, shifted)
            acc = [[x + y for x, y in zip(ra, rt)] for ra, rt in zip(acc, term)]
        inv_p = Amplitude(CyclotomicInt.one(p), 2)
        return exact_scale(acc, inv_p)
    u = build_observable(dim, m, FLOAT)
    shifted = np.exp(-2j * np.pi * k / p) * u
    acc = np.zeros((p, p), dtype=complex)
    term = np.eye(p, dtype=complex)
    for _ in range(p):
        term = term @ shifted
        acc += term
    return acc / p


def ket_projector(fam: MubFamily, m: int, k: int):
    """The outer product |m_k><m_k| built directly from the stored ket."""
    ket = fam.ket(m, k)
    if fam.backend == EXACT:
        return [[a * b.conjugate() for b in ket] for a in ket]
    return np.outer(ket, ket.conj())


# --- composite-dimension diagnosis ---

DIAGNOSE_MAX_N = 16


@dataclass
class CompositeDiagnosis:
    """What breaks when the construction is run at a composite dimension."""

    n: int
    witnesses: list

    @property
    def first_failure(self) -> str:
        return self.witnesses[0]["kind"] if self.witnesses else "none"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "first_failure": self.first_failure,
            "witness_count": len(self.witnesses),
            "witnesses": self.witnesses,
        }


def diagnose_composite(n: int, atol: float = 1e-8) -> CompositeDiagnosis:
    """Run the construction at composite n with primality enforcement bypassed
    and report every invariant that breaks, with concrete witnesses."""
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"dimension must be an integer, got {n!r}")
    if _is_prime(n):
        raise ValueError(
            f"{n} is prime; the construction succeeds there, so there is nothing to diagnose"
        )
    if n < 4 or n > DIAGNOSE_MAX_N:
        raise ValueError(f"composite diagnosis supports 4 <= n <= {DIAGNOSE_MAX_N}")

    witnesses = []

    u0 = np.diag([np.exp(2j * np.pi * (i + 1) / n) for i in range(n)])
    up = np.zeros((n, n), dtype=complex)
    for i in range(n):
        up[i][(i + 1) % n] = 1.0
    obs = [u0] + [np.linalg.matrix_power(u0, m) @ up for m in range(1, n + 1)]

    # period: U_m^n should be the identity
    eye = np.eye(n)
    for m, mat in enumerate(obs):
        dev = float(np.max(np.abs(np.linalg.matrix_power(mat, n) - eye)))
        if dev > atol:
            witnesses.append({"kind": "period", "m": m, "deviation": dev})

    # operator-basis reach: powers U_m^r land on (m*r mod n, r mod n), which
    # for composite n misses part of the clock/shift monomial grid
    reached = set()
    for r in range(1, n + 1):
        reached.add((r % n, 0))
    for m in range(1, n + 1):
        for r in range(1, n + 1):
            reached.add((m * r % n, r % n))
    missing = sorted(set((a, b) for a in range(n) for b in range(n)) - reached)
    if missing:
        witnesses.append(
            {
                "kind": "operator_basis_gap",
                "missing_count": len(missing),
                "examples": [list(pair) for pair in missing[:5]],
            }
        )

    # unbiasedness of the formula-built family
    scale = 1 / math.sqrt(n)
    bases = np.zeros((n + 1, n, n), dtype=complex)
    for k in range(1, n + 1):
        bases[0][k - 1][k - 1] = 1.0
    for m in range(1, n + 1):
        for k in range(1, n + 1):
            for j0 in range(n):
                j = j0 + 1
                e = (j * k - m * (j * (j - 1) // 2)) % n
                bases[m][k - 1][j0] = scale * np.exp(2j * np.pi * e / n)
    flagged = 0
    for m1 in range(n + 1):
        for m2 in range(m1 + 1, n + 1):
            overlaps = np.abs(bases[m1].conj() @ bases[m2].T) ** 2
            bad = np.argwhere(np.abs(overlaps - 1.0 / n) > atol)
            for k1, k2 in bad:
                if flagged < 5:
                    witnesses.append(
                        {
                            "kind": "unbiasedness",
                            "m": m1,
                            "k": int(k1) + 1,
                            "m2": m2,
                            "k2": int(k2) + 1,
                            "actual": float(overlaps[k1, k2]),
                        }
                    )
                flagged += 1
    if flagged > 5:
        witnesses.append({"kind": "unbiasedness_summary", "violations": flagged})

    return CompositeDiagnosis(n=n, witnesses=witnesses)
