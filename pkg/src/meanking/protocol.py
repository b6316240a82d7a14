"""The retrodiction protocol on an object-ancilla pair.

The physicist prepares the maximally entangled state of two p-dimensional
systems, the king measures one of the p+1 complementary observables on the
object, and the physicist then measures a basis of p^2 bipartite "bracket"
states, each labeled by the tuple of outcomes (k_0, ..., k_p) it is
compatible with.  Orthogonality to every incompatible post-measurement state
makes the inference certain: the announced answer is just the label slot of
the measured observable.

Exact-backend states store p^2 cyclotomic amplitudes and every orthogonality
claim is a literal ring zero; the float backend mirrors the construction in
ordinary complex arithmetic.  Sampling uses inverse-CDF over exactly computed
rational probabilities where the exact backend is in play.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cyclotomic import Amplitude, CyclotomicInt, exact_overlap
from .mub import (
    EXACT,
    FLOAT,
    FLOAT_ATOL,
    CheckReport,
    MubFamily,
    PrimeDim,
    build_mub_family,
    _check_backend,
)

# largest p for which sampling probabilities are computed in exact rationals
SAMPLING_EXACT_MAX_P = 13

PRNG_NAME = "random.Random (Mersenne Twister), per-round seed '<seed>:<round>'"


def residue_label(p: int, x: int) -> int:
    """Map an integer to its residue representative in {1..p} (0 maps to p)."""
    return (x - 1) % p + 1


@dataclass(frozen=True)
class BracketLabel:
    """The outcome tuple (k_0, ..., k_p) a bracket state is compatible with."""

    p: int
    slots: tuple[int, ...]

    def __post_init__(self):
        if len(self.slots) != self.p + 1:
            raise ValueError(f"need {self.p + 1} slots, got {len(self.slots)}")
        if not all(1 <= k <= self.p for k in self.slots):
            raise ValueError(f"slots must lie in 1..{self.p}: {self.slots}")

    def k(self, m: int) -> int:
        return self.slots[m]

    def agreements(self, other: "BracketLabel") -> int:
        if self.p != other.p:
            raise ValueError("label dimension mismatch")
        return sum(a == b for a, b in zip(self.slots, other.slots))

    def to_json(self) -> list[int]:
        return list(self.slots)


def measurement_label(dim: PrimeDim, k0: int, k1: int) -> BracketLabel:
    """The basis label with k_m = (m-1)k_0 + k_1 mod p for m >= 2."""
    p = dim.p
    if not (1 <= k0 <= p and 1 <= k1 <= p):
        raise ValueError("k0 and k1 must lie in 1..p")
    slots = [k0, k1] + [residue_label(p, (m - 1) * k0 + k1) for m in range(2, p + 1)]
    return BracketLabel(p=p, slots=tuple(slots))


@dataclass(frozen=True)
class BipartiteState:
    """A p^2-component object-ancilla state in the computational product basis.

    Component (j_obj, j_anc) sits at flat index j_obj * p + j_anc (0-based).
    """

    p: int
    backend: str
    amps: tuple | np.ndarray

    def component(self, j_obj: int, j_anc: int):
        return self.amps[j_obj * self.p + j_anc]

    def overlap(self, other: "BipartiteState"):
        """<self|other>, exact Amplitude or complex depending on backend."""
        if self.backend != other.backend:
            raise ValueError("backend mismatch")
        if self.backend == EXACT:
            return exact_overlap(self.amps, other.amps)
        return complex(np.vdot(self.amps, other.amps))

    def to_float(self) -> np.ndarray:
        if self.backend == FLOAT:
            return np.asarray(self.amps)
        return np.array([a.to_complex() for a in self.amps], dtype=complex)


def _families(dim: PrimeDim, backend: str) -> tuple[MubFamily, MubFamily]:
    return (
        build_mub_family(dim, "object", backend),
        build_mub_family(dim, "ancilla", backend),
    )


def post_measurement_state(
    dim: PrimeDim, m: int, k: int, backend: str = EXACT, families=None
) -> BipartiteState:
    """The product state |m_k> (x) |m-bar_k> left after the king's measurement."""
    _check_backend(backend)
    p = dim.p
    obj_fam, anc_fam = families if families is not None else _families(dim, backend)
    obj = obj_fam.ket(m, k)
    anc = anc_fam.ket(m, k)
    if backend == EXACT:
        amps = tuple(obj[i] * anc[j] for i in range(p) for j in range(p))
        return BipartiteState(p=p, backend=EXACT, amps=amps)
    return BipartiteState(p=p, backend=FLOAT, amps=np.kron(obj, anc))


def maximally_entangled_state(
    dim: PrimeDim, via_m: int = 0, backend: str = EXACT, families=None
) -> BipartiteState:
    """The preparation state p^{-1/2} sum_k |m_k m-bar_k>; identical for every via_m."""
    _check_backend(backend)
    p = dim.p
    if not 0 <= via_m <= p:
        raise ValueError(f"via_m must be in 0..{p}, got {via_m}")
    if families is None:
        families = _families(dim, backend)
    if backend == EXACT:
        half = Amplitude(CyclotomicInt.one(p), 1)
        total = [Amplitude.zero(p)] * (p * p)
        for k in range(1, p + 1):
            state = post_measurement_state(dim, via_m, k, EXACT, families)
            total = [acc + amp for acc, amp in zip(total, state.amps)]
        return BipartiteState(p=p, backend=EXACT, amps=tuple(a * half for a in total))
    total = np.zeros(p * p, dtype=complex)
    for k in range(1, p + 1):
        total += post_measurement_state(dim, via_m, k, FLOAT, families).amps
    return BipartiteState(p=p, backend=FLOAT, amps=total / math.sqrt(p))


def entangled_basis(
    dim: PrimeDim, backend: str = EXACT, families=None
) -> list[BipartiteState]:
    """The p^2 orthonormal bipartite states: the entangled preparation state at
    index 0, then index (p-1)m + j holds p^{-1/2} sum_k q^{-jk} |m_k m-bar_k>
    for m = 0..p, j = 1..p-1."""
    _check_backend(backend)
    p = dim.p
    if families is None:
        families = _families(dim, backend)
    states: list = [None] * (p * p)
    states[0] = maximally_entangled_state(dim, 0, backend, families)
    posts = {
        (m, k): post_measurement_state(dim, m, k, backend, families)
        for m in range(p + 1)
        for k in range(1, p + 1)
    }
    if backend == EXACT:
        half = Amplitude(CyclotomicInt.one(p), 1)
        for m in range(p + 1):
            for j in range(1, p):
                total = [Amplitude.zero(p)] * (p * p)
                for k in range(1, p + 1):
                    phase = Amplitude(CyclotomicInt.root_power(p, -j * k))
                    total = [
                        acc + phase * amp
                        for acc, amp in zip(total, posts[(m, k)].amps)
                    ]
                states[(p - 1) * m + j] = BipartiteState(
                    p=p, backend=EXACT, amps=tuple(a * half for a in total)
                )
        return states
    for m in range(p + 1):
        for j in range(1, p):
            total = np.zeros(p * p, dtype=complex)
            for k in range(1, p + 1):
                total += np.exp(-2j * np.pi * j * k / p) * posts[(m, k)].amps
            states[(p - 1) * m + j] = BipartiteState(
                p=p, backend=FLOAT, amps=total / math.sqrt(p)
            )
    return states


def bracket_state(
    dim: PrimeDim, label: BracketLabel, backend: str = EXACT, basis=None
) -> BipartiteState:
    """The unit state orthogonal to |m_k' m-bar_k'> whenever k' differs from
    the label's slot k_m, expanded over the entangled basis."""
    _check_backend(backend)
    p = dim.p
    if label.p != p:
        raise ValueError("label dimension mismatch")
    if basis is None:
        basis = entangled_basis(dim, backend)
    if backend == EXACT:
        total = list(basis[0].amps)
        for m in range(p + 1):
            km = label.k(m)
            for j in range(1, p):
                phase = Amplitude(CyclotomicInt.root_power(p, j * km))
                total = [
                    acc + phase * amp
                    for acc, amp in zip(total, basis[(p - 1) * m + j].amps)
                ]
        inv_p = Amplitude(CyclotomicInt.one(p), 2)
        return BipartiteState(p=p, backend=EXACT, amps=tuple(a * inv_p for a in total))
    total = np.array(basis[0].amps, dtype=complex)
    for m in range(p + 1):
        km = label.k(m)
        for j in range(1, p):
            total += np.exp(2j * np.pi * j * km / p) * basis[(p - 1) * m + j].amps
    return BipartiteState(p=p, backend=FLOAT, amps=total / p)


def bracket_overlap_closed_form(a: BracketLabel, b: BracketLabel) -> Fraction:
    """<[a]|[b]> as the rational (agreements - 1)/p."""
    return Fraction(a.agreements(b) - 1, a.p)


def measurement_basis(
    dim: PrimeDim, backend: str = EXACT
) -> list[tuple[BracketLabel, BipartiteState]]:
    """The physicist's p^2 labeled basis states, ordered by (k0-1)*p + (k1-1)."""
    p = dim.p
    basis = entangled_basis(dim, backend)
    out = []
    for k0 in range(1, p + 1):
        for k1 in range(1, p + 1):
            label = measurement_label(dim, k0, k1)
            out.append((label, bracket_state(dim, label, backend, basis)))
    return out


# --- verification drivers ---


def verify_entangled_basis(dim: PrimeDim, backend: str = EXACT, atol: float = FLOAT_ATOL) -> CheckReport:
    """Check the p^2 x p^2 Gram matrix of the entangled basis is the identity."""
    report = CheckReport(name="entangled_basis")
    basis = entangled_basis(dim, backend)
    if backend == EXACT:
        one = Fraction(1)
        for i, a in enumerate(basis):
            for j, b in enumerate(basis):
                ov = a.overlap(b)
                report.checks += 1
                ok = ov.squared_modulus().as_fraction() == one if i == j else ov.is_zero()
                if not ok:
                    report.violations.append({"n": i, "n2": j})
        return report
    mat = np.array([s.amps for s in basis])
    gram = mat.conj() @ mat.T
    report.checks = gram.size
    bad = np.argwhere(np.abs(gram - np.eye(len(basis))) > atol)
    for i, j in bad[:20]:
        report.violations.append({"n": int(i), "n2": int(j), "actual": complex(gram[i, j]).real})
    return report


def verify_measurement_basis(dim: PrimeDim, backend: str = EXACT, atol: float = FLOAT_ATOL) -> CheckReport:
    """Check the labeled basis is orthonormal and resolves the identity."""
    report = CheckReport(name="measurement_basis")
    p = dim.p
    family = measurement_basis(dim, backend)
    if backend == EXACT:
        for i, (la, a) in enumerate(family):
            for j, (lb, b) in enumerate(family):
                ov = a.overlap(b)
                report.checks += 1
                ok = ov.squared_modulus().as_fraction() == 1 if i == j else ov.is_zero()
                if not ok:
                    report.violations.append({"label": la.to_json(), "label2": lb.to_json()})
        nsq = p * p
        total = [[Amplitude.zero(p) for _ in range(nsq)] for _ in range(nsq)]
        for _, state in family:
            for r in range(nsq):
                if state.amps[r].is_zero():
                    continue
                for c in range(nsq):
                    total[r][c] = total[r][c] + state.amps[r] * state.amps[c].conjugate()
        for r in range(nsq):
            for c in range(nsq):
                report.checks += 1
                entry = total[r][c]
                ok = entry.as_fraction() == 1 if r == c else entry.is_zero()
                if not ok:
                    report.violations.append({"kind": "completeness", "row": r, "col": c})
        return report
    mat = np.array([s.amps for _, s in family])
    gram = mat.conj() @ mat.T
    report.checks = gram.size
    if np.max(np.abs(gram - np.eye(len(family)))) > atol:
        bad = np.argwhere(np.abs(gram - np.eye(len(family))) > atol)
        for i, j in bad[:20]:
            report.violations.append(
                {"label": family[i][0].to_json(), "label2": family[j][0].to_json()}
            )
    resolution = mat.T @ mat.conj()
    report.checks += resolution.size
    if np.max(np.abs(resolution - np.eye(p * p))) > atol:
        report.violations.append({"kind": "completeness"})
    return report


def verify_retrodiction(dim: PrimeDim, backend: str = EXACT, atol: float = FLOAT_ATOL) -> CheckReport:
    """Static certainty: after any (m, k) outcome, only labels with k_m = k have
    nonzero Born weight, and each carries exactly 1/p."""
    report = CheckReport(name="retrodiction")
    p = dim.p
    setup = RetrodictionSetup(dim, backend)
    uniform = Fraction(1, p) if backend == EXACT else 1.0 / p
    for m in range(p + 1):
        for k in range(1, p + 1):
            for label, w in zip(setup.labels, setup.outcome_weights[(m, k)]):
                report.checks += 1
                want = uniform if label.k(m) == k else 0
                ok = w == want if backend == EXACT else abs(w - want) <= atol
                if not ok:
                    report.violations.append(
                        {"m": m, "k": k, "label": label.to_json(), "weight": float(w)}
                    )
    return report


def verify_bracket_closed_form(
    dim: PrimeDim,
    backend: str = EXACT,
    atol: float = FLOAT_ATOL,
    sample_pairs: int | None = None,
    seed: int = 0,
) -> CheckReport:
    """Direct bracket-state inner products against the rational closed form.

    Exhaustive over all (p^(p+1))^2 label pairs when sample_pairs is None
    (sensible only for p = 2, 3); otherwise that many random pairs.
    """
    report = CheckReport(name="bracket_closed_form")
    p = dim.p
    basis = entangled_basis(dim, backend)
    if sample_pairs is None:
        labels = [
            BracketLabel(p, slots)
            for slots in itertools.product(range(1, p + 1), repeat=p + 1)
        ]
        pairs = [(a, b) for a in labels for b in labels]
    else:
        rng = random.Random(seed)
        pairs = []
        for _ in range(sample_pairs):
            a = BracketLabel(p, tuple(rng.randint(1, p) for _ in range(p + 1)))
            b = BracketLabel(p, tuple(rng.randint(1, p) for _ in range(p + 1)))
            pairs.append((a, b))
    cache: dict[BracketLabel, BipartiteState] = {}

    def state_of(label):
        if label not in cache:
            cache[label] = bracket_state(dim, label, backend, basis)
        return cache[label]

    for a, b in pairs:
        want = bracket_overlap_closed_form(a, b)
        ov = state_of(a).overlap(state_of(b))
        report.checks += 1
        if backend == EXACT:
            ok = ov.as_fraction() == want
        else:
            ok = abs(ov - complex(want)) <= atol
        if not ok:
            report.violations.append({"label": a.to_json(), "label2": b.to_json()})
    return report


# --- protocol rounds ---


@dataclass(frozen=True)
class RoundRecord:
    """One full round: choices, outcomes, the announced answer and its correctness."""

    seed: str
    king_choice: int
    king_outcome: int
    physicist_outcome: BracketLabel
    announced_answer: int
    correct: bool

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "king_choice": self.king_choice,
            "king_outcome": self.king_outcome,
            "physicist_outcome": self.physicist_outcome.to_json(),
            "announced_answer": self.announced_answer,
            "correct": self.correct,
        }


class RetrodictionSetup:
    """Precomputed states and Born weights shared across protocol rounds."""

    def __init__(self, dim: PrimeDim, backend: str | None = None):
        if backend is None:
            backend = EXACT if dim.p <= SAMPLING_EXACT_MAX_P else FLOAT
        _check_backend(backend)
        self.dim = dim
        self.backend = backend
        p = dim.p
        families = _families(dim, backend)
        self.prepared = maximally_entangled_state(dim, 0, backend, families)
        self.posts = {
            (m, k): post_measurement_state(dim, m, k, backend, families)
            for m in range(p + 1)
            for k in range(1, p + 1)
        }
        self.basis = measurement_basis(dim, backend)
        self.labels = [label for label, _ in self.basis]
        exact = backend == EXACT
        self.king_weights = {
            m: [
                _born_weight(self.posts[(m, k)], self.prepared, exact)
                for k in range(1, p + 1)
            ]
            for m in range(p + 1)
        }
        self.outcome_weights = {
            (m, k): [
                _born_weight(state, self.posts[(m, k)], exact)
                for _, state in self.basis
            ]
            for m in range(p + 1)
            for k in range(1, p + 1)
        }


def _born_weight(bra_state: BipartiteState, ket_state: BipartiteState, exact: bool):
    if exact:
        return bra_state.overlap(ket_state).squared_modulus().as_fraction()
    return abs(bra_state.overlap(ket_state)) ** 2


def _sample_index(weights: Sequence, rng: random.Random) -> int:
    if isinstance(weights[0], Fraction):
        denom = math.lcm(*[w.denominator for w in weights])
        ints = [int(w * denom) for w in weights]
        total = sum(ints)
        x = rng.randrange(total)
        acc = 0
        for i, w in enumerate(ints):
            acc += w
            if x < acc:
                return i
        raise AssertionError("inverse CDF fell off the end of exact weights")
    total = float(sum(weights))
    x = rng.random() * total
    acc = 0.0
    for i, w in enumerate(weights):
        acc += w
        if x < acc:
            return i
    return len(weights) - 1


def run_round(
    dim: PrimeDim,
    king_choice: int | None = None,
    rng_seed: int | str = 0,
    setup: RetrodictionSetup | None = None,
) -> RoundRecord:
    """Play one round: sample the king's outcome and the physicist's outcome by
    the Born rule, announce the label slot of the measured observable."""
    if setup is None:
        setup = RetrodictionSetup(dim)
    p = dim.p
    rng = random.Random(str(rng_seed))
    if king_choice is None:
        m = rng.randrange(p + 1)
    else:
        if not 0 <= king_choice <= p:
            raise ValueError(f"king_choice must be in 0..{p}, got {king_choice}")
        m = king_choice
    k = 1 + _sample_index(setup.king_weights[m], rng)
    outcome_idx = _sample_index(setup.outcome_weights[(m, k)], rng)
    label = setup.labels[outcome_idx]
    announced = label.k(m)
    return RoundRecord(
        seed=str(rng_seed),
        king_choice=m,
        king_outcome=k,
        physicist_outcome=label,
        announced_answer=announced,
        correct=announced == k,
    )


@dataclass
class SimulationSummary:
    """Aggregate of many rounds, reproducible from the master seed."""

    p: int
    rounds: int
    successes: int
    seed: int
    strategy: str
    backend: str
    histogram: dict = field(default_factory=dict)
    records: list[RoundRecord] | None = None

    @property
    def success_rate(self) -> float:
        return self.successes / self.rounds if self.rounds else 0.0

    def to_json(self, include_records: bool = False) -> dict:
        doc = {
            "p": self.p,
            "rounds": self.rounds,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "seed": self.seed,
            "strategy": self.strategy,
            "backend": self.backend,
            "prng": PRNG_NAME,
            "histogram": {
                str(m): {str(k): count for k, count in sorted(row.items())}
                for m, row in sorted(self.histogram.items())
            },
        }
        if include_records and self.records is not None:
            doc["rounds_detail"] = [r.to_json() for r in self.records]
        return doc


def parse_strategy(strategy: str, p: int) -> int | None:
    """'uniform' -> None (sample m per round); 'fixed:<m>' -> that m."""
    if strategy == "uniform":
        return None
    if strategy.startswith("fixed:"):
        try:
            m = int(strategy.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"malformed strategy {strategy!r}") from None
        if not 0 <= m <= p:
            raise ValueError(f"fixed strategy label must be in 0..{p}, got {m}")
        return m
    raise ValueError(f"unknown strategy {strategy!r}")


def simulate(
    dim: PrimeDim,
    rounds: int,
    strategy: str = "uniform",
    seed: int = 0,
    backend: str | None = None,
    keep_records: bool = False,
) -> SimulationSummary:
    """Play many rounds with per-round seeds derived from the master seed."""
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    p = dim.p
    fixed_m = parse_strategy(strategy, p)
    setup = RetrodictionSetup(dim, backend)
    histogram: dict[int, dict[int, int]] = {}
    records = [] if keep_records else None
    successes = 0
    for i in range(rounds):
        record = run_round(dim, fixed_m, f"{seed}:{i}", setup)
        if record.correct:
            successes += 1
        row = histogram.setdefault(record.king_choice, {})
        row[record.king_outcome] = row.get(record.king_outcome, 0) + 1
        if records is not None:
            records.append(record)
    return SimulationSummary(
        p=p,
        rounds=rounds,
        successes=successes,
        seed=seed,
        strategy=strategy,
        backend=setup.backend,
        histogram=histogram,
        records=records,
    )
