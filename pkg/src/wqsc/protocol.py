"""Three-party protocol engine over the simulated W-state channel.

One trial: a fresh source state (attacked or not), independent axis choices,
local measurements, an optional public announcement of the outcomes, and a
verdict.  Three modes share the machinery and differ only in which axis
sets produce key material:

* key distribution (QKD): the sets with exactly one z measurer; the z
  measurer decides, and on a plus outcome the two x measurers keep their
  (equal) x outcomes as a shared pair key bit;
* partial secret sharing (PQSS): the all-z set; the dealer's outcome is the
  secret bit and the other two outcomes are the shares;
* synthesis (SYNTH): both at once, routed by the axis set.

Randomness: one root seed, split into independent per-trial substreams keyed
by the trial index, so any trial can be replayed in isolation and aggregation
order is irrelevant.  Within a trial the draw order is fixed: axis choices
for A, B, C; measurement draws for A, B, C (and the ancilla when present);
then the announcement draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping, NamedTuple

import numpy as np

from .adversary import AttackConfig, apply_attack
from .bell import AxisSet, AxisSetKind
from .qcore import Axis, Outcome, Party, StateVector, measure_qubit
from .states import w_state

DEFAULT_ANNOUNCE_RATE = 0.1
DEFAULT_EPSILON = 1e-9
MAX_SEED = 2**64 - 1

QUBITS_PER_TRIAL = 3

# Overall per-trial success probabilities: P(usable axis set) times
# P(success | set).  QKD: (3/8)(2/3) = 1/4; PQSS: 1/8 (every all-z trial
# succeeds); SYNTH is their sum.
QKD_SUCCESS_PROBABILITY = 0.25
PQSS_SUCCESS_PROBABILITY = 0.125
SYNTH_SUCCESS_PROBABILITY = 0.375

_PARTIES = (Party.ALICE, Party.BOB, Party.CHARLIE)


class InconsistentSharesError(ValueError):
    """Raised for share pairs that no trial on the W channel can produce."""


class ProtocolMode(Enum):
    QKD = "qkd"
    PQSS = "pqss"
    SYNTH = "synth"


MODE_SUCCESS_PROBABILITY: dict[ProtocolMode, float] = {
    ProtocolMode.QKD: QKD_SUCCESS_PROBABILITY,
    ProtocolMode.PQSS: PQSS_SUCCESS_PROBABILITY,
    ProtocolMode.SYNTH: SYNTH_SUCCESS_PROBABILITY,
}


class Pair(Enum):
    """Unordered pair of parties holding a common key string."""

    AB = (Party.ALICE, Party.BOB)
    AC = (Party.ALICE, Party.CHARLIE)
    BC = (Party.BOB, Party.CHARLIE)

    @property
    def members(self) -> tuple[Party, Party]:
        return self.value

    @classmethod
    def of(cls, first: Party, second: Party) -> "Pair":
        key = tuple(sorted((first, second)))
        for pair in cls:
            if pair.value == key:
                return pair
        raise ValueError(f"no pair for parties {first!r}, {second!r}")


class VerdictKind(Enum):
    KEY_QKD = "key_qkd"
    KEY_PQSS = "key_pqss"
    DISCARD = "discard"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    pair: Pair | None = None  # set only for KEY_QKD

    def __post_init__(self) -> None:
        if (self.kind is VerdictKind.KEY_QKD) != (self.pair is not None):
            raise ValueError("a pair is attached exactly to KEY_QKD verdicts")


DISCARD = Verdict(VerdictKind.DISCARD)


class SynthesisBranch(Enum):
    QKD = "qkd"
    PQSS = "pqss"
    DISCARD = "discard"


class Inference(Enum):
    """What a single secret share reveals about the dealer's bit."""

    DEALER_IS_PLUS = "dealer_is_plus"
    UNKNOWN = "unknown"


class SecurityVerdict(Enum):
    SECURE = "secure"
    COMPROMISED = "compromised"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ProtocolConfig:
    """Run parameters; a config plus the trial index determines a trial exactly."""

    mode: ProtocolMode
    trials: int
    seed: int
    announce_rate: float = DEFAULT_ANNOUNCE_RATE
    attack: AttackConfig = None
    epsilon: float = DEFAULT_EPSILON
    dealer: Party = Party.ALICE

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 0.0 <= self.announce_rate < 1.0:
            raise ValueError(f"announce_rate must lie in [0, 1), got {self.announce_rate!r}")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")


@dataclass(frozen=True)
class TrialRecord:
    """Everything one trial produced.

    ``outcomes`` holds the parties' private results indexed by party;
    ``key_bits`` is None for announced trials, whose outcomes are public
    and contribute no key material.
    """

    index: int
    axes: AxisSet
    outcomes: tuple[Outcome, Outcome, Outcome]
    announced: bool
    verdict: Verdict
    key_bits: Mapping[Party, Outcome] | None


@dataclass(frozen=True)
class RunReport:
    """Aggregated statistics of a full run; a pure function of the config."""

    mode: ProtocolMode
    trials: int
    seed: int
    announce_rate: float
    attack_phi: float | None
    attack_target: Party | None
    epsilon: float
    dealer: Party
    announced_trials: int
    qkd_axis_trials: int
    pqss_axis_trials: int
    qkd_success_trials: int
    pqss_success_trials: int
    success_trials: int
    empirical_success_rate: float
    analytic_success_probability: float
    key_bits_ab: int
    key_bits_ac: int
    key_bits_bc: int
    pqss_secret_bits: int
    total_key_bits: int
    discarded_trials: int
    qkd_disagreements: int
    pqss_reconstruction_failures: int
    announced_qkd_trials: int
    security_events: int
    security_event_frequency: float | None
    qubits_consumed: int
    formula_qubits: float
    qubits_per_key_bit: float | None
    security_verdict: SecurityVerdict


class QubitAccounting(NamedTuple):
    """Total qubit cost of a run, by the nominal formula and by exact count."""

    nominal: float
    exact: float


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent substream for one trial, keyed by (root seed, index)."""
    return np.random.default_rng([seed, index])


def choose_axes(rng: np.random.Generator) -> AxisSet:
    """Each party independently picks z or x with probability 1/2.

    Draw order is Alice, Bob, Charlie; a draw below 1/2 selects z.
    """
    draws = rng.random(3)
    a, b, c = (Axis.Z if u < 0.5 else Axis.X for u in draws)
    return AxisSet(a, b, c)


def decider_step(
    axes: AxisSet, outcomes: tuple[Outcome, Outcome, Outcome]
) -> tuple[Verdict, dict[Party, Outcome] | None]:
    """Key-distribution decision for one trial.

    On a QKD axis set the z measurer decides: a plus outcome tells the two
    x measurers to keep their (equal) x outcomes as a key bit for their
    pair; a minus outcome leaves the pair in a product state with
    uncorrelated x outcomes, so the trial is discarded.  Any other axis set
    is discarded.
    """
    if axes.kind is not AxisSetKind.QKD:
        return DISCARD, None
    decider = axes.decider
    assert decider is not None
    if outcomes[decider] is not Outcome.PLUS:
        return DISCARD, None
    x1, x2 = axes.x_parties  # type: ignore[misc]
    verdict = Verdict(VerdictKind.KEY_QKD, Pair.of(x1, x2))
    return verdict, {x1: outcomes[x1], x2: outcomes[x2]}


def pqss_step(
    axes: AxisSet, outcomes: tuple[Outcome, Outcome, Outcome], dealer: Party
) -> tuple[Verdict, dict[Party, Outcome] | None]:
    """Secret-sharing decision: the all-z set succeeds, everything else restarts.

    The dealer's outcome is the secret bit; the other two parties record
    their outcomes as shares.
    """
    if axes.kind is not AxisSetKind.PQSS:
        return DISCARD, None
    return Verdict(VerdictKind.KEY_PQSS), {p: outcomes[p] for p in _PARTIES}


def synthesis_dispatch(axes: AxisSet) -> SynthesisBranch:
    """Route one trial of the combined protocol by its axis set."""
    if axes.kind is AxisSetKind.PQSS:
        return SynthesisBranch.PQSS
    if axes.kind is AxisSetKind.QKD:
        return SynthesisBranch.QKD
    return SynthesisBranch.DISCARD


def reconstruct_dealer_bit(share_b: Outcome, share_c: Outcome) -> Outcome:
    """Combine the two shares of a secret-sharing trial into the dealer's bit.

    Equal plus shares mean the dealer measured minus; unequal shares mean
    plus.  Two minus shares cannot arise on the W channel (the all-minus
    and double-minus strings have amplitude zero) and raise.
    """
    if share_b is Outcome.MINUS and share_c is Outcome.MINUS:
        raise InconsistentSharesError("two minus shares cannot occur on the W channel")
    if share_b is share_c:
        return Outcome.MINUS
    return Outcome.PLUS


def partial_inference(own_share: Outcome) -> Inference:
    """What one share alone tells its holder about the dealer's bit.

    A minus share certifies that the dealer (and the other holder) measured
    plus; a plus share is uninformative on its own.  Over many trials the
    certifying share occurs with probability 1/3.
    """
    if own_share is Outcome.MINUS:
        return Inference.DEALER_IS_PLUS
    return Inference.UNKNOWN


def is_security_event(record: TrialRecord) -> bool:
    """Security-check event: the z measurer saw plus, the x measurers disagree.

    Defined only on QKD axis sets; its probability is exactly zero without
    an attack, so any occurrence indicates tampering.
    """
    if record.axes.kind is not AxisSetKind.QKD:
        return False
    decider = record.axes.decider
    assert decider is not None
    x1, x2 = record.axes.x_parties  # type: ignore[misc]
    return (
        record.outcomes[decider] is Outcome.PLUS
        and record.outcomes[x1] is not record.outcomes[x2]
    )


def _resolve_verdict(
    mode: ProtocolMode,
    axes: AxisSet,
    outcomes: tuple[Outcome, Outcome, Outcome],
    dealer: Party,
) -> tuple[Verdict, dict[Party, Outcome] | None]:
    if mode is ProtocolMode.QKD:
        return decider_step(axes, outcomes)
    if mode is ProtocolMode.PQSS:
        return pqss_step(axes, outcomes, dealer)
    branch = synthesis_dispatch(axes)
    if branch is SynthesisBranch.PQSS:
        return pqss_step(axes, outcomes, dealer)
    if branch is SynthesisBranch.QKD:
        return decider_step(axes, outcomes)
    return DISCARD, None


def run_trial(
    config: ProtocolConfig, index: int, _source: StateVector | None = None
) -> TrialRecord:
    """Execute one trial; deterministic in (config.seed, index).

    A fresh source state is prepared (with the attack applied when one is
    configured), each party measures its qubit along its chosen axis, the
    ancilla is measured in z when present, and the announcement flag is
    drawn.  Announced trials keep their verdict but carry no key bits.
    """
    if index < 0:
        raise ValueError("trial index must be non-negative")
    rng = trial_rng(config.seed, index)
    axes = choose_axes(rng)
    state = _source if _source is not None else apply_attack(w_state(), config.attack)

    outcome_list = []
    for party in _PARTIES:
        outcome, state, _ = measure_qubit(state, party, axes.axis_of(party), rng.random())
        outcome_list.append(outcome)
    if state.num_qubits == 4:
        # The eavesdropper's own z measurement; her outcome stays private
        # and does not enter the record.
        measure_qubit(state, 3, Axis.Z, rng.random())
    outcomes = (outcome_list[0], outcome_list[1], outcome_list[2])

    announced = bool(rng.random() < config.announce_rate)
    verdict, key_bits = _resolve_verdict(config.mode, axes, outcomes, config.dealer)
    if announced:
        key_bits = None
    return TrialRecord(index, axes, outcomes, announced, verdict, key_bits)


def iter_trials(config: ProtocolConfig) -> Iterator[TrialRecord]:
    """Yield the run's trials in index order, preparing the source once."""
    source = apply_attack(w_state(), config.attack)
    for index in range(config.trials):
        yield run_trial(config, index, _source=source)


def security_check(records: Iterable[TrialRecord], epsilon: float) -> SecurityVerdict:
    """Verdict from the announced QKD-set trials.

    The event frequency is exactly zero on the unattacked channel, so the
    run is flagged compromised as soon as the observed frequency exceeds
    ``epsilon``; with the default epsilon a single event suffices.  With no
    announced QKD-set trial there is no evidence either way and the result
    is inconclusive rather than secure.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    relevant = 0
    events = 0
    for record in records:
        if not record.announced or record.axes.kind is not AxisSetKind.QKD:
            continue
        relevant += 1
        if is_security_event(record):
            events += 1
    if relevant == 0:
        return SecurityVerdict.INCONCLUSIVE
    frequency = events / relevant
    return SecurityVerdict.COMPROMISED if frequency > epsilon else SecurityVerdict.SECURE


def key_accounting(
    key_bits: int,
    success_probability: float,
    trials: int,
    announced_trials: int,
    qubits_per_trial: int = QUBITS_PER_TRIAL,
) -> QubitAccounting:
    """Qubit cost of distributing ``key_bits`` key bits.

    ``nominal`` applies the resource formula q * K / (P_s * (1 + M/N)); its
    (1 + M/N) discount is the first-order form of the exact (1 - M/N)
    divisor, and the two agree as M/N -> 0.  ``exact`` is the literal
    consumption q * N.  With three qubits per trial and no announcements
    the nominal cost per key bit is 12 for QKD, 24 for PQSS, and 8 for the
    synthesis protocol.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 0 <= announced_trials <= trials:
        raise ValueError("announced trials must lie in [0, trials]")
    if not 0.0 < success_probability <= 1.0:
        raise ValueError("success probability must lie in (0, 1]")
    if key_bits < 0:
        raise ValueError("key bit count cannot be negative")
    if qubits_per_trial < 1:
        raise ValueError("qubits per trial must be at least 1")
    ratio = announced_trials / trials
    nominal = qubits_per_trial * key_bits / (success_probability * (1.0 + ratio))
    return QubitAccounting(nominal=nominal, exact=float(qubits_per_trial * trials))


class _Aggregator:
    """Deterministic fold of trial records into a RunReport."""

    def __init__(self, config: ProtocolConfig) -> None:
        self.config = config
        self.announced = 0
        self.axis_counts = {AxisSetKind.QKD: 0, AxisSetKind.PQSS: 0, AxisSetKind.USELESS: 0}
        self.qkd_successes = 0
        self.pqss_successes = 0
        self.pair_bits = {Pair.AB: 0, Pair.AC: 0, Pair.BC: 0}
        self.pqss_bits = 0
        self.discarded = 0
        self.qkd_disagreements = 0
        self.pqss_failures = 0
        self.announced_qkd = 0
        self.security_events = 0

    def add(self, record: TrialRecord) -> None:
        self.axis_counts[record.axes.kind] += 1
        if record.verdict.kind is VerdictKind.KEY_QKD:
            self.qkd_successes += 1
        elif record.verdict.kind is VerdictKind.KEY_PQSS:
            self.pqss_successes += 1

        if record.announced:
            self.announced += 1
            if record.axes.kind is AxisSetKind.QKD:
                self.announced_qkd += 1
                if is_security_event(record):
                    self.security_events += 1
            return

        if record.verdict.kind is VerdictKind.KEY_QKD:
            pair = record.verdict.pair
            assert pair is not None and record.key_bits is not None
            self.pair_bits[pair] += 1
            first, second = pair.members
            if record.key_bits[first] is not record.key_bits[second]:
                self.qkd_disagreements += 1
        elif record.verdict.kind is VerdictKind.KEY_PQSS:
            assert record.key_bits is not None
            self.pqss_bits += 1
            dealer = self.config.dealer
            shares = [record.key_bits[p] for p in _PARTIES if p != dealer]
            try:
                recovered = reconstruct_dealer_bit(shares[0], shares[1])
            except InconsistentSharesError:
                recovered = None
            if recovered is not record.key_bits[dealer]:
                self.pqss_failures += 1
        else:
            self.discarded += 1

    def report(self) -> RunReport:
        config = self.config
        trials = config.trials
        total_key_bits = sum(self.pair_bits.values()) + self.pqss_bits
        success_trials = self.qkd_successes + self.pqss_successes
        p_s = MODE_SUCCESS_PROBABILITY[config.mode]
        accounting = key_accounting(total_key_bits, p_s, trials, self.announced)
        frequency = (
            self.security_events / self.announced_qkd if self.announced_qkd else None
        )
        verdict = (
            SecurityVerdict.INCONCLUSIVE
            if self.announced_qkd == 0
            else (
                SecurityVerdict.COMPROMISED
                if frequency is not None and frequency > config.epsilon
                else SecurityVerdict.SECURE
            )
        )
        return RunReport(
            mode=config.mode,
            trials=trials,
            seed=config.seed,
            announce_rate=config.announce_rate,
            attack_phi=config.attack.phi if config.attack is not None else None,
            attack_target=config.attack.target if config.attack is not None else None,
            epsilon=config.epsilon,
            dealer=config.dealer,
            announced_trials=self.announced,
            qkd_axis_trials=self.axis_counts[AxisSetKind.QKD],
            pqss_axis_trials=self.axis_counts[AxisSetKind.PQSS],
            qkd_success_trials=self.qkd_successes,
            pqss_success_trials=self.pqss_successes,
            success_trials=success_trials,
            empirical_success_rate=success_trials / trials,
            analytic_success_probability=p_s,
            key_bits_ab=self.pair_bits[Pair.AB],
            key_bits_ac=self.pair_bits[Pair.AC],
            key_bits_bc=self.pair_bits[Pair.BC],
            pqss_secret_bits=self.pqss_bits,
            total_key_bits=total_key_bits,
            discarded_trials=self.discarded,
            qkd_disagreements=self.qkd_disagreements,
            pqss_reconstruction_failures=self.pqss_failures,
            announced_qkd_trials=self.announced_qkd,
            security_events=self.security_events,
            security_event_frequency=frequency,
            qubits_consumed=QUBITS_PER_TRIAL * trials,
            formula_qubits=accounting.nominal,
            qubits_per_key_bit=(
                QUBITS_PER_TRIAL * trials / total_key_bits if total_key_bits else None
            ),
            security_verdict=verdict,
        )


def run_protocol(config: ProtocolConfig) -> RunReport:
    """Execute all trials and aggregate; identical configs give identical reports."""
    agg = _Aggregator(config)
    for record in iter_trials(config):
        agg.add(record)
    return agg.report()


def binomial_sigma(p: float, n: int) -> float:
    """Standard deviation of an empirical frequency of n Bernoulli(p) draws."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return math.sqrt(p * (1.0 - p) / n)
