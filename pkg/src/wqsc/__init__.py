"""Three-party quantum secure communication over W states.

A deterministic simulator and verification library: few-qubit state math,
the canonical W/GHZ states, the CH-Bell and security-event probabilities,
an individual-attack model coupling an ancilla to one transmitted qubit,
and seeded Monte Carlo engines for pair-wise key distribution, partial
secret sharing, and their synthesis.
"""

from .adversary import AttackConfig, UnitaryCouplingAttack, apply_attack, eve_ancilla_statistics
from .bell import (
    AT_LEAST_TWO,
    ALL_AXIS_SETS,
    AtLeastTwo,
    AxisSet,
    AxisSetKind,
    ChBellResult,
    QKD_AXIS_SETS,
    StrictPair,
    averaged_security_probability,
    ch_middle_term,
    prob_two_z_plus,
    prob_x_all_equal,
    prob_z_plus_x_unequal,
    security_event_probability,
)
from .protocol import (
    DEFAULT_ANNOUNCE_RATE,
    DEFAULT_EPSILON,
    Inference,
    InconsistentSharesError,
    Pair,
    ProtocolConfig,
    ProtocolMode,
    QubitAccounting,
    RunReport,
    SecurityVerdict,
    SynthesisBranch,
    TrialRecord,
    Verdict,
    VerdictKind,
    binomial_sigma,
    choose_axes,
    decider_step,
    is_security_event,
    iter_trials,
    key_accounting,
    partial_inference,
    pqss_step,
    reconstruct_dealer_bit,
    run_protocol,
    run_trial,
    security_check,
    synthesis_dispatch,
    trial_rng,
)
from .qcore import (
    Axis,
    DensityMatrix,
    EigensolverConvergenceError,
    InvalidStateError,
    Outcome,
    Party,
    StateVector,
    eigenvalues_hermitian,
    joint_probability,
    make_basis_state,
    measure_qubit,
    partial_transpose,
    reduced_density,
    three_tangle,
)
from .states import attacked_w_state, coupling_unitary, ghz_state, validate_attack_angle, w_state

__version__ = "0.1.0"
