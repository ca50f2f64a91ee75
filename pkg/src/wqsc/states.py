"""Canonical states and operators for the three-party protocols.

Builds the symmetric three-qubit W state, the GHZ comparison state, the
ancilla-coupling unitary used by the eavesdropping model, and the
post-attack four-qubit state (parties A, B, C plus the ancilla E).
"""

from __future__ import annotations

import math

import numpy as np

from .qcore import StateVector

ATTACK_ANGLE_MAX = math.pi / 2.0

_INV_SQRT3 = 1.0 / math.sqrt(3.0)
_INV_SQRT2 = 1.0 / math.sqrt(2.0)

# Basis indices of the single-MINUS strings |-++>, |+-+>, |++-> under the
# MSB-first convention.
_W_INDICES = (4, 2, 1)


def validate_attack_angle(phi: float) -> float:
    """Check that the coupling strength lies in [0, pi/2]; returns it as float."""
    phi = float(phi)
    if not math.isfinite(phi) or not 0.0 <= phi <= ATTACK_ANGLE_MAX:
        raise ValueError(f"attack angle must lie in [0, pi/2], got {phi!r}")
    return phi


def w_state() -> StateVector:
    """Symmetric three-qubit W state: (|-++> + |+-+> + |++->)/sqrt(3)."""
    amps = np.zeros(8, dtype=np.complex128)
    amps[list(_W_INDICES)] = _INV_SQRT3
    return StateVector(amps)


def ghz_state() -> StateVector:
    """Maximal three-qubit GHZ state: (|+++> + |--->)/sqrt(2)."""
    amps = np.zeros(8, dtype=np.complex128)
    amps[0] = _INV_SQRT2
    amps[7] = _INV_SQRT2
    return StateVector(amps)


def coupling_unitary(phi: float) -> np.ndarray:
    """Two-qubit unitary coupling an intercepted channel qubit to an ancilla.

    Acting on (channel, ancilla) with the channel qubit as the MSB:

        |z+ z+> -> |z+ z+>
        |z- z+> -> cos(phi) |z- z+> + sin(phi) |z+ z->

    The remaining two basis vectors are completed minimally as
    ``|z+ z-> -> cos(phi) |z+ z-> - sin(phi) |z- z+>`` and ``|z- z->``
    fixed; the ancilla is always prepared in ``|z+>``, so the completion
    never acts on a reachable state.
    """
    phi = validate_attack_angle(phi)
    c = math.cos(phi)
    s = math.sin(phi)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, c, s, 0.0],
            [0.0, -s, c, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
        dtype=np.complex128,
    )


def attacked_w_state(phi: float) -> StateVector:
    """Four-qubit state (A, B, C, E) after coupling of strength phi on qubit C.

    Closed form:

        (|-+++> + |+-++> + cos(phi) |++-+> + sin(phi) |+++->) / sqrt(3)

    which is what appending an ancilla ``|z+>`` to the W state and applying
    ``coupling_unitary(phi)`` to (C, E) produces.  At phi = 0 the channel is
    untouched and the state factorizes as W tensor |z+>.
    """
    phi = validate_attack_angle(phi)
    amps = np.zeros(16, dtype=np.complex128)
    amps[0b1000] = _INV_SQRT3
    amps[0b0100] = _INV_SQRT3
    amps[0b0010] = _INV_SQRT3 * math.cos(phi)
    amps[0b0001] = _INV_SQRT3 * math.sin(phi)
    return StateVector(amps)
