"""Individual-attack injection on the quantum channel.

The eavesdropper prepares one fresh ancilla per trial in ``|z+>``, couples
it to a single transmitted qubit with the unitary of
:func:`wqsc.states.coupling_unitary`, and later measures the ancilla in the
z basis.  There is no quantum memory across trials.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .qcore import Axis, Outcome, Party, StateVector, joint_probability
from .states import coupling_unitary, validate_attack_angle


@dataclass(frozen=True)
class UnitaryCouplingAttack:
    """Couple an ancilla of strength ``phi`` to one party's qubit.

    ``phi = 0`` leaves the channel untouched (but still appends the
    ancilla); ``phi = pi/2`` is the maximal coupling.
    """

    phi: float
    target: Party = Party.CHARLIE

    def __post_init__(self) -> None:
        object.__setattr__(self, "phi", validate_attack_angle(self.phi))
        object.__setattr__(self, "target", Party(self.target))


AttackConfig = Optional[UnitaryCouplingAttack]


def _apply_two_qubit_unitary(
    amps: np.ndarray, unitary: np.ndarray, qubits: tuple[int, int], num_qubits: int
) -> np.ndarray:
    """Apply a 4x4 unitary to the ordered qubit pair of a dense state."""
    tensor = amps.reshape((2,) * num_qubits)
    moved = np.moveaxis(tensor, qubits, (0, 1))
    flat = moved.reshape(4, -1)
    updated = unitary @ flat
    return np.moveaxis(updated.reshape(moved.shape), (0, 1), qubits).reshape(-1)


def apply_attack(source: StateVector, attack: AttackConfig) -> StateVector:
    """Return the channel state seen by the parties, with ancilla if attacked.

    With no attack the source is returned unchanged.  Otherwise the ancilla
    ``|z+>`` is appended as the last qubit and the coupling unitary acts on
    (target, ancilla).
    """
    if attack is None:
        return source
    if source.num_qubits != 3:
        raise ValueError("the attack model couples to a three-qubit source state")
    n = source.num_qubits
    extended = np.zeros(2 << n, dtype=np.complex128)
    extended[::2] = source.amplitudes  # ancilla bit 0 == |z+>
    coupled = _apply_two_qubit_unitary(
        extended, coupling_unitary(attack.phi), (int(attack.target), n), n + 1
    )
    return StateVector(coupled)


def eve_ancilla_statistics(state: StateVector) -> float:
    """Marginal probability that a z measurement of the ancilla yields minus.

    On the attacked W state with coupling strength phi this equals
    sin(phi)^2 / 3, the weight the attack moves onto the ancilla.
    """
    if state.num_qubits != 4:
        raise ValueError("ancilla statistics require the four-qubit attacked state")
    return joint_probability(state, [(3, Axis.Z, Outcome.MINUS)])
