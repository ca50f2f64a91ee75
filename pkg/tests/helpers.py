"""Shared test utilities: random states and independent oracles.

The oracles deliberately take different routes than the production code:
probabilities by exhaustive enumeration over outcome strings, eigenvalues
through numpy's LAPACK bindings, and the three-way tangle through the
residual construction (pair concurrences subtracted from the one-vs-rest
tangle) instead of the hyperdeterminant.
"""

from __future__ import annotations

import itertools

import numpy as np

from wqsc import Axis, Outcome, StateVector, joint_probability


def random_state(rng: np.random.Generator, num_qubits: int) -> StateVector:
    amps = rng.normal(size=2**num_qubits) + 1j * rng.normal(size=2**num_qubits)
    return StateVector(amps / np.linalg.norm(amps))


def random_product_state(rng: np.random.Generator, num_qubits: int = 3) -> StateVector:
    amps = np.ones(1, dtype=complex)
    for _ in range(num_qubits):
        single = rng.normal(size=2) + 1j * rng.normal(size=2)
        amps = np.kron(amps, single / np.linalg.norm(single))
    return StateVector(amps)


def permute_qubits(state: StateVector, perm: tuple[int, ...]) -> StateVector:
    """Relabel qubits so that new qubit k is old qubit perm[k]."""
    n = state.num_qubits
    tensor = state.amplitudes.reshape((2,) * n)
    return StateVector(tensor.transpose(perm).reshape(-1))


def enumerate_event_probability(state, qubit_axes, predicate) -> float:
    """Brute-force oracle: sum joint_probability over all outcome strings.

    ``qubit_axes`` is a sequence of (qubit, Axis); ``predicate`` receives a
    dict mapping qubit -> Outcome and selects the event's strings.
    """
    qubits = [q for q, _ in qubit_axes]
    total = 0.0
    for combo in itertools.product(tuple(Outcome), repeat=len(qubits)):
        assignment = dict(zip(qubits, combo))
        if predicate(assignment):
            constraints = [(q, axis, assignment[q]) for q, axis in qubit_axes]
            total += joint_probability(state, constraints)
    return total


def z_axes(*qubits: int) -> list[tuple[int, Axis]]:
    return [(q, Axis.Z) for q in qubits]


def partial_trace_oracle(state: StateVector, keep: tuple[int, ...]) -> np.ndarray:
    """Independent partial trace by explicit summation over bit patterns."""
    n = state.num_qubits
    amps = state.amplitudes
    discard = [q for q in range(n) if q not in keep]

    def full_index(kept_bits: int, traced_bits: int) -> int:
        index = 0
        for pos, q in enumerate(keep):
            index |= ((kept_bits >> (len(keep) - 1 - pos)) & 1) << (n - 1 - q)
        for pos, q in enumerate(discard):
            index |= ((traced_bits >> (len(discard) - 1 - pos)) & 1) << (n - 1 - q)
        return index

    dim = 2 ** len(keep)
    rho = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            for k in range(2 ** len(discard)):
                rho[i, j] += amps[full_index(i, k)] * np.conj(amps[full_index(j, k)])
    return rho


def concurrence_oracle(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix via numpy.linalg."""
    sigma_y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    flip = np.kron(sigma_y, sigma_y)
    r = rho @ flip @ rho.conj() @ flip
    roots = np.sqrt(np.clip(np.linalg.eigvals(r).real, 0.0, None))
    roots = np.sort(roots)[::-1]
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def residual_tangle_oracle(state: StateVector) -> float:
    """Three-way tangle as one-vs-rest tangle minus the squared pair concurrences."""
    rho_a = partial_trace_oracle(state, (0,))
    tau_one_vs_rest = 4.0 * float(np.linalg.det(rho_a).real)
    c_ab = concurrence_oracle(partial_trace_oracle(state, (0, 1)))
    c_ac = concurrence_oracle(partial_trace_oracle(state, (0, 2)))
    return tau_one_vs_rest - c_ab**2 - c_ac**2
