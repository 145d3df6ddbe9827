"""Brute-force statevector path used to check every closed form.

Two-qubit vectors are stored over the product basis in the fixed order
(up-up, up-down, down-up, down-down), qubit A first.  A measurement frame is
applied as the projection onto its kets, amplitude <e|psi>, so after the
rotation index 0 means |e> and index 1 means |e-bar> on each side.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, InvariantError
from .pair import CorrelationSign, JointProbabilities, PairAmplitudes
from .qubit import ALGEBRAIC_TOL, TAU, BasisFrame, QubitState, frame_matrix

MIN_GRID_POINTS = 64


@dataclass(frozen=True, eq=False)
class TwoQubitVector:
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (4,):
            raise DomainError(f"expected 4 amplitudes, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise DomainError("amplitudes must be finite")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > ALGEBRAIC_TOL:
            raise InvariantError(f"vector is not normalized: |psi|^2 = {norm2!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def __repr__(self):
        return f"TwoQubitVector({self.amplitudes.tolist()!r})"

    def as_matrix(self) -> np.ndarray:
        """Amplitudes as psi[a, b] with a indexing qubit A."""
        return self.amplitudes.reshape(2, 2)


@dataclass(frozen=True, eq=False)
class DensityMatrix2:
    """Hermitian, unit-trace, positive semidefinite 2x2 matrix."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.array(self.matrix, dtype=complex)
        if rho.shape != (2, 2):
            raise DomainError(f"expected a 2x2 matrix, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > ALGEBRAIC_TOL:
            raise InvariantError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > ALGEBRAIC_TOL:
            raise InvariantError(f"density matrix trace is {np.trace(rho)!r}")
        rho.flags.writeable = False
        object.__setattr__(self, "matrix", rho)
        if self.eigenvalues()[0] < -ALGEBRAIC_TOL:
            raise InvariantError("density matrix has a negative eigenvalue")

    def __repr__(self):
        return f"DensityMatrix2({self.matrix.tolist()!r})"

    def eigenvalues(self) -> tuple[float, float]:
        """Ascending eigenvalues from the 2x2 closed form."""
        (r00, r01), (_, r11) = self.matrix
        mean = 0.5 * (r00.real + r11.real)
        half_gap = math.hypot(0.5 * (r00.real - r11.real), abs(r01))
        return mean - half_gap, mean + half_gap

    @property
    def purity(self) -> float:
        rho = self.matrix
        return float(np.sum(np.abs(rho) ** 2))


def expand_pair(pair: PairAmplitudes) -> TwoQubitVector:
    """Explicit four-amplitude vector of a (-) or (+) correlated pair."""
    amps = np.zeros(4, dtype=complex)
    if pair.sign is CorrelationSign.MINUS:
        amps[1], amps[2] = pair.p, pair.q_tilde
    else:
        amps[0], amps[3] = pair.p, pair.q_tilde
    return TwoQubitVector(amps)


def _projector_rows(frame: BasisFrame) -> np.ndarray:
    # rows of R_e are the kets |e>, |e-bar>; their conjugates are the bras
    return frame_matrix(frame).matrix.conj()


def single_born(state: QubitState, frame: BasisFrame) -> tuple[float, float]:
    """|<e|s>|^2 and |<e-bar|s>|^2 by direct projection."""
    amps = _projector_rows(frame) @ state.vector
    probs = np.abs(amps) ** 2
    return float(probs[0]), float(probs[1])


def joint_amplitudes(vec: TwoQubitVector, frame_a: BasisFrame, frame_b: BasisFrame) -> np.ndarray:
    """Amplitudes over (ee, e e-bar, e-bar e, e-bar e-bar)."""
    rot = np.kron(_projector_rows(frame_a), _projector_rows(frame_b))
    return rot @ vec.amplitudes


def joint_born(vec: TwoQubitVector, frame_a: BasisFrame, frame_b: BasisFrame) -> JointProbabilities:
    probs = np.abs(joint_amplitudes(vec, frame_a, frame_b)) ** 2
    return JointProbabilities(*(float(x) for x in probs))


def reduce(vec: TwoQubitVector, which: str = "A") -> DensityMatrix2:
    """Reduced state of one qubit, tracing out the other."""
    psi = vec.as_matrix()
    if which == "A":
        rho = psi @ psi.conj().T
    elif which == "B":
        rho = psi.T @ psi.conj()
    else:
        raise DomainError(f"which must be 'A' or 'B', got {which!r}")
    return DensityMatrix2(rho)


def offdiag_magnitude(rho: DensityMatrix2, frame: BasisFrame) -> float:
    """|<e|rho|e-bar>|, the coherence of ``rho`` in the given frame."""
    bras = _projector_rows(frame)
    rotated = bras @ rho.matrix @ bras.conj().T
    return float(abs(rotated[0, 1]))


def alpha_grid(grid_points: int) -> np.ndarray:
    """Uniform grid on [0, 2pi), endpoint excluded."""
    if grid_points < MIN_GRID_POINTS:
        raise DomainError(f"need at least {MIN_GRID_POINTS} grid points, got {grid_points}")
    return np.arange(grid_points) * (TAU / grid_points)


def empirical_visibility(curve: Callable[[float], float], grid_points: int = 256) -> float:
    """(max - min)/(max + min) of ``curve`` sampled on a uniform phase grid.

    An identically zero curve has no fringe and gives 0.
    """
    return fringe_contrast([curve(float(x)) for x in alpha_grid(grid_points)])


def fringe_contrast(values) -> float:
    """(max - min)/(max + min) of already sampled curve values; 0 for a zero curve."""
    values = np.asarray(values, dtype=float)
    hi, lo = float(values.max()), float(values.min())
    if hi + lo <= 0.0:
        return 0.0
    return (hi - lo) / (hi + lo)
