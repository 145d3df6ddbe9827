"""Single-qubit states, measurement frames and basis changes.

A spin state is labelled by a Bloch direction (theta, phi) and written as

    |s> = a|up> + b e^{i phi}|down>,   a = cos(theta/2), b = sin(theta/2)

with a, b >= 0.  A measurement axis e is labelled the same way by (chi, delta)
with m = cos(chi/2), n = sin(chi/2).  All phases live in phi, delta and
eta = phi - delta; the real coefficients are never negative.

Angles are radians throughout.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvariantError

TAU = 2.0 * math.pi

#: tolerance for algebraic identities (norms, unitarity, determinants)
ALGEBRAIC_TOL = 1e-12
#: tolerance for the empirical fringe sweeps (grid discretization dominates)
SWEEP_TOL = 1e-9

_ANGLE_SLACK = 1e-12
_NORM_SLACK = 1e-9


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def _polar(name: str, value: float) -> float:
    value = _finite(name, value)
    if value < -_ANGLE_SLACK or value > math.pi + _ANGLE_SLACK:
        raise DomainError(f"{name} must lie in [0, pi], got {value!r}")
    return min(max(value, 0.0), math.pi)


def half_angle(angle: float) -> tuple[float, float]:
    """(cos(angle/2), sin(angle/2)), exact at the poles angle in {0, pi}."""
    if angle == math.pi:
        return 0.0, 1.0
    return math.cos(angle / 2.0), math.sin(angle / 2.0)


def wrap_angle(value: float, name: str = "angle") -> float:
    """Reduce a finite angle into [0, 2pi)."""
    value = _finite(name, value) % TAU
    # x % TAU can round up to TAU for tiny negative x
    return 0.0 if value >= TAU else value


@dataclass(frozen=True)
class BlochDirection:
    """Direction (theta, phi) labelling a spin state or a field axis.

    At the poles the azimuth carries no physics and is set to 0, so two
    directions compare equal exactly when they name the same point.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = _polar("theta", self.theta)
        phi = wrap_angle(self.phi, "phi")
        if theta in (0.0, math.pi):
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @property
    def a(self) -> float:
        return half_angle(self.theta)[0]

    @property
    def b(self) -> float:
        return half_angle(self.theta)[1]


@dataclass(frozen=True)
class BasisFrame:
    """Measurement basis {|e>, |e-bar>} along the axis (chi, delta)."""

    chi: float
    delta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "chi", _polar("chi", self.chi))
        object.__setattr__(self, "delta", wrap_angle(self.delta, "delta"))

    @property
    def m(self) -> float:
        return half_angle(self.chi)[0]

    @property
    def n(self) -> float:
        return half_angle(self.chi)[1]

    @property
    def sigma(self) -> float:
        """Shape ratio m**2 / n**2; ``math.inf`` on the z axis (chi = 0)."""
        n2 = self.n**2
        return math.inf if n2 == 0.0 else self.m**2 / n2

    @classmethod
    def from_sigma(cls, sigma: float, delta: float = 0.0) -> "BasisFrame":
        """Frame whose shape ratio m**2/n**2 equals ``sigma`` (``inf`` allowed)."""
        sigma = float(sigma)
        if math.isnan(sigma) or sigma < 0.0:
            raise DomainError(f"sigma must be nonnegative, got {sigma!r}")
        # m/n = cot(chi/2)
        chi = 0.0 if math.isinf(sigma) else 2.0 * math.atan2(1.0, math.sqrt(sigma))
        return cls(chi, delta)


@dataclass(frozen=True)
class QubitState:
    """Amplitudes over the ordered basis (|up>, |down>)."""

    c_up: complex
    c_down: complex

    def __post_init__(self):
        c_up, c_down = complex(self.c_up), complex(self.c_down)
        for name, c in (("c_up", c_up), ("c_down", c_down)):
            if not cmath.isfinite(c):
                raise DomainError(f"{name} must be finite, got {c!r}")
        norm2 = abs(c_up) ** 2 + abs(c_down) ** 2
        if abs(norm2 - 1.0) > ALGEBRAIC_TOL:
            raise InvariantError(f"state is not normalized: |c|^2 = {norm2!r}")
        object.__setattr__(self, "c_up", c_up)
        object.__setattr__(self, "c_down", c_down)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.c_up, self.c_down], dtype=complex)

    def inner(self, other: "QubitState") -> complex:
        """<self|other>."""
        return self.c_up.conjugate() * other.c_up + self.c_down.conjugate() * other.c_down


@dataclass(frozen=True, eq=False)
class BasisTransform:
    """2x2 complex matrix whose rows hold the new basis kets in (|up>, |down>) components."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.shape != (2, 2):
            raise DomainError(f"expected a 2x2 matrix, got shape {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise DomainError("matrix entries must be finite")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    def __matmul__(self, other: "BasisTransform") -> "BasisTransform":
        return BasisTransform(self.matrix @ other.matrix)

    def __repr__(self):
        return f"BasisTransform({self.matrix.tolist()!r})"

    @property
    def det(self) -> complex:
        (p, q), (r, s) = self.matrix
        return complex(p * s - q * r)

    def unitarity_defect(self) -> float:
        """max |(M M^dagger - I)_ij|."""
        mat = self.matrix
        return float(np.max(np.abs(mat @ mat.conj().T - np.eye(2))))


def state_from_bloch(direction: BlochDirection) -> QubitState:
    """The state (a, b e^{i phi}) pointing along ``direction``."""
    a, b = direction.a, direction.b
    return QubitState(a, b * cmath.exp(1j * direction.phi))


def antipode_state(direction: BlochDirection) -> QubitState:
    """The orthogonal partner (b, -a e^{i phi}) of :func:`state_from_bloch`."""
    a, b = direction.a, direction.b
    return QubitState(b, -a * cmath.exp(1j * direction.phi))


def basis_matrix(a: float, b: float, phase: float) -> BasisTransform:
    """The matrix ((a, b e^{i phase}), (b, -a e^{i phase})).

    Its rows are a state and its antipode, so ``det == -e^{i phase}``.
    """
    a, b = _finite("a", a), _finite("b", b)
    phase = _finite("phase", phase)
    if abs(a * a + b * b - 1.0) > _NORM_SLACK:
        raise InvariantError(f"(a, b) is not normalized: a^2 + b^2 = {a * a + b * b!r}")
    w = cmath.exp(1j * phase)
    return BasisTransform([[a, b * w], [b, -a * w]])


def state_matrix(direction: BlochDirection) -> BasisTransform:
    """Rows |s>, |s-bar> for a Bloch direction."""
    return basis_matrix(direction.a, direction.b, direction.phi)


def frame_matrix(frame: BasisFrame) -> BasisTransform:
    """Rows |e>, |e-bar> for a measurement frame."""
    return basis_matrix(frame.m, frame.n, frame.delta)


def adjoint_inverse(t: BasisTransform, tol: float = 1e-10) -> BasisTransform:
    """Inverse of a unitary basis change, i.e. its conjugate transpose."""
    defect = t.unitarity_defect()
    if defect > tol:
        raise InvariantError(f"transform is not unitary (defect {defect:.3e})")
    return BasisTransform(t.matrix.conj().T)


def composed_transform(direction: BlochDirection, frame: BasisFrame) -> BasisTransform:
    """R_s R_e^{-1}: rows give |s>, |s-bar> in the (|e>, |e-bar>) basis."""
    return state_matrix(direction) @ adjoint_inverse(frame_matrix(frame))


def components_in_frame(direction: BlochDirection, frame: BasisFrame) -> tuple[complex, complex]:
    """Components (u, v) with |s> = u|e> + v|e-bar>.

    u = am + bn e^{i eta} and v = an - bm e^{i eta}, eta = phi - delta.
    """
    a, b = direction.a, direction.b
    m, n = frame.m, frame.n
    w = cmath.exp(1j * (direction.phi - frame.delta))
    return a * m + b * n * w, a * n - b * m * w


def outcome_probs_single(direction: BlochDirection, frame: BasisFrame) -> tuple[float, float]:
    """Born probabilities of |e> and |e-bar> when measuring ``direction`` in ``frame``."""
    a, b = direction.a, direction.b
    m, n = frame.m, frame.n
    cross = 2.0 * a * b * m * n * math.cos(direction.phi - frame.delta)
    p_e = a * a * m * m + b * b * n * n + cross
    p_ebar = a * a * n * n + b * b * m * m - cross
    return p_e, p_ebar


def visibility_single(theta: float, chi: float) -> tuple[float, float]:
    """Fringe contrast of P(e) and P(e-bar) as eta is swept.

    A zero constant term means the curve is identically zero, so there is no
    fringe and 0 is returned.
    """
    theta, chi = _polar("theta", theta), _polar("chi", chi)
    a, b = half_angle(theta)
    m, n = half_angle(chi)
    amp = 2.0 * a * b * m * n
    base_e = a * a * m * m + b * b * n * n
    base_ebar = a * a * n * n + b * b * m * m
    v_e = amp / base_e if base_e > 0.0 else 0.0
    v_ebar = amp / base_ebar if base_ebar > 0.0 else 0.0
    return min(v_e, 1.0), min(v_ebar, 1.0)
