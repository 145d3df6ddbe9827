"""Entangled qubit pairs measured in a common e-basis.

The (-)-correlated pair is

    |Psi> = p |up>_A |down>_B + q e^{i alpha} |down>_A |up>_B,   p**2 + q**2 = 1

and the (+)-correlated pair replaces the second factor pair by |up>|up> and
|down>|down>.  Results are expressed through two ratios, the entanglement
strength ``epsilon = p**2/q**2`` and the frame shape ``sigma = m**2/n**2``.
Either may be ``math.inf`` (q = 0 or n = 0); infinite ratios are resolved to
exact weights instead of dividing.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, InvariantError, UnsupportedFormError
from .qubit import ALGEBRAIC_TOL, BasisFrame, wrap_angle

# Sign of the interference term in the two (-) correlation probabilities.
# Tests flip it to check that the verification suite notices.
_CROSS_SIGN = -1.0

# Above this the ratio forms risk overflow; the weight forms take over.
_RATIO_CUTOFF = 1e100


class CorrelationSign(str, enum.Enum):
    MINUS = "minus"
    PLUS = "plus"


@dataclass(frozen=True)
class PairAmplitudes:
    p: float
    q: float
    alpha: float = 0.0
    sign: CorrelationSign = CorrelationSign.MINUS

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (math.isfinite(p) and math.isfinite(q)) or p < 0.0 or q < 0.0:
            raise DomainError(f"p and q must be finite and nonnegative, got {p!r}, {q!r}")
        if abs(p * p + q * q - 1.0) > ALGEBRAIC_TOL:
            raise InvariantError(f"p^2 + q^2 = {p * p + q * q!r}, expected 1")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "alpha", wrap_angle(self.alpha, "alpha"))
        object.__setattr__(self, "sign", CorrelationSign(self.sign))

    @property
    def q_tilde(self) -> complex:
        return self.q * complex(math.cos(self.alpha), math.sin(self.alpha))


@dataclass(frozen=True)
class RatioParams:
    """Entanglement strength ``epsilon`` and frame shape ``sigma``."""

    epsilon: float
    sigma: float

    def __post_init__(self):
        for name in ("epsilon", "sigma"):
            value = float(getattr(self, name))
            if math.isnan(value) or value < 0.0:
                raise DomainError(f"{name} must be nonnegative, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def of(cls, pair: PairAmplitudes, frame: BasisFrame) -> "RatioParams":
        return cls(strength(pair), frame.sigma)

    @property
    def finite(self) -> bool:
        return max(self.epsilon, self.sigma) < _RATIO_CUTOFF

    def weights(self) -> tuple[float, float, float, float]:
        """(p**2, q**2, m**2, n**2) recovered from the two ratios."""
        return weights_from_strength(self.epsilon) + weights_from_strength(self.sigma)


@dataclass(frozen=True)
class RotatedPairCoefficients:
    f: complex
    g: complex
    h: complex

    @property
    def norm2(self) -> float:
        return 2.0 * abs(self.f) ** 2 + abs(self.g) ** 2 + abs(self.h) ** 2


@dataclass(frozen=True)
class JointProbabilities:
    """Outcome probabilities of A and B, each measured in its e-basis.

    Field names read (A outcome, B outcome) with ``e`` for |e> and ``b`` for |e-bar>.
    No range check is done here; the verification suite measures deviations.
    """

    p_ee: float
    p_eb: float
    p_be: float
    p_bb: float

    @property
    def p_plus(self) -> float:
        return self.p_ee + self.p_bb

    @property
    def p_minus(self) -> float:
        return self.p_eb + self.p_be

    @property
    def total(self) -> float:
        return self.p_ee + self.p_eb + self.p_be + self.p_bb

    @property
    def local_a(self) -> tuple[float, float]:
        return self.p_ee + self.p_eb, self.p_be + self.p_bb

    @property
    def local_b(self) -> tuple[float, float]:
        return self.p_ee + self.p_be, self.p_eb + self.p_bb

    def as_tuple(self) -> tuple[float, float, float, float]:
        return self.p_ee, self.p_eb, self.p_be, self.p_bb

    def swapped(self) -> "JointProbabilities":
        """Relabel B's outcomes, exchanging the (+) and (-) correlation roles."""
        return JointProbabilities(self.p_eb, self.p_ee, self.p_bb, self.p_be)


def make_pair(p2: float, alpha: float = 0.0, sign: CorrelationSign | str = CorrelationSign.MINUS) -> PairAmplitudes:
    """Pair with weight ``p2`` on the first branch and relative phase ``alpha``."""
    p2 = float(p2)
    if not 0.0 <= p2 <= 1.0:
        raise DomainError(f"p2 must lie in [0, 1], got {p2!r}")
    return PairAmplitudes(math.sqrt(p2), math.sqrt(1.0 - p2), alpha, CorrelationSign(sign))


def strength(pair: PairAmplitudes) -> float:
    """Entanglement strength p**2/q**2 (``inf`` for q = 0)."""
    q2 = pair.q**2
    return math.inf if q2 == 0.0 else pair.p**2 / q2


def weights_from_strength(epsilon: float) -> tuple[float, float]:
    """Branch weights (eps/(1+eps), 1/(1+eps)); ``inf`` maps to (1, 0)."""
    epsilon = float(epsilon)
    if math.isnan(epsilon) or epsilon < 0.0:
        raise DomainError(f"ratio must be nonnegative, got {epsilon!r}")
    if math.isinf(epsilon):
        return 1.0, 0.0
    return epsilon / (1.0 + epsilon), 1.0 / (1.0 + epsilon)


def rotated_coefficients(pair: PairAmplitudes, frame: BasisFrame) -> RotatedPairCoefficients:
    """Coefficients (f, g, h) of the (-) pair in the e-basis.

    Up to the global factor e^{-i delta}, projecting onto the frame kets gives
    |Psi> = f(|ee> - |e'e'>) - g|ee'> + h|e'e>, with e' = e-bar.
    """
    if pair.sign is not CorrelationSign.MINUS:
        raise UnsupportedFormError(
            "no closed-form decomposition for the (+) pair; use oracle.joint_born(oracle.expand_pair(pair), ...)"
        )
    p, qt = pair.p, pair.q_tilde
    m, n = frame.m, frame.n
    return RotatedPairCoefficients((p + qt) * m * n, p * m * m - qt * n * n, p * n * n - qt * m * m)


def _minus_joint(params: RatioParams, alpha: float) -> JointProbabilities:
    c = math.cos(alpha)
    if params.finite:
        eps, sig = params.epsilon, params.sigma
        r = math.sqrt(eps)
        den = (1.0 + eps) * (1.0 + sig) ** 2
        p_same = sig * (eps + 1.0 + 2.0 * r * c) / den
        p_eb = (eps * sig * sig + 1.0 + _CROSS_SIGN * 2.0 * r * sig * c) / den
        p_be = (eps + sig * sig + _CROSS_SIGN * 2.0 * r * sig * c) / den
    else:
        p2, q2, m2, n2 = params.weights()
        pq = math.sqrt(p2 * q2)
        mn2 = m2 * n2
        p_same = mn2 * (1.0 + 2.0 * pq * c)
        p_eb = p2 * m2 * m2 + q2 * n2 * n2 + _CROSS_SIGN * 2.0 * pq * mn2 * c
        p_be = p2 * n2 * n2 + q2 * m2 * m2 + _CROSS_SIGN * 2.0 * pq * mn2 * c
    return JointProbabilities(p_same, p_eb, p_be, p_same)


def correlation_probs(
    params: RatioParams, alpha: float, sign: CorrelationSign | str = CorrelationSign.MINUS
) -> JointProbabilities:
    """Joint outcome probabilities with both particles measured in the same frame.

    The (-) pair uses the closed forms in (epsilon, sigma). The (+) pair has no
    closed form here and is evaluated on the statevector oracle with delta = 0.
    """
    sign = CorrelationSign(sign)
    alpha = wrap_angle(alpha, "alpha")
    if sign is CorrelationSign.MINUS:
        return _minus_joint(params, alpha)

    from . import oracle

    p2, _, _, _ = params.weights()
    frame = BasisFrame.from_sigma(params.sigma)
    vec = oracle.expand_pair(make_pair(p2, alpha, sign))
    return oracle.joint_born(vec, frame, frame)


def visibilities_pair(params: RatioParams) -> tuple[float, float]:
    """Fringe contrasts (V+, V-) of P+ and P- of the (-) pair under an alpha sweep.

    V+ = 2 sqrt(eps)/(1+eps) and V- = 4 sigma sqrt(eps)/((1+eps)(1+sigma**2)).
    On the z axis (sigma = 0 or inf) P+ vanishes identically and V+ is 0.
    """
    eps, sig = params.epsilon, params.sigma
    if params.finite:
        v_plus = 2.0 * math.sqrt(eps) / (1.0 + eps)
        v_minus = 4.0 * sig * math.sqrt(eps) / ((1.0 + eps) * (1.0 + sig * sig))
    else:
        p2, q2, m2, n2 = params.weights()
        v_plus = 2.0 * math.sqrt(p2 * q2)
        v_minus = 4.0 * math.sqrt(p2 * q2) * m2 * n2 / (m2 * m2 + n2 * n2)
    if sig == 0.0 or math.isinf(sig):
        v_plus = 0.0
    return min(v_plus, 1.0), min(v_minus, 1.0)


def local_probs(params: RatioParams) -> tuple[float, float]:
    """Probabilities that particle A alone is found in |e> or |e-bar>.

    No alpha appears: the single-particle statistics carry no trace of the
    entangling phase at any finite strength.
    """
    if params.finite:
        eps, sig = params.epsilon, params.sigma
        den = (1.0 + eps) * (1.0 + sig)
        return (eps * sig + 1.0) / den, (eps + sig) / den
    p2, q2, m2, n2 = params.weights()
    return p2 * m2 + q2 * n2, p2 * n2 + q2 * m2
