"""Seeded self-verification: every invariant of the package checked in one run.

Each check draws its parameters from a seeded generator (plus a fixed set of
edge cases: poles, singlet, triplet, p2 in {0, 1}) and records the largest
deviation it saw against its tolerance.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import oracle
from .oracle import fringe_contrast
from .pair import (
    CorrelationSign,
    RatioParams,
    correlation_probs,
    local_probs,
    make_pair,
    rotated_coefficients,
    visibilities_pair,
)
from .qubit import (
    ALGEBRAIC_TOL,
    SWEEP_TOL,
    TAU,
    BasisFrame,
    BlochDirection,
    adjoint_inverse,
    antipode_state,
    components_in_frame,
    composed_transform,
    frame_matrix,
    outcome_probs_single,
    state_from_bloch,
    state_matrix,
    visibility_single,
)

RNG_ALGORITHM = "numpy.random.Generator(PCG64)"
EXACT_TOL = 1e-15
LIMIT_TOL = 1e-5
FRINGE_POINTS = 64

MINUS, PLUS = CorrelationSign.MINUS, CorrelationSign.PLUS

EDGE_DIRECTIONS = [(0.0, 0.0), (math.pi, 0.0), (math.pi / 2, 0.0), (math.pi / 2, math.pi)]
EDGE_FRAMES = [(0.0, 0.0), (math.pi, 0.0), (math.pi / 2, 0.0), (math.pi / 2, math.pi / 2)]
# singlet, triplet, the two product states
EDGE_PAIRS = [(0.5, math.pi), (0.5, 0.0), (0.0, 0.0), (1.0, 0.0)]


@dataclass
class InvariantResult:
    name: str
    samples: int
    max_deviation: float
    tolerance: float
    passed: bool
    error: str | None = None


@dataclass
class VerifyReport:
    seed: int
    samples: int
    rng_algorithm: str = RNG_ALGORITHM
    results: list[InvariantResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        for r in out["results"]:
            if not math.isfinite(r["max_deviation"]):
                r["max_deviation"] = str(r["max_deviation"])
        return out

    def to_text(self) -> str:
        lines = [f"seed={self.seed} samples={self.samples} rng={self.rng_algorithm}"]
        width = max(len(r.name) for r in self.results)
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            line = f"{status} {r.name:<{width}} n={r.samples:<6d} max_dev={r.max_deviation:.3e} tol={r.tolerance:.1e}"
            if r.error:
                line += f" error={r.error}"
            lines.append(line)
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


class _Sampler:
    def __init__(self, rng: np.random.Generator, samples: int):
        self.rng = rng
        self.samples = samples

    def directions(self):
        for theta, phi in EDGE_DIRECTIONS:
            yield BlochDirection(theta, phi)
        for theta, phi in zip(self.rng.uniform(0, math.pi, self.samples), self.rng.uniform(0, TAU, self.samples)):
            yield BlochDirection(theta, phi)

    def frames(self):
        for chi, delta in EDGE_FRAMES:
            yield BasisFrame(chi, delta)
        for chi, delta in zip(self.rng.uniform(0, math.pi, self.samples), self.rng.uniform(0, TAU, self.samples)):
            yield BasisFrame(chi, delta)

    def direction_frames(self):
        return zip(self.directions(), self.frames())

    def pair_triples(self):
        """(p2, chi, alpha) with the edge pairs crossed with a few frames first."""
        for p2, alpha in EDGE_PAIRS:
            for chi in (0.0, math.pi / 2, math.pi):
                yield p2, chi, alpha
        cols = (
            self.rng.uniform(0, 1, self.samples),
            self.rng.uniform(0, math.pi, self.samples),
            self.rng.uniform(0, TAU, self.samples),
        )
        for p2, chi, alpha in zip(*cols):
            yield float(p2), float(chi), float(alpha)

    def pair_triples_with_delta(self):
        triples = list(self.pair_triples())
        deltas = self.rng.uniform(0, TAU, len(triples))
        for (p2, chi, alpha), delta in zip(triples, deltas):
            yield p2, chi, alpha, float(delta)


class _Tracker:
    def __init__(self):
        self.count = 0
        self.worst = 0.0

    def add(self, deviation: float):
        self.count += 1
        deviation = float(deviation)
        if math.isnan(deviation):
            deviation = math.inf
        self.worst = max(self.worst, deviation)


def _frame_sweep(p2: float, chi: float, sign: CorrelationSign, grid_points: int = FRINGE_POINTS) -> np.ndarray:
    """Oracle joint probabilities, one row per alpha grid point (delta = 0)."""
    frame = BasisFrame(chi)
    rows = []
    for alpha in oracle.alpha_grid(grid_points):
        vec = oracle.expand_pair(make_pair(p2, float(alpha), sign))
        rows.append(oracle.joint_born(vec, frame, frame).as_tuple())
    return np.array(rows)


# ---- single qubit -----------------------------------------------------------

def check_antipode_orthogonal(s: _Sampler, tol: float):
    t = _Tracker()
    for d in s.directions():
        t.add(abs(state_from_bloch(d).inner(antipode_state(d))))
    return t, tol


def check_basis_matrix_unitary_det(s: _Sampler, tol: float):
    t = _Tracker()
    for d in s.directions():
        r = state_matrix(d)
        t.add(max(r.unitarity_defect(), abs(r.det + np.exp(1j * d.phi))))
    return t, tol


def check_adjoint_inverse_identity(s: _Sampler, tol: float):
    t = _Tracker()
    for d, f in s.direction_frames():
        for r in (frame_matrix(f), state_matrix(d)):
            t.add(np.max(np.abs((adjoint_inverse(r) @ r).matrix - np.eye(2))))
    return t, tol


def check_uv_normalization(s: _Sampler, tol: float):
    t = _Tracker()
    for d, f in s.direction_frames():
        u, v = components_in_frame(d, f)
        t.add(abs(abs(u) ** 2 + abs(v) ** 2 - 1.0))
    return t, tol


def check_single_closed_vs_matrix(s: _Sampler, tol: float):
    t = _Tracker()
    for d, f in s.direction_frames():
        p_e, p_ebar = outcome_probs_single(d, f)
        u, v = components_in_frame(d, f)
        row = composed_transform(d, f).matrix[0]
        o_e, o_ebar = oracle.single_born(state_from_bloch(d), f)
        t.add(max(
            abs(p_e - o_e), abs(p_ebar - o_ebar),
            abs(p_e - abs(u) ** 2), abs(p_ebar - abs(v) ** 2),
            abs(u - row[0]), abs(v - row[1]),
            abs(p_e + p_ebar - 1.0),
        ))
    return t, tol


def check_single_fringe_visibility(s: _Sampler, tol: float):
    t = _Tracker()
    grid = oracle.alpha_grid(FRINGE_POINTS)
    for d, f in s.direction_frames():
        frame = BasisFrame(f.chi)
        curve = np.array([outcome_probs_single(BlochDirection(d.theta, eta), frame) for eta in grid])
        v_e, v_ebar = visibility_single(d.theta, f.chi)
        t.add(max(abs(fringe_contrast(curve[:, 0]) - v_e), abs(fringe_contrast(curve[:, 1]) - v_ebar)))
    return t, SWEEP_TOL


# ---- pairs ------------------------------------------------------------------

def check_joint_normalization(s: _Sampler, tol: float):
    t = _Tracker()
    for p2, chi, alpha in s.pair_triples():
        params = RatioParams.of(make_pair(p2), BasisFrame(chi))
        for sign in (MINUS, PLUS):
            t.add(abs(correlation_probs(params, alpha, sign).total - 1.0))
    return t, tol


def check_plus_branch_equality(s: _Sampler, tol: float):
    t = _Tracker()
    for p2, chi, alpha in s.pair_triples():
        pair = make_pair(p2, alpha)
        frame = BasisFrame(chi)
        closed = correlation_probs(RatioParams.of(pair, frame), alpha)
        brute = oracle.joint_born(oracle.expand_pair(pair), frame, frame)
        t.add(max(abs(closed.p_ee - closed.p_bb), abs(brute.p_ee - brute.p_bb)))
    return t, tol


def check_rotated_coefficients(s: _Sampler, tol: float):
    t = _Tracker()
    for p2, chi, alpha, delta in s.pair_triples_with_delta():
        pair = make_pair(p2, alpha)
        frame = BasisFrame(chi, delta)
        c = rotated_coefficients(pair, frame)
        amps = oracle.joint_amplitudes(oracle.expand_pair(pair), frame, frame)
        # oracle amplitudes carry the global phase e^{-i delta}
        amps = amps * np.exp(1j * frame.delta)
        expected = np.array([c.f, -c.g, c.h, -c.f])
        t.add(max(abs(c.norm2 - 1.0), float(np.max(np.abs(amps - expected)))))
    return t, tol


def check_closed_vs_oracle_joint(s: _Sampler, tol: float):
    t = _Tracker()
    for p2, chi, alpha, delta in s.pair_triples_with_delta():
        pair = make_pair(p2, alpha)
        frame = BasisFrame(chi, delta)
        closed = correlation_probs(RatioParams.of(pair, frame), alpha)
        brute = oracle.joint_born(oracle.expand_pair(pair), frame, frame)
        t.add(np.max(np.abs(np.subtract(closed.as_tuple(), brute.as_tuple()))))
    return t, tol


def check_closed_vs_oracle_local(s: _Sampler, tol: float):
    t = _Tracker()
    for p2, chi, alpha in s.pair_triples():
        frame = BasisFrame(chi)
        for sign in (MINUS, PLUS):
            pair = make_pair(p2, alpha, sign)
            p_e, p_ebar = local_probs(RatioParams.of(pair, frame))
            o_e, o_ebar = oracle.joint_born(oracle.expand_pair(pair), frame, frame).local_a
            t.add(max(abs(p_e - o_e), abs(p_ebar - o_ebar), abs(p_e + p_ebar - 1.0)))
    return t, tol


def check_phase_independence_local(s: _Sampler, tol: float):
    """Oracle P(e) of qubit A is flat in alpha over the whole strength range."""
    t = _Tracker()
    for eps in np.logspace(-6, 6, 25):
        p2 = eps / (1.0 + eps)
        for sigma in np.logspace(-4, 4, 9):
            chi = BasisFrame.from_sigma(sigma).chi
            for sign in (MINUS, PLUS):
                local = _frame_sweep(p2, chi, sign)
                p_e = local[:, 0] + local[:, 1]
                t.add(np.max(np.abs(p_e - p_e[0])))
    return t, tol


def check_pair_visibility_fidelity(s: _Sampler, tol: float):
    t = _Tracker()
    for p2, chi, _ in s.pair_triples():
        sweep = _frame_sweep(p2, chi, MINUS)
        v_plus, v_minus = visibilities_pair(RatioParams.of(make_pair(p2), BasisFrame(chi)))
        t.add(max(
            abs(fringe_contrast(sweep[:, 0] + sweep[:, 3]) - v_plus),
            abs(fringe_contrast(sweep[:, 1] + sweep[:, 2]) - v_minus),
        ))
    return t, SWEEP_TOL


def check_visibility_swap(s: _Sampler, tol: float):
    t = _Tracker()
    for p2, chi, _ in s.pair_triples():
        sweep = _frame_sweep(p2, chi, PLUS)
        v_plus, v_minus = visibilities_pair(RatioParams.of(make_pair(p2), BasisFrame(chi)))
        t.add(max(
            abs(fringe_contrast(sweep[:, 0] + sweep[:, 3]) - v_minus),
            abs(fringe_contrast(sweep[:, 1] + sweep[:, 2]) - v_plus),
        ))
    return t, SWEEP_TOL


def check_probability_swap(s: _Sampler, tol: float):
    t = _Tracker()
    for p2, chi, alpha in s.pair_triples():
        params = RatioParams.of(make_pair(p2), BasisFrame(chi))
        plus = correlation_probs(params, alpha, PLUS)
        minus = correlation_probs(params, alpha + math.pi, MINUS).swapped()
        t.add(np.max(np.abs(np.subtract(plus.as_tuple(), minus.as_tuple()))))
    return t, tol


def check_disentangled_limit(s: _Sampler, tol: float):
    t = _Tracker()
    eps = 1e12
    for f in s.frames():
        params = RatioParams(eps, f.sigma)
        p_e, _ = local_probs(params)
        single, _ = outcome_probs_single(BlochDirection(0.0), f)
        t.add(max(abs(p_e - f.m**2), abs(p_e - single)))
    return t, LIMIT_TOL


# ---- reduced states ---------------------------------------------------------

def check_oracle_single_equivalence(s: _Sampler, tol: float):
    t = _Tracker()
    for d, f in s.direction_frames():
        u, v = components_in_frame(d, f)
        o_e, o_ebar = oracle.single_born(state_from_bloch(d), f)
        t.add(max(abs(abs(u) ** 2 - o_e), abs(abs(v) ** 2 - o_ebar)))
    return t, tol


def check_reduced_state_alpha_independence(s: _Sampler, tol: float):
    t = _Tracker()
    for p2, _, alpha in s.pair_triples():
        pair = make_pair(p2, alpha)
        vec = oracle.expand_pair(pair)
        rho_a = oracle.reduce(vec, "A").matrix
        rho_b = oracle.reduce(vec, "B").matrix
        t.add(max(
            np.max(np.abs(rho_a - np.diag([pair.p**2, pair.q**2]))),
            np.max(np.abs(rho_b - np.diag([pair.q**2, pair.p**2]))),
        ))
    return t, EXACT_TOL


def check_computational_offdiag_zero(s: _Sampler, tol: float):
    t = _Tracker()
    z_axis = BasisFrame(0.0)
    for p2, _, alpha in s.pair_triples():
        for sign in (MINUS, PLUS):
            vec = oracle.expand_pair(make_pair(p2, alpha, sign))
            for which in ("A", "B"):
                t.add(oracle.offdiag_magnitude(oracle.reduce(vec, which), z_axis))
    return t, EXACT_TOL


def check_purity_extremes(s: _Sampler, tol: float):
    t = _Tracker()
    for sign in (MINUS, PLUS):
        for p2, target in ((0.5, 0.5), (0.0, 1.0), (1.0, 1.0)):
            rho = oracle.reduce(oracle.expand_pair(make_pair(p2, 0.0, sign)))
            t.add(abs(rho.purity - target))
    # purity grows monotonically away from p2 = 1/2
    for p2 in s.rng.uniform(0.5, 1.0, s.samples):
        lo = oracle.reduce(oracle.expand_pair(make_pair(p2))).purity
        hi = oracle.reduce(oracle.expand_pair(make_pair(min(1.0, p2 + 1e-3)))).purity
        t.add(max(0.0, lo - hi))
    return t, tol


CHECKS: dict[str, Callable] = {
    "antipode_orthogonal": check_antipode_orthogonal,
    "basis_matrix_unitary_det": check_basis_matrix_unitary_det,
    "adjoint_inverse_identity": check_adjoint_inverse_identity,
    "uv_normalization": check_uv_normalization,
    "single_closed_vs_matrix": check_single_closed_vs_matrix,
    "single_fringe_visibility": check_single_fringe_visibility,
    "oracle_single_equivalence": check_oracle_single_equivalence,
    "joint_normalization": check_joint_normalization,
    "plus_branch_equality": check_plus_branch_equality,
    "rotated_coefficients": check_rotated_coefficients,
    "closed_vs_oracle_joint": check_closed_vs_oracle_joint,
    "closed_vs_oracle_local": check_closed_vs_oracle_local,
    "phase_independence_local": check_phase_independence_local,
    "pair_visibility_fidelity": check_pair_visibility_fidelity,
    "visibility_swap": check_visibility_swap,
    "probability_swap": check_probability_swap,
    "disentangled_limit": check_disentangled_limit,
    "reduced_state_alpha_independence": check_reduced_state_alpha_independence,
    "computational_offdiag_zero": check_computational_offdiag_zero,
    "purity_extremes": check_purity_extremes,
}


def run_verification(samples: int = 1000, seed: int = 0, tol: float = ALGEBRAIC_TOL) -> VerifyReport:
    """Run every check; ``tol`` applies to the algebraic identities.

    Sweep, exact and limit checks keep their own fixed tolerances. Each check
    gets its own generator spawned from ``seed``, so results do not depend on
    check order.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    report = VerifyReport(seed=seed, samples=samples)
    streams = np.random.SeedSequence(seed).spawn(len(CHECKS))
    for (name, check), stream in zip(CHECKS.items(), streams):
        sampler = _Sampler(np.random.Generator(np.random.PCG64(stream)), samples)
        try:
            tracker, tolerance = check(sampler, tol)
        except Exception as exc:  # a crashing check is a failing check
            report.results.append(InvariantResult(name, 0, math.inf, tol, False, f"{type(exc).__name__}: {exc}"))
            continue
        report.results.append(
            InvariantResult(name, tracker.count, tracker.worst, tolerance, tracker.worst <= tolerance)
        )
    return report
