"""Exit criteria, one test per criterion, each at its stated tolerance."""
import math

import numpy as np

from qubitpair import cli, oracle
from qubitpair.pair import CorrelationSign, RatioParams, correlation_probs, local_probs, make_pair, visibilities_pair
from qubitpair.qubit import (
    BasisFrame,
    BlochDirection,
    adjoint_inverse,
    composed_transform,
    frame_matrix,
    outcome_probs_single,
    state_from_bloch,
    state_matrix,
)

PI, TAU = math.pi, 2 * math.pi
MINUS, PLUS = CorrelationSign.MINUS, CorrelationSign.PLUS
SEED = 20240101


def rng(offset=0):
    return np.random.default_rng(SEED + offset)


def oracle_joint(p2, chi, alpha, sign=MINUS, delta=0.0):
    frame = BasisFrame(chi, delta)
    return oracle.joint_born(oracle.expand_pair(make_pair(p2, alpha, sign)), frame, frame)


def alpha_sweep(p2, chi, sign, points):
    return np.array([oracle_joint(p2, chi, float(a), sign).as_tuple() for a in oracle.alpha_grid(points)])


def test_1_single_qubit_closed_form_vs_matrix(criterion):
    c = criterion(1, "single qubit: closed-form outcome probabilities vs |<e|s>|^2")
    g = rng(1)
    dev_matrix = dev_born = dev_sum = 0.0
    for theta, phi, chi, delta in zip(g.uniform(0, PI, 1000), g.uniform(0, TAU, 1000),
                                      g.uniform(0, PI, 1000), g.uniform(0, TAU, 1000)):
        d, f = BlochDirection(theta, phi), BasisFrame(chi, delta)
        p_e, p_ebar = outcome_probs_single(d, f)
        u, v = composed_transform(d, f).matrix[0]
        o_e, o_ebar = oracle.single_born(state_from_bloch(d), f)
        dev_matrix = max(dev_matrix, abs(p_e - abs(u) ** 2), abs(p_ebar - abs(v) ** 2))
        dev_born = max(dev_born, abs(p_e - o_e), abs(p_ebar - o_ebar))
        dev_sum = max(dev_sum, abs(p_e + p_ebar - 1))
    c.check("vs R_s R_e^-1 row", dev_matrix, 1e-12)
    c.check("vs direct projection", dev_born, 1e-12)
    c.check("P(e)+P(e-bar)=1", dev_sum, 1e-12)
    c.finish()


def test_2_pair_closed_form_vs_oracle(criterion):
    c = criterion(2, "pair: joint, P+/P- and local closed forms vs statevector oracle")
    g = rng(2)
    dev_joint = dev_agg = dev_local = dev_sum = 0.0
    for p2, chi, alpha in zip(g.uniform(0, 1, 1000), g.uniform(0, PI, 1000), g.uniform(0, TAU, 1000)):
        pair, frame = make_pair(p2, alpha), BasisFrame(chi)
        params = RatioParams.of(pair, frame)
        eps, sig = params.epsilon, params.sigma
        closed = correlation_probs(params, alpha)
        brute = oracle_joint(p2, chi, alpha)
        dev_joint = max(dev_joint, np.max(np.abs(np.subtract(closed.as_tuple(), brute.as_tuple()))))
        # aggregated (+) and (-) probabilities written out in (eps, sigma)
        p_plus = 2 * sig * (eps + 1 + 2 * math.sqrt(eps) * math.cos(alpha)) / ((1 + eps) * (1 + sig) ** 2)
        p_minus = (1 + sig**2 - 4 * math.sqrt(eps) * sig / (1 + eps) * math.cos(alpha)) / (1 + sig) ** 2
        dev_agg = max(dev_agg, abs(p_plus - brute.p_plus), abs(p_minus - brute.p_minus))
        dev_local = max(dev_local, np.max(np.abs(np.subtract(local_probs(params), brute.local_a))))
        dev_sum = max(dev_sum, abs(brute.total - 1), abs(closed.total - 1), abs(p_plus + p_minus - 1))
    c.check("joint", dev_joint, 1e-12)
    c.check("P+ and P-", dev_agg, 1e-12)
    c.check("local", dev_local, 1e-12)
    c.check("P_net=1", dev_sum, 1e-12)
    c.finish()


def test_3_local_probability_phase_independent(criterion):
    c = criterion(3, "oracle P(e) flat in alpha for eps in [1e-6, 1e6], 9 sigmas")
    worst = 0.0
    for eps in np.logspace(-6, 6, 25):
        p2 = eps / (1 + eps)
        for sigma in np.logspace(-4, 4, 9):
            sweep = alpha_sweep(p2, BasisFrame.from_sigma(sigma).chi, MINUS, 64)
            p_e = sweep[:, 0] + sweep[:, 1]
            worst = max(worst, float(np.max(p_e) - np.min(p_e)))
    c.check("max variation over 64 alphas", worst, 1e-12)
    c.finish()


def test_4_reduced_state_invariance(criterion):
    c = criterion(4, "reduced state of A is diag(p^2, q^2) for every alpha")
    g = rng(4)
    dev_diag = dev_off = 0.0
    z_axis = BasisFrame(0.0)
    for p2 in np.concatenate([[0.0, 0.5, 1.0], g.uniform(0, 1, 50)]):
        for alpha in np.concatenate([[0.0, PI], g.uniform(0, TAU, 20)]):
            pair = make_pair(p2, alpha)
            rho = oracle.reduce(oracle.expand_pair(pair), "A")
            dev_diag = max(dev_diag, np.max(np.abs(rho.matrix - np.diag([pair.p**2, pair.q**2]))))
            dev_off = max(dev_off, oracle.offdiag_magnitude(rho, z_axis))
    c.check("entrywise vs diag", dev_diag, 1e-15)
    c.check("z-basis off-diagonal", dev_off, 1e-15)
    c.finish()


def _printed_v_minus(eps, sigma):
    # the V- expression exactly as the criterion states it
    return 4 * math.sqrt(eps * sigma) / ((1 + eps) * (1 + sigma**2))


def test_5_visibility_fidelity(criterion):
    c = criterion(5, "empirical 256-point visibilities vs stated V+ and V- expressions")
    for eps in (1.0, 4.0):
        p2 = eps / (1 + eps)
        for sigma in (1.0, 3.0):
            sweep = alpha_sweep(p2, BasisFrame.from_sigma(sigma).chi, MINUS, 256)
            v_plus = oracle.fringe_contrast(sweep[:, 0] + sweep[:, 3])
            v_minus = oracle.fringe_contrast(sweep[:, 1] + sweep[:, 2])
            c.check(f"V+ eps={eps:g} sigma={sigma:g}", abs(v_plus - 2 * math.sqrt(eps) / (1 + eps)), 1e-9)
            c.check(f"V- eps={eps:g} sigma={sigma:g}", abs(v_minus - _printed_v_minus(eps, sigma)), 1e-9)
            if (eps, sigma) == (4.0, 1.0):
                c.check("spot V+=V-=0.8", max(abs(v_plus - 0.8), abs(v_minus - 0.8)), 1e-9)
            if (eps, sigma) == (4.0, 3.0):
                c.check("spot V-=0.2771281292", abs(v_minus - 0.2771281292), 1e-9)
    c.finish()


def test_6_swap_property(criterion):
    c = criterion(6, "(+) pair visibilities and probabilities are the (-) pair's with roles swapped")
    g = rng(6)
    dev_v = dev_p = 0.0
    cases = [(0.8, PI / 2), (0.5, PI / 2), (1.0, 1.0), (0.8, BasisFrame.from_sigma(3).chi)]
    cases += list(zip(g.uniform(0, 1, 60), g.uniform(0, PI, 60)))
    for p2, chi in cases:
        params = RatioParams.of(make_pair(p2), BasisFrame(chi))
        v_plus, v_minus = visibilities_pair(params)
        plus = alpha_sweep(p2, chi, PLUS, 256)
        dev_v = max(dev_v, abs(oracle.fringe_contrast(plus[:, 0] + plus[:, 3]) - v_minus),
                    abs(oracle.fringe_contrast(plus[:, 1] + plus[:, 2]) - v_plus))
        for i, alpha in enumerate(oracle.alpha_grid(256)[::8]):
            swapped = correlation_probs(params, float(alpha) + PI, MINUS).swapped()
            dev_p = max(dev_p, np.max(np.abs(plus[8 * i] - np.array(swapped.as_tuple()))))
    c.check("visibility swap", dev_v, 1e-9)
    c.check("probability swap at alpha+pi", dev_p, 1e-12)
    c.finish()


def test_7_matrix_algebra(criterion):
    c = criterion(7, "det R_s = -e^{i phi}, R_e^-1 R_e = I")
    g = rng(7)
    dev_det = dev_inv = 0.0
    for theta, phi, chi, delta in zip(g.uniform(0, PI, 1000), g.uniform(0, TAU, 1000),
                                      g.uniform(0, PI, 1000), g.uniform(0, TAU, 1000)):
        d = BlochDirection(theta, phi)
        dev_det = max(dev_det, abs(state_matrix(d).det + np.exp(1j * d.phi)))
        r_e = frame_matrix(BasisFrame(chi, delta))
        dev_inv = max(dev_inv, np.max(np.abs((adjoint_inverse(r_e) @ r_e).matrix - np.eye(2))))
    c.check("determinant", dev_det, 1e-12)
    c.check("inverse", dev_inv, 1e-12)
    c.finish()


def test_8_limits(criterion):
    c = criterion(8, "near-product limit matches m^2; singlet is (0, .5, .5, 0)")
    worst = 0.0
    for chi in np.linspace(0, PI, 13):
        frame = BasisFrame(chi)
        pair = make_pair(1 - 1e-13, 0.3)
        single, _ = outcome_probs_single(BlochDirection(0.0), frame)
        closed, _ = local_probs(RatioParams.of(pair, frame))
        brute = oracle_joint(1 - 1e-13, chi, 0.3).local_a[0]
        worst = max(worst, abs(closed - frame.m**2), abs(brute - frame.m**2), abs(single - frame.m**2))
    c.check("P(e) vs m^2 at p2=1-1e-13", worst, 1e-5)
    target = np.array([0, 0.5, 0.5, 0])
    closed = correlation_probs(RatioParams(1, 1), PI).as_tuple()
    brute = oracle_joint(0.5, BasisFrame.from_sigma(1).chi, PI).as_tuple()
    c.check("singlet joint", max(np.max(np.abs(closed - target)), np.max(np.abs(brute - target))), 1e-12)
    c.finish()


def test_9_cli_contract(criterion, tmp_path, capsys):
    c = criterion(9, "verify --samples 1000 --seed 42 exits 0; sweeps are byte-identical")
    code = cli.main(["verify", "--samples", "1000", "--seed", "42"])
    report = capsys.readouterr().out
    c.check("verify exit code", float(code), 0.0)
    c.check("report says PASS", 0.0 if report.rstrip().endswith("overall: PASS") else 1.0, 0.0)
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        cli.main(["sweep", "--axis", "p2:0:1:9", "--axis", "alpha:0:6.283185307179586:16:open",
                  "--chi", "1.2", "--out", str(path)])
    c.check("byte-identical sweeps", 0.0 if paths[0].read_bytes() == paths[1].read_bytes() else 1.0, 0.0)
    c.finish()
