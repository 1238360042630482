import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qscissors.baselines import desired_state
from qscissors.detectors import DetectorKind, DetectorModel, outcome_labels
from qscissors.errors import DegenerateConfigurationError, ImpossibleOutcomeError, UsageError
from qscissors.fock import (
    BasisIndexer,
    PureState,
    apply_diagonal_povm,
    fidelity_to_pure,
    fock_state,
    partial_trace,
)
from qscissors.optics import BeamSplitterParams, SinglePairSource, SpdcParams, apply_beam_splitter_pure, coherent_state
from qscissors.pipeline import (
    ClickPattern,
    QsdConfig,
    detection_rate,
    ideal_detection_probability,
    ideal_fidelity,
    ideal_truncated_state,
    needs_correction,
    realistic_truncation,
    run_strategy,
    sigma_z_correct,
)

BAL = BeamSplitterParams.balanced()
PERFECT = DetectorModel.pndc()
T = BeamSplitterParams.from_transmittance

transmittances = st.floats(0.05, 0.95)
amplitudes = st.builds(lambda m, ph: m * cmath.exp(1j * ph), st.floats(0.05, 1.5), st.floats(0, 2 * math.pi))


def three_mode_oracle(alpha, bs1, bs2, n_max):
    """Amplitudes of (b1, c2, c3) summed term by term from the BS2 expansion."""
    t1, r1, t2, r2 = bs1.t, bs1.r, bs2.t, bs2.r
    psi = np.zeros((n_max,) * 3, dtype=complex)
    for n in range(n_max):
        for k in range(n + 1):
            pref = math.exp(-abs(alpha) ** 2 / 2) * alpha**n * (-r2.conjugate()) ** k * t2 ** (n - k)
            pref /= math.sqrt(math.factorial(k) * math.factorial(n - k))
            terms = [
                ((1, k, n - k), t1),
                ((0, k, n - k + 1), -math.sqrt(n - k + 1) * r1.conjugate() * r2),
                ((0, k + 1, n - k), -math.sqrt(k + 1) * r1.conjugate() * t2.conjugate()),
            ]
            for idx, c in terms:
                if max(idx) < n_max:
                    psi[idx] += pref * c
    return psi


@pytest.mark.parametrize("alpha,T1,T2", [(0.4, 0.5, 0.5), (0.3 + 0.2j, 0.3, 0.7), (-0.5j, 0.8, 0.4)])
def test_splitter_chain_matches_expansion(alpha, T1, T2):
    n = 9
    bs1, bs2 = T(T1), T(T2)
    after_bs1 = apply_beam_splitter_pure(fock_state((1, 0), n), 0, 1, bs1)
    out = apply_beam_splitter_pure(after_bs1 @ coherent_state(alpha, n, tol=1e-3), 2, 1, bs2).as_tensor()
    oracle = three_mode_oracle(alpha, bs1, bs2, n)
    b1, c2, c3 = np.indices(out.shape)
    exact = (c2 + c3) < n - 1  # both routes are complete below the box edge
    np.testing.assert_allclose(out[exact], oracle[exact], atol=1e-14)


def test_projected_expansion_gives_truncated_state():
    alpha, bs1, bs2 = 0.6 - 0.2j, T(0.4), T(0.7)
    psi = PureState.from_tensor(three_mode_oracle(alpha, bs1, bs2, 8)).density()
    rho, _ = apply_diagonal_povm(psi, 1, np.eye(8)[1])
    rho, prob = apply_diagonal_povm(rho, 2, np.eye(8)[0])
    reduced = partial_trace(rho, {0}).normalize()
    target = ideal_truncated_state(alpha, bs1, bs2, (1, 0), 8)
    assert fidelity_to_pure(reduced, target) == pytest.approx(1.0, abs=1e-12)
    assert prob == pytest.approx(ideal_detection_probability(alpha, bs1, bs2), rel=1e-12)


def test_ideal_state_examples():
    psi = ideal_truncated_state(1.0, BAL, BAL)
    np.testing.assert_allclose(np.abs(psi.amplitudes), [1 / math.sqrt(2)] * 2, atol=1e-15)
    psi = ideal_truncated_state(1.0, T(0.5), T(0.8))
    ratio = np.abs(psi.amplitudes)
    assert ratio[0] / ratio[1] == pytest.approx(math.sqrt(0.4) / math.sqrt(0.1))
    # the (0, 1) outcome flips the relative sign on symmetric splitters
    flipped = ideal_truncated_state(1.0, BAL, BAL, (0, 1)).amplitudes
    assert (flipped[1] / flipped[0]).real == pytest.approx(-1.0)


def test_ideal_fidelity_examples():
    assert ideal_fidelity(1.0, BAL, BAL) == pytest.approx(1.0, abs=1e-15)
    assert ideal_fidelity(1.0, T(0.5), T(0.8)) == pytest.approx(0.9, abs=1e-12)
    assert ideal_fidelity(0.0, T(0.3), T(0.6)) == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=50)
@given(amplitudes, transmittances, transmittances)
def test_closed_form_fidelity_matches_state_overlap(alpha, T1, T2):
    psi = ideal_truncated_state(alpha, T(T1), T(T2))
    direct = fidelity_to_pure(psi.density(), desired_state(alpha))
    assert ideal_fidelity(alpha, T(T1), T(T2)) == pytest.approx(direct, abs=1e-12)


@settings(max_examples=50)
@given(amplitudes, transmittances)
def test_equal_splitters_are_perfect(alpha, T0):
    assert ideal_fidelity(alpha, T(T0), T(T0)) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=50)
@given(st.floats(0, 2 * math.pi), transmittances, transmittances)
def test_fidelity_symmetric_under_splitter_swap_at_unit_intensity(phase, T1, T2):
    alpha = cmath.exp(1j * phase)
    assert ideal_fidelity(alpha, T(T1), T(T2)) == pytest.approx(ideal_fidelity(alpha, T(T2), T(T1)), abs=1e-12)


def test_splitter_swap_changes_fidelity_away_from_unit_intensity():
    # swapping exchanges the weights of the |alpha|^0 and |alpha|^4 terms
    alpha = math.sqrt(2.0)
    assert ideal_fidelity(alpha, T(0.5), T(0.8)) != pytest.approx(ideal_fidelity(alpha, T(0.8), T(0.5)), abs=1e-3)


@settings(max_examples=50)
@given(amplitudes, transmittances)
def test_other_outcome_with_corrected_sign(alpha, T1):
    # outcome (0, 1) followed by sigma_z is perfect when T1 + T2 = 1
    psi = sigma_z_correct(ideal_truncated_state(alpha, T(T1), T(1 - T1), (0, 1)))
    assert fidelity_to_pure(psi.density(), desired_state(alpha)) == pytest.approx(1.0, abs=1e-12)


def test_degenerate_splitters():
    with pytest.raises(DegenerateConfigurationError):
        ideal_fidelity(1.0, T(1.0), T(1.0))
    with pytest.raises(DegenerateConfigurationError):
        ideal_truncated_state(1.0, T(0.0), T(0.0))
    with pytest.raises(DegenerateConfigurationError):
        ideal_fidelity(0.0, T(1.0), T(0.3))


def test_detection_probability_examples():
    assert ideal_detection_probability(1.0, BAL, BAL) == pytest.approx(0.184, abs=1e-3)
    # identical splitters at |alpha|^2 = 1: best transmittance is 1/2
    probs = [ideal_detection_probability(1.0, T(t2), T(t2)) for t2 in np.linspace(0, 1, 101)]
    assert max(probs) == pytest.approx(0.25 * 2 * math.exp(-1), abs=1e-12)
    assert int(np.argmax(probs)) == 50
    assert ideal_detection_probability(0.0, BAL, BAL) == pytest.approx(0.25)


def test_sigma_z():
    amps = PureState(np.array([0.6, 0.8, 0.0]), BasisIndexer(1, 3))
    np.testing.assert_allclose(sigma_z_correct(amps).amplitudes, [0.6, -0.8, 0.0])
    rho = sigma_z_correct(amps.density())
    assert rho.matrix[0, 1] == pytest.approx(-0.48)
    assert needs_correction(ClickPattern(1, 0, 1))
    assert not needs_correction(ClickPattern(1, 1, 0))


@pytest.mark.parametrize("pattern,flip", [((1, 1, 0), False), ((1, 2, 1), False), ((1, 3, 2), False), ((1, 0, 1), True), ((1, 1, 2), True)])
def test_correction_rule_on_perfect_counters(pattern, flip):
    config = QsdConfig(alpha=0.6, source=SinglePairSource(), d1=PERFECT, d2=PERFECT, d3=PERFECT, cutoff=12)
    result = realistic_truncation(config, pattern)
    assert result.corrected is flip
    assert result.fidelity_to_desired == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_perfect_counters_reproduce_ideal_state(seed):
    rng = np.random.default_rng(seed)
    alpha = rng.uniform(0.1, 1.5) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    bs1, bs2 = T(rng.uniform(0.1, 0.9)), T(rng.uniform(0.1, 0.9))
    config = QsdConfig(alpha=alpha, bs1=bs1, bs2=bs2, source=SinglePairSource(), d1=PERFECT, d2=PERFECT, d3=PERFECT)
    result = realistic_truncation(config, (1, 1, 0))
    target = ideal_truncated_state(alpha, bs1, bs2, (1, 0), config.n_max)
    assert fidelity_to_pure(result.state, target) >= 1 - 1e-10
    assert result.probability_per_pulse == pytest.approx(ideal_detection_probability(alpha, bs1, bs2), rel=1e-8)


def test_weak_source_approaches_ideal():
    config = QsdConfig(
        alpha=1.0, source=SpdcParams.from_pair_probability(1e-8), d1=PERFECT, d2=PERFECT, d3=PERFECT
    )
    assert realistic_truncation(config).fidelity_to_desired >= 1 - 1e-6


def test_cpc_operating_points():
    assert realistic_truncation(QsdConfig(alpha=1.0)).fidelity_to_desired == pytest.approx(0.92, abs=0.02)
    blind = QsdConfig(alpha=1.0, d1=DetectorModel.cpc(eta=0.0), d2=DetectorModel.cpc(eta=0.0), d3=DetectorModel.cpc(eta=0.0))
    assert realistic_truncation(blind).fidelity_to_desired == pytest.approx(0.5, abs=0.01)


SMALL = dict(alpha=0.5, cutoff=7, tail_tol=1e-4)


@pytest.mark.parametrize(
    "detectors,pattern",
    [
        ((DetectorModel.cpc(),) * 3, (1, 1, 0)),
        ((DetectorModel.spc(), DetectorModel.spc(), DetectorModel.cpc()), (1, 2, 1)),
        ((DetectorModel.pndc(0.6, 1e6),) * 3, (1, 1, 2)),
    ],
)
def test_ensemble_and_dense_engines_agree(detectors, pattern):
    d1, d2, d3 = detectors
    config = QsdConfig(d1=d1, d2=d2, d3=d3, source=SpdcParams(0.3), **SMALL)
    a = realistic_truncation(config, pattern, engine="ensemble")
    b = realistic_truncation(config, pattern, engine="dense")
    np.testing.assert_allclose(a.state.matrix, b.state.matrix, atol=1e-12)
    assert a.probability_per_pulse == pytest.approx(b.probability_per_pulse, rel=1e-10)
    a.state.check()


def _probability(config, pattern):
    try:
        return realistic_truncation(config, pattern).probability_per_pulse
    except ImpossibleOutcomeError:
        return 0.0


def test_outcome_probabilities_sum_to_one():
    config = QsdConfig(
        alpha=0.5,
        source=SpdcParams(0.3),
        d1=DetectorModel.cpc(eta=0.6, r_dark=1e5),
        d2=DetectorModel(DetectorKind.PNDC, 0.8, 1e6),
        d3=DetectorModel.spc(eta=0.5),
        cutoff=8,
        tail_tol=1e-4,
    )
    labels = [outcome_labels(d, config.n_max) for d in (config.d1, config.d2, config.d3)]
    total = sum(_probability(config, p) for p in itertools.product(*labels))
    assert total == pytest.approx(1.0, abs=1e-9)


def test_dark_counts_lower_fidelity():
    fids = [
        realistic_truncation(QsdConfig(alpha=1.0, d1=DetectorModel.cpc(r_dark=r), d2=DetectorModel.cpc(r_dark=r), d3=DetectorModel.cpc(r_dark=r))).fidelity_to_desired
        for r in (0.0, 1e4, 1e6, 1e7)
    ]
    assert all(a >= b for a, b in zip(fids, fids[1:]))


def test_rate_is_probability_times_repetition_rate():
    config = QsdConfig(alpha=1.0, rep_rate=2e6)
    result = realistic_truncation(config)
    assert detection_rate(result, config) == pytest.approx(result.probability_per_pulse * 2e6)
    assert result.rate_per_second == pytest.approx(detection_rate(result, config))


def test_spc_two_click_channel():
    spc = DetectorModel.spc()
    config = QsdConfig(alpha=1.0, d1=spc, d2=spc, d3=spc)
    result = realistic_truncation(config, (1, 2, 1))
    assert result.rate_per_second == pytest.approx(680, rel=0.2)
    assert result.fidelity_to_desired == pytest.approx(0.84, abs=0.03)


def test_strategy_b_is_all_cpc():
    a = run_strategy("b", alpha=1.0)
    b = realistic_truncation(QsdConfig(alpha=1.0))
    assert a.fidelity_to_desired == pytest.approx(b.fidelity_to_desired, abs=1e-15)
    with pytest.raises(UsageError):
        run_strategy("e", alpha=1.0)


def test_impossible_outcome_raises():
    config = QsdConfig(alpha=0.5, source=SinglePairSource(), d1=PERFECT, d2=PERFECT, d3=PERFECT, cutoff=6, tail_tol=1e-3)
    with pytest.raises(ImpossibleOutcomeError):
        realistic_truncation(config, (0, 1, 0))


def test_config_validation():
    with pytest.raises(UsageError):
        QsdConfig(alpha=1.0, rep_rate=0)
    with pytest.raises(UsageError):
        QsdConfig(alpha=1.0, cutoff=3)
    with pytest.raises(UsageError):
        realistic_truncation(QsdConfig(alpha=1.0), engine="fast")
    with pytest.raises(UsageError):
        realistic_truncation(QsdConfig(alpha=1.0), (1, 2, 0))
