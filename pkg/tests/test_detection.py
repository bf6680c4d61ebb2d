from __future__ import annotations

import numpy as np
import pytest

from mcce.channel import add_awgn
from mcce.core import QPSK_ALPHABET, qpsk_map, qpsk_slice
from mcce.detection import DEEP_FADE_FLOOR, count_bit_errors, ic_receive, ofdm_detect, zf_equalize
from mcce.errors import DimensionError, ParameterError, ShapeMismatchError
from mcce.harness import ebn0_to_noise_variance, link_overhead
from mcce.waveforms import GfdmModem, System, WaveformParams


def _modem(rolloff: float = 0.5) -> GfdmModem:
    return GfdmModem(WaveformParams(System.GFDM, subcarriers=16, subsymbols=5, rolloff=rolloff))


def _frame(modem: GfdmModem, seed: int):
    rng = np.random.default_rng(seed)
    data = qpsk_map(rng.integers(0, 2, size=2 * modem.data_symbols_per_frame))
    pilots = qpsk_map(rng.integers(0, 2, size=2 * modem.params.n_pilots))
    return modem.frame(data, pilots)


def test_zf_with_unit_channel_is_identity() -> None:
    y = np.array([1.0 + 2j, -0.5j, 3.0])
    result = zf_equalize(y, np.ones(3))
    assert np.allclose(result.spectrum, y)
    assert result.flagged_bins.size == 0
    assert result.warnings == ()

    rows = np.arange(8, dtype=np.complex128).reshape(2, 4)
    h = np.array([1.0, 2.0, 1j, -1.0])
    assert np.allclose(zf_equalize(rows, h).spectrum, rows / h)


def test_zf_regularizes_deep_fades() -> None:
    h = np.array([1.0, 0.0, 1e-10j, 0.5])
    result = zf_equalize(np.ones(4), h)
    assert result.flagged_bins.tolist() == [1, 2]
    assert result.warnings == ("deep fade regularized on 2 bin(s)",)
    assert np.all(np.isfinite(result.spectrum))
    assert abs(result.spectrum[1]) <= 1 / DEEP_FADE_FLOOR
    assert np.isclose(result.spectrum[3], 2.0)


def test_zf_rejects_mismatched_shapes() -> None:
    with pytest.raises(ShapeMismatchError):
        zf_equalize(np.ones(4), np.ones(5))


def test_genie_cancellation_leaves_only_the_own_subcarrier() -> None:
    modem = _modem()
    frame = _frame(modem, 40)
    y_freq = np.fft.fft(frame.time_signal, norm="ortho")
    vectors = modem.frequency_vectors(frame.symbols)
    cleaned = modem.windows(y_freq) - modem.adjacent_interference(vectors)
    assert np.max(np.abs(cleaned - modem.coefficients(vectors))) < 1e-10
    recovered = modem.detect(modem.matched_filter(cleaned))
    assert np.max(np.abs(recovered - frame.symbols)) < 1e-10


def test_noiseless_loopback_is_error_free() -> None:
    modem = _modem(rolloff=0.2)
    for seed in range(5):
        frame = _frame(modem, 41 + seed)
        y_freq = np.fft.fft(frame.time_signal, norm="ortho")
        equalized = zf_equalize(y_freq, np.ones(modem.params.block_length)).spectrum
        state = ic_receive(equalized, modem, 2, pilots=frame.pilots)
        assert state.j == state.J == 2
        assert count_bit_errors(state.d_hat, frame.symbols, frame.data_mask)[0] == 0
        assert np.allclose(state.d_hat[modem.params.pilot_subcarriers, 0], frame.pilots)


def _ic_errors(modem: GfdmModem, frame, y_freq: np.ndarray, iterations: int) -> int:
    state = ic_receive(y_freq, modem, iterations, pilots=frame.pilots)
    return count_bit_errors(state.d_hat, frame.symbols, frame.data_mask)[0]


def test_ic_removes_self_interference_errors_at_wide_rolloff() -> None:
    modem = _modem(rolloff=0.5)
    single_shot = cancelled = 0
    for seed in range(20):
        frame = _frame(modem, 50 + seed)
        y_freq = np.fft.fft(frame.time_signal, norm="ortho")
        single_shot += _ic_errors(modem, frame, y_freq, 0)
        cancelled += _ic_errors(modem, frame, y_freq, 2)
    assert single_shot > 0
    assert cancelled == 0


def test_ic_does_not_degrade_ber_under_noise() -> None:
    modem = _modem(rolloff=0.5)
    noise_variance = ebn0_to_noise_variance(10.0, overhead=link_overhead(modem.params))
    single_shot = cancelled = 0
    for seed in range(20):
        frame = _frame(modem, 80 + seed)
        received = add_awgn(frame.time_signal, noise_variance, 180 + seed)
        y_freq = np.fft.fft(received, norm="ortho")
        single_shot += _ic_errors(modem, frame, y_freq, 0)
        cancelled += _ic_errors(modem, frame, y_freq, 2)
    assert cancelled <= single_shot


def test_zero_iterations_return_the_initial_decisions() -> None:
    modem = _modem()
    frame = _frame(modem, 60)
    y_freq = np.fft.fft(frame.time_signal, norm="ortho")
    state = ic_receive(y_freq, modem, 0)
    expected = qpsk_slice(modem.detect(modem.matched_filter(modem.windows(y_freq))))
    assert state.j == 0
    assert np.array_equal(state.d_hat, expected)
    assert not state.y0.flags.writeable


def test_ic_argument_errors() -> None:
    modem = _modem()
    y_freq = np.zeros(modem.params.block_length, dtype=np.complex128)
    with pytest.raises(ParameterError):
        ic_receive(y_freq, modem, -1)
    with pytest.raises(DimensionError):
        ic_receive(y_freq, modem, 1, pilots=np.ones(3))
    with pytest.raises(DimensionError):
        ic_receive(np.zeros(10), modem, 1)


def test_ofdm_detect_slices_each_bin() -> None:
    noisy = QPSK_ALPHABET * 0.8 + 0.05j
    assert np.allclose(ofdm_detect(noisy), QPSK_ALPHABET)


def test_bit_errors_follow_gray_distance() -> None:
    truth = np.full(4, QPSK_ALPHABET[0])
    assert count_bit_errors(truth, truth) == (0, 8)
    assert count_bit_errors(truth * -1j, truth) == (4, 8)
    assert count_bit_errors(-truth, truth) == (8, 8)

    decided = truth.copy()
    decided[0] = -truth[0]
    mask = np.array([False, True, True, True])
    assert count_bit_errors(decided, truth, mask) == (0, 6)


def test_bit_error_shape_checks() -> None:
    with pytest.raises(ShapeMismatchError):
        count_bit_errors(np.ones(3), np.ones(4))
    with pytest.raises(ShapeMismatchError):
        count_bit_errors(np.ones(3), np.ones(3), np.ones(2, dtype=bool))
