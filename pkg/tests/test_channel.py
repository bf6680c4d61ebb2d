from __future__ import annotations

import numpy as np
import pytest

from mcce.channel import (
    ChannelSpec,
    CovarianceKind,
    FadingModel,
    add_awgn,
    apply_channel,
    approx_pilot_covariance,
    draw_channel,
    frequency_response,
    true_pilot_covariance,
)
from mcce.errors import DimensionError, ModelViolationError, ParameterError
from mcce.waveforms import System, WaveformParams, add_cp, remove_cp


def _short_ofdm() -> WaveformParams:
    return WaveformParams(System.OFDM, subcarriers=16, subsymbols=1, cp_length=8)


def test_spec_normalizes_powers() -> None:
    spec = ChannelSpec.multipath()
    assert spec.delays == (0.0, 2.7, 3.1, 4.9)
    assert np.isclose(sum(spec.powers), 1.0)
    assert np.isclose(spec.powers[0] / spec.powers[3], 8.0)
    assert spec.model is FadingModel.RAYLEIGH


def test_spec_rejects_bad_profiles() -> None:
    with pytest.raises(ParameterError):
        ChannelSpec((0.0, 2.0), (1.0,), cp_length=8)
    with pytest.raises(ParameterError):
        ChannelSpec((0.0, 3.0, 2.0), (1.0, 1.0, 1.0), cp_length=8)
    with pytest.raises(ParameterError):
        ChannelSpec((0.0,), (0.0,), cp_length=8)


def test_delay_spread_beyond_prefix_is_a_model_violation() -> None:
    with pytest.raises(ModelViolationError):
        ChannelSpec.multipath(cp_length=4)
    with pytest.raises(ModelViolationError):
        ChannelSpec((0.0, 8.0), (1.0, 1.0), cp_length=8)


def test_flat_static_channel_has_constant_response() -> None:
    realization = draw_channel(ChannelSpec.flat(model=FadingModel.STATIC), 64)
    assert np.allclose(realization.freq_response, 1.0)


def test_rayleigh_tap_powers_match_profile() -> None:
    spec = ChannelSpec.multipath()
    rng = np.random.default_rng(20)
    gains = np.array([draw_channel(spec, 1, rng).gains for _ in range(8000)])
    measured = np.mean(np.abs(gains) ** 2, axis=0)
    assert np.allclose(measured, spec.powers, rtol=0.05)


def test_draws_are_deterministic_per_seed() -> None:
    spec = ChannelSpec.multipath()
    first = draw_channel(spec, 128, 7)
    second = draw_channel(spec, 128, 7)
    assert np.array_equal(first.gains, second.gains)
    assert np.array_equal(first.freq_response, second.freq_response)
    assert not np.array_equal(first.gains, draw_channel(spec, 128, 8).gains)


def test_draw_rejects_empty_grid() -> None:
    with pytest.raises(DimensionError):
        draw_channel(ChannelSpec.multipath(), 0)


def test_integer_delay_is_a_cyclic_shift() -> None:
    params = _short_ofdm()
    spec = ChannelSpec((2.0,), (1.0,), cp_length=8, model=FadingModel.STATIC)
    realization = draw_channel(spec, params.subcarriers)
    x = np.random.default_rng(21).standard_normal(16) + 0j
    y = apply_channel(add_cp(x, 8), realization, params)
    assert np.allclose(remove_cp(y, 8), np.roll(x, 2))


def test_fractional_channel_is_a_spectral_product() -> None:
    params = _short_ofdm()
    realization = draw_channel(ChannelSpec.multipath(), params.subcarriers, 22)
    x = np.random.default_rng(23).standard_normal(16) + 1j
    y = remove_cp(apply_channel(add_cp(x, 8), realization, params), 8)
    assert np.allclose(np.fft.fft(y) / np.fft.fft(x), realization.freq_response)
    expected = frequency_response(realization.gains, realization.delays, 16)
    assert np.allclose(realization.freq_response, expected)


def test_apply_channel_checks_block_length() -> None:
    params = _short_ofdm()
    realization = draw_channel(ChannelSpec.multipath(), params.subcarriers, 1)
    with pytest.raises(DimensionError):
        apply_channel(np.zeros(20), realization, params)


def test_awgn_variance_and_edge_cases() -> None:
    noisy = add_awgn(np.zeros(200_000), 0.3, rng=24)
    assert abs(np.mean(np.abs(noisy) ** 2) - 0.3) < 0.006
    assert abs(np.mean(noisy.real**2) - 0.15) < 0.004

    clean = np.arange(4, dtype=np.complex128)
    assert np.array_equal(add_awgn(clean, 0.0), clean)
    with pytest.raises(ParameterError):
        add_awgn(clean, -1.0)


def test_true_covariance_is_hermitian_toeplitz_with_unit_diagonal() -> None:
    params = WaveformParams(System.GFDM)
    covariance = true_pilot_covariance(ChannelSpec.multipath(), params)
    entries = covariance.entries
    assert covariance.kind is CovarianceKind.TRUE_PDP
    assert entries.shape == (32, 32)
    assert np.allclose(entries, entries.conj().T)
    assert np.allclose(np.diag(entries), 1.0)
    assert np.allclose(entries[1:, 1:], entries[:-1, :-1])
    assert covariance.min_eigenvalue() > -1e-10
    assert not entries.flags.writeable


def test_true_covariance_matches_sample_covariance() -> None:
    params = WaveformParams(System.OFDM)
    spec = ChannelSpec.multipath()
    rng = np.random.default_rng(25)
    samples = np.array(
        [draw_channel(spec, 128, rng).freq_response[params.pilot_bins] for _ in range(6000)]
    )
    sample_cov = samples.T @ samples.conj() / samples.shape[0]
    expected = true_pilot_covariance(spec, params).entries
    assert np.max(np.abs(sample_cov - expected)) < 0.08


def test_approximated_covariance_follows_geometric_sum() -> None:
    covariance = approx_pilot_covariance(8, 128, 4, 33)
    entries = covariance.entries
    assert covariance.kind is CovarianceKind.APPROXIMATED
    assert np.isclose(entries[0, 0], 1.0)
    assert abs(entries[4, 0]) < 1e-12
    assert np.isclose(entries[32, 0], 1.0)

    a = 4 / 128
    closed_form = (1 - np.exp(-2j * np.pi * a * 8)) / (1 - np.exp(-2j * np.pi * a)) / 8
    assert np.isclose(entries[1, 0], closed_form)


def test_approximated_covariance_needs_a_prefix() -> None:
    with pytest.raises(ParameterError):
        approx_pilot_covariance(0, 128, 4, 32)
