from __future__ import annotations

from copy import deepcopy
from typing import Any

import numpy as np
import pytest
from scipy import linalg
from scipy.special import erfc

from mcce.channel import ChannelSpec, FadingModel, draw_channel, true_pilot_covariance
from mcce.config import DEFAULT_CONFIG
from mcce.errors import ConfigError, ParameterError
from mcce.estimators import EstimatorKind, ce_basis
from mcce.harness import (
    SimConfig,
    SweepCell,
    SweepReport,
    ber_crossing,
    ber_gaps,
    ebn0_to_noise_variance,
    horizontal_gap_db,
    link_overhead,
    noise_variances,
    parse_ebn0_grid,
    resolve_seed,
    run_ber_sweep,
    run_mse_sweep,
    trial_streams,
)
from mcce.report import render_csv
from mcce.waveforms import System, WaveformParams


def _config(**sections: dict[str, Any] | str) -> SimConfig:
    mapping = deepcopy(DEFAULT_CONFIG)
    mapping["sweep"]["seed"] = 11
    for name, values in sections.items():
        if isinstance(values, dict):
            mapping[name].update(values)
        else:
            mapping[name] = values
    return SimConfig.from_mapping(mapping)


def _small_gfdm(**sweep: Any) -> SimConfig:
    return _config(
        waveform={"subcarriers": 32, "subsymbols": 5, "pilot_spacing": 4, "cp_length": 8},
        estimation={"basis_functions": 6},
        sweep={"ebn0_db": "0,10", "trials": 6, "batch_size": 2, "max_bit_errors": 50, **sweep},
    )


def _mse(report: SweepReport, estimator: str, ebn0: float = 0.0) -> float:
    value = report.cell(estimator, ebn0).mse_db
    assert value is not None
    return value


def test_link_overhead_counts_prefix_and_pilots() -> None:
    ofdm = WaveformParams(System.OFDM)
    gfdm = WaveformParams(System.GFDM)
    assert link_overhead(ofdm) == pytest.approx((136 / 128) * (128 / 96))
    assert link_overhead(gfdm) == pytest.approx((648 / 640) * (128 / 96))
    assert link_overhead(gfdm) < link_overhead(ofdm)
    with pytest.raises(ParameterError):
        link_overhead(WaveformParams(System.OFDM, subcarriers=4, pilot_spacing=1))


def test_noise_variance_from_ebn0() -> None:
    assert ebn0_to_noise_variance(0.0) == pytest.approx(0.5)
    assert ebn0_to_noise_variance(10.0, overhead=2.0) == pytest.approx(0.1)
    with pytest.raises(ParameterError):
        ebn0_to_noise_variance(0.0, overhead=0.0)
    variances = noise_variances((0.0, 10.0), WaveformParams(System.OFDM))
    assert variances[0] == pytest.approx(1.4166666 / 2, rel=1e-6)
    assert variances[1] == pytest.approx(variances[0] / 10)


def test_parse_ebn0_grid_forms() -> None:
    assert parse_ebn0_grid("0:5:30") == (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    assert parse_ebn0_grid("0:0.5:1") == (0.0, 0.5, 1.0)
    assert parse_ebn0_grid("1, 2.5") == (1.0, 2.5)
    assert parse_ebn0_grid(3) == (3.0,)
    assert parse_ebn0_grid([0, 10]) == (0.0, 10.0)
    for bad in ("5:0:10", "1:2", "", "10:1:0"):
        with pytest.raises(ConfigError):
            parse_ebn0_grid(bad)


def test_resolve_seed() -> None:
    assert resolve_seed(12) == 12
    assert resolve_seed("12") == 12
    assert resolve_seed("auto") >= 0
    for bad in (None, "", "-1", "abc"):
        with pytest.raises(ConfigError):
            resolve_seed(bad)


def _draw(sequence: np.random.SeedSequence) -> np.ndarray:
    return np.random.default_rng(sequence).standard_normal(4)


def test_trial_streams_are_reproducible_and_independent() -> None:
    first = trial_streams(5, 3)
    again = trial_streams(5, 3)
    other = trial_streams(5, 4)
    assert np.array_equal(_draw(first.channel), _draw(again.channel))
    assert np.array_equal(_draw(first.noise), _draw(again.noise))
    assert not np.array_equal(_draw(first.channel), _draw(other.channel))
    assert not np.array_equal(_draw(first.channel), _draw(first.noise))


def test_settings_reject_structural_problems() -> None:
    with pytest.raises(ConfigError, match="basis_functions"):
        _config(estimation={"basis_functions": 40})
    with pytest.raises(ConfigError, match="prefix"):
        _config(waveform={"cp_length": 4})
    with pytest.raises(ConfigError, match="pilot spacing"):
        _config(waveform={"pilot_spacing": 3})
    with pytest.raises(ConfigError, match="unknown estimator"):
        _config(estimation={"estimators": ["ls", "wiener"]})

    mapping = deepcopy(DEFAULT_CONFIG)
    mapping["sweep"]["seed"] = 1
    del mapping["detection"]
    with pytest.raises(ConfigError, match="missing config key"):
        SimConfig.from_mapping(mapping)


def test_settings_without_bem_ignore_basis_size() -> None:
    settings = _config(estimation={"estimators": "ls,lmmse", "basis_functions": 40})
    assert settings.estimators == (EstimatorKind.LS, EstimatorKind.LMMSE)
    assert settings.to_dict()["estimation"]["estimators"] == ["ls", "lmmse"]


ESTIMATORS = ("lmmse", "lmmse-bem", "almmse-bem", "ls-bem", "ls")


def _curves(report: SweepReport, grid: tuple[float, ...]) -> dict[str, list[float]]:
    return {name: [_mse(report, name, ebn0) for ebn0 in grid] for name in ESTIMATORS}


def test_gfdm_mse_curves_across_the_grid() -> None:
    grid = (0.0, 10.0, 20.0, 30.0)
    report = run_mse_sweep(_config(sweep={"ebn0_db": "0:10:30", "trials": 200, "seed": 3}))
    curves = _curves(report, grid)

    for curve in curves.values():
        assert all(later <= earlier + 0.1 for earlier, later in zip(curve, curve[1:]))

    lmmse, lmmse_bem, almmse_bem, ls_bem, ls = (curves[name] for name in ESTIMATORS)
    for index in range(len(grid)):
        assert lmmse[index] <= lmmse_bem[index] + 0.5
        assert lmmse_bem[index] <= almmse_bem[index] + 0.2
    for index in (0, 1):
        assert almmse_bem[index] < ls_bem[index] < ls[index]

    # 18 causal CE delays cannot hold the fractional taps: BEM curves floor near -21 dB
    assert ls[2] < ls_bem[2]
    assert ls[3] < ls_bem[3] - 5.0
    assert almmse_bem[3] > ls_bem[3]
    assert -23.0 < lmmse_bem[3] < -19.5
    assert lmmse[3] < -35.0

    assert report.cell("ls-bem", 0.0).basis == "ce"
    assert report.cell("ls", 0.0).basis == ""


def test_mse_gaps_at_15_db_under_the_basis_floor() -> None:
    report = run_mse_sweep(_config(sweep={"ebn0_db": "15", "trials": 300, "seed": 1}))
    almmse_bem = _mse(report, "almmse-bem", 15.0)
    assert 1.5 < _mse(report, "ls", 15.0) - almmse_bem < 2.5
    assert 0.5 < _mse(report, "ls-bem", 15.0) - almmse_bem < 1.6


def test_ce_and_lp_bases_share_the_high_snr_floor() -> None:
    floors = {}
    for basis in ("ce", "lp"):
        report = run_mse_sweep(
            _config(
                estimation={"estimators": ["almmse-bem"], "basis": basis},
                sweep={"ebn0_db": "30", "trials": 300, "seed": 1},
            )
        )
        floors[basis] = _mse(report, "almmse-bem", 30.0)
    assert abs(floors["ce"] - floors["lp"]) < 1.0
    assert all(-21.5 < floor < -17.5 for floor in floors.values())


def test_ce_projection_residual_of_the_multipath_channel() -> None:
    params = WaveformParams(System.GFDM)
    basis = ce_basis(params.n_pilots, 18, params.pilot_spacing, params.subcarriers).matrix
    leakage = np.eye(params.n_pilots) - basis @ linalg.pinv(basis)

    def residual(spec: ChannelSpec) -> float:
        covariance = true_pilot_covariance(spec, params).entries
        kept = leakage @ covariance @ leakage.conj().T
        return float(np.real(np.trace(kept)) / np.real(np.trace(covariance)))

    # about -22 dB, almost all of it from the tap at 2.7 samples
    assert 4e-3 < residual(ChannelSpec.multipath()) < 9e-3
    assert residual(ChannelSpec((0.0, 2.0, 5.0), (1.0, 0.5, 0.25), 8)) < 1e-20


@pytest.mark.parametrize("system", ["ofdm", "gfdm"])
def test_ls_error_vanishes_without_noise(system: str) -> None:
    report = run_mse_sweep(
        _config(system=system, estimation={"estimators": ["ls"]}, sweep={"ebn0_db": "300", "trials": 3})
    )
    assert _mse(report, "ls", 300.0) < -100.0


@pytest.mark.parametrize("system", ["ofdm", "gfdm"])
def test_ls_error_matches_noise_to_channel_energy_on_a_static_channel(system: str) -> None:
    settings = _config(
        system=system,
        channel={"model": "static"},
        estimation={"estimators": ["ls"]},
        sweep={"ebn0_db": "10", "trials": 400},
    )
    report = run_mse_sweep(settings)
    params = settings.waveform
    spec = ChannelSpec.multipath(model=FadingModel.STATIC)
    h_pilot = draw_channel(spec, params.grid_size).freq_response[params.pilot_bins]
    sigma2 = noise_variances((10.0,), params)[0]
    expected_db = 10 * np.log10(params.n_pilots * sigma2 / np.sum(np.abs(h_pilot) ** 2))
    assert _mse(report, "ls", 10.0) == pytest.approx(expected_db, abs=0.3)


def test_gfdm_ls_error_sits_below_ofdm_by_the_prefix_overhead() -> None:
    grid = (0.0, 10.0, 20.0)
    curves = {}
    for system in ("ofdm", "gfdm"):
        report = run_mse_sweep(
            _config(
                system=system,
                channel={"model": "static"},
                estimation={"estimators": ["ls"]},
                sweep={"ebn0_db": "0,10,20", "trials": 400},
            )
        )
        curves[system] = [_mse(report, "ls", ebn0) for ebn0 in grid]
    prefix_gap = 10 * np.log10((136 / 128) / (648 / 640))
    for ofdm, gfdm in zip(curves["ofdm"], curves["gfdm"]):
        assert gfdm < ofdm
        assert ofdm - gfdm == pytest.approx(prefix_gap, abs=0.15)


def test_ofdm_and_gfdm_estimates_are_close_under_fading() -> None:
    kinds = {"estimators": ["ls", "almmse-bem"]}
    sweep = {"ebn0_db": "5", "trials": 150}
    ofdm = run_mse_sweep(_config(system="ofdm", estimation=kinds, sweep=sweep))
    gfdm = run_mse_sweep(_config(system="gfdm", estimation=kinds, sweep=sweep))
    for estimator in ("ls", "almmse-bem"):
        assert abs(_mse(ofdm, estimator, 5.0) - _mse(gfdm, estimator, 5.0)) < 1.0


def test_mse_sweep_leaves_out_perfect_csi() -> None:
    report = run_mse_sweep(
        _config(estimation={"estimators": ["perfect", "ls"]}, sweep={"ebn0_db": "10", "trials": 2})
    )
    assert report.estimators() == ["ls"]
    assert any("perfect CSI" in warning for warning in report.warnings)
    cell = report.cell("ls", 10.0)
    assert cell.ber is None
    assert cell.mse_full_db is not None
    assert cell.ci_halfwidth > 0


def test_perfect_csi_ber_matches_awgn_closed_form() -> None:
    settings = _config(
        system="ofdm",
        channel={"model": "static", "delays": [0.0], "powers": [1.0]},
        estimation={"estimators": ["perfect"]},
        sweep={"ebn0_db": "0,4,8", "trials": 400, "max_bit_errors": 400, "batch_size": 50},
    )
    report = run_ber_sweep(settings)
    overhead = link_overhead(settings.waveform)
    for ebn0 in (0.0, 4.0, 8.0):
        cell = report.cell("perfect", ebn0)
        ebn0_linear = 10 ** (ebn0 / 10)
        expected = 0.5 * erfc(np.sqrt(ebn0_linear / overhead))
        assert cell.bits and cell.bit_errors is not None
        tolerance = 4 * np.sqrt(expected * (1 - expected) / cell.bits)
        assert abs(cell.ber - expected) < tolerance


def test_ber_sweep_puts_perfect_csi_first_and_stops_early() -> None:
    settings = _config(
        system="ofdm",
        estimation={"estimators": ["ls", "ls-bem"]},
        sweep={"ebn0_db": "0", "trials": 40, "max_bit_errors": 5, "batch_size": 4},
    )
    report = run_ber_sweep(settings)
    assert report.estimators() == ["perfect", "ls", "ls-bem"]
    for cell in report.cells:
        assert cell.trials == 4
        assert cell.bit_errors >= 5
        assert cell.ber == pytest.approx(cell.bit_errors / cell.bits)
        assert cell.mse_db is None


def test_ber_sweep_warns_when_a_cell_hits_the_trial_cap() -> None:
    settings = _config(
        system="ofdm",
        channel={"model": "static", "delays": [0.0], "powers": [1.0]},
        estimation={"estimators": ["perfect"]},
        sweep={"ebn0_db": "60", "trials": 6, "batch_size": 4},
    )
    report = run_ber_sweep(settings)
    cell = report.cell("perfect", 60.0)
    assert cell.trials == 6
    assert cell.bit_errors == 0
    assert cell.ber == 0.0
    assert any("trial cap" in warning for warning in report.warnings)


def test_reports_do_not_depend_on_worker_count() -> None:
    serial = _small_gfdm(workers=1)
    pooled = _small_gfdm(workers=3)
    assert render_csv(run_mse_sweep(serial)) == render_csv(run_mse_sweep(pooled))
    assert render_csv(run_ber_sweep(serial)) == render_csv(run_ber_sweep(pooled))


def test_lp_basis_sweep_runs() -> None:
    report = run_mse_sweep(
        _config(
            waveform={"subcarriers": 32, "pilot_spacing": 4},
            estimation={"estimators": ["ls-bem", "almmse-bem"], "basis": "lp", "basis_functions": 4},
            sweep={"ebn0_db": "10", "trials": 2},
        )
    )
    assert {cell.basis for cell in report.cells} == {"lp"}
    assert report.config["estimation"]["basis"] == "lp"


def test_ber_crossing_interpolates_in_log_domain() -> None:
    assert ber_crossing([0.0, 10.0], [1e-1, 1e-5], 1e-3) == pytest.approx(5.0)
    assert ber_crossing([0.0, 5.0, 10.0], [0.2, 0.1, 1e-3], 1e-3) == pytest.approx(10.0)
    assert ber_crossing([0.0, 10.0], [0.2, 0.1], 1e-3) is None
    assert ber_crossing([0.0, 10.0], [0.1, 0.0], 1e-3) is not None
    with pytest.raises(ConfigError):
        ber_crossing([0.0], [0.1], 1.5)


def test_horizontal_gap_is_positive_for_the_worse_curve() -> None:
    grid = [0.0, 10.0]
    assert horizontal_gap_db(grid, [1e-1, 1e-5], [1e-1, 1e-3]) == pytest.approx(5.0)
    assert horizontal_gap_db(grid, [1e-1, 1e-5], [0.3, 0.2]) is None


def _ber_report(cells: dict[str, list[float]], grid: list[float]) -> SweepReport:
    return SweepReport(
        kind="ber",
        seed=1,
        config={},
        cells=tuple(
            SweepCell("gfdm", estimator, "", ebn0, 10, 1, ber=ber)
            for estimator, series in cells.items()
            for ebn0, ber in zip(grid, series)
        ),
    )


def test_ber_gaps_against_reference() -> None:
    report = _ber_report(
        {"almmse-bem": [1e-1, 1e-5], "ls": [1e-1, 1e-3], "ls-bem": [0.3, 0.2]},
        [0.0, 10.0],
    )
    gaps = ber_gaps(report)
    assert gaps["ls"] == pytest.approx(5.0)
    assert gaps["ls-bem"] is None
    assert "almmse-bem" not in gaps

    with pytest.raises(ConfigError, match="not in the report"):
        ber_gaps(report, reference="lmmse")
    mse_report = SweepReport(kind="mse", seed=1, config={}, cells=report.cells)
    with pytest.raises(ConfigError, match="BER report"):
        ber_gaps(mse_report)
