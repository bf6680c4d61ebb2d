"""One Monte Carlo trial of the link: transmit, fade, add noise, estimate and detect.

Every trial derives independent channel, data and noise streams from
``SeedSequence([master_seed, trial])``. The noise stream is replayed for every Eb/N0
point, so all points of a trial see the same noise shape at different scales.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..channel.covariance import approx_pilot_covariance, true_pilot_covariance
from ..channel.model import ChannelRealization, add_awgn, apply_channel, draw_channel
from ..core import qpsk_map
from ..detection.equalizer import zf_equalize
from ..detection.ic import ic_receive, ofdm_detect
from ..detection.metrics import count_bit_errors
from ..estimators.basis import BasisKind, BasisMatrix, ce_basis, lp_basis
from ..estimators.bem import (
    AlmmseBemEstimator,
    LmmseBemEstimator,
    LsBemEstimator,
    coefficient_covariance,
)
from ..estimators.classical import LmmseEstimator, LsEstimator
from ..estimators.interpolate import interpolate_full_grid
from ..estimators.observation import (
    ChannelEstimator,
    EstimateResult,
    EstimatorKind,
    PilotObservation,
)
from ..waveforms.framing import extract_pilots, remove_cp
from ..waveforms.gfdm import GfdmModem
from ..waveforms.ofdm import OfdmModem
from ..waveforms.params import System, WaveformParams
from .settings import SimConfig

MSE_FLOOR = 1e-30


@dataclass(frozen=True, slots=True)
class TrialStreams:
    channel: np.random.SeedSequence
    data: np.random.SeedSequence
    noise: np.random.SeedSequence


@dataclass(frozen=True, slots=True)
class Transmission:
    """A faded frame before noise, with what the receiver is scored against."""

    realization: ChannelRealization
    symbols: npt.NDArray[np.complex128]
    data_mask: npt.NDArray[np.bool_]
    pilots: npt.NDArray[np.complex128]
    faded: npt.NDArray[np.complex128]


@dataclass(frozen=True, slots=True)
class TrialOutcome:
    values: npt.NDArray[np.float64]
    warnings: frozenset[str] = frozenset()


def trial_streams(master_seed: int, trial: int) -> TrialStreams:
    channel, data, noise = np.random.SeedSequence([master_seed, trial]).spawn(3)
    return TrialStreams(channel=channel, data=data, noise=noise)


def pilot_basis(kind: BasisKind, n_coefficients: int, params: WaveformParams) -> BasisMatrix:
    if kind is BasisKind.CE:
        return ce_basis(params.n_pilots, n_coefficients, params.pilot_spacing, params.subcarriers)
    return lp_basis(params.n_pilots, n_coefficients)


def build_estimators(config: SimConfig) -> dict[EstimatorKind, ChannelEstimator]:
    """Construct every configured estimator once; perfect CSI needs no estimator object."""
    params = config.waveform
    kinds = [kind for kind in config.estimators if kind is not EstimatorKind.PERFECT]
    basis = (
        pilot_basis(config.basis, config.basis_functions, params)
        if any(kind.is_bem for kind in kinds)
        else None
    )
    true_covariance = (
        true_pilot_covariance(config.channel, params)
        if {EstimatorKind.LMMSE, EstimatorKind.LMMSE_BEM} & set(kinds)
        else None
    )

    estimators: dict[EstimatorKind, ChannelEstimator] = {}
    for kind in kinds:
        if kind is EstimatorKind.LS:
            estimators[kind] = LsEstimator()
        elif kind is EstimatorKind.LMMSE:
            estimators[kind] = LmmseEstimator(true_covariance)
        elif kind is EstimatorKind.LS_BEM:
            estimators[kind] = LsBemEstimator(basis)
        elif kind is EstimatorKind.LMMSE_BEM:
            estimators[kind] = LmmseBemEstimator(basis, coefficient_covariance(true_covariance, basis))
        elif kind is EstimatorKind.ALMMSE_BEM:
            estimators[kind] = AlmmseBemEstimator(
                basis,
                approx_pilot_covariance(
                    params.cp_length, params.subcarriers, params.pilot_spacing, params.n_pilots
                ),
            )
    return estimators


class Link:
    """Transmitter, channel and receiver chain of one configuration."""

    def __init__(self, config: SimConfig) -> None:
        self.config = config
        self.params = config.waveform
        self.modem: GfdmModem | OfdmModem = (
            GfdmModem(self.params) if self.params.system is System.GFDM else OfdmModem(self.params)
        )
        self.estimators = build_estimators(config)

    @property
    def is_gfdm(self) -> bool:
        return self.params.system is System.GFDM

    def transmit(self, streams: TrialStreams) -> Transmission:
        params = self.params
        rng = np.random.default_rng(streams.data)
        data = qpsk_map(rng.integers(0, 2, size=2 * self.modem.data_symbols_per_frame))
        pilot_count = params.n_pilots if self.is_gfdm else params.n_pilots * params.subsymbols
        pilots = qpsk_map(rng.integers(0, 2, size=2 * pilot_count))
        frame = self.modem.frame(data, pilots)

        realization = draw_channel(self.config.channel, params.grid_size, streams.channel)
        return Transmission(
            realization=realization,
            symbols=frame.symbols,
            data_mask=frame.data_mask,
            pilots=frame.pilots,
            faded=apply_channel(frame.with_cp, realization, params),
        )

    def receive(
        self,
        tx: Transmission,
        noise_variance: float,
        streams: TrialStreams,
    ) -> npt.NDArray[np.complex128]:
        """Received spectrum: M x K for OFDM, N bins for GFDM."""
        noisy = add_awgn(tx.faded, noise_variance, np.random.default_rng(streams.noise))
        if self.is_gfdm:
            return np.fft.fft(remove_cp(noisy, self.params.cp_length), norm="ortho")
        return self.modem.receive(noisy)

    def observations(
        self,
        spectrum: npt.NDArray[np.complex128],
        tx: Transmission,
        noise_variance: float,
    ) -> list[PilotObservation]:
        if self.is_gfdm:
            return [PilotObservation(self.modem.extract_pilots(spectrum), tx.pilots, noise_variance)]
        received = extract_pilots(spectrum, self.params)
        return [
            PilotObservation(received[row], tx.pilots[row], noise_variance)
            for row in range(self.params.subsymbols)
        ]

    def estimate(
        self,
        kind: EstimatorKind,
        obs: PilotObservation,
        realization: ChannelRealization,
    ) -> EstimateResult:
        if kind is EstimatorKind.PERFECT:
            response = realization.freq_response
            return EstimateResult(
                kind=kind, h_pilot=response[self.params.pilot_bins], h_full=response
            )
        return self.estimators[kind].estimate(obs)

    def mse_trial(
        self,
        trial: int,
        noise_variances: npt.NDArray[np.float64],
        kinds: tuple[EstimatorKind, ...],
    ) -> TrialOutcome:
        """Normalized pilot-grid and full-grid errors, shaped (Eb/N0 points, estimators, 2)."""
        streams = trial_streams(self.config.seed, trial)
        tx = self.transmit(streams)
        response = tx.realization.freq_response
        at_pilots = response[self.params.pilot_bins]

        values = np.empty((len(noise_variances), len(kinds), 2))
        notes: set[str] = set()
        for point, noise_variance in enumerate(noise_variances):
            spectrum = self.receive(tx, float(noise_variance), streams)
            observations = self.observations(spectrum, tx, float(noise_variance))
            for column, kind in enumerate(kinds):
                pilot_error = full_error = 0.0
                for obs in observations:
                    result = self.estimate(kind, obs, tx.realization)
                    notes.update(result.warnings)
                    pilot_error += normalized_error(result.h_pilot, at_pilots)
                    full_error += normalized_error(
                        interpolate_full_grid(result, self.params), response
                    )
                values[point, column] = (
                    pilot_error / len(observations),
                    full_error / len(observations),
                )
        return TrialOutcome(values=values, warnings=frozenset(notes))

    def ber_trial(
        self,
        trial: int,
        noise_variance: float,
        kinds: tuple[EstimatorKind, ...],
    ) -> TrialOutcome:
        """Bit errors and compared bits per estimator, shaped (estimators, 2)."""
        streams = trial_streams(self.config.seed, trial)
        tx = self.transmit(streams)
        spectrum = self.receive(tx, noise_variance, streams)
        observations = self.observations(spectrum, tx, noise_variance)

        values = np.zeros((len(kinds), 2))
        notes: set[str] = set()
        for column, kind in enumerate(kinds):
            rows = []
            for row, obs in enumerate(observations):
                result = self.estimate(kind, obs, tx.realization)
                equalized = zf_equalize(
                    spectrum if self.is_gfdm else spectrum[row],
                    interpolate_full_grid(result, self.params),
                )
                notes.update(result.warnings)
                notes.update(equalized.warnings)
                rows.append(equalized.spectrum)
            if self.is_gfdm:
                decisions = ic_receive(
                    rows[0], self.modem, self.config.ic_iterations, pilots=tx.pilots
                ).d_hat
            else:
                decisions = ofdm_detect(np.vstack(rows))
            values[column] = count_bit_errors(decisions, tx.symbols, tx.data_mask)
        return TrialOutcome(values=values, warnings=frozenset(notes))


def normalized_error(estimate: npt.ArrayLike, truth: npt.ArrayLike) -> float:
    """``||estimate - truth||^2 / ||truth||^2``."""
    reference = np.asarray(truth, dtype=np.complex128)
    energy = float(np.vdot(reference, reference).real)
    error = np.asarray(estimate, dtype=np.complex128) - reference
    return float(np.vdot(error, error).real) / max(energy, MSE_FLOOR)
