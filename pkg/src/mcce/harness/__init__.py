"""Configuration, Monte Carlo sweeps and gap analysis."""

from .gaps import ber_crossing, ber_gaps, horizontal_gap_db
from .noise import ebn0_to_noise_variance, link_overhead, noise_variances
from .settings import SimConfig, parse_ebn0_grid, resolve_seed
from .sweep import SweepCell, SweepReport, run_ber_sweep, run_mse_sweep
from .trials import Link, Transmission, TrialStreams, build_estimators, pilot_basis, trial_streams

__all__ = [
    "Link",
    "SimConfig",
    "SweepCell",
    "SweepReport",
    "Transmission",
    "TrialStreams",
    "ber_crossing",
    "ber_gaps",
    "build_estimators",
    "ebn0_to_noise_variance",
    "horizontal_gap_db",
    "link_overhead",
    "noise_variances",
    "parse_ebn0_grid",
    "pilot_basis",
    "resolve_seed",
    "run_ber_sweep",
    "run_mse_sweep",
    "trial_streams",
]
