"""OFDM and GFDM waveforms with interference-free pilot framing."""

from .framing import add_cp, extract_pilots, remove_cp
from .gfdm import (
    GfdmFrame,
    GfdmModem,
    gfdm_demodulate,
    gfdm_modulate_direct,
    gfdm_modulate_matrix,
)
from .ofdm import OfdmFrame, OfdmModem, ofdm_demodulate, ofdm_modulate
from .params import System, WaveformParams
from .prototype import PrototypeFilter, raised_cosine_spectrum, rrc_impulse, rrc_prototype

__all__ = [
    "GfdmFrame",
    "GfdmModem",
    "OfdmFrame",
    "OfdmModem",
    "PrototypeFilter",
    "System",
    "WaveformParams",
    "add_cp",
    "extract_pilots",
    "gfdm_demodulate",
    "gfdm_modulate_direct",
    "gfdm_modulate_matrix",
    "ofdm_demodulate",
    "ofdm_modulate",
    "raised_cosine_spectrum",
    "remove_cp",
    "rrc_impulse",
    "rrc_prototype",
]
