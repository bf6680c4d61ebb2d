"""Equalization, symbol decisions and bit counting."""

from .equalizer import DEEP_FADE_FLOOR, Equalization, zf_equalize
from .ic import IcState, ic_receive, ofdm_detect
from .metrics import count_bit_errors

__all__ = [
    "DEEP_FADE_FLOOR",
    "Equalization",
    "IcState",
    "count_bit_errors",
    "ic_receive",
    "ofdm_detect",
    "zf_equalize",
]
