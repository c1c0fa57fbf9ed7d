"""Flat Rayleigh fading with additive white Gaussian noise.

One complex fading coefficient h ~ CN(0, 1) multiplies the whole frame; the
noise vector has i.i.d. CN(0, N0/2) elements, i.e. variance N0/4 per real
dimension.  SNR is Es/N0 with Es the unit symbol energy of the frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelUse:
    """Record of one transmission through the channel."""

    h: complex
    noise: np.ndarray
    received: np.ndarray
    es_over_n0_db: float


def draw_fading(rng: np.random.Generator) -> complex:
    """One CN(0, 1) fading coefficient: unit variance, Rayleigh magnitude."""
    re, im = rng.standard_normal(2)
    return complex(re, im) / math.sqrt(2.0)


def snr_to_n0(es_over_n0_db: float, es: float = 1.0) -> float:
    """Noise power N0 for a given Es/N0 in dB."""
    if es <= 0:
        raise ValueError("symbol energy must be positive")
    return es * 10.0 ** (-es_over_n0_db / 10.0)


def transmit(
    x: np.ndarray,
    h: complex,
    es_over_n0_db: float,
    rng: np.random.Generator,
    noiseless: bool = False,
) -> ChannelUse:
    """Send the frame x through the fading channel: received = x h + noise.

    The channel coefficient is constant across the frame.  With
    noiseless=True (or an infinite SNR) the noise vector is exactly zero,
    which supports exact round-trip tests.
    """
    x = np.asarray(x)
    if noiseless or math.isinf(es_over_n0_db):
        noise = np.zeros(x.shape, dtype=complex)
    else:
        n0 = snr_to_n0(es_over_n0_db)
        # per-element complex variance N0/2
        scale = math.sqrt(n0 / 4.0)
        noise = scale * (rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape))
    return ChannelUse(h=h, noise=noise, received=x * h + noise, es_over_n0_db=es_over_n0_db)
