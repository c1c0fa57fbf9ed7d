"""Figure rendering for the CLI report paths.

Thin wrappers over matplotlib: each function renders one figure to a file
next to the delimited output.  The CSV files remain the primary data
contract; these plots exist so a run can be eyeballed without extra tools.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .montecarlo import BerCurve
from .pulses import PulseSpectrum, SampledPulse


def save_ber_figure(curve: BerCurve, path: str, title: str | None = None) -> None:
    """Semilog BER-vs-SNR figure for one curve (simulated and/or theory)."""
    fig, ax = plt.subplots(figsize=(7, 5))
    if curve.points:
        snr = [p.snr_db for p in curve.points]
        ber = [p.ber for p in curve.points]
        ax.semilogy(snr, ber, "o-", label="simulated")
    if curve.theory:
        snr = [s for s, _ in curve.theory]
        ab = [a for _, a in curve.theory]
        ax.semilogy(snr, ab, "k--", label="union bound")
    ax.set_xlabel(r"$E_s/N_0$ (dB)")
    ax.set_ylabel("BER")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_pulse_figure(pulses: list[SampledPulse], path: str) -> None:
    """Time-domain overlay of the pulse family."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for p in pulses:
        label = f"$\\psi_{{{p.order}}}$" if p.order >= 0 else "SRRC"
        ax.plot(p.time_axis, p.samples, label=label)
    ax.set_xlabel("time")
    ax.set_ylabel("amplitude")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_spectrum_figure(
    spectra: list[tuple[str, PulseSpectrum]], path: str, floor_db: float = -80.0
) -> None:
    """Peak-normalized magnitude spectra on a shared frequency axis."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for label, spec in spectra:
        keep = spec.frequencies >= 0
        ax.plot(spec.frequencies[keep], np.maximum(spec.magnitude_db[keep], floor_db), label=label)
    ax.set_xlabel("frequency")
    ax.set_ylabel("magnitude (dB)")
    ax.set_ylim(floor_db, 3)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
