"""Reference links for equal-rate comparison: SM, QSM, and classic M-ary.

Spatial modulation activates one of Nt antennas per use and carries
log2(Nt) bits in the antenna index; quadrature SM routes the real and
imaginary symbol parts through independently indexed antennas for
2 log2(Nt) index bits.  All benchmark detectors are exhaustive joint ML
with perfect channel knowledge, unit average transmit energy, and the same
noise convention as the pulse link (CN(0, N0/2) per received element).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import snr_to_n0
from .modem import Constellation, int_to_bits, make_constellation


@dataclass(frozen=True)
class BenchmarkConfig:
    """One benchmark link setup."""

    scheme: str
    modulation: str
    M: int
    tx_antennas: int = 1
    rx_antennas: int = 1

    def __post_init__(self):
        if self.scheme not in ("sm", "qsm", "classic"):
            raise ValueError(f"unknown benchmark scheme {self.scheme!r}")
        if self.scheme in ("sm", "qsm"):
            nt = self.tx_antennas
            if nt < 2 or (nt & (nt - 1)) != 0:
                raise ValueError(f"tx_antennas must be a power of 2 >= 2, got {nt}")
        if self.rx_antennas < 1:
            raise ValueError("rx_antennas must be at least 1")

    @property
    def antenna_bits(self) -> int:
        if self.scheme == "sm":
            return int(math.log2(self.tx_antennas))
        if self.scheme == "qsm":
            return 2 * int(math.log2(self.tx_antennas))
        return 0

    @property
    def bpcu(self) -> int:
        return self.antenna_bits + int(math.log2(self.M))


class BenchmarkLink:
    """Candidate set and vectorized ML detection for one benchmark config."""

    def __init__(self, cfg: BenchmarkConfig):
        self.cfg = cfg
        self.constellation: Constellation = make_constellation(cfg.modulation, cfg.M)
        M = cfg.M
        m_bits = self.constellation.bits_per_symbol
        nt = cfg.tx_antennas
        na = int(math.log2(nt)) if cfg.scheme in ("sm", "qsm") else 0
        self.bits_per_use = cfg.bpcu
        if cfg.scheme == "classic":
            self.cand = np.arange(M)[:, None]
            bits = [int_to_bits(s, m_bits) for s in range(M)]
        elif cfg.scheme == "sm":
            self.cand = np.array([(a, s) for a in range(nt) for s in range(M)])
            bits = [
                np.concatenate([int_to_bits(a, na), int_to_bits(s, m_bits)])
                for a in range(nt)
                for s in range(M)
            ]
        else:
            self.cand = np.array(
                [(ar, ai, s) for ar in range(nt) for ai in range(nt) for s in range(M)]
            )
            bits = [
                np.concatenate([int_to_bits(ar, na), int_to_bits(ai, na), int_to_bits(s, m_bits)])
                for ar in range(nt)
                for ai in range(nt)
                for s in range(M)
            ]
        self.candidate_bits = np.array(bits, dtype=np.int8)
        self._pts = self.constellation.points

    def draw_channels(self, rng: np.random.Generator, n_uses: int) -> np.ndarray:
        """i.i.d. CN(0, 1) coefficients, one per (use, rx, tx) path."""
        nt = self.cfg.tx_antennas if self.cfg.scheme in ("sm", "qsm") else 1
        nr = self.cfg.rx_antennas
        return (
            rng.standard_normal((n_uses, nr, nt)) + 1j * rng.standard_normal((n_uses, nr, nt))
        ) / math.sqrt(2.0)

    def _transmitted(self, H: np.ndarray, msg: np.ndarray) -> np.ndarray:
        """Noise-free receive vectors (uses, nr) for the per-use messages."""
        pts = self._pts
        cand = self.cand[msg]
        uses = np.arange(len(msg))
        if self.cfg.scheme == "classic":
            return H[:, :, 0] * pts[cand[:, 0]][:, None]
        if self.cfg.scheme == "sm":
            return H[uses, :, cand[:, 0]] * pts[cand[:, 1]][:, None]
        hr = H[uses, :, cand[:, 0]]
        hi = H[uses, :, cand[:, 1]]
        s = pts[cand[:, 2]]
        return hr * s.real[:, None] + 1j * hi * s.imag[:, None]

    def _candidate_receives(self, H: np.ndarray) -> np.ndarray:
        """Noise-free receive vectors (uses, nr, n_candidates) for all candidates."""
        pts = self._pts
        cand = self.cand
        if self.cfg.scheme == "classic":
            return H[:, :, 0][:, :, None] * pts[cand[:, 0]][None, None, :]
        if self.cfg.scheme == "sm":
            return H[:, :, cand[:, 0]] * pts[cand[:, 1]][None, None, :]
        re = H[:, :, cand[:, 0]] * pts[cand[:, 2]].real[None, None, :]
        im = H[:, :, cand[:, 1]] * pts[cand[:, 2]].imag[None, None, :]
        return re + 1j * im

    def detect(self, r: np.ndarray, H: np.ndarray) -> np.ndarray:
        """Joint ML candidate index per use; r is (uses, nr), H is (uses, nr, nt)."""
        metrics = np.sum(np.abs(r[:, :, None] - self._candidate_receives(H)) ** 2, axis=1)
        return np.argmin(metrics, axis=1)

    def simulate_block(
        self,
        rng: np.random.Generator,
        n_uses: int,
        snr_db: float,
        noiseless: bool = False,
    ) -> tuple[int, int]:
        """Simulate n_uses channel uses; returns (bit errors, bits sent)."""
        msg = rng.integers(0, len(self.cand), size=n_uses)
        H = self.draw_channels(rng, n_uses)
        x = self._transmitted(H, msg)
        if noiseless or math.isinf(snr_db):
            r = x
        else:
            n0 = snr_to_n0(snr_db)
            r = x + math.sqrt(n0 / 4.0) * (
                rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)
            )
        dec = self.detect(r, H)
        errors = int(np.sum(self.candidate_bits[msg] != self.candidate_bits[dec]))
        return errors, n_uses * self.bits_per_use


def _one_trial(
    link: BenchmarkLink, H: np.ndarray, snr_db: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    msg = np.array([rng.integers(0, len(link.cand))])
    x = link._transmitted(H, msg)
    if math.isinf(snr_db):
        r = x
    else:
        n0 = snr_to_n0(snr_db)
        r = x + math.sqrt(n0 / 4.0) * (
            rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)
        )
    dec = link.detect(r, H)
    return link.candidate_bits[msg[0]].copy(), link.candidate_bits[dec[0]].copy()


def run_classic_trial(
    cfg: BenchmarkConfig, h: complex, snr_db: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """One classic M-ary symbol through r = h s + n; returns (tx_bits, rx_bits)."""
    if cfg.scheme != "classic":
        raise ValueError("run_classic_trial needs a classic-scheme config")
    link = BenchmarkLink(cfg)
    H = np.full((1, cfg.rx_antennas, 1), h, dtype=complex)
    return _one_trial(link, H, snr_db, rng)


def run_sm_trial(
    cfg: BenchmarkConfig, H: np.ndarray, snr_db: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """One SM use: a single active antenna carries one symbol, joint ML."""
    if cfg.scheme != "sm":
        raise ValueError("run_sm_trial needs an sm-scheme config")
    link = BenchmarkLink(cfg)
    H = np.asarray(H, dtype=complex).reshape(1, cfg.rx_antennas, cfg.tx_antennas)
    return _one_trial(link, H, snr_db, rng)


def run_qsm_trial(
    cfg: BenchmarkConfig, H: np.ndarray, snr_db: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """One QSM use: real and imaginary symbol parts on separately indexed antennas."""
    if cfg.scheme != "qsm":
        raise ValueError("run_qsm_trial needs a qsm-scheme config")
    link = BenchmarkLink(cfg)
    H = np.asarray(H, dtype=complex).reshape(1, cfg.rx_antennas, cfg.tx_antennas)
    return _one_trial(link, H, snr_db, rng)
