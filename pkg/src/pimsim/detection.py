"""Joint maximum-likelihood detection of pulse indices and symbols.

The detector minimizes ||r - h x_c||^2 over every candidate frame x_c.  Two
equivalent paths are provided: a direct residual evaluation, and a fast path
that projects the received vector onto the pulse basis once and rebuilds
every candidate metric from those n numbers plus the exact basis Gram
matrix.  For very large GPIM candidate sets the fast path additionally
prunes with a provable bound on the basis cross-correlation term, so it
stays an exact arg-min.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .modem import Constellation, LookupTable, int_to_bits
from .pulses import PulseSet

# Candidates whose metric is within TIE_REL of the minimum, relative to the
# problem's own scale (|h|^2 max candidate energy plus the minimum itself),
# are treated as tied and resolved to the earliest candidate in canonical
# (pulse row, then symbol label) order.  Under continuous noise exact ties
# have probability zero; the window makes degenerate inputs (r = 0,
# noiseless repeats) deterministic and path-independent, and anchoring it to
# the problem scale keeps decisions invariant under common scaling of r, h.
TIE_REL = 1e-9

# Above this candidate count the batch correlator path switches to the
# pruned per-selection search instead of materializing the full metric
# matrix.
_BATCH_FULL_LIMIT = 4096


@dataclass(frozen=True)
class DetectionResult:
    """Outcome of one ML detection."""

    pulse_indices: tuple[int, ...]
    symbols: np.ndarray
    metric: float
    decoded_bits: np.ndarray


def correlator_stats(r: np.ndarray, pulses: PulseSet) -> np.ndarray:
    """Per-pulse projections <r, psi_m> * T_s of a received vector.

    For an orthonormal family these n numbers are sufficient statistics: any
    candidate metric can be rebuilt from them plus ||r||^2.
    """
    r = np.asarray(r)
    return (pulses.matrix @ r) * pulses.sample_interval


def _first_within_window(metrics: np.ndarray, anchor: float = 0.0) -> int:
    m = float(np.min(metrics))
    return int(np.argmax(metrics <= m + TIE_REL * (abs(m) + anchor)))


class MlDetector:
    """Exhaustive ML detector for one (pulses, table, constellation) link.

    Candidates are enumerated in canonical order: table row ascending, then
    symbol labels ascending (for two active pulses, the symbol riding the
    lower-numbered pulse varies slowest).  Ties resolve to the earliest
    candidate.
    """

    def __init__(self, pulses: PulseSet, table: LookupTable, constellation: Constellation):
        if table.n > pulses.n:
            raise ValueError("lookup table refers to more pulses than the family provides")
        self.pulses = pulses
        self.table = table
        self.constellation = constellation
        self.k = table.k
        M = constellation.M
        m_bits = constellation.bits_per_symbol
        rows = table.num_rows
        self.num_candidates = rows * M**table.k
        self.bits_per_use = table.p1 + table.k * m_bits

        # coeffs[c] holds the basis coefficients of candidate c; bits[c] its label
        npulse = pulses.n
        scale = 1.0 / math.sqrt(table.k)
        coeffs = np.zeros((self.num_candidates, npulse), dtype=complex)
        bits = np.zeros((self.num_candidates, self.bits_per_use), dtype=np.int8)
        sel_of = np.zeros(self.num_candidates, dtype=np.int64)
        sym_labels = np.zeros((self.num_candidates, table.k), dtype=np.int64)
        pts = constellation.points
        c = 0
        for row, sel in enumerate(table.selections):
            row_bits = int_to_bits(row, table.p1) if table.p1 else np.zeros(0, dtype=np.int8)
            if table.k == 1:
                for lab in range(M):
                    coeffs[c, sel[0]] = pts[lab] * scale
                    bits[c] = np.concatenate([row_bits, int_to_bits(lab, m_bits)])
                    sel_of[c] = row
                    sym_labels[c, 0] = lab
                    c += 1
            elif table.k == 2:
                for lab_i in range(M):
                    for lab_q in range(M):
                        coeffs[c, sel[0]] = pts[lab_i] * scale
                        coeffs[c, sel[1]] = pts[lab_q] * scale
                        bits[c] = np.concatenate(
                            [row_bits, int_to_bits(lab_i, m_bits), int_to_bits(lab_q, m_bits)]
                        )
                        sel_of[c] = row
                        sym_labels[c, :] = (lab_i, lab_q)
                        c += 1
            else:
                raise ValueError(f"unsupported number of active pulses k={table.k}")
        self.coeffs = coeffs
        self.candidate_bits = bits
        self._sel_of = sel_of
        self._sym_labels = sym_labels
        # exact candidate energies through the basis Gram matrix
        G = pulses.gram
        self.energies = np.real(np.einsum("ci,ij,cj->c", coeffs.conj(), G, coeffs))
        self._max_energy = float(np.max(self.energies))
        self._waveforms = None

    # -- candidate bookkeeping -------------------------------------------------

    def candidate_waveforms(self) -> np.ndarray:
        """Materialized candidate frames (built lazily; only the direct path needs them)."""
        if self._waveforms is None:
            self._waveforms = self.coeffs @ self.pulses.basis
        return self._waveforms

    def _result_for(self, c: int, r: np.ndarray, h: complex) -> DetectionResult:
        sel = self.table.selections[self._sel_of[c]]
        symbols = self.constellation.points[self._sym_labels[c]]
        x = self.coeffs[c] @ self.pulses.basis
        metric = float(np.sum(np.abs(r - h * x) ** 2))
        return DetectionResult(
            pulse_indices=tuple(sel),
            symbols=symbols,
            metric=metric,
            decoded_bits=self.candidate_bits[c].copy(),
        )

    # -- single-frame detection ------------------------------------------------

    def detect(self, r: np.ndarray, h: complex, method: str = "correlator") -> DetectionResult:
        """ML-detect one received frame given the known channel coefficient."""
        r = np.asarray(r, dtype=complex)
        if method == "direct":
            metrics = self._metrics_direct(r, h)
            anchor = abs(h) ** 2 * self._max_energy
            return self._result_for(_first_within_window(metrics, anchor), r, h)
        if method == "correlator":
            idx = self.detect_batch(r[None, :], np.array([h]))[0]
            return self._result_for(int(idx), r, h)
        raise ValueError(f"unknown detection method {method!r}")

    def _metrics_direct(self, r: np.ndarray, h: complex) -> np.ndarray:
        X = self.candidate_waveforms()
        return np.sum(np.abs(r[None, :] - h * X) ** 2, axis=1)

    # -- batch detection -------------------------------------------------------

    def detect_batch(self, R: np.ndarray, h: np.ndarray) -> np.ndarray:
        """Candidate indices minimizing the residual for each frame in R.

        R has one received frame per row; h is the per-frame channel
        coefficient.  Equivalent to calling detect() per row, without the
        constant ||r||^2 term that does not affect the arg-min.
        """
        R = np.asarray(R, dtype=complex)
        h = np.asarray(h, dtype=complex)
        proj = R @ self.pulses.basis.T  # (B, n) projections
        z = np.conj(h)[:, None] * proj
        habs2 = np.abs(h) ** 2
        if self.num_candidates <= _BATCH_FULL_LIMIT or self.k != 2:
            u = np.concatenate([z.real, z.imag], axis=1)
            v = np.concatenate([self.coeffs.real, self.coeffs.imag], axis=1)
            metrics = -2.0 * (u @ v.T) + habs2[:, None] * self.energies[None, :]
            m = metrics.min(axis=1)
            window = m + TIE_REL * (np.abs(m) + habs2 * self._max_energy)
            return np.argmax(metrics <= window[:, None], axis=1)
        return self._detect_batch_pruned(z, habs2)

    def _detect_batch_pruned(self, z: np.ndarray, habs2: np.ndarray) -> np.ndarray:
        """Exact arg-min for large two-pulse candidate sets.

        For each selection the metric splits into per-symbol terms plus a
        cross term bounded by |G_jl| |s_i| |s_q| |h|^2.  Minimizing the
        separable part and re-checking every symbol pair within twice that
        bound provably contains the true arg-min.
        """
        if self.k != 2:
            raise ValueError("pruned search applies to two-pulse candidate sets")
        pts = self.constellation.points
        M = len(pts)
        B = z.shape[0]
        G = self.pulses.gram
        smax2 = float(np.max(np.abs(pts) ** 2))
        scale2 = 0.5  # |coeff|^2 carries the 1/k factor, k = 2
        best_metric = np.full(B, np.inf)
        best_cand = np.zeros(B, dtype=np.int64)
        block = M * M
        for row, (j, ell) in enumerate(self.table.selections):
            base = row * block
            # separable per-symbol costs (B, M); coefficient scale 1/sqrt 2
            f1 = -2.0 * np.real(z[:, j : j + 1] * np.conj(pts)[None, :]) / math.sqrt(
                2.0
            ) + habs2[:, None] * (np.abs(pts) ** 2)[None, :] * scale2 * G[j, j].real
            f2 = -2.0 * np.real(z[:, ell : ell + 1] * np.conj(pts)[None, :]) / math.sqrt(
                2.0
            ) + habs2[:, None] * (np.abs(pts) ** 2)[None, :] * scale2 * G[ell, ell].real
            g_cross = float(np.real(G[j, ell]))
            c_bound = habs2 * abs(g_cross) * smax2  # |cross term| upper bound
            m1 = f1.min(axis=1)
            m2 = f2.min(axis=1)
            tie_scale = TIE_REL * (np.abs(m1 + m2) + habs2 * self._max_energy)
            slack = 2.0 * c_bound + tie_scale
            keep1 = f1 <= (m1 + slack)[:, None]
            keep2 = f2 <= (m2 + slack)[:, None]
            k1 = int(keep1.sum(axis=1).max())
            k2 = int(keep2.sum(axis=1).max())
            # top-k shortlists in ascending label order (argsort of masked costs)
            idx1 = np.argsort(np.where(keep1, 0, 1) * M + np.arange(M)[None, :], axis=1)[:, :k1]
            idx2 = np.argsort(np.where(keep2, 0, 1) * M + np.arange(M)[None, :], axis=1)[:, :k2]
            s1 = pts[idx1]  # (B, k1)
            s2 = pts[idx2]  # (B, k2)
            cross = habs2[:, None, None] * np.real(
                s1[:, :, None] * np.conj(s2)[:, None, :]
            ) * g_cross
            F = (
                np.take_along_axis(f1, idx1, axis=1)[:, :, None]
                + np.take_along_axis(f2, idx2, axis=1)[:, None, :]
                + cross
            )
            # invalidate shortlist padding beyond each frame's true keep count
            valid = np.take_along_axis(keep1, idx1, axis=1)[:, :, None] & np.take_along_axis(
                keep2, idx2, axis=1
            )[:, None, :]
            F = np.where(valid, F, np.inf)
            Ff = F.reshape(B, -1)
            mrow = Ff.min(axis=1)
            row_tie = TIE_REL * (np.abs(mrow) + habs2 * self._max_energy)
            win = mrow + row_tie
            # earliest (label_i, label_q) pair within the window, canonical order
            order = (idx1[:, :, None] * M + idx2[:, None, :]).reshape(B, -1).astype(float)
            order[Ff > win[:, None]] = np.inf
            flat_best = order.min(axis=1)
            # rows are scanned in canonical order, so a tie keeps the earlier row
            better = mrow < best_metric - row_tie
            best_cand = np.where(better, base + flat_best.astype(np.int64), best_cand)
            best_metric = np.where(better, mrow, best_metric)
        return best_cand

    # -- batch helpers for the Monte Carlo engine -------------------------------

    def modulate_indices(self, msg: np.ndarray) -> np.ndarray:
        """Frames for the candidate indices msg (message index == candidate index)."""
        return self.coeffs[msg] @ self.pulses.basis

    def bits_of(self, indices: np.ndarray) -> np.ndarray:
        return self.candidate_bits[indices]


def ml_detect_pim(
    r: np.ndarray,
    h: complex,
    table: LookupTable,
    c: Constellation,
    pulses: PulseSet,
    method: str = "correlator",
) -> DetectionResult:
    """One-shot exhaustive ML detection for a single-pulse link."""
    if table.k != 1:
        raise ValueError("ml_detect_pim needs a k = 1 lookup table")
    return MlDetector(pulses, table, c).detect(r, h, method=method)


def ml_detect_gpim(
    r: np.ndarray,
    h: complex,
    table: LookupTable,
    c: Constellation,
    pulses: PulseSet,
    method: str = "correlator",
) -> DetectionResult:
    """One-shot exhaustive ML detection for a two-pulse link."""
    if table.k != 2:
        raise ValueError("ml_detect_gpim needs a k = 2 lookup table")
    return MlDetector(pulses, table, c).detect(r, h, method=method)
