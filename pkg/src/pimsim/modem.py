"""Bit mapping: lookup tables, constellations, and PIM/GPIM waveform synthesis.

A transmitted block carries p1 = floor(log2 C(n, k)) index bits that choose
which k of the n orthogonal pulses are active, plus k log2(M) bits carried
on M-ary symbols riding the active pulses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .pulses import PulseSet

# Reference index mapping for the four-pulse family with two active pulses.
# Only four of the six possible pairs carry index bits; this particular
# selection is not the lexicographic one and is pinned verbatim so that
# frames and figures reproduce bit-exactly across versions.
_PAIR_TABLE_N4_K2 = ((0, 1), (0, 2), (1, 2), (1, 3))


@dataclass(frozen=True)
class LookupTable:
    """Index-bit to pulse-selection map.

    selections[r] is the ascending k-tuple of active pulse indices for the
    index-bit integer r (bits read MSB first).
    """

    n: int
    k: int
    selections: tuple[tuple[int, ...], ...]

    @property
    def p1(self) -> int:
        return self.num_rows.bit_length() - 1

    @property
    def num_rows(self) -> int:
        return len(self.selections)

    def rows(self) -> list[tuple[str, tuple[int, ...]]]:
        """All (index bit string, selection) pairs, in table order."""
        return [
            (format(r, f"0{self.p1}b") if self.p1 else "", sel)
            for r, sel in enumerate(self.selections)
        ]

    def row_of_selection(self, selection) -> int:
        """Table row carrying the given pulse selection.

        Raises ValueError for selections absent from the table.
        """
        key = tuple(sorted(int(i) for i in selection))
        try:
            return self.selections.index(key)
        except ValueError:
            raise ValueError(f"selection {key} is not a row of the lookup table") from None


def build_lookup_table(n: int, k: int) -> LookupTable:
    """Build the index-bit lookup table for k active pulses out of n.

    The four-pulse tables use the pinned reference mappings; other shapes
    use the first 2^p1 k-subsets in lexicographic order.  C(n, k) = 1 is
    allowed as the degenerate no-index-bits table (single row, p1 = 0),
    which the single-pulse reference configuration needs.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if n > 8:
        raise ValueError(f"pulse family sizes above 8 are not supported, got n={n}")
    count = math.comb(n, k)
    p1 = count.bit_length() - 1
    if n == 4 and k == 2:
        sels = _PAIR_TABLE_N4_K2
    else:
        sels = tuple(tuple(c) for c in list(combinations(range(n), k))[: 2**p1])
    return LookupTable(n=n, k=k, selections=sels)


def spectral_efficiency(n: int, k: int, M: int) -> int:
    """Bits per channel use: floor(log2 C(n, k)) + k log2(M)."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if M < 2 or (M & (M - 1)) != 0:
        raise ValueError(f"modulation order must be a power of 2, got {M}")
    p1 = math.comb(n, k).bit_length() - 1
    return p1 + k * int(math.log2(M))


def _gray(i: int) -> int:
    return i ^ (i >> 1)


@dataclass(frozen=True)
class Constellation:
    """M-ary symbol set with unit average energy, indexed by bit label.

    points[b] is the symbol whose label is the integer b (bits MSB first).
    """

    kind: str
    M: int
    points: np.ndarray

    @property
    def bits_per_symbol(self) -> int:
        return int(math.log2(self.M))

    @property
    def labels(self) -> list[str]:
        return [format(b, f"0{self.bits_per_symbol}b") for b in range(self.M)]

    def label_of(self, symbol: complex) -> int:
        """Label of the nearest constellation point."""
        return int(np.argmin(np.abs(self.points - symbol)))


def make_constellation(kind: str, M: int) -> Constellation:
    """Gray-labeled PSK or square QAM with unit average symbol energy.

    BPSK follows the sign convention bit 1 -> +1, bit 0 -> -1, and the Gray
    labels of the larger PSK sets are chosen consistently with it.
    """
    kind = kind.lower()
    if M < 2 or (M & (M - 1)) != 0:
        raise ValueError(f"modulation order must be a power of 2, got {M}")
    if kind == "psk":
        points = np.zeros(M, dtype=complex)
        for i in range(M):
            label = _gray(i) ^ (M - 1)
            points[label] = np.exp(2j * math.pi * i / M)
        # snap the cardinal points so BPSK is exactly +/-1
        points.real[np.abs(points.real) < 1e-12] = 0.0
        points.imag[np.abs(points.imag) < 1e-12] = 0.0
        return Constellation(kind="psk", M=M, points=points)
    if kind == "qam":
        q = math.isqrt(M)
        if q * q != M or M < 4:
            raise ValueError(f"QAM requires a square order (4, 16, 64, ...), got {M}")
        axis_bits = int(math.log2(q))
        levels = 2.0 * np.arange(q) - (q - 1)
        scale = math.sqrt(2.0 * (M - 1) / 3.0)
        points = np.zeros(M, dtype=complex)
        for gi in range(q):
            for gq in range(q):
                label = (_gray(gi) << axis_bits) | _gray(gq)
                points[label] = (levels[gi] + 1j * levels[gq]) / scale
        return Constellation(kind="qam", M=M, points=points)
    raise ValueError(f"unsupported constellation kind {kind!r}")


@dataclass(frozen=True)
class TxFrame:
    """One modulated channel use."""

    bits: np.ndarray
    pulse_indices: tuple[int, ...]
    symbols: np.ndarray
    waveform: np.ndarray


def bits_to_int(bits) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return value


def int_to_bits(value: int, width: int) -> np.ndarray:
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.int8)


def pim_modulate(bits, table: LookupTable, c: Constellation, pulses: PulseSet) -> TxFrame:
    """Synthesize the single-pulse waveform s_i psi_j for one bit block."""
    if table.k != 1:
        raise ValueError("PIM modulation needs a k = 1 lookup table")
    bits = np.asarray(bits, dtype=np.int8)
    expected = table.p1 + c.bits_per_symbol
    if bits.shape != (expected,):
        raise ValueError(f"expected {expected} bits for this configuration, got {bits.shape}")
    row = bits_to_int(bits[: table.p1])
    j = table.selections[row][0]
    symbol = c.points[bits_to_int(bits[table.p1 :])]
    waveform = symbol * pulses.basis[j]
    return TxFrame(
        bits=bits,
        pulse_indices=(j,),
        symbols=np.array([symbol]),
        waveform=waveform,
    )


def gpim_modulate(bits, table: LookupTable, c: Constellation, pulses: PulseSet) -> TxFrame:
    """Synthesize the two-pulse waveform (s_i psi_j + s_q psi_l) / sqrt(2).

    The first symbol block rides the lower-numbered pulse of the selected
    pair.  The 1/sqrt(k) factor keeps the frame at unit symbol energy.
    """
    if table.k != 2:
        raise ValueError("GPIM modulation needs a k = 2 lookup table")
    bits = np.asarray(bits, dtype=np.int8)
    m = c.bits_per_symbol
    expected = table.p1 + 2 * m
    if bits.shape != (expected,):
        raise ValueError(f"expected {expected} bits for this configuration, got {bits.shape}")
    row = bits_to_int(bits[: table.p1])
    j, ell = table.selections[row]
    s_i = c.points[bits_to_int(bits[table.p1 : table.p1 + m])]
    s_q = c.points[bits_to_int(bits[table.p1 + m :])]
    waveform = (s_i * pulses.basis[j] + s_q * pulses.basis[ell]) / math.sqrt(2.0)
    return TxFrame(
        bits=bits,
        pulse_indices=(j, ell),
        symbols=np.array([s_i, s_q]),
        waveform=waveform,
    )


def modulate(bits, table: LookupTable, c: Constellation, pulses: PulseSet) -> TxFrame:
    """Dispatch to the PIM or GPIM synthesizer based on the table's k."""
    if table.k == 1:
        return pim_modulate(bits, table, c, pulses)
    if table.k == 2:
        return gpim_modulate(bits, table, c, pulses)
    raise ValueError(f"unsupported number of active pulses k={table.k}")


def demap(pulse_indices, symbols, table: LookupTable, c: Constellation) -> np.ndarray:
    """Invert the modulation mapping back to the transmitted bit block."""
    row = table.row_of_selection(pulse_indices)
    order = np.argsort(np.asarray(pulse_indices))
    parts = [int_to_bits(row, table.p1)] if table.p1 else [np.zeros(0, dtype=np.int8)]
    for idx in order:
        parts.append(int_to_bits(c.label_of(symbols[idx]), c.bits_per_symbol))
    return np.concatenate(parts)
