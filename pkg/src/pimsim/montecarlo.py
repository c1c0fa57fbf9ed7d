"""Seeded Monte Carlo BER engine, SNR sweeps, and CSV output.

Every SNR point repeats draw-modulate-transmit-detect rounds until the
stopping rule fires (min_bit_errors reached, or max_bits exhausted, in
which case the point is flagged low-confidence).  Randomness is derived
from (master seed, worker index, snr index, round index), so a run is
reproducible bit for bit given the configuration, seed, and worker count,
under any parallel schedule.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analysis
from .benchmarks import BenchmarkConfig, BenchmarkLink
from .config import SimConfig
from .detection import MlDetector, _first_within_window
from .modem import build_lookup_table, make_constellation, spectral_efficiency
from .pulses import hermite_family

# Frames handled per worker per round; rounds continue until the merged
# counters satisfy the stopping rule.
FRAMES_PER_ROUND = 4096


@dataclass(frozen=True)
class BerPoint:
    """BER estimate at one SNR point."""

    snr_db: float
    bit_errors: int
    bits_simulated: int
    low_confidence: bool = False

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits_simulated


@dataclass
class BerCurve:
    """A swept BER curve plus optional co-generated theory values."""

    points: list[BerPoint] = field(default_factory=list)
    theory: list[tuple[float, float]] | None = None
    metadata: dict = field(default_factory=dict)


class PulseLinkRunner:
    """Monte Carlo runner for the PIM/GPIM link."""

    def __init__(self, cfg: SimConfig):
        pulses = hermite_family(
            n=cfg.n,
            num_samples=cfg.num_samples,
            half_width=cfg.half_width,
            truncate_to=cfg.truncate_to or None,
        )
        table = build_lookup_table(cfg.n, cfg.k)
        constellation = make_constellation(cfg.modulation, cfg.M)
        self.detector = MlDetector(pulses, table, constellation)
        self.bits_per_use = self.detector.bits_per_use
        self.direct = cfg.detector == "direct"
        self.noiseless = cfg.noiseless

    def run_block(self, rng: np.random.Generator, n_uses: int, snr_db: float) -> tuple[int, int]:
        det = self.detector
        msg = rng.integers(0, det.num_candidates, size=n_uses)
        x = det.modulate_indices(msg)
        h = (rng.standard_normal(n_uses) + 1j * rng.standard_normal(n_uses)) / math.sqrt(2.0)
        if self.noiseless or math.isinf(snr_db):
            r = x * h[:, None]
        else:
            n0 = 10.0 ** (-snr_db / 10.0)
            r = x * h[:, None] + math.sqrt(n0 / 4.0) * (
                rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)
            )
        if self.direct:
            dec = np.array(
                [
                    _first_within_window(
                        det._metrics_direct(r[i], h[i]),
                        abs(h[i]) ** 2 * det._max_energy,
                    )
                    for i in range(n_uses)
                ]
            )
        else:
            dec = det.detect_batch(r, h)
        errors = int(np.sum(det.bits_of(msg) != det.bits_of(dec)))
        return errors, n_uses * self.bits_per_use


class BenchmarkRunner:
    """Monte Carlo runner for the SM/QSM/classic reference links."""

    def __init__(self, cfg: SimConfig):
        self.link = BenchmarkLink(
            BenchmarkConfig(
                scheme=cfg.scheme,
                modulation=cfg.modulation,
                M=cfg.M,
                tx_antennas=cfg.tx_antennas,
                rx_antennas=cfg.rx_antennas,
            )
        )
        self.bits_per_use = self.link.bits_per_use
        self.noiseless = cfg.noiseless

    def run_block(self, rng: np.random.Generator, n_uses: int, snr_db: float) -> tuple[int, int]:
        return self.link.simulate_block(rng, n_uses, snr_db, noiseless=self.noiseless)


def build_runner(cfg: SimConfig):
    """Construct the scheme-appropriate Monte Carlo runner."""
    if cfg.scheme in ("pim", "gpim"):
        return PulseLinkRunner(cfg)
    return BenchmarkRunner(cfg)


# Per-process cache so pool workers build the link objects once.
_RUNNER_CACHE: dict = {}


def _worker_counts(args) -> tuple[int, int]:
    cfg_items, snr_db, seed, worker, snr_idx, round_idx, frames = args
    key = cfg_items
    runner = _RUNNER_CACHE.get(key)
    if runner is None:
        runner = build_runner(SimConfig(**dict(cfg_items)))
        _RUNNER_CACHE[key] = runner
    rng = np.random.default_rng([seed, worker, snr_idx, round_idx])
    return runner.run_block(rng, frames, snr_db)


def run_monte_carlo(cfg: SimConfig) -> BerCurve:
    """Sweep the configured SNR range and estimate BER at each point.

    Workers are logical random streams: the result depends on (config,
    seed, worker count) only, not on scheduling.  Points that exhaust
    max_bits before reaching min_bit_errors are flagged low-confidence.
    """
    cfg.validate()
    cfg_items = tuple(sorted(cfg.as_dict().items()))
    points = []
    pool = ProcessPoolExecutor(max_workers=cfg.workers) if cfg.workers > 1 else None
    try:
        for snr_idx, snr_db in enumerate(cfg.snr_points()):
            errors = 0
            bits = 0
            round_idx = 0
            while errors < cfg.min_bit_errors and bits < cfg.max_bits:
                tasks = [
                    (cfg_items, snr_db, cfg.seed, w, snr_idx, round_idx, FRAMES_PER_ROUND)
                    for w in range(cfg.workers)
                ]
                if pool is None:
                    results = [_worker_counts(t) for t in tasks]
                else:
                    results = list(pool.map(_worker_counts, tasks))
                for err, nb in results:  # deterministic worker-order reduction
                    errors += err
                    bits += nb
                round_idx += 1
            points.append(
                BerPoint(
                    snr_db=snr_db,
                    bit_errors=errors,
                    bits_simulated=bits,
                    low_confidence=errors < cfg.min_bit_errors,
                )
            )
    finally:
        if pool is not None:
            pool.shutdown()
    curve = BerCurve(points=points, metadata=cfg.as_dict())
    if cfg.with_theory and cfg.scheme in ("pim", "gpim"):
        curve.theory = theory_points(cfg)
    return curve


def theory_points(cfg: SimConfig) -> list[tuple[float, float]]:
    """Union-bound ABEP at every configured SNR point."""
    if cfg.scheme not in ("pim", "gpim"):
        raise ValueError("analytical curves exist for the pim and gpim schemes only")
    table = build_lookup_table(cfg.n, cfg.k)
    constellation = make_constellation(cfg.modulation, cfg.M)
    return [
        (snr, analysis.abep(cfg.scheme, cfg.n, cfg.k, constellation, table, snr))
        for snr in cfg.snr_points()
    ]


def run_theory_sweep(cfg: SimConfig) -> BerCurve:
    """Theory-only curve across the configured sweep."""
    cfg.validate()
    return BerCurve(points=[], theory=theory_points(cfg), metadata=cfg.as_dict())


def bits_per_use(cfg: SimConfig) -> int:
    if cfg.scheme in ("pim", "gpim"):
        return spectral_efficiency(cfg.n, cfg.k, cfg.M)
    return BenchmarkConfig(
        scheme=cfg.scheme,
        modulation=cfg.modulation,
        M=cfg.M,
        tx_antennas=cfg.tx_antennas,
        rx_antennas=cfg.rx_antennas,
    ).bpcu


def write_csv(curve: BerCurve, destination) -> None:
    """Write a BER curve as CSV with a self-describing comment header.

    The column schema is fixed (snr_db,ber,bit_errors,bits,abep with abep
    blank when no theory was requested); reruns of the same configuration
    and seed produce byte-identical files.
    """
    if not curve.points and not curve.theory:
        raise ValueError("refusing to write an empty curve")
    theory = dict(curve.theory) if curve.theory else {}
    lines = []
    for key in sorted(curve.metadata):
        lines.append(f"# {key} = {curve.metadata[key]}")
    for p in curve.points:
        if p.low_confidence:
            lines.append(
                f"# low_confidence: snr_db={p.snr_db:.3f}"
                " (max_bits reached before min_bit_errors)"
            )
    lines.append("snr_db,ber,bit_errors,bits,abep")
    if curve.points:
        for p in curve.points:
            ab = f"{theory[p.snr_db]:.10e}" if p.snr_db in theory else ""
            lines.append(f"{p.snr_db:.3f},{p.ber:.10e},{p.bit_errors},{p.bits_simulated},{ab}")
    else:
        for snr, ab in curve.theory:
            lines.append(f"{snr:.3f},,0,0,{ab:.10e}")
    text = "\n".join(lines) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        try:
            with open(destination, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write BER curve to {destination}: {exc}") from exc


def write_theory_csv(curve: BerCurve, destination) -> None:
    """Write a theory-only sweep as CSV: snr_db, abep, clamped_flag.

    Bound values above 1 are reported as computed with the flag set.
    """
    if not curve.theory:
        raise ValueError("curve carries no theory points")
    lines = [f"# {key} = {curve.metadata[key]}" for key in sorted(curve.metadata)]
    lines.append("snr_db,abep,clamped_flag")
    for snr, ab in curve.theory:
        lines.append(f"{snr:.3f},{ab:.10e},{1 if ab > 1.0 else 0}")
    text = "\n".join(lines) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        try:
            with open(destination, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write theory curve to {destination}: {exc}") from exc
