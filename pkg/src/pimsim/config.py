"""Simulation configuration: defaults, flat-file parsing, and validation.

Config files are flat key = value text; blank lines and # comments are
ignored.  Every key has a CLI flag override, and the effective configuration
is echoed into the output CSV so runs are self-describing.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .pulses import DEFAULT_HALF_WIDTH, DEFAULT_NUM_SAMPLES, DEFAULT_TRUNCATE_TO


@dataclass
class SimConfig:
    """Everything a Monte Carlo run needs, with reproducibility baked in."""

    scheme: str = "pim"  # pim | gpim | classic | sm | qsm
    n: int = 4
    k: int = 1
    modulation: str = "psk"
    M: int = 4
    tx_antennas: int = 4
    rx_antennas: int = 1
    num_samples: int = DEFAULT_NUM_SAMPLES
    half_width: float = DEFAULT_HALF_WIDTH
    truncate_to: int = DEFAULT_TRUNCATE_TO
    snr_db_start: float = 0.0
    snr_db_stop: float = 30.0
    snr_db_step: float = 5.0
    min_bit_errors: int = 100
    max_bits: int = 100_000_000
    seed: int = 12345
    workers: int = 1
    detector: str = "correlator"  # correlator | direct
    noiseless: bool = False
    with_theory: bool = False

    def validate(self) -> "SimConfig":
        if self.scheme not in ("pim", "gpim", "classic", "sm", "qsm"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.scheme == "pim" and self.k != 1:
            raise ValueError("pim uses k = 1")
        if self.scheme == "gpim" and self.k != 2:
            raise ValueError("gpim uses k = 2")
        if self.M < 2 or (self.M & (self.M - 1)) != 0:
            raise ValueError(f"modulation order must be a power of 2, got {self.M}")
        if self.snr_db_step <= 0:
            raise ValueError("snr_db_step must be positive")
        if self.snr_db_stop < self.snr_db_start:
            raise ValueError("snr_db_stop must not precede snr_db_start")
        if self.min_bit_errors < 1:
            raise ValueError("min_bit_errors must be positive")
        if self.max_bits < 1:
            raise ValueError("max_bits must be positive")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.detector not in ("correlator", "direct"):
            raise ValueError(f"unknown detector {self.detector!r}")
        if self.num_samples % 2 == 0:
            raise ValueError("num_samples must be odd")
        if self.truncate_to > self.num_samples:
            raise ValueError("truncate_to cannot exceed num_samples")
        return self

    def snr_points(self) -> list[float]:
        count = int(math.floor((self.snr_db_stop - self.snr_db_start) / self.snr_db_step + 1e-9))
        return [self.snr_db_start + i * self.snr_db_step for i in range(count + 1)]

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(SimConfig)}
_BOOL_FIELDS = {"noiseless", "with_theory"}
_INT_FIELDS = {
    "n",
    "k",
    "M",
    "tx_antennas",
    "rx_antennas",
    "num_samples",
    "truncate_to",
    "min_bit_errors",
    "max_bits",
    "seed",
    "workers",
}
_FLOAT_FIELDS = {"half_width", "snr_db_start", "snr_db_stop", "snr_db_step"}


def _coerce(key: str, raw: str):
    if key in _BOOL_FIELDS:
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"cannot parse boolean config value {raw!r} for {key}")
    if key in _INT_FIELDS:
        return int(float(raw))
    if key in _FLOAT_FIELDS:
        return float(raw)
    return raw.strip()


def parse_config_file(path: str) -> dict:
    """Read a flat key = value config file into a dict of typed values."""
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value, got {line!r}")
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in _FIELD_TYPES:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = _coerce(key, raw)
    return values


def load_config(path: str | None = None, overrides: dict | None = None) -> SimConfig:
    """Build a validated SimConfig from an optional file plus overrides."""
    values: dict = {}
    if path is not None:
        values.update(parse_config_file(path))
    for key, val in (overrides or {}).items():
        if val is None:
            continue
        if key not in _FIELD_TYPES:
            raise ValueError(f"unknown config key {key!r}")
        values[key] = val
    return SimConfig(**values).validate()
