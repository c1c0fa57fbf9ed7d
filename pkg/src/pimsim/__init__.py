"""Link-level simulator for pulse-index modulation over flat Rayleigh fading.

Index bits select which orthogonal Hermite-Gaussian pulses are active in
each channel use; the remaining bits ride the pulses as M-ary symbols.  The
package pairs a seeded Monte Carlo BER engine with the matching union-bound
error analysis and SM/QSM/classic reference links.
"""

from .analysis import Message, abep, enumerate_messages, pep, sigma2_gpim, sigma2_pim
from .benchmarks import (
    BenchmarkConfig,
    BenchmarkLink,
    run_classic_trial,
    run_qsm_trial,
    run_sm_trial,
)
from .channel import ChannelUse, draw_fading, snr_to_n0, transmit
from .config import SimConfig, load_config, parse_config_file
from .detection import (
    DetectionResult,
    MlDetector,
    correlator_stats,
    ml_detect_gpim,
    ml_detect_pim,
)
from .modem import (
    Constellation,
    LookupTable,
    TxFrame,
    build_lookup_table,
    demap,
    gpim_modulate,
    make_constellation,
    modulate,
    pim_modulate,
    spectral_efficiency,
)
from .montecarlo import (
    BerCurve,
    BerPoint,
    run_monte_carlo,
    run_theory_sweep,
    write_csv,
    write_theory_csv,
)
from .pulses import (
    PulseSet,
    PulseSpectrum,
    SampledPulse,
    gram_matrix,
    hermite_family,
    hermite_poly,
    hg_waveform,
    sample_hg_pulse,
    spectrum,
    srrc_pulse,
    truncate_and_renormalize,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkConfig",
    "BenchmarkLink",
    "BerCurve",
    "BerPoint",
    "ChannelUse",
    "Constellation",
    "DetectionResult",
    "LookupTable",
    "Message",
    "MlDetector",
    "PulseSet",
    "PulseSpectrum",
    "SampledPulse",
    "SimConfig",
    "TxFrame",
    "abep",
    "build_lookup_table",
    "correlator_stats",
    "demap",
    "draw_fading",
    "enumerate_messages",
    "gpim_modulate",
    "gram_matrix",
    "hermite_family",
    "hermite_poly",
    "hg_waveform",
    "load_config",
    "make_constellation",
    "ml_detect_gpim",
    "ml_detect_pim",
    "modulate",
    "parse_config_file",
    "pep",
    "pim_modulate",
    "run_classic_trial",
    "run_monte_carlo",
    "run_qsm_trial",
    "run_sm_trial",
    "run_theory_sweep",
    "sample_hg_pulse",
    "sigma2_gpim",
    "sigma2_pim",
    "snr_to_n0",
    "spectral_efficiency",
    "spectrum",
    "srrc_pulse",
    "transmit",
    "truncate_and_renormalize",
    "write_csv",
    "write_theory_csv",
]
