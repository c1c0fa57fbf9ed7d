"""Command-line surface: simulate, theory, bench, pulses, modem.

Every subcommand writes delimited output (CSV) and can additionally render
a matplotlib figure next to it with --plot.  Exit code is 0 on success and
2 on configuration errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import montecarlo
from .config import load_config
from .modem import build_lookup_table, make_constellation, modulate
from .pulses import (
    DEFAULT_HALF_WIDTH,
    DEFAULT_NUM_SAMPLES,
    DEFAULT_TRUNCATE_TO,
    SRRC_SAMPLES_PER_SYMBOL,
    hermite_family,
    spectrum,
    srrc_pulse,
)


def _add_common_link_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scheme", choices=["pim", "gpim"], default=None)
    p.add_argument("--n", type=int, default=None, help="pulse family size")
    p.add_argument("--k", type=int, default=None, help="active pulses per use")
    p.add_argument("--mod", dest="modulation", choices=["psk", "qam"], default=None)
    p.add_argument("--M", type=int, default=None, help="modulation order")


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--snr-start", dest="snr_db_start", type=float, default=None)
    p.add_argument("--snr-stop", dest="snr_db_stop", type=float, default=None)
    p.add_argument("--snr-step", dest="snr_db_step", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pimsim",
        description="Pulse-index modulation link simulator over flat Rayleigh fading",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte Carlo BER sweep")
    sim.add_argument("--config", help="flat key = value config file")
    _add_common_link_flags(sim)
    _add_sweep_flags(sim)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--workers", type=int, default=None)
    sim.add_argument("--detector", choices=["correlator", "direct"], default=None)
    sim.add_argument("--min-errors", dest="min_bit_errors", type=int, default=None)
    sim.add_argument("--max-bits", dest="max_bits", type=int, default=None)
    sim.add_argument("--noiseless", action="store_true", default=None)
    sim.add_argument("--with-theory", action="store_true", default=None)
    sim.add_argument("--out", default=None, help="output CSV path (default stdout)")
    sim.add_argument("--plot", default=None, help="also render a BER figure to this file")

    theo = sub.add_parser("theory", help="union-bound ABEP sweep")
    theo.add_argument("--config", help="flat key = value config file")
    _add_common_link_flags(theo)
    _add_sweep_flags(theo)
    theo.add_argument("--out", default=None)
    theo.add_argument("--plot", default=None)

    bench = sub.add_parser("bench", help="SM/QSM/classic reference curves")
    bench.add_argument("--scheme", choices=["sm", "qsm", "classic"], required=True)
    bench.add_argument("--nt", dest="tx_antennas", type=int, default=None)
    bench.add_argument("--nr", dest="rx_antennas", type=int, default=None)
    bench.add_argument("--mod", dest="modulation", choices=["psk", "qam"], default=None)
    bench.add_argument("--M", type=int, default=None)
    _add_sweep_flags(bench)
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--workers", type=int, default=None)
    bench.add_argument("--min-errors", dest="min_bit_errors", type=int, default=None)
    bench.add_argument("--max-bits", dest="max_bits", type=int, default=None)
    bench.add_argument("--out", default=None)
    bench.add_argument("--plot", default=None)

    pul = sub.add_parser("pulses", help="pulse family inspection")
    pul_sub = pul.add_subparsers(dest="pulses_command", required=True)
    for name in ("dump", "spectrum"):
        pp = pul_sub.add_parser(name)
        pp.add_argument("--n", type=int, default=4)
        pp.add_argument("--num-samples", type=int, default=DEFAULT_NUM_SAMPLES)
        pp.add_argument("--half-width", type=float, default=DEFAULT_HALF_WIDTH)
        pp.add_argument(
            "--truncate-to",
            type=int,
            default=0,
            help="center-keep this many samples (0 keeps the full grid)",
        )
        pp.add_argument("--out", default=None)
        pp.add_argument("--plot", default=None)
        if name == "spectrum":
            pp.add_argument("--nfft", type=int, default=8192)
            pp.add_argument("--beta", type=float, default=1.0, help="SRRC roll-off")

    mdm = sub.add_parser("modem", help="bit-mapping inspection")
    mdm_sub = mdm.add_subparsers(dest="modem_command", required=True)
    mp = mdm_sub.add_parser("map", help="map a bit block to its transmit frame")
    mp.add_argument("--bits", required=True, help="bit string, e.g. 0010")
    _add_common_link_flags(mp)
    mp.add_argument("--out", default=None)
    return parser


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _sim_overrides(args: argparse.Namespace) -> dict:
    keys = (
        "scheme",
        "n",
        "k",
        "modulation",
        "M",
        "tx_antennas",
        "rx_antennas",
        "snr_db_start",
        "snr_db_stop",
        "snr_db_step",
        "seed",
        "workers",
        "detector",
        "min_bit_errors",
        "max_bits",
        "noiseless",
        "with_theory",
    )
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _default_k(overrides: dict) -> dict:
    if overrides.get("scheme") == "gpim" and "k" not in overrides:
        overrides["k"] = 2
    if overrides.get("scheme") == "pim" and "k" not in overrides:
        overrides["k"] = 1
    return overrides


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config, _default_k(_sim_overrides(args)))
    curve = montecarlo.run_monte_carlo(cfg)
    if args.out is None:
        montecarlo.write_csv(curve, sys.stdout)
    else:
        montecarlo.write_csv(curve, args.out)
    if args.plot:
        from .plotting import save_ber_figure

        save_ber_figure(curve, args.plot, title=f"{cfg.scheme} n={cfg.n} k={cfg.k} M={cfg.M}")
    return 0


def _cmd_theory(args) -> int:
    overrides = _default_k(_sim_overrides(args))
    cfg = load_config(args.config, overrides)
    curve = montecarlo.run_theory_sweep(cfg)
    if args.out is None:
        montecarlo.write_theory_csv(curve, sys.stdout)
    else:
        montecarlo.write_theory_csv(curve, args.out)
    if args.plot:
        from .plotting import save_ber_figure

        save_ber_figure(curve, args.plot, title=f"{cfg.scheme} union bound")
    return 0


def _cmd_bench(args) -> int:
    overrides = _sim_overrides(args)
    if "modulation" not in overrides:
        m = overrides.get("M", 4)
        root = int(m**0.5)
        overrides["modulation"] = "qam" if root * root == m and m >= 4 else "psk"
    cfg = load_config(None, overrides)
    curve = montecarlo.run_monte_carlo(cfg)
    if args.out is None:
        montecarlo.write_csv(curve, sys.stdout)
    else:
        montecarlo.write_csv(curve, args.out)
    if args.plot:
        from .plotting import save_ber_figure

        save_ber_figure(curve, args.plot, title=f"{cfg.scheme} benchmark")
    return 0


def _family_from_args(args):
    return hermite_family(
        n=args.n,
        num_samples=args.num_samples,
        half_width=args.half_width,
        truncate_to=args.truncate_to or None,
    )


def _cmd_pulses_dump(args) -> int:
    family = _family_from_args(args)
    t = family.pulses[0].time_axis
    header = "t," + ",".join(f"psi{v}" for v in range(family.n))
    rows = [header]
    for i in range(family.length):
        vals = ",".join(f"{family.matrix[v, i]:.12e}" for v in range(family.n))
        rows.append(f"{t[i]:.9f},{vals}")
    _write_text("\n".join(rows) + "\n", args.out)
    if args.plot:
        from .plotting import save_pulse_figure

        save_pulse_figure(family.pulses, args.plot)
    return 0


def _cmd_pulses_spectrum(args) -> int:
    family = _family_from_args(args)
    nfft = args.nfft
    specs = [spectrum(p, nfft) for p in family.pulses]
    srrc = srrc_pulse(
        args.beta,
        args.num_samples,
        SRRC_SAMPLES_PER_SYMBOL,
        sample_interval=family.sample_interval,
    )
    specs.append(spectrum(srrc, nfft))
    freqs = specs[0].frequencies
    header = (
        "freq_hz,"
        + ",".join(f"psi{v}_db" for v in range(family.n))
        + ",srrc_db"
    )
    rows = [header]
    for i in range(len(freqs)):
        vals = ",".join(f"{s.magnitude_db[i]:.6f}" for s in specs)
        rows.append(f"{freqs[i]:.9f},{vals}")
    _write_text("\n".join(rows) + "\n", args.out)
    if args.plot:
        from .plotting import save_spectrum_figure

        labeled = [(f"psi{v}", specs[v]) for v in range(family.n)]
        labeled.append((f"SRRC beta={args.beta}", specs[-1]))
        save_spectrum_figure(labeled, args.plot)
    return 0


def _cmd_modem_map(args) -> int:
    scheme = args.scheme or "pim"
    n = args.n if args.n is not None else 4
    k = args.k if args.k is not None else (2 if scheme == "gpim" else 1)
    modulation = args.modulation or "psk"
    M = args.M if args.M is not None else 2
    table = build_lookup_table(n, k)
    constellation = make_constellation(modulation, M)
    pulses = hermite_family(n=n)
    bits = np.array([int(b) for b in args.bits.strip()], dtype=np.int8)
    if not np.all((bits == 0) | (bits == 1)):
        raise ValueError(f"--bits must be a 0/1 string, got {args.bits!r}")
    frame = modulate(bits, table, constellation, pulses)
    lines = [
        f"# scheme = {scheme}, n = {n}, k = {k}, mod = {modulation}, M = {M}",
        f"# bits = {''.join(str(int(b)) for b in frame.bits)}",
        f"# pulse_indices = {','.join(str(i) for i in frame.pulse_indices)}",
        "# symbols = " + ";".join(f"{s.real:+.6f}{s.imag:+.6f}j" for s in frame.symbols),
        "sample,real,imag",
    ]
    for i, v in enumerate(frame.waveform):
        lines.append(f"{i},{v.real:.12e},{v.imag:.12e}")
    _write_text("\n".join(lines) + "\n", args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "theory":
            return _cmd_theory(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "pulses":
            if args.pulses_command == "dump":
                return _cmd_pulses_dump(args)
            return _cmd_pulses_spectrum(args)
        if args.command == "modem":
            return _cmd_modem_map(args)
        parser.error(f"unknown command {args.command!r}")
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
