"""Smoke and contract tests for the command-line surface."""

from pimsim.cli import main


def run_cli(args):
    return main(args)


class TestPulsesCommands:
    def test_dump_schema(self, tmp_path):
        out = tmp_path / "pulses.csv"
        assert run_cli(["pulses", "dump", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "t,psi0,psi1,psi2,psi3"
        assert len(lines) == 1 + 127
        row = lines[1].split(",")
        assert len(row) == 5

    def test_dump_truncated_length(self, tmp_path):
        out = tmp_path / "pulses.csv"
        assert run_cli(["pulses", "dump", "--truncate-to", "61", "--out", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 1 + 61

    def test_spectrum_schema(self, tmp_path):
        out = tmp_path / "spec.csv"
        assert run_cli(["pulses", "spectrum", "--nfft", "2048", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "freq_hz,psi0_db,psi1_db,psi2_db,psi3_db,srrc_db"
        assert len(lines) == 1 + 2048

    def test_dump_renders_figure(self, tmp_path):
        out = tmp_path / "pulses.csv"
        fig = tmp_path / "pulses.png"
        assert run_cli(["pulses", "dump", "--out", str(out), "--plot", str(fig)]) == 0
        assert fig.stat().st_size > 1000

    def test_spectrum_renders_figure(self, tmp_path):
        out = tmp_path / "spec.csv"
        fig = tmp_path / "spec.png"
        args = ["pulses", "spectrum", "--nfft", "2048", "--out", str(out), "--plot", str(fig)]
        assert run_cli(args) == 0
        assert fig.stat().st_size > 1000


class TestModemMap:
    def test_worked_example(self, tmp_path, capsys):
        assert run_cli(["modem", "map", "--bits", "0010", "--scheme", "gpim"]) == 0
        text = capsys.readouterr().out
        assert "# pulse_indices = 0,1" in text
        assert "sample,real,imag" in text
        lines = [l for l in text.splitlines() if not l.startswith(("#", "sample"))]
        assert len(lines) == 61

    def test_bad_bits_rejected(self, capsys):
        assert run_cli(["modem", "map", "--bits", "01x"]) == 2
        assert "error" in capsys.readouterr().err


class TestTheoryCommand:
    def test_schema_and_flag(self, tmp_path):
        out = tmp_path / "theory.csv"
        args = [
            "theory",
            "--scheme", "pim", "--n", "4", "--k", "1", "--mod", "psk", "--M", "4",
            "--snr-start", "-5", "--snr-stop", "10", "--snr-step", "5",
            "--out", str(out),
        ]
        assert run_cli(args) == 0
        lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        assert lines[0] == "snr_db,abep,clamped_flag"
        assert len(lines) == 1 + 4
        first = lines[1].split(",")
        assert float(first[1]) > 1.0 and first[2] == "1"


class TestSimulateCommand:
    ARGS = [
        "simulate",
        "--scheme", "pim", "--n", "4", "--k", "1", "--mod", "psk", "--M", "2",
        "--snr-start", "0", "--snr-stop", "5", "--snr-step", "5",
        "--min-errors", "40", "--max-bits", "40000", "--seed", "21",
    ]

    def test_writes_curve(self, tmp_path):
        out = tmp_path / "curve.csv"
        assert run_cli(self.ARGS + ["--out", str(out)]) == 0
        lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        assert lines[0] == "snr_db,ber,bit_errors,bits,abep"
        assert len(lines) == 3

    def test_byte_identical_reruns(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        assert run_cli(self.ARGS + ["--out", str(a)]) == 0
        assert run_cli(self.ARGS + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_with_theory_populates_column(self, tmp_path):
        out = tmp_path / "curve.csv"
        assert run_cli(self.ARGS + ["--with-theory", "--out", str(out)]) == 0
        lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        assert not lines[1].endswith(",")

    def test_renders_figure(self, tmp_path):
        out = tmp_path / "curve.csv"
        fig = tmp_path / "curve.png"
        assert run_cli(self.ARGS + ["--out", str(out), "--plot", str(fig)]) == 0
        assert fig.stat().st_size > 1000

    def test_config_file_with_cli_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "scheme = pim\nM = 2\nsnr_db_start = 0\nsnr_db_stop = 0\n"
            "min_bit_errors = 20\nmax_bits = 20000\nseed = 5\n"
        )
        out = tmp_path / "c.csv"
        assert run_cli(["simulate", "--config", str(cfg), "--seed", "6", "--out", str(out)]) == 0
        text = out.read_text()
        assert "# seed = 6" in text

    def test_invalid_config_exits_nonzero(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("M = 12\n")
        assert run_cli(["simulate", "--config", str(cfg)]) == 2
        assert "error" in capsys.readouterr().err

    def test_missing_config_file_exits_nonzero(self, capsys):
        assert run_cli(["simulate", "--config", "/nonexistent/x.cfg"]) == 2


class TestBenchCommand:
    def test_sm_curve(self, tmp_path):
        out = tmp_path / "sm.csv"
        args = [
            "bench", "--scheme", "sm", "--nt", "4", "--mod", "psk", "--M", "4",
            "--snr-start", "0", "--snr-stop", "5", "--snr-step", "5",
            "--min-errors", "30", "--max-bits", "30000", "--seed", "3",
            "--out", str(out),
        ]
        assert run_cli(args) == 0
        lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        assert lines[0] == "snr_db,ber,bit_errors,bits,abep"
        assert len(lines) == 3

    def test_classic_defaults_to_qam_for_square_orders(self, tmp_path):
        out = tmp_path / "c.csv"
        args = [
            "bench", "--scheme", "classic", "--M", "16",
            "--snr-start", "0", "--snr-stop", "0", "--snr-step", "5",
            "--min-errors", "20", "--max-bits", "20000", "--out", str(out),
        ]
        assert run_cli(args) == 0
        assert "# modulation = qam" in out.read_text()
