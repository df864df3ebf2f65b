"""Tests for configuration files, overrides and run manifests."""

import math

import pytest

from ns2d_bdf2 import __version__
from ns2d_bdf2.config import (
    KEYS,
    VOLATILE_MANIFEST_KEYS,
    load_config,
    manifest_diff,
    parse_config,
    parse_manifest,
    tokenize,
)
from ns2d_bdf2.exceptions import ConfigError
from ns2d_bdf2.forcing import ForcingMode
from ns2d_bdf2.timestepper import Bootstrap, Nonlinearity

CONFIG = """\
# taylor-green decay
nu = 0.05
k=2e-3   # step
N = 32

nonlinearity = gear
basis_modes = 1:1, 2:-1
scan_nu = 0.1,0.05
progress = yes
"""


class TestParse(object):
    def test_tokenize_keeps_line_numbers(self):
        assert tokenize(CONFIG)[:3] == [(2, "nu", "0.05"), (3, "k", "2e-3"), (4, "N", "32")]

    def test_values_and_defaults(self):
        rc = parse_config(CONFIG)
        assert rc.nu == 0.05
        assert rc.k == 2e-3
        assert rc.N == 32
        assert rc.nonlinearity == "gear"
        assert rc.basis_modes == [(1, 1), (2, -1)]
        assert rc.scan_nu == [0.1, 0.05]
        assert rc.progress is True
        assert rc.steps == 1000
        assert rc.scan_k == []
        assert list(rc.values) == list(KEYS)

    def test_overrides_win(self):
        rc = parse_config(CONFIG, {"nu": "0.2", "N": "16", "steps": None})
        assert rc.nu == 0.2
        assert rc.N == 16
        assert rc.steps == 1000

    def test_unknown_attribute(self):
        with pytest.raises(AttributeError):
            parse_config().no_such_key

    @pytest.mark.parametrize(
        "text, line, fragment",
        [
            ("nu = 0.1\nN = 63\n", 2, "N must be even"),
            ("N = 6\n", 1, "N must be >= 8"),
            ("# c\nnu = 0\n", 2, "must be > 0"),
            ("nu = fast\n", 1, "expected a number"),
            ("viscosity = 0.1\n", 1, "unknown key"),
            ("nu 0.1\n", 1, "expected key = value"),
            ("nu = 0.1\nk = 1e-3\nnu = 0.2\n", 3, "first set on line 1"),
            ("nonlinearity = spectral\n", 1, "galerkin|collocation|gear"),
            ("basis_modes = 1:1,2\n", 1, "a:b"),
            ("gronwall_lambda = 1.0\n", 1, "(0, 1)"),
            ("scan_k = 1e-3,-1e-3\n", 1, "all entries"),
        ],
    )
    def test_errors_carry_the_line(self, text, line, fragment):
        with pytest.raises(ConfigError) as err:
            parse_config(text)
        assert err.value.line == line
        assert "line {}".format(line) in str(err.value)
        assert fragment in str(err.value)

    def test_override_errors_have_no_line(self):
        with pytest.raises(ConfigError) as err:
            parse_config("", {"N": "31"})
        assert err.value.line is None
        assert err.value.key == "N"

    def test_load_config(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(CONFIG)
        rc = load_config(str(path), {"seed": "3"})
        assert rc.config_path == str(path)
        assert rc.seed == 3
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "missing.cfg"))

    def test_replace_validates(self):
        rc = parse_config(CONFIG)
        assert rc.replace(nu=0.3).nu == 0.3
        assert rc.nu == 0.05
        with pytest.raises(ConfigError):
            rc.replace(N=30 + 1)

    def test_flags(self):
        assert KEYS["N"].flag == "--grid-n"
        assert KEYS["forcing_amplitude"].flag == "--forcing-amplitude"


class TestSolverConfig(object):
    def test_solver_config(self):
        rc = parse_config("forcing = kolmogorov\nforcing_kf = 2\nN = 16\n")
        cfg = rc.solver_config(k=1e-2, steps=7)
        assert cfg.grid.N == 16
        assert cfg.k == 1e-2
        assert cfg.steps == 7
        assert cfg.nonlinearity is Nonlinearity.GALERKIN
        assert cfg.forcing.mode is ForcingMode.STEADY

    def test_forcing_that_does_not_fit(self):
        rc = parse_config("forcing = kolmogorov\nforcing_kf = 8\nN = 16\n")
        with pytest.raises(ConfigError):
            rc.solver_config()

    def test_exact_bootstrap(self):
        rc = parse_config("bootstrap = exact\nic = taylor_green\nN = 16\nnu = 0.5\n")
        cfg = rc.solver_config(k=0.1)
        assert cfg.bootstrap is Bootstrap.EXACT
        omega1 = cfg.exact_solution(0.1)
        assert omega1.coeffs[1, 1] == pytest.approx(-0.25 * math.exp(-0.1))

    def test_exact_bootstrap_without_a_closed_form(self):
        rc = parse_config("bootstrap = exact\nic = random\nN = 16\n")
        with pytest.raises(ConfigError) as err:
            rc.solver_config()
        assert err.value.key == "bootstrap"

    def test_steady_taylor_green_has_a_closed_form(self):
        rc = parse_config("forcing = taylor_green\nic = taylor_green\nN = 16\n")
        solution = rc.exact_solution()
        assert solution(3.0).coeffs[1, 1] == pytest.approx(-0.25)
        assert parse_config("forcing = kolmogorov\nN = 16\n").exact_solution() is None


class TestManifest(object):
    def test_manifest_roundtrip(self):
        rc = parse_config(CONFIG, config_path="run.cfg")
        manifest = parse_manifest(rc.manifest_text(wall_time=1.5))
        assert manifest["nu"] == "0.05"
        assert manifest["basis_modes"] == "1:1,2:-1"
        assert manifest["scan_k"] == ""
        assert manifest["code_version"] == __version__
        assert manifest["config_path"] == "run.cfg"
        assert manifest["wall_time"] == "1.5"
        again = parse_config("".join(
            "{} = {}\n".format(key, value) for key, value in manifest.items() if key in KEYS
        ))
        assert again.values == rc.values

    def test_write_manifest(self, tmp_path):
        rc = parse_config(CONFIG, {"out_dir": str(tmp_path / "run")})
        text = rc.write_manifest()
        assert (tmp_path / "run" / "manifest.txt").read_text() == text

    def test_diff_ignores_volatile_keys(self):
        old = parse_config(CONFIG).manifest_text(wall_time=1.0)
        new = parse_config(CONFIG, {"nu": "0.2"}).manifest_text(wall_time=9.0)
        assert manifest_diff(old, new) == [("change", "nu", ("0.05", "0.2"))]
        assert "wall_time" in VOLATILE_MANIFEST_KEYS
        assert manifest_diff(old, old) == []

    def test_malformed_manifest(self):
        with pytest.raises(ConfigError) as err:
            parse_manifest("nu = 0.1\n???\n")
        assert err.value.line == 2
