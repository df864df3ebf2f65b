# -*- coding: utf-8 -*-
# Licensed under the Apache License 2.0 License
# SPDX-License-Identifier: Apache-2.0

#
# The contents of this file are licensed under the Apache License, Version 2.0
# (the "License"); you may not use this file except in compliance with the
# License. You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations under
# the License.

"""
Run configuration: flat ``key = value`` files, command-line overrides and the
run manifest.

Lines are tokenised by the ``config_lines.tpl`` textfsm template. Every key
has a parser and a constraint; failures are reported as ConfigError with the
1-based line number (None for command-line flags).
"""
import datetime
import logging
import math
import os
from collections import OrderedDict

import dictdiffer

from ns2d_bdf2 import __version__
from ns2d_bdf2.exceptions import ConfigError, Ns2dError
from ns2d_bdf2.forcing import (
    ForcingSpec,
    ManufacturedSolution,
    kolmogorov_forcing,
    random_band_forcing,
    taylor_green_forcing,
)
from ns2d_bdf2.initial import random_initial_field, taylor_green_vorticity
from ns2d_bdf2.spectral import Grid, SpectralField
from ns2d_bdf2.timestepper import Bootstrap, SolverConfig
from ns2d_bdf2.utils.parse_output_to_dict import (
    numbered_lines,
    parse_with_textfsm,
    parse_with_textfsm_by_first_value,
)

log = logging.getLogger(__file__)

CONFIG_TEMPLATE = "textfsm_templates/config_lines.tpl"
MANIFEST_NAME = "manifest.txt"
# manifest entries that differ between otherwise identical runs
VOLATILE_MANIFEST_KEYS = {"started_at", "wall_time", "config_path", "out_dir"}


#
# value parsers
#


def _float(text):
    try:
        return float(text)
    except ValueError:
        raise ValueError("expected a number, got {!r}".format(text))


def _int(text):
    try:
        return int(text)
    except ValueError:
        raise ValueError("expected an integer, got {!r}".format(text))


def _bool(text):
    lowered = text.lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError("expected true or false, got {!r}".format(text))


def _str(text):
    return text


def _float_list(text):
    if not text:
        return []
    return [_float(item.strip()) for item in text.split(",")]


def _mode_list(text):
    modes = []
    if not text:
        return modes
    for item in text.split(","):
        parts = item.strip().split(":")
        if len(parts) != 2:
            raise ValueError("expected a:b wavenumber pairs, got {!r}".format(item))
        modes.append((_int(parts[0]), _int(parts[1])))
    return modes


def _choice(*options):
    def parse(text):
        if text not in options:
            raise ValueError("expected one of {}, got {!r}".format("|".join(options), text))
        return text

    return parse


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        if value and isinstance(value[0], tuple):
            return ",".join("{}:{}".format(a, b) for a, b in value)
        return ",".join(_format(item) for item in value)
    return str(value)


#
# constraints, each returns an error message or None
#


def _positive(value):
    return None if value > 0 else "must be > 0"


def _non_negative(value):
    return None if value >= 0 else "must be >= 0"


def _at_least(bound):
    def check(value):
        return None if value >= bound else "must be >= {}".format(bound)

    return check


def _grid_size(value):
    if value % 2:
        return "N must be even"
    if value < 8:
        return "N must be >= 8"
    return None


def _open_unit(value):
    return None if 0 < value < 1 else "must lie in (0, 1)"


def _all_positive(values):
    return None if all(v > 0 for v in values) else "all entries must be > 0"


class ConfigKey(object):
    __slots__ = ("name", "parse", "default", "check")

    def __init__(self, name, parse, default, check=None):
        self.name = name
        self.parse = parse
        self.default = default
        self.check = check

    @property
    def flag(self):
        if self.name == "N":
            return "--grid-n"
        return "--" + self.name.replace("_", "-")


KEYS = OrderedDict(
    (key.name, key)
    for key in (
        ConfigKey("nu", _float, "0.1", _positive),
        ConfigKey("k", _float, "1e-3", _positive),
        ConfigKey("N", _int, "64", _grid_size),
        ConfigKey("steps", _int, "1000", _non_negative),
        ConfigKey("nonlinearity", _choice("galerkin", "collocation", "gear"), "galerkin"),
        ConfigKey("bootstrap", _choice("euler", "exact"), "euler"),
        ConfigKey(
            "forcing",
            _choice("zero", "taylor_green", "kolmogorov", "random_band", "manufactured"),
            "zero",
        ),
        ConfigKey("forcing_amplitude", _float, "1.0"),
        ConfigKey("forcing_kf", _int, "4", _at_least(1)),
        ConfigKey("ic", _choice("taylor_green", "random", "zero", "manufactured"), "taylor_green"),
        ConfigKey("ic_slope", _float, "-1.0"),
        ConfigKey("ic_amplitude", _float, "1.0", _non_negative),
        ConfigKey("seed", _int, "0", _non_negative),
        ConfigKey("cw_estimate", _float, "1.0", _positive),
        ConfigKey("burn_in", _int, "-1", _at_least(-1)),
        ConfigKey("batch_size", _int, "100", _at_least(1)),
        ConfigKey("output_every", _int, "1", _at_least(1)),
        ConfigKey("spectrum_every", _int, "0", _non_negative),
        ConfigKey("checkpoint_every", _int, "0", _non_negative),
        ConfigKey("basis_modes", _mode_list, "1:0,0:1,1:1"),
        ConfigKey("gronwall_lambda", _float, "0.5", _open_unit),
        ConfigKey("progress", _bool, "false"),
        ConfigKey("out_dir", _str, "out"),
        ConfigKey("workers", _int, "1", _at_least(1)),
        ConfigKey("scan_nu", _float_list, "", _all_positive),
        ConfigKey("scan_k", _float_list, "", _all_positive),
        ConfigKey("converge_k", _float_list, "4e-3,2e-3,1e-3,5e-4", _all_positive),
        ConfigKey("t_end", _float, "1.0", _positive),
    )
)


def _resolve(key, text, line):
    spec = KEYS.get(key)
    if spec is None:
        raise ConfigError("unknown key {!r}".format(key), line, key)
    try:
        value = spec.parse(text.strip())
    except ValueError as err:
        raise ConfigError("{}: {}".format(key, err), line, key)
    if spec.check is not None:
        problem = spec.check(value)
        if problem is not None:
            raise ConfigError("{} = {}: {}".format(key, text.strip(), problem), line, key)
    return value


def tokenize(text):
    """[(line, key, raw value)] of the assignments in ``text``."""
    rows = parse_with_textfsm_by_first_value(CONFIG_TEMPLATE, numbered_lines(text))
    out = []
    for lineno, row in rows.items():
        line = int(lineno)
        if row["BAD"]:
            raise ConfigError("cannot parse {!r}, expected key = value".format(row["BAD"].strip()), line)
        out.append((line, row["KEY"], row["VALUE"]))
    return out


class RunConfig(object):
    """Resolved configuration. Keys are available as attributes."""

    def __init__(self, values, config_path=None):
        self.values = values
        self.config_path = config_path

    def __getattr__(self, name):
        values = self.__dict__.get("values", {})
        if name in values:
            return values[name]
        raise AttributeError(name)

    def replace(self, **changes):
        """Copy with some keys changed, validated as command-line flags."""
        values = OrderedDict(self.values)
        for key, value in changes.items():
            values[key] = _resolve(key, _format(value), None)
        return RunConfig(values, self.config_path)

    @property
    def grid(self):
        return Grid(self.N)

    def manufactured_solution(self, grid=None):
        return ManufacturedSolution(grid or self.grid, self.nu)

    def forcing_spec(self, grid=None):
        grid = grid or self.grid
        mode = self.forcing
        try:
            if mode == "zero":
                return ForcingSpec.zero(grid)
            if mode == "taylor_green":
                return taylor_green_forcing(grid, self.nu, self.forcing_amplitude)
            if mode == "kolmogorov":
                return kolmogorov_forcing(grid, self.forcing_amplitude, self.forcing_kf)
            if mode == "random_band":
                return random_band_forcing(grid, self.forcing_amplitude, self.forcing_kf, self.seed)
            return ForcingSpec.manufactured(self.manufactured_solution(grid))
        except Ns2dError as err:
            raise ConfigError("forcing {}: {}".format(mode, err), key="forcing")

    def initial_field(self, grid=None):
        grid = grid or self.grid
        try:
            if self.ic == "taylor_green":
                return taylor_green_vorticity(grid, self.ic_amplitude)
            if self.ic == "random":
                return random_initial_field(self.seed, grid, self.ic_slope, self.ic_amplitude)
            if self.ic == "zero":
                return SpectralField.zeros(grid)
            return self.manufactured_solution(grid).omega0
        except Ns2dError as err:
            raise ConfigError("ic {}: {}".format(self.ic, err), key="ic")

    def exact_solution(self, grid=None):
        """omega(t) for the cases with a closed form, None otherwise."""
        grid = grid or self.grid
        if self.forcing == "manufactured" and self.ic == "manufactured":
            return self.manufactured_solution(grid).omega
        if self.forcing == "zero" and self.ic == "taylor_green":
            omega0 = taylor_green_vorticity(grid, self.ic_amplitude)
            nu = self.nu
            return lambda t: omega0 * float(math.exp(-2.0 * nu * t))
        if self.forcing == "taylor_green" and self.ic == "taylor_green" and \
                self.forcing_amplitude == self.ic_amplitude:
            omega0 = taylor_green_vorticity(grid, self.ic_amplitude)
            return lambda t: omega0
        return None

    def solver_config(self, k=None, steps=None, grid=None, nonlinearity=None, nu=None):
        """SolverConfig of this configuration, optionally with k, steps, grid or nu swapped."""
        cfg = self if nu is None else self.replace(nu=nu)
        grid = grid or cfg.grid
        exact = cfg.exact_solution(grid)
        if cfg.bootstrap == "exact" and exact is None:
            raise ConfigError(
                "bootstrap = exact needs a closed form solution "
                "(ic and forcing both manufactured, or a Taylor-Green vortex)",
                key="bootstrap",
            )
        return SolverConfig(
            nu=cfg.nu,
            k=cfg.k if k is None else k,
            grid=grid,
            nonlinearity=nonlinearity or cfg.nonlinearity,
            bootstrap=Bootstrap(cfg.bootstrap),
            forcing=cfg.forcing_spec(grid),
            steps=cfg.steps if steps is None else steps,
            cw_estimate=cfg.cw_estimate,
            exact_solution=exact,
        )

    def manifest(self, **extra):
        """Every key with its resolved value plus run metadata."""
        out = OrderedDict((key, _format(value)) for key, value in self.values.items())
        out["code_version"] = __version__
        out["config_path"] = self.config_path or ""
        out["started_at"] = datetime.datetime.now().isoformat(timespec="seconds")
        for key, value in extra.items():
            out[key] = _format(value)
        return out

    def manifest_text(self, **extra):
        return "".join("{} = {}\n".format(key, value) for key, value in self.manifest(**extra).items())

    def write_manifest(self, directory=None, **extra):
        directory = directory or self.out_dir
        os.makedirs(directory, exist_ok=True)
        path = os.path.join(directory, MANIFEST_NAME)
        text = self.manifest_text(**extra)
        with open(path, "w") as fh:
            fh.write(text)
        log.info("manifest written to %s", path)
        return text

    def __repr__(self):
        return "RunConfig({})".format(", ".join("{}={}".format(k, _format(v)) for k, v in self.values.items()))


def parse_config(text="", overrides=None, config_path=None):
    """
    Resolve a configuration file plus command-line ``overrides`` ({key: str})
    into a RunConfig with every default materialised.
    """
    values = OrderedDict()
    seen = {}
    for line, key, raw in tokenize(text):
        if key in seen:
            raise ConfigError("duplicate key {!r}, first set on line {}".format(key, seen[key]), line, key)
        seen[key] = line
        values[key] = _resolve(key, raw, line)
    for key, raw in (overrides or {}).items():
        if raw is None:
            continue
        values[key] = _resolve(key, str(raw), None)
    resolved = OrderedDict()
    for key, spec in KEYS.items():
        resolved[key] = values[key] if key in values else _resolve(key, spec.default, None)
    return RunConfig(resolved, config_path)


def load_config(path=None, overrides=None):
    text = ""
    if path is not None:
        try:
            with open(path, "r") as fh:
                text = fh.read()
        except OSError as err:
            raise ConfigError("cannot read {}: {}".format(path, err))
    return parse_config(text, overrides, path)


def parse_manifest(text):
    """Manifest text back into an ordered {key: raw value} mapping."""
    out = OrderedDict()
    for row in parse_with_textfsm(CONFIG_TEMPLATE, numbered_lines(text)):
        if row["BAD"]:
            raise ConfigError("malformed manifest line {!r}".format(row["BAD"]), int(row["LINENO"]))
        out[row["KEY"]] = row["VALUE"]
    return out


def manifest_diff(old_text, new_text, ignore=VOLATILE_MANIFEST_KEYS):
    """dictdiffer changes turning the ``old_text`` manifest into ``new_text``."""
    return list(dictdiffer.diff(parse_manifest(old_text), parse_manifest(new_text), ignore=set(ignore)))
