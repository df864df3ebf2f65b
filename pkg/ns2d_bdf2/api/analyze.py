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

import logging
import os
from collections import OrderedDict

import dictdiffer

from ns2d_bdf2 import analysis
from ns2d_bdf2.averaging import ExactSum
from ns2d_bdf2.config import KEYS, MANIFEST_NAME, manifest_diff, parse_config, parse_manifest
from ns2d_bdf2.exceptions import ConfigError, ParameterError
from ns2d_bdf2.norms import GWeight, g_equivalence_constants, g_norm_sq
from ns2d_bdf2.stats import SCALAR_OBSERVABLES, ObservationRow, StatsAccumulator
from ns2d_bdf2.timestepper import bootstrap_first_step

from .util import (
    ENVELOPE_COLUMNS,
    ENVELOPE_CSV,
    TIMESERIES_CSV,
    as_float,
    read_csv,
    resolve_burn_in,
    write_csv,
    write_summary,
)

log = logging.getLogger(__file__)

ANALYSIS_SUMMARY = "analysis.txt"
ENVELOPE_SLACK = 1e-9
# balance residuals below this fraction of the dissipation count as zero
BALANCE_TOL = 1e-9


def config_from_manifest(text):
    """RunConfig rebuilt from the configuration keys of a manifest."""
    values = OrderedDict((k, v) for k, v in parse_manifest(text).items() if k in KEYS)
    return parse_config("", values)


def read_manifest(directory):
    path = os.path.join(directory, MANIFEST_NAME)
    try:
        with open(path, "r") as fh:
            return fh.read()
    except OSError as err:
        raise ConfigError("cannot read manifest {}: {}".format(path, err))


def row_from_dict(record, basis_names=()):
    projections = OrderedDict((name, as_float(record[name])) for name in basis_names)
    return ObservationRow(
        int(record["step"]),
        as_float(record["t"]),
        *[as_float(record[name]) for name in SCALAR_OBSERVABLES],
        projections=projections
    )


def envelope_rows(rc, cfg, rows):
    """
    ||w^m||^2 against C_u times the L2 envelope of V_{m-1}, with
    V_0 = (w^0, w^1) replayed from the initial data.
    """
    omega0 = rc.initial_field()
    v0_gsq = g_norm_sq(bootstrap_first_step(omega0, cfg), GWeight(cfg.mu))
    rho0 = analysis.rho0(cfg.forcing.sup_norm(-1), cfg.nu)
    _, c_u = g_equivalence_constants(cfg.mu)
    out = []
    for row in rows:
        if row.step < 1:
            continue
        bound = c_u * analysis.l2_envelope(row.step - 1, cfg.nu, cfg.k, v0_gsq, rho0)
        out.append(OrderedDict([("step", row.step), ("l2_sq", 2.0 * row.enstrophy), ("bound", bound)]))
    return out


def analyze(directory, compare=None):
    """
    Re-read a run directory: statistics after burn-in, the energy balance
    residual and the L2 envelope overlay. ``compare`` names a second run
    directory whose manifest and means are diffed against this one.
    """
    manifest_text = read_manifest(directory)
    rc = config_from_manifest(manifest_text)
    cfg = rc.solver_config()
    try:
        cfg.check_stability_regime()
    except ParameterError as err:
        raise ConfigError(str(err), key="k")

    basis_names = [n for n in read_csv_header(directory) if n.startswith(("cos_", "sin_"))]
    records = read_csv(os.path.join(directory, TIMESERIES_CSV))
    rows = [row_from_dict(r, basis_names) for r in records]
    burn_in = resolve_burn_in(rc, cfg, rc.initial_field())
    accumulator = StatsAccumulator(
        burn_in, list(SCALAR_OBSERVABLES) + basis_names, rc.batch_size, stride=rc.output_every
    )
    for row in rows:
        accumulator.record(row)

    summary = OrderedDict()
    summary.update(accumulator.summary(seed=rc.seed))
    window = [row for row in rows if row.step >= burn_in]
    if window:
        # rows keep nu |grad w|^2 - (f, w), recover the pairing (f, w)
        series = [
            (2.0 * row.palinstrophy, 2.0 * row.palinstrophy * rc.nu - row.balance) for row in window
        ]
        residual = analysis.energy_balance_residual(series, rc.nu, rc.batch_size, seed=rc.seed)
        dissipation = ExactSum(2.0 * rc.nu * row.palinstrophy for row in window).value() / len(window)
        zero = BALANCE_TOL * dissipation
        summary["balance_residual"] = residual.mean
        summary["balance_ci_low"] = residual.low
        summary["balance_ci_high"] = residual.high
        summary["balance_pass"] = "PASS" if residual.mean <= zero or residual.low <= zero else "FAIL"

    envelope = envelope_rows(rc, cfg, rows)
    worst = max((e["l2_sq"] / e["bound"] for e in envelope if e["bound"] > 0), default=0.0)
    summary["envelope_worst_ratio"] = worst
    summary["envelope_pass"] = "PASS" if worst <= 1.0 + ENVELOPE_SLACK else "FAIL"
    write_csv(os.path.join(directory, ENVELOPE_CSV), ENVELOPE_COLUMNS, envelope)

    if compare is not None:
        other_text = read_manifest(compare)
        for change in manifest_diff(other_text, manifest_text):
            log.info("manifest difference against %s: %s", compare, change)
        other = analyze(compare)
        mean_keys = [key for key in summary if key.endswith("_mean")]
        mine = {key: summary[key] for key in mean_keys}
        theirs = {key: other.get(key) for key in mean_keys}
        changes = list(dictdiffer.diff(theirs, mine))
        for change in changes:
            log.info("mean difference against %s: %s", compare, change)
        summary["compare_changes"] = len(changes)

    write_summary(os.path.join(directory, ANALYSIS_SUMMARY), summary)
    return summary


def read_csv_header(directory):
    with open(os.path.join(directory, TIMESERIES_CSV), "r") as fh:
        return fh.readline().strip().split(",")
