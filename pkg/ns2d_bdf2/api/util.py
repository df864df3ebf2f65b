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

"""CSV column tables and file helpers shared by the experiment drivers."""
import csv
import logging
import math
import os
from collections import OrderedDict

from ns2d_bdf2 import analysis
from ns2d_bdf2.norms import GWeight, StatePair, g_norm_sq
from ns2d_bdf2.stats import SCALAR_OBSERVABLES, mode_projection_names

log = logging.getLogger(__file__)

TIMESERIES_CSV = "timeseries.csv"
SPECTRUM_CSV = "spectrum.csv"
SCAN_CSV = "scan.csv"
CONVERGE_CSV = "converge.csv"
WENTE_CSV = "wente.csv"
STAT_CONVERGE_CSV = "stat_converge.csv"
ENVELOPE_CSV = "envelope.csv"
STATS_SUMMARY = "stats.txt"

SCAN_COLUMNS = ["nu", "k", "status", "blowup_step", "final_enstrophy", "wall_time"]
CONVERGE_COLUMNS = ["nonlinearity", "k", "steps", "error", "order"]
WENTE_COLUMNS = ["variant", "N", "kmax", "samples", "max_ratio"]
STAT_CONVERGE_COLUMNS = ["observable", "k", "mean", "ci_low", "ci_high", "difference"]
ENVELOPE_COLUMNS = ["step", "l2_sq", "bound"]

STABLE = "STABLE"
BLOWUP = "BLOWUP"


def timeseries_columns(basis_modes):
    return ["step", "t"] + list(SCALAR_OBSERVABLES) + mode_projection_names(basis_modes)


def write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({column: row.get(column, "") for column in columns})
    log.info("%d rows written to %s", len(rows), path)
    return path


def read_csv(path):
    with open(path, "r", newline="") as fh:
        return list(csv.DictReader(fh))


def as_float(value):
    if value in (None, ""):
        return float("nan")
    return float(value)


def write_summary(path, mapping):
    """Flat ``key = value`` summary file."""
    with open(path, "w") as fh:
        for key, value in mapping.items():
            fh.write("{} = {}\n".format(key, "" if value is None else value))
    log.info("summary written to %s", path)
    return path


def ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return path


def automatic_burn_in(cfg, omega0):
    """
    ceil(T_0 / k) + 20%, with T_0 the absorbing time of V_0 = (w^0, w^0).
    Zero when the forcing vanishes or V_0 already lies in the ball.
    """
    rho0 = analysis.rho0(cfg.forcing.sup_norm(-1), cfg.nu)
    v0_gnorm = math.sqrt(g_norm_sq(StatePair(omega0, omega0), GWeight(cfg.mu)))
    if rho0 == 0.0 or v0_gnorm == 0.0:
        return 0
    T0 = analysis.absorbing_time(v0_gnorm, rho0, cfg.nu)
    steps = analysis.burn_in_steps(T0, cfg.k)
    log.info("automatic burn-in: T0 = %.4g, %d steps", T0, steps)
    return steps


def resolve_burn_in(rc, cfg, omega0):
    if rc.burn_in >= 0:
        return rc.burn_in
    return automatic_burn_in(cfg, omega0)


def summary_of(outputs):
    """Flatten monitor results into one ordered mapping."""
    out = OrderedDict()
    for name, result in outputs.items():
        if isinstance(result, dict):
            for key, value in result.items():
                out[key] = value
        elif hasattr(result, "summary"):
            out.update(result.summary())
        elif result is not None:
            out[name] = result
    return out
