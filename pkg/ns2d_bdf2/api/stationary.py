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
Self-convergence of time averages across step sizes at a fixed physical
horizon.
"""
import logging
import math
import os
from collections import OrderedDict

from ns2d_bdf2.exceptions import ParameterError
from ns2d_bdf2.monitors import ObservationMonitor
from ns2d_bdf2.solver import run
from ns2d_bdf2.stats import SCALAR_OBSERVABLES, StatsAccumulator

from .converge import steps_for
from .util import (
    STAT_CONVERGE_COLUMNS,
    STAT_CONVERGE_CSV,
    automatic_burn_in,
    ensure_dir,
    write_csv,
    write_summary,
)

log = logging.getLogger(__file__)

DEFAULT_OBSERVABLES = ("energy", "enstrophy", "palinstrophy", "balance")
HORIZON_TOL = 1e-9
SAME_TOL = 1e-9


def _within(diff, coarse, fine):
    """Difference inside the combined intervals, or equal to round-off."""
    if diff <= SAME_TOL * max(abs(coarse.mean), abs(fine.mean)):
        return True
    combined = coarse.half_width + fine.half_width
    return not math.isnan(combined) and diff <= combined


class ConvergenceReport(object):
    """Per observable: estimates by k (coarse to fine), successive differences, verdict."""

    def __init__(self, ks, estimates, names):
        self.ks = list(ks)
        self.names = list(names)
        self.estimates = estimates
        self.differences = OrderedDict()
        self.passed = OrderedDict()
        for name in self.names:
            ests = estimates[name]
            diffs = [abs(ests[i].mean - ests[i + 1].mean) for i in range(len(ests) - 1)]
            self.differences[name] = diffs
            self.passed[name] = self._judge(ests, diffs)

    @staticmethod
    def _judge(ests, diffs):
        decreasing = all(diffs[i + 1] <= diffs[i] for i in range(len(diffs) - 1))
        within = all(_within(diff, ests[i], ests[i + 1]) for i, diff in enumerate(diffs))
        return decreasing or within

    @property
    def ok(self):
        return all(self.passed.values())

    def rows(self):
        out = []
        for name in self.names:
            for i, (k, est) in enumerate(zip(self.ks, self.estimates[name])):
                out.append(
                    OrderedDict(
                        [
                            ("observable", name),
                            ("k", k),
                            ("mean", est.mean),
                            ("ci_low", est.low),
                            ("ci_high", est.high),
                            ("difference", self.differences[name][i - 1] if i else ""),
                        ]
                    )
                )
        return out

    def summary(self):
        out = OrderedDict([("ks", ",".join(repr(k) for k in self.ks))])
        for name in self.names:
            out["{}_pass".format(name)] = "PASS" if self.passed[name] else "FAIL"
        out["overall"] = "PASS" if self.ok else "FAIL"
        return out

    def __repr__(self):
        return "ConvergenceReport({}, {})".format(self.ks, "PASS" if self.ok else "FAIL")


def _check_family(configs):
    first = configs[0]
    horizon = first.steps * first.k
    for cfg in configs[1:]:
        if cfg.nu != first.nu or cfg.grid != first.grid:
            raise ParameterError("configs must share nu and grid")
        if cfg.forcing.mode is not first.forcing.mode:
            raise ParameterError("configs must share the forcing")
        if abs(cfg.steps * cfg.k - horizon) > HORIZON_TOL * horizon:
            raise ParameterError(
                "configs must share the physical horizon, {!r} != {!r}".format(cfg.steps * cfg.k, horizon)
            )


def stationary_stat_convergence(configs, omega0, burn_in_time=0.0, names=DEFAULT_OBSERVABLES,
                                batch_size=100, confidence=0.95, seed=0):
    """
    Time averages of ``names`` after ``burn_in_time`` for each config (same
    nu, grid, forcing and horizon, different k), sorted from coarse to fine.
    """
    if len(configs) < 2:
        raise ParameterError("need at least two step sizes")
    for name in names:
        if name not in SCALAR_OBSERVABLES:
            raise ParameterError("unknown observable {!r}".format(name))
    configs = sorted(configs, key=lambda c: c.k, reverse=True)
    _check_family(configs)

    estimates = OrderedDict((name, []) for name in names)
    for cfg in configs:
        accumulator = StatsAccumulator(int(math.ceil(burn_in_time / cfg.k)), names, batch_size)
        run(cfg, omega0=omega0, monitors=[ObservationMonitor(accumulator=accumulator)])
        for name in names:
            estimates[name].append(accumulator.estimate(name, confidence, seed))
        log.info("k=%r: %d samples after burn-in", cfg.k, accumulator.count)
    report = ConvergenceReport([c.k for c in configs], estimates, names)
    log.info("stationary statistics across k: %r", report)
    return report


def stat_converge(rc):
    """stationary_stat_convergence over converge_k at horizon t_end."""
    out_dir = ensure_dir(rc.out_dir)
    rc.write_manifest(out_dir)
    omega0 = rc.initial_field()
    configs = [rc.solver_config(k=k, steps=steps_for(rc.t_end, k)) for k in rc.converge_k]
    coarse = max(configs, key=lambda c: c.k)
    if rc.burn_in >= 0:
        burn_in_time = rc.burn_in * rc.k
    else:
        burn_in_time = automatic_burn_in(coarse, omega0) * coarse.k
    if burn_in_time >= rc.t_end:
        log.warning("burn-in time %.4g reaches the horizon %.4g, no samples", burn_in_time, rc.t_end)
    report = stationary_stat_convergence(
        configs, omega0, burn_in_time, batch_size=rc.batch_size, seed=rc.seed
    )
    write_csv(os.path.join(out_dir, STAT_CONVERGE_CSV), STAT_CONVERGE_COLUMNS, report.rows())
    write_summary(os.path.join(out_dir, "stat_converge.txt"), report.summary())
    return report
