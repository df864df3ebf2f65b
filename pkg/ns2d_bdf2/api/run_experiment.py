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

from ns2d_bdf2.config import manifest_diff
from ns2d_bdf2.monitors import AprioriMonitor, CheckpointWriter, ObservationMonitor, SpectrumMonitor
from ns2d_bdf2.snapshot import checkpoint_read
from ns2d_bdf2.solver import run
from ns2d_bdf2.stats import SCALAR_OBSERVABLES, StatsAccumulator, mode_projection_names

from .util import (
    SPECTRUM_CSV,
    STATS_SUMMARY,
    TIMESERIES_CSV,
    ensure_dir,
    resolve_burn_in,
    summary_of,
    write_summary,
)

log = logging.getLogger(__file__)


def build_monitors(rc, cfg, omega0, out_dir, append=False, extra=()):
    """Time series, spectrum, a-priori and checkpoint monitors of a run."""
    burn_in = resolve_burn_in(rc, cfg, omega0)
    names = list(SCALAR_OBSERVABLES) + mode_projection_names(rc.basis_modes)
    accumulator = StatsAccumulator(burn_in, names, rc.batch_size, stride=rc.output_every)
    monitors = [
        ObservationMonitor(
            os.path.join(out_dir, TIMESERIES_CSV),
            every=rc.output_every,
            basis_modes=rc.basis_modes,
            accumulator=accumulator,
            append=append,
        ),
        AprioriMonitor(rc.cw_estimate),
    ]
    if rc.spectrum_every:
        monitors.append(
            SpectrumMonitor(
                os.path.join(out_dir, SPECTRUM_CSV),
                every=rc.spectrum_every,
                accumulator=accumulator,
                append=append,
            )
        )
    monitors.extend(extra)
    if rc.checkpoint_every:
        monitors.append(CheckpointWriter(out_dir, rc.checkpoint_every, rc.manifest_text()))
    return monitors


def load_resume(path, rc, grid):
    """Read a checkpoint and log how its manifest differs from this run's."""
    checkpoint = checkpoint_read(path, grid)
    if checkpoint.manifest_text:
        changes = manifest_diff(checkpoint.manifest_text, rc.manifest_text())
        for change in changes:
            log.warning("resuming %s under a changed manifest: %s", path, change)
    log.info("resuming from %r", checkpoint)
    return checkpoint


def run_experiment(rc, resume_path=None, extra_monitors=()):
    """
    Plain run of the configuration: writes the manifest, the time series and
    spectrum CSVs, checkpoints and a statistics summary into ``rc.out_dir``.
    """
    out_dir = ensure_dir(rc.out_dir)
    cfg = rc.solver_config()
    omega0 = rc.initial_field()
    rc.write_manifest(out_dir)
    resume = load_resume(resume_path, rc, cfg.grid) if resume_path else None
    monitors = build_monitors(rc, cfg, omega0, out_dir, append=resume is not None, extra=extra_monitors)

    report = run(cfg, omega0=omega0, monitors=monitors, resume=resume, progress=rc.progress)

    write_summary(os.path.join(out_dir, STATS_SUMMARY), summary_of(report.outputs))
    rc.write_manifest(out_dir, wall_time="{:.3f}".format(report.wall_time))
    return report
