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

"""Time loop: bootstrap, repeated two-step updates, monitors and blowup detection."""
import logging
import math
import time

from tqdm import tqdm

from ns2d_bdf2.exceptions import NumericalBlowupError, ParameterError
from ns2d_bdf2.monitors import CheckpointWriter, StepRecord
from ns2d_bdf2.norms import StatePair, sobolev_norm
from ns2d_bdf2.spectral import inverse_laplacian
from ns2d_bdf2.timestepper import bootstrap_first_step, step_once

log = logging.getLogger(__file__)

BLOWUP_THRESHOLD = 1e12


class RunReport(object):
    """Outcome of :func:`run`."""

    def __init__(self, final_pair, final_step, wall_time, outputs, last_checkpoint=None):
        self.final_pair = final_pair
        self.final_step = final_step
        self.wall_time = wall_time
        self.outputs = outputs
        self.last_checkpoint = last_checkpoint

    @property
    def final_omega(self):
        return self.final_pair.newer

    def __repr__(self):
        return "RunReport(step={}, wall_time={:.3f}s)".format(self.final_step, self.wall_time)


def _last_checkpoint(monitors, default):
    for monitor in monitors:
        if isinstance(monitor, CheckpointWriter) and monitor.last_path is not None:
            return monitor.last_path
    return default


def _check_finite(omega, step, threshold, last_checkpoint):
    norm = sobolev_norm(omega, 0)
    if not math.isfinite(norm):
        raise NumericalBlowupError(step, last_checkpoint, "non-finite vorticity")
    if norm > threshold:
        raise NumericalBlowupError(
            step, last_checkpoint, "||w|| = {:.3e} above {:.1e}".format(norm, threshold)
        )


def run(cfg, omega0=None, monitors=(), resume=None, progress=False,
        blowup_threshold=BLOWUP_THRESHOLD):
    """
    Advance to step ``cfg.steps``, starting from ``omega0`` at step 0 or from
    a Checkpoint. Monitors see every step after the start. With zero steps
    to go, the initial pair (w^0, w^0) is returned unchanged.
    """
    monitors = list(monitors)
    if resume is not None:
        pair, step = resume.pair, resume.step
        if pair.grid != cfg.grid:
            raise ParameterError("checkpoint on {} for a run on {}".format(pair.grid, cfg.grid))
        start_checkpoint = resume.path
    else:
        if omega0 is None:
            raise ParameterError("run needs an initial field or a checkpoint")
        pair, step = StatePair(omega0, omega0), 0
        start_checkpoint = None

    log.info("run %r from step %d", cfg, step)
    started = time.time()
    try:
        for monitor in monitors:
            monitor.start(cfg, pair, step)
        with tqdm(total=max(cfg.steps - step, 0), disable=not progress, unit="step") as bar:
            while step < cfg.steps:
                step += 1
                try:
                    if step == 1:
                        pair = bootstrap_first_step(pair.newer, cfg)
                        forcing = cfg.forcing_at_step(1)
                    else:
                        pair, forcing = step_once(pair, cfg, step)
                    _check_finite(pair.newer, step, blowup_threshold,
                                  _last_checkpoint(monitors, start_checkpoint))
                except NumericalBlowupError as err:
                    last = _last_checkpoint(monitors, start_checkpoint)
                    log.error("blowup at step %d (%s), last checkpoint %s", err.step, err.reason, last)
                    raise NumericalBlowupError(err.step, last, err.reason)
                record = StepRecord(step, cfg.time(step), pair, inverse_laplacian(pair.newer), forcing)
                for monitor in monitors:
                    monitor(record)
                bar.update(1)
    finally:
        # output files are closed on every exit, a failed check included
        for monitor in monitors:
            monitor.finish()
    wall_time = time.time() - started
    log.info("run finished at step %d in %.2fs", step, wall_time)
    outputs = {monitor.name: monitor.result() for monitor in monitors}
    return RunReport(pair, step, wall_time, outputs, _last_checkpoint(monitors, start_checkpoint))
