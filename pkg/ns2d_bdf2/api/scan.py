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
import multiprocessing as mp
import os
import time
import traceback
from collections import OrderedDict

from ns2d_bdf2.exceptions import NumericalBlowupError
from ns2d_bdf2.monitors import ObservationMonitor
from ns2d_bdf2.solver import run

from .util import BLOWUP, SCAN_COLUMNS, SCAN_CSV, STABLE, ensure_dir, write_csv

log = logging.getLogger(__file__)


def cell_name(nu, k):
    return "cell_nu{!r}_k{!r}.csv".format(nu, k)


def run_cell(rc, nu, k, out_dir):
    """One isolated (nu, k) run with its own time series file."""
    started = time.time()
    row = OrderedDict([("nu", nu), ("k", k), ("blowup_step", ""), ("final_enstrophy", "")])
    observations = ObservationMonitor(
        os.path.join(out_dir, cell_name(nu, k)), every=rc.output_every, basis_modes=rc.basis_modes
    )
    try:
        cfg = rc.solver_config(k=k, nu=nu)
        run(cfg, omega0=rc.initial_field(), monitors=[observations])
        row["status"] = STABLE
    except NumericalBlowupError as err:
        row["status"] = BLOWUP
        row["blowup_step"] = err.step
    if observations.last is not None:
        row["final_enstrophy"] = observations.last.enstrophy
    row["wall_time"] = "{:.3f}".format(time.time() - started)
    log.info("scan cell nu=%r k=%r: %s", nu, k, row["status"])
    return row


def _run_cell_star(args):
    try:
        return run_cell(*args)
    except Exception:
        log.error("scan cell %r failed: %s", args[1:3], traceback.format_exc())
        raise


def monotonicity_findings(rows):
    """Cells (nu, k) that are STABLE while some k' < k at the same nu blew up."""
    findings = []
    by_nu = OrderedDict()
    for row in rows:
        by_nu.setdefault(row["nu"], []).append(row)
    for nu, cells in by_nu.items():
        cells = sorted(cells, key=lambda r: r["k"])
        smallest_blowup = None
        for cell in cells:
            if cell["status"] == BLOWUP and smallest_blowup is None:
                smallest_blowup = cell["k"]
            elif cell["status"] == STABLE and smallest_blowup is not None:
                findings.append(
                    "nu={!r}: k={!r} stable above blowup at k={!r}".format(nu, cell["k"], smallest_blowup)
                )
    return findings


def scan(rc):
    """
    Classify every (nu, k) of scan_nu x scan_k as STABLE or BLOWUP in a
    worker pool. Returns (rows, findings); rows are also written to scan.csv.
    """
    out_dir = ensure_dir(rc.out_dir)
    nus = rc.scan_nu or [rc.nu]
    ks = rc.scan_k or [rc.k]
    rc.write_manifest(out_dir)
    cells = [(rc, nu, k, out_dir) for nu in nus for k in ks]
    log.info("scan of %d cells on %d workers", len(cells), rc.workers)
    if rc.workers > 1 and len(cells) > 1:
        with mp.Pool(processes=min(rc.workers, len(cells))) as pool:
            rows = pool.map(_run_cell_star, cells)
    else:
        rows = [_run_cell_star(cell) for cell in cells]

    findings = monotonicity_findings(rows)
    for finding in findings:
        log.warning("scan monotonicity exception: %s", finding)
    write_csv(os.path.join(out_dir, SCAN_CSV), SCAN_COLUMNS, rows)
    return rows, findings
