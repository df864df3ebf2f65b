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
import math
import os
from collections import OrderedDict

from ns2d_bdf2.exceptions import ConfigError
from ns2d_bdf2.norms import sobolev_norm
from ns2d_bdf2.solver import run

from .util import CONVERGE_COLUMNS, CONVERGE_CSV, ensure_dir, write_csv

log = logging.getLogger(__file__)

# steps * k must hit t_end to this relative tolerance
HORIZON_TOL = 1e-9


def steps_for(t_end, k):
    steps = int(round(t_end / k))
    if steps < 2 or abs(steps * k - t_end) > HORIZON_TOL * t_end:
        raise ConfigError("t_end = {!r} is not a whole number (>= 2) of steps k = {!r}".format(t_end, k))
    return steps


def relative_error(omega, reference):
    norm = sobolev_norm(reference, 0)
    error = sobolev_norm(omega - reference, 0)
    return error / norm if norm > 0 else error


def observed_orders(ks, errors):
    """log(e_i / e_{i+1}) / log(k_i / k_{i+1}) for consecutive pairs, None first."""
    orders = [None]
    for i in range(1, len(ks)):
        if errors[i] > 0 and errors[i - 1] > 0:
            orders.append(math.log(errors[i - 1] / errors[i]) / math.log(ks[i - 1] / ks[i]))
        else:
            orders.append(None)
    return orders


def convergence_study(rc, nonlinearity=None):
    """
    Endpoint errors at t_end for every k of converge_k. Against the closed
    form solution when there is one, otherwise against a run at half the
    smallest k.
    """
    ks = sorted(rc.converge_k, reverse=True)
    omega0 = rc.initial_field()
    exact = rc.exact_solution()
    if exact is not None:
        reference = exact(rc.t_end)
    else:
        k_ref = ks[-1] / 2.0
        log.info("no closed form solution, reference run at k = %r", k_ref)
        ref_cfg = rc.solver_config(k=k_ref, steps=steps_for(rc.t_end, k_ref), nonlinearity=nonlinearity)
        reference = run(ref_cfg, omega0=omega0).final_omega

    errors = []
    for k in ks:
        cfg = rc.solver_config(k=k, steps=steps_for(rc.t_end, k), nonlinearity=nonlinearity)
        report = run(cfg, omega0=omega0, progress=rc.progress)
        errors.append(relative_error(report.final_omega, reference))
        log.info("%s k=%r: relative error %.6e", cfg.nonlinearity.value, k, errors[-1])

    rows = []
    for k, error, order in zip(ks, errors, observed_orders(ks, errors)):
        rows.append(
            OrderedDict(
                [
                    ("nonlinearity", nonlinearity or rc.nonlinearity),
                    ("k", k),
                    ("steps", steps_for(rc.t_end, k)),
                    ("error", error),
                    ("order", "" if order is None else order),
                ]
            )
        )
    return rows


def converge(rc, nonlinearities=None):
    """Order study for each nonlinearity, written to converge.csv."""
    out_dir = ensure_dir(rc.out_dir)
    rc.write_manifest(out_dir)
    rows = []
    for nonlinearity in nonlinearities or [rc.nonlinearity]:
        rows.extend(convergence_study(rc, nonlinearity))
    write_csv(os.path.join(out_dir, CONVERGE_CSV), CONVERGE_COLUMNS, rows)
    return rows
