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
from collections import namedtuple

from ns2d_bdf2 import analysis
from ns2d_bdf2.exceptions import ConfigError, ParameterError
from ns2d_bdf2.monitors import ConsistencyMonitor, StabilityMonitor
from ns2d_bdf2.norms import GWeight, StatePair, g_equivalence_constants, g_norm_sq, pair_l2_norm_sq
from ns2d_bdf2.solver import run
from ns2d_bdf2.timestepper import (
    bootstrap_first_step,
    bound_radius,
    bound_radius_alt,
    max_stable_timestep,
)

from .run_experiment import build_monitors, load_resume
from .util import ensure_dir, resolve_burn_in, summary_of, write_summary

log = logging.getLogger(__file__)

SOAK_SUMMARY = "soak.txt"

StabilityParameters = namedtuple("StabilityParameters", "rho0 v0_gnorm m0 k0 m0_alt k0_alt")


def stability_parameters(cfg, omega0, cw=None):
    """
    rho_0, ||V_0||_G with V_0 = (w^0, w^0), M_0 and the step bound k_0.
    M_0 and k_0 are also returned for the radius max(||V_0|| / sqrt(C_l), rho_0),
    which needs no G-norm of the data and is never smaller.
    """
    cw = cfg.cw_estimate if cw is None else cw
    rho0 = analysis.rho0(cfg.forcing.sup_norm(-1), cfg.nu)
    v0 = StatePair(omega0, omega0)
    v0_gnorm = math.sqrt(g_norm_sq(v0, GWeight(cfg.mu)))
    c_l, c_u = g_equivalence_constants(cfg.mu)
    m0 = bound_radius(v0_gnorm, rho0)
    m0_alt = bound_radius_alt(math.sqrt(pair_l2_norm_sq(v0)), rho0, c_l)
    k0, k0_alt = [
        max_stable_timestep(cfg.nu, cw, c_u, radius) if radius > 0 else math.inf
        for radius in (m0, m0_alt)
    ]
    return StabilityParameters(rho0, v0_gnorm, m0, k0, m0_alt, k0_alt)


def soak(rc, resume_path=None, v0_gsq=None):
    """
    Long run with the invariant ball, envelope and absorbing checks armed.
    InvariantViolation propagates on the first failed check.
    """
    out_dir = ensure_dir(rc.out_dir)
    cfg = rc.solver_config()
    try:
        cfg.check_stability_regime()
    except ParameterError as err:
        raise ConfigError(str(err), key="k")
    omega0 = rc.initial_field()
    params = stability_parameters(cfg, omega0, rc.cw_estimate)
    log.info(
        "soak: rho0 = %.6g, ||V_0||_G ~ %.6g, M0 = %.6g, k0 = %.4g (L2 radius: M0 = %.6g, k0 = %.4g)",
        *params
    )
    if cfg.k > params.k0:
        log.warning("k = %.4g exceeds k0 = %.4g for C_w = %.4g", cfg.k, params.k0, rc.cw_estimate)

    rc.write_manifest(out_dir)
    resume = load_resume(resume_path, rc, cfg.grid) if resume_path else None
    if resume is not None and v0_gsq is None:
        # V_0 = (w^0, w^1) is replayed from the initial data
        v0_gsq = g_norm_sq(bootstrap_first_step(omega0, cfg), GWeight(cfg.mu))
    stability = StabilityMonitor(
        params.rho0, cw=rc.cw_estimate, lam=rc.gronwall_lambda, v0_gsq=v0_gsq, fail_fast=True
    )
    consistency = ConsistencyMonitor(window_start=resolve_burn_in(rc, cfg, omega0))
    monitors = build_monitors(
        rc, cfg, omega0, out_dir, append=resume is not None, extra=(stability, consistency)
    )

    report = run(cfg, omega0=omega0, monitors=monitors, resume=resume, progress=rc.progress)
    summary = summary_of(report.outputs)
    summary["k0"] = params.k0
    summary["M0"] = params.m0
    summary["k0_l2"] = params.k0_alt
    summary["M0_l2"] = params.m0_alt
    write_summary(os.path.join(out_dir, SOAK_SUMMARY), summary)
    rc.write_manifest(out_dir, wall_time="{:.3f}".format(report.wall_time))
    return report
