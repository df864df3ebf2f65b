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
Per-step monitors driven by the run loop.

A monitor is called with a StepRecord after every step and decides from
``every`` whether to act. Writers own their output file; checks count and
log violations, and the soak checks can raise InvariantViolation.
"""
import csv
import logging
import math
import os

from ns2d_bdf2 import analysis
from ns2d_bdf2.exceptions import InvariantViolation, ParameterError
from ns2d_bdf2.norms import GWeight, g_equivalence_constants, g_norm_sq, sobolev_norm
from ns2d_bdf2.snapshot import checkpoint_write
from ns2d_bdf2.stats import mode_projection_names, observe, shell_spectrum, SCALAR_OBSERVABLES

log = logging.getLogger(__file__)

# slack on the invariant ball and envelope checks
BOUND_SLACK = 1e-9
MAX_LOGGED = 10


class StepRecord(object):
    """State after ``step`` steps: pair = (w^{step-1}, w^step), forcing = f^step."""

    __slots__ = ("step", "t", "pair", "psi", "forcing")

    def __init__(self, step, t, pair, psi, forcing):
        self.step = step
        self.t = t
        self.pair = pair
        self.psi = psi
        self.forcing = forcing


class Monitor(object):
    """Base class. Subclasses override :meth:`diagnostic`."""

    name = "monitor"

    def __init__(self, every=1):
        if every < 1:
            raise ParameterError("monitor interval must be >= 1, got {!r}".format(every))
        self.every = int(every)
        self.cfg = None

    def start(self, cfg, pair, step):
        self.cfg = cfg

    def __call__(self, record):
        if record.step % self.every:
            return
        self.diagnostic(record)

    def diagnostic(self, record):
        return NotImplemented

    def finish(self):
        pass

    def result(self):
        return None


class _CsvMonitor(Monitor):
    """
    Opens ``outfile`` on start and writes the header unless appending.
    Appending to an existing file first drops the rows past the start step,
    so a resumed run continues the file without duplicates.
    """

    def __init__(self, outfile=None, every=1, append=False):
        super(_CsvMonitor, self).__init__(every)
        self.outfile = outfile
        self.append = append
        self._fh = None
        self._needs_close = False
        self.writer = None

    def fieldnames(self):
        raise NotImplementedError

    def _truncate_after(self, step):
        with open(self.outfile, "r", newline="") as fh:
            reader = csv.DictReader(fh)
            rows = list(reader)
            header = reader.fieldnames or self.fieldnames()
        if header != self.fieldnames():
            raise ParameterError("cannot append to {}: columns {} differ".format(self.outfile, header))
        kept = [row for row in rows if int(row["step"]) <= step]
        with open(self.outfile, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=header, lineterminator="\n")
            writer.writeheader()
            writer.writerows(kept)
        if len(kept) < len(rows):
            log.info("%s: dropped %d rows past step %d", self.outfile, len(rows) - len(kept), step)

    def start(self, cfg, pair, step):
        super(_CsvMonitor, self).start(cfg, pair, step)
        if self.outfile is None:
            return
        write_header = not self.append
        if hasattr(self.outfile, "write"):
            self._fh = self.outfile
        else:
            if self.append:
                if os.path.exists(self.outfile):
                    self._truncate_after(step)
                else:
                    write_header = True
            self._fh = open(self.outfile, "a" if self.append else "w", newline="")
            self._needs_close = True
        self.writer = csv.DictWriter(self._fh, fieldnames=self.fieldnames(), lineterminator="\n")
        if write_header:
            self.writer.writeheader()

    def finish(self):
        if self._needs_close:
            self._fh.close()
            self._needs_close = False
        elif self._fh is not None:
            self._fh.flush()


class ObservationMonitor(_CsvMonitor):
    """Time series CSV and/or statistics accumulation of the observables."""

    name = "observations"

    def __init__(self, outfile=None, every=1, basis_modes=(), accumulator=None, append=False,
                 keep_rows=False):
        super(ObservationMonitor, self).__init__(outfile, every, append)
        self.basis_modes = list(basis_modes)
        self.accumulator = accumulator
        self.keep_rows = keep_rows
        self.rows = []
        self.last = None

    def fieldnames(self):
        return ["step", "t"] + list(SCALAR_OBSERVABLES) + mode_projection_names(self.basis_modes)

    def diagnostic(self, record):
        row = observe(
            record.pair, record.psi, record.forcing, self.cfg.nu, self.cfg.k,
            step=record.step, basis_modes=self.basis_modes,
        )
        if self.writer is not None:
            self.writer.writerow(row.as_dict())
        if self.accumulator is not None:
            self.accumulator.record(row)
        if self.keep_rows:
            self.rows.append(row)
        self.last = row

    def result(self):
        return self.accumulator


class SpectrumMonitor(_CsvMonitor):
    """Shell spectrum rows (step, kappa, value) every ``every`` steps."""

    name = "spectrum"

    def __init__(self, outfile=None, every=100, kind="enstrophy", accumulator=None, append=False):
        super(SpectrumMonitor, self).__init__(outfile, every, append)
        self.kind = kind
        self.accumulator = accumulator
        self.last = None

    def fieldnames(self):
        return ["step", "kappa", "value"]

    def diagnostic(self, record):
        kappa, values = shell_spectrum(record.pair.newer, self.kind)
        if self.writer is not None:
            for kk, value in zip(kappa, values):
                self.writer.writerow({"step": record.step, "kappa": int(kk), "value": value})
        if self.accumulator is not None:
            self.accumulator.record_spectrum(record.step, values)
        self.last = values


class AprioriMonitor(Monitor):
    """
    Single-step a-priori inequalities, with the estimated Wente constant.

    L2 form for n >= 1:
      2||w^{n+1}||^2 + nu k ||grad w^{n+1}||^2
        <= ((4||w^n|| + ||w^{n-1}||)/2 + k ||f^{n+1}||_{-1})^2
           + (k C_w^2 / nu) (2||w^n|| + ||w^{n-1}||)^4
    H1 form for n >= 3:
      2||grad w^{n+1}||^2 + nu k ||lap w^{n+1}||^2
        <= ((4||grad w^n|| + ||grad w^{n-1}||)/2 + k ||f^{n+1}||)^2
           + (k C_w^2 / nu) (2||w^n|| + ||w^{n-1}||)^2 (2||grad w^n|| + ||grad w^{n-1}||)^2
    Violations are logged, never raised.
    """

    name = "apriori"

    def __init__(self, cw=None):
        super(AprioriMonitor, self).__init__(1)
        self.cw = cw
        self._levels = {}
        self.checked = {"l2": 0, "h1": 0}
        self.violations = {"l2": 0, "h1": 0}
        self.worst = {"l2": 0.0, "h1": 0.0}

    def start(self, cfg, pair, step):
        super(AprioriMonitor, self).start(cfg, pair, step)
        if self.cw is None:
            self.cw = cfg.cw_estimate
        self._levels = {step: self._norms(pair.newer)}
        if step >= 1:
            self._levels[step - 1] = self._norms(pair.older)

    @staticmethod
    def _norms(omega):
        return sobolev_norm(omega, 0), sobolev_norm(omega, 1), sobolev_norm(omega, 2)

    def _check(self, kind, step, lhs, rhs):
        self.checked[kind] += 1
        ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf)
        self.worst[kind] = max(self.worst[kind], ratio)
        if lhs > rhs * (1.0 + BOUND_SLACK):
            self.violations[kind] += 1
            if self.violations[kind] <= MAX_LOGGED:
                log.warning(
                    "a-priori %s inequality violated at step %d: %.6g > %.6g (C_w=%.4g)",
                    kind, step, lhs, rhs, self.cw,
                )

    def diagnostic(self, record):
        m = record.step
        nu, k = self.cfg.nu, self.cfg.k
        self._levels[m] = self._norms(record.pair.newer)
        if m - 2 in self._levels and m - 1 in self._levels and m >= 2:
            w2, g2, l2 = self._levels[m]
            w1, g1, _ = self._levels[m - 1]
            w0, g0, _ = self._levels[m - 2]
            coupling = k * self.cw ** 2 / nu
            lhs = 2.0 * w2 ** 2 + nu * k * g2 ** 2
            rhs = ((4.0 * w1 + w0) / 2.0 + k * sobolev_norm(record.forcing, -1)) ** 2
            rhs += coupling * (2.0 * w1 + w0) ** 4
            self._check("l2", m, lhs, rhs)
            if m >= 4:
                lhs = 2.0 * g2 ** 2 + nu * k * l2 ** 2
                rhs = ((4.0 * g1 + g0) / 2.0 + k * sobolev_norm(record.forcing, 0)) ** 2
                rhs += coupling * (2.0 * w1 + w0) ** 2 * (2.0 * g1 + g0) ** 2
                self._check("h1", m, lhs, rhs)
        for level in [lv for lv in self._levels if lv < m - 1]:
            del self._levels[level]

    def result(self):
        return {
            "apriori_l2_checked": self.checked["l2"],
            "apriori_l2_violations": self.violations["l2"],
            "apriori_l2_worst_ratio": self.worst["l2"],
            "apriori_h1_checked": self.checked["h1"],
            "apriori_h1_violations": self.violations["h1"],
            "apriori_h1_worst_ratio": self.worst["h1"],
        }


class StabilityMonitor(Monitor):
    """
    Long-run bounds on V_n = [w^n, w^{n+1}]: invariant ball, L2 envelope,
    absorbing ball entry, the Gronwall step restriction and the gradient and
    Laplacian G-norm series with fitted radii.

    A record of step m carries V_{m-1}.
    """

    name = "stability"

    def __init__(self, rho0, cw=None, lam=0.5, v0_gsq=None, fail_fast=True, record_series=True):
        super(StabilityMonitor, self).__init__(1)
        self.rho0 = rho0
        self.cw = cw
        self.lam = lam
        self.v0_gsq = v0_gsq
        self.fail_fast = fail_fast
        self.record_series = record_series
        self.findings = []
        self.max_ball_ratio = 0.0
        self.max_envelope_ratio = 0.0
        self.last_outside_n = -1
        self.last_n = None
        self.restriction_first = None
        self.restriction_reviolations = 0
        self._g_prev = None
        self.grad_series = []
        self.lap_series = []

    def start(self, cfg, pair, step):
        super(StabilityMonitor, self).start(cfg, pair, step)
        cfg.check_stability_regime()
        if self.cw is None:
            self.cw = cfg.cw_estimate
        self.g = GWeight(cfg.mu)
        self.g0 = GWeight(0.0)
        self.c_l, self.c_u = g_equivalence_constants(cfg.mu)
        self.beta = analysis.gronwall_beta(self.rho0, self.c_l, self.lam)
        if step >= 1 and self.v0_gsq is None:
            raise ParameterError("resumed stability monitor needs ||V_0||^2_G")

    def _fail(self, name, step, measured, bound):
        err = InvariantViolation(name, step, measured, bound)
        self.findings.append(str(err))
        log.error("%s", err)
        if self.fail_fast:
            raise err

    @property
    def absorbing_time(self):
        if self.rho0 <= 0 or not self.v0_gsq:
            return None
        return analysis.absorbing_time(math.sqrt(self.v0_gsq), self.rho0, self.cfg.nu)

    def diagnostic(self, record):
        n = record.step - 1
        if n < 0:
            return
        cfg = self.cfg
        gsq = g_norm_sq(record.pair, self.g)
        if n == 0 and self.v0_gsq is None:
            self.v0_gsq = gsq
        radius = max(math.sqrt(self.v0_gsq), self.rho0)
        ball_ratio = math.sqrt(gsq) / radius if radius > 0 else 0.0
        self.max_ball_ratio = max(self.max_ball_ratio, ball_ratio)
        if ball_ratio > 1.0 + BOUND_SLACK:
            self._fail("invariant ball", record.step, math.sqrt(gsq), radius)

        envelope = analysis.l2_envelope(n, cfg.nu, cfg.k, self.v0_gsq, self.rho0)
        env_ratio = gsq / envelope if envelope > 0 else 0.0
        self.max_envelope_ratio = max(self.max_envelope_ratio, env_ratio)
        if env_ratio > 1.0 + BOUND_SLACK:
            self._fail("L2 envelope", record.step, gsq, envelope)

        if gsq > 2.0 * self.rho0 ** 2:
            self.last_outside_n = n
            T0 = self.absorbing_time
            if T0 is not None and n * cfg.k > 1.1 * T0:
                self._fail("absorbing ball", record.step, gsq, 2.0 * self.rho0 ** 2)
        self.last_n = n

        g_cur = g_norm_sq(record.pair, self.g0)
        if self._g_prev is not None:
            holds = analysis.step_restriction_holds(g_cur, self._g_prev, self.beta, self.cw, cfg.k, cfg.nu)
            if holds and self.restriction_first is None:
                self.restriction_first = n
            elif not holds and self.restriction_first is not None:
                self.restriction_reviolations += 1
                if self.restriction_reviolations <= MAX_LOGGED:
                    log.warning("step restriction lost at step %d after holding from n=%d",
                                record.step, self.restriction_first)
        self._g_prev = g_cur

        if self.record_series:
            self.grad_series.append(g_norm_sq(record.pair, self.g, s=1))
            self.lap_series.append(g_norm_sq(record.pair, self.g, s=2))

    def finish(self):
        T0 = self.absorbing_time
        if T0 is None or self.last_n is None:
            return
        horizon = self.last_n * self.cfg.k
        if horizon < 1.1 * T0:
            log.info("horizon %.4g shorter than 1.1 T0 = %.4g, absorbing entry not checked",
                     horizon, 1.1 * T0)

    @property
    def entry_n(self):
        """Index from which V_n stays in the 2 rho_0^2 ball, None if it ends outside."""
        if self.last_n is None or self.last_outside_n == self.last_n:
            return None
        return self.last_outside_n + 1

    def fitted_radii(self):
        """(rho_1^2, N_1, rho_2^2, N_2) from the gradient and Laplacian series."""
        out = [None, None, None, None]
        cfg = self.cfg
        if len(self.grad_series) > 3:
            rho1_sq = analysis.fit_envelope_radius(self.grad_series, cfg.nu, cfg.k, 2)
            out[0] = rho1_sq
            out[1] = analysis.entry_index(self.grad_series, 2.0 * rho1_sq)
        if len(self.lap_series) > 4:
            rho2_sq = analysis.fit_envelope_radius(self.lap_series, cfg.nu, cfg.k, 3)
            out[2] = rho2_sq
            out[3] = analysis.entry_index(self.lap_series, 2.0 * rho2_sq)
        return tuple(out)

    def result(self):
        rho1_sq, n1, rho2_sq, n2 = self.fitted_radii()
        return {
            "v0_gsq": self.v0_gsq,
            "rho0": self.rho0,
            "c_l": self.c_l,
            "c_u": self.c_u,
            "max_ball_ratio": self.max_ball_ratio,
            "max_envelope_ratio": self.max_envelope_ratio,
            "absorbing_time": self.absorbing_time,
            "absorbing_entry_n": self.entry_n,
            "restriction_first_n": self.restriction_first,
            "restriction_reviolations": self.restriction_reviolations,
            "rho1_sq": rho1_sq,
            "N1": n1,
            "rho2_sq": rho2_sq,
            "N2": n2,
            "findings": list(self.findings),
        }


class ConsistencyMonitor(Monitor):
    """Consistency gaps after ``window_start`` steps."""

    name = "consistency"

    def __init__(self, window_start=0, every=1):
        super(ConsistencyMonitor, self).__init__(every)
        self.window_start = window_start
        self.gap_l2 = []
        self.gap_h1 = []

    def diagnostic(self, record):
        if record.step < self.window_start:
            return
        l2, h1 = analysis.consistency_gap(record.pair, self.cfg.k)
        self.gap_l2.append(l2)
        self.gap_h1.append(h1)

    def result(self):
        if not self.gap_l2:
            return {"gap_samples": 0}
        tail = self.gap_l2[len(self.gap_l2) // 2:]
        floor = max(tail)
        return {
            "gap_samples": len(self.gap_l2),
            "gap_l2_max": max(self.gap_l2),
            "gap_h1_max": max(self.gap_h1),
            "gap_l2_floor": floor,
            "gap_decay_violations": len(analysis.gap_decay_violations(self.gap_l2, floor)),
            "c_d": max(self.gap_l2) / self.cfg.k,
        }


class CheckpointWriter(Monitor):
    """Writes checkpoint_<step>.v2df every ``every`` steps."""

    name = "checkpoint"

    def __init__(self, directory, every, manifest_text=""):
        super(CheckpointWriter, self).__init__(every)
        self.directory = directory
        self.manifest_text = manifest_text
        self.last_path = None

    def path_for(self, step):
        return os.path.join(self.directory, "checkpoint_{:09d}.v2df".format(step))

    def diagnostic(self, record):
        self.last_path = checkpoint_write(
            self.path_for(record.step), record.pair, record.step, self.manifest_text
        )

    def result(self):
        return self.last_path
