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
Observables of the vorticity state and their long-time averages.

All accumulation goes through averaging.ExactSum, so means and variances
are reproducible from the sums bit for bit and accumulators over disjoint
windows merge exactly.
"""
import logging
from collections import OrderedDict

import numpy as np

from ns2d_bdf2.analysis import consistency_gap, energy_balance_integrand
from ns2d_bdf2.averaging import Estimate, ExactSum, bootstrap_interval_of_means
from ns2d_bdf2.exceptions import ParameterError
from ns2d_bdf2.norms import sobolev_norm
from ns2d_bdf2.spectral import TWO_PI

log = logging.getLogger(__file__)

SCALAR_OBSERVABLES = ("energy", "enstrophy", "palinstrophy", "gap_l2", "gap_h1", "balance")


def mode_projection_names(basis_modes):
    names = []
    for a, b in basis_modes:
        names.append("cos_{}_{}".format(a, b))
        names.append("sin_{}_{}".format(a, b))
    return names


def mode_projections(omega, basis_modes):
    """(omega, cos(a x + b y)) and (omega, sin(a x + b y)) for every (a, b)."""
    grid = omega.grid
    out = OrderedDict()
    for a, b in basis_modes:
        if max(abs(a), abs(b)) >= grid.N // 2:
            raise ParameterError("basis mode ({}, {}) does not fit on {}".format(a, b, grid))
        c = omega.coeffs[grid.index_of(a, b)]
        out["cos_{}_{}".format(a, b)] = TWO_PI ** 2 * c.real
        out["sin_{}_{}".format(a, b)] = -TWO_PI ** 2 * c.imag
    return out


class ObservationRow(object):
    """Observables of one recorded step."""

    __slots__ = (
        "step",
        "t",
        "energy",
        "enstrophy",
        "palinstrophy",
        "gap_l2",
        "gap_h1",
        "balance",
        "projections",
    )

    def __init__(self, step, t, energy, enstrophy, palinstrophy, gap_l2, gap_h1, balance,
                 projections=None):
        self.step = step
        self.t = t
        self.energy = energy
        self.enstrophy = enstrophy
        self.palinstrophy = palinstrophy
        self.gap_l2 = gap_l2
        self.gap_h1 = gap_h1
        self.balance = balance
        self.projections = projections if projections is not None else OrderedDict()

    def scalars(self):
        out = OrderedDict((name, getattr(self, name)) for name in SCALAR_OBSERVABLES)
        out.update(self.projections)
        return out

    def as_dict(self):
        out = OrderedDict([("step", self.step), ("t", self.t)])
        out.update(self.scalars())
        return out

    def __repr__(self):
        return "ObservationRow(step={}, enstrophy={:.6g})".format(self.step, self.enstrophy)


def observe(state, psi, f, nu, k, step=0, basis_modes=()):
    """Observables of the newer level of ``state``."""
    omega = state.newer
    gap_l2, gap_h1 = consistency_gap(state, k)
    return ObservationRow(
        step=step,
        t=step * k,
        energy=0.5 * sobolev_norm(psi, 1) ** 2,
        enstrophy=0.5 * sobolev_norm(omega, 0) ** 2,
        palinstrophy=0.5 * sobolev_norm(omega, 1) ** 2,
        gap_l2=gap_l2,
        gap_h1=gap_h1,
        balance=energy_balance_integrand(omega, f, nu),
        projections=mode_projections(omega, basis_modes),
    )


def shell_index(grid):
    return np.rint(np.sqrt(grid.ksq)).astype(np.int64)


def shell_spectrum(omega, kind="enstrophy"):
    """
    (kappa, content) binned on integer shells kappa = rint(|k|). Shells sum
    to the enstrophy 1/2 ||w||^2, or to the energy 1/2 ||grad psi||^2 for
    ``kind="energy"``.
    """
    grid = omega.grid
    density = 0.5 * TWO_PI ** 2 * np.abs(omega.coeffs) ** 2
    if kind == "energy":
        density = density * grid.inv_ksq
    elif kind != "enstrophy":
        raise ParameterError("unknown spectrum kind {!r}".format(kind))
    kappa = shell_index(grid)
    values = np.bincount(kappa.ravel(), weights=density.ravel())
    return np.arange(values.size), values


class StatsAccumulator(object):
    """
    Running time averages of the registered observables.

    Samples with step < burn_in_steps are ignored. For bootstrap intervals
    the samples are grouped into blocks by absolute step: sample ``step``
    belongs to block ``(step // stride) // batch_size``, where ``stride`` is
    the step distance between samples. Only complete blocks give a batch
    mean, so a run split into disjoint windows and merged back has the same
    batch means as the uninterrupted run, whatever the record order.
    """

    def __init__(self, burn_in_steps=0, names=SCALAR_OBSERVABLES, batch_size=100, stride=1):
        if burn_in_steps < 0:
            raise ParameterError("burn_in_steps must be >= 0, got {!r}".format(burn_in_steps))
        if batch_size < 1:
            raise ParameterError("batch_size must be >= 1, got {!r}".format(batch_size))
        if stride < 1:
            raise ParameterError("stride must be >= 1, got {!r}".format(stride))
        self.burn_in_steps = int(burn_in_steps)
        self.batch_size = int(batch_size)
        self.stride = int(stride)
        self.names = list(names)
        self.count = 0
        self.sums = {name: ExactSum() for name in self.names}
        self.squares = {name: ExactSum() for name in self.names}
        # block key -> [count, {name: ExactSum}] until the block is full
        self._open = {}
        # block key -> {name: mean}
        self._closed = {}
        self.spectrum_count = 0
        self.spectrum_sums = []

    def _block_key(self, step):
        return (int(step) // self.stride) // self.batch_size

    def _add_to_block(self, key, count, partials):
        if key in self._closed:
            raise ParameterError("block {} already holds {} samples".format(key, self.batch_size))
        block = self._open.setdefault(key, [0, {name: ExactSum() for name in self.names}])
        block[0] += count
        for name in self.names:
            block[1][name].merge(partials[name])
        if block[0] > self.batch_size:
            raise ParameterError(
                "block {} got {} samples, check that stride {} matches the sampling".format(
                    key, block[0], self.stride
                )
            )
        if block[0] == self.batch_size:
            del self._open[key]
            self._closed[key] = {
                name: block[1][name].value() / self.batch_size for name in self.names
            }

    @property
    def batch_means(self):
        """Means of the complete blocks, in step order."""
        keys = sorted(self._closed)
        return {name: [self._closed[key][name] for key in keys] for name in self.names}

    def record(self, row):
        """Add an ObservationRow (or any object with ``step`` and ``scalars()``)."""
        if row.step < self.burn_in_steps:
            return False
        values = row.scalars()
        self._add_to_block(
            self._block_key(row.step), 1, {name: ExactSum((values[name],)) for name in self.names}
        )
        for name in self.names:
            x = values[name]
            self.sums[name].add(x)
            self.squares[name].add(x * x)
        self.count += 1
        return True

    def record_spectrum(self, step, values):
        if step < self.burn_in_steps:
            return False
        for kappa, value in enumerate(values):
            if kappa == len(self.spectrum_sums):
                self.spectrum_sums.append(ExactSum())
            self.spectrum_sums[kappa].add(value)
        self.spectrum_count += 1
        return True

    def mean(self, name):
        if self.count == 0:
            return float("nan")
        return self.sums[name].value() / self.count

    def variance(self, name):
        """Sample variance from the exact sums of x and x^2."""
        if self.count < 2:
            return float("nan")
        s1 = self.sums[name].value()
        s2 = self.squares[name].value()
        return max(s2 - s1 * s1 / self.count, 0.0) / (self.count - 1)

    def estimate(self, name, confidence=0.95, seed=0):
        low, high = bootstrap_interval_of_means(self.batch_means[name], confidence, seed)
        return Estimate(self.mean(name), low, high)

    def mean_spectrum(self):
        if self.spectrum_count == 0:
            return np.empty(0)
        return np.array([s.value() / self.spectrum_count for s in self.spectrum_sums])

    def merge(self, other):
        """
        Fold in an accumulator over a disjoint window. Blocks cut by the
        window boundary are completed from both halves.
        """
        if other.names != self.names:
            raise ParameterError("cannot merge accumulators over different observables")
        if (other.batch_size, other.stride) != (self.batch_size, self.stride):
            raise ParameterError(
                "cannot merge batch_size/stride {}/{} into {}/{}".format(
                    other.batch_size, other.stride, self.batch_size, self.stride
                )
            )
        for name in self.names:
            self.sums[name].merge(other.sums[name])
            self.squares[name].merge(other.squares[name])
        for key, means in other._closed.items():
            if key in self._closed or key in self._open:
                raise ParameterError("block {} is covered by both accumulators".format(key))
            self._closed[key] = dict(means)
        for key, (count, partials) in other._open.items():
            self._add_to_block(key, count, partials)
        self.count += other.count
        for kappa, partial in enumerate(other.spectrum_sums):
            if kappa == len(self.spectrum_sums):
                self.spectrum_sums.append(ExactSum())
            self.spectrum_sums[kappa].merge(partial)
        self.spectrum_count += other.spectrum_count
        return self

    def summary(self, confidence=0.95, seed=0):
        """Flat key=value style mapping of means, variances and intervals."""
        out = OrderedDict([("samples", self.count), ("burn_in_steps", self.burn_in_steps)])
        for name in self.names:
            est = self.estimate(name, confidence, seed)
            out["{}_mean".format(name)] = est.mean
            out["{}_var".format(name)] = self.variance(name)
            out["{}_ci_low".format(name)] = est.low
            out["{}_ci_high".format(name)] = est.high
        return out
