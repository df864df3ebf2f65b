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
Exactly rounded running sums and bootstrap intervals for time averages.

ExactSum keeps the sum as a list of non-overlapping partials (Shewchuk's
algorithm, the one behind math.fsum), so the represented value is exact and
merging two sums is equivalent to summing the concatenated samples.
"""
import logging
import math

import numpy as np
from scipy import stats

log = logging.getLogger(__file__)


class ExactSum(object):
    """Running floating point sum without rounding error."""

    __slots__ = ("_partials",)

    def __init__(self, values=()):
        self._partials = []
        for value in values:
            self.add(value)

    def add(self, x):
        x = float(x)
        partials = self._partials
        i = 0
        for y in partials:
            if abs(x) < abs(y):
                x, y = y, x
            hi = x + y
            lo = y - (hi - x)
            if lo:
                partials[i] = lo
                i += 1
            x = hi
        partials[i:] = [x]

    def merge(self, other):
        for partial in other._partials:
            self.add(partial)
        return self

    def value(self):
        return math.fsum(self._partials)

    def copy(self):
        out = ExactSum()
        out._partials = list(self._partials)
        return out

    def __float__(self):
        return self.value()

    def __repr__(self):
        return "ExactSum({!r})".format(self.value())


class Estimate(object):
    """A time average and its confidence interval."""

    __slots__ = ("mean", "low", "high")

    def __init__(self, mean, low, high):
        self.mean = mean
        self.low = low
        self.high = high

    @property
    def half_width(self):
        if math.isnan(self.low) or math.isnan(self.high):
            return float("nan")
        return 0.5 * (self.high - self.low)

    def __float__(self):
        return float(self.mean)

    def __repr__(self):
        return "Estimate({:.6g} [{:.6g}, {:.6g}])".format(self.mean, self.low, self.high)


def batch_means(values, batch_size):
    """Means of consecutive complete batches, the trailing partial batch dropped."""
    values = np.asarray(values, dtype=np.float64)
    count = values.size // batch_size
    if count == 0:
        return np.empty(0)
    return values[: count * batch_size].reshape(count, batch_size).mean(axis=1)


def bootstrap_interval_of_means(means, confidence=0.95, seed=0):
    """Percentile bootstrap interval for the mean of (batch) means."""
    means = np.asarray(means, dtype=np.float64)
    if means.size < 2:
        log.debug("bootstrap skipped, %d batch means", means.size)
        return float("nan"), float("nan")
    if np.all(means == means[0]):
        return float(means[0]), float(means[0])
    result = stats.bootstrap(
        (means,),
        np.mean,
        confidence_level=confidence,
        method="percentile",
        random_state=np.random.default_rng(seed),
    )
    return float(result.confidence_interval.low), float(result.confidence_interval.high)


def bootstrap_interval(values, batch_size=100, confidence=0.95, seed=0):
    """Confidence interval of the mean of a correlated series via batch means."""
    return bootstrap_interval_of_means(batch_means(values, batch_size), confidence, seed)
