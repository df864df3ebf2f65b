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

"""Exceptions raised by ns2d-bdf2."""


class Ns2dError(Exception):
    """Base class for every error raised by this package."""


class SizeError(Ns2dError):
    """Sample array or grid size does not fit the grid."""


class SymmetryError(Ns2dError):
    """Coefficients are not Hermitian symmetric, the physical field would be complex."""


class MeanZeroViolation(Ns2dError):
    """Operation requires a mean-zero field."""


class ParameterError(Ns2dError):
    """A numerical parameter is outside of its admissible range."""


class GridMismatchError(Ns2dError):
    """Fields living on different grids were combined."""


class DegenerateInputError(Ns2dError):
    """A ratio was requested whose denominator vanishes."""


class NumericalBlowupError(Ns2dError):
    """The time stepper produced non-finite or exploding values."""

    def __init__(self, step, last_checkpoint=None, reason="non-finite values"):
        self.step = step
        self.last_checkpoint = last_checkpoint
        self.reason = reason
        msg = "Numerical blowup at step {}: {}".format(step, reason)
        if last_checkpoint is not None:
            msg += " (last checkpoint: {})".format(last_checkpoint)
        super().__init__(msg)


class ConfigError(Ns2dError):
    """Invalid configuration. ``line`` is 1-based, None for command-line flags."""

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        if line is not None:
            message = "line {}: {}".format(line, message)
        super().__init__(message)


class CheckpointError(Ns2dError):
    """Snapshot or checkpoint does not match the running configuration."""


class CorruptCheckpointError(CheckpointError):
    """Snapshot or checkpoint file is truncated or malformed."""


class InvariantViolation(Ns2dError):
    """A long-run stability invariant failed."""

    def __init__(self, name, step, measured, bound):
        self.name = name
        self.step = step
        self.measured = measured
        self.bound = bound
        super().__init__(
            "{} violated at step {}: {!r} > {!r}".format(name, step, measured, bound)
        )
