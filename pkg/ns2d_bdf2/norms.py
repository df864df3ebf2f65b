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
Sobolev norms, the G(mu) weight on consecutive vorticity pairs and the
constants relating G-norms to the plain L2 norm of a pair.
"""
import logging
import math

import numpy as np

from ns2d_bdf2.exceptions import GridMismatchError, ParameterError
from ns2d_bdf2.spectral import TWO_PI, check_same_grid

log = logging.getLogger(__file__)


class StatePair(object):
    """Two consecutive vorticity levels [older, newer] on one grid."""

    __slots__ = ("older", "newer")

    def __init__(self, older, newer):
        if older.grid != newer.grid:
            raise GridMismatchError(
                "StatePair levels live on {} and {}".format(older.grid, newer.grid)
            )
        self.older = older
        self.newer = newer

    @property
    def grid(self):
        return self.newer.grid

    def advance(self, newest):
        """Pair shifted by one level."""
        return StatePair(self.newer, newest)

    def __iter__(self):
        return iter((self.older, self.newer))

    def __repr__(self):
        return "StatePair({!r}, {!r})".format(self.older, self.newer)


class GWeight(object):
    """The matrix G(mu) = [[1/2, -1], [-1, 5/2 + mu/2]]."""

    def __init__(self, mu=0.0):
        if not mu >= 0:
            raise ParameterError("G(mu) needs mu >= 0, got {!r}".format(mu))
        self.mu = float(mu)

    @property
    def a11(self):
        return 0.5

    @property
    def a12(self):
        return -1.0

    @property
    def a22(self):
        return 2.5 + 0.5 * self.mu

    @property
    def matrix(self):
        return np.array([[self.a11, self.a12], [self.a12, self.a22]])

    @property
    def trace(self):
        return self.a11 + self.a22

    @property
    def det(self):
        return self.a11 * self.a22 - self.a12 ** 2

    def eigenvalues(self):
        """(lambda_min, lambda_max) in closed form."""
        disc = math.sqrt(self.trace ** 2 - 4.0 * self.det)
        return 0.5 * (self.trace - disc), 0.5 * (self.trace + disc)

    @property
    def lambda_min(self):
        return self.eigenvalues()[0]

    @property
    def lambda_max(self):
        return self.eigenvalues()[1]

    def is_positive_definite(self):
        return self.det > 0 and self.trace > 0

    def quadratic_form(self, vector):
        v = np.asarray(vector, dtype=np.float64)
        return float(v @ self.matrix @ v)

    def __repr__(self):
        return "GWeight(mu={!r})".format(self.mu)


def _weighted_inner(f, g, s=0):
    check_same_grid(f, g)
    weight = f.grid.ksq_power(s)
    return TWO_PI ** 2 * float(np.sum(weight * (f.coeffs * np.conj(g.coeffs)).real))


def sobolev_norm(field, s=0):
    """
    Homogeneous Sobolev norm 2pi (sum |kappa|^(2s) |c|^2)^(1/2).

    s=0 is the continuum L2 norm, s=1 the L2 norm of the gradient, s=2 the
    L2 norm of the Laplacian and s=-1 the dual H^-1 norm.
    """
    return math.sqrt(max(_weighted_inner(field, field, s), 0.0))


def pair_l2_norm_sq(pair, s=0):
    return _weighted_inner(pair.older, pair.older, s) + _weighted_inner(pair.newer, pair.newer, s)


def g_norm_sq(pair, g, s=0):
    """
    ||V||^2_G(mu) of the pair, optionally of its s-th Sobolev derivative,
    e.g. s=1 gives ||grad V||^2_G and s=2 gives ||lap V||^2_G.
    """
    older, newer = pair
    return (
        g.a11 * _weighted_inner(older, older, s)
        + 2.0 * g.a12 * _weighted_inner(older, newer, s)
        + g.a22 * _weighted_inner(newer, newer, s)
    )


def g_equivalence_constants(mu_max):
    """
    (C_l, C_u) with C_l ||V||^2_G(mu) <= ||V||^2 <= C_u ||V||^2_G(mu)
    for every mu in [0, mu_max].
    """
    if not 0.0 <= mu_max <= 1.0:
        raise ParameterError("mu_max must be in [0, 1], got {!r}".format(mu_max))
    c_u = 1.0 / GWeight(0.0).lambda_min
    c_l = 1.0 / GWeight(mu_max).lambda_max
    return c_l, c_u


def g_identity_residual(v0, v1, v2, mu):
    """
    LHS minus RHS of the generalized BDF2 G-stability identity

        ((3/2 v2 - 2 v1 + 1/2 v0), v2) + mu/2 ||v2||^2
          = 1/2 (||V1||^2_G(mu) - ||V0||^2_G(mu) / (1 + mu))
            + ||(1 + mu) v2 - 2 v1 + v0||^2 / (4 (1 + mu))

    with V0 = [v0, v1] and V1 = [v1, v2]. Vanishes up to rounding.
    """
    check_same_grid(v0, v1, v2)
    g = GWeight(mu)
    lhs = _weighted_inner(1.5 * v2 - 2.0 * v1 + 0.5 * v0, v2) + 0.5 * mu * _weighted_inner(v2, v2)
    jump = (1.0 + mu) * v2 - 2.0 * v1 + v0
    rhs = 0.5 * (
        g_norm_sq(StatePair(v1, v2), g) - g_norm_sq(StatePair(v0, v1), g) / (1.0 + mu)
    ) + _weighted_inner(jump, jump) / (4.0 * (1.0 + mu))
    return lhs - rhs
