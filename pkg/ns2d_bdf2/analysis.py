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
Long-time bound machinery: absorbing radius and envelopes, the two-step
discrete Gronwall bound, consistency gaps and the statistical energy balance.
"""
import logging
import math

import numpy as np

from ns2d_bdf2.averaging import Estimate, ExactSum, bootstrap_interval
from ns2d_bdf2.exceptions import ParameterError
from ns2d_bdf2.norms import sobolev_norm
from ns2d_bdf2.spectral import inner_product

log = logging.getLogger(__file__)


def rho0(f_inf_hminus1, nu):
    """Absorbing radius 2 |f|_inf / nu."""
    if not nu > 0:
        raise ParameterError("nu must be > 0, got {!r}".format(nu))
    if f_inf_hminus1 < 0:
        raise ParameterError("forcing norm must be >= 0, got {!r}".format(f_inf_hminus1))
    return 2.0 * f_inf_hminus1 / nu


def _decay_factor(n, nu, k):
    """(1 + nu k)^(-n) and 1 - (1 + nu k)^(-n), accurate for small nu k."""
    rate = np.asarray(n, dtype=np.float64) * math.log1p(nu * k)
    return np.exp(-rate), -np.expm1(-rate)


def l2_envelope(n, nu, k, V0_gsq, rho0):
    """(1+nu k)^(-n) ||V_0||^2_G + rho_0^2 (1 - (1+nu k)^(-n)); n may be an array."""
    if np.any(np.asarray(n) < 0):
        raise ParameterError("n must be >= 0")
    if nu * k > 1.0:
        raise ParameterError("envelope assumes nu*k <= 1, got {!r}".format(nu * k))
    decay, fill = _decay_factor(n, nu, k)
    out = decay * V0_gsq + rho0 ** 2 * fill
    return float(out) if np.ndim(out) == 0 else out


def absorbing_time(V0_gnorm, rho0, nu):
    """max(0, (4/nu) ln(||V_0||_G / rho_0))."""
    if not (V0_gnorm > 0 and rho0 > 0 and nu > 0):
        raise ParameterError(
            "absorbing_time needs positive inputs, got {!r}, {!r}, {!r}".format(V0_gnorm, rho0, nu)
        )
    return max(0.0, 4.0 / nu * math.log(V0_gnorm / rho0))


def burn_in_steps(T0, k, margin=0.2):
    """ceil(T_0 / k) plus ``margin``."""
    return int(math.ceil(math.ceil(T0 / k) * (1.0 + margin)))


#
# Two-step discrete Gronwall
#


def _gronwall_gamma(eps):
    return (1.0 + 0.5 * eps) / (1.0 + eps)


def _check_gronwall(eps, beta, lam=None):
    if not eps > 0:
        raise ParameterError("eps must be > 0, got {!r}".format(eps))
    if not beta > 0:
        raise ParameterError("beta must be > 0, got {!r}".format(beta))
    if lam is not None and not 0.0 < lam < 1.0:
        raise ParameterError("lambda must be in (0, 1), got {!r}".format(lam))


def gronwall_one_step_bound(g_prev, g_cur, eps, beta):
    """gamma max(g^n, g^{n-1}, 2 beta) bounds g^{n+1}."""
    _check_gronwall(eps, beta)
    return _gronwall_gamma(eps) * max(g_cur, g_prev, 2.0 * beta)


def gronwall_two_step_bound(g1, g2, eps, beta, lam, n):
    """
    Bound on g^{n+1}, n >= 2, for every non-negative sequence with
    (1 + eps) g^{n+1} <= lam g^n + (1 - lam) g^{n-1} + beta eps.

    The initial data contracts once per two steps, so the exponent is
    floor((n - 2) / 2).
    """
    _check_gronwall(eps, beta, lam)
    if int(n) != n or n < 2:
        raise ParameterError("n must be an integer >= 2, got {!r}".format(n))
    if g1 < 0 or g2 < 0:
        raise ParameterError("g1, g2 must be >= 0")
    gamma = _gronwall_gamma(eps)
    contraction = gamma ** ((int(n) - 2) // 2)
    return gamma * max(contraction * g2, contraction * g1, 2.0 * beta)


def gronwall_iterate(g1, g2, eps, beta, lam, n):
    """
    Worst-case sequence, the recursion taken with equality. Returns
    [g^1, ..., g^{n+1}].
    """
    _check_gronwall(eps, beta, lam)
    g = [float(g1), float(g2)]
    for _ in range(2, int(n) + 1):
        g.append((lam * g[-1] + (1.0 - lam) * g[-2] + beta * eps) / (1.0 + eps))
    return np.array(g[: int(n) + 1])


def gronwall_beta(rho0, c_l, lam):
    """beta = (1 + lam) rho_0^2 / C_l."""
    return (1.0 + lam) * rho0 ** 2 / c_l


def gronwall_eps(nu, c_l, lam, k):
    """eps = nu C_l lam k."""
    return nu * c_l * lam * k


def step_restriction_holds(g_cur, g_prev, beta, cw, k, nu):
    """32 C_w^2 max(g^n, g^{n-1}, 2 beta) k <= nu."""
    return 32.0 * cw ** 2 * max(g_cur, g_prev, 2.0 * beta) * k <= nu


#
# Consistency and energy balance
#


def consistency_gap(pair, k):
    """(||w^{n+1} - w^n||, sqrt(k) ||grad(w^{n+1} - w^n)||)."""
    diff = pair.newer - pair.older
    return sobolev_norm(diff, 0), math.sqrt(k) * sobolev_norm(diff, 1)


def gap_decay_violations(gaps, floor):
    """Indices n with gap^n > (1/3)^n gap^0 + floor."""
    gaps = np.asarray(gaps, dtype=np.float64)
    if gaps.size == 0:
        return []
    bound = gaps[0] * (1.0 / 3.0) ** np.arange(gaps.size) + floor
    return [int(i) for i in np.nonzero(gaps > bound)[0]]


def energy_balance_integrand(omega, f, nu):
    """nu ||grad w||^2 - (f, w)."""
    return nu * sobolev_norm(omega, 1) ** 2 - inner_product(f, omega)


def energy_balance_residual(series, nu, batch_size=100, confidence=0.95, seed=0):
    """
    Time average of nu ||grad w^n||^2 - (f, w^n) over a post-transient window
    of (||grad w^n||^2, (f, w^n)) samples, with a bootstrap interval.
    """
    series = list(series)
    if not series:
        raise ParameterError("energy balance needs at least one sample")
    values = [nu * grad_sq - forcing for grad_sq, forcing in series]
    total = ExactSum(values)
    mean = total.value() / len(values)
    low, high = bootstrap_interval(values, batch_size, confidence, seed)
    return Estimate(mean, low, high)


#
# Fitted envelopes for the gradient and Laplacian G-norms
#


def fit_envelope_radius(series, nu, k, n0):
    """
    Smallest rho^2 such that
    s_n <= (1+nu k)^-(n-n0) s_{n0} + rho^2 (1 - (1+nu k)^-(n-n0)) for n > n0,
    where ``series[n]`` is s_n.
    """
    series = np.asarray(series, dtype=np.float64)
    if series.size <= n0 + 1:
        raise ParameterError("series needs more than {} entries".format(n0 + 1))
    n = np.arange(n0 + 1, series.size)
    decay, fill = _decay_factor(n - n0, nu, k)
    needed = (series[n0 + 1:] - decay * series[n0]) / fill
    return max(0.0, float(needed.max()))


def entry_index(series, level):
    """First index after which the series stays <= level, None if it ends above."""
    series = np.asarray(series, dtype=np.float64)
    above = np.nonzero(series > level)[0]
    if above.size == 0:
        return 0
    last = int(above[-1])
    return None if last == series.size - 1 else last + 1
