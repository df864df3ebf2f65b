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
import os
from collections import OrderedDict

from ns2d_bdf2.nonlinear import WenteVariant, estimate_wente_constant

from .util import WENTE_COLUMNS, WENTE_CSV, ensure_dir, write_csv

log = logging.getLogger(__file__)


def wente_probe(rc, grid_sizes=None, samples=1000, variants=None, kmax=None):
    """
    Sample supremum of every Wente ratio at each N, written to wente.csv.
    Without ``kmax`` the sampled band grows with N.
    """
    out_dir = ensure_dir(rc.out_dir)
    rc.write_manifest(out_dir)
    rows = []
    for variant in variants or list(WenteVariant):
        variant = WenteVariant(variant)
        for N in grid_sizes or [rc.N]:
            best = estimate_wente_constant(variant, N, samples=samples, seed=rc.seed, slope=rc.ic_slope,
                                          kmax=kmax)
            rows.append(
                OrderedDict([("variant", variant.value), ("N", N), ("kmax", "" if kmax is None else kmax),
                             ("samples", samples), ("max_ratio", best)])
            )
    write_csv(os.path.join(out_dir, WENTE_CSV), WENTE_COLUMNS, rows)
    return rows


def relative_spread(rows):
    """{variant: max/min - 1 of max_ratio over the probed N}."""
    by_variant = OrderedDict()
    for row in rows:
        by_variant.setdefault(row["variant"], []).append(float(row["max_ratio"]))
    return OrderedDict((v, max(r) / min(r) - 1.0) for v, r in by_variant.items() if min(r) > 0)
