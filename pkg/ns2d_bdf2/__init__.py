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

"""ns2d-bdf2 package."""
__version__ = "0.1.0"

from ns2d_bdf2.solver import RunReport, run  # noqa
from ns2d_bdf2.timestepper import SolverConfig  # noqa

__all__ = ("RunReport", "SolverConfig", "run", "__version__")
