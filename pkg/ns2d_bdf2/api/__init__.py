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

from .analyze import analyze # noqa
from .converge import converge # noqa
from .run_experiment import run_experiment # noqa
from .scan import scan # noqa
from .soak import soak # noqa
from .stationary import stat_converge, stationary_stat_convergence # noqa
from .wente_probe import wente_probe # noqa
