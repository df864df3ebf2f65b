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

"""Command line front-end: ns2d-bdf2 <subcommand> [--config FILE] [--<key> VALUE ...]."""
import argparse
import logging
import sys
import traceback

from ns2d_bdf2 import __version__, api
from ns2d_bdf2.config import KEYS, load_config
from ns2d_bdf2.exceptions import ConfigError, InvariantViolation, Ns2dError, NumericalBlowupError

log = logging.getLogger(__file__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(filename)s:%(lineno)d %(message)s"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_INVARIANT = 4


def _int_list(text):
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma separated integers, got {!r}".format(text))


def _add_common(parser):
    parser.add_argument("--config", metavar="FILE", help="key = value configuration file")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    group = parser.add_argument_group("configuration keys (override the file)")
    for key in KEYS.values():
        group.add_argument(key.flag, dest="key_" + key.name, metavar="VALUE", default=None,
                           help="default {!r}".format(key.default))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ns2d-bdf2",
        description="2D Navier-Stokes on the periodic box with a BDF2 IMEX scheme",
    )
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("run", help="single run with time series, spectra and checkpoints")
    p.add_argument("--resume", metavar="CHECKPOINT", help="continue from a checkpoint file")
    _add_common(p)

    p = sub.add_parser("soak", help="long run with the stability invariants armed")
    p.add_argument("--resume", metavar="CHECKPOINT", help="continue from a checkpoint file")
    _add_common(p)

    p = sub.add_parser("scan", help="STABLE/BLOWUP table over scan_nu x scan_k")
    _add_common(p)

    p = sub.add_parser("converge", help="temporal order study over converge_k")
    p.add_argument("--all-schemes", action="store_true",
                   help="galerkin, collocation and gear instead of the configured nonlinearity")
    _add_common(p)

    p = sub.add_parser("analyze", help="statistics, energy balance and envelope of a run directory")
    p.add_argument("directory", help="run directory with manifest.txt and timeseries.csv")
    p.add_argument("--compare", metavar="DIRECTORY", help="second run directory to diff against")
    p.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    p = sub.add_parser("wente-probe", help="empirical constants of the five Wente estimates")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--grid-sizes", type=_int_list, default=None, metavar="N1,N2,...")
    p.add_argument("--kmax", type=float, default=None,
                   help="fixed wavenumber band, default N/3 at each grid size")
    _add_common(p)

    p = sub.add_parser("stat-converge", help="time averages across k at a fixed horizon")
    _add_common(p)
    return parser


def _overrides(args):
    return {
        name: getattr(args, "key_" + name)
        for name in KEYS
        if getattr(args, "key_" + name, None) is not None
    }


def dispatch(args):
    if args.command == "analyze":
        summary = api.analyze(args.directory, args.compare)
        failed = [key for key, value in summary.items() if key.endswith("_pass") and value == "FAIL"]
        if failed:
            log.warning("analysis failed: %s", ", ".join(failed))
            return EXIT_INVARIANT
        return EXIT_OK

    rc = load_config(args.config, _overrides(args))
    if args.command == "run":
        api.run_experiment(rc, resume_path=args.resume)
    elif args.command == "soak":
        api.soak(rc, resume_path=args.resume)
    elif args.command == "scan":
        api.scan(rc)
    elif args.command == "converge":
        api.converge(rc, ["galerkin", "collocation", "gear"] if args.all_schemes else None)
    elif args.command == "wente-probe":
        api.wente_probe(rc, grid_sizes=args.grid_sizes, samples=args.samples,
                        kmax=args.kmax)
    elif args.command == "stat-converge":
        report = api.stat_converge(rc)
        if not report.ok:
            log.warning("stationary statistics did not converge: %r", report)
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stdout, level=getattr(logging, args.log_level), format=LOG_FORMAT)
    try:
        return dispatch(args)
    except ConfigError as err:
        log.error("configuration error: %s", err)
        return EXIT_CONFIG
    except NumericalBlowupError as err:
        log.error("%s", err)
        return EXIT_BLOWUP
    except InvariantViolation as err:
        log.error("%s", err)
        return EXIT_INVARIANT
    except Ns2dError:
        log.error("run failed: %s", traceback.format_exc())
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
