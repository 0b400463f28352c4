# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

import argparse
import logging
import sys
from pathlib import Path
from typing import List

from ..const import DEFAULT_SEED, DEFAULT_WINDOW, Color
from ..err import AInfinityError, InvalidData
from ..selftest import CASES
from .main import (biderivative, check_input, coproduct, cup_table, faces,
                   relations, selftest)
from .model import (CheckOptions, CommandConfig, FacesOptions,
                    RelationsOptions, SelfTestOptions)

logger = logging.getLogger("Main")


def main(raw_args: List[str]) -> int:
    # Options shared by every command
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-N", "--window", type=int, default=DEFAULT_WINDOW,
                        help="arity window: monomials with |x| or |y| above N are dropped")
    common.add_argument("--format", choices=["text", "json"], default="text",
                        help="output format")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed for randomized steps")
    common.add_argument("--diagonal", default=None,
                        help="JSON table with diagonal values on higher faces")
    common.add_argument("-o", "--output", default=None,
                        help="where to write the result (defaults to stdout)")

    # Add main options
    parser = argparse.ArgumentParser(prog="python3 -m ainfinity.cli")
    parser.add_argument("-v", "--verbose", action="store_true")
    subparsers = parser.add_subparsers()

    # Add faces options
    faces_parser = subparsers.add_parser("faces", parents=[common],
                                         help="lists the faces of a permutahedron")
    faces_parser.set_defaults(opt=0)
    faces_parser.add_argument("n", type=int, help="index of the permutahedron P_n")
    faces_parser.add_argument("--dim", type=int, default=None,
                              help="only list faces of this dimension")

    # Add coproduct options
    coproduct_parser = subparsers.add_parser("coproduct", parents=[common],
                                             help="computes the level coproduct of faces")
    coproduct_parser.set_defaults(opt=1)
    coproduct_parser.add_argument("faces", nargs="+",
                                  help="faces like 24|1|3; '-' reads one face per line from stdin")

    # Add cup options
    cup_parser = subparsers.add_parser("cup", parents=[common],
                                       help="prints the level cup series of the coderivation "
                                            "cochain of ω")
    cup_parser.set_defaults(opt=2)
    cup_parser.add_argument("omega", help="JSON file declaring the generators of ω")

    # Add biderivative options
    bider_parser = subparsers.add_parser("biderivative", parents=[common],
                                         help="computes d_ω within the arity window")
    bider_parser.set_defaults(opt=3)
    bider_parser.add_argument("omega", help="JSON file declaring the generators of ω")
    bider_parser.add_argument("--expansion", action="store_true",
                              help="also print the unprojected evaluation")

    # Add relations options
    relations_parser = subparsers.add_parser("relations", parents=[common],
                                             help="extracts structure relations from ω⊛ω")
    relations_parser.set_defaults(opt=4)
    relations_parser.add_argument("--bidegree", default=None,
                                  help="only the relation in bidegree j,i")
    relations_parser.add_argument("--omega", default=None,
                                  help="JSON file declaring ω (default: all ω^{j,i} in the window)")

    # Add check options
    check_parser = subparsers.add_parser("check", parents=[common],
                                         help="checks ω⊛ω = 0 on concrete matrices")
    check_parser.set_defaults(opt=5)
    check_parser.add_argument("input", help="bialgebra input JSON file or a built-in name")
    check_parser.add_argument("--perturb", default=None, metavar="OPERATION",
                              help="randomly perturb one entry of this operation first")

    # Add selftest options
    selftest_parser = subparsers.add_parser("selftest", parents=[common],
                                            help="replays the worked examples")
    selftest_parser.set_defaults(opt=6)
    selftest_parser.add_argument("cases", nargs="*",
                                 help=f"cases to run (default: all of {', '.join(CASES)})")

    # Parse arguments
    args = parser.parse_args(raw_args)
    if not hasattr(args, "opt"):
        args.opt = -1

    # Enable verbose mode
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format=f"{Color.BLUE}%(relativeCreated) 6d ms [%(levelname)s] {Color.BOLD}%(name)s"
               f"{Color.NON_BOLD}:{Color.RESET} %(message)s",
    )

    if args.opt == -1:
        parser.print_usage()
        return 2

    # Launch the requested command
    cfg = CommandConfig.from_namespace(args)
    try:
        if args.opt == 0:
            return faces(cfg, FacesOptions.from_namespace(args))
        elif args.opt == 1:
            return coproduct(cfg, args.faces)
        elif args.opt == 2:
            return cup_table(cfg, Path(args.omega))
        elif args.opt == 3:
            return biderivative(cfg, Path(args.omega), args.expansion)
        elif args.opt == 4:
            return relations(cfg, RelationsOptions.from_namespace(args))
        elif args.opt == 5:
            return check_input(cfg, CheckOptions.from_namespace(args))
        else:
            return selftest(cfg, SelfTestOptions.from_namespace(args))
    except (InvalidData, OSError) as e:
        logger.error(str(e))
        return 2
    except AInfinityError as e:
        logger.error(str(e))
        return 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
