# -*- coding: utf-8 -*-
"""
command-line front end
"""
import argparse
import logging
import sys

from proj_inference.classify import RULES
from proj_inference.config import DEFAULTS, TESTS, ExperimentConfig
from proj_inference.dataio import FORMATS, emit_results, write_binary_matrix
from proj_inference.errors import DataError, NumericalError
from proj_inference.experiments import (GEN_KINDS, REFERENCE_RESULTS, bench_summary, generate, run_bench,
                                        run_classification, run_test, run_tomography)
from proj_inference.measures import DISTANCES


logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


def add_common_args(arg_parser):
    """Flags shared by every command"""

    arg_parser.add_argument(
        "--seed", "-s",
        type=int,
        required=True,
        help="root seed of every random draw (replicate r uses a seed derived from it)"
    )
    arg_parser.add_argument(
        "--out", "-o",
        default=None,
        help="output file, standard output when omitted"
    )
    arg_parser.add_argument(
        "--format",
        choices=FORMATS,
        default='csv',
        help="result record format"
    )
    arg_parser.add_argument(
        "--verbose", "-v",
        action='store_true',
        help="log at DEBUG level"
    )


def add_data_args(arg_parser):
    """Flags describing the generated or loaded data"""

    arg_parser.add_argument("--dim", type=int, help="data dimension d")
    arg_parser.add_argument("--corr", type=float, help="equicorrelation of the correlated class, in [0, 1)")
    arg_parser.add_argument("--gamma", type=float, help="pairwise odds ratio, or first Beta parameter for Poisson-Binomial data")
    arg_parser.add_argument("--gamma2", type=float, help="second Beta parameter for Poisson-Binomial data")
    arg_parser.add_argument("--n-obs", type=int, help="observations per class (classify, gen classes) or per sample")
    arg_parser.add_argument("--input", default=None, help="binary matrix to use instead of generated data")
    arg_parser.add_argument("--has-header", action='store_true', help="the input file starts with a header line")
    arg_parser.add_argument("--has-labels", action='store_true', help="the last input column is an integer class label")


def add_replication_args(arg_parser):
    arg_parser.add_argument("--replicates", type=int, help="number of replicates")
    arg_parser.add_argument("--train-fraction", type=float, help="share of the data used for training")


def _build_arg_parser():
    """Builds the parser for the command line arguments"""

    arg_parser = argparse.ArgumentParser(
        prog='proj-inference',
        description="""
        Classification and hypothesis testing of high-dimensional binary data through low-dimensional
        projections. Every command writes tidy result records (one metric per row).
        """
    )
    sub_parsers = arg_parser.add_subparsers(dest='command', required=True, help="command to run")

    classify_parser = sub_parsers.add_parser('classify', help="projection classifier on two-class binary data")
    add_common_args(classify_parser)
    add_data_args(classify_parser)
    add_replication_args(classify_parser)
    classify_parser.add_argument("--projections", "-k", type=int, nargs='+', help="numbers of random directions (a sweep when several)")
    classify_parser.add_argument("--distance", choices=sorted(DISTANCES), help="distance between projected measures")
    classify_parser.add_argument("--rule", choices=RULES, help="prediction rule")

    tomo_parser = sub_parsers.add_parser('tomo', help="phantom classification from X-ray histograms")
    add_common_args(tomo_parser)
    add_replication_args(tomo_parser)
    tomo_parser.add_argument("--scenario", type=int, choices=(1, 2), help="phantom scenario")
    tomo_parser.add_argument("--images", type=int, help="phantoms per class")
    tomo_parser.add_argument("--projections", "-k", type=int, nargs=1, help="number of X-ray directions")
    tomo_parser.add_argument("--neighbours", "-r", type=int, help="odd number of nearest neighbours per direction")
    tomo_parser.add_argument("--bins", type=int, help="histogram bins per direction")
    tomo_parser.add_argument("--train-images", default=None, help="labelled point lists (image,label,x,y) to train on instead of phantoms")
    tomo_parser.add_argument("--test-images", default=None, help="labelled point lists to classify, given with --train-images")

    test_parser = sub_parsers.add_parser('test', help="projected and sum-based tests on binary data")
    add_common_args(test_parser)
    add_data_args(test_parser)
    test_parser.add_argument("--test", choices=TESTS, help="test to run")
    test_parser.add_argument("--alpha", type=float, help="level in (0, 1]")
    test_parser.add_argument("--mc-reps", type=int, help="Monte Carlo calibration size B")
    test_parser.add_argument("--projections", "-k", type=int, nargs=1, help="number of random directions for averaged tests")
    test_parser.add_argument("--replicates", type=int, help="replicates (tests) or power replicates (sweeps)")
    test_parser.add_argument("--grid", type=float, nargs='+', help="gamma values of a power sweep")

    gen_parser = sub_parsers.add_parser('gen', help="write a synthetic binary matrix")
    add_common_args(gen_parser)
    add_data_args(gen_parser)
    gen_parser.add_argument("--kind", choices=GEN_KINDS, default='independent', help="generating law")
    gen_parser.add_argument("--header", action='store_true', help="write a header line")

    bench_parser = sub_parsers.add_parser('bench', help="desk-scale reproduction of a simulation example")
    add_common_args(bench_parser)
    bench_parser.add_argument("--example", type=int, choices=sorted(REFERENCE_RESULTS), required=True, help="example number")
    bench_parser.add_argument("--scale", type=float, default=DEFAULTS['scale'], help="replicate scale factor in (0, 1]")
    bench_parser.add_argument("--mc-reps", type=int, default=DEFAULTS['mc_reps'], help="Monte Carlo calibration size for example 3")

    return arg_parser


def _config_from_args(args) -> ExperimentConfig:
    """Collect the ExperimentConfig keys present on ``args``; unset flags keep their defaults."""
    params = {}
    for key in DEFAULTS:
        if hasattr(args, key):
            params[key] = getattr(args, key)
    return ExperimentConfig(params)


def cmd_classify(args) -> int:
    emit_results(run_classification(_config_from_args(args)), args.out, args.format)
    return EXIT_OK


def cmd_tomo(args) -> int:
    emit_results(run_tomography(_config_from_args(args)), args.out, args.format)
    return EXIT_OK


def cmd_test(args) -> int:
    emit_results(run_test(_config_from_args(args)), args.out, args.format)
    return EXIT_OK


def cmd_gen(args) -> int:
    sample = generate(_config_from_args(args), args.kind)
    write_binary_matrix(sample, args.out if args.out is not None else sys.stdout, header=args.header)
    return EXIT_OK


def cmd_bench(args) -> int:
    """Run one benchmark, emit its records and write the comparison summary next to them (stderr without --out)."""
    cfg = ExperimentConfig({'seed': args.seed, 'scale': args.scale, 'mc_reps': args.mc_reps})
    records = run_bench(args.example, cfg.scale, cfg.seed, cfg.mc_reps)
    emit_results(records, args.out, args.format)
    summary = bench_summary(args.example, records)
    if args.out is None:
        sys.stderr.write(summary)
    else:
        with open(f"{args.out}.summary.txt", 'w', newline='') as f:
            f.write(summary)
    return EXIT_OK


COMMANDS = {
    'classify': cmd_classify,
    'tomo': cmd_tomo,
    'test': cmd_test,
    'gen': cmd_gen,
    'bench': cmd_bench,
}


def main(argv:list = None) -> int:
    """
    Entry point of ``proj-inference``.

    Returns:
        int: 0 on success, 2 for a configuration error, 3 for a data error, 4 for a numerical failure
    """
    args = _build_arg_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format=LOG_FORMAT)

    try:
        return COMMANDS[args.command](args)
    except DataError as e:
        logger.error("data error: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as e:
        logger.error("numerical failure: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, TypeError) as e:
        logger.error("configuration error: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
