"""
Main entry point for the two-phase hydrogen/water flow simulator
"""
import argparse
import logging
import os
import sys

from config import settings
from config.schemas import load_config
from simulation.benchmarks import benchmark_heterogeneous, benchmark_momas
from simulation.simulator import SimulationAborted, Simulator
from simulation.sweep import DEFAULT_METHODS, compare_methods
from solvers.registry import registry


def setup_logging():
    """Configure logging"""
    log_dir = os.path.dirname(settings.LOG_FILE)
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(settings.LOG_FILE),
            logging.StreamHandler()
        ]
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Two-phase hydrogen/water flow simulator')
    subparsers = parser.add_subparsers(dest='command', required=True)

    run_parser = subparsers.add_parser('run', help='Run a JSON simulation config')
    run_parser.add_argument('config', type=str, help='Path to the config file')
    run_parser.add_argument(
        '--method',
        type=str,
        choices=registry.list_all(),
        help='Override the config complementarity method'
    )

    bench_parser = subparsers.add_parser('bench', help='Run a benchmark case')
    bench_sub = bench_parser.add_subparsers(dest='case', required=True)

    momas = bench_sub.add_parser('momas', help='Quasi-1D hydrogen injection')
    momas.add_argument('--pr', type=float, default=2e6, help='Entry pressure P_r (2e6 or 2e3)')
    momas.add_argument('--cells', type=int, default=200, help='Cells along x (200 or 400)')
    momas.add_argument('--method', type=str, choices=registry.list_all(), default='sfb')
    momas.add_argument('--end-years', type=float, default=None, help='End time in years')

    hetero = bench_sub.add_parser('hetero', help='Heterogeneous 2D/3D injection')
    hetero.add_argument('--dim', type=int, choices=[2, 3], default=2)
    hetero.add_argument('--perm', type=str, default=None, help='Permeability raster file')
    hetero.add_argument('--seed', type=int, default=None, help='Seed of a synthetic field')
    hetero.add_argument('--scale', type=int, default=1, help='Coarsening factor')
    hetero.add_argument('--method', type=str, choices=registry.list_all(), default='sfb')

    sweep = subparsers.add_parser('sweep', help='Compare methods on the quasi-1D and coarse heterogeneous cases')
    sweep.add_argument('--methods', nargs='+', choices=registry.list_all(), default=list(DEFAULT_METHODS))
    sweep.add_argument('--output', type=str, default=None, help='CSV output path')

    for sub in (run_parser, momas, hetero):
        sub.add_argument('--plot', action='store_true', help='Plot gas saturation profiles')

    return parser


def main(argv=None) -> int:
    """Main function"""
    args = build_parser().parse_args(argv)

    setup_logging()
    logger = logging.getLogger(__name__)
    logger.info(f"Command: {args.command}")

    if args.command == 'sweep':
        compare_methods(methods=args.methods, output_path=args.output)
        return 0

    if args.command == 'run':
        config = load_config(args.config)
        if args.method:
            kind = registry.get_solver_info(args.method)['kind']
            config = config.model_copy(update={'solver': config.solver.model_copy(update={'method': kind})})
    elif args.case == 'momas':
        config = benchmark_momas(args.pr, args.cells, method=args.method, end_time_years=args.end_years)
    else:
        config = benchmark_heterogeneous(
            args.dim, perm_file=args.perm, seed=args.seed, method=args.method, scale=args.scale
        )

    if args.plot:
        config = config.model_copy(update={'output': config.output.model_copy(update={'plot': True})})

    logger.info(f"Config: {config.name}, {config.mesh.n_cells} cells, method {config.solver.method.value}")
    simulator = Simulator(config)
    try:
        simulator.run()
    except SimulationAborted as e:
        logger.error(f"Run aborted: {e}")
        simulator.print_results()
        return 1

    simulator.print_results()
    logger.info("Done!")
    return 0


if __name__ == '__main__':
    sys.exit(main())
