"""
Method comparison
Runs each benchmark case with every complementarity method and tabulates
time steps and nonlinear iterations
"""
import logging
import os
from typing import Callable, Dict, Optional, Sequence

import pandas as pd

from config import settings
from config.schemas import SimulationConfig
from simulation.benchmarks import benchmark_heterogeneous, benchmark_momas
from simulation.simulator import SimulationAborted, run_simulation

logger = logging.getLogger(__name__)

DEFAULT_METHODS = ('min', 'fb', 'sfb')
HETERO_SEED = 1
HETERO_COARSENING = 2


def default_cases() -> Dict[str, Callable[[str], SimulationConfig]]:
    """Case label -> config factory taking a method id"""
    return {
        'momas Pr=2e6': lambda method: benchmark_momas(2e6, 200, method=method),
        'momas Pr=2e3': lambda method: benchmark_momas(2e3, 200, method=method),
        'hetero 2D coarse': lambda method: benchmark_heterogeneous(
            2, seed=HETERO_SEED, method=method, scale=HETERO_COARSENING
        ),
    }


def compare_methods(
    cases: Optional[Dict[str, Callable[[str], SimulationConfig]]] = None,
    methods: Sequence[str] = DEFAULT_METHODS,
    output_path: Optional[str] = None,
    save_results: bool = True
) -> pd.DataFrame:
    """
    Run every case with every method

    Args:
        cases: Case label -> config factory (default_cases() if None)
        methods: Registered method ids
        output_path: CSV destination (OUTPUT_DIR/method_comparison.csv if None)
        save_results: Keep per-run outputs

    Returns:
        DataFrame with one row per (case, method)
    """
    cases = cases or default_cases()

    print("=" * 80)
    print("COMPLEMENTARITY METHOD COMPARISON")
    print("=" * 80)

    rows = []
    for case, factory in cases.items():
        for method in methods:
            print(f"\n📊 {case} / {method}...")
            try:
                ledger = run_simulation(factory(method), save_results=save_results)
            except SimulationAborted as e:
                ledger = e.ledger
                print(f"   ✗ Aborted: {e}")
            else:
                print(f"   ✓ TS {ledger.ts}, NS {ledger.ns}")

            rows.append({
                'case': case,
                'method': method,
                'TS': ledger.ts,
                'NS': ledger.ns,
                'nonlinear_iterations': ledger.successful_iterations + ledger.failed_iterations,
                'linear_iterations': ledger.linear_iterations,
                'wall_time': round(ledger.wall_time, 2),
                'completed': ledger.completed,
            })

    df = pd.DataFrame(rows)
    print("\n" + "=" * 80)
    print("RESULTS")
    print("=" * 80)
    print(df.to_string(index=False))

    output_path = output_path or os.path.join(settings.OUTPUT_DIR, 'method_comparison.csv')
    os.makedirs(os.path.dirname(output_path) or '.', exist_ok=True)
    df.to_csv(output_path, index=False)
    logger.info(f"Comparison written to {output_path}")
    print(f"\n✓ Results saved to: {output_path}\n")
    return df
