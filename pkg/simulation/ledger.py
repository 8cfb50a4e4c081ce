"""
Per-attempt bookkeeping of a simulation run
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from solvers.base_solver import NewtonReport


@dataclass
class StepRecord:
    """One time step attempt, successful or not"""
    time: float
    dt: float
    converged: bool
    iterations: int
    linear_iterations: int
    final_residual: float
    failure_reason: Optional[str] = None

    @classmethod
    def from_report(cls, time: float, dt: float, report: NewtonReport) -> "StepRecord":
        return cls(
            time=time,
            dt=dt,
            converged=report.converged,
            iterations=report.iterations,
            linear_iterations=report.total_linear_iterations,
            final_residual=report.final_residual,
            failure_reason=report.failure_reason
        )


def format_count(successful: int, failed: int) -> str:
    """Count with failures in parentheses, e.g. '37 (20)'"""
    return f"{successful} ({failed})"


@dataclass
class RunLedger:
    """
    Attempt records plus totals: successful/failed time steps (TS) and the
    nonlinear iterations (NS) spent in successful/failed attempts
    """
    name: str = "simulation"
    method: str = ""
    records: List[StepRecord] = field(default_factory=list)
    wall_time: float = 0.0
    completed: bool = False
    abort_reason: Optional[str] = None

    def add(self, record: StepRecord) -> None:
        self.records.append(record)

    @property
    def successful_steps(self) -> int:
        return sum(1 for r in self.records if r.converged)

    @property
    def failed_steps(self) -> int:
        return sum(1 for r in self.records if not r.converged)

    @property
    def successful_iterations(self) -> int:
        return sum(r.iterations for r in self.records if r.converged)

    @property
    def failed_iterations(self) -> int:
        return sum(r.iterations for r in self.records if not r.converged)

    @property
    def linear_iterations(self) -> int:
        return sum(r.linear_iterations for r in self.records)

    @property
    def average_dt(self) -> float:
        dts = [r.dt for r in self.records if r.converged]
        return float(np.mean(dts)) if dts else 0.0

    @property
    def final_time(self) -> float:
        done = [r.time + r.dt for r in self.records if r.converged]
        return done[-1] if done else 0.0

    @property
    def ts(self) -> str:
        return format_count(self.successful_steps, self.failed_steps)

    @property
    def ns(self) -> str:
        return format_count(self.successful_iterations, self.failed_iterations)

    def summary(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'method': self.method,
            'completed': self.completed,
            'abort_reason': self.abort_reason,
            'TS': self.ts,
            'NS': self.ns,
            'successful_steps': self.successful_steps,
            'failed_steps': self.failed_steps,
            'successful_iterations': self.successful_iterations,
            'failed_iterations': self.failed_iterations,
            'linear_iterations': self.linear_iterations,
            'average_dt': self.average_dt,
            'final_time': self.final_time,
            'wall_time': self.wall_time,
        }

    def to_dataframe(self) -> pd.DataFrame:
        columns = ['time', 'dt', 'converged', 'iterations', 'linear_iterations', 'final_residual', 'failure_reason']
        return pd.DataFrame([vars(r) for r in self.records], columns=columns)
