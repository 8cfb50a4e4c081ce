"""
Adaptive time step control driven by the nonlinear iteration count
"""
import logging
from typing import Iterable, Optional

from config import settings
from config.schemas import TimeSpec

logger = logging.getLogger(__name__)


class TimeStepUnderflow(RuntimeError):
    """A failed step cannot be retried without going below dt_min"""


class TimeStepController:
    """
    Time step heuristic:
        NS <= 10   -> dt * 2
        NS 11..15  -> dt kept
        NS > 15    -> dt / 2
        failure    -> retry from the same time with half the attempted dt

    Steps are shortened so that every breakpoint (snapshot times and the
    end time) is hit exactly; a shortened step never grows dt.
    """

    def __init__(
        self,
        initial_dt: float,
        end_time: float,
        dt_min: Optional[float] = None,
        dt_max: Optional[float] = None,
        breakpoints: Iterable[float] = ()
    ):
        if initial_dt <= 0 or end_time <= 0:
            raise ValueError(f"initial_dt and end_time must be positive, got {initial_dt}, {end_time}")
        self.dt_min = dt_min if dt_min is not None else settings.DT_MIN_FRACTION * initial_dt
        self.dt_max = dt_max if dt_max is not None else settings.DT_MAX_FRACTION * end_time
        if self.dt_min > self.dt_max:
            raise ValueError(f"dt_min {self.dt_min} exceeds dt_max {self.dt_max}")

        self.end_time = float(end_time)
        self.time = 0.0
        self.dt = self._clamp(initial_dt)
        self.breakpoints = sorted({float(t) for t in breakpoints if 0.0 < t < end_time} | {self.end_time})
        self.at_breakpoint = False
        self._step_hits_breakpoint = False

    @classmethod
    def from_spec(cls, spec: TimeSpec, snapshot_times: Iterable[float] = ()) -> "TimeStepController":
        """Controller in seconds; snapshot times are given in the spec's unit"""
        return cls(
            spec.initial_dt_seconds,
            spec.end_time_seconds,
            spec.dt_min_seconds,
            spec.dt_max_seconds,
            [spec.seconds(t) for t in snapshot_times]
        )

    def _clamp(self, dt: float) -> float:
        return min(max(dt, self.dt_min), self.dt_max)

    @property
    def finished(self) -> bool:
        return self.time >= self.end_time

    @property
    def next_breakpoint(self) -> float:
        return next(t for t in self.breakpoints if t > self.time)

    def next_step(self) -> float:
        """Length of the next attempt"""
        remaining = self.next_breakpoint - self.time
        # absorb slivers left by roundoff
        self._step_hits_breakpoint = self.dt >= remaining * (1.0 - 1e-10)
        return remaining if self._step_hits_breakpoint else self.dt

    def advance(self, converged: bool, iterations: int, dt_used: float) -> float:
        """
        Update time and dt after an attempt

        Args:
            converged: Whether the nonlinear solve succeeded
            iterations: Nonlinear iterations of the attempt (NS)
            dt_used: Length of the attempt

        Returns:
            The next nominal dt

        Raises:
            TimeStepUnderflow: when a failed attempt would need dt < dt_min
        """
        if not converged:
            self.at_breakpoint = False
            retry = settings.SHRINK_FACTOR * dt_used
            if retry < self.dt_min:
                raise TimeStepUnderflow(
                    f"dt {retry:.3e} s below dt_min {self.dt_min:.3e} s at t = {self.time:.6e} s"
                )
            self.dt = self._clamp(retry)
            logger.info(f"Step failed, retrying with dt = {self.dt:.3e} s")
            return self.dt

        clipped = self._step_hits_breakpoint and dt_used < self.dt
        if self._step_hits_breakpoint:
            self.time = self.next_breakpoint
        else:
            self.time += dt_used
        self.at_breakpoint = self.time in self.breakpoints

        # a step shortened onto a breakpoint says nothing about the nominal dt
        if iterations <= settings.GROW_MAX_ITERATIONS and not clipped:
            self.dt = self._clamp(settings.GROW_FACTOR * self.dt)
        elif iterations > settings.HOLD_MAX_ITERATIONS:
            self.dt = self._clamp(settings.SHRINK_FACTOR * self.dt)
        return self.dt


def advance(controller: TimeStepController, report, dt_used: Optional[float] = None) -> float:
    """Apply a NewtonReport to the controller"""
    if dt_used is None:
        dt_used = controller.dt
    return controller.advance(report.converged, report.iterations, dt_used)
