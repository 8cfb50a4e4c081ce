"""
Simulation Engine
"""
import logging
import os
import time
from typing import Dict, Optional

from assembly.flow import FlowModel, mass_inventory
from assembly.state import BoundaryCondition, StateVector
from config.schemas import SimulationConfig
from physics.mesh import CartesianMesh, assign_boundary_tags, build_mesh
from simulation.ledger import RunLedger, StepRecord
from simulation.time_stepping import TimeStepController, TimeStepUnderflow
from solvers.base_solver import NonlinearSolver
from solvers.registry import registry
from utils.field_loader import load_rock_field
from utils.results_logger import ResultsLogger
from utils.visualizer import plot_gas_saturation
from utils.vtk_writer import write_vtk_snapshot

logger = logging.getLogger(__name__)


class SimulationAborted(RuntimeError):
    """Run stopped before the end time; the ledger has been flushed"""

    def __init__(self, message: str, ledger: RunLedger):
        super().__init__(message)
        self.ledger = ledger


def build_model(config: SimulationConfig, mesh: Optional[CartesianMesh] = None) -> FlowModel:
    """Mesh, rock field and boundary data of a config"""
    mesh = mesh or build_mesh(config.mesh.dims, config.mesh.cell_size, config.mesh.origin)
    rock = load_rock_field(config.rock, mesh)
    tags = assign_boundary_tags(mesh, config.boundaries)
    conditions = [BoundaryCondition.from_spec(region.condition) for region in config.boundaries]
    return FlowModel(mesh, rock, config.fluid, config.van_genuchten, conditions, tags, config.gravity)


def initial_state(config: SimulationConfig) -> StateVector:
    return StateVector.uniform(
        config.mesh.n_cells,
        config.initial.pressure,
        config.initial.saturation,
        config.initial.concentration
    )


class Simulator:
    """
    Time integration of one configured problem
    """

    def __init__(
        self,
        config: SimulationConfig,
        solver: Optional[NonlinearSolver] = None,
        save_results: bool = True
    ):
        """
        Args:
            config: Validated simulation config
            solver: Nonlinear solver (built from config.solver if None)
            save_results: Write ledger, summary, snapshots and plots to
                config.output.directory
        """
        self.config = config
        self.model = build_model(config)
        self.mesh = self.model.mesh
        self.solver = solver or registry.create_solver(
            config.solver.method.value, config.solver, config.gmres, config.preconditioner
        )
        self.save_results = save_results
        self.results_logger = ResultsLogger(config.output.directory) if save_results else None
        self.state = initial_state(config)
        self.snapshots: Dict[float, StateVector] = {}
        self.ledger = RunLedger(name=config.name, method=self.solver.config.method.value)
        if save_results and config.output.export_matrix:
            self.solver.export_path = os.path.join(config.output.directory, f"{config.name}_jacobian.mtx")

    def run(self) -> RunLedger:
        """
        Integrate from t = 0 to the end time

        Returns:
            RunLedger of all attempts

        Raises:
            SimulationAborted: dt underflow or a non-finite state
        """
        config = self.config
        controller = TimeStepController.from_spec(config.time, config.output.snapshot_times)
        ledger = self.ledger
        logger.info(
            f"Starting {config.name}: {self.mesh.n_cells} cells, method {ledger.method}, "
            f"end time {controller.end_time:.3e} s"
        )
        water0, hydrogen0 = self.inventory()
        logger.info(f"Initial inventory: water {water0:.6e} kg, hydrogen {hydrogen0:.6e} kg")

        start = time.perf_counter()
        try:
            while not controller.finished:
                t = controller.time
                dt = controller.next_step()
                new_state, report = self.solver.solve_step(self.model, self.state, dt)
                if report.converged and not new_state.is_finite():
                    report.converged = False
                    report.failure_reason = "non-finite state"
                ledger.add(StepRecord.from_report(t, dt, report))

                if report.converged:
                    self.state = new_state
                    logger.info(
                        f"t = {t + dt:.4e} s, dt = {dt:.3e} s, NS = {report.iterations}, "
                        f"GMRES = {report.total_linear_iterations}"
                    )
                else:
                    logger.warning(
                        f"Step at t = {t:.4e} s with dt = {dt:.3e} s failed "
                        f"after {report.iterations} iterations: {report.failure_reason}"
                    )

                controller.advance(report.converged, report.iterations, dt)
                if report.converged and controller.at_breakpoint:
                    self._snapshot(controller.time)
            ledger.completed = True
        except TimeStepUnderflow as e:
            ledger.abort_reason = str(e)
            ledger.wall_time = time.perf_counter() - start
            logger.error(f"Simulation aborted: {e}")
            self._flush()
            raise SimulationAborted(str(e), ledger) from e

        ledger.wall_time = time.perf_counter() - start
        water, hydrogen = self.inventory()
        logger.info(
            f"Simulation completed in {ledger.wall_time:.2f} s: TS {ledger.ts}, NS {ledger.ns}; "
            f"hydrogen inventory {hydrogen:.6e} kg"
        )
        self._flush()
        if self.save_results and config.output.plot:
            self.plot()
        return ledger

    def inventory(self):
        model = self.model
        return mass_inventory(self.state, model.mesh, model.rock, model.fluid, model.vg)

    def _snapshot(self, t: float) -> None:
        self.snapshots[t] = self.state.copy()
        if self.save_results and self.config.output.write_vtk:
            index = len(self.snapshots) - 1
            path = os.path.join(self.config.output.directory, f"{self.config.name}_{index:04d}.vtk")
            write_vtk_snapshot(path, self.mesh, self.state, self.model.vg, t)
            logger.info(f"Snapshot at t = {t:.4e} s written to {path}")

    def _flush(self) -> None:
        if not self.save_results:
            return
        if self.config.output.write_ledger:
            self.results_logger.write_ledger(self.ledger)
        self.results_logger.save_run(self.ledger, self.config.model_dump(mode='json'))

    def plot(self) -> str:
        unit = self.config.time.unit
        profiles = {
            f"t = {t / unit.seconds:g} {unit.value}": state
            for t, state in sorted(self.snapshots.items())
        }
        path = os.path.join(self.config.output.directory, f"{self.config.name}_gas_saturation.png")
        return plot_gas_saturation(self.mesh, profiles, path, title=f"{self.config.name} ({self.ledger.method})")

    def print_results(self) -> None:
        """Print the run totals"""
        ledger = self.ledger
        print("\n" + "=" * 50)
        print(f"SIMULATION RESULTS - {ledger.name}")
        print("=" * 50)
        print(f"Method:              {self.solver.name} ({ledger.method})")
        print(f"Completed:           {ledger.completed}")
        print(f"Time steps TS:       {ledger.ts}")
        print(f"Newton its NS:       {ledger.ns}")
        print(f"GMRES iterations:    {ledger.linear_iterations}")
        print(f"Average dt:          {ledger.average_dt:.4e} s")
        print(f"Wall time:           {ledger.wall_time:.2f} s")
        print("=" * 50 + "\n")


def run_simulation(config: SimulationConfig, save_results: bool = True) -> RunLedger:
    """
    Run a configured simulation and write its outputs

    Raises:
        SimulationAborted: see Simulator.run
    """
    return Simulator(config, save_results=save_results).run()
