"""
Tests for the time step controller and the run ledger
"""
import pytest

from config.schemas import TimeSpec, TimeUnit
from simulation.ledger import RunLedger, StepRecord, format_count
from simulation.time_stepping import TimeStepController, TimeStepUnderflow, advance
from solvers.base_solver import NewtonReport


class TestTimeStepController:
    """Test suite for the iteration-count heuristic"""

    @pytest.mark.parametrize("iterations,expected", [
        (5, 20.0),
        (10, 20.0),
        (11, 10.0),
        (15, 10.0),
        (16, 5.0),
    ])
    def test_heuristic(self, iterations, expected):
        """NS <= 10 doubles, 11..15 holds, > 15 halves"""
        controller = TimeStepController(10.0, 1000.0)
        assert controller.advance(True, iterations, controller.next_step()) == expected
        assert controller.time == 10.0

    def test_failure_halves_without_advancing(self):
        controller = TimeStepController(10.0, 1000.0)
        assert controller.advance(False, 20, controller.next_step()) == 5.0
        assert controller.time == 0.0
        assert not controller.at_breakpoint

    def test_underflow(self):
        """Repeated failures stop once the retry would drop below dt_min"""
        controller = TimeStepController(10.0, 1000.0)
        assert controller.dt_min == pytest.approx(1e-2)
        failures = 0
        with pytest.raises(TimeStepUnderflow):
            while True:
                controller.advance(False, 20, controller.next_step())
                failures += 1
        assert failures == 9
        assert controller.time == 0.0

    def test_breakpoints_hit_exactly(self):
        """Steps are shortened to land on snapshot times and the end time"""
        controller = TimeStepController(3.0, 10.0, dt_max=100.0, breakpoints=[4.0])
        times = []
        hits = []
        while not controller.finished:
            controller.advance(True, 1, controller.next_step())
            times.append(controller.time)
            hits.append(controller.at_breakpoint)

        assert times == [3.0, 4.0, 10.0]
        assert hits == [False, True, True]
        assert controller.time == 10.0

    def test_shortened_step_keeps_nominal_dt(self):
        """A step cut short by a breakpoint does not double dt"""
        controller = TimeStepController(4.0, 100.0, dt_max=100.0, breakpoints=[6.0])
        controller.advance(True, 1, controller.next_step())
        assert controller.dt == 8.0

        dt = controller.next_step()
        assert dt == 2.0
        assert controller.advance(True, 1, dt) == 8.0
        assert controller.time == 6.0
        assert controller.next_step() == 8.0

    def test_shortened_step_still_shrinks(self):
        controller = TimeStepController(4.0, 100.0, dt_max=100.0, breakpoints=[3.0])
        dt = controller.next_step()
        assert dt == 3.0
        assert controller.advance(True, 18, dt) == 2.0

    def test_breakpoints_outside_horizon_ignored(self):
        controller = TimeStepController(1.0, 10.0, breakpoints=[0.0, 12.0, 5.0])
        assert controller.breakpoints == [5.0, 10.0]

    def test_clamped_to_dt_max(self):
        controller = TimeStepController(1.0, 100.0, dt_max=3.0)
        for _ in range(4):
            controller.advance(True, 1, controller.next_step())
        assert controller.dt == 3.0
        assert controller.next_step() <= 3.0

    def test_default_bounds(self):
        """dt_min = 1e-3 dt0, dt_max = end / 4"""
        controller = TimeStepController(2.0, 400.0)
        assert controller.dt_min == pytest.approx(2e-3)
        assert controller.dt_max == pytest.approx(100.0)

    @pytest.mark.parametrize("initial_dt,end_time", [(0.0, 10.0), (1.0, -1.0)])
    def test_invalid(self, initial_dt, end_time):
        with pytest.raises(ValueError):
            TimeStepController(initial_dt, end_time)

    def test_inconsistent_bounds(self):
        with pytest.raises(ValueError):
            TimeStepController(1.0, 10.0, dt_min=5.0, dt_max=2.0)

    def test_from_spec_converts_units(self):
        spec = TimeSpec(unit=TimeUnit.DAY, initial_dt=1.0, end_time=10.0)
        controller = TimeStepController.from_spec(spec, snapshot_times=[5.0])
        assert controller.dt == pytest.approx(86400.0)
        assert controller.end_time == pytest.approx(864000.0)
        assert controller.dt_min == pytest.approx(86.4)
        assert controller.breakpoints == [pytest.approx(432000.0), pytest.approx(864000.0)]

    def test_advance_with_report(self):
        """Module-level helper applies a NewtonReport"""
        controller = TimeStepController(10.0, 1000.0)
        dt = controller.next_step()
        assert advance(controller, NewtonReport(converged=True, iterations=3), dt) == 20.0
        assert advance(controller, NewtonReport(converged=False, iterations=20)) == 10.0


class TestRunLedger:
    """Test suite for TS/NS bookkeeping"""

    @pytest.fixture
    def ledger(self):
        ledger = RunLedger(name="case", method="min")
        ledger.add(StepRecord(0.0, 10.0, True, 5, 40, 1e-8))
        ledger.add(StepRecord(10.0, 20.0, False, 20, 100, 1.0, "no convergence in 20 iterations"))
        ledger.add(StepRecord(10.0, 10.0, True, 32, 90, 1e-7))
        return ledger

    def test_format_count(self):
        assert format_count(37, 20) == "37 (20)"

    def test_totals(self, ledger):
        assert ledger.successful_steps == 2
        assert ledger.failed_steps == 1
        assert ledger.successful_iterations == 37
        assert ledger.failed_iterations == 20
        assert ledger.ts == "2 (1)"
        assert ledger.ns == "37 (20)"
        assert ledger.linear_iterations == 230

    def test_time_statistics(self, ledger):
        assert ledger.average_dt == pytest.approx(10.0)
        assert ledger.final_time == pytest.approx(20.0)

    def test_empty(self):
        ledger = RunLedger()
        assert ledger.ts == "0 (0)"
        assert ledger.average_dt == 0.0
        assert ledger.final_time == 0.0

    def test_summary(self, ledger):
        summary = ledger.summary()
        assert summary['TS'] == "2 (1)"
        assert summary['NS'] == "37 (20)"
        assert summary['method'] == "min"
        assert summary['completed'] is False

    def test_dataframe(self, ledger):
        df = ledger.to_dataframe()
        assert len(df) == 3
        assert list(df.columns) == [
            'time', 'dt', 'converged', 'iterations', 'linear_iterations', 'final_residual', 'failure_reason'
        ]
        assert df['iterations'].sum() == 57

    def test_record_from_report(self):
        report = NewtonReport(
            converged=True, iterations=2, residual_history=[1.0, 1e-3, 1e-9], linear_iterations=[3, 4]
        )
        record = StepRecord.from_report(5.0, 2.5, report)
        assert record.linear_iterations == 7
        assert record.final_residual == 1e-9
        assert record.failure_reason is None
