"""
test_errors.py

Tests for the error hierarchy.
"""

import pytest

from src.qpcore import (
    QuasipathError,
    ConfigError,
    ScenarioParseError,
    DivergenceError,
    SolverFailureError,
    ShrinkEpsError,
    ActionEvaluationError,
    EndpointMismatchError,
)


class TestErrorHierarchy:
    """Errors derive from both the root and a builtin"""

    def test_config_error_is_value_error(self):
        """ConfigError can be caught as ValueError"""
        with pytest.raises(ValueError):
            raise ConfigError("bad")

    def test_parse_error_line(self):
        """Parse errors carry the line in attribute and message"""
        err = ScenarioParseError("unexpected key", line=7)
        assert err.line == 7
        assert "line 7" in str(err)
        assert isinstance(err, QuasipathError)

    def test_divergence_carries_exit_time(self):
        """Divergence records exit time and state"""
        err = DivergenceError("blow-up", exit_time=1.25, state=[1e9, 0.0])
        assert isinstance(err, RuntimeError)
        assert err.exit_time == 1.25
        assert err.state == (1e9, 0.0)

    def test_solver_failure_residual(self):
        """Best residual is kept and shown"""
        err = SolverFailureError("Newton failed", best_residual=3e-4)
        assert err.best_residual == pytest.approx(3e-4)
        assert "3.000e-04" in str(err)

    def test_shrink_eps_advice(self):
        """Shrink-eps errors carry the eps tried"""
        err = ShrinkEpsError("sample not reachable", eps=0.3)
        assert err.eps == 0.3
        assert "smaller eps" in str(err)

    def test_action_evaluation_iteration(self):
        """Iteration index is part of the message"""
        err = ActionEvaluationError("U < 0", iteration=12)
        assert err.iteration == 12
        assert str(err).startswith("iteration 12")

    def test_endpoint_gap(self):
        """Endpoint mismatch carries the gap"""
        assert EndpointMismatchError("gap", gap=0.5).gap == 0.5
