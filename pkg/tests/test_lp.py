import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spreadhedge import (
    LinearProgram,
    TooLarge,
    ValidationError,
    brute_force_vertices,
    solve,
    verify_certificate,
)

INF = float("inf")


def two_var_hedge_lp():
    """minimize B + 100*D subject to B + 108*D >= 20, B + 72*D >= 0, both free."""
    return LinearProgram(
        c=[1.0, 100.0],
        A_ub=[[-1.0, -108.0], [-1.0, -72.0]],
        b_ub=[-20.0, 0.0],
        lower=[-INF, -INF],
        names=("B", "D"),
    )


def random_box_lp(seed: int) -> LinearProgram:
    """Bounded-feasible random LP: box bounds plus inequalities slackened
    around a random interior point, sometimes one equality through it."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    lower = np.where(rng.random(n) < 0.5, 0.0, -rng.uniform(1, 5, n))
    upper = lower + rng.uniform(1, 10, n)
    x_hat = lower + rng.uniform(0.2, 0.8, n) * (upper - lower)
    m = int(rng.integers(1, 5))
    A_ub = rng.normal(size=(m, n))
    b_ub = A_ub @ x_hat + rng.uniform(0.1, 3.0, m)
    A_eq = b_eq = None
    if rng.random() < 0.4:
        A_eq = rng.normal(size=(1, n))
        b_eq = A_eq @ x_hat
    c = rng.normal(size=n)
    sense = "minimize" if rng.random() < 0.5 else "maximize"
    return LinearProgram(
        c=c, objective_sense=sense, A_eq=A_eq, b_eq=b_eq, A_ub=A_ub, b_ub=b_ub,
        lower=lower, upper=upper,
    )


class TestSolveBasics:
    def test_lower_bound_only(self):
        lp = LinearProgram(c=[1.0], lower=[3.0], upper=[INF])
        sol = solve(lp)
        assert sol.status == "optimal"
        assert abs(sol.x[0] - 3.0) < 1e-12
        assert abs(sol.objective - 3.0) < 1e-12

    def test_two_var_hedge(self):
        sol = solve(two_var_hedge_lp())
        assert sol.status == "optimal"
        assert abs(sol.objective - 140.0 / 9.0) < 1e-9
        assert abs(sol.x[0] + 40.0) < 1e-9
        assert abs(sol.x[1] - 5.0 / 9.0) < 1e-9

    def test_unbounded(self):
        lp = LinearProgram(c=[1.0], objective_sense="maximize", lower=[0.0], upper=[INF])
        assert solve(lp).status == "unbounded"

    def test_infeasible(self):
        lp = LinearProgram(
            c=[1.0], A_ub=[[1.0], [-1.0]], b_ub=[1.0, -2.0], lower=[-INF], upper=[INF]
        )
        assert solve(lp).status == "infeasible"

    def test_redundant_equality_rows(self):
        lp = LinearProgram(
            c=[1.0, 1.0],
            A_eq=[[1.0, 1.0], [1.0, 1.0], [2.0, 2.0]],
            b_eq=[3.0, 3.0, 6.0],
        )
        sol = solve(lp)
        assert sol.status == "optimal"
        assert abs(sol.objective - 3.0) < 1e-9
        assert verify_certificate(lp, sol).ok

    def test_fixed_variables_removed(self):
        lp = LinearProgram(
            c=[1.0, 2.0],
            A_ub=[[1.0, 1.0]],
            b_ub=[5.0],
            lower=[2.0, 0.0],
            upper=[2.0, INF],
        )
        sol = solve(lp)
        assert sol.status == "optimal"
        assert sol.x[0] == 2.0
        assert abs(sol.objective - 2.0) < 1e-12

    def test_input_validation(self):
        with pytest.raises(ValidationError):
            LinearProgram(c=[1.0], A_ub=[[1.0]], b_ub=[np.nan])
        with pytest.raises(ValidationError):
            LinearProgram(c=[np.nan])
        with pytest.raises(ValidationError):
            LinearProgram(c=[1.0], lower=[2.0], upper=[1.0])

    def test_debug_dump_lists_rows_and_bounds(self):
        text = two_var_hedge_lp().dump()
        assert text.startswith("sense minimize")
        assert text.count("ub ") == 2
        assert "lower" in text and "upper" in text

    def test_determinism_bitwise(self):
        lp = random_box_lp(7)
        a = solve(lp)
        b = solve(lp)
        assert a.x.tobytes() == b.x.tobytes()
        assert a.y_eq.tobytes() == b.y_eq.tobytes()
        assert a.y_ub.tobytes() == b.y_ub.tobytes()


class TestCertificate:
    def test_solve_output_passes(self):
        sol = solve(two_var_hedge_lp())
        report = verify_certificate(two_var_hedge_lp(), sol)
        assert report.ok
        assert set(report.residuals) == {
            "primal_feasibility",
            "dual_feasibility",
            "complementary_slackness",
            "objective_gap",
        }

    def test_perturbed_solution_fails_with_named_residual(self):
        lp = two_var_hedge_lp()
        sol = solve(lp)
        sol.x = sol.x.copy()
        sol.x[1] += 1e-3  # steps off the binding budget rows
        report = verify_certificate(lp, sol)
        assert not report.ok
        assert "complementary_slackness" in report.failures
        assert "objective_gap" in report.failures

    def test_wrong_dual_sign_detected(self):
        lp = two_var_hedge_lp()
        sol = solve(lp)
        sol.y_ub = np.abs(sol.y_ub)  # inequality duals must be <= 0 for a min
        report = verify_certificate(lp, sol)
        assert not report.ok


class TestBruteForce:
    def test_two_var_hedge_vertex(self):
        out = brute_force_vertices(two_var_hedge_lp())
        assert len(out) == 1
        x, obj = out[0]
        assert abs(obj - 140.0 / 9.0) < 1e-9
        assert np.allclose(x, [-40.0, 5.0 / 9.0], atol=1e-9)

    def test_infeasible_gives_empty(self):
        lp = LinearProgram(
            c=[1.0], A_ub=[[1.0], [-1.0]], b_ub=[1.0, -2.0], lower=[-INF], upper=[INF]
        )
        assert brute_force_vertices(lp) == []

    def test_duplicate_vertices_deduplicated(self):
        # three constraints meet at the same corner of the unit box
        lp = LinearProgram(
            c=[-1.0, -1.0],
            A_ub=[[1.0, 1.0], [2.0, 2.0]],
            b_ub=[2.0, 4.0],
            lower=[0.0, 0.0],
            upper=[1.0, 1.0],
        )
        out = brute_force_vertices(lp)
        assert len(out) == 1
        assert np.allclose(out[0][0], [1.0, 1.0], atol=1e-9)

    def test_too_large(self):
        with pytest.raises(TooLarge):
            brute_force_vertices(LinearProgram(c=np.ones(9), upper=np.full(9, 1.0)))


class TestOracleAgreement:
    @settings(max_examples=60, deadline=None, derandomize=True)
    @given(seed=st.integers(1, 100_000))
    def test_solve_matches_vertex_enumeration(self, seed):
        lp = random_box_lp(seed)
        sol = solve(lp)
        assert sol.status == "optimal"
        vertices = brute_force_vertices(lp)
        assert vertices, "bounded LP must have an optimal vertex"
        assert abs(sol.objective - vertices[0][1]) < 1e-9 * (1 + abs(sol.objective))
        assert verify_certificate(lp, sol).ok
