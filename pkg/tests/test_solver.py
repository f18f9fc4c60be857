import numpy as np
import pytest

from relbound.errors import InfeasibleConstraintsError, ZeroEvidenceError
from relbound.inference import (
    FutureReliability,
    Observation,
    PosteriorConfidence,
    PosteriorExpectedPfd,
    posterior_value,
)
from relbound.operational import sample_feasible_prior
from relbound.priors import (
    ConfidenceBound,
    MeanBound,
    PerfectionConfidence,
    PfdGrid,
    PriorReliability,
    build_grid,
)
from relbound.solver import curve, oracle_solve, solve, solve_bisection


def run(constraints, obs, objective, resolution=200):
    grid = build_grid(constraints, objective, resolution)
    return solve(constraints, obs, objective, grid), grid


class TestClosedForms:
    @pytest.mark.parametrize("eps", [1e-4, 1e-2, 0.3])
    @pytest.mark.parametrize("n", [0, 10, 10_000])
    @pytest.mark.parametrize("t", [1, 1000])
    def test_full_confidence_bound_collapses_to_point_mass(self, eps, n, t):
        # with theta = 1 all mass sits at or below eps and the worst prior
        # is the point mass exactly at eps
        result, _ = run([ConfidenceBound(eps, 1.0)], Observation(n, 0), FutureReliability(t))
        expected = (1.0 - eps) ** t
        assert result.bound == pytest.approx(expected, abs=1e-9)
        if expected > 1e-9:  # below that the threshold pin is unresolvable
            assert result.solver_status == "optimal"

    def test_certain_perfection_gives_certainty(self):
        result, _ = run(
            [PerfectionConfidence(1.0)], Observation(100, 0), FutureReliability(100)
        )
        assert result.bound == 1.0
        assert result.witness.support == (0.0,)

    def test_mean_bound_two_point_family(self):
        # the worst case for the posterior mean is a two-point prior {0, x}
        # with mass m/x at x; scan the family over the grid directly
        m, n = 0.01, 100
        constraints = [MeanBound(m)]
        result, grid = run(constraints, Observation(n, 0), PosteriorExpectedPfd())
        xs = np.array([p for p in grid.points if p >= m and p < 1.0])
        family = m * xs * (1 - xs) ** n / (xs - m + m * (1 - xs) ** n)
        assert result.bound == pytest.approx(float(family.max()), abs=1e-9)


class TestCbiResultContract:
    def test_witness_attains_bound(self):
        constraints = [ConfidenceBound(1e-3, 0.8), MeanBound(0.05)]
        obs = Observation(5000, 0)
        objective = FutureReliability(500)
        result, _ = run(constraints, obs, objective)
        assert result.witness.satisfies_all(constraints)
        assert posterior_value(result.witness, obs, objective) == pytest.approx(
            result.bound, abs=1e-9
        )

    def test_witness_support_is_small(self):
        constraints = [ConfidenceBound(1e-3, 0.8), MeanBound(0.05)]
        result, _ = run(constraints, Observation(5000, 0), FutureReliability(500))
        assert len(result.witness.support) <= len(constraints) + 2

    def test_infeasible_status(self):
        constraints = [ConfidenceBound(0.1, 0.9), MeanBound(0.005)]
        result, _ = run(constraints, Observation(10, 0), PosteriorExpectedPfd())
        assert result.solver_status == "infeasible"
        assert result.bound is None
        assert result.witness is None

    def test_zero_evidence_raises(self):
        # perfection is certain, yet a failure was observed
        with pytest.raises(ZeroEvidenceError):
            run([PerfectionConfidence(1.0)], Observation(10, 1), PosteriorExpectedPfd())

    def test_interior_optimum_reports_grid_limited(self):
        # the free 1-theta mass settles at an interior lattice point above
        # epsilon, so refinement would move the bound
        result, _ = run(
            [ConfidenceBound(1e-4, 0.9)], Observation(10_000, 0), FutureReliability(1000)
        )
        assert result.solver_status == "grid-limited"
        assert any(p not in (0.0, 1e-4, 1e-4 * (1 + 1e-12), 1.0) for p in result.witness.support)

    def test_boundary_optimum_reports_optimal(self):
        # the worst prior for the posterior mean concentrates on the mean
        # threshold itself: resolution-independent
        result, _ = run([MeanBound(0.01)], Observation(1000, 0), PosteriorExpectedPfd())
        assert result.solver_status == "optimal"
        assert result.witness.support == (0.01,)


class TestOracleAgreement:
    def test_trivial_cases_identical(self):
        for constraints, obs, objective in [
            ([PerfectionConfidence(1.0)], Observation(100, 0), FutureReliability(100)),
            ([ConfidenceBound(0.01, 1.0)], Observation(50, 0), FutureReliability(10)),
        ]:
            grid = build_grid(constraints, objective, 80)
            a = solve(constraints, obs, objective, grid)
            b = oracle_solve(constraints, obs, objective, grid)
            assert a.bound == pytest.approx(b.bound, abs=1e-9)

    def test_derived_confidence_bound_instance(self):
        constraints = [ConfidenceBound(1e-4, 0.9)]
        obs = Observation(10_000, 0)
        objective = FutureReliability(1000)
        grid = build_grid(constraints, objective, 100)
        a = solve(constraints, obs, objective, grid)
        b = oracle_solve(constraints, obs, objective, grid)
        assert a.bound == pytest.approx(b.bound, abs=1e-4)

    def test_random_single_confidence_bounds(self):
        rng = np.random.default_rng(2024)
        for _ in range(15):
            eps = float(10 ** rng.uniform(-4, -0.8))
            theta = float(rng.uniform(0.3, 0.99))
            n = int(rng.integers(0, 5000))
            t = int(rng.integers(1, 2000))
            constraints = [ConfidenceBound(eps, theta)]
            objective = FutureReliability(t)
            grid = build_grid(constraints, objective, 60)
            a = solve(constraints, Observation(n, 0), objective, grid)
            b = oracle_solve(constraints, Observation(n, 0), objective, grid)
            assert a.bound == pytest.approx(b.bound, abs=1e-4)

    def test_oracle_guard_rejects_huge_grids(self):
        constraints = [MeanBound(0.1), ConfidenceBound(0.01, 0.5), PriorReliability(10, 0.5)]
        pts = tuple(np.linspace(0.0, 1.0, 2000))
        with pytest.raises(ValueError, match="guard"):
            oracle_solve(
                constraints, Observation(10, 0), PosteriorExpectedPfd(), PfdGrid(pts)
            )


class TestBisectionCrossCheck:
    @pytest.mark.parametrize(
        "constraints,obs,objective",
        [
            ([ConfidenceBound(1e-3, 0.9)], Observation(1000, 0), FutureReliability(100)),
            ([MeanBound(0.01)], Observation(200, 0), PosteriorExpectedPfd()),
            ([ConfidenceBound(1e-3, 0.7)], Observation(500, 0), PosteriorConfidence(1e-2)),
        ],
    )
    def test_agrees_with_solve(self, constraints, obs, objective):
        grid = build_grid(constraints, objective, 150)
        direct = solve(constraints, obs, objective, grid)
        iterated = solve_bisection(constraints, obs, objective, grid)
        assert iterated == pytest.approx(direct.bound, abs=1e-7)


class TestSoundness:
    @pytest.mark.parametrize(
        "constraints,objective",
        [
            ([ConfidenceBound(1e-2, 0.8)], FutureReliability(200)),
            ([MeanBound(0.05)], PosteriorExpectedPfd()),
            ([PriorReliability(100, 0.7)], PosteriorConfidence(1e-2)),
            ([ConfidenceBound(1e-3, 0.6), MeanBound(0.02)], FutureReliability(50)),
        ],
    )
    def test_bound_is_conservative_side_of_samples(self, constraints, objective):
        obs = Observation(300, 0)
        grid = build_grid(constraints, objective, 120)
        result = solve(constraints, obs, objective, grid)
        maximize = objective.direction == "conservative-max"
        for seed in range(40):
            prior = sample_feasible_prior(constraints, grid, seed)
            value = posterior_value(prior, obs, objective)
            if maximize:
                assert result.bound >= value - 1e-9
            else:
                assert result.bound <= value + 1e-9


class TestGridRefinement:
    @pytest.mark.parametrize(
        "constraints,objective",
        [
            ([ConfidenceBound(1e-3, 0.9)], FutureReliability(100)),
            ([MeanBound(0.02)], PosteriorExpectedPfd()),
        ],
    )
    def test_superset_grid_moves_conservatively(self, constraints, objective):
        obs = Observation(500, 0)
        grid = build_grid(constraints, objective, 100)
        fine = grid.refine()
        coarse_bound = solve(constraints, obs, objective, grid).bound
        fine_bound = solve(constraints, obs, objective, fine).bound
        if objective.direction == "conservative-max":
            assert fine_bound >= coarse_bound - 1e-6
        else:
            assert fine_bound <= coarse_bound + 1e-6

    def test_doubled_resolution_on_pinned_instance(self):
        # theta = 1 pins the optimum at the forced threshold point, so the
        # non-nested rebuild may wobble only within tolerance
        constraints = [ConfidenceBound(1e-3, 1.0)]
        objective = FutureReliability(100)
        obs = Observation(1000, 0)
        bounds = [
            solve(constraints, obs, objective, build_grid(constraints, objective, res)).bound
            for res in (200, 400)
        ]
        assert bounds[1] == pytest.approx(bounds[0], abs=1e-6)


class TestCurve:
    def test_theta_one_curve_constant(self):
        points = curve(
            [ConfidenceBound(0.01, 1.0)],
            FutureReliability(100),
            [1, 10, 100, 1000],
            0,
            grid=build_grid([ConfidenceBound(0.01, 1.0)], FutureReliability(100), 100),
        )
        values = [b for _, b in points]
        expected = (1 - 0.01) ** 100
        assert values == pytest.approx([expected] * 4, abs=1e-9)

    def test_failure_free_curve_nondecreasing_and_matches_oracle(self):
        constraints = [ConfidenceBound(1e-3, 0.9)]
        objective = FutureReliability(100)
        grid = build_grid(constraints, objective, 80)
        ns = [10, 100, 1000, 10_000, 100_000]
        points = curve(constraints, objective, ns, 0, grid=grid)
        values = [b for _, b in points]
        assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
        for n, bound in [points[0], points[2], points[4]]:
            check = oracle_solve(constraints, Observation(n, 0), objective, grid)
            assert bound == pytest.approx(check.bound, abs=1e-4)

    def test_stronger_belief_dominates_pointwise(self):
        objective = FutureReliability(100)
        ns = [10, 100, 1000, 10_000]
        weak = curve([ConfidenceBound(1e-3, 0.5)], objective, ns, 0)
        strong = curve([ConfidenceBound(1e-3, 0.9)], objective, ns, 0)
        for (_, low), (_, high) in zip(weak, strong):
            assert high >= low - 1e-9

    def test_unsorted_demands_rejected(self):
        with pytest.raises(ValueError):
            curve([MeanBound(0.1)], PosteriorExpectedPfd(), [10, 5], 0)

    def test_infeasible_constraints_raise(self):
        with pytest.raises(InfeasibleConstraintsError):
            curve(
                [ConfidenceBound(0.1, 0.9), MeanBound(0.005)],
                PosteriorExpectedPfd(),
                [10, 100],
                0,
            )
