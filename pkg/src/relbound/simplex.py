"""Dense two-phase simplex for small linear programs.

Sized for the problems this package generates: a handful of rows and up
to a few thousand columns. Bland's rule is used for both the entering
and the leaving variable, which guarantees termination on degenerate
bases at the cost of a few extra pivots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_COST_TOL = 1e-9
_PIVOT_TOL = 1e-11
_FEAS_TOL = 1e-7
#: a ray column whose reduced cost is this close to zero is roundoff noise,
#: not a genuinely improving direction
_RAY_TOL = 1e-6


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    value: float | None


def solve_lp(
    c,
    a_ub=None,
    b_ub=None,
    a_eq=None,
    b_eq=None,
    *,
    maximize: bool = False,
) -> LpResult:
    """Optimise ``c @ x`` subject to ``a_ub @ x <= b_ub``, ``a_eq @ x == b_eq``, ``x >= 0``."""
    c = np.asarray(c, dtype=float)
    n = c.size
    a_ub = np.zeros((0, n)) if a_ub is None else np.asarray(a_ub, dtype=float).reshape(-1, n)
    b_ub = np.zeros(0) if b_ub is None else np.atleast_1d(np.asarray(b_ub, dtype=float))
    a_eq = np.zeros((0, n)) if a_eq is None else np.asarray(a_eq, dtype=float).reshape(-1, n)
    b_eq = np.zeros(0) if b_eq is None else np.atleast_1d(np.asarray(b_eq, dtype=float))
    n_ub = b_ub.size

    # standard form: [a_eq 0; a_ub I][x; s] = [b_eq; b_ub], x, s >= 0
    m = a_eq.shape[0] + n_ub
    A = np.zeros((m, n + n_ub))
    A[: a_eq.shape[0], :n] = a_eq
    A[a_eq.shape[0] :, :n] = a_ub
    A[a_eq.shape[0] :, n:] = np.eye(n_ub)
    b = np.concatenate([b_eq, b_ub])
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    cost = np.concatenate([c * (-1.0 if maximize else 1.0), np.zeros(n_ub)])
    x_full, status = _two_phase(A, b, cost)
    if status != "optimal":
        return LpResult(status, None, None)
    x = x_full[:n]
    return LpResult("optimal", x, float(c @ x))


def _two_phase(A: np.ndarray, b: np.ndarray, cost: np.ndarray):
    m, nvar = A.shape
    if m == 0:
        if np.any(cost < -_COST_TOL):
            return None, "unbounded"
        return np.zeros(nvar), "optimal"

    # phase 1: artificial basis, minimise the sum of artificials
    T = np.zeros((m, nvar + m + 1))
    T[:, :nvar] = A
    T[:, nvar : nvar + m] = np.eye(m)
    T[:, -1] = b
    basis = list(range(nvar, nvar + m))
    z = np.zeros(nvar + m + 1)
    z[:nvar] = -T[:, :nvar].sum(axis=0)
    z[-1] = -T[:, -1].sum()
    # phase 1 only needs a feasible point, not dual optimality: stop as soon
    # as the artificial objective reaches zero (degenerate pivoting beyond
    # that point just churns the tableau)
    status = _pivot_loop(T, z, basis, n_cols=nvar + m, stop_value=_FEAS_TOL / 2)
    if status == "unbounded":  # cannot happen: phase-1 objective is bounded below
        return None, "unbounded"
    if -z[-1] > _FEAS_TOL:
        return None, "infeasible"

    # drive leftover artificials out of the basis; drop redundant rows
    keep_rows = []
    for i in range(m):
        if basis[i] < nvar:
            keep_rows.append(i)
            continue
        pivot_cols = np.nonzero(np.abs(T[i, :nvar]) > _PIVOT_TOL)[0]
        pivot_cols = [j for j in pivot_cols if j not in basis]
        if pivot_cols:
            _pivot(T, z, basis, i, pivot_cols[0])
            keep_rows.append(i)
        # else: the row is redundant (zero over the real variables)
    if len(keep_rows) < m:
        T = T[keep_rows]
        basis = [basis[i] for i in keep_rows]
        m = len(keep_rows)

    # phase 2: real objective over the real columns only
    T = np.hstack([T[:, :nvar], T[:, -1:]])
    z = np.zeros(nvar + 1)
    cb = cost[basis]
    z[:nvar] = cost - cb @ T[:, :nvar]
    z[-1] = -float(cb @ T[:, -1])
    status = _pivot_loop(T, z, basis, n_cols=nvar)
    if status != "optimal":
        return None, status

    x = np.zeros(nvar)
    for i, var in enumerate(basis):
        x[var] = T[i, -1]
    return x, "optimal"


#: consecutive degenerate pivots before switching from Dantzig to Bland
_STALL_LIMIT = 12


def _pivot_loop(T, z, basis, n_cols, max_iter=100_000, stop_value=None):
    blocked: set[int] = set()
    stalled = 0
    for _ in range(max_iter):
        if stop_value is not None and -z[-1] <= stop_value:
            return "optimal"
        costs = z[:n_cols]
        if blocked:
            costs = costs.copy()
            costs[list(blocked)] = 0.0
        if stalled < _STALL_LIMIT:
            j = int(np.argmin(costs))  # Dantzig: steepest reduced cost
            if costs[j] >= -_COST_TOL:
                return "optimal"
        else:
            # degenerate stretch: Bland's smallest-index rule cannot cycle
            negative = np.nonzero(costs < -_COST_TOL)[0]
            if negative.size == 0:
                return "optimal"
            j = int(negative[0])
        col = T[:, j]
        rows = np.nonzero(col > _PIVOT_TOL)[0]
        if rows.size == 0:
            if z[j] > -_RAY_TOL:
                # a zero-cost ray whose reduced cost is roundoff noise
                blocked.add(j)
                continue
            return "unbounded"
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12]
        i = min(ties, key=lambda r: basis[r])  # Bland on the leaving variable
        before = z[-1]
        _pivot(T, z, basis, int(i), j)
        stalled = stalled + 1 if z[-1] <= before + 1e-15 else 0
    raise RuntimeError("simplex iteration limit reached")


def _pivot(T, z, basis, i, j):
    T[i] /= T[i, j]
    for r in range(T.shape[0]):
        if r != i and T[r, j] != 0.0:
            T[r] -= T[r, j] * T[i]
    if z[j] != 0.0:
        z -= z[j] * T[i]
    basis[i] = j
