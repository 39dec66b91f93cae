"""
Discrete optimal transport between distributions over an ordinal action space.

This service provides:
- Ground cost construction (absolute, fixed and boundary distances)
- An exact transportation-simplex solver returning plans and dual potentials
- The CDF closed form for absolute distance with order 1
- A log-domain Sinkhorn approximation for large action spaces
"""

import logging
from collections import deque
from functools import lru_cache
from typing import Dict, List, Set, Tuple

import numpy as np
from scipy.special import logsumexp

from type_definitions.distribution_types import (
    ActionDistribution,
    ActionSpace,
    CostMatrix,
    GroundDistance,
    OtSolution,
    TransportPlan,
)
from utils.validators import (
    SolverError,
    ValidationError,
    validate_mass,
    validate_positive_int,
)

logger = logging.getLogger("BoundedRational.Transport")

REDUCED_COST_TOL = 1e-12
DEGENERATE_STREAK_LIMIT = 25
SINKHORN_SMOOTHING = 1e-12


def build_cost_matrix(
    space: ActionSpace, dist: GroundDistance, order: int = 1
) -> CostMatrix:
    """
    Construct C with C[i][j] = d(i, j) ** order.

    Args:
        space: Action space
        dist: Ground distance definition
        order: Positive integer exponent n

    Returns:
        Symmetric cost matrix with zero diagonal

    Raises:
        ValidationError: If order < 1 or the boundary index is out of range
    """
    order = validate_positive_int(order, "order")
    if dist.kind == "boundary" and not 0 <= dist.boundary_index < space.size:
        raise ValidationError(
            f"Boundary index {dist.boundary_index} outside action range "
            f"0..{space.size - 1}",
            field="boundary_index",
        )
    return _cached_cost_matrix(space.size, dist, order)


@lru_cache(maxsize=64)
def _cached_cost_matrix(size: int, dist: GroundDistance, order: int) -> CostMatrix:
    entries = dist.matrix(size) ** order
    logger.debug(f"Built {size}x{size} {dist.kind} cost matrix of order {order}")
    return CostMatrix(entries, order, dist)


def _check_pair(
    p: ActionDistribution, q: ActionDistribution, cost: CostMatrix
) -> Tuple[np.ndarray, np.ndarray]:
    if p.size != q.size:
        raise ValidationError(
            f"Dimension mismatch: {p.size} vs {q.size} actions", field="q"
        )
    if cost.size != p.size:
        raise ValidationError(
            f"Cost matrix is {cost.size}x{cost.size}, distributions have "
            f"{p.size} actions",
            field="cost",
        )
    # Distributions are normalized on construction; renormalize again so
    # that both marginals carry identical total mass in floating point.
    return validate_mass(p.mass), validate_mass(q.mass)


def transport_plan_cost(cost: CostMatrix, plan: np.ndarray) -> float:
    """Objective <C, T>."""
    return float(np.sum(cost.entries * plan))


def dual_objective(
    solution: OtSolution, p: ActionDistribution, q: ActionDistribution
) -> float:
    """Kantorovich dual value sum_i u_i p_i + sum_j v_j q_j."""
    return float(
        np.dot(solution.dual_source, p.mass) + np.dot(solution.dual_target, q.mass)
    )


class _TransportationSimplex:
    """
    Transportation simplex on a spanning-tree basis.

    Rows are the policy side (supply a = p), columns the prior side
    (demand b = q). The basis always holds exactly rows + cols - 1 cells,
    zero-valued cells included, so degenerate vertices stay representable.
    """

    def __init__(self, a: np.ndarray, b: np.ndarray, cost: np.ndarray) -> None:
        self.a = a
        self.b = b
        self.cost = cost
        self.n, self.m = cost.shape
        self.flow: Dict[Tuple[int, int], float] = {}
        self.iterations = 0

    def north_west_corner(self) -> None:
        a_rem = self.a.copy()
        b_rem = self.b.copy()
        i = j = 0
        while True:
            x = min(a_rem[i], b_rem[j])
            self.flow[(i, j)] = x
            a_rem[i] -= x
            b_rem[j] -= x
            if i == self.n - 1 and j == self.m - 1:
                break
            if i == self.n - 1:
                j += 1
            elif j == self.m - 1:
                i += 1
            elif a_rem[i] <= b_rem[j]:
                i += 1
            else:
                j += 1

    def _adjacency(self) -> Tuple[List[List[int]], List[List[int]]]:
        rows: List[List[int]] = [[] for _ in range(self.n)]
        cols: List[List[int]] = [[] for _ in range(self.m)]
        for i, j in self.flow:
            rows[i].append(j)
            cols[j].append(i)
        return rows, cols

    def potentials(self) -> Tuple[np.ndarray, np.ndarray]:
        """Solve u_i + v_j = C_ij on basic cells with u_0 = 0."""
        rows, cols = self._adjacency()
        u = np.full(self.n, np.nan)
        v = np.full(self.m, np.nan)
        u[0] = 0.0
        queue = deque([("r", 0)])
        while queue:
            side, k = queue.popleft()
            if side == "r":
                for j in rows[k]:
                    if np.isnan(v[j]):
                        v[j] = self.cost[k, j] - u[k]
                        queue.append(("c", j))
            else:
                for i in cols[k]:
                    if np.isnan(u[i]):
                        u[i] = self.cost[i, k] - v[k]
                        queue.append(("r", i))
        if np.isnan(u).any() or np.isnan(v).any():
            raise SolverError("Transportation basis is not a spanning tree")
        return u, v

    def _cycle(self, enter: Tuple[int, int]) -> List[Tuple[int, int]]:
        """Cells of the unique cycle closed by the entering cell, entering first."""
        rows, cols = self._adjacency()
        k, target = enter
        # Search the tree from column node `target` back to row node `k`.
        parent: Dict[Tuple[str, int], Tuple[str, int]] = {}
        start = ("c", target)
        goal = ("r", k)
        seen: Set[Tuple[str, int]] = {start}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            if node == goal:
                break
            side, idx = node
            neighbours = (
                [("c", j) for j in rows[idx]]
                if side == "r"
                else [("r", i) for i in cols[idx]]
            )
            for nxt in neighbours:
                if nxt not in seen:
                    seen.add(nxt)
                    parent[nxt] = node
                    queue.append(nxt)
        if goal not in seen:
            raise SolverError(f"No basis path closes the cycle for cell {enter}")

        path = [goal]
        while path[-1] != start:
            path.append(parent[path[-1]])
        cells = [enter]
        for here, there in zip(path, path[1:]):
            if here[0] == "r":
                cells.append((here[1], there[1]))
            else:
                cells.append((there[1], here[1]))
        return cells

    def _entering(
        self, reduced: np.ndarray, bland: bool
    ) -> Tuple[int, int]:
        negative = reduced < -REDUCED_COST_TOL * max(1.0, float(np.abs(self.cost).max()))
        for cell in self.flow:
            negative[cell] = False
        if not negative.any():
            return -1, -1
        if bland:
            flat = int(np.flatnonzero(negative.reshape(-1))[0])
        else:
            masked = np.where(negative, reduced, np.inf)
            flat = int(np.argmin(masked))
        return divmod(flat, self.m)

    def solve(self, max_iter: int) -> Tuple[np.ndarray, np.ndarray, bool]:
        self.north_west_corner()
        degenerate_streak = 0
        while self.iterations < max_iter:
            u, v = self.potentials()
            reduced = self.cost - u[:, None] - v[None, :]
            enter = self._entering(
                reduced, bland=degenerate_streak >= DEGENERATE_STREAK_LIMIT
            )
            if enter[0] < 0:
                return u, v, True

            cycle = self._cycle(enter)
            donors = cycle[1::2]
            theta = min(self.flow[c] for c in donors)
            # Ties on the leaving cell resolve to the lowest flat index.
            leaving = min(
                (c for c in donors if self.flow[c] == theta),
                key=lambda c: c[0] * self.m + c[1],
            )
            self.flow[enter] = 0.0
            for pos, cell in enumerate(cycle):
                self.flow[cell] += theta if pos % 2 == 0 else -theta
            del self.flow[leaving]
            for cell in donors:
                if self.flow.get(cell, 0.0) < 0.0:
                    self.flow[cell] = 0.0

            degenerate_streak = degenerate_streak + 1 if theta == 0.0 else 0
            self.iterations += 1

        u, v = self.potentials()
        return u, v, False

    def plan(self) -> np.ndarray:
        plan = np.zeros((self.n, self.m))
        for (i, j), x in self.flow.items():
            plan[i, j] = x
        return plan


def wasserstein_exact(
    p: ActionDistribution,
    q: ActionDistribution,
    cost: CostMatrix,
    root: bool = False,
    max_iter: int = 100_000,
) -> OtSolution:
    """
    Solve the transportation LP exactly.

    Args:
        p: Policy (row marginal)
        q: Prior (column marginal)
        cost: Cost matrix over the same action space
        root: Return the order-th root of the objective instead of the raw value
        max_iter: Pivot limit

    Returns:
        Optimal solution with plan and Kantorovich potentials

    Raises:
        ValidationError: On dimension mismatch or non-normalized input
        SolverError: If the pivot limit is reached
    """
    a, b = _check_pair(p, q, cost)
    solver = _TransportationSimplex(a, b, np.asarray(cost.entries))
    u, v, optimal = solver.solve(max_iter)
    if not optimal:
        raise SolverError(f"Transportation simplex hit the pivot limit {max_iter}")

    plan = solver.plan()
    objective = max(transport_plan_cost(cost, plan), 0.0)
    distance = objective ** (1.0 / cost.order) if root else objective
    logger.debug(f"Exact OT solved in {solver.iterations} pivots, W={objective:.6g}")
    return OtSolution(
        distance=distance,
        plan=TransportPlan(plan, p, q),
        dual_source=u,
        dual_target=v,
        iterations=solver.iterations,
        converged=True,
        method="exact",
    )


def wasserstein_1d_closed_form(p: ActionDistribution, q: ActionDistribution) -> float:
    """
    W1 for unit-spaced ordinal actions: sum_k |CDF_p(k) - CDF_q(k)|.

    Only valid for the absolute ground distance with order 1.
    """
    if p.size != q.size:
        raise ValidationError(
            f"Dimension mismatch: {p.size} vs {q.size} actions", field="q"
        )
    gap = np.cumsum(p.mass)[:-1] - np.cumsum(q.mass)[:-1]
    return float(np.abs(gap).sum())


def _smoothed(mass: np.ndarray) -> np.ndarray:
    out = np.where(mass > 0.0, mass, SINKHORN_SMOOTHING)
    return out / out.sum()


def sinkhorn_approx(
    p: ActionDistribution,
    q: ActionDistribution,
    cost: CostMatrix,
    reg_strength: float,
    max_iter: int = 10_000,
    tol: float = 1e-9,
    scaling_factor: float = 0.5,
) -> OtSolution:
    """
    Entropic approximation of the transport cost.

    Zero entries of p and q are raised to 1e-12 and renormalized before
    iterating, so this path is approximation-only. The regularization is
    annealed geometrically from max(C) down to reg_strength with warm-started
    log-domain potentials. The reported distance is <C, T> for the final
    entropic plan T; for p = q it is bounded by reg_strength * log(size).

    Args:
        p: Policy (row marginal)
        q: Prior (column marginal)
        cost: Cost matrix
        reg_strength: Target entropic regularization (> 0)
        max_iter: Iteration budget shared across all annealing stages
        tol: Marginal residual at which the final stage stops
        scaling_factor: Multiplicative decrease of the regularization per stage

    Returns:
        Solution with converged=False if the budget ran out
    """
    if not reg_strength > 0.0:
        raise ValidationError("reg_strength must be positive", field="reg_strength")
    if not 0.0 < scaling_factor < 1.0:
        raise ValidationError("scaling_factor must lie in (0, 1)", "scaling_factor")
    a, b = _check_pair(p, q, cost)
    a, b = _smoothed(a), _smoothed(b)
    log_a, log_b = np.log(a), np.log(b)
    c = np.asarray(cost.entries)

    schedule: List[float] = []
    eps = max(float(c.max()), reg_strength)
    while eps > reg_strength:
        schedule.append(eps)
        eps *= scaling_factor
    schedule.append(reg_strength)

    f = np.zeros(a.size)
    g = np.zeros(b.size)
    iterations = 0
    residual = np.inf
    converged = False
    current = schedule[0]
    for stage, eps in enumerate(schedule):
        current = eps
        final_stage = stage == len(schedule) - 1
        stage_tol = tol if final_stage else max(tol, 1e-3 * eps)
        while iterations < max_iter:
            f = eps * log_a - eps * logsumexp((g[None, :] - c) / eps, axis=1)
            g = eps * log_b - eps * logsumexp((f[:, None] - c) / eps, axis=0)
            iterations += 1
            log_plan = (f[:, None] + g[None, :] - c) / eps
            residual = float(np.abs(np.exp(logsumexp(log_plan, axis=1)) - a).max())
            if residual <= stage_tol:
                converged = final_stage
                break
        if iterations >= max_iter:
            break

    plan = np.exp((f[:, None] + g[None, :] - c) / current)
    distance = transport_plan_cost(cost, plan)
    if not converged:
        logger.warning(
            f"Sinkhorn did not converge in {max_iter} iterations "
            f"(residual {residual:.3g}, reg {reg_strength:g})"
        )
    else:
        logger.debug(f"Sinkhorn converged in {iterations} iterations")
    return OtSolution(
        distance=distance,
        plan=TransportPlan(plan, p, q),
        dual_source=f,
        dual_target=g,
        iterations=iterations,
        converged=converged,
        method="sinkhorn",
    )
