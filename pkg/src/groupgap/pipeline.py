"""End-to-end solver: group selection, LP extraction, rounding, filling.

Stage chain and the exact inequalities it certifies:

1. Select groups with the reserved-capacity submodular search over the
   group LP value; the selection occupies at most half the bins.
2. Extract a saturated optimal fractional solution for the selected items;
   its value equals the selected groups' LP value.
3. Round to an almost feasible assignment worth at least the fractional
   value.
4. Fill: repair into a feasible assignment keeping at least half of that.

Together: final profit >= half the selected LP value, which is at least a
third of the best LP value reachable with the full capacity, giving a 1/6
worst-case ratio against the true optimum on instances whose groups each
occupy at most half the capacity.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .filling import FillStep, make_feasible_traced
from .lp_oracle import LpOracle
from .model import (
    Assignment,
    Instance,
    ZERO,
    assignment_profit,
    is_feasible,
    validate_instance,
)
from .rounding import round_to_assignment
from .submodular import GroundElement, OptConfig, maximize_with_reserve


@dataclass(frozen=True)
class SolveReport:
    """Per-stage values plus exact-inequality certificates."""

    selected_groups: tuple[int, ...]
    group_lp_value: Fraction
    fractional_value: Fraction
    rounded_profit: Fraction
    final_profit: Fraction
    satisfied_profit: Fraction
    upper_bound: Fraction
    certificates: Mapping[str, bool]
    stage_seconds: Mapping[str, float]

    def all_certified(self) -> bool:
        return all(self.certificates.values())


def upper_bound(inst: Instance) -> Fraction:
    """LP value over all items: relaxes integrality and the group coupling,
    so it upper-bounds the true optimum."""
    return LpOracle(inst).value(inst.item_ids)


def solve_traced(
    inst: Instance, config: OptConfig | None = None
) -> tuple[Assignment, SolveReport, tuple[FillStep, ...]]:
    """Run the full pipeline; also returns the filling step trace."""
    validate_instance(inst, strict=True)
    cfg = config or OptConfig()
    capacity = Fraction(inst.m)
    cfg = OptConfig(k=cfg.k, capacity=capacity)
    oracle = LpOracle(inst)

    t0 = time.perf_counter()
    ground = [GroundElement(g.id, inst.group_size(g.id)) for g in inst.groups]
    selected = maximize_with_reserve(
        lambda gids: oracle.group_value(gids), ground, cfg
    )
    t1 = time.perf_counter()

    selected_items = inst.group_items(selected)
    psi_star = oracle.value(selected_items)
    x = oracle.solution(selected_items)
    t2 = time.perf_counter()

    rounded = round_to_assignment(inst, x)
    rounded_profit = assignment_profit(inst, rounded)
    t3 = time.perf_counter()

    final, trace = make_feasible_traced(inst, rounded)
    final_profit = assignment_profit(inst, final)
    t4 = time.perf_counter()

    placed = final.placed_items()
    satisfied = [g for g in inst.groups if set(g.members) <= placed]
    satisfied_ids = {g.id for g in satisfied}
    satisfied_profit = ZERO
    for j, bin_items in enumerate(final.bins):
        for i in bin_items:
            if any(i in inst.group_map[gid].members for gid in satisfied_ids):
                satisfied_profit += inst.profit(i, j)

    bound = oracle.value(inst.item_ids)
    certificates = {
        "selected_size_within_half": inst.total_size(selected_items)
        <= Fraction(inst.m, 2),
        "fractional_matches_group_lp": x.value == psi_star,
        "rounded_at_least_fractional": rounded_profit >= x.value,
        "final_at_least_half_rounded": 2 * final_profit >= rounded_profit,
        "final_at_least_half_group_lp": 2 * final_profit >= psi_star,
        "final_feasible": is_feasible(inst, final),
        "selected_groups_packed": placed == selected_items,
        "satisfied_equals_final": satisfied_profit == final_profit,
    }
    report = SolveReport(
        selected_groups=tuple(sorted(selected)),
        group_lp_value=psi_star,
        fractional_value=x.value,
        rounded_profit=rounded_profit,
        final_profit=final_profit,
        satisfied_profit=satisfied_profit,
        upper_bound=bound,
        certificates=certificates,
        stage_seconds={
            "select": t1 - t0,
            "lp": t2 - t1,
            "round": t3 - t2,
            "fill": t4 - t3,
            "total": t4 - t0,
        },
    )
    return final, report, trace


def solve(
    inst: Instance, config: OptConfig | None = None
) -> tuple[Assignment, SolveReport]:
    """Solve an instance; requires strict validation (group sizes <= m/2)."""
    assignment, report, _trace = solve_traced(inst, config)
    return assignment, report
