"""Filling phase: repair an almost feasible assignment into a feasible one.

Bins are classified once by load: overfull (> 1), semi-full (in [1/2, 1])
and semi-vacant (< 1/2); an item is big when its size exceeds 1/2. Four
local repacking moves each take one overfull bin plus up to two semi-vacant
partners, restore feasibility on them while keeping at least half their
combined profit, and evict only small items. A bin that participated in a
move is marked resolved and never touched again; semi-full bins are
resolved immediately. When the input occupies at most half the total
capacity, some move always applies while an overfull bin remains, and the
evicted items always fit back somewhere at the end, so the result keeps
every input item and at least half the input profit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    InternalStuck,
    NotAlmostFeasible,
    PreconditionViolated,
    ReinsertionFailed,
)
from .model import (
    HALF,
    ONE,
    ZERO,
    Assignment,
    Instance,
    assignment_profit,
    bin_load,
    is_almost_feasible,
)

KEEP_BETTER_HALF = "keep-better-half"
SWAP_WITH_VACANT = "swap-with-vacant"
MOVE_BIG_TO_VACANT = "move-big-to-vacant"
SPLIT_ACROSS_VACANTS = "split-across-vacants"
REINSERT = "reinsert"


@dataclass(frozen=True)
class FillStep:
    """One trace record: a repacking move or a single reinsertion."""

    kind: str
    bins: tuple[int, ...]
    evicted: tuple[int, ...]
    profit_before: Fraction
    profit_after: Fraction
    counts: tuple[int, int] | None = None  # (overfull, semi-vacant) when splitting


def removal_witness(inst: Instance, bin_items: frozenset[int]) -> int | None:
    """Largest item whose removal brings the bin to load <= 1 (ties: lowest id)."""
    load = inst.total_size(bin_items)
    candidates = [i for i in bin_items if load - inst.size(i) <= ONE]
    if not candidates:
        return None
    return min(candidates, key=lambda i: (-inst.size(i), i))


def feasible_partition(
    inst: Instance, bin_items: frozenset[int], witness: int
) -> tuple[frozenset[int], frozenset[int]]:
    """Split a bin's items into two feasible halves, the first holding ``witness``.

    Small items are first-fit packed (largest first, ties by id) onto the
    witness side while it stays within capacity; everything else falls to
    the other side, which is feasible because removing the witness already
    leaves at most one unit. A bin with two big items necessarily ends with
    one on each side.
    """
    if witness not in bin_items:
        raise ValueError(f"witness {witness} not in bin")
    rest = bin_items - {witness}
    if inst.total_size(rest) > ONE:
        raise NotAlmostFeasible(
            f"removing {witness} leaves load {inst.total_size(rest)} > 1"
        )
    side_a = {witness}
    size_a = inst.size(witness)
    side_b: set[int] = set()
    for i in sorted(rest, key=lambda i: (-inst.size(i), i)):
        if inst.size(i) <= HALF and size_a + inst.size(i) <= ONE:
            side_a.add(i)
            size_a += inst.size(i)
        else:
            side_b.add(i)
    return frozenset(side_a), frozenset(side_b)


def reinsert_evicted(
    inst: Instance, u: Assignment, evicted: Iterable[int]
) -> Assignment:
    """Place evicted items back into bins with room, harvesting profit.

    Items go in by descending size (ties by id); each picks the feasible bin
    maximizing its own profit (ties by lowest bin index). Placement always
    succeeds when all evicted items are small and the grand total size is at
    most half the capacity.
    """
    bins = [set(b) for b in u.bins]
    loads = [inst.total_size(b) for b in bins]
    for i in sorted(evicted, key=lambda i: (-inst.size(i), i)):
        size = inst.size(i)
        best_j = None
        best_profit = None
        for j in range(inst.m):
            if loads[j] + size > ONE:
                continue
            p = inst.profit(i, j)
            if best_profit is None or p > best_profit:
                best_j = j
                best_profit = p
        if best_j is None:
            raise ReinsertionFailed(f"no bin has room for evicted item {i}")
        bins[best_j].add(i)
        loads[best_j] += size
    return Assignment(bins=tuple(frozenset(b) for b in bins))


class _FillState:
    def __init__(self, inst: Instance, u: Assignment):
        self.inst = inst
        self.bins: list[set[int]] = [set(b) for b in u.bins]
        self.loads: list[Fraction] = [bin_load(inst, u, j) for j in range(inst.m)]
        self.resolved: set[int] = set()
        self.evicted: set[int] = set()
        self.trace: list[FillStep] = []
        # Semi-full bins never participate in a move; retire them up front.
        for j in range(inst.m):
            if HALF <= self.loads[j] <= ONE:
                self.resolved.add(j)

    def overfull(self) -> list[int]:
        return [
            j
            for j in range(self.inst.m)
            if j not in self.resolved and self.loads[j] > ONE
        ]

    def vacant(self) -> list[int]:
        return [
            j
            for j in range(self.inst.m)
            if j not in self.resolved and self.loads[j] < HALF
        ]

    def bigs(self, j: int) -> list[int]:
        return sorted(i for i in self.bins[j] if self.inst.size(i) > HALF)

    def bin_profit(self, j: int, items: Iterable[int]) -> Fraction:
        return sum((self.inst.profit(i, j) for i in items), ZERO)

    def partition(self, j: int) -> tuple[frozenset[int], frozenset[int]]:
        witness = removal_witness(self.inst, frozenset(self.bins[j]))
        if witness is None:
            raise NotAlmostFeasible(f"bin {j} overflows by more than one item")
        return feasible_partition(self.inst, frozenset(self.bins[j]), witness)

    def evict(self, items: Iterable[int]) -> tuple[int, ...]:
        out = tuple(sorted(items))
        for i in out:
            assert self.inst.size(i) <= HALF, "only small items may be evicted"
            self.evicted.add(i)
        return out

    def set_bin(self, j: int, items: Iterable[int]) -> None:
        self.bins[j] = set(items)
        self.loads[j] = self.inst.total_size(self.bins[j])
        assert self.loads[j] <= ONE

    def apply(
        self,
        kind: str,
        participants: Sequence[int],
        new_contents: dict[int, set[int]],
        evicted: Iterable[int],
        counts: tuple[int, int] | None = None,
    ) -> None:
        before = sum((self.bin_profit(j, self.bins[j]) for j in participants), ZERO)
        gone = self.evict(evicted)
        for j, items in new_contents.items():
            self.set_bin(j, items)
        after = sum((self.bin_profit(j, self.bins[j]) for j in participants), ZERO)
        assert 2 * after >= before, f"{kind} kept less than half the profit"
        self.resolved.update(participants)
        self.trace.append(
            FillStep(
                kind=kind,
                bins=tuple(participants),
                evicted=gone,
                profit_before=before,
                profit_after=after,
                counts=counts,
            )
        )


def _apply_keep_better_half(st: _FillState, j: int) -> None:
    side_a, side_b = st.partition(j)
    if st.bin_profit(j, side_a) > st.bin_profit(j, side_b):
        keep, gone = side_a, side_b
    else:
        keep, gone = side_b, side_a
    st.apply(KEEP_BETTER_HALF, [j], {j: set(keep)}, gone)


def _apply_swap_with_vacant(st: _FillState, j: int, vac: int) -> None:
    side_a, side_b = st.partition(j)
    big_side, rest_side = (side_a, side_b) if st.bigs(j)[0] in side_a else (side_b, side_a)
    if st.bin_profit(j, big_side) + st.bin_profit(vac, st.bins[vac]) > st.bin_profit(
        j, rest_side
    ):
        st.apply(SWAP_WITH_VACANT, [j, vac], {j: set(big_side)}, rest_side)
    else:
        st.apply(
            SWAP_WITH_VACANT,
            [j, vac],
            {j: set(rest_side), vac: set(big_side)},
            set(st.bins[vac]),
        )


def _apply_move_big_to_vacant(st: _FillState, j: int, vac: int, mover: int) -> None:
    side_a, side_b = st.partition(j)
    mover_side, other_side = (side_a, side_b) if mover in side_a else (side_b, side_a)
    if st.bin_profit(j, other_side) + st.bin_profit(vac, st.bins[vac]) > st.bin_profit(
        j, mover_side
    ):
        st.apply(
            MOVE_BIG_TO_VACANT,
            [j, vac],
            {j: set(other_side), vac: st.bins[vac] | {mover}},
            mover_side - {mover},
        )
    else:
        st.apply(
            MOVE_BIG_TO_VACANT,
            [j, vac],
            {j: set(mover_side), vac: set(other_side)},
            set(st.bins[vac]),
        )


def _apply_split_across_vacants(
    st: _FillState, j: int, vac1: int, vac2: int, counts: tuple[int, int]
) -> None:
    side_a, side_b = st.partition(j)
    keep_first = st.bin_profit(j, side_a) + st.bin_profit(vac1, st.bins[vac1])
    keep_second = st.bin_profit(j, side_b) + st.bin_profit(vac2, st.bins[vac2])
    if keep_first > keep_second:
        st.apply(
            SPLIT_ACROSS_VACANTS,
            [j, vac1, vac2],
            {j: set(side_a), vac2: set(side_b)},
            set(st.bins[vac2]),
            counts=counts,
        )
    else:
        st.apply(
            SPLIT_ACROSS_VACANTS,
            [j, vac1, vac2],
            {j: set(side_b), vac1: set(side_a)},
            set(st.bins[vac1]),
            counts=counts,
        )


def make_feasible_traced(
    inst: Instance, u: Assignment
) -> tuple[Assignment, tuple[FillStep, ...]]:
    """Repair an almost feasible assignment; returns the result and a step trace.

    Requires an almost feasible input with no pending evictions whose items
    total at most half the capacity; outside that regime no profit guarantee
    exists and the call fails fast.
    """
    if u.evicted:
        raise PreconditionViolated("input assignment has pending evictions")
    if not is_almost_feasible(inst, u):
        raise PreconditionViolated("input assignment is not almost feasible")
    total = inst.total_size(u.placed_items())
    if total > Fraction(inst.m, 2):
        raise PreconditionViolated(
            f"placed items total size {total} > half capacity {Fraction(inst.m, 2)}"
        )
    start_profit = assignment_profit(inst, u)

    st = _FillState(inst, u)
    # First the moves needing at most one partner, re-scanned in priority
    # order after every application.
    while True:
        over = st.overfull()
        if not over:
            break
        no_big = [j for j in over if len(st.bigs(j)) == 0]
        if no_big:
            _apply_keep_better_half(st, no_big[0])
            continue
        vac = st.vacant()
        one_big = [j for j in over if len(st.bigs(j)) == 1]
        if one_big and vac:
            _apply_swap_with_vacant(st, one_big[0], vac[0])
            continue
        fired = False
        for j in over:
            bigs = st.bigs(j)
            if len(bigs) != 2:
                continue
            for candidate in vac:
                movers = [i for i in bigs if inst.size(i) + st.loads[candidate] <= ONE]
                if movers:
                    _apply_move_big_to_vacant(st, j, candidate, movers[0])
                    fired = True
                    break
            if fired:
                break
        if not fired:
            break

    # Any surviving overfull bin must hold exactly two bigs, none of which
    # fits a remaining semi-vacant bin; otherwise a move above was missed.
    over = st.overfull()
    vac = st.vacant()
    for j in over:
        if len(st.bigs(j)) != 2:
            raise InternalStuck(f"overfull bin {j} survived with {len(st.bigs(j))} bigs")
        for i in st.bigs(j):
            for candidate in vac:
                if inst.size(i) + st.loads[candidate] <= ONE:
                    raise InternalStuck(f"big {i} fits bin {candidate} but no move fired")

    while True:
        over = st.overfull()
        if not over:
            break
        vac = st.vacant()
        counts = (len(over), len(vac))
        if not len(vac) > 2 * len(over):
            raise InternalStuck(
                f"semi-vacant surplus guard failed: {len(vac)} <= 2 * {len(over)}"
            )
        _apply_split_across_vacants(st, over[0], vac[0], vac[1], counts)

    for i in sorted(st.evicted, key=lambda i: (-inst.size(i), i)):
        size = inst.size(i)
        best_j = None
        best_profit = None
        for j in range(inst.m):
            if st.loads[j] + size > ONE:
                continue
            p = inst.profit(i, j)
            if best_profit is None or p > best_profit:
                best_j = j
                best_profit = p
        if best_j is None:
            raise ReinsertionFailed(f"no bin has room for evicted item {i}")
        st.bins[best_j].add(i)
        st.loads[best_j] += size
        st.trace.append(
            FillStep(
                kind=REINSERT,
                bins=(best_j,),
                evicted=(),
                profit_before=ZERO,
                profit_after=best_profit,
            )
        )

    result = Assignment(bins=tuple(frozenset(b) for b in st.bins))
    assert result.placed_items() == u.placed_items()
    assert all(load <= ONE for load in st.loads)
    assert 2 * assignment_profit(inst, result) >= start_profit
    return result, tuple(st.trace)


def make_feasible(inst: Instance, u: Assignment) -> Assignment:
    """Repair an almost feasible assignment into a feasible one.

    Keeps every input item and at least half the input profit (exactly, in
    rational arithmetic).
    """
    result, _trace = make_feasible_traced(inst, u)
    return result
