"""Rounding a saturated fractional solution to an almost feasible assignment.

Each bin is split into ranked slots: scanning the items of a bin in
non-increasing size order, fractions fill the current slot up to load 1
before the next slot opens, so every slot but a bin's last carries exactly
one unit of fractional load and slot ranks sort items by size. The slot
graph admits a fractional matching covering every item with weight equal
to the LP objective, hence it also admits an integral matching covering
every item with at least that weight. Reading an assignment off that
matching overflows each bin by at most its rank-1 item.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from ._flow import FlowNetwork
from .errors import NoCompleteMatching, UnsaturatedInput
from .model import ONE, ZERO, Assignment, FractionalSolution, Instance


@dataclass(frozen=True)
class Slot:
    bin: int
    rank: int  # 1-based within the bin


@dataclass(frozen=True)
class SlotEdge:
    item: int
    slot: Slot
    weight: Fraction
    load: Fraction


@dataclass(frozen=True)
class SlotGraph:
    items: tuple[int, ...]  # support items, largest first
    slots: tuple[Slot, ...]
    edges: tuple[SlotEdge, ...]

    def slot_load(self, slot: Slot) -> Fraction:
        return sum((e.load for e in self.edges if e.slot == slot), ZERO)

    def fractional_weight(self) -> Fraction:
        return sum((e.weight * e.load for e in self.edges), ZERO)


def build_slot_graph(inst: Instance, x: FractionalSolution) -> SlotGraph:
    """Slot construction over a saturated fractional solution.

    An exactly-full slot opens its successor directly instead of carrying a
    zero-load edge; completeness and weight of the fractional matching are
    unaffected. Size ties among items break by ascending id.
    """
    support = x.support_items()
    totals = {i: ZERO for i in support}
    per_bin: dict[int, dict[int, Fraction]] = {j: {} for j in range(inst.m)}
    for (i, j), f in x.entries.items():
        totals[i] += f
        per_bin[j][i] = f
    for i in sorted(support):
        if totals[i] != ONE:
            raise UnsaturatedInput(i, totals[i])

    order = sorted(support, key=lambda i: (-inst.size(i), i))
    slots: list[Slot] = []
    edges: list[SlotEdge] = []
    for j in range(inst.m):
        rank = 1
        load = ZERO
        opened = False
        for i in order:
            frac = per_bin[j].get(i)
            if frac is None:
                continue
            if not opened:
                slots.append(Slot(j, rank))
                opened = True
            take = min(frac, ONE - load)
            if take > ZERO:
                edges.append(SlotEdge(i, Slot(j, rank), inst.profit(i, j), take))
                load += take
            if take < frac:
                rank += 1
                slots.append(Slot(j, rank))
                load = frac - take
                edges.append(SlotEdge(i, Slot(j, rank), inst.profit(i, j), load))
    return SlotGraph(items=tuple(order), slots=tuple(slots), edges=tuple(edges))


def complete_matching(g: SlotGraph) -> dict[int, Slot]:
    """Max-weight matching of slots that covers every item.

    Solved as a min-cost flow of exactly |items| units over the slot edges,
    with costs equal to negated weights scaled to integers.
    """
    if not g.items:
        return {}
    item_idx = {i: 1 + k for k, i in enumerate(g.items)}
    slot_idx = {s: 1 + len(g.items) + k for k, s in enumerate(g.slots)}
    sink = 1 + len(g.items) + len(g.slots)
    den = 1
    for e in g.edges:
        den = lcm(den, e.weight.denominator)
    net = FlowNetwork(sink + 1)
    for i in g.items:
        net.add_edge(0, item_idx[i], 1, 0)
    edge_ids = []
    for e in g.edges:
        cost = -int(e.weight * den)
        edge_ids.append((e, net.add_edge(item_idx[e.item], slot_idx[e.slot], 1, cost)))
    for s in g.slots:
        net.add_edge(slot_idx[s], sink, 1, 0)
    flow, _cost = net.run(0, sink, max_flow=len(g.items))
    if flow != len(g.items):
        raise NoCompleteMatching(
            f"matched only {flow} of {len(g.items)} items; slot graph invariant broken"
        )
    matching: dict[int, Slot] = {}
    for e, idx in edge_ids:
        if net.flow_on(idx) > 0:
            matching[e.item] = e.slot
    return matching


def round_to_assignment(inst: Instance, x: FractionalSolution) -> Assignment:
    """Convert a saturated fractional solution to an almost feasible assignment.

    The result places exactly the support items, earns at least the
    fractional objective, and overflows each bin by at most the single item
    matched to that bin's first slot.
    """
    g = build_slot_graph(inst, x)
    matching = complete_matching(g)
    bins: list[set[int]] = [set() for _ in range(inst.m)]
    rank_one: dict[int, int] = {}
    for item, slot in matching.items():
        bins[slot.bin].add(item)
        if slot.rank == 1:
            rank_one[slot.bin] = item
    u = Assignment(bins=tuple(frozenset(b) for b in bins))

    placed = u.placed_items()
    assert placed == x.support_items()
    profit = sum((inst.profit(i, slot.bin) for i, slot in matching.items()), ZERO)
    assert profit >= x.value
    for j in range(inst.m):
        load = inst.total_size(u.bins[j])
        overhang = inst.size(rank_one[j]) if j in rank_one else ZERO
        assert load - overhang <= ONE
    return u
