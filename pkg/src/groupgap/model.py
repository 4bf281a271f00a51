"""Core domain types: items, groups, instances, fractional solutions, assignments.

All quantities (sizes, profits, loads, objective values) are exact rationals;
no solver path ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .errors import (
    BadBinIndex,
    BadPartition,
    BadSize,
    NegativeProfit,
    OversizedGroup,
    ValidationError,
)

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def parse_rational(text: str) -> Fraction:
    """Parse an exact rational from a ``"p/q"`` (or plain integer) string.

    Raises ValueError on malformed input, including zero denominators.
    """
    try:
        return Fraction(str(text))
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in rational {text!r}") from None
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None


def render_rational(value: Fraction) -> str:
    """Render a rational in lowest terms, e.g. ``"3/4"`` or ``"5"``."""
    return str(Fraction(value))


@dataclass(frozen=True)
class Item:
    id: int
    size: Fraction


@dataclass(frozen=True)
class Group:
    id: int
    members: tuple[int, ...]


@dataclass(frozen=True)
class Instance:
    """A grouped assignment instance over ``m`` unit-capacity bins.

    Bin indices are 0-based everywhere inside the library; the file format
    (see :mod:`groupgap.io`) is 1-based. ``profits`` is sparse: a missing
    (item, bin) pair means profit 0. Instances are immutable value objects
    and safe to share across workers.
    """

    m: int
    items: tuple[Item, ...]
    groups: tuple[Group, ...]
    profits: Mapping[tuple[int, int], Fraction]

    @cached_property
    def item_map(self) -> dict[int, Item]:
        return {it.id: it for it in self.items}

    @cached_property
    def group_map(self) -> dict[int, Group]:
        return {g.id: g for g in self.groups}

    @cached_property
    def item_ids(self) -> frozenset[int]:
        return frozenset(it.id for it in self.items)

    def size(self, item_id: int) -> Fraction:
        return self.item_map[item_id].size

    def profit(self, item_id: int, bin_index: int) -> Fraction:
        return self.profits.get((item_id, bin_index), ZERO)

    def group_items(self, group_ids: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for gid in group_ids:
            out.update(self.group_map[gid].members)
        return frozenset(out)

    def group_size(self, group_id: int) -> Fraction:
        return sum((self.size(i) for i in self.group_map[group_id].members), ZERO)

    def total_size(self, item_ids: Iterable[int]) -> Fraction:
        return sum((self.size(i) for i in item_ids), ZERO)


@dataclass(frozen=True)
class FractionalSolution:
    """Sparse feasible point of the assignment LP, with its cached objective.

    ``entries`` maps (item id, bin index) to a fraction in (0, 1].
    """

    entries: Mapping[tuple[int, int], Fraction]
    value: Fraction

    def support_items(self) -> frozenset[int]:
        return frozenset(i for (i, _j) in self.entries)

    def item_total(self, item_id: int) -> Fraction:
        return sum((f for (i, _j), f in self.entries.items() if i == item_id), ZERO)

    def recompute_value(self, inst: Instance) -> Fraction:
        return sum((f * inst.profit(i, j) for (i, j), f in self.entries.items()), ZERO)


@dataclass(frozen=True)
class Assignment:
    """Per-bin item sets; ``evicted`` is only populated mid-filling."""

    bins: tuple[frozenset[int], ...]
    evicted: frozenset[int] = field(default_factory=frozenset)

    def placed_items(self) -> frozenset[int]:
        out: set[int] = set()
        for b in self.bins:
            out.update(b)
        return frozenset(out)


def empty_assignment(m: int) -> Assignment:
    return Assignment(bins=tuple(frozenset() for _ in range(m)))


def bin_load(inst: Instance, u: Assignment, bin_index: int) -> Fraction:
    return inst.total_size(u.bins[bin_index])


def is_feasible(inst: Instance, u: Assignment) -> bool:
    return all(bin_load(inst, u, j) <= ONE for j in range(inst.m))


def is_almost_feasible(inst: Instance, u: Assignment) -> bool:
    """Every bin fits once its single largest item is set aside."""
    for j in range(inst.m):
        load = bin_load(inst, u, j)
        if load <= ONE:
            continue
        largest = max(inst.size(i) for i in u.bins[j])
        if load - largest > ONE:
            return False
    return True


def assignment_profit(inst: Instance, u: Assignment) -> Fraction:
    """Exact total profit of placed items; evicted items contribute 0."""
    total = ZERO
    for j, bin_items in enumerate(u.bins):
        for i in bin_items:
            total += inst.profit(i, j)
    return total


def validate_assignment(inst: Instance, u: Assignment) -> None:
    if len(u.bins) != inst.m:
        raise ValidationError(f"assignment has {len(u.bins)} bins, instance has {inst.m}")
    seen: set[int] = set()
    for j, bin_items in enumerate(u.bins):
        for i in bin_items:
            if i not in inst.item_map:
                raise ValidationError(f"assignment references unknown item {i}")
            if i in seen:
                raise ValidationError(f"item {i} appears in two bins")
            seen.add(i)
    for i in u.evicted:
        if i in seen:
            raise ValidationError(f"item {i} is both placed and evicted")


def validate_fractional(inst: Instance, x: FractionalSolution) -> None:
    """Check LP feasibility and the cached objective of a fractional solution."""
    per_item: dict[int, Fraction] = {}
    per_bin: dict[int, Fraction] = {}
    for (i, j), f in x.entries.items():
        if i not in inst.item_map:
            raise ValidationError(f"fractional entry references unknown item {i}")
        if not 0 <= j < inst.m:
            raise ValidationError(f"fractional entry references bin {j} out of range")
        if not ZERO < f <= ONE:
            raise ValidationError(f"fraction for ({i}, {j}) is {f}, must be in (0, 1]")
        per_item[i] = per_item.get(i, ZERO) + f
        per_bin[j] = per_bin.get(j, ZERO) + f * inst.size(i)
    for i, tot in per_item.items():
        if tot > ONE:
            raise ValidationError(f"item {i} has total fraction {tot} > 1")
    for j, load in per_bin.items():
        if load > ONE:
            raise ValidationError(f"bin {j} has fractional load {load} > 1")
    if x.recompute_value(inst) != x.value:
        raise ValidationError("cached fractional value does not match entries")


def validate_instance(inst: Instance, strict: bool = False) -> None:
    """Check all structural invariants of an instance.

    ``strict`` additionally enforces the group-size cap s(G) <= m/2 that the
    end-to-end profit guarantee requires.
    """
    if inst.m < 1:
        raise ValidationError(f"bin count must be positive, got {inst.m}")
    seen_items: set[int] = set()
    for it in inst.items:
        if it.id in seen_items:
            raise BadPartition(f"duplicate item id {it.id}")
        seen_items.add(it.id)
        if not ZERO < it.size <= ONE:
            raise BadSize(it.id, it.size)
    grouped: set[int] = set()
    for g in inst.groups:
        if not g.members:
            raise BadPartition(f"group {g.id} is empty")
        for i in g.members:
            if i not in seen_items:
                raise BadPartition(f"group {g.id} references unknown item {i}")
            if i in grouped:
                raise BadPartition(f"item {i} belongs to more than one group")
            grouped.add(i)
    if grouped != seen_items:
        missing = sorted(seen_items - grouped)
        raise BadPartition(f"items {missing} belong to no group")
    for (i, j), p in inst.profits.items():
        if i not in seen_items:
            raise BadPartition(f"profit entry references unknown item {i}")
        if not 0 <= j < inst.m:
            raise BadBinIndex(i, j, inst.m)
        if p < ZERO:
            raise NegativeProfit(i, j, p)
    if strict:
        cap = Fraction(inst.m, 2)
        for g in inst.groups:
            total = inst.total_size(g.members)
            if total > cap:
                raise OversizedGroup(g.id, total, cap)
