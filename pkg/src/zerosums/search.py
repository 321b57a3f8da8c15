"""Branch-and-bound maximization over unions of atoms with unique factorization.

Candidates are nondecreasing sequences of catalog atoms. The union of the
chosen blocks is accepted exactly when its zero-sum subsets are the unions of
blocks, i.e. when the subset-sum count at zero equals 2^m after the m-th
block; the count vector is maintained incrementally, so a union is rejected
as soon as a zero-sum subset crosses block boundaries. Pruning uses the
product bound (block sizes multiply to at most |G|), the block-count bound,
and an optimistic value bound against the incumbent.

Results are deterministic for any worker count: each root branch (choice of
first atom) is explored with its own incumbent seeded from the caller's
floor, and branch outcomes merge by (value, canonically least witness).
"""

from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Literal, Sequence

from .atoms import AtomCatalog
from .groups import FiniteAbelianGroup, group_table


@dataclass
class Budget:
    max_nodes: int | None = None
    max_seconds: float | None = None


@dataclass
class SearchStats:
    nodes: int = 0
    prunes: Counter = field(default_factory=Counter)
    millis: int = 0
    complete: bool = True


@dataclass
class SearchOutcome:
    value: Fraction
    witness_codes: tuple[int, ...]
    stats: SearchStats


class _BudgetHit(Exception):
    pass


@dataclass
class _AtomEntry:
    codes: tuple[int, ...]
    length: int
    measure: Fraction


def _entries(
    group: FiniteAbelianGroup, catalog: AtomCatalog, kind: Literal["cross", "size"]
) -> list[_AtomEntry]:
    table = group_table(group)
    out = []
    for atom in catalog.atoms():
        codes = tuple(table.encode(el) for el in atom)
        if kind == "cross":
            measure = sum(
                (Fraction(1, table.order[c]) for c in codes), Fraction(0)
            )
        else:
            measure = Fraction(len(codes))
        out.append(_AtomEntry(codes, len(codes), measure))
    out.sort(key=lambda e: (e.length, e.codes))
    return out


def _extend_counts(cnt: list[int], codes: Sequence[int], add) -> list[int]:
    for c in codes:
        prev = cnt
        cnt = prev[:]
        for x, v in enumerate(prev):
            if v:
                cnt[add[x][c]] += v
    return cnt


class _BudgetState:
    __slots__ = ("nodes_left", "deadline")

    def __init__(self, budget: Budget | None):
        self.nodes_left = budget.max_nodes if budget else None
        self.deadline = (
            time.monotonic() + budget.max_seconds
            if budget and budget.max_seconds is not None
            else None
        )

    def spend(self, amount: int = 1) -> None:
        if self.nodes_left is not None:
            self.nodes_left -= amount
            if self.nodes_left < 0:
                raise _BudgetHit
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _BudgetHit


def maximize_over_ufims(
    group: FiniteAbelianGroup,
    catalog: AtomCatalog,
    kind: Literal["cross", "size"],
    floor_value: Fraction,
    floor_witness_codes: tuple[int, ...],
    budget: Budget | None = None,
    workers: int = 1,
) -> SearchOutcome:
    """Exact maximum of the measure over unique-factorization unions of atoms."""
    start = time.perf_counter()
    n = group.order
    stats = SearchStats()
    if n == 1 or catalog.count == 0:
        stats.millis = int((time.perf_counter() - start) * 1000)
        return SearchOutcome(floor_value, floor_witness_codes, stats)

    table = group_table(group)
    add = table.add
    entries = _entries(group, catalog, kind)
    m_cap = n.bit_length() - 1
    suffix_max = [Fraction(0)] * (len(entries) + 1)
    for i in range(len(entries) - 1, -1, -1):
        suffix_max[i] = max(entries[i].measure, suffix_max[i + 1])
    budget_state = _BudgetState(budget)

    def run_branch(first: int) -> tuple[Fraction, tuple[int, ...], SearchStats, bool]:
        local = SearchStats()
        best_value = floor_value
        best_witness = tuple(sorted(floor_witness_codes))
        chosen: list[int] = []

        def consider(value: Fraction) -> None:
            nonlocal best_value, best_witness
            if value < best_value:
                return
            witness = tuple(sorted(chosen))
            if value > best_value or witness < best_witness:
                best_value = value
                best_witness = witness

        def dfs(min_idx: int, m: int, prod: int, value: Fraction, cnt: list[int]):
            slots = min(m_cap - m, (n // prod).bit_length() - 1)
            if slots <= 0:
                return
            if value + slots * suffix_max[min_idx] < best_value:
                local.prunes["bound"] += 1
                return
            for j in range(min_idx, len(entries)):
                entry = entries[j]
                new_prod = prod * entry.length
                if new_prod > n:
                    local.prunes["product"] += 1
                    break
                nxt = _extend_counts(cnt, entry.codes, add)
                budget_state.spend()
                local.nodes += 1
                if nxt[0] != 1 << (m + 1):
                    local.prunes["crossing"] += 1
                    continue
                chosen.extend(entry.codes)
                consider(value + entry.measure)
                dfs(j, m + 1, new_prod, value + entry.measure, nxt)
                del chosen[len(chosen) - entry.length :]

        finished = True
        try:
            root = [0] * n
            root[0] = 1
            entry = entries[first]
            nxt = _extend_counts(root, entry.codes, add)
            budget_state.spend()
            local.nodes += 1
            if nxt[0] != 2:
                local.prunes["crossing"] += 1
            else:
                chosen.extend(entry.codes)
                consider(entry.measure)
                dfs(first, 1, entry.length, entry.measure, nxt)
        except _BudgetHit:
            finished = False
        return best_value, best_witness, local, finished

    branches = range(len(entries))
    if workers <= 1:
        results = [run_branch(i) for i in branches]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_branch, branches))

    best_value = floor_value
    best_witness = tuple(sorted(floor_witness_codes))
    for value, witness, local, ok in results:
        stats.nodes += local.nodes
        stats.prunes.update(local.prunes)
        stats.complete = stats.complete and ok
        if value > best_value or (value == best_value and witness < best_witness):
            best_value = value
            best_witness = witness
    stats.millis = int((time.perf_counter() - start) * 1000)
    return SearchOutcome(best_value, best_witness, stats)


def iter_ufims(
    group: FiniteAbelianGroup,
    catalog: AtomCatalog,
    max_blocks: int | None = None,
) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All unique-factorization unions of atoms, as tuples of code blocks.

    Visits every UFIM over the group whose blocks are in the catalog; the
    product and block-count caps are valid for all UFIMs, so with a complete
    catalog this is every UFIM. The empty union is not yielded.
    """
    n = group.order
    if n == 1 or catalog.count == 0:
        return
    table = group_table(group)
    add = table.add
    entries = _entries(group, catalog, "size")
    m_cap = n.bit_length() - 1
    if max_blocks is not None:
        m_cap = min(m_cap, max_blocks)

    blocks: list[tuple[int, ...]] = []

    def dfs(min_idx: int, m: int, prod: int, cnt: list[int]):
        for j in range(min_idx, len(entries)):
            entry = entries[j]
            new_prod = prod * entry.length
            if new_prod > n:
                break
            nxt = _extend_counts(cnt, entry.codes, add)
            if nxt[0] != 1 << (m + 1):
                continue
            blocks.append(entry.codes)
            yield tuple(blocks)
            if m + 1 < m_cap:
                yield from dfs(j, m + 1, new_prod, nxt)
            blocks.pop()

    root = [0] * n
    root[0] = 1
    yield from dfs(0, 0, 1, root)
