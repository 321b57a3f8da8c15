"""Catalogs of atoms (minimal zero-sum multisets) and zero-sum-free maxima.

Atoms are enumerated depth-first over nondecreasing element sequences. A
prefix is kept only while zero-sum-free, which is tracked by the vector of
subset-sum counts; appending the negation of the running sum closes an atom.
Generation in canonical order makes deduplication free and file output
bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from . import config
from .errors import (
    DomainError,
    IncompleteCatalogError,
    ResourceLimitError,
)
from .groups import Element, FiniteAbelianGroup, group_table, normalize_group
from .multisets import IndexedMultiset

CATALOG_FORMAT = "zerosums-atoms/1"


@dataclass(frozen=True)
class AtomCatalog:
    """All atoms of a group up to a length bound, in canonical order."""

    group: FiniteAbelianGroup
    atoms_by_length: tuple[tuple[int, tuple[tuple[Element, ...], ...]], ...]
    max_length_enumerated: int
    complete: bool

    @property
    def count(self) -> int:
        return sum(len(atoms) for _, atoms in self.atoms_by_length)

    @property
    def max_atom_length(self) -> int:
        lengths = [l for l, atoms in self.atoms_by_length if atoms]
        return max(lengths, default=0)

    def atoms(self) -> Iterator[tuple[Element, ...]]:
        """Atoms ordered by (length, elements)."""
        for _, atoms in self.atoms_by_length:
            yield from atoms

    def by_length(self, length: int) -> tuple[tuple[Element, ...], ...]:
        for l, atoms in self.atoms_by_length:
            if l == length:
                return atoms
        return ()

    def to_multiset(self, atom: tuple[Element, ...]) -> IndexedMultiset:
        return IndexedMultiset.from_elements(self.group, atom)


def enumerate_atoms(
    group: FiniteAbelianGroup,
    max_len: int | None = None,
    entry_cap: int | None = None,
) -> AtomCatalog:
    """Depth-first atom enumeration, complete for lengths up to max_len.

    The catalog is marked complete when no longer atom can exist: either
    max_len reaches the group order (atoms never exceed it), or no atom of
    length exactly max_len was found (atom lengths have no gaps, since two
    elements of a longer atom can always be merged into their sum).
    """
    n = group.order
    if max_len is None:
        max_len = n
    if n > 1 and max_len < 2:
        raise DomainError("atom enumeration needs max_len >= 2")
    cap = config.ATOM_ENTRY_CAP if entry_cap is None else entry_cap
    if n > config.ATOM_ORDER_CAP:
        raise ResourceLimitError(
            f"group order {n} exceeds atom catalog cap {config.ATOM_ORDER_CAP}"
        )
    found: dict[int, list[tuple[Element, ...]]] = {}
    if n == 1:
        return AtomCatalog(group, (), max_len, True)

    table = group_table(group)
    add = table.add
    neg = table.neg
    total = 0

    # cnt[g] = number of subsets of the current prefix summing to g.
    cnt = [0] * n
    cnt[0] = 1
    prefix: list[int] = []

    def emit(codes: list[int]) -> None:
        nonlocal total
        total += 1
        if total > cap:
            raise ResourceLimitError(f"atom catalog exceeds {cap} entries")
        atom = tuple(table.decode(c) for c in codes)
        found.setdefault(len(atom), []).append(atom)

    def dfs(start: int, running: int, cnt: list[int]) -> None:
        depth = len(prefix)
        want = neg[running]
        for e in range(start, n):
            if e == want and want != 0 and depth + 1 >= 2:
                emit(prefix + [e])
            if depth + 1 <= max_len - 1 and cnt[neg[e]] == 0:
                nxt = cnt[:]
                row = add
                for x in range(n):
                    v = cnt[x]
                    if v:
                        nxt[row[x][e]] += v
                prefix.append(e)
                dfs(e, add[running][e], nxt)
                prefix.pop()

    dfs(1, 0, cnt)

    atoms_by_length = tuple(
        (l, tuple(sorted(found[l]))) for l in sorted(found)
    )
    complete = max_len >= n or not found.get(max_len)
    return AtomCatalog(group, atoms_by_length, max_len, complete)


# -- in-memory reuse ----------------------------------------------------------

_MEMORY: dict[tuple[FiniteAbelianGroup, int], AtomCatalog] = {}


def atom_catalog(
    group: FiniteAbelianGroup, max_len: int | None = None
) -> AtomCatalog:
    """Complete catalog for the group, memoized for the process lifetime."""
    if max_len is None:
        max_len = group.order
    key = (group, max_len)
    got = _MEMORY.get(key)
    if got is None:
        got = enumerate_atoms(group, max_len)
        _MEMORY[key] = got
    return got


def clear_catalog_memory() -> None:
    _MEMORY.clear()


# -- zero-sum-free maximum ----------------------------------------------------


def max_zero_sum_free_cross(
    group: FiniteAbelianGroup, catalog: AtomCatalog | None = None
) -> tuple[Fraction, IndexedMultiset]:
    """Largest cross number of a zero-sum-free multiset, with a witness.

    Every zero-sum-free multiset extends to an atom by one element, so the
    maximum is scanned as atom-minus-one-element; the witness is the
    canonically least maximizer.
    """
    if catalog is None:
        catalog = atom_catalog(group)
    if not catalog.complete:
        raise IncompleteCatalogError(
            f"catalog for {group} enumerated only up to length "
            f"{catalog.max_length_enumerated}"
        )
    best = Fraction(0)
    best_witness: tuple[Element, ...] = ()
    for atom in catalog.atoms():
        unit = [Fraction(1, group.element_order(el)) for el in atom]
        total = sum(unit, Fraction(0))
        seen: set[Element] = set()
        for i, el in enumerate(atom):
            if el in seen:
                continue
            seen.add(el)
            value = total - unit[i]
            if value < best:
                continue
            witness = atom[:i] + atom[i + 1 :]
            if value > best or witness < best_witness:
                best = value
                best_witness = witness
    ms = IndexedMultiset.from_elements(
        group, best_witness, max_size=len(best_witness)
    )
    return best, ms


# -- persistence --------------------------------------------------------------


def serialize_catalog(catalog: AtomCatalog) -> str:
    """Versioned text form; bit-identical for a fixed format version."""
    lines = [
        CATALOG_FORMAT,
        f"group={catalog.group.key}",
        f"max_len={catalog.max_length_enumerated}",
        f"complete={'1' if catalog.complete else '0'}",
        f"count={catalog.count}",
    ]
    for atom in catalog.atoms():
        lines.append(" ".join(",".join(str(r) for r in el) for el in atom))
    return "\n".join(lines) + "\n"


def parse_catalog(text: str) -> AtomCatalog:
    lines = text.splitlines()
    if not lines or lines[0] != CATALOG_FORMAT:
        raise DomainError("unrecognized atom catalog format")
    header: dict[str, str] = {}
    for line in lines[1:5]:
        key, _, value = line.partition("=")
        header[key] = value
    group = normalize_group(
        [] if header["group"] == "1" else [int(x) for x in header["group"].split("x")]
    )
    found: dict[int, list[tuple[Element, ...]]] = {}
    for line in lines[5:]:
        if not line:
            continue
        atom = tuple(
            tuple(int(r) for r in tok.split(",")) if tok else ()
            for tok in line.split(" ")
        )
        if group.rank == 0:
            raise DomainError("atom listed for the trivial group")
        found.setdefault(len(atom), []).append(atom)
    count = sum(len(v) for v in found.values())
    if count != int(header["count"]):
        raise DomainError("atom catalog count mismatch")
    atoms_by_length = tuple((l, tuple(found[l])) for l in sorted(found))
    return AtomCatalog(
        group,
        atoms_by_length,
        int(header["max_len"]),
        header["complete"] == "1",
    )
