"""Explicit extremal multisets and the kernel-packing decomposition.

The builders assert their defining postconditions at construction time: the
tower witness is a unique-factorization multiset attaining the closed-form
cross number, the zero-sum-free witness attains the zero-sum-free formula,
and componentwise unions preserve unique factorization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import formulas
from .errors import DomainError, PreconditionError, ResourceLimitError
from .groups import (
    Element,
    FiniteAbelianGroup,
    Homomorphism,
    factorize,
    is_prime,
    kernel_elements,
    normalize_group,
    product_presentation,
)
from .factorization import is_ufim, is_zero_sum_free
from .multisets import (
    IndexedMultiset,
    IndexSubset,
    apply_hom,
    cross_number,
    sigma,
)


def _gao_wang_values(p: int, m: int) -> list[int]:
    """Residues of the maximal-cross tower over C_{p^m} with generator 1."""
    q = p**m
    values: list[int] = []
    for i in range(1, m + 1):
        values.extend([p ** (i - 1) % q] * (p - 1))
    for i in range(1, m + 1):
        values.append((1 - p) * p ** (i - 1) % q)
    return values


def gao_wang_extremal(p: int, m: int) -> IndexedMultiset:
    """The tower multiset over C_{p^m}: p-1 copies of each power of p plus
    one balancing element per level. Unique factorization and cross number
    equal to the closed-form value are asserted."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if m < 1:
        raise DomainError(f"exponent must be positive, got {m}")
    group = normalize_group([p**m])
    values = _gao_wang_values(p, m)
    ms = IndexedMultiset.from_elements(
        group, [[v] for v in values], max_size=len(values)
    )
    assert is_ufim(ms), f"tower over C_{p}^{m} is not a UFIM"
    expected = formulas.k1_star(group)
    got = cross_number(ms)
    assert got == expected, f"tower cross number {got} != {expected}"
    return ms


def _primary_slots(group: FiniteAbelianGroup) -> list[tuple[int, int, int]]:
    """(p, e, coordinate) for each prime-power component of the group."""
    out = []
    for j, n in enumerate(group.invariant_factors):
        for p, e in sorted(factorize(n).items()):
            out.append((p, e, j))
    return out


def extremal_zero_sum_free(group: FiniteAbelianGroup) -> IndexedMultiset:
    """Zero-sum-free multiset attaining the closed-form maximum.

    Per component C_{p^e}: p-1 copies of each power of p, embedded on that
    component's coordinate.
    """
    elements: list[Element] = []
    for p, e, j in _primary_slots(group):
        nj = group.invariant_factors[j]
        gen = nj // p**e
        for i in range(1, e + 1):
            el = [0] * group.rank
            el[j] = p ** (i - 1) * gen % nj
            elements.extend([tuple(el)] * (p - 1))
    ms = IndexedMultiset.from_elements(group, elements, max_size=len(elements))
    assert is_zero_sum_free(ms), f"witness over {group} is not zero-sum free"
    expected = formulas.k_star(group)
    got = cross_number(ms)
    assert got == expected, f"zero-sum-free cross number {got} != {expected}"
    return ms


def extremal_ufim(group: FiniteAbelianGroup) -> IndexedMultiset:
    """Componentwise tower witness over an arbitrary group.

    Attains the closed-form unique-factorization maximum, which makes it the
    standard incumbent seed for exact searches.
    """
    elements: list[Element] = []
    for p, e, j in _primary_slots(group):
        nj = group.invariant_factors[j]
        gen = nj // p**e
        for v in _gao_wang_values(p, e):
            el = [0] * group.rank
            el[j] = v * gen % nj
            elements.append(tuple(el))
    ms = IndexedMultiset.from_elements(group, elements, max_size=len(elements))
    assert is_ufim(ms), f"componentwise tower over {group} is not a UFIM"
    expected = formulas.k1_star(group)
    got = cross_number(ms)
    assert got == expected, f"componentwise tower cross number {got} != {expected}"
    return ms


def generator_repeat_union(group: FiniteAbelianGroup) -> IndexedMultiset:
    """Each invariant-factor generator repeated its order times.

    A unique-factorization multiset of size sum(n_i), the incumbent seed for
    maximum-size searches.
    """
    elements: list[Element] = []
    for j, n in enumerate(group.invariant_factors):
        el = [0] * group.rank
        el[j] = 1
        elements.extend([tuple(el)] * n)
    ms = IndexedMultiset.from_elements(group, elements, max_size=len(elements))
    assert is_ufim(ms), f"generator towers over {group} do not factor uniquely"
    return ms


def direct_sum_union(
    s1: IndexedMultiset, s2: IndexedMultiset
) -> IndexedMultiset:
    """Embed both multisets on independent blocks of the direct sum.

    The ambient group is the normalized direct sum; cross numbers add, and
    a union of two unique-factorization multisets factors uniquely (asserted).
    """
    g1, g2 = s1.group, s2.group
    moduli = list(g1.invariant_factors) + list(g2.invariant_factors)
    target, gen_images = product_presentation(moduli)

    def embed(ms: IndexedMultiset, offset: int) -> list[Element]:
        out = []
        for el in ms.elements():
            acc = target.zero()
            for j, r in enumerate(el):
                acc = target.add(acc, target.scale(r, gen_images[offset + j]))
            out.append(acc)
        return out

    elements = embed(s1, 0) + embed(s2, g1.rank)
    out = IndexedMultiset.from_elements(
        target, elements, max_size=len(elements)
    )
    both_ufim = True
    for part in (s1, s2):
        if part.size and (part.has_zero or not is_ufim(part)):
            both_ufim = False
    if both_ufim:
        assert is_ufim(out), "union of unique-factorization multisets failed"
        assert cross_number(out) == cross_number(s1) + cross_number(s2)
    return out


# -- kernel-packing decomposition --------------------------------------------


@dataclass(frozen=True)
class DecompositionResult:
    """Split of a unique-factorization multiset along a homomorphism.

    kernel_part holds the entries lying in the kernel; packing is a maximal
    family of disjoint zero-sum-free subsets of the rest whose sums land in
    the kernel minus zero; residue is what remains.
    """

    multiset: IndexedMultiset
    hom: Homomorphism
    kernel_part: IndexSubset
    packing: tuple[IndexSubset, ...]
    residue: IndexSubset

    @property
    def t(self) -> int:
        return len(self.packing)

    def to_lists(self) -> dict:
        def subset_lists(sub: IndexSubset) -> dict:
            labels = sorted(sub.labels)
            return {
                "labels": labels,
                "elements": [list(self.multiset.element_at(l)) for l in labels],
            }

        return {
            "kernel_part": subset_lists(self.kernel_part),
            "packing": [subset_lists(s) for s in self.packing],
            "residue": subset_lists(self.residue),
            "t": self.t,
        }


def construction4_decompose(
    ms: IndexedMultiset, phi: Homomorphism
) -> DecompositionResult:
    """Maximal packing of kernel-summing zero-sum-free subsets.

    The packing size t is exact (branch and bound over candidate subsets with
    memoized feasibility per remaining index mask); among maximal packings
    the lexicographically least family of index sets is returned. The three
    structural consequences (residue factors uniquely, its image factors
    uniquely over the quotient, kernel part plus packing sums factors
    uniquely over the kernel) are asserted.
    """
    if ms.group != phi.source:
        raise DomainError("multiset group does not match the map's source")
    if ms.has_zero or not is_ufim(ms):
        raise PreconditionError(
            "decomposition needs a unique-factorization multiset over G\\{0}"
        )
    zero_t = phi.target.zero()
    labels = sorted(ms.labels)
    entry = ms.entries
    in_kernel = [phi(entry[l]) == zero_t for l in labels]
    t_labels = [l for l, k in zip(labels, in_kernel) if k]
    rest = [l for l, k in zip(labels, in_kernel) if not k]
    if len(rest) > 20:
        raise ResourceLimitError(
            f"packing search over {len(rest)} indices exceeds the cap"
        )

    kernel_set = {g for g in kernel_elements(phi)}
    group = ms.group

    # Candidate subsets of the non-kernel part: zero-sum free with sum in
    # the kernel minus zero.
    l = len(rest)
    sums: list[Element] = [group.zero()] * (1 << l)
    for mask in range(1, 1 << l):
        low = mask & -mask
        prev = mask ^ low
        sums[mask] = group.add(sums[prev], entry[rest[low.bit_length() - 1]])

    def zero_sum_free_mask(mask: int) -> bool:
        sub = mask
        while sub:
            if sums[sub] == group.zero():
                return False
            sub = (sub - 1) & mask
        return True

    candidates = [
        mask
        for mask in range(1, 1 << l)
        if sums[mask] != group.zero()
        and sums[mask] in kernel_set
        and zero_sum_free_mask(mask)
    ]

    # Maximal packing count per free mask, then the lexicographically least
    # maximal family, built by always trying the least usable candidate.
    cand = tuple(candidates)

    @lru_cache(maxsize=None)
    def best_t(free: int) -> int:
        best = 0
        for c in cand:
            if c & ~free == 0:
                got = 1 + best_t(free ^ c)
                if got > best:
                    best = got
        return best

    full = (1 << l) - 1
    family: list[int] = []
    free = full
    while best_t(free):
        for c in cand:
            if c & ~free == 0 and 1 + best_t(free ^ c) == best_t(free):
                family.append(c)
                free ^= c
                break

    def mask_labels(mask: int) -> frozenset[int]:
        return frozenset(rest[i] for i in range(l) if mask >> i & 1)

    packing = tuple(IndexSubset(ms, mask_labels(m)) for m in family)
    kernel_part = IndexSubset(ms, frozenset(t_labels))
    used = frozenset().union(*(p.labels for p in packing)) if packing else frozenset()
    residue = IndexSubset(ms, frozenset(rest) - used)
    result = DecompositionResult(ms, phi, kernel_part, packing, residue)
    _assert_decomposition_consequences(result)
    return result


def _assert_decomposition_consequences(d: DecompositionResult) -> None:
    group = d.multiset.group
    residue_ms = d.residue.submultiset()
    if residue_ms.size:
        assert is_ufim(residue_ms), "residue does not factor uniquely"
        image = apply_hom(d.hom, residue_ms)
        assert not image.has_zero, "residue image touches zero"
        assert is_ufim(image), "residue image does not factor uniquely"
    lifted = list(d.kernel_part.elements()) + [sigma(p) for p in d.packing]
    if lifted:
        lifted_ms = IndexedMultiset.from_elements(
            group, lifted, max_size=len(lifted)
        )
        assert is_ufim(lifted_ms), "kernel part plus packing sums not unique"


def phiunique_consequences(
    decomposition: DecompositionResult,
    part_invariants: dict[str, Fraction],
) -> list[dict]:
    """Evaluate the kernel-split inequalities on a concrete decomposition.

    part_invariants must provide K1_kernel, N1_kernel, K1_quotient and
    K_quotient as exact values. Returns one record per inequality with both
    sides and a pass flag.
    """
    d = decomposition
    ms = d.multiset
    k1_ker = part_invariants["K1_kernel"]
    n1_ker = part_invariants["N1_kernel"]
    k1_quot = part_invariants["K1_quotient"]
    K_quot = part_invariants["K_quotient"]

    packed = (
        frozenset().union(*(p.labels for p in d.packing))
        if d.packing
        else frozenset()
    )
    s_prime = IndexSubset(ms, d.residue.labels | packed)
    group = ms.group
    lifted = list(d.kernel_part.elements()) + [sigma(p) for p in d.packing]
    lifted_cross = sum(
        (Fraction(1, group.element_order(e)) for e in lifted), Fraction(0)
    )
    phi_s_prime = [d.hom(e) for e in s_prime.elements()]
    phi_cross = sum(
        (
            Fraction(1, d.hom.target.element_order(e))
            for e in phi_s_prime
        ),
        Fraction(0),
    )
    k_s = cross_number(ms)
    k_s_prime = cross_number(s_prime)

    rows = [
        {
            "item": 1,
            "statement": "cross(kernel part + packing sums) <= K1(kernel)",
            "lhs": lifted_cross,
            "rhs": k1_ker,
        },
        {
            "item": 2,
            "statement": "|kernel part| + t <= N1(kernel)",
            "lhs": Fraction(d.kernel_part.size + d.t),
            "rhs": Fraction(n1_ker),
        },
        {
            "item": 3,
            "statement": "cross(S) <= K1(kernel) + cross(S')",
            "lhs": k_s,
            "rhs": k1_ker + k_s_prime,
        },
        {
            "item": 4,
            "statement": "cross(S) <= K1(kernel) + cross(phi(S'))",
            "lhs": k_s,
            "rhs": k1_ker + phi_cross,
        },
        {
            "item": 5,
            "statement": "cross(phi(S')) <= K1(quotient) + t*K(quotient)",
            "lhs": phi_cross,
            "rhs": k1_quot + d.t * K_quot,
        },
    ]
    if d.t == 0:
        rows.append(
            {
                "item": 7,
                "statement": "t=0: cross(S) <= K1(kernel) + K1(quotient)",
                "lhs": k_s,
                "rhs": k1_ker + k1_quot,
            }
        )
    for row in rows:
        row["passed"] = row["lhs"] <= row["rhs"]
    return rows
