"""Isomorphism testing by backtracking over generator images.

Exact search is budgeted (default order 64). Above the budget the caller can
fall back to structural fingerprints, which are enough to triage sweep
discrepancies but are flagged as such.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SizeExceeded
from .groups import Group, center, derived_subgroup, subgroup_generated

ISO_BUDGET = 64


def small_generating_set(g: Group) -> list[int]:
    """Greedy generating set, largest-order elements first."""
    gens: list[int] = []
    have = {g.identity}
    by_order = sorted(range(g.order), key=lambda a: (-g.element_order(a), a))
    while len(have) < g.order:
        nxt = next(a for a in by_order if a not in have)
        gens.append(nxt)
        have = set(subgroup_generated(g, gens).elements)
    return gens


def fingerprint(g: Group) -> tuple:
    """Cheap isomorphism invariants: order, order profile, |Z|, |G'|, abelian."""
    return (
        g.order,
        g.order_profile,
        center(g).order,
        derived_subgroup(g).order,
        g.is_abelian,
    )


def _extend(g: Group, h: Group, phi: dict[int, int], new_elems: list[int]) -> bool:
    """Close phi under products with the newly mapped elements; False on conflict."""
    frontier = list(new_elems)
    used = set(phi.values())
    if len(used) != len(phi):
        return False
    while frontier:
        nxt = []
        for u in frontier:
            for v in list(phi.keys()):
                for x, y in ((g.table[u][v], h.table[phi[u]][phi[v]]),
                             (g.table[v][u], h.table[phi[v]][phi[u]])):
                    got = phi.get(x)
                    if got is None:
                        if y in used:
                            return False
                        phi[x] = y
                        used.add(y)
                        nxt.append(x)
                    elif got != y:
                        return False
        frontier = nxt
    return True


def find_isomorphism(a: Group, b: Group, budget: int = ISO_BUDGET) -> dict[int, int] | None:
    """An explicit isomorphism a -> b as an index map, or None.

    Backtracks over images of a small generating set of a, pruned by element
    order; each partial assignment is closed under multiplication immediately,
    so conflicts surface early.
    """
    if a.order != b.order:
        return None
    if a.order > budget:
        raise SizeExceeded(f"exact isomorphism budget is {budget}, got order {a.order}")
    if fingerprint(a) != fingerprint(b):
        return None
    gens = small_generating_set(a)
    gen_orders = [a.element_order(x) for x in gens]
    h_by_order: dict[int, list[int]] = {}
    for y in range(b.order):
        h_by_order.setdefault(b.element_order(y), []).append(y)

    def attempt(k: int, phi: dict[int, int]) -> dict[int, int] | None:
        if k == len(gens):
            return phi if len(phi) == a.order else None
        for y in h_by_order.get(gen_orders[k], ()):
            if y in phi.values():
                continue
            trial = dict(phi)
            trial[gens[k]] = y
            if _extend(a, b, trial, [gens[k]]):
                found = attempt(k + 1, trial)
                if found is not None:
                    return found
        return None

    return attempt(0, {a.identity: b.identity})


def is_isomorphic(a: Group, b: Group, budget: int = ISO_BUDGET) -> bool:
    return find_isomorphism(a, b, budget=budget) is not None


@dataclass(frozen=True)
class IsoVerdict:
    same: bool
    method: str  # "backtracking" | "fingerprint"


def iso_or_fingerprint(a: Group, b: Group, budget: int = ISO_BUDGET) -> IsoVerdict:
    """Exact test within budget, fingerprint comparison above it."""
    if a.order != b.order:
        return IsoVerdict(False, "backtracking")
    if a.order <= budget:
        return IsoVerdict(is_isomorphic(a, b, budget=budget), "backtracking")
    return IsoVerdict(fingerprint(a) == fingerprint(b), "fingerprint")
