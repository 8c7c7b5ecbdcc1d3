"""Finite groups as explicit multiplication tables.

Every group is a Latin square over element indices 0..n-1 with a designated
identity, validated exhaustively at construction (associativity included).
All values are immutable after construction; operations return new values,
so everything here is safe to share across worker processes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import lcm

import numpy as np

from .abelian import AbelianInvariants
from .errors import (
    NotAbelian,
    NotAGroup,
    NotNormal,
    NotPGroup,
    SizeExceeded,
    WrongOrder,
)

#: Construction-time hard ceiling; associativity is always checked in full,
#: so anything larger is rejected rather than trusted.
MAX_ORDER = 256

#: Default bound for routine constructions (products in sweeps etc).
DEFAULT_MAX_ORDER = 128

SCHEMA = "pgcl/1"


def _check_table(table: tuple[tuple[int, ...], ...], identity: int) -> None:
    n = len(table)
    if n == 0:
        raise NotAGroup("empty table")
    if n > MAX_ORDER:
        raise SizeExceeded(f"order {n} exceeds hard ceiling {MAX_ORDER}")
    arr = np.asarray(table, dtype=np.int32)
    if arr.shape != (n, n):
        raise NotAGroup(f"table is not {n}x{n}")
    if arr.min() < 0 or arr.max() >= n:
        raise NotAGroup("table entries out of range")
    idx = np.arange(n, dtype=np.int32)
    # Latin square: every row and column is a permutation.
    if not (np.sort(arr, axis=1) == idx).all() or not (np.sort(arr, axis=0) == idx[:, None]).all():
        raise NotAGroup("table is not a Latin square")
    if not (arr[identity] == idx).all() or not (arr[:, identity] == idx).all():
        raise NotAGroup(f"index {identity} is not a two-sided identity")
    # Full associativity, row-vectorized: for fixed a,
    #   (a*b)*c == a*(b*c)  <=>  arr[arr[a], :] == arr[a][arr].
    for a in range(n):
        if not (arr[arr[a]] == arr[a][arr]).all():
            raise NotAGroup(f"associativity fails with left factor {a}")
    # Latin square + identity + associativity already force two-sided
    # inverses; _make_inverses still verifies both sides.


def _make_inverses(table, identity) -> tuple[int, ...]:
    n = len(table)
    inv = [-1] * n
    for a in range(n):
        row = table[a]
        b = row.index(identity)
        if table[b][a] != identity:
            raise NotAGroup(f"element {a} lacks a two-sided inverse")
        inv[a] = b
    return tuple(inv)


@dataclass(frozen=True)
class Group:
    """An immutable finite group on indices 0..order-1.

    table[a][b] is the index of a*b. labels are human-readable element names;
    construction records the expression that produced the group.
    """

    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int
    labels: tuple[str, ...]
    construction: str
    inverses: tuple[int, ...] = field(repr=False)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(a), -k)
        r = self.identity
        while k:
            r = self.table[r][a]
            k -= 1
        return r

    def conjugate(self, a: int, b: int) -> int:
        """b * a * b^-1."""
        t = self.table
        return t[t[b][a]][self.inv(b)]

    def commutator(self, a: int, b: int) -> int:
        """a * b * a^-1 * b^-1."""
        t = self.table
        return t[t[t[a][b]][self.inv(a)]][self.inv(b)]

    def element_order(self, a: int) -> int:
        x, k = a, 1
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def exponent(self) -> int:
        return lcm(*(self.element_order(a) for a in range(self.order)))

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(self.order))

    @cached_property
    def order_profile(self) -> tuple[tuple[int, int], ...]:
        """Sorted (element order, multiplicity) pairs; a cheap iso invariant."""
        counts: dict[int, int] = {}
        for a in range(self.order):
            o = self.element_order(a)
            counts[o] = counts.get(o, 0) + 1
        return tuple(sorted(counts.items()))

    def table_array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int32)

    def key_bytes(self) -> bytes:
        """Canonical serialization of the table, used as a memo key."""
        if self.order <= 256:
            return bytes([self.identity]) + b"".join(bytes(row) for row in self.table)
        raise SizeExceeded("no canonical key above order 256")

    def relabel(self, construction: str) -> "Group":
        return Group(self.order, self.table, self.identity, self.labels, construction, self.inverses)

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "order": self.order,
            "identity": self.identity,
            "table": [x for row in self.table for x in row],
            "labels": list(self.labels),
            "construction": self.construction,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @staticmethod
    def from_json_dict(doc: dict) -> "Group":
        if doc.get("schema") != SCHEMA:
            raise NotAGroup(f"unsupported schema {doc.get('schema')!r}")
        n = doc["order"]
        flat = doc["table"]
        if len(flat) != n * n:
            raise NotAGroup("table length does not match order")
        table = tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(n))
        return make_group(
            table,
            identity=doc["identity"],
            labels=tuple(doc["labels"]),
            construction=doc["construction"],
        )

    @staticmethod
    def from_json(text: str) -> "Group":
        return Group.from_json_dict(json.loads(text))


def make_group(
    table,
    identity: int | None = None,
    labels: tuple[str, ...] | None = None,
    construction: str = "?",
) -> Group:
    """Validate a multiplication table and freeze it into a Group."""
    tbl = tuple(tuple(int(x) for x in row) for row in table)
    n = len(tbl)
    if identity is None:
        identity = next(
            (e for e in range(n) if all(tbl[e][x] == x and tbl[x][e] == x for x in range(n))),
            None,
        )
        if identity is None:
            raise NotAGroup("no identity element")
    _check_table(tbl, identity)
    inv = _make_inverses(tbl, identity)
    if labels is None:
        labels = tuple(str(i) for i in range(n))
    if len(labels) != n:
        raise NotAGroup("label count does not match order")
    return Group(n, tbl, identity, tuple(labels), construction, inv)


@dataclass(frozen=True)
class Subgroup:
    """A subset of a parent group's indices, closed under product and inverse."""

    parent: Group
    elements: tuple[int, ...]
    generators: tuple[int, ...]

    def __post_init__(self):
        elems = set(self.elements)
        g = self.parent
        if g.identity not in elems:
            raise NotAGroup("subgroup misses the identity")
        for a in self.elements:
            if g.inv(a) not in elems:
                raise NotAGroup("subgroup not closed under inverse")
            for b in self.elements:
                if g.table[a][b] not in elems:
                    raise NotAGroup("subgroup not closed under product")
        if g.order % len(self.elements) != 0:
            raise NotAGroup("Lagrange violated")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self._element_set

    @cached_property
    def _element_set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def is_trivial(self) -> bool:
        return self.order == 1

    def as_group(self) -> Group:
        """The subgroup as a standalone group, reindexed to 0..order-1."""
        pos = {x: i for i, x in enumerate(self.elements)}
        g = self.parent
        table = tuple(tuple(pos[g.table[a][b]] for b in self.elements) for a in self.elements)
        labels = tuple(g.labels[x] for x in self.elements)
        return make_group(
            table,
            identity=pos[g.identity],
            labels=labels,
            construction=f"subgroup<{self.order}> of {g.construction}",
        )


def subgroup_generated(g: Group, elems) -> Subgroup:
    """Closure of elems under product and inverse (orbit algorithm)."""
    for x in elems:
        if not 0 <= x < g.order:
            raise IndexError(f"element index {x} out of range")
    gens = tuple(dict.fromkeys(elems))
    seen = {g.identity}
    frontier = [g.identity]
    for x in gens:
        if x not in seen:
            seen.add(x)
            frontier.append(x)
    # Multiply by generators on both sides until closed; inverses come for
    # free in a finite group (a^-1 is a power of a).
    while frontier:
        new = []
        for a in frontier:
            for x in gens:
                for y in (g.table[a][x], g.table[x][a]):
                    if y not in seen:
                        seen.add(y)
                        new.append(y)
        frontier = new
    return Subgroup(g, tuple(sorted(seen)), gens)


def trivial_subgroup(g: Group) -> Subgroup:
    return Subgroup(g, (g.identity,), ())


def whole_subgroup(g: Group) -> Subgroup:
    return Subgroup(g, tuple(range(g.order)), tuple(range(g.order)))


def center(g: Group) -> Subgroup:
    t = g.table
    rng = range(g.order)
    elems = tuple(a for a in rng if all(t[a][b] == t[b][a] for b in rng))
    return Subgroup(g, elems, elems)


def derived_subgroup(g: Group) -> Subgroup:
    comms = {g.commutator(a, b) for a in range(g.order) for b in range(g.order)}
    return subgroup_generated(g, sorted(comms))


def prime_power(n: int) -> tuple[int, int] | None:
    """(p, k) with n = p^k, or None if n is not a prime power (1 -> None)."""
    if n < 2:
        return None
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            return (p, k) if n == 1 else None
        p += 1
    return (n, 1)


def frattini(g: Group) -> Subgroup:
    """Frattini subgroup of a p-group: generated by commutators and p-th powers."""
    pp = prime_power(g.order)
    if g.order == 1:
        return trivial_subgroup(g)
    if pp is None:
        raise NotPGroup(f"order {g.order} is not a prime power")
    p = pp[0]
    gens = {g.commutator(a, b) for a in range(g.order) for b in range(g.order)}
    gens.update(g.power(a, p) for a in range(g.order))
    return subgroup_generated(g, sorted(gens))


def is_central(g: Group, s: Subgroup) -> bool:
    t = g.table
    return all(t[a][b] == t[b][a] for a in s.elements for b in range(g.order))


def is_normal(g: Group, s: Subgroup) -> bool:
    elems = s._element_set
    return all(g.conjugate(a, b) in elems for a in s.elements for b in range(g.order))


@dataclass(frozen=True)
class Quotient:
    """A quotient group together with its projection map."""

    group: Group
    onto: tuple[int, ...]  # parent element index -> quotient element index

    def project(self, x: int) -> int:
        return self.onto[x]


def quotient(g: Group, n: Subgroup) -> Quotient:
    """G/N with the canonical projection; requires N normal in G."""
    if n.parent is not g and n.parent.table != g.table:
        raise NotNormal("subgroup belongs to a different group")
    if not is_normal(g, n):
        raise NotNormal("subgroup is not normal")
    nset = n.elements
    coset_of = [-1] * g.order
    reps: list[int] = []
    for a in range(g.order):
        if coset_of[a] >= 0:
            continue
        idx = len(reps)
        reps.append(a)
        for h in nset:
            coset_of[g.table[a][h]] = idx
    k = len(reps)
    table = tuple(tuple(coset_of[g.table[a][b]] for b in reps) for a in reps)
    labels = tuple(f"{g.labels[r]}N" for r in reps)
    grp = make_group(
        table,
        identity=coset_of[g.identity],
        labels=labels,
        construction=f"({g.construction})/N{n.order}",
    )
    return Quotient(grp, tuple(coset_of))


def cyclic(q: int, construction: str | None = None) -> Group:
    """The cyclic group of order q (q = 1 gives the trivial group)."""
    if q < 1:
        raise NotAGroup(f"cyclic order must be >= 1, got {q}")
    if q > MAX_ORDER:
        raise SizeExceeded(f"order {q} exceeds hard ceiling {MAX_ORDER}")
    table = tuple(tuple((i + j) % q for j in range(q)) for i in range(q))
    return make_group(
        table,
        identity=0,
        labels=tuple(str(i) for i in range(q)),
        construction=construction or f"Cyc({q})",
    )


def direct_product(a: Group, b: Group, max_order: int = DEFAULT_MAX_ORDER) -> Group:
    """A x B with index (i, j) -> i*|B| + j."""
    n = a.order * b.order
    if n > max_order:
        raise SizeExceeded(f"product order {n} exceeds bound {max_order}")
    nb = b.order
    ta, tb = a.table, b.table
    table = tuple(
        tuple(ta[i][k] * nb + tb[j][l] for k in range(a.order) for l in range(b.order))
        for i in range(a.order)
        for j in range(b.order)
    )
    labels = tuple(
        f"({a.labels[i]},{b.labels[j]})" for i in range(a.order) for j in range(b.order)
    )
    cons = f"{a.construction} x {b.construction}"
    return make_group(table, identity=a.identity * nb + b.identity, labels=labels, construction=cons)


def abelian_basis(g: Group) -> list[tuple[int, int]]:
    """An independent cyclic-generator list [(element, order), ...] with
    G = <g1> (+) ... (+) <gk> and orders forming a decreasing divisibility chain.

    Splits off a maximal-order cyclic factor, recurses on the quotient, and
    lifts the quotient basis, correcting each lift by a power of the split
    generator so its order matches the quotient order.
    """
    if not g.is_abelian:
        raise NotAbelian(f"group {g.construction} is not abelian")
    if g.order == 1:
        return []
    x1 = max(range(g.order), key=lambda a: (g.element_order(a), -a))
    d1 = g.element_order(x1)
    c1 = subgroup_generated(g, [x1])
    if d1 == g.order:
        return [(x1, d1)]
    q = quotient(g, c1)
    reps = [next(a for a in range(g.order) if q.onto[a] == i) for i in range(q.group.order)]
    basis = [(x1, d1)]
    for yq, oq in abelian_basis(q.group):
        y = reps[yq]
        # y^oq lies in <x1>; divide out to make the lift's order exactly oq.
        s = 0
        z = g.power(y, oq)
        while z != g.identity:
            z = g.table[z][g.inverses[x1]]
            s += 1
        if s % oq != 0:
            raise NotAGroup("abelian basis lift failed")  # cannot happen for abelian g
        y = g.table[y][g.power(g.inverses[x1], s // oq)]
        if g.element_order(y) != oq:
            raise NotAGroup("abelian basis lift has wrong order")
        basis.append((y, oq))
    total = 1
    for _, o in basis:
        total *= o
    if total != g.order:
        raise NotAGroup("abelian basis orders do not multiply to the group order")
    return basis


def abelian_invariants(g: Group) -> AbelianInvariants:
    """Invariant factors d1 | d2 | ... | dk of an abelian group."""
    return AbelianInvariants.from_orders([o for _, o in abelian_basis(g)])


def abelian_invariants_by_counting(g: Group) -> AbelianInvariants:
    """Independent route: recover the type from #{x : x^d = e} counts.

    For each prime p, log_p #{x : x^(p^i) = e} = sum_j min(i, e_j) over the
    elementary divisors p^(e_j), so successive differences of the logs count
    divisors with e_j >= i. Serves as a test oracle against abelian_basis.
    """
    if not g.is_abelian:
        raise NotAbelian(f"group {g.construction} is not abelian")
    orders = [g.element_order(a) for a in range(g.order)]
    primes: set[int] = set()
    m = g.order
    d = 2
    while d * d <= m:
        if m % d == 0:
            primes.add(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        primes.add(m)
    divisors: list[int] = []
    for p in sorted(primes):
        logs = [0]
        i = 1
        while True:
            cnt = sum(1 for o in orders if (p**i) % o == 0)
            s = 0
            while cnt > 1:
                cnt //= p
                s += 1
            if s == logs[-1]:
                break
            logs.append(s)
            i += 1
        # counts[i-1] = number of elementary divisors p^e with e >= i
        counts = [logs[j + 1] - logs[j] for j in range(len(logs) - 1)]
        for j, n_ge in enumerate(counts):
            n_ge_next = counts[j + 1] if j + 1 < len(counts) else 0
            divisors.extend([p ** (j + 1)] * (n_ge - n_ge_next))
    return AbelianInvariants.from_orders(divisors)
