"""Constructions: elementary abelian groups, extraspecial p-groups, central products.

Extraspecial groups come in two isomorphism types per (p, m). The plus type is
built on Heisenberg coordinates (a, b, c) in F_p^m x F_p^m x F_p with
(a,b,c)(a',b',c') = (a+a', b+b', c+c'+a.b'). The minus type replaces one
hyperbolic block by a twisted block on (i, j) in Z_{p^2} x Z_p with
i'' = i + i'(1+p)^j, plus (for p = 2 only) a 2jj' correction that turns the
block into the quaternion group instead of the dihedral one. Both models are
validated against the extraspecial postconditions after the table is built.
"""

from __future__ import annotations

from itertools import product

from .errors import (
    DecompositionFailed,
    IdentNotCentral,
    IdentNotIsomorphism,
    NotAGroup,
    NotPGroup,
    SizeExceeded,
)
from .groups import (
    DEFAULT_MAX_ORDER,
    MAX_ORDER,
    Group,
    Subgroup,
    center,
    cyclic,
    derived_subgroup,
    frattini,
    is_central,
    make_group,
    prime_power,
    quotient,
    subgroup_generated,
)


def _is_prime(p: int) -> bool:
    return prime_power(p) == (p, 1)


def elementary_abelian(p: int, k: int, max_order: int = DEFAULT_MAX_ORDER) -> Group:
    """(Z/p)^k on base-p digit vectors."""
    if not _is_prime(p):
        raise NotAGroup(f"{p} is not prime")
    if k < 0:
        raise NotAGroup("rank must be >= 0")
    n = p**k
    if n > max_order:
        raise SizeExceeded(f"order {n} exceeds bound {max_order}")
    vecs = list(product(range(p), repeat=k))
    pos = {v: i for i, v in enumerate(vecs)}
    table = tuple(
        tuple(pos[tuple((x + y) % p for x, y in zip(u, v))] for v in vecs) for u in vecs
    )
    labels = tuple("".join(map(str, v)) if k else "0" for v in vecs)
    return make_group(table, identity=0, labels=labels, construction=f"ElemAb({p},{k})")


def _heisenberg_table(p: int, m: int):
    """Index tuples (a_1..a_m, b_1..b_m, c); identity is the zero tuple."""
    coords = list(product(range(p), repeat=2 * m + 1))
    pos = {v: i for i, v in enumerate(coords)}
    table = []
    for u in coords:
        row = []
        ua, ub = u[:m], u[m : 2 * m]
        for v in coords:
            va, vb = v[:m], v[m : 2 * m]
            dot = sum(x * y for x, y in zip(ua, vb))
            w = tuple((x + y) % p for x, y in zip(u[: 2 * m], v[: 2 * m])) + (
                (u[2 * m] + v[2 * m] + dot) % p,
            )
            row.append(pos[w])
        table.append(tuple(row))
    labels = tuple("".join(map(str, v)) for v in coords)
    return tuple(table), labels


def _twisted_table(p: int, m: int):
    """Index tuples (i, j, a_1..a_{m-1}, b_1..b_{m-1}) with i mod p^2.

    i'' = i + i'(1+p)^j + p*(a.b') (+ p*j*j' when p = 2, the quaternion twist).
    """
    p2 = p * p
    k = m - 1
    coords = [
        (i, j) + rest
        for i in range(p2)
        for j in range(p)
        for rest in product(range(p), repeat=2 * k)
    ]
    pos = {v: i for i, v in enumerate(coords)}
    upow = [pow(1 + p, j, p2) for j in range(p)]
    table = []
    for u in coords:
        row = []
        ui, uj, ua, ub = u[0], u[1], u[2 : 2 + k], u[2 + k :]
        for v in coords:
            vi, vj, va, vb = v[0], v[1], v[2 : 2 + k], v[2 + k :]
            dot = sum(x * y for x, y in zip(ua, vb))
            wi = (ui + vi * upow[uj] + p * dot) % p2
            if p == 2:
                wi = (wi + 2 * uj * vj) % p2
            w = (wi, (uj + vj) % p) + tuple(
                (x + y) % p for x, y in zip(u[2:], v[2:])
            )
            row.append(pos[w])
        table.append(tuple(row))
    labels = tuple("".join(map(str, v)) for v in coords)
    return tuple(table), labels


def validate_extraspecial(g: Group, p: int, m: int, sign: str) -> None:
    """Check the extraspecial postconditions; raise DecompositionFailed otherwise."""
    ok = g.order == p ** (2 * m + 1)
    z = center(g)
    d = derived_subgroup(g)
    f = frattini(g)
    ok = ok and z.order == p and d.order == p and f.order == p
    ok = ok and set(z.elements) == set(d.elements) == set(f.elements)
    if ok:
        q = quotient(g, d).group
        ok = q.is_abelian and q.exponent() == p
    if ok and p != 2:
        ok = g.exponent() == (p if sign == "+" else p * p)
    if ok and p == 2:
        # Involution count separates the types: 2^2m + 2^m for plus (the
        # dihedral family), 2^2m - 2^m for minus (one quaternion block).
        sq = sum(1 for a in range(g.order) if g.table[a][a] == g.identity)
        want = 4**m + (2**m if sign == "+" else -(2**m))
        ok = sq == want
    if not ok:
        raise DecompositionFailed(f"extraspecial({p},{m},{sign}) failed validation")


def extraspecial(p: int, m: int, sign: str, max_order: int = DEFAULT_MAX_ORDER) -> Group:
    """The extraspecial group of order p^(2m+1) of the given type."""
    if not _is_prime(p):
        raise NotAGroup(f"{p} is not prime")
    if m < 1:
        raise NotAGroup("m must be >= 1")
    if sign not in ("+", "-"):
        raise NotAGroup(f"sign must be '+' or '-', got {sign!r}")
    n = p ** (2 * m + 1)
    if n > max_order:
        raise SizeExceeded(f"order {n} exceeds bound {max_order}")
    if sign == "+":
        table, labels = _heisenberg_table(p, m)
    else:
        table, labels = _twisted_table(p, m)
    g = make_group(table, identity=0, labels=labels, construction=f"ES({p},{m},{sign})")
    validate_extraspecial(g, p, m, sign)
    return g


def _extend_generator_map(a: Group, b: Group, pairs) -> dict[int, int]:
    """Extend x_i -> y_i to a map on <x_i>, failing if it is inconsistent."""
    phi = {a.identity: b.identity}
    frontier = [a.identity]
    while frontier:
        nxt = []
        for u in frontier:
            for x, y in pairs:
                v = a.table[u][x]
                w = b.table[phi[u]][y]
                if v in phi:
                    if phi[v] != w:
                        raise IdentNotIsomorphism("generator map is not well defined")
                else:
                    phi[v] = w
                    nxt.append(v)
        frontier = nxt
    return phi


def central_product(
    a: Group,
    b: Group,
    ident: list[tuple[int, int]] | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
) -> Group:
    """(A x B) / {(z, ident(z)^-1)} for a central identification z -> ident(z).

    ident lists generator pairs (x in a, y in b). When omitted, b must be
    cyclic and a must have derived subgroup of prime order p dividing |b|;
    the derived subgroup is then identified with the unique order-p subgroup
    of b. The quotient table is assembled directly on coset representatives,
    so the full direct product is never materialized.
    """
    if ident is None:
        gen_b = next((x for x in range(b.order) if b.element_order(x) == b.order), None)
        if gen_b is None:
            raise IdentNotIsomorphism("default identification needs a cyclic right factor")
        da = derived_subgroup(a)
        pp = prime_power(da.order)
        if pp is None or pp[1] != 1:
            raise IdentNotIsomorphism(
                f"default identification needs |a'| prime, got {da.order}"
            )
        p = pp[0]
        if b.order % p != 0:
            raise IdentNotIsomorphism(f"right factor has no subgroup of order {p}")
        x = min(e for e in da.elements if e != a.identity)
        y = b.power(gen_b, b.order // p)
        ident = [(x, y)]

    sub_a = subgroup_generated(a, [x for x, _ in ident])
    sub_b = subgroup_generated(b, [y for _, y in ident])
    if not is_central(a, sub_a):
        raise IdentNotCentral("identified subgroup of the left factor is not central")
    if not is_central(b, sub_b):
        raise IdentNotCentral("identified subgroup of the right factor is not central")
    if sub_a.order != sub_b.order:
        raise IdentNotIsomorphism("identified subgroups have different orders")
    phi = _extend_generator_map(a, b, ident)
    if len(phi) != sub_a.order or set(phi.values()) != set(sub_b.elements):
        raise IdentNotIsomorphism("generator map is not a bijection onto the target")
    phi_inv = {w: v for v, w in phi.items()}

    n = a.order * b.order // sub_a.order
    if n > max_order:
        raise SizeExceeded(f"central product order {n} exceeds bound {max_order}")

    # Coset transversal of sub_b in b; the canonical pair for (u, v)N moves
    # the sub_b-part of v across to the a-side through phi^-1.
    rep_of = [-1] * b.order
    reps = []
    for v in range(b.order):
        if rep_of[v] >= 0:
            continue
        t = len(reps)
        reps.append(v)
        for w in sub_b.elements:
            rep_of[b.table[v][w]] = t
    nreps = len(reps)

    def pack(u: int, t: int) -> int:
        return u * nreps + t

    table = []
    for u1 in range(a.order):
        for t1 in range(nreps):
            row = []
            v1 = reps[t1]
            for u2 in range(a.order):
                for t2 in range(nreps):
                    u = a.table[u1][u2]
                    v = b.table[v1][reps[t2]]
                    t = rep_of[v]
                    beta = b.table[b.inv(reps[t])][v]
                    row.append(pack(a.table[u][phi_inv[beta]], t))
            table.append(tuple(row))
    labels = tuple(
        f"({a.labels[u]},{b.labels[reps[t]]})" for u in range(a.order) for t in range(nreps)
    )
    cons = f"({a.construction} . {b.construction})"
    return make_group(tuple(table), identity=None, labels=labels, construction=cons)
