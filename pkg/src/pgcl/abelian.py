"""Finite abelian groups as invariant-factor lists, with direct sum and tensor."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_chain(cyclic_orders: list[int] | tuple[int, ...]) -> tuple[int, ...]:
    """Recombine arbitrary cyclic orders into the canonical chain d1 | d2 | ... | dk.

    Splits every order into prime-power elementary divisors, then zips the
    per-prime exponent lists from the top so the largest factor collects the
    largest power of every prime.
    """
    exps: dict[int, list[int]] = {}
    for d in cyclic_orders:
        if d < 1:
            raise ValueError(f"cyclic order must be positive, got {d}")
        for p, e in _factorize(d).items():
            exps.setdefault(p, []).append(e)
    depth = max((len(v) for v in exps.values()), default=0)
    factors = []
    for i in range(depth):
        f = 1
        for p, es in exps.items():
            es_sorted = sorted(es, reverse=True)
            if i < len(es_sorted):
                f *= p ** es_sorted[i]
        factors.append(f)
    return tuple(sorted(factors))


@dataclass(frozen=True)
class AbelianInvariants:
    """A finite abelian group, presented by its invariant factors.

    factors is the unique chain d1 | d2 | ... | dk with every di >= 2;
    the empty tuple is the trivial group.
    """

    factors: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a != 0:
                raise ValueError(f"not a divisibility chain: {self.factors}")
        if any(d < 2 for d in self.factors):
            raise ValueError(f"factors must be >= 2: {self.factors}")

    @classmethod
    def from_orders(cls, cyclic_orders) -> "AbelianInvariants":
        """Build from any list of cyclic orders (1s are dropped)."""
        return cls(invariant_chain([d for d in cyclic_orders if d > 1]))

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    def is_trivial(self) -> bool:
        return not self.factors

    def is_elementary(self, p: int) -> bool:
        return all(d == p for d in self.factors)

    def direct_sum(self, other: "AbelianInvariants") -> "AbelianInvariants":
        return AbelianInvariants.from_orders(self.factors + other.factors)

    def tensor(self, other: "AbelianInvariants") -> "AbelianInvariants":
        """Tensor product over Z: C_a (x) C_b = C_gcd(a,b), distributed."""
        return AbelianInvariants.from_orders(
            [gcd(a, b) for a in self.factors for b in other.factors]
        )

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " x ".join(f"C{d}" for d in self.factors)


TRIVIAL = AbelianInvariants(())
