"""Finite groups given by multiplication tables.

Elements are the indices ``0 .. n-1`` with ``0`` the identity.  Subgroups
are frozensets of indices.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

from .abgroup import FinAbGroup

__all__ = ["FiniteGroup", "MAX_TABLE_ORDER"]

MAX_TABLE_ORDER = 24


class FiniteGroup:
    """A finite group from its Cayley table.

    >>> S3 = FiniteGroup.symmetric(3)
    >>> S3.order, S3.is_abelian
    (6, False)
    >>> len(S3.cyclic_subgroups_up_to_conjugacy())
    3
    """

    def __init__(self, table: Sequence[Sequence[int]], *, check: bool = True):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(self.table)
        self.order = n
        if check:
            self._validate()
        self.inverse = tuple(next(h for h in range(n) if self.table[g][h] == 0) for g in range(n))

    def _validate(self) -> None:
        n = self.order
        if n == 0:
            raise ValueError("group table is empty")
        for g, row in enumerate(self.table):
            if len(row) != n:
                raise ValueError(f"table row {g} has length {len(row)}, expected {n}")
            if sorted(row) != list(range(n)):
                raise ValueError(f"table row {g} is not a permutation of 0..{n - 1}")
        for g in range(n):
            if self.table[0][g] != g or self.table[g][0] != g:
                raise ValueError("element 0 must be the identity")
            if sorted(self.table[h][g] for h in range(n)) != list(range(n)):
                raise ValueError(f"table column {g} is not a permutation")
        if n <= MAX_TABLE_ORDER:
            t = self.table
            for a, b, c in itertools.product(range(n), repeat=3):
                if t[t[a][b]][c] != t[a][t[b][c]]:
                    raise ValueError(f"table is not associative at ({a}, {b}, {c})")

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @property
    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    # constructors

    @classmethod
    def from_elements(
        cls,
        gens: Iterable[Hashable],
        multiply: Callable[[Hashable, Hashable], Hashable],
        identity: Hashable,
    ) -> tuple["FiniteGroup", list]:
        """Close ``gens`` under ``multiply``; returns the group and its element labels."""
        labels = [identity]
        index = {identity: 0}
        gens = list(gens)
        frontier = [identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = multiply(x, g)
                    if y not in index:
                        index[y] = len(labels)
                        labels.append(y)
                        nxt.append(y)
            frontier = nxt
        table = [[index[multiply(a, b)] for b in labels] for a in labels]
        return cls(table, check=len(labels) <= MAX_TABLE_ORDER), labels

    @classmethod
    def from_permutations(cls, perms: Iterable[Sequence[int]]) -> tuple["FiniteGroup", list]:
        perms = [tuple(p) for p in perms]
        degree = len(perms[0]) if perms else 1
        ident = tuple(range(degree))
        # (a * b)(x) = a(b(x)): apply b first
        return cls.from_elements(perms, lambda a, b: tuple(a[b[x]] for x in range(degree)), ident)

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls([[(a + b) % n for b in range(n)] for a in range(n)])

    @classmethod
    def symmetric(cls, degree: int) -> "FiniteGroup":
        gens = [tuple(range(1, degree)) + (0,)]
        if degree > 2:
            gens.append((1, 0) + tuple(range(2, degree)))
        elif degree == 2:
            gens = [(1, 0)]
        return cls.from_permutations(gens)[0]

    @classmethod
    def dihedral(cls, n: int) -> "FiniteGroup":
        """Symmetries of the regular ``n``-gon (order ``2n``)."""
        rot = tuple((x + 1) % n for x in range(n))
        ref = tuple((-x) % n for x in range(n))
        return cls.from_permutations([rot, ref])[0]

    @classmethod
    def from_abelian(cls, A: FinAbGroup) -> tuple["FiniteGroup", list[tuple[int, ...]]]:
        """Table of ``A``; element ``i`` is the ``i``-th vector of ``A.elements()``."""
        labels = list(A.elements())
        index = {v: i for i, v in enumerate(labels)}
        table = [[index[A.add(a, b)] for b in labels] for a in labels]
        return cls(table, check=len(labels) <= MAX_TABLE_ORDER), labels

    def direct_product(self, other: "FiniteGroup") -> "FiniteGroup":
        n2 = other.order
        table = [
            [self.table[a // n2][b // n2] * n2 + other.table[a % n2][b % n2] for b in range(self.order * n2)]
            for a in range(self.order * n2)
        ]
        return FiniteGroup(table, check=self.order * n2 <= MAX_TABLE_ORDER)

    # subgroups

    def generate(self, gens: Iterable[int]) -> frozenset[int]:
        out = {0}
        frontier = [0]
        gens = [int(g) for g in gens]
        for g in gens:
            if not 0 <= g < self.order:
                raise ValueError(f"element index {g} out of range 0..{self.order - 1}")
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(out)

    def is_subgroup(self, S: Iterable[int]) -> bool:
        S = frozenset(S)
        return 0 in S and all(self.table[a][self.inverse[b]] in S for a in S for b in S)

    def whole(self) -> frozenset[int]:
        return frozenset(range(self.order))

    def conjugate(self, S: frozenset[int], g: int) -> frozenset[int]:
        gi = self.inverse[g]
        return frozenset(self.table[self.table[g][s]][gi] for s in S)

    def core(self, S: frozenset[int]) -> frozenset[int]:
        out = frozenset(S)
        for g in range(self.order):
            out &= self.conjugate(S, g)
        return out

    def normal_closure(self, S: Iterable[int]) -> frozenset[int]:
        S = frozenset(S)
        return self.generate(x for g in range(self.order) for x in self.conjugate(S, g))

    def is_normal(self, S: frozenset[int]) -> bool:
        return all(self.conjugate(S, g) == S for g in range(self.order))

    def commutator_subgroup(self) -> frozenset[int]:
        t, inv = self.table, self.inverse
        return self.generate(
            t[t[t[a][b]][inv[a]]][inv[b]] for a in range(self.order) for b in range(self.order)
        )

    def left_cosets(self, S: frozenset[int]) -> list[frozenset[int]]:
        """Left cosets ``gS`` ordered by their smallest element (``S`` first)."""
        seen: dict[frozenset[int], None] = {}
        for g in range(self.order):
            seen.setdefault(frozenset(self.table[g][s] for s in S), None)
        return sorted(seen, key=min)

    def cyclic_subgroups(self) -> list[frozenset[int]]:
        seen = {self.generate([g]) for g in range(self.order)}
        return sorted(seen, key=lambda S: (len(S), sorted(S)))

    def cyclic_subgroups_up_to_conjugacy(self) -> list[frozenset[int]]:
        reps: list[frozenset[int]] = []
        covered: set[frozenset[int]] = set()
        for S in self.cyclic_subgroups():
            if S in covered:
                continue
            reps.append(S)
            covered.update(self.conjugate(S, g) for g in range(self.order))
        return reps

    def element_order(self, g: int) -> int:
        return len(self.generate([g]))
