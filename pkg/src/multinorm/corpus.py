"""Exhaustive families of small abelian scenarios."""

from __future__ import annotations

import itertools
from typing import Iterator

from .abgroup import FinAbGroup, all_subgroups, quotient
from .scenario import Factor, GaloisScenario, LocalProfile, faithful_quotient, prime_power

__all__ = [
    "abelian_groups",
    "scenario_key",
    "pair_scenarios",
    "triple_scenarios",
    "dedupe",
]


def _chains(n: int, smallest: int = 2) -> Iterator[tuple[int, ...]]:
    """Divisibility chains d1 | d2 | ... with product n, listed from d1."""
    if n == 1:
        yield ()
        return
    for d in range(smallest, n + 1):
        if n % d:
            continue
        rest = n // d
        for tail in _chains(rest, d):
            if not tail or tail[0] % d == 0:
                yield (d,) + tail


def abelian_groups(max_order: int, min_order: int = 1) -> list[FinAbGroup]:
    """Every abelian group of order in ``[min_order, max_order]``, one per isomorphism class."""
    out = []
    for n in range(min_order, max_order + 1):
        for chain in _chains(n):
            out.append(FinAbGroup(chain))
    return out


def scenario_key(s: GaloisScenario):
    return (
        s.group,
        tuple(f.subgroup for f in s.k_factors),
        tuple(f.subgroup for f in s.kprime_factors),
        s.local_profile,
        s.designate,
    )


def dedupe(scenarios) -> list[GaloisScenario]:
    seen: dict = {}
    for s in scenarios:
        seen.setdefault(scenario_key(s), s)
    return list(seen.values())


def _build(G: FinAbGroup, k_side, kprime) -> GaloisScenario:
    return GaloisScenario(
        G,
        tuple(Factor(f"K{i}", H) for i, H in enumerate(k_side)),
        tuple(Factor(f"K{len(k_side) + i}", H) for i, H in enumerate(kprime)),
        LocalProfile(),
    )


def pair_scenarios(max_order: int, *, min_order: int = 1, faithful: bool = True) -> list[GaloisScenario]:
    """Every ordered pair ``(H_K, H_1)`` of subgroups, Chebotarev profile.

    With ``faithful`` set, each pair is replaced by its faithful quotient
    and duplicates are removed.
    """
    out = []
    for G in abelian_groups(max_order, min_order):
        subs = all_subgroups(G)
        for HK, H1 in itertools.product(subs, repeat=2):
            s = _build(G, [HK], [H1])
            out.append(faithful_quotient(s) if faithful else s)
    return dedupe(out)


def triple_scenarios(
    max_order: int,
    *,
    k_side: int = 1,
    min_order: int = 1,
    cyclic_pp_k: bool = False,
    max_e: int | None = None,
) -> list[GaloisScenario]:
    """Faithful scenarios with ``k_side`` K factors and ``3 - k_side`` K' factors.

    K' factors are taken as unordered multisets.  ``cyclic_pp_k`` keeps
    only a first K factor with cyclic prime-power quotient of exponent at
    most ``max_e``.
    """
    out = []
    for G in abelian_groups(max_order, min_order):
        subs = all_subgroups(G)
        for ks in itertools.product(subs, repeat=k_side):
            if cyclic_pp_k:
                Q, _ = quotient(G, ks[0])
                pp = prime_power(Q.order)
                if Q.rank > 1 or pp is None or (max_e is not None and pp[1] > max_e):
                    continue
            for kp in itertools.combinations_with_replacement(range(len(subs)), 3 - k_side):
                s = _build(G, list(ks), [subs[i] for i in kp])
                if faithful_quotient(s) is s:
                    out.append(s)
    return dedupe(out)
