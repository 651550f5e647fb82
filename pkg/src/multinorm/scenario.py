"""Scenario data: an étale algebra ``L = K x K'`` encoded as subgroups.

A scenario fixes a finite Galois group ``G~`` and, for every factor field
of ``L``, the subgroup of ``G~`` fixing it.  Places are modelled through
their decomposition subgroups: with ``chebotarev`` on, every cyclic
subgroup occurs; ``extra`` lists further (possibly non-cyclic) ones.

Abelian scenarios carry a ``FinAbGroup`` and ``AbSubgroup`` factors; table
scenarios carry a ``FiniteGroup`` and frozenset factors and are only used
by the cohomology oracle.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Any, Sequence, Union

from .abgroup import (
    AbSubgroup,
    FinAbGroup,
    cyclic_subgroups,
    quotient,
    subgroup_intersect,
    subgroup_join,
)
from .groups import MAX_TABLE_ORDER, FiniteGroup

__all__ = [
    "ScenarioError",
    "Factor",
    "LocalProfile",
    "GaloisScenario",
    "PlaceDatum",
    "CyclicScenario",
    "parse_scenario",
    "parse_cyclic",
    "load_document",
    "scenario_to_document",
    "cyclic_to_document",
    "chebotarev_profile",
    "profile_subgroups",
    "prime_power",
    "local_degrees",
    "derive_cyclic",
    "base_change_to_F",
    "p_part",
    "f_ab_index",
    "normalize_redundant_factors",
    "faithful_quotient",
    "to_table_scenario",
]

Subgroup = Union[AbSubgroup, frozenset]


class ScenarioError(ValueError):
    """Invalid scenario input or a violated hypothesis of a derivation."""


@dataclass(frozen=True)
class Factor:
    name: str
    subgroup: Subgroup


@dataclass(frozen=True)
class LocalProfile:
    chebotarev: bool = True
    extra: tuple[Subgroup, ...] = ()


@dataclass(frozen=True)
class GaloisScenario:
    group: Union[FinAbGroup, FiniteGroup]
    k_factors: tuple[Factor, ...]
    kprime_factors: tuple[Factor, ...] = ()
    local_profile: LocalProfile = field(default_factory=LocalProfile)
    designate: str | None = None

    @property
    def is_abelian(self) -> bool:
        return isinstance(self.group, FinAbGroup)

    @property
    def factors(self) -> tuple[Factor, ...]:
        return self.k_factors + self.kprime_factors

    @property
    def group_order(self) -> int:
        return self.group.order

    def factor(self, name: str) -> Factor:
        for f in self.factors:
            if f.name == name:
                return f
        raise ScenarioError(f"no factor named {name!r}")

    def whole(self) -> Subgroup:
        return self.group.whole()

    def split_on(self, name: str) -> "GaloisScenario":
        """The same algebra with ``name`` as the only K-side factor."""
        chosen = self.factor(name)
        rest = tuple(f for f in self.factors if f.name != name)
        return replace(self, k_factors=(chosen,), kprime_factors=rest, designate=name)


@dataclass(frozen=True)
class PlaceDatum:
    label: str
    e_v: int
    e_i_v: tuple[int, ...]


@dataclass(frozen=True)
class CyclicScenario:
    """Local degree data for a cyclic ``p``-power distinguished factor.

    ``names`` (optional) records which input factor each position of
    ``e_list`` came from.
    """

    p: int
    e: int
    e_list: tuple[int, ...]
    places: tuple[PlaceDatum, ...] = ()
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ScenarioError(f"p = {self.p} is not prime")
        if self.e < 0:
            raise ScenarioError(f"e = {self.e} is negative")
        for i, ei in enumerate(self.e_list):
            if not 0 <= ei <= self.e:
                raise ScenarioError(f"e_i[{i}] = {ei} must lie in 0..e = {self.e}")
        if list(self.e_list) != sorted(self.e_list, reverse=True):
            raise ScenarioError(f"e_i = {list(self.e_list)} must be nonincreasing")
        m = len(self.e_list)
        for k, d in enumerate(self.places):
            where = f"places[{k}] ({d.label})"
            if not 0 <= d.e_v <= self.e:
                raise ScenarioError(f"{where}: e_v = {d.e_v} must lie in 0..e = {self.e}")
            if len(d.e_i_v) != m:
                raise ScenarioError(f"{where}: e_i_v has {len(d.e_i_v)} entries, expected {m}")
            for i, t in enumerate(d.e_i_v):
                bound = min(d.e_v, self.e_list[i])
                if not 0 <= t <= bound:
                    raise ScenarioError(
                        f"{where}: e_i_v[{i}] = {t} violates 0 <= e_i(v) <= min(e_v, e_i) = {bound}"
                    )

    @property
    def m(self) -> int:
        return len(self.e_list)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % q for q in range(2, math.isqrt(n) + 1))


def prime_power(n: int) -> tuple[int, int] | None:
    """``(p, k)`` with ``n = p**k`` (``n = 1`` gives ``(0, 0)``), else ``None``."""
    if n == 1:
        return 0, 0
    for p in range(2, n + 1):
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            return (p, k) if n == 1 else None
    return None


def _primes_dividing(n: int) -> list[int]:
    out, p = [], 2
    while n > 1:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    return out


# parsing


def load_document(text: str | bytes, what: str = "document") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{what}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise ScenarioError(msg)


def _int(x: Any, where: str) -> int:
    _expect(isinstance(x, int) and not isinstance(x, bool), f"{where}: expected an integer, got {x!r}")
    return x


def _parse_group(doc: Any):
    _expect(isinstance(doc, dict), "group: expected an object")
    if "invariant_factors" in doc:
        raw = doc["invariant_factors"]
        _expect(isinstance(raw, list), "group.invariant_factors: expected a list")
        factors = [_int(d, f"group.invariant_factors[{i}]") for i, d in enumerate(raw)]
        try:
            return FinAbGroup(tuple(factors))
        except ValueError as exc:
            raise ScenarioError(f"group.invariant_factors: {exc}") from None
    if "table" in doc:
        raw = doc["table"]
        _expect(isinstance(raw, list) and raw, "group.table: expected a nonempty list of rows")
        _expect(
            len(raw) <= MAX_TABLE_ORDER,
            f"group.table: order {len(raw)} exceeds the table-group limit {MAX_TABLE_ORDER}",
        )
        rows = []
        for i, row in enumerate(raw):
            _expect(isinstance(row, list), f"group.table[{i}]: expected a list")
            rows.append([_int(x, f"group.table[{i}][{j}]") for j, x in enumerate(row)])
        try:
            return FiniteGroup(rows)
        except ValueError as exc:
            raise ScenarioError(f"group.table: {exc}") from None
    raise ScenarioError("group: needs 'invariant_factors' or 'table'")


def _parse_subgroup(group, gens: Any, where: str) -> Subgroup:
    _expect(isinstance(gens, list), f"{where}: expected a list of generators")
    if isinstance(group, FinAbGroup):
        vecs = []
        for k, g in enumerate(gens):
            w = f"{where}[{k}]"
            _expect(isinstance(g, list), f"{where}[{k}]: expected a coordinate list")
            _expect(len(g) == group.rank, f"{w}: has {len(g)} coordinates, group has rank {group.rank}")
            for i, (x, d) in enumerate(zip(g, group.invariant_factors)):
                _int(x, f"{w}[{i}]")
                _expect(0 <= x < d, f"{w}[{i}]: coordinate {x} out of range for factor Z/{d}")
            vecs.append(tuple(g))
        return group.subgroup(vecs)
    idx = []
    for k, g in enumerate(gens):
        _int(g, f"{where}[{k}]")
        _expect(0 <= g < group.order, f"{where}[{k}]: element index {g} out of range 0..{group.order - 1}")
        idx.append(g)
    return group.generate(idx)


def _parse_factors(group, doc: Any, key: str) -> tuple[Factor, ...]:
    _expect(isinstance(doc, list), f"{key}: expected a list")
    out = []
    for k, item in enumerate(doc):
        where = f"{key}[{k}]"
        _expect(isinstance(item, dict), f"{where}: expected an object")
        name = item.get("name", f"{key}{k}")
        _expect(isinstance(name, str) and name, f"{where}.name: expected a nonempty string")
        _expect("gens" in item, f"{where}: missing 'gens'")
        out.append(Factor(name, _parse_subgroup(group, item["gens"], f"{where}.gens")))
    return tuple(out)


def _dedupe_profile(group, subgroups: Sequence[Subgroup]) -> tuple[Subgroup, ...]:
    out: list[Subgroup] = []
    seen: set = set()
    for S in subgroups:
        if isinstance(group, FiniteGroup):
            keys = {group.conjugate(S, g) for g in group.elements}
        else:
            keys = {S}
        if seen & keys:
            continue
        seen |= keys
        out.append(S)
    return tuple(out)


def _faithfulness_witness(scenario: GaloisScenario):
    """A nontrivial element lying in every factor's normal core, or ``None``."""
    G = scenario.group
    if isinstance(G, FinAbGroup):
        common = G.whole()
        for f in scenario.factors:
            common = subgroup_intersect(common, f.subgroup)
        return None if common.is_trivial else common.minimal_generators()[0]
    common = G.whole()
    for f in scenario.factors:
        common &= G.core(f.subgroup)
    nontrivial = sorted(common - {0})
    return nontrivial[0] if nontrivial else None


def parse_scenario(document: Union[str, bytes, dict]) -> GaloisScenario:
    """Validate a scenario document (JSON text or an already-decoded dict).

    >>> s = parse_scenario('{"group": {"invariant_factors": [2, 2]}, "K": [{"name": "K0", "gens": []}]}')
    >>> s.group, len(s.factors)
    (FinAbGroup((2, 2)), 1)
    """
    doc = load_document(document, "scenario") if isinstance(document, (str, bytes)) else document
    _expect(isinstance(doc, dict), "scenario: expected a JSON object")
    unknown = set(doc) - {"group", "K", "Kprime", "local_profile", "designate"}
    _expect(not unknown, f"scenario: unknown keys {sorted(unknown)}")
    _expect("group" in doc, "scenario: missing 'group'")
    group = _parse_group(doc["group"])
    _expect("K" in doc, "scenario: missing 'K'")
    k_factors = _parse_factors(group, doc["K"], "K")
    _expect(len(k_factors) > 0, "K: needs at least one factor")
    kprime = _parse_factors(group, doc.get("Kprime", []), "Kprime")
    names = [f.name for f in k_factors + kprime]
    dupes = sorted({n for n in names if names.count(n) > 1})
    _expect(not dupes, f"factor names must be unique, repeated: {dupes}")

    prof = doc.get("local_profile", {})
    _expect(isinstance(prof, dict), "local_profile: expected an object")
    cheb = prof.get("chebotarev", True)
    _expect(isinstance(cheb, bool), "local_profile.chebotarev: expected true or false")
    extras_doc = prof.get("extra", [])
    _expect(isinstance(extras_doc, list), "local_profile.extra: expected a list")
    extras = []
    for k, item in enumerate(extras_doc):
        where = f"local_profile.extra[{k}]"
        _expect(isinstance(item, dict) and "gens" in item, f"{where}: expected an object with 'gens'")
        extras.append(_parse_subgroup(group, item["gens"], f"{where}.gens"))
    profile = LocalProfile(cheb, _dedupe_profile(group, extras))

    designate = doc.get("designate")
    if designate is not None:
        _expect(designate in names, f"designate: no factor named {designate!r}")

    scenario = GaloisScenario(group, k_factors, kprime, profile, designate)
    witness = _faithfulness_witness(scenario)
    if witness is not None:
        shown = list(witness) if isinstance(witness, tuple) else witness
        raise ScenarioError(
            f"faithfulness: element {shown} lies in the normal core of every factor subgroup; "
            "pass the Galois group of the compositum instead"
        )
    return scenario


def parse_cyclic(document: Union[str, bytes, dict]) -> CyclicScenario:
    """Validate a raw cyclic document.

    ``e_i`` may be given in any order; it is sorted nonincreasing together
    with the per-place data and the original positions are kept in ``names``.
    """
    doc = load_document(document, "cyclic scenario") if isinstance(document, (str, bytes)) else document
    _expect(isinstance(doc, dict), "cyclic scenario: expected a JSON object")
    for key in ("p", "e", "e_i"):
        _expect(key in doc, f"cyclic scenario: missing {key!r}")
    p = _int(doc["p"], "p")
    e = _int(doc["e"], "e")
    _expect(isinstance(doc["e_i"], list), "e_i: expected a list")
    e_i = [_int(x, f"e_i[{k}]") for k, x in enumerate(doc["e_i"])]
    order = sorted(range(len(e_i)), key=lambda i: -e_i[i])
    places = []
    raw_places = doc.get("places", [])
    _expect(isinstance(raw_places, list), "places: expected a list")
    for k, item in enumerate(raw_places):
        where = f"places[{k}]"
        _expect(isinstance(item, dict), f"{where}: expected an object")
        label = item.get("label", f"v{k}")
        _expect(isinstance(label, str), f"{where}.label: expected a string")
        _expect("e_v" in item and "e_i_v" in item, f"{where}: needs 'e_v' and 'e_i_v'")
        e_v = _int(item["e_v"], f"{where}.e_v")
        _expect(isinstance(item["e_i_v"], list), f"{where}.e_i_v: expected a list")
        e_i_v = [_int(x, f"{where}.e_i_v[{i}]") for i, x in enumerate(item["e_i_v"])]
        _expect(len(e_i_v) == len(e_i), f"{where}.e_i_v: has {len(e_i_v)} entries, expected {len(e_i)}")
        places.append(PlaceDatum(label, e_v, tuple(e_i_v[i] for i in order)))
    return CyclicScenario(
        p, e, tuple(e_i[i] for i in order), tuple(places), tuple(f"K{i + 1}" for i in order)
    )


def _subgroup_doc(group, S: Subgroup) -> list:
    if isinstance(group, FinAbGroup):
        return [list(g) for g in S.minimal_generators()]
    gens: list[int] = []
    span = group.generate([])
    for x in sorted(S):
        if x not in span:
            gens.append(x)
            span = group.generate(gens)
    return gens


def scenario_to_document(scenario: GaloisScenario) -> dict:
    G = scenario.group
    if isinstance(G, FinAbGroup):
        group = {"invariant_factors": list(G.invariant_factors)}
    else:
        group = {"table": [list(r) for r in G.table]}
    doc = {
        "group": group,
        "K": [{"name": f.name, "gens": _subgroup_doc(G, f.subgroup)} for f in scenario.k_factors],
        "Kprime": [{"name": f.name, "gens": _subgroup_doc(G, f.subgroup)} for f in scenario.kprime_factors],
        "local_profile": {
            "chebotarev": scenario.local_profile.chebotarev,
            "extra": [{"gens": _subgroup_doc(G, S)} for S in scenario.local_profile.extra],
        },
    }
    if scenario.designate is not None:
        doc["designate"] = scenario.designate
    return doc


def cyclic_to_document(cs: CyclicScenario) -> dict:
    return {
        "p": cs.p,
        "e": cs.e,
        "e_i": list(cs.e_list),
        "places": [{"label": d.label, "e_v": d.e_v, "e_i_v": list(d.e_i_v)} for d in cs.places],
    }


# profiles


def chebotarev_profile(G) -> list[Subgroup]:
    """Every cyclic subgroup of ``G`` (up to conjugacy for table groups).

    >>> [S.order for S in chebotarev_profile(FinAbGroup((2, 2)))]
    [1, 2, 2, 2]
    """
    if isinstance(G, FinAbGroup):
        return cyclic_subgroups(G)
    return G.cyclic_subgroups_up_to_conjugacy()


def profile_subgroups(scenario: GaloisScenario) -> list[Subgroup]:
    """Decomposition subgroups the scenario's places realize (deduplicated)."""
    base = chebotarev_profile(scenario.group) if scenario.local_profile.chebotarev else []
    return list(_dedupe_profile(scenario.group, list(base) + list(scenario.local_profile.extra)))


def describe_profile(scenario: GaloisScenario) -> str:
    prof = scenario.local_profile
    n_cyc = len(chebotarev_profile(scenario.group)) if prof.chebotarev else 0
    if prof.chebotarev:
        head = f"every cyclic subgroup ({n_cyc}) is a decomposition group"
    else:
        head = "no Chebotarev places"
    return (
        f"{head}; {len(prof.extra)} declared extra decomposition group(s); "
        "results are relative to this local profile"
    )


def _describe_subgroup(group, S: Subgroup) -> str:
    gens = _subgroup_doc(group, S)
    if isinstance(group, FinAbGroup):
        return "<" + ", ".join("(" + ",".join(map(str, g)) + ")" for g in gens) + ">"
    return "<" + ", ".join(map(str, gens)) + ">"


# local data


def _designated(scenario: GaloisScenario, name: str | None) -> tuple[Factor, list[Factor]]:
    if name is None:
        name = scenario.designate or scenario.k_factors[0].name
    chosen = scenario.factor(name)
    return chosen, [f for f in scenario.factors if f.name != name]


def _cyclic_prime(scenario: GaloisScenario, HK: AbSubgroup) -> tuple[int, int]:
    G, _ = quotient(scenario.group, HK)
    pp = prime_power(G.order)
    if G.rank > 1 or pp is None:
        raise ScenarioError(
            f"distinguished quotient {G} is not cyclic of prime-power order"
        )
    p, e = pp
    if p == 0:
        p = 2  # trivial quotient: any prime works, all degrees are 0
    return p, e


def _log(n: int, p: int) -> int:
    k = 0
    while n > 1:
        if n % p:
            raise ScenarioError(f"{n} is not a power of {p}")
        n //= p
        k += 1
    return k


def local_degrees(scenario: GaloisScenario, D: AbSubgroup, designated: str | None = None):
    """``(e_v, [e_i(v)])`` for the place with decomposition group ``D``.

    ``e_i(v)`` is listed for the non-designated factors in scenario order.
    """
    _require_abelian(scenario, "local_degrees")
    chosen, others = _designated(scenario, designated)
    HK = chosen.subgroup
    p, _ = _cyclic_prime(scenario, HK)
    e_v = _log(subgroup_join(D, HK).order // HK.order, p)
    e_i_v = []
    for f in others:
        DH = subgroup_intersect(D, f.subgroup)
        e_i_v.append(_log(DH.order // subgroup_intersect(DH, HK).order, p))
    return e_v, e_i_v


def derive_cyclic(scenario: GaloisScenario, distinguished: str | None = None) -> CyclicScenario:
    _require_abelian(scenario, "derive_cyclic")
    chosen, others = _designated(scenario, distinguished)
    HK = chosen.subgroup
    p, e = _cyclic_prime(scenario, HK)
    e_i = [_log(f.subgroup.order // subgroup_intersect(f.subgroup, HK).order, p) for f in others]
    order = sorted(range(len(others)), key=lambda i: -e_i[i])
    places = []
    seen = set()
    for D in profile_subgroups(scenario):
        e_v, e_i_v = local_degrees(scenario, D, chosen.name)
        key = (e_v, tuple(e_i_v[i] for i in order))
        if key in seen:
            continue
        seen.add(key)
        places.append(PlaceDatum(_describe_subgroup(scenario.group, D), *key))
    return CyclicScenario(
        p, e, tuple(e_i[i] for i in order), tuple(places), tuple(others[i].name for i in order)
    )


def _require_abelian(scenario: GaloisScenario, what: str) -> None:
    if not scenario.is_abelian:
        raise ScenarioError(f"{what} needs an abelian scenario")


# reductions


def _move_to(scenario: GaloisScenario, ambient: AbSubgroup) -> GaloisScenario:
    """Restate the scenario inside the subgroup ``ambient`` of its group."""
    new_group = ambient.group

    def move(S: AbSubgroup) -> AbSubgroup:
        return new_group.subgroup(ambient.coordinates(g) for g in S.basis)

    extras = []
    for D in profile_subgroups(scenario):
        E = subgroup_intersect(D, ambient)
        extras.append(move(E))
    if scenario.local_profile.chebotarev:
        cyclic = set(cyclic_subgroups(new_group))
        extras = [E for E in extras if E not in cyclic]
    return GaloisScenario(
        new_group,
        tuple(Factor(f.name, move(f.subgroup)) for f in scenario.k_factors),
        tuple(Factor(f.name, move(f.subgroup)) for f in scenario.kprime_factors),
        LocalProfile(True, _dedupe_profile(new_group, extras)),
        scenario.designate,
    )


def base_change_to_F(scenario: GaloisScenario, designated: str | None = None) -> GaloisScenario:
    """Replace ``k`` by ``F``, the intersection of all factor fields.

    The ambient group becomes the join of the factor subgroups; the new
    profile consists of the old decomposition groups intersected with it.
    """
    _require_abelian(scenario, "base change")
    chosen, _ = _designated(scenario, designated)
    G, _ = quotient(scenario.group, chosen.subgroup)
    if G.rank > 1:
        raise ScenarioError(
            f"base change needs a cyclic distinguished factor; {chosen.name} has group {G}"
        )
    join = scenario.group.trivial()
    for f in scenario.factors:
        join = subgroup_join(join, f.subgroup)
    if join == scenario.group.whole():
        return scenario
    return _move_to(scenario, join)


def p_part(scenario: GaloisScenario, p: int) -> GaloisScenario:
    """Replace every factor field ``K_i`` by its maximal ``p``-subextension.

    The result keeps the ambient group, so it is usually not faithful; use
    ``faithful_quotient`` to obtain a file-ready scenario.
    """
    _require_abelian(scenario, "p_part")
    if not _is_prime(p):
        raise ScenarioError(f"p = {p} is not prime")
    G = scenario.group
    p_exp = 1
    while G.exponent % (p_exp * p) == 0:
        p_exp *= p
    coprime = G.subgroup(G.scale(p_exp, G.generator(i)) for i in range(G.rank))
    return replace(
        scenario,
        k_factors=tuple(Factor(f.name, subgroup_join(f.subgroup, coprime)) for f in scenario.k_factors),
        kprime_factors=tuple(
            Factor(f.name, subgroup_join(f.subgroup, coprime)) for f in scenario.kprime_factors
        ),
    )


def faithful_quotient(scenario: GaloisScenario) -> GaloisScenario:
    """Pass to the Galois group of the compositum of the factor fields."""
    _require_abelian(scenario, "faithful_quotient")
    G = scenario.group
    common = G.whole()
    for f in scenario.factors:
        common = subgroup_intersect(common, f.subgroup)
    if common.is_trivial:
        return scenario
    Q, proj = quotient(G, common)

    def push(S: AbSubgroup) -> AbSubgroup:
        return Q.subgroup(proj(g) for g in S.basis)

    extras = _dedupe_profile(Q, [push(S) for S in scenario.local_profile.extra])
    if scenario.local_profile.chebotarev:
        cyclic = set(cyclic_subgroups(Q))
        extras = tuple(S for S in extras if S not in cyclic)
    return GaloisScenario(
        Q,
        tuple(Factor(f.name, push(f.subgroup)) for f in scenario.k_factors),
        tuple(Factor(f.name, push(f.subgroup)) for f in scenario.kprime_factors),
        LocalProfile(scenario.local_profile.chebotarev, extras),
        scenario.designate,
    )


def f_ab_index(scenario: GaloisScenario) -> int:
    """Degree over ``k`` of the largest abelian extension inside every factor.

    >>> s = parse_scenario({"group": {"invariant_factors": [6]}, "K": [{"gens": []}]})
    >>> f_ab_index(s)
    6
    """
    G = scenario.group
    if isinstance(G, FinAbGroup):
        N = G.trivial()
        for f in scenario.factors:
            N = subgroup_join(N, f.subgroup)
        return N.index
    gens = set(G.commutator_subgroup())
    for f in scenario.factors:
        gens |= f.subgroup
    return G.order // len(G.normal_closure(gens))


def normalize_redundant_factors(scenario: GaloisScenario) -> tuple[GaloisScenario, list[str]]:
    """Drop factor fields that contain another factor field.

    When ``K_a`` is contained in ``K_b`` (``H_b <= H_a``) the factor ``K_b``
    does not change the torus's Tate-Shafarevich group and is removed;
    duplicates keep their first copy.  If every K-side factor disappears,
    the first surviving factor moves to the K side.
    """
    factors = list(scenario.factors)
    log: list[str] = []
    kept: list[Factor] = []
    for idx, f in enumerate(factors):
        witness = None
        for jdx, g in enumerate(factors):
            if jdx == idx:
                continue
            if f.subgroup == g.subgroup:
                if jdx < idx:
                    witness = g
                    break
            elif f.subgroup <= g.subgroup:
                witness = g
                break
        if witness is None:
            kept.append(f)
        else:
            log.append(f"dropped {f.name}: its field contains the field of {witness.name}")
    k_names = {f.name for f in scenario.k_factors}
    k_side = tuple(f for f in kept if f.name in k_names)
    rest = tuple(f for f in kept if f.name not in k_names)
    if not k_side:
        k_side, rest = rest[:1], rest[1:]
        log.append(f"moved {k_side[0].name} to the K side")
    designate = scenario.designate if scenario.designate in {f.name for f in kept} else None
    return replace(scenario, k_factors=k_side, kprime_factors=rest, designate=designate), log


def to_table_scenario(scenario: GaloisScenario) -> tuple[GaloisScenario, list]:
    """The same scenario over the multiplication table of its abelian group."""
    if not scenario.is_abelian:
        return scenario, list(scenario.group.elements)
    G, labels = FiniteGroup.from_abelian(scenario.group)
    index = {v: i for i, v in enumerate(labels)}

    def conv(S: AbSubgroup) -> frozenset:
        return frozenset(index[v] for v in S.elements())

    return (
        GaloisScenario(
            G,
            tuple(Factor(f.name, conv(f.subgroup)) for f in scenario.k_factors),
            tuple(Factor(f.name, conv(f.subgroup)) for f in scenario.kprime_factors),
            LocalProfile(scenario.local_profile.chebotarev, tuple(conv(S) for S in scenario.local_profile.extra)),
            scenario.designate,
        ),
        labels,
    )
