"""The report produced by both engines."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

__all__ = ["ShaReport", "Certificate"]


class Certificate:
    """Reasons an engine can give for an exact answer."""

    SINGLE_FIELD = "single-field"
    CYCLIC = "cyclic-distinguished-factor"
    FULL_DECOMPOSITION = "full-decomposition-group"
    TRIVIAL_INTERSECTION = "trivial-intersection"
    DEMARCHE_WEI = "demarche-wei"
    POLLIO = "pollio"
    SHA2_VANISHES = "sha2-vanishes"
    IOTA2_INJECTIVE = "iota2-injective"
    ORACLE = "oracle"
    NONE = "none"


@dataclass(frozen=True)
class ShaReport:
    """Tate-Shafarevich group of a multinorm-one torus, or bounds for it.

    ``sha`` holds invariant factors when ``status == "exact"``.  Otherwise
    ``s_mod_d`` is a subgroup of the answer and ``upper_order`` bounds its
    order.  ``ker_iota2`` is a group of which the unresolved part is a
    subgroup, so it gives the sharper upper bound
    ``|s_mod_d| * |ker_iota2|``.

    Reports computed by the oracle alone for non-abelian groups carry no
    ``s_mod_d`` or ``sha2_k``.
    """

    status: str
    s_mod_d: tuple[int, ...] | None
    sha2_k: tuple[int, ...] | None
    certificate: str
    designation: str | None
    profile_note: str
    sha: tuple[int, ...] | None = None
    upper_order: int | None = None
    ker_iota2: tuple[int, ...] | None = None
    tamagawa: Fraction | None = None
    f_ab_index: int | None = None
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.status not in ("exact", "bounds"):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "exact" and self.sha is None:
            raise ValueError("exact report without a group")
        if self.s_mod_d is None or self.sha2_k is None:
            if self.status != "exact":
                raise ValueError("bounds need both s_mod_d and sha2_k")
            return
        lower = math.prod(self.s_mod_d)
        if self.status == "exact":
            order = math.prod(self.sha)
            if order % lower or (lower * math.prod(self.sha2_k)) % order:
                raise AssertionError(
                    f"|S/D| = {lower} must divide |Sha| = {order}, "
                    f"which must divide |S/D|*|Sha2| = {lower * math.prod(self.sha2_k)}"
                )

    @property
    def is_exact(self) -> bool:
        return self.status == "exact"

    @property
    def order(self) -> int | None:
        return math.prod(self.sha) if self.sha is not None else None

    @property
    def upper_bound(self) -> int:
        if self.sha is not None:
            return math.prod(self.sha)
        return self.upper_order

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "status": self.status,
            "s_mod_d": None if self.s_mod_d is None else list(self.s_mod_d),
            "sha2_k": None if self.sha2_k is None else list(self.sha2_k),
            "certificate": self.certificate,
            "designation": self.designation,
            "profile_note": self.profile_note,
        }
        if self.is_exact:
            out["sha"] = list(self.sha)
        else:
            out["sha"] = {"lower": list(self.s_mod_d), "upper_order": self.upper_order}
        out["tamagawa"] = (
            None if self.tamagawa is None else {"num": self.tamagawa.numerator, "den": self.tamagawa.denominator}
        )
        if self.ker_iota2 is not None:
            out["ker_iota2"] = list(self.ker_iota2)
        if self.f_ab_index is not None:
            out["f_ab_index"] = self.f_ab_index
        if self.notes:
            out["notes"] = list(self.notes)
        return out
