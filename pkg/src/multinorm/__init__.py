"""Tate-Shafarevich groups of multinorm-one tori from abstract Galois data."""

from .abgroup import AbHom, AbSubgroup, FinAbGroup, snf
from .cyclic import g_group, sha_cyclic
from .engine import assemble, assemble_designated, p_primary_split
from .groups import FiniteGroup
from .report import Certificate, ShaReport
from .scenario import (
    CyclicScenario,
    GaloisScenario,
    LocalProfile,
    PlaceDatum,
    ScenarioError,
    parse_cyclic,
    parse_scenario,
)

__all__ = [
    "AbHom",
    "AbSubgroup",
    "Certificate",
    "CyclicScenario",
    "FinAbGroup",
    "FiniteGroup",
    "GaloisScenario",
    "LocalProfile",
    "PlaceDatum",
    "ScenarioError",
    "ShaReport",
    "assemble",
    "assemble_designated",
    "g_group",
    "p_primary_split",
    "parse_cyclic",
    "parse_scenario",
    "sha_cyclic",
    "snf",
]
