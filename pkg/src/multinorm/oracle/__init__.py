"""Independent brute-force cohomology used to check the engines."""

from .bar import CapExceeded, Caps, bar_differential, cohomology, restriction, sha_kernel, torsion_coker
from .checks import (
    oracle_sha,
    oracle_sha1_shat,
    oracle_sha2_tk,
    resolve_with_oracle,
    sha_oracle,
    verify_inflation_ppart,
    verify_thm11,
)
from .lattices import GLattice, build_Shat, build_TK, build_TL

__all__ = [
    "CapExceeded",
    "Caps",
    "GLattice",
    "bar_differential",
    "build_Shat",
    "build_TK",
    "build_TL",
    "cohomology",
    "oracle_sha",
    "oracle_sha1_shat",
    "oracle_sha2_tk",
    "resolve_with_oracle",
    "restriction",
    "sha_kernel",
    "sha_oracle",
    "torsion_coker",
    "verify_inflation_ppart",
    "verify_thm11",
]
