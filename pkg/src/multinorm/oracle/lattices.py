"""Integral representations (G-lattices) and the character lattices of tori.

All lattices are built from permutation modules ``Z[G/H]`` by taking
cokernels of saturated equivariant maps, keeping the projection and a
section so that maps between the quotients can be written down.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..abgroup import diagonal, snf, unimodular_inverse
from ..groups import FiniteGroup
from .bar import CapExceeded, Caps

__all__ = [
    "GLattice",
    "Quotient",
    "trivial_lattice",
    "regular_lattice",
    "permutation_lattice",
    "product_gset_lattice",
    "direct_sum",
    "cokernel_lattice",
    "TorusLattices",
    "build_TL",
    "build_TK",
    "build_Shat",
]


class GLattice:
    """A lattice ``Z^r`` with ``G`` acting through integer matrices."""

    def __init__(self, group: FiniteGroup, action: Sequence[np.ndarray], *, check: bool = True):
        self.group = group
        self.action = tuple(np.asarray(a, dtype=np.int64) for a in action)
        self.rank = self.action[0].shape[0] if self.action else 0
        if check:
            self._validate()

    def _validate(self) -> None:
        G, r = self.group, self.rank
        if len(self.action) != G.order:
            raise ValueError(f"need one matrix per element, got {len(self.action)} for order {G.order}")
        if not np.array_equal(self.action[0], np.eye(r, dtype=np.int64)):
            raise ValueError("the identity must act trivially")
        for g in G.elements:
            for h in G.elements:
                if not np.array_equal(self.action[g] @ self.action[h], self.action[G.mul(g, h)]):
                    raise ValueError(f"action is not a homomorphism at ({g}, {h})")

    def __repr__(self) -> str:
        return f"GLattice(order={self.group.order}, rank={self.rank})"

    def is_equivariant(self, other: "GLattice", phi: np.ndarray) -> bool:
        """Whether ``phi: self -> other`` commutes with the actions."""
        return all(
            np.array_equal(phi @ self.action[g], other.action[g] @ phi) for g in self.group.elements
        )


def trivial_lattice(G: FiniteGroup, rank: int = 1) -> GLattice:
    return GLattice(G, [np.eye(rank, dtype=np.int64)] * G.order)


def _perm_action(G: FiniteGroup, images) -> list[np.ndarray]:
    out = []
    for g in G.elements:
        img = images(g)
        P = np.zeros((len(img), len(img)), dtype=np.int64)
        P[img, np.arange(len(img))] = 1
        out.append(P)
    return out


def regular_lattice(G: FiniteGroup) -> GLattice:
    return permutation_lattice(G, frozenset({0}))[0]


def permutation_lattice(G: FiniteGroup, H: frozenset[int]) -> tuple[GLattice, list[frozenset[int]]]:
    """``Z[G/H]`` on the left cosets of ``H``; basis in ``G.left_cosets`` order."""
    cosets = G.left_cosets(H)
    where = {x: i for i, c in enumerate(cosets) for x in c}
    reps = [min(c) for c in cosets]
    return GLattice(G, _perm_action(G, lambda g: [where[G.mul(g, x)] for x in reps])), cosets


def product_gset_lattice(G: FiniteGroup, left: Sequence[frozenset[int]], right: frozenset[int]):
    """``Z[X x G/right]`` where ``X`` is the disjoint union of ``G/H`` for ``H`` in ``left``.

    Returns the lattice, the list of points of ``X`` (pairs ``(block,
    coset)``) and the cosets of ``right``; the basis index of ``(x, y)`` is
    ``x * len(right cosets) + y``.
    """
    xs, where_x = [], []
    for b, H in enumerate(left):
        cos = G.left_cosets(H)
        where_x.append({x: i + len(xs) for i, c in enumerate(cos) for x in c})
        xs.extend((b, min(c)) for c in cos)
    ys = G.left_cosets(right)
    where_y = {x: i for i, c in enumerate(ys) for x in c}
    ny = len(ys)

    def images(g):
        out = []
        for b, rx in xs:
            gx = where_x[b][G.mul(g, rx)]
            for c in ys:
                out.append(gx * ny + where_y[G.mul(g, min(c))])
        return out

    return GLattice(G, _perm_action(G, images)), xs, ys


def _x_images(G: FiniteGroup, left: Sequence[frozenset[int]]):
    """Action of ``G`` on ``X`` = disjoint union of the ``G/H``."""
    xs, where_x = [], []
    for b, H in enumerate(left):
        cos = G.left_cosets(H)
        where_x.append({x: i + len(xs) for i, c in enumerate(cos) for x in c})
        xs.extend((b, min(c)) for c in cos)
    return xs, lambda g: [where_x[b][G.mul(g, rx)] for b, rx in xs]


def direct_sum(lattices: Sequence[GLattice]) -> GLattice:
    G = lattices[0].group
    n = sum(L.rank for L in lattices)
    action = []
    for g in G.elements:
        A = np.zeros((n, n), dtype=np.int64)
        k = 0
        for L in lattices:
            A[k : k + L.rank, k : k + L.rank] = L.action[g]
            k += L.rank
        action.append(A)
    return GLattice(G, action, check=False)


@dataclass
class Quotient:
    """``coker(phi)`` with ``proj: ambient -> quotient`` and a section back."""

    lattice: GLattice
    proj: np.ndarray
    section: np.ndarray


def cokernel_lattice(source: GLattice, target: GLattice, phi: np.ndarray, *, caps: Caps | None = None) -> Quotient:
    """The quotient lattice ``target / phi(source)``.

    ``phi`` must be equivariant with saturated image, so that the quotient
    is again a lattice.
    """
    phi = np.asarray(phi, dtype=np.int64)
    if not source.is_equivariant(target, phi):
        raise ValueError("map is not equivariant")
    U, D, _ = snf(phi, want_v=False)
    diag = diagonal(D)
    rank = sum(1 for d in diag if d)
    if any(d not in (0, 1) for d in diag):
        raise ValueError("image is not saturated; the cokernel has torsion")
    r = target.rank - rank
    if caps is not None and r > caps.max_rank:
        raise CapExceeded(f"lattice rank {r} exceeds the cap {caps.max_rank}", r)
    Uinv = unimodular_inverse(U) if target.rank else U
    proj = np.array(U[rank:, :].tolist() or np.zeros((0, target.rank)), dtype=np.int64).reshape(r, target.rank)
    section = np.array(Uinv[:, rank:].tolist(), dtype=np.int64).reshape(target.rank, r)
    action = [proj @ target.action[g] @ section for g in target.group.elements]
    return Quotient(GLattice(target.group, action), proj, section)


@dataclass
class TorusLattices:
    """Character lattices around one split ``L = K x K'``."""

    TK: Quotient
    induced: list[Quotient]
    Shat: Quotient
    K_map: np.ndarray  # T_K -> sum of the induced lattices


def _norm_quotient(G: FiniteGroup, subgroups: Sequence[frozenset[int]], caps: Caps | None) -> Quotient:
    xs, images = _x_images(G, subgroups)
    P = GLattice(G, _perm_action(G, images))
    ones = np.ones((len(xs), 1), dtype=np.int64)
    return cokernel_lattice(trivial_lattice(G), P, ones, caps=caps)


def build_TL(G: FiniteGroup, factors: Sequence[frozenset[int]], *, caps: Caps | None = None) -> GLattice:
    """Character lattice of the multinorm-one torus: ``sum Z[G/H_i]`` modulo the diagonal ``Z``."""
    return _norm_quotient(G, factors, caps).lattice


def build_TK(G: FiniteGroup, k_factors: Sequence[frozenset[int]], *, caps: Caps | None = None) -> GLattice:
    return _norm_quotient(G, k_factors, caps).lattice


def build_Shat(
    G: FiniteGroup,
    k_factors: Sequence[frozenset[int]],
    kprime: Sequence[frozenset[int]],
    *,
    caps: Caps | None = None,
) -> TorusLattices:
    """The lattice whose first Tate-Shafarevich group is ``S/D``-adjacent.

    For each ``K'`` factor ``H_i``, ``Z[X x G/H_i]`` (``X`` the K-side
    points) is divided by the image of ``Z[G/H_i]`` (sum over ``X``); the
    K-side character lattice maps diagonally into the sum of these, and the
    resulting cokernel is returned together with the intermediate data.
    """
    TK = _norm_quotient(G, k_factors, caps)
    xs, _ = _x_images(G, k_factors)
    nx = len(xs)
    induced, blocks = [], []
    for H in kprime:
        big, _, ys = product_gset_lattice(G, k_factors, H)
        ny = len(ys)
        small, _ = permutation_lattice(G, H)
        emb = np.zeros((nx * ny, ny), dtype=np.int64)
        for x in range(nx):
            for y in range(ny):
                emb[x * ny + y, y] = 1
        Q = cokernel_lattice(small, big, emb, caps=caps)
        # Z[X] -> Z[X x G/H]: x -> sum_y (x, y)
        spread = np.zeros((nx * ny, nx), dtype=np.int64)
        for x in range(nx):
            spread[x * ny : (x + 1) * ny, x] = 1
        blocks.append(Q.proj @ spread @ TK.section)
        induced.append(Q)
    total = direct_sum([Q.lattice for Q in induced]) if induced else GLattice(G, [np.zeros((0, 0), dtype=np.int64)] * G.order, check=False)
    K_map = np.vstack(blocks) if blocks else np.zeros((0, TK.lattice.rank), dtype=np.int64)
    if caps is not None and total.rank - TK.lattice.rank > caps.max_rank:
        need = total.rank - TK.lattice.rank
        raise CapExceeded(f"lattice rank {need} exceeds the cap {caps.max_rank}", need)
    Shat = cokernel_lattice(TK.lattice, total, K_map, caps=caps)
    return TorusLattices(TK, induced, Shat, K_map)
