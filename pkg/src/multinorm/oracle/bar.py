"""Group cohomology from the inhomogeneous bar complex.

Cochains of degree ``q`` with values in a lattice of rank ``r`` are
vectors indexed by ``(tuple of q group elements, coordinate)``.  By
default the normalized subcomplex is used (cochains vanish on tuples
containing the identity), which computes the same cohomology with far
fewer tuples.

For ``q >= 1`` every group here has finite ``H^q``, so the cocycles are
exactly the saturation of the coboundaries and
``H^q = torsion of coker(d^{q-1})``.  Only one differential is needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..abgroup import AbHom, AbSubgroup, FinAbGroup, diagonal, snf, subgroup_intersect
from ..groups import FiniteGroup

__all__ = [
    "Caps",
    "CapExceeded",
    "bar_differential",
    "torsion_coker",
    "TorsionCoker",
    "Cohomology",
    "cohomology",
    "restriction",
    "sha_kernel",
]

_INT64_SAFE = 2**62


class CapExceeded(RuntimeError):
    """A computation would exceed the configured size limits."""

    def __init__(self, message: str, required: int):
        super().__init__(message)
        self.required = required


@dataclass(frozen=True)
class Caps:
    """Size limits: group order overall and in degree 3, lattice rank."""

    max_order: int = 16
    max_order_q3: int = 8
    max_rank: int = 64

    @classmethod
    def with_order(cls, n: int) -> "Caps":
        return cls(max_order=n, max_order_q3=n)

    def check(self, order: int, rank: int, q: int) -> None:
        limit = self.max_order_q3 if q >= 3 else self.max_order
        if order > limit:
            raise CapExceeded(
                f"group order {order} exceeds the cap {limit} for degree {q}; rerun with --cap {order}",
                order,
            )
        if rank > self.max_rank:
            raise CapExceeded(f"lattice rank {rank} exceeds the cap {self.max_rank}", rank)


def _tuples(elements: Sequence[int], normalized: bool) -> list[int]:
    return [g for g in elements if g != 0] if normalized else list(elements)


def bar_differential(
    G: FiniteGroup,
    action: Sequence[np.ndarray],
    q: int,
    elements: Sequence[int] | None = None,
    *,
    normalized: bool = True,
) -> np.ndarray:
    """Matrix of ``d^q: C^q -> C^{q+1}`` for the subgroup ``elements`` of ``G``.

    ``action[g]`` is the matrix of ``g`` on the coefficient lattice; the
    coefficient coordinate varies fastest in the cochain index.
    """
    if q < 0:
        raise ValueError("degree must be nonnegative")
    elements = sorted(G.elements if elements is None else elements)
    base = _tuples(elements, normalized)
    pos = {g: i for i, g in enumerate(base)}
    N = len(base)
    r = action[0].shape[0]
    out = np.zeros((r * N ** (q + 1), r * N**q), dtype=np.int64)
    if r == 0:
        return out
    eye = np.eye(r, dtype=np.int64)
    weights = [N ** (q - 1 - k) for k in range(q)]

    def col(idx: Sequence[int]) -> int:
        return sum(i * w for i, w in zip(idx, weights))

    for row, T in enumerate(itertools.product(range(N), repeat=q + 1)):
        g = [base[t] for t in T]
        rb = row * r
        c = col(T[1:]) * r
        out[rb : rb + r, c : c + r] += action[g[0]]
        for i in range(1, q + 1):
            prod = G.mul(g[i - 1], g[i])
            if normalized and prod == 0:
                continue
            c = col(T[: i - 1] + (pos[prod],) + T[i + 1 :]) * r
            out[rb : rb + r, c : c + r] += eye if i % 2 == 0 else -eye
        c = col(T[:q]) * r
        out[rb : rb + r, c : c + r] += eye if (q + 1) % 2 == 0 else -eye
    return out


def _echelon(A: np.ndarray, k: int) -> tuple[np.ndarray, int]:
    """Row-reduce in place, choosing pivots only among the first ``k`` columns.

    Switches to Python integers if an int64 step could overflow.
    """
    m = A.shape[0]
    prow = 0
    for c in range(k):
        if prow == m:
            break
        found = False
        while True:
            nz = np.flatnonzero(A[prow:, c]) + prow
            if nz.size == 0:
                break
            found = True
            i = nz[np.argmin(np.abs(A[nz, c]))] if nz.size > 1 else nz[0]
            if i != prow:
                A[[prow, i]] = A[[i, prow]]
            if nz.size == 1:
                break
            others = np.flatnonzero(A[prow + 1 :, c]) + prow + 1
            q = A[others, c] // A[prow, c]
            if A.dtype != object:
                bound = int(np.abs(q).max()) * int(np.abs(A[prow]).max()) + int(np.abs(A[others]).max())
                if bound >= _INT64_SAFE:
                    A = A.astype(object)
                    q = q.astype(object)
            A[others] -= np.outer(q, A[prow])
        if found:
            prow += 1
    return A, prow


@dataclass(frozen=True)
class TorsionCoker:
    """Torsion of ``coker(B)`` with coordinates and representatives.

    ``reps[:, j]`` lies in the saturation of ``im(B)`` and generates the
    ``j``-th cyclic factor; ``coords`` (if requested) gives the classes of
    the extra columns in these coordinates.
    """

    group: FinAbGroup
    reps: np.ndarray
    coords: np.ndarray | None
    rank: int


def _to_int64(X: np.ndarray) -> np.ndarray:
    if X.dtype != object:
        return X.astype(np.int64)
    if X.size and max(abs(int(x)) for x in X.flat) >= 2**40:
        return X
    return X.astype(np.int64)


def torsion_coker(B: np.ndarray, X: np.ndarray | None = None) -> TorsionCoker:
    m, k = B.shape
    t = 0 if X is None else X.shape[1]
    A = np.zeros((m, k + t), dtype=np.int64)
    A[:, :k] = B
    if X is not None:
        X = _to_int64(X)
        if X.dtype == object:
            A = A.astype(object)
        A[:, k:] = X
    A, rho = _echelon(A, k)
    if t and np.any(A[rho:, k:] != 0):
        raise AssertionError("cochains passed for classification are not cocycles")
    E = A[:rho, :k]
    U, D, V = snf(E, want_u=t > 0)
    diag = diagonal(D)
    keep = [j for j, d in enumerate(diag) if d > 1]
    factors = tuple(diag[j] for j in keep)
    Bo = B.astype(object)
    reps = np.empty((m, len(keep)), dtype=object)
    for col, j in enumerate(keep):
        full = Bo.dot(V[:, j])
        if any(x % diag[j] for x in full):
            raise AssertionError("representative is not divisible by its order")
        reps[:, col] = [x // diag[j] for x in full]
    coords = None
    if t:
        Xt = U.dot(A[:rho, k:].astype(object))
        coords = np.empty((len(keep), t), dtype=object)
        for col, j in enumerate(keep):
            coords[col, :] = [x % diag[j] for x in Xt[j]]
    return TorsionCoker(FinAbGroup(factors), reps, coords, rho)


@dataclass(frozen=True)
class Cohomology:
    """``H^q`` of a subgroup with coefficients in a lattice.

    For ``q >= 1`` the group is finite; for ``q = 0`` it is free of rank
    ``free_rank`` and ``group`` is trivial.
    """

    q: int
    group: FinAbGroup
    free_rank: int
    reps: np.ndarray
    elements: tuple[int, ...]
    normalized: bool
    boundary: np.ndarray | None = field(default=None, repr=False)

    def classes(self, cochains: np.ndarray) -> np.ndarray:
        """Coordinates in ``group`` of the cocycles in the columns of ``cochains``."""
        return torsion_coker(self.boundary, cochains).coords


def cohomology(
    G: FiniteGroup,
    action: Sequence[np.ndarray],
    q: int,
    elements: Sequence[int] | None = None,
    *,
    normalized: bool = True,
    caps: Caps | None = None,
) -> Cohomology:
    elements = tuple(sorted(G.elements if elements is None else elements))
    r = action[0].shape[0]
    (caps or Caps()).check(len(elements), r, q)
    if q == 0:
        d0 = bar_differential(G, action, 0, elements, normalized=normalized)
        rank = torsion_coker(d0).rank if d0.size else 0
        return Cohomology(0, FinAbGroup(), r - rank, np.zeros((r, 0), dtype=object), elements, normalized)
    B = bar_differential(G, action, q - 1, elements, normalized=normalized)
    tc = torsion_coker(B)
    return Cohomology(q, tc.group, 0, tc.reps, elements, normalized, B)


def _restriction_rows(big: Sequence[int], small: Sequence[int], q: int, r: int, normalized: bool) -> np.ndarray:
    big_base = _tuples(big, normalized)
    small_base = _tuples(small, normalized)
    pos = {g: i for i, g in enumerate(big_base)}
    Nb = len(big_base)
    rows = []
    for T in itertools.product(small_base, repeat=q):
        idx = 0
        for g in T:
            idx = idx * Nb + pos[g]
        rows.extend(range(idx * r, idx * r + r))
    return np.array(rows, dtype=np.int64)


def restriction(
    G: FiniteGroup,
    action: Sequence[np.ndarray],
    H: Cohomology,
    subgroup: Sequence[int],
    *,
    caps: Caps | None = None,
) -> tuple[Cohomology, AbHom]:
    """``H^q`` of ``subgroup`` and the restriction map into it from ``H``."""
    sub = tuple(sorted(subgroup))
    if not set(sub) <= set(H.elements) or not G.is_subgroup(sub):
        raise ValueError("restriction target is not a subgroup")
    HD = cohomology(G, action, H.q, sub, normalized=H.normalized, caps=caps)
    r = action[0].shape[0]
    if H.group.is_trivial or HD.group.is_trivial:
        zero = [[0] * H.group.rank for _ in range(HD.group.rank)]
        return HD, AbHom(H.group, HD.group, zero)
    rows = _restriction_rows(H.elements, sub, H.q, r, H.normalized)
    X = H.reps[rows, :]
    coords = HD.classes(X)
    return HD, AbHom(H.group, HD.group, coords.tolist())


def sha_kernel(
    G: FiniteGroup,
    action: Sequence[np.ndarray],
    q: int,
    subgroups: Sequence[Sequence[int]],
    *,
    normalized: bool = True,
    caps: Caps | None = None,
) -> tuple[Cohomology, AbSubgroup]:
    """Classes of ``H^q(G)`` restricting to zero on every listed subgroup."""
    H = cohomology(G, action, q, normalized=normalized, caps=caps)
    K = H.group.whole()
    for S in subgroups:
        if K.is_trivial:
            break
        if len(S) == G.order:
            K = H.group.trivial()
            break
        _, res = restriction(G, action, H, S, caps=caps)
        K = subgroup_intersect(K, res.kernel())
    return H, K
