"""Exact integer linear algebra over finite abelian groups.

Matrices are numpy arrays of dtype ``object`` holding Python integers, so
every entry is arbitrary precision.  Groups are kept in invariant-factor
form ``Z/d1 + ... + Z/dr`` with ``d1 | d2 | ... | dr`` and every ``di >= 2``.

>>> A = FinAbGroup((2, 4))
>>> A.order
8
>>> quotient(A, A.subgroup([(1, 0)]))[0]
FinAbGroup((4,))
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "as_int_matrix",
    "unimodular_inverse",
    "diagonal",
    "snf",
    "hnf_rows",
    "integer_kernel",
    "Cokernel",
    "cokernel",
    "FinAbGroup",
    "AbHom",
    "AbSubgroup",
    "kernel",
    "image",
    "quotient",
    "subquotient",
    "dual_group",
    "Presentation",
    "present",
    "direct_sum",
    "Wedge",
    "wedge_square",
    "subgroup_join",
    "subgroup_intersect",
    "cyclic_subgroups",
    "all_subgroups",
]


def as_int_matrix(M, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce ``M`` into a 2-d object array of Python ints.

    ``rows``/``cols`` pin the shape of empty inputs, which otherwise lose it.
    """
    if isinstance(M, np.ndarray):
        if M.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {M.shape}")
        out = np.empty(M.shape, dtype=object)
        for idx, x in np.ndenumerate(M):
            out[idx] = int(x)
        return out
    data = [[int(x) for x in row] for row in M]
    if not data:
        return np.empty((rows or 0, cols or 0), dtype=object)
    width = len(data[0])
    if any(len(row) != width for row in data):
        raise ValueError("ragged matrix")
    out = np.empty((len(data), width), dtype=object)
    for i, row in enumerate(data):
        out[i, :] = row
    return out


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _to_array(rows: list[list[int]], nrows: int, ncols: int) -> np.ndarray:
    out = np.empty((nrows, ncols), dtype=object)
    for i, row in enumerate(rows):
        out[i, :] = row
    return out


def snf(M, *, want_u: bool = True, want_v: bool = True):
    """Smith normal form: returns ``(U, D, V)`` with ``U @ M @ V == D``.

    ``U`` and ``V`` are unimodular and the diagonal of ``D`` is nonnegative
    with each entry dividing the next.  Either transform can be skipped
    (returned as ``None``) when the caller does not need it.

    >>> U, D, V = snf([[2, 4], [6, 8]])
    >>> [D[0, 0], D[1, 1]]
    [2, 4]
    """
    M = as_int_matrix(M)
    m, n = M.shape
    A = M.tolist()
    U = _identity(m) if want_u else None
    V = _identity(n) if want_v else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row[dst] -= q * row[src]
        a_src, a_dst = A[src], A[dst]
        for k in range(n):
            if a_src[k]:
                a_dst[k] -= q * a_src[k]
        if U is not None:
            u_src, u_dst = U[src], U[dst]
            for k in range(m):
                if u_src[k]:
                    u_dst[k] -= q * u_src[k]

    def add_col(dst, src, q):
        # col[dst] -= q * col[src]
        for row in A:
            if row[src]:
                row[dst] -= q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            pivot = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // pivot)
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // pivot)
                    if A[t][j]:
                        clean = False
            if not clean:
                # a smaller remainder appeared in the pivot row or column
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cands)
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(A[i][j] % pivot for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]

    D = _to_array(A, m, n)
    return (
        _to_array(U, m, m) if U is not None else None,
        D,
        _to_array(V, n, n) if V is not None else None,
    )


def diagonal(D: np.ndarray) -> list[int]:
    return [int(D[i, i]) for i in range(min(D.shape))]


def hnf_rows(vectors: Iterable[Sequence[int]], width: int) -> list[list[int]]:
    """Row Hermite normal form of the lattice spanned by ``vectors``.

    Zero rows are dropped; pivots are positive and entries above a pivot are
    reduced into ``[0, pivot)``.  The result depends only on the lattice.
    """
    rows = [list(map(int, v)) for v in vectors if any(v)]
    out: list[list[int]] = []
    col = 0
    while rows and col < width:
        live = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        if not live:
            col += 1
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        for k, r in enumerate(out):
            q = r[col] // piv[col]
            if q:
                out[k] = [a - q * b for a, b in zip(r, piv)]
        out.append(piv)
        rows = rest
        col += 1
    return out


def integer_kernel(M) -> list[list[int]]:
    """A basis (as a list of vectors) of ``{x in Z^n : M x = 0}``."""
    M = as_int_matrix(M)
    m, n = M.shape
    _, D, V = snf(M, want_u=False)
    rank = sum(1 for d in diagonal(D) if d)
    return [[int(V[i, j]) for i in range(n)] for j in range(rank, n)]


@dataclass(frozen=True)
class Cokernel:
    """``Z^rows / colspan(M)`` split as a finite group plus a free part.

    ``torsion_proj`` (one row per invariant factor) and ``free_proj`` (one
    row per free coordinate) map ambient vectors to group coordinates.
    """

    group: "FinAbGroup"
    free_rank: int
    torsion_proj: tuple[tuple[int, ...], ...]
    free_proj: tuple[tuple[int, ...], ...]

    def __call__(self, v: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        tors = tuple(
            sum(a * b for a, b in zip(row, v)) % d
            for row, d in zip(self.torsion_proj, self.group.invariant_factors)
        )
        free = tuple(sum(a * b for a, b in zip(row, v)) for row in self.free_proj)
        return tors, free


def cokernel(M, rows: int | None = None) -> Cokernel:
    """``Z^rows`` modulo the column span of ``M``.

    >>> cokernel([[1, 0], [0, 6]]).group
    FinAbGroup((6,))
    """
    M = as_int_matrix(M, rows=rows, cols=0)
    m = M.shape[0]
    U, D, _ = snf(M, want_v=False)
    diag = diagonal(D) + [0] * (m - min(D.shape))
    factors, tors_rows, free_rows = [], [], []
    for i, d in enumerate(diag):
        row = tuple(int(x) for x in U[i])
        if d == 0:
            free_rows.append(row)
        elif d > 1:
            factors.append(d)
            tors_rows.append(row)
    return Cokernel(FinAbGroup(tuple(factors)), len(free_rows), tuple(tors_rows), tuple(free_rows))


@dataclass(frozen=True)
class FinAbGroup:
    """A finite abelian group ``Z/d1 + ... + Z/dr`` in invariant-factor form."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        factors = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise ValueError(f"invariant factors {list(factors)} break the divisibility chain")
        if any(d < 2 for d in factors):
            raise ValueError(f"invariant factors must be >= 2, got {list(factors)}")

    def __repr__(self) -> str:
        return f"FinAbGroup({self.invariant_factors!r})"

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.invariant_factors)

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "FinAbGroup":
        """The group ``Z/o1 + Z/o2 + ...`` for arbitrary positive ``oi``."""
        return present(orders).group

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.rank:
            raise ValueError(f"element {list(v)} has {len(v)} coordinates, expected {self.rank}")
        return tuple(int(x) % d for x, d in zip(v, self.invariant_factors))

    def add(self, a, b) -> tuple[int, ...]:
        return self.reduce([x + y for x, y in zip(a, b)])

    def scale(self, k: int, a) -> tuple[int, ...]:
        return self.reduce([k * x for x in a])

    def elements(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def generator(self, i: int) -> tuple[int, ...]:
        return tuple(int(i == j) for j in range(self.rank))

    def element_order(self, a) -> int:
        return reduce(math.lcm, (d // math.gcd(d, x) for x, d in zip(a, self.invariant_factors)), 1)

    def elementary_divisors(self) -> list[int]:
        out = []
        for d in self.invariant_factors:
            n, p = d, 2
            while n > 1:
                if n % p == 0:
                    q = 1
                    while n % p == 0:
                        n //= p
                        q *= p
                    out.append(q)
                p += 1
        return sorted(out)

    def primary_part(self, p: int) -> "FinAbGroup":
        return FinAbGroup.from_orders(q for q in self.elementary_divisors() if q % p == 0)

    def subgroup(self, gens: Iterable[Sequence[int]]) -> "AbSubgroup":
        return AbSubgroup(self, tuple(self.reduce(g) for g in gens))

    def whole(self) -> "AbSubgroup":
        return self.subgroup(self.generator(i) for i in range(self.rank))

    def trivial(self) -> "AbSubgroup":
        return self.subgroup(())

    def identity(self) -> "AbHom":
        return AbHom(self, self, _identity(self.rank))


def _matrix_tuple(M, rows: int, cols: int) -> tuple[tuple[int, ...], ...]:
    if rows == 0 or cols == 0:
        return tuple(() for _ in range(rows))
    M = as_int_matrix(M, rows=rows, cols=cols)
    if M.shape != (rows, cols):
        raise ValueError(f"matrix shape {M.shape} does not match ({rows}, {cols})")
    return tuple(tuple(int(x) for x in row) for row in M.tolist()) if rows else ()


class AbHom:
    """Homomorphism given by the images of the source generators.

    ``matrix`` has one row per target coordinate and one column per source
    generator.
    """

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FinAbGroup, target: FinAbGroup, matrix):
        self.source = source
        self.target = target
        rows = _matrix_tuple(matrix, target.rank, source.rank)
        rows = tuple(
            tuple(x % d for x in row) for row, d in zip(rows, target.invariant_factors)
        )
        for j, dj in enumerate(source.invariant_factors):
            for i, bi in enumerate(target.invariant_factors):
                if (dj * rows[i][j]) % bi:
                    raise ValueError(
                        f"not well defined: generator {j} of order {dj} maps to an element "
                        f"whose coordinate {i} has order not dividing {dj}"
                    )
        self.matrix = rows

    def __repr__(self) -> str:
        return f"AbHom({self.source} -> {self.target}, {[list(r) for r in self.matrix]})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AbHom)
            and self.source == other.source
            and self.target == other.target
            and self.matrix == other.matrix
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.matrix))

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        v = self.source.reduce(v)
        return self.target.reduce([sum(a * b for a, b in zip(row, v)) for row in self.matrix])

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.matrix)

    def compose(self, inner: "AbHom") -> "AbHom":
        """``self`` after ``inner``."""
        if inner.target != self.source:
            raise ValueError("composition of incompatible homomorphisms")
        cols = [self(inner.column(j)) for j in range(inner.source.rank)]
        return AbHom(inner.source, self.target, _columns_to_matrix(cols, self.target.rank))

    def dual(self) -> "AbHom":
        """The transpose map between character groups.

        Characters of ``Z/d`` are identified with ``Z/d`` via ``x -> x/d``.
        """
        d = self.source.invariant_factors
        b = self.target.invariant_factors
        mat = [
            [d[j] * self.matrix[k][j] // b[k] for k in range(len(b))] for j in range(len(d))
        ]
        return AbHom(self.target, self.source, _matrix_tuple(mat, len(d), len(b)))

    def kernel(self) -> "AbSubgroup":
        return kernel(self)

    def image(self) -> "AbSubgroup":
        return image(self)

    def is_injective(self) -> bool:
        return kernel(self).order == 1

    def is_surjective(self) -> bool:
        return image(self).order == self.target.order


def _columns_to_matrix(cols: Sequence[Sequence[int]], rows: int) -> list[list[int]] | np.ndarray:
    if not cols:
        return np.empty((rows, 0), dtype=object)
    return [[c[i] for c in cols] for i in range(rows)]


def _solve_upper(basis: list[list[int]], v: Sequence[int]) -> list[int] | None:
    """Integer ``y`` with ``y @ basis == v`` for a square upper-triangular HNF."""
    x = list(v)
    y = []
    for i, row in enumerate(basis):
        if x[i] % row[i]:
            return None
        q = x[i] // row[i]
        y.append(q)
        if q:
            x = [a - q * b for a, b in zip(x, row)]
    return y if not any(x) else None


class AbSubgroup:
    """Subgroup of a ``FinAbGroup`` with a canonical basis.

    The basis is the row Hermite form of the preimage lattice in ``Z^r``
    (generators together with the ambient relations), so two subgroups are
    equal exactly when their bases are.
    """

    def __init__(self, ambient: FinAbGroup, generators: Iterable[Sequence[int]] = ()):
        self.ambient = ambient
        self.generators = tuple(ambient.reduce(g) for g in generators)
        r = ambient.rank
        relations = [[d * int(i == j) for j in range(r)] for i, d in enumerate(ambient.invariant_factors)]
        self.basis = tuple(tuple(row) for row in hnf_rows(list(self.generators) + relations, r))

    def __repr__(self) -> str:
        gens = [list(g) for g in self.minimal_generators()]
        return f"AbSubgroup({self.ambient}, {gens})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AbSubgroup)
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.ambient, self.basis))

    def __contains__(self, v) -> bool:
        return _solve_upper([list(r) for r in self.basis], self.ambient.reduce(v)) is not None

    def __le__(self, other: "AbSubgroup") -> bool:
        _same_ambient(self, other)
        return all(row in other for row in self.basis)

    @property
    def index(self) -> int:
        return math.prod(self.basis[i][i] for i in range(self.ambient.rank))

    @property
    def order(self) -> int:
        return self.ambient.order // self.index

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @cached_property
    def _structure(self):
        # S = L / (relations); coordinates of L are taken w.r.t. the HNF rows.
        basis = [list(r) for r in self.basis]
        r = self.ambient.rank
        rel = []
        for i, d in enumerate(self.ambient.invariant_factors):
            y = _solve_upper(basis, [d * int(i == j) for j in range(r)])
            rel.append(y)
        # columns of R^T are the relation vectors
        RT = as_int_matrix([[rel[k][j] for k in range(r)] for j in range(r)], rows=r, cols=r)
        U, D, _ = snf(RT, want_v=False)
        diag = diagonal(D)
        keep = [i for i, d in enumerate(diag) if d > 1]
        Uinv = unimodular_inverse(U)
        gens = []
        for i in keep:
            coeffs = [int(Uinv[k, i]) for k in range(r)]
            vec = [sum(c * basis[k][j] for k, c in enumerate(coeffs)) for j in range(r)]
            gens.append(self.ambient.reduce(vec))
        group = FinAbGroup(tuple(diag[i] for i in keep))
        coord_rows = [tuple(int(x) for x in U[i]) for i in keep]
        return group, tuple(gens), coord_rows

    @property
    def group(self) -> FinAbGroup:
        """The subgroup as an abstract group in invariant-factor form."""
        return self._structure[0]

    @property
    def inclusion(self) -> AbHom:
        group, gens, _ = self._structure
        return AbHom(group, self.ambient, _columns_to_matrix(gens, self.ambient.rank))

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of an ambient element of the subgroup in ``self.group``."""
        group, _, rows = self._structure
        y = _solve_upper([list(r) for r in self.basis], self.ambient.reduce(v))
        if y is None:
            raise ValueError(f"{list(v)} is not in the subgroup")
        return group.reduce([sum(a * b for a, b in zip(row, y)) for row in rows])

    def minimal_generators(self) -> tuple[tuple[int, ...], ...]:
        return self._structure[1]

    def elements(self) -> list[tuple[int, ...]]:
        gens = self.minimal_generators()
        orders = self.group.invariant_factors
        out = set()
        for coeffs in itertools.product(*(range(d) for d in orders)):
            v = [0] * self.ambient.rank
            for c, g in zip(coeffs, gens):
                v = [a + c * b for a, b in zip(v, g)]
            out.add(self.ambient.reduce(v))
        return sorted(out)

    def is_cyclic(self) -> bool:
        return self.group.rank <= 1


def unimodular_inverse(U: np.ndarray) -> np.ndarray:
    n = U.shape[0]
    P, D, V = snf(U)
    # P U V = I for unimodular U, hence U^{-1} = V P
    if diagonal(D) != [1] * n:
        raise ValueError("matrix is not unimodular")
    return V.dot(P)


def _same_ambient(S: AbSubgroup, T: AbSubgroup) -> None:
    if S.ambient != T.ambient:
        raise ValueError(f"ambient mismatch: {S.ambient} vs {T.ambient}")


def kernel(f: AbHom) -> AbSubgroup:
    a, b = f.source.rank, f.target.rank
    if b == 0:
        return f.source.whole()
    system = [
        list(f.matrix[i]) + [d * int(i == j) for j, d in enumerate(f.target.invariant_factors)]
        for i in range(b)
    ]
    sols = integer_kernel(system)
    return f.source.subgroup(v[:a] for v in sols)


def image(f: AbHom) -> AbSubgroup:
    return f.target.subgroup(f.column(j) for j in range(f.source.rank))


def quotient(A: FinAbGroup, S: AbSubgroup) -> tuple[FinAbGroup, AbHom]:
    """``A/S`` and the projection from ``A``.

    >>> quotient(FinAbGroup((2, 2)), FinAbGroup((2, 2)).subgroup([(1, 1)]))[0]
    FinAbGroup((2,))
    """
    if S.ambient != A:
        raise ValueError(f"subgroup of {S.ambient} is not contained in {A}")
    r = A.rank
    relations = [[S.basis[k][i] for k in range(len(S.basis))] for i in range(r)]
    coker = cokernel(relations, rows=r)
    return coker.group, AbHom(A, coker.group, _matrix_tuple(coker.torsion_proj, coker.group.rank, r))


def subquotient(S: AbSubgroup, T: AbSubgroup) -> FinAbGroup:
    """``S/T`` for ``T <= S`` inside a common ambient group."""
    _same_ambient(S, T)
    if not T <= S:
        raise ValueError("subquotient needs T <= S")
    inner = S.group.subgroup(S.coordinates(g) for g in T.basis)
    return quotient(S.group, inner)[0]


def dual_group(A: FinAbGroup):
    """Character group of ``A`` and the evaluation pairing into ``Q/Z``.

    >>> D, pair = dual_group(FinAbGroup((4,)))
    >>> pair((1,), (1,))
    Fraction(1, 4)
    """

    def pairing(a: Sequence[int], chi: Sequence[int]) -> Fraction:
        a, chi = A.reduce(a), A.reduce(chi)
        return sum((Fraction(x * c, d) for x, c, d in zip(a, chi, A.invariant_factors)), Fraction(0)) % 1

    return FinAbGroup(A.invariant_factors), pairing


@dataclass(frozen=True)
class Presentation:
    """``Z/o1 + ... + Z/ok`` (any positive orders) identified with ``group``.

    ``to_group`` maps coordinate vectors to group coordinates and
    ``from_group`` is its inverse, both as integer matrices.
    """

    orders: tuple[int, ...]
    group: FinAbGroup
    to_group: tuple[tuple[int, ...], ...]
    from_group: tuple[tuple[int, ...], ...]

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        return self.group.reduce([sum(a * b for a, b in zip(row, v)) for row in self.to_group])

    def lift(self, w: Sequence[int]) -> tuple[int, ...]:
        return tuple(
            sum(a * b for a, b in zip(row, w)) % o for row, o in zip(self.from_group, self.orders)
        )


def present(orders: Iterable[int]) -> Presentation:
    orders = tuple(int(o) for o in orders)
    if any(o < 1 for o in orders):
        raise ValueError(f"cyclic orders must be positive, got {list(orders)}")
    k = len(orders)
    U, D, _ = snf([[o * int(i == j) for j in range(k)] for i, o in enumerate(orders)] or np.empty((0, 0), dtype=object), want_v=False)
    diag = diagonal(D)
    keep = [i for i, d in enumerate(diag) if d > 1]
    Uinv = unimodular_inverse(U) if k else U
    to_group = tuple(tuple(int(x) for x in U[i]) for i in keep)
    from_group = tuple(tuple(int(Uinv[r, i]) for i in keep) for r in range(k))
    return Presentation(orders, FinAbGroup(tuple(diag[i] for i in keep)), to_group, from_group)


def direct_sum(groups: Sequence[FinAbGroup]) -> tuple[FinAbGroup, list[AbHom], list[AbHom]]:
    """Direct sum with its injections and projections."""
    orders = [d for G in groups for d in G.invariant_factors]
    pres = present(orders)
    S = pres.group
    injections, projections = [], []
    start = 0
    for G in groups:
        block = range(start, start + G.rank)
        inj_cols = [pres([int(k == j) for k in range(len(orders))]) for j in block]
        injections.append(AbHom(G, S, _columns_to_matrix(inj_cols, S.rank)))
        proj = [[pres.from_group[r][c] for c in range(S.rank)] for r in block]
        projections.append(AbHom(S, G, _matrix_tuple(proj, G.rank, S.rank)))
        start += G.rank
    return S, injections, projections


class Wedge:
    """The exterior square of ``A`` with its alternating bilinear map."""

    def __init__(self, A: FinAbGroup):
        self.source = A
        self.pairs = list(itertools.combinations(range(A.rank), 2))
        d = A.invariant_factors
        self._presentation = present(math.gcd(d[i], d[j]) for i, j in self.pairs)
        self.group = self._presentation.group

    def __call__(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return self._presentation([a[i] * b[j] - a[j] * b[i] for i, j in self.pairs])

    def image_of(self, gens: Sequence[Sequence[int]]) -> AbSubgroup:
        """Subgroup spanned by all ``x ^ y`` for ``x, y`` in ``gens``."""
        return self.group.subgroup(self(x, y) for x, y in itertools.combinations(gens, 2))


def wedge_square(A: FinAbGroup) -> tuple[FinAbGroup, Wedge]:
    """
    >>> wedge_square(FinAbGroup((2, 4)))[0]
    FinAbGroup((2,))
    """
    w = Wedge(A)
    return w.group, w


def subgroup_join(S: AbSubgroup, T: AbSubgroup) -> AbSubgroup:
    _same_ambient(S, T)
    return AbSubgroup(S.ambient, S.basis + T.basis)


def subgroup_intersect(S: AbSubgroup, T: AbSubgroup) -> AbSubgroup:
    _same_ambient(S, T)
    r = S.ambient.rank
    if r == 0:
        return S
    # x = y B_S = z B_T  <=>  (y, -z) in the left kernel of [B_S ; B_T]
    stacked = [list(row) for row in S.basis] + [[-x for x in row] for row in T.basis]
    system = [[stacked[k][j] for k in range(len(stacked))] for j in range(r)]
    sols = integer_kernel(system)
    n = len(S.basis)
    gens = []
    for sol in sols:
        y = sol[:n]
        gens.append([sum(y[k] * S.basis[k][j] for k in range(n)) for j in range(r)])
    return S.ambient.subgroup(gens)


def cyclic_subgroups(A: FinAbGroup) -> list[AbSubgroup]:
    """Every cyclic subgroup of ``A`` once, trivial subgroup first."""
    seen: dict[AbSubgroup, None] = {}
    for g in A.elements():
        seen.setdefault(A.subgroup([g]), None)
    return sorted(seen, key=lambda S: (S.order, S.basis))


def all_subgroups(A: FinAbGroup) -> list[AbSubgroup]:
    """Every subgroup of ``A`` (fine for groups of a few hundred elements)."""
    cyclic = cyclic_subgroups(A)
    found = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        nxt = []
        for S in frontier:
            for C in cyclic:
                if C <= S:
                    continue
                J = subgroup_join(S, C)
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted(found, key=lambda S: (S.order, S.basis))
