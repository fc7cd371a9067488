"""Rack cochain complexes of finite shelves and their cohomology.

A k-cochain is a vector of length s^k; the tuple (a1, ..., ak) sits at index
a1*s^(k-1) + ... + ak (big-endian, so the basis is in lexicographic order).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .homalg import (
    QQ,
    ZZ,
    AbelianGroupPresentation,
    Coefficients,
    LimitError,
    SparseIntMatrix,
    lattice_membership,
    rank,
    smith_normal_form,
)
from .shelf import Shelf, UnionFind, orbits
from .translations import FormalCombination, TranslationSemigroup

Z_CELL_LIMIT = 2**20
FIELD_CELL_LIMIT = 2**24


# -- tuple encoding ---------------------------------------------------------------------


@lru_cache(maxsize=64)
def tuple_digits(s: int, k: int) -> np.ndarray:
    """All k-tuples over range(s) in index order, shape (s^k, k)."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((s,) * k).reshape(k, -1).T
    return np.ascontiguousarray(grids, dtype=np.int64)


def encode(digits: np.ndarray, s: int) -> np.ndarray:
    k = digits.shape[1]
    weights = s ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return digits @ weights


def tuple_index(t: Sequence[int], s: int) -> int:
    idx = 0
    for a in t:
        idx = idx * s + a
    return idx


def index_tuple(i: int, s: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        i, a = divmod(i, s)
        out.append(a)
    return tuple(reversed(out))


# -- cochains ---------------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Cochain:
    k: int
    size: int
    values: np.ndarray
    coeffs: Coefficients = ZZ

    def __post_init__(self):
        if len(self.values) != self.size**self.k:
            raise ValueError(f"cochain of degree {self.k} on {self.size} elements needs {self.size ** self.k} values")

    @classmethod
    def from_values(cls, k: int, size: int, values, coeffs: Coefficients = ZZ) -> "Cochain":
        arr = np.empty(len(values), dtype=object)
        arr[:] = [coeffs.coerce(v) for v in values]
        return cls(k, size, arr, coeffs)

    @classmethod
    def zero(cls, k: int, size: int, coeffs: Coefficients = ZZ) -> "Cochain":
        return cls.from_values(k, size, [0] * size**k, coeffs)

    @classmethod
    def constant(cls, k: int, size: int, value=1, coeffs: Coefficients = ZZ) -> "Cochain":
        return cls.from_values(k, size, [value] * size**k, coeffs)

    @classmethod
    def delta(cls, t: Sequence[int], size: int, coeffs: Coefficients = ZZ) -> "Cochain":
        vals = [0] * size ** len(t)
        vals[tuple_index(t, size)] = 1
        return cls.from_values(len(t), size, vals, coeffs)

    def _wrap(self, values: np.ndarray, k: int | None = None) -> "Cochain":
        if self.coeffs.kind == "Fp":
            values = values % self.coeffs.p
        return Cochain(self.k if k is None else k, self.size, values, self.coeffs)

    def __call__(self, *t: int):
        return self.values[tuple_index(t, self.size)]

    def __add__(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        return self._wrap(self.values + other.values)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        return self._wrap(self.values - other.values)

    def __neg__(self) -> "Cochain":
        return self._wrap(-self.values)

    def __mul__(self, c) -> "Cochain":
        return self._wrap(self.values * self.coeffs.coerce(c))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cochain)
            and (self.k, self.size, self.coeffs) == (other.k, other.size, other.coeffs)
            and bool(np.all(self.values == other.values))
        )

    def _compatible(self, other: "Cochain") -> None:
        if (self.k, self.size) != (other.k, other.size):
            raise ValueError("cochains of different degree or shelf size")
        if self.coeffs != other.coeffs:
            raise ValueError(f"coefficient mismatch: {self.coeffs} vs {other.coeffs}")

    def is_zero(self) -> bool:
        return not any(self.values)

    def as_ints(self) -> list[int]:
        if self.coeffs.kind == "Q":
            if any(Fraction(v).denominator != 1 for v in self.values):
                raise ValueError("cochain has non-integral values")
        return [int(v) for v in self.values]


# -- differentials ----------------------------------------------------------------------


def check_size(s: int, k: int, coeffs: Coefficients = ZZ, max_cells: int | None = None) -> None:
    limit = max_cells or (FIELD_CELL_LIMIT if coeffs.is_field else Z_CELL_LIMIT)
    if s ** (k + 1) > limit:
        hint = "" if coeffs.is_field else "; try --coeff F<p> for rank-only computations"
        raise LimitError(f"degree {k} on {s} elements needs s^(k+1) = {s ** (k + 1)} > {limit} cells{hint}")


@lru_cache(maxsize=32)
def _differential_cached(S: Shelf, k: int) -> SparseIntMatrix:
    s = S.size
    if k == 0:
        return SparseIntMatrix(s, 1)
    T = S.array()
    D = tuple_digits(s, k + 1)
    nrows = s ** (k + 1)
    rows_idx, cols_idx, vals = [], [], []
    ar = np.arange(nrows, dtype=np.int64)
    for i in range(k):
        sign = 1 if i % 2 == 0 else -1
        head = D[:, :i]
        tail = D[:, i + 1:]
        acted = T[D[:, i][:, None], tail]
        c1 = encode(np.hstack([head, acted]), s)
        c2 = encode(np.hstack([head, tail]), s)
        rows_idx += [ar, ar]
        cols_idx += [c1, c2]
        vals += [np.full(nrows, sign, dtype=np.int64), np.full(nrows, -sign, dtype=np.int64)]
    M = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows_idx), np.concatenate(cols_idx))), shape=(nrows, s**k)
    ).tocsr()
    M.sum_duplicates()
    M.eliminate_zeros()
    data: dict[int, dict[int, int]] = {}
    indptr, indices, mvals = M.indptr, M.indices.tolist(), M.data.tolist()
    for r in range(nrows):
        lo, hi = indptr[r], indptr[r + 1]
        if lo < hi:
            data[r] = dict(zip(indices[lo:hi], mvals[lo:hi]))
    return SparseIntMatrix(nrows, s**k, data)


def differential_matrix(S: Shelf, k: int, max_cells: int | None = None) -> SparseIntMatrix:
    """Matrix of d^k : C^k → C^(k+1), of shape s^(k+1) × s^k."""
    if k < 0:
        raise ValueError("negative degree")
    check_size(S.size, k, QQ, max_cells)
    return _differential_cached(S, k)


def apply_differential(S: Shelf, phi: Cochain) -> Cochain:
    if phi.size != S.size:
        raise ValueError("cochain and shelf sizes differ")
    if phi.k == 0:
        return Cochain.zero(1, S.size, phi.coeffs)
    D = differential_matrix(S, phi.k)
    out = np.empty(D.rows, dtype=object)
    out[:] = D.matvec(list(phi.values))
    return phi._wrap(out, phi.k + 1)


# -- actions of translations -------------------------------------------------------------


@lru_cache(maxsize=256)
def _action_index(s: int, k: int, tmap: tuple[int, ...], offset: int) -> np.ndarray:
    D = tuple_digits(s, k)
    t = np.asarray(tmap, dtype=np.int64)
    acted = np.hstack([D[:, :offset], t[D[:, offset:]]])
    return encode(acted, s)


def translation_action(phi: Cochain, t: Sequence[int], offset: int = 0) -> Cochain:
    """(b1..bk) ↦ φ(b1, .., b_offset, t▷b_(offset+1), .., t▷bk)."""
    if not 0 <= offset <= phi.k:
        raise ValueError(f"offset {offset} outside [0, {phi.k}]")
    if phi.k == 0 or offset == phi.k:
        return phi
    idx = _action_index(phi.size, phi.k, tuple(int(x) for x in t), offset)
    return Cochain(phi.k, phi.size, phi.values[idx], phi.coeffs)


def partial_evaluation(phi: Cochain, b: int) -> Cochain:
    """φ_b : (b2..bk) ↦ φ(b, b2, .., bk)."""
    if phi.k == 0:
        raise ValueError("partial evaluation needs degree >= 1")
    n = phi.size ** (phi.k - 1)
    return Cochain(phi.k - 1, phi.size, phi.values[b * n:(b + 1) * n].copy(), phi.coeffs)


def apply_formal(phi: Cochain, P: FormalCombination, sg: TranslationSemigroup, offset: int = 0) -> Cochain:
    """φ·P = Σ c_t φ·t, with each t acting on the coordinates after ``offset``."""
    coeffs = [(phi.coeffs.coerce(c), i) for c, i in P.terms]
    acc = np.zeros(len(phi.values), dtype=object)
    for c, i in coeffs:
        acc = acc + c * translation_action(phi, sg.elements[i].map, offset).values
    return phi._wrap(acc)


def apply_wP(phi: Cochain, P: FormalCombination, sg: TranslationSemigroup) -> Cochain:
    """φ·P^k·P^(1,k-1)···P^(k-1,1)."""
    if P.augmentation() != 1:
        raise ValueError(f"projector must have augmentation 1, got {P.augmentation()}")
    for i in range(phi.k):
        phi = apply_formal(phi, P, sg, i)
    return phi


def formal_operator(S: Shelf, sg: TranslationSemigroup, P: FormalCombination, k: int,
                    offset: int = 0) -> tuple[SparseIntMatrix, int]:
    """(X, m) with X/m the matrix of φ ↦ φ·P on C^k (acting on column vectors)."""
    m = 1
    for c, _ in P.terms:
        m = m * c.denominator // np.gcd(m, c.denominator)
    n = S.size**k
    triplets = []
    for c, i in P.terms:
        if k == 0:
            triplets.append((0, 0, int(c * m)))
            continue
        idx = _action_index(S.size, k, sg.elements[i].map, offset)
        w = int(c * m)
        triplets.extend((r, int(j), w) for r, j in enumerate(idx))
    return SparseIntMatrix.from_triplets(n, n, triplets), int(m)


# -- invariant part and orbit indicators --------------------------------------------------------


def invariant_classes(S: Shelf, k: int) -> list[int]:
    """Class id per k-tuple for the equivalence generated by b ~ (a▷b1, .., a▷bk)."""
    n = S.size**k
    uf = UnionFind(n)
    if k == 0:
        return [0]
    D = tuple_digits(S.size, k)
    T = S.array()
    for a in range(S.size):
        img = encode(T[a][D], S.size)
        for x, y in zip(range(n), img.tolist()):
            uf.union(x, y)
    return uf.classes()


def invariant_subcomplex(S: Shelf, k: int, coeffs: Coefficients = ZZ) -> list[Cochain]:
    """Basis of C^k_inv = {φ : φ·τ_a = φ for all a}.

    The kernel of the stacked system (T_a - Id) consists of the functions that
    are constant on the classes of the diagonal action, so class indicators
    form a basis over every coefficient ring.
    """
    check_size(S.size, k - 1 if k else 0, coeffs)
    ids = invariant_classes(S, k)
    nclass = max(ids) + 1
    out = []
    for c in range(nclass):
        out.append(Cochain.from_values(k, S.size, [int(x == c) for x in ids], coeffs))
    return out


def orbit_indicator(S: Shelf, orbit_ids: Sequence[int], coeffs: Coefficients = ZZ) -> Cochain:
    orb = orbits(S)
    for o in orbit_ids:
        if not 0 <= o < orb.count:
            raise ValueError(f"orbit id {o} outside [0, {orb.count})")
    k = len(orbit_ids)
    if k == 0:
        return Cochain.from_values(0, S.size, [1], coeffs)
    D = tuple_digits(S.size, k)
    of = np.asarray(orb.orbit_of)
    mask = np.all(of[D] == np.asarray(orbit_ids)[None, :], axis=1)
    return Cochain.from_values(k, S.size, mask.astype(int).tolist(), coeffs)


# -- reports ---------------------------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeReport:
    k: int
    dim_C: int
    rank_Z: int
    rank_B: int
    H: AbelianGroupPresentation
    seconds: float = field(default=0.0, compare=False)

    def to_json(self) -> dict:
        return {"k": self.k, "dim_C": self.dim_C, "rank_Z": self.rank_Z, "rank_B": self.rank_B,
                "H": self.H.to_json()}


@dataclass(frozen=True)
class CohomologyReport:
    shelf: Shelf
    coeffs: Coefficients
    degrees: tuple[DegreeReport, ...]

    def degree(self, k: int) -> DegreeReport:
        for d in self.degrees:
            if d.k == k:
                return d
        raise KeyError(k)

    def to_json(self, raw_labels: bool = False) -> dict:
        labels = [str(i) for i in range(self.shelf.size)] if raw_labels else [
            self.shelf.label(i) for i in range(self.shelf.size)]
        return {
            "shelf": {"size": self.shelf.size, "labels": labels},
            "coeffs": str(self.coeffs),
            "degrees": [d.to_json() for d in self.degrees],
        }


class _RankCache:
    """Per-degree ranks / invariant factors of d^j, computed once."""

    def __init__(self, S: Shelf, coeffs: Coefficients, max_cells: int | None):
        self.S, self.coeffs, self.max_cells = S, coeffs, max_cells
        self._snf: dict[int, list[int]] = {}
        self._rank: dict[int, int] = {}

    def matrix(self, j: int) -> SparseIntMatrix:
        check_size(self.S.size, j, self.coeffs, self.max_cells)
        return _differential_cached(self.S, j)

    def factors(self, j: int) -> list[int]:
        if j < 0:
            return []
        if j not in self._snf:
            self._snf[j] = smith_normal_form(self.matrix(j)).invariant_factors
        return self._snf[j]

    def rank(self, j: int) -> int:
        if j < 0:
            return 0
        if j not in self._rank:
            if self.coeffs.is_field:
                self._rank[j] = self.coeffs.rank(self.matrix(j))
            else:
                self._rank[j] = len(self.factors(j))
        return self._rank[j]


def cohomology_report(S: Shelf, degrees: int | Sequence[int], coeffs: Coefficients = ZZ,
                      max_cells: int | None = None) -> CohomologyReport:
    """Z^k, B^k, H^k for each requested degree (an int k means 0..k)."""
    ks = list(range(degrees + 1)) if isinstance(degrees, int) else list(degrees)
    if not ks:
        raise ValueError("empty degree range")
    for k in ks:
        check_size(S.size, k, coeffs, max_cells)
    cache = _RankCache(S, coeffs, max_cells)
    out = []
    for k in ks:
        t0 = time.perf_counter()
        dim = S.size**k
        rz = dim - cache.rank(k)
        rb = cache.rank(k - 1)
        torsion = () if coeffs.is_field else tuple(d for d in cache.factors(k - 1) if d > 1)
        out.append(DegreeReport(k, dim, rz, rb, AbelianGroupPresentation(rz - rb, torsion),
                                time.perf_counter() - t0))
    return CohomologyReport(S, coeffs, tuple(out))


def is_coboundary(S: Shelf, phi: Cochain) -> bool:
    """Whether φ lies in the image of d^(k-1) (over φ's coefficient ring)."""
    if phi.k == 0:
        return phi.is_zero()
    D = differential_matrix(S, phi.k - 1)
    if phi.coeffs.kind == "Z":
        return lattice_membership(phi.as_ints(), D) is not None
    if phi.coeffs.kind == "Q":
        den = 1
        for v in phi.values:
            den = den * Fraction(v).denominator // np.gcd(den, Fraction(v).denominator)
        col = [int(Fraction(v) * den) for v in phi.values]
    else:
        col = [int(v) for v in phi.values]
    ext = D.hstack(SparseIntMatrix.from_columns(D.rows, [col]))
    return phi.coeffs.rank(ext) == phi.coeffs.rank(D)


@dataclass(frozen=True)
class DecompositionCheck:
    k: int
    dim_P: int
    dim_complement: int
    direct_sum: bool
    complement_acyclic: bool


def projector_decomposition(S: Shelf, sg: TranslationSemigroup, P: FormalCombination, k: int) -> DecompositionCheck:
    """Over ℚ: C^k = C^k·P ⊕ C^k·(1-P), and cocycles of the second summand are coboundaries."""
    X, m = formal_operator(S, sg, P, k)
    n = S.size**k
    Y = SparseIntMatrix.from_triplets(
        n, n, [(r, c, -v) for r, c, v in X.triplets()] + [(i, i, m) for i in range(n)]
    )
    rP, rY = rank(X), rank(Y)
    direct = rP + rY == n and rank(X.hstack(Y)) == n
    # dim(Z ∩ im Y) = rank Y - rank(d Y); dim(B ∩ im Y) = rank Dprev + rank Y - rank[Dprev | Y]
    d_k = _differential_cached(S, k)
    z_in = rY - rank(d_k @ Y)
    if k == 0:
        b_in = 0
    else:
        Dp = _differential_cached(S, k - 1)
        b_in = rank(Dp) + rY - rank(Dp.hstack(Y))
    return DecompositionCheck(k, rP, rY, direct, z_in == b_in)


def identity_checks(S: Shelf, phi: Cochain, a: int) -> dict[str, bool]:
    """The translation identities for φ and τ_a (needs deg φ >= 1)."""
    ta = S.table[a]
    d = lambda c: apply_differential(S, c)  # noqa: E731
    acted = translation_action(phi, ta)
    return {
        "dd_zero": d(d(phi)).is_zero(),
        "d_commutes": d(acted) == translation_action(d(phi), ta),
        "homotopy": acted - phi == partial_evaluation(d(phi), a) + d(partial_evaluation(phi, a)),
        "partial": all(
            partial_evaluation(acted, b) == translation_action(partial_evaluation(phi, S.table[a][b]), ta)
            for b in range(S.size)
        ),
    }
