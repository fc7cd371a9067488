"""Exact linear algebra over ℤ, ℚ and 𝔽_p for sparse integer matrices.

The workhorse is sparse Gaussian elimination with Markowitz-style pivot
choice.  Over ℤ only unit pivots are eliminated sparsely; whatever core is
left is handed to a dense Smith normal form.
"""

from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

MAX_ROWS = 10**5 * 4
MAX_NNZ = 10**7
DENSE_CUTOFF = 64


class LimitError(RuntimeError):
    """A matrix or coefficient exceeded a configured limit."""


class ComplexError(ValueError):
    """Matrices that do not form a cochain complex."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class SparseIntMatrix:
    """Row-major dict-of-dicts integer matrix; zero entries are never stored."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: dict[int, dict[int, int]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        self.rows = rows
        self.cols = cols
        self.data = data if data is not None else {}

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets: Iterable[tuple[int, int, int]]) -> "SparseIntMatrix":
        data: dict[int, dict[int, int]] = {}
        for r, c, v in triplets:
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r},{c}) outside {rows}x{cols}")
            row = data.setdefault(r, {})
            row[c] = row.get(c, 0) + int(v)
        for r in list(data):
            row = {c: v for c, v in data[r].items() if v}
            if row:
                data[r] = row
            else:
                del data[r]
        return cls(rows, cols, data)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]], cols: int | None = None) -> "SparseIntMatrix":
        nrows = len(dense)
        ncols = cols if cols is not None else (len(dense[0]) if nrows else 0)
        return cls.from_triplets(
            nrows, ncols, ((i, j, v) for i, row in enumerate(dense) for j, v in enumerate(row) if v)
        )

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Sequence[int]]) -> "SparseIntMatrix":
        return cls.from_triplets(
            nrows, len(columns), ((i, j, v) for j, col in enumerate(columns) for i, v in enumerate(col) if v)
        )

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.data.values())

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def triplets(self) -> list[tuple[int, int, int]]:
        return [(r, c, v) for r in sorted(self.data) for c, v in sorted(self.data[r].items())]

    def __eq__(self, other) -> bool:
        return isinstance(other, SparseIntMatrix) and self.shape == other.shape and self.data == other.data

    def __repr__(self) -> str:
        return f"SparseIntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, row in self.data.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def transpose(self) -> "SparseIntMatrix":
        data: dict[int, dict[int, int]] = {}
        for r, row in self.data.items():
            for c, v in row.items():
                data.setdefault(c, {})[r] = v
        return SparseIntMatrix(self.cols, self.rows, data)

    def column(self, j: int) -> list[int]:
        out = [0] * self.rows
        for r, row in self.data.items():
            v = row.get(j)
            if v:
                out[r] = v
        return out

    def columns(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [{} for _ in range(self.cols)]
        for r, row in self.data.items():
            for c, v in row.items():
                cols[c][r] = v
        return cols

    def matvec(self, v: Sequence) -> list:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} against {self.cols} columns")
        out = [0] * self.rows
        for r, row in self.data.items():
            out[r] = sum(x * v[c] for c, x in row.items())
        return out

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        data: dict[int, dict[int, int]] = {}
        for r, row in self.data.items():
            acc: dict[int, int] = {}
            for k, x in row.items():
                orow = other.data.get(k)
                if orow:
                    for c, y in orow.items():
                        acc[c] = acc.get(c, 0) + x * y
            acc = {c: v for c, v in acc.items() if v}
            if acc:
                data[r] = acc
        return SparseIntMatrix(self.rows, other.cols, data)

    def is_zero(self) -> bool:
        return not self.data

    def hstack(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        data = {r: dict(row) for r, row in self.data.items()}
        for r, row in other.data.items():
            tgt = data.setdefault(r, {})
            for c, v in row.items():
                tgt[c + self.cols] = v
        return SparseIntMatrix(self.rows, self.cols + other.cols, data)

    def vstack(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        data = {r: dict(row) for r, row in self.data.items()}
        for r, row in other.data.items():
            data[r + self.rows] = dict(row)
        return SparseIntMatrix(self.rows + other.rows, self.cols, data)

    def select_columns(self, cols: Sequence[int]) -> "SparseIntMatrix":
        pos = {c: i for i, c in enumerate(cols)}
        data = {}
        for r, row in self.data.items():
            new = {pos[c]: v for c, v in row.items() if c in pos}
            if new:
                data[r] = new
        return SparseIntMatrix(self.rows, len(cols), data)

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols} {self.nnz}"]
        lines += [f"{r} {c} {v}" for r, c, v in self.triplets()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparseIntMatrix":
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        rows, cols, nnz = map(int, lines[0])
        if len(lines) - 1 != nnz:
            raise ValueError(f"header announces {nnz} entries, found {len(lines) - 1}")
        return cls.from_triplets(rows, cols, ((int(r), int(c), int(v)) for r, c, v in lines[1:]))


@dataclass(frozen=True)
class AbelianGroupPresentation:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"torsion factor {d} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion factors {a}, {b} break the divisibility chain")

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = [f"Z^{self.free_rank}" if self.free_rank != 1 else "Z"] if self.free_rank else []
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def _check_limits(M: SparseIntMatrix, max_cells: int | None = None) -> None:
    if max_cells is not None and M.rows * M.cols > max_cells:
        raise LimitError(f"{M.rows}x{M.cols} matrix exceeds the cell limit {max_cells}")
    if M.rows > MAX_ROWS or M.nnz > MAX_NNZ:
        raise LimitError(f"{M.rows}x{M.cols} matrix with {M.nnz} nonzeros exceeds the sparse limits")


# -- sparse elimination ---------------------------------------------------------------


class _Eliminator:
    """Shared bookkeeping for sparse row elimination.

    ``mode`` is "p" (field 𝔽_p), "q" (fraction-free over ℤ, i.e. ranks over ℚ)
    or "unit" (ℤ, unit pivots only; leaves a core for the dense SNF).
    """

    def __init__(self, M: SparseIntMatrix, mode: str, p: int = 0):
        self.mode = mode
        self.p = p
        if mode == "p":
            self.rows = {}
            for r, row in M.data.items():
                red = {c: v % p for c, v in row.items() if v % p}
                if red:
                    self.rows[r] = red
        else:
            self.rows = {r: dict(row) for r, row in M.data.items()}
        self.col_rows: dict[int, set[int]] = {}
        for r, row in self.rows.items():
            for c in row:
                self.col_rows.setdefault(c, set()).add(r)
        self.pivots = 0

    def _pick_row(self, c: int) -> int | None:
        best = None
        best_len = None
        for r in self.col_rows[c]:
            row = self.rows[r]
            if self.mode == "unit" and abs(row[c]) != 1:
                continue
            n = len(row)
            if best is None or n < best_len or (n == best_len and r < best):
                best, best_len = r, n
        return best

    def _eliminate(self, i: int, j: int) -> None:
        rows, col_rows, mode, p = self.rows, self.col_rows, self.mode, self.p
        prow = rows.pop(i)
        for c in prow:
            col_rows[c].discard(i)
        piv = prow[j]
        if mode == "p":
            inv = pow(piv, -1, p)
        targets = list(col_rows.get(j, ()))
        for r in targets:
            row = rows[r]
            f = row[j]
            if mode == "p":
                g = (f * inv) % p
                for c, v in prow.items():
                    nv = (row.get(c, 0) - g * v) % p
                    if nv:
                        if c not in row:
                            col_rows.setdefault(c, set()).add(r)
                        row[c] = nv
                    elif c in row:
                        del row[c]
                        col_rows[c].discard(r)
            elif mode == "unit":
                g = f * piv  # piv = ±1, so f / piv = f * piv
                for c, v in prow.items():
                    nv = row.get(c, 0) - g * v
                    if nv:
                        if c not in row:
                            col_rows.setdefault(c, set()).add(r)
                        row[c] = nv
                    elif c in row:
                        del row[c]
                        col_rows[c].discard(r)
            else:
                g = math.gcd(piv, f)
                a, b = piv // g, f // g
                for c in list(row):
                    row[c] *= a
                for c, v in prow.items():
                    nv = row.get(c, 0) - b * v
                    if nv:
                        if c not in row:
                            col_rows.setdefault(c, set()).add(r)
                        row[c] = nv
                    elif c in row:
                        del row[c]
                        col_rows[c].discard(r)
                if row:
                    content = 0
                    for v in row.values():
                        content = math.gcd(content, v)
                        if content == 1:
                            break
                    if content > 1:
                        for c in row:
                            row[c] //= content
            if not row:
                del rows[r]
        self.pivots += 1
        return None

    def run(self) -> None:
        heap = [(len(rs), c) for c, rs in self.col_rows.items() if rs]
        heapq.heapify(heap)
        deferred: set[int] = set()
        while True:
            while heap:
                cnt, c = heapq.heappop(heap)
                rs = self.col_rows.get(c)
                if not rs:
                    continue
                if len(rs) != cnt:
                    heapq.heappush(heap, (len(rs), c))
                    continue
                r = self._pick_row(c)
                if r is None:
                    deferred.add(c)
                    continue
                touched = set(self.rows[r])
                for rr in rs:
                    touched.update(self.rows[rr])
                self._eliminate(r, c)
                for cc in touched:
                    rs2 = self.col_rows.get(cc)
                    if rs2:
                        heapq.heappush(heap, (len(rs2), cc))
            retry = [c for c in deferred if self.col_rows.get(c) and self._pick_row(c) is not None]
            if not retry:
                return
            deferred.difference_update(retry)
            for c in retry:
                heapq.heappush(heap, (len(self.col_rows[c]), c))


def rank(M: SparseIntMatrix, field: int | str = "Q") -> int:
    """Exact rank over ℚ (``field="Q"``) or over 𝔽_p (``field=p``)."""
    if field in ("Q", 0, None):
        el = _Eliminator(M, "q")
    else:
        p = int(field)
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        el = _Eliminator(M, "p", p)
    el.run()
    if el.rows:
        raise AssertionError("elimination left rows behind")
    return el.pivots


# -- Smith normal form ------------------------------------------------------------------


@dataclass
class SmithForm:
    invariant_factors: list[int]
    U: list[list[int]] | None = None
    V: list[list[int]] | None = None

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.invariant_factors if d > 1]


def _dense_snf(A: list[list[int]], want: bool):
    """In-place Smith form of a dense matrix; returns (factors, U, V) with U·A·V = D."""
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)] if want else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if want else None

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        if want:
            U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        if want:
            for row in V:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        rs, rd = A[src], A[dst]
        for c in range(n):
            if rs[c]:
                rd[c] -= q * rs[c]
        if want:
            us, ud = U[src], U[dst]
            for c in range(m):
                if us[c]:
                    ud[c] -= q * us[c]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in A:
            if row[src]:
                row[dst] -= q * row[src]
        if want:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    factors = []
    t = 0
    while t < min(m, n):
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
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = A[t][t]
            moved = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // piv)
            small = min((i for i in range(t + 1, m) if A[i][t]), key=lambda i: abs(A[i][t]), default=None)
            if small is not None:
                swap_rows(t, small)
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // piv)
            small = min((j for j in range(t + 1, n) if A[t][j]), key=lambda j: abs(A[t][j]), default=None)
            if small is not None:
                swap_cols(t, small)
                continue
            for i in range(t + 1, m):
                row = A[i]
                if any(row[j] % piv for j in range(t + 1, n)):
                    add_row(t, i, -1)
                    moved = True
                    break
            if not moved:
                break
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            if want:
                U[t] = [-v for v in U[t]]
        factors.append(A[t][t])
        t += 1
    return factors, U, V


def smith_normal_form(M: SparseIntMatrix, transforms: bool = False, max_cells: int | None = None) -> SmithForm:
    """Nonzero invariant factors d1 | d2 | ... of M, optionally with unimodular U, V."""
    _check_limits(M, max_cells)
    if transforms:
        if M.rows * M.cols > 250_000:
            raise LimitError(f"transforms requested for a {M.rows}x{M.cols} matrix; too large for the dense path")
        factors, U, V = _dense_snf(M.to_dense(), True)
        return SmithForm(factors, U, V)
    if M.rows <= DENSE_CUTOFF and M.cols <= DENSE_CUTOFF:
        factors, _, _ = _dense_snf(M.to_dense(), False)
        return SmithForm(factors)
    el = _Eliminator(M, "unit")
    el.run()
    ones = el.pivots
    core_rows = list(el.rows.values())
    if not core_rows:
        return SmithForm([1] * ones)
    core_cols = sorted({c for row in core_rows for c in row})
    pos = {c: k for k, c in enumerate(core_cols)}
    dense = [[0] * len(core_cols) for _ in core_rows]
    for i, row in enumerate(core_rows):
        for c, v in row.items():
            dense[i][pos[c]] = v
    if len(dense) * len(core_cols) > 4_000_000:
        raise LimitError(f"dense SNF core of {len(dense)}x{len(core_cols)} is too large")
    factors, _, _ = _dense_snf(dense, False)
    return SmithForm([1] * ones + factors)


def dense_matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    cols = list(zip(*B))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in A]


def determinant(M: SparseIntMatrix) -> int:
    """Exact determinant of a square matrix by sparse elimination over ℚ."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    rows = {r: {c: Fraction(v) for c, v in row.items()} for r, row in M.data.items()}
    if len(rows) < n:
        return 0
    col_rows: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            col_rows.setdefault(c, set()).add(r)
    alive_r = list(range(n))
    alive_c = list(range(n))
    det = Fraction(1)

    for _ in range(n):
        cands = [(len(rs), c) for c, rs in col_rows.items() if rs]
        if not cands:
            return 0
        _, j = min(cands)
        i = min(col_rows[j], key=lambda r: (len(rows[r]), r))
        prow = rows.pop(i)
        for c in prow:
            col_rows[c].discard(i)
        piv = prow[j]
        for r in list(col_rows[j]):
            row = rows[r]
            g = row[j] / piv
            for c, v in prow.items():
                nv = row.get(c, 0) - g * v
                if nv:
                    if c not in row:
                        col_rows.setdefault(c, set()).add(r)
                    row[c] = nv
                elif c in row:
                    del row[c]
                    col_rows[c].discard(r)
        pi = bisect.bisect_left(alive_r, i)
        pj = bisect.bisect_left(alive_c, j)
        alive_r.pop(pi)
        alive_c.pop(pj)
        del col_rows[j]
        det *= piv if (pi + pj) % 2 == 0 else -piv
    assert det.denominator == 1
    return int(det)


# -- lattices ---------------------------------------------------------------------------


class IntegerLattice:
    """ℤ-span of integer vectors, kept as an echelon basis with distinct pivots.

    Each basis vector remembers its expression in the original generators, so
    membership queries can return integer coefficients.
    """

    def __init__(self, dim: int, track: bool = True):
        self.dim = dim
        self.track = track
        self.basis: dict[int, tuple[dict[int, int], dict[int, int]]] = {}
        self.ngens = 0

    @classmethod
    def from_columns(cls, M: SparseIntMatrix, track: bool = True) -> "IntegerLattice":
        lat = cls(M.rows, track)
        for col in M.columns():
            lat.add(col)
        return lat

    def add(self, vec: dict[int, int] | Sequence[int]) -> None:
        v = _as_sparse(vec)
        coef = {self.ngens: 1} if self.track else {}
        self.ngens += 1
        basis = self.basis
        while v:
            p = min(v)
            if p not in basis:
                if v[p] < 0:
                    v = {c: -x for c, x in v.items()}
                    coef = {g: -x for g, x in coef.items()}
                basis[p] = (v, coef)
                return
            b, bc = basis[p]
            bp, vp = b[p], v[p]
            if vp % bp == 0:
                q = vp // bp
                v = _axpy(v, b, -q)
                coef = _axpy(coef, bc, -q)
                continue
            g, s, t = _xgcd(bp, vp)
            # new pivot vector s*b + t*v has leading entry g; the remainder is (vp/g)*b - (bp/g)*v
            nb = _axpy(_scale(b, s), v, t)
            nbc = _axpy(_scale(bc, s), coef, t)
            rem = _axpy(_scale(b, vp // g), v, -(bp // g))
            remc = _axpy(_scale(bc, vp // g), coef, -(bp // g))
            basis[p] = (nb, nbc)
            v, coef = rem, remc

    def reduce(self, vec) -> tuple[dict[int, int], dict[int, int]]:
        """Greedy reduction; returns (residue, coefficients used)."""
        v = _as_sparse(vec)
        used: dict[int, int] = {}
        while v:
            p = min(v)
            if p not in self.basis:
                break
            b, bc = self.basis[p]
            if v[p] % b[p]:
                break
            q = v[p] // b[p]
            v = _axpy(v, b, -q)
            used = _axpy(used, bc, q)
        return v, used

    def contains(self, vec) -> bool:
        return not self.reduce(vec)[0]

    @property
    def rank(self) -> int:
        return len(self.basis)


def _as_sparse(vec) -> dict[int, int]:
    if isinstance(vec, dict):
        return {i: int(x) for i, x in vec.items() if x}
    return {i: int(x) for i, x in enumerate(vec) if x}


def _axpy(x: dict[int, int], y: dict[int, int], a: int) -> dict[int, int]:
    out = dict(x)
    if a:
        for k, v in y.items():
            nv = out.get(k, 0) + a * v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return out


def _scale(x: dict[int, int], a: int) -> dict[int, int]:
    return {k: a * v for k, v in x.items()} if a else {}


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g = gcd(a, b) > 0 with g = s*a + t*b."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def lattice_membership(v: Sequence[int], M: SparseIntMatrix) -> list[int] | None:
    """Integer x with M x = v, or None when v is outside the column lattice of M."""
    if len(v) != M.rows:
        raise ValueError(f"vector of length {len(v)} against a matrix with {M.rows} rows")
    lat = IntegerLattice.from_columns(M)
    residue, used = lat.reduce(v)
    if residue:
        return None
    x = [0] * M.cols
    for g, c in used.items():
        x[g] = c
    return x


def lattices_equal(A: SparseIntMatrix, B: SparseIntMatrix) -> bool:
    """Whether the columns of A and B span the same sublattice of ℤ^rows."""
    if A.rows != B.rows:
        raise ValueError("ambient dimensions differ")
    la = IntegerLattice.from_columns(A, track=False)
    lb = IntegerLattice.from_columns(B, track=False)
    return all(lb.contains(c) for c in A.columns()) and all(la.contains(c) for c in B.columns())


# -- (co)homology ------------------------------------------------------------------------


@dataclass(frozen=True)
class Coefficients:
    """ℤ, ℚ or 𝔽_p."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp"):
            raise ValueError(f"unknown coefficient kind {self.kind!r}")
        if self.kind == "Fp" and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def parse(cls, text: str) -> "Coefficients":
        t = text.strip()
        if t in ("Z", "Q"):
            return cls(t)
        if t[:1] == "F" and t[1:].isdigit():
            return cls("Fp", int(t[1:]))
        raise ValueError(f"coefficients must be Z, Q or F<p>, got {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    def __str__(self) -> str:
        return f"F{self.p}" if self.kind == "Fp" else self.kind

    def coerce(self, x):
        if self.kind == "Fp":
            x = Fraction(x)
            return (x.numerator * self.inverse(x.denominator)) % self.p
        if self.kind == "Q":
            return Fraction(x)
        x = Fraction(x)
        if x.denominator != 1:
            raise ValueError(f"coefficient {x} needs the inverse of {x.denominator}, unavailable over Z")
        return int(x)

    def inverse(self, m: int):
        if self.kind == "Q":
            return Fraction(1, m)
        if self.kind == "Fp":
            if m % self.p == 0:
                raise ValueError(f"{m} is not invertible over F{self.p}")
            return pow(m, -1, self.p)
        if m in (1, -1):
            return m
        raise ValueError(f"{m} is not invertible over Z")

    def rank(self, M: SparseIntMatrix) -> int:
        return rank(M, self.p if self.kind == "Fp" else "Q")


ZZ = Coefficients("Z")
QQ = Coefficients("Q")


@dataclass(frozen=True)
class HomologyGroups:
    Z: AbelianGroupPresentation
    B: AbelianGroupPresentation
    H: AbelianGroupPresentation


def homology(d_k: SparseIntMatrix, d_km1: SparseIntMatrix, coeffs: Coefficients = ZZ,
             check: bool = True) -> HomologyGroups:
    """Cocycles, coboundaries and cohomology at the middle of C --d_km1--> C^k --d_k--> .

    Over ℤ the torsion of ker d_k / im d_km1 equals the torsion of coker d_km1
    (the quotient C^k / ker d_k embeds in a free group), so it is read off the
    invariant factors of d_km1.
    """
    if d_k.cols != d_km1.rows:
        raise ComplexError(f"d_k has {d_k.cols} columns but d_(k-1) has {d_km1.rows} rows")
    if check and not (d_k @ d_km1).is_zero():
        raise ComplexError("d_k ∘ d_(k-1) is not zero")
    n = d_k.cols
    if coeffs.is_field:
        rz = n - coeffs.rank(d_k)
        rb = coeffs.rank(d_km1)
        return HomologyGroups(
            AbelianGroupPresentation(rz), AbelianGroupPresentation(rb), AbelianGroupPresentation(rz - rb)
        )
    rz = n - smith_normal_form(d_k).rank
    snf = smith_normal_form(d_km1)
    rb = snf.rank
    return HomologyGroups(
        AbelianGroupPresentation(rz),
        AbelianGroupPresentation(rb),
        AbelianGroupPresentation(rz - rb, tuple(snf.torsion)),
    )
