"""Finite shelves: construction, axiom checks, orbits, table files, isomorphisms.

Elements are always the integers ``0 .. size-1``; the familiar names
(``1..2^n`` for Laver tables, ``-r..m-1`` for cyclic shelves, ``(a,i)`` for
E-shelves) live only in ``Shelf.labels``.
"""

from __future__ import annotations

import io
import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

MAX_LAVER_N = 14
MAX_ISO_SIZE = 12


class ShelfError(ValueError):
    """Malformed table, bad parameters, or a violated structural condition."""


@dataclass(frozen=True)
class Shelf:
    size: int
    table: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.size < 1:
            raise ShelfError("a shelf needs at least one element")
        if len(self.table) != self.size:
            raise ShelfError(f"table has {len(self.table)} rows, expected {self.size}")
        for a, row in enumerate(self.table):
            if len(row) != self.size:
                raise ShelfError(f"row {a} has {len(row)} entries, expected {self.size}")
            for b, v in enumerate(row):
                if not 0 <= v < self.size:
                    raise ShelfError(f"entry ({a},{b}) = {v} outside [0, {self.size})")
        if self.labels is not None and len(self.labels) != self.size:
            raise ShelfError("labels length does not match size")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], labels: Sequence[str] | None = None) -> "Shelf":
        table = tuple(tuple(int(v) for v in row) for row in rows)
        return cls(len(table), table, tuple(labels) if labels is not None else None)

    def op(self, a: int, b: int) -> int:
        if not (0 <= a < self.size and 0 <= b < self.size):
            raise IndexError(f"element index out of range for a shelf of size {self.size}")
        return self.table[a][b]

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels is not None else str(a)

    def array(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64)

    def is_rack(self) -> bool:
        return all(len(set(row)) == self.size for row in self.table)

    def subshelf(self, elements: Iterable[int]) -> "Shelf":
        """Restrict to a ▷-closed subset, renumbering in increasing order."""
        elems = sorted(set(elements))
        pos = {e: i for i, e in enumerate(elems)}
        rows = []
        for a in elems:
            row = []
            for b in elems:
                c = self.table[a][b]
                if c not in pos:
                    raise ShelfError(f"subset is not closed: {a}▷{b} = {c}")
                row.append(pos[c])
            rows.append(row)
        return Shelf.from_rows(rows, [self.label(e) for e in elems])

    def relabel(self, labels: Sequence[str] | None) -> "Shelf":
        return Shelf(self.size, self.table, tuple(labels) if labels is not None else None)


# -- validation ----------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    is_shelf: bool
    is_rack: bool
    is_quandle: bool
    generators: tuple[int, ...]
    witness: tuple[int, int, int] | None = None

    @property
    def is_monogenic(self) -> bool:
        return bool(self.generators)


def sd_witness(S: Shelf) -> tuple[int, int, int] | None:
    """First triple (lexicographic) violating a▷(b▷c) = (a▷b)▷(a▷c), or None."""
    T = S.array()
    n = S.size
    for a in range(n):
        lhs = T[a][T]                       # lhs[b, c] = a▷(b▷c)
        rhs = T[T[a][:, None], T[a][None, :]]  # rhs[b, c] = (a▷b)▷(a▷c)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            b, c = bad[0]
            return a, int(b), int(c)
    return None


def closure(S: Shelf, seeds: Iterable[int]) -> set[int]:
    """Smallest ▷-closed subset containing ``seeds``."""
    got = list(dict.fromkeys(seeds))
    seen = set(got)
    i = 0
    while i < len(got):
        x = got[i]
        for y in got[: i + 1]:
            for z in (S.table[x][y], S.table[y][x]):
                if z not in seen:
                    seen.add(z)
                    got.append(z)
        i += 1
    return seen


def generators(S: Shelf) -> tuple[int, ...]:
    return tuple(g for g in range(S.size) if len(closure(S, [g])) == S.size)


def validate(S: Shelf) -> ValidationReport:
    witness = sd_witness(S)
    rack = S.is_rack()
    quandle = rack and all(S.table[a][a] == a for a in range(S.size))
    return ValidationReport(
        is_shelf=witness is None,
        is_rack=rack,
        is_quandle=quandle,
        generators=generators(S),
        witness=witness,
    )


# -- constructors -----------------------------------------------------------------


def laver_rows(n: int) -> np.ndarray:
    """Table of A_n, 0-based (element i stands for i+1).

    Rows are filled top-down from 2^n: a▷1 = a+1 and a▷(b+1) = (a▷b)▷(a+1).
    Since a▷b > a for a < 2^n, the row needed on the right is always done.
    """
    if n < 0:
        raise ShelfError("n must be non-negative")
    if n > MAX_LAVER_N:
        raise ShelfError(f"n = {n} exceeds the Laver size cap {MAX_LAVER_N}")
    size = 1 << n
    T = np.zeros((size, size), dtype=np.int64)
    top = size - 1
    T[top] = np.arange(size)
    for a in range(top - 1, -1, -1):
        row = T[a]
        nxt = a + 1
        row[0] = nxt
        x = nxt
        for b in range(1, size):
            x = T[x, nxt]
            row[b] = x
    return T


def make_laver(n: int) -> Shelf:
    T = laver_rows(n)
    return Shelf.from_rows(T.tolist(), [str(i + 1) for i in range(1 << n)])


def cyclic_succ(v: int, m: int) -> int:
    """v+1 in a cyclic shelf, with the convention (m-1)+1 = 0 (signed labels)."""
    return 0 if v == m - 1 else v + 1


def make_cyclic(r: int, m: int) -> Shelf:
    if r < 0 or m < 1:
        raise ShelfError("cyclic shelf needs r >= 0 and m >= 1")
    size = r + m
    row = [cyclic_succ(b - r, m) + r for b in range(size)]
    return Shelf.from_rows([row] * size, [str(v) for v in range(-r, m)])


def make_named(kind: str, size: int) -> Shelf:
    if size < 1:
        raise ShelfError("size must be positive")
    if kind == "left_trivial":
        rows = [[a] * size for a in range(size)]
    elif kind == "right_trivial":
        rows = [list(range(size)) for _ in range(size)]
    else:
        raise ShelfError(f"unknown named shelf {kind!r}")
    return Shelf.from_rows(rows)


@dataclass(frozen=True)
class EShelfParams:
    """Data (n, ρ, μ) for E-shelves; ``rho[i]``, ``mu[i]`` belong to the Laver element i+1."""

    n: int
    rho: tuple[int, ...]
    mu: tuple[int, ...]
    starred: bool = False

    def __post_init__(self):
        size = 1 << self.n
        if len(self.rho) != size or len(self.mu) != size:
            raise ShelfError(f"rho and mu need {size} values for n = {self.n}")
        if any(v < 0 for v in self.rho) or any(v < 1 for v in self.mu):
            raise ShelfError("rho must be >= 0 and mu must be >= 1")

    @classmethod
    def constant(cls, n: int, rho: int, mu: int, starred: bool = False) -> "EShelfParams":
        size = 1 << n
        return cls(n, (rho,) * size, (mu,) * size, starred)

    def violation(self) -> tuple[int, int, int] | None:
        """A triple (c, a, b) with b = c▷a but μ(b)∤μ(a) or ρ(b) > ρ(a)+1 (0-based)."""
        T = laver_rows(self.n)
        size = 1 << self.n
        for c in range(size):
            for a in range(size):
                b = int(T[c, a])
                if self.mu[a] % self.mu[b] or self.rho[b] > self.rho[a] + 1:
                    return c, a, b
        return None


def make_e_shelf(p: EShelfParams) -> Shelf:
    bad = p.violation()
    if bad is not None:
        c, a, b = bad
        raise ShelfError(
            f"E-shelf condition fails for c={c + 1}, a={a + 1}, b={b + 1}: "
            f"need mu(b) | mu(a) and rho(b) <= rho(a)+1"
        )
    L = laver_rows(p.n)
    elems = [] if p.starred else [(0, -1)]
    for a in range(1 << p.n):
        elems.extend((a, i) for i in range(p.rho[a] + p.mu[a]))
    pos = {e: k for k, e in enumerate(elems)}
    rows = []
    for a, _ in elems:
        row = []
        for b, j in elems:
            c = int(L[a, b])
            alpha = j + 1
            top = p.rho[c] + p.mu[c]
            while alpha >= top:
                alpha -= p.mu[c]
            row.append(pos[(c, alpha)])
        rows.append(row)
    return Shelf.from_rows(rows, [f"({a + 1},{i})" for a, i in elems])


# -- orbits -------------------------------------------------------------------------


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # keep the smaller index as root so roots are class minima
            if rx < ry:
                self.parent[ry] = rx
            else:
                self.parent[rx] = ry

    def classes(self) -> list[int]:
        """Class id per element, ids numbered by first appearance."""
        ids: dict[int, int] = {}
        return [ids.setdefault(self.find(x), len(ids)) for x in range(len(self.parent))]


@dataclass(frozen=True)
class OrbitPartition:
    orbit_of: tuple[int, ...]
    representatives: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.representatives)

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.representatives]
        for x, o in enumerate(self.orbit_of):
            out[o].append(x)
        return out


def orbits(S: Shelf) -> OrbitPartition:
    uf = UnionFind(S.size)
    for b in range(S.size):
        for a in range(S.size):
            uf.union(a, S.table[b][a])
    ids = uf.classes()
    reps: dict[int, int] = {}
    for x, o in enumerate(ids):
        reps.setdefault(o, x)
    return OrbitPartition(tuple(ids), tuple(reps[o] for o in range(len(reps))))


# -- table files -----------------------------------------------------------------------


def serialize(S: Shelf, with_labels: bool = False) -> str:
    out = io.StringIO()
    if with_labels and S.labels is not None:
        out.write("# labels: " + " ".join(S.labels) + "\n")
    out.write(f"{S.size}\n")
    for row in S.table:
        out.write(" ".join(map(str, row)) + "\n")
    return out.getvalue()


def parse(text: str) -> Shelf:
    labels = None
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("labels:"):
                labels = body[len("labels:"):].split()
            continue
        if line:
            lines.append((lineno, line))
    if not lines:
        raise ShelfError("empty table file")
    lineno, head = lines[0]
    try:
        size = int(head)
    except ValueError:
        raise ShelfError(f"line {lineno}: expected the table size, got {head!r}") from None
    if size < 1:
        raise ShelfError(f"line {lineno}: size must be positive")
    body = lines[1:]
    if len(body) != size:
        raise ShelfError(f"expected {size} table rows, found {len(body)}")
    rows = []
    for lineno, line in body:
        try:
            row = [int(tok) for tok in line.split()]
        except ValueError:
            raise ShelfError(f"line {lineno}: non-integer entry") from None
        if len(row) != size:
            raise ShelfError(f"line {lineno}: expected {size} entries, found {len(row)}")
        for v in row:
            if not 0 <= v < size:
                raise ShelfError(f"line {lineno}: entry {v} outside [0, {size})")
        rows.append(row)
    if labels is not None and len(labels) != size:
        raise ShelfError(f"labels comment has {len(labels)} names, expected {size}")
    return Shelf.from_rows(rows, labels)


# -- isomorphism -----------------------------------------------------------------------


def _element_invariants(S: Shelf) -> list[tuple]:
    T = S.table
    n = S.size
    col_images = [Counter(T[c][b] for c in range(n)) for b in range(n)]
    return [
        (
            len(set(T[a])),
            T[a][a] == a,
            sum(T[a][b] == b for b in range(n)),
            sum(T[b][a] == a for b in range(n)),
            len(col_images[a]),
            sum(T[b][a] == b for b in range(n)),
        )
        for a in range(n)
    ]


def find_isomorphism(S1: Shelf, S2: Shelf, max_size: int = MAX_ISO_SIZE) -> tuple[int, ...] | None:
    """Bijection f with f(a▷b) = f(a)▷f(b), or None if the shelves are not isomorphic.

    Backtracking over elements with invariant-based candidate filtering; every
    assignment is closed under the operation before branching further.
    """
    if S1.size != S2.size:
        return None
    n = S1.size
    if n > max_size:
        raise ShelfError(f"isomorphism search capped at size {max_size} (got {n})")
    inv1, inv2 = _element_invariants(S1), _element_invariants(S2)
    if sorted(inv1) != sorted(inv2):
        return None
    T1, T2 = S1.table, S2.table
    candidates = [[y for y in range(n) if inv2[y] == inv1[x]] for x in range(n)]

    def extend(f: dict[int, int], used: set[int], x: int, y: int):
        f = dict(f)
        used = set(used)
        queue = [(x, y)]
        while queue:
            u, v = queue.pop()
            if u in f:
                if f[u] != v:
                    return None
                continue
            if v in used or inv1[u] != inv2[v]:
                return None
            f[u] = v
            used.add(v)
            for a in list(f):
                for p, q in ((a, u), (u, a)):
                    w = T1[p][q]
                    z = T2[f[p]][f[q]]
                    if w in f:
                        if f[w] != z:
                            return None
                    else:
                        queue.append((w, z))
        return f, used

    order = sorted(range(n), key=lambda x: len(candidates[x]))

    def search(f, used):
        if len(f) == n:
            return f
        x = next(e for e in order if e not in f)
        for y in candidates[x]:
            if y in used:
                continue
            step = extend(f, used, x, y)
            if step is not None:
                done = search(*step)
                if done is not None:
                    return done
        return None

    found = search({}, set())
    if found is None:
        return None
    return tuple(found[x] for x in range(n))


def is_homomorphism(S1: Shelf, S2: Shelf, f: Sequence[int]) -> bool:
    return all(
        f[S1.table[a][b]] == S2.table[f[a]][f[b]]
        for a, b in itertools.product(range(S1.size), repeat=2)
    )
