"""Translation semigroups, retracts, reductions and projectors of finite shelves.

Composition convention: ``compose(t, u)`` is t∘u, i.e. (t∘u)▷b = t▷(u▷b).  A
word (a1, ..., ak) stands for τ_{a1}∘...∘τ_{ak}, so its rightmost letter acts
first.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .shelf import Shelf, ShelfError, UnionFind, orbits

MAX_SEMIGROUP = 10**6

Map = tuple[int, ...]


def compose(t: Map, u: Map) -> Map:
    return tuple(t[x] for x in u)


def is_endomorphism(S: Shelf, t: Sequence[int]) -> bool:
    T = S.table
    return all(t[T[a][b]] == T[t[a]][t[b]] for a in range(S.size) for b in range(S.size))


@dataclass(frozen=True)
class Translation:
    map: Map
    word: tuple[int, ...]

    def __call__(self, b: int) -> int:
        return self.map[b]

    @property
    def is_idempotent(self) -> bool:
        return compose(self.map, self.map) == self.map

    @property
    def is_bijective(self) -> bool:
        return len(set(self.map)) == len(self.map)


@dataclass(frozen=True)
class TranslationSemigroup:
    elements: tuple[Translation, ...]
    generators: tuple[int, ...]            # generators[a] = index of τ_a
    right: tuple[tuple[int, ...], ...]     # right[t][a] = index of t∘τ_a
    left: tuple[tuple[int, ...], ...]      # left[t][a]  = index of τ_a∘t

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, m: Sequence[int]) -> int:
        return self._lookup[tuple(m)]

    @property
    def _lookup(self) -> dict[Map, int]:
        cache = self.__dict__.get("_lookup_cache")
        if cache is None:
            cache = {e.map: i for i, e in enumerate(self.elements)}
            object.__setattr__(self, "_lookup_cache", cache)
        return cache

    def product(self, i: int, j: int) -> int:
        """Index of elements[i] ∘ elements[j]."""
        return self.index(compose(self.elements[i].map, self.elements[j].map))


def translation_semigroup(S: Shelf, cap: int = MAX_SEMIGROUP) -> TranslationSemigroup:
    """Breadth-first closure of {τ_a} under right composition with the τ_a."""
    n = S.size
    gens = [tuple(S.table[a]) for a in range(n)]
    index: dict[Map, int] = {}
    elements: list[Translation] = []
    queue: deque[int] = deque()

    def add(m: Map, word: tuple[int, ...]) -> int:
        i = index.get(m)
        if i is None:
            i = len(elements)
            if i >= cap:
                raise ShelfError(f"translation semigroup exceeds {cap} elements")
            index[m] = i
            elements.append(Translation(m, word))
            queue.append(i)
        return i

    gen_idx = tuple(add(g, (a,)) for a, g in enumerate(gens))
    right: dict[int, tuple[int, ...]] = {}
    while queue:
        i = queue.popleft()
        t = elements[i]
        right[i] = tuple(add(compose(t.map, g), t.word + (a,)) for a, g in enumerate(gens))
    left = tuple(tuple(index[compose(g, e.map)] for g in gens) for e in elements)
    sg = TranslationSemigroup(tuple(elements), gen_idx, tuple(right[i] for i in range(len(elements))), left)
    object.__setattr__(sg, "_lookup_cache", index)
    return sg


# -- formal combinations ---------------------------------------------------------------


@dataclass(frozen=True)
class FormalCombination:
    """Finite ℚ-linear combination of semigroup elements, as (coefficient, index) pairs."""

    terms: tuple[tuple[Fraction, int], ...]

    @classmethod
    def from_dict(cls, d: dict[int, Fraction]) -> "FormalCombination":
        return cls(tuple((Fraction(c), i) for i, c in sorted(d.items()) if c))

    @classmethod
    def average(cls, support: Sequence[int]) -> "FormalCombination":
        w = Fraction(1, len(support))
        return cls(tuple((w, i) for i in sorted(support)))

    def as_dict(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for c, i in self.terms:
            out[i] = out.get(i, Fraction(0)) + c
        return {i: c for i, c in out.items() if c}

    def augmentation(self) -> Fraction:
        return sum((c for c, _ in self.terms), Fraction(0))

    def right_mul(self, sg: TranslationSemigroup, a: int) -> "FormalCombination":
        """P∘τ_a."""
        out: dict[int, Fraction] = {}
        for c, i in self.terms:
            j = sg.right[i][a]
            out[j] = out.get(j, Fraction(0)) + c
        return FormalCombination.from_dict(out)

    def left_mul(self, sg: TranslationSemigroup, a: int) -> "FormalCombination":
        """τ_a∘P."""
        out: dict[int, Fraction] = {}
        for c, i in self.terms:
            j = sg.left[i][a]
            out[j] = out.get(j, Fraction(0)) + c
        return FormalCombination.from_dict(out)

    def to_json(self) -> list[list]:
        return [[_frac(c), i] for c, i in self.terms]


def _frac(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


# -- retracts ------------------------------------------------------------------------------


@dataclass(frozen=True)
class RetractReport:
    retraction: Translation
    carrier: tuple[int, ...]
    is_rack: bool


def idempotent_retracts(S: Shelf, sg: TranslationSemigroup | None = None) -> list[RetractReport]:
    sg = sg or translation_semigroup(S)
    out = []
    for t in sg.elements:
        if t.is_idempotent:
            carrier = tuple(sorted(set(t.map)))
            out.append(RetractReport(t, carrier, S.subshelf(carrier).is_rack()))
    return out


def idempotent_power(t: Map) -> tuple[int, Map]:
    """Smallest j >= 1 with t^j idempotent, and t^j (always exists for maps of a finite set)."""
    j, p = 1, t
    while compose(p, p) != p:
        p = compose(p, t)
        j += 1
    return j, p


def rack_retract(S: Shelf) -> tuple[Shelf, tuple[int, ...]]:
    """A minimal rack retract and its carrier (indices in S).

    Repeatedly retracts along the idempotent power of the first non-bijective
    left translation.
    """
    carrier = tuple(range(S.size))
    cur = S
    while not cur.is_rack():
        a = next(x for x in range(cur.size) if len(set(cur.table[x])) < cur.size)
        _, t = idempotent_power(tuple(cur.table[a]))
        keep = sorted(set(t))
        carrier = tuple(carrier[i] for i in keep)
        cur = cur.subshelf(keep)
    return cur, carrier


def rack_type(S: Shelf) -> Shelf:
    return rack_retract(S)[0]


def reduce(S: Shelf) -> tuple[Shelf, tuple[int, ...]]:
    """Quotient by equality of table columns, with the projection S → reduced."""
    n = S.size
    cols: dict[tuple[int, ...], int] = {}
    proj = []
    reps = []
    for b in range(n):
        col = tuple(S.table[c][b] for c in range(n))
        if col not in cols:
            cols[col] = len(reps)
            reps.append(b)
        proj.append(cols[col])
    rows = [[proj[S.table[a][b]] for b in reps] for a in reps]
    for a in range(n):
        for b in range(n):
            if proj[S.table[a][b]] != rows[proj[a]][proj[b]]:
                raise AssertionError(f"reduced operation not well defined at ({a}, {b})")
    return Shelf.from_rows(rows, [S.label(b) for b in reps]), tuple(proj)


def iterated_reduce(S: Shelf) -> tuple[Shelf, tuple[int, ...], list[int]]:
    """Reduce until the size stabilizes; returns the shelf, composed projection and size trace."""
    proj = tuple(range(S.size))
    trace = [S.size]
    cur = S
    while True:
        nxt, p = reduce(cur)
        if nxt.size == cur.size:
            return cur, proj, trace
        proj = tuple(p[x] for x in proj)
        cur = nxt
        trace.append(cur.size)


# -- semi-projective families ---------------------------------------------------------


def stable_core(sg: TranslationSemigroup) -> list[int]:
    """Greatest C ⊆ T with t∘τ_a ∈ C and t ∈ C∘τ_a for every t ∈ C and every a."""
    ngen = len(sg.generators)
    alive = [True] * len(sg)
    changed = True
    while changed:
        changed = False
        hit = [[False] * ngen for _ in range(len(sg))]
        for i in range(len(sg)):
            if alive[i]:
                for a in range(ngen):
                    hit[sg.right[i][a]][a] = True
        for i in range(len(sg)):
            if alive[i] and not (
                all(alive[sg.right[i][a]] for a in range(ngen)) and all(hit[i])
            ):
                alive[i] = False
                changed = True
    return [i for i in range(len(sg)) if alive[i]]


def atomic_families(S: Shelf, sg: TranslationSemigroup | None = None) -> list[tuple[int, ...]]:
    sg = sg or translation_semigroup(S)
    core = stable_core(sg)
    if not core:
        return []
    pos = {t: k for k, t in enumerate(core)}
    uf = UnionFind(len(core))
    for t in core:
        for a in range(len(sg.generators)):
            uf.union(pos[t], pos[sg.right[t][a]])
    ids = uf.classes()
    fams: dict[int, list[int]] = {}
    for t in core:
        fams.setdefault(ids[pos[t]], []).append(t)
    return [tuple(f) for _, f in sorted(fams.items())]


def is_projective(sg: TranslationSemigroup, family: Sequence[int]) -> bool:
    fam = set(family)
    return all({sg.left[t][a] for t in fam} == fam for a in range(len(sg.generators)))


def is_semi_projective(sg: TranslationSemigroup, family: Sequence[int]) -> bool:
    fam = set(family)
    return bool(fam) and all({sg.right[t][a] for t in fam} == fam for a in range(len(sg.generators)))


@dataclass(frozen=True)
class ProjectorReport:
    option: str
    families: tuple[tuple[int, ...], ...]
    projective_family: tuple[int, ...] | None
    strong_projector: FormalCombination | None
    invertibility_requirement: int | None

    def to_json(self) -> dict:
        return {
            "option": self.option,
            "atomic_families": [list(f) for f in self.families],
            "projective_family": list(self.projective_family) if self.projective_family else None,
            "strong_projector": self.strong_projector.to_json() if self.strong_projector else None,
            "invertibility_requirement": self.invertibility_requirement,
        }


def classify_projectors(S: Shelf, sg: TranslationSemigroup | None = None) -> ProjectorReport:
    """Option A (no semi-projective family), B (several, none projective) or C (exactly one)."""
    sg = sg or translation_semigroup(S)
    fams = atomic_families(S, sg)
    if not fams:
        return ProjectorReport("A", (), None, None, None)
    if len(fams) == 1:
        fam = fams[0]
        if not is_projective(sg, fam):
            raise AssertionError("unique semi-projective family is not projective")
        return ProjectorReport("C", tuple(fams), fam, FormalCombination.average(fam), len(fam))
    if any(is_projective(sg, f) for f in fams):
        raise AssertionError("projective family coexists with other semi-projective families")
    return ProjectorReport("B", tuple(fams), None, None, None)


def strong_projector(S: Shelf, sg: TranslationSemigroup | None = None) -> FormalCombination:
    rep = classify_projectors(S, sg)
    if rep.strong_projector is None:
        raise ShelfError(f"no strong projector: option {rep.option}")
    return rep.strong_projector


def retraction_orbit_map(S: Shelf, retract: RetractReport) -> dict[int, int]:
    """Orbit of S ↦ orbit of the retract, through the retraction (raises if not a function)."""
    so = orbits(S)
    sub = S.subshelf(retract.carrier)
    ro = orbits(sub)
    pos = {e: i for i, e in enumerate(retract.carrier)}
    out: dict[int, int] = {}
    for x in range(S.size):
        o = so.orbit_of[x]
        target = ro.orbit_of[pos[retract.retraction.map[x]]]
        if out.setdefault(o, target) != target:
            raise AssertionError("retraction does not respect orbits")
    return out
