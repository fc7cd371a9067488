import itertools
from fractions import Fraction

import pytest

from shelfcohom.shelf import find_isomorphism, make_cyclic, make_e_shelf, make_laver, make_named, orbits, EShelfParams
from shelfcohom.translations import (
    FormalCombination,
    atomic_families,
    classify_projectors,
    compose,
    idempotent_power,
    idempotent_retracts,
    is_endomorphism,
    iterated_reduce,
    rack_retract,
    rack_type,
    reduce,
    retraction_orbit_map,
    stable_core,
    strong_projector,
    translation_semigroup,
)


def brute_semigroup(S):
    """All compositions of left translations, by saturating a set of maps."""
    gens = {tuple(r) for r in S.table}
    found = set(gens)
    frontier = set(gens)
    while frontier:
        new = {compose(t, g) for t in frontier for g in gens} | {compose(g, t) for t in frontier for g in gens}
        frontier = new - found
        found |= frontier
    return found


SHELVES = {
    "A1": make_laver(1), "A2": make_laver(2), "A3": make_laver(3),
    "C01": make_cyclic(0, 1), "C03": make_cyclic(0, 3), "C12": make_cyclic(1, 2), "C35": make_cyclic(3, 5),
    "C23": make_cyclic(2, 3),
    "LT2": make_named("left_trivial", 2), "LT3": make_named("left_trivial", 3),
    "RT3": make_named("right_trivial", 3),
    "E": make_e_shelf(EShelfParams.constant(1, 0, 2)),
    "E*": make_e_shelf(EShelfParams.constant(1, 0, 2, starred=True)),
}


@pytest.mark.parametrize("name", SHELVES)
def test_semigroup_matches_brute_force(name):
    S = SHELVES[name]
    sg = translation_semigroup(S)
    assert {e.map for e in sg.elements} == brute_semigroup(S)
    for i, e in enumerate(sg.elements):
        # every recorded word evaluates to its map (rightmost letter acts first)
        m = tuple(range(S.size))
        for a in e.word:
            m = compose(m, S.table[a])
        assert m == e.map
        assert is_endomorphism(S, e.map)
        for a in range(S.size):
            assert sg.elements[sg.right[i][a]].map == compose(e.map, S.table[a])
            assert sg.elements[sg.left[i][a]].map == compose(S.table[a], e.map)


def test_semigroup_sizes():
    # C_{r,m}: θ^(r+m) = θ^r gives r+m-1 elements for r >= 1, m for r = 0
    assert len(translation_semigroup(make_cyclic(3, 5))) == 7
    assert len(translation_semigroup(make_cyclic(0, 3))) == 3
    for r, m in itertools.product(range(1, 4), range(1, 5)):
        assert len(translation_semigroup(make_cyclic(r, m))) == r + m - 1
    assert len(translation_semigroup(make_laver(1))) == 2


def test_idempotent_power():
    t = (1, 2, 3, 4, 2)
    j, p = idempotent_power(t)
    assert compose(p, p) == p
    q = t
    for _ in range(j - 1):
        q = compose(q, t)
    assert q == p
    # no smaller power is idempotent
    q = t
    for _ in range(j - 1):
        assert compose(q, q) != q
        q = compose(q, t)


@pytest.mark.parametrize("name", SHELVES)
def test_rack_retracts_pairwise_isomorphic(name):
    S = SHELVES[name]
    racks = [S.subshelf(r.carrier) for r in idempotent_retracts(S) if r.is_rack]
    R, carrier = rack_retract(S)
    assert R.is_rack()
    assert racks
    for T in racks:
        assert find_isomorphism(T, R) is not None
    assert R.size == min(T.size for T in racks)


@pytest.mark.parametrize("n", range(0, 5))
def test_rack_type_laver(n):
    assert find_isomorphism(rack_type(make_laver(n)), make_cyclic(0, 1)) is not None


@pytest.mark.parametrize("r,m", [(r, m) for r in range(4) for m in range(1, 6)])
def test_rack_type_cyclic(r, m):
    T = rack_type(make_cyclic(r, m))
    assert find_isomorphism(T, make_cyclic(0, m)) is not None


def test_retraction_respects_orbits():
    S = make_cyclic(2, 3)
    for rep in idempotent_retracts(S):
        mapping = retraction_orbit_map(S, rep)
        assert len(set(mapping.values())) == len(mapping)  # bijection on orbits
        assert orbits(S).count == orbits(S.subshelf(rep.carrier)).count


def test_reduce_c35():
    R, proj, trace = iterated_reduce(make_cyclic(3, 5))
    assert trace == [8, 7, 6, 5]
    assert find_isomorphism(R, make_cyclic(0, 5)) is not None
    S = make_cyclic(3, 5)
    for a, b in itertools.product(range(S.size), repeat=2):
        assert proj[S.table[a][b]] == R.table[proj[a]][proj[b]]


def test_reduce_merges_equal_columns():
    S = make_named("left_trivial", 3)  # all columns (0,1,2)
    R, proj = reduce(S)
    assert R.size == 1 and proj == (0, 0, 0)


def test_stable_core_is_greatest_fixed_point():
    for S in SHELVES.values():
        sg = translation_semigroup(S)
        core = set(stable_core(sg))
        ngen = len(sg.generators)
        # brute force over all subsets for small semigroups
        if len(sg) <= 10:
            best = set()
            for bits in range(1, 1 << len(sg)):
                C = {i for i in range(len(sg)) if bits >> i & 1}
                ok = all(sg.right[t][a] in C for t in C for a in range(ngen)) and all(
                    any(sg.right[u][a] == t for u in C) for t in C for a in range(ngen))
                if ok:
                    best |= C
            assert core == best


@pytest.mark.parametrize("name,option", [
    ("A1", "C"), ("A2", "C"), ("A3", "C"), ("C01", "C"), ("C03", "C"), ("C12", "C"), ("C35", "C"),
    ("LT2", "B"), ("LT3", "B"),
])
def test_projector_options(name, option):
    rep = classify_projectors(SHELVES[name])
    assert rep.option == option


def test_strong_projector_properties():
    for name in ("A2", "A3", "C35", "C03"):
        S = SHELVES[name]
        sg = translation_semigroup(S)
        P = strong_projector(S, sg)
        assert P.augmentation() == 1
        for a in range(S.size):
            assert P.right_mul(sg, a).as_dict() == P.as_dict()
            assert P.left_mul(sg, a).as_dict() == P.as_dict()
    with pytest.raises(ValueError):
        strong_projector(SHELVES["LT2"])


def test_a3_projector_is_tau7():
    S = make_laver(3)
    sg = translation_semigroup(S)
    rep = classify_projectors(S, sg)
    (fam,) = rep.families
    assert [sg.elements[i].map for i in fam] == [S.table[6]]
    assert rep.invertibility_requirement == 1


def test_formal_combination_json():
    P = FormalCombination.average([3, 1])
    assert P.to_json() == [["1/2", 1], ["1/2", 3]]
    assert P.augmentation() == Fraction(1)


def test_atomic_families_partition_core():
    for S in SHELVES.values():
        sg = translation_semigroup(S)
        fams = atomic_families(S, sg)
        flat = sorted(i for f in fams for i in f)
        assert flat == sorted(stable_core(sg))
