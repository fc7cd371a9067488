import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shelfcohom.shelf import (
    EShelfParams,
    Shelf,
    ShelfError,
    UnionFind,
    closure,
    find_isomorphism,
    is_homomorphism,
    laver_rows,
    make_cyclic,
    make_e_shelf,
    make_laver,
    make_named,
    orbits,
    parse,
    sd_witness,
    serialize,
    validate,
)

from oracles import laver_by_recursion, laver_by_search

# reference A_3 table, 1-based
A3_PRINTED = [
    [2, 4, 6, 8, 2, 4, 6, 8],
    [3, 4, 7, 8, 3, 4, 7, 8],
    [4, 8, 4, 8, 4, 8, 4, 8],
    [5, 6, 7, 8, 5, 6, 7, 8],
    [6, 8, 6, 8, 6, 8, 6, 8],
    [7, 8, 7, 8, 7, 8, 7, 8],
    [8, 8, 8, 8, 8, 8, 8, 8],
    [1, 2, 3, 4, 5, 6, 7, 8],
]
# every row of C_{3,5}, in labels
C35_ROW = [-2, -1, 0, 1, 2, 3, 4, 0]


def test_a3_matches_printed_table():
    S = make_laver(3)
    assert [[x + 1 for x in row] for row in S.table] == A3_PRINTED
    assert [S.label(i) for i in range(8)] == [str(i) for i in range(1, 9)]


def test_c35_matches_printed_table():
    S = make_cyclic(3, 5)
    for row in S.table:
        assert [int(S.label(x)) for x in row] == C35_ROW


@pytest.mark.parametrize("n", range(0, 7))
def test_laver_matches_recursive_oracle(n):
    assert (laver_rows(n) + 1).tolist() == laver_by_recursion(n)


@pytest.mark.parametrize("n", [1, 2])
def test_laver_is_the_unique_such_shelf(n):
    tables = laver_by_search(n)
    assert tables == [[[x + 1 for x in r] for r in make_laver(n).table]]


@pytest.mark.parametrize("n", range(0, 8))
def test_laver_properties(n):
    S = make_laver(n)
    v = validate(S)
    assert v.is_shelf
    assert v.is_monogenic and 0 in v.generators  # element 1 generates
    N = S.size
    assert S.table[N - 1] == tuple(range(N))
    assert all(S.table[a][0] == (a + 1) % N for a in range(N))


def test_laver_too_large():
    with pytest.raises(ShelfError):
        laver_rows(99)


@pytest.mark.parametrize("r,m", [(r, m) for r in range(4) for m in range(1, 6)])
def test_cyclic_shelves(r, m):
    S = make_cyclic(r, m)
    v = validate(S)
    assert v.is_shelf and v.is_monogenic
    assert v.is_rack == (r == 0)
    assert orbits(S).count == 1


def test_named_shelves():
    lt = make_named("left_trivial", 3)   # a▷b = a
    rt = make_named("right_trivial", 3)  # a▷b = b
    assert lt.table == ((0, 0, 0), (1, 1, 1), (2, 2, 2))
    assert validate(lt).is_shelf and not validate(lt).is_rack
    assert validate(rt).is_quandle
    assert orbits(rt).count == 3 and orbits(lt).count == 1


def test_sd_witness_lexicographic():
    # a▷b = (b+1) mod 3 for a = 0 only: breaks self-distributivity
    S = Shelf.from_rows([[1, 2, 0], [0, 1, 2], [0, 1, 2]])
    w = sd_witness(S)
    a, b, c = w
    T = S.table
    assert T[a][T[b][c]] != T[T[a][b]][T[a][c]]
    brute = next(
        (x, y, z) for x in range(3) for y in range(3) for z in range(3)
        if T[x][T[y][z]] != T[T[x][y]][T[x][z]]
    )
    assert w == brute
    assert not validate(S).is_shelf


def test_e_shelf_sizes_and_monogenic():
    ns = make_e_shelf(EShelfParams.constant(1, 0, 2, starred=False))
    st_ = make_e_shelf(EShelfParams.constant(1, 0, 2, starred=True))
    assert ns.size == 5 and st_.size == 4
    for S in (ns, st_):
        v = validate(S)
        assert v.is_shelf and v.is_monogenic
    assert ns.label(validate(ns).generators[0]) == "(1,-1)"


@pytest.mark.parametrize("r,m", [(0, 1), (1, 2), (2, 3), (1, 4)])
def test_e_shelf_with_n0_is_cyclic(r, m):
    starred = make_e_shelf(EShelfParams.constant(0, r, m, starred=True))
    plain = make_e_shelf(EShelfParams.constant(0, r, m, starred=False))
    assert find_isomorphism(starred, make_cyclic(r, m)) is not None
    assert find_isomorphism(plain, make_cyclic(r + 1, m)) is not None


def test_e_shelf_condition_violation():
    # for A_1: 1▷1 = 2, so b = 2 (index 1) and a = 1 (index 0); μ(2) ∤ μ(1) fails
    p = EShelfParams(1, (0, 0), (1, 2))
    assert p.violation() is not None
    with pytest.raises(ShelfError):
        make_e_shelf(p)


def test_orbits_union_find_oracle():
    S = make_named("right_trivial", 4)
    parts = orbits(S)
    # brute force: transitive closure of a ~ b▷a
    n = S.size
    reach = [[i == j for j in range(n)] for i in range(n)]
    for a in range(n):
        for b in range(n):
            c = S.table[b][a]
            reach[a][c] = reach[c][a] = True
    for k in range(n):
        for i in range(n):
            for j in range(n):
                reach[i][j] = reach[i][j] or (reach[i][k] and reach[k][j])
    for i in range(n):
        for j in range(n):
            assert (parts.orbit_of[i] == parts.orbit_of[j]) == reach[i][j]


def test_union_find_classes_by_first_appearance():
    uf = UnionFind(6)
    uf.union(4, 5)
    uf.union(1, 3)
    assert uf.classes() == [0, 1, 2, 1, 3, 3]


def test_closure_is_closed():
    S = make_laver(3)
    c = closure(S, [6])
    assert all(S.table[x][y] in c for x in c for y in c)


def test_serialize_roundtrip():
    S = make_laver(2)
    assert serialize(make_laver(1)) == "2\n1 1\n0 1\n"
    T = parse(serialize(S, with_labels=True))
    assert T == S and T.labels == S.labels
    assert parse("# a comment\n2\n1 1\n\n0 1\n") == make_laver(1)


@pytest.mark.parametrize("text", ["", "x\n", "2\n0 1\n", "2\n0 1\n0 2\n", "2\n0\n0 1\n", "2\n0 a\n0 1\n"])
def test_parse_rejects(text):
    with pytest.raises(ShelfError):
        parse(text)


def test_op_range():
    with pytest.raises(IndexError):
        make_laver(1).op(2, 0)


@settings(max_examples=30, deadline=None)
@given(st.permutations(list(range(6))))
def test_isomorphism_recovers_relabelling(perm):
    S = make_cyclic(2, 4)
    inv = [0] * 6
    for i, p in enumerate(perm):
        inv[p] = i
    rows = [[perm[S.table[inv[a]][inv[b]]] for b in range(6)] for a in range(6)]
    T = Shelf.from_rows(rows)
    f = find_isomorphism(S, T)
    assert f is not None and is_homomorphism(S, T, f) and len(set(f)) == 6


def test_non_isomorphic():
    assert find_isomorphism(make_cyclic(1, 3), make_cyclic(0, 4)) is None
    assert find_isomorphism(make_laver(2), make_cyclic(2, 2)) is None
