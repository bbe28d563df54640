from fractions import Fraction

import pytest

from conftest import random_factorized_delta, random_inclusion
from mfd.core import validate_inclusion
from mfd.distortion import (DistortionMatrix, as_distortion,
                            check_cycle_condition, check_extension_condition,
                            check_extremality, extend_to_complete,
                            extend_to_groupoid, factorize,
                            square_groupoid_potential)
from mfd.errors import (CycleViolation, ExtensionConditionViolation,
                        MissingEntry, NotGroupoidHom)


def F(p, q=1):
    return Fraction(p, q)


def brute_force_cycle_condition(delta, graph):
    """Oracle: enumerate every simple cycle by DFS and compare products."""
    adj = {}
    for i, j in graph.edges:
        adj.setdefault(("row", i), []).append(("col", j))
        adj.setdefault(("col", j), []).append(("row", i))

    cycles = []

    def walk(path, seen):
        v = path[-1]
        for w in adj[v]:
            if w == path[0] and len(path) >= 4:
                cycles.append(tuple(path))
            elif w not in seen:
                walk(path + [w], seen | {w})

    for start in sorted(adj):
        walk([start], {start})

    for cyc in cycles:
        left = right = F(1)
        n = len(cyc)
        for t in range(n):
            u, w = cyc[t], cyc[(t + 1) % n]
            if u[0] == "row":
                left *= F(delta.get(u[1], w[1]))
            else:
                right *= F(delta.get(w[1], u[1]))
        if left != right:
            return False
    return True


def test_as_distortion_forms():
    incl = validate_inclusion([[1, 1], [0, 1]])
    from_rows = as_distortion([[2, 1], [None, 3]], incl.graph)
    from_dict = as_distortion({(0, 0): 2, (0, 1): 1, (1, 1): 3}, incl.graph)
    assert from_rows.entries == from_dict.entries
    assert from_rows.support == [(0, 0), (0, 1), (1, 1)]
    assert from_rows.rows() == [[2, 1], [None, 3]]
    assert from_rows.get(0, 1) == 1
    assert not from_rows.has(1, 0)
    with pytest.raises(MissingEntry):
        from_rows.get(1, 0)


def test_as_distortion_rejects_bad_values():
    incl = validate_inclusion([[1, 1]])
    with pytest.raises(ValueError):
        as_distortion([[1, 0]], incl.graph)
    with pytest.raises(ValueError):
        as_distortion([[1, -2]], incl.graph)
    with pytest.raises(MissingEntry):
        as_distortion([[1, None]], incl.graph)
    with pytest.raises(ValueError):
        as_distortion([[1, 1], [1, 1]], incl.graph)
    with pytest.raises(TypeError):
        as_distortion({(0, 0): 1})


def test_total_matrix_detected():
    dm = as_distortion([[1, 2], [3, 4]])
    assert dm.total == ((1, 2), (3, 4))
    assert dm.get(0, 1) == 2


def test_cycle_condition_tree_support_always_holds(a4_incl, a4_delta):
    assert check_cycle_condition(a4_delta, a4_incl.graph)


def test_cycle_condition_violation():
    incl = validate_inclusion([[1, 1], [1, 2]])
    delta = as_distortion([[1, 1], [1, 2]], incl.graph)
    check = check_cycle_condition(delta, incl.graph)
    assert not check
    assert check.witness is not None
    assert check.left != check.right
    with pytest.raises(CycleViolation):
        factorize(delta, incl.graph)


def test_cycle_condition_matches_brute_force(rng):
    agree_true = agree_false = 0
    for _ in range(60):
        incl = random_inclusion(rng, max_a=4, max_b=4)
        if rng.random() < 0.5:
            delta, _, _ = random_factorized_delta(rng, incl)
        else:
            rows = [[F(rng.randint(1, 5), rng.randint(1, 5))
                     if incl.D[i][j] != 0 else None
                     for j in range(incl.b)] for i in range(incl.a)]
            delta = as_distortion(rows, incl.graph)
        fast = bool(check_cycle_condition(delta, incl.graph))
        slow = brute_force_cycle_condition(delta, incl.graph)
        assert fast == slow
        if fast:
            agree_true += 1
        else:
            agree_false += 1
    assert agree_true >= 5 and agree_false >= 5


def test_factorize_gauge_and_reconstruction(rng):
    for _ in range(40):
        incl = random_inclusion(rng)
        delta, _, _ = random_factorized_delta(rng, incl)
        eta, xi = factorize(delta, incl.graph)
        assert eta[0] == 1
        for (i, j) in incl.graph.edges:
            assert Fraction(xi[j], 1) / eta[i] == delta.get(i, j)


def test_extend_a4(a4_incl, a4_delta):
    assert a4_delta.total == ((2, 1), (2, 1))
    assert a4_delta.eta == (1, 1)
    assert a4_delta.xi == (2, 1)
    # the completed entry respects the product identity
    assert a4_delta.get(0, 1) * a4_delta.get(1, 0) == \
        a4_delta.get(0, 0) * a4_delta.get(1, 1)


def test_extend_unique(rng):
    # any total cycle-consistent matrix agreeing on support equals the extension
    for _ in range(20):
        incl = random_inclusion(rng, max_a=4, max_b=4)
        delta, eta, xi = random_factorized_delta(rng, incl)
        ext = extend_to_complete(delta, incl.graph)
        for i in range(incl.a):
            for j in range(incl.b):
                assert ext.get(i, j) == F(xi[j]) / F(eta[i])


def test_extension_condition():
    assert check_extension_condition([[1, 2], [3, 6]]) is None
    assert check_extension_condition([[1, 2], [3, 7]]) == (0, 0, 1, 1)


def test_groupoid_hom_a4(a4_delta):
    hom = extend_to_groupoid(a4_delta)
    assert hom.n == 4
    v = hom.values
    # even-even block: delta_00 / delta_10 and its inverse
    assert v[0][0] == 1 and v[1][1] == 1
    assert v[0][1] == 1 and v[1][0] == 1
    # odd-odd block: delta_01 / delta_00 and its inverse
    assert v[2][3] == F(1, 2) and v[3][2] == 2
    # cross blocks are delta and its reciprocals
    assert v[0][2] == 2 and v[2][0] == F(1, 2)
    assert v[1][3] == 1 and v[3][1] == 1
    assert hom.potential == v[0]


def test_groupoid_hom_is_cocycle(a4_delta):
    v = extend_to_groupoid(a4_delta).values
    n = len(v)
    for i in range(n):
        assert v[i][i] == 1
        for j in range(n):
            assert v[i][j] * v[j][i] == 1
            for k in range(n):
                assert v[i][j] * v[j][k] == v[i][k]


def test_groupoid_hom_requires_total():
    dm = DistortionMatrix(a=1, b=2, entries={(0, 0): 1})
    with pytest.raises(MissingEntry):
        extend_to_groupoid(dm)
    with pytest.raises(MissingEntry):
        extend_to_groupoid([[1, None]])


def test_groupoid_hom_rejects_inconsistent():
    with pytest.raises(ExtensionConditionViolation):
        extend_to_groupoid([[1, 2], [3, 7]])


def test_square_groupoid_potential(a4_delta):
    hom = extend_to_groupoid(a4_delta)
    pot = square_groupoid_potential(hom)
    assert pot == (1, 1, 2, 1)
    with pytest.raises(NotGroupoidHom):
        square_groupoid_potential([[1, 2], [3, 1]])
    with pytest.raises(ValueError):
        square_groupoid_potential([[1, 2]])


def test_equivalences_on_random_data(rng):
    # cycle condition, factorization, extension, groupoid hom stand or fall
    # together
    for _ in range(30):
        incl = random_inclusion(rng, max_a=4, max_b=4)
        delta, _, _ = random_factorized_delta(rng, incl)
        assert check_cycle_condition(delta, incl.graph)
        ext = extend_to_complete(delta, incl.graph)
        assert check_extension_condition(ext.rows()) is None
        hom = extend_to_groupoid(ext)
        assert square_groupoid_potential(hom) == hom.values[0]


def test_extremality(a4_incl, a4_delta):
    rep = check_extremality(a4_incl, a4_delta)
    assert rep.extremal
    assert rep.jones_equals_statistical and rep.cycle_condition_holds

    jones_differs = validate_inclusion([[1, 1]], Delta=[[1, 2]])
    delta = as_distortion([[1, 2]], jones_differs.graph)
    rep2 = check_extremality(jones_differs, delta)
    assert not rep2.extremal
    assert not rep2.jones_equals_statistical
    assert rep2.cycle_condition_holds

    square = validate_inclusion([[1, 1], [1, 2]])
    bad = as_distortion([[1, 1], [1, 2]], square.graph)
    rep3 = check_extremality(square, bad)
    assert not rep3.extremal
    assert rep3.witness is not None
