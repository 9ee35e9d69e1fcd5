import pytest
from hypothesis import given, settings, strategies as st

import oracles
from starsheaf.gset import (
    ActionError,
    EquivariantMap,
    GAction,
    IdOutOfRange,
    NoIdentity,
    NotAssociative,
    NotEquivariant,
    NotLatinSquare,
    coset_space,
    cyclic_group,
    equivariant_maps,
    fixed_points,
    identity_map,
    injective_on_orbits,
    is_normal,
    normal_subgroups,
    orbits,
    quotient,
    regular_action,
    small_groups,
    subgroup_generated,
    subgroups,
    symmetric_group,
    trivial_action,
    trivial_subgroup,
    validate_group,
    whole_group,
)

GROUPS = dict(small_groups())

# subgroup and normal-subgroup counts of the groups of order <= 8
SUBGROUP_COUNTS = {
    "C1": (1, 1), "C2": (2, 2), "C3": (2, 2), "C4": (3, 3), "C2xC2": (5, 5), "C5": (2, 2),
    "C6": (4, 4), "S3": (6, 3), "C7": (2, 2), "C8": (4, 4), "C2xC4": (8, 8),
    "C2xC2xC2": (16, 16), "D4": (10, 6), "Q8": (6, 6),
}


def swap_xy():
    G = cyclic_group(2)
    return GAction(G, ["x", "y", "z"], lambda g, p: {"x": "y", "y": "x"}.get(p, p) if g else p)


def test_validate_group_examples():
    assert validate_group([[0]]).order == 1
    assert validate_group([[0, 1], [1, 0]]).order == 2
    with pytest.raises(NotLatinSquare) as e:
        validate_group([[0, 1], [1, 1]])
    assert "row 1" in str(e.value)


def test_validate_group_other_errors():
    with pytest.raises(NoIdentity):
        validate_group([[1, 0], [0, 1]])
    # Latin, has identity 0, not associative
    bad = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(NotAssociative):
        validate_group(bad)
    with pytest.raises(IdOutOfRange):
        validate_group([[0, 7], [7, 0]])


def test_small_groups_counts_match_oracle():
    for name, G in small_groups():
        subs, normals = SUBGROUP_COUNTS[name]
        assert len(subgroups(G)) == subs, name
        assert len(normal_subgroups(G)) == normals, name
        assert sorted(map(sorted, oracles.subgroups(G))) == sorted(sorted(H.elements) for H in subgroups(G))


def test_subgroup_generated():
    C2 = cyclic_group(2)
    assert subgroup_generated(C2, []).elements == (0,)
    assert subgroup_generated(C2, [1]).elements == (0, 1)
    S3 = symmetric_group(3)
    transpositions = [g for g in S3.elements if g and S3.mul(g, g) == 0]
    assert len(transpositions) == 3
    H = subgroup_generated(S3, [transpositions[0]])
    assert len(H) == 2
    assert not is_normal(S3, H)
    with pytest.raises(IdOutOfRange):
        subgroup_generated(C2, [5])


def test_normal_trivial_and_whole():
    for G in GROUPS.values():
        assert is_normal(G, trivial_subgroup(G)) and is_normal(G, whole_group(G))


def test_orbits_examples():
    C2 = cyclic_group(2)
    assert orbits(trivial_action(C2, ["a", "b"])) == [("a",), ("b",)]
    assert orbits(regular_action(C2)) == [(0, 1)]
    assert orbits(swap_xy()) == [("x", "y"), ("z",)]


def test_fixed_points_examples():
    C2 = cyclic_group(2)
    Y = swap_xy()
    assert fixed_points(Y, trivial_subgroup(C2).elements) == ("x", "y", "z")
    assert fixed_points(regular_action(C2), C2.elements) == ()
    assert fixed_points(Y, C2.elements) == ("z",)


def test_quotient_examples():
    C2 = cyclic_group(2)
    Q, q = quotient(trivial_action(C2, [1, 2, 3]))
    assert Q.points == (1, 2, 3) and all(q(x) == x for x in Q.points)
    assert len(quotient(regular_action(C2))[0]) == 1
    Q, q = quotient(swap_xy())
    assert Q.points == ("x", "z") and q("y") == "x"


def test_injective_on_orbits_examples():
    C2 = cyclic_group(2)
    R = regular_action(C2)
    assert injective_on_orbits(identity_map(R))
    Z = trivial_action(C2, ["z"])
    assert not injective_on_orbits(EquivariantMap(R, Z, {0: "z", 1: "z"}))
    T = trivial_action(C2, ["a", "b"])
    assert injective_on_orbits(EquivariantMap(T, Z, {"a": "z", "b": "z"}))


def test_equivariance_checked():
    C2 = cyclic_group(2)
    with pytest.raises(NotEquivariant):
        EquivariantMap(trivial_action(C2, ["a"]), regular_action(C2), {"a": 0})


def test_action_axioms_checked():
    C2 = cyclic_group(2)
    with pytest.raises(ActionError):
        GAction(C2, ["a", "b"], lambda g, x: "a")


def test_from_images_extends_generators():
    G = GROUPS["C4"]
    X = GAction.from_images(G, [0, 1, 2, 3], {1: [1, 2, 3, 0]})
    assert X == regular_action(G)
    with pytest.raises(ActionError):
        GAction.from_images(G, [0, 1], {2: [1, 0]})  # 2 does not generate C4


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_equivariant_map_counts_match_brute_force(name):
    G = GROUPS[name]
    subs = subgroups(G)
    X = coset_space(G, subs[len(subs) // 2])
    Y = coset_space(G, subs[0])
    got = sum(1 for _ in equivariant_maps(X, Y))
    # |Hom(G/H, G/K)| = |(G/K)^H|
    assert got == len(fixed_points(Y, subs[len(subs) // 2].elements))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(GROUPS)), st.data())
def test_orbit_stabilizer_on_cosets(name, data):
    G = GROUPS[name]
    H = data.draw(st.sampled_from(subgroups(G)))
    X = coset_space(G, H)
    assert len(X) * len(H) == G.order
    for x in X.points:
        assert len(X.orbit(x)) * len(X.stabilizer(x)) == G.order
    assert len(fixed_points(X, H.elements)) >= 1
