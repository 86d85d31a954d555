"""Isoclinism: commutator pairings, the decision procedure with witnesses,
insensitivity to abelian factors, and the subgroup correspondence."""

from __future__ import annotations

import pytest

from wreathcoh.groups import (
    BUDGET_EXHAUSTED,
    CapExceededError,
    CyclicGroup,
    GroupError,
    builtin_catalog,
    builtin_group,
    centralizer_bruteforce,
    center,
    direct_product,
    elementary_abelian,
    quaternion_group,
    subgroup_as_group,
)
from wreathcoh.isoclinism import (
    ISOCLINIC,
    NOT_ISOCLINIC,
    _invariant_filter,
    commutator_pairing,
    hall_correspondence_spotcheck,
    is_isoclinic,
    isoclinic_to_abelian_extension,
)
from wreathcoh.wreath import make_iterated


def test_pairing_abelian_is_trivial():
    P = commutator_pairing(elementary_abelian(3, 2))
    assert P.quotient_group.order == 1
    assert P.pairing == ((P.group.identity,),)


@pytest.mark.parametrize("name", ["dihedral:8", "quaternion8"])
def test_pairing_extraspecial_pattern(name):
    # Both order-8 nonabelian groups pair nontrivially exactly on the six
    # off-diagonal pairs of nontrivial cosets; this shared table is the
    # content of their isoclinism.
    G = builtin_group(name)
    P = commutator_pairing(G)
    q = P.quotient_group.order
    assert q == 4
    ident = G.identity
    nontrivial = 0
    for a in range(q):
        for b in range(q):
            value = P.pairing[a][b]
            if a == b or P.quotient_group.identity in (a, b):
                assert value == ident
            else:
                assert value != ident
                nontrivial += 1
    assert nontrivial == 6


def test_pairing_well_defined_small_groups():
    # constructor verifies constancy on center cosets for order <= 512
    for G in builtin_catalog(16):
        commutator_pairing(G)
    commutator_pairing(make_iterated(3, 2).materialize())


def test_reflexive_identity_witness():
    d8 = builtin_group("dihedral:8")
    res = is_isoclinic(d8, d8)
    assert res.status == ISOCLINIC
    assert res.witness.quotient_map == tuple(range(4))
    assert res.witness.verify()


def test_symmetry_and_transitivity():
    d8 = builtin_group("dihedral:8")
    q8 = quaternion_group()
    d8xc2 = direct_product([d8, CyclicGroup(2)])
    groups = [d8, q8, d8xc2]
    verdicts = {}
    for i, G in enumerate(groups):
        for j, H in enumerate(groups):
            verdicts[(i, j)] = is_isoclinic(G, H).status == ISOCLINIC
    for i in range(3):
        assert verdicts[(i, i)]
        for j in range(3):
            assert verdicts[(i, j)] == verdicts[(j, i)]
    for i in range(3):
        for j in range(3):
            for k in range(3):
                if verdicts[(i, j)] and verdicts[(j, k)]:
                    assert verdicts[(i, k)]


def test_witness_implies_order_invariants():
    d8 = builtin_group("dihedral:8")
    q8 = quaternion_group()
    res = is_isoclinic(d8, q8)
    assert res.status == ISOCLINIC
    w = res.witness
    assert w.pairing1.quotient_group.order == w.pairing2.quotient_group.order
    assert w.pairing1.derived.order == w.pairing2.derived.order
    assert w.verify()


def test_not_isoclinic_on_invariant_mismatch():
    res = is_isoclinic(builtin_group("dihedral:8"), elementary_abelian(2, 3))
    assert res.status == NOT_ISOCLINIC
    assert res.witness is None


def test_abelian_groups_all_isoclinic():
    assert is_isoclinic(CyclicGroup(4), elementary_abelian(2, 2)).status == ISOCLINIC
    assert is_isoclinic(CyclicGroup(9), CyclicGroup(15)).status == ISOCLINIC


def test_filter_soundness_on_catalog():
    # whenever the necessary-invariant filter rejects, exhaustive search
    # (filter disabled) also rejects
    catalog = [G for G in builtin_catalog(16) if G.order <= 16]
    pairings = [(G, commutator_pairing(G)) for G in catalog]
    rejected = 0
    for i, (G, PG) in enumerate(pairings):
        for H, PH in pairings[i + 1:]:
            if not _invariant_filter(PG, PH):
                rejected += 1
                assert is_isoclinic(G, H, _skip_filter=True).status == NOT_ISOCLINIC
    assert rejected > 0


def test_isoclinic_to_abelian_extension():
    for name, p in (("dihedral:8", 2), ("quaternion8", 2)):
        res = isoclinic_to_abelian_extension(builtin_group(name), CyclicGroup(p))
        assert res.status == ISOCLINIC
        assert res.witness.verify()
    with pytest.raises(GroupError):
        isoclinic_to_abelian_extension(
            builtin_group("dihedral:8"), builtin_group("dihedral:8")
        )


def test_mixed_abelian_factor_example():
    d8xc3 = direct_product([builtin_group("dihedral:8"), CyclicGroup(3)])
    res = is_isoclinic(d8xc3, quaternion_group())
    assert res.status == ISOCLINIC
    assert res.witness.verify()


def test_hall_spotcheck_identity_witness():
    d8 = builtin_group("dihedral:8")
    witness = is_isoclinic(d8, d8).witness
    report = hall_correspondence_spotcheck(d8, d8, witness)
    assert report.all_passed
    assert len(report.entries) == 5


def test_hall_spotcheck_d8_q8():
    d8 = builtin_group("dihedral:8")
    q8 = quaternion_group()
    witness = is_isoclinic(d8, q8).witness
    report = hall_correspondence_spotcheck(d8, q8, witness)
    assert report.all_passed
    # trivial quotient subgroup, three index-2 subgroups, whole group
    assert sorted(e.quotient_subgroup_order for e in report.entries) == [1, 2, 2, 2, 4]
    assert all(e.subgroup_order_1 == e.subgroup_order_2 for e in report.entries)


def test_corresponding_centralizers_isoclinic():
    d8 = builtin_group("dihedral:8")
    q8 = quaternion_group()
    witness = is_isoclinic(d8, q8).witness
    P1, P2 = witness.pairing1, witness.pairing2
    zc = set(center(d8).members)
    for x in range(d8.order):
        if x in zc:
            continue
        image_bar = witness.quotient_map[P1.projection(x)]
        y = P2.lifts[image_bar]
        zx = subgroup_as_group(centralizer_bruteforce(d8, x))
        zy = subgroup_as_group(centralizer_bruteforce(q8, y))
        assert is_isoclinic(zx, zy).status == ISOCLINIC


def test_hall_spotcheck_reversed_direction():
    d8 = builtin_group("dihedral:8")
    q8 = quaternion_group()
    witness = is_isoclinic(q8, d8).witness
    report = hall_correspondence_spotcheck(q8, d8, witness)
    assert report.all_passed
    assert len(report.entries) == 5


def test_spotcheck_cap():
    g = make_iterated(3, 2).materialize()
    witness = is_isoclinic(g, g).witness
    with pytest.raises(CapExceededError):
        hall_correspondence_spotcheck(g, g, witness, max_order=64)


def test_relabeled_group_still_isoclinic():
    # a random relabeling of dihedral-8 must still be recognized
    from random import Random

    from wreathcoh.groups import TableGroup, validate_group

    rng = Random(17)
    d8 = builtin_group("dihedral:8")
    perm = list(range(8))
    rng.shuffle(perm)
    inv = [0] * 8
    for i, x in enumerate(perm):
        inv[x] = i
    table = [[perm[d8.mul(inv[a], inv[b])] for b in range(8)] for a in range(8)]
    scrambled = TableGroup(table, name="scrambled-d8")
    validate_group(scrambled)
    res = is_isoclinic(scrambled, quaternion_group())
    assert res.status == ISOCLINIC and res.witness.verify()


def test_dihedral16_not_isoclinic_to_dihedral8():
    # derived subgroups have orders 4 and 2; both the filter and the
    # exhaustive search must reject
    d16 = builtin_group("dihedral:16")
    d8 = builtin_group("dihedral:8")
    assert is_isoclinic(d16, d8).status == NOT_ISOCLINIC
    assert is_isoclinic(d16, d8, _skip_filter=True).status == NOT_ISOCLINIC


def test_budget_exhausted_outcome_is_distinct():
    res = is_isoclinic(
        builtin_group("dihedral:8"), builtin_group("wreath:p=2,n=2"), budget=1
    )
    assert res.status == BUDGET_EXHAUSTED
    assert res.verdict is None
