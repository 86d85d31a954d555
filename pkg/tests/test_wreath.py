"""Wreath towers: element arithmetic and encoding, the centralizer case
analysis, normal forms, certificates, elementary abelian subgroups, and the
Sylow parameters of GL_n(F_q)."""

from __future__ import annotations

from random import Random

import pytest

from wreathcoh.groups import (
    CapExceededError,
    GroupError,
    OrderOverflowError,
    builtin_group,
    elementary_abelian,
    quaternion_group,
)
from wreathcoh.wreath import (
    LevelMismatchError,
    NotCaseBError,
    UnsupportedParametersError,
    classify_centralizer,
    cp_certificate,
    elab_descriptors,
    elem_abelians_bruteforce,
    element_level,
    format_element,
    make_iterated,
    maximal_elem_abelians,
    normal_form_case_b,
    parse_element,
    realize_descriptor,
    sylow_gl_parameters,
    vp,
    vp_gl_order,
)


def brute_centralizer(G, x):
    return {g for g in range(G.order) if G.mul(g, x) == G.mul(x, g)}


def test_make_iterated_orders():
    assert make_iterated(2, 1).order() == 2
    assert make_iterated(2, 3).order() == 2 ** 7
    assert make_iterated(3, 2).order() == 3 ** 4
    # exponent recursion e_n = p * e_{n-1} + 1
    t = make_iterated(2, 4)
    assert t.order() == 2 ** 15
    with pytest.raises(OrderOverflowError):
        make_iterated(3, 3)  # 3^13 over the default cap
    assert make_iterated(3, 3, cap=2 ** 21).order() == 3 ** 13


def test_multiply_identity_and_square():
    t = make_iterated(2, 3)
    rng = Random(11)
    for _ in range(50):
        x = t.decode(rng.randrange(t.order()))
        assert t.multiply(t.identity(3), x) == x
        assert t.multiply(x, t.identity(3)) == x
    # ((g, h), 1)^2 = ((g*h, h*g), 0) at any level
    g = t.decode(rng.randrange(t.order(2)), 2)
    h = t.decode(rng.randrange(t.order(2)), 2)
    x = ((g, h), 1)
    sq = t.multiply(x, x)
    assert sq == ((t.multiply(g, h), t.multiply(h, g)), 0)


def test_inverse_random_elements():
    t = make_iterated(2, 3)
    rng = Random(5)
    ident = t.identity(3)
    for _ in range(10_000):
        x = t.decode(rng.randrange(t.order()))
        assert t.multiply(x, t.inverse(x)) == ident


def test_level_mismatch_raises():
    t = make_iterated(2, 3)
    with pytest.raises(LevelMismatchError):
        t.multiply(t.identity(2), t.identity(3))
    with pytest.raises(LevelMismatchError):
        t.check_element(((0, ((0, 0), 0)), 1))


def test_encode_decode_matches_materialization():
    for p, n in ((2, 3), (3, 2)):
        t = make_iterated(p, n)
        G = t.materialize()
        rng = Random(p * 10 + n)
        for _ in range(300):
            i, j = rng.randrange(G.order), rng.randrange(G.order)
            a, b = t.decode(i), t.decode(j)
            assert t.encode(a) == i
            assert t.encode(t.multiply(a, b)) == G.mul(i, j)
        for _ in range(50):
            i = rng.randrange(G.order)
            assert t.element_order(t.decode(i)) == G.element_order(i)


def test_element_syntax_roundtrip_and_spec_forms():
    t = make_iterated(2, 2)
    x = parse_element("[[1,0];1]", 2, 2)
    assert x == ((1, 0), 1)
    assert format_element(x) == "[1,0;1]"
    assert parse_element("[1,0;1]", 2, 2) == x
    y = parse_element("[[0,1],[1,0];1]", 2, 3)
    assert y == ((((0, 1), 0), ((1, 0), 0)), 1)
    assert format_element(y) == "[[0,1;0],[1,0;0];1]"
    assert parse_element(format_element(y), 2, 3) == y
    assert parse_element("1", 2, 1) == 1
    t33 = make_iterated(3, 3, cap=2 ** 21)
    rng = Random(33)
    for _ in range(100):
        elt = t33.decode(rng.randrange(t33.order()))
        assert parse_element(format_element(elt), 3, 3) == elt
    with pytest.raises(GroupError):
        parse_element("[1,0;2]", 2, 2)
    with pytest.raises(GroupError):
        parse_element("[1;1]", 2, 2)
    with pytest.raises(GroupError):
        parse_element("[1,0;1]extra", 2, 2)


def test_classify_case_b_shift_elements():
    t = make_iterated(2, 2)
    report = classify_centralizer(t, ((1, 0), 1))
    assert report.case == "B"
    assert report.core["isoclinic_to_product"] is True
    assert report.order == 4


def test_classify_case_c_diagonal():
    t = make_iterated(2, 3)
    G = t.materialize()
    H = t.materialize(2)
    x_prime = t.decode(3, 2)
    x = t.diagonal(x_prime)
    report = classify_centralizer(t, x)
    assert report.case == "C"
    assert report.conjugator == t.identity(3)
    # centralizer equals Z(x') wr Z/2
    inner_order = len(brute_centralizer(H, t.encode(x_prime)))
    assert report.order == 2 * inner_order ** 2
    generated = {t.encode(e) for e in t.closure(report.generators)}
    assert generated == brute_centralizer(G, t.encode(x))


def test_classify_case_a_distinct_components():
    t = make_iterated(2, 3)
    G = t.materialize()
    # components of different element orders are never conjugate
    g = t.decode(1, 2)
    h = t.identity(2)
    x = ((g, h), 0)
    report = classify_centralizer(t, x)
    assert report.case == "A"
    generated = {t.encode(e) for e in t.closure(report.generators)}
    assert generated == brute_centralizer(G, t.encode(x))


def test_classify_conjugate_components_is_case_c():
    # regression: base element with conjugate but unequal components; its
    # centralizer surjects onto the top Z/p even though x is not diagonal
    t = make_iterated(2, 3)
    G = t.materialize()
    r = ((1, 0), 1)  # order-4 element of the level-2 factor
    s = ((0, 0), 1)
    r_conj = t.conjugate(s, r)
    assert r_conj != r
    x = ((r, r_conj), 0)
    report = classify_centralizer(t, x)
    assert report.case == "C"
    assert report.conjugator != t.identity(3)
    generated = {t.encode(e) for e in t.closure(report.generators)}
    brute = brute_centralizer(G, t.encode(x))
    assert generated == brute
    assert any(g % 2 for g in brute)  # surjects onto the top Z/2


def test_classification_sweep_matches_bruteforce():
    for p, n in ((2, 2), (3, 2)):
        t = make_iterated(p, n)
        G = t.materialize()
        for i in range(G.order):
            x = t.decode(i)
            report = classify_centralizer(t, x)
            generated = {t.encode(e) for e in t.closure(report.generators)}
            brute = brute_centralizer(G, i)
            assert generated == brute
            assert report.order == len(brute)
            shift = t.shift(x)
            surjects = any(g % p for g in brute)
            expected = "B" if shift else ("C" if surjects else "A")
            assert report.case == expected


def test_classification_level4_orbit_stabilizer():
    # beyond brute-force reach (order 2^15): the structural centralizer
    # order must satisfy |class(x)| * |Z(x)| = |G|
    t = make_iterated(2, 4)
    gens = t._level_generators(4)
    rng = Random(4)
    for _ in range(6):
        x = t.decode(rng.randrange(t.order()))
        report = classify_centralizer(t, x)
        orbit = {x}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for g in gens:
                z = t.conjugate(g, y)
                if z not in orbit:
                    orbit.add(z)
                    frontier.append(z)
        assert len(orbit) * report.order == t.order()


def test_normal_form_case_b():
    t = make_iterated(2, 2)
    canonical = ((1, 0), 1)
    nf = normal_form_case_b(t, canonical)
    assert nf.conjugator == t.identity(2)
    assert nf.normal_form == canonical
    # p=2: a equals the component product g*h
    for g in range(2):
        for h in range(2):
            nf = normal_form_case_b(t, ((g, h), 1))
            assert nf.base_component == (g + h) % 2
    with pytest.raises(NotCaseBError):
        normal_form_case_b(t, ((0, 1), 0))


def test_normal_form_base_component_class_sweep():
    # across all case-B elements, the normal-form component is conjugate to
    # the cyclic product of the components
    t = make_iterated(2, 3)
    H = t.materialize(2)
    for i in range(t.order()):
        x = t.decode(i)
        if t.shift(x) == 0:
            continue
        nf = normal_form_case_b(t, x)
        comps, s = x
        prod = t.multiply(comps[0], comps[(0 - s) % 2])
        orbit = t.conjugacy_orbit(prod)
        assert nf.base_component in orbit
        # re-multiplication check: c x c^-1 equals the normal form
        assert t.conjugate(nf.conjugator, x) == nf.normal_form


def test_cp_certificate_identity_is_wreath_chain():
    t = make_iterated(2, 3)
    node = cp_certificate(t, t.identity(3))
    kinds = []
    cur = node
    while cur.children:
        kinds.append(cur.kind)
        cur = cur.children[0]
    kinds.append(cur.kind)
    assert kinds == ["wreath", "wreath", "zp"]
    assert node.order == t.order(3)


def test_cp_certificate_cases():
    t = make_iterated(2, 2)
    case_a = cp_certificate(t, ((1, 0), 0))
    assert case_a.kind == "product"
    assert [c.kind for c in case_a.children] == ["zp", "zp"]
    case_b = cp_certificate(t, ((1, 0), 1))
    assert case_b.kind == "isoclinic"
    assert case_b.witness is not None
    assert case_b.witness["square_verified"] is True
    assert not case_b.asserted


def test_cp_certificate_asserted_above_cap():
    t = make_iterated(2, 4)
    x = t.decode(1)  # shift generator flavor: case B at level 4
    node = cp_certificate(t, x, verify_order_cap=4096)
    assert node.kind == "isoclinic"
    assert node.asserted and node.witness is None
    data = node.to_json()
    assert data["asserted"] is True


def test_cp_certificate_orders_match_bruteforce_everywhere():
    from wreathcoh.groups import centralizer_bruteforce

    def walk(node):
        yield node
        for child in node.children:
            yield from walk(child)

    for p, n in ((2, 2), (3, 2), (2, 3)):
        t = make_iterated(p, n)
        G = t.materialize()
        for i in range(G.order):
            cert = cp_certificate(t, t.decode(i))
            assert cert.order == centralizer_bruteforce(G, i).order
            for node in walk(cert):
                if node.kind == "isoclinic":
                    assert node.witness is not None
                    assert node.witness["square_verified"] is True


def test_classify_sublevel_element():
    # classification works for elements at intermediate levels of a tower
    t = make_iterated(2, 3)
    H = t.materialize(2)
    x = t.decode(5, 2)
    report = classify_centralizer(t, x)
    generated = {t.encode(e) for e in t.closure(report.generators)}
    assert generated == brute_centralizer(H, 5)


def test_descriptor_counts_and_ranks():
    t22 = make_iterated(2, 2)
    descs = maximal_elem_abelians(t22)
    assert [(d.kind, d.rank) for d in descs] == [("product", 2), ("diagonal", 2)]
    t32 = make_iterated(3, 2)
    assert sorted(d.rank for d in maximal_elem_abelians(t32)) == [2, 3]
    t23 = make_iterated(2, 3)
    descs3 = maximal_elem_abelians(t23)
    assert len(descs3) == 5
    assert sorted(d.rank for d in descs3) == [3, 3, 4, 4, 4]


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)])
def test_rank_law(p, n):
    assert max(d.rank for d in elab_descriptors(p, n)) == p ** (n - 1)


def test_realized_descriptors_are_elementary_abelian():
    t = make_iterated(2, 3)
    for desc in maximal_elem_abelians(t):
        members = realize_descriptor(t, desc)
        assert len(members) == 2 ** desc.rank
        ident = t.identity(3)
        for m in members:
            assert t.multiply(m, m) == ident
        members = sorted(members, key=t.encode)
        for a in members[:8]:
            for b in members[:8]:
                assert t.multiply(a, b) == t.multiply(b, a)


def test_elab_bruteforce_quaternion():
    cat = elem_abelians_bruteforce(quaternion_group())
    maximal = cat.maximal_classes()
    assert len(maximal) == 1
    assert maximal[0]["rank"] == 1


def test_elab_bruteforce_elementary_abelian():
    G = elementary_abelian(2, 3)
    cat = elem_abelians_bruteforce(G)
    maximal = [s for s in cat.subgroups if s.maximal]
    assert len(maximal) == 1
    assert maximal[0].members == tuple(range(8))


def test_elab_bruteforce_matches_descriptors_on_d8():
    t = make_iterated(2, 2)
    G = t.materialize()
    cat = elem_abelians_bruteforce(G)
    maximal = cat.maximal_classes()
    assert len(maximal) == 2
    assert sorted(c["rank"] for c in maximal) == [2, 2]


def test_elab_bruteforce_cap():
    with pytest.raises(CapExceededError):
        elem_abelians_bruteforce(builtin_group("dihedral:8"), cap=4)


def test_sylow_examples():
    params = sylow_gl_parameters(2, 7, 3)
    assert (params.d, params.r, params.m) == (1, 1, 2)
    assert params.factors == ((1, 0), (1, 0))
    assert params.exponent_sum() == 2 == vp_gl_order(2, 7, 3)
    params3 = sylow_gl_parameters(3, 7, 3)
    assert params3.factors == ((1, 1),)
    assert params3.exponent_sum() == 4 == vp_gl_order(3, 7, 3)


def test_sylow_trivial_below_d():
    # ord_5(7) = 4, so GL_2(F_7) has trivial 5-Sylow
    params = sylow_gl_parameters(2, 7, 5)
    assert params.d == 4
    assert params.m == 0
    assert params.factors == ()
    assert params.exponent_sum() == 0 == vp_gl_order(2, 7, 5)


def test_sylow_rejects_unsupported():
    for n, q, p in ((2, 2, 3), (2, 7, 2), (2, 3, 3), (2, 9, 5), (0, 7, 3)):
        with pytest.raises(UnsupportedParametersError):
            sylow_gl_parameters(n, q, p)


def test_sylow_valuation_grid():
    for n in range(1, 7):
        for q in (3, 5, 7):
            for p in (3, 5, 7):
                if p == q:
                    continue
                params = sylow_gl_parameters(n, q, p)
                order = q ** (n * (n - 1) // 2)
                for i in range(1, n + 1):
                    order *= q ** i - 1
                assert params.exponent_sum() == vp(order, p)
