"""Stable cohomology: basis enumeration, Hilbert series, exterior algebra,
restriction maps, detection certificates, ring products, Kunneth."""

from __future__ import annotations

from random import Random

import pytest

from wreathcoh import stabcoh as sc
from wreathcoh.groups import GroupError
from wreathcoh.stabcoh import (
    ExteriorElement,
    RankDeficientError,
    StableClass,
    THETA,
    UNIT,
)
from wreathcoh.wreath import elab_descriptors


def basis_names(p, n, k):
    return [sc.format_basis_element(b) for b in sc.stable_basis(p, n, k)]


def test_level1_basis():
    assert basis_names(2, 1, 0) == ["1"]
    assert basis_names(2, 1, 1) == ["theta"]
    assert basis_names(2, 1, 2) == []
    assert basis_names(3, 1, 5) == []


def test_level2_basis_p2():
    assert basis_names(2, 2, 1) == ["theta", "T(1,theta)"]
    assert basis_names(2, 2, 2) == ["N(theta)"]
    assert basis_names(2, 2, 3) == []


def test_trace_reps_are_canonical_rotations():
    for p, n, k in ((2, 2, 1), (2, 3, 2), (3, 2, 2)):
        for b in sc.stable_basis(p, n, k):
            if b[0] != "trace":
                continue
            tup = b[1]
            rotations = [
                tuple(tup[(i + r) % p] for i in range(p)) for r in range(p)
            ]
            keys = [tuple(sc.sort_key(c, p) for c in rot) for rot in rotations]
            assert keys[0] == min(keys)
            assert len(set(tup)) > 1  # free orbit


def test_degree_function():
    assert sc.degree(UNIT, 2) == 0
    assert sc.degree(THETA, 3) == 1
    assert sc.degree(sc.norm(THETA), 3) == 3
    assert sc.degree(("trace", (THETA, UNIT)), 2) == 1


def test_hilbert_fixed_series():
    fixed = {
        (2, 1): (1, 1),
        (2, 2): (1, 2, 1),
        (2, 3): (1, 3, 4, 2, 1),
        (3, 2): (1, 2, 1, 1),
    }
    for (p, n), expected in fixed.items():
        h = sc.hilbert_series(p, n, 12)
        assert h.coefficients[: len(expected)] == expected
        assert all(c == 0 for c in h.coefficients[len(expected):])
        assert h.top_degree() == p ** (n - 1)
        assert h.coefficients[0] == 1


def test_hilbert_matches_enumeration():
    for p in (2, 3):
        for n in (1, 2, 3):
            h = sc.hilbert_series(p, n, 12)
            for k in range(13):
                assert h.coefficients[k] == len(sc.stable_basis(p, n, k))


def test_hilbert_dim_h1_equals_n():
    for p in (2, 3):
        for n in (1, 2, 3, 4):
            h = sc.hilbert_series(p, n, 2)
            assert h.coefficients[1] == n


def test_hilbert_matches_enumeration_level4():
    h = sc.hilbert_series(2, 4, 8)
    assert h.coefficients == tuple(
        len(sc.stable_basis(2, 4, k)) for k in range(9)
    )
    h33 = sc.hilbert_series(3, 3, 9)
    assert h33.coefficients == tuple(
        len(sc.stable_basis(3, 3, k)) for k in range(10)
    )


def test_exterior_wedge_laws():
    p = 3
    e0 = ExteriorElement.generator(3, p, 0)
    e1 = ExteriorElement.generator(3, p, 1)
    assert e0.wedge(e1).terms == {(0, 1): 1}
    assert e1.wedge(e0).terms == {(0, 1): p - 1}
    assert e0.wedge(e0).is_zero
    rng = Random(2)
    for _ in range(50):
        elems = []
        for _ in range(3):
            terms = {}
            for mono in [(), (0,), (1,), (2,), (0, 1), (1, 2)]:
                c = rng.randrange(p)
                if c:
                    terms[mono] = c
            elems.append(ExteriorElement(3, p, terms))
        a, b, c = elems
        assert a.wedge(b).wedge(c) == a.wedge(b.wedge(c))


def test_restrict_to_base_rules():
    assert sc.restrict_basis_to_base(2, THETA) == {}
    assert sc.restrict_basis_to_base(2, sc.norm(THETA)) == {(THETA, THETA): 1}
    tr = ("trace", (UNIT, THETA))
    assert sc.restrict_basis_to_base(2, tr) == {
        (UNIT, THETA): 1,
        (THETA, UNIT): 1,
    }


def test_restrict_to_base_signs_p3():
    # rep (1, theta, theta): the middle rotation picks up a Koszul sign
    tr = ("trace", (UNIT, THETA, THETA))
    out = sc.restrict_basis_to_base(3, tr)
    assert out == {
        (UNIT, THETA, THETA): 1,
        (THETA, UNIT, THETA): 2,
        (THETA, THETA, UNIT): 1,
    }


def test_restriction_to_elab_examples():
    descs = elab_descriptors(2, 2)
    product_desc = next(d for d in descs if d.kind == "product")
    diag_desc = next(d for d in descs if d.kind == "diagonal")
    unit = sc.unit_class(2, 2)
    assert sc.restriction_to_elab(unit, product_desc).terms == {(): 1}
    assert sc.restriction_to_elab(unit, diag_desc).terms == {(): 1}
    norm_cls = sc.basis_class(2, 2, sc.norm(THETA))
    assert sc.restriction_to_elab(norm_cls, product_desc).terms == {(0, 1): 1}
    assert sc.restriction_to_elab(norm_cls, diag_desc).is_zero
    theta = sc.theta_class(2, 2)
    assert sc.restriction_to_elab(theta, product_desc).is_zero
    assert sc.restriction_to_elab(theta, diag_desc).terms == {(1,): 1}


def test_restriction_level_mismatch():
    theta = sc.theta_class(2, 3)
    desc = elab_descriptors(2, 2)[0]
    with pytest.raises(GroupError):
        sc.restriction_to_elab(theta, desc)


def test_trace_sign_restriction_p3():
    # degree-2 trace at p=3 restricts to e0^e1 + e1^e2 - e0^e2 on the base power
    descs = elab_descriptors(3, 2)
    product_desc = next(d for d in descs if d.kind == "product")
    tr = next(
        b for b in sc.stable_basis(3, 2, 2) if b[0] == "trace"
    )
    elem = sc.restriction_to_elab(sc.basis_class(3, 2, tr), product_desc)
    assert elem.terms == {(0, 1): 1, (1, 2): 1, (0, 2): 2}


def test_product_restriction_composes_through_base():
    # compose-and-compare: restriction to a ProductType factors through the
    # base restriction followed by factorwise restriction
    p, n = 2, 3
    descs = elab_descriptors(p, n)
    sub_descs = elab_descriptors(p, n - 1)
    for desc in descs:
        if desc.kind != "product":
            continue
        for k in range(0, 5):
            for b in sc.stable_basis(p, n, k):
                direct = sc.restrict_basis(p, b, desc)
                total = ExteriorElement.zero(desc.rank, p)
                for tup, coeff in sc.restrict_basis_to_base(p, b).items():
                    term = ExteriorElement.one(desc.rank, p)
                    offset = 0
                    for comp, child in zip(tup, desc.children):
                        piece = sc.restrict_basis(p, comp, child)
                        term = term.wedge(piece.shift(offset, desc.rank))
                        offset += child.rank
                    total = total.add(term.scale(coeff))
                assert direct == total


def test_detection_matrix_structure_p2_n2():
    cert = sc.detection_matrix(2, 2, 1)
    assert cert.full_row_rank and cert.rank == 2
    assert cert.basis == ("theta", "T(1,theta)")
    # columns: product desc rank 2 (2 degree-1 monomials), diagonal rank 2 (2)
    assert len(cert.matrix[0]) == 4
    theta_row, trace_row = cert.matrix
    assert theta_row[:2] == (0, 0) and any(theta_row[2:])
    assert any(trace_row[:2]) and trace_row[2:] == (0, 0)


@pytest.mark.parametrize(
    "p,n,degrees",
    [(2, 1, range(2)), (2, 2, range(3)), (2, 3, range(5)), (3, 2, range(4))],
)
def test_detection_full_rank(p, n, degrees):
    for k in degrees:
        cert = sc.detection_matrix(p, n, k)
        assert cert.full_row_rank, (p, n, k)


def test_zero_class_iff_zero_detection():
    rng = Random(13)
    for p, n in ((2, 3), (3, 2)):
        top = p ** (n - 1)
        for _ in range(50):
            coords = {}
            for k in range(top + 1):
                for b in sc.stable_basis(p, n, k):
                    c = rng.randrange(p)
                    if c:
                        coords[b] = c
            cls = StableClass(p, n, coords)
            detected = any(
                not elem.is_zero for elem in cls.detection().values()
            )
            assert detected == (not cls.is_zero)


def test_multiply_unit_and_theta():
    for p, n in ((2, 2), (2, 3), (3, 2)):
        unit = sc.unit_class(p, n)
        theta = sc.theta_class(p, n)
        assert sc.multiply(unit, theta) == theta
        assert sc.multiply(theta, theta).is_zero
        rng = Random(p + n)
        coords = {}
        for k in range(p ** (n - 1) + 1):
            for b in sc.stable_basis(p, n, k):
                c = rng.randrange(p)
                if c:
                    coords[b] = c
        cls = StableClass(p, n, coords)
        assert sc.multiply(unit, cls) == cls
        assert sc.multiply(cls, unit) == cls


def test_theta_times_norm_vanishes():
    for p, n in ((2, 2), (2, 3), (3, 2)):
        theta = sc.theta_class(p, n)
        top = p ** (n - 1)
        for k in range(top + 1):
            for b in sc.stable_basis(p, n, k):
                if b[0] != "norm":
                    continue
                prod = sc.multiply(theta, sc.basis_class(p, n, b))
                assert prod.is_zero, sc.format_basis_element(b)


def test_norm_multiplicativity_up_to_sign():
    # whenever b*b' is a unit multiple of a basis element (or zero), the
    # detection tuples of N(b)N(b') and of the matching multiple of N(bb')
    # agree
    p, n = 2, 3
    lower = [
        b
        for k in range(1, 3)
        for b in sc.stable_basis(p, n - 1, k)
    ]
    for b1 in lower:
        for b2 in lower:
            prod = sc.multiply(
                sc.basis_class(p, n - 1, b1), sc.basis_class(p, n - 1, b2)
            )
            norms = sc.multiply(
                sc.basis_class(p, n, sc.norm(b1)),
                sc.basis_class(p, n, sc.norm(b2)),
            )
            if prod.is_zero:
                assert norms.is_zero
            elif len(prod.coords) == 1:
                (b12, coeff), = prod.coords.items()
                candidate = sc.basis_class(p, n, sc.norm(b12)).scale(coeff)
                neg = candidate.scale(p - 1)
                assert norms in (candidate, neg)


def test_graded_commutativity_with_signs_p3():
    # odd-degree classes anticommute at p=3
    p, n = 3, 2
    deg1 = [sc.basis_class(p, n, b) for b in sc.stable_basis(p, n, 1)]
    for a in deg1:
        for b in deg1:
            ab = sc.multiply(a, b)
            ba = sc.multiply(b, a)
            assert ab == ba.scale(p - 1)


def test_associativity_random():
    rng = Random(99)
    p, n = 2, 3
    def rand_cls():
        coords = {}
        for k in range(5):
            for b in sc.stable_basis(p, n, k):
                c = rng.randrange(p)
                if c:
                    coords[b] = c
        return StableClass(p, n, coords)
    for _ in range(60):
        a, b, c = rand_cls(), rand_cls(), rand_cls()
        assert sc.multiply(sc.multiply(a, b), c) == sc.multiply(a, sc.multiply(b, c))


def test_trace_products_match_symbolic_expansion():
    # hand-computed oracle: with u = T(1,a), v = T(1,b) at level n and a*b = 0
    # one level down, the tensor expansion (1@a + a@1)(1@b + b@1) collapses to
    # a@b + b@a, the trace over the orbit of (a, b)
    p, n = 2, 3
    theta2 = THETA
    t2 = ("trace", (UNIT, THETA))
    u = sc.basis_class(p, n, sc.trace((UNIT, theta2)))
    v = sc.basis_class(p, n, sc.trace((UNIT, t2)))
    prod = sc.multiply(u, v)
    assert prod.coords == {sc.trace((theta2, t2)): 1}
    n1 = sc.norm(THETA)
    w = sc.basis_class(p, n, sc.trace((UNIT, n1)))
    assert sc.multiply(w, u).coords == {sc.trace((theta2, n1)): 1}


def test_kunneth_unit_right_factor():
    cls = sc.StableClass(2, 2, {THETA: 1, sc.norm(THETA): 1})
    unit1 = sc.unit_class(2, 1)
    kp = sc.kunneth_product(cls, unit1)
    assert set(kp.coords) == {(THETA, UNIT), (sc.norm(THETA), UNIT)}
    descs2 = elab_descriptors(2, 2)
    leaf = elab_descriptors(2, 1)[0]
    for desc in descs2:
        combined = kp.detection_component(desc, leaf)
        own = cls.detection()[desc]
        assert combined.terms == {
            mono: coeff for mono, coeff in own.terms.items()
        }


def test_kunneth_hilbert_product_binomial():
    h1 = sc.hilbert_series(2, 1, 4)
    prod = sc.hilbert_product(h1, h1, 4)
    assert prod == (1, 2, 1, 0, 0)


def test_kunneth_max_elab_rank_adds():
    r1 = max(d.rank for d in elab_descriptors(2, 2))
    r2 = max(d.rank for d in elab_descriptors(2, 3))
    # product group's maximal elementary abelian rank is the sum
    assert r1 + r2 == 2 + 4


def test_rank_deficient_error_is_loud():
    assert issubclass(RankDeficientError, GroupError)
    with pytest.raises(RankDeficientError):
        sc._invert_modp([[1, 1], [1, 1]], 2)
