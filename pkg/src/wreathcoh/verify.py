"""Named verification batteries: each returns per-check results so the CLI
and the test suite can share one implementation."""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import List, Sequence, Tuple

from . import stabcoh
from .groups import (
    CyclicGroup,
    FiniteGroup,
    builtin_group,
    direct_product,
    quaternion_group,
    subgroup,
    subgroup_as_group,
)
from .isoclinism import (
    ISOCLINIC,
    NOT_ISOCLINIC,
    hall_correspondence_spotcheck,
    is_isoclinic,
    isoclinic_to_abelian_extension,
)
from .wreath import (
    classify_centralizer,
    elem_abelians_bruteforce,
    make_iterated,
    maximal_elem_abelians,
    normal_form_case_b,
    realize_descriptor,
    sylow_gl_parameters,
    vp,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


LEMMA_GRIDS: Tuple[Tuple[int, int], ...] = ((2, 2), (2, 3), (3, 2))


def _brute_centralizer_members(G: FiniteGroup, x: int) -> List[int]:
    return [g for g in range(G.order) if G.mul(g, x) == G.mul(x, g)]


def lemma_centralizers(grids: Sequence[Tuple[int, int]] = LEMMA_GRIDS) -> List[CheckResult]:
    """Criterion: the case classification reproduces the brute-force
    centralizer for every element, and exactly one case fires."""
    results = []
    for p, n in grids:
        tower = make_iterated(p, n)
        G = tower.materialize()
        agree = 0
        case_ok = 0
        total = G.order
        counts = {"A": 0, "B": 0, "C": 0}
        for idx in range(total):
            x = tower.decode(idx)
            brute = _brute_centralizer_members(G, idx)
            report = classify_centralizer(tower, x)
            generated = {tower.encode(e) for e in tower.closure(report.generators)}
            if generated == set(brute) and report.order == len(brute):
                agree += 1
            shift = tower.shift(x)
            surjects = any(g % p for g in brute)
            expected = "B" if shift else ("C" if surjects else "A")
            if report.case == expected:
                case_ok += 1
            counts[report.case] += 1
        passed = agree == total and case_ok == total
        results.append(
            CheckResult(
                name=f"lemma-centralizers p={p} n={n}",
                passed=passed,
                detail=(
                    f"{agree}/{total} centralizers agree, {case_ok}/{total} cases "
                    f"exclusive (A={counts['A']}, B={counts['B']}, C={counts['C']})"
                ),
            )
        )
    return results


def caseb_isoclinism(grids: Sequence[Tuple[int, int]] = LEMMA_GRIDS) -> List[CheckResult]:
    """Criterion: every case-B centralizer is isoclinic to the product of the
    base-power centralizer with Z/p, with an exhaustively verified witness."""
    results = []
    for p, n in grids:
        tower = make_iterated(p, n)
        G = tower.materialize()
        H = tower.materialize(n - 1)
        checked = 0
        witnessed = 0
        for idx in range(G.order):
            if idx % p == 0:
                continue  # trivial shift, not case B
            x = tower.decode(idx)
            checked += 1
            zx = subgroup(G, _brute_centralizer_members(G, idx), check=False)
            nf = normal_form_case_b(tower, x)
            za = subgroup(
                H,
                _brute_centralizer_members(H, tower.encode(nf.base_component)),
                check=False,
            )
            target = direct_product([subgroup_as_group(za), CyclicGroup(p)])
            result = is_isoclinic(subgroup_as_group(zx), target)
            if result.status == ISOCLINIC and result.witness.verify():
                witnessed += 1
        results.append(
            CheckResult(
                name=f"case-b-isoclinism p={p} n={n}",
                passed=witnessed == checked,
                detail=f"{witnessed}/{checked} case-B elements verified",
            )
        )
    return results


def isoclinism_classics() -> List[CheckResult]:
    results = []
    d8 = builtin_group("dihedral:8")
    q8 = quaternion_group()
    r = is_isoclinic(d8, q8)
    results.append(
        CheckResult(
            "dihedral-8 ~ quaternion-8",
            r.status == ISOCLINIC and r.witness.verify(),
            f"status={r.status}, square verified",
        )
    )
    r2 = is_isoclinic(d8, builtin_group("elab:2^3"))
    results.append(
        CheckResult(
            "dihedral-8 !~ elab:2^3",
            r2.status == NOT_ISOCLINIC,
            f"status={r2.status}",
        )
    )
    g23 = make_iterated(3, 2).materialize()
    for G, p in ((d8, 2), (q8, 2), (g23, 3)):
        res = isoclinic_to_abelian_extension(G, CyclicGroup(p))
        results.append(
            CheckResult(
                f"{G.name} ~ {G.name} x Z/{p}",
                res.status == ISOCLINIC and res.witness.verify(),
                f"status={res.status}",
            )
        )
    witness = is_isoclinic(d8, q8).witness
    report = hall_correspondence_spotcheck(d8, q8, witness)
    results.append(
        CheckResult(
            "hall-correspondence d8/q8",
            report.all_passed and len(report.entries) == 5,
            f"{sum(e.passed for e in report.entries)}/{len(report.entries)} "
            "corresponding subgroups isoclinic",
        )
    )
    return results


def hilbert_oracle(max_degree: int = 12) -> List[CheckResult]:
    """Criterion: the series recursion matches direct basis enumeration, the
    pinned small series, dim H^1 = n, and the top degree p^(n-1)."""
    results = []
    pinned = {
        (2, 1): (1, 1),
        (2, 2): (1, 2, 1),
        (2, 3): (1, 3, 4, 2, 1),
        (3, 2): (1, 2, 1, 1),
    }
    for p in (2, 3):
        for n in (1, 2, 3):
            series = stabcoh.hilbert_series(p, n, max_degree)
            counts = tuple(
                len(stabcoh.stable_basis(p, n, k)) for k in range(max_degree + 1)
            )
            ok = series.coefficients == counts
            top_ok = series.top_degree() == p ** (n - 1)
            h1_ok = series.coefficients[1] == n
            pin = pinned.get((p, n))
            pin_ok = True
            if pin is not None:
                pin_ok = series.coefficients[: len(pin)] == pin and all(
                    c == 0 for c in series.coefficients[len(pin):]
                )
            results.append(
                CheckResult(
                    f"hilbert p={p} n={n}",
                    ok and top_ok and h1_ok and pin_ok,
                    f"recursion==enumeration:{ok}, top=={p ** (n - 1)}:{top_ok}, "
                    f"dimH1:{h1_ok}, pinned:{pin_ok}",
                )
            )
    return results


def detection_rank() -> List[CheckResult]:
    """Criterion: full row rank of the detection matrix at every degree for
    p=2, n<=3 and p=3, n=2."""
    results = []
    jobs = [(2, 1), (2, 2), (2, 3), (3, 2)]
    for p, n in jobs:
        top = p ** (n - 1)
        degrees = range(0, (top + 2) if (p, n) != (3, 2) else 4)
        all_full = True
        ranks = []
        for k in degrees:
            cert = stabcoh.detection_matrix(p, n, k)
            ranks.append(f"deg{k}:{cert.rank}/{len(cert.basis)}")
            if not cert.full_row_rank:
                all_full = False
        results.append(
            CheckResult(
                f"detection-rank p={p} n={n}",
                all_full,
                ", ".join(ranks),
            )
        )
    return results


def sylow_valuation() -> List[CheckResult]:
    """Criterion: the factor exponents sum to v_p(|GL_n(F_q)|) exactly, with
    the valuation taken from the explicit integer group order."""
    results = []
    checked = 0
    failed = []
    for n in range(1, 7):
        for q in (3, 5, 7):
            for p in (3, 5, 7):
                if p == q:
                    continue
                params = sylow_gl_parameters(n, q, p)
                gl_order = q ** (n * (n - 1) // 2)
                for i in range(1, n + 1):
                    gl_order *= q ** i - 1
                expected = vp(gl_order, p)
                checked += 1
                if params.exponent_sum() != expected:
                    failed.append((n, q, p))
    results.append(
        CheckResult(
            "sylow-gl exponent sum",
            not failed,
            f"{checked - len(failed)}/{checked} grid points match"
            + (f"; failures: {failed}" if failed else ""),
        )
    )
    return results


def _canonical_conjugate(G: FiniteGroup, members: Tuple[int, ...]) -> Tuple[int, ...]:
    orbit = {tuple(sorted(members))}
    frontier = [tuple(sorted(members))]
    while frontier:
        mem = frontier.pop()
        for g in G.generators():
            conj = tuple(sorted(G.conj(g, m) for m in mem))
            if conj not in orbit:
                orbit.add(conj)
                frontier.append(conj)
    return min(orbit)


def maximal_elabs() -> List[CheckResult]:
    """Criterion: recursive descriptors agree with brute-force enumeration on
    the desk-scale groups, and the maximal rank is p^(n-1)."""
    results = []
    for p, n in ((2, 2), (3, 2), (2, 3)):
        tower = make_iterated(p, n)
        G = tower.materialize()
        descriptors = maximal_elem_abelians(tower)
        catalog = elem_abelians_bruteforce(G, p=p)
        brute_classes = catalog.maximal_classes()
        realized_ok = True
        reps = set()
        for desc in descriptors:
            members = realize_descriptor(tower, desc)
            encoded = tuple(sorted(tower.encode(e) for e in members))
            if len(members) != p ** desc.rank:
                realized_ok = False
            if any(
                tower.power(e, p) != tower.identity(n) for e in members
            ):
                realized_ok = False
            reps.add(_canonical_conjugate(G, encoded))
        brute_reps = {c["representative"] for c in brute_classes}
        rank_multiset = sorted(d.rank for d in descriptors)
        brute_ranks = sorted(c["rank"] for c in brute_classes)
        max_rank_ok = max(d.rank for d in descriptors) == p ** (n - 1)
        passed = (
            realized_ok
            and reps == brute_reps
            and rank_multiset == brute_ranks
            and max_rank_ok
        )
        results.append(
            CheckResult(
                f"maximal-elabs p={p} n={n}",
                passed,
                f"{len(descriptors)} descriptor classes vs {len(brute_classes)} "
                f"brute classes; ranks {rank_multiset} vs {brute_ranks}; "
                f"max rank {max(rank_multiset)}",
            )
        )
    q8 = quaternion_group()
    cat = elem_abelians_bruteforce(q8, p=2)
    classes = cat.maximal_classes()
    results.append(
        CheckResult(
            "maximal-elabs quaternion8",
            len(classes) == 1 and classes[0]["rank"] == 1,
            f"{len(classes)} maximal class(es), ranks "
            f"{sorted(c['rank'] for c in classes)}",
        )
    )
    return results


def _random_class(rng: Random, p: int, n: int, max_degree: int) -> stabcoh.StableClass:
    coords = {}
    for k in range(max_degree + 1):
        for b in stabcoh.stable_basis(p, n, k):
            c = rng.randrange(p)
            if c:
                coords[b] = c
    return stabcoh.StableClass(p, n, coords)


def ring_sanity(seed: int = 7, triples: int = 1000) -> List[CheckResult]:
    """Criterion: theta^2 = 0, theta * norm = 0, and associativity plus
    graded commutativity of the detection product on random triples."""
    results = []
    p, n = 2, 3
    theta = stabcoh.theta_class(p, n)
    theta_sq = stabcoh.multiply(theta, theta)
    results.append(
        CheckResult("theta^2 = 0 (p=2, n=3)", theta_sq.is_zero, theta_sq.format())
    )
    norm_ok = True
    details = []
    for level in (2, 3):
        th = stabcoh.theta_class(p, level)
        top = p ** (level - 1)
        for k in range(p, top + 1, p):
            for b in stabcoh.stable_basis(p, level, k):
                if b[0] != "norm":
                    continue
                prod = stabcoh.multiply(th, stabcoh.basis_class(p, level, b))
                if not prod.is_zero:
                    norm_ok = False
                    details.append(stabcoh.format_basis_element(b))
    results.append(
        CheckResult(
            "theta * norm = 0 (p=2, n in {2,3})",
            norm_ok,
            "all norms" if norm_ok else f"failures: {details}",
        )
    )
    rng = Random(seed)
    assoc_ok = 0
    comm_ok = 0
    for _ in range(triples):
        a = _random_class(rng, p, n, 4)
        b = _random_class(rng, p, n, 4)
        c = _random_class(rng, p, n, 4)
        ab = stabcoh.multiply(a, b)
        left = stabcoh.multiply(ab, c)
        right = stabcoh.multiply(a, stabcoh.multiply(b, c))
        if left == right and stabcoh.detection_tuples_equal(left, right):
            assoc_ok += 1
        ba = stabcoh.multiply(b, a)
        if ab == ba and stabcoh.detection_tuples_equal(ab, ba):
            comm_ok += 1
    results.append(
        CheckResult(
            f"associativity on {triples} random triples",
            assoc_ok == triples,
            f"{assoc_ok}/{triples} exact (coords and detection tuples)",
        )
    )
    results.append(
        CheckResult(
            f"graded commutativity on {triples} random pairs",
            comm_ok == triples,
            f"{comm_ok}/{triples} exact",
        )
    )
    return results


SUITES = {
    "lemma-centralizers": lemma_centralizers,
    "isoclinism-classics": isoclinism_classics,
    "detection-rank": detection_rank,
    "hilbert-oracle": hilbert_oracle,
    "sylow-valuation": sylow_valuation,
}


def run_suite(name: str) -> List[CheckResult]:
    if name not in SUITES:
        raise KeyError(
            f"unknown suite {name!r}; choose from {sorted(SUITES)}"
        )
    return SUITES[name]()
