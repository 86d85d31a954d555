"""Isoclinism testing with explicit, verifiable witnesses.

Two groups are isoclinic when their inner quotients G/Z and derived
subgroups [G,G] are isomorphic compatibly with the commutator pairing.
The decision procedure searches the inner-quotient isomorphism by
backtracking over generator images; the derived-subgroup map is never
searched independently because the commutator square forces it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .groups import (
    BUDGET_EXHAUSTED,
    CapExceededError,
    DEFAULT_SEARCH_BUDGET,
    FiniteGroup,
    GroupError,
    GroupHom,
    NOT_ISOMORPHIC,
    Subgroup,
    TableGroup,
    _backtrack_isomorphism,
    center,
    derived_subgroup,
    direct_product,
    generated_subgroup,
    quotient,
    subgroup,
    subgroup_as_group,
)

ISOCLINIC = "isoclinic"
NOT_ISOCLINIC = "not_isoclinic"

_PAIRING_VERIFY_LIMIT = 512


@dataclass
class CommutatorPairing:
    """Commutator form of a group: the induced pairing G/Z x G/Z -> [G,G].

    ``pairing[a][b]`` is the parent index of the commutator of any lifts of
    the cosets a and b; well-definedness is checked exhaustively for groups
    of order <= 512.
    """

    group: FiniteGroup
    center_sub: Subgroup
    quotient_group: TableGroup
    projection: GroupHom
    derived: Subgroup
    lifts: Tuple[int, ...]
    pairing: Tuple[Tuple[int, ...], ...]

    def profile(self, a: int) -> Tuple:
        """Invariant of a coset under pairing-compatible isomorphisms."""
        G = self.group
        orders = sorted(G.element_order(v) for v in self.pairing[a])
        return (self.quotient_group.element_order(a), tuple(orders))


def commutator_pairing(G: FiniteGroup, verify: Optional[bool] = None) -> CommutatorPairing:
    Z = center(G)
    Q, proj = quotient(G, Z)
    D = derived_subgroup(G)
    lifts = [-1] * Q.order
    for x in range(G.order):
        q = proj(x)
        if lifts[q] < 0:
            lifts[q] = x
    pairing = tuple(
        tuple(G.commutator(lifts[a], lifts[b]) for b in range(Q.order))
        for a in range(Q.order)
    )
    result = CommutatorPairing(
        group=G,
        center_sub=Z,
        quotient_group=Q,
        projection=proj,
        derived=D,
        lifts=tuple(lifts),
        pairing=pairing,
    )
    if verify is None:
        verify = G.order <= _PAIRING_VERIFY_LIMIT
    if verify:
        for x in range(G.order):
            for y in range(G.order):
                if G.commutator(x, y) != pairing[proj(x)][proj(y)]:
                    raise GroupError(
                        "commutator pairing is not constant on center cosets"
                    )
        for a in range(Q.order):
            if pairing[a][a] != G.identity:
                raise GroupError("commutator pairing is not alternating")
    return result


@dataclass
class IsoclinismWitness:
    """Compatible isomorphisms on inner quotients and derived subgroups."""

    pairing1: CommutatorPairing
    pairing2: CommutatorPairing
    quotient_map: Tuple[int, ...]      # Q1 index -> Q2 index
    derived_map: Dict[int, int]        # parent1 index -> parent2 index

    def verify(self) -> bool:
        """Exhaustively check bijectivity, homomorphy and the commutator square."""
        P1, P2 = self.pairing1, self.pairing2
        Q1, Q2 = P1.quotient_group, P2.quotient_group
        i = self.quotient_map
        if Q1.order != Q2.order or len(set(i)) != Q1.order:
            return False
        hom_i = GroupHom(Q1, Q2, tuple(i))
        if not hom_i.is_homomorphism():
            return False
        D1, D2 = P1.derived, P2.derived
        j = self.derived_map
        if set(j.keys()) != set(D1.members) or set(j.values()) != set(D2.members):
            return False
        G1, G2 = P1.group, P2.group
        for a in D1.members:
            for b in D1.members:
                if j[G1.mul(a, b)] != G2.mul(j[a], j[b]):
                    return False
        for a in range(Q1.order):
            for b in range(Q1.order):
                if j[P1.pairing[a][b]] != P2.pairing[i[a]][i[b]]:
                    return False
        return True

    def to_json(self) -> dict:
        derived_members = list(self.pairing1.derived.members)
        return {
            "quotient_map": list(self.quotient_map),
            "derived_members": derived_members,
            "derived_map": [self.derived_map[d] for d in derived_members],
            "square_verified": True,
        }


@dataclass
class IsoclinismResult:
    status: str                    # ISOCLINIC | NOT_ISOCLINIC | BUDGET_EXHAUSTED
    witness: Optional[IsoclinismWitness]
    nodes: int

    @property
    def verdict(self) -> Optional[bool]:
        if self.status == ISOCLINIC:
            return True
        if self.status == NOT_ISOCLINIC:
            return False
        return None


def _force_derived_map(
    P1: CommutatorPairing, P2: CommutatorPairing, imap: Sequence[int]
) -> Optional[Dict[int, int]]:
    """Extend j from commutator values multiplicatively; None on conflict."""
    G1, G2 = P1.group, P2.group
    q = P1.quotient_group.order
    j: Dict[int, int] = {G1.identity: G2.identity}
    seeds: List[Tuple[int, int]] = []
    for a in range(q):
        for b in range(q):
            d = P1.pairing[a][b]
            e = P2.pairing[imap[a]][imap[b]]
            cur = j.get(d)
            if cur is None:
                j[d] = e
                seeds.append((d, e))
            elif cur != e:
                return None
    frontier = list(j.items())
    while frontier:
        d1, e1 = frontier.pop()
        for d2, e2 in seeds:
            d, e = G1.mul(d1, d2), G2.mul(e1, e2)
            cur = j.get(d)
            if cur is None:
                j[d] = e
                frontier.append((d, e))
            elif cur != e:
                return None
    if set(j.keys()) != set(P1.derived.members):
        return None
    if len(set(j.values())) != len(j) or set(j.values()) != set(P2.derived.members):
        return None
    for a in P1.derived.members:
        for b in P1.derived.members:
            if j[G1.mul(a, b)] != G2.mul(j[a], j[b]):
                return None
    return j


def _invariant_filter(P1: CommutatorPairing, P2: CommutatorPairing) -> bool:
    """Necessary conditions: quotient and derived orders, pairing profiles."""
    if P1.quotient_group.order != P2.quotient_group.order:
        return False
    if P1.derived.order != P2.derived.order:
        return False
    prof1 = sorted(P1.profile(a) for a in range(P1.quotient_group.order))
    prof2 = sorted(P2.profile(a) for a in range(P2.quotient_group.order))
    return prof1 == prof2


def is_isoclinic(
    G1: FiniteGroup,
    G2: FiniteGroup,
    budget: int = DEFAULT_SEARCH_BUDGET,
    _skip_filter: bool = False,
) -> IsoclinismResult:
    """Decide isoclinism; NOT_ISOCLINIC is only returned after exhausting the
    inner-quotient search space (the derived map is forced, never searched)."""
    P1 = commutator_pairing(G1)
    P2 = commutator_pairing(G2)
    if not _skip_filter and not _invariant_filter(P1, P2):
        return IsoclinismResult(NOT_ISOCLINIC, None, 0)
    if P1.quotient_group.order != P2.quotient_group.order:
        return IsoclinismResult(NOT_ISOCLINIC, None, 0)
    Q1, Q2 = P1.quotient_group, P2.quotient_group

    def finish(imap: Sequence[int], nodes: int) -> Optional[IsoclinismResult]:
        j = _force_derived_map(P1, P2, imap)
        if j is None:
            return None
        witness = IsoclinismWitness(P1, P2, tuple(imap), j)
        if not witness.verify():
            raise GroupError("internal error: witness failed verification")
        return IsoclinismResult(ISOCLINIC, witness, nodes)

    # Fast path: identity on indices when comparing a group with itself.
    if G1 is G2:
        ident = tuple(range(Q1.order))
        result = finish(ident, 0)
        if result is not None:
            return result

    def pair_check(mapping: Dict[int, int]) -> bool:
        keys = list(mapping)
        j: Dict[int, int] = {}
        for a in keys:
            ia = mapping[a]
            row1, row2 = P1.pairing[a], P2.pairing[ia]
            for b in keys:
                d, e = row1[b], row2[mapping[b]]
                cur = j.get(d)
                if cur is None:
                    j[d] = e
                elif cur != e:
                    return False
        if len(mapping) == Q1.order:
            # Total map: require the forced derived map to extend fully, so
            # that search exhaustion genuinely means "not isoclinic".
            imap = tuple(mapping[a] for a in range(Q1.order))
            return _force_derived_map(P1, P2, imap) is not None
        return True

    fp1 = {a: P1.profile(a) for a in range(Q1.order)}
    fp2 = {a: P2.profile(a) for a in range(Q2.order)}
    if sorted(fp1.values()) != sorted(fp2.values()):
        return IsoclinismResult(NOT_ISOCLINIC, None, 0)

    status, mapping, nodes = _backtrack_isomorphism(
        Q1, Q2, fp1, fp2, budget, pair_check=pair_check
    )
    if status == BUDGET_EXHAUSTED:
        return IsoclinismResult(BUDGET_EXHAUSTED, None, nodes)
    if status == NOT_ISOMORPHIC:
        return IsoclinismResult(NOT_ISOCLINIC, None, nodes)
    imap = tuple(mapping[a] for a in range(Q1.order))
    result = finish(imap, nodes)
    if result is None:
        raise GroupError("internal error: accepted mapping failed to extend")
    return result


def isoclinic_to_abelian_extension(
    G: FiniteGroup, A: FiniteGroup, budget: int = DEFAULT_SEARCH_BUDGET
) -> IsoclinismResult:
    """Executable form of insensitivity to abelian direct factors:
    decide whether G is isoclinic to G x A for abelian A."""
    if not A.is_abelian:
        raise GroupError(f"{A.name} is not abelian")
    product = direct_product([G, A])
    return is_isoclinic(G, product, budget=budget)


@dataclass
class SpotcheckEntry:
    quotient_subgroup_order: int
    subgroup_order_1: int
    subgroup_order_2: int
    status: str
    passed: bool


@dataclass
class SpotcheckReport:
    entries: List[SpotcheckEntry]

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries)


def _all_subgroups(Q: FiniteGroup) -> List[Tuple[int, ...]]:
    trivial = (Q.identity,)
    found = {trivial}
    frontier = [trivial]
    while frontier:
        members = frontier.pop()
        for x in range(Q.order):
            if x in members:
                continue
            bigger = generated_subgroup(Q, list(members) + [x]).members
            if bigger not in found:
                found.add(bigger)
                frontier.append(bigger)
    return sorted(found)


def hall_correspondence_spotcheck(
    G1: FiniteGroup,
    G2: FiniteGroup,
    witness: IsoclinismWitness,
    max_order: int = 64,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> SpotcheckReport:
    """For each subgroup of G1 containing the center, locate the
    corresponding subgroup of G2 through the witness and check that the two
    are isoclinic."""
    if G1.order > max_order or G2.order > max_order:
        raise CapExceededError(
            f"spot-check capped at order {max_order}; got {G1.order}, {G2.order}"
        )
    P1, P2 = witness.pairing1, witness.pairing2
    imap = witness.quotient_map
    entries = []
    for members in _all_subgroups(P1.quotient_group):
        bar = set(members)
        pre1 = [x for x in range(G1.order) if P1.projection(x) in bar]
        image_bar = {imap[a] for a in bar}
        pre2 = [x for x in range(G2.order) if P2.projection(x) in image_bar]
        S1 = subgroup_as_group(subgroup(G1, pre1, check=False))
        S2 = subgroup_as_group(subgroup(G2, pre2, check=False))
        result = is_isoclinic(S1, S2, budget=budget)
        entries.append(
            SpotcheckEntry(
                quotient_subgroup_order=len(members),
                subgroup_order_1=S1.order,
                subgroup_order_2=S2.order,
                status=result.status,
                passed=result.status == ISOCLINIC,
            )
        )
    return SpotcheckReport(entries=entries)
