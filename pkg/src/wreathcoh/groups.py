"""Finite group arithmetic on 0-based element indices, plus brute-force oracles.

Groups expose ``order``, ``mul``, ``inv`` and ``identity``; elements are the
integers ``0..order-1``.  Structured groups (cyclic, direct products, wreath
products) compute products from their construction and never store a dense
multiplication table, so large towers stay affordable; explicit tables are
reserved for groups of order <= TABLE_LIMIT.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from random import Random
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

DEFAULT_ORDER_CAP = 1 << 20
TABLE_LIMIT = 4096
EXHAUSTIVE_ASSOCIATIVITY_LIMIT = 512
ASSOCIATIVITY_SAMPLES = 100_000
DEFAULT_SEARCH_BUDGET = 500_000


class GroupError(Exception):
    """Base class for group construction and operation failures."""


class InvalidGroupError(GroupError):
    """Input data does not define a group."""


class NotNormalError(GroupError):
    """A quotient was requested by a non-normal subgroup."""


class OrderOverflowError(GroupError):
    """A construction would exceed the configured order cap."""


class CapExceededError(GroupError):
    """A brute-force operation was asked to exceed its cap."""


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# core types


class FiniteGroup:
    """Finite group on indices 0..order-1 with a fixed identity index."""

    name: str = "group"
    order: int = 1
    identity: int = 0

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        cache = getattr(self, "_inv_cache", None)
        if cache is None:
            cache = {}
            self._inv_cache = cache
        b = cache.get(a)
        if b is None:
            for x in range(self.order):
                if self.mul(a, x) == self.identity:
                    b = x
                    break
            if b is None:
                raise InvalidGroupError(f"element {a} of {self.name} has no inverse")
            cache[a] = b
        return b

    def elements(self) -> range:
        return range(self.order)

    def label(self, a: int) -> str:
        return str(a)

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(a), -k)
        acc = self.identity
        base = a
        while k:
            if k & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def conj(self, g: int, x: int) -> int:
        return self.mul(self.mul(g, x), self.inv(g))

    def commutator(self, g: int, h: int) -> int:
        return self.mul(self.mul(g, h), self.mul(self.inv(g), self.inv(h)))

    def element_order(self, a: int) -> int:
        orders = getattr(self, "_order_cache", None)
        if orders is None:
            orders = {}
            self._order_cache = orders
        k = orders.get(a)
        if k is None:
            k, x = 1, a
            while x != self.identity:
                x = self.mul(x, a)
                k += 1
            orders[a] = k
        return k

    def generators(self) -> List[int]:
        gens = getattr(self, "_gens_cache", None)
        if gens is None:
            gens = generating_sequence(self)
            self._gens_cache = gens
        return list(gens)

    @property
    def is_abelian(self) -> bool:
        flag = getattr(self, "_abelian_cache", None)
        if flag is None:
            gens = self.generators()
            flag = all(
                self.mul(a, b) == self.mul(b, a) for a in gens for b in gens
            )
            self._abelian_cache = flag
        return flag

    def conjugacy_classes(self) -> List[Tuple[int, ...]]:
        classes = getattr(self, "_conj_cache", None)
        if classes is None:
            seen = [False] * self.order
            classes = []
            for x in range(self.order):
                if seen[x]:
                    continue
                orbit = {x}
                frontier = [x]
                while frontier:
                    y = frontier.pop()
                    for g in self.generators():
                        z = self.conj(g, y)
                        if z not in orbit:
                            orbit.add(z)
                            frontier.append(z)
                cls = tuple(sorted(orbit))
                classes.append(cls)
                for y in cls:
                    seen[y] = True
            self._conj_cache = classes
        return classes

    def class_sizes(self) -> Dict[int, int]:
        sizes = getattr(self, "_class_size_cache", None)
        if sizes is None:
            sizes = {}
            for cls in self.conjugacy_classes():
                for x in cls:
                    sizes[x] = len(cls)
            self._class_size_cache = sizes
        return sizes

    def fingerprint(self, a: int) -> Tuple[int, int]:
        """(element order, conjugacy class size) -- isomorphism invariant."""
        return (self.element_order(a), self.class_sizes()[a])

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} order={self.order}>"


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of ``parent`` given by a sorted tuple of member indices."""

    parent: FiniteGroup
    members: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self._member_set()

    def _member_set(self) -> frozenset:
        cached = getattr(self, "_members_frozen", None)
        if cached is None:
            cached = frozenset(self.members)
            object.__setattr__(self, "_members_frozen", cached)
        return cached

    def is_normal(self) -> bool:
        G = self.parent
        mem = self._member_set()
        return all(
            G.conj(g, x) in mem for g in G.generators() for x in self.members
        )

    def index_of(self, parent_index: int) -> int:
        lookup = getattr(self, "_index_lookup", None)
        if lookup is None:
            lookup = {x: i for i, x in enumerate(self.members)}
            object.__setattr__(self, "_index_lookup", lookup)
        return lookup[parent_index]


def subgroup(G: FiniteGroup, members: Iterable[int], check: bool = True) -> Subgroup:
    mem = tuple(sorted(set(members)))
    if check:
        ms = set(mem)
        if G.identity not in ms:
            raise InvalidGroupError("subgroup must contain the identity")
        for a in mem:
            if G.inv(a) not in ms:
                raise InvalidGroupError("subgroup not closed under inversion")
            for b in mem:
                if G.mul(a, b) not in ms:
                    raise InvalidGroupError("subgroup not closed under multiplication")
    return Subgroup(G, mem)


def generated_subgroup(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    gens = [g for g in gens]
    members = {G.identity}
    frontier = [G.identity]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = G.mul(x, g)
            if y not in members:
                members.add(y)
                frontier.append(y)
    return Subgroup(G, tuple(sorted(members)))


@dataclass(frozen=True)
class GroupHom:
    """Total map between element indices of two finite groups."""

    source: FiniteGroup
    target: FiniteGroup
    mapping: Tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.mapping[a]

    def is_homomorphism(self) -> bool:
        G, H = self.source, self.target
        if self.mapping[G.identity] != H.identity:
            return False
        return all(
            self.mapping[G.mul(a, b)] == H.mul(self.mapping[a], self.mapping[b])
            for a in range(G.order)
            for b in range(G.order)
        )

    def is_bijective(self) -> bool:
        return (
            self.source.order == self.target.order
            and len(set(self.mapping)) == self.source.order
        )


# ---------------------------------------------------------------------------
# concrete groups


class CyclicGroup(FiniteGroup):
    """Z/m with additive notation; element i is the residue i."""

    def __init__(self, m: int, name: Optional[str] = None) -> None:
        if m <= 0:
            raise InvalidGroupError(f"cyclic group order must be positive, got {m}")
        self.order = m
        self.name = name or f"cyclic:{m}"

    def mul(self, a: int, b: int) -> int:
        return (a + b) % self.order

    def inv(self, a: int) -> int:
        return (-a) % self.order

    def generators(self) -> List[int]:
        return [1] if self.order > 1 else []


class DihedralGroup(FiniteGroup):
    """Dihedral group of order 2m; index a + m*b encodes r^a s^b."""

    def __init__(self, order: int, name: Optional[str] = None) -> None:
        if order < 2 or order % 2:
            raise InvalidGroupError(f"dihedral order must be even >= 2, got {order}")
        self.order = order
        self.m = order // 2
        self.name = name or f"dihedral:{order}"

    def _split(self, x: int) -> Tuple[int, int]:
        return x % self.m, x // self.m

    def mul(self, a: int, b: int) -> int:
        a1, s1 = self._split(a)
        a2, s2 = self._split(b)
        rot = (a1 + (a2 if s1 == 0 else -a2)) % self.m
        return rot + self.m * (s1 ^ s2)

    def inv(self, a: int) -> int:
        a1, s1 = self._split(a)
        return ((-a1) % self.m) if s1 == 0 else a

    def label(self, a: int) -> str:
        a1, s1 = self._split(a)
        return f"r^{a1}" + ("*s" if s1 else "")

    def generators(self) -> List[int]:
        return [1, self.m] if self.m > 1 else [self.m]


class DirectProductGroup(FiniteGroup):
    """Direct product; factor 0 is the least significant index digit."""

    def __init__(
        self,
        factors: Sequence[FiniteGroup],
        name: Optional[str] = None,
        cap: int = DEFAULT_ORDER_CAP,
    ) -> None:
        if not factors:
            raise InvalidGroupError("direct product needs at least one factor")
        order = 1
        for f in factors:
            order *= f.order
            if order > cap:
                raise OrderOverflowError(
                    f"direct product order exceeds cap {cap}"
                )
        self.factors = list(factors)
        self.order = order
        self.name = name or "x".join(f.name for f in factors)

    def decode(self, x: int) -> Tuple[int, ...]:
        out = []
        for f in self.factors:
            x, r = divmod(x, f.order)
            out.append(r)
        return tuple(out)

    def encode(self, parts: Sequence[int]) -> int:
        x = 0
        for f, a in zip(reversed(self.factors), reversed(list(parts))):
            x = x * f.order + a
        return x

    def mul(self, a: int, b: int) -> int:
        pa, pb = self.decode(a), self.decode(b)
        return self.encode([f.mul(x, y) for f, x, y in zip(self.factors, pa, pb)])

    def inv(self, a: int) -> int:
        return self.encode([f.inv(x) for f, x in zip(self.factors, self.decode(a))])

    def label(self, a: int) -> str:
        parts = self.decode(a)
        return "(" + ",".join(f.label(x) for f, x in zip(self.factors, parts)) + ")"

    def generators(self) -> List[int]:
        gens = []
        for i, f in enumerate(self.factors):
            for g in f.generators():
                parts = [fac.identity for fac in self.factors]
                parts[i] = g
                gens.append(self.encode(parts))
        return gens


class WreathProductGroup(FiniteGroup):
    """H wr Z/p: base tuple of p copies of H, cyclically shifted by Z/p.

    Element index is ``s + p * sum(base_i * |H|**i)``; the product rule is
    (a, s)(b, t) = (a * shift_s(b), s + t) with shift_s(b)_i = b_{i-s}.
    """

    def __init__(
        self,
        base: FiniteGroup,
        p: int,
        name: Optional[str] = None,
        cap: int = DEFAULT_ORDER_CAP,
    ) -> None:
        if not is_prime(p):
            raise InvalidGroupError(f"wreath top must be cyclic of prime order, got {p}")
        order = (base.order ** p) * p
        if order > cap:
            raise OrderOverflowError(
                f"wreath product order {order} exceeds cap {cap}"
            )
        self.base = base
        self.p = p
        self.order = order
        self.name = name or f"({base.name})wr{p}"

    def decode(self, x: int) -> Tuple[Tuple[int, ...], int]:
        x, s = divmod(x, self.p)
        comps = []
        for _ in range(self.p):
            x, r = divmod(x, self.base.order)
            comps.append(r)
        return tuple(comps), s

    def encode(self, comps: Sequence[int], s: int) -> int:
        x = 0
        for a in reversed(list(comps)):
            x = x * self.base.order + a
        return x * self.p + s

    def mul(self, a: int, b: int) -> int:
        va, sa = self.decode(a)
        vb, sb = self.decode(b)
        comps = [
            self.base.mul(va[i], vb[(i - sa) % self.p]) for i in range(self.p)
        ]
        return self.encode(comps, (sa + sb) % self.p)

    def inv(self, a: int) -> int:
        va, sa = self.decode(a)
        comps = [self.base.inv(va[(j + sa) % self.p]) for j in range(self.p)]
        return self.encode(comps, (-sa) % self.p)

    def label(self, a: int) -> str:
        va, sa = self.decode(a)
        inner = ",".join(self.base.label(x) for x in va)
        return f"[{inner};{sa}]"

    def generators(self) -> List[int]:
        gens = []
        for g in self.base.generators():
            comps = [self.base.identity] * self.p
            comps[0] = g
            gens.append(self.encode(comps, 0))
        gens.append(self.encode([self.base.identity] * self.p, 1))
        return gens


class TableGroup(FiniteGroup):
    """Group given by an explicit dense multiplication table."""

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        labels: Optional[Sequence[str]] = None,
        name: str = "table-group",
    ) -> None:
        n = len(table)
        if n == 0:
            raise InvalidGroupError("empty multiplication table")
        rows = []
        for i, row in enumerate(table):
            if len(row) != n:
                raise InvalidGroupError(f"table row {i} has length {len(row)} != {n}")
            r = [int(x) for x in row]
            if any(x < 0 or x >= n for x in r):
                raise InvalidGroupError(f"table row {i} has out-of-range entries")
            rows.append(r)
        self.table = rows
        self.order = n
        self.name = name
        if labels is not None and len(labels) != n:
            raise InvalidGroupError("labels length does not match order")
        self.labels = [str(x) for x in labels] if labels is not None else None
        self.identity = self._find_identity()

    def _find_identity(self) -> int:
        for e in range(self.order):
            if all(
                self.table[e][x] == x and self.table[x][e] == x
                for x in range(self.order)
            ):
                return e
        raise InvalidGroupError("table has no two-sided identity")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)


class PermGroup(FiniteGroup):
    """Group generated by permutations of 0..degree-1 (one-line notation)."""

    def __init__(
        self,
        gens: Sequence[Sequence[int]],
        degree: int,
        name: str = "perm-group",
        cap: int = DEFAULT_ORDER_CAP,
    ) -> None:
        perms = []
        for g in gens:
            t = tuple(int(x) for x in g)
            if sorted(t) != list(range(degree)):
                raise InvalidGroupError(f"not a permutation of 0..{degree - 1}: {g}")
            perms.append(t)
        ident = tuple(range(degree))
        elements = {ident}
        frontier = [ident]
        while frontier:
            x = frontier.pop()
            for g in perms:
                y = tuple(x[g[i]] for i in range(degree))
                if y not in elements:
                    if len(elements) >= cap:
                        raise OrderOverflowError(
                            f"permutation group order exceeds cap {cap}"
                        )
                    elements.add(y)
                    frontier.append(y)
        self.perms = sorted(elements)
        self.degree = degree
        self.order = len(self.perms)
        self.name = name
        self._lookup = {perm: i for i, perm in enumerate(self.perms)}
        self.identity = self._lookup[ident]
        self._gen_indices = sorted({self._lookup[g] for g in perms})

    def mul(self, a: int, b: int) -> int:
        pa, pb = self.perms[a], self.perms[b]
        return self._lookup[tuple(pa[pb[i]] for i in range(self.degree))]

    def label(self, a: int) -> str:
        return "(" + ",".join(str(x) for x in self.perms[a]) + ")"

    def generators(self) -> List[int]:
        return list(self._gen_indices)


def quaternion_group() -> TableGroup:
    """Quaternion group of order 8 on {1,-1,i,-i,j,-j,k,-k}."""
    labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    axis_mul = {
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }
    def split(x: int) -> Tuple[int, int]:
        return x // 2, -1 if x % 2 else 1
    def join(axis: int, sign: int) -> int:
        return 2 * axis + (0 if sign == 1 else 1)
    table = []
    for a in range(8):
        ax1, s1 = split(a)
        row = []
        for b in range(8):
            ax2, s2 = split(b)
            ax, s = axis_mul[(ax1, ax2)]
            row.append(join(ax, s * s1 * s2))
        table.append(row)
    return TableGroup(table, labels=labels, name="quaternion8")


def elementary_abelian(p: int, r: int, cap: int = DEFAULT_ORDER_CAP) -> DirectProductGroup:
    if not is_prime(p):
        raise InvalidGroupError(f"elementary abelian base must be prime, got {p}")
    return DirectProductGroup(
        [CyclicGroup(p) for _ in range(r)], name=f"elab:{p}^{r}", cap=cap
    )


def trivial_group() -> CyclicGroup:
    return CyclicGroup(1, name="trivial")


# ---------------------------------------------------------------------------
# validation


def validate_group(G: FiniteGroup, seed: int = 0) -> None:
    """Check the group axioms; exhaustive for order <= 512, sampled above."""
    n = G.order
    e = G.identity
    for x in range(n):
        if G.mul(e, x) != x or G.mul(x, e) != x:
            raise InvalidGroupError(f"identity fails at element {x}")
        G.inv(x)  # raises if no inverse exists
    if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT:
        for a in range(n):
            for b in range(n):
                ab = G.mul(a, b)
                for c in range(n):
                    if G.mul(ab, c) != G.mul(a, G.mul(b, c)):
                        raise InvalidGroupError(
                            f"associativity fails at ({a},{b},{c})"
                        )
    else:
        rng = Random(seed)
        for _ in range(ASSOCIATIVITY_SAMPLES):
            a, b, c = (rng.randrange(n) for _ in range(3))
            if G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c)):
                raise InvalidGroupError(f"associativity fails at ({a},{b},{c})")


# ---------------------------------------------------------------------------
# brute-force oracles


def center(G: FiniteGroup) -> Subgroup:
    members = [
        z
        for z in range(G.order)
        if all(G.mul(z, g) == G.mul(g, z) for g in range(G.order))
    ]
    return Subgroup(G, tuple(members))


def centralizer_bruteforce(G: FiniteGroup, x: int) -> Subgroup:
    if not 0 <= x < G.order:
        raise GroupError(f"element index {x} out of range")
    members = [g for g in range(G.order) if G.mul(g, x) == G.mul(x, g)]
    return Subgroup(G, tuple(members))


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    """Normal closure of the commutators of a generating set."""
    gens = G.generators()
    seeds = {G.commutator(a, b) for a in gens for b in gens}
    seeds.discard(G.identity)
    work = sorted(seeds)
    members = set(generated_subgroup(G, work).members)
    while True:
        new = sorted(
            {G.conj(g, w) for g in gens for w in work} - members
        )
        if not new:
            break
        work.extend(new)
        members = set(generated_subgroup(G, work).members)
    return Subgroup(G, tuple(sorted(members)))


def quotient(G: FiniteGroup, N: Subgroup) -> Tuple[TableGroup, GroupHom]:
    if N.parent is not G:
        raise GroupError("subgroup does not belong to this group")
    if not N.is_normal():
        raise NotNormalError(f"subgroup of order {N.order} is not normal in {G.name}")
    rep_of = [-1] * G.order
    reps = []
    for x in range(G.order):
        if rep_of[x] >= 0:
            continue
        coset = sorted(G.mul(x, n) for n in N.members)
        rep = coset[0]
        reps.append(rep)
        for y in coset:
            rep_of[y] = rep
    reps.sort()
    index_of = {rep: i for i, rep in enumerate(reps)}
    table = [
        [index_of[rep_of[G.mul(a, b)]] for b in reps]
        for a in reps
    ]
    labels = [G.label(rep) + "*N" for rep in reps]
    Q = TableGroup(table, labels=labels, name=f"{G.name}/N{N.order}")
    proj = GroupHom(G, Q, tuple(index_of[rep_of[x]] for x in range(G.order)))
    return Q, proj


def abelianization(G: FiniteGroup) -> Tuple[TableGroup, GroupHom]:
    return quotient(G, derived_subgroup(G))


def direct_product(
    groups: Sequence[FiniteGroup], cap: int = DEFAULT_ORDER_CAP
) -> DirectProductGroup:
    return DirectProductGroup(groups, cap=cap)


def wreath_with_cyclic(
    H: FiniteGroup, p: int, cap: int = DEFAULT_ORDER_CAP
) -> WreathProductGroup:
    return WreathProductGroup(H, p, cap=cap)


def subgroup_as_group(sub: Subgroup, name: Optional[str] = None) -> TableGroup:
    """Reindex a subgroup as a standalone TableGroup."""
    G = sub.parent
    index = {x: i for i, x in enumerate(sub.members)}
    table = [
        [index[G.mul(a, b)] for b in sub.members]
        for a in sub.members
    ]
    labels = [G.label(x) for x in sub.members]
    return TableGroup(table, labels=labels, name=name or f"{G.name}-sub{sub.order}")


def dense_table(G: FiniteGroup) -> TableGroup:
    if G.order > TABLE_LIMIT:
        raise CapExceededError(
            f"dense tables are limited to order {TABLE_LIMIT}, got {G.order}"
        )
    table = [[G.mul(a, b) for b in range(G.order)] for a in range(G.order)]
    labels = [G.label(x) for x in range(G.order)]
    return TableGroup(table, labels=labels, name=G.name)


# ---------------------------------------------------------------------------
# generating sequences and isomorphism search


def generating_sequence(G: FiniteGroup) -> List[int]:
    """Greedy generating sequence: highest element order first, ties by index."""
    gens: List[int] = []
    closure = {G.identity}
    while len(closure) < G.order:
        best = None
        best_key = None
        for x in range(G.order):
            if x in closure:
                continue
            key = (-G.element_order(x), x)
            if best_key is None or key < best_key:
                best, best_key = x, key
        gens.append(best)
        closure = set(generated_subgroup(G, gens).members)
    return gens


FOUND = "found"
NOT_ISOMORPHIC = "not_isomorphic"
BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass
class IsoSearchResult:
    status: str
    hom: Optional[GroupHom]
    nodes: int

    @property
    def found(self) -> bool:
        return self.status == FOUND


def _backtrack_isomorphism(G, H, fp_g, fp_h, budget, pair_check=None):
    """Generator-image backtracking for bijective homs G -> H.

    ``fp_g``/``fp_h`` map elements to hashable invariants that any acceptable
    isomorphism must preserve.  ``pair_check(mapping)`` may reject a partial
    or total mapping (used for commutator-pairing compatibility).  Returns
    (status, mapping-or-None, nodes).
    """
    if G.order != H.order:
        return NOT_ISOMORPHIC, None, 0
    gens = G.generators()
    candidates = [
        [h for h in range(H.order) if fp_h[h] == fp_g[g]] for g in gens
    ]
    if any(not c for c in candidates):
        return NOT_ISOMORPHIC, None, 0
    nodes = 0
    budget_hit = False

    def close(mapping, used, new_items):
        queue = list(new_items)
        while queue:
            x, y = queue.pop()
            assigned = [(g, mapping[g]) for g in gens if g in mapping]
            for g, h in assigned:
                for a, b in ((G.mul(x, g), H.mul(y, h)), (G.mul(g, x), H.mul(h, y))):
                    cur = mapping.get(a)
                    if cur is None:
                        if b in used or fp_g[a] != fp_h[b]:
                            return False
                        mapping[a] = b
                        used[b] = a
                        queue.append((a, b))
                    elif cur != b:
                        return False
        return True

    def extend(depth, mapping, used):
        nonlocal nodes, budget_hit
        if depth == len(gens):
            return dict(mapping)
        g = gens[depth]
        if g in mapping:
            return extend(depth + 1, mapping, used)
        for h in candidates[depth]:
            if h in used:
                continue
            nodes += 1
            if nodes > budget:
                budget_hit = True
                return None
            m2, u2 = dict(mapping), dict(used)
            m2[g] = h
            u2[h] = g
            # re-queue every known pair so its products with the newly
            # assigned generator are checked as well; this makes a completed
            # mapping a certified homomorphism on the generated subgroup
            if not close(m2, u2, list(m2.items())):
                continue
            if pair_check is not None and not pair_check(m2):
                continue
            result = extend(depth + 1, m2, u2)
            if result is not None or budget_hit:
                return result
        return None

    base = {G.identity: H.identity}
    mapping = extend(0, base, {H.identity: G.identity})
    if mapping is not None:
        if len(mapping) != G.order:
            raise GroupError("internal error: generators did not generate")
        return FOUND, mapping, nodes
    if budget_hit:
        return BUDGET_EXHAUSTED, None, nodes
    return NOT_ISOMORPHIC, None, nodes


def isomorphism_search(
    G: FiniteGroup, H: FiniteGroup, budget: int = DEFAULT_SEARCH_BUDGET
) -> IsoSearchResult:
    """Search for an isomorphism G -> H by backtracking over generator images."""
    if G.order != H.order:
        return IsoSearchResult(NOT_ISOMORPHIC, None, 0)
    if G is H:
        hom = GroupHom(G, H, tuple(range(G.order)))
        return IsoSearchResult(FOUND, hom, 0)
    fp_g = {x: G.fingerprint(x) for x in range(G.order)}
    fp_h = {x: H.fingerprint(x) for x in range(H.order)}
    if sorted(fp_g.values()) != sorted(fp_h.values()):
        return IsoSearchResult(NOT_ISOMORPHIC, None, 0)
    status, mapping, nodes = _backtrack_isomorphism(G, H, fp_g, fp_h, budget)
    if status != FOUND:
        return IsoSearchResult(status, None, nodes)
    hom = GroupHom(G, H, tuple(mapping[x] for x in range(G.order)))
    if G.order <= 1024 and not hom.is_homomorphism():
        raise GroupError("internal error: search returned a non-homomorphism")
    return IsoSearchResult(FOUND, hom, nodes)


# ---------------------------------------------------------------------------
# group sources: builtin names, JSON files


_CYCLIC_RE = re.compile(r"cyclic:(\d+)$")
_DIHEDRAL_RE = re.compile(r"dihedral:(\d+)$")
_ELAB_RE = re.compile(r"elab:(\d+)\^(\d+)$")
_WREATH_RE = re.compile(r"wreath:p=(\d+),n=(\d+)$")


def builtin_group(name: str, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Resolve a builtin group name; raises InvalidGroupError if unknown."""
    name = name.strip()
    if name == "quaternion8":
        return quaternion_group()
    if name == "trivial":
        return trivial_group()
    m = _CYCLIC_RE.match(name)
    if m:
        return CyclicGroup(int(m.group(1)))
    m = _DIHEDRAL_RE.match(name)
    if m:
        return DihedralGroup(int(m.group(1)))
    m = _ELAB_RE.match(name)
    if m:
        return elementary_abelian(int(m.group(1)), int(m.group(2)), cap=cap)
    m = _WREATH_RE.match(name)
    if m:
        p, n = int(m.group(1)), int(m.group(2))
        if not is_prime(p):
            raise InvalidGroupError(f"wreath base must be prime, got {p}")
        G: FiniteGroup = CyclicGroup(p, name=f"wreath:p={p},n=1")
        for k in range(2, n + 1):
            G = WreathProductGroup(G, p, name=f"wreath:p={p},n={k}", cap=cap)
        return G
    raise InvalidGroupError(f"unknown builtin group name: {name!r}")


def load_group_file(path: Path, seed: int = 0, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if "table" in data:
        G = TableGroup(
            data["table"], labels=data.get("labels"), name=str(Path(path).stem)
        )
        validate_group(G, seed=seed)
        return G
    if "perm_gens" in data:
        degree = data.get("degree")
        if degree is None:
            raise InvalidGroupError("permutation group file needs a 'degree' field")
        return PermGroup(
            data["perm_gens"], int(degree), name=str(Path(path).stem), cap=cap
        )
    raise InvalidGroupError("group file needs either 'table' or 'perm_gens'")


def load_group(source: str, seed: int = 0, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Resolve a builtin name or a JSON file path to a group."""
    try:
        return builtin_group(source, cap=cap)
    except InvalidGroupError:
        pass
    path = Path(source)
    if not path.exists():
        raise InvalidGroupError(
            f"{source!r} is neither a builtin group name nor an existing file"
        )
    return load_group_file(path, seed=seed, cap=cap)


def builtin_catalog(max_order: int) -> List[FiniteGroup]:
    """Deterministic sample of builtin groups of order <= max_order."""
    groups: List[FiniteGroup] = []
    for m in range(1, max_order + 1):
        groups.append(CyclicGroup(m))
    for m in range(2, max_order // 2 + 1):
        groups.append(DihedralGroup(2 * m))
    for p in (2, 3, 5, 7):
        r = 2
        while p ** r <= max_order:
            groups.append(elementary_abelian(p, r))
            r += 1
    if max_order >= 8:
        groups.append(quaternion_group())
        groups.append(builtin_group("wreath:p=2,n=2"))
    return groups
