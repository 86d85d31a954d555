"""Iterated wreath products of Z/p: structured element arithmetic, the
centralizer case analysis with normal forms, maximal elementary abelian
subgroups, and Sylow parameters of GL_n over finite fields.

Elements are nested tuples: a level-1 element is a residue mod p, a level-n
element is ``(components, shift)`` with exactly p level-(n-1) components.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .groups import (
    CyclicGroup,
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    GroupError,
    OrderOverflowError,
    CapExceededError,
    WreathProductGroup,
    direct_product,
    is_prime,
    subgroup_as_group,
)

Element = Union[int, Tuple[tuple, int]]


class LevelMismatchError(GroupError):
    """Operands of a wreath operation live at different levels."""


class NotCaseBError(GroupError):
    """Normal form was requested for an element with trivial shift."""


class WitnessBudgetExhaustedError(GroupError):
    """An isoclinism witness was requested but the search budget ran out."""


class UnsupportedParametersError(GroupError):
    """Sylow parameters requested outside the supported (odd, coprime) range."""


def element_level(x: Element) -> int:
    level = 1
    while not isinstance(x, int):
        x = x[0][0]
        level += 1
    return level


class WreathTower:
    """Handle for G_n = Z/p wr ... wr Z/p with n cyclic factors."""

    def __init__(self, p: int, n: int, cap: int = DEFAULT_ORDER_CAP) -> None:
        if not is_prime(p):
            raise GroupError(f"tower base must be a prime, got {p}")
        if n < 1:
            raise GroupError(f"tower needs at least one level, got {n}")
        exponent = (p ** n - 1) // (p - 1)
        if p ** exponent > cap:
            raise OrderOverflowError(
                f"tower order p^{exponent} exceeds cap {cap}"
            )
        self.p = p
        self.n = n
        self.cap = cap

    # -- basic structure ----------------------------------------------------

    def order(self, level: Optional[int] = None) -> int:
        level = self.n if level is None else level
        return self.p ** ((self.p ** level - 1) // (self.p - 1))

    def identity(self, level: Optional[int] = None) -> Element:
        level = self.n if level is None else level
        if level == 1:
            return 0
        sub = self.identity(level - 1)
        return ((sub,) * self.p, 0)

    def shift_generator(self, level: Optional[int] = None) -> Element:
        level = self.n if level is None else level
        if level == 1:
            return 1
        return ((self.identity(level - 1),) * self.p, 1)

    def check_element(self, x: Element, level: Optional[int] = None) -> int:
        """Validate shape and residues; returns the element's level."""
        if isinstance(x, int):
            if not 0 <= x < self.p:
                raise GroupError(f"residue {x} out of range for p={self.p}")
            found = 1
        else:
            comps, shift = x
            if len(comps) != self.p:
                raise GroupError(
                    f"level node needs exactly {self.p} components, got {len(comps)}"
                )
            if not 0 <= shift < self.p:
                raise GroupError(f"shift {shift} out of range for p={self.p}")
            sub_levels = {self.check_element(c) for c in comps}
            if len(sub_levels) != 1:
                raise LevelMismatchError("components live at different levels")
            found = sub_levels.pop() + 1
        if level is not None and found != level:
            raise LevelMismatchError(f"expected level {level}, got {found}")
        return found

    # -- arithmetic ---------------------------------------------------------

    def multiply(self, a: Element, b: Element) -> Element:
        if isinstance(a, int) or isinstance(b, int):
            if not (isinstance(a, int) and isinstance(b, int)):
                raise LevelMismatchError("cannot multiply elements of different levels")
            return (a + b) % self.p
        (va, sa), (vb, sb) = a, b
        if len(va) != len(vb):
            raise LevelMismatchError("cannot multiply elements of different levels")
        p = self.p
        comps = tuple(self.multiply(va[i], vb[(i - sa) % p]) for i in range(p))
        return (comps, (sa + sb) % p)

    def inverse(self, a: Element) -> Element:
        if isinstance(a, int):
            return (-a) % self.p
        va, sa = a
        p = self.p
        comps = tuple(self.inverse(va[(j + sa) % p]) for j in range(p))
        return (comps, (-sa) % p)

    def power(self, a: Element, k: int) -> Element:
        level = element_level(a)
        if k < 0:
            return self.power(self.inverse(a), -k)
        acc = self.identity(level)
        base = a
        while k:
            if k & 1:
                acc = self.multiply(acc, base)
            base = self.multiply(base, base)
            k >>= 1
        return acc

    def conjugate(self, g: Element, x: Element) -> Element:
        return self.multiply(self.multiply(g, x), self.inverse(g))

    def element_order(self, a: Element) -> int:
        level = element_level(a)
        ident = self.identity(level)
        k, x = 1, a
        while x != ident:
            x = self.multiply(x, a)
            k += 1
        return k

    # -- constructors -------------------------------------------------------

    def embed(self, comp: Element, position: int, level: Optional[int] = None) -> Element:
        """Element with ``comp`` at ``position``, identities elsewhere, shift 0."""
        level = (element_level(comp) + 1) if level is None else level
        ident = self.identity(level - 1)
        comps = [ident] * self.p
        comps[position] = comp
        return (tuple(comps), 0)

    def diagonal(self, comp: Element) -> Element:
        return ((comp,) * self.p, 0)

    def components(self, x: Element) -> Tuple[Element, ...]:
        if isinstance(x, int):
            raise LevelMismatchError("level-1 elements have no components")
        return x[0]

    def shift(self, x: Element) -> int:
        if isinstance(x, int):
            raise LevelMismatchError("level-1 elements have no shift")
        return x[1]

    # -- index bijection and materialization --------------------------------

    def encode(self, x: Element) -> int:
        if isinstance(x, int):
            return x
        comps, s = x
        sub_order = self.order(element_level(comps[0]))
        acc = 0
        for c in reversed(comps):
            acc = acc * sub_order + self.encode(c)
        return acc * self.p + s

    def decode(self, index: int, level: Optional[int] = None) -> Element:
        level = self.n if level is None else level
        if level == 1:
            return index
        index, s = divmod(index, self.p)
        sub_order = self.order(level - 1)
        comps = []
        for _ in range(self.p):
            index, r = divmod(index, sub_order)
            comps.append(self.decode(r, level - 1))
        return (tuple(comps), s)

    def elements(self, level: Optional[int] = None) -> Iterator[Element]:
        level = self.n if level is None else level
        for i in range(self.order(level)):
            yield self.decode(i, level)

    def materialize(self, level: Optional[int] = None) -> FiniteGroup:
        """Bridge to an index-based FiniteGroup with the same element encoding."""
        level = self.n if level is None else level
        G: FiniteGroup = CyclicGroup(self.p, name=f"wreath:p={self.p},n=1")
        for k in range(2, level + 1):
            G = WreathProductGroup(
                G, self.p, name=f"wreath:p={self.p},n={k}", cap=self.cap
            )
        return G

    def closure(self, gens: Sequence[Element]) -> set:
        level = element_level(gens[0]) if gens else self.n
        members = {self.identity(level)}
        frontier = [self.identity(level)]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.multiply(x, g)
                if y not in members:
                    members.add(y)
                    frontier.append(y)
        return members

    def conjugacy_orbit(self, x: Element) -> Dict[Element, Element]:
        """Map each conjugate y of x to one g with g x g^-1 = y."""
        level = element_level(x)
        orbit = {x: self.identity(level)}
        frontier = [x]
        gens = self._level_generators(level)
        while frontier:
            y = frontier.pop()
            for g in gens:
                z = self.conjugate(g, y)
                if z not in orbit:
                    orbit[z] = self.multiply(g, orbit[y])
                    frontier.append(z)
        return orbit

    def _level_generators(self, level: int) -> List[Element]:
        if level == 1:
            return [1]
        return [
            self.embed(g, 0, level) for g in self._level_generators(level - 1)
        ] + [self.shift_generator(level)]


def make_iterated(p: int, n: int, cap: int = DEFAULT_ORDER_CAP) -> WreathTower:
    return WreathTower(p, n, cap=cap)


def multiply(tower: WreathTower, a: Element, b: Element) -> Element:
    return tower.multiply(a, b)


# ---------------------------------------------------------------------------
# element syntax (CLI-facing)


def format_element(x: Element) -> str:
    if isinstance(x, int):
        return str(x)
    comps, s = x
    return "[" + ",".join(format_element(c) for c in comps) + f";{s}]"


def _tokenize_brackets(text: str):
    """Parse a bracket expression into ints and (items, shift-or-None) nodes."""
    text = text.strip()
    pos = 0

    def parse():
        nonlocal pos
        if pos < len(text) and text[pos] == "[":
            pos += 1
            items = []
            shift = None
            while True:
                items.append(parse())
                if pos >= len(text):
                    raise GroupError(f"unbalanced brackets in element: {text!r}")
                ch = text[pos]
                if ch == ",":
                    pos += 1
                    continue
                if ch == ";":
                    pos += 1
                    start = pos
                    while pos < len(text) and text[pos].isdigit():
                        pos += 1
                    if start == pos:
                        raise GroupError(f"missing shift after ';' in {text!r}")
                    shift = int(text[start:pos])
                    if pos >= len(text) or text[pos] != "]":
                        raise GroupError(f"expected ']' after shift in {text!r}")
                    pos += 1
                    return (items, shift)
                if ch == "]":
                    pos += 1
                    return (items, None)
                raise GroupError(f"unexpected character {ch!r} in element {text!r}")
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if start == pos:
            raise GroupError(f"expected a digit at position {pos} in {text!r}")
        return int(text[start:pos])

    node = parse()
    if pos != len(text):
        raise GroupError(f"trailing characters in element: {text!r}")
    return node


def parse_element(text: str, p: int, level: int) -> Element:
    """Parse CLI element syntax.

    Canonical form is a digit at level 1 and ``[e_1,...,e_p;s]`` above;
    ``;0`` may be omitted and the component list may be wrapped in an extra
    bracket pair (``[[1,0];1]`` is accepted for ``[1,0;1]``).
    """

    def coerce(node, lvl: int) -> Element:
        if lvl == 1:
            if isinstance(node, int):
                if not 0 <= node < p:
                    raise GroupError(f"residue {node} out of range for p={p}")
                return node
            raise GroupError("expected a residue digit at level 1")
        if isinstance(node, int):
            raise GroupError(f"expected a bracketed element at level {lvl}")
        items, shift = node
        if len(items) == 1 and not isinstance(items[0], int):
            inner_items, inner_shift = items[0]
            if inner_shift is None and len(inner_items) == p:
                items = inner_items
        if len(items) != p:
            raise GroupError(
                f"level-{lvl} element needs {p} components, got {len(items)}"
            )
        s = 0 if shift is None else shift
        if not 0 <= s < p:
            raise GroupError(f"shift {s} out of range for p={p}")
        return (tuple(coerce(c, lvl - 1) for c in items), s)

    return coerce(_tokenize_brackets(text), level)


# ---------------------------------------------------------------------------
# centralizer classification (cases A, B, C)


@dataclass
class NormalFormCaseB:
    conjugator: Element       # base element c with c x c^-1 canonical
    normal_form: Element      # ((a, id, ..., id), s)
    base_component: Element   # a; the p-th power of x is conjugate-diagonal on a


def normal_form_case_b(tower: WreathTower, x: Element) -> NormalFormCaseB:
    """Conjugate a shift-carrying element to ((a, id, ..., id), s).

    The conjugator is a base element solving the component chain with its
    0-th entry fixed to the identity, so the output is canonical.
    """
    level = element_level(x)
    if level < 2:
        raise NotCaseBError("normal form needs a level >= 2 element")
    comps, s = x
    if s == 0:
        raise NotCaseBError("element has trivial shift; not case B")
    p = tower.p
    ident = tower.identity(level - 1)
    w: List[Element] = [ident] * p
    for k in range(1, p):
        idx = (k * s) % p
        prev = ((k - 1) * s) % p
        w[idx] = tower.multiply(w[prev], tower.inverse(comps[idx]))
    c = (tuple(w), 0)
    nf = tower.conjugate(c, x)
    nf_comps, nf_shift = nf
    if nf_shift != s or any(comp != ident for comp in nf_comps[1:]):
        raise GroupError("internal error: case-B chain solve failed verification")
    return NormalFormCaseB(conjugator=c, normal_form=nf, base_component=nf_comps[0])


@dataclass
class CentralizerReport:
    case: str                     # "A", "B" or "C"
    element: Element
    level: int
    conjugator: Element           # normal-forming element (identity for case A)
    core: dict                    # recursive structural description
    generators: List[Element]
    order: int


def _centralizer_gens(tower: WreathTower, x: Element) -> List[Element]:
    level = element_level(x)
    if level == 1:
        return [1]
    comps, s = x
    if s != 0:
        nf = normal_form_case_b(tower, x)
        gens = [x]
        c_inv = tower.inverse(nf.conjugator)
        for z in _centralizer_gens(tower, nf.base_component):
            gens.append(tower.conjugate(c_inv, tower.diagonal(z)))
        return gens
    orbit = tower.conjugacy_orbit(comps[0])
    if all(comp in orbit for comp in comps):
        x_prime = min(orbit, key=tower.encode)
        # orbit[y] conjugates comps[0] to y, so orbit[x'] orbit[comp]^-1
        # conjugates comp to x'; applying it componentwise diagonalizes x.
        w = tuple(
            tower.multiply(orbit[x_prime], tower.inverse(orbit[comp]))
            for comp in comps
        )
        c = (w, 0)
        c_inv = tower.inverse(c)
        inner = _centralizer_gens(tower, x_prime)
        gens = [
            tower.conjugate(c_inv, tower.embed(g, 0, level)) for g in inner
        ]
        gens.append(tower.conjugate(c_inv, tower.shift_generator(level)))
        return gens
    gens = []
    for i, comp in enumerate(comps):
        for g in _centralizer_gens(tower, comp):
            gens.append(tower.embed(g, i, level))
    return gens


def centralizer_order(tower: WreathTower, x: Element) -> int:
    level = element_level(x)
    if level == 1:
        return tower.p
    comps, s = x
    if s != 0:
        nf = normal_form_case_b(tower, x)
        return tower.p * centralizer_order(tower, nf.base_component)
    orbit = tower.conjugacy_orbit(comps[0])
    if all(comp in orbit for comp in comps):
        x_prime = min(orbit, key=tower.encode)
        return tower.p * centralizer_order(tower, x_prime) ** tower.p
    total = 1
    for comp in comps:
        total *= centralizer_order(tower, comp)
    return total


def centralizer_descriptor(tower: WreathTower, x: Element) -> dict:
    """Recursive structural description of the centralizer of x."""
    level = element_level(x)
    if level == 1:
        return {"kind": "cyclic", "order": tower.p}
    comps, s = x
    if s != 0:
        nf = normal_form_case_b(tower, x)
        return {
            "kind": "central_extension",
            "case": "B",
            "isoclinic_to_product": True,
            "base_component": format_element(nf.base_component),
            "base_centralizer": centralizer_descriptor(tower, nf.base_component),
            "cyclic_factor": tower.p,
            "order": tower.p * centralizer_order(tower, nf.base_component),
        }
    orbit = tower.conjugacy_orbit(comps[0])
    if all(comp in orbit for comp in comps):
        x_prime = min(orbit, key=tower.encode)
        return {
            "kind": "wreath",
            "case": "C",
            "diagonal_component": format_element(x_prime),
            "inner_centralizer": centralizer_descriptor(tower, x_prime),
            "order": tower.p * centralizer_order(tower, x_prime) ** tower.p,
        }
    return {
        "kind": "product",
        "case": "A",
        "components": [centralizer_descriptor(tower, comp) for comp in comps],
        "order": centralizer_order(tower, x),
    }


def classify_centralizer(tower: WreathTower, x: Element) -> CentralizerReport:
    """Apply the wreath centralizer trichotomy to a level >= 2 element.

    Case B: the shift of x is nonzero, so <x> surjects onto the top Z/p and
    the centralizer is a central extension isoclinic to the product of the
    base-component centralizer with Z/p.  Case C: x lies in the base and its
    components form a single conjugacy class, so x is conjugate to a diagonal
    element and the centralizer is a conjugated wreath product.  Case A: x
    lies in the base with components in several classes, and the centralizer
    is the product of the component centralizers.
    """
    level = element_level(x)
    if level < 2:
        raise GroupError("classification needs a level >= 2 element")
    tower.check_element(x)
    comps, s = x
    if s != 0:
        nf = normal_form_case_b(tower, x)
        case = "B"
        conjugator: Element = nf.conjugator
    else:
        orbit = tower.conjugacy_orbit(comps[0])
        if all(comp in orbit for comp in comps):
            case = "C"
            x_prime = min(orbit, key=tower.encode)
            w = tuple(
                tower.multiply(orbit[x_prime], tower.inverse(orbit[comp]))
                for comp in comps
            )
            conjugator = (w, 0)
        else:
            case = "A"
            conjugator = tower.identity(level)
    return CentralizerReport(
        case=case,
        element=x,
        level=level,
        conjugator=conjugator,
        core=centralizer_descriptor(tower, x),
        generators=_centralizer_gens(tower, x),
        order=centralizer_order(tower, x),
    )


# ---------------------------------------------------------------------------
# closure certificates


@dataclass
class CertificateNode:
    """Construction step expressing a centralizer inside the closure class
    generated from Z/p by wreathing, products and isoclinic replacement."""

    kind: str                     # "zp" | "product" | "wreath" | "isoclinic"
    children: List["CertificateNode"]
    order: int
    detail: dict
    witness: Optional[dict] = None
    asserted: bool = False

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "order": self.order,
            "detail": self.detail,
            "children": [c.to_json() for c in self.children],
        }
        if self.kind == "isoclinic":
            out["asserted"] = self.asserted
            if self.witness is not None:
                out["witness"] = self.witness
        return out


def cp_certificate(
    tower: WreathTower,
    x: Element,
    witness_budget: int = 200_000,
    verify_order_cap: int = 4096,
) -> CertificateNode:
    """Certificate tree expressing the centralizer of x in the closure class.

    Isoclinic-replacement nodes carry a verified witness when the ambient
    group is small enough to materialize; otherwise they are tagged as
    asserted.  Raises WitnessBudgetExhaustedError if a requested witness
    search runs out of budget.
    """
    from .isoclinism import is_isoclinic
    from .groups import centralizer_bruteforce

    level = element_level(x)
    if level == 1:
        return CertificateNode("zp", [], tower.p, {"p": tower.p})
    comps, s = x
    if s != 0:
        nf = normal_form_case_b(tower, x)
        base_node = cp_certificate(
            tower, nf.base_component, witness_budget, verify_order_cap
        )
        zp = CertificateNode("zp", [], tower.p, {"p": tower.p})
        target = CertificateNode(
            "product", [base_node, zp], base_node.order * tower.p, {"arity": 2}
        )
        node = CertificateNode(
            "isoclinic",
            [target],
            tower.p * base_node.order,
            {"case": "B", "element": format_element(x)},
        )
        ambient = tower.order(level)
        if ambient <= verify_order_cap:
            G = tower.materialize(level)
            zx = centralizer_bruteforce(G, tower.encode(x))
            H = tower.materialize(level - 1)
            za = centralizer_bruteforce(H, tower.encode(nf.base_component))
            product = direct_product(
                [subgroup_as_group(za), CyclicGroup(tower.p)]
            )
            result = is_isoclinic(
                subgroup_as_group(zx), product, budget=witness_budget
            )
            if result.status == "budget_exhausted":
                raise WitnessBudgetExhaustedError(
                    "isoclinism witness search ran out of budget"
                )
            if result.witness is None:
                raise GroupError(
                    "internal error: case-B centralizer not isoclinic to product"
                )
            node.witness = result.witness.to_json()
        else:
            node.asserted = True
        return node
    orbit = tower.conjugacy_orbit(comps[0])
    if all(comp in orbit for comp in comps):
        x_prime = min(orbit, key=tower.encode)
        inner = cp_certificate(tower, x_prime, witness_budget, verify_order_cap)
        return CertificateNode(
            "wreath",
            [inner],
            tower.p * inner.order ** tower.p,
            {"case": "C", "element": format_element(x)},
        )
    children = [
        cp_certificate(tower, comp, witness_budget, verify_order_cap)
        for comp in comps
    ]
    total = 1
    for child in children:
        total *= child.order
    return CertificateNode(
        "product", children, total, {"case": "A", "element": format_element(x)}
    )


# ---------------------------------------------------------------------------
# maximal elementary abelian subgroups


@dataclass(frozen=True)
class MaxElabDescriptor:
    """Conjugacy-class representative of a maximal elementary abelian
    subgroup: the full base group at level 1, a product of level-(n-1)
    representatives inside the base power, or a diagonal representative
    joined with the top shift."""

    kind: str                                  # "leaf" | "product" | "diagonal"
    children: Tuple["MaxElabDescriptor", ...]
    rank: int

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "rank": self.rank,
            "children": [c.to_json() for c in self.children],
        }


def elab_leaf() -> MaxElabDescriptor:
    return MaxElabDescriptor("leaf", (), 1)


def elab_product(children: Sequence[MaxElabDescriptor]) -> MaxElabDescriptor:
    return MaxElabDescriptor(
        "product", tuple(children), sum(c.rank for c in children)
    )


def elab_diagonal(child: MaxElabDescriptor) -> MaxElabDescriptor:
    return MaxElabDescriptor("diagonal", (child,), child.rank + 1)


def _descriptor_key(d: MaxElabDescriptor):
    kind_rank = {"leaf": 0, "product": 1, "diagonal": 2}[d.kind]
    return (kind_rank, -d.rank, tuple(_descriptor_key(c) for c in d.children))


@lru_cache(maxsize=None)
def elab_descriptors(p: int, n: int) -> Tuple[MaxElabDescriptor, ...]:
    """Representatives of maximal elementary abelian subgroup classes of G_n."""
    if n == 1:
        return (elab_leaf(),)
    reps = elab_descriptors(p, n - 1)
    out = []
    seen = set()
    from itertools import product as iproduct

    for tup in iproduct(range(len(reps)), repeat=p):
        rotations = [tuple(tup[(i + k) % p] for i in range(p)) for k in range(p)]
        canonical = min(rotations)
        if canonical in seen:
            continue
        seen.add(canonical)
        out.append(elab_product([reps[i] for i in canonical]))
    for rep in reps:
        out.append(elab_diagonal(rep))
    return tuple(sorted(out, key=_descriptor_key))


def maximal_elem_abelians(
    tower: WreathTower, n: Optional[int] = None
) -> Tuple[MaxElabDescriptor, ...]:
    n = tower.n if n is None else n
    return elab_descriptors(tower.p, n)


def descriptor_level(d: MaxElabDescriptor) -> int:
    if d.kind == "leaf":
        return 1
    if d.kind == "product":
        return descriptor_level(d.children[0]) + 1
    return descriptor_level(d.children[0]) + 1


def realize_descriptor_generators(
    tower: WreathTower, desc: MaxElabDescriptor, level: Optional[int] = None
) -> List[Element]:
    level = descriptor_level(desc) if level is None else level
    if desc.kind == "leaf":
        return [1]
    if desc.kind == "product":
        gens = []
        for i, child in enumerate(desc.children):
            for g in realize_descriptor_generators(tower, child, level - 1):
                gens.append(tower.embed(g, i, level))
        return gens
    inner = realize_descriptor_generators(tower, desc.children[0], level - 1)
    gens = [tower.diagonal(g) for g in inner]
    gens.append(tower.shift_generator(level))
    return gens


def realize_descriptor(
    tower: WreathTower, desc: MaxElabDescriptor, level: Optional[int] = None
) -> set:
    """Member set of the canonical subgroup realizing a descriptor."""
    return tower.closure(realize_descriptor_generators(tower, desc, level))


# ---------------------------------------------------------------------------
# brute-force elementary abelian enumeration


@dataclass
class ElabSubgroup:
    members: Tuple[int, ...]
    rank: int
    maximal: bool


@dataclass
class ElabCatalog:
    p: int
    subgroups: List[ElabSubgroup]
    classes: List[dict]

    def maximal_classes(self) -> List[dict]:
        return [c for c in self.classes if c["maximal"]]


def _infer_prime(order: int) -> int:
    for p in range(2, order + 1):
        if order % p == 0:
            if not is_prime(p):
                raise GroupError(f"cannot infer p from composite factor {p}")
            rest = order
            while rest % p == 0:
                rest //= p
            if rest != 1:
                raise GroupError(
                    f"group order {order} is not a prime power; pass p explicitly"
                )
            return p
    raise GroupError("cannot infer p from the trivial group; pass p explicitly")


def elem_abelians_bruteforce(
    G: FiniteGroup, p: Optional[int] = None, cap: int = 2048
) -> ElabCatalog:
    """Exhaustively enumerate elementary abelian p-subgroups with maximality
    flags and conjugacy classes.  Intended as the oracle for the recursive
    descriptor construction."""
    if G.order > cap:
        raise CapExceededError(
            f"brute-force enumeration capped at order {cap}, got {G.order}"
        )
    if p is None:
        p = _infer_prime(G.order) if G.order > 1 else 2
    order_p = [x for x in range(G.order) if G.element_order(x) == p]
    trivial = (G.identity,)
    found = {trivial}
    extendable: Dict[Tuple[int, ...], bool] = {}
    frontier = [trivial]
    while frontier:
        members = frontier.pop()
        mem_set = set(members)
        extended = False
        for x in order_p:
            if x in mem_set:
                continue
            if any(G.mul(x, m) != G.mul(m, x) for m in members):
                continue
            new = set(members)
            power = x
            for _ in range(p - 1):
                new.update(G.mul(m, power) for m in members)
                power = G.mul(power, x)
            key = tuple(sorted(new))
            extended = True
            if key not in found:
                found.add(key)
                frontier.append(key)
        extendable[members] = extended
    subs = [
        ElabSubgroup(
            members=members,
            rank=_log_exact(len(members), p),
            maximal=not extendable[members],
        )
        for members in sorted(found)
    ]
    classes = _conjugacy_classes_of_subgroups(G, subs)
    return ElabCatalog(p=p, subgroups=subs, classes=classes)


def _log_exact(m: int, p: int) -> int:
    r = 0
    while m > 1:
        if m % p:
            raise GroupError(f"subgroup order {m} is not a power of {p}")
        m //= p
        r += 1
    return r


def _conjugacy_classes_of_subgroups(
    G: FiniteGroup, subs: Sequence[ElabSubgroup]
) -> List[dict]:
    by_members = {s.members: s for s in subs}
    seen = set()
    classes = []
    for s in subs:
        if s.members in seen:
            continue
        orbit = {s.members}
        frontier = [s.members]
        while frontier:
            members = frontier.pop()
            for g in G.generators():
                conj = tuple(sorted(G.conj(g, m) for m in members))
                if conj not in orbit:
                    orbit.add(conj)
                    frontier.append(conj)
        rep = min(orbit)
        classes.append(
            {
                "representative": rep,
                "rank": s.rank,
                "class_size": len(orbit),
                "maximal": by_members[rep].maximal,
            }
        )
        seen.update(orbit)
    classes.sort(key=lambda c: (c["rank"], c["representative"]))
    return classes


# ---------------------------------------------------------------------------
# Sylow parameters of GL_n(F_q)


@dataclass(frozen=True)
class SylowGLParams:
    """Parameters of Syl_p(GL_n(F_q)) as a product of iterated wreath
    products of cyclic p-groups: each factor (r, k) denotes Z/p^r wreathed
    by k further cyclic layers of order p."""

    n: int
    q: int
    p: int
    d: int                      # multiplicative order of q mod p
    r: int                      # p-adic valuation of q^d - 1
    m: int                      # floor(n / d)
    factors: Tuple[Tuple[int, int], ...]

    def exponent_sum(self) -> int:
        total = 0
        for r, k in self.factors:
            total += r * self.p ** k + (self.p ** k - 1) // (self.p - 1)
        return total

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "p": self.p,
            "d": self.d,
            "r": self.r,
            "m": self.m,
            "factors": [list(f) for f in self.factors],
            "exponent_sum": self.exponent_sum(),
            "unramified_cohomology_trivial": True,
        }


def vp(value: int, p: int) -> int:
    count = 0
    while value % p == 0:
        value //= p
        count += 1
    return count


def vp_gl_order(n: int, q: int, p: int) -> int:
    """p-adic valuation of |GL_n(F_q)| for p not dividing q."""
    return sum(vp(q ** i - 1, p) for i in range(1, n + 1) if (q ** i - 1) % p == 0)


def sylow_gl_parameters(n: int, q: int, p: int) -> SylowGLParams:
    """Wreath-product decomposition parameters of Syl_p(GL_n(F_q)).

    Only odd coprime primes p != q are supported.  The factor multiset comes
    from the base-p digits of m = floor(n/d): digit c_k contributes c_k
    copies of (r, k).
    """
    if n < 1:
        raise UnsupportedParametersError(f"matrix size must be >= 1, got {n}")
    if not is_prime(p) or not is_prime(q):
        raise UnsupportedParametersError(f"p={p} and q={q} must both be prime")
    if p == 2 or q == 2:
        raise UnsupportedParametersError("p and q must both be odd")
    if p == q:
        raise UnsupportedParametersError("p must not divide q (modular case excluded)")
    d = 1
    acc = q % p
    while acc != 1:
        acc = (acc * q) % p
        d += 1
    r = vp(q ** d - 1, p)
    m = n // d
    factors: List[Tuple[int, int]] = []
    digits = m
    k = 0
    while digits:
        digits, c = divmod(digits, p)
        factors.extend([(r, k)] * c)
        k += 1
    return SylowGLParams(n=n, q=q, p=p, d=d, r=r, m=m, factors=tuple(factors))
