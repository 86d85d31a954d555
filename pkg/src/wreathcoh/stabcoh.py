"""Stable mod-p cohomology of the iterated wreath towers: the canonical
unit/theta/norm/trace basis, the Hilbert series recursion, restriction maps
into exterior algebras of maximal elementary abelian subgroups, and ring
multiplication computed through the detection embedding.

Basis elements are nested tuples: ``("unit",)``, ``("theta",)``,
``("norm", b)`` and ``("trace", (b_1, ..., b_p))`` with the trace
representative the lexicographically least tuple of its free cyclic orbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product as iproduct
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .groups import GroupError
from .wreath import MaxElabDescriptor, descriptor_level, elab_descriptors

UNIT = ("unit",)
THETA = ("theta",)

BasisElement = tuple


class RankDeficientError(GroupError):
    """Detection matrix lost full row rank; multiplication results would be
    unreliable, so the failure is surfaced loudly."""


def norm(b: BasisElement) -> BasisElement:
    if b == UNIT:
        raise GroupError("norm argument must have positive degree")
    return ("norm", b)


def trace(reps: Sequence[BasisElement]) -> BasisElement:
    tup = tuple(reps)
    if len(set(tup)) == 1:
        raise GroupError("trace orbit must be free (not a diagonal tuple)")
    return ("trace", tup)


def degree(b: BasisElement, p: int) -> int:
    tag = b[0]
    if tag == "unit":
        return 0
    if tag == "theta":
        return 1
    if tag == "norm":
        return p * degree(b[1], p)
    return sum(degree(c, p) for c in b[1])


def basis_level(b: BasisElement) -> Optional[int]:
    """Minimal level at which the element makes sense (None for unit/theta)."""
    tag = b[0]
    if tag in ("unit", "theta"):
        return None
    if tag == "norm":
        inner = basis_level(b[1])
        return 2 if inner is None else inner + 1
    inner = max((basis_level(c) or 1) for c in b[1])
    return inner + 1


def sort_key(b: BasisElement, p: int):
    tag_rank = {"unit": 0, "theta": 1, "norm": 2, "trace": 3}[b[0]]
    if b[0] in ("unit", "theta"):
        children = ()
    elif b[0] == "norm":
        children = (sort_key(b[1], p),)
    else:
        children = tuple(sort_key(c, p) for c in b[1])
    return (degree(b, p), tag_rank, children)


def format_basis_element(b: BasisElement) -> str:
    tag = b[0]
    if tag == "unit":
        return "1"
    if tag == "theta":
        return "theta"
    if tag == "norm":
        return f"N({format_basis_element(b[1])})"
    return "T(" + ",".join(format_basis_element(c) for c in b[1]) + ")"


@lru_cache(maxsize=None)
def stable_basis(p: int, n: int, k: int) -> Tuple[BasisElement, ...]:
    """Canonical basis of the degree-k stable cohomology of the level-n tower.

    Level 1 is the exterior algebra on one degree-1 class.  Above level 1
    the degree-k classes are theta (k=1 only), norms of degree-(k/p)
    classes, and traces over free cyclic orbits of p-tuples of total
    degree k.
    """
    if k < 0:
        return ()
    if n == 1:
        if k == 0:
            return (UNIT,)
        if k == 1:
            return (THETA,)
        return ()
    if k == 0:
        return (UNIT,)
    out: List[BasisElement] = []
    if k == 1:
        out.append(THETA)
    if k % p == 0 and k >= p:
        for b in stable_basis(p, n - 1, k // p):
            if degree(b, p) >= 1:
                out.append(norm(b))
    seen = set()
    for parts in _compositions(k, p):
        pools = [stable_basis(p, n - 1, d) for d in parts]
        if any(not pool for pool in pools):
            continue
        for tup in iproduct(*pools):
            if len(set(tup)) == 1:
                continue
            rotations = [
                tuple(tup[(i + r) % p] for i in range(p)) for r in range(p)
            ]
            canonical = min(
                rotations, key=lambda t: tuple(sort_key(c, p) for c in t)
            )
            if canonical != tup or canonical in seen:
                continue
            seen.add(canonical)
            out.append(("trace", canonical))
    return tuple(sorted(out, key=lambda b: sort_key(b, p)))


def _compositions(total: int, parts: int) -> Iterable[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


# ---------------------------------------------------------------------------
# Hilbert series


@dataclass(frozen=True)
class HilbertSeries:
    p: int
    n: int
    coefficients: Tuple[int, ...]

    def top_degree(self) -> int:
        top = 0
        for i, c in enumerate(self.coefficients):
            if c:
                top = i
        return top

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "coefficients": list(self.coefficients)}


def _poly_mul(a: Sequence[int], b: Sequence[int], max_degree: int) -> List[int]:
    out = [0] * (max_degree + 1)
    for i, x in enumerate(a):
        if not x or i > max_degree:
            continue
        for j, y in enumerate(b):
            if i + j > max_degree:
                break
            out[i + j] += x * y
    return out


def hilbert_series(p: int, n: int, max_degree: int) -> HilbertSeries:
    """Graded dimensions by the orbit-count recursion:
    P_1 = 1 + t and P_n = (P_{n-1}^p + (p-1) P_{n-1}(t^p)) / p + t."""
    if n < 1:
        raise GroupError(f"level must be >= 1, got {n}")
    if max_degree < 0:
        raise GroupError(f"max degree must be >= 0, got {max_degree}")
    if n == 1:
        coeffs = [1] + ([1] if max_degree >= 1 else [])
        coeffs += [0] * (max_degree + 1 - len(coeffs))
        return HilbertSeries(p, 1, tuple(coeffs))
    prev = hilbert_series(p, n - 1, max_degree).coefficients
    power = [1] + [0] * max_degree
    for _ in range(p):
        power = _poly_mul(power, prev, max_degree)
    stretched = [0] * (max_degree + 1)
    for i, c in enumerate(prev):
        if p * i <= max_degree:
            stretched[p * i] = c
    coeffs = []
    for k in range(max_degree + 1):
        num = power[k] + (p - 1) * stretched[k]
        if num % p:
            raise GroupError("internal error: orbit count recursion not integral")
        coeffs.append(num // p)
    if max_degree >= 1:
        coeffs[1] += 1
    return HilbertSeries(p, n, tuple(coeffs))


def hilbert_product(a: HilbertSeries, b: HilbertSeries, max_degree: int) -> Tuple[int, ...]:
    """Graded dimensions of a direct product (Kunneth): the coefficient-wise
    polynomial product of the two series."""
    return tuple(_poly_mul(a.coefficients, b.coefficients, max_degree))


# ---------------------------------------------------------------------------
# exterior algebra over F_p


class ExteriorElement:
    """Element of an exterior algebra over F_p on ``rank`` generators.

    ``terms`` maps strictly increasing index tuples to nonzero coefficients;
    all operations return new elements.
    """

    __slots__ = ("rank", "modulus", "terms")

    def __init__(self, rank: int, modulus: int, terms: Optional[Dict[tuple, int]] = None):
        self.rank = rank
        self.modulus = modulus
        clean: Dict[tuple, int] = {}
        for mono, coeff in (terms or {}).items():
            c = coeff % modulus
            if c:
                if any(i < 0 or i >= rank for i in mono) or list(mono) != sorted(set(mono)):
                    raise GroupError(f"bad exterior monomial {mono} for rank {rank}")
                clean[tuple(mono)] = c
        self.terms = clean

    @classmethod
    def zero(cls, rank: int, p: int) -> "ExteriorElement":
        return cls(rank, p)

    @classmethod
    def one(cls, rank: int, p: int) -> "ExteriorElement":
        return cls(rank, p, {(): 1})

    @classmethod
    def generator(cls, rank: int, p: int, index: int) -> "ExteriorElement":
        return cls(rank, p, {(index,): 1})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def add(self, other: "ExteriorElement") -> "ExteriorElement":
        self._check(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, 0) + coeff
        return ExteriorElement(self.rank, self.modulus, terms)

    def scale(self, k: int) -> "ExteriorElement":
        return ExteriorElement(
            self.rank, self.modulus,
            {mono: coeff * k for mono, coeff in self.terms.items()},
        )

    def wedge(self, other: "ExteriorElement") -> "ExteriorElement":
        self._check(other)
        terms: Dict[tuple, int] = {}
        for m1, c1 in self.terms.items():
            set1 = set(m1)
            for m2, c2 in other.terms.items():
                if set1 & set(m2):
                    continue
                inversions = sum(1 for i in m1 for j in m2 if j < i)
                mono = tuple(sorted(m1 + m2))
                sign = -1 if inversions % 2 else 1
                terms[mono] = terms.get(mono, 0) + sign * c1 * c2
        return ExteriorElement(self.rank, self.modulus, terms)

    def shift(self, offset: int, new_rank: int) -> "ExteriorElement":
        return ExteriorElement(
            new_rank, self.modulus,
            {
                tuple(i + offset for i in mono): coeff
                for mono, coeff in self.terms.items()
            },
        )

    def homogeneous_part(self, k: int) -> "ExteriorElement":
        return ExteriorElement(
            self.rank, self.modulus,
            {m: c for m, c in self.terms.items() if len(m) == k},
        )

    def term_degrees(self) -> Tuple[int, ...]:
        return tuple(sorted({len(m) for m in self.terms}))

    def _check(self, other: "ExteriorElement") -> None:
        if self.rank != other.rank or self.modulus != other.modulus:
            raise GroupError("exterior elements live in different algebras")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExteriorElement)
            and self.rank == other.rank
            and self.modulus == other.modulus
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for mono in sorted(self.terms, key=lambda m: (len(m), m)):
            coeff = self.terms[mono]
            body = "^".join(f"e{i}" for i in mono) if mono else "1"
            bits.append(body if coeff == 1 else f"{coeff}*{body}")
        return " + ".join(bits)

    def to_json(self) -> list:
        return [
            [list(mono), self.terms[mono]]
            for mono in sorted(self.terms, key=lambda m: (len(m), m))
        ]


# ---------------------------------------------------------------------------
# restriction maps


def _shift_once(tup: Tuple[BasisElement, ...], p: int) -> Tuple[Tuple[BasisElement, ...], int]:
    """One cyclic shift with the Koszul sign of moving the last graded
    factor across the others."""
    last = tup[-1]
    d_last = degree(last, p)
    d_rest = sum(degree(c, p) for c in tup[:-1])
    sign = -1 if (d_last * d_rest) % 2 else 1
    return (last,) + tup[:-1], sign


def restrict_basis_to_base(p: int, b: BasisElement) -> Dict[tuple, int]:
    """Image of a basis element under restriction to the base power, as a
    linear combination of p-fold tensors of lower-level basis elements."""
    tag = b[0]
    if tag == "unit":
        return {(UNIT,) * p: 1}
    if tag == "theta":
        return {}
    if tag == "norm":
        return {(b[1],) * p: 1}
    out: Dict[tuple, int] = {}
    current = b[1]
    sign = 1
    for _ in range(p):
        out[current] = (out.get(current, 0) + sign) % p
        current, step = _shift_once(current, p)
        sign *= step
    return {t: c for t, c in out.items() if c}


def restrict_to_base(c: "StableClass") -> Dict[tuple, int]:
    """Linear extension of the basis-level base restriction."""
    if c.n < 2:
        raise GroupError("base restriction needs level >= 2")
    out: Dict[tuple, int] = {}
    for b, coeff in c.coords.items():
        for tup, k in restrict_basis_to_base(c.p, b).items():
            out[tup] = (out.get(tup, 0) + coeff * k) % c.p
    return {t: k for t, k in out.items() if k}


@lru_cache(maxsize=None)
def restrict_basis(p: int, b: BasisElement, desc: MaxElabDescriptor) -> ExteriorElement:
    """Restriction of a basis element to one maximal elementary abelian
    representative, valued in its exterior algebra.

    Diagonal representatives see only the unit and theta (positive-degree
    norms and traces restrict to zero there); product representatives factor
    through the base restriction.
    """
    tag = b[0]
    if desc.kind == "leaf":
        if tag == "unit":
            return ExteriorElement.one(1, p)
        if tag == "theta":
            return ExteriorElement.generator(1, p, 0)
        raise GroupError(f"level mismatch: {format_basis_element(b)} on a leaf")
    if desc.kind == "diagonal":
        rank = desc.rank
        if tag == "unit":
            return ExteriorElement.one(rank, p)
        if tag == "theta":
            return ExteriorElement.generator(rank, p, rank - 1)
        return ExteriorElement.zero(rank, p)
    rank = desc.rank
    result = ExteriorElement.zero(rank, p)
    for tup, coeff in restrict_basis_to_base(p, b).items():
        term = ExteriorElement.one(rank, p)
        offset = 0
        for comp, child in zip(tup, desc.children):
            piece = restrict_basis(p, comp, child)
            if piece.is_zero:
                term = ExteriorElement.zero(rank, p)
                break
            term = term.wedge(piece.shift(offset, rank))
            offset += child.rank
        if not term.is_zero:
            result = result.add(term.scale(coeff))
    return result


# ---------------------------------------------------------------------------
# stable classes


@dataclass
class StableClass:
    """Element of the level-n stable ring as coordinates over the canonical
    basis, with its tuple of exterior-algebra restrictions computed lazily."""

    p: int
    n: int
    coords: Dict[BasisElement, int]

    def __post_init__(self) -> None:
        clean = {}
        for b, coeff in self.coords.items():
            c = coeff % self.p
            if c:
                clean[b] = c
        self.coords = clean

    @property
    def is_zero(self) -> bool:
        return not self.coords

    def degrees(self) -> Tuple[int, ...]:
        return tuple(sorted({degree(b, self.p) for b in self.coords}))

    def detection(self) -> Dict[MaxElabDescriptor, ExteriorElement]:
        cached = getattr(self, "_detection_cache", None)
        if cached is None:
            cached = {}
            for desc in elab_descriptors(self.p, self.n):
                total = ExteriorElement.zero(desc.rank, self.p)
                for b, coeff in self.coords.items():
                    total = total.add(restrict_basis(self.p, b, desc).scale(coeff))
                cached[desc] = total
            self._detection_cache = cached
        return cached

    def add(self, other: "StableClass") -> "StableClass":
        self._check(other)
        coords = dict(self.coords)
        for b, c in other.coords.items():
            coords[b] = coords.get(b, 0) + c
        return StableClass(self.p, self.n, coords)

    def scale(self, k: int) -> "StableClass":
        return StableClass(
            self.p, self.n, {b: c * k for b, c in self.coords.items()}
        )

    def _check(self, other: "StableClass") -> None:
        if self.p != other.p or self.n != other.n:
            raise GroupError("stable classes live over different towers")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, StableClass)
            and (self.p, self.n) == (other.p, other.n)
            and self.coords == other.coords
        )

    def format(self) -> str:
        if not self.coords:
            return "0"
        bits = []
        for b in sorted(self.coords, key=lambda x: sort_key(x, self.p)):
            c = self.coords[b]
            name = format_basis_element(b)
            bits.append(name if c == 1 else f"{c}*{name}")
        return " + ".join(bits)


def unit_class(p: int, n: int) -> StableClass:
    return StableClass(p, n, {UNIT: 1})


def theta_class(p: int, n: int) -> StableClass:
    return StableClass(p, n, {THETA: 1})


def basis_class(p: int, n: int, b: BasisElement) -> StableClass:
    return StableClass(p, n, {b: 1})


def restriction_to_elab(c: StableClass, desc: MaxElabDescriptor) -> ExteriorElement:
    if descriptor_level(desc) != c.n:
        raise GroupError(
            f"descriptor level {descriptor_level(desc)} does not match class level {c.n}"
        )
    return c.detection()[desc]


def detection_tuples_equal(c1: StableClass, c2: StableClass) -> bool:
    d1, d2 = c1.detection(), c2.detection()
    return all(d1[desc] == d2[desc] for desc in elab_descriptors(c1.p, c1.n))


# ---------------------------------------------------------------------------
# linear algebra over F_p


def _rref(rows: List[List[int]], p: int) -> Tuple[List[List[int]], List[int]]:
    mat = [list(r) for r in rows]
    pivots: List[int] = []
    r = 0
    cols = len(mat[0]) if mat else 0
    for c in range(cols):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][c] % p:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = pow(mat[r][c] % p, -1, p)
        mat[r] = [(x * inv) % p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] % p:
                f = mat[i][c] % p
                mat[i] = [(x - f * y) % p for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def matrix_rank_modp(rows: Sequence[Sequence[int]], p: int) -> int:
    if not rows:
        return 0
    _, pivots = _rref([list(r) for r in rows], p)
    return len(pivots)


def _invert_modp(mat: List[List[int]], p: int) -> List[List[int]]:
    n = len(mat)
    aug = [list(mat[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    reduced, pivots = _rref(aug, p)
    if pivots[:n] != list(range(n)):
        raise RankDeficientError("matrix is singular over F_p")
    return [row[n:] for row in reduced[:n]]


# ---------------------------------------------------------------------------
# detection matrices and ring multiplication


@dataclass
class DetectionCertificate:
    p: int
    n: int
    degree: int
    basis: Tuple[str, ...]
    descriptor_ranks: Tuple[int, ...]
    matrix: Tuple[Tuple[int, ...], ...]
    rank: int
    full_row_rank: bool

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "degree": self.degree,
            "basis": list(self.basis),
            "descriptor_ranks": list(self.descriptor_ranks),
            "matrix": [list(r) for r in self.matrix],
            "rank": self.rank,
            "rows": len(self.basis),
            "columns": len(self.matrix[0]) if self.matrix else 0,
            "full_row_rank": self.full_row_rank,
        }


def _columns_for_degree(p: int, n: int, k: int):
    cols = []
    for desc in elab_descriptors(p, n):
        for mono in combinations(range(desc.rank), k):
            cols.append((desc, mono))
    return cols


def _restriction_vector(p: int, n: int, b: BasisElement, cols) -> List[int]:
    vec = []
    cache: Dict[MaxElabDescriptor, ExteriorElement] = {}
    for desc, mono in cols:
        elem = cache.get(desc)
        if elem is None:
            elem = restrict_basis(p, b, desc)
            cache[desc] = elem
        vec.append(elem.terms.get(mono, 0))
    return vec


def detection_matrix(p: int, n: int, k: int) -> DetectionCertificate:
    """Restriction matrix of the degree-k basis over all representatives,
    with its rank certificate.  Rank deficiency is reported, not raised."""
    basis = stable_basis(p, n, k)
    cols = _columns_for_degree(p, n, k)
    rows = [_restriction_vector(p, n, b, cols) for b in basis]
    rank = matrix_rank_modp(rows, p) if rows else 0
    return DetectionCertificate(
        p=p,
        n=n,
        degree=k,
        basis=tuple(format_basis_element(b) for b in basis),
        descriptor_ranks=tuple(d.rank for d in elab_descriptors(p, n)),
        matrix=tuple(tuple(r) for r in rows),
        rank=rank,
        full_row_rank=rank == len(basis),
    )


@lru_cache(maxsize=None)
def _degree_solver(p: int, n: int, k: int):
    """Per-degree solver data: basis, columns, rows, pivot columns and the
    inverse of the pivot submatrix.  Raises RankDeficientError when the
    detection matrix loses full row rank."""
    basis = stable_basis(p, n, k)
    cols = _columns_for_degree(p, n, k)
    rows = [_restriction_vector(p, n, b, cols) for b in basis]
    if not basis:
        return basis, cols, rows, (), ()
    _, pivots = _rref([list(r) for r in rows], p)
    if len(pivots) < len(basis):
        raise RankDeficientError(
            f"detection matrix rank {len(pivots)} < basis size {len(basis)} "
            f"at p={p} n={n} degree={k}"
        )
    square = [[rows[i][c] for c in pivots] for i in range(len(basis))]
    inv = _invert_modp(square, p)
    return basis, cols, rows, tuple(pivots), tuple(tuple(r) for r in inv)


def _solve_coords(p: int, n: int, k: int, target: Dict[tuple, int]) -> Dict[BasisElement, int]:
    """Solve sum_i y_i row_i = target for the degree-k basis; the target maps
    (descriptor, monomial) columns to coefficients."""
    basis, cols, rows, pivots, inv = _degree_solver(p, n, k)
    vec = [target.get(col, 0) % p for col in cols]
    if not basis:
        if any(vec):
            raise RankDeficientError(
                f"nonzero degree-{k} product with empty basis at p={p} n={n}"
            )
        return {}
    tgt_piv = [vec[c] for c in pivots]
    # y * M = t  <=>  y_j = sum_i t_i * inv[i][j] with M the pivot square.
    y = [
        sum(tgt_piv[i] * inv[i][j] for i in range(len(basis))) % p
        for j in range(len(basis))
    ]
    for c, col_val in enumerate(vec):
        check = sum(y[i] * rows[i][c] for i in range(len(basis))) % p
        if check != col_val:
            raise RankDeficientError(
                "product restriction lies outside the detected span "
                f"at p={p} n={n} degree={k}"
            )
    return {b: coeff for b, coeff in zip(basis, y) if coeff}


def multiply(c1: StableClass, c2: StableClass) -> StableClass:
    """Ring product through the detection embedding: wedge the restriction
    tuples pointwise, then recover coordinates degree by degree."""
    c1._check(c2)
    p, n = c1.p, c1.n
    if c1.is_zero or c2.is_zero:
        return StableClass(p, n, {})
    d1, d2 = c1.detection(), c2.detection()
    product: Dict[MaxElabDescriptor, ExteriorElement] = {
        desc: d1[desc].wedge(d2[desc]) for desc in elab_descriptors(p, n)
    }
    degrees = sorted(
        {size for elem in product.values() for size in elem.term_degrees()}
    )
    coords: Dict[BasisElement, int] = {}
    for k in degrees:
        target = {}
        for desc, elem in product.items():
            for mono, coeff in elem.homogeneous_part(k).terms.items():
                target[(desc, mono)] = coeff
        coords.update(_solve_coords(p, n, k, target))
    return StableClass(p, n, coords)


# ---------------------------------------------------------------------------
# Kunneth products


@dataclass
class KunnethClass:
    """Class over a product of two towers: tensor coordinates with detection
    over pairs of maximal elementary abelian representatives."""

    left: StableClass
    right: StableClass
    coords: Dict[Tuple[BasisElement, BasisElement], int]

    def detection_component(
        self, desc_left: MaxElabDescriptor, desc_right: MaxElabDescriptor
    ) -> ExteriorElement:
        p = self.left.p
        rank = desc_left.rank + desc_right.rank
        total = ExteriorElement.zero(rank, p)
        for (bl, br), coeff in self.coords.items():
            el = restrict_basis(p, bl, desc_left).shift(0, rank)
            er = restrict_basis(p, br, desc_right).shift(desc_left.rank, rank)
            total = total.add(el.wedge(er).scale(coeff))
        return total


def kunneth_product(c_left: StableClass, c_right: StableClass) -> KunnethClass:
    if c_left.p != c_right.p:
        raise GroupError("Kunneth factors must share the coefficient prime")
    coords: Dict[Tuple[BasisElement, BasisElement], int] = {}
    for bl, cl in c_left.coords.items():
        for br, cr in c_right.coords.items():
            coords[(bl, br)] = (cl * cr) % c_left.p
    return KunnethClass(left=c_left, right=c_right, coords=coords)
