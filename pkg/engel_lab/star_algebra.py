"""
The truncated star algebra L*_N.

Basis: x together with v(i)_A and w_A for every nonempty A inside a ground set
of size N. A basis index is the pair (ell, subset) where ell is the L(m) basis
index of the letter (v(i) -> i, w -> n, x -> n+1) and subset is a bitmask
(0 for x). Products follow z_A * t_B = (z*t)_{A ⊔ B} and z_A * x = (z*x)_A.
"""
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np

from engel_lab.config import settings
from engel_lab.exceptions import GroundSetMismatch, InvalidElement, ResourceCapExceeded
from engel_lab.lie_algebra import LieAlgebraL, LParams, lie_algebra
from engel_lab.reporting import CaseTally
from engel_lab.schemas import VerificationReport
from engel_lab.utils.gf2 import gf2_matmul, is_zero, product_filtration
from engel_lab.utils.subsets import (
    ANNIHILATED,
    GroundSet,
    format_subset,
    modified_union,
    parse_subset,
)

logger = logging.getLogger(__name__)

_TERM = re.compile(r"^(?:v(\d+)|(w))(\{[^}]*\})$")


class StarBasisIndex(NamedTuple):
    ell: int
    subset: int = 0

    def label(self, params: LParams) -> str:
        if self.ell == params.x_index:
            return "x"
        return params.label(self.ell) + format_subset(self.subset)


def x_index(params: LParams) -> StarBasisIndex:
    return StarBasisIndex(params.x_index, 0)


def parse_star_term(token: str, params: LParams) -> StarBasisIndex:
    token = token.strip()
    if token == "x":
        return x_index(params)
    match = _TERM.match(token)
    if not match:
        raise InvalidElement(f"unknown star term {token!r}")
    ell = params.w_index if match.group(2) else params.v_index(int(match.group(1)))
    subset = parse_subset(match.group(3))
    if not subset:
        raise InvalidElement(f"star term {token!r} needs a nonempty subset")
    return StarBasisIndex(ell, subset)


@dataclass(frozen=True)
class StarElement:
    params: LParams
    support: FrozenSet[StarBasisIndex] = frozenset()

    @classmethod
    def basis(cls, params: LParams, index: StarBasisIndex) -> "StarElement":
        return cls(params, frozenset([index]))

    @classmethod
    def of(cls, params: LParams, indices: Iterable[StarBasisIndex]) -> "StarElement":
        """GF(2) sum of basis elements; repeated indices cancel."""
        support = set()
        for index in indices:
            support ^= {index}
        return cls(params, frozenset(support))

    @classmethod
    def parse(cls, text: str, params: LParams) -> "StarElement":
        text = text.strip()
        if text == "0":
            return cls(params)
        terms = [parse_star_term(token, params) for token in text.split("+")]
        if len(set(terms)) != len(terms):
            raise InvalidElement(f"repeated term in {text!r}")
        return cls(params, frozenset(terms))

    def __add__(self, other: "StarElement") -> "StarElement":
        if other.params != self.params:
            raise InvalidElement("cannot add star elements over different L(m)")
        return StarElement(self.params, self.support ^ other.support)

    def __bool__(self) -> bool:
        return bool(self.support)

    def __str__(self) -> str:
        if not self.support:
            return "0"
        return "+".join(index.label(self.params) for index in sorted(self.support))

    def subset_union(self) -> int:
        bits = 0
        for index in self.support:
            bits |= index.subset
        return bits


def star_basis_product(lie: LieAlgebraL, a: StarBasisIndex, b: StarBasisIndex) -> Optional[StarBasisIndex]:
    """Product of two star basis elements: a single basis element, or None for zero."""
    x = lie.params.x_index
    if a.ell == x and b.ell == x:
        return None
    if b.ell == x or a.ell == x:
        subset = a.subset if b.ell == x else b.subset
    else:
        subset = modified_union(a.subset, b.subset)
        if subset is ANNIHILATED:
            return None
    product = lie.product_bits(a.ell, b.ell)
    if not product:
        return None
    return StarBasisIndex(product.bit_length() - 1, subset)


def star_multiply(a: StarElement, b: StarElement) -> StarElement:
    if a.params != b.params:
        raise InvalidElement("cannot multiply star elements over different L(m)")
    lie = lie_algebra(a.params.m)
    terms = []
    for s in a.support:
        for t in b.support:
            product = star_basis_product(lie, s, t)
            if product is not None:
                terms.append(product)
    return StarElement.of(a.params, terms)


class StarOperator:
    """A linear operator on L*_N given by the images of the basis elements.

    Missing basis elements map to zero. Composition ``s @ t`` means "apply s,
    then t", matching operators written on the right.
    """

    def __init__(self, algebra: "StarAlgebra", action: Dict[StarBasisIndex, StarElement]):
        self.algebra = algebra
        self.action = {k: v for k, v in action.items() if v}

    def apply(self, element: StarElement) -> StarElement:
        out = StarElement(self.algebra.params)
        for index in element.support:
            image = self.action.get(index)
            if image is not None:
                out = out + image
        return out

    def __matmul__(self, other: "StarOperator") -> "StarOperator":
        return StarOperator(self.algebra, {k: other.apply(v) for k, v in self.action.items()})

    def __add__(self, other: "StarOperator") -> "StarOperator":
        keys = set(self.action) | set(other.action)
        zero = StarElement(self.algebra.params)
        return StarOperator(
            self.algebra, {k: self.action.get(k, zero) + other.action.get(k, zero) for k in keys}
        )

    def is_zero(self) -> bool:
        return not self.action

    def to_dense(self) -> np.ndarray:
        algebra = self.algebra
        algebra.check_dense_cap()
        out = np.zeros((algebra.dim, algebra.dim), dtype=np.uint8)
        for index, image in self.action.items():
            row = algebra.index_of(index)
            for target in image.support:
                out[row, algebra.index_of(target)] ^= 1
        return out


class StarAlgebra:
    def __init__(self, params: LParams, ground: GroundSet, max_dim: Optional[int] = None):
        self.params = params
        self.ground = ground
        self.lie = lie_algebra(params.m)
        self.max_dim = settings.MAX_MATRIX_DIM if max_dim is None else max_dim
        n = params.n
        subsets = list(ground.subsets())
        self._basis: List[StarBasisIndex] = [x_index(params)]
        self._basis += [StarBasisIndex(i, a) for i in range(n) for a in subsets]
        self._basis += [StarBasisIndex(params.w_index, a) for a in subsets]
        self._position = {index: k for k, index in enumerate(self._basis)}
        self._pair_cache: Dict[StarBasisIndex, Tuple[np.ndarray, np.ndarray]] = {}

    @property
    def dim(self) -> int:
        return (2 ** self.ground.size - 1) * (self.params.n + 1) + 1

    def basis(self) -> List[StarBasisIndex]:
        return list(self._basis)

    def index_of(self, index: StarBasisIndex) -> int:
        try:
            return self._position[index]
        except KeyError:
            raise GroundSetMismatch(
                f"{index.label(self.params)} is not a basis element over a ground set of size {self.ground.size}"
            )

    def check_dense_cap(self) -> None:
        if self.dim > self.max_dim:
            raise ResourceCapExceeded(
                f"star truncation dimension {self.dim} exceeds the matrix cap {self.max_dim}"
            )

    def validate(self, element: StarElement) -> StarElement:
        for index in element.support:
            self.index_of(index)
        return element

    def to_vector(self, element: StarElement) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.uint8)
        for index in element.support:
            vec[self.index_of(index)] = 1
        return vec

    def from_vector(self, vec: np.ndarray) -> StarElement:
        return StarElement(self.params, frozenset(self._basis[k] for k in np.flatnonzero(vec)))

    def ad_star(self, y: StarElement) -> StarOperator:
        """Right multiplication by y on the truncation."""
        self.validate(y)
        action = {}
        for b in self._basis:
            image = star_multiply(StarElement.basis(self.params, b), y)
            if image:
                action[b] = image
        return StarOperator(self, action)

    def ad_pairs(self, letter: StarBasisIndex) -> Tuple[np.ndarray, np.ndarray]:
        """ad of one basis letter as (source rows, target columns) of its nonzero entries."""
        cached = self._pair_cache.get(letter)
        if cached is None:
            self.index_of(letter)
            srcs, tgts = [], []
            for k, b in enumerate(self._basis):
                product = star_basis_product(self.lie, b, letter)
                if product is not None:
                    srcs.append(k)
                    tgts.append(self._position[product])
            cached = (np.array(srcs, dtype=np.intp), np.array(tgts, dtype=np.intp))
            self._pair_cache[letter] = cached
        return cached

    def ad_dense(self, y: StarElement) -> np.ndarray:
        self.check_dense_cap()
        self.validate(y)
        out = np.zeros((self.dim, self.dim), dtype=np.uint8)
        for letter in y.support:
            srcs, tgts = self.ad_pairs(letter)
            out[srcs, tgts] ^= 1
        return out

    def random_element(self, rng: np.random.Generator, support_max: Optional[int] = None) -> StarElement:
        """Nonzero element with between 1 and support_max basis terms."""
        support_max = settings.RANDOM_SUPPORT_MAX if support_max is None else support_max
        size = int(rng.integers(1, min(support_max, self.dim) + 1))
        picks = rng.choice(self.dim, size=size, replace=False)
        return StarElement(self.params, frozenset(self._basis[int(k)] for k in picks))

    def _config(self, **extra) -> dict:
        return {"m": self.params.m, "ground_size": self.ground.size, **extra}

    def check_sandwich(self, samples: int, seed: int) -> VerificationReport:
        """ad(x)^2 = 0, and ad(x) ad(y) ad(x) = 0 for every basis y and `samples` random y."""
        tally = CaseTally("star", seed=seed, config=self._config(check="sandwich", samples=samples))
        x = StarElement.basis(self.params, x_index(self.params))
        adx = self.ad_dense(x)
        square = gf2_matmul(adx, adx)
        tally.check("sandwich[x,x]", is_zero(square), expected="0", actual=lambda: f"{int(square.sum())} nonzero entries")
        rng = np.random.default_rng(seed)
        ys = [StarElement.basis(self.params, b) for b in self._basis]
        ys += [self.random_element(rng) for _ in range(samples)]
        for k, y in enumerate(ys):
            sandwich = gf2_matmul(gf2_matmul(adx, self.ad_dense(y)), adx)
            tally.check(
                lambda: f"sandwich[{'basis' if k < self.dim else 'random'}:{k}]",
                is_zero(sandwich),
                inputs=lambda: {"y": str(y)},
                expected="0",
                actual=lambda: f"{int(sandwich.sum())} nonzero entries",
            )
        return tally.report()

    def check_local_nilpotency(self, generators: List[StarBasisIndex]) -> Tuple[int, int]:
        """Nilpotency class of the subalgebra generated by basis elements, and the bound.

        The class is the largest k for which some left-normed product of k
        generators is nonzero.
        """
        if len(set(generators)) != len(generators):
            raise InvalidElement("generators must be distinct")
        bound = max(1, 2 * sum(1 for g in generators if g.ell != self.params.x_index))
        vectors = [self.to_vector(StarElement.basis(self.params, g)) for g in generators]
        ad_by_key = {v.tobytes(): self.ad_dense(StarElement.basis(self.params, g)) for v, g in zip(vectors, generators)}
        dims = product_filtration(
            vectors,
            lambda v, g: gf2_matmul(v[None, :], ad_by_key[g.tobytes()])[0],
            to_vector=lambda v: v,
            from_vector=lambda v: v,
            max_length=bound + 2,
        )
        nilpotency_class = sum(1 for d in dims if d)
        return nilpotency_class, bound

    def verify_star_jacobi(self, exhaustive_cap: int, samples: int, seed: int) -> VerificationReport:
        tally = CaseTally(
            "star", seed=seed, config=self._config(check="jacobi", exhaustive_cap=exhaustive_cap, samples=samples)
        )
        if self.dim <= exhaustive_cap:
            elements = [StarElement.basis(self.params, b) for b in self._basis]
            for a in elements:
                tally.check(lambda: f"alternating[{a}]", not star_multiply(a, a), inputs=lambda: {"a": str(a)},
                            expected="0", actual=lambda: str(star_multiply(a, a)))
            triples = ((a, b, c) for a in elements for b in elements for c in elements)
            tally.measure("jacobi_mode", "exhaustive")
        else:
            rng = np.random.default_rng(seed)
            triples = [tuple(self.random_element(rng) for _ in range(3)) for _ in range(samples)]
            for a in (element for triple in triples for element in triple):
                tally.check(lambda: f"alternating[{a}]", not star_multiply(a, a), inputs=lambda: {"a": str(a)},
                            expected="0", actual=lambda: str(star_multiply(a, a)))
            tally.measure("jacobi_mode", "sampled")
        for a, b, c in triples:
            value = (
                star_multiply(star_multiply(a, b), c)
                + star_multiply(star_multiply(b, c), a)
                + star_multiply(star_multiply(c, a), b)
            )
            tally.check(
                lambda: f"jacobi[{a},{b},{c}]",
                not value,
                inputs=lambda: {"a": str(a), "b": str(b), "c": str(c)},
                expected="0",
                actual=lambda: str(value),
            )
        return tally.report()

    def check_truncation_closure(self) -> VerificationReport:
        tally = CaseTally("star", config=self._config(check="truncation-closure"))
        for a in self._basis:
            for b in self._basis:
                product = star_basis_product(self.lie, a, b)
                tally.check(
                    lambda: f"closure[{a.label(self.params)},{b.label(self.params)}]",
                    product is None or product in self._position,
                    expected="product inside the truncation",
                    actual=lambda: product.label(self.params),
                )
        tally.check(
            "dimension",
            len(self._basis) == self.dim,
            expected=str(self.dim),
            actual=str(len(self._basis)),
        )
        tally.measure("dim", self.dim)
        return tally.report()

    def check_x_square_kills(self) -> VerificationReport:
        """(z * x) * x = 0 for every basis z."""
        tally = CaseTally("star", config=self._config(check="x-square-kills"))
        x = StarElement.basis(self.params, x_index(self.params))
        for b in self._basis:
            z = StarElement.basis(self.params, b)
            value = star_multiply(star_multiply(z, x), x)
            tally.check(lambda: f"x-square[{z}]", not value, expected="0", actual=lambda: str(value))
        return tally.report()

    def check_embedding_compatibility(self) -> VerificationReport:
        """z_A * t_B equals (z * t)_{A ∪ B} for disjoint A, B and zero when they meet."""
        p = self.params
        tally = CaseTally("star", config=self._config(check="embedding"))
        letters = range(p.n + 1)
        for a_set in self.ground.subsets():
            for b_set in self.ground.subsets():
                disjoint = not (a_set & b_set)
                for z in letters:
                    for t in letters:
                        got = star_basis_product(self.lie, StarBasisIndex(z, a_set), StarBasisIndex(t, b_set))
                        lie_bits = self.lie.product_bits(z, t)
                        if disjoint and lie_bits:
                            want = StarBasisIndex(lie_bits.bit_length() - 1, a_set | b_set)
                        else:
                            want = None
                        tally.check(
                            lambda: f"embedding[{p.label(z)}{format_subset(a_set)},{p.label(t)}{format_subset(b_set)}]",
                            got == want,
                            expected=lambda: want.label(p) if want else "0",
                            actual=lambda: got.label(p) if got else "0",
                        )
        return tally.report()

    def check_nilpotency_samples(self) -> VerificationReport:
        """Local nilpotency class against its bound on a fixed family of generator sets."""
        p = self.params
        tally = CaseTally("star", config=self._config(check="local-nilpotency"))
        x = x_index(p)
        singletons = self.ground.singletons()
        families = [[x], [x, StarBasisIndex(p.w_index, singletons[0])]]
        families.append([StarBasisIndex(p.w_index, s) for s in singletons[:2]] + [x])
        families.append([StarBasisIndex(0, s) for s in singletons[:3]] + [StarBasisIndex(p.w_index, singletons[-1]), x])
        measured = {}
        for family in families:
            label = ",".join(g.label(p) for g in family)
            nilpotency_class, bound = self.check_local_nilpotency(family)
            measured[label] = nilpotency_class
            tally.check(
                f"local-nilpotency[{label}]",
                nilpotency_class <= bound,
                expected=f"class <= {bound}",
                actual=str(nilpotency_class),
            )
        tally.measure("local_nilpotency_class", measured)
        return tally.report()


@lru_cache(maxsize=32)
def star_algebra(m: int, ground_size: int, max_dim: Optional[int] = None) -> StarAlgebra:
    return StarAlgebra(LParams(m), GroundSet(ground_size), max_dim=max_dim)


def check_star_suite(m: int, ground_size: int, samples: int, seed: int,
                     exhaustive_cap: Optional[int] = None, max_dim: Optional[int] = None) -> VerificationReport:
    algebra = star_algebra(m, ground_size, max_dim)
    exhaustive_cap = settings.STAR_EXHAUSTIVE_CAP if exhaustive_cap is None else exhaustive_cap
    tally = CaseTally("star", seed=seed, config={"m": m, "ground_size": ground_size, "samples": samples})
    for report in (
        algebra.check_sandwich(samples, seed),
        algebra.verify_star_jacobi(exhaustive_cap, samples, seed),
        algebra.check_truncation_closure(),
        algebra.check_x_square_kills(),
        algebra.check_embedding_compatibility(),
        algebra.check_nilpotency_samples(),
    ):
        tally.absorb(report)
    tally.measure("dim", algebra.dim)
    logger.info("star suite m=%d N=%d: %d cases", m, ground_size, tally.total)
    return tally.report()
