"""
Operators of E* with multi-degree superfixes.

An element is a GF(2) combination of pairs (e, d) with e in the enveloping
algebra E of L(m) and d a vector of r degrees. Pairs with the same degree add
their matrices, so an element is stored as a map degree -> E-matrix. The
product is

    e^(i_1..i_r) * f^(j_1..j_r) = prod_l C(i_l + j_l, i_l) (ef)^(i_1+j_1..i_r+j_r)

with binomials taken mod 2. On a star truncation whose ground set is split
into blocks A_1..A_r, e^(d) is the sum of e(B) over all B = B_1 ∪ ... ∪ B_r
with B_l ⊆ A_l and |B_l| = d_l, where e(B) sends z_C to (z e)_{C ⊔ B} and x
to (x e)_B.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from engel_lab.exceptions import GroundSetMismatch, InvalidElement
from engel_lab.group import UnipotentGroup
from engel_lab.lie_algebra import LParams, lie_algebra
from engel_lab.reporting import CaseTally
from engel_lab.schemas import VerificationReport
from engel_lab.star_algebra import StarAlgebra, StarBasisIndex
from engel_lab.utils.binomial import binom_parity
from engel_lab.utils.gf2 import gf2_matmul, identity, nilpotency_index, product_filtration, row_to_bits
from engel_lab.utils.subsets import ANNIHILATED, GroundSet, modified_union

logger = logging.getLogger(__name__)

Degree = Tuple[int, ...]


@dataclass(eq=False)
class MultiDegElement:
    r: int
    dim: int
    terms: Dict[Degree, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {d: m for d, m in self.terms.items() if m.any()}

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiDegElement):
            return NotImplemented
        return (
            self.r == other.r
            and self.terms.keys() == other.terms.keys()
            and all(np.array_equal(m, other.terms[d]) for d, m in self.terms.items())
        )

    __hash__ = None

    def __add__(self, other: "MultiDegElement") -> "MultiDegElement":
        if other.r != self.r:
            raise InvalidElement(f"degree lengths differ: {self.r} vs {other.r}")
        terms = dict(self.terms)
        for d, m in other.terms.items():
            terms[d] = terms[d] ^ m if d in terms else m
        return MultiDegElement(self.r, self.dim, terms)

    def degrees(self) -> List[Degree]:
        return sorted(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"e[{int(self.terms[d].sum())} entries]^{d}" for d in self.degrees())


def coefficient_parity(i: Degree, j: Degree) -> int:
    for a, b in zip(i, j):
        if not binom_parity(a + b, a):
            return 0
    return 1


class SandwichCalculus:
    """The elements f(i, k) = e_i^(i in coordinate k) and ad(x) for one L(m) and r."""

    def __init__(self, params: LParams, r: int):
        if r < 1:
            raise InvalidElement("r must be at least 1")
        self.params = params
        self.r = r
        self.lie = lie_algebra(params.m)
        self.dim = params.dim
        self.max_degree = params.n + 1
        self._e = self.lie.coordinate_operators()
        self._adx = self.lie.ad_basis(params.x_index)

    def zero(self) -> MultiDegElement:
        return MultiDegElement(self.r, self.dim)

    def element(self, matrix: np.ndarray, degree: Degree) -> MultiDegElement:
        if len(degree) != self.r:
            raise InvalidElement(f"degree {degree} does not have {self.r} entries")
        return MultiDegElement(self.r, self.dim, {tuple(degree): np.array(matrix, dtype=np.uint8)})

    def e(self, i: int) -> np.ndarray:
        if not 1 <= i <= self.params.n + 1:
            raise InvalidElement(f"e_{i} outside e_1..e_{self.params.n + 1}")
        return self._e[i - 1]

    def f(self, i: int, k: int) -> MultiDegElement:
        if not 1 <= k <= self.r:
            raise InvalidElement(f"coordinate {k} outside 1..{self.r}")
        degree = [0] * self.r
        degree[k - 1] = i
        return self.element(self.e(i), tuple(degree))

    def adx(self) -> MultiDegElement:
        return self.element(self._adx, (0,) * self.r)

    def product(self, a: MultiDegElement, b: MultiDegElement) -> MultiDegElement:
        if a.r != self.r or b.r != self.r:
            raise InvalidElement(f"degree lengths differ from r = {self.r}")
        terms: Dict[Degree, np.ndarray] = {}
        for da, ma in a.terms.items():
            for db, mb in b.terms.items():
                degree = tuple(x + y for x, y in zip(da, db))
                # A coordinate above n+1 always comes with an even coefficient.
                if max(degree) > self.max_degree or not coefficient_parity(da, db):
                    continue
                prod = gf2_matmul(ma, mb)
                terms[degree] = terms[degree] ^ prod if degree in terms else prod
        return MultiDegElement(self.r, self.dim, terms)

    def f_generators(self) -> List[MultiDegElement]:
        return [self.f(i, k) for k in range(1, self.r + 1) for i in range(1, self.params.n + 2)]

    def q_generators(self) -> List[MultiDegElement]:
        return [self.adx()] + self.f_generators()

    def _degree_slot(self, degree: Degree) -> int:
        slot = 0
        for d in reversed(degree):
            slot = slot * (self.max_degree + 1) + d
        return slot

    def _slot_degree(self, slot: int) -> Degree:
        out = []
        for _ in range(self.r):
            slot, d = divmod(slot, self.max_degree + 1)
            out.append(d)
        return tuple(out)

    def to_vector(self, element: MultiDegElement) -> np.ndarray:
        block = self.dim * self.dim
        vec = np.zeros(block * (self.max_degree + 1) ** self.r, dtype=np.uint8)
        for degree, matrix in element.terms.items():
            start = self._degree_slot(degree) * block
            vec[start:start + block] = matrix.ravel()
        return vec

    def from_vector(self, vec: np.ndarray) -> MultiDegElement:
        block = self.dim * self.dim
        blocks = vec.reshape(-1, block)
        return MultiDegElement(
            self.r,
            self.dim,
            {self._slot_degree(int(s)): blocks[s].reshape(self.dim, self.dim) for s in np.flatnonzero(blocks.any(axis=1))},
        )

    def _index(self, generators: List[MultiDegElement], bound: int) -> Tuple[int, List[int]]:
        dims = product_filtration(generators, self.product, self.to_vector, self.from_vector, max_length=bound + 1)
        index = nilpotency_index(dims)
        return (len(dims) + 1 if index is None else index), dims

    def nilpotency_index_F(self) -> Tuple[int, int]:
        index, dims = self._index(self.f_generators(), 4 * self.r)
        logger.info("F filtration for m=%d r=%d: %s", self.params.m, self.r, dims)
        return index, 4 * self.r

    def nilpotency_index_Q(self) -> Tuple[int, int]:
        index, dims = self._index(self.q_generators(), 4 * self.r + 1)
        logger.info("Q filtration for m=%d r=%d: %s", self.params.m, self.r, dims)
        return index, 4 * self.r + 1

    def _config(self, **extra) -> dict:
        return {"m": self.params.m, "r": self.r, **extra}

    def check_binomial_vanishing(self) -> VerificationReport:
        """C(i+j, i) is even for 0 <= i, j <= n+1 with i+j >= n+2, and odd when i+j = n+1."""
        n = self.params.n
        tally = CaseTally("sandwich", config=self._config(check="binomial-vanishing"))
        vanishing = 0
        for i in range(n + 2):
            for j in range(n + 2):
                if i + j >= n + 2:
                    parity = binom_parity(i + j, i)
                    vanishing += 1
                    tally.check(f"binomial[{i},{j}]", parity == 0, expected="0", actual=str(parity))
                elif i + j == n + 1:
                    parity = binom_parity(n + 1, i)
                    tally.check(f"binomial-boundary[{i},{j}]", parity == 1, expected="1", actual=str(parity))
        tally.measure("vanishing_pairs", vanishing)
        return tally.report()

    def check_short_products_vanish(self) -> VerificationReport:
        """e_i e_j = 0 for 1 <= i, j <= n with i + j <= n - 1."""
        n = self.params.n
        tally = CaseTally("sandwich", config=self._config(check="short-products"))
        pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i + j <= n - 1]
        if not pairs:
            tally.vacuous_pass(f"short-products[m={self.params.m}]")
        for i, j in pairs:
            prod = gf2_matmul(self.e(i), self.e(j))
            tally.check(f"short-product[{i},{j}]", not prod.any(), expected="0",
                        actual=lambda: f"{int(prod.sum())} nonzero entries")
        return tally.report()

    def check_pair_degree_window(self) -> VerificationReport:
        """Nonzero f(i,k) f(j,s) forces i + j >= n; on one coordinate also i + j <= n+1.

        Also f(n+1,k) f(j,k) = 0 for 1 <= j <= n+1. On different coordinates
        products above the window can survive; they are measured, not failed.
        """
        n = self.params.n
        calc = self if self.r >= 2 else SandwichCalculus(self.params, 2)
        tally = CaseTally("sandwich", config=self._config(check="pair-window"))
        above_window = []
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                same = bool(calc.product(calc.f(i, 1), calc.f(j, 1)))
                tally.check(f"window-same[{i},{j}]", not same or n <= i + j <= n + 1,
                            expected=f"{n} <= i+j <= {n + 1} or zero", actual=f"nonzero at i+j = {i + j}")
                cross = bool(calc.product(calc.f(i, 1), calc.f(j, 2)))
                tally.check(f"window-cross[{i},{j}]", not cross or i + j >= n,
                            expected=f"i+j >= {n} or zero", actual=f"nonzero at i+j = {i + j}")
                if cross and i + j > n + 1:
                    above_window.append(f"{i},{j}")
        for j in range(1, n + 2):
            prod = calc.product(calc.f(n + 1, 1), calc.f(j, 1))
            tally.check(f"w-kills-same[{j}]", not prod, expected="0", actual=lambda: str(prod))
        tally.measure("cross_coordinate_above_window", above_window)
        return tally.report()

    def check_rewriting_identity(self) -> VerificationReport:
        """ad(x) f(n+1,k) = f(n+1,k) ad(x) + e_1 in degree (n+1) at coordinate k."""
        n = self.params.n
        tally = CaseTally("sandwich", config=self._config(check="rewriting"))
        for k in range(1, self.r + 1):
            left = self.product(self.adx(), self.f(n + 1, k))
            degree = tuple(n + 1 if l == k else 0 for l in range(1, self.r + 1))
            correction = self.element(self.e(1), degree)
            right = self.product(self.f(n + 1, k), self.adx()) + correction
            tally.check(f"rewriting[k={k}]", left == right, expected=lambda: str(right), actual=lambda: str(left))
        return tally.report()

    def check_alternating_product(self) -> VerificationReport:
        """ad(x) f(n+1,k1) ad(x) f(n+1,k2) = 0 for every k1, k2."""
        n = self.params.n
        tally = CaseTally("sandwich", config=self._config(check="alternating-product"))
        adx = self.adx()
        for k1 in range(1, self.r + 1):
            for k2 in range(1, self.r + 1):
                value = self.product(self.product(self.product(adx, self.f(n + 1, k1)), adx), self.f(n + 1, k2))
                tally.check(f"alternating[{k1},{k2}]", not value, expected="0", actual=lambda: str(value))
        return tally.report()

    def random_monomial(self, rng: np.random.Generator, max_factors: int = 3) -> MultiDegElement:
        generators = self.q_generators()
        out = generators[int(rng.integers(len(generators)))]
        for _ in range(int(rng.integers(0, max_factors))):
            out = self.product(out, generators[int(rng.integers(len(generators)))])
        return out

    def random_element(self, rng: np.random.Generator, max_terms: int = 3) -> MultiDegElement:
        out = self.zero()
        for _ in range(int(rng.integers(1, max_terms + 1))):
            out = out + self.random_monomial(rng)
        return out

    def check_associativity(self, samples: int, seed: int) -> VerificationReport:
        tally = CaseTally("sandwich", seed=seed, config=self._config(check="associativity", samples=samples))
        rng = np.random.default_rng(seed)
        for case in range(samples):
            a, b, c = (self.random_element(rng) for _ in range(3))
            left = self.product(self.product(a, b), c)
            right = self.product(a, self.product(b, c))
            tally.check(f"associativity[{case}]", left == right, expected=lambda: str(left), actual=lambda: str(right))
        return tally.report()

    def check_nilpotency(self) -> VerificationReport:
        tally = CaseTally("sandwich", config=self._config(check="nilpotency"))
        f_index, f_bound = self.nilpotency_index_F()
        q_index, q_bound = self.nilpotency_index_Q()
        tally.check(f"F-index[r={self.r}]", f_index <= f_bound, expected=f"<= {f_bound}", actual=str(f_index))
        tally.check(f"Q-index[r={self.r}]", q_index <= q_bound, expected=f"<= {q_bound}", actual=str(q_index))
        tally.measure("F_index", {"index": f_index, "bound": f_bound})
        tally.measure("Q_index", {"index": q_index, "bound": q_bound})
        return tally.report()

    def partition(self, set_sizes: Sequence[int], ground: GroundSet) -> List[List[int]]:
        """Consecutive blocks A_1..A_r of singletons of the given sizes."""
        if len(set_sizes) != self.r:
            raise InvalidElement(f"expected {self.r} block sizes, got {len(set_sizes)}")
        if sum(set_sizes) > ground.size:
            raise GroundSetMismatch(f"blocks of sizes {list(set_sizes)} do not fit a ground set of size {ground.size}")
        singles = ground.singletons()
        blocks, start = [], 0
        for size in set_sizes:
            blocks.append(singles[start:start + size])
            start += size
        return blocks

    def concrete_operator(self, element: MultiDegElement, algebra: StarAlgebra, blocks: List[List[int]]) -> np.ndarray:
        """Dense matrix of an element acting on the star truncation."""
        if algebra.params != self.params:
            raise InvalidElement("star truncation is over a different L(m)")
        algebra.check_dense_cap()
        basis = algebra.basis()
        x = self.params.x_index
        out = np.zeros((algebra.dim, algebra.dim), dtype=np.uint8)
        for degree, matrix in element.terms.items():
            rows = [row_to_bits(matrix[ell]) for ell in range(self.dim)]
            choices = [itertools.combinations(block, d) for block, d in zip(blocks, degree)]
            for picks in itertools.product(*choices):
                b_set = 0
                for pick in picks:
                    for s in pick:
                        b_set |= s
                for k, index in enumerate(basis):
                    image = rows[index.ell]
                    if not image:
                        continue
                    if index.ell == x:
                        if not b_set and image != 1 << x:
                            raise InvalidElement("a degree-zero operator must not move x into W")
                        subset = b_set
                    else:
                        subset = modified_union(index.subset, b_set)
                        if subset is ANNIHILATED:
                            continue
                    for ell in range(self.dim):
                        if image >> ell & 1:
                            target = 0 if ell == x else subset
                            out[k, algebra.index_of(StarBasisIndex(ell, target))] ^= 1
        return out

    def cross_validate_concrete(self, set_sizes: Sequence[int], ground: GroundSet,
                                samples: int = 100, seed: int = 0) -> VerificationReport:
        """Symbolic products against composition of concrete operators on a star truncation."""
        tally = CaseTally("sandwich", seed=seed, config=self._config(check="concrete", set_sizes=list(set_sizes),
                                                                       ground_size=ground.size, samples=samples))
        blocks = self.partition(set_sizes, ground)
        algebra = StarAlgebra(self.params, ground)
        algebra.check_dense_cap()
        group = UnipotentGroup(algebra)
        eye = identity(algebra.dim)
        n = self.params.n
        for k, block in enumerate(blocks, start=1):
            expansion = self.adx()
            for i in range(1, n + 2):
                expansion = expansion + self.f(i, k)
            concrete = eye ^ self.concrete_operator(expansion, algebra, blocks)
            tally.check(
                f"conjugate-expansion[block={k}]",
                bool(np.array_equal(concrete, group.conjugate_by_w(block).matrix)),
                expected="matrix conjugation of 1+ad(x)",
                actual="a different operator",
            )
        adx = self.adx()
        tally.check(
            "zero-degree-square",
            not self.product(adx, adx) and not gf2_matmul(*(2 * [self.concrete_operator(adx, algebra, blocks)])).any(),
            expected="0 on both paths",
            actual="nonzero",
        )
        rng = np.random.default_rng(seed)
        for case in range(samples):
            a, b = self.random_element(rng), self.random_element(rng)
            symbolic = self.concrete_operator(self.product(a, b), algebra, blocks)
            composed = gf2_matmul(self.concrete_operator(a, algebra, blocks), self.concrete_operator(b, algebra, blocks))
            tally.check(
                f"product-agreement[{case}]",
                bool(np.array_equal(symbolic, composed)),
                inputs=lambda: {"a": str(a), "b": str(b)},
                expected="composition of the concrete operators",
                actual="a different operator",
            )
        return tally.report()


def check_sandwich_suite(m: int, max_r: int, samples: int, seed: int,
                         concrete_ground: Optional[int] = None) -> VerificationReport:
    """Degree windows, rewriting identities, F and Q indices for r <= max_r, and the concrete cross-check."""
    params = LParams(m)
    tally = CaseTally("sandwich", seed=seed, config={"m": m, "r": max_r, "samples": samples})
    base = SandwichCalculus(params, 2)
    for report in (
        base.check_binomial_vanishing(),
        base.check_short_products_vanish(),
        base.check_pair_degree_window(),
        base.check_associativity(samples, seed),
    ):
        tally.absorb(report)
    indices = {}
    for r in range(1, max_r + 1):
        calc = SandwichCalculus(params, r)
        tally.absorb(calc.check_rewriting_identity())
        tally.absorb(calc.check_alternating_product())
        report = calc.check_nilpotency()
        tally.absorb(report, prefix=f"r{r}")
        indices[str(r)] = {"F": report.measured_values["F_index"], "Q": report.measured_values["Q_index"]}
    tally.measure("nilpotency", indices)
    for r, sizes in ((1, (3,)), (2, (2, 2))):
        ground = GroundSet(concrete_ground or sum(sizes))
        report = SandwichCalculus(params, r).cross_validate_concrete(sizes, ground, samples=samples, seed=seed + r)
        tally.absorb(report, prefix=f"concrete-r{r}")
    return tally.report()
