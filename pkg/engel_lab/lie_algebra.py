"""
The finite Lie algebra L(m) over GF(2).

L(m) has dimension 2**m with basis v(0), ..., v(n-1), w, x where n = 2**m - 2.
Elements are held as integer bitmasks over that basis (bit k = basis index k,
v(i) at index i, w at index n, x at index n+1). Matrices act on row vectors,
so ad(y) has row a equal to the coordinates of basis(a) * y.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional

import numpy as np

from engel_lab.exceptions import InvalidElement
from engel_lab.reporting import CaseTally
from engel_lab.schemas import VerificationReport
from engel_lab.utils.binomial import binom_parity, check_lucas_oracle
from engel_lab.utils.gf2 import (
    algebra_span,
    bits_to_row,
    gf2_matmul,
    left_null_space,
    row_space,
    row_to_bits,
)

logger = logging.getLogger(__name__)

# Enumerate every case rather than sample when there are at most this many.
EXHAUSTIVE_CASES_MAX = 256


@dataclass(frozen=True)
class LParams:
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise InvalidElement(f"m must be at least 2, got {self.m}")

    @property
    def n(self) -> int:
        return 2 ** self.m - 2

    @property
    def dim(self) -> int:
        return self.n + 2

    @property
    def w_index(self) -> int:
        return self.n

    @property
    def x_index(self) -> int:
        return self.n + 1

    def v_index(self, i: int) -> int:
        if not 0 <= i <= self.n - 1:
            raise InvalidElement(f"v index {i} outside 0..{self.n - 1}")
        return i

    def label(self, idx: int) -> str:
        if idx == self.w_index:
            return "w"
        if idx == self.x_index:
            return "x"
        return f"v{idx}"

    def parse_label(self, token: str) -> int:
        if token == "w":
            return self.w_index
        if token == "x":
            return self.x_index
        if token.startswith("v") and token[1:].isdigit():
            return self.v_index(int(token[1:]))
        raise InvalidElement(f"unknown basis symbol {token!r}")


def oplus(i: int, j: int, params: LParams) -> int:
    """i + j reduced mod n-1 into {0, ..., n-2}; always 0 when n = 2."""
    n = params.n
    if not (0 <= i <= n - 1 and 0 <= j <= n - 1):
        raise InvalidElement(f"oplus indices ({i}, {j}) outside 0..{n - 1}")
    return (i + j) % (n - 1)


def _iter_bits(bits: int):
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class LElement:
    params: LParams
    bits: int = 0

    @classmethod
    def basis(cls, params: LParams, idx: int) -> "LElement":
        return cls(params, 1 << idx)

    @classmethod
    def parse(cls, text: str, params: LParams) -> "LElement":
        text = text.strip()
        if text == "0":
            return cls(params, 0)
        bits = 0
        for token in text.split("+"):
            idx = params.parse_label(token.strip())
            if bits >> idx & 1:
                raise InvalidElement(f"repeated term {token.strip()!r} in {text!r}")
            bits |= 1 << idx
        return cls(params, bits)

    def support(self) -> List[int]:
        return list(_iter_bits(self.bits))

    def __add__(self, other: "LElement") -> "LElement":
        if other.params != self.params:
            raise InvalidElement("cannot add elements of different algebras")
        return LElement(self.params, self.bits ^ other.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __str__(self) -> str:
        if not self.bits:
            return "0"
        return "+".join(self.params.label(k) for k in self.support())


class LieAlgebraL:
    """Structure constants, ad matrices and law checks for one L(m)."""

    def __init__(self, params: LParams):
        self.params = params
        dim = params.dim
        self._table = [[self._basis_product_bits(a, b) for b in range(dim)] for a in range(dim)]
        self._ad_cache: Dict[int, np.ndarray] = {}

    def _basis_product_bits(self, a: int, b: int) -> int:
        p = self.params
        n, w, x = p.n, p.w_index, p.x_index
        if a < n and b < n:
            return (1 << oplus(a, b, p)) if binom_parity(b + 1, n - a) else 0
        if a < n or b < n:
            i, other = (a, b) if a < n else (b, a)
            if other == x:
                return 0
            return 1 << (i + 1) if i <= n - 2 else 1 << w
        if {a, b} == {w, x}:
            return 1  # v(0)
        return 0

    def product_bits(self, a: int, b: int) -> int:
        """Bitmask of basis(a) * basis(b); at most one bit is set."""
        return self._table[a][b]

    def basis_product(self, a: int, b: int) -> LElement:
        return LElement(self.params, self._table[a][b])

    def multiply_bits(self, a: int, b: int) -> int:
        out = 0
        for i in _iter_bits(a):
            row = self._table[i]
            for j in _iter_bits(b):
                out ^= row[j]
        return out

    def multiply(self, a: LElement, b: LElement) -> LElement:
        if a.params != self.params or b.params != self.params:
            raise InvalidElement(f"elements do not belong to L({self.params.m})")
        return LElement(self.params, self.multiply_bits(a.bits, b.bits))

    def ad_matrix(self, y: LElement) -> np.ndarray:
        cached = self._ad_cache.get(y.bits)
        if cached is None:
            dim = self.params.dim
            cached = np.array(
                [bits_to_row(self.multiply_bits(1 << a, y.bits), dim) for a in range(dim)],
                dtype=np.uint8,
            )
            cached.setflags(write=False)
            self._ad_cache[y.bits] = cached
        return cached

    def ad_basis(self, idx: int) -> np.ndarray:
        return self.ad_matrix(LElement.basis(self.params, idx))

    def coordinate_operators(self) -> List[np.ndarray]:
        """e_1, ..., e_{n+1}: ad(v(0)), ..., ad(v(n-1)), ad(w)."""
        return [self.ad_basis(k) for k in range(self.params.n + 1)]

    def structure_table(self) -> Dict[str, str]:
        """Nonzero products of basis elements, keyed "a*b"."""
        p = self.params
        return {
            f"{p.label(a)}*{p.label(b)}": str(self.basis_product(a, b))
            for a in range(p.dim)
            for b in range(p.dim)
            if self._table[a][b]
        }

    def random_element(self, rng: np.random.Generator, nonzero: bool = False) -> LElement:
        while True:
            bits = row_to_bits(rng.integers(0, 2, size=self.params.dim))
            if bits or not nonzero:
                return LElement(self.params, bits)

    def _config(self, **extra) -> dict:
        return {"m": self.params.m, **extra}

    def verify_alternating(self) -> VerificationReport:
        p = self.params
        tally = CaseTally("lie", config=self._config(check="alternating"))
        for a in range(p.dim):
            tally.check(
                lambda: f"alternating[{p.label(a)}*{p.label(a)}]",
                self._table[a][a] == 0,
                inputs=lambda: {"a": p.label(a)},
                expected="0",
                actual=lambda: str(self.basis_product(a, a)),
            )
        for a in range(p.dim):
            for b in range(a + 1, p.dim):
                tally.check(
                    lambda: f"symmetric[{p.label(a)},{p.label(b)}]",
                    self._table[a][b] == self._table[b][a],
                    inputs=lambda: {"a": p.label(a), "b": p.label(b)},
                    expected=lambda: str(self.basis_product(b, a)),
                    actual=lambda: str(self.basis_product(a, b)),
                )
        return tally.report()

    def jacobi_bits(self, a: int, b: int, c: int) -> int:
        mul = self.multiply_bits
        return mul(mul(a, b), c) ^ mul(mul(b, c), a) ^ mul(mul(c, a), b)

    def verify_jacobi(self) -> VerificationReport:
        p = self.params
        tally = CaseTally("lie", config=self._config(check="jacobi"))
        for a in range(p.dim):
            for b in range(p.dim):
                for c in range(p.dim):
                    value = self.jacobi_bits(1 << a, 1 << b, 1 << c)
                    tally.check(
                        lambda: f"jacobi[{p.label(a)},{p.label(b)},{p.label(c)}]",
                        value == 0,
                        inputs=lambda: {"a": p.label(a), "b": p.label(b), "c": p.label(c)},
                        expected="0",
                        actual=lambda: str(LElement(p, value)),
                    )
        return tally.report()

    def center(self) -> List[LElement]:
        """Basis (reduced echelon form) of {z : z*b = 0 for every basis b}."""
        stacked = np.hstack([self.ad_basis(b) for b in range(self.params.dim)])
        return [LElement(self.params, row_to_bits(row)) for row in left_null_space(stacked)]

    def ideal_closure(self, y: LElement) -> np.ndarray:
        """Smallest subspace containing y and closed under multiplication by L."""
        if not y:
            raise InvalidElement("ideal closure of the zero element")
        dim = self.params.dim
        basis = row_space(bits_to_row(y.bits, dim)[None, :])
        while True:
            products = [
                bits_to_row(self.multiply_bits(row_to_bits(row), 1 << b), dim)
                for row in basis
                for b in range(dim)
            ]
            grown = row_space(np.vstack([basis, np.array(products)]))
            if grown.shape[0] == basis.shape[0]:
                return basis
            basis = grown

    def w_subspace(self) -> np.ndarray:
        dim = self.params.dim
        return row_space(np.array([bits_to_row(1 << k, dim) for k in range(self.params.n + 1)]))

    def enveloping_algebra_dim(self) -> int:
        dim = self.params.dim
        generators = [self.ad_basis(k) for k in range(dim)]
        basis = algebra_span(
            generators,
            gf2_matmul,
            to_vector=lambda mat: mat.ravel(),
            from_vector=lambda vec: vec.reshape(dim, dim),
        )
        logger.info("enveloping algebra of L(%d) has dimension %d", self.params.m, basis.shape[0])
        return basis.shape[0]

    def check_center(self) -> VerificationReport:
        tally = CaseTally("lie", config=self._config(check="center"))
        found = self.center()
        tally.check(
            f"center[m={self.params.m}]",
            not found,
            expected="[]",
            actual=lambda: "[" + ", ".join(str(z) for z in found) + "]",
        )
        tally.measure("center_dim", len(found))
        return tally.report()

    def check_ideal_simplicity(self, samples: int, seed: int) -> VerificationReport:
        """ideal_closure(y) = W for nonzero y in W; exhaustive for small W (every m <= 3), else `samples` random y."""
        p = self.params
        tally = CaseTally("lie", seed=seed, config=self._config(check="ideal", samples=samples))
        target = self.w_subspace()
        w_mask = (1 << (p.n + 1)) - 1
        if w_mask <= EXHAUSTIVE_CASES_MAX:
            candidates = range(1, w_mask + 1)
        else:
            rng = np.random.default_rng(seed)
            candidates = []
            while len(candidates) < samples:
                bits = row_to_bits(rng.integers(0, 2, size=p.n + 1))
                if bits:
                    candidates.append(bits)
        for bits in candidates:
            y = LElement(p, bits)
            closure = self.ideal_closure(y)
            tally.check(
                lambda: f"ideal[{y}]",
                closure.shape == target.shape and bool(np.array_equal(closure, target)),
                inputs=lambda: {"y": str(y)},
                expected=f"W (dimension {target.shape[0]})",
                actual=lambda: f"subspace of dimension {closure.shape[0]}",
            )
        return tally.report()

    def check_structure_symmetry(self) -> VerificationReport:
        n = self.params.n
        tally = CaseTally("lie", config=self._config(check="structure-symmetry"))
        for i in range(n):
            for j in range(n):
                left, right = binom_parity(j + 1, n - i), binom_parity(i + 1, n - j)
                tally.check(
                    lambda: f"symmetry[{i},{j}]",
                    left == right,
                    expected=lambda: f"C({j + 1},{n - i}) = C({i + 1},{n - j}) mod 2",
                    actual=lambda: f"{left} vs {right}",
                )
        return tally.report()

    def check_vanishing_products(self) -> VerificationReport:
        """v(i) * v(j) = 0 whenever i + j <= n - 2."""
        n = self.params.n
        tally = CaseTally("lie", config=self._config(check="vanishing-products"))
        for i in range(n):
            for j in range(n):
                if i + j > n - 2:
                    continue
                tally.check(
                    lambda: f"vanishing[v{i},v{j}]",
                    self._table[i][j] == 0,
                    expected="0",
                    actual=lambda: str(self.basis_product(i, j)),
                )
        return tally.report()

    def check_ad_agreement(self, samples: int, seed: int) -> VerificationReport:
        """a * b read off ad(b) equals the direct product; every pair of elements at m = 2."""
        p = self.params
        tally = CaseTally("lie", seed=seed, config=self._config(check="ad-agreement", samples=samples))
        elements = 1 << p.dim
        if elements * elements <= EXHAUSTIVE_CASES_MAX:
            pairs = [(LElement(p, a), LElement(p, b)) for a in range(elements) for b in range(elements)]
        else:
            rng = np.random.default_rng(seed)
            pairs = [(self.random_element(rng), self.random_element(rng)) for _ in range(samples)]
        for case, (a, b) in enumerate(pairs):
            via_matrix = row_to_bits(gf2_matmul(bits_to_row(a.bits, p.dim)[None, :], self.ad_matrix(b))[0])
            direct = self.multiply_bits(a.bits, b.bits)
            tally.check(
                f"ad-agreement[{case}]",
                via_matrix == direct,
                inputs=lambda: {"a": str(a), "b": str(b)},
                expected=lambda: str(LElement(p, direct)),
                actual=lambda: str(LElement(p, via_matrix)),
            )
        return tally.report()

    def check_enveloping_dim(self) -> VerificationReport:
        dim = self.params.dim
        tally = CaseTally("lie", config=self._config(check="enveloping"))
        value = self.enveloping_algebra_dim()
        tally.check(
            f"enveloping-dim[m={self.params.m}]",
            1 <= value <= dim * dim,
            expected=f"1 <= dim E <= {dim * dim}",
            actual=str(value),
        )
        tally.measure("enveloping_dim", value)
        return tally.report()


@lru_cache(maxsize=None)
def lie_algebra(m: int) -> LieAlgebraL:
    return LieAlgebraL(LParams(m))


def check_lie_suite(m: int, samples: int, seed: int, lucas_max: Optional[int] = None) -> VerificationReport:
    """Every L(m) law and structure check, folded into one report."""
    algebra = lie_algebra(m)
    tally = CaseTally("lie", seed=seed, config={"m": m, "samples": samples})
    for report in (
        algebra.verify_alternating(),
        algebra.verify_jacobi(),
        algebra.check_center(),
        algebra.check_ideal_simplicity(samples, seed),
        algebra.check_structure_symmetry(),
        algebra.check_vanishing_products(),
        algebra.check_ad_agreement(samples, seed),
        algebra.check_enveloping_dim(),
        check_lucas_oracle(lucas_max),
    ):
        tally.absorb(report)
    tally.measure("jacobi_cases", algebra.params.dim ** 3)
    tally.measure("ideal_x_dim", int(algebra.ideal_closure(LElement.basis(algebra.params, algebra.params.x_index)).shape[0]))
    return tally.report()
