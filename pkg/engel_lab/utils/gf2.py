"""
Dense GF(2) linear algebra on numpy uint8 arrays.

Products go through float32 BLAS and are reduced mod 2, which is exact while
every inner dimension stays below 2**24. Row reduction, rank and null spaces
are delegated to galois; span closures with many long candidate vectors use
an incremental basis over packed integers instead.
"""
import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence, TypeVar

import galois
import numpy as np

logger = logging.getLogger(__name__)

GF2 = galois.GF2
T = TypeVar("T")


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.uint8)


def zeros(rows: int, cols: Optional[int] = None) -> np.ndarray:
    return np.zeros((rows, rows if cols is None else cols), dtype=np.uint8)


def gf2_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    product = a.astype(np.float32) @ b.astype(np.float32)
    return (product.astype(np.int64) & 1).astype(np.uint8)


def is_zero(a: np.ndarray) -> bool:
    return not a.any()


def bits_to_row(bits: int, length: int) -> np.ndarray:
    return np.array([(bits >> k) & 1 for k in range(length)], dtype=np.uint8)


def row_to_bits(row: np.ndarray) -> int:
    bits = 0
    for k in np.flatnonzero(row):
        bits |= 1 << int(k)
    return bits


def _plain(a) -> np.ndarray:
    return np.asarray(a.view(np.ndarray), dtype=np.uint8)


def row_space(vectors: np.ndarray) -> np.ndarray:
    """Basis of the row span in reduced row-echelon form (zero rows dropped)."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.uint8))
    if vectors.shape[0] == 0 or not vectors.any():
        return np.zeros((0, vectors.shape[1]), dtype=np.uint8)
    return _plain(GF2(vectors).row_space())


def rank(vectors: np.ndarray) -> int:
    return row_space(vectors).shape[0]


def left_null_space(matrix: np.ndarray) -> np.ndarray:
    """Basis (RREF rows) of {z : z @ matrix = 0}."""
    matrix = np.asarray(matrix, dtype=np.uint8)
    if not matrix.any():
        return identity(matrix.shape[0])
    basis = _plain(GF2(matrix.T).null_space())
    return row_space(basis) if basis.shape[0] else basis.reshape(0, matrix.shape[0])


def in_row_space(vector: np.ndarray, basis: np.ndarray) -> bool:
    if basis.shape[0] == 0:
        return not vector.any()
    return rank(np.vstack([basis, vector])) == basis.shape[0]


def matmul_partial_right(m: np.ndarray, srcs: np.ndarray, tgts: np.ndarray) -> np.ndarray:
    """m @ (1 + P) where P has a single 1 at (srcs[k], tgts[k]) per k."""
    if len(srcs) == 0:
        return m.copy()
    delta_t = np.zeros((m.shape[1], m.shape[0]), dtype=np.uint8)
    np.bitwise_xor.at(delta_t, tgts, m.T[srcs])
    return m ^ delta_t.T


def matmul_partial_left(m: np.ndarray, srcs: np.ndarray, tgts: np.ndarray) -> np.ndarray:
    """(1 + P) @ m for the same P; srcs must be distinct."""
    out = m.copy()
    if len(srcs):
        out[srcs] ^= m[tgts]
    return out


def pack(vector: np.ndarray) -> int:
    return int.from_bytes(np.packbits(vector.astype(np.uint8), bitorder="little").tobytes(), "little")


def unpack(bits: int, length: int) -> np.ndarray:
    raw = np.frombuffer(bits.to_bytes((length + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:length]


class XorBasis:
    """Span of packed GF(2) vectors, kept as one reduced vector per leading bit."""

    def __init__(self, vectors: Iterable[int] = ()):
        self._rows: Dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def add(self, v: int) -> bool:
        while v:
            lead = v.bit_length() - 1
            row = self._rows.get(lead)
            if row is None:
                self._rows[lead] = v
                return True
            v ^= row
        return False

    def __len__(self) -> int:
        return len(self._rows)

    def __contains__(self, v: int) -> bool:
        while v:
            row = self._rows.get(v.bit_length() - 1)
            if row is None:
                return False
            v ^= row
        return True

    def vectors(self) -> List[int]:
        return [self._rows[k] for k in sorted(self._rows)]


def product_filtration(
    generators: Sequence[T],
    multiply: Callable[[T, T], T],
    to_vector: Callable[[T], np.ndarray],
    from_vector: Callable[[np.ndarray], T],
    max_length: int,
) -> List[int]:
    """Dimensions of P_1, P_2, ... where P_k spans all k-fold products of generators.

    Stops after the first zero span, or after max_length spans. P_{k+1} is
    spanned by P_k times the generators, so only a basis of P_k is kept.
    """
    if not generators:
        return [0]
    length = to_vector(generators[0]).size
    dims = []
    current = XorBasis(pack(to_vector(g)) for g in generators)
    for _ in range(max_length):
        dims.append(len(current))
        if not len(current):
            break
        following = XorBasis()
        for row in current.vectors():
            element = from_vector(unpack(row, length))
            for g in generators:
                following.add(pack(to_vector(multiply(element, g))))
        current = following
    logger.debug("product filtration dims: %s", dims)
    return dims


def nilpotency_index(dims: List[int]) -> Optional[int]:
    """Least q with P_q = 0 for a filtration computed by product_filtration."""
    for k, d in enumerate(dims, start=1):
        if d == 0:
            return k
    return None


def algebra_span(
    generators: Sequence[T],
    multiply: Callable[[T, T], T],
    to_vector: Callable[[T], np.ndarray],
    from_vector: Callable[[np.ndarray], T],
) -> np.ndarray:
    """RREF basis of the (non-unital) associative algebra generated by generators."""
    length = to_vector(generators[0]).size
    span = XorBasis(pack(to_vector(g)) for g in generators)
    frontier = span.vectors()
    while frontier:
        fresh = []
        for row in frontier:
            element = from_vector(unpack(row, length))
            for g in generators:
                v = pack(to_vector(multiply(element, g)))
                if span.add(v):
                    fresh.append(v)
        frontier = fresh
    return row_space(np.array([unpack(v, length) for v in span.vectors()]))
