"""Finite subsets of a small ground set, encoded as integer bitmasks."""
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Union

import numpy as np

from engel_lab.exceptions import GroundSetMismatch, InvalidElement

MAX_GROUND_SIZE = 64


class _Annihilated:
    """Result of a modified union of overlapping sets; acts as the zero element."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ANNIHILATED"

    def __bool__(self) -> bool:
        return False


ANNIHILATED = _Annihilated()

SubsetOrAnnihilated = Union[int, _Annihilated]


def modified_union(a: SubsetOrAnnihilated, b: SubsetOrAnnihilated) -> SubsetOrAnnihilated:
    """A ⊔ B: the union of disjoint sets, ANNIHILATED when they meet.

    ANNIHILATED is absorbing, so chains of unions can be folded left to right.
    """
    if a is ANNIHILATED or b is ANNIHILATED:
        return ANNIHILATED
    if a & b:
        return ANNIHILATED
    return a | b


def subset_from_elements(elements: Iterable[int]) -> int:
    bits = 0
    for e in elements:
        if e < 0 or e >= MAX_GROUND_SIZE:
            raise InvalidElement(f"ground element {e} outside 0..{MAX_GROUND_SIZE - 1}")
        bits |= 1 << e
    return bits


def subset_elements(bits: int) -> List[int]:
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return out


def format_subset(bits: int) -> str:
    return "{" + ",".join(str(e) for e in subset_elements(bits)) + "}"


def parse_subset(text: str) -> int:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise InvalidElement(f"subset must be brace enclosed, got {text!r}")
    body = text[1:-1].strip()
    if not body:
        return 0
    try:
        elements = [int(tok) for tok in body.split(",")]
    except ValueError:
        raise InvalidElement(f"subset elements must be integers, got {text!r}")
    if elements != sorted(set(elements)):
        raise InvalidElement(f"subset elements must be strictly ascending, got {text!r}")
    return subset_from_elements(elements)


@dataclass(frozen=True)
class GroundSet:
    """The index universe {0, ..., size-1}."""

    size: int

    def __post_init__(self):
        if not 1 <= self.size <= MAX_GROUND_SIZE:
            raise InvalidElement(f"ground set size must be in 1..{MAX_GROUND_SIZE}, got {self.size}")

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    @property
    def subset_count(self) -> int:
        """Number of nonempty subsets."""
        return (1 << self.size) - 1

    def contains(self, bits: int) -> bool:
        return bits >= 0 and not (bits & ~self.full_mask)

    def validate(self, bits: int, nonempty: bool = True) -> int:
        if not self.contains(bits):
            raise GroundSetMismatch(f"subset {format_subset(bits)} escapes ground set of size {self.size}")
        if nonempty and bits == 0:
            raise InvalidElement("a nonempty subset is required")
        return bits

    def union(self, a: int, b: int) -> SubsetOrAnnihilated:
        self.validate(a, nonempty=False)
        self.validate(b, nonempty=False)
        return modified_union(a, b)

    def subsets(self) -> Iterator[int]:
        """Nonempty subsets in increasing bitmask order."""
        return iter(range(1, 1 << self.size))

    def singletons(self) -> List[int]:
        return [1 << i for i in range(self.size)]

    def random_subset(self, rng: np.random.Generator) -> int:
        """Uniform nonempty subset."""
        while True:
            bits = rng.integers(0, 2, size=self.size)
            mask = sum(1 << i for i, b in enumerate(bits) if b)
            if mask:
                return mask
