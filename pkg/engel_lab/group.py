"""
The unipotent group G generated by the involutions 1 + ad(y), y a star basis letter.

Group elements are realized as dense GF(2) matrices over a star truncation.
Operators act on row vectors, so a word is realized by multiplying letter
matrices in word order, and conjugation of a by g is g^-1 a g. Commutators
are left-normed with [g, h] = g^-1 h^-1 g h.

For two letters a, b the relation [1+ad(a), 1+ad(b)] = 1+ad(a*b) holds, with
a*b the star product (a single letter or zero). Collection and the witness
commutator are computed on letters with that relation alone; matrices are
only used to cross-check them.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from engel_lab.config import settings
from engel_lab.exceptions import CollectionError, InvalidElement, NonDisjointSets, NotUnipotent
from engel_lab.lie_algebra import LParams, lie_algebra
from engel_lab.reporting import CaseTally
from engel_lab.schemas import NormalFormPayload, VerificationReport
from engel_lab.star_algebra import (
    StarAlgebra,
    StarBasisIndex,
    StarElement,
    parse_star_term,
    star_algebra,
    star_basis_product,
    x_index,
)
from engel_lab.utils.gf2 import (
    gf2_matmul,
    identity,
    matmul_partial_left,
    matmul_partial_right,
    nilpotency_index,
    product_filtration,
)
from engel_lab.utils.subsets import GroundSet, format_subset, subset_elements, subset_from_elements

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupWord:
    params: LParams
    letters: Tuple[StarBasisIndex, ...] = ()

    @classmethod
    def parse(cls, text: str, params: LParams) -> "GroupWord":
        text = text.strip()
        if text in ("", "1"):
            return cls(params)
        return cls(params, tuple(parse_star_term(token, params) for token in text.split()))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(letter.label(self.params) for letter in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.params, self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        # Every letter is an involution.
        return GroupWord(self.params, tuple(reversed(self.letters)))


@dataclass(frozen=True, eq=False)
class UnipotentOp:
    matrix: np.ndarray
    path: str = "dense"

    @classmethod
    def identity(cls, dim: int) -> "UnipotentOp":
        return cls(identity(dim))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def _check_dim(self, other: "UnipotentOp") -> None:
        if other.dim != self.dim:
            raise InvalidElement(f"operator dimensions differ: {self.dim} vs {other.dim}")

    def __matmul__(self, other: "UnipotentOp") -> "UnipotentOp":
        self._check_dim(other)
        return UnipotentOp(gf2_matmul(self.matrix, other.matrix), self.path)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnipotentOp):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self.matrix, other.matrix))

    __hash__ = None

    def nilpotent_part(self) -> np.ndarray:
        return self.matrix ^ identity(self.dim)

    def is_identity(self) -> bool:
        return not self.nilpotent_part().any()

    def is_unipotent(self) -> bool:
        t = self.nilpotent_part()
        k = 1
        while k < self.dim:
            t = gf2_matmul(t, t)
            k *= 2
        return not t.any()

    def inverse(self) -> "UnipotentOp":
        """(1 + T)^-1 = 1 + T + T^2 + ... over GF(2)."""
        t = self.nilpotent_part()
        result = identity(self.dim)
        power = t
        for _ in range(self.dim + 1):
            if not power.any():
                return UnipotentOp(result, self.path)
            result ^= power
            power = gf2_matmul(power, t)
        raise NotUnipotent(f"operator of dimension {self.dim} is not unipotent")


def commutator(g: UnipotentOp, h: UnipotentOp) -> UnipotentOp:
    g._check_dim(h)
    return g.inverse() @ h.inverse() @ g @ h


@dataclass(frozen=True)
class NormalForm:
    """(1+ad x)^epsilon, then the V_0, ..., V_{n-1} blocks, then the W block."""

    params: LParams
    epsilon: int = 0
    v_blocks: Tuple[Tuple[int, ...], ...] = ()
    w_block: Tuple[int, ...] = ()

    def to_word(self) -> GroupWord:
        p = self.params
        letters = [x_index(p)] if self.epsilon else []
        for i, block in enumerate(self.v_blocks):
            letters += [StarBasisIndex(i, a) for a in block]
        letters += [StarBasisIndex(p.w_index, a) for a in self.w_block]
        return GroupWord(p, tuple(letters))

    def is_identity(self) -> bool:
        return not (self.epsilon or self.w_block or any(self.v_blocks))

    def to_payload(self) -> NormalFormPayload:
        return NormalFormPayload(
            epsilon=self.epsilon,
            v_blocks=[[subset_elements(a) for a in block] for block in self.v_blocks],
            w_block=[subset_elements(a) for a in self.w_block],
        )

    @classmethod
    def from_payload(cls, payload: NormalFormPayload, params: LParams) -> "NormalForm":
        if len(payload.v_blocks) != params.n:
            raise InvalidElement(f"expected {params.n} V blocks, got {len(payload.v_blocks)}")

        def block(subsets: List[List[int]]) -> Tuple[int, ...]:
            codes = [subset_from_elements(s) for s in subsets]
            if any(not c for c in codes) or codes != sorted(set(codes)):
                raise InvalidElement("normal form blocks must hold distinct nonempty subsets in order")
            return tuple(codes)

        return cls(params, payload.epsilon, tuple(block(b) for b in payload.v_blocks), block(payload.w_block))


def _collection_key(letter: StarBasisIndex, params: LParams) -> Tuple[int, int]:
    rank = 0 if letter.ell == params.x_index else letter.ell + 1
    return rank, letter.subset


def collect_normal_form(word: GroupWord, step_limit: Optional[int] = None) -> NormalForm:
    """Collect a word into x, V_0, ..., V_{n-1}, W order.

    Out-of-order neighbours are swapped with a b = b a [a, b], the commutator
    being the letter a*b (or nothing when that product vanishes); equal
    neighbours cancel.
    """
    p = word.params
    lie = lie_algebra(p.m)
    step_limit = settings.COLLECTION_STEP_LIMIT if step_limit is None else step_limit
    letters = list(word.letters)
    i = steps = 0
    while i < len(letters) - 1:
        steps += 1
        if steps > step_limit:
            raise CollectionError(f"collection of a word of length {len(word)} exceeded {step_limit} steps")
        a, b = letters[i], letters[i + 1]
        if a == b:
            del letters[i:i + 2]
            i = max(i - 1, 0)
            continue
        if _collection_key(a, p) > _collection_key(b, p):
            product = star_basis_product(lie, a, b)
            letters[i:i + 2] = [b, a] if product is None else [b, a, product]
            i = max(i - 1, 0)
            continue
        i += 1
    v_blocks = tuple(tuple(l.subset for l in letters if l.ell == k) for k in range(p.n))
    return NormalForm(
        p,
        epsilon=int(any(l.ell == p.x_index for l in letters)),
        v_blocks=v_blocks,
        w_block=tuple(l.subset for l in letters if l.ell == p.w_index),
    )


def conjugate_expansion(sets: Sequence[int], params: LParams) -> StarElement:
    """y with (1+ad x) conjugated by 1+ad(w_{A_1}), ..., 1+ad(w_{A_k}) equal to 1+ad(y).

    Each d-element family of the sets contributes v(d-1) (or w when d = n+1)
    indexed by its union; families larger than n+1 contribute nothing.
    """
    seen = 0
    for a in sets:
        if not a:
            raise InvalidElement("conjugating sets must be nonempty")
        if seen & a:
            raise NonDisjointSets(f"set {format_subset(a)} meets an earlier conjugating set")
        seen |= a
    terms = [x_index(params)]
    for d in range(1, min(len(sets), params.n + 1) + 1):
        ell = d - 1 if d <= params.n else params.w_index
        for family in itertools.combinations(sets, d):
            union = 0
            for a in family:
                union |= a
            terms.append(StarBasisIndex(ell, union))
    return StarElement.of(params, terms)


def witness_entries(params: LParams) -> List[StarBasisIndex]:
    """w_{0}, then m+1 blocks of [x, followed by n letters w_{k}] for k = 1, ..., (m+1)n."""
    entries = [StarBasisIndex(params.w_index, 1)]
    k = 1
    for _ in range(params.m + 1):
        entries.append(x_index(params))
        for _ in range(params.n):
            entries.append(StarBasisIndex(params.w_index, 1 << k))
            k += 1
    return entries


@dataclass
class WitnessResult:
    params: LParams
    entries: List[StarBasisIndex]
    prefixes: List[Optional[StarBasisIndex]] = field(default_factory=list)

    @property
    def result(self) -> Optional[StarBasisIndex]:
        return self.prefixes[-1] if self.prefixes else None

    @property
    def expected(self) -> StarBasisIndex:
        return StarBasisIndex(self.params.w_index, (1 << ((self.params.m + 1) * self.params.n + 1)) - 1)

    def element(self) -> StarElement:
        return StarElement.of(self.params, [self.result] if self.result else [])


def witness_commutator(params: LParams) -> WitnessResult:
    """Left-normed commutator of the witness entries, computed on letters.

    prefixes[k] is the letter u with 1+ad(u) equal to the commutator of the
    first k+2 entries, or None once it is trivial.
    """
    lie = lie_algebra(params.m)
    entries = witness_entries(params)
    out = WitnessResult(params, entries)
    u: Optional[StarBasisIndex] = entries[0]
    for letter in entries[1:]:
        u = star_basis_product(lie, u, letter) if u is not None else None
        out.prefixes.append(u)
    return out


class UnipotentGroup:
    """Realization and checks of G over one star truncation."""

    def __init__(self, algebra: StarAlgebra):
        self.algebra = algebra
        self.params = algebra.params
        self.lie = algebra.lie

    @property
    def ground(self) -> GroundSet:
        return self.algebra.ground

    def _config(self, **extra) -> dict:
        return {"m": self.params.m, "ground_size": self.ground.size, **extra}

    def letters(self, singletons_only: bool = False) -> List[StarBasisIndex]:
        if not singletons_only:
            return self.algebra.basis()
        subsets = self.ground.singletons()
        p = self.params
        return [x_index(p)] + [StarBasisIndex(ell, a) for ell in range(p.n + 1) for a in subsets]

    def times_letter(self, matrix: np.ndarray, letter: StarBasisIndex) -> np.ndarray:
        return matmul_partial_right(matrix, *self.algebra.ad_pairs(letter))

    def letter_times(self, letter: StarBasisIndex, matrix: np.ndarray) -> np.ndarray:
        return matmul_partial_left(matrix, *self.algebra.ad_pairs(letter))

    def generator(self, letter: StarBasisIndex) -> UnipotentOp:
        self.algebra.check_dense_cap()
        return UnipotentOp(self.times_letter(identity(self.algebra.dim), letter))

    def realize(self, word: GroupWord) -> UnipotentOp:
        self.algebra.check_dense_cap()
        matrix = identity(self.algebra.dim)
        for letter in word.letters:
            matrix = self.times_letter(matrix, letter)
        return UnipotentOp(matrix)

    def one_plus_ad(self, y: StarElement) -> UnipotentOp:
        return UnipotentOp(identity(self.algebra.dim) ^ self.algebra.ad_dense(y))

    def random_word(self, length: int, seed: int) -> GroupWord:
        rng = np.random.default_rng(seed)
        return self._random_word(rng, length)

    def _random_word(self, rng: np.random.Generator, length: int) -> GroupWord:
        p = self.params
        letters = []
        for _ in range(length):
            ell = int(rng.integers(0, p.n + 2))
            if ell == p.x_index:
                letters.append(x_index(p))
            else:
                letters.append(StarBasisIndex(ell, self.ground.random_subset(rng)))
        return GroupWord(p, tuple(letters))

    def engel3_check(self, word: GroupWord) -> bool:
        """[a^g, a, a] = 1 for a = 1+ad(x) and g the realized word."""
        x = x_index(self.params)
        g = self.realize(word).matrix
        g_inv = self.realize(word.inverse()).matrix
        conj = gf2_matmul(self.times_letter(g_inv, x), g)
        conj_a = self.times_letter(conj, x)
        c1 = gf2_matmul(conj_a, conj_a)
        a_conj = self.letter_times(x, conj)
        c1_inv = gf2_matmul(a_conj, a_conj)
        c2 = self.times_letter(gf2_matmul(self.times_letter(c1_inv, x), c1), x)
        return not (c2 ^ identity(self.algebra.dim)).any()

    def check_involutions(self) -> VerificationReport:
        tally = CaseTally("group", config=self._config(check="involutions"))
        eye = identity(self.algebra.dim)
        for letter in self.letters():
            square = self.times_letter(self.times_letter(eye, letter), letter)
            tally.check(
                lambda: f"involution[{letter.label(self.params)}]",
                not (square ^ eye).any(),
                expected="identity",
                actual="non-identity square",
            )
        return tally.report()

    def _relation_tag(self, a: StarBasisIndex, b: StarBasisIndex) -> str:
        p = self.params
        kinds = {a.ell, b.ell}
        if kinds == {p.w_index, p.x_index}:
            return "a"
        if p.x_index in kinds:
            return "b" if kinds != {p.x_index} else "xx"
        if p.w_index not in kinds:
            return "c"
        if kinds == {p.w_index}:
            return "ww"
        return "e" if p.n - 1 in kinds else "d"

    def _check_letter_pair(self, tally: CaseTally, a: StarBasisIndex, b: StarBasisIndex, case: str) -> None:
        p = self.params
        eye = identity(self.algebra.dim)
        got = eye
        for letter in (a, b, a, b):
            got = self.times_letter(got, letter)
        product = star_basis_product(self.lie, a, b)
        want = eye if product is None else self.times_letter(eye, product)
        tally.check(
            lambda: f"relation-{self._relation_tag(a, b)}[{case}]",
            bool(np.array_equal(got, want)),
            inputs=lambda: {"a": a.label(p), "b": b.label(p)},
            expected=lambda: "1" if product is None else f"1+ad({product.label(p)})",
            actual="a different operator",
        )

    def check_commutator_relations(self, samples: int, seed: int) -> VerificationReport:
        """[1+ad(a), 1+ad(b)] = 1+ad(a*b) over all singleton letter pairs and random subset pairs."""
        p = self.params
        tally = CaseTally("group", seed=seed, config=self._config(check="commutators", samples=samples))
        singles = self.letters(singletons_only=True)
        for a in singles:
            for b in singles:
                self._check_letter_pair(tally, a, b, f"{a.label(p)},{b.label(p)}")
        rng = np.random.default_rng(seed)
        for case in range(samples):
            a = StarBasisIndex(int(rng.integers(0, p.n + 1)), self.ground.random_subset(rng))
            b_subset = self.ground.random_subset(rng)
            if case % 2:
                b_subset |= 1 << subset_elements(a.subset)[0]  # force an overlap
            b_ell = int(rng.integers(0, p.n + 2))
            b = x_index(p) if b_ell == p.x_index else StarBasisIndex(b_ell, b_subset)
            self._check_letter_pair(tally, a, b, f"random:{case}")
        return tally.report()

    def check_normal_form(self, samples: int, seed: int, max_length: int = 12, start: int = 0) -> VerificationReport:
        p = self.params
        tally = CaseTally("group", seed=seed, config=self._config(check="normal-form", samples=samples))
        rng = np.random.default_rng(seed)
        for case in range(start, start + samples):
            word = self._random_word(rng, int(rng.integers(0, max_length + 1)))
            form = collect_normal_form(word)
            collected = form.to_word()
            tally.check(
                f"normal-form[{case}]",
                self.realize(word) == self.realize(collected),
                inputs=lambda: {"word": str(word)},
                expected=lambda: str(collected),
                actual="a different operator",
            )
            again = collect_normal_form(collected)
            tally.check(
                f"normal-form-idempotent[{case}]",
                again == form,
                inputs=lambda: {"word": str(collected)},
                expected=lambda: str(collected),
                actual=lambda: str(again.to_word()),
            )
            payload = form.to_payload()
            tally.check(
                f"normal-form-payload[{case}]",
                NormalForm.from_payload(NormalFormPayload.model_validate_json(payload.model_dump_json()), p) == form,
                expected=lambda: payload.model_dump_json(),
                actual="payload did not round-trip",
            )
        return tally.report()

    def conjugate_by_w(self, sets: Sequence[int]) -> UnipotentOp:
        p = self.params
        prefix = GroupWord(p, tuple(StarBasisIndex(p.w_index, a) for a in sets))
        return self.realize(prefix + GroupWord(p, (x_index(p),)) + prefix.inverse())

    def check_conjugate_expansion(self, max_sets: int = 4) -> VerificationReport:
        tally = CaseTally("group", config=self._config(check="conjugate-expansion"))
        singles = self.ground.singletons()
        families = [singles[:k] for k in range(min(max_sets, len(singles)) + 1)]
        if self.ground.size >= 3:
            families.append([singles[0] | singles[1], singles[2]])
        for sets in families:
            y = conjugate_expansion(sets, self.params)
            label = ",".join(format_subset(a) for a in sets)
            tally.check(
                f"conjugate-expansion[{label}]",
                self.one_plus_ad(y) == self.conjugate_by_w(sets),
                inputs=lambda: {"sets": label},
                expected=lambda: f"1+ad({y})",
                actual="a different operator",
            )
        return tally.report()

    def engel_sweep(self, samples: int, seed: int, max_length: int = 12, start: int = 0) -> VerificationReport:
        tally = CaseTally("engel", seed=seed, config=self._config(check="engel-random", samples=samples))
        rng = np.random.default_rng(seed)
        for case in range(start, start + samples):
            word = self._random_word(rng, int(rng.integers(0, max_length + 1)))
            tally.check(
                f"engel[{case}]",
                self.engel3_check(word),
                inputs=lambda: {"word": str(word)},
                expected="1",
                actual="nontrivial [a^g, a, a]",
            )
        return tally.report()

    def engel_exhaustive(self, max_length: int = 3) -> VerificationReport:
        """Every word of length <= max_length over all letters of this truncation."""
        tally = CaseTally("engel", config=self._config(check="engel-exhaustive", max_length=max_length))
        letters = self.letters()
        for length in range(max_length + 1):
            for combo in itertools.product(letters, repeat=length):
                word = GroupWord(self.params, tuple(combo))
                tally.check(
                    lambda: f"engel-exhaustive[{word}]",
                    self.engel3_check(word),
                    expected="1",
                    actual="nontrivial [a^g, a, a]",
                )
        return tally.report()

    def default_conjugators(self, r: int) -> List[List[int]]:
        """Singleton sets dealt round-robin to r conjugators."""
        singles = self.ground.singletons()
        return [singles[k::r] for k in range(r)]

    def conjugates_class_bound(self, r: int, conjugator_sets: Optional[List[List[int]]] = None,
                               samples: int = 100, seed: int = 0) -> Tuple[int, int, VerificationReport]:
        """Nilpotency index of the algebra spanned by T_k = (1+ad x)^{g_k} - 1, and the bound 4r+2.

        Also checks that random left-normed commutators of weight 4r+2 in the
        conjugates are trivial.
        """
        if r < 1:
            raise InvalidElement("r must be at least 1")
        conjugator_sets = self.default_conjugators(r) if conjugator_sets is None else conjugator_sets
        if len(conjugator_sets) != r:
            raise InvalidElement(f"expected {r} conjugator set lists, got {len(conjugator_sets)}")
        for sets in conjugator_sets:
            for a in sets:
                self.ground.validate(a)
        bound = 4 * r + 2
        conjugates = [self.conjugate_by_w(sets).matrix for sets in conjugator_sets]
        eye = identity(self.algebra.dim)
        nilpotent = [c ^ eye for c in conjugates]
        dim = self.algebra.dim
        dims = product_filtration(
            nilpotent,
            gf2_matmul,
            to_vector=lambda mat: mat.ravel(),
            from_vector=lambda vec: vec.reshape(dim, dim),
            max_length=bound + 1,
        )
        index = nilpotency_index(dims) or len(dims) + 1
        tally = CaseTally("class-bound", seed=seed, config=self._config(check="class-bound", r=r, samples=samples))
        label = ";".join(",".join(format_subset(a) for a in sets) for sets in conjugator_sets)
        tally.check(f"q-index[r={r}]", index <= bound, inputs=lambda: {"conjugators": label},
                    expected=f"index <= {bound}", actual=str(index))
        rng = np.random.default_rng(seed)
        for case in range(samples):
            picks = rng.integers(0, r, size=bound)
            c, c_inv = conjugates[picks[0]], conjugates[picks[0]]
            for k in picks[1:]:
                h = conjugates[k]
                c, c_inv = (
                    gf2_matmul(gf2_matmul(gf2_matmul(c_inv, h), c), h),
                    gf2_matmul(gf2_matmul(gf2_matmul(h, c_inv), h), c),
                )
            tally.check(
                f"weight-{bound}-commutator[{case}]",
                not (c ^ eye).any(),
                inputs=lambda: {"entries": ",".join(str(int(k)) for k in picks)},
                expected="1",
                actual="nontrivial commutator",
            )
        tally.measure("q_index", index)
        tally.measure("q_filtration_dims", dims)
        tally.measure("bound", bound)
        return index, bound, tally.report()

    def witness_dense(self) -> Tuple[UnipotentOp, List[bool]]:
        """The witness commutator by matrix arithmetic, with per-prefix non-triviality."""
        entries = witness_entries(self.params)
        c = self.generator(entries[0])
        nontrivial = []
        for letter in entries[1:]:
            c = commutator(c, self.generator(letter))
            nontrivial.append(not c.is_identity())
        return c, nontrivial


def check_witness(m: int, cross_validate: Optional[bool] = None) -> VerificationReport:
    """Witness equality on letters, plus the matrix computation when m = 2."""
    params = LParams(m)
    cross_validate = m == 2 if cross_validate is None else cross_validate
    witness = witness_commutator(params)
    tally = CaseTally("witness", config={"m": m, "cross_validate": cross_validate})
    expected = witness.expected
    tally.check(
        f"witness[m={m}]",
        witness.result == expected,
        expected=expected.label(params),
        actual=lambda: str(witness.element()),
    )
    for k, prefix in enumerate(witness.prefixes[:-1]):
        tally.check(f"witness-prefix[{k + 2}]", prefix is not None, expected="nontrivial", actual="1")
    tally.measure("witness", str(witness.element()))
    tally.measure("entries", len(witness.entries))
    if cross_validate:
        ground_size = (m + 1) * params.n + 1
        group = UnipotentGroup(StarAlgebra(params, GroundSet(ground_size)))
        dense, nontrivial = group.witness_dense()
        logger.info("dense witness cross-check at dimension %d", group.algebra.dim)
        tally.check(
            f"witness-dense[m={m}]",
            dense == group.one_plus_ad(StarElement.basis(params, expected)),
            expected=f"1+ad({expected.label(params)})",
            actual="a different operator",
        )
        for k, flag in enumerate(nontrivial[:-1]):
            tally.check(f"witness-dense-prefix[{k + 2}]", flag, expected="nontrivial", actual="1")
        tally.measure("dense_dim", group.algebra.dim)
    return tally.report()


@lru_cache(maxsize=16)
def unipotent_group(m: int, ground_size: int, max_dim: Optional[int] = None) -> UnipotentGroup:
    return UnipotentGroup(star_algebra(m, ground_size, max_dim))


def check_group_suite(m: int, ground_size: int, samples: int, seed: int,
                      max_dim: Optional[int] = None) -> VerificationReport:
    group = unipotent_group(m, ground_size, max_dim)
    tally = CaseTally("group", seed=seed, config={"m": m, "ground_size": ground_size, "samples": samples})
    for report in (
        group.check_involutions(),
        group.check_commutator_relations(samples, seed),
        group.check_normal_form(samples, seed),
        group.check_conjugate_expansion(),
    ):
        tally.absorb(report)
    return tally.report()


def check_class_bound_suite(m: int, ground_size: int, max_r: int, samples: int, seed: int,
                            max_dim: Optional[int] = None) -> VerificationReport:
    group = unipotent_group(m, ground_size, max_dim)
    tally = CaseTally("class-bound", seed=seed, config={"m": m, "ground_size": ground_size, "r": max_r})
    indices = {}
    for r in range(1, max_r + 1):
        index, bound, report = group.conjugates_class_bound(r, samples=samples, seed=seed + r)
        indices[str(r)] = {"index": index, "bound": bound}
        tally.absorb(report, prefix=f"r{r}")
    index, _, report = group.conjugates_class_bound(1, [[]], samples=0, seed=seed)
    tally.absorb(report, prefix="cyclic")
    tally.check("cyclic-conjugate", index == 2, expected="index 2", actual=str(index))
    tally.measure("q_index", indices)
    return tally.report()

