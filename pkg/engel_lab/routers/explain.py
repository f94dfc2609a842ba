from typing import Dict

from engel_lab.exceptions import InvalidElement
from engel_lab.lie_algebra import lie_algebra

_LIE = """\
L(m), m >= 2, is the GF(2) Lie algebra with basis v0, ..., v(n-1), w, x where
n = 2^m - 2 (dimension 2^m). With i (+) j = i + j reduced mod n-1 into
{0, ..., n-2}, the product is:

  v(i) v(j) = C(j+1, n-i) v(i (+) j)        (binomial taken mod 2)
  v(i) w = w v(i) = v(i+1)                    for i <= n-2
  v(n-1) w = w v(n-1) = w
  v(i) x = x v(i) = 0
  w x = x w = v0
  w w = x x = 0

Suite "lie" checks, for the chosen m: the alternating law on basis pairs, the
Jacobi identity on all basis triples, trivial center, that every nonzero
y in W = span(v0, ..., v(n-1), w) generates W as an ideal, symmetry of the
structure constants, v(i) v(j) = 0 for i + j <= n-2, agreement of ad matrices
with the product, the dimension of the enveloping algebra E (reported), and
the binomial parity rule against the Pascal recurrence.

Nonzero products of basis elements for m = 2:
"""

_STAR = """\
L*_N is spanned by x and by v(i)_A, w_A for nonempty A inside {0, ..., N-1}
(dimension (2^N - 1)(n+1) + 1). Writing A (+) B for the union of disjoint
sets (and zero when they meet):

  z_A t_B = (z t)_{A (+) B}     z_A x = (z x)_A     x x = 0

Suite "star" checks ad(x)^2 = 0, ad(x) ad(y) ad(x) = 0 for every basis y and
random y, the Lie laws on the truncation (exhaustive on small bases, sampled
otherwise), closure of the truncation, (z x) x = 0, agreement with the L(m)
products on disjoint subscripts, and nilpotency classes of finitely
generated subalgebras against 2 * (number of non-x generators).
"""

_GROUP = """\
G is generated by the involutions 1 + ad(y), y = x, v(i)_A or w_A, acting on
the right of L*_N. For basis letters a, b:

  [1+ad(a), 1+ad(b)] = 1 + ad(a b)      with [g, h] = g^-1 h^-1 g h

so [1+ad(w_A), 1+ad(x)] = 1+ad(v0_A), [1+ad(v(i)_A), 1+ad(x)] = 1, and
[1+ad(v(i)_A), 1+ad(w_B)] = 1+ad(v(i+1)_{A (+) B}).
Every element has a normal form (1+ad x)^e r_0 ... r_{n-1} s with r_i a
product of distinct 1+ad(v(i)_A) and s a product of distinct 1+ad(w_A).

Suite "group" checks the involutions, the commutator relations (including
overlapping subscripts), normal-form collection against matrix realization,
and the closed form of (1+ad x) conjugated by 1+ad(w_{A_1}), ..., 1+ad(w_{A_k}):
x plus, for each d-element family of the sets, v(d-1) (w when d = n+1)
indexed by its union.
"""

_ENGEL = """\
a = 1 + ad(x) is a left 3-Engel element of G: [a^g, a, a] = 1 for every g.
Suite "engel" evaluates the left-normed commutator for every word of length
at most 3 (2 when m > 4) over a 2-element ground set and for seeded random words of length
at most 12 over the chosen ground set.
"""

_WITNESS = """\
The normal closure of a = 1 + ad(x) is not nilpotent. With A_i = {i}, the
left-normed commutator of

  1+ad(w_{A_0}), then m+1 blocks of [ 1+ad(x), 1+ad(w_{A_k}) for n consecutive k ]

(k running through 1, ..., (m+1)n) equals 1 + ad(w_B) with
B = {0, 1, ..., (m+1)n}, and no shorter prefix of that pattern is trivial.
Suite "witness" computes it on letters and, for m = 2, by matrix arithmetic
over a ground set of size 7.
"""

_CLASS_BOUND = """\
For r conjugates (1+ad x)^{g_1}, ..., (1+ad x)^{g_r} the subgroup H they
generate is nilpotent of class at most 4r+1. The route is algebraic: with
T_k = (1+ad x)^{g_k} - 1 the associative algebra Q generated by T_1..T_r
satisfies Q^(4r+1) = 0 symbolically, so group commutators of weight 4r+2
vanish. Suite "class-bound" measures the least q with Q^q = 0 over the star
truncation (asserting q <= 4r+2) and checks random commutators of weight
4r+2 in the conjugates.
"""

_SANDWICH = """\
Superfixed operators e^(i_1..i_r) multiply by

  e^(i) f^(j) = prod_l C(i_l + j_l, i_l) (ef)^(i+j)

with f(i,k) = e_i in degree i at coordinate k, e_1..e_n = ad(v0..v(n-1)),
e_{n+1} = ad(w). Suite "sandwich" checks: C(i+j, i) even for i+j >= n+2;
e_i e_j = 0 for i+j <= n-1 (vacuous when no pair qualifies); nonzero
f(i,k) f(j,s) only for i+j >= n, and for i+j <= n+1 when k = s; the
rewriting ad(x) f(n+1,k) = f(n+1,k) ad(x) + e_1^((n+1) at k); the vanishing
of ad(x) f(n+1,k1) ad(x) f(n+1,k2); the F bound 4r and the Q bound 4r+1 on
nilpotency indices; and agreement with concrete operators on a star
truncation.
"""

TOPICS: Dict[str, str] = {
    "lie": _LIE,
    "star": _STAR,
    "group": _GROUP,
    "engel": _ENGEL,
    "witness": _WITNESS,
    "class-bound": _CLASS_BOUND,
    "sandwich": _SANDWICH,
}


def explain(topic: str) -> str:
    text = TOPICS.get(topic)
    if text is None:
        raise InvalidElement(f"unknown topic {topic!r}; choose one of {', '.join(TOPICS)}")
    if topic == "lie":
        table = lie_algebra(2).structure_table()
        text += "".join(f"  {key} = {value}\n" for key, value in table.items())
    return text
