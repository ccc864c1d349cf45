"""Words and canonical normal forms in a right-angled Coxeter group.

Every generator is an involution, so a word is just a sequence of vertices and
the inverse of an element is its reversed spelling.  The canonical form of an
element is its lexicographically least reduced spelling under the graph's
vertex order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import DefiningGraph, GraphError, JoinCache, JoinWitness, bits, join_mask_witness, star_mask_witness


class WordError(ValueError):
    pass


def _append(adj: Sequence[int], word: list[int], s: int) -> None:
    """Right-multiply the canonical word ``word`` by ``s`` in place.

    Letters at the end of the word that commute with ``s`` are skipped; if an
    ``s`` is reached it cancels.  Otherwise ``s`` settles right after the
    blocking letter and past any smaller commuting letters, which keeps the
    word lexicographically least.
    """
    j = len(word) - 1
    while j >= 0:
        x = word[j]
        if x == s:
            del word[j]
            return
        if not (adj[s] >> x) & 1:
            break
        j -= 1
    k = j + 1
    while k < len(word) and word[k] < s:
        k += 1
    word.insert(k, s)


def reduce_codes(graph: DefiningGraph, codes: Iterable[int]) -> tuple[int, ...]:
    word: list[int] = []
    adj = graph.adj
    for s in codes:
        _append(adj, word, s)
    return tuple(word)


class NormalForm:
    """A group element held as its canonical reduced word.

    >>> from racg.graph import DefiningGraph
    >>> sq = DefiningGraph("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    >>> str(normalize(sq, "b a"))
    'a b'
    """

    __slots__ = ("graph", "codes", "_hash")

    def __init__(self, graph: DefiningGraph, codes: tuple[int, ...]):
        # codes must already be canonical; use normalize() otherwise
        self.graph = graph
        self.codes = codes
        self._hash = hash(codes)

    @classmethod
    def identity(cls, graph: DefiningGraph) -> "NormalForm":
        return cls(graph, ())

    @property
    def letters(self) -> tuple[str, ...]:
        return tuple(self.graph.vertices[i] for i in self.codes)

    def __len__(self):
        return len(self.codes)

    def __bool__(self):
        return bool(self.codes)

    def __eq__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self.codes == other.codes and self.graph == other.graph

    def __lt__(self, other: "NormalForm"):
        return (len(self.codes), self.codes) < (len(other.codes), other.codes)

    def __hash__(self):
        return self._hash

    def __str__(self):
        return " ".join(self.letters)

    def __repr__(self):
        return f"NormalForm({str(self)!r})"

    def _check(self, other: "NormalForm"):
        if other.graph is not self.graph and other.graph != self.graph:
            raise WordError("elements belong to different graphs")

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        self._check(other)
        word = list(self.codes)
        adj = self.graph.adj
        for s in other.codes:
            _append(adj, word, s)
        return NormalForm(self.graph, tuple(word))

    def times_letter(self, s: int) -> "NormalForm":
        word = list(self.codes)
        _append(self.graph.adj, word, s)
        return NormalForm(self.graph, tuple(word))

    def letter_times(self, s: int) -> "NormalForm":
        return NormalForm(self.graph, reduce_codes(self.graph, (s,) + self.codes))

    def inverse(self) -> "NormalForm":
        return NormalForm(self.graph, reduce_codes(self.graph, reversed(self.codes)))

    def conjugate(self, g: "NormalForm") -> "NormalForm":
        """Return ``g * self * g^-1``."""
        return g * self * g.inverse()

    def power(self, k: int) -> "NormalForm":
        base = self if k >= 0 else self.inverse()
        out = NormalForm.identity(self.graph)
        for _ in range(abs(k)):
            out = out * base
        return out

    @property
    def support_mask(self) -> int:
        m = 0
        for c in self.codes:
            m |= 1 << c
        return m


def parse_word(graph: DefiningGraph, word) -> tuple[int, ...]:
    """Letter codes of a word given as a whitespace-separated string or a sequence of names."""
    if isinstance(word, NormalForm):
        return word.codes
    if isinstance(word, str):
        word = word.split()
    try:
        return tuple(graph.index(v) for v in word)
    except GraphError as exc:
        raise WordError(str(exc)) from None


def normalize(graph: DefiningGraph, word) -> NormalForm:
    return NormalForm(graph, reduce_codes(graph, parse_word(graph, word)))


def multiply(a: NormalForm, b: NormalForm) -> NormalForm:
    return a * b


def invert(a: NormalForm) -> NormalForm:
    return a.inverse()


def is_reduced(graph: DefiningGraph, word) -> bool:
    codes = parse_word(graph, word)
    return len(reduce_codes(graph, codes)) == len(codes)


# -- descents ---------------------------------------------------------------

def left_descents(g: NormalForm) -> int:
    """Mask of letters s with |s g| < |g| (letters that can be brought to the front)."""
    adj = g.graph.adj
    out = 0
    passed = 0
    for x in g.codes:
        if not passed >> x & 1 and passed & ~adj[x] == 0:
            out |= 1 << x
        passed |= 1 << x
    return out


def right_descents(g: NormalForm) -> int:
    adj = g.graph.adj
    out = 0
    passed = 0
    for x in reversed(g.codes):
        if not passed >> x & 1 and passed & ~adj[x] == 0:
            out |= 1 << x
        passed |= 1 << x
    return out


# -- supports and cyclic reduction ----------------------------------------

def support(g: NormalForm) -> frozenset[str]:
    return g.graph.names(g.support_mask)


@dataclass(frozen=True)
class CyclicDecomposition:
    conjugator: NormalForm
    core: NormalForm

    def element(self) -> NormalForm:
        return self.core.conjugate(self.conjugator)


def cyclic_decompose(g: NormalForm) -> CyclicDecomposition:
    """Write ``g = w u w^-1`` with the spelling reduced and ``u`` cyclically reduced.

    A letter is peeled off when one occurrence can be moved to the front and a
    different occurrence to the back.
    """
    graph = g.graph
    peeled: list[int] = []
    cur = g
    while True:
        both = left_descents(cur) & right_descents(cur)
        pick = None
        for x in bits(both):
            if cur.codes.count(x) >= 2:
                pick = x
                break
        if pick is None:
            break
        peeled.append(pick)
        cur = cur.letter_times(pick).times_letter(pick)
    conj = NormalForm(graph, reduce_codes(graph, peeled))
    return CyclicDecomposition(conj, cur)


def csupp(g: NormalForm) -> frozenset[str]:
    return support(cyclic_decompose(g).core)


def csupp_mask(g: NormalForm) -> int:
    return cyclic_decompose(g).core.support_mask


def is_finite_order(g: NormalForm) -> bool:
    return g.graph.is_clique_mask(csupp_mask(g))


def special_membership(g: NormalForm, lam: Iterable[str]) -> bool:
    return g.support_mask & ~g.graph.mask(lam) == 0


# -- double cosets ----------------------------------------------------------

def min_double_coset_mask(g: NormalForm, a_mask: int, b_mask: int) -> NormalForm:
    cur = g
    while True:
        left = left_descents(cur) & a_mask
        if left:
            s = (left & -left).bit_length() - 1
            cur = cur.letter_times(s)
            continue
        right = right_descents(cur) & b_mask
        if right:
            s = (right & -right).bit_length() - 1
            cur = cur.times_letter(s)
            continue
        return cur


def min_double_coset(g: NormalForm, A: Iterable[str], B: Iterable[str]) -> NormalForm:
    """The shortest element of ``G_A g G_B``, reached by greedy descent on both sides."""
    return min_double_coset_mask(g, g.graph.mask(A), g.graph.mask(B))


def product_membership_masks(g: NormalForm, masks: Sequence[int]) -> bool:
    if len(masks) == 2:
        return not min_double_coset_mask(g, masks[0], masks[1]).codes
    if len(masks) == 3:
        # the minimal representative of G_A g G_C divides every element of the
        # double coset length-additively, so g lies in G_A G_B G_C exactly when
        # that representative is spelled in B
        m = min_double_coset_mask(g, masks[0], masks[2])
        return m.support_mask & ~masks[1] == 0
    raise WordError("product membership takes two or three factors")


def product_membership(g: NormalForm, factors: Sequence[Iterable[str]]) -> bool:
    factors = list(factors)
    if len(factors) not in (2, 3):
        raise WordError("product membership takes two or three factors")
    return product_membership_masks(g, [g.graph.mask(f) for f in factors])


# -- join and star windows ------------------------------------------------

@dataclass(frozen=True)
class Window:
    length: int
    start: int

    def slice(self, g: NormalForm) -> NormalForm:
        return NormalForm(g.graph, g.codes[self.start:self.start + self.length])


def _max_window(codes: Sequence[int], ok) -> Window:
    best = Window(0, 0)
    counts: dict[int, int] = {}
    mask = 0
    lo = 0
    for hi, x in enumerate(codes):
        counts[x] = counts.get(x, 0) + 1
        mask |= 1 << x
        while mask and not ok(mask):
            y = codes[lo]
            counts[y] -= 1
            if not counts[y]:
                mask &= ~(1 << y)
            lo += 1
        if hi + 1 - lo > best.length:
            best = Window(hi + 1 - lo, lo)
    return best


def max_join_subword(g: NormalForm, cache: JoinCache | None = None) -> Window:
    """Longest contiguous piece of the canonical word whose support lies in an induced join."""
    cache = cache or JoinCache(g.graph)
    return _max_window(g.codes, cache.in_join)


def max_star_subword(g: NormalForm, cache: JoinCache | None = None) -> Window:
    cache = cache or JoinCache(g.graph)
    return _max_window(g.codes, cache.in_star)


def support_join_witness(g: NormalForm, mask: int) -> JoinWitness | None:
    return join_mask_witness(g.graph, mask) if mask else None


def support_star_witness(g: NormalForm, mask: int) -> str | None:
    if not mask:
        return None
    v = star_mask_witness(g.graph, mask)
    return None if v is None else g.graph.vertices[v]
