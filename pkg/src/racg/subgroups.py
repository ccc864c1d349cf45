"""Subgroups of a right-angled Coxeter group: graph-side classifiers for parabolic
subgroups and bounded searches over finitely generated ones.

Searches never claim more than they saw.  A scan either returns a witness that
re-verifies through the word engine ("certified-negative") or reports that the
explored ball held no violation ("no-violation-up-to-bound").
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .graph import (DefiningGraph, GraphError, JoinCache, bits, induced_four_cycles,
                    is_connected, is_join, join_mask_witness, star_mask_witness)
from .words import (NormalForm, Window, cyclic_decompose, max_join_subword, normalize, reduce_codes)

CERTIFIED_NEGATIVE = "certified-negative"
NO_VIOLATION = "no-violation-up-to-bound"


@dataclass(frozen=True)
class ParabolicSpec:
    """The subgroup ``g G_lam g^-1``."""

    lam: frozenset[str]
    conjugator: NormalForm

    @classmethod
    def special(cls, graph: DefiningGraph, lam: Iterable[str]) -> "ParabolicSpec":
        return cls.of(graph, lam, "")

    @classmethod
    def of(cls, graph: DefiningGraph, lam: Iterable[str], conjugator="") -> "ParabolicSpec":
        lam = frozenset(lam)
        if not lam:
            raise GraphError("empty vertex set")
        graph.mask(lam)
        return cls(lam, normalize(graph, conjugator))

    @property
    def graph(self) -> DefiningGraph:
        return self.conjugator.graph

    @property
    def mask(self) -> int:
        return self.graph.mask(self.lam)


class FinGenSubgroup:
    """A subgroup given by finitely many generating elements.

    Generators are kept canonical, in the given order, with repeats dropped.
    """

    def __init__(self, graph: DefiningGraph, generators: Iterable):
        gens: list[NormalForm] = []
        for w in generators:
            g = w if isinstance(w, NormalForm) else normalize(graph, w)
            if not g.codes:
                raise GraphError("a generator represents the identity")
            if g not in gens:
                gens.append(g)
        if not gens:
            raise GraphError("a subgroup needs at least one generator")
        self.graph = graph
        self.generators: tuple[NormalForm, ...] = tuple(gens)

    @classmethod
    def from_parabolic(cls, spec: ParabolicSpec) -> "FinGenSubgroup":
        g = spec.conjugator
        gens = [normalize(spec.graph, [v]).conjugate(g) for v in spec.graph.sorted_names(spec.mask)]
        return cls(spec.graph, gens)

    @property
    def is_special(self) -> bool:
        return all(len(g) == 1 for g in self.generators)

    @property
    def special_mask(self) -> int:
        m = 0
        for g in self.generators:
            m |= g.support_mask
        return m

    def to_document(self) -> dict:
        return {"graph": self.graph.to_document(), "generators": [str(g) for g in self.generators]}

    def __repr__(self):
        return f"FinGenSubgroup({[str(g) for g in self.generators]})"


def load_subgroup(document, graph: DefiningGraph | None = None) -> FinGenSubgroup:
    import json

    from .graph import load_graph

    if isinstance(document, (str, bytes)):
        document = json.loads(document)
    if "generators" not in document:
        raise GraphError("subgroup document has no 'generators' field")
    if graph is None:
        graph = load_graph(document["graph"])
    return FinGenSubgroup(graph, document["generators"])


@dataclass
class ScanReport:
    verdict: str
    bound: int
    witness: dict | None = None
    note: str = ""

    @property
    def found(self) -> bool:
        return self.verdict == CERTIFIED_NEGATIVE

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "bound": self.bound, "witness": self.witness, "note": self.note}


# -- graph-side classifiers -------------------------------------------------

@dataclass(frozen=True)
class ParabolicFlags:
    finite: bool
    join_free: bool | None  # None: the ambient graph is disconnected or a join
    star_free: bool | None
    almost_malnormal: bool
    strongly_quasiconvex_and_finite_height: bool

    def to_dict(self) -> dict:
        def show(x):
            return "not-applicable" if x is None else x
        return {"finite": self.finite, "join_free": show(self.join_free), "star_free": show(self.star_free),
                "almost_malnormal": self.almost_malnormal,
                "strongly_quasiconvex_and_finite_height": self.strongly_quasiconvex_and_finite_height}


def _nonadjacent_pairs(g: DefiningGraph, mask: int):
    for s, t in combinations(list(bits(mask)), 2):
        if not g.adj[s] >> t & 1:
            yield s, t


def cone_witness(g: DefiningGraph, mask: int) -> tuple[int, int, int] | None:
    """An outside vertex ``u`` adjacent to a non-adjacent pair ``(v1, v2)`` of ``mask``."""
    for v1, v2 in _nonadjacent_pairs(g, mask):
        common = g.adj[v1] & g.adj[v2] & ~mask
        if common:
            return (common & -common).bit_length() - 1, v1, v2
    return None


def distance_two_pair(g: DefiningGraph, mask: int) -> tuple[int, int] | None:
    for v1, v2 in _nonadjacent_pairs(g, mask):
        if g.adj[v1] & g.adj[v2]:
            return v1, v2
    return None


def square_witness(g: DefiningGraph, mask: int):
    """An induced 4-cycle meeting ``mask`` in a diagonal and leaving it somewhere."""
    for cycle in induced_four_cycles(g):
        verts = g.mask(frozenset().union(*cycle))
        if verts & ~mask == 0:
            continue
        for diag in cycle:
            if g.mask(diag) & ~mask == 0:
                return cycle
    return None


def classify_parabolic(spec: ParabolicSpec) -> ParabolicFlags:
    g = spec.graph
    mask = spec.mask
    finite = g.is_clique_mask(mask)
    if not is_connected(g) or is_join(g):
        jf = None
    else:
        jf = not finite and distance_two_pair(g, mask) is None
    return ParabolicFlags(
        finite=finite,
        join_free=jf,
        star_free=jf,
        almost_malnormal=cone_witness(g, mask) is None,
        strongly_quasiconvex_and_finite_height=square_witness(g, mask) is None,
    )


@dataclass(frozen=True)
class CollectionFlags:
    almost_malnormal_collection: bool
    hyperbolically_embedded: bool
    failing_member: int | None = None
    failing_pair: tuple[int, int] | None = None

    def to_dict(self) -> dict:
        return {"almost_malnormal_collection": self.almost_malnormal_collection,
                "hyperbolically_embedded": self.hyperbolically_embedded,
                "failing_member": self.failing_member,
                "failing_pair": list(self.failing_pair) if self.failing_pair else None}


def classify_collection(specs: Sequence[ParabolicSpec]) -> CollectionFlags:
    if not specs:
        raise GraphError("empty collection")
    g = specs[0].graph
    masks = [s.mask for s in specs]
    for i, m in enumerate(masks):
        if cone_witness(g, m) is not None:
            return CollectionFlags(False, False, failing_member=i)
    for i, j in combinations(range(len(masks)), 2):
        if not g.is_clique_mask(masks[i] & masks[j]):
            return CollectionFlags(False, False, failing_pair=(i, j))
    return CollectionFlags(True, True)


# -- enumeration ------------------------------------------------------------

@dataclass
class SubgroupBall:
    """Elements of a subgroup reachable by at most ``depth`` generator letters.

    ``spelling[h]`` is one shortest spelling as a tuple of signed generator
    indices: ``+i`` for generator ``i`` and ``-i`` for its inverse (1-based).
    """

    subgroup: FinGenSubgroup
    depth: int
    elements: list[NormalForm]
    t_length: dict[NormalForm, int]
    spelling: dict[NormalForm, tuple[int, ...]]
    truncated: bool = False

    def __contains__(self, x: NormalForm) -> bool:
        return x in self.t_length

    def __len__(self):
        return len(self.elements)

    def t_word(self, h: NormalForm) -> str:
        return format_t_word(self.spelling[h])


def format_t_word(spelling: Sequence[int]) -> str:
    return " ".join(f"t{i}" if i > 0 else f"t{-i}^-1" for i in spelling) or "e"


def _t_letters(H: FinGenSubgroup) -> list[tuple[int, NormalForm]]:
    letters = []
    for i, t in enumerate(H.generators, start=1):
        letters.append((i, t))
        inv = t.inverse()
        if inv != t:
            letters.append((-i, inv))
    return letters


def enumerate_subgroup(H: FinGenSubgroup, L: int, max_size: int | None = None) -> SubgroupBall:
    if L < 0:
        raise ValueError("depth must be nonnegative")
    e = NormalForm.identity(H.graph)
    letters = _t_letters(H)
    t_length = {e: 0}
    spelling = {e: ()}
    layer = [e]
    truncated = False
    for depth in range(1, L + 1):
        nxt = []
        for h in layer:
            for sign, t in letters:
                x = h * t
                if x not in t_length:
                    if max_size is not None and len(t_length) >= max_size:
                        truncated = True
                        break
                    t_length[x] = depth
                    spelling[x] = spelling[h] + (sign,)
                    nxt.append(x)
            if truncated:
                break
        layer = sorted(nxt, key=lambda x: x.codes)
        if truncated or not layer:
            break
    elements = sorted(t_length, key=lambda x: (t_length[x], x.codes))
    return SubgroupBall(H, L, elements, t_length, spelling, truncated)


# -- join-busting -----------------------------------------------------------

@dataclass
class JoinBustingReport:
    estimate: int
    element: NormalForm | None
    window: Window
    depth: int
    per_depth: list[int]
    caveat: str = ("evaluated on the canonical reduced spelling of each element only; "
                   "other reduced spellings may contain longer join windows")

    def to_dict(self) -> dict:
        out = {"estimate": self.estimate, "depth": self.depth, "per_depth": self.per_depth,
               "caveat": self.caveat, "element": None, "window": None}
        if self.element is not None:
            out["element"] = str(self.element)
            out["window"] = str(self.window.slice(self.element))
        return out


def join_busting_estimate(H: FinGenSubgroup, L: int) -> JoinBustingReport:
    if L < 1:
        raise ValueError("depth must be at least 1")
    ball = enumerate_subgroup(H, L)
    cache = JoinCache(H.graph)
    best, best_h, best_w = 0, None, Window(0, 0)
    per_depth = [0] * (L + 1)
    for h in ball.elements:
        w = max_join_subword(h, cache)
        d = ball.t_length[h]
        per_depth[d] = max(per_depth[d], w.length)
        if w.length > best:
            best, best_h, best_w = w.length, h, w
    running = []
    cur = 0
    for d in range(1, L + 1):
        cur = max(cur, per_depth[d])
        running.append(cur)
    return JoinBustingReport(best, best_h, best_w, L, running)


# -- violation scans ------------------------------------------------------

def _describe(ball: SubgroupBall, h: NormalForm) -> dict:
    dec = cyclic_decompose(h)
    g = h.graph
    return {"element": str(h), "t_word": ball.t_word(h), "t_length": ball.t_length[h],
            "conjugator": str(dec.conjugator), "core": str(dec.core),
            "csupp": g.sorted_names(dec.core.support_mask)}


def _scan(H: FinGenSubgroup, L: int, test, kind: str) -> ScanReport:
    if L < 1:
        raise ValueError("depth must be at least 1")
    ball = enumerate_subgroup(H, L)
    for h in ball.elements:
        if not h.codes:
            continue
        extra = test(h)
        if extra is not None:
            wit = _describe(ball, h)
            wit.update(extra)
            return ScanReport(CERTIFIED_NEGATIVE, L, wit, kind)
    return ScanReport(NO_VIOLATION, L, None, f"{kind}: {len(ball)} elements checked")


def join_free_scan(H: FinGenSubgroup, L: int) -> ScanReport:
    g = H.graph

    def test(h):
        core = cyclic_decompose(h).core.support_mask
        if g.is_clique_mask(core):
            return None
        w = join_mask_witness(g, core)
        return None if w is None else {"join": w.to_dict()}

    return _scan(H, L, test, "infinite-order element conjugate into a join subgroup")


def star_free_scan(H: FinGenSubgroup, L: int) -> ScanReport:
    g = H.graph

    def test(h):
        core = cyclic_decompose(h).core.support_mask
        if g.is_clique_mask(core):
            return None
        v = star_mask_witness(g, core)
        return None if v is None else {"star": g.vertices[v]}

    return _scan(H, L, test, "infinite-order element conjugate into a star subgroup")


def reflection_scan(H: FinGenSubgroup, L: int) -> ScanReport:
    def test(h):
        core = cyclic_decompose(h).core
        return {"reflection": str(core)} if len(core) == 1 else None

    return _scan(H, L, test, "element conjugate to a generator")


@dataclass
class PreconditionReport:
    verdict: str  # certified-negative or inconclusive
    checks: dict[str, ScanReport] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.verdict == CERTIFIED_NEGATIVE

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "checks": {k: v.to_dict() for k, v in self.checks.items()}}


def malnormal_preconditions(H: FinGenSubgroup, L: int) -> PreconditionReport:
    """Necessary conditions for ``H`` to be an infinite proper malnormal subgroup."""
    g = H.graph
    checks: dict[str, ScanReport] = {}
    if not is_connected(g):
        checks["graph"] = ScanReport(CERTIFIED_NEGATIVE, 0, {"graph": "disconnected"}, "ambient graph")
    elif is_join(g):
        checks["graph"] = ScanReport(CERTIFIED_NEGATIVE, 0, {"graph": "join"}, "ambient graph")
    else:
        checks["graph"] = ScanReport(NO_VIOLATION, 0, None, "ambient graph connected and not a join")
    checks["reflections"] = reflection_scan(H, L)
    checks["join_free"] = join_free_scan(H, L)
    bad = any(r.found for r in checks.values())
    return PreconditionReport(CERTIFIED_NEGATIVE if bad else "inconclusive", checks)


def _s_ball(graph: DefiningGraph, radius: int) -> list[NormalForm]:
    e = NormalForm.identity(graph)
    seen = {e}
    layer = [e]
    out = [e]
    for _ in range(radius):
        nxt = set()
        for x in layer:
            for s in range(len(graph)):
                y = x.times_letter(s)
                if y not in seen:
                    seen.add(y)
                    nxt.add(y)
        layer = sorted(nxt, key=lambda x: x.codes)
        out.extend(layer)
    return out


def malnormality_scan(H: FinGenSubgroup, Lg: int, Lh: int, member_depth: int | None = None) -> ScanReport:
    """Look for ``g`` outside ``H`` and nontrivial ``h`` in ``H`` with ``g h g^-1`` in ``H``.

    Membership is exact for special subgroups.  Otherwise it is tested against
    the subgroup ball of radius ``member_depth`` (default ``Lh + 2 Lg``).
    """
    if Lg < 1 or Lh < 1:
        raise ValueError("depths must be at least 1")
    graph = H.graph
    hball = enumerate_subgroup(H, Lh)
    if H.is_special:
        lam = H.special_mask

        def member(x):
            return x.support_mask & ~lam == 0
        note = "exact membership (special subgroup)"
    else:
        depth = Lh + 2 * Lg if member_depth is None else member_depth
        big = enumerate_subgroup(H, depth, max_size=200_000)

        def member(x):
            return x in big
        note = f"membership tested against the subgroup ball of radius {depth}"
        if big.truncated:
            note += " (truncated)"
    for g in _s_ball(graph, Lg):
        if member(g):
            continue
        ginv = g.inverse()
        for h in hball.elements:
            if not h.codes:
                continue
            x = g * h * ginv
            if member(x):
                wit = {"g": str(g), "h": str(h), "t_word": hball.t_word(h), "conjugate": str(x)}
                return ScanReport(CERTIFIED_NEGATIVE, max(Lg, Lh), wit, note)
    return ScanReport(NO_VIOLATION, max(Lg, Lh), None, note)


# -- free basis -------------------------------------------------------------

@dataclass
class FreeBasisReport:
    passed: bool
    checked: int
    depth: int
    ratio: int
    failure: dict | None = None

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checked": self.checked, "depth": self.depth,
                "ratio": self.ratio, "failure": self.failure}


def freely_reduced_words(k: int, L: int):
    """Freely reduced words of length 1..L over ``k`` generators and their formal inverses."""
    alphabet = [s * i for i in range(1, k + 1) for s in (1, -1)]
    for n in range(1, L + 1):
        stack = [()]
        out = []
        while stack:
            w = stack.pop()
            if len(w) == n:
                out.append(w)
                continue
            for a in reversed(alphabet):
                if w and w[-1] == -a:
                    continue
                stack.append(w + (a,))
        yield from out


def free_basis_check(H: FinGenSubgroup, L: int, ratio: int | None = None) -> FreeBasisReport:
    """Check that no short freely reduced generator word is trivial and lengths scale by ``ratio``."""
    if L < 1:
        raise ValueError("depth must be at least 1")
    if ratio is None:
        lengths = {len(t) for t in H.generators}
        if len(lengths) != 1:
            raise ValueError("generators have different lengths; pass an explicit ratio")
        ratio = lengths.pop()
    graph = H.graph
    gens = {i: t.codes for i, t in enumerate(H.generators, start=1)}
    checked = 0
    for word in freely_reduced_words(len(H.generators), L):
        codes: list[int] = []
        for a in word:
            codes.extend(gens[a] if a > 0 else reversed(gens[-a]))
        h = reduce_codes(graph, codes)
        checked += 1
        s_word = " ".join(graph.vertices[c] for c in codes)
        if not h:
            return FreeBasisReport(False, checked, L, ratio,
                                   {"t_word": format_t_word(word), "s_word": s_word, "reason": "identity"})
        if len(h) != ratio * len(word):
            return FreeBasisReport(False, checked, L, ratio,
                                   {"t_word": format_t_word(word), "s_word": s_word,
                                    "reason": f"S-length {len(h)} != {ratio} * {len(word)}"})
    return FreeBasisReport(True, checked, L, ratio)
