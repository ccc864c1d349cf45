"""Dual van Kampen diagrams as chord diagrams.

A diagram for a word representing the identity is a perfect matching on the
letter positions of the word, read around a disk.  Matched positions carry
equal letters and two chords that interleave carry commuting letters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .graph import DefiningGraph
from .words import NormalForm, parse_word, reduce_codes


class DiagramError(ValueError):
    def __init__(self, message: str, stuck: NormalForm | None = None):
        super().__init__(message)
        self.stuck = stuck


def crosses(a: tuple[int, int], b: tuple[int, int]) -> bool:
    (i, j), (k, l) = a, b
    return i < k < j < l or k < i < l < j


@dataclass(frozen=True)
class DualVanKampenDiagram:
    graph: DefiningGraph
    boundary: tuple[int, ...]
    arcs: tuple[tuple[int, int], ...]  # (i, j) with i < j, sorted

    @property
    def letters(self) -> list[str]:
        return [self.graph.vertices[c] for c in self.boundary]

    def word(self, lo: int = 0, hi: int | None = None) -> str:
        return " ".join(self.letters[lo:hi])

    def label(self, arc: tuple[int, int]) -> str:
        return self.graph.vertices[self.boundary[arc[0]]]

    def partner(self) -> dict[int, int]:
        out = {}
        for i, j in self.arcs:
            out[i] = j
            out[j] = i
        return out

    def crossing_pairs(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        arcs = self.arcs
        return [(a, b) for n, a in enumerate(arcs) for b in arcs[n + 1:] if crosses(a, b)]

    def to_dict(self) -> dict:
        return {"boundary": self.letters, "arcs": [list(a) for a in self.arcs]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_dot(self, tags: dict | None = None) -> str:
        n = len(self.boundary)
        lines = ["graph diagram {", "  layout=circo;"]
        for p, x in enumerate(self.letters):
            lines.append(f'  p{p} [label="{p}:{x}"];')
        for p in range(n):
            if n > 1:
                lines.append(f"  p{p} -- p{(p + 1) % n} [style=dotted];")
        for a in self.arcs:
            style = ""
            if tags is not None:
                style = ", style=bold" if tags.get(a) == "contributing" else ", style=dashed"
            lines.append(f'  p{a[0]} -- p{a[1]} [label="{self.label(a)}"{style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _make(graph, boundary, pairs) -> DualVanKampenDiagram:
    arcs = tuple(sorted((min(i, j), max(i, j)) for i, j in pairs))
    return DualVanKampenDiagram(graph, tuple(boundary), arcs)


def diagram_from_dict(graph: DefiningGraph, doc: dict) -> DualVanKampenDiagram:
    boundary = parse_word(graph, doc["boundary"])
    return _make(graph, boundary, [tuple(a) for a in doc["arcs"]])


def build_diagram(graph: DefiningGraph, word) -> DualVanKampenDiagram:
    """Match letters by repeated deletion, innermost pair first.

    The pair chosen each round has the smallest right end, and for that end the
    nearest matching left partner.  Raises ``DiagramError`` carrying the normal
    form of what is left if the word is not the identity.
    """
    return _build(graph, parse_word(graph, word))


def _build(graph: DefiningGraph, codes) -> DualVanKampenDiagram:
    adj = graph.adj
    alive = list(range(len(codes)))
    pairs = []
    while alive:
        found = None
        for jj in range(1, len(alive)):
            x = codes[alive[jj]]
            for ii in range(jj - 1, -1, -1):
                y = codes[alive[ii]]
                if y == x:
                    found = (ii, jj)
                    break
                if not adj[x] >> y & 1:
                    break
            if found:
                break
        if found is None:
            rest = [codes[p] for p in alive]
            stuck = NormalForm(graph, reduce_codes(graph, rest))
            raise DiagramError(f"word is not the identity; it reduces to {str(stuck)!r}", stuck)
        ii, jj = found
        pairs.append((alive[ii], alive[jj]))
        del alive[jj]
        del alive[ii]
    return _make(graph, codes, pairs)


def validate(d: DualVanKampenDiagram) -> tuple[bool, str | None]:
    """Check every diagram condition; return the first violation found."""
    n = len(d.boundary)
    seen = set()
    for i, j in d.arcs:
        if not (0 <= i < j < n):
            return False, f"arc {[i, j]} out of range"
        if i in seen or j in seen:
            return False, f"position reused by arc {[i, j]}"
        seen.update((i, j))
    if len(seen) != n:
        return False, "matching is not perfect"
    for i, j in d.arcs:
        if d.boundary[i] != d.boundary[j]:
            return False, f"unequal-labels at arc {[i, j]}"
    adj = d.graph.adj
    for a, b in d.crossing_pairs():
        x, y = d.boundary[a[0]], d.boundary[b[0]]
        if not adj[x] >> y & 1:
            return False, f"crossing-adjacency between arcs {list(a)} and {list(b)}"
    if reduce_codes(d.graph, d.boundary):
        return False, "boundary word is not the identity"
    for i, j in d.arcs:
        x = d.boundary[i]
        star = adj[x] | 1 << x
        inner = reduce_codes(d.graph, d.boundary[i + 1:j])
        if any(not star >> c & 1 for c in inner):
            return False, f"enclosed word of arc {[i, j]} is not in the star of {d.graph.vertices[x]}"
    return True, None


# -- reducing diagrams ------------------------------------------------------

CONTRIBUTING = "contributing"
NONCONTRIBUTING = "noncontributing"


@dataclass(frozen=True)
class ReducingDiagram:
    diagram: DualVanKampenDiagram
    h_length: int  # positions [0, h_length) spell the input words
    reduced: NormalForm

    @property
    def tags(self) -> dict[tuple[int, int], str]:
        return {a: CONTRIBUTING if a[1] >= self.h_length else NONCONTRIBUTING for a in self.diagram.arcs}

    def contributing(self) -> list[tuple[int, int]]:
        return [a for a, t in self.tags.items() if t == CONTRIBUTING]

    def noncontributing(self) -> list[tuple[int, int]]:
        return [a for a, t in self.tags.items() if t == NONCONTRIBUTING]

    def to_dict(self) -> dict:
        out = self.diagram.to_dict()
        out["h_length"] = self.h_length
        out["reduced"] = str(self.reduced)
        out["tags"] = {CONTRIBUTING: [list(a) for a in self.contributing()],
                       NONCONTRIBUTING: [list(a) for a in self.noncontributing()]}
        return out


def build_reducing_diagram(graph: DefiningGraph, hs, w: NormalForm | None = None) -> ReducingDiagram:
    """Diagram for ``h_1 ... h_k`` followed by the reversed reduced word ``w``."""
    codes: list[int] = []
    for h in hs:
        codes.extend(parse_word(graph, h))
    target = NormalForm(graph, reduce_codes(graph, codes))
    if w is None:
        w = target
    elif w != target:
        raise DiagramError(f"product of the words is {str(target)!r}, not {str(w)!r}")
    boundary = codes + list(reversed(w.codes))
    d = _build(graph, tuple(boundary))
    h_len = len(codes)
    # w is reduced, so no chord can have both ends on its side
    assert all(i < h_len for i, _ in d.arcs), "chord inside the reduced side"
    return ReducingDiagram(d, h_len, w)


# -- combing ----------------------------------------------------------------

def _check_range(d: DualVanKampenDiagram, lo: int, hi: int):
    if not (0 <= lo <= hi <= len(d.boundary)):
        raise DiagramError(f"invalid range [{lo}, {hi}) for a boundary of length {len(d.boundary)}")


def is_combed(d: DualVanKampenDiagram, lo: int, hi: int) -> bool:
    """No two chords with an end in ``[lo, hi)`` cross."""
    _check_range(d, lo, hi)
    touching = [a for a in d.arcs if lo <= a[0] < hi or lo <= a[1] < hi]
    return not any(crosses(a, b) for n, a in enumerate(touching) for b in touching[n + 1:])


@dataclass(frozen=True)
class CombResult:
    word: str
    diagram: DualVanKampenDiagram
    swaps: int
    moves: int  # cancelling pairs slid to the end of the range


def comb(d: DualVanKampenDiagram, lo: int, hi: int) -> CombResult:
    """Rearrange the letters in ``[lo, hi)`` so no chords leaving the range cross.

    Every swap exchanges two neighbouring letters whose chords cross, hence
    commuting letters.  Chords with both ends in the range are first pulled
    tight into neighbouring ``x x`` pairs and slid to the right end of the
    range, where they cross nothing.  Outside endpoints never move.
    """
    _check_range(d, lo, hi)
    letters = list(d.boundary)
    mate = d.partner()
    swaps = moves = 0

    def swap(p):
        q = p + 1
        a, b = mate[p], mate[q]
        letters[p], letters[q] = letters[q], letters[p]
        if a == q:  # the two ends of one chord
            return
        mate[p], mate[q] = b, a
        mate[b], mate[a] = p, q

    park = hi
    while True:
        internal = [(p, mate[p]) for p in range(lo, park) if p < mate[p] < park]
        if not internal:
            break
        i, j = min(internal, key=lambda a: (a[1] - a[0], a[0]))
        while j - i > 1:
            swap(i)
            swaps += 1
            i += 1
        # slide the pair (i, i+1) to the end of the active part of the range
        x = letters[i]
        for p in range(i, park - 2):
            src = p + 2
            letters[p] = letters[src]
            o = mate[src]
            mate[p] = o
            mate[o] = p
            moves += 1
        letters[park - 2] = letters[park - 1] = x
        mate[park - 2], mate[park - 1] = park - 1, park - 2
        park -= 2

    n = len(letters)

    def key(p):
        return (mate[p] - hi) % n

    changed = True
    while changed:
        changed = False
        for p in range(lo, park - 1):
            if key(p) < key(p + 1):
                swap(p)
                swaps += 1
                changed = True
    pairs = {(min(p, q), max(p, q)) for p, q in mate.items()}
    out = _make(d.graph, letters, pairs)
    return CombResult(out.word(lo, hi), out, swaps, moves)


@dataclass(frozen=True)
class PruneResult:
    word: str
    diagram: DualVanKampenDiagram


def prune(d: DualVanKampenDiagram, lo: int, hi: int) -> PruneResult:
    """Delete the chords with both ends in ``[lo, hi)`` along with their letters."""
    _check_range(d, lo, hi)
    drop = set()
    for i, j in d.arcs:
        if lo <= i and j < hi:
            drop.update((i, j))
    keep = [p for p in range(len(d.boundary)) if p not in drop]
    where = {p: n for n, p in enumerate(keep)}
    boundary = [d.boundary[p] for p in keep]
    arcs = [(where[i], where[j]) for i, j in d.arcs if i not in drop]
    out = _make(d.graph, boundary, arcs)
    new_hi = hi - sum(1 for p in drop if p < hi)
    return PruneResult(out.word(lo, new_hi), out)


def label_read(d: DualVanKampenDiagram, lo: int, hi: int) -> str:
    """Labels of the chords leaving ``[lo, hi)``, ordered by their end inside it.

    As a group element this equals the boundary word on ``[lo, hi)``.
    """
    _check_range(d, lo, hi)
    mate = d.partner()
    out = []
    for p in range(lo, hi):
        if not lo <= mate[p] < hi:
            out.append(d.graph.vertices[d.boundary[p]])
    return " ".join(out)
