"""Finite pieces of the Davis complex 1-skeleton (the Cayley graph).

Balls are enumerated exactly by breadth-first search over canonical forms.
Distances to subgroups, walls, avoidant path lengths and divergence numbers
are all measured on vertices with integer radii.  Every estimate records the
ball radius it was computed in and whether the ball boundary could have cut a
shorter path off.
"""

from __future__ import annotations

import csv
import io
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .graph import DefiningGraph, FourCycleGraph, GraphError, bits, four_cycle_graph
from .subgroups import FinGenSubgroup, ParabolicSpec, enumerate_subgroup
from .words import NormalForm, min_double_coset_mask, normalize, product_membership_masks, reduce_codes


class BallTooLarge(RuntimeError):
    pass


class CayleyBall:
    """All elements of length at most ``radius`` with their generator edges.

    Elements are stored in (length, canonical word) order; ``index`` maps an
    element to its position and ``neighbors[i]`` lists positions one
    generator away.
    """

    def __init__(self, graph: DefiningGraph, radius: int, max_size: int | None = 2_000_000):
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        self.graph = graph
        self.radius = radius
        e = NormalForm.identity(graph)
        elements = [e]
        index = {e: 0}
        layer = [e]
        for _ in range(radius):
            nxt = set()
            for x in layer:
                for s in range(len(graph)):
                    y = x.times_letter(s)
                    if len(y) > len(x) and y not in index and y not in nxt:
                        nxt.add(y)
            layer = sorted(nxt, key=lambda x: x.codes)
            for y in layer:
                index[y] = len(elements)
                elements.append(y)
            if max_size is not None and len(elements) > max_size:
                raise BallTooLarge(f"ball of radius {radius} exceeds {max_size} elements")
            if not layer:
                break
        self.elements: list[NormalForm] = elements
        self.index: dict[NormalForm, int] = index
        self.neighbors: list[list[int]] = []
        for x in elements:
            row = []
            for s in range(len(graph)):
                j = index.get(x.times_letter(s))
                if j is not None:
                    row.append(j)
            self.neighbors.append(row)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x: NormalForm):
        return x in self.index

    def distance(self, x: NormalForm) -> int:
        return len(x)

    def sphere(self, r: int) -> list[NormalForm]:
        return [x for x in self.elements if len(x) == r]

    def bfs(self, src: int, allowed: Sequence[bool] | None = None) -> list[int]:
        """Ball-internal path distances from ``src`` (-1 where unreachable)."""
        dist = [-1] * len(self.elements)
        dist[src] = 0
        queue = deque([src])
        while queue:
            i = queue.popleft()
            for j in self.neighbors[i]:
                if dist[j] < 0 and (allowed is None or allowed[j]):
                    dist[j] = dist[i] + 1
                    queue.append(j)
        return dist

    def to_dot(self, highlight: Iterable[NormalForm] = ()) -> str:
        marked = set(highlight)
        lines = ["graph ball {"]
        for i, x in enumerate(self.elements):
            label = str(x) or "e"
            extra = ", style=filled, fillcolor=lightblue" if x in marked else ""
            lines.append(f'  n{i} [label="{label}"{extra}];')
        for i, row in enumerate(self.neighbors):
            for j in row:
                if i < j:
                    s = _edge_letter(self.elements[i], self.elements[j])
                    lines.append(f'  n{i} -- n{j} [label="{s}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def ball(graph: DefiningGraph, radius: int, max_size: int | None = 2_000_000) -> CayleyBall:
    return CayleyBall(graph, radius, max_size)


def _edge_letter(x: NormalForm, y: NormalForm) -> str:
    diff = x.inverse() * y
    return str(diff)


# -- distance to subgroups --------------------------------------------------

def _special_distance(x: NormalForm, lam_mask: int) -> int:
    # shortest element of the coset G_lam x
    return len(min_double_coset_mask(x, lam_mask, 0))


def distance_to_subgroup(x: NormalForm, H, bound: int | None = None, depth: int | None = None) -> int | None:
    """``min |h^-1 x|`` over ``h`` in ``H``; ``None`` when it exceeds ``bound``.

    Special subgroups are handled exactly by coset minimisation.  Conjugated
    parabolics are searched exactly over a large enough piece of ``G_lam``.
    For other finitely generated subgroups the minimum runs over the subgroup
    ball of radius ``depth`` and is only an upper bound on the true distance.
    """
    return SubgroupDistance(H, depth=depth)(x, bound)


class SubgroupDistance:
    """Cached distance-to-subgroup function."""

    def __init__(self, H, depth: int | None = None):
        self.exact = True
        self._cache: dict[NormalForm, int | None] = {}
        if isinstance(H, ParabolicSpec) and not H.conjugator.codes:
            self.graph = H.graph
            self._mask = H.mask
            self._kind = "special"
        elif isinstance(H, FinGenSubgroup) and H.is_special:
            self.graph = H.graph
            self._mask = H.special_mask
            self._kind = "special"
        elif isinstance(H, ParabolicSpec):
            self.graph = H.graph
            self._mask = H.mask
            self._conj = H.conjugator
            self._conj_inv = H.conjugator.inverse()
            self._kind = "conjugate"
        elif isinstance(H, FinGenSubgroup):
            self.graph = H.graph
            self.exact = False
            self._kind = "ball"
            self._ball = enumerate_subgroup(H, 4 if depth is None else depth, max_size=500_000).elements
        else:
            raise TypeError("expected a ParabolicSpec or FinGenSubgroup")

    def __call__(self, x: NormalForm, bound: int | None = None) -> int | None:
        d = self._cache.get(x, -1)
        if d == -1:
            d = self._compute(x)
            self._cache[x] = d
        if d is None or (bound is not None and d > bound):
            return None
        return d

    def _compute(self, x: NormalForm) -> int | None:
        if self._kind == "special":
            return _special_distance(x, self._mask)
        if self._kind == "conjugate":
            # the identity gives |x|, so a closer h = k y k^-1 has |h| <= 2|x|
            # and therefore |y| <= 2|x| + 2|k|
            k, kinv = self._conj, self._conj_inv
            best = len(x)
            limit = 2 * len(x) + 2 * len(k)
            for y in _special_ball(self.graph, self._mask, limit):
                h = k * y * kinv
                d = len(h.inverse() * x)
                if d < best:
                    best = d
            return best
        best = None
        for h in self._ball:
            d = len(h.inverse() * x)
            if best is None or d < best:
                best = d
        return best


def _special_ball(graph: DefiningGraph, mask: int, radius: int) -> list[NormalForm]:
    e = NormalForm.identity(graph)
    out = [e]
    seen = {e}
    layer = [e]
    for _ in range(radius):
        nxt = []
        for x in layer:
            for s in bits(mask):
                y = x.times_letter(s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        out.extend(nxt)
        layer = nxt
        if not layer:
            break
    return out


# -- hyperplanes --------------------------------------------------------------

@dataclass(frozen=True)
class Hyperplane:
    """The wall ``g H_v``, stored with ``g`` the shortest element of ``g G_St(v)``."""

    g: NormalForm
    v: int

    @classmethod
    def of(cls, g: NormalForm, v) -> "Hyperplane":
        graph = g.graph
        code = graph.index(v) if isinstance(v, str) else v
        star = graph.star_mask(code)
        return cls(min_double_coset_mask(g, 0, star), code)

    @classmethod
    def dual_to_edge(cls, x: NormalForm, s: int) -> "Hyperplane":
        return cls.of(x, s)

    @property
    def label(self) -> str:
        return self.g.graph.vertices[self.v]

    def __str__(self):
        return f"({self.g or 'e'}) H_{self.label}"


def hyperplanes_intersect(h1: Hyperplane, h2: Hyperplane) -> bool:
    graph = h1.g.graph
    if not graph.adj[h1.v] >> h2.v & 1:
        return False
    diff = h1.g.inverse() * h2.g
    return product_membership_masks(diff, [graph.star_mask(h1.v), graph.star_mask(h2.v)])


def common_transversal_exists(h1: Hyperplane, h2: Hyperplane) -> bool:
    """Is there a wall crossing both ``h1`` and ``h2``?"""
    graph = h1.g.graph
    diff = h1.g.inverse() * h2.g
    sv, sw = graph.star_mask(h1.v), graph.star_mask(h2.v)
    for u in bits(sv & sw):
        if product_membership_masks(diff, [sv, graph.star_mask(u), sw]):
            return True
    return False


# -- avoidant distances -------------------------------------------------------

INFINITY = None


def avoidant_distance(b: CayleyBall, x: NormalForm, y: NormalForm, dist: Callable[[NormalForm], int | None],
                      r: int) -> int | None:
    """Shortest ball path from ``x`` to ``y`` through vertices at distance >= ``r`` from the subgroup.

    ``dist`` maps an element to its distance from the avoided subgroup.
    ``None`` means no such path exists inside the ball.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    allowed = _region(b, dist, r)
    for p in (x, y):
        if p not in b.index:
            raise GraphError(f"{p} is outside the ball")
        if not allowed[b.index[p]]:
            raise GraphError(f"endpoint {p or 'e'} lies within distance {r} of the subgroup")
    d = b.bfs(b.index[x], allowed)[b.index[y]]
    return None if d < 0 else d


def _region(b: CayleyBall, dist, r: int) -> list[bool]:
    out = []
    for z in b.elements:
        d = dist(z)
        out.append(d is None or d >= r)
    return out


def _components(b: CayleyBall, allowed: Sequence[bool]) -> list[int]:
    comp = [-1] * len(b)
    c = 0
    for i in range(len(b)):
        if allowed[i] and comp[i] < 0:
            comp[i] = c
            queue = deque([i])
            while queue:
                p = queue.popleft()
                for q in b.neighbors[p]:
                    if allowed[q] and comp[q] < 0:
                        comp[q] = c
                        queue.append(q)
            c += 1
    return comp


@dataclass
class DivergenceEstimate:
    kind: str  # "subgroup" or "group"
    n: int | None
    rho: Fraction
    r: int
    radius: int
    value: int | None  # None means infinite: no admissible pair in the ball
    pair: tuple[NormalForm, NormalForm] | None
    truncated: bool
    caveats: list[str] = field(default_factory=list)

    @property
    def infinite(self) -> bool:
        return self.value is None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n": self.n, "rho": str(self.rho), "r": self.r, "R": self.radius,
                "value": self.value, "infinite": self.infinite,
                "pair": [str(p) for p in self.pair] if self.pair else None,
                "truncated": self.truncated, "caveats": self.caveats}

    def csv_row(self) -> list:
        pair = " / ".join(str(p) or "e" for p in self.pair) if self.pair else ""
        value = "inf" if self.value is None else self.value
        return [self.r, self.n if self.n is not None else "", str(self.rho), self.radius, value,
                int(self.truncated), pair]


CSV_COLUMNS = ["r", "n", "rho", "R", "sigma", "truncated", "pair"]


def estimates_to_csv(estimates: Sequence[DivergenceEstimate]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for e in estimates:
        w.writerow(e.csv_row())
    return buf.getvalue()


def _as_fraction(rho) -> Fraction:
    rho = Fraction(rho)
    if not 0 < rho <= 1:
        raise ValueError("rho must lie in (0, 1]")
    return rho


def _ceil(x: Fraction) -> int:
    return math.ceil(x)


def subgroup_divergence(graph: DefiningGraph, H, n: int, rho, r: int, radius: int,
                        b: CayleyBall | None = None, depth: int | None = None) -> DivergenceEstimate:
    """Finite-radius estimate of the subgroup divergence at scale ``r``.

    Takes the least avoidant distance, avoiding the ``ceil(rho r)``
    neighbourhood, over pairs on the ``r``-sphere around the subgroup that are
    at least ``n r`` apart and connected outside the ``r`` neighbourhood.
    Ball-restricted paths overestimate true avoidant distances, and pairs
    beyond the ball are not seen.
    """
    rho = _as_fraction(rho)
    if n < 2:
        raise ValueError("n must be at least 2")
    if r < 1:
        raise ValueError("r must be at least 1")
    caveats = ["avoidant paths are restricted to the ball, so each distance is an upper bound",
               "pairs outside the ball are not considered"]
    if radius < (n + 2) * r:
        caveats.append(f"R={radius} is below (n+2)r={(n + 2) * r}")
    b = b or CayleyBall(graph, radius)
    dist = SubgroupDistance(H, depth=depth)
    if not dist.exact:
        caveats.append("subgroup distances come from a finite subgroup ball")
    dvals = [dist(z) for z in b.elements]
    boundary = [i for i, d in enumerate(dvals) if d == r]
    outer = [d is None or d >= r for d in dvals]
    comp = _components(b, outer)
    rr = _ceil(rho * r)
    allowed = [d is None or d >= rr for d in dvals]
    best = None
    best_pair = None
    best_trunc = False
    for a, i in enumerate(boundary):
        xi = b.elements[i]
        xinv = xi.inverse()
        far = [j for j in boundary[a + 1:]
               if comp[j] == comp[i] and len(xinv * b.elements[j]) >= n * r]
        if not far:
            continue
        dists = b.bfs(i, allowed)
        for j in far:
            d = dists[j]
            if d < 0:
                continue
            if best is None or d < best:
                best, best_pair = d, (xi, b.elements[j])
                best_trunc = _touches_edge(b, dists, d)
    return DivergenceEstimate("subgroup", n, rho, r, radius, best, best_pair, best_trunc, caveats)


def _touches_edge(b: CayleyBall, dists: Sequence[int], d: int) -> bool:
    # a ball vertex on the outer sphere within reach means a shorter path
    # through the missing part of the group cannot be ruled out
    return any(0 <= dists[k] <= d and len(b.elements[k]) == b.radius for k in range(len(b)))


def group_divergence(graph: DefiningGraph, rho, r: int, radius: int,
                     b: CayleyBall | None = None) -> DivergenceEstimate:
    """Largest avoidant distance between points of the ``r``-sphere about the identity.

    Paths avoid the open ball of radius ``ceil(rho r)``.
    """
    rho = _as_fraction(rho)
    if r < 1:
        raise ValueError("r must be at least 1")
    b = b or CayleyBall(graph, radius)
    caveats = ["avoidant paths are restricted to the ball, so each distance is an upper bound"]
    if radius <= r:
        caveats.append("ball radius does not exceed r")
    rr = _ceil(rho * r)
    allowed = [len(z) >= rr for z in b.elements]
    sphere = [i for i, z in enumerate(b.elements) if len(z) == r]
    best = None
    best_pair = None
    trunc = False
    for a, i in enumerate(sphere):
        dists = b.bfs(i, allowed)
        for j in sphere[a + 1:]:
            d = dists[j]
            if d < 0:
                continue
            if best is None or d > best:
                best, best_pair = d, (b.elements[i], b.elements[j])
                trunc = _touches_edge(b, dists, d)
    return DivergenceEstimate("group", None, rho, r, radius, best, best_pair, trunc, caveats)


def divergence_sweep(graph: DefiningGraph, H, n: int, rho, rs: Iterable[int], radius: int) -> list[DivergenceEstimate]:
    b = CayleyBall(graph, radius)
    if H is None:
        return [group_divergence(graph, rho, r, radius, b) for r in rs]
    return [subgroup_divergence(graph, H, n, rho, r, radius, b) for r in rs]


# -- corner paths -------------------------------------------------------------

@dataclass
class CornerPath:
    vertices: list[NormalForm]
    m: int
    k: int
    walk_length: int  # four-cycle graph edges walked, summed over segments
    corners: int  # number of corner segments actually traversed
    diameter: int  # diameter of the four-cycle component

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def bound(self) -> int:
        return 2 * (self.k + 1) * (self.walk_length + 2) * self.m

    @property
    def diameter_bound(self) -> int:
        return 2 * (self.k + 1) * (self.diameter + 2) * self.m

    def is_edge_path(self) -> bool:
        return all(len(x.inverse() * y) == 1 for x, y in zip(self.vertices, self.vertices[1:]))

    def to_dict(self) -> dict:
        return {"vertices": [str(v) for v in self.vertices], "length": self.length, "m": self.m,
                "k": self.k, "walk_length": self.walk_length, "corners": self.corners,
                "diameter": self.diameter, "bound": self.bound, "diameter_bound": self.diameter_bound}


def component_diameter(fcg: FourCycleGraph, comp: int) -> int:
    members = fcg.components[comp]
    nbrs = {i: fcg.neighbors(i) for i in members}
    best = 0
    for src in members:
        dist = {src: 0}
        queue = deque([src])
        while queue:
            p = queue.popleft()
            for q in nbrs[p]:
                if q not in dist:
                    dist[q] = dist[p] + 1
                    queue.append(q)
        best = max(best, max(dist.values()))
    return best


def corner_path(graph: DefiningGraph, component: int, q0, diagonal: Sequence[str], m: int, h,
                fcg: FourCycleGraph | None = None) -> CornerPath:
    """Explicit edge path from ``u^m`` to ``h u^m`` where ``u = s t`` for the diagonal ``(s, t)``.

    The path moves the power of one diagonal product to the power of another
    diagonal of the same 4-cycle (raise the new power first, then lower the
    old), hopping through 4-cycles of the component until it reaches a
    diagonal whose letters commute with the next letter of ``h``; that letter
    is then a single edge.  Diagonals are chosen by breadth-first search so
    the number of corner segments is as small as possible.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    fcg = fcg or four_cycle_graph(graph)
    if not 0 <= component < len(fcg.components):
        raise GraphError(f"no four-cycle component {component}")
    members = [fcg.nodes[i] for i in fcg.components[component]]
    q0 = frozenset(frozenset(d) for d in q0)
    if q0 not in members:
        raise GraphError("Q0 is not a four-cycle of the component")
    s, t = diagonal
    start = frozenset((s, t))
    if start not in q0:
        raise GraphError(f"({s}, {t}) is not a diagonal of Q0")
    h = h if isinstance(h, NormalForm) else normalize(graph, h)
    support = fcg.supports[component]
    for x in h.letters:
        if x not in support:
            raise GraphError(f"letter {x} of h is not in the support of the component")

    def orient(d: frozenset) -> tuple[int, int]:
        if d == start:
            return graph.index(s), graph.index(t)
        a, b = sorted(graph.index(v) for v in d)
        return a, b

    # diagonal graph: two diagonals are linked when they form one 4-cycle
    link: dict[frozenset, list[tuple[frozenset, frozenset]]] = {}
    for cyc in members:
        d1, d2 = sorted(cyc, key=lambda d: sorted(graph.index(v) for v in d))
        link.setdefault(d1, []).append((d2, cyc))
        link.setdefault(d2, []).append((d1, cyc))
    order_key = {d: sorted(graph.index(v) for v in d) for d in link}
    for d in link:
        link[d].sort(key=lambda p: (order_key[p[0]], sorted(order_key[x] for x in p[1])))

    def route(src: frozenset, goal) -> list[tuple[frozenset, frozenset]]:
        """Shortest list of (cycle, next diagonal) hops from ``src`` to a goal diagonal."""
        if goal(src):
            return []
        prev = {src: None}
        queue = deque([src])
        while queue:
            d = queue.popleft()
            for e, cyc in link[d]:
                if e not in prev:
                    prev[e] = (d, cyc)
                    if goal(e):
                        hops = []
                        cur = e
                        while prev[cur] is not None:
                            pd, pc = prev[cur]
                            hops.append((pc, cur))
                            cur = pd
                        return hops[::-1]
                    queue.append(e)
        raise GraphError("no route inside the component")

    def opposite_of(letter: str):
        # diagonals D with some 4-cycle of the component having `letter` opposite D
        ok = set()
        for cyc in members:
            for d in cyc:
                if letter in d:
                    ok.update(x for x in cyc if x != d)
        return ok

    def power(d: tuple[int, int], e: int) -> NormalForm:
        return NormalForm(graph, reduce_codes(graph, list(d) * e))

    vertices: list[NormalForm] = []
    corners = 0
    walk = 0

    def segment(prefix: NormalForm, src: frozenset, hops, cur_cycle, end_cycle):
        nonlocal corners, walk
        cur = orient(src)
        local = power(cur, m)
        pts = [local]
        cycles = [cur_cycle]
        for cyc, nxt in hops:
            new = orient(nxt)
            x, y = cur
            for _ in range(m):
                for letter in new:
                    local = local.times_letter(letter)
                    pts.append(local)
            for _ in range(m):
                for letter in (y, x):
                    local = local.times_letter(letter)
                    pts.append(local)
            cur = new
            corners += 1
            cycles.append(cyc)
        cycles.append(end_cycle)
        dedup = [c for i, c in enumerate(cycles) if i == 0 or c != cycles[i - 1]]
        walk += len(dedup) - 1
        return [prefix * p for p in pts]

    def first_cycle_with(d: frozenset, letter: str | None):
        for cyc in members:
            if d in cyc and (letter is None or any(letter in x for x in cyc if x != d)):
                return cyc
        raise GraphError("internal: no cycle for diagonal")

    cur_diag = start
    cur_cycle = q0
    prefix = NormalForm.identity(graph)
    for letter in h.letters:
        targets = opposite_of(letter)
        hops = route(cur_diag, lambda d: d in targets)
        end = hops[-1][1] if hops else cur_diag
        q_i = first_cycle_with(end, letter)
        pts = segment(prefix, cur_diag, hops, cur_cycle, q_i)
        if vertices:
            pts = pts[1:]  # shared junction point
        vertices.extend(pts)
        code = graph.index(letter)
        last = pts[-1] if pts else vertices[-1]
        vertices.append(last.times_letter(code))
        prefix = prefix.times_letter(code)
        cur_diag, cur_cycle = end, q_i
    hops = route(cur_diag, lambda d: d == start)
    pts = segment(prefix, cur_diag, hops, cur_cycle, q0)
    if vertices:
        pts = pts[1:]
    vertices.extend(pts)
    return CornerPath(vertices, m, len(h), walk, corners, component_diameter(fcg, component))
