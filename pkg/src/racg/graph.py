"""Defining graphs of right-angled Coxeter groups and the graph-side computations.

Vertices are addressed by name in the public API.  Internally every vertex has
an integer code equal to its position in the graph's total order, and vertex
subsets are bitmasks over those codes.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping


class GraphError(ValueError):
    pass


class DefiningGraph:
    """A finite simplicial graph with named vertices and a fixed total order.

    >>> g = DefiningGraph(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    >>> sorted(g.link("a"))
    ['b', 'd']
    """

    __slots__ = ("vertices", "edges", "_index", "adj", "full_mask", "_hash")

    def __init__(self, vertices: Iterable[str], edges: Iterable[Iterable[str]] = (),
                 order: Iterable[str] | None = None):
        declared = list(vertices)
        if not declared:
            raise GraphError("empty vertex list")
        seen = set()
        for v in declared:
            if not isinstance(v, str) or not v or any(ch.isspace() for ch in v):
                raise GraphError(f"invalid vertex name {v!r}")
            if v in seen:
                raise GraphError(f"duplicate vertex {v!r}")
            seen.add(v)
        if order is not None:
            order = list(order)
            if sorted(order) != sorted(declared):
                raise GraphError("vertex order is not a permutation of the vertices")
            declared = order
        self.vertices: tuple[str, ...] = tuple(declared)
        self._index = {v: i for i, v in enumerate(self.vertices)}
        adj = [0] * len(self.vertices)
        edge_set = set()
        for e in edges:
            e = list(e)
            if len(e) != 2:
                raise GraphError(f"edge {e!r} does not have two endpoints")
            u, v = e
            for x in (u, v):
                if x not in self._index:
                    raise GraphError(f"edge {e!r} has unknown endpoint {x!r}")
            if u == v:
                raise GraphError(f"self-loop at {u!r}")
            i, j = sorted((self._index[u], self._index[v]))
            if (i, j) in edge_set:
                raise GraphError(f"duplicate edge {u!r}-{v!r}")
            edge_set.add((i, j))
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        self.adj: tuple[int, ...] = tuple(adj)
        self.edges: tuple[tuple[str, str], ...] = tuple(
            (self.vertices[i], self.vertices[j]) for i, j in sorted(edge_set))
        self.full_mask = (1 << len(self.vertices)) - 1
        self._hash = hash((self.vertices, self.edges))

    # -- identity -------------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, DefiningGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"DefiningGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    # -- codes and masks ------------------------------------------------
    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def name(self, i: int) -> str:
        return self.vertices[i]

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for v in names:
            m |= 1 << self.index(v)
        return m

    def names(self, mask: int) -> frozenset[str]:
        return frozenset(self.vertices[i] for i in bits(mask))

    def sorted_names(self, mask: int) -> list[str]:
        return [self.vertices[i] for i in bits(mask)]

    def adjacent(self, u: str, v: str) -> bool:
        return bool(self.adj[self.index(u)] >> self.index(v) & 1)

    def is_clique_mask(self, mask: int) -> bool:
        for i in bits(mask):
            if (mask & ~(1 << i)) & ~self.adj[i]:
                return False
        return True

    def induced(self, names: Iterable[str]) -> "DefiningGraph":
        keep = set(names)
        verts = [v for v in self.vertices if v in keep]
        return DefiningGraph(verts, [e for e in self.edges if e[0] in keep and e[1] in keep])

    def to_document(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}

    # -- links and stars ------------------------------------------------
    def link(self, v: str) -> frozenset[str]:
        return self.names(self.adj[self.index(v)])

    def star(self, v: str) -> frozenset[str]:
        i = self.index(v)
        return self.names(self.adj[i] | 1 << i)

    def star_mask(self, i: int) -> int:
        return self.adj[i] | 1 << i


def bits(mask: int):
    """Yield set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


# -- documents ------------------------------------------------------------

def load_graph(document) -> DefiningGraph:
    """Build a graph from a ``{"vertices": [...], "edges": [[u, v], ...]}`` document.

    Accepts a mapping, a JSON string, or a document wrapping the graph under a
    ``"graph"`` key (subgroup and family documents).
    """
    if isinstance(document, (str, bytes)):
        document = json.loads(document)
    if not isinstance(document, Mapping):
        raise GraphError("graph document must be an object")
    if "vertices" not in document and "graph" in document:
        document = document["graph"]
    if "vertices" not in document:
        raise GraphError("graph document has no 'vertices' field")
    return DefiningGraph(document["vertices"], document.get("edges", []), document.get("order"))


# -- distances and joins --------------------------------------------------

def graph_distance(g: DefiningGraph, u: str, v: str) -> float:
    """Edge-count distance between ``u`` and ``v``; ``inf`` across components."""
    src, dst = g.index(u), g.index(v)
    return _distances_from(g, src)[dst]


def _distances_from(g: DefiningGraph, src: int) -> list[float]:
    dist = [float("inf")] * len(g)
    dist[src] = 0
    queue = deque([src])
    while queue:
        x = queue.popleft()
        for y in bits(g.adj[x]):
            if dist[y] == float("inf"):
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def distance_table(g: DefiningGraph) -> list[list[float]]:
    return [_distances_from(g, i) for i in range(len(g))]


def is_connected(g: DefiningGraph) -> bool:
    return all(d < float("inf") for d in _distances_from(g, 0))


def _complement_components(g: DefiningGraph, mask: int) -> list[int]:
    """Connected components of the complement of the subgraph induced on ``mask``."""
    comps = []
    rest = mask
    while rest:
        start = rest & -rest
        comp = start
        frontier = start
        while frontier:
            i = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            new = mask & ~g.adj[i] & ~comp & ~(1 << i)
            comp |= new
            frontier |= new
        comps.append(comp)
        rest &= ~comp
    return comps


def join_mask_split(g: DefiningGraph, mask: int) -> tuple[int, int] | None:
    comps = _complement_components(g, mask)
    if len(comps) < 2:
        return None
    # components come out ordered by least vertex code
    first = comps[0]
    return first, mask & ~first


def join_decomposition(g: DefiningGraph, A: Iterable[str]) -> tuple[frozenset[str], frozenset[str]] | None:
    """Split ``A`` as a join ``A1 * A2`` if its induced subgraph is one.

    The first part is the complement component holding the least vertex.
    """
    mask = g.mask(A)
    if not mask:
        raise GraphError("empty vertex set")
    split = join_mask_split(g, mask)
    if split is None:
        return None
    return g.names(split[0]), g.names(split[1])


def is_join(g: DefiningGraph) -> bool:
    return join_mask_split(g, g.full_mask) is not None


@dataclass(frozen=True)
class JoinWitness:
    """Why a vertex set lies in an induced join: its own split, or a cone vertex."""

    split: tuple[frozenset[str], frozenset[str]] | None = None
    cone: str | None = None

    def to_dict(self):
        if self.split is not None:
            return {"split": [sorted(self.split[0]), sorted(self.split[1])]}
        return {"cone": self.cone}


def join_mask_witness(g: DefiningGraph, mask: int) -> JoinWitness | None:
    split = join_mask_split(g, mask)
    if split is not None:
        return JoinWitness(split=(g.names(split[0]), g.names(split[1])))
    for v in range(len(g)):
        if not mask >> v & 1 and mask & ~g.adj[v] == 0:
            return JoinWitness(cone=g.vertices[v])
    return None


def contained_in_join(g: DefiningGraph, A: Iterable[str]) -> tuple[bool, JoinWitness | None]:
    """Decide whether ``A`` lies inside some induced join subgraph.

    ``A`` lies in an induced join exactly when it is a join itself or some
    vertex outside ``A`` is adjacent to all of it.
    """
    mask = g.mask(A)
    if not mask:
        raise GraphError("empty vertex set")
    w = join_mask_witness(g, mask)
    return w is not None, w


def contained_in_star(g: DefiningGraph, A: Iterable[str]) -> tuple[bool, str | None]:
    mask = g.mask(A)
    if not mask:
        raise GraphError("empty vertex set")
    v = star_mask_witness(g, mask)
    return v is not None, (g.vertices[v] if v is not None else None)


def star_mask_witness(g: DefiningGraph, mask: int) -> int | None:
    for v in range(len(g)):
        if mask & ~g.star_mask(v) == 0:
            return v
    return None


class JoinCache:
    """Memoised join/star containment on vertex masks; scans query it heavily."""

    def __init__(self, g: DefiningGraph):
        self.graph = g
        self._join: dict[int, bool] = {}
        self._star: dict[int, bool] = {}

    def in_join(self, mask: int) -> bool:
        hit = self._join.get(mask)
        if hit is None:
            hit = self._join[mask] = bool(mask) and join_mask_witness(self.graph, mask) is not None
        return hit

    def in_star(self, mask: int) -> bool:
        hit = self._star.get(mask)
        if hit is None:
            hit = self._star[mask] = bool(mask) and star_mask_witness(self.graph, mask) is not None
        return hit


# -- four-cycles ----------------------------------------------------------

Diagonal = frozenset  # frozenset of two non-adjacent vertex names
FourCycle = frozenset  # frozenset of its two diagonals


@dataclass(frozen=True)
class FourCycleGraph:
    """The graph whose nodes are induced 4-cycles, joined when they share a diagonal."""

    nodes: tuple[FourCycle, ...]
    edges: tuple[tuple[int, int], ...]
    components: tuple[tuple[int, ...], ...]
    supports: tuple[frozenset[str], ...]

    def neighbors(self, i: int) -> list[int]:
        return [b if a == i else a for a, b in self.edges if i in (a, b)]

    def component_of(self, node: int) -> int:
        for c, members in enumerate(self.components):
            if node in members:
                return c
        raise KeyError(node)

    def node_index(self, cycle: FourCycle) -> int:
        return self.nodes.index(cycle)


def cycle_vertices(cycle: FourCycle) -> frozenset[str]:
    return frozenset().union(*cycle)


def induced_four_cycles(g: DefiningGraph) -> list[FourCycle]:
    """All induced 4-cycles, found from their diagonals and common neighbours."""
    found = set()
    n = len(g)
    for s, t in combinations(range(n), 2):
        if g.adj[s] >> t & 1:
            continue
        common = list(bits(g.adj[s] & g.adj[t]))
        for x, y in combinations(common, 2):
            if g.adj[x] >> y & 1:
                continue
            found.add(frozenset({frozenset({g.vertices[s], g.vertices[t]}),
                                 frozenset({g.vertices[x], g.vertices[y]})}))
    return sorted(found, key=lambda c: _cycle_key(g, c))


def _cycle_key(g: DefiningGraph, cycle: FourCycle):
    diags = sorted(tuple(sorted(g.index(v) for v in d)) for d in cycle)
    return tuple(diags)


def is_induced_four_cycle(g: DefiningGraph, verts: Iterable[str]) -> bool:
    verts = list(verts)
    if len(set(verts)) != 4:
        return False
    mask = g.mask(verts)
    degs = [popcount(g.adj[g.index(v)] & mask) for v in verts]
    if degs != [2, 2, 2, 2]:
        return False
    # 4 vertices, all of degree 2 in the induced graph: a 4-cycle, not two edges
    return sum(degs) == 8


def four_cycle_graph(g: DefiningGraph) -> FourCycleGraph:
    nodes = induced_four_cycles(g)
    by_diag: dict[frozenset, list[int]] = {}
    for i, cyc in enumerate(nodes):
        for d in cyc:
            by_diag.setdefault(d, []).append(i)
    edge_set = set()
    for members in by_diag.values():
        for a, b in combinations(members, 2):
            edge_set.add((min(a, b), max(a, b)))
    parent = list(range(len(nodes)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edge_set:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for i in range(len(nodes)):
        groups.setdefault(find(i), []).append(i)
    components = tuple(tuple(v) for _, v in sorted(groups.items()))
    supports = tuple(frozenset().union(*(cycle_vertices(nodes[i]) for i in comp))
                     for comp in components)
    return FourCycleGraph(tuple(nodes), tuple(sorted(edge_set)), components, supports)


def is_cfs(g: DefiningGraph, fcg: FourCycleGraph | None = None) -> bool:
    fcg = fcg or four_cycle_graph(g)
    everything = frozenset(g.vertices)
    return any(s == everything for s in fcg.supports)


# -- rank of non-adjacent pairs ------------------------------------------

@dataclass(frozen=True)
class PairRank:
    rank: int
    at_cap: bool  # the pair is rank ``cap``; larger ranks were not explored

    def __str__(self):
        return f">={self.rank}" if self.at_cap else str(self.rank)


def _nonadjacent_pairs(g: DefiningGraph, mask: int) -> list[tuple[int, int]]:
    members = list(bits(mask))
    return [(s, t) for s, t in combinations(members, 2) if not g.adj[s] >> t & 1]


def rank_levels(g: DefiningGraph, cap: int) -> list[set[tuple[int, int]]]:
    """``levels[n]`` is the set of non-adjacent pairs (as sorted code pairs) of rank ``n``.

    Level 1 holds pairs in no induced 4-cycle; level n holds pairs where every
    non-adjacent pair inside one endpoint's link sits in level n-1 (an empty
    family of such pairs counts as satisfied).  ``levels[0]`` is unused.
    """
    all_pairs = _nonadjacent_pairs(g, g.full_mask)
    link_pairs = [_nonadjacent_pairs(g, g.adj[v]) for v in range(len(g))]
    levels: list[set[tuple[int, int]]] = [set()]
    base = set()
    for s, t in all_pairs:
        common = g.adj[s] & g.adj[t]
        if not _nonadjacent_pairs(g, common):
            base.add((s, t))
    levels.append(base)
    for _ in range(2, cap + 1):
        prev = levels[-1]
        cur = set()
        for s, t in all_pairs:
            if all(p in prev for p in link_pairs[s]) or all(p in prev for p in link_pairs[t]):
                cur.add((s, t))
        levels.append(cur)
    return levels


def rank_of_pair(g: DefiningGraph, s: str, t: str, cap: int | None = None) -> PairRank:
    """Largest n <= cap for which ``(s, t)`` is a rank-n pair (0 if none)."""
    i, j = g.index(s), g.index(t)
    if i == j:
        raise GraphError("rank needs two distinct vertices")
    if g.adj[i] >> j & 1:
        raise GraphError(f"{s!r} and {t!r} are adjacent; rank is undefined")
    cap = len(g) if cap is None else cap
    if cap < 1:
        raise GraphError("cap must be positive")
    key = (min(i, j), max(i, j))
    levels = rank_levels(g, cap)
    best = 0
    for n in range(1, cap + 1):
        if key in levels[n]:
            best = n
    return PairRank(best, best == cap)


# -- DOT ----------------------------------------------------------------

def _dot_id(name: str) -> str:
    return json.dumps(name)


def graph_to_dot(g: DefiningGraph, name: str = "Gamma") -> str:
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        lines.append(f"  {_dot_id(v)};")
    for u, v in g.edges:
        lines.append(f"  {_dot_id(u)} -- {_dot_id(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def four_cycle_label(g: DefiningGraph, cycle: FourCycle) -> str:
    diags = sorted((sorted(d, key=g.index) for d in cycle), key=lambda d: [g.index(v) for v in d])
    return " | ".join(" ".join(d) for d in diags)


def four_cycle_graph_to_dot(g: DefiningGraph, fcg: FourCycleGraph) -> str:
    lines = ["graph Gamma4 {"]
    for c, comp in enumerate(fcg.components):
        support = " ".join(sorted(fcg.supports[c], key=g.index))
        for i in comp:
            label = four_cycle_label(g, fcg.nodes[i])
            lines.append(f"  n{i} [label={_dot_id(label)}, component={c}, support={_dot_id(support)}];")
    for a, b in fcg.edges:
        lines.append(f"  n{a} -- n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
