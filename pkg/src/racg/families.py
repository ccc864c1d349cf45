"""Named graphs and subgroups: the 7-vertex example carrying a free join-free
subgroup of rank two, and the families ``omega(d)`` and ``gamma(p)`` used for
divergence of parabolic-free subgroups.

Vertex names use underscores for indices (``a_0``, ``b_3``, ``t_1``).
"""

from __future__ import annotations

from .graph import DefiningGraph, GraphError
from .subgroups import FinGenSubgroup
from .words import NormalForm, reduce_codes

FIGURE1_VERTICES = ["a", "b", "c", "d", "t", "d1", "a1"]
FIGURE1_EDGES = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "t"), ("t", "a"), ("a", "d1"),
                 ("d1", "c"), ("b", "a1"), ("a1", "d"), ("b", "d1"), ("c", "a1")]
FIGURE1_GENERATORS = ["a a1 d d1 a a1", "d d1 a a1 d d1"]


def figure1_graph() -> DefiningGraph:
    return DefiningGraph(FIGURE1_VERTICES, FIGURE1_EDGES)


def figure1_subgroup() -> FinGenSubgroup:
    """The subgroup generated by ``(a a1)(d d1)(a a1)`` and ``(d d1)(a a1)(d d1)``."""
    return FinGenSubgroup(figure1_graph(), FIGURE1_GENERATORS)


def _omega_parts(d: int):
    verts = ["a_0", "a_1", "b_0", "b_1", "c"]
    verts += [f"b_{j}" for j in range(2, d + 1)]
    verts += [f"t_{i}" for i in range(1, d - 1)]
    verts += [f"a_{j}" for j in range(3, d + 1)]
    verts += [f"s_{i}" for i in range(1, d - 1)]
    edges = [("b_1", "a_0"), ("a_0", "a_1"), ("a_1", "b_0"), ("b_0", "b_1"),
             ("b_1", "b_2"), ("b_2", "a_1")]
    for i in range(1, d - 1):
        edges += [("a_0", f"t_{i}"), ("b_0", f"t_{i}"), (f"t_{i}", f"b_{i + 2}")]
    edges += [(f"b_{j}", f"b_{j + 1}") for j in range(2, d)]
    for i in range(1, d - 1):
        edges += [("a_0", f"s_{i}"), ("b_0", f"s_{i}"), (f"s_{i}", f"a_{i + 2}")]
    edges.append(("a_3", "b_2"))
    edges += [(f"a_{j}", f"a_{j + 1}") for j in range(3, d)]
    edges += [("c", "b_1"), ("c", "a_1")]
    return verts, edges


def omega(d: int) -> DefiningGraph:
    """The graph with a central square a_0 a_1 b_0 b_1, an apex ``c`` over ``a_1, b_1``
    and two fans of length ``d``: ``t_i, b_j`` on one side and ``s_i, a_j`` on the other."""
    if d < 3:
        raise GraphError("omega needs d >= 3")
    verts, edges = _omega_parts(d)
    return DefiningGraph(verts, edges)


def gamma(p: int) -> DefiningGraph:
    """The right half of ``omega``: central square plus the ``t``/``b`` fan up to ``b_p``."""
    if p < 2:
        raise GraphError("gamma needs p >= 2")
    keep = {"a_0", "a_1", "b_0", "b_1"} | {f"b_{j}" for j in range(2, p + 1)} | {f"t_{i}" for i in range(1, p)}
    big = omega(max(p + 1, 3))
    return big.induced(keep)


def named_subgroup(d: int, m: int) -> FinGenSubgroup:
    """``<c, a_m, b_m>`` for ``m >= 3`` and ``<c, s_1, t_1>`` for ``m = 2``."""
    if d < 3:
        raise GraphError("omega needs d >= 3")
    if not 2 <= m <= d:
        raise GraphError(f"m must lie in [2, {d}]")
    gens = ["c", "s_1", "t_1"] if m == 2 else ["c", f"a_{m}", f"b_{m}"]
    return FinGenSubgroup(omega(d), gens)


def retraction(big: DefiningGraph, small: DefiningGraph):
    """The homomorphism fixing the vertices of ``small`` and killing every other vertex."""
    keep = {big.index(v): small.index(v) for v in small.vertices if v in big._index}

    def phi(g: NormalForm) -> NormalForm:
        return NormalForm(small, reduce_codes(small, [keep[c] for c in g.codes if c in keep]))

    return phi


FAMILIES = ("figure1", "omega", "gamma")


def family_document(name: str, d: int | None = None, p: int | None = None) -> dict:
    """Graph document plus its named subgroups, in the shape the loaders accept."""
    if name == "figure1":
        g = figure1_graph()
        return {"graph": g.to_document(), "generators": list(FIGURE1_GENERATORS),
                "subgroups": {"H": list(FIGURE1_GENERATORS)}}
    if name == "omega":
        if d is None:
            raise GraphError("omega needs --d")
        g = omega(d)
        subs = {f"H_{d}^{m}": [str(x) for x in named_subgroup(d, m).generators] for m in range(2, d + 1)}
        return {"graph": g.to_document(), "generators": subs[f"H_{d}^{d}"], "subgroups": subs}
    if name == "gamma":
        if p is None:
            raise GraphError("gamma needs --p")
        g = gamma(p)
        return {"graph": g.to_document(), "generators": [], "subgroups": {}}
    raise GraphError(f"unknown family {name!r}")
