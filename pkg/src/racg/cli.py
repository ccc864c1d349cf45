"""Command-line entry point.

Exit status: 0 on success, 2 when a scan found a witness, 1 on errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import families
from .geometry import BallTooLarge, CayleyBall, SubgroupDistance, divergence_sweep, estimates_to_csv
from .graph import (GraphError, contained_in_join, contained_in_star, four_cycle_graph, four_cycle_graph_to_dot,
                    four_cycle_label, graph_to_dot, is_cfs, join_decomposition, load_graph, rank_of_pair)
from .subgroups import (FinGenSubgroup, ParabolicSpec, classify_collection, classify_parabolic, join_busting_estimate,
                        join_free_scan, malnormal_preconditions, malnormality_scan, reflection_scan, star_free_scan)
from .vkd import (DiagramError, build_diagram, build_reducing_diagram, comb, diagram_from_dict, label_read, prune,
                  validate)
from .words import WordError, csupp, cyclic_decompose, is_finite_order, normalize, support

WITNESS = 2


class CliError(Exception):
    pass


def _read_doc(path: str | None, field: str):
    if path is None or path == "-":
        text = sys.stdin.read()
        source = "stdin"
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError(f"{field}: cannot read {path}: {exc.strerror}") from None
        source = path
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{field}: {source} is not valid JSON ({exc.msg})") from None


def _graph(args):
    doc = _read_doc(getattr(args, "graph", None), "--graph")
    try:
        return load_graph(doc), doc
    except (GraphError, KeyError, TypeError) as exc:
        raise CliError(f"--graph: {exc}") from None


def _lambda(text: str) -> list[str]:
    return [v for v in text.replace(",", " ").split() if v]


def _subgroup(args):
    """A subgroup from --subgroup, or from --graph with --gen words or a --lambda set."""
    if args.subgroup:
        doc = _read_doc(args.subgroup, "--subgroup")
        graph = load_graph(doc)
        gens = doc.get("generators") or []
    else:
        graph, doc = _graph(args)
        gens = doc.get("generators", []) if isinstance(doc, dict) else []
    if args.gen:
        gens = args.gen
    elif args.lam:
        gens = _lambda(args.lam[0])
    if not gens:
        raise CliError("--subgroup: no generators given (use a subgroup document, --gen or --lambda)")
    return FinGenSubgroup(graph, gens)


def _rho(text: str) -> Fraction:
    try:
        rho = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise CliError(f"--rho: {text!r} is not a fraction p/q") from None
    if not 0 < rho <= 1:
        raise CliError(f"--rho: {text} is not in (0, 1]")
    return rho


def _range_list(text: str, field: str) -> list[int]:
    out = []
    try:
        for part in text.split(","):
            if "-" in part:
                lo, hi = part.split("-")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise CliError(f"{field}: cannot parse {text!r}") from None
    if any(x < 0 for x in out):
        raise CliError(f"{field}: values must be nonnegative")
    return out


def _nonneg(name):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name}: {text!r} is not an integer") from None
        if v < 0:
            raise argparse.ArgumentTypeError(f"{name}: must be nonnegative")
        return v
    return parse


def _emit(obj, fmt: str = "json"):
    if isinstance(obj, str):
        sys.stdout.write(obj)
    else:
        sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


# -- commands -----------------------------------------------------------------

def cmd_reduce(args):
    g, _ = _graph(args)
    nf = normalize(g, args.word)
    _emit({"word": args.word, "normal_form": str(nf), "length": len(nf)})


def cmd_csupp(args):
    g, _ = _graph(args)
    nf = normalize(g, args.word)
    dec = cyclic_decompose(nf)
    _emit({"normal_form": str(nf), "support": sorted(support(nf), key=g.index),
           "conjugator": str(dec.conjugator), "core": str(dec.core), "csupp": sorted(csupp(nf), key=g.index)})


def cmd_order(args):
    g, _ = _graph(args)
    nf = normalize(g, args.word)
    finite = is_finite_order(nf)
    order = 1 if not nf.codes else (2 if finite else "infinite")
    _emit({"normal_form": str(nf), "finite": finite, "order": order})


def _spec(g, lam_text, conj):
    lam = _lambda(lam_text)
    if not lam:
        raise CliError("--lambda: empty vertex set")
    return ParabolicSpec.of(g, lam, conj or "")


def cmd_classify_parabolic(args):
    g, _ = _graph(args)
    if not args.lam:
        raise CliError("--lambda: required")
    _emit(classify_parabolic(_spec(g, args.lam[0], args.conjugator)).to_dict())


def cmd_classify_collection(args):
    g, _ = _graph(args)
    if not args.lam:
        raise CliError("--lambda: give at least one vertex set")
    _emit(classify_collection([_spec(g, t, None) for t in args.lam]).to_dict())


def cmd_graph(args):
    g, _ = _graph(args)
    if args.action == "joins":
        A = _lambda(args.lam[0]) if args.lam else list(g.vertices)
        split = join_decomposition(g, A)
        inj, wit = contained_in_join(g, A)
        ins, cone = contained_in_star(g, A)
        _emit({"set": sorted(A, key=g.index),
               "join_decomposition": None if split is None else [sorted(p, key=g.index) for p in split],
               "contained_in_join": inj, "join_witness": wit.to_dict() if wit else None,
               "contained_in_star": ins, "star_witness": cone})
    elif args.action == "cfs":
        fcg = four_cycle_graph(g)
        if args.format == "dot":
            _emit(four_cycle_graph_to_dot(g, fcg))
            return
        _emit({"cfs": is_cfs(g, fcg), "four_cycles": [four_cycle_label(g, n) for n in fcg.nodes],
               "edges": [list(e) for e in fcg.edges], "components": [list(c) for c in fcg.components],
               "supports": [sorted(s, key=g.index) for s in fcg.supports]})
    elif args.action == "rank":
        pair = _lambda(" ".join(args.pair or []))
        if len(pair) != 2:
            raise CliError("--pair: give exactly two vertices")
        res = rank_of_pair(g, pair[0], pair[1], args.cap)
        _emit({"pair": pair, "rank": res.rank, "at_cap": res.at_cap, "display": str(res)})
    elif args.action == "show":
        _emit(graph_to_dot(g) if args.format == "dot" else g.to_document())


def cmd_scan(args):
    H = _subgroup(args)
    L = args.depth
    if args.kind == "join-free":
        rep = join_free_scan(H, L)
    elif args.kind == "star-free":
        rep = star_free_scan(H, L)
    elif args.kind == "reflections":
        rep = reflection_scan(H, L)
    elif args.kind == "join-busting":
        _emit(join_busting_estimate(H, L).to_dict())
        return 0
    else:
        pre = malnormal_preconditions(H, L)
        scan = malnormality_scan(H, args.lg or L, args.lh or L)
        _emit({"preconditions": pre.to_dict(), "conjugation_scan": scan.to_dict()})
        return WITNESS if pre.found or scan.found else 0
    _emit(rep.to_dict())
    return WITNESS if rep.found else 0


def _parse_slice(text: str, n: int) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise CliError(f"--range: expected lo:hi, got {text!r}") from None
    if not 0 <= lo <= hi <= n:
        raise CliError(f"--range: [{lo}, {hi}) is outside a boundary of length {n}")
    return lo, hi


def _random_identity(g, length: int, rng: random.Random) -> list[str]:
    half = [rng.choice(g.vertices) for _ in range(length // 2)]
    return half + half[::-1]


def cmd_vkd(args):
    g, _ = _graph(args)
    if args.action == "validate":
        doc = _read_doc(args.diagram, "--diagram")
        ok, why = validate(diagram_from_dict(g, doc))
        _emit({"valid": ok, "violation": why})
        return 0 if ok else WITNESS
    if args.action == "reduce":
        if not args.word:
            raise CliError("--word: give the words to multiply")
        rd = build_reducing_diagram(g, args.word)
        if args.format == "dot":
            _emit(rd.diagram.to_dot(rd.tags))
        else:
            _emit(rd.to_dict())
        return 0
    if args.random is not None:
        word = _random_identity(g, args.random, random.Random(args.seed))
    elif args.word:
        word = " ".join(args.word)
    else:
        raise CliError("--word: required")
    d = build_diagram(g, word)
    if args.action == "build":
        _emit(d.to_dot() if args.format == "dot" else d.to_dict())
        return 0
    lo, hi = _parse_slice(args.range or f"0:{len(d.boundary)}", len(d.boundary))
    res = comb(d, lo, hi)
    pr = prune(res.diagram, lo, hi)
    if args.format == "dot":
        _emit(res.diagram.to_dot())
        return 0
    _emit({"combed_word": res.word, "swaps": res.swaps, "moves": res.moves, "diagram": res.diagram.to_dict(),
           "pruned_word": pr.word, "label_read": label_read(res.diagram, lo, hi)})
    return 0


def cmd_ball(args):
    g, _ = _graph(args)
    b = CayleyBall(g, args.radius)
    if args.format == "dot":
        marked = []
        if args.lam and args.r is not None:
            dist = SubgroupDistance(ParabolicSpec.special(g, _lambda(args.lam[0])))
            marked = [x for x in b.elements if dist(x) == args.r]
        _emit(b.to_dot(marked))
        return
    spheres = [0] * (args.radius + 1)
    for x in b.elements:
        spheres[len(x)] += 1
    _emit({"radius": args.radius, "size": len(b), "sphere_sizes": spheres})


def cmd_divergence(args):
    g, doc = _graph(args)
    rho = _rho(args.rho)
    rs = _range_list(args.r if args.r is not None else "1", "--r")
    if args.lam:
        H = ParabolicSpec.special(g, _lambda(args.lam[0]))
    elif args.gen or args.subgroup:
        H = _subgroup_from(g, args, doc)
    else:
        H = None
    if H is not None and args.n < 2:
        raise CliError("--n: must be at least 2")
    if any(r < 1 for r in rs):
        raise CliError("--r: must be at least 1")
    ests = divergence_sweep(g, H, args.n, rho, rs, args.radius)
    if args.format == "csv":
        _emit(estimates_to_csv(ests))
    else:
        _emit([e.to_dict() for e in ests])


def _subgroup_from(g, args, doc):
    if args.gen:
        return FinGenSubgroup(g, args.gen)
    sub = _read_doc(args.subgroup, "--subgroup")
    if not isinstance(sub, dict) or not sub.get("generators"):
        raise CliError("--subgroup: document has no generators")
    return FinGenSubgroup(g, sub["generators"])


def cmd_family(args):
    try:
        doc = families.family_document(args.name, d=args.d, p=args.p)
    except GraphError as exc:
        raise CliError(f"--{'d' if args.name == 'omega' else 'p'}: {exc}") from None
    if args.format == "dot":
        _emit(graph_to_dot(load_graph(doc)))
    else:
        _emit(doc)


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", default="-", help="graph or subgroup document (default: stdin)")
    common.add_argument("--format", choices=["json", "csv", "dot"], default="json")
    common.add_argument("--seed", type=int, default=0)

    sub_opts = argparse.ArgumentParser(add_help=False)
    sub_opts.add_argument("--subgroup", help="subgroup document with graph and generators")
    sub_opts.add_argument("--gen", action="append", help="generator word (repeatable)")
    sub_opts.add_argument("--lambda", dest="lam", action="append", help='vertex set such as "a,c" (repeatable)')

    p = argparse.ArgumentParser(prog="racg", description="Right-angled Coxeter group toolkit")
    sp = p.add_subparsers(dest="command", required=True)

    for name, fn in (("reduce", cmd_reduce), ("csupp", cmd_csupp), ("order", cmd_order)):
        q = sp.add_parser(name, parents=[common])
        q.add_argument("--word", required=True)
        q.set_defaults(func=fn)

    q = sp.add_parser("classify-parabolic", parents=[common])
    q.add_argument("--lambda", dest="lam", action="append")
    q.add_argument("--conjugator", default="")
    q.set_defaults(func=cmd_classify_parabolic)

    q = sp.add_parser("classify-collection", parents=[common])
    q.add_argument("--lambda", dest="lam", action="append")
    q.set_defaults(func=cmd_classify_collection)

    q = sp.add_parser("graph", parents=[common])
    q.add_argument("action", choices=["joins", "cfs", "rank", "show"])
    q.add_argument("--lambda", dest="lam", action="append")
    q.add_argument("--pair", nargs="+")
    q.add_argument("--cap", type=_nonneg("--cap"))
    q.set_defaults(func=cmd_graph)

    q = sp.add_parser("scan", parents=[common, sub_opts])
    q.add_argument("kind", choices=["join-free", "star-free", "reflections", "malnormal", "join-busting"])
    q.add_argument("--depth", type=_nonneg("--depth"), default=3)
    q.add_argument("--lg", type=_nonneg("--lg"))
    q.add_argument("--lh", type=_nonneg("--lh"))
    q.set_defaults(func=cmd_scan)

    q = sp.add_parser("vkd", parents=[common])
    q.add_argument("action", choices=["build", "validate", "comb", "reduce"])
    q.add_argument("--word", action="append", help="word (repeat for reduce)")
    q.add_argument("--diagram", help="diagram document for validate")
    q.add_argument("--range", help="lo:hi boundary positions for comb")
    q.add_argument("--random", type=_nonneg("--random"), help="use a random identity word of this length")
    q.set_defaults(func=cmd_vkd)

    q = sp.add_parser("ball", parents=[common])
    q.add_argument("--radius", type=_nonneg("--radius"), required=True)
    q.add_argument("--lambda", dest="lam", action="append")
    q.add_argument("--r", type=_nonneg("--r"))
    q.set_defaults(func=cmd_ball)

    q = sp.add_parser("divergence", parents=[common, sub_opts])
    q.add_argument("--radius", type=_nonneg("--radius"), required=True)
    q.add_argument("--r", help="scale, list or range such as 1-3")
    q.add_argument("--n", type=_nonneg("--n"), default=2)
    q.add_argument("--rho", default="1")
    q.set_defaults(func=cmd_divergence)

    q = sp.add_parser("family", parents=[common])
    q.add_argument("name", choices=list(families.FAMILIES))
    q.add_argument("--d", type=_nonneg("--d"))
    q.add_argument("--p", type=_nonneg("--p"))
    q.set_defaults(func=cmd_family)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors must not look like "witness found"
        return 1 if exc.code else 0
    try:
        return args.func(args) or 0
    except (CliError, GraphError, WordError, DiagramError, ValueError, BallTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
