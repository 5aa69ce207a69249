"""Command-line front end.

    ordercomplex group --family pgl2 --p 3 --k 2
    ordercomplex lattice --family psl2 --p 2 --k 2 --out a5.json --dot a5.dot
    ordercomplex topology homology --in a5.json
    ordercomplex verify paper --p 3 --n 1 --out report.json
    ordercomplex verify known

Exit status: 0 pass, 1 computational failure, 2 rejected input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass

from . import __version__
from .errors import InputRejected, OrderComplexError
from .groups import DEFAULT_ELEMENT_CAP, GroupTable, build_group
from .homology import DEFAULT_SIMPLEX_CAP, elementary_collapse, order_complex, replay_collapse
from .homology import reduced_homology
from .lattice import DEFAULT_NODE_CAP, Lattice, all_subgroups
from .topology import euler_check, hall_check, iterate_reductions, mobius, quillen_reduce
from .verifier import verify_known_results, verify_theorem

EXIT_PASS, EXIT_FAIL, EXIT_REJECTED = 0, 1, 2
FAMILIES = ("pgl2", "psl2", "psl2_8_ext3", "cyclic", "elem_abelian", "dihedral", "q8", "s4", "a5")


@dataclass
class RunConfig:
    command: str
    action: str | None = None
    family: str | None = None
    p: int | None = None
    k: int | None = None
    n: int | None = None
    input: str | None = None
    out: str | None = None
    format: str = "json"
    seed: int = 0
    threads: int | None = None
    element_cap: int = DEFAULT_ELEMENT_CAP
    node_cap: int = DEFAULT_NODE_CAP
    simplex_cap: int = DEFAULT_SIMPLEX_CAP
    dot: str | None = None
    restarts: int = 8
    certificates: bool = False
    timings: bool = False

    def __post_init__(self):
        for cap in ("element_cap", "node_cap", "simplex_cap"):
            if getattr(self, cap) <= 0:
                raise InputRejected(f"--{cap.replace('_', '-')} must be positive")
        if self.threads is not None and self.threads <= 0:
            raise InputRejected("--threads must be positive")

    def echo(self) -> dict:
        # thread count and output paths do not influence results, so they stay out of reports
        d = asdict(self)
        for key in ("threads", "out", "dot", "format", "timings"):
            d.pop(key)
        return {k: v for k, v in d.items() if v is not None}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=FAMILIES)
    common.add_argument("--p", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--in", dest="input", metavar="LATTICE_JSON")
    common.add_argument("--out")
    common.add_argument("--format", choices=("json", "text", "dot"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, help="accepted for compatibility; work is sequential")
    common.add_argument("--element-cap", type=int, default=DEFAULT_ELEMENT_CAP)
    common.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
    common.add_argument("--simplex-cap", type=int, default=DEFAULT_SIMPLEX_CAP)
    common.add_argument("--restarts", type=int, default=8, help="random restarts for collapse search")
    common.add_argument("--certificates", action="store_true", help="embed full collapse certificates")
    common.add_argument("--timings", action="store_true", help="add per-stage wall-clock seconds")

    ap = argparse.ArgumentParser(prog="ordercomplex", description="Order complexes of subgroup lattices.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("group", parents=[common], help="build a group and print its class table")
    lat = sub.add_parser("lattice", parents=[common], help="enumerate the subgroup lattice")
    lat.add_argument("--dot", help="also write the Hasse diagram in DOT format")
    top = sub.add_parser("topology", parents=[common], help="Möbius, reduction, homology, collapse")
    top.add_argument("action", choices=("mobius", "reduce", "homology", "collapse"))
    ver = sub.add_parser("verify", parents=[common], help="run the verification suites")
    ver.add_argument("action", choices=("paper", "known"))
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command, action=getattr(ns, "action", None), family=ns.family, p=ns.p, k=ns.k,
        n=ns.n, input=ns.input, out=ns.out, format=ns.format, seed=ns.seed, threads=ns.threads,
        element_cap=ns.element_cap, node_cap=ns.node_cap, simplex_cap=ns.simplex_cap,
        dot=getattr(ns, "dot", None), restarts=ns.restarts, certificates=ns.certificates,
        timings=ns.timings,
    )


def _group(cfg: RunConfig) -> GroupTable:
    if cfg.family is None:
        raise InputRejected("--family is required")
    return build_group(cfg.family, cfg.p, cfg.k, cfg.n, cap=cfg.element_cap)


def _lattice(cfg: RunConfig) -> Lattice:
    if cfg.input:
        try:
            return Lattice.load(cfg.input)
        except (OSError, ValueError, KeyError) as e:
            raise InputRejected(f"cannot read lattice file {cfg.input}: {e}") from e
    return all_subgroups(_group(cfg), node_cap=cfg.node_cap)


def _envelope(cfg: RunConfig, body: dict) -> dict:
    return {"tool": "ordercomplex", "version": __version__, "config": cfg.echo(), **body}


def cmd_group(cfg: RunConfig):
    g = _group(cfg)
    classes = [{"label": c.label, "size": c.size, "element_order": c.element_order,
                "centralizer_order": c.centralizer_order, "representative": c.representative,
                "in_socle": c.representative in g.socle} for c in g.classes]
    return _envelope(cfg, {"group": {"name": g.name, "descriptor": g.descriptor, "order": g.order,
                                     "socle_order": g.socle.order, "classes": classes}}), True


def cmd_lattice(cfg: RunConfig):
    g = _group(cfg)
    l = all_subgroups(g, node_cap=cfg.node_cap)
    if cfg.dot:
        with open(cfg.dot, "w") as fh:
            fh.write(l.to_dot())
    if cfg.format == "dot":
        return l.to_dot(), True
    doc = l.to_json()
    doc["summary"] = {"nodes": len(l), "covers": len(l.covers), "group_order": g.order}
    return doc, True


def cmd_topology(cfg: RunConfig):
    l = _lattice(cfg)
    m = mobius(l)
    body: dict = {"lattice": {"nodes": len(l), "group": l.group}}
    ok = True
    if cfg.action == "mobius":
        c = order_complex(l.proper_part(), simplex_cap=cfg.simplex_cap)
        rota = euler_check(l, m, c.euler_characteristic(), strict=False)
        body["mobius"] = {"mu_1_G": m[l.bottom], "values": [m[i] for i in range(len(l))], "rota": rota.to_json()}
        ok = rota.passed
    elif cfg.action == "reduce":
        reduced, qlog = quillen_reduce(l)
        hall = hall_check(l, m, reduced, strict=False)
        final, glog = iterate_reductions(reduced, l, restarts=cfg.restarts, seed=cfg.seed)
        body["reduce"] = {"quillen": qlog.to_json(), "hall": hall.to_json(), "removals": glog.to_json(),
                          "remaining": list(final.labels)}
        ok = hall.passed
    elif cfg.action == "homology":
        c = order_complex(l.proper_part(), simplex_cap=cfg.simplex_cap)
        h = reduced_homology(c, restarts=cfg.restarts, seed=cfg.seed)
        body["homology"] = {"simplices": c.counts(), **h.to_json()}
    else:
        c = order_complex(l.proper_part(), simplex_cap=cfg.simplex_cap)
        cert, term = elementary_collapse(c, restarts=cfg.restarts, seed=cfg.seed)
        replay_collapse(c, cert)
        out = {"simplices": c.counts(), "terminal": cert.terminal_counts, "point": cert.contractible,
               "pairs": len(cert.pairs), "replayed": True}
        if cfg.certificates:
            out["certificate"] = cert.to_json(c)
        body["collapse"] = out
    return _envelope(cfg, body), ok


def cmd_verify(cfg: RunConfig):
    if cfg.action == "known":
        rep = verify_known_results(restarts=cfg.restarts, seed=cfg.seed)
        return _envelope(cfg, {k: v for k, v in rep.items() if k not in ("tool", "version")}), rep["passed"]
    if cfg.p is None or cfg.n is None:
        raise InputRejected("verify paper needs --p and --n")
    rep = verify_theorem(cfg.p, cfg.n, element_cap=cfg.element_cap, node_cap=cfg.node_cap,
                         seed=cfg.seed, restarts=cfg.restarts, certificates=cfg.certificates)
    doc = rep.to_json(include_timings=cfg.timings)
    doc.pop("tool"), doc.pop("version")
    doc = _envelope(cfg, doc)
    if not rep.passed and "checks" in rep.stages:
        doc["first_failing_check"] = next(k for k, v in rep.stages["checks"].items() if not v)
    return doc, rep.passed


COMMANDS = {"group": cmd_group, "lattice": cmd_lattice, "topology": cmd_topology, "verify": cmd_verify}


def render_text(doc, indent: int = 0) -> str:
    """Plain indented rendering of a JSON report."""
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for k, v in doc.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(doc, list):
        for v in doc:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v)}")
    else:
        lines.append(pad + json.dumps(doc))
    return "\n".join(lines)


def _emit(cfg: RunConfig, doc):
    if isinstance(doc, str):
        text = doc
    elif cfg.format == "text":
        text = render_text(doc)
    else:
        text = json.dumps(doc, indent=1, sort_keys=True)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_PASS if e.code == 0 else EXIT_REJECTED
    t0 = time.perf_counter()
    try:
        cfg = config_from_args(ns)
        doc, ok = COMMANDS[cfg.command](cfg)
    except InputRejected as e:
        print(f"rejected: {e}", file=sys.stderr)
        return EXIT_REJECTED
    except OrderComplexError as e:
        print(f"failed: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL
    _emit(cfg, doc)
    if cfg.timings:
        print(f"wall-clock: {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return EXIT_PASS if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
