"""Command line entry point: ``knotasym <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, fields
from fractions import Fraction

from . import flow, gauss, gluegraphs, harness, kontsevich, torus
from .algebra import fstr
from .report import report_emit


@dataclass
class HarnessConfig:
    degree: int = 3
    pmax: int = 60
    seed: int = 0
    format: str = "csv"
    max_arrows: int = 3
    max_edges: int = 3
    graph_budget: int = 4
    x0: str = "1/7"
    count: int = 8

    @classmethod
    def load(cls, path: str) -> "HarnessConfig":
        """Read ``key = value`` lines; ``#`` starts a comment, section headers are ignored."""
        cfg = cls()
        types = {f.name: f.type for f in fields(cls)}
        with open(path, encoding="utf-8") as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line or line.startswith("["):
                    continue
                if "=" not in line:
                    raise ValueError(f"bad config line: {raw.rstrip()}")
                k, v = (s.strip() for s in line.split("=", 1))
                v = v.strip("\"'")
                if k not in types:
                    raise ValueError(f"unknown config key {k!r}")
                setattr(cfg, k, int(v) if types[k] in ("int", int) else v)
        return cfg


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj, out):
    _emit(json.dumps(obj, indent=1, sort_keys=True) + "\n", out)


def cmd_pairing(a, cfg):
    gamma = gauss.PATTERNS[a.pattern] if a.pattern in gauss.PATTERNS else gauss.GaussDiagram.from_json(a.pattern)
    if a.gauss:
        with open(a.gauss, encoding="utf-8") as fh:
            g = gauss.GaussDiagram.from_json(json.load(fh))
    else:
        g = gauss.torus_knot_diagram(a.p, a.q)
    _dump({"pattern": gamma.to_json(), "n_arrows": g.n_arrows, "pairing": gauss.pairing(gamma, g)}, a.out)


def cmd_sweep(a, cfg):
    fam = harness.family_from_name(a.family, cfg.pmax)
    if a.invariant.startswith("pairing:"):
        rep = harness.sweep_pairing(a.invariant.split(":", 1)[1], fam, cfg.max_arrows)
    else:
        rep = harness.sweep_invariant(a.invariant, fam, a.n)
    _emit(report_emit(rep, cfg.format), a.out)


def cmd_torus(a, cfg):
    if a.action == "poly":
        k = (a.p, a.q)
        obj = {"alexander": torus.alexander_torus(k).to_json(), "jones": torus.jones_torus(k).to_json(),
               "v2": fstr(torus.v2_from_alexander(k))}
        _dump(obj, a.out)
        return
    fam = harness.family_from_name(a.family, cfg.pmax)
    rep = harness.asymptotic_coefficient_limits(fam, a.which, a.order)
    _emit(report_emit(rep, cfg.format), a.out)


def cmd_flow(a, cfg):
    lam = flow.RotationNumber.parse(a.lam)
    seq = flow.closure_times(lam, Fraction(cfg.x0), count=cfg.count)
    lo, hi = flow.asymptotic_signature(lam)
    _dump({"lambda": a.lam, "x0": fstr(seq.x0), "closures": seq.to_json(),
           "sigma_enclosure": [fstr(lo), fstr(hi)]}, a.out)


def cmd_kontsevich(a, cfg):
    D = cfg.degree
    if a.action == "torus":
        p = None if a.symbolic else a.p
        q = None if a.symbolic else a.q
        z = kontsevich.z_torus(D, p, q)
        _dump(z.to_json(), a.out)
    else:
        rep = kontsevich.scaled_diagonal_limit(D, strict=False)
        lim = kontsevich.asymptotic_limit(D)
        _dump({"degree": D, "limit": rep.limit.to_json(), "asymptotic_limit": lim.to_json(),
               "agree": rep.limit == lim, "positive_power_terms": len(rep.divergent),
               "vanishing_terms": len(rep.vanishing)}, a.out)


def cmd_trees(a, cfg):
    if a.action == "expand":
        res = gluegraphs.tree_expansion(cfg.max_edges)
        _dump({"global_factor": res["global_factor"], "trees": [t.to_json() for t in res["trees"]]}, a.out)
    elif a.action == "verify-sub":
        _dump(gluegraphs.verify_eq_sub(cfg.degree).to_dict(), a.out)
    else:
        _dump(gluegraphs.verify_eq_ntor(cfg.degree), a.out)


def build_parser() -> argparse.ArgumentParser:
    glob = argparse.ArgumentParser(add_help=False)
    glob.add_argument("--out", default=None, help="output file (default stdout)")
    glob.add_argument("--format", choices=("csv", "json"), default=None)
    glob.add_argument("--degree", type=int, default=None)
    glob.add_argument("--pmax", type=int, default=None)
    glob.add_argument("--seed", type=int, default=None)
    glob.add_argument("--max-edges", dest="max_edges", type=int, default=None)
    glob.add_argument("--config", default=None, help="key=value file with budgets")
    glob.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="knotasym", parents=[glob],
                                 description="Asymptotic finite-type invariants of torus knots")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("pairing", parents=[glob], help="Gauss diagram pairing")
    sp.add_argument("--pattern", default="casson")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--q", type=int, default=3)
    sp.add_argument("--gauss", default=None, help="JSON Gauss diagram instead of T(p,q)")
    sp.set_defaults(fn=cmd_pairing)

    sp = sub.add_parser("sweep", parents=[glob], help="convergence sweep of an invariant")
    sp.add_argument("--invariant", default="casson",
                    help="casson | writhe | alexander | jones | pairing:<pattern>")
    sp.add_argument("--family", default="succ", help="succ | half | golden | silver | cf:...")
    sp.add_argument("--n", type=int, default=None, help="h-degree for polynomial coefficients")
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser("torus", parents=[glob], help="torus knot polynomials and their limits")
    sp.add_argument("action", choices=("asym", "poly"))
    sp.add_argument("--which", choices=("alexander", "jones"), default="alexander")
    sp.add_argument("--family", default="succ")
    sp.add_argument("--order", type=int, default=4)
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--q", type=int, default=3)
    sp.set_defaults(fn=cmd_torus)

    sp = sub.add_parser("flow", parents=[glob], help="closure times of the rotation template")
    sp.add_argument("action", choices=("closures",), nargs="?", default="closures")
    sp.add_argument("--lam", default="golden")
    sp.add_argument("--count", type=int, default=None)
    sp.add_argument("--x0", default=None)
    sp.set_defaults(fn=cmd_flow)

    sp = sub.add_parser("kontsevich", parents=[glob], help="wheeled Kontsevich integral")
    sp.add_argument("action", choices=("torus", "limit"))
    sp.add_argument("--symbolic", action="store_true")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--q", type=int, default=3)
    sp.set_defaults(fn=cmd_kontsevich)

    sp = sub.add_parser("trees", parents=[glob], help="gluing graphs and tree expansion")
    sp.add_argument("action", choices=("expand", "verify-sub", "verify-ntor"))
    sp.set_defaults(fn=cmd_trees)
    return ap


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(message)s")
    cfg = HarnessConfig.load(a.config) if a.config else HarnessConfig()
    for k in ("degree", "pmax", "seed", "format", "max_edges"):
        v = getattr(a, k, None)
        if v is not None:
            setattr(cfg, k, v)
    for k in ("count", "x0"):
        v = getattr(a, k, None)
        if v is not None:
            setattr(cfg, k, v)
    a.fn(a, cfg)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
