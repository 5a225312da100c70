"""Command-line front end: ``cover <command> <scenario-file> [--json] [--out PATH]``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from .abgrp import FgAbGroup, NotExact
from .congruence import InvalidHypotheses
from .decomp import DecompositionFailure
from .extclass import ExtensionClass, check_divisibility_vanishing, corollary_conditions
from .pipeline import MissingInput, Pipeline
from .scenario import Scenario, SchemaError, SemanticError, load
from .topology import ExactnessFailure, NotInN, extension_splits

FORMAT_VERSION = 1
EXIT_OK, EXIT_FAILED, EXIT_SCHEMA, EXIT_SEMANTIC, EXIT_REJECTED = 0, 1, 2, 3, 4

COMPUTATION_ERRORS = (NotInN, DecompositionFailure, InvalidHypotheses, ExactnessFailure, NotExact, MissingInput)


@dataclass
class Report:
    lines: list[str] = field(default_factory=list)
    payload: dict[str, Any] = field(default_factory=dict)

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"

    def json(self) -> str:
        return json.dumps({"format_version": FORMAT_VERSION, **self.payload}, sort_keys=True, indent=2) + "\n"


def _group(G: FgAbGroup) -> dict:
    return G.to_json()


def _class_payload(cls: ExtensionClass) -> dict:
    return {
        "ambient": _group(cls.ambient),
        "coords": list(cls.coords),
        "zero": cls.is_zero,
        "terms": [list(t) for t in cls.terms()],
    }


def _describe(cls: ExtensionClass) -> str:
    if cls.is_zero:
        return "0"
    return " + ".join(f"{c}*[h{u}]⊗[k{v}]" for c, u, v in cls.terms())


def cmd_validate(sc: Scenario) -> Report:
    bd = sc.bd
    r = Report()
    r.lines += [
        f"scenario {sc.name}: valid",
        f"G = {bd.G}, k = {bd.k}, m = {list(bd.m)}",
        f"character orders: {list(bd.d)}",
        f"A = {sc.pic.A}, H2 = {sc.coh.H2}",
    ]
    r.payload = {
        "command": "validate",
        "scenario": sc.name,
        "valid": True,
        "G": _group(bd.G),
        "k": bd.k,
        "m": list(bd.m),
        "g": [list(x) for x in bd.g],
        "character_orders": list(bd.d),
        "components": bd.components(),
        "A": _group(sc.pic.A),
        "H2": _group(sc.coh.H2),
    }
    return r


def cmd_kernel(sc: Scenario) -> Report:
    dg = Pipeline(sc).deck
    kr = dg.kernel
    r = Report()
    r.lines += [f"N = {kr.N}", f"K = {kr.K}", f"G~ = {dg.Gtilde}"]
    r.payload = {
        "command": "kernel",
        "scenario": sc.name,
        "N": _group(kr.N),
        "N_generators": [list(t) for t in kr.N_gens],
        "K": _group(kr.K),
        "Gtilde": _group(dg.Gtilde),
    }
    return r


def cmd_gtilde(sc: Scenario) -> Report:
    dg = Pipeline(sc).deck
    splits = extension_splits(dg)
    r = Report()
    r.lines += [
        f"G~ = {dg.Gtilde}",
        f"lifted inertia generators: {[list(x) for x in dg.gtilde]}",
        f"0 -> K -> G~ -> G -> 0 splits: {splits}",
    ]
    r.payload = {
        "command": "gtilde",
        "scenario": sc.name,
        "Gtilde": _group(dg.Gtilde),
        "gtilde": [list(x) for x in dg.gtilde],
        "K": _group(dg.kernel.K),
        "inc_K": [list(x) for x in dg.inc_K.images()],
        "proj_G": [list(x) for x in dg.proj_G.images()],
        "splits": splits,
    }
    return r


def cmd_decompose(sc: Scenario) -> Report:
    bd, pic, dec, refined = Pipeline(sc).decomposition
    r = Report()
    if refined:
        r.lines.append(f"character generators refined to prime-power orders {list(bd.d)}")
    r.lines.append(f"A = {pic.A}")
    for l, (Ml, o) in enumerate(zip(dec.M, dec.orders)):
        r.lines.append(f"M{l} = {list(Ml)} (order {o or 'inf'}), column {list(dec.column(l))}")
    r.payload = {
        "command": "decompose",
        "scenario": sc.name,
        "A": _group(pic.A),
        "refined": refined,
        "character_orders": list(bd.d),
        "M": [list(x) for x in dec.M],
        "orders": list(dec.orders),
        "C": [list(row) for row in dec.C],
    }
    return r


def cmd_class(sc: Scenario) -> Report:
    pl = Pipeline(sc)
    xi = pl.xi()
    r = Report()
    r.lines += [f"K = {pl.deck.kernel.K}", f"H2 (x) K = {xi.ambient}", f"xi = {_describe(xi)}"]
    r.payload = {"command": "class", "scenario": sc.name, "K": _group(pl.deck.kernel.K), "xi": _class_payload(xi)}
    if sc.coh.restriction is not None:
        kappa = pl.kappa()
        r.lines.append(f"restricted to H2(Z/{sc.pi1_cyclic}, K): {list(kappa)}")
        r.payload["kappa"] = list(kappa)
    return r


def cmd_icf(sc: Scenario) -> Report:
    pl = Pipeline(sc)
    icf = pl.icf()
    consistent = pl.consistent()
    div = check_divisibility_vanishing(sc.bd, sc.pic, sc.coh, pl.deck)
    r = Report()
    r.lines += [
        f"H2 (x) G~ = {icf.ambient}",
        f"icf = {_describe(icf)}",
        f"(id (x) inc_K)(xi) == icf: {consistent}",
        f"all c1(D_j) divisible by m_j: {div.hypothesis_holds}",
    ]
    r.payload = {
        "command": "icf",
        "scenario": sc.name,
        "icf": _class_payload(icf),
        "consistent": consistent,
        "divisibility": {"divisible": div.divisible, "hypothesis_holds": div.hypothesis_holds,
                         "icf_zero": div.icf_zero},
    }
    if sc.pi1_cyclic is not None:
        rep = corollary_conditions(FgAbGroup.cyclic(sc.pi1_cyclic), sc.bd, pl.deck)
        r.lines.append(f"H2(pi1, K) -> H2(pi1, G~) injective by a sufficient condition: {rep.i_injective_guaranteed}")
        r.payload["injectivity"] = {
            "hom_surjective": rep.hom_surjective,
            "splits": rep.splits,
            "hom_to_G_trivial": rep.hom_to_G_trivial,
            "guaranteed": rep.i_injective_guaranteed,
        }
    return r


def cmd_realize(sc: Scenario) -> Report:
    pl = Pipeline(sc)
    ext = pl.realize()
    r = Report()
    r.lines += [
        f"kappa = {list(pl.kappa())} in K/{sc.pi1_cyclic}K",
        f"pi1(Y) = {ext.E}",
        f"split: {ext.splits}",
    ]
    r.payload = {
        "command": "realize",
        "scenario": sc.name,
        "n": sc.pi1_cyclic,
        "kappa": list(pl.kappa()),
        "pi1_Y": _group(ext.E),
        "splits": ext.splits,
    }
    return r


COMMANDS: dict[str, Callable[[Scenario], Report]] = {
    "validate": cmd_validate,
    "kernel": cmd_kernel,
    "gtilde": cmd_gtilde,
    "decompose": cmd_decompose,
    "class": cmd_class,
    "icf": cmd_icf,
    "realize": cmd_realize,
}


def run_command(cmd: str, sc: Scenario) -> Report:
    if cmd not in COMMANDS:
        raise ValueError(f"unknown command {cmd!r}")
    return COMMANDS[cmd](sc)


def _emit(report: Report, as_json: bool, out: str | None) -> None:
    text = report.json() if as_json else report.text()
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _errors(kind: str, errors: list[str], as_json: bool, code: int) -> int:
    if as_json:
        sys.stdout.write(json.dumps({"format_version": FORMAT_VERSION, "error": kind, "messages": errors},
                                    sort_keys=True, indent=2) + "\n")
    for e in errors:
        print(f"{kind}: {e}", file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cover", description="Fundamental groups of totally ramified abelian covers.")
    ap.add_argument("command", choices=sorted(COMMANDS) + ["selftest"])
    ap.add_argument("scenario", nargs="?", help="scenario JSON file (not used by selftest)")
    ap.add_argument("--json", action="store_true", help="print the machine-readable report")
    ap.add_argument("--out", help="write the report to this file instead of stdout")
    ap.add_argument("--seed", type=int, default=0, help="seed for the selftest property checks")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "selftest":
        from .selftest import run_selftest

        report = run_selftest(seed=args.seed)
        _emit(report, args.json, args.out)
        return EXIT_OK if report.payload["failed"] == 0 else EXIT_FAILED
    if args.scenario is None:
        print(f"cover {args.command}: a scenario file is required", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        sc = load(args.scenario)
    except OSError as exc:
        return _errors("SchemaError", [f"$: cannot read {args.scenario} ({exc.strerror})"], args.json, EXIT_SCHEMA)
    except SchemaError as exc:
        return _errors("SchemaError", exc.errors, args.json, EXIT_SCHEMA)
    except SemanticError as exc:
        return _errors("SemanticError", exc.errors, args.json, EXIT_SEMANTIC)
    try:
        report = run_command(args.command, sc)
    except COMPUTATION_ERRORS as exc:
        return _errors(type(exc).__name__, [str(exc)], args.json, EXIT_REJECTED)
    _emit(report, args.json, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
