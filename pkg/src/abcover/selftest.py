"""Bundled end-to-end checks: the scenario corpus plus a congruence oracle."""

from __future__ import annotations

import itertools
import json
import random
from importlib import resources
from typing import Callable, Iterator

from .cli import Report
from .congruence import LemmaSystem, solve_lifting
from .generators import random_lemma_system
from .pipeline import Pipeline
from .scenario import Scenario, parse_input

BRUTE_FORCE_LIMIT = 20000


def bundled_scenario(name: str) -> Scenario:
    text = resources.files("abcover").joinpath("scenarios", f"{name}.json").read_text(encoding="utf-8")
    return parse_input(json.loads(text), default_name=name)


def bundled_names() -> list[str]:
    folder = resources.files("abcover").joinpath("scenarios")
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def _untwisted_quartic() -> list[str]:
    pl = Pipeline(bundled_scenario("remark_case_a"))
    out = []
    if pl.deck.kernel.K.invariants != (2,):
        out.append(f"K = {pl.deck.kernel.K}, expected Z/2")
    if pl.deck.Gtilde.invariants != (4, 4, 4):
        out.append(f"G~ = {pl.deck.Gtilde}, expected (Z/4)^3")
    if not pl.xi().is_zero:
        out.append("xi is not zero")
    if not pl.consistent():
        out.append("xi and icf disagree")
    E = pl.realize().E
    if E.invariants != (2, 2) or E.free_rank:
        out.append(f"pi1(Y) = {E}, expected Z/2 + Z/2")
    return out


def _twisted_quartic() -> list[str]:
    sc = bundled_scenario("remark_case_b")
    pl = Pipeline(sc)
    out = []
    xi = pl.xi()
    # the only torsion generator of H2 is [eta]
    eta = sc.coh.H2.invariants.index(2)
    if xi.terms() != [(1, eta, 0)]:
        out.append(f"xi has terms {xi.terms()}, expected [eta] (x) 1")
    if not pl.consistent():
        out.append("xi and icf disagree")
    E = pl.realize().E
    if E.invariants != (4,) or E.free_rank:
        out.append(f"pi1(Y) = {E}, expected Z/4")
    return out


def _bidouble() -> list[str]:
    pl = Pipeline(bundled_scenario("bidouble"))
    out = []
    if pl.deck.kernel.N.invariants != (2,):
        out.append(f"N = {pl.deck.kernel.N}, expected Z/2")
    if pl.deck.Gtilde.invariants != (2, 2, 2):
        out.append(f"G~ = {pl.deck.Gtilde}, expected (Z/2)^3")
    xi = pl.xi()
    if xi.terms() != [(1, 0, 0)]:
        out.append(f"xi has terms {xi.terms()}, expected [H] (x) 1")
    icf = pl.icf()
    if icf.coords != (1, 1, 1):
        out.append(f"icf = {icf.coords}, expected (1, 1, 1)")
    if not pl.consistent():
        out.append("xi and icf disagree")
    return out


def brute_force_solutions(system: LemmaSystem) -> Iterator[tuple[int, ...]]:
    c = system.coefficients()
    q = system.p**system.gamma
    for s in itertools.product(range(q), repeat=len(system.h)):
        if all((sum(a * b for a, b in zip(row, s)) - x) % q == 0 for row, x in zip(c, system.x)):
            yield s


def _congruence_oracle(seed: int, count: int = 200) -> list[str]:
    rng = random.Random(seed)
    out = []
    for n in range(count):
        system = random_lemma_system(rng, max_modulus=27, max_m=3)
        q = system.p**system.gamma
        s = solve_lifting(system)
        c = system.coefficients()
        if any((sum(a * b for a, b in zip(row, s)) - x) % q for row, x in zip(c, system.x)):
            out.append(f"system {n}: lifted solution {s} violates a congruence")
        if q ** len(system.h) <= BRUTE_FORCE_LIMIT and next(brute_force_solutions(system), None) is None:
            out.append(f"system {n}: exhaustive search finds no solution")
    return out


def run_selftest(seed: int = 0) -> Report:
    checks: list[tuple[str, Callable[[], list[str]]]] = [
        ("remark_case_a", _untwisted_quartic),
        ("remark_case_b", _twisted_quartic),
        ("bidouble", _bidouble),
        ("congruence_oracle", lambda: _congruence_oracle(seed)),
    ]
    report = Report()
    results = {}
    for name, check in checks:
        try:
            problems = check()
        except Exception as exc:  # a crash is a failed check, not a failed run
            problems = [f"{type(exc).__name__}: {exc}"]
        results[name] = problems
        report.lines.append(f"{'PASS' if not problems else 'FAIL'} {name}")
        report.lines += [f"    {p}" for p in problems]
    passed = sum(1 for p in results.values() if not p)
    report.lines.append(f"{passed} passed, {len(results) - passed} failed")
    report.payload = {
        "command": "selftest",
        "passed": passed,
        "failed": len(results) - passed,
        "checks": {name: {"ok": not p, "problems": p} for name, p in results.items()},
    }
    return report
