"""Command-line entry point: reproducible verification runs with JSON reports."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import __version__
from .algebra import (AlgebraPresentation, CatalogError, Kind, catalog_index, check_identities,
                      classify_special, load_catalog, nilpotency_series)
from .degeneration import (DegenerationGraph, TableError, export_dot, load_table, reachability_audit,
                           verify_table)
from .field import DivisionByZero, ExprSyntaxError, parse_expr
from .invariants import derivation_space, orbit_dimensions
from .nondegeneration import CertificateError, load_certificate, verify_certificate

DATA_DIR = Path(__file__).parent / "data"
SHIPPED = {"ly4": "ly4.json", "bol4": "bol4.json", "comp3": "comp3.json", "comp4": "comp4.json",
           "ly4_table": "ly4_table.json", "bol4_table": "bol4_table.json",
           "comp3_table": "comp3_table.json", "comp4_table": "comp4_table.json",
           "bol4_R": "bol4_R.json", "bol4_R_support": "bol4_R_support.json"}
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def resolve(given: str) -> Path:
    """A file path, or the name of a shipped data file (e.g. 'ly4', 'bol4_table')."""
    p = Path(given)
    if p.exists():
        return p
    if given in SHIPPED:
        return DATA_DIR / SHIPPED[given]
    raise InputError(f"no such file or shipped data set: {given}")


class Run:
    """Collects records and input digests; renders text and JSON deterministically."""

    def __init__(self, command: str, argv: Sequence[str]):
        self.command = command
        self.argv = list(argv)
        self.inputs: dict[str, dict] = {}
        self.records: list[dict] = []
        self.summary: dict = {}
        self.lines: list[str] = []
        self.failures = 0
        self.row_numbers: list[int] = []

    def read(self, role: str, given: str) -> tuple[Path, str]:
        path = resolve(given)
        data = path.read_bytes()
        self.inputs[role] = {"given": given, "sha256": hashlib.sha256(data).hexdigest()}
        return path, data.decode()

    def say(self, line: str) -> None:
        self.lines.append(line)

    def report(self) -> dict:
        return {"tool": "nilgeo", "version": __version__, "command": self.command,
                "argv": self.argv, "inputs": self.inputs, "records": self.records,
                "summary": self.summary, "exit_status": EXIT_FAIL if self.failures else EXIT_OK}


def _catalog(run: Run, given: str) -> dict[str, AlgebraPresentation]:
    path, text = run.read("catalog", given)
    try:
        return catalog_index(load_catalog(text, base_dir=path.parent))
    except CatalogError as exc:
        raise InputError(f"{given}: {exc}") from exc


def _select(cat: dict, entry: Optional[str]) -> list[AlgebraPresentation]:
    if entry is None:
        return list(cat.values())
    if entry not in cat:
        raise InputError(f"unknown entry {entry!r}")
    return [cat[entry]]


def _assignment(pairs: Sequence[str]) -> dict[str, Fraction]:
    out = {}
    for pair in pairs or ():
        name, sep, value = pair.partition("=")
        if not sep:
            raise InputError(f"--set expects name=rational, got {pair!r}")
        try:
            v = parse_expr(value, allowed_indeterminates=())
        except (ExprSyntaxError, DivisionByZero) as exc:
            raise InputError(f"--set {pair!r}: {exc}") from exc
        out[name.strip()] = v.constant_value()
    return out


# -- subcommands ---------------------------------------------------------------

def cmd_verify_identities(args, run: Run) -> None:
    cat = _catalog(run, args.catalog)
    for alg in _select(cat, args.entry):
        ids = check_identities(alg)
        nil = nilpotency_series(alg, args.bound)
        rec = {"id": alg.id, "identities": ids.to_json(), "nilpotency": nil.to_json()}
        if alg.kind is not Kind.COMPATIBLE_LIE:
            rec["special"] = classify_special(alg)
        ok = ids.passed and nil.nilpotent
        run.failures += not ok
        run.records.append(rec)
        bad = ", ".join(f.name for f in ids.failures())
        run.say(f"{'PASS' if ok else 'FAIL'} {alg.id}: identities {'ok' if ids.passed else bad}; "
                f"series {nil.dims}")
    run.summary = {"entries": len(run.records), "failures": run.failures}


def cmd_nilpotency(args, run: Run) -> None:
    cat = _catalog(run, args.catalog)
    for alg in _select(cat, args.entry):
        nil = nilpotency_series(alg, args.bound)
        run.failures += not nil.nilpotent
        run.records.append(nil.to_json())
        run.say(f"{'PASS' if nil.nilpotent else 'FAIL'} {alg.id}: {nil.dims}"
                + (f" (index {nil.index})" if nil.nilpotent else ""))
    run.summary = {"entries": len(run.records), "failures": run.failures}


def cmd_derivations(args, run: Run) -> None:
    cat = _catalog(run, args.catalog)
    assignment = _assignment(args.set)
    for alg in _select(cat, args.entry):
        unknown = set(assignment) - set(alg.parameters)
        if unknown:
            raise InputError(f"{alg.id} has no parameter(s) {sorted(unknown)}")
        try:
            space = derivation_space(alg, assignment)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        orb = orbit_dimensions(alg)
        rec = {"id": alg.id, "generic": orb.to_json(), "derivations": space.to_json()}
        if assignment:
            rec["specialized_orbit"] = alg.dim ** 2 - space.dimension
        run.records.append(rec)
        where = f" at {', '.join(f'{k}={v}' for k, v in assignment.items())}" if assignment else ""
        run.say(f"{alg.id}{where}: dim Der {space.dimension}, orbit {alg.dim ** 2 - space.dimension}, "
                f"generic orbit {orb.orbit}, family estimate {orb.family_estimate} "
                f"({orb.parameters} parameter(s))")
        if args.entry is not None:
            for k, m in enumerate(space.basis, 1):
                run.say(f"  D{k} = {m}")
    run.summary = {"entries": len(run.records)}


def _table(run: Run, args):
    cat = _catalog(run, args.catalog)
    _, text = run.read("table", args.table)
    try:
        name, claims = load_table(text)
        numbers = list(range(1, len(claims) + 1))
        if args.row is not None:
            numbers = [n for n, c in zip(numbers, claims) if c.key == args.row]
            if not numbers:
                raise InputError(f"no row with key {args.row!r}")
            claims = [claims[n - 1] for n in numbers]
        run.row_numbers = numbers
        return cat, name, claims, verify_table(claims, cat, name)
    except TableError as exc:
        raise InputError(str(exc)) from exc


def _row_records(run: Run, report, strict: bool) -> None:
    for n, r in zip(run.row_numbers, report.rows):
        rec = {"row": n, "table": report.catalog, **r.to_json()}
        run.records.append(rec)
        status = "PASS" if r.passed else ("CORRECTED" if r.resolved else "FAIL")
        extra = ""
        if r.monotonicity and not r.monotonicity["monotone"]:
            extra = " (dim Der not monotone)"
            run.failures += 1
        if not r.passed:
            extra += f": {r.reason}"
            if r.correction is not None:
                extra += f"; documented correction {'verifies' if r.correction.passed else 'FAILS'}"
        run.say(f"{status} {report.catalog} row {n} {r.key}{extra}")
        if not r.resolved or (strict and not r.passed):
            run.failures += 1


def cmd_verify_degenerations(args, run: Run) -> None:
    _, _, _, report = _table(run, args)
    _row_records(run, report, args.strict)
    run.summary = {"rows": len(report.rows), "passed": len(report.passed),
                   "failed_as_printed": len(report.failed), "corrected": len(report.corrected),
                   "unresolved": len(report.unresolved), "strict": args.strict}


def cmd_hasse(args, run: Run) -> None:
    cat, _, _, report = _table(run, args)
    _row_records(run, report, args.strict)
    gens = [g for g in (args.generators or "").split(",") if g]
    if report.unresolved:
        run.say("graph not built: unresolved rows " + ", ".join(r.key for r in report.unresolved))
        run.summary = {"built": False}
        return
    graph = DegenerationGraph.from_report(cat, report)
    try:
        audit = reachability_audit(graph, cat, gens)
    except TableError as exc:
        raise InputError(str(exc)) from exc
    dot = export_dot(graph)
    if args.dot:
        Path(args.dot).write_text(dot)
    run.failures += len(audit.unreachable)
    run.summary = {"built": True, "nodes": len(graph.nodes), "edges": len(graph.edges),
                   "corrected_edges": graph.corrected_edges,
                   "dot_sha256": hashlib.sha256(dot.encode()).hexdigest(),
                   "reachability": audit.to_json()}
    run.say(f"graph: {len(graph.nodes)} nodes, {len(graph.edges)} edges "
            f"({len(graph.corrected_edges)} from documented corrections)")
    run.say(f"generators {','.join(gens) or '(none)'}: {len(audit.strict)} strict, "
            f"{len(audit.by_closure)} by family closure, {len(audit.unreachable)} unreachable")
    for label in audit.by_closure:
        run.say(f"  closure-only {label}")
    for label in audit.unreachable:
        run.say(f"  UNREACHABLE {label}")


def cmd_nondegen(args, run: Run) -> None:
    cat = _catalog(run, args.catalog)
    _, text = run.read("certificate", args.certificate)
    try:
        cert = load_certificate(text)
        verdict = verify_certificate(cert, cat, args.probes, args.seed)
    except CertificateError as exc:
        raise InputError(str(exc)) from exc
    run.records.append(verdict.to_json())
    run.failures += verdict.verdict == "refuted"
    run.summary = {"verdict": verdict.verdict}
    run.say(f"{cert.source} -/-> {cert.target}: {verdict.verdict.upper()} "
            f"({len(cert.vanishing)} vanishing coordinate(s), {cert.triangularity} triangular)")
    for r in verdict.reasons:
        run.say(f"  {r}")
    if verdict.evidence:
        ev = verdict.evidence.to_json()
        run.say(f"  retention {ev['retention']}, falsification hits {ev['falsification_hits']} (seed {args.seed})")
    for v in verdict.stability.verdicts:
        run.say(f"  {v.generator}: {'stable' if v.stable else 'inconclusive'}"
                + (f" residual {v.residuals}" if v.residuals else ""))


# -- wiring --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilgeo", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        sp.add_argument("--catalog", required=True, help="catalog file or shipped name (ly4, bol4, comp3, comp4)")
        sp.add_argument("--json", metavar="PATH", help="write the structured report here")
        return sp

    sp = add("verify-identities", cmd_verify_identities, "defining identities, nilpotency, special classes")
    sp.add_argument("--entry")
    sp.add_argument("--bound", type=int, default=8)

    sp = add("nilpotency", cmd_nilpotency, "descending series of each entry")
    sp.add_argument("--entry")
    sp.add_argument("--bound", type=int, default=8)

    sp = add("derivations", cmd_derivations, "derivation algebra and orbit dimensions")
    sp.add_argument("--entry")
    sp.add_argument("--set", action="append", metavar="NAME=RATIONAL")

    for name, fn, help in (("verify-degenerations", cmd_verify_degenerations, "check a degeneration table"),
                           ("hasse", cmd_hasse, "degeneration graph, DOT export and reachability")):
        sp = add(name, fn, help)
        sp.add_argument("--table", required=True)
        sp.add_argument("--row", metavar="KEY", help="only the row with this key, e.g. L44^0->L01")
        sp.add_argument("--strict", action="store_true",
                        help="count rows that only pass after a documented correction as failures")
        if name == "hasse":
            sp.add_argument("--generators", default="", metavar="ID,ID,...")
            sp.add_argument("--dot", metavar="PATH")

    sp = add("nondegen", cmd_nondegen, "closed-set certificate evidence")
    sp.add_argument("--certificate", required=True)
    sp.add_argument("--probes", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=42)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    run = Run(args.command, argv)
    try:
        args.fn(args, run)
    except (InputError, OSError, UnicodeDecodeError) as exc:
        print(f"nilgeo {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for line in run.lines:
        print(line)
    report = run.report()
    print(f"exit status {report['exit_status']}: {run.failures} failure(s)")
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2) + "\n")
    return report["exit_status"]


if __name__ == "__main__":
    sys.exit(main())
