"""Parametrized-basis degenerations: verification, tables, graphs, reachability."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, Mapping, Optional, Sequence

from .algebra import AlgebraPresentation, Constraint, MultilinearTensor, change_basis
from .field import (CATALOG_NAMES, DivisionByZero, ExprSyntaxError, PoleError, Polynomial,
                    RationalFunction, as_rf, content_in, lowest_coefficient, parse_expr,
                    rational_roots)
from .invariants import dim_der
from .linalg import Matrix, determinant

T = "t"


class TableError(ValueError):
    """Malformed table or a row naming an entry that is not in the catalog."""


# -- claims ------------------------------------------------------------------

def _fmt_value(v: RationalFunction) -> str:
    s = str(v)
    return s if s.lstrip("-").replace("/", "").isalnum() or s.startswith("(") else f"({s})"


def format_index(index: Mapping[str, RationalFunction]) -> str:
    if not index:
        return ""
    if len(index) == 1:
        return "^" + _fmt_value(next(iter(index.values())))
    return "^{" + ",".join(f"{k}={v}" for k, v in index.items()) + "}"


def format_vector(coords: Sequence[RationalFunction]) -> str:
    parts = []
    for j, c in enumerate(coords, 1):
        if not c:
            continue
        if c == as_rf(1):
            term = f"e{j}"
        elif c == as_rf(-1):
            term = f"-e{j}"
        else:
            term = f"{_fmt_value(c)}*e{j}"
        parts.append(term)
    if not parts:
        return "0"
    return "".join(p if i == 0 or p.startswith("-") else "+" + p for i, p in enumerate(parts))


def format_basis(basis: Matrix) -> str:
    return "(" + ", ".join(format_vector(basis.row(i)) for i in range(basis.rows)) + ")"


@dataclass(frozen=True)
class DegenerationClaim:
    """Source (after index substitution) moved to the basis E_i = sum_j basis[i, j] e_j."""

    source: str
    target: str
    basis: Matrix
    index: Mapping[str, RationalFunction] = field(default_factory=dict)
    constraints: tuple[str, ...] = ()
    origin: Optional[str] = None
    correction: Optional["DegenerationClaim"] = None
    note: Optional[str] = None

    def __hash__(self):
        return hash((self.source, self.target, self.basis, tuple(sorted(self.index.items(), key=lambda kv: kv[0]))))

    @property
    def key(self) -> str:
        return f"{self.source}{format_index(self.index)}->{self.target}"

    def specialize(self, assignment: Mapping[str, object]) -> "DegenerationClaim":
        """Fix some target parameters in the index and the basis."""
        amap = {k: as_rf(v) for k, v in assignment.items()}
        return DegenerationClaim(
            self.source, self.target, self.basis.map(lambda x: x.substitute(amap)),
            {k: v.substitute(amap) for k, v in self.index.items()}, self.constraints, self.origin,
            note=self.note)

    def to_json(self) -> dict:
        out = {"source": self.source}
        if self.index:
            out["index"] = {k: str(v) for k, v in self.index.items()}
        out["basis"] = [[str(x) for x in r] for r in self.basis.to_rows()]
        out["target"] = self.target
        if self.constraints:
            out["constraints"] = list(self.constraints)
        return out


def _parse_basis(rows, names, where: str) -> Matrix:
    basis = Matrix.from_rows([[parse_expr(str(x), names) for x in r] for r in rows])
    if basis.rows != basis.cols:
        raise TableError(f"{where}: basis is {basis.rows}x{basis.cols}")
    return basis


def claim_from_json(raw: Mapping, names: Sequence[str] = CATALOG_NAMES) -> DegenerationClaim:
    try:
        source, target, rows = raw["source"], raw["target"], raw["basis"]
    except (KeyError, TypeError) as exc:
        raise TableError(f"malformed row {raw!r}: missing {exc}") from exc
    where = f"row {source}->{target}"
    fix = raw.get("correction")
    try:
        basis = _parse_basis(rows, names, where)
        index = {k: parse_expr(str(v), names) for k, v in (raw.get("index") or {}).items()}
        corrected = None
        if fix:
            # a documented replacement; anything it does not override is inherited
            corrected = DegenerationClaim(
                source, target, _parse_basis(fix["basis"], names, where + " correction"),
                {k: parse_expr(str(v), names) for k, v in fix["index"].items()} if "index" in fix else index,
                tuple(fix.get("constraints", raw.get("constraints") or ())), raw.get("origin"),
                note=fix.get("note"))
    except (ExprSyntaxError, DivisionByZero, KeyError, ValueError) as exc:
        if isinstance(exc, TableError):
            raise
        raise TableError(f"{where}: {exc}") from exc
    return DegenerationClaim(source, target, basis, index, tuple(raw.get("constraints") or ()),
                             raw.get("origin"), corrected)


def load_table(document: str) -> tuple[str, list[DegenerationClaim]]:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise TableError(f"table is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "rows" not in doc:
        raise TableError("table must be an object with a 'rows' list")
    return doc.get("catalog", ""), [claim_from_json(r) for r in doc["rows"]]


def load_table_file(path: str | Path) -> tuple[str, list[DegenerationClaim]]:
    return load_table(Path(path).read_text())


# -- verification ------------------------------------------------------------

def transform(algebra: AlgebraPresentation, basis: Matrix) -> tuple[MultilinearTensor, ...]:
    """Structure constants of ``algebra`` in the basis given by the rows of ``basis``."""
    return change_basis(algebra.ops, basis)


def _coord(op: MultilinearTensor, key: tuple) -> str:
    return f"c[{','.join(map(str, key[:-1]))}]^{key[-1]}"


@dataclass
class ClaimReport:
    claim: DegenerationClaim
    passed: bool
    reason: str
    poles: list[dict] = field(default_factory=list)
    diff: list[dict] = field(default_factory=list)
    projections: list[dict] = field(default_factory=list)
    limits: tuple[MultilinearTensor, ...] = ()
    monotonicity: Optional[dict] = None
    locus: Optional[dict] = None
    correction: Optional["ClaimReport"] = None

    @property
    def key(self) -> str:
        return self.claim.key

    @property
    def resolved(self) -> bool:
        """Passes as printed, or through a documented correction that passes."""
        return self.passed or (self.correction is not None and self.correction.passed)

    @property
    def effective(self) -> Optional["ClaimReport"]:
        if self.passed:
            return self
        if self.correction is not None and self.correction.passed:
            return self.correction
        return None

    def to_json(self) -> dict:
        out = {"key": self.key, "source": self.claim.source, "target": self.claim.target,
               "index": {k: str(v) for k, v in self.claim.index.items()},
               "basis": format_basis(self.claim.basis),
               "constraints": list(self.claim.constraints),
               "passed": self.passed, "reason": self.reason,
               "projections": self.projections}
        if self.claim.origin:
            out["origin"] = self.claim.origin
        if self.poles:
            out["poles"] = self.poles
        if self.diff:
            out["diff"] = self.diff
        if self.monotonicity is not None:
            out["monotonicity"] = self.monotonicity
        if self.locus is not None:
            out["locus"] = self.locus
        if self.claim.note:
            out["note"] = self.claim.note
        if self.correction is not None:
            out["correction"] = self.correction.to_json()
        return out


def _resolve(catalog: Mapping[str, AlgebraPresentation], eid: str, what: str) -> AlgebraPresentation:
    try:
        return catalog[eid]
    except KeyError:
        raise TableError(f"{what} {eid!r} is not in the catalog") from None


def verify_claim(claim: DegenerationClaim, catalog: Mapping[str, AlgebraPresentation],
                 target_assignment: Optional[Mapping[str, object]] = None) -> ClaimReport:
    """Substitute the index, change basis, take t -> 0 and compare exactly with the target."""
    src = _resolve(catalog, claim.source, "source")
    tgt = _resolve(catalog, claim.target, "target")
    if src.kind is not tgt.kind or src.dim != tgt.dim:
        return ClaimReport(claim, False, f"kind/dimension mismatch: {src.kind.value}/{src.dim} "
                                         f"vs {tgt.kind.value}/{tgt.dim}")
    if claim.basis.rows != src.dim:
        return ClaimReport(claim, False, f"basis has {claim.basis.rows} rows for dimension {src.dim}")
    if claim.index and set(claim.index) != set(src.parameters):
        return ClaimReport(claim, False, f"index keys {sorted(claim.index)} do not match "
                                         f"parameters {list(src.parameters)} of {src.id}")
    if target_assignment:
        tgt = tgt.specialize(target_assignment, check_constraints=False)
    for c in src.constraints:
        if claim.index and c.expr.substitute(claim.index).is_zero():
            return ClaimReport(claim, False, f"index violates {src.id} constraint {c.text}")
    moved_src = src.specialize(claim.index, check_constraints=False) if claim.index else src
    if not determinant(claim.basis):
        return ClaimReport(claim, False, "basis matrix is singular")
    moved = transform(moved_src, claim.basis)

    poles, diff, projections, limits = [], [], [], []
    for op, want in zip(moved, tgt.ops):
        lim: Dict[tuple, RationalFunction] = {}
        op_poles = []
        for key, val in op.constants.items():
            try:
                lv = val.limit_at_zero(T)
            except PoleError as exc:
                op_poles.append({"arity": op.arity, "coordinate": _coord(op, key),
                                 "value": str(val), "valuation": exc.valuation})
                continue
            if lv:
                lim[key] = lv
        limit = MultilinearTensor(op.arity, op.dim, lim)
        limits.append(limit)
        op_diff = [] if op_poles else [
            {"arity": op.arity, "coordinate": _coord(op, k), "limit": str(a), "expected": str(b)}
            for k, (a, b) in limit.diff(want).items()]
        poles.extend(op_poles)
        diff.extend(op_diff)
        projections.append({"arity": op.arity, "limit_exists": not op_poles,
                            "matches": not op_poles and not op_diff})
    passed = not poles and not diff
    if poles:
        p = poles[0]
        reason = f"pole: {p['coordinate']} = {p['value']} has t-valuation {p['valuation']}"
    elif diff:
        reason = f"limit differs from {tgt.id} in {len(diff)} coordinate(s)"
    else:
        reason = "limit equals target"
    return ClaimReport(claim, passed, reason, poles, diff, projections, tuple(limits))


def verify_projections(claim: DegenerationClaim, catalog: Mapping[str, AlgebraPresentation]) -> list[dict]:
    """Re-verify the claim once per operation, with every other operation set to zero.

    A degeneration of the pair moves each component separately, so every
    projection must verify on its own.
    """
    src = _resolve(catalog, claim.source, "source")
    tgt = _resolve(catalog, claim.target, "target")
    out = []
    for pos, op in enumerate(src.ops):
        def keep(alg: AlgebraPresentation) -> AlgebraPresentation:
            ops = tuple(o if i == pos else MultilinearTensor(o.arity, o.dim) for i, o in enumerate(alg.ops))
            return AlgebraPresentation(alg.id, alg.kind, alg.dim, alg.parameters, ops, alg.constraints)
        rep = verify_claim(claim, {src.id: keep(src), tgt.id: keep(tgt)})
        out.append({"operation": pos + 1, "arity": op.arity, "passed": rep.passed, "reason": rep.reason})
    return out


# -- exceptional parameter values --------------------------------------------

def _factor_pieces(q: Polynomial) -> tuple[list[tuple[str, Polynomial]], list[Polynomial]]:
    """Split a t-free polynomial into univariate pieces plus a leftover."""
    names = [v for v in q.indeterminates if v != T]
    if not names or q.is_constant():
        return [], []
    if len(names) == 1:
        return [(names[0], q)], []
    if len(names) == 2:
        a, b = names
        pa, pb = content_in(q, b), content_in(q, a)   # pa involves only a, pb only b
        rest = q.exact_div(pa).exact_div(pb) if not pa.is_zero() and not pb.is_zero() else q
        pieces = [(v, p) for v, p in ((a, pa), (b, pb)) if not p.is_constant()]
        return pieces, [] if rest.is_constant() else [rest]
    return [], [q]


def _strip_roots(p: Polynomial, var: str, roots: Iterable[Fraction]) -> Polynomial:
    for r in roots:
        lin = Polynomial.var(var) - Polynomial.const(r)
        while True:
            try:
                nxt = p.exact_div(lin)
            except ArithmeticError:
                break
            if (nxt * lin) != p:
                break
            p = nxt
    return p


def _suspicious_polys(claim: DegenerationClaim, src: AlgebraPresentation) -> list[Polynomial]:
    polys = []
    for x in list(claim.basis.entries) + list(claim.index.values()):
        polys.append(content_in(x.den, T))
    det = determinant(claim.basis)
    polys.append(content_in(det.num, T))
    for c in src.constraints:
        if claim.index:
            polys.append(content_in(c.expr.substitute(claim.index).num, T))
    moved_src = src.specialize(claim.index, check_constraints=False) if claim.index else src
    for op in transform(moved_src, claim.basis):
        for val in op.constants.values():
            polys.append(lowest_coefficient(val.den, T))
    return [p for p in polys if not p.is_zero() and not p.is_constant()]


def exceptional_locus(claim: DegenerationClaim, catalog: Mapping[str, AlgebraPresentation]) -> dict:
    """Target-parameter values where the generic verification may not specialize.

    Candidates are rational roots of denominators, of the basis determinant
    and of the constants' t-free leading denominators; each candidate is
    re-verified exactly.  Irrational loci are reported without a verdict.
    """
    src, tgt = catalog[claim.source], catalog[claim.target]
    candidates: set[tuple[str, Fraction]] = set()
    opaque: set[str] = set()
    for q in _suspicious_polys(claim, src):
        pieces, rest = _factor_pieces(q)
        for var, p in pieces:
            roots = rational_roots(p, var)
            candidates.update((var, r) for r in roots)
            left = _strip_roots(p, var, roots)
            if not left.is_constant():
                opaque.add(str(left.monic()))
        opaque.update(str(r.monic()) for r in rest)
    points = []
    stated = [Constraint.parse(c, CATALOG_NAMES) for c in claim.constraints]
    for var, r in sorted(candidates, key=lambda vr: (vr[0], vr[1])):
        assignment = {var: as_rf(r)}
        entry = {"assignment": {var: str(r)}}
        if any(set(c.expr.indeterminates) <= {var} and c.violated_by(assignment) for c in tgt.constraints):
            entry["status"] = "not a catalog member"
        elif any(set(c.expr.indeterminates) <= {var} and c.violated_by(assignment) for c in stated):
            entry["status"] = "excluded by stated constraint"
        elif var not in tgt.parameters:
            entry["status"] = "not a target parameter"
        else:
            try:
                rep = verify_claim(claim.specialize(assignment), catalog, assignment)
                ok, why = rep.passed, rep.reason
            except DivisionByZero as exc:
                ok, why = False, f"undefined: {exc}"
            entry["status"] = "verified" if ok else "fails"
            if not ok:
                entry["reason"] = why
        points.append(entry)
    return {"points": points, "opaque": sorted(opaque)}


def implicit_exclusions(locus: Mapping) -> list[dict[str, str]]:
    return [p["assignment"] for p in locus.get("points", []) if p["status"] == "fails"]


# -- tables ------------------------------------------------------------------

def monotonicity(claim: DegenerationClaim, catalog: Mapping[str, AlgebraPresentation]) -> dict:
    src, tgt = catalog[claim.source], catalog[claim.target]
    moved = src.specialize(claim.index, check_constraints=False) if claim.index else src
    a, b = dim_der(moved), dim_der(tgt)
    return {"dim_der_source": a, "dim_der_target": b, "monotone": a <= b, "strict": a < b}


@dataclass
class TableReport:
    catalog: str
    rows: list[ClaimReport]

    @property
    def passed(self) -> list[ClaimReport]:
        return [r for r in self.rows if r.passed]

    @property
    def failed(self) -> list[ClaimReport]:
        return [r for r in self.rows if not r.passed]

    @property
    def corrected(self) -> list[ClaimReport]:
        return [r for r in self.rows if not r.passed and r.resolved]

    @property
    def unresolved(self) -> list[ClaimReport]:
        return [r for r in self.rows if not r.resolved]

    def to_json(self) -> dict:
        return {"catalog": self.catalog, "total": len(self.rows), "passed": len(self.passed),
                "failed_as_printed": len(self.failed), "corrected": len(self.corrected),
                "unresolved": len(self.unresolved), "rows": [r.to_json() for r in self.rows]}


def verify_table(claims: Sequence[DegenerationClaim], catalog: Mapping[str, AlgebraPresentation],
                 name: str = "", analyse: bool = True) -> TableReport:
    """Verify every row in order; unresolved ids raise TableError, failures are report content."""
    for c in claims:
        _resolve(catalog, c.source, "source")
        _resolve(catalog, c.target, "target")
    def run(c: DegenerationClaim) -> ClaimReport:
        rep = verify_claim(c, catalog)
        if rep.passed and analyse:
            rep.monotonicity = monotonicity(c, catalog)
            rep.locus = exceptional_locus(c, catalog)
        return rep

    reports = []
    for c in claims:
        rep = run(c)
        if c.correction is not None:
            rep.correction = run(c.correction)
        reports.append(rep)
    return TableReport(name, reports)


# -- graph and reachability --------------------------------------------------

@dataclass
class DegenerationGraph:
    nodes: list[str]
    edges: list[ClaimReport]

    @classmethod
    def from_report(cls, catalog: Mapping[str, AlgebraPresentation], report: TableReport,
                    use_corrections: bool = True) -> "DegenerationGraph":
        if use_corrections:
            edges = [r.effective for r in report.rows if r.effective is not None]
        else:
            edges = [r for r in report.rows if r.passed]
        return cls(list(catalog), edges)

    @property
    def corrected_edges(self) -> list[str]:
        return [e.key for e in self.edges if e.claim.note]


def export_dot(graph: DegenerationGraph, name: str = "degenerations") -> str:
    lines = [f"digraph {name} {{"]
    for n in graph.nodes:
        lines.append(f'  "{n}";')
    for e in graph.edges:
        c = e.claim
        label = f"{c.source}{format_index(c.index)} {format_basis(c.basis)}"
        excl = list(c.constraints)
        if e.locus:
            excl += [",".join(f"{k}!={v}" for k, v in a.items()) + " (implicit)"
                     for a in implicit_exclusions(e.locus)]
        if excl:
            label += " [" + "; ".join(excl) + "]"
        if c.note:
            label += " (corrected)"
        label = label.replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  "{c.source}" -> "{c.target}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


Member = frozenset  # of (parameter, Fraction) pairs; empty means the generic member


def _member(assignment: Mapping[str, object]) -> Member:
    return frozenset((k, Fraction(str(v))) for k, v in assignment.items())


def _fmt_member(eid: str, m: Member) -> str:
    if not m:
        return eid
    return eid + "{" + ",".join(f"{k}={v}" for k, v in sorted(m)) + "}"


def _constraint_points(text: str, params: Sequence[str]) -> list[Member]:
    c = Constraint.parse(text, CATALOG_NAMES)
    pieces, _ = _factor_pieces(c.expr.num)
    return [frozenset({(v, r)}) for v, p in pieces if v in params for r in rational_roots(p, v)]


@dataclass
class _Coverage:
    full: bool = False
    generic: list[frozenset] = field(default_factory=list)   # one exclusion set per generic edge
    points: set = field(default_factory=set)

    def covers(self, m: Member) -> bool:
        if self.full or m in self.points:
            return True
        return any(not any(x <= m for x in excl) for excl in self.generic)

    def has_generic(self) -> bool:
        return self.full or bool(self.generic)


def _polynomial_at(alg: AlgebraPresentation, m: Member) -> bool:
    """Whether every structure constant is defined at the member (closure argument applies)."""
    a = {k: as_rf(v) for k, v in m}
    for op in alg.ops:
        for v in op.constants.values():
            if v.den.substitute(a).is_zero():
                return False
    return True


@dataclass
class ReachabilityReport:
    generators: list[str]
    targets: list[str]
    strict: list[str]
    by_closure: list[str]
    unreachable: list[str]
    unused_edges: list[str]

    @property
    def complete(self) -> bool:
        return not self.unreachable

    def to_json(self) -> dict:
        return {"generators": self.generators, "audit_targets": self.targets,
                "reachable_strict": self.strict,
                "reachable_by_family_closure": self.by_closure,
                "unreachable": self.unreachable, "complete": self.complete,
                "strict_complete": self.complete and not self.by_closure,
                "edges_with_unreached_source": self.unused_edges}


def _edge_plan(e: ClaimReport, catalog: Mapping[str, AlgebraPresentation]):
    c = e.claim
    tgt = catalog[c.target]
    const = {k: v for k, v in c.index.items() if not v.indeterminates}
    src_member = _member({k: v.constant_value() for k, v in const.items()})
    exclusions = set()
    for text in c.constraints:
        exclusions.update(_constraint_points(text, tgt.parameters))
    if e.locus:
        exclusions.update(_member({k: Fraction(v) for k, v in a.items()}) for a in implicit_exclusions(e.locus))
    return src_member, exclusions


def _index_hits(claim: DegenerationClaim, bad: Member, tgt_params: Sequence[str]) -> Optional[set]:
    """Target members whose (t-free) index lands on a bad source member; None if undecidable."""
    hits = set()
    for k, v in bad:
        f = claim.index.get(k)
        if f is None or T in f.indeterminates:
            continue
        eq = (f - as_rf(v)).num
        if eq.is_zero():
            return None
        names = [n for n in eq.indeterminates if n in tgt_params]
        if len(names) != 1 or set(eq.indeterminates) != set(names):
            return None
        hits.update(frozenset({(names[0], r)}) for r in rational_roots(eq, names[0]))
    return hits


def _propagate(edges, catalog, cov: Dict[str, _Coverage], closure: bool, audit_points: Dict[str, set]):
    changed = True
    while changed:
        changed = False
        if closure:
            for eid, pts in audit_points.items():
                cv = cov[eid]
                if cv.has_generic():
                    for m in pts:
                        if not cv.covers(m) and _polynomial_at(catalog[eid], m):
                            cv.points.add(m)
                            changed = True
        for e, (src_member, exclusions) in edges:
            c = e.claim
            scov = cov[c.source]
            t_dependent = any(T in v.indeterminates for v in c.index.values())
            if src_member:
                ok = scov.covers(src_member)
            else:
                ok = scov.has_generic()
            if not ok:
                continue
            excl = set(exclusions)
            if not src_member and not t_dependent and not scov.full and c.index:
                # index depends only on target parameters: avoid uncovered source points
                for m in audit_points.get(c.source, ()):
                    if not scov.covers(m):
                        hits = _index_hits(c, m, catalog[c.target].parameters)
                        if hits is None:
                            ok = False
                            break
                        excl |= hits
                if not ok:
                    continue
            tcov = cov[c.target]
            if not catalog[c.target].parameters:
                if not tcov.full:
                    tcov.full = True
                    changed = True
                continue
            key = frozenset(excl)
            if key not in tcov.generic and not tcov.full:
                # keep only exclusion sets that are not dominated by an existing one
                if not any(old <= key for old in tcov.generic):
                    tcov.generic = [g for g in tcov.generic if not key <= g] + [key]
                    changed = True


def reachability_audit(graph: DegenerationGraph, catalog: Mapping[str, AlgebraPresentation],
                       generators: Sequence[str]) -> ReachabilityReport:
    """Transitive reachability over verified edges, member by member.

    A generator covers its whole family.  An edge into a family reaches every
    member except the values excluded by its stated or implicit constraints.
    Members reached only because a family's closure contains the limits of
    its generic members are reported separately.
    """
    for g in generators:
        _resolve(catalog, g, "generator")
    edges = [(e, _edge_plan(e, catalog)) for e in graph.edges]
    audit_points: Dict[str, set] = {n: set() for n in graph.nodes}
    for e, (src_member, exclusions) in edges:
        tgt = catalog[e.claim.target]
        for m in exclusions:
            a = {k: as_rf(v) for k, v in m}
            if not any(set(c.expr.indeterminates) <= set(a) and c.violated_by(a) for c in tgt.constraints):
                audit_points[e.claim.target].add(m)

    def run(closure: bool) -> Dict[str, _Coverage]:
        cov = {n: _Coverage() for n in graph.nodes}
        for g in generators:
            cov[g].full = True
        _propagate(edges, catalog, cov, closure, audit_points)
        return cov

    strict_cov, closure_cov = run(False), run(True)
    targets, strict, by_closure, unreachable = [], [], [], []
    for n in graph.nodes:
        for m in [frozenset()] + sorted(audit_points[n], key=sorted):
            label = _fmt_member(n, m)
            targets.append(label)
            if strict_cov[n].covers(m):
                strict.append(label)
            elif closure_cov[n].covers(m):
                by_closure.append(label)
            else:
                unreachable.append(label)
    unused = []
    for e, (src_member, _) in edges:
        cv = closure_cov[e.claim.source]
        if not (cv.covers(src_member) if src_member else cv.has_generic()):
            unused.append(e.key)
    return ReachabilityReport(list(generators), targets, strict, by_closure, unreachable, unused)
