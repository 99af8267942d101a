"""Closed-set certificates for non-degeneration, with symbolic and randomized evidence."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .algebra import AlgebraPresentation, Kind, MultilinearTensor, act, canonical_key
from .field import RF_ONE, RF_ZERO, Polynomial, RationalFunction, as_rf
from .invariants import degeneration_dim_test, image_dimensions
from .linalg import Matrix, determinant

LOWER, UPPER = "lower", "upper"


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class ClosedSetCertificate:
    """A zero locus of structure constants, claimed stable under triangular base changes."""

    source: str
    target: str
    vanishing: tuple[tuple[int, tuple[int, ...]], ...]
    triangularity: str = LOWER

    def __post_init__(self):
        if not self.vanishing:
            raise CertificateError("certificate lists no coordinates")
        if self.triangularity not in (LOWER, UPPER):
            raise CertificateError(f"triangularity must be 'lower' or 'upper', not {self.triangularity!r}")
        for arity, idx in self.vanishing:
            if arity not in (2, 3) or len(idx) != arity + 1:
                raise CertificateError(f"coordinate {idx} does not fit arity {arity}")
            key, sign = canonical_key(idx)
            if sign != 1:
                raise CertificateError(f"coordinate {idx} is not canonical (need i < j)")

    @classmethod
    def from_json(cls, raw: Mapping) -> "ClosedSetCertificate":
        try:
            van = tuple((int(v["arity"]), tuple(int(k) for k in v["index"])) for v in raw["vanishing"])
            return cls(raw["source"], raw["target"], van, raw.get("triangularity", LOWER))
        except (KeyError, TypeError) as exc:
            raise CertificateError(f"malformed certificate: {exc}") from exc

    def to_json(self) -> dict:
        return {"source": self.source, "target": self.target, "triangularity": self.triangularity,
                "vanishing": [{"arity": a, "index": list(i)} for a, i in self.vanishing]}

    def labels(self) -> list[str]:
        return [coordinate_name(a, i) for a, i in self.vanishing]


def load_certificate(document: str) -> ClosedSetCertificate:
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise CertificateError(f"certificate is not valid JSON: {exc}") from exc
    return ClosedSetCertificate.from_json(raw)


def load_certificate_file(path: str | Path) -> ClosedSetCertificate:
    return load_certificate(Path(path).read_text())


def coordinate_name(arity: int, idx: Sequence[int]) -> str:
    """Indeterminate naming one structure constant, e.g. c121_3 for c_{1,2,1}^3."""
    sep = "" if max(idx) < 10 else "_"
    return "c" + sep.join(map(str, idx[:-1])) + f"_{idx[-1]}"


def _op_for(ops: Sequence[MultilinearTensor], arity: int) -> Optional[MultilinearTensor]:
    return next((op for op in ops if op.arity == arity), None)


def _coordinates(ops: Sequence[MultilinearTensor], cert: ClosedSetCertificate) -> list[RationalFunction]:
    out = []
    for arity, idx in cert.vanishing:
        op = _op_for(ops, arity)
        if op is None:
            raise CertificateError(f"no operation of arity {arity} to read {coordinate_name(arity, idx)}")
        if max(idx) > op.dim:
            raise CertificateError(f"coordinate {idx} out of range for dimension {op.dim}")
        out.append(op.coefficient(*idx))
    return out


def check_membership(algebra: AlgebraPresentation, cert: ClosedSetCertificate) -> bool:
    """Every certified coordinate is identically zero (parameters symbolic)."""
    return all(not c for c in _coordinates(algebra.ops, cert))


# -- symbolic stability --------------------------------------------------------

def generic_structure(kind: Kind, dim: int) -> tuple[MultilinearTensor, ...]:
    """Every canonical coordinate replaced by its own indeterminate."""
    ops = []
    for arity in kind.arities:
        consts = {}
        for i in range(1, dim + 1):
            for j in range(i + 1, dim + 1):
                tails = [()] if arity == 2 else [(k,) for k in range(1, dim + 1)]
                for tail in tails:
                    for l in range(1, dim + 1):
                        idx = (i, j) + tail + (l,)
                        consts[idx] = RationalFunction.var(coordinate_name(arity, idx))
        ops.append(MultilinearTensor(arity, dim, consts))
    if kind is Kind.COMPATIBLE_LIE:
        # two brackets: keep their coordinates apart
        second = {k: RationalFunction.var(coordinate_name(2, k) + "b") for k in ops[1].constants}
        ops[1] = MultilinearTensor(2, dim, second)
    return tuple(ops)


def elementary(dim: int, i: int, j: int, s: RationalFunction) -> Matrix:
    """g e_j = e_j + s e_i (1-based), i.e. the identity plus s in row i, column j."""
    rows = [[RF_ONE if a == b else RF_ZERO for b in range(dim)] for a in range(dim)]
    rows[i - 1][j - 1] = s
    return Matrix.from_rows(rows)


def triangular_generators(dim: int, triangularity: str) -> list[tuple[str, Matrix]]:
    d = [RationalFunction.var(f"d{k}") for k in range(1, dim + 1)]
    gens = [("diag(" + ",".join(f"d{k}" for k in range(1, dim + 1)) + ")", Matrix.diagonal(d))]
    s = RationalFunction.var("s")
    for j in range(1, dim + 1):
        for i in range(1, dim + 1):
            if (i > j) if triangularity == LOWER else (i < j):
                gens.append((f"e{j} -> e{j}+s*e{i}", elementary(dim, i, j, s)))
    return gens


def _residual(value: RationalFunction, certified: set[str]) -> RationalFunction:
    """Part of ``value`` whose numerator monomials avoid every certified coordinate."""
    keep = {m: c for m, c in value.num.terms.items() if not any(v in certified for v, _ in m)}
    return RationalFunction(Polynomial(keep), value.den)


@dataclass
class GeneratorVerdict:
    generator: str
    stable: bool
    transformed: dict[str, str]
    residuals: dict[str, str]

    def to_json(self) -> dict:
        return {"generator": self.generator, "verdict": "stable" if self.stable else "inconclusive",
                "transformed": self.transformed, "residuals": self.residuals}


@dataclass
class StabilityReport:
    certificate: ClosedSetCertificate
    verdicts: list[GeneratorVerdict]

    @property
    def all_stable(self) -> bool:
        return all(v.stable for v in self.verdicts)

    @property
    def inconclusive(self) -> list[str]:
        return [v.generator for v in self.verdicts if not v.stable]

    def to_json(self) -> dict:
        return {"triangularity": self.certificate.triangularity, "all_stable": self.all_stable,
                "generators": [v.to_json() for v in self.verdicts]}


def probe_generator(cert: ClosedSetCertificate, kind: Kind, g: Matrix, name: str = "g") -> GeneratorVerdict:
    ops = generic_structure(kind, g.rows)
    moved = act(g, ops)
    certified = set(cert.labels())
    transformed, residuals = {}, {}
    for label, value in zip(cert.labels(), _coordinates(moved, cert)):
        transformed[label] = str(value)
        res = _residual(value, certified) if value else value
        if res:
            residuals[label] = str(res)
    return GeneratorVerdict(name, not residuals, transformed, residuals)


def stability_probe(cert: ClosedSetCertificate, kind: Kind, dim: int = 4) -> StabilityReport:
    """Syntactic check that each generator keeps the certified coordinates in their own ideal.

    'stable' is sound; 'inconclusive' only means a residual survives outside
    the monomial ideal of the certified coordinates in the full affine space.
    """
    gens = triangular_generators(dim, cert.triangularity)
    return StabilityReport(cert, [probe_generator(cert, kind, g, name) for name, g in gens])


def generic_triangular(dim: int, triangularity: str) -> Matrix:
    """Triangular matrix with independent indeterminates d_i on the diagonal and s_ij off it."""
    rows = []
    for i in range(1, dim + 1):
        row = []
        for j in range(1, dim + 1):
            if i == j:
                row.append(RationalFunction.var(f"d{i}"))
            elif (i > j) if triangularity == LOWER else (i < j):
                row.append(RationalFunction.var(f"s{i}{j}"))
            else:
                row.append(RF_ZERO)
        rows.append(row)
    return Matrix.from_rows(rows)


def support_certificate(source: AlgebraPresentation, target: str,
                        triangularity: str = LOWER) -> ClosedSetCertificate:
    """Every coordinate that vanishes on all triangular images of the source family.

    This is the coordinate-subspace reading of a closed set: whatever a
    triangular base change can never switch on is required to be zero.
    """
    moved = act(generic_triangular(source.dim, triangularity), source.ops)
    vanishing = []
    for op, gen in zip(moved, generic_structure(source.kind, source.dim)):
        vanishing += [(op.arity, k) for k in gen.constants if k not in op.constants]
    return ClosedSetCertificate(source.id, target, tuple(vanishing), triangularity)


# -- randomized evidence -------------------------------------------------------

def _rand_rational(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        if q or not nonzero:
            return q


def random_triangular(rng: random.Random, dim: int, triangularity: str) -> Matrix:
    rows = []
    for i in range(dim):
        row = []
        for j in range(dim):
            if i == j:
                row.append(_rand_rational(rng, nonzero=True))
            elif (i > j) if triangularity == LOWER else (i < j):
                row.append(_rand_rational(rng))
            else:
                row.append(0)
        rows.append(row)
    return Matrix.from_rows(rows)


def random_invertible(rng: random.Random, dim: int) -> Matrix:
    while True:
        g = Matrix.from_rows([[_rand_rational(rng) for _ in range(dim)] for _ in range(dim)])
        if determinant(g):
            return g


def random_member(rng: random.Random, algebra: AlgebraPresentation) -> dict[str, Fraction]:
    for _ in range(1000):
        a = {p: _rand_rational(rng) for p in algebra.parameters}
        amap = {k: as_rf(v) for k, v in a.items()}
        if not any(c.violated_by(amap) for c in algebra.constraints):
            try:
                algebra.specialize(a)
            except ArithmeticError:
                continue
            return a
    raise CertificateError(f"could not sample an admissible member of {algebra.id}")


def _in_locus(ops, cert) -> bool:
    return all(not c for c in _coordinates(ops, cert))


def _fmt_matrix(g: Matrix) -> list[list[str]]:
    return [[str(x) for x in r] for r in g.to_rows()]


@dataclass
class ProbeEvidence:
    probes: int
    seed: int
    retained: int
    retention_failures: list[dict] = field(default_factory=list)
    hits: int = 0
    hit_witnesses: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"probes": self.probes, "seed": self.seed,
                "retention": f"{self.retained}/{self.probes}",
                "falsification_hits": f"{self.hits}/{self.probes}",
                "retention_failures": self.retention_failures,
                "hit_witnesses": self.hit_witnesses}


def orbit_probe(source: AlgebraPresentation, target: AlgebraPresentation, cert: ClosedSetCertificate,
                probes: int, seed: int, keep: int = 3) -> ProbeEvidence:
    """Seeded retention campaign on the source and falsification campaign on the target."""
    if probes < 1:
        raise CertificateError("probes must be at least 1")
    rng = random.Random(seed)
    n = source.dim
    ev = ProbeEvidence(probes, seed, 0)
    for _ in range(probes):
        a = random_member(rng, source)
        g = random_triangular(rng, n, cert.triangularity)
        if _in_locus(act(g, source.specialize(a).ops), cert):
            ev.retained += 1
        elif len(ev.retention_failures) < keep:
            ev.retention_failures.append({"parameters": {k: str(v) for k, v in a.items()}, "g": _fmt_matrix(g)})
    for _ in range(probes):
        a = random_member(rng, target)
        g = random_invertible(rng, n)
        if _in_locus(act(g, target.specialize(a).ops), cert):
            ev.hits += 1
            if len(ev.hit_witnesses) < keep:
                ev.hit_witnesses.append({"parameters": {k: str(v) for k, v in a.items()}, "g": _fmt_matrix(g)})
    return ev


# -- consolidated verdict ------------------------------------------------------

SUPPORTED, REFUTED, INCONCLUSIVE = "supported", "refuted", "inconclusive"


@dataclass
class CertificateVerdict:
    certificate: ClosedSetCertificate
    verdict: str
    source_member: bool
    target_member: bool
    stability: StabilityReport
    evidence: Optional[ProbeEvidence]
    dim_test: dict
    image_dims: dict
    reasons: list[str]

    def to_json(self) -> dict:
        return {"certificate": self.certificate.to_json(), "verdict": self.verdict,
                "reasons": self.reasons,
                "membership": {"source": self.source_member, "target_printed_basis": self.target_member},
                "dimension_test": self.dim_test,
                "image_dimensions": self.image_dims,
                "stability": self.stability.to_json(),
                "inconclusive_generators": self.stability.inconclusive,
                "probes": self.evidence.to_json() if self.evidence else None}


def verify_certificate(cert: ClosedSetCertificate, catalog: Mapping[str, AlgebraPresentation],
                       probes: int = 1000, seed: int = 42) -> CertificateVerdict:
    """Refuted only on a concrete counterexample; otherwise supported by the evidence."""
    try:
        src, tgt = catalog[cert.source], catalog[cert.target]
    except KeyError as exc:
        raise CertificateError(f"{exc.args[0]!r} is not in the catalog") from None
    if probes < 1:
        raise CertificateError("probes must be at least 1")
    reasons = []
    src_in = check_membership(src, cert)
    tgt_in = check_membership(tgt, cert)
    stab = stability_probe(cert, src.kind, src.dim)
    dim = degeneration_dim_test(src, tgt).to_json()
    images = {src.id: list(image_dimensions(src)), tgt.id: list(image_dimensions(tgt))}
    evidence = None
    if not src_in:
        bad = [l for l, v in zip(cert.labels(), _coordinates(src.ops, cert)) if v]
        reasons.append(f"{src.id} is not in the locus: {', '.join(bad)} nonzero")
    if tgt_in:
        reasons.append(f"{tgt.id} in its printed basis already lies in the locus")
    if src_in and not tgt_in:
        evidence = orbit_probe(src, tgt, cert, probes, seed)
        if evidence.retained < probes:
            reasons.append(f"{probes - evidence.retained} triangular images of {src.id} leave the locus")
        if evidence.hits:
            reasons.append(f"{evidence.hits} images of {tgt.id} land in the locus")
    if reasons:
        verdict = REFUTED
    else:
        verdict = SUPPORTED
        reasons.append("source in locus, target outside, full retention, no falsification hits")
        if stab.inconclusive:
            reasons.append(f"{len(stab.inconclusive)} generator(s) only inconclusive symbolically")
    return CertificateVerdict(cert, verdict, src_in, tgt_in, stab, evidence, dim, images, reasons)
