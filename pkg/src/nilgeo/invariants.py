"""Derivation algebras, orbit dimensions and the dimension obstruction."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional

from .algebra import AlgebraPresentation, MultilinearTensor
from .field import RF_ZERO, RationalFunction, as_rf
from .linalg import Matrix, kernel_basis, rank, span_basis


@dataclass
class DerivationSpace:
    algebra_id: str
    assignment: Dict[str, RationalFunction]
    dimension: int
    basis: list[Matrix] = field(repr=False)

    @property
    def generic(self) -> bool:
        return not self.assignment

    def to_json(self) -> dict:
        return {
            "id": self.algebra_id,
            "assignment": {k: str(v) for k, v in self.assignment.items()},
            "dim_der": self.dimension,
            "basis": [[[str(x) for x in row] for row in m.to_rows()] for m in self.basis],
        }


def _leibniz_rows(op: MultilinearTensor) -> list[list[RationalFunction]]:
    """Linear equations on the entries of D (unknown d[p][q] at index p*n+q).

    D acts on column vectors: D e_q = sum_p d[p][q] e_p.  For each argument
    tuple and output coordinate l, D(op(args)) - sum_s op(.., D arg_s, ..) = 0.
    """
    n = op.dim
    rows = []
    tails = [()] if op.arity == 2 else [(k,) for k in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        for tail in tails:
            args = (i, j) + tail
            eqs: Dict[int, Dict[int, RationalFunction]] = {l: {} for l in range(n)}

            def add(l, unknown, coef):
                eqs[l][unknown] = eqs[l].get(unknown, RF_ZERO) + coef

            # D applied to the product
            for k in range(n):
                c = op.coefficient(*(a + 1 for a in args), k + 1)
                if c:
                    for l in range(n):
                        add(l, l * n + k, c)
            # product with D in slot s: D e_{args[s]} = sum_p d[p][args[s]] e_p
            for s in range(op.arity):
                for p in range(n):
                    moved = list(args)
                    moved[s] = p
                    for l in range(n):
                        c = op.coefficient(*(a + 1 for a in moved), l + 1)
                        if c:
                            add(l, p * n + args[s], -c)
            for l in range(n):
                row = [RF_ZERO] * (n * n)
                for u, c in eqs[l].items():
                    row[u] = c
                if any(row):
                    rows.append(row)
    return rows


def derivation_matrix(algebra: AlgebraPresentation) -> Matrix:
    n = algebra.dim
    rows = []
    for op in algebra.ops:
        rows.extend(_leibniz_rows(op))
    if not rows:
        return Matrix(0, n * n, ())
    return Matrix(len(rows), n * n, tuple(x for r in rows for x in r))


def derivation_space(algebra: AlgebraPresentation,
                     assignment: Optional[Mapping[str, object]] = None) -> DerivationSpace:
    """Kernel of the Leibniz system; generic in any unassigned parameter."""
    amap = {k: as_rf(v) for k, v in (assignment or {}).items()}
    alg = algebra.specialize(amap) if amap else algebra
    n = alg.dim
    m = derivation_matrix(alg)
    if m.rows == 0:
        vecs = [[RF_ZERO] * (n * n) for _ in range(n * n)]
        for i, v in enumerate(vecs):
            v[i] = as_rf(1)
    else:
        vecs = kernel_basis(m)
    basis = [Matrix(n, n, tuple(v)) for v in vecs]
    return DerivationSpace(algebra.id, amap, len(basis), basis)


def is_derivation(algebra: AlgebraPresentation, d: Matrix) -> bool:
    m = derivation_matrix(algebra)
    if m.rows == 0:
        return True
    flat = list(d.entries)
    return all(not x for x in m.apply(flat))


def dim_der(algebra: AlgebraPresentation, assignment: Optional[Mapping[str, object]] = None) -> int:
    """dim Der via the rank of the Leibniz system (no kernel basis needed)."""
    amap = {k: as_rf(v) for k, v in (assignment or {}).items()}
    alg = algebra.specialize(amap) if amap else algebra
    m = derivation_matrix(alg)
    n2 = alg.dim ** 2
    return n2 - (rank(m) if m.rows else 0)


@dataclass(frozen=True)
class OrbitDimension:
    algebra_id: str
    dim_der: int
    orbit: int             # n^2 - dim Der, generic parameters
    parameters: int
    family_estimate: int   # orbit + number of parameters (heuristic)

    def to_json(self) -> dict:
        return {"id": self.algebra_id, "dim_der": self.dim_der, "orbit": self.orbit,
                "parameters": self.parameters, "family_estimate": self.family_estimate}


def orbit_dimensions(algebra: AlgebraPresentation) -> OrbitDimension:
    d = dim_der(algebra)
    orbit = algebra.dim ** 2 - d
    k = len(algebra.parameters)
    return OrbitDimension(algebra.id, d, orbit, k, orbit + k)


def orbit_dimension(algebra: AlgebraPresentation) -> int:
    return orbit_dimensions(algebra).orbit


@dataclass(frozen=True)
class DimTestVerdict:
    possible: bool
    reason: str

    def to_json(self) -> dict:
        return {"possible": self.possible, "reason": self.reason}


def projection_obstruction(a: AlgebraPresentation, b: AlgebraPresentation) -> Optional[str]:
    """Each multiplication degenerates separately, so zero cannot reach nonzero."""
    for pos, (x, y) in enumerate(zip(a.ops, b.ops)):
        if x.is_zero() and not y.is_zero():
            return (f"operation {pos + 1} (arity {x.arity}) of {a.id} is zero "
                    f"but nonzero in {b.id}")
    return None


def degeneration_dim_test(a: AlgebraPresentation, b: AlgebraPresentation) -> DimTestVerdict:
    """Necessary conditions only; 'possible' never proves a degeneration.

    A parametric source is read as its whole family: the closure of the union
    of its orbits has dimension orbit + #parameters, so each parameter buys
    one unit of room against the target's orbit.
    """
    if a.id == b.id:
        return DimTestVerdict(True, "same entry")
    reason = projection_obstruction(a, b)
    if reason:
        return DimTestVerdict(False, f"projection: {reason}")
    da, db, k = dim_der(a), dim_der(b), len(a.parameters)
    lhs = f"dim Der({a.id}) - {k}" if k else f"dim Der({a.id})"
    if da - k >= db:
        return DimTestVerdict(False, f"{lhs} = {da - k} >= dim Der({b.id}) = {db}")
    return DimTestVerdict(True, f"{lhs} = {da - k} < dim Der({b.id}) = {db}")


def image_dimensions(algebra: AlgebraPresentation) -> tuple[int, ...]:
    """Dimension of the span of all products, per operation (generic parameters).

    Under a degeneration each value can only drop, since rank <= k is closed.
    """
    out = []
    for op in algebra.ops:
        vecs = []
        for key in op.table:
            v = [RF_ZERO] * algebra.dim
            for l, c in op.table[key]:
                v[l] = c
            vecs.append(v)
        out.append(len(span_basis(vecs, algebra.dim)))
    return tuple(out)
