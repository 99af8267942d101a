"""Structure-constant tensors, catalogs, identities, nilpotency, isomorphisms."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .field import (RF_ONE, RF_ZERO, ExprSyntaxError, RationalFunction, as_rf,
                    parse_expr)
from .linalg import Matrix, SingularMatrix, invert, span_basis

Vector = Dict[int, RationalFunction]  # sparse, 0-based index -> coefficient


class Kind(str, Enum):
    LIE_YAMAGUTI = "LieYamaguti"
    BOL = "Bol"
    COMPATIBLE_LIE = "CompatibleLie"

    @property
    def arities(self) -> tuple[int, ...]:
        return (2, 2) if self is Kind.COMPATIBLE_LIE else (2, 3)


class CatalogError(ValueError):
    pass


# -- tensors -----------------------------------------------------------------

def canonical_key(idx: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Canonical index tuple (first pair increasing) and the sign of the swap.

    Returns sign 0 when the first two indices coincide.
    """
    i, j = idx[0], idx[1]
    if i == j:
        return tuple(idx), 0
    if i < j:
        return tuple(idx), 1
    return (j, i) + tuple(idx[2:]), -1


class MultilinearTensor:
    """Products of basis vectors, antisymmetric in the first two arguments.

    ``constants`` maps canonical 1-based tuples ``(i, j, [k,] l)`` with i < j
    to the coefficient of ``e_l`` in the product of ``e_i, e_j[, e_k]``.
    """

    __slots__ = ("arity", "dim", "constants", "_table")

    def __init__(self, arity: int, dim: int, constants: Mapping[tuple, RationalFunction] | None = None):
        if arity not in (2, 3):
            raise ValueError("arity must be 2 or 3")
        self.arity = arity
        self.dim = dim
        clean = {}
        for key, val in (constants or {}).items():
            val = as_rf(val)
            if len(key) != arity + 1 or not all(1 <= k <= dim for k in key):
                raise IndexError(f"index {key} out of range for dim {dim}, arity {arity}")
            key, sign = canonical_key(key)
            if sign == 0:
                if val:
                    raise ValueError(f"nonzero constant on a diagonal pair {key}")
                continue
            if sign < 0:
                val = -val
            if val:
                clean[key] = val
        self.constants: Dict[tuple, RationalFunction] = dict(sorted(clean.items()))
        self._table = None

    @classmethod
    def from_products(cls, arity: int, dim: int, products: Iterable[tuple]) -> "MultilinearTensor":
        """Build from ``(i, j, [k,] l, coefficient)`` rows in any argument order."""
        acc: Dict[tuple, RationalFunction] = {}
        for row in products:
            *idx, coef = row
            if len(idx) != arity + 1:
                raise ValueError(f"row {row} does not match arity {arity}")
            if not all(isinstance(k, int) and 1 <= k <= dim for k in idx):
                raise IndexError(f"index {tuple(idx)} out of range for dim {dim}")
            key, sign = canonical_key(idx)
            coef = as_rf(coef)
            if sign == 0:
                if coef:
                    raise ValueError(f"nonzero constant on a diagonal pair {tuple(idx)}")
                continue
            val = coef if sign > 0 else -coef
            if key in acc and acc[key] != val:
                raise ValueError(f"conflicting values for {key}: {acc[key]} vs {val}")
            acc[key] = val
        return cls(arity, dim, acc)

    def coefficient(self, *idx: int) -> RationalFunction:
        key, sign = canonical_key(idx)
        if sign == 0:
            return RF_ZERO
        val = self.constants.get(key, RF_ZERO)
        return val if sign > 0 else -val

    def is_zero(self) -> bool:
        return not self.constants

    @property
    def table(self) -> Dict[tuple, List[Tuple[int, RationalFunction]]]:
        """0-based ordered argument tuple -> [(output index, coefficient)]."""
        if self._table is None:
            table: Dict[tuple, list] = {}
            for key, val in self.constants.items():
                i, j, *rest = (k - 1 for k in key)
                l = rest[-1]
                mid = tuple(rest[:-1])
                table.setdefault((i, j) + mid, []).append((l, val))
                table.setdefault((j, i) + mid, []).append((l, -val))
            self._table = table
        return self._table

    def apply(self, *args: Vector) -> Vector:
        """Multilinear product of sparse vectors."""
        out: Vector = {}
        table = self.table
        if self.arity == 2:
            u, v = args
            for a, ua in u.items():
                for b, vb in v.items():
                    hits = table.get((a, b))
                    if hits:
                        f = ua * vb
                        for l, c in hits:
                            out[l] = out.get(l, RF_ZERO) + f * c
        else:
            u, v, w = args
            for a, ua in u.items():
                for b, vb in v.items():
                    if a == b:
                        continue
                    f = ua * vb
                    for c_, wc in w.items():
                        hits = table.get((a, b, c_))
                        if hits:
                            g = f * wc
                            for l, c in hits:
                                out[l] = out.get(l, RF_ZERO) + g * c
        return {k: v for k, v in out.items() if v}

    def map(self, fn) -> "MultilinearTensor":
        return MultilinearTensor(self.arity, self.dim, {k: fn(v) for k, v in self.constants.items()})

    def substitute(self, assignment: Mapping[str, RationalFunction]) -> "MultilinearTensor":
        if not assignment:
            return self
        return self.map(lambda v: v.substitute(assignment))

    def diff(self, other: "MultilinearTensor") -> Dict[tuple, tuple]:
        keys = sorted(set(self.constants) | set(other.constants))
        out = {}
        for k in keys:
            a = self.constants.get(k, RF_ZERO)
            b = other.constants.get(k, RF_ZERO)
            if a != b:
                out[k] = (a, b)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultilinearTensor):
            return NotImplemented
        return (self.arity, self.dim, self.constants) == (other.arity, other.dim, other.constants)

    def __hash__(self):
        return hash((self.arity, self.dim, tuple(self.constants.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in self.constants.items())
        return f"MultilinearTensor(arity={self.arity}, dim={self.dim}, {{{body}}})"


def product(tensor: MultilinearTensor, args: Sequence[Sequence]) -> list[RationalFunction]:
    """Dense-vector front end to :meth:`MultilinearTensor.apply`."""
    if len(args) != tensor.arity:
        raise ValueError(f"expected {tensor.arity} arguments")
    sparse = []
    for vec in args:
        if len(vec) != tensor.dim:
            raise ValueError("vector length does not match dimension")
        sparse.append({i: as_rf(x) for i, x in enumerate(vec) if as_rf(x)})
    out = tensor.apply(*sparse)
    return [out.get(i, RF_ZERO) for i in range(tensor.dim)]


def basis_vector(i: int) -> Vector:
    return {i: RF_ONE}


# -- constraints and presentations -------------------------------------------

@dataclass(frozen=True)
class Constraint:
    """``lhs != rhs``, stored as the polynomial expression lhs - rhs != 0."""

    text: str
    expr: RationalFunction

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> "Constraint":
        if "!=" not in text:
            raise CatalogError(f"constraint {text!r} is not of the form 'lhs != rhs'")
        lhs, rhs = text.split("!=", 1)
        try:
            expr = parse_expr(lhs, names) - parse_expr(rhs, names)
        except ExprSyntaxError as exc:
            raise CatalogError(f"bad constraint {text!r}: {exc}") from exc
        return cls(text.strip(), expr)

    def violated_by(self, assignment: Mapping[str, RationalFunction]) -> bool:
        return self.expr.substitute(assignment).is_zero()


@dataclass(frozen=True)
class AlgebraPresentation:
    id: str
    kind: Kind
    dim: int
    parameters: tuple[str, ...]
    ops: tuple[MultilinearTensor, ...]
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self):
        if tuple(op.arity for op in self.ops) != self.kind.arities:
            raise CatalogError(f"{self.id}: op arities do not match kind {self.kind.value}")
        allowed = set(self.parameters)
        for op in self.ops:
            for v in op.constants.values():
                extra = set(v.indeterminates) - allowed
                if extra:
                    raise CatalogError(f"{self.id}: undeclared parameter(s) {sorted(extra)}")

    @property
    def bilinear(self) -> MultilinearTensor:
        return self.ops[0]

    @property
    def trilinear(self) -> MultilinearTensor | None:
        return self.ops[1] if self.kind is not Kind.COMPATIBLE_LIE else None

    def is_zero(self) -> bool:
        return all(op.is_zero() for op in self.ops)

    def specialize(self, assignment: Mapping[str, object], check_constraints: bool = True) -> "AlgebraPresentation":
        """Substitute values for (some) parameters."""
        amap = {k: as_rf(v) for k, v in assignment.items()}
        if check_constraints:
            for c in self.constraints:
                if set(c.expr.indeterminates) <= set(amap) and c.violated_by(amap):
                    raise ValueError(f"{self.id}: assignment {fmt_assignment(amap)} violates {c.text}")
        params = tuple(p for p in self.parameters if p not in amap)
        # values may introduce fresh indeterminates (t, or the target's parameters)
        extra = []
        for v in amap.values():
            for name in v.indeterminates:
                if name not in params and name not in extra:
                    extra.append(name)
        ops = tuple(op.substitute(amap) for op in self.ops)
        return AlgebraPresentation(self.id, self.kind, self.dim, params + tuple(extra), ops, ())

    def with_ops(self, ops: Sequence[MultilinearTensor], id: str | None = None) -> "AlgebraPresentation":
        names: list[str] = []
        for op in ops:
            for v in op.constants.values():
                for n in v.indeterminates:
                    if n not in names:
                        names.append(n)
        return AlgebraPresentation(id or self.id, self.kind, self.dim, tuple(names), tuple(ops), ())


def fmt_assignment(a: Mapping[str, object]) -> str:
    return ", ".join(f"{k}={v}" for k, v in a.items())


def zero_algebra(kind: Kind, dim: int, id: str = "zero") -> AlgebraPresentation:
    return AlgebraPresentation(id, kind, dim, (), tuple(MultilinearTensor(a, dim) for a in kind.arities))


# -- catalogs ----------------------------------------------------------------

def _entry_from_json(raw: dict, kind: Kind, dim: int) -> AlgebraPresentation:
    try:
        eid = raw["id"]
        params = tuple(raw.get("parameters", []))
        ops_raw = raw["ops"]
    except (KeyError, TypeError) as exc:
        raise CatalogError(f"malformed entry {raw!r}: missing {exc}") from exc
    if not isinstance(eid, str):
        raise CatalogError(f"entry id must be a string, got {eid!r}")
    arities = [op.get("arity") for op in ops_raw]
    if kind is Kind.COMPATIBLE_LIE:
        if arities != [2, 2]:
            raise CatalogError(f"{eid}: compatible Lie entries need two arity-2 ops")
    else:
        # a product that is identically zero may be omitted
        if len(set(arities)) != len(arities) or not set(arities) <= {2, 3}:
            raise CatalogError(f"{eid}: expected at most one arity-2 and one arity-3 op")
        ops_raw = list(ops_raw) + [{"arity": a, "constants": []} for a in (2, 3) if a not in arities]
    ops = []
    for op in sorted(ops_raw, key=lambda o: o["arity"]) if kind is not Kind.COMPATIBLE_LIE else ops_raw:
        arity = op["arity"]
        rows = []
        for row in op.get("constants", []):
            if len(row) != arity + 2:
                raise CatalogError(f"{eid}: constant row {row} has wrong length for arity {arity}")
            *idx, expr = row
            if not all(isinstance(k, int) and 1 <= k <= dim for k in idx):
                raise CatalogError(f"{eid}: index {idx} out of range 1..{dim}")
            try:
                coef = parse_expr(str(expr), params)
            except ExprSyntaxError as exc:
                raise CatalogError(f"{eid}: unparseable coefficient {expr!r}: {exc}") from exc
            rows.append((*idx, coef))
        try:
            ops.append(MultilinearTensor.from_products(arity, dim, rows))
        except ValueError as exc:
            raise CatalogError(f"{eid}: {exc}") from exc
    constraints = tuple(Constraint.parse(c, params) for c in raw.get("constraints", []))
    return AlgebraPresentation(eid, kind, dim, params, tuple(ops), constraints)


def load_catalog(document: str, base_dir: str | Path | None = None) -> list[AlgebraPresentation]:
    """Parse a catalog JSON document.

    ``imports`` entries (``{"catalog": file, "ids": [...]}``) pull entries
    from another catalog file, resolved against ``base_dir``, and re-tag
    them with this catalog's kind.
    """
    if not document.strip():
        return []
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CatalogError("catalog must be a JSON object")
    try:
        kind = Kind(doc["kind"])
        dim = int(doc["dim"])
    except (KeyError, ValueError) as exc:
        raise CatalogError(f"catalog header invalid: {exc}") from exc
    entries: list[AlgebraPresentation] = []
    for imp in doc.get("imports", []):
        if base_dir is None:
            raise CatalogError("catalog imports need a base directory")
        path = Path(base_dir) / imp["catalog"]
        imported = {e.id: e for e in load_catalog(path.read_text(), path.parent)}
        for eid in imp["ids"]:
            if eid not in imported:
                raise CatalogError(f"import of unknown id {eid!r} from {imp['catalog']}")
            src = imported[eid]
            if src.dim != dim:
                raise CatalogError(f"imported {eid} has dim {src.dim}, expected {dim}")
            entries.append(AlgebraPresentation(src.id, kind, dim, src.parameters, src.ops, src.constraints))
    for raw in doc.get("entries", []):
        entries.append(_entry_from_json(raw, kind, dim))
    seen = set()
    for e in entries:
        if e.id in seen:
            raise CatalogError(f"duplicate id {e.id!r}")
        seen.add(e.id)
    return entries


def load_catalog_file(path: str | Path) -> list[AlgebraPresentation]:
    path = Path(path)
    return load_catalog(path.read_text(), path.parent)


def catalog_index(entries: Iterable[AlgebraPresentation]) -> dict[str, AlgebraPresentation]:
    return {e.id: e for e in entries}


# -- identities --------------------------------------------------------------

def _add(*terms: tuple[int, Vector]) -> Vector:
    out: Vector = {}
    for sign, vec in terms:
        for k, v in vec.items():
            out[k] = out.get(k, RF_ZERO) + (v if sign > 0 else -v)
    return {k: v for k, v in out.items() if v}


@dataclass
class IdentityResult:
    name: str
    passed: bool
    tuples_checked: int = 0
    witness: Optional[tuple[int, ...]] = None  # 1-based basis indices
    residual: Optional[Dict[int, RationalFunction]] = None  # 1-based

    def to_json(self) -> dict:
        out = {"identity": self.name, "passed": self.passed, "tuples_checked": self.tuples_checked}
        if not self.passed:
            out["witness"] = list(self.witness)
            out["residual"] = {f"e{k}": str(v) for k, v in self.residual.items()}
        return out


@dataclass
class IdentityReport:
    algebra_id: str
    kind: Kind
    results: Dict[str, IdentityResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def failures(self) -> list[IdentityResult]:
        return [r for r in self.results.values() if not r.passed]

    def to_json(self) -> dict:
        return {"id": self.algebra_id, "kind": self.kind.value, "passed": self.passed,
                "identities": [r.to_json() for r in self.results.values()]}


def _identity_table(alg: AlgebraPresentation):
    """name -> (number of variables, antisymmetric variable pairs, evaluator)."""
    e = basis_vector
    if alg.kind is Kind.COMPATIBLE_LIE:
        b1, b2 = alg.ops
        B = b1.apply
        C = b2.apply

        def jacobi(op):
            def f(x, y, z):
                X, Y, Z = e(x), e(y), e(z)
                return _add((1, op(op(X, Y), Z)), (1, op(op(Y, Z), X)), (1, op(op(Z, X), Y)))
            return f

        def compat(x, y, z):
            X, Y, Z = e(x), e(y), e(z)
            return _add((1, C(B(X, Y), Z)), (1, C(B(Y, Z), X)), (1, C(B(Z, X), Y)),
                        (1, B(C(X, Y), Z)), (1, B(C(Y, Z), X)), (1, B(C(Z, X), Y)))

        def anti(op):
            return lambda x, y: _add((1, op(e(x), e(y))), (1, op(e(y), e(x))))

        return {
            "Antisymmetry-bracket1": (2, (), anti(B)),
            "Antisymmetry-bracket2": (2, (), anti(C)),
            "Jacobi-bracket1": (3, (), jacobi(B)),
            "Jacobi-bracket2": (3, (), jacobi(C)),
            "Compatibility": (3, (), compat),
        }

    bil, tri = alg.ops
    B = bil.apply
    T = tri.apply

    def i1(x, y):
        return _add((1, B(e(x), e(y))), (1, B(e(y), e(x))))

    def i2(x, y, z):
        return _add((1, T(e(x), e(y), e(z))), (1, T(e(y), e(x), e(z))))

    def cyc3(x, y, z):
        X, Y, Z = e(x), e(y), e(z)
        return _add((1, T(X, Y, Z)), (1, T(Y, Z, X)), (1, T(Z, X, Y)))

    def ly3(x, y, z):
        X, Y, Z = e(x), e(y), e(z)
        return _add((1, cyc3(x, y, z)), (1, B(B(X, Y), Z)), (1, B(B(Y, Z), X)), (1, B(B(Z, X), Y)))

    def ly4(x, y, z, u):
        X, Y, Z, U = e(x), e(y), e(z), e(u)
        return _add((1, T(B(X, Y), Z, U)), (1, T(B(Y, Z), X, U)), (1, T(B(Z, X), Y, U)))

    def ly5(x, y, u, v):
        X, Y, U, V = e(x), e(y), e(u), e(v)
        return _add((1, T(X, Y, B(U, V))), (-1, B(T(X, Y, U), V)), (-1, B(U, T(X, Y, V))))

    def ly6(u, v, x, y, z):
        U, V, X, Y, Z = e(u), e(v), e(x), e(y), e(z)
        return _add((1, T(U, V, T(X, Y, Z))), (-1, T(T(U, V, X), Y, Z)),
                    (-1, T(X, T(U, V, Y), Z)), (-1, T(X, Y, T(U, V, Z))))

    def b5(x, y, z, t):
        X, Y, Z, W = e(x), e(y), e(z), e(t)
        return _add((1, B(T(X, Y, Z), W)), (-1, B(T(X, Y, W), Z)), (1, T(Z, W, B(X, Y))),
                    (-1, T(X, Y, B(Z, W))), (1, B(B(X, Y), B(Z, W))))

    if alg.kind is Kind.LIE_YAMAGUTI:
        return {
            "LY1": (2, (), i1),
            "LY2": (3, (), i2),
            "LY3": (3, (), ly3),
            "LY4": (4, (), ly4),
            "LY5": (4, ((0, 1),), ly5),
            "LY6": (5, ((0, 1), (2, 3)), ly6),
        }
    return {
        "B1": (2, (), i1),
        "B2": (3, (), i2),
        "B3": (3, (), cyc3),
        "B4": (5, ((0, 1), (2, 3)), ly6),
        "B5": (4, ((0, 1), (2, 3)), b5),
    }


def _tuples(dim: int, nvars: int, antisym: Sequence[tuple[int, int]]):
    # an expression antisymmetric in slots (a, b) vanishes when they coincide
    # and changes sign under the swap, so a < b covers every case
    for tup in itertools.product(range(dim), repeat=nvars):
        if all(tup[a] < tup[b] for a, b in antisym):
            yield tup


def check_identities(algebra: AlgebraPresentation, names: Sequence[str] | None = None) -> IdentityReport:
    """Expand each defining identity over basis tuples; parameters stay symbolic."""
    report = IdentityReport(algebra.id, algebra.kind)
    for name, (nvars, antisym, fn) in _identity_table(algebra).items():
        if names is not None and name not in names:
            continue
        result = IdentityResult(name, True)
        for tup in _tuples(algebra.dim, nvars, antisym):
            result.tuples_checked += 1
            res = fn(*tup)
            if res:
                result.passed = False
                result.witness = tuple(i + 1 for i in tup)
                result.residual = {k + 1: v for k, v in sorted(res.items())}
                break
        report.results[name] = result
    return report


# -- nilpotency --------------------------------------------------------------

@dataclass
class NilpotencyResult:
    algebra_id: str
    dims: list[int]
    nilpotent: bool
    index: Optional[int]  # smallest m with L^(m) = 0

    def to_json(self) -> dict:
        return {"id": self.algebra_id, "dims": self.dims, "nilpotent": self.nilpotent, "index": self.index}


def _dense(v: Vector, dim: int) -> list[RationalFunction]:
    return [v.get(i, RF_ZERO) for i in range(dim)]


def _sparse(v: Sequence[RationalFunction]) -> Vector:
    return {i: x for i, x in enumerate(v) if x}


def nilpotency_series(algebra: AlgebraPresentation, bound: int = 8) -> NilpotencyResult:
    """Dimensions of L^(1), L^(2), ... until zero or ``bound`` terms."""
    if bound < 2:
        raise ValueError("bound must be at least 2")
    dim = algebra.dim
    series: dict[int, list[Vector]] = {1: [basis_vector(i) for i in range(dim)]}
    dims = [dim]
    bilinear = [op for op in algebra.ops if op.arity == 2]
    trilinear = [op for op in algebra.ops if op.arity == 3]
    for n in range(2, bound + 1):
        spanning = []
        for i in range(1, n):
            j = n - i
            for op in bilinear:
                for u in series[i]:
                    for v in series[j]:
                        spanning.append(op.apply(u, v))
        for op in trilinear:
            for i in range(1, n):
                for j in range(1, n + 1 - i):
                    k = n + 1 - i - j
                    if k < 1:
                        continue
                    for u in series[i]:
                        for v in series[j]:
                            for w in series[k]:
                                spanning.append(op.apply(u, v, w))
        basis = span_basis((_dense(v, dim) for v in spanning if v), dim)
        series[n] = [_sparse(b) for b in basis]
        dims.append(len(basis))
        if not basis:
            return NilpotencyResult(algebra.id, dims, True, n)
    return NilpotencyResult(algebra.id, dims, False, None)


# -- special classes ---------------------------------------------------------

def classify_special(algebra: AlgebraPresentation) -> dict[str, bool]:
    if algebra.kind is Kind.COMPATIBLE_LIE:
        raise ValueError("classify_special applies to Lie-Yamaguti and Bol algebras")
    bil, tri = algebra.ops
    is_lie = False
    if tri.is_zero():
        probe = AlgebraPresentation(algebra.id, Kind.COMPATIBLE_LIE, algebra.dim, algebra.parameters,
                                    (bil, MultilinearTensor(2, algebra.dim)))
        is_lie = check_identities(probe, ["Jacobi-bracket1"]).passed
    is_lts = False
    if bil.is_zero():
        probe = AlgebraPresentation(algebra.id, Kind.BOL, algebra.dim, algebra.parameters, algebra.ops)
        is_lts = check_identities(probe, ["B2", "B3", "B4"]).passed
    return {"isLie": is_lie, "isLieTripleSystem": is_lts}


# -- base change and the GL action ------------------------------------------

def change_basis(ops: Sequence[MultilinearTensor], basis: Matrix) -> tuple[MultilinearTensor, ...]:
    """Structure constants in the basis E_i = sum_j basis[i, j] e_j."""
    n = basis.rows
    inv = invert(basis)
    rows = [_sparse(basis.row(i)) for i in range(n)]
    inv_rows = [_sparse(inv.row(k)) for k in range(n)]
    out = []
    for op in ops:
        consts: Dict[tuple, RationalFunction] = {}
        for i, j in itertools.combinations(range(n), 2):
            tails = [()] if op.arity == 2 else [(k,) for k in range(n)]
            for tail in tails:
                args = [rows[i], rows[j]] + [rows[k] for k in tail]
                vec = op.apply(*args)
                new: Vector = {}
                for k, c in vec.items():
                    for l, m in inv_rows[k].items():
                        new[l] = new.get(l, RF_ZERO) + c * m
                for l, c in new.items():
                    if c:
                        consts[(i + 1, j + 1) + tuple(k + 1 for k in tail) + (l + 1,)] = c
        out.append(MultilinearTensor(op.arity, op.dim, consts))
    return tuple(out)


def act(g: Matrix, ops: Sequence[MultilinearTensor]) -> tuple[MultilinearTensor, ...]:
    """(g*mu)(x, ...) = g mu(g^-1 x, ...), with g acting on column vectors."""
    return change_basis(ops, invert(g).transpose())


@dataclass
class IsomorphismCheck:
    passed: bool
    diff: Dict[int, Dict[tuple, tuple]]  # op position -> coordinate -> (transported, target)

    def to_json(self) -> dict:
        return {"passed": self.passed,
                "diff": {str(pos): {",".join(map(str, k)): [str(a), str(b)] for k, (a, b) in d.items()}
                         for pos, d in self.diff.items()}}


def verify_isomorphism_witness(a: AlgebraPresentation, b: AlgebraPresentation, g: Matrix,
                               param_a: Mapping[str, object] | None = None,
                               param_b: Mapping[str, object] | None = None) -> IsomorphismCheck:
    """Check g * a == b exactly.  Parameter constraints are not enforced here."""
    if a.kind.arities != b.kind.arities or a.dim != b.dim:
        return IsomorphismCheck(False, {-1: {("kind/dim",): (a.kind.value, b.kind.value)}})
    sa = a.specialize(param_a or {}, check_constraints=False)
    sb = b.specialize(param_b or {}, check_constraints=False)
    moved = act(g, sa.ops)
    diff = {}
    for pos, (x, y) in enumerate(zip(moved, sb.ops)):
        d = x.diff(y)
        if d:
            diff[pos] = d
    return IsomorphismCheck(not diff, diff)


def search_isomorphism_witness(a: AlgebraPresentation, b: AlgebraPresentation,
                               param_a: Mapping[str, object] | None = None,
                               param_b: Mapping[str, object] | None = None,
                               scalars: Sequence[int] = (1, -1, 2, -2, 3)) -> Matrix | None:
    """Best-effort search over monomial matrices with at most one extra entry."""
    n = a.dim
    sa = a.specialize(param_a or {}, check_constraints=False)
    sb = b.specialize(param_b or {}, check_constraints=False)
    for perm in itertools.permutations(range(n)):
        for diag in itertools.product(scalars, repeat=n):
            base = [[0] * n for _ in range(n)]
            for j, i in enumerate(perm):
                base[i][j] = diag[j]
            candidates = [base]
            for i, j in itertools.product(range(n), repeat=2):
                if base[i][j] == 0:
                    for s in scalars:
                        m = [r[:] for r in base]
                        m[i][j] = s
                        candidates.append(m)
            for cand in candidates:
                g = Matrix.from_rows(cand)
                try:
                    if verify_isomorphism_witness(sa, sb, g).passed:
                        return g
                except SingularMatrix:
                    continue
    return None
