"""Independent reference computations used to freeze expected values.

Everything here goes through sympy or dense brute-force loops and never calls
the package's own base change, limit or kernel code.
"""

import itertools

import sympy

from nilgeo.field import Polynomial, RationalFunction

SYMBOLS = {name: sympy.Symbol(name) for name in ("t", "alpha", "beta", "s")}


def poly_to_sympy(p: Polynomial):
    expr = sympy.Integer(0)
    for mono, coef in p.terms.items():
        term = sympy.Rational(coef.numerator, coef.denominator)
        for name, exp in mono:
            term *= SYMBOLS.setdefault(name, sympy.Symbol(name)) ** exp
        expr += term
    return expr


def to_sympy(value):
    if isinstance(value, RationalFunction):
        return poly_to_sympy(value.num) / poly_to_sympy(value.den)
    return poly_to_sympy(value)


def same(a, b) -> bool:
    return sympy.simplify(to_sympy(a) - (to_sympy(b) if not isinstance(b, sympy.Basic) else b)) == 0


def dense_table(op):
    """Every ordered argument tuple (0-based) -> list of output coefficients (sympy)."""
    n = op.dim
    out = {}
    for args in itertools.product(range(n), repeat=op.arity):
        out[args] = [to_sympy(op.coefficient(*(a + 1 for a in args), l + 1)) for l in range(n)]
    return out


def brute_change_basis(op, basis_rows):
    """Constants of ``op`` in the basis E_i = sum_j B[i][j] e_j, by full multilinear expansion."""
    n = op.dim
    B = sympy.Matrix(basis_rows)
    Binv = B.inv()
    table = dense_table(op)
    result = {}
    for new_args in itertools.product(range(n), repeat=op.arity):
        vec = [sympy.Integer(0)] * n
        for old_args in itertools.product(range(n), repeat=op.arity):
            w = sympy.Integer(1)
            for a, b in zip(new_args, old_args):
                w *= B[a, b]
            if w == 0:
                continue
            for m, c in enumerate(table[old_args]):
                if c != 0:
                    vec[m] += w * c
        # coordinates in the new basis: v = sum_l y_l E_l  =>  y = v * B^-1 (row vector)
        coords = (sympy.Matrix([vec]) * Binv).applyfunc(sympy.cancel)
        result[new_args] = list(coords)
    return result


def brute_limit(expr, var="t"):
    return sympy.limit(expr, SYMBOLS[var], 0)


def derivation_dimension(alg):
    """dim Der by brute force: unknown matrix, Leibniz rule on all basis tuples, sympy rank."""
    n = alg.dim
    d = sympy.Matrix(n, n, lambda p, q: sympy.Symbol(f"d_{p}_{q}"))
    unknowns = list(d)
    eqs = []
    for op in alg.ops:
        table = dense_table(op)
        def mult(*vecs):
            out = [sympy.Integer(0)] * n
            for args in itertools.product(range(n), repeat=op.arity):
                w = sympy.Integer(1)
                for v, a in zip(vecs, args):
                    w *= v[a]
                if w != 0:
                    for l, c in enumerate(table[args]):
                        out[l] += w * c
            return out
        basis = [[sympy.Integer(int(i == j)) for j in range(n)] for i in range(n)]
        for args in itertools.product(range(n), repeat=op.arity):
            vecs = [basis[a] for a in args]
            lhs = list(d * sympy.Matrix(mult(*vecs)))
            rhs = [sympy.Integer(0)] * n
            for s in range(op.arity):
                moved = list(vecs)
                moved[s] = list(d * sympy.Matrix(vecs[s]))
                rhs = [x + y for x, y in zip(rhs, mult(*moved))]
            eqs.extend(sympy.expand(a - b) for a, b in zip(lhs, rhs))
    eqs = [e for e in eqs if e != 0]
    if not eqs:
        return n * n
    m, _ = sympy.linear_eq_to_matrix(eqs, unknowns)
    return n * n - m.rank(simplify=True)
