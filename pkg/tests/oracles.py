"""Independent reference computations, built on sympy and plain integers.

Nothing here imports the package's arithmetic beyond reading terms out of
its polynomials, so a bug in the kernel cannot hide in both places.
"""

from __future__ import annotations

import itertools

import sympy

from abelsurf.exactring import QW, Fp

W = sympy.Symbol("w")


def coeff_to_sympy(c):
    if isinstance(c, Fp):
        return sympy.Integer(c.v)
    if isinstance(c, QW):
        return sympy.Rational(c.a.numerator, c.a.denominator) + sympy.Rational(c.b.numerator, c.b.denominator) * W
    return sympy.Rational(c.numerator, c.denominator)


def to_sympy(p):
    """MultiPoly -> sympy expression (negative exponents become x**-k)."""
    syms = sympy.symbols(p.ring.variables)
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        mono = sympy.Integer(1)
        for s, k in zip(syms, e):
            mono *= s ** k
        expr += coeff_to_sympy(c) * mono
    return expr, syms


def reduce_w(expr):
    """Normal form modulo w^2 + w + 1."""
    return sympy.expand(sympy.rem(sympy.expand(expr), W ** 2 + W + 1, W))


def same(p, q, modulus=None) -> bool:
    """Compare a MultiPoly with a sympy expression."""
    a, _ = to_sympy(p)
    diff = reduce_w(a - q)
    if modulus is None:
        return diff == 0
    syms = sorted(diff.free_symbols, key=str)
    if not syms:
        return sympy.Integer(diff) % modulus == 0
    return sympy.Poly(diff, *syms, modulus=modulus).is_zero


def fiber_dimension_sympy(ideal, point, modulus: int) -> int:
    """Quotient dimension of the fiber ideal via sympy's Groebner bases over F_p."""
    ring = ideal.ring
    fld = ring.field
    vals = dict(zip(("x0", "x1", "x2"), [fld(v) for v in point]))
    fib = list(ideal.fiber)
    syms = sympy.symbols(fib)
    polys = []
    for g in ideal.generators:
        h = g.evaluate(vals)
        expr = sympy.Integer(0)
        for e, c in h.terms.items():
            mono = sympy.Integer(1)
            for name, s in zip(fib, syms):
                mono *= s ** e[ring.index[name]]
            expr += coeff_to_sympy(c) * mono
        polys.append(expr)
    G = sympy.groebner(polys, *syms, modulus=modulus, order="grevlex")
    leads = [sympy.Poly(g, *syms).monoms(order="grevlex")[0] for g in G.exprs]
    count = 0
    for e in itertools.product(range(8), repeat=len(syms)):
        if not any(all(a >= b for a, b in zip(e, l)) for l in leads):
            count += 1
    return count


def bruteforce_roots_mod_p(coeffs, p):
    """Roots of sum coeffs[i] t^i over F_p by exhaustion."""
    return [t for t in range(p) if sum(c * pow(t, i, p) for i, c in enumerate(coeffs)) % p == 0]


def matrix_det_sympy(rows):
    return sympy.Matrix([[coeff_to_sympy(c) for c in r] for r in rows]).det()
