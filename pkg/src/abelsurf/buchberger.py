"""A small Buchberger implementation for zero-dimensional ideals.

Kept independent of the rest of the package on purpose: polynomials are
plain dicts {exponent tuple: coefficient} and the monomial order is graded
reverse lexicographic.  Used to cross-check fiber computations.
"""

from __future__ import annotations

from itertools import combinations, product


def _key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def lead(f: dict):
    e = max(f, key=_key)
    return e, f[e]


def _sub_mul(f: dict, g: dict, c, shift) -> dict:
    """f - c * x^shift * g."""
    out = dict(f)
    for e, a in g.items():
        e2 = tuple(x + y for x, y in zip(e, shift))
        v = out.get(e2, 0 * a) - c * a
        if v:
            out[e2] = v
        else:
            out.pop(e2, None)
    return out


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def normal_form(f: dict, basis: list) -> dict:
    """Full reduction of f by the list ``basis``."""
    f = dict(f)
    rem: dict = {}
    lts = [lead(g) for g in basis]
    while f:
        e, c = lead(f)
        for g, (ge, gc) in zip(basis, lts):
            if _divides(ge, e):
                f = _sub_mul(f, g, c / gc, tuple(x - y for x, y in zip(e, ge)))
                break
        else:
            rem[e] = c
            del f[e]
    return rem


def _spoly(f, g):
    (fe, fc), (ge, gc) = lead(f), lead(g)
    l = tuple(max(x, y) for x, y in zip(fe, ge))
    a = _sub_mul({}, f, -1 / fc, tuple(x - y for x, y in zip(l, fe)))
    return _sub_mul(a, g, 1 / gc, tuple(x - y for x, y in zip(l, ge)))


def groebner(gens: list) -> list:
    """Reduced Groebner basis (monic) of the ideal generated by ``gens``."""
    G = [dict(g) for g in gens if g]
    pairs = list(combinations(range(len(G)), 2))
    while pairs:
        i, j = pairs.pop()
        ei, ej = lead(G[i])[0], lead(G[j])[0]
        if all(min(x, y) == 0 for x, y in zip(ei, ej)):
            continue          # coprime leading monomials
        r = normal_form(_spoly(G[i], G[j]), G)
        if r:
            G.append(r)
            pairs += [(k, len(G) - 1) for k in range(len(G) - 1)]
    # minimise and reduce
    G = [g for g in G if g]
    minimal = []
    for i, g in enumerate(G):
        e = lead(g)[0]
        if any(_divides(lead(h)[0], e) and (lead(h)[0] != e or k < i) for k, h in enumerate(G) if k != i):
            continue
        minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        r = normal_form(g, minimal[:i] + minimal[i + 1:])
        r = _monic(r)
        out.append(r)
    return sorted(out, key=lambda g: _key(lead(g)[0]))


def _monic(f):
    c = lead(f)[1]
    return {e: a / c for e, a in f.items()}


def standard_monomials(G: list, nvars: int, limit: int = 50) -> list | None:
    """Monomials outside the leading ideal; None if there are more than ``limit``."""
    lts = [lead(g)[0] for g in G]
    out = []
    for d in range(limit + 1):
        level = [e for e in product(range(d + 1), repeat=nvars) if sum(e) == d
                 and not any(_divides(l, e) for l in lts)]
        if not level:
            return sorted(out, key=_key)
        out += level
        if len(out) > limit:
            return None
    return None


def quotient_dimension(gens: list, nvars: int) -> int | None:
    sm = standard_monomials(groebner(gens), nvars)
    return None if sm is None else len(sm)
