"""Exact coefficient fields and sparse weighted-graded polynomials.

Three coefficient fields are supported: the rationals, the rationals with a
primitive cube root of unity adjoined, and prime fields of characteristic at
least 5.  Polynomials live in a :class:`PolyRing`, which fixes the variable
order, the weights and (optionally) one variable that may appear with
negative exponents.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

__all__ = [
    "FieldSpec", "Fp", "QW", "PolyRing", "MultiPoly", "PolyMatrix",
    "parse_poly", "substitute", "weighted_degree", "exact_divide",
    "INHOMOGENEOUS", "ZERO", "NonExactDivision", "ParseError",
]

INHOMOGENEOUS = "inhomogeneous"
ZERO = "zero"


class NonExactDivision(ArithmeticError):
    pass


class ParseError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# field elements


class Fp:
    """Residue class modulo a prime."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _other(self, o):
        if isinstance(o, Fp):
            if o.p != self.p:
                raise ValueError("mixing prime fields")
            return o.v
        if isinstance(o, int):
            return o
        if isinstance(o, Fraction):
            return o.numerator * pow(o.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else Fp(self.v + w, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else Fp(self.v - w, self.p)

    def __rsub__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else Fp(w - self.v, self.p)

    def __mul__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else Fp(self.v * w, self.p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return NotImplemented
        if w % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(self.v * pow(w, -1, self.p), self.p)

    def __rtruediv__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return NotImplemented
        return Fp(w, self.p) / self

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pow__(self, e: int):
        if e < 0:
            if self.v == 0:
                raise ZeroDivisionError("zero to a negative power")
            return Fp(pow(pow(self.v, -1, self.p), -e, self.p), self.p)
        return Fp(pow(self.v, e, self.p), self.p)

    def __eq__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return NotImplemented
        return (self.v - w) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def signed(self) -> int:
        return self.v - self.p if self.v > self.p // 2 else self.v

    def __repr__(self):
        return "Fp(%d, %d)" % (self.v, self.p)

    def __str__(self):
        return str(self.signed())


class QW:
    """a + b*w over the rationals with w^2 + w + 1 = 0."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def _other(o):
        if isinstance(o, QW):
            return o
        if isinstance(o, (int, Fraction)):
            return QW(o, 0)
        return None

    def __add__(self, o):
        o = self._other(o)
        return NotImplemented if o is None else QW(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        return NotImplemented if o is None else QW(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        o = self._other(o)
        return NotImplemented if o is None else o - self

    def __mul__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        bd = self.b * o.b
        return QW(self.a * o.a - bd, self.a * o.b + self.b * o.a - bd)

    __rmul__ = __mul__

    def inverse(self) -> "QW":
        n = self.a * self.a - self.a * self.b + self.b * self.b
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(w)")
        return QW((self.a - self.b) / n, -self.b / n)

    def __truediv__(self, o):
        o = self._other(o)
        return NotImplemented if o is None else self * o.inverse()

    def __rtruediv__(self, o):
        o = self._other(o)
        return NotImplemented if o is None else o * self.inverse()

    def __neg__(self):
        return QW(-self.a, -self.b)

    def __pow__(self, e: int):
        base = self if e >= 0 else self.inverse()
        out = QW(1)
        for _ in range(abs(e)):
            out = out * base
        return out

    def __eq__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash(self.a) if self.b == 0 else hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return "QW(%s, %s)" % (self.a, self.b)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            b = {1: "w", -1: "-w"}.get(self.b, "%s*w" % self.b)
            return "(%s)" % b
        sign = "-" if self.b < 0 else "+"
        b = abs(self.b)
        return "(%s %s %s)" % (self.a, sign, "w" if b == 1 else "%s*w" % b)


@dataclass(frozen=True)
class FieldSpec:
    """One of ``Q``, ``QW`` (rationals with w) or ``FP`` (prime field)."""

    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in ("Q", "QW", "FP"):
            raise ValueError("unknown field kind %r" % self.kind)
        if self.kind == "FP":
            if self.modulus is None or not _is_prime(self.modulus) or self.modulus < 5:
                raise ValueError("prime field needs a prime modulus >= 5")
        elif self.modulus is not None:
            raise ValueError("modulus only makes sense for prime fields")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("Q")

    @classmethod
    def rationals_omega(cls) -> "FieldSpec":
        return cls("QW")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("FP", p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        t = text.strip().lower()
        if t == "q":
            return cls.rationals()
        if t == "qw":
            return cls.rationals_omega()
        if t.startswith("fp:"):
            return cls.prime(int(t[3:]))
        raise ValueError("field must be q, qw or fp:<p>, got %r" % text)

    @property
    def label(self) -> str:
        return {"Q": "q", "QW": "qw"}.get(self.kind) or "fp:%d" % self.modulus

    @property
    def characteristic(self) -> int:
        return self.modulus if self.kind == "FP" else 0

    def __call__(self, x):
        """Coerce an int, Fraction, string literal or element into the field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.kind == "Q":
            if isinstance(x, QW):
                if x.b:
                    raise ValueError("element %s is not rational" % x)
                return x.a
            return Fraction(x)
        if self.kind == "QW":
            return x if isinstance(x, QW) else QW(Fraction(x))
        if isinstance(x, Fp):
            return x
        if isinstance(x, Fraction):
            if x.denominator % self.modulus == 0:
                raise ZeroDivisionError("denominator vanishes mod %d" % self.modulus)
            return Fp(x.numerator * pow(x.denominator, -1, self.modulus), self.modulus)
        return Fp(int(x), self.modulus)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def has_omega(self) -> bool:
        return self.kind == "QW" or (self.kind == "FP" and self.modulus % 3 == 1)

    def omega(self):
        """The canonical primitive cube root of unity."""
        if self.kind == "QW":
            return QW(0, 1)
        if self.kind == "FP" and self.modulus % 3 == 1:
            for r in range(2, self.modulus):
                if pow(r, 3, self.modulus) == 1:
                    return Fp(r, self.modulus)
        raise ValueError("field %s has no primitive cube root of unity" % self.label)

    def random(self, rng, bound: int = 9):
        """A random element; over characteristic 0 small numerators are used."""
        if self.kind == "FP":
            return Fp(rng.randrange(self.modulus), self.modulus)
        a = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
        if self.kind == "QW":
            return QW(a, Fraction(rng.randint(-bound, bound), rng.randint(1, 3)))
        return a

    def elements(self) -> Iterable:
        if self.kind != "FP":
            raise ValueError("only prime fields are enumerable")
        return (Fp(i, self.modulus) for i in range(self.modulus))

    def sqrt(self, a):
        """Square root in the field or None."""
        a = self(a)
        if not a:
            return a
        if self.kind == "FP":
            p = self.modulus
            if pow(a.v, (p - 1) // 2, p) != 1:
                return None
            for r in range(1, p):
                if r * r % p == a.v:
                    return Fp(r, p)
            return None
        if self.kind == "Q":
            return _rational_sqrt(a)
        # in Q(w): try rational square roots of a and of -3a (sqrt(-3) = 1 + 2w)
        if a.b == 0:
            r = _rational_sqrt(a.a)
            if r is not None:
                return QW(r)
            r = _rational_sqrt(-a.a / 3)
            if r is not None:
                return QW(r) * QW(1, 2)
        return None

    def to_json(self, x) -> str:
        return str(self(x))

    def from_text(self, text: str):
        """Parse a scalar literal such as ``3``, ``-2/5`` or ``1/2 + w``."""
        return parse_poly(text, PolyRing(self, ())).constant_value()


def _rational_sqrt(q: Fraction):
    from math import isqrt

    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


# ---------------------------------------------------------------------------
# rings and polynomials

_FIXED_ORDER = ["x0", "x1", "x2", "y0", "y1", "y2", "z0", "z1", "z2", "t"]
_DEFAULT_WEIGHTS = {"x": 1, "y": 2, "z": 2, "t": 3}


def _default_weight(name: str) -> int:
    if name in _FIXED_ORDER:
        return _DEFAULT_WEIGHTS[name[0]]
    return 0


@dataclass(frozen=True)
class PolyRing:
    """Variables (stored in canonical order), weights and the inverted variable.

    Variables outside ``x0..z2, t`` are parameters; they keep the order in
    which they were given and come after the fixed names.
    """

    field: FieldSpec
    variables: tuple
    weights: tuple = None
    inverted: str | None = None
    index: dict = field(default=None, compare=False, hash=False, repr=False)

    def __init__(self, fld: FieldSpec, variables: Iterable[str],
                 weights: Mapping[str, int] | None = None, inverted: str | None = None):
        names = list(dict.fromkeys(variables))
        if "w" in names:
            raise ValueError("'w' is reserved for the cube root of unity")
        fixed = [v for v in _FIXED_ORDER if v in names]
        params = [v for v in names if v not in _FIXED_ORDER]
        ordered = tuple(fixed + params)
        wmap = dict(weights or {})
        wts = tuple(int(wmap.get(v, _default_weight(v))) for v in ordered)
        if any(w < 0 for w in wts):
            raise ValueError("weights must be nonnegative")
        if inverted is not None and inverted not in ordered:
            raise ValueError("inverted variable %r is not in the ring" % inverted)
        object.__setattr__(self, "field", fld)
        object.__setattr__(self, "variables", ordered)
        object.__setattr__(self, "weights", wts)
        object.__setattr__(self, "inverted", inverted)
        object.__setattr__(self, "index", {v: i for i, v in enumerate(ordered)})

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def weight_of(self, name: str) -> int:
        return self.weights[self.index[name]]

    def with_field(self, fld: FieldSpec) -> "PolyRing":
        return PolyRing(fld, self.variables, dict(zip(self.variables, self.weights)), self.inverted)

    def with_inverted(self, inverted: str | None) -> "PolyRing":
        return PolyRing(self.field, self.variables, dict(zip(self.variables, self.weights)), inverted)

    def extend(self, names: Iterable[str], weights: Mapping[str, int] | None = None) -> "PolyRing":
        w = dict(zip(self.variables, self.weights))
        w.update(weights or {})
        return PolyRing(self.field, list(self.variables) + list(names), w, self.inverted)

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.const(1)

    def const(self, c) -> "MultiPoly":
        c = self.field(c)
        return MultiPoly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str) -> "MultiPoly":
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return MultiPoly(self, {tuple(e): self.field.one})

    def gens(self, *names: str):
        return [self.var(n) for n in names]

    def monomial(self, exps: Mapping[str, int], coeff=1) -> "MultiPoly":
        e = [0] * self.nvars
        for k, v in exps.items():
            e[self.index[k]] = v
        return MultiPoly(self, {tuple(e): self.field(coeff)}) if self.field(coeff) else self.zero()

    def parse(self, text: str) -> "MultiPoly":
        return parse_poly(text, self)

    def __call__(self, x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x.to_ring(self)
        if isinstance(x, str):
            return self.parse(x)
        return self.const(x)


class MultiPoly:
    """Sparse polynomial: a map from exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict, check: bool = False):
        self.ring = ring
        if check:
            terms = {e: c for e, c in terms.items() if c}
            inv = ring.index.get(ring.inverted) if ring.inverted else None
            for e in terms:
                for i, k in enumerate(e):
                    if k < 0 and i != inv:
                        raise ValueError("negative exponent of a non-inverted variable")
        self.terms = terms
        self._hash = None

    # -- coercion -----------------------------------------------------------
    def _coerce(self, o) -> "MultiPoly":
        if isinstance(o, MultiPoly):
            if o.ring is not self.ring and o.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return o
        return self.ring.const(o)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, o):
        try:
            o = self._coerce(o)
        except (TypeError, ValueError):
            return NotImplemented
        t = dict(self.terms)
        for e, c in o.terms.items():
            s = t.get(e)
            if s is None:
                t[e] = c
            else:
                s = s + c
                if s:
                    t[e] = s
                else:
                    del t[e]
        return MultiPoly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        try:
            o = self._coerce(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, MultiPoly):
            try:
                c = self.ring.field(o)
            except (TypeError, ValueError):
                return NotImplemented
            if not c:
                return self.ring.zero()
            return MultiPoly(self.ring, {e: v * c for e, v in self.terms.items()})
        o = self._coerce(o)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e)
                t[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly(self.ring, {e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, o):
        """Division by a scalar or by an exactly dividing polynomial."""
        if isinstance(o, MultiPoly):
            return exact_divide(self, o)
        c = self.ring.field(o)
        inv = self.ring.field.one / c
        return self * inv

    def __pow__(self, e: int):
        if e < 0:
            if len(self.terms) != 1:
                raise ArithmeticError("only monomials can be inverted")
            (ex, c), = self.terms.items()
            inv = self.ring.index.get(self.ring.inverted)
            for i, k in enumerate(ex):
                if k and i != inv:
                    raise ArithmeticError("monomial is not invertible in this ring")
            return MultiPoly(self.ring, {tuple(-k for k in ex): self.ring.field.one / c}) ** (-e)
        out = self.ring.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, o):
        if isinstance(o, MultiPoly):
            return self.ring == o.ring and self.terms == o.terms
        try:
            return self.terms == self.ring.const(o).terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.variables, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        if not self.terms:
            return self.ring.field.zero
        if not self.is_constant():
            raise ValueError("polynomial %s is not constant" % self)
        return next(iter(self.terms.values()))

    def term_weight(self, e) -> int:
        return sum(a * w for a, w in zip(e, self.ring.weights))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda it: (self.term_weight(it[0]), it[0]), reverse=True)

    def leading_term(self):
        return self.sorted_terms()[0] if self.terms else None

    def coefficient(self, exps: Mapping[str, int] | tuple):
        if not isinstance(exps, tuple):
            e = [0] * self.ring.nvars
            for k, v in exps.items():
                e[self.ring.index[k]] = v
            exps = tuple(e)
        return self.terms.get(exps, self.ring.field.zero)

    def degree_in(self, name: str) -> tuple:
        """(min, max) exponent of a variable; (0, 0) for the zero polynomial."""
        i = self.ring.index[name]
        ex = [e[i] for e in self.terms] or [0]
        return min(ex), max(ex)

    def variables_used(self) -> set:
        return {self.ring.variables[i] for e in self.terms for i, k in enumerate(e) if k}

    def coefficients_in(self, names: Iterable[str]) -> dict:
        """Split into a dict: exponent tuple in ``names`` -> coefficient polynomial."""
        idx = [self.ring.index[n] for n in names]
        out: dict = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in idx)
            rest = list(e)
            for i in idx:
                rest[i] = 0
            out.setdefault(key, {})[tuple(rest)] = c
        return {k: MultiPoly(self.ring, v) for k, v in out.items()}

    def to_ring(self, ring: PolyRing) -> "MultiPoly":
        """Move into a ring with compatible variable names (missing ones must not occur)."""
        if ring == self.ring:
            return self
        pos = []
        for i, v in enumerate(self.ring.variables):
            pos.append(ring.index.get(v))
        t = {}
        fld = ring.field
        inv = ring.index.get(ring.inverted) if ring.inverted else None
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    j = pos[i]
                    if j is None:
                        raise ValueError("variable %s missing in target ring" % self.ring.variables[i])
                    if k < 0 and j != inv:
                        raise ValueError("variable %s is not inverted in target ring" % self.ring.variables[i])
                    ne[j] = k
            t[tuple(ne)] = fld(c)
        return MultiPoly(ring, t, check=True)

    def map_coefficients(self, f: Callable, ring: PolyRing | None = None) -> "MultiPoly":
        ring = ring or self.ring
        return MultiPoly(ring, {e: f(c) for e, c in self.terms.items()}, check=True)

    def evaluate(self, values: Mapping[str, object]) -> "MultiPoly":
        """Plug field values into some variables; the ring is unchanged."""
        fld = self.ring.field
        idx = {self.ring.index[k]: fld(v) for k, v in values.items()}
        t: dict = {}
        for e, c in self.terms.items():
            ne = list(e)
            for i, v in idx.items():
                if e[i]:
                    c = c * v ** e[i]
                    ne[i] = 0
            if c:
                ne = tuple(ne)
                s = t.get(ne)
                t[ne] = c if s is None else s + c
        return MultiPoly(self.ring, {e: c for e, c in t.items() if c})

    def shift(self, name: str, k: int) -> "MultiPoly":
        """Multiply by name^k without checks (used to clear or restore denominators)."""
        i = self.ring.index[name]
        t = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[i] += k
            t[tuple(ne)] = c
        return MultiPoly(self.ring, t)

    def cleared(self) -> tuple:
        """(k, p) with p = self * inverted^k a polynomial and k minimal."""
        if self.ring.inverted is None or not self.terms:
            return 0, self
        lo, _ = self.degree_in(self.ring.inverted)
        k = max(0, -lo)
        return k, self.shift(self.ring.inverted, k)

    def normalized(self) -> "MultiPoly":
        """Denominator-cleared polynomial with a normalised leading coefficient.

        Over Q the coefficients are made coprime integers with a positive
        leading coefficient; over the other fields the polynomial is made monic.
        """
        p = self.cleared()[1]
        if not p.terms:
            return p
        lc = p.leading_term()[1]
        fld = self.ring.field
        if fld.kind == "Q":
            from math import gcd, lcm

            den = 1
            num = 0
            for c in p.terms.values():
                den = lcm(den, c.denominator)
            for c in p.terms.values():
                num = gcd(num, (c * den).numerator)
            s = Fraction(den, num)
            if lc < 0:
                s = -s
            return p * s
        return p * (fld.one / lc)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return "MultiPoly(%s)" % format_poly(self)


# ---------------------------------------------------------------------------
# printing and parsing


def _monomial_text(ring: PolyRing, e) -> str:
    parts = []
    for v, k in zip(ring.variables, e):
        if k == 1:
            parts.append(v)
        elif k:
            parts.append("%s^%d" % (v, k))
    return "*".join(parts)


def format_poly(p: MultiPoly) -> str:
    if not p.terms:
        return "0"
    out = []
    for e, c in p.sorted_terms():
        mono = _monomial_text(p.ring, e)
        neg = False
        if isinstance(c, Fp):
            s = c.signed()
            neg, cs = s < 0, str(abs(s))
        elif isinstance(c, QW) and c.b:
            cs = str(c)
        else:
            c = c.a if isinstance(c, QW) else c
            neg, cs = c < 0, str(abs(c))
        if mono:
            if cs == "1":
                text = mono
            else:
                text = cs + "*" + mono
        else:
            text = cs
        if not out:
            out.append(("-" if neg else "") + text)
        else:
            out.append((" - " if neg else " + ") + text)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str):
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        pos = m.end()
        num, name, op = m.groups()
        if num is not None:
            toks.append(("num", int(num)))
        elif name is not None:
            toks.append(("name", name))
        elif op is not None and op.strip():
            if op not in "+-*^()/":
                raise ParseError("unexpected character %r" % op)
            toks.append(("op", op))
    toks.append(("end", None))
    return toks


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t != ("op", op):
            raise ParseError("expected %r" % op)

    def parse(self) -> MultiPoly:
        if self.peek()[0] == "end":
            raise ParseError("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            t = self.peek()
            if t == ("op", "/"):
                raise ParseError("division is not supported by the parser")
            raise ParseError("trailing input near %r" % (t[1],))
        return p

    def expr(self) -> MultiPoly:
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> MultiPoly:
        p = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            p = p * self.factor()
        return p

    def factor(self) -> MultiPoly:
        t = self.peek()
        if t == ("op", "-"):
            self.take()
            return -self.factor()
        if t == ("op", "+"):
            self.take()
            return self.factor()
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            t = self.take()
            if t[0] != "num":
                raise ParseError("exponent must be an integer literal")
            base = base ** (sign * t[1])
        return base

    def atom(self) -> MultiPoly:
        t = self.take()
        ring = self.ring
        if t[0] == "num":
            val = Fraction(t[1])
            if self.peek() == ("op", "/"):
                self.take()
                d = self.take()
                if d[0] != "num":
                    raise ParseError("division is not supported by the parser")
                if d[1] == 0:
                    raise ParseError("zero denominator")
                val = Fraction(t[1], d[1])
            return ring.const(val)
        if t[0] == "name":
            name = t[1]
            if name == "w":
                if not ring.field.has_omega():
                    raise ParseError("w (cube root of unity) is not available over %s" % ring.field.label)
                return ring.const(ring.field.omega())
            if name not in ring.index:
                raise ParseError("unknown variable %r" % name)
            return ring.var(name)
        if t == ("op", "("):
            p = self.expr()
            self.expect(")")
            return p
        if t == ("op", "/"):
            raise ParseError("division is not supported by the parser")
        raise ParseError("unexpected token %r" % (t[1],))


def parse_poly(text: str, ring: PolyRing) -> MultiPoly:
    """Parse ``text`` into the ring.  Only literals may be divided (``3/2``)."""
    return _Parser(text, ring).parse()


# ---------------------------------------------------------------------------
# operations


def substitute(p: MultiPoly, mapping: Mapping[str, MultiPoly], target: PolyRing | None = None) -> MultiPoly:
    """Ring homomorphism sending each mapped variable to its image.

    Unmapped variables go to the variable of the same name in the target ring.
    Negative powers are only allowed when the image is an invertible monomial.
    """
    if target is None:
        imgs = [m for m in mapping.values() if isinstance(m, MultiPoly)]
        target = imgs[0].ring if imgs else p.ring
    images = []
    for v in p.ring.variables:
        if v in mapping:
            img = mapping[v]
            images.append(img if isinstance(img, MultiPoly) else target.const(img))
        elif v in target.index:
            images.append(target.var(v))
        else:
            images.append(None)
    cache: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            if images[i] is None:
                raise ValueError("no image for variable %s" % p.ring.variables[i])
            try:
                cache[key] = images[i] ** k
            except ArithmeticError as exc:
                raise ArithmeticError("substitution needs the inverse of %s" % images[i]) from exc
        return cache[key]

    out = target.zero()
    acc: dict = {}
    fld = target.field
    for e, c in p.terms.items():
        term = None
        for i, k in enumerate(e):
            if k:
                term = power(i, k) if term is None else term * power(i, k)
        if term is None:
            term = target.one()
        c = fld(c)
        for te, tc in term.terms.items():
            s = acc.get(te)
            acc[te] = tc * c if s is None else s + tc * c
    out = MultiPoly(target, {e: c for e, c in acc.items() if c})
    return out


def weighted_degree(p: MultiPoly):
    """Common weighted degree of all terms, ``INHOMOGENEOUS`` or ``ZERO``."""
    if not p.terms:
        return ZERO
    degs = {p.term_weight(e) for e in p.terms}
    return degs.pop() if len(degs) == 1 else INHOMOGENEOUS


def _poly_divide(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Division in the polynomial ring (no negative exponents anywhere)."""
    key = lambda e: (sum(e), e)
    lq = max(q.terms, key=key)
    cq = q.terms[lq]
    rem = dict(p.terms)
    quo: dict = {}
    while rem:
        lp = max(rem, key=key)
        d = tuple(a - b for a, b in zip(lp, lq))
        if any(k < 0 for k in d):
            raise NonExactDivision("%s does not divide %s" % (q, p))
        c = rem[lp] / cq
        quo[d] = c
        for e, v in q.terms.items():
            ne = tuple(a + b for a, b in zip(e, d))
            s = rem.get(ne)
            s = -v * c if s is None else s - v * c
            if s:
                rem[ne] = s
            else:
                rem.pop(ne, None)
    return MultiPoly(p.ring, quo)


def exact_divide(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """The r with p = q*r, raising ``NonExactDivision`` when none exists."""
    if q.ring != p.ring:
        raise ValueError("operands live in different rings")
    if not q.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    if not p.terms:
        return p
    inv = p.ring.inverted
    if inv is None:
        return _poly_divide(p, q)
    # the inverted variable is a unit: strip it from both sides first
    a, P = p.cleared()
    lo_q = q.degree_in(inv)[0]
    Q = q.shift(inv, -lo_q)
    r = _poly_divide(P, Q)
    return r.shift(inv, -a - lo_q)


# ---------------------------------------------------------------------------
# matrices


class PolyMatrix:
    """Dense matrix of polynomials over one ring."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring: PolyRing, rows):
        self.ring = ring
        self.rows = [[e if isinstance(e, MultiPoly) else ring(e) for e in r] for r in rows]
        for r in self.rows:
            for e in r:
                if e.ring != ring:
                    raise ValueError("matrix entries must share one ring")

    @classmethod
    def zeros(cls, ring, n, m=None):
        m = n if m is None else m
        return cls(ring, [[ring.zero() for _ in range(m)] for _ in range(n)])

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, [[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def T(self) -> "PolyMatrix":
        n, m = self.shape
        return PolyMatrix(self.ring, [[self.rows[i][j] for i in range(n)] for j in range(m)])

    def __add__(self, o):
        return PolyMatrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, o.rows)])

    def __sub__(self, o):
        return PolyMatrix(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, o.rows)])

    def __neg__(self):
        return PolyMatrix(self.ring, [[-a for a in r] for r in self.rows])

    def __mul__(self, c):
        return PolyMatrix(self.ring, [[a * c for a in r] for r in self.rows])

    __rmul__ = __mul__

    def __matmul__(self, o: "PolyMatrix") -> "PolyMatrix":
        n, k = self.shape
        k2, m = o.shape
        if k != k2:
            raise ValueError("shape mismatch")
        z = self.ring.zero()
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                s = z
                for t in range(k):
                    a, b = self.rows[i][t], o.rows[t][j]
                    if a.terms and b.terms:
                        s = s + a * b
                row.append(s)
            out.append(row)
        return PolyMatrix(self.ring, out)

    def apply(self, vec):
        return [sum((a * v for a, v in zip(r, vec)), self.ring.zero()) for r in self.rows]

    def map(self, f) -> "PolyMatrix":
        rows = [[f(a) for a in r] for r in self.rows]
        ring = rows[0][0].ring if rows and rows[0] else self.ring
        return PolyMatrix(ring, rows)

    def is_symmetric(self) -> bool:
        n, m = self.shape
        return n == m and all(self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i))

    def is_zero(self) -> bool:
        return all(not a.terms for r in self.rows for a in r)

    def __eq__(self, o):
        return isinstance(o, PolyMatrix) and self.rows == o.rows

    def __repr__(self):
        return "PolyMatrix(%s)" % [[str(a) for a in r] for r in self.rows]
