"""Exact arithmetic over Q(t1, t2, h, u, w).

Polynomials are sparse maps from exponent vectors over the fixed variable
tuple ``VARIABLES`` to rationals.  The heavy lifting (products, exact
division, multivariate gcd) is delegated to python-flint's ``fmpq_mpoly``;
everything user facing (term order, printing, parsing, substitution,
normalization) is defined here.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

import flint

VARIABLES = ("t1", "t2", "h", "u", "w")
NVARS = len(VARIABLES)
_INDEX = {name: i for i, name in enumerate(VARIABLES)}

# flint's lex order with generators t1 > t2 > h > u > w lists terms by
# descending exponent vector, which is our canonical order.
_CTX = flint.fmpq_mpoly_ctx.get(VARIABLES, "lex")
_GENS = _CTX.gens()
_ZERO = _CTX.from_dict({})
_ONE = _CTX.from_dict({(0,) * NVARS: 1})


class ExactAlgError(ValueError):
    pass


class PoleError(ExactAlgError, ZeroDivisionError):
    """A substitution or division made a denominator vanish."""


class ParseError(ExactAlgError):
    pass


def _fq(c) -> flint.fmpq:
    if isinstance(c, Fraction):
        return flint.fmpq(c.numerator, c.denominator)
    return flint.fmpq(c)


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _raw_from_terms(terms: Mapping[tuple, object]):
    return _CTX.from_dict({tuple(e): _fq(c) for e, c in terms.items() if c != 0})


class MPoly:
    """Sparse polynomial in ``VARIABLES`` with rational coefficients."""

    __slots__ = ("_p",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        if terms is None:
            self._p = _ZERO
        else:
            for e in terms:
                if len(e) != NVARS or any(k < 0 for k in e):
                    raise ExactAlgError(f"bad exponent vector {e!r}")
            self._p = _raw_from_terms(terms)

    @classmethod
    def _wrap(cls, raw) -> MPoly:
        obj = cls.__new__(cls)
        obj._p = raw
        return obj

    @classmethod
    def var(cls, name: str) -> MPoly:
        return cls._wrap(_GENS[_INDEX[name]])

    @classmethod
    def const(cls, c) -> MPoly:
        return cls._wrap(_ONE * _fq(c))

    @property
    def terms(self) -> dict[tuple, Fraction]:
        """Exponent vector -> coefficient, in canonical (descending lex) order."""
        return {tuple(e): _to_fraction(c) for e, c in self._p.terms()}

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def degree(self, name: str) -> int:
        if self._p.is_zero():
            return -1
        return int(self._p.degrees()[_INDEX[name]])

    def total_degree(self) -> int:
        return -1 if self._p.is_zero() else int(self._p.total_degree())

    def leading_coefficient(self) -> Fraction:
        return _to_fraction(self._p.leading_coefficient())

    def __add__(self, other):
        return MPoly._wrap(self._p + _coerce_poly(other))

    __radd__ = __add__

    def __sub__(self, other):
        return MPoly._wrap(self._p - _coerce_poly(other))

    def __rsub__(self, other):
        return MPoly._wrap(_coerce_poly(other) - self._p)

    def __mul__(self, other):
        return MPoly._wrap(self._p * _coerce_poly(other))

    __rmul__ = __mul__

    def __neg__(self):
        return MPoly._wrap(-self._p)

    def __pow__(self, k: int):
        return MPoly._wrap(self._p ** k)

    def __eq__(self, other):
        if isinstance(other, (MPoly, int, Fraction)):
            return self._p == _coerce_poly(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple((tuple(e), (int(c.p), int(c.q))) for e, c in self._p.terms()))

    def __str__(self):
        return poly_to_str(self._p)

    def __repr__(self):
        return f"MPoly({poly_to_str(self._p)!r})"


def _coerce_poly(x):
    if isinstance(x, MPoly):
        return x._p
    if isinstance(x, (int, Fraction)):
        return _ONE * _fq(x)
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


def _normalize(n, d):
    """Reduce n/d by their gcd and make d primitive over Z with positive lead."""
    if d.is_zero():
        raise PoleError("zero denominator")
    if n.is_zero():
        return _ZERO, _ONE
    if not d.is_constant():
        g = n.gcd(d)
        if not g.is_constant():
            n = n / g
            d = d / g
    coeffs = d.coeffs()
    lcm_den = 1
    gcd_num = 0
    for c in coeffs:
        q = int(c.q)
        lcm_den = lcm_den * q // _gcd(lcm_den, q)
        gcd_num = _gcd(gcd_num, int(c.p))
    scale = flint.fmpq(lcm_den, gcd_num)
    if d.leading_coefficient() < 0:
        scale = -scale
    if scale != 1:
        n = n * scale
        d = d * scale
    return n, d


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


class FieldElem:
    """Element num/den of Q(t1, t2, h, u, w), kept in lowest terms.

    The denominator is primitive over the integers with positive leading
    coefficient in the canonical term order, so equal elements share one
    representation.  Equality is nevertheless decided by cross
    multiplication (``field_eq``).
    """

    __slots__ = ("_n", "_d", "_hash")

    def __init__(self, num=0, den=1):
        n = _coerce_field_part(num)
        d = _coerce_field_part(den)
        if d.is_zero():
            raise PoleError("division by zero")
        self._n, self._d = _normalize(n, d)
        self._hash = None

    @classmethod
    def _make(cls, n, d, reduce: bool = True) -> FieldElem:
        obj = cls.__new__(cls)
        if reduce:
            n, d = _normalize(n, d)
        obj._n, obj._d = n, d
        obj._hash = None
        return obj

    @classmethod
    def var(cls, name: str) -> FieldElem:
        return cls._make(_GENS[_INDEX[name]], _ONE, reduce=False)

    @property
    def num(self) -> MPoly:
        return MPoly._wrap(self._n)

    @property
    def den(self) -> MPoly:
        return MPoly._wrap(self._d)

    def is_zero(self) -> bool:
        return self._n.is_zero()

    def is_polynomial(self) -> bool:
        return self._d.is_one()

    def is_constant(self) -> bool:
        return self._n.is_constant() and self._d.is_constant()

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ExactAlgError(f"{self} is not a constant")
        if self._n.is_zero():
            return Fraction(0)
        return _to_fraction(self._n.leading_coefficient()) / _to_fraction(self._d.leading_coefficient())

    def __add__(self, other):
        other = _coerce_field(other)
        if other is NotImplemented:
            return other
        if other._n.is_zero():
            return self
        if self._n.is_zero():
            return other
        if self._d == other._d:
            return FieldElem._make(self._n + other._n, self._d)
        return FieldElem._make(self._n * other._d + other._n * self._d, self._d * other._d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem._make(-self._n, self._d, reduce=False)

    def __sub__(self, other):
        other = _coerce_field(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_field(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_field(other)
        if other is NotImplemented:
            return other
        if self._n.is_zero() or other._n.is_zero():
            return ZERO
        if self._d.is_one() and other._d.is_one():
            return FieldElem._make(self._n * other._n, _ONE, reduce=False)
        return FieldElem._make(self._n * other._n, self._d * other._d)

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        if self._n.is_zero():
            raise PoleError("division by zero")
        return FieldElem._make(self._d, self._n)

    def __truediv__(self, other):
        other = _coerce_field(other)
        if other is NotImplemented:
            return other
        if other._n.is_zero():
            raise PoleError("division by zero")
        return FieldElem._make(self._n * other._d, self._d * other._n)

    def __rtruediv__(self, other):
        other = _coerce_field(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k: int):
        if k >= 0:
            return FieldElem._make(self._n ** k, self._d ** k, reduce=False)
        return self.inverse() ** (-k)

    def __eq__(self, other):
        other = _coerce_field(other)
        if other is NotImplemented:
            return other
        return field_eq(self, other)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((MPoly._wrap(self._n), MPoly._wrap(self._d)))
        return self._hash

    def __bool__(self):
        return not self._n.is_zero()

    def __str__(self):
        return field_to_str(self)

    def __repr__(self):
        return f"FieldElem({field_to_str(self)!r})"

    def __reduce__(self):
        return (parse_field, (field_to_str(self),))


def _coerce_field_part(x):
    if isinstance(x, MPoly):
        return x._p
    if isinstance(x, (int, Fraction)):
        return _ONE * _fq(x)
    if isinstance(x, flint.fmpq_mpoly):
        return x
    raise TypeError(f"cannot use {type(x).__name__} in a rational function")


def _coerce_field(x):
    if isinstance(x, FieldElem):
        return x
    if isinstance(x, (int, Fraction)):
        return FieldElem._make(_ONE * _fq(x), _ONE, reduce=False)
    if isinstance(x, MPoly):
        return FieldElem._make(x._p, _ONE, reduce=False)
    return NotImplemented


ZERO = FieldElem(0)
ONE = FieldElem(1)


def const(c) -> FieldElem:
    return _coerce_field(c if isinstance(c, (int, Fraction)) else Fraction(c))


def var(name: str) -> FieldElem:
    if name not in _INDEX:
        raise ExactAlgError(f"unknown variable {name!r}; expected one of {VARIABLES}")
    return FieldElem.var(name)


def monomial(exps: Iterable[int], coeff=1) -> FieldElem:
    """coeff * prod v_i^e_i with integer (possibly negative) exponents."""
    exps = tuple(exps)
    pos = tuple(max(e, 0) for e in exps)
    neg = tuple(max(-e, 0) for e in exps)
    return FieldElem._make(_CTX.from_dict({pos: _fq(coeff)}), _CTX.from_dict({neg: 1}))


def field_arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ExactAlgError(f"unknown op {op!r}")


def field_eq(a: FieldElem, b: FieldElem) -> bool:
    """a == b decided by a.num * b.den == b.num * a.den."""
    if a._d == b._d:
        return a._n == b._n
    return a._n * b._d == b._n * a._d


def _subst_raw(p, images, dens):
    """Substitute rational images into the raw polynomial p.

    images[i] is (num_i, den_i) or None (variable kept).  Returns the raw
    pair (N, D) with p(images) = N/D, built term by term over the common
    denominator prod den_i^deg_i(p).
    """
    if p.is_zero():
        return _ZERO, _ONE
    degs = p.degrees()
    cache = [dict() for _ in range(NVARS)]

    def power(i, k, which):
        key = (k, which)
        val = cache[i].get(key)
        if val is None:
            base = images[i][which]
            val = base ** k
            cache[i][key] = val
        return val

    den = _ONE
    for i in range(NVARS):
        if images[i] is not None and not dens[i]:
            den = den * power(i, degs[i], 1)
    acc = _ZERO
    for e, c in p.terms():
        t = _ONE * c
        kept = [0] * NVARS
        for i, k in enumerate(e):
            if images[i] is None:
                kept[i] = k
                continue
            if k:
                t = t * power(i, k, 0)
            if not dens[i] and degs[i] - k:
                t = t * power(i, degs[i] - k, 1)
        if any(kept):
            t = t * _CTX.from_dict({tuple(kept): 1})
        acc = acc + t
    return acc, den


def field_subst(a: FieldElem, bindings: Mapping[str, object]) -> FieldElem:
    """Simultaneously substitute variables by field elements."""
    if not bindings:
        return a
    images = [None] * NVARS
    dens = [True] * NVARS
    for name, val in bindings.items():
        if name not in _INDEX:
            raise ExactAlgError(f"unknown variable {name!r}")
        val = _coerce_field(val)
        if val is NotImplemented:
            raise TypeError(f"binding for {name} is not a field element")
        i = _INDEX[name]
        images[i] = (val._n, val._d)
        dens[i] = val._d.is_one()
    if all(dens):
        gens = list(_GENS)
        for i in range(NVARS):
            if images[i] is not None:
                gens[i] = images[i][0]
        n = a._n.compose(*gens, ctx=_CTX) if not a._n.is_constant() else a._n
        d = a._d.compose(*gens, ctx=_CTX) if not a._d.is_constant() else a._d
    else:
        n1, n2 = _subst_raw(a._n, images, dens)
        d1, d2 = _subst_raw(a._d, images, dens)
        n, d = n1 * d2, d1 * n2
    if d.is_zero():
        desc = ", ".join(f"{k}->{_coerce_field(v)}" for k, v in sorted(bindings.items()))
        raise PoleError(f"denominator {MPoly._wrap(a._d)} vanishes under {desc}")
    return FieldElem._make(n, d)


def apply_geometric_relation(a: FieldElem) -> FieldElem:
    """Rewrite h^2 as t1*t2 (h itself stays formal)."""

    def reduce(p):
        out = {}
        for e, c in p.terms():
            q, r = divmod(e[2], 2)
            key = (e[0] + q, e[1] + q, r, e[3], e[4])
            out[key] = out.get(key, 0) + c
        return _CTX.from_dict({k: v for k, v in out.items() if v != 0})

    return FieldElem._make(reduce(a._n), reduce(a._d))


# ---------------------------------------------------------------- printing


def _coeff_str(c) -> str:
    p, q = int(c.p), int(c.q)
    return str(p) if q == 1 else f"{p}/{q}"


def poly_to_str(p) -> str:
    if isinstance(p, MPoly):
        p = p._p
    if p.is_zero():
        return "0"
    out = []
    for e, c in p.terms():
        factors = []
        for name, k in zip(VARIABLES, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        neg = c < 0
        mag = -c if neg else c
        if not factors:
            body = _coeff_str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _coeff_str(mag) + "*" + "*".join(factors)
        if out:
            out.append(("-" if neg else "+") + body)
        else:
            out.append(("-" if neg else "") + body)
    return "".join(out)


def field_to_str(a: FieldElem) -> str:
    """Canonical text: "num" when the denominator is 1, else "(num)/(den)"."""
    if a._d.is_one():
        return poly_to_str(a._n)
    return f"({poly_to_str(a._n)})/({poly_to_str(a._d)})"


# ----------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def expr(self):
        kind, val = self.peek()
        if (kind, val) in (("op", "-"), ("op", "+")):
            self.take()
            acc = self.term()
            if val == "-":
                acc = -acc
        else:
            acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            rhs = self.unary()
            acc = acc * rhs if op == "*" else acc / rhs
        return acc

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be an integer in {self.text!r}")
            return base ** (sign * val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return const(val)
        if kind == "name":
            if val not in _INDEX:
                raise ParseError(f"unknown variable {val!r}")
            return FieldElem.var(val)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_field(text: str) -> FieldElem:
    """Parse an expression over t1, t2, h, u, w with + - * / ^ and parentheses."""
    p = _Parser(text)
    if not p.toks:
        raise ParseError("empty expression")
    val = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input in {text!r}")
    return val


# ----------------------------------------------------------- linear solve


class SolveError(ExactAlgError):
    pass


def _row_primitive(row):
    """Divide a row of raw polynomials by the gcd of its entries."""
    g = None
    for v in row:
        if v.is_zero():
            continue
        g = v if g is None else g.gcd(v)
        if g.is_constant():
            break
    if g is None or g.is_constant():
        return row
    return [v / g for v in row]


def solve_linear(rows: list[list[FieldElem]], rhs: list[FieldElem]) -> list[FieldElem]:
    """Solve rows * x = rhs over the field; the solution must be unique.

    Fraction-free elimination: every row is scaled to polynomial entries,
    pivots are chosen with the smallest total degree, and each combined row
    is divided by the gcd of its entries to keep degrees down.  Raises
    SolveError if the system is inconsistent or underdetermined.
    """
    if not rows:
        raise SolveError("empty system")
    ncols = len(rows[0])
    mat = []
    for row, b in zip(rows, rhs):
        entries = [_coerce_field(v) for v in list(row) + [b]]
        den = _ONE
        for v in entries:
            if not v._d.is_one():
                g = den.gcd(v._d)
                den = den * (v._d / g)
        raw = [v._n * (den / v._d) for v in entries]
        if any(not v.is_zero() for v in raw):
            mat.append(_row_primitive(raw))
    pivots = []
    r = 0
    for col in range(ncols):
        best = None
        for i in range(r, len(mat)):
            v = mat[i][col]
            if not v.is_zero():
                key = (v.total_degree(), len(v))
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            continue
        i = best[1]
        mat[r], mat[i] = mat[i], mat[r]
        prow = mat[r]
        piv = prow[col]
        for j in range(len(mat)):
            if j == r:
                continue
            f = mat[j][col]
            if f.is_zero():
                continue
            g = piv.gcd(f)
            a, b = piv / g, f / g
            mat[j] = _row_primitive([a * x - b * y for x, y in zip(mat[j], prow)])
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    for i in range(r, len(mat)):
        if not mat[i][ncols].is_zero():
            raise SolveError("inconsistent system")
    if len(pivots) < ncols:
        free = sorted(set(range(ncols)) - set(pivots))
        raise SolveError(f"solution not unique; free columns {free}")
    # fully reduced (Gauss-Jordan), so each pivot row has one nonzero entry
    return [FieldElem._make(mat[k][ncols], mat[k][col]) for k, col in enumerate(pivots)]
