"""The l-colored symmetric function ring over Q(t1, t2, h, u, w).

Elements are stored in the colored power-sum basis: a monomial is a sorted
tuple of generators p^(color)_degree[alphabet], with alphabets "X" and "Y".
Schur and vec-Schur functions are views computed from characters of the
symmetric group (Murnaghan-Nakayama).
"""

from __future__ import annotations

import math
import threading
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .exactalg import ONE, ZERO, FieldElem, const, field_subst, parse_field, var
from .partitions import EMPTY, Partition, core_quotient, from_core_quotient, partitions

ALPHABETS = ("X", "Y")


class MultiSymError(ValueError):
    pass


class TruncationError(MultiSymError):
    pass


class Generator(NamedTuple):
    alphabet: str
    color: int
    degree: int


Monomial = tuple  # sorted tuple of Generator


def _check_gen(g: Generator, l: int) -> None:
    if g.alphabet not in ALPHABETS or not 0 <= g.color < l or g.degree < 1:
        raise MultiSymError(f"bad generator {g} for l={l}")


def mono_degree(mono: Monomial, alphabet: str | None = None) -> int:
    return sum(g.degree for g in mono if alphabet is None or g.alphabet == alphabet)


class MultiSym:
    """Finite sum of colored power-sum monomials with FieldElem coefficients."""

    __slots__ = ("l", "terms")

    def __init__(self, l: int, terms: Mapping[Monomial, FieldElem] | None = None):
        if l < 1:
            raise MultiSymError("l must be >= 1")
        self.l = l
        clean = {}
        for mono, c in (terms or {}).items():
            if not isinstance(c, FieldElem):
                c = const(c)
            if c.is_zero():
                continue
            mono = tuple(sorted(Generator(*g) for g in mono))
            for g in mono:
                _check_gen(g, l)
            clean[mono] = clean[mono] + c if mono in clean else c
        self.terms = {m: c for m, c in clean.items() if not c.is_zero()}

    @classmethod
    def _raw(cls, l: int, terms: dict) -> MultiSym:
        obj = cls.__new__(cls)
        obj.l = l
        obj.terms = terms
        return obj

    @classmethod
    def one(cls, l: int) -> MultiSym:
        return cls._raw(l, {(): ONE})

    @classmethod
    def zero(cls, l: int) -> MultiSym:
        return cls._raw(l, {})

    @classmethod
    def constant(cls, l: int, c) -> MultiSym:
        return cls(l, {(): c})

    @classmethod
    def gen(cls, l: int, color: int, degree: int, alphabet: str = "X") -> MultiSym:
        g = Generator(alphabet, color % l, degree)
        _check_gen(g, l)
        return cls._raw(l, {(g,): ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> dict[str, int]:
        """Largest degree reached in each alphabet."""
        out = {a: 0 for a in ALPHABETS}
        for mono in self.terms:
            for a in ALPHABETS:
                out[a] = max(out[a], mono_degree(mono, a))
        return out

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def is_homogeneous(self, d: int, alphabet: str | None = None) -> bool:
        return all(mono_degree(m, alphabet) == d for m in self.terms)

    def coeff(self, mono: Iterable[Generator]) -> FieldElem:
        return self.terms.get(tuple(sorted(Generator(*g) for g in mono)), ZERO)

    def _same(self, other: MultiSym) -> None:
        if not isinstance(other, MultiSym):
            raise TypeError(f"expected MultiSym, got {type(other).__name__}")
        if other.l != self.l:
            raise MultiSymError(f"mismatched l: {self.l} vs {other.l}")

    def __add__(self, other):
        if not isinstance(other, MultiSym):
            other = MultiSym.constant(self.l, other)
        self._same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                s = out[m] + c
                if s.is_zero():
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return MultiSym._raw(self.l, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiSym._raw(self.l, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiSym):
            other = MultiSym.constant(self.l, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> MultiSym:
        if not isinstance(c, FieldElem):
            c = const(c)
        if c.is_zero():
            return MultiSym.zero(self.l)
        return MultiSym._raw(self.l, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, MultiSym):
            return mul(self, other)
        if isinstance(other, (FieldElem, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (FieldElem, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        acc = MultiSym.one(self.l)
        for _ in range(k):
            acc = acc * self
        return acc

    def __eq__(self, other):
        if not isinstance(other, MultiSym):
            return NotImplemented
        return self.l == other.l and (self - other).is_zero()

    def map_coefficients(self, f: Callable[[FieldElem], FieldElem]) -> MultiSym:
        out = {}
        for m, c in self.terms.items():
            v = f(c)
            if not v.is_zero():
                out[m] = v
        return MultiSym._raw(self.l, out)

    def truncate(self, bounds: Mapping[str, int]) -> MultiSym:
        return MultiSym._raw(self.l, {m: c for m, c in self.terms.items() if _within(m, bounds)})

    def to_json(self) -> dict:
        items = sorted(self.terms.items())
        return {
            "l": self.l,
            "terms": [{"monomial": [list(g) for g in m], "coeff": str(c)} for m, c in items],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> MultiSym:
        terms = {}
        for t in data["terms"]:
            mono = tuple(Generator(a, int(c), int(d)) for a, c, d in t["monomial"])
            terms[mono] = parse_field(t["coeff"])
        return cls(int(data["l"]), terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            name = "*".join(f"p{g.color}_{g.degree}[{g.alphabet.lower()}]" for g in m) or "1"
            parts.append(f"({c})*{name}")
        return " + ".join(parts)

    __repr__ = __str__


def _within(mono: Monomial, bounds: Mapping[str, int] | None) -> bool:
    if not bounds:
        return True
    for a, d in bounds.items():
        if mono_degree(mono, a) > d:
            return False
    return True


def _merge(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def mul(f: MultiSym, g: MultiSym, bounds: Mapping[str, int] | None = None) -> MultiSym:
    """Product, dropping monomials that exceed the per-alphabet bounds."""
    f._same(g)
    acc: dict = {}
    for m1, c1 in f.terms.items():
        for m2, c2 in g.terms.items():
            m = _merge(m1, m2)
            if bounds and not _within(m, bounds):
                continue
            v = c1 * c2
            acc[m] = acc[m] + v if m in acc else v
    return MultiSym._raw(f.l, {m: c for m, c in acc.items() if not c.is_zero()})


def ring_arith(f: MultiSym, g, op: str) -> MultiSym:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    raise MultiSymError(f"unknown op {op!r}")


# ----------------------------------------------------- characters, Schur


def z_factor(mu: Sequence[int]) -> int:
    out = 1
    for part, mult in Counter(mu).items():
        out *= part ** mult * math.factorial(mult)
    return out


@lru_cache(maxsize=None)
def character(lam: Partition, mu: Partition) -> int:
    """chi^lam evaluated on cycle type mu (Murnaghan-Nakayama on beta sets)."""
    if sum(lam) != sum(mu):
        raise MultiSymError("character needs |lam| = |mu|")
    if not mu:
        return 1
    r = mu[0]
    rest = Partition(mu[1:])
    k = len(lam)
    beta = [lam[i] + (k - 1 - i) for i in range(k)]
    beads = set(beta)
    total = 0
    for b in beta:
        nb = b - r
        if nb < 0 or nb in beads:
            continue
        sign = (-1) ** sum(1 for x in beads if nb < x < b)
        new = sorted((beads - {b}) | {nb}, reverse=True)
        parts = [new[i] - (k - 1 - i) for i in range(k)]
        total += sign * character(Partition(p for p in parts if p > 0), rest)
    return total


def _mono_from_cycle_type(mu: Sequence[int], color: int, alphabet: str = "X") -> Monomial:
    return tuple(sorted(Generator(alphabet, color, d) for d in mu))


@lru_cache(maxsize=None)
def _schur_expansion(lam: Partition) -> tuple[tuple[Partition, Fraction], ...]:
    n = sum(lam)
    return tuple(
        (mu, Fraction(character(lam, mu), z_factor(mu)))
        for mu in partitions(n)
        if character(lam, mu) != 0
    )


def schur_powersum(lam: Partition, l: int = 1, color: int = 0, alphabet: str = "X") -> MultiSym:
    """s_lam = sum_mu chi^lam(mu) / z_mu p_mu, placed in one color."""
    lam = Partition(lam)
    terms = {
        _mono_from_cycle_type(mu, color, alphabet): const(c) for mu, c in _schur_expansion(lam)
    }
    return MultiSym._raw(l, terms)


def multi_schur(parts: Sequence[Partition], alphabet: str = "X") -> MultiSym:
    l = len(parts)
    acc = MultiSym.one(l)
    for i, lam in enumerate(parts):
        if lam:
            acc = acc * schur_powersum(Partition(lam), l, i, alphabet)
    return acc


def vec_schur(lam: Partition, l: int, alphabet: str = "X") -> MultiSym:
    return multi_schur(core_quotient(Partition(lam), l).quotient, alphabet)


@lru_cache(maxsize=None)
def multipartitions(l: int, d: int) -> tuple[tuple[Partition, ...], ...]:
    """All l-tuples of partitions of total size d."""
    out = []

    def rec(i, remaining, acc):
        if i == l - 1:
            for lam in partitions(remaining):
                out.append(tuple(acc + [lam]))
            return
        for size in range(remaining, -1, -1):
            for lam in partitions(size):
                rec(i + 1, remaining - size, acc + [lam])

    rec(0, d, [])
    return tuple(out)


def powersum_monomials(l: int, d: int, alphabet: str = "X") -> list[Monomial]:
    """Power-sum monomials of degree d, one per multipartition (cycle types)."""
    return [
        tuple(sorted(Generator(alphabet, i, k) for i, mu in enumerate(mp) for k in mu))
        for mp in multipartitions(l, d)
    ]


_SCHUR_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def _schur_block(l: int, d: int) -> dict:
    """multipartition -> multi-Schur function of degree d (write-once cache)."""
    key = (l, d)
    block = _SCHUR_CACHE.get(key)
    if block is None:
        block = {mp: multi_schur(mp) for mp in multipartitions(l, d)}
        with _CACHE_LOCK:
            block = _SCHUR_CACHE.setdefault(key, block)
    return block


def to_basis(f: MultiSym, basis: str = "powersum", kappa: Partition = EMPTY) -> dict:
    """Expansion coefficients of f in the powersum, multi_schur or vec_schur basis.

    powersum: monomial -> coeff; multi_schur: multipartition -> coeff;
    vec_schur: partition with l-core kappa -> coeff.
    """
    if basis == "powersum":
        return dict(f.terms)
    if any(g.alphabet != "X" for m in f.terms for g in m):
        raise MultiSymError("Schur expansions are defined for the X alphabet only")
    coeffs: dict = {}
    for d in sorted({mono_degree(m) for m in f.terms}):
        for mp, s in _schur_block(f.l, d).items():
            c = hall_pairing(s, f)
            if not c.is_zero():
                coeffs[mp] = c
    residual = f - sum((multi_schur(mp).scale(c) for mp, c in coeffs.items()), MultiSym.zero(f.l))
    if not residual.is_zero():
        raise MultiSymError(f"residual after Schur expansion: {residual}")
    if basis == "multi_schur":
        return coeffs
    if basis == "vec_schur":
        kappa = Partition(kappa)
        return {from_core_quotient(kappa, mp, f.l): c for mp, c in coeffs.items()}
    raise MultiSymError(f"unknown basis {basis!r}")


def from_basis(coeffs: Mapping, l: int, basis: str = "multi_schur") -> MultiSym:
    acc = MultiSym.zero(l)
    for key, c in coeffs.items():
        if basis == "multi_schur":
            acc = acc + multi_schur(key).scale(c)
        elif basis == "vec_schur":
            acc = acc + vec_schur(key, l).scale(c)
        elif basis == "powersum":
            acc = acc + MultiSym(l, {key: c})
        else:
            raise MultiSymError(f"unknown basis {basis!r}")
    return acc


# ---------------------------------------------------------- substitutions


def substitute(f: MultiSym, image: Callable[[Generator], MultiSym],
               coeff_map: Callable[[FieldElem], FieldElem] | None = None,
               bounds: Mapping[str, int] | None = None) -> MultiSym:
    """Algebra map determined by the images of the generators."""
    cache: dict = {}

    def img(g):
        v = cache.get(g)
        if v is None:
            v = image(g)
            cache[g] = v
        return v

    acc = MultiSym.zero(f.l)
    for mono, c in f.terms.items():
        if coeff_map is not None:
            c = coeff_map(c)
        term = MultiSym._raw(f.l, {(): c})
        for g in mono:
            term = mul(term, img(g), bounds)
            if term.is_zero():
                break
        acc = acc + term
    return acc


def _recolor(f: MultiSym, fn: Callable[[Generator], Generator]) -> MultiSym:
    return MultiSym._raw(f.l, {tuple(sorted(fn(g) for g in m)): c for m, c in f.terms.items()})


def neg(f: MultiSym) -> MultiSym:
    return _recolor(f, lambda g: Generator(g.alphabet, (-g.color) % f.l, g.degree))


_T1, _T2 = var("t1"), var("t2")


def swap(f: MultiSym) -> MultiSym:
    return f.map_coefficients(lambda c: field_subst(c, {"t1": _T2, "t2": _T1}))


def inv(f: MultiSym) -> MultiSym:
    return f.map_coefficients(lambda c: field_subst(c, {"t1": 1 / _T1, "t2": 1 / _T2}))


def endo(f: MultiSym, which: str) -> MultiSym:
    if which == "neg":
        return neg(f)
    if which == "swap":
        return swap(f)
    if which == "inv":
        return inv(f)
    raise MultiSymError(f"unknown endomorphism {which!r}")


def gamma_image(g: Generator, l: int, x: FieldElem, inverse: bool = False) -> MultiSym:
    n = g.degree
    xn = x ** n
    if not inverse:
        return MultiSym._raw(l, {(g,): ONE}) - MultiSym.gen(l, g.color - 1, n, g.alphabet).scale(xn)
    denom = 1 - xn ** l
    if denom.is_zero():
        raise MultiSymError(f"Gamma inverse has a pole at degree {n}")
    terms = {}
    for j in range(l):
        gj = Generator(g.alphabet, (g.color - j) % l, n)
        terms[(gj,)] = xn ** j / denom
    return MultiSym._raw(l, terms)


def gamma(f: MultiSym, x, inverse: bool = False) -> MultiSym:
    """Matrix plethysm p^(i)_n -> p^(i)_n - x^n p^(i-1)_n, or its inverse."""
    if not isinstance(x, FieldElem):
        x = const(x)
    return substitute(f, lambda g: gamma_image(g, f.l, x, inverse))


def hall_pairing(f: MultiSym, g: MultiSym) -> FieldElem:
    """<p_A, p_B> = delta_{A,B} * prod over (alphabet, color) of z of the cycle type."""
    f._same(g)
    small, big = (f, g) if len(f.terms) <= len(g.terms) else (g, f)
    acc = ZERO
    for m, c in small.terms.items():
        d = big.terms.get(m)
        if d is not None:
            acc = acc + c * d * monomial_z(m)
    return acc


@lru_cache(maxsize=None)
def monomial_z(m: Monomial) -> int:
    groups: dict = {}
    for g in m:
        groups.setdefault((g.alphabet, g.color), []).append(g.degree)
    out = 1
    for mu in groups.values():
        out *= z_factor(mu)
    return out


def wreath_pairing(f: MultiSym, g: MultiSym) -> FieldElem:
    """<f, neg Gamma_t1 neg Gamma_t2 neg g>."""
    return hall_pairing(f, neg(gamma(neg(gamma(neg(g), _T2)), _T1)))


def derivative(f: MultiSym, gen: Generator) -> MultiSym:
    gen = Generator(*gen)
    acc: dict = {}
    for m, c in f.terms.items():
        k = m.count(gen)
        if not k:
            continue
        i = m.index(gen)
        rest = m[:i] + m[i + 1:]
        v = c * k
        acc[rest] = acc[rest] + v if rest in acc else v
    return MultiSym._raw(f.l, {m: c for m, c in acc.items() if not c.is_zero()})


def exp_truncated(f: MultiSym, D: int, alphabets: Sequence[str] | None = None) -> MultiSym:
    """sum_k f^k / k!, keeping degree <= D in each alphabet."""
    if () in f.terms:
        raise MultiSymError("exp_truncated needs zero constant term")
    if alphabets is None:
        alphabets = ALPHABETS
    bounds = {a: D for a in alphabets}
    f = f.truncate(bounds)
    acc = MultiSym.one(f.l)
    power = MultiSym.one(f.l)
    k = 0
    while True:
        k += 1
        power = mul(power, f, bounds).scale(Fraction(1, k))
        if power.is_zero():
            return acc
        acc = acc + power


# ------------------------------------------------------ linear operators


class LinOp:
    """Linear operator on the two-alphabet ring."""

    def apply(self, f: MultiSym) -> MultiSym:
        raise NotImplementedError

    def __matmul__(self, other: LinOp) -> LinOp:
        return Compose(self, other)


class Identity(LinOp):
    def apply(self, f):
        return f


class AlgebraMap(LinOp):
    """Algebra substitution given by generator images and a coefficient map."""

    def __init__(self, image: Callable[[Generator], MultiSym],
                 coeff_map: Callable[[FieldElem], FieldElem] | None = None):
        self.image = image
        self.coeff_map = coeff_map

    def apply(self, f):
        return substitute(f, self.image, self.coeff_map)


class Grading(LinOp):
    """Multiply a monomial of X-degree a and Y-degree b by weight(a, b)."""

    def __init__(self, weight: Callable[[int, int], FieldElem]):
        self.weight = weight

    def apply(self, f):
        out = {}
        for m, c in f.terms.items():
            v = c * self.weight(mono_degree(m, "X"), mono_degree(m, "Y"))
            if not v.is_zero():
                out[m] = v
        return MultiSym._raw(f.l, out)


class Multiply(LinOp):
    def __init__(self, g: MultiSym):
        self.g = g

    def apply(self, f):
        return f * self.g


class Derivative(LinOp):
    def __init__(self, gen: Generator):
        self.gen = Generator(*gen)

    def apply(self, f):
        return derivative(f, self.gen)


class ExpDerivation(LinOp):
    """exp(sum_k c_k * m_k * d/d g_k) for multipliers m_k and generators g_k.

    Each generator g_k must lie in an alphabet that the multipliers do not
    touch, so every application strictly lowers that alphabet's degree and
    the series terminates; this is checked while expanding.
    """

    def __init__(self, parts: Sequence[tuple[FieldElem, MultiSym, Generator]]):
        self.parts = [(c, m, Generator(*g)) for c, m, g in parts]
        lowered = {g.alphabet for _, _, g in self.parts}
        for _, m, _ in self.parts:
            for mono in m.terms:
                if any(x.alphabet in lowered for x in mono):
                    raise MultiSymError("multiplier uses an alphabet that is differentiated")
        self.lowered = lowered

    def derivation(self, f: MultiSym) -> MultiSym:
        acc = MultiSym.zero(f.l)
        for c, m, g in self.parts:
            d = derivative(f, g)
            if not d.is_zero():
                acc = acc + (d * m).scale(c)
        return acc

    def apply(self, f):
        bound = max((sum(mono_degree(m, a) for a in self.lowered) for m in f.terms), default=0)
        acc = f
        term = f
        for k in range(1, bound + 2):
            term = self.derivation(term).scale(Fraction(1, k))
            if term.is_zero():
                return acc
            acc = acc + term
        raise MultiSymError("derivation series did not terminate")


class Compose(LinOp):
    """Compose(A, B, C) applies C first, then B, then A."""

    def __init__(self, *ops: LinOp):
        self.ops = ops

    def apply(self, f):
        for op in reversed(self.ops):
            f = op.apply(f)
        return f


def apply_linop(op: LinOp, f: MultiSym, D: int) -> MultiSym:
    """Apply op to f; D bounds the total (X plus Y) degree of input and output."""
    if f.total_degree() > D:
        raise TruncationError(f"input has degree {f.total_degree()} > {D}")
    out = op.apply(f)
    if out.total_degree() > D:
        raise TruncationError(f"output has degree {out.total_degree()} > {D}")
    return out


def specialize(f: MultiSym, values: Callable[[Generator], FieldElem]) -> FieldElem:
    """Replace every generator by a field element."""
    cache: dict = {}
    acc = ZERO
    for m, c in f.terms.items():
        v = c
        for g in m:
            x = cache.get(g)
            if x is None:
                x = values(g)
                cache[g] = x
            v = v * x
            if v.is_zero():
                break
        acc = acc + v
    return acc


def bidegree_monomials(l: int, D: int) -> list[Monomial]:
    """All power-sum monomials of X-degree <= D and Y-degree <= D."""
    out = []
    for a in range(D + 1):
        for b in range(D + 1):
            for mx in powersum_monomials(l, a, "X"):
                for my in powersum_monomials(l, b, "Y"):
                    out.append(tuple(sorted(mx + my)))
    return out
