"""Wreath Macdonald polynomials from their triangularity axioms.

H_lambda is written as sum_nu c_nu vec_s_nu over the block of partitions with
the same l-core and size.  The unknowns are fixed by

  * Gamma_{t1} H_lambda   only involves vec_s_rho with rho >= lambda,
  * Gamma_{1/t2} H_lambda only involves vec_s_rho with rho <= lambda,
  * <s_((d),(),...,()), H_lambda> = 1, d = (|lambda| - |core|) / l,

(dominance order, equal cores) and the resulting linear system is solved
exactly.  A system without a unique solution raises ConventionMismatch.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .exactalg import ONE, ZERO, FieldElem, SolveError, monomial, solve_linear, var
from .multisym import (
    Generator,
    MultiSym,
    exp_truncated,
    gamma,
    hall_pairing,
    inv,
    mul,
    multi_schur,
    specialize,
    swap,
    to_basis,
    wreath_pairing,
)
from .partitions import (
    EMPTY,
    Partition,
    block,
    box_stats,
    core,
    core_quotient,
    dominance_leq,
    evaluation_product,
    from_core_quotient,
    is_core,
    transpose,
    weight,
)
from .report import Report, Timer

T1, T2, U = var("t1"), var("t2"), var("u")


class WreathError(ValueError):
    pass


class ConventionMismatch(WreathError):
    """The axioms have no unique solution on a block."""

    def __init__(self, message: str, l: int, kappa: Partition, d: int, lam: Partition | None = None):
        super().__init__(message)
        self.l, self.kappa, self.d, self.lam = l, kappa, d, lam


@dataclass(frozen=True)
class WreathRecord:
    l: int
    lam: Partition
    core: Partition
    d: int
    H: MultiSym
    norm: FieldElem
    coeffs: dict = field(compare=False)  # vec-Schur coefficients nu -> c_nu

    def to_json(self, basis: str = "p") -> dict:
        out = {
            "lambda": str(self.lam),
            "l": self.l,
            "core": str(self.core),
            "degree": self.d,
            "norm": str(self.norm),
        }
        if basis == "p":
            out["H"] = self.H.to_json()
        elif basis == "schur":
            co = to_basis(self.H, "multi_schur")
            out["H"] = {
                "basis": "schur",
                "terms": [
                    {"index": [str(p) for p in mp], "coeff": str(c)} for mp, c in sorted(co.items())
                ],
            }
        elif basis == "vecschur":
            out["H"] = {
                "basis": "vecschur",
                "terms": [
                    {"index": str(nu), "coeff": str(c)}
                    for nu, c in sorted(self.coeffs.items(), reverse=True)
                ],
            }
        else:
            raise WreathError(f"unknown basis {basis!r}")
        return out


def norm(lam: Partition, l: int) -> FieldElem:
    """prod over boxes with hook = 0 mod l of (1 - t1^(leg+1) t2^(-arm))(1 - t1^(-leg) t2^(arm+1))."""
    lam = Partition(lam)
    acc = ONE
    for bx in lam.boxes():
        s = box_stats(lam, bx)
        if s.hook % l == 0:
            acc = acc * (1 - monomial((s.leg + 1, -s.arm, 0, 0, 0)))
            acc = acc * (1 - monomial((-s.leg, s.arm + 1, 0, 0, 0)))
    return acc


# ------------------------------------------------------------------ solver


def rotate(parts: tuple, r: int) -> tuple:
    """Cyclically relabel quotient components: component i moves to i + r."""
    l = len(parts)
    return tuple(parts[(i - r) % l] for i in range(l))


@dataclass
class _Block:
    l: int
    kappa: Partition
    d: int
    rotation: int
    members: tuple  # partitions nu, descending lex
    basis: dict  # nu -> vec_s_nu
    gamma1: dict  # (rho, nu) -> coefficient of vec_s_rho in Gamma_t1 vec_s_nu
    gamma2: dict  # same for t2^d Gamma_{1/t2}
    records: dict = field(default_factory=dict)


_BLOCKS: dict = {}
_LOCK = threading.Lock()


def _vec(nu: Partition, l: int, rotation: int) -> tuple:
    return rotate(core_quotient(nu, l).quotient, rotation)


def _matrix(members, basis, image) -> dict:
    out = {}
    for nu in members:
        g = image(basis[nu])
        for rho in members:
            c = hall_pairing(basis[rho], g)
            if not c.is_zero():
                out[(rho, nu)] = c
    return out


def get_block(l: int, kappa: Partition = EMPTY, d: int = 0, rotation: int = 0) -> _Block:
    kappa = Partition(kappa)
    key = (l, kappa, d, rotation % l)
    blk = _BLOCKS.get(key)
    if blk is not None:
        return blk
    if not is_core(kappa, l):
        raise WreathError(f"{tuple(kappa)} is not a {l}-core")
    members = block(l, kappa, d)
    basis = {nu: multi_schur(_vec(nu, l, rotation)) for nu in members}
    scale = T2 ** d
    g1 = _matrix(members, basis, lambda f: gamma(f, T1))
    g2 = _matrix(members, basis, lambda f: gamma(f, 1 / T2).scale(scale))
    blk = _Block(l, kappa, d, rotation % l, members, basis, g1, g2)
    with _LOCK:
        blk = _BLOCKS.setdefault(key, blk)
    return blk


def normalization_index(l: int, kappa: Partition, d: int, rotation: int = 0) -> Partition:
    """The partition whose vec-Schur function is s_((d),(),...,())."""
    target = tuple([Partition((d,)) if d else EMPTY] + [EMPTY] * (l - 1))
    return from_core_quotient(kappa, rotate(target, -rotation), l)


def axiom_equations(blk: _Block, lam: Partition):
    """Rows of the linear system for H_lam (in the block's member order)."""
    members = blk.members
    rows, rhs = [], []
    for rho in members:
        if not dominance_leq(lam, rho):
            rows.append([blk.gamma1.get((rho, nu), ZERO) for nu in members])
            rhs.append(ZERO)
        if not dominance_leq(rho, lam):
            rows.append([blk.gamma2.get((rho, nu), ZERO) for nu in members])
            rhs.append(ZERO)
    nu0 = normalization_index(blk.l, blk.kappa, blk.d, blk.rotation)
    rows.append([ONE if nu == nu0 else ZERO for nu in members])
    rhs.append(ONE)
    return rows, rhs


def wreath_macdonald(lam: Partition, l: int, rotation: int = 0) -> WreathRecord:
    lam = Partition(lam)
    kappa = core(lam, l)
    d = weight(lam, l)
    blk = get_block(l, kappa, d, rotation)
    rec = blk.records.get(lam)
    if rec is not None:
        return rec
    rows, rhs = axiom_equations(blk, lam)
    try:
        sol = solve_linear(rows, rhs)
    except SolveError as exc:
        raise ConventionMismatch(
            f"axioms for {lam} at l={l} (core {kappa}, degree {d}): {exc}", l, kappa, d, lam
        ) from None
    coeffs = {nu: c for nu, c in zip(blk.members, sol) if not c.is_zero()}
    H = MultiSym.zero(l)
    for nu, c in coeffs.items():
        H = H + blk.basis[nu].scale(c)
    rec = WreathRecord(l, lam, kappa, d, H, norm(lam, l), coeffs)
    with _LOCK:
        rec = blk.records.setdefault(lam, rec)
    return rec


def check_axioms(rec: WreathRecord, rotation: int = 0) -> list[str]:
    """Re-verify the defining conditions from scratch; returns failure messages."""
    l, lam, kappa = rec.l, rec.lam, rec.core
    problems = []
    if not rec.H.is_homogeneous(rec.d):
        problems.append("not homogeneous")

    def support(f):
        co = to_basis(f, "multi_schur")
        return {from_core_quotient(kappa, rotate(mp, -rotation), l): c for mp, c in co.items()}

    for rho in support(gamma(rec.H, T1)):
        if not dominance_leq(lam, rho, l):
            problems.append(f"Gamma_t1 H has vec_s[{rho}] with {rho} not >= {lam}")
    for rho in support(gamma(rec.H, 1 / T2)):
        if not dominance_leq(rho, lam, l):
            problems.append(f"Gamma_1/t2 H has vec_s[{rho}] with {rho} not <= {lam}")
    target = tuple([Partition((rec.d,)) if rec.d else EMPTY] + [EMPTY] * (l - 1))
    val = hall_pairing(multi_schur(target), rec.H)
    if val != ONE:
        problems.append(f"normalization pairing is {val}, not 1")
    return problems


def dual(rec: WreathRecord) -> MultiSym:
    """inv swap H_{lambda'}."""
    return inv(swap(wreath_macdonald(transpose(rec.lam), rec.l).H))


def empty_core_partitions(l: int, max_size: int) -> list[Partition]:
    out = []
    for d in range(max_size // l + 1):
        out.extend(block(l, EMPTY, d))
    return out


# ----------------------------------------------------------- verification


def verify_axioms(l: int, max_size: int) -> Report:
    with Timer() as tm:
        failures = []
        for lam in empty_core_partitions(l, max_size):
            try:
                rec = wreath_macdonald(lam, l)
            except ConventionMismatch as exc:
                failures.append({"lambda": str(lam), "error": str(exc)})
                continue
            for msg in check_axioms(rec):
                failures.append({"lambda": str(lam), "error": msg})
    return Report.build("axioms", {"l": l, "max_size": max_size}, failures, tm.elapsed)


def verify_orthogonality(l: int, size: int) -> Report:
    """<H_lam, inv swap H_mu'>_wreath = delta N_lam over empty-core lam, mu of one size."""
    with Timer() as tm:
        failures = []
        if size % l:
            members = ()
        else:
            members = block(l, EMPTY, size // l)
        duals = {mu: dual(wreath_macdonald(mu, l)) for mu in members}
        for lam in members:
            H = wreath_macdonald(lam, l)
            for mu in members:
                got = wreath_pairing(H.H, duals[mu])
                want = H.norm if lam == mu else ZERO
                if got != want:
                    failures.append(
                        {"lambda": str(lam), "mu": str(mu), "got": str(got), "expected": str(want)}
                    )
        if not members and size == 0:
            got = wreath_pairing(MultiSym.one(l), MultiSym.one(l))
            if got != ONE:
                failures.append({"lambda": "", "mu": "", "got": str(got), "expected": "1"})
    return Report.build("orthogonality", {"l": l, "size": size}, failures, tm.elapsed)


def c_sum(l: int, i: int, m: int, n: int) -> FieldElem:
    """sum over j, k in [0, l) with -i - j + k = m mod l of t1^(nj) t2^(nk)."""
    acc = ZERO
    for j in range(l):
        for k in range(l):
            if (-i - j + k - m) % l == 0:
                acc = acc + monomial((n * j, n * k, 0, 0, 0))
    return acc


def _kernel_weight(l: int, n: int) -> FieldElem:
    return 1 / (n * (1 - T1 ** (n * l)) * (1 - T2 ** (n * l)))


def wreath_cauchy_kernel(l: int, D: int) -> MultiSym:
    """exp(sum p^(i)_n[x] / (n(1-t1^nl)(1-t2^nl)) sum_jk t1^nj t2^nk p^(-i-j+k)_n[y])."""
    expo = MultiSym.zero(l)
    for n in range(1, D + 1):
        wgt = _kernel_weight(l, n)
        for i in range(l):
            x = MultiSym.gen(l, i, n, "X")
            inner = MultiSym.zero(l)
            for j in range(l):
                for k in range(l):
                    inner = inner + MultiSym.gen(l, -i - j + k, n, "Y").scale(
                        monomial((n * j, n * k, 0, 0, 0))
                    )
            expo = expo + (x * inner).scale(wgt)
    return exp_truncated(expo, D)


def schur_cauchy_kernel(l: int, D: int) -> MultiSym:
    expo = MultiSym.zero(l)
    for n in range(1, D + 1):
        for i in range(l):
            expo = expo + (MultiSym.gen(l, i, n, "X") * MultiSym.gen(l, i, n, "Y")).scale(
                Fraction(1, n)
            )
    return exp_truncated(expo, D)


def to_alphabet(f: MultiSym, alphabet: str) -> MultiSym:
    return MultiSym._raw(
        f.l,
        {tuple(sorted(Generator(alphabet, g.color, g.degree) for g in m)): c for m, c in f.terms.items()},
    )


def _first_difference(a: MultiSym, b: MultiSym) -> dict | None:
    diff = a - b
    if diff.is_zero():
        return None
    mono, c = sorted(diff.terms.items())[0]
    return {
        "monomial": [list(g) for g in mono],
        "lhs": str(a.coeff(mono)),
        "rhs": str(b.coeff(mono)),
        "difference": str(c),
    }


def schur_cauchy_sum(l: int, kappa: Partition, D: int) -> MultiSym:
    acc = MultiSym.zero(l)
    for d in range(D + 1):
        for lam in block(l, kappa, d):
            q = core_quotient(lam, l).quotient
            acc = acc + multi_schur(q, "X") * multi_schur(q, "Y")
    return acc


def wreath_cauchy_sum(l: int, kappa: Partition, D: int) -> MultiSym:
    acc = MultiSym.zero(l)
    for d in range(D + 1):
        for lam in block(l, kappa, d):
            rec = wreath_macdonald(lam, l)
            term = mul(rec.H, to_alphabet(dual(rec), "Y"))
            acc = acc + term.scale(1 / rec.norm)
    return acc


def verify_cauchy(l: int, D: int, kappa: Partition = EMPTY) -> Report:
    with Timer() as tm:
        failures = []
        kappa = Partition(kappa)
        diff = _first_difference(schur_cauchy_sum(l, kappa, D), schur_cauchy_kernel(l, D))
        if diff:
            failures.append(dict(identity="schur", **diff))
        diff = _first_difference(wreath_cauchy_sum(l, kappa, D), wreath_cauchy_kernel(l, D))
        if diff:
            failures.append(dict(identity="wreath", **diff))
    return Report.build("cauchy", {"l": l, "degree": D, "core": str(kappa)}, failures, tm.elapsed)


def evaluation_values(m: int, l: int):
    """Generator values p^(j)_k = delta_{0,j} - delta_{m,j} (-u)^k."""

    def value(g: Generator) -> FieldElem:
        v = ONE if g.color == 0 else ZERO
        if g.color == m % l:
            v = v - (-U) ** g.degree
        return v

    return value


def evaluate_H(lam: Partition, l: int, m: int) -> tuple[FieldElem, FieldElem]:
    lam = Partition(lam)
    if core(lam, l):
        raise WreathError(f"evaluation formula needs empty {l}-core; {lam} has core {core(lam, l)}")
    rec = wreath_macdonald(lam, l)
    lhs = specialize(rec.H, evaluation_values(m, l))
    return lhs, evaluation_product(lam, m, l)


def verify_evaluation(l: int, max_size: int) -> Report:
    with Timer() as tm:
        failures = []
        for lam in empty_core_partitions(l, max_size):
            for m in range(l):
                lhs, rhs = evaluate_H(lam, l, m)
                if lhs != rhs:
                    failures.append({"lambda": str(lam), "m": m, "lhs": str(lhs), "rhs": str(rhs)})
    return Report.build("eval-all", {"l": l, "max_size": max_size}, failures, tm.elapsed)


def transpose_descendant(lam: Partition, m: int, l: int) -> FieldElem:
    """prod over (a, b) in lam' with a - b = m mod l of (1 + u t1^(1-a) t2^(1-b))."""
    acc = ONE
    for a, b in transpose(lam).boxes():
        if (a - b - m) % l == 0:
            acc = acc * (1 + U * monomial((1 - a, 1 - b, 0, 0, 0)))
    return acc


def classical_generating_sides(l: int, m: int, D: int) -> tuple[MultiSym, MultiSym]:
    lhs = MultiSym.zero(l)
    for d in range(D + 1):
        for lam in block(l, EMPTY, d):
            rec = wreath_macdonald(lam, l)
            lhs = lhs + rec.H.scale(transpose_descendant(lam, m, l) / rec.norm)
    expo = MultiSym.zero(l)
    for n in range(1, D + 1):
        wgt = _kernel_weight(l, n)
        for i in range(l):
            c = c_sum(l, i, 0, n) - c_sum(l, i, m, n) * (-U) ** n
            expo = expo + MultiSym.gen(l, i, n).scale(wgt * c)
    return lhs, exp_truncated(expo, D)


def classical_generating_check(l: int, m: int, D: int) -> Report:
    with Timer() as tm:
        failures = []
        lhs, rhs = classical_generating_sides(l, m, D)
        diff = _first_difference(lhs, rhs)
        if diff:
            failures.append(diff)
    return Report.build("classical", {"l": l, "m": m, "degree": D}, failures, tm.elapsed)
