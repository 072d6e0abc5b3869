"""Capped vertex values for the tau_0 descendant and the fusion-operator checks.

The generating function

    K = exp( sum_{i,n} C^(i)_n p^(i)_n / (n (1-t1^nl)(1-t2^nl)) * Phi_n ),
    Phi_n = 1 - ((-h u)^n - (h^2 u w)^n) / (h^n - (-w)^n),

equals sum_mu N_mu^-1 H_mu V_mu.  V_lambda is recovered either by pairing K
with inv swap H_lambda' (orthogonality) or, via the wreath Cauchy identity,
by specializing inv swap H_lambda' at p^(j)_n = delta_{0,j} Phi_n.  Here h
stands for hbar^(1/2) and w for the product z_0 ... z_(l-1).
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactalg import ONE, ZERO, FieldElem, apply_geometric_relation, field_subst, var
from .multisym import (
    AlgebraMap,
    Compose,
    ExpDerivation,
    Generator,
    Grading,
    MultiSym,
    apply_linop,
    bidegree_monomials,
    exp_truncated,
    inv,
    specialize,
    swap,
    wreath_pairing,
)
from .partitions import EMPTY, Partition, classical_descendant, core, transpose
from .report import Report, Timer
from .wreath import _first_difference, _kernel_weight, c_sum, wreath_macdonald

T1, T2, H, U, W = (var(v) for v in ("t1", "t2", "h", "u", "w"))


class VertexError(ValueError):
    pass


@dataclass(frozen=True)
class CCoeff:
    l: int
    i: int
    m: int
    n: int
    value: FieldElem


def c_coeff(l: int, i: int, m: int, n: int) -> CCoeff:
    if not (0 <= i < l and 0 <= m < l and n >= 1):
        raise VertexError(f"need 0 <= i, m < l and n >= 1 (got l={l}, i={i}, m={m}, n={n})")
    return CCoeff(l, i, m, n, c_sum(l, i, m, n))


def phi(n: int) -> FieldElem:
    return 1 - ((-H * U) ** n - (H ** 2 * U * W) ** n) / (H ** n - (-W) ** n)


def main_kernel(l: int, D: int) -> MultiSym:
    expo = MultiSym.zero(l)
    for n in range(1, D + 1):
        f = _kernel_weight(l, n) * phi(n)
        for i in range(l):
            expo = expo + MultiSym.gen(l, i, n).scale(c_sum(l, i, 0, n) * f)
    return exp_truncated(expo, D, ("X",))


@dataclass(frozen=True)
class VertexResult:
    lam: Partition
    l: int
    value: FieldElem
    route: str
    classical: FieldElem
    routes_agree: bool | None = None

    def to_json(self) -> dict:
        return {
            "lambda": str(self.lam),
            "l": self.l,
            "value": str(self.value),
            "classical": str(self.classical),
            "routes_agree": self.routes_agree,
        }


def _kernel_values(g: Generator) -> FieldElem:
    return phi(g.degree) if g.color == 0 else ZERO


def _check_core(lam: Partition, l: int) -> None:
    if core(lam, l) != EMPTY:
        raise VertexError(f"capped vertex needs empty {l}-core; {lam} has core {core(lam, l)}")


def dual_H(lam: Partition, l: int) -> MultiSym:
    """inv swap H_lambda'."""
    return inv(swap(wreath_macdonald(transpose(lam), l).H))


def vertex_by_pairing(lam: Partition, l: int) -> FieldElem:
    lam = Partition(lam)
    _check_core(lam, l)
    return wreath_pairing(main_kernel(l, lam.size // l), dual_H(lam, l))


def vertex_by_specialization(lam: Partition, l: int) -> FieldElem:
    lam = Partition(lam)
    _check_core(lam, l)
    return specialize(dual_H(lam, l), _kernel_values)


def literal_specialization(lam: Partition, l: int) -> FieldElem:
    """H_lambda itself at p^(j)_n = delta_{0,j} Phi_n (for comparison)."""
    lam = Partition(lam)
    _check_core(lam, l)
    return specialize(wreath_macdonald(lam, l).H, _kernel_values)


def capped_vertex(lam: Partition, l: int, route: str = "both") -> VertexResult:
    """V_lambda; route "both" computes the two routes and records agreement."""
    lam = Partition(lam)
    classical = classical_descendant(lam, 0, l)
    if route == "pairing":
        return VertexResult(lam, l, vertex_by_pairing(lam, l), route, classical)
    if route == "specialization":
        return VertexResult(lam, l, vertex_by_specialization(lam, l), route, classical)
    if route == "both":
        a = vertex_by_pairing(lam, l)
        b = vertex_by_specialization(lam, l)
        return VertexResult(lam, l, a, "pairing", classical, a == b)
    raise VertexError(f"unknown route {route!r}")


def classical_limit(value: FieldElem) -> FieldElem:
    return field_subst(value, {"w": ZERO})


def geometric(value: FieldElem) -> FieldElem:
    return apply_geometric_relation(value)


def verify_vertex(l: int, sizes) -> Report:
    with Timer() as tm:
        failures = []
        from .wreath import block

        for s in sizes:
            if s % l:
                continue
            for lam in block(l, EMPTY, s // l):
                res = capped_vertex(lam, l, "both")
                if not res.routes_agree:
                    failures.append({"lambda": str(lam), "error": "routes disagree"})
                lim = classical_limit(res.value)
                if lim != res.classical:
                    failures.append(
                        {"lambda": str(lam), "w0": str(lim), "classical": str(res.classical)}
                    )
    return Report.build("vertex", {"l": l, "sizes": list(sizes)}, failures, tm.elapsed)


# ------------------------------------------------------ fusion operators


def j_coeff(n: int) -> FieldElem:
    """(h^n - h^-n) / (1 - w^-n)."""
    return (H ** n - H ** (-n)) / (1 - W ** (-n))


def _transfer(l: int, D: int, coeff) -> ExpDerivation:
    parts = []
    for n in range(1, D + 1):
        c = coeff(n)
        for i in range(l):
            parts.append((c, MultiSym.gen(l, i, n, "X"), Generator("Y", i, n)))
    return ExpDerivation(parts)


def fusion_j0(l: int, D: int, inverse: bool = False) -> ExpDerivation:
    """exp(+-sum J_n p^(i)_n[x] d/dp^(i)_n[y]) on degrees n <= D."""
    sign = -1 if inverse else 1
    return _transfer(l, D, lambda n: j_coeff(n) * sign)


def r0(l: int, D: int) -> ExpDerivation:
    return _transfer(l, D, lambda n: H ** n - H ** (-n))


def z_grading(inverse: bool = False) -> Grading:
    """Z_(1): multiplication by w^(X-degree)."""
    s = -1 if inverse else 1
    return Grading(lambda a, b: W ** (s * a))


def hbar_omega(inverse: bool = False) -> Grading:
    """hbar^Omega with Omega = (n1 + n2) / 2, i.e. h^(n1 + n2)."""
    s = -1 if inverse else 1
    return Grading(lambda a, b: H ** (s * (a + b)))


def set_y_zero(l: int) -> AlgebraMap:
    return AlgebraMap(lambda g: MultiSym.zero(l) if g.alphabet == "Y" else MultiSym._raw(l, {(g,): ONE}))


def verify_abrr(l: int, D: int) -> Report:
    """R0 Z^-1 J0 Z = hbar^-Omega J0 hbar^Omega on every monomial of bidegree <= (D, D)."""
    with Timer() as tm:
        failures = []
        j0 = fusion_j0(l, D)
        lhs = Compose(r0(l, D), z_grading(True), j0, z_grading())
        rhs = Compose(hbar_omega(True), j0, hbar_omega())
        for mono in bidegree_monomials(l, D):
            f = MultiSym._raw(l, {mono: ONE})
            a = apply_linop(lhs, f, 2 * D)
            b = apply_linop(rhs, f, 2 * D)
            diff = _first_difference(a, b)
            if diff:
                failures.append(dict(input=[list(g) for g in mono], **diff))
                break
    return Report.build("abrr", {"l": l, "degree": D}, failures, tm.elapsed)


def derivation_source(l: int, D: int) -> MultiSym:
    """exp(sum C_n / (n(1-t1^nl)(1-t2^nl)) ((1-(-u)^n) p_n[x] + (-u h)^n p_n[y]))."""
    expo = MultiSym.zero(l)
    for n in range(1, D + 1):
        wgt = _kernel_weight(l, n)
        for i in range(l):
            c = c_sum(l, i, 0, n) * wgt
            expo = expo + MultiSym.gen(l, i, n, "X").scale(c * (1 - (-U) ** n))
            expo = expo + MultiSym.gen(l, i, n, "Y").scale(c * (-U * H) ** n)
    return exp_truncated(expo, D)


def derivation_result(l: int, D: int) -> MultiSym:
    """J0^-1, then y = 0, then w -> -w/h, truncated to X-degree D."""
    src = derivation_source(l, D)
    out = apply_linop(Compose(set_y_zero(l), fusion_j0(l, D, inverse=True)), src, 2 * D)
    out = out.truncate({"X": D})
    return out.map_coefficients(lambda c: field_subst(c, {"w": -W / H}))


def verify_derivation(l: int, D: int) -> Report:
    with Timer() as tm:
        failures = []
        diff = _first_difference(derivation_result(l, D), main_kernel(l, D))
        if diff:
            failures.append(diff)
    return Report.build("derivation", {"l": l, "degree": D}, failures, tm.elapsed)
