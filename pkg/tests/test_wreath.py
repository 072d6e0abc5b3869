import pytest
import sympy as sp

from capvertex.exactalg import ONE, ZERO, field_subst, var
from capvertex.multisym import MultiSym, specialize
from capvertex.partitions import EMPTY, Partition, block, evaluation_product, partitions
from capvertex.wreath import (
    ConventionMismatch,
    WreathError,
    axiom_equations,
    c_sum,
    check_axioms,
    classical_generating_check,
    classical_generating_sides,
    evaluate_H,
    evaluation_values,
    get_block,
    norm,
    verify_axioms,
    verify_cauchy,
    verify_evaluation,
    verify_orthogonality,
    wreath_cauchy_kernel,
    wreath_cauchy_sum,
    wreath_macdonald,
)

from oracles import modified_macdonald, to_sympy

t1, t2, u = var("t1"), var("t2"), var("u")
P = Partition


def p(l, i, n, a="X"):
    return MultiSym.gen(l, i, n, a)


def test_l1_single_box():
    rec = wreath_macdonald(P((1,)), 1)
    assert rec.H == p(1, 0, 1)
    assert rec.d == 1 and rec.core == EMPTY


def test_l2_degree_one_by_hand():
    # 2x2 triangularity system solved by hand: a p0 + b p1 with a = 1
    assert wreath_macdonald(P((2,)), 2).H == p(2, 0, 1) + p(2, 1, 1).scale(t1)
    assert wreath_macdonald(P((1, 1)), 2).H == p(2, 0, 1) + p(2, 1, 1).scale(t2)


def test_l1_degree_two_is_modified_macdonald():
    s2 = (p(1, 0, 1) ** 2 + p(1, 0, 2)).scale(ONE / 2)
    s11 = (p(1, 0, 1) ** 2 - p(1, 0, 2)).scale(ONE / 2)
    assert wreath_macdonald(P((2,)), 1).H == s2 + s11.scale(t1)
    assert wreath_macdonald(P((1, 1)), 1).H == s2 + s11.scale(t2)


def test_l1_oracle_agreement():
    for n in range(1, 5):
        for lam in partitions(n):
            H = wreath_macdonald(lam, 1).H
            ours = {
                tuple(sorted((g.degree for g in m), reverse=True)): to_sympy(str(c))
                for m, c in H.terms.items()
            }
            ref = modified_macdonald(tuple(lam))
            assert set(ours) == set(ref), lam
            for k in ref:
                assert sp.cancel(ours[k] - ref[k]) == 0, (lam, k)


def test_norm_examples():
    assert norm(P((1,)), 1) == (1 - t1) * (1 - t2)
    assert norm(P((2,)), 2) == (1 - t1 ** 2) * (1 - t2 / t1)
    assert norm(P((1, 1)), 2) == (1 - t1 / t2) * (1 - t2 ** 2)
    assert norm(EMPTY, 3) == ONE


def test_homogeneous_and_axioms():
    for l in (1, 2, 3):
        for d in range(3):
            for lam in block(l, EMPTY, d):
                rec = wreath_macdonald(lam, l)
                assert rec.H.is_homogeneous(d)
                assert check_axioms(rec) == []


def test_nonempty_core_blocks_solve():
    for l, kappa in ((2, P((1,))), (3, P((2,))), (3, P((1, 1)))):
        for d in range(3):
            for lam in block(l, kappa, d):
                rec = wreath_macdonald(lam, l)
                assert rec.core == kappa
                assert check_axioms(rec) == []


def test_check_axioms_detects_tampering():
    rec = wreath_macdonald(P((3, 1)), 2)
    bad = type(rec)(rec.l, rec.lam, rec.core, rec.d, rec.H + p(2, 0, 2), rec.norm, rec.coeffs)
    assert check_axioms(bad)


def test_underdetermined_system_raises():
    blk = get_block(2, EMPTY, 2)
    rows, rhs = axiom_equations(blk, P((2, 2)))
    from capvertex.exactalg import SolveError, solve_linear

    with pytest.raises(SolveError):
        solve_linear(rows[:-1], rhs[:-1])  # drop the normalization row
    err = ConventionMismatch("x", 2, EMPTY, 2, P((2, 2)))
    assert err.d == 2 and isinstance(err, WreathError)


def test_quotient_rotation_is_detected_by_evaluation():
    # any cyclic relabeling of quotient components still solves, but breaks
    # the evaluation formula; only the unrotated slicing satisfies it
    for l, r in ((2, 1), (3, 1)):
        bad = 0
        for lam in block(l, EMPTY, 2):
            H = wreath_macdonald(lam, l, rotation=r).H
            for m in range(l):
                if specialize(H, evaluation_values(m, l)) != evaluation_product(lam, m, l):
                    bad += 1
        assert bad > 0


def test_orthogonality_small():
    assert verify_orthogonality(1, 2).passed
    assert verify_orthogonality(2, 2).passed
    assert verify_orthogonality(3, 0).passed
    assert verify_orthogonality(2, 3).passed  # no empty-core partitions of 3


def test_cauchy_kernel_examples():
    assert wreath_cauchy_kernel(2, 0) == MultiSym.one(2)
    k = wreath_cauchy_kernel(1, 1)
    assert k == MultiSym.one(1) + (p(1, 0, 1) * p(1, 0, 1, "Y")).scale(1 / ((1 - t1) * (1 - t2)))
    assert wreath_cauchy_sum(1, EMPTY, 2) == wreath_cauchy_kernel(1, 2)


def test_cauchy_identities():
    for l, kappa in ((1, EMPTY), (2, EMPTY), (2, P((1,))), (3, EMPTY)):
        rep = verify_cauchy(l, 2, kappa)
        assert rep.passed, rep.failures


def test_c_sum():
    for n in (1, 2, 3):
        assert c_sum(1, 0, 0, n) == ONE
        assert c_sum(2, 0, 0, n) == 1 + t1 ** n * t2 ** n
        assert c_sum(2, 0, 1, n) == t1 ** n + t2 ** n
        for l in (2, 3):
            for i in range(l):
                total = sum((c_sum(l, i, m, n) for m in range(l)), ZERO)
                assert total == sum((t1 ** (n * j) for j in range(l)), ZERO) * sum(
                    (t2 ** (n * k) for k in range(l)), ZERO
                )


def test_evaluate_examples():
    lhs, rhs = evaluate_H(P((1,)), 1, 0)
    assert lhs == rhs == 1 + u
    for m in (0, 1):
        lhs, rhs = evaluate_H(P((2,)), 2, m)
        assert lhs == rhs
        assert field_subst(lhs, {"u": ZERO}) == ONE
    with pytest.raises(WreathError):
        evaluate_H(P((1,)), 2, 0)


def test_evaluation_all_small():
    for l in (1, 2, 3):
        assert verify_evaluation(l, 2 * l).passed


def test_classical_generating_examples():
    assert classical_generating_check(1, 0, 2).passed
    assert classical_generating_check(2, 1, 2).passed
    # at u = 0 both sides collapse to sum N^-1 H_lambda
    lhs, rhs = classical_generating_sides(2, 1, 2)
    at0 = lambda f: f.map_coefficients(lambda c: field_subst(c, {"u": ZERO}))
    plain = MultiSym.zero(2)
    for d in range(3):
        for lam in block(2, EMPTY, d):
            rec = wreath_macdonald(lam, 2)
            plain = plain + rec.H.scale(1 / rec.norm)
    assert at0(lhs) == plain == at0(rhs)


def test_verify_axioms_report():
    rep = verify_axioms(2, 4)
    assert rep.passed and rep.check == "axioms"


def test_record_json():
    rec = wreath_macdonald(P((2,)), 2)
    data = rec.to_json("p")
    assert data["lambda"] == "2" and data["degree"] == 1
    assert data["H"]["terms"][1] == {"monomial": [["X", 1, 1]], "coeff": "t1"}
    vs = rec.to_json("vecschur")["H"]["terms"]
    assert vs == [{"index": "2", "coeff": "1"}, {"index": "1,1", "coeff": "t1"}]
    sch = rec.to_json("schur")["H"]["terms"]
    assert {"index": ["", "1"], "coeff": "t1"} in sch
