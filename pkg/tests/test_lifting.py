"""Strong approximation: the linear bound and the Newton contraction."""

from fractions import Fraction

import pytest

from conftest import two_branch_problem
from neron import (ALGEBRA, BASE, Polynomial, VarTable, parse_poly)
from neron.desing import (AlgebraPresentation, Reduction, build_hg,
                          complete_H, eval_exact)
from neron.errors import NeronError, PreconditionFailed
from neron.lifting import (LiftingProblem, check_hypothesis, newton_lift,
                           nu_bound, strong_approx_decide)
from neron.linalg import det
from neron.localring import LocalRingSpec


def one_var_ring():
    T = VarTable.make(("x", BASE), ("Y", ALGEBRA))
    return LocalRingSpec(T, [], primes=[()], check_dimension=False)


def test_nu_bound_grid_and_linearity():
    assert nu_bound(1, 2, 5) == 11
    assert nu_bound(0, 0, 1) == 2
    assert nu_bound(3, 1, 7) == 15
    for e in range(3):
        for rho in range(3):
            for c in range(1, 4):
                assert nu_bound(e, rho, c) == (e + 1) * (rho + 1) + c
                assert nu_bound(e, rho, c + 1) - nu_bound(e, rho, c) == 1
    with pytest.raises(NeronError):
        nu_bound(-1, 0, 1)


def test_check_hypothesis_cases():
    ring = one_var_ring()
    T = ring.table
    # smooth linear system: the evaluated data generates the unit ideal
    prob = LiftingProblem(ring, (parse_poly(T, "Y - x"),), (0,),
                          {"Y": Polynomial.zero(T)}, 0, 2)
    assert check_hypothesis(prob)
    # two-branch data: d = (x1+x2)^2 generates (x)^4 modulo J
    tb = two_branch_problem()
    ring2 = tb.ring
    approx = {nm: j.poly for nm, j in tb.morphism.jets.items()}
    prob2 = LiftingProblem(ring2, tb.relations, (0,), approx, 4, 8)
    assert check_hypothesis(prob2)
    # rho below the order of every evaluated generator fails
    prob3 = LiftingProblem(ring, (parse_poly(T, "Y^2 - x^3*Y"),), (0,),
                           {"Y": parse_poly(T, "x^2")}, 1, 3)
    assert not check_hypothesis(prob3)


def test_newton_lift_fixed_point_when_exact():
    ring = one_var_ring()
    T = ring.table
    prob = LiftingProblem(ring, (parse_poly(T, "Y^2 - (1+x)^2"),), (0,),
                          {"Y": parse_poly(T, "1 + x")}, 2, 15)
    rep = newton_lift(prob)
    assert rep.lifted["Y"].poly == parse_poly(T, "1 + x")
    assert rep.agreement == 15
    assert rep.update_orders == []


def test_newton_lift_square_root_series():
    ring = one_var_ring()
    T = ring.table
    prob = LiftingProblem(ring, (parse_poly(T, "Y^2 - 1 - x"),), (0,),
                          {"Y": parse_poly(T, "1")}, 1, 30)
    rep = newton_lift(prob)
    y = rep.lifted["Y"]
    assert y.precision == 30
    # oracle: square and compare, exact
    assert (y * y - ring.jet(parse_poly(T, "1 + x"), 30)).is_zero()
    assert y.poly.terms[(1, 0)] == Fraction(1, 2)
    assert y.poly.terms[(2, 0)] == Fraction(-1, 8)
    # monotone convergence, bounded iteration count
    assert rep.update_orders == sorted(rep.update_orders)
    assert len(set(rep.update_orders)) == len(rep.update_orders)
    assert len(rep.update_orders) <= 30


def test_newton_lift_two_branch_data():
    tb = two_branch_problem()
    ring = tb.ring
    approx = {nm: j.poly for nm, j in tb.morphism.jets.items()}
    prob = LiftingProblem(ring, tb.relations, (0,), approx, 4, 30)
    rep = newton_lift(prob)
    for rel in tb.relations:
        val = rel.substitute({nm: j.poly for nm, j in rep.lifted.items()})
        assert ring.reduce_jet(val, 30).is_zero()
    assert rep.agreement >= 12


def test_strong_approx_recovers_exact_solution():
    ring = one_var_ring()
    T = ring.table
    prob = LiftingProblem(ring, (parse_poly(T, "Y^2 - (1+x)^2"),), (0,),
                          {"Y": parse_poly(T, "1 + x")}, 2, 20)
    # perturb above (e+2)*(rho+1) = 9
    rep = strong_approx_decide(prob, {"Y": parse_poly(T, "1 + x + x^10")}, 9)
    y = rep.lifted["Y"]
    assert (y * y - ring.jet(parse_poly(T, "(1+x)^2"), 20)).is_zero()
    assert ring.reduce_jet(y.poly - parse_poly(T, "1 + x"), 2).is_zero()


def test_strong_approx_exact_input_is_returned():
    ring = one_var_ring()
    T = ring.table
    prob = LiftingProblem(ring, (parse_poly(T, "Y^2 - (1+x)^2"),), (0,),
                          {"Y": parse_poly(T, "1 + x")}, 2, 20)
    rep = strong_approx_decide(prob, {"Y": parse_poly(T, "1 + x")}, 9)
    assert rep.lifted["Y"].poly == parse_poly(T, "1 + x")


def test_strong_approx_congruence_negative_control():
    ring = one_var_ring()
    T = ring.table
    prob = LiftingProblem(ring, (parse_poly(T, "Y^2 - (1+x)^2"),), (0,),
                          {"Y": parse_poly(T, "1 + x")}, 2, 20)
    with pytest.raises(PreconditionFailed):
        strong_approx_decide(prob, {"Y": parse_poly(T, "1 + 2*x")}, 9)


def test_consistency_with_desingularization_formulas():
    """With the base smooth algebra equal to A and s = 1, the lifting
    equations h and g agree term by term with the certificate construction
    on the same inputs."""
    ring = one_var_ring()
    T = ring.table
    f = parse_poly(T, "Y^2 - 1 - x")
    y0 = parse_poly(T, "1")
    from neron.desing import MorphismApprox
    prec = 16
    v = MorphismApprox(prec, {"Y": ring.jet(y0, prec)})
    B = AlgebraPresentation(ring, (f,))
    H = complete_H(B, [f], v, seed=0)
    d = eval_exact(det(H), v)        # = 2
    assert d == parse_poly(T, "2")
    # d is the evaluated determinant (the lifting convention), so the
    # pipeline invariant d = P mod I does not apply; compare formulas only.
    red = Reduction(B, v, (f,), H, Polynomial.const(T, 1),
                    det(H), d, (0,), (), 0, False)
    cert, BT, vT = build_hg(B, red, 1, verify=False)
    assert cert.s == Polynomial.const(BT.table, 1)
    # greenberg-side h: Y - y0 - d^e * adj(H)(y0) * T with the same data
    t_name = BT.table.block_names("tangent")[0]
    tvar = Polynomial.var(BT.table, t_name)
    want_h = parse_poly(BT.table, "Y") - y0.lift(BT.table) \
        - d.lift(BT.table) * tvar
    assert cert.h[0] == want_h
    # g = b + T + d^(e-1) Q with b = f(y0)/d^2 = -x/4 and Q = T^2
    want_g = Polynomial.const(BT.table, Fraction(-1, 4)) \
        * parse_poly(BT.table, "x") + tvar + tvar * tvar
    assert cert.g[0] == want_g
