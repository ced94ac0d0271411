#!/usr/bin/env python3
# The linear Artin bound and Newton lifting of approximate solutions.

from neron import ALGEBRA, BASE, VarTable, parse_poly
from neron.lifting import (LiftingProblem, newton_lift, nu_bound,
                           strong_approx_decide)
from neron.localring import LocalRingSpec

print("linear bound nu(c) = (e+1)*(rho+1) + c:")
for e, rho, c in ((1, 2, 5), (0, 0, 1), (3, 1, 7)):
    print(f"   e={e} rho={rho} c={c} -> {nu_bound(e, rho, c)}")

# Solve Y^2 = 1 + x from the seed Y = 1: the lift reproduces the binomial
# series of sqrt(1+x) to any requested precision.
T = VarTable.make(("x", BASE), ("Y", ALGEBRA))
ring = LocalRingSpec(T, [], primes=[()], check_dimension=False)
prob = LiftingProblem(ring, (parse_poly(T, "Y^2 - 1 - x"),), (0,),
                      {"Y": parse_poly(T, "1")}, 1, 30)
report = newton_lift(prob)
y = report.lifted["Y"]
print("\nlifted sqrt(1+x) to precision 30, first terms:")
print("   ", str(y.poly)[:78], "...")
print("square-and-compare check:",
      (y * y - ring.jet(parse_poly(T, "1 + x"), 30)).is_zero())
print("update orders were strictly increasing:", report.update_orders)

# Strong approximation: a solution modulo (x)^((e+2)*(rho+1)) lifts to an
# actual one agreeing modulo (x)^rho.
prob2 = LiftingProblem(ring, (parse_poly(T, "Y^2 - (1+x)^2"),), (0,),
                       {"Y": parse_poly(T, "1 + x")}, 2, 20)
perturbed = {"Y": parse_poly(T, "1 + x + x^10")}
report2 = strong_approx_decide(prob2, perturbed, 9)
print("\nperturbed seed recovered the exact solution:",
      report2.lifted["Y"].poly)
