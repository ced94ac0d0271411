"""Strong approximation with a linear Artin function for dimension one.

Approximate solutions of a polynomial system over the base ring lift to
jets of arbitrary precision by a Newton-style contraction, provided the
evaluated Jacobian ideal of a chosen subsystem is large enough.  The Artin
function is linear: an approximate solution modulo (x)^((e+1)*(rho+1)+c)
yields a lifted one agreeing modulo (x)^c.

The construction mirrors the desingularization equations with the smooth
base equal to A and the unit s equal to 1: h = Y - y' - d^e G(y') T and
g = b + T + d^(e-1) Q with d = (det H)(y').
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .desing import (AlgebraPresentation, MorphismApprox, _PowerCache,
                     complete_H, eval_exact)
from .errors import (DivisionFailed, HypothesisViolated, NeronError,
                     NoContraction, NotDivisible, PreconditionFailed)
from .groebner import normal_form_against, std_basis
from .idealops import ideal_quotient
from .linalg import PolyMatrix, det, det_adjugate
from .localring import Jet, compute_e, jet_divide, monomials_of_degree
from .orders import ALGEBRA, BASE
from .poly import Polynomial, jacobian, taylor_coefficients


@dataclass
class LiftingProblem:
    """System data and an approximate polynomial solution."""

    ring: object                 # LocalRingSpec
    relations: tuple             # generators of I in A[Y]
    f_indices: tuple             # which generators form the subsystem f
    approx: dict                 # variable name -> Polynomial over the base
    rho: int
    target: int                  # requested output precision c

    def f_polys(self):
        return tuple(self.relations[i] for i in self.f_indices)


@dataclass
class LiftReport:
    e: int
    rho: int
    nu: int
    lifted: dict
    agreement: int
    update_orders: list = field(default_factory=list)


def nu_bound(e, rho, c):
    """The linear Artin function (e+1)*(rho+1) + c."""
    if e < 0 or rho < 0 or c < 1:
        raise NeronError("nu_bound needs e, rho >= 0 and c >= 1")
    return (e + 1) * (rho + 1) + c


def _jacobian_products(prob):
    """Evaluations at y' of generators of ((f):I) * Delta_f."""
    ring = prob.ring
    table = ring.table
    f_polys = list(prob.f_polys())
    y_names = list(table.block_names(ALGEBRA))
    j_gens = list(ring.j_gens)
    colon = ideal_quotient(f_polys + j_gens,
                           list(prob.relations) + j_gens, table, ring.order)
    from .linalg import minors as all_minors
    jac = PolyMatrix(table, jacobian(f_polys, y_names))
    minor_list = [m for m in all_minors(jac, len(f_polys)) if not m.is_zero()]
    subs = {nm: p for nm, p in prob.approx.items()}
    out = []
    for c in colon:
        for m in minor_list:
            val = ring.monomial_reduce((c * m).substitute(subs))
            if not val.is_zero():
                out.append(val)
    return out


def check_hypothesis(prob, e=None):
    """True iff (x)^rho lies in (J, (x)^nu(c), evaluated Jacobian data)."""
    ring = prob.ring
    table = ring.table
    if e is None:
        e = _exponent_for(prob)
    nu = nu_bound(e, prob.rho, prob.target)
    base = table.block(BASE)
    gens = _jacobian_products(prob) + list(ring.j_gens)
    gens += [Polynomial(table, {m: 1})
             for m in monomials_of_degree(table, base, nu)]
    basis = std_basis(gens, table, ring.order)
    for m in monomials_of_degree(table, base, prob.rho):
        p = Polynomial(table, {m: 1})
        if not normal_form_against(p, basis, table, ring.order).is_zero():
            return False
    return True


def _completion_data(prob):
    """Square matrix H at y' and the element d = (det H)(y')."""
    ring = prob.ring
    if ring.primes is None:
        from .localring import LocalRingSpec, minimal_primes
        primes = minimal_primes(list(ring.j_gens), ring.table, ring.order)
        ring = LocalRingSpec(ring.table, ring.j_gens, primes,
                             check_dimension=False)
    f_polys = [p for p in prob.f_polys()]
    prec = max(prob.target, prob.rho + 1, 2)
    v = MorphismApprox(prec, {nm: ring.jet(p, prec)
                              for nm, p in prob.approx.items()})
    B = AlgebraPresentation(ring, tuple(prob.relations))
    H = complete_H(B, f_polys, v, seed=0)
    d = ring.monomial_reduce(eval_exact(det(H), v))
    if d.is_zero():
        raise DivisionFailed("det(H) vanishes at the approximate solution")
    return H, d


def _exponent_for(prob):
    _, d = _completion_data(prob)
    return compute_e(d, prob.ring)


def _congruent(ring, a, b, k):
    return ring.reduce_jet(a - b, k).is_zero()


def newton_lift(prob):
    """Lift the approximate solution to jets of the target precision.

    Solves g = 0 by the contraction T <- -b - d^(e-1) Q(T) from T = 0; each
    iteration must strictly increase the x-order of the update.  Returns the
    lifted jets y = y' + d^e G(y') T with the exact agreement order.
    """
    ring = prob.ring
    table = ring.table
    y_names = list(table.block_names(ALGEBRA))
    f_polys = list(prob.f_polys())
    r = len(f_polys)
    c = prob.target

    for rel in prob.relations:
        val = ring.monomial_reduce(rel.substitute(prob.approx))
        if not ring.reduce_jet(val, prob.rho).is_zero():
            raise PreconditionFailed(
                "I(y') does not vanish modulo (x)^rho")

    H, d = _completion_data(prob)
    e = compute_e(d, ring)
    if not check_hypothesis(prob, e):
        raise HypothesisViolated(
            "the evaluated Jacobian ideal does not reach (x)^rho")
    nu = nu_bound(e, prob.rho, c)

    _, Gp = det_adjugate(H)
    subs = dict(prob.approx)
    Gy = [[ring.monomial_reduce(entry.substitute(subs)) for entry in row]
          for row in Gp.rows]

    d_ord = ring.monomial_reduce(d).order() or 0
    prec = c + (e + 1) * d_ord + 1
    d_jet = ring.jet(d, prec)
    d_e1 = d_jet ** (e + 1)
    b_jets = []
    for fp in f_polys:
        val = ring.jet(ring.monomial_reduce(fp.substitute(subs)), prec)
        if val.is_zero():
            b_jets.append(ring.zero_jet(max(prec - d_e1.order() if
                                            d_e1.order() else prec, 1)))
            continue
        try:
            b_jets.append(jet_divide(val, d_e1))
        except NotDivisible as exc:
            raise DivisionFailed(
                f"f(y') is not divisible by d^(e+1): {exc}") from exc
    for b in b_jets:
        if not b.is_zero() and (b.order() or 0) < 1:
            raise NoContraction("the contraction seed b has order zero")

    # Q_i(T) as exact polynomials; T enters through W = G(y') T
    taylor = []
    for fp in f_polys:
        taylor.append(taylor_coefficients(fp, y_names, subs))
    dpow = _PowerCache(d)

    n = len(y_names)
    t_prec = min(b.precision for b in b_jets) if b_jets else prec
    t_cur = [ring.zero_jet(t_prec) for _ in range(n)]
    orders = []
    for _ in range(c + 2):
        w_cur = []
        for j in range(n):
            acc = ring.zero_jet(t_prec)
            for k in range(n):
                if not Gy[j][k].is_zero():
                    acc = acc + t_cur[k] * Gy[j][k]
            w_cur.append(acc)
        t_next = list(t_cur)
        for i in range(r):
            q_val = ring.zero_jet(t_prec)
            for alpha, c_alpha in taylor[i].items():
                k = sum(alpha)
                if k < 2:
                    continue
                term = ring.jet(c_alpha * dpow[e * (k - 2)], t_prec)
                for j, aj in enumerate(alpha):
                    for _ in range(aj):
                        term = term * w_cur[j]
                q_val = q_val + term
            t_next[i] = -b_jets[i] - ring.jet(dpow[e - 1], t_prec) * q_val
        diff_orders = []
        for i in range(n):
            delta = t_next[i] - t_cur[i]
            if not delta.is_zero():
                diff_orders.append(delta.order())
        if not diff_orders:
            t_cur = t_next
            break
        step = min(diff_orders)
        if orders and step <= orders[-1]:
            raise NoContraction(
                "update order did not strictly increase")
        orders.append(step)
        t_cur = t_next
        if step > t_prec:
            break

    d_e = ring.jet(dpow[e], t_prec)
    lifted = {}
    for i, nm in enumerate(y_names):
        acc = ring.jet(prob.approx[nm], c)
        w_i = ring.zero_jet(t_prec)
        for k in range(n):
            if not Gy[i][k].is_zero():
                w_i = w_i + t_cur[k] * Gy[i][k]
        lifted[nm] = (acc + (d_e * w_i).truncate(min(t_prec, c))).truncate(c)

    for rel in prob.relations:
        val = rel.substitute({nm: j.poly for nm, j in lifted.items()})
        if not ring.reduce_jet(val, c).is_zero():
            raise DivisionFailed(
                "the lifted jets do not annihilate every relation")

    agreement = c
    for nm in y_names:
        delta = ring.reduce_jet(lifted[nm].poly - prob.approx[nm], c)
        if not delta.is_zero():
            agreement = min(agreement, delta.order())
    return LiftReport(e, prob.rho, nu, lifted, agreement, orders)


def strong_approx_decide(prob, y_second, precision):
    """Lift a refined approximation and certify agreement modulo (x)^rho.

    ``y_second`` maps variable names to polynomials with
    I(y'') = 0 modulo (x)^precision and y'' = y' modulo (x)^rho, where
    precision = (e+2)*(rho+1).  The lift runs from y'' to the requested
    target and the result agrees with y' modulo (x)^rho.
    """
    ring = prob.ring
    for nm, p in prob.approx.items():
        if not _congruent(ring, y_second[nm], p, prob.rho):
            raise PreconditionFailed(
                "y'' does not agree with y' modulo (x)^rho")
    for rel in prob.relations:
        val = ring.monomial_reduce(rel.substitute(y_second))
        if not ring.reduce_jet(val, precision).is_zero():
            raise PreconditionFailed(
                "I(y'') does not vanish modulo (x)^precision")
    gens = _jacobian_products(prob) + list(ring.j_gens)
    basis = std_basis(gens, ring.table, ring.order)
    base = ring.table.block(BASE)
    for m in monomials_of_degree(ring.table, base, prob.rho):
        p = Polynomial(ring.table, {m: 1})
        if not normal_form_against(p, basis, ring.table, ring.order).is_zero():
            raise PreconditionFailed(
                "the evaluated Jacobian ideal does not contain (x)^rho")
    prob2 = LiftingProblem(ring, prob.relations, prob.f_indices,
                           dict(y_second), prob.rho, prob.target)
    report = newton_lift(prob2)
    for nm, p in prob.approx.items():
        if not _congruent(ring, report.lifted[nm].poly, p, prob.rho):
            raise PreconditionFailed(
                "lifted solution does not agree with y' modulo (x)^rho")
    return report
