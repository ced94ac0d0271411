"""The base ring A = (k[x]/J)_(x) and its jet-level completion.

Jets are polynomial representatives truncated below a precision N and kept
in canonical form modulo J + (x)^N.  Arithmetic truncates to the minimum
precision of its operands.  The module also houses the restricted minimal
prime decomposer, active element search, the annihilator exponent, the
precision bound test, and the auxiliary smooth coefficient algebra.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (ActiveElementNotFound, DecompositionIncomplete,
                     NeronError, NotAUnit, NotDivisible, SeparabilityFailure,
                     TargetInsidePrime)
from .groebner import normal_form_against, std_basis
from .idealops import (ideal_equal, ideal_quotient, quotient_by_poly,
                       radical_membership, saturate)
from .orders import BASE, COEFF, VarTable, mixed_order
from .poly import Polynomial, jacobian, mon_deg
from .linalg import PolyMatrix, minors


def monomials_of_degree(table, positions, degree):
    """All exponent tuples supported on ``positions`` with total degree given."""
    n = len(table)
    out = []
    for combo in itertools.combinations_with_replacement(positions, degree):
        m = [0] * n
        for i in combo:
            m[i] += 1
        out.append(tuple(m))
    return out


class LocalRingSpec:
    """Base ring data: variables, relation ideal J, minimal primes.

    ``table`` may contain more blocks than the base; J and the primes live in
    the base variables.  The local dimension at the origin must be 1.
    """

    def __init__(self, table, j_gens, primes=None, check_dimension=True):
        self.table = table
        self.j_gens = tuple(g for g in j_gens if not g.is_zero())
        self.primes = None if primes is None else tuple(tuple(p) for p in primes)
        self._bases = {}
        self._jet_bases = {}
        self._prime_bases = None
        base = table.block(BASE)
        for g in self.j_gens:
            if g.constant_coefficient() != 0:
                raise NeronError("relation ideal is not contained in (x)")
            if any(m[i] for m in g.terms for i in range(len(table))
                   if i not in base and table.roles[i] != COEFF):
                raise NeronError("relation ideal must live in the base block")
        if check_dimension:
            dim = self.local_dimension()
            if dim != 1:
                raise NeronError(f"base ring has local dimension {dim}, not 1")

    # -- bases and reduction ------------------------------------------------

    @property
    def order(self):
        return mixed_order(self.table)

    def j_basis(self, order=None):
        order = self.order if order is None else order
        cached = self._bases.get(order)
        if cached is None:
            cached = std_basis(self.j_gens, self.table, order)
            self._bases[order] = cached
        return cached

    def reduce(self, p, order=None):
        order = self.order if order is None else order
        return normal_form_against(p, self.j_basis(order), self.table, order)

    def local_dimension(self):
        from .idealops import krull_dim
        return krull_dim(self.j_gens, self.table, self.order,
                         self.table.block(BASE))

    def jet_basis(self, precision):
        cached = self._jet_bases.get(precision)
        if cached is None:
            base = self.table.block(BASE)
            gens = list(self.j_gens)
            gens += [Polynomial(self.table, {m: 1})
                     for m in monomials_of_degree(self.table, base, precision)]
            cached = std_basis(gens, self.table, self.order)
            self._jet_bases[precision] = cached
        return cached

    def monomial_reduce(self, p):
        """Canonical form modulo J when every J-basis lead is the whole term.

        Reduction by single-term relations only deletes monomials, so this
        terminates for any order; for non-monomial J the input is returned
        unchanged (divisions absorb the difference through their J slots).
        """
        from .poly import mon_divides
        basis = self.j_basis()
        if not basis or not all(len(b.terms) == 1 for b in basis):
            return p
        leads = [next(iter(b.terms)) for b in basis]
        keep = {m: c for m, c in p.terms.items()
                if not any(mon_divides(lm, m) for lm in leads)}
        return Polynomial(self.table, keep)

    def reduce_jet(self, p, precision):
        # Full tail reduction terminates despite the local order: the jet
        # basis contains every degree-N base monomial, so the monomial
        # universe below the truncation is finite.
        from .groebner import _Prepared, classic_nf
        basis = self.jet_basis(precision)
        if not basis:
            return p
        keyf = self.order.key(self.table)
        prepared = [_Prepared(b, keyf, i) for i, b in enumerate(basis)]
        r, _ = classic_nf(p, prepared, keyf, self.table, full=True)
        return r

    def prime_bases(self):
        if self.primes is None:
            raise NeronError("minimal primes are not available")
        if self._prime_bases is None:
            self._prime_bases = tuple(
                std_basis(list(p), self.table, self.order)
                for p in self.primes)
        return self._prime_bases

    def with_table(self, newtable):
        """Same ring data lifted to an extended table."""
        ring = LocalRingSpec(newtable,
                             [g.lift(newtable) for g in self.j_gens],
                             None if self.primes is None else
                             tuple(tuple(q.lift(newtable) for q in p)
                                   for p in self.primes),
                             check_dimension=False)
        return ring

    def jet(self, p, precision):
        if isinstance(p, (int, Fraction)):
            p = Polynomial.const(self.table, p)
        return Jet(self, self.reduce_jet(p, precision), precision)

    def zero_jet(self, precision):
        return Jet(self, Polynomial.zero(self.table), precision)

    def validate_primes(self):
        """Check the stated invariants of a user-supplied prime list."""
        if self.primes is None:
            raise NeronError("no primes to validate")
        order = self.order
        bases = self.prime_bases()
        for p_gens, basis in zip(self.primes, bases):
            for g in p_gens:
                if g.constant_coefficient() != 0:
                    raise NeronError("a supplied prime is the unit ideal")
            for g in self.j_gens:
                if not normal_form_against(g, basis, self.table, order).is_zero():
                    raise NeronError("a supplied prime does not contain J")
        for a in range(len(self.primes)):
            for b in range(len(self.primes)):
                if a == b:
                    continue
                if all(normal_form_against(g, bases[b], self.table,
                                           order).is_zero()
                       for g in self.primes[a]):
                    raise NeronError("supplied primes are comparable")
        meet = None
        from .idealops import intersect
        for p_gens in self.primes:
            meet = list(p_gens) if meet is None else intersect(
                meet, list(p_gens), self.table, order)
        for g in meet or []:
            if not radical_membership(g, list(self.j_gens) or
                                      [Polynomial.zero(self.table)],
                                      self.table):
                raise NeronError(
                    "intersection of supplied primes is not in the radical of J")
        return True


class Jet:
    """Truncated element of the completion: polynomial of x-degree < N."""

    __slots__ = ("ring", "poly", "precision")

    def __init__(self, ring, poly, precision):
        if precision < 1:
            raise NeronError("jet precision must be at least 1")
        self.ring = ring
        self.poly = poly
        self.precision = precision

    def is_zero(self):
        return self.poly.is_zero()

    def order(self):
        return self.poly.order()

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        return Jet(self.ring, self.ring.reduce_jet(
            Polynomial.const(self.ring.table, other)
            if isinstance(other, (int, Fraction)) else other,
            self.precision), self.precision)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.precision, other.precision)
        return Jet(self.ring, self.ring.reduce_jet(self.poly + other.poly, n), n)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.ring, -self.poly, self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        n = min(self.precision, other.precision)
        return Jet(self.ring, self.ring.reduce_jet(self.poly - other.poly, n), n)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Jet(self.ring, self.poly * other, self.precision)
        other = self._coerce(other)
        n = min(self.precision, other.precision)
        return Jet(self.ring, self.ring.reduce_jet(self.poly * other.poly, n), n)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Jet(self.ring, Polynomial.const(self.ring.table, 1), self.precision)
        for _ in range(k):
            out = out * self
        return out

    def truncate(self, precision):
        if precision > self.precision:
            raise NeronError("cannot raise jet precision")
        return Jet(self.ring, self.ring.reduce_jet(self.poly, precision),
                   precision)

    def __eq__(self, other):
        return (isinstance(other, Jet) and self.precision == other.precision
                and self.poly == other.poly)

    def __repr__(self):
        return f"jet({self.poly!r}; N={self.precision})"


def jet_invert(u):
    """Jet z with u*z = 1 modulo (x)^N; the constant term must be nonzero."""
    c = u.poly.constant_coefficient()
    if c == 0:
        raise NotAUnit("jet has zero constant term")
    ring, n = u.ring, u.precision
    from .poly import exact_div
    z = ring.jet(exact_div(1, c), n)
    two = ring.jet(2, n)
    steps = 0
    while steps < 64:
        err = u * z - 1
        if err.is_zero():
            return z
        z = z * (two - u * z)
        steps += 1
    raise NeronError("jet inversion did not converge")


def _standard_monomials(ring, precision, max_degree):
    """Monomials below the jet basis lead ideal with degree < max_degree."""
    from .poly import mon_divides
    table = ring.table
    base = table.block(BASE)
    keyf = ring.order.key(table)
    leads = [b.lead(keyf)[0] for b in ring.jet_basis(precision)]
    out = []
    for d in range(max_degree):
        for m in monomials_of_degree(table, base, d):
            if not any(mon_divides(lm, m) for lm in leads):
                out.append(m)
    return out


def jet_divide(num, den, result_precision=None):
    """Jet z with den*z = num modulo (x)^(N - ord den) + J, else NotDivisible.

    Solved as an exact linear system on the coefficients of z over the
    standard monomials; any solution is returned (free coordinates zero).
    """
    ring = num.ring
    if den.is_zero():
        raise NotDivisible("division by a zero jet")
    o = den.order()
    n = min(num.precision, den.precision)
    n_res = n - o if result_precision is None else result_precision
    if n_res < 1:
        raise NotDivisible("no precision left after dividing")
    if num.is_zero():
        return ring.zero_jet(n_res)
    if num.poly == den.poly:
        return ring.jet(1, n_res)
    if den.poly.constant_coefficient() != 0:
        inv = jet_invert(den.truncate(min(den.precision, n_res)))
        return (num.truncate(min(num.precision, n_res)) * inv).truncate(n_res)
    table = ring.table
    target = n_res + o
    cols = _standard_monomials(ring, target, n_res)
    col_vecs = []
    support = {}
    for m in cols:
        prod = ring.reduce_jet(den.poly * Polynomial(table, {m: 1}),
                               target)
        col_vecs.append(prod.terms)
        for mm in prod.terms:
            support.setdefault(mm, len(support))
    rhs_poly = ring.reduce_jet(num.poly, target)
    for mm in rhs_poly.terms:
        support.setdefault(mm, len(support))
    nrows = len(support)
    ncols = len(cols)
    A = [[Fraction(0)] * ncols for _ in range(nrows)]
    for j, vec in enumerate(col_vecs):
        for mm, c in vec.items():
            A[support[mm]][j] = c
    rhs = [Fraction(0)] * nrows
    for mm, c in rhs_poly.terms.items():
        rhs[support[mm]] = c
    sol = _solve_exact(A, rhs)
    if sol is None:
        raise NotDivisible("jet division has no solution at this precision")
    z = Polynomial.from_terms(table, [(m, c) for m, c in zip(cols, sol) if c])
    return ring.jet(z, n_res)


def _solve_exact(A, rhs):
    """Gaussian elimination over the rationals; None when inconsistent.

    Free variables are set to zero so low-degree particular solutions come
    out when they exist (columns are ordered by ascending degree).
    """
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    rows = [list(r) + [b] for r, b in zip(A, rhs)]
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, nrows):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        inv = Fraction(1, 1) / pr[col]
        for r in range(nrows):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] * inv
                rr = rows[r]
                for c in range(col, ncols + 1):
                    rr[c] -= f * pr[c]
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    for r in range(rank, nrows):
        if rows[r][ncols] != 0:
            return None
    for r in range(rank):
        if all(rows[r][c] == 0 for c in range(ncols)) and rows[r][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        sol[col] = rows[r][ncols] / rows[r][col]
    return sol


# ---------------------------------------------------------------------------
# minimal primes (restricted decomposer)

def _monomial_split(g, table):
    """Variables occurring in a monomial generator, or None."""
    if len(g.terms) != 1:
        return None
    (m, _), = g.terms.items()
    return [i for i, e in enumerate(m) if e]


def _content_split(g, table):
    """x_i dividing every term of a non-monomial generator, or None."""
    if len(g.terms) < 2:
        return None
    shared = None
    for m in g.terms:
        sup = {i for i, e in enumerate(m) if e}
        shared = sup if shared is None else (shared & sup)
        if not shared:
            return None
    return sorted(shared)


def minimal_primes(j_gens, table, order=None, max_components=64):
    """Minimal primes over J via factor splitting plus saturation.

    Handles the monomial-style relation ideals this library meets; anything
    it cannot certify raises DecompositionIncomplete, directing the caller
    to supply the primes explicitly (MINPRIMES in the problem file).
    """
    order = mixed_order(table) if order is None else order
    live = [g for g in j_gens if not g.is_zero()]
    if not live:
        return [()]
    start = std_basis(live, table, order)
    if any(b.is_constant() for b in start):
        raise NeronError("J is the unit ideal")
    work = [tuple(start)]
    finished = []
    while work:
        if len(finished) + len(work) > max_components:
            raise DecompositionIncomplete(
                "too many components; supply MINPRIMES")
        gens = work.pop()
        basis = std_basis(list(gens), table, order)
        if any(b.is_constant() and not b.is_zero() for b in basis):
            continue
        if not basis:
            finished.append(())
            continue
        split_done = False
        for g in basis:
            idxs = _monomial_split(g, table)
            if idxs is not None:
                (m, _), = g.terms.items()
                if len(idxs) >= 2:
                    v = Polynomial.var(table, table.names[idxs[0]])
                    branch1 = tuple(basis) + (v,)
                    branch2, _ = saturate(list(basis), v, table, order)
                    work.append(branch1)
                    work.append(tuple(branch2))
                    split_done = True
                    break
                if m[idxs[0]] >= 2:
                    v = Polynomial.var(table, table.names[idxs[0]])
                    reduced = tuple(b for b in basis if b is not g) + (v,)
                    work.append(reduced)
                    split_done = True
                    break
                continue
            idxs = _content_split(g, table)
            if idxs is not None:
                v = Polynomial.var(table, table.names[idxs[0]])
                branch1 = tuple(basis) + (v,)
                branch2, _ = saturate(list(basis), v, table, order)
                work.append(branch1)
                work.append(tuple(branch2))
                split_done = True
                break
        if split_done:
            continue
        if _certify_prime(basis, table):
            finished.append(tuple(basis))
        else:
            raise DecompositionIncomplete(
                "cannot certify a component prime; supply MINPRIMES")
    # keep inclusion-minimal components, deduplicated
    uniq = []
    for gens in finished:
        if not any(ideal_equal(list(gens), list(other), table, order)
                   for other in uniq):
            uniq.append(gens)
    minimal = []
    for gens in uniq:
        basis_g = std_basis(list(gens), table, order)
        keep = True
        for other in uniq:
            if other is gens:
                continue
            other_in_g = all(
                normal_form_against(o, basis_g, table, order).is_zero()
                for o in other)
            if other_in_g and not ideal_equal(list(gens), list(other),
                                              table, order):
                keep = False
                break
        if keep:
            minimal.append(gens)
    return minimal


def _certify_prime(basis, table):
    if not basis:
        return True
    names = set()
    all_vars = True
    for b in basis:
        if len(b.terms) == 1:
            (m, _), = b.terms.items()
            if sum(m) == 1:
                names.add(table.names[[i for i, e in enumerate(m) if e][0]])
                continue
        all_vars = False
    if all_vars:
        return True
    if len(basis) == 1 and basis[0].total_degree() == 1:
        return True
    return False


def active_element(target_gens, primes, table, order=None, seed=0,
                   accept=None, max_attempts=1000):
    """Element of the target ideal avoiding every minimal prime.

    Search order: the given generators first, then seeded small-integer
    combinations with coefficients in -3..3.
    """
    order = mixed_order(table) if order is None else order
    live = [g for g in target_gens if not g.is_zero()]
    if not live:
        raise TargetInsidePrime("target ideal is zero")
    prime_bases = [std_basis(list(p), table, order) for p in primes]
    for basis in prime_bases:
        if all(normal_form_against(g, basis, table, order).is_zero()
               for g in live):
            raise TargetInsidePrime("target ideal lies inside a minimal prime")

    def is_active(d):
        return all(not normal_form_against(d, basis, table, order).is_zero()
                   for basis in prime_bases)

    for g in live:
        if is_active(g) and (accept is None or accept(g)):
            return g
    rng = random.Random(seed)
    for _ in range(max_attempts):
        coeffs = [rng.randint(-3, 3) for _ in live]
        if not any(coeffs):
            continue
        d = Polynomial.zero(table)
        for c, g in zip(coeffs, live):
            if c:
                d = d + g * c
        if d.is_zero() or not is_active(d):
            continue
        if accept is None or accept(d):
            return d
    raise ActiveElementNotFound(
        "no active element found within the attempt budget")


def compute_e(d, ring, cap=50):
    """Least e >= 1 with (0 : d^e) = (0 : d^(e+1)) in A, by colon iteration."""
    table, order = ring.table, ring.order
    current = tuple(ring.j_basis())
    for k in range(cap):
        nxt = quotient_by_poly(list(current), d, table, order)
        nxt = tuple(std_basis(list(nxt), table, order))
        if ideal_equal(list(current), list(nxt), table, order):
            return max(1, k)
        current = nxt
    raise NeronError("annihilator chain did not stabilize within the cap")


def check_precision_bound(N, d, e, ring):
    """True iff (x)^N is contained in (d^(2e+1)) + J locally."""
    table, order = ring.table, ring.order
    gens = list(ring.j_gens) + [d ** (2 * e + 1)]
    basis = std_basis(gens, table, order)
    base = table.block(BASE)
    for m in monomials_of_degree(table, base, N):
        p = Polynomial(table, {m: 1})
        if not normal_form_against(p, basis, table, order).is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# coefficient extension and the smooth base D

@dataclass(frozen=True)
class CoeffExt:
    """Separable presentation data for the coefficient field extension."""

    u_names: tuple
    jbar_gens: tuple
    w: tuple
    rho_min: Polynomial | None
    tau: Polynomial | None
    gamma: Polynomial | None

    @property
    def trivial(self):
        return not self.jbar_gens and not self.u_names


@dataclass(frozen=True)
class SmoothBaseD:
    """Presentation of the auxiliary smooth base; equals A when trivial."""

    ring: LocalRingSpec
    ext: CoeffExt
    relations: tuple
    multiplier: Polynomial
    omega: dict = field(default_factory=dict)

    @property
    def is_base_ring(self):
        return not self.relations and self.multiplier.is_constant()


def construct_coeff_ext(table, u_names, jbar_gens):
    """Choose a subsystem w, a separability minor and a colon witness tau."""
    one = Polynomial.const(table, 1)
    live = [g for g in jbar_gens if not g.is_zero()]
    if not u_names:
        return CoeffExt((), (), (), None, None, None)
    if not live:
        return CoeffExt(tuple(u_names), (), (), one, one, one)
    order = mixed_order(table)
    jbar_basis = std_basis(live, table, order)
    max_p = min(len(live), len(u_names))
    for p in range(max_p, 0, -1):
        for w_idx in itertools.combinations(range(len(live)), p):
            w = [live[i] for i in w_idx]
            jac = PolyMatrix(table, jacobian(w, list(u_names)))
            for rho in minors(jac, p):
                if rho.is_zero():
                    continue
                if radical_membership(rho, live, table):
                    continue
                colon = ideal_quotient(w, live, table, order)
                tau = None
                for cand in colon:
                    if not normal_form_against(cand, jbar_basis, table,
                                               order).is_zero():
                        tau = cand
                        break
                if tau is None:
                    continue
                return CoeffExt(tuple(u_names), tuple(live), tuple(w),
                                rho, tau, one)
    raise SeparabilityFailure("no subsystem with a unit minor exists")


def build_D(ext, ring, omega=None):
    """Auxiliary smooth base from the coefficient extension data."""
    one = Polynomial.const(ring.table, 1)
    if ext.trivial:
        return SmoothBaseD(ring, ext, (), one, dict(omega or {}))
    if not ext.jbar_gens:
        return SmoothBaseD(ring, ext, (), one, dict(omega or {}))
    multiplier = ext.rho_min * ext.tau * (ext.gamma or one)
    return SmoothBaseD(ring, ext, tuple(ext.w), multiplier,
                       dict(omega or {}))
