"""End-to-end desingularization for morphisms of one-dimensional local rings.

Given B = A[Y]/I and jets approximating a morphism v : B -> A', the driver
selects a subsystem f of the relations whose evaluated Jacobian data avoids
every minimal prime, completes the Jacobian to a square matrix, normalizes
the situation until an active element d congruent to P = R*det(H) exists,
and assembles the standard smooth presentation

    E = D[Y, T]/(g, h)  localized at  s * s' * s''

together with an exactness certificate and, when higher-precision jets are
supplied, a jet-level factorization check.  A full trace of the nineteen
pipeline stages is recorded for the command line driver.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (ActiveElementNotFound, BoundTooSmall, CertificateFailed,
                     CompletionFailed, ConditionStarStarFailed,
                     DivisibilityViolated, JetDivisionFailed, NeronError,
                     NotDivisible, NotInIdeal, TargetInsidePrime,
                     VerificationFailed)
from .groebner import (lift_division, normal_form_against, std_basis)
from .idealops import eliminate, krull_dim, saturate, syzygies
from .linalg import PolyMatrix, det, det_adjugate
from .localring import (Jet, LocalRingSpec, active_element,
                        check_precision_bound, compute_e, jet_divide,
                        jet_invert, minimal_primes)
from .orders import (ALGEBRA, AUX, BASE, COEFF, INVERTER, SLACK, TANGENT,
                     global_order, mixed_order)
from .poly import (Polynomial, format_poly, jacobian, mon_deg,
                   taylor_coefficients)

_ROW_VALUES = (0, 1, -1, 2, -2, 3, -3)


# ---------------------------------------------------------------------------
# data

@dataclass
class AlgebraPresentation:
    """A finite presentation over the base ring (or over D)."""

    ring: LocalRingSpec
    relations: tuple
    inverted: tuple = ()

    @property
    def table(self):
        return self.ring.table

    def algebra_names(self):
        return self.table.block_names(ALGEBRA, SLACK)

    def lift(self, newtable):
        ring = self.ring.with_table(newtable)
        return AlgebraPresentation(
            ring, tuple(p.lift(newtable) for p in self.relations),
            tuple(p.lift(newtable) for p in self.inverted))


@dataclass
class MorphismApprox:
    """Jets y' approximating v(Y) to precision N, plus optional verify jets."""

    precision: int
    jets: dict
    verify: dict = field(default_factory=dict)

    def lift(self, ring):
        table = ring.table
        def lift_map(d):
            return {k: Jet(ring, j.poly.lift(table), j.precision)
                    for k, j in d.items()}
        return MorphismApprox(self.precision, lift_map(self.jets),
                              lift_map(self.verify))


@dataclass
class ElkikContribution:
    subset: tuple          # indices into the relation list
    colon_gens: tuple
    minor_polys: tuple
    products: tuple


@dataclass
class ElkikData:
    """Pre-radical smoothness ideal: sum of ((f):I) * Delta_f over subsets."""

    contributions: list
    gens: tuple
    h_cap_a: tuple


@dataclass
class SmoothingCertificate:
    f: tuple
    r: int
    H: PolyMatrix
    R: Polynomial
    P: Polynomial
    d: Polynomial
    e: int
    s: Polynomial
    b: tuple
    Gprime: PolyMatrix
    G: PolyMatrix
    h: tuple
    p: int
    Q: tuple
    g: tuple
    pivots: tuple
    s_prime: Polynomial = None
    s_second_num: Polynomial = None
    s_second_pow: int = 0


@dataclass
class TraceRecord:
    line: int
    label: str
    values: dict
    note: str = ""
    seconds: float = 0.0


@dataclass
class FactorReport:
    passed: bool
    precision: int
    epsilon: dict
    tangent: dict
    checks: list


@dataclass
class DesingResult:
    presentation: AlgebraPresentation
    certificate: SmoothingCertificate
    structure_map: dict
    simplified: tuple
    multiplier: Polynomial
    trace: list
    morphism: MorphismApprox
    algebra: AlgebraPresentation = None
    jet_map: FactorReport = None


@dataclass
class DesingProblem:
    """Fully parsed inputs for the pipeline."""

    ring: LocalRingSpec
    relations: tuple
    morphism: MorphismApprox
    seed: int = 42
    max_subset: int = 3


# ---------------------------------------------------------------------------
# evaluation helpers

def eval_at_jets(p, v, ring):
    """Evaluate a polynomial at the morphism jets; precision is the smallest
    precision among the jets that actually occur."""
    names = [n for n in v.jets if n in p.variables()]
    prec = min((v.jets[n].precision for n in names), default=v.precision)
    q = p.substitute({n: j.poly for n, j in v.jets.items()})
    return ring.jet(q, prec)


def eval_exact(p, v):
    """Exact substitution of the jet representatives, no truncation.

    The certificate identities are exact polynomial statements about the
    chosen representatives, so the construction must not truncate."""
    return p.substitute({n: j.poly for n, j in v.jets.items()})


class _PrimeChecks:
    """Cached normal-form tests against P_i + (x)^N."""

    def __init__(self, ring, precision):
        self.ring = ring
        self.precision = precision
        self._bases = None

    def bases(self):
        if self._bases is None:
            from .localring import monomials_of_degree
            table = self.ring.table
            base = table.block(BASE)
            cut = [Polynomial(table, {m: 1})
                   for m in monomials_of_degree(table, base, self.precision)]
            out = []
            for p_gens in self.ring.primes:
                gens = list(p_gens) + list(self.ring.j_gens) + cut
                out.append(std_basis(gens, table, self.ring.order))
            self._bases = tuple(out)
        return self._bases

    def survives(self, jet, i):
        """True when the jet is nonzero modulo P_i + (x)^N."""
        return not normal_form_against(jet.poly, self.bases()[i],
                                       self.ring.table,
                                       self.ring.order).is_zero()

    def survives_all(self, jet):
        return all(self.survives(jet, i) for i in range(len(self.ring.primes)))


# ---------------------------------------------------------------------------
# stages

def elkik_ideal(B, cap):
    """Sum over generator subsets of ((f):I) * Delta_f, plus its trace in A."""
    ring = B.ring
    table = ring.table
    order = ring.order
    rels = [p for p in B.relations if not p.is_zero()]
    y_names = list(B.algebra_names())
    n = len(y_names)
    j_gens = list(ring.j_gens)
    i_plus_j = rels + j_gens
    contributions = []
    sizes = range(0, min(cap, n, len(rels)) + 1) if rels else (0,)
    from .idealops import ideal_quotient
    from .linalg import minors as all_minors
    for r in sizes:
        if r == 0 and rels:
            continue
        for subset in itertools.combinations(range(len(rels)), r):
            fs = [rels[i] for i in subset]
            if r:
                jac = PolyMatrix(table, jacobian(fs, y_names))
                minor_list = [m for m in all_minors(jac, r) if not m.is_zero()]
            else:
                minor_list = [Polynomial.const(table, 1)]
            if not minor_list:
                continue
            colon = ideal_quotient(fs + j_gens if fs else j_gens,
                                   i_plus_j if rels else
                                   [Polynomial.zero(table)], table, order)
            colon = tuple(c for c in colon if not c.is_zero())
            products = []
            seen = set()
            for c in colon:
                for m in minor_list:
                    prod = (c * m).primitive()
                    if prod.is_zero():
                        continue
                    key = frozenset(prod.terms.items())
                    if key not in seen:
                        seen.add(key)
                        products.append(prod)
            contributions.append(ElkikContribution(subset, colon,
                                                   tuple(minor_list),
                                                   tuple(products)))
    gens = []
    seen = set()
    for c in contributions:
        for p in c.products:
            key = frozenset(p.terms.items())
            if key not in seen:
                seen.add(key)
                gens.append(p)
    elim_roles = tuple(r for r in table.roles_present()
                       if r not in (BASE, COEFF))
    h_cap_a = eliminate(gens + rels + j_gens, elim_roles, table, order) \
        if elim_roles else tuple(std_basis(gens + rels + j_gens, table, order))
    return ElkikData(contributions, tuple(gens), tuple(h_cap_a))


def sym_algebra_reduction(B, v):
    """Replace B by its conormal symmetric algebra plus slack variables.

    New algebra variables, one per relation, carry the syzygy forms of the
    relations (entries reduced modulo I); slack variables are then adjoined
    with themselves as relations.  The morphism extends by zero on every new
    variable.
    """
    ring = B.ring
    table = ring.table
    order = ring.order
    rels = list(B.relations)
    j_gens = list(ring.j_gens)
    l = len(rels)
    if l == 0:
        return B, v
    syz = syzygies(rels + j_gens, table, order)
    i_basis = std_basis(rels + j_gens, table, order)
    new_pairs = [(table.fresh_name(f"Y{len(B.algebra_names()) + k + 1}"),
                  ALGEBRA) for k in range(l)]
    table1 = table.extend(*new_pairs)
    ring1 = ring.with_table(table1)
    rels1 = [p.lift(table1) for p in rels]
    forms = []
    for vec in syz:
        head = vec[:l]
        if all(q.is_zero() for q in head):
            continue
        form = Polynomial.zero(table1)
        for (name, _), q in zip(new_pairs, head):
            qred = normal_form_against(q, i_basis, table, order)
            if not qred.is_zero():
                form = form + qred.lift(table1) * Polynomial.var(table1, name)
        if not form.is_zero():
            forms.append(form)
    rels1 += forms
    n1 = len(table1.block(ALGEBRA))
    slack_pairs = [(table1.fresh_name(f"Z{k + 1}"), SLACK) for k in range(n1)]
    table2 = table1.extend(*slack_pairs)
    ring2 = ring.with_table(table2)
    rels2 = [p.lift(table2) for p in rels1]
    rels2 += [Polynomial.var(table2, name) for name, _ in slack_pairs]
    B2 = AlgebraPresentation(ring2, tuple(rels2),
                             tuple(p.lift(table2) for p in B.inverted))
    jets = {k: Jet(ring2, j.poly.lift(table2), j.precision)
            for k, j in v.jets.items()}
    verify = {k: Jet(ring2, j.poly.lift(table2), j.precision)
              for k, j in v.verify.items()}
    for name, _ in new_pairs + slack_pairs:
        jets[name] = ring2.zero_jet(v.precision)
        if verify:
            verify[name] = ring2.zero_jet(
                max(j.precision for j in verify.values()))
    return B2, MorphismApprox(v.precision, jets, verify)


def _combo_vectors(k, budget):
    """Small integer coefficient vectors in deterministic order."""
    for total in range(2, budget + 1):
        for vec in itertools.product(_ROW_VALUES, repeat=k):
            if sum(abs(c) for c in vec) == total:
                yield vec


def find_f_R(B, elkik, v, seed=0, combo_budget=6):
    """Subsystem f and colon witness R passing the per-prime jet tests.

    Enumeration is deterministic: subsets smallest first in index order; for
    R the colon generators first, then small-integer combinations.
    """
    ring = B.ring
    checks = _PrimeChecks(ring, v.precision)
    nprimes = len(ring.primes)
    diagnostics = []
    for contrib in elkik.contributions:
        if not contrib.products:
            continue
        per_prime_ok = True
        for i in range(nprimes):
            if not any(checks.survives(eval_at_jets(p, v, ring), i)
                       for p in contrib.products):
                per_prime_ok = False
                diagnostics.append(
                    (contrib.subset, i,
                     "no product survives modulo this prime"))
                break
        if not per_prime_ok:
            continue
        cands = list(contrib.colon_gens)
        for cand in cands:
            if checks.survives_all(eval_at_jets(cand, v, ring)):
                return contrib, cand
        k = min(len(cands), 6)
        for vec in _combo_vectors(k, combo_budget):
            R = Polynomial.zero(ring.table)
            for c, g in zip(vec, cands[:k]):
                if c:
                    R = R + g * c
            if R.is_zero():
                continue
            if checks.survives_all(eval_at_jets(R, v, ring)):
                return contrib, R
        diagnostics.append((contrib.subset, None,
                            "subset passed but no witness R was found"))
    raise ConditionStarStarFailed(
        "no generator subset passes the evaluated Jacobian test at this "
        "precision", diagnostics)


def _candidate_rows(n):
    for row in itertools.product(_ROW_VALUES, repeat=n):
        if any(row):
            yield row


def complete_H(B, f_polys, v, seed=0, max_random=100):
    """Square matrix: Jacobian rows of f on top, small constant rows below,
    chosen so the evaluated determinant avoids every minimal prime."""
    ring = B.ring
    table = ring.table
    y_names = list(B.algebra_names())
    n = len(y_names)
    r = len(f_polys)
    checks = _PrimeChecks(ring, v.precision)
    top = jacobian(f_polys, y_names) if r else []

    def accept(rows):
        M = PolyMatrix(table, top + [[Polynomial.const(table, c)
                                      for c in row] for row in rows])
        dm = det(M)
        if dm.is_zero():
            return None
        if checks.survives_all(eval_at_jets(dm, v, ring)):
            return M
        return None

    if r == n:
        M = accept([])
        if M is None:
            raise CompletionFailed(
                "the full Jacobian determinant vanishes modulo a prime")
        return M
    missing = n - r
    cand = list(itertools.islice(_candidate_rows(n), 350))
    if missing == 1:
        pools = [cand]
    else:
        pools = [cand[:40]] * missing
    for rows in itertools.product(*pools):
        M = accept(list(rows))
        if M is not None:
            return M
    rng = random.Random(seed)
    for _ in range(max_random):
        rows = [[rng.randint(-3, 3) for _ in range(n)]
                for _ in range(missing)]
        M = accept(rows)
        if M is not None:
            return M
    raise CompletionFailed("no completion found within the retry cap")


@dataclass
class Reduction:
    """Outcome of the primary-contraction stage."""

    B: AlgebraPresentation
    v: MorphismApprox
    f: tuple
    H: PolyMatrix
    R: Polynomial
    P: Polynomial
    d: Polynomial
    pivots: tuple
    p_cap_a: tuple
    dim: int
    adjoined: bool
    note: str = ""


def mm_primary_reduction(B, f_polys, H, R, v, seed=0):
    """Arrange for an active element d with d = P modulo the relations.

    When the contraction (P) meet A is zero dimensional an active element
    congruent to P is searched directly; otherwise (or when none of the
    candidates is congruent to P) a new algebra variable Y with relation
    P*Y - d' is adjoined, after solving d' = v(P) * y' at jet level.  The
    adjunction branch is experimental and flagged in the trace.
    """
    ring = B.ring
    table = ring.table
    order = ring.order
    rels = list(B.relations)
    j_gens = list(ring.j_gens)
    P = R * det(H)
    elim_roles = tuple(r for r in table.roles_present()
                       if r not in (BASE, COEFF))
    p_cap_a = eliminate([P] + rels + j_gens, elim_roles, table, order)
    dim = krull_dim(list(p_cap_a) + j_gens, table, order, table.block(BASE))
    pivots = tuple(range(len(f_polys)))
    if dim != 1:
        rel_basis = std_basis(rels + j_gens, table, order)

        def congruent_to_p(c):
            return normal_form_against(c - P, rel_basis, table, order).is_zero()

        try:
            d = active_element(list(p_cap_a), ring.primes, table, order,
                               seed=seed, accept=congruent_to_p)
            return Reduction(B, v, tuple(f_polys), H, R, P, d, pivots,
                             tuple(p_cap_a), dim, False)
        except (ActiveElementNotFound, TargetInsidePrime):
            note = ("no active element congruent to P; "
                    "falling back to variable adjunction")
    else:
        note = "contraction has dimension 1"
    return _adjoin_variable(B, f_polys, H, R, P, v, seed, pivots,
                            tuple(p_cap_a), dim, note)


def _adjoin_variable(B, f_polys, H, R, P, v, seed, pivots, p_cap_a, dim, note):
    ring = B.ring
    table = ring.table
    vP = eval_at_jets(P, v, ring)
    if vP.is_zero():
        raise ActiveElementNotFound("v(P) vanishes at jet precision")
    d_prime = None
    z = None
    from .localring import monomials_of_degree
    base = table.block(BASE)
    prime_bases = ring.prime_bases()

    def active(c):
        return all(not normal_form_against(c, pb, table, ring.order).is_zero()
                   for pb in prime_bases)

    # constants first: when v(P) is a unit jet the inert choice d' = 1
    # collapses the localization data to units
    candidates = [Polynomial.const(table, 1)]
    for deg in range(1, v.precision):
        mons = [Polynomial(table, {m: 1})
                for m in monomials_of_degree(table, base, deg)]
        candidates.extend(mons)
        for a, b2 in itertools.combinations(mons, 2):
            candidates.append(a + b2)
    for c in candidates:
        if not active(c):
            continue
        try:
            z = jet_divide(ring.jet(c, v.precision), vP)
        except NotDivisible:
            continue
        d_prime = c
        break
    if d_prime is None:
        raise ActiveElementNotFound(
            "no active element in the evaluated contraction ideal")
    new_name = table.fresh_name(f"Y{len(B.algebra_names()) + 1}")
    table1 = table.extend((new_name, ALGEBRA))
    ring1 = ring.with_table(table1)
    B1 = AlgebraPresentation(ring1,
                             tuple(p.lift(table1) for p in B.relations),
                             tuple(p.lift(table1) for p in B.inverted))
    P1 = P.lift(table1)
    f_new = P1 * Polynomial.var(table1, new_name) - d_prime.lift(table1)
    B1 = AlgebraPresentation(B1.ring, B1.relations + (f_new,), B1.inverted)
    y_names1 = list(B1.algebra_names())
    jrow = [f_new.derivative(nm) for nm in y_names1[:-1]] + [P1]
    n_old = len(y_names1) - 1
    zero = Polynomial.zero(table1)
    rows1 = [[e.lift(table1) for e in row] + [zero] for row in H.rows]
    rows1.append(jrow)
    H1 = PolyMatrix(table1, rows1)
    R1 = R.lift(table1) * Polynomial.var(table1, new_name) ** 2
    d1 = (d_prime * d_prime).lift(table1)
    P_final = R1 * det(H1)
    jets1 = {k: Jet(ring1, j.poly.lift(table1), j.precision)
             for k, j in v.jets.items()}
    jets1[new_name] = Jet(ring1, z.poly.lift(table1), z.precision)
    verify1 = {k: Jet(ring1, j.poly.lift(table1), j.precision)
               for k, j in v.verify.items()}
    if verify1:
        vv = MorphismApprox(max(j.precision for j in verify1.values()),
                            verify1)
        try:
            vP_hi = eval_at_jets(P.lift(table1), vv, ring1)
            z_hi = jet_divide(ring1.jet(d_prime.lift(table1), vv.precision),
                              vP_hi)
            verify1[new_name] = z_hi
        except NotDivisible:
            verify1 = {}
    v1 = MorphismApprox(v.precision, jets1, verify1)
    f1 = tuple(p.lift(table1) for p in f_polys) + (f_new,)
    pivots1 = pivots + (len(y_names1) - 1,)
    return Reduction(B1, v1, f1, H1, R1, P_final, d1, pivots1,
                     p_cap_a, dim, True, note)


def _tangent_names(table, n):
    return [table.fresh_name(f"T{i + 1}") for i in range(n)]


def build_hg(B, red, e, verify=True):
    """Construct the certificate data s, b, h, Q and g on a T-extended table.

    Divisions are exact with witnesses over the polynomial ring: failure
    signals an invalid instance or a too-small precision bound.
    """
    ring = B.ring
    v = red.v
    n = len(B.algebra_names())
    t_pairs = [(nm, TANGENT) for nm in _tangent_names(ring.table, n)]
    table = ring.table.extend(*t_pairs)
    ringT = ring.with_table(table)
    BT = B.lift(table)
    vT = v.lift(ringT)
    y_names = list(BT.algebra_names())
    t_names = [nm for nm, _ in t_pairs]
    f_polys = [p.lift(table) for p in red.f]
    H = red.H.lift(table)
    R = red.R.lift(table)
    P = red.P.lift(table)
    d = red.d.lift(table)
    j_gens = list(ringT.j_gens)
    gorder = global_order()

    dH, Gp = det_adjugate(H)
    G = Gp.scale(R)

    vP = ringT.monomial_reduce(eval_exact(P, vT))
    try:
        w = lift_division(vP, [d] + j_gens, table, gorder)
    except NotInIdeal as exc:
        raise DivisibilityViolated(
            f"P(y') is not divisible by d over the base: {exc}") from exc
    s = w.quotients[0]
    s_basis = std_basis([d] + j_gens, table, ringT.order)
    if not normal_form_against(s - 1, s_basis, table, ringT.order).is_zero():
        raise DivisibilityViolated("the unit s is not congruent to 1 modulo d")

    d_pow = d ** (e + 1)
    b_list = []
    de_basis = std_basis([d ** e] + j_gens, table, ringT.order)
    for fpoly in f_polys:
        val = ringT.monomial_reduce(eval_exact(fpoly, vT))
        try:
            wb = lift_division(val, [d_pow] + j_gens, table, gorder)
        except NotInIdeal as exc:
            raise DivisibilityViolated(
                f"f(y') is not divisible by d^(e+1): {exc}") from exc
        b_i = wb.quotients[0]
        if not normal_form_against(b_i, de_basis, table, ringT.order).is_zero():
            raise DivisibilityViolated("b does not lie in d^e times the base")
        b_list.append(b_i)

    jets_poly = {nm: vT.jets[nm].poly for nm in y_names}
    Gy = PolyMatrix(table, [[ringT.monomial_reduce(eval_exact(entry, vT))
                             for entry in row] for row in G.rows])
    t_vars = [Polynomial.var(table, nm) for nm in t_names]
    W_rows = Gy.matvec(t_vars)
    spow = _PowerCache(s)
    dpow = _PowerCache(d)
    d_e = dpow[e]
    h_list = []
    for i, nm in enumerate(y_names):
        h_i = s * (Polynomial.var(table, nm) - jets_poly[nm]) - d_e * W_rows[i]
        h_list.append(h_i)

    y_positions = table.block(ALGEBRA, SLACK)
    p_deg = max((fp.degree_in(y_positions) for fp in f_polys), default=1)
    p_deg = max(p_deg, 1)

    W_pow = [_PowerCache(w_j) for w_j in W_rows]
    Q_list = []
    g_list = []
    for i, fpoly in enumerate(f_polys):
        coeffs = taylor_coefficients(fpoly, y_names, jets_poly)
        Q_i = Polynomial.zero(table)
        for alpha, c_alpha in coeffs.items():
            k = sum(alpha)
            if k < 2:
                continue
            term = c_alpha * spow[p_deg - k] * dpow[e * (k - 2)]
            for j, aj in enumerate(alpha):
                if aj:
                    term = term * W_pow[j][aj]
            Q_i = Q_i + term
        Q_list.append(Q_i)
        g_i = spow[p_deg] * b_list[i] \
            + spow[p_deg] * t_vars[red.pivots[i]] \
            + dpow[e - 1] * Q_i
        g_list.append(g_i)

    cert = SmoothingCertificate(
        f=tuple(f_polys), r=len(f_polys), H=H, R=R, P=P, d=d, e=e, s=s,
        b=tuple(b_list), Gprime=Gp, G=G, h=tuple(h_list), p=p_deg,
        Q=tuple(Q_list), g=tuple(g_list), pivots=red.pivots)

    if verify:
        verify_certificate(cert, BT, vT, taylor_nf=False)
        certify_subsystem_membership(cert, BT, vT)
    return cert, BT, vT


class _PowerCache:
    """Cached nonnegative powers of one polynomial."""

    def __init__(self, base):
        self.base = base
        self.cache = {0: Polynomial.const(base.table, 1), 1: base}

    def __getitem__(self, k):
        got = self.cache.get(k)
        if got is None:
            lo = max(i for i in self.cache if i < k)
            got = self.cache[lo]
            while lo < k:
                got = got * self.base
                lo += 1
                self.cache[lo] = got
        return got


class _Telescope:
    """Shared machinery to rewrite polynomials modulo (h) into T-space.

    For q in the algebra variables, s^p * q equals the expansion of q at the
    shifted point plus an explicit combination of the h relations; the
    telescoping between a_j = s*(Y_j - y'_j) and b_j = d^e*(G(y')T)_j makes
    the combination exact polynomial data, with no basis computation.
    """

    def __init__(self, cert, BT, vT):
        ring = BT.ring
        table = ring.table
        self.cert = cert
        self.ring = ring
        self.table = table
        self.y_names = list(BT.algebra_names())
        t_names = list(table.block_names(TANGENT))
        t_vars = [Polynomial.var(table, nm) for nm in t_names]
        self.jets_poly = {nm: vT.jets[nm].poly for nm in self.y_names}
        Gy_rows = [[ring.monomial_reduce(eval_exact(entry, vT))
                    for entry in row] for row in cert.G.rows]
        W_rows = []
        for j in range(len(self.y_names)):
            acc = Polynomial.zero(table)
            for k, tv in enumerate(t_vars):
                acc = acc + Gy_rows[j][k] * tv
            W_rows.append(acc)
        self.spow = _PowerCache(cert.s)
        self.dpow = _PowerCache(cert.d)
        d_e = self.dpow[cert.e]
        a_vec = [cert.s * (Polynomial.var(table, nm) - self.jets_poly[nm])
                 for nm in self.y_names]
        b_vec = [d_e * w for w in W_rows]
        self.a_pow = [_PowerCache(a) for a in a_vec]
        self.b_pow = [_PowerCache(b) for b in b_vec]

    def expand(self, q, p_q):
        """(expansion, h_comb) with s^p_q * q = expansion + sum(h_comb*h)."""
        table = self.table
        coeffs = taylor_coefficients(q, self.y_names, self.jets_poly)
        h_comb = [Polynomial.zero(table) for _ in self.y_names]
        expansion = Polynomial.zero(table)
        for alpha, c_alpha in coeffs.items():
            k = sum(alpha)
            scale = c_alpha * self.spow[p_q - k]
            term_b = scale
            for j, aj in enumerate(alpha):
                if aj:
                    term_b = term_b * self.b_pow[j][aj]
            expansion = expansion + term_b
            prefix = scale
            for j, aj in enumerate(alpha):
                if not aj:
                    continue
                geom = Polynomial.zero(table)
                for t in range(aj):
                    geom = geom + self.a_pow[j][t] * self.b_pow[j][aj - 1 - t]
                suffix = Polynomial.const(table, 1)
                for j2 in range(j + 1, len(alpha)):
                    if alpha[j2]:
                        suffix = suffix * self.b_pow[j2][alpha[j2]]
                h_comb[j] = h_comb[j] + prefix * geom * suffix
                prefix = prefix * self.a_pow[j][aj]
        return expansion, h_comb

    def check_residual(self, q, p_q, expansion, h_comb):
        residual = self.spow[p_q] * q - expansion
        for j, h_j in enumerate(self.cert.h):
            if not h_comb[j].is_zero():
                residual = residual - h_comb[j] * h_j
        return residual.is_zero()


def certify_subsystem_membership(cert, BT, vT, telescope=None):
    """Exact witness that s^p * f_i - d^(e+1) * g_i lies in (h) + (J).

    The h-combination is reconstructed by telescoping the Taylor expansion
    of f_i, so the check is a pure polynomial identity followed by a
    membership in the relation ideal J (a term-deletion test for monomial
    J, a normal form otherwise).
    """
    ring = BT.ring
    table = ring.table
    ctx = telescope or _Telescope(cert, BT, vT)
    j_basis_global = std_basis(list(ring.j_gens), table, global_order()) \
        if ring.j_gens else ()
    for i, fpoly in enumerate(cert.f):
        expansion, h_comb = ctx.expand(fpoly, cert.p)
        if not ctx.check_residual(fpoly, cert.p, expansion, h_comb):
            raise CertificateFailed("telescoped Taylor expansion mismatch")
        slack = expansion - ctx.dpow[cert.e + 1] * cert.g[i]
        if not _in_j(slack, ring, j_basis_global):
            raise CertificateFailed(
                "subsystem relation is not expressible through (h, g) and J")
    return True


def _in_j(p, ring, j_basis_global):
    if p.is_zero():
        return True
    if not ring.j_gens:
        return False
    reduced = ring.monomial_reduce(p)
    if reduced.is_zero():
        return True
    return normal_form_against(reduced, j_basis_global, ring.table,
                               global_order()).is_zero()


def verify_certificate(cert, BT, vT, taylor_nf=True):
    """Check the displayed identities of the construction exactly."""
    ring = BT.ring
    table = ring.table
    order = ring.order
    n = len(BT.algebra_names())
    # G*H = H*G = P * identity
    GH = cert.G.matmul(cert.H)
    HG = cert.H.matmul(cert.G)
    for i in range(n):
        for j in range(n):
            want = cert.P if i == j else Polynomial.zero(table)
            if GH[i, j] != want or HG[i, j] != want:
                raise CertificateFailed("G*H = P*Id fails")
    # selected rows of (df/dY)*G = P * pivot pattern
    y_names = list(BT.algebra_names())
    jac = PolyMatrix(table, jacobian(list(cert.f), y_names))
    JG = jac.matmul(cert.G)
    for i in range(cert.r):
        for j in range(n):
            want = cert.P if j == cert.pivots[i] else Polynomial.zero(table)
            if JG[i, j] != want:
                raise CertificateFailed("(df/dY)*G != P * pivot selection")
    # d congruent to P modulo the relations
    rel_basis = std_basis(list(BT.relations) + list(ring.j_gens), table, order)
    if not normal_form_against(cert.d - cert.P, rel_basis, table,
                               order).is_zero():
        raise CertificateFailed("d is not congruent to P modulo the relations")
    # Q in (T)^2
    t_pos = table.block(TANGENT)
    for Q_i in cert.Q:
        for m in Q_i.terms:
            if sum(m[k] for k in t_pos) < 2:
                raise CertificateFailed("Q has a term of tangent degree < 2")
    if not taylor_nf:
        return True
    # Taylor identity modulo (h)
    h_basis = std_basis(list(cert.h) + list(ring.j_gens), table, order)
    t_vars = [Polynomial.var(table, nm)
              for nm in table.block_names(TANGENT)]
    Gy_rows = [[ring.monomial_reduce(eval_exact(entry, vT)) for entry in row]
               for row in cert.G.rows]
    d_e = cert.d ** cert.e
    for i, fpoly in enumerate(cert.f):
        sp = cert.s ** cert.p
        lhs = sp * fpoly - sp * eval_exact(fpoly, vT)
        lin = Polynomial.zero(table)
        for j, nm in enumerate(y_names):
            dfj = eval_exact(fpoly.derivative(nm), vT)
            Wj = Polynomial.zero(table)
            for k, tv in enumerate(t_vars):
                Wj = Wj + Gy_rows[j][k] * tv
            lin = lin + dfj * Wj
        lhs = lhs - (cert.s ** (cert.p - 1)) * d_e * lin \
            - (cert.d ** (2 * cert.e)) * cert.Q[i]
        if not normal_form_against(lhs, h_basis, table, order).is_zero():
            raise CertificateFailed("Taylor identity fails modulo (h)")
    return True


def localize_smooth(cert, BT, vT):
    """Assemble E_{s s' s''}, certify I in (h, g) and build the result."""
    ring = BT.ring
    table = ring.table
    order = ring.order
    y_names = list(BT.algebra_names())
    t_names = list(table.block_names(TANGENT))
    t_vars = [Polynomial.var(table, nm) for nm in t_names]
    n = len(y_names)

    jac_g = PolyMatrix(table, jacobian(list(cert.g), t_names))
    piv_cols = list(cert.pivots)
    s_prime = det(jac_g.submatrix(range(cert.r), piv_cols))

    # s'' from the s-cleared expansion of P at the shifted point
    jets_poly = {nm: vT.jets[nm].poly for nm in y_names}
    y_positions = table.block(ALGEBRA, SLACK)
    q_pow = max(cert.P.degree_in(y_positions), 0)
    coeffs = taylor_coefficients(cert.P, y_names, jets_poly)
    Gy = PolyMatrix(table, [[ring.monomial_reduce(eval_exact(entry, vT))
                             for entry in row] for row in cert.G.rows])
    W_rows = Gy.matvec(t_vars)
    spow = _PowerCache(cert.s)
    dpow = _PowerCache(cert.d)
    W_pow = [_PowerCache(w_j) for w_j in W_rows]
    s_second = spow[q_pow + 1]
    for alpha, c_alpha in coeffs.items():
        k = sum(alpha)
        if k == 0:
            continue
        term = c_alpha * spow[q_pow - k] * dpow[cert.e * k - 1]
        for j, aj in enumerate(alpha):
            if aj:
                term = term * W_pow[j][aj]
        s_second = s_second + term
    cert.s_prime = s_prime
    cert.s_second_num = s_second
    cert.s_second_pow = q_pow

    multiplier = cert.s * s_prime * s_second
    # localized unit checks: s' and s'' congruent to 1 modulo (d, T)
    dt_basis = std_basis([cert.d] + t_vars + list(ring.j_gens), table, order)
    for u in (cert.s, s_prime, s_second):
        if not normal_form_against(u - 1, dt_basis, table, order).is_zero():
            raise CertificateFailed(
                "a localization multiplier is not congruent to 1 mod (d, T)")

    # membership certificate: I inside (h, g) after saturation.  Relations
    # that are part of the subsystem carry the telescoped witness already;
    # the rest are rewritten modulo (h) into tangent space first, so the
    # basis computation never touches the algebra variables.  A full basis
    # of (h, g) plus its saturation is the last resort.
    subsystem = {frozenset(p.terms.items()) for p in cert.f}
    pending = [q for q in BT.relations
               if frozenset(q.terms.items()) not in subsystem]
    if pending:
        y_positions2 = table.block(ALGEBRA, SLACK)
        ctx = _Telescope(cert, BT, vT)
        g_basis = std_basis(list(cert.g) + list(ring.j_gens), table, order)
        still = []
        for q in pending:
            p_q = max(q.degree_in(y_positions2), 0)
            expansion, h_comb = ctx.expand(q, p_q)
            if not ctx.check_residual(q, p_q, expansion, h_comb):
                raise CertificateFailed("telescoped rewriting mismatch")
            if not normal_form_against(expansion, g_basis, table,
                                       order).is_zero():
                still.append(q)
        if still:
            hg = list(cert.h) + list(cert.g) + list(ring.j_gens)
            hg_basis = std_basis(hg, table, order)
            still = [q for q in still
                     if not normal_form_against(q, hg_basis, table,
                                                order).is_zero()]
        if still:
            hg = list(cert.h) + list(cert.g) + list(ring.j_gens)
            sat_gens, _ = saturate(hg, multiplier, table, order)
            sat_basis = std_basis(list(sat_gens), table, order)
            for q in still:
                if not normal_form_against(q, sat_basis, table,
                                           order).is_zero():
                    raise CertificateFailed(
                        "relation not contained in (h, g) after saturation: "
                        + format_poly(q, order))

    # standard-smooth unit minor: rows (h, g), columns (Y, pivot T).  The
    # Jacobian is block triangular (dh/dY = s*Id, dg/dY = 0), so the minor
    # equals s^n * s'; the block structure is asserted instead of expanding
    # the full determinant.
    for i, nm_i in enumerate(y_names):
        for j, nm_j in enumerate(y_names):
            want = cert.s if i == j else Polynomial.zero(table)
            if cert.h[i].derivative(nm_j) != want:
                raise CertificateFailed("dh/dY is not s * identity")
    for g_i in cert.g:
        for nm_j in y_names:
            if not g_i.derivative(nm_j).is_zero():
                raise CertificateFailed("dg/dY is not zero")

    w_name = table.fresh_name("W")
    tableW = table.extend((w_name, INVERTER))
    ringW = ring.with_table(tableW)
    w_rel = Polynomial.var(tableW, w_name) * multiplier.lift(tableW) \
        - Polynomial.const(tableW, 1)
    relations = tuple(p.lift(tableW) for p in cert.g) \
        + tuple(p.lift(tableW) for p in cert.h) + (w_rel,)
    presentation = AlgebraPresentation(
        ringW, relations,
        (cert.s.lift(tableW), s_prime.lift(tableW), s_second.lift(tableW)))
    simplified = simplify_presentation(presentation)
    structure = {nm: nm for nm in y_names}
    return DesingResult(presentation, cert, structure, simplified,
                        multiplier, [], vT, algebra=BT)


def simplify_presentation(pres):
    """Eliminate tangent/slack/inverter variables with unit linear terms.

    Display-level only: the full presentation stays authoritative.  After
    elimination the coefficients are reduced to canonical form modulo J when
    the relation basis is monomial.
    """
    ring = pres.ring
    table = ring.table
    rels = [p for p in pres.relations]
    removable = set(table.block(TANGENT, SLACK, INVERTER))
    changed = True
    while changed:
        changed = False
        for idx, rel in enumerate(rels):
            for pos in sorted(removable):
                unit_mon = tuple(1 if i == pos else 0
                                 for i in range(len(table)))
                c = rel.terms.get(unit_mon)
                if not c:
                    continue
                others = {m for m in rel.terms if m != unit_mon and m[pos]}
                if others:
                    continue
                # rel = c*v + rest, v nowhere else in rel: v := -rest/c
                from .poly import exact_div
                rest = Polynomial(table, {m: cc for m, cc in rel.terms.items()
                                          if m != unit_mon})
                value = rest * exact_div(-1, c)
                name = table.names[pos]
                new_rels = []
                for k, other in enumerate(rels):
                    if k == idx:
                        continue
                    new_rels.append(other.substitute({name: value}))
                rels = new_rels
                changed = True
                break
            if changed:
                break
    j_basis = ring.j_basis()
    monomial_j = all(len(b.terms) == 1 for b in j_basis)
    out = []
    for rel in rels:
        if monomial_j and j_basis:
            from .groebner import _Prepared, classic_nf
            keyf = ring.order.key(table)
            prepared = [_Prepared(b, keyf, i) for i, b in enumerate(j_basis)]
            rel, _ = classic_nf(rel, prepared, keyf, table, full=True)
        if not rel.is_zero():
            out.append(rel)
    return tuple(out)


def factor_morphism(result, y_high):
    """Jet-level factorization: epsilon, tangent jets and the three checks.

    ``y_high`` maps the algebra variable names to jets that must extend the
    morphism jets below their precision; it may be given over any prefix of
    the output table.  Checks: every h vanishes at (y, t), every g vanishes
    at t, and every output relation vanishes at (y, t, 1/multiplier), all
    modulo the tracked precision.  Any violation raises VerificationFailed.
    """
    cert = result.certificate
    pres = result.presentation
    ring = pres.ring
    table = ring.table
    v = result.morphism
    y_names = [nm for nm in v.jets]
    if not y_high:
        raise VerificationFailed("no verification jets supplied")

    def lift_jet(j):
        return Jet(ring, j.poly.lift(table), j.precision)

    low = {nm: lift_jet(j) for nm, j in v.jets.items()}
    hi = {}
    for nm in y_names:
        if nm not in y_high:
            raise VerificationFailed(f"missing verification jet for {nm}")
        hi[nm] = lift_jet(y_high[nm])
        if hi[nm].precision < low[nm].precision:
            raise VerificationFailed(
                f"verification jet for {nm} has precision below the bound")
        delta = ring.reduce_jet(hi[nm].poly - low[nm].poly, low[nm].precision)
        if not delta.is_zero():
            raise VerificationFailed(
                f"verification jet for {nm} does not extend the morphism jet")

    hi_prec = min(j.precision for j in hi.values())
    d = cert.d.lift(table)
    d_e1 = ring.jet(d, hi_prec) ** (cert.e + 1)
    eps = {}
    for nm in y_names:
        diff = Jet(ring, ring.reduce_jet(hi[nm].poly - low[nm].poly, hi_prec),
                   hi_prec)
        try:
            eps[nm] = jet_divide(diff, d_e1)
        except NotDivisible as exc:
            raise VerificationFailed(
                f"epsilon division failed for {nm}: {exc}") from exc

    v_low = MorphismApprox(v.precision, low)
    Hy = [[ring.jet(eval_exact(entry.lift(table), v_low), hi_prec)
           for entry in row] for row in cert.H.rows]
    eps_prec = min(e.precision for e in eps.values())
    t_jets = []
    for i in range(len(y_names)):
        acc = ring.zero_jet(eps_prec)
        for j, nm in enumerate(y_names):
            acc = acc + Hy[i][j] * eps[nm]
        t_jets.append(acc)
    t_names = list(table.block_names(TANGENT))

    prec = min(eps_prec, hi_prec)
    subs = {nm: hi[nm].poly for nm in y_names}
    for tn, tj in zip(t_names, t_jets):
        subs[tn] = tj.poly
    checks = []

    def expect_zero(label, poly):
        val = ring.reduce_jet(poly.substitute(subs), prec)
        ok = val.is_zero()
        checks.append((label, ok))
        if not ok:
            raise VerificationFailed(f"{label} does not vanish at jet level")

    for i, h_i in enumerate(cert.h):
        expect_zero(f"h[{i}]", h_i.lift(table))
    for i, g_i in enumerate(cert.g):
        expect_zero(f"g[{i}]", g_i.lift(table))
    # evaluate the localization multiplier factor by factor; the product of
    # the evaluated jets is far cheaper than evaluating the product
    mult_val = ring.jet(1, prec)
    for factor in (cert.s, cert.s_prime, cert.s_second_num):
        val = ring.reduce_jet(factor.lift(table).substitute(subs), prec)
        mult_val = mult_val * Jet(ring, val, prec)
    w_inv = jet_invert(mult_val)
    for wn in table.block_names(INVERTER):
        subs[wn] = w_inv.poly
    w_names = set(table.block_names(INVERTER))
    for k, rel in enumerate(pres.relations):
        if any(rel.involves(table.block(INVERTER)) for _ in (0,)) and w_names:
            # W * multiplier - 1 at the point: use the factored value
            val = mult_val * w_inv - 1
            ok = val.is_zero()
            checks.append((f"output[{k}]", ok))
            if not ok:
                raise VerificationFailed(
                    "the inverter relation does not vanish at jet level")
            continue
        expect_zero(f"output[{k}]", rel)
    return FactorReport(True, prec, eps, dict(zip(t_names, t_jets)), checks)


_TRACE_LABELS = {
    1: "minimal_primes", 2: "coefficient_base", 3: "elkik_ideal",
    4: "symmetric_algebra", 5: "subsystem_f", 6: "jacobian_completion",
    7: "colon_witness_R", 8: "p_contraction", 9: "variable_adjunction",
    10: "active_element", 11: "annihilator_exponent", 12: "precision_bound",
    13: "taylor_constant_b", 14: "adjugate_G", 15: "unit_s_and_h",
    16: "taylor_remainder_g", 17: "tangent_minor_s1", 18: "unit_s2",
    19: "output",
}


def desingularize(problem, verify_certificates=True):
    """Run the nineteen-stage pipeline and return the certified result."""
    trace = []
    t_start = time.monotonic()

    def record(line, values, note=""):
        trace.append(TraceRecord(line, _TRACE_LABELS[line],
                                 {k: str(val) for k, val in values.items()},
                                 note, time.monotonic() - t_start))

    ring = problem.ring
    order = ring.order
    fmt = lambda p: format_poly(p, mixed_order(p.table))

    if ring.primes is None:
        primes = minimal_primes(list(ring.j_gens), ring.table, order)
        ring = LocalRingSpec(ring.table, ring.j_gens, primes)
    record(1, {f"P_{i + 1}": "(" + ", ".join(fmt(g) for g in p) + ")"
               for i, p in enumerate(ring.primes)})

    record(2, {"D": "A"}, note="trivial coefficient extension")

    B = AlgebraPresentation(ring, tuple(problem.relations))
    v = problem.morphism.lift(ring)
    _validate_morphism(B, v)

    elkik = elkik_ideal(B, problem.max_subset)
    record(3, {"H_gens": len(elkik.gens),
               "H_cap_A": "(" + ", ".join(fmt(g) for g in elkik.h_cap_a) + ")"})

    dim_h = krull_dim(list(elkik.h_cap_a) + list(ring.j_gens), ring.table,
                      order, ring.table.block(BASE))
    if dim_h == 1:
        B, v = sym_algebra_reduction(B, v)
        ring = B.ring
        elkik = elkik_ideal(B, problem.max_subset)
        record(4, {"triggered": True, "new_vars": len(B.algebra_names())},
               note="conormal symmetric algebra with slack variables")
    else:
        record(4, {"triggered": False}, note="is not true")

    contrib, R0 = find_f_R(B, elkik, v, seed=problem.seed)
    f_polys = tuple(B.relations[i] for i in contrib.subset)
    record(5, {"f": ", ".join(fmt(p) for p in f_polys)})

    H0 = complete_H(B, list(f_polys), v, seed=problem.seed)
    record(6, {"H": str(H0), "det": fmt(det(H0))})
    record(7, {"R": fmt(R0)})

    red = mm_primary_reduction(B, list(f_polys), H0, R0, v,
                               seed=problem.seed)
    record(8, {"P": fmt(red.P),
               "P_cap_A": "(" + ", ".join(fmt(g) for g in red.p_cap_a) + ")"})
    if red.adjoined:
        record(9, {"triggered": True, "f_new": fmt(red.f[-1])},
               note="experimental: " + red.note)
    else:
        record(9, {"triggered": False}, note="is not true")
    record(10, {"d": fmt(red.d)},
           note="P := d" if not red.adjoined else "d := d'^2")
    B, v = red.B, red.v
    ring = B.ring

    e = compute_e(red.d, ring)
    record(11, {"e": e})

    if not check_precision_bound(v.precision, red.d, e, ring):
        record(12, {"ok": False}, note=BoundTooSmall.MESSAGE)
        raise BoundTooSmall()
    record(12, {"ok": True}, note="is not true")

    cert, BT, vT = build_hg(B, red, e, verify=verify_certificates)
    record(13, {"b": ", ".join(fmt(bi) for bi in cert.b)})
    record(14, {"Gprime": str(cert.Gprime)})
    record(15, {"s": fmt(cert.s),
                "h": "; ".join(fmt(hi) for hi in cert.h)})
    record(16, {"p": cert.p, "g": "; ".join(fmt(gi) for gi in cert.g)})

    result = localize_smooth(cert, BT, vT)
    record(17, {"s_prime": fmt(cert.s_prime)})
    record(18, {"s_second": fmt(cert.s_second_num),
                "s_power": cert.s_second_pow})
    record(19, {"relations": "; ".join(fmt(p) for p in result.simplified),
                "multiplier": fmt(result.multiplier)})
    result.trace = trace

    if vT.verify:
        result.jet_map = factor_morphism(result, vT.verify)
    return result


def _validate_morphism(B, v):
    """I(y') must vanish modulo (x)^N (+ J): the data must be a morphism."""
    ring = B.ring
    for rel in B.relations:
        val = eval_at_jets(rel, v, ring)
        if not val.is_zero():
            raise NeronError(
                "the jets do not define a morphism: a relation does not "
                "vanish at jet precision")

