"""Groebner bases for global orders, standard bases for local and mixed ones.

The division procedure switches on the order: ordinary multivariate long
division for global orders, Mora's normal form with ecart selection for
orders in which some variables rank below 1 (those realize computations in
the localization).  Divisions can carry witnesses, exact identities

    unit * dividend = sum(quotient_i * divisor_i) + remainder

where the unit is 1 for global orders and has lead term 1 (hence is
invertible in the localization) otherwise.

Basis computation is Buchberger's loop with the normal pair-selection
strategy and Gebauer-Moeller pruning.  Output bases are minimal, monic and
sorted, and for global orders fully tail-reduced, so identical inputs give
byte-identical bases.
"""

from __future__ import annotations

import heapq
import weakref
from dataclasses import dataclass
from fractions import Fraction

from .errors import NeronError, NotInIdeal
from .poly import (Polynomial, exact_div, mon_deg, mon_div, mon_divides,
                   mon_lcm, mon_mul)

_ONE = Fraction(1)
_SNAPSHOT_BASE = 10 ** 9


class _Prepared:
    """Reducer with cached lead data for one order.

    ``row`` is either None (the element stands for itself in position
    ``idx`` of the tracking space) or a sparse dict {j: Polynomial} with
    poly = sum(row[j] * space[j]) exactly.
    """

    __slots__ = ("poly", "lm", "lc", "ecart", "idx", "row")

    def __init__(self, poly, keyf, idx, row=None):
        self.poly = poly
        self.lm, self.lc = poly.lead(keyf)
        self.ecart = poly.total_degree() - mon_deg(self.lm)
        self.idx = idx
        self.row = row


class _RK:
    """Reversed-order heap entry so heapq acts as a max-heap on keys."""

    __slots__ = ("k", "m")

    def __init__(self, k, m):
        self.k = k
        self.m = m

    def __lt__(self, other):
        return self.k > other.k


def _sub_scaled(h, g_terms, mon, coef, heap=None, keyf=None, degs=None):
    """In-place h -= coef * x^mon * g; new monomials are pushed on the heap
    and the optional degree multiset is kept in sync."""
    shift = any(mon)
    for m, c in g_terms.items():
        key = tuple(x + y for x, y in zip(m, mon)) if shift else m
        acc = h.get(key)
        if acc is None:
            h[key] = -coef * c
            if heap is not None:
                heapq.heappush(heap, _RK(keyf(key), key))
            if degs is not None:
                d = sum(key)
                degs[d] = degs.get(d, 0) + 1
        else:
            acc = acc - coef * c
            if acc:
                h[key] = acc
            else:
                del h[key]
                if degs is not None:
                    d = sum(key)
                    degs[d] -= 1
                    if not degs[d]:
                        del degs[d]


def _reducer_row(table, g):
    if g.row is not None:
        return g.row
    return {g.idx: Polynomial.const(table, 1)}


def _row_update(table, row, g_row, mon, coef):
    """In-place row -= coef * x^mon * g_row for sparse polynomial rows."""
    shift = Polynomial(table, {mon: coef})
    for j, q in g_row.items():
        cur = row.get(j)
        upd = (cur - shift * q) if cur is not None else -(shift * q)
        if upd.is_zero():
            row.pop(j, None)
        else:
            row[j] = upd


def classic_nf(p, reducers, keyf, table, full=True, row=None):
    """Long division; returns (remainder, row).

    Termination is guaranteed for global orders, and for any order whenever
    the reducer set is zero dimensional below a degree cut (jet reduction).
    """
    h = dict(p.terms)
    heap = [_RK(keyf(m), m) for m in h]
    heapq.heapify(heap)
    rem = {}
    while h:
        while heap and heap[0].m not in h:
            heapq.heappop(heap)
        if not heap:
            break
        m = heap[0].m
        c = h[m]
        hit = None
        for g in reducers:
            if mon_divides(g.lm, m):
                hit = g
                break
        if hit is None:
            rem[m] = c
            del h[m]
            heapq.heappop(heap)
            if not full:
                rem.update(h)
                h = {}
            continue
        t = mon_div(m, hit.lm)
        coef = exact_div(c, hit.lc)
        _sub_scaled(h, hit.poly.terms, t, coef, heap, keyf)
        if row is not None:
            _row_update(table, row, _reducer_row(table, hit), t, coef)
    return Polynomial(table, rem), row


def mora_nf(p, reducers, keyf, table, row=None):
    """Mora's weak normal form for arbitrary (in particular local) orders.

    Head reduction with ecart selection; reducers found en route with larger
    ecart than the current element trigger a snapshot that later reductions
    may reuse.  Returns (remainder, row).  The remainder is zero iff p lies
    in the ideal of the localization the order realizes.
    """
    local = list(reducers)
    h = dict(p.terms)
    heap = [_RK(keyf(m), m) for m in h]
    heapq.heapify(heap)
    degs = {}
    for m in h:
        d = mon_deg(m)
        degs[d] = degs.get(d, 0) + 1
    n_snap = 0
    while h:
        while heap and heap[0].m not in h:
            heapq.heappop(heap)
        if not heap:
            break
        m = heap[0].m
        c = h[m]
        cands = [g for g in local if mon_divides(g.lm, m)]
        if not cands:
            break
        h_ecart = max(degs) - mon_deg(m)
        g = min(cands, key=lambda e: (e.ecart, e.idx))
        if g.ecart > h_ecart:
            snap = _Prepared(Polynomial(table, dict(h)), keyf,
                             _SNAPSHOT_BASE + n_snap,
                             dict(row) if row is not None else None)
            n_snap += 1
            local.append(snap)
        t = mon_div(m, g.lm)
        coef = exact_div(c, g.lc)
        _sub_scaled(h, g.poly.terms, t, coef, heap, keyf, degs)
        if row is not None:
            _row_update(table, row, _reducer_row(table, g), t, coef)
    return Polynomial(table, h), row


def spoly(f, g, keyf, table):
    lmf, lcf = f.lead(keyf)
    lmg, lcg = g.lead(keyf)
    lcm = mon_lcm(lmf, lmg)
    a = f.mul_term(mon_div(lcm, lmf), exact_div(1, lcf))
    b = g.mul_term(mon_div(lcm, lmg), exact_div(1, lcg))
    return a - b


def _spoly_row(table, gi, gj, keyf):
    lcm = mon_lcm(gi.lm, gj.lm)
    row = {}
    for g, sign in ((gi, 1), (gj, -1)):
        shift = Polynomial(table, {mon_div(lcm, g.lm): exact_div(sign, g.lc)})
        for j, q in _reducer_row(table, g).items():
            cur = row.get(j)
            upd = (cur + shift * q) if cur is not None else shift * q
            if upd.is_zero():
                row.pop(j, None)
            else:
                row[j] = upd
    return row


def _update_pairs(G, P, new_idx, lms, glob):
    """Gebauer-Moeller pair update after appending element new_idx."""
    lmf = lms[new_idx]
    P = {pair for pair in P
         if (not mon_divides(lmf, mon_lcm(lms[pair[0]], lms[pair[1]]))
             or mon_lcm(lms[pair[0]], lms[pair[1]]) == mon_lcm(lms[pair[0]], lmf)
             or mon_lcm(lms[pair[0]], lms[pair[1]]) == mon_lcm(lms[pair[1]], lmf))}
    lcm_groups = {}
    for i in range(new_idx):
        lcm_groups.setdefault(mon_lcm(lms[i], lmf), []).append(i)
    minimal = []
    for L in sorted(lcm_groups, key=lambda m: (mon_deg(m), m)):
        if all(not mon_divides(L2, L) for L2 in minimal):
            minimal.append(L)
    for L in minimal:
        if glob and any(mon_lcm(lms[i], lmf) == mon_mul(lms[i], lmf)
                        for i in lcm_groups[L]):
            continue
        P.add((min(lcm_groups[L]), new_idx))
    return P


def std_basis(gens, table, order, *, track=None, stop_on_unit=False):
    """Minimal monic standard basis of the ideal generated by ``gens``.

    track=None     -> basis tuple
    track="rows"   -> (basis, rows): basis[k] = sum(rows[k][j] * gens[j])
    track="syz"    -> (basis, rows, syzygies): syzygies are vectors v with
                      sum(v[j] * gens[j]) = 0 exactly; with tracking enabled
                      all pairs are processed (no pruning) so the collected
                      vectors generate the first syzygy module.
    """
    keyf = order.key(table)
    glob = order.is_global(table)
    use_criteria = track != "syz"

    G = []
    lms = []
    P = set()
    syzygies = []

    def reduce_poly(p, row):
        if glob:
            return classic_nf(p, G, keyf, table, full=False, row=row)
        return mora_nf(p, G, keyf, table, row=row)

    def add_element(p, row):
        nonlocal P
        content = p.content()
        if content != 1:
            inv = exact_div(1, content)
            p = p * inv
            if row is not None:
                row = {j: q * inv for j, q in row.items()}
        prepared = _Prepared(p, keyf, len(G), row)
        G.append(prepared)
        lms.append(prepared.lm)
        if use_criteria:
            P = _update_pairs(G, P, len(G) - 1, lms, glob)
        else:
            P |= {(i, len(G) - 1) for i in range(len(G) - 1)}

    for j, g in enumerate(gens):
        if g.is_zero():
            continue
        row = {j: Polynomial.const(table, 1)} if track else None
        r, row = reduce_poly(g, row)
        if r.is_zero():
            if track == "syz" and row and any(not q.is_zero()
                                              for q in row.values()):
                syzygies.append(dict(row))
            continue
        add_element(r, row)
        if stop_on_unit and r.is_constant():
            return _finish(G, keyf, glob, table, track, gens, syzygies)

    def pair_sort_key(pair):
        i, j = pair
        return (keyf(mon_lcm(lms[i], lms[j])), pair)

    while P:
        pair = min(P, key=pair_sort_key)
        P.remove(pair)
        i, j = pair
        s = spoly(G[i].poly, G[j].poly, keyf, table)
        row = _spoly_row(table, G[i], G[j], keyf) if track else None
        if s.is_zero():
            if track == "syz" and row:
                syzygies.append(row)
            continue
        r, row = reduce_poly(s, row)
        if r.is_zero():
            if track == "syz" and row and any(not q.is_zero()
                                              for q in row.values()):
                syzygies.append(row)
            continue
        add_element(r, row)
        if stop_on_unit and r.is_constant():
            break

    return _finish(G, keyf, glob, table, track, gens, syzygies)


def _finish(G, keyf, glob, table, track, gens, syzygies):
    basis = _post_process(G, keyf, glob, table, track)
    if track is None:
        return tuple(b.poly for b in basis)
    rows = tuple(_row_tuple(b.row, len(gens), table) for b in basis)
    if track == "rows":
        return tuple(b.poly for b in basis), rows
    syz_vecs = tuple(_row_tuple(v, len(gens), table) for v in syzygies)
    return tuple(b.poly for b in basis), rows, syz_vecs


def _row_tuple(row, ngens, table):
    if row is None:
        return None
    zero = Polynomial.zero(table)
    return tuple(row.get(j, zero) for j in range(ngens))


def _post_process(G, keyf, glob, table, track):
    live = sorted((g for g in G if not g.poly.is_zero()),
                  key=lambda g: keyf(g.lm))
    minimal = []
    for g in live:
        if all(not mon_divides(h.lm, g.lm) for h in minimal):
            minimal.append(g)
    if glob:
        reduced = []
        for g in minimal:
            others = [h for h in minimal if h is not g]
            row = dict(g.row) if (track and g.row is not None) else None
            r, row = classic_nf(g.poly, others, keyf, table, full=True,
                                row=row)
            reduced.append(_Prepared(r, keyf, g.idx, row))
        minimal = reduced
    out = []
    for g in minimal:
        lc = g.poly.lead(keyf)[1]
        inv = exact_div(1, lc)
        p = g.poly * inv
        row = None
        if track and g.row is not None:
            row = {j: q * inv for j, q in g.row.items()}
        out.append(_Prepared(p, keyf, g.idx, row))
    out.sort(key=lambda g: keyf(g.lm), reverse=True)
    return out


_HANDLE_REGISTRY = weakref.WeakSet()


def iter_handles():
    """Live IdealHandles, for auditing every cached basis."""
    return list(_HANDLE_REGISTRY)


class IdealHandle:
    """Generator list with cached canonical bases per term order.

    Handles are immutable after construction; each cache slot is filled at
    most once, so sharing across threads is safe for reading.
    """

    def __init__(self, table, gens):
        self.table = table
        self.gens = tuple(gens)
        self._bases = {}
        _HANDLE_REGISTRY.add(self)

    def basis(self, order):
        cached = self._bases.get(order)
        if cached is None:
            cached = std_basis(self.gens, self.table, order)
            self._bases[order] = cached
        return cached

    def cached_bases(self):
        return dict(self._bases)

    def nf(self, p, order):
        return normal_form_against(p, self.basis(order), self.table, order)

    def contains(self, p, order):
        return self.nf(p, order).is_zero()

    def __repr__(self):
        return f"IdealHandle({list(self.gens)!r})"


def normal_form_against(p, basis, table, order):
    """Normal form of p versus a precomputed basis (zero iff membership)."""
    if p.is_zero() or not basis:
        return p
    keyf = order.key(table)
    prepared = [_Prepared(b, keyf, i) for i, b in enumerate(basis)]
    if order.is_global(table):
        r, _ = classic_nf(p, prepared, keyf, table, full=True)
        return r
    r, _ = mora_nf(p, prepared, keyf, table)
    return r


def normal_form(p, handle, order):
    """NF of p against the ideal; zero iff p lies in the ideal of the ring
    the order implies (polynomial ring for global orders, localization for
    local and mixed ones)."""
    return handle.nf(p, order)


@dataclass
class DivisionWitness:
    """Exact division record: unit*dividend = sum(q*d) + remainder."""

    dividend: Polynomial
    divisors: tuple
    unit: Polynomial
    quotients: tuple
    remainder: Polynomial

    def check(self):
        acc = self.dividend * self.unit
        for q, d in zip(self.quotients, self.divisors):
            acc = acc - q * d
        return acc == self.remainder


def _witness_division(p, divisors, table, order, prepared):
    """Divide p by prepared reducers, tracking p itself as an extra slot."""
    keyf = order.key(table)
    extra = len(divisors)
    row = {extra: Polynomial.const(table, 1)}
    if order.is_global(table):
        r, row = classic_nf(p, prepared, keyf, table, full=True, row=row)
    else:
        r, row = mora_nf(p, prepared, keyf, table, row=row)
    zero = Polynomial.zero(table)
    unit = row.get(extra, zero)
    quotients = tuple(-row.get(j, zero) for j in range(extra))
    return unit, quotients, r


def divide_with_witness(p, divisors, table, order):
    """Divide by a raw list (no basis completion); remainder may be nonzero."""
    keyf = order.key(table)
    prepared = [_Prepared(d, keyf, i) for i, d in enumerate(divisors)
                if not d.is_zero()]
    unit, quotients, r = _witness_division(p, divisors, table, order, prepared)
    return DivisionWitness(p, tuple(divisors), unit, quotients, r)


def lift_division(p, gens, table, order):
    """Express p exactly in terms of ``gens`` (zero remainder) or raise.

    The generators are completed to a basis with representation tracking and
    the witnesses are composed, so the resulting identity
    unit*p = sum(q*gens) holds exactly as polynomials.
    """
    live = [g for g in gens if not g.is_zero()]
    if p.is_zero():
        zero = Polynomial.zero(p.table)
        return DivisionWitness(p, tuple(gens), Polynomial.const(p.table, 1),
                               tuple(zero for _ in gens), zero)
    if not live:
        raise NotInIdeal("dividend is not in the zero ideal")
    basis, rows = std_basis(gens, table, order, track="rows")
    keyf = order.key(table)
    prepared = [_Prepared(b, keyf, i) for i, b in enumerate(basis)]
    unit, q_basis, r = _witness_division(p, basis, table, order, prepared)
    if not r.is_zero():
        raise NotInIdeal("dividend is not in the ideal at this order")
    zero = Polynomial.zero(table)
    q_gens = [zero] * len(gens)
    for qb, brow in zip(q_basis, rows):
        if qb.is_zero():
            continue
        for j, coeff in enumerate(brow):
            if coeff is not None and not coeff.is_zero():
                q_gens[j] = q_gens[j] + qb * coeff
    return DivisionWitness(p, tuple(gens), unit, tuple(q_gens),
                           Polynomial.zero(table))


def buchberger_criterion(basis, table, order):
    """True when every S-polynomial of the basis reduces to zero."""
    if len(basis) < 2:
        return True
    keyf = order.key(table)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            s = spoly(basis[i], basis[j], keyf, table)
            if not normal_form_against(s, basis, table, order).is_zero():
                return False
    return True
