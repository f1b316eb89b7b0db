"""Buchberger's algorithm with cofactor tracking.

Works over a field (reduced bases, monic) and over Z (strong bases built from
S-polynomials and gcd-polynomials, Euclidean remainder reduction). Every basis
element carries its expression in terms of the input generators.
"""

from __future__ import annotations

from math import gcd
from typing import Callable, Sequence

from .errors import ResourceExhausted, UnsupportedRing
from .ring import IntegerRing, Poly, PolynomialRing

DEGREE_CAP = 40
BASIS_CAP = 2000


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_exp(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _addmul(K, p: dict, c, shift, q: dict):
    """p += c * X^shift * q, in place."""
    for e, x in q.items():
        ne = tuple(i + j for i, j in zip(e, shift)) if shift else e
        v = K.mul(c, x)
        if ne in p:
            v = K.add(p[ne], v)
            if K.is_zero(v):
                del p[ne]
            else:
                p[ne] = v
        elif not K.is_zero(v):
            p[ne] = v


def _cof_addmul(K, cof: dict, c, shift, other: dict):
    for i, q in other.items():
        tgt = cof.setdefault(i, {})
        _addmul(K, tgt, c, shift, q)
        if not tgt:
            del cof[i]


def _cof_scale(K, cof: dict, c):
    return {i: {e: K.mul(x, c) for e, x in q.items()} for i, q in cof.items()}


class _Elem:
    __slots__ = ("poly", "cof", "lm", "lc", "sugar")

    def __init__(self, poly, cof, key, sugar):
        self.poly = poly
        self.cof = cof
        self.lm = max(poly, key=key)
        self.lc = poly[self.lm]
        self.sugar = sugar


class GroebnerBasis:
    """A Gröbner basis of the ideal generated by ``inputs``.

    ``polys[k] == sum(cofactors[k][i] * inputs[i])`` holds exactly.
    """

    def __init__(self, ring: PolynomialRing, inputs, polys, cofactors, key):
        self.ring = ring
        self.inputs = list(inputs)
        self.polys = polys
        self.cofactors = cofactors
        self.key = key
        self._elems = [(max(p.terms, key=key), p) for p in polys]

    def __len__(self):
        return len(self.polys)

    def is_unit_ideal(self) -> bool:
        return any(p.is_constant() and self.ring.K.is_unit(next(iter(p.terms.values()))) for p in self.polys)

    def reduce(self, f: Poly):
        """Full reduction. Returns (remainder, cofactors over inputs) with f = sum cof*input + remainder."""
        R = self.ring
        K = R.K
        field = K.is_field
        key = self.key
        p = dict(f.terms)
        r = {}
        quot = [dict() for _ in self.polys]
        leads = [(lm, g.terms[lm]) for lm, g in self._elems]
        while p:
            lm = max(p, key=key)
            while lm in p:
                lc = p[lm]
                done = True
                for k, (glm, glc) in enumerate(leads):
                    if not _divides(glm, lm):
                        continue
                    if field:
                        c = K.mul(lc, K.inv(glc))
                    else:
                        c = lc // glc
                        if c == 0:
                            continue
                    shift = _sub_exp(lm, glm)
                    _addmul(K, p, K.neg(c), shift, self.polys[k].terms)
                    _addmul(K, quot[k], c, (), {shift: K.one()})
                    done = False
                    break
                if done:
                    break
            if lm in p:
                r[lm] = p.pop(lm)
        n = len(self.inputs)
        cof = [R.zero() for _ in range(n)]
        for k, q in enumerate(quot):
            if not q:
                continue
            qp = Poly(R, q)
            for i in range(n):
                c = self.cofactors[k][i]
                if c.terms:
                    cof[i] = R.add(cof[i], R.mul(qp, c))
        return Poly(R, r), cof

    def member(self, f: Poly):
        """Cofactors expressing f over the inputs, or None."""
        rem, cof = self.reduce(f)
        if rem.terms:
            return None
        return cof


def groebner_basis(
    ring: PolynomialRing,
    gens: Sequence[Poly],
    key: Callable | None = None,
    degree_cap: int | None = None,
) -> GroebnerBasis:
    """Reduced (field) or strong (Z) Gröbner basis with cofactors."""
    if degree_cap is None:
        degree_cap = DEGREE_CAP
    K = ring.K
    if not (K.is_field or isinstance(K, IntegerRing)):
        raise UnsupportedRing(f"Gröbner bases need field or integer coefficients, not {K}")
    key = key or ring.key
    field = K.is_field
    n = len(gens)
    basis: list[_Elem] = []
    pairs: list[tuple] = []

    def normalize(poly, cof):
        lm = max(poly, key=key)
        lc = poly[lm]
        if field:
            inv = K.inv(lc)
            if not K.is_one(inv):
                poly = {e: K.mul(x, inv) for e, x in poly.items()}
                cof = _cof_scale(K, cof, inv)
        elif lc < 0:
            poly = {e: -x for e, x in poly.items()}
            cof = _cof_scale(K, cof, -1)
        return poly, cof

    def reduce(poly, cof):
        p = dict(poly)
        c_ = {i: dict(q) for i, q in cof.items()}
        r = {}
        while p:
            lm = max(p, key=key)
            while lm in p:
                lc = p[lm]
                progressed = False
                for g in basis:
                    if not _divides(g.lm, lm):
                        continue
                    if field:
                        c = K.mul(lc, K.inv(g.lc))
                    else:
                        c = lc // g.lc
                        if c == 0:
                            continue
                    shift = _sub_exp(lm, g.lm)
                    _addmul(K, p, K.neg(c), shift, g.poly)
                    _cof_addmul(K, c_, K.neg(c), shift, g.cof)
                    progressed = True
                    break
                if not progressed:
                    break
            if lm in p:
                r[lm] = p.pop(lm)
        return r, c_

    def add(poly, cof, sugar):
        poly, cof = normalize(poly, cof)
        deg = max(sum(e) for e in poly)
        if deg > degree_cap:
            raise ResourceExhausted(
                f"Gröbner basis degree {deg} exceeds cap {degree_cap}", {"degree_cap": degree_cap}
            )
        if len(basis) >= BASIS_CAP:
            raise ResourceExhausted("Gröbner basis size cap reached", {"basis_cap": BASIS_CAP})
        new = _Elem(poly, cof, key, sugar)
        idx = len(basis)
        basis.append(new)
        for j in range(idx):
            pairs.append((j, idx))

    for i, g in enumerate(gens):
        if g.terms:
            add(dict(g.terms), {i: {ring._zero_exp: K.one()}}, g.degree())

    def pair_sugar(pr):
        a, b = basis[pr[0]], basis[pr[1]]
        L = _lcm(a.lm, b.lm)
        s = max(a.sugar + sum(L) - sum(a.lm), b.sugar + sum(L) - sum(b.lm))
        return (s, key(L))

    while pairs:
        pairs.sort(key=pair_sugar)
        i, j = pairs.pop(0)
        a, b = basis[i], basis[j]
        L = _lcm(a.lm, b.lm)
        sugar = pair_sugar((i, j))[0]
        coprime = all(x == 0 or y == 0 for x, y in zip(a.lm, b.lm))
        if field:
            if coprime:
                continue
            if _chain_skip(basis, pairs, i, j, L):
                continue
            sa, sb = _sub_exp(L, a.lm), _sub_exp(L, b.lm)
            sp = {}
            scof: dict = {}
            _addmul(K, sp, K.one(), sa, a.poly)
            _addmul(K, sp, K.neg(K.one()), sb, b.poly)
            _cof_addmul(K, scof, K.one(), sa, a.cof)
            _cof_addmul(K, scof, K.neg(K.one()), sb, b.cof)
            r, rc = reduce(sp, scof)
            if r:
                add(r, rc, sugar)
            continue
        # integer coefficients: S-polynomial and gcd-polynomial
        sa, sb = _sub_exp(L, a.lm), _sub_exp(L, b.lm)
        la, lb = a.lc, b.lc
        m = la * lb // gcd(la, lb)
        if not (coprime and gcd(la, lb) == 1):
            sp = {}
            scof = {}
            _addmul(K, sp, m // la, sa, a.poly)
            _addmul(K, sp, -(m // lb), sb, b.poly)
            _cof_addmul(K, scof, m // la, sa, a.cof)
            _cof_addmul(K, scof, -(m // lb), sb, b.cof)
            r, rc = reduce(sp, scof)
            if r:
                add(r, rc, sugar)
        if la % lb and lb % la:
            d, u, v = _xgcd(la, lb)
            gp = {}
            gcof = {}
            _addmul(K, gp, u, sa, a.poly)
            _addmul(K, gp, v, sb, b.poly)
            _cof_addmul(K, gcof, u, sa, a.cof)
            _cof_addmul(K, gcof, v, sb, b.cof)
            r, rc = reduce(gp, gcof)
            if r:
                add(r, rc, sugar)

    # minimalize and tail-reduce
    keep = []
    for idx, g in enumerate(basis):
        redundant = False
        for jdx, h in enumerate(basis):
            if jdx == idx or not _divides(h.lm, g.lm):
                continue
            if not field and g.lc % h.lc:
                continue
            if h.lm == g.lm and (field or h.lc == g.lc) and jdx > idx:
                continue
            redundant = True
            break
        if not redundant:
            keep.append(g)
    basis[:] = keep
    final = []
    for idx in range(len(basis)):
        g = basis[idx]
        others = basis[:idx] + basis[idx + 1 :]
        saved = list(basis)
        basis[:] = others
        tail = {e: x for e, x in g.poly.items() if e != g.lm}
        r, rc = reduce(tail, {})
        basis[:] = saved
        poly = dict(r)
        poly[g.lm] = g.lc
        cof = {i: dict(q) for i, q in g.cof.items()}
        # tail reduction: tail = r + sum(...), and rc expresses (r - tail) over inputs
        for i, q in rc.items():
            tgt = cof.setdefault(i, {})
            _addmul(K, tgt, K.one(), (), q)
            if not tgt:
                del cof[i]
        final.append((poly, cof))
    final.sort(key=lambda pc: key(max(pc[0], key=key)))
    polys = [Poly(ring, p) for p, _ in final]
    cofs = []
    for _, c in final:
        cofs.append([Poly(ring, dict(c.get(i, {}))) for i in range(n)])
    return GroebnerBasis(ring, gens, polys, cofs, key)


def _chain_skip(basis, pairs, i, j, L):
    """Buchberger's chain criterion: some k has lm_k | L and (i,k), (j,k) already treated."""
    pending = set(pairs)
    for k, g in enumerate(basis):
        if k in (i, j):
            continue
        if _divides(g.lm, L):
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                return True
    return False


def _xgcd(a, b):
    """(g, u, v) with u*a + v*b = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def xgcd_list(values: Sequence[int]):
    """gcd of a list with Bezout coefficients."""
    g = 0
    coeffs = [0] * len(values)
    for i, v in enumerate(values):
        d, u, w = _xgcd(g, v)
        coeffs = [c * u for c in coeffs]
        coeffs[i] = w
        g = d
    return g, coeffs
