"""Collapse of idealistic chains: decision, certificates, pseudo-regular sequences,
dimension queries and local-global gluing.

The decision keeps an ideal A_k and never forms radicals explicitly:

    A_0 = <J_0>,   A_{k+1} = (A_k : g_k^oo) + <J_{k+1}>,   g_k = prod(U_k)

and the chain collapses iff g_l lies in the radical of A_l. Since
rad(rad(A) : u^oo) = rad(A : u^oo) this matches the radical-based definition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, gcd
from typing import Sequence

from .chain import CollapseCertificate, IdealisticChain, IdealisticPrime, eval_nested
from .errors import (
    BoundTooLow,
    InternalMismatch,
    LeadingNotMonic,
    MalformedDecomposition,
    MalformedFraction,
    NotACollapse,
    NotADependence,
    NotComaximal,
    NotLocalCollapse,
    PreconditionError,
    ResourceExhausted,
)
from .ideals import IdealOracle, oracle_for
from .ring import IntegerRing, ModularRing, Poly, PolynomialRing, Ring, lex_key

EXPONENT_CAP = 6
SEARCH_BUDGET = 10**6
POLY_SEARCH_BUDGET = 300
COFACTOR_BOX = 3


# -- decision ------------------------------------------------------------------


@dataclass
class _Level:
    gens: list
    tags: list  # ("J", index into J_k) or ("S", SaturationGen)


def _saturation_run(chain: IdealisticChain, oracle: IdealOracle) -> list[_Level]:
    R = chain.ring
    p0 = chain.primes[0]
    levels = [_Level(list(p0.J), [("J", i) for i in range(len(p0.J))])]
    for k in range(chain.length):
        cur = levels[-1]
        g = R.prod(chain.primes[k].U)
        sats = oracle.saturate(cur.gens, g)
        for sg in sats:
            if not R.eq(R.mul(R.pow(g, sg.exponent), sg.element), R.dot(sg.cofactors, cur.gens)):
                raise InternalMismatch("saturation witness failed to re-evaluate")
        nxt = chain.primes[k + 1]
        levels.append(
            _Level(
                [s.element for s in sats] + list(nxt.J),
                [("S", s) for s in sats] + [("J", i) for i in range(len(nxt.J))],
            )
        )
    return levels


def chain_collapses(C: IdealisticChain, oracle: IdealOracle | None = None) -> bool:
    """True iff the idealistic chain collapses."""
    oracle = oracle or oracle_for(C.ring)
    levels = _saturation_run(C, oracle)
    g = C.ring.prod(C.primes[-1].U)
    return oracle.in_radical(g, levels[-1].gens)


def _back_substitute(C: IdealisticChain, oracle: IdealOracle) -> CollapseCertificate | None:
    R = C.ring
    levels = _saturation_run(C, oracle)
    last = C.length
    res = oracle.radical_power(R.prod(C.primes[last].U), levels[-1].gens)
    if res is None:
        return None
    n, w = res
    exps = [0] * (last + 1)
    cofs: list = [None] * (last + 1)
    exps[last] = n
    for k in range(last, -1, -1):
        lev = levels[k]
        jcof = [R.zero()] * len(C.primes[k].J)
        spart = []
        for wi, tag in zip(w, lev.tags):
            if tag[0] == "J":
                jcof[tag[1]] = R.add(jcof[tag[1]], wi)
            elif not R.is_zero(wi):
                spart.append((wi, tag[1]))
        cofs[k] = [R.neg(c) for c in jcof]
        if k == 0:
            break
        E = max((sg.exponent for _, sg in spart), default=0)
        g = R.prod(C.primes[k - 1].U)
        prev = levels[k - 1]
        nw = [R.zero()] * len(prev.gens)
        for wi, sg in spart:
            scale = R.mul(wi, R.pow(g, E - sg.exponent))
            nw = [R.add(a, R.mul(scale, c)) for a, c in zip(nw, sg.cofactors)]
        exps[k - 1] = E
        w = nw
    cert = CollapseCertificate([([e] * len(p.U), c) for e, p, c in zip(exps, C.primes, cofs)])
    if not R.is_zero(eval_nested(C, cert)):
        raise InternalMismatch("back-substituted certificate does not evaluate to 0")
    return cert


# -- canonical certificate search ------------------------------------------------


def _exponent_vectors(n: int, total: int, cap: int):
    """Vectors of length n summing to total with entries <= cap, lex ascending."""
    if n == 0:
        if total == 0:
            yield ()
        return
    for first in range(0, min(cap, total) + 1):
        for rest in _exponent_vectors(n - 1, total - first, cap):
            yield (first,) + rest


def _int_lex_solve(ws: Sequence[int], target: int, box: int | None = None):
    """Lex-smallest c in [-box, box]^n with sum c*w == target (c = 0 where w = 0)."""
    box = COFACTOR_BOX if box is None else box
    n = len(ws)
    sg = [0] * (n + 1)
    smax = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        sg[i] = gcd(ws[i], sg[i + 1])
        smax[i] = smax[i + 1] + abs(ws[i]) * box

    def rec(i, rem):
        if i == n:
            return [] if rem == 0 else None
        if ws[i] == 0:
            sub = rec(i + 1, rem)
            return None if sub is None else [0] + sub
        for c in range(-box, box + 1):
            r = rem - c * ws[i]
            g = sg[i + 1]
            if (g == 0 and r) or (g and r % g) or abs(r) > smax[i + 1]:
                continue
            sub = rec(i + 1, r)
            if sub is not None:
                return [c] + sub
        return None

    if (sg[0] == 0 and target) or (sg[0] and target % sg[0]):
        return None
    sol = rec(0, target)
    if sol is not None:
        return sol
    from .groebner import xgcd_list

    g, bez = xgcd_list(list(ws))
    return [b * (target // g) for b in bez]


def _mod_lex_solve(ws: Sequence[int], target: int, n: int):
    """Lex-smallest residues c with sum c*w == target mod n."""
    k = len(ws)
    sg = [n] * (k + 1)
    for i in range(k - 1, -1, -1):
        sg[i] = gcd(ws[i], sg[i + 1])
    if target % sg[0]:
        return None
    out = []
    rem = target % n
    for i, w in enumerate(ws):
        for c in range(n):
            r = (rem - c * w) % n
            if r % sg[i + 1] == 0:
                out.append(c)
                rem = r
                break
    return out


def _solve_cofactors(R: Ring, oracle: IdealOracle, ws: list, target):
    if isinstance(R, IntegerRing):
        return _int_lex_solve(ws, target)
    if isinstance(R, ModularRing):
        return _mod_lex_solve(ws, target, R.n)
    return oracle.member(target, ws)


def search_certificate(C: IdealisticChain, oracle: IdealOracle | None = None, budget: int | None = None):
    """Certificate with smallest total exponent, then lex-smallest exponents and cofactors.

    Returns None when nothing is found within the exponent cap and budget.
    """
    R = C.ring
    oracle = oracle or oracle_for(R)
    if budget is None:
        budget = SEARCH_BUDGET if isinstance(R, (IntegerRing, ModularRing)) else POLY_SEARCH_BUDGET
    slots = [(k, i) for k, p in enumerate(C.primes) for i, g in enumerate(p.U) if not R.is_one(g)]
    tried = 0
    for cap in (EXPONENT_CAP, 2 * EXPONENT_CAP):
        for total in range(0, cap * len(slots) + 1):
            for vec in _exponent_vectors(len(slots), total, cap):
                if cap > EXPONENT_CAP and max(vec, default=0) <= EXPONENT_CAP:
                    continue
                tried += 1
                if tried > budget:
                    return None
                exps = [[0] * len(p.U) for p in C.primes]
                for (k, i), e in zip(slots, vec):
                    exps[k][i] = e
                us = [R.prod(R.pow(g, e) for g, e in zip(p.U, ex)) for p, ex in zip(C.primes, exps)]
                ws, owners = [], []
                pref = R.one()
                for k, p in enumerate(C.primes):
                    for i, g in enumerate(p.J):
                        ws.append(R.mul(pref, g))
                        owners.append((k, i))
                    pref = R.mul(pref, us[k])
                target = R.neg(pref)
                sol = _solve_cofactors(R, oracle, ws, target)
                if sol is None:
                    continue
                cofs = [[R.zero()] * len(p.J) for p in C.primes]
                for (k, i), c in zip(owners, sol):
                    cofs[k][i] = c
                cert = CollapseCertificate(list(zip(exps, cofs)))
                if R.is_zero(eval_nested(C, cert)):
                    return cert
    return None


def certify_collapse(C: IdealisticChain, oracle: IdealOracle | None = None, canonical: bool | None = None):
    """Verified collapse certificate for a collapsing chain.

    Integer and modular rings get the canonical (searched) certificate when the
    search succeeds; otherwise the certificate comes from back-substitution
    through the saturation run. None when resource caps stop the construction.
    """
    R = C.ring
    oracle = oracle or oracle_for(R)
    if not chain_collapses(C, oracle):
        raise NotACollapse("the chain does not collapse")
    if canonical is None:
        canonical = isinstance(R, (IntegerRing, ModularRing))
    cert = None
    if canonical:
        cert = search_certificate(C, oracle)
    if cert is None:
        try:
            cert = _back_substitute(C, oracle)
        except ResourceExhausted:
            return None
    if cert is None or not R.is_zero(eval_nested(C, cert)):
        raise InternalMismatch("collapse verdict without a valid certificate")
    return cert


# -- completion --------------------------------------------------------------------


@dataclass
class CompletedChain:
    """I_k = <J_0..J_k>; V_k given by its closed form, never enumerated."""

    ring: Ring
    ideals: list
    monoids: list
    closed_forms: list

    def to_json(self):
        R = self.ring
        return {
            "I": [[R.fmt(g) for g in I] for I in self.ideals],
            "V": self.closed_forms,
        }


def complete_chain(C: IdealisticChain) -> CompletedChain:
    R = C.ring
    ideals = []
    acc: list = []
    for p in C.primes:
        acc = acc + list(p.J)
        ideals.append(list(acc))
    monoids = [list(p.U) for p in C.primes]

    def M(k):
        return "M(" + ", ".join(R.fmt(u) for u in monoids[k]) + ")" if monoids[k] else "M()"

    def I(k):
        return "<" + ", ".join(R.fmt(g) for g in ideals[k]) + ">"

    forms = []
    last = C.length
    for k in range(last + 1):
        # V_k = M_k M_{k+1}...M_l + M_k...M_{l-1} I_l + ... + I_k
        terms = ["".join(M(i) for i in range(k, last + 1))]
        for h in range(last, k - 1, -1):
            terms.append("".join(M(i) for i in range(k, h)) + I(h))
        forms.append(" + ".join(terms))
    return CompletedChain(R, ideals, monoids, forms)


# -- saturated refinements and merging ---------------------------------------------


def in_saturated_ideal(P: IdealisticPrime, x, ring: Ring, oracle=None) -> bool:
    return chain_collapses(IdealisticChain(ring, [IdealisticPrime(P.J, P.U + (x,))]), oracle)


def in_saturated_monoid(P: IdealisticPrime, x, ring: Ring, oracle=None) -> bool:
    return chain_collapses(IdealisticChain(ring, [IdealisticPrime(P.J + (x,), P.U)]), oracle)


@dataclass
class CollapseIn:
    """u + j + a*x == 0, j optionally given by cofactors over J."""

    u: object
    j: object
    a: object
    cof: list | None = None


@dataclass
class CollapseOut:
    """u * x**m + j == 0."""

    u: object
    m: int
    j: object
    cof: list | None = None


@dataclass
class MergeResult:
    u: object
    j: object
    j_over_inputs: tuple  # (c1, c2) with j == c1*j_in + c2*j_out
    cof: list | None = None


def rabinovitch_merge(R: Ring, cin: CollapseIn, cout: CollapseOut, x, J: Sequence | None = None) -> MergeResult:
    """Eliminate x from u1 + j1 + a*x = 0 and u2*x^m + j2 = 0.

    u3 = u2*u1^m and j3 = u2*((u1 + j1)^m - u1^m) + (-a)^m * j2.
    """
    if not R.is_zero(R.add(R.add(cin.u, cin.j), R.mul(cin.a, x))):
        raise NotACollapse("u1 + j1 + a*x is not zero")
    if not R.is_zero(R.add(R.mul(cout.u, R.pow(x, cout.m)), cout.j)):
        raise NotACollapse("u2*x^m + j2 is not zero")
    if J is not None:
        for name, d in (("first", cin), ("second", cout)):
            if d.cof is not None and not R.eq(d.j, R.dot(d.cof, J)):
                raise MalformedDecomposition(f"{name} cofactors do not give j")
    m = cout.m
    c = R.add(cin.u, cin.j)
    # (c^m - u^m) = j * sum_{i<m} c^(m-1-i) u^i
    geo = R.sum(R.mul(R.pow(c, m - 1 - i), R.pow(cin.u, i)) for i in range(m))
    c1 = R.mul(cout.u, geo)
    c2 = R.pow(R.neg(cin.a), m)
    u3 = R.mul(cout.u, R.pow(cin.u, m))
    j3 = R.add(R.mul(c1, cin.j), R.mul(c2, cout.j))
    if not R.is_zero(R.add(u3, j3)):
        raise InternalMismatch("merged identity does not vanish")
    cof = None
    if J is not None and cin.cof is not None and cout.cof is not None:
        cof = [R.add(R.mul(c1, a), R.mul(c2, b)) for a, b in zip(cin.cof, cout.cof)]
        if not R.eq(j3, R.dot(cof, J)):
            raise InternalMismatch("merged cofactors do not give j3")
    return MergeResult(u3, j3, (c1, c2), cof)


# -- pseudo-regular sequences --------------------------------------------------------


@dataclass(frozen=True)
class PseudoSingularCertificate:
    """x1^m1 (x2^m2 (... x_l^m_l (1 + a_l x_l) ... + a2 x2) + a1 x1) == 0."""

    m: tuple
    a: tuple

    def evaluate(self, R: Ring, seq):
        if len(seq) != len(self.m) or len(seq) != len(self.a):
            raise PreconditionError("certificate length differs from the sequence length")
        acc = R.one()
        for x, mi, ai in zip(reversed(seq), reversed(self.m), reversed(self.a)):
            acc = R.mul(R.pow(x, mi), R.add(acc, R.mul(ai, x)))
        return acc

    def check(self, R: Ring, seq) -> bool:
        return R.is_zero(self.evaluate(R, seq))


def _from_elementary(R: Ring, cert: CollapseCertificate) -> PseudoSingularCertificate:
    levels = cert.levels
    m = tuple(levels[i][0][0] for i in range(len(levels) - 1))
    a = tuple(levels[i][1][0] for i in range(1, len(levels)))
    return PseudoSingularCertificate(m, a)


def pseudo_regular(seq: Sequence, ring: Ring, oracle=None) -> bool:
    return not chain_collapses(IdealisticChain.elementary(ring, seq), oracle)


def pseudo_singular(seq: Sequence, ring: Ring, oracle=None, budget=None):
    """Certificate of pseudo-singularity, or None when the sequence is pseudo-regular."""
    R = ring
    seq = list(seq)
    oracle = oracle or oracle_for(R)
    C = IdealisticChain.elementary(R, seq)
    if not chain_collapses(C, oracle):
        return None
    cert = search_certificate(C, oracle, budget)
    if cert is None:
        try:
            cert = _back_substitute(C, oracle)
        except ResourceExhausted:
            cert = None
    if cert is not None:
        ps = _from_elementary(R, cert)
    elif isinstance(R, PolynomialRing) and R.K.is_field and len(seq) > R.nvars:
        Q = find_algebraic_dependence(seq, R)
        ps = dependence_to_certificate(seq, Q, R)
    else:
        raise ResourceExhausted("sequence is pseudo-singular but no certificate was found within caps", {})
    if not ps.check(R, seq):
        raise InternalMismatch("pseudo-singular certificate does not vanish")
    return ps


def dependence_ring(K: Ring, count: int) -> PolynomialRing:
    return PolynomialRing(K, [f"t{i + 1}" for i in range(count)], order="lex")


def dependence_to_certificate(seq: Sequence, Q: Poly, ring: PolynomialRing, strict: bool = False):
    """Read a pseudo-singular certificate off an algebraic dependence Q(seq) = 0.

    Uses the lex-first monomial t^m of Q (t1 most significant): every other
    monomial t^b first exceeds m at some index i, so Q splits as
    t^m + sum_i t1^m1..t_i^(m_i+1) R_i and a_i = R_i(seq).
    """
    R = ring
    seq = list(seq)
    if not Q.terms:
        raise NotADependence("Q is the zero polynomial")
    if len(Q.ring.vars) != len(seq):
        raise NotADependence("Q has the wrong number of variables")
    T = Q.ring
    K = T.K
    if not R.is_zero(T.evaluate(Q, seq, R)):
        raise NotADependence("Q does not vanish on the sequence")
    first = min(Q.terms, key=lex_key)
    lc = Q.terms[first]
    if not K.is_one(lc):
        if strict:
            raise LeadingNotMonic(f"coefficient of the lex-first monomial is {K.fmt(lc)}")
        inv = K.inv(lc)
        Q = T.make({e: K.mul(c, inv) for e, c in Q.terms.items()})
    n = len(seq)
    parts: list[dict] = [dict() for _ in range(n)]
    for e, c in Q.terms.items():
        if e == first:
            continue
        i = next(k for k in range(n) if e[k] != first[k])
        if e[i] < first[i]:
            raise InternalMismatch("lex-first monomial is not minimal")
        rest = list(e)
        for k in range(i):
            rest[k] -= first[k]
        rest[i] -= first[i] + 1
        parts[i][tuple(rest)] = c
    a = tuple(T.evaluate(T.make(p), seq, R) for p in parts)
    ps = PseudoSingularCertificate(tuple(first), a)
    if not ps.check(R, seq):
        raise InternalMismatch("certificate read from the dependence does not vanish")
    return ps


def dependence_bound(count: int, nvars: int, d: int) -> int:
    """Smallest m with C(m+count, count) > C(d*m+nvars, nvars)."""
    m = 0
    while comb(m + count, count) <= comb(d * m + nvars, nvars):
        m += 1
        if m > 10_000:
            raise ResourceExhausted("no counting bound found", {"m": m})
    return m


def find_algebraic_dependence(seq: Sequence, ring: PolynomialRing, bound: int | None = None):
    """Nonzero Q with Q(seq) = 0, normalized so its lex-first monomial has coefficient 1.

    Monomials t^a are taken by increasing degree and reduced against an echelon
    of the images seq^a; the first linear dependence is returned.
    """
    R = ring
    seq = list(seq)
    K = R.K
    if not K.is_field:
        raise PreconditionError("algebraic dependence needs field coefficients")
    if len(seq) <= R.nvars:
        raise PreconditionError(f"need more than {R.nvars} elements, got {len(seq)}")
    d = max((s.degree() for s in seq), default=0)
    d = max(d, 1)
    m = dependence_bound(len(seq), R.nvars, d) if bound is None else bound
    T = dependence_ring(K, len(seq))
    # echelon rows: (pivot monomial of image, image dict, combination dict over t-monomials)
    pivots: dict = {}
    key = R.key
    for deg in range(m + 1):
        for combo in combinations_with_replacement(range(len(seq)), deg):
            alpha = [0] * len(seq)
            for i in combo:
                alpha[i] += 1
            alpha = tuple(alpha)
            img = dict(R.prod(R.pow(s, k) for s, k in zip(seq, alpha) if k).terms) if deg else {R._zero_exp: K.one()}
            comb_ = {alpha: K.one()}
            while img:
                lm = max(img, key=key)
                if lm not in pivots:
                    break
                pimg, pcomb = pivots[lm]
                c = K.mul(img[lm], K.inv(pimg[lm]))
                for e, v in pimg.items():
                    nv = K.sub(img.get(e, K.zero()), K.mul(c, v))
                    if K.is_zero(nv):
                        img.pop(e, None)
                    else:
                        img[e] = nv
                for e, v in pcomb.items():
                    nv = K.sub(comb_.get(e, K.zero()), K.mul(c, v))
                    if K.is_zero(nv):
                        comb_.pop(e, None)
                    else:
                        comb_[e] = nv
            if not img:
                Q = T.make(comb_)
                first = min(Q.terms, key=lex_key)
                inv = K.inv(Q.terms[first])
                Q = T.make({e: K.mul(c, inv) for e, c in Q.terms.items()})
                if not R.is_zero(T.evaluate(Q, seq, R)):
                    raise InternalMismatch("dependence does not vanish")
                return Q
            pivots[max(img, key=key)] = (img, comb_)
    if bound is not None:
        raise BoundTooLow(f"no dependence among monomials of degree <= {bound}")
    raise InternalMismatch("counting bound exceeded without a dependence")


# -- dimension -------------------------------------------------------------------------------


@dataclass
class DimReport:
    ring: Ring
    ell: int
    verdict: bool
    header: str
    rows: list = field(default_factory=list)

    def to_json(self):
        R = self.ring
        rows = []
        for r in self.rows:
            row = {"seq": [R.fmt(x) for x in r["seq"]], "collapses": r["collapses"]}
            if r.get("cert") is not None:
                row["m"] = list(r["cert"].m)
                row["a"] = [R.fmt(x) for x in r["cert"].a]
            if "power_witness" in r:
                k, a = r["power_witness"]
                row["power_witness"] = {"k": k, "a": R.fmt(a)}
            rows.append(row)
        return {"ell": self.ell, "verdict": self.verdict, "header": self.header, "rows": rows}


def zero_dim_witness(R: Ring, ps: PseudoSingularCertificate):
    """From x^m (1 + a x) = 0 read k, b with x^k = b * x^(k+1)."""
    return ps.m[0], R.neg(ps.a[0])


def dim_at_most(R: Ring, ell: int, testset: Sequence[Sequence], oracle=None) -> DimReport:
    """Test-set relative check of Krull dimension <= ell (sequences of length ell+1)."""
    oracle = oracle or oracle_for(R)
    poly_thm = isinstance(R, PolynomialRing) and R.K.is_field and ell >= R.nvars
    rows = []
    refuted = None
    for seq in testset:
        seq = list(seq)
        if len(seq) != ell + 1:
            raise PreconditionError(f"sequence of length {len(seq)} in a test set for ell={ell}")
        if poly_thm:
            Q = find_algebraic_dependence(seq, R)
            ps = dependence_to_certificate(seq, Q, R)
            row = {"seq": seq, "collapses": True, "cert": ps}
        else:
            ps = pseudo_singular(seq, R, oracle)
            row = {"seq": seq, "collapses": ps is not None, "cert": ps}
            if ps is not None and ell == 0:
                k, b = zero_dim_witness(R, ps)
                if not R.eq(R.pow(seq[0], k), R.mul(b, R.pow(seq[0], k + 1))):
                    raise InternalMismatch("zero-dimension witness fails")
                row["power_witness"] = (k, b)
            if ps is None and refuted is None:
                refuted = seq
        rows.append(row)
    verdict = all(r["collapses"] for r in rows)
    if poly_thm:
        header = (
            f"consistent with dim <= {ell}: a polynomial ring in {R.nvars} variables over a field has "
            f"dimension {R.nvars}; every sequence certified through an algebraic dependence"
        )
    elif verdict:
        header = f"consistent with dim <= {ell} on this test set"
    else:
        header = f"dim <= {ell} refuted by witness " + ", ".join(R.fmt(x) for x in refuted)
    return DimReport(R, ell, verdict, header, rows)


# -- comaximal monoids and local-global ----------------------------------------------------


@dataclass(frozen=True)
class MonoidSpec:
    """S(I; U) = M(U) + <I>; with I empty this is the monoid M(U)."""

    U: tuple = ()
    I: tuple = ()

    def element(self, R: Ring, exps, cofs):
        return R.add(R.prod(R.pow(u, e) for u, e in zip(self.U, exps)), R.dot(cofs, self.I))


def comaximal_check(R: Ring, picks: Sequence, oracle=None):
    """Coefficients a with sum a_i * s_i == 1, or None."""
    oracle = oracle or oracle_for(R)
    picks = list(picks)
    cof = oracle.member(R.one(), picks)
    if cof is None:
        return None
    if not R.is_one(R.dot(cof, picks)):
        raise InternalMismatch("comaximal witness does not sum to 1")
    return list(cof)


def cor_s_monoids(us: Sequence) -> list[MonoidSpec]:
    """S_0 = S(u_1..u_n; 1), S_k = S(u_{k+1}..u_n; u_k): a comaximal family."""
    us = tuple(us)
    out = [MonoidSpec((), us)]
    for k in range(len(us)):
        out.append(MonoidSpec((us[k],), us[k + 1 :]))
    return out


@dataclass
class CoverWitness:
    x1: object
    y1: object
    u_exps: list
    j_cofs: list
    value: object


def cover_witness(R: Ring, I: Sequence, U: Sequence, a, x_dec, y_dec) -> CoverWitness:
    """x = u1*a^k + j1 and y = (u2 + j2) - a*z; find x1*x + y1*y in M(U) + <I>.

    x_dec = (x, u1_exps, k, j1_cofs); y_dec = (y, u2_exps, j2_cofs, z).
    """
    I, U = list(I), list(U)
    x, e1, k, c1 = x_dec
    y, e2, c2, z = y_dec
    if len(e1) != len(U) or len(e2) != len(U) or len(c1) != len(I) or len(c2) != len(I):
        raise MalformedDecomposition("decomposition shape does not match I and U")
    u1 = R.prod(R.pow(u, e) for u, e in zip(U, e1))
    u2 = R.prod(R.pow(u, e) for u, e in zip(U, e2))
    j1 = R.dot(c1, I)
    j2 = R.dot(c2, I)
    if not R.eq(x, R.add(R.mul(u1, R.pow(a, k)), j1)):
        raise MalformedDecomposition("x differs from u1*a^k + j1")
    if not R.eq(y, R.sub(R.add(u2, j2), R.mul(a, z))):
        raise MalformedDecomposition("y differs from u2 + j2 - a*z")
    c = R.add(u2, j2)
    d = R.mul(a, z)
    y2 = R.sum(R.mul(R.pow(c, k - 1 - i), R.pow(d, i)) for i in range(k))
    # c^k = u2^k + j2 * sum_i c^(k-1-i) u2^i
    geo = R.sum(R.mul(R.pow(c, k - 1 - i), R.pow(u2, i)) for i in range(k))
    zk = R.pow(z, k)
    x1 = zk
    y1 = R.mul(u1, y2)
    u_exps = [a_ + k * b_ for a_, b_ in zip(e1, e2)]
    j_cofs = [R.add(R.mul(R.mul(u1, geo), q2), R.mul(zk, q1)) for q1, q2 in zip(c1, c2)]
    value = R.add(R.mul(x1, x), R.mul(y1, y))
    expect = R.add(R.prod(R.pow(u, e) for u, e in zip(U, u_exps)), R.dot(j_cofs, I))
    if not R.eq(value, expect):
        raise InternalMismatch("cover combination does not decompose")
    return CoverWitness(x1, y1, u_exps, j_cofs, value)


@dataclass
class LocalCollapse:
    """s * u_0...u_l + sum_k u_0...u_(k-1) j_k == 0 over R, with s in the local monoid.

    ``s_witness`` optionally gives (exps, cofs) decomposing s in its MonoidSpec.
    """

    s: object
    cert: CollapseCertificate
    monoid: MonoidSpec | None = None
    s_witness: tuple | None = None


def eval_scaled(C: IdealisticChain, cert: CollapseCertificate, s):
    """s * prod(u) + sum_k (u_0...u_(k-1)) j_k."""
    R = C.ring
    us = cert.u_values(C)
    js = cert.j_values(C)
    total = R.mul(s, R.prod(us))
    pref = R.one()
    for u, j in zip(us, js):
        total = R.add(total, R.mul(pref, j))
        pref = R.mul(pref, u)
    return total


def glue_collapse(C: IdealisticChain, local: Sequence[LocalCollapse], comax: Sequence) -> CollapseCertificate:
    """Global certificate from local collapses (E_i) and sum a_i s_i = 1."""
    R = C.ring
    local = list(local)
    comax = list(comax)
    if len(comax) != len(local):
        raise NotComaximal("one coefficient per local collapse is required")
    for i, lc in enumerate(local):
        if lc.monoid is not None and lc.s_witness is not None:
            if not R.eq(lc.s, lc.monoid.element(R, *lc.s_witness)):
                raise NotLocalCollapse(f"local datum {i}: s is not decomposed in its monoid")
        try:
            val = eval_scaled(C, lc.cert, lc.s)
        except Exception as exc:
            raise NotLocalCollapse(f"local datum {i}: {exc}") from exc
        if not R.is_zero(val):
            raise NotLocalCollapse(f"local datum {i} does not evaluate to 0")
    if not R.is_one(R.dot(comax, [lc.s for lc in local])):
        raise NotComaximal("sum a_i s_i is not 1")
    L = len(C.primes)
    exps = [[sum(lc.cert.levels[k][0][g] for lc in local) for g in range(len(C.primes[k].U))] for k in range(L)]
    cofs = [[R.zero()] * len(p.J) for p in C.primes]
    uvals = [lc.cert.u_values(C) for lc in local]
    for i, lc in enumerate(local):
        # w_k = prod over other localizations of their u_k
        w = [R.prod(uvals[h][k] for h in range(len(local)) if h != i) for k in range(L)]
        for k in range(L):
            tail = R.prod(w[k:])
            scale = R.mul(comax[i], tail)
            cofs[k] = [R.add(acc, R.mul(scale, c)) for acc, c in zip(cofs[k], lc.cert.levels[k][1])]
    cert = CollapseCertificate(list(zip(exps, cofs)))
    if not R.is_zero(eval_nested(C, cert)):
        raise InternalMismatch("glued certificate does not evaluate to 0")
    return cert


def collapse_denominator(C: IdealisticChain, exps: Sequence, fractions: Sequence, max_power: int = 8):
    """Clear denominators of a collapse in a localization.

    ``fractions[k][i]`` is the cofactor of J_k[i], given as (num, den) or a
    Fraction over Z. Returns (m, LocalCollapse with s = m^p) where m is the
    product of the denominators and the numerator identity holds over R.
    """
    R = C.ring
    flat = []
    for k, row in enumerate(fractions):
        if len(row) != len(C.primes[k].J):
            raise MalformedFraction(f"level {k}: wrong number of cofactors")
        for i, f in enumerate(row):
            if isinstance(f, Fraction):
                num, den = f.numerator, f.denominator
            elif isinstance(f, tuple) and len(f) == 2:
                num, den = f
            else:
                num, den = f, R.one()
            if R.is_zero(den):
                raise MalformedFraction(f"zero denominator at level {k}, cofactor {i}")
            flat.append((k, i, num, den))
    dens = [d for *_, d in flat if not R.is_one(d)]
    m = R.prod(dens)
    cofs = [[R.zero()] * len(p.J) for p in C.primes]
    for pos, (k, i, num, den) in enumerate(flat):
        others = R.prod(d for q, (*_, d) in enumerate(flat) if q != pos and not R.is_one(d))
        cofs[k][i] = R.mul(num, others) if not R.is_one(den) else R.mul(num, m)
    # m * (prod u + sum pref * j) = m*prod u + sum pref * j'  with j' as above
    base = CollapseCertificate(list(zip([list(e) for e in exps], cofs)))
    for p in range(max_power + 1):
        mp = R.pow(m, p)
        scaled = CollapseCertificate([(e, [R.mul(mp, c) for c in cs]) for e, cs in base.levels])
        s = R.pow(m, p + 1)
        if R.is_zero(eval_scaled(C, scaled, s)):
            return m, LocalCollapse(s, scaled)
    raise NotLocalCollapse("cleared identity does not vanish for any power of the denominator")
