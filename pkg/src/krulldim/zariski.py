"""The Zariski lattice of a ring, symbolically: an element is a generator list
standing for the radical of the ideal it generates.

The ring-to-lattice bridge decides collapse twice: once through the saturation
run of the collapse module, once through a ladder of radical ideals built
with independent saturation code and checked rung by rung with zar_entails.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Sequence

from .chain import IdealisticChain
from .collapse import certify_collapse, chain_collapses, pseudo_singular
from .errors import InputError, InternalMismatch, ResourceExhausted, UnsupportedRing
from .groebner import groebner_basis
from .ideals import oracle_for
from .lattice import Lattice, Presentation
from .ring import ExtensionRing, IntegerRing, ModularRing, PolynomialRing, Ring, elimination_key, parse_elements


@dataclass(frozen=True)
class ZarElement:
    """rad<gens>; the empty list is 0 and [1] is 1."""

    gens: tuple

    def __init__(self, gens=()):
        object.__setattr__(self, "gens", tuple(gens))

    def to_json(self, R: Ring):
        return {"radical_of": [R.fmt(g) for g in self.gens]}

    @classmethod
    def from_json(cls, R: Ring, data) -> "ZarElement":
        if not isinstance(data, dict) or set(data) != {"radical_of"}:
            raise InputError("Zariski element must be {'radical_of': [...]}")
        return cls(parse_elements(R, data["radical_of"]))


def zar_entails(R: Ring, U: Sequence, J: Sequence, oracle=None) -> bool:
    """prod(U) lies in rad<J>."""
    oracle = oracle or oracle_for(R)
    return oracle.in_radical(R.prod(R.coerce(u) for u in U), [R.coerce(j) for j in J])


def zar_leq(R: Ring, X: ZarElement, Y: ZarElement, oracle=None) -> bool:
    oracle = oracle or oracle_for(R)
    return all(oracle.in_radical(g, list(Y.gens)) for g in X.gens)


def zar_eq(R: Ring, X: ZarElement, Y: ZarElement, oracle=None) -> bool:
    oracle = oracle or oracle_for(R)
    return zar_leq(R, X, Y, oracle) and zar_leq(R, Y, X, oracle)


def zar_join(R: Ring, X: ZarElement, Y: ZarElement) -> ZarElement:
    return ZarElement(X.gens + Y.gens)


def zar_meet(R: Ring, X: ZarElement, Y: ZarElement) -> ZarElement:
    return ZarElement([R.mul(a, b) for a in X.gens for b in Y.gens])


def zar_reduce(R: Ring, X: ZarElement, oracle=None) -> ZarElement:
    """Drop generators already in the radical of the others (optional normalization)."""
    oracle = oracle or oracle_for(R)
    gens = list(X.gens)
    i = 0
    while i < len(gens):
        rest = gens[:i] + gens[i + 1 :]
        if oracle.in_radical(gens[i], rest):
            gens = rest
        else:
            i += 1
    return ZarElement(gens)


# -- independent saturation for the lattice side --------------------------------------------


def _sat_integer(gens, g):
    m = gcd(0, *gens) if gens else 0
    if g == 0:
        return [1]
    if m == 0:
        return []
    prev, k = None, 1
    while True:
        cur = m // gcd(m, g**k)
        if cur == prev:
            return [cur]
        prev, k = cur, k + 1


def _sat_modular(n, gens, g):
    d = gcd(n, *gens) if gens else n
    k = max(1, n.bit_length())
    gk = pow(g, k, n)
    hits = [x for x in range(n) if (x * gk) % n % d == 0]
    return [gcd(n, *hits) % n]


def _quotient(P: PolynomialRing, gens, f, relations):
    """(I : f) through I cap <f> = elimination of s from s*I + (1 - s)*<f>."""
    T = P.extend(["_s"])
    s = T.var("_s")
    polys = [T.mul(s, P.embed(h, T)) for h in list(gens) + list(relations)]
    polys.append(T.mul(T.sub(T.one(), s), P.embed(f, T)))
    gb = groebner_basis(T, polys, key=elimination_key(1))
    out = []
    for p in gb.polys:
        if any(e[0] for e in p.terms):
            continue
        h = P.make({e[1:]: c for e, c in p.terms.items()})
        out.append(P.divide_exact(h, f))
    return out


def _sat_poly(P: PolynomialRing, gens, g, relations=(), max_rounds=60):
    if not g.terms:
        return [P.one()]
    cur = list(gens)
    for _ in range(max_rounds):
        nxt = _quotient(P, cur, g, relations)
        gb = groebner_basis(P, list(cur) + list(relations))
        if all(gb.member(h) is not None for h in nxt):
            return cur
        cur = nxt
    raise ResourceExhausted("ideal quotient chain did not stabilize", {"rounds": max_rounds})


def lattice_saturate(R: Ring, gens, g) -> list:
    """Generators of (<gens> : g^oo), computed without the collapse-module oracle."""
    if isinstance(R, IntegerRing):
        return _sat_integer(list(gens), g)
    if isinstance(R, ModularRing):
        return _sat_modular(R.n, list(gens), g)
    if isinstance(R, PolynomialRing):
        return _sat_poly(R, list(gens), g)
    if isinstance(R, ExtensionRing):
        flat = [R.to_flat(x) for x in gens]
        out = _sat_poly(R.flat, flat, R.to_flat(g), [R.to_flat_poly_of_f()])
        return [R.from_flat(p) for p in out]
    raise UnsupportedRing(f"no Zariski saturation for {R}")


# -- bridge --------------------------------------------------------------------------------


@dataclass
class BridgeResult:
    ring_verdict: bool
    lattice_verdict: bool
    ladder: list  # ZarElements x_1..x_l from the lattice side
    principal: list | None  # principal witnesses v_1..v_l when collapsing


def lattice_ladder(C: IdealisticChain, oracle=None):
    """(verdict, x_1..x_l) with x_(k+1) the largest element with x_(k+1), U_k |- J_k, x_k."""
    R = C.ring
    oracle = oracle or oracle_for(R)
    xs: list[ZarElement] = []
    prev: tuple = ()
    for k in range(C.length):
        p = C.primes[k]
        base = list(p.J) + list(prev)
        x = ZarElement(lattice_saturate(R, base, R.prod(p.U)))
        for h in x.gens:
            if not zar_entails(R, [h] + list(p.U), base, oracle):
                raise InternalMismatch(f"ladder rung {k} fails for {R.fmt(h)}")
        xs.append(x)
        prev = x.gens
    last = C.primes[-1]
    return zar_entails(R, list(last.U), list(last.J) + list(prev), oracle), xs


def principal_witnesses(C: IdealisticChain, cert) -> list:
    """v_l = u_l + j_l, v_(k-1) = v_k u_(k-1) + j_(k-1); returns [v_1, ..., v_l]."""
    R = C.ring
    if C.length == 0:
        return []
    us = cert.u_values(C)
    js = cert.j_values(C)
    v = R.add(us[-1], js[-1])
    vs = [v]
    for k in range(C.length - 1, 0, -1):
        v = R.add(R.mul(v, us[k]), js[k])
        vs.append(v)
    return list(reversed(vs))


def check_principal(C: IdealisticChain, vs, oracle=None) -> bool:
    R = C.ring
    oracle = oracle or oracle_for(R)
    prev: list = []
    xs = list(vs) + [None]
    for k, p in enumerate(C.primes):
        lhs = list(p.U) + ([xs[k]] if xs[k] is not None else [])
        if not zar_entails(R, lhs, list(p.J) + prev, oracle):
            return False
        prev = [xs[k]] if xs[k] is not None else []
    return True


def bridge_collapse(C: IdealisticChain, oracle=None) -> BridgeResult:
    R = C.ring
    oracle = oracle or oracle_for(R)
    ring_verdict = chain_collapses(C, oracle)
    lattice_verdict, ladder = lattice_ladder(C, oracle)
    if ring_verdict != lattice_verdict:
        raise InternalMismatch(f"ring verdict {ring_verdict} differs from lattice verdict {lattice_verdict}")
    principal = None
    if ring_verdict:
        cert = certify_collapse(C, oracle)
        if cert is not None:
            principal = principal_witnesses(C, cert)
            if not check_principal(C, principal, oracle):
                raise InternalMismatch("principal witnesses fail the ladder")
    return BridgeResult(ring_verdict, lattice_verdict, ladder, principal)


@dataclass
class ZarDimReport:
    ell: int
    verdict: bool
    rows: list

    def to_json(self, R: Ring):
        rows = []
        for r in self.rows:
            row = {"seq": [R.fmt(x) for x in r["seq"]], "lattice": r["lattice"], "ring": r["ring"]}
            if r["a"] is not None:
                row["a"] = [R.fmt(x) for x in r["a"]]
            rows.append(row)
        return {"ell": self.ell, "verdict": self.verdict, "rows": rows}


def zar_dim_at_most(R: Ring, ell: int, testset, oracle=None) -> ZarDimReport:
    """Ladder a_1,x_1 |- 0; ...; 1 |- a_L,x_L in Zar(R) per sequence, with principal a_i."""
    oracle = oracle or oracle_for(R)
    rows = []
    for seq in testset:
        seq = list(seq)
        if len(seq) != ell + 1:
            raise InputError(f"sequence of length {len(seq)} in a test set for ell={ell}")
        C = IdealisticChain.elementary(R, seq)
        lat, _ = lattice_ladder(C, oracle)
        ring_ok = pseudo_singular(seq, R, oracle) is not None
        if lat != ring_ok:
            raise InternalMismatch(f"Zariski ladder and ring collapse disagree on {[R.fmt(x) for x in seq]}")
        a = None
        if lat:
            cert = certify_collapse(C, oracle)
            if cert is not None:
                a = principal_witnesses(C, cert)
                if not check_principal(C, a, oracle):
                    raise InternalMismatch("principal ladder witnesses fail")
        rows.append({"seq": seq, "lattice": lat, "ring": ring_ok, "a": a})
    return ZarDimReport(ell, all(r["lattice"] for r in rows), rows)


def zar_presentation(R: Ring, G: Sequence, names: Sequence[str] | None = None, oracle=None) -> Presentation:
    """Finite sub-presentation of Zar(R) on the generators G, axioms from zar_entails."""
    oracle = oracle or oracle_for(R)
    G = list(G)
    names = list(names) if names is not None else [R.fmt(g) for g in G]
    n = len(G)
    found: list = []
    for total in range(n + 1):
        for ls in range(total + 1):
            for L_ in combinations(range(n), ls):
                rest = [i for i in range(n) if i not in L_]
                for R_ in combinations(rest, total - ls):
                    if any(set(a) <= set(L_) and set(b) <= set(R_) for a, b in found):
                        continue
                    if zar_entails(R, [G[i] for i in L_], [G[i] for i in R_], oracle):
                        found.append((L_, R_))
    return Presentation(names, [([names[i] for i in a], [names[i] for i in b]) for a, b in found])


def zar_lattice(R: Ring, G: Sequence, names=None) -> Lattice:
    return Lattice(zar_presentation(R, G, names))
