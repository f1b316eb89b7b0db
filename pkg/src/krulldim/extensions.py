"""Integral extensions S = R[Y]/(f): traces, Lying Over, Going Up, Going Down,
collapse above R, and the linear-algebra steps behind them.

Polynomials over the base in the auxiliary variable T are handled as plain
coefficient lists, lowest degree first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Sequence

from .chain import IdealisticChain, IdealisticPrime
from .collapse import PseudoSingularCertificate, certify_collapse, chain_collapses, in_saturated_ideal
from .errors import (
    CapExceeded,
    CoefficientEscapesIdeal,
    InternalMismatch,
    MalformedWitness,
    NoUnitCoefficient,
    NotACollapse,
    NotAnnihilator,
    NotARelation,
    NotVariableTail,
    PreconditionBreach,
    PreconditionError,
    SaturationRefutes,
    UnsupportedRing,
)
from .groebner import groebner_basis
from .ideals import MembershipWitness, oracle_for
from .linalg import berkowitz
from .ring import ExtensionRing, IntegerRing, ModularRing, Poly, PolynomialRing, RationalField, Ring, elimination_key

ALIST_CAP = 16
GD_ROUND_SLACK = 1


# -- univariate helpers over the base ---------------------------------------------------


def _trim(R: Ring, c: list) -> list:
    c = list(c)
    while c and R.is_zero(c[-1]):
        c.pop()
    return c


def ueval(S: Ring, coeffs: Sequence, x, embed=None):
    """Horner evaluation of sum c_i T^i at x; ``embed`` maps coefficients into S."""
    embed = embed or S.coerce
    acc = S.zero()
    for c in reversed(list(coeffs)):
        acc = S.add(S.mul(acc, x), embed(c))
    return acc


def charpoly_low_first(R: Ring, M) -> list:
    return list(reversed(berkowitz(R, M)))


def fmt_upoly(R: Ring, coeffs: Sequence, var: str = "T") -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if R.is_zero(c):
            continue
        s = R.fmt(c)
        if i == 0:
            parts.append(s)
            continue
        mono = var if i == 1 else f"{var}^{i}"
        if R.is_one(c):
            parts.append(mono)
        elif s == "-1":
            parts.append("-" + mono)
        else:
            parts.append(f"({s})*{mono}" if any(ch in s[1:] for ch in "+-") else f"{s}*{mono}")
    out = " + ".join(parts) if parts else "0"
    return out.replace("+ -", "- ")


def _is_univariate_over_field(R: Ring) -> bool:
    return isinstance(R, PolynomialRing) and R.nvars == 1 and R.K.is_field


def integrally_closed_base(R: Ring) -> bool:
    """The declared integrally-closed bases: Z and K[t]."""
    return isinstance(R, IntegerRing) or _is_univariate_over_field(R)


def _base_gcd(R: Ring, a, b):
    if isinstance(R, IntegerRing):
        return gcd(a, b)
    if _is_univariate_over_field(R):
        while not R.is_zero(b):
            _, r = R.divmod_multi(a, [b])
            a, b = b, r
        if R.is_zero(a):
            return a
        _, lc = R.lead(a)
        return R.scale(a, R.K.inv(lc))
    raise UnsupportedRing(f"no gcd in {R}")


def _base_div(R: Ring, a, b):
    """a / b in R, or None when b does not divide a."""
    if isinstance(R, IntegerRing):
        return a // b if b and a % b == 0 else None
    q, r = R.divmod_multi(a, [b])
    return q[0] if R.is_zero(r) else None


def _primitive(R: Ring, c: list) -> list:
    g = R.zero()
    for x in c:
        g = _base_gcd(R, g, x)
    if R.is_zero(g) or R.is_one(g):
        return c
    return [_base_div(R, x, g) for x in c]


def _prem(R: Ring, a: list, b: list) -> list:
    """Pseudo-remainder of a by b (b nonzero)."""
    a = _trim(R, a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        la = a[-1]
        shift = len(a) - 1 - db
        a = [R.mul(lb, x) for x in a]
        for i, y in enumerate(b):
            a[i + shift] = R.sub(a[i + shift], R.mul(la, y))
        a = _trim(R, a)
    return a


def monic_gcd_fraction_field(R: Ring, P: list, M: list) -> list:
    """Monic gcd of P and M over the fraction field of R, as a list over R.

    Primitive remainder sequence; the result must have coefficients in R,
    which holds for a monic M over an integrally closed base.
    """
    a, b = _trim(R, P), _trim(R, M)
    if not b:
        a, b = b, a
    if not b:
        raise NotAnnihilator("both polynomials are zero")
    a = _primitive(R, a) if a else a
    b = _primitive(R, b)
    while a:
        r = _prem(R, b, a)
        b, a = a, (_primitive(R, r) if r else r)
    lc = b[-1]
    out = []
    for x in b:
        q = _base_div(R, x, lc)
        if q is None:
            raise PreconditionBreach(f"monic gcd has a coefficient outside {R}; the base is not integrally closed here")
        out.append(q)
    return out


def udivmod_monic(R: Ring, a: list, b: list):
    """Euclidean division by a monic b over R: (q, r)."""
    a = _trim(R, a)
    db = len(b) - 1
    q = [R.zero()] * max(1, len(a) - db)
    while len(a) - 1 >= db and a:
        c = a[-1]
        shift = len(a) - 1 - db
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] = R.sub(a[i + shift], R.mul(c, y))
        a = _trim(R, a)
    return q, a


def _compose_scale(R: Ring, A: list, u) -> list:
    """Coefficients of A(u*X)."""
    return [R.mul(c, R.pow(u, i)) for i, c in enumerate(A)]


def _t_poly_to_list(S_or_R: Ring, p) -> list:
    """Coefficient list (low first) from a polynomial in base[T] (T the last variable)."""
    if not isinstance(p, Poly):
        return list(p)
    R = S_or_R
    deg = max((e[-1] for e in p.terms), default=-1)
    if isinstance(R, PolynomialRing):
        parts = [dict() for _ in range(deg + 1)]
        for e, c in p.terms.items():
            parts[e[-1]][e[:-1]] = c
        return [R.make(t) for t in parts]
    out = [R.zero() for _ in range(deg + 1)]
    for e, c in p.terms.items():
        out[e[-1]] = c
    return out


# -- trace ------------------------------------------------------------------------------------


def trace_ideal(S: ExtensionRing, gens: Sequence) -> list:
    """Generators of <gens>_S intersected with R, by eliminating Y from <gens, f>."""
    B = S.base
    if isinstance(B, ModularRing) and not B.is_field:
        raise UnsupportedRing(f"no elimination over {B}")
    if not (isinstance(B, (IntegerRing, RationalField, PolynomialRing)) or B.is_field):
        raise UnsupportedRing(f"no elimination over {B}")
    if isinstance(B, PolynomialRing) and not (B.K.is_field or isinstance(B.K, IntegerRing)):
        raise UnsupportedRing(f"no elimination over {B}")
    F = S.flat
    E = PolynomialRing(F.K, (S.var,) + F.vars[:-1])
    polys = [F.embed(S.to_flat(g), E) for g in gens] + [F.embed(S.to_flat_poly_of_f(), E)]
    gb = groebner_basis(E, polys, key=elimination_key(1))
    out = []
    for p in gb.polys:
        if any(e[0] for e in p.terms):
            continue
        if isinstance(B, PolynomialRing):
            out.append(B.make({e[1:]: c for e, c in p.terms.items()}))
        else:
            out.append(p.terms.get((0,), B.zero()))
    return [x for x in out if not B.is_zero(x)]


def trace_prime(S: ExtensionRing, P: IdealisticPrime, probes: Sequence = (), oracle=None) -> IdealisticPrime:
    """(J cap R, V cap R) with the monoid part approximated from below.

    The monoid part keeps the supplied U generators lying in R plus any probe
    r in R that is verified to lie in the saturated monoid of P.
    """
    B = S.base
    ideal = trace_ideal(S, list(P.J))
    monoid = [u[0] for u in P.U if S.in_base(u)]
    if probes:
        oracle = oracle or oracle_for(S)
        for r in probes:
            r = B.coerce(r)
            C = IdealisticChain(S, [IdealisticPrime(P.J + (S.embed(r),), P.U)])
            if chain_collapses(C, oracle):
                monoid.append(r)
    return IdealisticPrime(ideal, monoid)


# -- lying over --------------------------------------------------------------------------------


@dataclass
class LyingOver:
    """x**exponent = sum(cofactors * I) in R, obtained from a char poly with coefficients in I."""

    exponent: int
    witness: MembershipWitness
    charpoly: list
    module: str


def _span_closed(S: ExtensionRing, gens: list):
    """Structure constants when span(gens) is closed under products, else None."""
    from .linalg import express_over_base

    table = {}
    for a in range(len(gens)):
        for b in range(a, len(gens)):
            r = express_over_base(S, gens, S.mul(gens[a], gens[b]))
            if r is None:
                return None
            table[(a, b)] = table[(b, a)] = r
    return table


def lying_over(S: ExtensionRing, I: Sequence, x, n: int, pairs: Sequence, oracle=None) -> LyingOver:
    """From x^n = sum j_i b_i (j_i in <I>_R, b_i in S) derive a power of x in <I>_R.

    Multiplication by x^n has a matrix with entries in I on a generating set
    containing 1, so its characteristic polynomial x^(n m) + c_1 x^(n(m-1)) + ...
    has c_k in I and kills x^n.
    """
    R = S.base
    oracle = oracle or oracle_for(R)
    I = [R.coerce(g) for g in I]
    x = R.coerce(x)
    if not isinstance(n, int) or n < 1:
        raise MalformedWitness("the exponent n must be a positive integer")
    js = [R.coerce(j) for j, _ in pairs]
    bs = [S.coerce(b) for _, b in pairs]
    for j in js:
        if oracle.member(j, I) is None:
            raise MalformedWitness(f"{R.fmt(j)} is not in the ideal <{', '.join(R.fmt(g) for g in I)}>")
    xn = R.pow(x, n)
    if not S.eq(S.embed(xn), S.sum(S.scale(b, j) for j, b in zip(js, bs))):
        raise MalformedWitness("x^n differs from sum j_i b_i in the extension")
    gens = [S.one()] + bs
    table = _span_closed(S, gens)
    if table is not None:
        module = "witness"
        # x^n g_b = sum_i j_i b_i g_b, with b_i g_b expressed over gens
        cols = []
        for b in range(len(gens)):
            col = [R.zero()] * len(gens)
            for i, j in enumerate(js):
                for t, c in enumerate(table[(i + 1, b)]):
                    col[t] = R.add(col[t], R.mul(j, c))
            cols.append(col)
    else:
        module = "power-basis"
        gens = []
        cols = []
        for k in range(S.d):
            e = [R.zero()] * S.d
            e[k] = R.one()
            gens.append(tuple(e))
        for g in gens:
            col = [R.zero()] * S.d
            for j, b in zip(js, bs):
                for t, c in enumerate(S.mul(b, g)):
                    col[t] = R.add(col[t], R.mul(j, c))
            cols.append(col)
    m = len(gens)
    Mx = [[cols[c][r] for c in range(m)] for r in range(m)]
    for g, col in zip(gens, cols):
        if not S.eq(S.scale(g, xn), S.sum(S.scale(h, c) for h, c in zip(gens, col))):
            raise InternalMismatch("multiplication matrix does not represent x^n")
    chi = charpoly_low_first(R, Mx)
    for c in chi[:-1]:
        if oracle.member(c, I) is None:
            raise InternalMismatch(f"characteristic coefficient {R.fmt(c)} escapes the ideal")
    if not R.is_zero(ueval(R, chi, xn)):
        raise InternalMismatch("characteristic polynomial does not kill x^n")
    exponent = n * m
    cof = oracle.member(R.pow(x, exponent), I)
    if cof is None:
        raise InternalMismatch("power of x not found in the ideal")
    w = MembershipWitness(cof, exponent, I)
    if not w.check(R, x):
        raise InternalMismatch("lying-over witness fails")
    return LyingOver(exponent, w, chi, module)


# -- going up ----------------------------------------------------------------------------------


def lift_chain(S: ExtensionRing, C: IdealisticChain) -> IdealisticChain:
    R = S.base
    return IdealisticChain(
        S, [IdealisticPrime([S.embed(R.coerce(j)) for j in p.J], [S.embed(R.coerce(u)) for u in p.U]) for p in C.primes]
    )


def trace_chain(S: ExtensionRing, C1: IdealisticChain, probes: Sequence = (), oracle=None) -> IdealisticChain:
    """Trace of the forward completion of C1; probes are (level, r) pairs tried in the monoids."""
    oracle = oracle or oracle_for(S)
    acc: list = []
    primes = []
    for k, p in enumerate(C1.primes):
        gens = acc + list(p.J)
        g = S.prod(p.U)
        sat = [sg.element for sg in oracle.saturate(gens, g)] if gens else []
        ideal = trace_ideal(S, sat) if sat else []
        monoid = [u[0] for u in p.U if S.in_base(u)]
        for lev, r in probes:
            if lev == k:
                r = S.base.coerce(r)
                if chain_collapses(C1.with_added(k, J=[S.embed(r)]), oracle):
                    monoid.append(r)
        primes.append(IdealisticPrime(ideal, monoid))
        acc = sat
    return IdealisticChain(S.base, primes)


@dataclass
class GoingUp:
    in_S: bool
    in_R: bool
    exact: bool
    trace: IdealisticChain | None
    certificate: object | None = None
    lying_over: LyingOver | None = None


def going_up_transfer(S: ExtensionRing, C1: IdealisticChain | None, C2: IdealisticChain, probes: Sequence = ()) -> GoingUp:
    """Collapse of C1 . C2 in S against collapse of trace(C1) . C2 in R.

    With C1 absent the two verdicts must agree. With C1 present the trace is
    an under-approximation, so only 'collapses in R implies collapses in S'
    is enforced.
    """
    R = S.base
    so = oracle_for(S)
    ro = oracle_for(R)
    lifted = lift_chain(S, C2)
    if C1 is None:
        tr = None
        whole_S = lifted
        whole_R = C2
    else:
        tr = trace_chain(S, C1, probes, so)
        whole_S = IdealisticChain(S, C1.primes + lifted.primes)
        whole_R = IdealisticChain(R, tr.primes + C2.primes)
    in_S = chain_collapses(whole_S, so)
    in_R = chain_collapses(whole_R, ro)
    if in_R and not in_S:
        raise InternalMismatch("a chain collapsing in the base fails to collapse in the extension")
    if C1 is None and in_S != in_R:
        raise InternalMismatch(f"collapse in the extension ({in_S}) differs from collapse in the base ({in_R})")
    out = GoingUp(in_S, in_R, C1 is None, tr)
    if in_R:
        out.certificate = certify_collapse(whole_R, ro)
    if C1 is None and in_S and C2.length == 0:
        p = C2.primes[0]
        u = R.prod(p.U)
        res = so.radical_power(S.embed(u), [S.embed(j) for j in p.J])
        if res is not None:
            n, cof = res
            out.lying_over = lying_over(S, list(p.J), u, n, list(zip(p.J, cof)), ro)
    return out


# -- going down ----------------------------------------------------------------------------------


def _ideal_check(R, oracle, coeffs, I, what):
    for c in coeffs:
        if oracle.member(c, I) is None:
            raise CoefficientEscapesIdeal(f"{what} coefficient {R.fmt(c)} is not in <{', '.join(R.fmt(g) for g in I)}>")


def gd_monic_gcd(S: ExtensionRing, I: Sequence, x, M, P, oracle=None) -> list:
    """Monic gcd Q of P and M over the fraction field of the base, with its checks.

    M is monic with non-leading coefficients in I and kills x; P kills x.
    Q kills x, has non-leading coefficients in I and divides both in R[T].
    """
    R = S.base
    if not integrally_closed_base(R):
        raise PreconditionBreach(f"{R} is not a declared integrally closed base (Z or K[t])")
    oracle = oracle or oracle_for(R)
    I = [R.coerce(g) for g in I]
    x = S.coerce(x)
    M = _trim(R, [R.coerce(c) for c in _t_poly_to_list(R, M)])
    P = _trim(R, [R.coerce(c) for c in _t_poly_to_list(R, P)])
    if not M or not R.is_one(M[-1]):
        raise PreconditionBreach("M must be monic")
    for name, poly in (("M", M), ("P", P)):
        if not S.is_zero(ueval(S, poly, x, S.embed)):
            raise NotAnnihilator(f"{name} does not vanish at {S.fmt(x)}")
    _ideal_check(R, oracle, M[:-1], I, "M")
    Q = monic_gcd_fraction_field(R, P, M)
    if not S.is_zero(ueval(S, Q, x, S.embed)):
        raise NotAnnihilator(f"the monic gcd {fmt_upoly(R, Q)} does not vanish at {S.fmt(x)}")
    _ideal_check(R, oracle, Q[:-1], I, "gcd")
    for name, poly in (("M", M), ("P", P)):
        _, r = udivmod_monic(R, poly, Q)
        if r:
            raise InternalMismatch(f"the monic gcd does not divide {name}")
    return Q


def _integer_root(coeffs) -> bool:
    c0 = coeffs[0]
    if c0 == 0:
        return True
    c0 = abs(c0)
    for d in range(1, c0 + 1):
        if c0 % d == 0 and any(sum(c * s**i for i, c in enumerate(coeffs)) == 0 for s in (d, -d)):
            return True
    return False


def check_domain(S: ExtensionRing, assume_domain: bool = False):
    """Domain test for Z[Y]/(f) of degree <= 3 (no integer root); otherwise the caller must assert it."""
    if assume_domain:
        return
    if isinstance(S.base, IntegerRing) and S.d <= 3:
        if _integer_root(list(S.f)):
            raise PreconditionBreach(f"{S} is not a domain: the monic polynomial has an integer root")
        return
    raise PreconditionBreach(f"cannot decide whether {S} is a domain; pass assume_domain")


@dataclass
class GoingDown:
    """v1**power = sum(cofactors[g] * g) over the generators g of I0, in S."""

    power: int
    cofactors: list
    gens: list
    rounds: list = field(default_factory=list)
    certificate: object | None = None

    def check(self, S: ExtensionRing, v1) -> bool:
        return S.eq(S.pow(v1, self.power), S.sum(S.scale(c, g) for c, g in zip(self.cofactors, self.gens)))


def going_down_step(
    S: ExtensionRing,
    P0: IdealisticPrime,
    Q1: IdealisticPrime,
    u0,
    v1,
    pairs: Sequence,
    A: Sequence | None = None,
    B: Sequence | None = None,
    assume_domain: bool = False,
    oracle=None,
) -> GoingDown:
    """Turn u0 v1 = j0 (j0 = sum i_k b_k, i_k in I0) into v1^k in I0 S.

    A kills j0 with non-leading coefficients in I0, B is monic and kills v1;
    both default to characteristic polynomials. When u0^d B(X) differs from
    A(u0 X), both are replaced by the monic gcds of the second case.
    """
    R = S.base
    if not integrally_closed_base(R):
        raise PreconditionBreach(f"{R} is not a declared integrally closed base (Z or K[t])")
    check_domain(S, assume_domain)
    ro = oracle or oracle_for(R)
    so = oracle_for(S)
    I0 = [R.coerce(g) for g in P0.J]
    u0 = R.coerce(u0)
    v1 = S.coerce(v1)
    iks = [R.coerce(i) for i, _ in pairs]
    bks = [S.coerce(b) for _, b in pairs]
    for i in iks:
        if ro.member(i, I0) is None:
            raise PreconditionBreach(f"{R.fmt(i)} is not in I0")
    j0 = S.sum(S.scale(b, i) for i, b in zip(iks, bks))
    if not S.eq(S.scale(v1, u0), j0):
        raise PreconditionBreach("u0 v1 differs from j0 = sum i_k b_k")
    for g in I0:
        if so.member(S.embed(g), list(Q1.J)) is None:
            raise PreconditionBreach(f"{R.fmt(g)} of I0 is not in the ideal of Q1")
    if R.is_zero(u0):
        raise PreconditionBreach("u0 = 0: the prime of the base collapses by itself")
    rounds: list = []
    if S.is_zero(v1):
        out = GoingDown(1, [S.zero() for _ in I0], list(I0), rounds)
        out.certificate = _q1_certificate(S, Q1, v1, out, so)
        return out
    if A is None:
        A = charpoly_low_first(R, S.mult_matrix(j0))
    A = [R.coerce(c) for c in _t_poly_to_list(R, A)]
    if B is None:
        B = charpoly_low_first(R, S.mult_matrix(v1))
    B = [R.coerce(c) for c in _t_poly_to_list(R, B)]
    if not R.is_one(A[-1]) or not R.is_one(B[-1]):
        raise PreconditionBreach("A and B must be monic")
    if not S.is_zero(ueval(S, A, j0, S.embed)):
        raise NotAnnihilator("A does not vanish at j0")
    if not S.is_zero(ueval(S, B, v1, S.embed)):
        raise NotAnnihilator("B does not vanish at v1")
    _ideal_check(R, ro, A[:-1], I0, "A")
    cap = len(B) - 1 + GD_ROUND_SLACK
    while True:
        d = len(B) - 1
        lhs = [R.mul(R.pow(u0, d), c) for c in B]
        rhs = _compose_scale(R, A, u0)
        first = len(lhs) == len(rhs) and all(R.eq(a, b) for a, b in zip(lhs, rhs))
        rounds.append({"deg_A": len(A) - 1, "deg_B": d, "first_case": first})
        if first:
            break
        if len(rounds) > cap:
            raise InternalMismatch("going-down loop exceeded its degree bound")
        # second case: B1 = monic gcd of A(u0 X) and B, A1(X) = u0^d1 B1(X / u0)
        B1 = gd_monic_gcd(S, [R.one()], v1, B, rhs, ro)
        d1 = len(B1) - 1
        A1 = [R.mul(c, R.pow(u0, d1 - i)) for i, c in enumerate(B1)]
        P_ = [R.mul(c, R.pow(u0, d - i)) for i, c in enumerate(B)]
        A1_lemma = gd_monic_gcd(S, I0, j0, A, P_, ro)
        if len(A1_lemma) != len(A1) or not all(R.eq(a, b) for a, b in zip(A1_lemma, A1)):
            raise InternalMismatch("the two monic gcds of the second case disagree")
        if d1 + len(A1) >= d + len(A):
            raise InternalMismatch("going-down degrees did not decrease")
        A, B = A1, B1
    d = len(B) - 1
    # b_i = a_i / u0^(d-i) lies in the saturated I0; v1^d = -sum b_i v1^i
    cof = [S.zero() for _ in I0]
    for i in range(d):
        bi = _base_div(R, A[i], R.pow(u0, d - i)) if not R.is_zero(A[i]) else R.zero()
        if bi is None or not R.eq(bi, B[i]):
            raise InternalMismatch("first-case coefficient does not divide")
        w = ro.member(bi, I0)
        if w is None:
            raise PreconditionBreach(f"coefficient {R.fmt(bi)} is outside I0: P0 is not saturated")
        vi = S.pow(v1, i)
        for t, c in enumerate(w):
            cof[t] = S.sub(cof[t], S.scale(vi, c))
    out = GoingDown(d, cof, list(I0), rounds)
    if not out.check(S, v1):
        raise InternalMismatch("going-down membership fails to verify")
    out.certificate = _q1_certificate(S, Q1, v1, out, so)
    return out


def _q1_certificate(S, Q1, v1, out: GoingDown, so):
    """Collapse certificate for the single prime Q1 when v1 is one of its U generators."""
    from .chain import CollapseCertificate, verify_certificate

    idx = next((i for i, u in enumerate(Q1.U) if S.eq(u, v1)), None)
    if idx is None:
        return None
    target = S.neg(S.pow(v1, out.power))
    cof = so.member(target, list(Q1.J))
    if cof is None:
        return None
    exps = [0] * len(Q1.U)
    exps[idx] = out.power
    C = IdealisticChain(S, [Q1])
    cert = CollapseCertificate([(exps, cof)])
    if not verify_certificate(C, cert):
        raise InternalMismatch("collapse certificate for Q1 fails")
    return cert


@dataclass
class FlatDecomposition:
    """(u0, i_1..i_r) M = 0 and (v1, b_1..b_r) = M b'; v1 = sum m_0l b'_l."""

    M: list
    basis: list
    m0: list
    witnesses: list


def _free_coordinates(S: Ring):
    """(base ring, coordinates of an element, basis from a support)."""
    if isinstance(S, ExtensionRing):
        B = S.base
        basis = []
        for k in range(S.d):
            e = [B.zero()] * S.d
            e[k] = B.one()
            basis.append(tuple(e))
        return B, (lambda s, supp: list(s)), (lambda supp: basis), (lambda s: set(range(S.d)))
    if isinstance(S, PolynomialRing):
        B = S.K
        return (
            B,
            (lambda s, supp: [s.terms.get(e, B.zero()) for e in supp]),
            (lambda supp: [S.monomial(e) for e in supp]),
            (lambda s: set(s.terms)),
        )
    raise UnsupportedRing(f"{S} is not a free extension")


def going_down_flat(S: Ring, P0: IdealisticPrime, u0, v1, pairs: Sequence, oracle=None) -> FlatDecomposition:
    """From v1 u0 + sum i_k b_k = 0 in a free extension, read v1 = sum m_0l b'_l with m_0l in I0.

    The decomposition uses the free basis: b' is the basis and the rows of M
    are coordinates, so every column of M is a relation (u0, i) . M = 0.
    """
    B, coords, basis_of, support = _free_coordinates(S)
    ro = oracle or oracle_for(B)
    u0 = B.coerce(u0)
    v1 = S.coerce(v1)
    iks = [B.coerce(i) for i, _ in pairs]
    bks = [S.coerce(b) for _, b in pairs]
    for i in iks:
        if ro.member(i, list(P0.J)) is None:
            raise NotARelation(f"{B.fmt(i)} is not in I0")
    total = S.add(S.mul(S.coerce(u0), v1), S.sum(S.mul(S.coerce(i), b) for i, b in zip(iks, bks)))
    if not S.is_zero(total):
        raise NotARelation("v1 u0 + sum i_k b_k does not vanish")
    supp: set = set()
    for s in [v1] + bks:
        supp |= support(s)
    supp = sorted(supp)
    basis = basis_of(supp)
    M = [coords(s, supp) for s in [v1] + bks]
    row = [u0] + iks
    for ell in range(len(supp)):
        if not B.is_zero(B.dot(row, [M[k][ell] for k in range(len(M))])):
            raise InternalMismatch("a column of M is not a relation")
    for k, s in enumerate([v1] + bks):
        if not S.eq(s, S.sum(S.mul(S.coerce(c), b) if not isinstance(S, ExtensionRing) else S.scale(b, c) for c, b in zip(M[k], basis))):
            raise InternalMismatch("M b' does not reproduce the elements")
    m0 = M[0]
    witnesses = []
    for m in m0:
        if not in_saturated_ideal(P0, m, B, ro):
            raise SaturationRefutes(f"{B.fmt(m)} is not in the saturation of I0")
        witnesses.append(ro.member(m, list(P0.J)))
    return FlatDecomposition(M, basis, m0, witnesses)


# -- collapse above R and integral lists --------------------------------------------------------


def collapse_above(S: Ring, C: IdealisticChain, alist: Sequence, oracle=None) -> bool:
    """Every complementary split (H, H') of alist: H into J_0, H' into U_l, and the chain collapses."""
    alist = list(alist)
    if len(alist) > ALIST_CAP:
        raise CapExceeded(f"{len(alist)} elements above the base exceed the cap {ALIST_CAP}", {"alist": ALIST_CAP})
    oracle = oracle or oracle_for(S)
    embed = S.embed if isinstance(S, ExtensionRing) else S.coerce
    vals = [embed(a) for a in alist]
    last = C.length
    for mask in range(1 << len(vals)):
        H = [v for i, v in enumerate(vals) if mask >> i & 1]
        Hp = [v for i, v in enumerate(vals) if not mask >> i & 1]
        D = C.with_added(0, J=H).with_added(last, U=Hp)
        if not chain_collapses(D, oracle):
            return False
    return True


@dataclass
class AboveCase:
    """x^m (g' + b x) = g with g = sum a_i x^i over i in G_indices."""

    in_G: tuple  # indices (into the coefficient list) forced into G
    in_Gprime: int | None
    m: int
    gprime: object
    b: object
    g_terms: dict  # coefficient index -> S cofactor x^i

    def check(self, S: ExtensionRing, x, coeffs) -> bool:
        g = S.sum(S.scale(c, coeffs[i]) for i, c in self.g_terms.items())
        lhs = S.mul(S.pow(x, self.m), S.add(self.gprime, S.mul(self.b, x)))
        return S.eq(lhs, g) and set(self.g_terms) <= set(self.in_G)


@dataclass
class IntegralAlist:
    alist: list
    indices: list
    k: int
    relation: list  # a_i with x^k = sum_{i != k} a_i x^i (entry k unused)
    cases: list


def integral_alist(S: ExtensionRing, x, annihilator: Sequence | None = None) -> IntegralAlist:
    """The list above R making the chain ((0, x), (x, 1)) collapse, with one certificate per case.

    The annihilator P (low first) must have a coefficient equal to 1 at some
    index k; the largest such index is used. Defaults: T - x for x in R,
    otherwise the characteristic polynomial of x.
    """
    R = S.base
    x = S.coerce(x)
    if annihilator is None:
        P = [R.neg(x[0]), R.one()] if S.in_base(x) else charpoly_low_first(R, S.mult_matrix(x))
    else:
        P = _trim(R, [R.coerce(c) for c in _t_poly_to_list(R, annihilator)])
        if not S.is_zero(ueval(S, P, x, S.embed)):
            raise NotAnnihilator("the supplied polynomial does not vanish at x")
    ks = [i for i, c in enumerate(P) if R.is_one(c)]
    if not ks:
        raise NoUnitCoefficient("no coefficient of the annihilator equals 1")
    k = max(ks)
    a = [R.neg(c) for c in P]
    idx = [i for i in range(len(P)) if i != k]
    xs = [S.pow(x, i) for i in range(len(P) + 1)]
    cases = []
    for t in range(len(idx) + 1):
        in_G = tuple(idx[:t])
        if t == len(idx):
            # every a_i in G
            m, gp, b = k, S.one(), S.zero()
            g_terms = {i: xs[i] for i in idx}
            h = None
        else:
            h = idx[t]
            if h < k:
                m, gp = h, S.embed(a[h])
                b = S.neg(xs[k - h - 1])
                for i in idx:
                    if i > h:
                        b = S.add(b, S.scale(xs[i - h - 1], a[i]))
                g_terms = {i: S.neg(xs[i]) for i in idx if i < h}
            else:
                m, gp = k, S.one()
                b = S.zero()
                for i in idx:
                    if i > k:
                        b = S.sub(b, S.scale(xs[i - k - 1], a[i]))
                g_terms = {i: xs[i] for i in idx if i < k}
        case = AboveCase(in_G, h, m, gp, b, g_terms)
        if not case.check(S, x, a):
            raise InternalMismatch(f"case certificate {t} fails to verify")
        cases.append(case)
    return IntegralAlist([a[i] for i in idx], idx, k, a, cases)


# -- linear algebra: minors on trailing columns ------------------------------------------------


@dataclass
class MinorStep:
    """mu * V[col] - sum coeffs[t] * V[col + 1 + t] has row r equal to sign * mu_(index)."""

    k: int
    order: int
    rows: tuple
    mu: object
    col: int  # 0-based column expressed
    coeffs: list
    residuals: list  # (row, sign, earlier minor index (0-based)) for rows outside ``rows``


def _det(R: Ring, M) -> object:
    n = len(M)
    if n == 0:
        return R.one()
    c = berkowitz(R, M)[-1]
    return c if n % 2 == 0 else R.neg(c)


def trailing_minors(R: Ring, V) -> list:
    """(order, rows, value) for all minors on the trailing columns, larger orders first."""
    n = len(V)
    out = []
    for j in range(n, 0, -1):
        cols = list(range(n + 1 - j, n + 1))
        for rows in combinations(range(n), j):
            out.append((j, rows, _det(R, [[V[r][c] for c in cols] for r in rows])))
    out.append((0, (), R.one()))
    return out


def minors_decompose(R: Ring, V) -> list[MinorStep]:
    """Cramer data for every trailing minor of an n x (n+1) matrix, verified exactly."""
    V = [[R.coerce(x) for x in row] for row in V]
    n = len(V)
    if any(len(row) != n + 1 for row in V):
        raise PreconditionError("the matrix must be n x (n+1)")
    minors = trailing_minors(R, V)
    index = {(j, rows): i for i, (j, rows, _) in enumerate(minors)}
    steps = []
    for k, (j, rows, mu) in enumerate(minors):
        col = n - j
        tail = list(range(col + 1, n + 1))
        W = [[V[r][c] for c in tail] for r in rows]
        coeffs = []
        for t in range(j):
            Wt = [[V[r][col] if c == t else W[i][c] for c in range(j)] for i, r in enumerate(rows)]
            coeffs.append(_det(R, Wt))
        residuals = []
        for r in range(n):
            val = R.sub(R.mul(mu, V[r][col]), R.dot(coeffs, [V[r][c] for c in tail]))
            if r in rows:
                if not R.is_zero(val):
                    raise InternalMismatch("Cramer identity fails on a chosen row")
                continue
            big = tuple(sorted(rows + (r,)))
            i = index[(j + 1, big)]
            other = minors[i][2]
            if R.eq(val, other):
                sign = 1
            elif R.eq(val, R.neg(other)):
                sign = -1
            else:
                raise InternalMismatch("residual is not a larger trailing minor")
            if i >= k:
                raise InternalMismatch("residual minor does not precede the current one")
            residuals.append((r, sign, i))
        steps.append(MinorStep(k, j, rows, mu, col, coeffs, residuals))
    return steps


def field_dependent_column(K: Ring, V):
    """Over a field: the first step whose minor is nonzero and all earlier ones vanish."""
    for step in minors_decompose(K, V):
        if not K.is_zero(step.mu):
            inv = K.inv(step.mu)
            return step.col, [K.mul(inv, c) for c in step.coeffs]
    raise InternalMismatch("the empty minor is 1")


# -- restricting pseudo-singular certificates ---------------------------------------------------


def restrict_certificate(P: PolynomialRing, seq: Sequence, cert: PseudoSingularCertificate) -> PseudoSingularCertificate:
    """Certificate for (a_1..a_r) in the base from one for (a_1..a_r, X_1..X_n).

    The coefficient of X^p (p the exponents at the variable levels) in the
    vanishing polynomial is a certificate over the base.
    """
    R = P.K
    seq = [P.coerce(s) for s in seq]
    n = P.nvars
    r = len(seq) - n
    if r < 0 or any(not P.eq(s, g) for s, g in zip(seq[r:], P.gens)):
        raise NotVariableTail("the sequence must end with the variables in order")
    if any(not s.is_constant() for s in seq[:r]):
        raise NotVariableTail("the leading elements must be constants")
    cert = PseudoSingularCertificate(tuple(cert.m), tuple(P.coerce(c) for c in cert.a))
    if len(cert.m) != len(seq):
        raise PreconditionError("certificate length differs from the sequence length")
    if not cert.check(P, seq):
        raise NotACollapse("the certificate does not vanish")
    p = tuple(cert.m[r:])
    a = tuple(P.coeff(c, p) for c in cert.a[:r])
    m = tuple(cert.m[:r])
    out = PseudoSingularCertificate(m, a)
    base_seq = [P.constant_coeff(s) for s in seq[:r]]
    if not out.check(R, base_seq):
        raise InternalMismatch("restricted certificate does not vanish")
    return out
