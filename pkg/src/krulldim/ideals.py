"""Ideal membership, radical membership and saturation with explicit witnesses.

Polynomial rings (over a field or over Z, optionally modulo fixed relations)
go through Gröbner bases; Z and Z/n go through gcd arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from .errors import UnsupportedRing, ZeroDenominator
from .groebner import groebner_basis, xgcd_list
from .ring import (
    ExtensionRing,
    IntegerRing,
    ModularRing,
    Poly,
    PolynomialRing,
    Ring,
    elimination_key,
)


@dataclass(frozen=True)
class Ideal:
    ring: Ring
    gens: tuple

    def __init__(self, ring, gens=()):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "gens", tuple(gens))

    def fmt(self):
        return [self.ring.fmt(g) for g in self.gens]


@dataclass
class MembershipWitness:
    """``element**power == sum(c * g for c, g in zip(cofactors, gens))``."""

    cofactors: list
    power: int = 1
    gens: list = field(default_factory=list)

    def check(self, R: Ring, element) -> bool:
        lhs = R.pow(element, self.power)
        return R.eq(lhs, R.dot(self.cofactors, self.gens))


@dataclass
class SaturationGen:
    """``g**exponent * element == sum(cofactors * ideal gens)``."""

    element: object
    exponent: int
    cofactors: list


class IdealOracle:
    """Membership, saturation and radical tests for one ring."""

    def __init__(self, ring: Ring, degree_cap: int | None = None):
        self.ring = ring
        self.degree_cap = degree_cap

    def member(self, f, gens) -> list | None:
        raise NotImplementedError

    def saturate(self, gens, g) -> list[SaturationGen]:
        raise NotImplementedError

    def in_radical(self, f, gens) -> bool:
        raise NotImplementedError

    def radical_power(self, f, gens):
        """(n, cofactors) with f^n in <gens>, n minimal; None if f is not in the radical."""
        if not self.in_radical(f, gens):
            return None
        R = self.ring
        cache = {}

        def test(k):
            if k not in cache:
                cache[k] = self.member(R.pow(f, k), gens)
            return cache[k]

        if test(1) is not None:
            return 1, test(1)
        lo, hi = 1, 2
        while test(hi) is None:
            lo, hi = hi, hi * 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if test(mid) is None:
                lo = mid
            else:
                hi = mid
        return hi, test(hi)


class IntegerOracle(IdealOracle):
    def member(self, f, gens):
        g, bez = xgcd_list(list(gens))
        if g == 0:
            return [0] * len(gens) if f == 0 else None
        if f % g:
            return None
        k = f // g
        return [k * b for b in bez]

    def saturate(self, gens, g):
        n = len(gens)
        if g == 0:
            return [SaturationGen(1, 1, [0] * n)]
        m, bez = xgcd_list(list(gens))
        if m == 0:
            return []
        mp = m
        d = gcd(mp, g)
        while d > 1:
            mp //= d
            d = gcd(mp, g)
        e = 0
        while (g**e * mp) % m:
            e += 1
        k = g**e * mp // m
        return [SaturationGen(mp, e, [k * b for b in bez])]

    def in_radical(self, f, gens):
        m = gcd(0, *gens) if gens else 0
        if m == 0:
            return f == 0
        return pow(f, max(1, m.bit_length()), m) == 0


class ModularOracle(IdealOracle):
    def _gcd(self, gens):
        n = self.ring.n
        g, bez = xgcd_list(list(gens) + [n])
        return g, bez[:-1]

    def member(self, f, gens):
        n = self.ring.n
        g, bez = self._gcd(gens)
        if f % g:
            return None
        k = f // g
        return [(k * b) % n for b in bez]

    def saturate(self, gens, g):
        n = self.ring.n
        m, bez = self._gcd(gens)
        mp = m
        d = gcd(mp, g)
        while d > 1:
            mp //= d
            d = gcd(mp, g)
        e = 0
        while (pow(g, e, n) * mp) % m:
            e += 1
        k = (pow(g, e, n) * mp) % n // m
        return [SaturationGen(mp % n, e, [(k * b) % n for b in bez])]

    def in_radical(self, f, gens):
        m, _ = self._gcd(gens)
        return pow(f, max(1, m.bit_length()), m) == 0 if m > 1 else True


class PolyOracle(IdealOracle):
    """Polynomial ring over a field or Z, modulo fixed ``relations``."""

    def __init__(self, ring: PolynomialRing, relations: Sequence[Poly] = (), degree_cap=None):
        super().__init__(ring, degree_cap)
        K = ring.K
        if not (K.is_field or isinstance(K, IntegerRing)):
            raise UnsupportedRing(f"no ideal oracle for polynomials over {K}")
        self.relations = tuple(relations)
        self._tring = ring.extend(["_t"])
        self._rel_gb = groebner_basis(ring, self.relations, degree_cap=degree_cap) if self.relations else None

    def is_zero(self, f) -> bool:
        if not f.terms:
            return True
        if self._rel_gb is None:
            return False
        return self._rel_gb.member(f) is not None

    def basis(self, gens):
        return groebner_basis(self.ring, list(gens) + list(self.relations), degree_cap=self.degree_cap)

    def member(self, f, gens):
        gb = self.basis(gens)
        cof = gb.member(f)
        if cof is None:
            return None
        return cof[: len(gens)]

    def _with_t(self, gens, g, key):
        T = self._tring
        t = T.var("_t")
        polys = [self.ring.embed(x, T) for x in list(gens) + list(self.relations)]
        polys.append(T.sub(T.one(), T.mul(t, self.ring.embed(g, T))))
        return groebner_basis(T, polys, key=key, degree_cap=self.degree_cap)

    def in_radical(self, f, gens):
        if self.is_zero(f):
            return True
        gb = self._with_t(gens, f, None)
        return gb.is_unit_ideal() or self._unit_in(gb)

    def _unit_in(self, gb):
        T = gb.ring
        return gb.member(T.one()) is not None

    def saturate(self, gens, g):
        R = self.ring
        n = len(gens)
        if self.is_zero(g):
            return [SaturationGen(R.one(), 1, [R.zero()] * n)]
        gb = self._with_t(gens, g, elimination_key(1))
        T = gb.ring
        out = []
        for poly, cof in zip(gb.polys, gb.cofactors):
            if any(e[0] for e in poly.terms):
                continue
            s = R.make({e[1:]: c for e, c in poly.terms.items()})
            if self.is_zero(s):
                continue
            D = max((T.degree_in(c, 0) for c in cof[:-1] if c.terms), default=0)
            D = max(D, 0)
            gpow = [R.pow(g, k) for k in range(D + 1)]
            hs = []
            for c in cof[:n]:
                h = R.zero()
                for e, x in c.terms.items():
                    mono = R.make({e[1:]: x})
                    h = R.add(h, R.mul(mono, gpow[D - e[0]]))
                hs.append(h)
            out.append(SaturationGen(s, D, hs))
        return out


class ExtensionOracle(IdealOracle):
    """S = R[Y]/(f) through the polynomial model R[Y] (or K[t..., Y]) modulo f."""

    def __init__(self, ring: ExtensionRing, degree_cap=None):
        super().__init__(ring, degree_cap)
        self.inner = PolyOracle(ring.flat, [ring.to_flat_poly_of_f()], degree_cap)

    def _in(self, xs):
        return [self.ring.to_flat(x) for x in xs]

    def member(self, f, gens):
        cof = self.inner.member(self.ring.to_flat(f), self._in(gens))
        if cof is None:
            return None
        return [self.ring.from_flat(c) for c in cof]

    def in_radical(self, f, gens):
        return self.inner.in_radical(self.ring.to_flat(f), self._in(gens))

    def saturate(self, gens, g):
        S = self.ring
        out = []
        for sg in self.inner.saturate(self._in(gens), S.to_flat(g)):
            out.append(SaturationGen(S.from_flat(sg.element), sg.exponent, [S.from_flat(c) for c in sg.cofactors]))
        return out


def oracle_for(R: Ring, degree_cap: int | None = None) -> IdealOracle:
    if isinstance(R, IntegerRing):
        return IntegerOracle(R, degree_cap)
    if isinstance(R, ModularRing):
        return ModularOracle(R, degree_cap)
    if isinstance(R, PolynomialRing):
        return PolyOracle(R, (), degree_cap)
    if isinstance(R, ExtensionRing):
        return ExtensionOracle(R, degree_cap)
    raise UnsupportedRing(f"no ideal oracle for {R}")


def _check(R, lhs, cofs, gens, what):
    if not R.eq(lhs, R.dot(cofs, gens)):
        raise AssertionError(f"{what} witness failed to re-evaluate")


def ideal_member(f, I: Ideal, oracle: IdealOracle | None = None) -> MembershipWitness | None:
    """Witness that f lies in I, or None."""
    R = I.ring
    oracle = oracle or oracle_for(R)
    cof = oracle.member(f, I.gens)
    if cof is None:
        return None
    _check(R, f, cof, I.gens, "membership")
    return MembershipWitness(cof, 1, list(I.gens))


def radical_member(f, I: Ideal, oracle: IdealOracle | None = None):
    """(n, witness) with f^n in I and n minimal, or None when f is not in the radical."""
    R = I.ring
    oracle = oracle or oracle_for(R)
    res = oracle.radical_power(f, I.gens)
    if res is None:
        return None
    n, cof = res
    _check(R, R.pow(f, n), cof, I.gens, "radical membership")
    return n, MembershipWitness(cof, n, list(I.gens))


def saturate(I: Ideal, g, oracle: IdealOracle | None = None) -> Ideal:
    """Generators of (I : g^infinity)."""
    R = I.ring
    if R.is_zero(g):
        raise ZeroDenominator("cannot saturate by zero")
    oracle = oracle or oracle_for(R)
    gens = []
    for sg in oracle.saturate(I.gens, g):
        _check(R, R.mul(R.pow(g, sg.exponent), sg.element), sg.cofactors, I.gens, "saturation")
        gens.append(sg.element)
    return Ideal(R, gens)


def same_ideal(I: Ideal, J: Ideal, oracle: IdealOracle | None = None) -> bool:
    """Mutual membership of generators."""
    oracle = oracle or oracle_for(I.ring)
    return all(oracle.member(g, J.gens) is not None for g in I.gens) and all(
        oracle.member(g, I.gens) is not None for g in J.gens
    )
