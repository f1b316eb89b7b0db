"""Brute-force oracles used to derive the values frozen in the tests.

They share no code with the package: plain loops over small search spaces,
truth tables for lattices, and sympy for polynomial algebra.
"""

from __future__ import annotations

from itertools import product
from math import gcd

import sympy


def zn_pseudo_singular(n, seq, mbound=4):
    """All (m, a) with x1^m1(x2^m2(...(1 + a_l x_l)...) + a1 x1) == 0 mod n."""
    hits = []
    L = len(seq)
    for ms in product(range(mbound + 1), repeat=L):
        for as_ in product(range(n), repeat=L):
            acc = 1
            for x, m, a in zip(reversed(seq), reversed(ms), reversed(as_)):
                acc = pow(x, m, n) * (acc + a * x) % n
            if acc % n == 0:
                hits.append((ms, as_))
    return hits


def int_pseudo_singular(seq, mbound=3, abound=3):
    hits = []
    L = len(seq)
    for ms in product(range(mbound + 1), repeat=L):
        for as_ in product(range(-abound, abound + 1), repeat=L):
            acc = 1
            for x, m, a in zip(reversed(seq), reversed(ms), reversed(as_)):
                acc = x**m * (acc + a * x)
            if acc == 0:
                hits.append((ms, as_))
    return hits


def zn_power_witness(n, x):
    """Least k with x^k = a x^(k+1) mod n for some a, and such an a."""
    for k in range(n + 1):
        for a in range(n):
            if (pow(x, k, n) - a * pow(x, k + 1, n)) % n == 0:
                return k, a
    return None


def int_radical_exponent(f, m, kmax=12):
    for k in range(1, kmax + 1):
        if m and f**k % m == 0:
            return k
    return None


def int_saturation(m, g):
    """Generator of (m : g^oo) in Z by stripping the primes of g from m."""
    m = abs(m)
    while True:
        d = gcd(m, g)
        if d == 1:
            return m
        m //= d


def sympy_member(f, gens, vars_, domain="QQ"):
    if not gens:
        return sympy.expand(f) == 0
    G = sympy.groebner(gens, *vars_, order="grevlex", domain=domain)
    return G.contains(f)


def sympy_charpoly(matrix):
    T = sympy.Symbol("T")
    return sympy.Matrix(matrix).charpoly(T).all_coeffs()


# -- lattices by truth tables ------------------------------------------------------------------


def models(gens, axioms):
    """All 0/1 assignments (as sets of true generators) satisfying each axiom A |- B."""
    out = []
    for bits in product((0, 1), repeat=len(gens)):
        true = {g for g, b in zip(gens, bits) if b}
        if all(not set(l) <= true or set(r) & true for l, r in axioms):
            out.append(frozenset(true))
    return out


def dnf_true(X, true):
    return any(set(block) <= true for block in X)


def semantic_leq(ms, X, Y):
    return all(dnf_true(Y, t) for t in ms if dnf_true(X, t))


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def divisor_presentation(n):
    """Divisors of n other than 1 and n as generators, with the order and meet/join sequents."""
    ds = [d for d in divisors(n) if d not in (1, n)]
    names = [str(d) for d in ds]
    ax = []
    for a in ds:
        for b in ds:
            if a != b and b % a == 0:
                ax.append(([str(a)], [str(b)]))
            if a < b:
                g = gcd(a, b)
                l = a * b // g
                ax.append(([str(a), str(b)], [str(g)] if g != 1 else []))
                ax.append(([str(l)] if l != n else [], [str(a), str(b)]))
    return names, ax


# -- prime chains of Z ----------------------------------------------------------------------


def _small_primes(xs):
    out = set()
    for x in xs:
        x = abs(x)
        p = 2
        while x > 1 and p * p <= x:
            while x % p == 0:
                out.add(p)
                x //= p
            p += 1
        if x > 1:
            out.add(x)
    return sorted(out)


def int_chain_realizable(levels):
    """Whether primes P_0 <= ... <= P_l of Z exist with J_k in P_k and U_k disjoint from P_k.

    levels is a list of (J, U) integer lists. Primes of Z are (0) and (p); a
    prime dividing no listed element stands in for all the others.
    """
    vals = [x for J, U in levels for x in list(J) + list(U)]
    ps = _small_primes([v for v in vals if v])
    fresh = max(ps + [1]) + 1
    while any(fresh % p == 0 for p in range(2, fresh)):
        fresh += 1
    cands = [0] + ps + [fresh]

    def fits(p, J, U):
        inside = (lambda x: x == 0) if p == 0 else (lambda x: x % p == 0)
        return all(inside(j) for j in J) and not any(inside(u) for u in U)

    def up(p, q):
        return p == 0 or p == q

    for choice in product(cands, repeat=len(levels)):
        if all(fits(p, J, U) for p, (J, U) in zip(choice, levels)) and all(up(a, b) for a, b in zip(choice, choice[1:])):
            return True
    return False
