from __future__ import annotations

import random

import pytest

from krulldim.chain import IdealisticChain, IdealisticPrime
from krulldim.collapse import PseudoSingularCertificate, chain_collapses, pseudo_regular, pseudo_singular
from krulldim.errors import (
    CoefficientEscapesIdeal,
    MalformedWitness,
    NoUnitCoefficient,
    NotACollapse,
    NotAnnihilator,
    NotARelation,
    NotVariableTail,
    PreconditionBreach,
)
from krulldim.extensions import (
    charpoly_low_first,
    collapse_above,
    field_dependent_column,
    gd_monic_gcd,
    going_down_flat,
    going_down_step,
    going_up_transfer,
    integral_alist,
    lift_chain,
    lying_over,
    minors_decompose,
    restrict_certificate,
    trace_ideal,
    trace_prime,
)
from krulldim.ideals import oracle_for
from krulldim.ring import GF, QQ, ZZ, ModularRing, PolynomialRing, extension_make

from brute import int_chain_realizable, zn_pseudo_singular

ZI = extension_make({"base": {"ring": "Z"}, "monic": "Y^2+1"})
ZR2 = extension_make({"base": {"ring": "Z"}, "monic": "Y^2-2"})
QT = PolynomialRing(QQ, ["t"])
QT_ROOT = extension_make({"base": {"ring": "Poly", "coeff": "Q", "vars": ["t"]}, "monic": "Y^2-t"})


# -- traces ------------------------------------------------------------------------------------


def test_trace_of_y_minus_one():
    gens = trace_ideal(ZI, [ZI.parse("Y-1")])
    assert oracle_for(ZZ).member(2, gens) is not None
    assert oracle_for(ZZ).member(1, gens) is None


def test_trace_of_base_ideal():
    assert trace_ideal(ZI, [ZI.from_int(6)]) == [6]


def test_trace_monoid():
    P = IdealisticPrime([ZI.parse("Y-1")], [ZI.gen()])
    tr = trace_prime(ZI, P)
    assert tr.U == ()
    tr = trace_prime(ZI, IdealisticPrime([], [ZI.from_int(3)]))
    assert tr.U == (3,)


def test_trace_monoid_probes():
    # 3 is outside (1+i), so it lies in the saturated monoid of ((Y-1), 1)
    tr = trace_prime(ZI, IdealisticPrime([ZI.parse("Y-1")], []), probes=[3, 4])
    assert 3 in tr.U and 4 not in tr.U


# -- lying over ------------------------------------------------------------------------------------


def test_lying_over_trivial():
    lo = lying_over(ZR2, [2], 2, 1, [(2, ZR2.one())])
    assert lo.witness.check(ZZ, 2)


def test_lying_over_through_module():
    # 2 = 2 Y + 2 (1 - Y) with Y = sqrt 2: the span of {1, Y, 1 - Y} is closed
    lo = lying_over(ZR2, [2], 2, 1, [(2, ZR2.gen()), (2, ZR2.parse("1-Y"))])
    assert lo.module == "witness"
    assert lo.witness.check(ZZ, 2)
    assert all(c % 2 == 0 for c in lo.charpoly[:-1])


def test_lying_over_power_basis():
    # 6^1 = 3 * (sqrt 2)^2 with 3 in <3>
    lo = lying_over(ZR2, [3], 6, 1, [(3, ZR2.parse("Y^2"))])
    assert lo.witness.check(ZZ, 6)


def test_lying_over_rejects_bad_witness():
    with pytest.raises(MalformedWitness):
        lying_over(ZR2, [2], 3, 1, [(3, ZR2.one())])
    with pytest.raises(MalformedWitness):
        lying_over(ZR2, [2], 2, 1, [(2, ZR2.gen())])


# -- going up ------------------------------------------------------------------------------------


def test_going_up_examples():
    g = going_up_transfer(ZI, None, IdealisticChain.elementary(ZZ, [2, 3]))
    assert g.in_S and g.in_R and g.certificate is not None
    g = going_up_transfer(ZI, None, IdealisticChain.elementary(ZZ, [2]))
    assert not g.in_S and not g.in_R
    g = going_up_transfer(ZI, None, IdealisticChain(ZZ, [IdealisticPrime([1], [])]))
    assert g.in_S and g.in_R


def test_going_up_lying_over_certificate():
    g = going_up_transfer(ZR2, None, IdealisticChain(ZZ, [IdealisticPrime([4], [2])]))
    assert g.in_S and g.in_R
    assert g.lying_over is not None and g.lying_over.witness.check(ZZ, 2)


def test_going_up_with_prefix_in_extension():
    C1 = IdealisticChain(ZI, [IdealisticPrime([ZI.parse("Y-1")], [])])
    C2 = IdealisticChain(ZZ, [IdealisticPrime([], [2])])
    g = going_up_transfer(ZI, C1, C2)
    assert g.in_S and g.in_R
    assert oracle_for(ZZ).member(2, list(g.trace.primes[0].J)) is not None


def _rand_int_chain(rng):
    pool = [0, 1, -1, 2, 3, 4, 5, 6, 9, 10, 12, 15]
    levels = [([rng.choice(pool) for _ in range(rng.randint(0, 2))], [rng.choice(pool) for _ in range(rng.randint(0, 1))]) for _ in range(rng.randint(1, 3))]
    return levels, IdealisticChain(ZZ, [IdealisticPrime(J, U) for J, U in levels])


@pytest.mark.parametrize("S", [ZI, ZR2], ids=["Z[i]", "Z[sqrt2]"])
def test_going_up_random_chains(S):
    rng = random.Random(3 if S is ZI else 4)
    ro, so = oracle_for(ZZ), oracle_for(S)
    for _ in range(50):
        levels, C = _rand_int_chain(rng)
        g = going_up_transfer(S, None, C)
        expect = not int_chain_realizable(levels)
        assert g.in_S == g.in_R == expect
        # saturation membership agrees on probes of the base
        L = lift_chain(S, C)
        for _ in range(10):
            k, r = rng.randrange(C.length + 1), rng.randint(-6, 12)
            assert chain_collapses(C.with_added(k, J=[r]), ro) == chain_collapses(L.with_added(k, J=[S.from_int(r)]), so)
            assert chain_collapses(C.with_added(k, U=[r]), ro) == chain_collapses(L.with_added(k, U=[S.from_int(r)]), so)


def test_dimension_bound_transfer():
    xs = [ZI.parse(s) for s in ["Y", "1+Y", "2", "3", "2+Y", "3*Y", "1-2*Y", "5", "Y-3", "4+Y", "6", "2*Y"]]
    tests = [(xs[i], xs[(5 * i + 1) % 12]) for i in range(12)]
    for seq in tests:
        ps = pseudo_singular(list(seq), ZI)
        assert ps is not None and ps.check(ZI, list(seq))
    for a in [2, 3, 6, 10, -4]:
        assert pseudo_regular([a], ZZ)
        assert pseudo_regular([ZI.from_int(a)], ZI)


# -- monic gcd and going down ------------------------------------------------------------------


def test_gd_monic_gcd_examples():
    x = ZR2.gen()
    assert gd_monic_gcd(ZR2, [2], x, [-2, 0, 1], [0, -2, 0, 1]) == [-2, 0, 1]
    assert gd_monic_gcd(ZR2, [2], x, [-2, 0, 1], [-2, 0, 1]) == [-2, 0, 1]
    with pytest.raises(NotAnnihilator):
        gd_monic_gcd(ZR2, [2], x, [-2, 0, 1], [-1, 1])
    with pytest.raises(CoefficientEscapesIdeal):
        gd_monic_gcd(ZR2, [3], x, [-2, 0, 1], [-2, 0, 1])


def test_going_down_first_case():
    P0 = IdealisticPrime([2], [3])
    Q1 = IdealisticPrime([ZR2.from_int(2)], [ZR2.parse("2*Y")])
    v1 = ZR2.parse("2*Y")
    gd = going_down_step(ZR2, P0, Q1, 3, v1, [(2, ZR2.parse("3*Y"))])
    assert gd.check(ZR2, v1)
    assert [r["first_case"] for r in gd.rounds] == [True]
    assert gd.certificate is not None


def test_going_down_second_case():
    P0 = IdealisticPrime([2], [3])
    Q1 = IdealisticPrime([ZR2.from_int(2)], [ZR2.from_int(2)])
    v1 = ZR2.from_int(2)
    # B = (T - 2)^2 (T - 5) kills 2 but is not the char poly of 2
    gd = going_down_step(ZR2, P0, Q1, 3, v1, [(2, ZR2.from_int(3))], B=[-20, 24, -9, 1])
    assert gd.check(ZR2, v1)
    assert len(gd.rounds) == 2 and gd.rounds[-1]["first_case"]
    assert gd.rounds[1]["deg_B"] < gd.rounds[0]["deg_B"]


def test_going_down_zero():
    gd = going_down_step(ZR2, IdealisticPrime([2], [3]), IdealisticPrime([ZR2.from_int(2)], []), 3, ZR2.zero(), [])
    assert gd.power == 1 and gd.check(ZR2, ZR2.zero())


def test_going_down_preconditions():
    with pytest.raises(PreconditionBreach):
        going_down_step(extension_make({"base": {"ring": "Z"}, "monic": "Y^2-1"}), IdealisticPrime([2], [3]), IdealisticPrime([], []), 3, 0, [])
    with pytest.raises(PreconditionBreach):
        going_down_step(ZR2, IdealisticPrime([2], [3]), IdealisticPrime([ZR2.from_int(2)], []), 3, ZR2.gen(), [(2, ZR2.gen())])
    with pytest.raises(PreconditionBreach):
        going_down_step(QT_ROOT, IdealisticPrime([QT.var("t")], []), IdealisticPrime([], []), 1, QT_ROOT.zero(), [])


def gd_instance_int(rng):
    w = ZR2.element([rng.randint(-3, 3), rng.choice([-2, -1, 1, 2])])
    u0 = rng.choice([1, 3, 5, 7, -3, 9])
    v1 = ZR2.scale(w, 2)
    pairs = [(2, ZR2.scale(w, u0))]
    B = None
    if rng.random() < 0.5:
        c = rng.randint(-3, 3)
        chi = charpoly_low_first(ZZ, ZR2.mult_matrix(v1))
        # chi * (T - c) also kills v1 and forces the gcd round
        B = [-c * chi[0], chi[0] - c * chi[1], chi[1] - c, 1]
    return IdealisticPrime([2], [u0]), IdealisticPrime([ZR2.from_int(2)], [v1]), u0, v1, pairs, B


def gd_instance_poly(rng):
    t = QT.var("t")
    w = QT_ROOT.element([QT.from_int(rng.randint(-2, 2)), QT.sum([QT.from_int(rng.choice([1, 2, -1])), QT.mul(QT.from_int(rng.randint(0, 1)), t)])])
    u0 = QT.add(QT.from_int(rng.choice([1, 2, 3])), QT.mul(QT.from_int(rng.randint(0, 2)), t))
    v1 = QT_ROOT.scale(w, t)
    pairs = [(t, QT_ROOT.scale(w, u0))]
    return IdealisticPrime([t], [u0]), IdealisticPrime([QT_ROOT.embed(t)], [v1]), u0, v1, pairs


def test_going_down_random_integers():
    rng = random.Random(11)
    for _ in range(10):
        P0, Q1, u0, v1, pairs, B = gd_instance_int(rng)
        gd = going_down_step(ZR2, P0, Q1, u0, v1, pairs, B=B)
        assert gd.check(ZR2, v1)
        degs = [r["deg_B"] for r in gd.rounds]
        assert len(gd.rounds) == (1 if B is None else 2)
        assert all(a > b for a, b in zip(degs, degs[1:]))


def test_going_down_random_polynomials():
    rng = random.Random(12)
    for _ in range(10):
        P0, Q1, u0, v1, pairs = gd_instance_poly(rng)
        gd = going_down_step(QT_ROOT, P0, Q1, u0, v1, pairs, assume_domain=True)
        assert gd.check(QT_ROOT, v1)
        assert gd.certificate is not None


# -- flat going down -----------------------------------------------------------------------------


ZX = PolynomialRing(ZZ, ["X"])


def test_flat_example():
    fd = going_down_flat(ZX, IdealisticPrime([4], [2]), 2, ZX.parse("-2*X"), [(4, ZX.parse("X"))])
    assert fd.M == [[-2], [1]]
    assert fd.m0 == [-2]


def test_flat_constants_diagonal():
    fd = going_down_flat(ZX, IdealisticPrime([2], [3]), 3, ZX.from_int(2), [(2, ZX.from_int(-3))])
    assert fd.M == [[2], [-3]]


def test_flat_not_a_relation():
    with pytest.raises(NotARelation):
        going_down_flat(ZX, IdealisticPrime([2], [3]), 3, ZX.from_int(2), [(2, ZX.from_int(3))])


def flat_instance(rng):
    w = ZX.make({(e,): rng.randint(-3, 3) for e in range(rng.randint(1, 3))})
    if ZX.is_zero(w):
        w = ZX.one()
    u0 = rng.choice([1, 3, 5, -7])
    g = rng.choice([2, 4, 6])
    v1 = ZX.mul(ZX.from_int(g), w)
    return IdealisticPrime([2], [u0]), u0, v1, [(g, ZX.mul(ZX.from_int(-u0), w))]


def test_flat_random():
    rng = random.Random(5)
    for _ in range(20):
        P0, u0, v1, pairs = flat_instance(rng)
        fd = going_down_flat(ZX, P0, u0, v1, pairs)
        assert all(m % 2 == 0 for m in fd.m0)
        assert ZX.eq(v1, ZX.sum(ZX.mul(ZX.from_int(m), b) for m, b in zip(fd.m0, fd.basis)))


# -- collapse above the base -----------------------------------------------------------------------


def test_collapse_above_empty_list():
    C = IdealisticChain.elementary(ZI, [ZI.from_int(2)])
    assert collapse_above(ZI, C, []) == chain_collapses(C) is False
    C = IdealisticChain.elementary(ZI, [ZI.from_int(2), ZI.from_int(3)])
    assert collapse_above(ZI, C, []) is True


def test_integral_alist_gaussian():
    x = ZI.gen()
    ia = integral_alist(ZI, x)
    assert ia.k == 2 and ia.alist == [-1, 0]
    assert len(ia.cases) == 3
    assert all(c.check(ZI, x, ia.relation) for c in ia.cases)
    assert collapse_above(ZI, IdealisticChain.elementary(ZI, [x]), ia.alist)


def test_integral_alist_base_element():
    ia = integral_alist(ZI, ZI.from_int(5))
    assert ia.alist == [5] and len(ia.cases) == 2


def test_integral_alist_no_unit():
    with pytest.raises(NoUnitCoefficient):
        integral_alist(ZR2, ZR2.gen(), annihilator=[-4, 0, 2])


def test_integral_alist_random():
    rng = random.Random(8)
    for _ in range(20):
        x = ZI.element([rng.randint(-4, 4), rng.randint(-4, 4)])
        ia = integral_alist(ZI, x)
        assert sum(c.in_Gprime is not None for c in ia.cases) == len(ia.alist)
        assert collapse_above(ZI, IdealisticChain.elementary(ZI, [x]), ia.alist)


# -- minors --------------------------------------------------------------------------------------


def test_minors_cramer():
    V = [[1, 0, 1], [0, 1, 1]]
    steps = minors_decompose(ZZ, V)
    assert len(steps) == 2**2 - 1 + 1
    first = steps[0]
    assert first.order == 2 and first.mu == -1 and first.col == 0
    # -V1 = V2 - V3, i.e. V3 = V1 + V2
    assert first.coeffs == [1, -1]
    assert field_dependent_column(QQ, V) == (0, [-1, 1])


def test_minors_zero_last_column():
    col, coeffs = field_dependent_column(QQ, [[1, 2, 0], [3, 4, 0]])
    assert col == 2 and coeffs == []


def test_minors_zero_matrix():
    steps = minors_decompose(ZZ, [[0, 0, 0], [0, 0, 0]])
    assert [s.mu for s in steps] == [0, 0, 0, 1]
    assert steps[-1].coeffs == [] and steps[-1].col == 2


def test_minors_residuals_random():
    rng = random.Random(2)
    for _ in range(20):
        n = rng.randint(1, 3)
        V = [[rng.randint(-3, 3) for _ in range(n + 1)] for _ in range(n)]
        steps = minors_decompose(ZZ, V)
        assert len(steps) == 2**n
        for s in steps:
            for r in range(n):
                val = s.mu * V[r][s.col] - sum(c * V[r][s.col + 1 + t] for t, c in enumerate(s.coeffs))
                if r in s.rows:
                    assert val == 0
                else:
                    _, sign, i = next(x for x in s.residuals if x[0] == r)
                    assert val == sign * steps[i].mu and i < s.k


# -- restricting certificates ----------------------------------------------------------------------


def test_restrict_without_base_elements():
    # a sequence of variables alone never collapses, so every input is rejected
    P = PolynomialRing(ModularRing(4), ["X"])
    with pytest.raises(NotACollapse):
        restrict_certificate(P, [P.var("X")], PseudoSingularCertificate((1,), (P.from_int(3),)))


def test_restrict_mod4():
    P = PolynomialRing(ModularRing(4), ["X"])
    out = restrict_certificate(P, [P.from_int(2), P.var("X")], PseudoSingularCertificate((2, 0), (P.zero(), P.zero())))
    assert out.m == (2,) and out.a == (0,)
    assert (2, 0) in [(m[0], a[0]) for m, a in zn_pseudo_singular(4, [2], 2)]


def test_restrict_rejects():
    P = PolynomialRing(ModularRing(4), ["X"])
    with pytest.raises(NotVariableTail):
        restrict_certificate(P, [P.var("X"), P.from_int(2)], PseudoSingularCertificate((2, 0), (P.zero(), P.zero())))
    with pytest.raises(NotACollapse):
        restrict_certificate(P, [P.from_int(2), P.var("X")], PseudoSingularCertificate((1, 0), (P.zero(), P.zero())))


@pytest.mark.parametrize("K", [ModularRing(8), GF(5)], ids=["Z8", "F5"])
def test_restrict_random(K):
    rng = random.Random(K.n)
    P = PolynomialRing(K, ["X"])
    X = P.var("X")
    for _ in range(30):
        a = rng.randrange(K.n)
        m, c0 = rng.choice(zn_pseudo_singular(K.n, [a], 3))
        m, c0 = m[0], c0[0]
        p = rng.randint(0, 2)
        # kill a^m with k so that extra terms vanish
        k = next((v for v in range(1, K.n) if pow(a, m, K.n) * v % K.n == 0), 0)
        b = P.mul(P.from_int(k * rng.randint(0, 3)), X)
        c = P.add(P.mul(P.from_int(c0), P.pow(X, p)), P.mul(P.from_int(k * rng.randint(0, 3)), P.pow(X, p + 1)))
        cert = PseudoSingularCertificate((m, p), (c, b))
        assert cert.check(P, [P.from_int(a), X])
        out = restrict_certificate(P, [P.from_int(a), X], cert)
        assert pow(a, out.m[0], K.n) * (1 + out.a[0] * a) % K.n == 0
