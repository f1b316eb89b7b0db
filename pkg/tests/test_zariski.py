from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from krulldim.chain import IdealisticChain, IdealisticPrime
from krulldim.collapse import chain_collapses
from krulldim.errors import InputError
from krulldim.lattice import spec_enumerate
from krulldim.ring import GF, QQ, ZZ, ModularRing, PolynomialRing
from krulldim.zariski import (
    ZarElement,
    bridge_collapse,
    check_principal,
    lattice_saturate,
    zar_dim_at_most,
    zar_entails,
    zar_eq,
    zar_join,
    zar_lattice,
    zar_leq,
    zar_meet,
)

from brute import int_radical_exponent

QX = PolynomialRing(QQ, ["X"])
QXY = PolynomialRing(QQ, ["X", "Y"])
F5XY = PolynomialRing(GF(5), ["X", "Y"])
Z12 = ModularRing(12)


def test_leq_examples():
    X, Y = QXY.var("X"), QXY.var("Y")
    assert zar_leq(QXY, ZarElement([QXY.mul(X, Y)]), ZarElement([X]))
    assert zar_leq(QX, ZarElement([QX.zero()]), ZarElement([QX.var("X")]))
    assert zar_leq(QX, ZarElement(), ZarElement([QX.var("X")]))


def test_twelve_equals_eighteen():
    assert zar_eq(ZZ, ZarElement([12]), ZarElement([18]))
    # a divides a power of b and conversely
    assert int_radical_exponent(18, 12) is not None and int_radical_exponent(12, 18) is not None
    assert not zar_eq(ZZ, ZarElement([12]), ZarElement([10]))


def test_join_meet():
    a, b = ZarElement([4]), ZarElement([6])
    assert zar_eq(ZZ, zar_join(ZZ, a, b), ZarElement([2]))
    assert zar_eq(ZZ, zar_meet(ZZ, a, b), ZarElement([6]))


def test_element_json():
    x = ZarElement([QX.parse("X^2+1")])
    assert ZarElement.from_json(QX, x.to_json(QX)) == x
    with pytest.raises(InputError):
        ZarElement.from_json(QX, ["X"])


def test_entails_axiom_examples():
    X, Y = QXY.var("X"), QXY.var("Y")
    assert zar_entails(QXY, [X, Y], [QXY.mul(X, Y)])
    assert zar_entails(QXY, [QXY.add(X, Y)], [X, Y])
    assert not zar_entails(QX, [QX.one()], [QX.var("X")])


def test_bridge_mod4():
    b = bridge_collapse(IdealisticChain.elementary(ModularRing(4), [2]))
    assert b.ring_verdict and b.lattice_verdict
    assert b.principal is not None and len(b.principal) == 1


def test_bridge_variables():
    b = bridge_collapse(IdealisticChain.elementary(QXY, [QXY.var("X"), QXY.var("Y")]))
    assert (b.ring_verdict, b.lattice_verdict, b.principal) == (False, False, None)


def test_bridge_trivial_chain():
    b = bridge_collapse(IdealisticChain(ZZ, [IdealisticPrime([1], [1])]))
    assert b.ring_verdict and b.lattice_verdict


def test_dim_reports():
    rep = zar_dim_at_most(Z12, 0, [[2], [3], [6]])
    assert rep.verdict
    assert all(r["lattice"] and r["ring"] for r in rep.rows)
    xs = [QX.parse("X"), QX.parse("X-1"), QX.parse("X^2")]
    rep = zar_dim_at_most(QX, 1, [[a, b] for a in xs for b in xs])
    assert rep.verdict
    rep = zar_dim_at_most(QX, 0, [[QX.parse("X")]])
    assert not rep.verdict
    assert rep.rows[0] == {"seq": [QX.parse("X")], "lattice": False, "ring": False, "a": None}


def test_lattice_saturation_integers():
    assert lattice_saturate(ZZ, [24], 2) == [3]
    assert lattice_saturate(Z12, [0], 2) == [3]


def test_zariski_spectrum_mod12():
    L = zar_lattice(Z12, [2, 3], names=["2", "3"])
    pts = spec_enumerate(L)
    # prime ideals of Z/12 found by brute force: proper ideals (d) with ab in (d) => a or b in (d)
    primes = []
    for d in (2, 3, 4, 6):
        members = {x for x in range(12) if x % d == 0}
        if all(a in members or b in members for a in range(12) for b in range(12) if a * b % 12 in members):
            primes.append(d)
    assert primes == [2, 3]
    expected = sorted(((tuple(str(g) for g in (2, 3) if g % p != 0)), tuple(str(g) for g in (2, 3) if g % p == 0)) for p in primes)
    assert sorted((p.filter, p.ideal) for p in pts) == expected


# -- properties ---------------------------------------------------------------------------------


def _rand(R, rng):
    if R is ZZ:
        return rng.randint(-12, 12)
    if isinstance(R, ModularRing):
        return rng.randrange(R.n)
    mons = [(0,) * R.nvars] + [tuple(1 if i == k else 0 for i in range(R.nvars)) for k in range(R.nvars)]
    mons += [tuple(2 if i == k else 0 for i in range(R.nvars)) for k in range(R.nvars)]
    return R.sum(R.monomial(rng.choice(mons), R.K.from_int(rng.randint(-2, 2))) for _ in range(rng.randint(1, 2)))


@pytest.mark.parametrize("R", [ZZ, Z12, QX, F5XY], ids=["Z", "Z12", "QX", "F5XY"])
def test_zariski_axioms(R):
    rng = random.Random(1)
    assert zar_entails(R, [R.zero()], [])
    assert zar_entails(R, [], [R.one()])
    for _ in range(200):
        x, y = _rand(R, rng), _rand(R, rng)
        assert zar_entails(R, [x, y], [R.mul(x, y)])
        assert zar_entails(R, [R.mul(x, y)], [x])
        assert zar_entails(R, [R.add(x, y)], [x, y])


@pytest.mark.parametrize("R", [ZZ, QX], ids=["Z", "QX"])
def test_zariski_cut(R):
    rng = random.Random(7)
    fired = 0
    for _ in range(100):
        U = [_rand(R, rng) for _ in range(rng.randint(0, 2))]
        J = [_rand(R, rng) for _ in range(rng.randint(0, 2))]
        a = _rand(R, rng)
        if zar_entails(R, U + [a], J) and zar_entails(R, U, J + [a]):
            assert zar_entails(R, U, J)
            fired += 1
    assert fired > 0


def _rand_chain(R, rng):
    levels = rng.randint(1, 3)
    return IdealisticChain(
        R, [IdealisticPrime([_rand(R, rng) for _ in range(rng.randint(0, 1))], [_rand(R, rng) for _ in range(rng.randint(0, 1))]) for _ in range(levels)]
    )


@pytest.mark.parametrize("R", [Z12, QX, F5XY], ids=["Z12", "QX", "F5XY"])
def test_bridge_agrees(R):
    rng = random.Random(13)
    for _ in range(30):
        C = _rand_chain(R, rng)
        b = bridge_collapse(C)
        assert b.ring_verdict == b.lattice_verdict == chain_collapses(C)
        if b.principal is not None:
            assert check_principal(C, b.principal)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 11), min_size=1, max_size=3))
def test_bridge_mod12_elementary(seq):
    b = bridge_collapse(IdealisticChain.elementary(Z12, seq))
    assert b.ring_verdict
