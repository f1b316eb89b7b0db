from __future__ import annotations

from itertools import product
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from krulldim.errors import CapExceeded, InputError
from krulldim.lattice import (
    KrGenerator,
    Lattice,
    Presentation,
    bar,
    boolean_envelope,
    chain_presentation,
    close_entailment,
    complement,
    elementary_lattice_chain,
    free_presentation,
    is_boolean,
    kr_axiom_presentation,
    kr_lattice,
    lattice_chain_collapses,
    lattice_dim_at_most,
    poset_presentation,
    prime_collapse,
    quotient,
    saturate_prime,
    spec_enumerate,
    trivial_presentation,
)

from brute import divisor_presentation, divisors, models, semantic_leq

CHAIN3 = Lattice(chain_presentation(3))
CHAIN4 = Lattice(chain_presentation(4))


def test_closure_reflexivity_only():
    t = close_entailment(free_presentation(["a"]))
    assert t.pairs == [] and not t.trivial
    assert t.entails_names(["a"], ["a"])
    assert not t.entails_names(["a"], [])


def test_closure_single_axiom():
    t = close_entailment(Presentation(["a", "b"], [(["a"], ["b"])]))
    assert t.entails_names(["a"], ["b"])
    assert t.entails_names(["a", "b"], ["b"])
    assert not t.entails_names(["b"], ["a"])


def test_closure_degenerate():
    t = close_entailment(Presentation(["a"], [([], [])]))
    assert t.trivial
    assert t.entails_names([], [])


def test_closure_cap():
    with pytest.raises(CapExceeded):
        close_entailment(free_presentation([f"g{i}" for i in range(5)]), cap=3)


def test_leq_examples():
    L = CHAIN3
    assert L.leq(L.zero(), L.gen("a"))
    assert L.leq(L.gen("a"), L.one())
    assert not L.leq(L.one(), L.gen("a"))
    x = L.gen("a")
    assert L.leq(x, x)


def test_join_meet_units():
    L = Lattice(free_presentation(["a", "b"]))
    x = L.gen("a")
    assert L.eq(L.join(L.zero(), x), x)
    assert L.eq(L.meet(L.one(), x), x)
    assert L.meet(L.gen("a"), L.gen("b")) == L.meet_gens(["a", "b"])
    assert L.fmt(L.meet(L.gen("a"), L.gen("b"))) == [["a", "b"]]


def test_parse_rejects_bad_elements():
    with pytest.raises(InputError):
        CHAIN3.parse(["a"])
    with pytest.raises(InputError):
        CHAIN3.parse([["z"]])


def test_quotient_examples():
    L = CHAIN3
    Q, proj = quotient(L)
    assert len(Q.elements()) == len(L.elements()) == 3
    Q, proj = quotient(L, J=[L.gen("a")])
    assert len(Q.elements()) == 2
    Q, proj = quotient(L, J=[L.gen("a")], U=[L.gen("a")])
    assert Q.table.trivial


def test_prime_collapse_examples():
    L = CHAIN3
    assert not prime_collapse(L, [L.zero()], [L.one()])
    assert prime_collapse(L, [L.gen("a")], [L.gen("a")])
    F = Lattice(free_presentation(["a", "b"]))
    assert not prime_collapse(F, [F.gen("a")], [F.gen("b")])


def test_saturate_prime_pair():
    L = CHAIN3
    a = L.gen("a")
    assert saturate_prime(L, [], [], a) == (False, False)


def test_chain_collapse_examples():
    L = CHAIN3
    a = L.gen("a")
    assert lattice_chain_collapses(L, [([a], [a])]) == []
    assert lattice_chain_collapses(L, [([], [a]), ([a], [])]) is None
    assert lattice_chain_collapses(L, [([], [a]), ([a], [a])]) is not None
    with pytest.raises(InputError):
        lattice_chain_collapses(L, [])


def test_kr_zero_is_identity():
    for L in (CHAIN3, CHAIN4, Lattice(free_presentation(["a", "b"]))):
        K = Lattice(kr_lattice(L, 0).materialize())
        assert len(K.elements()) == len(L.elements())
        for s in L.gens:
            for t in L.gens:
                assert K.leq(K.gen(f"{s}@0"), K.gen(f"{t}@0")) == L.leq(L.gen(s), L.gen(t))


def test_kr_of_two():
    two = Lattice(free_presentation([]))
    for ell in range(3):
        assert len(Lattice(kr_lattice(two, ell).materialize()).elements()) == 2


def _phi(L, K, X, i):
    return K.elem([[f"{s}@{i}" for s in L.P.names(m)] for m in X])


def test_kr_morphisms_injective():
    L = CHAIN3
    K = Lattice(kr_lattice(L, 1).materialize())
    els = L.elements()
    for i in range(2):
        for x in els:
            for y in els:
                if K.eq(_phi(L, K, x, i), _phi(L, K, y, i)):
                    assert L.eq(x, y)


def test_kr_generator_names():
    assert KrGenerator(2, "a").name == "a@2"
    assert kr_axiom_presentation(CHAIN3, 1).gens == ("a@0", "a@1")


def test_dim_examples():
    two = Lattice(free_presentation([]))
    assert lattice_dim_at_most(two, 0)[0]
    ok, _ = lattice_dim_at_most(CHAIN3, 0)
    assert not ok
    ok, wit = lattice_dim_at_most(CHAIN3, 1)
    assert ok
    (a1, a2), = wit.values()
    assert CHAIN3.eq(a1, CHAIN3.zero()) and CHAIN3.eq(a2, CHAIN3.one())
    trivial = Lattice(trivial_presentation())
    assert lattice_dim_at_most(trivial, -1)[0]
    assert not lattice_dim_at_most(two, -1)[0]


def test_envelope_examples():
    two = Lattice(free_presentation([]))
    assert len(boolean_envelope(two).elements()) == 2
    E = boolean_envelope(CHAIN3)
    assert len(E.elements()) == 4
    assert is_boolean(E)
    x, y = E.gen("a"), E.gen(bar("a"))
    assert E.eq(E.meet(x, y), E.zero())
    assert complement(E, x) == y


def test_spec_examples():
    assert len(spec_enumerate(CHAIN3)) == 2
    assert len(spec_enumerate(CHAIN4)) == 3
    assert spec_enumerate(Lattice(trivial_presentation())) == []
    pts = spec_enumerate(CHAIN4)
    assert [p.filter for p in pts] == [(), ("b",), ("a", "b")]


# -- conservativity against truth tables --------------------------------------------------------


def _check_conservative(L):
    ms = models(L.P.gens, [(sorted(l), sorted(r)) for l, r in L.P.axioms])
    els = L.elements()
    fmt = [L.fmt(x) for x in els]
    for x, fx in zip(els, fmt):
        for y, fy in zip(els, fmt):
            assert L.leq(x, y) == semantic_leq(ms, fx, fy)
    return len(els)


def test_divisor_lattice_60():
    names, ax = divisor_presentation(60)
    L = Lattice(Presentation(names, ax))
    assert _check_conservative(L) == len(divisors(60))
    for a in names:
        for b in names:
            assert L.leq(L.gen(a), L.gen(b)) == (int(b) % int(a) == 0)


def test_divisor_lattice_via_poset_presentation():
    ds = [str(d) for d in divisors(60)]
    P = poset_presentation(
        ds,
        lambda x, y: int(y) % int(x) == 0,
        meets=lambda x, y: str(gcd(int(x), int(y))),
        joins=lambda x, y: str(int(x) * int(y) // gcd(int(x), int(y))),
        bottom="1",
        top="60",
    )
    L = Lattice(P)
    for a in ds:
        for b in ds:
            assert L.leq(L.gen(a), L.gen(b)) == (int(b) % int(a) == 0)


def test_free_lattice_three_generators():
    L = Lattice(free_presentation(["a", "b", "c"]))
    assert _check_conservative(L) == 20


# -- properties ---------------------------------------------------------------------------------

CORPUS = {
    "2": Lattice(free_presentation([])),
    "chain3": CHAIN3,
    "chain4": CHAIN4,
    "chain5": Lattice(chain_presentation(5)),
    "free2": Lattice(free_presentation(["a", "b"])),
    "free3": Lattice(free_presentation(["a", "b", "c"])),
    "env3": boolean_envelope(CHAIN3),
    "div12": Lattice(Presentation(*divisor_presentation(12))),
    "div30": Lattice(Presentation(*divisor_presentation(30))),
    "div60": Lattice(Presentation(*divisor_presentation(60))),
}


def _pick(L, i):
    els = L.elements()
    return els[i % len(els)]


@settings(max_examples=500, deadline=None)
@given(st.sampled_from(sorted(CORPUS)), st.integers(0, 99), st.integers(0, 99), st.integers(0, 99))
def test_cut_rule(name, i, j, k):
    L = CORPUS[name]
    x, a, b = _pick(L, i), _pick(L, j), _pick(L, k)
    if L.leq(L.meet(x, a), b) and L.leq(a, L.join(x, b)):
        assert L.leq(a, b)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(sorted(CORPUS)), st.integers(0, 99), st.integers(0, 99), st.integers(0, 99))
def test_distributivity(name, i, j, k):
    L = CORPUS[name]
    x, y, z = _pick(L, i), _pick(L, j), _pick(L, k)
    assert L.eq(L.meet(x, L.join(y, z)), L.join(L.meet(x, y), L.meet(x, z)))


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from(sorted(CORPUS)),
    st.lists(st.integers(0, 99), max_size=2),
    st.lists(st.integers(0, 99), max_size=2),
    st.integers(0, 99),
)
def test_simultaneous_prime_collapse(name, js, us, k):
    L = CORPUS[name]
    J = [_pick(L, i) for i in js]
    U = [_pick(L, i) for i in us]
    x = _pick(L, k)
    if prime_collapse(L, J, U + [x]) and prime_collapse(L, J + [x], U):
        assert prime_collapse(L, J, U)


def test_conjugation_in_quotients():
    for name in ("chain3", "chain4", "free2", "div12"):
        L = CORPUS[name]
        els = L.elements()
        for j in els:
            for u in els:
                Q, proj = quotient(L, J=[j], U=[u])
                if Q.table.trivial:
                    continue
                I = [x for x in els if Q.eq(proj(x), Q.zero())]
                F = [x for x in els if Q.eq(proj(x), Q.one())]
                for x in els:
                    for f in F:
                        if any(L.eq(L.meet(x, f), i) for i in I):
                            assert any(L.eq(x, i) for i in I)
                    for i in I:
                        if any(L.eq(L.join(x, i), f) for f in F):
                            assert any(L.eq(x, f) for f in F)


def _gen_chains(gens, levels):
    subsets = [tuple(s for s, b in zip(gens, bits) if b) for bits in product((0, 1), repeat=len(gens))]
    for combo in product(product(subsets, subsets), repeat=levels):
        yield list(combo)


@pytest.mark.parametrize("name", ["chain3", "chain4"])
def test_kr_consistency(name):
    L = CORPUS[name]
    ell = 1
    K = kr_lattice(L, ell)
    A = Lattice(kr_axiom_presentation(L, ell))
    for chain in _gen_chains(L.gens, ell + 1):
        direct = lattice_chain_collapses(L, [([L.gen(s) for s in J], [L.gen(s) for s in U]) for J, U in chain]) is not None
        lhs = [f"{s}@{i}" for i, (_, U) in enumerate(chain) for s in U]
        rhs = [f"{s}@{i}" for i, (J, _) in enumerate(chain) for s in J]
        lazy = K.entails([KrGenerator(i, s) for i, (_, U) in enumerate(chain) for s in U], [KrGenerator(i, s) for i, (J, _) in enumerate(chain) for s in J])
        image = prime_collapse(A, [A.gen(r) for r in rhs], [A.gen(l) for l in lhs])
        assert direct == lazy == image


def test_kr_quotient_recovers_saturation():
    L = CHAIN4
    ell = 1
    A = Lattice(kr_axiom_presentation(L, ell))
    a, b = L.gen("a"), L.gen("b")
    chain = [([], [b]), ([a], [])]
    assert lattice_chain_collapses(L, chain) is None
    J = [A.gen("a@1")]
    U = [A.gen("b@0")]
    Q, proj = quotient(A, J=J, U=U)
    for k in range(ell + 1):
        for x in L.elements():
            psi_zero = Q.eq(proj(_phi(L, A, x, k)), Q.zero())
            ext = [list(lv) for lv in chain]
            ext[k] = (chain[k][0], chain[k][1] + [x])
            assert psi_zero == (lattice_chain_collapses(L, ext) is not None)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_dim_zero_iff_boolean(name):
    L = CORPUS[name]
    if len(L.elements()) > 20:
        return
    assert lattice_dim_at_most(L, 0)[0] == is_boolean(L)


def test_dim_generator_sequences_match_all_elements():
    # checking generator sequences agrees with checking every element sequence
    for name in ("chain3", "chain4", "free2", "div12"):
        L = CORPUS[name]
        for d in (0, 1, 2):
            full = all(
                lattice_chain_collapses(L, elementary_lattice_chain(L, list(xs))) is not None
                for xs in product(L.elements(), repeat=d + 1)
            )
            assert lattice_dim_at_most(L, d)[0] == full


def test_spec_points_are_morphisms():
    for name in ("chain4", "free2", "div12", "env3"):
        L = CORPUS[name]
        for p in spec_enumerate(L):
            true = set(p.filter)
            for x in L.elements():
                for y in L.elements():
                    v = lambda X: any(set(L.P.names(m)) <= true for m in X)
                    assert v(L.meet(x, y)) == (v(x) and v(y))
                    assert v(L.join(x, y)) == (v(x) or v(y))
