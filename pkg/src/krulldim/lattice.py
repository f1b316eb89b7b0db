"""Finitely presented distributive lattices through entailment relations.

Generators are bits of a mask. A sequent A |- B is a pair of masks; the closure
keeps only the minimal non-tautological sequents (resolution on one generator is
the cut rule, and pairs are kept up to monotonicity). Elements are DNF antichains:
frozensets of masks, each mask read as the meet of its generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import CapExceeded, InputError, InternalMismatch

GEN_CAP = 14
CLAUSE_CAP = 200_000
ELEMENT_CAP = 5000


def bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True)
class Presentation:
    gens: tuple
    axioms: tuple  # of (frozenset lhs names, frozenset rhs names)

    def __init__(self, gens: Sequence[str], axioms: Iterable = ()):
        gens = tuple(gens)
        if len(set(gens)) != len(gens):
            raise InputError("duplicate lattice generators")
        ax = []
        for lhs, rhs in axioms:
            lhs, rhs = frozenset(lhs), frozenset(rhs)
            bad = (lhs | rhs) - set(gens)
            if bad:
                raise InputError(f"axiom uses unknown generators {sorted(bad)}")
            ax.append((lhs, rhs))
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "axioms", tuple(ax))

    def mask(self, names) -> int:
        m = 0
        for s in names:
            try:
                m |= 1 << self.gens.index(s)
            except ValueError:
                raise InputError(f"unknown generator {s!r}") from None
        return m

    def names(self, mask: int) -> list:
        return [self.gens[i] for i in bits(mask)]

    def to_json(self):
        return {
            "gens": list(self.gens),
            "axioms": [{"lhs": sorted(l, key=self.gens.index), "rhs": sorted(r, key=self.gens.index)} for l, r in self.axioms],
        }

    @classmethod
    def from_json(cls, data) -> "Presentation":
        if not isinstance(data, dict) or set(data) - {"gens", "axioms"} or "gens" not in data:
            raise InputError("presentation needs 'gens' and optional 'axioms' only")
        axioms = []
        for i, ax in enumerate(data.get("axioms", [])):
            if not isinstance(ax, dict) or set(ax) - {"lhs", "rhs"}:
                raise InputError(f"axiom {i} must have keys lhs and rhs")
            axioms.append((ax.get("lhs", []), ax.get("rhs", [])))
        return cls(data["gens"], axioms)


def _subsumes(a, b) -> bool:
    return (a[0] & ~b[0]) == 0 and (a[1] & ~b[1]) == 0


class ClosureTable:
    """Minimal derivable sequents of the entailment relation generated by a presentation."""

    def __init__(self, P: Presentation, pairs: list):
        self.presentation = P
        self.pairs = pairs
        self.trivial = (0, 0) in pairs

    @property
    def gens(self):
        return self.presentation.gens

    def entails(self, lhs: int, rhs: int) -> bool:
        if lhs & rhs or self.trivial:
            return True
        return any((l & ~lhs) == 0 and (r & ~rhs) == 0 for l, r in self.pairs)

    def entails_names(self, lhs, rhs) -> bool:
        P = self.presentation
        return self.entails(P.mask(lhs), P.mask(rhs))


def close_entailment(P: Presentation, cap: int | None = None) -> ClosureTable:
    """Saturate the axioms under cut, keeping subsumption-minimal sequents."""
    cap = GEN_CAP if cap is None else cap
    if len(P.gens) > cap:
        raise CapExceeded(f"{len(P.gens)} generators exceed the cap {cap}", {"gens": cap})
    clauses: set = set()

    def insert(c) -> bool:
        if c[0] & c[1]:
            return False
        if any(_subsumes(d, c) for d in clauses):
            return False
        for d in [d for d in clauses if _subsumes(c, d)]:
            clauses.discard(d)
        clauses.add(c)
        if len(clauses) > CLAUSE_CAP:
            raise CapExceeded("entailment closure too large", {"clauses": CLAUSE_CAP})
        return True

    queue = []
    for lhs, rhs in P.axioms:
        c = (P.mask(lhs), P.mask(rhs))
        if insert(c):
            queue.append(c)
    while queue:
        c = queue.pop()
        if c not in clauses:
            continue
        for d in list(clauses):
            if c not in clauses:
                break
            for x, y in ((c, d), (d, c)):
                for b in bits(x[0] & y[1]):
                    bit = 1 << b
                    r = ((x[0] & ~bit) | y[0], (y[1] & ~bit) | x[1])
                    if insert(r):
                        queue.append(r)
    pairs = sorted(clauses, key=lambda c: (bin(c[0] | c[1]).count("1"), c))
    return ClosureTable(P, pairs)


def models(P: Presentation) -> list[int]:
    """All assignments (as masks of true generators) satisfying every axiom."""
    axioms = [(P.mask(l), P.mask(r)) for l, r in P.axioms]
    n = len(P.gens)
    if n > GEN_CAP:
        raise CapExceeded(f"{n} generators exceed the cap {GEN_CAP}", {"gens": GEN_CAP})
    return [m for m in range(1 << n) if all((l & ~m) or (r & m) for l, r in axioms)]


def semantic_entails(ms: list[int], lhs: int, rhs: int) -> bool:
    """lhs |- rhs in every model: the independent route to the closure table."""
    return all((lhs & ~m) or (rhs & m) for m in ms)


# -- elements ------------------------------------------------------------------------------


def _minimize(masks: Iterable[int]) -> list[int]:
    ms = sorted(set(masks), key=lambda m: (bin(m).count("1"), m))
    out: list[int] = []
    for m in ms:
        if not any((o & ~m) == 0 for o in out):
            out.append(m)
    return out


def transversals(X: frozenset) -> list[int]:
    """Minimal clauses of the CNF of the DNF X (one pick per block)."""
    if 0 in X:
        return []
    cur = [0]
    for block in sorted(X):
        cur = _minimize(t | (1 << b) for t in cur for b in bits(block))
    return cur


class Lattice:
    """The distributive lattice of a presentation, with canonical DNF elements."""

    def __init__(self, P: Presentation, table: ClosureTable | None = None, canonical_cap: int = 12):
        self.P = P
        self.table = table or close_entailment(P)
        self.canonical_cap = canonical_cap
        self._trans: dict = {}
        self._canon: dict = {}
        self._elements = None

    @property
    def gens(self):
        return self.P.gens

    # construction
    def zero(self) -> frozenset:
        return frozenset()

    def one(self) -> frozenset:
        return frozenset([0])

    def gen(self, s) -> frozenset:
        return self.canonical(frozenset([self.P.mask([s])]))

    def elem(self, blocks) -> frozenset:
        return self.canonical(frozenset(self.P.mask(b) for b in blocks))

    def meet_gens(self, names) -> frozenset:
        return self.canonical(frozenset([self.P.mask(names)]))

    # order
    def _tr(self, X):
        t = self._trans.get(X)
        if t is None:
            t = transversals(X)
            self._trans[X] = t
        return t

    def leq(self, X, Y) -> bool:
        tr = self._tr(Y)
        return all(self.table.entails(A, T) for A in X for T in tr)

    def eq(self, X, Y) -> bool:
        return self.leq(X, Y) and self.leq(Y, X)

    def join(self, X, Y) -> frozenset:
        return self.canonical(X | Y)

    def meet(self, X, Y) -> frozenset:
        return self.canonical(frozenset(a | b for a in X for b in Y))

    def join_all(self, xs) -> frozenset:
        acc = self.zero()
        for x in xs:
            acc = acc | x
        return self.canonical(acc)

    def meet_all(self, xs) -> frozenset:
        acc = self.one()
        for x in xs:
            acc = frozenset(a | b for a in acc for b in x)
        return self.canonical(acc)

    def canonical(self, X) -> frozenset:
        """Irredundant antichain determined by the element alone.

        Starts from all minimal generator sets whose meet lies below X, then drops
        blocks lying below the join of the remaining ones, largest blocks first.
        """
        X = frozenset(X)
        hit = self._canon.get(X)
        if hit is not None:
            return hit
        tr = self._tr(X)
        n = len(self.gens)
        if n <= self.canonical_cap:
            found: list[int] = []
            for size in range(n + 1):
                for combo in combinations(range(n), size):
                    m = sum(1 << i for i in combo)
                    if any((f & ~m) == 0 for f in found):
                        continue
                    if all(self.table.entails(m, T) for T in tr):
                        found.append(m)
            blocks = found
        else:
            blocks = _minimize(X)
        order = sorted(blocks, key=lambda m: (bin(m).count("1"), self._lexkey(m)), reverse=True)
        keep = list(order)
        for b in order:
            rest = frozenset(x for x in keep if x != b)
            if len(rest) < len(keep) and self.leq(frozenset([b]), rest):
                keep = [x for x in keep if x != b]
        out = frozenset(keep)
        self._canon[X] = out
        self._canon[out] = out
        return out

    def _lexkey(self, m):
        return tuple(self.gens[i] for i in bits(m))

    def sorted_blocks(self, X) -> list[int]:
        return sorted(X, key=lambda m: (bin(m).count("1"), self._lexkey(m)))

    def fmt(self, X) -> list:
        return [list(self._lexkey(m)) for m in self.sorted_blocks(X)]

    def parse(self, data) -> frozenset:
        if not isinstance(data, list) or not all(isinstance(b, list) for b in data):
            raise InputError("lattice elements are lists of lists of generator names")
        return self.elem(data)

    def elements(self) -> list:
        """All elements: closure of 0, 1 and the generators under meet and join."""
        if self._elements is not None:
            return self._elements
        seen = {}
        todo = [self.zero(), self.one()] + [self.gen(s) for s in self.gens]
        todo = [self.canonical(x) for x in todo]
        for x in todo:
            seen.setdefault(x, None)
        frontier = list(seen)
        while frontier:
            new = []
            cur = list(seen)
            for x in frontier:
                for y in cur:
                    for z in (self.meet(x, y), self.join(x, y)):
                        if z not in seen:
                            seen[z] = None
                            new.append(z)
                            if len(seen) > ELEMENT_CAP:
                                raise CapExceeded("too many lattice elements", {"elements": ELEMENT_CAP})
            frontier = new
        els = list(seen)
        els.sort(key=lambda X: (len(X), [self._lexkey(m) for m in self.sorted_blocks(X)]))
        self._elements = els
        return els

    def element_index(self, X) -> int:
        X = self.canonical(X)
        for i, Y in enumerate(self.elements()):
            if Y == X:
                return i
        raise InternalMismatch("element not found in the enumeration")


def lattice_of(P: Presentation) -> Lattice:
    return Lattice(P)


def leq(X, Y, L: Lattice) -> bool:
    return L.leq(X, Y)


def meet(X, Y, L: Lattice):
    return L.meet(X, Y)


def join(X, Y, L: Lattice):
    return L.join(X, Y)


# -- standard presentations ---------------------------------------------------------------


def chain_presentation(n: int) -> Presentation:
    """The chain with n elements: generators a1 < ... < a_(n-2) between 0 and 1."""
    if n < 1:
        raise InputError("a chain has at least one element")
    if n == 1:
        return Presentation([], [((), ())])
    gens = [f"a{i + 1}" for i in range(n - 2)]
    if n == 3:
        gens = ["a"]
    if n == 4:
        gens = ["a", "b"]
    return Presentation(gens, [((gens[i],), (gens[i + 1],)) for i in range(len(gens) - 1)])


def trivial_presentation() -> Presentation:
    return Presentation([], [((), ())])


def free_presentation(gens: Sequence[str]) -> Presentation:
    return Presentation(gens, [])


def poset_presentation(elements: Sequence[str], le, meets=None, joins=None, bottom=None, top=None) -> Presentation:
    """Generators = elements; axioms x |- y for x <= y, plus optional meet/join/bound sequents."""
    axioms = [((x,), (y,)) for x in elements for y in elements if x != y and le(x, y)]
    if meets:
        axioms += [((x, y), (meets(x, y),)) for x, y in combinations(elements, 2)]
    if joins:
        axioms += [((joins(x, y),), (x, y)) for x, y in combinations(elements, 2)]
    if bottom is not None:
        axioms.append(((bottom,), ()))
    if top is not None:
        axioms.append(((), (top,)))
    return Presentation(elements, axioms)


# -- quotients and primes ----------------------------------------------------------------


def quotient(L: Lattice, J: Sequence = (), U: Sequence = ()):
    """T/(J = 0, U = 1): returns (presentation, projection)."""
    P = L.P
    axioms = list(P.axioms)
    for x in J:
        for A in x:
            axioms.append((P.names(A), ()))
    for y in U:
        for T in transversals(y):
            axioms.append(((), P.names(T)))
    Q = Presentation(P.gens, axioms)
    QL = Lattice(Q)

    def project(X):
        return QL.canonical(X)

    return QL, project


def prime_collapse(L: Lattice, J: Sequence = (), U: Sequence = ()) -> bool:
    """True iff meet(U) <= join(J)."""
    return L.leq(L.meet_all(U), L.join_all(J))


def saturate_prime(L: Lattice, J: Sequence, U: Sequence, x):
    return prime_collapse(L, J, list(U) + [x]), prime_collapse(L, list(J) + [x], U)


# -- idealistic chains in a lattice -------------------------------------------------------


def _largest(L: Lattice, pred):
    """Join of all elements satisfying a join-closed, downward-closed predicate."""
    return L.join_all(x for x in L.elements() if pred(x))


def lattice_chain_collapses(L: Lattice, chain: Sequence):
    """Witness (x_1..x_l) for the collapse ladder, or None.

    chain = [(J_0, U_0), ..., (J_l, U_l)] with J_k, U_k lists of elements.
    x_1, U_0 |- J_0;  x_(k+1), U_k |- J_k, x_k;  U_l |- J_l, x_l.
    Each x_k is the largest element allowed at its rung.
    """
    chain = list(chain)
    if not chain:
        raise InputError("an idealistic chain needs at least one level")
    Js = [L.join_all(J) for J, _ in chain]
    Us = [L.meet_all(U) for _, U in chain]
    xs = []
    prev = L.zero()
    for k in range(len(chain) - 1):
        rhs = L.join(Js[k], prev)
        v = _largest(L, lambda x: L.leq(L.meet(x, Us[k]), rhs))
        xs.append(v)
        prev = v
    if L.leq(Us[-1], L.join(Js[-1], prev)):
        return xs
    return None


def check_ladder(L: Lattice, chain: Sequence, xs: Sequence) -> bool:
    chain = list(chain)
    Js = [L.join_all(J) for J, _ in chain]
    Us = [L.meet_all(U) for _, U in chain]
    prev = L.zero()
    xs = list(xs) + [L.one()]
    for k in range(len(chain)):
        if not L.leq(L.meet(xs[k], Us[k]), L.join(Js[k], prev)):
            return False
        prev = xs[k]
    return True


def elementary_lattice_chain(L: Lattice, xs: Sequence) -> list:
    xs = list(xs)
    J = [L.zero()] + xs
    U = xs + [L.one()]
    return [([j], [u]) for j, u in zip(J, U)]


def ladder_witness(L: Lattice, xs: Sequence):
    """a_1..a_l with a_1,x_1 |- 0; a_(k+1),x_(k+1) |- a_k,x_k; 1 |- a_l,x_l (or None)."""
    return lattice_chain_collapses(L, elementary_lattice_chain(L, xs))


def lattice_dim_at_most(L: Lattice, d: int):
    """(verdict, witnesses): dim <= d iff every generator sequence of length d+1 collapses."""
    length = d + 1
    if length < 0:
        raise InputError("dimension bound must be >= -1")
    out = {}
    for seq in _sequences(L.gens, length):
        xs = [L.gen(s) for s in seq]
        w = ladder_witness(L, xs)
        if w is None:
            return False, {seq: None}
        out[seq] = w
    return True, out


def _sequences(gens, n):
    if n == 0:
        yield ()
        return
    for rest in _sequences(gens, n - 1):
        for g in gens:
            yield rest + (g,)


def complement(L: Lattice, x):
    for y in L.elements():
        if L.eq(L.meet(x, y), L.zero()) and L.eq(L.join(x, y), L.one()):
            return y
    return None


def is_boolean(L: Lattice) -> bool:
    return all(complement(L, x) is not None for x in L.elements())


# -- Spec ----------------------------------------------------------------------------------


@dataclass(frozen=True)
class Point:
    """A morphism T -> 2 given by the generators sent to 1 (filter) and to 0 (ideal)."""

    filter: tuple
    ideal: tuple


def spec_enumerate(L: Lattice) -> list[Point]:
    t = L.table
    if t.trivial:
        return []
    n = len(L.gens)
    pts = [m for m in range(1 << n) if all((l & ~m) or (r & m) for l, r in t.pairs)]
    pts.sort(key=lambda m: (bin(m).count("1"), m))
    return [Point(tuple(L.P.names(m)), tuple(L.P.names(((1 << n) - 1) & ~m))) for m in pts]


# -- Kr_l ----------------------------------------------------------------------------------


@dataclass(frozen=True)
class KrGenerator:
    level: int
    base: str

    @property
    def name(self):
        return f"{self.base}@{self.level}"


class KrLattice:
    """Kr_l(T) with its entailment decided pointwise by the collapse ladder in T."""

    def __init__(self, L: Lattice, ell: int):
        if ell < 0:
            raise InputError("ell must be >= 0")
        if (ell + 1) * len(L.gens) > GEN_CAP:
            raise CapExceeded("Kr generators exceed the cap", {"gens": GEN_CAP})
        self.T = L
        self.ell = ell
        self.generators = [KrGenerator(i, s) for i in range(ell + 1) for s in L.gens]
        self._memo: dict = {}

    def entails(self, lhs: Iterable[KrGenerator], rhs: Iterable[KrGenerator]) -> bool:
        lhs, rhs = frozenset(lhs), frozenset(rhs)
        key = (lhs, rhs)
        if key not in self._memo:
            T = self.T
            chain = []
            for i in range(self.ell + 1):
                J = [T.gen(g.base) for g in rhs if g.level == i]
                U = [T.gen(g.base) for g in lhs if g.level == i]
                chain.append((J, U))
            self._memo[key] = lattice_chain_collapses(T, chain) is not None
        return self._memo[key]

    def chain_image(self, chain):
        """Entailment phi_0(U_0),... |- phi_0(J_0),... for a chain of generator-name lists."""
        lhs = [KrGenerator(i, s) for i, (_, U) in enumerate(chain) for s in U]
        rhs = [KrGenerator(i, s) for i, (J, _) in enumerate(chain) for s in J]
        return lhs, rhs

    def materialize(self) -> Presentation:
        """Presentation listing every minimal queried sequent over the Kr generators."""
        gens = self.generators
        n = len(gens)
        found: list = []
        for total in range(2 * n + 1):
            for ls in range(0, total + 1):
                rs = total - ls
                for L_ in combinations(range(n), ls):
                    rest = [i for i in range(n) if i not in L_]
                    for R_ in combinations(rest, rs):
                        lm = sum(1 << i for i in L_)
                        rm = sum(1 << i for i in R_)
                        if any((a & ~lm) == 0 and (b & ~rm) == 0 for a, b in found):
                            continue
                        if self.entails([gens[i] for i in L_], [gens[i] for i in R_]):
                            found.append((lm, rm))
        names = [g.name for g in gens]
        return Presentation(names, [([names[i] for i in bits(a)], [names[i] for i in bits(b)]) for a, b in found])


def kr_lattice(L: Lattice, ell: int) -> KrLattice:
    return KrLattice(L, ell)


def kr_axiom_presentation(L: Lattice, ell: int) -> Presentation:
    """Kr_l(T) as ell+1 copies of the axioms of T with phi_(i+1)(s) |- phi_i(s)."""
    P = L.P
    names = [KrGenerator(i, s).name for i in range(ell + 1) for s in P.gens]
    axioms = []
    for i in range(ell + 1):
        for l, r in P.axioms:
            axioms.append(([f"{s}@{i}" for s in l], [f"{s}@{i}" for s in r]))
    for i in range(ell):
        for s in P.gens:
            axioms.append(([f"{s}@{i + 1}"], [f"{s}@{i}"]))
    return Presentation(names, axioms)


# -- Boolean envelope ---------------------------------------------------------------------


def bar(s: str) -> str:
    return "~" + s


def boolean_envelope(L: Lattice) -> Lattice:
    """Generators S and ~S; A,~B |- A',~B' whenever A,B' |- A',B in T."""
    P = L.P
    gens = list(P.gens) + [bar(s) for s in P.gens]
    entries = list(L.table.pairs) + [(1 << i, 1 << i) for i in range(len(P.gens))]
    axioms = []
    for lhs, rhs in entries:
        lb, rb = list(bits(lhs)), list(bits(rhs))
        for k in range(len(lb) + 1):
            for Bp in combinations(lb, k):  # part of lhs moved right as ~B'
                A = [P.gens[i] for i in lb if i not in Bp]
                for h in range(len(rb) + 1):
                    for B in combinations(rb, h):  # part of rhs moved left as ~B
                        Ap = [P.gens[i] for i in rb if i not in B]
                        axioms.append((A + [bar(P.gens[i]) for i in B], Ap + [bar(P.gens[i]) for i in Bp]))
    E = Lattice(Presentation(gens, axioms))
    for s in P.gens:
        x, y = E.gen(s), E.gen(bar(s))
        if not (E.eq(E.meet(x, y), E.zero()) and E.eq(E.join(x, y), E.one())):
            raise InternalMismatch(f"generator {s} is not complemented in the envelope")
    return E


def embed_into(L: Lattice, E: Lattice, X):
    """Image of an element of L in a lattice whose generators include those of L."""
    return E.canonical(frozenset(E.P.mask(L.P.names(m)) for m in X))
