"""Idealistic primes and chains, collapse certificates and their evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError, ShapeMismatch
from .ring import Ring, parse_elements


@dataclass(frozen=True)
class IdealisticPrime:
    """Ideal part J and monoid part U (generator lists)."""

    J: tuple
    U: tuple

    def __init__(self, J=(), U=()):
        object.__setattr__(self, "J", tuple(J))
        object.__setattr__(self, "U", tuple(U))


@dataclass(frozen=True)
class IdealisticChain:
    ring: Ring
    primes: tuple

    def __init__(self, ring, primes):
        primes = tuple(p if isinstance(p, IdealisticPrime) else IdealisticPrime(*p) for p in primes)
        if not primes:
            raise InputError("an idealistic chain needs at least one prime")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "primes", primes)

    @property
    def length(self) -> int:
        return len(self.primes) - 1

    def __len__(self):
        return len(self.primes)

    def __getitem__(self, i):
        return self.primes[i]

    @classmethod
    def elementary(cls, ring: Ring, seq: Sequence) -> "IdealisticChain":
        """((0, x1), (x1, x2), ..., (x_l, 1))."""
        seq = list(seq)
        J = [ring.zero()] + seq
        U = seq + [ring.one()]
        return cls(ring, [IdealisticPrime([j], [u]) for j, u in zip(J, U)])

    def with_added(self, level: int, J=(), U=()) -> "IdealisticChain":
        ps = list(self.primes)
        p = ps[level]
        ps[level] = IdealisticPrime(p.J + tuple(J), p.U + tuple(U))
        return IdealisticChain(self.ring, ps)

    def to_json(self):
        R = self.ring
        return {"chain": [{"J": [R.fmt(x) for x in p.J], "U": [R.fmt(x) for x in p.U]} for p in self.primes]}

    @classmethod
    def from_json(cls, ring: Ring, data) -> "IdealisticChain":
        if isinstance(data, dict):
            if set(data) != {"chain"}:
                raise InputError(f"chain object must have exactly the key 'chain', got {sorted(data)}")
            data = data["chain"]
        if not isinstance(data, list) or not data:
            raise InputError("'chain' must be a nonempty list")
        primes = []
        for k, lev in enumerate(data):
            if not isinstance(lev, dict) or set(lev) - {"J", "U"}:
                raise InputError(f"chain level {k} must be an object with keys J and U")
            primes.append(IdealisticPrime(parse_elements(ring, lev.get("J", [])), parse_elements(ring, lev.get("U", []))))
        return cls(ring, primes)


@dataclass(frozen=True)
class CollapseCertificate:
    """Per level: exponents on the U generators and cofactors on the J generators."""

    levels: tuple

    def __init__(self, levels):
        object.__setattr__(self, "levels", tuple((tuple(e), tuple(c)) for e, c in levels))

    def u_values(self, chain: IdealisticChain) -> list:
        R = chain.ring
        return [R.prod(R.pow(g, k) for g, k in zip(p.U, exps)) for p, (exps, _) in zip(chain.primes, self.levels)]

    def j_values(self, chain: IdealisticChain) -> list:
        R = chain.ring
        return [R.dot(cofs, p.J) for p, (_, cofs) in zip(chain.primes, self.levels)]

    def exponent_sum(self) -> int:
        return sum(sum(e) for e, _ in self.levels)

    def to_json(self, chain: IdealisticChain):
        R = chain.ring
        out = []
        for p, (exps, cofs) in zip(chain.primes, self.levels):
            exp_map: dict = {}
            for g, k in zip(p.U, exps):
                name = R.fmt(g)
                exp_map[name] = exp_map.get(name, 0) + k
            cof_acc: dict = {}
            for g, c in zip(p.J, cofs):
                name = R.fmt(g)
                cof_acc[name] = R.add(cof_acc[name], c) if name in cof_acc else c
            out.append({"exp": exp_map, "cof": {k: R.fmt(v) for k, v in cof_acc.items()}})
        return {"levels": out}

    @classmethod
    def from_json(cls, chain: IdealisticChain, data) -> "CollapseCertificate":
        R = chain.ring
        if isinstance(data, dict):
            if set(data) != {"levels"}:
                raise InputError("certificate object must have exactly the key 'levels'")
            data = data["levels"]
        if not isinstance(data, list) or len(data) != len(chain.primes):
            raise ShapeMismatch("certificate needs one level per chain prime")
        levels = []
        for k, (p, lev) in enumerate(zip(chain.primes, data)):
            if not isinstance(lev, dict) or set(lev) - {"exp", "cof"}:
                raise InputError(f"certificate level {k} must have keys exp and cof")
            exp_map = lev.get("exp", {})
            cof_map = lev.get("cof", {})
            names_u = [R.fmt(g) for g in p.U]
            names_j = [R.fmt(g) for g in p.J]
            if set(exp_map) - set(names_u) or set(cof_map) - set(names_j):
                raise ShapeMismatch(f"certificate level {k} names generators absent from the chain")
            exps = []
            seen = set()
            for name in names_u:
                k_ = exp_map.get(name, 0) if name not in seen else 0
                if not isinstance(k_, int) or isinstance(k_, bool) or k_ < 0:
                    raise InputError(f"exponent for {name!r} must be a natural number")
                seen.add(name)
                exps.append(k_)
            cofs = []
            seen = set()
            for name in names_j:
                if name in cof_map and name not in seen:
                    cofs.append(parse_elements(R, [cof_map[name]])[0])
                else:
                    cofs.append(R.zero())
                seen.add(name)
            levels.append((exps, cofs))
        return cls(levels)


def check_shape(chain: IdealisticChain, cert: CollapseCertificate):
    if len(cert.levels) != len(chain.primes):
        raise ShapeMismatch(f"certificate has {len(cert.levels)} levels, chain has {len(chain.primes)}")
    for k, (p, (exps, cofs)) in enumerate(zip(chain.primes, cert.levels)):
        if len(exps) != len(p.U) or len(cofs) != len(p.J):
            raise ShapeMismatch(f"level {k}: expected {len(p.U)} exponents and {len(p.J)} cofactors")
        if any(not isinstance(e, int) or e < 0 for e in exps):
            raise ShapeMismatch(f"level {k}: exponents must be natural numbers")


def eval_nested(chain: IdealisticChain, cert: CollapseCertificate):
    """u0*(u1*(...*(u_l + j_l)...) + j1) + j0."""
    check_shape(chain, cert)
    R = chain.ring
    us = cert.u_values(chain)
    js = cert.j_values(chain)
    acc = R.add(us[-1], js[-1])
    for u, j in zip(reversed(us[:-1]), reversed(js[:-1])):
        acc = R.add(R.mul(u, acc), j)
    return acc


def verify_certificate(chain: IdealisticChain, cert: CollapseCertificate) -> bool:
    try:
        return chain.ring.is_zero(eval_nested(chain, cert))
    except ShapeMismatch:
        return False
