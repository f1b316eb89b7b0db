"""Command-line front end: JSON request in, JSON verdict and certificates out.

Exit codes: 0 verdict true / certificate valid, 1 verdict false / invalid,
2 input error, 3 resource cap reached, 4 internal disagreement (a bug).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from contextlib import contextmanager

from . import collapse as _collapse
from . import extensions as _ext
from . import groebner as _groebner
from . import lattice as _lattice
from .chain import CollapseCertificate, IdealisticChain, IdealisticPrime, verify_certificate
from .collapse import PseudoSingularCertificate, certify_collapse, chain_collapses, dim_at_most, pseudo_singular
from .errors import InputError, InternalMismatch, KrullError, ResourceExhausted
from .ideals import oracle_for
from .lattice import (
    KrGenerator,
    Lattice,
    Presentation,
    boolean_envelope,
    is_boolean,
    kr_axiom_presentation,
    kr_lattice,
    lattice_dim_at_most,
    spec_enumerate,
)
from .ring import ExtensionRing, IntegerRing, ModularRing, PolynomialRing, extension_make, parse_elements, ring_make
from .zariski import bridge_collapse, zar_dim_at_most, zar_entails

SCHEMA_VERSION = 1

CAPS = {
    "exponent": (_collapse, "EXPONENT_CAP"),
    "search_budget": (_collapse, "SEARCH_BUDGET"),
    "poly_search_budget": (_collapse, "POLY_SEARCH_BUDGET"),
    "cofactor_box": (_collapse, "COFACTOR_BOX"),
    "degree": (_groebner, "DEGREE_CAP"),
    "basis": (_groebner, "BASIS_CAP"),
    "lattice_gens": (_lattice, "GEN_CAP"),
    "clauses": (_lattice, "CLAUSE_CAP"),
    "elements": (_lattice, "ELEMENT_CAP"),
    "alist": (_ext, "ALIST_CAP"),
}

RESPONSE_KEYS = {"command", "verdict", "result", "diagnostics"}


class Verdict(Exception):
    pass


def effective_caps() -> dict:
    return {k: getattr(m, a) for k, (m, a) in sorted(CAPS.items())}


@contextmanager
def caps_override(caps: dict):
    saved = {}
    try:
        for k, v in caps.items():
            if k not in CAPS:
                raise InputError(f"unknown cap {k!r}; known caps: {sorted(CAPS)}")
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise InputError(f"cap {k!r} must be a natural number")
            m, a = CAPS[k]
            saved[k] = getattr(m, a)
            setattr(m, a, v)
        yield
    finally:
        for k, v in saved.items():
            m, a = CAPS[k]
            setattr(m, a, v)


# -- request helpers ------------------------------------------------------------------------


def _keys(req: dict, required=(), optional=()):
    allowed = set(required) | set(optional) | {"v"}
    extra = set(req) - allowed
    if extra:
        raise InputError(f"unknown fields {sorted(extra)}; allowed: {sorted(allowed)}")
    missing = [k for k in required if k not in req]
    if missing:
        raise InputError(f"missing fields {missing}")
    if "v" in req and req["v"] != SCHEMA_VERSION:
        raise InputError(f"unsupported schema version {req['v']!r}")


def _int(req, key, default=None, lo=None):
    v = req.get(key, default)
    if not isinstance(v, int) or isinstance(v, bool) or (lo is not None and v < lo):
        raise InputError(f"{key!r} must be an integer" + (f" >= {lo}" if lo is not None else ""))
    return v


def _list(req, key):
    v = req[key]
    if not isinstance(v, list):
        raise InputError(f"{key!r} must be a list")
    return v


def _s_elem(S: ExtensionRing, x):
    if isinstance(x, list):
        if len(x) != S.d:
            raise InputError(f"extension element needs {S.d} coordinates, got {len(x)}")
        return S.element(x)
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return S.parse(x) if isinstance(x, str) else S.from_int(x)
    raise InputError(f"bad extension element {x!r}")


def _elems(R, xs):
    if not isinstance(xs, list):
        raise InputError("expected a list of elements")
    if isinstance(R, ExtensionRing):
        return [_s_elem(R, x) for x in xs]
    return parse_elements(R, xs)


def _prime(R, data, what):
    if not isinstance(data, dict) or set(data) - {"J", "U"}:
        raise InputError(f"{what} must be an object with keys J and U")
    return IdealisticPrime(_elems(R, data.get("J", [])), _elems(R, data.get("U", [])))


def _chain(R, data):
    if isinstance(R, ExtensionRing):
        if isinstance(data, dict):
            if set(data) != {"chain"}:
                raise InputError("chain object must have exactly the key 'chain'")
            data = data["chain"]
        if not isinstance(data, list) or not data:
            raise InputError("'chain' must be a nonempty list")
        return IdealisticChain(R, [_prime(R, lev, f"chain level {k}") for k, lev in enumerate(data)])
    return IdealisticChain.from_json(R, data)


def _fmt_chain(C: IdealisticChain):
    return C.to_json()["chain"]


def _chain_item(C: IdealisticChain, cert: CollapseCertificate, ring_json=None):
    item = {"kind": "chain", "chain": _fmt_chain(C), "certificate": cert.to_json(C)}
    if ring_json is not None:
        item["ring"] = ring_json
    return item


def _ps_item(R, seq, ps: PseudoSingularCertificate):
    return {"kind": "pseudo_singular", "seq": [R.fmt(x) for x in seq], "m": list(ps.m), "a": [R.fmt(x) for x in ps.a]}


def _membership_item(R, element, power, ideal, cofactors, multiplier=None, ring_json=None):
    item = {
        "kind": "membership",
        "element": R.fmt(element),
        "power": power,
        "ideal": [R.fmt(g) for g in ideal],
        "cofactors": [R.fmt(c) for c in cofactors],
    }
    if multiplier is not None:
        item["multiplier"] = R.fmt(multiplier)
    if ring_json is not None:
        item["ring"] = ring_json
    return item


def _ring_of(req):
    if "ring" in req and "extension" in req:
        raise InputError("give either 'ring' or 'extension', not both")
    if "extension" in req:
        return extension_make(req["extension"])
    if "ring" in req:
        return ring_make(req["ring"])
    raise InputError("missing field 'ring'")


def _ring_json(R):
    return {"extension": R.descriptor()} if isinstance(R, ExtensionRing) else {"ring": R.descriptor()}


# -- random test sets --------------------------------------------------------------------------


def random_element(R, rng: random.Random):
    if isinstance(R, IntegerRing):
        return rng.randint(-6, 6)
    if isinstance(R, ModularRing):
        return rng.randrange(R.n)
    if isinstance(R, PolynomialRing):
        terms = {}
        for _ in range(rng.randint(1, 2)):
            e = [0] * R.nvars
            for _ in range(rng.randint(0, 2)):
                e[rng.randrange(R.nvars)] += 1
            terms[tuple(e)] = R.K.from_int(rng.choice([1, 1, 2, -1]))
        return R.make(terms)
    raise InputError(f"no random elements for {R}")


def random_testset(R, length: int, count: int, rng: random.Random):
    return [[random_element(R, rng) for _ in range(length)] for _ in range(count)]


def _testset(R, req, length, seed):
    if "testset" in req:
        ts = _list(req, "testset")
        return [_elems(R, s) for s in ts]
    count = _int(req, "samples", 10, 0)
    return random_testset(R, length, count, random.Random(seed))


# -- commands ------------------------------------------------------------------------------------


def cmd_collapse(req, ctx):
    _keys(req, ("ring", "chain"))
    R = _ring_of(req)
    C = _chain(R, req["chain"])
    return {"verdict": chain_collapses(C)}


def cmd_certify(req, ctx):
    _keys(req, ("ring", "chain"))
    R = _ring_of(req)
    C = _chain(R, req["chain"])
    if not chain_collapses(C):
        return {"verdict": False}
    cert = certify_collapse(C)
    if cert is None:
        raise ResourceExhausted("the chain collapses but no certificate was built within caps", effective_caps())
    return {"verdict": True, "ring": R.descriptor(), "certificates": [_chain_item(C, cert)]}


def cmd_pseudo_regular(req, ctx):
    _keys(req, ("ring", "seq"))
    R = _ring_of(req)
    seq = _elems(R, _list(req, "seq"))
    ps = pseudo_singular(seq, R)
    if ps is None:
        return {"verdict": True}
    return {"verdict": False, "ring": R.descriptor(), "certificates": [_ps_item(R, seq, ps)]}


def cmd_dim_le(req, ctx):
    _keys(req, ("ring", "ell"), ("testset", "samples"))
    R = _ring_of(req)
    ell = _int(req, "ell", lo=0)
    ts = _testset(R, req, ell + 1, ctx["seed"])
    rep = dim_at_most(R, ell, ts)
    items = [_ps_item(R, r["seq"], r["cert"]) for r in rep.rows if r.get("cert") is not None]
    return {"verdict": rep.verdict, "result": rep.to_json(), "ring": R.descriptor(), "certificates": items}


def cmd_saturate_member(req, ctx):
    _keys(req, ("ring", "ideal", "by", "element"))
    R = _ring_of(req)
    I = _elems(R, _list(req, "ideal"))
    g = _elems(R, [req["by"]])[0]
    x = _elems(R, [req["element"]])[0]
    if R.is_zero(g):
        raise InputError("cannot saturate by zero")
    oracle = oracle_for(R)
    sats = oracle.saturate(I, g)
    d = oracle.member(x, [s.element for s in sats])
    if d is None:
        return {"verdict": False}
    E = max((s.exponent for s in sats), default=0)
    cof = [R.zero() for _ in I]
    for dk, s in zip(d, sats):
        scale = R.mul(dk, R.pow(g, E - s.exponent))
        cof = [R.add(a, R.mul(scale, c)) for a, c in zip(cof, s.cofactors)]
    item = _membership_item(R, x, 1, I, cof, multiplier=R.pow(g, E))
    return {"verdict": True, "ring": R.descriptor(), "result": {"exponent": E}, "certificates": [item]}


def _presentation(req):
    return Presentation.from_json(req["presentation"])


def _lattice_elem(L: Lattice, data):
    if not isinstance(data, list) or not all(isinstance(b, list) for b in data):
        raise InputError("lattice elements are lists of lists of generator names")
    return L.parse(data)


def cmd_lattice_close(req, ctx):
    _keys(req, ("presentation",))
    L = Lattice(_presentation(req))
    P = L.P
    pairs = sorted(L.table.pairs, key=lambda lr: (bin(lr[0]).count("1") + bin(lr[1]).count("1"), lr))
    table = [{"lhs": P.names(l), "rhs": P.names(r)} for l, r in pairs]
    return {"verdict": True, "result": {"trivial": L.table.trivial, "sequents": table}}


def cmd_lattice_leq(req, ctx):
    _keys(req, ("presentation", "x", "y"))
    L = Lattice(_presentation(req))
    return {"verdict": L.leq(_lattice_elem(L, req["x"]), _lattice_elem(L, req["y"]))}


def cmd_lattice_dim(req, ctx):
    _keys(req, ("presentation", "d"))
    L = Lattice(_presentation(req))
    d = _int(req, "d", lo=-1)
    ok, wit = lattice_dim_at_most(L, d)
    rows = [{"seq": list(seq), "a": None if w is None else [L.fmt(x) for x in w]} for seq, w in wit.items()]
    return {"verdict": ok, "result": {"d": d, "sequences": rows}}


def cmd_lattice_spec(req, ctx):
    _keys(req, ("presentation",))
    L = Lattice(_presentation(req))
    pts = spec_enumerate(L)
    return {"verdict": True, "result": {"points": [{"filter": list(p.filter), "ideal": list(p.ideal)} for p in pts]}}


def _kr_gen(name):
    if not isinstance(name, str) or "@" not in name:
        raise InputError(f"Kr generators are written s@i, got {name!r}")
    base, lev = name.rsplit("@", 1)
    if not lev.isdigit():
        raise InputError(f"bad level in {name!r}")
    return KrGenerator(int(lev), base)


def cmd_lattice_kr(req, ctx):
    _keys(req, ("presentation", "ell"), ("lhs", "rhs"))
    L = Lattice(_presentation(req))
    ell = _int(req, "ell", lo=0)
    K = kr_lattice(L, ell)
    if "lhs" in req or "rhs" in req:
        lhs = [_kr_gen(s) for s in req.get("lhs", [])]
        rhs = [_kr_gen(s) for s in req.get("rhs", [])]
        known = {g.name for g in K.generators}
        for g in lhs + rhs:
            if g.name not in known:
                raise InputError(f"unknown Kr generator {g.name!r}")
        lazy = K.entails(lhs, rhs)
        A = Lattice(kr_axiom_presentation(L, ell))
        axiom = A.table.entails(A.P.mask([g.name for g in lhs]), A.P.mask([g.name for g in rhs]))
        if lazy != axiom:
            raise InternalMismatch("the two Kr constructions disagree")
        return {"verdict": lazy}
    return {"verdict": True, "result": {"presentation": K.materialize().to_json()}}


def cmd_lattice_bool(req, ctx):
    _keys(req, ("presentation",))
    L = Lattice(_presentation(req))
    E = boolean_envelope(L)
    els = E.elements()
    return {
        "verdict": is_boolean(E),
        "result": {"gens": list(E.gens), "elements": [E.fmt(x) for x in els], "size": len(els)},
    }


def cmd_zar_entails(req, ctx):
    _keys(req, ("ring", "U", "J"))
    R = _ring_of(req)
    return {"verdict": zar_entails(R, _elems(R, _list(req, "U")), _elems(R, _list(req, "J")))}


def cmd_zar_dim_le(req, ctx):
    _keys(req, ("ring", "ell"), ("testset", "samples"))
    R = _ring_of(req)
    ell = _int(req, "ell", lo=0)
    ts = _testset(R, req, ell + 1, ctx["seed"])
    rep = zar_dim_at_most(R, ell, ts)
    return {"verdict": rep.verdict, "result": rep.to_json(R)}


def cmd_zar_bridge(req, ctx):
    _keys(req, ("ring", "chain"))
    R = _ring_of(req)
    C = _chain(R, req["chain"])
    b = bridge_collapse(C)
    out = {
        "verdict": b.ring_verdict,
        "result": {
            "ring_verdict": b.ring_verdict,
            "lattice_verdict": b.lattice_verdict,
            "ladder": [x.to_json(R) for x in b.ladder],
            "principal": None if b.principal is None else [R.fmt(v) for v in b.principal],
        },
    }
    if b.ring_verdict:
        cert = certify_collapse(C)
        if cert is not None:
            out["ring"] = R.descriptor()
            out["certificates"] = [_chain_item(C, cert)]
    return out


def cmd_ext_going_up(req, ctx):
    _keys(req, ("extension", "chain"), ("c1", "probes"))
    S = extension_make(req["extension"])
    R = S.base
    C2 = _chain(R, req["chain"])
    C1 = _chain(S, req["c1"]) if "c1" in req else None
    probes = []
    for p in req.get("probes", []):
        if not isinstance(p, list) or len(p) != 2 or not isinstance(p[0], int):
            raise InputError("probes are [level, element] pairs")
        probes.append((p[0], _elems(R, [p[1]])[0]))
    g = _ext.going_up_transfer(S, C1, C2, probes)
    result = {"in_extension": g.in_S, "in_base": g.in_R, "exact": g.exact}
    if g.trace is not None:
        result["trace"] = _fmt_chain(g.trace)
    items = []
    if g.certificate is not None:
        whole = C2 if C1 is None else IdealisticChain(R, g.trace.primes + C2.primes)
        items.append(_chain_item(whole, g.certificate, R.descriptor()))
    if g.lying_over is not None:
        lo = g.lying_over
        result["lying_over"] = {"exponent": lo.exponent, "charpoly": _ext.fmt_upoly(R, lo.charpoly), "module": lo.module}
        p = C2.primes[0]
        items.append(
            _membership_item(R, R.prod(p.U), lo.exponent, lo.witness.gens, lo.witness.cofactors, ring_json=R.descriptor())
        )
    out = {"verdict": g.in_S, "result": result, "extension": S.descriptor()}
    if items:
        out["certificates"] = items
    return out


def cmd_ext_lying_over(req, ctx):
    _keys(req, ("extension", "ideal", "x", "n", "pairs"))
    S = extension_make(req["extension"])
    R = S.base
    I = _elems(R, _list(req, "ideal"))
    x = _elems(R, [req["x"]])[0]
    pairs = []
    for p in _list(req, "pairs"):
        if not isinstance(p, list) or len(p) != 2:
            raise InputError("pairs are [j, b] with j in the base and b in the extension")
        pairs.append((_elems(R, [p[0]])[0], _s_elem(S, p[1])))
    lo = _ext.lying_over(S, I, x, _int(req, "n", lo=1), pairs)
    return {
        "verdict": True,
        "extension": S.descriptor(),
        "result": {"exponent": lo.exponent, "charpoly": _ext.fmt_upoly(R, lo.charpoly), "module": lo.module},
        "certificates": [_membership_item(R, x, lo.exponent, I, lo.witness.cofactors, ring_json=R.descriptor())],
    }


def _upoly(R, data):
    if data is None:
        return None
    return _elems(R, data) if isinstance(data, list) else _ext._t_poly_to_list(R, _ext_t_parse(R, data))


def _ext_t_parse(R, text):
    from .linalg import t_ring

    return t_ring(R).parse(text)


def cmd_ext_going_down(req, ctx):
    mode = req.get("mode", "integral")
    if mode == "flat":
        _keys(req, ("P0", "u0", "v1", "pairs"), ("mode", "extension", "free"))
        if "free" in req:
            free = req["free"]
            if not isinstance(free, dict) or set(free) != {"base", "vars"}:
                raise InputError("'free' must be {'base': ..., 'vars': [...]}")
            base = ring_make(free["base"])
            S = PolynomialRing(base, free["vars"])
            elem = lambda x: S.parse(x) if isinstance(x, str) else S.coerce(x)
        else:
            S = extension_make(req["extension"])
            base = S.base
            elem = lambda x: _s_elem(S, x)
        P0 = _prime(base, req["P0"], "P0")
        pairs = [(_elems(base, [i])[0], elem(b)) for i, b in _pairs(req)]
        fd = _ext.going_down_flat(S, P0, _elems(base, [req["u0"]])[0], elem(req["v1"]), pairs)
        return {
            "verdict": True,
            "result": {
                "M": [[base.fmt(c) for c in row] for row in fd.M],
                "basis": [S.fmt(b) for b in fd.basis],
                "m0": [base.fmt(m) for m in fd.m0],
            },
        }
    if mode != "integral":
        raise InputError(f"unknown mode {mode!r}")
    _keys(req, ("extension", "P0", "Q1", "u0", "v1", "pairs"), ("mode", "A", "B", "assume_domain"))
    S = extension_make(req["extension"])
    R = S.base
    P0 = _prime(R, req["P0"], "P0")
    Q1 = _prime(S, req["Q1"], "Q1")
    pairs = [(_elems(R, [i])[0], _s_elem(S, b)) for i, b in _pairs(req)]
    gd = _ext.going_down_step(
        S,
        P0,
        Q1,
        _elems(R, [req["u0"]])[0],
        _s_elem(S, req["v1"]),
        pairs,
        A=_upoly(R, req.get("A")),
        B=_upoly(R, req.get("B")),
        assume_domain=bool(req.get("assume_domain", False)),
    )
    out = {
        "verdict": True,
        "extension": S.descriptor(),
        "result": {"power": gd.power, "cofactors": [S.fmt(c) for c in gd.cofactors], "rounds": gd.rounds},
    }
    if gd.certificate is not None:
        out["certificates"] = [_chain_item(IdealisticChain(S, [Q1]), gd.certificate)]
    return out


def _pairs(req):
    ps = _list(req, "pairs")
    for p in ps:
        if not isinstance(p, list) or len(p) != 2:
            raise InputError("pairs are [i, b] lists")
    return ps


def cmd_ext_above(req, ctx):
    _keys(req, ("extension", "x"), ("alist", "annihilator"))
    S = extension_make(req["extension"])
    R = S.base
    x = _s_elem(S, req["x"])
    C = IdealisticChain.elementary(S, [x])
    result = {}
    if "alist" in req:
        alist = _elems(R, _list(req, "alist"))
    else:
        ia = _ext.integral_alist(S, x, _upoly(R, req.get("annihilator")))
        alist = ia.alist
        result["k"] = ia.k
        result["cases"] = [
            {
                "in_G": [R.fmt(ia.relation[i]) for i in c.in_G],
                "in_G_prime": None if c.in_Gprime is None else R.fmt(ia.relation[c.in_Gprime]),
                "m": c.m,
                "g_prime": S.fmt(c.gprime),
                "b": S.fmt(c.b),
            }
            for c in ia.cases
        ]
    verdict = _ext.collapse_above(S, C, alist)
    result["alist"] = [R.fmt(a) for a in alist]
    result["pairs_checked"] = 1 << len(alist)
    return {"verdict": verdict, "result": result}


# -- verify ---------------------------------------------------------------------------------------


def _verify_item(item, default_ring):
    if not isinstance(item, dict) or "kind" not in item:
        raise InputError("each certificate needs a 'kind'")
    R = default_ring
    if "ring" in item or "extension" in item:
        R = _ring_of({k: item[k] for k in ("ring", "extension") if k in item})
    if R is None:
        raise InputError("certificate without a ring")
    kind = item["kind"]
    if kind == "chain":
        _keys(item, ("kind", "chain", "certificate"), ("ring", "extension"))
        C = _chain(R, item["chain"])
        cert = _chain_cert(C, item["certificate"])
        return verify_certificate(C, cert)
    if kind == "pseudo_singular":
        _keys(item, ("kind", "seq", "m", "a"), ("ring", "extension"))
        seq = _elems(R, _list(item, "seq"))
        m = _list(item, "m")
        if not all(isinstance(k, int) and not isinstance(k, bool) and k >= 0 for k in m):
            raise InputError("exponents must be natural numbers")
        a = _elems(R, _list(item, "a"))
        if len(m) != len(seq) or len(a) != len(seq):
            return False
        return PseudoSingularCertificate(tuple(m), tuple(a)).check(R, seq)
    if kind == "membership":
        _keys(item, ("kind", "element", "power", "ideal", "cofactors"), ("multiplier", "ring", "extension"))
        x = _elems(R, [item["element"]])[0]
        p = _int(item, "power", lo=0)
        I = _elems(R, _list(item, "ideal"))
        c = _elems(R, _list(item, "cofactors"))
        mult = _elems(R, [item.get("multiplier", "1")])[0]
        if len(c) != len(I):
            return False
        return R.eq(R.mul(mult, R.pow(x, p)), R.dot(c, I))
    raise InputError(f"unknown certificate kind {kind!r}")


def _chain_cert(C, data):
    from .errors import ShapeMismatch

    try:
        return CollapseCertificate.from_json(C, data)
    except ShapeMismatch:
        return CollapseCertificate([])


def cmd_verify(req, ctx):
    allowed = RESPONSE_KEYS | {"ring", "extension", "certificates", "chain", "certificate"}
    _keys(req, (), allowed)
    R = _ring_of(req) if ("ring" in req or "extension" in req) else None
    if "chain" in req or "certificate" in req:
        if "certificates" in req:
            raise InputError("give either 'certificates' or a single 'chain' and 'certificate'")
        items = [{"kind": "chain", "chain": req.get("chain"), "certificate": req.get("certificate")}]
    else:
        items = req.get("certificates")
    if not isinstance(items, list) or not items:
        raise InputError("nothing to verify: no certificates")
    results = [_verify_item(it, R) for it in items]
    return {"verdict": all(results), "result": {"valid": results}}


COMMANDS = {
    ("collapse",): cmd_collapse,
    ("certify",): cmd_certify,
    ("pseudo-regular",): cmd_pseudo_regular,
    ("dim-le",): cmd_dim_le,
    ("saturate-member",): cmd_saturate_member,
    ("lattice", "close"): cmd_lattice_close,
    ("lattice", "leq"): cmd_lattice_leq,
    ("lattice", "dim"): cmd_lattice_dim,
    ("lattice", "spec"): cmd_lattice_spec,
    ("lattice", "kr"): cmd_lattice_kr,
    ("lattice", "bool"): cmd_lattice_bool,
    ("zar", "entails"): cmd_zar_entails,
    ("zar", "dim-le"): cmd_zar_dim_le,
    ("zar", "bridge"): cmd_zar_bridge,
    ("ext", "going-up"): cmd_ext_going_up,
    ("ext", "going-down"): cmd_ext_going_down,
    ("ext", "lying-over"): cmd_ext_lying_over,
    ("ext", "above"): cmd_ext_above,
    ("verify",): cmd_verify,
}


# -- plumbing -------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--file", default=argparse.SUPPRESS, help="request JSON file (default: stdin)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for generated test sets")
    common.add_argument("--caps", default=argparse.SUPPRESS, help='JSON object of cap overrides, e.g. {"exponent": 8}')
    common.add_argument("--format", choices=["json", "text"], default=argparse.SUPPRESS)
    p = argparse.ArgumentParser(prog="krulldim", description="Collapse certificates and Krull dimension tools.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)
    groups: dict = {}
    for key in COMMANDS:
        if len(key) == 1:
            sub.add_parser(key[0], parents=[common])
        else:
            if key[0] not in groups:
                gp = sub.add_parser(key[0], parents=[common])
                groups[key[0]] = gp.add_subparsers(dest="action", required=True)
            groups[key[0]].add_parser(key[1], parents=[common])
    return p


def load_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON in {source} at line {e.lineno} column {e.colno} (char {e.pos}): {e.msg}") from None


def to_text(obj, indent=0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(to_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.append(to_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v)}")
    else:
        lines.append(pad + json.dumps(obj))
    return "\n".join(lines)


def _exit_code(resp) -> int:
    return 0 if resp.get("verdict") else 1


def run(argv=None, stdin=None, stdout=None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    key = (args.command,) + ((args.action,) if getattr(args, "action", None) else ())
    name = " ".join(key)
    fmt = getattr(args, "format", "json")
    resp: dict = {"v": SCHEMA_VERSION, "command": name}
    try:
        caps = load_json(args.caps, "--caps") if hasattr(args, "caps") else {}
        if not isinstance(caps, dict):
            raise InputError("--caps must be a JSON object")
        if hasattr(args, "file"):
            try:
                with open(args.file, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as e:
                raise InputError(f"cannot read {args.file}: {e.strerror}") from None
            source = args.file
        else:
            text = stdin.read()
            source = "stdin"
        req = load_json(text, source)
        if not isinstance(req, dict):
            raise InputError("the request must be a JSON object")
        ctx = {"seed": getattr(args, "seed", 0)}
        with caps_override(caps):
            out = COMMANDS[key](req, ctx)
            ring_default = out.pop("ring", None)
            ext_default = out.pop("extension", None)
            default = None
            if ext_default is not None:
                default = extension_make(ext_default)
            elif ring_default is not None:
                default = ring_make(ring_default)
            items = out.get("certificates", [])
            for it in items:
                if default is not None and "ring" not in it and "extension" not in it:
                    it.update({"extension": ext_default} if ext_default is not None else {"ring": ring_default})
                if not _verify_item(it, None):
                    raise InternalMismatch(f"emitted {it['kind']} certificate fails re-verification")
            resp.update(out)
            resp["diagnostics"] = {"caps": effective_caps(), "seed": ctx["seed"]}
        code = _exit_code(resp)
    except ResourceExhausted as e:
        resp["error"] = {"code": e.code, "message": str(e), "caps": e.caps}
        code = 3
    except InternalMismatch as e:
        resp["error"] = {"code": e.code, "message": str(e)}
        code = 4
    except (InputError, KrullError) as e:
        resp["error"] = {"code": e.code, "message": str(e)}
        code = 2
    except (TypeError, ValueError, KeyError) as e:
        resp["error"] = {"code": "InputError", "message": f"{type(e).__name__}: {e}"}
        code = 2
    if fmt == "text":
        stdout.write(to_text(resp) + "\n")
    else:
        stdout.write(json.dumps(resp, sort_keys=True) + "\n")
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
