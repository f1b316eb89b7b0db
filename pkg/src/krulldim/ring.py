"""Exact rings: the integers, integers mod n, and sparse polynomials over Q or F_p.

Elements of ZZ and Zmod(n) are plain Python ints (residues kept in [0, n)).
Polynomial elements are :class:`Poly` objects backed by a dict that maps
exponent tuples to nonzero coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidDescriptor, ParseError, ZeroDenominator


def is_prime(p: int) -> bool:
    """Trial division."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Ring:
    """Common interface. Subclasses supply add/neg/mul/is_zero/from_int."""

    is_field = False

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def eq(self, a, b) -> bool:
        return self.is_zero(self.sub(a, b))

    def is_one(self, a) -> bool:
        return self.eq(a, self.one())

    def sum(self, xs: Iterable):
        acc = self.zero()
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def prod(self, xs: Iterable):
        acc = self.one()
        for x in xs:
            acc = self.mul(acc, x)
        return acc

    def pow(self, a, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.one()
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def dot(self, xs: Sequence, ys: Sequence):
        return self.sum(self.mul(x, y) for x, y in zip(xs, ys))

    def inv(self, a):
        raise ZeroDenominator(f"{self.fmt(a)} is not invertible in {self}")

    def is_unit(self, a) -> bool:
        try:
            self.inv(a)
        except ZeroDenominator:
            return False
        return True

    def parse(self, text: str):
        return _Parser(self, text).parse()

    def __eq__(self, other):
        return type(self) is type(other) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(repr(self.descriptor()))

    def __repr__(self):
        return f"<{self}>"


class IntegerRing(Ring):
    def from_int(self, n):
        return int(n)

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ZeroDenominator(f"{x} is not an integer")
            return int(x.numerator)
        return int(x)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def pow(self, a, k):
        return a**k

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def inv(self, a):
        if a in (1, -1):
            return a
        raise ZeroDenominator(f"{a} is not a unit in Z")

    def divide_exact(self, a, b):
        if b == 0 or a % b:
            raise ZeroDenominator(f"{a}/{b} is not an integer")
        return a // b

    def fmt(self, a):
        return str(a)

    def descriptor(self):
        return {"ring": "Z"}

    def __str__(self):
        return "Z"


class ModularRing(Ring):
    """Z/nZ with residues in [0, n). A field when n is prime."""

    def __init__(self, n: int):
        if not isinstance(n, int) or n < 2:
            raise InvalidDescriptor(f"modulus must be an integer >= 2, got {n!r}")
        self.n = n
        self.is_field = is_prime(n)

    def from_int(self, k):
        return int(k) % self.n

    def coerce(self, x):
        if isinstance(x, Fraction):
            return self.mul(self.from_int(x.numerator), self.inv(self.from_int(x.denominator)))
        return int(x) % self.n

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def pow(self, a, k):
        return pow(a, k, self.n)

    def is_zero(self, a):
        return a % self.n == 0

    def eq(self, a, b):
        return (a - b) % self.n == 0

    def inv(self, a):
        try:
            return pow(a, -1, self.n)
        except ValueError:
            raise ZeroDenominator(f"{a} is not a unit mod {self.n}") from None

    def fmt(self, a):
        return str(a % self.n)

    def descriptor(self):
        return {"ring": "Zmod", "n": self.n}

    def __str__(self):
        return f"Z/{self.n}"


class RationalField(Ring):
    is_field = True

    def from_int(self, n):
        return Fraction(n)

    def coerce(self, x):
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def inv(self, a):
        if a == 0:
            raise ZeroDenominator("division by zero in Q")
        return 1 / Fraction(a)

    def fmt(self, a):
        return str(a)

    def descriptor(self):
        return "Q"

    def __str__(self):
        return "Q"


ZZ = IntegerRing()
QQ = RationalField()


def GF(p: int) -> ModularRing:
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidDescriptor(f"{p!r} is not prime")
    return ModularRing(p)


# ---------------------------------------------------------------------------
# monomial orders

def grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e):
    return e


def elimination_key(k: int):
    """Order eliminating the first k variables: lex on their total degree block, then grevlex."""

    def key(e):
        return (sum(e[:k]), grevlex_key(e[:k]), grevlex_key(e[k:]))

    return key


ORDERS = {"grevlex": grevlex_key, "lex": lex_key}


class Poly:
    """Immutable sparse polynomial. ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: "PolynomialRing", terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    def _wrap(self, other):
        if isinstance(other, Poly):
            return other
        return self.ring.coerce(other)

    def __add__(self, other):
        return self.ring.add(self, self._wrap(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.ring.sub(self, self._wrap(other))

    def __rsub__(self, other):
        return self.ring.sub(self._wrap(other), self)

    def __mul__(self, other):
        return self.ring.mul(self, self._wrap(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self.ring.neg(self)

    def __pow__(self, k):
        return self.ring.pow(self, k)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        try:
            return self.terms == self.ring.coerce(other).terms
        except (TypeError, ValueError, ZeroDenominator):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return self.ring.fmt(self)

    __str__ = __repr__

    def items(self):
        """Terms in decreasing monomial order."""
        return sorted(self.terms.items(), key=lambda t: self.ring.key(t[0]), reverse=True)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)


class PolynomialRing(Ring):
    """K[vars] with K any Ring (Q and F_p for the public descriptor)."""

    def __init__(self, coeffs: Ring, variables: Sequence[str], order: str = "grevlex"):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise InvalidDescriptor(f"duplicate variables in {list(variables)}")
        for v in variables:
            if not isinstance(v, str) or not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise InvalidDescriptor(f"bad variable name {v!r}")
        if order not in ORDERS:
            raise InvalidDescriptor(f"unknown monomial order {order!r}")
        self.K = coeffs
        self.vars = variables
        self.nvars = len(variables)
        self.order = order
        self.key = ORDERS[order]
        self.is_field = False
        self._zero_exp = (0,) * self.nvars

    # construction -----------------------------------------------------------

    def from_int(self, n):
        c = self.K.from_int(n)
        return self.make({self._zero_exp: c})

    def coerce(self, x):
        if isinstance(x, Poly):
            if x.ring.vars == self.vars and x.ring.K == self.K:
                return x if x.ring is self else Poly(self, x.terms)
            raise TypeError(f"cannot coerce {x} into {self}")
        return self.make({self._zero_exp: self.K.coerce(x)})

    def const(self, c):
        return self.make({self._zero_exp: c})

    def make(self, terms: dict) -> Poly:
        K = self.K
        return Poly(self, {e: c for e, c in terms.items() if not K.is_zero(c)})

    def monomial(self, exps, c=None) -> Poly:
        c = self.K.one() if c is None else c
        return self.make({tuple(exps): c})

    def var(self, name) -> Poly:
        i = self.vars.index(name) if isinstance(name, str) else name
        e = [0] * self.nvars
        e[i] = 1
        return self.monomial(e)

    @property
    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def with_order(self, order: str) -> "PolynomialRing":
        return PolynomialRing(self.K, self.vars, order)

    def extend(self, names: Sequence[str], front: bool = True) -> "PolynomialRing":
        names = tuple(names)
        allv = names + self.vars if front else self.vars + names
        return PolynomialRing(self.K, allv, self.order)

    def embed(self, p: Poly, target: "PolynomialRing") -> Poly:
        """Map p into a ring whose variables include ours (by name)."""
        idx = [target.vars.index(v) for v in self.vars]
        out = {}
        for e, c in p.terms.items():
            ne = [0] * target.nvars
            for i, k in zip(idx, e):
                ne[i] = k
            out[tuple(ne)] = c
        return Poly(target, out)

    # arithmetic ---------------------------------------------------------------

    def add(self, a, b):
        K = self.K
        out = dict(a.terms)
        for e, c in b.terms.items():
            if e in out:
                s = K.add(out[e], c)
                if K.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return Poly(self, out)

    def neg(self, a):
        K = self.K
        return Poly(self, {e: K.neg(c) for e, c in a.terms.items()})

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        K = self.K
        out = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                c = K.mul(c1, c2)
                if e in out:
                    out[e] = K.add(out[e], c)
                else:
                    out[e] = c
        return Poly(self, {e: c for e, c in out.items() if not K.is_zero(c)})

    def scale(self, a, c):
        K = self.K
        if K.is_zero(c):
            return Poly(self, {})
        return Poly(self, {e: K.mul(x, c) for e, x in a.terms.items() if not K.is_zero(K.mul(x, c))})

    def mul_term(self, a, exps, c):
        K = self.K
        out = {}
        for e, x in a.terms.items():
            y = K.mul(x, c)
            if not K.is_zero(y):
                out[tuple(i + j for i, j in zip(e, exps))] = y
        return Poly(self, out)

    def is_zero(self, a):
        return not a.terms

    def eq(self, a, b):
        return a.terms == b.terms

    def inv(self, a):
        if len(a.terms) == 1 and self._zero_exp in a.terms:
            return self.const(self.K.inv(a.terms[self._zero_exp]))
        raise ZeroDenominator(f"{self.fmt(a)} is not a unit in {self}")

    def divide_exact(self, a, b):
        """Exact division; raises if the division leaves a remainder."""
        q, r = self.divmod_multi(a, [b])
        if r.terms:
            raise ZeroDenominator(f"{self.fmt(b)} does not divide {self.fmt(a)}")
        return q[0]

    def divmod_multi(self, f, divisors):
        """Multivariate division; over Z a term is divided only when its coefficient is. Returns (quotients, remainder)."""
        K = self.K
        key = self.key
        qs = [dict() for _ in divisors]
        leads = []
        field = K.is_field
        for g in divisors:
            lm = max(g.terms, key=key)
            leads.append((lm, K.inv(g.terms[lm]) if field else g.terms[lm]))
        p = dict(f.terms)
        r = {}
        while p:
            lm = max(p, key=key)
            lc = p[lm]
            for i, g in enumerate(divisors):
                glm, ginv = leads[i]
                if all(x >= y for x, y in zip(lm, glm)):
                    if field:
                        c = K.mul(lc, ginv)
                    elif lc % ginv == 0:
                        c = lc // ginv
                    else:
                        continue
                    shift = tuple(x - y for x, y in zip(lm, glm))
                    qs[i][shift] = K.add(qs[i].get(shift, K.zero()), c)
                    for e, x in g.terms.items():
                        ne = tuple(a + b for a, b in zip(e, shift))
                        v = K.sub(p.get(ne, K.zero()), K.mul(c, x))
                        if K.is_zero(v):
                            p.pop(ne, None)
                        else:
                            p[ne] = v
                    break
            else:
                r[lm] = lc
                del p[lm]
        return [self.make(q) for q in qs], Poly(self, r)

    # inspection -----------------------------------------------------------------

    def lead(self, a):
        """(exponents, coefficient) of the leading term."""
        lm = max(a.terms, key=self.key)
        return lm, a.terms[lm]

    def coeff(self, a, exps):
        return a.terms.get(tuple(exps), self.K.zero())

    def constant_coeff(self, a):
        return a.terms.get(self._zero_exp, self.K.zero())

    def degree_in(self, a, i) -> int:
        return max((e[i] for e in a.terms), default=-1)

    def evaluate(self, a, values: Sequence, target: Ring):
        """Substitute values (elements of target) for the variables."""
        acc = target.zero()
        cache: dict = {}
        for e, c in a.terms.items():
            term = target.coerce(c)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = target.pow(values[i], k)
                    term = target.mul(term, cache[(i, k)])
            acc = target.add(acc, term)
        return acc

    # io ---------------------------------------------------------------------------

    def fmt(self, a):
        if not a.terms:
            return "0"
        parts = []
        for e, c in a.items():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            cs = self.K.fmt(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if isinstance(self.K, PolynomialRing) and (" " in cs):
                cs = f"({cs})"
            if mono:
                body = mono if cs == "1" else f"{cs}*{mono}"
            else:
                body = cs
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def descriptor(self):
        return {"ring": "Poly", "coeff": _coeff_descriptor(self.K), "vars": list(self.vars)}

    def __str__(self):
        return f"{self.K}[{','.join(self.vars)}]"


def _coeff_descriptor(K):
    if isinstance(K, RationalField):
        return "Q"
    if isinstance(K, ModularRing):
        return {"Fp": K.n}
    return K.descriptor()


# ---------------------------------------------------------------------------
# parsing of the element syntax

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class _Parser:
    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.text = text
        self.toks = []
        pos = 0
        text = str(text)
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                break
            if m.group(1) is not None:
                self.toks.append(("num", int(m.group(1)), m.start(1)))
            elif m.group(2) is not None:
                self.toks.append(("var", m.group(2), m.start(2)))
            else:
                self.toks.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def error(self, msg):
        pos = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
        raise ParseError(msg, self.text, pos)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self, op=None):
        tok = self.peek()
        if op is not None and tok[1] != op:
            self.error(f"expected {op!r}")
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            self.error("empty expression")
        v = self.expr()
        if self.i != len(self.toks):
            self.error("unexpected token")
        return v

    def expr(self):
        R = self.ring
        if self.peek()[1] in ("+", "-"):
            sign = self.take()[1]
            v = self.term()
            if sign == "-":
                v = R.neg(v)
        else:
            v = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            w = self.term()
            v = R.add(v, w) if op == "+" else R.sub(v, w)
        return v

    def term(self):
        R = self.ring
        v = self.factor()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            w = self.factor()
            if op == "*":
                v = R.mul(v, w)
            else:
                try:
                    v = _divide(R, v, w)
                except ZeroDenominator as exc:
                    self.i -= 1
                    self.error(str(exc))
        return v

    def factor(self):
        R = self.ring
        if self.peek()[1] == "-":
            self.take()
            return R.neg(self.factor())
        v = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, k, _ = self.peek()
            if kind != "num":
                self.error("expected exponent")
            self.take()
            v = R.pow(v, k)
        return v

    def atom(self):
        R = self.ring
        kind, val, _ = self.peek()
        if kind == "num":
            self.take()
            return R.from_int(val)
        if kind == "var":
            if isinstance(R, PolynomialRing) and val in R.vars:
                self.take()
                return R.var(val)
            self.error(f"unknown variable {val!r}")
        if val == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        self.error("expected a number, variable or '('")


def _divide(R, a, b):
    if isinstance(R, IntegerRing):
        return R.divide_exact(a, b)
    if isinstance(R, PolynomialRing):
        if b.is_constant() and b.terms:
            return R.mul(a, R.inv(b))
        if R.K.is_field:
            return R.divide_exact(a, b)
        raise ZeroDenominator("division by a non-constant")
    return R.mul(a, R.inv(b))


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class RingDescriptor:
    """One of Z, Zmod(n), Poly(Q | F_p, vars)."""

    kind: str
    modulus: int | None = None
    coeff: str | None = None
    prime: int | None = None
    variables: tuple = ()

    @classmethod
    def from_json(cls, data) -> "RingDescriptor":
        if isinstance(data, RingDescriptor):
            return data
        if not isinstance(data, dict) or "ring" not in data:
            raise InvalidDescriptor(f"ring descriptor must be an object with 'ring', got {data!r}")
        kind = data["ring"]
        allowed = {"Z": {"ring"}, "Zmod": {"ring", "n"}, "Poly": {"ring", "coeff", "vars"}}
        if kind not in allowed:
            raise InvalidDescriptor(f"unknown ring {kind!r}")
        extra = set(data) - allowed[kind]
        if extra:
            raise InvalidDescriptor(f"unknown descriptor fields {sorted(extra)}")
        if kind == "Z":
            return cls("Z")
        if kind == "Zmod":
            n = data.get("n")
            if not isinstance(n, int) or isinstance(n, bool):
                raise InvalidDescriptor("Zmod needs an integer 'n'")
            return cls("Zmod", modulus=n)
        coeff = data.get("coeff")
        vars_ = data.get("vars")
        if not isinstance(vars_, list) or not all(isinstance(v, str) for v in vars_):
            raise InvalidDescriptor("Poly needs a list of variable names in 'vars'")
        if coeff == "Q":
            return cls("Poly", coeff="Q", variables=tuple(vars_))
        if isinstance(coeff, dict) and set(coeff) == {"Fp"} and isinstance(coeff["Fp"], int):
            return cls("Poly", coeff="Fp", prime=coeff["Fp"], variables=tuple(vars_))
        raise InvalidDescriptor(f"bad coefficient field {coeff!r}")

    def to_json(self):
        if self.kind == "Z":
            return {"ring": "Z"}
        if self.kind == "Zmod":
            return {"ring": "Zmod", "n": self.modulus}
        coeff = "Q" if self.coeff == "Q" else {"Fp": self.prime}
        return {"ring": "Poly", "coeff": coeff, "vars": list(self.variables)}


def ring_make(descriptor) -> Ring:
    """Build a ring context from a descriptor (dict or RingDescriptor)."""
    d = RingDescriptor.from_json(descriptor)
    if d.kind == "Z":
        return ZZ
    if d.kind == "Zmod":
        if d.modulus is None or d.modulus < 2:
            raise InvalidDescriptor(f"modulus must be >= 2, got {d.modulus}")
        return ModularRing(d.modulus)
    if not d.variables:
        raise InvalidDescriptor("polynomial ring needs at least one variable")
    if any(not v for v in d.variables):
        raise InvalidDescriptor("empty variable name")
    K = QQ if d.coeff == "Q" else GF(d.prime)
    return PolynomialRing(K, d.variables)


def parse_elements(R: Ring, texts) -> list:
    return [R.parse(t) if isinstance(t, str) else R.coerce(t) for t in texts]


# ---------------------------------------------------------------------------
# monogenic extensions S = R[Y]/(f), f monic


class ExtensionRing(Ring):
    """S = base[Y]/(f) for monic f; elements are coordinate tuples over 1, Y, ..., Y^(d-1)."""

    def __init__(self, base: Ring, f, var: str = "Y"):
        self.base = base
        self.var = var
        if isinstance(base, PolynomialRing):
            if var in base.vars:
                raise InvalidDescriptor(f"extension variable {var!r} clashes with base variables")
            self.flat = PolynomialRing(base.K, base.vars + (var,))
        else:
            self.flat = PolynomialRing(base, (var,))
        if isinstance(f, str):
            f = self.flat.parse(f)
        if isinstance(f, Poly):
            coeffs = self._flat_coeffs(f)
        else:
            coeffs = [base.coerce(c) if not isinstance(c, Poly) else c for c in f]
        while coeffs and base.is_zero(coeffs[-1]):
            coeffs.pop()
        if len(coeffs) < 2:
            raise InvalidDescriptor("extension polynomial must have degree >= 1")
        if not base.is_one(coeffs[-1]):
            raise InvalidDescriptor("extension polynomial must be monic")
        self.f = tuple(coeffs)
        self.d = len(coeffs) - 1
        self.is_field = False

    def _flat_coeffs(self, p: Poly) -> list:
        """Split a flat polynomial into base coefficients by Y-degree (low first)."""
        B = self.base
        deg = max((e[-1] for e in p.terms), default=0)
        if isinstance(B, PolynomialRing):
            parts = [dict() for _ in range(deg + 1)]
            for e, c in p.terms.items():
                parts[e[-1]][e[:-1]] = c
            return [B.make(t) for t in parts]
        out = [B.zero() for _ in range(deg + 1)]
        for e, c in p.terms.items():
            out[e[0]] = c
        return out

    def reduce_coeffs(self, coeffs) -> tuple:
        B = self.base
        c = list(coeffs)
        d = self.d
        for k in range(len(c) - 1, d - 1, -1):
            lead = c[k]
            if B.is_zero(lead):
                continue
            for i in range(d):
                c[k - d + i] = B.sub(c[k - d + i], B.mul(lead, self.f[i]))
            c[k] = B.zero()
        c = c[:d] + [B.zero()] * (d - len(c))
        return tuple(c)

    def element(self, coords) -> tuple:
        B = self.base
        return self.reduce_coeffs([B.parse(x) if isinstance(x, str) else B.coerce(x) if not isinstance(x, Poly) else x for x in coords])

    def from_int(self, n):
        return self.embed(self.base.from_int(n))

    def embed(self, a) -> tuple:
        B = self.base
        return (a,) + tuple(B.zero() for _ in range(self.d - 1))

    def coerce(self, x):
        if isinstance(x, tuple) and len(x) == self.d:
            return x
        return self.embed(self.base.coerce(x))

    def gen(self) -> tuple:
        return self.reduce_coeffs([self.base.zero(), self.base.one()])

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def sub(self, a, b):
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        B = self.base
        prod = [B.zero() for _ in range(2 * self.d - 1)]
        for i, x in enumerate(a):
            if B.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not B.is_zero(y):
                    prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        return self.reduce_coeffs(prod)

    def scale(self, a, r):
        return tuple(self.base.mul(x, r) for x in a)

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def eq(self, a, b):
        return all(self.base.eq(x, y) for x, y in zip(a, b))

    def in_base(self, a) -> bool:
        return all(self.base.is_zero(x) for x in a[1:])

    def to_flat(self, a) -> Poly:
        F = self.flat
        if isinstance(self.base, PolynomialRing):
            terms = {}
            for i, x in enumerate(a):
                for e, c in x.terms.items():
                    terms[e + (i,)] = c
            return F.make(terms)
        return F.make({(i,): x for i, x in enumerate(a)})

    def from_flat(self, p: Poly) -> tuple:
        return self.reduce_coeffs(self._flat_coeffs(p))

    def mult_matrix(self, x) -> list[list]:
        """Matrix of y -> x*y on the power basis (column j = coordinates of x*Y^j)."""
        cols = []
        basis_vec = [self.base.zero()] * self.d
        for j in range(self.d):
            e = list(basis_vec)
            e[j] = self.base.one()
            cols.append(self.mul(x, tuple(e)))
        return [[cols[j][i] for j in range(self.d)] for i in range(self.d)]

    def inv(self, a):
        if self.in_base(a):
            return self.embed(self.base.inv(a[0]))
        raise ZeroDenominator(f"cannot invert {self.fmt(a)} in {self}")

    def parse(self, text):
        return self.from_flat(self.flat.parse(text))

    def fmt(self, a):
        return self.flat.fmt(self.to_flat(a))

    def fmt_coords(self, a) -> list:
        return [self.base.fmt(x) for x in a]

    def monic_fmt(self) -> str:
        return self.flat.fmt(self.to_flat_poly_of_f())

    def to_flat_poly_of_f(self) -> Poly:
        F = self.flat
        if isinstance(self.base, PolynomialRing):
            terms = {}
            for i, x in enumerate(self.f):
                for e, c in x.terms.items():
                    terms[e + (i,)] = c
            return F.make(terms)
        return F.make({(i,): x for i, x in enumerate(self.f)})

    def descriptor(self):
        return {"base": self.base.descriptor(), "monic": self.monic_fmt()}

    def __str__(self):
        return f"{self.base}[{self.var}]/({self.monic_fmt()})"


def extension_make(data) -> ExtensionRing:
    """Extension from JSON ``{"base": {...}, "monic": "Y^2+1"}``."""
    if not isinstance(data, dict) or set(data) - {"base", "monic", "var"} or "base" not in data or "monic" not in data:
        raise InvalidDescriptor("extension descriptor needs exactly 'base' and 'monic'")
    base = ring_make(data["base"])
    return ExtensionRing(base, data["monic"], data.get("var", "Y"))
