"""Small exact linear algebra over a Ring: characteristic polynomials, field solves."""

from __future__ import annotations

from typing import Sequence

from .ring import PolynomialRing, Ring


def berkowitz(R: Ring, M: Sequence[Sequence]) -> list:
    """Coefficients [1, c1, ..., cn] (highest degree first) of det(T*I - M).

    Division free, so valid over any commutative ring.
    """
    n = len(M)
    q = [R.one()]
    for i in range(n - 1, -1, -1):
        a = M[i][i]
        row = [M[i][j] for j in range(i + 1, n)]
        col = [M[j][i] for j in range(i + 1, n)]
        sub = [[M[r][c] for c in range(i + 1, n)] for r in range(i + 1, n)]
        t = [R.one(), R.neg(a)]
        v = col
        for _ in range(n - i - 1):
            t.append(R.neg(R.dot(row, v)))
            v = [R.dot(r, v) for r in sub]
        m = len(q)
        p = []
        for r in range(m + 1):
            acc = R.zero()
            for c in range(m):
                if 0 <= r - c < len(t):
                    acc = R.add(acc, R.mul(t[r - c], q[c]))
            p.append(acc)
        q = p
    return q


def coeffs_to_poly(P: PolynomialRing, coeffs_high_first: Sequence) -> object:
    """Univariate polynomial in P (one variable) from a coefficient list."""
    n = len(coeffs_high_first) - 1
    return P.make({(n - k,): c for k, c in enumerate(coeffs_high_first)})


def mat_vec(R: Ring, M, v):
    return [R.dot(row, v) for row in M]


def rref(K: Ring, A: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over a field. Returns (rows, pivot columns)."""
    A = [list(r) for r in A]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = None
        for i in range(r, rows):
            if not K.is_zero(A[i][c]):
                p = i
                break
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = K.inv(A[r][c])
        A[r] = [K.mul(x, inv) for x in A[r]]
        for i in range(rows):
            if i != r and not K.is_zero(A[i][c]):
                f = A[i][c]
                A[i] = [K.sub(x, K.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def solve(K: Ring, A: list[list], b: list):
    """One solution of A x = b over a field (free variables set to 0), or None."""
    ncols = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    if not aug:
        return [K.zero()] * ncols
    R_, piv = rref(K, aug)
    if ncols in piv:
        return None
    x = [K.zero()] * ncols
    for i, c in enumerate(piv):
        x[c] = R_[i][ncols]
    return x


def sparse_solve(K: Ring, columns: list[dict], target: dict):
    """Solve sum_j x_j * columns[j] = target, vectors given as dicts keyed by row label."""
    labels = sorted({k for col in columns for k in col} | set(target), key=repr)
    index = {k: i for i, k in enumerate(labels)}
    A = [[K.zero()] * len(columns) for _ in labels]
    for j, col in enumerate(columns):
        for k, v in col.items():
            A[index[k]][j] = v
    b = [target.get(k, K.zero()) for k in labels]
    if not columns:
        return [] if all(K.is_zero(x) for x in b) else None
    return solve(K, A, b)


def t_ring(base: Ring, var: str = "T") -> PolynomialRing:
    """base[T], flattened when base is itself a polynomial ring."""
    if isinstance(base, PolynomialRing):
        return PolynomialRing(base.K, base.vars + (var,))
    return PolynomialRing(base, (var,))


def poly_in_t(base: Ring, coeffs_high_first: Sequence, var: str = "T"):
    P = t_ring(base, var)
    n = len(coeffs_high_first) - 1
    terms = {}
    for k, c in enumerate(coeffs_high_first):
        if isinstance(base, PolynomialRing):
            for e, x in c.terms.items():
                terms[e + (n - k,)] = x
        else:
            terms[(n - k,)] = c
    return P.make(terms)


def express_over_base(S, gens, y):
    """Coordinates r with y == sum r_i * gens_i and r_i in the base ring, or None.

    Solves over the fraction field (Q for Z) and keeps only base-ring solutions.
    """
    from fractions import Fraction

    from .ring import QQ, IntegerRing

    B = S.base
    if isinstance(B, IntegerRing):
        K = QQ
        A = [[Fraction(g[i]) for g in gens] for i in range(S.d)]
        sol = solve(K, A, [Fraction(c) for c in y])
        if sol is None or any(x.denominator != 1 for x in sol):
            return None
        return [int(x) for x in sol]
    if B.is_field:
        A = [[g[i] for g in gens] for i in range(S.d)]
        return solve(B, A, list(y))
    return None


def char_poly_of_multiplication(S, x=None, module_gens=None, matrix=None, var: str = "T"):
    """Characteristic polynomial (monic, in base[T]) of multiplication by x.

    The matrix is taken from ``matrix`` when supplied, from the power basis of
    the extension S by default, or by expressing x*g over ``module_gens``.
    """
    from .errors import NotExpressible

    if matrix is not None:
        base = S
        M = [list(r) for r in matrix]
        if any(len(r) != len(M) for r in M):
            raise NotExpressible("multiplication matrix must be square")
    elif module_gens is None:
        base = S.base
        M = S.mult_matrix(x)
    else:
        base = S.base
        gens = list(module_gens)
        cols = []
        for g in gens:
            r = express_over_base(S, gens, S.mul(x, g))
            if r is None:
                raise NotExpressible(f"{S.fmt(S.mul(x, g))} is not in the base-span of the generators")
            cols.append(r)
        M = [[cols[j][i] for j in range(len(gens))] for i in range(len(gens))]
    return poly_in_t(base, berkowitz(base, M), var)
