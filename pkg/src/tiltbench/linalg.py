"""Exact dense linear algebra over a prime field F_p.

All matrices are numpy int64 arrays with entries reduced mod p.  Everything
is deterministic: echelon forms always take the first usable pivot row for
the leftmost unresolved column, so identical inputs give identical outputs.

Conventions used throughout the package:

* module elements are ROW vectors and maps act on the right (``x @ F``),
* ``nullspace(A)`` returns a matrix whose COLUMNS span ``{x : A @ x = 0}``,
* ``row_kernel(A)`` returns ROWS spanning ``{x : x @ A = 0}``,
* ``solve`` returns the particular solution with all free variables 0.

Only dense int64 arithmetic, no floats anywhere.  Intermediate products stay
far below 2**63 at the dimensions this package works at (a few hundred).
"""

from functools import lru_cache

import numpy as np


def is_prime(p):
    if not isinstance(p, (int, np.integer)) or p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def check_prime(p):
    if not is_prime(p):
        raise ValueError(f"field order must be a prime, got {p!r}")
    return int(p)


@lru_cache(maxsize=None)
def inverse_table(p):
    """inv[a] = a^(-1) mod p for a = 1..p-1 (inv[0] unused, set to 0)."""
    check_prime(p)
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    inv.setflags(write=False)
    return inv


def asfield(A, p):
    """Copy A into a fresh int64 array reduced mod p."""
    M = np.array(A, dtype=np.int64, copy=True)
    M %= p
    return M


def mm(p, *mats):
    """Exact product of one or more matrices, reduced mod p."""
    out = mats[0] % p
    for M in mats[1:]:
        out = (out @ M) % p
    return out


def matpow(A, k, p):
    n = A.shape[0]
    out = np.eye(n, dtype=np.int64)
    base = A % p
    while k > 0:
        if k & 1:
            out = (out @ base) % p
        base = (base @ base) % p
        k >>= 1
    return out


def rref(A, p):
    """Reduced row echelon form.

    Returns ``(R, pivots, rank)`` where pivots is the tuple of pivot column
    indices.  Deterministic: leftmost unresolved column first, topmost
    nonzero row as pivot, pivot normalized to 1, elimination above and below.
    """
    R = asfield(A, p)
    nrows, ncols = R.shape
    inv = inverse_table(p)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = (R[r] * inv[R[r, c]]) % p
        col = R[:, c].copy()
        col[r] = 0
        if np.any(col):
            R -= np.outer(col, R[r])
            R %= p
        pivots.append(c)
        r += 1
    return R, tuple(pivots), r


def rank(A, p):
    return rref(A, p)[2]


def row_space(A, p):
    """Canonical basis (rref rows, zero rows dropped) of the row space."""
    R, _, rk = rref(A, p)
    return R[:rk]


def row_space_key(A, p):
    """Hashable canonical signature of the row space of A."""
    R = row_space(A, p)
    return (R.shape[1],) + tuple(R.ravel().tolist())


def in_row_space(v, R, p, pivots=None):
    """Is row vector v in the row space of R?  R must be in rref."""
    return not np.any(reduce_rows(np.atleast_2d(v), R, p, pivots))


def reduce_rows(V, R, p, pivots=None):
    """Reduce the rows of V modulo the rref matrix R (remainders returned)."""
    V = asfield(V, p)
    if R.shape[0] == 0:
        return V
    if pivots is None:
        pivots = [int(np.argmax(row != 0)) for row in R if np.any(row)]
    for i, c in enumerate(pivots):
        coef = V[:, c].copy()
        if np.any(coef):
            V -= np.outer(coef, R[i])
            V %= p
    return V


def nullspace(A, p):
    """Columns form a basis of ``{x : A @ x = 0}``.

    Column count is ``cols(A) - rank(A)``; free columns are taken in
    ascending order so the result is canonical.
    """
    A = np.asarray(A, dtype=np.int64)
    R, pivots, rk = rref(A, p)
    ncols = A.shape[1]
    free = [c for c in range(ncols) if c not in set(pivots)]
    N = np.zeros((ncols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        N[f, j] = 1
        for i, c in enumerate(pivots):
            N[c, j] = (-R[i, f]) % p
    return N


def row_kernel(A, p):
    """Rows form a basis of ``{x : x @ A = 0}`` (the left nullspace)."""
    return nullspace(np.asarray(A, dtype=np.int64).T, p).T


def solve(A, b, p):
    """One solution of ``A @ x = b`` with free variables set to 0, or None."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    X = solve_matrix(A, b.reshape(-1, 1), p)
    return None if X is None else X[:, 0]


def solve_matrix(A, B, p):
    """Solve ``A @ X = B`` for all columns at once (free variables 0).

    Returns X or None if any column is inconsistent.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    n = A.shape[1]
    aug = np.hstack([A % p, B % p])
    R, pivots, rk = rref(aug, p)
    pivots = [c for c in pivots if c < n]
    rkA = len(pivots)
    # rows past rkA have zero A-part; any nonzero B-part there = inconsistent
    if np.any(R[rkA:, n:]):
        return None
    X = np.zeros((n, B.shape[1]), dtype=np.int64)
    for i, c in enumerate(pivots):
        X[c] = R[i, n:]
    return X


def solve_left(A, B, p):
    """Solve ``X @ A = B`` row-wise (free variables 0), or None.

    This is the shape that comes up with row-vector modules: find a map X
    whose composite with A gives B.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    X = solve_matrix(A.T, B.T, p)
    return None if X is None else X.T


def inv(A, p):
    """Exact inverse, or None if A is singular (A must be square)."""
    A = np.asarray(A, dtype=np.int64)
    n, m = A.shape
    if n != m:
        return None
    X = solve_matrix(A, np.eye(n, dtype=np.int64), p)
    if X is None or np.any(mm(p, A, X) != np.eye(n, dtype=np.int64)):
        return None
    return X


def block_diag(blocks, p=None):
    """Block diagonal assembly of a list of 2d arrays."""
    blocks = [np.asarray(b, dtype=np.int64) for b in blocks]
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out if p is None else out % p


class QuotientMap:
    """Coordinates on the quotient of F_p^dim by the row space of `sub`.

    ``proj`` (dim x qdim) sends a row vector to its quotient coordinates,
    ``section`` (qdim x dim) picks the canonical representative supported on
    the non-pivot columns.  project(lift(c)) == c for all c, and the row
    space of `sub` projects to 0.
    """

    def __init__(self, sub, dim, p):
        self.p = p
        self.dim = dim
        sub = np.asarray(sub, dtype=np.int64).reshape(-1, dim) if dim else \
            np.zeros((0, 0), dtype=np.int64)
        R, pivots, rk = rref(sub, p)
        self.sub_rref = R[:rk]
        self.pivots = pivots
        free = [c for c in range(dim) if c not in set(pivots)]
        self.free = tuple(free)
        self.qdim = len(free)
        # reduce the identity by the subspace, then restrict to free columns
        M = np.eye(dim, dtype=np.int64)
        M = reduce_rows(M, self.sub_rref, p, pivots)
        self.proj = M[:, free]
        S = np.zeros((self.qdim, dim), dtype=np.int64)
        for j, f in enumerate(free):
            S[j, f] = 1
        self.section = S

    def project(self, rows):
        return mm(self.p, np.atleast_2d(np.asarray(rows, dtype=np.int64)),
                  self.proj)

    def lift(self, coords):
        return mm(self.p, np.atleast_2d(np.asarray(coords, dtype=np.int64)),
                  self.section)


class LinExpander:
    """Expand vectors as combinations of a fixed spanning list of rows.

    Rows may be dependent; expansion coefficients are then the canonical ones
    coming from echelonizing in the given order.  ``expand`` returns the
    coefficient row (or None when the vector is outside the span).
    """

    def __init__(self, rows, p):
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim != 2:
            raise ValueError("LinExpander needs a 2d array of rows")
        self.p = p
        self.k, self.d = rows.shape
        aug = np.hstack([rows % p, np.eye(self.k, dtype=np.int64)])
        # echelonize, pivoting only inside the first d columns
        R = aug
        inv_t = inverse_table(p)
        pivots = []
        r = 0
        for c in range(self.d):
            if r == self.k:
                break
            nz = np.nonzero(R[r:, c])[0]
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                R[[r, i]] = R[[i, r]]
            R[r] = (R[r] * inv_t[R[r, c]]) % p
            col = R[:, c].copy()
            col[r] = 0
            if np.any(col):
                R -= np.outer(col, R[r])
                R %= p
            pivots.append(c)
            r += 1
        self.rank = r
        self.red = R[:r, :self.d]       # rref basis of the span
        self.transform = R[:r, self.d:]  # red = transform @ rows
        self.pivots = pivots

    def expand_matrix(self, V):
        """Expand each row of V; returns (coeffs, ok_mask)."""
        V = asfield(np.atleast_2d(V), self.p)
        C = np.zeros((V.shape[0], self.rank), dtype=np.int64)
        for i, c in enumerate(self.pivots):
            f = V[:, c].copy()
            if np.any(f):
                V -= np.outer(f, self.red[i])
                V %= self.p
            C[:, i] = f
        coeffs = mm(self.p, C, self.transform)
        ok = ~np.any(V, axis=1)
        return coeffs, ok

    def expand(self, v):
        coeffs, ok = self.expand_matrix(np.atleast_2d(v))
        return coeffs[0] if ok[0] else None


# ---------------------------------------------------------------------------
# polynomials over F_p (coefficient rows, constant term first)


def poly_trim(a, p):
    """Drop trailing zero coefficients; the zero polynomial has length 0."""
    a = np.asarray(a, dtype=np.int64) % p
    nz = np.nonzero(a)[0]
    return a[:int(nz[-1]) + 1] if nz.size else a[:0]


def poly_add(a, b, p):
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.int64)
    out[:len(a)] = np.asarray(a, dtype=np.int64)
    out[:len(b)] += np.asarray(b, dtype=np.int64)
    return poly_trim(out, p)


def poly_sub(a, b, p):
    return poly_add(a, (-np.asarray(b, dtype=np.int64)) % p, p)


def poly_mul(a, b, p):
    a, b = poly_trim(a, p), poly_trim(b, p)
    if not len(a) or not len(b):
        return np.zeros(0, dtype=np.int64)
    return np.convolve(a, b) % p


def poly_divmod(a, b, p):
    """Quotient and remainder of a by b (b nonzero)."""
    a, b = poly_trim(a, p), poly_trim(b, p)
    if not len(b):
        raise ZeroDivisionError("polynomial division by zero")
    lead = inverse_table(p)[int(b[-1])]
    q = np.zeros(max(len(a) - len(b) + 1, 0), dtype=np.int64)
    r = a.copy()
    while len(r) >= len(b):
        c = (int(r[-1]) * lead) % p
        k = len(r) - len(b)
        q[k] = c
        r[k:] = (r[k:] - c * b) % p
        r = poly_trim(r, p)
    return q, r


def poly_gcd(a, b, p):
    """Monic greatest common divisor."""
    a, b = poly_trim(a, p), poly_trim(b, p)
    while len(b):
        a, b = b, poly_divmod(a, b, p)[1]
    if len(a):
        a = (a * inverse_table(p)[int(a[-1])]) % p
    return a


def poly_xgcd(a, b, p):
    """(g, s, t) with s*a + t*b == g and g the monic gcd."""
    r0, r1 = poly_trim(a, p), poly_trim(b, p)
    s0 = np.array([1], dtype=np.int64)
    s1 = np.zeros(0, dtype=np.int64)
    t0 = np.zeros(0, dtype=np.int64)
    t1 = np.array([1], dtype=np.int64)
    while len(r1):
        q, r = poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1, p), p)
        t0, t1 = t1, poly_sub(t0, poly_mul(q, t1, p), p)
    if len(r0):
        c = inverse_table(p)[int(r0[-1])]
        r0, s0, t0 = (r0 * c) % p, (s0 * c) % p, (t0 * c) % p
    return r0, s0, t0


def poly_mulmod(a, b, m, p):
    return poly_divmod(poly_mul(a, b, p), m, p)[1]


def poly_powmod(a, e, m, p):
    """a**e mod m over F_p; e may be any nonnegative integer."""
    out = np.array([1], dtype=np.int64)
    base = poly_divmod(a, m, p)[1]
    while e:
        if e & 1:
            out = poly_mulmod(out, base, m, p)
        base = poly_mulmod(base, base, m, p)
        e >>= 1
    return out


def matrix_min_poly(F, p):
    """Monic minimal polynomial of a square matrix, constant term first."""
    F = asfield(F, p)
    d = F.shape[0]
    if d == 0:
        return np.array([1], dtype=np.int64)
    vecs = [np.eye(d, dtype=np.int64).ravel()]
    W = np.eye(d, dtype=np.int64)
    while True:
        W = mm(p, W, F)
        c = LinExpander(np.array(vecs), p).expand(W.ravel())
        if c is not None:
            coeffs = np.zeros(len(vecs) + 1, dtype=np.int64)
            coeffs[-1] = 1
            coeffs[:len(c)] = (-c) % p
            return coeffs
        vecs.append(W.ravel())


def matrix_poly_eval(coeffs, F, p):
    """Evaluate a polynomial (constant term first) at a square matrix."""
    F = asfield(F, p)
    d = F.shape[0]
    out = np.zeros((d, d), dtype=np.int64)
    eye = np.eye(d, dtype=np.int64)
    for c in reversed(list(np.asarray(coeffs, dtype=np.int64) % p)):
        out = (mm(p, out, F) + int(c) * eye) % p
    return out


def char_poly(A, p):
    """Characteristic polynomial det(tI - A) over F_p, constant term first.

    Exact similarity reduction to Hessenberg form, then the standard
    leading-principal-minor recurrence; always monic of degree dim(A).
    """
    A = asfield(A, p)
    d = A.shape[0]
    if d == 0:
        return np.array([1], dtype=np.int64)
    H = A.copy()
    inv = inverse_table(p)
    for c in range(d - 2):
        rows = np.nonzero(H[c + 1:, c])[0]
        if rows.size == 0:
            continue
        i = c + 1 + int(rows[0])
        if i != c + 1:
            H[[c + 1, i]] = H[[i, c + 1]]
            H[:, [c + 1, i]] = H[:, [i, c + 1]]
        piv = inv[int(H[c + 1, c])]
        for r in range(c + 2, d):
            f = (int(H[r, c]) * piv) % p
            if f:
                H[r] = (H[r] - f * H[c + 1]) % p
                H[:, c + 1] = (H[:, c + 1] + f * H[:, r]) % p
    polys = [np.array([1], dtype=np.int64)]
    for k in range(1, d + 1):
        term = poly_mul(np.array([(-int(H[k - 1, k - 1])) % p, 1],
                                 dtype=np.int64), polys[k - 1], p)
        prod = 1
        for r in range(k - 2, -1, -1):
            prod = (prod * int(H[r + 1, r])) % p
            if prod == 0:
                break
            coef = (int(H[r, k - 1]) * prod) % p
            if coef:
                term = poly_sub(term, (coef * polys[r]) % p, p)
        polys.append(term)
    out = np.zeros(d + 1, dtype=np.int64)
    cp = polys[d]
    out[:len(cp)] = cp
    return out
