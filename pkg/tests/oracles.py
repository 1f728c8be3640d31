"""Slow, independent reference implementations used only by the tests.

Everything here is written deliberately differently from the package code
(plain Python lists, brute-force enumeration) so agreement between the two
is meaningful.
"""

from itertools import product


def oracle_rank(A, p):
    """Gaussian elimination on lists of Python ints, no numpy."""
    M = [[int(x) % p for x in row] for row in A]
    if not M:
        return 0
    nrows, ncols = len(M), len(M[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, nrows):
            if M[r][col] % p != 0:
                pivot = r
                break
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        inv = pow(M[rank][col], p - 2, p)
        M[rank] = [(x * inv) % p for x in M[rank]]
        for r in range(nrows):
            if r != rank and M[r][col] % p:
                f = M[r][col]
                M[r] = [(a - f * b) % p for a, b in zip(M[r], M[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def oracle_solve_exists(A, b, p):
    """Does A x = b have a solution?  (rank test on the augmented matrix)"""
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    if not A or not A[0]:
        return all(bi % p == 0 for bi in b)
    return oracle_rank(aug, p) == oracle_rank(A, p)


def all_vectors(n, p):
    """Every vector of F_p^n as a tuple, lexicographic order."""
    return product(range(p), repeat=n)


def oracle_nullity(A, p):
    """Count solutions of A x = 0 by brute force; return log_p of the count."""
    if not A:
        return 0
    ncols = len(A[0])
    count = 0
    for v in all_vectors(ncols, p):
        if all(sum(a * x for a, x in zip(row, v)) % p == 0 for row in A):
            count += 1
    # count is p**nullity
    nullity = 0
    while p ** nullity < count:
        nullity += 1
    assert p ** nullity == count
    return nullity


def oracle_nullspace(A, p):
    """Columns spanning {x : A x = 0}, by list-based elimination."""
    M = [[int(x) % p for x in row] for row in A]
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, nrows):
            if M[r][col] % p:
                pivot = r
                break
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        inv = pow(M[rank][col], p - 2, p)
        M[rank] = [(x * inv) % p for x in M[rank]]
        for r in range(nrows):
            if r != rank and M[r][col] % p:
                f = M[r][col]
                M[r] = [(a - f * b) % p for a, b in zip(M[r], M[rank])]
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-M[i][f]) % p
        basis.append(v)
    return basis  # list of solution vectors


def naive_hom_basis(X, Y):
    """Module maps X -> Y by stacking kron constraints over EVERY algebra
    basis element (the package only uses a generating set)."""
    import numpy as np

    A = X.algebra
    p, dX, dY = A.p, X.dim, Y.dim
    if dX == 0 or dY == 0:
        return []
    blocks = []
    idY = np.eye(dY, dtype=np.int64)
    idX = np.eye(dX, dtype=np.int64)
    for j in range(A.dim):
        E = np.kron(X.action[j], idY) - np.kron(idX, Y.action[j].T)
        blocks.append(E % p)
    stacked = np.vstack(blocks)
    sols = oracle_nullspace(stacked.tolist(), p)
    return [np.array(v, dtype=np.int64).reshape(dX, dY) for v in sols]


def scan_pair_classes(sub, X, Y, kind):
    """Isomorphism classes of one-to-one (kind='mono') or onto (kind='epi')
    maps X -> Y, found the stupid way: walk every element of the hom space
    and deduplicate over the arrow algebra.  Returns the class
    representatives as arrow-algebra modules."""
    import numpy as np

    from tiltbench import linalg as la
    from tiltbench import modcat as mc
    from tiltbench import morphcat as mo

    p = sub.algebra.p
    H = naive_hom_basis(X, Y)
    want = X.dim if kind == "mono" else Y.dim
    reps = []
    for coeffs in all_vectors(len(H), p):
        f = np.zeros((X.dim, Y.dim), dtype=np.int64)
        for c, h in zip(coeffs, H):
            f = (f + c * h) % p
        if la.rank(f, p) != want:
            continue
        W = mo.pair_module(X, Y, f)
        if any(mc.is_isomorphic(W, R) is not None for R in reps):
            continue
        reps.append(W)
    return reps
