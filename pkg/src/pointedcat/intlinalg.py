"""Exact integer linear algebra: row echelon, Smith form, and Q/Z solving.

The elimination kernels are written as plain loops over 2-D arrays so the
same source runs two ways: jit-compiled over int64 (fast path) and plain
python over object arrays holding big ints (always-exact fallback).  The
int64 path aborts with an overflow flag when entries grow past 2^59 and the
wrapper replays the computation on the fallback path.

Solving A x = b over the divisible group Q/Z needs no Hermite/Smith
machinery beyond row echelon: after unimodular row reduction each pivot row
is divisible (Q/Z is divisible), so solvability is exactly the vanishing of
the transformed right-hand side on the zero rows.
"""

from __future__ import annotations

from math import gcd, lcm

import numpy as np

from ._backend import USE_NUMBA, jit_or_python
from .qz import QZ

_LIMIT = 1 << 59
_GUARD = 1 << 28


def _echelon_inplace(M, ncols_main, guard):
    """Row echelon by unimodular row ops; pivots only in the first
    ncols_main columns.  Returns (rank, overflow_flag).

    With guard > 0 the routine aborts (flag 1) before any product could
    exceed int64; the big-integer caller passes guard = 0.
    """
    nrows, ncols = M.shape
    r = 0
    for c in range(ncols_main):
        while True:
            best = -1
            for i in range(r, nrows):
                v = M[i, c]
                if v != 0:
                    if best < 0:
                        best = i
                    else:
                        a = M[best, c]
                        if (v if v > 0 else -v) < (a if a > 0 else -a):
                            best = i
            if best < 0:
                break
            if best != r:
                for l in range(ncols):
                    tmp = M[r, l]
                    M[r, l] = M[best, l]
                    M[best, l] = tmp
            p = M[r, c]
            if guard > 0:
                pm = 0
                for l in range(ncols):
                    v = M[r, l]
                    va = v if v > 0 else -v
                    if va > pm:
                        pm = va
                if pm > guard:
                    return r, 1
            done = True
            for i in range(r + 1, nrows):
                v = M[i, c]
                if v != 0:
                    q = v // p
                    if guard > 0:
                        qa = q if q > 0 else -q
                        if qa > guard:
                            return r, 1
                    if q != 0:
                        for l in range(ncols):
                            M[i, l] = M[i, l] - q * M[r, l]
                        if guard > 0:
                            rm = 0
                            for l in range(ncols):
                                v2 = M[i, l]
                                va = v2 if v2 > 0 else -v2
                                if va > rm:
                                    rm = va
                            if rm > guard * guard:
                                return r, 1
                    if M[i, c] != 0:
                        done = False
            if done:
                if M[r, c] < 0:
                    for l in range(ncols):
                        M[r, l] = -M[r, l]
                r += 1
                break
    return r, 0


_echelon_jit = jit_or_python(_echelon_inplace)


def row_echelon(M, ncols_main=None):
    """Unimodular row echelon of an integer matrix.

    Returns (R, rank): R is the reduced array (same shape), pivoting
    restricted to the first ncols_main columns.  Falls back to exact
    big-integer arithmetic if int64 overflows.
    """
    M = np.asarray(M)
    if M.size == 0:
        return M.astype(np.int64, copy=True), 0
    if ncols_main is None:
        ncols_main = M.shape[1]
    if M.dtype != object:
        W = M.astype(np.int64, copy=True)
        fast = _echelon_jit if USE_NUMBA else _echelon_inplace
        rank, over = fast(W, ncols_main, _GUARD)
        if not over:
            return W, rank
    W = np.empty(M.shape, dtype=object)
    W[:] = [[int(v) for v in row] for row in M]
    rank, _ = _echelon_inplace(W, ncols_main, 0)
    return W, rank


def solve_mod1(A, rhs_num, rhs_den: int):
    """Solve A x = b over Q/Z for integer A and b = rhs_num / rhs_den.

    Returns (xnum, xden) with x = xnum/xden, or None when unsolvable.
    Unsolvability shows up exactly as a nonzero transformed rhs on a zero
    row of the echelon form.
    """
    A = np.asarray(A)
    nrows, ncols = A.shape if A.ndim == 2 else (len(rhs_num), 0)
    rhs = np.asarray(rhs_num)
    if nrows == 0:
        return np.zeros(ncols, dtype=np.int64), 1
    if ncols == 0:
        if any(int(v) % rhs_den for v in rhs):
            return None
        return np.zeros(0, dtype=np.int64), 1
    M = np.concatenate([A, rhs.reshape(-1, 1)], axis=1)
    R, rank = row_echelon(M, ncols_main=ncols)
    den = int(rhs_den)
    # zero rows must have zero rhs mod 1
    for i in range(rank, nrows):
        if int(R[i, ncols]) % den != 0:
            return None
    # back substitution over Q/Z, choosing the canonical lift at each pivot
    x = [QZ(0, 1)] * ncols
    piv = []
    for i in range(rank):
        row = R[i]
        c = 0
        while c < ncols and row[c] == 0:
            c += 1
        piv.append((i, c))
    for i, c in reversed(piv):
        row = R[i]
        acc = QZ(int(row[ncols]), den)
        for j in range(c + 1, ncols):
            v = int(row[j])
            if v and x[j].num:
                acc = acc - v * x[j]
        x[c] = acc.div(int(row[c]))
    xden = 1
    for v in x:
        xden = lcm(xden, v.den)
    xnum = np.array([v.num * (xden // v.den) for v in x], dtype=np.int64)
    return xnum, xden


def kernel_basis(A):
    """Integer basis of {x : A x = 0} as columns of a matrix."""
    A = np.asarray(A)
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    aug = np.concatenate([A.T, np.eye(n, dtype=np.int64)], axis=1)
    R, rank = row_echelon(aug, ncols_main=m)
    return R[rank:, m:].T.copy()


def column_lattice(B):
    """A reduced generating set (columns) of the column lattice of B."""
    B = np.asarray(B)
    if B.size == 0:
        return np.zeros((B.shape[0], 0), dtype=np.int64)
    R, rank = row_echelon(B.T.copy(), ncols_main=B.shape[0])
    return R[:rank].T.copy()


def solve_int(A, B):
    """Integer solution X of A X = B (columns independent; must be solvable)."""
    A = np.asarray(A)
    B = np.asarray(B)
    m, k = A.shape
    r = B.shape[1]
    aug = np.concatenate([A, B], axis=1).astype(np.int64)
    R, rank = row_echelon(aug, ncols_main=k)
    X = np.zeros((k, r), dtype=object)
    piv = []
    for i in range(rank):
        c = 0
        while c < k and R[i, c] == 0:
            c += 1
        piv.append((i, c))
    for i, c in reversed(piv):
        for j in range(r):
            acc = int(R[i, k + j])
            for l in range(c + 1, k):
                if R[i, l]:
                    acc -= int(R[i, l]) * int(X[l, j])
            q, rem = divmod(acc, int(R[i, c]))
            if rem:
                raise ArithmeticError("solve_int: system has no integer solution")
            X[c, j] = q
    for i in range(rank, m):
        for j in range(r):
            acc = int(R[i, k + j])
            if acc != 0:
                raise ArithmeticError("solve_int: inconsistent system")
    return X.astype(np.int64) if all(abs(int(v)) < _LIMIT for v in X.flat) else X


def _snf_inplace(A, Uinv, track, guard):
    """Smith normal form in place; optionally tracks the inverse row
    transform so cokernel generators can be read off.  Returns an overflow
    flag.  With guard > 0 every entry is kept below the guard at all times
    (aborting otherwise), so no int64 product can overflow; the
    big-integer caller passes guard = 0."""
    m, n = A.shape
    mu = Uinv.shape[0]

    def _row_ok(i):
        if guard <= 0:
            return True
        for l in range(n):
            v = A[i, l]
            if (v if v > 0 else -v) > guard:
                return False
        return True

    def _col_ok(j):
        if guard <= 0:
            return True
        for l in range(m):
            v = A[l, j]
            if (v if v > 0 else -v) > guard:
                return False
        return True

    def _u_ok(j):
        if guard <= 0 or not track:
            return True
        for l in range(mu):
            v = Uinv[l, j]
            if (v if v > 0 else -v) > guard:
                return False
        return True

    k = 0
    while k < min(m, n):
        bi, bj = -1, -1
        for i in range(k, m):
            for j in range(k, n):
                v = A[i, j]
                if v != 0:
                    if bi < 0:
                        bi, bj = i, j
                    else:
                        a = A[bi, bj]
                        if (v if v > 0 else -v) < (a if a > 0 else -a):
                            bi, bj = i, j
        if bi < 0:
            break
        if bi != k:
            for l in range(n):
                tmp = A[k, l]
                A[k, l] = A[bi, l]
                A[bi, l] = tmp
            if track:
                for l in range(mu):
                    tmp = Uinv[l, k]
                    Uinv[l, k] = Uinv[l, bi]
                    Uinv[l, bi] = tmp
        if bj != k:
            for l in range(m):
                tmp = A[l, k]
                A[l, k] = A[l, bj]
                A[l, bj] = tmp
        clean = False
        while not clean:
            clean = True
            p = A[k, k]
            for i in range(k + 1, m):
                v = A[i, k]
                if v != 0:
                    q = v // p
                    if q != 0:
                        for l in range(n):
                            A[i, l] = A[i, l] - q * A[k, l]
                        if track:
                            for l in range(mu):
                                Uinv[l, k] = Uinv[l, k] + q * Uinv[l, i]
                        if not _row_ok(i) or not _u_ok(k):
                            return 1
                    if A[i, k] != 0:
                        for l in range(n):
                            tmp = A[k, l]
                            A[k, l] = A[i, l]
                            A[i, l] = tmp
                        if track:
                            for l in range(mu):
                                tmp = Uinv[l, k]
                                Uinv[l, k] = Uinv[l, i]
                                Uinv[l, i] = tmp
                        clean = False
                        p = A[k, k]
            for j in range(k + 1, n):
                v = A[k, j]
                if v != 0:
                    q = v // A[k, k]
                    if q != 0:
                        for l in range(m):
                            A[l, j] = A[l, j] - q * A[l, k]
                        if not _col_ok(j):
                            return 1
                    if A[k, j] != 0:
                        for l in range(m):
                            tmp = A[l, k]
                            A[l, k] = A[l, j]
                            A[l, j] = tmp
                        clean = False
        p = A[k, k]
        fixed = False
        for i in range(k + 1, m):
            if fixed:
                break
            for j in range(k + 1, n):
                if A[i, j] % p != 0:
                    for l in range(n):
                        A[k, l] = A[k, l] + A[i, l]
                    if track:
                        for l in range(mu):
                            Uinv[l, i] = Uinv[l, i] - Uinv[l, k]
                    if not _row_ok(k) or not _u_ok(i):
                        return 1
                    fixed = True
                    break
        if fixed:
            continue
        if A[k, k] < 0:
            for l in range(n):
                A[k, l] = -A[k, l]
            if track:
                for l in range(mu):
                    Uinv[l, k] = -Uinv[l, k]
        k += 1
    return 0


_snf_jit = jit_or_python(_snf_inplace)


def smith_normal_form(A, want_uinv: bool = False):
    """Diagonal invariant factors of A, optionally with the inverse row
    transform Uinv (columns of Uinv at diagonal positions generate the
    cokernel)."""
    A = np.asarray(A)
    m, n = A.shape
    if A.size == 0:
        diag = []
        return (diag, np.eye(m, dtype=np.int64)) if want_uinv else diag
    over = 1
    if A.dtype != object:
        W = A.astype(np.int64, copy=True)
        U = np.eye(m, dtype=np.int64)
        fast = _snf_jit if USE_NUMBA else _snf_inplace
        over = fast(W, U, want_uinv, _GUARD)
    if over:
        W = np.empty(A.shape, dtype=object)
        W[:] = [[int(v) for v in row] for row in A]
        U = np.empty((m, m), dtype=object)
        U[:] = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        _snf_inplace(W, U, want_uinv, 0)
    diag = [int(W[i, i]) for i in range(min(m, n)) if W[i, i] != 0]
    if want_uinv:
        return diag, U
    return diag


@jit_or_python
def _gcd2(a, b):
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


@jit_or_python
def _ext_gcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


@jit_or_python
def _unit_scaling_to_gcd(p, M):
    """A unit u mod M with u*p = gcd(p, M) mod M."""
    g = _gcd2(p, M)
    pp = p // g
    mm = M // g
    # pp is invertible mod mm; lift to a unit mod M by adding multiples of mm
    u = pp % mm
    r0, inv, t0 = _ext_gcd(u, mm)
    u = inv % mm
    if u == 0:
        u = 1
    while _gcd2(u, M) != 1:
        u += mm
    return u % M


def _snf_mod_inplace(A, Uinv, M, track):
    """Smith form of A over Z/M with row-transform-inverse tracking.

    Entries stay in [0, M) throughout, so int64 never overflows.  After the
    call A is diagonal with a divisibility chain of divisors of M.
    """
    k, n = A.shape
    mu = Uinv.shape[0]
    r = 0
    while r < min(k, n):
        # pick the entry with minimal gcd(v, M)
        bi, bj, bg = -1, -1, M + 1
        for i in range(r, k):
            for j in range(r, n):
                v = A[i, j] % M
                if v != 0:
                    g = _gcd2(v, M)
                    if g < bg:
                        bi, bj, bg = i, j, g
        if bi < 0:
            break
        if bi != r:
            for l in range(n):
                tmp = A[r, l]
                A[r, l] = A[bi, l]
                A[bi, l] = tmp
            if track:
                for l in range(mu):
                    tmp = Uinv[l, r]
                    Uinv[l, r] = Uinv[l, bi]
                    Uinv[l, bi] = tmp
        if bj != r:
            for l in range(k):
                tmp = A[l, r]
                A[l, r] = A[l, bj]
                A[l, bj] = tmp
        while True:
            # normalize the pivot to gcd(pivot, M) by a unit row scaling
            p = A[r, r] % M
            g = _gcd2(p, M)
            if p != g:
                u = _unit_scaling_to_gcd(p, M)
                _, uinv_val, _ = _ext_gcd(u, M)
                uinv_val %= M
                for l in range(n):
                    A[r, l] = (A[r, l] * u) % M
                if track:
                    for l in range(mu):
                        Uinv[l, r] = (Uinv[l, r] * uinv_val) % M
            p = A[r, r] % M
            # clear the column with Bezout pair-ops where needed
            dirty = False
            for i in range(r + 1, k):
                v = A[i, r] % M
                if v == 0:
                    continue
                if v % p == 0:
                    q = v // p
                    for l in range(n):
                        A[i, l] = (A[i, l] - q * A[r, l]) % M
                    if track:
                        for l in range(mu):
                            Uinv[l, r] = (Uinv[l, r] + q * Uinv[l, i]) % M
                else:
                    g2, a, b = _ext_gcd(p, v)
                    c, d = -(v // g2), p // g2
                    for l in range(n):
                        x, y = A[r, l], A[i, l]
                        A[r, l] = (a * x + b * y) % M
                        A[i, l] = (c * x + d * y) % M
                    if track:
                        # inverse of [[a, b], [c, d]] (det 1) is [[d, -b], [-c, a]]
                        for l in range(mu):
                            x, y = Uinv[l, r], Uinv[l, i]
                            Uinv[l, r] = (x * d - y * c) % M
                            Uinv[l, i] = (-x * b + y * a) % M
                    dirty = True
            if dirty:
                continue
            # clear the row with column ops (nothing to track)
            dirty = False
            for j in range(r + 1, n):
                v = A[r, j] % M
                if v == 0:
                    continue
                if v % p == 0:
                    q = v // p
                    for l in range(k):
                        A[l, j] = (A[l, j] - q * A[l, r]) % M
                else:
                    g2, a, b = _ext_gcd(p, v)
                    c, d = -(v // g2), p // g2
                    for l in range(k):
                        x, y = A[l, r], A[l, j]
                        A[l, r] = (a * x + b * y) % M
                        A[l, j] = (c * x + d * y) % M
                    dirty = True
            if not dirty:
                break
        # divisibility of the remaining block
        p = A[r, r] % M
        fixed = False
        for i in range(r + 1, k):
            if fixed:
                break
            for j in range(r + 1, n):
                if (A[i, j] % M) % p != 0:
                    for l in range(n):
                        A[r, l] = (A[r, l] + A[i, l]) % M
                    if track:
                        for l in range(mu):
                            Uinv[l, i] = (Uinv[l, i] - Uinv[l, r]) % M
                    fixed = True
                    break
        if fixed:
            continue
        r += 1
    return r


_snf_mod_jit = jit_or_python(_snf_mod_inplace)


def smith_normal_form_mod(A, M: int, track: bool = False):
    """Invariant factors of coker over Z/M: (Z/M)^k / im(A mod M).

    Returns (factors, Uinv) where factors has one entry per row of A: the
    diagonal divisor for reduced rows and M for untouched rows; Uinv columns
    (mod M) locate the corresponding cokernel generators.
    """
    A = np.asarray(A)
    k = A.shape[0]
    W = np.array([[int(v) % M for v in row] for row in A], dtype=np.int64)
    U = np.eye(k, dtype=np.int64)
    if W.shape[1] == 0:
        return [M] * k, U
    fast = _snf_mod_jit if USE_NUMBA else _snf_mod_inplace
    r = fast(W, U, M, track)
    factors = [gcd(int(W[i, i]), M) for i in range(r)] + [M] * (k - r)
    return factors, U


def invariant_factors_of_quotient(K, B, M: int):
    """Invariant factors and generators of span(K) / (span(B) + M span(K)).

    K columns are a lattice basis, B columns lie in that lattice, and M is
    a known exponent multiple of the quotient (for group cohomology, |G|).
    Presenting the quotient as coker([W | M I]) keeps all Smith-form
    arithmetic bounded by M.  Returns (factors, generator_columns) with
    factors of 1 dropped; generator_columns[i] has class order factors[i].
    """
    K = np.asarray(K)
    k = K.shape[1]
    if k == 0:
        return [], np.zeros((K.shape[0], 0), dtype=np.int64)
    Bred = column_lattice(B) if B.size else np.zeros((K.shape[0], 0), dtype=np.int64)
    W = solve_int(K, Bred) if Bred.shape[1] else np.zeros((k, 0), dtype=np.int64)
    diag, Uinv = smith_normal_form_mod(W, M, track=True)
    factors = []
    gens = []
    Kobj = K.astype(object)
    for i, d in enumerate(diag):
        if d == 1:
            continue
        factors.append(int(d))
        col = np.array([int(v) for v in Uinv[:, i]], dtype=object)
        gens.append(np.dot(Kobj, col))
    if gens:
        G = np.array(gens, dtype=object).T
        if all(abs(int(v)) < _LIMIT for v in G.flat):
            G = G.astype(np.int64)
    else:
        G = np.zeros((K.shape[0], 0), dtype=np.int64)
    return factors, G
