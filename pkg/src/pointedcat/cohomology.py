"""Cohomology of the twisted complex: groups, coboundary solving, torsors.

All computations run over the finite-denominator lattice (1/M)Z/Z inside
Q/Z with integer Smith/echelon reductions.  Divisibility of Q/Z makes
A x = b solvable wherever the reduced right-hand side vanishes on zero
rows, so no coefficient modulus ever has to be guessed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import lcm

import numpy as np

from . import intlinalg
from .cochains import Cochain, _reduce
from .errors import ArityUnsupported, BoundExceeded, InvalidInput
from .group_core import FiniteGroup, GSet, Subgroup, coset_gset
from .qz import QZ

H2_BOUND = 32
H3_BOUND = 24
_DENSE_CELL_LIMIT = 120_000_000  # int8 cells of the largest differential


# -- reduced coordinates ------------------------------------------------------


def reduced_dim(G: FiniteGroup, n: int, m: int, X: GSet | None) -> int:
    sz = X.size if m else 1
    return (G.order - 1) ** n * sz


def reduced_flatten(c: Cochain) -> np.ndarray:
    sl = (slice(1, None),) * c.n + (slice(None),) * c.m
    if c.n == 0 and c.m == 0:
        return c.num.reshape(-1)
    return np.ascontiguousarray(c.num[sl]).reshape(-1)


def reduced_unflatten(G: FiniteGroup, n: int, m: int, X: GSet | None,
                      vec: np.ndarray, den: int) -> Cochain:
    c = Cochain.zeros(G, n, m, X)
    sl = (slice(1, None),) * n + (slice(None),) * m
    if n == 0 and m == 0:
        c.num = np.asarray(vec, dtype=np.int64).reshape(1)
    else:
        shape = tuple(G.order - 1 for _ in range(n)) + ((X.size,) if m else ())
        c.num[sl] = np.asarray(vec, dtype=np.int64).reshape(shape)
    num, d = _reduce(c.num % den, den)
    return Cochain(G, n, m, X if m else None, num, d)


_delta_matrix_cache: dict = {}
_cohomology_cache: dict = {}


def delta_matrix(G: FiniteGroup, k: int, m: int, X: GSet | None) -> np.ndarray:
    """Matrix of delta: C^k -> C^{k+1} on normalized (reduced) coordinates."""
    key = (G.table.tobytes(), k, m, X.act.tobytes() if m else None)
    hit = _delta_matrix_cache.get(key)
    if hit is not None:
        return hit
    o = G.order
    sz = X.size if m else 1
    cdim = reduced_dim(G, k, m, X)
    rdim = reduced_dim(G, k + 1, m, X)
    if rdim * cdim > _DENSE_CELL_LIMIT:
        raise BoundExceeded("differential matrix cells", rdim * cdim, _DENSE_CELL_LIMIT)
    T = G.table
    act = X.act if m else None
    D = np.zeros((rdim, cdim), dtype=np.int8)

    def col(gs, x):
        idx = 0
        for a in gs:
            idx = idx * (o - 1) + (a - 1)
        return idx * sz + x if m else idx

    ridx = 0
    for tup in np.ndindex(*([o - 1] * (k + 1) + ([sz] if m else []))):
        gs = [t + 1 for t in tup[: k + 1]]
        x = tup[k + 1] if m else 0
        D[ridx, col(gs[1:], x)] += 1
        for i in range(1, k + 1):
            b = int(T[gs[i - 1], gs[i]])
            if b != 0:
                merged = gs[: i - 1] + [b] + gs[i + 1:]
                D[ridx, col(merged, x)] += 1 if i % 2 == 0 else -1
        lx = int(act[gs[k], x]) if m else 0
        D[ridx, col(gs[:k], lx)] += 1 if (k + 1) % 2 == 0 else -1
        ridx += 1
    if len(_delta_matrix_cache) > 64:
        _delta_matrix_cache.clear()
    _delta_matrix_cache[key] = D
    return D


# -- coboundary solving -------------------------------------------------------


def solve_coboundary(c: Cochain) -> Cochain | None:
    """Some x with delta(x) = c, or None.  Absence is a valid answer."""
    if c.n < 1:
        raise ArityUnsupported("cannot take delta^{-1} into arity below 0")
    if c.is_zero():
        return Cochain.zeros(c.G, c.n - 1, c.m, c.X)
    A = delta_matrix(c.G, c.n - 1, c.m, c.X)
    rhs = reduced_flatten(c)
    sol = intlinalg.solve_mod1(A, rhs, c.den)
    if sol is None:
        return None
    xnum, xden = sol
    return reduced_unflatten(c.G, c.n - 1, c.m, c.X, xnum, xden)


def is_coboundary(c: Cochain) -> bool:
    return solve_coboundary(c) is not None


def cohomologous(a: Cochain, b: Cochain) -> bool:
    return is_coboundary(a - b)


# -- cohomology groups --------------------------------------------------------


@dataclass
class CohomologyGroup:
    """Invariant factors d1 | d2 | ... with representative cocycles."""

    factors: list[int]
    reps: list[Cochain]

    @property
    def order(self) -> int:
        n = 1
        for d in self.factors:
            n *= d
        return n

    def all_elements(self) -> list[Cochain]:
        """Every class, as sums of multiples of the representatives."""
        if not self.factors:
            return []
        out = []
        for ks in product(*[range(d) for d in self.factors]):
            acc = None
            for k, rep in zip(ks, self.reps):
                term = k * rep
                acc = term if acc is None else acc + term
            out.append(acc)
        return out


def _check_bounds(G: FiniteGroup, n: int):
    if n >= 3 and G.order > H3_BOUND:
        raise BoundExceeded("group order for H^3", G.order, H3_BOUND)
    if n == 2 and G.order > H2_BOUND:
        raise BoundExceeded("group order for H^2", G.order, H2_BOUND)


def _group_cohomology(G: FiniteGroup, n: int) -> CohomologyGroup:
    """H^n(G, Q/Z) by duality with integral homology of the reduced bar
    complex: H^n = Hom(ker(d_{n-1}^T)/im(d_n^T), Q/Z)."""
    _check_bounds(G, n)
    if G.order == 1 or n == 0:
        return CohomologyGroup([], [])
    key = (G.table.tobytes(), n)
    hit = _cohomology_cache.get(key)
    if hit is not None:
        return hit
    D_prev = delta_matrix(G, n - 1, 0, None)
    D_cur = delta_matrix(G, n, 0, None)
    K = intlinalg.kernel_basis(D_prev.T.astype(np.int64))
    B = D_cur.T.astype(np.int64)
    imbasis = intlinalg.column_lattice(B)
    factors, gens = intlinalg.invariant_factors_of_quotient(K, imbasis, G.order)
    reps = []
    for i, d in enumerate(factors):
        rep = _dual_representative(gens, imbasis, K, G.order, i, d, G, n)
        reps.append(rep)
    out = CohomologyGroup(factors, reps)
    if len(_cohomology_cache) > 128:
        _cohomology_cache.clear()
    _cohomology_cache[key] = out
    return out


def _dual_representative(gens, imbasis, K, M: int, i: int, order: int,
                         G: FiniteGroup, n: int) -> Cochain:
    """Cocycle f with f(gen_j) = delta_{ij}/order, f(im) = 0, f(M ker) = 0.

    The last constraint pins the class order exactly: together they force
    the induced functional on homology to be the dual basis element."""
    cols = [[int(v) for v in gens[:, j]] for j in range(gens.shape[1])]
    cols += [[int(v) for v in imbasis[:, j]] for j in range(imbasis.shape[1])]
    cols += [[int(v) * M for v in K[:, j]] for j in range(K.shape[1])]
    try:
        Gmat = np.array(cols, dtype=np.int64)  # rows are the constraint vectors
    except OverflowError:
        Gmat = np.array(cols, dtype=object)
    t = np.zeros(len(cols), dtype=np.int64)
    t[i] = 1
    sol = intlinalg.solve_mod1(Gmat, t, order)
    if sol is None:
        raise InvalidInput("dual representative system unexpectedly unsolvable")
    xnum, xden = sol
    rep = reduced_unflatten(G, n, 0, None, xnum, xden)
    assert rep.delta().is_zero(), "representative is not a cocycle"
    return rep


def _stabilizer_suffix_points(X: GSet, gs: list[int], x: int) -> list[int]:
    """p_i = g_i ... g_n . x for i = 1..n+1 (p_{n+1} = x)."""
    pts = [x]
    for g in reversed(gs):
        pts.append(int(X.act[g, pts[-1]]))
    return pts[::-1]


def transport_from_stabilizer(psi: Cochain, G: FiniteGroup, X: GSet,
                              x0: int, H: Subgroup, hidx: dict[int, int]) -> Cochain:
    """Shapiro inflation of a cocycle on Stab(x0) to the X-complex.

    With transversal t and h(g, x) = t_{gx}^{-1} g t_x in H, the value at
    (g1..gn; x) is psi(h1, .., hn) for the suffix-conjugated arguments; this
    maps cocycles to cocycles and restricts back to psi at x0.
    """
    n = psi.n
    t = X.transversal(x0)
    out = Cochain.zeros(G, n, 1, X)
    num = np.zeros(out.num.shape, dtype=np.int64)
    T, inv = G.table, G.inv
    for tup in np.ndindex(*([G.order] * n + [X.size])):
        gs = list(tup[:n])
        if 0 in gs:
            continue
        x = tup[n]
        if t[x] < 0:
            continue  # outside the orbit of x0: supported by zero
        pts = _stabilizer_suffix_points(X, gs, x)
        hs = []
        for i, g in enumerate(gs):
            h = T[T[inv[t[pts[i]]], g], t[pts[i + 1]]]
            hs.append(hidx[int(h)])
        num[tup] = psi.num[tuple(hs)]
    out.num, out.den = _reduce(num, psi.den)
    return out


# sign convention of the twisted transport correction, pinned by the
# regular-module self-test (see tests); do not change independently
_TW_S1, _TW_S2, _TW_S3 = -1, 1, -1


def particular_twisted_solution(omega: Cochain, X: GSet, x0: int,
                                H: Subgroup, hidx: dict[int, int],
                                psi: Cochain) -> Cochain:
    """A solution mu of delta(mu) = omega (omega constant in X) on a
    transitive X, from a stabilizer-side solution delta(psi) = omega|_H.

    mu(g1,g2;x) = psi(h1,h2) + s1 w(g1,g2,t_x) + s2 w(g1,t_{g2 x},h2)
                  + s3 w(t_{g1 g2 x},h1,h2).
    """
    G = omega.G
    t = X.transversal(x0)
    den = lcm(psi.den, omega.den)
    num = np.zeros((G.order, G.order, X.size), dtype=np.int64)
    T, inv = G.table, G.inv
    w = omega.num * (den // omega.den)
    p = psi.num * (den // psi.den)
    for g1 in range(1, G.order):
        for g2 in range(1, G.order):
            for x in range(X.size):
                p2 = int(X.act[g2, x])
                p1 = int(X.act[g1, p2])
                h2 = int(T[T[inv[t[p2]], g2], t[x]])
                h1 = int(T[T[inv[t[p1]], g1], t[p2]])
                v = p[hidx[h1], hidx[h2]]
                v += _TW_S1 * w[g1, g2, t[x]]
                v += _TW_S2 * w[g1, t[p2], h2]
                v += _TW_S3 * w[t[p1], h1, h2]
                num[g1, g2, x] = v % den
    nn, dd = _reduce(num, den)
    return Cochain(G, 2, 1, X, nn, dd)


def cohomology_group(G: FiniteGroup, n: int, X: GSet | None = None) -> CohomologyGroup:
    """H^n(G, k*) or, with X, H^n_G(X, k*) via Shapiro on each orbit."""
    if X is None:
        return _group_cohomology(G, n)
    factors: list[int] = []
    reps: list[Cochain] = []
    for orbit in X.orbits():
        x0 = orbit[0]
        H = X.stabilizer(x0)
        Habs, hidx = H.as_group()
        hg = _group_cohomology(Habs, n)
        factors.extend(hg.factors)
        for rep in hg.reps:
            reps.append(transport_from_stabilizer(rep, G, X, x0, H, hidx))
    return CohomologyGroup(factors, reps)


def cyclic_3cocycle(n: int, k: int) -> Cochain:
    """The standard degree-3 representative w(a,b,c) = k a floor((b+c)/n)/n
    on Z/n; classes for k = 0..n-1 exhaust H^3(Z/n)."""
    from .group_core import cyclic_group

    if n < 1:
        raise InvalidInput("cyclic order must be positive")
    G = cyclic_group(n)
    num = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                num[a, b, c] = (k * a * ((b + c) // n)) % n
    num, den = _reduce(num, n)
    return Cochain(G, 3, 0, None, num, den)


def twisted_class_set(G: FiniteGroup, omega: Cochain, X: GSet) -> list[Cochain]:
    """Representatives of H^2_G(X,k*)_omega: empty iff [omega|_Stab] != 0,
    otherwise a particular solution plus the transported H^2(Stab) torsor."""
    if omega.n != 3 or omega.m != 0:
        raise InvalidInput("omega must be an m=0 3-cochain")
    if not X.is_transitive():
        raise InvalidInput("twisted class sets need a transitive G-set")
    assert omega.delta().is_zero(), "omega is not a cocycle"
    x0 = 0
    H = X.stabilizer(x0)
    Habs, hidx = H.as_group()
    _check_bounds(Habs, 2)
    restricted = omega.restrict_to_subgroup(H)
    psi = solve_coboundary(restricted)
    if psi is None:
        return []
    mu0 = particular_twisted_solution(omega, X, x0, H, hidx, psi)
    target = omega.as_constant_in(X)
    assert mu0.delta() == target, "twisted transport broke the cocycle condition"
    out = []
    h2 = _group_cohomology(Habs, 2)
    classes = h2.all_elements() or [Cochain.zeros(Habs, 2)]
    for cls in classes:
        mu = mu0 + transport_from_stabilizer(cls, G, X, x0, H, hidx)
        assert mu.delta() == target, "torsor element broke the cocycle condition"
        out.append(mu)
    return out


def hom_to_qz(G: FiniteGroup) -> list[Cochain]:
    """All characters G -> Q/Z as n=1 cochains (the full group, not just
    generators)."""
    h1 = _group_cohomology(G, 1)
    chars = h1.all_elements()
    if not chars:
        return [Cochain.zeros(G, 1)]
    return chars
