"""Exact cochains G^n x X^m -> Q/Z and the twisted differential.

A cochain stores an int64 numerator array over one common denominator, so
all algebra is integer array work.  Group slots are normalized (value 0
whenever a group argument is the identity); the X slot carries no
normalization since a general G-set has no marked point.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

import numpy as np

from .errors import ArityUnsupported, InvalidInput
from .group_core import FiniteGroup, GSet, GroupHom, Subgroup
from .qz import QZ

MAX_ARITY = 4  # highest n+1 ever formed by delta


def _reduce(num: np.ndarray, den: int) -> tuple[np.ndarray, int]:
    if den == 1:
        return np.zeros_like(num), 1
    g = den
    for v in np.unique(num % den):
        g = gcd(g, int(v))
        if g == 1:
            return num % den, den
    return (num % den) // g, den // g


@dataclass
class Cochain:
    G: FiniteGroup
    n: int
    m: int
    X: GSet | None
    num: np.ndarray
    den: int

    # -- constructors --------------------------------------------------------

    @staticmethod
    def shape_of(G: FiniteGroup, n: int, m: int, X: GSet | None) -> tuple[int, ...]:
        if m not in (0, 1) or n < 0:
            raise ArityUnsupported(f"unsupported arity (n={n}, m={m})")
        if m == 1 and X is None:
            raise InvalidInput("m=1 cochain needs a G-set")
        shape = (G.order,) * n
        if m == 1:
            shape += (X.size,)
        return shape if shape else (1,)

    @classmethod
    def zeros(cls, G: FiniteGroup, n: int, m: int = 0, X: GSet | None = None) -> "Cochain":
        return cls(G, n, m, X if m else None,
                   np.zeros(cls.shape_of(G, n, m, X), dtype=np.int64), 1)

    @classmethod
    def from_function(cls, G: FiniteGroup, n: int, m: int, X: GSet | None, fn) -> "Cochain":
        c = cls.zeros(G, n, m, X)
        vals = {}
        it = np.ndindex(*c.num.shape)
        den = 1
        for idx in it:
            q = fn(*idx)
            vals[idx] = q
            den = lcm(den, q.den)
        for idx, q in vals.items():
            c.num[idx] = q.num * (den // q.den)
        c.den = den
        c._normalize_group_slots()
        return c

    def _normalize_group_slots(self):
        for axis in range(self.n):
            sl = [slice(None)] * self.num.ndim
            sl[axis] = 0
            if np.any(self.num[tuple(sl)] % self.den):
                raise InvalidInput("cochain not normalized on a group slot")
            self.num[tuple(sl)] = 0

    # -- basic access ---------------------------------------------------------

    def value(self, *args) -> QZ:
        return QZ(int(self.num[args]), self.den)

    def is_zero(self) -> bool:
        return not np.any(self.num % self.den)

    def same_space(self, other: "Cochain") -> bool:
        return (self.G is other.G or self.G == other.G) and self.n == other.n \
            and self.m == other.m and (self.m == 0 or self.X == other.X)

    def __add__(self, other: "Cochain") -> "Cochain":
        if not self.same_space(other):
            raise InvalidInput("cochain spaces differ")
        den = lcm(self.den, other.den)
        num = self.num * (den // self.den) + other.num * (den // other.den)
        num, den = _reduce(num, den)
        return Cochain(self.G, self.n, self.m, self.X, num, den)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def __neg__(self) -> "Cochain":
        return Cochain(self.G, self.n, self.m, self.X, (-self.num) % self.den, self.den)

    def __mul__(self, k: int) -> "Cochain":
        num, den = _reduce((self.num * int(k)) % self.den, self.den)
        return Cochain(self.G, self.n, self.m, self.X, num, den)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain) or not self.same_space(other):
            return False
        den = lcm(self.den, other.den)
        return bool(np.array_equal((self.num * (den // self.den)) % den,
                                   (other.num * (den // other.den)) % den))

    def copy(self) -> "Cochain":
        return Cochain(self.G, self.n, self.m, self.X, self.num.copy(), self.den)

    # -- the twisted differential ---------------------------------------------

    def delta(self) -> "Cochain":
        """delta(f)(g1..g_{n+1}; x) = f(g2..;x) + sum_i (-1)^i f(..g_i g_{i+1}..;x)
        + (-1)^{n+1} f(g1..gn; g_{n+1} x).  The last group argument acts on X."""
        G, n, m, X = self.G, self.n, self.m, self.X
        if n + 1 > MAX_ARITY:
            raise ArityUnsupported(f"delta would form arity {n + 1}")
        o = G.order
        out_shape = (o,) * (n + 1) + ((X.size,) if m else ())
        if self.is_zero():
            return Cochain(G, n + 1, m, X, np.zeros(out_shape if out_shape else (1,), dtype=np.int64), 1)
        naxes = n + 1 + m
        grids = np.meshgrid(*([np.arange(o)] * (n + 1) + ([np.arange(X.size)] if m else [])),
                            indexing="ij", sparse=True)
        f = self.num if n or m else self.num.reshape(())
        acc = np.zeros(out_shape if out_shape else (1,), dtype=np.int64)

        def gather(index_list):
            if not index_list:
                return np.broadcast_to(f, out_shape if out_shape else (1,))
            return f[tuple(index_list)]

        # leading term: drop g1
        idx = [grids[i] for i in range(1, n + 1)]
        if m:
            idx.append(grids[n + 1])
        acc = acc + gather(idx)
        # merged terms
        T = G.table
        for i in range(1, n + 1):
            idx = [grids[j] for j in range(0, i - 1)]
            idx.append(T[grids[i - 1], grids[i]])
            idx.extend(grids[j] for j in range(i + 1, n + 1))
            if m:
                idx.append(grids[n + 1])
            term = gather(idx)
            acc = acc + term if i % 2 == 0 else acc - term
        # trailing term: last group argument acts on the X slot
        idx = [grids[j] for j in range(0, n)]
        if m:
            idx.append(X.act[grids[n], grids[n + 1]])
        term = gather(idx)
        acc = acc + term if (n + 1) % 2 == 0 else acc - term

        num, den = _reduce(acc % self.den, self.den)
        out = Cochain(G, n + 1, m, X, np.ascontiguousarray(num), den)
        out._normalize_group_slots()
        return out

    # -- restriction / inflation ----------------------------------------------

    def restrict_to_subgroup(self, H: Subgroup, x0: int | None = None) -> "Cochain":
        """Restriction to an abstract copy of H; an m=1 cochain is evaluated
        at the fixed point x0 (which H must stabilize)."""
        Habs, idx = H.as_group()
        elems = list(H.elements)
        sel = np.ix_(*([elems] * self.n))
        if self.m == 1:
            if x0 is None:
                raise InvalidInput("restriction of an m=1 cochain needs a base point")
            num = self.num[sel + (x0,)] if self.n else self.num[(x0,)].reshape(())
        else:
            num = self.num[sel] if self.n else self.num
        num = np.ascontiguousarray(num).reshape((Habs.order,) * self.n if self.n else (1,))
        num, den = _reduce(num % self.den, self.den)
        return Cochain(Habs, self.n, 0, None, num, den)

    def as_constant_in(self, X: GSet) -> "Cochain":
        """View an m=0 cochain as constant along a G-set slot."""
        if self.m != 0:
            raise InvalidInput("already has an X slot")
        num = np.repeat(self.num[..., None], X.size, axis=-1)
        return Cochain(self.G, self.n, 1, X, np.ascontiguousarray(num), self.den)

    def pullback_hom(self, phi: GroupHom) -> "Cochain":
        """f^phi(g1..gn) = f(phi g1, .., phi gn) for an m=0 cochain."""
        if self.m != 0:
            raise InvalidInput("pullback_hom applies to m=0 cochains")
        im = phi.image
        sel = np.ix_(*([im] * self.n)) if self.n else ()
        num = self.num[sel] if self.n else self.num.copy()
        return Cochain(phi.domain, self.n, 0, None, np.ascontiguousarray(num), self.den)

    def pullback_gset_map(self, L: np.ndarray, X_src: GSet) -> "Cochain":
        """L^*f(g..; x) = f(g..; L(x)) along a G-set map L: X_src -> X."""
        if self.m != 1:
            raise InvalidInput("pullback_gset_map applies to m=1 cochains")
        num = self.num[..., np.asarray(L, dtype=np.int64)]
        return Cochain(self.G, self.n, 1, X_src, np.ascontiguousarray(num), self.den)

    # -- serialization ---------------------------------------------------------

    def to_strings(self):
        flat = [str(QZ(int(v), self.den)) for v in self.num.reshape(-1)]
        out = np.array(flat, dtype=object).reshape(self.num.shape)
        return out.tolist()


def random_lattice_cochain(G: FiniteGroup, n: int, m: int, X: GSet | None,
                           den: int, rng: np.random.Generator) -> Cochain:
    shape = Cochain.shape_of(G, n, m, X)
    num = rng.integers(0, den, size=shape).astype(np.int64)
    for axis in range(n):
        sl = [slice(None)] * len(shape)
        sl[axis] = 0
        num[tuple(sl)] = 0
    num, d = _reduce(num, den)
    return Cochain(G, n, m, X if m else None, num, d)
