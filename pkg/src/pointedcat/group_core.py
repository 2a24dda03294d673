"""Finite groups as explicit multiplication tables.

Elements are dense indices 0..n-1 with the identity fixed at index 0, so
multiplication is a table lookup and every derived object (subgroup, coset,
automorphism, G-set) is a plain integer array.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import BoundExceeded, InvalidInput, NoIdentity, NonAssociative, NotClosed

SUBGROUP_BOUND = 64
AUT_BOUND = 64
ORDER_BOUND = 256


class FiniteGroup:
    """A finite group given by its full multiplication table.

    table[a, b] is the index of a*b; element 0 is the identity.
    """

    def __init__(self, table, label: str = "", validate: bool = True):
        table = np.asarray(table, dtype=np.int32)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise InvalidInput("multiplication table must be square")
        self.order = int(table.shape[0])
        self.table = table
        self.label = label
        if validate:
            self._validate()
        self.inv = self._compute_inverses()

    def _validate(self):
        n = self.order
        t = self.table
        if t.min() < 0 or t.max() >= n:
            raise NotClosed("table entry out of range")
        if not (np.array_equal(t[0], np.arange(n)) and np.array_equal(t[:, 0], np.arange(n))):
            bad = int(np.nonzero(t[0] != np.arange(n))[0][0]) if not np.array_equal(t[0], np.arange(n)) else int(
                np.nonzero(t[:, 0] != np.arange(n))[0][0])
            raise NoIdentity(bad)
        ident = np.arange(n)
        for a in range(n):
            if not np.array_equal(np.sort(t[a]), ident) or not np.array_equal(np.sort(t[:, a]), ident):
                raise NotClosed(f"row or column {a} is not a permutation")
        # associativity, vectorized one left factor at a time
        for a in range(n):
            if not np.array_equal(t[t[a]], t[a][t]):
                diff = np.nonzero(t[t[a]] != t[a][t])
                raise NonAssociative(a, int(diff[0][0]), int(diff[1][0]))

    def _compute_inverses(self):
        n = self.order
        inv = np.empty(n, dtype=np.int32)
        for g in range(n):
            hits = np.nonzero(self.table[g] == 0)[0]
            inv[g] = hits[0]
        return inv

    # -- basic arithmetic ---------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def conj(self, g: int, h: int) -> int:
        """g h g^{-1}."""
        return int(self.table[self.table[g, h], self.inv[g]])

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.mul(x, g)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def exponent(self) -> int:
        e = 1
        for g in self.elements():
            e = int(np.lcm(e, self.element_order(g)))
        return e

    # -- structure ----------------------------------------------------------

    def center(self) -> "Subgroup":
        t = self.table
        members = [g for g in self.elements() if np.array_equal(t[g], t[:, g])]
        return Subgroup(self, members)

    def conjugacy_classes(self) -> list[list[int]]:
        seen = np.zeros(self.order, dtype=bool)
        classes = []
        for g in self.elements():
            if seen[g]:
                continue
            orbit = sorted({self.conj(s, g) for s in self.elements()})
            for x in orbit:
                seen[x] = True
            classes.append(orbit)
        return classes

    def centralizer(self, g: int) -> "Subgroup":
        t = self.table
        members = [h for h in self.elements() if t[h, g] == t[g, h]]
        return Subgroup(self, members)

    def __repr__(self):
        name = self.label or "group"
        return f"FiniteGroup({name}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.order, self.table.tobytes()))


class Subgroup:
    """A subgroup of a FiniteGroup, stored as a sorted element list."""

    def __init__(self, parent: FiniteGroup, elements: Iterable[int], validate: bool = True):
        self.parent = parent
        self.elements = tuple(sorted(set(int(e) for e in elements)))
        self._set = frozenset(self.elements)
        if validate:
            if 0 not in self._set:
                raise NotClosed("subgroup must contain the identity")
            for a in self.elements:
                if parent.inv[a] not in self._set:
                    raise NotClosed(f"inverse of {a} missing")
                for b in self.elements:
                    if parent.table[a, b] not in self._set:
                        raise NotClosed(f"product {a}*{b} missing")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self._set

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def is_normal(self) -> bool:
        G = self.parent
        return all(G.conj(g, h) in self._set for g in G.elements() for h in self.elements)

    def is_abelian(self) -> bool:
        t = self.parent.table
        return all(t[a, b] == t[b, a] for a in self.elements for b in self.elements)

    def as_group(self) -> tuple[FiniteGroup, dict[int, int]]:
        """The abstract group on this subgroup, with the index dictionary."""
        cached = getattr(self, "_as_group", None)
        if cached is not None:
            return cached
        idx = {g: i for i, g in enumerate(self.elements)}
        n = self.order
        table = np.empty((n, n), dtype=np.int32)
        for a in self.elements:
            for b in self.elements:
                table[idx[a], idx[b]] = idx[self.parent.mul(a, b)]
        out = (FiniteGroup(table, validate=False), idx)
        self._as_group = out
        return out

    def conjugate(self, g: int) -> "Subgroup":
        G = self.parent
        return Subgroup(G, [G.conj(g, h) for h in self.elements], validate=False)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.parent is other.parent and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"Subgroup(order={self.order}, elements={list(self.elements)})"


def generated_subgroup(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    seen = {0}
    frontier = [0]
    gens = [int(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                for y in (G.mul(x, g), G.mul(g, x)):
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
        frontier = nxt
    return Subgroup(G, seen, validate=False)


class GroupHom:
    """A homomorphism as the dense image array on domain elements."""

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, image: Sequence[int], validate: bool = True):
        self.domain = domain
        self.codomain = codomain
        self.image = np.asarray(image, dtype=np.int32)
        if validate:
            if self.image.shape != (domain.order,):
                raise InvalidInput("image array has wrong length")
            if self.image[0] != 0:
                raise InvalidInput("homomorphism must fix the identity")
            t, s = domain.table, codomain.table
            im = self.image
            for a in domain.elements():
                if not np.array_equal(im[t[a]], s[im[a]][im]):
                    raise InvalidInput(f"not a homomorphism at left factor {a}")

    def __call__(self, g: int) -> int:
        return int(self.image[g])

    def is_bijective(self) -> bool:
        return self.domain.order == self.codomain.order and len(set(self.image.tolist())) == self.domain.order

    def kernel(self) -> Subgroup:
        return Subgroup(self.domain, [g for g in self.domain.elements() if self.image[g] == 0], validate=False)

    def compose(self, inner: "GroupHom") -> "GroupHom":
        return GroupHom(inner.domain, self.codomain, self.image[inner.image], validate=False)

    def inverse(self) -> "GroupHom":
        if not self.is_bijective():
            raise InvalidInput("not invertible")
        inv = np.empty_like(self.image)
        inv[self.image] = np.arange(self.domain.order)
        return GroupHom(self.codomain, self.domain, inv, validate=False)

    def __eq__(self, other):
        return isinstance(other, GroupHom) and np.array_equal(self.image, other.image)

    def __hash__(self):
        return hash(self.image.tobytes())


# -- quotients and cosets ---------------------------------------------------


def left_cosets(G: FiniteGroup, H: Subgroup) -> list[tuple[int, ...]]:
    """Left cosets gH, each sorted, ordered by smallest member."""
    seen = set()
    cosets = []
    for g in G.elements():
        if g in seen:
            continue
        cs = tuple(sorted(G.mul(g, h) for h in H))
        seen.update(cs)
        cosets.append(cs)
    return cosets


def right_cosets(G: FiniteGroup, H: Subgroup) -> list[tuple[int, ...]]:
    seen = set()
    cosets = []
    for g in G.elements():
        if g in seen:
            continue
        cs = tuple(sorted(G.mul(h, g) for h in H))
        seen.update(cs)
        cosets.append(cs)
    return cosets


def double_cosets(G: FiniteGroup, H1: Subgroup, H2: Subgroup) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for g in G.elements():
        if g in seen:
            continue
        cs = tuple(sorted({G.mul(G.mul(a, g), b) for a in H1 for b in H2}))
        seen.update(cs)
        out.append(cs)
    return out


def quotient_group(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, GroupHom, list[int]]:
    """Quotient by a normal subgroup: (G/N, projection, coset representatives).

    Coset 0 is N itself; representatives are the smallest coset members.
    """
    if not N.is_normal():
        raise InvalidInput("quotient by a non-normal subgroup")
    cosets = left_cosets(G, N)
    cosets.sort(key=lambda c: (0 not in c, c[0]))
    rep = [c[0] for c in cosets]
    which = {}
    for i, c in enumerate(cosets):
        for x in c:
            which[x] = i
    k = len(cosets)
    table = np.empty((k, k), dtype=np.int32)
    for i in range(k):
        for j in range(k):
            table[i, j] = which[G.mul(rep[i], rep[j])]
    Q = FiniteGroup(table, label=f"{G.label}/N" if G.label else "quotient", validate=False)
    proj = GroupHom(G, Q, [which[g] for g in G.elements()], validate=False)
    return Q, proj, rep


# -- named groups and build specs -------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidInput("cyclic order must be >= 1")
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, label=f"Z{n}", validate=False)


def dihedral_group(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; elements r^i and r^i s encoded as i and n+i."""
    if n < 1:
        raise InvalidInput("dihedral parameter must be >= 1")
    m = 2 * n
    table = np.empty((m, m), dtype=np.int32)
    for a in range(m):
        ia, sa = a % n, a // n
        for b in range(m):
            ib, sb = b % n, b // n
            if sa == 0:
                i, s = (ia + ib) % n, sb
            else:
                i, s = (ia - ib) % n, 1 - sb
            table[a, b] = i + n * s
    return FiniteGroup(table, label=f"D{n}", validate=False)


def _perm_group_from_perms(perms: list[tuple[int, ...]], label: str) -> FiniteGroup:
    perms = sorted(set(perms))
    idx = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=np.int32)
    for p in perms:
        for q in perms:
            comp = tuple(p[q[i]] for i in range(len(q)))
            table[idx[p], idx[q]] = idx[comp]
    return FiniteGroup(table, label=label, validate=False)


def symmetric_group(n: int) -> FiniteGroup:
    if n > 5:
        raise BoundExceeded("symmetric group degree", n, 5)
    perms = [tuple(p) for p in itertools.permutations(range(max(n, 1)))]
    return _perm_group_from_perms(perms, f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    if n > 5:
        raise BoundExceeded("alternating group degree", n, 5)

    def sign(p):
        s = 1
        for i in range(len(p)):
            for j in range(i + 1, len(p)):
                if p[i] > p[j]:
                    s = -s
        return s

    perms = [tuple(p) for p in itertools.permutations(range(max(n, 1))) if sign(p) == 1]
    return _perm_group_from_perms(perms, f"A{n}")


def dicyclic_group(n: int) -> FiniteGroup:
    """Dicyclic group of order 4n (n=2 gives the quaternion group Q8).

    Elements a^i b^j with 0 <= i < 2n, j in {0,1}, a of order 2n, b^2 = a^n,
    b a b^{-1} = a^{-1}.
    """
    if n < 1:
        raise InvalidInput("dicyclic parameter must be >= 1")
    m = 4 * n
    table = np.empty((m, m), dtype=np.int32)
    for x in range(m):
        i, j = x % (2 * n), x // (2 * n)
        for y in range(m):
            k, l = y % (2 * n), y // (2 * n)
            if j == 0:
                ii, jj = (i + k) % (2 * n), l
            elif l == 0:
                ii, jj = (i - k) % (2 * n), 1
            else:
                ii, jj = (i - k + n) % (2 * n), 0
            table[x, y] = ii + 2 * n * jj
    return FiniteGroup(table, label=f"Dic{n}" if n != 2 else "Q8", validate=False)


def quaternion_group() -> FiniteGroup:
    return dicyclic_group(2)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    nG, nH = G.order, H.order
    n = nG * nH
    a = np.arange(n)
    g1, h1 = a // nH, a % nH
    table = (G.table[np.ix_(g1, g1)] * nH + H.table[np.ix_(h1, h1)]).astype(np.int32)
    lab = f"{G.label}x{H.label}" if G.label and H.label else "product"
    return FiniteGroup(table, label=lab, validate=False)


def group_from_perm_gens(gens: list, label: str = "") -> FiniteGroup:
    """Closure of permutation generators; each generator is a list of cycles."""
    if not gens:
        raise InvalidInput("need at least one generator")
    degree = 1 + max(max(c) for g in gens for c in g if c) if any(g for g in gens) else 1
    perms = []
    for g in gens:
        p = list(range(degree))
        for cyc in g:
            for i, x in enumerate(cyc):
                p[x] = cyc[(i + 1) % len(cyc)]
        perms.append(tuple(p))
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for q in perms:
                r = tuple(q[p[i]] for i in range(degree))
                if r not in seen:
                    if len(seen) >= ORDER_BOUND:
                        raise BoundExceeded("generated group order", len(seen) + 1, ORDER_BOUND)
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    return _perm_group_from_perms(sorted(seen), label or "permgroup")


def build_group(spec) -> FiniteGroup:
    """Build and validate a group from a specification.

    Accepts an explicit table ({"order": n, "table": [[...]]}), permutation
    generators ({"perm_gens": [...]}), or a named family
    ({"family": "cyclic", "n": 4}, products via {"family": "product",
    "factors": [...]}).  Lists are taken as explicit tables.
    """
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, (list, np.ndarray)):
        return FiniteGroup(spec)
    if not isinstance(spec, dict):
        raise InvalidInput(f"unsupported group spec {spec!r}")
    if "table" in spec:
        table = spec["table"]
        if "order" in spec and int(spec["order"]) != len(table):
            raise InvalidInput("declared order disagrees with table size")
        return FiniteGroup(table, label=spec.get("label", ""))
    if "perm_gens" in spec:
        return group_from_perm_gens(spec["perm_gens"], label=spec.get("label", ""))
    if "family" in spec:
        fam = spec["family"]
        if fam == "cyclic":
            return cyclic_group(int(spec["n"]))
        if fam == "dihedral":
            return dihedral_group(int(spec["n"]))
        if fam == "symmetric":
            return symmetric_group(int(spec["n"]))
        if fam == "alternating":
            return alternating_group(int(spec["n"]))
        if fam == "dicyclic":
            return dicyclic_group(int(spec["n"]))
        if fam == "quaternion":
            return quaternion_group()
        if fam == "klein":
            return direct_product(cyclic_group(2), cyclic_group(2))
        if fam == "product":
            factors = [build_group(f) for f in spec["factors"]]
            if not factors:
                raise InvalidInput("empty product")
            G = factors[0]
            for H in factors[1:]:
                G = direct_product(G, H)
            if G.order > ORDER_BOUND:
                raise BoundExceeded("group order", G.order, ORDER_BOUND)
            return G
        raise InvalidInput(f"unknown family {fam!r}")
    raise InvalidInput(f"unsupported group spec {spec!r}")


def klein_four_group() -> FiniteGroup:
    G = direct_product(cyclic_group(2), cyclic_group(2))
    G.label = "V4"
    return G


def all_groups_upto(n: int) -> list[FiniteGroup]:
    """One representative per isomorphism class of order <= n (n <= 12)."""
    if n > 12:
        raise BoundExceeded("catalog order", n, 12)
    Z = cyclic_group
    catalog = [
        Z(1), Z(2), Z(3),
        Z(4), direct_product(Z(2), Z(2)),
        Z(5),
        Z(6), symmetric_group(3),
        Z(7),
        Z(8), direct_product(Z(4), Z(2)), direct_product(direct_product(Z(2), Z(2)), Z(2)),
        dihedral_group(4), quaternion_group(),
        Z(9), direct_product(Z(3), Z(3)),
        Z(10), dihedral_group(5),
        Z(11),
        Z(12), direct_product(Z(6), Z(2)), dihedral_group(6), alternating_group(4), dicyclic_group(3),
    ]
    return [G for G in catalog if G.order <= n]


# -- subgroup analysis -------------------------------------------------------


def all_subgroups(G: FiniteGroup, bound: int = SUBGROUP_BOUND) -> list[Subgroup]:
    """Every subgroup, by closure of incremental generating sets."""
    if G.order > bound:
        raise BoundExceeded("group order for subgroup lattice", G.order, bound)
    found = {(0,): Subgroup(G, [0], validate=False)}
    frontier = [found[(0,)]]
    while frontier:
        nxt = []
        for H in frontier:
            for g in G.elements():
                if g in H:
                    continue
                K = generated_subgroup(G, list(H.elements) + [g])
                if K.elements not in found:
                    found[K.elements] = K
                    nxt.append(K)
        frontier = nxt
    return sorted(found.values(), key=lambda H: (H.order, H.elements))


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Normal subgroups as class-closed subsets closed under multiplication."""
    classes = G.conjugacy_classes()
    out = []
    seen = set()
    frontier = [Subgroup(G, [0], validate=False)]
    seen.add((0,))
    while frontier:
        nxt = []
        for N in frontier:
            for cls in classes:
                if cls[0] in N:
                    continue
                gens = list(N.elements) + cls
                K = generated_subgroup(G, gens)
                if K.elements not in seen:
                    seen.add(K.elements)
                    nxt.append(K)
        out.extend(frontier)
        frontier = nxt
    return sorted(out, key=lambda H: (H.order, H.elements))


def subgroups_up_to_conjugacy(G: FiniteGroup, bound: int = SUBGROUP_BOUND) -> list[Subgroup]:
    subs = all_subgroups(G, bound=bound)
    reps = []
    seen = set()
    for H in subs:
        if H.elements in seen:
            continue
        orbit = {H.elements}
        for g in G.elements():
            orbit.add(H.conjugate(g).elements)
        seen.update(orbit)
        reps.append(H)
    return reps


@dataclass
class SubgroupReport:
    subgroups: list[Subgroup]
    up_to_conjugacy: list[Subgroup]
    normal: list[Subgroup]
    normal_abelian: list[Subgroup]
    center: Subgroup
    conjugacy_classes: list[list[int]]


def subgroup_analysis(G: FiniteGroup, bound: int = SUBGROUP_BOUND) -> SubgroupReport:
    subs = all_subgroups(G, bound=bound)
    normal = [H for H in subs if H.is_normal()]
    return SubgroupReport(
        subgroups=subs,
        up_to_conjugacy=subgroups_up_to_conjugacy(G, bound=bound),
        normal=normal,
        normal_abelian=[H for H in normal if H.is_abelian()],
        center=G.center(),
        conjugacy_classes=G.conjugacy_classes(),
    )


# -- automorphisms and isomorphisms -----------------------------------------


def _min_generating_set(G: FiniteGroup) -> list[int]:
    """Greedy generating set, preferring high-order elements."""
    if G.order == 1:
        return []
    order_of = [G.element_order(g) for g in G.elements()]
    by_order = sorted(G.elements(), key=lambda g: (-order_of[g], g))
    gens: list[int] = []
    span = Subgroup(G, [0], validate=False)
    for g in by_order:
        if g in span:
            continue
        gens.append(g)
        span = generated_subgroup(G, gens)
        if span.order == G.order:
            return gens
    return gens


def isomorphisms(G: FiniteGroup, H: FiniteGroup, limit: Optional[int] = None) -> list[GroupHom]:
    """All isomorphisms G -> H by generator-image backtracking."""
    if G.order != H.order:
        return []
    gens = _min_generating_set(G)
    if not gens:
        return [GroupHom(G, H, [0], validate=False)]
    orders_H: dict[int, list[int]] = {}
    for h in H.elements():
        orders_H.setdefault(H.element_order(h), []).append(h)
    gen_orders = [G.element_order(g) for g in gens]
    # express every element of G as a word in the generators (BFS)
    word = {0: ()}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for i, g in enumerate(gens):
                y = G.mul(x, g)
                if y not in word:
                    word[y] = word[x] + (i,)
                    nxt.append(y)
        frontier = nxt
    if len(word) != G.order:
        raise InvalidInput("generating set does not generate")

    out: list[GroupHom] = []

    def extend(k: int, images: list[int]):
        if limit is not None and len(out) >= limit:
            return
        if k == len(gens):
            im = np.zeros(G.order, dtype=np.int32)
            for x, w in word.items():
                v = 0
                for i in w:
                    v = H.mul(v, images[i])
                im[x] = v
            if len(set(im.tolist())) != G.order:
                return
            t = G.table
            s = H.table
            for a in G.elements():
                if not np.array_equal(im[t[a]], s[im[a]][im]):
                    return
            out.append(GroupHom(G, H, im, validate=False))
            return
        for h in orders_H.get(gen_orders[k], []):
            extend(k + 1, images + [h])

    extend(0, [])
    return out


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return bool(isomorphisms(G, H, limit=1))


@dataclass
class AutomorphismGroup:
    group: FiniteGroup                    # abstract Aut(G)
    perms: list[np.ndarray]               # element i acts on G by perms[i]
    inner: Subgroup                       # inner automorphisms inside .group
    out_group: FiniteGroup                # Aut(G)/Inn(G)
    out_projection: GroupHom


def automorphism_group(G: FiniteGroup, bound: int = AUT_BOUND) -> AutomorphismGroup:
    if G.order > bound:
        raise BoundExceeded("group order for Aut search", G.order, bound)
    autos = isomorphisms(G, G)
    perms = sorted((tuple(a.image.tolist()) for a in autos))
    ident = tuple(range(G.order))
    perms.remove(ident)
    perms.insert(0, ident)
    idx = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=np.int32)
    arr = [np.array(p, dtype=np.int32) for p in perms]
    for i in range(n):
        for j in range(n):
            table[i, j] = idx[tuple(arr[i][arr[j]].tolist())]
    A = FiniteGroup(table, label=f"Aut({G.label})" if G.label else "Aut", validate=False)
    inner_ids = sorted({idx[tuple(np.array([G.conj(g, h) for h in G.elements()], dtype=np.int32).tolist())]
                        for g in G.elements()})
    inner = Subgroup(A, inner_ids, validate=False)
    out_group, proj, _ = quotient_group(A, inner)
    return AutomorphismGroup(group=A, perms=arr, inner=inner, out_group=out_group, out_projection=proj)


# -- G-sets ------------------------------------------------------------------


class GSet:
    """A left G-set as an action table act[g, x]."""

    def __init__(self, G: FiniteGroup, act, validate: bool = True):
        self.G = G
        self.act = np.asarray(act, dtype=np.int32)
        self.size = int(self.act.shape[1]) if self.act.ndim == 2 else 0
        if validate:
            if self.act.shape != (G.order, self.size):
                raise InvalidInput("action table has wrong shape")
            if self.size and not np.array_equal(self.act[0], np.arange(self.size)):
                raise InvalidInput("identity must act trivially")
            t = G.table
            for g in G.elements():
                if not np.array_equal(self.act[t[g]], self.act[g][self.act]):
                    raise InvalidInput(f"not an action at left factor {g}")

    def __call__(self, g: int, x: int) -> int:
        return int(self.act[g, x])

    def orbits(self) -> list[list[int]]:
        seen = np.zeros(self.size, dtype=bool)
        out = []
        for x in range(self.size):
            if seen[x]:
                continue
            orb = sorted(set(self.act[:, x].tolist()))
            for y in orb:
                seen[y] = True
            out.append(orb)
        return out

    def is_transitive(self) -> bool:
        return self.size > 0 and len(self.orbits()) == 1

    def stabilizer(self, x: int) -> Subgroup:
        members = np.nonzero(self.act[:, x] == x)[0]
        return Subgroup(self.G, members.tolist(), validate=False)

    def transversal(self, x0: int = 0) -> np.ndarray:
        """Array t with act[t[x], x0] = x on the orbit of x0, t[x0] = 0.

        Built by BFS over group elements in index order, so deterministic.
        """
        t = -np.ones(self.size, dtype=np.int32)
        t[x0] = 0
        frontier = [x0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.G.elements():
                    y = self.act[g, x]
                    if t[y] < 0:
                        t[y] = self.G.mul(g, int(t[x]))
                        nxt.append(y)
            frontier = nxt
        return t

    def __eq__(self, other):
        return isinstance(other, GSet) and self.G is other.G and np.array_equal(self.act, other.act)


def point_gset(G: FiniteGroup) -> GSet:
    return GSet(G, np.zeros((G.order, 1), dtype=np.int32), validate=False)


def regular_gset(G: FiniteGroup) -> GSet:
    return GSet(G, G.table.copy(), validate=False)


def coset_gset(G: FiniteGroup, H: Subgroup) -> GSet:
    """Left multiplication on G/H; coset 0 is H, others ordered by min member."""
    cosets = left_cosets(G, H)
    cosets.sort(key=lambda c: (0 not in c, c[0]))
    which = {}
    for i, c in enumerate(cosets):
        for x in c:
            which[x] = i
    act = np.empty((G.order, len(cosets)), dtype=np.int32)
    for g in G.elements():
        for i, c in enumerate(cosets):
            act[g, i] = which[G.mul(g, c[0])]
    return GSet(G, act, validate=False)


def gset_isomorphisms(X: GSet, Y: GSet) -> list[np.ndarray]:
    """All G-set isomorphisms X -> Y (transitive X only)."""
    if X.G is not Y.G and X.G != Y.G:
        raise InvalidInput("G-sets over different groups")
    if X.size != Y.size:
        return []
    if X.size == 0:
        return [np.zeros(0, dtype=np.int32)]
    if not X.is_transitive():
        raise InvalidInput("isomorphism search needs a transitive source")
    G = X.G
    out = []
    x0 = 0
    tX, _ = X.transversal(x0)
    stab = X.stabilizer(x0)
    for y0 in range(Y.size):
        if any(Y.act[h, y0] != y0 for h in stab):
            continue
        L = np.empty(X.size, dtype=np.int32)
        for x in range(X.size):
            L[x] = Y.act[tX[x], y0]
        if len(set(L.tolist())) == X.size:
            out.append(L)
    return out


# -- generalized crossed product factorization -------------------------------


@dataclass
class CrossedFactorization:
    """The factorization data of G along a subgroup F with transversal Q.

    qx = (q |> x)(q <| x) and pq = theta(p, q) (p . q); reconstructing a group
    on F x Q from these maps recovers G.
    """

    G: FiniteGroup
    F: Subgroup
    Q: list[int]
    act_right: np.ndarray   # <| : Q x F -> Q  (indices into Q)
    act_left: np.ndarray    # |> : Q x F -> F  (elements of G lying in F)
    theta: np.ndarray       # theta : Q x Q -> F
    dot: np.ndarray         # .  : Q x Q -> Q  (indices into Q)

    def reconstructed_group(self) -> FiniteGroup:
        """The group F # Q on pairs (u, s) with the crossed product law."""
        F_elts = list(self.F.elements)
        fidx = {u: i for i, u in enumerate(F_elts)}
        nF, nQ = len(F_elts), len(self.Q)
        n = nF * nQ
        table = np.empty((n, n), dtype=np.int32)
        G = self.G
        for a in range(n):
            u, s = F_elts[a // nQ], a % nQ
            for b in range(n):
                v, t = F_elts[b // nQ], b % nQ
                s_act_v = int(self.act_left[s, fidx[v]])     # s |> v in F
                s_after = int(self.act_right[s, fidx[v]])    # s <| v in Q
                th = int(self.theta[s_after, t])
                u_new = G.mul(G.mul(u, s_act_v), th)
                s_new = int(self.dot[s_after, t])
                table[a, b] = fidx[u_new] * nQ + s_new
        # relabel so the two-sided identity lands at index 0
        e = -1
        for a in range(n):
            if np.array_equal(table[a], np.arange(n)) and np.array_equal(table[:, a], np.arange(n)):
                e = a
                break
        if e < 0:
            raise NotClosed("reconstructed product has no identity")
        perm = np.arange(n)
        perm[0], perm[e] = perm[e], perm[0]
        inv = np.empty(n, dtype=np.int64)
        inv[perm] = np.arange(n)
        table = inv[table[np.ix_(perm, perm)]]
        return FiniteGroup(table, label="F#Q")


def simultaneous_transversal(G: FiniteGroup, F: Subgroup) -> list[int]:
    """A common set of representatives for left and right cosets of F.

    Built from double cosets: on FxF pick left-coset representatives s_j of
    F n xFx^{-1} in F and right-coset representatives t_j of F n x^{-1}Fx in
    F; the products s_j x t_j represent both coset families.  Ties are broken
    by smallest element index.
    """
    Q = []
    for dc in double_cosets(G, F, F):
        x = dc[0]
        Fx = set()
        for f in F:
            Fx.add(G.mul(G.mul(x, f), G.inv[x]))
        inter_l = Subgroup(G, [f for f in F if f in Fx], validate=False)
        xF = set()
        for f in F:
            xF.add(G.mul(G.mul(G.inv[x], f), x))
        inter_r = Subgroup(G, [f for f in F if f in xF], validate=False)
        s_reps = [c[0] for c in left_cosets_in(F, inter_l, G)]
        t_reps = [c[0] for c in right_cosets_in(F, inter_r, G)]
        assert len(s_reps) == len(t_reps)
        for s, t in zip(sorted(s_reps), sorted(t_reps)):
            Q.append(G.mul(G.mul(s, x), t))
    # sanity: Q represents every left and right coset exactly once
    assert len({frozenset(G.mul(q, f) for f in F) for q in Q}) == len(Q)
    assert len({frozenset(G.mul(f, q) for f in F) for q in Q}) == len(Q)
    return sorted(Q)


def left_cosets_in(F: Subgroup, H: Subgroup, G: FiniteGroup) -> list[tuple[int, ...]]:
    """Left cosets fH inside the subgroup F (H <= F <= G)."""
    seen = set()
    out = []
    for f in F:
        if f in seen:
            continue
        cs = tuple(sorted(G.mul(f, h) for h in H))
        seen.update(cs)
        out.append(cs)
    return out


def right_cosets_in(F: Subgroup, H: Subgroup, G: FiniteGroup) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for f in F:
        if f in seen:
            continue
        cs = tuple(sorted(G.mul(h, f) for h in H))
        seen.update(cs)
        out.append(cs)
    return out


def coset_machinery(G: FiniteGroup, F: Subgroup, H2: Optional[Subgroup] = None) -> dict:
    """Cosets, the simultaneous transversal, and the crossed factorization."""
    Q = simultaneous_transversal(G, F)
    F_elts = list(F.elements)
    fidx = {u: i for i, u in enumerate(F_elts)}
    # factorization g = u*s with u in F, s in Q (unique since Q reps right cosets Fs)
    right_of = {}
    for s_i, s in enumerate(Q):
        for u in F:
            right_of[G.mul(u, s)] = s_i
    assert len(right_of) == G.order

    def split(g: int) -> tuple[int, int]:
        s_i = right_of[g]
        u = G.mul(g, G.inv[Q[s_i]])
        return u, s_i

    nQ, nF = len(Q), len(F_elts)
    act_right = np.empty((nQ, nF), dtype=np.int32)
    act_left = np.empty((nQ, nF), dtype=np.int32)
    theta = np.empty((nQ, nQ), dtype=np.int32)
    dot = np.empty((nQ, nQ), dtype=np.int32)
    for s_i, s in enumerate(Q):
        for u_i, u in enumerate(F_elts):
            w, t_i = split(G.mul(s, u))
            act_left[s_i, u_i] = w
            act_right[s_i, u_i] = t_i
        for t_i, t in enumerate(Q):
            w, r_i = split(G.mul(s, t))
            theta[s_i, t_i] = w
            dot[s_i, t_i] = r_i
    cf = CrossedFactorization(G=G, F=F, Q=Q, act_right=act_right, act_left=act_left,
                              theta=theta, dot=dot)
    out = {
        "left_cosets": left_cosets(G, F),
        "right_cosets": right_cosets(G, F),
        "transversal": Q,
        "factorization": cf,
    }
    if H2 is not None:
        out["double_cosets"] = double_cosets(G, F, H2)
    return out
