"""Finite l-groups as validated Cayley tables.

Elements are integer indices into a canonical ordering: identity first, then
breadth-first from the ordered generator list under right multiplication.
Every constructor validates the full group axioms (sizes stay at or below 64,
so the cubic associativity check is cheap) and, when a prime is supplied,
that all element orders are powers of it.

Commutator convention: [x, y] = x^-1 y^-1 x y.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    GeneratorsDontGenerate,
    InconsistentPresentation,
    NotAGroup,
    NotEllGroup,
    NotNormal,
    QuotientNotFree,
    UnknownCatalogEntry,
)
from .zmodlin import RingConfig


class FinGroup:
    """Finite group on indices 0..order-1 with an explicit Cayley table."""

    __slots__ = ("order", "cayley", "identity", "generators", "labels", "_inv", "_orders")

    def __init__(self, cayley, generators, labels=None, *, ell=None, relabel=True):
        group, _ = _build_group(cayley, generators, labels=labels, ell=ell, relabel=relabel)
        self.order = group[0]
        self.cayley = group[1]
        self.identity = group[2]
        self.generators = group[3]
        self.labels = group[4]
        self._inv = group[5]
        self._orders = group[6]

    # -- basic operations ---------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.cayley[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self._inv[a], -k
        out = self.identity
        while k:
            if k & 1:
                out = self.cayley[out][a]
            a = self.cayley[a][a]
            k >>= 1
        return out

    def comm(self, a: int, b: int) -> int:
        t = self.cayley[self._inv[a]][self._inv[b]]
        return self.cayley[self.cayley[t][a]][b]

    def conj(self, g: int, h: int) -> int:
        """g h g^-1."""
        return self.cayley[self.cayley[g][h]][self._inv[g]]

    def elt_order(self, a: int) -> int:
        return self._orders[a]

    def elements(self) -> range:
        return range(self.order)

    def is_abelian(self) -> bool:
        c = self.cayley
        return all(c[a][b] == c[b][a] for a in range(self.order) for b in range(a))

    def closure(self, gens) -> tuple:
        seen = {self.identity}
        frontier = [self.identity]
        gens = [g for g in gens]
        while frontier:
            x = frontier.pop()
            for g in gens:
                for y in (self.cayley[x][g], self.cayley[g][x]):
                    if y not in seen:
                        seen.add(y)
                        frontier.append(y)
        return tuple(sorted(seen))

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def __repr__(self):
        return f"FinGroup(order={self.order}, generators={self.generators})"


def _validate_table(cayley):
    n = len(cayley)
    for row in cayley:
        if len(row) != n:
            raise NotAGroup(f"table is not square: row of length {len(row)} in order-{n} table")
        for v in row:
            if not isinstance(v, int) or not 0 <= v < n:
                raise NotAGroup(f"table entry {v!r} out of range 0..{n - 1}")
    identity = None
    for e in range(n):
        if all(cayley[e][x] == x and cayley[x][e] == x for x in range(n)):
            identity = e
            break
    if identity is None:
        raise NotAGroup("no identity element")
    inv = [None] * n
    for a in range(n):
        for b in range(n):
            if cayley[a][b] == identity and cayley[b][a] == identity:
                inv[a] = b
                break
        if inv[a] is None:
            raise NotAGroup("element has no inverse", witness=a)
    for a in range(n):
        ca = cayley[a]
        for b in range(n):
            cab = cayley[ca[b]]
            cb = cayley[b]
            for c in range(n):
                if cab[c] != ca[cb[c]]:
                    raise NotAGroup("associativity fails", witness=(a, b, c))
    return identity, inv


def _build_group(cayley, generators, labels=None, ell=None, relabel=True):
    cayley = [list(r) for r in cayley]
    n = len(cayley)
    if n == 0:
        raise NotAGroup("empty table")
    identity, inv = _validate_table(cayley)
    generators = list(dict.fromkeys(g for g in generators if g != identity))
    for g in generators:
        if not 0 <= g < n:
            raise NotAGroup(f"generator index {g} out of range")

    # canonical ordering: identity first, then BFS by right multiplication
    if relabel:
        order_list = [identity]
        seen = {identity}
        i = 0
        while i < len(order_list):
            x = order_list[i]
            i += 1
            for g in generators:
                y = cayley[x][g]
                if y not in seen:
                    seen.add(y)
                    order_list.append(y)
        if len(order_list) != n:
            raise GeneratorsDontGenerate(
                f"generators reach {len(order_list)} of {n} elements"
            )
        old_to_new = {old: new for new, old in enumerate(order_list)}
        new_cayley = tuple(
            tuple(old_to_new[cayley[order_list[a]][order_list[b]]] for b in range(n))
            for a in range(n)
        )
        new_gens = tuple(old_to_new[g] for g in generators)
        new_labels = tuple(labels[o] for o in order_list) if labels else None
        new_identity = 0
    else:
        reach = set()
        frontier = [identity]
        reach.add(identity)
        while frontier:
            x = frontier.pop()
            for g in generators:
                for y in (cayley[x][g], cayley[g][x]):
                    if y not in reach:
                        reach.add(y)
                        frontier.append(y)
        if len(reach) != n:
            raise GeneratorsDontGenerate(f"generators reach {len(reach)} of {n} elements")
        old_to_new = {x: x for x in range(n)}
        new_cayley = tuple(tuple(r) for r in cayley)
        new_gens = tuple(generators)
        new_labels = tuple(labels) if labels else None
        new_identity = identity

    new_inv = tuple(old_to_new[inv[o]] for o in sorted(old_to_new, key=old_to_new.get))
    # element orders
    orders = []
    for a in range(n):
        k, x = 1, a
        while x != new_identity:
            x = new_cayley[x][a]
            k += 1
        orders.append(k)
    if ell is not None:
        for a, k in enumerate(orders):
            while k % ell == 0:
                k //= ell
            if k != 1:
                raise NotEllGroup(
                    f"element {a} has order {orders[a]}, not a power of {ell}"
                )
    packed = (n, new_cayley, new_identity, new_gens, new_labels, new_inv, tuple(orders))
    return packed, old_to_new


def from_cayley_table(table, generators, labels=None, ell=None) -> FinGroup:
    """Validated group from a raw Cayley table, relabeled canonically."""
    return FinGroup(table, generators, labels=labels, ell=ell, relabel=True)


@dataclass(frozen=True)
class Subgroup:
    """Subset of a parent group, closed under product and inverse."""

    parent: FinGroup
    elements: tuple

    def __post_init__(self):
        es = set(self.elements)
        if self.parent.identity not in es:
            raise NotAGroup("subgroup without identity")
        for a in self.elements:
            if self.parent.inv(a) not in es:
                raise NotAGroup("subgroup not closed under inverse", witness=a)
            for b in self.elements:
                if self.parent.mul(a, b) not in es:
                    raise NotAGroup("subgroup not closed under product", witness=(a, b))

    @classmethod
    def generated(cls, parent: FinGroup, gens) -> "Subgroup":
        return cls(parent, parent.closure(gens))

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in set(self.elements)

    def is_normal(self) -> bool:
        try:
            self.normality_witness()
            return True
        except NotNormal:
            return False

    def normality_witness(self) -> None:
        es = set(self.elements)
        for g in self.parent.elements():
            for h in self.elements:
                if self.parent.conj(g, h) not in es:
                    raise NotNormal("subgroup is not normal", witness=(g, h))

    def as_group(self):
        """The subgroup as a standalone FinGroup plus index maps.

        Elements keep their sorted parent order (identity is index 0), so no
        relabeling happens and results are deterministic.
        """
        idx = {x: i for i, x in enumerate(self.elements)}
        table = [
            [idx[self.parent.mul(a, b)] for b in self.elements] for a in self.elements
        ]
        gens = [i for i in range(1, len(self.elements))]
        labels = (
            tuple(self.parent.labels[x] for x in self.elements)
            if self.parent.labels
            else None
        )
        grp = FinGroup(table, gens, labels=labels, relabel=False)
        return grp, self.elements, idx


def descending_step(g: FinGroup, ring: RingConfig) -> Subgroup:
    """Subgroup generated by all commutators and all l^n-th powers."""
    q = ring.modulus
    gens = set()
    for a in g.elements():
        gens.add(g.power(a, q))
        for b in g.elements():
            gens.add(g.comm(a, b))
    gens.discard(g.identity)
    return Subgroup.generated(g, sorted(gens))


def quotient(g: FinGroup, normal: Subgroup):
    """Quotient group with least-index coset representatives.

    Returns (FinGroup, projection) where projection[x] is the index of the
    coset of x.  Raises NotNormal with a conjugation witness otherwise.
    """
    if normal.parent is not g:
        raise NotNormal("subgroup belongs to a different parent")
    normal.normality_witness()
    rep = [None] * g.order
    for x in g.elements():
        if rep[x] is None:
            coset = sorted(g.mul(x, h) for h in normal.elements)
            r = coset[0]
            for y in coset:
                rep[y] = r
    reps = sorted(set(rep))
    rep_index = {r: i for i, r in enumerate(reps)}
    table = [[rep_index[rep[g.mul(a, b)]] for b in reps] for a in reps]
    proj = tuple(rep_index[rep[x]] for x in g.elements())
    gens = list(dict.fromkeys(proj[x] for x in g.generators if proj[x] != 0))
    labels = tuple(g.labels[r] for r in reps) if g.labels else None
    qgrp = FinGroup(table, gens, labels=labels, relabel=False)
    for a in g.elements():
        for b in g.elements():
            if proj[g.mul(a, b)] != qgrp.mul(proj[a], proj[b]):
                raise NotAGroup("projection is not a homomorphism", witness=(a, b))
    return qgrp, proj


@dataclass(frozen=True)
class AbelianStructure:
    """Invariant-factor decomposition of a finite abelian group.

    orders are descending; coords[x] are the exponents of element x over the
    basis, i.e. x = prod basis[i]^coords[x][i].
    """

    group: FinGroup
    orders: tuple
    basis: tuple
    coords: tuple

    def from_coords(self, cs):
        x = self.group.identity
        for b, c in zip(self.basis, cs):
            x = self.group.mul(x, self.group.power(b, c))
        return x


def _abelian_basis(a: FinGroup):
    """Basis (element, order) pairs, largest order first, deterministic."""
    if a.order == 1:
        return []
    h = max(a.elt_order(y) for y in a.elements())
    x = min(y for y in a.elements() if a.elt_order(y) == h)
    sub = Subgroup.generated(a, (x,))
    qgrp, proj = quotient(a, sub)
    out = [(x, h)]
    for qb, qo in _abelian_basis(qgrp):
        lift = None
        for y in a.elements():
            if proj[y] == qb and a.elt_order(y) == qo:
                lift = y
                break
        if lift is None:
            raise NotAGroup("no order-preserving lift; group is not abelian?")
        out.append((lift, qo))
    return out


def abelian_structure(a: FinGroup) -> AbelianStructure:
    if not a.is_abelian():
        raise NotAGroup("abelian structure requested for a nonabelian group")
    pairs = _abelian_basis(a)
    basis = tuple(p[0] for p in pairs)
    orders = tuple(p[1] for p in pairs)
    coords = [None] * a.order
    from itertools import product as iproduct

    for cs in iproduct(*(range(o) for o in orders)):
        x = a.identity
        for b, c in zip(basis, cs):
            x = a.mul(x, a.power(b, c))
        if coords[x] is not None:
            raise NotAGroup("basis decomposition is not direct")
        coords[x] = cs
    if any(c is None for c in coords):
        raise NotAGroup("basis does not span")
    return AbelianStructure(a, orders, basis, tuple(coords))


def abelianization(g: FinGroup):
    """(cyclic orders, projection to coords) of g/[g,g], orders descending."""
    comms = sorted({g.comm(a, b) for a in g.elements() for b in g.elements()})
    derived = Subgroup.generated(g, comms)
    ab, proj = quotient(g, derived)
    structure = abelian_structure(ab)
    coord_of = tuple(structure.coords[proj[x]] for x in g.elements())
    return structure.orders, coord_of, structure, proj


@dataclass(frozen=True)
class ExtensionData:
    """A group extension 1 -> H -> total -> G -> 1 with canonical bookkeeping.

    projection/section are index maps; sigma lists the chosen generators of G
    (a free Z/l^n-module basis) and coords[x] gives the exponent vector of a
    G element over sigma.  section is the normal-form word map
    g |-> prod lifts[i]^coords[g][i], so section(1) = 1.
    """

    total: FinGroup
    kernel: Subgroup
    quotient: FinGroup
    projection: tuple
    section: tuple
    sigma: tuple
    coords: tuple
    lifts: tuple
    ring: RingConfig

    @property
    def d(self) -> int:
        return len(self.sigma)

    def __post_init__(self):
        g, G = self.total, self.quotient
        if self.section[0] != g.identity or self.projection[g.identity] != G.identity:
            raise NotAGroup("section/projection do not preserve the identity")
        for x in G.elements():
            if self.projection[self.section[x]] != x:
                raise NotAGroup("projection . section is not the identity", witness=x)


def _free_basis(G: FinGroup, ring: RingConfig) -> AbelianStructure:
    if not G.is_abelian():
        raise QuotientNotFree("top quotient is not abelian")
    structure = abelian_structure(G)
    if any(o != ring.modulus for o in structure.orders):
        raise QuotientNotFree(
            f"quotient has invariant factors {structure.orders}, "
            f"not free over Z/{ring.modulus}"
        )
    return structure


def build_extension(g: FinGroup, kernel: Subgroup, G: FinGroup, projection, ring: RingConfig) -> ExtensionData:
    """Assemble ExtensionData over an already-known quotient G."""
    structure = _free_basis(G, ring)
    sigma = structure.basis
    lifts = tuple(
        min(x for x in g.elements() if projection[x] == s) for s in sigma
    )
    section = []
    for x in G.elements():
        w = g.identity
        for t, c in zip(lifts, structure.coords[x]):
            w = g.mul(w, g.power(t, c))
        section.append(w)
    return ExtensionData(
        total=g,
        kernel=kernel,
        quotient=G,
        projection=tuple(projection),
        section=tuple(section),
        sigma=sigma,
        coords=structure.coords,
        lifts=lifts,
        ring=ring,
    )


def make_extension(g: FinGroup, ring: RingConfig) -> ExtensionData:
    """Split g into its descending-step kernel and free top quotient."""
    for a in g.elements():
        k = g.elt_order(a)
        while k % ring.ell == 0:
            k //= ring.ell
        if k != 1:
            raise NotEllGroup(f"element {a} has order {g.elt_order(a)}")
    H = descending_step(g, ring)
    G, proj = quotient(g, H)
    return build_extension(g, H, G, proj, ring)


# ---------------------------------------------------------------------------
# Class-2 presentations and the catalog.
# ---------------------------------------------------------------------------


def from_class2_presentation(d, ring: RingConfig, commutators, powers, central_orders=None) -> FinGroup:
    """Group of nilpotency class <= 2 from commutator and power words.

    commutators maps (i, j) with i < j to the exponent vector of [e_i, e_j]
    over the central generators (a dict, or a nested list c[i][j]); powers[i]
    is the exponent vector of e_i^(l^n).  Central generators default to order
    l^n each.  Elements are normal-form words e_0^a0 ... e_{d-1}^a{d-1} * z.
    """
    q = ring.modulus
    comm_map = {}
    if isinstance(commutators, dict):
        items = commutators.items()
    else:
        items = (
            ((i, j), commutators[i][j])
            for i in range(len(commutators))
            for j in range(len(commutators[i]))
        )
    for (i, j), w in items:
        if w is None:
            continue
        if not (0 <= i < j < d):
            raise InconsistentPresentation(f"commutator index ({i},{j}) not i<j<d")
        comm_map[(i, j)] = tuple(w)
    powers = [tuple(p) for p in powers]
    if len(powers) != d:
        raise InconsistentPresentation(f"need {d} power words, got {len(powers)}")
    widths = {len(w) for w in comm_map.values()} | {len(p) for p in powers}
    widths.discard(0)
    if len(widths) > 1:
        raise InconsistentPresentation(f"central word lengths differ: {sorted(widths)}")
    s = widths.pop() if widths else 0
    if central_orders is None:
        central_orders = [q] * s
    central_orders = [int(o) for o in central_orders]
    if len(central_orders) != s:
        raise InconsistentPresentation("central_orders length mismatch")
    for o in central_orders:
        ok, k = o, o
        while k % ring.ell == 0:
            k //= ring.ell
        if k != 1 or o < 2:
            raise InconsistentPresentation(f"central order {o} is not an l-power >= 2")

    from itertools import product as iproduct

    elems = [
        (a, c)
        for a in iproduct(range(q), repeat=d)
        for c in iproduct(*(range(o) for o in central_orders))
    ]
    index = {e: i for i, e in enumerate(elems)}

    def mul(x, y):
        a, cx = x
        b, cy = y
        cz = [(u + v) % o for u, v, o in zip(cx, cy, central_orders)]
        for (i, j), w in comm_map.items():
            f = a[j] * b[i]
            if f:
                for k, wk in enumerate(w):
                    if wk:
                        cz[k] = (cz[k] - f * wk) % central_orders[k]
        na = []
        for i in range(d):
            t = a[i] + b[i]
            if t >= q:
                t -= q
                for k, pk in enumerate(powers[i]):
                    if pk:
                        cz[k] = (cz[k] + pk) % central_orders[k]
            na.append(t)
        return (tuple(na), tuple(cz))

    table = [[index[mul(x, y)] for y in elems] for x in elems]

    def word_label(x):
        a, c = x
        parts = [f"e{i + 1}^{v}" if v > 1 else f"e{i + 1}" for i, v in enumerate(a) if v]
        parts += [f"z{k + 1}^{v}" if v > 1 else f"z{k + 1}" for k, v in enumerate(c) if v]
        return "*".join(parts) if parts else "1"

    labels = [word_label(x) for x in elems]
    gens = []
    for i in range(d):
        a = tuple(1 if k == i else 0 for k in range(d))
        gens.append(index[(a, tuple([0] * s))])
    try:
        grp, old_to_new = _build_group(table, gens, labels=labels, ell=ring.ell)
    except (NotAGroup, NotEllGroup, GeneratorsDontGenerate) as exc:
        raise InconsistentPresentation(str(exc)) from exc
    out = FinGroup.__new__(FinGroup)
    (out.order, out.cayley, out.identity, out.generators, out.labels, out._inv, out._orders) = grp

    # verify the prescribed relations in the materialized group
    e = [old_to_new[g] for g in gens]
    for (i, j), w in comm_map.items():
        zc = tuple([0] * d), tuple(v % o for v, o in zip(w, central_orders))
        if out.comm(e[i], e[j]) != old_to_new[index[zc]]:
            raise InconsistentPresentation(f"[e{i + 1},e{j + 1}] does not match its word")
    for i in range(d):
        zc = tuple([0] * d), tuple(v % o for v, o in zip(powers[i], central_orders))
        if out.power(e[i], q) != old_to_new[index[zc]]:
            raise InconsistentPresentation(f"e{i + 1}^{q} does not match its word")
    return out


def _table_group(elems, mul, gens, labelfunc=None, ell=None) -> FinGroup:
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[mul(x, y)] for y in elems] for x in elems]
    labels = [labelfunc(x) for x in elems] if labelfunc else None
    return from_cayley_table(table, [index[g] for g in gens], labels=labels, ell=ell)


def catalog(name: str, params=None) -> FinGroup:
    """Named constructors for the groups the theory gets exercised on."""
    params = dict(params or {})
    name = name.lower()

    def need(key, default=None):
        if key in params:
            return params[key]
        if default is not None:
            return default
        raise UnknownCatalogEntry(f"catalog {name!r} needs parameter {key!r}")

    if name == "cyclic":
        ell = int(need("ell"))
        k = int(need("k", 1))
        m = ell**k
        elems = list(range(m))
        return _table_group(elems, lambda x, y: (x + y) % m, [1] if m > 1 else [], str, ell=ell)
    if name == "elementary_abelian":
        ell = int(need("ell"))
        d = int(need("d"))
        return catalog("abelian_product", {"ell": ell, "exponents": [1] * d})
    if name == "abelian_product":
        ell = int(need("ell"))
        exps = [int(e) for e in need("exponents")]
        from itertools import product as iproduct

        mods = [ell**e for e in exps]
        elems = list(iproduct(*(range(m) for m in mods)))
        gens = [
            tuple(1 if i == k else 0 for i in range(len(mods))) for k in range(len(mods))
        ]

        def mul(x, y):
            return tuple((a + b) % m for a, b, m in zip(x, y, mods))

        return _table_group(elems, mul, gens, str, ell=ell)
    if name == "quaternion8":
        ring = RingConfig(2, 1)
        return from_class2_presentation(
            2, ring, {(0, 1): (1,)}, [(1,), (1,)], central_orders=[2]
        )
    if name == "dihedral8":
        ring = RingConfig(2, 1)
        return from_class2_presentation(
            2, ring, {(0, 1): (1,)}, [(1,), (0,)], central_orders=[2]
        )
    if name == "heisenberg":
        ell = int(need("ell"))
        ring = RingConfig(ell, 1)
        return from_class2_presentation(
            2, ring, {(0, 1): (1,)}, [(0,), (0,)], central_orders=[ell]
        )
    if name == "unitriangular3":
        ell = int(need("ell"))
        n = int(need("n"))
        m = ell**n
        from itertools import product as iproduct

        elems = list(iproduct(range(m), repeat=3))

        def mul(x, y):
            return ((x[0] + y[0]) % m, (x[1] + y[1]) % m, (x[2] + y[2] + x[0] * y[1]) % m)

        return _table_group(elems, mul, [(1, 0, 0), (0, 1, 0)], str, ell=ell)
    if name == "wreath_z4_z2":

        def mul(x, y):
            a, b, si = x
            c, dd, t = y
            if si:
                c, dd = dd, c
            return ((a + c) % 4, (b + dd) % 4, (si + t) % 2)

        from itertools import product as iproduct

        elems = [(a, b, s) for a in range(4) for b in range(4) for s in range(2)]
        return _table_group(elems, mul, [(1, 0, 0), (0, 0, 1)], str, ell=2)
    if name == "free_class2":
        d = int(need("d"))
        ell = int(need("ell"))
        n = int(need("n"))
        ring = RingConfig(ell, n)
        pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
        s = len(pairs) + d
        comms = {}
        for k, (i, j) in enumerate(pairs):
            comms[(i, j)] = tuple(1 if t == k else 0 for t in range(s))
        powers = [
            tuple(1 if t == len(pairs) + i else 0 for t in range(s)) for i in range(d)
        ]
        return from_class2_presentation(d, ring, comms, powers)
    raise UnknownCatalogEntry(f"unknown catalog group {name!r}")


def group_from_json(obj, ell=None) -> FinGroup:
    """Parse the group JSON formats the CLI accepts."""
    if not isinstance(obj, dict):
        raise ValueError("group spec must be a JSON object")
    if "cayley" in obj:
        return from_cayley_table(obj["cayley"], obj.get("generators", []), ell=ell)
    if "class2" in obj:
        spec = obj["class2"]
        ring = RingConfig(int(spec["ell"]), int(spec["n"]))
        comms = spec.get("commutators", {})
        if isinstance(comms, dict):
            comms = {
                tuple(int(t) for t in key.split(",")): tuple(val)
                for key, val in comms.items()
            }
        return from_class2_presentation(
            int(spec["d"]), ring, comms, spec.get("powers", []),
            central_orders=spec.get("central_orders"),
        )
    if "catalog" in obj:
        return catalog(obj["catalog"], obj.get("params", {}))
    raise ValueError("group spec needs one of: cayley, class2, catalog")
