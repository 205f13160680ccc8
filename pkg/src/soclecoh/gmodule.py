"""Group rings over Z/l^n, their augmentation filtration, and finite modules.

Every module is materialized to one shape: a list of cyclic orders (each a
power of l dividing l^n) plus one commuting action matrix per chosen
generator of the acting group.  Linear algebra on submodules happens in
"scaled" coordinates: a module vector x with coordinate orders q_k embeds
into (Z/l^n)^t via x_k |-> (l^n/q_k) x_k, where the Howell machinery of
zmodlin applies verbatim.  Helpers convert both ways.

Matrix conventions follow zmodlin: row vectors, action on the right, and a
matrix entry A[k][j] lives modulo the order of target coordinate j.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import DimensionMismatch, NotFreeModule
from .fingroup import ExtensionData, FinGroup, abelian_structure
from .zmodlin import (
    HowellBasis,
    RingConfig,
    contains,
    howell_form_rows,
    kernel,
    quotient_presentation,
    ZMat,
)

# ---------------------------------------------------------------------------
# Vector/matrix arithmetic with per-coordinate orders.
# ---------------------------------------------------------------------------


def vec_reduce(v, orders):
    return tuple(x % o for x, o in zip(v, orders))


def mat_apply(v, a, orders_out):
    """Row vector times matrix, columns reduced to their orders."""
    t_out = len(orders_out)
    out = [0] * t_out
    for k, x in enumerate(v):
        if x:
            row = a[k]
            for j in range(t_out):
                if row[j]:
                    out[j] += x * row[j]
    return tuple(y % o for y, o in zip(out, orders_out))


def mat_mul(a, b, orders_out):
    return tuple(mat_apply(row, b, orders_out) for row in a)


def mat_identity(orders):
    t = len(orders)
    return tuple(tuple(1 if i == j else 0 for j in range(t)) for i in range(t))


def mat_add(a, b, orders_out, sign=1):
    return tuple(
        tuple((x + sign * y) % o for x, y, o in zip(ra, rb, orders_out))
        for ra, rb in zip(a, b)
    )


def mat_pow(a, k, orders_out):
    out = mat_identity(orders_out)
    while k:
        if k & 1:
            out = mat_mul(out, a, orders_out)
        a = mat_mul(a, a, orders_out)
        k >>= 1
    return out


def scale_vec(x, orders, ring: RingConfig):
    q = ring.modulus
    return tuple((q // o) * (v % o) for v, o in zip(x, orders))


def descale_vec(X, orders, ring: RingConfig):
    q = ring.modulus
    out = []
    for v, o in zip(X, orders):
        f = q // o
        if v % f:
            raise ValueError("vector is not in the scaled image of the module")
        out.append((v // f) % o)
    return tuple(out)


def full_scaled_basis(orders, ring: RingConfig) -> HowellBasis:
    q = ring.modulus
    t = len(orders)
    rows = tuple(
        tuple(q // orders[k] if j == k else 0 for j in range(t)) for k in range(t)
    )
    return HowellBasis(t, rows, ring)


def kernel_in_module(orders, maps, ring: RingConfig) -> HowellBasis:
    """Scaled basis of {x in M : x . a = 0 for every (a, orders_out) in maps}."""
    t = len(orders)
    q = ring.modulus
    if t == 0:
        return HowellBasis(0, (), ring)
    if not maps:
        return full_scaled_basis(orders, ring)
    cols = []
    for a, orders_out in maps:
        cols.append((a, orders_out, len(orders_out)))
    width = sum(c[2] for c in cols)
    rows = []
    for k in range(t):
        row = []
        for a, orders_out, t_out in cols:
            arow = a[k]
            row.extend((arow[j] * (q // orders_out[j])) % q for j in range(t_out))
        rows.append(row)
    ker = kernel(ZMat.from_rows(rows, width, ring))
    scaled = [scale_vec(vec_reduce(c, orders), orders, ring) for c in ker.rows]
    return howell_form_rows(scaled, t, ring)


def scaled_span(vectors, orders, ring: RingConfig) -> HowellBasis:
    rows = [scale_vec(v, orders, ring) for v in vectors]
    return howell_form_rows(rows, len(orders), ring)


def enumerate_module(orders):
    return product(*(range(o) for o in orders))


def enumerate_scaled_span(basis: HowellBasis, orders, ring: RingConfig):
    """Module-coordinate elements of a scaled submodule, deterministic order."""
    from .zmodlin import enumerate_span

    for X in enumerate_span(basis):
        yield descale_vec(X, orders, ring)


# ---------------------------------------------------------------------------
# Modules.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GModule:
    """Finite Z/l^n-module with commuting generator actions.

    orders[k] is the order of cyclic coordinate k; actions[i] is the matrix
    of the i-th group generator.  Validated: entries reduced and well-defined
    (q_k * A[k][j] = 0 mod q_j), actions commute, and A^(l^n) = identity.
    """

    ring: RingConfig
    orders: tuple
    actions: tuple

    def __post_init__(self):
        q = self.ring.modulus
        t = len(self.orders)
        for o in self.orders:
            if o < 2 or q % o:
                raise ValueError(f"coordinate order {o} does not divide {q}")
        for a in self.actions:
            if len(a) != t or any(len(r) != t for r in a):
                raise DimensionMismatch("action matrix shape mismatch")
            for k in range(t):
                for j in range(t):
                    v = a[k][j]
                    if not 0 <= v < self.orders[j]:
                        raise ValueError("action entry not reduced")
                    if (self.orders[k] * v) % self.orders[j]:
                        raise ValueError("action matrix not well-defined on the module")
        ident = mat_identity(self.orders)
        for a in self.actions:
            if mat_pow(a, q, self.orders) != ident:
                raise ValueError("action matrix order does not divide l^n")
        for i, a in enumerate(self.actions):
            for b in self.actions[i + 1 :]:
                if mat_mul(a, b, self.orders) != mat_mul(b, a, self.orders):
                    raise ValueError("action matrices do not commute")

    @property
    def rank(self) -> int:
        return len(self.orders)

    def size(self) -> int:
        s = 1
        for o in self.orders:
            s *= o
        return s

    def act(self, v, gen_index: int):
        return mat_apply(v, self.actions[gen_index], self.orders)

    def inverse_actions(self):
        q = self.ring.modulus
        return tuple(mat_pow(a, q - 1, self.orders) for a in self.actions)


def make_module(ring, orders, actions) -> GModule:
    """Reduce entries and build a validated GModule."""
    orders = tuple(int(o) for o in orders)
    red = tuple(
        tuple(tuple(v % orders[j] for j, v in enumerate(row)) for row in a)
        for a in actions
    )
    return GModule(ring, orders, red)


def trivial_module(ring: RingConfig, orders=None, ngens: int = 0) -> GModule:
    orders = tuple(orders) if orders is not None else (ring.modulus,)
    ident = mat_identity(orders)
    return GModule(ring, orders, tuple(ident for _ in range(ngens)))


def element_matrices(module: GModule, coords_list):
    """Action matrix of each group element from its exponent coordinates."""
    coords_list = list(coords_list)
    max_exp = max((max(cs, default=0) for cs in coords_list), default=0)
    pows = []
    for a in module.actions:
        pw = [mat_identity(module.orders)]
        for _ in range(max_exp):
            pw.append(mat_mul(pw[-1], a, module.orders))
        pows.append(pw)
    out = []
    for cs in coords_list:
        m = mat_identity(module.orders)
        for i, c in enumerate(cs):
            if c:
                m = mat_mul(m, pows[i][c], module.orders)
        out.append(m)
    return tuple(out)


def dual(module: GModule) -> GModule:
    """Pontryagin dual: same orders, action (sigma f)(x) = f(sigma^-1 x)."""
    orders = module.orders
    t = len(orders)
    inv = module.inverse_actions()
    duals = []
    for b in inv:
        d = [[0] * t for _ in range(t)]
        for k in range(t):
            for j in range(t):
                d[k][j] = (b[j][k] * orders[j] // orders[k]) % orders[j]
        duals.append(tuple(tuple(r) for r in d))
    return GModule(module.ring, orders, tuple(duals))


def dual_pair(u, x, orders, ring: RingConfig) -> int:
    """Evaluation <u, x> = sum (l^n/q_k) u_k x_k of a functional at a point."""
    q = ring.modulus
    return sum((q // o) * a * b for a, b, o in zip(u, x, orders)) % q


def dual_transpose(f, orders_in, orders_out):
    """Matrix of the dual map between dual modules.

    If f maps M (orders_in) to N (orders_out), the result maps N^vee to
    M^vee, with <dual(u), x> = <u, f(x)> for all x in M.
    """
    t_in, t_out = len(orders_in), len(orders_out)
    g = [[0] * t_in for _ in range(t_out)]
    for k in range(t_out):
        for a in range(t_in):
            g[k][a] = (f[a][k] * orders_in[a] // orders_out[k]) % orders_in[a]
    return tuple(tuple(r) for r in g)


def invariants(module: GModule) -> HowellBasis:
    """Scaled basis of the fixed points of all generator actions."""
    maps = []
    ident = mat_identity(module.orders)
    for a in module.actions:
        diff = mat_add(a, ident, module.orders, sign=-1)
        maps.append((diff, module.orders))
    return kernel_in_module(module.orders, maps, module.ring)


# ---------------------------------------------------------------------------
# Hom modules.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HomModule:
    """Hom(M, N) as a module of matrices with the conjugation action."""

    source: GModule
    target: GModule
    module: GModule

    def flat_index(self, a, b):
        return a * self.target.rank + b

    def matrix_to_coords(self, f):
        out = []
        for a in range(self.source.rank):
            for b in range(self.target.rank):
                qa, qb = self.source.orders[a], self.target.orders[b]
                g = min(qa, qb)  # gcd of two l-powers
                step = qb // g
                v = f[a][b] % qb
                if v % step:
                    raise ValueError("matrix is not a well-defined module hom")
                out.append((v // step) % g)
        return tuple(out)

    def coords_to_matrix(self, c):
        tm, tn = self.source.rank, self.target.rank
        f = [[0] * tn for _ in range(tm)]
        for a in range(tm):
            for b in range(tn):
                qa, qb = self.source.orders[a], self.target.orders[b]
                g = min(qa, qb)
                f[a][b] = (c[a * tn + b] % g) * (qb // g) % qb
        return tuple(tuple(r) for r in f)


def hom_module(m: GModule, n: GModule) -> HomModule:
    if m.ring != n.ring:
        raise ValueError("modules live over different rings")
    if len(m.actions) != len(n.actions):
        raise ValueError("modules have different acting generator counts")
    orders = tuple(
        min(m.orders[a], n.orders[b]) for a in range(m.rank) for b in range(n.rank)
    )
    minv = m.inverse_actions()
    shell = HomModule(m, n, trivial_module(m.ring, orders or (m.ring.modulus,), 0))
    actions = []
    for i in range(len(m.actions)):
        rows = []
        for a in range(m.rank):
            for b in range(n.rank):
                base = [[0] * n.rank for _ in range(m.rank)]
                g = min(m.orders[a], n.orders[b])
                base[a][b] = n.orders[b] // g
                moved = mat_mul(mat_mul(minv[i], base, n.orders), n.actions[i], n.orders)
                rows.append(shell.matrix_to_coords(moved))
        actions.append(tuple(rows))
    mod = GModule(m.ring, orders, tuple(actions)) if orders else GModule(m.ring, (), tuple(() for _ in m.actions))
    return HomModule(m, n, mod)


def hom_g(m: GModule, n: GModule):
    """(HomModule, scaled basis of the equivariant homs)."""
    hm = hom_module(m, n)
    return hm, invariants(hm.module)


def enumerate_hom_g(hm: HomModule, basis: HowellBasis):
    """All equivariant matrices, deterministically ordered."""
    for c in enumerate_scaled_span(basis, hm.module.orders, hm.module.ring):
        yield hm.coords_to_matrix(c)


# ---------------------------------------------------------------------------
# Group ring and augmentation powers.
# ---------------------------------------------------------------------------


class GroupRing:
    """Z/l^n[G] for abelian G free over Z/l^n, with coordinates per element."""

    def __init__(self, group: FinGroup, ring: RingConfig, sigma=None, coords=None):
        if not group.is_abelian():
            raise NotFreeModule("group ring requires an abelian group")
        if sigma is None:
            st = abelian_structure(group)
            if any(o != ring.modulus for o in st.orders):
                raise NotFreeModule(
                    f"group has invariant factors {st.orders}, not free over Z/{ring.modulus}"
                )
            sigma, coords = st.basis, st.coords
        else:
            for s in sigma:
                if group.elt_order(s) != ring.modulus:
                    raise NotFreeModule(f"generator {s} does not have order {ring.modulus}")
            for x in group.elements():
                w = group.identity
                for s, c in zip(sigma, coords[x]):
                    w = group.mul(w, group.power(s, c))
                if w != x:
                    raise NotFreeModule(f"coordinates do not reproduce element {x}")
        self.group = group
        self.ring = ring
        self.sigma = tuple(sigma)
        self.coords = tuple(coords)
        self.size = group.order
        self._left = tuple(
            tuple(group.mul(g, x) for x in group.elements()) for g in group.elements()
        )
        self._ideals = []

    @property
    def d(self) -> int:
        return len(self.sigma)

    def eps(self, v) -> int:
        return sum(v) % self.ring.modulus

    def elem_vec(self, g: int):
        return tuple(1 if x == g else 0 for x in range(self.size))

    def mult_by_elem(self, g: int, v):
        out = [0] * self.size
        perm = self._left[g]
        for x, c in enumerate(v):
            if c:
                out[perm[x]] = c
        return tuple(out)

    def mult(self, v, w):
        q = self.ring.modulus
        out = [0] * self.size
        for x, a in enumerate(v):
            if a:
                perm = self._left[x]
                for y, b in enumerate(w):
                    if b:
                        out[perm[y]] = (out[perm[y]] + a * b) % q
        return tuple(out)

    def augmentation_row(self, g: int):
        """The vector g - 1."""
        v = [0] * self.size
        v[g] = 1
        v[self.group.identity] = (v[self.group.identity] - 1) % self.ring.modulus
        return tuple(v)

    def ideal_basis(self, m: int) -> HowellBasis:
        """Canonical basis of I^m inside (Z/l^n)^|G|, computed iteratively."""
        if m < 1:
            raise ValueError("ideal power needs m >= 1")
        while len(self._ideals) < m:
            if not self._ideals:
                rows = [
                    self.augmentation_row(g)
                    for g in self.group.elements()
                    if g != self.group.identity
                ]
                self._ideals.append(howell_form_rows(rows, self.size, self.ring))
            else:
                prev = self._ideals[-1]
                q = self.ring.modulus
                rows = []
                for g in self.group.elements():
                    if g == self.group.identity:
                        continue
                    for v in prev.rows:
                        moved = self.mult_by_elem(g, v)
                        rows.append(tuple((a - b) % q for a, b in zip(moved, v)))
                self._ideals.append(howell_form_rows(rows, self.size, self.ring))
        return self._ideals[m - 1]

    def nilpotency_degree(self) -> int:
        """Least m with I^m = 0."""
        m = 1
        while len(self.ideal_basis(m)) > 0:
            m += 1
            if m > self.ring.n * self.size + 2:
                raise RuntimeError("augmentation ideal failed to vanish")
        return m


@dataclass(frozen=True)
class IdealPower:
    ring: GroupRing
    m: int
    basis: HowellBasis


def regular_module(gr: GroupRing) -> GModule:
    """Lambda as a module over itself: free of rank |G|, permutation actions."""
    q = gr.ring.modulus
    orders = (q,) * gr.size
    actions = []
    for s in gr.sigma:
        perm = gr._left[s]
        actions.append(
            tuple(tuple(1 if perm[x] == ypos else 0 for ypos in range(gr.size)) for x in range(gr.size))
        )
    return GModule(gr.ring, orders, tuple(actions))


def group_ring(group: FinGroup, ring: RingConfig, sigma=None, coords=None) -> GroupRing:
    return GroupRing(group, ring, sigma=sigma, coords=coords)


def ideal_power(gr: GroupRing, m: int) -> IdealPower:
    return IdealPower(gr, m, gr.ideal_basis(m))


# ---------------------------------------------------------------------------
# The quotient presentations Lambda_m and I_m.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientModule:
    """A quotient of an ambient free coordinate space, as a GModule.

    project maps ambient row vectors to module coordinates; section picks
    representatives.  For i_m the ambient is the rho-coordinate space of I
    (basis g - 1 for g != 1); for lambda_m it is Lambda itself.
    """

    module: GModule
    ambient_rank: int
    project: tuple  # ambient_rank x rank
    section: tuple  # rank x ambient_rank

    def project_vec(self, v):
        orders = self.module.orders
        out = [0] * len(orders)
        for i, x in enumerate(v):
            if x:
                row = self.project[i]
                for j in range(len(orders)):
                    if row[j]:
                        out[j] = (out[j] + x * row[j]) % orders[j]
        return tuple(out)

    def section_vec(self, y):
        q = self.module.ring.modulus
        out = [0] * self.ambient_rank
        for i, x in enumerate(y):
            if x % self.module.orders[i]:
                row = self.section[i]
                for j in range(self.ambient_rank):
                    if row[j]:
                        out[j] = (out[j] + x * row[j]) % q
        return tuple(out)


def _rho_of_lambda(v):
    """Drop the identity coordinate: Lambda coords -> rho coords of I."""
    return tuple(v[1:])


def _lambda_of_rho(w, ring: RingConfig):
    q = ring.modulus
    return ((-sum(w)) % q,) + tuple(x % q for x in w)


def i_m(gr: GroupRing, m: int) -> QuotientModule:
    """I/I^m with the multiplication action of the sigma generators."""
    ring = gr.ring
    amb = gr.size - 1
    sub_rows = [_rho_of_lambda(r) for r in gr.ideal_basis(m).rows]
    qp = quotient_presentation(howell_form_rows(sub_rows, amb, ring), amb)
    orders = qp.orders

    def mult_sigma_rho(s, w):
        # sigma . (g - 1) = (sigma g - 1) - (sigma - 1) on rho coordinates
        q = ring.modulus
        out = [0] * amb
        for idx, c in enumerate(w):
            if c:
                g = idx + 1
                sg = gr.group.mul(s, g)
                if sg != gr.group.identity:
                    out[sg - 1] = (out[sg - 1] + c) % q
                out[s - 1] = (out[s - 1] - c) % q
        return tuple(out)

    actions = []
    for s in gr.sigma:
        rows = []
        for j in range(len(orders)):
            y = tuple(1 if i == j else 0 for i in range(len(orders)))
            moved = mult_sigma_rho(s, qp.section_vec(y))
            rows.append(qp.project_vec(moved))
        actions.append(tuple(rows))
    module = make_module(ring, orders, actions) if orders else GModule(
        ring, (), tuple(() for _ in gr.sigma)
    )
    return QuotientModule(module, amb, qp.project, qp.section)


def lambda_m(gr: GroupRing, m: int) -> QuotientModule:
    """Lambda/I^m = R . 1  (+)  I_m, coordinates (eps part, I_m part)."""
    ring = gr.ring
    q = ring.modulus
    im = i_m(gr, m)
    orders = (q,) + im.module.orders
    t = len(orders)
    actions = []
    for si, s in enumerate(gr.sigma):
        rows = []
        rho_s = [0] * (gr.size - 1)
        rho_s[s - 1] = 1
        top = (1,) + im.project_vec(tuple(rho_s))
        rows.append(top)
        for r in im.module.actions[si]:
            rows.append((0,) + tuple(r))
        actions.append(tuple(rows))
    module = make_module(ring, orders, actions)
    # project: Lambda coords -> (eps, I_m coords); section back
    project = []
    for g in range(gr.size):
        rho = [0] * (gr.size - 1)
        if g != 0:
            rho[g - 1] = 1
        project.append((1,) + im.project_vec(tuple(rho)))
    section = []
    one = tuple(1 if g == 0 else 0 for g in range(gr.size))
    section.append(one)
    for j in range(len(im.module.orders)):
        y = tuple(1 if i == j else 0 for i in range(len(im.module.orders)))
        section.append(_lambda_of_rho(im.section_vec(y), ring))
    return QuotientModule(module, gr.size, tuple(project), tuple(section))


def lambda_action_matrix(jmod: GModule, elem_mats, lam_vec):
    """Action of a Lambda element (coefficient vector over G) on a module."""
    orders = jmod.orders
    t = len(orders)
    out = [[0] * t for _ in range(t)]
    for g, c in enumerate(lam_vec):
        if c:
            mg = elem_mats[g]
            for k in range(t):
                row = mg[k]
                for j in range(t):
                    if row[j]:
                        out[k][j] += c * row[j]
    return tuple(tuple(v % orders[j] for j, v in enumerate(r)) for r in out)


# ---------------------------------------------------------------------------
# The module J = dual of the capped abelianization of H.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JBundle:
    """J = H^1(H) as a G-module, with the dual H-side bookkeeping.

    hab is the abelianization of H capped at exponent l^n, with the
    conjugation action of the sigma lifts; module is its dual (that is J).
    h_coords maps a parent-group index belonging to H to capped coordinates.
    """

    ext: ExtensionData
    hab: GModule
    module: GModule
    hab_orders_full: tuple
    h_coords: dict

    def pair(self, jvec, habvec) -> int:
        return dual_pair(jvec, habvec, self.hab.orders, self.module.ring)


def module_J(ext: ExtensionData, ring: RingConfig | None = None) -> JBundle:
    ring = ring or ext.ring
    q = ring.modulus
    hgrp, to_parent, to_sub = ext.kernel.as_group()
    st = abelian_structure(hgrp)
    caps = tuple(min(o, q) for o in st.orders)
    g = ext.total
    conj_rows = []
    for t_i in ext.lifts:
        rows = []
        for b in st.basis:
            moved = g.conj(t_i, to_parent[b])
            rows.append(tuple(c % cap for c, cap in zip(st.coords[to_sub[moved]], caps)))
        conj_rows.append(tuple(rows))
    hab = make_module(ring, caps, conj_rows) if caps else GModule(
        ring, (), tuple(() for _ in ext.lifts)
    )
    jmod = dual(hab)
    h_coords = {
        to_parent[i]: tuple(c % cap for c, cap in zip(st.coords[i], caps))
        for i in range(hgrp.order)
    }
    return JBundle(ext, hab, jmod, st.orders, h_coords)


# ---------------------------------------------------------------------------
# Socle series.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SocleChain:
    """Ascending socle steps of a module, as scaled Howell bases.

    steps[m-1] is the scaled basis of J_m; stabilization is the least m with
    J_m = J.
    """

    module: GModule
    steps: tuple
    stabilization: int

    def basis(self, m: int) -> HowellBasis:
        if m < 1:
            raise ValueError("socle level starts at 1")
        return self.steps[min(m, len(self.steps)) - 1]

    def member(self, vec, m: int) -> bool:
        return contains(self.basis(m), scale_vec(vec, self.module.orders, self.module.ring))

    def level_of(self, vec):
        for m in range(1, len(self.steps) + 1):
            if self.member(vec, m):
                return m
        return None


def socle_series(jmod: GModule, gr: GroupRing) -> SocleChain:
    """J_m = {x : I^m x = 0}, computed from the canonical I^m bases."""
    ring = gr.ring
    elem_mats = element_matrices(jmod, gr.coords)
    full = full_scaled_basis(jmod.orders, ring)
    steps = []
    m = 1
    while True:
        ib = gr.ideal_basis(m)
        maps = [
            (lambda_action_matrix(jmod, elem_mats, w), jmod.orders) for w in ib.rows
        ]
        jm = kernel_in_module(jmod.orders, maps, ring)
        steps.append(jm)
        if jm == full:
            return SocleChain(jmod, tuple(steps), m)
        if len(steps) > 1 and steps[-1] == steps[-2]:
            raise RuntimeError("socle series stalled before exhausting the module")
        m += 1


# ---------------------------------------------------------------------------
# Quotient modules (J/J_m and friends).
# ---------------------------------------------------------------------------


def quotient_module(module: GModule, sub_scaled: HowellBasis) -> QuotientModule:
    """module / (scaled submodule), with induced actions."""
    ring = module.ring
    t = module.rank
    rel = [
        tuple(module.orders[k] if j == k else 0 for j in range(t)) for k in range(t)
    ]
    rel += [descale_vec(r, module.orders, ring) for r in sub_scaled.rows]
    qp = quotient_presentation(howell_form_rows(rel, t, ring), t)
    orders = qp.orders
    actions = []
    for a in module.actions:
        rows = []
        for j in range(len(orders)):
            y = tuple(1 if i == j else 0 for i in range(len(orders)))
            x = vec_reduce(qp.section_vec(y), module.orders)
            rows.append(qp.project_vec(mat_apply(x, a, module.orders)))
        actions.append(tuple(rows))
    newmod = make_module(ring, orders, actions) if orders else GModule(
        ring, (), tuple(() for _ in module.actions)
    )
    project = tuple(tuple(row) for row in qp.project)
    section = tuple(vec_reduce(qp.section_vec(tuple(1 if i == j else 0 for i in range(len(orders)))), module.orders) for j in range(len(orders)))
    return QuotientModule(newmod, t, project, section)


# ---------------------------------------------------------------------------
# Bundled per-extension caches and the invariant-homs record.
# ---------------------------------------------------------------------------


class ExtensionModules:
    """Caches the module side of one extension: ring, ideals, J, socle."""

    def __init__(self, ext: ExtensionData):
        self.ext = ext
        self.ring = ext.ring
        self.gr = GroupRing(ext.quotient, ext.ring, sigma=ext.sigma, coords=ext.coords)
        self.j = module_J(ext)
        self.socle = socle_series(self.j.module, self.gr)
        self.elem_mats = element_matrices(self.j.module, self.gr.coords)
        self._im = {}
        self._lam = {}

    def i_m(self, m: int) -> QuotientModule:
        if m not in self._im:
            self._im[m] = i_m(self.gr, m)
        return self._im[m]

    def lambda_m(self, m: int) -> QuotientModule:
        if m not in self._lam:
            self._lam[m] = lambda_m(self.gr, m)
        return self._lam[m]

    def im_lift_to_lambda(self, m: int, y):
        """Lift I_m coordinates to a Lambda coefficient vector."""
        im = self.i_m(m)
        return _lambda_of_rho(im.section_vec(y), self.ring)

    def phi_gamma_matrix(self, gamma, m: int):
        """Matrix of eta |-> eta . gamma on I_m, rows per I_m coordinate."""
        im = self.i_m(m)
        rows = []
        for a in range(im.module.rank):
            y = tuple(1 if i == a else 0 for i in range(im.module.rank))
            w = self.im_lift_to_lambda(m, y)
            nmat = lambda_action_matrix(self.j.module, self.elem_mats, w)
            rows.append(mat_apply(gamma, nmat, self.j.module.orders))
        return tuple(rows)


def jm_via_invariant_homs(em: ExtensionModules, m: int, exhaustive_bound: int = 256):
    """Both invariant-hom sides of level m plus the explicit comparison.

    Returns a dict with the Lambda_m side, the I_m side, the evaluation map
    f |-> f(1) onto J_m, the restriction map, and verification bits for the
    commuting square (exhaustive over J_m when it is small).
    """
    lam = em.lambda_m(m)
    im = em.i_m(m)
    jmod = em.j.module
    hom_lam, basis_lam = hom_g(lam.module, jmod)
    hom_im, basis_im = hom_g(im.module, jmod)
    jm_basis = em.socle.basis(m)

    # f |-> f(1): row 0 of the matrix (1 has Lambda_m coordinates (1,0,...))
    eval_rows = []
    for row in basis_lam.rows:
        c = descale_vec(row, hom_lam.module.orders, em.ring)
        f = hom_lam.coords_to_matrix(c)
        eval_rows.append(f[0] if f else tuple())
    image_of_eval = scaled_span(eval_rows, jmod.orders, em.ring) if jmod.rank else jm_basis
    iso_onto_jm = image_of_eval == jm_basis and (
        basis_lam.span_size() == jm_basis.span_size()
    )

    # commuting square: restriction of f equals phi_{f(1)}
    square_ok = True
    checked = 0
    if basis_lam.span_size() <= exhaustive_bound:
        for c in enumerate_scaled_span(basis_lam, hom_lam.module.orders, em.ring):
            f = hom_lam.coords_to_matrix(c)
            gamma = f[0] if f else tuple()
            restricted = tuple(f[1:])
            if restricted != em.phi_gamma_matrix(gamma, m):
                square_ok = False
            checked += 1
    return {
        "lambda_side": (hom_lam, basis_lam),
        "i_side": (hom_im, basis_im),
        "jm_basis": jm_basis,
        "iso_onto_jm": iso_onto_jm,
        "square_commutes": square_ok,
        "square_checked": checked,
    }
