"""Normalized bar-resolution cohomology for finite groups with module values.

Cochains are finitely supported maps from k-tuples of non-identity group
elements to module coordinate vectors; any tuple containing the identity
implicitly maps to zero.  The differential is the standard bar formula

    (df)(g1..g_{k+1}) = g1.f(g2..) + sum_i (-1)^i f(..g_i g_{i+1}..)
                        + (-1)^{k+1} f(g1..g_k)

and is evaluated support-driven, so sparse cochains stay cheap.  Coboundary
tests are canonical solves against the previous differential's matrix; the
solver matrices live in the "coefficient" space of zmodlin (each target
coordinate scaled by l^n/order) so one Howell engine serves all modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import (
    DimensionMismatch,
    EquivarianceFailure,
    NotACocycle,
    PairingMismatch,
    SectionNotLinear,
    SizeBound,
    SocleCohError,
)
from .fingroup import ExtensionData, FinGroup, Subgroup
from .gmodule import (
    GModule,
    JBundle,
    element_matrices,
    mat_apply,
    mat_mul,
    module_J,
    vec_reduce,
)
from .zmodlin import HowellBasis, LinearSolver, RingConfig, howell_form_rows, quotient_orders

DEFAULT_RANK_CELLS = 2_000_000
DEFAULT_H2_MAX_ORDER = 32


@dataclass(frozen=True)
class CoeffAction:
    """A module together with the action of every element of one group.

    mats[x] is the action matrix of group element x on the module; for a
    module of the quotient G acted on through a projection, mats composes
    the projection with the G-element matrices.
    """

    group: FinGroup
    module: GModule
    mats: tuple

    @classmethod
    def trivial(cls, group: FinGroup, ring: RingConfig, orders=None) -> "CoeffAction":
        from .gmodule import mat_identity, trivial_module

        mod = trivial_module(ring, orders, ngens=0)
        ident = mat_identity(mod.orders)
        return cls(group, mod, tuple(ident for _ in group.elements()))

    @classmethod
    def through(cls, group: FinGroup, module: GModule, coords_of) -> "CoeffAction":
        """Action of `group` via exponent coordinates over the module's generators."""
        mats = element_matrices(module, [coords_of[x] for x in group.elements()])
        return cls(group, module, mats)

    def act(self, x: int, v):
        return mat_apply(v, self.mats[x], self.module.orders)

    def act_inv(self, x: int, v):
        return mat_apply(v, self.mats[self.group.inv(x)], self.module.orders)


def action_for_quotient_module(ext: ExtensionData, module: GModule) -> CoeffAction:
    """G acting on one of its own modules (generators = ext.sigma)."""
    return CoeffAction.through(ext.quotient, module, ext.coords)


def action_through_projection(group: FinGroup, base: CoeffAction, proj) -> CoeffAction:
    """Pull the action back along a homomorphism group -> base.group."""
    return CoeffAction(group, base.module, tuple(base.mats[proj[x]] for x in group.elements()))


@dataclass(frozen=True)
class Cochain:
    """Normalized bar k-cochain with module values."""

    action: CoeffAction
    degree: int
    values: dict

    @classmethod
    def make(cls, action: CoeffAction, degree: int, values) -> "Cochain":
        orders = action.module.orders
        ident = action.group.identity
        out = {}
        for t, v in values.items():
            if len(t) != degree:
                raise DimensionMismatch(f"tuple {t} in a degree-{degree} cochain")
            if ident in t:
                continue
            v = vec_reduce(v, orders)
            if any(v):
                out[tuple(t)] = v
        return cls(action, degree, out)

    @classmethod
    def zero(cls, action: CoeffAction, degree: int) -> "Cochain":
        return cls(action, degree, {})

    def is_zero(self) -> bool:
        return not self.values

    def value(self, t):
        return self.values.get(tuple(t), tuple([0] * self.action.module.rank))

    def add(self, other: "Cochain", sign: int = 1) -> "Cochain":
        orders = self.action.module.orders
        out = dict(self.values)
        for t, v in other.values.items():
            cur = out.get(t, tuple([0] * len(orders)))
            nv = tuple((a + sign * b) % o for a, b, o in zip(cur, v, orders))
            if any(nv):
                out[t] = nv
            else:
                out.pop(t, None)
        return Cochain(self.action, self.degree, out)

    def neg(self) -> "Cochain":
        orders = self.action.module.orders
        return Cochain(
            self.action,
            self.degree,
            {t: tuple((-a) % o for a, o in zip(v, orders)) for t, v in self.values.items()},
        )

    def same_values(self, other: "Cochain") -> bool:
        return self.degree == other.degree and self.values == other.values


def differential(f: Cochain) -> Cochain:
    """Bar differential, evaluated only where the support can contribute."""
    act = f.action
    grp = act.group
    orders = act.module.orders
    k = f.degree
    ident = grp.identity
    nonid = [g for g in grp.elements() if g != ident]
    last_sign = -1 if (k + 1) % 2 else 1
    trivial = all(m is act.mats[ident] or m == act.mats[ident] for m in act.mats)
    acc = {}
    get = acc.get
    if trivial and len(orders) == 1:
        # hot path: rank-1 values under a trivial action are plain ints
        q = orders[0]
        for tup, vec in f.values.items():
            v = vec[0]
            lv = last_sign * v
            for g in nonid:
                t1 = (g,) + tup
                acc[t1] = get(t1, 0) + v
                t2 = tup + (g,)
                acc[t2] = get(t2, 0) + lv
            for i in range(k):
                sv = -v if (i + 1) % 2 else v
                ti = tup[i]
                head, tail = tup[:i], tup[i + 1 :]
                for a in nonid:
                    b = grp.mul(grp.inv(a), ti)
                    if b == ident:
                        continue
                    merged = head + (a, b) + tail
                    acc[merged] = get(merged, 0) + sv
        out = {}
        for tup, v in acc.items():
            rv = v % q
            if rv and ident not in tup:
                out[tup] = (rv,)
        return Cochain(act, k + 1, out)

    def bump(tup, vec):
        if ident in tup:
            return
        cur = acc.get(tup)
        if cur is None:
            acc[tup] = list(vec)
        else:
            for i, x in enumerate(vec):
                cur[i] += x

    for tup, vec in f.values.items():
        for g in nonid:
            bump((g,) + tup, vec if trivial else act.act(g, vec))
            bump(tup + (g,), [last_sign * x for x in vec])
        for i in range(k):
            sign = -1 if (i + 1) % 2 else 1
            ti = tup[i]
            for a in nonid:
                b = grp.mul(grp.inv(a), ti)
                if b == ident:
                    continue
                merged = tup[:i] + (a, b) + tup[i + 1 :]
                bump(merged, [sign * x for x in vec])
    out = {}
    for tup, vec in acc.items():
        rv = tuple(x % o for x, o in zip(vec, orders))
        if any(rv):
            out[tup] = rv
    return Cochain(act, k + 1, out)


def is_cocycle(f: Cochain) -> bool:
    return differential(f).is_zero()


class CochainComplex:
    """Solver cache for one coefficient action: differentials as matrices.

    Basis of C^k: (tuple, coordinate) pairs, tuples lexicographic over
    non-identity elements.  All matrices are scaled per target coordinate so
    the Howell machinery runs over Z/l^n; unknowns are coefficient vectors
    whose residues modulo the coordinate orders are the cochain values.
    """

    def __init__(self, action: CoeffAction, max_cells: int = DEFAULT_RANK_CELLS):
        self.action = action
        self.max_cells = max_cells
        self.n1 = action.group.order - 1
        self.t = action.module.rank
        self._solvers = {}

    def grid(self, k: int) -> int:
        return self.n1**k if k else 1

    def dim(self, k: int) -> int:
        return self.grid(k) * self.t

    def tuple_index(self, tup) -> int:
        idx = 0
        for g in tup:
            idx = idx * self.n1 + (g - 1)
        return idx

    def basis_tuples(self, k: int):
        ident = self.action.group.identity
        nonid = [g for g in self.action.group.elements() if g != ident]
        return product(nonid, repeat=k)

    def flat(self, f: Cochain):
        """Scaled vector of a cochain over the C^degree basis."""
        q = self.action.module.ring.modulus
        orders = self.action.module.orders
        out = {}
        for tup, vec in f.values.items():
            base = self.tuple_index(tup) * self.t
            for j, v in enumerate(vec):
                if v:
                    out[base + j] = v * (q // orders[j]) % q
        return out

    def unflat(self, xs, k: int) -> Cochain:
        """Coefficient vector (length dim(k)) back to a cochain."""
        orders = self.action.module.orders
        values = {}
        for idx, tup in enumerate(self.basis_tuples(k)):
            vec = tuple(xs[idx * self.t + j] % orders[j] for j in range(self.t))
            if any(vec):
                values[tup] = vec
        return Cochain(self.action, k, values)

    def diff_rows(self, k: int):
        """Sparse rows of d: C^k -> C^{k+1} in scaled coordinates."""
        q = self.action.module.ring.modulus
        orders = self.action.module.orders
        rows = []
        for tup in self.basis_tuples(k):
            for j in range(self.t):
                unit = Cochain(
                    self.action, k, {tup: tuple(1 if i == j else 0 for i in range(self.t))}
                )
                img = differential(unit)
                row = {}
                for t2, vec in img.values.items():
                    base = self.tuple_index(t2) * self.t
                    for j2, v in enumerate(vec):
                        if v:
                            row[base + j2] = v * (q // orders[j2]) % q
                rows.append(row)
        return rows

    def solver(self, k: int) -> LinearSolver:
        """Howell solver for d: C^k -> C^{k+1} (image, kernel, witnesses)."""
        if k not in self._solvers:
            cells = self.dim(k) + self.dim(k + 1)
            if cells > self.max_cells:
                raise SizeBound(f"cochain complex degree {k}", self.max_cells, cells)
            self._solvers[k] = LinearSolver(
                self.diff_rows(k), self.dim(k + 1), self.action.module.ring
            )
        return self._solvers[k]

    def coboundary_witness(self, f: Cochain):
        """Canonical w with dw = f, or None; f must be a cocycle."""
        if not is_cocycle(f):
            raise NotACocycle(f"degree-{f.degree} cochain is not a cocycle")
        if f.degree == 0:
            return None if not f.is_zero() else Cochain.zero(self.action, 0)
        s = self.solver(f.degree - 1)
        x = s.solve(self.flat(f))
        if x is None:
            return None
        return self.unflat(x, f.degree - 1)

    def cocycle_basis(self, k: int) -> HowellBasis:
        """Scaled basis of Z^k inside the flat coordinate space."""
        q = self.action.module.ring.modulus
        orders = self.action.module.orders
        s = self.solver(k)
        ring = self.action.module.ring
        scaled = []
        for row in s.kernel_row_tuples():
            scaled.append(
                tuple(v * (q // orders[i % self.t]) % q for i, v in enumerate(row))
            )
        return howell_form_rows(scaled, self.dim(k), ring)

    def coboundary_basis(self, k: int) -> HowellBasis:
        """Scaled basis of B^k (image of d from degree k-1)."""
        ring = self.action.module.ring
        if k == 0:
            return howell_form_rows([], self.dim(0), ring)
        s = self.solver(k - 1)
        return howell_form_rows(list(s.image_row_tuples()), self.dim(k), ring)


def coboundary_witness(f: Cochain, complex: CochainComplex | None = None):
    cc = complex or CochainComplex(f.action)
    return cc.coboundary_witness(f)


def cohomology_rank(action: CoeffAction, k: int, max_cells: int = DEFAULT_RANK_CELLS):
    """Cyclic orders of H^k = ker d_k / im d_{k-1}, descending."""
    cc = CochainComplex(action, max_cells=max_cells)
    z = cc.cocycle_basis(k)
    b = cc.coboundary_basis(k)
    return quotient_orders(z, b)


# ---------------------------------------------------------------------------
# Cup products.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pairing:
    """G-equivariant bilinear map M x N -> P given by its basis tensor.

    tensor[a][b] is the P-coordinate vector of e_a^M paired with e_b^N.
    """

    left: GModule
    right: GModule
    target: GModule
    tensor: tuple

    def __post_init__(self):
        tm, tn, tp = self.left.rank, self.right.rank, self.target.rank
        if len(self.tensor) != tm or any(len(r) != tn for r in self.tensor):
            raise PairingMismatch("tensor shape mismatch")
        for a in range(tm):
            for b in range(tn):
                vec = self.tensor[a][b]
                if len(vec) != tp:
                    raise PairingMismatch("tensor value length mismatch")
                g = min(self.left.orders[a], self.right.orders[b])
                for j, v in enumerate(vec):
                    if (g * v) % self.target.orders[j]:
                        raise PairingMismatch("pairing not well-defined on the modules")
        ngen = len(self.left.actions)
        for i in range(ngen):
            for a in range(tm):
                ea = tuple(1 if x == a else 0 for x in range(tm))
                for b in range(tn):
                    eb = tuple(1 if x == b else 0 for x in range(tn))
                    lhs = self.target.act(self.apply(ea, eb), i)
                    rhs = self.apply(self.left.act(ea, i), self.right.act(eb, i))
                    if lhs != rhs:
                        raise PairingMismatch(
                            f"pairing not equivariant for generator {i} at ({a},{b})"
                        )

    def apply(self, m, n):
        tp = self.target.rank
        out = [0] * tp
        for a, x in enumerate(m):
            if x:
                row = self.tensor[a]
                for b, y in enumerate(n):
                    if y:
                        vec = row[b]
                        for j in range(tp):
                            if vec[j]:
                                out[j] += x * y * vec[j]
        return tuple(v % o for v, o in zip(out, self.target.orders))


def multiplication_pairing(ring: RingConfig) -> Pairing:
    from .gmodule import trivial_module

    r = trivial_module(ring, None, 0)
    return Pairing(r, r, r, (((1,),),))


def cup(f: Cochain, h: Cochain, pairing: Pairing, target_action: CoeffAction) -> Cochain:
    """(f cup h)(g_1..g_{p+q}) = pair(f(g_1..g_p), (g_1...g_p) . h(rest))."""
    if f.action.group is not h.action.group:
        raise PairingMismatch("cup factors live on different groups")
    grp = f.action.group
    orders = target_action.module.orders
    out = {}
    for tf, vf in f.values.items():
        pref = grp.identity
        for g in tf:
            pref = grp.mul(pref, g)
        for th, vh in h.values.items():
            moved = h.action.act(pref, vh)
            val = pairing.apply(vf, moved)
            if not any(val):
                continue
            tup = tf + th
            cur = out.get(tup)
            if cur is None:
                out[tup] = list(val)
            else:
                for i, x in enumerate(val):
                    cur[i] += x
    values = {}
    for tup, vec in out.items():
        rv = tuple(x % o for x, o in zip(vec, orders))
        if any(rv):
            values[tup] = rv
    return Cochain(target_action, f.degree + h.degree, values)


# ---------------------------------------------------------------------------
# Connecting homomorphism.
# ---------------------------------------------------------------------------


class CoefficientSES:
    """Short exact sequence 0 -> sub -> mid -> quot -> 0 with R-linear section.

    incl/proj must be equivariant module maps; the section need only be
    R-linear (that failure to be equivariant is what the connecting map
    measures).
    """

    def __init__(self, sub: CoeffAction, mid: CoeffAction, quot: CoeffAction, incl, proj, section):
        self.sub, self.mid, self.quot = sub, mid, quot
        self.incl, self.proj, self.section = incl, proj, section
        q = mid.module.ring.modulus
        so, mo, qo = sub.module.orders, mid.module.orders, quot.module.orders
        for k in range(len(qo)):
            for j in range(len(mo)):
                if (qo[k] * section[k][j]) % mo[j]:
                    raise SectionNotLinear("section is not a well-defined R-linear map")
        comp = mat_mul(section, proj, qo)
        if comp != tuple(tuple(1 if i == j else 0 for j in range(len(qo))) for i in range(len(qo))):
            raise SectionNotLinear("section does not split the projection")
        grp = mid.group
        for x in grp.elements():
            li = mat_mul(sub.mats[x], incl, mo)
            ri = mat_mul(incl, mid.mats[x], mo)
            if li != ri:
                raise SocleCohError("inclusion is not equivariant")
            lp = mat_mul(mid.mats[x], proj, qo)
            rp = mat_mul(proj, quot.mats[x], qo)
            if lp != rp:
                raise SocleCohError("projection is not equivariant")
        if any(any(r) for r in mat_mul(incl, proj, qo)):
            raise SocleCohError("inclusion composed with projection is nonzero")
        if sub.module.size() * quot.module.size() != mid.module.size():
            raise SocleCohError("sequence is not exact in the middle")
        rows = []
        ring = mid.module.ring
        for k in range(len(so)):
            rows.append(tuple(incl[k][j] * (q // mo[j]) % q for j in range(len(mo))))
        self._incl_solver = LinearSolver(rows, len(mo), ring)
        if self._incl_solver.kernel_row_tuples():
            ker = self._incl_solver.kernel_row_tuples()
            if any(any(v % o for v, o in zip(r, so)) for r in ker):
                raise SocleCohError("inclusion is not injective")

    def pull_back(self, v):
        """sub coordinates of a mid vector lying in the image of incl."""
        q = self.mid.module.ring.modulus
        mo = self.mid.module.orders
        b = [x * (q // o) % q for x, o in zip(v, mo)]
        c = self._incl_solver.solve(b)
        if c is None:
            raise SocleCohError("value does not lie in the submodule")
        return vec_reduce(c, self.sub.module.orders)


def connecting(ses: CoefficientSES, f: Cochain) -> Cochain:
    """delta f = d(section . f), pulled back to the submodule."""
    if f.action is not ses.quot and f.action.module is not ses.quot.module:
        raise DimensionMismatch("cochain does not take values in the quotient module")
    if not is_cocycle(f):
        raise NotACocycle("connecting map needs a cocycle")
    lifted = Cochain.make(
        ses.mid,
        f.degree,
        {t: mat_apply(v, ses.section, ses.mid.module.orders) for t, v in f.values.items()},
    )
    d = differential(lifted)
    values = {t: ses.pull_back(v) for t, v in d.values.items()}
    return Cochain.make(ses.sub, f.degree + 1, values)


# ---------------------------------------------------------------------------
# Inflation / restriction.
# ---------------------------------------------------------------------------


def inflation(big: FinGroup, proj, f: Cochain) -> Cochain:
    """Pull back along big ->> f's group, precomposing every tuple slot."""
    new_action = action_through_projection(big, f.action, proj)
    pre = {}
    for x in big.elements():
        pre.setdefault(proj[x], []).append(x)
    ident = big.identity
    values = {}
    for tup, vec in f.values.items():
        for lifted in product(*(pre[g] for g in tup)):
            if ident in lifted:
                continue
            values[lifted] = vec
    return Cochain.make(new_action, f.degree, values)


def restriction(sub: Subgroup, f: Cochain) -> Cochain:
    """Restrict a cochain to a subgroup (reindexed as its own group)."""
    grp, to_parent, to_sub = sub.as_group()
    action = CoeffAction(
        grp, f.action.module, tuple(f.action.mats[to_parent[x]] for x in grp.elements())
    )
    inside = set(sub.elements)
    values = {}
    for tup, vec in f.values.items():
        if all(g in inside for g in tup):
            values[tuple(to_sub[g] for g in tup)] = vec
    return Cochain.make(action, f.degree, values)


# ---------------------------------------------------------------------------
# Extension classes and the quotient-extension differential.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionCocycle:
    """Factor set of an extension pushed to the capped abelianized kernel."""

    ext: ExtensionData
    bundle: JBundle
    alpha: Cochain


def extension_cocycle(ext: ExtensionData, bundle: JBundle | None = None) -> ExtensionCocycle:
    """alpha(g, h) = s(g) s(h) s(gh)^-1 in H, written in capped H^ab coords."""
    bundle = bundle or module_J(ext)
    g = ext.total
    G = ext.quotient
    action = action_for_quotient_module(ext, bundle.hab)
    values = {}
    kernel_set = set(ext.kernel.elements)
    for a in G.elements():
        if a == G.identity:
            continue
        sa = ext.section[a]
        for b in G.elements():
            if b == G.identity:
                continue
            m = g.mul(g.mul(sa, ext.section[b]), g.inv(ext.section[G.mul(a, b)]))
            if m not in kernel_set:
                raise SocleCohError("factor set value escaped the kernel")
            vec = bundle.h_coords[m]
            if any(vec):
                values[(a, b)] = vec
    alpha = Cochain.make(action, 2, values)
    if not is_cocycle(alpha):
        raise NotACocycle("factor set is not a 2-cocycle")
    return ExtensionCocycle(ext, bundle, alpha)


def d2_on_E01(ec: ExtensionCocycle, x_matrix, target: CoeffAction) -> Cochain:
    """d2 of an invariant class x in Hom(H^ab, M): the cochain -x(alpha).

    x_matrix maps capped H^ab coordinates to target module coordinates and
    must be G-equivariant; the result is a 2-cocycle on G with M values.
    """
    hab = ec.bundle.hab
    mod = target.module
    for i, sigma in enumerate(ec.ext.sigma):
        lhs = mat_mul(hab.actions[i], x_matrix, mod.orders)
        rhs = mat_mul(x_matrix, target.mats[sigma], mod.orders)
        if lhs != rhs:
            raise EquivarianceFailure(
                "class is not G-equivariant", witness=("generator", i)
            )
    values = {}
    for tup, vec in ec.alpha.values.items():
        out = mat_apply(vec, x_matrix, mod.orders)
        neg = tuple((-v) % o for v, o in zip(out, mod.orders))
        if any(neg):
            values[tup] = neg
    coc = Cochain.make(target, 2, values)
    if not is_cocycle(coc):
        raise NotACocycle("d2 output failed the cocycle check")
    return coc


def inflation_h2_surjective(ext: ExtensionData, max_order: int = DEFAULT_H2_MAX_ORDER):
    """Does every degree-2 class of the total group inflate from the quotient?

    Returns (holds, diagnostics): spans are compared inside Z^2 of the total
    group; dims count cyclic invariant factors (= F_l dimension when n = 1).
    """
    g = ext.total
    if g.order > max_order:
        raise SizeBound("total group order for the H^2 check", max_order, g.order)
    ring = ext.ring
    big = CochainComplex(CoeffAction.trivial(g, ring), max_cells=10**9)
    small = CochainComplex(CoeffAction.trivial(ext.quotient, ring), max_cells=10**9)
    z_big = big.cocycle_basis(2)
    b_big = big.coboundary_basis(2)
    inflated = []
    for row in small.cocycle_basis(2).rows:
        f = small.unflat(row, 2)
        lifted = inflation(g, ext.projection, f)
        flat = big.flat(lifted)
        inflated.append(tuple(flat.get(i, 0) for i in range(big.dim(2))))
    b_plus = howell_form_rows(list(b_big.rows) + inflated, big.dim(2), ring)
    holds = b_plus == z_big
    h2 = quotient_orders(z_big, b_big)
    infl = quotient_orders(b_plus, b_big)
    return holds, {
        "holds": holds,
        "h2_total_dim": len(h2),
        "h2_orders": list(h2),
        "inflated_dim": len(infl),
        "inflated_orders": list(infl),
    }
