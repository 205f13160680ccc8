"""The degree-3 obstruction for socle filtration maps, three ways.

A filtration map phi: I/I^m -> J (equivariant, image automatically inside
J_{m-1}) has an obstruction class Psi(phi) in H^3(G, Z/l^n): the composite
of the quotient-extension differential on invariant degree-1 classes with
the connecting map of 0 -> R -> (Lambda/I^m)^vee -> (I/I^m)^vee -> 0.

Three computation routes are kept deliberately independent and cross-checked:

* generic: build the degree-2 cochain -x_phi(alpha), lift through the
  canonical f~(1) = 0 section, differentiate, read off the R component;
* closed form: Psi(phi)(a,b,c) = -[phi((a^-1 - 1) mod I^m)](alpha(b,c))
  evaluated directly from the factor set, no cochain solves;
* level-2 formula: sum_i -x_i cup d2(phi(rho_i)) over the dual basis,
  available exactly when m = 2.

The quotient-group recipe realizes the same differential inside the smaller
group G_phi = total/H_phi and must agree up to an explicit coboundary.
"""

from __future__ import annotations

from dataclasses import dataclass
import random

from .cohomology import (
    CochainComplex,
    CoeffAction,
    Cochain,
    CoefficientSES,
    action_for_quotient_module,
    connecting,
    cup,
    d2_on_E01,
    extension_cocycle,
    inflation_h2_surjective,
    multiplication_pairing,
)
from .errors import (
    EquivarianceFailure,
    GammaNotInSocleLevel,
    NormalityFailure,
    SizeBound,
    SocleCohError,
    WrongLevel,
)
from .fingroup import ExtensionData, Subgroup, build_extension, quotient
from .gmodule import (
    ExtensionModules,
    GModule,
    dual,
    dual_pair,
    dual_transpose,
    enumerate_scaled_span,
    hom_g,
    lambda_action_matrix,
    mat_apply,
    mat_mul,
    module_J,
    scale_vec,
    scaled_span,
    trivial_module,
    vec_reduce,
)
from .zmodlin import (
    HowellBasis,
    LinearSolver,
    coords_in_basis,
    lex_min_in_coset,
    span_orders,
)

DEFAULT_HOM_ENUM_BOUND = 4096
DEFAULT_JM_EXHAUSTIVE_BOUND = 256


@dataclass(frozen=True)
class PhiMap:
    """Equivariant R-linear map I/I^m -> J in canonical coordinates.

    matrix[a] is the J-coordinate vector of the a-th canonical I_m basis
    vector.  Equivariance is validated at construction; the image landing in
    J_{m-1} follows and is asserted.
    """

    ctx: "ObstructionContext"
    m: int
    matrix: tuple

    def __post_init__(self):
        ctx, m = self.ctx, self.m
        im = ctx.em.i_m(m)
        jmod = ctx.em.j.module
        mat = self.matrix
        if len(mat) != im.module.rank or any(len(r) != jmod.rank for r in mat):
            raise EquivarianceFailure(
                f"phi matrix must be {im.module.rank} x {jmod.rank}"
            )
        for a, row in enumerate(mat):
            for b, v in enumerate(row):
                if not 0 <= v < jmod.orders[b]:
                    raise EquivarianceFailure("phi matrix entries must be reduced")
                if (im.module.orders[a] * v) % jmod.orders[b]:
                    raise EquivarianceFailure(
                        "phi is not well-defined on the module", witness=("coordinate", a, b)
                    )
        for i in range(ctx.ext.d):
            lhs = mat_mul(im.module.actions[i], mat, jmod.orders)
            rhs = mat_mul(mat, jmod.actions[i], jmod.orders)
            if lhs != rhs:
                for a in range(im.module.rank):
                    if lhs[a] != rhs[a]:
                        raise EquivarianceFailure(
                            "phi does not commute with the action",
                            witness=("sigma", i, "basis", a),
                        )
        if m >= 2:
            jm1 = ctx.em.socle.basis(m - 1)
            for row in mat:
                assert ctx.em.socle.member(row, m - 1), "image escaped J_{m-1}"

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.matrix)


@dataclass(frozen=True)
class ObstructionResult:
    """Psi of one phi: the degree-3 cocycle, its witness, and route records."""

    psi_cocycle: Cochain
    witness: Cochain | None
    is_zero_class: bool
    routes: dict


@dataclass(frozen=True)
class GPhiData:
    """The quotient-extension data attached to phi."""

    h_phi: Subgroup
    ext_phi: ExtensionData
    image_basis: HowellBasis
    image_dual: GModule
    kernel_iso: tuple
    alpha_phi: Cochain
    beta_phi: Cochain
    iso_equivariant: bool


class ObstructionContext:
    """All caches for one extension: modules, factor set, solvers."""

    def __init__(self, ext: ExtensionData, label: str = "", h2_max_order: int = 32):
        self.ext = ext
        self.ring = ext.ring
        self.label = label
        self.h2_max_order = h2_max_order
        self.em = ExtensionModules(ext)
        self.alpha = extension_cocycle(ext, self.em.j)
        self.r_action = CoeffAction.trivial(ext.quotient, self.ring)
        self.r_complex = CochainComplex(self.r_action)
        self._imdual = {}
        self._imdual_action = {}
        self._imdual_complex = {}
        self._ses = {}
        self._hom = {}

    # -- cached module-side data -----------------------------------------

    def im_dual(self, m: int) -> GModule:
        if m not in self._imdual:
            self._imdual[m] = dual(self.em.i_m(m).module)
        return self._imdual[m]

    def im_dual_action(self, m: int) -> CoeffAction:
        if m not in self._imdual_action:
            self._imdual_action[m] = action_for_quotient_module(self.ext, self.im_dual(m))
        return self._imdual_action[m]

    def im_dual_complex(self, m: int) -> CochainComplex:
        if m not in self._imdual_complex:
            self._imdual_complex[m] = CochainComplex(self.im_dual_action(m))
        return self._imdual_complex[m]

    def dual_sequence(self, m: int) -> CoefficientSES:
        """0 -> R -> Lambda_m^vee -> I_m^vee -> 0 with the f~(1)=0 section."""
        if m not in self._ses:
            lamv = dual(self.em.lambda_m(m).module)
            rmod = trivial_module(self.ring, None, ngens=self.ext.d)
            sub = action_for_quotient_module(self.ext, rmod)
            mid = action_for_quotient_module(self.ext, lamv)
            quot = self.im_dual_action(m)
            t = self.im_dual(m).rank
            incl = ((1,) + (0,) * t,)
            proj = tuple(
                tuple(1 if j == i - 1 else 0 for j in range(t)) for i in range(t + 1)
            )
            section = tuple(
                tuple(1 if j == i + 1 else 0 for j in range(t + 1)) for i in range(t)
            )
            self._ses[m] = CoefficientSES(sub, mid, quot, incl, proj, section)
        return self._ses[m]

    def hom_phi_basis(self, m: int):
        """(HomModule, scaled invariant basis) for Hom_G(I_m, J)."""
        if m not in self._hom:
            self._hom[m] = hom_g(self.em.i_m(m).module, self.em.j.module)
        return self._hom[m]

    def dual_basis_cochains(self):
        """x_i(g) = i-th exponent of g, as R-valued 1-cocycles."""
        G = self.ext.quotient
        out = []
        for i in range(self.ext.d):
            values = {}
            for g in G.elements():
                if g != G.identity and self.ext.coords[g][i]:
                    values[(g,)] = (self.ext.coords[g][i],)
            out.append(Cochain.make(self.r_action, 1, values))
        return out

    # -- phi constructors ---------------------------------------------------

    def phi_from_matrix(self, m: int, matrix) -> PhiMap:
        jmod = self.em.j.module
        reduced = tuple(
            tuple(v % jmod.orders[b] for b, v in enumerate(row)) for row in matrix
        )
        return PhiMap(self, m, reduced)

    def phi_from_gamma(self, gamma, m: int) -> PhiMap:
        gamma = vec_reduce(gamma, self.em.j.module.orders)
        if not self.em.socle.member(gamma, m):
            raise GammaNotInSocleLevel(f"gamma {gamma} is not in socle level {m}")
        return self.phi_from_matrix(m, self.em.phi_gamma_matrix(gamma, m))

    def enumerate_phi(self, m: int, bound: int = DEFAULT_HOM_ENUM_BOUND):
        hm, basis = self.hom_phi_basis(m)
        if basis.span_size() > bound:
            raise SizeBound("Hom_G(I_m, J) enumeration", bound, basis.span_size())
        for c in enumerate_scaled_span(basis, hm.module.orders, self.ring):
            yield self.phi_from_matrix(m, hm.coords_to_matrix(c))

    def enumerate_jm(self, m: int):
        jmod = self.em.j.module
        return enumerate_scaled_span(self.em.socle.basis(m), jmod.orders, self.ring)

    # -- the obstruction routes ----------------------------------------------

    def x_phi_matrix(self, phi: PhiMap):
        """phi transported to a map (capped H^ab) -> I_m^vee."""
        im = self.em.i_m(phi.m)
        jmod = self.em.j.module
        return dual_transpose(phi.matrix, im.module.orders, jmod.orders)

    def d2_of_phi(self, phi: PhiMap) -> Cochain:
        return d2_on_E01(self.alpha, self.x_phi_matrix(phi), self.im_dual_action(phi.m))

    def psi_generic(self, phi: PhiMap) -> ObstructionResult:
        d2c = self.d2_of_phi(phi)
        psi = connecting(self.dual_sequence(phi.m), d2c)
        witness = self.r_complex.coboundary_witness(psi)
        return ObstructionResult(
            psi_cocycle=psi,
            witness=witness,
            is_zero_class=witness is not None,
            routes={"generic": psi},
        )

    def psi_closed_form(self, phi: PhiMap) -> Cochain:
        """Direct evaluation from the factor set, no cochain-space solves."""
        ext = self.ext
        G = ext.quotient
        im = self.em.i_m(phi.m)
        jb = self.em.j
        q = self.ring.modulus
        w = {}
        for a in G.elements():
            if a == G.identity:
                continue
            ainv = G.inv(a)
            rho = [0] * (G.order - 1)
            rho[ainv - 1] = 1
            wa = im.project_vec(tuple(rho))
            w[a] = mat_apply(wa, phi.matrix, jb.module.orders)
        values = {}
        for (b, c), avec in self.alpha.alpha.values.items():
            for a in G.elements():
                if a == G.identity:
                    continue
                val = (-dual_pair(w[a], avec, jb.hab.orders, self.ring)) % q
                if val:
                    values[(a, b, c)] = (val,)
        return Cochain.make(self.r_action, 3, values)

    def psi_m2_formula(self, phi: PhiMap) -> Cochain:
        """sum_i -x_i cup d2(phi(rho_i)); only meaningful at level 2."""
        if phi.m != 2:
            raise WrongLevel(f"the level-2 formula needs m = 2, got {phi.m}")
        im = self.em.i_m(2)
        jb = self.em.j
        q = self.ring.modulus
        xs = self.dual_basis_cochains()
        pair = multiplication_pairing(self.ring)
        total = Cochain.zero(self.r_action, 3)
        for i, sigma in enumerate(self.ext.sigma):
            rho = [0] * (self.ext.quotient.order - 1)
            rho[sigma - 1] = 1
            gamma_i = mat_apply(im.project_vec(tuple(rho)), phi.matrix, jb.module.orders)
            xmat = tuple(
                ((q // jb.hab.orders[k]) * gamma_i[k] % q,) for k in range(jb.hab.rank)
            )
            xi = d2_on_E01(self.alpha, xmat, self.r_action)
            total = total.add(cup(xs[i], xi, pair, self.r_action), sign=-1)
        return total

    def obstruction_with_routes(self, phi: PhiMap, include_m2: bool | None = None) -> ObstructionResult:
        """Route A with witness, plus routes B (and C when m = 2) and their
        pairwise agreement certificates."""
        base = self.psi_generic(phi)
        routes = dict(base.routes)
        agreement = {}
        closed = self.psi_closed_form(phi)
        routes["closed"] = closed
        agreement["generic_vs_closed_entrywise"] = base.psi_cocycle.same_values(closed)
        if include_m2 is None:
            include_m2 = phi.m == 2
        if include_m2:
            m2 = self.psi_m2_formula(phi)
            routes["m2"] = m2
            diff = base.psi_cocycle.add(m2.neg())
            w = self.r_complex.coboundary_witness(diff)
            agreement["generic_vs_m2_witness"] = w
            agreement["generic_vs_m2_cohomologous"] = w is not None
        routes["agreement"] = agreement
        return ObstructionResult(
            psi_cocycle=base.psi_cocycle,
            witness=base.witness,
            is_zero_class=base.is_zero_class,
            routes=routes,
        )

    # -- the quotient-group recipe ---------------------------------------------

    def build_g_phi(self, phi: PhiMap) -> GPhiData:
        ext = self.ext
        g = ext.total
        jb = self.em.j
        jmod = jb.module
        image = scaled_span(list(phi.matrix), jmod.orders, self.ring)
        im_rows = [vec_reduce(
            tuple(v // (self.ring.modulus // o) for v, o in zip(r, jmod.orders)),
            jmod.orders,
        ) for r in image.rows]
        h_elems = []
        for h in ext.kernel.elements:
            coords = jb.h_coords[h]
            if all(dual_pair(u, coords, jb.hab.orders, self.ring) == 0 for u in im_rows):
                h_elems.append(h)
        h_phi = Subgroup(g, tuple(sorted(h_elems)))
        try:
            h_phi.normality_witness()
        except Exception as exc:
            raise NormalityFailure(f"H_phi failed normality: {exc}") from exc
        g_phi, proj_phi = quotient(g, h_phi)
        proj2 = [None] * g_phi.order
        for x in g.elements():
            y = proj_phi[x]
            if proj2[y] is None:
                proj2[y] = ext.projection[x]
            elif proj2[y] != ext.projection[x]:
                raise SocleCohError("projection does not factor through G_phi")
        kernel_phi = Subgroup(g_phi, tuple(sorted({proj_phi[h] for h in ext.kernel.elements})))
        ext_phi = build_extension(g_phi, kernel_phi, ext.quotient, tuple(proj2), self.ring)
        jb_phi = module_J(ext_phi)

        # evaluation pairing H/H_phi x Im(phi) -> R as a matrix to (Im phi)^vee
        o_orders = image.coordinate_orders()
        q = self.ring.modulus
        khab = jb_phi.hab
        # basis elements of K = H/H_phi, lifted to least preimages in H
        kgrp, to_parent_k, _ = kernel_phi.as_group()
        from .fingroup import abelian_structure

        st = abelian_structure(kgrp)
        iso_rows = []
        ok_iso = True
        for bk in st.basis:
            yk = to_parent_k[bk]  # element of g_phi
            hk = min(h for h in ext.kernel.elements if proj_phi[h] == yk)
            row = []
            for u, o in zip(im_rows, o_orders):
                val = dual_pair(u, jb.h_coords[hk], jb.hab.orders, self.ring)
                step = q // o
                if val % step:
                    ok_iso = False
                    row.append(0)
                else:
                    row.append((val // step) % o)
            iso_rows.append(tuple(row))
        kernel_iso = tuple(iso_rows)
        # (Im phi)^vee with the dual of the image's G-action
        act_rows = []
        for i in range(ext.d):
            rows = []
            for r in image.rows:
                jvec = vec_reduce(
                    tuple(v // (q // o) for v, o in zip(r, jmod.orders)), jmod.orders
                )
                moved = jmod.act(jvec, i)
                cs = coords_in_basis(image, scale_vec(moved, jmod.orders, self.ring))
                if cs is None:
                    raise SocleCohError("phi image is not action-stable")
                rows.append(tuple(c % o for c, o in zip(cs, o_orders)))
            act_rows.append(tuple(rows))
        if image.rows:
            image_mod = GModule(self.ring, o_orders, tuple(act_rows))
        else:
            image_mod = GModule(self.ring, (), tuple(() for _ in range(ext.d)))
        image_dual = dual(image_mod)
        # iso equivariance: K-action vs (Im phi)^vee action
        if kernel_iso and ok_iso:
            for i in range(ext.d):
                lhs = mat_mul(khab.actions[i], kernel_iso, image_dual.orders)
                rhs = mat_mul(kernel_iso, image_dual.actions[i], image_dual.orders)
                if lhs != rhs:
                    ok_iso = False
        # bijectivity: the iso rows span the full dual and sizes match
        if ok_iso:
            span = scaled_span(list(kernel_iso), image_dual.orders, self.ring)
            full_size = 1
            for o in image_dual.orders:
                full_size *= o
            ok_iso = span.span_size() == full_size == len(kernel_phi)

        ec_phi = extension_cocycle(ext_phi, jb_phi)
        imdual_action = action_for_quotient_module(ext, image_dual)
        alpha_values = {}
        for tup, vec in ec_phi.alpha.values.items():
            out = mat_apply(vec, kernel_iso, image_dual.orders)
            if any(out):
                alpha_values[tup] = out
        alpha_phi = Cochain.make(imdual_action, 2, alpha_values)
        # pushforward (Im phi)^vee -> I_m^vee dual to the corestriction of phi
        im_m = self.em.i_m(phi.m)
        cor = []
        for row in phi.matrix:
            cs = coords_in_basis(image, scale_vec(row, jmod.orders, self.ring))
            cor.append(tuple(c % o for c, o in zip(cs, o_orders)))
        push = dual_transpose(tuple(cor), im_m.module.orders, o_orders)
        beta_values = {}
        imv_action = self.im_dual_action(phi.m)
        for tup, vec in alpha_phi.values.items():
            out = mat_apply(vec, push, self.im_dual(phi.m).orders)
            if any(out):
                beta_values[tup] = out
        beta_phi = Cochain.make(imv_action, 2, beta_values)
        return GPhiData(
            h_phi=h_phi,
            ext_phi=ext_phi,
            image_basis=image,
            image_dual=image_dual,
            kernel_iso=kernel_iso,
            alpha_phi=alpha_phi,
            beta_phi=beta_phi,
            iso_equivariant=ok_iso,
        )

    def d2_via_g_phi(self, phi: PhiMap):
        """-beta_phi computed in G_phi, plus the witness against route A.

        Returns (cochain, witness): the witness certifies the two differentials
        are cohomologous; both are 2-cocycles with I_m^vee values.
        """
        data = self.build_g_phi(phi)
        d2q = data.beta_phi.neg()
        d2a = self.d2_of_phi(phi)
        diff = d2q.add(d2a.neg())
        witness = self.im_dual_complex(phi.m).coboundary_witness(diff)
        return d2q, witness, data

    # -- membership and the theorem --------------------------------------------

    def image_membership(self, phi: PhiMap):
        """Canonical gamma in J_m with phi_gamma = phi, or None."""
        m = phi.m
        em = self.em
        jmod = em.j.module
        t = jmod.rank
        if t == 0:
            return tuple() if phi.is_zero() else None
        km = em.socle.basis(m)
        im = em.i_m(m)
        q = self.ring.modulus
        # scaled action matrices of the canonical I_m basis lifts
        blocks = []
        targets = []
        for a in range(im.module.rank):
            y = tuple(1 if i == a else 0 for i in range(im.module.rank))
            w = em.im_lift_to_lambda(m, y)
            nmat = lambda_action_matrix(jmod, em.elem_mats, w)
            scaled = tuple(
                tuple(nmat[k][j] * (q // jmod.orders[j]) % q for j in range(t))
                for k in range(t)
            )
            blocks.append(scaled)
            targets.extend(
                phi.matrix[a][j] * (q // jmod.orders[j]) % q for j in range(t)
            )
        rows = []
        for kr in km.rows:
            row = []
            for scaled in blocks:
                # kr is a scaled J vector: descale, act, rescale exactly
                x = vec_reduce(
                    tuple(v // (q // o) for v, o in zip(kr, jmod.orders)), jmod.orders
                )
                row.extend(sum(x[k] * scaled[k][j] for k in range(t)) % q for j in range(t))
            rows.append(row)
        solver = LinearSolver(rows, im.module.rank * t, self.ring)
        c = solver.solve(targets)
        if c is None:
            return None
        x0 = [0] * t
        for ci, kr in zip(c, km.rows):
            if ci:
                for j in range(t):
                    x0[j] = (x0[j] + ci * kr[j]) % q
        xmin = lex_min_in_coset(tuple(x0), em.socle.basis(1))
        return vec_reduce(
            tuple(v // (q // o) for v, o in zip(xmin, jmod.orders)), jmod.orders
        )

    def verify_theorem(
        self,
        m: int,
        mode=("exhaustive",),
        hom_bound: int = DEFAULT_HOM_ENUM_BOUND,
        jm_bound: int = DEFAULT_JM_EXHAUSTIVE_BOUND,
    ):
        """Check both theorem directions and report, JSON-ready.

        mode is ("exhaustive",) or ("sampled", seed, count).  direction2 is
        asserted only under the inflation hypothesis; otherwise its observed
        status is recorded without judgement.
        """
        em = self.em
        jmod = em.j.module
        counterexamples = []
        holds, hyp = inflation_h2_surjective(self.ext, max_order=self.h2_max_order)
        socle_ranks = [len(span_orders(s)) for s in em.socle.steps]

        exhaustive = mode[0] == "exhaustive"
        if exhaustive:
            jm_size = em.socle.basis(m).span_size()
            gammas = list(self.enumerate_jm(m)) if jm_size <= jm_bound else None
            if gammas is None:
                raise SizeBound("exhaustive J_m enumeration", jm_bound, jm_size)
        else:
            _, seed, count = mode
            rng = random.Random(seed)
            basis = em.socle.basis(m)
            orders = basis.coordinate_orders()
            gammas = []
            for _ in range(count):
                cs = [rng.randrange(o) for o in orders]
                v = [0] * jmod.rank
                for ci, row in zip(cs, basis.rows):
                    for j, x in enumerate(row):
                        v[j] = (v[j] + ci * x) % self.ring.modulus
                gammas.append(
                    vec_reduce(
                        tuple(
                            x // (self.ring.modulus // o)
                            for x, o in zip(v, jmod.orders)
                        ),
                        jmod.orders,
                    )
                )

        image_matrices = set()
        d1_checked = d1_passed = 0
        for gamma in gammas:
            phi = self.phi_from_gamma(gamma, m)
            image_matrices.add(phi.matrix)
            res = self.psi_generic(phi)
            d1_checked += 1
            if res.is_zero_class:
                d1_passed += 1
            else:
                counterexamples.append(
                    {"kind": "psi_of_phi_gamma_nonzero", "gamma": list(gamma)}
                )

        if exhaustive:
            phis = list(self.enumerate_phi(m, bound=hom_bound))
        else:
            _, seed, count = mode
            rng = random.Random(seed + 1)
            hm, basis = self.hom_phi_basis(m)
            orders = basis.coordinate_orders()
            phis = []
            for _ in range(count):
                cs = [rng.randrange(o) for o in orders]
                v = [0] * hm.module.rank
                for ci, row in zip(cs, basis.rows):
                    for j, x in enumerate(row):
                        v[j] = (v[j] + ci * x) % self.ring.modulus
                coords = vec_reduce(
                    tuple(
                        x // (self.ring.modulus // o)
                        for x, o in zip(v, hm.module.orders)
                    ),
                    hm.module.orders,
                )
                phis.append(self.phi_from_matrix(m, hm.coords_to_matrix(coords)))

        d2_checked = zero_class_count = 0
        d2_mismatches = 0
        for phi in phis:
            res = self.psi_generic(phi)
            gamma = self.image_membership(phi)
            d2_checked += 1
            if res.is_zero_class:
                zero_class_count += 1
            if gamma is not None and not res.is_zero_class:
                counterexamples.append(
                    {"kind": "phi_gamma_with_nonzero_class", "phi": [list(r) for r in phi.matrix]}
                )
                d2_mismatches += 1
            if res.is_zero_class and gamma is None:
                d2_mismatches += 1
                counterexamples.append(
                    {"kind": "zero_class_without_gamma", "phi": [list(r) for r in phi.matrix]}
                )

        direction2_passed = d2_mismatches == 0
        report = {
            "group": self.label,
            "ell": self.ring.ell,
            "n": self.ring.n,
            "m": m,
            "d": self.ext.d,
            "order": self.ext.total.order,
            "socle_ranks": socle_ranks,
            "hypothesis": {
                "holds": holds,
                "h2_total_dim": hyp["h2_total_dim"],
                "inflated_dim": hyp["inflated_dim"],
            },
            "direction1": {"checked": d1_checked, "passed": d1_checked == d1_passed},
            "direction2": {
                "asserted": holds,
                "checked": d2_checked,
                "passed": direction2_passed,
                "zero_class_count": zero_class_count,
                "image_size": len(image_matrices),
            },
            "counterexamples": counterexamples,
            "mode": "exhaustive" if exhaustive else f"sampled(seed={mode[1]},count={mode[2]})",
        }
        return report


# -- module-level functions mirroring the operation surface ---------------------


def make_context(ext: ExtensionData, label: str = "", h2_max_order: int = 32) -> ObstructionContext:
    return ObstructionContext(ext, label=label, h2_max_order=h2_max_order)


def phi_from_gamma(ctx: ObstructionContext, gamma, m: int) -> PhiMap:
    return ctx.phi_from_gamma(gamma, m)


def psi_generic(ctx: ObstructionContext, phi: PhiMap) -> ObstructionResult:
    return ctx.psi_generic(phi)


def psi_closed_form(ctx: ObstructionContext, phi: PhiMap) -> Cochain:
    return ctx.psi_closed_form(phi)


def psi_m2_formula(ctx: ObstructionContext, phi: PhiMap) -> Cochain:
    return ctx.psi_m2_formula(phi)


def build_g_phi(ctx: ObstructionContext, phi: PhiMap) -> GPhiData:
    return ctx.build_g_phi(phi)


def d2_via_g_phi(ctx: ObstructionContext, phi: PhiMap):
    return ctx.d2_via_g_phi(phi)


def image_membership(ctx: ObstructionContext, phi: PhiMap):
    return ctx.image_membership(phi)


def verify_theorem(ctx: ObstructionContext, m: int, mode=("exhaustive",), **kw):
    return ctx.verify_theorem(m, mode=mode, **kw)
