"""Centers, derivation spaces, bimodule-pair spaces and hypothesis checks.

Every question is reduced to an exact kernel or span computation; answers
come back as canonical Subspace values or as three-valued CheckStatus
records carrying witnesses.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from .algebra_core import Element, StructureAlgebra, is_commutative
from .errors import CenterStructureError
from .exact_linear import Matrix, Subspace, kernel_basis, solve_particular
from .gma import GMAlgebra, pairing_image_mn, pairing_image_nm

_PROBE_SEED = 0x5EED_CA_FE
_ENUM_LIMIT = 10 ** 6


def core_algebra(g: Union[GMAlgebra, StructureAlgebra]) -> StructureAlgebra:
    return g.algebra if isinstance(g, GMAlgebra) else g


@lru_cache(maxsize=None)
def center(alg: StructureAlgebra) -> Subspace:
    """Kernel of x -> ([x, b_i])_i stacked over all basis elements."""
    d = alg.dim
    rows = []
    for j in range(d):
        for t in range(d):
            row = {}
            for i in range(d):
                for k, c in alg.bracket_table[i * d + j]:
                    if k == t:
                        row[i] = c
            if row:
                rows.append(row)
    return Subspace.span(alg.field, d, kernel_basis(alg.field, d, rows))


@lru_cache(maxsize=None)
def derivation_space(alg: StructureAlgebra) -> Subspace:
    """Solutions D of D(b_i b_j) = D(b_i) b_j + b_i D(b_j), flattened d x d.

    Unknown D[t*d+s] is the coefficient of b_t in D(b_s).
    """
    return _leibniz_kernel(alg, use_bracket=False)


@lru_cache(maxsize=None)
def lie_derivation_space(alg: StructureAlgebra) -> Subspace:
    """Solutions of D([b_i, b_j]) = [D(b_i), b_j] + [b_i, D(b_j)]."""
    return _leibniz_kernel(alg, use_bracket=True)


def _leibniz_kernel(alg: StructureAlgebra, use_bracket: bool) -> Subspace:
    d, f = alg.dim, alg.field
    if use_bracket:
        table_at = lambda i, j: alg.bracket_table[i * d + j]
        pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    else:
        table_at = lambda i, j: alg.mul.at(i, j)
        pairs = [(i, j) for i in range(d) for j in range(d)]
    rows = []
    for i, j in pairs:
        prod = table_at(i, j)
        for t in range(d):
            row: dict[int, object] = {}

            def bump(idx, c):
                if c:
                    row[idx] = f.add(row.get(idx, f.zero), c)

            for s, c in prod:
                bump(t * d + s, c)
            # -(D(b_i) b_j)_t: D(b_i) = sum_w D[w,i] b_w
            for w in range(d):
                for k, c in table_at(w, j):
                    if k == t:
                        bump(w * d + i, f.neg(c))
            # -(b_i D(b_j))_t
            for w in range(d):
                for k, c in table_at(i, w):
                    if k == t:
                        bump(w * d + j, f.neg(c))
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
    return Subspace.span(f, d * d, kernel_basis(f, d * d, rows))


@lru_cache(maxsize=None)
def inner_derivation_space(alg: StructureAlgebra) -> Subspace:
    """Span of the maps ad_{b_i} : y -> [b_i, y]."""
    d, f = alg.dim, alg.field
    vecs = []
    for i in range(d):
        flat = f.vec_zero(d * d)
        for s in range(d):
            for k, c in alg.bracket_table[i * d + s]:
                flat[k * d + s] = c
        vecs.append(flat)
    return Subspace.span(f, d * d, vecs)


def all_derivations_inner(alg: StructureAlgebra) -> bool:
    return inner_derivation_space(alg) == derivation_space(alg)


# ---------------------------------------------------------------------------
# center data of an assembled algebra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CenterData:
    """Center of G with its diagonal projections and the linking map.

    a_to_b is the matrix (in the canonical bases of a_part and b_part) of
    the isomorphism carrying the A part of a central element to its B part;
    it satisfies a.m = m.eta(a) and n.a = eta(a).n on all module basis
    vectors, where eta denotes the linked image.
    """

    center_g: Subspace
    center_a: Subspace
    center_b: Subspace
    a_part: Subspace
    b_part: Subspace
    a_to_b: Matrix


def center_data(g: GMAlgebra) -> CenterData:
    ctx, f = g.context, g.field
    da, dm, dn, db = ctx.dims
    off = g.offsets
    zg = center(g.algebra)
    za = center(ctx.a)
    zb = center(ctx.b)

    for row in zg.basis:
        m_part = row[off[1]:off[1] + dm]
        n_part = row[off[2]:off[2] + dn]
        if any(m_part) or any(n_part):
            raise CenterStructureError(
                "central element with nonzero off-diagonal part")

    a_vecs = [row[0:da] for row in zg.basis]
    b_vecs = [row[off[3]:off[3] + db] for row in zg.basis]
    a_part = Subspace.span(f, da, a_vecs)
    b_part = Subspace.span(f, db, b_vecs)
    if a_part.dim != zg.dim:
        raise CenterStructureError(
            "A-projection of the center is not injective; "
            "the context cannot have a faithful M")

    # link each canonical a_part basis vector through the center
    cols = []
    proj_matrix = Matrix.from_rows(f, [list(v) for v in zip(*a_vecs)]) if a_vecs \
        else Matrix.zeros(f, da, 0)
    for arow in a_part.basis:
        combo = solve_particular(proj_matrix, arow) if a_vecs else None
        if combo is None:
            raise CenterStructureError("a_part vector without center preimage")
        bvec = f.vec_zero(db)
        for coeff, brow in zip(combo, b_vecs):
            if coeff:
                bvec = f.vec_add(bvec, f.vec_scale(coeff, brow))
        coords = b_part.coordinates_of(bvec)
        if coords is None:
            raise CenterStructureError("linked image outside b_part")
        cols.append(coords)
    dimz = zg.dim
    a_to_b = Matrix.from_rows(
        f, [[cols[c][r] for c in range(dimz)] for r in range(dimz)]) \
        if dimz else Matrix.zeros(f, 0, 0)
    if a_to_b.rank() != dimz:
        raise CenterStructureError("linking map is singular")

    _verify_link(g, a_part, b_part, a_to_b)
    return CenterData(zg, za, zb, a_part, b_part, a_to_b)


def _linked_image(cd_a_part: Subspace, cd_b_part: Subspace, a_to_b: Matrix, avec):
    coords = cd_a_part.coordinates_of(avec)
    if coords is None:
        return None
    img_coords = a_to_b.apply(coords)
    f = cd_b_part.field
    out = f.vec_zero(cd_b_part.ambient_dim)
    for c, row in zip(img_coords, cd_b_part.basis):
        if c:
            out = f.vec_add(out, f.vec_scale(c, row))
    return out


def linked_image(cd: CenterData, avec):
    """Image of an a_part vector under the linking map, or None if outside."""
    return _linked_image(cd.a_part, cd.b_part, cd.a_to_b, avec)


def _verify_link(g: GMAlgebra, a_part, b_part, a_to_b) -> None:
    ctx, f = g.context, g.field
    da, dm, dn, db = ctx.dims
    for arow in a_part.basis:
        bvec = _linked_image(a_part, b_part, a_to_b, arow)
        for j in range(dm):
            m = f.vec_zero(dm)
            m[j] = f.one
            if ctx.act_am.apply(f, arow, m) != ctx.act_mb.apply(f, m, bvec):
                raise CenterStructureError("a.m != m.eta(a) on module basis")
        for j in range(dn):
            n = f.vec_zero(dn)
            n[j] = f.one
            if ctx.act_na.apply(f, n, arow) != ctx.act_bn.apply(f, bvec, n):
                raise CenterStructureError("n.a != eta(a).n on module basis")
    # multiplicativity on basis products
    for x in a_part.basis:
        for y in a_part.basis:
            prod = ctx.a.mul_coords(x, y)
            lhs = _linked_image(a_part, b_part, a_to_b, prod)
            if lhs is None:
                raise CenterStructureError("a_part not closed under product")
            bx = _linked_image(a_part, b_part, a_to_b, x)
            by = _linked_image(a_part, b_part, a_to_b, y)
            if lhs != ctx.b.mul_coords(bx, by):
                raise CenterStructureError("linking map not multiplicative")


# ---------------------------------------------------------------------------
# central ideals and the torsion-style action condition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CentralIdealResult:
    answer: bool
    witness: Optional[Element] = None


def has_nonzero_central_ideal(alg: StructureAlgebra) -> CentralIdealResult:
    """Look for z != 0 central with alg . z still inside the center.

    Such a z exists iff the algebra has a nonzero central ideal (the
    two-sided ideal generated by a central z is alg . z).
    """
    z = center(alg)
    if z.dim == 0:
        return CentralIdealResult(False)
    d, f = alg.dim, alg.field
    rows = []
    for i in range(d):
        e_i = f.vec_zero(d)
        e_i[i] = f.one
        residuals = []
        for zr in z.basis:
            prod = alg.mul_coords(e_i, list(zr))
            residuals.append(z.reduce(prod))
        for comp in range(d):
            row = {r: residuals[r][comp] for r in range(z.dim)
                   if residuals[r][comp]}
            if row:
                rows.append(row)
    sols = kernel_basis(f, z.dim, rows)
    if not sols:
        return CentralIdealResult(False)
    combo = sols[0]
    vec = f.vec_zero(d)
    for c, zr in zip(combo, z.basis):
        if c:
            vec = f.vec_add(vec, f.vec_scale(c, zr))
    return CentralIdealResult(True, alg.element(vec))


@dataclass(frozen=True)
class CheckStatus:
    status: str  # "pass" | "fail" | "unknown"
    witness: object = None
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def torsion_action_check(g: Union[GMAlgebra, StructureAlgebra],
                         probes: int = 64) -> CheckStatus:
    """Decide whether nonzero central elements act without kernel.

    dim Z <= 1 is decided exactly. For larger centers a fixed deterministic
    probe set is tried first; over GF(p) small centers are then enumerated
    exhaustively, otherwise the answer stays "unknown" (the singular locus
    over the rationals is a hypersurface no finite probe set can exclude).
    """
    alg = core_algebra(g)
    z = center(alg)
    d, f = alg.dim, alg.field
    if z.dim == 0:
        return CheckStatus("pass", reason="center is zero")

    def singular_witness(zvec):
        cols = [alg.mul_coords(list(zvec), _unit_vec(f, d, s)) for s in range(d)]
        rows = [[cols[s][t] for s in range(d)] for t in range(d)]
        ker = kernel_basis(f, d, rows)
        return ker[0] if ker else None

    if z.dim == 1:
        zvec = z.basis[0]
        ker = singular_witness(zvec)
        if ker is None:
            return CheckStatus("pass")
        return CheckStatus("fail", witness=(alg.element(zvec), alg.element(ker)))

    candidates = [list(b) for b in z.basis]
    rng = random.Random(_PROBE_SEED)
    for _ in range(probes):
        if f.p is None:
            coeffs = [f.of(rng.randint(-9, 9)) for _ in range(z.dim)]
        else:
            coeffs = [rng.randrange(f.p) for _ in range(z.dim)]
        vec = f.vec_zero(d)
        for c, zr in zip(coeffs, z.basis):
            if c:
                vec = f.vec_add(vec, f.vec_scale(c, zr))
        if any(vec):
            candidates.append(vec)
    for vec in candidates:
        ker = singular_witness(vec)
        if ker is not None:
            return CheckStatus("fail", witness=(alg.element(vec), alg.element(ker)))

    if f.p is not None and f.p ** z.dim <= _ENUM_LIMIT:
        for combo in _all_tuples(f.p, z.dim):
            if not any(combo):
                continue
            vec = f.vec_zero(d)
            for c, zr in zip(combo, z.basis):
                if c:
                    vec = f.vec_add(vec, f.vec_scale(c, zr))
            ker = singular_witness(vec)
            if ker is not None:
                return CheckStatus("fail",
                                   witness=(alg.element(vec), alg.element(ker)))
        return CheckStatus("pass", reason="exhaustive over the finite center")
    return CheckStatus(
        "unknown",
        reason=f"center dimension {z.dim} over {f.name}: "
               "probes nonsingular, no finite decision procedure")


def _unit_vec(f, d, i):
    v = f.vec_zero(d)
    v[i] = f.one
    return v


def _all_tuples(p, n):
    if n == 0:
        yield ()
        return
    for rest in _all_tuples(p, n - 1):
        for c in range(p):
            yield rest + (c,)


# ---------------------------------------------------------------------------
# bimodule endomorphism pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairSpaces:
    """Bimodule endomorphism spaces of M and N and the compatible pairs.

    special lives in End(M) (+) End(N) flattened as (F entries, E entries);
    standard is the image of (w0, w1) in Z(A) x Z(B) under
    F(m) = w0 m + m w1, E(n) = -n w0 - w1 n.
    """

    hom_m: Subspace
    hom_n: Subspace
    special: Subspace
    standard: Subspace


def pair_spaces(g: GMAlgebra) -> PairSpaces:
    ctx, f = g.context, g.field
    da, dm, dn, db = ctx.dims
    fm, en_sz = dm * dm, dn * dn

    hom_m_rows = _bimodule_hom_rows(f, ctx.a, ctx.b, dm, ctx.act_am, ctx.act_mb, 0, 0)
    hom_m = Subspace.span(f, fm, kernel_basis(f, fm, hom_m_rows)) if dm else \
        Subspace.zero(f, 0)
    hom_n_rows = _bimodule_hom_rows(f, ctx.b, ctx.a, dn, ctx.act_bn, ctx.act_na, 0, 0)
    hom_n = Subspace.span(f, en_sz, kernel_basis(f, en_sz, hom_n_rows)) if dn else \
        Subspace.zero(f, 0)

    total = fm + en_sz
    rows = list(_bimodule_hom_rows(f, ctx.a, ctx.b, dm, ctx.act_am, ctx.act_mb,
                                   0, total))
    rows += _bimodule_hom_rows(f, ctx.b, ctx.a, dn, ctx.act_bn, ctx.act_na,
                               fm, total)
    # compatibility: F(m_i) n_j + m_i E(n_j) = 0 in A
    for i in range(dm):
        for j in range(dn):
            for t in range(da):
                row = {}
                for w in range(dm):
                    for k, c in ctx.pair_mn.at(w, j):
                        if k == t and c:
                            row[t_idx(w, i, dm)] = f.add(
                                row.get(t_idx(w, i, dm), f.zero), c)
                for w in range(dn):
                    for k, c in ctx.pair_mn.at(i, w):
                        if k == t and c:
                            key = fm + t_idx(w, j, dn)
                            row[key] = f.add(row.get(key, f.zero), c)
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
    # compatibility: n_j F(m_i) + E(n_j) m_i = 0 in B
    for i in range(dm):
        for j in range(dn):
            for t in range(db):
                row = {}
                for w in range(dm):
                    for k, c in ctx.pair_nm.at(j, w):
                        if k == t and c:
                            row[t_idx(w, i, dm)] = f.add(
                                row.get(t_idx(w, i, dm), f.zero), c)
                for w in range(dn):
                    for k, c in ctx.pair_nm.at(w, i):
                        if k == t and c:
                            key = fm + t_idx(w, j, dn)
                            row[key] = f.add(row.get(key, f.zero), c)
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
    special = Subspace.span(f, total, kernel_basis(f, total, rows))

    vecs = []
    za, zb = center(ctx.a), center(ctx.b)
    for w0 in za.basis:
        flat = f.vec_zero(total)
        for s in range(dm):
            img = ctx.act_am.apply(f, list(w0), _unit_vec(f, dm, s))
            for t in range(dm):
                flat[t_idx(t, s, dm)] = img[t]
        for s in range(dn):
            img = ctx.act_na.apply(f, _unit_vec(f, dn, s), list(w0))
            for t in range(dn):
                flat[fm + t_idx(t, s, dn)] = f.neg(img[t])
        vecs.append(flat)
    for w1 in zb.basis:
        flat = f.vec_zero(total)
        for s in range(dm):
            img = ctx.act_mb.apply(f, _unit_vec(f, dm, s), list(w1))
            for t in range(dm):
                flat[t_idx(t, s, dm)] = img[t]
        for s in range(dn):
            img = ctx.act_bn.apply(f, list(w1), _unit_vec(f, dn, s))
            for t in range(dn):
                flat[fm + t_idx(t, s, dn)] = f.neg(img[t])
        vecs.append(flat)
    standard = Subspace.span(f, total, vecs)
    return PairSpaces(hom_m, hom_n, special, standard)


def t_idx(t: int, s: int, dim: int) -> int:
    """Flat index of the (t, s) entry of an End matrix: F(m_s) has b_t coeff."""
    return t * dim + s


def _bimodule_hom_rows(f, left_alg, right_alg, dmod, act_left, act_right,
                       offset, total=None):
    """Rows forcing F(x . m . y) = x . F(m) . y at basis level.

    Unknowns F[t*dmod+s] shifted by `offset` inside a larger flat space.
    """
    d = dmod
    rows = []
    if d == 0:
        return rows
    for i in range(left_alg.dim):
        for j in range(d):
            # F(a_i . m_j) = a_i . F(m_j)
            img = act_left.at(i, j)
            for t in range(d):
                row = {}
                for s, c in img:
                    row[offset + t_idx(t, s, d)] = c
                for w in range(d):
                    for k, c in act_left.at(i, w):
                        if k == t and c:
                            key = offset + t_idx(w, j, d)
                            row[key] = f.sub(row.get(key, f.zero), c)
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
    for i in range(d):
        for j in range(right_alg.dim):
            # F(m_i . b_j) = F(m_i) . b_j
            img = act_right.at(i, j)
            for t in range(d):
                row = {}
                for s, c in img:
                    row[offset + t_idx(t, s, d)] = c
                for w in range(d):
                    for k, c in act_right.at(w, j):
                        if k == t and c:
                            key = offset + t_idx(w, i, d)
                            row[key] = f.sub(row.get(key, f.zero), c)
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# hypothesis checker
# ---------------------------------------------------------------------------

VARIANTS = ("4.1", "4.3")


@dataclass(frozen=True)
class HypothesisReport:
    variant: str
    conditions: tuple  # five (number, CheckStatus) pairs

    @property
    def all_pass(self) -> bool:
        return all(st.passed for _, st in self.conditions)

    def condition(self, number: int) -> CheckStatus:
        for n, st in self.conditions:
            if n == number:
                return st
        raise KeyError(number)


def check_hypotheses(g: GMAlgebra, variant: str) -> HypothesisReport:
    """Evaluate the five decomposition hypotheses, ruleset 4.1 or 4.3.

    Both rulesets share (1) the center projections are onto, (2) A or B has
    no nonzero central ideal, and (5) special pairs are standard. 4.1 adds
    the central-action condition (3) and the pairing/noncommutativity
    condition (4); 4.3 instead requires the one-sided annihilators in N (3)
    and M (4) to vanish.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown hypothesis variant {variant!r}")
    ctx = g.context
    cd = center_data(g)
    conds: list[tuple[int, CheckStatus]] = []

    ok_a = cd.a_part == cd.center_a
    ok_b = cd.b_part == cd.center_b
    if ok_a and ok_b:
        conds.append((1, CheckStatus("pass")))
    else:
        sides = []
        if not ok_a:
            sides.append("A")
        if not ok_b:
            sides.append("B")
        conds.append((1, CheckStatus(
            "fail", witness=tuple(sides),
            reason="center projection is a proper subalgebra")))

    ia = has_nonzero_central_ideal(ctx.a)
    ib = has_nonzero_central_ideal(ctx.b)
    if not ia.answer or not ib.answer:
        conds.append((2, CheckStatus("pass")))
    else:
        conds.append((2, CheckStatus(
            "fail", witness=(ia.witness, ib.witness),
            reason="both A and B contain nonzero central ideals")))

    if variant == "4.1":
        conds.append((3, torsion_action_check(g)))
        mn = pairing_image_mn(g)
        nm = pairing_image_nm(g)
        if mn.dim or nm.dim:
            conds.append((4, CheckStatus("pass", reason="pairings not both zero")))
        elif not is_commutative(ctx.a) or not is_commutative(ctx.b):
            conds.append((4, CheckStatus("pass")))
        else:
            conds.append((4, CheckStatus(
                "fail",
                reason="MN = 0 = NM while both A and B are commutative")))
    else:
        conds.append((3, _annihilator_check_n(g)))
        conds.append((4, _annihilator_check_m(g)))

    ps = pair_spaces(g)
    if ps.special == ps.standard:
        conds.append((5, CheckStatus("pass")))
    else:
        wit = next((b for b in ps.special.basis
                    if not ps.standard.contains(b)), None)
        conds.append((5, CheckStatus(
            "fail", witness=wit,
            reason=f"special pairs dim {ps.special.dim} != "
                   f"standard dim {ps.standard.dim}")))
    return HypothesisReport(variant, tuple(conds))


def _annihilator_check_n(g: GMAlgebra) -> CheckStatus:
    """{n : M n = 0 and n M = 0} must vanish."""
    ctx, f = g.context, g.field
    da, dm, dn, db = ctx.dims
    rows = []
    for i in range(dm):
        for t in range(da):
            row = {j: c for j in range(dn)
                   for k, c in ctx.pair_mn.at(i, j) if k == t}
            if row:
                rows.append(row)
        for t in range(db):
            row = {j: c for j in range(dn)
                   for k, c in ctx.pair_nm.at(j, i) if k == t}
            if row:
                rows.append(row)
    ker = kernel_basis(f, dn, rows)
    if not ker:
        return CheckStatus("pass")
    return CheckStatus("fail", witness=g.embed_n(ker[0]),
                       reason="nonzero n with M n = 0 = n M")


def _annihilator_check_m(g: GMAlgebra) -> CheckStatus:
    """{m : N m = 0 and m N = 0} must vanish."""
    ctx, f = g.context, g.field
    da, dm, dn, db = ctx.dims
    rows = []
    for j in range(dn):
        for t in range(db):
            row = {i: c for i in range(dm)
                   for k, c in ctx.pair_nm.at(j, i) if k == t}
            if row:
                rows.append(row)
        for t in range(da):
            row = {i: c for i in range(dm)
                   for k, c in ctx.pair_mn.at(i, j) if k == t}
            if row:
                rows.append(row)
    ker = kernel_basis(f, dm, rows)
    if not ker:
        return CheckStatus("pass")
    return CheckStatus("fail", witness=g.embed_m(ker[0]),
                       reason="nonzero m with N m = 0 = m N")
