"""Shared fixtures: corpus instances, independent oracles, fuzz machinery."""

from fractions import Fraction

import gmalg as G
from gmalg.fileformat import context_from_dict, context_to_dict, decode_scalar, encode_scalar

Q = G.FieldSpec.rationals()
GF7 = G.FieldSpec.gf(7)
GF101 = G.FieldSpec.gf(101)


def corpus_contexts(field):
    """The five stock instances used across the acceptance criteria."""
    return [
        ("full_matrix_3", G.generate_builtin("full_matrix", field, r=3)),
        ("full_matrix_2", G.generate_builtin("full_matrix", field, r=2)),
        ("upper_2_1", G.generate_builtin("upper_triangular", field, s=2, t=1)),
        ("t2", G.generate_builtin("upper_triangular", field, s=1, t=1)),
        ("zero_pairing_2_1", G.generate_builtin("zero_pairing", field, s=2, t=1)),
    ]


def corpus_algebras(field):
    return [(name, G.assemble(ctx, validate=False))
            for name, ctx in corpus_contexts(field)]


# ---------------------------------------------------------------------------
# independent naive elimination oracle (plain Fraction arithmetic)
# ---------------------------------------------------------------------------


def naive_rref_q(rows, ncols):
    m = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    pr = 0
    for pc in range(ncols):
        piv = None
        for r in range(pr, len(m)):
            if m[r][pc] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[pr], m[piv] = m[piv], m[pr]
        inv = 1 / m[pr][pc]
        m[pr] = [x * inv for x in m[pr]]
        for r in range(len(m)):
            if r != pr and m[r][pc] != 0:
                f = m[r][pc]
                m[r] = [a - f * b for a, b in zip(m[r], m[pr])]
        pivots.append(pc)
        pr += 1
        if pr == len(m):
            break
    return [row for row in m[:pr]], pivots


# ---------------------------------------------------------------------------
# context fuzzing
# ---------------------------------------------------------------------------

_TABLE_SHAPES = (
    ("a_mul", lambda d: (d[0], d[0], d[0])),
    ("b_mul", lambda d: (d[3], d[3], d[3])),
    ("act_a_m", lambda d: (d[0], d[1], d[1])),
    ("act_m_b", lambda d: (d[1], d[3], d[1])),
    ("act_b_n", lambda d: (d[3], d[2], d[2])),
    ("act_n_a", lambda d: (d[2], d[0], d[2])),
    ("pair_mn", lambda d: (d[1], d[2], d[0])),
    ("pair_nm", lambda d: (d[2], d[1], d[3])),
)


def perturbation_sites(ctx):
    """Every dense constant slot plus the unit coordinates."""
    dims = ctx.dims
    sites = []
    for name, shape in _TABLE_SHAPES:
        li, ri, oi = shape(dims)
        for i in range(li):
            for j in range(ri):
                for k in range(oi):
                    sites.append((name, i, j, k))
    for k in range(dims[0]):
        sites.append(("a_unit", k))
    for k in range(dims[3]):
        sites.append(("b_unit", k))
    return sites


def perturb_context(ctx, site, delta=1):
    """Return a copy of ctx with one constant bumped by delta."""
    data = context_to_dict(ctx)
    f = ctx.field
    if site[0] in ("a_unit", "b_unit"):
        _, k = site
        vec = data[site[0]]
        vec[k] = encode_scalar(f, f.add(decode_scalar(f, vec[k]), f.of(delta)))
    else:
        name, i, j, k = site
        data[name] = data[name] + [[i, j, k, encode_scalar(f, f.of(delta))]]
    return context_from_dict(data)


# ---------------------------------------------------------------------------
# centrally-valued random maps
# ---------------------------------------------------------------------------


def quotient_coordinates(g):
    """Per-basis-element coordinates in G/[G, G] (vanish on commutators)."""
    alg = g.algebra
    span = G.commutator_span(alg)
    free = span.free_columns
    lam = []
    for i in range(alg.dim):
        v = alg.field.vec_zero(alg.dim)
        v[i] = alg.field.one
        res = span.reduce(v)
        lam.append([res[c] for c in free])
    return lam, len(free)


def random_central_map(g, n, rng):
    """Random map into Z(G) that kills commutator classes in every slot."""
    alg = g.algebra
    f = alg.field
    lam, qdim = quotient_coordinates(g)
    z = G.center(alg)
    if qdim == 0 or z.dim == 0:
        return G.MultilinearMap.zero(f, n, alg.dim)
    coeffs = {}
    for key in _tuples(qdim, n):
        for s in range(z.dim):
            if f.p is None:
                c = f.of(rng.randint(-4, 4))
            else:
                c = rng.randrange(f.p)
            if c:
                coeffs[key + (s,)] = c

    def fn(key):
        out = f.vec_zero(alg.dim)
        for qkey_s, c in coeffs.items():
            qkey, s = qkey_s[:-1], qkey_s[-1]
            w = c
            for slot, qi in enumerate(qkey):
                w = f.mul(w, lam[key[slot]][qi])
                if not w:
                    break
            if w:
                out = f.vec_add(out, f.vec_scale(w, z.basis[s]))
        return out

    return G.MultilinearMap.from_basis_function(alg, n, fn)


def _tuples(base, length):
    if length == 0:
        yield ()
        return
    for rest in _tuples(base, length - 1):
        for i in range(base):
            yield rest + (i,)
