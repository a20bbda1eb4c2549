"""Multilinear maps on an algebra: predicates and n-Lie derivation spaces.

Maps are sparse coefficient tensors on basis tuples. The full n-Lie
derivation space is computed by slot restriction: slot one confines the map
to (Lie derivation space) x (coefficient tensor), and the later-slot
Leibniz constraints all reduce to one shared constraint block because their
coefficients never involve the spectator slots. A direct dense-kernel
method is kept alongside as the cross-validation oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Callable, Optional, Sequence, Union

from .algebra_core import Element, StructureAlgebra
from .budget import guard_tuples, guard_unknowns
from .errors import DimensionMismatchError, FieldMismatchError
from .exact_linear import FieldSpec, Subspace, kernel_basis
from .gma import GMAlgebra
from .structure_analysis import center, core_algebra, lie_derivation_space


@dataclass(frozen=True)
class MultilinearMap:
    """Arity-n map stored as tensor entries on basis tuples.

    entries maps an index tuple (i_1, ..., i_n) to the coordinate tuple of
    the image of that basis tuple; absent tuples are zero.
    """

    field: FieldSpec
    arity: int
    dim: int
    entries: dict

    def __post_init__(self):
        if self.arity < 1:
            raise DimensionMismatchError("arity must be >= 1")

    @classmethod
    def zero(cls, field: FieldSpec, arity: int, dim: int) -> "MultilinearMap":
        return cls(field, arity, dim, {})

    @classmethod
    def from_entries(cls, field: FieldSpec, arity: int, dim: int,
                     entries) -> "MultilinearMap":
        clean = {}
        for key, vec in dict(entries).items():
            key = tuple(int(i) for i in key)
            if len(key) != arity or any(not 0 <= i < dim for i in key):
                raise DimensionMismatchError(f"index tuple {key} out of range")
            coords = tuple(field.of(x) for x in vec)
            if len(coords) != dim:
                raise DimensionMismatchError("value length != dim")
            if any(coords):
                clean[key] = coords
        return cls(field, arity, dim, clean)

    @classmethod
    def from_basis_function(cls, alg: StructureAlgebra, arity: int,
                            fn: Callable[[tuple], Sequence]) -> "MultilinearMap":
        guard_tuples("map materialization", alg.dim ** arity)
        entries = {}
        for key in product(range(alg.dim), repeat=arity):
            vec = tuple(alg.field.of(x) for x in fn(key))
            if any(vec):
                entries[key] = vec
        return cls(alg.field, arity, alg.dim, entries)

    # -- access ----------------------------------------------------------

    def value_at(self, key: tuple) -> tuple:
        got = self.entries.get(tuple(key))
        if got is None:
            return tuple(self.field.vec_zero(self.dim))
        return got

    def evaluate_coords(self, args: Sequence[Sequence]) -> list:
        if len(args) != self.arity:
            raise DimensionMismatchError(
                f"expected {self.arity} arguments, got {len(args)}")
        f = self.field
        supports = []
        for a in args:
            if len(a) != self.dim:
                raise DimensionMismatchError("argument length != dim")
            supports.append([(i, c) for i, c in enumerate(a) if c])
        out = f.vec_zero(self.dim)
        for combo in product(*supports):
            key = tuple(i for i, _ in combo)
            vec = self.entries.get(key)
            if vec is None:
                continue
            w = f.one
            for _, c in combo:
                w = f.mul(w, c)
            out = f.vec_add(out, f.vec_scale(w, vec))
        return out

    def evaluate(self, args: Sequence[Element]) -> Element:
        if not args:
            raise DimensionMismatchError("no arguments")
        alg = args[0].algebra
        if alg.dim != self.dim or alg.field != self.field:
            raise FieldMismatchError("map and elements disagree on space")
        for a in args[1:]:
            if a.algebra != alg:
                raise FieldMismatchError("arguments from different algebras")
        return alg.element(self.evaluate_coords([a.coords for a in args]))

    # -- arithmetic --------------------------------------------------------

    def _compatible(self, other: "MultilinearMap") -> None:
        if (self.field, self.arity, self.dim) != (other.field, other.arity,
                                                  other.dim):
            raise DimensionMismatchError("maps live on different spaces")

    def add(self, other: "MultilinearMap") -> "MultilinearMap":
        self._compatible(other)
        f = self.field
        keys = set(self.entries) | set(other.entries)
        entries = {}
        for k in keys:
            v = f.vec_add(self.value_at(k), other.value_at(k))
            if any(v):
                entries[k] = tuple(v)
        return MultilinearMap(f, self.arity, self.dim, entries)

    def sub(self, other: "MultilinearMap") -> "MultilinearMap":
        return self.add(other.neg())

    def neg(self) -> "MultilinearMap":
        f = self.field
        return MultilinearMap(
            f, self.arity, self.dim,
            {k: tuple(f.neg(x) for x in v) for k, v in self.entries.items()})

    def scale(self, c) -> "MultilinearMap":
        f = self.field
        c = f.of(c)
        if not c:
            return MultilinearMap.zero(f, self.arity, self.dim)
        return MultilinearMap(
            f, self.arity, self.dim,
            {k: tuple(f.vec_scale(c, v)) for k, v in self.entries.items()})

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def flatten(self) -> list:
        """Dense vector of length dim**(arity+1), tuple-major then component."""
        f, d, n = self.field, self.dim, self.arity
        out = f.vec_zero(d ** (n + 1))
        for key, vec in self.entries.items():
            rank = 0
            for i in key:
                rank = rank * d + i
            base = rank * d
            for j, c in enumerate(vec):
                out[base + j] = c
        return out


@dataclass(frozen=True)
class PredicateResult:
    ok: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class LeibnizWitness:
    """Failing instance: slot, argument tuple with u at the slot, partner v."""

    slot: int
    args: tuple
    partner: int


def _dense_values(mmap: MultilinearMap):
    d, n = mmap.dim, mmap.arity
    vals = [None] * (d ** n)
    zero = mmap.field.vec_zero(d)
    for key, vec in mmap.entries.items():
        rank = 0
        for i in key:
            rank = rank * d + i
        vals[rank] = list(vec)
    for r in range(len(vals)):
        if vals[r] is None:
            vals[r] = zero
    return vals


def _check_algebra_map(alg: StructureAlgebra, mmap: MultilinearMap) -> None:
    if mmap.dim != alg.dim or mmap.field != alg.field:
        raise DimensionMismatchError("map does not live on this algebra")


def _rank_digits(rank: int, d: int, n: int) -> tuple:
    out = []
    for _ in range(n):
        rank, r = divmod(rank, d)
        out.append(r)
    return tuple(reversed(out))


def is_n_lie_derivation(g, mmap: MultilinearMap) -> PredicateResult:
    """Slot-by-slot Lie Leibniz law on all basis tuples; first failure wins."""
    return _leibniz_predicate(g, mmap, lie=True)


def is_n_derivation(g, mmap: MultilinearMap) -> PredicateResult:
    """Slot-by-slot (associative) Leibniz law on all basis tuples."""
    return _leibniz_predicate(g, mmap, lie=False)


def _leibniz_predicate(g, mmap: MultilinearMap, lie: bool) -> PredicateResult:
    alg = core_algebra(g)
    _check_algebra_map(alg, mmap)
    d, n, f = alg.dim, mmap.arity, alg.field
    guard_tuples("leibniz predicate", d ** n)
    vals = _dense_values(mmap)
    table = alg.bracket_table if lie else None
    zero_vec = f.vec_zero(d)
    for slot in range(n):
        st = d ** (n - 1 - slot)
        for spect in range(d ** (n - 1)):
            lo = spect % st
            base = (spect // st) * (st * d) + lo
            us = range(d)
            for u in us:
                val_u = vals[base + u * st]
                vrange = range(u + 1, d) if lie else range(d)
                for v in vrange:
                    if lie:
                        cell = table[u * d + v]
                    else:
                        cell = alg.mul.at(u, v)
                    if cell:
                        lhs = zero_vec[:]
                        for w, c in cell:
                            vw = vals[base + w * st]
                            for t in range(d):
                                x = vw[t]
                                if x:
                                    lhs[t] = lhs[t] + c * x
                        if f.p is not None:
                            lhs = [x % f.p for x in lhs]
                    else:
                        lhs = zero_vec[:]
                    val_v = vals[base + v * st]
                    if lie:
                        rhs = f.vec_add(alg.bracket_vec_basis(val_u, v),
                                        [f.neg(x) for x in
                                         alg.bracket_vec_basis(val_v, u)])
                    else:
                        rhs = f.vec_add(alg.mul_vec_basis(val_u, v),
                                        alg.mul_basis_vec(u, val_v))
                    if lhs != rhs:
                        digits = list(_rank_digits(spect, d, n - 1))
                        digits.insert(slot, u)
                        return PredicateResult(
                            False, LeibnizWitness(slot, tuple(digits), v))
    return PredicateResult(True)


def is_permuting(mmap: MultilinearMap) -> bool:
    """True iff values are invariant under every argument permutation."""
    for key, vec in mmap.entries.items():
        for perm in set(permutations(key)):
            if mmap.value_at(perm) != vec:
                return False
    return True


def is_centrally_valued(g, mmap: MultilinearMap) -> PredicateResult:
    """Every stored basis-tuple value must lie in the center."""
    alg = core_algebra(g)
    _check_algebra_map(alg, mmap)
    z = center(alg)
    for key in sorted(mmap.entries):
        if not z.contains(mmap.entries[key]):
            return PredicateResult(False, key)
    return PredicateResult(True)


def swap_identity_check(g, mmap: MultilinearMap) -> PredicateResult:
    """Bracket identity every Lie biderivation satisfies, on basis 4-tuples.

    [m(x,y),[v,u]] + [m(x,v),[u,y]] = [m(u,y),[v,x]] + [m(u,v),[x,y]].

    Follows from expanding m([x,u],[y,v]) through either slot first and
    cancelling with the Jacobi identity. (A widely copied variant brackets
    the third term with [x,v]; that version already fails for the inner
    biderivation (x,y) -> [x,y], see the test suite.)
    """
    alg = core_algebra(g)
    _check_algebra_map(alg, mmap)
    if mmap.arity != 2:
        raise DimensionMismatchError("identity applies to arity-2 maps")
    d, f = alg.dim, alg.field
    guard_tuples("swap identity", d ** 4)
    bt = alg.bracket_table

    def bvec(i, j):
        out = f.vec_zero(d)
        for k, c in bt[i * d + j]:
            out[k] = c
        return out

    def br(x, y):
        return f.vec_sub(alg.mul_coords(x, y), alg.mul_coords(y, x))

    vals = _dense_values(mmap)
    for x in range(d):
        for y in range(d):
            m_xy = vals[x * d + y]
            for u in range(d):
                m_uy = vals[u * d + y]
                for v in range(d):
                    lhs = f.vec_add(br(m_xy, bvec(v, u)),
                                    br(vals[x * d + v], bvec(u, y)))
                    rhs = f.vec_add(br(m_uy, bvec(v, x)),
                                    br(vals[u * d + v], bvec(x, y)))
                    if lhs != rhs:
                        return PredicateResult(False, (x, y, u, v))
    return PredicateResult(True)


# ---------------------------------------------------------------------------
# n-Lie derivation spaces
# ---------------------------------------------------------------------------

MAX_SPACE_ARITY = 4


def _lie_basis_columns(alg: StructureAlgebra):
    """Lie derivation basis as per-input-column vectors: dcols[a][i] = D_a(b_i)."""
    L = lie_derivation_space(alg)
    d = alg.dim
    dcols = []
    for flat in L.basis:
        cols = [[flat[t * d + s] for t in range(d)] for s in range(d)]
        dcols.append(cols)
    return dcols


def _slot_block_rows(alg: StructureAlgebra, dcols) -> list:
    """Shared constraint block for a bracketed argument in any later slot.

    Unknowns X[a*d + w] stand for the coefficient tensor entry with Lie
    basis index a and the later slot at basis w; rows range over the slot-1
    basis element, the bracket pair u < v and the output component.
    """
    d, f = alg.dim, alg.field
    ell = len(dcols)
    bt = alg.bracket_table
    rows = []
    for a1 in range(d):
        da_vecs = [dcols[al][a1] for al in range(ell)]
        right = [[alg.bracket_vec_basis(da_vecs[al], v) for v in range(d)]
                 for al in range(ell)]
        for u in range(d):
            for v in range(u + 1, d):
                cell = bt[u * d + v]
                for t in range(d):
                    row: dict[int, object] = {}
                    for w, c in cell:
                        for al in range(ell):
                            x = da_vecs[al][t]
                            if x:
                                key = al * d + w
                                row[key] = f.add(row.get(key, f.zero),
                                                 f.mul(c, x))
                    for al in range(ell):
                        x = right[al][v][t]
                        if x:
                            key = al * d + u
                            row[key] = f.sub(row.get(key, f.zero), x)
                        # [b_u, D(b_a1)] = -[D(b_a1), b_u]
                        y = right[al][u][t]
                        if y:
                            key = al * d + v
                            row[key] = f.add(row.get(key, f.zero), y)
                    row = {k: val for k, val in row.items() if val}
                    if row:
                        rows.append(row)
    return rows


def n_lie_derivation_space(g, n: int) -> list:
    """Basis of the space of n-Lie derivations, via slot restriction.

    Slot one restricts the map to sum_a c_a(x_2,...,x_n) D_a(x_1) over a Lie
    derivation basis {D_a}; the slot-k constraints for k >= 2 share one
    block whose coefficients ignore the spectator slots, so each stage only
    solves a system in (current dimension) * d unknowns.
    """
    alg = core_algebra(g)
    if n < 2:
        raise DimensionMismatchError("full-space computation needs arity >= 2")
    if n > MAX_SPACE_ARITY:
        raise DimensionMismatchError(
            f"full-space computation supports arity <= {MAX_SPACE_ARITY}")
    d, f = alg.dim, alg.field
    dcols = _lie_basis_columns(alg)
    ell = len(dcols)
    guard_unknowns("slot-restricted space", ell * d ** (n - 1))
    guard_tuples("space materialization", d ** n)
    if ell == 0:
        return []

    block = _slot_block_rows(alg, dcols)
    K = kernel_basis(f, ell * d, block)
    if not K:
        return []
    # annihilator rows of K: the row space of the block, in reduced size
    ann = kernel_basis(f, ell * d, K)

    # R holds coefficient tensors over [a | i_2 .. i_k], last index fastest
    R = [list(vec) for vec in K]
    for k in range(3, n + 1):
        spect = d ** (k - 2)
        rows = []
        for J in range(spect):
            P = [[Rm[al * spect + J] for al in range(ell)] for Rm in R]
            for r in ann:
                row = {}
                for w in range(d):
                    for m_i, Pm in enumerate(P):
                        acc = f.zero
                        for al in range(ell):
                            rc = r[al * d + w]
                            if rc and Pm[al]:
                                acc = f.add(acc, f.mul(rc, Pm[al]))
                        if acc:
                            row[m_i * d + w] = acc
                if row:
                    rows.append(row)
        S = kernel_basis(f, len(R) * d, rows)
        new_r = []
        for s in S:
            t = f.vec_zero(ell * spect * d)
            for key, sval in enumerate(s):
                if not sval:
                    continue
                m_i, w = divmod(key, d)
                Rm = R[m_i]
                for al in range(ell):
                    base_in = al * spect
                    base_out = al * spect * d
                    for J in range(spect):
                        val = Rm[base_in + J]
                        if val:
                            idx = base_out + J * d + w
                            t[idx] = f.add(t[idx], f.mul(sval, val))
            new_r.append(t)
        R = new_r
        if not R:
            return []

    # canonical coefficient basis, then materialize value tensors
    coeff_space = Subspace.span(f, ell * d ** (n - 1), R)
    spect = d ** (n - 1)
    maps = []
    for coeffs in coeff_space.basis:
        entries = {}
        for J in range(spect):
            cs = [coeffs[al * spect + J] for al in range(ell)]
            if not any(cs):
                continue
            key_rest = _rank_digits(J, d, n - 1)
            for i1 in range(d):
                vec = f.vec_zero(d)
                for al, c in enumerate(cs):
                    if c:
                        vec = f.vec_add(vec, f.vec_scale(c, dcols[al][i1]))
                if any(vec):
                    entries[(i1,) + key_rest] = tuple(vec)
        maps.append(MultilinearMap(f, n, d, entries))
    return maps


def n_lie_derivation_space_direct(g, n: int) -> list:
    """Dense-kernel oracle: one unknown per tensor entry, all slots at once."""
    alg = core_algebra(g)
    if n < 1:
        raise DimensionMismatchError("arity must be >= 1")
    d, f = alg.dim, alg.field
    nunk = d ** (n + 1)
    guard_unknowns("direct space", nunk)
    bt = alg.bracket_table
    rows = []
    for slot in range(n):
        st = d ** (n - 1 - slot)
        for spect in range(d ** (n - 1)):
            lo = spect % st
            base = (spect // st) * (st * d) + lo
            for u in range(d):
                for v in range(u + 1, d):
                    cell = bt[u * d + v]
                    for t in range(d):
                        row: dict[int, object] = {}
                        for w, c in cell:
                            key = (base + w * st) * d + t
                            row[key] = f.add(row.get(key, f.zero), c)
                        # -[T(..u..), b_v]_t
                        for s in range(d):
                            for k, c in bt[s * d + v]:
                                if k == t:
                                    key = (base + u * st) * d + s
                                    row[key] = f.sub(row.get(key, f.zero), c)
                        # -[b_u, T(..v..)]_t = +[T(..v..), b_u]_t
                        for s in range(d):
                            for k, c in bt[s * d + u]:
                                if k == t:
                                    key = (base + v * st) * d + s
                                    row[key] = f.add(row.get(key, f.zero), c)
                        row = {kk: val for kk, val in row.items() if val}
                        if row:
                            rows.append(row)
    sols = kernel_basis(f, nunk, rows)
    flat_space = Subspace.span(f, nunk, sols)
    maps = []
    for flat in flat_space.basis:
        entries = {}
        for rank in range(d ** n):
            vec = flat[rank * d:(rank + 1) * d]
            if any(vec):
                entries[_rank_digits(rank, d, n)] = tuple(vec)
        maps.append(MultilinearMap(f, n, d, entries))
    return maps


def maps_span(field: FieldSpec, arity: int, dim: int, maps) -> Subspace:
    """Span of flattened maps, for comparing spaces as subspaces."""
    return Subspace.span(field, dim ** (arity + 1),
                         [m.flatten() for m in maps])
