"""Finite-dimensional unital associative algebras given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Optional

from .errors import DimensionMismatchError, FieldMismatchError
from .exact_linear import FieldSpec, Scalar, Subspace


@dataclass(frozen=True)
class BilinearTable:
    """Sparse constants of a bilinear map V_left x V_right -> V_out.

    entry(i, j) lists the (k, coeff) pairs of the image of the (i, j) basis
    pair. Stored flat at index i * right_dim + j.
    """

    left_dim: int
    right_dim: int
    out_dim: int
    entries: tuple

    @classmethod
    def from_quadruples(cls, field: FieldSpec, left_dim: int, right_dim: int,
                        out_dim: int, quads: Iterable) -> "BilinearTable":
        buckets: dict[tuple[int, int], dict[int, Scalar]] = {}
        for i, j, k, c in quads:
            if not (0 <= i < left_dim and 0 <= j < right_dim and 0 <= k < out_dim):
                raise DimensionMismatchError(
                    f"constant index ({i},{j},{k}) out of range "
                    f"({left_dim},{right_dim},{out_dim})")
            cell = buckets.setdefault((i, j), {})
            cell[k] = field.add(cell.get(k, field.zero), field.of(c))
        flat = []
        for i in range(left_dim):
            for j in range(right_dim):
                cell = buckets.get((i, j), {})
                flat.append(tuple((k, c) for k, c in sorted(cell.items()) if c))
        return cls(left_dim, right_dim, out_dim, tuple(flat))

    @classmethod
    def zero(cls, left_dim: int, right_dim: int, out_dim: int) -> "BilinearTable":
        return cls(left_dim, right_dim, out_dim,
                   tuple(() for _ in range(left_dim * right_dim)))

    @classmethod
    def from_function(cls, field: FieldSpec, left_dim: int, right_dim: int,
                      out_dim: int, fn: Callable[[int, int], Iterable]) -> "BilinearTable":
        """Build from fn(i, j) -> output coordinate vector."""
        quads = []
        for i in range(left_dim):
            for j in range(right_dim):
                for k, c in enumerate(fn(i, j)):
                    if c:
                        quads.append((i, j, k, c))
        return cls.from_quadruples(field, left_dim, right_dim, out_dim, quads)

    def at(self, i: int, j: int) -> tuple:
        return self.entries[i * self.right_dim + j]

    def apply(self, field: FieldSpec, x, y) -> list:
        """Bilinear extension to coordinate vectors."""
        out = field.vec_zero(self.out_dim)
        rd = self.right_dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            base = i * rd
            for j, yj in enumerate(y):
                if not yj:
                    continue
                w = xi * yj
                for k, c in self.entries[base + j]:
                    out[k] = out[k] + w * c
        if field.p is not None:
            p = field.p
            out = [v % p for v in out]
        return out

    def quadruples(self) -> list:
        quads = []
        for i in range(self.left_dim):
            for j in range(self.right_dim):
                for k, c in self.entries[i * self.right_dim + j]:
                    quads.append((i, j, k, c))
        return quads


@dataclass(frozen=True)
class StructureAlgebra:
    """Unital associative algebra with basis-indexed multiplication constants."""

    field: FieldSpec
    dim: int
    mul: BilinearTable
    unit: tuple

    def __post_init__(self):
        if (self.mul.left_dim, self.mul.right_dim, self.mul.out_dim) != (self.dim,) * 3:
            raise DimensionMismatchError("multiplication table shape != dim")
        if len(self.unit) != self.dim:
            raise DimensionMismatchError("unit coordinate length != dim")

    @classmethod
    def build(cls, field: FieldSpec, dim: int, quads: Iterable, unit) -> "StructureAlgebra":
        table = BilinearTable.from_quadruples(field, dim, dim, dim, quads)
        return cls(field, dim, table, tuple(field.of(x) for x in unit))

    # -- elements ------------------------------------------------------------

    def element(self, coords) -> "Element":
        coords = tuple(self.field.of(x) for x in coords)
        if len(coords) != self.dim:
            raise DimensionMismatchError("coordinate length != dim")
        return Element(self, coords)

    def basis_element(self, i: int) -> "Element":
        coords = [self.field.zero] * self.dim
        coords[i] = self.field.one
        return Element(self, tuple(coords))

    @property
    def zero(self) -> "Element":
        return Element(self, tuple(self.field.vec_zero(self.dim)))

    @property
    def one(self) -> "Element":
        return Element(self, self.unit)

    # -- coordinate-level products (hot paths) --------------------------------

    def mul_coords(self, x, y) -> list:
        return self.mul.apply(self.field, x, y)

    def bracket_coords(self, x, y) -> list:
        f = self.field
        return f.vec_sub(self.mul_coords(x, y), self.mul_coords(y, x))

    @cached_property
    def bracket_table(self) -> tuple:
        """bracket_table[i*dim+j] lists (k, c) pairs of [b_i, b_j]."""
        d, f = self.dim, self.field
        flat = []
        for i in range(d):
            for j in range(d):
                cell: dict[int, Scalar] = {}
                for k, c in self.mul.at(i, j):
                    cell[k] = f.add(cell.get(k, f.zero), c)
                for k, c in self.mul.at(j, i):
                    cell[k] = f.sub(cell.get(k, f.zero), c)
                flat.append(tuple((k, c) for k, c in sorted(cell.items()) if c))
        return tuple(flat)

    def bracket_vec_basis(self, x, j: int) -> list:
        """[x, b_j] for a coordinate vector x."""
        f, d = self.field, self.dim
        bt = self.bracket_table
        out = [0] * d if f.p is not None else f.vec_zero(d)
        for i, xi in enumerate(x):
            if xi:
                for k, c in bt[i * d + j]:
                    out[k] = out[k] + xi * c
        if f.p is not None:
            p = f.p
            out = [v % p for v in out]
        return out

    def mul_vec_basis(self, x, j: int) -> list:
        """x * b_j for a coordinate vector x."""
        f, d = self.field, self.dim
        out = [0] * d if f.p is not None else f.vec_zero(d)
        for i, xi in enumerate(x):
            if xi:
                for k, c in self.mul.at(i, j):
                    out[k] = out[k] + xi * c
        if f.p is not None:
            p = f.p
            out = [v % p for v in out]
        return out

    def mul_basis_vec(self, i: int, y) -> list:
        """b_i * y for a coordinate vector y."""
        f, d = self.field, self.dim
        out = [0] * d if f.p is not None else f.vec_zero(d)
        for j, yj in enumerate(y):
            if yj:
                for k, c in self.mul.at(i, j):
                    out[k] = out[k] + yj * c
        if f.p is not None:
            p = f.p
            out = [v % p for v in out]
        return out

    # -- element-level operations ---------------------------------------------

    def multiply(self, x: "Element", y: "Element") -> "Element":
        self._guard(x, y)
        return Element(self, tuple(self.mul_coords(x.coords, y.coords)))

    def bracket(self, x: "Element", y: "Element") -> "Element":
        self._guard(x, y)
        return Element(self, tuple(self.bracket_coords(x.coords, y.coords)))

    def _guard(self, *elements: "Element") -> None:
        for el in elements:
            if el.algebra is not self and el.algebra != self:
                raise FieldMismatchError("element belongs to a different algebra")


@dataclass(frozen=True)
class Element:
    """Coordinate vector in a fixed StructureAlgebra basis."""

    algebra: StructureAlgebra
    coords: tuple

    def __add__(self, other: "Element") -> "Element":
        self._same(other)
        return Element(self.algebra,
                       tuple(self.algebra.field.vec_add(self.coords, other.coords)))

    def __sub__(self, other: "Element") -> "Element":
        self._same(other)
        return Element(self.algebra,
                       tuple(self.algebra.field.vec_sub(self.coords, other.coords)))

    def __neg__(self) -> "Element":
        f = self.algebra.field
        return Element(self.algebra, tuple(f.neg(c) for c in self.coords))

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.algebra.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Element":
        f = self.algebra.field
        return Element(self.algebra, tuple(f.vec_scale(f.of(c), self.coords)))

    def bracket(self, other: "Element") -> "Element":
        return self.algebra.bracket(self, other)

    @property
    def is_zero(self) -> bool:
        return all(not c for c in self.coords)

    def _same(self, other: "Element") -> None:
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise FieldMismatchError("elements of different algebras")


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    law: str
    indices: tuple
    detail: str = ""


@dataclass(frozen=True)
class AlgebraReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    def summary(self) -> str:
        if self.ok:
            return "ok"
        v = self.first
        return f"{len(self.violations)} violation(s), first: {v.law} at {v.indices}"


def validate_algebra(alg: StructureAlgebra, max_violations: int = 16) -> AlgebraReport:
    """Check the two-sided unit law and associativity on all basis triples."""
    d = alg.dim
    f = alg.field
    bad: list[Violation] = []
    unit = list(alg.unit)
    for i in range(d):
        e_i = f.vec_zero(d)
        e_i[i] = f.one
        if alg.mul_coords(unit, e_i) != e_i:
            bad.append(Violation("left-unit", (i,)))
        if alg.mul_coords(e_i, unit) != e_i:
            bad.append(Violation("right-unit", (i,)))
        if len(bad) >= max_violations:
            return AlgebraReport(tuple(bad))
    basis = []
    for i in range(d):
        v = f.vec_zero(d)
        v[i] = f.one
        basis.append(v)
    for i in range(d):
        for j in range(d):
            ij = alg.mul_coords(basis[i], basis[j])
            for k in range(d):
                left = alg.mul_coords(ij, basis[k])
                right = alg.mul_coords(basis[i], alg.mul_coords(basis[j], basis[k]))
                if left != right:
                    bad.append(Violation(
                        "associativity", (i, j, k),
                        f"(b{i} b{j}) b{k} != b{i} (b{j} b{k})"))
                    if len(bad) >= max_violations:
                        return AlgebraReport(tuple(bad))
    return AlgebraReport(tuple(bad))


def commutator_span(alg: StructureAlgebra) -> Subspace:
    """Span of all basis-pair brackets [b_i, b_j]."""
    d, f = alg.dim, alg.field
    vecs = []
    for i in range(d):
        for j in range(i + 1, d):
            cell = alg.bracket_table[i * d + j]
            if cell:
                v = f.vec_zero(d)
                for k, c in cell:
                    v[k] = c
                vecs.append(v)
    return Subspace.span(f, d, vecs)


def is_commutative(alg: StructureAlgebra) -> bool:
    return commutator_span(alg).dim == 0


# ---------------------------------------------------------------------------
# stock constructions
# ---------------------------------------------------------------------------


def matrix_product_table(field: FieldSpec, a: int, b: int, c: int) -> BilinearTable:
    """Constants of (a x b) @ (b x c) -> (a x c) on matrix-unit bases E_ij."""
    quads = []
    for i in range(a):
        for j in range(b):
            for l in range(c):
                # E_ij (left) times E_jl (right) = E_il
                quads.append((i * b + j, j * c + l, i * c + l, 1))
    return BilinearTable.from_quadruples(field, a * b, b * c, a * c, quads)


def matrix_algebra(field: FieldSpec, n: int) -> StructureAlgebra:
    """Full matrix algebra M_n with basis E_ij ordered lexicographically."""
    if n < 1:
        raise ValueError("matrix algebra needs n >= 1")
    table = matrix_product_table(field, n, n, n)
    unit = [field.zero] * (n * n)
    for i in range(n):
        unit[i * n + i] = field.one
    return StructureAlgebra(field, n * n, table, tuple(unit))
