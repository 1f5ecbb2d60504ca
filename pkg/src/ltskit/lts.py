"""Lie triple systems and their representations as structure-constant tensors.

A Lie triple system is a space with a trilinear bracket [.,.,.] that is
alternating in its first two arguments, has vanishing cyclic sum, and acts by
derivations through its left multiplications (the five-variable identity).
Structure constants are stored densely; nothing is enforced by storage, the
verifiers catch bad input and report the lexicographically first witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .fields import Field
from .linalg import (
    Matrix,
    Vec,
    basis_vec,
    in_span,
    span_basis,
    vadd,
    vec_is_zero,
    vscale,
    vsub,
    vzero,
)
from .tensors import MultiTable


@dataclass(frozen=True)
class CheckResult:
    identity: str
    ok: bool
    witness: Optional[tuple[int, ...]] = None

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "ok": self.ok,
            "witness": list(self.witness) if self.witness is not None else None,
        }


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_dict() for c in self.checks]}

    def failing(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]


class LieTripleSystem:
    """A candidate bracket table; validity is decided by ``verify_lts``."""

    __slots__ = ("field", "dim", "table")

    def __init__(self, field: Field, dim: int, table: MultiTable):
        if table.in_dims != (dim, dim, dim) or table.out_dim != dim:
            raise ValueError("bracket table shape mismatch")
        if table.field != field:
            raise ValueError("bracket table field mismatch")
        self.field = field
        self.dim = dim
        self.table = table

    @classmethod
    def zero(cls, field: Field, dim: int) -> "LieTripleSystem":
        return cls(field, dim, MultiTable.zeros(field, (dim, dim, dim), dim))

    @classmethod
    def from_entries(cls, field: Field, dim: int, entries: dict) -> "LieTripleSystem":
        """Build from a sparse {(i, j, k): vector} mapping."""
        z = vzero(field, dim)
        data = {idx: z for idx in itertools.product(range(dim), repeat=3)}
        for idx, v in entries.items():
            data[idx] = tuple(v)
        return cls(field, dim, MultiTable(field, (dim, dim, dim), dim, data))

    def bracket(self, x, y, z) -> Vec:
        """Bracket of basis indices or coordinate vectors."""
        return self.table.eval([x, y, z])

    def basis(self) -> list[Vec]:
        return [basis_vec(self.field, self.dim, i) for i in range(self.dim)]

    def __eq__(self, other):
        return (
            isinstance(other, LieTripleSystem)
            and other.field == self.field
            and other.dim == self.dim
            and other.table == self.table
        )

    def __repr__(self):
        return f"LieTripleSystem(dim={self.dim}, field={self.field.kind})"


def verify_lts(g: LieTripleSystem) -> AxiomReport:
    """Check the three bracket axioms; witnesses are basis index tuples."""
    d = g.dim
    alt: Optional[tuple[int, ...]] = None
    for i, j, k in itertools.product(range(d), repeat=3):
        if i == j:
            if not vec_is_zero(g.bracket(i, j, k)):
                alt = (i, j, k)
                break
        elif not vec_is_zero(vadd(g.bracket(i, j, k), g.bracket(j, i, k))):
            alt = (i, j, k)
            break
    cyc: Optional[tuple[int, ...]] = None
    for i, j, k in itertools.product(range(d), repeat=3):
        s = vadd(vadd(g.bracket(i, j, k), g.bracket(j, k, i)), g.bracket(k, i, j))
        if not vec_is_zero(s):
            cyc = (i, j, k)
            break
    der: Optional[tuple[int, ...]] = None
    for idx in itertools.product(range(d), repeat=5):
        x1, x2, y1, y2, y3 = idx
        lhs = g.bracket(x1, x2, g.bracket(y1, y2, y3))
        rhs = vadd(
            vadd(
                g.bracket(g.bracket(x1, x2, y1), y2, y3),
                g.bracket(y1, g.bracket(x1, x2, y2), y3),
            ),
            g.bracket(y1, y2, g.bracket(x1, x2, y3)),
        )
        if not vec_is_zero(vsub(lhs, rhs)):
            der = idx
            break
    return AxiomReport(
        (
            CheckResult("alternation", alt is None, alt),
            CheckResult("cyclic_sum", cyc is None, cyc),
            CheckResult("derivation", der is None, der),
        )
    )


class InvalidLieAlgebraError(ValueError):
    def __init__(self, identity: str, witness: tuple[int, ...]):
        self.identity = identity
        self.witness = witness
        super().__init__(f"not a Lie algebra: {identity} fails at {witness}")


def lts_from_lie_algebra(field: Field, dim: int, lie: MultiTable) -> LieTripleSystem:
    """Induced triple bracket [x, y, z] := [[x, y], z] of a Lie algebra.

    The binary table is verified (antisymmetry, Jacobi) before use.
    """
    if lie.in_dims != (dim, dim) or lie.out_dim != dim:
        raise ValueError("Lie bracket table shape mismatch")
    for i, j in itertools.product(range(dim), repeat=2):
        if i == j:
            if not vec_is_zero(lie.eval([i, j])):
                raise InvalidLieAlgebraError("antisymmetry", (i, j))
        elif not vec_is_zero(vadd(lie.eval([i, j]), lie.eval([j, i]))):
            raise InvalidLieAlgebraError("antisymmetry", (i, j))
    for i, j, k in itertools.product(range(dim), repeat=3):
        s = vadd(
            vadd(lie.eval([lie.eval([i, j]), k]), lie.eval([lie.eval([j, k]), i])),
            lie.eval([lie.eval([k, i]), j]),
        )
        if not vec_is_zero(s):
            raise InvalidLieAlgebraError("jacobi", (i, j, k))
    triple = MultiTable.build(
        field, (dim, dim, dim), dim, lambda idx: lie.eval([lie.eval([idx[0], idx[1]]), idx[2]])
    )
    return LieTripleSystem(field, dim, triple)


def is_ideal(vectors: Sequence[Vec], g: LieTripleSystem) -> bool:
    """Whether span(vectors) M satisfies [M, g, g] + [g, g, M] inside M."""
    for v in vectors:
        if len(v) != g.dim:
            raise ValueError("subspace vector of wrong dimension")
    basis = span_basis(g.field, list(vectors), g.dim)
    for v in basis:
        for i, j in itertools.product(range(g.dim), repeat=2):
            if not in_span(g.field, basis, g.bracket(v, i, j)):
                return False
            if not in_span(g.field, basis, g.bracket(i, j, v)):
                return False
    return True


def is_abelian_ideal(vectors: Sequence[Vec], g: LieTripleSystem) -> bool:
    if not is_ideal(vectors, g):
        return False
    basis = span_basis(g.field, list(vectors), g.dim)
    for v, w in itertools.product(basis, repeat=2):
        for i in range(g.dim):
            if not vec_is_zero(g.bracket(v, w, i)):
                return False
            if not vec_is_zero(g.bracket(i, v, w)):
                return False
    return True


class Representation:
    """Action theta of basis pairs on a module, as a (g, g, V) -> V table."""

    __slots__ = ("lts", "vdim", "theta")

    def __init__(self, lts: LieTripleSystem, vdim: int, theta: MultiTable):
        if theta.in_dims != (lts.dim, lts.dim, vdim) or theta.out_dim != vdim:
            raise ValueError("theta table shape mismatch")
        if theta.field != lts.field:
            raise ValueError("theta field mismatch")
        self.lts = lts
        self.vdim = vdim
        self.theta = theta

    @classmethod
    def zero(cls, lts: LieTripleSystem, vdim: int) -> "Representation":
        return cls(lts, vdim, MultiTable.zeros(lts.field, (lts.dim, lts.dim, vdim), vdim))

    @classmethod
    def regular(cls, lts: LieTripleSystem) -> "Representation":
        """theta(x, y) a := [a, x, y] on the system itself."""
        t = MultiTable.build(
            lts.field,
            (lts.dim, lts.dim, lts.dim),
            lts.dim,
            lambda idx: lts.bracket(idx[2], idx[0], idx[1]),
        )
        return cls(lts, lts.dim, t)

    def th(self, x, y, a) -> Vec:
        return self.theta.eval([x, y, a])

    def dth(self, x, y, a) -> Vec:
        """Derived part D(x, y) = theta(y, x) - theta(x, y), never stored."""
        return vsub(self.th(y, x, a), self.th(x, y, a))

    def __repr__(self):
        return f"Representation(vdim={self.vdim}, over dim={self.lts.dim})"


def verify_representation(rep: Representation) -> AxiomReport:
    """Check the two compatibility identities on all basis quadruples."""
    g = rep.lts
    d = g.dim
    prod_w: Optional[tuple[int, ...]] = None
    for idx in itertools.product(range(d), repeat=4):
        x1, x2, x3, x4 = idx
        for a in range(rep.vdim):
            av = basis_vec(rep.theta.field, rep.vdim, a)
            val = vsub(
                vsub(rep.th(x3, x4, rep.th(x1, x2, av)), rep.th(x2, x4, rep.th(x1, x3, av))),
                rep.th(x1, g.bracket(x2, x3, x4), av),
            )
            val = vadd(val, rep.dth(x2, x3, rep.th(x1, x4, av)))
            if not vec_is_zero(val):
                prod_w = idx + (a,)
                break
        if prod_w:
            break
    comm_w: Optional[tuple[int, ...]] = None
    for idx in itertools.product(range(d), repeat=4):
        x1, x2, x3, x4 = idx
        for a in range(rep.vdim):
            av = basis_vec(rep.theta.field, rep.vdim, a)
            val = vsub(rep.th(x3, x4, rep.dth(x1, x2, av)), rep.dth(x1, x2, rep.th(x3, x4, av)))
            val = vadd(val, rep.th(g.bracket(x1, x2, x3), x4, av))
            val = vadd(val, rep.th(x3, g.bracket(x1, x2, x4), av))
            if not vec_is_zero(val):
                comm_w = idx + (a,)
                break
        if comm_w:
            break
    return AxiomReport(
        (
            CheckResult("product_identity", prod_w is None, prod_w),
            CheckResult("commutator_identity", comm_w is None, comm_w),
        )
    )


def is_homomorphism(f: Matrix, g1: LieTripleSystem, g2: LieTripleSystem) -> bool:
    if f.cols != g1.dim or f.rows != g2.dim:
        raise ValueError("map shape mismatch")
    for i, j, k in itertools.product(range(g1.dim), repeat=3):
        lhs = f.apply(g1.bracket(i, j, k))
        rhs = g2.bracket(f.col(i), f.col(j), f.col(k))
        if not vec_is_zero(vsub(lhs, rhs)):
            return False
    return True


def is_automorphism(f: Matrix, g: LieTripleSystem) -> bool:
    return f.rows == f.cols == g.dim and f.is_invertible() and is_homomorphism(f, g, g)


def direct_sum(g: LieTripleSystem, h: LieTripleSystem) -> LieTripleSystem:
    if g.field != h.field:
        raise ValueError("field mismatch in direct sum")
    m, k = g.dim, h.dim
    n = m + k

    def fn(idx):
        i, j, l = idx
        if max(idx) < m:
            return g.bracket(i, j, l) + vzero(g.field, k)
        if min(idx) >= m:
            return vzero(g.field, m) + h.bracket(i - m, j - m, l - m)
        return vzero(g.field, n)

    return LieTripleSystem(g.field, n, MultiTable.build(g.field, (n, n, n), n, fn))


def conjugate_lts(g: LieTripleSystem, pmat: Matrix) -> LieTripleSystem:
    """Change of basis: bracket'(x, y, z) = P^-1 [Px, Py, Pz]."""
    pinv = pmat.inverse()
    if pinv is None:
        raise ValueError("change of basis must be invertible")
    t = MultiTable.build(
        g.field,
        (g.dim,) * 3,
        g.dim,
        lambda idx: pinv.apply(g.bracket(pmat.col(idx[0]), pmat.col(idx[1]), pmat.col(idx[2]))),
    )
    return LieTripleSystem(g.field, g.dim, t)
