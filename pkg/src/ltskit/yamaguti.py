"""Cochain complex of a Lie triple system representation, with cohomology.

A level-n cochain takes 2n+1 arguments (level 0 is plain Hom(g, V)); for
n >= 1 it vanishes when the two arguments before the last coincide and has
vanishing cyclic sum over the final three arguments.  The coboundary raises
the level by one.  Cohomology is indexed the classical way: ``cohomology(n)``
computes the group in degree 2n-1, with the degree-1 group equal to the full
kernel (no coboundaries below it).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .fields import Field
from .linalg import Matrix, Vec, basis_vec, vadd, vec_is_zero, vscale, vsub, vzero
from .lts import LieTripleSystem, Representation
from .tensors import MultiTable, index_tuples, last3_constraint_witness


class CochainConstraintError(ValueError):
    def __init__(self, kind: str, witness: tuple[int, ...]):
        self.kind = kind
        self.witness = witness
        super().__init__(f"cochain violates {kind} at {witness}")


@dataclass(frozen=True)
class Cochain:
    level: int
    table: MultiTable

    def __post_init__(self):
        if self.table.arity != 2 * self.level + 1:
            raise ValueError("cochain arity does not match level")

    @property
    def gdim(self) -> int:
        return self.table.in_dims[0]

    @property
    def vdim(self) -> int:
        return self.table.out_dim

    def eval(self, args) -> Vec:
        return self.table.eval(args)

    def add(self, other: "Cochain") -> "Cochain":
        return Cochain(self.level, self.table.add(other.table))

    def sub(self, other: "Cochain") -> "Cochain":
        return Cochain(self.level, self.table.sub(other.table))

    def scale(self, c) -> "Cochain":
        return Cochain(self.level, self.table.scale(c))

    def is_zero(self) -> bool:
        return self.table.is_zero()


def check_cochain(f: Cochain) -> None:
    if f.level == 0:
        return
    w = last3_constraint_witness(f.table)
    if w is not None:
        raise CochainConstraintError(*w)


def _constrained_scalar_basis(field: Field, d: int) -> list[dict]:
    """Basis of scalar trilinear maps with the two end constraints.

    Returned as sparse {(i, j, k): scalar} dicts, deterministic order.
    """
    coords = list(itertools.product(range(d), repeat=3))
    pos = {c: n for n, c in enumerate(coords)}
    rows = []
    for i, j, k in coords:
        row = [field.zero] * len(coords)
        if i == j:
            row[pos[(i, j, k)]] = field.one
            rows.append(row)
        elif i < j:
            row[pos[(i, j, k)]] = field.one
            row[pos[(j, i, k)]] = field.one
            rows.append(row)
        cyc = [field.zero] * len(coords)
        for c in ((i, j, k), (j, k, i), (k, i, j)):
            cyc[pos[c]] = cyc[pos[c]] + field.one
        rows.append(cyc)
    basis = Matrix(field, rows).nullspace()
    out = []
    for v in basis:
        out.append({c: v[pos[c]] for c in coords if v[pos[c]]})
    return out


def cochain_space_basis(level: int, gdim: int, vdim: int, field: Field) -> list[Cochain]:
    """Deterministic basis of the constrained cochain space at the given level.

    The end constraints only involve the final three arguments, so the space
    factors as (free prefix) x (constrained trilinear part) x (output); the
    trilinear factor is the nullspace of the stacked constraint matrix.
    """
    arity = 2 * level + 1
    if level == 0:
        basis = []
        for i in range(gdim):
            for l in range(vdim):
                t = MultiTable.zeros(field, (gdim,), vdim)
                data = dict(t.data)
                data[(i,)] = basis_vec(field, vdim, l)
                basis.append(Cochain(0, MultiTable(field, (gdim,), vdim, data)))
        return basis
    tri = _constrained_scalar_basis(field, gdim)
    basis = []
    for prefix in itertools.product(range(gdim), repeat=arity - 3):
        for s in tri:
            for l in range(vdim):
                t = MultiTable.zeros(field, (gdim,) * arity, vdim)
                data = dict(t.data)
                for (i, j, k), c in s.items():
                    data[prefix + (i, j, k)] = vscale(c, basis_vec(field, vdim, l))
                basis.append(Cochain(level, MultiTable(field, (gdim,) * arity, vdim, data)))
    return basis


def coboundary(f: Cochain, g: LieTripleSystem, rep: Representation) -> Cochain:
    """Coboundary, mapping level n-1 to level n (arity 2n-1 to 2n+1)."""
    check_cochain(f)
    if f.gdim != g.dim or f.vdim != rep.vdim:
        raise ValueError("cochain shape does not match system and module")
    n = f.level + 1
    arity = 2 * n + 1
    field = g.field

    def value(z: tuple[int, ...]) -> Vec:
        out = rep.th(z[2 * n - 1], z[2 * n], f.eval(z[: 2 * n - 1]))
        out = vsub(out, rep.th(z[2 * n - 2], z[2 * n], f.eval(z[: 2 * n - 2] + (z[2 * n - 1],))))
        for i in range(1, n + 1):
            a, b = 2 * i - 2, 2 * i - 1
            reduced = z[:a] + z[b + 1 :]
            dterm = rep.dth(z[a], z[b], f.eval(reduced))
            out = vadd(out, dterm) if (i + n) % 2 == 0 else vsub(out, dterm)
            for j0 in range(2 * i, arity):
                args = list(reduced)
                args[j0 - 2] = g.bracket(z[a], z[b], z[j0])
                term = f.eval(args)
                out = vadd(out, term) if (i + n + 1) % 2 == 0 else vsub(out, term)
        return out

    table = MultiTable.build(field, (g.dim,) * arity, rep.vdim, value)
    result = Cochain(n, table)
    w = last3_constraint_witness(table)
    if w is not None:
        raise RuntimeError(f"coboundary output violates {w[0]} at {w[1]}")
    return result


def _flatten(c: Cochain) -> Vec:
    out = []
    for idx in index_tuples(c.table.in_dims):
        out.extend(c.table.data[idx])
    return tuple(out)


def _unflatten(flat: Vec, level: int, gdim: int, vdim: int, field: Field) -> Cochain:
    arity = 2 * level + 1
    data = {}
    k = 0
    for idx in itertools.product(range(gdim), repeat=arity):
        data[idx] = tuple(flat[k : k + vdim])
        k += vdim
    return Cochain(level, MultiTable(field, (gdim,) * arity, vdim, data))


def coblock(level_from: int, g: LieTripleSystem, rep: Representation):
    """(domain basis, matrix of the coboundary in flattened coordinates)."""
    basis = cochain_space_basis(level_from, g.dim, rep.vdim, g.field)
    cols = [_flatten(coboundary(b, g, rep)) for b in basis]
    if cols:
        mat = Matrix.from_cols(g.field, cols)
    else:
        mat = Matrix.zeros(g.field, g.dim ** (2 * level_from + 3) * rep.vdim, 0)
    return basis, mat


@dataclass(frozen=True)
class CohomologyReport:
    n: int
    dim_c: int
    dim_z: int
    dim_b: int
    dim_h: int
    z_basis: tuple[Cochain, ...]
    b_basis: tuple[Cochain, ...]

    def to_dict(self) -> dict:
        return {
            "degree": 2 * self.n - 1,
            "dim_cochains": self.dim_c,
            "dim_cocycles": self.dim_z,
            "dim_coboundaries": self.dim_b,
            "dim_cohomology": self.dim_h,
        }


def cohomology(n: int, g: LieTripleSystem, rep: Representation) -> CohomologyReport:
    """Cohomology in degree 2n-1 (n >= 1)."""
    if n < 1:
        raise ValueError("cohomology level must be >= 1")
    level = n - 1
    basis, dmat = coblock(level, g, rep)
    kernel = dmat.nullspace() if basis else []
    z_basis = []
    for coeffs in kernel:
        acc = Cochain(level, MultiTable.zeros(g.field, (g.dim,) * (2 * level + 1), rep.vdim))
        for c, b in zip(coeffs, basis):
            if c:
                acc = acc.add(b.scale(c))
        z_basis.append(acc)
    if n == 1:
        b_basis: list[Cochain] = []
    else:
        prev_basis, _ = coblock(level - 1, g, rep)
        images = [_flatten(coboundary(b, g, rep)) for b in prev_basis]
        b_basis = []
        if images:
            red, rank, _ = Matrix(g.field, images).rref()
            for r in range(rank):
                b_basis.append(_unflatten(red.data[r], level, g.dim, rep.vdim, g.field))
    return CohomologyReport(
        n=n,
        dim_c=len(basis),
        dim_z=len(z_basis),
        dim_b=len(b_basis),
        dim_h=len(z_basis) - len(b_basis),
        z_basis=tuple(z_basis),
        b_basis=tuple(b_basis),
    )


def coboundary_preimage(target: Cochain, g: LieTripleSystem, rep: Representation):
    """Some level-(n-1) cochain mapping to ``target``, or None.

    Decides membership of ``target`` in the coboundary image one level down.
    """
    level = target.level - 1
    if level < 0:
        raise ValueError("target must have level >= 1")
    basis, dmat = coblock(level, g, rep)
    if not basis:
        return Cochain(level, MultiTable.zeros(g.field, (g.dim,) * (2 * level + 1), rep.vdim)) if target.is_zero() else None
    coeffs = dmat.solve(_flatten(target))
    if coeffs is None:
        return None
    acc = Cochain(level, MultiTable.zeros(g.field, (g.dim,) * (2 * level + 1), rep.vdim))
    for c, b in zip(coeffs, basis):
        if c:
            acc = acc.add(b.scale(c))
    return acc
