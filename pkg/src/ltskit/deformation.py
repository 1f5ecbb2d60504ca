"""Graded Lie algebra of multilinear cochains, Maurer-Cartan elements, gauge moves.

Degree-n elements take n argument pairs plus one final argument (arity 2n+1)
from a base space into itself; degree 1 is exactly the shape of a candidate
triple bracket, and a degree-1 element is a Lie triple structure precisely
when its self-insertion vanishes.  The bracket is the signed shuffle-insertion
commutator; shuffles are enumerated lexicographically and signs come from
inversion counts, a convention validated by the antisymmetry/Jacobi test
battery rather than trusted.

Divisions by 2 and 6 in the Maurer-Cartan equation and the gauge series are
never performed: the terms that carry them are integral (the operator
``ad_phi`` is 3-step nilpotent for the comparison-map shape accepted here),
and the code uses the expanded division-free forms so every field, including
characteristic 2 and 3, is supported.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .fields import Field
from .linalg import Matrix, Vec, vadd, vec_is_zero, vsub, vzero
from .lts import LieTripleSystem, verify_lts
from .nonabelian import NonAbelianCocycle
from .tensors import MultiTable, index_tuples, last3_constraint_witness

DEBUG_CHECKS = False


class NotMaurerCartanError(ValueError):
    """The designated degree-1 structure has nonvanishing self-insertion."""


@dataclass(frozen=True)
class GradedCochain:
    degree: int
    table: MultiTable

    def __post_init__(self):
        if self.degree < 0 or self.table.arity != 2 * self.degree + 1:
            raise ValueError("arity must be 2*degree + 1")
        if any(d != self.table.out_dim for d in self.table.in_dims):
            raise ValueError("graded cochains map a space into itself")

    @property
    def space(self) -> int:
        return self.table.out_dim

    @property
    def field(self) -> Field:
        return self.table.field

    def add(self, other: "GradedCochain") -> "GradedCochain":
        return GradedCochain(self.degree, self.table.add(other.table))

    def sub(self, other: "GradedCochain") -> "GradedCochain":
        return GradedCochain(self.degree, self.table.sub(other.table))

    def neg(self) -> "GradedCochain":
        return GradedCochain(self.degree, self.table.neg())

    def is_zero(self) -> bool:
        return self.table.is_zero()

    def satisfies_constraints(self) -> bool:
        return self.degree == 0 or last3_constraint_witness(self.table) is None


def zero_cochain(field: Field, space: int, degree: int) -> GradedCochain:
    return GradedCochain(degree, MultiTable.zeros(field, (space,) * (2 * degree + 1), space))


def bracket_cochain(g: LieTripleSystem) -> GradedCochain:
    """A triple bracket viewed as a degree-1 element."""
    return GradedCochain(1, g.table)


def lts_from_cochain(eta: GradedCochain) -> LieTripleSystem:
    if eta.degree != 1:
        raise ValueError("only degree-1 elements are bracket candidates")
    return LieTripleSystem(eta.field, eta.space, eta.table)


def _shuffles(p: int, q: int):
    """(outer, inner, sign) for all order-preserving splits of range(p + q)."""
    universe = range(p + q)
    for outer in itertools.combinations(universe, p):
        inner = tuple(t for t in universe if t not in outer)
        seq = outer + inner
        inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
        yield outer, inner, -1 if inv % 2 else 1


def insertion(f: GradedCochain, g: GradedCochain) -> GradedCochain:
    """Signed sum over all ways of feeding g's output into one slot of f."""
    if f.space != g.space or f.field != g.field:
        raise ValueError("insertion needs matching spaces")
    n, m = f.degree, g.degree
    space = f.space
    arity = 2 * (n + m) + 1

    def value(z: tuple[int, ...]) -> Vec:
        pairs = [(z[2 * t], z[2 * t + 1]) for t in range(n + m)]
        last = z[-1]
        total = vzero(f.field, space)

        def accumulate(term: Vec, sign: int):
            nonlocal total
            total = vadd(total, term) if sign > 0 else vsub(total, term)

        for k in range(1, n + 2):
            sign_k = -1 if (m * (k - 1)) % 2 else 1
            if k == n + 1:
                for outer, inner, sgn in _shuffles(n, m):
                    g_args = [c for t in inner for c in pairs[t]] + [last]
                    inner_val = g.table.eval(g_args)
                    if vec_is_zero(inner_val):
                        continue
                    f_args = [c for t in outer for c in pairs[t]] + [inner_val]
                    accumulate(f.table.eval(f_args), sign_k * sgn)
            else:
                split = k + m - 1
                trailing = [c for t in range(k + m, n + m) for c in pairs[t]]
                xs, ys = pairs[split]
                for outer, inner, sgn in _shuffles(k - 1, m):
                    lead = [c for t in outer for c in pairs[t]]
                    g_in = [c for t in inner for c in pairs[t]]
                    v1 = g.table.eval(g_in + [xs])
                    if not vec_is_zero(v1):
                        accumulate(f.table.eval(lead + [v1, ys] + trailing + [last]), sign_k * sgn)
                    v2 = g.table.eval(g_in + [ys])
                    if not vec_is_zero(v2):
                        accumulate(f.table.eval(lead + [xs, v2] + trailing + [last]), sign_k * sgn)
        return total

    return GradedCochain(n + m, MultiTable.build(f.field, (space,) * arity, space, value))


def _bracket_raw(f: GradedCochain, g: GradedCochain) -> GradedCochain:
    i_fg = insertion(f, g)
    i_gf = insertion(g, f)
    return i_fg.sub(i_gf) if (f.degree * g.degree) % 2 == 0 else i_fg.neg().sub(i_gf)


def graded_bracket(f: GradedCochain, g: GradedCochain) -> GradedCochain:
    result = _bracket_raw(f, g)
    if DEBUG_CHECKS:
        if not graded_antisymmetry_partner(f, g, result).is_zero():
            raise RuntimeError("graded antisymmetry violated")
        if not result.satisfies_constraints():
            raise RuntimeError("bracket output violates cochain constraints")
    return result


def graded_antisymmetry_partner(f: GradedCochain, g: GradedCochain, fg: GradedCochain) -> GradedCochain:
    """[f, g] + (-1)^{nm} [g, f]; zero when antisymmetry holds."""
    gf = _bracket_raw(g, f)
    return fg.add(gf) if (f.degree * g.degree) % 2 == 0 else fg.sub(gf)


class Differential:
    """Bracketing against a fixed structure pi with vanishing self-insertion."""

    def __init__(self, pi: GradedCochain):
        if pi.degree != 1:
            raise ValueError("differential needs a degree-1 structure")
        if not insertion(pi, pi).is_zero():
            raise NotMaurerCartanError("structure has nonvanishing self-insertion")
        self.pi = pi

    def __call__(self, f: GradedCochain) -> GradedCochain:
        return graded_bracket(self.pi, f)


def differential(pi: GradedCochain, f: GradedCochain) -> GradedCochain:
    return Differential(pi)(f)


def mc_defect(eta: GradedCochain, pi: GradedCochain) -> GradedCochain:
    """Self-insertion defect of pi + eta, assuming pi itself has none.

    Equals the usual curvature d eta + (1/2)[eta, eta] in its division-free
    integral form, so the test is meaningful in every characteristic.
    """
    if eta.degree != 1:
        raise ValueError("Maurer-Cartan candidates have degree 1")
    return insertion(pi, eta).add(insertion(eta, pi)).add(insertion(eta, eta))


def is_mc_element(eta: GradedCochain, pi: GradedCochain) -> bool:
    if not insertion(pi, pi).is_zero():
        raise NotMaurerCartanError("reference structure has nonvanishing self-insertion")
    return mc_defect(eta, pi).is_zero()


def in_plus_subcomplex(eta: GradedCochain, gdim: int, hdim: int) -> bool:
    """Target inside the fiber block and vanishing on all-fiber tuples."""
    if eta.space != gdim + hdim:
        raise ValueError("block sizes do not match the base space")
    for idx, v in eta.table.data.items():
        if any(v[:gdim]):
            return False
        if all(u >= gdim for u in idx) and not vec_is_zero(v):
            return False
    return True


def lift_cocycle_to_mc(c: NonAbelianCocycle) -> GradedCochain:
    """Cocycle data flattened into one degree-1 element on the sum space."""
    m, k = c.g.dim, c.h.dim
    n = m + k
    field = c.field

    def split(u: int):
        xs = vzero(field, m)
        as_ = vzero(field, k)
        if u < m:
            xs = tuple(field.one if t == u else field.zero for t in range(m))
        else:
            as_ = tuple(field.one if t == u - m else field.zero for t in range(k))
        return xs, as_

    def value(idx):
        (x, a), (y, b), (z, cc) = (split(u) for u in idx)
        hpart = c.om(x, y, z)
        hpart = vadd(hpart, c.dth(x, y, cc))
        hpart = vadd(hpart, c.th(y, z, a))
        hpart = vsub(hpart, c.th(x, z, b))
        hpart = vadd(hpart, c.drh(z, a, b))
        hpart = vadd(hpart, c.rh(x, b, cc))
        hpart = vsub(hpart, c.rh(y, a, cc))
        return vzero(field, m) + hpart

    return GradedCochain(1, MultiTable.build(field, (n, n, n), n, value))


def cocycle_from_mc(eta: GradedCochain, g: LieTripleSystem, h: LieTripleSystem) -> NonAbelianCocycle:
    """Read a cocycle triple back off a subcomplex element; inverse of the lift."""
    m, k = g.dim, h.dim
    if eta.degree != 1 or eta.space != m + k:
        raise ValueError("element does not match the sum space")
    if not in_plus_subcomplex(eta, m, k):
        raise ValueError("element lies outside the distinguished subcomplex")
    field = eta.field

    def hpart(v: Vec) -> Vec:
        return v[m:]

    omega = MultiTable.build(field, (m, m, m), k, lambda idx: hpart(eta.table.eval(list(idx))))
    theta = MultiTable.build(
        field, (m, m, k), k,
        lambda idx: hpart(eta.table.eval([m + idx[2], idx[0], idx[1]])),
    )
    rho = MultiTable.build(
        field, (m, k, k), k,
        lambda idx: hpart(eta.table.eval([idx[0], m + idx[1], m + idx[2]])),
    )
    c = NonAbelianCocycle(g, h, omega, theta, rho)
    if lift_cocycle_to_mc(c).table != eta.table:
        raise ValueError("element is not the lift of any cocycle triple")
    return c


def comparison_map_cochain(phi: Matrix, gdim: int, hdim: int) -> GradedCochain:
    """A base-to-fiber map as a degree-0 element, extended by zero on the fiber."""
    if (phi.rows, phi.cols) != (hdim, gdim):
        raise ValueError("comparison map has wrong shape")
    field = phi.field
    n = gdim + hdim
    zero_h = vzero(field, hdim)

    def value(idx):
        u = idx[0]
        return vzero(field, gdim) + (phi.col(u) if u < gdim else zero_h)

    return GradedCochain(0, MultiTable.build(field, (n,), n, value))


def _substituted(table: MultiTable, cols, z, positions) -> Vec:
    args = [cols[z[p]] if p in positions else z[p] for p in range(len(z))]
    return table.eval(args)


def gauge_transform(
    phi: Matrix, eta: GradedCochain, g: LieTripleSystem, h: LieTripleSystem
) -> GradedCochain:
    """Gauge move of a subcomplex Maurer-Cartan candidate by a comparison map.

    The exponential series terminates after the quadratic term because the
    accepted maps kill the fiber and land in it; the 1/2 and 1/6 coefficients
    are folded into closed substitution sums, keeping everything integral.
    """
    m, k = g.dim, h.dim
    if (phi.rows, phi.cols) != (k, m):
        raise ValueError("comparison map has wrong shape")
    if eta.degree != 1 or eta.space != m + k:
        raise ValueError("gauge moves act on degree-1 elements of the sum space")
    if not in_plus_subcomplex(eta, m, k):
        raise ValueError("gauge moves act inside the distinguished subcomplex")
    field = g.field
    n = m + k
    phi0 = comparison_map_cochain(phi, m, k)
    cols = [phi0.table.eval([u]) for u in range(n)]
    from .lts import direct_sum

    pi = bracket_cochain(direct_sum(g, h))

    t1 = graded_bracket(phi0, eta)
    dphi = graded_bracket(pi, phi0)

    def pair_sub(table: MultiTable):
        def value(z):
            total = vzero(field, n)
            for p1, p2 in itertools.combinations(range(3), 2):
                total = vadd(total, _substituted(table, cols, z, (p1, p2)))
            return total

        return MultiTable.build(field, (n, n, n), n, value)

    t2 = GradedCochain(1, pair_sub(eta.table))
    t4 = GradedCochain(1, pair_sub(pi.table))
    t5 = GradedCochain(
        1,
        MultiTable.build(
            field, (n, n, n), n, lambda z: _substituted(pi.table, cols, z, (0, 1, 2))
        ),
    )
    result = eta.add(t1).add(t2).sub(dphi).add(t4).sub(t5)
    if DEBUG_CHECKS and is_mc_element(eta, pi) and not is_mc_element(result, pi):
        raise RuntimeError("gauge move failed to preserve the Maurer-Cartan equation")
    return result


def mc_matches_bracket_validity(pi_candidate: GradedCochain) -> bool:
    """Self-insertion vanishes exactly when the bracket axioms hold.

    Helper for the structure/flatness coincidence; meaningful because a
    degree-1 element already satisfies the two end constraints by membership.
    """
    return insertion(pi_candidate, pi_candidate).is_zero() == verify_lts(
        lts_from_cochain(pi_candidate)
    ).ok
