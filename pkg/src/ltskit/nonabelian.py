"""Non-abelian 3-cocycles, twisted extensions, and their equivalences.

A cocycle on g with values in h is a triple of tables

    omega: g x g x g -> h      theta: g x g -> gl(h)      rho: g -> Hom(h x h, h)

subject to one alternation condition, one cyclic condition, and eleven
coupled identities; these are exactly the conditions under which the twisted
bracket on g (+) h is again a Lie triple system, and the verifier and the
builder are tested against each other in both directions.  The derived parts

    D_theta(x, y) = theta(y, x) - theta(x, y)
    D_rho(x)(a, b) = rho(x)(b, a) - rho(x)(a, b)

are always computed on demand and never stored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .errors import BudgetExceededError, ExtensionError, SearchUnsupportedError
from .fields import Field
from .linalg import Matrix, Vec, basis_vec, in_span, iter_matrices, vadd, vec_is_zero, vsub, vzero
from .lts import AxiomReport, CheckResult, LieTripleSystem, is_homomorphism, verify_lts
from .tensors import MultiTable

DEFAULT_BUDGET = 2**20


@dataclass(frozen=True)
class NonAbelianCocycle:
    g: LieTripleSystem
    h: LieTripleSystem
    omega: MultiTable
    theta: MultiTable
    rho: MultiTable

    def __post_init__(self):
        m, k = self.g.dim, self.h.dim
        if self.g.field != self.h.field:
            raise ValueError("cocycle components live over mismatched fields")
        if self.omega.in_dims != (m, m, m) or self.omega.out_dim != k:
            raise ValueError("omega shape mismatch")
        if self.theta.in_dims != (m, m, k) or self.theta.out_dim != k:
            raise ValueError("theta shape mismatch")
        if self.rho.in_dims != (m, k, k) or self.rho.out_dim != k:
            raise ValueError("rho shape mismatch")

    @property
    def field(self) -> Field:
        return self.g.field

    def om(self, x, y, z) -> Vec:
        return self.omega.eval([x, y, z])

    def th(self, x, y, a) -> Vec:
        return self.theta.eval([x, y, a])

    def dth(self, x, y, a) -> Vec:
        return vsub(self.th(y, x, a), self.th(x, y, a))

    def rh(self, x, a, b) -> Vec:
        return self.rho.eval([x, a, b])

    def drh(self, x, a, b) -> Vec:
        return vsub(self.rh(x, b, a), self.rh(x, a, b))

    def same_components(self, other: "NonAbelianCocycle") -> bool:
        return (
            self.omega == other.omega
            and self.theta == other.theta
            and self.rho == other.rho
        )


def zero_cocycle(g: LieTripleSystem, h: LieTripleSystem) -> NonAbelianCocycle:
    m, k = g.dim, h.dim
    f = g.field
    return NonAbelianCocycle(
        g,
        h,
        MultiTable.zeros(f, (m, m, m), k),
        MultiTable.zeros(f, (m, m, k), k),
        MultiTable.zeros(f, (m, k, k), k),
    )


def _first(iterable):
    for item in iterable:
        return item
    return None


def verify_cocycle(c: NonAbelianCocycle) -> AxiomReport:
    """Per-identity report; witnesses are the basis index tuples in argument order."""
    g, h = c.g, c.h
    m, k = g.dim, h.dim
    gb, hb = g.bracket, h.bracket
    om, th, dth, rh, drh = c.om, c.th, c.dth, c.rh, c.drh
    checks: list[CheckResult] = []

    g_rep = verify_lts(g)
    checks.append(CheckResult("base_is_lts", g_rep.ok, g_rep.failing()[0].witness if not g_rep.ok else None))
    h_rep = verify_lts(h)
    checks.append(CheckResult("fiber_is_lts", h_rep.ok, h_rep.failing()[0].witness if not h_rep.ok else None))

    def alt():
        for x, y, z in itertools.product(range(m), repeat=3):
            if x == y:
                if not vec_is_zero(om(x, y, z)):
                    return (x, y, z)
            elif not vec_is_zero(vadd(om(x, y, z), om(y, x, z))):
                return (x, y, z)
        return None

    def cyc():
        for x, y, z in itertools.product(range(m), repeat=3):
            if not vec_is_zero(vadd(vadd(om(x, y, z), om(y, z, x)), om(z, x, y))):
                return (x, y, z)
        return None

    def g5():
        for x1, x2, y1, y2, y3 in itertools.product(range(m), repeat=5):
            lhs = vadd(dth(x1, x2, om(y1, y2, y3)), om(x1, x2, gb(y1, y2, y3)))
            rhs = om(gb(x1, x2, y1), y2, y3)
            rhs = vadd(rhs, th(y2, y3, om(x1, x2, y1)))
            rhs = vadd(rhs, om(y1, gb(x1, x2, y2), y3))
            rhs = vsub(rhs, th(y1, y3, om(x1, x2, y2)))
            rhs = vadd(rhs, om(y1, y2, gb(x1, x2, y3)))
            rhs = vadd(rhs, dth(y1, y2, om(x1, x2, y3)))
            if not vec_is_zero(vsub(lhs, rhs)):
                return (x1, x2, y1, y2, y3)
        return None

    def g4h1_a():
        for x, y, z, w in itertools.product(range(m), repeat=4):
            for a in range(k):
                lhs = vsub(dth(x, y, th(z, w, a)), th(z, w, dth(x, y, a)))
                rhs = vadd(th(gb(x, y, z), w, a), th(z, gb(x, y, w), a))
                rhs = vsub(rhs, drh(w, om(x, y, z), a))
                rhs = vsub(rhs, rh(z, a, om(x, y, w)))
                if not vec_is_zero(vsub(lhs, rhs)):
                    return (x, y, z, w, a)
        return None

    def g4h1_b():
        for x, y, z, w in itertools.product(range(m), repeat=4):
            for a in range(k):
                lhs = vsub(th(x, gb(y, z, w), a), rh(x, a, om(y, z, w)))
                rhs = vsub(th(z, w, th(x, y, a)), th(y, w, th(x, z, a)))
                rhs = vadd(rhs, dth(y, z, th(x, w, a)))
                if not vec_is_zero(vsub(lhs, rhs)):
                    return (x, y, z, w, a)
        return None

    def g3h2_a():
        for x, y, z in itertools.product(range(m), repeat=3):
            for a, b in itertools.product(range(k), repeat=2):
                lhs = dth(x, y, rh(z, a, b))
                rhs = vadd(rh(z, dth(x, y, a), b), rh(gb(x, y, z), a, b))
                rhs = vadd(rhs, hb(om(x, y, z), a, b))
                rhs = vadd(rhs, rh(z, a, dth(x, y, b)))
                if not vec_is_zero(vsub(lhs, rhs)):
                    return (x, y, z, a, b)
        return None

    def g3h2_b():
        for x, y, z in itertools.product(range(m), repeat=3):
            for a, b in itertools.product(range(k), repeat=2):
                lhs = dth(y, z, rh(x, a, b))
                rhs = vsub(rh(x, a, dth(y, z, b)), rh(z, th(x, y, a), b))
                rhs = vadd(rhs, rh(y, th(x, z, a), b))
                if not vec_is_zero(vsub(lhs, rhs)):
                    return (x, y, z, a, b)
        return None

    def g3h2_c():
        for x, y, z in itertools.product(range(m), repeat=3):
            for a, b in itertools.product(range(k), repeat=2):
                lhs = th(y, z, rh(x, a, b))
                rhs = vsub(rh(x, a, th(y, z, b)), drh(z, th(x, y, a), b))
                rhs = vsub(rhs, rh(y, b, th(x, z, a)))
                if not vec_is_zero(vsub(lhs, rhs)):
                    return (x, y, z, a, b)
        return None

    def g2h3_a():
        for x, y in itertools.product(range(m), repeat=2):
            for a, b, cc in itertools.product(range(k), repeat=3):
                lhs = dth(x, y, hb(a, b, cc))
                rhs = vadd(hb(dth(x, y, a), b, cc), hb(a, dth(x, y, b), cc))
                rhs = vadd(rhs, hb(a, b, dth(x, y, cc)))
                if not vec_is_zero(vsub(lhs, rhs)):
                    return (x, y, a, b, cc)
        return None

    def g2h3_b():
        for x, y in itertools.product(range(m), repeat=2):
            for a, b, cc in itertools.product(range(k), repeat=3):
                lhs = rh(x, a, rh(y, b, cc))
                rhs = vadd(rh(y, rh(x, a, b), cc), rh(y, b, rh(x, a, cc)))
                rhs = vsub(rhs, hb(th(x, y, a), b, cc))
                if not vec_is_zero(vsub(lhs, rhs)):
                    return (x, y, a, b, cc)
        return None

    def g2h3_c():
        for x, y in itertools.product(range(m), repeat=2):
            for a, b, cc in itertools.product(range(k), repeat=3):
                lhs = hb(a, b, th(x, y, cc))
                rhs = vsub(th(x, y, hb(a, b, cc)), drh(y, drh(x, a, b), cc))
                rhs = vsub(rhs, rh(x, cc, drh(y, a, b)))
                if not vec_is_zero(vsub(lhs, rhs)):
                    return (x, y, a, b, cc)
        return None

    def g1h4_a():
        for x in range(m):
            for a, b, cc, d in itertools.product(range(k), repeat=4):
                lhs = hb(a, b, rh(x, cc, d))
                rhs = vsub(rh(x, hb(a, b, cc), d), hb(cc, drh(x, a, b), d))
                rhs = vadd(rhs, rh(x, cc, hb(a, b, d)))
                if not vec_is_zero(vsub(lhs, rhs)):
                    return (x, a, b, cc, d)
        return None

    def g1h4_b():
        for x in range(m):
            for a, b, cc, d in itertools.product(range(k), repeat=4):
                lhs = rh(x, a, hb(b, cc, d))
                rhs = vadd(hb(rh(x, a, b), cc, d), hb(b, rh(x, a, cc), d))
                rhs = vadd(rhs, hb(b, cc, rh(x, a, d)))
                if not vec_is_zero(vsub(lhs, rhs)):
                    return (x, a, b, cc, d)
        return None

    for name, fn in (
        ("omega_alternation", alt),
        ("omega_cyclic", cyc),
        ("coupling_g5", g5),
        ("coupling_g4h1_a", g4h1_a),
        ("coupling_g4h1_b", g4h1_b),
        ("coupling_g3h2_a", g3h2_a),
        ("coupling_g3h2_b", g3h2_b),
        ("coupling_g3h2_c", g3h2_c),
        ("coupling_g2h3_a", g2h3_a),
        ("coupling_g2h3_b", g2h3_b),
        ("coupling_g2h3_c", g2h3_c),
        ("coupling_g1h4_a", g1h4_a),
        ("coupling_g1h4_b", g1h4_b),
    ):
        w = fn()
        checks.append(CheckResult(name, w is None, w))
    return AxiomReport(tuple(checks))


def twisted_bracket_value(c: NonAbelianCocycle, w1, w2, w3) -> Vec:
    """Bracket on g (+) h; arguments are (g-vector, h-vector) pairs."""
    (x, a), (y, b), (z, cc) = w1, w2, w3
    gpart = c.g.bracket(x, y, z)
    hpart = c.om(x, y, z)
    hpart = vadd(hpart, c.dth(x, y, cc))
    hpart = vadd(hpart, c.th(y, z, a))
    hpart = vsub(hpart, c.th(x, z, b))
    hpart = vadd(hpart, c.drh(z, a, b))
    hpart = vadd(hpart, c.rh(x, b, cc))
    hpart = vsub(hpart, c.rh(y, a, cc))
    hpart = vadd(hpart, c.h.bracket(a, b, cc))
    return gpart + hpart


@dataclass(frozen=True)
class Extension:
    """Short exact sequence 0 -> h -> hat -> g -> 0 with a chosen section.

    Structural invariants (exactness, section law, embedded ideal, the two
    arrow maps being bracket-preserving) are validated at construction; the
    big system's own axioms are deliberately not, so that invalid twisted
    brackets can be built and inspected.
    """

    g: LieTripleSystem
    h: LieTripleSystem
    hat: LieTripleSystem
    i: Matrix
    p: Matrix
    s: Matrix

    def __post_init__(self):
        m, k, n = self.g.dim, self.h.dim, self.hat.dim
        field = self.g.field
        if self.h.field != field or self.hat.field != field:
            raise ExtensionError("field mismatch between members")
        if n != m + k:
            raise ExtensionError("big system dimension must be dim g + dim h")
        if (self.i.rows, self.i.cols) != (n, k):
            raise ExtensionError("injection has wrong shape")
        if (self.p.rows, self.p.cols) != (m, n):
            raise ExtensionError("projection has wrong shape")
        if (self.s.rows, self.s.cols) != (n, m):
            raise ExtensionError("section has wrong shape")
        if self.i.rank() != k:
            raise ExtensionError("injection is not injective")
        if self.p.rank() != m:
            raise ExtensionError("projection is not surjective")
        if not self.p.mul(self.i).is_zero():
            raise ExtensionError("projection composed with injection is nonzero")
        if self.p.mul(self.s) != Matrix.identity(field, m):
            raise ExtensionError("section law p s = id fails")
        if not is_homomorphism(self.i, self.h, self.hat):
            raise ExtensionError("injection does not preserve brackets")
        if not is_homomorphism(self.p, self.hat, self.g):
            raise ExtensionError("projection does not preserve brackets")
        image = [self.i.col(j) for j in range(k)]
        for v in image:
            for u1, u2 in itertools.product(range(n), repeat=2):
                if not in_span(field, image, self.hat.bracket(v, u1, u2)):
                    raise ExtensionError("embedded subspace is not an ideal")
                if not in_span(field, image, self.hat.bracket(u1, u2, v)):
                    raise ExtensionError("embedded subspace is not an ideal")

    @property
    def field(self) -> Field:
        return self.g.field

    def pullback(self, v: Vec) -> Vec:
        """Coordinates a with i a = v; error when v escapes the ideal."""
        a = self.i.solve(v)
        if a is None:
            raise ExtensionError("bracket value escapes the embedded ideal")
        return a

    def with_section(self, s2: Matrix) -> "Extension":
        return Extension(self.g, self.h, self.hat, self.i, self.p, s2)

    def is_abelian(self) -> bool:
        image = [self.i.col(j) for j in range(self.h.dim)]
        for v, w in itertools.product(image, repeat=2):
            for u in range(self.hat.dim):
                if not vec_is_zero(self.hat.bracket(v, w, u)):
                    return False
                if not vec_is_zero(self.hat.bracket(u, v, w)):
                    return False
        return True


def canonical_section(field: Field, p: Matrix) -> Matrix:
    """The deterministic right inverse of p (free coordinates set to zero)."""
    cols = []
    for j in range(p.rows):
        x = p.solve(basis_vec(field, p.rows, j))
        if x is None:
            raise ExtensionError("projection is not surjective")
        cols.append(x)
    return Matrix.from_cols(field, cols)


def build_extension(c: NonAbelianCocycle) -> Extension:
    """Twisted bracket on g (+) h with the canonical injection, projection, section."""
    g, h = c.g, c.h
    m, k = g.dim, h.dim
    n = m + k
    field = g.field

    def split(u: int):
        if u < m:
            return basis_vec(field, m, u), vzero(field, k)
        return vzero(field, m), basis_vec(field, k, u - m)

    def fn(idx):
        return twisted_bracket_value(c, split(idx[0]), split(idx[1]), split(idx[2]))

    hat = LieTripleSystem(field, n, MultiTable.build(field, (n, n, n), n, fn))
    i = Matrix(field, [vzero(field, k)] * m + [basis_vec(field, k, r) for r in range(k)])
    p = Matrix(field, [basis_vec(field, n, r) for r in range(m)])
    s = Matrix(field, [basis_vec(field, m, r) for r in range(m)] + [vzero(field, m)] * k)
    return Extension(g, h, hat, i, p, s)


def quotient_bracket(ext: Extension, section: Optional[Matrix] = None) -> MultiTable:
    s = ext.s if section is None else section
    return MultiTable.build(
        ext.field,
        (ext.g.dim,) * 3,
        ext.g.dim,
        lambda idx: ext.p.apply(ext.hat.bracket(s.col(idx[0]), s.col(idx[1]), s.col(idx[2]))),
    )


def extract_cocycle(ext: Extension, section: Optional[Matrix] = None) -> NonAbelianCocycle:
    """Cocycle induced by a section: the failure of the section to be flat.

    The induced quotient bracket must coincide with the stated base bracket g.
    """
    s = ext.s if section is None else section
    if ext.p.mul(s) != Matrix.identity(ext.field, ext.g.dim):
        raise ExtensionError("supplied section does not satisfy p s = id")
    g, h = ext.g, ext.h
    m, k = g.dim, h.dim
    if quotient_bracket(ext, s) != g.table:
        raise ExtensionError("section-induced quotient bracket disagrees with the base system")
    hb = ext.hat.bracket

    def om_fn(idx):
        x, y, z = idx
        v = vsub(hb(s.col(x), s.col(y), s.col(z)), s.apply(g.bracket(x, y, z)))
        return ext.pullback(v)

    def th_fn(idx):
        x, y, a = idx
        return ext.pullback(hb(ext.i.col(a), s.col(x), s.col(y)))

    def rh_fn(idx):
        x, a, b = idx
        return ext.pullback(hb(s.col(x), ext.i.col(a), ext.i.col(b)))

    return NonAbelianCocycle(
        g,
        h,
        MultiTable.build(ext.field, (m, m, m), k, om_fn),
        MultiTable.build(ext.field, (m, m, k), k, th_fn),
        MultiTable.build(ext.field, (m, k, k), k, rh_fn),
    )


def translate_cocycle(c: NonAbelianCocycle, phi: Matrix) -> NonAbelianCocycle:
    """The unique cocycle equivalent to ``c`` through the comparison map ``phi``.

    phi maps the base into the fiber (rows = dim h, cols = dim g).  The
    returned triple plays the first role in ``cocycles_equivalent_via``:
    ``cocycles_equivalent_via(phi, translate_cocycle(c, phi), c)`` holds.
    """
    g, h = c.g, c.h
    m, k = g.dim, h.dim
    if (phi.rows, phi.cols) != (k, m):
        raise ValueError("comparison map has wrong shape")
    hb = h.bracket
    f = phi.col

    def om_fn(idx):
        x, y, z = idx
        v = c.om(x, y, z)
        v = vadd(v, c.th(x, z, f(y)))
        v = vsub(v, c.dth(x, y, f(z)))
        v = vadd(v, c.rh(x, f(y), f(z)))
        v = vsub(v, c.th(y, z, f(x)))
        v = vadd(v, c.drh(z, f(x), f(y)))
        v = vsub(v, c.rh(y, f(x), f(z)))
        v = vsub(v, hb(f(x), f(y), f(z)))
        v = vadd(v, phi.apply(g.bracket(x, y, z)))
        return v

    def th_fn(idx):
        x, y, a = idx
        v = c.th(x, y, a)
        v = vadd(v, c.rh(x, a, f(y)))
        v = vsub(v, c.drh(y, a, f(x)))
        v = vadd(v, hb(a, f(x), f(y)))
        return v

    def rh_fn(idx):
        x, a, b = idx
        return vadd(c.rh(x, a, b), hb(a, f(x), b))

    return NonAbelianCocycle(
        g,
        h,
        MultiTable.build(c.field, (m, m, m), k, om_fn),
        MultiTable.build(c.field, (m, m, k), k, th_fn),
        MultiTable.build(c.field, (m, k, k), k, rh_fn),
    )


def cocycles_equivalent_via(phi: Matrix, c1: NonAbelianCocycle, c2: NonAbelianCocycle) -> bool:
    """Whether phi witnesses equivalence of the two triples.

    When it does, the two derived comparison identities (for D_theta and
    D_rho) are rechecked; their failure would be an internal inconsistency.
    """
    if c1.g.dim != c2.g.dim or c1.h.dim != c2.h.dim or c1.field != c2.field:
        raise ValueError("cocycles live over mismatched spaces")
    if not c1.same_components(translate_cocycle(c2, phi)):
        return False
    m, k = c1.g.dim, c1.h.dim
    f = phi.col
    hb = c2.h.bracket
    for x, y in itertools.product(range(m), repeat=2):
        for a in range(k):
            lhs = vsub(c1.dth(x, y, a), c2.dth(x, y, a))
            rhs = vsub(c2.rh(y, f(x), a), c2.rh(x, f(y), a))
            rhs = vadd(rhs, hb(f(x), f(y), a))
            if not vec_is_zero(vsub(lhs, rhs)):
                raise RuntimeError("derived comparison identity for D_theta failed")
    for x in range(m):
        for a, b in itertools.product(range(k), repeat=2):
            lhs = vsub(c1.drh(x, a, b), c2.drh(x, a, b))
            rhs = hb(b, a, f(x))
            if not vec_is_zero(vsub(lhs, rhs)):
                raise RuntimeError("derived comparison identity for D_rho failed")
    return True


def find_equivalence(
    c1: NonAbelianCocycle, c2: NonAbelianCocycle, budget: int = DEFAULT_BUDGET
) -> Optional[Matrix]:
    """Exhaustive search for a witness, lexicographic over flattened entries.

    Only available over a prime field; over the rationals the comparison
    equations are cubic in phi and only supplied witnesses can be checked.
    """
    field = c1.field
    if field.kind != "Fp":
        raise SearchUnsupportedError("witness search requires a finite field")
    m, k = c1.g.dim, c1.h.dim
    count = field.p ** (m * k)
    if count > budget:
        raise BudgetExceededError(count, budget)
    for phi in iter_matrices(field, k, m):
        if cocycles_equivalent_via(phi, c1, c2):
            return phi
    return None


def extensions_equivalent(
    e1: Extension, e2: Extension, budget: int = DEFAULT_BUDGET
) -> Optional[Matrix]:
    """An equivalence of extensions as an explicit map hat1 -> hat2, or None."""
    if e1.g != e2.g or e1.h != e2.h:
        raise ValueError("extensions must share base and fiber")
    c1 = extract_cocycle(e1)
    c2 = extract_cocycle(e2)
    phi = find_equivalence(c1, c2, budget)
    if phi is None:
        return None
    field = e1.field
    n = e1.hat.dim
    ident = Matrix.identity(field, n)
    lift1 = Matrix.from_cols(
        field, [e1.pullback(vsub(ident.col(j), e1.s.apply(e1.p.col(j)))) for j in range(n)]
    )
    f = e2.s.mul(e1.p).sub(e2.i.mul(phi).mul(e1.p)).add(e2.i.mul(lift1))
    if not is_homomorphism(f, e1.hat, e2.hat):
        raise RuntimeError("constructed equivalence fails to preserve brackets")
    if f.mul(e1.i) != e2.i or e2.p.mul(f) != e1.p:
        raise RuntimeError("constructed equivalence does not commute with the arrows")
    return f
