"""Dense multilinear tables over exact fields.

A ``MultiTable`` stores a multilinear map (in_dims[0] x ... x in_dims[-1]) -> out
by its values on basis tuples. Evaluation accepts a mix of basis indices and
coordinate vectors; vector slots are expanded linearly with zero skipping.
"""

from __future__ import annotations

import itertools
from typing import Callable, Sequence

from .fields import Field
from .linalg import Vec, vadd, vec_is_zero, vscale, vzero


def index_tuples(in_dims: Sequence[int]):
    return itertools.product(*(range(d) for d in in_dims))


class MultiTable:
    __slots__ = ("field", "in_dims", "out_dim", "data")

    def __init__(self, field: Field, in_dims: Sequence[int], out_dim: int, data: dict):
        self.field = field
        self.in_dims = tuple(in_dims)
        self.out_dim = out_dim
        self.data = data

    @classmethod
    def build(cls, field: Field, in_dims: Sequence[int], out_dim: int,
              fn: Callable[[tuple[int, ...]], Vec]) -> "MultiTable":
        data = {idx: tuple(fn(idx)) for idx in index_tuples(in_dims)}
        return cls(field, in_dims, out_dim, data)

    @classmethod
    def zeros(cls, field: Field, in_dims: Sequence[int], out_dim: int) -> "MultiTable":
        z = vzero(field, out_dim)
        return cls(field, in_dims, out_dim, {idx: z for idx in index_tuples(in_dims)})

    @property
    def arity(self) -> int:
        return len(self.in_dims)

    def get(self, idx: tuple[int, ...]) -> Vec:
        return self.data[idx]

    def eval(self, args: Sequence) -> Vec:
        """Evaluate at arguments that are basis indices (int) or vectors (tuple)."""
        if len(args) != self.arity:
            raise ValueError(f"arity {self.arity} table called with {len(args)} arguments")
        pos = next((k for k, a in enumerate(args) if not isinstance(a, int)), None)
        if pos is None:
            return self.data[tuple(args)]
        out = vzero(self.field, self.out_dim)
        vec = args[pos]
        rest = list(args)
        for i, c in enumerate(vec):
            if not c:
                continue
            rest[pos] = i
            term = self.eval(rest)
            if not vec_is_zero(term):
                out = vadd(out, vscale(c, term))
        return out

    def add(self, other: "MultiTable") -> "MultiTable":
        self._check_shape(other)
        return MultiTable(self.field, self.in_dims, self.out_dim,
                          {k: vadd(v, other.data[k]) for k, v in self.data.items()})

    def sub(self, other: "MultiTable") -> "MultiTable":
        self._check_shape(other)
        return MultiTable(self.field, self.in_dims, self.out_dim,
                          {k: tuple(a - b for a, b in zip(v, other.data[k]))
                           for k, v in self.data.items()})

    def neg(self) -> "MultiTable":
        return MultiTable(self.field, self.in_dims, self.out_dim,
                          {k: tuple(-a for a in v) for k, v in self.data.items()})

    def scale(self, c) -> "MultiTable":
        return MultiTable(self.field, self.in_dims, self.out_dim,
                          {k: vscale(c, v) for k, v in self.data.items()})

    def is_zero(self) -> bool:
        return all(vec_is_zero(v) for v in self.data.values())

    def first_nonzero(self):
        """Lexicographically first (index tuple, output coordinate) that is nonzero."""
        for idx in index_tuples(self.in_dims):
            v = self.data[idx]
            for l, c in enumerate(v):
                if c:
                    return idx, l
        return None

    def _check_shape(self, other: "MultiTable"):
        if self.in_dims != other.in_dims or self.out_dim != other.out_dim:
            raise ValueError("table shape mismatch")
        if self.field != other.field:
            raise ValueError("table field mismatch")

    def __eq__(self, other):
        return (
            isinstance(other, MultiTable)
            and other.field == self.field
            and other.in_dims == self.in_dims
            and other.out_dim == self.out_dim
            and other.data == self.data
        )

    def __repr__(self):
        nz = sum(1 for v in self.data.values() if not vec_is_zero(v))
        return f"MultiTable(in={self.in_dims}, out={self.out_dim}, nonzero={nz})"


def last3_constraint_witness(t: MultiTable):
    """First violation of the two end-constraints, or None.

    A table of odd arity 2n+1 must vanish when its two arguments before the
    last coincide (checked in polarized form: diagonal zero plus antisymmetry
    of the pair) and must have vanishing cyclic sum over the last three
    arguments.
    """
    arity = t.arity
    if arity < 3:
        return None
    d = t.in_dims[0]
    if any(dd != d for dd in t.in_dims):
        raise ValueError("end constraints need equal slot dimensions")
    prefix_dims = t.in_dims[: arity - 3]
    for prefix in index_tuples(prefix_dims):
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    a = t.data[prefix + (i, j, k)]
                    if i == j and not vec_is_zero(a):
                        return ("pair_alternation", prefix + (i, j, k))
                    if i < j:
                        b = t.data[prefix + (j, i, k)]
                        if not vec_is_zero(vadd(a, b)):
                            return ("pair_alternation", prefix + (i, j, k))
                    s = vadd(vadd(a, t.data[prefix + (j, k, i)]), t.data[prefix + (k, i, j)])
                    if not vec_is_zero(s):
                        return ("cyclic_sum", prefix + (i, j, k))
    return None
