"""Linear and semilinear subsets of N^d.

A :class:`LinearSet` is ``{base + x1*p1 + ... + xk*pk : xi in N}``; a
:class:`SemilinearSet` is a finite union of them.  Membership is decided by
bounded search over coefficients.  Set-level questions (universality,
inclusion, disjointness from a down-set) are turned into Presburger
sentences and decided by :mod:`petrilive.presburger`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterator, List, Optional, Sequence, Tuple

from . import presburger as pb
from .errors import BudgetError, InputError
from .wqo import OMEGA, DownSet

Vector = Tuple[int, ...]

DEFAULT_DOWNSET_LIMIT = 4096


@dataclass(frozen=True)
class LinearSet:
    base: Vector
    periods: Tuple[Vector, ...] = ()
    certificate: Optional[object] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "periods", tuple(tuple(p) for p in self.periods))
        for p in self.periods:
            if len(p) != len(self.base):
                raise InputError("period dimension differs from base dimension")
        for v in (self.base, *self.periods):
            if any(x < 0 for x in v):
                raise InputError("linear set vectors must be non-negative")

    @property
    def dim(self):
        return len(self.base)

    def point(self, coeffs: Sequence[int]) -> Vector:
        out = list(self.base)
        for x, p in zip(coeffs, self.periods):
            if x:
                for i, v in enumerate(p):
                    out[i] += x * v
        return tuple(out)

    def to_json(self):
        return {"base": list(self.base), "periods": [list(p) for p in self.periods]}


@dataclass(frozen=True)
class SemilinearSet:
    dim: int
    components: Tuple[LinearSet, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        for c in self.components:
            if c.dim != self.dim:
                raise InputError("component dimension differs from set dimension")

    def __contains__(self, v):
        return member(self, v)

    def __or__(self, other):
        return union(self, other)

    def to_json(self):
        return {"dim": self.dim, "components": [c.to_json() for c in self.components]}

    @classmethod
    def from_json(cls, data):
        comps = [LinearSet(tuple(c["base"]), tuple(map(tuple, c.get("periods", []))))
                 for c in data["components"]]
        dim = data.get("dim", comps[0].dim if comps else 0)
        return cls(dim, comps)

    @classmethod
    def of(cls, *components, dim=None):
        comps = [c if isinstance(c, LinearSet) else LinearSet(*c) for c in components]
        if dim is None:
            dim = comps[0].dim
        return cls(dim, comps)


def union(a: SemilinearSet, b: SemilinearSet) -> SemilinearSet:
    if a.dim != b.dim:
        raise InputError("dimension mismatch")
    return SemilinearSet(a.dim, a.components + b.components)


# Membership -----------------------------------------------------------

def linear_coefficients(ls: LinearSet, v: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Coefficients ``x`` with ``ls.point(x) == v``, or None.

    Depth-first over periods; each coefficient is bounded by the remaining
    slack on the coordinates where the period is non-zero.
    """
    return solve_coefficients(ls.base, ls.periods, v)


def solve_coefficients(base, periods, v) -> Optional[Tuple[int, ...]]:
    """:func:`linear_coefficients` on raw tuples (no validation)."""
    rest = [a - b for a, b in zip(v, base)]
    if any(r < 0 for r in rest):
        return None
    k = len(periods)
    # periods that are zero cannot help; fix their coefficient at 0
    order = [i for i in range(k) if any(periods[i])]
    # coordinates touched by each remaining suffix of periods
    touched = [set() for _ in range(len(order) + 1)]
    for j in range(len(order) - 1, -1, -1):
        touched[j] = touched[j + 1] | {c for c, x in enumerate(periods[order[j]]) if x}
    coeffs = [0] * k
    failed = set()  # (j, rest) states already known to have no solution

    def search(j):
        if j == len(order):
            return all(r == 0 for r in rest)
        # coordinates no later period touches must already be exact
        for c in range(len(rest)):
            if rest[c] and c not in touched[j]:
                return False
        key = (j, tuple(rest))
        if key in failed:
            return False
        p = periods[order[j]]
        cap = min(rest[c] // x for c, x in enumerate(p) if x)
        for n in range(cap, -1, -1):
            if n:
                for c, x in enumerate(p):
                    rest[c] -= n * x
            coeffs[order[j]] = n
            if search(j + 1):
                return True
            if n:
                for c, x in enumerate(p):
                    rest[c] += n * x
        coeffs[order[j]] = 0
        failed.add(key)
        return False

    return tuple(coeffs) if search(0) else None


def locate(s: SemilinearSet, v: Sequence[int]):
    """``(component index, coefficients)`` of the first component containing ``v``."""
    if len(v) != s.dim:
        raise InputError(f"dimension mismatch: set has {s.dim}, vector has {len(v)}")
    v = tuple(v)
    for i, c in enumerate(s.components):
        x = linear_coefficients(c, v)
        if x is not None:
            return i, x
    return None


def member(s: SemilinearSet, v: Sequence[int]) -> bool:
    return locate(s, v) is not None


def iter_points(s: SemilinearSet, max_total: Optional[int] = None
                ) -> Iterator[Tuple[int, Tuple[int, ...], Vector]]:
    """Yield ``(component, coefficients, vector)`` by increasing coefficient sum.

    The stream is infinite for sets with non-zero periods unless
    ``max_total`` caps the coefficient sum.
    """
    for total in itertools.count():
        if max_total is not None and total > max_total:
            return
        produced = False
        for i, c in enumerate(s.components):
            k = len(c.periods)
            if k == 0:
                if total == 0:
                    produced = True
                    yield i, (), c.base
                continue
            for x in _compositions(total, k):
                produced = True
                yield i, x, c.point(x)
        if not produced and total > 0:
            return


def _compositions(total, k):
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


# Formulas -------------------------------------------------------------

def to_formula(s: SemilinearSet, variables: Sequence[str]) -> pb.Formula:
    """Existential formula over ``variables`` describing ``s``."""
    if len(variables) != s.dim:
        raise InputError("need one variable per coordinate")
    disjuncts = []
    for c in s.components:
        coeff_vars = [pb.fresh("_x") for _ in c.periods]
        eqs = []
        for j, v in enumerate(variables):
            rhs = pb.Term.lit(c.base[j])
            for xv, p in zip(coeff_vars, c.periods):
                if p[j]:
                    rhs = rhs + pb.Term.var(xv, p[j])
            eqs.append(pb.Eq(pb.Term.var(v), rhs))
        disjuncts.append(pb.Exists(coeff_vars, pb.And(*eqs)))
    return pb.Or(*disjuncts)


def downset_formula(d: DownSet, variables: Sequence[str]) -> pb.Formula:
    parts = []
    for b in d.basis:
        parts.append(pb.And(*[pb.Le(pb.Term.var(v), bound)
                              for v, bound in zip(variables, b) if bound is not OMEGA]))
    return pb.Or(*parts)


def _qf(s: SemilinearSet, variables, max_nodes) -> pb.Formula:
    # each component eliminated separately keeps formulas small
    return pb.Or(*[pb.eliminate_quantifiers(to_formula(SemilinearSet(s.dim, [c]), variables),
                                            max_nodes)
                   for c in s.components])


def _vars(dim, prefix="_v"):
    return [pb.fresh(prefix) for _ in range(dim)]


def _exists_all(variables, body, max_nodes) -> bool:
    """Decide ``exists variables. body`` for a quantifier-free body."""
    return pb.exists_block(body, variables, max_nodes)


def is_universal(s: SemilinearSet, max_nodes: int = pb.DEFAULT_MAX_NODES) -> bool:
    vs = _vars(s.dim)
    return not _exists_all(vs, pb.Not(_qf(s, vs, max_nodes)), max_nodes)


def includes(a: SemilinearSet, b: SemilinearSet, max_nodes: int = pb.DEFAULT_MAX_NODES) -> bool:
    """Is ``b`` a subset of ``a``?"""
    if a.dim != b.dim:
        raise InputError("dimension mismatch")
    vs = _vars(a.dim)
    not_a = pb.Not(_qf(a, vs, max_nodes))
    for c in b.components:
        body = pb.And(_qf(SemilinearSet(b.dim, [c]), vs, max_nodes), not_a)
        if _exists_all(vs, body, max_nodes):
            return False
    return True


def equivalent(a: SemilinearSet, b: SemilinearSet, max_nodes: int = pb.DEFAULT_MAX_NODES) -> bool:
    return includes(a, b, max_nodes) and includes(b, a, max_nodes)


def empty_intersection_with(s: SemilinearSet, d: DownSet,
                            max_nodes: int = pb.DEFAULT_MAX_NODES) -> bool:
    if s.dim != d.dim:
        raise InputError("dimension mismatch")
    vs = _vars(s.dim)
    dphi = downset_formula(d, vs)
    for c in s.components:
        if _exists_all(vs, pb.And(_qf(SemilinearSet(s.dim, [c]), vs, max_nodes), dphi), max_nodes):
            return False
    return True


def is_empty(s: SemilinearSet) -> bool:
    return not s.components


def diagonal(dim: int) -> Iterator[Vector]:
    """All of N^dim by increasing sum, lexicographically within a sum."""
    if dim == 0:
        yield ()
        return
    for total in itertools.count():
        for x in _compositions(total, dim):
            yield x


def witness_not_member(s: SemilinearSet, max_nodes: int = pb.DEFAULT_MAX_NODES
                       ) -> Optional[Vector]:
    """First vector (diagonal order) outside ``s``; None when ``s`` is universal."""
    if is_universal(s, max_nodes):
        return None
    for v in diagonal(s.dim):
        if not member(s, v):
            return v
    raise AssertionError("unreachable: non-universal set has a non-member")


# Constructors ---------------------------------------------------------

def from_downset(d: DownSet, limit: int = DEFAULT_DOWNSET_LIMIT) -> SemilinearSet:
    """One period-carrying linear set per point of the finite coordinates.

    For basis element ``b``: ω-coordinates get base 0 and a unit period,
    finite coordinates are enumerated over ``0..b(p)``.
    """
    comps = []
    seen = set()
    for b in d.basis:
        finite = [p for p in range(d.dim) if b[p] is not OMEGA]
        count = 1
        for p in finite:
            count *= b[p] + 1
        if len(comps) + count > limit:
            raise BudgetError(f"down-set expands to more than {limit} linear sets")
        periods = tuple(tuple(int(q == p) for q in range(d.dim))
                        for p in range(d.dim) if b[p] is OMEGA)
        for vals in itertools.product(*[range(b[p] + 1) for p in finite]):
            base = [0] * d.dim
            for p, v in zip(finite, vals):
                base[p] = v
            key = (tuple(base), periods)
            if key not in seen:
                seen.add(key)
                comps.append(LinearSet(tuple(base), periods))
    return SemilinearSet(d.dim, comps)


def project(s: SemilinearSet, coords: Sequence[int]) -> SemilinearSet:
    """Keep only ``coords`` (in the given order)."""
    coords = list(coords)
    for c in coords:
        if not 0 <= c < s.dim:
            raise InputError(f"coordinate {c} out of range")
    comps = []
    for c in s.components:
        comps.append(replace(c, base=tuple(c.base[i] for i in coords),
                             periods=tuple(tuple(p[i] for i in coords) for p in c.periods),
                             certificate=None))
    return SemilinearSet(len(coords), comps)
