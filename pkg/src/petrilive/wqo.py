"""Upward- and downward-closed subsets of N^d given by finite antichains.

An :class:`UpSet` is represented by its minimal elements, a
:class:`DownSet` by the maximal elements of its ω-completion.  Every
constructor normalises its basis to a sorted antichain so equal sets compare
equal.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Tuple


@functools.total_ordering
class _Omega:
    """The limit value ω: above every natural, absorbing under +/-."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ω"

    def __reduce__(self):
        return (_Omega, ())

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("omega")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("ω - ω is undefined")
        return self

    def __rsub__(self, other):
        raise ArithmeticError("finite - ω is undefined")


OMEGA = _Omega()
OmegaMarking = Tuple[object, ...]


def is_omega(v) -> bool:
    return v is OMEGA


def leq(a, b) -> bool:
    """Componentwise ``a <= b`` (either side may contain ω)."""
    return all(x <= y for x, y in zip(a, b))


def _sort_key(vec):
    # ω sorts after every natural
    return tuple((1, 0) if v is OMEGA else (0, v) for v in vec)


def _minimal(vectors):
    out = []
    for v in sorted(set(vectors), key=lambda v: (sum(x for x in v if x is not OMEGA), _sort_key(v))):
        if not any(leq(b, v) for b in out):
            out.append(v)
    return tuple(sorted(out, key=_sort_key))


def _maximal(vectors):
    vs = sorted(set(vectors), key=_sort_key, reverse=True)
    out = []
    for v in vs:
        if not any(leq(v, b) for b in out):
            out = [b for b in out if not leq(b, v)]
            out.append(v)
    return tuple(sorted(out, key=_sort_key))


def _check_dim(dim, vec):
    if len(vec) != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {len(vec)}")


@dataclass(frozen=True)
class UpSet:
    """Upward closure of ``basis`` inside N^dim."""

    dim: int
    basis: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        for b in self.basis:
            _check_dim(self.dim, b)
            if any(v is OMEGA for v in b):
                raise ValueError("up-set basis elements must be finite")
        object.__setattr__(self, "basis", _minimal(tuple(map(tuple, self.basis))))

    def __contains__(self, m):
        return member_up(self, m)

    def to_json(self):
        return [list(b) for b in self.basis]


@dataclass(frozen=True)
class DownSet:
    """Downward closure (inside N^dim) of the ω-vectors in ``basis``."""

    dim: int
    basis: Tuple[OmegaMarking, ...]

    def __post_init__(self):
        for b in self.basis:
            _check_dim(self.dim, b)
        object.__setattr__(self, "basis", _maximal(tuple(map(tuple, self.basis))))

    def __contains__(self, m):
        return member_down(self, m)

    def to_json(self):
        return [[v if v is not OMEGA else "w" for v in b] for b in self.basis]

    @classmethod
    def from_json(cls, dim, data):
        return cls(dim, [tuple(OMEGA if v == "w" else int(v) for v in b) for b in data])

    @classmethod
    def full(cls, dim):
        return cls(dim, [(OMEGA,) * dim])


def minimize(ms: Iterable, dim=None) -> UpSet:
    ms = [tuple(m) for m in ms]
    if dim is None:
        if not ms:
            raise ValueError("dimension required for an empty set")
        dim = len(ms[0])
    return UpSet(dim, ms)


def maximize(oms: Iterable, dim=None) -> DownSet:
    oms = [tuple(m) for m in oms]
    if dim is None:
        if not oms:
            raise ValueError("dimension required for an empty set")
        dim = len(oms[0])
    return DownSet(dim, oms)


def member_up(u: UpSet, m) -> bool:
    _check_dim(u.dim, m)
    return any(leq(b, m) for b in u.basis)


def member_down(d: DownSet, m) -> bool:
    _check_dim(d.dim, m)
    return any(leq(m, b) for b in d.basis)


def complement_up(u: UpSet) -> DownSet:
    """Maximal elements of the complement of an up-set.

    Each coordinate of a maximal element of the complement is either ω or
    ``b(p) - 1`` for some basis element ``b``; candidates are the product of
    those choices, filtered by "below no basis element from above".
    """
    choices = []
    for p in range(u.dim):
        vals = sorted({b[p] - 1 for b in u.basis if b[p] >= 1})
        choices.append(vals + [OMEGA])
    keep = [v for v in itertools.product(*choices)
            if all(any(v[p] < b[p] for p in range(u.dim)) for b in u.basis)]
    return DownSet(u.dim, keep)


def complement_down(d: DownSet) -> UpSet:
    """Minimal elements of the complement of a down-set (dual of complement_up)."""
    choices = []
    for p in range(d.dim):
        vals = {b[p] + 1 for b in d.basis if b[p] is not OMEGA}
        choices.append(sorted(vals | {0}))
    keep = [v for v in itertools.product(*choices)
            if all(any(b[p] is not OMEGA and v[p] > b[p] for p in range(d.dim))
                   for b in d.basis)]
    return UpSet(d.dim, keep)


def union_down(a: DownSet, b: DownSet) -> DownSet:
    _check_dim(a.dim, (0,) * b.dim)
    return DownSet(a.dim, a.basis + b.basis)


def intersect_down(a: DownSet, b: DownSet) -> DownSet:
    _check_dim(a.dim, (0,) * b.dim)
    return DownSet(a.dim, [tuple(map(min, x, y)) for x in a.basis for y in b.basis])


def union_up(a: UpSet, b: UpSet) -> UpSet:
    _check_dim(a.dim, (0,) * b.dim)
    return UpSet(a.dim, a.basis + b.basis)


def intersect_up(a: UpSet, b: UpSet) -> UpSet:
    _check_dim(a.dim, (0,) * b.dim)
    return UpSet(a.dim, [tuple(map(max, x, y)) for x in a.basis for y in b.basis])


def is_antichain(vectors) -> bool:
    vs = list(vectors)
    return all(not leq(x, y) for i, x in enumerate(vs) for j, y in enumerate(vs) if i != j)
