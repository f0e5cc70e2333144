"""A small Presburger arithmetic kernel over the naturals.

Formulas are built from linear terms with integer coefficients and three
atom kinds, normalised at construction:

* ``Le(t)``  meaning ``t <= 0``
* ``Eq(t)``  meaning ``t == 0``
* ``Div(d, t)`` meaning ``d | t`` (``neg=True`` for ``not d | t``)

Quantifiers range over N.  :func:`eliminate_exists` removes one existential
with Cooper's method (after conjoining ``x >= 0``); :func:`decide` evaluates
a closed sentence by eliminating quantifiers innermost first.

Variables are plain strings.  Because elimination always works on
quantifier-free bodies, shadowed bound names need no renaming.
"""

from __future__ import annotations

import itertools
import math
import re
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .errors import BudgetError, InputError

DEFAULT_MAX_NODES = 10**6

_fresh = itertools.count()


def fresh(prefix="_k") -> str:
    """A variable name that cannot clash with user identifiers."""
    return f"{prefix}#{next(_fresh)}"


# Terms ----------------------------------------------------------------

class Term:
    """``sum(c * v) + const`` with integer coefficients; no zero coefficients."""

    __slots__ = ("coeffs", "const", "_hash")

    def __init__(self, coeffs=(), const=0):
        if isinstance(coeffs, Mapping):
            coeffs = coeffs.items()
        self.coeffs = tuple(sorted((v, c) for v, c in coeffs if c))
        self.const = const
        self._hash = hash((self.coeffs, const))

    @classmethod
    def var(cls, v, c=1):
        return cls(((v, c),), 0)

    @classmethod
    def lit(cls, n):
        return cls((), n)

    def __eq__(self, other):
        return (isinstance(other, Term) and self.coeffs == other.coeffs
                and self.const == other.const)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        parts = [f"{c}*{v}" if c != 1 else v for v, c in self.coeffs]
        if self.const or not parts:
            parts.append(str(self.const))
        return " + ".join(parts)

    def coeff(self, v) -> int:
        for name, c in self.coeffs:
            if name == v:
                return c
        return 0

    def vars(self):
        return {v for v, _ in self.coeffs}

    def _combine(self, other, k):
        d = dict(self.coeffs)
        for v, c in other.coeffs:
            d[v] = d.get(v, 0) + k * c
        return Term(d, self.const + k * other.const)

    def __add__(self, other):
        if isinstance(other, int):
            return Term(self.coeffs, self.const + other)
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return Term(self.coeffs, self.const - other)
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Term([(v, -c) for v, c in self.coeffs], -self.const)

    def __mul__(self, k):
        if not isinstance(k, int):
            raise TypeError("terms can only be scaled by integers")
        return Term([(v, c * k) for v, c in self.coeffs], self.const * k)

    __rmul__ = __mul__

    def subst(self, v, term: "Term") -> "Term":
        c = self.coeff(v)
        if not c:
            return self
        d = dict(self.coeffs)
        del d[v]
        for w, cw in term.coeffs:
            d[w] = d.get(w, 0) + c * cw
        return Term(d, self.const + c * term.const)

    def value(self, env) -> int:
        try:
            return self.const + sum(c * env[v] for v, c in self.coeffs)
        except KeyError as exc:
            raise InputError(f"unbound variable {exc.args[0]}") from None


def as_term(x) -> Term:
    if isinstance(x, Term):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not terms")
    if isinstance(x, int):
        return Term.lit(x)
    if isinstance(x, str):
        return Term.var(x)
    raise TypeError(f"cannot convert {x!r} to a term")


# Formulas -------------------------------------------------------------

class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


class _Const(Formula):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __repr__(self):
        return "true" if self.value else "false"


TRUE = _Const(True)
FALSE = _Const(False)


class _Atom(Formula):
    __slots__ = ("term", "_hash")


class LeAtom(_Atom):
    __slots__ = ()

    def __init__(self, term):
        self.term = term
        self._hash = hash(("le", term))

    def __eq__(self, other):
        return type(other) is LeAtom and other.term == self.term

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"({self.term} <= 0)"


class EqAtom(_Atom):
    __slots__ = ()

    def __init__(self, term):
        self.term = term
        self._hash = hash(("eq", term))

    def __eq__(self, other):
        return type(other) is EqAtom and other.term == self.term

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"({self.term} = 0)"


class DivAtom(_Atom):
    __slots__ = ("d", "neg")

    def __init__(self, d, term, neg=False):
        self.d = d
        self.term = term
        self.neg = neg
        self._hash = hash(("div", d, term, neg))

    def __eq__(self, other):
        return (type(other) is DivAtom and other.d == self.d and other.term == self.term
                and other.neg == self.neg)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"({'not ' if self.neg else ''}{self.d} | {self.term})"


class _Junction(Formula):
    __slots__ = ("args", "_hash")

    def __init__(self, args):
        self.args = args
        self._hash = hash((type(self).__name__, args))

    def __eq__(self, other):
        return type(other) is type(self) and other.args == self.args

    def __hash__(self):
        return self._hash


class AndF(_Junction):
    __slots__ = ()

    def __repr__(self):
        return "(" + " & ".join(map(repr, self.args)) + ")"


class OrF(_Junction):
    __slots__ = ()

    def __repr__(self):
        return "(" + " | ".join(map(repr, self.args)) + ")"


class NotF(Formula):
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg

    def __eq__(self, other):
        return type(other) is NotF and other.arg == self.arg

    def __hash__(self):
        return hash(("not", self.arg))

    def __repr__(self):
        return f"~{self.arg!r}"


class _Quant(Formula):
    __slots__ = ("var", "body")

    def __init__(self, var, body):
        self.var = var
        self.body = body

    def __eq__(self, other):
        return type(other) is type(self) and (other.var, other.body) == (self.var, self.body)

    def __hash__(self):
        return hash((type(self).__name__, self.var, self.body))


class ExistsF(_Quant):
    __slots__ = ()

    def __repr__(self):
        return f"(E {self.var}. {self.body!r})"


class ForallF(_Quant):
    __slots__ = ()

    def __repr__(self):
        return f"(A {self.var}. {self.body!r})"


# Smart constructors ---------------------------------------------------

def _content(term: Term) -> int:
    g = 0
    for _, c in term.coeffs:
        g = math.gcd(g, c)
    return g


def Le(a, b=0) -> Formula:
    """``a <= b``."""
    t = as_term(a) - as_term(b)
    if not t.coeffs:
        return TRUE if t.const <= 0 else FALSE
    # all variables range over N
    if t.const <= 0 and all(c < 0 for _, c in t.coeffs):
        return TRUE
    if t.const > 0 and all(c > 0 for _, c in t.coeffs):
        return FALSE
    g = _content(t)
    if g > 1:
        # g*s + c <= 0  iff  s + ceil(c/g) <= 0
        t = Term([(v, c // g) for v, c in t.coeffs], -((-t.const) // g))
    return LeAtom(t)


def Ge(a, b=0) -> Formula:
    return Le(b, a)


def Lt(a, b=0) -> Formula:
    return Le(as_term(a) + 1, b)


def Gt(a, b=0) -> Formula:
    return Lt(b, a)


def Eq(a, b=0) -> Formula:
    t = as_term(a) - as_term(b)
    if not t.coeffs:
        return TRUE if t.const == 0 else FALSE
    signs = {c > 0 for _, c in t.coeffs}
    if len(signs) == 1 and t.const and (t.const > 0) in signs:
        return FALSE
    g = _content(t)
    if t.const % g:
        return FALSE
    if g > 1:
        t = Term([(v, c // g) for v, c in t.coeffs], t.const // g)
    if t.coeffs[0][1] < 0:
        t = -t
    return EqAtom(t)


def Divides(d: int, a, neg=False) -> Formula:
    if not isinstance(d, int) or d < 1:
        raise InputError(f"divisor must be a positive integer, got {d!r}")
    t = as_term(a)
    coeffs = [(v, c % d) for v, c in t.coeffs]
    const = t.const % d
    g = d
    for _, c in coeffs:
        g = math.gcd(g, c)
    if g == d:
        # no variable survives modulo d
        return FALSE if (const % d == 0) == neg else TRUE
    if const % g:
        # g | d and g | coefficients, but g does not divide the constant
        return TRUE if neg else FALSE
    if g > 1:
        d //= g
        coeffs = [(v, c // g) for v, c in coeffs]
        const //= g
    return DivAtom(d, Term(coeffs, const), neg)


def Ne(a, b=0) -> Formula:
    return Not(Eq(a, b))


def _bound_merge(atoms, conj):
    """Keep one Le per linear part: tightest in a conjunction, loosest in a disjunction."""
    best: Dict[tuple, int] = {}
    rest = []
    for a in atoms:
        if type(a) is LeAtom:
            key = a.term.coeffs
            c = a.term.const
            if key in best:
                best[key] = max(best[key], c) if conj else min(best[key], c)
            else:
                best[key] = c
        else:
            rest.append(a)
    for key, c in best.items():
        neg_key = tuple((v, -k) for v, k in key)
        if neg_key in best:
            # s + c <= 0 and -s + c' <= 0  i.e.  c' <= s <= -c
            c2 = best[neg_key]
            if conj and c + c2 > 0:
                return None
            if not conj and c + c2 <= 1:
                return None
    return [LeAtom(Term(key, c)) for key, c in best.items()] + rest


def And(*fs) -> Formula:
    return _junction(fs, conj=True)


def Or(*fs) -> Formula:
    return _junction(fs, conj=False)


def _junction(fs, conj):
    cls = AndF if conj else OrF
    unit, zero = (TRUE, FALSE) if conj else (FALSE, TRUE)
    flat = []
    seen = set()
    for f in fs:
        if isinstance(f, Iterable) and not isinstance(f, Formula):
            f = _junction(tuple(f), conj)
        if f is unit:
            continue
        if f is zero:
            return zero
        parts = f.args if type(f) is cls else (f,)
        for g in parts:
            if g not in seen:
                seen.add(g)
                flat.append(g)
    merged = _bound_merge(flat, conj)
    if merged is None:
        return zero
    if len(merged) < len(flat):
        flat = merged
    # complementary divisibility literals
    for g in flat:
        if type(g) is DivAtom and DivAtom(g.d, g.term, not g.neg) in seen:
            return zero
    if not flat:
        return unit
    if len(flat) == 1:
        return flat[0]
    flat.sort(key=_order_key)
    return cls(tuple(flat))


def _order_key(f):
    return (type(f).__name__, repr(f))


def Not(f: Formula) -> Formula:
    if f is TRUE:
        return FALSE
    if f is FALSE:
        return TRUE
    if type(f) is NotF:
        return f.arg
    if type(f) is LeAtom:
        return LeAtom(-f.term + 1)
    if type(f) is DivAtom:
        return DivAtom(f.d, f.term, not f.neg)
    return NotF(f)


def Implies(a, b) -> Formula:
    return Or(Not(a), b)


def Iff(a, b) -> Formula:
    return And(Implies(a, b), Implies(b, a))


def Exists(vs, body) -> Formula:
    if isinstance(vs, str):
        vs = [vs]
    for v in reversed(list(vs)):
        body = ExistsF(v, body)
    return body


def Forall(vs, body) -> Formula:
    if isinstance(vs, str):
        vs = [vs]
    for v in reversed(list(vs)):
        body = ForallF(v, body)
    return body


# Inspection -----------------------------------------------------------

def free_vars(f: Formula) -> set:
    if isinstance(f, _Atom):
        return f.term.vars()
    if isinstance(f, _Junction):
        out = set()
        for g in f.args:
            out |= free_vars(g)
        return out
    if type(f) is NotF:
        return free_vars(f.arg)
    if isinstance(f, _Quant):
        return free_vars(f.body) - {f.var}
    return set()


def size(f: Formula) -> int:
    if isinstance(f, _Junction):
        return 1 + sum(size(g) for g in f.args)
    if type(f) is NotF:
        return 1 + size(f.arg)
    if isinstance(f, _Quant):
        return 1 + size(f.body)
    return 1


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, _Quant):
        return False
    if isinstance(f, _Junction):
        return all(is_quantifier_free(g) for g in f.args)
    if type(f) is NotF:
        return is_quantifier_free(f.arg)
    return True


def evaluate(f: Formula, env: Mapping[str, int]) -> bool:
    """Truth value of a quantifier-free formula under ``env``."""
    if type(f) is _Const:
        return f.value
    if type(f) is LeAtom:
        return f.term.value(env) <= 0
    if type(f) is EqAtom:
        return f.term.value(env) == 0
    if type(f) is DivAtom:
        return (f.term.value(env) % f.d == 0) != f.neg
    if type(f) is AndF:
        return all(evaluate(g, env) for g in f.args)
    if type(f) is OrF:
        return any(evaluate(g, env) for g in f.args)
    if type(f) is NotF:
        return not evaluate(f.arg, env)
    raise InputError("evaluate does not accept quantifiers; use decide")


# Transformations ------------------------------------------------------

def nnf(f: Formula, negate=False) -> Formula:
    """Negation normal form of a quantifier-free formula (``Not`` only on atoms)."""
    t = type(f)
    if t is _Const:
        return (FALSE if f.value else TRUE) if negate else f
    if t is LeAtom:
        return LeAtom(-f.term + 1) if negate else f
    if t is EqAtom:
        return Or(LeAtom(f.term + 1), LeAtom(-f.term + 1)) if negate else f
    if t is DivAtom:
        return DivAtom(f.d, f.term, not f.neg) if negate else f
    if t is NotF:
        return nnf(f.arg, not negate)
    if t is AndF:
        parts = [nnf(g, negate) for g in f.args]
        return Or(*parts) if negate else And(*parts)
    if t is OrF:
        parts = [nnf(g, negate) for g in f.args]
        return And(*parts) if negate else Or(*parts)
    raise InputError("nnf expects a quantifier-free formula")


def _map_atoms(f: Formula, fn, cache) -> Formula:
    hit = cache.get(f)
    if hit is not None:
        return hit
    t = type(f)
    if isinstance(f, _Atom):
        out = fn(f)
    elif t is AndF:
        out = And(*[_map_atoms(g, fn, cache) for g in f.args])
    elif t is OrF:
        out = Or(*[_map_atoms(g, fn, cache) for g in f.args])
    elif t is NotF:
        out = Not(_map_atoms(f.arg, fn, cache))
    else:
        out = f
    cache[f] = out
    return out


def _rebuild(atom, term):
    t = type(atom)
    if t is LeAtom:
        return Le(term)
    if t is EqAtom:
        return Eq(term)
    return Divides(atom.d, term, atom.neg)


def substitute(f: Formula, v: str, term) -> Formula:
    term = as_term(term)
    return _map_atoms(f, lambda a: _rebuild(a, a.term.subst(v, term)) if a.term.coeff(v) else a, {})


def _atoms(f, out):
    if isinstance(f, _Atom):
        out.add(f)
    elif isinstance(f, _Junction):
        for g in f.args:
            _atoms(g, out)
    elif type(f) is NotF:
        _atoms(f.arg, out)
    return out


class _Guard:
    def __init__(self, max_nodes):
        self.max_nodes = max_nodes

    def check(self, n):
        if n > self.max_nodes:
            raise BudgetError(f"formula grew beyond {self.max_nodes} nodes")


def eliminate_exists(f: Formula, v: str, max_nodes: int = DEFAULT_MAX_NODES) -> Formula:
    """Quantifier-free formula equivalent over N to ``exists v. f``."""
    if not is_quantifier_free(f):
        raise InputError("eliminate_exists expects a quantifier-free body")
    return _elim(nnf(f), v, _Guard(max_nodes))


def _elim(f, x, guard) -> Formula:
    if x not in free_vars(f):
        return f
    if type(f) is OrF:
        out = Or(*[_elim(g, x, guard) for g in f.args])
        guard.check(size(out))
        return out
    conj = f.args if type(f) is AndF else (f,)
    indep = [g for g in conj if x not in free_vars(g)]
    dep = [g for g in conj if x in free_vars(g)]
    eqs = [g for g in dep if type(g) is EqAtom]
    if eqs:
        eq = min(eqs, key=lambda g: (abs(g.term.coeff(x)), repr(g)))
        core = _elim_equality(eq, [g for g in dep if g is not eq], x)
    else:
        # distribute over a single disjunction when it is the only obstacle
        ors = [g for g in dep if type(g) is OrF]
        if len(ors) == 1 and any(
                type(h) is EqAtom or (type(h) is AndF and any(type(k) is EqAtom for k in h.args))
                for h in ors[0].args):
            rest = [g for g in dep if g is not ors[0]]
            core = Or(*[_elim(nnf(And(h, *rest)), x, guard) for h in ors[0].args])
        else:
            core = _cooper(And(*dep), x, guard)
    out = And(core, *indep)
    guard.check(size(out))
    return out


def _elim_equality(eq: EqAtom, others, x) -> Formula:
    """exists x>=0. (a*x + s = 0 and G)  with a > 0 after sign normalisation."""
    a = eq.term.coeff(x)
    s = eq.term.subst(x, Term.lit(0))
    if a < 0:
        a, s = -a, -s
    # x = -s / a
    parts = [Divides(a, s), Le(s)]  # a | s and x >= 0
    for g in others:
        parts.append(_map_atoms(g, lambda at: _eq_subst(at, x, a, s), {}))
    return And(*parts)


def _eq_subst(atom, x, a, s):
    c = atom.term.coeff(x)
    if not c:
        return atom
    r = atom.term.subst(x, Term.lit(0))
    new = r * a - s * c  # a*(c*x + r) with a*x = -s
    t = type(atom)
    if t is LeAtom:
        return Le(new)
    if t is EqAtom:
        return Eq(new)
    return Divides(atom.d * a, new, atom.neg)


def _cooper(f: Formula, x, guard) -> Formula:
    # x >= 0, built raw: the smart constructor would fold it to true
    f = And(f, LeAtom(-Term.var(x)))
    atoms = [a for a in _atoms(f, set()) if a.term.coeff(x)]
    lcm = 1
    for a in atoms:
        lcm = math.lcm(lcm, abs(a.term.coeff(x)))

    def unitize(atom):
        c = atom.term.coeff(x)
        if not c:
            return atom
        k = lcm // abs(c)
        r = atom.term.subst(x, Term.lit(0)) * k
        t = r + Term.var(x, 1 if c > 0 else -1)
        if type(atom) is LeAtom:
            return LeAtom(t)
        if type(atom) is EqAtom:
            return EqAtom(t)
        return Divides(atom.d * k, t, atom.neg)

    g = _map_atoms(f, unitize, {})
    if lcm > 1:
        g = And(g, Divides(lcm, Term.var(x)))
    if x not in free_vars(g):
        return g

    lower, upper = set(), set()
    delta = 1
    for a in _atoms(g, set()):
        c = a.term.coeff(x)
        if not c:
            continue
        r = a.term.subst(x, Term.lit(0))
        if type(a) is LeAtom:
            if c < 0:          # -x + r <= 0  ->  x > r - 1
                lower.add(r - 1)
            else:              # x + r <= 0   ->  x < -r + 1
                upper.add(-r + 1)
        elif type(a) is EqAtom:
            root = -r if c > 0 else r
            lower.add(root - 1)
            upper.add(root + 1)
        else:
            delta = math.lcm(delta, a.d)

    use_lower = len(lower) <= len(upper)
    points = sorted(lower if use_lower else upper, key=repr)

    def at_infinity(atom):
        c = atom.term.coeff(x)
        if not c or type(atom) is DivAtom:
            return atom
        if type(atom) is EqAtom:
            return FALSE
        lower_bound = c < 0
        return FALSE if lower_bound == use_lower else TRUE

    inf = _map_atoms(g, at_infinity, {})
    guard.check(size(g) * delta * (len(points) + 1))
    disjuncts = []
    if inf is not FALSE:
        for j in range(1, delta + 1):
            disjuncts.append(substitute(inf, x, Term.lit(j if use_lower else -j)))
    for p in points:
        for j in range(1, delta + 1):
            disjuncts.append(substitute(g, x, p + j if use_lower else p - j))
            if disjuncts[-1] is TRUE:
                return TRUE
    return Or(*disjuncts)


def _pick(f, xs):
    conj = f.args if type(f) is AndF else (f,)
    for g in conj:
        if type(g) is EqAtom:
            for x in xs:
                if g.term.coeff(x):
                    return x
    counts = {x: 0 for x in xs}
    for a in _atoms(f, set()):
        for x in xs:
            if a.term.coeff(x):
                counts[x] += 1
    return min(xs, key=lambda x: (counts[x], x))


def exists_block(f: Formula, variables, max_nodes: int = DEFAULT_MAX_NODES) -> bool:
    """Truth of ``exists variables. f`` for quantifier-free ``f`` closed by them.

    Variables are eliminated greedily (equalities first) and top-level
    disjunctions are decided one branch at a time.
    """
    if not is_quantifier_free(f):
        raise InputError("exists_block expects a quantifier-free body")
    extra = free_vars(f) - set(variables)
    if extra:
        raise InputError(f"body has free variables outside the block: {sorted(extra)}")
    guard = _Guard(max_nodes)

    def go(g):
        if g is TRUE:
            return True
        if g is FALSE:
            return False
        if type(g) is OrF:
            return any(go(h) for h in g.args)
        xs = sorted(free_vars(g))
        if not xs:
            return evaluate(g, {})
        return go(_elim(g, _pick(g, xs), guard))

    return go(nnf(f))


def eliminate_quantifiers(f: Formula, max_nodes: int = DEFAULT_MAX_NODES) -> Formula:
    """Equivalent quantifier-free formula (innermost quantifier first)."""
    t = type(f)
    if t is ExistsF:
        return eliminate_exists(eliminate_quantifiers(f.body, max_nodes), f.var, max_nodes)
    if t is ForallF:
        body = eliminate_quantifiers(f.body, max_nodes)
        return nnf(eliminate_exists(Not(body), f.var, max_nodes), negate=True)
    if t is AndF:
        return And(*[eliminate_quantifiers(g, max_nodes) for g in f.args])
    if t is OrF:
        return Or(*[eliminate_quantifiers(g, max_nodes) for g in f.args])
    if t is NotF:
        return Not(eliminate_quantifiers(f.arg, max_nodes))
    return f


def decide(f: Formula, max_nodes: int = DEFAULT_MAX_NODES) -> bool:
    """Truth of a closed sentence over N."""
    fv = free_vars(f)
    if fv:
        raise InputError(f"sentence has free variables: {sorted(fv)}")
    return evaluate(eliminate_quantifiers(f, max_nodes), {})


# S-expression syntax --------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\()|(\))|([^\s()]+))")


def _tokens(text):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise InputError(f"cannot tokenize formula at offset {pos}")
        out.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def _read(tokens, i):
    if i >= len(tokens):
        raise InputError("unexpected end of formula")
    tok = tokens[i]
    if tok == "(":
        items = []
        i += 1
        while i < len(tokens) and tokens[i] != ")":
            item, i = _read(tokens, i)
            items.append(item)
        if i >= len(tokens):
            raise InputError("unbalanced parentheses")
        return items, i + 1
    if tok == ")":
        raise InputError("unexpected ')'")
    return tok, i + 1


def _to_term(x) -> Term:
    if isinstance(x, str):
        if re.fullmatch(r"-?[0-9]+", x):
            return Term.lit(int(x))
        return Term.var(x)
    if not x:
        raise InputError("empty term")
    op, args = x[0], x[1:]
    if op == "+":
        out = Term.lit(0)
        for a in args:
            out = out + _to_term(a)
        return out
    if op == "-":
        if len(args) == 1:
            return -_to_term(args[0])
        out = _to_term(args[0])
        for a in args[1:]:
            out = out - _to_term(a)
        return out
    if op == "*":
        k = None
        rest = []
        for a in args:
            if isinstance(a, str) and re.fullmatch(r"-?[0-9]+", a):
                k = int(a) * (k or 1)
            else:
                rest.append(a)
        if len(rest) > 1:
            raise InputError("multiplication of variables is not Presburger")
        return _to_term(rest[0]) * (k if k is not None else 1) if rest else Term.lit(k)
    raise InputError(f"unknown term operator {op!r}")


_CMP = {"<=": Le, ">=": Ge, "<": Lt, ">": Gt, "=": Eq, "!=": Ne}


def _to_formula(x) -> Formula:
    if isinstance(x, str):
        if x == "true":
            return TRUE
        if x == "false":
            return FALSE
        raise InputError(f"expected a formula, got {x!r}")
    if not x:
        raise InputError("empty formula")
    op, args = x[0], x[1:]
    if op in _CMP:
        if len(args) != 2:
            raise InputError(f"{op} takes two terms")
        return _CMP[op](_to_term(args[0]), _to_term(args[1]))
    if op == "divides":
        if len(args) != 2:
            raise InputError("divides takes a constant and a term")
        return Divides(int(args[0]), _to_term(args[1]))
    if op == "and":
        return And(*map(_to_formula, args))
    if op == "or":
        return Or(*map(_to_formula, args))
    if op == "not":
        return Not(_to_formula(args[0]))
    if op == "=>":
        return Implies(_to_formula(args[0]), _to_formula(args[1]))
    if op in ("exists", "forall"):
        if len(args) != 2:
            raise InputError(f"{op} takes a variable list and a body")
        vs = [args[0]] if isinstance(args[0], str) else args[0]
        body = _to_formula(args[1])
        return Exists(vs, body) if op == "exists" else Forall(vs, body)
    raise InputError(f"unknown formula operator {op!r}")


def parse_formula(text: str) -> Formula:
    """Parse the S-expression syntax documented in the README."""
    tokens = _tokens(text)
    tree, i = _read(tokens, 0)
    if i != len(tokens):
        raise InputError("trailing input after formula")
    return _to_formula(tree)
