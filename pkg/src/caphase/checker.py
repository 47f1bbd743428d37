"""Compile formulas to Büchi automata over the folded presentation and decide them.

Every compiled automaton reads one track per free variable, tracks sorted by
name, and accepts only tuples of valid configuration encodings. Closed
subformulas collapse to 0-track constants as soon as they are compiled, so
quantifier chains that end in a sentence never need a projection or a
complement. Counting quantifiers are sentence-valued and are evaluated
through :mod:`caphase.cardinality`.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import count

from . import automata as au
from . import ca
from . import cardinality as card
from . import logic as lg


class Unsat(ValueError):
    pass


class WitnessError(AssertionError):
    pass


@dataclass(frozen=True)
class _Const(lg.Formula):
    value: bool
    pos: int = field(default=0, compare=False)


@dataclass
class CompilationContext:
    rule: ca.CaRule
    predicates: ca.PredicateRegistry = None
    budget: int = au.DEFAULT_STATE_BUDGET
    cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.predicates is None:
            self.predicates = ca.PredicateRegistry(self.rule.states)
        if self.budget < 1:
            raise ValueError("state budget must be at least 1")
        self.presentation = ca.Presentation(self.rule)
        self._domains = {}
        self.stats = {"automata": 0, "max_states": 0}
        self.evaluated = []

    @property
    def symbols(self):
        return self.rule.pair_symbols

    def domain(self, names):
        """Tuples of configuration encodings on the tracks ``names``."""
        names = tuple(sorted(names))
        if names not in self._domains:
            diagonal = set(self.rule.diagonal_symbols)
            alphabet = au.Alphabet(tuple((n, self.symbols) for n in names))
            first = {x: (1,) for x in alphabet.letters if all(s in diagonal for s in x)}
            rest = {x: (1,) for x in alphabet.letters}
            self._domains[names] = au.BuchiAutomaton._raw(alphabet, [first, rest], 0, frozenset([1]))
        return self._domains[names]

    def note(self, a):
        self.stats["automata"] += 1
        self.stats["max_states"] = max(self.stats["max_states"], a.num_states)
        return a


def context(rule, predicates=None, budget=au.DEFAULT_STATE_BUDGET):
    if isinstance(rule, str):
        rule = ca.parse_rule(rule)
    registry = ca.PredicateRegistry(rule.states)
    for name, automaton in (predicates or {}).items():
        registry.register(name, automaton)
    return CompilationContext(rule, registry, budget)


# ------------------------------------------------------------ rewriting

def _all_vars(f):
    out = set(lg.free_vars(f))
    if isinstance(f, lg.QUANTIFIERS):
        out |= set(f.vars)
    for c in lg.children(f):
        out |= _all_vars(c)
    return out


def _rename_bound(f, free=()):
    """Give every binder that shadows a visible variable a fresh name."""
    used = _all_vars(f)
    ids = count(1)

    def fresh(v):
        while True:
            name = f"{v}_{next(ids)}"
            if name not in used:
                used.add(name)
                return name

    def go(g, env, visible):
        if isinstance(g, lg.Rel):
            return lg.Rel(env.get(g.src, g.src), env.get(g.dst, g.dst), g.pos)
        if isinstance(g, lg.Eq):
            return lg.Eq(env.get(g.left, g.left), env.get(g.right, g.right), g.pos)
        if isinstance(g, lg.Pred):
            return lg.Pred(g.name, env.get(g.var, g.var), g.pos)
        if isinstance(g, lg.Not):
            return lg.Not(go(g.body, env, visible), g.pos)
        if isinstance(g, lg.BINARY):
            return type(g)(go(g.left, env, visible), go(g.right, env, visible), g.pos)
        env = dict(env)
        names = []
        for v in g.vars:
            new = fresh(v) if v in visible else v
            env[v] = new
            names.append(new)
        names = tuple(names)
        inner = visible | set(names)
        if isinstance(g, lg.Haertig):
            return lg.Haertig(names, go(g.left, env, inner), go(g.right, env, inner), g.pos)
        body = go(g.body, env, inner)
        if isinstance(g, lg.ExistsCard):
            return lg.ExistsCard(g.card, names, body, g.pos)
        if isinstance(g, lg.ExistsMod):
            return lg.ExistsMod(g.t, g.k, names, body, g.pos)
        return type(g)(names, body, g.pos)

    return go(f, {}, frozenset(free))


def nnf(f, positive=True):
    """Push negations down to atoms and counting nodes."""
    if isinstance(f, (lg.Rel, lg.Eq, lg.Pred) + lg.COUNTING):
        return f if positive else lg.Not(f, f.pos)
    if isinstance(f, _Const):
        return _Const(f.value == positive)
    if isinstance(f, lg.Not):
        return nnf(f.body, not positive)
    if isinstance(f, (lg.And, lg.Or)):
        flip = type(f) if positive else (lg.Or if isinstance(f, lg.And) else lg.And)
        return flip(nnf(f.left, positive), nnf(f.right, positive), f.pos)
    if isinstance(f, lg.Implies):
        return nnf(lg.Or(lg.Not(f.left), f.right, f.pos), positive)
    if isinstance(f, lg.Iff):
        both = lg.And(f.left, f.right, f.pos)
        neither = lg.And(lg.Not(f.left), lg.Not(f.right), f.pos)
        return nnf(lg.Or(both, neither, f.pos), positive)
    if isinstance(f, lg.Exists):
        node = lg.Exists if positive else lg.Forall
        return node(f.vars, nnf(f.body, positive), f.pos)
    if isinstance(f, lg.Forall):
        node = lg.Forall if positive else lg.Exists
        return node(f.vars, nnf(f.body, positive), f.pos)
    raise TypeError(f"not a formula: {f!r}")


def _flatten(f, kind):
    if isinstance(f, kind):
        return _flatten(f.left, kind) + _flatten(f.right, kind)
    return [f]


def _fold(kind, parts):
    out = parts[0]
    for p in parts[1:]:
        out = kind(out, p, p.pos)
    return out


def miniscope(f):
    """Move FO quantifiers of an NNF formula as far inward as they can go.

    ∃ distributes over ∨ and ∀ over ∧; conjuncts (disjuncts) that do not
    mention the bound variable are pulled out of ∃ (∀). Smaller scopes mean
    smaller projections and, above all, smaller complements.
    """
    if isinstance(f, (lg.And, lg.Or)):
        return type(f)(miniscope(f.left), miniscope(f.right), f.pos)
    if isinstance(f, (lg.Exists, lg.Forall)):
        body = miniscope(f.body)
        for v in reversed(f.vars):
            body = _push(type(f), v, body, f.pos)
        return body
    return f


def _push(node, v, body, pos):
    if v not in lg.free_vars(body):
        return body
    spread, pull = (lg.Or, lg.And) if node is lg.Exists else (lg.And, lg.Or)
    if isinstance(body, spread):
        return spread(_push(node, v, body.left, pos), _push(node, v, body.right, pos), body.pos)
    if isinstance(body, pull):
        parts = _flatten(body, pull)
        inside = [p for p in parts if v in lg.free_vars(p)]
        outside = [p for p in parts if v not in lg.free_vars(p)]
        if outside:
            return _fold(pull, outside + [_push(node, v, _fold(pull, inside), pos)])
    return node((v,), body, pos)


# ------------------------------------------------------------ compiling

def _truth(a):
    return not au.is_empty(a)[0]


def _const(value):
    return au.constant(au.Alphabet(()), value)


def _align(ctx, a, names):
    """Extend ``a`` to the tracks ``names`` (sorted), constraining new tracks to the domain."""
    names = tuple(sorted(names))
    missing = [n for n in names if n not in a.alphabet.names]
    if missing:
        if a.alphabet.arity == 0:
            return ctx.domain(names) if _truth(a) else au.empty_automaton(ctx.domain(names).alphabet)
        for n in missing:
            a = au.cylindrify(a, n, ctx.symbols)
        a = au.reorder(a, names)
        a = au.trim(au.intersect(a, ctx.domain(names)))
    return au.reorder(a, names)


def _atom(ctx, f, negated):
    p = ctx.presentation
    if isinstance(f, lg.Rel):
        if f.src == f.dst:
            a = au.rename(p.fixed, {"x": f.src})
        else:
            a = au.reorder(au.rename(p.relation, {"x": f.src, "y": f.dst}), sorted((f.src, f.dst)))
        if negated:
            a = au.intersect(au.complement(a), ctx.domain(a.alphabet.names))
        return au.trim(a)
    if isinstance(f, lg.Eq):
        if f.left == f.right:
            d = ctx.domain([f.left])
            return au.empty_automaton(d.alphabet) if negated else d
        base = p.inequality if negated else p.equality
        return au.reorder(au.rename(base, {"x": f.left, "y": f.right}), sorted((f.left, f.right)))
    a = au.rename(ctx.predicates[f.name], {"x": f.var})
    if negated:
        a = au.intersect(au.complement(a), ctx.domain([f.var]))
    return au.trim(a)


def _counting(ctx, f):
    """Evaluate a sentence-valued counting node; returns its truth value."""
    if isinstance(f, lg.Haertig):
        left = card.classify(_align(ctx, _compile(ctx, f.left), f.vars))
        right = card.classify(_align(ctx, _compile(ctx, f.right), f.vars))
        value = left == right
        ctx.evaluated.append({"formula": lg.format_formula(f), "cardinality": [str(left), str(right)]})
        return value
    a = _align(ctx, _compile(ctx, f.body), f.vars)
    found = card.classify(a)
    if isinstance(f, lg.ExistsInf):
        value = found.is_infinite
    elif isinstance(f, lg.ExistsCard):
        value = found == f.card
    else:
        value = (not found.is_infinite) and found.n % f.k == f.t
    ctx.evaluated.append({"formula": lg.format_formula(f), "cardinality": str(found)})
    return value


def _compile(ctx, f):
    hit = ctx.cache.get(f)
    if hit is None:
        hit = ctx.note(_build(ctx, f))
        ctx.cache[f] = hit
    return hit


def _build(ctx, f):
    names = tuple(sorted(lg.free_vars(f)))
    if isinstance(f, _Const):
        return _const(f.value)
    if isinstance(f, (lg.Rel, lg.Eq, lg.Pred)):
        return _atom(ctx, f, False)
    if isinstance(f, lg.Not):
        if isinstance(f.body, lg.COUNTING):
            return _const(not _counting(ctx, f.body))
        return _atom(ctx, f.body, True)
    if isinstance(f, lg.COUNTING):
        return _const(_counting(ctx, f))
    if isinstance(f, lg.And):
        parts = []
        for i, g in enumerate(_flatten(f, lg.And)):
            a = _compile(ctx, g)
            if a.alphabet.arity == 0:
                if not _truth(a):
                    return au.empty_automaton(ctx.domain(names).alphabet) if names else _const(False)
                continue
            parts.append((a.num_states, g.pos, i, a))
        if not parts:
            return _const(True)
        parts.sort(key=lambda t: t[:3])
        result = _align(ctx, parts[0][3], names)
        for *_, a in parts[1:]:
            result = au.trim(au.intersect(result, _align(ctx, a, names)))
            if au.is_canonical_empty(result):
                break
        return _const(_truth(result)) if not names else result
    if isinstance(f, lg.Or):
        result = None
        for g in _flatten(f, lg.Or):
            a = _compile(ctx, g)
            if a.alphabet.arity == 0:
                if _truth(a):
                    return ctx.domain(names) if names else _const(True)
                continue
            a = _align(ctx, a, names)
            result = a if result is None else au.union(result, a)
        if result is None:
            return au.empty_automaton(ctx.domain(names).alphabet) if names else _const(False)
        return result
    if isinstance(f, lg.Exists):
        body = _compile(ctx, f.body)
        if not names:
            return _const(_truth(body))
        for v in f.vars:
            if v in body.alphabet.names:
                body = au.project(body, v)
        return _align(ctx, au.trim(body), names)
    if isinstance(f, lg.Forall):
        dual = lg.Exists(f.vars, nnf(f.body, False), f.pos)
        inner = _compile(ctx, dual)
        if not names:
            return _const(not _truth(inner))
        return au.trim(au.intersect(au.complement(inner), ctx.domain(names)))
    raise TypeError(f"unexpected node {f!r}")


def prepare(f, ctx, free=()):
    if isinstance(f, str):
        f = lg.parse_formula(f)
    lg.check(f, ctx.predicates, free)
    return miniscope(nnf(_rename_bound(f, free)))


def compile(f, ctx, free=None):
    """Automaton over the sorted free variables of ``f`` accepting its satisfying tuples."""
    if isinstance(f, str):
        f = lg.parse_formula(f)
    free = sorted(lg.free_vars(f)) if free is None else sorted(free)
    g = prepare(f, ctx, free)
    with au.state_budget(ctx.budget):
        a = _compile(ctx, g)
        return _align(ctx, a, free) if free else a


# ------------------------------------------------------------- verdicts

@dataclass
class Verdict:
    formula: str
    result: bool
    cardinality: card.CardinalityClass | None = None
    witness: dict | None = None
    stats: dict = field(default_factory=dict)
    evaluated: list = field(default_factory=list)

    def to_json(self, timing=False):
        out = {"formula": self.formula, "result": self.result}
        if self.cardinality is not None:
            out["cardinality"] = str(self.cardinality)
        if self.witness is not None:
            out["witness"] = {v: ca.format_config(c) for v, c in sorted(self.witness.items())}
        stats = {k: v for k, v in self.stats.items() if timing or k != "seconds"}
        out["stats"] = stats
        if self.evaluated:
            out["evaluated"] = self.evaluated
        return out


_WITNESSED = (lg.Exists, lg.ExistsInf, lg.ExistsCard, lg.ExistsMod)


def decide(sentence, ctx, want_witness=True):
    text = sentence if isinstance(sentence, str) else lg.format_formula(sentence)
    f = lg.parse_formula(sentence) if isinstance(sentence, str) else sentence
    start = time.perf_counter()
    ctx.stats = {"automata": 0, "max_states": 0}
    ctx.evaluated = []
    g = prepare(f, ctx)
    with au.state_budget(ctx.budget):
        result = _truth(_compile(ctx, g))
        found = None
        if isinstance(f, lg.ExistsCard):
            found = card.classify(_body(ctx, f))
        wit = None
        if want_witness and result and isinstance(f, _WITNESSED):
            try:
                wit = _witness(ctx, f)
            except Unsat:
                wit = None
    stats = dict(ctx.stats, seconds=round(time.perf_counter() - start, 6))
    return Verdict(text, result, found, wit, stats, list(ctx.evaluated))


def _body(ctx, f):
    """Automaton for the body of a top-level binder, over exactly its bound variables."""
    return _align(ctx, _compile(ctx, prepare(f.body, ctx, f.vars)), f.vars)


def _witness(ctx, f):
    a = _body(ctx, f)
    empty, lasso = au.is_empty(a)
    if empty:
        raise Unsat("no assignment satisfies the body")
    words = ca.split(lasso, a.alphabet.arity)
    assignment = {v: ca.decode(w) for v, w in zip(a.alphabet.names, words)}
    if not evaluate(f.body, assignment, ctx):
        raise WitnessError(f"witness {assignment} failed direct evaluation")
    return assignment


def witness(sentence, ctx):
    """Satisfying assignment for the bound variables of an existential sentence."""
    f = lg.parse_formula(sentence) if isinstance(sentence, str) else sentence
    if not isinstance(f, _WITNESSED):
        raise ValueError("witnesses exist for existential and counting sentences only")
    lg.check(f, ctx.predicates)
    with au.state_budget(ctx.budget):
        return _witness(ctx, f)


def evaluate(f, assignment, ctx):
    """Truth of ``f`` under ``assignment``; atoms and connectives are evaluated directly."""
    if isinstance(f, _Const):
        return f.value
    if isinstance(f, lg.Rel):
        return ca.step(ctx.rule, assignment[f.src]) == assignment[f.dst]
    if isinstance(f, lg.Eq):
        return assignment[f.left] == assignment[f.right]
    if isinstance(f, lg.Pred):
        return au.member_up(ctx.predicates[f.name], ca.encode(assignment[f.var]))
    if isinstance(f, lg.Not):
        return not evaluate(f.body, assignment, ctx)
    if isinstance(f, lg.And):
        return evaluate(f.left, assignment, ctx) and evaluate(f.right, assignment, ctx)
    if isinstance(f, lg.Or):
        return evaluate(f.left, assignment, ctx) or evaluate(f.right, assignment, ctx)
    if isinstance(f, lg.Implies):
        return not evaluate(f.left, assignment, ctx) or evaluate(f.right, assignment, ctx)
    if isinstance(f, lg.Iff):
        return evaluate(f.left, assignment, ctx) == evaluate(f.right, assignment, ctx)
    names = sorted(lg.free_vars(f))
    a = _compile(ctx, prepare(f, ctx, names))
    if not names:
        return _truth(a)
    a = _align(ctx, a, names)
    return au.member_up(a, ca.convolve(*(ca.encode(assignment[v]) for v in names)))


# -------------------------------------------------------------- presets

SURJECTIVE = "A y. E x. x->y"
INJECTIVE = "A x. A y. A z. (x->z & y->z) => x=y"


def _ctx(rule):
    return rule if isinstance(rule, CompilationContext) else context(rule)


def is_surjective(rule):
    return decide(SURJECTIVE, _ctx(rule), want_witness=False).result


def is_injective(rule):
    return decide(INJECTIVE, _ctx(rule), want_witness=False).result


def fixed_points(rule):
    """Cardinality of the fixed-point set and its members (all of them when finite)."""
    ctx = _ctx(rule)
    a = compile("x->x", ctx)
    found = card.classify(a)
    if found.kind == "empty":
        return found, []
    if found.is_infinite:
        return found, [ca.decode(au.is_empty(a)[1])]
    return found, sorted((ca.decode(w) for w in card.members(a)), key=str)


def cycle_formula(k, exact=True):
    """Tuples (x0, ..., x(k-1)) with x0 -> x1 -> ... -> x0, least period k when exact."""
    if k < 1:
        raise ValueError("cycle length must be positive")
    xs = [f"x{i}" for i in range(k)]
    parts = [lg.Rel(xs[i], xs[(i + 1) % k]) for i in range(k)]
    if exact:
        parts += [lg.Not(lg.Eq(xs[0], xs[d])) for d in range(1, k) if k % d == 0]
    body = parts[0]
    for p in parts[1:]:
        body = lg.And(body, p)
    return tuple(xs), body


def k_cycles(rule, k, exact=True):
    ctx = _ctx(rule)
    xs, body = cycle_formula(k, exact)
    return card.classify(compile(body, ctx, free=xs))


def preimage_count(rule, predicate):
    """Cardinality of the set of configurations mapped into ``predicate``.

    ``predicate`` is a registered name or a one-track automaton.
    """
    ctx = _ctx(rule)
    if not isinstance(predicate, str):
        name = "target"
        while name in ctx.predicates:
            name += "_"
        ctx.predicates.register(name, predicate)
        predicate = name
    return card.classify(compile(f"E y. (In[{predicate}](y) & x->y)", ctx))
