"""Cardinality of ω-regular languages: empty, finite(n), aleph0 or continuum.

The classification works directly on a trimmed Büchi automaton:

* the language is uncountable iff some accepting state lies on two cycles
  whose labels do not commute (then it contains a copy of {u, v}^ω);
* otherwise it is finite iff every state on a cycle has exactly one
  accepted continuation, namely z^ω for the primitive root z of the cycles
  through that state. The members are then u.z^ω where u labels a path
  through acyclic states, so stems are shorter than the state count and
  loops no longer than it.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from . import automata as au


class NotFinite(ValueError):
    pass


@dataclass(frozen=True)
class CardinalityClass:
    kind: str
    n: int = 0

    KINDS = ("empty", "finite", "aleph0", "continuum")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown cardinality kind {self.kind!r}")
        if self.kind == "finite" and self.n < 1:
            raise ValueError("finite cardinalities carry n >= 1")

    def __str__(self):
        return f"finite:{self.n}" if self.kind == "finite" else self.kind

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if text.startswith("finite:"):
            return finite(int(text[7:]))
        if text in ("empty", "aleph0", "continuum"):
            return cls(text)
        if text.isdigit():
            return finite(int(text))
        raise ValueError(f"cannot parse cardinality {text!r}")

    @property
    def key(self):
        """Sort key for the order empty < finite(n) < aleph0 < continuum."""
        return (self.KINDS.index(self.kind), self.n)

    @property
    def is_infinite(self):
        return self.kind in ("aleph0", "continuum")

    def __lt__(self, other):
        return self.key < other.key

    def __le__(self, other):
        return self.key <= other.key


EMPTY = CardinalityClass("empty")
COUNTABLE = CardinalityClass("aleph0")
CONTINUUM = CardinalityClass("continuum")


def finite(n):
    return EMPTY if n == 0 else CardinalityClass("finite", n)


def _shortest_cycle(a, q, comp):
    return au._cycle(a, q, comp)


def _cycles_in_root_star(a, q, comp, root):
    """Every cycle label at ``q`` inside ``comp`` lies in root^*."""
    k = len(root)
    dead = -1
    start = (q, 0)
    seen = {start}
    queue = deque([start])
    while queue:
        p, i = queue.popleft()
        for x, qs in a.succ[p].items():
            j = (i + 1) % k if i != dead and x == root[i] else dead
            for r in qs:
                if r not in comp:
                    continue
                if r == q and j != 0:
                    return False
                if (r, j) not in seen:
                    seen.add((r, j))
                    queue.append((r, j))
    return True


def _scc_of(a):
    table = {}
    for comp in a.sccs:
        if au._nontrivial(a, comp):
            for s in comp:
                table[s] = comp
    return table


def is_uncountable(a):
    a = au.trim(a)
    cyclic = _scc_of(a)
    for f in sorted(a.accepting):
        comp = cyclic.get(f)
        if comp is None:
            continue
        root = au.primitive_root(_shortest_cycle(a, f, comp))
        if not _cycles_in_root_star(a, f, comp, root):
            return True
    return False


def _from(a, q):
    return au.BuchiAutomaton._raw(a.alphabet, a.succ, q, a.accepting)


def _finite_members(a):
    """Canonical members of L(a) for trimmed, countable ``a``; None if infinite."""
    cyclic = _scc_of(a)
    tails = {}
    for q in sorted(cyclic):
        comp = cyclic[q]
        root = au.primitive_root(_shortest_cycle(a, q, comp))
        if not _cycles_in_root_star(a, q, comp, root):
            return None
        only = au.word_automaton(a.alphabet, au.LassoWord((), root))
        if not au.is_empty(au.intersect(_from(a, q), au.complement(only)))[0]:
            return None
        tails[q] = root
    members = set()
    # paths through acyclic states form a DAG, so this terminates
    stack = [(a.initial, ())]
    while stack:
        p, u = stack.pop()
        if p in tails:
            members.add(au.canonical_lasso(u, tails[p]))
            continue
        for x, qs in a.succ[p].items():
            for q in qs:
                stack.append((q, u + (x,)))
    return members


def classify(a):
    a = au.trim(a)
    if au.is_canonical_empty(a):
        return EMPTY
    if is_uncountable(a):
        return CONTINUUM
    members = _finite_members(a)
    if members is None:
        return COUNTABLE
    return finite(len(members))


def certificate_bound(a):
    """Stem and loop bound under which a finite language lists all members."""
    return au.trim(a).num_states


def members(a):
    """All members of a finite language, as canonical lassos."""
    a = au.trim(a)
    if au.is_canonical_empty(a):
        return set()
    if is_uncountable(a):
        raise NotFinite("language is uncountable")
    found = _finite_members(a)
    if found is None:
        raise NotFinite("language is countably infinite")
    return found


def count_exact(a):
    return len(members(a))


def count_mod(a, t, k):
    if not (isinstance(t, int) and isinstance(k, int) and 0 <= t < k):
        raise ValueError(f"modulo quantifier needs 0 <= t < k, got ({t}, {k})")
    cls = classify(a)
    if cls.is_infinite:
        return False
    return cls.n % k == t


def is_infinite(a):
    return classify(a).is_infinite


def _accepts_loop_from(a, states, loop):
    k = len(loop)
    nodes = {(q, 0) for q in states}
    queue = deque(nodes)
    edges = {}
    while queue:
        q, i = queue.popleft()
        nxt = [(r, (i + 1) % k) for r in a.succ[q].get(loop[i], ())]
        edges[(q, i)] = nxt
        for node in nxt:
            if node not in nodes:
                nodes.add(node)
                queue.append(node)
    order = list(edges)
    index = {node: i for i, node in enumerate(order)}
    for comp in au._tarjan(len(order), lambda i: {index[m] for m in edges[order[i]]}):
        members = [order[i] for i in comp]
        if not any(q in a.accepting for q, _ in members):
            continue
        if len(comp) > 1 or members[0] in edges[members[0]]:
            return True
    return False


def enumerate_members(a, stem_bound, loop_bound):
    """Members of L(a) with some representation stem . loop^ω inside the bounds."""
    if stem_bound < 0 or loop_bound < 1:
        raise ValueError("bounds must satisfy stem >= 0 and loop >= 1")
    a = au.trim(a)
    found = set()
    if au.is_canonical_empty(a):
        return found
    letters = a.alphabet.letters
    loops = [v for n in range(1, loop_bound + 1)
             for v in itertools.product(letters, repeat=n)
             if au.primitive_root(v) == v]
    stack = [((), frozenset([a.initial]))]
    while stack:
        u, states = stack.pop()
        for v in loops:
            if _accepts_loop_from(a, states, v):
                found.add(au.canonical_lasso(u, v))
        if len(u) < stem_bound:
            for x in letters:
                nxt = frozenset(a.post(states, x))
                if nxt:
                    stack.append((u + (x,), nxt))
    return found
