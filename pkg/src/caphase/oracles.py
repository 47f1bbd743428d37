"""De Bruijn graph tests for surjectivity and injectivity of a CA rule.

These work on finite words only and share no code with the automata
pipeline, which makes them usable as independent oracles.
"""
from __future__ import annotations

import itertools


def _de_bruijn(rule):
    """Edges (u, v, label) between words of length 2r overlapping in 2r-1 cells."""
    width = 2 * rule.radius
    nodes = list(itertools.product(rule.states, repeat=width))
    edges = []
    for u in nodes:
        for s in rule.states:
            v = u[1:] + (s,)
            edges.append((u, v, rule.table[u + (s,)]))
    return nodes, edges


def is_surjective(rule):
    """Surjective iff every finite word has a preimage path in the de Bruijn graph.

    Runs the subset construction from the full node set; the empty set is
    reachable exactly when some finite word has no preimage.
    """
    nodes, edges = _de_bruijn(rule)
    step = {}
    for u, v, label in edges:
        step.setdefault((u, label), []).append(v)
    start = frozenset(nodes)
    seen = {start}
    todo = [start]
    while todo:
        current = todo.pop()
        for label in rule.states:
            nxt = frozenset(v for u in current for v in step.get((u, label), ()))
            if not nxt:
                return False
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return True


def is_injective(rule):
    """Injective iff no bi-infinite path of the pair graph leaves the diagonal.

    The pair graph joins (u, u') to (v, v') when both edges carry the same
    label. Vertices on bi-infinite paths survive repeated removal of vertices
    without predecessors or successors.
    """
    _, edges = _de_bruijn(rule)
    by_label = {}
    for u, v, label in edges:
        by_label.setdefault(label, []).append((u, v))
    out, into = {}, {}
    for pairs in by_label.values():
        for (u, v), (u2, v2) in itertools.product(pairs, repeat=2):
            a, b = (u, u2), (v, v2)
            out.setdefault(a, set()).add(b)
            into.setdefault(b, set()).add(a)
    alive = set(out) | set(into)
    changed = True
    while changed:
        changed = False
        for node in list(alive):
            if not (out.get(node, set()) & alive) or not (into.get(node, set()) & alive):
                alive.discard(node)
                changed = True
    return all(u == u2 for u, u2 in alive)


def fixed_point_class(rule):
    """Cardinality class of the fixed points, read off the graph of fixed windows.

    Fixed points are bi-infinite walks through windows w with δ(w) equal to
    the centre of w. Returns 'empty', 'finite:<n>', 'aleph0' or 'continuum'.
    """
    r = rule.radius
    nodes = [w for w in itertools.product(rule.states, repeat=2 * r + 1) if rule.table[w] == w[r]]
    succ = {u: [v for v in nodes if u[1:] == v[:-1]] for u in nodes}

    def reach(u):
        seen, todo = set(), [u]
        while todo:
            for v in succ[todo.pop()]:
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        return seen

    reachable = {u: reach(u) for u in nodes}
    cycles = []
    done = set()
    for u in nodes:
        if u in done or u not in reachable[u]:
            continue
        comp = {v for v in reachable[u] if u in reachable[v]}
        done |= comp
        edges = sum(1 for v in comp for w in succ[v] if w in comp)
        if edges > len(comp):
            return "continuum"
        cycles.append(comp)
    for c in cycles:
        for d in cycles:
            if c is not d and any(v in reachable[u] for u in c for v in d):
                return "aleph0"
    total = sum(len(c) for c in cycles)
    return f"finite:{total}" if total else "empty"
