"""Nondeterministic Büchi automata over multi-track alphabets.

Letters are tuples with one symbol per track. Tracks are identified by
name, so two automata can be combined once their track lists agree.
All automata are immutable; every operation returns a fresh automaton.
"""
from __future__ import annotations

import contextlib
import contextvars
import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property

DEFAULT_STATE_BUDGET = 1_000_000

_budget = contextvars.ContextVar("state_budget", default=DEFAULT_STATE_BUDGET)


class AlphabetMismatch(ValueError):
    pass


class TrackError(ValueError):
    pass


class ResourceLimit(RuntimeError):
    """Raised when a construction would exceed the active state budget."""


def current_budget():
    return _budget.get()


@contextlib.contextmanager
def state_budget(limit):
    if limit < 1:
        raise ValueError("state budget must be >= 1")
    token = _budget.set(limit)
    try:
        yield
    finally:
        _budget.reset(token)


@dataclass(frozen=True)
class Alphabet:
    """Ordered list of named tracks, each a sorted tuple of string symbols."""

    tracks: tuple

    def __post_init__(self):
        names = set()
        normalized = []
        for name, symbols in self.tracks:
            if name in names:
                raise TrackError(f"duplicate track {name!r}")
            names.add(name)
            symbols = tuple(sorted(set(symbols)))
            if not symbols:
                raise TrackError(f"track {name!r} has no symbols")
            normalized.append((name, symbols))
        object.__setattr__(self, "tracks", tuple(normalized))

    @classmethod
    def of(cls, *tracks):
        return cls(tuple(tracks))

    @property
    def names(self):
        return tuple(name for name, _ in self.tracks)

    @property
    def arity(self):
        return len(self.tracks)

    def index(self, name):
        for i, (n, _) in enumerate(self.tracks):
            if n == name:
                return i
        raise TrackError(f"unknown track {name!r}")

    def symbols(self, name):
        return self.tracks[self.index(name)][1]

    @cached_property
    def letters(self):
        return tuple(itertools.product(*(s for _, s in self.tracks)))

    @cached_property
    def _letter_set(self):
        return frozenset(self.letters)

    def __contains__(self, letter):
        return letter in self._letter_set

    def without(self, name):
        i = self.index(name)
        return Alphabet(self.tracks[:i] + self.tracks[i + 1:])

    def with_track(self, name, symbols, position=None):
        if name in self.names:
            raise TrackError(f"track {name!r} already present")
        if position is None:
            position = len(self.tracks)
        return Alphabet(self.tracks[:position] + ((name, tuple(symbols)),) + self.tracks[position:])

    def composable(self, other):
        return not set(self.names) & set(other.names)

    def __str__(self):
        return "; ".join(f"{n}={','.join(s)}" for n, s in self.tracks)


@dataclass(frozen=True)
class LassoWord:
    """The ultimately periodic word stem . loop^omega."""

    stem: tuple
    loop: tuple

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ValueError("lasso loop must be non-empty")

    def __getitem__(self, i):
        if i < len(self.stem):
            return self.stem[i]
        return self.loop[(i - len(self.stem)) % len(self.loop)]

    def prefix(self, n):
        return tuple(self[i] for i in range(n))

    def canonical(self):
        return canonical_lasso(self.stem, self.loop)

    def same_word(self, other):
        return self.canonical() == other.canonical()


def primitive_root(word):
    word = tuple(word)
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


def canonical_lasso(stem, loop):
    """Minimal loop (primitive period), then minimal stem."""
    stem = list(stem)
    loop = list(primitive_root(loop))
    while stem and stem[-1] == loop[-1]:
        stem.pop()
        loop = [loop[-1]] + loop[:-1]
    return LassoWord(tuple(stem), tuple(loop))


class BuchiAutomaton:
    """Büchi automaton with states 0..n-1 and a single initial state."""

    def __init__(self, alphabet, num_states, initial, transitions, accepting):
        if num_states < 1:
            raise ValueError("an automaton needs at least one state")
        if not 0 <= initial < num_states:
            raise ValueError(f"initial state {initial} out of range")
        succ = [dict() for _ in range(num_states)]
        for p, letter, q in transitions:
            letter = tuple(letter)
            if not (0 <= p < num_states and 0 <= q < num_states):
                raise ValueError(f"transition ({p}, {letter}, {q}) has an invalid endpoint")
            if letter not in alphabet:
                raise AlphabetMismatch(f"letter {letter} is not in the alphabet")
            succ[p].setdefault(letter, set()).add(q)
        accepting = frozenset(accepting)
        if any(not 0 <= s < num_states for s in accepting):
            raise ValueError("accepting states must be valid states")
        self._init(alphabet, [{a: tuple(sorted(qs)) for a, qs in d.items()} for d in succ], initial, accepting)

    def _init(self, alphabet, succ, initial, accepting):
        self.alphabet = alphabet
        self.succ = tuple(succ)
        self.initial = initial
        self.accepting = frozenset(accepting)

    @classmethod
    def _raw(cls, alphabet, succ, initial, accepting):
        # trusted constructor for internal builders
        obj = cls.__new__(cls)
        obj._init(alphabet, succ, initial, accepting)
        return obj

    @property
    def num_states(self):
        return len(self.succ)

    @property
    def states(self):
        return range(len(self.succ))

    @property
    def transitions(self):
        return [(p, a, q) for p, d in enumerate(self.succ) for a, qs in d.items() for q in qs]

    @property
    def num_transitions(self):
        return sum(len(qs) for d in self.succ for qs in d.values())

    def successors(self, state, letter):
        return self.succ[state].get(letter, ())

    def post(self, states, letter):
        out = set()
        for s in states:
            out.update(self.succ[s].get(letter, ()))
        return out

    def __repr__(self):
        return (f"BuchiAutomaton(tracks={self.alphabet.names}, states={self.num_states}, "
                f"transitions={self.num_transitions}, accepting={len(self.accepting)})")

    @cached_property
    def sccs(self):
        return _tarjan(self.num_states, lambda p: {q for qs in self.succ[p].values() for q in qs})

    @cached_property
    def is_deterministic(self):
        return all(len(qs) == 1 for d in self.succ for qs in d.values())

    @cached_property
    def all_accepting(self):
        return len(self.accepting) == self.num_states

    @cached_property
    def is_weak(self):
        """Every cycle is entirely accepting or entirely rejecting."""
        for comp in self.sccs:
            if not _nontrivial(self, comp):
                continue
            flags = {s in self.accepting for s in comp}
            if len(flags) > 1:
                return False
        return True


def _nontrivial(a, comp):
    if len(comp) > 1:
        return True
    (s,) = comp
    return any(s in qs for qs in a.succ[s].values())


def _tarjan(n, neighbours):
    """Strongly connected components, iterative Tarjan."""
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack, result = [], []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, iter(sorted(neighbours(root))))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] is None:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(sorted(neighbours(w)))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                result.append(frozenset(comp))
    return result


def explore(alphabet, start, expand, accepting):
    """Build an automaton by breadth-first exploration of hashable keys.

    ``expand(key)`` yields ``(letter, successor_key)`` pairs and
    ``accepting(key)`` decides acceptance. Respects the state budget.
    """
    budget = _budget.get()
    ids = {start: 0}
    keys = [start]
    succ = []
    queue = deque([start])
    while queue:
        key = queue.popleft()
        out = {}
        for letter, nxt in expand(key):
            j = ids.get(nxt)
            if j is None:
                j = ids[nxt] = len(keys)
                keys.append(nxt)
                queue.append(nxt)
                if len(keys) > budget:
                    raise ResourceLimit(f"automaton exceeds state budget of {budget}")
            out.setdefault(letter, set()).add(j)
        succ.append({a: tuple(sorted(qs)) for a, qs in out.items()})
    acc = frozenset(i for i, k in enumerate(keys) if accepting(k))
    return BuchiAutomaton._raw(alphabet, succ, 0, acc), keys


# ---------------------------------------------------------------- constants

def empty_automaton(alphabet):
    return BuchiAutomaton._raw(alphabet, [{}], 0, frozenset())


def universal_automaton(alphabet):
    return BuchiAutomaton._raw(alphabet, [{a: (0,) for a in alphabet.letters}], 0, frozenset([0]))


def constant(alphabet, value):
    return universal_automaton(alphabet) if value else empty_automaton(alphabet)


def word_automaton(alphabet, word):
    """Automaton accepting exactly the single word ``word``."""
    stem, loop = word.stem, word.loop
    n = len(stem)
    succ = []
    for i, a in enumerate(stem):
        succ.append({a: (i + 1,)})
    for j, a in enumerate(loop):
        succ.append({a: (n + (j + 1) % len(loop),)})
    for a in stem + loop:
        if a not in alphabet:
            raise AlphabetMismatch(f"letter {a} is not in the alphabet")
    # every loop state is visited forever, so all of them may accept
    return BuchiAutomaton._raw(alphabet, succ, 0, frozenset(range(n, n + len(loop))))


# -------------------------------------------------------------- structure

def _require_same(a, b):
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"alphabets differ: {a.alphabet.names} vs {b.alphabet.names}")


def reachable(a):
    seen = {a.initial}
    queue = deque([a.initial])
    while queue:
        p = queue.popleft()
        for qs in a.succ[p].values():
            for q in qs:
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
    return seen


def live_states(a):
    """Reachable states from which some accepting cycle is reachable."""
    reach = reachable(a)
    good = set()
    for comp in a.sccs:
        if comp & a.accepting and comp <= reach and _nontrivial(a, comp):
            good |= comp
    pred = {p: set() for p in reach}
    for p in reach:
        for qs in a.succ[p].values():
            for q in qs:
                pred[q].add(p)
    live = set(good)
    queue = deque(good)
    while queue:
        q = queue.popleft()
        for p in pred[q]:
            if p not in live:
                live.add(p)
                queue.append(p)
    return live


def _restrict(a, keep):
    """Sub-automaton on ``keep`` (must contain the initial state), BFS-renumbered."""
    order = [a.initial]
    ids = {a.initial: 0}
    i = 0
    while i < len(order):
        p = order[i]
        i += 1
        for letter in sorted(a.succ[p]):
            for q in a.succ[p][letter]:
                if q in keep and q not in ids:
                    ids[q] = len(order)
                    order.append(q)
    succ = []
    for p in order:
        d = {}
        for letter, qs in a.succ[p].items():
            kept = tuple(sorted(ids[q] for q in qs if q in ids))
            if kept:
                d[letter] = kept
        succ.append(d)
    acc = frozenset(ids[p] for p in order if p in a.accepting)
    return BuchiAutomaton._raw(a.alphabet, succ, 0, acc)


def trim(a):
    """Keep states that are reachable and can reach an accepting cycle."""
    live = live_states(a)
    if a.initial not in live:
        return empty_automaton(a.alphabet)
    return _saturate(_restrict(a, live))


def _saturate(a):
    """Mark every state of an accepting simple-cycle SCC as accepting.

    A run that stays in such a component forever goes round its only cycle,
    so the language is unchanged, and the result is weak more often.
    """
    extra = set()
    for comp in a.sccs:
        if len(comp) < 2 or not (comp & a.accepting) or comp <= a.accepting:
            continue
        if all(len({q for qs in a.succ[p].values() for q in qs if q in comp}) == 1 for p in comp):
            extra |= comp
    if not extra:
        return a
    return BuchiAutomaton._raw(a.alphabet, a.succ, a.initial, a.accepting | extra)


def is_canonical_empty(a):
    return a.num_states == 1 and not a.succ[0] and not a.accepting


def is_empty(a):
    """Return ``(True, None)`` or ``(False, lasso)`` with a witness in L(a)."""
    live = live_states(a)
    if a.initial not in live:
        return True, None
    # accepting states sitting on a cycle, in deterministic order
    cyclic = set()
    for comp in a.sccs:
        if comp <= live and _nontrivial(a, comp):
            cyclic |= comp
    parent = {a.initial: None}
    queue = deque([a.initial])
    target = None
    while queue:
        p = queue.popleft()
        if p in a.accepting and p in cyclic:
            target = p
            break
        for letter in sorted(a.succ[p]):
            for q in a.succ[p][letter]:
                if q in live and q not in parent:
                    parent[q] = (p, letter)
                    queue.append(q)
    stem = _path_back(parent, target)
    comp = next(c for c in a.sccs if target in c)
    loop = _cycle(a, target, comp)
    return False, LassoWord(stem, loop)


def _path_back(parent, node):
    letters = []
    while parent[node] is not None:
        node, letter = parent[node]
        letters.append(letter)
    return tuple(reversed(letters))


def _cycle(a, f, comp):
    """Shortest non-empty cycle through ``f`` inside ``comp``."""
    parent = {}
    queue = deque()
    for letter in sorted(a.succ[f]):
        for q in a.succ[f][letter]:
            if q == f:
                return (letter,)
            if q in comp and q not in parent:
                parent[q] = (f, letter)
                queue.append(q)
    parent[f] = None
    while queue:
        p = queue.popleft()
        for letter in sorted(a.succ[p]):
            for q in a.succ[p][letter]:
                if q == f:
                    return _path_back(parent, p) + (letter,)
                if q in comp and q not in parent:
                    parent[q] = (p, letter)
                    queue.append(q)
    raise AssertionError("state is not on a cycle")


def member_up(a, w):
    """Decide stem . loop^omega in L(a)."""
    for letter in w.stem + w.loop:
        if letter not in a.alphabet:
            raise AlphabetMismatch(f"letter {letter} is not in the alphabet")
    if a.is_deterministic:
        return _member_deterministic(a, w)
    current = {a.initial}
    for letter in w.stem:
        current = a.post(current, letter)
        if not current:
            return False
    k = len(w.loop)
    nodes = {(q, 0) for q in current}
    queue = deque(nodes)
    edges = {}
    while queue:
        q, i = queue.popleft()
        nxt = [(r, (i + 1) % k) for r in a.succ[q].get(w.loop[i], ())]
        edges[(q, i)] = nxt
        for node in nxt:
            if node not in nodes:
                nodes.add(node)
                queue.append(node)
    order = list(edges)
    index = {node: i for i, node in enumerate(order)}
    comps = _tarjan(len(order), lambda i: {index[m] for m in edges[order[i]]})
    for comp in comps:
        members = [order[i] for i in comp]
        if not any(q in a.accepting for q, _ in members):
            continue
        if len(comp) > 1:
            return True
        node = members[0]
        if node in edges[node]:
            return True
    return False


def _member_deterministic(a, w):
    succ = a.succ
    q = a.initial
    for letter in w.stem:
        nxt = succ[q].get(letter)
        if not nxt:
            return False
        q = nxt[0]
    k = len(w.loop)
    seen = {}
    trace = []
    i = 0
    while (q, i) not in seen:
        seen[(q, i)] = len(trace)
        trace.append(q)
        nxt = succ[q].get(w.loop[i])
        if not nxt:
            return False
        q, i = nxt[0], (i + 1) % k
    return any(p in a.accepting for p in trace[seen[(q, i)]:])


# ------------------------------------------------------------ boolean ops

def intersect(a, b):
    _require_same(a, b)
    if a.is_weak or b.is_weak:
        # a weak operand settles in one SCC, so plain conjunction suffices
        def expand(key):
            p, q = key
            sb = b.succ[q]
            for letter, ps in a.succ[p].items():
                qs = sb.get(letter)
                if qs:
                    for p2 in ps:
                        for q2 in qs:
                            yield letter, (p2, q2)

        result, _ = explore(a.alphabet, (a.initial, b.initial), expand,
                            lambda k: k[0] in a.accepting and k[1] in b.accepting)
        return result

    def expand2(key):
        p, q, flag = key
        if flag == 0:
            nflag = 1 if p in a.accepting else 0
        else:
            nflag = 0 if q in b.accepting else 1
        sb = b.succ[q]
        for letter, ps in a.succ[p].items():
            qs = sb.get(letter)
            if qs:
                for p2 in ps:
                    for q2 in qs:
                        yield letter, (p2, q2, nflag)

    result, _ = explore(a.alphabet, (a.initial, b.initial, 0), expand2,
                        lambda k: k[2] == 1 and k[1] in b.accepting)
    return result


def union(a, b):
    _require_same(a, b)
    shift_b = 1 + a.num_states
    succ = [None]
    for d in a.succ:
        succ.append({x: tuple(q + 1 for q in qs) for x, qs in d.items()})
    for d in b.succ:
        succ.append({x: tuple(q + shift_b for q in qs) for x, qs in d.items()})
    start = {}
    for x, qs in succ[1 + a.initial].items():
        start.setdefault(x, set()).update(qs)
    for x, qs in succ[shift_b + b.initial].items():
        start.setdefault(x, set()).update(qs)
    succ[0] = {x: tuple(sorted(qs)) for x, qs in start.items()}
    acc = {p + 1 for p in a.accepting} | {p + shift_b for p in b.accepting}
    return trim(BuchiAutomaton._raw(a.alphabet, succ, 0, acc))


def complement(a, method="auto"):
    """Automaton for the complement language (Σ^ω minus L(a)).

    Weak and deterministic inputs get direct constructions. Other inputs
    are determinized into a parity automaton (``method="auto"``) or go
    through the tight-ranking construction (``method="rank"``).
    """
    if method not in ("auto", "rank"):
        raise ValueError(f"unknown complementation method {method!r}")
    a = trim(a)
    if is_canonical_empty(a):
        return universal_automaton(a.alphabet)
    if a.alphabet.arity == 0:
        return empty_automaton(a.alphabet)
    if a.is_weak:
        if a.is_deterministic:
            return _complement_weak_deterministic(a)
        return _complement_breakpoint(a)
    if a.is_deterministic:
        return _complement_deterministic(a)
    if method == "rank":
        return _complement_rank(a)
    return _complement_parity(a)


def _complete(a):
    """Deterministic automaton made total with a rejecting sink (last state)."""
    sink = a.num_states
    succ = []
    for d in a.succ:
        succ.append({x: d.get(x, (sink,)) for x in a.alphabet.letters})
    succ.append({x: (sink,) for x in a.alphabet.letters})
    return BuchiAutomaton._raw(a.alphabet, succ, a.initial, a.accepting)


def _complement_weak_deterministic(a):
    c = _complete(a)
    acc = frozenset(s for s in c.states if s not in c.accepting)
    return trim(BuchiAutomaton._raw(c.alphabet, c.succ, c.initial, acc))


def _complement_deterministic(a):
    # words whose unique run visits accepting states finitely often
    c = _complete(a)
    letters = c.alphabet.letters

    def expand(key):
        phase, p = key
        for x in letters:
            (q,) = c.succ[p][x]
            if phase == 0:
                yield x, (0, q)
            if q not in c.accepting:
                yield x, (1, q)

    result, _ = explore(c.alphabet, (0, c.initial), expand, lambda k: k[0] == 1)
    return trim(result)


def _complement_breakpoint(a):
    # weak automaton: accepted iff some run stays in accepting states forever;
    # the breakpoint set O tracks runs that have done so since the last reset
    good = a.accepting
    letters = a.alphabet.letters

    def expand(key):
        s, o = key
        for x in letters:
            s2 = frozenset(a.post(s, x))
            if o:
                o2 = frozenset(q for q in a.post(o, x) if q in good)
            else:
                o2 = frozenset(q for q in s2 if q in good)
            yield x, (s2, o2)

    start = (frozenset([a.initial]), frozenset())
    result, _ = explore(a.alphabet, start, expand, lambda k: not k[1])
    return trim(result)


def _tight_rankings(states, bounds, accepting):
    """Tight level rankings on ``states`` (sorted tuple) below ``bounds``."""
    if not states:
        yield ()
        return
    ranges = []
    for q, hi in zip(states, bounds):
        if q in accepting:
            ranges.append(range(0, hi + 1, 2))
        else:
            ranges.append(range(0, hi + 1))
    for f in itertools.product(*ranges):
        top = max(f)
        if top % 2 == 0:
            continue
        used = set(f)
        if all(r in used for r in range(1, top, 2)):
            yield f


def _complement_rank(a):
    """Rank-based complementation restricted to tight level rankings."""
    acc = a.accepting
    letters = a.alphabet.letters

    def expand(key):
        if key[0] == "S":
            s = key[1]
            for x in letters:
                s2 = tuple(sorted(a.post(s, x)))
                yield x, ("S", s2)
                top = 2 * len(s2) - 1
                for f in _tight_rankings(s2, [top] * len(s2), acc):
                    yield x, ("R", s2, (), f)
            return
        _, s, o, f = key
        rank = dict(zip(s, f))
        for x in letters:
            bound = {}
            for q in s:
                for q2 in a.succ[q].get(x, ()):
                    bound[q2] = min(bound.get(q2, rank[q]), rank[q])
            s2 = tuple(sorted(bound))
            hi = [bound[q] - 1 if q in acc and bound[q] % 2 else bound[q] for q in s2]
            if any(h < 0 for h in hi):
                continue
            o_post = a.post(o, x) if o else None
            for f2 in _tight_rankings(s2, hi, acc):
                even = {q for q, r in zip(s2, f2) if r % 2 == 0}
                o2 = even & o_post if o else even
                yield x, ("R", s2, tuple(sorted(o2)), f2)

    result, _ = explore(a.alphabet, ("S", (a.initial,)), expand,
                        lambda k: k[0] == "R" and not k[2])
    return trim(result)


# --------------------------------------------------------- track handling

def project(a, track):
    """Existentially quantify away one track."""
    i = a.alphabet.index(track)
    succ = []
    for d in a.succ:
        out = {}
        for letter, qs in d.items():
            out.setdefault(letter[:i] + letter[i + 1:], set()).update(qs)
        succ.append({x: tuple(sorted(qs)) for x, qs in out.items()})
    return BuchiAutomaton._raw(a.alphabet.without(track), succ, a.initial, a.accepting)


def cylindrify(a, track, symbols, position=None):
    """Add an unconstrained track."""
    alphabet = a.alphabet.with_track(track, symbols, position)
    i = alphabet.index(track)
    syms = alphabet.tracks[i][1]
    succ = []
    for d in a.succ:
        out = {}
        for letter, qs in d.items():
            for s in syms:
                out[letter[:i] + (s,) + letter[i:]] = qs
        succ.append(out)
    return BuchiAutomaton._raw(alphabet, succ, a.initial, a.accepting)


def identify(a, keep, drop):
    """Force tracks ``keep`` and ``drop`` to carry equal symbols, then drop ``drop``."""
    i, j = a.alphabet.index(keep), a.alphabet.index(drop)
    if a.alphabet.tracks[i][1] != a.alphabet.tracks[j][1]:
        raise TrackError("identified tracks must share their symbol set")
    succ = []
    for d in a.succ:
        out = {}
        for letter, qs in d.items():
            if letter[i] == letter[j]:
                out[letter[:j] + letter[j + 1:]] = qs
        succ.append(out)
    return BuchiAutomaton._raw(a.alphabet.without(drop), succ, a.initial, a.accepting)


def rename(a, mapping):
    """Rename tracks; ``mapping`` sends old names to new ones."""
    tracks = tuple((mapping.get(n, n), s) for n, s in a.alphabet.tracks)
    return BuchiAutomaton._raw(Alphabet(tracks), a.succ, a.initial, a.accepting)


def reorder(a, names):
    """Permute tracks into the order given by ``names``."""
    names = tuple(names)
    if names == a.alphabet.names:
        return a
    if sorted(names) != sorted(a.alphabet.names):
        raise TrackError(f"cannot reorder {a.alphabet.names} as {names}")
    perm = [a.alphabet.index(n) for n in names]
    alphabet = Alphabet(tuple(a.alphabet.tracks[i] for i in perm))
    succ = [{tuple(x[i] for i in perm): qs for x, qs in d.items()} for d in a.succ]
    return BuchiAutomaton._raw(alphabet, succ, a.initial, a.accepting)


# ------------------------------------------------------------ text format

def dumps(a):
    lines = [f"alphabet: {a.alphabet}", f"states: {a.num_states}", f"initial: {a.initial}",
             "accepting: " + ",".join(str(s) for s in sorted(a.accepting))]
    order = {x: i for i, x in enumerate(a.alphabet.letters)}
    for p, letter, q in sorted(a.transitions, key=lambda t: (t[0], order[t[1]], t[2])):
        lines.append(f"{p} ({','.join(letter)}) {q}")
    return "\n".join(lines) + "\n"


def loads(text):
    header = {}
    transitions = []
    for raw in text.split("\n"):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if sep and key.strip() in ("alphabet", "states", "initial", "accepting"):
            header[key.strip()] = value.strip()
            continue
        try:
            left, rest = line.split("(", 1)
            inner, right = rest.split(")", 1)
            letter = tuple(s.strip() for s in inner.split(",")) if inner.strip() else ()
            transitions.append((int(left), letter, int(right)))
        except ValueError:
            raise ValueError(f"malformed transition line: {raw!r}") from None
    for key in ("alphabet", "states", "initial", "accepting"):
        if key not in header:
            raise ValueError(f"missing header {key!r}")
    tracks = []
    for part in header["alphabet"].split(";"):
        part = part.strip()
        if not part:
            continue
        name, _, syms = part.partition("=")
        tracks.append((name.strip(), tuple(s.strip() for s in syms.split(","))))
    alphabet = Alphabet(tuple(tracks))
    n = int(header["states"])
    accepting = [int(s) for s in header["accepting"].split(",") if s.strip()]
    initials = [int(s) for s in header["initial"].split(",")]
    if len(initials) == 1:
        return BuchiAutomaton(alphabet, n, initials[0], transitions, accepting)
    # several initial states: fresh initial state n copies their moves
    extra = [(n, x, q) for p, x, q in transitions if p in initials]
    return BuchiAutomaton(alphabet, n + 1, n, transitions + extra, accepting)


# ---------------------------------------------------- parity determinization
#
# Safra trees with age-ordered names: a node's name is smaller than the
# names of all nodes created after it. Each step emits a priority (min
# parity): 2j for the smallest marked name j, 2i-1 for the smallest removed
# name i, whichever is smaller; a step with neither emits the largest odd
# value. Names are compacted after every step.

class _Node:
    __slots__ = ("name", "label", "children")

    def __init__(self, name, label, children):
        self.name = name
        self.label = label
        self.children = children


def _thaw(tree):
    name, label, children = tree
    return _Node(name, set(label), [_thaw(c) for c in children])


def _freeze(node):
    return (node.name, frozenset(node.label), tuple(_freeze(c) for c in node.children))


def _safra_step(a, tree, letter, quiet):
    if tree is None:
        return None, quiet
    root = _thaw(tree)
    nodes = []

    def preorder(v):
        nodes.append(v)
        for c in v.children:
            preorder(c)

    preorder(root)
    fresh = max(v.name for v in nodes) + 1
    for v in nodes:
        hits = v.label & a.accepting
        if hits:
            v.children.append(_Node(fresh, set(hits), []))
            fresh += 1
    all_nodes = []

    def update(v):
        all_nodes.append(v)
        v.label = a.post(v.label, letter)
        for c in v.children:
            update(c)

    update(root)

    def prune(v):
        avail = set(v.label)
        for c in v.children:
            c.label &= avail
            prune(c)
            avail -= c.label

    prune(root)
    removed, marked = [], []

    def collect(v):
        removed.append(v.name)
        for c in v.children:
            collect(c)

    def sweep(v):
        kept = []
        for c in v.children:
            if c.label:
                kept.append(c)
            else:
                collect(c)
        v.children = kept
        if v.children and set().union(*(c.label for c in v.children)) == v.label:
            for c in v.children:
                collect(c)
            v.children = []
            marked.append(v.name)
        for c in v.children:
            sweep(c)

    if not root.label:
        return None, 2 * min(v.name for v in all_nodes) - 1
    sweep(root)
    low_removed = min(removed, default=None)
    low_marked = min(marked, default=None)
    if low_marked is not None and (low_removed is None or low_marked < low_removed):
        priority = 2 * low_marked
    elif low_removed is not None:
        priority = 2 * low_removed - 1
    else:
        priority = quiet
    survivors = []
    preorder_all = []

    def gather(v):
        preorder_all.append(v)
        for c in v.children:
            gather(c)

    gather(root)
    survivors = sorted(v.name for v in preorder_all)
    rank = {name: i + 1 for i, name in enumerate(survivors)}
    for v in preorder_all:
        v.name = rank[v.name]
    return _freeze(root), priority


def determinize(a):
    """Deterministic parity automaton for L(a).

    Returns ``(succ, priority)``: ``succ[i][letter]`` is the unique
    successor of state ``i`` and ``priority[i]`` the priority of entering
    it. A run is accepting iff the least priority seen infinitely often is
    even.
    """
    quiet = 4 * a.num_states + 3
    letters = a.alphabet.letters
    start = ((1, frozenset([a.initial]), ()), quiet)
    budget = _budget.get()
    ids = {start: 0}
    keys = [start]
    succ = []
    i = 0
    while i < len(keys):
        tree, _ = keys[i]
        i += 1
        out = {}
        for x in letters:
            nxt = _safra_step(a, tree, x, quiet)
            j = ids.get(nxt)
            if j is None:
                j = ids[nxt] = len(keys)
                keys.append(nxt)
                if len(keys) > budget:
                    raise ResourceLimit(f"automaton exceeds state budget of {budget}")
            out[x] = j
        succ.append(out)
    return succ, [k[1] for k in keys]


def _complement_parity(a):
    # guess the odd priority p that is minimal among those seen infinitely
    # often; copy p only visits states of priority >= p and accepts at p
    dsucc, priority = determinize(a)
    odd = sorted({p for p in priority if p % 2 == 1})

    def expand(key):
        level, s = key
        for x, t in dsucc[s].items():
            if level is None:
                yield x, (None, t)
                for p in odd:
                    if priority[t] >= p:
                        yield x, (p, t)
            elif priority[t] >= level:
                yield x, (level, t)

    result, _ = explore(a.alphabet, (None, 0), expand,
                        lambda k: k[0] is not None and priority[k[1]] == k[0])
    return trim(result)
