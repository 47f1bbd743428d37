"""Configurations with finite support and the finite-word automaton of their dynamics.

A finite-support configuration is quiescent outside a finite window. Its
encoding is the folded word x(0..N) with x(n) = (c(-n), c(n)), cut at the
last letter that is not (#, #), where N is the largest |i| with c(i) != #.
Pairs of encodings are convolved with an explicit pad symbol.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from . import automata as au
from .ca import pair_symbol, relation_step, RELATION_START, split_symbol

PAD = "_"


class NoQuiescentState(ValueError):
    pass


def _require_quiescent(rule):
    if rule.quiescent is None:
        raise NoQuiescentState(f"rule {rule.name or '<table>'} has no quiescent state")
    return rule.quiescent


@dataclass(frozen=True)
class FiniteConfiguration:
    """Cells ``word`` starting at index ``offset``; ``quiescent`` everywhere else."""

    word: tuple
    offset: int
    quiescent: str

    def __post_init__(self):
        word = tuple(self.word)
        lo, hi = 0, len(word)
        while lo < hi and word[lo] == self.quiescent:
            lo += 1
        while hi > lo and word[hi - 1] == self.quiescent:
            hi -= 1
        object.__setattr__(self, "word", word[lo:hi])
        object.__setattr__(self, "offset", self.offset + lo if hi > lo else 0)

    @property
    def end(self):
        return self.offset + len(self.word)

    def __call__(self, i):
        if self.offset <= i < self.end:
            return self.word[i - self.offset]
        return self.quiescent

    @property
    def extent(self):
        """Largest |i| with a non-quiescent cell, or 0."""
        if not self.word:
            return 0
        return max(abs(self.offset), abs(self.end - 1))

    def __str__(self):
        sep = "" if all(len(s) == 1 for s in self.word) else ","
        return f"{sep.join(self.word)}@{self.offset}"


def parse_finite(text, quiescent):
    m = re.fullmatch(r'\s*"?([^"@]*)"?\s*@\s*(-?\d+)\s*', text)
    if not m:
        raise ValueError(f"malformed finite configuration {text!r}")
    word = m.group(1).strip()
    cells = tuple(s.strip() for s in word.split(",")) if "," in word else tuple(word)
    return FiniteConfiguration(cells, int(m.group(2)), quiescent)


def step(rule, c):
    _require_quiescent(rule)
    r = rule.radius
    lo, hi = c.offset - r, c.end + r
    cells = tuple(rule.table[tuple(c(j) for j in range(i - r, i + r + 1))] for i in range(lo, hi))
    return FiniteConfiguration(cells, lo, c.quiescent)


def encode(c):
    """Folded word of pair symbols, cut after the last non-quiescent letter."""
    return tuple(pair_symbol(c(-n), c(n)) if n else pair_symbol(c(0), c(0))
                 for n in range(c.extent + 1))


def decode(word, quiescent):
    if not word:
        raise ValueError("encodings have at least one letter")
    first = split_symbol(word[0])
    if first[0] != first[1]:
        raise ValueError(f"first letter {word[0]} is not diagonal")
    n = len(word) - 1
    cells = [split_symbol(word[i])[0] for i in range(n, 0, -1)] + [first[0]]
    cells += [split_symbol(word[i])[1] for i in range(1, n + 1)]
    return FiniteConfiguration(tuple(cells), -n, quiescent)


def convolve(*words):
    length = max(len(w) for w in words)
    return tuple(tuple(w[i] if i < len(w) else PAD for w in words) for i in range(length))


class WordAutomaton:
    """Nondeterministic automaton on finite words over an :class:`Alphabet`."""

    def __init__(self, alphabet, num_states, initial, transitions, accepting):
        self.alphabet = alphabet
        self.num_states = num_states
        self.initial = initial
        succ = [dict() for _ in range(num_states)]
        for p, x, q in transitions:
            if not (0 <= p < num_states and 0 <= q < num_states):
                raise ValueError(f"transition ({p}, {x}, {q}) leaves the state range")
            if x not in alphabet:
                raise au.AlphabetMismatch(f"letter {x} is not in the alphabet")
            succ[p].setdefault(x, set()).add(q)
        self.succ = [{x: tuple(sorted(qs)) for x, qs in d.items()} for d in succ]
        if not 0 <= initial < num_states:
            raise ValueError("initial state out of range")
        self.accepting = frozenset(accepting)
        if not self.accepting <= set(range(num_states)):
            raise ValueError("accepting states out of range")

    @property
    def is_deterministic(self):
        return all(len(qs) == 1 for d in self.succ for qs in d.values())

    @property
    def num_transitions(self):
        return sum(len(qs) for d in self.succ for qs in d.values())

    def accepts(self, word):
        current = {self.initial}
        for x in word:
            if x not in self.alphabet:
                raise au.AlphabetMismatch(f"letter {x} is not in the alphabet")
            current = {q for p in current for q in self.succ[p].get(x, ())}
            if not current:
                return False
        return bool(current & self.accepting)


def _track(status, letter, quiet):
    """Track end-marking: 'z' at position 0, 'q'/'b' after a quiet/busy letter, 'c' once padded."""
    if letter == PAD:
        return None if status == "q" else "c"
    if status == "c":
        return None
    return "q" if letter == quiet else "b"


def build_finite_relation(rule, tracks=("x", "y")):
    """Deterministic automaton accepting padded (encode c, encode c') with Δ(c) = c'."""
    q = _require_quiescent(rule)
    r = rule.radius
    quiet = pair_symbol(q, q)
    pairs = {s: split_symbol(s) for s in rule.pair_symbols}
    symbols = rule.pair_symbols + (PAD,)
    alphabet = au.Alphabet.of((tracks[0], symbols), (tracks[1], symbols))
    letters = [x for x in alphabet.letters if x != (PAD, PAD)]

    def advance(key, x, y):
        window, flags = key
        if window == RELATION_START and PAD in (x, y):
            return None
        fx = _track(flags[0], x, quiet) if flags else ("z" if x != PAD else None)
        fy = _track(flags[1], y, quiet) if flags else ("z" if y != PAD else None)
        if fx is None or fy is None:
            return None
        nxt = relation_step(rule, window, pairs[x if x != PAD else quiet], pairs[y if y != PAD else quiet])
        if nxt is None:
            return None
        return nxt, (fx, fy)

    def accepting(key):
        window, flags = key
        if not flags or "q" in flags:
            return False
        # cells past the end are quiescent; settle the checks still pending
        for _ in range(2 * r):
            window = relation_step(rule, window, pairs[quiet], pairs[quiet])
            if window is None:
                return False
        return True

    start = (RELATION_START, ())
    ids = {start: 0}
    keys = [start]
    transitions = []
    i = 0
    budget = au.current_budget()
    while i < len(keys):
        key = keys[i]
        for x in letters:
            nxt = advance(key, *x)
            if nxt is None:
                continue
            if nxt not in ids:
                ids[nxt] = len(keys)
                keys.append(nxt)
                if len(keys) > budget:
                    raise au.ResourceLimit(f"automaton exceeds state budget of {budget}")
            transitions.append((i, x, ids[nxt]))
        i += 1
    return WordAutomaton(alphabet, len(keys), 0, transitions,
                         [j for j, k in enumerate(keys) if accepting(k)])


# ---------------------------------------------------------- exploration

@dataclass(frozen=True)
class Reached:
    steps: int


@dataclass(frozen=True)
class NotWithin:
    max_steps: int


@dataclass(frozen=True)
class Confluent:
    meeting: FiniteConfiguration
    left_steps: int
    right_steps: int


def _orbit(rule, c, max_steps):
    """First visit index of each configuration on the orbit of ``c`` within ``max_steps``."""
    seen = {}
    for i in range(max_steps + 1):
        if c in seen:
            break
        seen[c] = i
        if i < max_steps:
            c = step(rule, c)
    return seen


def bounded_reachability(rule, source, target, max_steps):
    """Least number of steps <= max_steps taking ``source`` to ``target``."""
    _require_quiescent(rule)
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    found = _orbit(rule, source, max_steps).get(target)
    return NotWithin(max_steps) if found is None else Reached(found)


def bounded_confluence(rule, x, y, max_steps):
    """Common successor of ``x`` and ``y`` within ``max_steps`` steps each."""
    _require_quiescent(rule)
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    left = _orbit(rule, x, max_steps)
    right = _orbit(rule, y, max_steps)
    best = None
    for z, i in left.items():
        j = right.get(z)
        if j is not None and (best is None or (i + j, i) < (best[1] + best[2], best[1])):
            best = (z, i, j)
    return NotWithin(max_steps) if best is None else Confluent(*best)
