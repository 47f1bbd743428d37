"""One-dimensional cellular automata and their folded ω-word presentation.

A configuration c is folded into the ω-word x_c over Q x Q with
x_c(0) = (c(0), c(0)) and x_c(n) = (c(-n), c(n)). The first component of
every letter carries the negative half-axis.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property

from . import automata as au


class RuleError(ValueError):
    pass


class DomainViolation(ValueError):
    pass


class NotWithinDomain(ValueError):
    pass


_RESERVED = set(",;=()#/@ \t\n^")


def pair_symbol(a, b):
    return f"{a}/{b}"


def split_symbol(sym):
    a, _, b = sym.partition("/")
    return a, b


@dataclass(frozen=True)
class CaRule:
    states: tuple
    radius: int
    table: dict
    quiescent: str | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(str(s) for s in self.states))
        if len(set(self.states)) != len(self.states) or not self.states:
            raise RuleError("states must be distinct and non-empty")
        for s in self.states:
            if not s or set(s) & _RESERVED:
                raise RuleError(f"state name {s!r} is empty or uses a reserved character")
        if self.radius < 1:
            raise RuleError("radius must be >= 1")
        width = 2 * self.radius + 1
        expected = len(self.states) ** width
        if len(self.table) != expected:
            raise RuleError(f"table has {len(self.table)} entries, needs {expected}")
        known = set(self.states)
        for nbhd, out in self.table.items():
            if len(nbhd) != width or not set(nbhd) <= known or out not in known:
                raise RuleError(f"bad table entry {nbhd} -> {out}")
        if self.quiescent is not None:
            q = self.quiescent
            if q not in known:
                raise RuleError(f"quiescent state {q!r} is not a state")
            if self.table[(q,) * width] != q:
                raise RuleError(f"state {q!r} is not quiescent")

    def __hash__(self):
        return hash((self.states, self.radius, tuple(sorted(self.table.items())), self.quiescent))

    def __call__(self, *nbhd):
        return self.table[tuple(nbhd)]

    @property
    def width(self):
        return 2 * self.radius + 1

    @cached_property
    def pair_symbols(self):
        return tuple(pair_symbol(a, b) for a in self.states for b in self.states)

    @cached_property
    def diagonal_symbols(self):
        return tuple(pair_symbol(a, a) for a in self.states)


def eca(code):
    """Elementary rule with Wolfram number ``code``: bit 4l+2c+r holds δ(l,c,r)."""
    if not 0 <= code <= 255:
        raise RuleError(f"elementary rule code {code} out of range")
    table = {}
    for l in (0, 1):
        for c in (0, 1):
            for r in (0, 1):
                table[(str(l), str(c), str(r))] = str((code >> (4 * l + 2 * c + r)) & 1)
    quiescent = None
    for q in ("0", "1"):
        if table[(q, q, q)] == q:
            quiescent = q
            break
    return CaRule(("0", "1"), 1, table, quiescent, name=f"eca:{code}")


def shift_rule(states):
    """δ(l, c, r) = r over the given states; Δ(c)(i) = c(i+1)."""
    states = tuple(str(s) for s in states)
    table = {(l, c, r): r for l in states for c in states for r in states}
    return CaRule(states, 1, table, states[0], name=f"shift:{len(states)}")


def _cells(text):
    text = text.strip()
    if "," in text:
        return tuple(s.strip() for s in text.split(","))
    if " " in text:
        return tuple(text.split())
    return tuple(text)


def parse_rule(spec):
    """Parse ``eca:<code>`` or the text of a rule table file."""
    spec = spec.strip()
    m = re.fullmatch(r"eca:(\d+)", spec)
    if m:
        return eca(int(m.group(1)))
    if spec.startswith("eca:"):
        raise RuleError(f"malformed elementary rule spec {spec!r}")
    states = radius = None
    quiescent = None
    table = {}
    for raw in spec.splitlines():
        line = raw.split("#", 1)[0].strip() if not raw.strip().startswith("quiescent") else raw.strip()
        if not line:
            continue
        if "->" in line:
            left, right = line.split("->")
            nbhd = _cells(left)
            if nbhd in table:
                raise RuleError(f"duplicate neighbourhood {left.strip()!r}")
            table[nbhd] = right.strip()
            continue
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if key == "states":
            states = tuple(s.strip() for s in value.split(","))
        elif key == "radius":
            radius = int(value)
        elif key == "quiescent":
            quiescent = value
        else:
            raise RuleError(f"unrecognised line {raw!r}")
    if states is None or radius is None:
        raise RuleError("rule table needs 'states:' and 'radius:' headers")
    return CaRule(states, radius, table, quiescent)


def format_rule(rule):
    lines = [f"states: {','.join(rule.states)}", f"radius: {rule.radius}"]
    if rule.quiescent is not None:
        lines.append(f"quiescent: {rule.quiescent}")
    sep = "" if all(len(s) == 1 for s in rule.states) else ","
    for nbhd in sorted(rule.table):
        lines.append(f"{sep.join(nbhd)} -> {rule.table[nbhd]}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ configurations

@dataclass(frozen=True)
class UPConfiguration:
    """Bi-infinite configuration: ...LLL center RRR... with center at ``start``.

    Instances are always stored in canonical form (primitive periods,
    minimal center, fixed anchoring), so ``==`` is configuration equality.
    """

    left: tuple
    center: tuple
    right: tuple
    start: int = 0

    def __post_init__(self):
        left, center, right = tuple(self.left), tuple(self.center), tuple(self.right)
        if not left or not right:
            raise ValueError("periods must be non-empty")
        form = _canonical(left, center, right, self.start)
        for name, value in zip(("left", "center", "right", "start"), form):
            object.__setattr__(self, name, value)

    @property
    def end(self):
        return self.start + len(self.center)

    def __call__(self, i):
        return _cell(self.left, self.center, self.right, self.start, i)

    def window(self, lo, hi):
        return tuple(self(i) for i in range(lo, hi))

    def __str__(self):
        return format_config(self)


def _cell(left, center, right, start, i):
    end = start + len(center)
    if start <= i < end:
        return center[i - start]
    if i >= end:
        return right[(i - end) % len(right)]
    return left[(i - start) % len(left)]


def _canonical(left, center, right, start):
    pl = len(au.primitive_root(left))
    pr = len(au.primitive_root(right))
    left, right = left[-pl:], right[:pr]
    end = start + len(center)

    def c(i):
        return _cell(left, center, right, start, i)

    floor = start - pl - pr - 1
    b = end
    while c(b - 1) == c(b - 1 + pr):
        b -= 1
        if b < floor:
            block = tuple(c(i) for i in range(pr))
            p = au.primitive_root(block)
            return p, (), p, 0
    a = start
    ceiling = end + pl + pr + 1
    while c(a) == c(a - pl):
        a += 1
        if a > ceiling:
            block = tuple(c(i) for i in range(pl))
            p = au.primitive_root(block)
            return p, (), p, 0
    lo = min(a, b)
    return (tuple(c(i) for i in range(lo - pl, lo)), tuple(c(i) for i in range(lo, b)),
            tuple(c(i) for i in range(b, b + pr)), lo)


_LITERAL = re.compile(
    r"^\s*\((?P<left>[^()]*)\)\^w\s*(?P<center>[^()@]*?)\s*(?:@\s*(?P<start>-?\d+))?\s*"
    r"\((?P<right>[^()]*)\)\^w\s*$")


def parse_config(text):
    """Parse ``(L)^w C (R)^w`` with an optional ``@i`` after the center."""
    m = _LITERAL.match(text)
    if not m:
        raise ValueError(f"malformed configuration literal {text!r}")
    start = int(m.group("start")) if m.group("start") else 0
    center = _cells(m.group("center")) if m.group("center").strip() else ()
    return UPConfiguration(_cells(m.group("left")), center, _cells(m.group("right")), start)


def format_config(c):
    cells = c.left + c.center + c.right
    sep = "" if all(len(s) == 1 for s in cells) else ","
    center = sep.join(c.center)
    anchor = f"@{c.start}" if c.start != 0 else ""
    middle = f" {center}{anchor} " if center or anchor else " "
    return f"({sep.join(c.left)})^w{middle}({sep.join(c.right)})^w"


def constant_config(q):
    return UPConfiguration((q,), (), (q,), 0)


def shift(c, k=1):
    """The configuration i -> c(i + k)."""
    return UPConfiguration(c.left, c.center, c.right, c.start - k)


def step(rule, c):
    """Apply the global map once."""
    r = rule.radius
    pl, pr = len(c.left), len(c.right)
    lo, hi = c.start - r, c.end + r

    def new(i):
        return rule.table[c.window(i - r, i + r + 1)]

    left = tuple(new(i) for i in range(lo - pl, lo))
    center = tuple(new(i) for i in range(lo, hi))
    right = tuple(new(i) for i in range(hi, hi + pr))
    return UPConfiguration(left, center, right, lo)


# ------------------------------------------------------------------ folding

def encode(c):
    """Folded lasso over a single Q x Q track (letters are 1-tuples)."""
    n0 = max(1, c.end, 1 - c.start)
    period = math.lcm(len(c.left), len(c.right))

    def letter(n):
        if n == 0:
            return (pair_symbol(c(0), c(0)),)
        return (pair_symbol(c(-n), c(n)),)

    stem = [letter(n) for n in range(n0)]
    loop = [letter(n) for n in range(n0, n0 + period)]
    return au.canonical_lasso(stem, loop)


def decode(w):
    """Inverse of :func:`encode`; the first letter must be diagonal."""
    def pair(i):
        x = w[i]
        return split_symbol(x[0] if isinstance(x, tuple) else x)

    a, b = pair(0)
    if a != b:
        raise DomainViolation(f"first letter {a}/{b} is not diagonal")
    t = max(len(w.stem), 1)
    k = len(w.loop)
    center = [pair(n)[0] for n in range(t - 1, 0, -1)] + [a] + [pair(n)[1] for n in range(1, t)]
    right = [pair(t + i)[1] for i in range(k)]
    left = [pair(n)[0] for n in range(t + k - 1, t - 1, -1)]
    return UPConfiguration(tuple(left), tuple(center), tuple(right), -(t - 1))


def convolve(*words):
    """Letter-wise product of lassos (letters are concatenated tuples)."""
    s = max(len(w.stem) for w in words)
    k = math.lcm(*(len(w.loop) for w in words))
    columns = [_unroll(w, s + k) for w in words]
    letters = [tuple(itertools.chain.from_iterable(parts)) for parts in zip(*columns)]
    return au.LassoWord(tuple(letters[:s]), tuple(letters[s:]))


def _unroll(w, n):
    reps = -(-(n - len(w.stem)) // len(w.loop))
    return (w.stem + w.loop * reps)[:n]


def split(w, arity):
    """Undo :func:`convolve` on single-component tracks."""
    return [au.LassoWord(tuple((x[j],) for x in w.stem), tuple((x[j],) for x in w.loop))
            for j in range(arity)]


# ---------------------------------------------------------------- automata

def build_domain_automaton(states, track="x"):
    """Words whose first letter is diagonal: the encodings of all configurations."""
    states = tuple(states)
    symbols = [pair_symbol(a, b) for a in states for b in states]
    alphabet = au.Alphabet.of((track, symbols))
    succ = [{(pair_symbol(a, a),): (1,) for a in states}, {(s,): (1,) for s in symbols}]
    return au.BuchiAutomaton._raw(alphabet, succ, 0, frozenset([1]))


def build_equality(states, tracks=("x", "y")):
    states = tuple(states)
    symbols = [pair_symbol(a, b) for a in states for b in states]
    alphabet = au.Alphabet.of((tracks[0], symbols), (tracks[1], symbols))
    succ = [{(pair_symbol(a, a),) * 2: (1,) for a in states}, {(s, s): (1,) for s in symbols}]
    return au.BuchiAutomaton._raw(alphabet, succ, 0, frozenset([1]))


def build_inequality(states, tracks=("x", "y")):
    """Pairs of distinct configurations (deterministic, weak)."""
    states = tuple(states)
    symbols = [pair_symbol(a, b) for a in states for b in states]
    alphabet = au.Alphabet.of((tracks[0], symbols), (tracks[1], symbols))
    diag = [pair_symbol(a, a) for a in states]
    start = {(s, t): ((1,) if s == t else (2,)) for s in diag for t in diag}
    same = {(s, t): ((1,) if s == t else (2,)) for s in symbols for t in symbols}
    diff = {(s, t): (2,) for s in symbols for t in symbols}
    return au.BuchiAutomaton._raw(alphabet, [start, same, diff], 0, frozenset([2]))


def _window_ok(rule, xs, ys, n):
    """Check c'(n) and c'(-n) against the folded prefix ``xs`` (pairs)."""
    r = rule.radius

    def cell(j):
        return xs[j][1] if j >= 0 else xs[-j][0]

    right = rule.table[tuple(cell(j) for j in range(n - r, n + r + 1))]
    left = rule.table[tuple(cell(j) for j in range(-n - r, -n + r + 1))]
    return ys[n] == (left, right)


RELATION_START = ("pre", (), ())


def relation_step(rule, key, x, y):
    """Advance the sliding-window check by the folded pairs ``x`` of c and ``y`` of c'.

    Returns the next key, or None when a check fails.
    """
    r = rule.radius
    phase, xs, ys = key
    if phase == "pre":
        m = len(xs)
        if m == 0 and (x[0] != x[1] or y[0] != y[1]):
            return None
        xs, ys = xs + (x,), ys + (y,)
        if m < 2 * r:
            return ("pre", xs, ys)
        if all(_window_ok(rule, xs, ys, n) for n in range(r + 1)):
            return ("run", xs[1:], ys[-r:])
        return None
    window = xs + (x,)
    # ys[0] is c'(±n) for n = m - r; window holds positions n-r .. n+r
    left = rule.table[tuple(window[j][0] for j in range(2 * r, -1, -1))]
    right = rule.table[tuple(window[j][1] for j in range(2 * r + 1))]
    if ys[0] != (left, right):
        return None
    return ("run", window[1:], ys[1:] + (y,))


def build_transition_relation(rule, tracks=("x", "y"), fixed=False):
    """Deterministic safety automaton for {(x_c, x_c') : Δ(c) = c'}.

    The automaton keeps the last 2r folded cells of c and the last r cells
    of c' and checks c'(±n) once position n + r has been read. Positions
    n <= r, whose neighbourhoods cross the origin, are checked together when
    position 2r is read. With ``fixed=True`` it reads one track and checks
    Δ(c) = c (fixed points).
    """
    states = rule.states
    pairs = [(a, b) for a in states for b in states]
    if fixed:
        letters = [((p, p), (pair_symbol(*p),)) for p in pairs]
        alphabet = au.Alphabet.of((tracks[0], rule.pair_symbols))
    else:
        letters = [((p, q), (pair_symbol(*p), pair_symbol(*q))) for p in pairs for q in pairs]
        alphabet = au.Alphabet.of((tracks[0], rule.pair_symbols), (tracks[1], rule.pair_symbols))

    def expand(key):
        for (x, y), letter in letters:
            nxt = relation_step(rule, key, x, y)
            if nxt is not None:
                yield letter, nxt

    result, _ = au.explore(alphabet, RELATION_START, expand, lambda k: True)
    return result


class PredicateRegistry:
    """Named unary predicates given by automata over one Q x Q track."""

    def __init__(self, states):
        self.states = tuple(states)
        self._domain = build_domain_automaton(self.states, "x")
        self._outside = au.complement(self._domain)
        self._preds = {}

    def register(self, name, automaton):
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise ValueError(f"invalid predicate name {name!r}")
        if name in self._preds:
            raise ValueError(f"predicate {name!r} already registered")
        if automaton.alphabet.arity != 1:
            raise NotWithinDomain("predicate automata read exactly one track")
        a = au.rename(automaton, {automaton.alphabet.names[0]: "x"})
        if a.alphabet != self._domain.alphabet:
            raise NotWithinDomain("predicate alphabet must be the Q x Q pair alphabet")
        empty, witness = au.is_empty(au.intersect(a, self._outside))
        if not empty:
            raise NotWithinDomain(f"predicate {name!r} accepts a non-configuration word {witness}")
        self._preds[name] = a
        return a

    def __contains__(self, name):
        return name in self._preds

    def __getitem__(self, name):
        return self._preds[name]

    def names(self):
        return sorted(self._preds)


def build_regular_predicate(registry, name, automaton):
    return registry.register(name, automaton)


def config_automaton(states, c, track="x"):
    """Automaton accepting exactly the encoding of ``c``."""
    symbols = [pair_symbol(a, b) for a in states for b in states]
    return au.word_automaton(au.Alphabet.of((track, symbols)), encode(c))


@dataclass
class Presentation:
    """The automatic presentation of the phase space of ``rule``."""

    rule: CaRule

    @cached_property
    def domain(self):
        return build_domain_automaton(self.rule.states)

    @cached_property
    def relation(self):
        return build_transition_relation(self.rule)

    @cached_property
    def fixed(self):
        return build_transition_relation(self.rule, fixed=True)

    @cached_property
    def equality(self):
        return build_equality(self.rule.states)

    @cached_property
    def inequality(self):
        return build_inequality(self.rule.states)

    @property
    def symbols(self):
        return self.rule.pair_symbols
