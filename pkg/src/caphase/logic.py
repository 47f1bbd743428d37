"""Formulas over configurations: syntax, printing and fragment validation.

Grammar (ASCII)::

    formula  := iff
    iff      := impl ("<=>" impl)*
    impl     := or ("=>" impl)?
    or       := and ("|" and)*
    and      := unary ("&" unary)*
    unary    := "~" unary | quant | atom | "(" formula ")"
    quant    := ("E" | "A" | "Einf" | "Ecard[" card "]" | "Emod[" t "," k "]") binder "." formula
              | "H" binder "." "(" formula ";" formula ")"
    binder   := var | "(" var ("," var)* ")"
    card     := nat | "aleph0" | "continuum"
    atom     := var "->" var | var "=" var | "In[" name "](" var ")"

Quantifier bodies extend as far to the right as possible.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .cardinality import CardinalityClass, finite


class FormulaSyntaxError(ValueError):
    def __init__(self, message, text="", pos=0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.pos = pos
        self.line = line
        self.column = col


class FragmentViolation(ValueError):
    pass


# ------------------------------------------------------------------- AST

@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Rel(Formula):
    src: str
    dst: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Pred(Formula):
    name: str
    var: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Not(Formula):
    body: Formula
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Exists(Formula):
    vars: tuple
    body: Formula
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Forall(Formula):
    vars: tuple
    body: Formula
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ExistsInf(Formula):
    vars: tuple
    body: Formula
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ExistsCard(Formula):
    card: CardinalityClass
    vars: tuple
    body: Formula
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ExistsMod(Formula):
    t: int
    k: int
    vars: tuple
    body: Formula
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Haertig(Formula):
    vars: tuple
    left: Formula
    right: Formula
    pos: int = field(default=0, compare=False)


BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Exists, Forall, ExistsInf, ExistsCard, ExistsMod, Haertig)
COUNTING = (ExistsInf, ExistsCard, ExistsMod, Haertig)


def children(f):
    if isinstance(f, Not):
        return (f.body,)
    if isinstance(f, BINARY) or isinstance(f, Haertig):
        return (f.left, f.right)
    if isinstance(f, QUANTIFIERS):
        return (f.body,)
    return ()


def free_vars(f):
    if isinstance(f, Rel):
        return frozenset((f.src, f.dst))
    if isinstance(f, Eq):
        return frozenset((f.left, f.right))
    if isinstance(f, Pred):
        return frozenset((f.var,))
    inner = frozenset().union(*(free_vars(c) for c in children(f)))
    if isinstance(f, QUANTIFIERS):
        return inner - set(f.vars)
    return inner


def quantifier_depth(f):
    below = max((quantifier_depth(c) for c in children(f)), default=0)
    return below + (1 if isinstance(f, QUANTIFIERS) else 0)


# --------------------------------------------------------------- lexer

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><=>|=>|->|[~&|=().;,\[\]])
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)

KEYWORDS = {"E", "A", "H", "Einf", "Ecard", "Emod", "In"}


def _tokens(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        shown = tok[1] or "end of input"
        raise FormulaSyntaxError(f"{message}, found {shown!r}", self.text, tok[2])

    def expect(self, value):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != value:
            self.fail(f"expected {value!r}")
        return self.next()

    def at(self, value):
        tok = self.peek()
        return tok[0] == "op" and tok[1] == value

    def formula(self):
        left = self.impl()
        while self.at("<=>"):
            pos = self.next()[2]
            left = Iff(left, self.impl(), pos)
        return left

    def impl(self):
        left = self.disj()
        if self.at("=>"):
            pos = self.next()[2]
            return Implies(left, self.impl(), pos)
        return left

    def disj(self):
        left = self.conj()
        while self.at("|"):
            pos = self.next()[2]
            left = Or(left, self.conj(), pos)
        return left

    def conj(self):
        left = self.unary()
        while self.at("&"):
            pos = self.next()[2]
            left = And(left, self.unary(), pos)
        return left

    def variable(self):
        tok = self.peek()
        if tok[0] != "ident" or tok[1] in KEYWORDS:
            self.fail("expected a variable")
        return self.next()[1]

    def binder(self):
        if self.at("("):
            self.next()
            names = [self.variable()]
            while self.at(","):
                self.next()
                names.append(self.variable())
            self.expect(")")
        else:
            names = [self.variable()]
        if len(set(names)) != len(names):
            self.fail("repeated variable in binder", self.toks[self.i - 1])
        self.expect(".")
        return tuple(names)

    def number(self):
        tok = self.peek()
        if tok[0] != "num":
            self.fail("expected a number")
        return int(self.next()[1])

    def unary(self):
        tok = self.peek()
        kind, value, pos = tok
        if value == "~":
            self.next()
            return Not(self.unary(), pos)
        if value == "(" and kind == "op":
            self.next()
            inner = self.formula()
            self.expect(")")
            return inner
        if kind == "ident" and value in KEYWORDS:
            return self.keyword()
        if kind == "ident":
            left = self.variable()
            if self.at("->"):
                self.next()
                return Rel(left, self.variable(), pos)
            if self.at("="):
                self.next()
                return Eq(left, self.variable(), pos)
            self.fail("expected '->' or '='")
        self.fail("expected a formula")

    def keyword(self):
        kind, value, pos = self.next()
        if value == "In":
            self.expect("[")
            name = self.peek()
            if name[0] != "ident":
                self.fail("expected a predicate name")
            self.next()
            self.expect("]")
            self.expect("(")
            var = self.variable()
            self.expect(")")
            return Pred(name[1], var, pos)
        if value == "Ecard":
            self.expect("[")
            tok = self.peek()
            if tok[0] == "num":
                card = finite(self.number())
            elif tok[1] in ("aleph0", "continuum"):
                self.next()
                card = CardinalityClass(tok[1])
            else:
                self.fail("expected a cardinal")
            self.expect("]")
            names = self.binder()
            return ExistsCard(card, names, self.formula(), pos)
        if value == "Emod":
            self.expect("[")
            t = self.number()
            self.expect(",")
            k = self.number()
            self.expect("]")
            names = self.binder()
            return ExistsMod(t, k, names, self.formula(), pos)
        names = self.binder()
        if value == "H":
            self.expect("(")
            left = self.formula()
            self.expect(";")
            right = self.formula()
            self.expect(")")
            return Haertig(names, left, right, pos)
        node = {"E": Exists, "A": Forall, "Einf": ExistsInf}[value]
        return node(names, self.formula(), pos)


def parse_formula(text):
    parser = _Parser(text)
    result = parser.formula()
    if parser.peek()[0] != "end":
        parser.fail("unexpected trailing input")
    return result


# -------------------------------------------------------------- printer

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYMBOL = {Iff: "<=>", Implies: "=>", Or: "|", And: "&"}


def _binder(names):
    return names[0] if len(names) == 1 else "(" + ",".join(names) + ")"


def _card(card):
    return str(card.n) if card.kind in ("finite", "empty") else card.kind


def format_formula(f):
    return _show(f, 0, True)


def _show(f, prec, last):
    """``prec`` is the binding strength required; ``last`` says nothing follows."""
    if isinstance(f, Rel):
        return f"{f.src}->{f.dst}"
    if isinstance(f, Eq):
        return f"{f.left}={f.right}"
    if isinstance(f, Pred):
        return f"In[{f.name}]({f.var})"
    if isinstance(f, Not):
        return "~" + _show(f.body, 5, last)
    if isinstance(f, BINARY):
        p = _PREC[type(f)]
        right_assoc = isinstance(f, Implies)
        left = _show(f.left, p if not right_assoc else p + 1, False)
        right = _show(f.right, p + 1 if not right_assoc else p, last or p < prec)
        text = f"{left} {_SYMBOL[type(f)]} {right}"
        return f"({text})" if p < prec else text
    if isinstance(f, Haertig):
        return f"H {_binder(f.vars)}. ({_show(f.left, 0, True)} ; {_show(f.right, 0, True)})"
    if isinstance(f, ExistsCard):
        head = f"Ecard[{_card(f.card)}] "
    elif isinstance(f, ExistsMod):
        head = f"Emod[{f.t},{f.k}] "
    else:
        head = {Exists: "E ", Forall: "A ", ExistsInf: "Einf "}[type(f)]
    text = f"{head}{_binder(f.vars)}. {_show(f.body, 0, True)}"
    return text if last else f"({text})"


# ----------------------------------------------------------- validation

@dataclass(frozen=True)
class Problem:
    kind: str
    message: str
    pos: int = 0

    def __str__(self):
        return f"{self.kind}: {self.message}"


def validate(f, registry=(), free=()):
    """Return the list of problems in ``f`` (empty when it is acceptable)."""
    problems = []

    def walk(g, scope):
        if isinstance(g, (Rel, Eq, Pred)):
            for v in sorted(free_vars(g) - scope):
                problems.append(Problem("unbound", f"variable {v!r} is not bound", g.pos))
            if isinstance(g, Pred) and g.name not in registry:
                problems.append(Problem("unknown-predicate", f"predicate {g.name!r} is not registered",
                                        g.pos))
            return
        if isinstance(g, ExistsMod) and not 0 <= g.t < g.k:
            problems.append(Problem("modulo", f"Emod[{g.t},{g.k}] needs 0 <= t < k", g.pos))
        if isinstance(g, COUNTING):
            extra = free_vars(g)
            if extra:
                problems.append(Problem(
                    "fragment",
                    f"counting quantifier leaves {', '.join(sorted(extra))} free in its scope", g.pos))
        inner = scope | set(g.vars) if isinstance(g, QUANTIFIERS) else scope
        for c in children(g):
            walk(c, inner)

    walk(f, frozenset(free))
    return problems


def check(f, registry=(), free=()):
    """Raise on the first problem; fragment problems raise FragmentViolation."""
    problems = validate(f, registry, free)
    for p in problems:
        if p.kind == "fragment":
            raise FragmentViolation(str(p))
    if problems:
        raise ValueError("; ".join(str(p) for p in problems))
    return f


@dataclass
class QuerySpec:
    rule: str
    formula: str
    predicates: dict = field(default_factory=dict)
    exact_cycles: bool = True
    verbose: bool = False
