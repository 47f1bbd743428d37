"""Seeded random generators for formulas and automata shared by several test modules."""
import itertools

from caphase import automata as au
from caphase import ca
from caphase import logic as lg


def _atom(rng, scope, predicates):
    x, y = rng.choice(scope), rng.choice(scope)
    roll = rng.random()
    if roll < 0.5:
        return lg.Rel(x, y)
    if roll < 0.8 or not predicates:
        return lg.Eq(x, y)
    return lg.Pred(rng.choice(predicates), x)


def _body(rng, scope, depth, size, predicates):
    if size <= 1:
        return _atom(rng, scope, predicates)
    roll = rng.random()
    if depth > 0 and roll < 0.4:
        return _quantified(rng, scope, depth, predicates)
    if roll < 0.55:
        return lg.Not(_body(rng, scope, depth, size - 1, predicates))
    op = rng.choice([lg.And, lg.Or, lg.Implies, lg.Iff])
    half = size // 2
    return op(_body(rng, scope, depth, half, predicates),
              _body(rng, scope, depth, size - half, predicates))


def _quantified(rng, scope, depth, predicates):
    v = f"v{len(scope)}"
    q = rng.choice([lg.Exists, lg.Forall])
    return q((v,), _body(rng, scope + [v], depth - 1, rng.randint(1, 4), predicates))


def random_sentence(rng, depth=3, predicates=("zero",)):
    """A first-order sentence of quantifier depth at most ``depth``."""
    q = rng.choice([lg.Exists, lg.Forall])
    return q(("v0",), _body(rng, ["v0"], depth - 1, rng.randint(2, 5), list(predicates)))


def random_open_formula(rng, free=("x", "y"), depth=2, predicates=("zero",)):
    return _body(rng, list(free), depth, rng.randint(1, 5), list(predicates))


def small_configurations(states=("0", "1"), max_period=3, max_center=2):
    def words(lo, hi):
        return [w for n in range(lo, hi + 1) for w in itertools.product(states, repeat=n)]

    out = {ca.UPConfiguration(left, center, right, 0)
           for left in words(1, max_period)
           for center in words(0, max_center)
           for right in words(1, max_period)}
    return sorted(out, key=str)


# ---------------------------------------------------------------- automata

def uniform_automaton(rng, alphabet, max_states=6, density=None):
    n = rng.randint(1, max_states)
    density = rng.uniform(0.1, 0.5) if density is None else density
    transitions = [(p, x, q) for p in range(n) for x in alphabet.letters for q in range(n)
                   if rng.random() < density]
    accepting = [s for s in range(n) if rng.random() < 0.4]
    return au.BuchiAutomaton(alphabet, n, 0, transitions, accepting)


def chain_automaton(rng, alphabet, max_states=6):
    """Acyclic chains feeding simple loops: biased towards finite and countable languages."""
    n = rng.randint(2, max_states)
    letters = alphabet.letters
    transitions = []
    for p in range(n - 1):
        for _ in range(rng.randint(1, 2)):
            transitions.append((p, rng.choice(letters), rng.randint(p + 1, n - 1)))
    loops = rng.sample(range(n), rng.randint(1, min(3, n)))
    for p in loops:
        transitions.append((p, rng.choice(letters), p))
    if rng.random() < 0.5:
        p, q = sorted(rng.sample(range(n), 2))
        transitions.append((q, rng.choice(letters), p))
    accepting = [p for p in range(n) if p in loops or rng.random() < 0.3]
    return au.BuchiAutomaton(alphabet, n, 0, transitions, accepting)


def union_of_words(rng, alphabet, max_words=3):
    a = au.empty_automaton(alphabet)
    letters = alphabet.letters
    for _ in range(rng.randint(1, max_words)):
        stem = tuple(rng.choice(letters) for _ in range(rng.randint(0, 2)))
        loop = tuple(rng.choice(letters) for _ in range(rng.randint(1, 2)))
        a = au.union(a, au.word_automaton(alphabet, au.LassoWord(stem, loop)))
    return a


def corpus_automaton(rng, alphabet, max_states=6):
    roll = rng.random()
    if roll < 0.5:
        return uniform_automaton(rng, alphabet, max_states)
    if roll < 0.85:
        return chain_automaton(rng, alphabet, max_states)
    return union_of_words(rng, alphabet)
