import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from caphase import automata as au

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

AB = au.Alphabet.of(("t", ("a", "b")))


def letters_of(alphabet):
    return alphabet.letters


def random_automaton(rng, max_states=4, alphabet=AB, density=0.35, accept=0.4):
    n = rng.randint(1, max_states)
    transitions = [(p, x, q) for p in range(n) for x in alphabet.letters for q in range(n)
                   if rng.random() < density]
    accepting = [s for s in range(n) if rng.random() < accept]
    return au.BuchiAutomaton(alphabet, n, 0, transitions, accepting)


@st.composite
def automata(draw, max_states=4, alphabet=AB):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_automaton(random.Random(seed), max_states, alphabet)


@st.composite
def lassos(draw, alphabet=AB, max_stem=4, max_loop=4):
    letter = st.sampled_from(alphabet.letters)
    stem = draw(st.lists(letter, max_size=max_stem))
    loop = draw(st.lists(letter, min_size=1, max_size=max_loop))
    return au.LassoWord(tuple(stem), tuple(loop))


@pytest.fixture
def rng():
    return random.Random(20261016)
