import itertools
import random

import pytest
from hypothesis import given

from caphase import automata as au
from caphase import ca
from caphase.cardinality import classify, finite

from brute import all_lassos, lasso_member
from conftest import AB, automata, lassos, random_automaton

A, B = ("a",), ("b",)


def single(word):
    return au.word_automaton(AB, au.LassoWord(*word))


def at(position, letter):
    """Words carrying ``letter`` at ``position``."""
    n = position + 2
    transitions = [(i, x, i + 1) for i in range(position) for x in AB.letters]
    transitions.append((position, letter, position + 1))
    transitions += [(position + 1, x, position + 1) for x in AB.letters]
    return au.BuchiAutomaton(AB, n, 0, transitions, [position + 1])


def eventually_always_b():
    return au.BuchiAutomaton(AB, 2, 0, [(0, A, 0), (0, B, 0), (0, B, 1), (1, B, 1)], [1])


def same_on(a, b, bound=4):
    letters = a.alphabet.letters
    return all(au.member_up(a, w) == au.member_up(b, w) for w in all_lassos(letters, bound, bound))


# ----------------------------------------------------------------- values

def test_alphabet_normalises_symbols():
    alphabet = au.Alphabet.of(("x", ["b", "a", "a"]), ("y", ["0"]))
    assert alphabet.symbols("x") == ("a", "b")
    assert alphabet.arity == 2
    assert ("a", "0") in alphabet and ("0", "a") not in alphabet
    assert str(alphabet) == "x=a,b; y=0"


def test_alphabet_rejects_empty_track_and_duplicates():
    with pytest.raises(au.TrackError):
        au.Alphabet.of(("x", []))
    with pytest.raises(au.TrackError):
        au.Alphabet.of(("x", ["a"]), ("x", ["b"]))


def test_alphabet_composability():
    x = au.Alphabet.of(("x", "a"))
    assert x.composable(au.Alphabet.of(("y", "a")))
    assert not x.composable(au.Alphabet.of(("x", "b")))


def test_automaton_validates_its_parts():
    with pytest.raises(ValueError):
        au.BuchiAutomaton(AB, 2, 0, [(0, A, 2)], [])
    with pytest.raises(au.AlphabetMismatch):
        au.BuchiAutomaton(AB, 1, 0, [(0, ("c",), 0)], [])
    with pytest.raises(ValueError):
        au.BuchiAutomaton(AB, 1, 0, [], [3])
    with pytest.raises(ValueError):
        au.BuchiAutomaton(AB, 1, 1, [], [])


def test_lasso_needs_a_loop():
    with pytest.raises(ValueError):
        au.LassoWord((A,), ())


def test_canonical_lasso_minimises_loop_then_stem():
    w = au.canonical_lasso((A, B, A, B), (A, B, A, B))
    assert w == au.LassoWord((), (A, B))
    assert au.canonical_lasso((B, A), (A,)) == au.LassoWord((B,), (A,))
    assert au.LassoWord((A,), (B, A)).same_word(au.LassoWord((), (A, B)))


# ----------------------------------------------------------- intersection

def test_intersection_of_position_constraints():
    both = au.intersect(at(0, A), at(1, B))
    assert au.member_up(both, au.LassoWord((A,), (B,)))
    assert not au.member_up(both, au.LassoWord((B,), (A,)))


def test_intersection_rejects_mismatched_alphabets():
    other = au.universal_automaton(au.Alphabet.of(("u", ("a", "b"))))
    with pytest.raises(au.AlphabetMismatch):
        au.intersect(au.universal_automaton(AB), other)


@given(automata())
def test_intersection_with_complement_is_empty(a):
    assert au.is_empty(au.intersect(a, au.complement(a)))[0]


def test_intersection_with_universal_keeps_membership(rng):
    for _ in range(5):
        a = random_automaton(rng)
        assert same_on(au.intersect(a, au.universal_automaton(AB)), a, bound=6)


def test_non_weak_intersection_uses_both_acceptance_sets():
    # infinitely many a and infinitely many b
    inf_a = au.BuchiAutomaton(AB, 2, 0, [(0, A, 1), (0, B, 0), (1, A, 1), (1, B, 0)], [1])
    inf_b = au.BuchiAutomaton(AB, 2, 0, [(0, B, 1), (0, A, 0), (1, B, 1), (1, A, 0)], [1])
    both = au.intersect(inf_a, inf_b)
    assert au.member_up(both, au.LassoWord((), (A, B)))
    assert not au.member_up(both, au.LassoWord((A,), (B,)))
    assert not au.member_up(both, au.LassoWord((B,), (A,)))


# ------------------------------------------------------------------ union

def test_union_with_empty_is_identity(rng):
    for _ in range(5):
        a = random_automaton(rng)
        assert same_on(au.union(au.empty_automaton(AB), a), a)


def test_union_of_two_singletons_has_two_members():
    both = au.union(single(((), (A,))), single(((), (B,))))
    assert classify(both) == finite(2)


@given(automata(), automata())
def test_de_morgan(a, b):
    left = au.complement(au.union(a, b))
    right = au.intersect(au.complement(a), au.complement(b))
    assert same_on(left, right, bound=3)


# ------------------------------------------------------------- complement

def test_complement_of_universal_is_empty():
    assert au.is_empty(au.complement(au.universal_automaton(AB)))[0]


def test_complement_of_singleton():
    c = au.complement(single(((), (A,))))
    assert au.member_up(c, au.LassoWord((B,), (A,)))
    assert not au.member_up(c, au.LassoWord((), (A,)))


def test_double_complement_on_long_lassos(rng):
    for _ in range(4):
        a = random_automaton(rng)
        assert same_on(au.complement(au.complement(a)), a, bound=6)


@pytest.mark.parametrize("method", ["auto", "rank"])
def test_complement_methods_agree_with_brute_force(method):
    rng = random.Random(7)
    for _ in range(40):
        a = random_automaton(rng, max_states=3)
        c = au.complement(a, method=method)
        for w in all_lassos(AB.letters, 3, 3):
            assert au.member_up(c, w) != lasso_member(a, w)


def test_complement_rejects_unknown_method():
    with pytest.raises(ValueError):
        au.complement(au.universal_automaton(AB), method="magic")


def test_complement_routes():
    det_weak = at(1, A)
    assert det_weak.is_deterministic and det_weak.is_weak
    c = au.complement(det_weak)
    assert au.member_up(c, au.LassoWord((A, B), (A,)))
    nondet_weak = au.BuchiAutomaton(AB, 2, 0, [(0, A, 0), (0, A, 1), (0, B, 0), (1, A, 1)], [1])
    assert nondet_weak.is_weak and not nondet_weak.is_deterministic
    c = au.complement(nondet_weak)
    assert c.is_deterministic
    assert au.member_up(c, au.LassoWord((), (A, B)))
    assert not au.member_up(c, au.LassoWord((B,), (A,)))
    inf_a = au.BuchiAutomaton(AB, 2, 0, [(0, A, 1), (0, B, 0), (1, A, 1), (1, B, 0)], [1])
    assert inf_a.is_deterministic and not inf_a.is_weak
    c = au.complement(inf_a)
    assert c.is_weak
    assert au.member_up(c, au.LassoWord((A,), (B,)))
    assert not au.member_up(c, au.LassoWord((), (A, B)))


def test_parity_determinization_accepts_the_same_words():
    rng = random.Random(11)
    for _ in range(30):
        a = au.trim(random_automaton(rng))
        succ, priority = au.determinize(a)
        for w in all_lassos(AB.letters, 3, 3):
            q = 0
            for x in w.stem:
                q = succ[q][x]
            seen, trail, i = {}, [], 0
            while (q, i) not in seen:
                seen[(q, i)] = len(trail)
                q = succ[q][w.loop[i]]
                trail.append(priority[q])
                i = (i + 1) % len(w.loop)
            accepted = min(trail[seen[(q, i)]:]) % 2 == 0
            assert accepted == lasso_member(a, w)


# ------------------------------------------------------------ projection

def _equality(symbols=("a", "b")):
    alphabet = au.Alphabet.of(("x", symbols), ("y", symbols))
    return au.BuchiAutomaton(alphabet, 1, 0, [(0, (s, s), 0) for s in symbols], [0])


def test_project_equality_gives_universal():
    p = au.project(_equality(), "y")
    assert p.alphabet.names == ("x",)
    assert au.is_empty(au.complement(p))[0]


def test_project_empty_is_empty():
    assert au.is_empty(au.project(au.empty_automaton(_equality().alphabet), "x"))[0]


def test_project_unknown_track():
    with pytest.raises(au.TrackError):
        au.project(_equality(), "z")


def test_identity_relation_projects_onto_domain():
    rule = ca.eca(204)
    t = au.project(ca.build_transition_relation(rule), "y")
    d = ca.build_domain_automaton(rule.states)
    assert same_on(t, d, bound=3)


# ------------------------------------------------------------ cylinders

def test_cylindrify_then_project_is_identity(rng):
    for _ in range(5):
        a = random_automaton(rng)
        back = au.project(au.cylindrify(a, "u", ("0", "1")), "u")
        assert same_on(back, a)


def test_cylindrify_keeps_empty_and_universal():
    assert au.is_empty(au.cylindrify(au.empty_automaton(AB), "u", "01"))[0]
    u = au.cylindrify(au.universal_automaton(AB), "u", "01", position=0)
    assert u.alphabet.names == ("u", "t")
    assert au.is_empty(au.complement(u))[0]


def test_cylindrify_collision():
    with pytest.raises(au.TrackError):
        au.cylindrify(au.universal_automaton(AB), "t", "01")


def test_identify_rename_reorder():
    eq = _equality()
    same = au.identify(au.universal_automaton(eq.alphabet), "x", "y")
    assert same.alphabet.names == ("x",)
    swapped = au.rename(eq, {"x": "y", "y": "x"})
    assert swapped.alphabet.names == ("y", "x")
    assert au.reorder(swapped, ("x", "y")).alphabet.names == ("x", "y")
    with pytest.raises(au.TrackError):
        au.reorder(eq, ("x", "z"))


# ------------------------------------------------------------------- trim

def test_trim_unreachable_accepting_gives_canonical_empty():
    a = au.BuchiAutomaton(AB, 3, 0, [(0, A, 0), (2, A, 2)], [2])
    t = au.trim(a)
    assert au.is_canonical_empty(t)
    assert t.num_states == 1 and t.num_transitions == 0 and not t.accepting


@given(automata())
def test_trim_preserves_language_and_is_idempotent(a):
    t = au.trim(a)
    assert same_on(t, a, bound=3)
    assert au.dumps(au.trim(t)) == au.dumps(t)


@given(automata())
def test_trimmed_states_are_live(a):
    t = au.trim(a)
    if au.is_canonical_empty(t):
        return
    live = set(au.live_states(t))
    assert live == set(t.states)


# -------------------------------------------------------------- emptiness

def test_no_accepting_states_means_empty():
    a = au.BuchiAutomaton(AB, 2, 0, [(0, A, 1), (1, B, 0)], [])
    assert au.is_empty(a) == (True, None)


def test_universal_witness_is_a_member():
    u = au.universal_automaton(AB)
    empty, w = au.is_empty(u)
    assert not empty and au.member_up(u, w)


@pytest.mark.parametrize("code", [0, 30, 51, 90, 110, 204, 255])
def test_relation_automata_are_non_empty(code):
    assert not au.is_empty(ca.build_transition_relation(ca.eca(code)))[0]


@given(automata())
def test_emptiness_matches_exhaustive_lasso_search(a):
    n = a.num_states
    empty, w = au.is_empty(a)
    found = any(lasso_member(a, v) for v in all_lassos(AB.letters, max(n - 1, 0), n))
    assert empty == (not found)
    if not empty:
        assert len(w.stem) < n and len(w.loop) <= n
        assert lasso_member(a, w)


# ------------------------------------------------------------- membership

@given(lassos())
def test_universal_accepts_everything(w):
    assert au.member_up(au.universal_automaton(AB), w)


def test_eventually_always():
    a = eventually_always_b()
    assert au.member_up(a, au.LassoWord((A,), (B,)))
    assert not au.member_up(a, au.LassoWord((), (A,)))


def test_membership_rejects_foreign_letters():
    with pytest.raises(au.AlphabetMismatch):
        au.member_up(au.universal_automaton(AB), au.LassoWord((), (("c",),)))


@given(automata(), automata(), lassos())
def test_boolean_semantics(a, b, w):
    ma, mb = lasso_member(a, w), lasso_member(b, w)
    assert au.member_up(a, w) == ma
    assert au.member_up(au.intersect(a, b), w) == (ma and mb)
    assert au.member_up(au.union(a, b), w) == (ma or mb)
    assert au.member_up(au.complement(a), w) == (not ma)


@given(automata())
def test_union_with_complement_is_universal(a):
    assert au.is_empty(au.complement(au.union(a, au.complement(a))))[0]


@given(automata(), automata())
def test_operations_do_not_mutate_inputs(a, b):
    before = (au.dumps(a), au.dumps(b))
    au.intersect(a, b)
    au.union(a, b)
    au.complement(a)
    au.trim(b)
    assert (au.dumps(a), au.dumps(b)) == before


# ---------------------------------------------------------------- budget

def test_state_budget_aborts_large_constructions():
    rng = random.Random(3)
    a = random_automaton(rng, max_states=4, density=0.6)
    with au.state_budget(1):
        with pytest.raises(au.ResourceLimit):
            au.intersect(a, au.complement(a))
    with pytest.raises(ValueError):
        with au.state_budget(0):
            pass


# ------------------------------------------------------------ text format

@given(automata())
def test_text_round_trip_is_bit_exact(a):
    text = au.dumps(a)
    assert au.dumps(au.loads(text)) == text


def test_text_format_layout():
    a = eventually_always_b()
    assert au.dumps(a) == (
        "alphabet: t=a,b\nstates: 2\ninitial: 0\naccepting: 1\n"
        "0 (a) 0\n0 (b) 0\n0 (b) 1\n1 (b) 1\n"
    )


def test_loads_comments_and_several_initial_states():
    text = """# two entry points
alphabet: t=a,b
states: 2
initial: 0,1
accepting: 0,1
0 (a) 0   # a forever
1 (b) 1
"""
    a = au.loads(text)
    assert a.num_states == 3 and a.initial == 2
    assert au.member_up(a, au.LassoWord((), (A,)))
    assert au.member_up(a, au.LassoWord((), (B,)))
    assert not au.member_up(a, au.LassoWord((A,), (B,)))


def test_loads_rejects_garbage():
    with pytest.raises(ValueError):
        au.loads("alphabet: t=a\nstates: 1\ninitial: 0\naccepting:\n0 a 0\n")
    with pytest.raises(ValueError):
        au.loads("states: 1\ninitial: 0\naccepting:\n")


def test_multi_track_round_trip():
    a = au.cylindrify(eventually_always_b(), "u", ("0", "1"))
    assert au.dumps(au.loads(au.dumps(a))) == au.dumps(a)
    assert list(itertools.islice(a.alphabet.letters, 1)) == [("a", "0")]
