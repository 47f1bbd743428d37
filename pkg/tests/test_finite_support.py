import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from caphase import ca
from caphase import finite_support as fs


def fc(word, offset, q="0"):
    return fs.FiniteConfiguration(tuple(word), offset, q)


@st.composite
def finite_configs(draw, states=("0", "1"), max_len=5):
    word = draw(st.lists(st.sampled_from(states), max_size=max_len))
    return fc(word, draw(st.integers(-6, 3)), states[0])


def all_finite(max_len=4, offsets=range(-4, 2)):
    out = {fc(w, o) for n in range(max_len + 1) for w in itertools.product("01", repeat=n)
           for o in offsets}
    return sorted(out, key=str)


def related(relation, c, d):
    return relation.accepts(fs.convolve(fs.encode(c), fs.encode(d)))


# ---------------------------------------------------------------- values

def test_support_is_stripped():
    c = fc("00101000", -3)
    assert c.word == ("1", "0", "1") and c.offset == -1
    assert str(c) == "101@-1" and c.extent == 1
    assert fc("000", 5) == fc("", 0)


def test_parse_finite():
    assert fs.parse_finite("1@-3", "0") == fc("1", -3)
    assert fs.parse_finite('"0110"@2', "0") == fc("11", 3)
    with pytest.raises(ValueError):
        fs.parse_finite("1", "0")


@given(finite_configs())
def test_encode_decode_round_trip(c):
    w = fs.encode(c)
    assert fs.decode(w, "0") == c
    assert len(w) == c.extent + 1


def test_decode_rejects_off_diagonal_start():
    with pytest.raises(ValueError):
        fs.decode((ca.pair_symbol("0", "1"),), "0")


@given(finite_configs(max_len=6))
def test_step_grows_support_by_at_most_radius(c):
    for code in (30, 90, 110, 184):
        d = fs.step(ca.eca(code), c)
        if d.word:
            assert d.offset >= c.offset - 1 and d.end <= c.end + 1


@given(finite_configs())
def test_step_matches_periodic_simulator(c):
    rule = ca.eca(110)
    up = ca.UPConfiguration(("0",), c.word, ("0",), c.offset)
    d = fs.step(rule, c)
    assert ca.step(rule, up) == ca.UPConfiguration(("0",), d.word, ("0",), d.offset)


# --------------------------------------------------------------- relation

def test_identity_relation_accepts_equal_pairs():
    t = fs.build_finite_relation(ca.eca(204))
    pool = all_finite(max_len=3, offsets=range(-2, 1))
    for c in pool:
        for d in pool:
            assert related(t, c, d) == (c == d)


def test_shift_relation_moves_support_left():
    t = fs.build_finite_relation(ca.shift_rule("01"))
    assert related(t, fc("1", 0), fc("1", -1))
    assert not related(t, fc("1", 0), fc("1", 0))
    assert not related(t, fc("1", 0), fc("1", 1))


def test_rules_without_quiescent_state_are_rejected():
    with pytest.raises(fs.NoQuiescentState):
        fs.build_finite_relation(ca.eca(51))
    with pytest.raises(fs.NoQuiescentState):
        fs.bounded_confluence(ca.eca(51), fc("1", 0, "1"), fc("1", 0, "1"), 3)


@pytest.mark.parametrize("code", [170, 90, 110, 30, 184])
def test_relation_agrees_with_simulation(code):
    rule = ca.eca(code)
    t = fs.build_finite_relation(rule)
    assert t.is_deterministic
    pool = all_finite(max_len=3, offsets=range(-3, 1))
    for c in pool:
        image = fs.step(rule, c)
        assert related(t, c, image)
        for d in pool:
            assert related(t, c, d) == (image == d)


def test_relation_rejects_malformed_padding():
    t = fs.build_finite_relation(ca.eca(204))
    x = fs.encode(fc("1", 0))
    padded = tuple((s, fs.PAD) for s in x)
    assert not t.accepts(padded)
    assert not t.accepts(())


# ----------------------------------------------------------- exploration

def test_reachability_examples():
    shift = ca.shift_rule("01")
    assert fs.bounded_reachability(ca.eca(110), fc("1", 0), fc("1", 0), 0) == fs.Reached(0)
    assert fs.bounded_reachability(ca.eca(204), fc("1", 0), fc("11", 0), 10) == fs.NotWithin(10)
    assert fs.bounded_reachability(shift, fc("1", 0), fc("1", -3), 5) == fs.Reached(3)
    assert fs.bounded_reachability(shift, fc("1", 0), fc("1", -3), 2) == fs.NotWithin(2)


@given(finite_configs(max_len=3), st.integers(0, 6))
def test_reachability_is_monotone(c, budget):
    rule = ca.eca(90)
    target = fs.step(rule, fs.step(rule, c))
    small = fs.bounded_reachability(rule, c, target, budget)
    large = fs.bounded_reachability(rule, c, target, budget + 3)
    if isinstance(small, fs.Reached):
        assert large == small


def test_confluence_examples():
    rule = ca.eca(184)
    x = fc("1", 0)
    assert fs.bounded_confluence(rule, x, x, 4) == fs.Confluent(x, 0, 0)
    assert fs.bounded_confluence(ca.eca(204), x, fc("1", 1), 20) == fs.NotWithin(20)
    found = fs.bounded_confluence(ca.eca(170), fc("1", 2), fc("1", 0), 5)
    assert found == fs.Confluent(fc("1", 0), 2, 0)


def test_confluence_on_dying_patterns():
    # rule 4 keeps only isolated ones; 11 loses both cells after one step
    found = fs.bounded_confluence(ca.eca(4), fc("11", 0), fc("0", 0), 3)
    assert found == fs.Confluent(fc("", 0), 1, 0)
