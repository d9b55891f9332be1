"""Totalization, disambiguation, projections, union."""

import random

import pytest

from fstlearn.core import Transducer, transduce, trim
from fstlearn.errors import ConfigurationError
from fstlearn.oracle import (
    check_ambiguous_up_to,
    check_functional_up_to,
    equivalent_up_to,
    path_outputs,
    words_up_to,
)
from fstlearn.transform import (
    Nfa,
    complement_dfa,
    disambiguate,
    input_projection,
    totalize,
    union,
)

from machines import random_machine, random_mostly_deterministic


def nfa_language(n: Nfa, max_len: int) -> set:
    return {w for w in words_up_to(n.alphabet, max_len) if n.accepts(w)}


def test_input_projection_drops_outputs():
    t = Transducer([0, 1], "a", "xy", 0, [1], [(0, "a", 1, "xy")])
    n = input_projection(t)
    assert nfa_language(n, 3) == {"a"}


def test_input_projection_two_words():
    t = Transducer(
        [0, 1, 2, 3],
        "ab",
        "xyz",
        0,
        [1, 3],
        [(0, "a", 1, "x"), (0, "a", 2, "y"), (2, "b", 3, "z")],
    )
    assert nfa_language(input_projection(t), 3) == {"a", "ab"}


def test_input_projection_empty_relation():
    t = Transducer([0], "a", "x", 0, [], [])
    assert nfa_language(input_projection(t), 3) == set()


def test_complement_simple():
    n = Nfa.make([0, 1], "a", 0, [1], [(0, "a", 1)])
    comp = complement_dfa(n)
    assert nfa_language(comp, 3) == {"", "aa", "aaa"}


def test_complement_involution():
    rng = random.Random(3)
    for _ in range(10):
        t = random_machine(rng, max_states=4)
        n = input_projection(t)
        twice = complement_dfa(complement_dfa(n))
        assert nfa_language(twice, 6) == nfa_language(n, 6)


def test_complement_of_everything_is_empty():
    n = Nfa.make([0], "ab", 0, [0], [(0, "a", 0), (0, "b", 0)])
    assert nfa_language(complement_dfa(n), 4) == set()


def test_totalize_partial_machine():
    t = Transducer([0, 1], "ab", "x", 0, [1], [(0, "a", 1, "x")])
    total = totalize(t, "#")
    # verify by brute force over all short inputs
    for word in words_up_to("ab", 4):
        got = transduce(total, word)
        if word == "a":
            assert got == {"x"}
        elif word == "":
            assert got == frozenset()
        else:
            assert got == {"#"}


def test_totalize_already_total():
    t = Transducer([0], "ab", "xy", 0, [0], [(0, "a", 0, "x"), (0, "b", 0, "y")])
    total = totalize(t, "#")
    for word in words_up_to("ab", 4):
        if word:
            assert transduce(total, word) == transduce(t, word)
            assert "#" not in next(iter(transduce(total, word)))
    assert transduce(total, "") == transduce(t, "")


def test_totalize_empty_relation():
    t = trim(Transducer([0], "ab", "x", 0, [], []))
    total = totalize(t, "#")
    for word in words_up_to("ab", 3):
        assert transduce(total, word) == ({"#"} if word else frozenset())


def test_totalize_rejects_used_symbol():
    t = Transducer([0], "a", "x#", 0, [0], [(0, "a", 0, "#")])
    with pytest.raises(ConfigurationError):
        totalize(t, "#")


def test_totalize_random_functional_machines():
    rng = random.Random(5)
    done = 0
    while done < 12:
        t = random_mostly_deterministic(rng, max_states=3)
        if not check_functional_up_to(t, 6).verdict:
            continue
        done += 1
        total = totalize(t, "#")
        for word in words_up_to(t.input_alphabet, 5):
            before = transduce(t, word)
            after = transduce(total, word)
            if word == "":
                assert after == before
            elif before:
                assert after == before
            else:
                assert after == {"#"}


def test_disambiguate_two_identical_paths():
    t = Transducer(
        [0, 1, 2], "a", "x", 0, [1, 2], [(0, "a", 1, "x"), (0, "a", 2, "x")]
    )
    d = disambiguate(t)
    assert len(path_outputs(t, "a")) == 1
    paths_after = [p for p in _accepting_paths(d, "a")]
    assert len(paths_after) == 1
    assert transduce(d, "a") == {"x"}


def test_disambiguate_deterministic_is_noop_on_relation():
    t = Transducer([0, 1], "ab", "xy", 0, [0, 1], [(0, "a", 1, "x"), (1, "b", 0, "y")])
    d = disambiguate(t)
    assert equivalent_up_to(t, d, 6).verdict
    assert check_ambiguous_up_to(d, 6).verdict


def test_disambiguate_length_two_duplicate():
    t = Transducer(
        [0, 1, 2, 3],
        "ab",
        "xy",
        0,
        [3],
        [
            (0, "a", 1, "x"),
            (0, "a", 2, "x"),
            (1, "b", 3, "y"),
            (2, "b", 3, "y"),
        ],
    )
    d = disambiguate(t)
    assert len(_accepting_paths(d, "ab")) == 1
    assert transduce(d, "ab") == {"xy"}


def test_disambiguate_preserves_context_split_relation():
    # two c-edges into one target from different determinization contexts:
    # both inputs must survive
    t = Transducer(
        [0, 1, 2, 3],
        "abc",
        "xyz",
        0,
        [3],
        [
            (0, "a", 1, "x"),
            (0, "b", 2, "y"),
            (1, "c", 3, "z"),
            (2, "c", 3, "z"),
        ],
    )
    d = disambiguate(t)
    assert transduce(d, "ac") == {"xz"}
    assert transduce(d, "bc") == {"yz"}


def test_disambiguate_random_functional():
    rng = random.Random(7)
    done = 0
    while done < 12:
        t = random_mostly_deterministic(rng, max_states=3)
        if not check_functional_up_to(t, 6).verdict:
            continue
        done += 1
        d = disambiguate(t)
        assert check_ambiguous_up_to(d, 6).verdict, t
        assert equivalent_up_to(t, d, 6).verdict, t


def test_union_with_empty_is_identity():
    t = Transducer([0, 1], "ab", "x", 0, [1], [(0, "a", 1, "x")])
    empty = trim(Transducer([0], "ab", "x", 0, [], []))
    u = union(t, empty)
    assert equivalent_up_to(u, t, 4).verdict


def test_union_of_disjoint_machines():
    ta = Transducer([0, 1], "ab", "x", 0, [1], [(0, "a", 1, "x")])
    tb = Transducer([0, 1], "ab", "y", 0, [1], [(0, "b", 1, "y")])
    u = union(ta, tb)
    assert transduce(u, "a") == {"x"}
    assert transduce(u, "b") == {"y"}


def test_union_idempotent_on_relation():
    rng = random.Random(11)
    for _ in range(8):
        t = random_machine(rng, max_states=3)
        assert equivalent_up_to(union(t, t), t, 4).verdict


def test_union_epsilon_membership():
    eps = Transducer([0], "a", "x", 0, [0], [])
    no_eps = Transducer([0, 1], "a", "x", 0, [1], [(0, "a", 1, "x")])
    assert transduce(union(eps, no_eps), "") == {""}
    assert transduce(union(no_eps, no_eps), "") == frozenset()


def _accepting_paths(t, word):
    from fstlearn.oracle import accepting_paths

    return accepting_paths(t, word)
