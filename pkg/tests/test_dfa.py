import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qutrit_sync.dfa import (
    Dfa,
    DfaError,
    apply_classical_word,
    dfa_from_dict,
    greedy_sync_word,
    is_synchronizing,
    load_dfa,
    make_cerny_automaton,
    make_example_automaton,
    shortest_sync_word,
)


def brute_force_shortest(d, max_len):
    """Lexicographically least synchronizing word of minimum length, by enumeration."""
    names = sorted(d.letters)
    for n in range(max_len + 1):
        for combo in itertools.product(names, repeat=n):
            images = set()
            for s in range(1, d.n_states + 1):
                for letter in combo:
                    s = d.letters[letter][s - 1]
                images.add(s)
            if len(images) == 1:
                return "".join(combo)
    return None


@st.composite
def small_dfas(draw, max_states=4, max_letters=2):
    n = draw(st.integers(1, max_states))
    k = draw(st.integers(1, max_letters))
    letters = {
        chr(ord("a") + i): tuple(draw(st.lists(st.integers(1, n), min_size=n, max_size=n)))
        for i in range(k)
    }
    return Dfa(n, letters)


class TestApply:
    @pytest.mark.parametrize("start", [1, 2, 3])
    def test_bab_to_one(self, start):
        assert apply_classical_word(make_example_automaton(), "BAB", start) == 1

    def test_bab_trajectory(self):
        d = make_example_automaton()
        assert [apply_classical_word(d, "BAB"[:i], 1) for i in range(4)] == [1, 2, 3, 1]

    def test_empty_word(self):
        assert apply_classical_word(make_example_automaton(), "", 3) == 3

    def test_bad_state(self):
        with pytest.raises(DfaError):
            apply_classical_word(make_example_automaton(), "A", 4)

    def test_bad_letter(self):
        with pytest.raises(DfaError):
            apply_classical_word(make_example_automaton(), "AX", 1)


class TestIsSynchronizing:
    @pytest.mark.parametrize("a3", [1, 2, 3])
    def test_bab(self, a3):
        assert is_synchronizing(make_example_automaton(a3), "BAB") == (True, 1)

    def test_single_b(self):
        assert is_synchronizing(make_example_automaton(), "B") == (False, None)

    def test_empty_word(self):
        assert is_synchronizing(make_cerny_automaton(3), "") == (False, None)


class TestShortest:
    def test_example(self):
        w = shortest_sync_word(make_example_automaton())
        assert len(w) == 3
        assert w == brute_force_shortest(make_example_automaton(), 3)
        assert is_synchronizing(make_example_automaton(), w)[0]

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_cerny_lengths(self, n):
        w = shortest_sync_word(make_cerny_automaton(n))
        assert len(w) == (n - 1) ** 2
        assert is_synchronizing(make_cerny_automaton(n), w)[0]

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_cerny_minimal_by_enumeration(self, n):
        d = make_cerny_automaton(n)
        assert shortest_sync_word(d) == brute_force_shortest(d, (n - 1) ** 2)

    def test_permutations_have_none(self):
        d = Dfa(4, {"p": (2, 3, 4, 1), "q": (2, 1, 3, 4)})
        assert shortest_sync_word(d) is None
        assert greedy_sync_word(d) is None

    def test_single_state(self):
        assert shortest_sync_word(Dfa(1, {"a": (1,)})) == ""

    def test_refuses_large(self):
        with pytest.raises(DfaError, match="greedy"):
            shortest_sync_word(make_cerny_automaton(25))

    @settings(max_examples=200, deadline=None)
    @given(small_dfas())
    def test_matches_enumeration(self, d):
        # (N-1)^2 bounds the search; enumerate a little further as a check
        expected = brute_force_shortest(d, (d.n_states - 1) ** 2 + 2)
        assert shortest_sync_word(d) == expected


class TestGreedy:
    def test_example(self):
        d = make_example_automaton()
        assert is_synchronizing(d, greedy_sync_word(d))[0]

    def test_cerny_five(self):
        d = make_cerny_automaton(5)
        w = greedy_sync_word(d)
        assert is_synchronizing(d, w)[0]
        assert len(w) >= 16

    def test_large_automaton(self):
        d = make_cerny_automaton(30)
        assert is_synchronizing(d, greedy_sync_word(d))[0]

    @settings(max_examples=200, deadline=None)
    @given(small_dfas(max_states=5, max_letters=3))
    def test_agrees_with_bfs_on_existence(self, d):
        best = shortest_sync_word(d)
        greedy = greedy_sync_word(d)
        assert (best is None) == (greedy is None)
        if greedy is not None:
            assert is_synchronizing(d, greedy)[0]
            assert is_synchronizing(d, best)[0]
            assert len(best) <= len(greedy)


class TestCerny:
    def test_three(self):
        d = make_cerny_automaton(3)
        assert d.letters["a"] == (2, 3, 1)
        assert d.letters["b"] == (2, 2, 3)

    def test_rejects_small(self):
        with pytest.raises(DfaError):
            make_cerny_automaton(1)


class TestFiles:
    def test_load(self, tmp_path):
        path = tmp_path / "fig.json"
        path.write_text(json.dumps({"n_states": 3, "letters": {"A": [2, 3, 1], "B": [2, 1, 1]}}))
        assert load_dfa(path) == make_example_automaton()

    @pytest.mark.parametrize(
        "data",
        [
            {"letters": {"A": [1]}},
            {"n_states": 2, "letters": {"A": [1]}},
            {"n_states": 2, "letters": {"A": [1, 3]}},
            {"n_states": 0, "letters": {"A": []}},
            {"n_states": 2, "letters": {}},
        ],
    )
    def test_rejects(self, data):
        with pytest.raises(DfaError):
            dfa_from_dict(data)

    def test_bad_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(DfaError):
            load_dfa(path)
