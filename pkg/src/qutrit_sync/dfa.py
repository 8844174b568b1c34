"""Deterministic finite automata and synchronizing (reset) words.

States are labelled 1..N. A letter is a total map stored as a tuple whose
position i-1 holds the image of state i.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, Sequence

MAX_BFS_STATES = 24


class DfaError(ValueError):
    pass


@dataclass(frozen=True)
class Dfa:
    n_states: int
    letters: Mapping[str, tuple[int, ...]]

    def __post_init__(self):
        if not isinstance(self.n_states, int) or self.n_states < 1:
            raise DfaError(f"n_states must be a positive integer, got {self.n_states!r}")
        if not self.letters:
            raise DfaError("automaton needs at least one letter")
        fixed = {}
        for name, images in self.letters.items():
            images = tuple(images)
            if len(images) != self.n_states:
                raise DfaError(
                    f"letter {name!r} maps {len(images)} states, expected {self.n_states}"
                )
            for img in images:
                if not isinstance(img, int) or not 1 <= img <= self.n_states:
                    raise DfaError(f"letter {name!r} has image {img!r} outside 1..{self.n_states}")
            fixed[name] = images
        object.__setattr__(self, "letters", MappingProxyType(fixed))

    @property
    def states(self) -> range:
        return range(1, self.n_states + 1)

    def names(self) -> list[str]:
        return sorted(self.letters)

    def step(self, letter: str, state: int) -> int:
        return self.letters[letter][state - 1]

    def check_word(self, word: Sequence[str]) -> None:
        unknown = sorted({ch for ch in word if ch not in self.letters})
        if unknown:
            raise DfaError(f"word uses letters {unknown} not in alphabet {self.names()}")

    def to_dict(self) -> dict:
        return {"n_states": self.n_states, "letters": {k: list(v) for k, v in self.letters.items()}}


def apply_classical_word(d: Dfa, word: Sequence[str], state: int) -> int:
    d.check_word(word)
    if state not in d.states:
        raise DfaError(f"state {state} outside 1..{d.n_states}")
    for letter in word:
        state = d.step(letter, state)
    return state


def is_synchronizing(d: Dfa, word: Sequence[str]) -> tuple[bool, int | None]:
    """Return ``(True, s)`` when ``word`` sends every state to ``s``, else ``(False, None)``."""
    image = {apply_classical_word(d, word, s) for s in d.states}
    if len(image) == 1:
        return True, image.pop()
    return False, None


def _letter_masks(d: Dfa) -> list[tuple[str, tuple[int, ...]]]:
    # zero-based images per letter, letters in name order
    return [(name, tuple(i - 1 for i in d.letters[name])) for name in d.names()]


def _image_mask(mask: int, images: tuple[int, ...]) -> int:
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= 1 << images[i]
        mask >>= 1
        i += 1
    return out


def shortest_sync_word(d: Dfa) -> str | None:
    """Shortest synchronizing word via BFS over the power automaton.

    Letters are expanded in name order, so among words of minimum length the
    lexicographically least is returned. ``None`` when no word exists.
    """
    if d.n_states > MAX_BFS_STATES:
        raise DfaError(
            f"exhaustive search is limited to {MAX_BFS_STATES} states "
            f"(got {d.n_states}); use greedy_sync_word"
        )
    full = (1 << d.n_states) - 1
    if d.n_states == 1:
        return ""
    letters = _letter_masks(d)
    parent: dict[int, tuple[int, str]] = {full: (-1, "")}
    queue = deque([full])
    while queue:
        mask = queue.popleft()
        for name, images in letters:
            nxt = _image_mask(mask, images)
            if nxt in parent:
                continue
            parent[nxt] = (mask, name)
            if nxt & (nxt - 1) == 0:
                return _trace_back(parent, nxt)
            queue.append(nxt)
    return None


def _trace_back(parent: Mapping[int, tuple[int, str]], node: int) -> str:
    out = []
    while True:
        prev, letter = parent[node]
        if prev < 0:
            break
        out.append(letter)
        node = prev
    return "".join(reversed(out))


def _pair_merging_word(d: Dfa, p: int, q: int) -> str | None:
    """Shortest word sending states p and q to the same state (BFS on pairs)."""
    start = (min(p, q), max(p, q))
    parent: dict[tuple[int, int], tuple[tuple[int, int] | None, str]] = {start: (None, "")}
    queue = deque([start])
    names = d.names()
    while queue:
        a, b = queue.popleft()
        for name in names:
            x, y = d.step(name, a), d.step(name, b)
            nxt = (min(x, y), max(x, y))
            if nxt in parent:
                continue
            parent[nxt] = ((a, b), name)
            if x == y:
                word = []
                node = nxt
                while parent[node][0] is not None:
                    prev, letter = parent[node]
                    word.append(letter)
                    node = prev
                return "".join(reversed(word))
            queue.append(nxt)
    return None


def greedy_sync_word(d: Dfa) -> str | None:
    """Pair-merging heuristic (Eppstein style); not necessarily shortest.

    At each step the pair of surviving states with the shortest merging word
    is merged (ties go to the smallest labels). Returns ``None`` iff some pair
    of states can never be merged, which is exactly when no synchronizing
    word exists.
    """
    current = set(d.states)
    word = ""
    # every pair must be mergeable for a reset word to exist
    pair_words = {}
    for p, q in combinations(d.states, 2):
        w = _pair_merging_word(d, p, q)
        if w is None:
            return None
        pair_words[(p, q)] = w
    while len(current) > 1:
        best = None
        for p, q in combinations(sorted(current), 2):
            w = pair_words[(p, q)]
            if best is None or len(w) < len(best[1]):
                best = ((p, q), w)
        _, w = best
        word += w
        current = {apply_classical_word(d, w, s) for s in current}
    return word


def make_cerny_automaton(n: int) -> Dfa:
    """Cerny automaton C_n: ``a`` cycles 1->2->...->n->1, ``b`` sends 1 to 2 and fixes the rest."""
    if n < 2:
        raise DfaError(f"Cerny automaton needs n >= 2, got {n}")
    a = tuple(i % n + 1 for i in range(1, n + 1))
    b = (2,) + tuple(range(2, n + 1))
    return Dfa(n, {"a": a, "b": b})


def make_example_automaton(a_of_3: int = 1) -> Dfa:
    """Three-state, two-letter automaton reset by BAB.

    B = (1->2, 2->1, 3->1) and A = (1->2, 2->3, 3->?) with A(3) configurable;
    the default 1 makes A a 3-cycle.
    """
    return Dfa(3, {"A": (2, 3, a_of_3), "B": (2, 1, 1)})


def dfa_from_dict(data: Mapping) -> Dfa:
    try:
        n = data["n_states"]
        letters = data["letters"]
    except (KeyError, TypeError) as exc:
        raise DfaError(f"DFA description is missing field {exc}") from None
    if not isinstance(letters, Mapping):
        raise DfaError("'letters' must map letter names to image lists")
    return Dfa(n, {name: tuple(images) for name, images in letters.items()})


def load_dfa(path: str | Path) -> Dfa:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DfaError(f"{path}: not valid JSON ({exc})") from None
    return dfa_from_dict(data)
