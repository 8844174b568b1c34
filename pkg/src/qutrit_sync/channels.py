"""Kraus channels acting on qutrit density matrices, alphabets and words."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .linalg import (
    DIM,
    ValidationError,
    as_matrix,
    check_density_matrix,
    check_hermitian,
    dagger,
)

COMPLETENESS_TOL = 1e-12


@dataclass(frozen=True)
class KrausChannel:
    """rho -> sum_j K_j rho K_j^dagger, with sum_j K_j^dagger K_j = I checked on construction."""

    name: str
    kraus_ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(as_matrix(k) for k in self.kraus_ops)
        if not ops:
            raise ValidationError(f"channel {self.name!r} has no Kraus operators")
        total = sum(dagger(k) @ k for k in ops)
        defect = float(np.max(np.abs(total - np.eye(DIM))))
        if defect > COMPLETENESS_TOL:
            raise ValidationError(
                f"channel {self.name!r} violates completeness (max entry error {defect:.3e})"
            )
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def is_unitary(self) -> bool:
        return len(self.kraus_ops) == 1


def make_channel_A(theta: float, name: str = "A") -> KrausChannel:
    """Reset-like channel: |1> is sent to |2>, the (2,3) block is rotated by theta."""
    _require_finite(theta=theta)
    c, s = math.cos(theta), math.sin(theta)
    a1 = np.zeros((DIM, DIM), dtype=complex)
    a1[1, 0] = 1.0
    a2 = np.array([[0, 0, 0], [0, c, -s], [0, s, c]], dtype=complex)
    return KrausChannel(name, (a1, a2))


def make_channel_B(phi: float, name: str = "B") -> KrausChannel:
    """Unitary rotation by phi in the (1,2) plane."""
    _require_finite(phi=phi)
    c, s = math.cos(phi), math.sin(phi)
    b = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]], dtype=complex)
    return KrausChannel(name, (b,))


def make_channel_C(alpha: float, beta: float, name: str = "C") -> KrausChannel:
    """Diagonal phase gate diag(1, e^{i alpha}, e^{i beta})."""
    _require_finite(alpha=alpha, beta=beta)
    return KrausChannel(name, (np.diag([1.0, np.exp(1j * alpha), np.exp(1j * beta)]),))


def make_identity_channel(name: str = "I") -> KrausChannel:
    return KrausChannel(name, (np.eye(DIM, dtype=complex),))


def _require_finite(**angles: float) -> None:
    for key, value in angles.items():
        if not math.isfinite(value):
            raise ValidationError(f"{key} must be finite, got {value!r}")


@dataclass(frozen=True)
class QuantumAlphabet:
    letters: Mapping[str, KrausChannel]

    def __post_init__(self):
        for name in self.letters:
            if not isinstance(name, str) or len(name) != 1:
                raise ValidationError(f"letter names must be single characters, got {name!r}")
        object.__setattr__(self, "letters", MappingProxyType(dict(self.letters)))

    @classmethod
    def of(cls, *channels: KrausChannel) -> "QuantumAlphabet":
        names = [ch.name for ch in channels]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate letter names in {names}")
        return cls({ch.name: ch for ch in channels})

    def __getitem__(self, name: str) -> KrausChannel:
        return self.letters[name]

    def __contains__(self, name: object) -> bool:
        return name in self.letters

    def names(self) -> list[str]:
        return sorted(self.letters)

    def word(self, letters: str) -> "QuantumWord":
        return QuantumWord(letters, self)


def standard_alphabet(
    theta: float, phi: float, alpha: float | None = None, beta: float | None = None
) -> QuantumAlphabet:
    """Alphabet {A(theta), B(phi)}, plus C(alpha, beta) when both phases are given."""
    channels = [make_channel_A(theta), make_channel_B(phi)]
    if alpha is not None and beta is not None:
        channels.append(make_channel_C(alpha, beta))
    elif (alpha is None) != (beta is None):
        raise ValidationError("alpha and beta must be given together")
    return QuantumAlphabet.of(*channels)


@dataclass(frozen=True)
class QuantumWord:
    """Letters applied left to right: ``"ABA"`` means A, then B, then A."""

    letters: str
    alphabet: QuantumAlphabet = field(repr=False)

    def __post_init__(self):
        if not isinstance(self.letters, str):
            object.__setattr__(self, "letters", "".join(self.letters))
        missing = sorted({ch for ch in self.letters if ch not in self.alphabet})
        if missing:
            raise ValidationError(
                f"word {self.letters!r} uses letters {missing} not in alphabet {self.alphabet.names()}"
            )

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters

    def __add__(self, other: "QuantumWord") -> "QuantumWord":
        if other.alphabet is not self.alphabet:
            raise ValidationError("cannot concatenate words over different alphabets")
        return QuantumWord(self.letters + other.letters, self.alphabet)

    def channels(self) -> list[KrausChannel]:
        return [self.alphabet[ch] for ch in self.letters]


def _kraus_sum(ops: Sequence[np.ndarray], rho: np.ndarray) -> np.ndarray:
    out = np.zeros((DIM, DIM), dtype=complex)
    for k in ops:
        out += k @ rho @ dagger(k)
    return out


def apply_channel(ch: KrausChannel, rho) -> np.ndarray:
    rho = check_density_matrix(rho)
    return _apply_unchecked(ch, rho)


def _apply_unchecked(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    out = _kraus_sum(ch.kraus_ops, rho)
    return check_density_matrix(0.5 * (out + dagger(out)))


def apply_word(word: QuantumWord, rho) -> np.ndarray:
    rho = check_density_matrix(rho)
    for ch in word.channels():
        rho = _apply_unchecked(ch, rho)
    return rho


def adjoint_apply_channel(ch: KrausChannel, obs: np.ndarray) -> np.ndarray:
    out = np.zeros((DIM, DIM), dtype=complex)
    for k in ch.kraus_ops:
        out += dagger(k) @ obs @ k
    return 0.5 * (out + dagger(out))


def adjoint_apply_word(word: QuantumWord, obs) -> np.ndarray:
    """Heisenberg-picture image of ``obs``: the dual channel of each letter, last letter first.

    Satisfies tr(W(rho) X) = tr(rho W^dagger(X)).
    """
    x = np.array(check_hermitian(obs))
    for ch in reversed(word.channels()):
        x = adjoint_apply_channel(ch, x)
    return as_matrix(x)


# --- alphabet files -------------------------------------------------------

def channel_from_spec(name: str, spec: Mapping) -> KrausChannel:
    kind = spec.get("type")
    try:
        if kind == "rot23_with_reset":
            return make_channel_A(float(spec["theta"]), name)
        if kind == "rot12":
            return make_channel_B(float(spec["phi"]), name)
        if kind == "phase":
            return make_channel_C(float(spec["alpha"]), float(spec["beta"]), name)
        if kind == "identity":
            return make_identity_channel(name)
    except KeyError as exc:
        raise ValidationError(f"letter {name!r} of type {kind!r} is missing {exc.args[0]!r}") from None
    raise ValidationError(f"letter {name!r} has unknown channel type {kind!r}")


def alphabet_from_dict(data: Mapping) -> QuantumAlphabet:
    letters = data.get("letters")
    if not isinstance(letters, Mapping) or not letters:
        raise ValidationError("alphabet file needs a non-empty 'letters' object")
    return QuantumAlphabet.of(*(channel_from_spec(name, spec) for name, spec in letters.items()))


def load_alphabet(path: str | Path) -> QuantumAlphabet:
    with open(path, encoding="utf-8") as fh:
        return alphabet_from_dict(json.load(fh))


def alphabet_to_dict(
    theta: float, phi: float, alpha: float | None = None, beta: float | None = None
) -> dict:
    letters: dict = {
        "A": {"type": "rot23_with_reset", "theta": theta},
        "B": {"type": "rot12", "phi": phi},
    }
    if alpha is not None and beta is not None:
        letters["C"] = {"type": "phase", "alpha": alpha, "beta": beta}
    return {"letters": letters}


def all_words(alphabet: QuantumAlphabet, max_len: int) -> Iterable[str]:
    """Every word up to ``max_len`` letters, by length then lexicographically."""
    names = alphabet.names()
    for length in range(max_len + 1):
        for combo in product(names, repeat=length):
            yield "".join(combo)
