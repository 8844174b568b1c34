"""State preparation after reset: the |l,k,j> = C^l B^k A_2^j |2> family.

After the reset word ABA leaves the qutrit near |2>, channel A only acts
through its rotation branch A_2, so j letters A followed by k letters B (and
l letters C for complex amplitudes) prepare the family members.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.stats import norm, qmc

from .channels import (
    QuantumAlphabet,
    QuantumWord,
    make_channel_A,
    make_channel_B,
    make_channel_C,
    standard_alphabet,
)
from .linalg import DIM, ValidationError, basis, check_pure_state

DEFAULT_FAMILY_CAP = 10**6
DEFAULT_PROBES = 10**4
DEFAULT_SEED = 42
COMMENSURATE_TOL = 1e-9
RESET_PREFIX = "ABA"
# fidelities within this of the best count as tied in compile_target
TIE_TOL = 1e-12


class PrepIndex(NamedTuple):
    l: int
    k: int
    j: int


@dataclass(frozen=True)
class PrepFamily:
    theta: float
    phi: float
    n: int
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n!r}")
        if (self.alpha is None) != (self.beta is None):
            raise ValidationError("alpha and beta must be given together")

    @property
    def is_complex(self) -> bool:
        return self.alpha is not None

    @property
    def size(self) -> int:
        return self.n ** (3 if self.is_complex else 2)

    def alphabet(self) -> QuantumAlphabet:
        return standard_alphabet(self.theta, self.phi, self.alpha, self.beta)

    def rotation_a(self) -> np.ndarray:
        return make_channel_A(self.theta).kraus_ops[1]

    def rotation_b(self) -> np.ndarray:
        return make_channel_B(self.phi).kraus_ops[0]

    def phase_c(self) -> np.ndarray:
        if not self.is_complex:
            raise ValidationError("family has no C gate (alpha, beta unset)")
        return make_channel_C(self.alpha, self.beta).kraus_ops[0]

    def indices(self) -> list[PrepIndex]:
        ls = range(self.n) if self.is_complex else range(1)
        return [PrepIndex(l, k, j) for l in ls for k in range(self.n) for j in range(self.n)]


def index_range_for_delta(delta: float) -> int:
    """n = ceil(2 pi / delta): index range at which the family spreads evenly for step delta."""
    if not delta > 0:
        raise ValidationError(f"delta must be positive, got {delta}")
    return math.ceil(2 * math.pi / delta)


def tradeoff_family(delta: float) -> PrepFamily:
    """Family at theta = phi = pi/2 - delta with the matching index range."""
    return PrepFamily(math.pi / 2 - delta, math.pi / 2 - delta, index_range_for_delta(delta))


def prep_state(family: PrepFamily, idx: PrepIndex) -> np.ndarray:
    """C^l B^k A_2^j |2>, by repeated matrix application."""
    l, k, j = idx
    if min(idx) < 0:
        raise ValidationError(f"indices must be non-negative, got {idx}")
    if l and not family.is_complex:
        raise ValidationError("l > 0 requires a family with a C gate")
    v = np.array(basis(2))
    a2, b = family.rotation_a(), family.rotation_b()
    for _ in range(j):
        v = a2 @ v
    for _ in range(k):
        v = b @ v
    if l:
        c = family.phase_c()
        for _ in range(l):
            v = c @ v
    return v


def closed_form_magnitudes(theta: float, phi: float, k: int, j: int) -> np.ndarray:
    """|amplitudes| of |l,k,j>: (|sin k phi cos j theta|, |cos k phi cos j theta|, |sin j theta|)."""
    cj = math.cos(j * theta)
    return np.abs([math.sin(k * phi) * cj, math.cos(k * phi) * cj, math.sin(j * theta)])


def family_states(family: PrepFamily, cap: int = DEFAULT_FAMILY_CAP) -> np.ndarray:
    """All family states as an array of shape (size, 3), rows in (l, k, j) order.

    Same iterated products as ``prep_state``, applied to whole blocks of
    vectors at once.
    """
    if family.size > cap:
        raise ValidationError(
            f"family has {family.size} states, above the cap of {cap}; "
            f"raise the cap to at least {family.size}"
        )
    n = family.n
    a2, b = family.rotation_a(), family.rotation_b()
    cols = np.empty((DIM, n), dtype=complex)
    v = np.array(basis(2))
    for j in range(n):
        cols[:, j] = v
        v = a2 @ v
    kj = np.empty((n, n, DIM), dtype=complex)
    block = cols
    for k in range(n):
        kj[k] = block.T
        block = b @ block
    if not family.is_complex:
        return kj.reshape(n * n, DIM)
    c = family.phase_c()
    out = np.empty((n, n * n, DIM), dtype=complex)
    flat = kj.reshape(n * n, DIM).T
    for l in range(n):
        out[l] = flat.T
        flat = c @ flat
    return out.reshape(n**3, DIM)


def generate_family(family: PrepFamily, cap: int = DEFAULT_FAMILY_CAP) -> list[tuple[PrepIndex, np.ndarray]]:
    states = family_states(family, cap)
    return list(zip(family.indices(), states))


# --- coverage ------------------------------------------------------------

def probe_targets(count: int, complex_space: bool = False, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Deterministic, evenly spread unit vectors.

    Scrambled Halton points pushed through the normal quantile give Gaussian
    vectors whose directions are uniform on the sphere.
    """
    dims = 2 * DIM if complex_space else DIM
    u = qmc.Halton(d=dims, scramble=True, seed=seed).random(count)
    g = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    v = g[:, :DIM] + 1j * g[:, DIM:] if complex_space else g.astype(complex)
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def nearest_overlaps(states: np.ndarray, targets: np.ndarray, chunk: int = 512) -> tuple[np.ndarray, np.ndarray]:
    """For each target: largest |<target|state>| and the index of that state (first on ties)."""
    best = np.empty(len(targets))
    where = np.empty(len(targets), dtype=int)
    conj_states = np.conj(states).T
    for start in range(0, len(targets), chunk):
        ov = np.abs(targets[start:start + chunk] @ conj_states)
        where[start:start + chunk] = np.argmax(ov, axis=1)
        best[start:start + chunk] = ov[np.arange(len(ov)), where[start:start + chunk]]
    return best, where


@dataclass(frozen=True)
class CoverageReport:
    family: PrepFamily | None
    covering_radius: float
    num_states: int
    worst_target: np.ndarray


def covering_radius_of(states: np.ndarray, targets: np.ndarray) -> tuple[float, int]:
    best, _ = nearest_overlaps(states, targets)
    worst = int(np.argmin(best))
    return float(np.arccos(min(1.0, best[worst]))), worst


def covering_radius(
    family: PrepFamily,
    num_probe_targets: int = DEFAULT_PROBES,
    seed: int = DEFAULT_SEED,
    cap: int = DEFAULT_FAMILY_CAP,
) -> CoverageReport:
    """Largest projective angle from a probe target to its nearest family state."""
    if num_probe_targets < 100:
        raise ValidationError(f"need at least 100 probe targets, got {num_probe_targets}")
    states = family_states(family, cap)
    targets = probe_targets(num_probe_targets, family.is_complex, seed)
    radius, worst = covering_radius_of(states, targets)
    return CoverageReport(family, radius, len(states), targets[worst])


# --- compilation ---------------------------------------------------------

@dataclass(frozen=True)
class CompileResult:
    index: PrepIndex
    full_word: QuantumWord
    predicted_fidelity: float

    def to_dict(self) -> dict:
        return {
            "word": self.full_word.letters,
            "l": self.index.l,
            "k": self.index.k,
            "j": self.index.j,
            "predicted_fidelity": self.predicted_fidelity,
        }


def preparation_letters(idx: PrepIndex) -> str:
    return RESET_PREFIX + "A" * idx.j + "B" * idx.k + "C" * idx.l


def compile_target(family: PrepFamily, target, cap: int = DEFAULT_FAMILY_CAP) -> CompileResult:
    """Reset word followed by the family member closest to ``target``.

    Exhaustive over the index grid; among (numerically) tied candidates the
    smallest (l, k, j) wins.
    """
    target = check_pure_state(target)
    if not family.is_complex and np.max(np.abs(target.imag)) > 1e-12:
        # a global phase is allowed, only relative phases need the C gate
        phase = target[np.argmax(np.abs(target))]
        rotated = target * np.conj(phase) / abs(phase)
        if np.max(np.abs(rotated.imag)) > 1e-12:
            raise ValidationError(
                "target has complex relative phases; the family needs the C gate (set alpha and beta)"
            )
    states = family_states(family, cap)
    fid = np.abs(states @ np.conj(target)) ** 2
    top = fid.max()
    pick = int(np.flatnonzero(fid >= top - TIE_TOL)[0])
    idx = family.indices()[pick]
    word = family.alphabet().word(preparation_letters(idx))
    return CompileResult(idx, word, float(min(1.0, fid[pick])))


# --- phase incommensurability -------------------------------------------

@dataclass(frozen=True)
class CommensurabilityResult:
    commensurate_pair_found: bool
    witness: tuple[int, int] | None


def _wrapped_distance(x: float) -> float:
    r = math.fmod(x, 2 * math.pi)
    if r < 0:
        r += 2 * math.pi
    return min(r, 2 * math.pi - r)


def check_incommensurability(alpha: float, beta: float, max_denominator: int) -> CommensurabilityResult:
    """Look for coprime (a, b), |a|, |b| <= max_denominator, with a*alpha = b*beta mod 2 pi.

    Pairs are tried by increasing |a| + |b|; (a, b) and (-a, -b) are the same
    relation, so a >= 0 and, for a = 0, b > 0.
    """
    if max_denominator < 1:
        raise ValidationError(f"max_denominator must be >= 1, got {max_denominator}")
    for total in range(1, 2 * max_denominator + 1):
        for a in range(max(0, total - max_denominator), min(total, max_denominator) + 1):
            mag_b = total - a
            for b in ((mag_b, -mag_b) if a and mag_b else (mag_b,)):
                if math.gcd(a, mag_b) != 1:
                    continue
                if _wrapped_distance(a * alpha - b * beta) <= COMMENSURATE_TOL:
                    return CommensurabilityResult(True, (a, b))
    return CommensurabilityResult(False, None)
