"""Synchronization analysis for quantum words.

Worst-case fidelity uses linearity: ``<t|W(rho)|t> = tr(rho W^dagger(|t><t|))``,
so the minimum over all states is the smallest eigenvalue of the
Heisenberg-evolved target projector.
"""

from __future__ import annotations

import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channels import (
    QuantumAlphabet,
    QuantumWord,
    adjoint_apply_word,
    all_words,
    apply_word,
    standard_alphabet,
)
from .linalg import (
    ValidationError,
    basis,
    check_pure_state,
    fidelity_with_pure,
    hermitian_eigenvalues,
    maximally_mixed,
    pure_to_density,
)

# Quartic slack for the small-angle reset bound, calibrated from the
# worst-case Delta sweep {0.02, 0.04, ..., 0.2}; see calibrate_quartic_slack.
QUARTIC_SLACK = 3123.3336355234

MAX_DELTA = 0.2
MAX_SEARCH_WORDS = 3**8


def sync_fidelity(word: QuantumWord, target, rho0) -> float:
    return fidelity_with_pure(apply_word(word, rho0), target)


def worst_case_fidelity(word: QuantumWord, target) -> float:
    """min over all density matrices rho of <target|word(rho)|target>."""
    proj = pure_to_density(target)
    lo = hermitian_eigenvalues(adjoint_apply_word(word, proj))[0]
    return float(min(1.0, max(0.0, lo)))


@dataclass(frozen=True)
class SyncReport:
    word: QuantumWord
    target: np.ndarray = field(repr=False)
    worst_case_fidelity: float
    fidelity_from_maximally_mixed: float

    def __post_init__(self):
        if self.worst_case_fidelity > self.fidelity_from_maximally_mixed + 1e-10:
            raise ValidationError("worst-case fidelity exceeds the maximally mixed fidelity")


def sync_report(word: QuantumWord, target=None) -> SyncReport:
    target = basis(2) if target is None else check_pure_state(target)
    return SyncReport(
        word=word,
        target=target,
        worst_case_fidelity=worst_case_fidelity(word, target),
        fidelity_from_maximally_mixed=sync_fidelity(word, target, maximally_mixed()),
    )


# --- parameter scans ------------------------------------------------------

_BASIS_SPEC = re.compile(r"^basis\(([123])\)$")


def _initial_state(spec: str):
    if spec == "maximally_mixed":
        return maximally_mixed()
    if spec == "worst_case":
        return None
    m = _BASIS_SPEC.match(spec)
    if m:
        return pure_to_density(basis(int(m.group(1))))
    raise ValidationError(
        f"unknown initial state {spec!r}; use maximally_mixed, worst_case or basis(i)"
    )


@dataclass(frozen=True)
class ScanGrid:
    theta_values: tuple[float, ...]
    phi_values: tuple[float, ...]
    word: str = "ABA"
    initial_state: str = "maximally_mixed"
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "theta_values", tuple(float(t) for t in self.theta_values))
        object.__setattr__(self, "phi_values", tuple(float(p) for p in self.phi_values))
        if not self.theta_values or not self.phi_values:
            raise ValidationError("scan grid axes must be non-empty")
        if not all(math.isfinite(v) for v in self.theta_values + self.phi_values):
            raise ValidationError("scan grid values must be finite")
        _initial_state(self.initial_state)

    @classmethod
    def linspace(
        cls,
        theta_range: tuple[float, float] = (0.4 * math.pi, 0.6 * math.pi),
        phi_range: tuple[float, float] = (0.4 * math.pi, 0.6 * math.pi),
        steps: int = 101,
        **kwargs,
    ) -> "ScanGrid":
        if steps < 1:
            raise ValidationError(f"steps must be positive, got {steps}")
        return cls(
            tuple(np.linspace(*theta_range, steps)),
            tuple(np.linspace(*phi_range, steps)),
            **kwargs,
        )


def _scan_row(grid: ScanGrid, target: np.ndarray, theta: float) -> list[float]:
    rho0 = _initial_state(grid.initial_state)
    row = []
    for phi in grid.phi_values:
        word = standard_alphabet(theta, phi, grid.alpha, grid.beta).word(grid.word)
        if rho0 is None:
            row.append(worst_case_fidelity(word, target))
        else:
            row.append(sync_fidelity(word, target, rho0))
    return row


def scan_overlap(grid: ScanGrid, target=None, workers: int = 1) -> np.ndarray:
    """Fidelity with ``target`` at every (theta_i, phi_j); rows follow theta.

    With ``workers > 1`` rows are computed in a process pool; results are
    collected in grid order regardless of completion order.
    """
    target = basis(2) if target is None else check_pure_state(target)
    if workers <= 1:
        rows = [_scan_row(grid, target, t) for t in grid.theta_values]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            n = len(grid.theta_values)
            rows = list(pool.map(_scan_row, [grid] * n, [target] * n, grid.theta_values))
    return np.array(rows, dtype=float)


# --- small-angle robustness ----------------------------------------------

SIGN_PATTERNS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class RobustnessQuery:
    delta: float
    signs: tuple[int, int] = (1, 1)

    def __post_init__(self):
        if not 0 <= self.delta <= math.pi / 2:
            raise ValidationError(f"delta must lie in [0, pi/2], got {self.delta}")
        if tuple(self.signs) not in SIGN_PATTERNS:
            raise ValidationError(f"signs must be a pair of +1/-1, got {self.signs}")


@dataclass(frozen=True)
class DeltaBoundResult:
    overlap: float
    bound_value: float
    satisfied: bool


def perturbed_reset_word(q: RobustnessQuery, word: str = "ABA") -> QuantumWord:
    s_theta, s_phi = q.signs
    theta = math.pi / 2 + s_theta * q.delta
    phi = math.pi / 2 + s_phi * q.delta
    return standard_alphabet(theta, phi).word(word)


def verify_delta_bound(q: RobustnessQuery, quartic_slack: float = QUARTIC_SLACK) -> DeltaBoundResult:
    """Check worst-case overlap of ABA >= 1 - (3/4) delta^2 - c delta^4 at perturbed angles."""
    if q.delta > MAX_DELTA:
        raise ValidationError(f"delta {q.delta} is outside the small-angle range [0, {MAX_DELTA}]")
    overlap = worst_case_fidelity(perturbed_reset_word(q), basis(2))
    bound = 1.0 - 0.75 * q.delta**2
    return DeltaBoundResult(overlap, bound, overlap >= bound - quartic_slack * q.delta**4)


def calibrate_quartic_slack(deltas: Sequence[float] | None = None) -> float:
    """Smallest c making the quartic-corrected bound hold over a Delta sweep."""
    if deltas is None:
        deltas = [0.02 * i for i in range(1, 11)]
    worst = 0.0
    for delta in deltas:
        for signs in SIGN_PATTERNS:
            r = verify_delta_bound(RobustnessQuery(delta, signs), quartic_slack=0.0)
            worst = max(worst, (r.bound_value - r.overlap) / delta**4)
    return worst


# --- exhaustive word search ----------------------------------------------

def search_sync_words(
    alphabet: QuantumAlphabet, target, max_len: int, threshold: float
) -> list[tuple[str, float]]:
    """All words up to ``max_len`` whose worst-case fidelity reaches ``threshold``.

    Sorted by length, then fidelity (descending), then lexicographically.
    """
    target = check_pure_state(target)
    count = sum(len(alphabet.letters) ** n for n in range(max_len + 1))
    if max_len < 0 or count > MAX_SEARCH_WORDS + sum(3**n for n in range(8)):
        raise ValidationError(
            f"max_len={max_len} would enumerate {count} words; "
            f"the limit is words of length <= 8 over 3 letters"
        )
    hits = []
    for letters in all_words(alphabet, max_len):
        f = worst_case_fidelity(alphabet.word(letters), target)
        if f >= threshold:
            hits.append((letters, f))
    hits.sort(key=lambda item: (len(item[0]), -item[1], item[0]))
    return hits
