"""Quantum synchronizing words for qutrits.

Reset arbitrary qutrit states toward |2> with the two-channel alphabet
{A(theta), B(phi)}, prepare real (and, with the phase gate C, complex) states
afterwards, and compute classical synchronizing words of finite automata.
"""

from .channels import (
    KrausChannel,
    QuantumAlphabet,
    QuantumWord,
    adjoint_apply_word,
    apply_channel,
    apply_word,
    make_channel_A,
    make_channel_B,
    make_channel_C,
    standard_alphabet,
)
from .dfa import (
    Dfa,
    greedy_sync_word,
    is_synchronizing,
    make_cerny_automaton,
    shortest_sync_word,
)
from .linalg import ValidationError, basis, fidelity_with_pure, maximally_mixed, pure_to_density
from .prep import PrepFamily, PrepIndex, compile_target, covering_radius, prep_state
from .qsync import scan_overlap, sync_fidelity, verify_delta_bound, worst_case_fidelity

__version__ = "0.1.0"
