"""Small dense complex linear algebra for qutrit states.

Vectors and matrices are plain numpy arrays (shape ``(3,)`` and ``(3, 3)``,
complex128). The validators below return read-only copies so that values
handed around the package cannot be mutated in place.

Basis kets |1>, |2>, |3> live at array positions 0, 1, 2.
"""

from __future__ import annotations

import numpy as np

DIM = 3

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
NORM_TOL = 1e-12
PSD_TOL = -1e-10

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


class ValidationError(ValueError):
    """Raised when a vector or matrix violates a state invariant."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def as_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.shape != (DIM,):
        raise ValidationError(f"expected a vector of length {DIM}, got shape {v.shape}")
    return _frozen(v)


def as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != (DIM, DIM):
        raise ValidationError(f"expected a {DIM}x{DIM} matrix, got shape {m.shape}")
    return _frozen(m)


def basis(i: int) -> np.ndarray:
    """Basis ket |i> using 1-based labels."""
    if not 1 <= i <= DIM:
        raise ValidationError(f"basis label must be in 1..{DIM}, got {i}")
    v = np.zeros(DIM, dtype=complex)
    v[i - 1] = 1.0
    return _frozen(v)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def hermitian_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - dagger(m))))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m, dtype=complex)
    return hermitian_defect(m) <= tol


def check_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = as_matrix(m)
    defect = hermitian_defect(m)
    if defect > tol:
        raise ValidationError(f"matrix is not Hermitian (max |M - M^dagger| = {defect:.3e})")
    return m


def _off_norm(m: np.ndarray) -> float:
    off = m - np.diag(np.diag(m))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def _jacobi_rotate(m: np.ndarray, p: int, q: int) -> None:
    """Zero the (p, q) entry of Hermitian ``m`` in place with one complex Jacobi rotation."""
    apq = m[p, q]
    mag = abs(apq)
    if mag == 0.0:
        return
    phase = apq / mag
    tau = (m[q, q].real - m[p, p].real) / (2.0 * mag)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
    c = 1.0 / np.hypot(1.0, t)
    s = t * c
    # rotation restricted to rows/cols (p, q): diag(1, conj(phase)) @ [[c, s], [-s, c]]
    u = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
    idx = [p, q]
    m[:, idx] = m[:, idx] @ u
    m[idx, :] = dagger(u) @ m[idx, :]
    m[p, q] = m[q, p] = 0.0


def hermitian_eigenvalues(m) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending.

    Cyclic complex Jacobi sweeps until the off-diagonal Frobenius norm drops
    below ``1e-14`` (scaled by the matrix norm when that exceeds one).
    """
    a = np.array(check_hermitian(m), dtype=complex)
    a = 0.5 * (a + dagger(a))
    n = a.shape[0]
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) <= JACOBI_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _jacobi_rotate(a, p, q)
    return np.sort(np.diag(a).real)


def check_pure_state(v, tol: float = NORM_TOL) -> np.ndarray:
    v = as_vector(v)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > tol:
        raise ValidationError(f"state vector is not normalized (norm = {norm!r})")
    return v


def check_density_matrix(m) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; return a frozen copy."""
    m = check_hermitian(m)
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
    # Cholesky of M + |tol| I succeeds iff every eigenvalue exceeds tol
    try:
        np.linalg.cholesky(0.5 * (m + dagger(m)) - PSD_TOL * np.eye(DIM))
    except np.linalg.LinAlgError:
        lo = hermitian_eigenvalues(m)[0]
        raise ValidationError(f"density matrix has negative eigenvalue {lo:.3e}") from None
    return m


def pure_to_density(psi) -> np.ndarray:
    """|psi><psi| for a normalized ket."""
    psi = check_pure_state(psi)
    return _frozen(np.outer(psi, np.conj(psi)))


def maximally_mixed() -> np.ndarray:
    return _frozen(np.eye(DIM, dtype=complex) / DIM)


def fidelity_with_pure(rho, psi) -> float:
    """<psi|rho|psi>, clamped to [0, 1]."""
    rho = check_density_matrix(rho)
    psi = check_pure_state(psi)
    value = np.vdot(psi, rho @ psi)
    return float(min(1.0, max(0.0, value.real)))


def projective_angle(psi, chi) -> float:
    """arccos |<psi|chi>|, the distance between rays."""
    overlap = abs(np.vdot(np.asarray(psi), np.asarray(chi)))
    return float(np.arccos(min(1.0, overlap)))


def random_density_matrix(rng: np.random.Generator) -> np.ndarray:
    """Full-rank Ginibre sample G G^dagger / tr(G G^dagger)."""
    g = rng.standard_normal((DIM, DIM)) + 1j * rng.standard_normal((DIM, DIM))
    rho = g @ dagger(g)
    rho = rho / np.trace(rho).real
    return _frozen(0.5 * (rho + dagger(rho)))


def random_pure_state(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(DIM) + 1j * rng.standard_normal(DIM)
    return _frozen(v / np.linalg.norm(v))
