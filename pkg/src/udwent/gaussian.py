"""Entanglement measures for two-mode Gaussian states.

Covariance matrices use the ordering ``(Q_A, P_A, Q_B, P_B)`` and hold the
symmetrized second moments.  The partial transpose flips ``P_B``.
"""

from dataclasses import dataclass

import numpy as np

SYM_TOL = 1e-12

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])
# M = diag(J, J) so that det[V + i hbar M / 2] is the uncertainty function
SYMPLECTIC_FORM = np.kron(np.eye(2), _J)
_PT = np.diag([1.0, 1.0, 1.0, -1.0])


@dataclass(frozen=True)
class SymplecticSpectrum:
    c_plus: float
    c_minus: float


@dataclass(frozen=True)
class EntanglementMeasures:
    sigma: float
    log_negativity: float
    uncertainty: float
    c_minus: float


def validate(v, check_diagonal=True):
    """Return ``v`` as a 4x4 float array after basic sanity checks."""
    v = np.asarray(v, dtype=float)
    if v.shape[-2:] != (4, 4):
        raise ValueError("covariance matrix must be 4x4")
    if not np.all(np.isfinite(v)):
        raise ValueError("covariance matrix has non-finite entries")
    scale = np.max(np.abs(v), axis=(-2, -1), keepdims=True)
    if np.any(np.abs(v - np.swapaxes(v, -1, -2)) > SYM_TOL * scale):
        raise ValueError("covariance matrix is not symmetric")
    if check_diagonal and np.any(np.diagonal(v, axis1=-2, axis2=-1) <= 0):
        raise ValueError("diagonal entries must be positive")
    return v


def partial_transpose(v):
    """Flip the sign of ``P_B`` (last row and column, diagonal untouched)."""
    v = validate(v, check_diagonal=False)
    return _PT @ v @ _PT


def _blocks(v):
    return v[..., :2, :2], v[..., 2:, 2:], v[..., :2, 2:]


def seralian(v):
    """Symplectic invariant ``det v_AA + det v_BB + 2 det v_AB``.

    Applied to ``V^PT`` it equals ``det v_AA + det v_BB - 2 det v_AB`` of ``V``.
    """
    a, b, c = _blocks(np.asarray(v, dtype=float))
    return np.linalg.det(a) + np.linalg.det(b) + 2.0 * np.linalg.det(c)


def symplectic_spectrum(v):
    """Symplectic eigenvalues ``(c_plus, c_minus)`` of ``v``.

    Pass ``partial_transpose(v)`` for the spectrum entering the negativity.
    The eigenvalues are those of the Hermitian matrix ``i S M S`` with
    ``S = V**(1/2)``, which stays accurate when ``c_plus`` and ``c_minus``
    nearly coincide (the invariant formula loses half the digits there).

    Raises
    ------
    ValueError
        If ``v`` is not positive definite (not a valid covariance matrix).
    """
    v = validate(v, check_diagonal=False)
    w, u = np.linalg.eigh(v)
    if np.any(w <= 0):
        raise ValueError("covariance matrix is not positive definite")
    s = (u * np.sqrt(w)[..., None, :]) @ np.swapaxes(u, -1, -2)
    ev = np.linalg.eigvalsh(1j * (s @ SYMPLECTIC_FORM @ s))
    cp, cm = ev[..., 3], ev[..., 2]
    if np.ndim(cp) == 0:
        return SymplecticSpectrum(float(cp), float(cm))
    return SymplecticSpectrum(cp, cm)


def _det_shifted(v, hbar):
    m = v + 0.5j * hbar * SYMPLECTIC_FORM
    out = np.linalg.det(m)
    scale = np.maximum(np.abs(np.linalg.det(v)), hbar**4)
    if np.any(np.abs(np.imag(out)) > 1e-10 * scale):
        raise ArithmeticError("determinant has a non-negligible imaginary part")
    return np.real(out)


def sigma(v, hbar=1.0):
    """``det[V^PT + i hbar M / 2]``; negative iff the state is entangled."""
    return _det_shifted(partial_transpose(v), hbar)


def sigma_from_spectrum(v, hbar=1.0):
    """Same quantity through ``(c_+^2 - hbar^2/4)(c_-^2 - hbar^2/4)`` of ``V^PT``.

    Equivalently ``det V^PT - hbar^2 Z^PT / 4 + hbar^4 / 16``, which avoids the
    square roots of the spectrum.
    """
    vpt = partial_transpose(v)
    return np.linalg.det(vpt) - 0.25 * hbar**2 * seralian(vpt) + hbar**4 / 16.0


def uncertainty(v, hbar=1.0):
    """``det[V + i hbar M / 2]``; nonnegative for physical states."""
    return _det_shifted(validate(v, check_diagonal=False), hbar)


def log_negativity(v, hbar=1.0):
    """``max(0, -log2(2 c_- / hbar))`` with ``c_-`` from ``V^PT``."""
    cm = symplectic_spectrum(partial_transpose(v)).c_minus
    with np.errstate(divide="ignore"):
        en = -np.log2(2.0 * np.asarray(cm) / hbar)
    return np.maximum(en, 0.0) if np.ndim(en) else max(float(en), 0.0)


def measures(v, hbar=1.0):
    """All scalar diagnostics of one covariance matrix."""
    vpt = partial_transpose(v)
    cm = symplectic_spectrum(vpt).c_minus
    en = max(0.0, float(-np.log2(2.0 * cm / hbar))) if cm > 0 else np.inf
    return EntanglementMeasures(
        sigma=float(sigma(v, hbar)),
        log_negativity=en,
        uncertainty=float(uncertainty(v, hbar)),
        c_minus=float(cm),
    )


def block_matrix(qq_self, pp_self, qp_self, qq_cross, pp_cross, qp_cross):
    """Assemble the symmetric matrix with equal diagonal blocks.

    ``qp_cross`` is ``<Q_A, P_B> = <P_A, Q_B>``.
    """
    qq_self, pp_self, qp_self, qq_cross, pp_cross, qp_cross = np.broadcast_arrays(
        *map(np.asarray, (qq_self, pp_self, qp_self, qq_cross, pp_cross, qp_cross))
    )
    a = np.stack([np.stack([qq_self, qp_self], -1), np.stack([qp_self, pp_self], -1)], -2)
    c = np.stack([np.stack([qq_cross, qp_cross], -1), np.stack([qp_cross, pp_cross], -1)], -2)
    top = np.concatenate([a, c], -1)
    bottom = np.concatenate([c, a], -1)
    return np.concatenate([top, bottom], -2).astype(float)
