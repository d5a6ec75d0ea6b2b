"""Entropy functionals in nats.

Relative and mutual entropies are ``float``; an infinite relative entropy is
returned as ``math.inf`` only when the support test fires, never from a
floating-point overflow.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import linalg
from .entangle import CompoundState, marginals, standard_compound
from .errors import DimensionMismatch, InconsistentResult
from .states import DensityOperator, validate_density

LEAK_TOL = 1e-10
CROSS_CHECK_TOL = 1e-8


def spectrum_entropy(eigenvalues) -> float:
    """``-sum lambda ln lambda`` over eigenvalues above the support cutoff."""
    lam = np.asarray(eigenvalues, dtype=float)
    mask = linalg.support_mask(lam)
    return float(-np.sum(linalg.xlogx(lam[mask])))


def matrix_entropy(m) -> float:
    """Von Neumann entropy of a raw PSD matrix (no validation)."""
    return spectrum_entropy(np.linalg.eigvalsh(m))


def von_neumann(rho) -> float:
    rho = validate_density(rho)
    return spectrum_entropy(np.linalg.eigvalsh(rho.matrix))


def relative_entropy(w, phi) -> float:
    """``tr w (ln w - ln phi)`` on supports, or ``inf`` if supp w leaks out of supp phi.

    Both logarithms are taken in their own eigenbases and combined through
    the overlap matrix, ``sum_ij |<u_i|v_j>|^2 lambda_i ln gamma_j``.
    """
    w = validate_density(w)
    phi = validate_density(phi)
    if w.dim != phi.dim:
        raise DimensionMismatch(f"states have dimensions {w.dim} and {phi.dim}")
    lam, u = linalg.hermitian_eig(w.matrix)
    gam, v = linalg.hermitian_eig(phi.matrix)
    sw = linalg.support_mask(lam)
    sp = linalg.support_mask(gam)
    ker = v[:, ~sp]
    leak = float(np.real(np.trace(ker.conj().T @ w.matrix @ ker))) if ker.size else 0.0
    if leak > LEAK_TOL:
        return math.inf
    overlap = np.abs(u[:, sw].conj().T @ v[:, sp]) ** 2
    self_term = float(np.sum(linalg.xlogx(lam[sw])))
    cross_term = float(lam[sw] @ overlap @ np.log(gam[sp]))
    return self_term - cross_term


def mutual_entropy(w: CompoundState, check: bool = True) -> float:
    """``S(omega, sigma (x) rho)`` for the marginals sigma, rho of omega.

    With ``check`` the value is compared against ``S(sigma)+S(rho)-S(omega)``
    and :class:`InconsistentResult` is raised on a mismatch above 1e-8.
    """
    sigma, rho = marginals(w)
    value = relative_entropy(w.omega, np.kron(sigma.matrix, rho.matrix))
    if math.isinf(value):
        # marginals always dominate omega; an infinity here is a numerical fault
        raise InconsistentResult("mutual entropy came out infinite")
    if check:
        alt = von_neumann(sigma) + von_neumann(rho) - matrix_entropy(w.omega)
        if abs(alt - value) > CROSS_CHECK_TOL:
            raise InconsistentResult(
                f"relative-entropy route {value:.15g} vs entropy identity {alt:.15g}"
            )
    return value


def q_entropy(rho, verify: bool = False) -> float:
    """Twice the von Neumann entropy.

    With ``verify`` the closed form is checked against the mutual entropy of
    the standard compound state.
    """
    rho = validate_density(rho)
    value = 2.0 * von_neumann(rho)
    if verify:
        direct = mutual_entropy(standard_compound(rho))
        if abs(direct - value) > CROSS_CHECK_TOL:
            raise InconsistentResult(f"2S = {value:.15g} but I(standard) = {direct:.15g}")
    return value


class ConditionalEntropies(NamedTuple):
    q_conditional: float
    disentanglement: float


def conditional_and_disentanglement(w: CompoundState) -> ConditionalEntropies:
    """q-conditional entropy ``S~(sigma) - I`` and degree of disentanglement ``S(sigma) - I``."""
    sigma, _ = marginals(w)
    info = mutual_entropy(w)
    s_sigma = von_neumann(sigma)
    return ConditionalEntropies(2.0 * s_sigma - info, s_sigma - info)


def holevo_quantity(weights, states) -> float:
    """``sum_n mu(n) S(rho_n || sum_m mu(m) rho_m)`` as ``S(avg) - sum mu S(rho_n)``."""
    weights = np.asarray(weights, dtype=float)
    mats = [np.asarray(getattr(s, "matrix", s), dtype=complex) for s in states]
    avg = sum(mu * m for mu, m in zip(weights, mats))
    return matrix_entropy(avg) - float(sum(mu * matrix_entropy(m) for mu, m in zip(weights, mats)))
