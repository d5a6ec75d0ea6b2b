"""Compound states on G (x) H and the entanglements that produce them.

Fixed conventions:

* ``omega`` acts on G (x) H with G the leading factor.
* The involution J on G is complex conjugation in the computational basis,
  so the G-transpose of B is ``B.T``. ``standard_compound`` instead works
  in the eigenbasis of rho.
* An amplitude operator ``upsilon: F -> G (x) H`` is stored as a
  ``(dG*dH) x dF`` matrix; the entangling operator ``kappa: G -> F (x) H``
  as a ``(dF*dH) x dG`` matrix.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import BadWeights, DimensionMismatch, NotNormalized, NotOrthogonal
from .states import (
    DENSITY_TOL,
    DensityOperator,
    Ensemble,
    _frozen,
    validate_density,
)


@dataclass(frozen=True)
class AmplitudeOperator:
    """Hilbert-Schmidt-normalized operator with factor metadata.

    ``domain`` is the dimension of the source space; ``codomain`` lists the
    factor dimensions of the target, leading factor first.
    """

    matrix: np.ndarray
    domain: int
    codomain: tuple[int, int]

    def __post_init__(self):
        m = self.matrix
        if m.shape != (self.codomain[0] * self.codomain[1], self.domain):
            raise DimensionMismatch(
                f"matrix shape {m.shape} does not map {self.domain} -> "
                f"{self.codomain[0]}x{self.codomain[1]}"
            )
        norm2 = float(np.vdot(m, m).real)
        if abs(norm2 - 1.0) > DENSITY_TOL:
            raise NotNormalized(f"tr(v^dag v) = {norm2:.12g}, expected 1")


def make_amplitude(matrix, d_g: int, d_h: int) -> AmplitudeOperator:
    """Wrap ``upsilon: F -> G (x) H``; dF is read from the column count."""
    m = linalg.as_matrix(matrix)
    if m.shape[0] != d_g * d_h:
        raise DimensionMismatch(f"{m.shape[0]} rows cannot split as {d_g}x{d_h}")
    return AmplitudeOperator(_frozen(m), m.shape[1], (d_g, d_h))


@dataclass(frozen=True)
class CompoundState:
    dim_g: int
    dim_h: int
    omega: np.ndarray
    label: str = "generic"

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_g, self.dim_h)

    @property
    def density(self) -> DensityOperator:
        return DensityOperator(self.omega)


def make_compound(omega, dim_g: int, dim_h: int, label: str = "generic") -> CompoundState:
    m = linalg.as_matrix(omega, square=True)
    if m.shape[0] != dim_g * dim_h:
        raise DimensionMismatch(f"omega of side {m.shape[0]} is not {dim_g}x{dim_h}")
    rho = validate_density(m)
    return CompoundState(dim_g, dim_h, rho.matrix, label)


def compound_from_amplitude(v: AmplitudeOperator) -> CompoundState:
    """``omega = upsilon upsilon^dag``."""
    m = v.matrix
    return make_compound(m @ m.conj().T, *v.codomain)


def entangling_from_amplitude(v: AmplitudeOperator) -> AmplitudeOperator:
    """Entangling operator ``kappa: G -> F (x) H`` with ``kappa~ = upsilon``.

    With J the computational-basis conjugation and the unitary freedom on F
    fixed to the identity, the relation is a pure index reshuffle,
    ``<f,h|kappa|g> = <g,h|upsilon|f>``. The compound state rebuilt from
    kappa is the original omega, ``tr_F kappa kappa^dag = tr_G omega`` and
    ``kappa^dag kappa = (tr_H omega)^T``, i.e. pi(I), the G-transposed marginal.
    """
    d_g, d_h = v.codomain
    d_f = v.domain
    t = v.matrix.reshape(d_g, d_h, d_f)
    kappa = t.transpose(2, 1, 0).reshape(d_f * d_h, d_g)
    return AmplitudeOperator(_frozen(kappa), d_g, (d_f, d_h))


def compound_from_entangling(kappa: AmplitudeOperator) -> CompoundState:
    """Inverse of :func:`entangling_from_amplitude`: rebuild omega from kappa."""
    d_f, d_h = kappa.codomain
    d_g = kappa.domain
    upsilon = kappa.matrix.reshape(d_f, d_h, d_g).transpose(2, 1, 0).reshape(d_g * d_h, d_f)
    return make_compound(upsilon @ upsilon.conj().T, d_g, d_h)


def pi_star_eval(w: CompoundState, b) -> np.ndarray:
    """``pi_*(B) = tr_G[(B~ (x) I) omega]`` with ``B~ = B.T``."""
    b = linalg.as_matrix(b, square=True)
    if b.shape[0] != w.dim_g:
        raise DimensionMismatch(f"B is {b.shape[0]}x{b.shape[0]}, expected {w.dim_g}")
    op = np.kron(b.T, np.eye(w.dim_h)) @ w.omega
    return linalg.partial_trace(op, w.dims, keep="H")


def pi_eval(w: CompoundState, a) -> np.ndarray:
    """``pi(A) = tr_H[(I (x) A) omega^{T_G}] = kappa^dag (I (x) A) kappa``."""
    a = linalg.as_matrix(a, square=True)
    if a.shape[0] != w.dim_h:
        raise DimensionMismatch(f"A is {a.shape[0]}x{a.shape[0]}, expected {w.dim_h}")
    op = np.kron(np.eye(w.dim_g), a) @ linalg.partial_transpose_g(w.omega, w.dims)
    return linalg.partial_trace(op, w.dims, keep="G")


def standard_amplitude(rho) -> np.ndarray:
    """``theta = sum_n sqrt(lambda_n) e_n (x) e_n`` in the eigenbasis of rho."""
    rho = validate_density(rho)
    lam, vec = linalg.hermitian_eig(rho.matrix)
    lam = np.where(linalg.support_mask(lam), lam, 0.0)
    d = rho.dim
    theta = np.zeros(d * d, dtype=complex)
    for k in range(d):
        if lam[k] > 0:
            theta += np.sqrt(lam[k]) * np.kron(vec[:, k], vec[:, k])
    return theta / np.linalg.norm(theta)


def standard_compound(rho) -> CompoundState:
    """Pure compound state of the standard entanglement; both marginals are rho."""
    rho = validate_density(rho)
    theta = standard_amplitude(rho)
    return make_compound(np.outer(theta, theta.conj()), rho.dim, rho.dim, "standard")


def _check_weights(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.size == 0 or np.any(~np.isfinite(w)) or np.any(w < 0) or abs(w.sum() - 1) > DENSITY_TOL:
        raise BadWeights(f"weights must be a probability vector, got {list(w)}")
    return w


def c_compound(items) -> CompoundState:
    """Separable state ``sum_n mu(n) sigma_n (x) rho_n``.

    ``items`` is a list of ``(weight, sigma_n, rho_n)`` triples.
    """
    items = list(items)
    w = _check_weights([it[0] for it in items])
    sigmas = [validate_density(it[1]) for it in items]
    rhos = [validate_density(it[2]) for it in items]
    if len({s.dim for s in sigmas}) != 1 or len({r.dim for r in rhos}) != 1:
        raise DimensionMismatch("all sigma_n must share one dimension, all rho_n another")
    omega = sum(mu * np.kron(s.matrix, r.matrix) for mu, s, r in zip(w, sigmas, rhos))
    return make_compound(omega, sigmas[0].dim, rhos[0].dim, "c")


def d_compound(e: Ensemble, dim_g: int | None = None, label: str = "d") -> CompoundState:
    """Diagonal compound ``sum_n mu(n) |n><n| (x) rho_n``.

    The probe dimension defaults to the ensemble size; a larger ``dim_g``
    leaves the extra basis vectors unused.
    """
    _check_weights(e.weights)
    d_g, d_h = (len(e) if dim_g is None else dim_g), e.dim
    if d_g < len(e):
        raise DimensionMismatch(f"dim_g={d_g} is smaller than the ensemble size {len(e)}")
    omega = np.zeros((d_g * d_h, d_g * d_h), dtype=complex)
    for n, (mu, rho) in enumerate(e.items()):
        omega[n * d_h:(n + 1) * d_h, n * d_h:(n + 1) * d_h] = mu * rho.matrix
    return make_compound(omega, d_g, d_h, label)


def o_compound(e: Ensemble, dim_g: int | None = None) -> CompoundState:
    """d-compound whose output states are pairwise orthogonal."""
    if not e.pairwise_orthogonal:
        raise NotOrthogonal("ensemble states are not pairwise orthogonal")
    return d_compound(e, dim_g, label="o")


def marginals(w: CompoundState) -> tuple[DensityOperator, DensityOperator]:
    """``(tr_H omega, tr_G omega)``."""
    sigma = linalg.partial_trace(w.omega, w.dims, keep="G")
    rho = linalg.partial_trace(w.omega, w.dims, keep="H")
    return validate_density(sigma), validate_density(rho)


def compound_to_json(w: CompoundState) -> dict:
    return {
        "kind": "compound",
        "dim_g": w.dim_g,
        "dim_h": w.dim_h,
        "matrix": linalg.matrix_to_json(w.omega),
    }


def compound_from_json(obj: dict) -> CompoundState:
    if obj.get("kind") != "compound":
        raise ValueError(f"expected kind 'compound', got {obj.get('kind')!r}")
    return make_compound(
        linalg.matrix_from_json(obj["matrix"]), int(obj["dim_g"]), int(obj["dim_h"])
    )
