"""Density operators, ensembles and seeded random states."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import BadRank, BadWeights, DimensionMismatch, NonHermitian, NotPSD, TraceNotOne

DENSITY_TOL = 1e-9
PURE_TOL = 1e-8
ORTHOGONAL_TOL = 1e-9


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class DensityOperator:
    """A validated density matrix. Build it through :func:`validate_density`."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def validate_density(m) -> DensityOperator:
    """Check Hermiticity, positivity and unit trace, then wrap.

    The matrix is symmetrized to ``(m + m^dag)/2`` before the eigenvalue and
    trace checks.
    """
    if isinstance(m, DensityOperator):
        return m
    a = linalg.as_matrix(m, square=True)
    if linalg.fro(a - linalg.dagger(a)) > DENSITY_TOL:
        raise NonHermitian("density matrix is not Hermitian")
    a = 0.5 * (a + linalg.dagger(a))
    lam = np.linalg.eigvalsh(a)
    if lam[0] < -DENSITY_TOL:
        raise NotPSD(f"density matrix has eigenvalue {lam[0]:.3e} < 0")
    tr = np.trace(a).real
    if abs(tr - 1.0) > DENSITY_TOL:
        raise TraceNotOne(f"trace is {tr:.12g}, expected 1")
    return DensityOperator(_frozen(a))


def pure_state(vec) -> DensityOperator:
    """Density of the normalized ket ``vec``."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    v = v / np.linalg.norm(v)
    return validate_density(np.outer(v, v.conj()))


def maximally_mixed(dim: int) -> DensityOperator:
    return validate_density(np.eye(dim) / dim)


def is_pure(rho: DensityOperator) -> bool:
    return float(np.linalg.eigvalsh(rho.matrix)[-1]) >= 1.0 - PURE_TOL


@dataclass(frozen=True)
class Ensemble:
    """Weighted list of states ``{(mu(n), rho_n)}`` with cached structure flags."""

    weights: tuple[float, ...]
    states: tuple[DensityOperator, ...]
    all_pure: bool = field(init=False)
    pairwise_orthogonal: bool = field(init=False)

    def __post_init__(self):
        if len(self.weights) != len(self.states) or not self.states:
            raise BadWeights("ensemble needs one weight per state and at least one item")
        w = np.asarray(self.weights, dtype=float)
        if np.any(~np.isfinite(w)) or np.any(w < 0) or abs(w.sum() - 1.0) > DENSITY_TOL:
            raise BadWeights(f"weights must be a probability vector, got {list(w)}")
        dims = {s.dim for s in self.states}
        if len(dims) != 1:
            raise DimensionMismatch(f"ensemble states have mixed dimensions {sorted(dims)}")
        object.__setattr__(self, "all_pure", all(is_pure(s) for s in self.states))
        object.__setattr__(self, "pairwise_orthogonal", _pairwise_orthogonal(self.states))

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __len__(self) -> int:
        return len(self.states)

    def items(self):
        return list(zip(self.weights, self.states))


def _pairwise_orthogonal(states) -> bool:
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            if linalg.fro(states[i].matrix @ states[j].matrix) > ORTHOGONAL_TOL:
                return False
    return True


def make_ensemble(items) -> Ensemble:
    """Build an ensemble from ``(weight, state)`` pairs; states may be raw matrices."""
    items = list(items)
    return Ensemble(
        tuple(float(w) for w, _ in items),
        tuple(validate_density(s) for _, s in items),
    )


def schatten_decompose(rho) -> Ensemble:
    """Spectral decomposition into weighted rank-one eigenprojectors.

    Only eigenvalues above the support cutoff are kept, in descending order.
    Degenerate eigenspaces get whatever orthonormal basis the eigensolver
    returns.
    """
    rho = validate_density(rho)
    lam, vec = linalg.hermitian_eig(rho.matrix)
    mask = linalg.support_mask(lam)
    lam, vec = lam[mask], vec[:, mask]
    weights = lam / lam.sum()
    states = tuple(
        DensityOperator(_frozen(np.outer(vec[:, k], vec[:, k].conj())))
        for k in range(vec.shape[1])
    )
    return Ensemble(tuple(float(x) for x in weights), states)


def ensemble_mix(e: Ensemble) -> DensityOperator:
    """Average state ``sum_n mu(n) rho_n``."""
    total = sum(w * s.matrix for w, s in zip(e.weights, e.states))
    return validate_density(total)


def random_density(dim: int, rank: int | None = None, seed=None) -> DensityOperator:
    """Random density ``G G^dag / tr`` with ``G`` a dim x rank complex Gaussian.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts (an int or a
    caller-owned ``Generator``). The bit generator is PCG64, so a fixed integer
    seed gives the same matrix on every platform.
    """
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise BadRank(f"rank must be in [1, {dim}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return validate_density(m / np.trace(m).real)


def state_to_json(rho: DensityOperator) -> dict:
    return {"kind": "density", "dim": rho.dim, "matrix": linalg.matrix_to_json(rho.matrix)}


def state_from_json(obj: dict) -> DensityOperator:
    if obj.get("kind") != "density":
        raise ValueError(f"expected kind 'density', got {obj.get('kind')!r}")
    m = linalg.matrix_from_json(obj["matrix"])
    if m.shape != (int(obj["dim"]), int(obj["dim"])):
        raise DimensionMismatch(f"dim {obj['dim']} does not match matrix shape {m.shape}")
    return validate_density(m)


def ensemble_to_json(e: Ensemble) -> dict:
    return {
        "kind": "ensemble",
        "dim": e.dim,
        "items": [
            {"weight": w, "state": linalg.matrix_to_json(s.matrix)} for w, s in e.items()
        ],
    }


def ensemble_from_json(obj: dict) -> Ensemble:
    if obj.get("kind") != "ensemble":
        raise ValueError(f"expected kind 'ensemble', got {obj.get('kind')!r}")
    e = make_ensemble(
        (item["weight"], linalg.matrix_from_json(item["state"])) for item in obj["items"]
    )
    if e.dim != int(obj["dim"]):
        raise DimensionMismatch(f"dim {obj['dim']} does not match state dimension {e.dim}")
    return e
