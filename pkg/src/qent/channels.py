"""Kraus-form quantum channels (Schroedinger picture)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .entangle import CompoundState, make_compound
from .errors import (
    BadParam,
    DimensionMismatch,
    IncompleteKraus,
    ShapeMismatch,
    UnknownChannel,
)
from .states import DensityOperator, _frozen, validate_density

COMPLETENESS_TOL = 1e-9


@dataclass(frozen=True)
class KrausChannel:
    dim_in: int
    dim_out: int
    kraus: tuple[np.ndarray, ...]

    @property
    def stacked(self) -> np.ndarray:
        """Kraus operators as one ``(n, dim_out, dim_in)`` array."""
        return np.stack(self.kraus)

    def __len__(self) -> int:
        return len(self.kraus)


@dataclass(frozen=True)
class Isometry:
    """``Y: H0 (x) F+ -> H`` with ``tr_{F+} Y^dag Y = I``; H0 is the leading input factor."""

    matrix: np.ndarray
    dim_in: int
    dim_env: int
    dim_out: int


def completeness_residual(kraus) -> float:
    ks = [np.asarray(k, dtype=complex) for k in kraus]
    total = sum(k.conj().T @ k for k in ks)
    return linalg.fro(total - np.eye(ks[0].shape[1]))


def make_channel(kraus) -> KrausChannel:
    """Validate shapes and completeness ``sum K^dag K = I`` (Frobenius residual <= 1e-9)."""
    ks = [linalg.as_matrix(k) for k in kraus]
    if not ks:
        raise ShapeMismatch("a channel needs at least one Kraus operator")
    shape = ks[0].shape
    if any(k.shape != shape for k in ks):
        raise ShapeMismatch(f"Kraus operators have differing shapes {[k.shape for k in ks]}")
    res = completeness_residual(ks)
    if res > COMPLETENESS_TOL:
        raise IncompleteKraus(f"completeness residual {res:.3e} exceeds {COMPLETENESS_TOL:g}")
    return KrausChannel(shape[1], shape[0], tuple(_frozen(k) for k in ks))


def apply_matrix(ch: KrausChannel, m: np.ndarray) -> np.ndarray:
    """Raw ``sum K m K^dag`` without validation; also accepts a batch ``(..., d, d)``."""
    k = ch.stacked
    return np.einsum("kij,...jl,kml->...im", k, m, k.conj())


def apply_state(ch: KrausChannel, rho0) -> DensityOperator:
    rho0 = validate_density(rho0)
    if rho0.dim != ch.dim_in:
        raise DimensionMismatch(f"state has dim {rho0.dim}, channel expects {ch.dim_in}")
    return validate_density(apply_matrix(ch, rho0.matrix))


def heisenberg(ch: KrausChannel, a) -> np.ndarray:
    """Dual map ``sum K^dag A K`` on observables of the output space."""
    a = linalg.as_matrix(a, square=True)
    if a.shape[0] != ch.dim_out:
        raise DimensionMismatch(f"observable is {a.shape[0]}-dim, channel output is {ch.dim_out}")
    k = ch.stacked
    return np.einsum("kji,jl,klm->im", k.conj(), a, k)


def _apply_on_factor(ch: KrausChannel, w: CompoundState, factor: int) -> CompoundState:
    d_g, d_h = w.dims
    t = w.omega.reshape(d_g, d_h, d_g, d_h)
    k = ch.stacked
    if factor == 1:
        if d_h != ch.dim_in:
            raise DimensionMismatch(f"H factor is {d_h}-dim, channel expects {ch.dim_in}")
        out = np.einsum("kab,gbhc,kdc->gahd", k, t, k.conj())
        new = (d_g, ch.dim_out)
    else:
        if d_g != ch.dim_in:
            raise DimensionMismatch(f"G factor is {d_g}-dim, channel expects {ch.dim_in}")
        out = np.einsum("kab,bgch,kdc->agdh", k, t, k.conj())
        new = (ch.dim_out, d_h)
    n = new[0] * new[1]
    return make_compound(out.reshape(n, n), *new, label=w.label)


def apply_to_output_factor(ch: KrausChannel, w0: CompoundState) -> CompoundState:
    """``(id (x) Lambda)_*(omega0) = sum (I (x) K) omega0 (I (x) K)^dag``."""
    return _apply_on_factor(ch, w0, 1)


def apply_to_probe_factor(ch: KrausChannel, w0: CompoundState) -> CompoundState:
    """``(Lambda (x) id)_*(omega0)``; acts on the G factor."""
    return _apply_on_factor(ch, w0, 0)


def dilate(ch: KrausChannel) -> Isometry:
    """Stack Kraus operators into ``Y`` with ``K_i = Y(. (x) |i>)``."""
    n = len(ch)
    y = np.zeros((ch.dim_out, ch.dim_in * n), dtype=complex)
    for i, k in enumerate(ch.kraus):
        y[:, i::n] = k
    return Isometry(_frozen(y), ch.dim_in, n, ch.dim_out)


def isometry_normalization_residual(iso: Isometry) -> float:
    yy = iso.matrix.conj().T @ iso.matrix
    reduced = linalg.partial_trace(yy, (iso.dim_in, iso.dim_env), keep="G")
    return linalg.fro(reduced - np.eye(iso.dim_in))


def apply_isometry(iso: Isometry, rho0) -> np.ndarray:
    """``Y (rho0 (x) I+) Y^dag``."""
    rho0 = np.asarray(getattr(rho0, "matrix", rho0), dtype=complex)
    return iso.matrix @ np.kron(rho0, np.eye(iso.dim_env)) @ iso.matrix.conj().T


# ---------------------------------------------------------------------------
# channel zoo

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def weyl_operators(d: int) -> list[np.ndarray]:
    """The d^2 clock-and-shift operators ``X^a Z^b``; ``(0, 0)`` first."""
    omega = np.exp(2j * np.pi / d)
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(omega ** np.arange(d))
    return [
        np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
        for a in range(d)
        for b in range(d)
    ]


def _check_unit_interval(name: str, x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise BadParam(f"{name} must lie in [0, 1], got {x}")
    return x


def identity_channel(d: int) -> KrausChannel:
    return make_channel([np.eye(d)])


def unitary_channel(u) -> KrausChannel:
    u = linalg.as_matrix(u, square=True)
    if linalg.fro(u.conj().T @ u - np.eye(u.shape[0])) > COMPLETENESS_TOL:
        raise BadParam("matrix is not unitary")
    return make_channel([u])


def depolarizing(p: float, dim: int = 2) -> KrausChannel:
    """``rho -> (1-p) rho + p I/d``; p = 1 replaces every input by I/d."""
    p = _check_unit_interval("p", p)
    ops = weyl_operators(dim)
    w0 = np.sqrt(1.0 - p + p / dim**2)
    w = np.sqrt(p) / dim
    kraus = [w0 * ops[0]] + ([w * op for op in ops[1:]] if p > 0 else [])
    return make_channel(kraus)


def amplitude_damping(gamma: float) -> KrausChannel:
    g = _check_unit_interval("gamma", gamma)
    k0 = np.array([[1, 0], [0, np.sqrt(1 - g)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(g)], [0, 0]], dtype=complex)
    return make_channel([k0, k1])


def phase_damping(lam: float) -> KrausChannel:
    lam = _check_unit_interval("lambda", lam)
    k0 = np.array([[1, 0], [0, np.sqrt(1 - lam)]], dtype=complex)
    k1 = np.array([[0, 0], [0, np.sqrt(lam)]], dtype=complex)
    return make_channel([k0, k1])


def random_channel(d_in: int, d_out: int, n_kraus: int, seed=None) -> KrausChannel:
    """Random channel from an orthonormalized Gaussian isometry split into Kraus blocks."""
    if min(d_in, d_out, n_kraus) < 1:
        raise BadParam("dimensions and Kraus count must be positive")
    if d_out * n_kraus < d_in:
        raise BadParam(f"need d_out * n_kraus >= d_in, got {d_out}*{n_kraus} < {d_in}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n_kraus * d_out, d_in)) + 1j * rng.standard_normal(
        (n_kraus * d_out, d_in)
    )
    v = linalg.polar_isometry(g)
    return make_channel([v[i * d_out:(i + 1) * d_out] for i in range(n_kraus)])


_ZOO = {
    "identity": identity_channel,
    "unitary": unitary_channel,
    "depolarizing": depolarizing,
    "amplitude_damping": amplitude_damping,
    "phase_damping": phase_damping,
    "random": random_channel,
}

FAMILIES = ("depolarizing", "amplitude_damping", "phase_damping")


def channel_zoo(name: str, *params, **kwargs) -> KrausChannel:
    """Construct a named channel, e.g. ``channel_zoo("depolarizing", 0.5)``."""
    try:
        factory = _ZOO[name]
    except KeyError:
        raise UnknownChannel(f"unknown channel {name!r}; known: {sorted(_ZOO)}") from None
    return factory(*params, **kwargs)


def channel_to_json(ch: KrausChannel) -> dict:
    return {
        "kind": "kraus",
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "kraus": [linalg.matrix_to_json(k) for k in ch.kraus],
    }


def channel_from_json(obj: dict) -> KrausChannel:
    if obj.get("kind") != "kraus":
        raise ValueError(f"expected kind 'kraus', got {obj.get('kind')!r}")
    ch = make_channel([linalg.matrix_from_json(k) for k in obj["kraus"]])
    if (ch.dim_in, ch.dim_out) != (int(obj["dim_in"]), int(obj["dim_out"])):
        raise ShapeMismatch(
            f"declared {obj['dim_in']}->{obj['dim_out']} but Kraus operators are "
            f"{ch.dim_in}->{ch.dim_out}"
        )
    return ch
