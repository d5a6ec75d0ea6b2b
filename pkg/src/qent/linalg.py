"""Dense complex-matrix kernel.

Conventions used across the package:

* matrices are ``complex128`` numpy arrays, row-major;
* bipartite operators live on G (x) H with G the leading (slow) index,
  i.e. ``np.kron(g_op, h_op)``;
* logarithms are natural.
"""
from __future__ import annotations

from typing import Literal, NamedTuple

import numpy as np

from .errors import DimensionMismatch, NonFinite, NonHermitian, NonSquare, NotPSD

HERMITIAN_TOL = 1e-9
PSD_FLOOR = 1e-9
SUPPORT_CUTOFF = 1e-12


class EigenSystem(NamedTuple):
    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # columns, unitary


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array (a fresh copy)."""
    m = np.array(a, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite("matrix has NaN or Inf entries")
    if square and m.shape[0] != m.shape[1]:
        raise NonSquare(f"matrix is {m.shape[0]}x{m.shape[1]}, expected square")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def kron(*ops: np.ndarray) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def fro(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # make the leading largest-magnitude entry of each column real positive
    mags = np.abs(vecs)
    idx = np.argmax(mags >= mags.max(axis=0, keepdims=True) - 1e-12, axis=0)
    cols = np.arange(vecs.shape[1])
    pivot = vecs[idx, cols]
    phase = pivot / np.abs(pivot)
    return vecs / phase[np.newaxis, :]


def hermitian_eig(a) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as ``(a + a^dag)/2`` after checking that the
    anti-Hermitian part is below ``1e-9 * ||a||_F``. Eigenvalues come back in
    descending order, and each eigenvector is phase-normalized so its first
    largest-magnitude entry is real and positive, which makes the output
    reproducible for a given input.
    """
    m = as_matrix(a, square=True)
    scale = fro(m)
    if fro(m - dagger(m)) > HERMITIAN_TOL * scale:
        raise NonHermitian("matrix is not Hermitian within tolerance")
    m = 0.5 * (m + dagger(m))
    w, v = np.linalg.eigh(m)
    w = w[::-1].copy()
    v = _fix_phases(v[:, ::-1])
    return EigenSystem(w, v)


def support_mask(eigenvalues: np.ndarray) -> np.ndarray:
    """Boolean mask of eigenvalues strictly above the support cutoff."""
    lam_max = float(np.max(eigenvalues)) if eigenvalues.size else 0.0
    if lam_max <= 0:
        return np.zeros(eigenvalues.shape, dtype=bool)
    return eigenvalues > SUPPORT_CUTOFF * lam_max


def check_psd(eigenvalues: np.ndarray) -> None:
    lam_max = max(float(np.max(eigenvalues)), 0.0)
    floor = -PSD_FLOOR * lam_max if lam_max > 0 else -PSD_FLOOR
    if float(np.min(eigenvalues)) < floor:
        raise NotPSD(f"negative eigenvalue {float(np.min(eigenvalues)):.3e}")


_FUNCS = {"ln": np.log, "sqrt": np.sqrt}


def matrix_func_on_support(a, f: Literal["ln", "sqrt"]) -> np.ndarray:
    """Apply ``ln`` or ``sqrt`` to the nonzero spectrum of a PSD matrix.

    Eigenvalues at or below ``1e-12 * lambda_max`` count as exact zeros and are
    mapped to 0, so ``ln`` yields the support-restricted logarithm.
    """
    if f not in _FUNCS:
        raise ValueError(f"unsupported function {f!r}; expected 'ln' or 'sqrt'")
    lam, vec = hermitian_eig(a)
    check_psd(lam)
    mask = support_mask(lam)
    vals = np.zeros_like(lam)
    vals[mask] = _FUNCS[f](lam[mask])
    return (vec * vals) @ dagger(vec)


def _keep_index(keep) -> int:
    if keep in ("G", "g", 0):
        return 0
    if keep in ("H", "h", 1):
        return 1
    raise ValueError(f"keep must be 'G' or 'H', got {keep!r}")


def partial_trace(w, dims: tuple[int, int], keep="G") -> np.ndarray:
    """Trace out one factor of an operator on G (x) H.

    ``keep="G"`` returns ``tr_H w`` (dG x dG); ``keep="H"`` returns ``tr_G w``.
    """
    d_g, d_h = int(dims[0]), int(dims[1])
    if d_g < 1 or d_h < 1:
        raise DimensionMismatch(f"factor dimensions must be positive, got {dims}")
    m = np.asarray(w, dtype=complex)
    if m.shape != (d_g * d_h, d_g * d_h):
        raise DimensionMismatch(f"operator of shape {m.shape} does not act on {d_g}x{d_h}")
    t = m.reshape(d_g, d_h, d_g, d_h)
    if _keep_index(keep) == 0:
        return np.einsum("ihjh->ij", t)
    return np.einsum("gigj->ij", t)


def partial_transpose_g(w, dims: tuple[int, int]) -> np.ndarray:
    """Transpose the G factor in the computational basis."""
    d_g, d_h = int(dims[0]), int(dims[1])
    m = np.asarray(w, dtype=complex)
    if m.shape != (d_g * d_h, d_g * d_h):
        raise DimensionMismatch(f"operator of shape {m.shape} does not act on {d_g}x{d_h}")
    t = m.reshape(d_g, d_h, d_g, d_h)
    return t.transpose(2, 1, 0, 3).reshape(d_g * d_h, d_g * d_h)


def xlogx(x: np.ndarray) -> np.ndarray:
    """Elementwise x ln x with 0 ln 0 = 0 (nonpositive inputs map to 0)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log(x[pos])
    return out


def polar_isometry(z: np.ndarray) -> np.ndarray:
    """Nearest isometry ``Z (Z^dag Z)^{-1/2}`` of a tall matrix, via SVD."""
    u, _, vh = np.linalg.svd(z, full_matrices=False)
    return u @ vh


def matrix_to_json(m) -> dict:
    m = as_matrix(m)
    flat = m.reshape(-1)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re_im": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    entries = obj["re_im"]
    if rows < 1 or cols < 1 or len(entries) != rows * cols:
        raise DimensionMismatch(
            f"re_im holds {len(entries)} entries, expected {rows}x{cols}"
        )
    arr = np.array([complex(float(re), float(im)) for re, im in entries], dtype=complex)
    return as_matrix(arr.reshape(rows, cols))
