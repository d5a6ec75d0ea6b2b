"""Maximal entangled mutual entropies I_q, I_d, I_o and the capacities C_q, C, C_o.

``info_q`` is closed form. The d- and o-quantities are suprema over input
ensembles, estimated by derivative-free local search (scipy's Powell method)
with seeded random restarts. Restart ``k`` draws its start from an RNG seeded
with ``(cfg.seed, k)``, so adding restarts never changes earlier ones, and the
best value is nondecreasing in ``cfg.restarts``.

Objective for an ensemble of pure inputs ``a_n`` (sub-normalized, so the
weights are ``mu_n = |a_n|^2``)::

    chi = S(sum_n Lambda(a_n a_n^dag)) + sum_n tr X_n ln X_n - sum_n mu_n ln mu_n,

with ``X_n = Lambda(a_n a_n^dag)``. This is ``sum_n mu_n S(Lambda(rho_n) || Lambda(rho0))``
rewritten so that no division by ``mu_n`` is needed.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Literal, NamedTuple

import numpy as np
from scipy.optimize import minimize

from . import linalg
from .channels import KrausChannel, apply_to_output_factor, channel_zoo
from .entangle import standard_compound
from .entropy import mutual_entropy
from .errors import BadParam, DimensionMismatch, OrderingViolated
from .states import DensityOperator, Ensemble, _frozen, validate_density

Kind = Literal["q", "d", "o"]
KINDS = ("q", "d", "o")
DEGENERACY_GAP = 1e-9
ORDERING_TOL = 1e-6
CAPACITY_SLACK = 2e-3


@dataclass(frozen=True)
class OptimizerConfig:
    """Search settings. ``ensemble_size_cap=None`` means ``dim_in**2``.

    ``warm_start`` makes restart 0 start from a canonical feasible point
    (the Schatten decomposition for I_d, the uniform input for capacities)
    instead of a random one.
    """

    restarts: int = 4
    max_iters: int = 100
    tol: float = 1e-12
    seed: int = 0
    ensemble_size_cap: int | None = None
    warm_start: bool = True

    def __post_init__(self):
        if self.restarts < 1:
            raise BadParam("restarts must be >= 1")
        if self.max_iters < 1:
            raise BadParam("max_iters must be >= 1")
        if not self.tol > 0:
            raise BadParam("tol must be > 0")

    def cap_for(self, dim_in: int) -> int:
        cap = dim_in**2 if self.ensemble_size_cap is None else self.ensemble_size_cap
        if cap < dim_in:
            raise BadParam(f"ensemble_size_cap {cap} is below dim_in {dim_in}")
        return cap


@dataclass
class InfoReport:
    kind: str
    value: float
    argmax: object
    iterations: int = 0
    converged: bool = True
    input_state: DensityOperator | None = None
    restart_values: list[float] = field(default_factory=list)


class OrderingReport(NamedTuple):
    i_q: float
    i_d: float
    i_o: float
    passed: bool


# ---------------------------------------------------------------------------
# objectives


def _entropy_batch(mats: np.ndarray) -> np.ndarray:
    ev = np.linalg.eigvalsh(mats)
    return -linalg.xlogx(ev).sum(axis=-1)


def chi_from_amplitudes(kraus: np.ndarray, amps: np.ndarray) -> float:
    """Holevo-type information of the ensemble with sub-normalized rows ``amps``.

    ``kraus`` has shape ``(K, d_out, d_in)``; ``amps`` has shape ``(n, d_in)``
    with ``sum |a_n|^2 = 1``.
    """
    b = np.einsum("kij,nj->nki", kraus, amps)
    outs = np.einsum("nki,nkj->nij", b, b.conj())
    avg = outs.sum(axis=0)
    mu = np.einsum("ni,ni->n", amps, amps.conj()).real
    return float(
        _entropy_batch(avg)
        - _entropy_batch(outs).sum()
        - linalg.xlogx(mu).sum()
    )


def info_q_from_spectrum(kraus: np.ndarray, lam: np.ndarray, u: np.ndarray) -> float:
    """I_q for the input ``U diag(lam) U^dag`` via ``S(rho0) + S(Lambda rho0) - S(omega)``."""
    t = (u * np.sqrt(np.clip(lam, 0, None))) @ u.T  # theta reshaped to d x d
    vecs = np.einsum("gh,koh->kgo", t, kraus).reshape(kraus.shape[0], -1)
    gram = vecs.conj() @ vecs.T
    rho0 = (u * lam) @ u.conj().T
    out = np.einsum("kij,jl,kml->im", kraus, rho0, kraus.conj())
    return float(
        -linalg.xlogx(lam).sum() + _entropy_batch(out) - _entropy_batch(gram)
    )


# ---------------------------------------------------------------------------
# search machinery


def _complex(x: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    n = shape[0] * shape[1]
    return (x[:n] + 1j * x[n:2 * n]).reshape(shape)


def _real(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex).reshape(-1)
    return np.concatenate([z.real, z.imag])


def _restart_rng(seed: int, k: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(k)])


class _Best(NamedTuple):
    value: float
    x: np.ndarray
    iterations: int
    converged: bool
    restart_values: list[float]


def _maximize(
    fun: Callable[[np.ndarray], float],
    starts: Callable[[int], np.ndarray],
    cfg: OptimizerConfig,
) -> _Best:
    best_val, best_x, iters, conv = -np.inf, None, 0, False
    values = []
    for k in range(cfg.restarts):
        x0 = starts(k)
        f0 = fun(x0)
        res = minimize(
            lambda x: -fun(x),
            x0,
            method="Powell",
            options={"maxiter": cfg.max_iters, "xtol": 1e-8, "ftol": cfg.tol},
        )
        val, x = -float(res.fun), res.x
        if f0 > val:
            val, x = f0, x0
        values.append(val)
        iters += int(res.nit)
        # strict improvement only: ties keep the lowest restart index
        if val > best_val:
            best_val, best_x, conv = val, np.array(x), bool(res.success)
    return _Best(best_val, best_x, iters, conv, values)


def _check_input(rho0, ch: KrausChannel) -> DensityOperator:
    rho0 = validate_density(rho0)
    if rho0.dim != ch.dim_in:
        raise DimensionMismatch(f"input state has dim {rho0.dim}, channel expects {ch.dim_in}")
    return rho0


def _pure_ensemble(amps: np.ndarray) -> Ensemble:
    mu = np.einsum("ni,ni->n", amps, amps.conj()).real
    keep = mu > 1e-12 * mu.max()
    weights = mu[keep] / mu[keep].sum()
    states = []
    for a in amps[keep]:
        v = a / np.linalg.norm(a)
        states.append(DensityOperator(_frozen(np.outer(v, v.conj()))))
    return Ensemble(tuple(float(w) for w in weights), tuple(states))


# ---------------------------------------------------------------------------
# fixed-input information functionals


def info_q(rho0, ch: KrausChannel) -> InfoReport:
    """Mutual entropy of the standard compound state sent through the channel."""
    rho0 = _check_input(rho0, ch)
    w0 = standard_compound(rho0)
    value = mutual_entropy(apply_to_output_factor(ch, w0))
    return InfoReport("q", value, w0, input_state=rho0)


def _degenerate_blocks(lam: np.ndarray) -> list[np.ndarray]:
    support = np.flatnonzero(linalg.support_mask(lam))
    blocks, current = [], [support[0]]
    for i in support[1:]:
        if lam[current[-1]] - lam[i] <= DEGENERACY_GAP:
            current.append(i)
        else:
            blocks.append(np.array(current))
            current = [i]
    blocks.append(np.array(current))
    return blocks


def info_o(rho0, ch: KrausChannel, cfg: OptimizerConfig | None = None) -> InfoReport:
    """Information of the orthogonal (Schatten) decompositions of rho0.

    With a nondegenerate spectrum the decomposition is unique and evaluated
    directly. Otherwise every degenerate eigenspace gets its own unitary
    rotation, searched with seeded restarts; restart 0 is the solver's
    eigenbasis.
    """
    cfg = cfg or OptimizerConfig()
    rho0 = _check_input(rho0, ch)
    kraus = ch.stacked
    lam, u = linalg.hermitian_eig(rho0.matrix)
    blocks = _degenerate_blocks(lam)
    support = np.concatenate(blocks)
    lam_s = lam[support]

    def basis(x: np.ndarray) -> np.ndarray:
        cols, off = [], 0
        for blk in blocks:
            m = len(blk)
            if m == 1:
                cols.append(u[:, blk])
                continue
            z = _complex(x[off:off + 2 * m * m], (m, m))
            off += 2 * m * m
            cols.append(u[:, blk] @ linalg.polar_isometry(z))
        return np.hstack(cols)

    def objective(x: np.ndarray) -> float:
        return chi_from_amplitudes(kraus, (basis(x) * np.sqrt(lam_s)).T)

    sizes = [len(b) for b in blocks if len(b) > 1]
    if not sizes:
        x = np.zeros(0)
        best = _Best(objective(x), x, 0, True, [])
    else:
        def starts(k: int) -> np.ndarray:
            if k == 0:
                return np.concatenate([_real(np.eye(m)) for m in sizes])
            rng = _restart_rng(cfg.seed, k)
            return rng.standard_normal(sum(2 * m * m for m in sizes))

        best = _maximize(objective, starts, cfg)
    v = basis(best.x)
    ens = _pure_ensemble((v * np.sqrt(lam_s)).T)
    return InfoReport(
        "o", best.value, ens, best.iterations, best.converged, rho0, best.restart_values
    )


def info_d(rho0, ch: KrausChannel, cfg: OptimizerConfig | None = None) -> InfoReport:
    """Supremum of the information over pure-state ensembles averaging to rho0.

    Ensembles are parametrized as the rows of ``conj(W) rho0^{1/2}`` for an
    isometry ``W`` (cap x d, obtained as the polar factor of a free complex
    matrix), which keeps the average equal to rho0 for every parameter value.
    """
    cfg = cfg or OptimizerConfig()
    rho0 = _check_input(rho0, ch)
    d = rho0.dim
    cap = cfg.cap_for(d)
    kraus = ch.stacked
    sqrt_rho = linalg.matrix_func_on_support(rho0.matrix, "sqrt")

    def amplitudes(x: np.ndarray) -> np.ndarray:
        w = linalg.polar_isometry(_complex(x, (cap, d)))
        return w.conj() @ sqrt_rho.T

    def objective(x: np.ndarray) -> float:
        return chi_from_amplitudes(kraus, amplitudes(x))

    warm = None
    if cfg.warm_start:
        o_report = info_o(rho0, ch, cfg)
        vecs = np.array(
            [np.linalg.eigh(s.matrix)[1][:, -1] for s in o_report.argmax.states]
        )
        w0 = np.zeros((cap, d), dtype=complex)
        # rows conj(u_n) reproduce the eigen-amplitudes sqrt(lam_n) u_n
        w0[: len(vecs)] = vecs.conj()
        if len(vecs) < d:
            # complete the isometry on the kernel of rho0 (zero-weight rows)
            q, _ = np.linalg.qr(np.hstack([vecs.T, np.eye(d)]))
            w0[len(vecs):d] = q[:, len(vecs):d].T.conj()
        warm = _real(w0)

    def starts(k: int) -> np.ndarray:
        if k == 0 and warm is not None:
            return warm
        return _restart_rng(cfg.seed, k).standard_normal(2 * cap * d)

    best = _maximize(objective, starts, cfg)
    ens = _pure_ensemble(amplitudes(best.x))
    return InfoReport(
        "d", best.value, ens, best.iterations, best.converged, rho0, best.restart_values
    )


def info(rho0, ch: KrausChannel, kind: Kind, cfg: OptimizerConfig | None = None) -> InfoReport:
    if kind == "q":
        return info_q(rho0, ch)
    if kind == "d":
        return info_d(rho0, ch, cfg)
    if kind == "o":
        return info_o(rho0, ch, cfg)
    raise BadParam(f"kind must be one of {KINDS}, got {kind!r}")


# ---------------------------------------------------------------------------
# capacities


def _spectral_params(x: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray]:
    sq = x[:d] ** 2
    total = sq.sum()
    lam = sq / total if total > 0 else np.full(d, 1.0 / d)
    u = linalg.polar_isometry(_complex(x[d:], (d, d)))
    return lam, u


def capacity(ch: KrausChannel, kind: Kind, cfg: OptimizerConfig | None = None) -> InfoReport:
    """Supremum over input states of I_q, I_d or I_o.

    For ``q`` and ``o`` the input is searched as ``U diag(lam) U^dag``
    (squared-and-normalized weights times the polar factor of a free complex
    matrix); the o-objective uses the columns of U as the orthogonal
    decomposition, which also covers the freedom inside degenerate
    eigenspaces. For ``d`` the joint supremum over the input and its
    decomposition is searched directly over unconstrained pure-state
    ensembles of size ``cap``.
    """
    cfg = cfg or OptimizerConfig()
    d = ch.dim_in
    kraus = ch.stacked
    if kind in ("q", "o"):
        def objective(x: np.ndarray) -> float:
            lam, u = _spectral_params(x, d)
            if kind == "q":
                return info_q_from_spectrum(kraus, lam, u)
            return chi_from_amplitudes(kraus, (u * np.sqrt(lam)).T)

        def starts(k: int) -> np.ndarray:
            if k == 0 and cfg.warm_start:
                return np.concatenate([np.ones(d), _real(np.eye(d))])
            return _restart_rng(cfg.seed, k).standard_normal(d + 2 * d * d)

        best = _maximize(objective, starts, cfg)
        lam, u = _spectral_params(best.x, d)
        rho0 = validate_density((u * lam) @ u.conj().T)
        argmax = standard_compound(rho0) if kind == "q" else _pure_ensemble((u * np.sqrt(lam)).T)
    elif kind == "d":
        cap = cfg.cap_for(d)

        def amplitudes(x: np.ndarray) -> np.ndarray:
            z = _complex(x, (cap, d))
            norm = np.linalg.norm(z)
            return z / norm if norm > 0 else np.full((cap, d), 1.0 / np.sqrt(cap * d))

        def objective(x: np.ndarray) -> float:
            return chi_from_amplitudes(kraus, amplitudes(x))

        def starts(k: int) -> np.ndarray:
            if k == 0 and cfg.warm_start:
                z = np.zeros((cap, d), dtype=complex)
                z[:d] = np.eye(d)
                return _real(z)
            return _restart_rng(cfg.seed, k).standard_normal(2 * cap * d)

        best = _maximize(objective, starts, cfg)
        amps = amplitudes(best.x)
        argmax = _pure_ensemble(amps)
        rho0 = validate_density(amps.T @ amps.conj())
    else:
        raise BadParam(f"kind must be one of {KINDS}, got {kind!r}")
    return InfoReport(
        kind, best.value, argmax, best.iterations, best.converged, rho0, best.restart_values
    )


# ---------------------------------------------------------------------------
# ordering and sweeps


def verify_ordering(
    ch: KrausChannel, rho0, cfg: OptimizerConfig | None = None, strict: bool = True
) -> OrderingReport:
    """Compute (I_q, I_d, I_o) and check ``I_q >= I_d - tol`` and ``I_d >= I_o - tol``.

    ``tol = 1e-6 + cfg.tol``. With ``strict`` a violation raises
    :class:`OrderingViolated`; otherwise it is reported through ``passed``.
    """
    cfg = cfg or OptimizerConfig()
    i_q = info_q(rho0, ch).value
    i_d = info_d(rho0, ch, cfg).value
    i_o = info_o(rho0, ch, cfg).value
    tol = ORDERING_TOL + cfg.tol
    passed = i_q >= i_d - tol and i_d >= i_o - tol
    if strict and not passed:
        raise OrderingViolated(f"I_q={i_q:.12g}, I_d={i_d:.12g}, I_o={i_o:.12g}")
    return OrderingReport(i_q, i_d, i_o, passed)


def thread_count() -> int:
    """Worker cap from ``QENT_THREADS`` (unset or 0 means one per CPU)."""
    raw = os.environ.get("QENT_THREADS", "0").strip() or "0"
    n = int(raw)
    if n < 0:
        raise BadParam("QENT_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


def grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive grid ``start, start+step, ..., stop``."""
    if not step > 0:
        raise BadParam("step must be > 0")
    if start > stop:
        raise BadParam("start must not exceed stop")
    n = int(np.floor((stop - start) / step + 1e-9))
    points = [start + k * step for k in range(n + 1)]
    if stop - points[-1] > 1e-9 * max(1.0, abs(stop)):
        points.append(stop)
    return [min(p, stop) for p in points]


def sweep(
    family: str,
    params,
    rho0,
    cfg: OptimizerConfig | None = None,
    kinds=KINDS,
    threads: int | None = None,
) -> list[dict]:
    """Evaluate the requested information functionals along a channel family.

    Rows come back in the order of ``params`` regardless of scheduling; every
    row uses the same ``cfg`` (and therefore the same seed), so output is
    reproducible.
    """
    cfg = cfg or OptimizerConfig()
    rho0 = validate_density(rho0)

    def row(p: float) -> dict:
        ch = channel_zoo(family, p)
        out = {"param": p}
        for kind in kinds:
            out[kind] = info(rho0, ch, kind, cfg).value
        return out

    params = list(params)
    workers = min(threads or thread_count(), max(len(params), 1))
    if workers <= 1:
        return [row(p) for p in params]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(row, params))
