"""Seeded randomized invariant suite behind ``qent verify``.

Closed-form checks run ``trials`` times per dimension. Checks that need the
optimizer run on the first ``opt_trials`` instances only, since each costs
seconds rather than microseconds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import capacity as cap
from . import channels, entangle, entropy, linalg, states
from .errors import QentError


@dataclass
class SuiteResult:
    counts: dict[str, list[int]] = field(default_factory=dict)  # name -> [passed, failed]
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, name: str, passed: bool, detail: str = "") -> None:
        slot = self.counts.setdefault(name, [0, 0])
        slot[0 if passed else 1] += 1
        if not passed:
            self.failures.append(f"{name}: {detail}" if detail else name)


def _random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return g + g.conj().T


def _random_amplitude(d_g: int, d_h: int, d_f: int, rng) -> entangle.AmplitudeOperator:
    m = rng.standard_normal((d_g * d_h, d_f)) + 1j * rng.standard_normal((d_g * d_h, d_f))
    return entangle.make_amplitude(m / np.linalg.norm(m), d_g, d_h)


def _checks_closed_form(d: int, rng, res: SuiteResult) -> None:
    a = _random_hermitian(d, rng)
    lam, v = linalg.hermitian_eig(a)
    err = linalg.fro(a - (v * lam) @ v.conj().T)
    res.record("linalg.eig_reconstruction", err <= 1e-10 * max(1.0, linalg.fro(a)), f"{err:.2e}")

    x, y = _random_hermitian(d, rng), _random_hermitian(2, rng)
    pt = linalg.partial_trace(np.kron(x, y), (d, 2), keep="G")
    res.record("linalg.partial_trace_product", linalg.fro(pt - x * np.trace(y)) <= 1e-12 * max(1, linalg.fro(x) * linalg.fro(y)))

    rho = states.random_density(d, int(rng.integers(1, d + 1)), rng)
    back = states.ensemble_mix(states.schatten_decompose(rho))
    res.record("states.schatten_roundtrip", linalg.fro(back.matrix - rho.matrix) <= 1e-10)

    ups = _random_amplitude(d, d, int(rng.integers(1, d + 1)), rng)
    w = entangle.compound_from_amplitude(ups)
    kappa = entangle.entangling_from_amplitude(ups)
    w2 = entangle.compound_from_entangling(kappa)
    sigma, rho_h = entangle.marginals(w)
    kk = kappa.matrix.conj().T @ kappa.matrix
    tr_f = linalg.partial_trace(kappa.matrix @ kappa.matrix.conj().T, kappa.codomain, keep="H")
    ok = (
        linalg.fro(w2.omega - w.omega) <= 1e-10
        and linalg.fro(kk - sigma.matrix.T) <= 1e-10
        and linalg.fro(tr_f - rho_h.matrix) <= 1e-10
    )
    res.record("entangle.amplitude_roundtrip", ok)

    lam_s, v_s = linalg.hermitian_eig(sigma.matrix)
    rot = np.kron(v_s.conj().T, np.eye(d)) @ w.omega @ np.kron(v_s, np.eye(d))
    blocks = rot.reshape(d, d, d, d)
    block_tr = np.einsum("mhnh->mn", blocks)
    res.record("entangle.weak_orthogonality", linalg.fro(block_tr - np.diag(lam_s)) <= 1e-9)

    rho = states.random_density(d, seed=rng)
    std = entangle.standard_compound(rho)
    ev = np.linalg.eigvalsh(std.omega)
    res.record("entangle.standard_rank_one", ev[-2] <= 1e-10)

    s = entropy.von_neumann(rho)
    i_std = entropy.mutual_entropy(std)
    res.record("entropy.q_entropy_standard", abs(i_std - 2 * s) <= 1e-8, f"{i_std} vs {2 * s}")
    dis = entropy.conditional_and_disentanglement(std).disentanglement
    trlnr = -s
    res.record("entropy.disentanglement_infimum", abs(dis - trlnr) <= 1e-8)

    phi = states.random_density(d, seed=rng)
    rel = entropy.relative_entropy(rho, phi)
    res.record("entropy.relative_nonnegative", rel >= -1e-10 and not math.isinf(rel))

    w = entangle.compound_from_amplitude(_random_amplitude(d, 2, 2, rng))
    sg, rh = entangle.marginals(w)
    i_w = entropy.mutual_entropy(w)
    bound = 2 * min(entropy.von_neumann(sg), entropy.von_neumann(rh))
    res.record("entropy.mutual_bound", -1e-8 <= i_w <= bound + 1e-8)

    k = channels.random_channel(d, d, int(rng.integers(1, 4)), seed=rng)
    w_p = entangle.compound_from_amplitude(_random_amplitude(d, 2, 2, rng))
    i_after = entropy.mutual_entropy(channels.apply_to_probe_factor(k, w_p))
    res.record("entropy.monotonicity", i_after <= entropy.mutual_entropy(w_p) + 1e-8)

    items = [
        (0.5, states.random_density(2, seed=rng), states.random_density(d, seed=rng)),
        (0.5, states.random_density(2, seed=rng), states.random_density(d, seed=rng)),
    ]
    wc = entangle.c_compound(items)
    sg, rh = entangle.marginals(wc)
    res.record(
        "entropy.separable_bound",
        entropy.mutual_entropy(wc)
        <= min(entropy.von_neumann(sg), entropy.von_neumann(rh)) + 1e-8,
    )

    ens = states.make_ensemble(
        [(0.3, states.random_density(d, seed=rng)), (0.7, states.random_density(d, seed=rng))]
    )
    wd = entangle.d_compound(ens)
    mix = states.ensemble_mix(ens)
    gain = sum(mu * entropy.relative_entropy(r, mix) for mu, r in ens.items())
    res.record("entropy.d_compound_gain", abs(entropy.mutual_entropy(wd) - gain) <= 1e-8)

    out = channels.apply_state(k, rho)
    res.record("channels.trace_preserving", abs(np.trace(out.matrix).real - 1) <= 1e-10)
    iso = channels.dilate(k)
    res.record(
        "channels.dilation_roundtrip",
        linalg.fro(channels.apply_isometry(iso, rho) - out.matrix) <= 1e-10,
    )
    w_o = channels.apply_to_output_factor(k, std)
    sg0, _ = entangle.marginals(std)
    sg1, rh1 = entangle.marginals(w_o)
    res.record(
        "channels.output_factor_marginals",
        linalg.fro(sg1.matrix - sg0.matrix) <= 1e-10
        and linalg.fro(rh1.matrix - out.matrix) <= 1e-10,
    )

    u = channels.random_channel(d, d, 1, seed=rng)
    ev_in = np.linalg.eigvalsh(rho.matrix)
    ev_out = np.linalg.eigvalsh(channels.apply_state(u, rho).matrix)
    res.record("channels.deterministic_spectrum", np.max(np.abs(ev_in - ev_out)) <= 1e-9)
    res.record(
        "capacity.info_q_identity",
        abs(cap.info_q(rho, channels.identity_channel(d)).value - 2 * s) <= 1e-8,
    )


def _checks_optimizer(d: int, rng, cfg: cap.OptimizerConfig, res: SuiteResult) -> None:
    rho = states.random_density(d, seed=rng)
    u = channels.random_channel(d, d, 1, seed=rng)
    s = entropy.von_neumann(rho)
    i_d = cap.info_d(rho, u, cfg).value
    i_o = cap.info_o(rho, u, cfg).value
    res.record(
        "capacity.deterministic_channel",
        abs(i_d - s) <= 1e-6 and abs(i_o - s) <= 1e-6,
        f"I_d={i_d}, I_o={i_o}, S={s}",
    )
    k = channels.random_channel(d, d, int(rng.integers(1, 4)), seed=rng)
    rep = cap.verify_ordering(k, rho, cfg, strict=False)
    res.record("capacity.ordering", rep.passed, str(rep))


def run_suite(
    dims=(2, 3),
    trials: int = 100,
    seed: int = 0,
    opt_trials: int = 4,
    cfg: cap.OptimizerConfig | None = None,
    extra_channels: list[Callable[[], channels.KrausChannel]] = (),
) -> SuiteResult:
    """Run every invariant check; ``extra_channels`` are loaders for user channels."""
    cfg = cfg or cap.OptimizerConfig(restarts=1, seed=seed)
    res = SuiteResult()
    for d in dims:
        rng = np.random.default_rng([seed, d])
        for t in range(trials):
            try:
                _checks_closed_form(d, rng, res)
            except QentError as exc:
                res.record(f"closed_form[d={d}]", False, f"{type(exc).__name__}: {exc}")
        for t in range(min(trials, opt_trials)):
            try:
                _checks_optimizer(d, rng, cfg, res)
            except QentError as exc:
                res.record(f"optimizer[d={d}]", False, f"{type(exc).__name__}: {exc}")
    for i, load in enumerate(extra_channels):
        try:
            ch = load()
        except QentError as exc:
            res.record("input_channel", False, f"{type(exc).__name__}: {exc}")
            continue
        rng = np.random.default_rng([seed, 1000 + i])
        rho = states.random_density(ch.dim_in, seed=rng)
        out = channels.apply_state(ch, rho)
        res.record("input_channel.trace_preserving", abs(np.trace(out.matrix).real - 1) <= 1e-10)
        rep = cap.verify_ordering(ch, rho, cfg, strict=False)
        res.record("input_channel.ordering", rep.passed, str(rep))
    return res
