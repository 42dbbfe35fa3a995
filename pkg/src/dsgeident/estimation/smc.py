"""Sequential Monte Carlo posterior sampling with likelihood tempering.

Particles drawn from the prior are transported to the posterior through
the bridge distributions p(theta | Y)^phi_n p(theta) with the schedule
phi_n = (n / N_phi)^lambda.  Each stage applies correction (importance
reweighting by the likelihood increment, normalized by log-sum-exp),
selection (systematic resampling when the effective sample size drops
below half the particle count), and mutation (one random-walk Metropolis
step per particle, proposal covariance equal to the scaled weighted
particle covariance, with the scale adapted toward a 0.25 acceptance
rate).

Reproducibility: every particle's mutation randomness derives from
(seed, stage, particle index), and stage-level draws (initialization,
resampling) from dedicated streams, so results are bit-identical for any
worker count.
"""

from __future__ import annotations

import multiprocessing as mp
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy.special import logsumexp

from ..errors import (
    DegenerateParticlesError,
    NotConvergedError,
    PriorSupportEmptyError,
)
from .priors import PriorSpec

Array = NDArray[np.float64]


@dataclass
class SMCSettings:
    n_particles: int = 3000
    n_stages: int = 200
    lam: float = 2.0
    init_scale: float = 0.5
    target_accept: float = 0.25
    blocks: int = 1
    ess_threshold: float = 0.5
    workers: int = 1


@dataclass
class ParticleSystem:
    """Weighted parameter draws with tempering diagnostics."""

    particles: Array  # (N, p)
    log_weights: Array  # normalized
    logliks: Array
    names: tuple[str, ...]
    stage: int
    n_stages: int
    phi: float
    ess_history: list[float] = field(default_factory=list)
    accept_history: list[float] = field(default_factory=list)
    scale_history: list[float] = field(default_factory=list)
    phi_history: list[float] = field(default_factory=list)
    resampled: list[bool] = field(default_factory=list)
    rejected_regime_draws: int = 0

    @property
    def n(self) -> int:
        return self.particles.shape[0]

    @property
    def weights(self) -> Array:
        return np.exp(self.log_weights)

    @property
    def ess(self) -> float:
        w = self.weights
        return float(1.0 / np.sum(w**2))

    @property
    def converged(self) -> bool:
        return self.phi >= 1.0 - 1e-12


def weighted_quantile(values: Array, weights: Array, q: float) -> float:
    order = np.argsort(values)
    v = values[order]
    cw = np.cumsum(weights[order])
    cw /= cw[-1]
    idx = int(np.searchsorted(cw, q, side="left"))
    return float(v[min(idx, v.size - 1)])


def posterior_summary(ps: ParticleSystem) -> dict[str, dict[str, float]]:
    """Weighted mean and 5/95 percentiles per parameter.

    Raises NotConvergedError unless the tempering schedule reached
    phi = 1.
    """
    if not ps.converged:
        raise NotConvergedError(
            f"posterior summary requested at phi = {ps.phi:.4f} < 1"
        )
    w = ps.weights
    out = {}
    for j, name in enumerate(ps.names):
        col = ps.particles[:, j]
        out[name] = {
            "mean": float(np.sum(w * col)),
            "q05": weighted_quantile(col, w, 0.05),
            "q95": weighted_quantile(col, w, 0.95),
        }
    return out


def _systematic_resample(weights: Array, u: float) -> np.ndarray:
    n = weights.size
    positions = (u + np.arange(n)) / n
    return np.searchsorted(np.cumsum(weights), positions).clip(0, n - 1)


# -- worker machinery --------------------------------------------------------

_WORKER_STATE: dict = {}


def _init_worker(logpost_obj):
    _WORKER_STATE["logpost"] = logpost_obj


def _mutate_chunk(args):
    (indices, particles, logpriors, logliks, phi, chol, scale, seed, stage, blocks) = args
    logpost = _WORKER_STATE["logpost"]
    out = []
    p = particles.shape[1]
    for row, i in enumerate(indices):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(stage, int(i)))
        )
        x = particles[row].copy()
        lp = logpriors[row]
        ll = logliks[row]
        accepted = 0
        for _ in range(blocks):
            prop = x + scale * (chol @ rng.standard_normal(p))
            lp_prop = logpost.log_prior(prop)
            if np.isfinite(lp_prop):
                ll_prop = logpost.log_lik(prop)
            else:
                ll_prop = -np.inf
            num = lp_prop + phi * ll_prop
            den = lp + phi * ll
            if np.log(rng.uniform()) < num - den:
                x, lp, ll = prop, lp_prop, ll_prop
                accepted += 1
        out.append((int(i), x, lp, ll, accepted))
    return out


class TemperedPosterior:
    """Prior plus likelihood for one estimation problem (picklable)."""

    def __init__(self, prior: PriorSpec, loglik_fn, loglik_args=()):
        self.prior = prior
        self._fn = loglik_fn
        self._args = tuple(loglik_args)

    def log_prior(self, x: Array) -> float:
        return self.prior.logpdf(x)

    def log_lik(self, x: Array) -> float:
        return float(self._fn(x, *self._args))


def smc_sample(
    posterior: TemperedPosterior,
    settings: SMCSettings | None = None,
    seed: int = 0,
    progress=None,
) -> ParticleSystem:
    """Run the tempered SMC sampler; fully reproducible by seed."""
    st = settings or SMCSettings()
    n, n_stages = st.n_particles, st.n_stages
    prior = posterior.prior
    names = prior.names
    p = prior.dim

    init_rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(0, 1 << 20)))
    particles = np.empty((n, p))
    logpriors = np.empty(n)
    for i in range(n):
        draw = prior.sample(init_rng)
        particles[i] = draw
        logpriors[i] = prior.logpdf(draw)
    if not np.isfinite(logpriors).any():
        raise PriorSupportEmptyError("no initial draw had positive prior density")

    pool = None
    chunks = max(1, int(st.workers))
    if chunks > 1:
        ctx = mp.get_context("fork")
        pool = ctx.Pool(chunks, initializer=_init_worker, initargs=(posterior,))
    _init_worker(posterior)

    def eval_logliks(idx_rows):
        # likelihood of freshly drawn particles (initialization only)
        return np.array([posterior.log_lik(particles[i]) for i in idx_rows])

    logliks = eval_logliks(range(n))
    rejected_regime = int(np.sum(~np.isfinite(logliks)))

    log_w = np.full(n, -np.log(n))
    scale = st.init_scale
    ps = ParticleSystem(
        particles=particles, log_weights=log_w, logliks=logliks, names=names,
        stage=0, n_stages=n_stages, phi=0.0,
        rejected_regime_draws=rejected_regime,
    )

    phi_prev = 0.0
    try:
        for stage in range(1, n_stages + 1):
            phi = (stage / n_stages) ** st.lam

            # correction
            incr = (phi - phi_prev) * np.where(np.isfinite(logliks), logliks, -np.inf)
            log_w = log_w + incr
            norm = logsumexp(log_w)
            if not np.isfinite(norm):
                raise DegenerateParticlesError(
                    f"all particle weights vanished at stage {stage} (phi={phi:.4g})"
                )
            log_w = log_w - norm
            w = np.exp(log_w)
            ess = 1.0 / np.sum(w**2)
            if ess < 10.0:
                raise DegenerateParticlesError(
                    f"ESS {ess:.1f} below survivable floor at stage {stage}"
                )

            # selection
            did_resample = ess < st.ess_threshold * n
            if did_resample:
                stage_rng = np.random.default_rng(
                    np.random.SeedSequence(entropy=seed, spawn_key=(stage, 1 << 20))
                )
                idx = _systematic_resample(w, stage_rng.uniform())
                particles = particles[idx].copy()
                logpriors = logpriors[idx].copy()
                logliks = logliks[idx].copy()
                log_w = np.full(n, -np.log(n))
                w = np.exp(log_w)

            # mutation
            mean = np.average(particles, axis=0, weights=w)
            dev = particles - mean
            cov = (dev * w[:, None]).T @ dev
            cov = cov + 1e-10 * np.eye(p)
            chol = np.linalg.cholesky(cov)

            order = np.arange(n)
            splits = np.array_split(order, chunks)
            payloads = [
                (
                    idxs, particles[idxs], logpriors[idxs], logliks[idxs],
                    phi, chol, scale, seed, stage, st.blocks,
                )
                for idxs in splits if idxs.size
            ]
            if pool is not None:
                results = pool.map(_mutate_chunk, payloads)
            else:
                results = [_mutate_chunk(pl) for pl in payloads]
            accepted = 0
            for chunk in results:
                for i, x, lp, ll, acc in chunk:
                    particles[i] = x
                    logpriors[i] = lp
                    logliks[i] = ll
                    accepted += acc
            accept_rate = accepted / (n * st.blocks)

            # scale adaptation toward the target acceptance rate
            expo = np.exp(16.0 * (accept_rate - st.target_accept))
            scale = scale * (0.95 + 0.10 * expo / (1.0 + expo))

            ps.ess_history.append(float(ess))
            ps.accept_history.append(float(accept_rate))
            ps.scale_history.append(float(scale))
            ps.phi_history.append(float(phi))
            ps.resampled.append(bool(did_resample))
            ps.stage = stage
            ps.phi = phi
            ps.particles = particles
            ps.log_weights = log_w
            ps.logliks = logliks
            phi_prev = phi
            if progress is not None:
                progress(stage, n_stages, phi, float(ess), float(accept_rate))
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    return ps
