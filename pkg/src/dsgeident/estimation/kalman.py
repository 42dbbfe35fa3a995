"""Gaussian state-space likelihood via the Kalman filter."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import solve_discrete_lyapunov

from ..errors import LyapunovFailureError
from .data import Dataset

Array = NDArray[np.float64]


@dataclass(frozen=True)
class StateSpace:
    """S_t = transition S_{t-1} + loading e_t,  Y_t = selection S_t + me_t.

    ``shock_cov`` is the covariance of e_t; ``meas_cov`` the (optional)
    measurement-error covariance.  The small-scale models use none.
    """

    transition: Array
    loading: Array
    selection: Array
    shock_cov: Array
    meas_cov: Array | None = None

    @property
    def n(self) -> int:
        return self.transition.shape[0]


def stationary_covariance(ss: StateSpace) -> Array:
    q = ss.loading @ ss.shock_cov @ ss.loading.T
    try:
        p0 = solve_discrete_lyapunov(ss.transition, q)
    except Exception as exc:
        raise LyapunovFailureError(f"discrete Lyapunov equation failed: {exc}") from exc
    if not np.all(np.isfinite(p0)):
        raise LyapunovFailureError("discrete Lyapunov solution is not finite")
    return 0.5 * (p0 + p0.T)


def kalman_loglik(ss: StateSpace, data: Dataset | Array) -> float:
    """Exact Gaussian log-likelihood of the observables.

    The filter initializes at the stationary (Lyapunov) state covariance
    with zero mean.  Once the predicted covariance settles (max-abs change
    below 1e-9) the gain is frozen, which leaves the likelihood unchanged
    to numerical precision but roughly halves the cost on long samples.
    Non-finite or degenerate innovations return -inf rather than raising,
    so samplers can treat the draw as impossible.
    """
    y = data.values if isinstance(data, Dataset) else np.asarray(data, dtype=float)
    T, n_obs = y.shape
    a = ss.selection
    trans = ss.transition
    q = ss.loading @ ss.shock_cov @ ss.loading.T
    h = ss.meas_cov if ss.meas_cov is not None else np.zeros((n_obs, n_obs))

    try:
        p = stationary_covariance(ss)
    except LyapunovFailureError:
        return -np.inf

    x = np.zeros(ss.n)
    ll = 0.0
    log2pi = n_obs * np.log(2.0 * np.pi)
    steady = False
    kgain = None
    schol = None
    logdet = 0.0
    for t in range(T):
        if not steady:
            s = a @ p @ a.T + h
            try:
                schol = np.linalg.cholesky(s)
            except np.linalg.LinAlgError:
                return -np.inf
            logdet = 2.0 * np.log(np.diag(schol)).sum()
            kgain = p @ a.T
            sinv_k = np.linalg.solve(s, kgain.T).T  # P A' S^-1
            p_next = trans @ (p - sinv_k @ kgain.T) @ trans.T + q
            if np.abs(p_next - p).max() < 1e-9:
                steady = True
            p = 0.5 * (p_next + p_next.T)
            kmat = sinv_k
        v = y[t] - a @ x
        u = np.linalg.solve(schol, v)
        quad = float(u @ u)
        if not np.isfinite(quad):
            return -np.inf
        ll += -0.5 * (log2pi + logdet + quad)
        x = trans @ (x + kmat @ v)
    return float(ll)


def stacked_gaussian_loglik(ss: StateSpace, data: Dataset | Array) -> float:
    """Brute-force joint Gaussian density over the stacked sample.

    Builds the full T n_Y covariance from the state-space autocovariances
    and evaluates one multivariate normal density.  Exponential in nothing
    but memory, so only sensible for tiny T; used as the oracle against
    :func:`kalman_loglik`.
    """
    y = data.values if isinstance(data, Dataset) else np.asarray(data, dtype=float)
    T, n_obs = y.shape
    p0 = stationary_covariance(ss)
    a = ss.selection
    trans = ss.transition
    h = ss.meas_cov if ss.meas_cov is not None else np.zeros((n_obs, n_obs))

    # state autocovariances E[S_t S_{t-h}'] = trans^h P0
    acov = [p0]
    for _ in range(1, T):
        acov.append(trans @ acov[-1])
    big = np.empty((T, n_obs, T, n_obs))
    for t in range(T):
        for s in range(T):
            block = acov[t - s] if t >= s else acov[s - t].T
            big[t, :, s, :] = a @ block @ a.T + (h if t == s else 0.0)
    sigma = big.reshape(T * n_obs, T * n_obs)
    vec = y.reshape(-1)
    chol = np.linalg.cholesky(sigma)
    u = np.linalg.solve(chol, vec)
    return float(
        -0.5 * (vec.size * np.log(2 * np.pi) + 2 * np.log(np.diag(chol)).sum() + u @ u)
    )
