"""Linear rational-expectations solver in Sims canonical form.

Systems are written as

    gamma0 S_t = gamma1 S_{t-1} + C + psi z_t + pi eta_t,

with exogenous shocks ``z_t`` and endogenous one-step-ahead expectation
errors ``eta_t``.  The solver runs a real generalized Schur (QZ)
decomposition, splits stable from unstable roots at a cutoff modulus, and
applies the Lubik-Schorfheide counting rule: existence requires the
unstable-row shock loading to lie in the span of the unstable-row
expectation-error loading, and uniqueness requires that loading to have
full column rank.  Under indeterminacy the full set of stable solutions

    S_t = theta1 S_{t-1} + theta_eps eps_t + theta_sun sun_t

carries an orthonormal sunspot basis ``theta_sun`` whose columns are
normalized to unit length with the first nonzero entry positive, so
indeterminate solutions are reproducible across runs.

All functions here are pure; returned arrays are marked read-only.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from .errors import (
    BoundaryRootWarning,
    InvalidParamsError,
    MissingProjectionError,
    NonPSDCovarianceError,
    NoStableSolutionError,
    SingularPencilError,
)

Array = NDArray[np.float64]

#: Default root-splitting cutoff.  Roots with modulus strictly above this
#: value count as explosive; the tiny offset keeps exact unit roots on the
#: stable side, matching the behaviour expected for near-unit-root models.
DEFAULT_DIV = 1.0 + 1e-8

#: Half-width of the band around the unit circle that triggers a
#: BoundaryRootWarning instead of silent classification.
BOUNDARY_BAND = 1e-6

#: Relative singular-value tolerance for rank decisions on the
#: expectation-error loading restricted to unstable rows.
RANK_RTOL = 1e-9

#: Acceptance residual for the existence (span) condition.
EXISTENCE_TOL = 1e-8


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(a)
    out.setflags(write=False)
    return out


class Verdict(enum.Enum):
    DETERMINATE = "Determinate"
    INDETERMINATE = "Indeterminate"
    NO_STABLE_SOLUTION = "NoStableSolution"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class CanonicalForm:
    """Matrices of a model in Sims canonical form.

    ``gamma0`` and ``gamma1`` are square ``n x n``; ``psi`` loads the ``k``
    exogenous shocks and ``pi`` the ``m`` expectation errors.  ``constant``
    is kept for completeness but is all zeros in the demeaned models built
    by this package.
    """

    gamma0: Array
    gamma1: Array
    psi: Array
    pi: Array
    constant: Array | None = None
    state_labels: tuple[str, ...] = ()
    shock_labels: tuple[str, ...] = ()

    def __post_init__(self):
        g0 = np.asarray(self.gamma0, dtype=float)
        g1 = np.asarray(self.gamma1, dtype=float)
        if g0.ndim != 2 or g0.shape[0] != g0.shape[1]:
            raise InvalidParamsError("gamma0 must be square")
        if g1.shape != g0.shape:
            raise InvalidParamsError("gamma1 must match gamma0 in shape")
        n = g0.shape[0]
        psi = np.asarray(self.psi, dtype=float).reshape(n, -1)
        pi = np.asarray(self.pi, dtype=float).reshape(n, -1)
        c = self.constant
        c = np.zeros(n) if c is None else np.asarray(c, dtype=float).reshape(n)
        labels = tuple(self.state_labels) or tuple(f"s{i}" for i in range(n))
        shocks = tuple(self.shock_labels) or tuple(f"z{i}" for i in range(psi.shape[1]))
        if len(labels) != n:
            raise InvalidParamsError("state_labels length must equal n")
        if len(shocks) != psi.shape[1]:
            raise InvalidParamsError("shock_labels length must equal k")
        object.__setattr__(self, "gamma0", _readonly(g0))
        object.__setattr__(self, "gamma1", _readonly(g1))
        object.__setattr__(self, "psi", _readonly(psi))
        object.__setattr__(self, "pi", _readonly(pi))
        object.__setattr__(self, "constant", _readonly(c))
        object.__setattr__(self, "state_labels", labels)
        object.__setattr__(self, "shock_labels", shocks)

    @property
    def n(self) -> int:
        return self.gamma0.shape[0]

    @property
    def k(self) -> int:
        return self.psi.shape[1]

    @property
    def m(self) -> int:
        return self.pi.shape[1]

    def permuted(self, order) -> "CanonicalForm":
        """Reorder the state vector; rows (equations) are left in place."""
        idx = np.asarray(order)
        return CanonicalForm(
            gamma0=self.gamma0[:, idx],
            gamma1=self.gamma1[:, idx],
            psi=self.psi,
            pi=self.pi,
            constant=self.constant,
            state_labels=tuple(self.state_labels[i] for i in idx),
            shock_labels=self.shock_labels,
        )


@dataclass(frozen=True)
class Determinacy:
    """Counting diagnostics behind a determinacy verdict."""

    n_unstable: int
    n_expectation_errors: int
    verdict: Verdict
    q: int = 0
    pi_rank: int = 0
    existence_residual: float = 0.0
    roots: Array = field(default_factory=lambda: np.zeros(0))

    def __str__(self) -> str:
        tag = str(self.verdict)
        if self.verdict is Verdict.INDETERMINATE:
            tag += f"({self.q})"
        return (
            f"{tag}: {self.n_unstable} unstable roots vs "
            f"{self.n_expectation_errors} expectation errors"
        )


@dataclass(frozen=True)
class SolutionSet:
    """Stable solution of a canonical form.

    ``theta1`` is the transition matrix, ``theta_eps`` the structural-shock
    loading and ``theta_sun`` the ``n x q`` sunspot loading (empty when
    determinate).
    """

    theta1: Array
    theta_eps: Array
    theta_sun: Array
    determinacy: Determinacy
    state_labels: tuple[str, ...] = ()
    shock_labels: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "theta1", _readonly(self.theta1))
        object.__setattr__(self, "theta_eps", _readonly(self.theta_eps))
        object.__setattr__(self, "theta_sun", _readonly(self.theta_sun))

    @property
    def n(self) -> int:
        return self.theta1.shape[0]

    @property
    def k(self) -> int:
        return self.theta_eps.shape[1]

    @property
    def q(self) -> int:
        return self.theta_sun.shape[1]

    @property
    def is_indeterminate(self) -> bool:
        return self.determinacy.verdict is Verdict.INDETERMINATE

    @property
    def classification(self) -> str:
        if self.is_indeterminate:
            return f"Indeterminate({self.q})"
        return str(self.determinacy.verdict)

    @property
    def loadings(self) -> Array:
        """Stacked [theta_eps, theta_sun], the loading on all shocks."""
        return np.hstack([self.theta_eps, self.theta_sun])

    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.theta1)), initial=0.0))


def _fix_sign(col: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    nz = np.flatnonzero(np.abs(col) > tol * max(1.0, np.abs(col).max(initial=0.0)))
    if nz.size and col[nz[0]] < 0:
        return -col
    return col


def solve_linear_re(
    cf: CanonicalForm,
    div: float = DEFAULT_DIV,
    tol: float = EXISTENCE_TOL,
) -> SolutionSet:
    """Solve a canonical form and classify its determinacy.

    Parameters
    ----------
    cf : CanonicalForm
        Well-formed system matrices.
    div : float
        Root-splitting cutoff modulus; generalized eigenvalues with
        modulus above ``div`` count as explosive.
    tol : float
        Acceptance residual for the existence (span) condition.

    Returns
    -------
    SolutionSet
        Transition and loading matrices plus determinacy diagnostics.

    Raises
    ------
    SingularPencilError
        If the pencil (gamma0, gamma1) has a coincident-zero eigenvalue.
    NoStableSolutionError
        If no stable solution exists (too many unstable roots, or the
        shock loading escapes the expectation-error span).
    """
    g0, g1 = cf.gamma0, cf.gamma1
    n, k, m = cf.n, cf.k, cf.m

    def stable_first(alpha, beta):
        return np.abs(beta) <= div * np.abs(alpha)

    with warnings.catch_warnings():
        # ordqz warns when reordering nearly-coincident eigenvalues; the
        # singular-pencil check below handles the genuinely bad cases.
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        aa, bb, alpha, beta, qmat, zmat = scipy.linalg.ordqz(
            g0, g1, sort=stable_first, output="real"
        )

    scale = max(1.0, np.abs(np.diag(aa)).max(), np.abs(np.diag(bb)).max())
    coincident = (np.abs(alpha) < 1e-13 * scale) & (np.abs(beta) < 1e-13 * scale)
    if np.any(coincident):
        raise SingularPencilError(
            "matrix pencil (gamma0, gamma1) is singular: coincident zero "
            f"generalized eigenvalues at positions {np.flatnonzero(coincident).tolist()}"
        )

    with np.errstate(divide="ignore", invalid="ignore"):
        roots = np.abs(beta) / np.abs(alpha)
    roots = np.where(np.abs(alpha) == 0.0, np.inf, roots)

    near_unit = (roots > 1.0 - BOUNDARY_BAND) & (roots < 1.0 + BOUNDARY_BAND)
    if np.any(near_unit):
        warnings.warn(
            "generalized eigenvalue(s) within 1e-6 of the unit circle: "
            f"{roots[near_unit].tolist()}; classification may be fragile",
            BoundaryRootWarning,
            stacklevel=2,
        )

    stable = np.abs(beta) <= div * np.abs(alpha)
    n_unstable = int(np.sum(~stable))
    ns = n - n_unstable
    if ns and not stable[:ns].all():
        # A root sat exactly on the cutoff and flipped sides during the QZ
        # reordering; the split is ambiguous at this div.
        raise SingularPencilError(
            "stable/unstable split is ambiguous at the cutoff; a root lies "
            "numerically on the boundary (try a different div)"
        )

    qt = qmat.T
    q1, q2 = qt[:ns], qt[ns:]
    z1 = zmat[:, :ns]
    a11 = aa[:ns, :ns]
    b11 = bb[:ns, :ns]

    psi_u = q2 @ cf.psi
    pi_u = q2 @ cf.pi
    pi_s = q1 @ cf.pi

    if n_unstable == 0:
        rank = 0
        resid = 0.0
        eta_map = np.zeros((m, k))
        null_basis = np.eye(m)
    else:
        u, s, vh = np.linalg.svd(pi_u)
        rank = int(np.sum(s > RANK_RTOL * s[0])) if s.size and s[0] > 0 else 0
        ur = u[:, :rank]
        resid_mat = psi_u - ur @ (ur.T @ psi_u)
        resid = float(np.linalg.norm(resid_mat) / max(1.0, np.linalg.norm(psi_u)))
        if resid > tol:
            det = Determinacy(
                n_unstable=n_unstable,
                n_expectation_errors=m,
                verdict=Verdict.NO_STABLE_SOLUTION,
                pi_rank=rank,
                existence_residual=resid,
                roots=np.sort(roots),
            )
            raise NoStableSolutionError(
                f"no stable solution: {n_unstable} unstable roots cannot be "
                f"offset by {m} expectation errors (span residual {resid:.2e})",
                determinacy=det,
            )
        # Minimum-norm expectation-error response: eta_t = -pinv(pi_u) psi_u z_t.
        with np.errstate(divide="ignore"):
            sinv = np.where(s > RANK_RTOL * s[0], 1.0 / np.where(s == 0, 1.0, s), 0.0)
        nsv = s.size
        eta_map = -(vh.T[:, :nsv] * sinv) @ (u[:, :nsv].T @ psi_u)
        null_basis = vh[rank:].T  # (m, m - rank)

    try:
        w_eps = np.linalg.solve(a11, q1 @ cf.psi + pi_s @ eta_map)
        w1_trans = np.linalg.solve(a11, b11)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - guarded by pencil check
        raise SingularPencilError(f"stable block of the pencil is singular: {exc}") from exc

    theta1 = z1 @ w1_trans @ z1.T
    theta_eps = z1 @ w_eps

    q_free = null_basis.shape[1]
    q_eff = 0
    theta_sun = np.zeros((n, 0))
    if q_free > 0:
        sun_raw = z1 @ np.linalg.solve(a11, pi_s @ null_basis)
        us, ss, _ = np.linalg.svd(sun_raw, full_matrices=False)
        q_eff = int(np.sum(ss > RANK_RTOL * ss[0])) if ss.size and ss[0] > 0 else 0
        if q_eff:
            theta_sun = np.column_stack(
                [_fix_sign(us[:, j]) for j in range(q_eff)]
            )

    verdict = Verdict.DETERMINATE if q_eff == 0 else Verdict.INDETERMINATE
    det = Determinacy(
        n_unstable=n_unstable,
        n_expectation_errors=m,
        verdict=verdict,
        q=q_eff,
        pi_rank=rank,
        existence_residual=resid,
        roots=np.sort(roots),
    )

    sol = SolutionSet(
        theta1=theta1,
        theta_eps=theta_eps,
        theta_sun=theta_sun,
        determinacy=det,
        state_labels=cf.state_labels,
        shock_labels=cf.shock_labels,
    )
    sr = sol.spectral_radius()
    if sr >= 1.0 + 10 * max(div - 1.0, 1e-8):
        raise NoStableSolutionError(
            f"returned transition is unstable (spectral radius {sr:.6f}); "
            "the pencil is badly conditioned near the unit circle",
            determinacy=det,
        )
    return sol


def residual_span_distance(
    cf: CanonicalForm, sol: SolutionSet, draws: int = 100, seed: int = 0
) -> float:
    """Max distance of one-step residuals from the span of pi.

    For shock draws propagated through the solution, the residual
    ``e_t = gamma0 S_t - gamma1 S_{t-1} - psi z_t`` must equal
    ``pi eta_t`` for some eta_t.  The lag matrix only has to cancel on
    states the model can actually reach, so residuals are evaluated along
    a simulated path rather than on arbitrary state vectors.  Returns the
    largest least-squares residual norm across ``draws`` transitions.
    """
    rng = np.random.default_rng(seed)
    ktot = sol.k + sol.q
    load = sol.loadings
    state = np.zeros(sol.n)
    worst = 0.0
    pinv_pi = np.linalg.pinv(cf.pi) if cf.m else None
    for _ in range(draws):
        shock = rng.standard_normal(ktot)
        new = sol.theta1 @ state + load @ shock
        resid = cf.gamma0 @ new - cf.gamma1 @ state - cf.psi @ shock[: sol.k]
        if pinv_pi is not None:
            resid = resid - cf.pi @ (pinv_pi @ resid)
        worst = max(worst, float(np.abs(resid).max(initial=0.0)))
        state = new
    return worst


def impulse_response(
    sol: SolutionSet,
    shock_index: int,
    horizon: int,
    shock_cov: Array | None = None,
    sunspot_projection: Array | None = None,
) -> Array:
    """Impulse responses of all states to one structural shock.

    Row ``h`` holds the response at horizon ``h`` (impact at ``h = 0``).
    When ``shock_cov`` is supplied the impulse is one standard deviation of
    the chosen shock; otherwise a unit impulse.  Under indeterminacy the
    structural impulse propagates into the sunspot through the projection
    ``sun_t = M eps_t``, so ``sunspot_projection`` (q x k) is required.
    """
    if horizon < 1:
        raise InvalidParamsError("horizon must be >= 1")
    if not 0 <= shock_index < sol.k:
        raise IndexError(
            f"shock_index {shock_index} out of range for {sol.k} shocks"
        )
    scale = 1.0
    if shock_cov is not None:
        shock_cov = np.asarray(shock_cov, dtype=float)
        scale = float(np.sqrt(shock_cov[shock_index, shock_index]))
    impact = sol.theta_eps[:, shock_index] * scale
    if sol.q:
        if sunspot_projection is None:
            raise MissingProjectionError(
                "indeterminate solution: supply the sunspot projection M "
                "mapping structural shocks into the sunspot"
            )
        m = np.asarray(sunspot_projection, dtype=float).reshape(sol.q, sol.k)
        impact = impact + sol.theta_sun @ (m[:, shock_index] * scale)
    out = np.empty((horizon, sol.n))
    vec = impact
    for h in range(horizon):
        out[h] = vec
        vec = sol.theta1 @ vec
    return out


def _psd_factor(cov: np.ndarray) -> np.ndarray:
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise NonPSDCovarianceError("covariance must be square")
    if not np.allclose(cov, cov.T, atol=1e-10):
        raise NonPSDCovarianceError("covariance must be symmetric")
    w, v = np.linalg.eigh(cov)
    if w.min(initial=0.0) < -1e-10 * max(1.0, w.max(initial=0.0)):
        raise NonPSDCovarianceError(f"covariance has negative eigenvalue {w.min():.3e}")
    return v * np.sqrt(np.clip(w, 0.0, None))


def simulate(
    sol: SolutionSet,
    shock_cov: Array,
    T: int,
    seed: int,
) -> Array:
    """Simulate a T x n state path from ``S_0 = 0``.

    ``shock_cov`` covers the stacked shock vector (structural shocks first,
    then sunspots when indeterminate), so its dimension must equal
    ``k + q``.  Bit-reproducible for a given seed.
    """
    if T < 1:
        raise InvalidParamsError("T must be >= 1")
    ktot = sol.k + sol.q
    cov = np.asarray(shock_cov, dtype=float)
    if cov.shape != (ktot, ktot):
        raise NonPSDCovarianceError(
            f"shock covariance must be {ktot} x {ktot} for this solution"
        )
    factor = _psd_factor(cov)
    rng = np.random.default_rng(seed)
    shocks = rng.standard_normal((T, ktot)) @ factor.T
    load = sol.loadings
    path = np.empty((T, sol.n))
    state = np.zeros(sol.n)
    for t in range(T):
        state = sol.theta1 @ state + load @ shocks[t]
        path[t] = state
    return path
