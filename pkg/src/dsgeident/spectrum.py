"""Transfer functions, shock covariances, and spectral-density grids.

The spectral density of the observables implied by a solved model is

    f(omega) = (1/2pi) H(e^{-i omega}) Sigma H(e^{-i omega})^H,

where ``H(L) = A(L) (I - theta1 L)^{-1} [theta_eps, theta_sun]`` is the
transfer function through the observable map ``A(L)`` and ``Sigma`` is the
covariance of the stacked structural and sunspot shocks.  Grids are
uniform midpoint partitions of [-pi, pi]; computation exploits conjugate
symmetry by evaluating nonnegative frequencies and mirroring.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import (
    BandRestrictedError,
    GridMismatchError,
    InvalidParamsError,
    NearSingularResolventError,
    NonPSDCovarianceError,
    SingularSpectrumError,
)
from .lre import SolutionSet

Array = NDArray[np.float64]
CArray = NDArray[np.complex128]

DEFAULT_GRID_SIZE = 5000

#: Business-cycle band: cycles of 6 to 32 quarters.
BUSINESS_CYCLE_BAND = ((2.0 * np.pi / 32.0, 2.0 * np.pi / 6.0),)

#: Resolvent norm threshold beyond which the spectrum is not trusted.
RESOLVENT_LIMIT = 1e12


def _normalize_band(band):
    out = []
    for lo, hi in band:
        lo, hi = float(lo), float(hi)
        if not (0.0 <= lo < hi <= np.pi + 1e-12):
            raise InvalidParamsError(f"band endpoints must satisfy 0 <= lo < hi <= pi, got ({lo}, {hi})")
        out.append((lo, hi))
    return tuple(sorted(out))


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform midpoint frequency grid, possibly band-restricted.

    ``omegas`` are the retained points of a symmetric ``n_full``-point
    midpoint partition of [-pi, pi]; every point carries quadrature weight
    ``2 pi / n_full``, so a band and its complement add back exactly to the
    full-band integral.
    """

    omegas: Array
    n_full: int
    band: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        om = np.asarray(self.omegas, dtype=float)
        if om.ndim != 1 or np.any(np.diff(om) <= 0):
            raise InvalidParamsError("omegas must be strictly increasing")
        om.setflags(write=False)
        object.__setattr__(self, "omegas", om)

    @classmethod
    def uniform(cls, n_points: int = DEFAULT_GRID_SIZE) -> "FrequencyGrid":
        if n_points < 2 or n_points % 2:
            raise InvalidParamsError("n_points must be even and >= 2")
        step = 2.0 * np.pi / n_points
        omegas = -np.pi + (np.arange(n_points) + 0.5) * step
        return cls(omegas=omegas, n_full=n_points)

    @property
    def n_points(self) -> int:
        return self.omegas.size

    @property
    def weight(self) -> float:
        return 2.0 * np.pi / self.n_full

    @property
    def is_full(self) -> bool:
        return self.band is None and self.omegas.size == self.n_full

    def restrict(self, band, complement: bool = False) -> "FrequencyGrid":
        """Keep points with |omega| inside (or outside) the given band."""
        band = _normalize_band(band)
        absom = np.abs(self.omegas)
        mask = np.zeros(absom.size, dtype=bool)
        for lo, hi in band:
            mask |= (absom >= lo) & (absom <= hi)
        if complement:
            mask = ~mask
        tag = tuple((lo, hi) for lo, hi in band)
        if complement:
            tag = tag + (("complement",),)  # type: ignore[assignment]
        return FrequencyGrid(omegas=self.omegas[mask], n_full=self.n_full, band=tag)

    def same_as(self, other: "FrequencyGrid") -> bool:
        return (
            self.n_full == other.n_full
            and self.omegas.size == other.omegas.size
            and bool(np.all(self.omegas == other.omegas))
        )


@dataclass(frozen=True)
class ObservableMap:
    """Observable selection A(L) = contemporaneous + lagged * L.

    First-difference observables put +1 in ``contemporaneous`` and -1 in
    ``lagged`` on the same state column, which evaluates to the
    (1 - e^{-i omega}) factor in the frequency domain.
    """

    contemporaneous: Array
    lagged: Array | None = None
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        a0 = np.asarray(self.contemporaneous, dtype=float)
        a0.setflags(write=False)
        object.__setattr__(self, "contemporaneous", a0)
        if self.lagged is not None:
            a1 = np.asarray(self.lagged, dtype=float)
            if a1.shape != a0.shape:
                raise InvalidParamsError("lagged selection must match contemporaneous shape")
            a1.setflags(write=False)
            object.__setattr__(self, "lagged", a1)
        labels = tuple(self.labels) or tuple(f"obs{i}" for i in range(a0.shape[0]))
        object.__setattr__(self, "labels", labels)

    @property
    def n_obs(self) -> int:
        return self.contemporaneous.shape[0]


@dataclass(frozen=True)
class ShockCovariance:
    """Covariance of the stacked (structural, sunspot) shock vector.

    Composed from the structural covariance, the sunspot projection ``m``
    (regression of the sunspot on the structural shocks), and the residual
    sunspot covariance:

        sigma = [[S_eps,        S_eps m'],
                 [m S_eps, m S_eps m' + S_sun]].

    In the determinate case this reduces to ``S_eps`` exactly.
    """

    sigma: Array
    sigma_eps: Array
    sigma_sun: Array
    m: Array

    @property
    def k(self) -> int:
        return self.sigma_eps.shape[0]

    @property
    def q(self) -> int:
        return self.sigma_sun.shape[0]


def compose_shock_covariance(
    sigma_eps: Array,
    m: Array | None = None,
    sigma_sun: Array | None = None,
) -> ShockCovariance:
    """Block-compose the stacked shock covariance; validates PSD."""
    se = np.atleast_2d(np.asarray(sigma_eps, dtype=float))
    if not np.allclose(se, se.T, atol=1e-12):
        raise NonPSDCovarianceError("structural covariance must be symmetric")
    if np.linalg.eigvalsh(se).min() < -1e-10:
        raise NonPSDCovarianceError("structural covariance must be PSD")
    if m is None:
        sig = se
        m_arr = np.zeros((0, se.shape[0]))
        ss = np.zeros((0, 0))
    else:
        m_arr = np.atleast_2d(np.asarray(m, dtype=float))
        ss = np.atleast_2d(np.asarray(sigma_sun, dtype=float))
        if ss.shape[0] != m_arr.shape[0]:
            raise NonPSDCovarianceError("sunspot covariance and projection disagree on q")
        if np.linalg.eigvalsh(ss).min() < -1e-10:
            raise NonPSDCovarianceError("sunspot residual covariance must be PSD")
        cross = m_arr @ se
        sig = np.block([[se, cross.T], [cross, cross @ m_arr.T + ss]])
    return ShockCovariance(sigma=sig, sigma_eps=se, sigma_sun=ss, m=m_arr)


def shock_covariance(p, regime: str) -> ShockCovariance:
    """Shock covariance implied by model parameters in a given regime."""
    from .models.params import MediumScaleParams, SmallScaleParams

    if isinstance(p, SmallScaleParams):
        se = np.diag([p.sigma_a**2, p.sigma_g**2, p.sigma_m**2])
        if regime.lower() in ("indeterminacy", "indet"):
            if not p.has_sunspot_block:
                raise InvalidParamsError(
                    "indeterminacy regime requires the sunspot projection block"
                )
            return compose_shock_covariance(
                se, m=p.projection, sigma_sun=[[p.sigma_sun**2]]
            )
        return compose_shock_covariance(se)
    if isinstance(p, MediumScaleParams):
        from .models.medium import medium_shock_covariance

        return medium_shock_covariance(p)
    raise InvalidParamsError(f"no shock covariance rule for {type(p).__name__}")


@dataclass(frozen=True)
class SpectralDensityGrid:
    """Hermitian spectral-density matrices on a frequency grid."""

    grid: FrequencyGrid
    values: CArray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 3 or v.shape[0] != self.grid.n_points or v.shape[1] != v.shape[2]:
            raise InvalidParamsError("values must be (n_points, n_obs, n_obs)")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_obs(self) -> int:
        return self.values.shape[1]

    def hermitian_defect(self) -> float:
        return float(np.abs(self.values - self.values.conj().transpose(0, 2, 1)).max())

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.values).min())

    def conjugate_symmetry_defect(self) -> float:
        """Max |f(-w) - conj(f(w))| over mirrored grid pairs."""
        om = self.grid.omegas
        order = np.argsort(-om)  # positions of mirrored partner if symmetric
        mirrored = -om[order]
        if mirrored.size != om.size or not np.allclose(mirrored, om, atol=1e-12):
            return float("nan")
        return float(np.abs(self.values[order].conj() - self.values).max())


def _resolvent_factors(theta1: Array):
    """Eigendecomposition route for (I - theta1 e^{-iw})^{-1}, with guard."""
    d, pmat = np.linalg.eig(theta1)
    sr = np.abs(d).max(initial=0.0)
    if 1.0 - sr < 1.0 / RESOLVENT_LIMIT:
        raise NearSingularResolventError(
            f"spectral radius {sr:.12f} leaves the resolvent unbounded on the unit circle"
        )
    cond = np.linalg.cond(pmat)
    return d, pmat, cond


def transfer_function_batch(
    sol: SolutionSet,
    selection: ObservableMap | Array,
    omegas: Array,
) -> CArray:
    """Transfer function H at many frequencies, shape (N, n_obs, k + q)."""
    if not isinstance(selection, ObservableMap):
        selection = ObservableMap(contemporaneous=selection)
    lam = np.exp(-1j * np.asarray(omegas, dtype=float))
    load = sol.loadings
    n = sol.n
    a0 = selection.contemporaneous
    a1 = selection.lagged

    d, pmat, cond = _resolvent_factors(sol.theta1)
    if cond < 1e8:
        g2 = np.linalg.solve(pmat, load.astype(complex))
        inv_den = 1.0 / (1.0 - lam[:, None] * d[None, :])  # (N, n)
        a0p = a0 @ pmat
        if a1 is None:
            h = (a0p[None, :, :] * inv_den[:, None, :]) @ g2
        else:
            a1p = a1 @ pmat
            amap = a0p[None, :, :] + lam[:, None, None] * a1p[None, :, :]
            h = (amap * inv_den[:, None, :]) @ g2
    else:
        eye = np.eye(n)
        mats = eye[None, :, :] - lam[:, None, None] * sol.theta1[None, :, :]
        resolv = np.linalg.solve(mats, np.broadcast_to(load.astype(complex), (lam.size, *load.shape)))
        amap = a0[None, :, :].astype(complex)
        if a1 is not None:
            amap = amap + lam[:, None, None] * a1[None, :, :]
        h = amap @ resolv
    return h


def transfer_function(
    sol: SolutionSet,
    selection: ObservableMap | Array,
    omega: float,
) -> CArray:
    """Transfer function H(e^{-i omega}) at a single frequency."""
    return transfer_function_batch(sol, selection, np.array([float(omega)]))[0]


def spectral_density(
    sol: SolutionSet,
    shock_cov: ShockCovariance | Array,
    grid: FrequencyGrid,
    selection: ObservableMap | Array,
    labels: tuple[str, ...] = (),
) -> SpectralDensityGrid:
    """Spectral density grid of the selected observables.

    Evaluates the transfer function on nonnegative frequencies only and
    fills negative frequencies with the complex conjugate, which makes the
    conjugate-symmetry invariant exact by construction.
    """
    sigma = shock_cov.sigma if isinstance(shock_cov, ShockCovariance) else np.asarray(shock_cov, float)
    ktot = sol.k + sol.q
    if sigma.shape != (ktot, ktot):
        raise NonPSDCovarianceError(
            f"shock covariance is {sigma.shape}, expected ({ktot}, {ktot}); "
            "mismatch between solution regime and covariance block"
        )
    om = grid.omegas
    symmetric = om.size % 2 == 0 and np.array_equal(om, -om[::-1])
    if symmetric:
        # mirror-symmetric grid: evaluate positive half, conjugate the rest
        half = om.size // 2
        h_pos = transfer_function_batch(sol, selection, om[half:])
        f_pos = h_pos @ sigma @ h_pos.conj().transpose(0, 2, 1) / (2.0 * np.pi)
        f_pos = 0.5 * (f_pos + f_pos.conj().transpose(0, 2, 1))
        values = np.concatenate([f_pos[::-1].conj(), f_pos], axis=0)
    else:
        h = transfer_function_batch(sol, selection, om)
        values = h @ sigma @ h.conj().transpose(0, 2, 1) / (2.0 * np.pi)
        values = 0.5 * (values + values.conj().transpose(0, 2, 1))
    if not labels and isinstance(selection, ObservableMap):
        labels = selection.labels
    return SpectralDensityGrid(grid=grid, values=values, labels=labels)


def autocovariance_from_spectrum(sdg: SpectralDensityGrid, lag: int) -> Array:
    """Autocovariance at a lag by Riemann-sum inverse Fourier transform."""
    if not sdg.grid.is_full:
        raise BandRestrictedError("autocovariance requires a full-band grid")
    phases = np.exp(1j * sdg.grid.omegas * lag)
    gamma = sdg.grid.weight * np.tensordot(phases, sdg.values, axes=(0, 0))
    imag = float(np.abs(gamma.imag).max())
    if imag > 1e-8:
        raise SingularSpectrumError(
            f"autocovariance has imaginary residue {imag:.2e}; spectrum is not conjugate-symmetric"
        )
    return gamma.real


def solve_spectra(f1: CArray, f0: CArray) -> CArray:
    """Batched f1^{-1} f0 with a conditioning guard."""
    try:
        ratio = np.linalg.solve(f1, f0)
    except np.linalg.LinAlgError as exc:
        raise SingularSpectrumError(f"spectral density singular at a grid point: {exc}") from exc
    return ratio
