"""Parameter-vector facade over the bundled models.

Identification and distance routines work on flat parameter vectors.  A
:class:`SpectralModel` pairs a base parameter set with an ordered list of
free parameter names, a regime, an observable map and default search
bounds, and knows how to solve itself and produce spectral densities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ..errors import InvalidParamsError, ToolkitError
from ..lre import CanonicalForm, SolutionSet, solve_linear_re
from ..spectrum import (
    FrequencyGrid,
    ObservableMap,
    ShockCovariance,
    SpectralDensityGrid,
    shock_covariance,
    spectral_density,
)
from . import medium as medium_mod
from . import small as small_mod
from .params import MediumCalibration, MediumScaleParams, SmallScaleParams


class RegimeMismatchError(ToolkitError):
    """Candidate solves in a different determinacy regime than required."""


SMALL_BOUNDS = {
    "theta": (0.01, 3.0),
    "phi_y": (0.01, 0.99),
    "phi_pi": (0.1, 5.0),
    "beta": (0.1, 0.999),
    "kappa": (0.01, 3.0),
    "rho_a": (0.01, 0.99),
    "rho_g": (0.01, 0.99),
    "sigma_a": (0.1, 3.0),
    "sigma_g": (0.1, 3.0),
    "sigma_m": (0.1, 3.0),
    "m_a_eps": (-5.0, 5.0),
    "m_g_eps": (-5.0, 5.0),
    "m_m_eps": (-5.0, 5.0),
    "sigma_sun": (0.01, 3.0),
}

SMALL_FREE_RE = (
    "phi_y", "phi_pi", "beta", "kappa", "rho_a", "rho_g",
    "sigma_a", "sigma_g", "sigma_m",
)
SMALL_FREE_DE = ("theta",) + SMALL_FREE_RE
SMALL_FREE_INDET = SMALL_FREE_DE + ("m_a_eps", "m_g_eps", "m_m_eps", "sigma_sun")

MEDIUM_FREE = (
    "theta", "alpha", "h", "chi_ratio", "kappa_p", "kappa_w", "nu", "s_dd",
    "rho_r", "phi_pi", "phi_x", "rho", "rho_mu", "rho_p", "phi_p", "rho_w",
    "phi_w", "rho_mp", "rho_g", "sigma_a", "sigma_s", "sigma_mu", "sigma_p",
    "sigma_w", "sigma_mp", "sigma_g",
)

MEDIUM_BOUNDS = {
    "theta": (0.1, 3.0),
    "alpha": (0.05, 0.4),
    "h": (0.1, 0.95),
    "chi_ratio": (0.5, 20.0),
    "kappa_p": (0.005, 1.0),
    "kappa_w": (0.005, 1.0),
    "nu": (0.5, 10.0),
    "s_dd": (0.5, 20.0),
    "rho_r": (0.01, 0.99),
    "phi_pi": (1.01, 5.0),
    "phi_x": (0.0001, 0.5),
    "rho": (0.01, 0.99),
    "rho_mu": (0.01, 0.99),
    "rho_p": (0.01, 0.99),
    "phi_p": (0.01, 0.99),
    "rho_w": (0.01, 0.9995),
    "phi_w": (0.01, 0.99),
    "rho_mp": (0.01, 0.99),
    "rho_g": (0.01, 0.99),
    "sigma_a": (0.1, 10.0),
    "sigma_s": (0.01, 5.0),
    "sigma_mu": (0.5, 60.0),
    "sigma_p": (0.01, 5.0),
    "sigma_w": (0.01, 5.0),
    "sigma_mp": (0.01, 5.0),
    "sigma_g": (0.01, 5.0),
}


@dataclass
class SpectralModel:
    """A model family exposed through a flat free-parameter vector."""

    name: str
    regime: str
    base: Any
    free_names: tuple[str, ...]
    selection: ObservableMap
    bounds: dict[str, tuple[float, float]]
    build_fn: Callable[[Any, str], CanonicalForm]
    setters: dict[str, Callable[[dict, float], None]] = field(default_factory=dict)
    getters: dict[str, Callable[[Any], float]] = field(default_factory=dict)
    expected_classification: str = "Determinate"

    @property
    def n_free(self) -> int:
        return len(self.free_names)

    @property
    def build_regime(self) -> str:
        return "RE" if self.regime.upper() == "RE" else "DE"

    @property
    def cov_regime(self) -> str:
        return "indeterminacy" if self.regime == "indeterminacy" else "determinate"

    def params(self, gamma: np.ndarray):
        gamma = np.asarray(gamma, dtype=float)
        if gamma.shape != (self.n_free,):
            raise InvalidParamsError(
                f"gamma must have length {self.n_free}, got {gamma.shape}"
            )
        kw: dict[str, float] = {}
        for name, value in zip(self.free_names, gamma):
            if name in self.setters:
                self.setters[name](kw, float(value))
            else:
                kw[name] = float(value)
        return self.base.replace(**kw)

    def vector(self, p=None) -> np.ndarray:
        """Free-parameter vector of ``p`` (default: the base point)."""
        p = p if p is not None else self.base
        out = []
        for name in self.free_names:
            if name in self.getters:
                out.append(float(self.getters[name](p)))
            else:
                out.append(float(getattr(p, name)))
        return np.array(out)

    def bounds_array(self) -> np.ndarray:
        return np.array([self.bounds[n] for n in self.free_names])

    def canonical_form(self, gamma: np.ndarray) -> CanonicalForm:
        return self.build_fn(self.params(gamma), self.build_regime)

    def solve(self, gamma: np.ndarray) -> SolutionSet:
        return solve_linear_re(self.canonical_form(gamma))

    def shock_cov(self, gamma: np.ndarray) -> ShockCovariance:
        return shock_covariance(self.params(gamma), self.cov_regime)

    def spectrum(
        self, gamma: np.ndarray, grid: FrequencyGrid, enforce_regime: bool = True
    ) -> SpectralDensityGrid:
        sol = self.solve(gamma)
        if enforce_regime and sol.classification != self.expected_classification:
            raise RegimeMismatchError(
                f"{self.name}: candidate solves as {sol.classification}, "
                f"regime requires {self.expected_classification}"
            )
        return spectral_density(
            sol, self.shock_cov(gamma), grid, self.selection
        )

    def spectrum_at(
        self, gamma: np.ndarray, omegas: np.ndarray, enforce_regime: bool = True
    ) -> np.ndarray:
        """Spectral density values at arbitrary frequencies (no grid)."""
        from ..spectrum import transfer_function_batch

        sol = self.solve(gamma)
        if enforce_regime and sol.classification != self.expected_classification:
            raise RegimeMismatchError(
                f"{self.name}: candidate solves as {sol.classification}, "
                f"regime requires {self.expected_classification}"
            )
        h = transfer_function_batch(sol, self.selection, np.asarray(omegas, float))
        sig = self.shock_cov(gamma).sigma
        f = h @ sig @ h.conj().transpose(0, 2, 1) / (2.0 * np.pi)
        return 0.5 * (f + f.conj().transpose(0, 2, 1))

    def simulate_observables(self, gamma: np.ndarray, T: int, seed: int) -> np.ndarray:
        """Simulate a T x n_obs path of the selected observables."""
        from ..lre import simulate

        sol = self.solve(gamma)
        cov = self.shock_cov(gamma).sigma
        path = simulate(sol, cov, T, seed)
        a0 = self.selection.contemporaneous
        out = path @ a0.T
        if self.selection.lagged is not None:
            lagged = np.vstack([np.zeros((1, path.shape[1])), path[:-1]])
            out = out + lagged @ self.selection.lagged.T
        return out


def _level_map(labels, state_labels) -> ObservableMap:
    sel = np.zeros((len(labels), len(state_labels)))
    for i, lab in enumerate(labels):
        sel[i, state_labels.index(lab)] = 1.0
    return ObservableMap(contemporaneous=sel, labels=tuple(labels))


def small_growth_selection() -> ObservableMap:
    """Observables (YGR, INFL, INT) on the 9-state small model.

    Output growth is handled inside the selection map as a (1 - e^{-iw})
    factor; estimation uses the augmented state instead.
    """
    labels = list(small_mod.STATE_LABELS)
    a0 = np.zeros((3, 9))
    a1 = np.zeros((3, 9))
    a0[0, labels.index("y")] = 1.0
    a1[0, labels.index("y")] = -1.0
    a0[1, labels.index("pi")] = 1.0
    a0[2, labels.index("i")] = 1.0
    return ObservableMap(contemporaneous=a0, lagged=a1, labels=("YGR", "INFL", "INT"))


def small_level_selection() -> ObservableMap:
    return _level_map(["y", "pi", "i"], list(small_mod.STATE_LABELS))


def small_model(
    regime: str = "DE",
    base: SmallScaleParams | None = None,
    free_names: tuple[str, ...] | None = None,
    observables: str = "growth",
) -> SpectralModel:
    """Small-scale model facade.

    Default observables are (YGR, INFL, INT): output growth, inflation and
    the interest rate, the same measurement vector the estimation uses and
    the one behind the published identification results.  ``observables=
    "levels"`` selects (y, pi, i) instead.
    """
    from .presets import SMALL_DE, SMALL_INDET, SMALL_RE

    regime_l = regime.lower() if regime.lower() in ("indeterminacy", "indet") else regime.upper()
    if regime_l == "indet":
        regime_l = "indeterminacy"
    if base is None:
        base = {"DE": SMALL_DE, "RE": SMALL_RE, "indeterminacy": SMALL_INDET}[regime_l]
    if free_names is None:
        free_names = {
            "DE": SMALL_FREE_DE,
            "RE": SMALL_FREE_RE,
            "indeterminacy": SMALL_FREE_INDET,
        }[regime_l]
    if observables == "growth":
        selection = small_growth_selection()
    elif observables == "levels":
        selection = small_level_selection()
    else:
        raise InvalidParamsError("observables must be 'growth' or 'levels'")
    expected = "Indeterminate(1)" if regime_l == "indeterminacy" else "Determinate"
    return SpectralModel(
        name=f"small-{regime_l}",
        regime=regime_l,
        base=base,
        free_names=tuple(free_names),
        selection=selection,
        bounds=dict(SMALL_BOUNDS),
        build_fn=small_mod.build_small_scale,
        expected_classification=expected,
    )


def medium_model(
    regime: str = "DE",
    base: MediumScaleParams | None = None,
    cal: MediumCalibration | None = None,
    free_names: tuple[str, ...] = MEDIUM_FREE,
) -> SpectralModel:
    """Medium-scale model with 7 level observables."""
    from .presets import MEDIUM_DE

    cal = cal or MediumCalibration()
    base = base or MEDIUM_DE
    regime_u = regime.upper()

    def build(p: MediumScaleParams, build_regime: str) -> CanonicalForm:
        return medium_mod.build_medium_scale(p, cal, build_regime)

    def set_kappa_p(kw: dict, value: float) -> None:
        kw["psi_p"] = (cal.epsilon_p - 1.0) / value

    def set_kappa_w(kw: dict, value: float) -> None:
        kw["psi_w"] = cal.omega_wage * cal.epsilon_w / value

    model = SpectralModel(
        name=f"medium-{regime_u}",
        regime=regime_u,
        base=base,
        free_names=tuple(free_names),
        selection=_level_map(
            ["y", "c", "inv", "w", "labor", "pi", "i"],
            list(medium_mod.STATE_LABELS),
        ),
        bounds=dict(MEDIUM_BOUNDS),
        build_fn=build,
        setters={"kappa_p": set_kappa_p, "kappa_w": set_kappa_w},
        getters={
            "kappa_p": lambda p: p.kappa_p(cal),
            "kappa_w": lambda p: p.kappa_w(cal),
        },
    )
    return model
