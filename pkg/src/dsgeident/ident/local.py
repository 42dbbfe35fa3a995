"""Local identification via the spectral information matrix.

A parameter point is locally identified from second-order properties if
the matrix of integrated outer products of spectrum derivatives,

    G_jk = integral tr( df/dgamma_j (omega) . df/dgamma_k (omega) ) domega,

has full rank.  Derivatives are two-point forward finite differences of
the spectral density and the integral is a Riemann sum on the model's
frequency grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from ..errors import ToolkitError
from ..models.api import SpectralModel
from ..spectrum import DEFAULT_GRID_SIZE, FrequencyGrid

Array = NDArray[np.float64]

#: Forward-difference step rule: h_j = STEP_SCALE * max(|gamma_j|, 1).
STEP_SCALE = 1e-7

#: Default relative eigenvalue tolerance for rank decisions.
RANK_TOL = 1e-8


class SolveFailure(ToolkitError):
    """A perturbed parameter point failed to solve; names the parameter."""


@dataclass(frozen=True)
class GMatrix:
    """Local-identification matrix with its eigenstructure."""

    g: Array
    param_names: tuple[str, ...]
    eigenvalues: Array  # descending
    tol: float
    settings: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        lam = self.eigenvalues
        if lam.size == 0 or lam[0] <= 0:
            return 0
        return int(np.sum(lam > self.tol * lam[0]))

    @property
    def full_rank(self) -> bool:
        return self.rank == len(self.param_names)

    def eigenvectors(self) -> Array:
        _, vecs = np.linalg.eigh(self.g)
        return vecs[:, ::-1]  # descending order to match eigenvalues


def spectrum_derivatives(
    model: SpectralModel,
    gamma0: Array,
    grid: FrequencyGrid,
    step_scale: float = STEP_SCALE,
):
    """Forward-difference derivatives of the spectral density.

    Returns (f0, list of df/dgamma_j arrays).  Raises SolveFailure naming
    the offending parameter when a perturbed point cannot be solved,
    with advice to shrink the step.
    """
    gamma0 = np.asarray(gamma0, dtype=float)
    f0 = model.spectrum(gamma0, grid).values
    derivs = []
    for j, name in enumerate(model.free_names):
        h = step_scale * max(abs(gamma0[j]), 1.0)
        gpert = gamma0.copy()
        gpert[j] += h
        try:
            fj = model.spectrum(gpert, grid).values
        except ToolkitError as exc:
            raise SolveFailure(
                f"spectrum failed at {name} + {h:.2e}: {exc}; "
                "consider shrinking the step for this parameter"
            ) from exc
        derivs.append((fj - f0) / h)
    return f0, derivs


def g_matrix(
    model: SpectralModel,
    gamma0: Array | None = None,
    grid: FrequencyGrid | None = None,
    step_scale: float = STEP_SCALE,
    tol: float = RANK_TOL,
) -> GMatrix:
    """Assemble the local-identification matrix at a parameter point.

    The matrix is symmetrized by averaging with its transpose; its
    eigenvalues are reported in descending order and the rank is taken at
    the relative tolerance ``tol`` (sweep alternatives with
    :func:`eigen_analysis`).
    """
    grid = grid or FrequencyGrid.uniform(DEFAULT_GRID_SIZE)
    gamma0 = model.vector() if gamma0 is None else np.asarray(gamma0, dtype=float)
    _, derivs = spectrum_derivatives(model, gamma0, grid, step_scale)
    p = len(derivs)
    g = np.zeros((p, p))
    w = grid.weight
    for j in range(p):
        dj = derivs[j]
        for k in range(j, p):
            val = w * float(np.real(np.einsum("sij,sji->", dj, derivs[k])))
            g[j, k] = g[k, j] = val
    g = 0.5 * (g + g.T)
    lam = np.linalg.eigvalsh(g)[::-1]
    return GMatrix(
        g=g,
        param_names=model.free_names,
        eigenvalues=lam,
        tol=tol,
        settings={
            "grid_points": grid.n_full,
            "band": grid.band,
            "step_rule": f"h_j = {step_scale:g} * max(|gamma_j|, 1)",
        },
    )


@dataclass(frozen=True)
class EigenAnalysisRow:
    tol: float
    rank: int
    null_space: Array  # (p, p - rank) unit columns


def eigen_analysis(gm: GMatrix, tol_list) -> list[EigenAnalysisRow]:
    """Rank and null-space directions at each tolerance in ``tol_list``.

    The null-space columns are unit eigenvectors of the eigenvalues that
    fall below each tolerance; they point at the weakly identified
    parameter combinations.
    """
    lam = gm.eigenvalues
    vecs = gm.eigenvectors()
    top = lam[0] if lam.size else 0.0
    rows = []
    for tol in tol_list:
        if top <= 0:
            rank = 0
        else:
            rank = int(np.sum(lam > tol * top))
        null = vecs[:, rank:]
        rows.append(EigenAnalysisRow(tol=float(tol), rank=rank, null_space=null))
    return rows
