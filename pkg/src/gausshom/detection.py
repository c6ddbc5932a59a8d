"""Vacuum-projection, threshold and photon-number-resolving probabilities.

Threshold probabilities come from inclusion-exclusion over vacuum
projections; number-resolved probabilities are mixed Taylor coefficients of
det(1 + T sigma_tilde T / 2)^(-1/2) about t = 1, computed with jet
arithmetic.  Spectral bins are always fully marginalized inside a spatial
detector; there is no per-bin detection API.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from . import series
from .core import CovarianceState, reduce
from .series import SeriesContext, TruncatedSeries

log = logging.getLogger(__name__)

DET_IMAG_TOL = 1e-10
CLAMP_TOL = 1e-10
MAX_THRESHOLD_MODES = 16
DEFAULT_PNR_CUTOFF = 12


class UnphysicalStateError(ValueError):
    """A determinant came out negative or complex beyond tolerance."""


def _as_groups(spatial_modes) -> list[tuple[int, ...]]:
    """Normalize detector targets: each entry is a spatial mode or a group.

    A group (tuple of spatial modes) models one detector collecting several
    spatial modes, reporting only the total; no mode may appear twice.
    """
    groups = []
    for entry in spatial_modes:
        if isinstance(entry, (int, np.integer)):
            groups.append((int(entry),))
        else:
            g = tuple(int(m) for m in entry)
            if not g:
                raise ValueError("detector group must contain at least one mode")
            groups.append(g)
    flat = [m for g in groups for m in g]
    if len(set(flat)) != len(flat):
        raise ValueError("spatial modes must be distinct across detectors")
    return groups


@dataclass(frozen=True)
class DetectionPattern:
    """Per-spatial-mode outcome request.

    ``outcomes`` are either all integers (photon counts) or all strings
    ``"on"`` / ``"off"`` (threshold flags), one per entry of
    ``spatial_modes``.  An entry of ``spatial_modes`` may itself be a tuple
    of spatial modes: one detector collecting all of them.
    """

    spatial_modes: tuple
    outcomes: tuple

    def __post_init__(self):
        if len(self.spatial_modes) != len(self.outcomes):
            raise ValueError("one outcome per detector required")
        _as_groups(self.spatial_modes)
        kinds = {type(o) for o in self.outcomes}
        if all(isinstance(o, int) for o in self.outcomes):
            if any(o < 0 for o in self.outcomes):
                raise ValueError("photon counts must be nonnegative")
        elif all(o in ("on", "off") for o in self.outcomes):
            pass
        else:
            raise ValueError(f"mixed or invalid outcomes: {kinds}")

    @property
    def is_pnr(self) -> bool:
        return bool(self.outcomes) and isinstance(self.outcomes[0], int)


def _clamp(p: float, label: str) -> float:
    if p < 0:
        if p < -CLAMP_TOL:
            raise UnphysicalStateError(f"{label} = {p} is negative beyond tolerance")
        log.debug("clamping %s = %.3e to 0", label, p)
        return 0.0
    return min(p, 1.0) if p <= 1 + CLAMP_TOL else p


def p_vacuum(state: CovarianceState, spatial_subset: Sequence[int]) -> float:
    """Probability of vacuum on every spectral bin of the given spatial modes."""
    subset = list(spatial_subset)
    if not subset:
        return 1.0
    sigma_s = reduce(state, subset).sigma
    n2 = sigma_s.shape[0]
    sign, logdet = np.linalg.slogdet((np.eye(n2) + sigma_s) / 2)
    if abs(sign.imag) > DET_IMAG_TOL or sign.real <= 0:
        raise UnphysicalStateError(f"vacuum-projection determinant has sign {sign}")
    return _clamp(float(np.exp(-0.5 * logdet)), "p_vacuum")


def p_threshold(state: CovarianceState, on_modes: Sequence[int],
                off_modes: Sequence[int] = ()) -> float:
    """Click in every mode of ``on_modes`` and vacuum in every ``off_modes``.

    Exact inclusion-exclusion over the power set of the on-modes; subsets
    are enumerated in binary-counter order for reproducible summation.
    """
    groups = _as_groups(on_modes)
    off = [m for g in _as_groups(off_modes) for m in g] if off_modes else []
    flat_on = [m for g in groups for m in g]
    if set(flat_on) & set(off):
        raise ValueError("on and off mode sets overlap")
    if len(groups) > MAX_THRESHOLD_MODES:
        raise ValueError(f"refusing 2^{len(groups)} inclusion-exclusion terms")
    total = 0.0
    for r in range(len(groups) + 1):
        for subset in combinations(groups, r):
            modes = [m for g in subset for m in g] + off
            total += (-1) ** r * p_vacuum(state, modes)
    return _clamp(total, "p_threshold")


def series_inv_sqrt_det(sigma_tilde: np.ndarray, row_variable: np.ndarray,
                        orders: Sequence[int]) -> TruncatedSeries:
    """Taylor expansion of det(1 + T sigma_tilde T / 2)^(-1/2) about t = 1.

    ``row_variable[a]`` names the series variable (detected spatial mode)
    that weights row/column ``a`` of the reduced sigma_tilde; T applies
    sqrt(t_var) on each side.  Expansion variables are s = t - 1.
    """
    ctx = SeriesContext(tuple(orders))
    n2 = sigma_tilde.shape[0]
    k = len(ctx.orders)
    roots = [series.sqrt_one_plus_var(ctx, v) for v in range(k)]
    pair = [[series.mul(ctx, roots[u], roots[v]) for v in range(k)] for u in range(k)]

    a = np.zeros((ctx.size, n2, n2), dtype=complex)
    rows_of = [np.flatnonzero(row_variable == v) for v in range(k)]
    for u in range(k):
        for v in range(k):
            block = 0.5 * sigma_tilde[np.ix_(rows_of[u], rows_of[v])]
            a[np.ix_(np.arange(ctx.size), rows_of[u], rows_of[v])] = \
                pair[u][v][:, None, None] * block
    a[0] += np.eye(n2)

    det = series.lu_det(ctx, a)
    if det[0].real <= 0 or abs(det[0].imag) > DET_IMAG_TOL * abs(det[0]):
        raise UnphysicalStateError(f"determinant constant term {det[0]} is not positive")
    f = series.power(ctx, det, -0.5)
    return TruncatedSeries(ctx, f)


def p_pnr(state: CovarianceState, spatial_modes: Sequence[int],
          counts: Sequence[int], cutoff: int = DEFAULT_PNR_CUTOFF) -> float:
    """Probability of detecting exactly ``counts`` photons per detector.

    Each entry of ``spatial_modes`` is a spatial mode or a group of them;
    a group models one detector collecting several spatial modes.
    """
    groups = _as_groups(spatial_modes)
    counts = list(counts)
    if len(groups) != len(counts):
        raise ValueError("one count per detector required")
    if any(n < 0 for n in counts):
        raise ValueError("photon counts must be nonnegative")
    if sum(counts) > cutoff:
        raise ValueError(f"total count {sum(counts)} exceeds cutoff {cutoff}")
    flat = [m for g in groups for m in g]
    reduced = reduce(state, flat)
    nf = reduced.layout.n_spectral
    var_of_mode = np.array([v for v, g in enumerate(groups) for _ in g])
    row_var = np.concatenate([np.repeat(var_of_mode, nf)] * 2)
    f = series_inv_sqrt_det(reduced.sigma_tilde, row_var, counts)
    coeff = f.coefficient(tuple(counts)) * (-1) ** sum(counts)
    if abs(coeff.imag) > DET_IMAG_TOL:
        raise UnphysicalStateError(f"p_pnr has imaginary part {coeff.imag}")
    return _clamp(coeff.real, "p_pnr")


def pnr_distribution(state: CovarianceState, spatial_mode: int,
                     n_max: int) -> np.ndarray:
    """P(0), ..., P(n_max) for one spatial mode, from a single jet expansion."""
    reduced = reduce(state, [spatial_mode])
    row_var = np.zeros(2 * reduced.layout.n_spectral, dtype=int)
    f = series_inv_sqrt_det(reduced.sigma_tilde, row_var, (n_max,))
    signs = (-1.0) ** np.arange(n_max + 1)
    probs = (signs * f.coefficients).real
    return np.array([_clamp(float(p), f"pnr_distribution[{n}]")
                     for n, p in enumerate(probs)])


def probability(state: CovarianceState, pattern: DetectionPattern,
                cutoff: int = DEFAULT_PNR_CUTOFF) -> float:
    """Probability of a detection pattern, PNR or threshold."""
    if pattern.is_pnr:
        return p_pnr(state, pattern.spatial_modes, pattern.outcomes, cutoff)
    on = [m for m, o in zip(pattern.spatial_modes, pattern.outcomes) if o == "on"]
    off = [m for m, o in zip(pattern.spatial_modes, pattern.outcomes) if o == "off"]
    return p_threshold(state, on, off)
