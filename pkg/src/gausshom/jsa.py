"""Joint-spectral-amplitude models, discretization and Schmidt decomposition.

All frequencies are angular (rad/s).  Helpers are provided to convert from
the units experimentalists quote (THz for bandwidths and centers, ps for
delays and walk-off lengths).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import FrequencyGrid

TWO_PI = 2 * np.pi

# unit conversions to internal angular frequency / seconds
THZ = TWO_PI * 1e12        # ordinary frequency in THz -> rad/s
PS = 1e-12                 # picoseconds -> s

TELECOM_CENTER = 193.1e12 * TWO_PI  # 193.1 THz, the band used throughout


@dataclass(frozen=True)
class JsaSpec:
    """Parametric joint-spectral-amplitude model.

    variant:
        ``gaussian``     separable product of two Gaussians, single Schmidt mode
        ``waveguide``    Gaussian in the sum frequency times a sinc in the
                         difference, the generic non-separable phase-matched form
        ``double_lobe``  separable JSA whose idler marginal is two Gaussian
                         lobes with a relative sign at
                         ``idler_center +- lobe_separation / 2``; being
                         rank 1, it heralds a coherent two-color photon
                         that beats in a delay scan
    """

    variant: str
    xi: float
    zeta: float
    signal_center: float = TELECOM_CENTER
    idler_center: float = TELECOM_CENTER
    walkoff: float = 0.0           # group-velocity walk-off time (s), waveguide only
    lobe_separation: float = 0.0   # rad/s, double_lobe only
    relative_sign: int = 1         # +-1, double_lobe only

    def __post_init__(self):
        if self.variant not in ("gaussian", "waveguide", "double_lobe"):
            raise ValueError(f"unknown JSA variant {self.variant!r}")
        if self.xi < 0:
            raise ValueError("squeezing parameter must be nonnegative")
        if self.zeta <= 0:
            raise ValueError("bandwidth must be positive")
        if self.variant == "waveguide" and self.walkoff <= 0:
            raise ValueError("waveguide JSA needs a positive walk-off time")
        if self.variant == "double_lobe":
            if self.lobe_separation <= 0:
                raise ValueError("double-lobe JSA needs a positive lobe separation")
            if self.relative_sign not in (+1, -1):
                raise ValueError("relative sign must be +1 or -1")


@dataclass(frozen=True)
class JsaMatrix:
    """Discretized JSA: row = signal bin, column = idler bin.

    Normalized so that the Frobenius norm equals the squeezing parameter,
    making the singular values the per-Schmidt-mode squeezing strengths.
    """

    f: np.ndarray = field(repr=False)
    grid_signal: FrequencyGrid
    grid_idler: FrequencyGrid

    def __post_init__(self):
        f = np.asarray(self.f, dtype=complex)
        if f.shape != (self.grid_signal.n_bins, self.grid_idler.n_bins):
            raise ValueError("JSA matrix shape does not match the grids")
        object.__setattr__(self, "f", f)

    @property
    def xi(self) -> float:
        return float(np.linalg.norm(self.f))


@dataclass(frozen=True)
class SchmidtData:
    """SVD of a JSA matrix: f = u @ diag(values) @ vh."""

    values: np.ndarray
    u: np.ndarray = field(repr=False)
    vh: np.ndarray = field(repr=False)

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.values) @ self.vh


def default_grid(spec: JsaSpec, n_bins: int = 41, span_factor: float = 4.0) -> FrequencyGrid:
    """Grid spanning ``+- span_factor * scale`` around the signal center.

    The scale is the bandwidth, widened for waveguide JSAs whose sinc factor
    has side lobes on the scale 2 pi / walkoff.
    """
    scale = spec.zeta
    if spec.variant == "waveguide":
        scale = max(scale, TWO_PI / spec.walkoff)
    if spec.variant == "double_lobe":
        scale = max(scale, spec.lobe_separation / 8 + spec.zeta)
    half_span = span_factor * scale
    step = 2 * half_span / (n_bins - 1) if n_bins > 1 else spec.zeta
    return FrequencyGrid(spec.signal_center, step, n_bins)


def _lobe(offsets: np.ndarray, center: float, width: float) -> np.ndarray:
    return np.exp(-0.5 * ((offsets - center) / width) ** 2)


def build_jsa(spec: JsaSpec, grid_signal: FrequencyGrid,
              grid_idler: FrequencyGrid | None = None) -> JsaMatrix:
    """Sample a JSA model on frequency grids and normalize to the spec's xi."""
    if grid_idler is None:
        grid_idler = FrequencyGrid(spec.idler_center, grid_signal.step, grid_signal.n_bins)
    if grid_signal.step > spec.zeta / 4 or grid_idler.step > spec.zeta / 4:
        raise ValueError("frequency grid is too coarse for this bandwidth "
                         f"(step {grid_signal.step:.3e} > zeta/4 = {spec.zeta / 4:.3e})")
    for grid, center in ((grid_signal, spec.signal_center), (grid_idler, spec.idler_center)):
        span = (grid.n_bins - 1) / 2 * grid.step
        if span < 4 * spec.zeta or abs(grid.center - center) > grid.step / 2:
            warnings.warn("frequency grid does not cover +-4 zeta around the JSA center",
                          stacklevel=2)

    d1 = grid_signal.frequencies() - spec.signal_center  # signal offsets, rad/s
    d2 = grid_idler.frequencies() - spec.idler_center

    if spec.variant == "gaussian":
        # exact outer product, rank 1 by construction
        f = np.outer(_lobe(d1, 0.0, spec.zeta), _lobe(d2, 0.0, spec.zeta))
    elif spec.variant == "waveguide":
        s = d1[:, None] + d2[None, :]
        d = d1[:, None] - d2[None, :]
        f = np.exp(-0.5 * (s / spec.zeta) ** 2) * np.sinc(spec.walkoff * d / (2 * np.pi))
    else:  # double_lobe: rank-1, idler marginal has two signed lobes
        half = spec.lobe_separation / 2
        f = np.outer(_lobe(d1, 0.0, spec.zeta),
                     _lobe(d2, +half, spec.zeta)
                     + spec.relative_sign * _lobe(d2, -half, spec.zeta))

    norm = np.linalg.norm(f)
    if norm == 0:
        raise ValueError("JSA vanishes on this grid")
    return JsaMatrix(spec.xi * f / norm, grid_signal, grid_idler)


def schmidt_decompose(j: JsaMatrix) -> SchmidtData:
    """Singular value decomposition with descending singular values."""
    if not np.all(np.isfinite(j.f)):
        raise ValueError("JSA matrix contains non-finite entries")
    u, s, vh = np.linalg.svd(j.f)
    return SchmidtData(s, u, vh)


def schmidt_purity(values: np.ndarray) -> float:
    """sum(a_l^4) for the normalized Schmidt weights a_l = lambda_l / xi."""
    v = np.asarray(values, dtype=float)
    total = np.sum(v ** 2)
    if total == 0:
        return 1.0
    return float(np.sum(v ** 4) / total ** 2)


def export_csv(j: JsaMatrix, path) -> None:
    """Write real and imaginary parts as CSV (row = signal bin, col = idler bin)."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write("# real part\n")
        np.savetxt(fh, j.f.real, delimiter=",")
        fh.write("# imaginary part\n")
        np.savetxt(fh, j.f.imag, delimiter=",")
