"""Mode bookkeeping, covariance states and symplectic / passive-channel maps.

Basis convention used everywhere in this package: all annihilation
operators first (spatial-major, spectral-minor), then all creation
operators in the same order.  For a system with ``n_spatial`` spatial
modes and ``n_spectral`` frequency bins, mode ``(i, w)`` sits at row
``i * n_spectral + w`` in the annihilation block and at that row plus
``N = n_spatial * n_spectral`` in the creation block.  The vacuum has
covariance matrix equal to the 2N identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

SYMPLECTIC_TOL = 1e-12
HERMITICITY_TOL = 1e-10


@dataclass(frozen=True)
class ModeLayout:
    """Spatial x spectral mode lattice."""

    n_spatial: int
    n_spectral: int

    def __post_init__(self):
        if self.n_spatial < 1 or self.n_spectral < 1:
            raise ValueError("mode counts must be positive")

    @property
    def n_modes(self) -> int:
        return self.n_spatial * self.n_spectral

    def index(self, spatial: int, spectral: int, dagger: bool = False) -> int:
        """Row index of mode ``(spatial, spectral)`` (0-based)."""
        if not 0 <= spatial < self.n_spatial:
            raise IndexError(f"spatial index {spatial} out of range")
        if not 0 <= spectral < self.n_spectral:
            raise IndexError(f"spectral index {spectral} out of range")
        idx = spatial * self.n_spectral + spectral
        return idx + self.n_modes if dagger else idx

    def spatial_block(self, spatial: int) -> np.ndarray:
        """Annihilation-block row indices of one spatial mode."""
        start = spatial * self.n_spectral
        return np.arange(start, start + self.n_spectral)

    def metric(self) -> np.ndarray:
        """The commutation metric K = diag(+1 x N, -1 x N)."""
        n = self.n_modes
        return np.diag(np.concatenate([np.ones(n), -np.ones(n)]))


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform discretization of the spectral axis, symmetric about ``center``.

    All frequencies are angular (rad/s).
    """

    center: float
    step: float
    n_bins: int

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("frequency step must be positive")
        if self.n_bins < 1:
            raise ValueError("need at least one frequency bin")

    def bin_frequency(self, w: int | np.ndarray) -> float | np.ndarray:
        """Absolute angular frequency of bin ``w`` (0-based)."""
        return self.center + (np.asarray(w) - (self.n_bins - 1) / 2) * self.step

    def frequencies(self) -> np.ndarray:
        return self.bin_frequency(np.arange(self.n_bins))

    def offsets(self) -> np.ndarray:
        """Bin frequencies relative to the grid center."""
        return self.frequencies() - self.center


@dataclass(frozen=True)
class Transform:
    """Either a symplectic matrix (unitary element) or a passive channel.

    ``kind == "symplectic"``: ``matrix`` is the 2N x 2N matrix M satisfying
    M K M^dag = K, applied as sigma -> M sigma M^dag.

    ``kind == "passive"``: ``matrix`` is the N x N contraction U acting
    identically (conjugated) on the creation block, applied as
    sigma -> U_full (sigma - 1) U_full^dag + 1 with U_full = diag(U, U*).
    """

    kind: str
    matrix: np.ndarray = field(repr=False)
    layout: ModeLayout

    def __post_init__(self):
        n = self.layout.n_modes
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        if self.kind == "symplectic":
            if m.shape != (2 * n, 2 * n):
                raise ValueError(f"symplectic matrix must be {2 * n}x{2 * n}")
            k = self.layout.metric()
            residual = np.max(np.abs(m @ k @ m.conj().T - k))
            if residual > SYMPLECTIC_TOL * max(1.0, np.max(np.abs(m)) ** 2):
                raise ValueError(f"matrix is not symplectic (residual {residual:.2e})")
        elif self.kind == "passive":
            if m.shape != (n, n):
                raise ValueError(f"passive matrix must be {n}x{n}")
            smax = np.linalg.norm(m, 2)
            if smax > 1 + 1e-12:
                raise ValueError(f"passive matrix is not contractive (s_max = {smax})")
        else:
            raise ValueError(f"unknown transform kind {self.kind!r}")


@dataclass(frozen=True)
class CovarianceState:
    """Vacuum-normalized covariance matrix in the doubled basis."""

    layout: ModeLayout
    sigma: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = self.layout.n_modes
        s = np.asarray(self.sigma, dtype=complex)
        if s.shape != (2 * n, 2 * n):
            raise ValueError(f"covariance matrix must be {2 * n}x{2 * n}")
        scale = max(1.0, np.linalg.norm(s))
        if np.max(np.abs(s - s.conj().T)) > HERMITICITY_TOL * scale:
            raise ValueError("covariance matrix is not Hermitian")
        # re-symmetrize to bound drift over long circuits
        object.__setattr__(self, "sigma", (s + s.conj().T) / 2)

    @property
    def sigma_tilde(self) -> np.ndarray:
        """sigma minus the identity (the vacuum-subtracted part)."""
        return self.sigma - np.eye(self.sigma.shape[0])


def vacuum_state(layout: ModeLayout) -> CovarianceState:
    """Vacuum on every mode of the layout."""
    return CovarianceState(layout, np.eye(2 * layout.n_modes, dtype=complex))


def apply_symplectic(state: CovarianceState, t: Transform) -> CovarianceState:
    """sigma -> M sigma M^dag."""
    if t.kind != "symplectic":
        raise ValueError("expected a symplectic transform")
    if t.layout != state.layout:
        raise ValueError("transform layout does not match state layout")
    m = t.matrix
    return CovarianceState(state.layout, m @ state.sigma @ m.conj().T)


def apply_passive_channel(state: CovarianceState, t: Transform) -> CovarianceState:
    """sigma -> diag(U, U*) (sigma - 1) diag(U, U*)^dag + 1."""
    if t.kind != "passive":
        raise ValueError("expected a passive transform")
    if t.layout != state.layout:
        raise ValueError("transform layout does not match state layout")
    u = t.matrix
    n = state.layout.n_modes
    st = state.sigma_tilde
    out = np.empty_like(st)
    out[:n, :n] = u @ st[:n, :n] @ u.conj().T
    out[:n, n:] = u @ st[:n, n:] @ u.T
    out[n:, :n] = u.conj() @ st[n:, :n] @ u.conj().T
    out[n:, n:] = u.conj() @ st[n:, n:] @ u.T
    return CovarianceState(state.layout, out + np.eye(2 * n))


def apply(state: CovarianceState, t: Transform) -> CovarianceState:
    """Dispatch on the transform kind."""
    if t.kind == "symplectic":
        return apply_symplectic(state, t)
    return apply_passive_channel(state, t)


def subset_indices(layout: ModeLayout, spatial_subset: Sequence[int]) -> np.ndarray:
    """Doubled-basis row indices of a spatial subset, annihilation then creation."""
    subset = list(spatial_subset)
    if not subset:
        raise ValueError("spatial subset must be nonempty")
    if len(set(subset)) != len(subset):
        raise ValueError("spatial subset contains duplicates")
    for i in subset:
        if not 0 <= i < layout.n_spatial:
            raise IndexError(f"spatial index {i} out of range")
    ann = np.concatenate([layout.spatial_block(i) for i in subset])
    return np.concatenate([ann, ann + layout.n_modes])


def reduce(state: CovarianceState, spatial_subset: Sequence[int]) -> CovarianceState:
    """Covariance state of a spatial subset (spectral bins kept)."""
    subset = list(spatial_subset)
    idx = subset_indices(state.layout, subset)
    sub_layout = ModeLayout(len(subset), state.layout.n_spectral)
    return CovarianceState(sub_layout, state.sigma[np.ix_(idx, idx)])


def embed(t: Transform, acting_spatial_modes: Sequence[int], layout: ModeLayout) -> Transform:
    """Block-embed an element transform on the named spatial modes of ``layout``."""
    modes = list(acting_spatial_modes)
    if len(modes) != t.layout.n_spatial:
        raise ValueError("number of target modes does not match the element")
    if len(set(modes)) != len(modes):
        raise ValueError("target spatial modes overlap")
    if t.layout.n_spectral != layout.n_spectral:
        raise ValueError("spectral bin counts differ")
    for i in modes:
        if not 0 <= i < layout.n_spatial:
            raise IndexError(f"spatial index {i} out of range")

    ann = np.concatenate([layout.spatial_block(i) for i in modes])
    if t.kind == "passive":
        out = np.eye(layout.n_modes, dtype=complex)
        out[np.ix_(ann, ann)] = t.matrix
        return Transform("passive", out, layout)

    n_el = t.layout.n_modes
    idx = np.concatenate([ann, ann + layout.n_modes])
    out = np.eye(2 * layout.n_modes, dtype=complex)
    out[np.ix_(idx, idx)] = t.matrix
    return Transform("symplectic", out, layout)


def symplectic_from_hamiltonian(h: np.ndarray, layout: ModeLayout) -> Transform:
    """M = exp(-2i K H) for a Hermitian coefficient matrix H.

    Fallback for elements without a closed form; every element shipped here
    uses its closed form instead.
    """
    h = np.asarray(h, dtype=complex)
    n = layout.n_modes
    if h.shape != (2 * n, 2 * n):
        raise ValueError(f"Hamiltonian matrix must be {2 * n}x{2 * n}")
    if np.max(np.abs(h - h.conj().T)) > HERMITICITY_TOL * max(1.0, np.linalg.norm(h)):
        raise ValueError("Hamiltonian coefficient matrix must be Hermitian")
    m = scipy.linalg.expm(-2j * layout.metric() @ h)
    return Transform("symplectic", m, layout)
