"""Optical elements as Transforms: squeezers, beam-splitters, phases, delays,
loss and bandpass filters.

Unitary elements are returned as symplectic transforms with the block form
diag(alpha, alpha*); loss and filtering are passive channels described by a
contraction on the annihilation block alone.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import FrequencyGrid, ModeLayout, Transform, embed
from .jsa import JsaMatrix, schmidt_decompose


def _unitary_symplectic(alpha: np.ndarray, layout: ModeLayout) -> Transform:
    n = layout.n_modes
    m = np.zeros((2 * n, 2 * n), dtype=complex)
    m[:n, :n] = alpha
    m[n:, n:] = alpha.conj()
    return Transform("symplectic", m, layout)


def squeezer(j: JsaMatrix, signal_spatial: int, idler_spatial: int,
             layout: ModeLayout) -> Transform:
    """Multimode two-mode squeezer pumping the (signal, idler) spatial pair.

    Built in the Schmidt basis, where it is a stack of independent two-mode
    squeezers with strengths equal to the singular values of the JSA, then
    rotated back to the frequency-bin basis.
    """
    if signal_spatial == idler_spatial:
        raise ValueError("signal and idler must be distinct spatial modes")
    nf = layout.n_spectral
    if j.f.shape != (nf, nf):
        raise ValueError("JSA matrix size does not match the spectral bin count")

    sd = schmidt_decompose(j)
    c = np.diag(np.cosh(sd.values))
    s = np.diag(np.sinh(sd.values))
    z = np.zeros((nf, nf))

    # basis within the element: (a_sig, a_idl, a_sig^dag, a_idl^dag)
    m_d = np.block([
        [c, z, z, -1j * s],
        [z, c, -1j * s, z],
        [z, 1j * s, c, z],
        [1j * s, z, z, c],
    ])
    # diag(U, V*) with V = vh^dag, so V* = vh^T
    u_small = np.block([[sd.u.astype(complex), z], [z, sd.vh.T]])
    u_big = np.zeros((4 * nf, 4 * nf), dtype=complex)
    u_big[:2 * nf, :2 * nf] = u_small
    u_big[2 * nf:, 2 * nf:] = u_small.conj()

    m = u_big @ m_d @ u_big.conj().T
    element = Transform("symplectic", m, ModeLayout(2, nf))
    return embed(element, [signal_spatial, idler_spatial], layout)


def beam_splitter(theta: float, mode_pair: Sequence[int], layout: ModeLayout) -> Transform:
    """Dispersionless beam-splitter rotating the pair by angle theta."""
    rot = np.array([[np.cos(theta), -np.sin(theta)],
                    [np.sin(theta), np.cos(theta)]])
    alpha = np.kron(rot, np.eye(layout.n_spectral))
    element = _unitary_symplectic(alpha, ModeLayout(2, layout.n_spectral))
    return embed(element, list(mode_pair), layout)


def phase_shifter(phi: float, spatial_mode: int, layout: ModeLayout) -> Transform:
    """Dispersionless phase shift on one spatial mode."""
    alpha = np.exp(1j * phi) * np.eye(layout.n_spectral)
    element = _unitary_symplectic(alpha, ModeLayout(1, layout.n_spectral))
    return embed(element, [spatial_mode], layout)


def delay(tau: float, spatial_mode: int, grid: FrequencyGrid,
          layout: ModeLayout) -> Transform:
    """Time delay: a linear spectral phase on one spatial mode.

    Phases use bin offsets from the grid center; the global phase this drops
    relative to absolute frequencies has no effect on any detection
    probability.
    """
    if not np.isfinite(tau):
        raise ValueError("delay must be finite")
    if grid.n_bins != layout.n_spectral:
        raise ValueError("grid bin count does not match the layout")
    alpha = np.diag(np.exp(1j * grid.offsets() * tau))
    element = _unitary_symplectic(alpha, ModeLayout(1, grid.n_bins))
    return embed(element, [spatial_mode], layout)


def loss(epsilon: float, spatial_modes: Sequence[int], layout: ModeLayout) -> Transform:
    """Frequency-independent loss epsilon on the named spatial modes."""
    if not 0 <= epsilon <= 1:
        raise ValueError("loss parameter must lie in [0, 1]")
    u = np.eye(layout.n_modes, dtype=complex)
    t = np.sqrt(1 - epsilon)
    for i in set(spatial_modes):
        block = layout.spatial_block(i)
        u[block, block] = t
    return Transform("passive", u, layout)


def bandpass_filter(nu0: float, half_width: float, spatial_modes: Sequence[int],
                    grid: FrequencyGrid, layout: ModeLayout) -> Transform:
    """Ideal bandpass: bins with center frequency in [nu0 - hw, nu0 + hw] pass.

    ``half_width`` is the half-width of the passband (the filter function is
    1 on the closed interval nu0 +- half_width).
    """
    if half_width <= 0:
        raise ValueError("filter half-width must be positive")
    if grid.n_bins != layout.n_spectral:
        raise ValueError("grid bin count does not match the layout")
    freqs = grid.frequencies()
    passing = (freqs >= nu0 - half_width) & (freqs <= nu0 + half_width)
    if not np.any(passing):
        raise ValueError("filter passband lies entirely outside the frequency grid")
    u = np.eye(layout.n_modes, dtype=complex)
    for i in set(spatial_modes):
        block = layout.spatial_block(i)
        u[block, block] = passing.astype(float)
    return Transform("passive", u, layout)
