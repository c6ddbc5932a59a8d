"""Heralded Hong-Ou-Mandel experiment assembly and figures of merit.

The circuit uses four spatial modes: 0 and 3 are herald (signal) arms with
a detector each, 1 and 2 are the interfering idler arms.  Source A pumps
the pair (0, 1), source B the pair (3, 2); a variable delay sits on idler
1, optional bandpass filters and per-arm loss follow, and a beam-splitter
of angle theta mixes idlers (1, 2) before detection.

Figures of merit: the four-fold coincidence probability, the two bunching
patterns, both visibility definitions (delay dip and beam-splitter-angle
fringe), the heralding rate and heralding efficiency, and the analytic
heralded-state purity of a Schmidt spectrum.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import CovarianceState, FrequencyGrid, ModeLayout, apply, vacuum_state
from .detection import p_pnr, p_threshold
from .elements import bandpass_filter, beam_splitter, delay, loss, squeezer
from .jsa import JsaSpec, build_jsa

HERALD_MODES = (0, 3)
IDLER_MODES = (1, 2)
DELAY_MODE = 1
N_SPATIAL = 4

PLATEAU_FACTOR = 50.0          # "infinite" delay in units of 1 / bandwidth
PLATEAU_CHECK_TOL = 1e-6
SPS_ANGLE_TOL = 1e-8

DETECTORS = ("pnr", "threshold")

CSV_COLUMNS = ("param", "value", "p4", "p_bunch", "p_herald",
               "eta_herald", "v_hom", "v_mzi")


def xi_to_db(xi: float) -> float:
    """Squeezing strength expressed in dB: 20 xi / ln 10."""
    return 20.0 * xi / math.log(10.0)


@dataclass(frozen=True)
class HhomConfig:
    """Full description of one heralded-HOM circuit evaluation."""

    source_a: JsaSpec
    source_b: JsaSpec
    grid: FrequencyGrid
    delay: float = 0.0                      # seconds, on idler mode 1
    bs_angle: float = math.pi / 4           # radians
    loss: tuple = (0.0, 0.0, 0.0, 0.0)      # per spatial mode 0..3
    filter_center: float | None = None      # rad/s
    filter_half_width: float | None = None  # rad/s
    filter_modes: tuple = ()                # spatial modes carrying the filter
    detector: str = "pnr"

    def __post_init__(self):
        if len(self.loss) != N_SPATIAL:
            raise ValueError("need one loss value per spatial mode")
        if any(not 0 <= e <= 1 for e in self.loss):
            raise ValueError("loss values must lie in [0, 1]")
        if self.detector not in DETECTORS:
            raise ValueError(f"unknown detector type {self.detector!r}")
        if self.filter_modes and (self.filter_center is None
                                  or self.filter_half_width is None):
            raise ValueError("filter modes given without a filter passband")
        if any(not 0 <= m < N_SPATIAL for m in self.filter_modes):
            raise ValueError("filter modes must be spatial modes 0..3")

    def layout(self) -> ModeLayout:
        return ModeLayout(N_SPATIAL, self.grid.n_bins)

    def config_hash(self) -> str:
        return hashlib.sha256(repr(self).encode()).hexdigest()[:16]


def build_hhom(config: HhomConfig) -> CovarianceState:
    """Final covariance state of the heralded-HOM circuit."""
    lay = config.layout()
    state = vacuum_state(lay)

    for spec, (sig, idl) in ((config.source_a, (0, 1)),
                             (config.source_b, (3, 2))):
        if spec.xi > 0:
            j = build_jsa(spec, config.grid)
            state = apply(state, squeezer(j, sig, idl, lay))

    if config.delay != 0.0:
        state = apply(state, delay(config.delay, DELAY_MODE, config.grid, lay))

    if config.filter_modes:
        state = apply(state, bandpass_filter(config.filter_center,
                                             config.filter_half_width,
                                             config.filter_modes,
                                             config.grid, lay))
    for mode, eps in enumerate(config.loss):
        if eps > 0:
            state = apply(state, loss(eps, [mode], lay))

    if config.bs_angle != 0.0:
        state = apply(state, beam_splitter(config.bs_angle, IDLER_MODES, lay))
    return state


def four_fold(state: CovarianceState, detector: str = "pnr") -> float:
    """One detection event in each of the four arms."""
    if detector == "pnr":
        return p_pnr(state, (0, 1, 2, 3), (1, 1, 1, 1))
    return p_threshold(state, (0, 1, 2, 3))


def bunching(state: CovarianceState, detector: str = "pnr") -> float:
    """Both idler photons leave through the same beam-splitter port."""
    if detector == "pnr":
        return (p_pnr(state, (0, 1, 2, 3), (1, 0, 2, 1))
                + p_pnr(state, (0, 1, 2, 3), (1, 2, 0, 1)))
    return (p_threshold(state, (0, 2, 3), (1,))
            + p_threshold(state, (0, 1, 3), (2,)))


def heralding_rate(state: CovarianceState, detector: str = "pnr") -> float:
    """Probability that both herald arms register a detection event."""
    if detector == "pnr":
        return p_pnr(state, HERALD_MODES, (1, 1))
    return p_threshold(state, HERALD_MODES)


def single_pair_probability(config: HhomConfig) -> float:
    """P_SPS: heralds fire and exactly two idler photons emerge, any split.

    Evaluated with the beam-splitter removed; the value is independent of
    the beam-splitter angle, which ``heralding_efficiency`` asserts.
    """
    state = build_hhom(dataclasses.replace(config, bs_angle=0.0))
    return four_fold(state, config.detector) + bunching(state, config.detector)


def heralding_efficiency(config: HhomConfig) -> float:
    """Heralded-pair probability over heralding rate.

    Recomputes the numerator at beam-splitter angle pi/4 and insists the
    two agree, as the pattern sum must be invariant under the passive
    mixing of the idler arms.
    """
    p_sps = single_pair_probability(config)
    state45 = build_hhom(dataclasses.replace(config, bs_angle=math.pi / 4))
    p_sps_45 = four_fold(state45, config.detector) + bunching(state45, config.detector)
    if abs(p_sps - p_sps_45) > SPS_ANGLE_TOL:
        raise RuntimeError("heralded-pair probability depends on the beam-splitter "
                           f"angle ({p_sps} vs {p_sps_45})")
    p_herald = heralding_rate(state45, config.detector)
    if p_herald <= 0:
        raise ZeroDivisionError("heralding rate is zero")
    return p_sps / p_herald


def distinguishable_four_fold(config: HhomConfig) -> float:
    """Four-fold probability in the fully distinguishable (infinite-delay) limit.

    On a finite frequency lattice a physical delay can never decohere
    photon pairs that occupy the same frequency bin, so the large-delay
    plateau of the four-fold probability retains a grid artifact.  The
    exact limit is instead obtained by splitting each idler arm on its own
    balanced beam-splitter against vacuum and pairing the outputs into two
    composite detectors, which reproduces the routing statistics of fully
    distinguishable photons with no spurious interference.
    """
    lay = ModeLayout(N_SPATIAL + 2, config.grid.n_bins)
    state = vacuum_state(lay)
    for spec, (sig, idl) in ((config.source_a, (0, 1)),
                             (config.source_b, (3, 2))):
        if spec.xi > 0:
            j = build_jsa(spec, config.grid)
            state = apply(state, squeezer(j, sig, idl, lay))
    if config.filter_modes:
        state = apply(state, bandpass_filter(config.filter_center,
                                             config.filter_half_width,
                                             config.filter_modes,
                                             config.grid, lay))
    for mode, eps in enumerate(config.loss):
        if eps > 0:
            state = apply(state, loss(eps, [mode], lay))
    # private balanced splitters against the vacuum ancillas 4 and 5
    state = apply(state, beam_splitter(math.pi / 4, (1, 4), lay))
    state = apply(state, beam_splitter(math.pi / 4, (2, 5), lay))
    detectors = (0, (1, 5), (2, 4), 3)
    if config.detector == "pnr":
        return p_pnr(state, detectors, (1, 1, 1, 1))
    return p_threshold(state, detectors)


def visibility_hom(p4_dip: float, p4_plateau: float) -> float:
    """Dip visibility 1 - P4(tau=0) / P4(tau -> infinity)."""
    if p4_plateau <= 0:
        raise ZeroDivisionError("four-fold plateau probability is zero")
    return 1.0 - p4_dip / p4_plateau


def visibility_mzi(p4_max: float, p4_min: float) -> float:
    """Fringe visibility (max - min) / (max + min) over the beam-splitter angle."""
    if p4_max + p4_min <= 0:
        raise ZeroDivisionError("four-fold probabilities vanish at both angles")
    return (p4_max - p4_min) / (p4_max + p4_min)


def plateau_delay(config: HhomConfig) -> float:
    """Delay long enough for the dip to have fully decayed."""
    zeta = min(config.source_a.zeta, config.source_b.zeta)
    return PLATEAU_FACTOR / zeta


def _p4_at(config: HhomConfig, **overrides) -> float:
    state = build_hhom(dataclasses.replace(config, **overrides))
    return four_fold(state, config.detector)


def hom_visibility(config: HhomConfig, plateau: str = "exact",
                   check_plateau: bool = False) -> float:
    """Delay-dip visibility of a configuration.

    ``plateau="exact"`` normalizes by the exact distinguishable limit from
    ``distinguishable_four_fold``; ``plateau="delay"`` instead evaluates a
    finite delay of 50 inverse bandwidths, which carries a frequency-lattice
    artifact for strongly non-separable sources.  ``check_plateau``
    recomputes the finite-delay plateau at twice the delay and errors if
    the value has not converged.
    """
    if plateau == "exact":
        p_plateau = distinguishable_four_fold(config)
    elif plateau == "delay":
        tau = plateau_delay(config)
        p_plateau = _p4_at(config, delay=tau, bs_angle=math.pi / 4)
        if check_plateau:
            p_double = _p4_at(config, delay=2 * tau, bs_angle=math.pi / 4)
            if abs(p_double - p_plateau) > PLATEAU_CHECK_TOL * max(p_plateau, 1e-300):
                raise RuntimeError("four-fold probability has not reached its "
                                   "large-delay plateau")
    else:
        raise ValueError(f"unknown plateau method {plateau!r}")
    p_dip = _p4_at(config, delay=0.0, bs_angle=math.pi / 4)
    return visibility_hom(p_dip, p_plateau)


def mzi_visibility(config: HhomConfig) -> float:
    """Fringe visibility between beam-splitter angles 0 and pi/4."""
    return visibility_mzi(_p4_at(config, bs_angle=0.0),
                          _p4_at(config, bs_angle=math.pi / 4))


@dataclass(frozen=True)
class RatioResult:
    """Both orderings of the plateau-to-maximum four-fold ratio."""

    p4_max: float        # no beam-splitter
    p4_plateau: float    # distinguishable (infinite-delay) limit
    max_over_plateau: float
    plateau_over_max: float


def ratio_r(config: HhomConfig) -> RatioResult:
    """Four-fold probability without the beam-splitter versus at the plateau.

    Conventions in the literature disagree on which value is the numerator,
    so both orderings are returned.
    """
    p4_max = _p4_at(config, bs_angle=0.0)
    p4_plateau = distinguishable_four_fold(config)
    if p4_max <= 0 or p4_plateau <= 0:
        raise ZeroDivisionError("four-fold probability vanishes")
    return RatioResult(p4_max, p4_plateau, p4_max / p4_plateau, p4_plateau / p4_max)


def analytic_heralded_purity(values: Sequence[float]) -> float:
    """Purity of the heralded single photon from a Schmidt spectrum.

    Equals sum(tanh^4) / sum(tanh^2)^2 over the Schmidt-mode squeezing
    strengths; 1 for a single Schmidt mode.
    """
    t2 = np.tanh(np.asarray(values, dtype=float)) ** 2
    total = np.sum(t2)
    if total == 0:
        raise ValueError("all Schmidt coefficients vanish")
    return float(np.sum(t2 ** 2) / total ** 2)


# Operating point of the spectral-filtering study: two identical waveguide
# sources with a walk-off of 29 ps and a bandwidth of 1e11 rad/s (so the
# dimensionless walk-off parameter zeta * walkoff / 2 is 1.45), with an
# optional rectangular bandpass of half-width 1.12e11 rad/s (fitted) on all
# four arms.
FILTER_STUDY_ZETA = 1e11                 # rad/s
FILTER_STUDY_WALKOFF = 29e-12            # s
FILTER_STUDY_HALF_WIDTH = 1.12e11        # rad/s, fitted
FILTER_STUDY_N_BINS = 61


def filter_study_config(xi: float, filtered: bool = True,
                        detector: str = "pnr",
                        n_bins: int = FILTER_STUDY_N_BINS) -> HhomConfig:
    """Identical waveguide sources with an optional bandpass on every arm."""
    spec = JsaSpec("waveguide", xi, FILTER_STUDY_ZETA,
                   walkoff=FILTER_STUDY_WALKOFF)
    step = 8 * FILTER_STUDY_ZETA / (n_bins - 1)
    grid = FrequencyGrid(spec.signal_center, step, n_bins)
    kwargs = {}
    if filtered:
        kwargs = dict(filter_center=spec.signal_center,
                      filter_half_width=FILTER_STUDY_HALF_WIDTH,
                      filter_modes=(0, 1, 2, 3))
    return HhomConfig(spec, spec, grid, detector=detector, **kwargs)


# Fitted constants of the structured (non-identical) source pair: a filtered
# waveguide source against a sign-flipped double-lobe source.  The lobe
# separation, filter half-width and waveguide bandwidth are fitted so the
# delay scan shows interference revivals at +-4 ps with almost no contrast
# at zero delay; the lobe width is the quoted 0.03 THz.
STRUCTURED_WAVEGUIDE_ZETA = 2 * math.pi * 1e11      # rad/s
STRUCTURED_WALKOFF = 29e-12                          # s
STRUCTURED_LOBE_WIDTH = 2 * math.pi * 0.03e12       # rad/s
STRUCTURED_LOBE_SEPARATION = 6.5e11                  # rad/s, fitted
STRUCTURED_FILTER_HALF_WIDTH = 4.5e11                # rad/s, fitted
STRUCTURED_XI = 0.4
STRUCTURED_N_BINS = 51
STRUCTURED_GRID_STEP = 4.4e10                        # rad/s


def structured_source_config(detector: str = "pnr",
                             n_bins: int = STRUCTURED_N_BINS) -> HhomConfig:
    """Non-identical source pair whose delay scan shows +-4 ps revivals.

    Source A is a waveguide JSA bandpass-filtered on both of its arms;
    source B is a rank-1 double-lobe JSA with opposite-sign lobes, so its
    heralded idler is a coherent two-color superposition.  Interference
    between the arms then beats in the delay, with local four-fold minima
    at +-4 ps and near-zero contrast at zero delay.
    """
    source_a = JsaSpec("waveguide", STRUCTURED_XI, STRUCTURED_WAVEGUIDE_ZETA,
                       walkoff=STRUCTURED_WALKOFF)
    source_b = JsaSpec("double_lobe", STRUCTURED_XI, STRUCTURED_LOBE_WIDTH,
                       lobe_separation=STRUCTURED_LOBE_SEPARATION,
                       relative_sign=-1)
    grid = FrequencyGrid(source_a.signal_center, STRUCTURED_GRID_STEP, n_bins)
    return HhomConfig(source_a, source_b, grid,
                      filter_center=source_a.signal_center,
                      filter_half_width=STRUCTURED_FILTER_HALF_WIDTH,
                      filter_modes=(0, 1), detector=detector)


SWEEP_AXES = ("delay", "bs_angle", "xi", "loss", "filter_width")


@dataclass(frozen=True)
class SweepResult:
    """Rows of figures of merit along one swept axis.

    Each row maps column names from ``CSV_COLUMNS`` to floats, with None
    for metrics not evaluated on this axis.
    """

    param: str
    rows: tuple
    detector: str
    config_hash: str

    def column(self, name: str) -> np.ndarray:
        return np.array([math.nan if r[name] is None else r[name]
                         for r in self.rows])

    def to_csv(self, path=None) -> str | None:
        """Write the CSV; with no path, return it as a string."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow([row["param"]]
                            + [_format_cell(row[c]) for c in CSV_COLUMNS[1:]])
        if path is None:
            return buf.getvalue()
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(buf.getvalue())
        return None


def _format_cell(v) -> str:
    return "" if v is None else format(float(v), ".12e")


def _with_axis_value(config: HhomConfig, axis: str, value: float) -> HhomConfig:
    if axis == "delay":
        return dataclasses.replace(config, delay=float(value))
    if axis == "bs_angle":
        return dataclasses.replace(config, bs_angle=float(value))
    if axis == "xi":
        return dataclasses.replace(
            config,
            source_a=dataclasses.replace(config.source_a, xi=float(value)),
            source_b=dataclasses.replace(config.source_b, xi=float(value)))
    if axis == "loss":
        return dataclasses.replace(config, loss=(float(value),) * N_SPATIAL)
    if axis == "filter_width":
        return dataclasses.replace(config, filter_half_width=float(value))
    raise ValueError(f"unknown sweep axis {axis!r}")


def sweep(config: HhomConfig, axis: str, values: Sequence[float],
          visibilities: bool | None = None) -> SweepResult:
    """Evaluate the figures of merit at each value of one swept parameter.

    Per row: four-fold, bunching and heralding probabilities at the row's
    circuit, plus (unless the swept axis is the delay or the beam-splitter
    angle itself, or ``visibilities`` is False) the heralding efficiency
    and both visibilities.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; choose from {SWEEP_AXES}")
    values = [float(v) for v in values]
    if any(not math.isfinite(v) for v in values):
        raise ValueError("swept values must be finite")
    if visibilities is None:
        visibilities = axis not in ("delay", "bs_angle")

    rows = [sweep_row(config, axis, v, visibilities) for v in values]
    return SweepResult(axis, tuple(rows), config.detector, config.config_hash())


def sweep_row(config: HhomConfig, axis: str, value: float,
              visibilities: bool) -> dict:
    """Figures of merit of one sweep point, as a CSV-contract row dict."""
    c = _with_axis_value(config, axis, float(value))
    state = build_hhom(c)
    row = {"param": axis, "value": float(value),
           "p4": four_fold(state, c.detector),
           "p_bunch": bunching(state, c.detector),
           "p_herald": heralding_rate(state, c.detector),
           "eta_herald": None, "v_hom": None, "v_mzi": None}
    if visibilities:
        row["eta_herald"] = heralding_efficiency(c)
        row["v_hom"] = hom_visibility(c)
        row["v_mzi"] = mzi_visibility(c)
    return row
