"""Aharonov-Bohm contrast loss of an electron interferometer in a sinusoidal field."""
from .closedform import (
    GaussianScenario,
    PlaneWaveScenario,
    gaussian_C,
    planewave_C,
    planewave_C2_averaged,
    planewave_C2_parametric,
    thomson_mfp,
)
from .config import RunConfig, load_config
from .contrast import (
    ContrastReport,
    bessel_j0,
    contrast_analytic,
    contrast_gaussian_model,
    contrast_report,
    contrast_taylor,
    finite_window_average,
    oracle_time_average,
)
from .fields import GaussianBeamField, NullField, PlaneWaveField
from .geometry import TrajectoryPair, TrapezoidGeometry, build_trapezoid, chord_at, separation_profile
from .phase import PhaseResult, QuadratureSettings, compute_C, phase_at_emission, static_phase
from .scan import ScanSpec, count_revivals, find_contrast_zeros, run_scan
from .units import CONSTANTS

__version__ = "0.1.0"
