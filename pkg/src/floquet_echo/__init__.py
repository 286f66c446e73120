"""floquet-echo: stroboscopic dynamical fidelity of periodically driven
two-level mode families (transverse-field Ising chain, 2D massive Dirac)
via Floquet decomposition."""

from .analysis import (
    HighFreqReport,
    IntegrandProfile,
    ResonanceKind,
    ResonancePoint,
    bessel_j0,
    bessel_peak_frequencies,
    dip_frequencies,
    highfreq_limit_check,
    integrand_profile,
    j0_zeros,
    kayanuma_probability,
    resonance_scan,
)
from .backends import backend_name
from .fidelity import (
    FidelityCurve,
    FloquetTable,
    bound_gap,
    direct_fidelity,
    fidelity_curve,
    floquet_table,
    g_dec,
    g_inf_closed,
    g_inf_series,
    g_n,
    log_mode_term,
)
from .models import (
    Coeffs,
    DiracParams,
    DriveParams,
    default_steps,
    dirac_mode_coeffs,
    grid_1d,
    grid_2d,
    ising_mode_coeffs,
)
from .su2 import (
    DegenerateInputError,
    FloquetMode,
    ModeOverlap,
    floquet_decompose,
    ground_state,
    overlaps,
    propagate_period,
    su2_exp,
)

__version__ = "0.1.0"

__all__ = [
    "Coeffs",
    "DegenerateInputError",
    "DiracParams",
    "DriveParams",
    "FidelityCurve",
    "FloquetMode",
    "FloquetTable",
    "HighFreqReport",
    "IntegrandProfile",
    "ModeOverlap",
    "ResonanceKind",
    "ResonancePoint",
    "backend_name",
    "bessel_j0",
    "bessel_peak_frequencies",
    "bound_gap",
    "default_steps",
    "dip_frequencies",
    "dirac_mode_coeffs",
    "direct_fidelity",
    "fidelity_curve",
    "floquet_decompose",
    "floquet_table",
    "g_dec",
    "g_inf_closed",
    "g_inf_series",
    "g_n",
    "grid_1d",
    "grid_2d",
    "ground_state",
    "highfreq_limit_check",
    "integrand_profile",
    "ising_mode_coeffs",
    "j0_zeros",
    "kayanuma_probability",
    "log_mode_term",
    "overlaps",
    "propagate_period",
    "resonance_scan",
    "su2_exp",
]
