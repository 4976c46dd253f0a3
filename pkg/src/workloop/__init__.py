"""Work-loop analysis of forced nonlinear oscillators."""
from .signals import PeriodicSignal, decompose_half_cycles, simple_harmonic
from .plants import (
    DuffingPlant,
    LinearPlant,
    NegatedBranchElasticity,
    PolynomialElasticity,
    TabulatedElasticity,
    TabulatedPlant,
    closed_form_branches,
    inelastic_load,
    load_function,
    total_load,
)
from .loops import WorkLoop, PowerMetrics, build_loop, import_loop, loop_area, power_metrics
from .resonance import check_bounds, check_time_domain, one_way_drive
from .duffing import DuffingDesign, beta_star_crit, optimal_family
from .freqband import find_band, rho_of_omega, waveform

__version__ = "0.1.0"
