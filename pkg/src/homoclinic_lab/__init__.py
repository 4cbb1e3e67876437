"""Computational laboratory for the principal algebraic action of
f = M - a - b over the free group and Z^2.

Exact layers: reduced-word and lattice arithmetic (groups), group-ring
convolution and division with witnesses (ring), rational interval
enclosures of cos/sin (intervals), homoclinic kernels and the window
parametrization (homoclinic), symbolic covers with the carry machine and
SFT pattern tables (symbolic), certified transform values (spectral).
Statistical layer: seeded counter-based experiments (montecarlo) gated by
the acceptance suite (acceptance) behind the homoclinic-lab CLI (cli).
"""

from .groups import F2, Z2, GroupMismatch, WindowTooLarge, ball, sphere
from .homoclinic import (
    Configuration,
    Kernel,
    TorusValue,
    four_cover_lift,
    homoclinic_point,
    kernel,
    phi_exact,
    phi_windowed,
    xf_residual,
)
from .intervals import RationalInterval, cos2pi, cos_sin_2pi, sin2pi
from .montecarlo import (
    EnclosureTooWide,
    ExperimentConfig,
    collision_search,
    empirical_fourier,
    haar_window_test,
    sample_config,
    tau_invariance_test,
)
from .ring import (
    NotDivisible,
    PolyF,
    RingElement,
    divide_by_f,
    parse_ring_element,
    quotient_coordinates,
)
from .spectral import (
    CharacterValue,
    InIdeal,
    RadiusInsufficient,
    Witness,
    haar_indicator_check,
    mu_hat,
    nu0_hat,
    rational_witness,
)
from .symbolic import (
    BoundaryOverflow,
    CarryResult,
    CylinderSpec,
    NonTermination,
    PatternTable,
    Tree,
    allowed_patterns,
    carry_add,
    catalan,
    cylinder_measure,
    enumerate_trees,
    partition_mass,
    pattern_completions,
    percolation_path,
    reduce_cover,
)

__version__ = "0.1.0"

__all__ = [
    "F2", "Z2", "GroupMismatch", "WindowTooLarge", "ball", "sphere",
    "Configuration", "Kernel", "TorusValue", "four_cover_lift",
    "homoclinic_point", "kernel", "phi_exact", "phi_windowed", "xf_residual",
    "RationalInterval", "cos2pi", "cos_sin_2pi", "sin2pi",
    "EnclosureTooWide", "ExperimentConfig", "collision_search",
    "empirical_fourier", "haar_window_test", "sample_config",
    "tau_invariance_test",
    "NotDivisible", "PolyF", "RingElement", "divide_by_f",
    "parse_ring_element", "quotient_coordinates",
    "CharacterValue", "InIdeal", "RadiusInsufficient", "Witness",
    "haar_indicator_check", "mu_hat", "nu0_hat", "rational_witness",
    "BoundaryOverflow", "CarryResult", "CylinderSpec", "NonTermination",
    "PatternTable", "Tree", "allowed_patterns", "carry_add", "catalan",
    "cylinder_measure", "enumerate_trees", "partition_mass",
    "pattern_completions", "percolation_path", "reduce_cover",
    "__version__",
]
