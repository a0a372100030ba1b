"""Spectra of heterogeneous random multigraphs and their limit laws.

Sampling (configuration-model and poissonized multigraphs over prescribed
degree profiles), empirical spectra, the fixed-point Stieltjes solver for
the limiting density, and closed-form support analysis including the
two-atom hole phase diagram.
"""

from .degrees import (
    DegreeGroup,
    DegreeSequence,
    DegreeSpec,
    build_degree_sequence,
    build_grouped_degrees,
    degree_esd,
)
from .families import ContinuousLaw, OnePlusExponential, UniformLaw, parse_family
from .graphs import (
    Multigraph,
    SymmetricMatrix,
    extend_configuration,
    sample_configuration,
    sample_poissonized,
    scaled_adjacency,
    single_adjacency,
)
from .limit_law import (
    ConvergenceError,
    DensityCurve,
    StieltjesSolution,
    atom_mass_at_zero,
    density_curve,
    density_mp,
    density_mu,
    quantize_measure,
    solve_g,
    solve_real_line,
    stieltjes_mu,
    symmetric_grid,
)
from .measures import (
    DiscreteMeasure,
    kolmogorov_distance,
    kolmogorov_vs_cdf,
    size_bias,
    wasserstein1,
)
from .spectrum import (
    esd,
    eigenvalues_symmetric,
    freedman_diaconis_histogram,
    trace_distance_bound,
    write_histogram_csv,
    write_spectrum_csv,
)
from .support import (
    SupportIntervals,
    TwoAtomLaw,
    phase_diagram,
    support_mp,
    support_mu,
    two_atom_discriminant,
    two_atom_has_hole,
    two_atom_threshold,
    xi,
    xi_prime,
)

__version__ = "0.1.0"

__all__ = [
    "ContinuousLaw",
    "ConvergenceError",
    "DegreeGroup",
    "DegreeSequence",
    "DegreeSpec",
    "DensityCurve",
    "DiscreteMeasure",
    "Multigraph",
    "OnePlusExponential",
    "StieltjesSolution",
    "SupportIntervals",
    "SymmetricMatrix",
    "TwoAtomLaw",
    "UniformLaw",
    "atom_mass_at_zero",
    "build_degree_sequence",
    "build_grouped_degrees",
    "degree_esd",
    "density_curve",
    "density_mp",
    "density_mu",
    "eigenvalues_symmetric",
    "esd",
    "extend_configuration",
    "freedman_diaconis_histogram",
    "kolmogorov_distance",
    "kolmogorov_vs_cdf",
    "parse_family",
    "phase_diagram",
    "quantize_measure",
    "sample_configuration",
    "sample_poissonized",
    "scaled_adjacency",
    "single_adjacency",
    "size_bias",
    "solve_g",
    "solve_real_line",
    "stieltjes_mu",
    "support_mp",
    "support_mu",
    "symmetric_grid",
    "trace_distance_bound",
    "two_atom_discriminant",
    "two_atom_has_hole",
    "two_atom_threshold",
    "wasserstein1",
    "write_histogram_csv",
    "write_spectrum_csv",
    "xi",
    "xi_prime",
]
