"""Discrete holomorphicity of lattice parafermions: O(n) loop weights on the
square lattice and self-avoiding walks on the honeycomb and its decorations."""

from .errors import (BudgetExceededError, DegenerateSolutionError, DomainError,
                     NoSolutionError, ParafermionError)
from .lattices import HoneycombPatch, LatticeSpec
from .loopdomain import (ObservableField, SquareDomain, build_domain, enumerate_configs,
                         observable, partition_function, vertex_contour_residual,
                         winding_angle)
from .params import (LoopParams, angle_from_spectral, fugacity_from_lambda,
                     lambda_from_fugacity, spectral_from_angle, spin)
from .sawlattice import (SawSeries, connective_constant_estimate, critical_fugacity,
                         enumerate_saws, honeycomb_xc, mu_martini, mu_three_twelve,
                         saw_observable, saw_vertex_residual, surface_saw_series)
from .weights import (LoopWeights, boltzmann_weights, compute_weights, holo_residuals,
                      solve_holo_system)

__version__ = "0.1.0"
