"""Spectral and semigroup diagnostics for damped wave systems with
unbounded damping, in energy-weighted norms.

Layers: coefficient families -> grids and Gram factors -> the comparison
operator with complex shift (airy), the quadratic pencil (quadratic), the
first-order block generator (generator), the closed-form quadratic-damping
family (oscillator), and time integration (semigroup). The cli module wires
everything into one command named resolvent-lab.
"""

__version__ = "0.1.0"

from .airy import (AiryOperatorSpec, LogP, MonomialP, airy_asymptotic_norm,
                   airy_norm_kernel, airy_norm_kernel_diagnostics,
                   airy_norm_matrix, airy_norm_matrix_diagnostics,
                   build_airy_matrix, resolvent_kernel)
from .coeffs import (AssumptionReport, BracketPower, CoefficientFunction,
                     Constant, LogBracketPower, Monomial, Scaled,
                     check_assumptions, eval_derivative, parse_descriptor)
from .errors import (CapabilityError, NumericsError, ResolventLabError,
                     UnresolvedWarning, ValidationError)
from .generator import (GeneratorSystem, SingularSequenceProbe, SpectrumResult,
                        apply_R_lambda, build_G, eigenmode,
                        generator_resolvent_norm, rayleigh_real_part,
                        singular_sequence_probe, spectrum)
from .grids import (DiscreteOperator, EnergyGram, Grid1D, NormKind, Space,
                    boundary_mass, build_energy_gram, build_Hq,
                    second_derivative, suggested_half_width)
from .oscillator import (AsymptoticBranches, KappaSummary, QuarticBranches,
                         asymptotic_branches, cardano_y, growth_bound,
                         kappa_sweep, quartic_branches, spectrum_exact)
from .quadratic import (GraphInequalityReport, LevelCurve, LevelCurveSample,
                        ResolventScan, SpectralParameter, build_T,
                        closed_form_level, default_fourier_grid, level_curve,
                        pencil_norm, pencil_ratio, resolvent_norm,
                        resolvent_scan, verify_graph_inequalities)
from .semigroup import (DecayFit, decay_experiment, evolve, fit_decay_rate,
                        mode_state, random_smooth_state)

__all__ = [name for name in dir() if not name.startswith("_")]
