"""Verification-grade numerics for a viscous second-order traffic flow model."""

__version__ = "0.1.0"

from .model import (DomainError, ModelParams, Partials, SolutionSampler, StatePoint,
                    characteristic_eigenvectors, characteristic_speeds, fd_partials,
                    pde_residual, pressure, residual_from_partials)
from .lie import (AdjointParams, InfinitesimalParams, InvariantTuple, LieCoeffs,
                  OptimalClass, adjoint_apply, adjoint_exp_matrix, adjoint_series_check,
                  classify_optimal, commutator, group_transform, infinitesimals,
                  invariant_ic, invariant_tuple, killing_form)
from .catalog import (CatalogEntry, GridRegion, VerifyReport, make_entry,
                      reduced_ode_residual_T3, verify_entry, verify_sampler,
                      PAPER_CLAIMED, REFUTED, VERIFIED)
from .conservation import (ConservedPair, MultiplierConstants, adjoint_identity_residual,
                           basic_conserved, divergence_residual, kink_ode_oracle,
                           self_adjoint_substitution, symmetry_conserved_vector)
from .solver import (ConvergenceResult, Field, Grid, PositivityError, SolverConfig,
                     SolverError, Trajectory, convergence_order, error_norms, run, step)
from .wavefront import (AmplitudeProblem, AmplitudeSolution, AmplitudeTrace,
                        amplitude_direct, amplitude_quadrature, characteristic_path,
                        psi_along)
