// SPDX-License-Identifier: Apache-2.0

#ifndef MAXCON_MINIMAX_HPP
#define MAXCON_MINIMAX_HPP

#include <optional>

#include "maxcon/types.hpp"

namespace maxcon {

/// Exact solution of a (constrained) minimax problem over a subset.
///
/// `basis` is the support set: the minimal subset of the objective points
/// whose minimax value equals `value`; removing any member strictly
/// decreases the value. By convention the basis is empty when the subset is
/// exactly interpolable (value 0).
struct MinimaxSolution {
    double value = 0.0;
    Model model;
    IndexSet basis;
};

/// Residuals within this tolerance of f count as attaining it.
inline double active_tolerance(double f) {
    return 1e-9 * (f > 1.0 ? f : 1.0);
}

/// Minimize the maximum residual over `subset`.
///
/// Linear instances are solved with the in-repo exchange/active-set
/// procedure over the bounded formulation (minimize gamma subject to
/// +-(a_i'theta - b_i) <= gamma); fractional instances by bisection on
/// gamma with a linear feasibility test per step. Deterministic: identical
/// inputs give bit-identical outputs. The empty subset yields value 0 with
/// the zero model.
///
/// Throws DomainEmpty for fractional data when no model has a positive
/// denominator on every subset member.
MinimaxSolution solve_minimax(const ProblemInstance& instance, const IndexSet& subset);

/// Minimize the maximum residual over `subset` subject to
/// residual(theta, s) <= epsilon for every s in `forced`.
///
/// The basis contains objective (subset) points only. With an empty forced
/// set this is exactly solve_minimax. Throws ConstraintsInfeasible when the
/// forced constraints admit no model.
MinimaxSolution solve_minimax_constrained(const ProblemInstance& instance,
                                          const IndexSet& subset,
                                          const IndexSet& forced);

/// Non-throwing variant; empty optional means the forced set is infeasible.
std::optional<MinimaxSolution> try_solve_minimax_constrained(
    const ProblemInstance& instance, const IndexSet& subset, const IndexSet& forced);

/// Minimax value only (no basis extraction). Empty optional when `forced`
/// is infeasible.
std::optional<double> minimax_value(const ProblemInstance& instance,
                                    const IndexSet& subset, const IndexSet& forced);

/// V(B) = indices of the full instance whose residual under the solution's
/// model strictly exceeds the solution's value (beyond the active-set
/// tolerance). Fractional points outside the model's domain are violators.
IndexSet violation_set(const ProblemInstance& instance, const MinimaxSolution& solution);

}  // namespace maxcon

#endif  // MAXCON_MINIMAX_HPP
