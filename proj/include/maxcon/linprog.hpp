// SPDX-License-Identifier: Apache-2.0

#ifndef MAXCON_LINPROG_HPP
#define MAXCON_LINPROG_HPP

#include <Eigen/Dense>
#include <vector>

namespace maxcon::linprog {

enum class LpStatus {
    Optimal,
    Infeasible,  // no x satisfies G x <= h
    Unbounded,   // min c'x unbounded below on the feasible set
};

struct LpResult {
    LpStatus status = LpStatus::Optimal;
    double objective = 0.0;   // c'x at the optimum
    Eigen::VectorXd x;        // a minimizer (components not pinned by any
                              // active row are set to zero)
    std::vector<int> active;  // rows of G active at the optimum with a
                              // strictly positive multiplier, ascending
};

/// Minimize c'x subject to G x <= h over free x.
///
/// Dense two-phase revised simplex applied to the dual program
/// min h'y s.t. G'y = -c, y >= 0, whose basis has only n = dim(x) columns.
/// Pivot selection is Dantzig's rule with lowest-index tie-breaking,
/// falling back to Bland's rule permanently once a degeneracy stall is
/// detected, which makes the procedure deterministic and cycle-free.
/// Throws SolverError if the iteration cap is hit.
LpResult solve_inequality_form(const Eigen::MatrixXd& G, const Eigen::VectorXd& h,
                               const Eigen::VectorXd& c);

}  // namespace maxcon::linprog

#endif  // MAXCON_LINPROG_HPP
