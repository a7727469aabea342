// SPDX-License-Identifier: Apache-2.0

#ifndef MAXCON_TESTS_TEST_UTIL_HPP
#define MAXCON_TESTS_TEST_UTIL_HPP

#include <Eigen/Dense>
#include <initializer_list>
#include <limits>
#include <vector>

#include "maxcon/types.hpp"

namespace maxcon::testutil {

inline ProblemInstance make_linear_instance(int dim, double epsilon,
                                            std::vector<std::pair<std::vector<double>, double>> pts) {
    ProblemInstance inst;
    inst.kind = ResidualKind::Linear;
    inst.dim = dim;
    inst.epsilon = epsilon;
    for (auto& [a, b] : pts) {
        LinearDatum p;
        p.a = Eigen::Map<Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
        p.b = b;
        inst.linear.push_back(std::move(p));
    }
    inst.validate();
    return inst;
}

/// d = 1 location instance: every point has a = [1], b = value.
inline ProblemInstance line_instance(double epsilon, std::vector<double> values) {
    std::vector<std::pair<std::vector<double>, double>> pts;
    for (double v : values) pts.push_back({{1.0}, v});
    return make_linear_instance(1, epsilon, std::move(pts));
}

/// Brute-force minimax value by enumerating vertices of the bounded
/// formulation min gamma s.t. +-(a'theta - b) <= gamma (+ forced rows at
/// epsilon). Independent of the simplex path used by the solver.
inline double chebyshev_vertex_value(const ProblemInstance& inst, const IndexSet& subset,
                                     const IndexSet& forced = {}) {
    const int d = inst.dim;
    const int n = d + 1;
    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> rhs;
    for (Index i : subset) {
        const auto& p = inst.linear[static_cast<std::size_t>(i - 1)];
        Eigen::RowVectorXd r(n);
        r.head(d) = p.a.transpose();
        r[d] = -1.0;
        rows.push_back(r);
        rhs.push_back(p.b);
        r.head(d) = -p.a.transpose();
        rows.push_back(r);
        rhs.push_back(-p.b);
    }
    for (Index j : forced) {
        const auto& p = inst.linear[static_cast<std::size_t>(j - 1)];
        Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
        r.head(d) = p.a.transpose();
        rows.push_back(r);
        rhs.push_back(p.b + inst.epsilon);
        r.head(d) = -p.a.transpose();
        rows.push_back(r);
        rhs.push_back(-p.b + inst.epsilon);
    }
    const int m = static_cast<int>(rows.size());
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> pick(static_cast<std::size_t>(n));
    auto recurse = [&](auto&& self, int start, int depth) -> void {
        if (depth == n) {
            Eigen::MatrixXd A(n, n);
            Eigen::VectorXd b(n);
            for (int j = 0; j < n; ++j) {
                A.row(j) = rows[static_cast<std::size_t>(pick[static_cast<std::size_t>(j)])];
                b[j] = rhs[static_cast<std::size_t>(pick[static_cast<std::size_t>(j)])];
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
            if (!lu.isInvertible()) return;
            Eigen::VectorXd x = lu.solve(b);
            if (x[d] < -1e-10) return;
            for (int k = 0; k < m; ++k) {
                if (rows[static_cast<std::size_t>(k)] * x - rhs[static_cast<std::size_t>(k)] >
                    1e-8 * std::max(1.0, std::abs(x[d])))
                    return;
            }
            best = std::min(best, std::max(x[d], 0.0));
            return;
        }
        for (int k = start; k <= m - (n - depth); ++k) {
            pick[static_cast<std::size_t>(depth)] = k;
            self(self, k + 1, depth + 1);
        }
    };
    recurse(recurse, 0, 0);
    return best;
}

}  // namespace maxcon::testutil

#endif  // MAXCON_TESTS_TEST_UTIL_HPP
