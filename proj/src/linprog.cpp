// SPDX-License-Identifier: Apache-2.0

#include "maxcon/linprog.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "maxcon/errors.hpp"

namespace maxcon::linprog {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr double kValueTol = 1e-10;
constexpr int kStallLimit = 30;

// Dual program state. Columns 0..m-1 are the rows of G; columns m..m+n-1
// are the artificials of phase 1 (unit columns after row sign-flips).
struct Tableau {
    const Eigen::MatrixXd& G;  // m x n
    int m, n;
    Eigen::VectorXd rhs;            // b = -c, with flipped rows positive
    std::vector<signed char> flip;  // row sign applied to G' and rhs
    std::vector<int> basis;         // n column indices
    std::vector<char> in_basis;     // per column
    std::vector<char> banned;       // artificials that left the basis

    Eigen::VectorXd column(int k) const {
        if (k >= m) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            e[k - m] = 1.0;
            return e;
        }
        Eigen::VectorXd col = G.row(k).transpose();
        for (int i = 0; i < n; ++i)
            if (flip[i] < 0) col[i] = -col[i];
        return col;
    }

    Eigen::MatrixXd basis_matrix() const {
        Eigen::MatrixXd B(n, n);
        for (int j = 0; j < n; ++j) B.col(j) = column(basis[j]);
        return B;
    }
};

// One simplex run with the given column costs. `allow_artificial_entering`
// is true only in phase 1. Returns false when the problem is unbounded in
// the current costs (no leaving candidate for an improving column).
bool run_simplex(Tableau& t, const Eigen::VectorXd& cost, bool allow_artificial_entering,
                 long& iterations_left) {
    const int m = t.m;
    const int n = t.n;
    bool bland = false;
    int stall = 0;

    Eigen::VectorXd flipped_pi(n);
    while (true) {
        if (--iterations_left < 0) {
            if (const char* path = std::getenv("MAXCON_LP_DUMP")) {
                FILE* f = std::fopen(path, "w");
                if (f) {
                    std::fprintf(f, "%d %d\n", t.m, t.n);
                    for (int r = 0; r < t.m; ++r) {
                        for (int c2 = 0; c2 < t.n; ++c2) std::fprintf(f, "%.17g ", t.G(r, c2));
                        std::fprintf(f, "\n");
                    }
                    std::fclose(f);
                }
            }
            throw SolverError("simplex iteration limit exceeded");
        }

        Eigen::MatrixXd B = t.basis_matrix();
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        Eigen::VectorXd yb = lu.solve(t.rhs);

        Eigen::VectorXd cb(n);
        for (int j = 0; j < n; ++j) cb[j] = cost[t.basis[j]];
        Eigen::VectorXd pi = Eigen::PartialPivLU<Eigen::MatrixXd>(B.transpose()).solve(cb);

        // Reduced costs of the real columns in one pass: cost - G~ * pi,
        // where G~ carries the row flips.
        for (int i = 0; i < n; ++i) flipped_pi[i] = t.flip[i] < 0 ? -pi[i] : pi[i];
        Eigen::VectorXd red = cost.head(m) - t.G * flipped_pi;

        int entering = -1;
        double best = -kReducedCostTol;
        for (int k = 0; k < m + n; ++k) {
            if (t.in_basis[k]) continue;
            if (k >= m && (!allow_artificial_entering || t.banned[k - m])) continue;
            const double rk = k < m ? red[k] : cost[k] - pi[k - m];
            if (rk < best - 0.0) {
                if (bland) {
                    if (rk < -kReducedCostTol) {
                        entering = k;
                        break;
                    }
                } else if (rk < best) {
                    best = rk;
                    entering = k;
                }
            } else if (bland && rk < -kReducedCostTol) {
                entering = k;
                break;
            }
        }
        if (entering < 0) return true;  // optimal for these costs

        Eigen::VectorXd w = lu.solve(t.column(entering));

        // Exact minimum ratio, then the lowest basic index among exact ties.
        // Any slack here lets pivots walk basic values negative and stall.
        int leaving_pos = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (w[j] > kPivotTol) {
                const double ratio = std::max(yb[j], 0.0) / w[j];
                if (ratio < best_ratio) {
                    best_ratio = ratio;
                    leaving_pos = j;
                } else if (ratio == best_ratio && leaving_pos >= 0 &&
                           t.basis[j] < t.basis[leaving_pos]) {
                    leaving_pos = j;
                }
            }
        }
        if (leaving_pos < 0) return false;  // unbounded direction

        if (best_ratio <= kValueTol) {
            if (++stall > kStallLimit) bland = true;
        } else {
            stall = 0;
        }

        const int leaving = t.basis[leaving_pos];
        t.in_basis[leaving] = 0;
        if (leaving >= m) t.banned[leaving - m] = 1;
        t.basis[leaving_pos] = entering;
        t.in_basis[entering] = 1;
    }
}

}  // namespace

namespace {
void dump_lp(const Eigen::MatrixXd& G, const Eigen::VectorXd& h, const Eigen::VectorXd& c) {
    const char* path = std::getenv("MAXCON_LP_DUMP");
    if (!path) return;
    FILE* f = std::fopen(path, "w");
    if (!f) return;
    std::fprintf(f, "%ld %ld\n", long(G.rows()), long(G.cols()));
    for (long r = 0; r < G.rows(); ++r) {
        for (long k = 0; k < G.cols(); ++k) std::fprintf(f, "%.17g ", G(r, k));
        std::fprintf(f, "%.17g\n", h[r]);
    }
    for (long k = 0; k < G.cols(); ++k) std::fprintf(f, "%.17g ", c[k]);
    std::fprintf(f, "\n");
    std::fclose(f);
}
}  // namespace

LpResult solve_inequality_form(const Eigen::MatrixXd& G, const Eigen::VectorXd& h,
                               const Eigen::VectorXd& c) {
    const int m = static_cast<int>(G.rows());
    const int n = static_cast<int>(G.cols());
    LpResult result;
    try {

    if (m == 0) {
        // No constraints: optimal at the origin iff the objective is zero.
        result.x = Eigen::VectorXd::Zero(n);
        result.status =
            c.lpNorm<Eigen::Infinity>() <= kReducedCostTol ? LpStatus::Optimal : LpStatus::Unbounded;
        return result;
    }

    Tableau t{G, m, n, -c, std::vector<signed char>(static_cast<std::size_t>(n), 1),
              std::vector<int>(static_cast<std::size_t>(n)),
              std::vector<char>(static_cast<std::size_t>(m + n), 0),
              std::vector<char>(static_cast<std::size_t>(n), 0)};
    for (int i = 0; i < n; ++i) {
        if (t.rhs[i] < 0.0) {
            t.rhs[i] = -t.rhs[i];
            t.flip[i] = -1;
        }
        t.basis[i] = m + i;
        t.in_basis[m + i] = 1;
    }

    long iterations_left = 20000 + 200L * (m + n);

    // Phase 1: minimize the artificial mass.
    Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(m + n);
    phase1_cost.tail(n).setOnes();
    run_simplex(t, phase1_cost, true, iterations_left);
    {
        Eigen::VectorXd yb =
            Eigen::PartialPivLU<Eigen::MatrixXd>(t.basis_matrix()).solve(t.rhs);
        double artificial_mass = 0.0;
        for (int j = 0; j < n; ++j)
            if (t.basis[j] >= m) artificial_mass += std::max(yb[j], 0.0);
        if (artificial_mass > 1e-7 * std::max(1.0, t.rhs.lpNorm<Eigen::Infinity>())) {
            result.status = LpStatus::Unbounded;  // dual infeasible
            result.x = Eigen::VectorXd::Zero(n);
            return result;
        }
    }

    // Pivot zero-level artificials out of the basis where a real column can
    // replace them; rows spanned by no real column keep their artificial,
    // which pins the matching component of x to zero.
    for (int j = 0; j < n; ++j) {
        if (t.basis[j] < m) continue;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(t.basis_matrix());
        int replacement = -1;
        for (int k = 0; k < m; ++k) {
            if (t.in_basis[k]) continue;
            Eigen::VectorXd w = lu.solve(t.column(k));
            if (std::abs(w[j]) > 1e-7) {
                replacement = k;
                break;
            }
        }
        if (replacement >= 0) {
            t.in_basis[t.basis[j]] = 0;
            t.basis[j] = replacement;
            t.in_basis[replacement] = 1;
        }
    }

    // Phase 2: minimize h'y. Artificials may only leave.
    Eigen::VectorXd phase2_cost = Eigen::VectorXd::Zero(m + n);
    phase2_cost.head(m) = h;
    const bool bounded = run_simplex(t, phase2_cost, false, iterations_left);
    if (!bounded) {
        result.status = LpStatus::Infeasible;  // dual unbounded
        result.x = Eigen::VectorXd::Zero(n);
        return result;
    }

    // Recover the primal point from the simplex multipliers and the active
    // rows from the positive basic variables.
    Eigen::MatrixXd B = t.basis_matrix();
    Eigen::VectorXd cb(n);
    for (int j = 0; j < n; ++j) cb[j] = phase2_cost[t.basis[j]];
    Eigen::VectorXd pi = Eigen::PartialPivLU<Eigen::MatrixXd>(B.transpose()).solve(cb);
    result.x.resize(n);
    for (int i = 0; i < n; ++i) result.x[i] = t.flip[i] < 0 ? -pi[i] : pi[i];

    Eigen::VectorXd yb = Eigen::PartialPivLU<Eigen::MatrixXd>(B).solve(t.rhs);
    for (int j = 0; j < n; ++j)
        if (t.basis[j] < m && yb[j] > kValueTol) result.active.push_back(t.basis[j]);
    std::sort(result.active.begin(), result.active.end());

    result.objective = c.dot(result.x);
    result.status = LpStatus::Optimal;
    return result;
    } catch (const SolverError&) {
        dump_lp(G, h, c);
        throw;
    }
}

}  // namespace maxcon::linprog
