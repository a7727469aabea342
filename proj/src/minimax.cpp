// SPDX-License-Identifier: Apache-2.0

#include "maxcon/minimax.hpp"

#include <algorithm>
#include <cmath>

#include "maxcon/errors.hpp"
#include "maxcon/linprog.hpp"

namespace maxcon {

namespace {

using linprog::LpResult;
using linprog::LpStatus;

// Values below this (relative to the response scale) are treated as an
// exact interpolation, which by convention has an empty basis.
double interpolation_tolerance(const ProblemInstance& instance, const IndexSet& subset) {
    double scale = 1.0;
    if (instance.kind == ResidualKind::Linear) {
        for (Index i : subset)
            scale = std::max(scale, std::abs(instance.linear[static_cast<std::size_t>(i - 1)].b));
    }
    return 1e-12 * scale;
}

// ---------------------------------------------------------------------------
// Linear residuals: one LP in (theta, gamma).
// ---------------------------------------------------------------------------

// Rows: per objective point the pair +-(a'theta - b) <= gamma, then per
// forced point the pair +-(a'theta - b) <= epsilon. Objective rows first so
// that low data indices win pivot tie-breaks.
struct LinearLp {
    Eigen::MatrixXd G;
    Eigen::VectorXd h;
    Eigen::VectorXd c;
    std::vector<Index> row_point;  // objective rows -> data index; forced rows -> 0
};

LinearLp build_linear_lp(const ProblemInstance& instance, const IndexSet& subset,
                         const IndexSet& forced) {
    const int d = instance.dim;
    const int rows = 2 * static_cast<int>(subset.size() + forced.size());
    LinearLp lp;
    lp.G.setZero(rows, d + 1);
    lp.h.resize(rows);
    lp.c = Eigen::VectorXd::Zero(d + 1);
    lp.c[d] = 1.0;
    lp.row_point.assign(static_cast<std::size_t>(rows), 0);

    int r = 0;
    for (Index i : subset) {
        const auto& p = instance.linear[static_cast<std::size_t>(i - 1)];
        lp.G.row(r).head(d) = p.a;
        lp.G(r, d) = -1.0;
        lp.h[r] = p.b;
        lp.row_point[static_cast<std::size_t>(r)] = i;
        ++r;
        lp.G.row(r).head(d) = -p.a;
        lp.G(r, d) = -1.0;
        lp.h[r] = -p.b;
        lp.row_point[static_cast<std::size_t>(r)] = i;
        ++r;
    }
    for (Index j : forced) {
        const auto& p = instance.linear[static_cast<std::size_t>(j - 1)];
        lp.G.row(r).head(d) = p.a;
        lp.h[r] = p.b + instance.epsilon;
        ++r;
        lp.G.row(r).head(d) = -p.a;
        lp.h[r] = -p.b + instance.epsilon;
        ++r;
    }
    return lp;
}

struct LinearSolve {
    bool forced_infeasible = false;
    double value = 0.0;
    Model model;
    IndexSet active_points;  // objective points with a positive multiplier
};

std::optional<LinearSolve> solve_linear_lp(const ProblemInstance& instance,
                                           const IndexSet& subset, const IndexSet& forced) {
    const int d = instance.dim;
    if (subset.empty()) {
        // f(empty) = 0 by convention; still reject infeasible forced sets.
        if (!forced.empty()) {
            auto probe = solve_linear_lp(instance, forced, {});
            if (!probe ||
                probe->value > instance.epsilon + active_tolerance(instance.epsilon))
                return std::nullopt;
            LinearSolve out;
            out.model.theta = probe->model.theta;
            return out;
        }
        LinearSolve out;
        out.model.theta = Eigen::VectorXd::Zero(d);
        return out;
    }

    LinearLp lp = build_linear_lp(instance, subset, forced);
    LpResult res = linprog::solve_inequality_form(lp.G, lp.h, lp.c);
    if (res.status == LpStatus::Infeasible) return std::nullopt;
    if (res.status != LpStatus::Optimal)
        throw SolverError("minimax LP unexpectedly unbounded");

    LinearSolve out;
    out.model.theta = res.x.head(d);
    out.value = std::max(res.x[d], 0.0);
    for (int row : res.active) {
        const Index i = lp.row_point[static_cast<std::size_t>(row)];
        if (i != 0) out.active_points.push_back(i);
    }
    canonicalize(out.active_points);
    return out;
}

std::optional<double> linear_value(const ProblemInstance& instance, const IndexSet& subset,
                                   const IndexSet& forced) {
    auto s = solve_linear_lp(instance, subset, forced);
    if (!s) return std::nullopt;
    return s->value;
}

// ---------------------------------------------------------------------------
// Fractional residuals (inf-norm): bisection on gamma with a feasibility LP
// per step. Each test maximizes an interior margin s over (theta, s).
// ---------------------------------------------------------------------------

struct FractionalLpBuilder {
    const ProblemInstance& instance;
    int d;
    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> rhs;

    explicit FractionalLpBuilder(const ProblemInstance& inst)
        : instance(inst), d(inst.dim) {}

    void add_domain_row(Index i, bool with_margin) {
        const auto& p = instance.fractional[static_cast<std::size_t>(i - 1)];
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(d + 1);
        row.head(d) = -p.c.transpose();
        if (with_margin) row[d] = 1.0;
        rows.push_back(row);
        rhs.push_back(-p.d0);
    }

    // +-(A'theta - b)_l <= bound * (c'theta - d0) [- margin]
    void add_residual_rows(Index i, double bound, bool with_margin) {
        const auto& p = instance.fractional[static_cast<std::size_t>(i - 1)];
        const int m = static_cast<int>(p.b.size());
        for (int l = 0; l < m; ++l) {
            for (double sign : {1.0, -1.0}) {
                Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(d + 1);
                row.head(d) = sign * p.A.col(l).transpose() - bound * p.c.transpose();
                if (with_margin) row[d] = 1.0;
                rows.push_back(row);
                rhs.push_back(sign * p.b[l] - bound * p.d0);
            }
        }
    }

    void add_margin_cap() {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(d + 1);
        row[d] = 1.0;
        rows.push_back(row);
        rhs.push_back(1.0);
    }

    LpResult solve() const {
        const int m = static_cast<int>(rows.size());
        Eigen::MatrixXd G(m, d + 1);
        Eigen::VectorXd h(m);
        for (int r = 0; r < m; ++r) {
            G.row(r) = rows[static_cast<std::size_t>(r)];
            h[r] = rhs[static_cast<std::size_t>(r)];
        }
        Eigen::VectorXd c = Eigen::VectorXd::Zero(d + 1);
        c[d] = -1.0;  // maximize the margin
        return linprog::solve_inequality_form(G, h, c);
    }
};

// Maximize the interior margin of "max residual over subset <= gamma" with
// the forced epsilon-constraints as hard rows. Positive margin means gamma
// is strictly achievable.
LpResult fractional_margin_lp(const ProblemInstance& instance, const IndexSet& subset,
                              const IndexSet& forced, double gamma, bool with_residuals) {
    FractionalLpBuilder b(instance);
    for (Index i : subset) b.add_domain_row(i, true);
    for (Index j : forced) b.add_domain_row(j, true);
    if (with_residuals)
        for (Index i : subset) b.add_residual_rows(i, gamma, true);
    for (Index j : forced) b.add_residual_rows(j, instance.epsilon, false);
    b.add_margin_cap();
    return b.solve();
}

struct FractionalSolve {
    bool forced_infeasible = false;
    bool domain_empty = false;
    double value = 0.0;
    Model model;
    IndexSet active_points;
};

FractionalSolve solve_fractional(const ProblemInstance& instance, const IndexSet& subset,
                                 const IndexSet& forced) {
    FractionalSolve out;
    const int d = instance.dim;

    // Interior point of the domain that satisfies the forced constraints.
    LpResult start = fractional_margin_lp(instance, subset, forced, 0.0, false);
    const double margin = start.status == LpStatus::Optimal ? -start.objective : -1.0;
    if (start.status == LpStatus::Infeasible || margin <= 1e-9) {
        if (forced.empty())
            out.domain_empty = true;
        else
            out.forced_infeasible = true;
        return out;
    }
    Model theta{start.x.head(d)};
    if (subset.empty()) {
        out.model = theta;
        return out;
    }

    double hi = 0.0;
    for (Index i : subset)
        hi = std::max(hi, residual(theta, instance.fractional[static_cast<std::size_t>(i - 1)]));
    if (hi <= 0.0) {
        out.model = theta;
        return out;
    }
    double lo = 0.0;

    Model best = theta;
    while (hi - lo > 1e-9 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        LpResult probe = fractional_margin_lp(instance, subset, forced, mid, true);
        if (probe.status == LpStatus::Optimal && -probe.objective > 1e-12) {
            hi = mid;
            best.theta = probe.x.head(d);
        } else {
            lo = mid;
        }
    }
    out.value = hi;
    out.model = best;
    const double slack = 3e-9 * std::max(1.0, hi);
    for (Index i : subset) {
        const double r = residual_or_infinity(instance, best, i);
        if (r >= out.value - slack) out.active_points.push_back(i);
    }
    canonicalize(out.active_points);
    return out;
}

std::optional<double> fractional_value(const ProblemInstance& instance,
                                       const IndexSet& subset, const IndexSet& forced) {
    FractionalSolve s = solve_fractional(instance, subset, forced);
    if (s.forced_infeasible) return std::nullopt;
    if (s.domain_empty) throw DomainEmpty("no model with positive denominators on the subset");
    return s.value;
}

std::optional<double> value_of(const ProblemInstance& instance, const IndexSet& subset,
                               const IndexSet& forced) {
    if (instance.kind == ResidualKind::Linear) return linear_value(instance, subset, forced);
    return fractional_value(instance, subset, forced);
}

// ---------------------------------------------------------------------------
// Support-set extraction.
// ---------------------------------------------------------------------------

// Tolerance for "the value did not drop" used when testing removals. For
// fractional solves the value itself carries the bisection tolerance, so the
// comparison must be strictly looser than it.
double same_value_slack(const ProblemInstance& instance, double f) {
    const double base = active_tolerance(f);
    return instance.kind == ResidualKind::Linear ? base : 5.0 * base;
}

// Greedy minimal-basis extraction: members are dropped (highest index
// first) whenever removing them keeps the constrained value; by
// monotonicity one pass yields a Definition-1 basis, and dropping from the
// top keeps the lexicographically smallest active set among ties.
IndexSet refine_basis(const ProblemInstance& instance, const IndexSet& candidates,
                      const IndexSet& forced, double f) {
    const double slack = same_value_slack(instance, f);
    IndexSet basis = candidates;
    for (std::size_t pos = basis.size(); pos-- > 0;) {
        IndexSet trial = basis;
        trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(pos));
        auto fv = value_of(instance, trial, forced);
        if (fv && *fv >= f - slack) basis = std::move(trial);
    }
    return basis;
}

MinimaxSolution finish_solution(const ProblemInstance& instance, const IndexSet& subset,
                                const IndexSet& forced, double value, Model model,
                                IndexSet active_points) {
    MinimaxSolution sol;
    sol.value = value;
    sol.model = std::move(model);

    if (value <= interpolation_tolerance(instance, subset)) {
        sol.value = 0.0;  // exactly interpolable; empty basis by convention
        return sol;
    }

    const double slack = same_value_slack(instance, value);
    auto candidate_value = value_of(instance, active_points, forced);
    if (active_points.empty() || !candidate_value || *candidate_value < value - slack) {
        // Multiplier-based candidates lost a point to numerical dust; fall
        // back to every residual-active point.
        active_points.clear();
        for (Index i : subset) {
            const double r = residual_or_infinity(instance, sol.model, i);
            if (r >= value - slack) active_points.push_back(i);
        }
    }
    sol.basis = refine_basis(instance, active_points, forced, value);
    return sol;
}

MinimaxSolution solve_impl(const ProblemInstance& instance, const IndexSet& subset,
                           const IndexSet& forced) {
    if (instance.kind == ResidualKind::Linear) {
        auto s = solve_linear_lp(instance, subset, forced);
        if (!s) throw ConstraintsInfeasible("forced set admits no model");
        return finish_solution(instance, subset, forced, s->value, std::move(s->model),
                               std::move(s->active_points));
    }
    FractionalSolve s = solve_fractional(instance, subset, forced);
    if (s.forced_infeasible) throw ConstraintsInfeasible("forced set admits no model");
    if (s.domain_empty) throw DomainEmpty("no model with positive denominators on the subset");
    return finish_solution(instance, subset, forced, s.value, std::move(s.model),
                           std::move(s.active_points));
}

}  // namespace

MinimaxSolution solve_minimax(const ProblemInstance& instance, const IndexSet& subset) {
    return solve_impl(instance, subset, {});
}

MinimaxSolution solve_minimax_constrained(const ProblemInstance& instance,
                                          const IndexSet& subset, const IndexSet& forced) {
    return solve_impl(instance, subset, forced);
}

std::optional<MinimaxSolution> try_solve_minimax_constrained(
    const ProblemInstance& instance, const IndexSet& subset, const IndexSet& forced) {
    try {
        return solve_impl(instance, subset, forced);
    } catch (const ConstraintsInfeasible&) {
        return std::nullopt;
    }
}

std::optional<double> minimax_value(const ProblemInstance& instance, const IndexSet& subset,
                                    const IndexSet& forced) {
    auto v = value_of(instance, subset, forced);
    if (v && *v <= interpolation_tolerance(instance, subset)) return 0.0;
    return v;
}

IndexSet violation_set(const ProblemInstance& instance, const MinimaxSolution& solution) {
    IndexSet v;
    const double cut = solution.value + active_tolerance(solution.value);
    for (Index i = 1; i <= instance.size(); ++i)
        if (residual_or_infinity(instance, solution.model, i) > cut) v.push_back(i);
    return v;
}

}  // namespace maxcon
