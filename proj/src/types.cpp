// SPDX-License-Identifier: Apache-2.0

#include "maxcon/types.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "maxcon/errors.hpp"

namespace maxcon {

namespace {

bool all_finite(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    return m.allFinite();
}

}  // namespace

void ProblemInstance::validate() const {
    if (dim <= 0) throw std::invalid_argument("instance dimension must be positive");
    if (size() < 1) throw std::invalid_argument("instance must contain at least one point");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("epsilon must be finite and nonnegative");
    if (kind == ResidualKind::Linear) {
        if (!fractional.empty())
            throw std::invalid_argument("linear instance carries fractional data");
        for (const auto& p : linear) {
            if (p.a.size() != dim)
                throw std::invalid_argument("regressor length disagrees with dimension");
            if (!all_finite(p.a) || !std::isfinite(p.b))
                throw std::invalid_argument("non-finite entry in linear datum");
        }
    } else {
        if (!linear.empty())
            throw std::invalid_argument("fractional instance carries linear data");
        for (const auto& p : fractional) {
            if (p.A.rows() != dim || p.c.size() != dim)
                throw std::invalid_argument("fractional datum shape disagrees with dimension");
            if (p.A.cols() != p.b.size() || p.b.size() < 1)
                throw std::invalid_argument("fractional datum A/b shapes disagree");
            if (!all_finite(p.A) || !all_finite(p.b) || !all_finite(p.c) ||
                !std::isfinite(p.d0))
                throw std::invalid_argument("non-finite entry in fractional datum");
        }
    }
}

double residual(const Model& model, const LinearDatum& datum) {
    return std::abs(datum.a.dot(model.theta) - datum.b);
}

double residual(const Model& model, const FractionalDatum& datum) {
    const double denom = datum.c.dot(model.theta) - datum.d0;
    if (!(denom > 0.0))
        throw DomainViolation("fractional residual evaluated with c'theta - d0 <= 0");
    return (datum.A.transpose() * model.theta - datum.b).lpNorm<Eigen::Infinity>() / denom;
}

double residual(const ProblemInstance& instance, const Model& model, Index i) {
    const auto k = static_cast<std::size_t>(i - 1);
    if (instance.kind == ResidualKind::Linear) return residual(model, instance.linear[k]);
    return residual(model, instance.fractional[k]);
}

double residual_or_infinity(const ProblemInstance& instance, const Model& model,
                            Index i) {
    const auto k = static_cast<std::size_t>(i - 1);
    if (instance.kind == ResidualKind::Linear) return residual(model, instance.linear[k]);
    const auto& datum = instance.fractional[k];
    const double denom = datum.c.dot(model.theta) - datum.d0;
    if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
    return (datum.A.transpose() * model.theta - datum.b).lpNorm<Eigen::Infinity>() / denom;
}

Index consensus(const ProblemInstance& instance, const Model& model) {
    Index count = 0;
    for (Index i = 1; i <= instance.size(); ++i)
        if (residual_or_infinity(instance, model, i) <= instance.epsilon) ++count;
    return count;
}

}  // namespace maxcon
