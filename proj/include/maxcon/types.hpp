// SPDX-License-Identifier: Apache-2.0

#ifndef MAXCON_TYPES_HPP
#define MAXCON_TYPES_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <vector>

namespace maxcon {

/// Data indices are 1-based and stable for the lifetime of an instance.
/// Index sets are kept canonical: sorted ascending, no duplicates.
using Index = std::int32_t;
using IndexSet = std::vector<Index>;

/// Sort + deduplicate in place.
inline void canonicalize(IndexSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline bool contains(const IndexSet& s, Index i) {
    return std::binary_search(s.begin(), s.end(), i);
}

/// Canonical s \ {i}. s must be canonical.
inline IndexSet erased(const IndexSet& s, Index i) {
    IndexSet out;
    out.reserve(s.size());
    for (Index j : s)
        if (j != i) out.push_back(j);
    return out;
}

/// Canonical s u {i}. s must be canonical.
inline IndexSet inserted(const IndexSet& s, Index i) {
    IndexSet out;
    out.reserve(s.size() + 1);
    auto it = std::lower_bound(s.begin(), s.end(), i);
    out.insert(out.end(), s.begin(), it);
    if (it == s.end() || *it != i) out.push_back(i);
    out.insert(out.end(), it, s.end());
    return out;
}

/// Canonical a \ b. Both inputs canonical.
inline IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
    return out;
}

struct IndexSetHash {
    std::size_t operator()(const IndexSet& s) const noexcept {
        // FNV-1a over the raw indices.
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (Index i : s) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(i));
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

/// Linear regression datum; residual |a'theta - b|.
struct LinearDatum {
    Eigen::VectorXd a;
    double b = 0.0;
};

/// Fractional (pseudo-convex) datum; residual ||A'theta - b||_inf / (c'theta - d0),
/// valid on the open halfspace c'theta - d0 > 0. Only the inf-norm is supported.
struct FractionalDatum {
    Eigen::MatrixXd A;  // d x m
    Eigen::VectorXd b;  // m
    Eigen::VectorXd c;  // d
    double d0 = 0.0;
};

enum class ResidualKind { Linear, Fractional };

/// Model parameters theta in R^d.
struct Model {
    Eigen::VectorXd theta;
};

/// Dataset with its residual family, dimension and inlier threshold.
/// Points are indexed 1..size(); all index sets refer to this numbering.
struct ProblemInstance {
    ResidualKind kind = ResidualKind::Linear;
    int dim = 0;
    double epsilon = 0.0;
    std::vector<LinearDatum> linear;
    std::vector<FractionalDatum> fractional;

    Index size() const {
        return static_cast<Index>(kind == ResidualKind::Linear ? linear.size()
                                                               : fractional.size());
    }

    IndexSet all_indices() const {
        IndexSet s(static_cast<std::size_t>(size()));
        for (Index i = 0; i < size(); ++i) s[static_cast<std::size_t>(i)] = i + 1;
        return s;
    }

    /// Throws std::invalid_argument when shapes or invariants are broken.
    void validate() const;
};

/// Residual of one datum under a model.
double residual(const Model& model, const LinearDatum& datum);

/// Residual of one fractional datum. Throws DomainViolation when
/// c'theta - d0 <= 0.
double residual(const Model& model, const FractionalDatum& datum);

/// Residual of point i (1-based) of an instance.
double residual(const ProblemInstance& instance, const Model& model, Index i);

/// Like residual() but returns +infinity instead of throwing when a
/// fractional point lies outside the model's domain. Violation sets treat
/// such points as violators.
double residual_or_infinity(const ProblemInstance& instance, const Model& model,
                            Index i);

/// Number of points with residual <= epsilon under the model.
Index consensus(const ProblemInstance& instance, const Model& model);

}  // namespace maxcon

#endif  // MAXCON_TYPES_HPP
