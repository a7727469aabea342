// SPDX-License-Identifier: Apache-2.0

#ifndef MAXCON_DATAIO_HPP
#define MAXCON_DATAIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "maxcon/types.hpp"

namespace maxcon {

/// Parameters of the synthetic robust-linear-regression generator.
///
/// A random model theta in [-1,1]^d is drawn, N regressors uniform on
/// [-1,1]^d are sampled, and the responses a_i'theta are perturbed: N - o
/// of them with uniform noise in [-inlier_noise, inlier_noise], the other o
/// with noise of magnitude in (outlier_noise_lo, outlier_noise_hi] and
/// random sign, resampled until the point's residual under the true model
/// exceeds epsilon.
struct GeneratorSpec {
    int n = 0;
    int d = 0;
    int o = 0;
    double epsilon = 0.1;
    double inlier_noise = 0.1;
    double outlier_noise_lo = 0.1;
    double outlier_noise_hi = 5.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// True partition of a generated instance.
struct GroundTruth {
    Model theta_true;
    IndexSet inlier_indices;
    IndexSet outlier_indices;
};

/// Deterministic under the seed. Point i is drawn from its own substream
/// (split tag 1000 + i), so the suite definition does not depend on
/// generation order; the outlier choice and the true model use substreams
/// of their own.
std::pair<ProblemInstance, GroundTruth> generate_synthetic(const GeneratorSpec& spec);

/// Instance files are JSON documents with fields {version, kind, dim,
/// epsilon, points, ground_truth?}. Numbers are written as decimals with 17
/// significant digits, so load(save(x)) reproduces x bit-exactly.
std::string serialize_instance(const ProblemInstance& instance,
                               const GroundTruth* ground_truth = nullptr);

struct LoadedInstance {
    ProblemInstance instance;
    std::optional<GroundTruth> ground_truth;
};

/// Throws ParseError (naming the offending field) or DimensionMismatch.
LoadedInstance parse_instance(const std::string& text);

void save_instance(const std::string& path, const ProblemInstance& instance,
                   const GroundTruth* ground_truth = nullptr);
LoadedInstance load_instance(const std::string& path);

}  // namespace maxcon

#endif  // MAXCON_DATAIO_HPP
