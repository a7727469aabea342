// SPDX-License-Identifier: Apache-2.0

#ifndef MAXCON_ORACLE_HPP
#define MAXCON_ORACLE_HPP

#include <cstdint>
#include <optional>

#include "maxcon/types.hpp"

namespace maxcon {

/// Ground-truth answer produced by exhaustive basis enumeration.
struct OracleResult {
    Index consensus = 0;
    Model witness_model;
    IndexSet max_feasible_set;
};

/// Exact maximum consensus by enumerating every candidate basis (subsets of
/// size <= d+1), keeping the feasible fits and scoring their consensus.
/// Intended for desk-scale inputs; throws InstanceTooLarge when the subset
/// count exceeds the guard (the default guard admits N <= 25 at d <= 3).
OracleResult enumerate_optimal(const ProblemInstance& instance);

/// Largest feasible subset of `coverage` that contains `forced`, found by
/// the same enumeration. Empty optional when no candidate covers `forced`.
std::optional<OracleResult> max_feasible_subset(const ProblemInstance& instance,
                                                const IndexSet& coverage,
                                                const IndexSet& forced);

/// h*(coverage | forced): the exact minimum number of points that must be
/// removed from `coverage` so that the rest is feasible with `forced` kept
/// feasible. Empty optional is the +infinity sentinel (forced alone is
/// infeasible). forced = {} gives plain h*.
std::optional<int> min_removal(const ProblemInstance& instance, const IndexSet& coverage,
                               const IndexSet& forced);

/// True when h* * phi >= |C(B)| - 1, i.e. the true outlier rate is high
/// enough that the single-point detection bound can never fire.
inline bool lemma1_diagnostic(std::size_t coverage_size, int hstar, double phi) {
    return static_cast<double>(hstar) * phi >=
           static_cast<double>(coverage_size) - 1.0;
}

/// LO-RANSAC baseline: hypothesize-verify over minimal samples of size d
/// with an inner minimax re-fit on every new best consensus set. The global
/// minimax fit is evaluated as an additional starting hypothesis. Fully
/// deterministic under `seed`.
OracleResult lo_ransac(const ProblemInstance& instance, int iterations,
                       std::uint64_t seed);

}  // namespace maxcon

#endif  // MAXCON_ORACLE_HPP
