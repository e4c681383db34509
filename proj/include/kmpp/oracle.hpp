#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "kmpp/cost.hpp"
#include "kmpp/dataset.hpp"
#include "kmpp/lloyd.hpp"

namespace kmpp {

// Exhaustive ground truth for small instances.

inline constexpr std::size_t kMaxEnumerationPoints = 12;
inline constexpr std::size_t kMaxEnumerationCenters = 4;
inline constexpr std::size_t kMaxPartitionPoints = 12;
inline constexpr std::size_t kMaxPartitionCenters = 3;

/// One ordered k-means++ draw sequence with its chain probability.
struct SeedingOutcome {
    std::vector<std::size_t> indices;
    double probability;
    double cost;  ///< cost_empirical of the full center set
};

/**
 * Every ordered sequence of k distinct points reachable by k-means++ seeding,
 * in lexicographic index order, with probability
 *
 *     (1/m) * prod_{j>=2} D(mu_j, M_{[1:j-1]})^2 / sum_i D(x_i, M_{[1:j-1]})^2.
 *
 * Sequences of probability zero are omitted. Requires m <= 12 and k <= 4
 * (SizeLimitError otherwise); DegenerateInputError when fewer than k distinct
 * locations exist.
 */
std::vector<SeedingOutcome> enumerate_seedings(const Dataset& data, std::size_t k);

/// E[cost_empirical] over the seeding distribution. With `refine`, each
/// outcome is scored after Lloyd refinement instead.
double exact_expected_cost(const Dataset& data, std::size_t k, bool refine = false,
                           const LloydOptions& lloyd = {});

/// Element j-1 is the exact expected cost of the j-center seeding prefix, j = 1..k.
std::vector<double> exact_expected_prefix_costs(const Dataset& data, std::size_t k);

struct OptimalClustering {
    double best_cost;                         ///< normalized optimum with at most k clusters
    std::vector<std::size_t> best_partition;  ///< labels in first-appearance order
    CenterSet centers;                        ///< cluster means of best_partition
    std::vector<double> per_prefix;           ///< optimum with at most j clusters, j = 1..k
};

/// Exhaustive search over set partitions into at most k blocks, each block
/// scored at its mean. Requires m <= 12 and k <= 3.
OptimalClustering brute_force_optimum(const Dataset& data, std::size_t k);

/// The constant-factor bound 8 (ln k + 2).
double approximation_bound(std::size_t k);

struct ApproximationRatio {
    double ratio = 1.0;
    double expected_cost = 0.0;
    double optimal_cost = 0.0;
    /// Optimum is zero while the expected cost is not (or seeding is impossible);
    /// the ratio is then meaningless.
    bool degenerate = false;
};

/// exact_expected_cost / optimal cost; 0/0 counts as ratio 1.
ApproximationRatio approximation_ratio(const Dataset& data, std::size_t k);

/// CSV with header `indices,probability,cost`; indices are space-separated.
std::string outcomes_to_csv(const std::vector<SeedingOutcome>& outcomes);
void write_outcomes_csv(const std::vector<SeedingOutcome>& outcomes, const std::filesystem::path& path);

}  // namespace kmpp
