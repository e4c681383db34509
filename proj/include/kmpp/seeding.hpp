#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "kmpp/cost.hpp"
#include "kmpp/dataset.hpp"
#include "kmpp/rng.hpp"

namespace kmpp {

enum class Strategy {
    plusplus,        ///< k-means++: D^2-weighted draws
    uniform_random,  ///< k-means-random: uniform draws without replacement
};

std::string_view to_string(Strategy strategy);

/// Accepts "plusplus" / "kmeans++" and "uniform_random" / "random".
Strategy parse_strategy(std::string_view name);

/// Seeded centers together with the dataset indices they were copied from, in draw order.
struct Seeding {
    CenterSet centers;
    std::vector<std::size_t> indices;
};

/**
 * k-means++ seeding.
 *
 * The first center is uniform over the m points. Each later center is point i
 * with probability D(x_i, M)^2 / sum_l D(x_l, M)^2, where M holds the centers
 * drawn so far; a running min-distance array keeps this O(m k). Already-chosen
 * points have zero weight, so no point is drawn twice.
 *
 * Throws ValidationError if k is 0 or exceeds m, and DegenerateInputError if
 * the dataset has fewer than k distinct locations.
 */
Seeding seed_plusplus(const Dataset& data, std::size_t k, Rng& rng);

/// k distinct indices drawn uniformly without replacement (partial Fisher-Yates).
Seeding seed_uniform(const Dataset& data, std::size_t k, Rng& rng);

Seeding seed(const Dataset& data, std::size_t k, Strategy strategy, Rng& rng);

}  // namespace kmpp
