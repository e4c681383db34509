#include "kmpp/seeding.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>

#include <fmt/format.h>

#include "kmpp/error.hpp"

namespace kmpp {

namespace {

void check_k(const Dataset& data, std::size_t k) {
    if (k == 0) {
        throw ValidationError("k must be positive");
    }
    if (k > data.size()) {
        throw ValidationError(fmt::format("k = {} exceeds the {} available points", k, data.size()));
    }
}

}  // namespace

std::string_view to_string(Strategy strategy) {
    switch (strategy) {
    case Strategy::plusplus:
        return "plusplus";
    case Strategy::uniform_random:
        return "uniform_random";
    }
    return "unknown";
}

Strategy parse_strategy(std::string_view name) {
    if (name == "plusplus" || name == "kmeans++") {
        return Strategy::plusplus;
    }
    if (name == "uniform_random" || name == "random") {
        return Strategy::uniform_random;
    }
    throw ValidationError(fmt::format("unknown seeding strategy '{}'", name));
}

Seeding seed_plusplus(const Dataset& data, std::size_t k, Rng& rng) {
    check_k(data, k);
    const std::size_t m = data.size();
    Seeding out{CenterSet(data.dim()), {}};
    out.indices.reserve(k);

    std::size_t chosen = rng.index(m);
    std::vector<double> min_d2(m);
    for (std::size_t i = 0; i < m; ++i) {
        min_d2[i] = squared_distance(data.point(i), data.point(chosen));
    }
    out.indices.push_back(chosen);
    out.centers.push_back(data.point(chosen));

    std::vector<double> cumulative(m);
    for (std::size_t j = 1; j < k; ++j) {
        std::partial_sum(min_d2.begin(), min_d2.end(), cumulative.begin());
        const double total = cumulative.back();
        if (!(total > 0.0)) {
            throw DegenerateInputError(
                fmt::format("cannot draw {} centers: the {} points occupy only {} distinct locations", k, m,
                            data.distinct_locations()));
        }
        const double u = rng.uniform() * total;
        // First index whose cumulative mass exceeds u; zero-mass points never qualify.
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) {
            // Rounding pushed u onto the total; take the last point with mass.
            it = std::prev(cumulative.end());
            while (it != cumulative.begin() && min_d2[it - cumulative.begin()] == 0.0) {
                --it;
            }
        }
        chosen = static_cast<std::size_t>(it - cumulative.begin());
        out.indices.push_back(chosen);
        out.centers.push_back(data.point(chosen));
        for (std::size_t i = 0; i < m; ++i) {
            min_d2[i] = std::min(min_d2[i], squared_distance(data.point(i), data.point(chosen)));
        }
    }
    return out;
}

Seeding seed_uniform(const Dataset& data, std::size_t k, Rng& rng) {
    check_k(data, k);
    const std::size_t m = data.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Seeding out{CenterSet(data.dim()), {}};
    out.indices.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t r = j + rng.index(m - j);
        std::swap(order[j], order[r]);
        out.indices.push_back(order[j]);
        out.centers.push_back(data.point(order[j]));
    }
    return out;
}

Seeding seed(const Dataset& data, std::size_t k, Strategy strategy, Rng& rng) {
    switch (strategy) {
    case Strategy::plusplus:
        return seed_plusplus(data, k, rng);
    case Strategy::uniform_random:
        return seed_uniform(data, k, rng);
    }
    throw ValidationError("unknown seeding strategy");
}

}  // namespace kmpp
