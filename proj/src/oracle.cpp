#include "kmpp/oracle.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "kmpp/error.hpp"
#include "kmpp/io.hpp"

namespace kmpp {

namespace {

void check_enumerable(const Dataset& data, std::size_t k) {
    if (k == 0 || k > data.size()) {
        throw ValidationError(fmt::format("k = {} must lie in [1, {}]", k, data.size()));
    }
    if (data.size() > kMaxEnumerationPoints || k > kMaxEnumerationCenters) {
        throw SizeLimitError(fmt::format(
            "seeding enumeration is limited to m <= {} and k <= {} (got m = {}, k = {}); use Monte Carlo instead",
            kMaxEnumerationPoints, kMaxEnumerationCenters, data.size(), k));
    }
}

class SeedingEnumerator {
public:
    SeedingEnumerator(const Dataset& data, std::size_t k) : data_(data), k_(k) {}

    // Calls visit(indices, probability) for each complete sequence.
    template <typename Visit>
    void run(Visit&& visit) {
        const std::size_t m = data_.size();
        const double first = 1.0 / static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> min_d2(m);
            for (std::size_t l = 0; l < m; ++l) {
                min_d2[l] = squared_distance(data_.point(l), data_.point(i));
            }
            path_.assign(1, i);
            descend(min_d2, first, visit);
        }
    }

private:
    template <typename Visit>
    void descend(const std::vector<double>& min_d2, double probability, Visit& visit) {
        if (path_.size() == k_) {
            visit(path_, probability);
            return;
        }
        // Same summation order as the sampler's cumulative array.
        const double total = std::accumulate(min_d2.begin(), min_d2.end(), 0.0);
        if (!(total > 0.0)) {
            throw DegenerateInputError(fmt::format("cannot draw {} centers: the {} points occupy only {} distinct locations",
                                                   k_, data_.size(), data_.distinct_locations()));
        }
        for (std::size_t next = 0; next < data_.size(); ++next) {
            if (min_d2[next] == 0.0) {
                continue;
            }
            std::vector<double> updated(min_d2);
            for (std::size_t l = 0; l < updated.size(); ++l) {
                updated[l] = std::min(updated[l], squared_distance(data_.point(l), data_.point(next)));
            }
            path_.push_back(next);
            descend(updated, probability * (min_d2[next] / total), visit);
            path_.pop_back();
        }
    }

    const Dataset& data_;
    std::size_t k_;
    std::vector<std::size_t> path_;
};

CenterSet centers_from_indices(const Dataset& data, const std::vector<std::size_t>& indices) {
    CenterSet centers(data.dim());
    for (auto i : indices) {
        centers.push_back(data.point(i));
    }
    return centers;
}

// Restricted-growth-string enumeration of partitions with at most k blocks.
class PartitionSearch {
public:
    PartitionSearch(const Dataset& data, std::size_t k)
        : data_(data), k_(k), labels_(data.size(), 0), best_by_blocks_(k + 1, std::numeric_limits<double>::infinity()),
          best_labels_(k + 1) {}

    void run() { extend(0, 0); }

    double best(std::size_t blocks) const { return best_by_blocks_[blocks]; }
    const std::vector<std::size_t>& labels(std::size_t blocks) const { return best_labels_[blocks]; }

private:
    void extend(std::size_t i, std::size_t blocks) {
        if (i == data_.size()) {
            score(blocks);
            return;
        }
        const std::size_t limit = std::min(blocks + 1, k_);
        for (std::size_t b = 0; b < limit; ++b) {
            labels_[i] = b;
            extend(i + 1, std::max(blocks, b + 1));
        }
    }

    void score(std::size_t blocks) {
        const CenterSet means = block_means(data_, labels_, blocks);
        const double cost =
            cost_matrix_form(data_, Assignment{labels_, blocks}, means) / static_cast<double>(data_.size());
        if (cost < best_by_blocks_[blocks]) {
            best_by_blocks_[blocks] = cost;
            best_labels_[blocks] = labels_;
        }
    }

public:
    static CenterSet block_means(const Dataset& data, const std::vector<std::size_t>& labels, std::size_t blocks) {
        const std::size_t dim = data.dim();
        std::vector<double> sums(blocks * dim, 0.0);
        std::vector<std::size_t> counts(blocks, 0);
        for (std::size_t i = 0; i < data.size(); ++i) {
            ++counts[labels[i]];
            auto p = data.point(i);
            for (std::size_t d = 0; d < dim; ++d) {
                sums[labels[i] * dim + d] += p[d];
            }
        }
        for (std::size_t b = 0; b < blocks; ++b) {
            for (std::size_t d = 0; d < dim; ++d) {
                sums[b * dim + d] /= static_cast<double>(counts[b]);
            }
        }
        return CenterSet(dim, std::move(sums));
    }

private:
    const Dataset& data_;
    std::size_t k_;
    std::vector<std::size_t> labels_;
    std::vector<double> best_by_blocks_;
    std::vector<std::vector<std::size_t>> best_labels_;
};

}  // namespace

std::vector<SeedingOutcome> enumerate_seedings(const Dataset& data, std::size_t k) {
    check_enumerable(data, k);
    std::vector<SeedingOutcome> outcomes;
    SeedingEnumerator(data, k).run([&](const std::vector<std::size_t>& indices, double probability) {
        outcomes.push_back({indices, probability, cost_empirical(data, centers_from_indices(data, indices))});
    });
    return outcomes;
}

double exact_expected_cost(const Dataset& data, std::size_t k, bool refine, const LloydOptions& lloyd) {
    check_enumerable(data, k);
    double expected = 0.0;
    SeedingEnumerator(data, k).run([&](const std::vector<std::size_t>& indices, double probability) {
        const CenterSet centers = centers_from_indices(data, indices);
        const double cost = refine ? lloyd_refine(data, centers, lloyd).final_cost() : cost_empirical(data, centers);
        expected += probability * cost;
    });
    return expected;
}

std::vector<double> exact_expected_prefix_costs(const Dataset& data, std::size_t k) {
    check_enumerable(data, k);
    std::vector<double> expected(k, 0.0);
    SeedingEnumerator(data, k).run([&](const std::vector<std::size_t>& indices, double probability) {
        const CenterSet centers = centers_from_indices(data, indices);
        for (std::size_t j = 1; j <= k; ++j) {
            expected[j - 1] += probability * cost_empirical(data, centers.prefix(j));
        }
    });
    return expected;
}

OptimalClustering brute_force_optimum(const Dataset& data, std::size_t k) {
    if (k == 0 || k > data.size()) {
        throw ValidationError(fmt::format("k = {} must lie in [1, {}]", k, data.size()));
    }
    if (data.size() > kMaxPartitionPoints || k > kMaxPartitionCenters) {
        throw SizeLimitError(fmt::format("partition search is limited to m <= {} and k <= {} (got m = {}, k = {}); use Monte Carlo estimates instead",
                                         kMaxPartitionPoints, kMaxPartitionCenters, data.size(), k));
    }
    PartitionSearch search(data, k);
    search.run();

    std::vector<double> per_prefix(k);
    std::size_t best_blocks = 1;
    double running = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j <= k; ++j) {
        if (search.best(j) < running) {
            running = search.best(j);
            best_blocks = j;
        }
        per_prefix[j - 1] = running;
    }
    const auto& labels = search.labels(best_blocks);
    return {running, labels, PartitionSearch::block_means(data, labels, best_blocks), std::move(per_prefix)};
}

double approximation_bound(std::size_t k) {
    return 8.0 * (std::log(static_cast<double>(k)) + 2.0);
}

ApproximationRatio approximation_ratio(const Dataset& data, std::size_t k) {
    ApproximationRatio out;
    out.optimal_cost = brute_force_optimum(data, k).best_cost;
    if (out.optimal_cost == 0.0 && data.distinct_locations() < k) {
        out.degenerate = true;
        out.expected_cost = std::numeric_limits<double>::quiet_NaN();
        out.ratio = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.expected_cost = exact_expected_cost(data, k);
    if (out.optimal_cost == 0.0) {
        if (out.expected_cost == 0.0) {
            out.ratio = 1.0;
        } else {
            out.degenerate = true;
            out.ratio = std::numeric_limits<double>::infinity();
        }
        return out;
    }
    out.ratio = out.expected_cost / out.optimal_cost;
    return out;
}

std::string outcomes_to_csv(const std::vector<SeedingOutcome>& outcomes) {
    std::string out = "indices,probability,cost\n";
    for (const auto& o : outcomes) {
        for (std::size_t j = 0; j < o.indices.size(); ++j) {
            out += fmt::format("{}{}", j ? " " : "", o.indices[j]);
        }
        out += fmt::format(",{:.17g},{:.17g}\n", o.probability, o.cost);
    }
    return out;
}

void write_outcomes_csv(const std::vector<SeedingOutcome>& outcomes, const std::filesystem::path& path) {
    write_text_file(path, outcomes_to_csv(outcomes));
}

}  // namespace kmpp
