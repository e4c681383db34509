#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kmpp/dataset.hpp"

namespace kmpp {

/**
 * Ordered sequence of cluster centers mu_1, mu_2, ...
 *
 * Order is significant: seeding probabilities depend on it, and `prefix(q)`
 * gives the first q centers as produced by the seeding chain.
 */
class CenterSet {
public:
    explicit CenterSet(std::size_t dim);
    CenterSet(std::size_t dim, std::vector<double> coords);

    static CenterSet from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return coords_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    bool empty() const { return coords_.empty(); }

    std::span<const double> operator[](std::size_t j) const { return {coords_.data() + j * dim_, dim_}; }
    std::span<double> mutable_center(std::size_t j) { return {coords_.data() + j * dim_, dim_}; }
    std::span<const double> coords() const { return coords_; }

    void push_back(std::span<const double> center);

    /// First q centers; q must be in [1, size()].
    CenterSet prefix(std::size_t q) const;

    bool operator==(const CenterSet&) const = default;

private:
    std::size_t dim_;
    std::vector<double> coords_;
};

/// Nearest-center labels; the indicator matrix U in label form.
struct Assignment {
    std::vector<std::size_t> labels;
    std::size_t num_centers = 0;

    bool operator==(const Assignment&) const = default;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// D(x, M)^2. Throws ContractError on an empty set or dimension mismatch.
double squared_dist_to_set(std::span<const double> x, const CenterSet& centers);

/// D(x, M) = min over centers of the Euclidean distance.
double dist_to_set(std::span<const double> x, const CenterSet& centers);

/// Index of the nearest center; ties go to the lowest index.
std::size_t nearest_center(std::span<const double> x, const CenterSet& centers);

Assignment assign(const Dataset& data, const CenterSet& centers);

/// (1/m) * sum_i D(x_i, M)^2, the cost of M under the empirical measure.
double cost_empirical(const Dataset& data, const CenterSet& centers);

/// sum_i ||x_i - mu_{label(i)}||^2 for an arbitrary assignment (unnormalized).
double cost_matrix_form(const Dataset& data, const Assignment& assignment, const CenterSet& centers);

/// Sum used by both cost forms: sequential up to 4096 terms, pairwise above.
double accurate_sum(std::span<const double> values);

}  // namespace kmpp
