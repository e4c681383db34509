#include "kmpp/cost.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "kmpp/error.hpp"

namespace kmpp {

namespace {

constexpr std::size_t kPairwiseThreshold = 4096;
constexpr std::size_t kPairwiseBlock = 128;

double pairwise_sum(const double* values, std::size_t n) {
    if (n <= kPairwiseBlock) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += values[i];
        }
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

void check_centers(std::size_t dim, const CenterSet& centers) {
    if (centers.empty()) {
        throw ContractError("center set is empty");
    }
    if (centers.dim() != dim) {
        throw ContractError(fmt::format("dimension mismatch: point has {}, centers have {}", dim, centers.dim()));
    }
}

}  // namespace

CenterSet::CenterSet(std::size_t dim) : dim_(dim) {
    if (dim_ == 0) {
        throw ValidationError("center dimension must be positive");
    }
}

CenterSet::CenterSet(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0) {
        throw ValidationError("center dimension must be positive");
    }
    if (coords_.size() % dim_ != 0) {
        throw ValidationError(fmt::format("{} coordinates do not split into {}-vectors", coords_.size(), dim_));
    }
}

CenterSet CenterSet::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
        throw ValidationError("center list is empty");
    }
    CenterSet out(rows.front().size());
    for (const auto& r : rows) {
        out.push_back(r);
    }
    return out;
}

void CenterSet::push_back(std::span<const double> center) {
    if (center.size() != dim_) {
        throw ContractError(fmt::format("center has {} coordinates, expected {}", center.size(), dim_));
    }
    coords_.insert(coords_.end(), center.begin(), center.end());
}

CenterSet CenterSet::prefix(std::size_t q) const {
    if (q == 0 || q > size()) {
        throw ContractError(fmt::format("prefix length {} outside [1, {}]", q, size()));
    }
    return CenterSet(dim_, std::vector<double>(coords_.begin(), coords_.begin() + q * dim_));
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        acc += diff * diff;
    }
    return acc;
}

std::size_t nearest_center(std::span<const double> x, const CenterSet& centers) {
    check_centers(x.size(), centers);
    std::size_t best = 0;
    double best_d2 = squared_distance(x, centers[0]);
    for (std::size_t j = 1; j < centers.size(); ++j) {
        const double d2 = squared_distance(x, centers[j]);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = j;
        }
    }
    return best;
}

double squared_dist_to_set(std::span<const double> x, const CenterSet& centers) {
    check_centers(x.size(), centers);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centers.size(); ++j) {
        best = std::min(best, squared_distance(x, centers[j]));
    }
    return best;
}

double dist_to_set(std::span<const double> x, const CenterSet& centers) {
    return std::sqrt(squared_dist_to_set(x, centers));
}

Assignment assign(const Dataset& data, const CenterSet& centers) {
    check_centers(data.dim(), centers);
    Assignment out;
    out.num_centers = centers.size();
    out.labels.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        out.labels[i] = nearest_center(data.point(i), centers);
    }
    return out;
}

double accurate_sum(std::span<const double> values) {
    if (values.size() > kPairwiseThreshold) {
        return pairwise_sum(values.data(), values.size());
    }
    double acc = 0.0;
    for (double v : values) {
        acc += v;
    }
    return acc;
}

double cost_empirical(const Dataset& data, const CenterSet& centers) {
    check_centers(data.dim(), centers);
    std::vector<double> d2(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        d2[i] = squared_dist_to_set(data.point(i), centers);
    }
    return accurate_sum(d2) / static_cast<double>(data.size());
}

double cost_matrix_form(const Dataset& data, const Assignment& assignment, const CenterSet& centers) {
    check_centers(data.dim(), centers);
    if (assignment.labels.size() != data.size()) {
        throw ContractError(
            fmt::format("assignment has {} rows, dataset has {} points", assignment.labels.size(), data.size()));
    }
    if (assignment.num_centers != centers.size()) {
        throw ContractError(
            fmt::format("assignment has {} columns, center set has {}", assignment.num_centers, centers.size()));
    }
    std::vector<double> d2(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::size_t label = assignment.labels[i];
        if (label >= centers.size()) {
            throw ContractError(fmt::format("label {} of point {} has no center", label, i));
        }
        d2[i] = squared_distance(data.point(i), centers[label]);
    }
    return accurate_sum(d2);
}

}  // namespace kmpp
