#include "kmpp/lloyd.hpp"

#include <cmath>

#include <fmt/format.h>

#include "kmpp/error.hpp"

namespace kmpp {

namespace {

// Cluster means for the given labels, with farthest-point relocation for empty clusters.
CenterSet update_centers(const Dataset& data, const Assignment& assignment, const CenterSet& current) {
    const std::size_t k = current.size();
    const std::size_t dim = data.dim();
    std::vector<double> sums(k * dim, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::size_t label = assignment.labels[i];
        ++counts[label];
        auto p = data.point(i);
        for (std::size_t d = 0; d < dim; ++d) {
            sums[label * dim + d] += p[d];
        }
    }

    CenterSet next = current;
    std::vector<double> reseed_d2;
    for (std::size_t j = 0; j < k; ++j) {
        auto c = next.mutable_center(j);
        if (counts[j] > 0) {
            for (std::size_t d = 0; d < dim; ++d) {
                c[d] = sums[j * dim + d] / static_cast<double>(counts[j]);
            }
            continue;
        }
        if (reseed_d2.empty()) {
            reseed_d2.resize(data.size());
            for (std::size_t i = 0; i < data.size(); ++i) {
                reseed_d2[i] = squared_distance(data.point(i), current[assignment.labels[i]]);
            }
        }
        std::size_t far = 0;
        for (std::size_t i = 1; i < data.size(); ++i) {
            if (reseed_d2[i] > reseed_d2[far]) {
                far = i;
            }
        }
        auto p = data.point(far);
        std::copy(p.begin(), p.end(), c.begin());
        reseed_d2[far] = -1.0;
    }
    return next;
}

}  // namespace

LloydTrace lloyd_refine(const Dataset& data, const CenterSet& init, const LloydOptions& options) {
    if (init.empty()) {
        throw ContractError("Lloyd refinement needs at least one initial center");
    }
    if (init.dim() != data.dim()) {
        throw ContractError(fmt::format("dimension mismatch: data {}, centers {}", data.dim(), init.dim()));
    }
    if (options.max_iters == 0) {
        throw ValidationError("max_iters must be at least 1");
    }
    if (!(options.tol >= 0.0)) {
        throw ValidationError("tol must be non-negative");
    }

    const double m = static_cast<double>(data.size());
    LloydTrace trace{0.0, {}, false, init, assign(data, init)};
    trace.initial_cost = cost_matrix_form(data, trace.final_assignment, init) / m;

    for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
        CenterSet next = update_centers(data, trace.final_assignment, trace.final_centers);
        double moved = 0.0;
        for (std::size_t j = 0; j < next.size(); ++j) {
            moved = std::max(moved, std::sqrt(squared_distance(next[j], trace.final_centers[j])));
        }
        Assignment labels = assign(data, next);
        const double cost = cost_matrix_form(data, labels, next) / m;
        const bool stable = labels == trace.final_assignment;

        trace.iterations.push_back({cost, moved});
        trace.final_centers = std::move(next);
        trace.final_assignment = std::move(labels);
        if (stable || moved <= options.tol) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

}  // namespace kmpp
