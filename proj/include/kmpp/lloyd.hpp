#pragma once

#include <cstddef>
#include <vector>

#include "kmpp/cost.hpp"
#include "kmpp/dataset.hpp"

namespace kmpp {

struct LloydOptions {
    std::size_t max_iters = 200;
    /// Absolute bound on the largest center displacement.
    double tol = 1e-9;
};

struct LloydStep {
    double cost;   ///< normalized cost after this iteration's update and reassignment
    double moved;  ///< largest center displacement in this iteration
};

struct LloydTrace {
    double initial_cost = 0.0;
    std::vector<LloydStep> iterations;
    bool converged = false;
    CenterSet final_centers;
    Assignment final_assignment;

    double final_cost() const { return iterations.empty() ? initial_cost : iterations.back().cost; }
};

/**
 * Lloyd refinement from `init`.
 *
 * Each iteration moves every center to the mean of its cluster, then
 * reassigns points to the nearest center (ties to the lowest index). Stops
 * when no label changes, when no center moves more than `tol`, or after
 * `max_iters` iterations.
 *
 * A center whose cluster is empty is moved onto the point farthest from its
 * currently assigned center (ties to the lowest point index); each such point
 * is used at most once per iteration. The cost never increases.
 */
LloydTrace lloyd_refine(const Dataset& data, const CenterSet& init, const LloydOptions& options = {});

}  // namespace kmpp
