#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kmpp/cost.hpp"
#include "kmpp/dataset.hpp"
#include "kmpp/lloyd.hpp"
#include "kmpp/seeding.hpp"

namespace kmpp {

struct McOptions {
    Strategy strategy = Strategy::plusplus;
    bool refine = false;
    LloydOptions lloyd{};
    std::size_t threads = 1;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    /// False when reps == 1; std_error is then reported as 0.
    bool stderr_defined = false;
    std::vector<double> samples;
};

/// Sample mean and standard error (sample stdev / sqrt(n)) in index order.
McEstimate summarize(std::vector<double> samples);

/**
 * Monte Carlo estimate of the expected cost of seeding (plus optional Lloyd
 * refinement) on `data`. Repetition r draws from Rng::stream(master_seed, {r}).
 */
McEstimate mc_expected_cost(const Dataset& data, std::size_t k, std::size_t reps, std::uint64_t master_seed,
                            const McOptions& options = {});

/// Cost of centers (chosen on some sample) under another dataset's empirical measure.
double cross_evaluate(const CenterSet& centers, const Dataset& other);

/// Spearman rank correlation (average ranks for ties). NaN if either side is constant.
double rank_correlation(const std::vector<double>& x, const std::vector<double>& y);

struct ConvergenceStudySpec {
    MixtureSpec mixture = generate_grid_mixture(4, 4, 1.0, 0.1);
    std::size_t k = 16;
    std::vector<std::size_t> sample_sizes{100, 330, 1000, 3300};
    std::size_t reps = 50;
    /// Size of the frozen reference sample standing in for the population.
    std::size_t ref_size = 100000;
    /// Repetitions for the reference expectation; 0 means "same as reps".
    std::size_t ref_reps = 1000;
    std::uint64_t master_seed = 0;
    /// Also record a Lloyd-refined track next to the seeding-only one.
    bool refine = false;
    std::vector<Strategy> strategies{Strategy::plusplus};
    LloydOptions lloyd{};
    std::size_t threads = 1;
};

/// Throws ValidationError unless sizes are strictly increasing, reps >= 30,
/// ref_size >= 10 * max size, and 1 <= k <= min size.
void validate(const ConvergenceStudySpec& spec);

struct StudyRow {
    std::size_t m;
    Strategy strategy;
    bool refine;
    double mean;      ///< mean cost of the seeded centers on their own sample
    double std_error;  ///< standard error of `mean`
    double ref_cost;  ///< mean cost of the same centers on the reference sample
    double gap;       ///< |ref_cost - reference expectation of the track|
};

struct TrackSummary {
    Strategy strategy;
    bool refine;
    double ref_expectation;
    double ref_stderr;
};

/// One clustered sample per size, kept for figures.
struct StudyExemplar {
    std::size_t m;
    Dataset sample;
    CenterSet centers;
};

enum class BoundStatus { pass, fail, degenerate, error };

std::string_view to_string(BoundStatus status);

struct BoundCheck {
    std::string instance_id;
    std::size_t m = 0;
    std::size_t k = 0;
    double expected_cost = 0.0;
    double optimal_cost = 0.0;
    double ratio = 0.0;
    double bound = 0.0;
    BoundStatus status = BoundStatus::error;
    std::string message;

    bool pass() const { return status == BoundStatus::pass; }
};

struct ExperimentResult {
    std::vector<StudyRow> per_m;
    std::vector<TrackSummary> tracks;
    std::vector<StudyExemplar> exemplars;
    std::vector<BoundCheck> bound_checks;
};

/**
 * Draws one reference sample of ref_size points. For every sample size m and
 * repetition r it draws a fresh sample, seeds it with each strategy, and
 * records the cost on the sample itself and on the reference. The reference
 * expectation of each track is a Monte Carlo estimate of seeding directly on
 * the reference. Sample draws for (m, r) are shared across strategies.
 *
 * Exemplars hold repetition 0 of each size for the first strategy, refined
 * when `refine` is set.
 */
ExperimentResult run_convergence_study(const ConvergenceStudySpec& spec);

struct TrendVerdict {
    double first_gap;
    double last_gap;
    double rank_correlation;
    bool halved;    ///< last_gap <= 0.5 * first_gap
    bool negative;  ///< rank_correlation < 0
    bool pass() const { return halved && negative; }
};

/// Trend check for one track: no rate is asserted, only that the gap halves
/// over the size range and correlates negatively with m.
TrendVerdict assess_trend(const ExperimentResult& result, Strategy strategy, bool refine);

struct BoundInstance {
    std::string id;
    Dataset data;
    std::size_t k;
};

/// approximation_ratio against 8 (ln k + 2) per instance. Errors (size
/// limits, bad k) are recorded on the instance and do not stop the suite.
std::vector<BoundCheck> run_bound_suite(const std::vector<BoundInstance>& instances);

/// `count` instances with m uniform in [4, 10], k uniform in {2, 3}, and
/// i.i.d. standard normal points in 2-D. Instance i uses Rng::stream(seed, {i}).
std::vector<BoundInstance> small_random_instances(std::size_t count, std::uint64_t seed);

}  // namespace kmpp
