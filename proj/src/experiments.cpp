#include "kmpp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "kmpp/error.hpp"
#include "kmpp/oracle.hpp"
#include "kmpp/parallel.hpp"

namespace kmpp {

namespace {

// Stream keys for the convergence study.
constexpr std::uint64_t kReferenceStream = 0;
constexpr std::uint64_t kSampleStream = 1;
constexpr std::uint64_t kSeedingStream = 2;
constexpr std::uint64_t kReferenceMcStream = 3;

std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) {
            ++j;
        }
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) {
            ranks[order[t]] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

struct RepOutcome {
    double seeded_own;
    double seeded_ref;
    double refined_own;
    double refined_ref;
};

}  // namespace

McEstimate summarize(std::vector<double> samples) {
    McEstimate est;
    const std::size_t n = samples.size();
    if (n == 0) {
        throw ValidationError("cannot summarize zero samples");
    }
    est.mean = accurate_sum(samples) / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double s : samples) {
            ss += (s - est.mean) * (s - est.mean);
        }
        est.std_error = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
        est.stderr_defined = true;
    }
    est.samples = std::move(samples);
    return est;
}

McEstimate mc_expected_cost(const Dataset& data, std::size_t k, std::size_t reps, std::uint64_t master_seed,
                            const McOptions& options) {
    if (reps == 0) {
        throw ValidationError("reps must be at least 1");
    }
    std::vector<double> costs(reps);
    parallel_for(reps, options.threads, [&](std::size_t r) {
        Rng rng = Rng::stream(master_seed, {r});
        const Seeding s = seed(data, k, options.strategy, rng);
        costs[r] = options.refine ? lloyd_refine(data, s.centers, options.lloyd).final_cost()
                                  : cost_empirical(data, s.centers);
    });
    return summarize(std::move(costs));
}

double cross_evaluate(const CenterSet& centers, const Dataset& other) {
    return cost_empirical(other, centers);
}

double rank_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ContractError("rank correlation needs two equal-length series of at least two values");
    }
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mean = (n + 1.0) / 2.0;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mean) * (ry[i] - mean);
        sxx += (rx[i] - mean) * (rx[i] - mean);
        syy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (sxx == 0.0 || syy == 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return sxy / std::sqrt(sxx * syy);
}

void validate(const ConvergenceStudySpec& spec) {
    if (spec.sample_sizes.empty()) {
        throw ValidationError("study needs at least one sample size");
    }
    for (std::size_t i = 1; i < spec.sample_sizes.size(); ++i) {
        if (spec.sample_sizes[i] <= spec.sample_sizes[i - 1]) {
            throw ValidationError("sample sizes must be strictly increasing");
        }
    }
    if (spec.reps < 30) {
        throw ValidationError(fmt::format("study needs at least 30 repetitions per size, got {}", spec.reps));
    }
    if (spec.ref_size < 10 * spec.sample_sizes.back()) {
        throw ValidationError(fmt::format("reference size {} must be at least 10x the largest sample size {}",
                                          spec.ref_size, spec.sample_sizes.back()));
    }
    if (spec.k == 0 || spec.k > spec.sample_sizes.front()) {
        throw ValidationError(
            fmt::format("k = {} must lie in [1, smallest sample size {}]", spec.k, spec.sample_sizes.front()));
    }
    if (spec.strategies.empty()) {
        throw ValidationError("study needs at least one seeding strategy");
    }
}

ExperimentResult run_convergence_study(const ConvergenceStudySpec& spec) {
    validate(spec);
    const std::uint64_t seed = spec.master_seed;
    const Dataset reference = [&] {
        Rng rng = Rng::stream(seed, {kReferenceStream});
        return sample(spec.mixture, spec.ref_size, rng);
    }();

    ExperimentResult result;
    const std::size_t ref_reps = spec.ref_reps == 0 ? spec.reps : spec.ref_reps;
    for (std::size_t s = 0; s < spec.strategies.size(); ++s) {
        for (bool refine : {false, true}) {
            if (refine && !spec.refine) {
                continue;
            }
            McOptions options{spec.strategies[s], refine, spec.lloyd, spec.threads};
            const auto mc = mc_expected_cost(reference, spec.k, ref_reps,
                                             Rng::derive_seed(seed, {kReferenceMcStream, s, refine ? 1u : 0u}),
                                             options);
            result.tracks.push_back({spec.strategies[s], refine, mc.mean, mc.std_error});
        }
    }
    auto ref_expectation = [&](Strategy strategy, bool refine) {
        for (const auto& t : result.tracks) {
            if (t.strategy == strategy && t.refine == refine) {
                return t.ref_expectation;
            }
        }
        return std::numeric_limits<double>::quiet_NaN();
    };

    const std::size_t n_strategies = spec.strategies.size();
    for (const std::size_t m : spec.sample_sizes) {
        std::vector<RepOutcome> outcomes(spec.reps * n_strategies);
        std::optional<StudyExemplar> exemplar;
        parallel_for(spec.reps, spec.threads, [&](std::size_t r) {
            Rng sample_rng = Rng::stream(seed, {kSampleStream, m, r});
            Dataset data = sample(spec.mixture, m, sample_rng);
            for (std::size_t s = 0; s < n_strategies; ++s) {
                Rng seed_rng = Rng::stream(seed, {kSeedingStream, m, r, s});
                const Seeding seeding = kmpp::seed(data, spec.k, spec.strategies[s], seed_rng);
                RepOutcome& out = outcomes[r * n_strategies + s];
                out.seeded_own = cost_empirical(data, seeding.centers);
                out.seeded_ref = cross_evaluate(seeding.centers, reference);
                CenterSet shown = seeding.centers;
                if (spec.refine) {
                    LloydTrace trace = lloyd_refine(data, seeding.centers, spec.lloyd);
                    out.refined_own = trace.final_cost();
                    out.refined_ref = cross_evaluate(trace.final_centers, reference);
                    shown = std::move(trace.final_centers);
                }
                if (r == 0 && s == 0) {
                    exemplar = StudyExemplar{m, data, std::move(shown)};
                }
            }
        });
        result.exemplars.push_back(std::move(*exemplar));

        for (std::size_t s = 0; s < n_strategies; ++s) {
            for (bool refine : {false, true}) {
                if (refine && !spec.refine) {
                    continue;
                }
                std::vector<double> own(spec.reps);
                std::vector<double> ref(spec.reps);
                for (std::size_t r = 0; r < spec.reps; ++r) {
                    const RepOutcome& o = outcomes[r * n_strategies + s];
                    own[r] = refine ? o.refined_own : o.seeded_own;
                    ref[r] = refine ? o.refined_ref : o.seeded_ref;
                }
                const McEstimate own_est = summarize(std::move(own));
                const McEstimate ref_est = summarize(std::move(ref));
                result.per_m.push_back({m, spec.strategies[s], refine, own_est.mean, own_est.std_error, ref_est.mean,
                                        std::abs(ref_est.mean - ref_expectation(spec.strategies[s], refine))});
            }
        }
    }
    return result;
}

TrendVerdict assess_trend(const ExperimentResult& result, Strategy strategy, bool refine) {
    std::vector<double> sizes;
    std::vector<double> gaps;
    for (const auto& row : result.per_m) {
        if (row.strategy == strategy && row.refine == refine) {
            sizes.push_back(static_cast<double>(row.m));
            gaps.push_back(row.gap);
        }
    }
    if (gaps.size() < 2) {
        throw ContractError("trend assessment needs at least two sample sizes for the track");
    }
    TrendVerdict v{gaps.front(), gaps.back(), rank_correlation(sizes, gaps), false, false};
    v.halved = v.last_gap <= 0.5 * v.first_gap;
    v.negative = v.rank_correlation < 0.0;
    return v;
}

std::string_view to_string(BoundStatus status) {
    switch (status) {
    case BoundStatus::pass:
        return "pass";
    case BoundStatus::fail:
        return "fail";
    case BoundStatus::degenerate:
        return "degenerate";
    case BoundStatus::error:
        return "error";
    }
    return "unknown";
}

std::vector<BoundCheck> run_bound_suite(const std::vector<BoundInstance>& instances) {
    std::vector<BoundCheck> checks;
    checks.reserve(instances.size());
    for (const auto& inst : instances) {
        BoundCheck check;
        check.instance_id = inst.id;
        check.m = inst.data.size();
        check.k = inst.k;
        check.bound = inst.k > 0 ? approximation_bound(inst.k) : std::numeric_limits<double>::quiet_NaN();
        try {
            const ApproximationRatio r = approximation_ratio(inst.data, inst.k);
            check.expected_cost = r.expected_cost;
            check.optimal_cost = r.optimal_cost;
            check.ratio = r.ratio;
            if (r.degenerate) {
                check.status = BoundStatus::degenerate;
                check.message = "optimal cost is zero";
            } else {
                check.status = r.ratio <= check.bound ? BoundStatus::pass : BoundStatus::fail;
            }
        } catch (const Error& e) {
            check.status = BoundStatus::error;
            check.message = e.what();
        }
        checks.push_back(std::move(check));
    }
    return checks;
}

std::vector<BoundInstance> small_random_instances(std::size_t count, std::uint64_t seed) {
    std::vector<BoundInstance> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng = Rng::stream(seed, {i});
        const std::size_t m = 4 + rng.index(7);
        const std::size_t k = 2 + rng.index(2);
        std::vector<double> coords(2 * m);
        for (auto& c : coords) {
            c = rng.normal();
        }
        out.push_back({fmt::format("small-random-{}", i), Dataset(2, std::move(coords)), k});
    }
    return out;
}

}  // namespace kmpp
