#include <cmath>

#include <gtest/gtest.h>

#include "kmpp/error.hpp"
#include "kmpp/experiments.hpp"
#include "kmpp/oracle.hpp"

namespace kmpp {
namespace {

const Dataset kLine = Dataset::from_rows({{0.0}, {1.0}, {3.0}});

ConvergenceStudySpec small_spec() {
    ConvergenceStudySpec spec;
    spec.mixture = generate_grid_mixture(2, 2, 1.0, 0.1);
    spec.k = 4;
    spec.sample_sizes = {20, 60, 200};
    spec.reps = 30;
    spec.ref_size = 2000;
    spec.master_seed = 5;
    return spec;
}

TEST(McExpectedCost, MatchesExactOnLine) {
    const McEstimate est = mc_expected_cost(kLine, 2, 100000, 1);
    EXPECT_TRUE(est.stderr_defined);
    EXPECT_LE(std::abs(est.mean - 1.3 / 3.0), 3.0 * est.std_error);
    EXPECT_EQ(est.samples.size(), 100000u);
}

TEST(McExpectedCost, DegenerateStatistics) {
    const McEstimate one = mc_expected_cost(kLine, 2, 1, 1);
    EXPECT_FALSE(one.stderr_defined);
    EXPECT_EQ(one.std_error, 0.0);
    EXPECT_EQ(mc_expected_cost(kLine, 3, 100, 1).mean, 0.0);
    EXPECT_THROW(mc_expected_cost(kLine, 2, 0, 1), ValidationError);
    EXPECT_THROW(mc_expected_cost(kLine, 4, 10, 1), ValidationError);
}

TEST(McExpectedCost, ThreadCountDoesNotChangeSamples) {
    const Dataset d = sample(generate_grid_mixture(3, 3, 1.0, 0.2), 500, 4);
    McOptions serial;
    McOptions parallel;
    parallel.threads = 4;
    for (bool refine : {false, true}) {
        serial.refine = parallel.refine = refine;
        const McEstimate a = mc_expected_cost(d, 9, 40, 17, serial);
        const McEstimate b = mc_expected_cost(d, 9, 40, 17, parallel);
        EXPECT_EQ(a.samples, b.samples);
        EXPECT_EQ(a.mean, b.mean);
    }
}

TEST(McExpectedCost, ConsistentWithExactAcrossHarnessRuns) {
    Rng gen(999);
    int within = 0;
    const int runs = 200;
    for (int run = 0; run < runs; ++run) {
        const std::size_t m = 4 + gen.index(5);
        std::vector<double> coords(2 * m);
        for (auto& c : coords) {
            c = gen.normal();
        }
        const Dataset d(2, coords);
        const std::size_t k = 2 + gen.index(2);
        const McEstimate est = mc_expected_cost(d, k, 2000, static_cast<std::uint64_t>(run));
        within += std::abs(est.mean - exact_expected_cost(d, k)) <= 3.0 * est.std_error;
    }
    EXPECT_GE(within, static_cast<int>(std::ceil(0.99 * runs)));
}

TEST(CrossEvaluate, Examples) {
    const CenterSet c = CenterSet::from_rows({{0.5}, {3.0}});
    EXPECT_NEAR(cross_evaluate(c, kLine), 1.0 / 6.0, 1e-15);
    EXPECT_EQ(cross_evaluate(c, kLine), cost_empirical(kLine, c));
    const Dataset support = Dataset::from_rows({{0.5}, {3.0}, {3.0}});
    EXPECT_EQ(cross_evaluate(c, support), 0.0);
    EXPECT_THROW(cross_evaluate(CenterSet::from_rows({{0.0, 0.0}}), kLine), ContractError);
}

TEST(CrossEvaluate, SelfComparisonGapIsNoise) {
    // Using the reference itself as every sample: the gap is two estimates of one expectation.
    const Dataset ref = sample(generate_grid_mixture(4, 4, 1.0, 0.1), 5000, 12);
    const McEstimate expectation = mc_expected_cost(ref, 16, 200, 1);
    std::vector<double> evaluated;
    for (std::uint64_t r = 0; r < 200; ++r) {
        Rng rng = Rng::stream(2, {r});
        evaluated.push_back(cross_evaluate(seed_plusplus(ref, 16, rng).centers, ref));
    }
    const McEstimate self = summarize(evaluated);
    const double se = std::hypot(expectation.std_error, self.std_error);
    EXPECT_LE(std::abs(self.mean - expectation.mean), 3.0 * se);
}

TEST(ConvergenceStudy, Validation) {
    auto spec = small_spec();
    spec.reps = 29;
    EXPECT_THROW(validate(spec), ValidationError);
    spec = small_spec();
    spec.sample_sizes = {20, 20};
    EXPECT_THROW(validate(spec), ValidationError);
    spec = small_spec();
    spec.ref_size = 1999;
    EXPECT_THROW(validate(spec), ValidationError);
    spec = small_spec();
    spec.k = 21;
    EXPECT_THROW(validate(spec), ValidationError);
    EXPECT_THROW(run_convergence_study(spec), ValidationError);
    EXPECT_NO_THROW(validate(small_spec()));
}

TEST(ConvergenceStudy, ShapeAndReproducibility) {
    auto spec = small_spec();
    spec.refine = true;
    spec.strategies = {Strategy::plusplus, Strategy::uniform_random};
    const ExperimentResult a = run_convergence_study(spec);
    spec.threads = 3;
    const ExperimentResult b = run_convergence_study(spec);

    ASSERT_EQ(a.per_m.size(), 3u * 2u * 2u);
    ASSERT_EQ(a.tracks.size(), 4u);
    ASSERT_EQ(a.exemplars.size(), 3u);
    for (std::size_t i = 0; i < a.per_m.size(); ++i) {
        EXPECT_EQ(a.per_m[i].mean, b.per_m[i].mean);
        EXPECT_EQ(a.per_m[i].ref_cost, b.per_m[i].ref_cost);
        EXPECT_EQ(a.per_m[i].gap, b.per_m[i].gap);
    }
    for (std::size_t i = 0; i < a.exemplars.size(); ++i) {
        EXPECT_EQ(a.exemplars[i].sample, b.exemplars[i].sample);
        EXPECT_EQ(a.exemplars[i].centers, b.exemplars[i].centers);
    }
    for (const auto& row : a.per_m) {
        double expectation = NAN;
        for (const auto& t : a.tracks) {
            if (t.strategy == row.strategy && t.refine == row.refine) {
                expectation = t.ref_expectation;
            }
        }
        EXPECT_DOUBLE_EQ(row.gap, std::abs(row.ref_cost - expectation));
        EXPECT_GE(row.mean, 0.0);
    }
    // Refined track never exceeds the seeded one on the same samples.
    for (std::size_t i = 0; i + 1 < a.per_m.size(); i += 2) {
        ASSERT_FALSE(a.per_m[i].refine);
        ASSERT_TRUE(a.per_m[i + 1].refine);
        EXPECT_LE(a.per_m[i + 1].mean, a.per_m[i].mean + 1e-12);
    }
}

TEST(ConvergenceStudy, RefinedGridApproachesNoiseFloor) {
    ConvergenceStudySpec spec;
    spec.sample_sizes = {100, 3300};
    spec.reps = 30;
    spec.ref_size = 33000;
    spec.refine = true;
    spec.master_seed = 8;
    spec.strategies = {Strategy::plusplus, Strategy::uniform_random};
    const ExperimentResult r = run_convergence_study(spec);
    const double floor = 2.0 * 0.1 * 0.1;
    for (const auto& row : r.per_m) {
        if (row.m == 3300 && row.refine && row.strategy == Strategy::plusplus) {
            EXPECT_LE(row.mean, 1.5 * floor);
        }
    }
    // Reported, not asserted: does k-means-random seed worse than k-means++ at 3 standard errors?
    for (const auto& rnd : r.per_m) {
        if (rnd.strategy != Strategy::uniform_random || rnd.refine) {
            continue;
        }
        for (const auto& pp : r.per_m) {
            if (pp.strategy == Strategy::plusplus && !pp.refine && pp.m == rnd.m) {
                const double z = (rnd.mean - pp.mean) / std::hypot(rnd.std_error, pp.std_error);
                RecordProperty("random_vs_plusplus_z_m" + std::to_string(rnd.m), std::to_string(z));
            }
        }
    }
}

TEST(TrendAssessment, RankCorrelationAndVerdict) {
    EXPECT_DOUBLE_EQ(rank_correlation({1, 2, 3, 4}, {10, 8, 5, 1}), -1.0);
    EXPECT_DOUBLE_EQ(rank_correlation({1, 2, 3}, {1, 2, 3}), 1.0);
    EXPECT_TRUE(std::isnan(rank_correlation({1, 2, 3}, {5, 5, 5})));
    EXPECT_NEAR(rank_correlation({1, 2, 3, 4}, {1, 3, 2, 4}), 0.8, 1e-12);

    ExperimentResult r;
    const double gaps[] = {0.04, 0.03, 0.025, 0.01};
    const std::size_t sizes[] = {100, 330, 1000, 3300};
    for (int i = 0; i < 4; ++i) {
        r.per_m.push_back({sizes[i], Strategy::plusplus, false, 0.0, 0.0, 0.0, gaps[i]});
    }
    const TrendVerdict v = assess_trend(r, Strategy::plusplus, false);
    EXPECT_TRUE(v.halved);
    EXPECT_TRUE(v.negative);
    EXPECT_TRUE(v.pass());
    EXPECT_THROW(assess_trend(r, Strategy::uniform_random, false), ContractError);
}

TEST(BoundSuite, Examples) {
    std::vector<double> big(13);
    for (std::size_t i = 0; i < big.size(); ++i) {
        big[i] = static_cast<double>(i * i);
    }
    const std::vector<BoundInstance> instances{
        {"line", kLine, 2},
        {"three", Dataset::from_rows({{0, 0}, {1, 0}, {5, 5}, {5, 6}, {9, 0}}), 3},
        {"identical", Dataset::from_rows({{1, 1}, {1, 1}, {1, 1}}), 2},
        {"too-big", Dataset(1, big), 2},
    };
    const auto checks = run_bound_suite(instances);
    ASSERT_EQ(checks.size(), 4u);
    EXPECT_EQ(checks[0].status, BoundStatus::pass);
    EXPECT_NEAR(checks[0].ratio, 2.6, 1e-12);
    EXPECT_NEAR(checks[0].bound, 21.545, 1e-3);
    EXPECT_EQ(checks[1].status, BoundStatus::pass);
    EXPECT_NEAR(checks[1].bound, 24.789, 1e-3);
    EXPECT_EQ(checks[2].status, BoundStatus::degenerate);
    EXPECT_EQ(checks[3].status, BoundStatus::error);
    EXPECT_NE(checks[3].message.find("Monte Carlo"), std::string::npos);
}

TEST(BoundSuite, SmallRandomInstances) {
    const auto instances = small_random_instances(60, 3);
    ASSERT_EQ(instances.size(), 60u);
    bool saw_k2 = false;
    bool saw_k3 = false;
    for (const auto& inst : instances) {
        EXPECT_GE(inst.data.size(), 4u);
        EXPECT_LE(inst.data.size(), 10u);
        EXPECT_EQ(inst.data.dim(), 2u);
        saw_k2 |= inst.k == 2;
        saw_k3 |= inst.k == 3;
    }
    EXPECT_TRUE(saw_k2 && saw_k3);
    EXPECT_EQ(small_random_instances(5, 3)[4].data, instances[4].data);
}

}  // namespace
}  // namespace kmpp
