#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "kmpp/error.hpp"
#include "kmpp/oracle.hpp"
#include "kmpp/seeding.hpp"
#include "oracles.hpp"

namespace kmpp {
namespace {

const Dataset kLine = Dataset::from_rows({{0.0}, {1.0}, {3.0}});

testing::Points to_points(const Dataset& d) {
    testing::Points pts;
    for (std::size_t i = 0; i < d.size(); ++i) {
        pts.emplace_back(d.point(i).begin(), d.point(i).end());
    }
    return pts;
}

Dataset random_instance(Rng& rng, std::size_t m) {
    std::vector<double> coords(2 * m);
    for (auto& c : coords) {
        c = rng.normal();
    }
    return Dataset(2, std::move(coords));
}

TEST(EnumerateSeedings, LineInstance) {
    const auto outcomes = enumerate_seedings(kLine, 2);
    ASSERT_EQ(outcomes.size(), 6u);
    // Lexicographic order: (0,1) (0,2) (1,0) (1,2) (2,0) (2,1).
    EXPECT_EQ(outcomes[1].indices, (std::vector<std::size_t>{0, 2}));
    EXPECT_NEAR(outcomes[1].probability, 3.0 / 10.0, 1e-15);
    EXPECT_NEAR(outcomes[1].cost, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(outcomes[0].probability, 1.0 / 30.0, 1e-15);
    EXPECT_NEAR(outcomes[0].cost, 4.0 / 3.0, 1e-15);
    double total = 0.0;
    for (const auto& o : outcomes) {
        total += o.probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(EnumerateSeedings, SingleCenterIsUniform) {
    const auto outcomes = enumerate_seedings(kLine, 1);
    ASSERT_EQ(outcomes.size(), 3u);
    for (const auto& o : outcomes) {
        EXPECT_DOUBLE_EQ(o.probability, 1.0 / 3.0);
    }
}

TEST(EnumerateSeedings, AllPermutationsWhenKEqualsM) {
    const Dataset d = Dataset::from_rows({{0, 0}, {1, 0}, {0, 2}, {3, 3}});
    const auto outcomes = enumerate_seedings(d, 4);
    EXPECT_EQ(outcomes.size(), 24u);
    double total = 0.0;
    for (const auto& o : outcomes) {
        total += o.probability;
        EXPECT_EQ(o.cost, 0.0);
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
    EXPECT_EQ(exact_expected_cost(d, 4), 0.0);
}

TEST(EnumerateSeedings, SizeLimits) {
    std::vector<double> big(13, 0.0);
    for (std::size_t i = 0; i < big.size(); ++i) {
        big[i] = static_cast<double>(i);
    }
    EXPECT_THROW(enumerate_seedings(Dataset(1, big), 2), SizeLimitError);
    const Dataset six = Dataset::from_rows({{0}, {1}, {2}, {3}, {4}, {5}});
    EXPECT_THROW(enumerate_seedings(six, 5), SizeLimitError);
    EXPECT_THROW(brute_force_optimum(six, 4), SizeLimitError);
    EXPECT_THROW(enumerate_seedings(kLine, 4), ValidationError);
    EXPECT_THROW(enumerate_seedings(Dataset::from_rows({{1}, {1}, {2}}), 3), DegenerateInputError);
}

TEST(EnumerateSeedings, ProbabilitiesMatchDirectChainFormula) {
    Rng rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const Dataset d = random_instance(rng, 3 + rng.index(6));
        const std::size_t k = 1 + rng.index(std::min<std::size_t>(d.size(), 4));
        const auto pts = to_points(d);
        double total = 0.0;
        for (const auto& o : enumerate_seedings(d, k)) {
            EXPECT_NEAR(o.probability, testing::chain_probability(pts, o.indices), 1e-14);
            total += o.probability;
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(ExactExpectedCost, LineInstance) {
    EXPECT_NEAR(exact_expected_cost(kLine, 2), 1.3 / 3.0, 1e-12);
    // k = 1: average over x of cost_empirical(d, [x]).
    double direct = 0.0;
    for (std::size_t i = 0; i < kLine.size(); ++i) {
        CenterSet c(1);
        c.push_back(kLine.point(i));
        direct += cost_empirical(kLine, c) / 3.0;
    }
    EXPECT_NEAR(exact_expected_cost(kLine, 1), direct, 1e-15);
    EXPECT_EQ(exact_expected_cost(kLine, 3), 0.0);
}

TEST(ExactExpectedCost, RefinedNeverExceedsSeeded) {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const Dataset d = random_instance(rng, 4 + rng.index(5));
        const std::size_t k = 2 + rng.index(2);
        EXPECT_LE(exact_expected_cost(d, k, true), exact_expected_cost(d, k) + 1e-12);
    }
}

TEST(ExactExpectedCost, PrefixCostsMatchTupleOracle) {
    Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const Dataset d = random_instance(rng, 4 + rng.index(4));
        const std::size_t k = 2 + rng.index(2);
        const auto expected = testing::expected_prefix_costs(to_points(d), k);
        const auto prefix = exact_expected_prefix_costs(d, k);
        ASSERT_EQ(prefix.size(), k);
        for (std::size_t j = 0; j < k; ++j) {
            EXPECT_NEAR(prefix[j], expected[j], 1e-12);
            EXPECT_NEAR(prefix[j], exact_expected_cost(d, j + 1), 1e-12);
        }
        for (std::size_t j = 1; j < k; ++j) {
            EXPECT_GT(prefix[j - 1], prefix[j]);
        }
    }
}

TEST(BruteForceOptimum, LineInstance) {
    const OptimalClustering best = brute_force_optimum(kLine, 2);
    EXPECT_NEAR(best.best_cost, 1.0 / 6.0, 1e-15);
    EXPECT_EQ(best.best_partition, (std::vector<std::size_t>{0, 0, 1}));
    EXPECT_EQ(best.centers, CenterSet::from_rows({{0.5}, {3.0}}));
    ASSERT_EQ(best.per_prefix.size(), 2u);
    // One cluster: variance about the mean 4/3.
    EXPECT_NEAR(best.per_prefix[0], (16.0 / 9 + 1.0 / 9 + 25.0 / 9) / 3.0, 1e-15);
    EXPECT_EQ(brute_force_optimum(kLine, 3).best_cost, 0.0);
}

TEST(BruteForceOptimum, MatchesLabelingOracle) {
    Rng rng(14);
    for (int trial = 0; trial < 40; ++trial) {
        const Dataset d = random_instance(rng, 3 + rng.index(6));
        const std::size_t k = 1 + rng.index(3);
        const OptimalClustering best = brute_force_optimum(d, k);
        EXPECT_NEAR(best.best_cost, testing::optimal_cost(to_points(d), k), 1e-12);
        for (std::size_t j = 1; j < best.per_prefix.size(); ++j) {
            EXPECT_LE(best.per_prefix[j], best.per_prefix[j - 1]);
        }
        EXPECT_EQ(best.per_prefix.back(), best.best_cost);
        EXPECT_NEAR(cost_matrix_form(d, Assignment{best.best_partition, best.centers.size()}, best.centers) /
                        static_cast<double>(d.size()),
                    best.best_cost, 1e-12);
        if (k <= d.size()) {
            EXPECT_LE(best.per_prefix.back(), exact_expected_cost(d, k) + 1e-12);
        }
    }
}

TEST(ApproximationRatio, LineInstance) {
    const ApproximationRatio r = approximation_ratio(kLine, 2);
    EXPECT_FALSE(r.degenerate);
    EXPECT_NEAR(r.ratio, 2.6, 1e-12);
    EXPECT_NEAR(approximation_bound(2), 21.545177444479563, 1e-12);
    EXPECT_LT(r.ratio, approximation_bound(2));
}

TEST(ApproximationRatio, BoundConstantForThreeCenters) {
    EXPECT_GT(approximation_bound(3), 24.0);
    EXPECT_NEAR(approximation_bound(3), 24.79, 0.005);
}

TEST(ApproximationRatio, ZeroOverZeroAndDegenerate) {
    const ApproximationRatio full = approximation_ratio(kLine, 3);
    EXPECT_FALSE(full.degenerate);
    EXPECT_EQ(full.ratio, 1.0);

    const ApproximationRatio same = approximation_ratio(Dataset::from_rows({{2, 2}, {2, 2}, {2, 2}}), 2);
    EXPECT_TRUE(same.degenerate);
    EXPECT_EQ(same.optimal_cost, 0.0);
}

TEST(EnumerateSeedings, SamplerAgreesWithEnumeration) {
    const Dataset d = Dataset::from_rows({{0, 0}, {1, 0}, {0, 2}, {4, 1}});
    const auto outcomes = enumerate_seedings(d, 3);
    std::map<std::vector<std::size_t>, std::size_t> counts;
    const std::size_t n = 100000;
    for (std::size_t r = 0; r < n; ++r) {
        Rng rng = Rng::stream(55, {r});
        ++counts[seed_plusplus(d, 3, rng).indices];
    }
    std::size_t seen = 0;
    for (const auto& o : outcomes) {
        const double freq = static_cast<double>(counts[o.indices]) / n;
        seen += counts[o.indices];
        EXPECT_LE(std::abs(freq - o.probability), 4.0 * std::sqrt(o.probability * (1 - o.probability) / n));
    }
    EXPECT_EQ(seen, n);
}

TEST(Outcomes, CsvExport) {
    const std::string csv = outcomes_to_csv(enumerate_seedings(kLine, 2));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "indices,probability,cost");
    EXPECT_NE(csv.find("0 2,0.29999999999999999,0.33333333333333331\n"), std::string::npos);
}

}  // namespace
}  // namespace kmpp
