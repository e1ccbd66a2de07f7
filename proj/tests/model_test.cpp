#include <atprank/error.hpp>
#include <atprank/model.hpp>

#include <support/synthetic.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

namespace atprank {
namespace {

const Date kDay = Date{std::chrono::year{2015} / 6 / 1};

TEST(Predict, EqualPointsIsEven) {
    const auto p = predict(0.8722, 1000, 1000);
    EXPECT_EQ(p.ratio, 1.0);
    EXPECT_DOUBLE_EQ(p.probability, 0.5);
}

TEST(Predict, UnitAlphaIsPlainRatio) {
    EXPECT_NEAR(predict(1.0, 2000, 1000).probability, 2.0 / 3.0, 1e-15);
}

TEST(Predict, TenToOneAtFittedAlpha) {
    // 10^0.8722 / (1 + 10^0.8722), evaluated with 40-digit arithmetic.
    EXPECT_NEAR(predict(0.8722, 10000, 1000).probability, 0.881667309685, 5e-13);
}

TEST(Predict, RejectsNonPositiveArguments) {
    EXPECT_THROW(predict(0.0, 1, 1), DomainError);
    EXPECT_THROW(predict(1.0, 0, 1), DomainError);
    EXPECT_THROW(predict(1.0, 1, -3), DomainError);
    try {
        predict(1.0, 5, 0);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("r_j"), std::string::npos);
    }
}

TEST(Predict, StableFormMatchesTextbookForm) {
    for (double log_ratio = -6.0; log_ratio <= 6.0; log_ratio += 0.25) {
        const double ratio = std::pow(10.0, log_ratio);
        for (double alpha : {0.2, 0.8722, 1.0, 2.5}) {
            const double x = std::pow(ratio, alpha);
            const double textbook = x / (1.0 + x);
            if (std::isfinite(textbook)) EXPECT_NEAR(logistic_ratio(alpha, ratio), textbook, 1e-12);
        }
    }
    EXPECT_EQ(logistic_ratio(5.0, 1e300), 1.0);
    EXPECT_EQ(logistic_ratio(5.0, 1e-300), 0.0);
}

TEST(ModelProperties, SymmetryScaleInvarianceMonotonicity) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> log_points(0.0, std::log(20000.0));
    std::uniform_real_distribution<double> alpha_dist(0.05, 3.0);
    std::uniform_real_distribution<double> log_scale(-5.0, 5.0);
    for (int k = 0; k < 20000; ++k) {
        const double a = alpha_dist(gen);
        const double ri = std::exp(log_points(gen));
        const double rj = std::exp(log_points(gen));
        const auto pij = predict(a, ri, rj);
        const auto pji = predict(a, rj, ri);
        ASSERT_NEAR(pij.probability + pji.probability, 1.0, 1e-12);

        const double c = std::exp(log_scale(gen));
        const auto scaled = predict(a, c * ri, c * rj);
        ASSERT_NEAR(scaled.ratio, pij.ratio, 4 * std::numeric_limits<double>::epsilon() * pij.ratio);
        ASSERT_NEAR(scaled.probability, pij.probability, 1e-12);
        const double pow2 = std::ldexp(1.0, static_cast<int>(k % 41) - 20);
        ASSERT_EQ(predict(a, pow2 * ri, pow2 * rj).ratio, pij.ratio);

        const auto higher = predict(a, ri * 1.001, rj);
        ASSERT_GE(higher.probability, pij.probability);
        if (pij.probability * (1 - pij.probability) > 1e-8) ASSERT_GT(higher.probability, pij.probability);
    }
}

TEST(ModelProperties, MonotoneInAlphaAwayFromEvenRatio) {
    for (double ratio : {0.05, 0.5, 0.99, 1.01, 2.0, 20.0}) {
        double prev = logistic_ratio(0.1, ratio);
        for (double a = 0.2; a <= 3.0; a += 0.1) {
            const double p = logistic_ratio(a, ratio);
            if (ratio > 1) {
                EXPECT_GT(p, prev);
            } else {
                EXPECT_LT(p, prev);
            }
            prev = p;
        }
    }
}

TEST(BrierScore, EvenMatchesScoreAQuarter) {
    const std::vector<MatchObservation> m = {{500, 500, kDay}, {1200, 1200, kDay}};
    for (double a : {0.1, 0.8722, 4.0}) EXPECT_DOUBLE_EQ(brier_score(a, m), 0.25);
}

TEST(BrierScore, LargeAlphaLimitIsZeroWhenFavouritesAlwaysWin) {
    const std::vector<MatchObservation> m = {{2000, 1000, kDay}, {900, 100, kDay}, {51, 50, kDay}};
    EXPECT_LT(brier_score(2000.0, m), 1e-12);
    EXPECT_GT(brier_score(1.0, m), brier_score(10.0, m));
}

TEST(BrierScore, EmptyInputIsNoMatches) {
    try {
        brier_score(1.0, {});
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_STREQ(e.what(), "no matches");
    }
    EXPECT_THROW(baseline_brier({}), DomainError);
    EXPECT_THROW(fit_alpha({}), DomainError);
}

TEST(BrierScore, OrientationInvariance) {
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto m = testing::synthetic_matches(0.87, 2000, seed, 0.01, 100);
        for (double a : {0.3, 0.8722, 1.7}) {
            EXPECT_NEAR(brier_score(a, m), brier_score_two_sided(a, m), 1e-12);
        }
    }
}

TEST(BrierScore, ReductionIsReproducible) {
    const auto m = testing::synthetic_matches(0.87, 5000, 11);
    const double first = brier_score(0.8722, m);
    EXPECT_EQ(first, brier_score(0.8722, m));
}

TEST(BaselineBrier, HardPredictor) {
    const std::vector<MatchObservation> favourites = {{2000, 1000, kDay}, {900, 100, kDay}};
    EXPECT_EQ(baseline_brier(favourites), 0.0);
    const std::vector<MatchObservation> upset = {{100, 900, kDay}};
    EXPECT_EQ(baseline_brier(upset), 1.0);
    const std::vector<MatchObservation> mixed = {{100, 900, kDay}, {500, 500, kDay}, {900, 100, kDay}, {800, 10, kDay}};
    EXPECT_DOUBLE_EQ(baseline_brier(mixed), (1.0 + 0.25) / 4.0);
}

TEST(FitAlpha, RejectsBadBrackets) {
    const auto m = testing::synthetic_matches(0.87, 100, 1);
    EXPECT_THROW(fit_alpha(m, {0.0, 5.0, 1e-6}), DomainError);
    EXPECT_THROW(fit_alpha(m, {2.0, 1.0, 1e-6}), DomainError);
    EXPECT_THROW(fit_alpha(m, {0.1, 5.0, 0.0}), DomainError);
}

TEST(FitAlpha, RecoversGeneratingAlpha) {
    const auto m = testing::synthetic_matches(0.87, 50000, 2024);
    const auto fit = fit_alpha(m);
    EXPECT_NEAR(fit.alpha, 0.87, 0.03);
    ASSERT_TRUE(fit.fitted_e2 && fit.n_matches);
    EXPECT_EQ(*fit.n_matches, 50000u);
    EXPECT_DOUBLE_EQ(*fit.fitted_e2, brier_score(fit.alpha, m));
    const auto again = fit_alpha(m);
    EXPECT_EQ(fit.alpha, again.alpha);
}

TEST(FitAlpha, AgreesWithGridScan) {
    // Grid resolution (hi - lo) / 9999 sets the agreement scale; tol is
    // chosen at that resolution so "within 2 tol" is attainable.
    const auto m = testing::synthetic_matches(1.3, 20000, 5);
    const double lo = 0.01, hi = 5.0;
    const double step = (hi - lo) / 9999.0;
    const auto golden = fit_alpha(m, {lo, hi, step});
    const auto grid = grid_scan_alpha(m, lo, hi, 10000);
    EXPECT_LE(std::abs(golden.alpha - grid.alpha), 2 * step);
    EXPECT_LE(*golden.fitted_e2, *grid.fitted_e2 + 1e-9);
}

TEST(FitAlpha, FitMinimisesObjectiveLocally) {
    const auto m = testing::synthetic_matches(0.5, 10000, 9);
    const auto fit = fit_alpha(m);
    for (double d : {1e-3, 1e-2, 1e-1}) {
        EXPECT_LE(*fit.fitted_e2, brier_score(fit.alpha + d, m));
        EXPECT_LE(*fit.fitted_e2, brier_score(fit.alpha - d, m));
    }
}

TEST(ModelParams, Validation) {
    ModelParams ok{0.87, 0.2, 10};
    EXPECT_NO_THROW(ok.validate());
    EXPECT_THROW((ModelParams{0.0, std::nullopt, std::nullopt}.validate()), DomainError);
    EXPECT_THROW((ModelParams{1.0, 1.5, std::nullopt}.validate()), DomainError);
}

TEST(ParamsDocument, RoundTrip) {
    ParamsDocument doc{{0.87221234567890123, 0.20521, 23456}, "abc123", kDay, kDay + std::chrono::days{30}};
    std::stringstream ss;
    write_params(ss, doc);
    const auto back = read_params(ss);
    EXPECT_EQ(back.params.alpha, doc.params.alpha);
    EXPECT_EQ(back.params.fitted_e2, doc.params.fitted_e2);
    EXPECT_EQ(back.params.n_matches, doc.params.n_matches);
    EXPECT_EQ(back.dataset_fingerprint, "abc123");
    EXPECT_EQ(back.first_date, doc.first_date);
    EXPECT_EQ(back.last_date, doc.last_date);
}

TEST(ParamsDocument, MissingAlphaIsSchemaError) {
    std::stringstream ss("fitted_e2 = 0.2\n");
    EXPECT_THROW(read_params(ss), SchemaError);
}

TEST(Fingerprint, DependsOnContent) {
    const std::vector<MatchObservation> a = {{2000, 1000, kDay}};
    const std::vector<MatchObservation> b = {{2000, 1001, kDay}};
    EXPECT_EQ(dataset_fingerprint(a), dataset_fingerprint(a));
    EXPECT_NE(dataset_fingerprint(a), dataset_fingerprint(b));
    EXPECT_EQ(dataset_fingerprint(a).size(), 64u);
}

TEST(MatchObservation, RejectsZeroPoints) {
    EXPECT_THROW(MatchObservation(0, 10, kDay), DomainError);
    EXPECT_THROW(MatchObservation(10, 0, kDay), DomainError);
    EXPECT_THROW(MatchObservation(10, std::nan(""), kDay), DomainError);
}

}  // namespace
}  // namespace atprank
