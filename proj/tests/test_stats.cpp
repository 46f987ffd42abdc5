#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rscan/distributions.hpp"
#include "rscan/genetics.hpp"
#include "rscan/rng.hpp"
#include "rscan/stats.hpp"

using namespace rscan;

namespace {

// Classic integer-score trend statistic with the compact denominator
//   sqrt(n) (n (r1 + 2 r2) - r (n1 + 2 n2))
//   / sqrt(r s (n (n1 + 4 n2) - (n1 + 2 n2)^2)).
// Independent oracle for catt(c, 1/2): affine score changes leave the
// normalized statistic untouched.
double trend_integer_score_oracle(const GenotypeCounts& c) {
    const double r = double(c.r()), s = double(c.s()), n = double(c.n());
    const double n1 = double(c.n1()), n2 = double(c.n2());
    const double num = n * (double(c.r1) + 2.0 * double(c.r2)) - r * (n1 + 2.0 * n2);
    const double den = r * s * (n * (n1 + 4.0 * n2) - (n1 + 2.0 * n2) * (n1 + 2.0 * n2));
    return std::sqrt(n) * num / std::sqrt(den);
}

GenotypeCounts random_table(std::mt19937_64& rng, std::int64_t max_cell = 60) {
    std::uniform_int_distribution<std::int64_t> u(0, max_cell);
    for (;;) {
        GenotypeCounts c{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
        if (c.r() > 0 && c.s() > 0) return c;
    }
}

bool computable_catt_half(const GenotypeCounts& c) {
    try {
        catt(c, 0.5);
        return true;
    } catch (const ZeroVariance&) {
        return false;
    }
}

// In-test replica of the GMS phase-1 statistic: HWD coefficient difference
// over the square root of its delta-method variance at pooled proportions.
double gms_selection_oracle(const GenotypeCounts& c) {
    const double r = double(c.r()), s = double(c.s()), n = double(c.n());
    const double p1 = double(c.r1) / r, p2 = double(c.r2) / r;
    const double q1 = double(c.s1) / s, q2 = double(c.s2) / s;
    const double dd = (p2 - (p2 + p1 / 2) * (p2 + p1 / 2)) -
                      (q2 - (q2 + q1 / 2) * (q2 + q1 / 2));
    const double g1 = double(c.n1()) / n, g2 = double(c.n2()) / n;
    const double b = g2 + g1 / 2, d1 = -b, d2 = 1 - 2 * b;
    const double var = (d1 * d1 * g1 * (1 - g1) + d2 * d2 * g2 * (1 - g2) -
                        2 * d1 * d2 * g1 * g2) *
                       (1 / r + 1 / s);
    return dd / std::sqrt(var);
}

/// One-sample Kolmogorov-Smirnov distance against the standard normal.
double ks_distance_normal(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double n = double(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = normal_cdf(values[i]);
        d = std::max(d, std::max(f - double(i) / n, double(i + 1) / n - f));
    }
    return d;
}

}  // namespace

TEST_CASE("trend test") {
    SUBCASE("null configuration is exactly zero") {
        const GenotypeCounts c{10, 20, 10, 20, 40, 20};
        for (double x : {0.0, 0.25, 0.5, 1.0}) {
            CHECK(catt(c, x).statistic == doctest::Approx(0.0).epsilon(1e-12));
        }
        CHECK(*catt(c, 0.5).p_value == doctest::Approx(1.0));
    }
    SUBCASE("sign follows case enrichment for B") {
        const GenotypeCounts c{10, 20, 30, 30, 20, 10};
        CHECK(catt(c, 0.5).statistic > 0.0);
        CHECK(catt(c, 0.5).statistic ==
              doctest::Approx(std::sqrt(20.0)).epsilon(1e-12));
    }
    SUBCASE("frozen values") {
        const GenotypeCounts c{50, 100, 50, 60, 90, 50};
        CHECK(catt(c, 0.0).statistic == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(catt(c, 0.5).statistic ==
              doctest::Approx(0.690476679759725).epsilon(1e-12));
        CHECK(catt(c, 1.0).statistic ==
              doctest::Approx(1.119785021911709).epsilon(1e-12));
    }
    SUBCASE("x = 1/2 agrees with the integer-score form") {
        std::mt19937_64 rng(41);
        for (int it = 0; it < 3000; ++it) {
            const GenotypeCounts c = random_table(rng);
            if (!computable_catt_half(c)) continue;
            CHECK(catt(c, 0.5).statistic ==
                  doctest::Approx(trend_integer_score_oracle(c)).epsilon(1e-12));
        }
    }
    SUBCASE("column reversal flips the sign and mirrors the score") {
        std::mt19937_64 rng(71);
        std::uniform_real_distribution<double> ux(0.0, 1.0);
        for (int it = 0; it < 2000; ++it) {
            const GenotypeCounts c = random_table(rng);
            const double x = ux(rng);
            try {
                CHECK(catt(c.reversed(), x).statistic ==
                      doctest::Approx(-catt(c, 1.0 - x).statistic).epsilon(1e-12));
            } catch (const ZeroVariance&) {
            }
        }
    }
    SUBCASE("zero variance and bad scores") {
        CHECK_THROWS_AS(catt({10, 0, 0, 20, 0, 0}, 0.5), ZeroVariance);
        CHECK_THROWS_AS(catt({10, 20, 0, 5, 15, 0}, 0.0), ZeroVariance);
        CHECK_THROWS_AS(catt({0, 20, 10, 0, 15, 5}, 1.0), ZeroVariance);
        CHECK_THROWS_AS(catt({10, 20, 30, 30, 20, 10}, 1.5), std::invalid_argument);
        CHECK_THROWS_AS(catt({10, 20, 30, 30, 20, 10}, -0.1), std::invalid_argument);
    }
    SUBCASE("methods are tagged") {
        const GenotypeCounts c{10, 20, 30, 30, 20, 10};
        CHECK(catt(c, 0.0).method == Method::CATT0);
        CHECK(catt(c, 0.5).method == Method::CATT_HALF);
        CHECK(catt(c, 1.0).method == Method::CATT1);
    }
}

TEST_CASE("Pearson chi-square") {
    SUBCASE("proportional rows give zero") {
        const TestResult t = pearson({10, 20, 10, 20, 40, 20});
        CHECK(t.statistic == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(*t.p_value == doctest::Approx(1.0));
    }
    SUBCASE("hand-computed table") {
        const TestResult t = pearson({10, 20, 30, 30, 20, 10});
        CHECK(t.statistic == doctest::Approx(20.0).epsilon(1e-12));
        CHECK(*t.p_value == doctest::Approx(std::exp(-10.0)).epsilon(1e-10));
    }
    SUBCASE("invariant under column reversal") {
        std::mt19937_64 rng(43);
        for (int it = 0; it < 2000; ++it) {
            const GenotypeCounts c = random_table(rng);
            try {
                const double t = pearson(c).statistic;
                CHECK(pearson(c.reversed()).statistic ==
                      doctest::Approx(t).epsilon(1e-12));
            } catch (const DegenerateTable&) {
            }
        }
    }
    SUBCASE("empty column reduces the degrees of freedom") {
        const GenotypeCounts c{10, 0, 30, 20, 0, 10};
        const TestResult t = pearson(c);
        // collapse to a 2x2 table: same statistic, df = 1
        double expect = 0.0;
        const double n = 70.0, r = 40.0, s = 30.0;
        const double cols[2][3] = {{10, 20, 30}, {30, 10, 40}};  // {r_i, s_i, n_i}
        for (const auto& col : cols) {
            const double er = col[2] * r / n, es = col[2] * s / n;
            expect += (col[0] - er) * (col[0] - er) / er +
                      (col[1] - es) * (col[1] - es) / es;
        }
        CHECK(t.statistic == doctest::Approx(expect).epsilon(1e-12));
        CHECK(*t.p_value == doctest::Approx(chisq_sf(expect, 1)).epsilon(1e-12));
    }
    SUBCASE("degenerate tables") {
        CHECK_THROWS_AS(pearson({10, 0, 0, 20, 0, 0}), DegenerateTable);
        CHECK_THROWS_AS(pearson({0, 0, 0, 20, 10, 5}), DegenerateTable);
    }
}

TEST_CASE("MAX3") {
    SUBCASE("null configuration") {
        CHECK(max3({10, 20, 10, 20, 40, 20}).statistic ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("equals the maximum of the component magnitudes") {
        const GenotypeCounts c{50, 100, 50, 60, 90, 50};
        CHECK(max3(c).statistic ==
              doctest::Approx(1.119785021911709).epsilon(1e-12));
    }
    SUBCASE("dominates every component and survives reversal") {
        std::mt19937_64 rng(47);
        for (int it = 0; it < 2000; ++it) {
            const GenotypeCounts c = random_table(rng);
            try {
                const double m = max3(c).statistic;
                for (double x : {0.0, 0.5, 1.0}) {
                    try {
                        CHECK(m >= std::fabs(catt(c, x).statistic) - 1e-12);
                    } catch (const ZeroVariance&) {
                    }
                }
                CHECK(max3(c.reversed()).statistic == doctest::Approx(m).epsilon(1e-12));
            } catch (const DegenerateTable&) {
            }
        }
    }
    SUBCASE("skips incomputable components") {
        // empty G2 column: Z_0 has zero variance, the others carry on
        const GenotypeCounts c{10, 30, 0, 25, 15, 0};
        const double m = max3(c).statistic;
        CHECK(m == doctest::Approx(std::max(std::fabs(catt(c, 0.5).statistic),
                                            std::fabs(catt(c, 1.0).statistic)))
                       .epsilon(1e-12));
        CHECK_THROWS_AS(max3({10, 0, 0, 20, 0, 0}), DegenerateTable);
    }
}

TEST_CASE("MIN2") {
    SUBCASE("null configuration gives 1") {
        CHECK(min2({10, 20, 10, 20, 40, 20}).statistic == doctest::Approx(1.0));
    }
    SUBCASE("never exceeds the trend p-value; reversal-invariant") {
        std::mt19937_64 rng(53);
        for (int it = 0; it < 2000; ++it) {
            const GenotypeCounts c = random_table(rng);
            try {
                const double m = min2(c).statistic;
                CHECK(m <= *catt(c, 0.5).p_value + 1e-15);
                CHECK(min2(c.reversed()).statistic == doctest::Approx(m).epsilon(1e-12));
            } catch (const std::runtime_error&) {
            }
        }
    }
    SUBCASE("pure dominance signal is caught by the Pearson side") {
        const GenotypeCounts c{10, 80, 10, 40, 20, 40};
        CHECK(catt(c, 0.5).statistic == doctest::Approx(0.0));
        CHECK(min2(c).statistic == doctest::Approx(*pearson(c).p_value).epsilon(1e-12));
    }
}

TEST_CASE("HWD trend test") {
    SUBCASE("identical genotype proportions give zero") {
        CHECK(hwdtt({10, 20, 10, 20, 40, 20}).statistic ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("both arms at HWE give zero") {
        CHECK(hwdtt({25, 50, 25, 36, 48, 16}).statistic ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("frozen value") {
        CHECK(hwdtt({50, 100, 50, 60, 90, 50}).statistic ==
              doctest::Approx(-0.975609756097561).epsilon(1e-12));
    }
    SUBCASE("invariant under column reversal") {
        std::mt19937_64 rng(59);
        for (int it = 0; it < 2000; ++it) {
            const GenotypeCounts c = random_table(rng);
            try {
                CHECK(hwdtt(c.reversed()).statistic ==
                      doctest::Approx(hwdtt(c).statistic).epsilon(1e-9));
            } catch (const DegenerateTable&) {
            }
        }
    }
    SUBCASE("degenerate margins") {
        CHECK_THROWS_AS(hwdtt({10, 0, 0, 20, 0, 0}), DegenerateTable);
        CHECK_THROWS_AS(hwdtt({0, 0, 10, 0, 0, 20}), DegenerateTable);
    }
}

TEST_CASE("risk-allele orientation") {
    SUBCASE("negative trend swaps") {
        const auto [oriented, swapped] = orient_risk_allele({30, 20, 10, 10, 20, 30});
        CHECK(swapped);
        CHECK(oriented == GenotypeCounts{10, 20, 30, 30, 20, 10});
    }
    SUBCASE("positive trend keeps") {
        const auto [oriented, swapped] = orient_risk_allele({10, 20, 30, 30, 20, 10});
        CHECK_FALSE(swapped);
        CHECK(oriented == GenotypeCounts{10, 20, 30, 30, 20, 10});
    }
    SUBCASE("exact tie keeps") {
        const GenotypeCounts c{10, 80, 10, 40, 20, 40};
        REQUIRE(catt(c, 0.5).statistic == 0.0);
        const auto [oriented, swapped] = orient_risk_allele(c);
        CHECK_FALSE(swapped);
        CHECK(oriented == c);
    }
}

TEST_CASE("genetic model selection statistic") {
    SUBCASE("threshold rule and phase-2 score") {
        std::mt19937_64 rng(61);
        for (int it = 0; it < 2000; ++it) {
            const GenotypeCounts c = random_table(rng);
            try {
                const GmsResult g = gms(c);
                const auto [oriented, swapped] = orient_risk_allele(c);
                CHECK(g.oriented == swapped);
                CHECK(g.z_hwdtt ==
                      doctest::Approx(gms_selection_oracle(oriented)).epsilon(1e-12));
                double score = 0.5;
                if (g.z_hwdtt > 1.645) score = 0.0;
                if (g.z_hwdtt < -1.645) score = 1.0;
                CHECK((g.selected_model == GmsModel::REC) == (g.z_hwdtt > 1.645));
                CHECK((g.selected_model == GmsModel::DOM) == (g.z_hwdtt < -1.645));
                CHECK(g.statistic ==
                      doctest::Approx(catt(oriented, score).statistic).epsilon(1e-12));
            } catch (const std::runtime_error&) {
            }
        }
    }
    SUBCASE("zero-HWDTT table selects the additive score") {
        const GmsResult g = gms({10, 20, 10, 20, 40, 20});
        CHECK(g.selected_model == GmsModel::ADDMUL);
        CHECK(g.z_hwdtt == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(g.statistic == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("strong dominance pattern selects DOM with Z_1") {
        const GenotypeCounts c{10, 80, 10, 40, 20, 40};
        const GmsResult g = gms(c);
        REQUIRE(g.z_hwdtt < -1.645);
        CHECK(g.selected_model == GmsModel::DOM);
        CHECK(g.statistic == doctest::Approx(catt(c, 1.0).statistic).epsilon(1e-12));
    }
    SUBCASE("statistic magnitude ignores the allele labeling") {
        std::mt19937_64 rng(67);
        for (int it = 0; it < 2000; ++it) {
            const GenotypeCounts c = random_table(rng);
            try {
                if (catt(c, 0.5).statistic == 0.0) continue;  // tie keeps both labelings
                const GmsResult a = gms(c);
                const GmsResult b = gms(c.reversed());
                CHECK(std::fabs(a.statistic) ==
                      doctest::Approx(std::fabs(b.statistic)).epsilon(1e-12));
                CHECK(a.selected_model == b.selected_model);
            } catch (const std::runtime_error&) {
            }
        }
    }
    SUBCASE("configurable threshold") {
        const GenotypeCounts c{10, 80, 10, 40, 20, 40};
        const GmsResult strict = gms(c, 1e9);
        CHECK(strict.selected_model == GmsModel::ADDMUL);
    }
}

TEST_CASE("null calibration of the statistics") {
    const GenotypeDist g = hwe_genotype_dist(0.3);
    const std::int64_t half = 500;
    const int n_tables = 100000;

    int trend_rejections = 0;
    std::vector<double> hwdtt_values;
    hwdtt_values.reserve(n_tables);
    int gms_counts[3] = {0, 0, 0};

    for (int it = 0; it < n_tables; ++it) {
        auto rng = substream(987654321, std::uint64_t(it));
        const GenotypeCounts c = sample_counts(rng, half, half, g, g);
        if (std::fabs(catt(c, 0.5).statistic) > 1.96) ++trend_rejections;
        hwdtt_values.push_back(hwdtt(c).statistic);
        const GmsResult sel = gms(c);
        ++gms_counts[sel.selected_model == GmsModel::REC      ? 0
                     : sel.selected_model == GmsModel::ADDMUL ? 1
                                                              : 2];
    }

    const double trend_size = double(trend_rejections) / n_tables;
    CHECK(std::fabs(trend_size - 0.05) < 0.003);

    // asymptotic normality of the HWD trend statistic (alpha = 0.01)
    const double ks = ks_distance_normal(std::move(hwdtt_values));
    CHECK(ks < 1.62762 / std::sqrt(double(n_tables)));

    // one-sided 5% tails at the default threshold
    CHECK(std::fabs(double(gms_counts[0]) / n_tables - 0.05) < 0.01);
    CHECK(std::fabs(double(gms_counts[1]) / n_tables - 0.90) < 0.015);
    CHECK(std::fabs(double(gms_counts[2]) / n_tables - 0.05) < 0.01);
}
