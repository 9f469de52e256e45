#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <bellsim/stats.hpp>
#include <bellsim/summation.hpp>

#include "testutil.hpp"

using namespace bellsim;

TEST_CASE("compensated summation survives catastrophic cancellation") {
    NeumaierSum s;
    for (double v : {1.0, 1e100, 1.0, -1e100}) s.add(v);
    CHECK(s.value() == 2.0);

    NeumaierSum tiny;
    for (int i = 0; i < 10'000'000; ++i) tiny.add(0.1);
    CHECK(tiny.value() == Catch::Approx(1e6).epsilon(1e-12));
}

TEST_CASE("chi-square survival function matches reference values") {
    CHECK(chi_square_survival(0.0, 1) == 1.0);
    CHECK(chi_square_survival(1.0, 1) ==
          Catch::Approx(testutil::chi2_sf_1_df1).epsilon(1e-12));
    CHECK(chi_square_survival(3.84, 1) ==
          Catch::Approx(testutil::chi2_sf_3_84_df1).epsilon(1e-12));
    CHECK(chi_square_survival(10.0, 4) ==
          Catch::Approx(testutil::chi2_sf_10_df4).epsilon(1e-12));
    CHECK(chi_square_survival(23.6848, 14) ==
          Catch::Approx(testutil::chi2_sf_23_6848_df14).epsilon(1e-12));
    CHECK(chi_square_survival(123.2, 100) ==
          Catch::Approx(testutil::chi2_sf_123_2_df100).epsilon(1e-12));
    CHECK(chi_square_survival(4.0, 10) ==
          Catch::Approx(testutil::chi2_sf_4_df10).epsilon(1e-12));
    CHECK(chi_square_survival(18.307, 10) ==
          Catch::Approx(testutil::chi2_sf_18_307_df10).epsilon(1e-12));

    CHECK_THROWS_AS(chi_square_survival(-1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(chi_square_survival(1.0, 0), std::invalid_argument);
}

TEST_CASE("goodness of fit pools sparse bins") {
    // N = 10 at p = 0.5 leaves only bins {1} and {>1}: observed 6 and 4
    // against expected 5 and 5
    const KCounts counts{{1, 6}, {2, 3}, {3, 1}};
    const GofResult r = chi_square_geometric_fit(counts, 0.5);
    CHECK(r.df == 1);
    CHECK(r.statistic == Catch::Approx(0.4).epsilon(1e-12));
    CHECK(r.p_value == Catch::Approx(chi_square_survival(0.4, 1)).epsilon(1e-12));

    CHECK_THROWS_AS(chi_square_geometric_fit(KCounts{}, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(chi_square_geometric_fit(counts, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(chi_square_geometric_fit(counts, 1.0),
                    std::invalid_argument);
}

TEST_CASE("goodness of fit accepts matching data and rejects a wrong p") {
    // independent generator so the test does not lean on the library RNG
    std::mt19937_64 gen(2024);
    std::geometric_distribution<std::uint64_t> dist(0.4);
    KCounts counts;
    for (int i = 0; i < 100'000; ++i) ++counts[dist(gen) + 1];

    CHECK(chi_square_geometric_fit(counts, 0.4).p_value >= 0.01);
    CHECK(chi_square_geometric_fit(counts, 0.5).p_value < 1e-6);
}

TEST_CASE("homogeneity test on hand-built tables") {
    // identical rows: statistic 0, p = 1
    const KCounts row{{1, 30}, {2, 20}};
    const GofResult same = chi_square_homogeneity({row, row});
    CHECK(same.statistic == 0.0);
    CHECK(same.df == 1);
    CHECK(same.p_value == 1.0);

    // strongly different rows: all four cells expect 25
    const GofResult diff = chi_square_homogeneity(
        {KCounts{{1, 45}, {2, 5}}, KCounts{{1, 5}, {2, 45}}});
    CHECK(diff.df == 1);
    CHECK(diff.statistic == Catch::Approx(64.0).epsilon(1e-12));
    CHECK(diff.p_value < 1e-10);

    CHECK_THROWS_AS(chi_square_homogeneity({row}), std::invalid_argument);
    CHECK_THROWS_AS(chi_square_homogeneity({row, KCounts{}}),
                    std::invalid_argument);
}

TEST_CASE("homogeneity pools tail columns") {
    // columns 3..7 individually fall below the expected-count floor and
    // merge into one tail column
    const KCounts g{{1, 100}, {2, 50}, {3, 3}, {7, 2}};
    const GofResult r = chi_square_homogeneity({g, g, g});
    CHECK(r.df == (3 - 1) * (3 - 1));
    CHECK(r.statistic == 0.0);
}

TEST_CASE("kolmogorov-smirnov statistic and critical value") {
    const auto uniform_cdf = [](double x) { return x; };
    const double d = ks_statistic({0.5, 0.9, 0.1}, uniform_cdf);
    CHECK(d == Catch::Approx(7.0 / 30.0).epsilon(1e-14));

    CHECK(ks_critical_value(1, 0.01) ==
          Catch::Approx(testutil::ks_coeff_alpha_0_01).epsilon(1e-12));
    CHECK(ks_critical_value(100, 0.05) ==
          Catch::Approx(testutil::ks_coeff_alpha_0_05 / 10.0).epsilon(1e-12));

    CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, uniform_cdf),
                    std::invalid_argument);
    CHECK_THROWS_AS(ks_critical_value(0, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(ks_critical_value(10, 0.0), std::invalid_argument);
}
