#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "histq/divergence.hpp"
#include "histq/error.hpp"
#include "oracles.hpp"

using namespace histq;

TEST_CASE("omega rules")
{
    const auto g = OmegaRule::geometric();
    CHECK(g(1) == 0.5);
    CHECK(g(3) == 0.125);
    CHECK_THROWS_AS((void)g(0), Error);
    CHECK_THROWS_AS((void)OmegaRule::geometric(1.0), Error);
    const auto e = OmegaRule::explicit_weights({0.6, 0.4});
    CHECK(e(2) == 0.4);
    CHECK(e(3) == 0.0);
    CHECK_THROWS_AS((void)OmegaRule::explicit_weights({-0.1}), Error);
}

TEST_CASE("B1 closed form and increments")
{
    const auto omega = OmegaRule::geometric();
    const auto s = appendix_b1_series(omega, {2, 3, 10, 1000});
    CHECK(s.label == SeriesLabel::B1);
    CHECK(s.points[0].second == doctest::Approx(0.375).epsilon(1e-15));
    for (const auto& [n, v] : s.points) {
        double closed = static_cast<double>(n - 1) * omega(1);
        for (std::uint64_t i = 2; i <= n; ++i) closed += omega(i);
        CHECK(std::abs(v - 0.5 * closed) <= 1e-12);
    }
    const auto tail = appendix_b1_series(omega, {999, 1000});
    CHECK(std::abs(tail.points[1].second - tail.points[0].second - 0.25) <= 1e-12);
    CHECK_THROWS_AS((void)appendix_b1_series(omega, {1}), Error);
    CHECK_THROWS_AS((void)appendix_b1_series(omega, {4, 3}), Error);
}

TEST_CASE("B1 vectors phi_i are orthonormal and P_N is a projector")
{
    for (std::uint64_t n = 2; n <= 6; ++n) {
        const Matrix p = appendix_b1_projector(n);
        CHECK(is_projector(p, 1e-12));
        CHECK(std::abs(p.trace().real() - static_cast<double>(n - 1)) <= 1e-12);
    }
}

TEST_CASE("B1 reduced formula matches the direct basis-sum evaluation")
{
    for (const auto& omega : {OmegaRule::geometric(), OmegaRule::geometric(0.3), OmegaRule::explicit_weights({0.4, 0.3, 0.2, 0.1})})
        for (std::uint64_t n = 2; n <= 6; ++n) {
            const double reduced = appendix_b1_series(omega, {n}).points[0].second;
            CHECK(std::abs(appendix_b1_direct(omega, n) - reduced) <= 1e-10);
        }
    CHECK_THROWS_AS((void)appendix_b1_direct(OmegaRule::geometric(), 7), Error);
}

TEST_CASE("B2 values, monotonicity and doubling differences")
{
    const auto omega = OmegaRule::geometric();
    const auto small = appendix_b2_series(omega, {1, 2, 3, 17, 64});
    CHECK(small.points[0].second == doctest::Approx(0.25).epsilon(1e-15));
    for (const auto& [n, v] : small.points) CHECK(std::abs(v - oracle::b2_double_sum(n)) <= 1e-12);
    for (std::size_t i = 1; i < small.points.size(); ++i) CHECK(small.points[i].second > small.points[i - 1].second);

    const auto big = appendix_b2_series(omega, powers_of_two(10, 15));
    for (std::size_t i = 0; i + 1 < big.points.size(); ++i) {
        const double diff = big.points[i + 1].second - big.points[i].second;
        CHECK(std::abs(diff - std::numbers::ln2) <= 0.05);
    }
    CHECK(std::abs(big.points[0].second - oracle::b2_double_sum(1024)) <= 1e-10);
    CHECK_THROWS_AS((void)appendix_b2_series(omega, {0}), Error);
}

TEST_CASE("growth_fit classifies the three regimes")
{
    TruncationSeries flat{SeriesLabel::B1, {}, "flat"};
    for (std::uint64_t n : {10, 100, 1000, 5000, 10000}) flat.points.emplace_back(n, 0.75);
    CHECK(growth_fit(flat).classification == Growth::bounded);

    const std::vector<std::uint64_t> ns{10, 30, 100, 300, 1000, 3000, 10000};
    const auto b1 = growth_fit(appendix_b1_series(OmegaRule::geometric(), ns));
    CHECK(b1.classification == Growth::linear);
    CHECK(std::abs(b1.slope - 0.25) <= 0.0025);
    CHECK(b1.residual < kGrowthResidualThreshold);

    const auto b2 = growth_fit(appendix_b2_series(OmegaRule::geometric(), powers_of_two(4, 14)));
    CHECK(b2.classification == Growth::logarithmic);
    CHECK(std::abs(b2.slope - 1.0) <= 0.05);
    CHECK(b2.residual < kGrowthResidualThreshold);

    TruncationSeries few{SeriesLabel::B2, {{1, 0.0}, {10, 1.0}, {100, 2.0}, {1000, 3.0}}, ""};
    CHECK_THROWS_AS((void)growth_fit(few), Error);
    TruncationSeries narrow{SeriesLabel::B2, {{10, 0.0}, {20, 1.0}, {30, 2.0}, {40, 3.0}, {50, 4.0}}, ""};
    CHECK_THROWS_AS((void)growth_fit(narrow), Error);
}

TEST_CASE("h_n truncations form a Cauchy sequence in operator norm")
{
    constexpr std::uint64_t dim = 12;
    for (std::uint64_t n = 2; n <= 2 * dim; n += 3)
        for (std::uint64_t m = 2; m <= 2 * dim; m += 2) {
            const Matrix diff = appendix_b2_operator(n, dim) - appendix_b2_operator(m, dim);
            const double op = Eigen::JacobiSVD<Matrix>(diff).singularValues()(0);
            CHECK(op <= std::max(1.0 / static_cast<double>(n), 1.0 / static_cast<double>(m)) + 1e-14);
        }
}

TEST_CASE("CSV output")
{
    const auto s = appendix_b2_series(OmegaRule::geometric(), {1, 2});
    const auto csv = to_csv(s);
    CHECK(csv.rfind("N,value\n1,0.25\n2,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
