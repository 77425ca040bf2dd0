#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "misolab/error.hpp"
#include "misolab/numerics.hpp"
#include "misolab/rng.hpp"
#include "stats.hpp"

using namespace misolab;

TEST_CASE("philox known-answer vectors") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
    RngStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x != c.next_u64());
        CHECK(x != d.next_u64());
    }
}

TEST_CASE("uniform stays in the open unit interval") {
    RngStream rng(1, 0);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 200'000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(sum / n - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("gamma sampler mean and variance") {
    for (double shape : {0.5, 1.0, 3.0, 50.0}) {
        RngStream rng(11, static_cast<std::uint64_t>(shape * 10));
        std::vector<double> xs(100'000);
        for (double& x : xs) x = rng.gamma(shape);
        CHECK(within_sigmas(sample_stats(xs), shape));
    }
}

TEST_CASE("sample_cn: unit power, proper, fourth moment") {
    RngStream rng(42, 0);
    std::vector<double> power(100'000);
    for (double& p : power) p = std::norm(sample_cn(1, rng)[0]);
    const SampleStats s = sample_stats(power);
    CHECK(std::abs(s.mean - 1.0) < 0.02);

    // E‖v‖⁴ = M² + M for v ~ CN(0, I_M).
    for (int m : {1, 2, 4, 8}) {
        RngStream r(43, static_cast<std::uint64_t>(m));
        std::vector<double> q(100'000);
        for (double& x : q) {
            const double n2 = sample_cn(m, r).squaredNorm();
            x = n2 * n2;
        }
        CHECK(within_sigmas(sample_stats(q), m * m + m));
    }

    RngStream r(44, 0);
    std::vector<double> re01(100'000), im01(100'000), re00(100'000);
    for (std::size_t i = 0; i < re01.size(); ++i) {
        const ComplexVec v = sample_cn(3, r);
        re01[i] = (v[0] * v[1]).real();
        im01[i] = (v[0] * v[1]).imag();
        re00[i] = (v[0] * v[0]).real();
    }
    CHECK(within_sigmas(sample_stats(re01), 0.0));
    CHECK(within_sigmas(sample_stats(im01), 0.0));
    CHECK(within_sigmas(sample_stats(re00), 0.0));

    CHECK_THROWS_AS(sample_cn(0, rng), Error);
}

TEST_CASE("digamma") {
    CHECK(digamma(1.0) == doctest::Approx(-0.5772156649).epsilon(1e-10));
    CHECK(digamma(2.0) == doctest::Approx(0.4227843351).epsilon(1e-10));
    CHECK(digamma(5.0) == doctest::Approx(-kEulerGamma + 1.0 + 0.5 + 1.0 / 3 + 0.25).epsilon(1e-14));
    for (double x : {0.01, 0.3, 0.5, 1.5, 2.25, 7.0, 9.99, 10.0, 33.3, 100.0, 1e4, 1e6}) {
        CAPTURE(x);
        CHECK(digamma(x) == doctest::Approx(boost::math::digamma(x)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(digamma(0.0), Error);
    CHECK_THROWS_AS(digamma(-1.0), Error);
}

TEST_CASE("chi-square log mean") {
    CHECK(chi2_log_mean_bits(2) == doctest::Approx(0.16730).epsilon(1e-4));
    CHECK(chi2_log_mean_bits(4) == doctest::Approx(1.60995).epsilon(1e-4));
    CHECK(chi2_log_mean_bits(2) == doctest::Approx((-kEulerGamma + std::numbers::ln2) / std::numbers::ln2));
    for (int k = 2; k <= 400; k += 2) {
        CAPTURE(k);
        const double oracle = (boost::math::digamma(k / 2.0) + std::numbers::ln2) / std::numbers::ln2;
        CHECK(chi2_log_mean_bits(k) == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(chi2_log_mean_bits(k) >= chi2_log_lower_bound_bits(k));
    }
    CHECK(chi2_log_lower_bound_bits(2) == 0.0);
    CHECK(chi2_log_lower_bound_bits(4) == 1.0);
    CHECK(chi2_log_lower_bound_bits(10) == doctest::Approx(3.0));
    CHECK_THROWS_AS(chi2_log_mean_bits(3), Error);
    CHECK_THROWS_AS(chi2_log_mean_bits(0), Error);
    CHECK_THROWS_AS(chi2_log_lower_bound_bits(5), Error);
}

TEST_CASE("gamma density") {
    CHECK(gamma_density(0.0, 1) == 1.0);
    CHECK(gamma_density(0.0, 3) == 0.0);
    CHECK(gamma_density(1.0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    for (int m : {1, 2, 5, 64, 512}) {
        for (double g : {0.1, 1.0, 7.5, 60.0, 500.0}) {
            CAPTURE(m);
            CAPTURE(g);
            CHECK(gamma_density(g, m) ==
                  doctest::Approx(boost::math::gamma_p_derivative(static_cast<double>(m), g)).epsilon(1e-11));
        }
    }
    const double mean2 = integrate([](double g) { return g * gamma_density(g, 2); }, 0.0, 50.0);
    CHECK(std::abs(mean2 - 2.0) < 1e-6);

    for (int m : {1, 4, 256}) {
        const Support s = gamma_effective_support(m);
        const double mass = integrate([m](double g) { return gamma_density(g, m); }, s.lo, s.hi);
        CHECK(std::abs(mass - 1.0) < 1e-12);
    }
}

TEST_CASE("quadrature") {
    // 20 nodes integrate degree-39 polynomials exactly.
    CHECK(gauss_legendre([](double x) { return std::pow(x, 39) + std::pow(x, 10); }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 40 + 1.0 / 11).epsilon(1e-14));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 1e-12, 1.0) ==
          doctest::Approx(2.0 - 2e-6).epsilon(1e-9));
}

TEST_CASE("hermitian helpers") {
    HermitianMat a(2, 2);
    a << 2.0, Complex(0, 1), Complex(0, -1), 2.0;
    CHECK(is_hermitian(a));
    const EigenRange r = hermitian_eigen_range(a);
    CHECK(r.min == doctest::Approx(1.0));
    CHECK(r.max == doctest::Approx(3.0));
    a(0, 1) = Complex(0.0, 2.0);
    CHECK_FALSE(is_hermitian(a));
}
