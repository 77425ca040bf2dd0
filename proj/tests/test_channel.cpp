#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "misolab/channel.hpp"
#include "misolab/error.hpp"
#include "stats.hpp"

using namespace misolab;

namespace {

ChannelConfig link(int m, int tc, double p = 1.0) {
    ChannelConfig cfg;
    cfg.antennas = m;
    cfg.coherence = tc;
    cfg.power = p;
    return cfg;
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::InvalidState;
}

}  // namespace

TEST_CASE("config validation") {
    CHECK_NOTHROW(link(2, 1).validate());
    CHECK(kind_of([] { link(1, 4).validate(); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([] { link(4, 0).validate(); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([] { link(4, 4, 0.0).validate(); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([] { link(4, 4, INFINITY).validate(); }) == ErrorKind::InvalidInput);
    auto bad_kappa = link(4, 4);
    bad_kappa.constraint = Constraint::FourthMoment;
    bad_kappa.kappa = -1.0;
    CHECK(kind_of([&] { bad_kappa.validate(); }) == ErrorKind::InvalidInput);
    CHECK(link(64, 8).alpha() == doctest::Approx(0.5));
}

TEST_CASE("new_block draws CN(0, I) fading") {
    RngStream rng(5, 0);
    CHECK(new_block(link(4, 3), rng).h.size() == 4);

    std::vector<double> energy(100'000);
    for (std::size_t i = 0; i < energy.size(); ++i) {
        RngStream r(9, i);
        energy[i] = new_block(link(8, 1), r).h.squaredNorm();
    }
    CHECK(within_sigmas(sample_stats(energy), 8.0));

    RngStream a(77, 12), b(77, 12);
    CHECK(new_block(link(6, 2), a).h == new_block(link(6, 2), b).h);
}

TEST_CASE("transmit adds unit-power noise") {
    const int n = 100'000;
    const double p = 5.0;
    std::vector<double> silent(n), lit(n);
    for (int i = 0; i < n; ++i) {
        RngStream rng(31, static_cast<std::uint64_t>(i));
        BlockState block = new_block(link(3, 2, p), rng);
        silent[i] = std::norm(transmit(block, ComplexVec::Zero(3), rng));
        ComplexVec x = ComplexVec::Zero(3);
        x[0] = std::sqrt(p);
        lit[i] = std::norm(transmit(block, x, rng));
    }
    CHECK(within_sigmas(sample_stats(silent), 1.0));
    CHECK(within_sigmas(sample_stats(lit), p + 1.0));
}

TEST_CASE("noiseless injected channel") {
    ComplexVec h = ComplexVec::Zero(2);
    h[0] = 1.0;
    BlockState block = block_with_channel(link(2, 2, 4.0), h);
    ComplexVec x = ComplexVec::Zero(2);
    x[0] = 2.0;
    CHECK(transmit_with_noise(block, x, Complex{}) == Complex(2.0, 0.0));

    // y = hᵀx, no conjugation.
    h << Complex(0, 1), Complex(2, 0);
    block = block_with_channel(link(2, 1), h);
    x << Complex(0, 1), Complex(1, 1);
    CHECK(transmit_with_noise(block, x, Complex(0.5, 0)) == Complex(-1.0 + 2.0 + 0.5, 2.0));
}

TEST_CASE("block bookkeeping") {
    RngStream rng(1, 1);
    BlockState block = new_block(link(2, 2), rng);
    CHECK(kind_of([&] { transmit(block, ComplexVec::Zero(3), rng); }) == ErrorKind::InvalidInput);
    CHECK(block.t_in_block == 0);
    transmit(block, ComplexVec::Zero(2), rng);
    transmit(block, ComplexVec::Zero(2), rng);
    CHECK(block.t_in_block == 2);
    CHECK(kind_of([&] { transmit(block, ComplexVec::Zero(2), rng); }) == ErrorKind::BlockExhausted);
    CHECK(kind_of([&] { block_with_channel(link(3, 2), ComplexVec::Zero(2)); }) == ErrorKind::InvalidDimension);
}

TEST_CASE("feedback is the identity") {
    static_assert(feedback(Complex(1, 2)) == Complex(1, 2));
    CHECK(feedback(Complex{}) == Complex{});
    RngStream rng(3, 3);
    for (int i = 0; i < 100; ++i) {
        const Complex y = rng.complex_normal();
        const Complex f = feedback(y);
        CHECK(std::memcmp(&f, &y, sizeof y) == 0);
    }
}
