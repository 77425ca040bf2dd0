// Linked against the build whose covariance downdate has its sign flipped.
// Every check here passes only if the suite notices the fault.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "misolab/error.hpp"
#include "misolab/montecarlo.hpp"

using namespace misolab;

TEST_CASE("spectrum check catches the flipped downdate") {
    for (EncoderKind kind : {EncoderKind::Pilot, EncoderKind::ConjugateBeam, EncoderKind::RandomMixing}) {
        const LemmaCheckResult r =
            check_covariance_spectrum(make_encoder(kind, 1), ChannelConfig{4, 4, 1.0, Constraint::SecondMoment, 1.0},
                                      100, kDefaultSeed);
        CAPTURE(to_string(kind));
        CHECK_FALSE(r.pass);
        CHECK(r.observed > 0.1);
    }
}

TEST_CASE("clipping hygiene refuses the corrupted state") {
    MmseState s = reset(2);
    try {
        update(s, ComplexVec::Ones(2), Complex{1.0, 0.0}, Hygiene::Clip);
        FAIL("expected InvalidState");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidState);
    }
}

TEST_CASE("batch oracle disagrees with the sequential recursion") {
    bool caught = false;
    try {
        caught = sequential_vs_batch_discrepancy(20, kDefaultSeed) > 1e-3;
    } catch (const Error& e) {
        caught = e.kind() == ErrorKind::InvalidState;
    }
    CHECK(caught);
}
