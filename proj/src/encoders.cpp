#include <cmath>

#include "misolab/error.hpp"
#include "misolab/estimator.hpp"

namespace misolab {

const char* to_string(EncoderKind kind) noexcept {
    switch (kind) {
    case EncoderKind::Zero: return "zero";
    case EncoderKind::Pilot: return "pilot";
    case EncoderKind::ConjugateBeam: return "conjugate-beam";
    case EncoderKind::RandomMixing: return "random-mixing";
    }
    return "unknown";
}

Encoder zero_encoder() {
    return [](const EncoderInput& in) -> ComplexVec { return ComplexVec::Zero(in.antennas); };
}

Encoder pilot_encoder() {
    return [](const EncoderInput& in) -> ComplexVec {
        ComplexVec x = ComplexVec::Zero(in.antennas);
        x[in.t_in_block % in.antennas] = std::sqrt(in.power);
        return x;
    };
}

Encoder conjugate_beam_encoder() {
    return [](const EncoderInput& in) -> ComplexVec {
        const ComplexVec* h_hat = in.estimate ? &in.estimate->h_hat : nullptr;
        const double norm = h_hat ? h_hat->norm() : 0.0;
        if (norm > 0.0) return std::sqrt(in.power) * h_hat->conjugate() / norm;

        RngStream direction(mix64(in.message, 0x6265616d), 0);
        const ComplexVec u = sample_cn(in.antennas, direction);
        return std::sqrt(in.power) * u / u.norm();
    };
}

Encoder random_mixing_encoder(std::uint64_t seed) {
    return [seed](const EncoderInput& in) -> ComplexVec {
        RngStream stream(mix64(seed, in.message), static_cast<std::uint64_t>(in.t_in_block));
        ComplexVec u = sample_cn(in.antennas, stream);

        Complex total{0.0, 0.0};
        for (const Complex& y : in.past_outputs) total += y;
        const Complex last = in.past_outputs.empty() ? Complex{0.0, 0.0} : in.past_outputs.back();
        const double swing = std::tanh(std::abs(last));
        for (int j = 0; j < in.antennas; ++j) u[j] *= 1.0 + swing * std::cos(j + last.real());
        u *= std::polar(1.0, std::arg(total + Complex{1e-300, 0.0}));

        const double norm = u.norm();
        if (norm == 0.0) return ComplexVec::Zero(in.antennas);
        const double energy = in.power * (1.0 + 0.5 * std::tanh(last.real()));
        return std::sqrt(energy) * u / norm;
    };
}

Encoder make_encoder(EncoderKind kind, std::uint64_t seed) {
    switch (kind) {
    case EncoderKind::Zero: return zero_encoder();
    case EncoderKind::Pilot: return pilot_encoder();
    case EncoderKind::ConjugateBeam: return conjugate_beam_encoder();
    case EncoderKind::RandomMixing: return random_mixing_encoder(seed);
    }
    throw Error(ErrorKind::InvalidInput, "unknown encoder kind");
}

}  // namespace misolab
