#include "misolab/channel.hpp"

#include <cmath>
#include <string>

#include "misolab/error.hpp"

namespace misolab {

const char* to_string(Constraint c) noexcept {
    return c == Constraint::SecondMoment ? "second" : "fourth";
}

void ChannelConfig::validate() const {
    if (antennas < 2) throw Error(ErrorKind::InvalidInput, "need M >= 2, got " + std::to_string(antennas));
    if (coherence < 1) throw Error(ErrorKind::InvalidInput, "need T_c >= 1, got " + std::to_string(coherence));
    if (!(power > 0.0) || !std::isfinite(power)) throw Error(ErrorKind::InvalidInput, "need 0 < P < inf");
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw Error(ErrorKind::InvalidInput, "need kappa > 0");
}

double ChannelConfig::alpha() const {
    return std::log(static_cast<double>(coherence)) / std::log(static_cast<double>(antennas));
}

BlockState new_block(const ChannelConfig& cfg, RngStream& rng) {
    return BlockState{sample_cn(cfg.antennas, rng), 0, cfg.coherence};
}

BlockState block_with_channel(const ChannelConfig& cfg, ComplexVec h) {
    if (h.size() != cfg.antennas) throw Error(ErrorKind::InvalidDimension, "injected h must have dim M");
    return BlockState{std::move(h), 0, cfg.coherence};
}

Complex transmit_with_noise(BlockState& state, const ComplexVec& x, Complex noise) {
    if (x.size() != state.h.size())
        throw Error(ErrorKind::InvalidInput, "input has dim " + std::to_string(x.size()) + ", channel has " +
                                                 std::to_string(state.h.size()));
    if (state.t_in_block >= state.coherence) throw Error(ErrorKind::BlockExhausted, "all T_c uses consumed");
    ++state.t_in_block;
    return (state.h.transpose() * x).value() + noise;
}

Complex transmit(BlockState& state, const ComplexVec& x, RngStream& rng) {
    if (state.t_in_block >= state.coherence) throw Error(ErrorKind::BlockExhausted, "all T_c uses consumed");
    return transmit_with_noise(state, x, rng.complex_normal());
}

}  // namespace misolab
