#pragma once

#include <optional>

#include "misolab/numerics.hpp"

namespace misolab {

enum class Constraint { SecondMoment, FourthMoment };

const char* to_string(Constraint c) noexcept;

/// Static scenario parameters of the block-fading MISO link.
struct ChannelConfig {
    int antennas = 2;        ///< M >= 2
    int coherence = 1;       ///< T_c >= 1
    double power = 1.0;      ///< P, 0 < P < inf
    Constraint constraint = Constraint::SecondMoment;
    double kappa = 1.0;      ///< fourth-moment scale; only read for FourthMoment

    /// Throws InvalidInput when any field is out of range.
    void validate() const;

    /// log T_c / log M
    double alpha() const;
};

/// Current block's fading vector plus the position inside the block.
struct BlockState {
    ComplexVec h;
    int t_in_block = 0;
    int coherence = 1;
};

/// Fresh block: h ~ CN(0, I_M), t_in_block = 0.
BlockState new_block(const ChannelConfig& cfg, RngStream& rng);

/// Test hook: a block with a caller-chosen fading vector.
BlockState block_with_channel(const ChannelConfig& cfg, ComplexVec h);

/// y = hᵀx + z with z ~ CN(0, 1) drawn from rng; advances t_in_block.
Complex transmit(BlockState& state, const ComplexVec& x, RngStream& rng);

/// Same as transmit with the noise sample supplied by the caller.
Complex transmit_with_noise(BlockState& state, const ComplexVec& x, Complex noise);

/// Noiseless unit-delay feedback link. Identity on the value; calling it marks
/// the point after which the transmitter may use y.
constexpr Complex feedback(Complex y) noexcept { return y; }

}  // namespace misolab
