#pragma once

#include <optional>
#include <vector>

#include "misolab/channel.hpp"
#include "misolab/numerics.hpp"

namespace misolab {

/// Training-then-beamforming scheme parameters for one coherence block.
struct SchemeConfig {
    ChannelConfig channel;
    int t_train = 1;              ///< T_τ, pilots per block
    double effective_power = 1.0; ///< P, or κP/√3 under the fourth-moment constraint

    void validate() const;
    int t_data() const { return channel.coherence - t_train; }
};

/// Per-block record of one run of the scheme.
struct SchemeTrace {
    ComplexVec y_train;        ///< T_τ pilot outputs
    ComplexVec h_hat_tau;      ///< scalar MMSE estimate of the first T_τ coefficients
    double g = 0.0;            ///< ‖ĥ_τ‖²
    std::vector<Complex> data_y;
    std::vector<Complex> data_s;
    double sigma_sq = 0.0;     ///< 1/(P+1)

    // diagnostics, computed with knowledge of h
    ComplexVec h_tau;          ///< true first T_τ coefficients
    Complex interference{};    ///< h̃_τᵀ ĥ_τ* / ‖ĥ_τ‖
    double input_energy = 0.0; ///< Σ_t ‖x_t‖² over the block
    double input_energy4 = 0.0;///< Σ_t ‖x_t‖⁴ over the block
    int resamples = 0;         ///< blocks redrawn because ĥ_τ was exactly 0
};

/// ⌈min{M,T_c} / log₂ max{4, min{M,T_c}}⌉; throws DegenerateConfiguration
/// when the result leaves no data phase.
int training_length(int m, int tc);

/// P under the second-moment constraint, κP/√3 under the fourth-moment one.
double effective_power(const ChannelConfig& channel);

/// Scheme defaults for a channel: T_τ from training_length and the effective power.
SchemeConfig make_scheme_config(const ChannelConfig& channel);

/// √power at 1-based index t, zeros elsewhere.
ComplexVec pilot(int t, double power, int m);

/// (√P/(P+1)) y, entrywise.
ComplexVec scalar_mmse(const ComplexVec& y_train, double power);

/// √P (ĥ*/‖ĥ‖) s, zero-padded to m entries.
ComplexVec precode(const ComplexVec& h_hat_tau, double power, Complex s, int m);

/// LMMSE combiner Pg/(Pg + Pσ² + 1), σ² = 1/(P+1).
double combiner_beta(double g, double power);

/// Conditional MSE left by combiner_beta: Pg(Pσ²+1)/(Pg + Pσ² + 1).
double residual_mse(double g, double power);

/// Test hook for simulate_block: fixed fading vector and/or silenced noise.
struct ChannelOverride {
    std::optional<ComplexVec> h;
    bool zero_noise = false;
};

/// One coherence block: T_τ pilots through the channel, scalar MMSE from the
/// fed-back outputs, then T_c - T_τ conjugate-beamformed CN(0,1) symbols.
SchemeTrace simulate_block(const SchemeConfig& cfg, RngStream& rng, const ChannelOverride& override = {});

}  // namespace misolab
