#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "misolab/channel.hpp"
#include "misolab/numerics.hpp"

namespace misolab {

/// Conditional mean ĥ_t and covariance Ω_t of the fading vector given the
/// message and every output fed back so far in this block.
struct MmseState {
    ComplexVec h_hat;
    HermitianMat omega;
    int t_in_block = 0;

    int dim() const { return static_cast<int>(h_hat.size()); }
};

/// Gaussian prior/posterior u ~ CN(mean, cov).
struct GaussPrior {
    ComplexVec mean;
    HermitianMat cov;
};

/// One scalar observation y = rowᵀu + z, z ~ CN(0, 1).
struct Observation {
    ComplexVec row;
    Complex y;
};

/// What `update` does to Ω after the rank-one downdate.
enum class Hygiene {
    Symmetrize,  ///< (Ω + Ωᴴ)/2 only; the fast path for large trial counts
    Inspect,     ///< symmetrize and report the spectrum, never clip or throw
    Clip,        ///< symmetrize, clip to [0, 1] past 1e-9, throw past 1e-6
};

inline constexpr double kSpectrumSlack = 1e-9;
inline constexpr double kSpectrumHardLimit = 1e-6;

/// Side information from one recursion step.
struct UpdateReport {
    ComplexVec increment;      ///< ĥ_{t+1} - ĥ_t
    double min_eig = 0.0;      ///< spectrum of Ω_{t+1} before clipping (Inspect/Clip only)
    double max_eig = 1.0;
    bool spectrum_checked = false;
    bool clipped = false;
};

/// Block-start state: ĥ = 0, Ω = I_m.
MmseState reset(int m);

/// One step of the recursion
///   ĥ ← ĥ + Ωx*(y - xᵀĥ)/(xᵀΩx* + 1),  Ω ← Ω - Ωx*xᵀΩ/(xᵀΩx* + 1).
UpdateReport update(MmseState& state, const ComplexVec& x, Complex y, Hygiene hygiene = Hygiene::Clip);

/// Multi-output conditioning of u ~ prior on y = A u + z, z ~ CN(0, I_N).
GaussPrior update_general(const GaussPrior& prior, const ComplexMat& a_mat, const ComplexVec& y_vec);

/// One-shot conditioning of the joint Gaussian of (u, y_1..y_T); used as an
/// independent oracle for the sequential recursion.
GaussPrior batch_condition(const GaussPrior& prior, std::span<const Observation> observations);

GaussPrior as_prior(const MmseState& state);

// ---------------------------------------------------------------------------
// Feedback encoders

/// Everything a transmitter may legitimately look at when choosing x_t: the
/// message, the outputs fed back so far in this block, and its own MMSE state
/// (a deterministic function of those two). The channel vector is never here.
struct EncoderInput {
    std::uint64_t message = 0;
    std::span<const Complex> past_outputs;
    const MmseState* estimate = nullptr;
    int antennas = 0;
    double power = 0.0;
    int t_in_block = 0;  ///< 0-based index of the use being encoded
};

using Encoder = std::function<ComplexVec(const EncoderInput&)>;

enum class EncoderKind { Zero, Pilot, ConjugateBeam, RandomMixing };

const char* to_string(EncoderKind kind) noexcept;

/// x = 0 always.
Encoder zero_encoder();
/// √P e_k with k cycling through the antennas.
Encoder pilot_encoder();
/// Message-keyed random direction on the first use, then x ∝ ĥ*.
Encoder conjugate_beam_encoder();
/// Random direction keyed by (seed, message, t), nonlinearly mixed with past
/// outputs in phase and magnitude; ‖x‖² varies in [P/2, 3P/2].
Encoder random_mixing_encoder(std::uint64_t seed);

Encoder make_encoder(EncoderKind kind, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Driving a block

/// Snapshot handed to the observer after each estimator update. `state` is
/// (ĥ_t, Ω_t) with t ≥ 2; x and y are the input/output of use t-1.
struct StepView {
    int t;
    const ComplexVec& h;
    const MmseState& state;
    const ComplexVec& x;
    Complex y;
    const UpdateReport& report;  ///< increment is ĥ_t - ĥ_{t-1}
};

/// Runs `steps` uses of one fresh block with the transmitter's estimator in
/// the loop. Returns the final state (ĥ_{steps+1}, Ω_{steps+1}).
MmseState run_feedback_block(const Encoder& encoder, const ChannelConfig& cfg, RngStream& rng, int steps,
                             Hygiene hygiene, const std::function<void(const StepView&)>& observer = {},
                             ComplexVec* h_out = nullptr);

/// Monte Carlo view of the error covariance at in-block time t (1 ≤ t ≤ T_c,
/// i.e. after t-1 observations).
struct ErrorCovEstimate {
    HermitianMat empirical;        ///< mean of (h - ĥ_t)(h - ĥ_t)ᴴ
    HermitianMat empirical_stderr; ///< entrywise standard error of the above
    HermitianMat mean_reported;    ///< mean of the reported Ω_t
    ComplexMat cross;              ///< mean of ĥ_t (h - ĥ_t)ᴴ
    ComplexMat cross_stderr;
    std::size_t trials = 0;
};

ErrorCovEstimate estimate_error_cov_mc(const Encoder& encoder, const ChannelConfig& cfg, int t, std::size_t trials,
                                       std::uint64_t seed);

}  // namespace misolab
