#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "misolab/estimator.hpp"
#include "misolab/parallel.hpp"
#include "misolab/scheme.hpp"

namespace misolab {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

/// Sample mean with its standard error (sample std / √trials).
struct McEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t trials = 0;
    std::uint64_t master_seed = 0;
};

McEstimate summarize(std::span<const double> samples, std::uint64_t seed);
McEstimate summarize_sums(double sum, double sum_sq, std::size_t trials, std::uint64_t seed);

/// Outcome of one Monte Carlo (or exact) inequality check.
///
/// One-sided:  pass ⇔ observed ≤ bound + 3·stderr.
/// Two-sided:  pass ⇔ |observed - bound| ≤ 3·stderr.
struct LemmaCheckResult {
    std::string lemma_id;
    double observed = 0.0;
    double standard_error = 0.0;
    double bound = 0.0;
    double slack_sigmas = 0.0;  ///< (bound - observed)/stderr; ±inf for exact checks
    bool pass = false;
    bool two_sided = false;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::string context;        ///< free-form "encoder=pilot M=4 ..." tag
};

inline constexpr double kSigmaSlack = 3.0;

LemmaCheckResult one_sided_check(std::string id, const McEstimate& est, double bound, std::string context = {});
LemmaCheckResult two_sided_check(std::string id, const McEstimate& est, double target, std::string context = {});
/// Deterministic check with zero standard error: observed ≤ bound.
LemmaCheckResult exact_check(std::string id, double observed, double bound, std::size_t trials, std::uint64_t seed,
                             std::string context = {});

// ---------------------------------------------------------------------------
// Scheme rate

/// Per-block rate proxy ((T_c - T_τ)/T_c) log₂(1 + Pg/(Pσ² + 1)) averaged over
/// simulated blocks; trial i uses stream (seed, i).
McEstimate estimate_scheme_rate(const SchemeConfig& cfg, std::size_t trials, std::uint64_t seed,
                                Execution exec = Execution::Parallel);

// ---------------------------------------------------------------------------
// Estimator moment checks

/// Per-time moments over many blocks driven by one encoder. Index t runs over
/// 1..T_c (entry 0 unused); increments are defined for t in 1..T_c-1.
struct BlockMoments {
    ChannelConfig cfg;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<McEstimate> hhat_sq;    ///< ‖ĥ_t‖²
    std::vector<McEstimate> hhat_4th;   ///< ‖ĥ_t‖⁴
    std::vector<McEstimate> incr_sq;    ///< ‖ĥ_{t+1} - ĥ_t‖²
    std::vector<McEstimate> incr_4th;   ///< ‖ĥ_{t+1} - ĥ_t‖⁴
    std::vector<McEstimate> genie_sq;   ///< |‖ĥ_t‖ + z̃|², z̃ ~ CN(0, 1)
};

BlockMoments collect_block_moments(const Encoder& encoder, const ChannelConfig& cfg, std::size_t trials,
                                   std::uint64_t seed, Execution exec = Execution::Parallel);

/// E‖ĥ_t‖² ≤ min{M, k} and E‖ĥ_t‖⁴ ≤ min{M² + 2M, 2k² + 5k}, k = (t-1) mod T_c.
std::array<LemmaCheckResult, 2> check_hhat_power(const BlockMoments& moments, int t);
/// E‖ĥ_{t+1} - ĥ_t‖² ≤ 1 and E‖ĥ_{t+1} - ĥ_t‖⁴ ≤ 3.
std::array<LemmaCheckResult, 2> check_increment_moments(const BlockMoments& moments, int t);
/// E|ỹ_t|² ≤ min{M, T_c} + 1.
LemmaCheckResult check_genie_power(const BlockMoments& moments, int t);

std::array<LemmaCheckResult, 2> verify_hhat_power(const Encoder& encoder, const ChannelConfig& cfg, int t,
                                                  std::size_t trials, std::uint64_t seed);
std::array<LemmaCheckResult, 2> verify_increment_moments(const Encoder& encoder, const ChannelConfig& cfg, int t,
                                                         std::size_t trials, std::uint64_t seed);
LemmaCheckResult verify_genie_power(const Encoder& encoder, const ChannelConfig& cfg, int t, std::size_t trials,
                                    std::uint64_t seed);

/// Runs `runs` blocks with Hygiene::Inspect and reports the worst excursion of
/// any Ω_t eigenvalue outside [0, 1] (observed) against the 1e-9 slack.
LemmaCheckResult check_covariance_spectrum(const Encoder& encoder, const ChannelConfig& cfg, std::size_t runs,
                                           std::uint64_t seed);

// ---------------------------------------------------------------------------
// Gaussian quadratic forms

/// 2 tr(AΩAΩ) + (tr AΩ)². This is the real-Gaussian fourth-moment identity;
/// for proper complex u ~ CN(0, Ω) it is an upper bound on E[(uᴴAu)²].
double quadratic_fourth_moment(const HermitianMat& a, const HermitianMat& omega);

/// tr(AΩAΩ) + (tr AΩ)², the exact E[(uᴴAu)²] for proper complex u ~ CN(0, Ω).
double quadratic_fourth_moment_proper(const HermitianMat& a, const HermitianMat& omega);

/// Monte Carlo E[(uᴴAu)²] with u = Ω^{1/2} w, w ~ CN(0, I).
McEstimate quadratic_fourth_moment_mc(const HermitianMat& a, const HermitianMat& omega, std::size_t trials,
                                      std::uint64_t seed, Execution exec = Execution::Parallel);

/// Monte Carlo E[log₂ u], u ~ χ²(k), sampled as 2·Gamma(k/2, 1).
McEstimate chi2_log_mean_mc(int k, std::size_t trials, std::uint64_t seed, Execution exec = Execution::Parallel);

// ---------------------------------------------------------------------------
// Beamforming-gain sweep

struct GainRow {
    int m = 0;
    int tc = 0;
    int t_train = 0;
    McEstimate rate;
    double rate_over_log2m = 0.0;
};

struct GainSweep {
    std::vector<GainRow> rows;
    std::vector<std::string> warnings;  ///< skipped configurations
};

/// T_c = max(2, round(M^α)) for each M; scheme rate under the average-power
/// constraint at power p.
GainSweep sweep_gain(double alpha, double p, const std::vector<int>& m_list, std::size_t trials,
                     std::uint64_t seed);

// ---------------------------------------------------------------------------
// Full suite

struct SuiteOptions {
    std::size_t trials = 10'000;
    std::uint64_t seed = kDefaultSeed;
    std::vector<int> antennas{4, 8, 16};
    std::vector<int> coherences{4, 8};
    std::vector<double> powers{1.0, 10.0};
    std::size_t spectrum_runs = 10'000;
    std::size_t oracle_cases = 1'000;
};

/// Every estimator, quadratic-form, chi-square and oracle check, one result
/// per (check, encoder, M, T_c, P) with the worst t reported.
std::vector<LemmaCheckResult> run_lemma_suite(const SuiteOptions& options);

/// Max entrywise discrepancy between sequential updates and batch
/// conditioning over `cases` random adaptive problems (M ≤ 5, T ≤ 6).
double sequential_vs_batch_discrepancy(std::size_t cases, std::uint64_t seed);

}  // namespace misolab
