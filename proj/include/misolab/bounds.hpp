#pragma once

#include <optional>
#include <vector>

#include "misolab/channel.hpp"

namespace misolab {

// All rates are in bits per channel use.

/// 2 log₂(4 + 3 min{M, T_c}) + log₂(1 + 4P): converse under the average-power constraint.
double upper_second(int m, int tc, double p);

/// log₂(1 + min{M + 2, √2 (T_c + 1)} κP): converse under the fourth-moment constraint.
double upper_fourth(int m, int tc, double p, double kappa);

/// Achievable rate of the training/beamforming scheme. Values below zero carry
/// no information and are reported as 0 with `vacuous` set.
struct LowerBound {
    double bits = 0.0;
    double raw_bits = 0.0;
    bool vacuous = false;
};

/// ((T_c - T_τ)/T_c) log₂(1 + P max{T_τ - 1, 1/2}/(2 + 1/P) - 1/max{T_τ, 2}).
LowerBound lower_second(int m, int tc, double p);

/// lower_second with P replaced by κP/√3.
LowerBound lower_fourth(int m, int tc, double p, double kappa);

/// Water-filling solution for perfect CSIT/CSIR with γ = ‖h‖² ~ Gamma(M, 1).
struct WaterfillResult {
    double bits = 0.0;
    double water_level = 0.0;     ///< μ; allocation is (μ - 1/γ)⁺
    double power_residual = 0.0;  ///< |E[(μ - 1/γ)⁺] - P| as seen by the quadrature
    int iterations = 0;
};

WaterfillResult ideal_waterfill(int m, double p);

/// E[(μ - 1/γ)⁺] for a given water level.
double waterfill_power(int m, double water_level);

/// E[log₂(μγ) 1{γ > 1/μ}] for a given water level.
double waterfill_rate(int m, double water_level);

/// E[log₂(1 + Pγ)]: the same channel with constant power.
double equal_power_rate(int m, double p);

/// log₂(1 + PM)
double ideal_asymptote(int m, double p);

/// Beamforming-gain curves over α = log T_c / log M.
struct GainCurve {
    Constraint constraint = Constraint::SecondMoment;
    std::vector<double> alpha_grid;
    std::vector<double> lower;         ///< min{α, 1}
    std::vector<double> upper_second;  ///< min{2α, 1}
    std::vector<double> exact_fourth;  ///< min{α, 1}
};

GainCurve gain_curve(const std::vector<double>& alpha_grid, Constraint constraint);

/// Every closed-form value for one operating point. Lower bounds are empty
/// when the configuration has no data phase.
struct BoundReport {
    int m = 0;
    int tc = 0;
    double p = 0.0;
    double kappa = 0.0;
    double alpha = 0.0;
    std::optional<int> t_train;
    double ideal_waterfill_bits = 0.0;
    double ideal_asymptote_bits = 0.0;
    double upper_second_bits = 0.0;
    double upper_fourth_bits = 0.0;
    std::optional<LowerBound> lower_second;
    std::optional<LowerBound> lower_fourth;
};

BoundReport make_bound_report(int m, int tc, double p, double kappa);

}  // namespace misolab
