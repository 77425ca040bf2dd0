#include "misolab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "misolab/error.hpp"
#include "misolab/numerics.hpp"
#include "misolab/scheme.hpp"

namespace misolab {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidInput, std::string(name) + " must be positive");
}

void require_link(int m, int tc) {
    if (m < 2) throw Error(ErrorKind::InvalidInput, "need M >= 2");
    if (tc < 1) throw Error(ErrorKind::InvalidInput, "need T_c >= 1");
}

LowerBound training_lower_bound(int m, int tc, double p) {
    const int tt = training_length(m, tc);
    const double gain = p * std::max(tt - 1.0, 0.5) / (2.0 + 1.0 / p);
    const double raw = static_cast<double>(tc - tt) / tc * std::log2(1.0 + gain - 1.0 / std::max(tt, 2));
    return LowerBound{std::max(raw, 0.0), raw, raw < 0.0};
}

constexpr double kPowerTolerance = 1e-11;
constexpr int kMaxBisections = 200;

}  // namespace

double upper_second(int m, int tc, double p) {
    require_link(m, tc);
    require_positive(p, "P");
    return 2.0 * std::log2(4.0 + 3.0 * std::min(m, tc)) + std::log2(1.0 + 4.0 * p);
}

double upper_fourth(int m, int tc, double p, double kappa) {
    require_link(m, tc);
    require_positive(p, "P");
    require_positive(kappa, "kappa");
    const double array_gain = std::min<double>(m + 2.0, std::numbers::sqrt2 * (tc + 1.0));
    return std::log2(1.0 + array_gain * kappa * p);
}

LowerBound lower_second(int m, int tc, double p) {
    require_positive(p, "P");
    return training_lower_bound(m, tc, p);
}

LowerBound lower_fourth(int m, int tc, double p, double kappa) {
    require_positive(p, "P");
    require_positive(kappa, "kappa");
    return training_lower_bound(m, tc, kappa * p / std::sqrt(3.0));
}

double waterfill_power(int m, double water_level) {
    const Support support = gamma_effective_support(m);
    const double lo = std::max(1.0 / water_level, support.lo);
    if (lo >= support.hi) return 0.0;
    return integrate([&](double g) { return (water_level - 1.0 / g) * gamma_density(g, m); }, lo, support.hi);
}

double waterfill_rate(int m, double water_level) {
    const Support support = gamma_effective_support(m);
    const double lo = std::max(1.0 / water_level, support.lo);
    if (lo >= support.hi) return 0.0;
    return integrate([&](double g) { return std::log2(water_level * g) * gamma_density(g, m); }, lo, support.hi);
}

WaterfillResult ideal_waterfill(int m, double p) {
    if (m < 1) throw Error(ErrorKind::InvalidInput, "need M >= 1");
    require_positive(p, "P");

    // power(μ) is continuous and non-decreasing; bracket then bisect.
    double lo = 1.0 / gamma_effective_support(m).hi;
    double hi = p + 1.0;
    while (waterfill_power(m, hi) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12 * (p + 1.0)) throw Error(ErrorKind::NumericalFailure, "water level bracket did not close");
    }

    WaterfillResult result;
    for (int it = 1; it <= kMaxBisections; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double excess = waterfill_power(m, mid) - p;
        result.iterations = it;
        if (std::abs(excess) < kPowerTolerance || hi - lo < 1e-15 * hi) {
            result.water_level = mid;
            result.power_residual = std::abs(excess);
            result.bits = waterfill_rate(m, mid);
            return result;
        }
        (excess < 0.0 ? lo : hi) = mid;
    }
    throw Error(ErrorKind::NumericalFailure, "water-filling bisection did not converge");
}

double equal_power_rate(int m, double p) {
    if (m < 1) throw Error(ErrorKind::InvalidInput, "need M >= 1");
    require_positive(p, "P");
    const Support support = gamma_effective_support(m);
    return integrate([&](double g) { return std::log2(1.0 + p * g) * gamma_density(g, m); }, support.lo, support.hi);
}

double ideal_asymptote(int m, double p) {
    if (m < 1) throw Error(ErrorKind::InvalidInput, "need M >= 1");
    require_positive(p, "P");
    return std::log2(1.0 + p * m);
}

GainCurve gain_curve(const std::vector<double>& alpha_grid, Constraint constraint) {
    GainCurve curve;
    curve.constraint = constraint;
    curve.alpha_grid = alpha_grid;
    for (double a : alpha_grid) {
        if (!(a >= 0.0)) throw Error(ErrorKind::Domain, "alpha must be non-negative");
        curve.lower.push_back(std::min(a, 1.0));
        curve.upper_second.push_back(std::min(2.0 * a, 1.0));
        curve.exact_fourth.push_back(std::min(a, 1.0));
    }
    return curve;
}

BoundReport make_bound_report(int m, int tc, double p, double kappa) {
    require_link(m, tc);
    require_positive(p, "P");
    require_positive(kappa, "kappa");

    BoundReport r;
    r.m = m;
    r.tc = tc;
    r.p = p;
    r.kappa = kappa;
    r.alpha = std::log(static_cast<double>(tc)) / std::log(static_cast<double>(m));
    r.ideal_waterfill_bits = ideal_waterfill(m, p).bits;
    r.ideal_asymptote_bits = ideal_asymptote(m, p);
    r.upper_second_bits = upper_second(m, tc, p);
    r.upper_fourth_bits = upper_fourth(m, tc, p, kappa);
    try {
        r.t_train = training_length(m, tc);
        r.lower_second = lower_second(m, tc, p);
        r.lower_fourth = lower_fourth(m, tc, p, kappa);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateConfiguration) throw;
    }
    return r;
}

}  // namespace misolab
