#include "misolab/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "misolab/error.hpp"

namespace misolab {

void SchemeConfig::validate() const {
    channel.validate();
    if (t_train < 1 || t_train >= channel.coherence)
        throw Error(ErrorKind::DegenerateConfiguration, "need 1 <= T_tau < T_c");
    if (t_train > channel.antennas) throw Error(ErrorKind::InvalidInput, "need T_tau <= M");
    if (!(effective_power > 0.0) || !std::isfinite(effective_power))
        throw Error(ErrorKind::InvalidInput, "effective power must be positive");
}

int training_length(int m, int tc) {
    if (m < 2 || tc < 1) throw Error(ErrorKind::InvalidInput, "need M >= 2 and T_c >= 1");
    const int n = std::min(m, tc);
    const int t = static_cast<int>(std::ceil(n / std::log2(static_cast<double>(std::max(4, n)))));
    if (t >= tc)
        throw Error(ErrorKind::DegenerateConfiguration,
                    "training length " + std::to_string(t) + " leaves no data uses in T_c = " + std::to_string(tc));
    return t;
}

double effective_power(const ChannelConfig& channel) {
    return channel.constraint == Constraint::FourthMoment ? channel.kappa * channel.power / std::sqrt(3.0)
                                                          : channel.power;
}

SchemeConfig make_scheme_config(const ChannelConfig& channel) {
    channel.validate();
    SchemeConfig cfg{channel, training_length(channel.antennas, channel.coherence), effective_power(channel)};
    cfg.validate();
    return cfg;
}

ComplexVec pilot(int t, double power, int m) {
    if (t < 1 || t > m) throw Error(ErrorKind::InvalidInput, "pilot index must lie in [1, m]");
    ComplexVec x = ComplexVec::Zero(m);
    x[t - 1] = std::sqrt(power);
    return x;
}

ComplexVec scalar_mmse(const ComplexVec& y_train, double power) {
    return y_train * (std::sqrt(power) / (power + 1.0));
}

ComplexVec precode(const ComplexVec& h_hat_tau, double power, Complex s, int m) {
    if (h_hat_tau.size() > m) throw Error(ErrorKind::InvalidInput, "estimate longer than antenna count");
    const double norm = h_hat_tau.norm();
    if (norm == 0.0) throw Error(ErrorKind::ZeroEstimate, "cannot beamform along a zero estimate");
    ComplexVec x = ComplexVec::Zero(m);
    x.head(h_hat_tau.size()) = h_hat_tau.conjugate() * (std::sqrt(power) * s / norm);
    return x;
}

double combiner_beta(double g, double power) {
    const double sigma_sq = 1.0 / (power + 1.0);
    return power * g / (power * g + power * sigma_sq + 1.0);
}

double residual_mse(double g, double power) {
    const double noise = power / (power + 1.0) + 1.0;  // Pσ² + 1
    return power * g * noise / (power * g + noise);
}

SchemeTrace simulate_block(const SchemeConfig& cfg, RngStream& rng, const ChannelOverride& override) {
    cfg.validate();
    const int m = cfg.channel.antennas;
    const int tt = cfg.t_train;
    const double p = cfg.effective_power;

    SchemeTrace trace;
    trace.sigma_sq = 1.0 / (p + 1.0);

    for (;;) {
        BlockState block = override.h ? block_with_channel(cfg.channel, *override.h) : new_block(cfg.channel, rng);
        auto send = [&](const ComplexVec& x) {
            const double e = x.squaredNorm();
            trace.input_energy += e;
            trace.input_energy4 += e * e;
            return feedback(override.zero_noise ? transmit_with_noise(block, x, Complex{}) : transmit(block, x, rng));
        };
        trace.input_energy = 0.0;
        trace.input_energy4 = 0.0;

        trace.y_train.resize(tt);
        for (int t = 1; t <= tt; ++t) trace.y_train[t - 1] = send(pilot(t, p, m));
        trace.h_hat_tau = scalar_mmse(trace.y_train, p);
        trace.g = trace.h_hat_tau.squaredNorm();
        if (trace.g == 0.0) {
            if (override.h) throw Error(ErrorKind::ZeroEstimate, "injected channel gives a zero estimate");
            ++trace.resamples;
            continue;
        }

        trace.h_tau = block.h.head(tt);
        const ComplexVec err = trace.h_tau - trace.h_hat_tau;
        trace.interference = (err.transpose() * trace.h_hat_tau.conjugate()).value() / std::sqrt(trace.g);

        trace.data_y.clear();
        trace.data_s.clear();
        for (int t = tt; t < cfg.channel.coherence; ++t) {
            const Complex s = rng.complex_normal();
            trace.data_s.push_back(s);
            trace.data_y.push_back(send(precode(trace.h_hat_tau, p, s, m)));
        }
        return trace;
    }
}

}  // namespace misolab
