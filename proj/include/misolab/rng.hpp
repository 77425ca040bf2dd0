#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace misolab {

/// Philox4x32-10 block function. Exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Stateless 64-bit mixer built on the Philox block (key = a, counter = b).
std::uint64_t mix64(std::uint64_t a, std::uint64_t b) noexcept;

/**
 * Counter-based random stream.
 *
 * The master seed is the Philox key; the stream id occupies the upper half of
 * the counter and the draw index the lower half. Two streams with the same
 * (master_seed, stream_id) produce the same sequence regardless of what any
 * other stream did, so trials can run in any order or on any thread.
 */
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
        : master_seed_(master_seed), stream_id_(stream_id) {}

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint32_t next_u32() noexcept;
    std::uint64_t next_u64() noexcept;

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept;

    /// Standard real normal N(0, 1).
    double normal() noexcept;

    /// Circularly symmetric CN(0, 1): total variance 1, 1/2 per component.
    std::complex<double> complex_normal() noexcept;

    /// Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
    double gamma(double shape) noexcept;

private:
    void refill() noexcept;

    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffered_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace misolab
