#pragma once

#include <cstdint>

namespace scrmlmc {

// Counter-based generator (Philox4x32-10). A stream is identified by
// (seed, domain, scenario, draw); distinct identifiers give statistically
// independent streams, so scenario-level work can run on any number of
// threads in any order without changing the numbers produced.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint32_t domain, std::uint32_t scenario,
              std::uint32_t draw) noexcept;

    std::uint32_t next_u32() noexcept;
    std::uint64_t next_u64() noexcept;

    // Uniform on the open interval (0,1).
    double uniform() noexcept;

    // Standard normal via the inverse CDF; consumes exactly one uniform.
    double normal() noexcept;

private:
    void refill() noexcept;

    std::uint32_t key_[2];
    std::uint32_t counter_[4];
    std::uint32_t block_[4];
    int cursor_;
};

// Inverse of the standard normal CDF (Wichura's PPND16 rational fits).
double inverse_normal_cdf(double p) noexcept;

}  // namespace scrmlmc
