#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace gjbd {

/// Seeded source of standard normal variates: std::mt19937_64 feeding the
/// Box-Muller transform. Uniforms take the top 53 bits of each draw, so the
/// stream is identical on every platform with IEEE doubles and a conforming libm.
class Rng
{
 public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal();

 private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

}  // namespace gjbd
